use std::fmt::Write;

use super::space::Lts;

impl Lts {
    /// Aldebaran format: `des (initial, #transitions, #states)` then one
    /// `(src,"label",dst)` line per transition.
    pub fn to_aut(&self) -> String {
        let mut out = format!("des ({},{},{})\n", self.initial(), self.num_transitions(), self.num_states());
        for (s, succ) in self.transitions.iter().enumerate() {
            for (a, t) in succ {
                let _ = writeln!(out, "({s},\"{a}\",{t})");
            }
        }
        out
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph lts {\n  node [shape=circle];\n");
        let _ = writeln!(out, "  init [shape=point];\n  init -> s{};", self.initial());
        for (s, term) in self.states.iter().enumerate() {
            let label = term.to_string().replace('\\', "\\\\").replace('"', "\\\"");
            let style = if self.expanded[s] { "" } else { ", style=dashed" };
            let _ = writeln!(out, "  s{s} [label=\"{s}\", tooltip=\"{label}\"{style}];");
        }
        for (s, succ) in self.transitions.iter().enumerate() {
            for (a, t) in succ {
                let _ = writeln!(out, "  s{s} -> s{t} [label=\"{a}\"];");
            }
        }
        out.push_str("}\n");
        out
    }

    /// Human-readable dump: summary, state table, transitions.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "states: {}\ntransitions: {}\ninitial: {}\ncomplete: {}",
            self.num_states(),
            self.num_transitions(),
            self.initial(),
            self.complete
        );
        out.push_str("\n[states]\n");
        for (s, term) in self.states.iter().enumerate() {
            let mark = if self.expanded[s] { "" } else { "  (unexplored)" };
            let _ = writeln!(out, "{s}: {term}{mark}");
        }
        out.push_str("\n[transitions]\n");
        for (s, succ) in self.transitions.iter().enumerate() {
            for (a, t) in succ {
                let _ = writeln!(out, "{s} --{a}--> {t}");
            }
        }
        out
    }
}
