//! The `ccspt` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::fttrace::{
    ft_enumerate, ft_equiv, ft_preorder, rft_equiv, rft_preorder, rooted_elements, rooted_member, trace_equiv,
    CheckOptions, Mode, RootedElement, Trace, Verdict,
};
use crate::laws::{run_laws, summarise, LawBudget, LawId};
use crate::sos::{bisimilar, explore_all};
use crate::term::{parse_context, parse_spec, resolve_process, Name, NameSet, RecSpec, Term};
use crate::testing::{distinguish, may_pass, replay_context, safety_holds};
use crate::{Budget, Error};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "ccspt",
    version,
    about = "Transition systems, failure traces, laws and tests for CCSP with time-outs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: Global,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Bound on trace length, in symbols.
    #[arg(long, global = true, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    pub depth: u64,
    #[arg(long, global = true, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_states: u64,
    /// Working alphabet, e.g. `a,b,c`; defaults to the sorts of the processes.
    #[arg(long, global = true, value_delimiter = ',')]
    pub alphabet: Option<Vec<String>>,
    /// Compare complete languages instead of bounding the depth.
    #[arg(long, global = true)]
    pub exact: bool,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Specification file whose equation names may be used as processes.
    #[arg(long, global = true)]
    pub spec: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Export {
    Aut,
    Dot,
    Json,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelationArg {
    Bisim,
    Trace,
    Ft,
    Rft,
    FtPre,
    RftPre,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Closedness, guardedness, time-guardedness and sort of every equation.
    Check { file: PathBuf },
    /// Explore a process and export its transition system.
    Lts {
        process: String,
        #[arg(long, value_enum, default_value_t = Export::Aut)]
        export: Export,
        /// Write the export here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare two processes.
    Equiv {
        left: String,
        right: String,
        #[arg(long, value_enum, default_value_t = RelationArg::Ft)]
        relation: RelationArg,
    },
    /// Build a test that separates two processes.
    Distinguish {
        left: String,
        right: String,
        #[arg(long, default_value = "b")]
        bad: String,
        /// Replay this context (hole `_`) instead of synthesising one.
        #[arg(long)]
        context: Option<String>,
    },
    /// Canonical safety property, or may testing against a given test.
    Safety {
        process: String,
        #[arg(long, default_value = "b")]
        bad: String,
        /// A test process; with it the command reports whether the process may pass.
        #[arg(long)]
        test: Option<String>,
        /// Success action of the test.
        #[arg(long, default_value = "w")]
        omega: String,
    },
    /// Enumerate partial failure traces, or decide membership of one.
    Fft {
        process: String,
        #[arg(long)]
        member: Option<String>,
        /// Rooted elements instead of plain traces.
        #[arg(long)]
        rooted: bool,
    },
    /// Check sampled instances of the laws.
    Laws {
        #[arg(long, default_value_t = 20)]
        samples: u64,
        /// Restrict to these laws.
        #[arg(long, value_delimiter = ',')]
        law: Option<Vec<String>>,
    },
}

/// Output plus exit code of one command.
struct Outcome {
    code: i32,
    text: String,
    json: serde_json::Value,
}

impl Outcome {
    fn new(code: i32, text: impl Into<String>, json: serde_json::Value) -> Self {
        Outcome { code, text: text.into(), json }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::IncompleteStateSpace { .. } | Error::AlphabetTooLarge { .. } | Error::UnguardedRecursion { .. } => {
            EXIT_BUDGET
        }
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (program name first), runs the command and writes its
/// report to `out`; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let format = cli.global.format;
    match execute(&cli) {
        Ok(o) => {
            let _ = match format {
                Format::Text => writeln!(out, "{}", o.text.trim_end()),
                Format::Json => writeln!(out, "{}", o.json),
            };
            o.code
        }
        Err(e) => {
            let code = exit_code(&e);
            let _ = match format {
                Format::Text => writeln!(err, "error: {e}"),
                Format::Json => writeln!(out, "{}", json!({ "error": e.to_string(), "exit": code })),
            };
            code
        }
    }
}

/// Runs on a thread with a large stack: explored terms can nest deeply.
pub fn main_from_env() -> i32 {
    std::thread::Builder::new()
        .stack_size(1 << 30)
        .spawn(|| run(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr()))
        .expect("spawn worker thread")
        .join()
        .unwrap_or(101)
}

fn budget(g: &Global) -> Budget {
    Budget::default().with_max_states(g.max_states as usize)
}

fn options(g: &Global) -> CheckOptions {
    CheckOptions {
        mode: if g.exact { Mode::Exact } else { Mode::Bounded(g.depth as usize) },
        alphabet: g.alphabet.as_ref().map(|v| v.iter().map(|n| Name::new(n.trim())).collect()),
        budget: budget(g),
    }
}

fn load_spec(g: &Global) -> crate::Result<Arc<RecSpec>> {
    match &g.spec {
        None => Ok(Arc::new(RecSpec::new())),
        Some(p) => Ok(Arc::new(parse_spec(&read(p)?)?)),
    }
}

fn read(p: &PathBuf) -> crate::Result<String> {
    std::fs::read_to_string(p).map_err(|e| Error::Invalid(format!("cannot read {}: {e}", p.display())))
}

fn process(text: &str, spec: &Arc<RecSpec>) -> crate::Result<Term> {
    resolve_process(text, spec)
}

fn execute(cli: &Cli) -> crate::Result<Outcome> {
    let g = &cli.global;
    match &cli.command {
        Command::Check { file } => cmd_check(file),
        Command::Lts { process: p, export, out } => cmd_lts(g, p, *export, out.as_ref()),
        Command::Equiv { left, right, relation } => cmd_equiv(g, left, right, *relation),
        Command::Distinguish { left, right, bad, context } => cmd_distinguish(g, left, right, bad, context.as_deref()),
        Command::Safety { process: p, bad, test, omega } => cmd_safety(g, p, bad, test.as_deref(), omega),
        Command::Fft { process: p, member, rooted } => cmd_fft(g, p, member.as_deref(), *rooted),
        Command::Laws { samples, law } => cmd_laws(g, *samples, law.as_deref()),
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cmd_check(file: &PathBuf) -> crate::Result<Outcome> {
    let spec = Arc::new(parse_spec(&read(file)?)?);
    let unbound = spec.unbound_variables();
    let guarded = spec.is_guarded();
    let timed = spec.is_time_guarded();
    let mut text = format!(
        "equations: {}\nclosed: {}\nguarded: {}\ntime-guarded: {}\n",
        spec.len(),
        yes(unbound.is_empty()),
        yes(guarded),
        yes(timed)
    );
    if !unbound.is_empty() {
        text += &format!("unbound: {}\n", unbound.iter().map(|n| n.as_str()).collect::<Vec<_>>().join(","));
    }
    let mut sorts = serde_json::Map::new();
    for x in spec.vars() {
        let t = Term::rec(x.clone(), spec.clone());
        let s: Vec<String> = t.sort().iter().map(|n| n.to_string()).collect();
        text += &format!("sort {x}: {{{}}}\n", s.join(","));
        sorts.insert(x.to_string(), json!(s));
    }
    let code = if unbound.is_empty() && guarded { EXIT_OK } else { EXIT_VIOLATED };
    let js = json!({
        "equations": spec.len(),
        "closed": unbound.is_empty(),
        "unbound": unbound.iter().map(|n| n.to_string()).collect::<Vec<_>>(),
        "guarded": guarded,
        "time_guarded": timed,
        "sorts": sorts,
    });
    Ok(Outcome::new(code, text, js))
}

fn cmd_lts(g: &Global, p: &str, export: Export, out: Option<&PathBuf>) -> crate::Result<Outcome> {
    let spec = load_spec(g)?;
    let p = process(p, &spec)?;
    let lts = explore_all(std::slice::from_ref(&p), budget(g))?;
    let body = match export {
        Export::Aut => lts.to_aut(),
        Export::Dot => lts.to_dot(),
        Export::Text => lts.to_text(),
        Export::Json => serde_json::to_string_pretty(&lts).expect("lts serialises"),
    };
    let code = if lts.complete { EXIT_OK } else { EXIT_BUDGET };
    let summary = json!({
        "states": lts.num_states(),
        "transitions": lts.num_transitions(),
        "complete": lts.complete,
    });
    let text = match out {
        Some(path) => {
            std::fs::write(path, &body).map_err(|e| Error::Invalid(format!("cannot write {}: {e}", path.display())))?;
            format!(
                "wrote {}\nstates: {}\ntransitions: {}\ncomplete: {}",
                path.display(),
                lts.num_states(),
                lts.num_transitions(),
                lts.complete
            )
        }
        None if export == Export::Text => body,
        None => format!("{body}# complete: {}", lts.complete),
    };
    Ok(Outcome::new(code, text, summary))
}

fn verdict_outcome(v: &Verdict, equal_word: &str, unequal_word: &str) -> Outcome {
    let text = match (&v.witness, v.mode) {
        (Some(w), _) => {
            let side = if w.side == crate::fttrace::Side::Left { "left" } else { "right" };
            format!("{unequal_word}, witness: {} (only {side})", w.element)
        }
        (None, Mode::Bounded(k)) => format!("{equal_word} up to depth {k}"),
        (None, Mode::Exact) => equal_word.to_string(),
    };
    let code = if v.holds { EXIT_OK } else { EXIT_VIOLATED };
    Outcome::new(code, text, serde_json::to_value(v).expect("verdict serialises"))
}

fn cmd_equiv(g: &Global, left: &str, right: &str, rel: RelationArg) -> crate::Result<Outcome> {
    let spec = load_spec(g)?;
    let (p, q) = (process(left, &spec)?, process(right, &spec)?);
    let opts = options(g);
    let v = match rel {
        RelationArg::Bisim => {
            let eq = bisimilar(&p, &q, budget(g))?;
            let text = if eq { "equal" } else { "inequal" };
            return Ok(Outcome::new(
                if eq { EXIT_OK } else { EXIT_VIOLATED },
                text,
                json!({ "relation": "bisim", "holds": eq }),
            ));
        }
        RelationArg::Trace => trace_equiv(&p, &q, &opts)?,
        RelationArg::Ft => ft_equiv(&p, &q, &opts)?,
        RelationArg::Rft => rft_equiv(&p, &q, &opts)?,
        RelationArg::FtPre => ft_preorder(&p, &q, &opts)?,
        RelationArg::RftPre => rft_preorder(&p, &q, &opts)?,
    };
    Ok(match rel {
        RelationArg::FtPre | RelationArg::RftPre => verdict_outcome(&v, "holds", "fails"),
        _ => verdict_outcome(&v, "equal", "inequal"),
    })
}

fn cmd_distinguish(g: &Global, left: &str, right: &str, bad: &str, context: Option<&str>) -> crate::Result<Outcome> {
    let spec = load_spec(g)?;
    let (p, q) = (process(left, &spec)?, process(right, &spec)?);
    let bad = Name::new(bad);
    if let Some(c) = context {
        let ctx = parse_context(c)?;
        let (vp, vq) = replay_context(&ctx, &p, &q, &bad, &budget(g))?;
        let text = format!("context: {ctx}\nleft: safety({bad}) {vp}\nright: safety({bad}) {vq}");
        let code = if vp.holds == vq.holds { EXIT_OK } else { EXIT_VIOLATED };
        return Ok(Outcome::new(code, text, json!({ "context": ctx, "left": vp, "right": vq })));
    }
    let d = distinguish(&p, &q, &bad, &options(g))?;
    let code = match d {
        crate::testing::Distinction::Distinguished(_) => EXIT_VIOLATED,
        _ => EXIT_OK,
    };
    Ok(Outcome::new(code, d.to_string(), serde_json::to_value(&d).expect("report serialises")))
}

fn cmd_safety(g: &Global, p: &str, bad: &str, test: Option<&str>, omega: &str) -> crate::Result<Outcome> {
    let spec = load_spec(g)?;
    let p = process(p, &spec)?;
    if let Some(t) = test {
        let t = process(t, &spec)?;
        let omega = Name::new(omega);
        if p.sort().contains(&omega) {
            return Err(Error::BadActionNotFresh(omega.to_string()));
        }
        let pass = may_pass(&p, &t, &omega, &budget(g))?;
        let text = if pass { "may pass" } else { "cannot pass" };
        return Ok(Outcome::new(
            if pass { EXIT_OK } else { EXIT_VIOLATED },
            text,
            json!({ "test": t, "omega": omega.as_str(), "may_pass": pass }),
        ));
    }
    let v = safety_holds(&p, &Name::new(bad), &budget(g))?;
    let code = if v.holds { EXIT_OK } else { EXIT_VIOLATED };
    Ok(Outcome::new(code, v.to_string(), serde_json::to_value(&v).expect("verdict serialises")))
}

fn cmd_fft(g: &Global, p: &str, member: Option<&str>, rooted: bool) -> crate::Result<Outcome> {
    let spec = load_spec(g)?;
    let p = process(p, &spec)?;
    let b = budget(g);
    if let Some(m) = member {
        let e: RootedElement = m.parse()?;
        let found = match (&e, rooted) {
            (RootedElement::Plain(t), false) => crate::fttrace::ft_member(&p, t, &b)?,
            _ => rooted_member(&p, &e, &b)?,
        };
        return Ok(Outcome::new(
            if found { EXIT_OK } else { EXIT_VIOLATED },
            if found { "true" } else { "false" },
            json!({ "element": e.to_string(), "member": found }),
        ));
    }
    let sigma: NameSet = match &g.alphabet {
        Some(v) => v.iter().map(|n| Name::new(n.trim())).collect(),
        None => p.sort(),
    };
    let k = g.depth as usize;
    let lines: Vec<String> = if rooted {
        rooted_elements(&p, k, &sigma, &b)?.iter().map(|e| e.to_string()).collect()
    } else {
        let mut ts: Vec<Trace> = ft_enumerate(&p, k, &sigma, &b)?.into_iter().collect();
        ts.sort_by(|x, y| x.shortlex_cmp(y));
        ts.iter().map(|t| t.to_string()).collect()
    };
    let header = format!(
        "# alphabet {{{}}} depth {k} count {}",
        sigma.iter().map(|n| n.as_str()).collect::<Vec<_>>().join(","),
        lines.len()
    );
    let text = std::iter::once(header).chain(lines.iter().cloned()).collect::<Vec<_>>().join("\n");
    Ok(Outcome::new(
        EXIT_OK,
        text,
        json!({ "alphabet": sigma.iter().map(|n| n.to_string()).collect::<Vec<_>>(), "depth": k, "elements": lines }),
    ))
}

fn cmd_laws(g: &Global, samples: u64, laws: Option<&[String]>) -> crate::Result<Outcome> {
    let ids: Vec<LawId> = match laws {
        Some(v) => v.iter().map(|s| s.parse()).collect::<crate::Result<_>>()?,
        None => LawId::ALL.to_vec(),
    };
    let lb = LawBudget { depth: g.depth as usize, budget: budget(g), ..LawBudget::default() };
    let reports = run_laws(&ids, samples, g.seed, &lb)?;
    let summary = summarise(&reports);
    let mut text = format!("seed {} samples {} depth {}\n", g.seed, samples, lb.depth);
    text += &format!("{:<22} {:<10} {:>5} {:>5} {:>7}  {}\n", "law", "relation", "pass", "fail", "budget", "status");
    for s in &summary {
        let status = match (s.ok, s.expected) {
            (true, crate::laws::Outcome::Fail) => "ok (fails as expected)",
            (true, _) => "ok",
            (false, _) => "UNEXPECTED",
        };
        text += &format!(
            "{:<22} {:<10} {:>5} {:>5} {:>7}  {status}\n",
            s.law.name(),
            s.relation.to_string(),
            s.pass,
            s.fail,
            s.budget_exceeded
        );
    }
    for r in reports.iter().filter(|r| !r.as_expected()) {
        text += &format!("unexpected: {}\n", r.to_json());
    }
    let all_ok = summary.iter().all(|s| s.ok);
    let budget_hit = reports.iter().any(|r| r.outcome == crate::laws::Outcome::BudgetExceeded);
    let code = if all_ok {
        EXIT_OK
    } else if budget_hit && reports.iter().all(|r| r.as_expected() || r.outcome == crate::laws::Outcome::BudgetExceeded)
    {
        EXIT_BUDGET
    } else {
        EXIT_VIOLATED
    };
    let js = json!({ "seed": g.seed, "samples": samples, "summary": summary, "reports": reports });
    Ok(Outcome::new(code, text, js))
}
