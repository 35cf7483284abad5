use std::fmt::{self, Write};

use super::{Kind, NameSet, Term};

/// Context levels: 0 = parallel operand, 1 = summand, 2 = prefix body.
fn write_term(f: &mut impl Write, t: &Term, level: u8) -> fmt::Result {
    match t.kind() {
        Kind::Nil => f.write_char('0'),
        Kind::Var(x) => write!(f, "{x}"),
        Kind::Prefix(a, body) => {
            write!(f, "{a}.")?;
            write_term(f, body, 2)
        }
        Kind::Choice(l, r) => {
            if level > 1 {
                f.write_char('(')?;
            }
            write_term(f, l, 1)?;
            f.write_str(" + ")?;
            write_term(f, r, 2)?;
            if level > 1 {
                f.write_char(')')?;
            }
            Ok(())
        }
        Kind::Par(sync, l, r) => {
            if level > 0 {
                f.write_char('(')?;
            }
            write_term(f, l, 0)?;
            write!(f, " |[{}]| ", join(sync))?;
            write_term(f, r, 1)?;
            if level > 0 {
                f.write_char(')')?;
            }
            Ok(())
        }
        Kind::Hide(hidden, body) => {
            write!(f, "hide {{{}}} in ", join(hidden))?;
            write_term(f, body, 2)
        }
        Kind::Rename(rel, body) => {
            let pairs: Vec<String> = rel.iter().map(|(a, b)| format!("{a}->{b}")).collect();
            write!(f, "rename {{{}}} in ", pairs.join(","))?;
            write_term(f, body, 2)
        }
        Kind::Rec(x, spec) => {
            write!(f, "<{x} | ")?;
            for (i, (y, body)) in spec.equations().enumerate() {
                if i > 0 {
                    f.write_str("; ")?;
                }
                write!(f, "{y} = ")?;
                write_term(f, body, 0)?;
            }
            f.write_char('>')
        }
    }
}

pub(crate) fn join(set: &NameSet) -> String {
    set.iter().map(|n| n.as_str()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, self, 0)
    }
}

impl fmt::Display for super::RecSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (x, body) in self.equations() {
            writeln!(f, "{x} = {body};")?;
        }
        Ok(())
    }
}
