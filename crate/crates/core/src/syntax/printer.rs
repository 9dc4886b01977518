use std::fmt;

use super::{Formula, Term};

// Binding strength, loosest first. Quantifiers never appear unparenthesised
// as an operand, since their bodies extend as far right as possible.
const IMP: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const UNARY: u8 = 4;
const ATOMIC: u8 = 5;

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Imp(..) => IMP,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        Formula::Neg(_) | Formula::Cons(_) => UNARY,
        Formula::Atom(..) | Formula::Eq(..) => ATOMIC,
        Formula::Forall(..) | Formula::Exists(..) => 0,
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) | Term::Const(x) => write!(f, "{x}"),
            Term::Domain(k) => write!(f, "@{k}"),
            Term::App(g, args) => {
                write!(f, "{g}(")?;
                write_list(f, args)?;
                write!(f, ")")
            }
        }
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, args: &[Term]) -> fmt::Result {
    for (i, t) in args.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{t}")?;
    }
    Ok(())
}

fn operand(f: &mut fmt::Formatter<'_>, sub: &Formula, parens: bool) -> fmt::Result {
    if parens || prec(sub) == 0 {
        write!(f, "({sub})")
    } else {
        write!(f, "{sub}")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(p, args) => {
                write!(f, "{p}")?;
                if !args.is_empty() {
                    write!(f, "(")?;
                    write_list(f, args)?;
                    write!(f, ")")?;
                }
                Ok(())
            }
            Formula::Eq(a, b) => write!(f, "{a} = {b}"),
            Formula::Neg(a) => {
                write!(f, "~")?;
                operand(f, a, matches!(**a, Formula::Eq(..)) || prec(a) < UNARY)
            }
            Formula::Cons(a) => {
                write!(f, "*")?;
                operand(f, a, matches!(**a, Formula::Eq(..)) || prec(a) < UNARY)
            }
            // & and | associate to the left, -> to the right.
            Formula::And(a, b) => {
                operand(f, a, prec(a) < AND)?;
                write!(f, " & ")?;
                operand(f, b, prec(b) <= AND)
            }
            Formula::Or(a, b) => {
                operand(f, a, prec(a) < OR)?;
                write!(f, " | ")?;
                operand(f, b, prec(b) <= OR)
            }
            Formula::Imp(a, b) => {
                operand(f, a, prec(a) <= IMP)?;
                write!(f, " -> ")?;
                operand(f, b, prec(b) < IMP)
            }
            Formula::Forall(x, body) => write!(f, "forall {x}. {body}"),
            Formula::Exists(x, body) => write!(f, "exists {x}. {body}"),
        }
    }
}
