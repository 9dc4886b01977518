pub mod algebra;
pub mod fo;
pub mod hilbert;
mod grid;
pub mod prop;
pub mod random;
pub mod swap;
pub mod syntax;
pub mod twist;

/// Outcome of a consequence check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<W> {
    Holds,
    Countermodel(W),
}

impl<W> Verdict<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn countermodel(&self) -> Option<&W> {
        match self {
            Verdict::Holds => None,
            Verdict::Countermodel(w) => Some(w),
        }
    }
}
