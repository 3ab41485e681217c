//! Three-valued verdicts for bounded checks.

use std::fmt;

/// Verdict of a bounded semantic check. `Unknown` means a bound (fuel or
/// enumeration depth) was exhausted before the check could be decided; it is
/// never a silent `No`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TriBool {
    Yes,
    No,
    Unknown,
}

impl TriBool {
    pub fn from_bool(b: bool) -> TriBool {
        if b {
            TriBool::Yes
        } else {
            TriBool::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == TriBool::Yes
    }

    pub fn is_no(self) -> bool {
        self == TriBool::No
    }

    /// Three-valued conjunction: `No` dominates, then `Unknown`.
    pub fn and(self, other: TriBool) -> TriBool {
        use TriBool::*;
        match (self, other) {
            (No, _) | (_, No) => No,
            (Unknown, _) | (_, Unknown) => Unknown,
            (Yes, Yes) => Yes,
        }
    }

    /// Conjunction over an iterator, short-circuiting on `No`.
    pub fn all<I: IntoIterator<Item = TriBool>>(iter: I) -> TriBool {
        let mut acc = TriBool::Yes;
        for t in iter {
            if t == TriBool::No {
                return TriBool::No;
            }
            acc = acc.and(t);
        }
        acc
    }

    /// Weakens a `Yes` to `Unknown`; `No` stays definite.
    pub fn weaken_if(self, incomplete: bool) -> TriBool {
        if incomplete && self == TriBool::Yes {
            TriBool::Unknown
        } else {
            self
        }
    }
}

impl fmt::Display for TriBool {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TriBool::Yes => write!(f, "yes"),
            TriBool::No => write!(f, "no"),
            TriBool::Unknown => write!(f, "unknown"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::TriBool::*;

    #[test]
    fn and_no_dominates_unknown() {
        assert_eq!(No.and(Unknown), No);
        assert_eq!(Unknown.and(No), No);
        assert_eq!(Unknown.and(Yes), Unknown);
        assert_eq!(Yes.and(Yes), Yes);
    }

    #[test]
    fn all_short_circuits() {
        assert_eq!(super::TriBool::all([Yes, Unknown, No]), No);
        assert_eq!(super::TriBool::all([Yes, Unknown]), Unknown);
        assert_eq!(super::TriBool::all([]), Yes);
    }
}
