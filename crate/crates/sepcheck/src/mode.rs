//! Separability modes and their algebra.
//!
//! A mode is a demand placed on a type by its context: `Ind` demands
//! nothing, `Sep` demands that the type's values are either all floats
//! or all non-floats, and `Deepsep` extends that demand to every
//! syntactic sub-component of the type. The three modes form a chain
//! `Ind < Sep < Deepsep`.

use std::fmt;

/// Separability mode. Totally ordered: `Ind < Sep < Deepsep`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    /// Indifferent: no separability constraint.
    Ind,
    /// Separable: all values are floats, or none are.
    Sep,
    /// Deeply separable: the type and all its sub-components are separable.
    Deepsep,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Ind, Mode::Sep, Mode::Deepsep];

    /// Mode composition `self ∘ other`: the demand on a sub-expression
    /// when the surrounding expression sits in a position of mode `self`
    /// and the immediate former maps its argument at mode `other`.
    ///
    /// `Ind ∘ m = Ind`, `Sep ∘ m = m`, `Deepsep ∘ m = Deepsep`.
    pub fn compose(self, other: Mode) -> Mode {
        match self {
            Mode::Ind => Mode::Ind,
            Mode::Sep => other,
            Mode::Deepsep => Mode::Deepsep,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Ind => "Ind",
            Mode::Sep => "Sep",
            Mode::Deepsep => "Deepsep",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_the_three_point_chain() {
        assert!(Mode::Ind < Mode::Sep);
        assert!(Mode::Sep < Mode::Deepsep);
        assert_eq!(Mode::Ind.max(Mode::Deepsep), Mode::Deepsep);
        assert_eq!(Mode::Sep.min(Mode::Ind), Mode::Ind);
    }

    #[test]
    fn compose_table() {
        assert_eq!(Mode::Ind.compose(Mode::Sep), Mode::Ind);
        assert_eq!(Mode::Sep.compose(Mode::Deepsep), Mode::Deepsep);
        assert_eq!(Mode::Deepsep.compose(Mode::Ind), Mode::Deepsep);
    }

    #[test]
    fn compose_is_associative_with_sep_identity() {
        for a in Mode::ALL {
            assert_eq!(Mode::Sep.compose(a), a);
            assert_eq!(a.compose(Mode::Sep), a);
            for b in Mode::ALL {
                for c in Mode::ALL {
                    assert_eq!(a.compose(b).compose(c), a.compose(b.compose(c)));
                }
            }
        }
    }

    #[test]
    fn compose_is_monotone_in_each_argument() {
        for a in Mode::ALL {
            for b in Mode::ALL {
                for c in Mode::ALL {
                    if a <= b {
                        assert!(a.compose(c) <= b.compose(c));
                        assert!(c.compose(a) <= c.compose(b));
                    }
                }
            }
        }
    }
}
