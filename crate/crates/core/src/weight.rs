//! Edge weights and the extended reals used for distances and cycle weights.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

/// Edge weight. Always finite.
pub type Weight = f64;

/// A weight extended with `-inf` and `+inf`.
///
/// `NegInf` is the minimum cycle weight of a graph with a negative cycle and
/// `PosInf` stands for "no path" or "no cycle".
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtWeight {
    NegInf,
    Finite(Weight),
    PosInf,
}

impl ExtWeight {
    pub const ZERO: ExtWeight = ExtWeight::Finite(0.0);

    /// Maps `f64::INFINITY` / `f64::NEG_INFINITY` to the matching variant.
    pub fn from_f64(x: f64) -> Self {
        debug_assert!(!x.is_nan());
        if x == f64::INFINITY {
            ExtWeight::PosInf
        } else if x == f64::NEG_INFINITY {
            ExtWeight::NegInf
        } else {
            ExtWeight::Finite(x)
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            ExtWeight::NegInf => f64::NEG_INFINITY,
            ExtWeight::Finite(x) => x,
            ExtWeight::PosInf => f64::INFINITY,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtWeight::Finite(_))
    }

    pub fn finite(self) -> Option<Weight> {
        match self {
            ExtWeight::Finite(x) => Some(x),
            _ => None,
        }
    }

    fn rank(self) -> u8 {
        match self {
            ExtWeight::NegInf => 0,
            ExtWeight::Finite(_) => 1,
            ExtWeight::PosInf => 2,
        }
    }
}

impl Eq for ExtWeight {}

impl PartialOrd for ExtWeight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtWeight {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtWeight::Finite(a), ExtWeight::Finite(b)) => a.total_cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

/// `-inf + +inf` is treated as `-inf`; callers never rely on it.
impl Add for ExtWeight {
    type Output = ExtWeight;

    fn add(self, rhs: ExtWeight) -> ExtWeight {
        match (self, rhs) {
            (ExtWeight::NegInf, _) | (_, ExtWeight::NegInf) => ExtWeight::NegInf,
            (ExtWeight::PosInf, _) | (_, ExtWeight::PosInf) => ExtWeight::PosInf,
            (ExtWeight::Finite(a), ExtWeight::Finite(b)) => ExtWeight::Finite(a + b),
        }
    }
}

impl Add<Weight> for ExtWeight {
    type Output = ExtWeight;

    fn add(self, rhs: Weight) -> ExtWeight {
        self + ExtWeight::Finite(rhs)
    }
}

impl From<Weight> for ExtWeight {
    fn from(x: Weight) -> Self {
        ExtWeight::from_f64(x)
    }
}

/// Integral values print without a decimal point so that integer answers
/// are bit-exact in text output.
impl fmt::Display for ExtWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtWeight::NegInf => f.write_str("-inf"),
            ExtWeight::PosInf => f.write_str("+inf"),
            ExtWeight::Finite(x) => {
                if x.fract() == 0.0 && x.abs() < 9.0e15 {
                    write!(f, "{}", *x as i64)
                } else {
                    write!(f, "{x}")
                }
            }
        }
    }
}
