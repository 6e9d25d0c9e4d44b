//! Exact competitive ratios between integer profits.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

/// `opt / alg` kept as a pair of integers. `alg = 0` with `opt > 0` is
/// infinite; `0 / 0` counts as 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ratio {
    pub opt: usize,
    pub alg: usize,
}

impl Ratio {
    pub fn new(opt: usize, alg: usize) -> Self {
        Ratio { opt, alg }
    }

    pub fn is_infinite(&self) -> bool {
        self.alg == 0 && self.opt > 0
    }

    pub fn value(&self) -> f64 {
        match (self.opt, self.alg) {
            (0, 0) => 1.0,
            (_, 0) => f64::INFINITY,
            (o, a) => o as f64 / a as f64,
        }
    }

    /// `self >= num / den` decided with integers.
    pub fn at_least(&self, num: usize, den: usize) -> bool {
        if self.is_infinite() {
            return true;
        }
        let (o, a) = if self.opt == 0 && self.alg == 0 { (1, 1) } else { (self.opt, self.alg) };
        (o as u128) * (den as u128) >= (num as u128) * (a as u128)
    }

    /// Exact comparison of two ratios.
    pub fn cmp_exact(&self, other: &Ratio) -> Ordering {
        match (self.is_infinite(), other.is_infinite()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (false, false) => {
                let norm = |r: &Ratio| if r.opt == 0 && r.alg == 0 { (1u128, 1u128) } else { (r.opt as u128, r.alg as u128) };
                let (a, b) = (norm(self), norm(other));
                (a.0 * b.1).cmp(&(b.0 * a.1))
            }
        }
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{:.6}", self.value())
        }
    }
}

/// Serialized as a number, or the string `"inf"`.
impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.value())
        }
    }
}
