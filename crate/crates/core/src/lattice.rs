//! Index-k sublattices of Z^2 in Hermite normal form and their
//! SL2(Z) double-coset classes (Smith normal forms).

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};

/// Upper-triangular `[[a, b], [0, d]]` with `a, d >= 1` and `0 <= b < a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HnfMatrix {
    pub a: u64,
    pub b: u64,
    pub d: u64,
}

impl HnfMatrix {
    pub fn new(a: u64, b: u64, d: u64) -> Result<Self> {
        if a < 1 || d < 1 || b >= a {
            return Err(Error::invalid(format!(
                "[[{a}, {b}], [0, {d}]] is not in normal form"
            )));
        }
        Ok(HnfMatrix { a, b, d })
    }

    pub fn det(&self) -> u64 {
        self.a * self.d
    }

    /// Smith normal form `(e1, e2)`: `e1` is the gcd of all entries.
    pub fn smith_class(&self) -> SnfClass {
        let e1 = self.a.gcd(&self.b).gcd(&self.d);
        SnfClass {
            e1,
            e2: self.det() / e1,
        }
    }
}

impl fmt::Display for HnfMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [0, {}]]", self.a, self.b, self.d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SnfClass {
    pub e1: u64,
    pub e2: u64,
}

impl fmt::Display for SnfClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.e1, self.e2)
    }
}

/// One normal-form representative per index-`k` sublattice.
pub fn sublattices(k: u64) -> Result<Vec<HnfMatrix>> {
    if k < 1 {
        return Err(Error::invalid("sublattice index must be >= 1"));
    }
    let mut out = Vec::new();
    for a in 1..=k {
        if !k.is_multiple_of(a) {
            continue;
        }
        let d = k / a;
        for b in 0..a {
            out.push(HnfMatrix { a, b, d });
        }
    }
    Ok(out)
}

/// All `(e1, e2)` with `e1 | e2` and `e1 e2 = k`.
pub fn double_cosets(k: u64) -> Result<Vec<SnfClass>> {
    if k < 1 {
        return Err(Error::invalid("double coset index must be >= 1"));
    }
    let mut out = Vec::new();
    let mut e1 = 1;
    while e1 * e1 <= k {
        if k.is_multiple_of(e1) && (k / e1).is_multiple_of(e1) {
            out.push(SnfClass { e1, e2: k / e1 });
        }
        e1 += 1;
    }
    Ok(out)
}
