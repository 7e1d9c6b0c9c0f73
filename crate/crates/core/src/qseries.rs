//! Truncated power series in `q` with exact integer coefficients.
//!
//! A [`QSeries`] stores the coefficients of `q^0 .. q^(prec-1)`; everything at
//! or above `q^prec` is unknown and never materialised.

use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSeries {
    coeffs: Vec<BigInt>,
}

impl QSeries {
    pub fn zero(prec: usize) -> Result<Self> {
        check_prec(prec)?;
        Ok(QSeries {
            coeffs: vec![BigInt::zero(); prec],
        })
    }

    pub fn one(prec: usize) -> Result<Self> {
        let mut s = Self::zero(prec)?;
        s.coeffs[0] = BigInt::one();
        Ok(s)
    }

    /// `c * q^exp`, which is zero if `exp >= prec`.
    pub fn monomial(c: impl Into<BigInt>, exp: usize, prec: usize) -> Result<Self> {
        let mut s = Self::zero(prec)?;
        if exp < prec {
            s.coeffs[exp] = c.into();
        }
        Ok(s)
    }

    pub fn from_coeffs<I, T>(coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let coeffs: Vec<BigInt> = coeffs.into_iter().map(Into::into).collect();
        check_prec(coeffs.len())?;
        Ok(QSeries { coeffs })
    }

    pub fn prec(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `q^n`, or `None` when `n` is beyond the known precision.
    pub fn coeff(&self, n: usize) -> Option<&BigInt> {
        self.coeffs.get(n)
    }

    pub fn add(&self, other: &QSeries) -> Result<QSeries> {
        self.same_prec(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(QSeries { coeffs })
    }

    pub fn sub(&self, other: &QSeries) -> Result<QSeries> {
        self.same_prec(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(QSeries { coeffs })
    }

    /// Cauchy product truncated to the common precision.
    pub fn mul(&self, other: &QSeries) -> Result<QSeries> {
        self.same_prec(other)?;
        let prec = self.prec();
        let mut out = vec![BigInt::zero(); prec];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..prec - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Ok(QSeries { coeffs: out })
    }

    pub fn scale(&self, c: &BigInt) -> QSeries {
        QSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiply by `q^shift`, keeping the precision.
    pub fn shift(&self, shift: usize) -> QSeries {
        let prec = self.prec();
        let mut coeffs = vec![BigInt::zero(); prec];
        for (i, a) in self.coeffs.iter().enumerate().take(prec.saturating_sub(shift)) {
            coeffs[i + shift] = a.clone();
        }
        QSeries { coeffs }
    }

    pub fn truncate(&self, prec: usize) -> Result<QSeries> {
        check_prec(prec)?;
        if prec > self.prec() {
            return Err(Error::PrecisionMismatch {
                left: self.prec(),
                right: prec,
            });
        }
        Ok(QSeries {
            coeffs: self.coeffs[..prec].to_vec(),
        })
    }

    /// Product with a sparse series given as `(exponent, coefficient)` terms.
    fn mul_sparse(&self, terms: &[(usize, i64)]) -> QSeries {
        let prec = self.prec();
        let mut out = vec![BigInt::zero(); prec];
        for &(e, c) in terms {
            if e >= prec {
                continue;
            }
            for (i, a) in self.coeffs[..prec - e].iter().enumerate() {
                if !a.is_zero() {
                    out[i + e] += a * c;
                }
            }
        }
        QSeries { coeffs: out }
    }

    fn same_prec(&self, other: &QSeries) -> Result<()> {
        if self.prec() != other.prec() {
            return Err(Error::PrecisionMismatch {
                left: self.prec(),
                right: other.prec(),
            });
        }
        Ok(())
    }
}

fn check_prec(prec: usize) -> Result<()> {
    if prec == 0 {
        return Err(Error::invalid("precision must be positive"));
    }
    Ok(())
}

/// Sparse terms of `prod_{n>=1} (1 - q^n)^3 = sum_{m>=0} (-1)^m (2m+1) q^{m(m+1)/2}`
/// below `q^prec`.
pub(crate) fn euler_cube_terms(prec: usize) -> Vec<(usize, i64)> {
    let mut terms = Vec::new();
    let mut m: usize = 0;
    loop {
        let e = m * (m + 1) / 2;
        if e >= prec {
            break;
        }
        let c = (2 * m + 1) as i64;
        terms.push((e, if m.is_multiple_of(2) { c } else { -c }));
        m += 1;
    }
    terms
}

/// Expansion of `eta(q)^k = q^(k/24) prod_{l>=1} (1 - q^l)^k` to precision `prec`.
///
/// Only exponents divisible by 24 are accepted, so that the leading power of
/// `q` is integral.
pub fn eta_power(k: u32, prec: usize) -> Result<QSeries> {
    check_prec(prec)?;
    if !k.is_multiple_of(24) {
        return Err(Error::invalid(format!(
            "eta exponent {k} is not divisible by 24"
        )));
    }
    let shift = (k / 24) as usize;
    if shift >= prec {
        return QSeries::zero(prec);
    }
    let inner_prec = prec - shift;
    let cube = euler_cube_terms(inner_prec);
    let mut acc = QSeries::one(inner_prec)?;
    for _ in 0..k / 3 {
        acc = acc.mul_sparse(&cube);
    }
    let mut coeffs = vec![BigInt::zero(); shift];
    coeffs.extend(acc.coeffs);
    Ok(QSeries { coeffs })
}

impl Add for &QSeries {
    type Output = QSeries;

    /// Panics on precision mismatch; use [`QSeries::add`] for the fallible form.
    fn add(self, rhs: &QSeries) -> QSeries {
        QSeries::add(self, rhs).expect("precision mismatch")
    }
}

impl Mul for &QSeries {
    type Output = QSeries;

    fn mul(self, rhs: &QSeries) -> QSeries {
        QSeries::mul(self, rhs).expect("precision mismatch")
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*q")?,
                _ => write!(f, "{c}*q^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.prec())
    }
}
