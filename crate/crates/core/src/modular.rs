//! Ramanujan tau, the coefficients `a_d` of `eta^48`, weight-12 Hecke
//! operators on q-expansions and non-vanishing scans.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::qseries::{self, eta_power, QSeries};

/// Weight of the discriminant form.
pub const WEIGHT: u32 = 12;

/// `tau(1..=bound)`, indexed by `d`; slot 0 holds zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauTable {
    values: Vec<BigInt>,
}

impl TauTable {
    pub fn build(bound: usize) -> Result<Self> {
        if bound < 1 {
            return Err(Error::invalid("tau table bound must be at least 1"));
        }
        let series = eta_power(24, bound + 1)?;
        Ok(TauTable {
            values: series.into_coeffs(),
        })
    }

    pub fn bound(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, d: usize) -> Option<&BigInt> {
        if d == 0 {
            return None;
        }
        self.values.get(d)
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }
}

/// `a_2..=a_bound`, indexed by `d`; slots 0 and 1 hold zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ACoeffTable {
    values: Vec<BigInt>,
}

impl ACoeffTable {
    /// Builds the table by convolving tau with itself.
    pub fn from_tau(tau: &TauTable, bound: usize) -> Result<Self> {
        if bound < 2 {
            return Err(Error::invalid("a_d table bound must be at least 2"));
        }
        if tau.bound() + 1 < bound {
            return Err(Error::invalid(format!(
                "tau table bound {} too small for a_d up to {bound}",
                tau.bound()
            )));
        }
        let t = tau.values();
        let values = (0..=bound)
            .into_par_iter()
            .map(|d| convolution(t, d))
            .collect();
        Ok(ACoeffTable { values })
    }

    /// Builds the table from the direct expansion of `eta^48`.
    pub fn from_eta48(bound: usize) -> Result<Self> {
        if bound < 2 {
            return Err(Error::invalid("a_d table bound must be at least 2"));
        }
        Ok(ACoeffTable {
            values: eta_power(48, bound + 1)?.into_coeffs(),
        })
    }

    pub fn bound(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, d: usize) -> Option<&BigInt> {
        if d < 2 {
            return None;
        }
        self.values.get(d)
    }
}

/// `sum_{i+j=d, i,j>=1} tau(i) tau(j)` read from a tau slice indexed by `d`.
fn convolution(tau: &[BigInt], d: usize) -> BigInt {
    let mut acc = BigInt::zero();
    if d < 2 {
        return acc;
    }
    for i in 1..=(d - 1) / 2 {
        acc += &tau[i] * &tau[d - i] * 2;
    }
    if d.is_multiple_of(2) {
        acc += &tau[d / 2] * &tau[d / 2];
    }
    acc
}

fn tau_cache() -> &'static RwLock<Option<TauTable>> {
    static CACHE: OnceLock<RwLock<Option<TauTable>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(None))
}

/// Runs `f` against a shared tau table covering at least `bound`, growing it
/// when necessary.
pub fn with_tau_table<R>(bound: usize, f: impl FnOnce(&TauTable) -> R) -> Result<R> {
    {
        let guard = tau_cache().read().expect("tau cache poisoned");
        if let Some(t) = guard.as_ref() {
            if t.bound() >= bound {
                return Ok(f(t));
            }
        }
    }
    let mut guard = tau_cache().write().expect("tau cache poisoned");
    let current = guard.as_ref().map_or(0, TauTable::bound);
    if current < bound {
        let target = bound.max(2 * current).max(64);
        *guard = Some(TauTable::build(target)?);
    }
    Ok(f(guard.as_ref().expect("just built")))
}

/// Ramanujan's `tau(d)`, the coefficient of `q^d` in `eta(q)^24`.
pub fn tau(d: u64) -> Result<BigInt> {
    if d < 1 {
        return Err(Error::invalid("tau(d) needs d >= 1"));
    }
    let d = usize::try_from(d).map_err(|_| Error::invalid("d too large"))?;
    with_tau_table(d, |t| t.get(d).cloned().expect("covered"))
}

/// `a_d`, the coefficient of `q^d` in `eta(q)^48`, via the tau convolution.
pub fn a_coeff(d: u64) -> Result<BigInt> {
    if d < 2 {
        return Err(Error::invalid("a_d needs d >= 2"));
    }
    let d = usize::try_from(d).map_err(|_| Error::invalid("d too large"))?;
    with_tau_table(d, |t| convolution(t.values(), d))
}

/// Weight-12 Hecke operator on a q-expansion:
/// `(T_k f)_n = sum_{e | gcd(n,k)} e^11 f_{nk/e^2}`.
///
/// The result has precision `floor(f.prec / k)`, the range on which every
/// needed input coefficient is known.
pub fn hecke_apply(k: u64, f: &QSeries) -> Result<QSeries> {
    if k < 1 {
        return Err(Error::invalid("Hecke index must be >= 1"));
    }
    if f.prec() < 2 {
        return Err(Error::invalid("input precision must be >= 2"));
    }
    let k_us = usize::try_from(k).map_err(|_| Error::invalid("k too large"))?;
    let out_prec = f.prec() / k_us;
    if out_prec < 2 {
        return Err(Error::invalid(format!(
            "T_{k} of a series with precision {} leaves precision {out_prec} < 2",
            f.prec()
        )));
    }
    let coeffs: Vec<BigInt> = (0..out_prec)
        .map(|n| {
            if n == 0 {
                // e ranges over divisors of k; f_0 is the only term.
                let mut acc = BigInt::zero();
                for e in divisors(k) {
                    acc += BigInt::from(e).pow(WEIGHT - 1) * &f.coeffs()[0];
                }
                return acc;
            }
            let g = (n as u64).gcd(&k);
            let mut acc = BigInt::zero();
            for e in divisors(g) {
                let idx = (n as u64) * k / (e * e);
                acc += BigInt::from(e).pow(WEIGHT - 1) * &f.coeffs()[idx as usize];
            }
            acc
        })
        .collect();
    QSeries::from_coeffs(coeffs)
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            small.push(i);
            if i * i != n {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn sigma1(n: u64) -> u64 {
    divisors(n).iter().sum()
}

/// Rebuilds `tau(1..=bound)` from the prime values alone, using
/// multiplicativity and `tau(p^(r+1)) = tau(p) tau(p^r) - p^11 tau(p^(r-1))`.
pub fn tau_from_prime_values(bound: usize, tau_prime: impl Fn(u64) -> BigInt) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); bound + 1];
    if bound == 0 {
        return out;
    }
    out[1] = BigInt::one();
    let spf = smallest_prime_factors(bound);
    for n in 2..=bound {
        let p = spf[n];
        let mut m = n;
        let mut r = 0u32;
        while m % p == 0 {
            m /= p;
            r += 1;
        }
        if m > 1 {
            out[n] = &out[m] * &out[n / m];
            continue;
        }
        // n = p^r
        let tp = tau_prime(p as u64);
        if r == 1 {
            out[n] = tp;
        } else {
            let p11 = BigInt::from(p).pow(WEIGHT - 1);
            let prev = &out[n / p];
            let prev2 = &out[n / (p * p)];
            out[n] = &tp * prev - p11 * prev2;
        }
    }
    out
}

pub(crate) fn smallest_prime_factors(bound: usize) -> Vec<usize> {
    let mut spf = vec![0usize; bound + 1];
    for i in 2..=bound {
        if spf[i] == 0 {
            let mut j = i;
            while j <= bound {
                if spf[j] == 0 {
                    spf[j] = i;
                }
                j += i;
            }
        }
    }
    spf
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanTable {
    Tau,
    ACoeff,
}

impl ScanTable {
    fn eta_exponent(self) -> u32 {
        match self {
            ScanTable::Tau => 24,
            ScanTable::ACoeff => 48,
        }
    }

    fn first_index(self) -> usize {
        match self {
            ScanTable::Tau => 1,
            ScanTable::ACoeff => 2,
        }
    }
}

/// Moduli used by the scans; each is the largest prime below `2^40 - offset`.
const SCAN_MODULI_SEEDS: [u64; 2] = [1 << 40, (1 << 40) - 1_000_000];

/// Returns every `d` in `[first, max]` whose coefficient is exactly zero.
///
/// Coefficients are reduced modulo two 40-bit primes; a nonzero residue is a
/// proof of non-vanishing. Indices that vanish modulo every prime are settled
/// by exact computation.
pub fn scan_nonvanishing(table: ScanTable, max: u64) -> Result<Vec<u64>> {
    let max = usize::try_from(max).map_err(|_| Error::invalid("scan bound too large"))?;
    if max < table.first_index() {
        return Ok(Vec::new());
    }
    let moduli: Vec<u64> = SCAN_MODULI_SEEDS.iter().map(|&s| prime_below(s)).collect();
    let residues: Vec<Vec<u64>> = moduli
        .par_iter()
        .map(|&p| eta_power_mod(table.eta_exponent(), max + 1, p))
        .collect();
    let mut suspects: Vec<usize> = (table.first_index()..=max)
        .into_par_iter()
        .filter(|&d| residues.iter().all(|r| r[d] == 0))
        .collect();
    suspects.sort_unstable();
    let mut zeros = Vec::new();
    for d in suspects {
        let exact = match table {
            ScanTable::Tau => tau(d as u64)?,
            ScanTable::ACoeff => a_coeff(d as u64)?,
        };
        if exact.is_zero() {
            zeros.push(d as u64);
        }
    }
    Ok(zeros)
}

/// Exact scan over a precomputed table (used for small bounds and as a
/// cross-check of the modular scan).
pub fn scan_exact(table: ScanTable, max: u64) -> Result<Vec<u64>> {
    let max = max as usize;
    if max < table.first_index() {
        return Ok(Vec::new());
    }
    let coeffs = eta_power(table.eta_exponent(), max + 1)?;
    Ok((table.first_index()..=max)
        .filter(|&d| coeffs.coeffs()[d].is_zero())
        .map(|d| d as u64)
        .collect())
}

/// `eta^k mod p` to precision `prec`, for `k` divisible by 24 and `p < 2^40`.
fn eta_power_mod(k: u32, prec: usize, p: u64) -> Vec<u64> {
    debug_assert!(p < 1 << 40 && k.is_multiple_of(24));
    let shift = (k / 24) as usize;
    let mut out = vec![0u64; prec];
    if shift >= prec {
        return out;
    }
    let inner = prec - shift;
    let terms = qseries::euler_cube_terms(inner);
    let mut acc = vec![0u64; inner];
    acc[0] = 1;
    let mut pos = vec![0u64; inner];
    let mut neg = vec![0u64; inner];
    for _ in 0..k / 3 {
        pos.iter_mut().for_each(|x| *x = 0);
        neg.iter_mut().for_each(|x| *x = 0);
        // Each slot receives at most terms.len() products below 2^50, which
        // stays below 2^63 for every precision this scan accepts.
        for &(e, c) in &terms {
            let (target, c) = if c > 0 {
                (&mut pos, c as u64)
            } else {
                (&mut neg, (-c) as u64)
            };
            for (slot, a) in target[e..].iter_mut().zip(&acc[..inner - e]) {
                *slot += a * c;
            }
        }
        for i in 0..inner {
            let a = pos[i] % p;
            let b = neg[i] % p;
            acc[i] = if a >= b { a - b } else { a + p - b };
        }
    }
    out[shift..].copy_from_slice(&acc);
    out
}

fn prime_below(n: u64) -> u64 {
    let mut c = n - 1;
    while !is_prime(c) {
        c -= 1;
    }
    c
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= n {
        if n.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

/// Checks `T_k(eta^24) = tau(k) eta^24` on the computable range at the given
/// precision. Returns the number of coefficients compared.
pub fn hecke_eigen_check(k: u64, prec: usize) -> Result<(bool, usize)> {
    let delta = eta_power(24, prec)?;
    let image = hecke_apply(k, &delta)?;
    let tk = tau(k)?;
    let expected = delta.truncate(image.prec())?.scale(&tk);
    Ok((image == expected, image.prec()))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force tau straight from the product definition, one binomial
    /// factor at a time.
    fn tau_oracle(bound: usize) -> Vec<BigInt> {
        let prec = bound + 1;
        let mut acc = vec![BigInt::zero(); prec];
        acc[1] = BigInt::one();
        for l in 1..prec {
            for _ in 0..24 {
                for i in (l..prec).rev() {
                    let t = acc[i - l].clone();
                    acc[i] -= t;
                }
            }
        }
        acc
    }

    #[test]
    fn tau_examples() {
        assert_eq!(tau(1).unwrap(), BigInt::from(1));
        assert_eq!(tau(2).unwrap(), BigInt::from(-24));
        assert_eq!(tau(3).unwrap(), BigInt::from(252));
        assert_eq!(tau(6).unwrap(), tau(2).unwrap() * tau(3).unwrap());
        assert!(tau(0).is_err());
    }

    #[test]
    fn tau_matches_oracle() {
        let oracle = tau_oracle(60);
        for d in 1..=60 {
            assert_eq!(tau(d as u64).unwrap(), oracle[d], "d = {d}");
        }
    }

    #[test]
    fn a_coeff_examples() {
        assert_eq!(a_coeff(2).unwrap(), BigInt::from(1));
        assert_eq!(a_coeff(3).unwrap(), BigInt::from(-48));
        assert_eq!(a_coeff(4).unwrap(), BigInt::from(1080));
        assert!(a_coeff(1).is_err());
    }

    #[test]
    fn a_tables_agree() {
        let tau = TauTable::build(100).unwrap();
        let conv = ACoeffTable::from_tau(&tau, 100).unwrap();
        let direct = ACoeffTable::from_eta48(100).unwrap();
        assert_eq!(conv, direct);
        assert_eq!(conv.get(4), Some(&BigInt::from(1080)));
        assert_eq!(conv.get(1), None);
    }

    #[test]
    fn hecke_identity_and_t2() {
        let f = eta_power(24, 64).unwrap();
        assert_eq!(hecke_apply(1, &f).unwrap(), f);
        let t2 = hecke_apply(2, &f).unwrap();
        assert_eq!(t2.prec(), 32);
        assert_eq!(t2.coeffs()[1], BigInt::from(-24));
    }

    #[test]
    fn hecke_errors() {
        let f = eta_power(24, 10).unwrap();
        assert!(hecke_apply(0, &f).is_err());
        assert!(hecke_apply(6, &f).is_err());
        assert!(hecke_apply(1, &QSeries::one(1).unwrap()).is_err());
    }

    #[test]
    fn hecke_eigenvalue_small() {
        for k in 1..=12 {
            let (ok, n) = hecke_eigen_check(k, 240).unwrap();
            assert!(ok, "k = {k}");
            assert_eq!(n, 240 / k as usize);
        }
    }

    #[test]
    fn hecke_multiplicative_for_coprime() {
        let f = eta_power(24, 600).unwrap();
        for (k, l) in [(2u64, 3u64), (3, 4), (2, 5), (4, 5)] {
            let a = hecke_apply(k, &hecke_apply(l, &f).unwrap()).unwrap();
            let b = hecke_apply(k * l, &f).unwrap();
            let n = a.prec().min(b.prec());
            assert_eq!(a.truncate(n).unwrap(), b.truncate(n).unwrap(), "{k},{l}");
        }
        // On a non-eigen series too.
        let g = QSeries::from_coeffs((0..600i64).map(|i| (i * i) % 17 - 8)).unwrap();
        let a = hecke_apply(2, &hecke_apply(3, &g).unwrap()).unwrap();
        let b = hecke_apply(6, &g).unwrap();
        assert_eq!(a.truncate(a.prec().min(b.prec())).unwrap(), b.truncate(a.prec().min(b.prec())).unwrap());
    }

    #[test]
    fn recursion_route_matches_small() {
        let t = TauTable::build(500).unwrap();
        let rebuilt = tau_from_prime_values(500, |p| t.get(p as usize).unwrap().clone());
        assert_eq!(&rebuilt[1..], &t.values()[1..]);
    }

    #[test]
    fn scans() {
        assert!(scan_nonvanishing(ScanTable::Tau, 100).unwrap().is_empty());
        assert!(scan_nonvanishing(ScanTable::ACoeff, 50).unwrap().is_empty());
        assert!(scan_nonvanishing(ScanTable::Tau, 1).unwrap().is_empty());
        assert!(scan_exact(ScanTable::Tau, 300).unwrap().is_empty());
    }

    #[test]
    fn modular_scan_residues_match_exact() {
        let p = prime_below(1 << 40);
        let exact = eta_power(48, 400).unwrap();
        let modp = eta_power_mod(48, 400, p);
        let pb = BigInt::from(p);
        for (e, r) in exact.coeffs().iter().zip(&modp) {
            assert_eq!(e.mod_floor(&pb), BigInt::from(*r));
        }
    }

    #[test]
    fn divisor_helpers() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(sigma1(6), 12);
        assert_eq!(divisors(1), vec![1]);
    }
}
