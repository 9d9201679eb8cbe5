//! Integer arithmetic shared by every other module: primes, factorization,
//! the Kronecker symbol and fundamental discriminants.

mod primes;

pub use primes::{
    factorize, iroot, is_prime, isqrt, mul_mod, omega, pow_mod, prime_pi, sieve_primes,
    sqrt_mod_prime, Factorization, SpfTable,
};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Kronecker symbol `(D|n)` for `n >= 1`.
pub fn kronecker(d: i64, n: u64) -> i8 {
    assert!(n >= 1, "kronecker requires n >= 1");
    let mut n = n;
    let mut sign = 1i8;
    let tz = n.trailing_zeros();
    if tz > 0 {
        if d % 2 == 0 {
            return 0;
        }
        if tz % 2 == 1 {
            let r = d.rem_euclid(8);
            if r == 3 || r == 5 {
                sign = -sign;
            }
        }
        n >>= tz;
    }
    sign * jacobi(d.rem_euclid(n as i64) as u64, n)
}

/// Jacobi symbol `(a|n)` for odd `n >= 1`.
pub fn jacobi(a: u64, n: u64) -> i8 {
    debug_assert!(n % 2 == 1);
    let mut a = a % n;
    let mut n = n;
    let mut s = 1i8;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        if tz % 2 == 1 && (n % 8 == 3 || n % 8 == 5) {
            s = -s;
        }
        if a % 4 == 3 && n % 4 == 3 {
            s = -s;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        s
    } else {
        0
    }
}

fn is_squarefree(n: u64) -> bool {
    n != 0 && factorize(n).is_squarefree()
}

/// Whether `d` is the discriminant of a quadratic field.
pub fn is_fundamental(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d.unsigned_abs()),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}

/// Signed discriminant of a quadratic field. `D_K` in the literature is `|value|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub struct FundamentalDiscriminant(i64);

impl FundamentalDiscriminant {
    pub fn new(d: i64) -> Result<Self> {
        if is_fundamental(d) {
            Ok(FundamentalDiscriminant(d))
        } else {
            Err(Error::NotFundamental(d))
        }
    }

    /// Skips validation; only for values produced by [`fundamental_discriminants`].
    pub(crate) fn new_unchecked(d: i64) -> Self {
        debug_assert!(is_fundamental(d));
        FundamentalDiscriminant(d)
    }

    pub fn value(self) -> i64 {
        self.0
    }

    pub fn abs(self) -> u64 {
        self.0.unsigned_abs()
    }

    pub fn is_imaginary(self) -> bool {
        self.0 < 0
    }

    /// `D mod 2`; the ring of integers is `Z[w]` with `w = (sigma + sqrt D)/2`.
    pub fn sigma(self) -> i64 {
        self.0.rem_euclid(2)
    }

    /// Squarefree kernel `D'` with `Q(sqrt D) = Q(sqrt D')`.
    pub fn squarefree_kernel(self) -> i64 {
        if self.sigma() == 1 {
            self.0
        } else {
            self.0 / 4
        }
    }
}

impl TryFrom<i64> for FundamentalDiscriminant {
    type Error = Error;
    fn try_from(d: i64) -> Result<Self> {
        Self::new(d)
    }
}

impl From<FundamentalDiscriminant> for i64 {
    fn from(d: FundamentalDiscriminant) -> i64 {
        d.0
    }
}

impl fmt::Display for FundamentalDiscriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Squarefree flags for `lo..=hi` (all positive).
fn squarefree_flags(lo: u64, hi: u64) -> Vec<bool> {
    let len = (hi - lo + 1) as usize;
    let mut flags = vec![true; len];
    for p in sieve_primes(isqrt(hi)) {
        let q = p * p;
        let mut m = lo.div_ceil(q) * q;
        while m <= hi {
            flags[(m - lo) as usize] = false;
            m += q;
        }
    }
    flags
}

/// Fundamental discriminants with `lo <= |D| <= hi` and the sign given.
fn fundamental_abs_range(lo: u64, hi: u64, negative: bool) -> Vec<i64> {
    let lo = lo.max(1);
    if lo > hi {
        return Vec::new();
    }
    // odd D needs |D| squarefree, D = 4m needs |m| squarefree
    let whole = squarefree_flags(lo, hi);
    let qlo = (lo / 4).max(1);
    let quarter = squarefree_flags(qlo, (hi / 4).max(qlo));
    let mut out = Vec::new();
    for a in lo..=hi {
        let d = if negative { -(a as i64) } else { a as i64 };
        let ok = match d.rem_euclid(4) {
            1 => d != 1 && whole[(a - lo) as usize],
            0 => {
                let m = d / 4;
                matches!(m.rem_euclid(4), 2 | 3) && quarter[(a / 4 - qlo) as usize]
            }
            _ => false,
        };
        if ok {
            out.push(d);
        }
    }
    out
}

/// All fundamental discriminants in `[lo, hi]`, ascending.
pub fn fundamental_discriminants(lo: i64, hi: i64) -> Vec<FundamentalDiscriminant> {
    if lo > hi {
        return Vec::new();
    }
    let mut out = Vec::new();
    if lo < 0 {
        let neg_hi = hi.min(-1);
        let mut neg = fundamental_abs_range(neg_hi.unsigned_abs(), lo.unsigned_abs(), true);
        neg.reverse();
        out.extend(neg);
    }
    if hi > 0 {
        out.extend(fundamental_abs_range(lo.max(1) as u64, hi as u64, false));
    }
    out.into_iter().map(FundamentalDiscriminant::new_unchecked).collect()
}

/// Which quadratic fields a scan covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Imaginary,
    Real,
    Both,
}

impl Sign {
    pub fn parse(s: &str) -> Result<Sign> {
        match s {
            "imag" | "imaginary" | "neg" => Ok(Sign::Imaginary),
            "real" | "pos" => Ok(Sign::Real),
            "both" | "all" => Ok(Sign::Both),
            _ => Err(Error::Parse(format!("unknown sign {s:?} (imag, real, both)"))),
        }
    }

    pub fn admits(self, d: i64) -> bool {
        match self {
            Sign::Imaginary => d < 0,
            Sign::Real => d > 0,
            Sign::Both => true,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Sign::Imaginary => "imag",
            Sign::Real => "real",
            Sign::Both => "both",
        }
    }
}

/// Fundamental discriminants of the given sign with `lo <= |D| <= hi`, ascending in D.
pub fn fundamental_discriminants_abs(lo: u64, hi: u64, sign: Sign) -> Vec<FundamentalDiscriminant> {
    let (lo, hi) = (lo as i64, hi as i64);
    let mut out = Vec::new();
    if sign != Sign::Real {
        out.extend(fundamental_discriminants(-hi, -lo));
    }
    if sign != Sign::Imaginary {
        out.extend(fundamental_discriminants(lo, hi));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn legendre_by_euler(a: i64, p: u64) -> i8 {
        let r = pow_mod(a.rem_euclid(p as i64) as u64, (p - 1) / 2, p);
        match r {
            0 => 0,
            1 => 1,
            _ => -1,
        }
    }

    fn fundamental_by_definition(d: i64) -> bool {
        let sqf = |n: i64| {
            let n = n.unsigned_abs();
            n != 0 && (2..).take_while(|k| k * k <= n).all(|k| !n.is_multiple_of(k * k))
        };
        if d == 0 || d == 1 {
            return false;
        }
        if d.rem_euclid(4) == 1 {
            return sqf(d);
        }
        d.rem_euclid(4) == 0 && matches!((d / 4).rem_euclid(4), 2 | 3) && sqf(d / 4)
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(-23, 2), 1);
        assert_eq!(kronecker(12, 3), 0);
        assert_eq!(kronecker(-4, 13), 1);
        assert_eq!(kronecker(-4, 3), -1);
        assert_eq!(kronecker(5, 1), 1);
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(8, 2), 0);
    }

    #[test]
    fn kronecker_is_legendre_at_odd_primes() {
        for p in sieve_primes(400).into_iter().skip(1) {
            for d in -300i64..300 {
                assert_eq!(kronecker(d, p), legendre_by_euler(d, p), "d={d} p={p}");
            }
        }
    }

    #[test]
    fn kronecker_multiplicative_in_n() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let d: i64 = rng.gen_range(-1_000_000..1_000_000);
            let m: u64 = rng.gen_range(1..100_000);
            let n: u64 = rng.gen_range(1..100_000);
            assert_eq!(kronecker(d, m * n), kronecker(d, m) * kronecker(d, n));
        }
    }

    #[test]
    fn discriminant_examples() {
        let v = |lo, hi| -> Vec<i64> {
            fundamental_discriminants(lo, hi).into_iter().map(|d| d.value()).collect()
        };
        assert_eq!(v(-20, -1), vec![-20, -19, -15, -11, -8, -7, -4, -3]);
        assert!(v(2, 4).is_empty());
        assert_eq!(v(5, 13), vec![5, 8, 12, 13]);
        assert_eq!(v(-4, 5), vec![-4, -3, 5]);
        assert!(FundamentalDiscriminant::new(1).is_err());
        assert!(FundamentalDiscriminant::new(-16).is_err());
        assert_eq!(FundamentalDiscriminant::new(-8).unwrap().squarefree_kernel(), -2);
    }

    #[test]
    fn discriminants_match_definition() {
        let fast: Vec<i64> = fundamental_discriminants(-100_000, 100_000)
            .into_iter()
            .map(|d| d.value())
            .collect();
        let slow: Vec<i64> = (-100_000..=100_000).filter(|&d| fundamental_by_definition(d)).collect();
        assert_eq!(fast, slow);
        assert!(fast.iter().all(|&d| is_fundamental(d)));
    }

    #[test]
    fn discriminant_windows_tile() {
        let whole = fundamental_discriminants(-5000, 5000);
        let mut parts = Vec::new();
        let mut lo = -5000;
        while lo <= 5000 {
            let hi = (lo + 333).min(5000);
            parts.extend(fundamental_discriminants(lo, hi));
            lo = hi + 1;
        }
        assert_eq!(whole, parts);
    }
}
