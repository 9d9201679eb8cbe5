//! Completely split primes and the sets of fields with few of them.

use crate::arith::{fundamental_discriminants_abs, kronecker, sieve_primes, FundamentalDiscriminant, Sign};
use crate::error::{Error, Result};
use crate::exponents::{to_f64, Q};
use crate::poly::{is_irreducible, modp, ZPoly};
use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitSource {
    Discriminant(i64),
    Polynomial(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitScanResult {
    pub source: SplitSource,
    pub y: u64,
    pub count: u64,
    pub primes: Option<Vec<u64>>,
}

/// Primes `p <= y` with `(D|p) = 1`.
pub fn split_count_quadratic(d: FundamentalDiscriminant, y: u64, keep_primes: bool) -> SplitScanResult {
    let primes = sieve_primes(y);
    let split: Vec<u64> = primes.into_iter().filter(|&p| kronecker(d.value(), p) == 1).collect();
    SplitScanResult {
        source: SplitSource::Discriminant(d.value()),
        y,
        count: split.len() as u64,
        primes: keep_primes.then_some(split),
    }
}

/// Same count against a prime list prepared once for many fields.
pub fn split_count_with(d: i64, primes: &[u64]) -> u64 {
    primes.iter().filter(|&&p| kronecker(d, p) == 1).count() as u64
}

/// Primes `p <= y` not dividing `lc(f) disc(f)` at which `f` has `deg f` distinct roots.
pub fn split_count_poly(f: &ZPoly, y: u64, keep_primes: bool) -> Result<SplitScanResult> {
    if f.degree() > 5 {
        return Err(Error::Unsupported(format!("degree {} above 5", f.degree())));
    }
    if !is_irreducible(f)? {
        return Err(Error::Reducible(f.to_string()));
    }
    let bad = f.lc() * f.discriminant();
    let mut split = Vec::new();
    for p in sieve_primes(y) {
        if (&bad % BigInt::from(p)).is_zero() {
            continue;
        }
        if modp::splits_completely(&modp::reduce(f, p), p) {
            split.push(p);
        }
    }
    Ok(SplitScanResult {
        source: SplitSource::Polynomial(f.to_string()),
        y,
        count: split.len() as u64,
        primes: keep_primes.then_some(split),
    })
}

/// A field entering a bad-set test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldSpec {
    Quadratic(FundamentalDiscriminant),
    /// A field given by a defining polynomial and its field discriminant.
    Polynomial { f: ZPoly, disc: i64 },
}

impl FieldSpec {
    pub fn abs_disc(&self) -> u64 {
        match self {
            FieldSpec::Quadratic(d) => d.abs(),
            FieldSpec::Polynomial { disc, .. } => disc.unsigned_abs(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            FieldSpec::Quadratic(d) => d.to_string(),
            FieldSpec::Polynomial { f, .. } => f.to_string(),
        }
    }

    pub fn split_count(&self, y: u64) -> Result<u64> {
        Ok(match self {
            FieldSpec::Quadratic(d) => split_count_quadratic(*d, y, false).count,
            FieldSpec::Polynomial { f, .. } => split_count_poly(f, y, false)?.count,
        })
    }
}

/// `floor(m)` for a nonnegative threshold.
pub fn threshold_floor(m: f64) -> u64 {
    if m <= 0.0 {
        0
    } else {
        m.floor() as u64
    }
}

/// Membership of a field in the set of fields with `X <= D_K < 2X` and at most
/// `M` primes `p <= Y` splitting completely. Fractional `M` is floored.
pub fn bad_set_membership(field: &FieldSpec, x: u64, y: u64, m: f64) -> Result<bool> {
    let dk = field.abs_disc();
    if dk < x || dk >= 2 * x {
        return Ok(false);
    }
    Ok(field.split_count(y)? <= threshold_floor(m))
}

/// `floor(x^delta)` for rational `delta > 0`, exactly.
pub fn floor_power(x: u64, delta: &Q) -> Result<u64> {
    if !delta.is_positive() {
        return Err(Error::InvalidArgument("delta must be positive".into()));
    }
    let num = delta.numer().to_u32().ok_or(Error::Overflow("delta numerator"))?;
    let den = delta.denom().to_u32().ok_or(Error::Overflow("delta denominator"))?;
    let v = BigUint::from(x).pow(num).nth_root(den);
    v.to_u64().ok_or(Error::Overflow("x^delta"))
}

pub enum BadSetFamily {
    Quadratic(Sign),
    List(Vec<FieldSpec>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BadSetRow {
    pub field: String,
    pub abs_disc: u64,
    pub count: u64,
    pub member: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BadSetScan {
    pub x: u64,
    pub y: u64,
    /// `c X^delta / log X`.
    pub m_threshold: f64,
    pub m_floor: u64,
    /// Fields of the family with `X <= D_K < 2X`.
    pub total: usize,
    pub members: usize,
    pub rows: Vec<BadSetRow>,
}

/// Bad-set members with `Y = X^delta` and `M = c X^delta / log X`.
pub fn bad_set_scan(family: &BadSetFamily, x: u64, delta: &Q, c: &Q) -> Result<BadSetScan> {
    if x < 3 {
        return Err(Error::InvalidArgument("X must be at least 3".into()));
    }
    if !c.is_positive() {
        return Err(Error::InvalidArgument("c must be positive".into()));
    }
    let y = floor_power(x, delta)?;
    let ln_x = (x as f64).ln();
    let m = to_f64(c) * (to_f64(delta) * ln_x).exp() / ln_x;
    let m_floor = threshold_floor(m);
    let fields: Vec<FieldSpec> = match family {
        BadSetFamily::Quadratic(sign) => fundamental_discriminants_abs(x, 2 * x - 1, *sign)
            .into_iter()
            .map(FieldSpec::Quadratic)
            .collect(),
        BadSetFamily::List(list) => list
            .iter()
            .filter(|f| (x..2 * x).contains(&f.abs_disc()))
            .cloned()
            .collect(),
    };
    let primes = sieve_primes(y);
    let rows: Vec<BadSetRow> = fields
        .par_iter()
        .map(|f| {
            let count = match f {
                FieldSpec::Quadratic(d) => split_count_with(d.value(), &primes),
                FieldSpec::Polynomial { .. } => f.split_count(y)?,
            };
            Ok(BadSetRow { field: f.label(), abs_disc: f.abs_disc(), count, member: count <= m_floor })
        })
        .collect::<Result<_>>()?;
    let members = rows.iter().filter(|r| r.member).count();
    Ok(BadSetScan { x, y, m_threshold: m, m_floor, total: rows.len(), members, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::prime_pi;
    use crate::exponents::q;

    fn fd(d: i64) -> FundamentalDiscriminant {
        FundamentalDiscriminant::new(d).unwrap()
    }

    fn poly(s: &str) -> ZPoly {
        s.parse().unwrap()
    }

    #[test]
    fn quadratic_examples() {
        let r = split_count_quadratic(fd(-4), 20, true);
        assert_eq!((r.count, r.primes.unwrap()), (3, vec![5, 13, 17]));
        assert_eq!(split_count_quadratic(fd(-4), 3, false).count, 0);
        let r = split_count_quadratic(fd(5), 30, true);
        assert_eq!(r.primes.unwrap(), vec![11, 19, 29]);
    }

    #[test]
    fn polynomial_examples() {
        let r = split_count_poly(&poly("x^3-x^2-2x+1"), 30, true).unwrap();
        assert_eq!(r.primes.unwrap(), vec![13, 29]);
        assert_eq!(split_count_poly(&poly("x^2+1"), 20, false).unwrap().count, 3);
        assert_eq!(split_count_poly(&poly("x^3-2"), 7, false).unwrap().count, 0);
        assert_eq!(split_count_poly(&poly("x^3-2"), 31, true).unwrap().primes.unwrap(), vec![31]);
        assert!(matches!(split_count_poly(&poly("x^2-1"), 20, false), Err(Error::Reducible(_))));
    }

    #[test]
    fn membership_examples() {
        let k = FieldSpec::Quadratic(fd(-4));
        assert!(!bad_set_membership(&k, 3, 20, 2.0).unwrap());
        assert!(bad_set_membership(&k, 3, 20, 3.0).unwrap());
        assert!(bad_set_membership(&k, 3, 20, 3.7).unwrap());
        // outside the window
        assert!(!bad_set_membership(&k, 5, 20, 100.0).unwrap());
        let pi = prime_pi(20) as f64;
        for d in [-3, -4, 5] {
            assert!(bad_set_membership(&FieldSpec::Quadratic(fd(d)), 3, 20, pi).unwrap());
        }
    }

    #[test]
    fn floor_powers() {
        assert_eq!(floor_power(10_000, &q(1, 4)).unwrap(), 10);
        assert_eq!(floor_power(9_999, &q(1, 4)).unwrap(), 9);
        assert_eq!(floor_power(8, &q(2, 3)).unwrap(), 4);
    }

    #[test]
    fn bad_set_scan_monotone_in_c() {
        let fam = BadSetFamily::Quadratic(Sign::Both);
        let a = bad_set_scan(&fam, 10_000, &q(1, 4), &q(1, 1)).unwrap();
        let b = bad_set_scan(&fam, 10_000, &q(1, 4), &q(1, 2)).unwrap();
        assert_eq!(a.y, 10);
        assert!(a.members <= a.total);
        assert!(b.members <= a.members);
        assert_eq!(a.total, b.total);
    }
}
