//! Independent checks for eta: element enumeration with p-adic valuations, and
//! a discrete-log test of the pigeonhole mechanism behind the eta lower bound.

use super::{split_prime_ideals, PrimeIdeal};
use crate::arith::{is_prime, sqrt_mod_prime, FundamentalDiscriminant};
use crate::classgroup::{class_group_structure, FiniteAbelianGroup, ImaginaryGroup, QuadraticForm};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Zero};
use std::collections::HashMap;

/// A square root of `d` in Z_p modulo `p^k`, if `p` splits (d a nonzero square, or d = 1 mod 8 at 2).
fn padic_sqrt(d: i64, p: u64, k: u32) -> Option<BigInt> {
    let dd = BigInt::from(d);
    if p == 2 {
        if d.rem_euclid(8) != 1 {
            return None;
        }
        // s^2 = d mod 2^j lifts to s or s + 2^(j-1) mod 2^(j+1)
        let mut s = BigInt::one();
        for j in 3..=k + 1 {
            let m = BigInt::one() << (j + 1);
            if !(&s * &s - &dd).is_multiple_of(&m) {
                s += BigInt::one() << (j - 1);
            }
        }
        return Some(s.mod_floor(&(BigInt::one() << k)));
    }
    let r = sqrt_mod_prime(d.rem_euclid(p as i64) as u64, p)?;
    if r == 0 {
        return None;
    }
    // Newton iteration in Z/p^k
    let pb = BigInt::from(p);
    let modulus = pb.pow(k);
    let mut s = BigInt::from(r);
    let mut prec = 1;
    while prec < k {
        prec = (2 * prec).min(k);
        let m = pb.pow(prec);
        let inv = (BigInt::from(2) * &s).modinv(&m)?;
        s = (&s - (&s * &s - &dd) * inv).mod_floor(&m);
    }
    Some(s.mod_floor(&modulus))
}

fn valuation(n: &BigInt, p: u64) -> u32 {
    let pb = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    while !n.is_zero() && n.is_multiple_of(&pb) {
        n /= &pb;
        v += 1;
    }
    v
}

/// Valuations of `(u + v sqrt D)/2` at the two primes above a split `p`,
/// for the embeddings `sqrt D -> s` and `sqrt D -> -s`. `k` bounds the valuations.
fn valuations_at(u: &BigInt, v: &BigInt, s: &BigInt, p: u64, k: u32) -> (u32, u32) {
    let m = BigInt::from(p).pow(k + 2);
    let plus = (u + v * s).mod_floor(&m);
    let minus = (u - v * s).mod_floor(&m);
    let val = |x: &BigInt| {
        let w = if x.is_zero() { k + 2 } else { valuation(x, p) };
        if p == 2 {
            w - 1
        } else {
            w
        }
    };
    (val(&plus), val(&minus))
}

/// Least height `<= height_bound` of an element of `Q(sqrt D)`, `D < 0`, whose
/// principal ideal is `(p1 / p2)^l` for distinct degree-1 unramified primes.
///
/// Elements are enumerated through their primitive minimal polynomials
/// `a0 X^2 + a1 X + a2`; the ideal shape is read off p-adic valuations.
pub fn eta_brute_oracle(d: FundamentalDiscriminant, ell: u32, height_bound: u64) -> Result<Option<u64>> {
    if !d.is_imaginary() {
        return Err(Error::InvalidArgument("the element oracle covers imaginary fields".into()));
    }
    if ell == 0 {
        return Err(Error::InvalidArgument("ell must be at least 1".into()));
    }
    let dv = d.value();
    // H = max(a0, a2) for imaginary fields, and the shape forces a0 = p2^l, a2 = p1^l
    let powers: Vec<(u64, u64)> = (2..)
        .map_while(|p: u64| p.checked_pow(ell).filter(|&q| q <= height_bound).map(|q| (p, q)))
        .filter(|&(p, _)| is_prime(p))
        .collect();
    let mut best: Option<u64> = None;
    for &(p2, a0) in &powers {
        for &(p1, a2) in &powers {
            let h = a0.max(a2);
            if best.is_some_and(|b| h >= b) {
                continue;
            }
            let k = 2 * ell + 2;
            let (Some(s1), Some(s2)) = (padic_sqrt(dv, p1, k), padic_sqrt(dv, p2, k)) else {
                continue;
            };
            let four_ac = 4 * a0 as i128 * a2 as i128;
            let a1_max = (four_ac as u128).sqrt() as i128;
            for a1 in -a1_max..=a1_max {
                let disc = a1 * a1 - four_ac;
                if disc >= 0 || disc % dv as i128 != 0 {
                    continue;
                }
                let fsq = disc / dv as i128;
                let f = (fsq as u128).sqrt() as i128;
                if f * f != fsq || (a1 as i64).gcd(&(a0 as i64)).gcd(&(a2 as i64)) != 1 {
                    continue;
                }
                // both roots (-a1 +- f sqrt D) / (2 a0)
                for sign in [1i128, -1] {
                    let u = BigInt::from(-a1);
                    let v = BigInt::from(sign * f);
                    let (n1, c1) = valuations_at(&u, &v, &s1, p1, k);
                    let (n2, c2) = valuations_at(&u, &v, &s2, p2, k);
                    // valuations of alpha = beta / a0
                    let e = ell as i64;
                    let shape = if p1 == p2 {
                        let (x, y) = (n1 as i64 - e, c1 as i64 - e);
                        (x == e && y == -e) || (x == -e && y == e)
                    } else {
                        let num_ok = (n1 as i64, c1 as i64) == (e, 0) || (n1 as i64, c1 as i64) == (0, e);
                        let (x, y) = (n2 as i64 - e, c2 as i64 - e);
                        num_ok && ((x, y) == (-e, 0) || (x, y) == (0, -e))
                    };
                    if shape {
                        best = Some(best.map_or(h, |b| b.min(h)));
                    }
                }
            }
        }
    }
    Ok(best)
}

/// Pairs of distinct split prime ideals with `max norm^l < eta` whose class
/// quotient is l-torsion, found through discrete logs in the class group.
pub fn mechanism_violations(d: FundamentalDiscriminant, ell: u32, eta: &BigInt) -> Result<Vec<(PrimeIdeal, PrimeIdeal)>> {
    if !d.is_imaginary() {
        return Err(Error::InvalidArgument("the mechanism check covers imaginary fields".into()));
    }
    let dv = d.value();
    let s = class_group_structure(d, false)?;
    let g = ImaginaryGroup { d: dv };
    // exponent vector of every class over the invariant-factor generators
    let mut dlog: HashMap<QuadraticForm, Vec<u64>> = HashMap::new();
    dlog.insert(g.identity(), vec![0; s.generators.len()]);
    for (i, (gen, &n)) in s.generators.iter().zip(&s.elementary_divisors).enumerate() {
        let current: Vec<(QuadraticForm, Vec<u64>)> = dlog.iter().map(|(k, v)| (*k, v.clone())).collect();
        for (x, v) in current {
            let mut y = x;
            for e in 1..n {
                y = g.op(&y, gen);
                let mut w = v.clone();
                w[i] = e;
                dlog.insert(y, w);
            }
        }
    }
    if dlog.len() as u64 != s.order() {
        return Err(Error::Internal("discrete log table is incomplete".into()));
    }
    let mut bound = 1u64;
    while BigInt::from(bound + 1).pow(ell) < *eta {
        bound += 1;
    }
    let ideals = split_prime_ideals(dv, bound);
    let logs: Vec<&Vec<u64>> = ideals
        .iter()
        .map(|i| {
            &dlog[&i.small_form(dv).reduce_imaginary()]
        })
        .collect();
    let mut out = Vec::new();
    for i in 0..ideals.len() {
        for j in 0..i {
            let torsion = logs[i]
                .iter()
                .zip(logs[j])
                .zip(&s.elementary_divisors)
                .all(|((a, b), n)| (ell as u64 * ((a + n - b) % n)).is_multiple_of(*n));
            if torsion {
                out.push((ideals[j].clone(), ideals[i].clone()));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd(d: i64) -> FundamentalDiscriminant {
        FundamentalDiscriminant::new(d).unwrap()
    }

    #[test]
    fn padic_roots_square_to_d() {
        for (d, p) in [(-7i64, 2u64), (-23, 2), (-4, 5), (-23, 3), (-15, 17)] {
            let k = 12;
            let s = padic_sqrt(d, p, k).unwrap();
            let m = BigInt::from(p).pow(k);
            assert!((&s * &s - BigInt::from(d)).is_multiple_of(&m), "D={d} p={p}");
        }
        assert!(padic_sqrt(-4, 3, 5).is_none());
        assert!(padic_sqrt(-3, 2, 5).is_none());
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(eta_brute_oracle(fd(-4), 1, 10).unwrap(), Some(5));
        assert_eq!(eta_brute_oracle(fd(-3), 1, 6).unwrap(), None);
        assert_eq!(eta_brute_oracle(fd(-23), 3, 8).unwrap(), Some(8));
        assert_eq!(eta_brute_oracle(fd(-4), 2, 30).unwrap(), Some(25));
    }

    #[test]
    fn no_violations_below_eta() {
        assert!(mechanism_violations(fd(-23), 3, &8.into()).unwrap().is_empty());
        // at the eta value itself the conjugate pair above 2 appears
        let v = mechanism_violations(fd(-23), 3, &9.into()).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!((v[0].0.p, v[0].1.p), (2, 2));
    }
}
