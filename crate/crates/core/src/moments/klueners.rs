//! Upper-bound sums for the number of dihedral fields of degree `p` and `2p`.

use super::{scan_family, FieldRecord, ScanOptions};
use crate::arith::{iroot, is_prime, Sign};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KluenersVariant {
    /// Degree-`p` fields: `D_K^((p-1)/2) b^(p-1) <= X`.
    Degree,
    /// Degree-`2p` fields: `D_K^p b^(2(p-1)) <= X`.
    Double,
}

impl KluenersVariant {
    pub fn from_index(i: u32) -> Result<Self> {
        match i {
            1 => Ok(KluenersVariant::Degree),
            2 => Ok(KluenersVariant::Double),
            _ => Err(Error::InvalidArgument(format!("variant must be 1 or 2, got {i}"))),
        }
    }

    /// Exponents `(e_D, e_b)` of the condition `D_K^e_D b^e_b <= X`.
    fn exponents(self, p: u64) -> (u32, u32) {
        match self {
            KluenersVariant::Degree => (((p - 1) / 2) as u32, (p - 1) as u32),
            KluenersVariant::Double => (p as u32, 2 * (p - 1) as u32),
        }
    }

    /// Largest `D_K` admitting `b = 1`.
    pub fn max_disc(self, p: u64, x: u64) -> u64 {
        iroot(x, self.exponents(p).0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DihedralBoundResult {
    pub p: u64,
    #[serde(rename = "X")]
    pub x: u64,
    pub variant: KluenersVariant,
    pub sign: String,
    /// `sum (p^(omega(b) + r_K) - 1)/(p - 1)`.
    pub value: String,
    /// Pairs `(K, b)` with a nonzero term.
    pub nonzero_terms: u64,
}

fn omega_table(limit: usize) -> Vec<u32> {
    let mut w = vec![0u32; limit + 1];
    for p in 2..=limit {
        if w[p] == 0 {
            for m in (p..=limit).step_by(p) {
                w[m] += 1;
            }
        }
    }
    w
}

fn check_p(p: u64) -> Result<()> {
    if p < 3 || !is_prime(p) {
        return Err(Error::InvalidArgument(format!("p must be an odd prime, got {p}")));
    }
    Ok(())
}

/// The bound sum over `b >= 1` and the given fields, which must include every
/// field of the chosen signatures with `D_K` up to `variant.max_disc(p, x)`.
pub fn klueners_from_records(records: &[FieldRecord], p: u64, x: u64, variant: KluenersVariant, sign: Sign) -> Result<DihedralBoundResult> {
    check_p(p)?;
    let (ed, eb) = variant.exponents(p);
    let bmax_all = iroot(x, eb) as usize;
    let omega = omega_table(bmax_all.max(1));
    // counts[w][n] = #{b <= n : omega(b) = w}
    let wmax = omega.iter().copied().max().unwrap_or(0) as usize;
    let mut counts = vec![vec![0u64; bmax_all + 1]; wmax + 1];
    for n in 1..=bmax_all {
        for (w, row) in counts.iter_mut().enumerate() {
            row[n] = row[n - 1] + u64::from(omega[n] as usize == w);
        }
    }
    let pb = BigInt::from(p);
    let mut value = BigInt::zero();
    let mut nonzero_terms = 0u64;
    for r in records.iter().filter(|r| sign.admits(r.d)) {
        let Some(dpow) = (r.abs_disc() as u128).checked_pow(ed).filter(|&v| v <= x as u128) else { continue };
        let bmax = iroot((x as u128 / dpow) as u64, eb) as usize;
        let rank = r.p_rank(p) as usize;
        for (w, row) in counts.iter().enumerate() {
            let n = row[bmax];
            if n == 0 || w + rank == 0 {
                continue;
            }
            let term = (pb.pow((w + rank) as u32) - BigInt::one()) / (p - 1);
            value += term * n;
            nonzero_terms += n;
        }
    }
    Ok(DihedralBoundResult { p, x, variant, sign: sign.label().to_string(), value: value.to_string(), nonzero_terms })
}

/// The bound sum with fields of the given signatures scanned as needed.
pub fn klueners_bound_sum(p: u64, x: u64, variant: KluenersVariant, sign: Sign, opts: &ScanOptions) -> Result<DihedralBoundResult> {
    check_p(p)?;
    if x < 3 {
        return Err(Error::InvalidArgument("X must be at least 3".into()));
    }
    let dmax = variant.max_disc(p, x).max(3);
    let scan = scan_family(sign, dmax, opts)?;
    klueners_from_records(&scan.records, p, x, variant, sign)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{fundamental_discriminants_abs, omega};
    use crate::classgroup::{class_group_structure, p_rank};

    fn sum(p: u64, x: u64, v: KluenersVariant) -> BigInt {
        klueners_bound_sum(p, x, v, Sign::Both, &ScanOptions::default()).unwrap().value.parse().unwrap()
    }

    /// Term-by-term evaluation straight from the class group structure.
    fn brute(p: u64, x: u64, v: KluenersVariant) -> BigInt {
        let (ed, eb) = v.exponents(p);
        let mut total = BigInt::zero();
        for d in fundamental_discriminants_abs(3, x, Sign::Both) {
            let s = class_group_structure(d, false).unwrap();
            let r = p_rank(&s.elementary_divisors, p);
            let mut b = 1u64;
            while (d.abs() as u128).pow(ed) * (b as u128).pow(eb) <= x as u128 {
                total += (BigInt::from(p).pow(omega(b) + r) - 1) / (p - 1);
                b += 1;
            }
        }
        total
    }

    #[test]
    fn small_values() {
        assert_eq!(sum(3, 5, KluenersVariant::Degree), BigInt::zero());
        // D = -23 with b = 1, and D in {-3, -4, 5} with b = 2
        assert_eq!(sum(3, 23, KluenersVariant::Degree), BigInt::from(4));
        assert_eq!(sum(3, 22, KluenersVariant::Degree), BigInt::from(3));
    }

    #[test]
    fn matches_term_by_term() {
        for (p, x) in [(3, 500), (3, 2000), (5, 10_000), (7, 50_000)] {
            for v in [KluenersVariant::Degree, KluenersVariant::Double] {
                assert_eq!(sum(p, x, v), brute(p, x, v), "p={p} X={x} {v:?}");
            }
        }
    }

    #[test]
    fn monotone_in_x() {
        let vals: Vec<BigInt> = [100u64, 200, 400, 800].iter().map(|&x| sum(3, x, KluenersVariant::Degree)).collect();
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        assert!(klueners_bound_sum(4, 100, KluenersVariant::Degree, Sign::Both, &ScanOptions::default()).is_err());
    }
}
