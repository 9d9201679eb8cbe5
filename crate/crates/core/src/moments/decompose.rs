//! Split a dyadic window of fields by the size of eta and by membership in the
//! set of fields with few small split primes.

use super::{FamilyScan, FieldRecord};
use crate::error::{Error, Result};
use crate::eta::{eta_exact_quadratic, EtaOutcome};
use crate::exponents::{to_f64, Q};
use crate::splitprimes::{bad_set_membership, floor_power, FieldSpec};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PartStats {
    pub size: u64,
    /// `sum #Cl_K[l]` over the part.
    pub torsion_sum: u64,
}

impl PartStats {
    fn add(&mut self, t: u64) {
        self.size += 1;
        self.torsion_sum += t;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionReport {
    #[serde(rename = "X")]
    pub x: u64,
    pub delta0: String,
    pub ell: u32,
    pub eps: String,
    pub c: String,
    /// `Y = X^((1 - eps) delta0)`.
    pub y: u64,
    /// `M = c X^((1 - eps) delta0) / log X`.
    pub m_threshold: f64,
    pub window_size: u64,
    /// `eta_l(K) <= D_K^(delta0 l)`.
    pub m0: PartStats,
    /// Large eta, outside the bad set.
    pub m1_prime: PartStats,
    /// Large eta, inside the bad set.
    pub m1_double: PartStats,
    /// Fields whose eta could not be compared with the threshold.
    pub unresolved: PartStats,
    pub unresolved_fields: Vec<i64>,
}

enum EtaClass {
    Small,
    Large,
    Unknown,
}

/// `value <= D^(delta0 l)` for an integer value, exactly.
fn below_threshold(value: &BigInt, abs_d: u64, delta0: &Q, ell: u32) -> Option<bool> {
    let num = delta0.numer().to_u32()?;
    let den = delta0.denom().to_u32()?;
    Some(value.pow(den) <= BigInt::from(abs_d).pow(num * ell))
}

fn classify_eta(r: &FieldRecord, delta0: &Q, ell: u32) -> EtaClass {
    // any witness involves a split prime of norm at most eta^(1/l), so primes
    // up to D^delta0 decide the comparison
    let Ok(bound) = floor_power(r.abs_disc(), delta0) else { return EtaClass::Unknown };
    if bound < 2 {
        return EtaClass::Large;
    }
    match eta_exact_quadratic(r.discriminant(), ell, Some(bound), bound) {
        Ok(EtaOutcome::Unresolved { .. }) => EtaClass::Large,
        Ok(EtaOutcome::Found(cert)) => {
            if cert.value_exact.is_none() {
                match below_threshold(&cert.value, r.abs_disc(), delta0, ell) {
                    Some(true) => EtaClass::Small,
                    Some(false) => EtaClass::Large,
                    None => EtaClass::Unknown,
                }
            } else {
                let lhs = cert.height.to_f64().ln();
                let rhs = to_f64(delta0) * ell as f64 * (r.abs_disc() as f64).ln();
                if (lhs - rhs).abs() < 1e-9 * rhs.abs().max(1.0) {
                    EtaClass::Unknown
                } else if lhs < rhs {
                    EtaClass::Small
                } else {
                    EtaClass::Large
                }
            }
        }
        Err(_) => EtaClass::Unknown,
    }
}

/// Partition of the fields with `X <= D_K < 2X` into small-eta fields,
/// large-eta fields outside the bad set `B(X; Y, M)`, and those inside it.
pub fn decompose_window(scan: &FamilyScan, x: u64, delta0: &Q, ell: u32, c: &Q, eps: &Q) -> Result<DecompositionReport> {
    if x < 3 {
        return Err(Error::InvalidArgument("X must be at least 3".into()));
    }
    if !(delta0 > &Q::from_integer(0.into())) {
        return Err(Error::InvalidArgument("delta0 must be positive".into()));
    }
    if eps < &Q::from_integer(0.into()) || eps >= &Q::one() {
        return Err(Error::InvalidArgument("eps must lie in [0, 1)".into()));
    }
    scan.check_covers(2 * x - 1)?;
    let window = scan.window(x, 2 * x - 1);
    let delta_y = (Q::one() - eps) * delta0;
    let y = floor_power(x, &delta_y)?;
    let ln_x = (x as f64).ln();
    let m = to_f64(c) * (to_f64(&delta_y) * ln_x).exp() / ln_x;
    let classes: Vec<(EtaClass, bool)> = window
        .par_iter()
        .map(|r| {
            let class = classify_eta(r, delta0, ell);
            let bad = bad_set_membership(&FieldSpec::Quadratic(r.discriminant()), x, y, m)?;
            Ok((class, bad))
        })
        .collect::<Result<_>>()?;
    let mut report = DecompositionReport {
        x,
        delta0: delta0.to_string(),
        ell,
        eps: eps.to_string(),
        c: c.to_string(),
        y,
        m_threshold: m,
        window_size: window.len() as u64,
        m0: PartStats::default(),
        m1_prime: PartStats::default(),
        m1_double: PartStats::default(),
        unresolved: PartStats::default(),
        unresolved_fields: Vec::new(),
    };
    for (r, (class, bad)) in window.iter().zip(classes) {
        let t = r.torsion(ell as u64);
        match class {
            EtaClass::Small => report.m0.add(t),
            EtaClass::Large if bad => report.m1_double.add(t),
            EtaClass::Large => report.m1_prime.add(t),
            EtaClass::Unknown => {
                report.unresolved.add(t);
                report.unresolved_fields.push(r.d);
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Sign;
    use crate::exponents::q;
    use crate::moments::{scan_family, ScanOptions};

    fn total(r: &DecompositionReport) -> u64 {
        r.m0.size + r.m1_prime.size + r.m1_double.size + r.unresolved.size
    }

    #[test]
    fn parts_partition_the_window() {
        let s = scan_family(Sign::Imaginary, 1999, &ScanOptions::default()).unwrap();
        let r = decompose_window(&s, 1000, &q(1, 12), 2, &q(1, 1), &q(1, 10)).unwrap();
        assert_eq!(total(&r), r.window_size);
        assert_eq!(r.window_size as usize, s.window(1000, 1999).len());
        assert!(r.window_size > 0);
        // D^(1/12) < 2 here, so no field has small eta
        assert_eq!(r.m0.size, 0);
    }

    #[test]
    fn tiny_delta_leaves_m0_empty() {
        let s = scan_family(Sign::Imaginary, 399, &ScanOptions::default()).unwrap();
        let r = decompose_window(&s, 200, &q(1, 1_000_000), 1, &q(1, 1), &q(1, 10)).unwrap();
        assert_eq!(r.m0.size, 0);
        assert_eq!(total(&r), r.window_size);
    }

    #[test]
    fn large_delta_fills_m0() {
        // with delta0 = 1 and l = 1 eta(K) <= D_K as soon as two split primes are small
        let s = scan_family(Sign::Imaginary, 399, &ScanOptions::default()).unwrap();
        let r = decompose_window(&s, 200, &q(1, 1), 1, &q(1, 1), &q(1, 10)).unwrap();
        assert!(r.m0.size > 0);
        assert_eq!(total(&r), r.window_size);
    }
}
