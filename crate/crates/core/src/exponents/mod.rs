//! Exact exponent bookkeeping for torsion moment bounds.
//!
//! Two entry points turn counting exponents into moment exponents:
//! [`exponent_delta0`] (a bad-set bound that weakens as the split-prime
//! window shrinks) and [`exponent_tau`] (a uniform bad-set bound `X^tau`).
//! All values are the exponents with the arbitrary `+eps` dropped.

mod presets;

pub use presets::{
    delta0, dihedral_exponents, evaluate, theorem_presets, ExponentQuery, Family, PresetParams,
    PresetRow, ALL_FAMILIES,
};

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parses `7`, `-3/4`, `0.125` or `1e-3` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Q::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits: BigInt = format!("{int_part}{frac_part}0").parse().map_err(|_| bad())?;
    let scale = exp - frac_part.len() as i32 - 1;
    let ten = BigInt::from(10);
    let mut v = Q::from_integer(digits);
    if scale >= 0 {
        v *= Q::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        v /= Q::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -v } else { v })
}

/// `n` or `n/d`, as used in rendered formulas.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn to_f64(x: &Q) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

/// Which side of the min/max in an exponent formula was active.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// Saving limited by the bad-set exponent `delta0`.
    DeltaZero,
    /// Saving `rho/(l theta + 1)`.
    Balanced,
    /// Saving `rho k/(l theta)` with `q = k/(l theta) < 1`.
    PartialSaving,
    /// The whole `rho` is saved (`q >= 1`).
    FullSaving,
    /// The bad-set term `k/2 + tau` dominates.
    ExceptionalSet,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Branch::DeltaZero => "delta0",
            Branch::Balanced => "balanced",
            Branch::PartialSaving => "partial-saving",
            Branch::FullSaving => "full-saving",
            Branch::ExceptionalSet => "exceptional-set",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentResult {
    pub exponent: Q,
    pub branch: Branch,
    pub formula: String,
}

fn require_positive(name: &str, x: &Q) -> Result<()> {
    if x.is_positive() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must be positive, got {}", fmt_q(x))))
    }
}

fn require_ell(ell: u64) -> Result<()> {
    if ell == 0 {
        return Err(Error::InvalidArgument("ell must be at least 1".into()));
    }
    Ok(())
}

/// `1/2 + rho - min(delta0, rho/(l theta + 1))`.
pub fn exponent_delta0(theta: &Q, rho: &Q, delta0: &Q, ell: u64) -> Result<ExponentResult> {
    require_positive("theta", theta)?;
    require_positive("rho", rho)?;
    require_positive("delta0", delta0)?;
    require_ell(ell)?;
    let l = qi(ell as i64);
    let balanced = rho / (&l * theta + qi(1));
    let (saving, branch) = if delta0 <= &balanced {
        (delta0.clone(), Branch::DeltaZero)
    } else {
        (balanced.clone(), Branch::Balanced)
    };
    let exponent = q(1, 2) + rho - &saving;
    let formula = format!(
        "1/2 + {} - min{{{}, {}}} + ε = {} + ε",
        fmt_q(rho),
        fmt_q(delta0),
        fmt_q(&balanced),
        fmt_q(&exponent)
    );
    Ok(ExponentResult { exponent, branch, formula })
}

/// `max(k/2 + rho - min(rho, rho k/(l theta)), k/2 + tau)`.
pub fn exponent_tau(theta: &Q, rho: &Q, tau: &Q, ell: u64, k: &Q) -> Result<ExponentResult> {
    require_positive("theta", theta)?;
    require_positive("rho", rho)?;
    require_ell(ell)?;
    if tau.is_negative() {
        return Err(Error::InvalidArgument("tau must be nonnegative".into()));
    }
    if k.is_negative() {
        return Err(Error::InvalidArgument("k must be nonnegative".into()));
    }
    let l = qi(ell as i64);
    let half_k = k / qi(2);
    let ratio = rho * k / (&l * theta);
    let (saving, mut branch) = if &ratio < rho {
        (ratio.clone(), Branch::PartialSaving)
    } else {
        (rho.clone(), Branch::FullSaving)
    };
    let first = &half_k + rho - &saving;
    let second = &half_k + tau;
    let exponent = if second > first {
        branch = Branch::ExceptionalSet;
        second
    } else {
        first
    };
    let formula = format!(
        "max({} + {} - min{{{}, {}}}, {} + {}) + ε = {} + ε",
        fmt_q(&half_k),
        fmt_q(rho),
        fmt_q(rho),
        fmt_q(&ratio),
        fmt_q(&half_k),
        fmt_q(tau),
        fmt_q(&exponent)
    );
    Ok(ExponentResult { exponent, branch, formula })
}

/// The level sequence `gamma_0 <= ... <= gamma_N` that balances the pieces of
/// the moment sum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaSequence {
    pub n: usize,
    /// `q = k/(l theta)`.
    pub q: Q,
    /// `Q_i = sum_{r <= i} q^r`.
    pub partial_sums: Vec<Q>,
    pub gamma: Vec<Q>,
    /// `lim gamma_0(N)`: `rho/theta - rho k/(l theta^2)` if `q < 1`, else 0.
    pub gamma_tilde0: Q,
    theta: Q,
    rho: Q,
    ell: u64,
    k: Q,
}

impl GammaSequence {
    /// The common value `k/2 + gamma_0 theta` of all pieces.
    pub fn plateau(&self) -> Q {
        &self.k / qi(2) + &self.gamma[0] * &self.theta
    }

    /// Checks `k/2 + g0 theta = k/2 - g_{i-1} k/l + g_i theta = k/2 + rho - g_N k/l`.
    pub fn plateau_holds(&self) -> bool {
        let l = qi(self.ell as i64);
        let half_k = &self.k / qi(2);
        let target = self.plateau();
        let inner = (1..=self.n).all(|i| {
            &half_k - &self.gamma[i - 1] * &self.k / &l + &self.gamma[i] * &self.theta == target
        });
        let last = &half_k + &self.rho - &self.gamma[self.n] * &self.k / &l;
        inner && last == target
    }
}

fn gamma_tilde0(theta: &Q, rho: &Q, ell: u64, k: &Q) -> Q {
    let l = qi(ell as i64);
    let qv = k / (&l * theta);
    if qv < qi(1) {
        rho / theta - rho * k / (&l * theta * theta)
    } else {
        Q::zero()
    }
}

fn gamma0(theta: &Q, rho: &Q, ell: u64, k: &Q, q_n: &Q) -> Q {
    let l = qi(ell as i64);
    rho * &l / (&l * theta + k * q_n)
}

pub fn gamma_sequence(theta: &Q, rho: &Q, ell: u64, k: &Q, n: usize) -> Result<GammaSequence> {
    require_positive("theta", theta)?;
    require_positive("rho", rho)?;
    require_ell(ell)?;
    if k.is_negative() {
        return Err(Error::InvalidArgument("k must be nonnegative".into()));
    }
    let l = qi(ell as i64);
    let qv = k / (&l * theta);
    let mut partial_sums = Vec::with_capacity(n + 1);
    let mut power = Q::one();
    let mut acc = Q::zero();
    for _ in 0..=n {
        acc += &power;
        partial_sums.push(acc.clone());
        power *= &qv;
    }
    let g0 = gamma0(theta, rho, ell, k, &partial_sums[n]);
    let gamma = partial_sums.iter().map(|qi| &g0 * qi).collect();
    Ok(GammaSequence {
        n,
        q: qv,
        partial_sums,
        gamma,
        gamma_tilde0: gamma_tilde0(theta, rho, ell, k),
        theta: theta.clone(),
        rho: rho.clone(),
        ell,
        k: k.clone(),
    })
}

/// Largest N tried by [`choose_n`].
pub const CHOOSE_N_LIMIT: usize = 1_000_000;

/// Smallest `N` with `gamma_0(N) theta <= gamma~_0 theta + eps`.
pub fn choose_n(theta: &Q, rho: &Q, ell: u64, k: &Q, eps: &Q) -> Result<usize> {
    require_positive("theta", theta)?;
    require_positive("rho", rho)?;
    require_positive("eps", eps)?;
    require_ell(ell)?;
    let l = qi(ell as i64);
    let qv = k / (&l * theta);
    let target = gamma_tilde0(theta, rho, ell, k) * theta + eps;
    let mut power = Q::one();
    let mut q_n = Q::zero();
    for n in 0..=CHOOSE_N_LIMIT {
        q_n += &power;
        if gamma0(theta, rho, ell, k, &q_n) * theta <= target {
            return Ok(n);
        }
        power *= &qv;
    }
    Err(Error::Unsupported(format!("no N <= {CHOOSE_N_LIMIT} reaches the tolerance")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_rationals() {
        assert_eq!(parse_rational("2/25").unwrap(), q(2, 25));
        assert_eq!(parse_rational("-3").unwrap(), qi(-3));
        assert_eq!(parse_rational("0.125").unwrap(), q(1, 8));
        assert_eq!(parse_rational("1e-3").unwrap(), q(1, 1000));
        assert_eq!(parse_rational("1e6").unwrap(), qi(1_000_000));
        assert_eq!(parse_rational("2.5e1").unwrap(), qi(25));
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn delta0_examples() {
        let r = exponent_delta0(&(qi(2) + q(2, 3)), &qi(1), &q(2, 25), 3).unwrap();
        assert_eq!(r.exponent, q(71, 50));
        assert_eq!(r.branch, Branch::DeltaZero);
        let r = exponent_delta0(&qi(6), &qi(1), &q(1, 200), 1).unwrap();
        assert_eq!(r.exponent, q(3, 2) - q(1, 200));
        let r = exponent_delta0(&q(5, 3), &qi(1), &qi(1_000_000), 3).unwrap();
        assert_eq!(r.exponent, q(1, 2) + qi(1) - q(1, 6));
        assert_eq!(r.branch, Branch::Balanced);
        assert!(exponent_delta0(&qi(0), &qi(1), &qi(1), 1).is_err());
    }

    #[test]
    fn tau_examples() {
        let r = exponent_tau(&q(5, 3), &qi(1), &qi(0), 3, &qi(1)).unwrap();
        assert_eq!(r.exponent, q(13, 10));
        assert_eq!(r.branch, Branch::PartialSaving);
        let r = exponent_tau(&qi(3), &qi(1), &qi(0), 1, &qi(4)).unwrap();
        assert_eq!(r.exponent, qi(2));
        assert_eq!(r.branch, Branch::FullSaving);
        let r = exponent_tau(&qi(3), &q(1, 10), &q(1, 4), 1, &qi(1)).unwrap();
        assert_eq!(r.branch, Branch::ExceptionalSet);
        assert_eq!(r.exponent, q(3, 4));
        assert!(exponent_tau(&qi(1), &qi(-1), &qi(0), 1, &qi(1)).is_err());
    }

    #[test]
    fn gamma_sequence_examples() {
        let s = gamma_sequence(&q(5, 3), &qi(1), 3, &qi(1), 0).unwrap();
        assert_eq!(s.gamma[0], qi(3) / (qi(5) + qi(1)));
        assert!(s.plateau_holds());
        let s = gamma_sequence(&q(5, 3), &qi(1), 3, &qi(1), 3).unwrap();
        assert!(s.plateau_holds());
        // q < 1: gamma_0(N) decreases toward the limit
        let mut prev = None;
        for n in 1..=50 {
            let s = gamma_sequence(&q(5, 3), &qi(1), 3, &qi(1), n).unwrap();
            assert!(s.gamma[0] > s.gamma_tilde0);
            if let Some(p) = prev {
                assert!(s.gamma[0] < p);
            }
            prev = Some(s.gamma[0].clone());
        }
        let s = gamma_sequence(&q(5, 3), &qi(1), 3, &qi(1), 60).unwrap();
        let closed = qi(1) / q(5, 3) - qi(1) / (qi(3) * q(25, 9));
        assert_eq!(s.gamma_tilde0, closed);
        assert!(to_f64(&(&s.gamma[0] - &closed)).abs() < 1e-12);
    }

    #[test]
    fn choose_n_examples() {
        assert_eq!(choose_n(&q(5, 3), &qi(1), 3, &qi(1), &qi(100)).unwrap(), 0);
        let n = choose_n(&qi(3), &qi(1), 1, &qi(4), &q(1, 100)).unwrap();
        let s = gamma_sequence(&qi(3), &qi(1), 1, &qi(4), n).unwrap();
        assert!(&s.gamma[0] * qi(3) <= q(1, 100));
        let s = gamma_sequence(&qi(3), &qi(1), 1, &qi(4), n - 1).unwrap();
        assert!(&s.gamma[0] * qi(3) > q(1, 100));
        let n = choose_n(&q(5, 3), &qi(1), 3, &qi(1), &q(1, 1000)).unwrap();
        assert_eq!(n, 3);
    }
}
