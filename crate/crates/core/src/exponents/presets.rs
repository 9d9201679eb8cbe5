//! Parameter choices that turn the two exponent formulas into the bounds for
//! specific families of fields.

use super::{exponent_delta0, exponent_tau, fmt_q, q, qi, ExponentResult, Q};
use crate::arith::is_prime;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Families with a moment bound. The numeric ids `1.1`..`1.8` are accepted as aliases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// All quadratic fields.
    Quadratic,
    /// Degree 3, 4, 5 fields (non-D4 quartics), first moment only.
    LowDegree,
    /// Cyclic cubic fields.
    CyclicCubic,
    /// Quintic D5 fields with reflection-type tame ramification.
    DihedralQuintic,
    /// Quartic D4 fields over a fixed biquadratic field.
    DihedralQuartic,
    /// Any degree-d family under GRH.
    Grh,
    /// Degree-d S_d fields with squarefree discriminant, under strong Artin.
    Symmetric,
    /// Degree-d A_d fields, under strong Artin.
    Alternating,
}

pub const ALL_FAMILIES: [Family; 8] = [
    Family::Quadratic,
    Family::LowDegree,
    Family::CyclicCubic,
    Family::DihedralQuintic,
    Family::DihedralQuartic,
    Family::Grh,
    Family::Symmetric,
    Family::Alternating,
];

impl Family {
    pub fn id(self) -> &'static str {
        match self {
            Family::Quadratic => "1.1",
            Family::LowDegree => "1.2",
            Family::CyclicCubic => "1.3",
            Family::DihedralQuintic => "1.4",
            Family::DihedralQuartic => "1.5",
            Family::Grh => "1.6",
            Family::Symmetric => "1.7",
            Family::Alternating => "1.8",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Quadratic => "quadratic",
            Family::LowDegree => "low-degree",
            Family::CyclicCubic => "cyclic-cubic",
            Family::DihedralQuintic => "dihedral-quintic",
            Family::DihedralQuartic => "dihedral-quartic",
            Family::Grh => "grh",
            Family::Symmetric => "symmetric",
            Family::Alternating => "alternating",
        }
    }

    pub fn parse(s: &str) -> Result<Family> {
        ALL_FAMILIES
            .iter()
            .copied()
            .find(|f| f.id() == s || f.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown theorem id {s:?}")))
    }

    /// Whether the counting exponent holds only for `theta` strictly above the
    /// listed value; the stored exponent is the limit.
    pub fn theta_open(self) -> bool {
        matches!(
            self,
            Family::CyclicCubic | Family::DihedralQuintic | Family::DihedralQuartic | Family::Alternating
        )
    }

    fn default_rho(self) -> Option<Q> {
        match self {
            Family::Quadratic | Family::LowDegree => Some(qi(1)),
            Family::CyclicCubic => Some(q(1, 2)),
            // a valid count exponent for the D5 family, from the dihedral bound below
            Family::DihedralQuintic => Some(q(19, 28)),
            Family::DihedralQuartic | Family::Grh | Family::Symmetric | Family::Alternating => {
                Some(qi(1))
            }
        }
    }

    fn fixed_degree(self) -> Option<u64> {
        match self {
            Family::Quadratic => Some(2),
            Family::CyclicCubic => Some(3),
            Family::DihedralQuintic => Some(5),
            Family::DihedralQuartic => Some(4),
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.id(), self.name())
    }
}

/// `delta0(d)` for d = 3, 4, 5.
pub fn delta0(d: u64) -> Result<Q> {
    match d {
        3 => Ok(q(2, 25)),
        4 => Ok(q(1, 48)),
        5 => Ok(q(1, 200)),
        _ => Err(Error::InvalidArgument(format!("delta0 is only known for d in 3..=5, got {d}"))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresetParams {
    pub d: Option<u64>,
    pub ell: u64,
    pub k: Q,
    pub rho: Option<Q>,
    pub tau: Option<Q>,
}

impl PresetParams {
    pub fn new(ell: u64, k: Q) -> Self {
        PresetParams { d: None, ell, k, rho: None, tau: None }
    }
}

/// Inputs handed to one of the two exponent formulas.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentQuery {
    pub d: u64,
    pub ell: u64,
    pub k: Q,
    pub theta: Q,
    pub rho: Q,
    pub tau: Option<Q>,
    pub delta0: Option<Q>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresetRow {
    pub family: Family,
    pub query: ExponentQuery,
    pub result: ExponentResult,
    /// The family's bound written out in closed form.
    pub stated: Q,
    pub theta_open: bool,
}

fn degree(family: Family, p: &PresetParams) -> Result<u64> {
    if let Some(d) = family.fixed_degree() {
        if p.d.is_some_and(|x| x != d) {
            return Err(Error::InvalidArgument(format!("{family} has degree {d}")));
        }
        return Ok(d);
    }
    let d = p.d.ok_or_else(|| Error::InvalidArgument(format!("{family} needs --d")))?;
    let ok = match family {
        Family::LowDegree => (3..=5).contains(&d),
        Family::Grh => d >= 2,
        Family::Symmetric => d >= 3,
        Family::Alternating => d >= 5,
        _ => true,
    };
    if !ok {
        return Err(Error::InvalidArgument(format!("degree {d} is outside {family}")));
    }
    Ok(d)
}

/// `min{a, b}` as used in the closed forms.
fn min2(a: Q, b: Q) -> Q {
    if a <= b {
        a
    } else {
        b
    }
}

fn max2(a: Q, b: Q) -> Q {
    if a >= b {
        a
    } else {
        b
    }
}

/// Evaluates one family at the given parameters.
pub fn evaluate(family: Family, p: &PresetParams) -> Result<PresetRow> {
    let d = degree(family, p)?;
    let ell = p.ell;
    if ell == 0 {
        return Err(Error::InvalidArgument("ell must be at least 1".into()));
    }
    let l = qi(ell as i64);
    let k = p.k.clone();
    let rho = match (&p.rho, family) {
        (Some(r), Family::Quadratic | Family::LowDegree | Family::CyclicCubic) => {
            if *r != family.default_rho().unwrap() {
                return Err(Error::InvalidArgument(format!(
                    "{family} fixes rho = {}",
                    fmt_q(&family.default_rho().unwrap())
                )));
            }
            r.clone()
        }
        (Some(r), _) => r.clone(),
        (None, _) => family.default_rho().unwrap(),
    };
    let two_over_l = qi(2) / &l;
    let dq = qi(d as i64);
    let theta = match family {
        Family::Quadratic => qi(1) + &two_over_l,
        Family::LowDegree | Family::Grh | Family::Symmetric => &dq - qi(1) + &two_over_l,
        Family::CyclicCubic => q(3, 2) + &two_over_l,
        Family::DihedralQuintic => qi(3) + q(1, 12) + &two_over_l,
        Family::DihedralQuartic => qi(2) + q(1, 3) + &two_over_l,
        Family::Alternating => &dq - q(3, 2) + &two_over_l,
    };
    let tau = match family {
        Family::LowDegree => None,
        Family::DihedralQuintic => Some(q(1, 4)),
        Family::Symmetric => Some(p.tau.clone().ok_or_else(|| {
            Error::InvalidArgument(format!("{family} needs --tau"))
        })?),
        _ => Some(qi(0)),
    };
    if p.tau.is_some() && family != Family::Symmetric {
        return Err(Error::InvalidArgument(format!("{family} fixes tau")));
    }
    let half_k = &k / qi(2);
    let (result, delta0_value, stated) = if family == Family::LowDegree {
        if k != qi(1) {
            return Err(Error::InvalidArgument(format!("{family} bounds the first moment only (k = 1)")));
        }
        let d0 = delta0(d)?;
        let r = exponent_delta0(&theta, &rho, &d0, ell)?;
        let stated = q(3, 2) - min2(d0.clone(), qi(1) / (qi(d as i64 - 1) * &l + qi(3)));
        (r, Some(d0), stated)
    } else {
        let tau_v = tau.clone().unwrap();
        let r = exponent_tau(&theta, &rho, &tau_v, ell, &k)?;
        let stated = match family {
            Family::Quadratic => &half_k + qi(1) - min2(qi(1), &k / (&l + qi(2))),
            Family::CyclicCubic => {
                (&k + qi(1)) / qi(2) - min2(q(1, 2), &k / (qi(3) * &l + qi(4)))
            }
            Family::DihedralQuintic => max2(
                &half_k + &rho - qi(12) * &rho * &k / (qi(37) * &l + qi(24)),
                &half_k + q(1, 4),
            ),
            Family::DihedralQuartic => {
                &half_k + &rho - min2(rho.clone(), qi(3) * &rho * &k / (qi(7) * &l + qi(6)))
            }
            Family::Grh => {
                &half_k + &rho
                    - min2(rho.clone(), &rho * &k / (qi(d as i64 - 1) * &l + qi(2)))
            }
            Family::Symmetric => max2(
                &half_k + &rho - &rho * &k / (qi(d as i64 - 1) * &l + qi(2)),
                &half_k + &tau_v,
            ),
            Family::Alternating => {
                &half_k + &rho
                    - min2(rho.clone(), &rho * &k / ((&dq - q(3, 2)) * &l + qi(2)))
            }
            Family::LowDegree => unreachable!(),
        };
        (r, None, stated)
    };
    Ok(PresetRow {
        family,
        query: ExponentQuery { d, ell, k, theta, rho, tau, delta0: delta0_value },
        result,
        stated,
        theta_open: family.theta_open(),
    })
}

/// One row per family at representative parameters.
pub fn theorem_presets() -> Vec<PresetRow> {
    ALL_FAMILIES
        .iter()
        .map(|&f| {
            let mut p = PresetParams::new(3, qi(1));
            p.d = match f {
                Family::LowDegree | Family::Grh | Family::Symmetric => Some(3),
                Family::Alternating => Some(5),
                _ => None,
            };
            if f == Family::Symmetric {
                p.tau = Some(qi(0));
            }
            evaluate(f, &p).expect("representative parameters are valid")
        })
        .collect()
}

/// Exponents of the two dihedral counting bounds (degree p and degree 2p),
/// obtained by feeding the quadratic first-moment bound at `l = p` into the
/// sums over `b` and quadratic fields.
pub fn dihedral_exponents(p: u64) -> Result<(Q, Q)> {
    if p.is_multiple_of(2) || !is_prime(p) {
        return Err(Error::InvalidArgument(format!("p = {p} must be an odd prime")));
    }
    let e = evaluate(Family::Quadratic, &PresetParams::new(p, qi(1)))?.result.exponent;
    let pq = qi(p as i64);
    // sum over D_K <= X^{2/(p-1)}/b^2, resp. D_K <= X^{1/p}/b^{2(p-1)/p}; the b-sums converge
    let first = qi(2) * &e / (&pq - qi(1));
    let second = &e / &pq;
    Ok((first, second))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_rows_match_their_closed_forms() {
        for row in theorem_presets() {
            assert_eq!(row.result.exponent, row.stated, "{}", row.family);
        }
        let rows = theorem_presets();
        assert_eq!(rows[0].result.exponent, q(13, 10));
    }

    #[test]
    fn dihedral_examples() {
        assert_eq!(dihedral_exponents(5).unwrap(), (q(19, 28), q(19, 70)));
        assert_eq!(dihedral_exponents(3).unwrap().0, q(13, 10));
        assert!(dihedral_exponents(2).is_err());
        assert!(dihedral_exponents(9).is_err());
    }

    #[test]
    fn family_ids_round_trip() {
        for f in ALL_FAMILIES {
            assert_eq!(Family::parse(f.id()).unwrap(), f);
            assert_eq!(Family::parse(f.name()).unwrap(), f);
        }
        assert!(Family::parse("2.1").is_err());
    }

    #[test]
    fn parameter_validation() {
        let mut p = PresetParams::new(3, qi(2));
        p.d = Some(3);
        assert!(evaluate(Family::LowDegree, &p).is_err());
        assert!(evaluate(Family::Symmetric, &p).is_err());
        p.d = Some(4);
        assert!(evaluate(Family::Alternating, &p).is_err());
        assert!(evaluate(Family::Quadratic, &p).is_err());
    }
}
