//! Galois groups of irreducible polynomials of degree at most 5.

use super::resolvent::{galois_resolvent, ResolventReport, TargetGroup};
use crate::arith::sieve_primes;
use crate::error::{Error, Result};
use crate::poly::{exact_sqrt, is_irreducible, modp, ZPoly};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum GaloisGroup {
    C2,
    C3,
    S3,
    C4,
    V4,
    D4,
    A4,
    S4,
    C5,
    D5,
    F20,
    A5,
    S5,
}

impl GaloisGroup {
    pub fn degree(self) -> usize {
        use GaloisGroup::*;
        match self {
            C2 => 2,
            C3 | S3 => 3,
            C4 | V4 | D4 | A4 | S4 => 4,
            C5 | D5 | F20 | A5 | S5 => 5,
        }
    }
}

impl fmt::Display for GaloisGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for GaloisGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        use GaloisGroup::*;
        Ok(match s.to_ascii_uppercase().as_str() {
            "C2" | "S2" => C2,
            "C3" | "A3" => C3,
            "S3" => S3,
            "C4" => C4,
            "V4" => V4,
            "D4" => D4,
            "A4" => A4,
            "S4" => S4,
            "C5" => C5,
            "D5" => D5,
            "F20" => F20,
            "A5" => A5,
            "S5" => S5,
            _ => return Err(Error::Parse(format!("unknown group {s}"))),
        })
    }
}

/// A Galois group up to conjugacy, with whether it was proved or only
/// inferred from Frobenius statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GaloisLabel {
    pub group: GaloisGroup,
    pub certified: bool,
}

fn is_square(n: &BigInt) -> bool {
    exact_sqrt(n).is_some()
}

/// Cycle types of Frobenius at the first `count` primes not dividing `lc disc`.
pub fn frobenius_patterns(f: &ZPoly, count: usize) -> BTreeSet<Vec<usize>> {
    let bad = f.lc() * f.discriminant();
    let mut out = BTreeSet::new();
    let mut seen = 0;
    let mut limit = 2048;
    while seen < count {
        seen = 0;
        out.clear();
        for p in sieve_primes(limit) {
            if (&bad % BigInt::from(p)).is_zero() {
                continue;
            }
            out.insert(modp::factor_degrees(&modp::reduce(f, p), p));
            seen += 1;
            if seen == count {
                break;
            }
        }
        limit *= 2;
    }
    out
}

fn quartic_group(f: &ZPoly) -> Result<GaloisLabel> {
    use GaloisGroup::*;
    let g = f.monic_transform();
    let (b, c, d, e) = (g.coeff(3), g.coeff(2), g.coeff(1), g.coeff(0));
    let four = BigInt::from(4);
    // y^3 - c y^2 + (bd - 4e) y - (b^2 e - 4ce + d^2)
    let cubic = ZPoly::new(vec![
        -(&b * &b * &e - &four * &c * &e + &d * &d),
        &b * &d - &four * &e,
        -c.clone(),
        BigInt::from(1),
    ]);
    let disc = g.discriminant();
    let roots = cubic.integer_roots();
    let group = match roots.len() {
        0 if is_square(&disc) => A4,
        0 => S4,
        1 => {
            let r = &roots[0];
            let splits = |u: &BigInt, v: &BigInt| {
                let q = u * u - &four * v;
                is_square(&q) || is_square(&(&q * &disc))
            };
            if splits(&-r.clone(), &e) && splits(&b, &(&c - r)) {
                C4
            } else {
                D4
            }
        }
        _ => V4,
    };
    Ok(GaloisLabel { group, certified: true })
}

/// Resolvent of `f(x + k)` for the first small shift `k` with `disc(phi) != 0`.
/// Translation keeps the Galois group and generically removes coincident coset sums.
pub fn separable_resolvent(f: &ZPoly, target: TargetGroup) -> Result<Option<ResolventReport>> {
    for k in 0..=8 {
        let r = galois_resolvent(&f.translate(&BigInt::from(k)), target)?;
        if r.discriminant_nonzero {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

fn quintic_group(f: &ZPoly) -> Result<GaloisLabel> {
    use GaloisGroup::*;
    let square = is_square(&f.discriminant());
    let patterns = frobenius_patterns(f, 200);
    let has = |p: &[usize]| patterns.contains(p);
    // cycle types of D5 are 1^5, 1 2 2 and 5
    let outside_d5 = patterns.iter().any(|p| !matches!(p.as_slice(), [1, 1, 1, 1, 1] | [1, 2, 2] | [5]));
    let (in_d5, in_d5_certified) = if outside_d5 {
        (false, true)
    } else {
        match separable_resolvent(f, TargetGroup::D5)? {
            Some(r) => (r.has_integer_root(), true),
            // no integer root still rules out D5
            None => (galois_resolvent(f, TargetGroup::D5)?.has_integer_root(), false),
        }
    };
    let label = if in_d5 {
        if has(&[1, 2, 2]) {
            GaloisLabel { group: D5, certified: in_d5_certified }
        } else {
            GaloisLabel { group: C5, certified: false }
        }
    } else if square {
        GaloisLabel { group: A5, certified: true }
    } else if has(&[1, 1, 3]) || has(&[2, 3]) || has(&[1, 1, 1, 2]) {
        GaloisLabel { group: S5, certified: true }
    } else {
        GaloisLabel { group: F20, certified: false }
    };
    Ok(label)
}

/// Galois group of an irreducible polynomial of degree 2 to 5.
pub fn galois_group_id(f: &ZPoly) -> Result<GaloisLabel> {
    use GaloisGroup::*;
    let n = f.degree();
    if !(2..=5).contains(&n) {
        return Err(Error::Unsupported(format!("Galois group of degree {n}")));
    }
    if !is_irreducible(f)? {
        return Err(Error::Reducible(f.to_string()));
    }
    let f = f.primitive_part();
    match n {
        2 => Ok(GaloisLabel { group: C2, certified: true }),
        3 => {
            let group = if is_square(&f.discriminant()) { C3 } else { S3 };
            Ok(GaloisLabel { group, certified: true })
        }
        4 => quartic_group(&f),
        _ => quintic_group(&f),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use GaloisGroup::*;

    fn gid(s: &str) -> GaloisLabel {
        galois_group_id(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn low_degree() {
        assert_eq!(gid("x^2 + 1").group, C2);
        assert_eq!(gid("x^3 - 3x - 1"), GaloisLabel { group: C3, certified: true });
        assert_eq!(gid("x^3 - 2").group, S3);
        assert!(matches!(galois_group_id(&"x^2 - 1".parse().unwrap()), Err(Error::Reducible(_))));
    }

    #[test]
    fn quartics() {
        assert_eq!(gid("x^4 - 2").group, D4);
        assert_eq!(gid("x^4 + 1").group, V4);
        assert_eq!(gid("x^4 - 10x^2 + 1").group, V4);
        assert_eq!(gid("x^4 + x^3 + x^2 + x + 1").group, C4);
        assert_eq!(gid("x^4 - 4x^2 + 2").group, C4);
        assert_eq!(gid("x^4 + 8x + 12").group, A4);
        assert_eq!(gid("x^4 + x + 1").group, S4);
        assert_eq!(gid("3x^4 - 6").group, D4);
    }

    #[test]
    fn quintics() {
        assert_eq!(gid("x^5 - x - 1"), GaloisLabel { group: S5, certified: true });
        assert_eq!(gid("x^5 - 5x + 12"), GaloisLabel { group: D5, certified: true });
        assert_eq!(gid("x^5 - 2").group, F20);
        assert_eq!(gid("x^5 + 20x + 16"), GaloisLabel { group: A5, certified: true });
        assert_eq!(gid("x^5 - x^4 - 4x^3 + 3x^2 + 3x - 1").group, C5);
    }

    #[test]
    fn group_names_round_trip() {
        for g in [C2, C3, S3, C4, V4, D4, A4, S4, C5, D5, F20, A5, S5] {
            assert_eq!(g.to_string().parse::<GaloisGroup>().unwrap(), g);
        }
    }
}
