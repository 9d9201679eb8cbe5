//! Binary quadratic forms `ax^2 + bxy + cy^2`, Gauss composition and reduction.

use crate::arith::{isqrt, kronecker, sqrt_mod_prime, FundamentalDiscriminant};
use crate::error::{Error, Result};
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Largest |D| handled by the machine-integer form kernels.
pub const MAX_ABS_DISCRIMINANT: u64 = 1 << 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct QuadraticForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

pub(crate) fn check_range(d: i64) -> Result<()> {
    if d.unsigned_abs() >= MAX_ABS_DISCRIMINANT {
        return Err(Error::Overflow("quadratic form kernel (|D| >= 2^40)"));
    }
    Ok(())
}

impl QuadraticForm {
    pub const fn new(a: i64, b: i64, c: i64) -> Self {
        QuadraticForm { a, b, c }
    }

    pub fn discriminant(&self) -> i128 {
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        b * b - 4 * a * c
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == 1
    }

    /// The class inverse `(a, -b, c)`.
    pub fn inverse(&self) -> Self {
        QuadraticForm::new(self.a, -self.b, self.c)
    }

    /// The principal form of discriminant `d`, reduced.
    pub fn principal(d: i64) -> Self {
        let sigma = d.rem_euclid(2);
        let f = QuadraticForm::new(1, sigma, (sigma - d) / 4);
        if d < 0 {
            f
        } else {
            f.reduce_real(d)
        }
    }

    /// A form `(p, b, c)` of discriminant `d` with first coefficient the prime `p`,
    /// if `p` is not inert. Not reduced.
    pub fn prime_form(d: i64, p: u64) -> Option<Self> {
        if kronecker(d, p) == -1 {
            return None;
        }
        let pi = p as i64;
        let b = if p == 2 {
            (0..4).find(|&b: &i64| (b * b - d).rem_euclid(8) == 0)?
        } else {
            let r = sqrt_mod_prime(d.rem_euclid(pi) as u64, p)? as i64;
            if (r - d).rem_euclid(2) == 0 {
                r
            } else {
                pi - r
            }
        };
        let num = b as i128 * b as i128 - d as i128;
        debug_assert!(num % (4 * pi as i128) == 0);
        Some(QuadraticForm::new(pi, b, (num / (4 * pi as i128)) as i64))
    }

    pub fn is_reduced_imaginary(&self) -> bool {
        let QuadraticForm { a, b, c } = *self;
        a > 0 && b.abs() <= a && a <= c && !((b.abs() == a || a == c) && b < 0)
    }

    /// Reduction of a positive definite form.
    pub fn reduce_imaginary(&self) -> Self {
        let (mut a, mut b, mut c) = (self.a as i128, self.b as i128, self.c as i128);
        debug_assert!(a > 0);
        loop {
            // b into (-a, a]
            let k = Integer::div_floor(&(a - b), &(2 * a));
            c += k * (b + a * k);
            b += 2 * a * k;
            if a > c {
                std::mem::swap(&mut a, &mut c);
                b = -b;
            } else {
                break;
            }
        }
        if a == c && b < 0 {
            b = -b;
        }
        QuadraticForm::new(a as i64, b as i64, c as i64)
    }

    /// Whether an indefinite form of discriminant `d > 0` is reduced:
    /// `0 < b < sqrt d` and `sqrt d - b < 2|a| < sqrt d + b`.
    pub fn is_reduced_real(&self, d: i64) -> bool {
        let s = isqrt(d as u64) as i64;
        let two_a = 2 * self.a.abs();
        self.b > 0 && self.b <= s && two_a > s - self.b && two_a - self.b <= s
    }

    /// One step of the indefinite reduction operator.
    pub fn rho(&self, d: i64) -> Self {
        let s = isqrt(d as u64) as i128;
        let (b, c) = (self.b as i128, self.c as i128);
        let m = 2 * c.abs();
        let target = -b;
        let nb = if c.abs() > s {
            // (-|c|, |c|]
            let r = target.rem_euclid(m);
            if r > c.abs() {
                r - m
            } else {
                r
            }
        } else {
            // largest value <= s congruent to -b
            s - (s - target).rem_euclid(m)
        };
        let nc = (nb * nb - d as i128) / (4 * c);
        QuadraticForm::new(self.c, nb as i64, nc as i64)
    }

    pub fn reduce_real(&self, d: i64) -> Self {
        let mut f = *self;
        let mut steps = 0u64;
        while !f.is_reduced_real(d) {
            f = f.rho(d);
            steps += 1;
            debug_assert!(steps < 1 << 40);
        }
        f
    }

    /// Reduced representative (imaginary) or some reduced form in the cycle (real).
    pub fn reduce(&self, d: i64) -> Self {
        if d < 0 {
            self.reduce_imaginary()
        } else {
            self.reduce_real(d)
        }
    }

    /// Properly equivalent form with positive first coefficient.
    fn with_positive_a(&self) -> Self {
        if self.a > 0 {
            *self
        } else {
            // (a,b,c) ~ (c,-b,a); indefinite reduced forms have ac < 0
            debug_assert!(self.c > 0);
            QuadraticForm::new(self.c, -self.b, self.a)
        }
    }
}

fn xgcd(a: i128, b: i128) -> (i128, i128, i128) {
    let e = a.extended_gcd(&b);
    if e.gcd < 0 {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Gauss composition of two primitive forms of equal discriminant, unreduced.
pub fn compose_unreduced(f: &QuadraticForm, g: &QuadraticForm) -> QuadraticForm {
    let (f, g) = (f.with_positive_a(), g.with_positive_a());
    let (f1, f2) = if f.a > g.a { (g, f) } else { (f, g) };
    let (a1, b1) = (f1.a as i128, f1.b as i128);
    let (a2, b2, c2) = (f2.a as i128, f2.b as i128, f2.c as i128);
    let s = (b1 + b2) / 2;
    let n = b2 - s;
    let (d, y1) = if a2 % a1 == 0 {
        (a1, 0)
    } else {
        let (d, u, _) = xgcd(a2, a1);
        (d, u)
    };
    let (d1, x2, y2) = if s % d == 0 {
        (d, 0, -1)
    } else {
        let (d1, x2, y2) = xgcd(s, d);
        (d1, x2, -y2)
    };
    let v1 = a1 / d1;
    let v2 = a2 / d1;
    let r = (y1 * y2 * n - x2 * c2).rem_euclid(v1);
    let b3 = b2 + 2 * v2 * r;
    let a3 = v1 * v2;
    let c3 = (c2 * d1 + r * (b2 + v2 * r)) / v1;
    QuadraticForm::new(a3 as i64, b3 as i64, c3 as i64)
}

/// Composition of classes: reduced representative of `f * g`.
pub fn compose(f: &QuadraticForm, g: &QuadraticForm, d: i64) -> Result<QuadraticForm> {
    for h in [f, g] {
        let hd = h.discriminant();
        if hd != d as i128 {
            return Err(Error::DiscriminantMismatch(hd as i64, d));
        }
    }
    check_range(d)?;
    Ok(compose_unreduced(f, g).reduce(d))
}

/// All reduced forms of an imaginary discriminant, one per class, sorted.
pub fn reduced_forms(d: FundamentalDiscriminant) -> Result<Vec<QuadraticForm>> {
    if !d.is_imaginary() {
        return Err(Error::Unsupported(format!(
            "reduced_forms covers imaginary discriminants; use class_group_structure for D = {d}"
        )));
    }
    check_range(d.value())?;
    let n = d.abs() as i64;
    let mut out = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= n {
        for b in -a + 1..=a {
            if (b - n).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b + n;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            let f = QuadraticForm::new(a, b, c);
            if c >= a && f.is_reduced_imaginary() && f.is_primitive() {
                out.push(f);
            }
        }
        a += 1;
    }
    out.sort();
    Ok(out)
}

/// All reduced indefinite forms of a positive discriminant.
pub fn reduced_forms_real(d: FundamentalDiscriminant) -> Result<Vec<QuadraticForm>> {
    if d.is_imaginary() {
        return Err(Error::InvalidArgument(format!("{d} is not positive")));
    }
    check_range(d.value())?;
    let dv = d.value();
    let s = isqrt(dv as u64) as i64;
    let mut out = Vec::new();
    let mut b = if dv % 2 == 0 { 2 } else { 1 };
    while b <= s {
        // ac = (b^2 - D)/4 < 0; 2|a| in (s - b, s + b]
        let m = ((dv - b * b) / 4) as u64;
        for x in crate::arith::factorize(m).divisors() {
            let x = x as i64;
            if 2 * x > s - b && 2 * x - b <= s {
                let c = m as i64 / x;
                for f in [QuadraticForm::new(x, b, -c), QuadraticForm::new(-x, b, c)] {
                    if f.is_primitive() {
                        out.push(f);
                    }
                }
            }
        }
        b += 2;
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::fundamental_discriminants;

    fn fd(d: i64) -> FundamentalDiscriminant {
        FundamentalDiscriminant::new(d).unwrap()
    }

    const F1: QuadraticForm = QuadraticForm::new(1, 1, 6);
    const F2: QuadraticForm = QuadraticForm::new(2, 1, 3);
    const F3: QuadraticForm = QuadraticForm::new(2, -1, 3);

    #[test]
    fn reduced_forms_examples() {
        assert_eq!(reduced_forms(fd(-4)).unwrap(), vec![QuadraticForm::new(1, 0, 1)]);
        assert_eq!(reduced_forms(fd(-3)).unwrap(), vec![QuadraticForm::new(1, 1, 1)]);
        assert_eq!(reduced_forms(fd(-23)).unwrap(), vec![F1, F3, F2]);
        assert!(matches!(reduced_forms(fd(5)), Err(Error::Unsupported(_))));
    }

    #[test]
    fn compose_examples() {
        assert_eq!(compose(&F1, &F2, -23).unwrap(), F2);
        assert_eq!(compose(&F2, &F3, -23).unwrap(), F1);
        assert_eq!(compose(&F2, &F2, -23).unwrap(), F3);
        let g = QuadraticForm::new(1, 0, 1);
        assert!(matches!(compose(&F1, &g, -23), Err(Error::DiscriminantMismatch(-4, -23))));
    }

    #[test]
    fn known_class_numbers() {
        for (d, h) in [(-163, 1), (-47, 5), (-56, 4), (-71, 7), (-84, 4), (-3299, 27), (-4027, 9)] {
            assert_eq!(reduced_forms(fd(d)).unwrap().len(), h, "D={d}");
        }
    }

    #[test]
    fn prime_forms_have_right_discriminant() {
        for d in fundamental_discriminants(-3000, 3000) {
            for p in crate::arith::sieve_primes(60) {
                if let Some(f) = QuadraticForm::prime_form(d.value(), p) {
                    assert_eq!(f.discriminant(), d.value() as i128);
                    assert_eq!(f.a, p as i64);
                } else {
                    assert_eq!(kronecker(d.value(), p), -1);
                }
            }
        }
    }

    #[test]
    fn composition_preserves_discriminant_and_reduces() {
        for d in fundamental_discriminants(-2000, -3) {
            let forms = reduced_forms(d).unwrap();
            for f in forms.iter().take(6) {
                for g in forms.iter().take(6) {
                    let h = compose(f, g, d.value()).unwrap();
                    assert_eq!(h.discriminant(), d.value() as i128);
                    assert!(h.is_reduced_imaginary());
                    assert!(forms.binary_search(&h).is_ok());
                }
            }
        }
    }

    #[test]
    fn real_reduction_lands_on_reduced_forms() {
        for d in fundamental_discriminants(5, 3000) {
            let forms = reduced_forms_real(d).unwrap();
            assert!(!forms.is_empty());
            for f in &forms {
                assert!(f.is_reduced_real(d.value()), "{f} D={d}");
                let g = f.rho(d.value());
                assert!(forms.binary_search(&g).is_ok(), "rho({f})={g} D={d}");
            }
            let p = QuadraticForm::principal(d.value());
            assert!(forms.binary_search(&p).is_ok());
        }
    }
}
