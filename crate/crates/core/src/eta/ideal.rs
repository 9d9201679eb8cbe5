//! Ideals of quadratic orders as binary quadratic forms with big coefficients,
//! and generators of principal ideals by reduction with a tracked basis change.

use crate::arith::isqrt;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// The form `(a, b, c)`, standing for the ideal `aZ + ((-b + sqrt D)/2)Z` when `a > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigForm {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

/// 2x2 integer matrix `[[p, q], [r, s]]` of determinant 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    pub p: BigInt,
    pub q: BigInt,
    pub r: BigInt,
    pub s: BigInt,
}

impl Mat {
    fn identity() -> Self {
        Mat { p: BigInt::one(), q: BigInt::zero(), r: BigInt::zero(), s: BigInt::one() }
    }

    fn mul(&self, o: &Mat) -> Mat {
        Mat {
            p: &self.p * &o.p + &self.q * &o.r,
            q: &self.p * &o.q + &self.q * &o.s,
            r: &self.r * &o.p + &self.s * &o.r,
            s: &self.r * &o.q + &self.s * &o.s,
        }
    }
}

impl BigForm {
    pub fn new(a: BigInt, b: BigInt, c: BigInt) -> Self {
        BigForm { a, b, c }
    }

    /// The form of discriminant `d` with given `a` and `b`.
    pub fn from_ab(a: BigInt, b: BigInt, d: i64) -> Self {
        let c = (&b * &b - BigInt::from(d)) / (BigInt::from(4) * &a);
        BigForm { a, b, c }
    }

    pub fn discriminant(&self) -> BigInt {
        &self.b * &self.b - BigInt::from(4) * &self.a * &self.c
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        &self.a * x * x + &self.b * x * y + &self.c * y * y
    }

    pub fn conjugate(&self) -> Self {
        BigForm { a: self.a.clone(), b: -&self.b, c: self.c.clone() }
    }

    /// `f(x + t y, y)`.
    fn translate(&self, t: &BigInt) -> Self {
        BigForm {
            a: self.a.clone(),
            b: &self.b + BigInt::from(2) * &self.a * t,
            c: &self.a * t * t + &self.b * t + &self.c,
        }
    }

    /// `f(-y, x)`.
    fn swap(&self) -> Self {
        BigForm { a: self.c.clone(), b: -&self.b, c: self.a.clone() }
    }
}

fn xgcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Composition of forms with positive first coefficient, unreduced. For
/// ideals whose product is primitive this is the product ideal itself.
pub fn compose(f: &BigForm, g: &BigForm) -> BigForm {
    let (f1, f2) = if f.a > g.a { (g, f) } else { (f, g) };
    let (a1, b1) = (&f1.a, &f1.b);
    let (a2, b2, c2) = (&f2.a, &f2.b, &f2.c);
    let s: BigInt = (b1 + b2) / 2;
    let n: BigInt = b2 - &s;
    let (d, y1) = if (a2 % a1).is_zero() {
        (a1.clone(), BigInt::zero())
    } else {
        let (d, u, _) = xgcd(a2, a1);
        (d, u)
    };
    let (d1, x2, y2) = if (&s % &d).is_zero() {
        (d.clone(), BigInt::zero(), -BigInt::one())
    } else {
        let (d1, x2, y2) = xgcd(&s, &d);
        (d1, x2, -y2)
    };
    let v1 = a1 / &d1;
    let v2 = a2 / &d1;
    let r = (&y1 * &y2 * &n - &x2 * c2).mod_floor(&v1);
    let b3 = b2 + BigInt::from(2) * &v2 * &r;
    let a3 = &v1 * &v2;
    let c3 = (c2 * &d1 + &r * (b2 + &v2 * &r)) / &v1;
    BigForm::new(a3, b3, c3)
}

pub fn power(f: &BigForm, e: u32) -> BigForm {
    let mut acc = f.clone();
    for _ in 1..e {
        acc = compose(&acc, f);
    }
    acc
}

/// Reduce a positive definite form, returning the reduced form and `M` with `f o M` equal to it.
fn reduce_definite(f: &BigForm) -> (BigForm, Mat) {
    let mut g = f.clone();
    let mut m = Mat::identity();
    let two = BigInt::from(2);
    loop {
        let t = Integer::div_floor(&(&g.a - &g.b), &(&two * &g.a));
        if !t.is_zero() {
            g = g.translate(&t);
            m = m.mul(&Mat { p: BigInt::one(), q: t, r: BigInt::zero(), s: BigInt::one() });
        }
        if g.a > g.c {
            g = g.swap();
            m = m.mul(&swap_mat());
        } else {
            break;
        }
    }
    if g.a == g.c && g.b.is_negative() {
        g = g.swap();
        m = m.mul(&swap_mat());
    }
    (g, m)
}

fn swap_mat() -> Mat {
    Mat { p: BigInt::zero(), q: -BigInt::one(), r: BigInt::one(), s: BigInt::zero() }
}

fn is_reduced_indefinite(f: &BigForm, s: &BigInt) -> bool {
    let two_a = BigInt::from(2) * f.a.abs();
    f.b.is_positive() && &f.b <= s && two_a > (s - &f.b) && &(&two_a - &f.b) <= s
}

/// One rho step `f -> f o [[0, -1], [1, t]]` of indefinite reduction.
fn rho(f: &BigForm, d: &BigInt, s: &BigInt) -> (BigForm, BigInt) {
    let c_abs = f.c.abs();
    let m = BigInt::from(2) * &c_abs;
    let target = -&f.b;
    let nb = if &c_abs > s {
        let r = target.mod_floor(&m);
        if r > c_abs {
            r - &m
        } else {
            r
        }
    } else {
        s - (s - &target).mod_floor(&m)
    };
    let t = (&nb + &f.b) / (BigInt::from(2) * &f.c);
    let nc = (&nb * &nb - d) / (BigInt::from(4) * &f.c);
    (BigForm::new(f.c.clone(), nb, nc), t)
}

fn rho_mat(t: BigInt) -> Mat {
    Mat { p: BigInt::zero(), q: -BigInt::one(), r: BigInt::one(), s: t }
}

/// `(u, v)` with `f(u, v) = +-1`, if the form represents a unit.
/// Definite forms must be positive definite.
pub fn represent_unit(f: &BigForm) -> Result<Option<(BigInt, BigInt, BigInt)>> {
    let d = f.discriminant();
    if d.is_negative() {
        let (g, m) = reduce_definite(f);
        if g.a.is_one() {
            return Ok(Some((m.p, m.r, g.a)));
        }
        return Ok(None);
    }
    let du: u64 = (&d).try_into().map_err(|_| Error::Overflow("discriminant"))?;
    let s = BigInt::from(isqrt(du));
    let mut g = f.clone();
    let mut m = Mat::identity();
    let mut steps = 0u64;
    while !is_reduced_indefinite(&g, &s) {
        let (ng, t) = rho(&g, &d, &s);
        g = ng;
        m = m.mul(&rho_mat(t));
        steps += 1;
        if steps > 1 << 20 {
            return Err(Error::Internal("indefinite reduction did not terminate".into()));
        }
    }
    let start = g.clone();
    loop {
        if g.a.abs().is_one() {
            return Ok(Some((m.p, m.r, g.a)));
        }
        let (ng, t) = rho(&g, &d, &s);
        g = ng;
        m = m.mul(&rho_mat(t));
        if g == start {
            return Ok(None);
        }
    }
}

/// Whether `(x + y sqrt D)/2` lies in the ideal of `f = (a, b, c)`.
pub fn contains(f: &BigForm, x: &BigInt, y: &BigInt) -> bool {
    // x/2 + y sqrt(D)/2 = m a + y (-b + sqrt D)/2 with m = (x + y b) / (2a)
    (x + y * &f.b).is_multiple_of(&(BigInt::from(2) * &f.a))
}

/// A generator `(x + y sqrt D)/2` of the principal ideal of `f` (first coefficient
/// its norm), or `None` if the ideal is not principal.
pub fn generator(f: &BigForm) -> Result<Option<(BigInt, BigInt)>> {
    // N(u a + v(-b + sqrt D)/2) = a (a u^2 - b u v + c v^2)
    let norm_form = BigForm::new(f.a.clone(), -&f.b, f.c.clone());
    let Some((u, v, _)) = represent_unit(&norm_form)? else { return Ok(None) };
    let x = BigInt::from(2) * &u * &f.a - &v * &f.b;
    let y = v;
    if !contains(f, &x, &y) {
        return Err(Error::Internal("generator left its ideal".into()));
    }
    Ok(Some((x, y)))
}
