//! Dense univariate polynomials over the integers.

pub mod factor;
pub mod modp;

pub use factor::{factor, is_irreducible, Factorization};

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::str::FromStr;

/// Integer polynomial, coefficients stored from the constant term up.
/// The zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ZPoly {
    c: Vec<BigInt>,
}

impl ZPoly {
    pub fn new(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        ZPoly { c }
    }

    /// From coefficients listed constant term first.
    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// From coefficients listed leading term first, as polynomials are written.
    pub fn from_desc(c: &[i64]) -> Self {
        Self::new(c.iter().rev().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero() -> Self {
        ZPoly { c: Vec::new() }
    }

    pub fn constant(a: BigInt) -> Self {
        Self::new(vec![a])
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.c.get(i).cloned().unwrap_or_default()
    }

    pub fn lc(&self) -> BigInt {
        self.c.last().cloned().unwrap_or_default()
    }

    /// Largest absolute coefficient.
    pub fn height(&self) -> BigInt {
        self.c.iter().map(|x| x.abs()).max().unwrap_or_default()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for a in self.c.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * BigInt::from(i))
                .collect(),
        )
    }

    pub fn content(&self) -> BigInt {
        self.c.iter().fold(BigInt::zero(), |g, a| g.gcd(a))
    }

    /// Divide out the content and make the leading coefficient positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -g;
        }
        Self::new(self.c.iter().map(|a| a / &g).collect())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.c.iter().map(|a| a * k).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// `self / g` when `g` divides `self` in Z[x].
    pub fn div_exact(&self, g: &Self) -> Option<Self> {
        if g.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.degree() < g.degree() {
            return None;
        }
        let mut r = self.c.clone();
        let dg = g.degree();
        let lg = g.lc();
        let mut q = vec![BigInt::zero(); self.degree() - dg + 1];
        for i in (0..q.len()).rev() {
            let top = &r[i + dg];
            if top.is_zero() {
                continue;
            }
            let (qi, rem) = top.div_rem(&lg);
            if !rem.is_zero() {
                return None;
            }
            for (j, b) in g.c.iter().enumerate() {
                r[i + j] -= &qi * b;
            }
            q[i] = qi;
        }
        if r.iter().all(|x| x.is_zero()) {
            Some(Self::new(q))
        } else {
            None
        }
    }

    /// Pseudo-remainder of `self` by `g`: the remainder of lc(g)^k * self.
    pub fn pseudo_rem(&self, g: &Self) -> Self {
        assert!(!g.is_zero());
        let mut r = self.clone();
        let dg = g.degree();
        let lg = g.lc();
        while !r.is_zero() && r.degree() >= dg {
            let shift = r.degree() - dg;
            let lr = r.lc();
            let mut next = r.scale(&lg).c;
            for (j, b) in g.c.iter().enumerate() {
                next[shift + j] -= &lr * b;
            }
            r = Self::new(next);
        }
        r
    }

    /// Greatest common divisor in Z[x], primitive with positive leading coefficient.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.primitive_part(), o.primitive_part());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        let cont = self.content().gcd(&o.content());
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        if a.is_zero() {
            return a;
        }
        a.primitive_part().scale(&cont)
    }

    pub fn is_squarefree(&self) -> bool {
        self.degree() == 0 || self.gcd(&self.derivative()).degree() == 0
    }

    /// Resultant with `o`, from the Sylvester matrix.
    pub fn resultant(&self, o: &Self) -> BigInt {
        let (m, n) = (self.degree(), o.degree());
        if self.is_zero() || o.is_zero() {
            return BigInt::zero();
        }
        if m == 0 && n == 0 {
            return BigInt::one();
        }
        let size = m + n;
        let mut mat = vec![vec![BigInt::zero(); size]; size];
        for row in 0..n {
            for (j, a) in self.c.iter().rev().enumerate() {
                mat[row][row + j] = a.clone();
            }
        }
        for row in 0..m {
            for (j, b) in o.c.iter().rev().enumerate() {
                mat[n + row][row + j] = b.clone();
            }
        }
        bareiss_det(mat)
    }

    /// Discriminant `(-1)^(n(n-1)/2) Res(f, f') / lc(f)`.
    pub fn discriminant(&self) -> BigInt {
        let n = self.degree();
        if n == 0 {
            return BigInt::zero();
        }
        if n == 1 {
            return BigInt::one();
        }
        let r = self.resultant(&self.derivative()) / self.lc();
        if (n * (n - 1) / 2) % 2 == 1 {
            -r
        } else {
            r
        }
    }

    /// Monic polynomial `a^(n-1) f(x/a)` with the roots of `f` scaled by `a = lc(f)`.
    pub fn monic_transform(&self) -> Self {
        let n = self.degree();
        let a = self.lc();
        let mut c = Vec::with_capacity(n + 1);
        // coefficient of x^i picks up a^(n-1-i)
        let mut pows = vec![BigInt::one()];
        for _ in 1..=n {
            let next = pows.last().unwrap() * &a;
            pows.push(next);
        }
        for i in 0..n {
            c.push(&self.c[i] * &pows[n - 1 - i]);
        }
        c.push(BigInt::one());
        Self::new(c)
    }

    /// `f(x + k)`.
    pub fn translate(&self, k: &BigInt) -> Self {
        let shift = ZPoly::new(vec![k.clone(), BigInt::one()]);
        let mut acc = ZPoly::zero();
        for a in self.c.iter().rev() {
            acc = acc.mul(&shift).add(&ZPoly::constant(a.clone()));
        }
        acc
    }

    /// Coefficients as i64 when they all fit.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.c.iter().map(|a| a.to_i64()).collect()
    }
}

/// Determinant of an integer matrix by fraction-free elimination.
pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// `Some(r)` with `r >= 0`, `r^2 = n` when `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

impl fmt::Display for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let mag = a.abs();
            if first {
                if a.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if a.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            let unit = mag.is_one();
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !unit {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl FromStr for ZPoly {
    type Err = Error;

    /// Parses sums of terms like `5x^2 - 6*x + 5` in the variable `x`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse(format!("polynomial {s:?}: {msg}"));
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(bad("empty"));
        }
        let mut coeffs: Vec<BigInt> = Vec::new();
        let bytes = t.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let mut neg = false;
            if bytes[i] == b'+' || bytes[i] == b'-' {
                neg = bytes[i] == b'-';
                i += 1;
            } else if i > 0 {
                return Err(bad("expected + or -"));
            }
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let mut coef = if i > start {
                t[start..i].parse::<BigInt>().map_err(|_| bad("bad coefficient"))?
            } else {
                BigInt::one()
            };
            let mut exp = 0usize;
            if i < bytes.len() && bytes[i] == b'*' {
                i += 1;
                if i >= bytes.len() || bytes[i] != b'x' {
                    return Err(bad("expected x after *"));
                }
            }
            if i < bytes.len() && bytes[i] == b'x' {
                i += 1;
                exp = 1;
                if i < bytes.len() && bytes[i] == b'^' {
                    i += 1;
                    let es = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    exp = t[es..i].parse().map_err(|_| bad("bad exponent"))?;
                }
            } else if i == start {
                return Err(bad("empty term"));
            }
            if neg {
                coef = -coef;
            }
            if coeffs.len() <= exp {
                coeffs.resize(exp + 1, BigInt::zero());
            }
            coeffs[exp] += coef;
        }
        Ok(ZPoly::new(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> ZPoly {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(p("x^3 - x^2 - 2*x + 1"), ZPoly::from_desc(&[1, -1, -2, 1]));
        assert_eq!(p("5x^2-6x+5"), ZPoly::from_desc(&[5, -6, 5]));
        assert_eq!(p("-x^4+2"), ZPoly::from_desc(&[-1, 0, 0, 0, 2]));
        assert_eq!(p("x^4 - 2").to_string(), "x^4 - 2");
        assert_eq!(p("3*x^2 - x").to_string(), "3*x^2 - x");
        for bad in ["", "x^", "2x3", "x**2", "+-x"] {
            assert!(bad.parse::<ZPoly>().is_err(), "{bad}");
        }
    }

    #[test]
    fn discriminants() {
        assert_eq!(p("x^3 - 3x - 1").discriminant(), 81.into());
        assert_eq!(p("x^3 - 2").discriminant(), (-108).into());
        assert_eq!(p("x^2 + 1").discriminant(), (-4).into());
        assert_eq!(p("2x^2 + 3x + 1").discriminant(), 1.into());
        assert_eq!(p("x^4 - 2").discriminant(), (-2048).into());
        assert_eq!(p("x^3 - x^2 - 2x + 1").discriminant(), 49.into());
        // x^5 - x - 1
        assert_eq!(p("x^5 - x - 1").discriminant(), 2869.into());
    }

    #[test]
    fn division_and_gcd() {
        let a = p("2x+1");
        let b = p("x^2 - 3x + 7");
        let ab = a.mul(&b);
        assert_eq!(ab.div_exact(&a), Some(b.clone()));
        assert_eq!(ab.div_exact(&p("x+1")), None);
        assert_eq!(ab.gcd(&a.mul(&p("x-5"))), a);
        assert!(!ab.mul(&a).is_squarefree());
        assert!(ab.is_squarefree());
    }

    #[test]
    fn monic_transform_scales_roots() {
        // 2x - 3 has root 3/2; the transform has root 3
        let g = p("2x - 3").monic_transform();
        assert_eq!(g, p("x - 3"));
        let g = p("5x^2 - 6x + 5").monic_transform();
        assert_eq!(g, p("x^2 - 6x + 25"));
    }
}
