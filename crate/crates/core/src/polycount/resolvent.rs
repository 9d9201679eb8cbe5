//! Galois resolvents for `D4 < S4` and `D5 < S5`, built from high-precision
//! complex roots and rounded to integers.

use crate::error::{Error, Result};
use crate::poly::ZPoly;
use num_bigint::BigInt;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;

/// Subgroups with a resolvent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TargetGroup {
    D4,
    D5,
}

impl TargetGroup {
    pub fn degree(self) -> usize {
        match self {
            TargetGroup::D4 => 4,
            TargetGroup::D5 => 5,
        }
    }

    fn generators(self) -> Vec<Vec<usize>> {
        match self {
            TargetGroup::D4 => vec![vec![1, 2, 3, 0], vec![2, 1, 0, 3]],
            TargetGroup::D5 => vec![vec![1, 2, 3, 4, 0], vec![0, 4, 3, 2, 1]],
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "D4" => Ok(TargetGroup::D4),
            "D5" => Ok(TargetGroup::D5),
            _ => Err(Error::InvalidArgument(format!("no resolvent for group {s}"))),
        }
    }
}

impl fmt::Display for TargetGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

type Perm = Vec<usize>;

fn compose(a: &Perm, b: &Perm) -> Perm {
    b.iter().map(|&i| a[i]).collect()
}

fn all_perms(n: usize) -> Vec<Perm> {
    fn rec(prefix: &mut Perm, n: usize, out: &mut Vec<Perm>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for i in 0..n {
            if !prefix.contains(&i) {
                prefix.push(i);
                rec(prefix, n, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), n, &mut out);
    out
}

/// Elements of the subgroup generated by `gens`, sorted.
pub fn subgroup(n: usize, gens: &[Perm]) -> Vec<Perm> {
    let id: Perm = (0..n).collect();
    let mut seen: BTreeSet<Perm> = BTreeSet::from([id.clone()]);
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = compose(&x, g);
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen.into_iter().collect()
}

/// Representatives of the left cosets `sigma G`, least in lexicographic order.
pub fn coset_representatives(target: TargetGroup) -> (Vec<Perm>, Vec<Perm>) {
    let n = target.degree();
    let g = subgroup(n, &target.generators());
    let mut covered: BTreeSet<Perm> = BTreeSet::new();
    let mut reps = Vec::new();
    for s in all_perms(n) {
        if covered.contains(&s) {
            continue;
        }
        for t in &g {
            covered.insert(compose(&s, t));
        }
        reps.push(s);
    }
    (reps, g)
}

/// Complex number stored as `(re, im) * 2^prec`.
#[derive(Debug, Clone, PartialEq)]
struct Cx {
    re: BigInt,
    im: BigInt,
}

struct Fixed {
    prec: u32,
}

impl Fixed {
    fn zero(&self) -> Cx {
        Cx { re: BigInt::zero(), im: BigInt::zero() }
    }

    fn int(&self, n: &BigInt) -> Cx {
        Cx { re: n << self.prec, im: BigInt::zero() }
    }

    fn lift(&self, re: f64, im: f64) -> Cx {
        let conv = |x: f64| {
            let k = self.prec.min(60) as i32;
            let v = BigInt::from_f64((x * 2f64.powi(k)).round()).unwrap_or_default();
            v << (self.prec - k as u32)
        };
        Cx { re: conv(re), im: conv(im) }
    }

    fn add(&self, a: &Cx, b: &Cx) -> Cx {
        Cx { re: &a.re + &b.re, im: &a.im + &b.im }
    }

    fn sub(&self, a: &Cx, b: &Cx) -> Cx {
        Cx { re: &a.re - &b.re, im: &a.im - &b.im }
    }

    fn mul(&self, a: &Cx, b: &Cx) -> Cx {
        Cx {
            re: (&a.re * &b.re - &a.im * &b.im) >> self.prec,
            im: (&a.re * &b.im + &a.im * &b.re) >> self.prec,
        }
    }

    fn div(&self, a: &Cx, b: &Cx) -> Option<Cx> {
        let n = &b.re * &b.re + &b.im * &b.im;
        if n.is_zero() {
            return None;
        }
        let re = (&a.re * &b.re + &a.im * &b.im) << self.prec;
        let im = (&a.im * &b.re - &a.re * &b.im) << self.prec;
        Some(Cx { re: re / &n, im: im / &n })
    }

    fn mag_ulps(&self, a: &Cx) -> BigInt {
        a.re.abs().max(a.im.abs())
    }

    /// `x / 2^prec` as `f64`, for values small enough to matter.
    fn to_f64(&self, x: &BigInt) -> f64 {
        if self.prec > 60 {
            let s = self.prec - 60;
            (x >> s).to_f64().unwrap_or(f64::INFINITY) / 2f64.powi(60)
        } else {
            x.to_f64().unwrap_or(f64::INFINITY) / 2f64.powi(self.prec as i32)
        }
    }

    /// Nearest integer and the distance to it.
    fn round(&self, x: &BigInt) -> (BigInt, f64) {
        let half = BigInt::one() << (self.prec - 1);
        let n = (x + &half) >> self.prec;
        let diff = x - (&n << self.prec);
        (n, self.to_f64(&diff).abs())
    }
}

/// Approximate roots of a monic polynomial in double precision (Durand-Kerner).
fn roots_f64(g: &ZPoly) -> Vec<(f64, f64)> {
    let n = g.degree();
    let c: Vec<f64> = g.coeffs().iter().map(|x| x.to_f64().unwrap_or(f64::MAX)).collect();
    // Fujiwara bound on the root moduli
    let r = (0..n).map(|k| (c[k].abs()).powf(1.0 / (n - k) as f64)).fold(0.0f64, f64::max).max(0.5) * 2.0;
    let eval = |z: (f64, f64)| {
        let mut acc = (1.0, 0.0);
        for k in (0..n).rev() {
            acc = (acc.0 * z.0 - acc.1 * z.1 + c[k], acc.0 * z.1 + acc.1 * z.0);
        }
        acc
    };
    let mut z: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let t = 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            (0.5 * r * t.cos(), 0.5 * r * t.sin())
        })
        .collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let num = eval(z[i]);
            let mut den = (1.0, 0.0);
            for j in 0..n {
                if i != j {
                    let d = (z[i].0 - z[j].0, z[i].1 - z[j].1);
                    den = (den.0 * d.0 - den.1 * d.1, den.0 * d.1 + den.1 * d.0);
                }
            }
            let nn = den.0 * den.0 + den.1 * den.1;
            if nn == 0.0 {
                z[i].0 += 1e-3;
                continue;
            }
            let q = ((num.0 * den.0 + num.1 * den.1) / nn, (num.1 * den.0 - num.0 * den.1) / nn);
            z[i] = (z[i].0 - q.0, z[i].1 - q.1);
            delta = delta.max(q.0.abs().max(q.1.abs()) / (1.0 + z[i].0.hypot(z[i].1)));
        }
        if delta < 1e-15 {
            break;
        }
    }
    z
}

/// Roots of a monic squarefree polynomial to absolute accuracy about `2^-prec`.
fn roots_fixed(g: &ZPoly, fx: &Fixed) -> Result<Vec<Cx>> {
    let n = g.degree();
    let coeffs: Vec<Cx> = g.coeffs().iter().map(|a| fx.int(a)).collect();
    let mut z: Vec<Cx> = roots_f64(g).into_iter().map(|(a, b)| fx.lift(a, b)).collect();
    let tol = BigInt::one() << 16;
    for _ in 0..200 {
        let mut converged = true;
        for i in 0..n {
            let mut num = coeffs[n].clone();
            for k in (0..n).rev() {
                num = fx.add(&fx.mul(&num, &z[i]), &coeffs[k]);
            }
            let mut den = fx.int(&BigInt::one());
            for j in 0..n {
                if i != j {
                    den = fx.mul(&den, &fx.sub(&z[i], &z[j]));
                }
            }
            let Some(q) = fx.div(&num, &den) else {
                return Err(Error::Precision { slack: f64::INFINITY, bits: fx.prec });
            };
            if fx.mag_ulps(&q) > tol {
                converged = false;
            }
            z[i] = fx.sub(&z[i], &q);
        }
        if converged {
            return Ok(z);
        }
    }
    Err(Error::Precision { slack: f64::INFINITY, bits: fx.prec })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolventReport {
    pub polynomial: String,
    pub target: TargetGroup,
    pub degree: usize,
    /// Coefficients of `phi`, leading first.
    pub coefficients: Vec<String>,
    /// Largest distance of a computed coefficient from its rounded value.
    pub slack: f64,
    pub bits: u32,
    /// Whether recomputing at twice the precision rounds to the same `phi`.
    pub doubling_agrees: bool,
    pub discriminant_nonzero: bool,
    pub integer_roots: Vec<String>,
    #[serde(skip)]
    pub phi: ZPoly,
}

impl ResolventReport {
    pub fn has_integer_root(&self) -> bool {
        !self.integer_roots.is_empty()
    }
}

/// Coset sums and `phi` at a fixed precision.
fn resolvent_at(g: &ZPoly, target: TargetGroup, prec: u32) -> Result<(ZPoly, f64, Vec<BigInt>)> {
    let fx = Fixed { prec };
    let n = target.degree();
    let beta = roots_fixed(g, &fx)?;
    // powers beta_i^j for j = 1..n
    let pows: Vec<Vec<Cx>> = beta
        .iter()
        .map(|b| {
            let mut v = vec![b.clone()];
            for _ in 1..n {
                v.push(fx.mul(v.last().unwrap(), b));
            }
            v
        })
        .collect();
    let (reps, group) = coset_representatives(target);
    let thetas: Vec<Cx> = reps
        .iter()
        .map(|s| {
            let mut sum = fx.zero();
            for t in &group {
                let st = compose(s, t);
                let mut term = pows[st[0]][0].clone();
                for k in 1..n {
                    term = fx.mul(&term, &pows[st[k]][k]);
                }
                sum = fx.add(&sum, &term);
            }
            sum
        })
        .collect();
    // phi = prod (z - theta), constant term first
    let mut phi = vec![fx.int(&BigInt::one())];
    for th in &thetas {
        let mut next = vec![fx.zero(); phi.len() + 1];
        for (i, c) in phi.iter().enumerate() {
            next[i + 1] = fx.add(&next[i + 1], c);
            next[i] = fx.sub(&next[i], &fx.mul(c, th));
        }
        phi = next;
    }
    let mut slack = 0.0f64;
    let mut coeffs = Vec::with_capacity(phi.len());
    for c in &phi {
        let (r, s) = fx.round(&c.re);
        slack = slack.max(s).max(fx.to_f64(&c.im).abs());
        coeffs.push(r);
    }
    let phi = ZPoly::new(coeffs);
    let mut roots = Vec::new();
    for th in &thetas {
        if fx.to_f64(&th.im).abs() >= 0.5 {
            continue;
        }
        let (z, _) = fx.round(&th.re);
        if phi.eval(&z).is_zero() && !roots.contains(&z) {
            roots.push(z);
        }
    }
    roots.sort();
    Ok((phi, slack, roots))
}

/// Working precision from a bound on the resolvent coefficients plus 64 guard bits.
fn default_precision(g: &ZPoly, target: TargetGroup) -> u32 {
    let n = target.degree();
    let m = if n == 4 { 3.0 } else { 12.0 };
    let g_order = if n == 4 { 8.0f64 } else { 10.0 };
    let cauchy = 1.0 + g.coeffs()[..n].iter().map(|c| c.abs().to_f64().unwrap_or(f64::MAX)).fold(0.0, f64::max);
    let theta_bits = g_order.log2() + (n * (n + 1) / 2) as f64 * cauchy.log2();
    let coeff_bits = m * (theta_bits + 1.0);
    (coeff_bits.ceil() as u32).max(64) + 96
}

const MAX_PRECISION: u32 = 1 << 17;

/// The resolvent `phi(z) = prod_sigma (z - sum_{tau in G} prod_k beta_{sigma tau(k)}^k)`
/// over left coset representatives of `G` in `S_n`, for the monic polynomial
/// `a^(n-1) f(x/a)` whose roots are `beta = a alpha`.
pub fn galois_resolvent(f: &ZPoly, target: TargetGroup) -> Result<ResolventReport> {
    if f.degree() != target.degree() {
        return Err(Error::InvalidArgument(format!(
            "{target} resolvent needs degree {}, got {}",
            target.degree(),
            f.degree()
        )));
    }
    if !f.is_squarefree() {
        return Err(Error::InvalidArgument(format!("{f} has a repeated root")));
    }
    let g = f.primitive_part().monic_transform();
    let mut prec = default_precision(&g, target);
    loop {
        let attempt = resolvent_at(&g, target, prec);
        match attempt {
            Ok((phi, slack, roots)) if slack < 0.5 => {
                let (phi2, slack2, _) = resolvent_at(&g, target, 2 * prec)?;
                let doubling_agrees = slack2 < 0.5 && phi2 == phi;
                let discriminant_nonzero = !phi.discriminant().is_zero();
                let mut coefficients: Vec<String> = phi.coeffs().iter().map(|c| c.to_string()).collect();
                coefficients.reverse();
                return Ok(ResolventReport {
                    polynomial: f.to_string(),
                    target,
                    degree: phi.degree(),
                    coefficients,
                    slack,
                    bits: prec,
                    doubling_agrees,
                    discriminant_nonzero,
                    integer_roots: roots.iter().map(|r| r.to_string()).collect(),
                    phi,
                });
            }
            Ok((_, slack, _)) if prec * 2 > MAX_PRECISION => {
                return Err(Error::Precision { slack, bits: prec });
            }
            Err(e) if prec * 2 > MAX_PRECISION => return Err(e),
            _ => prec *= 2,
        }
    }
}

/// `disc(phi) != 0`, decided exactly on the rounded resolvent.
pub fn resolvent_discriminant_nonzero(f: &ZPoly, target: TargetGroup) -> Result<bool> {
    Ok(galois_resolvent(f, target)?.discriminant_nonzero)
}
