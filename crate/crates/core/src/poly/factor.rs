//! Factorization over the integers: modular factorization, Hensel lifting and
//! recombination of lifted factors.

use super::modp::{self, FpPoly};
use super::ZPoly;
use crate::arith::sieve_primes;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    /// Signed content of the input.
    pub content: BigInt,
    /// Primitive irreducible factors with positive leading coefficient and multiplicity.
    pub factors: Vec<(ZPoly, u32)>,
}

/// Irreducibility over Q of a nonconstant polynomial, decided on its primitive part.
pub fn is_irreducible(f: &ZPoly) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::InvalidArgument("zero polynomial".into()));
    }
    if f.degree() == 0 {
        return Err(Error::InvalidArgument("constant polynomial".into()));
    }
    let g = f.primitive_part();
    if g.degree() == 1 {
        return Ok(true);
    }
    if g.coeff(0).is_zero() || !g.is_squarefree() {
        return Ok(false);
    }
    let choice = choose_prime(&g);
    if choice.possible_degrees.iter().all(|&d| d == 0 || d == g.degree()) {
        return Ok(true);
    }
    Ok(zassenhaus(&g, &choice).len() == 1)
}

/// Complete factorization into primitive irreducibles.
pub fn factor(f: &ZPoly) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::InvalidArgument("zero polynomial".into()));
    }
    let mut content = f.content();
    if f.lc().is_negative() {
        content = -content;
    }
    let mut factors = Vec::new();
    let mut g = f.primitive_part();
    // powers of x first
    let mut k = 0;
    while g.degree() > 0 && g.coeff(0).is_zero() {
        g = ZPoly::new(g.coeffs()[1..].to_vec());
        k += 1;
    }
    if k > 0 {
        factors.push((ZPoly::from_i64(&[0, 1]), k));
    }
    if g.degree() > 0 {
        // factor the squarefree part, then read multiplicities off by division
        let sqfree = g.div_exact(&g.gcd(&g.derivative())).unwrap().primitive_part();
        for h in factor_squarefree(&sqfree) {
            let mut e = 0;
            while let Some(q) = g.div_exact(&h) {
                g = q;
                e += 1;
            }
            factors.push((h, e));
        }
    }
    factors.sort_by(|x, y| (x.0.degree(), x.0.coeffs()).cmp(&(y.0.degree(), y.0.coeffs())));
    Ok(Factorization { content, factors })
}

/// Irreducible factors of a primitive squarefree polynomial.
fn factor_squarefree(f: &ZPoly) -> Vec<ZPoly> {
    let f = f.primitive_part();
    if f.degree() <= 1 {
        return vec![f];
    }
    let choice = choose_prime(&f);
    if choice.possible_degrees.iter().all(|&d| d == 0 || d == f.degree()) {
        return vec![f];
    }
    zassenhaus(&f, &choice)
}

struct PrimeChoice {
    p: u64,
    factors: Vec<FpPoly>,
    /// Degrees that a factor over Z could have, allowed by every prime tried.
    possible_degrees: BTreeSet<usize>,
}

fn subset_sums(degs: &[usize]) -> BTreeSet<usize> {
    let mut s = BTreeSet::from([0usize]);
    for &d in degs {
        let next: Vec<usize> = s.iter().map(|x| x + d).collect();
        s.extend(next);
    }
    s
}

/// Try several primes of good reduction; keep the one with fewest modular factors.
fn choose_prime(f: &ZPoly) -> PrimeChoice {
    let lc = f.lc();
    let mut best: Option<(u64, Vec<usize>)> = None;
    let mut possible: Option<BTreeSet<usize>> = None;
    let mut tried = 0;
    for p in sieve_primes(10_000) {
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = modp::reduce(f, p);
        if !modp::is_squarefree(&fp, p) {
            continue;
        }
        let degs = modp::factor_degrees(&fp, p);
        let sums = subset_sums(&degs);
        possible = Some(match possible {
            None => sums,
            Some(s) => s.intersection(&sums).copied().collect(),
        });
        if best.as_ref().is_none_or(|(_, b)| degs.len() < b.len()) {
            best = Some((p, degs));
        }
        tried += 1;
        if tried >= 7 || best.as_ref().unwrap().1.len() == 1 {
            break;
        }
    }
    let (p, _) = best.expect("no prime of good reduction below 10^4");
    let fp = modp::reduce(f, p);
    PrimeChoice { p, factors: modp::factor_squarefree(&fp, p), possible_degrees: possible.unwrap() }
}

fn to_zpoly(a: &FpPoly) -> ZPoly {
    ZPoly::new(a.iter().map(|&x| BigInt::from(x)).collect())
}

fn mod_coeffs(f: &ZPoly, m: &BigInt) -> ZPoly {
    ZPoly::new(f.coeffs().iter().map(|a| a.mod_floor(m)).collect())
}

fn symmetric(f: &ZPoly, m: &BigInt) -> ZPoly {
    let half: BigInt = m >> 1;
    ZPoly::new(
        f.coeffs()
            .iter()
            .map(|a| {
                let r = a.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

/// Lift `f = lc * g * h (mod p)` with `g` monic to the same identity mod `p^k`.
fn hensel_pair(f: &ZPoly, g: &FpPoly, h: &FpPoly, p: u64, k: u32) -> (ZPoly, ZPoly) {
    let (one, s, t) = modp::xgcd(g, h, p);
    debug_assert_eq!(one, vec![1]);
    let pb = BigInt::from(p);
    let mut gz = to_zpoly(g);
    let mut hz = to_zpoly(h);
    let mut pj = pb.clone();
    for _ in 1..k {
        let diff = f.sub(&gz.mul(&hz));
        let e_big = ZPoly::new(diff.coeffs().iter().map(|c| c / &pj).collect());
        let e = modp::reduce(&e_big, p);
        let (q, b) = modp::divrem(&modp::mul(&e, &t, p), g, p);
        let a = modp::add(&modp::mul(&e, &s, p), &modp::mul(&q, h, p), p);
        gz = gz.add(&to_zpoly(&b).scale(&pj));
        hz = hz.add(&to_zpoly(&a).scale(&pj));
        pj = &pj * &pb;
    }
    (mod_coeffs(&gz, &pj), mod_coeffs(&hz, &pj))
}

/// Lift all modular factors of `f` to monic factors mod `p^k`.
fn hensel_lift(f: &ZPoly, factors: &[FpPoly], p: u64, k: u32) -> Vec<ZPoly> {
    let modulus = BigInt::from(p).pow(k);
    let mut out = Vec::new();
    let mut target = mod_coeffs(f, &modulus);
    for i in 0..factors.len() {
        if i + 1 == factors.len() {
            // the last factor is the target made monic
            let lc = target.lc();
            let inv = lc.modinv(&modulus).expect("leading coefficient is a unit");
            out.push(mod_coeffs(&target.scale(&inv), &modulus));
            break;
        }
        let g = &factors[i];
        let t = modp::reduce(&target, p);
        let h = modp::divrem(&t, g, p).0;
        let (gl, hl) = hensel_pair(&target, g, &h, p, k);
        out.push(gl);
        target = hl;
    }
    out
}

fn zassenhaus(f: &ZPoly, choice: &PrimeChoice) -> Vec<ZPoly> {
    let p = choice.p;
    let n = f.degree();
    let lc = f.lc();
    // coefficients of any factor are below 2^n * ||f||_2 in absolute value
    let norm2: BigInt = f.coeffs().iter().map(|c| c * c).sum::<BigInt>().sqrt() + 1u32;
    let bound: BigInt = (lc.abs() * norm2) << (n + 1);
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut pk = pb.clone();
    while pk <= bound {
        pk = &pk * &pb;
        k += 1;
    }
    let mut lifted = hensel_lift(f, &choice.factors, p, k);
    let mut g = f.clone();
    let mut result = Vec::new();
    let mut s = 1;
    while 2 * s <= lifted.len() {
        let mut found = false;
        for subset in combinations(lifted.len(), s) {
            let lcg = g.lc();
            let mut cand = ZPoly::constant(lcg.clone());
            for &i in &subset {
                cand = mod_coeffs(&cand.mul(&lifted[i]), &pk);
            }
            let cand = symmetric(&cand, &pk).primitive_part();
            if cand.degree() == 0 {
                continue;
            }
            if let Some(q) = g.div_exact(&cand) {
                result.push(cand);
                g = q.primitive_part();
                lifted = lifted
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, u)| u)
                    .collect();
                found = true;
                break;
            }
        }
        if !found {
            s += 1;
        }
    }
    if g.degree() > 0 {
        result.push(g);
    }
    result
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
            if i == 0 && cur[0] == n - k {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

impl Factorization {
    pub fn expand(&self) -> ZPoly {
        let mut acc = ZPoly::constant(self.content.clone());
        for (g, e) in &self.factors {
            for _ in 0..*e {
                acc = acc.mul(g);
            }
        }
        acc
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }
}

impl ZPoly {
    /// Integer roots, found as linear factors.
    pub fn integer_roots(&self) -> Vec<BigInt> {
        if self.is_zero() || self.degree() == 0 {
            return Vec::new();
        }
        let Ok(fac) = factor(self) else { return Vec::new() };
        let mut roots: Vec<BigInt> = fac
            .factors
            .iter()
            .filter(|(g, _)| g.degree() == 1 && g.lc().is_one())
            .map(|(g, _)| -g.coeff(0))
            .collect();
        roots.sort();
        roots
    }
}
