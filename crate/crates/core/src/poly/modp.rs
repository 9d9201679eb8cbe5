//! Polynomials over a prime field, coefficients stored constant term first.

use super::ZPoly;
use crate::arith::{mul_mod, pow_mod};
use num_bigint::BigInt;
use num_traits::ToPrimitive;

pub type FpPoly = Vec<u64>;

fn trim(mut a: FpPoly) -> FpPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn reduce(f: &ZPoly, p: u64) -> FpPoly {
    let pb = BigInt::from(p);
    let c = f
        .coeffs()
        .iter()
        .map(|a| {
            let r = ((a % &pb) + &pb) % &pb;
            r.to_u64().unwrap()
        })
        .collect();
    trim(c)
}

pub fn degree(a: &FpPoly) -> usize {
    a.len().saturating_sub(1)
}

pub fn add(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    let c = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0);
            if x >= p {
                x - p
            } else {
                x
            }
        })
        .collect();
    trim(c)
}

pub fn sub(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    let c = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            if x >= y {
                x - y
            } else {
                x + p - y
            }
        })
        .collect();
    trim(c)
}

pub fn mul(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    trim(out)
}

pub fn scale(a: &FpPoly, k: u64, p: u64) -> FpPoly {
    trim(a.iter().map(|&x| mul_mod(x, k, p)).collect())
}

fn inv(x: u64, p: u64) -> u64 {
    pow_mod(x, p - 2, p)
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem(a: &FpPoly, b: &FpPoly, p: u64) -> (FpPoly, FpPoly) {
    assert!(!b.is_empty(), "division by zero polynomial");
    if a.len() < b.len() {
        return (Vec::new(), a.clone());
    }
    let mut r = a.clone();
    let db = b.len() - 1;
    let il = inv(*b.last().unwrap(), p);
    let mut q = vec![0u64; a.len() - db];
    for i in (0..q.len()).rev() {
        let top = r[i + db];
        if top == 0 {
            continue;
        }
        let c = mul_mod(top, il, p);
        q[i] = c;
        for (j, &y) in b.iter().enumerate() {
            let t = mul_mod(c, y, p);
            r[i + j] = if r[i + j] >= t { r[i + j] - t } else { r[i + j] + p - t };
        }
    }
    (trim(q), trim(r))
}

pub fn rem(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    divrem(a, b, p).1
}

pub fn monic(a: &FpPoly, p: u64) -> FpPoly {
    match a.last() {
        None => Vec::new(),
        Some(&l) => scale(a, inv(l, p), p),
    }
}

pub fn gcd(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    monic(&x, p)
}

/// `(g, s, t)` with `s a + t b = g = gcd(a, b)`, `g` monic.
pub fn xgcd(a: &FpPoly, b: &FpPoly, p: u64) -> (FpPoly, FpPoly, FpPoly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let s2 = sub(&s0, &mul(&q, &s1, p), p);
        let t2 = sub(&t0, &mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    let l = inv(*r0.last().unwrap_or(&1), p);
    (scale(&r0, l, p), scale(&s0, l, p), scale(&t0, l, p))
}

pub fn derivative(a: &FpPoly, p: u64) -> FpPoly {
    trim(a.iter().enumerate().skip(1).map(|(i, &x)| mul_mod(x, i as u64 % p, p)).collect())
}

/// `base^e mod m`.
pub fn powmod(base: &FpPoly, mut e: u128, m: &FpPoly, p: u64) -> FpPoly {
    let mut result = vec![1u64];
    let mut b = rem(base, m, p);
    result = rem(&result, m, p);
    while e > 0 {
        if e & 1 == 1 {
            result = rem(&mul(&result, &b, p), m, p);
        }
        e >>= 1;
        if e > 0 {
            b = rem(&mul(&b, &b, p), m, p);
        }
    }
    result
}

pub fn is_squarefree(a: &FpPoly, p: u64) -> bool {
    degree(&gcd(a, &derivative(a, p), p)) == 0
}

/// Whether `f` (with `p` not dividing its leading coefficient) splits into
/// distinct linear factors mod `p`, i.e. `x^p = x mod f`.
pub fn splits_completely(f: &FpPoly, p: u64) -> bool {
    if f.len() <= 2 {
        return true;
    }
    let xp = powmod(&vec![0, 1], p as u128, f, p);
    xp == rem(&vec![0, 1], f, p) && is_squarefree(f, p)
}

/// Distinct-degree factorization of a monic squarefree `f`: pairs
/// `(d, g)` where `g` is the product of all irreducible factors of degree `d`.
pub fn distinct_degree(f: &FpPoly, p: u64) -> Vec<(usize, FpPoly)> {
    let mut out = Vec::new();
    let mut f = monic(f, p);
    let x = vec![0u64, 1];
    let mut h = x.clone();
    let mut d = 0;
    while degree(&f) >= 2 * (d + 1) {
        d += 1;
        h = powmod(&h, p as u128, &f, p);
        let g = gcd(&f, &sub(&h, &x, p), p);
        if degree(&g) > 0 {
            f = divrem(&f, &g, p).0;
            h = rem(&h, &f, p);
            out.push((d, g));
        }
    }
    if degree(&f) > 0 {
        out.push((degree(&f), f));
    }
    out
}

/// Degrees of the irreducible factors of a squarefree `f` mod `p`, ascending.
pub fn factor_degrees(f: &FpPoly, p: u64) -> Vec<usize> {
    let mut degs = Vec::new();
    for (d, g) in distinct_degree(f, p) {
        degs.extend(std::iter::repeat_n(d, degree(&g) / d));
    }
    degs.sort_unstable();
    degs
}

/// Split a product of distinct monic irreducibles of degree `d` into its factors
/// (Cantor-Zassenhaus with a deterministic sequence of trial elements).
pub fn equal_degree(g: &FpPoly, d: usize, p: u64) -> Vec<FpPoly> {
    let n = degree(g);
    if n == d {
        return vec![monic(g, p)];
    }
    let mut seed: u64 = 0x9e37_79b9_7f4a_7c15;
    loop {
        // trial element of degree < n from a fixed xorshift stream
        let mut a: FpPoly = (0..n)
            .map(|_| {
                seed ^= seed << 13;
                seed ^= seed >> 7;
                seed ^= seed << 17;
                seed % p
            })
            .collect();
        a = trim(a);
        if degree(&a) == 0 {
            continue;
        }
        let candidate = if p == 2 {
            // trace map a + a^2 + ... + a^(2^(d-1))
            let mut t = a.clone();
            let mut s = a.clone();
            for _ in 1..d {
                t = rem(&mul(&t, &t, p), g, p);
                s = add(&s, &t, p);
            }
            gcd(g, &s, p)
        } else {
            let e = ((p as u128).pow(d as u32) - 1) / 2;
            let b = powmod(&a, e, g, p);
            gcd(g, &sub(&b, &vec![1], p), p)
        };
        let k = degree(&candidate);
        if k > 0 && k < n {
            let other = divrem(g, &candidate, p).0;
            let mut out = equal_degree(&candidate, d, p);
            out.extend(equal_degree(&other, d, p));
            return out;
        }
    }
}

/// Monic irreducible factors of a squarefree `f` mod `p`.
pub fn factor_squarefree(f: &FpPoly, p: u64) -> Vec<FpPoly> {
    let mut out = Vec::new();
    for (d, g) in distinct_degree(f, p) {
        out.extend(equal_degree(&g, d, p));
    }
    out
}
