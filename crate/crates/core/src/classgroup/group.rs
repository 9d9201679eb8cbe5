//! Structure of finite abelian groups given by a black-box group law.

use crate::error::{Error, Result};
use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;

pub trait FiniteAbelianGroup {
    type Elem: Clone + Eq + Hash + Ord + Debug;

    fn identity(&self) -> Self::Elem;
    fn op(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;

    fn pow(&self, x: &Self::Elem, mut n: u64) -> Self::Elem {
        let mut acc = self.identity();
        let mut base = x.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.op(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.op(&base, &base);
            }
        }
        acc
    }

    /// Order of `x` by repeated composition, giving up past `limit`.
    fn order(&self, x: &Self::Elem, limit: u64) -> Option<u64> {
        let id = self.identity();
        let mut y = x.clone();
        for n in 1..=limit {
            if y == id {
                return Some(n);
            }
            y = self.op(&y, x);
        }
        None
    }
}

/// Elements of the subgroup generated by `gens`; stops early once `limit` elements are known.
pub fn closure<G: FiniteAbelianGroup>(
    g: &G,
    gens: impl IntoIterator<Item = G::Elem>,
    limit: Option<usize>,
) -> Vec<G::Elem> {
    let mut elems = vec![g.identity()];
    let mut seen: std::collections::HashSet<G::Elem> = elems.iter().cloned().collect();
    for x in gens {
        if limit.is_some_and(|l| elems.len() >= l) {
            break;
        }
        if seen.contains(&x) {
            continue;
        }
        let base = elems.clone();
        let mut y = x.clone();
        while !seen.contains(&y) {
            for h in &base {
                let e = g.op(h, &y);
                seen.insert(e.clone());
                elems.push(e);
            }
            y = g.op(&y, &x);
        }
    }
    elems
}

/// Multiplicity of the prime `p` in `n > 0`.
pub fn valuation(mut n: u64, p: u64) -> u32 {
    let mut e = 0;
    while n.is_multiple_of(p) {
        n /= p;
        e += 1;
    }
    e
}

/// Basis of an abelian p-group whose elements are all listed in `elems`.
/// Returns `(generator, order)` with orders descending.
pub fn p_group_basis<G: FiniteAbelianGroup>(
    g: &G,
    p: u64,
    elems: &[G::Elem],
) -> Result<Vec<(G::Elem, u64)>> {
    let total = elems.len();
    let mut basis: Vec<(G::Elem, u64)> = Vec::new();
    // discrete logs of the span of the basis so far
    let mut span: HashMap<G::Elem, Vec<u64>> = HashMap::new();
    span.insert(g.identity(), Vec::new());
    while span.len() < total {
        // element of largest order modulo the span
        let mut best: Option<(u64, &G::Elem)> = None;
        for x in elems {
            let mut m = 1u64;
            let mut y = x.clone();
            while !span.contains_key(&y) {
                y = g.pow(&y, p);
                m *= p;
            }
            if best.is_none_or(|(bm, _)| m > bm) {
                best = Some((m, x));
            }
        }
        let (m, x) = best.ok_or_else(|| Error::Internal("empty p-group".into()))?;
        let xm = g.pow(x, m);
        let coords = span[&xm].clone();
        let mut y = x.clone();
        for ((b, ord), s) in basis.iter().zip(&coords) {
            if s % m != 0 {
                return Err(Error::Internal(format!("p-group lift failed: {s} not divisible by {m}")));
            }
            let k = (ord - (s / m) % ord) % ord;
            y = g.op(&y, &g.pow(b, k));
        }
        if g.pow(&y, m) != g.identity() {
            return Err(Error::Internal("lifted generator has wrong order".into()));
        }
        let old: Vec<(G::Elem, Vec<u64>)> = span.drain().collect();
        let mut yj = g.identity();
        for j in 0..m {
            for (h, c) in &old {
                let mut c2 = c.clone();
                c2.push(j);
                span.insert(g.op(h, &yj), c2);
            }
            yj = g.op(&yj, &y);
        }
        if span.len() != old.len() * m as usize {
            return Err(Error::Internal("p-group span is not a direct product".into()));
        }
        basis.push((y, m));
    }
    Ok(basis)
}

/// Basis of one Sylow subgroup: the prime and `(generator, order)` pairs.
pub type PPart<E> = (u64, Vec<(E, u64)>);

/// Invariant-factor decomposition `d_1 | d_2 | ...` from the p-parts,
/// with one generator per factor.
pub fn combine_p_parts<G: FiniteAbelianGroup>(
    g: &G,
    parts: &[PPart<G::Elem>],
) -> Vec<(G::Elem, u64)> {
    let rank = parts.iter().map(|(_, b)| b.len()).max().unwrap_or(0);
    // the i-th largest factor collects the i-th largest cyclic piece of every p-part
    let mut out = Vec::with_capacity(rank);
    for i in 0..rank {
        let mut gen = g.identity();
        let mut d = 1u64;
        for (_, basis) in parts {
            if let Some((x, m)) = basis.get(i) {
                gen = g.op(&gen, x);
                d *= m;
            }
        }
        out.push((gen, d));
    }
    out.reverse();
    out
}

/// Full structure of a group of known order from a generating set.
pub fn structure_from_generators<G: FiniteAbelianGroup>(
    g: &G,
    order: u64,
    gens: &[G::Elem],
) -> Result<Vec<(G::Elem, u64)>> {
    let mut parts = Vec::new();
    for (p, e) in crate::arith::factorize(order).pairs {
        let pe = p.pow(e);
        let cofactor = order / pe;
        let projected: Vec<G::Elem> = gens.iter().map(|x| g.pow(x, cofactor)).collect();
        let sylow = closure(g, projected, Some(pe as usize));
        if sylow.len() as u64 != pe {
            return Err(Error::Internal(format!(
                "Sylow {p}-subgroup has {} elements, expected {pe}",
                sylow.len()
            )));
        }
        let basis = if e == 1 {
            let x = sylow.iter().find(|x| **x != g.identity()).cloned().unwrap();
            vec![(x, p)]
        } else {
            p_group_basis(g, p, &sylow)?
        };
        parts.push((p, basis));
    }
    Ok(combine_p_parts(g, &parts))
}
