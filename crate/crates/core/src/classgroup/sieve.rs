//! Class numbers of many imaginary discriminants at once, and group structure
//! from a known class number.

use super::form::QuadraticForm;
use super::group::{self, FiniteAbelianGroup};
use super::ImaginaryGroup;
use crate::arith::{factorize, FundamentalDiscriminant};
use crate::error::{Error, Result};

/// Number of reduced forms (primitive or not) of discriminant `-n` for every
/// `n` in `lo..=hi`, indexed by `n - lo`. For fundamental `-n` this is `h(-n)`.
pub fn imaginary_class_numbers(lo: u64, hi: u64) -> Vec<u32> {
    assert!(lo >= 1 && lo <= hi);
    let mut counts = vec![0u32; (hi - lo + 1) as usize];
    // |D| = 4ac - b^2 with 0 <= b <= a <= c, so 3a^2 <= |D|
    let mut a = 1u64;
    while 3 * a * a <= hi {
        let step = 4 * a;
        for b in 0..=a {
            let b2 = b * b;
            let cmin = a.max((lo + b2).div_ceil(step));
            let cmax = (hi + b2) / step;
            if cmin > cmax {
                continue;
            }
            let mut idx = (step * cmin - b2 - lo) as usize;
            let mut c = cmin;
            // (a, +-b, c) are distinct reduced forms unless b = 0, b = a or a = c
            if b == 0 || b == a {
                while c <= cmax {
                    counts[idx] += 1;
                    idx += step as usize;
                    c += 1;
                }
            } else {
                if c == a {
                    counts[idx] += 1;
                    idx += step as usize;
                    c += 1;
                }
                while c <= cmax {
                    counts[idx] += 2;
                    idx += step as usize;
                    c += 1;
                }
            }
        }
        a += 1;
    }
    counts
}

/// Invariant factors of the class group of `d < 0` whose order `h` is already known.
/// Only Sylow subgroups of non-squarefree order need group computations.
pub fn imaginary_divisors_with_order(d: FundamentalDiscriminant, h: u64) -> Result<Vec<u64>> {
    if !d.is_imaginary() {
        return Err(Error::InvalidArgument(format!("{d} is not negative")));
    }
    let g = ImaginaryGroup { d: d.value() };
    let mut parts: Vec<(u64, Vec<u64>)> = Vec::new();
    for (p, e) in factorize(h).pairs {
        if e == 1 {
            parts.push((p, vec![p]));
            continue;
        }
        let pe = p.pow(e);
        let cofactor = h / pe;
        // prime forms are generated lazily; the closure stops once the subgroup is full
        let projected = g.prime_forms().map(|f| g.pow(&f, cofactor));
        let sylow = group::closure(&g, projected, Some(pe as usize));
        if sylow.len() as u64 != pe {
            return Err(Error::Internal(format!(
                "D = {d}: Sylow {p}-subgroup reached {} of {pe} elements",
                sylow.len()
            )));
        }
        let basis = p_group_orders(&g, p, e, &sylow)?;
        parts.push((p, basis));
    }
    let rank = parts.iter().map(|(_, b)| b.len()).max().unwrap_or(0);
    let mut divs: Vec<u64> = (0..rank)
        .map(|i| parts.iter().filter_map(|(_, b)| b.get(i)).product())
        .collect();
    divs.reverse();
    Ok(divs)
}

/// Cyclic factor orders of an abelian p-group of order p^e (descending),
/// read off from the sizes of its p^j-torsion subgroups.
fn p_group_orders(g: &ImaginaryGroup, p: u64, e: u32, elems: &[QuadraticForm]) -> Result<Vec<u64>> {
    // t[j] = log_p #G[p^j]; the number of cyclic factors of order >= p^j is t[j] - t[j-1]
    let id = g.identity();
    let mut level = vec![0u32; elems.len()];
    for (i, x) in elems.iter().enumerate() {
        let mut y = *x;
        let mut j = 0;
        while y != id {
            y = g.pow(&y, p);
            j += 1;
        }
        level[i] = j;
    }
    let max_level = *level.iter().max().unwrap_or(&0);
    let mut t = vec![0u32; max_level as usize + 1];
    for j in 0..=max_level {
        let count = level.iter().filter(|&&l| l <= j).count() as u64;
        let mut k = 0;
        let mut c = count;
        while c > 1 {
            if !c.is_multiple_of(p) {
                return Err(Error::Internal("torsion subgroup size is not a p-power".into()));
            }
            c /= p;
            k += 1;
        }
        t[j as usize] = k;
    }
    if t[max_level as usize] != e {
        return Err(Error::Internal("p-group order mismatch".into()));
    }
    // number of factors of order exactly p^j
    let mut out = Vec::new();
    for j in (1..=max_level as usize).rev() {
        let at_least_j = t[j] - t[j - 1];
        let at_least_next = if j < max_level as usize { t[j + 1] - t[j] } else { 0 };
        for _ in 0..(at_least_j - at_least_next) {
            out.push(p.pow(j as u32));
        }
    }
    Ok(out)
}
