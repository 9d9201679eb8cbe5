//! Integer polynomials with prescribed leading and constant coefficients:
//! enumeration, Galois groups, resolvents and growth of their counts.

pub mod galois;
pub mod resolvent;

pub use galois::{frobenius_patterns, galois_group_id, separable_resolvent, GaloisGroup, GaloisLabel};
pub use resolvent::{coset_representatives, galois_resolvent, resolvent_discriminant_nonzero, ResolventReport, TargetGroup};

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::fit::loglog_slope;
use crate::poly::{is_irreducible, ZPoly};
use rayon::prelude::*;
use serde::Serialize;

/// `p^l x^d + a_1 x^(d-1) + ... + a_(d-1) x +- q^l` with all `|a_i| <= B`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShapePolynomial {
    pub degree: usize,
    pub ell: u32,
    /// `a_0, ..., a_d`, leading coefficient first.
    pub coeffs: Vec<i64>,
    pub bound: i64,
}

impl ShapePolynomial {
    pub fn poly(&self) -> ZPoly {
        ZPoly::from_desc(&self.coeffs)
    }
}

/// Which integers may sit at the two ends of a counted polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Endpoints {
    /// `a_0` and `a_d` are nonzero l-th powers of integers.
    Powers,
    /// `a_0 = p^l` and `a_d = +-q^l` with `p, q` prime.
    PrimePowers,
}

impl Endpoints {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "powers" => Ok(Endpoints::Powers),
            "prime-powers" | "primes" => Ok(Endpoints::PrimePowers),
            _ => Err(Error::Parse(format!("unknown endpoint mode {s}"))),
        }
    }
}

fn ell_powers(ell: u32, bound: i64, primes_only: bool) -> Vec<i64> {
    (1i64..)
        .map_while(|m| m.checked_pow(ell).filter(|&v| v <= bound).map(|v| (m, v)))
        .filter(|&(m, _)| !primes_only || is_prime(m as u64))
        .map(|(_, v)| v)
        .collect()
}

/// Allowed leading and constant coefficients.
pub fn endpoint_sets(ell: u32, bound: i64, mode: Endpoints) -> (Vec<i64>, Vec<i64>) {
    match mode {
        Endpoints::Powers => {
            let pos = ell_powers(ell, bound, false);
            let set: Vec<i64> = if ell % 2 == 1 {
                pos.iter().rev().map(|v| -v).chain(pos.iter().copied()).collect()
            } else {
                pos
            };
            (set.clone(), set)
        }
        Endpoints::PrimePowers => {
            let pos = ell_powers(ell, bound, true);
            let cons = pos.iter().rev().map(|v| -v).chain(pos.iter().copied()).collect();
            (pos, cons)
        }
    }
}

/// Every vector in `[-b, b]^len`, in lexicographic order.
struct Odometer {
    digits: Vec<i64>,
    b: i64,
    done: bool,
}

impl Iterator for Odometer {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        if self.done {
            return None;
        }
        let out = self.digits.clone();
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.digits[i] < self.b {
                self.digits[i] += 1;
                break;
            }
            self.digits[i] = -self.b;
        }
        Some(out)
    }
}

fn middles(len: usize, b: i64) -> Odometer {
    Odometer { digits: vec![-b; len], b, done: false }
}

fn check_shape(d: usize, ell: u32, b: i64) -> Result<()> {
    if d < 2 || ell < 1 || b < 2 {
        return Err(Error::InvalidArgument(format!("need d >= 2, l >= 1, B >= 2 (got {d}, {ell}, {b})")));
    }
    Ok(())
}

/// All shape polynomials with prime-power ends, leading coefficient outermost.
pub fn enumerate_shape_polys(d: usize, ell: u32, b: i64) -> Result<impl Iterator<Item = ShapePolynomial>> {
    check_shape(d, ell, b)?;
    let (lead, cons) = endpoint_sets(ell, b, Endpoints::PrimePowers);
    Ok(lead.into_iter().flat_map(move |a0| {
        let cons = cons.clone();
        cons.into_iter().flat_map(move |ad| {
            middles(d - 1, b).map(move |mid| {
                let mut coeffs = Vec::with_capacity(d + 1);
                coeffs.push(a0);
                coeffs.extend(mid);
                coeffs.push(ad);
                ShapePolynomial { degree: d, ell, coeffs, bound: b }
            })
        })
    }))
}

/// Size of the enumeration: `#{p^l <= B} * 2 #{q^l <= B} * (2B + 1)^(d-1)`.
pub fn shape_count(d: usize, ell: u32, b: i64) -> u128 {
    let (lead, cons) = endpoint_sets(ell, b, Endpoints::PrimePowers);
    lead.len() as u128 * cons.len() as u128 * (2 * b as u128 + 1).pow(d as u32 - 1)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountRow {
    pub d: usize,
    pub ell: u32,
    pub b: i64,
    pub total: u128,
    pub irreducible: u128,
    /// `all` for the irreducible count, otherwise the group name.
    pub group: String,
    pub count: u128,
    /// Group matches whose label is not certified.
    pub uncertified: u128,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolyCountReport {
    pub endpoints: Endpoints,
    pub rows: Vec<CountRow>,
    /// Log-log slope of `count` against `B`.
    pub slope: Option<f64>,
    pub slope_total: Option<f64>,
}

/// For `n != 0`, the number of `b` in `[-B, B]` with `b^2 - 4n` a square,
/// indexed by `|n|` separately for each sign.
struct SquareDiscTable {
    pos: Vec<u16>,
    neg: Vec<u16>,
}

impl SquareDiscTable {
    fn new(max_n: u64, b: u64) -> Self {
        let mut pos = vec![0u16; max_n as usize + 1];
        let mut neg = vec![0u16; max_n as usize + 1];
        // b^2 - 4uv = (v - u)^2 with b = +-(u + v)
        for u in 1..=b / 2 {
            for v in u..=(b - u) {
                let n = u * v;
                if n > max_n {
                    break;
                }
                pos[n as usize] += 2;
            }
        }
        // b^2 + 4uv = (u + v)^2 with b = +-(v - u)
        let mut u = 1;
        while u * u <= max_n {
            for v in u..=(u + b).min(max_n / u) {
                neg[(u * v) as usize] += if u == v { 1 } else { 2 };
            }
            u += 1;
        }
        SquareDiscTable { pos, neg }
    }

    fn get(&self, n: i64) -> u64 {
        if n > 0 {
            self.pos[n as usize] as u64
        } else {
            self.neg[n.unsigned_abs() as usize] as u64
        }
    }
}

/// `(total, irreducible)` quadratics `a x^2 + b x + c`: reducible exactly when `b^2 - 4ac` is a square.
fn quadratic_counts(lead: &[i64], cons: &[i64], b: i64) -> (u128, u128) {
    let max_n = lead.iter().map(|a| a.unsigned_abs()).max().unwrap_or(0)
        * cons.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0);
    let table = SquareDiscTable::new(max_n, b as u64);
    let width = 2 * b as u64 + 1;
    let irreducible: u128 = lead
        .par_iter()
        .map(|&a| cons.iter().map(|&c| (width - table.get(a * c)) as u128).sum::<u128>())
        .sum();
    (lead.len() as u128 * cons.len() as u128 * width as u128, irreducible)
}

/// Per-polynomial tallies: irreducible, group match, uncertified group match.
fn classify(f: &ZPoly, filter: Option<GaloisGroup>) -> Result<(u128, u128, u128)> {
    if !is_irreducible(f)? {
        return Ok((0, 0, 0));
    }
    let Some(g) = filter else { return Ok((1, 1, 0)) };
    let label = galois_group_id(f)?;
    if label.group != g {
        return Ok((1, 0, 0));
    }
    Ok((1, 1, u128::from(!label.certified)))
}

fn count_one(d: usize, ell: u32, b: i64, filter: Option<GaloisGroup>, mode: Endpoints) -> Result<CountRow> {
    check_shape(d, ell, b)?;
    let (lead, cons) = endpoint_sets(ell, b, mode);
    let group = filter.map_or("all".to_string(), |g| g.to_string());
    if d == 2 && filter.is_none_or(|g| g == GaloisGroup::C2) {
        let (total, irreducible) = quadratic_counts(&lead, &cons, b);
        return Ok(CountRow { d, ell, b, total, irreducible, group, count: irreducible, uncertified: 0 });
    }
    let pairs: Vec<(i64, i64)> = lead.iter().flat_map(|&a| cons.iter().map(move |&c| (a, c))).collect();
    let tallies: Vec<(u128, u128, u128)> = pairs
        .par_iter()
        .map(|&(a0, ad)| {
            let mut t = (0, 0, 0);
            for mid in middles(d - 1, b) {
                let mut c = Vec::with_capacity(d + 1);
                c.push(a0);
                c.extend(mid);
                c.push(ad);
                let (i, m, u) = classify(&ZPoly::from_desc(&c), filter)?;
                t = (t.0 + i, t.1 + m, t.2 + u);
            }
            Ok(t)
        })
        .collect::<Result<_>>()?;
    let (irreducible, count, uncertified) =
        tallies.iter().fold((0, 0, 0), |acc, t| (acc.0 + t.0, acc.1 + t.1, acc.2 + t.2));
    let total = pairs.len() as u128 * (2 * b as u128 + 1).pow(d as u32 - 1);
    Ok(CountRow { d, ell, b, total, irreducible, group, count, uncertified })
}

/// Counts of irreducible polynomials of degree `d` with l-th power ends,
/// optionally restricted to one Galois group, along a ladder of bounds `B`.
pub fn count_by_group(
    d: usize,
    ell: u32,
    ladder: &[i64],
    filter: Option<GaloisGroup>,
    mode: Endpoints,
) -> Result<PolyCountReport> {
    if let Some(g) = filter {
        if g.degree() != d {
            return Err(Error::InvalidArgument(format!("{g} is not a group of degree {d}")));
        }
    }
    if d > 5 {
        return Err(Error::Unsupported(format!("degree {d} above 5")));
    }
    let rows: Vec<CountRow> = ladder.iter().map(|&b| count_one(d, ell, b, filter, mode)).collect::<Result<_>>()?;
    let fit = |key: fn(&CountRow) -> u128| {
        let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.b as f64, key(r) as f64)).collect();
        loglog_slope(&pts).ok()
    };
    Ok(PolyCountReport { endpoints: mode, slope: fit(|r| r.count), slope_total: fit(|r| r.total), rows })
}
