//! The invariant eta_l(K) of a quadratic field: the least height of an element
//! generating `(p1 / p2)^l` for distinct degree-1 unramified primes.

pub mod ideal;
pub mod oracle;

pub use oracle::{eta_brute_oracle, mechanism_violations};

use crate::arith::{kronecker, sieve_primes, FundamentalDiscriminant};
use crate::classgroup::{
    fundamental_unit, FiniteAbelianGroup, FormCycles, FundamentalUnit, ImaginaryGroup, QuadraticForm,
};
use crate::error::{Error, Result};
use crate::poly::ZPoly;
use ideal::BigForm;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

/// `(x + y sqrt D)/z` in lowest terms with `z > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuadraticElement {
    pub x: BigInt,
    pub y: BigInt,
    pub z: BigInt,
    #[serde(skip)]
    pub d: i64,
}

impl QuadraticElement {
    pub fn new(x: BigInt, y: BigInt, z: BigInt, d: i64) -> Result<Self> {
        if z.is_zero() {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        let mut g = x.gcd(&y).gcd(&z);
        if z.is_negative() {
            g = -g;
        }
        Ok(QuadraticElement { x: x / &g, y: y / &g, z: z / &g, d })
    }

    pub fn from_i64(x: i64, y: i64, z: i64, d: i64) -> Result<Self> {
        Self::new(x.into(), y.into(), z.into(), d)
    }

    pub fn one(d: i64) -> Self {
        QuadraticElement { x: BigInt::one(), y: BigInt::zero(), z: BigInt::one(), d }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn conj(&self) -> Self {
        QuadraticElement { x: self.x.clone(), y: -&self.y, z: self.z.clone(), d: self.d }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let dd = BigInt::from(self.d);
        let x = &self.x * &o.x + &dd * &self.y * &o.y;
        let y = &self.x * &o.y + &self.y * &o.x;
        Self::new(x, y, &self.z * &o.z, self.d).unwrap()
    }

    pub fn norm(&self) -> BigRational {
        let n = &self.x * &self.x - BigInt::from(self.d) * &self.y * &self.y;
        BigRational::new(n, &self.z * &self.z)
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut acc = Self::one(self.d);
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    pub fn inverse(&self) -> Self {
        // 1/a = conj(a) / N(a)
        let n = self.norm();
        let c = self.conj();
        Self::new(&c.x * n.denom(), &c.y * n.denom(), &c.z * n.numer(), self.d).unwrap()
    }

    /// Primitive minimal polynomial over Z with positive leading coefficient.
    pub fn minimal_polynomial(&self) -> Result<ZPoly> {
        if self.y.is_zero() {
            return Ok(ZPoly::new(vec![-&self.x, self.z.clone()]).primitive_part());
        }
        let z = &self.z;
        let c0 = &self.x * &self.x - BigInt::from(self.d) * &self.y * &self.y;
        let c1 = BigInt::from(-2) * &self.x * z;
        Ok(ZPoly::new(vec![c0, c1, z * z]).primitive_part())
    }

    /// Sign of `x + y sqrt D` for real fields.
    fn numerator_sign(&self) -> Ordering {
        sign_of(&BigRational::from(self.x.clone()), &BigRational::from(self.y.clone()), self.d)
    }

    /// `ln |alpha|` for real fields, without cancellation when `x` and `y sqrt D` nearly cancel.
    fn ln_abs(&self) -> f64 {
        let sum = ln_abs_sum(&self.x, &self.y, self.d);
        let opposite = !self.x.is_zero() && !self.y.is_zero() && self.x.is_negative() != self.y.is_negative();
        let num = if opposite {
            // |x + y sqrt D| = |x^2 - D y^2| / (|x| + |y| sqrt D)
            let n = &self.x * &self.x - BigInt::from(self.d) * &self.y * &self.y;
            ln_big(&n.abs()) - sum
        } else {
            sum
        };
        num - ln_big(&self.z)
    }
}

impl fmt::Display for QuadraticElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.y.is_negative() { '-' } else { '+' };
        write!(f, "({} {} {}*sqrt({}))/{}", self.x, sign, self.y.abs(), self.d, self.z)
    }
}

fn big_to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(if x.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

/// `ln(|x| + |y| sqrt d)`.
fn ln_abs_sum(x: &BigInt, y: &BigInt, d: i64) -> f64 {
    let shift = x.bits().max(y.bits()).saturating_sub(900);
    let xf = big_to_f64(&(x.abs() >> shift));
    let yf = big_to_f64(&(y.abs() >> shift));
    (xf + yf * (d as f64).sqrt()).ln() + shift as f64 * std::f64::consts::LN_2
}

fn ln_big(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return big_to_f64(x).ln();
    }
    let shift = bits - 900;
    big_to_f64(&(x >> shift)).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Sign of `r + s sqrt d` for `d > 0`; for `d < 0` only `s = 0` is meaningful.
fn sign_of(r: &BigRational, s: &BigRational, d: i64) -> Ordering {
    let sr = r.cmp(&BigRational::zero());
    let ss = s.cmp(&BigRational::zero());
    if ss == Ordering::Equal {
        return sr;
    }
    if sr == Ordering::Equal || sr == ss {
        return ss;
    }
    // opposite signs: compare r^2 with s^2 d
    let lhs = r * r;
    let rhs = s * s * BigRational::from(BigInt::from(d));
    match lhs.cmp(&rhs) {
        Ordering::Greater => sr,
        Ordering::Less => ss,
        Ordering::Equal => Ordering::Equal,
    }
}

/// An exact height `r + s sqrt D` (with `s = 0` unless `D > 0`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Height {
    pub r: BigRational,
    pub s: BigRational,
    pub d: i64,
}

impl Height {
    pub fn integer(n: BigInt, d: i64) -> Self {
        Height { r: BigRational::from(n), s: BigRational::zero(), d }
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        (self.s.is_zero() && self.r.is_integer()).then(|| self.r.to_integer())
    }

    pub fn to_f64(&self) -> f64 {
        let r = crate::exponents::to_f64(&self.r);
        let s = crate::exponents::to_f64(&self.s);
        r + s * (self.d.max(0) as f64).sqrt()
    }

    /// Smallest integer at least the height.
    pub fn ceil(&self) -> BigInt {
        if let Some(n) = self.as_integer() {
            return n;
        }
        let mut n = BigInt::from(self.to_f64().ceil() as i128);
        // fix up the float estimate exactly
        while self.cmp(&Height::integer(n.clone(), self.d)) == Ordering::Greater {
            n += 1;
        }
        while self.cmp(&Height::integer(&n - 1, self.d)) != Ordering::Greater {
            n -= 1;
        }
        n
    }
}

impl PartialOrd for Height {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Height {
    fn cmp(&self, other: &Self) -> Ordering {
        sign_of(&(&self.r - &other.r), &(&self.s - &other.s), self.d)
    }
}

impl fmt::Display for Height {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.s.is_zero() {
            write!(f, "{}", self.r)
        } else {
            write!(f, "{} + {}*sqrt({})", self.r, self.s, self.d)
        }
    }
}

/// Multiplicative Weil height of `alpha` relative to its quadratic field.
pub fn weil_height(alpha: &QuadraticElement) -> Result<Height> {
    if alpha.is_zero() {
        return Err(Error::InvalidArgument("height of zero".into()));
    }
    let d = alpha.d;
    if alpha.y.is_zero() {
        // rational: H_K = H_Q^2
        let m = alpha.x.abs().max(alpha.z.clone());
        return Ok(Height::integer(&m * &m, d));
    }
    let f = alpha.minimal_polynomial()?;
    let a0 = f.lc();
    let a2 = f.coeff(0).abs();
    if d < 0 {
        // one complex place: a0 max(1, |alpha|^2) = max(a0, a2)
        return Ok(Height::integer(a0.max(a2), d));
    }
    let one = BigRational::one();
    let z = BigRational::from(alpha.z.clone());
    let x = BigRational::from(alpha.x.clone());
    let y = BigRational::from(alpha.y.clone());
    // |alpha| > 1 iff sign * (x + y sqrt D) > z
    let s1 = alpha.numerator_sign();
    let s2 = alpha.conj().numerator_sign();
    let sg = |o: Ordering| if o == Ordering::Less { -one.clone() } else { one.clone() };
    let big1 = sign_of(&(&sg(s1) * &x - &z), &(&sg(s1) * &y), d) == Ordering::Greater;
    let big2 = sign_of(&(&sg(s2) * &x - &z), &(-&sg(s2) * &y), d) == Ordering::Greater;
    let a0q = BigRational::from(a0.clone());
    Ok(match (big1, big2) {
        (false, false) => Height::integer(a0, d),
        (true, true) => Height::integer(a2, d),
        (true, false) => Height { r: &a0q * sg(s1) * &x / &z, s: &a0q * sg(s1) * &y / &z, d },
        (false, true) => Height { r: &a0q * sg(s2) * &x / &z, s: -&a0q * sg(s2) * &y / &z, d },
    })
}

fn unit_element(u: &FundamentalUnit, d: i64) -> QuadraticElement {
    QuadraticElement::new(u.x.clone(), u.y.clone(), BigInt::from(2), d).unwrap()
}

/// Least height over `alpha * eps^m`, with the minimizing `m` and element.
///
/// `m -> log H(alpha eps^m)` is convex and piecewise linear with breakpoints
/// `-log|alpha|/log eps` and `log|alpha'|/log eps`, so the integer minimum sits
/// next to a breakpoint; two integers either side of each are tested exactly.
pub fn unit_orbit_min_height(
    alpha: &QuadraticElement,
    unit: &FundamentalUnit,
) -> Result<(Height, i64, QuadraticElement)> {
    let d = alpha.d;
    if d <= 0 {
        return Err(Error::InvalidArgument("unit orbits need a real field".into()));
    }
    if alpha.is_zero() {
        return Err(Error::InvalidArgument("height of zero".into()));
    }
    let eps = unit_element(unit, d);
    let r = eps.ln_abs();
    let l1 = alpha.ln_abs();
    let l2 = alpha.conj().ln_abs();
    let mut candidates: Vec<i64> = Vec::new();
    for bp in [-l1 / r, l2 / r] {
        let f = bp.floor() as i64;
        candidates.extend(f - 2..=f + 2);
    }
    candidates.push(0);
    candidates.sort_by_key(|m| (m.abs(), *m));
    candidates.dedup();
    let mut best: Option<(Height, i64, QuadraticElement)> = None;
    for m in candidates {
        let beta = alpha.mul(&eps.pow(m));
        let h = weil_height(&beta)?;
        if best.as_ref().is_none_or(|(bh, _, _)| h < *bh) {
            best = Some((h, m, beta));
        }
    }
    Ok(best.unwrap())
}

/// A degree-1 unramified prime ideal `pZ + ((-b + sqrt D)/2)Z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeIdeal {
    pub p: u64,
    pub b: i64,
}

impl PrimeIdeal {
    fn form(&self, d: i64) -> BigForm {
        BigForm::from_ab(self.p.into(), self.b.into(), d)
    }

    pub(crate) fn small_form(&self, d: i64) -> QuadraticForm {
        let c = ((self.b as i128 * self.b as i128 - d as i128) / (4 * self.p as i128)) as i64;
        QuadraticForm::new(self.p as i64, self.b, c)
    }
}

/// Both prime ideals above each split `p <= bound`, ordered by norm.
pub fn split_prime_ideals(d: i64, bound: u64) -> Vec<PrimeIdeal> {
    let mut out = Vec::new();
    for p in sieve_primes(bound) {
        if kronecker(d, p) != 1 {
            continue;
        }
        let f = QuadraticForm::prime_form(d, p).expect("split prime has a form");
        out.push(PrimeIdeal { p, b: f.b });
        out.push(PrimeIdeal { p, b: -f.b });
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EtaCertificate {
    #[serde(rename = "D")]
    pub d: i64,
    pub ell: u32,
    /// eta as an integer, or the least integer above it when it is irrational.
    pub value: BigInt,
    /// Exact value `r + s*sqrt(D)` when it is not an integer.
    pub value_exact: Option<String>,
    pub p1: u64,
    pub p2: u64,
    pub ideal1: PrimeIdeal,
    pub ideal2: PrimeIdeal,
    pub witness: QuadraticElement,
    pub exhausted_bound: u64,
    pub exact: bool,
    #[serde(skip)]
    pub height: Height,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
#[allow(clippy::large_enum_variant)]
pub enum EtaOutcome {
    Found(EtaCertificate),
    /// No admissible pair with both norms at most the bound.
    Unresolved {
        #[serde(rename = "D")]
        d: i64,
        ell: u32,
        exhausted_bound: u64,
        lower_bound: BigInt,
    },
}

impl EtaOutcome {
    pub fn certificate(&self) -> Option<&EtaCertificate> {
        match self {
            EtaOutcome::Found(c) => Some(c),
            EtaOutcome::Unresolved { .. } => None,
        }
    }
}

/// Class bookkeeping for the admissibility test `([p1][p2]^-1)^l = 1`.
enum Classes {
    Imaginary(ImaginaryGroup),
    Real(FormCycles),
}

impl Classes {
    /// A key equal for two ideals iff their classes agree after raising to the l-th power.
    fn key(&self, ideal: &PrimeIdeal, ell: u32) -> QuadraticForm {
        match self {
            Classes::Imaginary(g) => g.pow(&ideal.small_form(g.d).reduce_imaginary(), ell as u64),
            Classes::Real(c) => {
                let narrow = c.narrow();
                let wide = c.wide();
                let x = narrow.pow(&c.class_of(&ideal.small_form(c.d)), ell as u64);
                c.reps[wide.canonical(x) as usize]
            }
        }
    }
}

/// The witness and its height for an admissible pair.
fn witness_for(
    d: i64,
    ell: u32,
    i1: &PrimeIdeal,
    i2: &PrimeIdeal,
    unit: Option<&FundamentalUnit>,
) -> Result<(QuadraticElement, Height)> {
    // (p1^l conj(p2)^l) = (beta), and alpha = beta / N(p2)^l
    let f = ideal::compose(&ideal::power(&i1.form(d), ell), &ideal::power(&i2.form(d).conjugate(), ell));
    let expected = BigInt::from(i1.p).pow(ell) * BigInt::from(i2.p).pow(ell);
    if f.a != expected {
        return Err(Error::Internal(format!("ideal product has norm {} not {expected}", f.a)));
    }
    let (x, y) = ideal::generator(&f)?
        .ok_or_else(|| Error::Internal(format!("D = {d}: admissible pair has no generator")))?;
    let z = BigInt::from(2) * BigInt::from(i2.p).pow(ell);
    let alpha = QuadraticElement::new(x, y, z, d)?;
    if d < 0 {
        let h = weil_height(&alpha)?;
        Ok((alpha, h))
    } else {
        let (h, _, beta) = unit_orbit_min_height(&alpha, unit.expect("real field needs a unit"))?;
        Ok((beta, h))
    }
}

/// Search all pairs with both norms at most `bound`.
fn search(
    d: i64,
    ell: u32,
    bound: u64,
    classes: &Classes,
    unit: Option<&FundamentalUnit>,
) -> Result<Option<(PrimeIdeal, PrimeIdeal, QuadraticElement, Height)>> {
    let ideals = split_prime_ideals(d, bound);
    let keys: Vec<QuadraticForm> = ideals.iter().map(|i| classes.key(i, ell)).collect();
    let mut by_key: HashMap<QuadraticForm, Vec<usize>> = HashMap::new();
    let mut best: Option<(PrimeIdeal, PrimeIdeal, QuadraticElement, Height)> = None;
    // ideals come in conjugate pairs sorted by norm; the one above the larger
    // prime is the denominator, so the height is at least its norm^l
    for (j, ideal2) in ideals.iter().enumerate() {
        let floor = Height::integer(BigInt::from(ideal2.p).pow(ell), d);
        if best.as_ref().is_some_and(|b| b.3 <= floor) {
            break;
        }
        let partners: Vec<usize> = by_key.get(&keys[j]).cloned().unwrap_or_default();
        // the conjugate of ideal2 may come right after it
        let conj_next = (j % 2 == 0 && keys[j + 1] == keys[j]).then_some(j + 1);
        for i in partners.into_iter().chain(conj_next) {
            let ideal1 = &ideals[i];
            let (alpha, h) = witness_for(d, ell, ideal1, ideal2, unit)?;
            if best.as_ref().is_none_or(|b| h < b.3) {
                best = Some((ideal1.clone(), ideal2.clone(), alpha, h));
            }
            if d < 0 {
                // every admissible pair at this norm has the same height
                return Ok(best);
            }
        }
        by_key.entry(keys[j]).or_default().push(j);
    }
    Ok(best)
}

/// Default first bound: the tenth split prime.
pub fn default_bound(d: FundamentalDiscriminant) -> u64 {
    let mut count = 0;
    let mut p = 2;
    loop {
        if crate::arith::is_prime(p) && kronecker(d.value(), p) == 1 {
            count += 1;
            if count == 10 {
                return p;
            }
        }
        p += 1;
    }
}

pub const DEFAULT_BOUND_CAP: u64 = 1 << 16;

/// eta_l(K) by pair search up to `search_bound`, or from the default bound
/// doubling up to `cap` when `search_bound` is `None`.
pub fn eta_exact_quadratic(
    d: FundamentalDiscriminant,
    ell: u32,
    search_bound: Option<u64>,
    cap: u64,
) -> Result<EtaOutcome> {
    if ell == 0 {
        return Err(Error::InvalidArgument("ell must be at least 1".into()));
    }
    let dv = d.value();
    let classes = if d.is_imaginary() {
        Classes::Imaginary(ImaginaryGroup { d: dv })
    } else {
        Classes::Real(FormCycles::new(d)?)
    };
    let unit = if d.is_imaginary() { None } else { Some(fundamental_unit(d)?) };
    let (mut bound, cap) = match search_bound {
        Some(b) if b < 2 => return Err(Error::InvalidArgument("search bound must be at least 2".into())),
        Some(b) => (b, b),
        None => (default_bound(d).min(cap), cap),
    };
    loop {
        let found = search(dv, ell, bound, &classes, unit.as_ref())?;
        let limit = Height::integer(BigInt::from(bound).pow(ell), dv);
        if let Some((i1, i2, witness, h)) = found {
            let exact = h <= limit;
            if exact || bound >= cap {
                let value = h.ceil();
                let value_exact = h.as_integer().is_none().then(|| h.to_string());
                return Ok(EtaOutcome::Found(EtaCertificate {
                    d: dv,
                    ell,
                    value,
                    value_exact,
                    p1: i1.p,
                    p2: i2.p,
                    ideal1: i1,
                    ideal2: i2,
                    witness,
                    exhausted_bound: bound,
                    exact,
                    height: h,
                }));
            }
        } else if bound >= cap {
            return Ok(EtaOutcome::Unresolved {
                d: dv,
                ell,
                exhausted_bound: bound,
                lower_bound: BigInt::from(bound).pow(ell),
            });
        }
        bound = (bound * 2).min(cap);
    }
}

/// Minimal polynomial of a certificate's witness, checked against the shape
/// `p2^l x^2 + a1 x +- p1^l`.
pub fn certificate_minpoly(cert: &EtaCertificate) -> Result<ZPoly> {
    let f = cert.witness.minimal_polynomial()?;
    let lead = BigInt::from(cert.p2).pow(cert.ell);
    let constant = BigInt::from(cert.p1).pow(cert.ell);
    if f.degree() != 2 || f.lc() != lead || f.coeff(0).abs() != constant || !f.content().is_one() {
        return Err(Error::Internal(format!("witness minimal polynomial {f} is not of the expected shape")));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd(d: i64) -> FundamentalDiscriminant {
        FundamentalDiscriminant::new(d).unwrap()
    }

    fn elt(x: i64, y: i64, z: i64, d: i64) -> QuadraticElement {
        QuadraticElement::from_i64(x, y, z, d).unwrap()
    }

    fn cert(d: i64, ell: u32, bound: Option<u64>) -> EtaCertificate {
        match eta_exact_quadratic(fd(d), ell, bound, DEFAULT_BOUND_CAP).unwrap() {
            EtaOutcome::Found(c) => c,
            other => panic!("unresolved: {other:?}"),
        }
    }

    #[test]
    fn height_examples() {
        // (3 + 4i)/5 = (3 + 2 sqrt(-4))/5
        assert_eq!(weil_height(&elt(3, 2, 5, -4)).unwrap().as_integer(), Some(5.into()));
        assert_eq!(weil_height(&elt(1, 0, 1, -4)).unwrap().as_integer(), Some(1.into()));
        assert_eq!(weil_height(&elt(2, 0, 1, -4)).unwrap().as_integer(), Some(4.into()));
        assert!(weil_height(&elt(0, 0, 1, -4)).is_err());
        // sqrt 5 has height 5
        assert_eq!(weil_height(&elt(0, 1, 1, 5)).unwrap().as_integer(), Some(5.into()));
    }

    #[test]
    fn real_height_is_exact() {
        // (1 + sqrt 5)/2: minpoly x^2 - x - 1, H = |phi| = (1 + sqrt 5)/2
        let h = weil_height(&elt(1, 1, 2, 5)).unwrap();
        assert_eq!(h.as_integer(), None);
        assert!((h.to_f64() - 1.618_033_988_7).abs() < 1e-9);
        assert_eq!(h.ceil(), 2.into());
    }

    #[test]
    fn unit_orbit_examples() {
        let u = fundamental_unit(fd(5)).unwrap();
        let (h, _, _) = unit_orbit_min_height(&elt(1, 1, 2, 5), &u).unwrap();
        assert_eq!(h.as_integer(), Some(1.into()));
        let (h, _, _) = unit_orbit_min_height(&elt(0, 1, 1, 5), &u).unwrap();
        assert_eq!(h.as_integer(), Some(5.into()));
        // a shifted element comes back down
        let start = elt(0, 1, 1, 5).mul(&unit_element(&u, 5).pow(7));
        let (h, m, _) = unit_orbit_min_height(&start, &u).unwrap();
        assert_eq!(h.as_integer(), Some(5.into()));
        assert!(h <= weil_height(&start).unwrap());
        assert!(m < 0);
    }

    #[test]
    fn eta_examples() {
        let c = cert(-4, 1, Some(50));
        assert_eq!(c.value, 5.into());
        assert_eq!((c.p1, c.p2), (5, 5));
        assert!(c.exact);
        assert_eq!(certificate_minpoly(&c).unwrap(), "5x^2 - 6x + 5".parse().unwrap());
        let c = cert(-4, 2, Some(50));
        assert_eq!(c.value, 25.into());
        // (3 + 4i)^2 / 25 up to a root of unity
        let m = certificate_minpoly(&c).unwrap();
        assert!(["25x^2 + 14x + 25", "25x^2 - 14x + 25", "25x^2 + 48x + 25", "25x^2 - 48x + 25"]
            .iter()
            .any(|s| m == s.parse().unwrap()));
        let c = cert(-23, 3, Some(50));
        assert_eq!(c.value, 8.into());
        assert_eq!((c.p1, c.p2), (2, 2));
        let m = certificate_minpoly(&c).unwrap();
        assert!(m == "8x^2 + 7x + 8".parse().unwrap() || m == "8x^2 - 7x + 8".parse().unwrap());
    }

    #[test]
    fn default_bound_certifies() {
        let c = cert(-4, 1, None);
        assert_eq!(c.value, 5.into());
        assert!(c.exact);
        assert_eq!(default_bound(fd(-4)), 89);
    }

    #[test]
    fn unresolved_below_first_split_prime() {
        // the smallest split prime of Q(sqrt -3) is 7
        let out = eta_exact_quadratic(fd(-3), 1, Some(6), 6).unwrap();
        assert!(matches!(out, EtaOutcome::Unresolved { lower_bound, .. } if lower_bound == 6.into()));
    }

    #[test]
    fn real_fields_have_certificates() {
        for d in [5, 8, 12, 13, 40, 229] {
            let c = cert(d, 1, None);
            let f = certificate_minpoly(&c).unwrap();
            assert_eq!(f.degree(), 2);
            // H >= max norm^l
            let floor = BigInt::from(c.p1.max(c.p2));
            assert!(c.height >= Height::integer(floor, d), "D={d}");
            assert!(c.height == weil_height(&c.witness).unwrap());
        }
    }
}
