//! Real quadratic fields: reduction cycles, narrow and wide class groups,
//! fundamental units.

use super::form::{compose_unreduced, reduced_forms_real, QuadraticForm};
use super::group::FiniteAbelianGroup;
use crate::arith::{isqrt, FundamentalDiscriminant};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// Reduced indefinite forms of one discriminant, partitioned into rho-cycles.
/// Each cycle is one narrow class.
#[derive(Debug, Clone)]
pub struct FormCycles {
    pub d: i64,
    forms: Vec<QuadraticForm>,
    cycle_of: Vec<u32>,
    /// Smallest form of each cycle.
    pub reps: Vec<QuadraticForm>,
    pub cycle_lengths: Vec<usize>,
}

impl FormCycles {
    pub fn new(d: FundamentalDiscriminant) -> Result<Self> {
        let forms = reduced_forms_real(d)?;
        let dv = d.value();
        let mut cycle_of = vec![u32::MAX; forms.len()];
        let mut reps = Vec::new();
        let mut cycle_lengths = Vec::new();
        for start in 0..forms.len() {
            if cycle_of[start] != u32::MAX {
                continue;
            }
            let id = reps.len() as u32;
            let mut rep = forms[start];
            let mut f = forms[start];
            let mut len = 0;
            loop {
                let i = forms
                    .binary_search(&f)
                    .map_err(|_| Error::Internal(format!("rho left the reduced set at {f}")))?;
                if cycle_of[i] == id {
                    break;
                }
                cycle_of[i] = id;
                rep = rep.min(f);
                len += 1;
                f = f.rho(dv);
            }
            reps.push(rep);
            cycle_lengths.push(len);
        }
        Ok(FormCycles { d: dv, forms, cycle_of, reps, cycle_lengths })
    }

    /// Narrow class number h+.
    pub fn narrow_class_number(&self) -> u64 {
        self.reps.len() as u64
    }

    /// Cycle id of any form of this discriminant.
    pub fn class_of(&self, f: &QuadraticForm) -> u32 {
        let r = f.reduce_real(self.d);
        let i = self.forms.binary_search(&r).expect("reduced form missing from cycle table");
        self.cycle_of[i]
    }

    pub fn principal(&self) -> u32 {
        self.class_of(&QuadraticForm::principal(self.d))
    }

    /// Narrow class of the principal ideal (sqrt D): the negated principal form.
    pub fn minus_one_class(&self) -> u32 {
        let sigma = self.d.rem_euclid(2);
        self.class_of(&QuadraticForm::new(-1, sigma, (self.d - sigma) / 4))
    }

    pub fn narrow(&self) -> NarrowGroup<'_> {
        NarrowGroup { cycles: self }
    }

    pub fn wide(&self) -> WideGroup<'_> {
        WideGroup { cycles: self, j: self.minus_one_class() }
    }
}

pub struct NarrowGroup<'a> {
    pub cycles: &'a FormCycles,
}

impl FiniteAbelianGroup for NarrowGroup<'_> {
    type Elem = u32;
    fn identity(&self) -> u32 {
        self.cycles.principal()
    }
    fn op(&self, x: &u32, y: &u32) -> u32 {
        let c = self.cycles;
        c.class_of(&compose_unreduced(&c.reps[*x as usize], &c.reps[*y as usize]))
    }
}

/// The ordinary class group as the quotient of the narrow group by the class of (sqrt D).
pub struct WideGroup<'a> {
    pub cycles: &'a FormCycles,
    pub j: u32,
}

impl WideGroup<'_> {
    pub fn canonical(&self, x: u32) -> u32 {
        x.min(self.cycles.narrow().op(&x, &self.j))
    }

    /// Narrow class and its image are identified iff (sqrt D) is narrowly principal.
    pub fn is_trivial_kernel(&self) -> bool {
        self.j == self.cycles.principal()
    }

    pub fn order(&self) -> u64 {
        let h = self.cycles.narrow_class_number();
        if self.is_trivial_kernel() {
            h
        } else {
            h / 2
        }
    }

    pub fn elements(&self) -> Vec<u32> {
        let mut v: Vec<u32> = (0..self.cycles.reps.len() as u32).map(|x| self.canonical(x)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

impl FiniteAbelianGroup for WideGroup<'_> {
    type Elem = u32;
    fn identity(&self) -> u32 {
        self.canonical(self.cycles.principal())
    }
    fn op(&self, x: &u32, y: &u32) -> u32 {
        self.canonical(self.cycles.narrow().op(x, y))
    }
}

/// `eps = (x + y sqrt D)/2 > 1`, the generator of the unit group modulo +-1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FundamentalUnit {
    pub x: BigInt,
    pub y: BigInt,
    pub norm: i8,
}

/// Fundamental unit from the period of the continued fraction of `(sigma + sqrt D)/2`.
pub fn fundamental_unit(d: FundamentalDiscriminant) -> Result<FundamentalUnit> {
    if d.is_imaginary() {
        return Err(Error::InvalidArgument(format!(
            "D = {d} < 0: imaginary quadratic fields have no fundamental unit"
        )));
    }
    let dv = d.value() as i128;
    let sigma = d.sigma() as i128;
    let s = isqrt(d.value() as u64) as i128;
    // complete quotients x_i = (P + sqrt D)/Q
    let a0 = (sigma + s).div_euclid(2);
    let (mut p, mut q) = (a0 * 2 - sigma, (dv - (a0 * 2 - sigma).pow(2)) / 2);
    let first = (p, q);
    let (mut h_prev, mut h) = (BigInt::one(), BigInt::from(a0));
    let (mut k_prev, mut k) = (BigInt::zero(), BigInt::one());
    let mut period = 0u64;
    loop {
        // here (p, q) is x_{period+1} and h/k the convergent of index `period`
        let a = (p + s).div_euclid(q);
        p = a * q - p;
        q = (dv - p * p) / q;
        period += 1;
        if (p, q) == first {
            break;
        }
        let nh = BigInt::from(a) * &h + &h_prev;
        let nk = BigInt::from(a) * &k + &k_prev;
        h_prev = std::mem::replace(&mut h, nh);
        k_prev = std::mem::replace(&mut k, nk);
    }
    // h/k = p_{r-1}/q_{r-1}; eps = (h - k sigma) + k w
    let x = BigInt::from(2) * &h - &k * BigInt::from(sigma);
    let y = k;
    let four_norm = &x * &x - BigInt::from(dv) * &y * &y;
    let norm: i8 = if four_norm == BigInt::from(4) {
        1
    } else if four_norm == BigInt::from(-4) {
        -1
    } else {
        return Err(Error::Internal(format!("unit equation failed for D = {d}")));
    };
    let expected = if period.is_multiple_of(2) { 1 } else { -1 };
    if norm != expected {
        return Err(Error::Internal(format!("unit norm disagrees with period parity for D = {d}")));
    }
    Ok(FundamentalUnit { x, y, norm })
}
