//! Class groups of quadratic fields through binary quadratic forms.

mod form;
pub mod group;
mod real;
mod sieve;

pub use form::{
    compose, compose_unreduced, reduced_forms, reduced_forms_real, QuadraticForm,
    MAX_ABS_DISCRIMINANT,
};
pub use group::FiniteAbelianGroup;
pub use real::{fundamental_unit, FormCycles, FundamentalUnit, NarrowGroup, WideGroup};
pub use sieve::{imaginary_class_numbers, imaginary_divisors_with_order};

use crate::arith::{sieve_primes, FundamentalDiscriminant};
use crate::error::{Error, Result};
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

/// Form class group of a negative discriminant; elements are reduced forms.
#[derive(Debug, Clone, Copy)]
pub struct ImaginaryGroup {
    pub d: i64,
}

impl FiniteAbelianGroup for ImaginaryGroup {
    type Elem = QuadraticForm;
    fn identity(&self) -> QuadraticForm {
        QuadraticForm::principal(self.d)
    }
    fn op(&self, x: &QuadraticForm, y: &QuadraticForm) -> QuadraticForm {
        compose_unreduced(x, y).reduce_imaginary()
    }
}

impl ImaginaryGroup {
    /// Reduced prime forms for the split or ramified p <= sqrt(|D|/3), in
    /// increasing order of p; together they generate the group.
    pub fn prime_forms(&self) -> impl Iterator<Item = QuadraticForm> + '_ {
        let bound = crate::arith::isqrt(self.d.unsigned_abs() / 3);
        small_primes()
            .iter()
            .copied()
            .take_while(move |&p| p <= bound)
            .filter_map(|p| QuadraticForm::prime_form(self.d, p))
            .map(|f| f.reduce_imaginary())
    }

    pub fn prime_form_generators(&self) -> Vec<QuadraticForm> {
        self.prime_forms().collect()
    }
}

/// Primes up to sqrt(2^40 / 3), enough for every supported discriminant.
fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| sieve_primes(crate::arith::isqrt(MAX_ABS_DISCRIMINANT / 3) + 1))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassGroupStructure {
    pub discriminant: FundamentalDiscriminant,
    /// Invariant factors `d_1 | d_2 | ...`, all at least 2.
    pub elementary_divisors: Vec<u64>,
    /// One generator per invariant factor, of exactly that order.
    pub generators: Vec<QuadraticForm>,
    /// For real fields: whether this is the narrow group.
    pub narrow: bool,
}

impl ClassGroupStructure {
    pub fn order(&self) -> u64 {
        self.elementary_divisors.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.elementary_divisors.last().copied().unwrap_or(1)
    }
}

/// `#Cl[l] = prod gcd(l, d_i)`.
pub fn torsion_count(divisors: &[u64], ell: u64) -> u64 {
    divisors.iter().map(|d| d.gcd(&ell)).product()
}

/// Number of invariant factors divisible by `p`.
pub fn p_rank(divisors: &[u64], p: u64) -> u32 {
    divisors.iter().filter(|d| *d % p == 0).count() as u32
}

fn check_chain(divs: &[u64]) -> Result<()> {
    if divs.iter().any(|&d| d < 2) || divs.windows(2).any(|w| w[1] % w[0] != 0) {
        return Err(Error::Internal(format!("bad invariant factors {divs:?}")));
    }
    Ok(())
}

/// Structure of the class group: ordinary (wide) for `narrow = false`,
/// narrow for real fields with `narrow = true`. Imaginary fields ignore `narrow`.
pub fn class_group_structure(
    d: FundamentalDiscriminant,
    narrow: bool,
) -> Result<ClassGroupStructure> {
    let dv = d.value();
    form::check_range(dv)?;
    let (elementary_divisors, generators, narrow) = if d.is_imaginary() {
        let g = ImaginaryGroup { d: dv };
        let gens = g.prime_form_generators();
        // the order comes from the closure, independently of reduced-form counting
        let order = group::closure(&g, gens.iter().copied(), None).len() as u64;
        let s = group::structure_from_generators(&g, order, &gens)?;
        let (gens, divs): (Vec<_>, Vec<_>) = s.into_iter().unzip();
        (divs, gens, false)
    } else {
        let cycles = FormCycles::new(d)?;
        let all: Vec<u32> = (0..cycles.reps.len() as u32).collect();
        let s = if narrow {
            let g = cycles.narrow();
            group::structure_from_generators(&g, cycles.narrow_class_number(), &all)?
        } else {
            let g = cycles.wide();
            group::structure_from_generators(&g, g.order(), &g.elements())?
        };
        let (ids, divs): (Vec<u32>, Vec<u64>) = s.into_iter().unzip();
        let gens = ids.into_iter().map(|i| cycles.reps[i as usize]).collect();
        (divs, gens, narrow)
    };
    check_chain(&elementary_divisors)?;
    Ok(ClassGroupStructure { discriminant: d, elementary_divisors, generators, narrow })
}

/// Class number and narrow data of a real field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealClassData {
    pub h_narrow: u64,
    pub h: u64,
    pub wide_divisors: Vec<u64>,
    pub narrow_divisors: Vec<u64>,
}

pub fn real_class_data(d: FundamentalDiscriminant) -> Result<RealClassData> {
    let cycles = FormCycles::new(d)?;
    let all: Vec<u32> = (0..cycles.reps.len() as u32).collect();
    let narrow = cycles.narrow();
    let nd: Vec<u64> = group::structure_from_generators(&narrow, cycles.narrow_class_number(), &all)?
        .into_iter()
        .map(|(_, n)| n)
        .collect();
    let wide = cycles.wide();
    let wd: Vec<u64> = group::structure_from_generators(&wide, wide.order(), &wide.elements())?
        .into_iter()
        .map(|(_, n)| n)
        .collect();
    check_chain(&nd)?;
    check_chain(&wd)?;
    Ok(RealClassData {
        h_narrow: cycles.narrow_class_number(),
        h: wide.order(),
        wide_divisors: wd,
        narrow_divisors: nd,
    })
}
