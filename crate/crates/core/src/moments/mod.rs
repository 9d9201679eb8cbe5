//! Families of quadratic fields and sums of their class-group torsion.

mod cache;
pub mod decompose;
pub mod klueners;
pub mod sums;

pub use cache::{default_cache_dir, BLOCK};
pub use decompose::{decompose_window, DecompositionReport, PartStats};
pub use klueners::{klueners_bound_sum, klueners_from_records, DihedralBoundResult, KluenersVariant};
pub use sums::{moment_series, moment_sum, slope_fit, Mode, MomentPoint, MomentSeries, MomentValue};

use crate::arith::{is_fundamental, FundamentalDiscriminant, Sign};
use crate::classgroup::{fundamental_unit, imaginary_class_numbers, imaginary_divisors_with_order, real_class_data};
use crate::error::{Error, Result};
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;
use std::path::PathBuf;

/// Class-group data of one quadratic field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldRecord {
    #[serde(rename = "D")]
    pub d: i64,
    pub h: u64,
    /// Invariant factors of the (wide) class group.
    pub divisors: Vec<u64>,
    /// Norm of the fundamental unit, for real fields.
    pub unit_norm: Option<i8>,
}

impl FieldRecord {
    pub fn abs_disc(&self) -> u64 {
        self.d.unsigned_abs()
    }

    /// `#Cl[l] = prod gcd(l, d_i)`; `l = 0` gives `h`.
    pub fn torsion(&self, ell: u64) -> u64 {
        self.divisors.iter().map(|d| d.gcd(&ell)).product()
    }

    pub fn p_rank(&self, p: u64) -> u32 {
        self.divisors.iter().filter(|d| *d % p == 0).count() as u32
    }

    pub fn discriminant(&self) -> FundamentalDiscriminant {
        FundamentalDiscriminant::new(self.d).expect("records hold fundamental discriminants")
    }
}

#[derive(Debug, Clone, Default)]
pub struct ScanOptions {
    /// Directory of per-block CSV files; `None` computes everything in memory.
    pub cache: Option<PathBuf>,
}

/// All fields of a family with `D_K <= x_max`, ordered by `D_K`, negative `D` first on ties.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyScan {
    pub sign: Sign,
    pub x_max: u64,
    pub records: Vec<FieldRecord>,
}

impl FamilyScan {
    /// Records with `lo <= D_K <= hi`.
    pub fn window(&self, lo: u64, hi: u64) -> &[FieldRecord] {
        let a = self.records.partition_point(|r| r.abs_disc() < lo);
        let b = self.records.partition_point(|r| r.abs_disc() <= hi);
        &self.records[a..b.max(a)]
    }

    pub fn check_covers(&self, hi: u64) -> Result<()> {
        if hi > self.x_max {
            return Err(Error::Coverage(format!("needs D_K up to {hi}, scan stops at {}", self.x_max)));
        }
        Ok(())
    }
}

/// Records for one sign with `lo <= |D| <= hi`, in increasing `|D|`.
pub(crate) fn compute_block(imaginary: bool, lo: u64, hi: u64) -> Result<Vec<FieldRecord>> {
    let lo = lo.max(3);
    if lo > hi {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    if imaginary {
        let counts = imaginary_class_numbers(lo, hi);
        for n in lo..=hi {
            let d = -(n as i64);
            if !is_fundamental(d) {
                continue;
            }
            let h = counts[(n - lo) as usize] as u64;
            let divisors = imaginary_divisors_with_order(FundamentalDiscriminant::new(d)?, h)?;
            out.push(FieldRecord { d, h, divisors, unit_norm: None });
        }
    } else {
        for n in lo..=hi {
            let d = n as i64;
            if !is_fundamental(d) {
                continue;
            }
            let fd = FundamentalDiscriminant::new(d)?;
            let data = real_class_data(fd)?;
            let unit = fundamental_unit(fd)?;
            out.push(FieldRecord { d, h: data.h, divisors: data.wide_divisors, unit_norm: Some(unit.norm) });
        }
    }
    Ok(out)
}

/// One record per fundamental discriminant of the family with `|D| <= x_max`.
/// Real fields carry the ordinary class group.
pub fn scan_family(sign: Sign, x_max: u64, opts: &ScanOptions) -> Result<FamilyScan> {
    if x_max < 3 {
        return Err(Error::InvalidArgument("X_max must be at least 3".into()));
    }
    let mut jobs = Vec::new();
    for imaginary in [true, false] {
        if (imaginary && sign == Sign::Real) || (!imaginary && sign == Sign::Imaginary) {
            continue;
        }
        for k in 0..=x_max / BLOCK {
            jobs.push((imaginary, k));
        }
    }
    let blocks: Vec<Vec<FieldRecord>> = jobs
        .par_iter()
        .map(|&(imaginary, k)| match &opts.cache {
            Some(dir) => cache::load_or_build(dir, imaginary, k),
            None => compute_block(imaginary, k * BLOCK, ((k + 1) * BLOCK - 1).min(x_max)),
        })
        .collect::<Result<_>>()?;
    let mut records: Vec<FieldRecord> = blocks.into_iter().flatten().filter(|r| r.abs_disc() <= x_max).collect();
    records.sort_by_key(|r| (r.abs_disc(), r.d > 0));
    Ok(FamilyScan { sign, x_max, records })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_imaginary_family() {
        let s = scan_family(Sign::Imaginary, 20, &ScanOptions::default()).unwrap();
        let ds: Vec<i64> = s.records.iter().map(|r| r.d).collect();
        assert_eq!(ds, vec![-3, -4, -7, -8, -11, -15, -19, -20]);
        assert_eq!(s.records.iter().map(|r| r.h).sum::<u64>(), 10);
        let s = scan_family(Sign::Imaginary, 23, &ScanOptions::default()).unwrap();
        assert_eq!(s.records.last().unwrap().torsion(3), 3);
    }

    #[test]
    fn small_real_family() {
        let s = scan_family(Sign::Real, 12, &ScanOptions::default()).unwrap();
        let ds: Vec<(i64, u64)> = s.records.iter().map(|r| (r.d, r.h)).collect();
        assert_eq!(ds, vec![(5, 1), (8, 1), (12, 1)]);
        assert_eq!(s.records[0].unit_norm, Some(-1));
        assert_eq!(s.records[2].unit_norm, Some(1));
    }

    #[test]
    fn both_signs_interleave() {
        let s = scan_family(Sign::Both, 13, &ScanOptions::default()).unwrap();
        let ds: Vec<i64> = s.records.iter().map(|r| r.d).collect();
        assert_eq!(ds, vec![-3, -4, 5, -7, -8, 8, -11, 12, 13]);
        assert_eq!(s.window(8, 11).len(), 3);
    }
}
