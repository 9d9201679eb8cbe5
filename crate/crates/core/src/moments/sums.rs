//! Moments `sum #Cl_K[l]^k` over cumulative and dyadic windows.

use super::{FamilyScan, FieldRecord};
use crate::error::{Error, Result};
use crate::exponents::{to_f64, Q};
use crate::fit::loglog_slope;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `D_K <= X`.
    Cumulative,
    /// `X <= D_K < 2X`.
    Dyadic,
}

impl Mode {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "cumulative" => Ok(Mode::Cumulative),
            "dyadic" => Ok(Mode::Dyadic),
            _ => Err(Error::Parse(format!("unknown mode {s}"))),
        }
    }

    /// Inclusive range of `D_K`.
    pub fn range(self, x: u64) -> (u64, u64) {
        match self {
            Mode::Cumulative => (1, x),
            Mode::Dyadic => (x, 2 * x - 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MomentValue {
    Exact(BigInt),
    /// Floating-point sum for non-integer `k`, with a bound on its relative error.
    Approx { value: f64, rel_error: f64 },
}

impl MomentValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            MomentValue::Exact(n) => n.to_f64().unwrap_or(f64::INFINITY),
            MomentValue::Approx { value, .. } => *value,
        }
    }

    pub fn exact(&self) -> Option<&BigInt> {
        match self {
            MomentValue::Exact(n) => Some(n),
            MomentValue::Approx { .. } => None,
        }
    }
}

impl std::fmt::Display for MomentValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MomentValue::Exact(n) => write!(f, "{n}"),
            MomentValue::Approx { value, .. } => write!(f, "{value:.17e}"),
        }
    }
}

impl Serialize for MomentValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            MomentValue::Exact(n) => {
                let mut st = s.serialize_struct("Fraction", 2)?;
                st.serialize_field("num", &n.to_string())?;
                st.serialize_field("den", "1")?;
                st.end()
            }
            MomentValue::Approx { value, rel_error } => {
                let mut st = s.serialize_struct("Approx", 2)?;
                st.serialize_field("value", value)?;
                st.serialize_field("rel_error", rel_error)?;
                st.end()
            }
        }
    }
}

fn power_sum(records: &[FieldRecord], ell: u64, k: &Q) -> Result<MomentValue> {
    if k < &Q::zero() {
        return Err(Error::InvalidArgument("k must be nonnegative".into()));
    }
    if k.is_integer() {
        let e = k.to_integer().to_u32().ok_or(Error::Overflow("moment exponent"))?;
        let mut sum = BigInt::zero();
        for r in records {
            sum += BigInt::from(r.torsion(ell)).pow(e);
        }
        return Ok(MomentValue::Exact(sum));
    }
    // Neumaier summation of positive terms; powf is within an ulp or two
    let kf = to_f64(k);
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for r in records {
        let t = (r.torsion(ell) as f64).powf(kf);
        let s = sum + t;
        comp += if sum.abs() >= t.abs() { (sum - s) + t } else { (t - s) + sum };
        sum = s;
    }
    Ok(MomentValue::Approx { value: sum + comp, rel_error: 8.0 * f64::EPSILON })
}

/// `sum #Cl_K[l]^k` over the window of `mode` at `x`. `l = 0` gives the whole
/// class group, so `k = 1` sums class numbers.
pub fn moment_sum(scan: &FamilyScan, ell: u64, k: &Q, mode: Mode, x: u64) -> Result<MomentValue> {
    let (lo, hi) = mode.range(x);
    scan.check_covers(hi)?;
    power_sum(scan.window(lo, hi), ell, k)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentPoint {
    #[serde(rename = "X")]
    pub x: u64,
    pub sum: MomentValue,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentSeries {
    pub family: String,
    pub ell: u64,
    pub k: String,
    pub mode: Mode,
    pub points: Vec<MomentPoint>,
}

pub fn moment_series(scan: &FamilyScan, ell: u64, k: &Q, mode: Mode, ladder: &[u64]) -> Result<MomentSeries> {
    let points = ladder
        .iter()
        .map(|&x| Ok(MomentPoint { x, sum: moment_sum(scan, ell, k, mode, x)? }))
        .collect::<Result<_>>()?;
    Ok(MomentSeries { family: scan.sign.label().to_string(), ell, k: k.to_string(), mode, points })
}

/// Log-log least-squares slope over the points with `lo <= X <= hi`.
pub fn slope_fit(series: &MomentSeries, lo: u64, hi: u64) -> Result<f64> {
    let pts: Vec<(f64, f64)> = series
        .points
        .iter()
        .filter(|p| (lo..=hi).contains(&p.x))
        .map(|p| (p.x as f64, p.sum.to_f64()))
        .collect();
    loglog_slope(&pts)
}

impl MomentSeries {
    pub fn is_monotone(&self) -> bool {
        self.points.windows(2).all(|w| w[0].sum.to_f64() <= w[1].sum.to_f64())
    }
}

/// Number of fields in the window (the zeroth moment).
pub fn field_count(scan: &FamilyScan, mode: Mode, x: u64) -> Result<u64> {
    let v = moment_sum(scan, 1, &Q::zero(), mode, x)?;
    Ok(v.exact().and_then(|n| n.to_u64()).unwrap_or_default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Sign;
    use crate::exponents::q;
    use crate::moments::{scan_family, ScanOptions};

    fn imag(x: u64) -> FamilyScan {
        scan_family(Sign::Imaginary, x, &ScanOptions::default()).unwrap()
    }

    #[test]
    fn class_number_sum() {
        let s = imag(20);
        assert_eq!(moment_sum(&s, 0, &q(1, 1), Mode::Cumulative, 20).unwrap(), MomentValue::Exact(10.into()));
        assert_eq!(moment_sum(&s, 1, &q(1, 1), Mode::Cumulative, 20).unwrap(), MomentValue::Exact(8.into()));
        assert_eq!(field_count(&s, Mode::Cumulative, 20).unwrap(), 8);
        assert!(matches!(moment_sum(&s, 1, &q(1, 1), Mode::Dyadic, 11), Err(Error::Coverage(_))));
    }

    #[test]
    fn dyadic_windows_partition() {
        let s = imag(4095);
        for (ell, k) in [(3, q(1, 1)), (2, q(2, 1)), (5, q(0, 1))] {
            let mut total = BigInt::zero();
            for j in 0..12 {
                total += moment_sum(&s, ell, &k, Mode::Dyadic, 1 << j).unwrap().exact().unwrap().clone();
            }
            let cum = moment_sum(&s, ell, &k, Mode::Cumulative, 4095).unwrap();
            assert_eq!(cum.exact().unwrap(), &total);
        }
    }

    #[test]
    fn fractional_k() {
        let s = imag(2000);
        let a = moment_sum(&s, 3, &q(1, 2), Mode::Cumulative, 2000).unwrap();
        let MomentValue::Approx { value, .. } = a else { panic!() };
        let direct: f64 = s.window(1, 2000).iter().map(|r| (r.torsion(3) as f64).sqrt()).sum();
        assert!((value - direct).abs() < 1e-9 * direct);
    }

    #[test]
    fn series_and_slope() {
        let s = imag(8000);
        let ser = moment_series(&s, 1, &q(0, 1), Mode::Cumulative, &[1000, 2000, 4000, 8000]).unwrap();
        assert!(ser.is_monotone());
        // the number of fields grows linearly
        let slope = slope_fit(&ser, 1000, 8000).unwrap();
        assert!((slope - 1.0).abs() < 0.05, "{slope}");
        assert!(slope_fit(&ser, 4000, 8000).is_err());
    }
}
