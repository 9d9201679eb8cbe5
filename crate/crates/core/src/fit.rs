//! Least-squares growth exponents.

use crate::error::{Error, Result};

/// Ordinary least-squares slope of `log y` against `log x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 3 {
        return Err(Error::InvalidArgument(format!("slope fit needs at least 3 points, got {}", points.len())));
    }
    if points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(Error::InvalidArgument("slope fit needs positive coordinates".into()));
    }
    let n = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|&(x, y)| (x.ln(), y.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("slope fit needs distinct x values".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(sxy / sxx)
}

/// `lo, lo*factor, ...` up to `hi`, with `hi` appended when the steps miss it.
pub fn geometric_ladder(lo: u64, hi: u64, factor: f64) -> Result<Vec<u64>> {
    if lo == 0 || hi < lo || factor <= 1.0 {
        return Err(Error::InvalidArgument(format!("bad ladder {lo}:{hi}:x{factor}")));
    }
    let mut out = vec![lo];
    let mut x = lo as f64;
    loop {
        x *= factor;
        let v = x.round() as u64;
        if v >= hi {
            break;
        }
        if v > *out.last().unwrap() {
            out.push(v);
        }
    }
    if *out.last().unwrap() != hi {
        out.push(hi);
    }
    Ok(out)
}
