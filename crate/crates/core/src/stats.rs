//! Small numeric helpers shared by the metric layer.
//!
//! Every reduction over a multiset of values goes through [`canonical_sum`],
//! which sorts before adding. Results therefore do not depend on sample
//! order or on how a parallel schedule interleaved the work, which is what
//! makes reports bit-reproducible under shuffles.

/// Sum of `values` taken in ascending order.
pub fn canonical_sum(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.iter().sum()
}

pub fn mean(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        None
    } else {
        Some(canonical_sum(values) / values.len() as f64)
    }
}

/// Population standard deviation. Zero for a single value, `None` for none.
/// Equal values give exactly zero; rounding in the mean would otherwise
/// leave a residue whose reciprocal explodes.
pub fn population_std(values: &[f64]) -> Option<f64> {
    let mu = mean(values)?;
    if values.iter().all(|&x| x == values[0]) {
        return Some(0.0);
    }
    let squares: Vec<f64> = values.iter().map(|x| (x - mu) * (x - mu)).collect();
    Some((canonical_sum(&squares) / values.len() as f64).sqrt())
}

/// Signum with `sign(0) = 0`.
pub fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `(|x| - x) / 2`, the absolute-value form of `max(0, -x)`.
pub fn negative_part(x: f64) -> f64 {
    (x.abs() - x) / 2.0
}

/// `sign((s - a)(b - s))`: 1 strictly inside `(a, b)`, 0 on a bound, -1 outside.
pub fn band_indicator(s: f64, a: f64, b: f64) -> f64 {
    sign((s - a) * (b - s))
}

/// Linear-interpolation quantile of `values` at `q` in `[0, 1]`.
pub fn quantile(values: &[f64], q: f64) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    Some(sorted[lo] + (sorted[hi] - sorted[lo]) * frac)
}
