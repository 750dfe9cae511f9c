//! Least-squares exponential-rate fitting used by the decay monitors and
//! the verification suites.

/// Least-squares slope of `ln v` against `t` for strictly positive
/// samples, returned as a decay rate (`v ~ C e^{-rate t}` gives a positive
/// rate). Needs at least two usable samples.
pub fn log_linear_rate(samples: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|&&(_, v)| v > 0.0 && v.is_finite())
        .map(|&(t, v)| (t, v.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let tm = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let ym = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - tm) * (p.1 - ym)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - tm).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(-(sxy / sxx))
}

/// Decay rate of `|v(t)|`, ignoring samples below `floor_frac` of the peak
/// magnitude (where log-fitting would chase rounding noise).
pub fn decay_rate(ts: &[f64], vs: &[f64], floor_frac: f64) -> Option<f64> {
    let peak = vs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if peak == 0.0 {
        return None;
    }
    let floor = peak * floor_frac;
    let pts: Vec<(f64, f64)> = ts
        .iter()
        .zip(vs)
        .filter(|&(_, v)| v.abs() > floor)
        .map(|(&t, &v)| (t, v.abs()))
        .collect();
    log_linear_rate(&pts)
}

/// Envelope decay rate of an oscillatory signal: locate the local maxima
/// of `|v|`, refine each with a quadratic through its neighbors, and fit
/// `ln(peak)` against the peak times. Needs at least three peaks.
pub fn peak_envelope_rate(ts: &[f64], vs: &[f64]) -> Option<f64> {
    let n = vs.len();
    if n < 3 {
        return None;
    }
    let mut peaks: Vec<(f64, f64)> = Vec::new();
    for i in 1..n - 1 {
        let (a, b, c) = (vs[i - 1].abs(), vs[i].abs(), vs[i + 1].abs());
        if b >= a && b > c && b > 0.0 {
            // quadratic refinement around the sample peak
            let denom = a - 2.0 * b + c;
            let (tp, vp) = if denom.abs() > 1e-300 {
                let delta = 0.5 * (a - c) / denom;
                let dt = ts[i + 1] - ts[i];
                (ts[i] + delta * dt, b - 0.25 * (a - c) * delta)
            } else {
                (ts[i], b)
            };
            peaks.push((tp, vp));
        }
    }
    if peaks.len() < 3 {
        return None;
    }
    log_linear_rate(&peaks)
}

/// Slowest decay rate among the roots of `s^2 + kappa2 s + kappa1`:
/// `kappa2 / 2` for a complex pair, otherwise the smaller-magnitude real
/// root. Both gains are assumed positive (stable polynomial).
pub fn dominant_rate_quadratic(kappa2: f64, kappa1: f64) -> f64 {
    let disc = kappa2 * kappa2 - 4.0 * kappa1;
    if disc < 0.0 {
        kappa2 / 2.0
    } else {
        (kappa2 - disc.sqrt()) / 2.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_pure_exponential() {
        let ts: Vec<f64> = (0..200).map(|i| i as f64 * 0.1).collect();
        let vs: Vec<f64> = ts.iter().map(|t| 3.0 * (-0.37 * t).exp()).collect();
        let rate = decay_rate(&ts, &vs, 1e-12).unwrap();
        assert!((rate - 0.37).abs() < 1e-9);
    }

    #[test]
    fn envelope_of_damped_oscillation() {
        let ts: Vec<f64> = (0..20000).map(|i| i as f64 * 0.05).collect();
        let vs: Vec<f64> = ts
            .iter()
            .map(|t| 2.0 * (-0.01 * t).exp() * (0.9 * t).cos())
            .collect();
        let rate = peak_envelope_rate(&ts, &vs).unwrap();
        assert!(
            (rate - 0.01).abs() < 0.0005,
            "envelope rate {rate} should be near 0.01"
        );
    }

    #[test]
    fn quadratic_dominant_rates() {
        // complex pair: rate kappa2/2
        assert!((dominant_rate_quadratic(0.001, 0.02) - 0.0005).abs() < 1e-15);
        // real roots of s^2 + 3s + 2: -1 and -2, dominant rate 1
        assert!((dominant_rate_quadratic(3.0, 2.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_inputs_give_none() {
        assert_eq!(decay_rate(&[0.0, 1.0], &[0.0, 0.0], 1e-9), None);
        assert_eq!(peak_envelope_rate(&[0.0, 1.0], &[1.0, 0.5]), None);
        assert_eq!(log_linear_rate(&[(0.0, 1.0)]), None);
    }
}
