//! Globally adaptive 7-15 point Gauss–Kronrod quadrature.
#![allow(clippy::excessive_precision)]

use crate::{Error, Result};

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5) and the center.
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

fn gk15<F>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let s = f(center - dx)? + f(center + dx)?;
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    Ok((kronrod * half, ((kronrod - gauss) * half).abs()))
}

/// Integrates `f` over `[a, b]` until the summed error estimate is below
/// `max(abs_tol, rel_tol·|I|)`. The integrand may fail (e.g. a pole); the
/// error is propagated.
pub fn integrate<F>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64, max_intervals: usize) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (v, e) = gk15(&mut f, a, b)?;
    let mut intervals = vec![(a, b, v, e)];
    let mut evaluations = 15;
    loop {
        let value: f64 = intervals.iter().map(|i| i.2).sum();
        let error: f64 = intervals.iter().map(|i| i.3).sum();
        if !value.is_finite() {
            return Err(Error::Quadrature(format!("non-finite integral on [{a}, {b}]")));
        }
        if error <= abs_tol.max(rel_tol * value.abs()) {
            return Ok(QuadResult { value, error, evaluations });
        }
        if intervals.len() >= max_intervals {
            return Err(Error::Quadrature(format!(
                "error estimate {error:e} above tolerance after {max_intervals} subintervals on [{a}, {b}]"
            )));
        }
        let (worst, _) = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("nonempty");
        let (lo, hi, _, _) = intervals.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Err(Error::Quadrature(format!("interval [{lo}, {hi}] cannot be bisected further")));
        }
        let (v1, e1) = gk15(&mut f, lo, mid)?;
        let (v2, e2) = gk15(&mut f, mid, hi)?;
        evaluations += 30;
        intervals.push((lo, mid, v1, e1));
        intervals.push((mid, hi, v2, e2));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let r = integrate(|x| Ok(x.powi(7) - 3.0 * x * x + 1.0), -1.0, 2.0, 1e-11, 0.0, 10).unwrap();
        let exact = (2f64.powi(8) - 1.0) / 8.0 - (8.0 + 1.0) + 3.0;
        assert!((r.value - exact).abs() < 1e-13);
        assert_eq!(r.evaluations, 15);
    }

    #[test]
    fn smooth_functions() {
        let r = integrate(|x: f64| Ok(x.tan()), 0.0, 1.2, 1e-13, 0.0, 200).unwrap();
        assert!((r.value - (1.0 / 1.2f64.cos()).ln()).abs() < 1e-12);
        let r = integrate(|x: f64| Ok((-x * x).exp()), -6.0, 6.0, 1e-14, 0.0, 200).unwrap();
        assert!((r.value - std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn integrable_endpoint_singularity() {
        let r = integrate(|x: f64| Ok(1.0 / x.sqrt()), 0.0, 1.0, 1e-9, 0.0, 500).unwrap();
        assert!((r.value - 2.0).abs() < 1e-8);
    }

    #[test]
    fn integrand_errors_propagate() {
        let r = integrate(|x| if x > 0.5 { Err(Error::NonFinite(x)) } else { Ok(1.0) }, 0.0, 1.0, 1e-10, 0.0, 10);
        assert!(matches!(r, Err(Error::NonFinite(_))));
    }
}
