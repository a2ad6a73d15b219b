//! Dormand–Prince 5(4) embedded pair for autonomous scalar ODEs `y' = f(y)`.
//!
//! Only the single step lives here; step-size control and collapse detection
//! are in [`crate::flow`].

use crate::Result;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// b - b̂ (fifth minus fourth order weights)
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

pub const ORDER: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Step {
    /// Fifth-order solution.
    pub y: f64,
    /// Absolute local error estimate `|y5 - y4|`.
    pub error: f64,
    /// `f(y)` at the new point, reused as the first stage of the next step.
    pub f_new: f64,
}

/// One step of size `h` from `y` with `fy = f(y)` already known.
pub fn dopri5_step<F>(f: &mut F, y: f64, fy: f64, h: f64) -> Result<Step>
where
    F: FnMut(f64) -> Result<f64>,
{
    let k1 = fy;
    let k2 = f(y + h * A21 * k1)?;
    let k3 = f(y + h * (A31 * k1 + A32 * k2))?;
    let k4 = f(y + h * (A41 * k1 + A42 * k2 + A43 * k3))?;
    let k5 = f(y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4))?;
    let k6 = f(y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5))?;
    let y_new = y + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
    let k7 = f(y_new)?;
    let error = (h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7)).abs();
    Ok(Step { y: y_new, error, f_new: k7 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifth_order_convergence() {
        // y' = -y, y(0) = 1, one step of size h; local error ~ h^6
        let mut f = |y: f64| Ok(-y);
        let err = |h: f64| (dopri5_step(&mut f.clone(), 1.0, -1.0, h).unwrap().y - (-h).exp()).abs();
        let ratio = err(0.2) / err(0.1);
        assert!(ratio > 40.0 && ratio < 90.0, "ratio {ratio}");
        let s = dopri5_step(&mut f, 1.0, -1.0, 0.1).unwrap();
        assert!(s.error > 0.0 && s.error < 1e-6);
        assert!((s.f_new + s.y).abs() < 1e-16);
    }

    #[test]
    fn constant_field_is_linear() {
        let mut f = |_: f64| Ok(3.0);
        let s = dopri5_step(&mut f, 1.0, 3.0, 0.5).unwrap();
        assert!((s.y - 2.5).abs() < 1e-15);
        assert!(s.error < 1e-15);
    }
}
