//! Integrators for the complex linear system along a straight path.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type State = [Complex64; 4];

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rtol: 1e-12,
            atol: 1e-14,
            max_steps: 200_000,
        }
    }
}

fn axpy(y: &State, h: f64, ks: &[(&State, f64)]) -> State {
    let mut out = *y;
    for (k, w) in ks {
        if *w != 0.0 {
            for i in 0..4 {
                out[i] += k[i] * (h * w);
            }
        }
    }
    out
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
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
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Adaptive Dormand-Prince 5(4) from `t0` to `t1`. `observe` sees every
/// accepted state.
pub fn dopri5<F, O>(
    f: F,
    t0: f64,
    t1: f64,
    y0: State,
    opts: OdeOptions,
    mut observe: O,
) -> Result<State>
where
    F: Fn(f64, &State) -> State,
    O: FnMut(f64, &State),
{
    let span = t1 - t0;
    if span == 0.0 {
        return Ok(y0);
    }
    let dir = span.signum();
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    let mut h = dir * (span.abs() * 1e-2).min(0.05);
    let mut steps = 0;
    while (t1 - t) * dir > 0.0 {
        steps += 1;
        if steps > opts.max_steps {
            return Err(Error::no_convergence("ODE step limit reached"));
        }
        if (t + h - t1) * dir > 0.0 {
            h = t1 - t;
        }
        let k2 = f(t + C2 * h, &axpy(&y, h, &[(&k1, A21)]));
        let k3 = f(t + C3 * h, &axpy(&y, h, &[(&k1, A31), (&k2, A32)]));
        let k4 = f(
            t + C4 * h,
            &axpy(&y, h, &[(&k1, A41), (&k2, A42), (&k3, A43)]),
        );
        let k5 = f(
            t + C5 * h,
            &axpy(&y, h, &[(&k1, A51), (&k2, A52), (&k3, A53), (&k4, A54)]),
        );
        let k6 = f(
            t + h,
            &axpy(
                &y,
                h,
                &[(&k1, A61), (&k2, A62), (&k3, A63), (&k4, A64), (&k5, A65)],
            ),
        );
        let yn = axpy(
            &y,
            h,
            &[(&k1, B1), (&k3, B3), (&k4, B4), (&k5, B5), (&k6, B6)],
        );
        let k7 = f(t + h, &yn);
        let err = axpy(
            &[Complex64::new(0.0, 0.0); 4],
            h,
            &[
                (&k1, E1),
                (&k3, E3),
                (&k4, E4),
                (&k5, E5),
                (&k6, E6),
                (&k7, E7),
            ],
        );
        let mut norm = 0.0;
        for i in 0..4 {
            let sc = opts.atol + opts.rtol * y[i].norm().max(yn[i].norm());
            norm += (err[i].norm() / sc).powi(2);
        }
        let norm = (norm / 4.0).sqrt();
        if !norm.is_finite() {
            h *= 0.2;
            if h.abs() < 1e-14 * span.abs() {
                return Err(Error::no_convergence("ODE step size underflow"));
            }
            continue;
        }
        let fac = (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0);
        if norm <= 1.0 {
            t += h;
            y = yn;
            k1 = k7;
            observe(t, &y);
        }
        h *= fac;
        if h.abs() < 1e-14 * span.abs() {
            return Err(Error::no_convergence("ODE step size underflow"));
        }
    }
    Ok(y)
}

/// Classical fixed-step fourth-order Runge-Kutta.
pub fn rk4<F>(f: F, t0: f64, t1: f64, y0: State, steps: usize) -> State
where
    F: Fn(f64, &State) -> State,
{
    let h = (t1 - t0) / steps as f64;
    let mut y = y0;
    for i in 0..steps {
        let t = t0 + i as f64 * h;
        let k1 = f(t, &y);
        let k2 = f(t + h / 2.0, &axpy(&y, h, &[(&k1, 0.5)]));
        let k3 = f(t + h / 2.0, &axpy(&y, h, &[(&k2, 0.5)]));
        let k4 = f(t + h, &axpy(&y, h, &[(&k3, 1.0)]));
        y = axpy(
            &y,
            h,
            &[
                (&k1, 1.0 / 6.0),
                (&k2, 1.0 / 3.0),
                (&k3, 1.0 / 3.0),
                (&k4, 1.0 / 6.0),
            ],
        );
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    fn harmonic(_t: f64, y: &State) -> State {
        // c'' = -c, s'' = -s
        [y[1], -y[0], y[3], -y[2]]
    }

    fn start() -> State {
        let z = Complex64::new(0.0, 0.0);
        let o = Complex64::new(1.0, 0.0);
        [o, z, z, o]
    }

    #[test]
    fn dopri_matches_cos_sin() {
        let y = dopri5(
            harmonic,
            0.0,
            3.0,
            start(),
            OdeOptions::default(),
            |_, _| {},
        )
        .unwrap();
        assert!((y[0].re - 3f64.cos()).abs() < 1e-11);
        assert!((y[2].re - 3f64.sin()).abs() < 1e-11);
        let back = dopri5(harmonic, 3.0, 0.0, y, OdeOptions::default(), |_, _| {}).unwrap();
        assert!((back[0].re - 1.0).abs() < 1e-10);
    }

    #[test]
    fn rk4_is_fourth_order() {
        let exact = 2f64.cos();
        let e1 = (rk4(harmonic, 0.0, 2.0, start(), 40)[0].re - exact).abs();
        let e2 = (rk4(harmonic, 0.0, 2.0, start(), 80)[0].re - exact).abs();
        let ratio = e1 / e2;
        assert!(ratio > 14.0 && ratio < 18.0, "ratio {ratio}");
    }
}
