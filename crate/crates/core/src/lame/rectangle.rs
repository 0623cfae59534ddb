//! Schwarz-Christoffel map of the upper half plane onto the rectangle
//! `R* = [-omega, omega] x [0, pi]` with prevertices `-a, -1, 1, inf`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::special::carlson_rf;
use crate::error::{Error, Result};

type C = Complex64;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct RectangleMap {
    pub a: f64,
    /// Scale constant of the map.
    pub c: f64,
    /// Half-width of the rectangle.
    pub omega: f64,
    i1: f64,
    i2: f64,
}

/// `phi_ell(-a) = -omega + pi i`, `phi_ell(-1) = -omega`, `phi_ell(1) = omega`,
/// `phi_ell(inf) = omega + pi i`.
pub fn rectangle_map(a: f64) -> Result<RectangleMap> {
    if !(a > 1.0) || !a.is_finite() {
        return Err(Error::domain(format!("rectangle map needs a > 1, got {a}")));
    }
    let z = C::new(0.0, 0.0);
    let i1 = 2.0 * carlson_rf(z, C::new(2.0, 0.0), C::new(a + 1.0, 0.0)).re;
    let i2 = 2.0 * carlson_rf(z, C::new(a - 1.0, 0.0), C::new(a + 1.0, 0.0)).re;
    Ok(RectangleMap {
        a,
        c: PI / i1,
        omega: PI * i2 / (2.0 * i1),
        i1,
        i2,
    })
}

impl RectangleMap {
    /// `int_{-a}^{-1} dt / sqrt|(t + a)(t^2 - 1)|`
    pub fn side_integral_vertical(&self) -> f64 {
        self.i1
    }

    /// `int_{-1}^{1} dt / sqrt|(t + a)(t^2 - 1)|`
    pub fn side_integral_horizontal(&self) -> f64 {
        self.i2
    }

    /// Forward map on the closed upper half plane. Real arguments are taken
    /// as limits from above.
    pub fn forward(&self, x: C) -> Result<C> {
        if x.im < 0.0 || !x.is_finite() {
            return Err(Error::domain(format!(
                "rectangle map needs Im x >= 0, got {x}"
            )));
        }
        let x = C::new(x.re, x.im.abs());
        let rf = carlson_rf(x + self.a, x - 1.0, x + 1.0);
        Ok(C::new(self.omega, PI) - C::new(0.0, 2.0 * PI) * rf / self.i1)
    }

    /// `d phi_ell / dx`.
    pub fn derivative(&self, x: C) -> C {
        C::new(0.0, self.c) / ((x + self.a).sqrt() * (x - 1.0).sqrt() * (x + 1.0).sqrt())
    }

    /// Inverse map by Newton continuation from `phi_ell(i)`.
    pub fn inverse(&self, u: C) -> Result<C> {
        if u.re.abs() > self.omega || u.im < 0.0 || u.im > PI {
            return Err(Error::domain(format!("{u} lies outside the rectangle")));
        }
        let mut x = C::new(0.0, 1.0);
        let u0 = self.forward(x)?;
        let stages = 32;
        for k in 1..=stages {
            let target = u0 + (u - u0) * (k as f64 / stages as f64);
            for _ in 0..50 {
                let r = self.forward(x)? - target;
                let mut step = r / self.derivative(x);
                // keep the iterate in the upper half plane
                while (x - step).im < 0.0 {
                    step /= 2.0;
                }
                x -= step;
                if step.norm() <= 1e-15 * x.norm().max(1.0) {
                    break;
                }
            }
        }
        let err = (self.forward(x)? - u).norm();
        if err > 1e-9 {
            return Err(Error::no_convergence(format!(
                "rectangle inverse residual {err:e}"
            )));
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: f64 = 9.916916;

    fn trapezoid(f: impl Fn(f64) -> f64, n: usize) -> f64 {
        // integrand is smooth and even-periodic in phi on [0, pi]
        let h = PI / n as f64;
        let mut s = 0.5 * (f(0.0) + f(PI));
        for k in 1..n {
            s += f(k as f64 * h);
        }
        s * h
    }

    #[test]
    fn side_integrals_match_quadrature() {
        let m = rectangle_map(A).unwrap();
        let (c0, c1) = (-(A + 1.0) / 2.0, (A - 1.0) / 2.0);
        let i1 = trapezoid(|p| 1.0 / (1.0 - (c0 + c1 * p.cos())).sqrt(), 200);
        let i2 = trapezoid(|p| 1.0 / (p.cos() + A).sqrt(), 200);
        assert!((m.side_integral_vertical() - i1).abs() < 1e-13);
        assert!((m.side_integral_horizontal() - i2).abs() < 1e-13);
        assert!((m.omega - PI * i2 / (2.0 * i1)).abs() < 1e-14);
        assert!((m.omega - 1.129118157362293).abs() < 1e-6, "{}", m.omega);
    }

    #[test]
    fn corners() {
        let m = rectangle_map(A).unwrap();
        let at = |x: f64| m.forward(C::new(x, 0.0)).unwrap();
        assert!((at(-1.0) - C::new(-m.omega, 0.0)).norm() < 1e-10);
        assert!((at(1.0) - C::new(m.omega, 0.0)).norm() < 1e-10);
        assert!((at(-A) - C::new(-m.omega, PI)).norm() < 1e-10);
        assert!((m.forward(C::new(1e12, 0.0)).unwrap() - C::new(m.omega, PI)).norm() < 1e-5);
    }

    #[test]
    fn real_axis_maps_to_sides() {
        let m = rectangle_map(A).unwrap();
        for x in [-20.0, -5.0, -2.0, -0.5, 0.0, 0.7, 3.0, 50.0] {
            let u = m.forward(C::new(x, 0.0)).unwrap();
            let above = m.forward(C::new(x, 1e-12)).unwrap();
            assert!((u - above).norm() < 1e-5, "limit from above at {x}");
            let on_side = (u.re.abs() - m.omega).abs() < 1e-10
                || u.im.abs() < 1e-10
                || (u.im - PI).abs() < 1e-10;
            assert!(on_side, "{x} -> {u}");
        }
        let u = m.forward(C::new(0.3, 2.0)).unwrap();
        assert!(u.re.abs() < m.omega && u.im > 0.0 && u.im < PI);
    }

    #[test]
    fn inverse_round_trip() {
        let m = rectangle_map(A).unwrap();
        for x in [
            C::new(0.2, 0.5),
            C::new(-3.0, 1.0),
            C::new(5.0, 0.1),
            C::new(-1.5, 0.02),
        ] {
            let u = m.forward(x).unwrap();
            let back = m.inverse(u).unwrap();
            assert!(
                (back - x).norm() < 1e-8 * x.norm().max(1.0),
                "{x} -> {u} -> {back}"
            );
        }
        assert!(m.inverse(C::new(2.0, 1.0)).is_err());
        assert!(rectangle_map(1.0).is_err());
    }
}
