//! Explicit covering map `h: U \ {-mu, mu} -> C \ {0, 1}` built from the
//! rectangle map, the Lame developing map and the modular function.

pub mod accessory;
pub mod ode;
pub mod rectangle;
pub mod special;

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

pub use accessory::{lame_accessory, LameSolution};
pub use rectangle::{rectangle_map, RectangleMap};
pub use special::{carlson_rf, modular_lambda, Weierstrass};

use crate::error::{Error, Result};
use crate::mu_pipeline::{self, MuResult, PipelineConfig};

type C = Complex64;

/// Inside this distance from `-mu` or `mu` the evaluator returns the limit
/// value and flags the puncture.
pub const PUNCTURE_RADIUS: f64 = 1e-6;

/// Harmonic-measure tolerance used when building `mu` for the covering. The
/// side images of the rectangle only land on the real locus of the modular
/// function when `a` and `r` agree to near machine precision.
pub const COVERING_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Puncture {
    /// `z = -mu`, where `h` has a zero of order `m`.
    Zero,
    /// `z = mu`, where `h - 1` has a zero of order `n`.
    One,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct HValue {
    pub z: C,
    pub value: C,
    pub puncture: Option<Puncture>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoveringEvaluator {
    pub m: i64,
    pub n: i64,
    pub mu: MuResult,
    pub lame: LameSolution,
    /// `sqrt(m / n)`, the scale of the half-plane model.
    pub b: f64,
}

impl CoveringEvaluator {
    /// Builds `h_{m,n}` from scratch (harmonic measure, `mu`, rectangle, Lame).
    /// The harmonic measure is solved to at least [`COVERING_TOL`].
    pub fn new(m: i64, n: i64, cfg: &PipelineConfig) -> Result<Self> {
        let cfg = PipelineConfig {
            tol: cfg.tol.min(COVERING_TOL),
            ..*cfg
        };
        let mu = mu_pipeline::mu(m, n, &cfg)?;
        Self::from_mu(m, n, mu)
    }

    pub fn from_mu(m: i64, n: i64, mu: MuResult) -> Result<Self> {
        if m <= 0 || n <= 0 {
            return Err(Error::domain("covering needs positive m, n"));
        }
        let rect = rectangle_map(mu.a)?;
        let lame = lame_accessory(&rect)?;
        Ok(CoveringEvaluator {
            m,
            n,
            b: (m as f64 / n as f64).sqrt(),
            mu,
            lame,
        })
    }

    pub fn mu_value(&self) -> f64 {
        self.mu.mu
    }

    /// `Lambda(psi^{-1}(sigma(phi_ell(x))))` for `Im x >= 0`.
    fn upper(&self, x: C) -> Result<C> {
        let u = self.lame.rect.forward(x)?;
        let u = C::new(
            u.re.clamp(-self.lame.rect.omega, self.lame.rect.omega),
            u.im.clamp(0.0, PI),
        );
        let theta = self.lame.sigma(u)?;
        if (theta - 1.0).norm() < 1e-300 {
            return Ok(C::new(0.0, 0.0));
        }
        let tau = self.b * (1.0 + theta) / (1.0 - theta);
        if !(tau.im > 0.0) {
            // boundary of the half plane, only reachable through rounding
            return Err(Error::no_convergence(format!(
                "half-plane point {tau} fell on the real axis"
            )));
        }
        modular_lambda(tau)
    }

    /// `h(z)` for `|z| < 1`.
    pub fn eval(&self, z: C) -> Result<HValue> {
        if !z.is_finite() || z.norm() >= 1.0 {
            return Err(Error::domain(format!(
                "h is defined on the unit disk, got {z}"
            )));
        }
        let mu = self.mu.mu;
        if (z + mu).norm() < PUNCTURE_RADIUS {
            return Ok(HValue {
                z,
                value: C::new(0.0, 0.0),
                puncture: Some(Puncture::Zero),
            });
        }
        if (z - mu).norm() < PUNCTURE_RADIUS {
            return Ok(HValue {
                z,
                value: C::new(1.0, 0.0),
                puncture: Some(Puncture::One),
            });
        }
        let zeta = (-z - mu) / (1.0 + mu * z);
        let x = (zeta + 1.0 / zeta) / 2.0;
        let value = if x.im < 0.0 {
            self.upper(x.conj())?.conj()
        } else {
            self.upper(C::new(x.re, 0.0_f64.max(x.im)))?
        };
        Ok(HValue {
            z,
            value,
            puncture: None,
        })
    }

    /// `sum_k f(c + r e^{i t_k}) e^{-i j t_k} / N`, the trapezoid rule for the
    /// `j`-th Taylor coefficient times `r^j`.
    fn circle_values(&self, center: C, radius: f64, points: usize) -> Result<Vec<(C, C)>> {
        (0..points)
            .into_par_iter()
            .map(|k| {
                let e = C::from_polar(1.0, 2.0 * PI * k as f64 / points as f64);
                Ok((e, self.eval(center + radius * e)?.value))
            })
            .collect()
    }

    /// `h(c)` and `h'(c)` from Cauchy integrals over a circle.
    pub fn contour_derivative(&self, center: C, radius: f64, points: usize) -> Result<(C, C)> {
        let vals = self.circle_values(center, radius, points)?;
        let n = points as f64;
        let value = vals.iter().map(|(_, v)| *v).sum::<C>() / n;
        let deriv = vals.iter().map(|(e, v)| v / e).sum::<C>() / (n * radius);
        Ok((value, deriv))
    }

    /// Winding number of `h - target` around the circle.
    pub fn winding_number(&self, center: C, radius: f64, points: usize, target: C) -> Result<i64> {
        let vals = self.circle_values(center, radius, points)?;
        let mut turn = 0.0;
        for k in 0..points {
            let a = vals[k].1 - target;
            let b = vals[(k + 1) % points].1 - target;
            turn += (b / a).arg();
        }
        Ok((turn / (2.0 * PI)).round() as i64)
    }

    /// Deterministic sample points filling the disk of radius `rmax`.
    pub fn sample_points(count: usize, rmax: f64) -> Vec<C> {
        let golden = PI * (3.0 - 5f64.sqrt());
        (0..count)
            .map(|k| {
                let r = rmax * ((k as f64 + 0.5) / count as f64).sqrt();
                C::from_polar(r, golden * k as f64)
            })
            .collect()
    }

    pub fn sample(&self, count: usize, rmax: f64) -> Result<Vec<HValue>> {
        Self::sample_points(count, rmax)
            .into_par_iter()
            .map(|z| self.eval(z))
            .collect()
    }

    /// Runs the structural checks on `h`.
    pub fn verify(&self, samples: usize) -> Result<CoveringReport> {
        let mu = self.mu.mu;
        let rho = (mu / 2.0).min(1e-2);
        let pts = 64;
        let mut checks = Vec::new();
        let mut push = |name: &str, value: f64, limit: f64, passed: bool, detail: String| {
            checks.push(CoveringCheck {
                name: name.into(),
                value,
                limit,
                passed,
                detail,
            });
        };

        let (h0, d0) = self.contour_derivative(C::new(-mu, 0.0), rho, pts)?;
        let zero_tol = if self.m >= 2 { 1e-5 } else { f64::INFINITY };
        push(
            "h(-mu) = 0",
            h0.norm(),
            1e-6,
            h0.norm() < 1e-6,
            format!("{h0}"),
        );
        if self.m >= 2 {
            push(
                "h'(-mu) = 0",
                d0.norm(),
                zero_tol,
                d0.norm() < zero_tol,
                format!("{d0}"),
            );
        }
        let (h1, d1) = self.contour_derivative(C::new(mu, 0.0), rho, pts)?;
        push(
            "h(mu) = 1",
            (h1 - 1.0).norm(),
            1e-6,
            (h1 - 1.0).norm() < 1e-6,
            format!("{h1}"),
        );
        if self.n == 1 {
            push(
                "h'(mu) != 0",
                d1.norm(),
                1e-3,
                d1.norm() > 1e-3,
                format!("{d1}"),
            );
        }
        let w0 = self.winding_number(C::new(-mu, 0.0), rho, pts, C::new(0.0, 0.0))?;
        push(
            "winding of h about -mu",
            w0 as f64,
            self.m as f64,
            w0 == self.m,
            format!("{w0}"),
        );
        let w1 = self.winding_number(C::new(mu, 0.0), rho, pts, C::new(1.0, 0.0))?;
        push(
            "winding of h - 1 about mu",
            w1 as f64,
            self.n as f64,
            w1 == self.n,
            format!("{w1}"),
        );

        // Near the unit circle h enters cusp neighbourhoods of 0 and 1
        // (e.g. h -> 1 at z = -1), so omission is checked on an inner disk.
        let grid = self.sample(samples, 0.5)?;
        let mut closest: f64 = f64::INFINITY;
        for hv in grid
            .iter()
            .filter(|hv| (hv.z + mu).norm() > 2.0 * rho && (hv.z - mu).norm() > 2.0 * rho)
        {
            closest = closest.min(hv.value.norm()).min((hv.value - 1.0).norm());
            if !hv.value.is_finite() {
                closest = 0.0;
            }
        }
        push(
            "h omits 0 and 1 on samples",
            closest,
            1e-10,
            closest > 1e-10,
            format!("{} points", grid.len()),
        );
        let v = self.eval(C::new(0.0, 0.5))?.value;
        let gap = v.norm().min((v - 1.0).norm());
        push(
            "h(0.5i) finite, not 0 or 1",
            gap,
            1e-10,
            v.is_finite() && gap > 1e-10,
            format!("{v}"),
        );

        let mut imag: f64 = 0.0;
        // same inner region as above; toward x = +-1 the modular function is
        // evaluated next to a cusp and loses relative accuracy
        for k in 0..61 {
            let x = -0.6 + 1.2 * k as f64 / 60.0;
            if (x + mu).abs() < 2.0 * rho || (x - mu).abs() < 2.0 * rho {
                continue;
            }
            let v = self.eval(C::new(x, 0.0))?.value;
            imag = imag.max(v.im.abs() / v.norm().max(1.0));
        }
        push(
            "h real on the diameter",
            imag,
            1e-8,
            imag < 1e-8,
            "|x| <= 0.6".into(),
        );

        let r = self.mu.r;
        let s_w = self.lame.sigma(C::new(self.lame.rect.omega, 0.0))?;
        let err = (s_w - (1.0 - 2.0 * r)).norm();
        push(
            "sigma(omega) = 1 - 2r",
            err,
            1e-3,
            err < 1e-3,
            format!("{s_w}"),
        );

        let passed = checks.iter().all(|c| c.passed);
        Ok(CoveringReport {
            m: self.m,
            n: self.n,
            mu,
            a: self.mu.a,
            omega: self.lame.rect.omega,
            lambda0: self.lame.lambda0,
            lambda1: self.lame.lambda1,
            lambda2: self.lame.lambda2,
            derivative_at_zero: [d0.re, d0.im],
            derivative_at_one: [d1.re, d1.im],
            winding: [w0, w1],
            checks,
            passed,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CoveringCheck {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoveringReport {
    pub m: i64,
    pub n: i64,
    pub mu: f64,
    pub a: f64,
    pub omega: f64,
    pub lambda0: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub derivative_at_zero: [f64; 2],
    pub derivative_at_one: [f64; 2],
    pub winding: [i64; 2],
    pub checks: Vec<CoveringCheck>,
    pub passed: bool,
}

/// CSV with columns `re_z, im_z, re_h, im_h, puncture`.
pub fn samples_csv(values: &[HValue]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["re_z", "im_z", "re_h", "im_h", "puncture"])
        .expect("in-memory write");
    for v in values {
        let p = match v.puncture {
            None => "",
            Some(Puncture::Zero) => "zero",
            Some(Puncture::One) => "one",
        };
        w.write_record([
            v.z.re.to_string(),
            v.z.im.to_string(),
            v.value.re.to_string(),
            v.value.im.to_string(),
            p.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::OnceLock;

    fn h() -> &'static CoveringEvaluator {
        static H: OnceLock<CoveringEvaluator> = OnceLock::new();
        H.get_or_init(|| CoveringEvaluator::new(2, 1, &PipelineConfig::default()).unwrap())
    }

    #[test]
    fn punctures_are_flagged() {
        let h = h();
        let mu = h.mu_value();
        let v = h.eval(C::new(-mu + 1e-7, 0.0)).unwrap();
        assert_eq!(v.puncture, Some(Puncture::Zero));
        assert_eq!(v.value, C::new(0.0, 0.0));
        let v = h.eval(C::new(mu, 5e-7)).unwrap();
        assert_eq!(v.puncture, Some(Puncture::One));
        assert!(h.eval(C::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn local_behaviour_near_punctures() {
        let h = h();
        let mu = h.mu_value();
        let a = h.eval(C::new(-mu + 1e-3, 0.0)).unwrap().value;
        let b = h.eval(C::new(-mu + 2e-3, 0.0)).unwrap().value;
        // double zero: h grows like the square of the distance
        assert!((b.norm() / a.norm() - 4.0).abs() < 0.1, "{a} {b}");
        let a = h.eval(C::new(mu + 1e-4, 0.0)).unwrap().value - 1.0;
        let b = h.eval(C::new(mu + 2e-4, 0.0)).unwrap().value - 1.0;
        assert!((b.norm() / a.norm() - 2.0).abs() < 0.05, "{a} {b}");
    }

    #[test]
    fn conjugation_symmetry() {
        let h = h();
        for z in [C::new(0.2, 0.3), C::new(-0.4, 0.1), C::new(0.05, -0.6)] {
            let a = h.eval(z).unwrap().value;
            let b = h.eval(z.conj()).unwrap().value;
            assert!(
                (a - b.conj()).norm() < 1e-9 * a.norm().max(1.0),
                "{z}: {a} vs {b}"
            );
        }
    }

    #[test]
    fn verification_report_passes() {
        let rep = h().verify(48).unwrap();
        for c in &rep.checks {
            assert!(c.passed, "{}: {} ({})", c.name, c.value, c.detail);
        }
        assert_eq!(rep.winding, [2, 1]);
    }

    #[test]
    fn csv_has_header_and_rows() {
        let vals = h().sample(5, 0.5).unwrap();
        let text = samples_csv(&vals);
        assert_eq!(text.lines().count(), 6);
        assert!(text.starts_with("re_z,im_z,re_h,im_h,puncture"));
    }
}
