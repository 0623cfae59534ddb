//! The Lame equation `w'' = (lambda - P(z)) w` on the rectangle, the accessory
//! parameter making the ratio of solutions a developing map, and that map
//! `sigma`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::ode::{dopri5, rk4, OdeOptions, State};
use super::rectangle::RectangleMap;
use super::special::Weierstrass;
use crate::error::{Error, Result};

type C = Complex64;

/// Points on `[0, omega]` where the real-axis leg is cached.
const AXIS_CACHE: usize = 64;
/// Closer than this to the pole corner `omega + pi i`, `sigma` returns its
/// limit 1.
const POLE_GUARD: f64 = 1e-9;

fn initial() -> State {
    let (o, z) = (C::new(1.0, 0.0), C::new(0.0, 0.0));
    [o, z, z, o]
}

fn system<'a>(
    wp: &'a Weierstrass,
    lambda: f64,
    z0: C,
    dz: C,
) -> impl Fn(f64, &State) -> State + 'a {
    move |t, y| {
        let p = lambda - wp.lame_potential(z0 + dz * t);
        [dz * y[1], dz * p * y[0], dz * y[3], dz * p * y[2]]
    }
}

fn wronskian(y: &State) -> C {
    y[0] * y[3] - y[1] * y[2]
}

/// Values `(C(pi), C'(pi), S(pi), S'(pi))` of the solutions of
/// `C'' = (P(it) - lambda) C` on `[0, pi]`, with `C(0) = 1, C'(0) = 0`,
/// `S(0) = 0, S'(0) = 1`.
pub fn shoot_imaginary(wp: &Weierstrass, lambda: f64, opts: OdeOptions) -> Result<[f64; 4]> {
    let y = dopri5(
        system(wp, lambda, C::new(0.0, 0.0), C::new(0.0, PI)),
        0.0,
        1.0,
        initial(),
        opts,
        |_, _| {},
    )?;
    // c(it) = C(t), c'(it) = -i C'(t), s(it) = i S(t), s'(it) = S'(t)
    Ok([y[0].re, -y[1].im, y[2].im, y[3].re])
}

fn bisect(f: impl Fn(f64) -> Result<f64>, mut lo: f64, mut hi: f64) -> Result<f64> {
    let mut flo = f(lo)?;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= 1e-15 * mid.abs().max(1.0) {
            break;
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// First sign change of `f` on `start, start + step, ...` up to `stop`.
fn first_root(f: &impl Fn(f64) -> Result<f64>, start: f64, step: f64, stop: f64) -> Result<f64> {
    let mut x = start;
    let mut fx = f(x)?;
    while x < stop {
        let nx = x + step;
        let fn_ = f(nx)?;
        if fx == 0.0 {
            return Ok(x);
        }
        if (fn_ > 0.0) != (fx > 0.0) {
            return bisect(f, x, nx);
        }
        x = nx;
        fx = fn_;
    }
    Err(Error::no_convergence(
        "no eigenvalue found in the scan range",
    ))
}

#[derive(Debug, Clone, Serialize)]
pub struct LameSolution {
    pub rect: RectangleMap,
    #[serde(skip)]
    pub wp: Weierstrass,
    /// Neumann eigenvalue: `C'(pi) = 0`.
    pub lambda0: f64,
    /// Accessory parameter: `C(pi) S'(pi) = 1/2`.
    pub lambda1: f64,
    /// Mixed eigenvalue: `C(pi) = 0`.
    pub lambda2: f64,
    /// Normalization with `sigma(pi i) = i`.
    pub k: f64,
    #[serde(skip)]
    opts: OdeOptions,
    #[serde(skip)]
    axis: Vec<State>,
}

/// Solves for the accessory parameter on the rectangle of `rect`.
pub fn lame_accessory(rect: &RectangleMap) -> Result<LameSolution> {
    lame_accessory_with(rect, OdeOptions::default())
}

pub fn lame_accessory_with(rect: &RectangleMap, opts: OdeOptions) -> Result<LameSolution> {
    let wp = Weierstrass::new(rect.omega)?;
    let shoot = |l: f64| shoot_imaginary(&wp, l, opts);
    let step = 0.01;
    let stop = 100.0;
    let lambda0 = first_root(&|l| Ok(shoot(l)?[1]), 0.0, step, stop)?;
    let lambda2 = first_root(&|l| Ok(shoot(l)?[0]), 0.0, step, stop)?;
    if !(lambda2 > lambda0) {
        return Err(Error::no_convergence("eigenvalues out of order"));
    }
    let g = |l: f64| -> Result<f64> {
        let v = shoot(l)?;
        Ok(v[0] * v[3] - 0.5)
    };
    // exactly one sign change on (lambda0, lambda2)
    let samples = 40;
    let mut changes = 0;
    let mut bracket = None;
    let mut prev = (lambda0, g(lambda0)?);
    for i in 1..=samples {
        let l = lambda0 + (lambda2 - lambda0) * i as f64 / samples as f64;
        let v = g(l)?;
        if (v > 0.0) != (prev.1 > 0.0) {
            changes += 1;
            bracket = Some((prev.0, l));
        }
        prev = (l, v);
    }
    let (lo, hi) = match (changes, bracket) {
        (1, Some(b)) => b,
        _ => {
            return Err(Error::no_convergence(format!(
                "accessory equation has {changes} sign changes between the eigenvalues"
            )))
        }
    };
    let lambda1 = bisect(g, lo, hi)?;
    let v = shoot(lambda1)?;
    let k = v[0] / v[2];
    let mut sol = LameSolution {
        rect: *rect,
        wp,
        lambda0,
        lambda1,
        lambda2,
        k,
        opts,
        axis: Vec::new(),
    };
    sol.build_axis_cache()?;
    Ok(sol)
}

impl LameSolution {
    fn build_axis_cache(&mut self) -> Result<()> {
        let mut y = initial();
        let h = self.rect.omega / AXIS_CACHE as f64;
        self.axis.push(y);
        for k in 0..AXIS_CACHE {
            let z0 = C::new(k as f64 * h, 0.0);
            y = dopri5(
                system(&self.wp, self.lambda1, z0, C::new(h, 0.0)),
                0.0,
                1.0,
                y,
                self.opts,
                |_, _| {},
            )?;
            self.axis.push(y);
        }
        Ok(())
    }

    fn check_point(&self, u: C) -> Result<()> {
        let eps = 1e-12;
        if !u.is_finite() || u.re.abs() > self.rect.omega + eps || u.im < -eps || u.im > PI + eps {
            return Err(Error::domain(format!("{u} lies outside the rectangle")));
        }
        Ok(())
    }

    fn segment(&self, z0: C, z1: C, y: State, drift: &mut f64) -> Result<State> {
        if z0 == z1 {
            return Ok(y);
        }
        dopri5(
            system(&self.wp, self.lambda1, z0, z1 - z0),
            0.0,
            1.0,
            y,
            self.opts,
            |_, s| {
                *drift = drift.max((wronskian(s) - 1.0).norm());
            },
        )
    }

    /// `(c, c', s, s')` at `u` with `Re u >= 0`, integrated from 0 along the
    /// real axis and then vertically, together with the largest Wronskian
    /// drift seen on the way.
    pub fn state_at(&self, u: C) -> Result<(State, f64)> {
        self.check_point(u)?;
        if u.re < 0.0 {
            return Err(Error::domain("state_at needs Re u >= 0"));
        }
        let x = u.re.min(self.rect.omega);
        let h = self.rect.omega / AXIS_CACHE as f64;
        let k = ((x / h).floor() as usize).min(AXIS_CACHE);
        let xk = k as f64 * h;
        let mut drift: f64 = (wronskian(&self.axis[k]) - 1.0).norm();
        let y = self.segment(C::new(xk, 0.0), C::new(x, 0.0), self.axis[k], &mut drift)?;
        let y = self.segment(C::new(x, 0.0), C::new(x, u.im), y, &mut drift)?;
        Ok((y, drift))
    }

    /// Same path with fixed-step RK4 using `steps` steps per unit length,
    /// for step-halving checks.
    pub fn state_at_rk4(&self, u: C, steps: usize) -> Result<State> {
        self.check_point(u)?;
        let n = |len: f64| ((len * steps as f64).ceil() as usize).max(1);
        let y = rk4(
            system(&self.wp, self.lambda1, C::new(0.0, 0.0), C::new(u.re, 0.0)),
            0.0,
            1.0,
            initial(),
            n(u.re),
        );
        Ok(rk4(
            system(&self.wp, self.lambda1, C::new(u.re, 0.0), C::new(0.0, u.im)),
            0.0,
            1.0,
            y,
            n(u.im),
        ))
    }

    fn sigma_right(&self, u: C) -> Result<C> {
        let pole = C::new(self.rect.omega, PI);
        if (u - pole).norm() < POLE_GUARD {
            return Ok(C::new(1.0, 0.0));
        }
        let (y, _) = self.state_at(u)?;
        Ok(self.k * y[2] / y[0])
    }

    /// The developing map on the closed rectangle, `sigma(0) = 0`,
    /// `sigma(pi i) = i`, extended to `Re u < 0` by
    /// `sigma(u) = -conj(sigma(-conj u))`.
    pub fn sigma(&self, u: C) -> Result<C> {
        self.check_point(u)?;
        if u.re >= 0.0 {
            self.sigma_right(u)
        } else {
            Ok(-self.sigma_right(-u.conj())?.conj())
        }
    }

    /// Largest Wronskian drift over a set of probe points.
    pub fn wronskian_drift(&self, probes: &[C]) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for &u in probes {
            worst = worst.max(self.state_at(u)?.1);
        }
        Ok(worst)
    }
}
