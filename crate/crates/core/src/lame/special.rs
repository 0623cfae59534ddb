//! Carlson's `R_F`, Jacobi theta functions with a real nome, the Weierstrass
//! function of a rectangular lattice, and the modular function `lambda`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

type C = Complex64;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// Carlson's symmetric integral
/// `R_F(x, y, z) = (1/2) int_0^inf dt / sqrt((t + x)(t + y)(t + z))`
/// by duplication. Arguments may be complex, off the closed negative real
/// axis, or on it as limits from above (pass `+0.0` imaginary parts); at most
/// one may vanish.
pub fn carlson_rf(x0: C, y0: C, z0: C) -> C {
    let (mut x, mut y, mut z) = (x0, y0, z0);
    let a0 = (x + y + z) / 3.0;
    let r: f64 = 1e-16;
    let q =
        (3.0 * r).powf(-1.0 / 6.0) * (a0 - x0).norm().max((a0 - y0).norm()).max((a0 - z0).norm());
    let mut a = a0;
    let mut scale = 1.0;
    for _ in 0..200 {
        if scale * q < a.norm() {
            break;
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lam = sx * sy + sx * sz + sy * sz;
        x = (x + lam) / 4.0;
        y = (y + lam) / 4.0;
        z = (z + lam) / 4.0;
        a = (a + lam) / 4.0;
        scale /= 4.0;
    }
    let xx = (a0 - x0) * scale / a;
    let yy = (a0 - y0) * scale / a;
    let zz = -xx - yy;
    let e2 = xx * yy - zz * zz;
    let e3 = xx * yy * zz;
    (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / a.sqrt()
}

/// Jacobi theta functions `theta_1..theta_4(v, q)` for a real nome `0 < q < 1`
/// small enough that a few terms suffice.
#[derive(Debug, Clone, Copy)]
pub struct Theta {
    pub q: f64,
}

const THETA_TERMS: i32 = 12;

impl Theta {
    pub fn theta1(&self, v: C) -> C {
        let mut s = c(0.0, 0.0);
        for n in 0..THETA_TERMS {
            let k = n as f64 + 0.5;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            s += sign * self.q.powf(k * k) * ((2 * n + 1) as f64 * v).sin();
        }
        2.0 * s
    }

    pub fn theta2(&self, v: C) -> C {
        let mut s = c(0.0, 0.0);
        for n in 0..THETA_TERMS {
            let k = n as f64 + 0.5;
            s += self.q.powf(k * k) * ((2 * n + 1) as f64 * v).cos();
        }
        2.0 * s
    }

    pub fn theta3(&self, v: C) -> C {
        let mut s = c(1.0, 0.0);
        for n in 1..THETA_TERMS {
            s += 2.0 * self.q.powi(n * n) * (2.0 * n as f64 * v).cos();
        }
        s
    }

    pub fn theta4(&self, v: C) -> C {
        let mut s = c(1.0, 0.0);
        for n in 1..THETA_TERMS {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            s += 2.0 * sign * self.q.powi(n * n) * (2.0 * n as f64 * v).cos();
        }
        s
    }
}

/// Weierstrass `wp` with half-periods `omega` (real) and `pi i`.
#[derive(Debug, Clone, Copy)]
pub struct Weierstrass {
    pub omega: f64,
    theta: Theta,
    scale: f64,
    t3t4: f64,
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
}

impl Weierstrass {
    pub fn new(omega: f64) -> Result<Self> {
        if !(omega > 0.0) {
            return Err(Error::domain("half-period must be positive"));
        }
        let q = (-PI * PI / omega).exp();
        if q > 0.5 {
            return Err(Error::domain("half-period too large for the theta series"));
        }
        let theta = Theta { q };
        let zero = c(0.0, 0.0);
        let t2 = theta.theta2(zero).re;
        let t3 = theta.theta3(zero).re;
        let t4 = theta.theta4(zero).re;
        let scale = PI / (2.0 * omega);
        let c0 = scale * scale;
        Ok(Weierstrass {
            omega,
            theta,
            scale,
            t3t4: t3 * t4,
            e1: c0 * (t3.powi(4) + t4.powi(4)) / 3.0,
            e2: c0 * (t2.powi(4) - t4.powi(4)) / 3.0,
            e3: -c0 * (t2.powi(4) + t3.powi(4)) / 3.0,
        })
    }

    /// Moves `z` into the period cell centered at 0.
    fn reduce(&self, z: C) -> C {
        let re = z.re - 2.0 * self.omega * (z.re / (2.0 * self.omega)).round();
        let im = z.im - 2.0 * PI * (z.im / (2.0 * PI)).round();
        c(re, im)
    }

    /// Distance from `z` to the nearest lattice point.
    pub fn lattice_distance(&self, z: C) -> f64 {
        self.reduce(z).norm()
    }

    pub fn wp(&self, z: C) -> C {
        let z = self.reduce(z);
        let v = self.scale * z;
        let ratio = self.scale * self.t3t4 * self.theta.theta2(v) / self.theta.theta1(v);
        self.e1 + ratio * ratio
    }

    /// `P(z) = (wp(z + omega + pi i) - e2) / 4`, the Lame potential. Real on
    /// both axes, with a double pole at `omega + pi i`.
    pub fn lame_potential(&self, z: C) -> C {
        (self.wp(z + c(self.omega, PI)) - self.e2) / 4.0
    }
}

/// Modular function `lambda(tau) = (theta_2 / theta_3)^4` with nome
/// `exp(i pi tau)`, covering `H -> C \ {0, 1}` with `(0, 1, inf) -> (1, inf, 0)`.
/// The argument is first moved into `|tau| >= 1`, `|Re tau| <= 1/2` using
/// `lambda(tau + 1) = lambda / (lambda - 1)` and `lambda(-1/tau) = 1 - lambda`.
pub fn modular_lambda(tau: C) -> Result<C> {
    if !(tau.im > 0.0) || !tau.is_finite() {
        return Err(Error::domain(format!("lambda needs Im tau > 0, got {tau}")));
    }
    // The reduction steps act on lambda by the anharmonic maps
    // l -> l / (l - 1) and l -> 1 - l. They are composed into one integer
    // Moebius matrix and applied once, so no intermediate value near 1 is
    // ever formed.
    let shift = [[1.0, 0.0], [1.0, -1.0]];
    let invert = [[-1.0, 1.0], [0.0, 1.0]];
    let mul = |p: [[f64; 2]; 2], q: [[f64; 2]; 2]| {
        [
            [
                p[0][0] * q[0][0] + p[0][1] * q[1][0],
                p[0][0] * q[0][1] + p[0][1] * q[1][1],
            ],
            [
                p[1][0] * q[0][0] + p[1][1] * q[1][0],
                p[1][0] * q[0][1] + p[1][1] * q[1][1],
            ],
        ]
    };
    let mut m = [[1.0, 0.0], [0.0, 1.0]];
    let mut t = tau;
    for _ in 0..10_000 {
        let n = t.re.round();
        t.re -= n;
        if (n as i64).rem_euclid(2) == 1 {
            m = mul(m, shift);
        }
        if t.norm_sqr() < 1.0 - 1e-12 {
            t = -1.0 / t;
            m = mul(m, invert);
        } else {
            break;
        }
    }
    let l = lambda_series(t);
    Ok((m[0][0] * l + m[0][1]) / (m[1][0] * l + m[1][1]))
}

fn lambda_series(tau: C) -> C {
    let iq = C::i() * PI * tau;
    let mut t2 = c(0.0, 0.0);
    let mut t3 = c(1.0, 0.0);
    for n in 0..30 {
        let k = n as f64 + 0.5;
        let a = (iq * (k * k)).exp();
        t2 += 2.0 * a;
        if n > 0 {
            t3 += 2.0 * (iq * (n * n) as f64).exp();
        }
        if a.norm() < 1e-300 {
            break;
        }
    }
    let r = t2 / t3;
    let r2 = r * r;
    r2 * r2
}
