//! From harmonic measure to the constants `mu_{m,n}`, the length of the
//! separating geodesic in the twice-punctured disk, and the chocolate bounds.
//!
//! The chain is `r = 1/(sqrt(mn) + 1)`, `omega0 = omega0(r)`,
//! `a = J(cos(pi omega0))`, `q = -a + sqrt(a^2 - 1)`,
//! `mu = (-1 + sqrt(1 - q^2)) / q`. The last two steps are evaluated in the
//! algebraically equal forms `q = -1/(a + sqrt(a^2 - 1))` and
//! `mu = -q / (1 + sqrt(1 - q^2))`, which involve no cancellation, so `f64`
//! keeps full relative accuracy even when `mu` is of order `1e-4`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hyperbolic::acosh;
use crate::schwarz::{HarmonicEstimate, SchwarzSolver, Side, DEFAULT_MAX_ITER, DEFAULT_NODES};

/// Numerical settings shared by the pipeline entry points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig {
    /// Stopping threshold for the Schwarz series.
    pub tol: f64,
    pub nodes: usize,
    pub max_iter: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            tol: 1e-10,
            nodes: DEFAULT_NODES,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

impl PipelineConfig {
    pub fn with_tol(tol: f64) -> Self {
        PipelineConfig {
            tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MuChain {
    pub a: f64,
    pub q: f64,
    pub mu: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MuResult {
    pub m: f64,
    pub n: f64,
    pub p: f64,
    pub r: f64,
    pub omega0: HarmonicEstimate,
    pub a: f64,
    pub q: f64,
    pub mu: f64,
}

impl MuResult {
    /// `2 mu / (1 + mu^2)`, the pseudo-hyperbolic distance of `-mu` and `mu`.
    pub fn threshold(&self) -> f64 {
        2.0 * self.mu / (1.0 + self.mu * self.mu)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChocolateResult {
    pub s0: f64,
    pub tstar_lower: f64,
    pub delta_star_upper: f64,
    pub hempel_smith_tstar: f64,
    pub omega0: HarmonicEstimate,
}

/// `r = 1/(sqrt(p) + 1)` for the product `p = m n`.
pub fn r_from_product(p: f64) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::domain(format!("product {p} must be at least 1")));
    }
    Ok(1.0 / (p.sqrt() + 1.0))
}

/// `a`, `q` and `mu` from the harmonic measure `omega0`.
pub fn mu_from_omega0(omega0: f64) -> Result<MuChain> {
    if !(omega0 > 0.0 && omega0 < 0.5) {
        return Err(Error::domain(format!("omega0 = {omega0} outside (0, 1/2)")));
    }
    // cos(pi w) = sin(pi (1/2 - w)) keeps relative accuracy as w -> 1/2.
    let c = (PI * (0.5 - omega0)).sin();
    Ok(mu_from_a((c + 1.0 / c) / 2.0))
}

/// `q` and `mu` from `a > 1`.
pub fn mu_from_a(a: f64) -> MuChain {
    let q = -1.0 / (a + (a * a - 1.0).sqrt());
    let mu = -q / (1.0 + (1.0 - q * q).sqrt());
    MuChain { a, q, mu }
}

fn solve_omega0(r: f64, cfg: &PipelineConfig) -> Result<HarmonicEstimate> {
    Ok(SchwarzSolver::with_nodes(r, cfg.nodes, cfg.max_iter)?
        .run(Side::L, cfg.tol)?
        .estimate)
}

/// `mu_{m,n}` for positive integers `m != n`.
pub fn mu(m: i64, n: i64, cfg: &PipelineConfig) -> Result<MuResult> {
    if m < 1 || n < 1 || m == n {
        return Err(Error::domain(format!(
            "({m}, {n}) must be distinct positive integers"
        )));
    }
    mu_general(m as f64, n as f64, cfg)
}

/// The same chain for a real product `p > 1`.
pub fn mu_p(p: f64, cfg: &PipelineConfig) -> Result<MuResult> {
    if !(p > 1.0) {
        return Err(Error::domain(format!("product {p} must exceed 1")));
    }
    mu_general(p, 1.0, cfg)
}

fn mu_general(m: f64, n: f64, cfg: &PipelineConfig) -> Result<MuResult> {
    let p = m * n;
    let r = r_from_product(p)?;
    let om = solve_omega0(r, cfg)?;
    let ch = mu_from_omega0(om.value)?;
    Ok(MuResult {
        m,
        n,
        p,
        r,
        omega0: om,
        a: ch.a,
        q: ch.q,
        mu: ch.mu,
    })
}

/// `2 acosh(2p - 1)`: length of the geodesic with trace `4p - 2`.
pub fn length_of_product(p: f64) -> f64 {
    2.0 * acosh(2.0 * p - 1.0)
}

/// Inverse of [`length_of_product`].
pub fn product_of_length(ell: f64) -> f64 {
    ((ell / 2.0).cosh() + 1.0) / 2.0
}

/// `t = mu_p` at the product whose geodesic has length `ell`.
pub fn t_for_length(ell: f64, cfg: &PipelineConfig) -> Result<f64> {
    if !(ell > 0.0) || !ell.is_finite() {
        return Err(Error::domain("length must be positive"));
    }
    Ok(mu_p(product_of_length(ell), cfg)?.mu)
}

/// Hyperbolic length of the separating geodesic of the disk punctured at
/// `-t` and `t`, found by bisection on the product `p` with `mu_p = t`.
pub fn separating_length(t: f64, cfg: &PipelineConfig) -> Result<f64> {
    Ok(length_of_product(product_for_mu(t, cfg)?))
}

/// Solves `mu_p(p) = t` for `p`. Brackets geometrically from `p = 2`, then
/// bisects in `log p` until the bracket is narrower than `cfg.tol` relative.
pub fn product_for_mu(t: f64, cfg: &PipelineConfig) -> Result<f64> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::domain(format!("t = {t} outside (0, 1)")));
    }
    let f = |p: f64| -> Result<f64> { Ok(mu_p(p, cfg)?.mu - t) };
    let (mut lo, mut hi) = (2.0f64, 2.0f64);
    let f2 = f(2.0)?;
    if f2 > 0.0 {
        // Shrink towards 1 by halving the distance p - 1.
        loop {
            lo = 1.0 + (lo - 1.0) / 2.0;
            if lo - 1.0 < 1e-6 {
                return Err(Error::domain(format!(
                    "no bracket for t = {t}: below the family's range"
                )));
            }
            if f(lo)? < 0.0 {
                break;
            }
            hi = lo;
        }
    } else if f2 < 0.0 {
        loop {
            hi *= 2.0;
            if hi > 1e12 {
                return Err(Error::domain(format!(
                    "no bracket for t = {t}: above the family's range"
                )));
            }
            if f(hi)? > 0.0 {
                break;
            }
            lo = hi;
        }
    } else {
        return Ok(2.0);
    }
    let rel = cfg.tol.max(1e-14);
    for _ in 0..200 {
        if (hi - lo) <= rel * lo {
            break;
        }
        let mid = (lo * hi).sqrt();
        if f(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo * hi).sqrt())
}

/// Lower bound `t` from `l(U \ {0, t^2}) >= log(3 + 2 sqrt 2)` and the
/// closed-form upper estimate of that length.
pub fn hempel_smith_tstar() -> f64 {
    let target = (3.0 + 2.0 * 2f64.sqrt()).ln();
    let upper = |x: f64| {
        let l = (16.0 * (1.0 - x).sqrt() / x).ln();
        2.0 * PI * PI / (l - PI * PI / (4.0 * l))
    };
    // `upper` increases in x on the relevant range; bisect in log x.
    let (mut lo, mut hi) = (1e-12f64, 0.5f64);
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if upper(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi / lo - 1.0 < 1e-15 {
            break;
        }
    }
    ((lo * hi).sqrt()).sqrt()
}

/// `s0` with `l(U \ {-s0, s0}) = log(3 + 2 sqrt 2)`, and the bounds it implies.
pub fn chocolate(cfg: &PipelineConfig) -> Result<ChocolateResult> {
    let p = (1.0 + 2f64.sqrt()) / 2.0;
    let res = mu_p(p, cfg)?;
    let s0 = res.mu;
    let tstar = (2.0 * s0 / (1.0 + s0 * s0)).sqrt();
    let t2 = tstar * tstar;
    Ok(ChocolateResult {
        s0,
        tstar_lower: tstar,
        delta_star_upper: (1.0 - t2) / (1.0 + t2),
        hempel_smith_tstar: hempel_smith_tstar(),
        omega0: res.omega0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoPoint {
    pub pseudo_dist: f64,
    pub threshold: f64,
    pub admissible_holomorphic: bool,
    pub admissible_rational: bool,
}

/// Pseudo-hyperbolic distance `|b - a| / |1 - conj(a) b|` compared with the
/// threshold `2 mu / (1 + mu^2)`.
pub fn two_point_admissible(a: Complex64, b: Complex64, mu: f64) -> Result<TwoPoint> {
    if a.norm() >= 1.0 || b.norm() >= 1.0 {
        return Err(Error::domain("points must lie in the open unit disk"));
    }
    let d = (b - a).norm() / (Complex64::new(1.0, 0.0) - a.conj() * b).norm();
    let threshold = 2.0 * mu / (1.0 + mu * mu);
    // Relative slack for the boundary case where d equals the threshold up to
    // rounding.
    let eps = 8.0 * f64::EPSILON * threshold;
    Ok(TwoPoint {
        pseudo_dist: d,
        threshold,
        admissible_holomorphic: d >= threshold - eps,
        admissible_rational: d > threshold + eps,
    })
}

/// Rows of the `mu` table: `(m, n)` pairs and the result for each.
pub fn table(pairs: &[(i64, i64)], cfg: &PipelineConfig) -> Result<Vec<MuResult>> {
    use rayon::prelude::*;
    pairs.par_iter().map(|&(m, n)| mu(m, n, cfg)).collect()
}

/// CSV with columns `m,n,p,r,omega0,omega0_error,a,mu`.
pub fn table_csv(rows: &[MuResult]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["m", "n", "p", "r", "omega0", "omega0_error", "a", "mu"])
        .expect("in-memory write");
    for r in rows {
        w.write_record([
            format!("{}", r.m),
            format!("{}", r.n),
            format!("{}", r.p),
            format!("{:.15}", r.r),
            format!("{:.15}", r.omega0.value),
            format!("{:.3e}", r.omega0.error_bound),
            format!("{:.12}", r.a),
            format!("{:.12}", r.mu),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r_examples() {
        assert!((r_from_product(2.0).unwrap() - (2f64.sqrt() - 1.0)).abs() < 1e-16);
        assert!((r_from_product(3.0).unwrap() - 0.366025).abs() < 1e-6);
        assert_eq!(r_from_product(1.0).unwrap(), 0.5);
        assert!(r_from_product(0.5).is_err());
    }

    #[test]
    fn chain_identities() {
        for om in [0.1, 0.3, 0.483903, 0.4999] {
            let ch = mu_from_omega0(om).unwrap();
            let direct_q = -ch.a + (ch.a * ch.a - 1.0).sqrt();
            assert!((ch.q - direct_q).abs() < 1e-9 * ch.q.abs().max(1e-3));
            assert!((ch.q.abs() - 2.0 * ch.mu / (1.0 + ch.mu * ch.mu)).abs() < 1e-15);
            assert!(ch.q < 0.0 && ch.q > -1.0 && ch.mu > 0.0 && ch.mu < 1.0);
        }
        assert!(mu_from_omega0(0.5).is_err());
        assert!(mu_from_omega0(0.0).is_err());
    }

    #[test]
    fn chain_at_published_inputs() {
        let ch = mu_from_omega0(0.483903).unwrap();
        assert!((ch.a - 9.91706).abs() < 2e-3);
        let ch = mu_from_a(9.91706);
        assert!((ch.mu - 0.0252896).abs() < 1e-7);
        assert!((ch.q.abs() - 0.050546).abs() < 1e-6);
    }

    #[test]
    fn length_family() {
        let l = length_of_product(2.0);
        assert!((l - 2.0 * (3.0 + 2.0 * 2f64.sqrt()).ln()).abs() < 1e-14);
        assert!((length_of_product(3.0) - 2.0 * 5f64.acosh()).abs() < 1e-14);
        let p = product_of_length((3.0 + 2.0 * 2f64.sqrt()).ln());
        assert!((p - (1.0 + 2f64.sqrt()) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn hempel_smith_value() {
        let t = hempel_smith_tstar();
        assert!((t - 0.0132889).abs() < 1e-6);
        assert!(t > 0.0132889);
    }

    #[test]
    fn two_point_examples() {
        let mu = 0.0252896;
        let z = |x: f64| Complex64::new(x, 0.0);
        let tp = two_point_admissible(z(-mu), z(mu), mu).unwrap();
        assert!((tp.pseudo_dist - tp.threshold).abs() < 1e-16);
        assert!(tp.admissible_holomorphic);
        assert!(!tp.admissible_rational);
        let tp = two_point_admissible(z(0.0), z(0.0), mu).unwrap();
        assert_eq!(tp.pseudo_dist, 0.0);
        assert!(!tp.admissible_holomorphic);
        let tp = two_point_admissible(z(0.0), z(0.5), mu).unwrap();
        assert!((tp.pseudo_dist - 0.5).abs() < 1e-16);
        assert!(tp.admissible_holomorphic && tp.admissible_rational);
        assert!(two_point_admissible(z(1.0), z(0.0), mu).is_err());
    }

    #[test]
    fn mu_two_one() {
        let r = mu(2, 1, &PipelineConfig::default()).unwrap();
        assert!((r.omega0.value - 0.48390330007).abs() < 1e-10);
        assert!((r.mu - 0.0252896).abs() < 1e-6);
        assert!((r.q.abs() - r.threshold()).abs() < 1e-12);
        assert!(mu(1, 1, &PipelineConfig::default()).is_err());
        assert!(mu(0, 2, &PipelineConfig::default()).is_err());
    }

    #[test]
    fn product_dependence_only() {
        let cfg = PipelineConfig::default();
        let a = mu(4, 1, &cfg).unwrap().mu;
        let b = mu(1, 4, &cfg).unwrap().mu;
        let c = mu_p(4.0, &cfg).unwrap().mu;
        assert_eq!(a, b);
        assert!((a - c).abs() < 1e-12);
    }
}
