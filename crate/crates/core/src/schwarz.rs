//! Harmonic measure at the center of `Q3(r)`: the unit disk minus two disks
//! of radius `r` internally tangent at `-1` and `+1`.
//!
//! `G_L` is the unit disk minus the left disk only. Under `w = 1/(z + 1)` it
//! becomes the strip `1/2 < Re w < 1/(2r)`, whose Poisson kernel is explicit,
//! so Dirichlet problems on `G_L` (and on `G_R = -G_L`) are solved by one
//! quadrature over the circle `L`. The alternating Schwarz iteration between
//! `G_L` and `G_R` then gives the harmonic measure as an alternating series
//! with decreasing terms, which brackets the limit.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_NODES: usize = 512;
pub const DEFAULT_MAX_ITER: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TangentCircleDomain {
    pub r: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    L,
    R,
}

impl TangentCircleDomain {
    pub fn new(r: f64) -> Result<Self> {
        if !(r > 0.0 && r < 0.5) {
            return Err(Error::domain(format!("radius {r} outside (0, 1/2)")));
        }
        Ok(TangentCircleDomain { r })
    }

    /// Center of the excluded disk on the given side.
    pub fn center(&self, side: Side) -> f64 {
        match side {
            Side::L => -1.0 + self.r,
            Side::R => 1.0 - self.r,
        }
    }

    /// Point of the side circle at angle `theta`, measured from its center.
    /// `R` uses the mirrored parametrization `z_R(theta) = -z_L(theta)`.
    pub fn circle_point(&self, side: Side, theta: f64) -> Complex64 {
        let zl = Complex64::new(-1.0 + self.r, 0.0) + Complex64::from_polar(self.r, theta);
        match side {
            Side::L => zl,
            Side::R => -zl,
        }
    }

    /// Whether `z` lies in `G_side`: inside the unit disk and outside that
    /// side's excluded disk.
    pub fn in_subdomain(&self, side: Side, z: Complex64) -> bool {
        z.norm() < 1.0 && (z - self.center(side)).norm() > self.r
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.in_subdomain(Side::L, z) && self.in_subdomain(Side::R, z)
    }
}

/// Samples of a function on a side circle at the nodes
/// `theta_j = -pi + (j + 1/2) 2 pi / N`. Values between nodes come from the
/// trigonometric interpolant.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryTrace {
    pub values: Vec<f64>,
}

pub fn node_angle(j: usize, n: usize) -> f64 {
    -PI + (j as f64 + 0.5) * 2.0 * PI / n as f64
}

impl BoundaryTrace {
    pub fn constant(c: f64, n: usize) -> Self {
        BoundaryTrace { values: vec![c; n] }
    }

    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Self {
        BoundaryTrace {
            values: (0..n).map(|j| f(node_angle(j, n))).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Trigonometric interpolant at `theta`.
    pub fn eval(&self, theta: f64) -> f64 {
        let n = self.values.len();
        let nf = n as f64;
        let mut acc = 0.0;
        for (j, &v) in self.values.iter().enumerate() {
            let x = theta - node_angle(j, n);
            // Dirichlet-type kernel for an even number of nodes; for odd n
            // the usual sin(n x / 2) / (n sin(x / 2)).
            let s = (x / 2.0).sin();
            let w = if s.abs() < 1e-14 {
                1.0
            } else if n.is_multiple_of(2) {
                (nf * x / 2.0).sin() * (x / 2.0).cos() / (nf * s)
            } else {
                (nf * x / 2.0).sin() / (nf * s)
            };
            acc += v * w;
        }
        acc
    }
}

/// Quadrature weights so that `u(z) = sum_j w_j g(theta_j)` for the harmonic
/// function on `G_L` with data `g` on `L` and zero on the unit circle.
fn left_weights(r: f64, n: usize, z: Complex64) -> Vec<f64> {
    let d = 0.5 / r - 0.5;
    let w = 1.0 / (z + 1.0);
    let x = w.re - 0.5;
    let y = w.im;
    let a = PI * x / d;
    let (sa, ca) = a.sin_cos();
    let dth = 2.0 * PI / n as f64;
    (0..n)
        .map(|j| {
            let th = node_angle(j, n);
            let half = th / 2.0;
            let t = -half.tan() / (2.0 * r);
            let jac = 1.0 / (4.0 * r * half.cos().powi(2));
            // sin(a) / (cosh(s) + cos(a)) with the exponentials scaled down.
            let s = PI * (y - t) / d;
            let e = (-s.abs()).exp();
            let inv = 2.0 * e / (1.0 + e * e + 2.0 * ca * e);
            sa / (2.0 * d) * inv * jac * dth
        })
        .collect()
}

fn kernel_weights(dom: &TangentCircleDomain, side: Side, n: usize, z: Complex64) -> Vec<f64> {
    match side {
        Side::L => left_weights(dom.r, n, z),
        Side::R => left_weights(dom.r, n, -z),
    }
}

/// Value at `z` of the harmonic function on `G_side` with boundary data
/// `data` on the side circle and zero on the unit circle.
pub fn subdomain_dirichlet(
    dom: &TangentCircleDomain,
    side: Side,
    data: &BoundaryTrace,
    z: Complex64,
) -> Result<f64> {
    if data.is_empty() {
        return Err(Error::domain("empty boundary trace"));
    }
    if !dom.in_subdomain(side, z) {
        return Err(Error::domain(format!("point {z} is not inside G_{side:?}")));
    }
    let w = kernel_weights(dom, side, data.len(), z);
    Ok(w.iter().zip(&data.values).map(|(a, b)| a * b).sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HarmonicEstimate {
    pub value: f64,
    pub error_bound: f64,
    pub iterations: usize,
}

/// Full record of one alternating series run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchwarzRun {
    pub estimate: HarmonicEstimate,
    /// Magnitudes of the series terms at the center, including the first
    /// omitted one.
    pub terms: Vec<f64>,
}

impl SchwarzRun {
    pub fn partial_sums(&self) -> Vec<f64> {
        let mut s = 0.0;
        self.terms
            .iter()
            .enumerate()
            .map(|(j, t)| {
                s += if j % 2 == 0 { *t } else { -*t };
                s
            })
            .collect()
    }

    /// CSV with columns `iteration,partial_sum,term`.
    pub fn convergence_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["iteration", "partial_sum", "term"])
            .expect("in-memory write");
        for (j, (s, t)) in self.partial_sums().iter().zip(&self.terms).enumerate() {
            w.write_record([j.to_string(), format!("{s:.17e}"), format!("{t:.17e}")])
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8")
    }
}

/// Alternating Schwarz iteration on one domain. Holds the transfer matrices,
/// so a solver is built once per radius and node count.
pub struct SchwarzSolver {
    dom: TangentCircleDomain,
    n: usize,
    max_iter: usize,
    /// `to_other[side][i][j]`: weight of node `j` on `side` when evaluating the
    /// `G_side` solution at node `i` of the other circle.
    to_other: [Vec<f64>; 2],
    /// Weights for evaluating a `G_side` solution at the center.
    at_center: [Vec<f64>; 2],
}

fn side_index(s: Side) -> usize {
    match s {
        Side::L => 0,
        Side::R => 1,
    }
}

fn other(s: Side) -> Side {
    match s {
        Side::L => Side::R,
        Side::R => Side::L,
    }
}

impl SchwarzSolver {
    pub fn new(r: f64) -> Result<Self> {
        Self::with_nodes(r, DEFAULT_NODES, DEFAULT_MAX_ITER)
    }

    pub fn with_nodes(r: f64, n: usize, max_iter: usize) -> Result<Self> {
        let dom = TangentCircleDomain::new(r)?;
        if n < 8 {
            return Err(Error::domain("at least 8 boundary nodes are required"));
        }
        let build = |side: Side| -> Vec<f64> {
            let mut m = Vec::with_capacity(n * n);
            for i in 0..n {
                let p = dom.circle_point(other(side), node_angle(i, n));
                m.extend(kernel_weights(&dom, side, n, p));
            }
            m
        };
        let to_other = [build(Side::L), build(Side::R)];
        let at_center = [
            kernel_weights(&dom, Side::L, n, Complex64::new(0.0, 0.0)),
            kernel_weights(&dom, Side::R, n, Complex64::new(0.0, 0.0)),
        ];
        Ok(SchwarzSolver {
            dom,
            n,
            max_iter,
            to_other,
            at_center,
        })
    }

    pub fn domain(&self) -> TangentCircleDomain {
        self.dom
    }

    pub fn nodes(&self) -> usize {
        self.n
    }

    /// Harmonic measure of the `side` circle at the center.
    ///
    /// Term `j` is the value at 0 of the `j`-th subdomain solution; solutions
    /// alternate between `G_side` and the opposite subdomain, each taking the
    /// previous one's values as data on its own circle. Stops once the next
    /// term drops below `tol`; that term is the error bound.
    pub fn run(&self, side: Side, tol: f64) -> Result<SchwarzRun> {
        if !(tol > 0.0) {
            return Err(Error::domain("tolerance must be positive"));
        }
        let n = self.n;
        let mut g = vec![1.0; n];
        let mut current = side;
        let mut terms = Vec::new();
        let mut value = 0.0;
        for j in 0..=self.max_iter {
            let k = side_index(current);
            let term: f64 = self.at_center[k].iter().zip(&g).map(|(a, b)| a * b).sum();
            terms.push(term);
            if term < tol {
                return Ok(SchwarzRun {
                    estimate: HarmonicEstimate {
                        value,
                        error_bound: term,
                        iterations: j,
                    },
                    terms,
                });
            }
            value += if j % 2 == 0 { term } else { -term };
            let m = &self.to_other[k];
            g = (0..n)
                .map(|i| {
                    m[i * n..(i + 1) * n]
                        .iter()
                        .zip(&g)
                        .map(|(a, b)| a * b)
                        .sum()
                })
                .collect();
            current = other(current);
        }
        Err(Error::no_convergence(format!(
            "Schwarz series at r = {} still has term {:.3e} after {} iterations",
            self.dom.r,
            terms.last().copied().unwrap_or(f64::NAN),
            self.max_iter
        )))
    }
}

/// Harmonic measure of the left circle at 0 in `Q3(r)`.
pub fn omega0(r: f64, tol: f64) -> Result<HarmonicEstimate> {
    Ok(SchwarzSolver::new(r)?.run(Side::L, tol)?.estimate)
}
