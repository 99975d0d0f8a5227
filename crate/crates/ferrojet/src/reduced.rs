//! Homoclinic orbits of the truncated reduced systems: the planar system
//! Q̈ = Q − aQ² − bQ³, the fourth-order equation
//! u⁗ − 2(1+δ)u″ + u − au² − bu³ = 0 and the real envelope equation.

use serde::Serialize;
use thiserror::Error;

use crate::banded::BandMatrix;
use crate::specfun::{fd_weights, find_root};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReducedError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("no turning point on the {branch:?} branch for a = {a}, b = {b}")]
    NoTurningPoint { a: f64, b: f64, branch: Branch },
    #[error("Newton iteration diverged after {} steps", trace.len())]
    NewtonDivergence { trace: Vec<NewtonStep> },
    #[error("tail amplitude {tail:e} (relative) has not decayed at half-length {half_length}")]
    WindowTooShort { half_length: f64, tail: f64 },
    #[error("orbit does not belong to the requested system: {0}")]
    MismatchedSystem(String),
    #[error("envelope needs c2_1 < 0 and d4 > 0 (got c2_1 = {c2_1}, d4 = {d4})")]
    CoefficientSignError { c2_1: f64, d4: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Positive,
    Negative,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::Positive => 1.0,
            Branch::Negative => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReducedSystem {
    /// Q̈ = Q − aQ² − bQ³
    Planar { a: f64, b: f64 },
    /// u⁗ − 2(1+δ)u″ + u − au² − bu³ = 0
    FourthOrder { delta: f64, a: f64, b: f64 },
    /// ä = −c₂¹μ a − 2d₄a³
    Nls { mu: f64, c2_1: f64, d4: f64 },
}

/// A sampled homoclinic orbit on a symmetric grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomoclinicOrbit {
    pub system: ReducedSystem,
    pub grid: Vec<f64>,
    pub u: Vec<f64>,
    /// `derivatives[k]` holds the (k+1)-th derivative of `u`.
    pub derivatives: Vec<Vec<f64>>,
    pub residual_norm: f64,
    pub energy_drift: f64,
}

impl HomoclinicOrbit {
    pub fn zero(system: ReducedSystem, half_length: f64, nodes: usize) -> Self {
        let grid = symmetric_grid(half_length, nodes);
        let order = match system {
            ReducedSystem::FourthOrder { .. } => 3,
            _ => 2,
        };
        let n = grid.len();
        HomoclinicOrbit {
            system,
            grid,
            u: vec![0.0; n],
            derivatives: vec![vec![0.0; n]; order],
            residual_norm: 0.0,
            energy_drift: 0.0,
        }
    }

    /// Signed value of largest magnitude.
    pub fn amplitude(&self) -> f64 {
        self.u.iter().fold(0.0f64, |m, &v| if v.abs() > m.abs() { v } else { m })
    }

    pub fn max_abs(&self) -> f64 {
        self.u.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// max |u(Z_i) − u(Z_{n−1−i})| over mirrored nodes.
    pub fn symmetry_error(&self) -> f64 {
        let n = self.u.len();
        (0..n / 2).map(|i| (self.u[i] - self.u[n - 1 - i]).abs()).fold(0.0, f64::max)
    }

    /// Largest of |u| at the two ends relative to max |u|.
    pub fn endpoint_decay(&self) -> f64 {
        let m = self.max_abs();
        if m == 0.0 {
            return 0.0;
        }
        self.u[0].abs().max(self.u[self.u.len() - 1].abs()) / m
    }

    /// Cubic Hermite interpolation of u at z, using u′.
    pub fn sample(&self, z: f64) -> Option<f64> {
        let g = &self.grid;
        if z < g[0] || z > g[g.len() - 1] {
            return None;
        }
        let i = match g.binary_search_by(|p| p.total_cmp(&z)) {
            Ok(i) => return Some(self.u[i]),
            Err(i) => i - 1,
        };
        let h = g[i + 1] - g[i];
        let t = (z - g[i]) / h;
        let (y0, y1) = (self.u[i], self.u[i + 1]);
        let (d0, d1) = (self.derivatives[0][i] * h, self.derivatives[0][i + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        Some(
            (2.0 * t3 - 3.0 * t2 + 1.0) * y0
                + (t3 - 2.0 * t2 + t) * d0
                + (-2.0 * t3 + 3.0 * t2) * y1
                + (t3 - t2) * d1,
        )
    }

    /// Index of the crest (largest |u|).
    pub fn crest_index(&self) -> usize {
        self.u
            .iter()
            .enumerate()
            .fold((0, 0.0f64), |acc, (i, v)| if v.abs() > acc.1 { (i, v.abs()) } else { acc })
            .0
    }
}

fn symmetric_grid(half_length: f64, nodes: usize) -> Vec<f64> {
    let n = nodes.max(2);
    let mid = (n - 1) as f64 / 2.0;
    (0..n).map(|i| half_length * (i as f64 - mid) / mid).collect()
}

const D1_CENTRAL: [f64; 5] = [1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0];
const D2_CENTRAL: [f64; 5] = [-1.0 / 12.0, 4.0 / 3.0, -2.5, 4.0 / 3.0, -1.0 / 12.0];

/// Fourth-order central first derivative at interior nodes of a uniform grid.
fn central_d1(values: &[f64], h: f64, j: usize) -> f64 {
    (0..5).map(|k| D1_CENTRAL[k] * values[j + k - 2]).sum::<f64>() / h
}

// ---------------------------------------------------------------- planar

fn planar_rhs(a: f64, b: f64, q: f64) -> f64 {
    q - a * q * q - b * q * q * q
}

fn planar_energy(a: f64, b: f64, q: f64, p: f64) -> f64 {
    0.5 * p * p - 0.5 * q * q + a / 3.0 * q * q * q + 0.25 * b * q * q * q * q
}

/// Max over interior nodes of |Q′ − P| and |P′ − (Q − aQ² − bQ³)|.
fn planar_residual(grid: &[f64], q: &[f64], p: &[f64], a: f64, b: f64) -> f64 {
    let h = grid[1] - grid[0];
    (2..grid.len().saturating_sub(2))
        .map(|j| {
            let r1 = (central_d1(q, h, j) - p[j]).abs();
            let r2 = (central_d1(p, h, j) - planar_rhs(a, b, q[j])).abs();
            r1.max(r2)
        })
        .fold(0.0, f64::max)
}

fn planar_orbit(a: f64, b: f64, grid: Vec<f64>, q: Vec<f64>, p: Vec<f64>) -> HomoclinicOrbit {
    let residual_norm = planar_residual(&grid, &q, &p, a, b);
    let energy_drift =
        q.iter().zip(&p).map(|(&q, &p)| planar_energy(a, b, q, p).abs()).fold(0.0, f64::max);
    let acc: Vec<f64> = q.iter().map(|&q| planar_rhs(a, b, q)).collect();
    HomoclinicOrbit {
        system: ReducedSystem::Planar { a, b },
        grid,
        u: q,
        derivatives: vec![p, acc],
        residual_norm,
        energy_drift,
    }
}

/// Closed-form homoclinics of ü − u + u^m = 0: (3/2)sech²(Z/2) for m = 2
/// and √2 sech Z for m = 3.
pub fn planar_exact(m: u32) -> Result<HomoclinicOrbit, ReducedError> {
    planar_exact_branch(m, Branch::Positive)
}

/// As `planar_exact`; the negative branch exists only for m = 3.
pub fn planar_exact_branch(m: u32, branch: Branch) -> Result<HomoclinicOrbit, ReducedError> {
    let grid = symmetric_grid(30.0, 6001);
    let sg = branch.sign();
    let (a, b, q, p): (f64, f64, Vec<f64>, Vec<f64>) = match (m, branch) {
        (2, Branch::Positive) => {
            let q = grid.iter().map(|z| 1.5 / (0.5 * z).cosh().powi(2)).collect();
            let p = grid
                .iter()
                .map(|z| -1.5 * (0.5 * z).tanh() / (0.5 * z).cosh().powi(2))
                .collect();
            (1.0, 0.0, q, p)
        }
        (3, _) => {
            let r2 = 2f64.sqrt();
            let q = grid.iter().map(|z| sg * r2 / z.cosh()).collect();
            let p = grid.iter().map(|z| -sg * r2 * z.tanh() / z.cosh()).collect();
            (0.0, 1.0, q, p)
        }
        _ => {
            return Err(ReducedError::InvalidArgument(format!(
                "closed form available for m = 2 (positive) and m = 3, got m = {m}, {branch:?}"
            )))
        }
    };
    Ok(planar_orbit(a, b, grid, q, p))
}

/// Smallest-magnitude root of 1 − (2a/3)Q − (b/2)Q² with the sign of `branch`.
pub fn turning_point(a: f64, b: f64, branch: Branch) -> Result<f64, ReducedError> {
    let sg = branch.sign();
    let mut roots = Vec::new();
    if b == 0.0 {
        if a != 0.0 {
            roots.push(1.5 / a);
        }
    } else {
        // (b/2)Q² + (2a/3)Q − 1 = 0, solved without cancellation.
        let (qa, qb, qc) = (0.5 * b, 2.0 * a / 3.0, -1.0);
        let disc = qb * qb - 4.0 * qa * qc;
        if disc >= 0.0 {
            let sgn = if qb >= 0.0 { 1.0 } else { -1.0 };
            let t = -0.5 * (qb + sgn * disc.sqrt());
            if t != 0.0 {
                roots.push(qc / t);
                roots.push(t / qa);
            }
        }
    }
    roots
        .into_iter()
        .filter(|r| r.is_finite() && r * sg > 0.0)
        .min_by(|x, y| x.abs().total_cmp(&y.abs()))
        .ok_or(ReducedError::NoTurningPoint { a, b, branch })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarOptions {
    /// Offset from the saddle along the unstable manifold.
    pub eps0: f64,
    /// Nominal RK4 step.
    pub step: f64,
}

impl Default for PlanarOptions {
    fn default() -> Self {
        PlanarOptions { eps0: 1e-8, step: 1e-3 }
    }
}

fn rk4_step(a: f64, b: f64, (q, p): (f64, f64), h: f64) -> (f64, f64) {
    let f = |q: f64, p: f64| (p, planar_rhs(a, b, q));
    let k1 = f(q, p);
    let k2 = f(q + 0.5 * h * k1.0, p + 0.5 * h * k1.1);
    let k3 = f(q + 0.5 * h * k2.0, p + 0.5 * h * k2.1);
    let k4 = f(q + h * k3.0, p + h * k3.1);
    (
        q + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
        p + h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
    )
}

pub fn planar_homoclinic(a: f64, b: f64, branch: Branch) -> Result<HomoclinicOrbit, ReducedError> {
    planar_homoclinic_with(a, b, branch, PlanarOptions::default())
}

/// Integrates the unstable manifold from (ε₀, P₀) on the zero energy level
/// up to the symmetric section P = 0 and reflects.
pub fn planar_homoclinic_with(
    a: f64,
    b: f64,
    branch: Branch,
    opts: PlanarOptions,
) -> Result<HomoclinicOrbit, ReducedError> {
    if !(opts.eps0 > 0.0 && opts.eps0 < 1e-2) || !(opts.step > 0.0 && opts.step < 0.1) {
        return Err(ReducedError::InvalidArgument(format!(
            "need 0 < eps0 < 1e-2 and 0 < step < 0.1, got {opts:?}"
        )));
    }
    let crest = turning_point(a, b, branch)?;
    let sg = branch.sign();
    let q0 = sg * opts.eps0;
    let p0 = sg * opts.eps0 * (1.0 - 2.0 * a / 3.0 * q0 - 0.5 * b * q0 * q0).sqrt();
    let start = (q0, p0);

    // Locate the crossing of P = 0.
    let mut y = start;
    let mut t = 0.0;
    let max_steps = (200.0 / opts.step) as usize;
    let mut steps = 0;
    loop {
        let next = rk4_step(a, b, y, opts.step);
        if next.1 * sg <= 0.0 {
            break;
        }
        y = next;
        t += opts.step;
        steps += 1;
        if steps > max_steps {
            return Err(ReducedError::InvalidArgument(format!(
                "no crest reached for a = {a}, b = {b} (expected near {crest})"
            )));
        }
    }
    let tau = find_root(|tau| rk4_step(a, b, y, tau).1, 0.0, opts.step, 1e-16)
        .unwrap_or(opts.step);
    let t_crest = t + tau;

    // Second pass with the crest on a grid node.
    let m = (t_crest / opts.step).ceil() as usize;
    let h = t_crest / m as f64;
    let mut qs = Vec::with_capacity(m + 1);
    let mut ps = Vec::with_capacity(m + 1);
    let mut y = start;
    qs.push(y.0);
    ps.push(y.1);
    for _ in 0..m {
        y = rk4_step(a, b, y, h);
        qs.push(y.0);
        ps.push(y.1);
    }
    ps[m] = 0.0;

    let n = 2 * m + 1;
    let grid: Vec<f64> = (0..n).map(|i| (i as f64 - m as f64) * h).collect();
    let mut q = vec![0.0; n];
    let mut p = vec![0.0; n];
    for k in 0..=m {
        q[k] = qs[k];
        p[k] = ps[k];
        q[n - 1 - k] = qs[k];
        p[n - 1 - k] = -ps[k];
    }
    Ok(planar_orbit(a, b, grid, q, p))
}

// ---------------------------------------------------------- fourth order

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NewtonStep {
    pub update_norm: f64,
    pub residual_norm: f64,
}

fn sech_power_derivs(amp: f64, k: f64, n: i32, z: f64) -> [f64; 5] {
    let s = 1.0 / (k * z).cosh();
    let t = (k * z).tanh();
    let nf = n as f64;
    let sn = s.powi(n);
    let sn2 = sn * s * s;
    let sn4 = sn2 * s * s;
    [
        amp * sn,
        -nf * amp * k * sn * t,
        amp * k * k * (nf * nf * sn - nf * (nf + 1.0) * sn2),
        amp * k.powi(3) * t * (-nf.powi(3) * sn + nf * (nf + 1.0) * (nf + 2.0) * sn2),
        amp * k.powi(4)
            * (nf.powi(4) * sn
                - (nf.powi(3) * (nf + 1.0) + nf * (nf + 1.0) * (nf + 2.0).powi(2)) * sn2
                + nf * (nf + 1.0) * (nf + 2.0) * (nf + 3.0) * sn4),
    ]
}

struct SeedShape {
    delta: f64,
    amp: f64,
    k: f64,
    power: i32,
    a: f64,
    b: f64,
}

fn seed_shape(m: u32) -> Result<SeedShape, ReducedError> {
    match m {
        2 => Ok(SeedShape {
            delta: 1.0 / 12.0,
            amp: 35.0 / 24.0,
            k: 1.0 / 24f64.sqrt(),
            power: 4,
            a: 1.0,
            b: 0.0,
        }),
        3 => Ok(SeedShape {
            delta: 0.25,
            amp: 1.875f64.sqrt(),
            k: 1.0 / 8f64.sqrt(),
            power: 2,
            a: 0.0,
            b: 1.0,
        }),
        _ => Err(ReducedError::InvalidArgument(format!("exact seed needs m in {{2, 3}}, got {m}"))),
    }
}

pub const KAWAHARA_HALF_LENGTH: f64 = 30.0;
pub const KAWAHARA_NODES: usize = 3000;

/// Exact solitary waves at special δ: m = 2 gives δ* = 1/12,
/// u = (35/24)sech⁴(Z/√24); m = 3 gives δ* = 1/4, u = √(15/8)sech²(Z/√8).
pub fn kawahara_exact_seed(m: u32) -> Result<(f64, HomoclinicOrbit), ReducedError> {
    let sh = seed_shape(m)?;
    let grid = symmetric_grid(KAWAHARA_HALF_LENGTH, 2 * KAWAHARA_NODES + 1);
    let d = 1.0 + sh.delta;
    let n = grid.len();
    let mut u = Vec::with_capacity(n);
    let mut ders = vec![Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n)];
    let mut residual = 0.0f64;
    for &z in &grid {
        let w = sech_power_derivs(sh.amp, sh.k, sh.power, z);
        residual = residual
            .max((w[4] - 2.0 * d * w[2] + w[0] - sh.a * w[0] * w[0] - sh.b * w[0].powi(3)).abs());
        u.push(w[0]);
        for (k, der) in ders.iter_mut().enumerate() {
            der.push(w[k + 1]);
        }
    }
    let mut orbit = HomoclinicOrbit {
        system: ReducedSystem::FourthOrder { delta: sh.delta, a: sh.a, b: sh.b },
        grid,
        u,
        derivatives: ders,
        residual_norm: residual,
        energy_drift: 0.0,
    };
    orbit.energy_drift = truncated_energy(&orbit);
    Ok((sh.delta, orbit))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KawaharaOptions {
    pub half_length: f64,
    /// Intervals on the half-line [0, L].
    pub nodes: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub continuation_step: f64,
    /// Sign choice when a = 0 (the equation is odd in u).
    pub branch: Branch,
    /// Number of window doublings allowed when the tail has not decayed.
    pub max_extensions: usize,
}

impl Default for KawaharaOptions {
    fn default() -> Self {
        KawaharaOptions {
            half_length: KAWAHARA_HALF_LENGTH,
            nodes: KAWAHARA_NODES,
            tol: 1e-12,
            max_iter: 50,
            continuation_step: 0.01,
            branch: Branch::Positive,
            max_extensions: 3,
        }
    }
}

/// Discrete fourth-order problem on [0, L] with unknowns (u_j, v_j), v = u″.
struct KawaharaGrid {
    n: usize,
    h: f64,
    boundary_d1: [[f64; 5]; 2],
}

impl KawaharaGrid {
    fn new(half_length: f64, intervals: usize) -> Self {
        let h = half_length / intervals as f64;
        let stencil: Vec<f64> = (0..5).map(|i| i as f64 * h).collect();
        let mut boundary_d1 = [[0.0; 5]; 2];
        for (r, row) in boundary_d1.iter_mut().enumerate() {
            let w = fd_weights(stencil[3 + r], &stencil, 1);
            row.copy_from_slice(&w);
        }
        KawaharaGrid { n: intervals, h, boundary_d1 }
    }

    fn unknowns(&self) -> usize {
        2 * (self.n + 1)
    }

    /// Residual F(x) and, if requested, its Jacobian.
    fn assemble(
        &self,
        x: &[f64],
        delta: f64,
        a: f64,
        b: f64,
        with_jacobian: bool,
    ) -> (Vec<f64>, Option<BandMatrix>) {
        let n = self.n;
        let d = 1.0 + delta;
        let sigma = (2.0 * (1.0 + d)).sqrt();
        let h2 = self.h * self.h;
        let mut f = vec![0.0; self.unknowns()];
        let mut jac = with_jacobian.then(|| BandMatrix::zeros(self.unknowns(), 9, 4));
        let u = |j: usize| x[2 * j];
        let v = |j: usize| x[2 * j + 1];
        for j in 0..n - 1 {
            let (ru, rv) = (2 * j, 2 * j + 1);
            let mut d2u = 0.0;
            let mut d2v = 0.0;
            for (k, w) in D2_CENTRAL.iter().enumerate() {
                let idx = (j as isize + k as isize - 2).unsigned_abs();
                d2u += w * u(idx) / h2;
                d2v += w * v(idx) / h2;
                if let Some(m) = jac.as_mut() {
                    m.add(ru, 2 * idx, -w / h2);
                    m.add(rv, 2 * idx + 1, w / h2);
                }
            }
            let uj = u(j);
            f[ru] = v(j) - d2u;
            f[rv] = d2v - 2.0 * d * v(j) + uj - a * uj * uj - b * uj * uj * uj;
            if let Some(m) = jac.as_mut() {
                m.add(ru, 2 * j + 1, 1.0);
                m.add(rv, 2 * j + 1, -2.0 * d);
                m.add(rv, 2 * j, 1.0 - 2.0 * a * uj - 3.0 * b * uj * uj);
            }
        }
        for (r, j) in [n - 1, n].into_iter().enumerate() {
            let (ru, rv) = (2 * j, 2 * j + 1);
            let w = &self.boundary_d1[r];
            let mut d1u = 0.0;
            let mut d1v = 0.0;
            for (k, wk) in w.iter().enumerate() {
                let idx = n - 4 + k;
                d1u += wk / self.h * u(idx);
                d1v += wk / self.h * v(idx);
                if let Some(m) = jac.as_mut() {
                    m.add(ru, 2 * idx, sigma * wk / self.h);
                    m.add(rv, 2 * idx + 1, wk / self.h);
                    m.add(rv, 2 * idx, wk / self.h);
                }
            }
            f[ru] = v(j) + sigma * d1u + u(j);
            f[rv] = d1v + sigma * v(j) + d1u;
            if let Some(m) = jac.as_mut() {
                m.add(ru, 2 * j + 1, 1.0);
                m.add(ru, 2 * j, 1.0);
                m.add(rv, 2 * j + 1, sigma);
            }
        }
        (f, jac)
    }

    fn newton(
        &self,
        x: &mut Vec<f64>,
        delta: f64,
        a: f64,
        b: f64,
        opts: &KawaharaOptions,
    ) -> Result<Vec<NewtonStep>, ReducedError> {
        let mut trace = Vec::new();
        for _ in 0..opts.max_iter {
            let (f, jac) = self.assemble(x, delta, a, b, true);
            let residual_norm = inf_norm(&f);
            let rhs: Vec<f64> = f.iter().map(|v| -v).collect();
            let dx = match jac.expect("jacobian requested").solve(rhs) {
                Ok(dx) => dx,
                Err(_) => return Err(ReducedError::NewtonDivergence { trace }),
            };
            let update_norm = inf_norm(&dx);
            for (xi, di) in x.iter_mut().zip(&dx) {
                *xi += di;
            }
            trace.push(NewtonStep { update_norm, residual_norm });
            if !update_norm.is_finite() || update_norm > 1e6 {
                return Err(ReducedError::NewtonDivergence { trace });
            }
            let scale = x.iter().step_by(2).fold(1.0f64, |m, v| m.max(v.abs()));
            if update_norm <= opts.tol * scale {
                let (f, _) = self.assemble(x, delta, a, b, false);
                if inf_norm(&f) <= 1e-10 * scale {
                    return Ok(trace);
                }
            }
        }
        Err(ReducedError::NewtonDivergence { trace })
    }
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Outcome of a fourth-order solve, including Newton diagnostics of the final stage.
#[derive(Debug, Clone, PartialEq)]
pub struct KawaharaSolution {
    pub orbit: HomoclinicOrbit,
    pub newton_trace: Vec<NewtonStep>,
    pub continuation_steps: usize,
    pub half_length: f64,
}

/// Even solution of u⁗ − 2(1+δ)u″ + u − au² − bu³ = 0 on [−L, L].
pub fn kawahara_homoclinic(
    delta: f64,
    a: f64,
    b: f64,
    half_length: f64,
    nodes: usize,
) -> Result<HomoclinicOrbit, ReducedError> {
    let opts = KawaharaOptions { half_length, nodes, ..KawaharaOptions::default() };
    Ok(kawahara_solve(delta, a, b, &opts)?.orbit)
}

/// Solve from an explicit initial guess (u, u″ on the half-line nodes).
pub fn kawahara_refine(
    delta: f64,
    a: f64,
    b: f64,
    u0: &[f64],
    v0: &[f64],
    opts: &KawaharaOptions,
) -> Result<KawaharaSolution, ReducedError> {
    validate_kawahara(delta, a, b, opts)?;
    if u0.len() != opts.nodes + 1 || v0.len() != opts.nodes + 1 {
        return Err(ReducedError::InvalidArgument(format!(
            "initial guess must have {} samples",
            opts.nodes + 1
        )));
    }
    let grid = KawaharaGrid::new(opts.half_length, opts.nodes);
    let mut x: Vec<f64> = u0.iter().zip(v0).flat_map(|(&u, &v)| [u, v]).collect();
    let trace = grid.newton(&mut x, delta, a, b, opts)?;
    Ok(KawaharaSolution {
        orbit: assemble_orbit(&grid, &x, delta, a, b),
        newton_trace: trace,
        continuation_steps: 0,
        half_length: opts.half_length,
    })
}

fn validate_kawahara(delta: f64, a: f64, b: f64, opts: &KawaharaOptions) -> Result<(), ReducedError> {
    if !(delta > -0.5) || !delta.is_finite() {
        return Err(ReducedError::InvalidArgument(format!("need delta > -0.5, got {delta}")));
    }
    if a == 0.0 && b == 0.0 || !a.is_finite() || !b.is_finite() {
        return Err(ReducedError::InvalidArgument("need (a, b) != (0, 0)".into()));
    }
    if opts.nodes < 200 {
        return Err(ReducedError::InvalidArgument(format!(
            "need at least 200 nodes, got {}",
            opts.nodes
        )));
    }
    if !(opts.half_length > 0.0) {
        return Err(ReducedError::InvalidArgument("half-length must be positive".into()));
    }
    Ok(())
}

/// Seeded continuation: exact seed → target δ → target cubic/quadratic ratio,
/// with the window doubled while the tail has not decayed.
pub fn kawahara_solve(
    delta: f64,
    a: f64,
    b: f64,
    opts: &KawaharaOptions,
) -> Result<KawaharaSolution, ReducedError> {
    validate_kawahara(delta, a, b, opts)?;
    let mut opts = *opts;
    for _ in 0..=opts.max_extensions {
        let sol = kawahara_solve_window(delta, a, b, &opts)?;
        let tail = tail_amplitude(&sol.orbit, 0.05);
        if tail <= 1e-6 {
            return Ok(sol);
        }
        if opts.half_length * 2.0 > 1e4 {
            break;
        }
        opts.half_length *= 2.0;
        opts.nodes *= 2;
    }
    let sol = kawahara_solve_window(delta, a, b, &opts)?;
    Err(ReducedError::WindowTooShort {
        half_length: opts.half_length,
        tail: tail_amplitude(&sol.orbit, 0.05),
    })
}

/// max |u| over the outer `fraction` of the window, relative to max |u|.
fn tail_amplitude(orbit: &HomoclinicOrbit, fraction: f64) -> f64 {
    let l = orbit.grid[orbit.grid.len() - 1];
    let m = orbit.max_abs();
    if m == 0.0 {
        return 0.0;
    }
    orbit
        .grid
        .iter()
        .zip(&orbit.u)
        .filter(|(z, _)| z.abs() >= (1.0 - fraction) * l)
        .fold(0.0f64, |acc, (_, u)| acc.max(u.abs()))
        / m
}

fn kawahara_solve_window(
    delta: f64,
    a: f64,
    b: f64,
    opts: &KawaharaOptions,
) -> Result<KawaharaSolution, ReducedError> {
    // Normalise: w = a·u solves the problem with (1, b/a²); w = √b·u with (0, 1).
    let (scale, ratio, seed_m) = if a != 0.0 {
        (a, b / (a * a), 2)
    } else if b > 0.0 {
        (b.sqrt() * opts.branch.sign(), 0.0, 3)
    } else {
        return Err(ReducedError::InvalidArgument(
            "pure cubic case needs b > 0 for a solitary wave".into(),
        ));
    };
    let sh = seed_shape(seed_m)?;
    let grid = KawaharaGrid::new(opts.half_length, opts.nodes);
    let mut x = Vec::with_capacity(grid.unknowns());
    for j in 0..=opts.nodes {
        let w = sech_power_derivs(sh.amp, sh.k, sh.power, j as f64 * grid.h);
        x.push(w[0]);
        x.push(w[2]);
    }
    let (qa, qb) = (sh.a, sh.b);
    let mut trace = grid.newton(&mut x, sh.delta, qa, qb, opts)?;
    let mut steps = 0;

    // Continuation in δ.
    let mut current = sh.delta;
    let mut step = opts.continuation_step;
    while (delta - current).abs() > 1e-15 {
        let next = if (delta - current).abs() <= step { delta } else { current + step.copysign(delta - current) };
        let mut trial = x.clone();
        match grid.newton(&mut trial, next, qa, qb, opts) {
            Ok(t) => {
                x = trial;
                trace = t;
                current = next;
                steps += 1;
            }
            Err(e) => {
                step *= 0.5;
                if step < 1e-4 {
                    return Err(e);
                }
            }
        }
    }

    // Continuation in the cubic coefficient of the normalised problem.
    let mut current = 0.0;
    let mut step = 0.05;
    while (ratio - current).abs() > 1e-15 {
        let next = if (ratio - current).abs() <= step { ratio } else { current + step.copysign(ratio - current) };
        let mut trial = x.clone();
        match grid.newton(&mut trial, delta, qa, qb + next, opts) {
            Ok(t) => {
                x = trial;
                trace = t;
                current = next;
                steps += 1;
            }
            Err(e) => {
                step *= 0.5;
                if step < 1e-5 {
                    return Err(e);
                }
            }
        }
    }

    for xi in x.iter_mut() {
        *xi /= scale;
    }
    Ok(KawaharaSolution {
        orbit: assemble_orbit(&grid, &x, delta, a, b),
        newton_trace: trace,
        continuation_steps: steps,
        half_length: opts.half_length,
    })
}

/// Mirrors the half-line solution onto [−L, L] and fills derivatives.
fn assemble_orbit(grid: &KawaharaGrid, x: &[f64], delta: f64, a: f64, b: f64) -> HomoclinicOrbit {
    let n = grid.n;
    let h = grid.h;
    let u: Vec<f64> = x.iter().step_by(2).copied().collect();
    let v: Vec<f64> = x.iter().skip(1).step_by(2).copied().collect();
    // Both u and v are even, so mirrored samples need no sign change.
    let d1 = |f: &[f64], j: usize| -> f64 {
        if j + 2 <= n {
            (0..5)
                .map(|k| D1_CENTRAL[k] * f[(j as isize + k as isize - 2).unsigned_abs()])
                .sum::<f64>()
                / h
        } else {
            let w = &grid.boundary_d1[j + 1 - n];
            (0..5).map(|k| w[k] * f[n - 4 + k]).sum::<f64>() / h
        }
    };
    let up: Vec<f64> = (0..=n).map(|j| d1(&u, j)).collect();
    let uppp: Vec<f64> = (0..=n).map(|j| d1(&v, j)).collect();

    let (f, _) = grid.assemble(x, delta, a, b, false);
    let residual_norm = inf_norm(&f[..2 * (n - 1)]);

    let total = 2 * n + 1;
    let mut zg = vec![0.0; total];
    let mut uu = vec![0.0; total];
    let mut d1v = vec![0.0; total];
    let mut d2v = vec![0.0; total];
    let mut d3v = vec![0.0; total];
    for j in 0..=n {
        for (idx, sign) in [(n + j, 1.0), (n - j, -1.0)] {
            zg[idx] = sign * j as f64 * h;
            uu[idx] = u[j];
            d1v[idx] = sign * up[j];
            d2v[idx] = v[j];
            d3v[idx] = sign * uppp[j];
        }
    }
    let mut orbit = HomoclinicOrbit {
        system: ReducedSystem::FourthOrder { delta, a, b },
        grid: zg,
        u: uu,
        derivatives: vec![d1v, d2v, d3v],
        residual_norm,
        energy_drift: 0.0,
    };
    orbit.energy_drift = truncated_energy(&orbit);
    orbit
}

/// Trajectory (Q₁, Q₂, P₁, P₂) of the first-order truncated system.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FourTrajectory {
    pub grid: Vec<f64>,
    pub q1: Vec<f64>,
    pub q2: Vec<f64>,
    pub p1: Vec<f64>,
    pub p2: Vec<f64>,
    pub delta: f64,
    pub a: f64,
    pub b: f64,
    /// Max residual of the four first-order equations at interior nodes.
    pub residual_norm: f64,
}

/// Q₂ = P₁′, P₂ = P₁″ − ⅔dP₁, Q₁ = P₁‴ − (4/3)dP₁′ with P₁ = u, d = 1 + δ.
pub fn scalar_to_system_region2(
    orbit: &HomoclinicOrbit,
    delta: f64,
) -> Result<FourTrajectory, ReducedError> {
    let ReducedSystem::FourthOrder { delta: od, a, b } = orbit.system else {
        return Err(ReducedError::MismatchedSystem(format!("{:?}", orbit.system)));
    };
    if (od - delta).abs() > 1e-12 {
        return Err(ReducedError::MismatchedSystem(format!(
            "orbit solved at delta = {od}, requested {delta}"
        )));
    }
    if orbit.derivatives.len() < 3 {
        return Err(ReducedError::MismatchedSystem("orbit lacks third-derivative data".into()));
    }
    let d = 1.0 + delta;
    let p1 = orbit.u.clone();
    let q2 = orbit.derivatives[0].clone();
    let p2: Vec<f64> = orbit.derivatives[1].iter().zip(&p1).map(|(v, u)| v - 2.0 / 3.0 * d * u).collect();
    let q1: Vec<f64> = orbit.derivatives[2]
        .iter()
        .zip(&q2)
        .map(|(w, up)| w - 4.0 / 3.0 * d * up)
        .collect();
    let h = orbit.grid[1] - orbit.grid[0];
    let residual_norm = (2..orbit.grid.len().saturating_sub(2))
        .map(|j| {
            let e1 = central_d1(&q1, h, j)
                - (-p1[j] + 2.0 / 3.0 * d * p2[j] + 4.0 / 9.0 * d * d * p1[j] + a * p1[j] * p1[j]
                    + b * p1[j].powi(3));
            let e2 = central_d1(&q2, h, j) - (p2[j] + 2.0 / 3.0 * d * p1[j]);
            let e3 = central_d1(&p1, h, j) - q2[j];
            let e4 = central_d1(&p2, h, j) - (q1[j] + 2.0 / 3.0 * d * q2[j]);
            e1.abs().max(e2.abs()).max(e3.abs()).max(e4.abs())
        })
        .fold(0.0, f64::max);
    Ok(FourTrajectory { grid: orbit.grid.clone(), q1, q2, p1, p2, delta, a, b, residual_norm })
}

/// ½P₂² − ½P₁² − Q₁Q₂ − ⅓d(Q₂² − 2P₁P₂) + (2/9)d²P₁² + (a/3)P₁³ + (b/4)P₁⁴.
pub fn four_energy(d: f64, a: f64, b: f64, q1: f64, q2: f64, p1: f64, p2: f64) -> f64 {
    0.5 * p2 * p2 - 0.5 * p1 * p1 - q1 * q2 - d / 3.0 * (q2 * q2 - 2.0 * p1 * p2)
        + 2.0 / 9.0 * d * d * p1 * p1
        + a / 3.0 * p1.powi(3)
        + 0.25 * b * p1.powi(4)
}

// ------------------------------------------------------------- envelope

/// a(z) = r₀ sech(ρz) with ρ = √(−c₂¹μ), r₀ = ρ/√d₄.
pub fn nls_envelope(mu: f64, c2_1: f64, d4: f64) -> Result<HomoclinicOrbit, ReducedError> {
    if !(c2_1 < 0.0 && d4 > 0.0) {
        return Err(ReducedError::CoefficientSignError { c2_1, d4 });
    }
    if !(mu >= 0.0) || !mu.is_finite() {
        return Err(ReducedError::InvalidArgument(format!("need mu >= 0, got {mu}")));
    }
    let system = ReducedSystem::Nls { mu, c2_1, d4 };
    if mu == 0.0 {
        return Ok(HomoclinicOrbit::zero(system, 1.0, 201));
    }
    let rho = (-c2_1 * mu).sqrt();
    let r0 = rho / d4.sqrt();
    let grid = symmetric_grid(40.0 / rho, 4001);
    let n = grid.len();
    let mut u = Vec::with_capacity(n);
    let mut up = Vec::with_capacity(n);
    let mut upp = Vec::with_capacity(n);
    let mut residual = 0.0f64;
    for &z in &grid {
        let s = 1.0 / (rho * z).cosh();
        let t = (rho * z).tanh();
        let a = r0 * s;
        let acc = r0 * rho * rho * (s - 2.0 * s * s * s);
        residual = residual.max((acc - (-c2_1 * mu * a - 2.0 * d4 * a * a * a)).abs());
        u.push(a);
        up.push(-r0 * rho * s * t);
        upp.push(acc);
    }
    let mut orbit = HomoclinicOrbit {
        system,
        grid,
        u,
        derivatives: vec![up, upp],
        residual_norm: residual,
        energy_drift: 0.0,
    };
    orbit.energy_drift = truncated_energy(&orbit);
    Ok(orbit)
}

/// Largest deviation from zero of the conserved truncated Hamiltonian along the orbit.
pub fn truncated_energy(orbit: &HomoclinicOrbit) -> f64 {
    let n = orbit.u.len();
    let value = |j: usize| -> f64 {
        let u = orbit.u[j];
        let up = orbit.derivatives[0][j];
        match orbit.system {
            ReducedSystem::Planar { a, b } => planar_energy(a, b, u, up),
            ReducedSystem::Nls { mu, c2_1, d4 } => {
                0.5 * up * up + 0.5 * c2_1 * mu * u * u + 0.5 * d4 * u.powi(4)
            }
            ReducedSystem::FourthOrder { delta, a, b } => {
                let d = 1.0 + delta;
                let upp = orbit.derivatives[1][j];
                let uppp = orbit.derivatives[2][j];
                four_energy(
                    d,
                    a,
                    b,
                    uppp - 4.0 / 3.0 * d * up,
                    up,
                    u,
                    upp - 2.0 / 3.0 * d * u,
                )
            }
        }
    };
    (0..n).map(|j| value(j).abs()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_planar_orbits() {
        let o = planar_exact(2).unwrap();
        assert!((o.amplitude() - 1.5).abs() < 1e-15);
        assert!(o.energy_drift < 1e-14);
        assert!(o.symmetry_error() == 0.0);
        let o = planar_exact(3).unwrap();
        assert!((o.amplitude() - 2f64.sqrt()).abs() < 1e-15);
        assert!(planar_exact(4).is_err());
        assert!(planar_exact_branch(2, Branch::Negative).is_err());
    }

    #[test]
    fn turning_points() {
        assert!((turning_point(1.0, 0.0, Branch::Positive).unwrap() - 1.5).abs() < 1e-15);
        assert!(turning_point(1.0, 0.0, Branch::Negative).is_err());
        assert!((turning_point(0.0, 1.0, Branch::Negative).unwrap() + 2f64.sqrt()).abs() < 1e-15);
        let want_pos = -1.0 / 3.0 + (1.0f64 / 9.0 + 2.0).sqrt();
        let want_neg = -1.0 / 3.0 - (1.0f64 / 9.0 + 2.0).sqrt();
        assert!((turning_point(0.5, 1.0, Branch::Positive).unwrap() - want_pos).abs() < 1e-14);
        assert!((turning_point(0.5, 1.0, Branch::Negative).unwrap() - want_neg).abs() < 1e-14);
        assert!(turning_point(0.0, -1.0, Branch::Positive).is_err());
        // a < 0 with b = 0 only has a negative crest.
        assert!((turning_point(-2.0, 0.0, Branch::Negative).unwrap() + 0.75).abs() < 1e-15);
    }

    #[test]
    fn seeds_solve_their_equations() {
        let (d, o) = kawahara_exact_seed(2).unwrap();
        assert_eq!(d, 1.0 / 12.0);
        assert!(o.residual_norm < 1e-10);
        assert!((o.amplitude() - 35.0 / 24.0).abs() < 1e-15);
        let (d, o) = kawahara_exact_seed(3).unwrap();
        assert_eq!(d, 0.25);
        assert!(o.residual_norm < 1e-10);
        assert!(kawahara_exact_seed(4).is_err());
    }

    #[test]
    fn envelope_signs() {
        assert!(matches!(nls_envelope(0.04, 1.0, 1.0), Err(ReducedError::CoefficientSignError { .. })));
        let o = nls_envelope(0.04, -1.0, 1.0).unwrap();
        assert!((o.amplitude() - 0.2).abs() < 1e-15);
        assert!(o.residual_norm < 1e-12);
        assert_eq!(nls_envelope(0.0, -1.0, 1.0).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn zero_orbit_energy() {
        let z = HomoclinicOrbit::zero(ReducedSystem::FourthOrder { delta: 0.1, a: 1.0, b: 0.0 }, 10.0, 101);
        assert_eq!(truncated_energy(&z), 0.0);
        let t = scalar_to_system_region2(&z, 0.1).unwrap();
        assert!(t.q1.iter().chain(&t.p2).all(|&v| v == 0.0));
    }
}
