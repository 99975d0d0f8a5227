//! Dispersion relations of the linearised problem, eigenvalue counting,
//! the critical curves C1–C4 and the zero-eigenvalue multiplicity.

use serde::Serialize;
use thiserror::Error;

use crate::specfun::{find_root, first_zero_j1, in_, jn, SpecFunError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectrumError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parameter {value} outside ({lo}, {hi})")]
    OutOfRange { value: f64, lo: f64, hi: f64 },
    #[error("beta0 = 1/4 is the codimension-two point, not on C3 or C4")]
    AtCodimensionTwo,
    #[error("scan step {step} cannot resolve roots near {near}")]
    WindowTooCoarse { step: f64, near: f64 },
    #[error(transparent)]
    Root(#[from] SpecFunError),
}

/// A point (β₀, γ₀) of the linear parameter plane; α₀ = β₀ + γ₀.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParameterPoint {
    pub beta0: f64,
    pub gamma0: f64,
    pub alpha0: f64,
}

impl ParameterPoint {
    pub fn new(beta0: f64, gamma0: f64) -> Self {
        ParameterPoint { beta0, gamma0, alpha0: beta0 + gamma0 }
    }

    pub fn distance(&self, other: &ParameterPoint) -> f64 {
        (self.beta0 - other.beta0).hypot(self.gamma0 - other.gamma0)
    }
}

/// The codimension-two point (¼, 2).
pub const TRIPLE_POINT: ParameterPoint = ParameterPoint { beta0: 0.25, gamma0: 2.0, alpha0: 2.25 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Curve {
    C1,
    C2,
    C3,
    C4,
}

/// Sampling interval (lo, hi] with a fixed step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanWindow {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl ScanWindow {
    pub const MAX_STEP: f64 = 0.05;

    pub fn new(lo: f64, hi: f64, step: f64) -> Self {
        ScanWindow { lo, hi, step }
    }

    pub fn default_imaginary() -> Self {
        ScanWindow::new(0.0, 30.0, 1e-3)
    }

    pub fn default_real() -> Self {
        ScanWindow::new(0.0, 15.0, 1e-3)
    }
}

/// λJ₀(λ) − (γ₀ − β₀λ²)J₁(λ); odd in λ.
pub fn dispersion_real(pt: &ParameterPoint, lambda: f64) -> f64 {
    lambda * jn(0, lambda) - (pt.gamma0 - pt.beta0 * lambda * lambda) * jn(1, lambda)
}

/// Below this the series in s is used, which keeps the cancellation between
/// sI₀ and γ₀I₁ out of the low-order coefficients.
const IMAG_SERIES_MAX: f64 = 1.0;

/// sI₀(s) − (γ₀ + β₀s²)I₁(s); odd in s.
pub fn dispersion_imag(pt: &ParameterPoint, s: f64) -> f64 {
    if s.abs() < IMAG_SERIES_MAX {
        let q = 0.25 * s * s;
        // c_k = q^k / (k! k!), d_k = q^k / (k! (k+1)!)
        let mut c = 1.0;
        let mut d = 1.0;
        let mut d_prev = 0.0;
        let mut sum = 0.0;
        for k in 0..60 {
            if k > 0 {
                let kf = k as f64;
                c *= q / (kf * kf);
                d_prev = d;
                d *= q / (kf * (kf + 1.0));
            }
            // β₀s²I₁ shifts the I₁ series up by one power of q.
            let beta_term = if k > 0 { 2.0 * pt.beta0 * d_prev * q } else { 0.0 };
            let a = c - 0.5 * pt.gamma0 * d - beta_term;
            sum += a;
            if k > 2 && a.abs() <= 1e-18 * sum.abs().max(1e-300) && c < 1e-18 {
                break;
            }
        }
        s * sum
    } else {
        s * in_(0, s) - (pt.gamma0 + pt.beta0 * s * s) * in_(1, s)
    }
}

fn scan_roots<F: Fn(f64) -> f64>(f: F, window: &ScanWindow) -> Result<Vec<f64>, SpectrumError> {
    let ScanWindow { lo, hi, step } = *window;
    if !(lo >= 0.0) || !(hi > lo) || !(step > 0.0) {
        return Err(SpectrumError::InvalidArgument(format!(
            "scan window needs 0 <= lo < hi and step > 0 (lo={lo}, hi={hi}, step={step})"
        )));
    }
    if step > ScanWindow::MAX_STEP {
        return Err(SpectrumError::WindowTooCoarse { step, near: lo });
    }
    let n = ((hi - lo) / step).ceil().max(1.0) as usize;
    let sample = |i: usize| if i == n { hi } else { lo + i as f64 * step };
    let mut roots = Vec::new();
    let mut x0 = if lo == 0.0 { sample(1).min(hi) * 1e-3 } else { lo };
    let mut f0 = f(x0);
    for i in 1..=n {
        let x1 = sample(i);
        let f1 = f(x1);
        if f1 == 0.0 {
            roots.push(x1);
        } else if f0 != 0.0 && f0.signum() != f1.signum() {
            roots.push(find_root(&f, x0, x1, 1e-14)?);
        }
        x0 = x1;
        f0 = f1;
    }
    if let Some(w) = roots.windows(2).find(|w| w[1] - w[0] < 2.0 * step) {
        return Err(SpectrumError::WindowTooCoarse { step, near: w[0] });
    }
    Ok(roots)
}

/// Roots s > 0 of the imaginary dispersion relation inside the window.
pub fn imaginary_roots(pt: &ParameterPoint, window: &ScanWindow) -> Result<Vec<f64>, SpectrumError> {
    scan_roots(|s| dispersion_imag(pt, s), window)
}

/// Roots λ > 0 of the real dispersion relation inside the window.
pub fn real_roots(pt: &ParameterPoint, window: &ScanWindow) -> Result<Vec<f64>, SpectrumError> {
    scan_roots(|l| dispersion_real(pt, l), window)
}

pub fn count_imaginary_pairs(pt: &ParameterPoint, window: &ScanWindow) -> Result<usize, SpectrumError> {
    Ok(imaginary_roots(pt, window)?.len())
}

pub fn count_real_pairs(pt: &ParameterPoint, window: &ScanWindow) -> Result<usize, SpectrumError> {
    Ok(real_roots(pt, window)?.len())
}

/// Point of C2 (collision of imaginary eigenvalues at ±is).
pub fn curve_c2(s: f64) -> ParameterPoint {
    let (i0, i1, i2) = (in_(0, s), in_(1, s), in_(2, s));
    let ratio = i0 / i1;
    ParameterPoint::new(0.5 * (1.0 - i0 * i2 / (i1 * i1)), 0.5 * s * s * (ratio * ratio - 1.0))
}

/// Point of C1 (collision of real eigenvalues at ±k), 0 < k < j₁,₁.
pub fn curve_c1(k: f64) -> Result<ParameterPoint, SpectrumError> {
    let j11 = first_zero_j1();
    if !(k > 0.0 && k < j11) {
        return Err(SpectrumError::OutOfRange { value: k, lo: 0.0, hi: j11 });
    }
    let (j0, j1, j2) = (jn(0, k), jn(1, k), jn(2, k));
    Ok(ParameterPoint::new(
        0.5 * (1.0 - j0 * j2 / (j1 * j1)),
        k * k * (j0 * j0 + j1 * j1) / (2.0 * j1 * j1),
    ))
}

/// (β₀, 2) tagged C3 for β₀ < ¼ and C4 for β₀ > ¼.
pub fn curves_c3_c4(beta0: f64) -> Result<(Curve, ParameterPoint), SpectrumError> {
    if !(beta0 > 0.0) || !beta0.is_finite() {
        return Err(SpectrumError::InvalidArgument(format!("beta0 must be positive, got {beta0}")));
    }
    if beta0 == 0.25 {
        return Err(SpectrumError::AtCodimensionTwo);
    }
    let curve = if beta0 < 0.25 { Curve::C3 } else { Curve::C4 };
    Ok((curve, ParameterPoint::new(beta0, 2.0)))
}

const DEGENERACY_TOL: f64 = 1e-12;

/// Algebraic multiplicity of the zero eigenvalue: 2, 4 on γ₀ = 2, 6 at (¼, 2).
pub fn zero_multiplicity(pt: &ParameterPoint) -> u32 {
    if (pt.gamma0 - 2.0).abs() > DEGENERACY_TOL {
        2
    } else if (pt.beta0 - 0.25).abs() > DEGENERACY_TOL {
        4
    } else {
        6
    }
}

/// Order of vanishing of the imaginary dispersion function at 0 from the
/// least-squares slope of log|D(s)| against log s over [1e-4, 1e-2].
pub fn vanishing_order(pt: &ParameterPoint) -> f64 {
    let n = 21;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..n {
        let x = (1e-4f64).ln() + (100f64).ln() * i as f64 / (n - 1) as f64;
        let y = dispersion_imag(pt, x.exp()).abs().max(1e-300).ln();
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let nf = n as f64;
    (nf * sxy - sx * sy) / (nf * sxx - sx * sx)
}

/// Multiplicity implied by the numerical order of vanishing (1 + nearest odd order).
pub fn estimated_multiplicity(pt: &ParameterPoint) -> u32 {
    let order = vanishing_order(pt);
    let odd = (((order - 1.0) / 2.0).round().max(0.0) * 2.0 + 1.0) as u32;
    odd + 1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveDistance {
    pub curve: Curve,
    pub distance: f64,
    /// Curve parameter of the nearest point (k for C1, s for C2, β₀ for C3/C4).
    pub param: f64,
}

fn golden_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() < 1e-14 * (1.0 + a.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Dense sampling followed by golden-section refinement around the best sample.
fn distance_to_parametric<F: Fn(f64) -> ParameterPoint>(
    pt: &ParameterPoint,
    curve: F,
    params: &[f64],
) -> (f64, f64) {
    let dist = |p: f64| curve(p).distance(pt);
    let (best, _) = params
        .iter()
        .enumerate()
        .map(|(i, &p)| (i, dist(p)))
        .filter(|(_, d)| d.is_finite())
        .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
    let lo = params[best.saturating_sub(1)];
    let hi = params[(best + 1).min(params.len() - 1)];
    let (p, d) = golden_min(dist, lo, hi);
    let endpoint = TRIPLE_POINT.distance(pt);
    if endpoint < d {
        (0.0, endpoint)
    } else {
        (p, d)
    }
}

/// Distance from `pt` to each critical curve, nearest first.
pub fn curve_distances(pt: &ParameterPoint) -> Vec<CurveDistance> {
    let j11 = first_zero_j1();
    let n = 2000;
    let ks: Vec<f64> = (1..n).map(|i| j11 * i as f64 / n as f64).collect();
    let (k, d1) = distance_to_parametric(pt, |k| curve_c1(k).unwrap_or(TRIPLE_POINT), &ks);
    let ss: Vec<f64> = (0..=n)
        .map(|i| (1e-3f64.ln() + (5e4f64).ln() * i as f64 / n as f64).exp())
        .collect();
    let (s, d2) = distance_to_parametric(pt, curve_c2, &ss);
    let half_line = |upper: bool| {
        let inside = if upper { pt.beta0 >= 0.25 } else { pt.beta0 <= 0.25 };
        if inside {
            (pt.beta0, (pt.gamma0 - 2.0).abs())
        } else {
            (0.25, TRIPLE_POINT.distance(pt))
        }
    };
    let (b3, d3) = half_line(false);
    let (b4, d4) = half_line(true);
    let mut out = vec![
        CurveDistance { curve: Curve::C1, distance: d1, param: k },
        CurveDistance { curve: Curve::C2, distance: d2, param: s },
        CurveDistance { curve: Curve::C3, distance: d3, param: b3 },
        CurveDistance { curve: Curve::C4, distance: d4, param: b4 },
    ];
    out.sort_by(|a, b| a.distance.total_cmp(&b.distance));
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub point: ParameterPoint,
    pub imaginary_pair_count: usize,
    pub imaginary_roots: Vec<f64>,
    pub s_window: ScanWindow,
    pub real_pair_count: usize,
    pub real_roots: Vec<f64>,
    pub lambda_window: ScanWindow,
    pub zero_multiplicity: u32,
    pub estimated_multiplicity: u32,
    pub nearest_curves: Vec<CurveDistance>,
}

pub fn classify(pt: &ParameterPoint) -> Result<SpectrumReport, SpectrumError> {
    classify_in(pt, &ScanWindow::default_imaginary(), &ScanWindow::default_real())
}

pub fn classify_in(
    pt: &ParameterPoint,
    s_window: &ScanWindow,
    lambda_window: &ScanWindow,
) -> Result<SpectrumReport, SpectrumError> {
    if !(pt.beta0 > 0.0) || !pt.gamma0.is_finite() {
        return Err(SpectrumError::InvalidArgument(format!(
            "need beta0 > 0 and finite gamma0, got ({}, {})",
            pt.beta0, pt.gamma0
        )));
    }
    let imaginary_roots = imaginary_roots(pt, s_window)?;
    let real_roots = real_roots(pt, lambda_window)?;
    Ok(SpectrumReport {
        point: *pt,
        imaginary_pair_count: imaginary_roots.len(),
        imaginary_roots,
        s_window: *s_window,
        real_pair_count: real_roots.len(),
        real_roots,
        lambda_window: *lambda_window,
        zero_multiplicity: zero_multiplicity(pt),
        estimated_multiplicity: estimated_multiplicity(pt),
        nearest_curves: curve_distances(pt),
    })
}

/// Default parameter range used when sampling each curve.
pub fn curve_range(curve: Curve) -> (f64, f64) {
    match curve {
        Curve::C1 => (0.01, 0.95 * first_zero_j1()),
        Curve::C2 => (0.01, 10.0),
        Curve::C3 => (0.0025, 0.2475),
        Curve::C4 => (0.2525, 2.0),
    }
}

/// `samples` evenly spaced points (param, point) over [lo, hi] on a curve.
pub fn sample_curve(
    curve: Curve,
    samples: usize,
    range: (f64, f64),
) -> Result<Vec<(f64, ParameterPoint)>, SpectrumError> {
    if samples < 2 {
        return Err(SpectrumError::InvalidArgument(format!("need at least 2 samples, got {samples}")));
    }
    let (lo, hi) = range;
    (0..samples)
        .map(|i| {
            let p = lo + (hi - lo) * i as f64 / (samples - 1) as f64;
            let point = match curve {
                Curve::C1 => curve_c1(p)?,
                Curve::C2 => {
                    if !(p > 0.0) {
                        return Err(SpectrumError::OutOfRange { value: p, lo: 0.0, hi: f64::INFINITY });
                    }
                    curve_c2(p)
                }
                Curve::C3 | Curve::C4 => {
                    let (tag, point) = curves_c3_c4(p)?;
                    if tag != curve {
                        return Err(SpectrumError::OutOfRange {
                            value: p,
                            lo: if curve == Curve::C3 { 0.0 } else { 0.25 },
                            hi: if curve == Curve::C3 { 0.25 } else { f64::INFINITY },
                        });
                    }
                    point
                }
            };
            Ok((p, point))
        })
        .collect()
}
