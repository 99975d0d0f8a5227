//! Dimensionless magnetisation laws m₁(s) with m₁(1) = 1 and the derived
//! potentials ν(s) = ∫₀ˢ m₁ and T(η).

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::specfun::{composite_quadrature, find_root};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MagnetisationError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("law is not normalised: m1(1) = {0}")]
    NotNormalised(f64),
}

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A user-supplied law. Without an evaluator, m₁ is taken to be the quadratic
/// Taylor polynomial built from the supplied derivatives at s = 1.
#[derive(Clone)]
pub struct CustomLaw {
    m1: Option<ScalarFn>,
    m1p1: f64,
    m1pp1: f64,
}

impl fmt::Debug for CustomLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomLaw")
            .field("has_evaluator", &self.m1.is_some())
            .field("m1p1", &self.m1p1)
            .field("m1pp1", &self.m1pp1)
            .finish()
    }
}

#[derive(Debug, Clone)]
pub enum MagnetisationLaw {
    Linear,
    Langevin { lambda: f64 },
    Custom(CustomLaw),
}

/// Serialisable summary of a law for reports.
#[derive(Debug, Clone, Serialize, PartialEq)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LawSummary {
    Linear,
    Langevin { lambda: f64 },
    Custom { m1p1: f64, m1pp1: f64 },
}

impl MagnetisationLaw {
    pub fn linear() -> Self {
        MagnetisationLaw::Linear
    }

    pub fn langevin(lambda: f64) -> Result<Self, MagnetisationError> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(MagnetisationError::InvalidArgument(format!(
                "Langevin parameter must be positive, got {lambda}"
            )));
        }
        Ok(MagnetisationLaw::Langevin { lambda })
    }

    /// Custom law known only through m₁′(1) and m₁″(1).
    pub fn custom(m1p1: f64, m1pp1: f64) -> Result<Self, MagnetisationError> {
        if !m1p1.is_finite() || !m1pp1.is_finite() {
            return Err(MagnetisationError::InvalidArgument(
                "custom derivatives must be finite".into(),
            ));
        }
        Ok(MagnetisationLaw::Custom(CustomLaw { m1: None, m1p1, m1pp1 }))
    }

    /// Custom law with an evaluator; rejected unless m₁(1) = 1 to 1e-12.
    pub fn custom_with(m1: ScalarFn, m1p1: f64, m1pp1: f64) -> Result<Self, MagnetisationError> {
        let at_one = m1(1.0);
        if (at_one - 1.0).abs() > 1e-12 {
            return Err(MagnetisationError::NotNormalised(at_one));
        }
        let MagnetisationLaw::Custom(mut law) = Self::custom(m1p1, m1pp1)? else {
            unreachable!()
        };
        law.m1 = Some(m1);
        Ok(MagnetisationLaw::Custom(law))
    }

    pub fn summary(&self) -> LawSummary {
        match self {
            MagnetisationLaw::Linear => LawSummary::Linear,
            MagnetisationLaw::Langevin { lambda } => LawSummary::Langevin { lambda: *lambda },
            MagnetisationLaw::Custom(c) => LawSummary::Custom { m1p1: c.m1p1, m1pp1: c.m1pp1 },
        }
    }

    fn eval(&self, s: f64) -> f64 {
        match self {
            MagnetisationLaw::Linear => s,
            MagnetisationLaw::Langevin { lambda } => langevin_fn(lambda * s) / langevin_fn(*lambda),
            MagnetisationLaw::Custom(c) => match &c.m1 {
                Some(f) => f(s),
                None => 1.0 + c.m1p1 * (s - 1.0) + 0.5 * c.m1pp1 * (s - 1.0) * (s - 1.0),
            },
        }
    }

    /// Soft checks on positivity and monotonicity over s ∈ (0, 5]; returns warnings.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        let samples: Vec<f64> = (1..=500).map(|i| i as f64 * 0.01).collect();
        let values: Vec<f64> = samples.iter().map(|&s| self.eval(s)).collect();
        if let Some(i) = values.iter().position(|&v| v < 0.0) {
            out.push(format!("m1 is negative at s = {}", samples[i]));
        }
        if let Some(i) = values.windows(2).position(|w| w[1] < w[0]) {
            out.push(format!("m1 is not increasing near s = {}", samples[i]));
        }
        out
    }
}

// Series of coth x − 1/x and its first two derivatives, used for |x| < 0.3.
const LANGEVIN_SERIES: [f64; 10] = [
    1.0 / 3.0,
    -1.0 / 45.0,
    2.0 / 945.0,
    -1.0 / 4725.0,
    2.0 / 93555.0,
    -1382.0 / 638_512_875.0,
    4.0 / 18_243_225.0,
    -3617.0 / 162_820_783_125.0,
    87734.0 / 38_979_295_480_125.0,
    -349_222.0 / 1_531_329_465_290_625.0,
];
const SERIES_CUTOFF: f64 = 0.3;

/// Langevin function L(x) = coth x − 1/x.
fn langevin_fn(x: f64) -> f64 {
    if x.abs() < SERIES_CUTOFF {
        let x2 = x * x;
        LANGEVIN_SERIES.iter().rev().fold(0.0, |acc, c| acc * x2 + c) * x
    } else {
        let q = (-2.0 * x.abs()).exp();
        ((1.0 + q) / (1.0 - q)).copysign(x) - 1.0 / x
    }
}

fn langevin_d1(x: f64) -> f64 {
    if x.abs() < SERIES_CUTOFF {
        let x2 = x * x;
        LANGEVIN_SERIES
            .iter()
            .enumerate()
            .rev()
            .fold(0.0, |acc, (n, c)| acc * x2 + c * (2 * n + 1) as f64)
    } else {
        let e = (-x.abs()).exp();
        let csch = 2.0 * e / (1.0 - e * e);
        1.0 / (x * x) - csch * csch
    }
}

fn langevin_d2(x: f64) -> f64 {
    if x.abs() < SERIES_CUTOFF {
        let x2 = x * x;
        LANGEVIN_SERIES
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (n, c)| acc * x2 + c * ((2 * n + 1) * 2 * n) as f64)
            * x
    } else {
        let e = (-x.abs()).exp();
        let csch = 2.0 * e / (1.0 - e * e);
        let coth = ((1.0 + e * e) / (1.0 - e * e)).copysign(x);
        2.0 * csch * csch * coth - 2.0 / (x * x * x)
    }
}

pub fn m1(law: &MagnetisationLaw, s: f64) -> Result<f64, MagnetisationError> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(MagnetisationError::InvalidArgument(format!("m1 needs s > 0, got {s}")));
    }
    Ok(law.eval(s))
}

/// (m₁′(1), m₁″(1)).
pub fn m1_derivs_at_1(law: &MagnetisationLaw) -> (f64, f64) {
    match law {
        MagnetisationLaw::Linear => (1.0, 0.0),
        MagnetisationLaw::Langevin { lambda } => {
            let l = langevin_fn(*lambda);
            (lambda * langevin_d1(*lambda) / l, lambda * lambda * langevin_d2(*lambda) / l)
        }
        MagnetisationLaw::Custom(c) => (c.m1p1, c.m1pp1),
    }
}

fn panels_for(width: f64) -> usize {
    (width.abs() / 0.25).ceil().max(1.0) as usize
}

/// ν(s) = ∫₀ˢ m₁(t) dt.
pub fn nu(law: &MagnetisationLaw, s: f64) -> Result<f64, MagnetisationError> {
    if !(s >= 0.0) || !s.is_finite() {
        return Err(MagnetisationError::InvalidArgument(format!("nu needs s >= 0, got {s}")));
    }
    Ok(match law {
        MagnetisationLaw::Linear => 0.5 * s * s,
        _ => composite_quadrature(|t| law.eval(t), 0.0, s, panels_for(s)),
    })
}

fn check_eta(eta: f64) -> Result<(), MagnetisationError> {
    if !(eta > -1.0) || !eta.is_finite() {
        return Err(MagnetisationError::InvalidArgument(format!("need eta > -1, got {eta}")));
    }
    Ok(())
}

fn t_prime_unchecked(law: &MagnetisationLaw, eta: f64) -> f64 {
    let scale = 1.0 + eta;
    match law {
        MagnetisationLaw::Linear => 0.5 / scale - 0.5 * scale,
        _ => {
            let upper = 1.0 / scale;
            scale * composite_quadrature(|t| law.eval(t), 1.0, upper, panels_for(upper - 1.0))
        }
    }
}

/// T′(η) = (ν(1/(1+η)) − ν(1))(1+η).
pub fn t_prime(law: &MagnetisationLaw, eta: f64) -> Result<f64, MagnetisationError> {
    check_eta(eta)?;
    Ok(t_prime_unchecked(law, eta))
}

/// T(η) = ∫₀^η T′.
pub fn t_energy(law: &MagnetisationLaw, eta: f64) -> Result<f64, MagnetisationError> {
    check_eta(eta)?;
    Ok(match law {
        MagnetisationLaw::Linear => 0.5 * eta.ln_1p() - 0.25 * eta * (2.0 + eta),
        _ => {
            let panels = (eta.abs() / 0.05).ceil().max(1.0) as usize;
            composite_quadrature(|x| t_prime_unchecked(law, x), 0.0, eta, panels)
        }
    })
}

/// μ(s) = 1 + m₁(s)/s.
pub fn permeability(law: &MagnetisationLaw, s: f64) -> Result<f64, MagnetisationError> {
    Ok(1.0 + m1(law, s)? / s)
}

/// The Langevin parameter λ* at which m₁′(1) = 6/α₀.
pub fn langevin_lambda_star(alpha0: f64) -> Result<f64, MagnetisationError> {
    if !(alpha0 > 6.0) || !alpha0.is_finite() {
        return Err(MagnetisationError::OutOfRange(format!(
            "threshold needs alpha0 > 6, got {alpha0}"
        )));
    }
    let target = 6.0 / alpha0;
    let g = |lambda: f64| lambda * langevin_d1(lambda) / langevin_fn(lambda) - target;
    let lo = 1e-8;
    let mut hi = 1.0;
    while g(hi) > 0.0 {
        hi *= 2.0;
        if hi > 1e8 {
            return Err(MagnetisationError::OutOfRange("no bracket for lambda*".into()));
        }
    }
    find_root(g, lo, hi, 1e-15).map_err(|e| MagnetisationError::OutOfRange(e.to_string()))
}

/// (α, β) from current J, jet radius R, speed c, surface tension σ,
/// vacuum permeability μ₀ and susceptibility χ.
pub fn nondimensionalize(
    current: f64,
    radius: f64,
    speed: f64,
    sigma: f64,
    mu0: f64,
    chi: f64,
) -> Result<(f64, f64), MagnetisationError> {
    for (name, v) in [
        ("J", current),
        ("R", radius),
        ("c", speed),
        ("sigma", sigma),
        ("mu0", mu0),
        ("chi", chi),
    ] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(MagnetisationError::InvalidArgument(format!(
                "{name} must be positive, got {v}"
            )));
        }
    }
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    let alpha = mu0 * current * current * chi / (4.0 * pi2 * radius * radius * speed * speed);
    let beta = sigma / (speed * speed * radius);
    Ok((alpha, beta))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m1_examples() {
        assert_eq!(m1(&MagnetisationLaw::Linear, 2.0).unwrap(), 2.0);
        for lambda in [0.01, 1.0, 7.0, 40.0] {
            let law = MagnetisationLaw::langevin(lambda).unwrap();
            assert!((m1(&law, 1.0).unwrap() - 1.0).abs() < 1e-12);
        }
        let law = MagnetisationLaw::langevin(1e-3).unwrap();
        assert!((m1(&law, 0.7).unwrap() - 0.7).abs() < 1e-6);
        assert!(m1(&law, 0.0).is_err());
    }

    #[test]
    fn langevin_branches_join_smoothly() {
        for f in [langevin_fn, langevin_d1, langevin_d2] {
            let below = f(SERIES_CUTOFF * (1.0 - 1e-12));
            let above = f(SERIES_CUTOFF * (1.0 + 1e-12));
            assert!((below - above).abs() < 1e-12 * below.abs().max(1.0), "{below} {above}");
        }
    }

    #[test]
    fn derivatives_at_one() {
        assert_eq!(m1_derivs_at_1(&MagnetisationLaw::Linear), (1.0, 0.0));
        let law = MagnetisationLaw::langevin(1.0).unwrap();
        let (p, pp) = m1_derivs_at_1(&law);
        let h = 1e-5;
        let fd = (law.eval(1.0 + h) - law.eval(1.0 - h)) / (2.0 * h);
        assert!((p - fd).abs() < 1e-9);
        assert!((p - 0.881_492_763_966).abs() < 1e-10);
        let h = 1e-4;
        let fd2 = (law.eval(1.0 + h) - 2.0 + law.eval(1.0 - h)) / (h * h);
        assert!((pp - fd2).abs() < 1e-6);
    }

    #[test]
    fn small_lambda_slope() {
        // coth x − 1/x = x/3 − x³/45 + … gives m₁′(1) = 1 − 2λ²/15 + O(λ⁴).
        let lambda = 1e-2;
        let (p, _) = m1_derivs_at_1(&MagnetisationLaw::langevin(lambda).unwrap());
        assert!((p - (1.0 - 2.0 * lambda * lambda / 15.0)).abs() < 1e-8);
    }

    #[test]
    fn nu_and_t() {
        let lin = MagnetisationLaw::Linear;
        assert_eq!(nu(&lin, 0.0).unwrap(), 0.0);
        assert_eq!(nu(&lin, 1.0).unwrap(), 0.5);
        assert_eq!(t_energy(&lin, 0.0).unwrap(), 0.0);
        assert_eq!(t_prime(&lin, 0.0).unwrap(), 0.0);
        assert!((t_energy(&lin, 0.1).unwrap() + 0.004_844_9).abs() < 1e-7);
        assert!(t_energy(&lin, -1.0).is_err());
    }

    #[test]
    fn langevin_t_matches_generic_path() {
        // A custom law wrapping s ↦ s must reproduce the linear closed forms.
        let wrapped =
            MagnetisationLaw::custom_with(Arc::new(|s| s), 1.0, 0.0).unwrap();
        for eta in [-0.3, 0.05, 0.4] {
            let a = t_energy(&wrapped, eta).unwrap();
            let b = t_energy(&MagnetisationLaw::Linear, eta).unwrap();
            assert!((a - b).abs() < 1e-13, "{eta}: {a} vs {b}");
        }
    }

    #[test]
    fn lambda_star() {
        assert!(matches!(langevin_lambda_star(5.0), Err(MagnetisationError::OutOfRange(_))));
        let l = langevin_lambda_star(8.0).unwrap();
        let (p, _) = m1_derivs_at_1(&MagnetisationLaw::langevin(l).unwrap());
        assert!((p - 0.75).abs() < 1e-12);
    }

    #[test]
    fn nondimensional_groups() {
        let two_pi = 2.0 * std::f64::consts::PI;
        let (a, b) = nondimensionalize(two_pi, 1.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert!((a - 1.0).abs() < 1e-14 && (b - 1.0).abs() < 1e-14);
        let (a2, b2) = nondimensionalize(two_pi, 1.0, 2.0, 1.0, 1.0, 1.0).unwrap();
        assert!((a2 - 0.25).abs() < 1e-14 && (b2 - 0.25).abs() < 1e-14);
        assert!(nondimensionalize(two_pi, 1.0, 1.0, 0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn permeability_values() {
        assert_eq!(permeability(&MagnetisationLaw::Linear, 3.7).unwrap(), 2.0);
        let law = MagnetisationLaw::langevin(5.0).unwrap();
        assert!((permeability(&law, 1.0).unwrap() - 2.0).abs() < 1e-12);
        let want = 1.0 + m1(&law, 3.0).unwrap() / 3.0;
        assert_eq!(permeability(&law, 3.0).unwrap(), want);
    }

    #[test]
    fn custom_rejects_unnormalised() {
        let r = MagnetisationLaw::custom_with(Arc::new(|s| 2.0 * s), 2.0, 0.0);
        assert!(matches!(r, Err(MagnetisationError::NotNormalised(_))));
    }

    #[test]
    fn custom_warnings() {
        let law = MagnetisationLaw::custom(-1.0, 0.0).unwrap();
        assert!(!law.warnings().is_empty());
        assert!(MagnetisationLaw::Linear.warnings().is_empty());
    }
}
