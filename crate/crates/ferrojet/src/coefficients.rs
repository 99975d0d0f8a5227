//! Closed-form normal-form coefficients for the three bifurcation regions,
//! parameter maps and existence predicates.

use serde::Serialize;
use thiserror::Error;

use crate::magnetisation::{m1_derivs_at_1, LawSummary, MagnetisationLaw};
use crate::specfun::in_;
use crate::spectrum::{curve_c2, ParameterPoint};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoefficientError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("tau1 = {tau1} is too close to zero at s = {s}")]
    TauDegenerate { s: f64, tau1: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WaveType {
    Elevation,
    Depression,
    Degenerate,
}

/// Coefficients at a point (β₀, 2) of C4; α₀ = 2 + β₀.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionICoefficients {
    pub law: LawSummary,
    pub beta0: f64,
    pub alpha0: f64,
    pub m1p: f64,
    pub m1pp: f64,
    pub c_check: f64,
    pub d_check: f64,
    pub c1: f64,
    pub c1_1: f64,
    pub d1: f64,
    pub wave_type: WaveType,
}

pub fn region1(beta0: f64, law: &MagnetisationLaw) -> Result<RegionICoefficients, CoefficientError> {
    if !(beta0 > 0.25) || !beta0.is_finite() {
        return Err(CoefficientError::InvalidArgument(format!(
            "region I needs beta0 > 1/4, got {beta0}"
        )));
    }
    let (m1p, m1pp) = m1_derivs_at_1(law);
    let alpha0 = 2.0 + beta0;
    let offset = beta0 - 0.25;
    let linear_part = alpha0 * m1p - 6.0;
    let c_check = 0.5 * linear_part;
    Ok(RegionICoefficients {
        law: law.summary(),
        beta0,
        alpha0,
        m1p,
        m1pp,
        c_check,
        d_check: (12.0 - alpha0 * m1pp) / 6.0,
        c1: linear_part / (6.0 * offset.powf(1.5)),
        c1_1: -0.5 / offset,
        d1: (12.0 - alpha0 * m1pp) / (24.0 * offset * offset),
        wave_type: region1_wave_type(c_check),
    })
}

/// Elevation for č₁ > 0, depression for č₁ < 0.
pub fn region1_wave_type(c_check: f64) -> WaveType {
    if c_check > 0.0 {
        WaveType::Elevation
    } else if c_check < 0.0 {
        WaveType::Depression
    } else {
        WaveType::Degenerate
    }
}

/// Coefficients at the codimension-two point (β₀, α₀) = (¼, 9/4).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionIICoefficients {
    pub law: LawSummary,
    pub beta0: f64,
    pub alpha0: f64,
    pub m1p: f64,
    pub m1pp: f64,
    pub c1: f64,
    pub d1: f64,
    pub c1_10: f64,
    pub c4_10: f64,
    pub c1_20: f64,
    pub c1_01: f64,
    pub c5: f64,
    pub wave_type: WaveType,
}

pub const REGION2_BETA0: f64 = 0.25;
pub const REGION2_ALPHA0: f64 = 2.25;

pub fn region2(law: &MagnetisationLaw) -> RegionIICoefficients {
    let (m1p, m1pp) = m1_derivs_at_1(law);
    let root6 = 6f64.sqrt();
    let c1 = 48.0 * root6 * (3.0 * m1p - 8.0);
    RegionIICoefficients {
        law: law.summary(),
        beta0: REGION2_BETA0,
        alpha0: REGION2_ALPHA0,
        m1p,
        m1pp,
        c1,
        d1: 864.0 * (1264.0 / 75.0 - m1pp),
        c1_10: 0.0,
        c4_10: -16.0,
        c1_20: 512.0,
        c1_01: -48.0,
        c5: -144.0 * root6 / 5.0,
        wave_type: region1_wave_type(c1),
    }
}

/// The three bracketed groups of the quartic coefficient and their prefactor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuarticTerms {
    pub prefactor: f64,
    pub g1: f64,
    pub g2: f64,
    pub g3: f64,
}

/// Coefficients on C2 at wavenumber s.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionIIICoefficients {
    pub law: LawSummary,
    pub s: f64,
    pub point: ParameterPoint,
    pub m1p: f64,
    pub m1pp: f64,
    pub s_ratio: f64,
    pub t_ratio: f64,
    pub tau1: f64,
    pub tau2: f64,
    pub c2_1: f64,
    pub d4: f64,
    pub d4_terms: QuarticTerms,
    pub exists: bool,
}

pub fn tau1(s: f64) -> f64 {
    let (i0, i1) = (in_(0, s), in_(1, s));
    2.0 * i0 * i0 - s * i0 * i0 * i0 / i1 + s * i0 * i1 - i1 * i1
}

pub fn tau2(s: f64) -> f64 {
    let (i0, i1) = (in_(0, s), in_(1, s));
    let i0_2 = i0 * i0;
    -((2.0 / s) * (s * s - 3.0) * i0_2 - 3.0 * s * i0_2 * i0_2 / (i1 * i1) + 9.0 * i0_2 * i0 / i1
        - 5.0 * i0 * i1
        + (5.0 + s * s) / s * i1 * i1)
        / 3.0
}

pub fn region3(s: f64, law: &MagnetisationLaw) -> Result<RegionIIICoefficients, CoefficientError> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(CoefficientError::InvalidArgument(format!("region III needs s > 0, got {s}")));
    }
    let (m1p, m1pp) = m1_derivs_at_1(law);
    let point = curve_c2(s);
    let (b, g, a) = (point.beta0, point.gamma0, point.alpha0);
    let (i0, i1) = (in_(0, s), in_(1, s));
    let sr = i0 / i1;
    let tr = in_(0, 2.0 * s) / in_(1, 2.0 * s);
    let t1 = tau1(s);
    if t1.abs() < 1e-12 {
        return Err(CoefficientError::TauDegenerate { s, tau1: t1 });
    }
    let am = a * m1p;
    let s2 = s * s;

    let g1 = (-2.0 * s2 + s2 * b - 2.0 * s * tr + 4.0 * s2 * sr * tr - am)
        * (-2.0 * s2 - 2.0 * s2 * b - s * sr + 4.0 * s2 * sr * tr - am)
        / (2.0 * (g + 4.0 * s2 * b - 2.0 * s * tr));
    let g2 = -(s2 * b - 4.0 * s * sr + 2.0 + am) * (3.0 * s * sr - am) / (g - 2.0);
    let g3 = 7.0 * s2 - 10.5 * s2 * b + 1.5 * s2 * s2 * b + 6.0 * s * sr - 6.0 * s2 * s * sr
        + 4.0 * s2 * s * sr * sr * tr
        - 2.0 * s2 * sr * tr
        - 3.0 * am
        - 0.5 * a * m1pp;
    let prefactor = i1 * i1 / (2.0 * t1 * t1);
    let d4 = prefactor * (g1 + g2 + g3);
    let c2_1 = -i1 * i1 / t1;
    Ok(RegionIIICoefficients {
        law: law.summary(),
        s,
        point,
        m1p,
        m1pp,
        s_ratio: sr,
        t_ratio: tr,
        tau1: t1,
        tau2: tau2(s),
        c2_1,
        d4,
        d4_terms: QuarticTerms { prefactor, g1, g2, g3 },
        exists: c2_1 < 0.0 && d4 > 0.0,
    })
}

/// (ε₁, ε₂) = (μ₁, μ₁ + μ₂) with μ₁ = (1+δ)μ²/48 and μ₂ = μ⁴/96.
pub fn region2_parameter_map(mu: f64, delta: f64) -> Result<(f64, f64), CoefficientError> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(CoefficientError::InvalidArgument(format!("mu must be positive, got {mu}")));
    }
    if !(delta >= -1.0) || !delta.is_finite() {
        return Err(CoefficientError::InvalidArgument(format!("delta must be >= -1, got {delta}")));
    }
    let mu1 = (1.0 + delta) * mu * mu / 48.0;
    let mu2 = mu.powi(4) / 96.0;
    Ok((mu1, mu1 + mu2))
}

/// κ = α₀m₁′(1) − 6 and κ̌ = κ/(2√μ).
pub fn kappa_map_region1(m1p: f64, alpha0: f64, mu: f64) -> Result<(f64, f64), CoefficientError> {
    if !(mu > 0.0) {
        return Err(CoefficientError::InvalidArgument(format!("mu must be positive, got {mu}")));
    }
    let kappa = alpha0 * m1p - 6.0;
    Ok((kappa, kappa / (2.0 * mu.sqrt())))
}

/// κ = 3m₁′(1) − 8 and κ̌ = 144√6·κ/μ².
pub fn kappa_map_region2(m1p: f64, mu: f64) -> Result<(f64, f64), CoefficientError> {
    if !(mu > 0.0) {
        return Err(CoefficientError::InvalidArgument(format!("mu must be positive, got {mu}")));
    }
    let kappa = 3.0 * m1p - 8.0;
    Ok((kappa, 144.0 * 6f64.sqrt() * kappa / (mu * mu)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn region1_linear_examples() {
        let lin = MagnetisationLaw::Linear;
        let r = region1(4.0, &lin).unwrap();
        assert_eq!(r.c_check, 0.0);
        assert_eq!(r.wave_type, WaveType::Degenerate);
        for b in [0.3, 0.5, 1.0, 7.0] {
            assert_eq!(region1(b, &lin).unwrap().d_check, 2.0);
        }
        let r = region1(0.5, &lin).unwrap();
        assert!((r.c1 + 14.0 / 3.0).abs() < 1e-12);
        assert!(region1(0.25, &lin).is_err());
    }

    #[test]
    fn wave_type_signs() {
        assert_eq!(region1_wave_type(1.0), WaveType::Elevation);
        assert_eq!(region1_wave_type(-1.0), WaveType::Depression);
        assert_eq!(region1_wave_type(0.0), WaveType::Degenerate);
    }

    #[test]
    fn region2_linear() {
        let r = region2(&MagnetisationLaw::Linear);
        assert!((r.c1 / (-240.0 * 6f64.sqrt()) - 1.0).abs() < 1e-15);
        assert!((r.d1 - 14561.28).abs() < 1e-9);
        let l = region2(&MagnetisationLaw::langevin(2.0).unwrap());
        assert!(l.c1 < 0.0);
    }

    #[test]
    fn region3_identity_and_values() {
        let lin = MagnetisationLaw::Linear;
        for s in [0.5, 1.0, 2.0, 5.0] {
            let r = region3(s, &lin).unwrap();
            let i1 = in_(1, s);
            assert!((r.c2_1 * r.tau1 + i1 * i1).abs() < 1e-10);
            assert_eq!(r.exists, r.c2_1 < 0.0 && r.d4 > 0.0);
        }
        let r = region3(1.0, &lin).unwrap();
        assert!((r.tau1 - 0.011_111_846_2).abs() < 1e-9);
        assert!((r.tau2 + 0.037_387_6).abs() < 1e-6);
        assert!((r.c2_1 + 28.7445).abs() < 1e-3);
        assert!(region3(0.0, &lin).is_err());
    }

    #[test]
    fn parameter_maps() {
        let (e1, e2) = region2_parameter_map(0.1, 0.0).unwrap();
        assert!((e1 - 2.083_333_333_333_333_4e-4).abs() < 1e-18);
        assert!((e2 - e1 - 1e-4 / 96.0).abs() < 1e-18);
        let (e1, e2) = region2_parameter_map(0.3, -1.0).unwrap();
        assert_eq!(e1, 0.0);
        assert!((e2 - 0.3f64.powi(4) / 96.0).abs() < 1e-18);

        let (k, kc) = kappa_map_region1(1.0, 6.2, 0.01).unwrap();
        assert!((k - 0.2).abs() < 1e-12 && (kc - 1.0).abs() < 1e-12);
        let (k, kc) = kappa_map_region2(8.0 / 3.0, 0.5).unwrap();
        assert!(k.abs() < 1e-15 && kc.abs() < 1e-12);
        let (k, kc) = kappa_map_region2(3.0, 1.0).unwrap();
        assert!((k - 1.0).abs() < 1e-15 && (kc - 144.0 * 6f64.sqrt()).abs() < 1e-12);
    }
}
