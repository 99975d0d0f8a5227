//! Free-surface profiles r = 1 + η(z) reconstructed from reduced orbits.

use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

use crate::coefficients::{tau1, WaveType};
use crate::reduced::{HomoclinicOrbit, ReducedSystem};
use crate::specfun::in_;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProfileError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("profile is identically zero")]
    DegenerateProfile,
    #[error("orbit of the wrong kind for this region: {0:?}")]
    MismatchedOrbit(ReducedSystem),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// Prefactors exactly as printed alongside the reduced systems.
    PaperLiteral,
    /// Amplitude taken from the η-component of the Ω-normalised basis vector.
    #[default]
    BasisConsistent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Region {
    #[serde(rename = "I")]
    I,
    #[serde(rename = "I-cubic")]
    ICubic,
    #[serde(rename = "II")]
    II,
    #[serde(rename = "II-cubic")]
    IICubic,
    #[serde(rename = "III")]
    III,
}

/// Which nonlinearity the reduced orbit was computed with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Nonlinearity {
    Quadratic,
    Cubic,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WaveProfile {
    pub z: Vec<f64>,
    pub eta: Vec<f64>,
    pub region: Region,
    pub wave_type: WaveType,
    pub convention: Convention,
    pub warnings: Vec<String>,
}

impl WaveProfile {
    fn build(z: Vec<f64>, eta: Vec<f64>, region: Region, convention: Convention, mut warnings: Vec<String>) -> Self {
        let wave_type = wave_type_of(&eta);
        if let Some(min) = eta.iter().copied().reduce(f64::min) {
            if 1.0 + min <= 0.0 {
                warnings.push(format!("surface reaches the wire (min eta = {min})"));
            }
        }
        WaveProfile { z, eta, region, wave_type, convention, warnings }
    }

    /// Signed value of largest magnitude.
    pub fn amplitude(&self) -> f64 {
        self.eta.iter().fold(0.0f64, |m, &v| if v.abs() > m.abs() { v } else { m })
    }

    /// |η| at the window ends relative to max |η|.
    pub fn endpoint_decay(&self) -> f64 {
        let m = self.amplitude().abs();
        if m == 0.0 {
            return 0.0;
        }
        self.eta[0].abs().max(self.eta[self.eta.len() - 1].abs()) / m
    }
}

fn wave_type_of(eta: &[f64]) -> WaveType {
    let peak = eta.iter().fold(0.0f64, |m, &v| if v.abs() > m.abs() { v } else { m });
    if peak > 0.0 {
        WaveType::Elevation
    } else if peak < 0.0 {
        WaveType::Depression
    } else {
        WaveType::Degenerate
    }
}

/// Elevation when the extremum of largest magnitude is positive.
pub fn classify_wave(profile: &WaveProfile) -> Result<WaveType, ProfileError> {
    match wave_type_of(&profile.eta) {
        WaveType::Degenerate => Err(ProfileError::DegenerateProfile),
        t => Ok(t),
    }
}

fn check_mu(mu: f64, soft_limit: f64) -> Result<Vec<String>, ProfileError> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(ProfileError::InvalidArgument(format!("need mu > 0, got {mu}")));
    }
    Ok(if mu > soft_limit {
        vec![format!("mu = {mu} exceeds {soft_limit}; leading-order profile may be inaccurate")]
    } else {
        Vec::new()
    })
}

/// Region I: Z = μ^{1/2}(β₀−¼)^{−1/2}z and η = μ^pQ(Z) (basis-consistent) with
/// p = 1 for the quadratic and ½ for the cubic system.
pub fn eta_region1(
    orbit: &HomoclinicOrbit,
    mu: f64,
    beta0: f64,
    nonlinearity: Nonlinearity,
    convention: Convention,
) -> Result<WaveProfile, ProfileError> {
    if !matches!(orbit.system, ReducedSystem::Planar { .. }) {
        return Err(ProfileError::MismatchedOrbit(orbit.system));
    }
    if !(beta0 > 0.25) {
        return Err(ProfileError::InvalidArgument(format!("region I needs beta0 > 1/4, got {beta0}")));
    }
    let warnings = check_mu(mu, 0.2)?;
    let root = (beta0 - 0.25).sqrt();
    let (power, region) = match nonlinearity {
        Nonlinearity::Quadratic => (1.0, Region::I),
        Nonlinearity::Cubic => (0.5, Region::ICubic),
    };
    let factor = match convention {
        Convention::BasisConsistent => mu.powf(power),
        Convention::PaperLiteral => 0.5 * mu.powf(power) * root,
    };
    let stretch = root / mu.sqrt();
    let z = orbit.grid.iter().map(|zz| zz * stretch).collect();
    let eta = orbit.u.iter().map(|q| factor * q).collect();
    Ok(WaveProfile::build(z, eta, region, convention, warnings))
}

/// η-component of the Ω-normalised region II basis vector f₂.
pub const REGION2_ETA_COMPONENT: f64 = 4.0 * 2.449_489_742_783_178;

/// Region II: Z = μz and η = 4√6μ⁴P₁ (quadratic) or 4√6μ²P₁ (cubic).
pub fn eta_region2(
    orbit: &HomoclinicOrbit,
    mu: f64,
    nonlinearity: Nonlinearity,
    convention: Convention,
) -> Result<WaveProfile, ProfileError> {
    if !matches!(orbit.system, ReducedSystem::FourthOrder { .. }) {
        return Err(ProfileError::MismatchedOrbit(orbit.system));
    }
    let warnings = check_mu(mu, 0.5)?;
    let (power, region) = match nonlinearity {
        Nonlinearity::Quadratic => (4, Region::II),
        Nonlinearity::Cubic => (2, Region::IICubic),
    };
    let factor = match convention {
        Convention::BasisConsistent => REGION2_ETA_COMPONENT * mu.powi(power),
        Convention::PaperLiteral => 0.5 * mu.powi(power),
    };
    let z = orbit.grid.iter().map(|zz| zz / mu).collect();
    let eta = orbit.u.iter().map(|p| factor * p).collect();
    Ok(WaveProfile::build(z, eta, region, convention, warnings))
}

/// Carrier phase of a region III wave train; only these two are reversible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Zero,
    Pi,
}

impl Phase {
    pub fn angle(self) -> f64 {
        match self {
            Phase::Zero => 0.0,
            Phase::Pi => PI,
        }
    }
}

/// Minimum samples per carrier wavelength in region III profiles.
const SAMPLES_PER_WAVELENGTH: f64 = 40.0;

/// Region III: η = 2τ₁^{−1/2}I₁(s)a_h(z)cos(sz + θ), the leading harmonic.
pub fn eta_region3(envelope: &HomoclinicOrbit, s: f64, theta: Phase) -> Result<WaveProfile, ProfileError> {
    if !matches!(envelope.system, ReducedSystem::Nls { .. }) {
        return Err(ProfileError::MismatchedOrbit(envelope.system));
    }
    if !(s > 0.0) || !s.is_finite() {
        return Err(ProfileError::InvalidArgument(format!("need s > 0, got {s}")));
    }
    let t1 = tau1(s);
    if !(t1 > 0.0) {
        return Err(ProfileError::InvalidArgument(format!("tau1 = {t1} is not positive at s = {s}")));
    }
    let factor = 2.0 * in_(1, s) / t1.sqrt();
    let g = &envelope.grid;
    let half = g[g.len() - 1].min(-g[0]);
    let spacing = (g[1] - g[0]).min(2.0 * PI / s / SAMPLES_PER_WAVELENGTH);
    // Mirrored grid with an odd node count, so the crest z = 0 is a node.
    let m = (half / spacing).ceil() as usize;
    let n = 2 * m + 1;
    let phase = theta.angle();
    let mut z = Vec::with_capacity(n);
    let mut eta = Vec::with_capacity(n);
    for i in 0..n {
        let zi = half * (i as f64 - m as f64) / m as f64;
        let a = envelope.sample(zi).unwrap_or(0.0);
        z.push(zi);
        eta.push(factor * a * (s * zi + phase).cos());
    }
    Ok(WaveProfile::build(z, eta, Region::III, Convention::BasisConsistent, Vec::new()))
}
