//! Independent checks built on the explicit Hamiltonian, the symplectic form
//! and the linearisation K, evaluated on analytic eigenvector bases.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::coefficients::{region1, region2, region3, tau1, tau2, CoefficientError, REGION2_ALPHA0, REGION2_BETA0};
use crate::magnetisation::{t_energy, MagnetisationLaw};
use crate::specfun::{gauss_nodes, gauss_sum, in_, taylor_coefficient};
use crate::spectrum::curve_c2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("state outside the Hamiltonian's domain: {0}")]
    DomainViolation(String),
    #[error("radial function lacks {0} derivative data")]
    MissingDerivativeData(&'static str),
    #[error("tau1 = {tau1} is too close to zero at s = {s}")]
    TauDegenerate { s: f64, tau1: f64 },
    #[error("Richardson extrapolation unstable for {0}")]
    ExtrapolationUnstable(String),
    #[error("unknown coefficient tag {0:?}")]
    UnknownTag(String),
    #[error(transparent)]
    Coefficient(#[from] CoefficientError),
}

pub type RadialFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// User-supplied radial function with optional derivative evaluators.
#[derive(Clone)]
pub struct CustomRadial {
    pub value: RadialFn,
    pub d1: Option<RadialFn>,
    pub d2: Option<RadialFn>,
}

impl fmt::Debug for CustomRadial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomRadial")
            .field("d1", &self.d1.is_some())
            .field("d2", &self.d2.is_some())
            .finish()
    }
}

#[derive(Debug, Clone)]
pub enum RadialTerm {
    /// coef·rⁿ
    Power { coef: f64, n: i32 },
    /// coef·I₀(sr)
    BesselI0 { coef: f64, s: f64 },
    /// coef·r·I₁(sr)
    RBesselI1 { coef: f64, s: f64 },
    Custom { coef: f64, f: CustomRadial },
}

impl RadialTerm {
    fn scaled(&self, k: f64) -> Self {
        let mut t = self.clone();
        match &mut t {
            RadialTerm::Power { coef, .. }
            | RadialTerm::BesselI0 { coef, .. }
            | RadialTerm::RBesselI1 { coef, .. }
            | RadialTerm::Custom { coef, .. } => *coef *= k,
        }
        t
    }

    fn eval(&self, r: f64, order: u8) -> Option<f64> {
        Some(match *self {
            RadialTerm::Power { coef, n } => {
                let nf = n as f64;
                match order {
                    0 => coef * r.powi(n),
                    1 if n == 0 => 0.0,
                    1 => coef * nf * r.powi(n - 1),
                    _ if n == 0 || n == 1 => 0.0,
                    _ => coef * nf * (nf - 1.0) * r.powi(n - 2),
                }
            }
            RadialTerm::BesselI0 { coef, s } => {
                let x = s * r;
                match order {
                    0 => coef * in_(0, x),
                    1 => coef * s * in_(1, x),
                    // I₁(x)/x → ½ as x → 0.
                    _ => {
                        let ratio = if x.abs() < 1e-8 { 0.5 } else { in_(1, x) / x };
                        coef * s * s * (in_(0, x) - ratio)
                    }
                }
            }
            RadialTerm::RBesselI1 { coef, s } => {
                let x = s * r;
                match order {
                    0 => coef * r * in_(1, x),
                    1 => coef * s * r * in_(0, x),
                    _ => coef * (s * in_(0, x) + s * s * r * in_(1, x)),
                }
            }
            RadialTerm::Custom { coef, ref f } => {
                let g = match order {
                    0 => &f.value,
                    1 => f.d1.as_ref()?,
                    _ => f.d2.as_ref()?,
                };
                coef * g(r)
            }
        })
    }

    /// Terms of (1/r)(r f′)′.
    fn laplacian(&self) -> Result<Vec<RadialTerm>, VerifyError> {
        Ok(match *self {
            RadialTerm::Power { n: 0, .. } => vec![RadialTerm::Power { coef: 0.0, n: 0 }],
            RadialTerm::Power { coef, n } => vec![RadialTerm::Power { coef: coef * (n * n) as f64, n: n - 2 }],
            RadialTerm::BesselI0 { coef, s } => vec![RadialTerm::BesselI0 { coef: coef * s * s, s }],
            RadialTerm::RBesselI1 { coef, s } => vec![
                RadialTerm::BesselI0 { coef: 2.0 * coef * s, s },
                RadialTerm::RBesselI1 { coef: coef * s * s, s },
            ],
            RadialTerm::Custom { coef, ref f } => {
                let (Some(d1), Some(d2)) = (f.d1.clone(), f.d2.clone()) else {
                    return Err(VerifyError::MissingDerivativeData("second"));
                };
                let value: RadialFn = Arc::new(move |r| d2(r) + d1(r) / r);
                vec![RadialTerm::Custom { coef, f: CustomRadial { value, d1: None, d2: None } }]
            }
        })
    }
}

/// Finite sum of radial terms on [0, 1].
#[derive(Debug, Clone, Default)]
pub struct RadialFunction {
    terms: Vec<RadialTerm>,
}

impl RadialFunction {
    pub fn zero() -> Self {
        RadialFunction::default()
    }

    pub fn constant(c: f64) -> Self {
        Self::power(c, 0)
    }

    pub fn power(coef: f64, n: i32) -> Self {
        RadialFunction { terms: vec![RadialTerm::Power { coef, n }] }
    }

    /// Σ cₖ r^{nₖ}
    pub fn polynomial(terms: &[(f64, i32)]) -> Self {
        RadialFunction { terms: terms.iter().map(|&(coef, n)| RadialTerm::Power { coef, n }).collect() }
    }

    pub fn bessel_i0(coef: f64, s: f64) -> Self {
        RadialFunction { terms: vec![RadialTerm::BesselI0 { coef, s }] }
    }

    pub fn r_bessel_i1(coef: f64, s: f64) -> Self {
        RadialFunction { terms: vec![RadialTerm::RBesselI1 { coef, s }] }
    }

    pub fn custom(f: CustomRadial) -> Self {
        RadialFunction { terms: vec![RadialTerm::Custom { coef: 1.0, f }] }
    }

    pub fn plus(mut self, other: &RadialFunction) -> Self {
        self.terms.extend(other.terms.iter().cloned());
        self
    }

    pub fn scaled(&self, k: f64) -> Self {
        RadialFunction { terms: self.terms.iter().map(|t| t.scaled(k)).collect() }
    }

    pub fn value(&self, r: f64) -> f64 {
        self.terms.iter().map(|t| t.eval(r, 0).unwrap_or(0.0)).sum()
    }

    fn derivative(&self, r: f64, order: u8) -> Option<f64> {
        self.terms.iter().map(|t| t.eval(r, order)).sum()
    }

    pub fn d1(&self, r: f64) -> Result<f64, VerifyError> {
        self.derivative(r, 1).ok_or(VerifyError::MissingDerivativeData("first"))
    }

    pub fn d2(&self, r: f64) -> Result<f64, VerifyError> {
        self.derivative(r, 2).ok_or(VerifyError::MissingDerivativeData("second"))
    }

    pub fn laplacian(&self) -> Result<RadialFunction, VerifyError> {
        let mut terms = Vec::new();
        for t in &self.terms {
            terms.extend(t.laplacian()?);
        }
        Ok(RadialFunction { terms })
    }
}

/// Spatial state (η, ω, φ, ζ); ζ is measured from its equilibrium value.
#[derive(Debug, Clone, Default)]
pub struct SpatialState {
    pub eta: f64,
    pub omega: f64,
    pub phi: RadialFunction,
    pub zeta: RadialFunction,
}

impl SpatialState {
    pub fn new(eta: f64, omega: f64, phi: RadialFunction, zeta: RadialFunction) -> Self {
        SpatialState { eta, omega, phi, zeta }
    }

    pub fn scaled(&self, k: f64) -> Self {
        SpatialState {
            eta: k * self.eta,
            omega: k * self.omega,
            phi: self.phi.scaled(k),
            zeta: self.zeta.scaled(k),
        }
    }

    /// self + k·other
    pub fn add_scaled(&self, other: &SpatialState, k: f64) -> Self {
        SpatialState {
            eta: self.eta + k * other.eta,
            omega: self.omega + k * other.omega,
            phi: self.phi.clone().plus(&other.phi.scaled(k)),
            zeta: self.zeta.clone().plus(&other.zeta.scaled(k)),
        }
    }

    /// The reverser (η, ω, φ, ζ) ↦ (η, −ω, −φ, ζ).
    pub fn reversed(&self) -> Self {
        SpatialState {
            eta: self.eta,
            omega: -self.omega,
            phi: self.phi.scaled(-1.0),
            zeta: self.zeta.clone(),
        }
    }

    /// Largest component magnitude over the quadrature nodes and both ends.
    pub fn sup_norm(&self) -> f64 {
        sample_radii()
            .map(|r| self.phi.value(r).abs().max(self.zeta.value(r).abs()))
            .fold(self.eta.abs().max(self.omega.abs()), f64::max)
    }
}

fn sample_radii() -> impl Iterator<Item = f64> {
    [0.0, 1.0].into_iter().chain(gauss_nodes(0.0, 1.0).map(|(r, _)| r))
}

fn integrate(f: impl Fn(f64) -> f64) -> f64 {
    gauss_sum(&f, 0.0, 1.0)
}

fn first_derivative_integral(phi: &RadialFunction, weight: impl Fn(f64) -> f64) -> Result<f64, VerifyError> {
    let mut acc = 0.0;
    for (r, w) in gauss_nodes(0.0, 1.0) {
        acc += w * weight(r) * phi.d1(r)?;
    }
    Ok(acc)
}

/// W = (ω + (1+η)⁻¹∫r²φ_r(ζ−1)dr)/(1+η).
pub fn w_term(state: &SpatialState) -> Result<f64, VerifyError> {
    let e1 = 1.0 + state.eta;
    let moment = first_derivative_integral(&state.phi, |r| r * r * (state.zeta.value(r) - 1.0))?;
    Ok((state.omega + moment / e1) / e1)
}

/// H + β/2, written without the cancellation between the β terms.
pub fn hamiltonian_excess(
    state: &SpatialState,
    beta: f64,
    alpha: f64,
    law: &MagnetisationLaw,
) -> Result<f64, VerifyError> {
    let eta = state.eta;
    if !(1.0 + eta > 0.5) {
        return Err(VerifyError::DomainViolation(format!("1 + eta = {} <= 1/2", 1.0 + eta)));
    }
    let w = w_term(state)?;
    if !(w.abs() < beta) {
        return Err(VerifyError::DomainViolation(format!("|W| = {} >= beta = {beta}", w.abs())));
    }
    let e1 = 1.0 + eta;
    let surface = integrate(|r| {
        let q = (state.zeta.value(r) + 2.0 * eta + eta * eta) / (e1 * e1);
        0.5 * q * q * e1 * e1 * r
    });
    let mut kinetic = 0.0;
    for (r, w) in gauss_nodes(0.0, 1.0) {
        let d = state.phi.d1(r)?;
        kinetic += w * 0.5 * r * d * d;
    }
    let t = t_energy(law, eta).map_err(|e| VerifyError::DomainViolation(e.to_string()))?;
    let root = (beta * beta - w * w).sqrt();
    Ok(surface - kinetic + alpha * t + e1 * w * w / (beta + root) + 0.5 * beta * eta * eta)
}

/// The Hamiltonian functional evaluated by Gauss quadrature on [0, 1].
pub fn hamiltonian(state: &SpatialState, beta: f64, alpha: f64, law: &MagnetisationLaw) -> Result<f64, VerifyError> {
    Ok(hamiltonian_excess(state, beta, alpha, law)? - 0.5 * beta)
}

/// Ω(u, v) = ω_v η_u − η_v ω_u + ∫ r(ζ_v φ_u − φ_v ζ_u) dr.
pub fn symplectic_product(u: &SpatialState, v: &SpatialState) -> f64 {
    v.omega * u.eta - v.eta * u.omega
        + integrate(|r| r * (v.zeta.value(r) * u.phi.value(r) - v.phi.value(r) * u.zeta.value(r)))
}

/// X = ω − ∫r²φ_r dr
fn x_term(state: &SpatialState) -> Result<f64, VerifyError> {
    Ok(state.omega - first_derivative_integral(&state.phi, |r| r * r)?)
}

/// The linearisation K at (β₀, γ₀).
pub fn apply_k(state: &SpatialState, beta0: f64, gamma0: f64) -> Result<SpatialState, VerifyError> {
    if !(beta0 > 0.0) {
        return Err(VerifyError::InvalidArgument(format!("need beta0 > 0, got {beta0}")));
    }
    state.phi.d2(0.5)?;
    let x = x_term(state)?;
    let zeta_mean = integrate(|r| r * state.zeta.value(r));
    Ok(SpatialState {
        eta: x / beta0,
        omega: -2.0 * zeta_mean - 2.0 * state.eta + gamma0 * state.eta,
        phi: state.zeta.clone().plus(&RadialFunction::constant(2.0 * state.eta)),
        zeta: state.phi.laplacian()?.scaled(-1.0).plus(&RadialFunction::constant(-2.0 * x / beta0)),
    })
}

/// Residual −φ_r(1) − X/β₀ of the linearised boundary condition.
pub fn domain_residual(state: &SpatialState, beta0: f64) -> Result<f64, VerifyError> {
    Ok(-state.phi.d1(1.0)? - x_term(state)? / beta0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "region")]
pub enum BasisRegion {
    #[serde(rename = "I")]
    I { beta0: f64 },
    #[serde(rename = "II")]
    II,
    #[serde(rename = "III")]
    III { s: f64 },
}

#[derive(Debug, Clone)]
pub struct BasisVector {
    pub name: String,
    pub state: SpatialState,
}

/// K v_source = Σ coef·v_target
#[derive(Debug, Clone)]
pub struct ChainRelation {
    pub source: usize,
    pub image: Vec<(f64, usize)>,
}

#[derive(Debug, Clone)]
pub struct BasisSet {
    pub region: BasisRegion,
    pub beta0: f64,
    pub gamma0: f64,
    /// Generalised eigenvectors; complex vectors appear as real and imaginary parts.
    pub vectors: Vec<BasisVector>,
    pub normalised: Vec<BasisVector>,
    /// A₄ (region I), 8√6 (region II) or τ₁ (region III).
    pub normalisation: f64,
    /// Nonzero pairings Ω(v_i, v_j) for i < j; all others vanish.
    pub pairings: Vec<(usize, usize, f64)>,
    pub chains: Vec<ChainRelation>,
}

impl BasisSet {
    pub fn get(&self, name: &str) -> Option<&SpatialState> {
        self.vectors.iter().find(|v| v.name == name).map(|v| &v.state)
    }

    pub fn get_normalised(&self, name: &str) -> Option<&SpatialState> {
        self.normalised.iter().find(|v| v.name == name).map(|v| &v.state)
    }
}

fn named(list: Vec<(&str, SpatialState)>) -> Vec<BasisVector> {
    list.into_iter().map(|(n, state)| BasisVector { name: n.to_string(), state }).collect()
}

fn plain_chain(len: usize) -> Vec<ChainRelation> {
    (0..len)
        .map(|j| ChainRelation { source: j, image: if j == 0 { vec![] } else { vec![(1.0, j - 1)] } })
        .collect()
}

/// Basis at a point of C4 (γ₀ = 2, β₀ > ¼).
pub fn basis_region1(beta0: f64) -> Result<BasisSet, VerifyError> {
    if !(beta0 > 0.25) || !beta0.is_finite() {
        return Err(VerifyError::InvalidArgument(format!("region I needs beta0 > 1/4, got {beta0}")));
    }
    let b = beta0 - 0.25;
    let a4 = -(1.0 / 24.0 + 0.25 * beta0 * (beta0 - 1.0)) / b;
    let z = RadialFunction::zero;
    let vectors = named(vec![
        ("e1", SpatialState::new(0.0, 0.0, RadialFunction::constant(1.0), z())),
        ("e2", SpatialState::new(0.5, 0.0, z(), z())),
        ("e3", SpatialState::new(0.0, 0.5 * b, RadialFunction::polynomial(&[(-0.25, 2), (a4, 0)]), z())),
        (
            "e4",
            SpatialState::new(
                0.25 * (beta0 - 0.5) + 0.5 * a4,
                0.0,
                z(),
                RadialFunction::polynomial(&[(-0.25, 2), (-0.5 * (beta0 - 0.5), 0)]),
            ),
        ),
    ]);
    let k = 2.0 / b.sqrt();
    let normalised = rename_scaled(&vectors, k);
    Ok(BasisSet {
        region: BasisRegion::I { beta0 },
        beta0,
        gamma0: 2.0,
        vectors,
        normalised,
        normalisation: a4,
        pairings: vec![(0, 3, -0.25 * b), (1, 2, 0.25 * b)],
        chains: plain_chain(4),
    })
}

fn rename_scaled(vectors: &[BasisVector], k: f64) -> Vec<BasisVector> {
    vectors
        .iter()
        .map(|v| BasisVector { name: v.name.replacen('e', "f", 1), state: v.state.scaled(k) })
        .collect()
}

/// Basis at the triple point β₀ = ¼, γ₀ = 2.
pub fn basis_region2() -> BasisSet {
    let z = RadialFunction::zero;
    let p = RadialFunction::polynomial;
    let vectors = named(vec![
        ("e1", SpatialState::new(0.0, 0.0, RadialFunction::constant(1.0), z())),
        ("e2", SpatialState::new(0.5, 0.0, z(), z())),
        ("e3", SpatialState::new(0.0, 0.0, p(&[(3.0 / 32.0, 0), (-0.25, 2)]), z())),
        ("e4", SpatialState::new(-1.0 / 64.0, 0.0, z(), p(&[(1.0 / 8.0, 0), (-0.25, 2)]))),
        (
            "e5",
            SpatialState::new(0.0, -1.0 / 192.0, p(&[(87.0 / 10240.0, 0), (-3.0 / 128.0, 2), (1.0 / 64.0, 4)]), z()),
        ),
        (
            "e6",
            SpatialState::new(-33.0 / 20480.0, 0.0, z(), p(&[(3.0 / 256.0, 0), (-3.0 / 128.0, 2), (1.0 / 64.0, 4)])),
        ),
    ]);
    let k = 8.0 * 6f64.sqrt();
    let normalised = rename_scaled(&vectors, k);
    let q = 1.0 / 384.0;
    BasisSet {
        region: BasisRegion::II,
        beta0: REGION2_BETA0,
        gamma0: 2.0,
        vectors,
        normalised,
        normalisation: k,
        pairings: vec![(0, 5, q), (1, 4, -q), (2, 3, q)],
        chains: plain_chain(6),
    }
}

/// Basis at the point of C2 with imaginary eigenvalues ±is.
pub fn basis_region3(s: f64) -> Result<BasisSet, VerifyError> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(VerifyError::InvalidArgument(format!("region III needs s > 0, got {s}")));
    }
    let t1 = tau1(s);
    if t1.abs() < 1e-12 {
        return Err(VerifyError::TauDegenerate { s, tau1: t1 });
    }
    let pt = curve_c2(s);
    let (b0, g0) = (pt.beta0, pt.gamma0);
    let (i0, i1, i2, i3) = (in_(0, s), in_(1, s), in_(2, s), in_(3, s));
    let z = RadialFunction::zero;
    let c = RadialFunction::constant;

    let e_re = SpatialState::new(i1, 0.0, z(), RadialFunction::bessel_i0(s, s).plus(&c(-2.0 * i1)));
    let e_im = SpatialState::new(0.0, s * b0 * i1 - i2, RadialFunction::bessel_i0(-1.0, s), z());
    let f0_re = SpatialState::new(0.0, s * b0 * i0 - 2.0 / s * i2 - i3, RadialFunction::r_bessel_i1(-1.0, s), z());
    let f0_im = SpatialState::new(
        -i0 + i1 / s,
        0.0,
        z(),
        RadialFunction::bessel_i0(-1.0, s)
            .plus(&RadialFunction::r_bessel_i1(-s, s))
            .plus(&c(2.0 * i0 - 2.0 / s * i1)),
    );
    // f = f₀ − iκe with κ = τ₂/(2τ₁)
    let kappa = tau2(s) / (2.0 * t1);
    let f_re = f0_re.add_scaled(&e_im, kappa);
    let f_im = f0_im.add_scaled(&e_re, -kappa);

    let e1 = SpatialState::new(0.0, 0.0, c(1.0), z());
    let e2 = SpatialState::new(1.0 / g0, 0.0, z(), c(1.0 - 2.0 / g0));
    let vectors = named(vec![
        ("e1", e1),
        ("e2", e2),
        ("e.re", e_re),
        ("e.im", e_im),
        ("f.re", f_re),
        ("f.im", f_im),
    ]);
    let ke = 1.0 / t1.abs().sqrt();
    let k12 = 1.0 / (0.5 - 1.0 / g0).abs().sqrt();
    let normalised = vectors
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let name = match v.name.as_str() {
                "e1" => "f1".to_string(),
                "e2" => "f2".to_string(),
                other => other.to_uppercase().replace(".RE", ".re").replace(".IM", ".im"),
            };
            BasisVector { name, state: v.state.scaled(if i < 2 { k12 } else { ke }) }
        })
        .collect();
    let chains = vec![
        ChainRelation { source: 0, image: vec![] },
        ChainRelation { source: 1, image: vec![(1.0, 0)] },
        ChainRelation { source: 2, image: vec![(-s, 3)] },
        ChainRelation { source: 3, image: vec![(s, 2)] },
        ChainRelation { source: 4, image: vec![(1.0, 2), (-s, 5)] },
        ChainRelation { source: 5, image: vec![(1.0, 3), (s, 4)] },
    ];
    Ok(BasisSet {
        region: BasisRegion::III { s },
        beta0: b0,
        gamma0: g0,
        vectors,
        normalised,
        normalisation: t1,
        pairings: vec![(0, 1, 0.5 - 1.0 / g0), (2, 4, 0.5 * t1), (3, 5, 0.5 * t1)],
        chains,
    })
}

/// Complex pairing Ω(a, b̄) for a = a_re + i a_im, b = b_re + i b_im.
pub fn complex_product_conj(
    a: (&SpatialState, &SpatialState),
    b: (&SpatialState, &SpatialState),
) -> (f64, f64) {
    let re = symplectic_product(a.0, b.0) + symplectic_product(a.1, b.1);
    let im = symplectic_product(a.1, b.0) - symplectic_product(a.0, b.1);
    (re, im)
}

/// One verification outcome.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub numeric: f64,
    pub reference: f64,
    pub error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn absolute(name: impl Into<String>, numeric: f64, reference: f64, tolerance: f64) -> Self {
        let error = (numeric - reference).abs();
        Check { name: name.into(), numeric, reference, error, tolerance, pass: error <= tolerance }
    }

    pub fn relative(name: impl Into<String>, numeric: f64, reference: f64, tolerance: f64) -> Self {
        let error = relative_error(numeric, reference);
        Check { name: name.into(), numeric, reference, error, tolerance, pass: error <= tolerance }
    }
}

fn relative_error(numeric: f64, reference: f64) -> f64 {
    let d = (numeric - reference).abs();
    if reference == 0.0 {
        d
    } else {
        d / reference.abs()
    }
}

fn region_label(b: &BasisSet) -> String {
    match b.region {
        BasisRegion::I { beta0 } => format!("I(beta0={beta0})"),
        BasisRegion::II => "II".to_string(),
        BasisRegion::III { s } => format!("III(s={s})"),
    }
}

/// Every pairing among the generalised eigenvectors against the expected table.
pub fn pairing_checks(basis: &BasisSet) -> Vec<Check> {
    let label = region_label(basis);
    let v = &basis.vectors;
    let mut out = Vec::new();
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            let want = basis
                .pairings
                .iter()
                .find(|&&(a, b, _)| a == i && b == j)
                .map_or(0.0, |p| p.2);
            let got = symplectic_product(&v[i].state, &v[j].state);
            out.push(Check::absolute(
                format!("{label} Omega({},{})", v[i].name, v[j].name),
                got,
                want,
                1e-12,
            ));
        }
    }
    out
}

fn state_difference(a: &SpatialState, b: &SpatialState) -> f64 {
    a.add_scaled(b, -1.0).sup_norm()
}

/// K v_j against the expected chain image, max pointwise residual.
pub fn chain_checks(basis: &BasisSet) -> Result<Vec<Check>, VerifyError> {
    let label = region_label(basis);
    let mut out = Vec::new();
    for rel in &basis.chains {
        let src = &basis.vectors[rel.source];
        let image = apply_k(&src.state, basis.beta0, basis.gamma0)?;
        let want = rel
            .image
            .iter()
            .fold(SpatialState::default(), |acc, &(c, idx)| acc.add_scaled(&basis.vectors[idx].state, c));
        out.push(Check::absolute(
            format!("{label} K {} chain", src.name),
            state_difference(&image, &want),
            0.0,
            1e-10,
        ));
    }
    Ok(out)
}

/// Linearised boundary condition at r = 1 for every basis vector.
pub fn domain_checks(basis: &BasisSet) -> Result<Vec<Check>, VerifyError> {
    let label = region_label(basis);
    basis
        .vectors
        .iter()
        .map(|v| {
            Ok(Check::absolute(
                format!("{label} domain {}", v.name),
                domain_residual(&v.state, basis.beta0)?,
                0.0,
                1e-10,
            ))
        })
        .collect()
}

/// K∘S + S∘K = 0 on every basis vector.
pub fn reversibility_check(basis: &BasisSet) -> Result<Vec<Check>, VerifyError> {
    let label = region_label(basis);
    basis
        .vectors
        .iter()
        .map(|v| {
            let ks = apply_k(&v.state.reversed(), basis.beta0, basis.gamma0)?;
            let sk = apply_k(&v.state, basis.beta0, basis.gamma0)?.reversed();
            Ok(Check::absolute(
                format!("{label} reverser {}", v.name),
                ks.add_scaled(&sk, 1.0).sup_norm(),
                0.0,
                1e-10,
            ))
        })
        .collect()
}

/// Normalised pairings equal to ±1 where the raw pairing is nonzero.
pub fn normalisation_checks(basis: &BasisSet) -> Vec<Check> {
    let label = region_label(basis);
    let n = &basis.normalised;
    basis
        .pairings
        .iter()
        .map(|&(i, j, want)| {
            let got = symplectic_product(&n[i].state, &n[j].state);
            // The region III e/f pairs carry τ₁/2 in each real component.
            let target = if matches!(basis.region, BasisRegion::III { .. }) && i >= 2 {
                0.5 * want.signum()
            } else {
                want.signum()
            };
            Check::absolute(format!("{label} Omega({},{})", n[i].name, n[j].name), got, target, 1e-12)
        })
        .collect()
}

/// Pairings, chains, domain membership and reversibility for one basis.
pub fn basis_suite(basis: &BasisSet) -> Result<Vec<Check>, VerifyError> {
    let mut out = pairing_checks(basis);
    out.extend(normalisation_checks(basis));
    out.extend(chain_checks(basis)?);
    out.extend(domain_checks(basis)?);
    out.extend(reversibility_check(basis)?);
    Ok(out)
}

/// Coefficients recoverable from the Hamiltonian by Taylor extraction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "tag")]
pub enum CoefficientTag {
    #[serde(rename = "I.c1")]
    IC1 { beta0: f64 },
    #[serde(rename = "I.c1_1")]
    IC1_1 { beta0: f64 },
    #[serde(rename = "II.c1")]
    IIC1,
    #[serde(rename = "II.c1_01")]
    IIC1_01,
    #[serde(rename = "II.c1_10")]
    IIC1_10,
    #[serde(rename = "III.c2_1")]
    IIIC2_1 { s: f64 },
    #[serde(rename = "III.tau1")]
    IIITau1 { s: f64 },
}

impl CoefficientTag {
    pub fn name(&self) -> &'static str {
        match self {
            CoefficientTag::IC1 { .. } => "I.c1",
            CoefficientTag::IC1_1 { .. } => "I.c1_1",
            CoefficientTag::IIC1 => "II.c1",
            CoefficientTag::IIC1_01 => "II.c1_01",
            CoefficientTag::IIC1_10 => "II.c1_10",
            CoefficientTag::IIIC2_1 { .. } => "III.c2_1",
            CoefficientTag::IIITau1 { .. } => "III.tau1",
        }
    }

    /// Builds a tag from its name with the region parameter (β₀ or s) where needed.
    pub fn parse_with(name: &str, beta0: f64, s: f64) -> Result<Self, VerifyError> {
        let bare: CoefficientTag = name.parse()?;
        Ok(match bare {
            CoefficientTag::IC1 { .. } => CoefficientTag::IC1 { beta0 },
            CoefficientTag::IC1_1 { .. } => CoefficientTag::IC1_1 { beta0 },
            CoefficientTag::IIIC2_1 { .. } => CoefficientTag::IIIC2_1 { s },
            CoefficientTag::IIITau1 { .. } => CoefficientTag::IIITau1 { s },
            other => other,
        })
    }

    pub const NAMES: [&'static str; 7] =
        ["I.c1", "I.c1_1", "II.c1", "II.c1_01", "II.c1_10", "III.c2_1", "III.tau1"];
}

impl FromStr for CoefficientTag {
    type Err = VerifyError;

    /// Region parameters default to β₀ = ½ and s = 1.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "I.c1" => CoefficientTag::IC1 { beta0: 0.5 },
            "I.c1_1" => CoefficientTag::IC1_1 { beta0: 0.5 },
            "II.c1" => CoefficientTag::IIC1,
            "II.c1_01" => CoefficientTag::IIC1_01,
            "II.c1_10" => CoefficientTag::IIC1_10,
            "III.c2_1" => CoefficientTag::IIIC2_1 { s: 1.0 },
            "III.tau1" => CoefficientTag::IIITau1 { s: 1.0 },
            other => return Err(VerifyError::UnknownTag(other.to_string())),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaylorCheck {
    pub tag: CoefficientTag,
    pub numeric: f64,
    pub formula: f64,
    pub relative_error: f64,
}

/// Step in the physical parameters for the μ-derivatives.
const PARAMETER_STEP: f64 = 1e-4;

fn amplitude_step(direction: &SpatialState) -> f64 {
    1e-2 / direction.sup_norm().max(1.0)
}

fn extract<F: Fn(f64) -> f64>(f: F, k: u32, h0: f64, tag: &str) -> Result<f64, VerifyError> {
    taylor_coefficient(f, k, h0).map_err(|e| VerifyError::ExtrapolationUnstable(format!("{tag}: {e}")))
}

/// Taylor coefficient of order k of t ↦ H(t·v) at fixed (β, α).
fn directional_coefficient(
    v: &SpatialState,
    k: u32,
    beta: f64,
    alpha: f64,
    law: &MagnetisationLaw,
    tag: &str,
) -> Result<f64, VerifyError> {
    let f = |t: f64| hamiltonian_excess(&v.scaled(t), beta, alpha, law).unwrap_or(f64::NAN);
    extract(f, k, amplitude_step(v), tag)
}

/// ∂_μ of the quadratic coefficient along v, with (β, α) = (β₀ + ε₁μ, α₀ + ε₂μ).
fn mixed_coefficient(
    v: &SpatialState,
    (beta0, alpha0): (f64, f64),
    (eps1, eps2): (f64, f64),
    law: &MagnetisationLaw,
    tag: &str,
) -> Result<f64, VerifyError> {
    let h = PARAMETER_STEP;
    let g = |t: f64| {
        let w = v.scaled(t);
        let plus = hamiltonian_excess(&w, beta0 + eps1 * h, alpha0 + eps2 * h, law);
        let minus = hamiltonian_excess(&w, beta0 - eps1 * h, alpha0 - eps2 * h, law);
        match (plus, minus) {
            (Ok(p), Ok(m)) => (p - m) / (2.0 * h),
            _ => f64::NAN,
        }
    };
    extract(g, 2, amplitude_step(v), tag)
}

/// Recovers a coefficient from the Hamiltonian and compares with the closed form.
pub fn taylor_coefficient_check(tag: CoefficientTag, law: &MagnetisationLaw) -> Result<TaylorCheck, VerifyError> {
    let name = tag.name();
    let (numeric, formula) = match tag {
        CoefficientTag::IC1 { beta0 } | CoefficientTag::IC1_1 { beta0 } => {
            let basis = basis_region1(beta0)?;
            let coeffs = region1(beta0, law)?;
            let f2 = basis.get_normalised("f2").expect("region I has f2");
            let alpha0 = beta0 + basis.gamma0;
            if matches!(tag, CoefficientTag::IC1 { .. }) {
                (directional_coefficient(f2, 3, beta0, alpha0, law, name)?, coeffs.c1)
            } else {
                (mixed_coefficient(f2, (beta0, alpha0), (0.0, 1.0), law, name)?, coeffs.c1_1)
            }
        }
        CoefficientTag::IIC1 | CoefficientTag::IIC1_01 | CoefficientTag::IIC1_10 => {
            let basis = basis_region2();
            let coeffs = region2(law);
            let f2 = basis.get_normalised("f2").expect("region II has f2");
            let p0 = (REGION2_BETA0, REGION2_ALPHA0);
            match tag {
                CoefficientTag::IIC1 => (directional_coefficient(f2, 3, p0.0, p0.1, law, name)?, coeffs.c1),
                CoefficientTag::IIC1_01 => (mixed_coefficient(f2, p0, (0.0, 1.0), law, name)?, coeffs.c1_01),
                _ => (mixed_coefficient(f2, p0, (1.0, 1.0), law, name)?, coeffs.c1_10),
            }
        }
        CoefficientTag::IIIC2_1 { s } => {
            let basis = basis_region3(s)?;
            let coeffs = region3(s, law)?;
            let p0 = (basis.beta0, basis.beta0 + basis.gamma0);
            let re = basis.get_normalised("E.re").expect("region III has E");
            let im = basis.get_normalised("E.im").expect("region III has E");
            let q = mixed_coefficient(re, p0, (0.0, 1.0), law, name)?
                + mixed_coefficient(im, p0, (0.0, 1.0), law, name)?;
            (2.0 * q, coeffs.c2_1)
        }
        CoefficientTag::IIITau1 { s } => {
            let basis = basis_region3(s)?;
            let g = |n: &str| basis.get(n).expect("region III vector");
            let (re, _) = complex_product_conj((g("e.re"), g("e.im")), (g("f.re"), g("f.im")));
            (re, tau1(s))
        }
    };
    Ok(TaylorCheck { tag, numeric, formula, relative_error: relative_error(numeric, formula) })
}
