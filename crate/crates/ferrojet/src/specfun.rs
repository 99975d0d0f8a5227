//! Bessel functions of small integer order, root bracketing, Gauss–Legendre
//! quadrature, Taylor-coefficient extraction and finite-difference weights.

use std::sync::OnceLock;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecFunError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("no sign change on [{a}, {b}]")]
    NoSignChange { a: f64, b: f64 },
    #[error("root finder did not converge after {iterations} iterations")]
    NonConvergence { iterations: usize },
    #[error("Richardson extrapolation did not stabilise")]
    StepUnderflow,
}

/// Largest argument for which the ascending series is used for J_n.
/// Beyond this the alternating series loses more than 1e-13 to cancellation.
const J_SERIES_MAX: f64 = 8.0;

fn check_order_and_arg(n: u32, x: f64) -> Result<(), SpecFunError> {
    if n > 3 {
        return Err(SpecFunError::InvalidArgument(format!(
            "Bessel order {n} not supported (0..=3)"
        )));
    }
    if !x.is_finite() || x < 0.0 {
        return Err(SpecFunError::InvalidArgument(format!(
            "Bessel argument must be finite and non-negative, got {x}"
        )));
    }
    Ok(())
}

/// Ascending series sum_k sign^k (x/2)^{2k+n} / (k! (k+n)!).
fn ascending_series(n: u32, x: f64, alternating: bool) -> f64 {
    let half = 0.5 * x;
    let mut term = 1.0;
    for i in 1..=n {
        term *= half / i as f64;
    }
    let q = half * half;
    let mut sum = term;
    let mut k = 0u32;
    loop {
        k += 1;
        term *= q / (k as f64 * (k + n) as f64);
        if alternating {
            term = -term;
        }
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() || k > 1000 {
            break;
        }
    }
    sum
}

/// Miller's backward recurrence normalised by J_0 + 2 sum J_{2k} = 1.
fn bessel_j_miller(n: u32, x: f64) -> f64 {
    let start = (x + 20.0 + (40.0 * x).sqrt()) as usize;
    let m = start + (start % 2);
    let mut jp1 = 0.0;
    let mut j = 1e-300;
    let mut norm = 0.0;
    let mut wanted = 0.0;
    for k in (1..=m).rev() {
        let jm1 = 2.0 * k as f64 / x * j - jp1;
        jp1 = j;
        j = jm1;
        // j now holds J_{k-1}
        let order = k - 1;
        if order == n as usize {
            wanted = j;
        }
        if order > 0 && order % 2 == 0 {
            norm += 2.0 * j;
        }
        if j.abs() > 1e250 {
            j *= 1e-250;
            jp1 *= 1e-250;
            norm *= 1e-250;
            wanted *= 1e-250;
        }
    }
    norm += j;
    wanted / norm
}

/// Bessel function of the first kind J_n(x) for n in 0..=3.
pub fn bessel_j(n: u32, x: f64) -> Result<f64, SpecFunError> {
    check_order_and_arg(n, x)?;
    if x == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    if x <= J_SERIES_MAX {
        Ok(ascending_series(n, x, true))
    } else {
        Ok(bessel_j_miller(n, x))
    }
}

/// Modified Bessel function of the first kind I_n(x) for n in 0..=3.
pub fn bessel_i(n: u32, x: f64) -> Result<f64, SpecFunError> {
    check_order_and_arg(n, x)?;
    if x == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    Ok(ascending_series(n, x, false))
}

fn parity(n: u32, x: f64) -> f64 {
    if x < 0.0 && n % 2 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// J_n on the whole real line (J_n(−x) = (−1)ⁿ J_n(x)) for internal callers.
pub(crate) fn jn(n: u32, x: f64) -> f64 {
    parity(n, x) * bessel_j(n, x.abs()).expect("validated Bessel argument")
}

/// I_n on the whole real line (I_n(−x) = (−1)ⁿ I_n(x)) for internal callers.
pub(crate) fn in_(n: u32, x: f64) -> f64 {
    parity(n, x) * bessel_i(n, x.abs()).expect("validated Bessel argument")
}

/// The smallest positive zero of J_1.
pub fn first_zero_j1() -> f64 {
    static J11: OnceLock<f64> = OnceLock::new();
    *J11.get_or_init(|| {
        find_root(|x| jn(1, x), 3.0, 4.0, 1e-15).expect("J_1 changes sign on [3, 4]")
    })
}

/// Brent's method on a sign-changing bracket.
pub fn find_root<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64, SpecFunError> {
    if !(a < b) || !(tol > 0.0) {
        return Err(SpecFunError::InvalidArgument(format!(
            "need a < b and tol > 0 (a={a}, b={b}, tol={tol})"
        )));
    }
    let (mut a, mut b) = (a, b);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa * fb < 0.0) {
        return Err(SpecFunError::NoSignChange { a, b });
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    const MAX_ITER: usize = 300;
    for _ in 0..MAX_ITER {
        if fb * fc > 0.0 {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
    }
    Err(SpecFunError::NonConvergence { iterations: MAX_ITER })
}

pub const GAUSS_ORDER: usize = 64;

struct GaussRule {
    nodes: [f64; GAUSS_ORDER],
    weights: [f64; GAUSS_ORDER],
}

/// Nodes and weights on [-1, 1] by Newton iteration on P_n.
fn gauss_rule() -> &'static GaussRule {
    static RULE: OnceLock<GaussRule> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GAUSS_ORDER;
        let mut nodes = [0.0; GAUSS_ORDER];
        let mut weights = [0.0; GAUSS_ORDER];
        for i in 0..n / 2 {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussRule { nodes, weights }
    })
}

/// Quadrature nodes mapped to [a, b] with matching weights.
pub fn gauss_nodes(a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> {
    let rule = gauss_rule();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    rule.nodes
        .iter()
        .zip(rule.weights.iter())
        .map(move |(&x, &w)| (mid + half * x, half * w))
}

/// 64-point Gauss–Legendre rule on [a, b].
pub fn quadrature<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> Result<f64, SpecFunError> {
    if !(a < b) {
        return Err(SpecFunError::InvalidArgument(format!(
            "quadrature needs a < b (a={a}, b={b})"
        )));
    }
    Ok(gauss_sum(&f, a, b))
}

pub(crate) fn gauss_sum<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    gauss_nodes(a, b).map(|(x, w)| w * f(x)).sum()
}

/// Composite Gauss–Legendre over `panels` equal sub-intervals; `a > b` flips the sign.
pub fn composite_quadrature<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    if a == b {
        return 0.0;
    }
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|i| {
            let lo = a + i as f64 * h;
            let hi = lo + h;
            if lo < hi {
                gauss_sum(&f, lo, hi)
            } else {
                -gauss_sum(&f, hi, lo)
            }
        })
        .sum()
}

fn central_estimate<F: Fn(f64) -> f64>(f: &F, k: u32, h: f64, f0: f64) -> f64 {
    match k {
        0 => f0,
        1 => (f(h) - f(-h)) / (2.0 * h),
        2 => (f(h) - 2.0 * f0 + f(-h)) / (2.0 * h * h),
        3 => (f(2.0 * h) - 2.0 * f(h) + 2.0 * f(-h) - f(-2.0 * h)) / (12.0 * h * h * h),
        4 => {
            (f(2.0 * h) - 4.0 * f(h) + 6.0 * f0 - 4.0 * f(-h) + f(-2.0 * h))
                / (24.0 * h * h * h * h)
        }
        _ => unreachable!(),
    }
}

/// k-th Taylor coefficient of `f` at 0 from central differences on the ladder
/// h0, h0/2, h0/4 followed by two Richardson eliminations.
pub fn taylor_coefficient<F: Fn(f64) -> f64>(f: F, k: u32, h0: f64) -> Result<f64, SpecFunError> {
    if k > 4 {
        return Err(SpecFunError::InvalidArgument(format!(
            "Taylor order {k} not supported (0..=4)"
        )));
    }
    if !(h0 > 0.0) || !h0.is_finite() {
        return Err(SpecFunError::InvalidArgument(format!("step must be positive, got {h0}")));
    }
    let f0 = f(0.0);
    if k == 0 {
        return Ok(f0);
    }
    let hs = [h0, 0.5 * h0, 0.25 * h0];
    let raw: Vec<f64> = hs.iter().map(|&h| central_estimate(&f, k, h, f0)).collect();
    if raw.iter().any(|v| !v.is_finite()) {
        return Err(SpecFunError::StepUnderflow);
    }
    let r1 = [(4.0 * raw[1] - raw[0]) / 3.0, (4.0 * raw[2] - raw[1]) / 3.0];
    let best = (16.0 * r1[1] - r1[0]) / 15.0;

    // Roundoff floor of the finest difference quotient.
    let fscale = [f0, f(hs[2]), f(-hs[2]), f(2.0 * hs[2]), f(-2.0 * hs[2])]
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let noise = 64.0 * f64::EPSILON * fscale / hs[2].powi(k as i32);
    let correction = (best - r1[1]).abs();
    let scale = raw.iter().fold(best.abs(), |m, v| m.max(v.abs()));
    if !best.is_finite() || correction > 1e-3 * scale + 100.0 * noise {
        return Err(SpecFunError::StepUnderflow);
    }
    Ok(best)
}

/// Fornberg's weights for the m-th derivative at `z` from samples at `x`.
pub fn fd_weights(z: f64, x: &[f64], m: usize) -> Vec<f64> {
    let n = x.len();
    let mut c = vec![vec![0.0; m + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[m]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent high-precision reference values (50-digit arithmetic), rounded.
    const J_REF: &[(u32, f64, f64)] = &[
        (0, 1.0, 0.765_197_686_557_966_6),
        (1, 1.0, 0.440_050_585_744_933_5),
        (0, 10.0, -0.245_935_764_451_348_3),
        (1, 10.0, 0.043_472_746_168_861_44),
        (2, 10.0, 0.254_630_313_685_120_6),
        (3, 10.0, 0.058_379_379_305_186_81),
        (0, 30.0, -0.086_367_983_581_040_21),
        (1, 30.0, -0.118_751_062_616_622_9),
        (0, 50.0, 0.055_812_327_669_251_82),
        (3, 50.0, 0.092_734_804_061_634_43),
    ];

    #[test]
    fn bessel_j_matches_reference_values() {
        for &(n, x, want) in J_REF {
            let got = bessel_j(n, x).unwrap();
            assert!((got - want).abs() < 1e-13, "J_{n}({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn bessel_i_small_values() {
        assert_eq!(bessel_i(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_i(1, 0.0).unwrap(), 0.0);
        assert!((bessel_i(0, 1.0).unwrap() - 1.266_065_877_752_008_4).abs() < 1e-14);
        let i3_20 = 3.459_241_634_091_962e7;
        assert!((bessel_i(3, 20.0).unwrap() / i3_20 - 1.0).abs() < 1e-13);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(bessel_j(0, -1.0).is_err());
        assert!(bessel_j(4, 1.0).is_err());
        assert!(bessel_i(0, f64::NAN).is_err());
        assert!(bessel_i(1, f64::INFINITY).is_err());
    }

    #[test]
    fn j11_bracket_and_value() {
        assert!(jn(1, 3.0).signum() * jn(1, 4.0).signum() < 0.0);
        let z = first_zero_j1();
        assert!((z - 3.831_705_970_207_512).abs() < 1e-12);
        assert!(jn(1, z).abs() < 1e-11);
    }

    #[test]
    fn find_root_cases() {
        let r = find_root(|x| x * x - 2.0, 1.0, 2.0, 1e-12).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-11);
        let r = find_root(|x| jn(1, x), 3.0, 4.0, 1e-14).unwrap();
        assert!((r - first_zero_j1()).abs() < 1e-12);
        assert!(matches!(
            find_root(|x| x * x + 1.0, 0.0, 1.0, 1e-12),
            Err(SpecFunError::NoSignChange { .. })
        ));
    }

    #[test]
    fn quadrature_examples() {
        assert!((quadrature(|r| r, 0.0, 1.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((quadrature(|r| r.powi(3), 0.0, 1.0).unwrap() - 0.25).abs() < 1e-15);
        let v = quadrature(|r| r * in_(0, r), 0.0, 1.0).unwrap();
        assert!((v - in_(1, 1.0)).abs() < 1e-14);
        assert!((v - 0.565_159_103_992_485).abs() < 1e-12);
        assert!(quadrature(|r| r, 1.0, 1.0).is_err());
    }

    #[test]
    fn quadrature_exact_up_to_degree_127() {
        for p in [0, 1, 7, 40, 90, 127] {
            let v = quadrature(|r| r.powi(p), 0.0, 1.0).unwrap();
            assert!((v - 1.0 / (p as f64 + 1.0)).abs() < 1e-13, "degree {p}: {v}");
        }
    }

    #[test]
    fn taylor_examples() {
        let c = taylor_coefficient(|t| t * t * t, 3, 1e-2).unwrap();
        assert!((c - 1.0).abs() < 1e-10);
        let c = taylor_coefficient(|t| t.exp() - 1.0, 2, 1e-2).unwrap();
        assert!((c - 0.5).abs() < 5e-7);
        let c = taylor_coefficient(|t| (2.0 * t).sin(), 1, 1e-2).unwrap();
        assert!((c - 2.0).abs() < 1e-9);
        assert!(taylor_coefficient(|t| t, 5, 1e-2).is_err());
    }

    #[test]
    fn fornberg_weights_known_stencils() {
        let w = fd_weights(0.0, &[-1.0, 0.0, 1.0], 2);
        assert!((w[0] - 1.0).abs() < 1e-14 && (w[1] + 2.0).abs() < 1e-14 && (w[2] - 1.0).abs() < 1e-14);
        let w = fd_weights(0.0, &[-2.0, -1.0, 0.0, 1.0, 2.0], 1);
        let want = [1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0];
        for (a, b) in w.iter().zip(want) {
            assert!((a - b).abs() < 1e-14);
        }
    }
}
