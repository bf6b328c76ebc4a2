//! GUE Tracy-Widom distribution from the Fredholm determinant of the Airy kernel.

use std::f64::consts::PI;
use std::sync::OnceLock;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ASYMPTOTIC_FROM: f64 = 12.0;
const TAYLOR_STEP: f64 = 0.25;
const TAYLOR_TERMS: usize = 40;

fn airy_asymptotic(x: f64) -> (f64, f64) {
    let z = 2.0 / 3.0 * x.powf(1.5);
    let mut u = 1.0;
    let (mut sa, mut sd) = (1.0, 1.0);
    for k in 1..60 {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
        let zk = (-z).powi(k);
        sa += u / zk;
        sd += v / zk;
        if (u / zk).abs() < 1e-17 {
            break;
        }
    }
    let e = (-z).exp() / (2.0 * PI.sqrt());
    (e / x.powf(0.25) * sa, -e * x.powf(0.25) * sd)
}

/// Taylor step of y'' = x y from x0 by h.
fn taylor_step(x0: f64, y: f64, dy: f64, h: f64) -> (f64, f64) {
    let mut c = [0.0; TAYLOR_TERMS + 1];
    c[0] = y;
    c[1] = dy;
    c[2] = x0 * y / 2.0;
    for n in 1..TAYLOR_TERMS - 1 {
        c[n + 2] = (x0 * c[n] + c[n - 1]) / ((n + 2) as f64 * (n + 1) as f64);
    }
    let (mut v, mut d) = (0.0, 0.0);
    for n in (0..=TAYLOR_TERMS).rev() {
        v = v * h + c[n];
        if n > 0 {
            d = d * h + n as f64 * c[n];
        }
    }
    (v, d)
}

/// (Ai(x), Ai'(x)). Asymptotic series for x >= 12, else Taylor integration
/// downward from 12, the direction in which Ai is dominant.
pub fn airy(x: f64) -> (f64, f64) {
    if x >= ASYMPTOTIC_FROM {
        return airy_asymptotic(x);
    }
    let (mut y, mut dy) = airy_asymptotic(ASYMPTOTIC_FROM);
    let mut x0 = ASYMPTOTIC_FROM;
    while x0 > x {
        let h = -(x0 - x).min(TAYLOR_STEP);
        (y, dy) = taylor_step(x0, y, dy, h);
        x0 += h;
    }
    (y, dy)
}

/// Gauss-Legendre nodes and weights on [a, b].
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    for i in 0..n {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                (p0, p1) = (p1, ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf);
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        xs[i] = 0.5 * (b - a) * z + 0.5 * (a + b);
        ws[i] = (b - a) / ((1.0 - z * z) * dp * dp);
    }
    (xs, ws)
}

/// F_2(s) = det(I - K_Airy) on L^2(s, infinity), Nystrom with `nodes` points on
/// [s, max(s, 0) + 12].
pub fn tw_cdf(s: f64, nodes: usize) -> Result<f64> {
    let hi = s.max(0.0) + 12.0;
    let (xs, ws) = gauss_legendre(nodes, s, hi);
    let ai: Vec<(f64, f64)> = xs.iter().map(|&x| airy(x)).collect();
    let sw: Vec<f64> = ws.iter().map(|w| w.sqrt()).collect();
    let m = DMatrix::from_fn(nodes, nodes, |i, j| {
        let k = if i == j {
            ai[i].1 * ai[i].1 - xs[i] * ai[i].0 * ai[i].0
        } else {
            (ai[i].0 * ai[j].1 - ai[i].1 * ai[j].0) / (xs[i] - xs[j])
        };
        let id = if i == j { 1.0 } else { 0.0 };
        id - sw[i] * k * sw[j]
    });
    let d = m.lu().determinant();
    if !d.is_finite() || !(-1e-12..=1.0 + 1e-12).contains(&d) {
        return Err(Error::NonFinite(format!("Fredholm determinant {d} at s = {s}")));
    }
    Ok(d.clamp(0.0, 1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwReference {
    pub nodes: usize,
    /// (s, F_2(s)) on [-6, 4] with step 0.05
    pub cdf: Vec<(f64, f64)>,
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
}

/// Moments from E[X^k] = int_0^inf k s^{k-1}(1 - F) ds - int_{-inf}^0 k s^{k-1} F ds.
pub fn compute_reference(nodes: usize) -> Result<TwReference> {
    let mut raw = [0.0; 4];
    for (lo, hi, upper) in [(-12.0, 0.0, false), (0.0, 8.0, true)] {
        let (xs, ws) = gauss_legendre(80, lo, hi);
        for (&s, &w) in xs.iter().zip(&ws) {
            let f = tw_cdf(s, nodes)?;
            let g = if upper { 1.0 - f } else { -f };
            for k in 1..=3 {
                raw[k] += w * k as f64 * s.powi(k as i32 - 1) * g;
            }
        }
    }
    let mean = raw[1];
    let variance = raw[2] - mean * mean;
    let m3 = raw[3] - 3.0 * mean * raw[2] + 2.0 * mean.powi(3);
    let cdf = (0..=200)
        .map(|i| {
            let s = -6.0 + 0.05 * i as f64;
            tw_cdf(s, nodes).map(|f| (s, f))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TwReference {
        nodes,
        cdf,
        mean,
        variance,
        skewness: m3 / variance.powf(1.5),
    })
}

/// Reference values at 200 nodes, computed once per process.
pub fn tw_reference() -> Result<&'static TwReference> {
    static CELL: OnceLock<std::result::Result<TwReference, Error>> = OnceLock::new();
    CELL.get_or_init(|| compute_reference(200))
        .as_ref()
        .map_err(Clone::clone)
}
