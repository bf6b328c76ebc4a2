//! Samplers for vertex models on a finite corner of the quadrant.
//!
//! Vertex (x, y) has column x and row y, both starting at 1. Inputs arrive from
//! the south (i1) and the west (j1, or h1 after complementation); outputs leave
//! north (i2) and east (j2 / h2). Every vertex draws from its own keyed stream,
//! so an ensemble depends only on the seed and the parameters.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::rng::Stream;
use crate::weights::{
    fused_weight, phi_weight, psi_weight, sixvertex_weight, theta_weight, ArrowConfig, ComplementedConfig, FusedParams,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Fused,
    Complemented,
    Phi,
    SixVertex,
}

/// Entry counts along the west edge (per row) and the south edge (per column).
#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryData {
    /// Row y receives the given number of paths from the west.
    JStep(Vec<u32>),
    /// One path per row.
    Step,
    Empty,
    Explicit {
        west: Vec<u32>,
        south: Vec<u32>,
    },
}

impl BoundaryData {
    fn west(&self, y: usize) -> u32 {
        match self {
            BoundaryData::JStep(v) => v.get(y - 1).copied().unwrap_or(0),
            BoundaryData::Step => 1,
            BoundaryData::Empty => 0,
            BoundaryData::Explicit { west, .. } => west.get(y - 1).copied().unwrap_or(0),
        }
    }

    fn south(&self, x: usize) -> u32 {
        match self {
            BoundaryData::Explicit { south, .. } => south.get(x - 1).copied().unwrap_or(0),
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadrantEnsemble {
    pub width: usize,
    pub height: usize,
    #[serde(rename = "model-kind")]
    pub kind: ModelKind,
    pub parameters: serde_json::Value,
    pub seed: u64,
    /// Row-major from the bottom row, each entry [i1, j1, i2, j2] (or [i1, h1, i2, h2]).
    pub vertices: Vec<[u32; 4]>,
}

impl QuadrantEnsemble {
    pub fn vertex(&self, x: usize, y: usize) -> [u32; 4] {
        self.vertices[(y - 1) * self.width + (x - 1)]
    }

    fn check_point(&self, x: usize, y: usize) -> Result<()> {
        if x == 0 || y == 0 || x > self.width || y > self.height {
            return Err(Error::OutOfDomain(format!(
                "({x},{y}) outside {}x{}",
                self.width, self.height
            )));
        }
        Ok(())
    }

    /// Paths passing through or below (x, y): entries into column x from the
    /// west at rows <= y plus entries from the south boundary.
    pub fn height_at(&self, x: usize, y: usize) -> Result<u32> {
        self.check_point(x, y)?;
        let west: u32 = (1..=y).map(|b| self.vertex(x, b)[1]).sum();
        Ok(west + self.vertex(x, 1)[0])
    }

    /// Horizontal occupancies leaving column x eastward at rows <= y.
    pub fn east_flux(&self, x: usize, y: usize) -> Result<u32> {
        self.check_point(x, y)?;
        Ok((1..=y).map(|b| self.vertex(x, b)[3]).sum())
    }

    pub fn height_field(&self) -> Vec<Vec<u32>> {
        (1..=self.height)
            .map(|y| (1..=self.width).map(|x| self.height_at(x, y).unwrap()).collect())
            .collect()
    }

    /// Conservation and edge consistency.
    pub fn validate(&self) -> Result<()> {
        for y in 1..=self.height {
            for x in 1..=self.width {
                let [i1, j1, i2, j2] = self.vertex(x, y);
                let ok = match self.kind {
                    ModelKind::Complemented | ModelKind::Phi => i1 as i64 - j1 as i64 == i2 as i64 - j2 as i64,
                    _ => i1 + j1 == i2 + j2,
                };
                if !ok {
                    return Err(Error::Sampling(format!("conservation fails at ({x},{y})")));
                }
                if x > 1 && self.vertex(x - 1, y)[3] != j1 {
                    return Err(Error::Sampling(format!("west edge mismatch at ({x},{y})")));
                }
                if y > 1 && self.vertex(x, y - 1)[2] != i1 {
                    return Err(Error::Sampling(format!("south edge mismatch at ({x},{y})")));
                }
            }
        }
        Ok(())
    }
}

/// Visit every vertex in anti-diagonal order and let `step` choose (i2, j2).
fn sweep<W, S, F>(width: usize, height: usize, west: W, south: S, mut step: F) -> Result<Vec<[u32; 4]>>
where
    W: Fn(usize) -> u32,
    S: Fn(usize) -> u32,
    F: FnMut(usize, usize, u32, u32) -> Result<(u32, u32)>,
{
    let mut v = vec![[0u32; 4]; width * height];
    for n in 2..=width + height {
        let lo = if n > height { n - height } else { 1 };
        let hi = (n - 1).min(width);
        for x in lo..=hi {
            let y = n - x;
            let j1 = if x == 1 { west(y) } else { v[(y - 1) * width + x - 2][3] };
            let i1 = if y == 1 {
                south(x)
            } else {
                v[(y - 2) * width + x - 1][2]
            };
            let (i2, j2) = step(x, y, i1, j1)?;
            v[(y - 1) * width + x - 1] = [i1, j1, i2, j2];
        }
    }
    Ok(v)
}

#[inline]
fn vertex_uniform(seed: u64, x: usize, y: usize) -> f64 {
    Stream::keyed(seed, &[x as u64, y as u64]).uniform()
}

fn pick(cdf: &[f64], u: f64) -> usize {
    cdf.iter().position(|&c| u < c).unwrap_or(cdf.len() - 1)
}

fn clean_prob(w: f64, at: (usize, usize)) -> Result<f64> {
    if w < -1e-12 || !w.is_finite() {
        return Err(Error::Domain(format!(
            "transition probability {w:e} at vertex ({},{}) is not in [0,1]",
            at.0, at.1
        )));
    }
    Ok(w.max(0.0))
}

/// (v, r) with v the concatenated geometric progressions u_k, t u_k, ..., t^{J_k-1} u_k
/// and r_k = t^{-J_k/2}.
pub fn fuse_params(u: &[f64], j: &[u32], t: f64) -> (Vec<f64>, Vec<f64>) {
    let mut v = Vec::new();
    for (&uk, &jk) in u.iter().zip(j) {
        let mut x = uk;
        for _ in 0..jk {
            v.push(x);
            x *= t;
        }
    }
    let r = j.iter().map(|&jk| t.powf(-(jk as f64) / 2.0)).collect();
    (v, r)
}

/// Fused higher spin model with spectral parameter u_y * xi_x at vertex (x, y).
#[derive(Debug, Clone)]
pub struct FusedModel {
    rows: Vec<(f64, u32)>,
    cols: Vec<(f64, f64)>,
    t: f64,
    boundary: BoundaryData,
    cache: HashMap<(usize, usize, u32, u32), Vec<(f64, u32)>>,
}

impl FusedModel {
    /// `rows[y-1] = (u, J)`, `cols[x-1] = (xi, s)`.
    pub fn new(rows: Vec<(f64, u32)>, cols: Vec<(f64, f64)>, t: f64, boundary: BoundaryData) -> Self {
        Self {
            rows,
            cols,
            t,
            boundary,
            cache: HashMap::new(),
        }
    }

    /// Prefused rows for the fusion of `rows` (J-step boundary becomes step).
    pub fn prefused_of(rows: &[(f64, u32)], cols: Vec<(f64, f64)>, t: f64) -> Self {
        let u: Vec<f64> = rows.iter().map(|r| r.0).collect();
        let j: Vec<u32> = rows.iter().map(|r| r.1).collect();
        let (v, _) = fuse_params(&u, &j, t);
        Self::new(v.into_iter().map(|v| (v, 1)).collect(), cols, t, BoundaryData::Step)
    }

    pub fn width(&self) -> usize {
        self.cols.len()
    }

    pub fn height(&self) -> usize {
        self.rows.len()
    }

    fn cdf(&mut self, x: usize, y: usize, i1: u32, j1: u32) -> Result<&Vec<(f64, u32)>> {
        let key = (x, y, i1, j1);
        if !self.cache.contains_key(&key) {
            let (u, jy) = self.rows[y - 1];
            let (xi, s) = self.cols[x - 1];
            let p = FusedParams {
                z: u * xi,
                j: jy,
                s,
                t: self.t,
            };
            let mut acc = 0.0;
            let mut cdf = Vec::new();
            for j2 in 0..=(i1 + j1).min(jy) {
                let c = ArrowConfig::new(i1, j1, i1 + j1 - j2, j2);
                let w = clean_prob(fused_weight(&p, c)?, (x, y))?;
                acc += w;
                cdf.push((acc, j2));
            }
            if (acc - 1.0).abs() > 1e-9 {
                return Err(Error::Domain(format!("weights at ({x},{y}) sum to {acc}")));
            }
            self.cache.insert(key, cdf);
        }
        Ok(&self.cache[&key])
    }

    pub fn sample(&mut self, seed: u64) -> Result<QuadrantEnsemble> {
        let (w, h) = (self.width(), self.height());
        let boundary = self.boundary.clone();
        let vertices = sweep(
            w,
            h,
            |y| boundary.west(y),
            |x| boundary.south(x),
            |x, y, i1, j1| {
                let u = vertex_uniform(seed, x, y);
                let cdf = self.cdf(x, y, i1, j1)?;
                let j2 = cdf.iter().find(|c| u < c.0).unwrap_or(cdf.last().unwrap()).1;
                Ok((i1 + j1 - j2, j2))
            },
        )?;
        Ok(QuadrantEnsemble {
            width: w,
            height: h,
            kind: ModelKind::Fused,
            parameters: json!({ "rows": self.rows, "cols": self.cols, "t": self.t }),
            seed,
            vertices,
        })
    }
}

/// One-shot fused sample.
pub fn sample_fused(
    rows: Vec<(f64, u32)>,
    cols: Vec<(f64, f64)>,
    t: f64,
    boundary: BoundaryData,
    seed: u64,
) -> Result<QuadrantEnsemble> {
    FusedModel::new(rows, cols, t, boundary).sample(seed)
}

/// Column type of the complemented model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpinLimit {
    /// s -> infinity, Psi weights
    Infinity,
    /// s -> 0, Theta weights
    Zero,
}

const RESIDUAL: f64 = 1e-15;
const REQUIRED: f64 = 1e-12;
const MAX_TERMS: usize = 1000;

/// Horizontally complemented limit model with Psi / Theta weights.
#[derive(Debug, Clone)]
pub struct ComplementedModel {
    a: Vec<f64>,
    cols: Vec<(f64, SpinLimit)>,
    t: f64,
    cache: HashMap<(usize, usize, u32, u32), Vec<f64>>,
}

impl ComplementedModel {
    /// `a[y-1] = A_y`, `cols[x-1] = (omega_x, limit)`.
    pub fn new(a: Vec<f64>, cols: Vec<(f64, SpinLimit)>, t: f64) -> Self {
        Self {
            a,
            cols,
            t,
            cache: HashMap::new(),
        }
    }

    /// Discretization of the t-PNG model on [0, chi] x [0, eta] with mesh eps,
    /// preceded by one boundary column per entry of `beta`.
    pub fn png_discretization(eps: f64, theta: f64, t: f64, chi: f64, eta: f64, beta: &[f64]) -> Self {
        let nx = (chi / eps).ceil() as usize;
        let ny = (eta / eps).ceil() as usize;
        let a = vec![t / (1.0 - t) / (eps * theta); ny];
        let mut cols: Vec<(f64, SpinLimit)> = beta.iter().map(|&b| (1.0 / b, SpinLimit::Zero)).collect();
        cols.extend(std::iter::repeat_n((1.0 / (eps * theta), SpinLimit::Infinity), nx));
        Self::new(a, cols, t)
    }

    pub fn width(&self) -> usize {
        self.cols.len()
    }

    pub fn height(&self) -> usize {
        self.a.len()
    }

    /// Cumulative output law indexed by i2 - max(0, i1 - h1).
    pub fn output_cdf(&mut self, x: usize, y: usize, i1: u32, h1: u32) -> Result<&Vec<f64>> {
        let key = (x, y, i1, h1);
        if !self.cache.contains_key(&key) {
            let (omega, lim) = self.cols[x - 1];
            let arg = self.a[y - 1] * omega;
            let lo = i1.saturating_sub(h1);
            let mut cdf = Vec::new();
            let mut acc = 0.0;
            for n in 0..MAX_TERMS as u32 {
                let i2 = lo + n;
                let c = ComplementedConfig::new(i1, h1, i2, i2 + h1 - i1);
                let w = match lim {
                    SpinLimit::Infinity => psi_weight(arg, self.t, c)?,
                    SpinLimit::Zero => theta_weight(arg, self.t, c)?,
                };
                let w = clean_prob(w, (x, y))?;
                acc += w;
                cdf.push(acc);
                if 1.0 - acc < RESIDUAL || (w < 1e-300 && n > 0 && 1.0 - acc < REQUIRED) {
                    break;
                }
            }
            if 1.0 - acc >= REQUIRED {
                return Err(Error::Sampling(format!(
                    "output law at ({x},{y}) with input ({i1},{h1}) reaches only {acc} after {} terms",
                    cdf.len()
                )));
            }
            self.cache.insert(key, cdf);
        }
        Ok(&self.cache[&key])
    }

    pub fn sample(&mut self, seed: u64) -> Result<QuadrantEnsemble> {
        let (w, h) = (self.width(), self.height());
        let vertices = sweep(
            w,
            h,
            |_| 0,
            |_| 0,
            |x, y, i1, h1| {
                let u = vertex_uniform(seed, x, y);
                let n = pick(self.output_cdf(x, y, i1, h1)?, u) as u32;
                let i2 = i1.saturating_sub(h1) + n;
                Ok((i2, i2 + h1 - i1))
            },
        )?;
        Ok(QuadrantEnsemble {
            width: w,
            height: h,
            kind: ModelKind::Complemented,
            parameters: json!({ "A": self.a, "cols": self.cols, "t": self.t }),
            seed,
            vertices,
        })
    }
}

pub fn sample_complemented(a: Vec<f64>, cols: Vec<(f64, SpinLimit)>, t: f64, seed: u64) -> Result<QuadrantEnsemble> {
    ComplementedModel::new(a, cols, t).sample(seed)
}

/// Discrete PNG model with Phi weights and empty boundary.
pub fn sample_phi_model(
    eps: f64,
    theta: f64,
    t: f64,
    width: usize,
    height: usize,
    seed: u64,
) -> Result<QuadrantEnsemble> {
    let c = |a, b, c, d| ComplementedConfig::new(a, b, c, d);
    let p_nuc = phi_weight(eps, theta, t, c(0, 0, 1, 1))?;
    let p_pass = phi_weight(eps, theta, t, c(1, 1, 1, 1))?;
    let vertices = sweep(
        width,
        height,
        |_| 0,
        |_| 0,
        |x, y, i1, h1| {
            Ok(match (i1, h1) {
                (0, 0) => {
                    if p_nuc > 0.0 && vertex_uniform(seed, x, y) < p_nuc {
                        (1, 1)
                    } else {
                        (0, 0)
                    }
                }
                (1, 1) => {
                    if vertex_uniform(seed, x, y) < p_pass {
                        (1, 1)
                    } else {
                        (0, 0)
                    }
                }
                other => other,
            })
        },
    )?;
    Ok(QuadrantEnsemble {
        width,
        height,
        kind: ModelKind::Phi,
        parameters: json!({ "eps": eps, "theta": theta, "t": t }),
        seed,
        vertices,
    })
}

/// Stochastic six-vertex model on the N x N corner with step boundary. Row a
/// carries x_a and column b carries y_b; the table ratio at (b, a) is x_a y_b.
/// Returns the ensemble and the number of east exits of column N.
pub fn sample_sixvertex(x: &[f64], y: &[f64], t: f64, seed: u64) -> Result<(QuadrantEnsemble, u32)> {
    let (rows, cols) = (x.len(), y.len());
    let mut table = HashMap::new();
    for (a, &xa) in x.iter().enumerate() {
        for (b, &yb) in y.iter().enumerate() {
            let r = xa * yb;
            for (i1, j1) in [(0u32, 1u32), (1, 0)] {
                let w = sixvertex_weight(&r, &t, ArrowConfig::new(i1, j1, i1, j1))?;
                if !(0.0..=1.0).contains(&w) {
                    return Err(Error::Domain(format!(
                        "six-vertex weight {w} outside [0,1] at column {}, row {}",
                        b + 1,
                        a + 1
                    )));
                }
                // probability of continuing in the same direction
                table.insert((b + 1, a + 1, i1), w);
            }
        }
    }
    let vertices = sweep(
        cols,
        rows,
        |_| 1,
        |_| 0,
        |xc, yr, i1, j1| {
            Ok(match (i1, j1) {
                (0, 0) => (0, 0),
                (1, 1) => (1, 1),
                (i1, _) => {
                    let stay = table[&(xc, yr, i1)];
                    let keep = vertex_uniform(seed, xc, yr) < stay;
                    match (i1, keep) {
                        (1, true) => (1, 0),
                        (1, false) => (0, 1),
                        (_, true) => (0, 1),
                        (_, false) => (1, 0),
                    }
                }
            })
        },
    )?;
    let e = QuadrantEnsemble {
        width: cols,
        height: rows,
        kind: ModelKind::SixVertex,
        parameters: json!({ "x": x, "y": y, "t": t }),
        seed,
        vertices,
    };
    let h = e.east_flux(cols, rows)?;
    Ok((e, h))
}
