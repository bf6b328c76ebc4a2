//! Continuum t-PNG model on a rectangle [0, chi] x [0, eta].
//!
//! Every nucleation emits a ray to the north and a ray to the east. When a
//! vertical ray meets a horizontal one, the pair annihilates with probability
//! 1 - t and otherwise both continue. The sampler sweeps nucleations by
//! increasing x; horizontal rays still alive are kept in a map ordered by height.

use std::collections::BTreeMap;
use std::ops::Bound;

use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::Stream;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Nucleation {
    pub x: f64,
    pub y: f64,
    /// Boundary source column (1-based) for nucleations of the boundary model.
    /// Such nucleations carry the virtual abscissa x = j - m - 1 < 0.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub column: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decision {
    Annihilate,
    Pass,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub x: f64,
    pub y: f64,
    /// Index of the nucleation that emitted the horizontal ray.
    pub horizontal: usize,
    /// Index of the nucleation that emitted the vertical ray. A pass through a
    /// boundary column crosses all of its alive rays at once and records `None`.
    pub vertical: Option<usize>,
    pub decision: Decision,
}

/// A ray from nucleation `source`; `end` is the coordinate along the ray where it
/// was annihilated, or `None` if it reaches the edge of the rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub source: usize,
    pub origin: (f64, f64),
    pub end: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RayDiagram {
    pub rect: (f64, f64),
    pub intensity: f64,
    pub t: f64,
    pub seed: u64,
    pub nucleations: Vec<Nucleation>,
    pub crossings: Vec<Crossing>,
    pub horizontal: Vec<Segment>,
    pub vertical: Vec<Segment>,
}

#[inline]
fn key(y: f64) -> u64 {
    // order-preserving for non-negative floats
    y.to_bits()
}

/// Poisson points in [0, a] x [0, b] with pairwise distinct coordinates,
/// sorted by x.
fn poisson_points(a: f64, b: f64, intensity: f64, rng: &mut Stream) -> Vec<(f64, f64)> {
    let mean = intensity * a * b;
    loop {
        let n = if mean > 0.0 {
            Poisson::new(mean).expect("finite positive mean").sample(rng) as usize
        } else {
            0
        };
        let mut pts: Vec<(f64, f64)> = (0..n)
            .map(|_| (rng.uniform_open() * a, rng.uniform_open() * b))
            .collect();
        pts.sort_by(|p, q| p.0.total_cmp(&q.0));
        let xs_distinct = pts.windows(2).all(|w| w[0].0 != w[1].0);
        let mut ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
        ys.sort_by(f64::total_cmp);
        if xs_distinct && ys.windows(2).all(|w| w[0] != w[1]) {
            return pts;
        }
    }
}

struct Builder {
    d: RayDiagram,
    alive: BTreeMap<u64, usize>,
}

impl Builder {
    fn new(chi: f64, eta: f64, intensity: f64, t: f64, seed: u64) -> Self {
        Self {
            d: RayDiagram {
                rect: (chi, eta),
                intensity,
                t,
                seed,
                nucleations: Vec::new(),
                crossings: Vec::new(),
                horizontal: Vec::new(),
                vertical: Vec::new(),
            },
            alive: BTreeMap::new(),
        }
    }

    fn nucleate(&mut self, x: f64, y: f64, column: Option<usize>) -> usize {
        let id = self.d.nucleations.len();
        self.d.nucleations.push(Nucleation { x, y, column });
        let seg = Segment {
            source: id,
            origin: (x, y),
            end: None,
        };
        self.d.horizontal.push(seg);
        self.d.vertical.push(seg);
        id
    }

    /// Bulk nucleation: the new vertical ray meets alive horizontal rays above it
    /// from the bottom up, then the new horizontal ray joins the alive set.
    fn bulk<F: FnMut(&Crossing) -> Decision>(&mut self, x: f64, y: f64, decide: &mut F) {
        let id = self.nucleate(x, y, None);
        let mut killed = None;
        for (&k, &h) in self.alive.range((Bound::Excluded(key(y)), Bound::Unbounded)) {
            let yh = f64::from_bits(k);
            let mut c = Crossing {
                x,
                y: yh,
                horizontal: h,
                vertical: Some(id),
                decision: Decision::Pass,
            };
            c.decision = decide(&c);
            self.d.crossings.push(c);
            if c.decision == Decision::Annihilate {
                killed = Some((k, h, yh));
                break;
            }
        }
        if let Some((k, h, yh)) = killed {
            self.alive.remove(&k);
            self.d.horizontal[h].end = Some(x);
            self.d.vertical[id].end = Some(yh);
        }
        self.alive.insert(key(y), id);
    }
}

/// Sweep a fixed set of bulk nucleations with caller-supplied crossing decisions.
pub fn diagram_from_points<F>(chi: f64, eta: f64, t: f64, points: &[(f64, f64)], mut decide: F) -> RayDiagram
where
    F: FnMut(&Crossing) -> Decision,
{
    let mut pts = points.to_vec();
    pts.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut b = Builder::new(chi, eta, 0.0, t, 0);
    for (x, y) in pts {
        b.bulk(x, y, &mut decide);
    }
    b.d
}

fn coin(t: f64, rng: &mut Stream) -> impl FnMut(&Crossing) -> Decision + '_ {
    move |_| {
        if rng.uniform() < t {
            Decision::Pass
        } else {
            Decision::Annihilate
        }
    }
}

fn check_args(chi: f64, eta: f64, intensity: f64, t: f64) -> Result<()> {
    if !(chi > 0.0 && eta > 0.0) || !(intensity >= 0.0) || !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!(
            "need chi, eta > 0, intensity >= 0, t in [0,1]; got {chi}, {eta}, {intensity}, {t}"
        )));
    }
    Ok(())
}

pub fn sample_png(chi: f64, eta: f64, intensity: f64, t: f64, seed: u64) -> Result<RayDiagram> {
    check_args(chi, eta, intensity, t)?;
    let mut pts_rng = Stream::keyed(seed, &[0]);
    let pts = poisson_points(chi, eta, intensity, &mut pts_rng);
    let mut rng = Stream::keyed(seed, &[1]);
    let mut decide = coin(t, &mut rng);
    let mut b = Builder::new(chi, eta, intensity, t, seed);
    for (x, y) in pts {
        b.bulk(x, y, &mut decide);
    }
    Ok(b.d)
}

/// H at the far corner without building a diagram (same law and same stream
/// layout as `sample_png`).
pub fn corner_height(chi: f64, eta: f64, intensity: f64, t: f64, seed: u64) -> Result<u32> {
    check_args(chi, eta, intensity, t)?;
    let mut pts_rng = Stream::keyed(seed, &[0]);
    let pts = poisson_points(chi, eta, intensity, &mut pts_rng);
    let mut rng = Stream::keyed(seed, &[1]);
    let mut alive: BTreeMap<u64, ()> = BTreeMap::new();
    for (_, y) in pts {
        let mut killed = None;
        for (&k, _) in alive.range((Bound::Excluded(key(y)), Bound::Unbounded)) {
            if rng.uniform() >= t {
                killed = Some(k);
                break;
            }
        }
        if let Some(k) = killed {
            alive.remove(&k);
        }
        alive.insert(key(y), ());
    }
    Ok(alive.len() as u32)
}

/// t-PNG with m boundary source columns of intensities theta * beta_j placed west of
/// the rectangle; horizontal rays leaving the last column enter the bulk at x = 0.
pub fn sample_png_boundary(chi: f64, eta: f64, theta: f64, t: f64, beta: &[f64], seed: u64) -> Result<RayDiagram> {
    check_args(chi, eta, theta * theta, t)?;
    if beta.iter().any(|&b| !(b > 0.0)) {
        return Err(Error::Domain("boundary intensities beta_j must be positive".into()));
    }
    let m = beta.len();
    let mut b = Builder::new(chi, eta, theta * theta, t, seed);
    let mut rng = Stream::keyed(seed, &[1]);
    // horizontal rays travelling east, sorted by height
    let mut incoming: Vec<(f64, usize)> = Vec::new();
    for (j, &bj) in beta.iter().enumerate() {
        let xj = j as f64 - m as f64;
        let mut col_rng = Stream::keyed(seed, &[2, j as u64]);
        let mean = theta * bj * eta;
        let n = Poisson::new(mean).map(|p| p.sample(&mut col_rng) as usize).unwrap_or(0);
        let mut ys: Vec<f64> = (0..n).map(|_| col_rng.uniform_open() * eta).collect();
        ys.sort_by(f64::total_cmp);
        // merge nucleations and incoming rays by height
        let mut alive_vert: Vec<usize> = Vec::new();
        let mut outgoing: Vec<(f64, usize)> = Vec::new();
        let (mut a, mut c) = (0, 0);
        while a < ys.len() || c < incoming.len() {
            let take_nuc = c >= incoming.len() || (a < ys.len() && ys[a] < incoming[c].0);
            if take_nuc {
                let id = b.nucleate(xj, ys[a], Some(j + 1));
                alive_vert.push(id);
                outgoing.push((ys[a], id));
                a += 1;
            } else {
                let (y, h) = incoming[c];
                c += 1;
                let i = alive_vert.len() as i32;
                if i == 0 {
                    outgoing.push((y, h));
                    continue;
                }
                if rng.uniform() < t.powi(i) {
                    b.d.crossings.push(Crossing {
                        x: xj,
                        y,
                        horizontal: h,
                        vertical: None,
                        decision: Decision::Pass,
                    });
                    outgoing.push((y, h));
                } else {
                    // alive_vert is sorted by nucleation height; kill the highest
                    let v = alive_vert.pop().unwrap();
                    b.d.crossings.push(Crossing {
                        x: xj,
                        y,
                        horizontal: h,
                        vertical: Some(v),
                        decision: Decision::Annihilate,
                    });
                    b.d.horizontal[h].end = Some(xj);
                    b.d.vertical[v].end = Some(y);
                }
            }
        }
        outgoing.sort_by(|p, q| p.0.total_cmp(&q.0));
        incoming = outgoing;
    }
    for (y, h) in incoming {
        b.alive.insert(key(y), h);
    }
    let mut pts_rng = Stream::keyed(seed, &[0]);
    let pts = poisson_points(chi, eta, theta * theta, &mut pts_rng);
    let mut decide = coin(t, &mut rng);
    for (x, y) in pts {
        b.bulk(x, y, &mut decide);
    }
    Ok(b.d)
}

/// Number of horizontal rays crossing {x} x [0, y].
pub fn png_height(d: &RayDiagram, x: f64, y: f64) -> Result<u32> {
    let (chi, eta) = d.rect;
    if !(0.0..=chi).contains(&x) || !(0.0..=eta).contains(&y) {
        return Err(Error::OutOfDomain(format!("({x},{y}) outside [0,{chi}]x[0,{eta}]")));
    }
    Ok(d.horizontal
        .iter()
        .filter(|s| s.origin.0 <= x && s.origin.1 <= y && s.end.is_none_or(|e| x < e))
        .count() as u32)
}

/// Height field on an (nx+1) x (ny+1) grid, rows indexed by y.
pub fn height_grid(d: &RayDiagram, nx: usize, ny: usize) -> Vec<Vec<u32>> {
    let (chi, eta) = d.rect;
    (0..=ny)
        .map(|b| {
            let y = eta * b as f64 / ny.max(1) as f64;
            (0..=nx)
                .map(|a| png_height(d, chi * a as f64 / nx.max(1) as f64, y).unwrap())
                .collect()
        })
        .collect()
}

/// Chains of nucleations i_1 < i_2 < ... where the horizontal ray of i_k is
/// annihilated by the vertical ray of i_{k+1}. Indices refer to `d.nucleations`.
pub fn broken_lines(d: &RayDiagram) -> Vec<Vec<usize>> {
    let n = d.nucleations.len();
    let mut next = vec![None; n];
    let mut has_prev = vec![false; n];
    for c in &d.crossings {
        if let (Decision::Annihilate, Some(v)) = (c.decision, c.vertical) {
            next[c.horizontal] = Some(v);
            has_prev[v] = true;
        }
    }
    let mut lines: Vec<Vec<usize>> = (0..n)
        .filter(|&i| !has_prev[i])
        .map(|start| {
            let mut line = vec![start];
            let mut cur = start;
            while let Some(nx) = next[cur] {
                line.push(nx);
                cur = nx;
            }
            line
        })
        .collect();
    lines.sort();
    lines
}

/// Rectangle coordinates of the light-cone point (x, tau), |x| < tau. The
/// rectangle spanned from the origin has area (tau^2 - x^2) / 2.
pub fn light_cone_to_rect(x: f64, tau: f64) -> (f64, f64) {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    ((tau + x) * r, (tau - x) * r)
}

pub fn rect_to_light_cone(a: f64, b: f64) -> (f64, f64) {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    ((a - b) * r, (a + b) * r)
}
