//! Replica estimation, empirical laws and their comparison, height normalizations.

pub mod tw;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::qmath::Scalar;
use crate::rng::derive;
use crate::symfun::Estimate;

pub use tw::{tw_reference, TwReference};

/// Default significance of distributional tests.
pub const SIGNIFICANCE: f64 = 1e-3;

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// Run `f` on replica seeds derive(seed, [i]) for i < n. The output order (and
/// so every downstream number) does not depend on `workers`.
pub fn replicate<T, F>(n: u64, seed: u64, workers: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync,
{
    let workers = workers.max(1).min(n.max(1) as usize);
    if workers == 1 {
        return (0..n).map(|i| f(derive(seed, &[i]))).collect();
    }
    let chunk = n.div_ceil(workers as u64);
    let f = &f;
    let parts: Vec<Result<Vec<T>>> = std::thread::scope(|sc| {
        let handles: Vec<_> = (0..workers as u64)
            .map(|w| {
                sc.spawn(move || {
                    let lo = w * chunk;
                    let hi = ((w + 1) * chunk).min(n);
                    (lo..hi).map(|i| f(derive(seed, &[i]))).collect::<Result<Vec<T>>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    let mut out = Vec::with_capacity(n as usize);
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

/// Sample mean and standard error of a functional over independent replicas.
pub fn estimate<F>(n: u64, seed: u64, workers: usize, f: F) -> Result<Estimate>
where
    F: Fn(u64) -> Result<f64> + Sync,
{
    if n < 2 {
        return Err(Error::Domain("estimate needs at least 2 replicas".into()));
    }
    let vals = replicate(n, seed, workers, |s| {
        let v = f(s)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite(format!(
                "functional returned {v} for replica seed {s}"
            )))
        }
    })?;
    Ok(mean_stderr(&vals))
}

pub fn mean_stderr(vals: &[f64]) -> Estimate {
    let n = vals.len() as f64;
    let mean = f64::sum(vals.iter().copied()) / n;
    let var = f64::sum(vals.iter().map(|v| (v - mean).powi(2))) / (n - 1.0);
    Estimate {
        value: mean,
        error: (var / n).sqrt(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
    pub mean_err: f64,
    pub variance_err: f64,
    pub skewness_err: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct EmpiricalDistribution {
    pub samples: Vec<f64>,
}

fn central(s1: f64, s2: f64, s3: f64, n: f64) -> (f64, f64, f64) {
    let m = s1 / n;
    let m2 = s2 / n - m * m;
    let m3 = s3 / n - 3.0 * m * s2 / n + 2.0 * m * m * m;
    let var = m2 * n / (n - 1.0);
    (m, var, m3 / m2.powf(1.5))
}

impl EmpiricalDistribution {
    pub fn new(samples: Vec<f64>) -> Self {
        Self { samples }
    }

    /// Mean, variance, skewness with delete-one jackknife errors.
    pub fn moments(&self) -> Result<Moments> {
        let n = self.samples.len();
        if n < 3 {
            return Err(Error::Empty("moments need at least 3 samples".into()));
        }
        // shift for stable power sums
        let c = self.samples[0];
        let d: Vec<f64> = self.samples.iter().map(|x| x - c).collect();
        let s1 = f64::sum(d.iter().copied());
        let s2 = f64::sum(d.iter().map(|x| x * x));
        let s3 = f64::sum(d.iter().map(|x| x * x * x));
        let nf = n as f64;
        let (m, var, skew) = central(s1, s2, s3, nf);
        let mut jk = [Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n)];
        for x in &d {
            let (a, b, s) = central(s1 - x, s2 - x * x, s3 - x * x * x, nf - 1.0);
            jk[0].push(a);
            jk[1].push(b);
            jk[2].push(s);
        }
        let err = |v: &[f64]| {
            let mu = v.iter().sum::<f64>() / nf;
            ((nf - 1.0) / nf * v.iter().map(|x| (x - mu).powi(2)).sum::<f64>()).sqrt()
        };
        Ok(Moments {
            count: n,
            mean: m + c,
            variance: var,
            skewness: skew,
            mean_err: err(&jk[0]),
            variance_err: err(&jk[1]),
            skewness_err: err(&jk[2]),
        })
    }
}

/// Integer-valued sample summarized as counts.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Histogram {
    pub counts: BTreeMap<i64, u64>,
}

impl Histogram {
    pub fn from_values<I: IntoIterator<Item = i64>>(vals: I) -> Self {
        let mut h = Self::default();
        for v in vals {
            *h.counts.entry(v).or_insert(0) += 1;
        }
        h
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn pmf(&self) -> BTreeMap<i64, f64> {
        let n = self.total() as f64;
        self.counts.iter().map(|(&k, &c)| (k, c as f64 / n)).collect()
    }

    pub fn count(&self, k: i64) -> u64 {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    pub fn mean(&self) -> f64 {
        let n = self.total() as f64;
        self.counts.iter().map(|(&k, &c)| k as f64 * c as f64).sum::<f64>() / n
    }

    /// "value,count" lines with a header.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("value,count\n");
        for (k, c) in &self.counts {
            s.push_str(&format!("{k},{c}\n"));
        }
        s
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Reference<'a> {
    Sample(&'a Histogram),
    Exact(&'a BTreeMap<i64, f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LawComparison {
    pub tv: f64,
    pub ks: f64,
    pub chi2: f64,
    pub dof: usize,
    pub p_value: f64,
    pub significance: f64,
    pub pass: bool,
}

/// Merge adjacent bins (in support order) until every bin has at least `min` expected counts.
fn pool(cells: Vec<(f64, f64)>, min: f64) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::new();
    let mut acc = (0.0, 0.0);
    for c in cells {
        acc.0 += c.0;
        acc.1 += c.1;
        if acc.0.min(acc.1) >= min {
            out.push(acc);
            acc = (0.0, 0.0);
        }
    }
    if acc.0 + acc.1 > 0.0 {
        match out.last_mut() {
            Some(last) => {
                last.0 += acc.0;
                last.1 += acc.1;
            }
            None => out.push(acc),
        }
    }
    out
}

/// TV, KS and a chi-square test (two-sample or goodness of fit) at `significance`.
pub fn compare_laws(a: &Histogram, b: Reference<'_>, significance: f64) -> Result<LawComparison> {
    let na = a.total() as f64;
    if na == 0.0 {
        return Err(Error::Empty("first sample is empty".into()));
    }
    let pa = a.pmf();
    let (pb, nb): (BTreeMap<i64, f64>, Option<f64>) = match b {
        Reference::Sample(h) => {
            if h.total() == 0 {
                return Err(Error::Empty("second sample is empty".into()));
            }
            (h.pmf(), Some(h.total() as f64))
        }
        Reference::Exact(p) => {
            if p.is_empty() {
                return Err(Error::Empty("reference law is empty".into()));
            }
            (p.clone(), None)
        }
    };
    let support: Vec<i64> = pa
        .keys()
        .chain(pb.keys())
        .copied()
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let get = |m: &BTreeMap<i64, f64>, k: i64| m.get(&k).copied().unwrap_or(0.0);
    let tv = 0.5 * support.iter().map(|&k| (get(&pa, k) - get(&pb, k)).abs()).sum::<f64>();
    let mut ca = 0.0;
    let mut cb = 0.0;
    let mut ks: f64 = 0.0;
    for &k in &support {
        ca += get(&pa, k);
        cb += get(&pb, k);
        ks = ks.max((ca - cb).abs());
    }
    let (chi2, bins) = match nb {
        Some(nb) => {
            // cells: (count in a, count in b)
            let cells = support.iter().map(|&k| (get(&pa, k) * na, get(&pb, k) * nb)).collect();
            let cells = pool(cells, 5.0);
            let (r1, r2) = ((nb / na).sqrt(), (na / nb).sqrt());
            let s = cells
                .iter()
                .map(|&(x, y)| (x * r1 - y * r2).powi(2) / (x + y))
                .sum::<f64>();
            (s, cells.len())
        }
        None => {
            let missing = (1.0 - pb.values().sum::<f64>()).max(0.0);
            // (observed, expected), pooled on expected counts only
            let mut pooled: Vec<(f64, f64)> = Vec::new();
            let mut acc = (0.0, 0.0);
            for &k in &support {
                acc.0 += get(&pa, k) * na;
                acc.1 += get(&pb, k) * na;
                if acc.1 >= 5.0 {
                    pooled.push(acc);
                    acc = (0.0, 0.0);
                }
            }
            acc.1 += missing * na;
            if acc.0 + acc.1 > 0.0 {
                match pooled.last_mut() {
                    Some(l) => {
                        l.0 += acc.0;
                        l.1 += acc.1;
                    }
                    None => pooled.push(acc),
                }
            }
            let s = pooled
                .iter()
                .map(|&(o, e)| {
                    if e > 0.0 {
                        (o - e).powi(2) / e
                    } else if o > 0.0 {
                        f64::INFINITY
                    } else {
                        0.0
                    }
                })
                .sum::<f64>();
            (s, pooled.len())
        }
    };
    let dof = bins.saturating_sub(1);
    let p_value = if dof == 0 {
        1.0
    } else if chi2.is_finite() {
        1.0 - ChiSquared::new(dof as f64)
            .map_err(|e| Error::Domain(e.to_string()))?
            .cdf(chi2)
    } else {
        0.0
    };
    Ok(LawComparison {
        tv,
        ks,
        chi2,
        dof,
        p_value,
        significance,
        pass: p_value >= significance,
    })
}

/// Half the sum of z-sigma multinomial bands: the TV distance an n-sample
/// histogram of `pmf` stays below with high probability.
pub fn tv_envelope(pmf: &[f64], n: u64, z: f64) -> f64 {
    0.5 * pmf
        .iter()
        .map(|&p| z * (p.max(0.0) * (1.0 - p).max(0.0) / n as f64).sqrt())
        .sum::<f64>()
}

/// Centering and scaling of H(xN, yN) in the Tracy-Widom limit.
pub fn tw_constants(t: f64, theta: f64, x: f64, y: f64) -> (f64, f64) {
    let mu = 2.0 * theta * (x * y).sqrt() / (1.0 - t).sqrt();
    let sigma = theta.cbrt() * (x * y).powf(1.0 / 6.0) * (1.0 - t).powf(-1.0 / 6.0);
    (mu, sigma)
}

/// (h - mu N) / (sigma N^{1/3})
pub fn tw_normalize(h: f64, n: f64, t: f64, theta: f64, x: f64, y: f64) -> Result<f64> {
    if !(n > 0.0) {
        return Err(Error::Domain("N must be positive".into()));
    }
    let (mu, sigma) = tw_constants(t, theta, x, y);
    Ok((h - mu * n) / (sigma * n.cbrt()))
}

/// eps (h - eps^{-3} T) - log eps with T = 2 sqrt(chi eta).
pub fn kpz_normalize(h: f64, chi: f64, eta: f64, eps: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::Domain("eps must be positive".into()));
    }
    let big_t = 2.0 * (chi * eta).sqrt();
    Ok(eps * (h - big_t / eps.powi(3)) - eps.ln())
}
