//! The quadrant partition function of the stochastic six-vertex model with a
//! t-boson tower: brute force, determinant and Schur expansion.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::sample_sixvertex;
use crate::qmath::{Rational, Scalar};
use crate::rng::{derive, Stream};
use crate::symfun::{partitions_in_box, schur_eval, Estimate, Specialization};
use crate::weights::{sixvertex_weight, ArrowConfig};

const MAX_BRUTE: usize = 6;

/// Row rapidities x (one per row), column rapidities y, tower offset k.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HybridParams<S> {
    pub x: Vec<S>,
    pub y: Vec<S>,
    pub k: u32,
    pub t: S,
}

impl<S: Scalar> HybridParams<S> {
    pub fn new(x: Vec<S>, y: Vec<S>, k: u32, t: S) -> Result<Self> {
        if x.is_empty() || y.is_empty() {
            return Err(Error::Domain("need at least one row and one column".into()));
        }
        let tf = t.to_f64();
        if !(0.0..1.0).contains(&tf) {
            return Err(Error::Domain(format!("t must lie in [0,1), got {tf}")));
        }
        Ok(Self { x, y, k, t })
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn to_f64(&self) -> HybridParams<f64> {
        HybridParams {
            x: self.x.iter().map(S::to_f64).collect(),
            y: self.y.iter().map(S::to_f64).collect(),
            k: self.k,
            t: self.t.to_f64(),
        }
    }
}

/// prod_{b=1}^{m} (1 - t^{k+b}) = (t^{k+1};t)_inf / (t^{k+1+m};t)_inf
fn tower<S: Scalar>(t: &S, k: u32, m: usize) -> Result<S> {
    let mut v = S::one();
    for b in 1..=m {
        v = v * (S::one() - t.ipow(k as i64 + b as i64)?);
    }
    Ok(v)
}

/// Exact law of the number of paths leaving the east side of the rectangle,
/// with one path entering from the west on every row and none from the south.
/// Summed column by column over all horizontal occupancy patterns.
pub fn sixv_height_law<S: Scalar>(x: &[S], y: &[S], t: &S) -> Result<Vec<S>> {
    if x.len() > MAX_BRUTE || y.len() > MAX_BRUTE {
        return Err(Error::Resource(format!(
            "enumeration is limited to {MAX_BRUTE}x{MAX_BRUTE}"
        )));
    }
    let rows = x.len();
    let mut states: BTreeMap<Vec<u8>, S> = BTreeMap::new();
    states.insert(vec![1; rows], S::one());
    for yb in y {
        let mut next: BTreeMap<Vec<u8>, S> = BTreeMap::new();
        for (west, w0) in &states {
            // (east outputs so far, vertical carry, weight)
            let mut partial = vec![(Vec::with_capacity(rows), 0u8, w0.clone())];
            for (a, xa) in x.iter().enumerate() {
                let r = xa.clone() * yb.clone();
                let mut grown = Vec::new();
                for (east, i1, w) in partial {
                    let j1 = west[a];
                    for j2 in 0..=1u8 {
                        let Some(i2) = (i1 + j1).checked_sub(j2) else { continue };
                        if i2 > 1 {
                            continue;
                        }
                        let c = ArrowConfig::new(i1 as u32, j1 as u32, i2 as u32, j2 as u32);
                        let vw = sixvertex_weight(&r, t, c)?;
                        if vw.is_zero() {
                            continue;
                        }
                        let mut e = east.clone();
                        e.push(j2);
                        grown.push((e, i2, w.clone() * vw));
                    }
                }
                partial = grown;
            }
            for (east, _, w) in partial {
                let slot = next.entry(east).or_insert_with(S::zero);
                *slot = slot.clone() + w;
            }
        }
        states = next;
    }
    let mut law = vec![S::zero(); rows + 1];
    for (east, w) in states {
        let m = east.iter().filter(|&&e| e == 1).count();
        law[m] = law[m].clone() + w;
    }
    Ok(law)
}

fn prod<S: Scalar>(v: &[S]) -> S {
    v.iter().fold(S::one(), |a, b| a * b.clone())
}

/// Z by summing over all configurations: prod y_a * sum_m P(h = m) prod_{b<=m} (1 - t^{k+b}).
pub fn z_bruteforce<S: Scalar>(p: &HybridParams<S>) -> Result<S> {
    let law = sixv_height_law(&p.x, &p.y, &p.t)?;
    let mut terms = Vec::new();
    for (m, pm) in law.into_iter().enumerate() {
        terms.push(pm * tower(&p.t, p.k, m)?);
    }
    Ok(prod(&p.y) * S::sum(terms))
}

/// Closed form: prefactor times det[(1 - t^{k+1} - t(1 - t^k) x_i y_j) / ((1 - x_i y_j)(1 - t x_i y_j))].
pub fn z_determinant<S: Scalar>(p: &HybridParams<S>) -> Result<S> {
    let n = p.n();
    if p.y.len() != n {
        return Err(Error::Domain("the determinant needs as many columns as rows".into()));
    }
    let one = S::one();
    let tk = p.t.ipow(p.k as i64)?;
    let tk1 = tk.clone() * p.t.clone();
    let mut vdm = one.clone();
    for i in 0..n {
        for j in i + 1..n {
            let d = (p.x[i].clone() - p.x[j].clone()) * (p.y[i].clone() - p.y[j].clone());
            if d.is_zero() {
                return Err(Error::Domain(
                    "coincident x's or y's: removable singularity, perturb the parameters".into(),
                ));
            }
            vdm = vdm * d;
        }
    }
    let mut cross = one.clone();
    let mut m = vec![vec![S::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let r = p.x[i].clone() * p.y[j].clone();
            let d1 = one.clone() - r.clone();
            let d2 = one.clone() - p.t.clone() * r.clone();
            if d1.is_zero() || d2.is_zero() {
                return Err(Error::Pole(format!("x_{} y_{} is 1 or 1/t", i + 1, j + 1)));
            }
            cross = cross * d1.clone();
            let num = one.clone() - tk1.clone() - p.t.clone() * (one.clone() - tk.clone()) * r;
            m[i][j] = num / (d1 * d2);
        }
    }
    (prod(&p.y) * cross / vdm * S::det(m)).check("determinant form")
}

/// Schur measure with weights prod (1 - x_i y_j) s_lambda(x) s_lambda(y) on the
/// partitions with at most N = |x| rows and lambda_1 <= cutoff. Returns the
/// expectation of prod_{i<=N} (1 + zeta t^{lambda_i - i + N}) and the missing
/// mass times a bound on the functional.
pub fn schur_zeta_expectation(x: &[f64], y: &[f64], t: f64, zeta: f64, cutoff: u32) -> Result<Estimate> {
    if x.iter().chain(y).any(|v| !(*v >= 0.0)) {
        return Err(Error::Domain("alphabets must be non-negative".into()));
    }
    let norm: f64 = x.iter().flat_map(|a| y.iter().map(move |b| 1.0 - a * b)).product();
    if x.iter().any(|a| y.iter().any(|b| a * b >= 1.0)) {
        return Err(Error::Domain("the Schur expansion needs x_i y_j < 1".into()));
    }
    let n = x.len();
    let rx = Specialization::alphabet(x.to_vec());
    let ry = Specialization::alphabet(y.to_vec());
    let mut mass = Vec::new();
    let mut terms = Vec::new();
    for lambda in partitions_in_box(n.min(y.len()), cutoff) {
        let w = norm * schur_eval(&lambda, &rx) * schur_eval(&lambda, &ry);
        let mut f = 1.0;
        for i in 1..=n {
            f *= 1.0 + zeta * t.powi(lambda.part(i) as i32 + n as i32 - i as i32);
        }
        mass.push(w);
        terms.push(w * f);
    }
    let missing = (1.0 - f64::sum(mass)).max(0.0);
    let bound = (1.0 + zeta.abs()).powi(n as i32);
    Ok(Estimate {
        value: f64::sum(terms),
        error: missing * bound,
    })
}

/// prod y_a * E_SM[prod (1 - t^{k+1+lambda_i-i+N})]
pub fn z_schur_expansion(p: &HybridParams<f64>, cutoff: u32) -> Result<Estimate> {
    let py = prod(&p.y);
    let e = schur_zeta_expectation(&p.x, &p.y, p.t, -p.t.powi(p.k as i32 + 1), cutoff)?;
    Ok(Estimate {
        value: py * e.value,
        error: py * e.error,
    })
}

/// E_6v[prod_{b<h} (1 + zeta t^b)] exactly; zeta = -t^{k+1} gives the tower ratio.
pub fn sixv_zeta_exact<S: Scalar>(x: &[S], y: &[S], t: &S, zeta: &S) -> Result<S> {
    let law = sixv_height_law(x, y, t)?;
    let mut terms = Vec::new();
    let mut f = S::one();
    for (m, pm) in law.into_iter().enumerate() {
        if m > 0 {
            f = f * (S::one() + zeta.clone() * t.ipow(m as i64 - 1)?);
        }
        terms.push(pm * f.clone());
    }
    Ok(S::sum(terms))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SixvMode {
    ExactEnumeration,
    Mc,
}

/// E_6v[(t^{k+1};t)_inf / (t^{k+1+h(N,N)};t)_inf]; `budget` is the MC sample count.
pub fn sixv_expectation(p: &HybridParams<f64>, mode: SixvMode, budget: u64, seed: u64) -> Result<Estimate> {
    match mode {
        SixvMode::ExactEnumeration => {
            let zeta = -p.t.powi(p.k as i32 + 1);
            let v = sixv_zeta_exact(&p.x, &p.y, &p.t, &zeta)?;
            Ok(Estimate { value: v, error: 0.0 })
        }
        SixvMode::Mc => {
            if budget < 2 {
                return Err(Error::Domain("MC mode needs at least 2 samples".into()));
            }
            let mut vals = Vec::with_capacity(budget as usize);
            for i in 0..budget {
                let (_, h) = sample_sixvertex(&p.x, &p.y, p.t, derive(seed, &[i]))?;
                vals.push(tower(&p.t, p.k, h as usize)?);
            }
            let n = vals.len() as f64;
            let mean = f64::sum(vals.iter().copied()) / n;
            let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
            Ok(Estimate {
                value: mean,
                error: (var / n).sqrt(),
            })
        }
    }
}

/// Random rational instance with distinct x_i, y_j in {1/10, ..., 7/10}, so |x_i y_j| < 1/2.
pub fn random_rational_params(n: usize, t: Rational, k: u32, rng: &mut Stream) -> HybridParams<Rational> {
    let mut pick = || {
        let mut pool: Vec<i64> = (1..=7).collect();
        let mut out = Vec::new();
        for _ in 0..n {
            let i = (rng.uniform() * pool.len() as f64) as usize;
            out.push(crate::qmath::ratio(pool.swap_remove(i), 10));
        }
        out
    };
    let x = pick();
    let y = pick();
    HybridParams { x, y, k, t }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetformReport {
    pub params: HybridParams<f64>,
    pub values: BTreeMap<String, f64>,
    pub discrepancies: BTreeMap<String, f64>,
    pub exact_equal: bool,
    pub pass: bool,
}

/// Brute force vs determinant (exactly) vs Schur expansion (within its tail plus `tol`).
pub fn verify_instance(p: &HybridParams<Rational>, cutoff: u32, tol: f64) -> Result<DetformReport> {
    let brute = z_bruteforce(p)?;
    let det = z_determinant(p)?;
    let pf = p.to_f64();
    let schur = z_schur_expansion(&pf, cutoff)?;
    let b = brute.to_f64();
    let mut values = BTreeMap::new();
    values.insert("bruteforce".to_string(), b);
    values.insert("determinant".to_string(), det.to_f64());
    values.insert("schur".to_string(), schur.value);
    values.insert("schur_tail".to_string(), schur.error);
    let mut discrepancies = BTreeMap::new();
    discrepancies.insert(
        "bruteforce-determinant".to_string(),
        (brute.clone() - det.clone()).to_f64().abs(),
    );
    let ds = (b - schur.value).abs();
    discrepancies.insert("bruteforce-schur".to_string(), ds);
    let exact_equal = brute == det;
    Ok(DetformReport {
        params: pf,
        values,
        discrepancies,
        exact_equal,
        pass: exact_equal && ds <= schur.error + tol,
    })
}
