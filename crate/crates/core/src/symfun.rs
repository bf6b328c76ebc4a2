//! Partitions, Schur functions under (alpha | beta | gamma) specializations,
//! Plancherel sampling and the Schur-side observable of the t-PNG height.

use nalgebra::{DMatrix, DVector};
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::patience::random_deck;
use crate::qmath::{qpoch_inf, Scalar};
use crate::rng::{derive, Stream};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Domain(format!("{parts:?} is not a partition")));
        }
        Ok(Self(parts))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Part j (1-based), zero beyond the length.
    pub fn part(&self, j: usize) -> u32 {
        self.0.get(j - 1).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.part(1);
        Partition(
            (1..=first)
                .map(|c| self.0.iter().filter(|&&p| p >= c).count() as u32)
                .collect(),
        )
    }

    pub fn ln_hook_product(&self) -> f64 {
        let conj = self.conjugate();
        let mut s = 0.0;
        for (i, &row) in self.0.iter().enumerate() {
            for j in 0..row as usize {
                let hook = row as usize - j + conj.0[j] as usize - i - 1;
                s += (hook as f64).ln();
            }
        }
        s
    }

    /// Number of standard Young tableaux, by the hook length formula.
    pub fn dimension(&self) -> f64 {
        (ln_gamma(self.size() as f64 + 1.0) - self.ln_hook_product())
            .exp()
            .round()
    }
}

/// Partitions of n, in lexicographic order of their part lists.
pub fn partitions_of(n: u32) -> Vec<Partition> {
    fn rec(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            cur.push(p);
            rec(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out.reverse();
    out
}

/// All partitions of size at most `budget`, by size and then lexicographically.
pub fn partitions_up_to(budget: u32) -> Vec<Partition> {
    (0..=budget).flat_map(partitions_of).collect()
}

/// Partitions fitting in a box with at most `rows` parts, each at most `cols`.
pub fn partitions_in_box(rows: usize, cols: u32) -> Vec<Partition> {
    fn rec(rows: usize, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        out.push(Partition(cur.clone()));
        if cur.len() == rows {
            return;
        }
        for p in 1..=max {
            cur.push(p);
            rec(rows, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(rows, cols, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| a.size().cmp(&b.size()).then_with(|| a.cmp(b)));
    out
}

/// Specialization (alpha | beta | gamma) at q = t.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Specialization<S> {
    pub alpha: Vec<S>,
    pub beta: Vec<S>,
    pub gamma: S,
}

impl<S: Scalar> Specialization<S> {
    pub fn pure_gamma(gamma: S) -> Self {
        Self {
            alpha: Vec::new(),
            beta: Vec::new(),
            gamma,
        }
    }

    /// Finite alphabet x_1..x_n, i.e. s_lambda(x).
    pub fn alphabet(xs: Vec<S>) -> Self {
        Self {
            alpha: xs,
            beta: Vec::new(),
            gamma: S::zero(),
        }
    }

    pub fn is_pure_gamma(&self) -> bool {
        self.alpha.iter().all(S::is_zero) && self.beta.iter().all(S::is_zero)
    }
}

impl Specialization<f64> {
    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v >= 0.0;
        if self.alpha.iter().chain(&self.beta).all(|&v| ok(v)) && ok(self.gamma) {
            Ok(())
        } else {
            Err(Error::Domain(
                "specialization parameters must be finite and non-negative".into(),
            ))
        }
    }

    /// p_k(rho); gamma only enters p_1.
    pub fn power_sum(&self, k: u32) -> f64 {
        let a: f64 = self.alpha.iter().map(|x| x.powi(k as i32)).sum();
        let b: f64 = self.beta.iter().map(|x| x.powi(k as i32)).sum();
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        a + sign * b + if k == 1 { self.gamma } else { 0.0 }
    }
}

/// Coefficients h_0..h_kmax of e^{gamma z} prod (1 + beta z) / prod (1 - alpha z).
pub fn h_coeffs<S: Scalar>(rho: &Specialization<S>, kmax: usize) -> Vec<S> {
    let mut c = vec![S::zero(); kmax + 1];
    c[0] = S::one();
    for k in 1..=kmax {
        c[k] = c[k - 1].clone() * rho.gamma.clone() / S::from_i64(k as i64);
    }
    for b in &rho.beta {
        for k in (1..=kmax).rev() {
            c[k] = c[k].clone() + b.clone() * c[k - 1].clone();
        }
    }
    for a in &rho.alpha {
        for k in 1..=kmax {
            c[k] = c[k].clone() + a.clone() * c[k - 1].clone();
        }
    }
    c
}

/// Jacobi-Trudi: s_lambda = det[h_{lambda_i - i + j}].
pub fn schur_eval<S: Scalar>(lambda: &Partition, rho: &Specialization<S>) -> S {
    let l = lambda.len();
    if l == 0 {
        return S::one();
    }
    let h = h_coeffs(rho, lambda.part(1) as usize + l);
    let m = (0..l)
        .map(|i| {
            (0..l)
                .map(|j| {
                    let k = lambda.0[i] as i64 - i as i64 + j as i64;
                    if k < 0 {
                        S::zero()
                    } else {
                        h[k as usize].clone()
                    }
                })
                .collect()
        })
        .collect();
    S::det(m)
}

/// H(rho1; rho2) = exp(sum_k p_k(rho1) p_k(rho2) / k).
pub fn cauchy_kernel(rho1: &Specialization<f64>, rho2: &Specialization<f64>) -> Result<f64> {
    let mut log = 0.0;
    for k in 1..=100_000u32 {
        let term = rho1.power_sum(k) * rho2.power_sum(k) / k as f64;
        log += term;
        if k > 1 && term.abs() <= 1e-17 * log.abs().max(1.0) {
            return log.exp().check("Cauchy kernel");
        }
    }
    Err(Error::Domain("Cauchy kernel series does not converge".into()))
}

/// Common shape of the RSK tableaux (row insertion).
pub fn rsk_shape(perm: &[u32]) -> Partition {
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for &x in perm {
        let mut x = x;
        let mut r = 0;
        loop {
            if r == rows.len() {
                rows.push(vec![x]);
                break;
            }
            let p = rows[r].partition_point(|&y| y < x);
            if p == rows[r].len() {
                rows[r].push(x);
                break;
            }
            x = std::mem::replace(&mut rows[r][p], x);
            r += 1;
        }
    }
    Partition(rows.iter().map(|r| r.len() as u32).collect())
}

/// Poissonized Plancherel measure with parameter xi.
pub fn plancherel_sample(xi: f64, seed: u64) -> Result<Partition> {
    if !(xi >= 0.0 && xi.is_finite()) {
        return Err(Error::Domain(format!("xi must be finite and >= 0, got {xi}")));
    }
    if xi == 0.0 {
        return Ok(Partition::empty());
    }
    let mut rng = Stream::keyed(seed, &[5]);
    let n = Poisson::new(xi)
        .map_err(|e| Error::Domain(e.to_string()))?
        .sample(&mut rng) as usize;
    Ok(rsk_shape(&random_deck(n, &mut rng)))
}

/// e^{-xi} xi^{|lambda|} (dim lambda / |lambda|!)^2
pub fn plancherel_pmf(lambda: &Partition, xi: f64) -> f64 {
    let n = lambda.size() as f64;
    if xi == 0.0 {
        return if lambda.is_empty() { 1.0 } else { 0.0 };
    }
    (-xi + n * xi.ln() - 2.0 * lambda.ln_hook_product()).exp()
}

/// P[N > budget] for N ~ Poisson(xi).
pub fn poisson_tail(xi: f64, budget: u32) -> f64 {
    if xi == 0.0 {
        return 0.0;
    }
    let mut n = budget as f64 + 1.0;
    let mut term = (-xi + n * xi.ln() - ln_gamma(n + 1.0)).exp();
    let mut s = 0.0;
    while term > 0.0 && (term > 1e-300 && (term > s * 1e-17 || n < xi)) {
        s += term;
        n += 1.0;
        term *= xi / n;
    }
    s
}

/// 1 / (-zeta t^{-h}; t)_inf, written so that t = 0 needs no special case.
pub fn height_observable(h: u32, zeta: f64, t: f64) -> Result<f64> {
    if zeta == 0.0 {
        return Ok(1.0);
    }
    let mut v = 1.0 / qpoch_inf(-zeta, t)?;
    for j in 1..=h as i32 {
        let tj = t.powi(j);
        v *= tj / (tj + zeta);
    }
    v.check("height observable")
}

/// (-t^{-l} zeta; t)_inf^{-1} prod_{j<=l} (1 + zeta t^{lambda_j - j}).
pub fn schur_functional(lambda: &Partition, zeta: f64, t: f64) -> Result<f64> {
    if zeta == 0.0 {
        return Ok(1.0);
    }
    let mut v = 1.0 / qpoch_inf(-zeta, t)?;
    for (i, &p) in lambda.parts().iter().enumerate() {
        let tj = t.powi(i as i32 + 1);
        v *= (tj + zeta * t.powi(p as i32)) / (tj + zeta);
    }
    v.check("Schur functional")
}

/// The same functional through the conjugate partition:
/// prod_{j>=1} 1 / (1 + zeta t^{j - lambda'_j - 1}).
pub fn conjugate_product_functional(lambda: &Partition, zeta: f64, t: f64) -> Result<f64> {
    let conj = lambda.conjugate();
    let cols = conj.len() as i32;
    let mut v = 1.0 / qpoch_inf(-zeta * t.powi(cols), t)?;
    for (j, &c) in conj.parts().iter().enumerate() {
        v /= 1.0 + zeta * t.powi(j as i32 - c as i32);
    }
    v.check("conjugate product functional")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObservableMode {
    TruncatedExact,
    Mc,
}

/// A value with its error: a tail bound in exact mode, a standard error in MC mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Schur-measure expectation of [`schur_functional`]. `budget` is the size cutoff
/// in exact mode and the sample count in MC mode.
pub fn schur_observable_rhs(
    rho1: &Specialization<f64>,
    rho2: &Specialization<f64>,
    zeta: f64,
    t: f64,
    mode: ObservableMode,
    budget: u32,
    seed: u64,
) -> Result<Estimate> {
    rho1.validate()?;
    rho2.validate()?;
    if !(0.0..1.0).contains(&t) {
        return Err(Error::Domain(format!("t must lie in [0,1), got {t}")));
    }
    let plancherel = rho1.is_pure_gamma() && rho2.is_pure_gamma();
    match mode {
        ObservableMode::Mc => {
            if !plancherel {
                return Err(Error::Unsupported("MC mode needs pure-gamma specializations".into()));
            }
            if budget < 2 {
                return Err(Error::Domain("MC mode needs at least 2 samples".into()));
            }
            let xi = rho1.gamma * rho2.gamma;
            let mut vals = Vec::with_capacity(budget as usize);
            for i in 0..budget as u64 {
                let lambda = plancherel_sample(xi, derive(seed, &[i]))?;
                vals.push(schur_functional(&lambda, zeta, t)?);
            }
            let n = vals.len() as f64;
            let mean = f64::sum(vals.iter().copied()) / n;
            let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
            Ok(Estimate {
                value: mean,
                error: (var / n).sqrt(),
            })
        }
        ObservableMode::TruncatedExact => {
            let mut terms = Vec::new();
            let mut mass = Vec::new();
            if plancherel {
                let xi = rho1.gamma * rho2.gamma;
                for lambda in partitions_up_to(budget) {
                    let p = plancherel_pmf(&lambda, xi);
                    mass.push(p);
                    terms.push(p * schur_functional(&lambda, zeta, t)?);
                }
            } else {
                let norm = cauchy_kernel(rho1, rho2)?;
                for lambda in partitions_up_to(budget) {
                    let p = schur_eval(&lambda, rho1) * schur_eval(&lambda, rho2) / norm;
                    mass.push(p);
                    terms.push(p * schur_functional(&lambda, zeta, t)?);
                }
            }
            // |lambda| is Poisson(p_1 p_1) when one side is pure gamma
            let tail = if rho1.is_pure_gamma() || rho2.is_pure_gamma() {
                poisson_tail(rho1.power_sum(1) * rho2.power_sum(1), budget)
            } else {
                (1.0 - f64::sum(mass)).max(0.0)
            };
            // |f| <= 1 for zeta >= 0
            Ok(Estimate {
                value: f64::sum(terms),
                error: tail,
            })
        }
    }
}

/// The two specializations matched with H(chi, eta) of the t-PNG model with
/// boundary rates beta. Geometric progressions beta t^k are cut at t^k < 1e-12;
/// the returned number is the dropped mass sum.
pub fn png_specializations(
    chi: f64,
    eta: f64,
    theta: f64,
    t: f64,
    beta: &[f64],
) -> Result<(Specialization<f64>, Specialization<f64>, f64)> {
    if !(0.0..1.0).contains(&t) {
        return Err(Error::Domain(format!("t must lie in [0,1), got {t}")));
    }
    let rho1 = Specialization::pure_gamma(eta * theta);
    let mut tilde = Vec::new();
    let mut dropped = 0.0;
    for &b in beta {
        let mut tk = 1.0;
        while tk >= 1e-12 {
            tilde.push(b * tk);
            tk *= t;
            if t == 0.0 {
                break;
            }
        }
        if t > 0.0 {
            dropped += b * tk / (1.0 - t);
        }
    }
    let rho2 = Specialization {
        alpha: Vec::new(),
        beta: tilde,
        gamma: chi * theta / (1.0 - t),
    };
    rho1.validate()?;
    rho2.validate()?;
    Ok((rho1, rho2, dropped))
}

/// Nodes zeta_k = t^k, k = 0..=kmax, used by [`law_from_observable`].
pub fn inversion_nodes(t: f64, kmax: usize) -> Vec<f64> {
    (0..=kmax).map(|k| t.powi(k as i32)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LawReport {
    pub pmf: Vec<f64>,
    pub condition: f64,
    pub residual: f64,
}

/// Recover the law of H on {0..kmax} from values E[1/(-zeta t^{-H}; t)_inf]
/// at given zeta, by a least-squares solve of the kernel system.
pub fn law_from_observable(values: &[(f64, f64)], t: f64, kmax: usize) -> Result<LawReport> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::Domain(format!("t must lie in (0,1), got {t}")));
    }
    if values.len() < kmax + 1 {
        return Err(Error::Domain(format!(
            "need at least {} values, got {}",
            kmax + 1,
            values.len()
        )));
    }
    let m = values.len();
    let mut g = DMatrix::zeros(m, kmax + 1);
    for (r, &(zeta, _)) in values.iter().enumerate() {
        for h in 0..=kmax {
            g[(r, h)] = height_observable(h as u32, zeta, t)?;
        }
    }
    let b = DVector::from_iterator(m, values.iter().map(|v| v.1));
    let svd = g.clone().svd(true, true);
    let sv = &svd.singular_values;
    let condition = sv.max() / sv.min();
    let p = svd.solve(&b, 0.0).map_err(|e| Error::NonFinite(e.to_string()))?;
    let residual = (&g * &p - &b).amax();
    if !(condition <= 1e12) {
        return Err(Error::Conditioning { condition, residual });
    }
    Ok(LawReport {
        pmf: p.iter().copied().collect(),
        condition,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::{ratio, Rational};

    fn part(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn partition_counts_and_order() {
        let counts: Vec<usize> = (0..=10).map(|n| partitions_of(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
        assert_eq!(partitions_of(3), vec![part(&[1, 1, 1]), part(&[2, 1]), part(&[3])]);
        assert_eq!(partitions_in_box(2, 2).len(), 6);
        assert!(Partition::new(vec![1, 2]).is_err());
    }

    #[test]
    fn hook_dimensions() {
        assert_eq!(part(&[2, 1]).dimension(), 2.0);
        assert_eq!(part(&[3, 2]).dimension(), 5.0);
        for n in 1..=9u32 {
            let s: f64 = partitions_of(n).iter().map(|l| l.dimension().powi(2)).sum();
            let fact: f64 = (1..=n).map(|k| k as f64).product();
            assert_eq!(s, fact);
        }
    }

    #[test]
    fn h_coefficient_examples() {
        let g = 0.7;
        let h = h_coeffs(&Specialization::pure_gamma(g), 4);
        for (k, v) in h.iter().enumerate() {
            let f: f64 = (1..=k).map(|i| i as f64).product();
            assert!((v - g.powi(k as i32) / f).abs() < 1e-15);
        }
        let b = Specialization {
            alpha: vec![],
            beta: vec![0.4],
            gamma: 0.0,
        };
        assert_eq!(h_coeffs(&b, 3), vec![1.0, 0.4, 0.0, 0.0]);
        let bg = Specialization {
            alpha: vec![],
            beta: vec![ratio(2, 5)],
            gamma: ratio(3, 7),
        };
        let h2 = &h_coeffs(&bg, 2)[2];
        assert_eq!(*h2, ratio(9, 98) + ratio(6, 35));
    }

    /// Sum over semistandard tableaux with entries 1..m.
    fn monomial_oracle(lambda: &Partition, xs: &[Rational]) -> Rational {
        let cells: Vec<(usize, usize)> = lambda
            .parts()
            .iter()
            .enumerate()
            .flat_map(|(i, &r)| (0..r as usize).map(move |j| (i, j)))
            .collect();
        let rows = lambda.len();
        let mut grid = vec![vec![0usize; lambda.part(1) as usize]; rows];
        fn rec(k: usize, cells: &[(usize, usize)], g: &mut Vec<Vec<usize>>, xs: &[Rational]) -> Rational {
            if k == cells.len() {
                let mut w = Rational::from_integer(1.into());
                for &(i, j) in cells {
                    w *= &xs[g[i][j]];
                }
                return w;
            }
            let (i, j) = cells[k];
            let mut s = Rational::from_integer(0.into());
            for v in 0..xs.len() {
                if j > 0 && g[i][j - 1] > v {
                    continue;
                }
                if i > 0 && g[i - 1][j] >= v {
                    continue;
                }
                g[i][j] = v;
                s += rec(k + 1, cells, g, xs);
            }
            s
        }
        rec(0, &cells, &mut grid, xs)
    }

    #[test]
    fn jacobi_trudi_matches_tableau_sum() {
        let xs = vec![ratio(3, 10), ratio(1, 2)];
        let rho = Specialization::alphabet(xs.clone());
        for lambda in partitions_up_to(6) {
            assert_eq!(schur_eval(&lambda, &rho), monomial_oracle(&lambda, &xs), "{lambda:?}");
        }
        let v = schur_eval(&part(&[2, 1]), &Specialization::alphabet(vec![0.3, 0.5]));
        assert!((v - (0.09 * 0.5 + 0.3 * 0.25)).abs() < 1e-15);
    }

    #[test]
    fn schur_trivial_values() {
        let rho = Specialization::pure_gamma(0.8);
        assert_eq!(schur_eval(&Partition::empty(), &rho), 1.0);
        assert!((schur_eval(&part(&[1]), &rho) - 0.8).abs() < 1e-15);
        // pure gamma: s_lambda = gamma^n / hooks
        let l = part(&[3, 1, 1]);
        let want = 0.8f64.powi(5) * (-l.ln_hook_product()).exp();
        assert!((schur_eval(&l, &rho) - want).abs() < 1e-14);
    }

    #[test]
    fn rsk_examples() {
        assert_eq!(rsk_shape(&[1, 2, 3, 4]), part(&[4]));
        assert_eq!(rsk_shape(&[4, 3, 2, 1]), part(&[1, 1, 1, 1]));
        assert_eq!(rsk_shape(&[5, 2, 1, 3, 4, 6]).part(1), 4);
        let mut rng = Stream::new(9);
        for n in [5, 20, 60] {
            let d = random_deck(n, &mut rng);
            assert_eq!(rsk_shape(&d).part(1) as usize, crate::patience::lis_length(&d));
            assert_eq!(rsk_shape(&d).size() as usize, n);
        }
    }

    #[test]
    fn plancherel_size_and_singleton() {
        assert!(plancherel_sample(0.0, 3).unwrap().is_empty());
        let n = 10_000;
        let xi = 3.0;
        let mean: f64 = (0..n)
            .map(|i| plancherel_sample(xi, i).unwrap().size() as f64)
            .sum::<f64>()
            / n as f64;
        assert!((mean - xi).abs() < 4.0 * (xi / n as f64).sqrt());
        let xi: f64 = 0.5;
        let p = xi * (-xi).exp();
        let hits = (0..n)
            .filter(|&i| plancherel_sample(xi, i).unwrap() == part(&[1]))
            .count() as f64;
        let sd = (p * (1.0 - p) / n as f64).sqrt();
        assert!((hits / n as f64 - p).abs() < 4.0 * sd);
    }

    #[test]
    fn plancherel_frequencies_small_shapes() {
        let n = 1_000_000u64;
        let xi = 1.0;
        let shapes = partitions_up_to(3);
        let mut counts = vec![0u64; shapes.len()];
        for i in 0..n {
            let l = plancherel_sample(xi, i).unwrap();
            if let Some(k) = shapes.iter().position(|s| *s == l) {
                counts[k] += 1;
            }
        }
        for (s, c) in shapes.iter().zip(counts) {
            let p = plancherel_pmf(s, xi);
            let sd = (p * (1.0 - p) / n as f64).sqrt();
            assert!((c as f64 / n as f64 - p).abs() < 4.0 * sd, "{s:?}");
        }
    }

    #[test]
    fn cauchy_identity_truncations() {
        let cases = [
            (Specialization::pure_gamma(0.8), Specialization::pure_gamma(1.1)),
            (
                Specialization::pure_gamma(0.6),
                Specialization {
                    alpha: vec![],
                    beta: vec![0.5],
                    gamma: 0.7,
                },
            ),
        ];
        for (r1, r2) in cases {
            let budget = 14;
            let total: f64 = partitions_up_to(budget)
                .iter()
                .map(|l| schur_eval(l, &r1) * schur_eval(l, &r2))
                .sum();
            let h = cauchy_kernel(&r1, &r2).unwrap();
            let tail = poisson_tail(r1.power_sum(1) * r2.power_sum(1), budget);
            assert!(((h - total) / h - tail).abs() < 1e-12, "{} {} {}", h, total, tail);
        }
    }

    #[test]
    fn poisson_tail_small_cases() {
        assert!((poisson_tail(1.0, 0) - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
        assert_eq!(poisson_tail(0.0, 0), 0.0);
        assert!(poisson_tail(1.0, 40) < 1e-40);
    }

    #[test]
    fn conjugate_product_matches_row_form() {
        let mut rng = Stream::new(21);
        for n in [0usize, 1, 5, 30] {
            let l = rsk_shape(&random_deck(n, &mut rng));
            for (z, t) in [(0.5, 0.3), (2.0, 0.8), (0.01, 0.5)] {
                let a = schur_functional(&l, z, t).unwrap();
                let b = conjugate_product_functional(&l, z, t).unwrap();
                assert!((a - b).abs() < 1e-12 * a.abs().max(1e-300), "{l:?} {a} {b}");
            }
        }
    }

    #[test]
    fn observable_at_zero_zeta() {
        let r = Specialization::pure_gamma(1.0);
        let e = schur_observable_rhs(&r, &r, 0.0, 0.3, ObservableMode::TruncatedExact, 10, 0).unwrap();
        assert!((e.value - 1.0).abs() < 1e-6);
    }

    #[test]
    fn observable_at_t_zero_matches_enumeration() {
        // at t = 0 only the empty partition contributes, with weight 1/(1 + zeta)
        let zeta = 0.4;
        let (r1, r2) = (Specialization::pure_gamma(0.5), Specialization::pure_gamma(0.6));
        let e = schur_observable_rhs(&r1, &r2, zeta, 0.0, ObservableMode::TruncatedExact, 6, 0).unwrap();
        let direct: f64 = partitions_up_to(6)
            .iter()
            .map(|l| plancherel_pmf(l, 0.3) * if l.is_empty() { 1.0 / (1.0 + zeta) } else { 0.0 })
            .sum();
        assert!((e.value - direct).abs() < 1e-15);
        assert!(e.error < 1e-6);
    }

    #[test]
    fn exact_and_mc_agree() {
        let r = Specialization::pure_gamma(1.0);
        let exact = schur_observable_rhs(&r, &r, 0.5, 0.3, ObservableMode::TruncatedExact, 40, 0).unwrap();
        assert!(exact.error < 1e-30);
        let mc = schur_observable_rhs(&r, &r, 0.5, 0.3, ObservableMode::Mc, 1_000_000, 11).unwrap();
        assert!((exact.value - mc.value).abs() < 4.0 * mc.error);
        let beta = Specialization {
            alpha: vec![],
            beta: vec![0.3],
            gamma: 1.0,
        };
        assert!(matches!(
            schur_observable_rhs(&r, &beta, 0.5, 0.3, ObservableMode::Mc, 10, 0),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn png_specialization_truncation() {
        let (r1, r2, dropped) = png_specializations(1.0, 2.0, 1.5, 0.5, &[0.4]).unwrap();
        assert_eq!(r1.gamma, 3.0);
        assert_eq!(r2.gamma, 3.0);
        assert_eq!(r2.beta.len(), 40);
        assert!(dropped < 1e-12);
    }

    fn forward(pmf: &[f64], t: f64, kmax: usize) -> Vec<(f64, f64)> {
        inversion_nodes(t, kmax)
            .into_iter()
            .map(|z| {
                (
                    z,
                    pmf.iter()
                        .enumerate()
                        .map(|(h, p)| p * height_observable(h as u32, z, t).unwrap())
                        .sum(),
                )
            })
            .collect()
    }

    #[test]
    fn inversion_point_mass_and_bernoulli() {
        let t = 0.5;
        let r = law_from_observable(&forward(&[1.0], t, 6), t, 6).unwrap();
        assert!((r.pmf[0] - 1.0).abs() < 1e-10);
        assert!(r.pmf[1..].iter().all(|p| p.abs() < 1e-10));
        let p = 0.37;
        for kmax in 1..=5 {
            let r = law_from_observable(&forward(&[1.0 - p, p], t, kmax), t, kmax).unwrap();
            assert!((r.pmf[1] - p).abs() < 1e-8, "{kmax} {:?}", r.pmf);
        }
    }

    #[test]
    fn inversion_reports_ill_conditioning() {
        let t = 0.95;
        let err = law_from_observable(&forward(&[1.0], t, 40), t, 40).unwrap_err();
        assert!(matches!(err, Error::Conditioning { .. }));
    }

    #[test]
    fn height_observable_matches_definition() {
        let (z, t) = (0.7f64, 0.4f64);
        for h in 0..5i32 {
            let direct = 1.0 / qpoch_inf(-z * t.powi(-h), t).unwrap();
            assert!((height_observable(h as u32, z, t).unwrap() - direct).abs() < 1e-14);
        }
        assert_eq!(height_observable(3, 0.5, 0.0).unwrap(), 0.0);
    }
}
