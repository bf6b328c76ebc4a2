//! Subcommand implementations. Each takes its merged options and returns a report.

use anyhow::{bail, Result};
use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use tpng::detform::{
    random_rational_params, schur_zeta_expectation, sixv_height_law, sixv_zeta_exact, verify_instance,
};
use tpng::lattice::{sample_phi_model, sample_sixvertex, BoundaryData, FusedModel};
use tpng::patience::{patience_sort, poissonized_pile_count};
use tpng::png::{corner_height, png_height, sample_png, sample_png_boundary};
use tpng::qmath::{qpoch_inf, ratio, Scalar};
use tpng::rng::{derive, Stream};
use tpng::stats::{
    kpz_normalize, mean_stderr, replicate, tw_normalize, tw_reference, EmpiricalDistribution, Histogram,
};
use tpng::symfun::{
    conjugate_product_functional, height_observable, plancherel_sample, png_specializations, schur_observable_rhs,
    ObservableMode,
};
use tpng::weights::{
    fused_outputs, fused_weight, psi_weight, theta_weight, ArrowConfig, ComplementedConfig, FusedParams,
};

use crate::config::{parse_pair, parse_rational};
use crate::report::{histogram_rows, Report};

/// Seed and worker count shared by every subcommand.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Run {
    pub seed: u64,
    pub workers: usize,
}

fn hist_u32(v: &[u32]) -> Histogram {
    Histogram::from_values(v.iter().map(|&x| x as i64))
}

// ---------------------------------------------------------------- simulate-png

#[derive(Debug, Default, Clone, Args, Serialize, Deserialize)]
pub struct SimulatePng {
    /// Rectangle width
    #[arg(long)]
    pub chi: Option<f64>,
    /// Rectangle height
    #[arg(long)]
    pub eta: Option<f64>,
    /// Nucleation intensity is theta^2
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    /// Boundary source intensities beta_1,...,beta_m
    #[arg(long, value_delimiter = ',')]
    pub beta: Option<Vec<f64>>,
    #[arg(long)]
    pub samples: Option<u64>,
    /// Also write the first sampled ray diagram
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub diagram: Option<bool>,
}

pub fn simulate_png(o: SimulatePng, run: Run) -> Result<Report> {
    let chi = o.chi.unwrap_or(1.0);
    let eta = o.eta.unwrap_or(1.0);
    let theta = o.theta.unwrap_or(1.0);
    let t = o.t.unwrap_or(0.5);
    let beta = o.beta.unwrap_or_default();
    let samples = o.samples.unwrap_or(10_000);
    let diagram = o.diagram.unwrap_or(false);
    let mut r = Report::new(
        "simulate-png",
        json!({ "chi": chi, "eta": eta, "theta": theta, "t": t, "beta": beta, "samples": samples,
                "diagram": diagram, "seed": run.seed, "workers": run.workers }),
    )?;
    let sample = |s: u64| {
        if beta.is_empty() {
            sample_png(chi, eta, theta * theta, t, s)
        } else {
            sample_png_boundary(chi, eta, theta, t, &beta, s)
        }
    };
    let hs = replicate(samples, run.seed, run.workers, |s| {
        if beta.is_empty() {
            corner_height(chi, eta, theta * theta, t, s)
        } else {
            png_height(&sample(s)?, chi, eta)
        }
    })?;
    let h = hist_u32(&hs);
    let m = mean_stderr(&hs.iter().map(|&x| x as f64).collect::<Vec<_>>());
    r.metric("mean_height", m)?;
    r.csv(&["value", "count"], histogram_rows(&h));
    if diagram {
        r.extra
            .push(("diagram".into(), serde_json::to_value(sample(derive(run.seed, &[0]))?)?));
    }
    Ok(r)
}

// ------------------------------------------------------------ simulate-lattice

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LatticeModel {
    Fused,
    Prefused,
    Phi,
    SixVertex,
}

#[derive(Debug, Default, Clone, Args, Serialize, Deserialize)]
pub struct SimulateLattice {
    #[arg(long, value_enum)]
    pub model: Option<LatticeModel>,
    #[arg(long)]
    pub t: Option<f64>,
    /// Fused rows u:J, bottom row first
    #[arg(long, value_delimiter = ',')]
    pub rows: Option<Vec<String>>,
    /// Columns xi:s, left column first
    #[arg(long, value_delimiter = ',')]
    pub cols: Option<Vec<String>>,
    /// Phi model mesh
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub theta: Option<f64>,
    /// Phi model lattice side (defaults to 1/eps)
    #[arg(long)]
    pub size: Option<usize>,
    /// Six-vertex row rapidities
    #[arg(long, value_delimiter = ',')]
    pub x: Option<Vec<f64>>,
    /// Six-vertex column rapidities
    #[arg(long, value_delimiter = ',')]
    pub y: Option<Vec<f64>>,
    #[arg(long)]
    pub samples: Option<u64>,
}

pub fn simulate_lattice(o: SimulateLattice, run: Run) -> Result<Report> {
    let model = o.model.unwrap_or(LatticeModel::Phi);
    let t = o.t.unwrap_or(0.5);
    let samples = o.samples.unwrap_or(10_000);
    let rows: Vec<(f64, u32)> = o
        .rows
        .unwrap_or_else(|| vec!["0.2:2".into(), "0.3:3".into()])
        .iter()
        .map(|s| parse_pair(s))
        .collect::<Result<_>>()?;
    let cols: Vec<(f64, f64)> = o
        .cols
        .unwrap_or_else(|| vec!["1:-0.5".into(); 3])
        .iter()
        .map(|s| parse_pair(s))
        .collect::<Result<_>>()?;
    let eps = o.eps.unwrap_or(0.05);
    let theta = o.theta.unwrap_or(1.0);
    let size = o.size.unwrap_or((1.0 / eps).round() as usize);
    let x = o.x.unwrap_or_else(|| vec![0.3, 0.5, 0.4]);
    let y = o.y.unwrap_or_else(|| vec![0.6, 0.2, 0.7]);
    let config = match model {
        LatticeModel::Fused | LatticeModel::Prefused => json!({ "model": model, "t": t, "rows": rows, "cols": cols }),
        LatticeModel::Phi => json!({ "model": model, "t": t, "eps": eps, "theta": theta, "size": size }),
        LatticeModel::SixVertex => json!({ "model": model, "t": t, "x": x, "y": y }),
    };
    let mut config = config;
    config["samples"] = json!(samples);
    config["seed"] = json!(run.seed);
    config["workers"] = json!(run.workers);
    let mut r = Report::new("simulate-lattice", config)?;
    let sample = |s: u64| match model {
        LatticeModel::Fused => {
            let j = rows.iter().map(|r| r.1).collect();
            FusedModel::new(rows.clone(), cols.clone(), t, BoundaryData::JStep(j)).sample(s)
        }
        LatticeModel::Prefused => FusedModel::prefused_of(&rows, cols.clone(), t).sample(s),
        LatticeModel::Phi => sample_phi_model(eps, theta, t, size, size, s),
        LatticeModel::SixVertex => sample_sixvertex(&x, &y, t, s).map(|p| p.0),
    };
    let hs = replicate(samples, run.seed, run.workers, |s| {
        let e = sample(s)?;
        match model {
            LatticeModel::Phi | LatticeModel::SixVertex => e.east_flux(e.width, e.height),
            _ => e.height_at(e.width, e.height),
        }
    })?;
    let what = match model {
        LatticeModel::Phi | LatticeModel::SixVertex => "east flux of the last column",
        _ => "height at the top right vertex",
    };
    r.metric("observable", what)?;
    r.metric("mean", mean_stderr(&hs.iter().map(|&v| v as f64).collect::<Vec<_>>()))?;
    r.csv(&["value", "count"], histogram_rows(&hist_u32(&hs)));
    r.extra.push((
        "ensemble".into(),
        serde_json::to_value(sample(derive(run.seed, &[0]))?)?,
    ));
    Ok(r)
}

// -------------------------------------------------------------------- patience

#[derive(Debug, Default, Clone, Args, Serialize, Deserialize)]
pub struct Patience {
    /// Miss probability
    #[arg(long)]
    pub t: Option<f64>,
    /// Mean deck size of the Poissonized deck
    #[arg(long)]
    pub theta2: Option<f64>,
    #[arg(long)]
    pub samples: Option<u64>,
    /// Sort this deck once instead of sampling decks
    #[arg(long, value_delimiter = ',')]
    pub deck: Option<Vec<u32>>,
}

pub fn patience(o: Patience, run: Run) -> Result<Report> {
    let t = o.t.unwrap_or(0.0);
    if let Some(deck) = o.deck {
        let mut r = Report::new("patience", json!({ "t": t, "deck": deck, "seed": run.seed }))?;
        let piles = patience_sort(&deck, t, run.seed)?;
        r.metric("piles", piles.len())?;
        r.csv(
            &["pile", "cards_top_first"],
            piles
                .top_first()
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    vec![
                        (i + 1).to_string(),
                        p.iter().map(u32::to_string).collect::<Vec<_>>().join(" "),
                    ]
                })
                .collect(),
        );
        return Ok(r);
    }
    let theta2 = o.theta2.unwrap_or(4.0);
    let samples = o.samples.unwrap_or(100_000);
    let mut r = Report::new(
        "patience",
        json!({ "t": t, "theta2": theta2, "samples": samples, "seed": run.seed, "workers": run.workers }),
    )?;
    let counts = replicate(samples, run.seed, run.workers, |s| poissonized_pile_count(theta2, t, s))?;
    r.metric(
        "mean_piles",
        mean_stderr(&counts.iter().map(|&v| v as f64).collect::<Vec<_>>()),
    )?;
    r.csv(&["value", "count"], histogram_rows(&hist_u32(&counts)));
    Ok(r)
}

// -------------------------------------------------------------- verify-weights

#[derive(Debug, Default, Clone, Args, Serialize, Deserialize)]
pub struct VerifyWeights {
    /// Values of t
    #[arg(long, value_delimiter = ',')]
    pub t: Option<Vec<f64>>,
    /// Fusion levels
    #[arg(long, value_delimiter = ',')]
    pub j: Option<Vec<u32>>,
    /// Inputs with i1 + j1 up to this bound
    #[arg(long)]
    pub max_input: Option<u32>,
    /// Tolerance on |sum - 1|
    #[arg(long)]
    pub tol: Option<f64>,
    /// t of the J = 40 limit check; convergence is like t^J
    #[arg(long)]
    pub limit_t: Option<f64>,
}

pub fn verify_weights(o: VerifyWeights, _run: Run) -> Result<Report> {
    let ts = o.t.unwrap_or_else(|| vec![0.2, 0.5, 0.8]);
    let js = o.j.unwrap_or_else(|| vec![1, 2, 4]);
    let max_input = o.max_input.unwrap_or(6);
    let tol = o.tol.unwrap_or(1e-10);
    let limit_t = o.limit_t.unwrap_or(0.5);
    let mut r = Report::new(
        "verify-weights",
        json!({ "t": ts, "j": js, "max_input": max_input, "tol": tol, "limit_t": limit_t }),
    )?;
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    for &t in &ts {
        for &j in &js {
            let tj = t.powi(j as i32);
            for (regime, s, z) in [
                ("negative-s", -0.5, 0.37),
                ("large-s", 1e3, 2e3 / tj),
                ("small-s", 1e-3, -2.0 / (1e-3 * tj)),
            ] {
                let p = FusedParams { z, j, s, t };
                for i1 in 0..=max_input {
                    for j1 in 0..=j.min(max_input - i1) {
                        let sum: f64 = fused_outputs(i1, j1, j)
                            .map(|c| fused_weight(&p, c))
                            .sum::<tpng::Result<f64>>()?;
                        worst = worst.max((sum - 1.0).abs());
                        rows.push(vec![
                            t.to_string(),
                            j.to_string(),
                            regime.to_string(),
                            i1.to_string(),
                            j1.to_string(),
                            format!("{:e}", sum - 1.0),
                        ]);
                    }
                }
            }
        }
    }
    // limits at J = 40, A = 2, in exact arithmetic: z is of order 1e36 here
    let mut limit_err: f64 = 0.0;
    {
        let t = limit_t;
        let j = 40u32;
        let tq = num_rational::Rational64::approximate_float(t)
            .map(|r| ratio(*r.numer(), *r.denom()))
            .ok_or_else(|| anyhow::anyhow!("t = {t} has no rational approximation"))?;
        let t = tq.to_f64();
        let tj = tq.ipow(j as i64)?;
        let (big, small) = (ratio(100_000_000, 1), ratio(1, 100_000_000));
        for (s, z, theta_side) in [
            (big.clone(), ratio(2, 1) * big / tj.clone(), false),
            (small.clone(), ratio(-2, 1) / (small * tj.clone()), true),
        ] {
            let p = FusedParams { z, j, s, t: tq.clone() };
            for (i1, h1, i2) in
                (0..=3u32).flat_map(|a| (0..=3u32).flat_map(move |b| (0..=3u32).map(move |c| (a, b, c))))
            {
                let h2 = i2 as i64 - i1 as i64 + h1 as i64;
                if !(0..=3).contains(&h2) {
                    continue;
                }
                let c = ComplementedConfig::new(i1, h1, i2, h2 as u32);
                let l = fused_weight(&p, ArrowConfig::new(i1, j - h1, i2, j - h2 as u32))?.to_f64();
                let lim = if theta_side {
                    theta_weight(2.0, t, c)?
                } else {
                    psi_weight(2.0, t, c)?
                };
                limit_err = limit_err.max((l - lim).abs());
            }
        }
    }
    r.metric("max_stochasticity_error", worst)?;
    r.metric("max_limit_error_j40", limit_err)?;
    r.pass = worst <= tol && limit_err <= 1e-6;
    r.csv(&["t", "J", "regime", "i1", "j1", "sum_minus_one"], rows);
    Ok(r)
}

// ------------------------------------------------------------- verify-detform

#[derive(Debug, Default, Clone, Args, Serialize, Deserialize)]
pub struct VerifyDetform {
    /// Lattice size N
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub trials: Option<u32>,
    /// t as an exact rational, e.g. 1/3
    #[arg(long)]
    pub t: Option<String>,
    #[arg(long)]
    pub k: Option<u32>,
    /// Largest first row in the Schur expansion
    #[arg(long)]
    pub cutoff: Option<u32>,
    #[arg(long)]
    pub tol: Option<f64>,
}

pub fn verify_detform(o: VerifyDetform, run: Run) -> Result<Report> {
    let n = o.n.unwrap_or(2);
    let trials = o.trials.unwrap_or(20);
    let t_str = o.t.unwrap_or_else(|| "1/3".into());
    let (tn, td) = parse_rational(&t_str)?;
    let k = o.k.unwrap_or(1);
    let cutoff = o.cutoff.unwrap_or(40);
    let tol = o.tol.unwrap_or(1e-10);
    let mut r = Report::new(
        "verify-detform",
        json!({ "n": n, "trials": trials, "t": t_str, "k": k, "cutoff": cutoff, "tol": tol, "seed": run.seed }),
    )?;
    let mut rng = Stream::keyed(run.seed, &[0]);
    let mut rows = Vec::new();
    let mut failures = 0;
    for i in 0..trials {
        let p = random_rational_params(n, ratio(tn, td), k, &mut rng);
        let rep = verify_instance(&p, cutoff, tol)?;
        if !rep.pass {
            failures += 1;
        }
        rows.push(vec![
            i.to_string(),
            format!("{:?}", rep.params.x),
            format!("{:?}", rep.params.y),
            rep.values["bruteforce"].to_string(),
            rep.values["determinant"].to_string(),
            rep.values["schur"].to_string(),
            rep.values["schur_tail"].to_string(),
            rep.exact_equal.to_string(),
            rep.pass.to_string(),
        ]);
    }
    r.metric("failures", failures)?;
    r.pass = failures == 0;
    r.csv(
        &[
            "trial",
            "x",
            "y",
            "bruteforce",
            "determinant",
            "schur",
            "schur_tail",
            "exact_equal",
            "pass",
        ],
        rows,
    );
    Ok(r)
}

// ------------------------------------------------------------ verify-identity

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdentityForm {
    /// t-PNG observable against the Schur measure side
    Png,
    /// Six-vertex zeta form against the Schur measure side
    SixVertex,
}

#[derive(Debug, Default, Clone, Args, Serialize, Deserialize)]
pub struct VerifyIdentity {
    #[arg(long, value_enum)]
    pub form: Option<IdentityForm>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub zeta: Option<f64>,
    #[arg(long)]
    pub chi: Option<f64>,
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub beta: Option<Vec<f64>>,
    #[arg(long)]
    pub samples: Option<u64>,
    /// Size cutoff of the exact Schur side
    #[arg(long)]
    pub budget: Option<u32>,
    #[arg(long, value_delimiter = ',')]
    pub x: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub y: Option<Vec<f64>>,
}

pub fn verify_identity(o: VerifyIdentity, run: Run) -> Result<Report> {
    let form = o.form.unwrap_or(IdentityForm::Png);
    let t = o.t.unwrap_or(0.5);
    let zeta = o.zeta.unwrap_or(0.5);
    if form == IdentityForm::SixVertex {
        let x = o.x.unwrap_or_else(|| vec![0.3, 0.55]);
        let y = o.y.unwrap_or_else(|| vec![0.45, 0.2]);
        let cutoff = o.budget.unwrap_or(80);
        let mut r = Report::new(
            "verify-identity",
            json!({ "form": form, "t": t, "zeta": zeta, "x": x, "y": y, "budget": cutoff }),
        )?;
        let lhs = sixv_zeta_exact(&x, &y, &t, &zeta)?;
        let rhs = schur_zeta_expectation(&x, &y, t, zeta, cutoff)?;
        let diff = (lhs - rhs.value).abs();
        r.metric("six_vertex", lhs)?;
        r.metric("schur", rhs)?;
        r.metric("difference", diff)?;
        r.pass = diff <= rhs.error + 1e-10;
        let law = sixv_height_law(&x, &y, &t)?;
        r.csv(
            &["h", "probability"],
            law.iter()
                .enumerate()
                .map(|(h, p)| vec![h.to_string(), p.to_string()])
                .collect(),
        );
        return Ok(r);
    }
    let chi = o.chi.unwrap_or(1.0);
    let eta = o.eta.unwrap_or(1.0);
    let theta = o.theta.unwrap_or(1.0);
    let beta = o.beta.unwrap_or_default();
    let samples = o.samples.unwrap_or(100_000);
    let budget = o.budget.unwrap_or(30);
    let mut r = Report::new(
        "verify-identity",
        json!({ "form": form, "t": t, "zeta": zeta, "chi": chi, "eta": eta, "theta": theta, "beta": beta,
                "samples": samples, "budget": budget, "seed": run.seed, "workers": run.workers }),
    )?;
    let height = |s: u64| {
        if beta.is_empty() {
            corner_height(chi, eta, theta * theta, t, s)
        } else {
            png_height(&sample_png_boundary(chi, eta, theta, t, &beta, s)?, chi, eta)
        }
    };
    let hs = replicate(samples, run.seed, run.workers, height)?;
    let vals = hs
        .iter()
        .map(|&h| height_observable(h, zeta, t))
        .collect::<tpng::Result<Vec<_>>>()?;
    let mc = mean_stderr(&vals);
    let (r1, r2, dropped) = png_specializations(chi, eta, theta, t, &beta)?;
    let exact = schur_observable_rhs(&r1, &r2, zeta, t, ObservableMode::TruncatedExact, budget, 0)?;
    let z = (mc.value - exact.value).abs() / (mc.error.powi(2) + exact.error.powi(2)).sqrt().max(f64::MIN_POSITIVE);
    r.metric("png_mc", mc)?;
    r.metric("schur_exact", exact)?;
    r.metric("boundary_mass_dropped", dropped)?;
    r.metric("standard_errors", z)?;
    r.pass = z <= 4.0;
    r.csv(&["value", "count"], histogram_rows(&hist_u32(&hs)));
    Ok(r)
}

// -------------------------------------------------------------------- tw-stats

#[derive(Debug, Default, Clone, Args, Serialize, Deserialize)]
pub struct TwStats {
    /// Scale N: the corner is (xN, yN)
    #[arg(long)]
    pub n: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub x: Option<f64>,
    #[arg(long)]
    pub y: Option<f64>,
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long)]
    pub mean_tol: Option<f64>,
    #[arg(long)]
    pub skew_tol: Option<f64>,
}

pub fn tw_stats(o: TwStats, run: Run) -> Result<Report> {
    let n = o.n.unwrap_or(50.0);
    let t = o.t.unwrap_or(0.5);
    let theta = o.theta.unwrap_or(1.0);
    let (x, y) = (o.x.unwrap_or(1.0), o.y.unwrap_or(1.0));
    let samples = o.samples.unwrap_or(20_000);
    let mean_tol = o.mean_tol.unwrap_or(0.15);
    let skew_tol = o.skew_tol.unwrap_or(0.10);
    let mut r = Report::new(
        "tw-stats",
        json!({ "n": n, "t": t, "theta": theta, "x": x, "y": y, "samples": samples, "mean_tol": mean_tol,
                "skew_tol": skew_tol, "seed": run.seed, "workers": run.workers }),
    )?;
    let vals = replicate(samples, run.seed, run.workers, |s| {
        let h = corner_height(x * n, y * n, theta * theta, t, s)?;
        tw_normalize(h as f64, n, t, theta, x, y)
    })?;
    let mut sorted = vals.clone();
    sorted.sort_by(f64::total_cmp);
    let m = EmpiricalDistribution::new(vals).moments()?;
    let tw = tw_reference()?;
    r.metric("moments", m)?;
    r.metric("tw_mean", tw.mean)?;
    r.metric("tw_variance", tw.variance)?;
    r.metric("tw_skewness", tw.skewness)?;
    r.pass = (m.mean - tw.mean).abs() <= mean_tol && (m.skewness - tw.skewness).abs() <= skew_tol;
    let rows = tw
        .cdf
        .iter()
        .map(|&(s, f)| {
            let emp = sorted.partition_point(|&v| v <= s) as f64 / sorted.len() as f64;
            vec![format!("{s:.2}"), emp.to_string(), f.to_string()]
        })
        .collect();
    r.csv(&["s", "empirical_cdf", "tw_cdf"], rows);
    Ok(r)
}

// ----------------------------------------------------------------- kpz-scaling

#[derive(Debug, Default, Clone, Args, Serialize, Deserialize)]
pub struct KpzScaling {
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub chi: Option<f64>,
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub zeta0: Option<Vec<f64>>,
    #[arg(long)]
    pub samples: Option<u64>,
}

pub fn kpz_scaling(o: KpzScaling, run: Run) -> Result<Report> {
    let eps = o.eps.unwrap_or(0.2);
    let chi = o.chi.unwrap_or(0.1);
    let eta = o.eta.unwrap_or(0.1);
    let zeta0s = o.zeta0.unwrap_or_else(|| vec![0.5, 1.0]);
    let samples = o.samples.unwrap_or(100_000);
    if !(eps > 0.0) {
        bail!("eps must be positive");
    }
    let mut r = Report::new(
        "kpz-scaling",
        json!({ "eps": eps, "chi": chi, "eta": eta, "zeta0": zeta0s, "samples": samples,
                "seed": run.seed, "workers": run.workers }),
    )?;
    let t = (-eps).exp();
    let theta = eps.powi(-3);
    let theta_t = theta * 2.0 * (chi * eta).sqrt();
    let norm = replicate(samples, derive(run.seed, &[0]), run.workers, |s| {
        let h = corner_height(chi, eta, (1.0 - t) * theta * theta, t, s)?;
        kpz_normalize(h as f64, chi, eta, eps)
    })?;
    let xi = chi * eta * theta * theta;
    let shapes = replicate(samples, derive(run.seed, &[1]), run.workers, |s| {
        plancherel_sample(xi, s)
    })?;
    let mut rows = Vec::new();
    let mut pass = true;
    let mut results = Vec::new();
    for &zeta0 in &zeta0s {
        let zeta = zeta0 * t.powf(theta_t);
        let plan = mean_stderr(
            &shapes
                .iter()
                .map(|l| conjugate_product_functional(l, zeta, t))
                .collect::<tpng::Result<Vec<_>>>()?,
        );
        let literal = mean_stderr(&norm.iter().map(|n| (-zeta0 * n.exp()).exp()).collect::<Vec<_>>());
        let exact = mean_stderr(
            &norm
                .iter()
                .map(|n| qpoch_inf(-zeta0 * eps * n.exp(), t).map(|q| 1.0 / q))
                .collect::<tpng::Result<Vec<_>>>()?,
        );
        let z =
            |a: tpng::symfun::Estimate| (a.value - plan.value).abs() / (a.error.powi(2) + plan.error.powi(2)).sqrt();
        pass &= z(exact) <= 4.0;
        results.push(json!({
            "zeta0": zeta0,
            "plancherel": plan,
            "png_exact_form": exact,
            "png_exp_form": literal,
            "exact_form_standard_errors": z(exact),
            "exp_form_standard_errors": z(literal),
        }));
        rows.push(vec![zeta0, plan.value, exact.value, literal.value]);
    }
    r.metric("results", results)?;
    r.pass = pass;
    r.metric("normalized_height", EmpiricalDistribution::new(norm).moments()?)?;
    r.csv(&["zeta0", "plancherel", "png_exact_form", "png_exp_form"], rows);
    Ok(r)
}
