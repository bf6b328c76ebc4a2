//! Vertex weights: the fused higher spin weight L_z, its limits Psi_A and Theta_A,
//! the Phi weights of the discrete PNG model, and the t-boson and six-vertex tables.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::{choose2, qpoch, qpoch_inf, qpoch_signed, Scalar};

/// Arrow counts (i1, j1; i2, j2) at one vertex. For complemented models the
/// horizontal entries hold h = J - j.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ArrowConfig {
    pub i1: u32,
    pub j1: u32,
    pub i2: u32,
    pub j2: u32,
}

impl ArrowConfig {
    pub const fn new(i1: u32, j1: u32, i2: u32, j2: u32) -> Self {
        Self { i1, j1, i2, j2 }
    }

    pub fn as_array(&self) -> [u32; 4] {
        [self.i1, self.j1, self.i2, self.j2]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FusedParams<S> {
    pub z: S,
    /// Row fusion level, r = t^{-J/2}.
    pub j: u32,
    pub s: S,
    pub t: S,
}

fn check_t<S: Scalar>(t: &S) -> Result<()> {
    let tf = t.to_f64();
    if !(0.0..1.0).contains(&tf) {
        return Err(Error::Domain(format!("t must lie in [0,1), got {tf}")));
    }
    Ok(())
}

fn nonzero<S: Scalar>(x: S, label: &str) -> Result<S> {
    if x.is_zero() {
        Err(Error::Pole(label.to_string()))
    } else {
        Ok(x)
    }
}

/// L_z(i1, j1; i2, j2 | t^{-J/2}, s).
pub fn fused_weight<S: Scalar>(p: &FusedParams<S>, c: ArrowConfig) -> Result<S> {
    check_t(&p.t)?;
    if p.j == 0 {
        return Err(Error::Domain("fusion level J must be at least 1".into()));
    }
    if c.i1 + c.j1 != c.i2 + c.j2 || c.j1 > p.j || c.j2 > p.j {
        return Ok(S::zero());
    }
    if p.z.is_zero() || p.s.is_zero() {
        return Err(Error::Domain("z and s must be nonzero".into()));
    }
    let (i1, j1, i2, j2) = (c.i1 as i64, c.j1 as i64, c.i2 as i64, c.j2 as i64);
    let t = &p.t;
    let z = &p.z;
    let s = &p.s;
    let one = S::one();
    let r2inv = t.ipow(p.j as i64)?;

    let sign = if i1 % 2 == 0 { one.clone() } else { -one.clone() };
    let pre = sign * t.ipow(choose2(i1) + i1 * j1)? * z.ipow(i1)? * s.ipow(j1 + j2 - i2)?;

    let num = qpoch_signed(&(z.clone() / s.clone()), t, j2 - i1, "(z/s;t)")?;
    let d_tt = nonzero(qpoch(t, t, i2 as usize), "(t;t)_{i2}")?;
    let d_sz = nonzero(qpoch(&(s.clone() * z.clone()), t, (i2 + j2) as usize), "(sz;t)_{i2+j2}")?;
    let d_r = nonzero(
        qpoch_signed(&(r2inv.clone() * t.ipow(1 - j1)?), t, j1 - j2, "(r^-2 t^{1-j1};t)")?,
        "(r^-2 t^{1-j1};t)_{j1-j2}",
    )?;

    let s2 = s.clone() * s.clone();
    let a_sum = r2inv.clone() * s.clone() * z.clone();
    let b_sum = t.clone() * s.clone() / z.clone();
    let kmax = i1.min(i2);
    let mut terms = Vec::with_capacity(kmax as usize + 1);
    for k in 0..=kmax {
        let ku = k as usize;
        let rest = (i2 - k) as usize;
        let numk =
            qpoch(&t.ipow(-i2)?, t, ku) * qpoch(&t.ipow(-i1)?, t, ku) * qpoch(&a_sum, t, ku) * qpoch(&b_sum, t, ku);
        let tail = qpoch(&(s2.clone() * t.ipow(k)?), t, rest)
            * qpoch(&t.ipow(j2 - i1 + 1 + k)?, t, rest)
            * qpoch(&(r2inv.clone() * t.ipow(1 - i2 - j2 + k)?), t, rest);
        let den = qpoch(t, t, ku);
        terms.push(t.ipow(k)? * numk * tail / den);
    }
    let total = S::sum(terms);
    (pre * num * total / (d_tt * d_sz * d_r)).check("fused_weight")
}

/// Arrow counts of the horizontally complemented model: h = J - j.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ComplementedConfig {
    pub i1: u32,
    pub h1: u32,
    pub i2: u32,
    pub h2: u32,
}

impl ComplementedConfig {
    pub const fn new(i1: u32, h1: u32, i2: u32, h2: u32) -> Self {
        Self { i1, h1, i2, h2 }
    }

    fn conserves(&self) -> bool {
        self.i1 as i64 - self.h1 as i64 == self.i2 as i64 - self.h2 as i64
    }
}

fn check_open_t(t: f64) -> Result<()> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::Domain(format!("t must lie in (0,1), got {t}")));
    }
    Ok(())
}

/// Psi_A(i1, h1; i2, h2), the s -> infinity, J -> infinity limit.
pub fn psi_weight(a: f64, t: f64, c: ComplementedConfig) -> Result<f64> {
    check_open_t(t)?;
    if !c.conserves() {
        return Ok(0.0);
    }
    if a == 0.0 {
        return Err(Error::Domain("A must be nonzero".into()));
    }
    let (i1, h1, i2, h2) = (c.i1 as i64, c.h1 as i64, c.i2 as i64, c.h2 as i64);
    let pre = a.powi(-(i2 as i32))
        * t.powi((i2 * (i2 + h1)) as i32)
        * qpoch_inf(t.powi((i2 + h1 + 1) as i32) / a, t)?
        * qpoch(&t, &t, h1 as usize)
        / (qpoch(&t, &t, i2 as usize) * qpoch(&t, &t, h2 as usize));
    let mut terms = Vec::new();
    for k in 0..=i1.min(i2) {
        let ku = k as usize;
        let v = (a * t).powi(k as i32) * qpoch(&t.powi(-(i2 as i32)), &t, ku) * qpoch(&t.powi(-(i1 as i32)), &t, ku)
            / qpoch(&t, &t, ku)
            * qpoch(&t.powi((h2 - i2 + 1 + k) as i32), &t, (i2 - k) as usize);
        terms.push(v);
    }
    (pre * <f64 as Scalar>::sum(terms)).check("psi_weight")
}

/// Theta_A(i1, h1; i2, h2), the s -> 0, J -> infinity limit.
pub fn theta_weight(a: f64, t: f64, c: ComplementedConfig) -> Result<f64> {
    check_open_t(t)?;
    if !c.conserves() {
        return Ok(0.0);
    }
    if a == 0.0 {
        return Err(Error::Domain("A must be nonzero".into()));
    }
    let (i1, h1, i2, h2) = (c.i1 as i64, c.h1 as i64, c.i2 as i64, c.h2 as i64);
    let d_inf = qpoch_inf(-t.powi((h2 - i2 + 1) as i32) / a, t)?;
    if d_inf == 0.0 {
        return Err(Error::Pole("(-t^{h2-i2+1}/A;t)_inf".into()));
    }
    let pre = t.powi((choose2(i2 + 1) + i2 * h1) as i32) * a.powi(-(i2 as i32)) * qpoch(&t, &t, h1 as usize)
        / (d_inf * qpoch(&t, &t, i2 as usize) * qpoch(&t, &t, h2 as usize));
    let mut terms = Vec::new();
    for k in 0..=i1.min(i2) {
        let ku = k as usize;
        let v = t.powi(k as i32)
            * qpoch(&t.powi(-(i1 as i32)), &t, ku)
            * qpoch(&t.powi(-(i2 as i32)), &t, ku)
            * qpoch(&-a, &t, ku)
            / qpoch(&t, &t, ku)
            * qpoch(&t.powi((h2 - i2 + 1 + k) as i32), &t, (i2 - k) as usize);
        terms.push(v);
    }
    (pre * <f64 as Scalar>::sum(terms)).check("theta_weight")
}

/// Weights of the discrete PNG model with (theta*eps)^2 nucleation probability.
pub fn phi_weight(eps: f64, theta: f64, t: f64, c: ComplementedConfig) -> Result<f64> {
    let p = (theta * eps).powi(2);
    if p > 1.0 {
        return Err(Error::Domain(format!("(theta eps)^2 = {p} exceeds 1")));
    }
    Ok(match (c.i1, c.h1, c.i2, c.h2) {
        (0, 0, 0, 0) => 1.0 - p,
        (0, 0, 1, 1) => p,
        (1, 0, 1, 0) => 1.0,
        (0, 1, 0, 1) => 1.0,
        (1, 1, 0, 0) => 1.0 - t,
        (1, 1, 1, 1) => t,
        _ => 0.0,
    })
}

/// t-boson weights; horizontal occupancies must be 0 or 1.
pub fn tboson_weight<S: Scalar>(x: &S, t: &S, c: ArrowConfig) -> Result<S> {
    if c.j1 > 1 || c.j2 > 1 {
        return Err(Error::Domain("t-boson horizontal occupancies must be 0 or 1".into()));
    }
    let i = c.i1 as i64;
    let o = c.i2 as i64;
    Ok(match (c.j1, c.j2) {
        (0, 0) if o == i => S::one(),
        (0, 1) if o == i - 1 => x.clone() * (S::one() - t.ipow(i)?),
        (1, 0) if o == i + 1 => S::one(),
        (1, 1) if o == i => x.clone(),
        _ => S::zero(),
    })
}

/// Stochastic six-vertex weights with spectral ratio y/x.
pub fn sixvertex_weight<S: Scalar>(ratio: &S, t: &S, c: ArrowConfig) -> Result<S> {
    if c.i1 > 1 || c.j1 > 1 || c.i2 > 1 || c.j2 > 1 {
        return Err(Error::Domain("six-vertex occupancies must be 0 or 1".into()));
    }
    let one = S::one();
    let d = one.clone() - t.clone() * ratio.clone();
    let d = nonzero(d, "1 - t y/x")?;
    Ok(match c.as_array() {
        [0, 0, 0, 0] | [1, 1, 1, 1] => one,
        [1, 0, 1, 0] => t.clone() * (one - ratio.clone()) / d,
        [1, 0, 0, 1] => (one - t.clone()) / d,
        [0, 1, 0, 1] => (one - ratio.clone()) / d,
        [0, 1, 1, 0] => (one - t.clone()) * ratio.clone() / d,
        _ => S::zero(),
    })
}

/// All admissible outputs (i2, j2) for input (i1, j1) at fusion level J.
pub fn fused_outputs(i1: u32, j1: u32, jmax: u32) -> impl Iterator<Item = ArrowConfig> {
    let n = i1 + j1;
    (0..=n)
        .filter(move |&j2| j2 <= jmax)
        .map(move |j2| ArrowConfig::new(i1, j1, n - j2, j2))
}
