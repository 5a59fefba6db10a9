//! Closed-form entanglement potentials.
//!
//! These serve as oracles for the Fock-space pipeline and as fast evaluators.
//! [`ep_cat_lossy`] is an approximation: it neglects overlaps between the
//! damped components and is meant for weak dissipation. The decoherence law
//! `e^{-t/T_D} 2|c₁c₂| / ln 2` derived from it additionally requires
//! `T_D ≪ t` and `|α₁-α₂|² γt² ≪ 1`.

use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};
use crate::operator_algebra::C64;
use crate::states::CatSpec;

/// `ln C(n, k)` for `k = 0..=n`, accumulated term by term.
fn ln_binomials(n: u64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut acc = 0.0;
    out.push(acc);
    for k in 0..n {
        acc += ((n - k) as f64).ln() - ((k + 1) as f64).ln();
        out.push(acc);
    }
    out
}

/// `ln Σ exp(x_i)`.
fn log_sum_exp(xs: impl Iterator<Item = f64> + Clone) -> f64 {
    let max = xs.clone().fold(f64::NEG_INFINITY, f64::max);
    max + xs.map(|x| (x - max).exp()).sum::<f64>().ln()
}

/// `-n + 2 log₂ Σ_k √C(n,k)`.
pub fn ep_fock(n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    if n <= 60 {
        let mut c = 1.0f64;
        let mut sum = 1.0;
        for k in 0..n {
            c = c * (n - k) as f64 / (k + 1) as f64;
            sum += c.sqrt();
        }
        -(n as f64) + 2.0 * sum.log2()
    } else {
        let ln_c = ln_binomials(n);
        let ln_sum = log_sum_exp(ln_c.iter().map(|l| 0.5 * l));
        -(n as f64) + 2.0 * ln_sum / LN_2
    }
}

/// `n - 2^{-n} Σ_k C(n,k) log₂ C(n,k)`.
pub fn eep_fock(n: u64) -> f64 {
    let ln_c = ln_binomials(n);
    let ln_two_n = n as f64 * LN_2;
    let weighted: f64 = ln_c
        .iter()
        .map(|&l| (l - ln_two_n).exp() * l / LN_2)
        .sum();
    n as f64 - weighted
}

/// `½ log₂(2πn)`.
pub fn ep_fock_asymptotic(n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Parameter("asymptotic form needs n >= 1".into()));
    }
    Ok(0.5 * (2.0 * PI * n as f64).log2())
}

fn unit_weights(spec: &CatSpec) -> Result<Vec<f64>> {
    let moduli: Vec<f64> = spec.components().iter().map(|(c, _)| c.norm()).collect();
    let total: f64 = moduli.iter().map(|m| m * m).sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::Parameter(format!(
            "cat weights must satisfy Σ|c_k|² = 1, got {total}"
        )));
    }
    Ok(moduli)
}

/// `2 log₂ Σ|c_k|`, neglecting overlaps between components.
pub fn ep_cat_orthogonal(spec: &CatSpec) -> Result<f64> {
    let w = unit_weights(spec)?;
    Ok(2.0 * w.iter().sum::<f64>().log2())
}

/// Shannon entropy of `|c_k|²`, neglecting overlaps between components.
pub fn eep_cat_orthogonal(spec: &CatSpec) -> Result<f64> {
    let w = unit_weights(spec)?;
    Ok(w
        .iter()
        .map(|m| m * m)
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum())
}

/// `log₂(1 + 2 Σ_{i<k} |<α_i|α_k>|^{1-ξ} |c_i||c_k|)` with `ξ = e^{-γt}`.
pub fn ep_cat_lossy(spec: &CatSpec, gamma_t: f64) -> Result<f64> {
    if !(gamma_t >= 0.0) {
        return Err(Error::Parameter(format!("gamma_t = {gamma_t} must be >= 0")));
    }
    let w = unit_weights(spec)?;
    let xi = (-gamma_t).exp();
    // 1 - ξ without cancellation for small γt
    let lost = -(-gamma_t).exp_m1();
    debug_assert!((lost - (1.0 - xi)).abs() < 1e-15);
    let comps = spec.components();
    let mut sum = 0.0;
    for i in 0..comps.len() {
        for k in (i + 1)..comps.len() {
            let dist_sqr = (comps[i].1 - comps[k].1).norm_sqr();
            sum += (-0.5 * dist_sqr * lost).exp() * w[i] * w[k];
        }
    }
    Ok((1.0 + 2.0 * sum).log2())
}

/// `max(0, -½ log₂[e^{-γt} e^{-2δ} + (1 - e^{-γt})(2n_T + 1)])` with
/// `δ = r - r_c`.
pub fn ep_gaussian_heatbath(r_minus_rc: f64, gamma_t: f64, n_thermal: f64) -> f64 {
    let decay = (-gamma_t).exp();
    let lost = -(-gamma_t).exp_m1();
    let variance = decay * (-2.0 * r_minus_rc).exp() + lost * (2.0 * n_thermal + 1.0);
    (-0.5 * variance.log2()).max(0.0)
}

/// `T_D = 2 / |α₁ - α₂|²`, in units of `1/γ`.
pub fn decoherence_timescale(alpha1: C64, alpha2: C64) -> Result<f64> {
    let d = (alpha1 - alpha2).norm_sqr();
    if d == 0.0 {
        return Err(Error::Parameter(
            "decoherence timescale needs distinct amplitudes".into(),
        ));
    }
    Ok(2.0 / d)
}

/// `e^{-γt/T_D} 2|c₁c₂| / ln 2` for a two-component cat.
pub fn ep_cat_decoherence_law(spec: &CatSpec, gamma_t: f64) -> Result<f64> {
    let w = unit_weights(spec)?;
    let [(_, a1), (_, a2)] = spec.components() else {
        return Err(Error::Parameter("decoherence law needs exactly two components".into()));
    };
    let td = decoherence_timescale(*a1, *a2)?;
    Ok((-gamma_t / td).exp() * 2.0 * w[0] * w[1] / LN_2)
}
