//! Single-mode states in a truncated photon-number basis.
//!
//! Every constructor takes a [`Truncation`] (or a bare dimension, which uses
//! the default tail tolerance) and refuses to build a state whose probability
//! mass beyond the cut exceeds the tolerance. Rough sizing rules:
//! [`suggested_dim_coherent`] for coherent content and
//! [`suggested_dim_squeezed`] for squeezing. Convergence of the entanglement
//! potential is slower than convergence of the norm, so production runs should
//! still compare against a larger dimension.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::operator_algebra::{expm_antihermitian, hermitian_eigenvalues, ComplexMatrix, C64};

pub const DEFAULT_TRUNCATION_TOL: f64 = 1e-10;

/// Below this (relative) squared norm a superposition is treated as empty.
const DEGENERATE_NORM_SQR: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Truncation {
    pub dim: usize,
    /// Largest probability mass allowed beyond the cut.
    pub tol: f64,
}

impl Truncation {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            tol: DEFAULT_TRUNCATION_TOL,
        }
    }

    pub fn with_tol(self, tol: f64) -> Self {
        Self { tol, ..self }
    }
}

impl From<usize> for Truncation {
    fn from(dim: usize) -> Self {
        Self::new(dim)
    }
}

/// `ceil(|α|² + 6|α| + 10)`.
pub fn suggested_dim_coherent(alpha: f64) -> usize {
    let a = alpha.abs();
    (a * a + 6.0 * a + 10.0).ceil() as usize
}

/// `ceil(8 e^{2r} + 10)`.
pub fn suggested_dim_squeezed(r: f64) -> usize {
    (8.0 * (2.0 * r).exp() + 10.0).ceil() as usize
}

#[derive(Clone, Debug, PartialEq)]
pub struct FockVector {
    amps: Vec<C64>,
}

impl FockVector {
    /// Normalizes `amps`; fails on a zero vector.
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::Degenerate("zero state vector".into()));
        }
        Ok(Self {
            amps: amps.into_iter().map(|z| z / norm).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    /// `<self|other>` over the common levels.
    pub fn inner(&self, other: &FockVector) -> C64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// Validated single-mode density operator.
#[derive(Clone, Debug, PartialEq)]
pub struct FockDensity {
    matrix: ComplexMatrix,
}

impl FockDensity {
    /// Checks Hermiticity (1e-12), unit trace (1e-10) and positivity (-1e-10).
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Shape(format!(
                "density matrix must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let dim = matrix.rows();
        if !matrix.is_hermitian(1e-12) {
            return Err(Error::numeric(dim, "density matrix is not Hermitian"));
        }
        let trace = matrix.trace();
        if (trace - C64::new(1.0, 0.0)).norm() > 1e-10 {
            return Err(Error::numeric(dim, format!("density matrix trace is {trace}")));
        }
        let min = hermitian_eigenvalues(&matrix)?
            .first()
            .copied()
            .unwrap_or(0.0);
        if min < -1e-10 {
            return Err(Error::numeric(
                dim,
                format!("density matrix has eigenvalue {min:e}"),
            ));
        }
        Ok(Self { matrix })
    }

    /// For matrices that are positive and normalized by construction.
    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        debug_assert!(matrix.is_hermitian(1e-10));
        Self { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn populations(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|z| z.re).collect()
    }

    /// Drops the highest levels whose populations sum to at most `tail`,
    /// renormalizing what remains. Never shrinks below one level.
    pub fn without_tail(&self, tail: f64) -> FockDensity {
        let pops = self.populations();
        let mut keep = pops.len();
        let mut dropped = 0.0;
        while keep > 1 && dropped + pops[keep - 1].max(0.0) <= tail {
            dropped += pops[keep - 1].max(0.0);
            keep -= 1;
        }
        if keep == pops.len() {
            return self.clone();
        }
        let kept = self.matrix.cropped(keep);
        let mass = kept.trace().re;
        FockDensity::from_trusted(kept.hermitian_part().scaled(C64::new(1.0 / mass, 0.0)))
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.populations()
            .iter()
            .enumerate()
            .map(|(n, p)| n as f64 * p)
            .sum()
    }

    /// `Σ w_i ρ_i` with nonnegative weights summing to one, all at one dimension.
    pub fn mixture(parts: &[(f64, FockDensity)]) -> Result<Self> {
        let Some((_, first)) = parts.first() else {
            return Err(Error::Parameter("empty mixture".into()));
        };
        let dim = first.dim();
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        if parts.iter().any(|(w, _)| *w < 0.0) || (total - 1.0).abs() > 1e-12 {
            return Err(Error::Parameter(
                "mixture weights must be nonnegative and sum to one".into(),
            ));
        }
        let mut acc = ComplexMatrix::zeros(dim, dim);
        for (w, rho) in parts {
            if rho.dim() != dim {
                return Err(Error::Shape("mixture components differ in dimension".into()));
            }
            acc = &acc + &rho.matrix.scaled(C64::new(*w, 0.0));
        }
        Self::new(acc)
    }

    /// `e^{iθn} ρ e^{-iθn}`.
    pub fn phase_rotated(&self, theta: f64) -> Self {
        let m = &self.matrix;
        Self::from_trusted(ComplexMatrix::from_fn(m.rows(), m.cols(), |i, j| {
            m[(i, j)] * C64::from_polar(1.0, theta * (i as f64 - j as f64))
        }))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CatSpec {
    /// `(c_k, α_k)` pairs; weights need not be normalized.
    components: Vec<(C64, C64)>,
}

impl CatSpec {
    pub fn new(components: Vec<(C64, C64)>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Parameter("a cat needs at least one component".into()));
        }
        if components
            .iter()
            .any(|(c, a)| !(c.re.is_finite() && c.im.is_finite() && a.re.is_finite() && a.im.is_finite()))
        {
            return Err(Error::Parameter("non-finite cat component".into()));
        }
        Ok(Self { components })
    }

    /// `|α> + |-α>`.
    pub fn even(alpha: C64) -> Self {
        let one = C64::new(1.0, 0.0);
        Self {
            components: vec![(one, alpha), (one, -alpha)],
        }
    }

    /// `|α> - |-α>`.
    pub fn odd(alpha: C64) -> Self {
        let one = C64::new(1.0, 0.0);
        Self {
            components: vec![(one, alpha), (-one, -alpha)],
        }
    }

    /// `n` equal-weight components at `radius · e^{2πik/n}`.
    pub fn equal_on_circle(n: usize, radius: f64) -> Result<Self> {
        let w = C64::new(1.0 / (n as f64).sqrt(), 0.0);
        Self::new(
            (0..n)
                .map(|k| (w, C64::from_polar(radius, TAU * k as f64 / n as f64)))
                .collect(),
        )
    }

    pub fn components(&self) -> &[(C64, C64)] {
        &self.components
    }

    /// Weights rescaled so that `Σ|c_k|² = 1` (the orthogonal-component normalization).
    pub fn with_unit_weights(&self) -> Self {
        let norm = self
            .components
            .iter()
            .map(|(c, _)| c.norm_sqr())
            .sum::<f64>()
            .sqrt();
        Self {
            components: self
                .components
                .iter()
                .map(|&(c, a)| (c / norm, a))
                .collect(),
        }
    }

    /// `<ψ|ψ>` of the unnormalized superposition, from coherent-state overlaps.
    pub fn gram_norm_sqr(&self) -> f64 {
        let mut total = C64::new(0.0, 0.0);
        for &(ci, ai) in &self.components {
            for &(cj, aj) in &self.components {
                total += ci.conj() * cj * coherent_overlap(ai, aj);
            }
        }
        total.re
    }
}

/// `<α|β> = exp(-|α|²/2 - |β|²/2 + α*β)`.
pub fn coherent_overlap(alpha: C64, beta: C64) -> C64 {
    (-0.5 * alpha.norm_sqr() - 0.5 * beta.norm_sqr() + alpha.conj() * beta).exp()
}

/// Parameters of `D(α) S(r, φ) ρ_thermal(n̄) S† D†`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianParams {
    alpha: C64,
    r: f64,
    phi: f64,
    nbar: f64,
}

impl GaussianParams {
    /// `phi` is reduced into `[0, 2π)`.
    pub fn new(alpha: C64, r: f64, phi: f64, nbar: f64) -> Result<Self> {
        if !(alpha.re.is_finite() && alpha.im.is_finite() && phi.is_finite()) {
            return Err(Error::Parameter("non-finite Gaussian parameter".into()));
        }
        if !(r >= 0.0 && r.is_finite()) {
            return Err(Error::Parameter(format!("squeezing r = {r} must be >= 0")));
        }
        if !(nbar >= 0.0 && nbar.is_finite()) {
            return Err(Error::Parameter(format!(
                "thermal occupation {nbar} must be >= 0"
            )));
        }
        Ok(Self {
            alpha,
            r,
            phi: phi.rem_euclid(TAU),
            nbar,
        })
    }

    pub fn squeezed_vacuum(r: f64) -> Result<Self> {
        Self::new(C64::new(0.0, 0.0), r, 0.0, 0.0)
    }

    pub fn alpha(&self) -> C64 {
        self.alpha
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn nbar(&self) -> f64 {
        self.nbar
    }

    /// Squeezing below which the state is classical: `ln(2n̄ + 1) / 2`.
    pub fn r_c(&self) -> f64 {
        (2.0 * self.nbar + 1.0).ln() / 2.0
    }
}

/// Tail masses `T[d] = Σ_{n>=d} p_n` of a Poisson distribution, for `d` up to
/// the point where the tail underflows.
fn poisson_tails(mean: f64) -> Vec<f64> {
    if mean == 0.0 {
        return vec![1.0, 0.0];
    }
    let top = (mean + 40.0 * mean.sqrt() + 60.0).ceil() as usize;
    let ln_mean = mean.ln();
    let mut log_p = -mean;
    let mut probs = Vec::with_capacity(top + 1);
    for n in 0..=top {
        if n > 0 {
            log_p += ln_mean - (n as f64).ln();
        }
        probs.push(log_p.exp());
    }
    let mut tails = vec![0.0; top + 2];
    for d in (0..=top).rev() {
        tails[d] = tails[d + 1] + probs[d];
    }
    tails
}

fn coherent_tail_check(alpha: C64, trunc: Truncation) -> Result<()> {
    let tails = poisson_tails(alpha.norm_sqr());
    let tail_at = |d: usize| tails.get(d).copied().unwrap_or(0.0);
    if tail_at(trunc.dim) > trunc.tol {
        let required = (0..tails.len()).find(|&d| tail_at(d) <= trunc.tol);
        return Err(Error::truncation(
            format!(
                "coherent amplitude {alpha} leaves tail mass {:.3e} beyond dim {} (tol {:.1e})",
                tail_at(trunc.dim),
                trunc.dim,
                trunc.tol
            ),
            required,
        ));
    }
    Ok(())
}

/// Exact (not renormalized) coherent amplitudes `e^{-|α|²/2} α^n / √n!`.
fn coherent_amplitudes(alpha: C64, dim: usize) -> Vec<C64> {
    let mut amps = Vec::with_capacity(dim);
    let mut c = C64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    for n in 0..dim {
        if n > 0 {
            c = c * alpha / (n as f64).sqrt();
        }
        amps.push(c);
    }
    amps
}

pub fn fock_state(n: usize, trunc: impl Into<Truncation>) -> Result<FockVector> {
    let trunc = trunc.into();
    if n >= trunc.dim {
        return Err(Error::truncation(
            format!("Fock level {n} does not fit in dimension {}", trunc.dim),
            Some(n + 1),
        ));
    }
    let mut amps = vec![C64::new(0.0, 0.0); trunc.dim];
    amps[n] = C64::new(1.0, 0.0);
    Ok(FockVector { amps })
}

pub fn coherent_state(alpha: C64, trunc: impl Into<Truncation>) -> Result<FockVector> {
    let trunc = trunc.into();
    coherent_tail_check(alpha, trunc)?;
    FockVector::from_amplitudes(coherent_amplitudes(alpha, trunc.dim))
}

/// Normalized `Σ c_k |α_k>`.
pub fn cat_state(spec: &CatSpec, trunc: impl Into<Truncation>) -> Result<FockVector> {
    let trunc = trunc.into();
    for &(_, alpha) in spec.components() {
        coherent_tail_check(alpha, trunc)?;
    }
    let scale: f64 = spec.components().iter().map(|(c, _)| c.norm()).sum();
    let norm_sqr = spec.gram_norm_sqr();
    if norm_sqr < DEGENERATE_NORM_SQR * scale * scale {
        return Err(Error::Degenerate(format!(
            "superposition has squared norm {norm_sqr:.3e}"
        )));
    }
    let mut amps = vec![C64::new(0.0, 0.0); trunc.dim];
    for &(c, alpha) in spec.components() {
        for (acc, a) in amps.iter_mut().zip(coherent_amplitudes(alpha, trunc.dim)) {
            *acc += c * a;
        }
    }
    let norm = norm_sqr.sqrt();
    amps.iter_mut().for_each(|a| *a /= norm);
    let deficit = 1.0 - amps.iter().map(|z| z.norm_sqr()).sum::<f64>();
    if deficit > trunc.tol {
        return Err(Error::truncation(
            format!(
                "superposition leaves tail mass {deficit:.3e} beyond dim {}",
                trunc.dim
            ),
            None,
        ));
    }
    FockVector::from_amplitudes(amps)
}

pub fn density_from_vector(v: &FockVector) -> FockDensity {
    FockDensity::from_trusted(ComplexMatrix::outer(v.amps()))
}

pub fn thermal_state(nbar: f64, trunc: impl Into<Truncation>) -> Result<FockDensity> {
    let trunc = trunc.into();
    if !(nbar >= 0.0 && nbar.is_finite()) {
        return Err(Error::Parameter(format!(
            "thermal occupation {nbar} must be >= 0"
        )));
    }
    let ratio = nbar / (nbar + 1.0);
    let tail = ratio.powi(trunc.dim as i32);
    if tail > trunc.tol {
        let required = (trunc.tol.ln() / ratio.ln()).ceil() as usize;
        return Err(Error::truncation(
            format!(
                "thermal occupation {nbar} leaves tail mass {tail:.3e} beyond dim {}",
                trunc.dim
            ),
            Some(required),
        ));
    }
    let probs: Vec<f64> = (0..trunc.dim)
        .map(|n| ratio.powi(n as i32) / (nbar + 1.0))
        .collect();
    let total: f64 = probs.iter().sum();
    let probs: Vec<f64> = probs.iter().map(|p| p / total).collect();
    Ok(FockDensity::from_trusted(ComplexMatrix::from_real_diagonal(
        &probs,
    )))
}

/// Annihilation operator on `dim` levels.
pub fn annihilation(dim: usize) -> ComplexMatrix {
    let mut a = ComplexMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    a
}

/// `α a† - α* a`.
fn displacement_generator(alpha: C64, dim: usize) -> ComplexMatrix {
    let mut g = ComplexMatrix::zeros(dim, dim);
    for n in 1..dim {
        let s = (n as f64).sqrt();
        g[(n, n - 1)] = alpha * s;
        g[(n - 1, n)] = -alpha.conj() * s;
    }
    g
}

/// `½ r (e^{iφ} a†² - e^{-iφ} a²)`.
fn squeezing_generator(r: f64, phi: f64, dim: usize) -> ComplexMatrix {
    let mut g = ComplexMatrix::zeros(dim, dim);
    let z = C64::from_polar(0.5 * r, phi);
    for n in 0..dim.saturating_sub(2) {
        let s = (((n + 1) * (n + 2)) as f64).sqrt();
        g[(n + 2, n)] = z * s;
        g[(n, n + 2)] = -z.conj() * s;
    }
    g
}

/// `D(α)` on `dim` levels. Only the low levels are faithful; see [`padding`].
pub fn displacement_operator(alpha: C64, dim: usize) -> Result<ComplexMatrix> {
    expm_antihermitian(&displacement_generator(alpha, dim))
}

/// `S(r, φ)` on `dim` levels. Only the low levels are faithful; see [`padding`].
pub fn squeezing_operator(r: f64, phi: f64, dim: usize) -> Result<ComplexMatrix> {
    expm_antihermitian(&squeezing_generator(r, phi, dim))
}

/// Extra levels used while applying truncated `D` and `S`:
/// `2 ceil(|α| + 4 sinh r) + 8`.
pub fn padding(alpha_abs: f64, r: f64) -> usize {
    2 * (alpha_abs + 4.0 * r.sinh()).ceil() as usize + 8
}

/// Crops a working-dimension operator to `trunc.dim`, checks the lost trace and
/// renormalizes.
fn crop_to(work: &ComplexMatrix, trunc: Truncation) -> Result<FockDensity> {
    let cropped = work.cropped(trunc.dim);
    let kept = cropped.trace().re;
    let deficit = 1.0 - kept;
    if deficit > trunc.tol {
        let mut acc = 0.0;
        let required = work
            .diagonal()
            .iter()
            .position(|p| {
                acc += p.re;
                1.0 - acc <= trunc.tol
            })
            .map(|i| i + 1);
        return Err(Error::truncation(
            format!(
                "state leaves trace deficit {deficit:.3e} beyond dim {} (tol {:.1e})",
                trunc.dim, trunc.tol
            ),
            required,
        ));
    }
    let normalized = cropped.hermitian_part().scaled(C64::new(1.0 / kept, 0.0));
    FockDensity::new(normalized)
}

pub fn displaced_squeezed_thermal(
    p: &GaussianParams,
    trunc: impl Into<Truncation>,
) -> Result<FockDensity> {
    let trunc = trunc.into();
    let work = trunc.dim + padding(p.alpha().norm(), p.r());
    let ratio = p.nbar() / (p.nbar() + 1.0);
    let probs: Vec<f64> = (0..work)
        .map(|n| ratio.powi(n as i32) / (p.nbar() + 1.0))
        .collect();
    let mut rho = ComplexMatrix::from_real_diagonal(&probs);
    if p.r() > 0.0 {
        rho = rho.conjugate_by(&squeezing_operator(p.r(), p.phi(), work)?)?;
    }
    if p.alpha() != C64::new(0.0, 0.0) {
        rho = rho.conjugate_by(&displacement_operator(p.alpha(), work)?)?;
    }
    crop_to(&rho, trunc)
}

/// `D(β) σ D(β)†`, cropped to `trunc`.
pub fn displace(
    sigma: &FockDensity,
    beta: C64,
    trunc: impl Into<Truncation>,
) -> Result<FockDensity> {
    let trunc = trunc.into();
    let work = sigma.dim().max(trunc.dim) + padding(beta.norm(), 0.0);
    let d = displacement_operator(beta, work)?;
    let rho = sigma.matrix().padded(work).conjugate_by(&d)?;
    crop_to(&rho, trunc)
}
