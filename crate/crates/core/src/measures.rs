//! Entanglement of the two-mode output: log-negativity (the entanglement
//! potential) and the reduced-state entropy used for pure inputs.
//!
//! A vanishing log-negativity certifies a positive partial transpose, not
//! separability, so an EP of zero does not by itself prove the input classical.

use crate::error::{Error, Result};
use crate::operator_algebra::{
    hermitian_eigen, hermitian_eigenvalues, partial_trace_b, singular_values, ComplexMatrix,
    ModeIndexing, C64,
};
use crate::splitter::{build_splitter, split_with_vacuum};
use crate::states::{FockDensity, FockVector};

/// Tolerated negative EP before it is reported as a numeric failure.
const EP_NEGATIVE_FLOOR: f64 = -1e-9;
/// Minimum purity accepted by the pure-state EEP.
const PURITY_GATE: f64 = 1.0 - 1e-8;
/// Inputs at least this pure are split as state vectors.
const PURE_FAST_PATH: f64 = 1.0 - 1e-13;
/// Eigenvalues below this are treated as zero in the entropy.
const ENTROPY_EIGEN_FLOOR: f64 = 1e-14;

/// Entries smaller than this (relative to the largest) may be treated as
/// structural zeros when looking for photon-number symmetry.
const SYMMETRY_DUST: f64 = 1e-13;
/// Upper bound on the trace-norm change caused by discarding that dust.
const SYMMETRY_DUST_BUDGET: f64 = 1e-10;

/// Density operator on the two output modes `A ⊗ B`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoModeDensity {
    idx: ModeIndexing,
    matrix: ComplexMatrix,
}

impl TwoModeDensity {
    /// Validates shape, Hermiticity, unit trace and positivity.
    pub fn new(idx: ModeIndexing, matrix: ComplexMatrix) -> Result<Self> {
        let rho = FockDensity::new(matrix)?;
        if rho.dim() != idx.total() {
            return Err(Error::Shape(format!(
                "matrix of size {} does not match modes {}x{}",
                rho.dim(),
                idx.dim_a,
                idx.dim_b
            )));
        }
        Ok(Self {
            idx,
            matrix: rho.into_matrix(),
        })
    }

    pub(crate) fn from_trusted(idx: ModeIndexing, matrix: ComplexMatrix) -> Self {
        Self { idx, matrix }
    }

    pub fn indexing(&self) -> ModeIndexing {
        self.idx
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// State of mode A.
    pub fn reduced_a(&self) -> Result<ComplexMatrix> {
        partial_trace_b(&self.matrix, self.idx)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpResult {
    /// Log-negativity in bits.
    pub value: f64,
    /// `||ρ^{T_A}||_1`.
    pub trace_norm: f64,
    pub truncation_dim: usize,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Period `q` such that every non-negligible `ρ[i,j]` has total photon
/// numbers `N_i ≡ N_j (mod q)`; `0` means `N_i = N_j` exactly.
///
/// Then `ρ^{T_A}` is block diagonal in the label `(n_A - n_B) mod q`, because
/// `ρ^{T_A}[(a,b),(a',b')] = ρ[(a',b),(a,b')]` and
/// `(a'+b) - (a+b') = (a'-b') - (a-b)`.
fn number_period(rho: &ComplexMatrix, idx: ModeIndexing) -> usize {
    let n = idx.total();
    let photons: Vec<usize> = (0..n).map(|i| idx.split(i).0 + idx.split(i).1).collect();
    let dust = SYMMETRY_DUST * rho.max_abs();
    let mut period = 0;
    for i in 0..n {
        let row = rho.row(i);
        for j in (i + 1)..n {
            if row[j].norm() > dust {
                period = gcd(period, photons[i].abs_diff(photons[j]));
                if period == 1 {
                    return 1;
                }
            }
        }
    }
    // Confirm that what the blocks discard is negligible in trace norm.
    let mut discarded = 0.0;
    for i in 0..n {
        let row = rho.row(i);
        for j in 0..n {
            let d = photons[i].abs_diff(photons[j]);
            let kept = if period == 0 { d == 0 } else { d % period == 0 };
            if !kept {
                discarded += row[j].norm_sqr();
            }
        }
    }
    if (n as f64).sqrt() * discarded.sqrt() > SYMMETRY_DUST_BUDGET {
        1
    } else {
        period
    }
}

/// Whether `ρ` is real and invariant under exchanging the two modes, up to a
/// perturbation within the symmetry budget. Imaginary dust counts against it.
///
/// Then `SWAP ρ^{T_A} SWAP = (ρ^{T_A})^T = ρ^{T_A}`, so each block of the
/// partial transpose splits into mode-symmetric and antisymmetric parts.
fn is_real_swap_symmetric(rho: &ComplexMatrix, idx: ModeIndexing) -> bool {
    if idx.dim_a != idx.dim_b {
        return false;
    }
    let n = idx.total();
    let swapped: Vec<usize> = (0..n)
        .map(|i| {
            let (a, b) = idx.split(i);
            idx.flat(b, a)
        })
        .collect();
    let mut diff = 0.0;
    for i in 0..n {
        let row = rho.row(i);
        let mirror = rho.row(swapped[i]);
        for j in 0..n {
            diff += (row[j].re - mirror[swapped[j]].re).powi(2) + row[j].im.powi(2);
        }
    }
    (n as f64).sqrt() * diff.sqrt() <= SYMMETRY_DUST_BUDGET
}

fn abs_sum(values: &[f64]) -> f64 {
    values.iter().map(|l| l.abs()).sum()
}

/// `||ρ^{T_A}||_1`, evaluated block by block using photon-number symmetry
/// and, for real mode-symmetric states, the exchange symmetry.
///
/// Rows of `ρ^{T_A}` that vanish identically are skipped.
pub fn partial_transpose_trace_norm(rho: &ComplexMatrix, idx: ModeIndexing) -> Result<f64> {
    let n = idx.total();
    if !rho.is_square() || rho.rows() != n {
        return Err(Error::Shape(format!(
            "expected size {n}, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    let period = number_period(rho, idx);
    let swap_symmetric = is_real_swap_symmetric(rho, idx);

    // ρ^{T_A} row (a,b) is nonzero iff some ρ[(a',b),(a,b')] is nonzero.
    let mut live = vec![false; n];
    for i in 0..n {
        let (a_p, b) = idx.split(i);
        let row = rho.row(i);
        for (j, z) in row.iter().enumerate() {
            if *z != C64::new(0.0, 0.0) {
                let (a, b_p) = idx.split(j);
                live[idx.flat(a, b)] = true;
                live[idx.flat(a_p, b_p)] = true;
            }
        }
    }
    if swap_symmetric {
        for i in 0..n {
            let (a, b) = idx.split(i);
            if live[i] {
                live[idx.flat(b, a)] = true;
            }
        }
    }

    let label = |a: usize, b: usize| -> i64 {
        let diff = a as i64 - b as i64;
        if period == 0 {
            diff
        } else {
            diff.rem_euclid(period as i64)
        }
    };
    let mut blocks: std::collections::BTreeMap<i64, Vec<usize>> = Default::default();
    for i in (0..n).filter(|&i| live[i]) {
        let (a, b) = idx.split(i);
        blocks.entry(label(a, b)).or_default().push(i);
    }
    let pt = |i: usize, j: usize| -> C64 {
        let (a, b) = idx.split(i);
        let (a_p, b_p) = idx.split(j);
        let z = rho[(idx.flat(a_p, b), idx.flat(a, b_p))];
        if swap_symmetric {
            C64::new(z.re, 0.0)
        } else {
            z
        }
    };

    let mut norm = 0.0;
    for (&ell, members) in &blocks {
        if !swap_symmetric {
            let block = ComplexMatrix::from_fn(members.len(), members.len(), |r, c| {
                pt(members[r], members[c])
            });
            norm += abs_sum(&hermitian_eigenvalues(&block)?);
            continue;
        }
        let (a, b) = idx.split(members[0]);
        let partner = label(b, a);
        if partner != ell {
            // the exchange maps this block onto its partner's transpose
            if ell < partner {
                let block = ComplexMatrix::from_fn(members.len(), members.len(), |r, c| {
                    pt(members[r], members[c])
                });
                norm += 2.0 * abs_sum(&hermitian_eigenvalues(&block)?);
            }
            continue;
        }
        // basis (e_ab ± e_ba)/√2 for a < b, plus e_aa in the symmetric part
        let mut pairs = Vec::new();
        let mut diagonal = Vec::new();
        for &i in members {
            let (a, b) = idx.split(i);
            match a.cmp(&b) {
                std::cmp::Ordering::Less => pairs.push((i, idx.flat(b, a))),
                std::cmp::Ordering::Equal => diagonal.push(i),
                std::cmp::Ordering::Greater => {}
            }
        }
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let sym_len = diagonal.len() + pairs.len();
        let sym = ComplexMatrix::from_fn(sym_len, sym_len, |r, c| {
            let side = |k: usize| -> Vec<(usize, f64)> {
                if k < diagonal.len() {
                    vec![(diagonal[k], 1.0)]
                } else {
                    let (i, j) = pairs[k - diagonal.len()];
                    vec![(i, h), (j, h)]
                }
            };
            let mut acc = C64::new(0.0, 0.0);
            for (i, wi) in side(r) {
                for (j, wj) in side(c) {
                    acc += pt(i, j) * (wi * wj);
                }
            }
            acc
        });
        let anti = ComplexMatrix::from_fn(pairs.len(), pairs.len(), |r, c| {
            let (i, j) = pairs[r];
            let (k, l) = pairs[c];
            (pt(i, k) - pt(i, l) - pt(j, k) + pt(j, l)) * 0.5
        });
        norm += abs_sum(&hermitian_eigenvalues(&sym)?) + abs_sum(&hermitian_eigenvalues(&anti)?);
    }
    Ok(norm)
}

/// `Σ|λ_i|` over the spectrum of a Hermitian matrix.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(m)?.iter().map(|l| l.abs()).sum())
}

fn clamp_log_negativity(trace_norm: f64, dim: usize) -> Result<f64> {
    let value = trace_norm.log2();
    if value >= 0.0 {
        Ok(value)
    } else if value >= EP_NEGATIVE_FLOOR {
        Ok(0.0)
    } else {
        Err(Error::numeric(
            dim,
            format!("trace norm {trace_norm} below one"),
        ))
    }
}

pub fn log_negativity(rho: &TwoModeDensity) -> Result<EpResult> {
    let trace_norm = partial_transpose_trace_norm(rho.matrix(), rho.indexing())?;
    Ok(EpResult {
        value: clamp_log_negativity(trace_norm, rho.indexing().total())?,
        trace_norm,
        truncation_dim: rho.indexing().dim_a,
    })
}

/// Log-negativity of the split pure state, `2 log₂ Σ s_i` over its Schmidt
/// coefficients.
pub fn pure_split_log_negativity(psi: &FockVector, t: f64) -> Result<EpResult> {
    let split = build_splitter(t, psi.dim())?;
    let idx = split.indexing();
    let coeffs = ComplexMatrix::from_vec(idx.dim_a, idx.dim_b, split.apply_vector(psi)?)?;
    let schmidt_sum: f64 = singular_values(&coeffs)?.iter().sum();
    let trace_norm = schmidt_sum * schmidt_sum;
    Ok(EpResult {
        value: clamp_log_negativity(trace_norm, idx.total())?,
        trace_norm,
        truncation_dim: idx.dim_a,
    })
}

/// Log-negativity after mixing `sigma` with vacuum at transmissivity `t`.
/// Pure inputs skip the two-mode density matrix.
pub fn split_log_negativity(sigma: &FockDensity, t: f64) -> Result<EpResult> {
    if purity(sigma.matrix()) >= PURE_FAST_PATH {
        return pure_split_log_negativity(&dominant_vector(sigma)?, t);
    }
    log_negativity(&split_with_vacuum(sigma, t)?)
}

/// Log-negativity after mixing `sigma` with vacuum on a balanced beamsplitter.
pub fn entanglement_potential(sigma: &FockDensity) -> Result<EpResult> {
    split_log_negativity(sigma, 0.5)
}

fn dominant_vector(sigma: &FockDensity) -> Result<FockVector> {
    let (values, vectors) = hermitian_eigen(sigma.matrix())?;
    let top = values.len() - 1;
    FockVector::from_amplitudes((0..sigma.dim()).map(|i| vectors[(i, top)]).collect())
}

/// `-Σ λ log₂ λ`, ignoring eigenvalues below 1e-14.
pub fn von_neumann_entropy(rho: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(rho)?
        .into_iter()
        .filter(|&l| l > ENTROPY_EIGEN_FLOOR)
        .map(|l| -l * l.log2())
        .sum())
}

/// `Tr ρ²`.
pub fn purity(rho: &ComplexMatrix) -> f64 {
    rho.as_slice().iter().map(|z| z.norm_sqr()).sum()
}

/// Entropy of one output arm of the balanced beamsplitter, fed with `psi`
/// and vacuum. For pure inputs this is the entropic entanglement potential.
pub fn entropic_entanglement_potential_pure(psi: &FockVector) -> Result<f64> {
    let split = build_splitter(0.5, psi.dim())?;
    let idx = split.indexing();
    let out = split.apply_vector(psi)?;
    // ρ_A = C C† with C[a][b] the two-mode amplitudes.
    let coeffs = ComplexMatrix::from_vec(idx.dim_a, idx.dim_b, out)?;
    let reduced = coeffs.matmul(&coeffs.adjoint())?;
    von_neumann_entropy(&reduced)
}

/// Pure-state EEP for a density operator; mixed inputs are rejected.
pub fn entropic_entanglement_potential(sigma: &FockDensity) -> Result<f64> {
    let p = purity(sigma.matrix());
    if p < PURITY_GATE {
        return Err(Error::Unsupported(format!(
            "entropic potential is only available for pure states (purity {p:.6})"
        )));
    }
    entropic_entanglement_potential_pure(&dominant_vector(sigma)?)
}
