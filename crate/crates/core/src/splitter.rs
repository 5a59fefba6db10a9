//! A single beamsplitter with a vacuum ancilla, as an isometry from one mode
//! into two output modes `A ⊗ B`.
//!
//! The creation operator maps as `a† -> t a_A† + s a_B†` with `t = √T`,
//! `s = √(1-T)`, both real and nonnegative. Each output mode keeps the input
//! dimension; since photon number is conserved, `V|n>` only touches pairs
//! `(k, n-k)`.

use crate::error::{Error, Result};
use crate::measures::{split_log_negativity, TwoModeDensity};
use crate::operator_algebra::{ComplexMatrix, ModeIndexing, C64};
use crate::states::{FockDensity, FockVector};

#[derive(Clone, Debug)]
pub struct SplitterIsometry {
    transmissivity: f64,
    idx: ModeIndexing,
    /// `coeff[n][k]` is the amplitude of `|k, n-k>` in `V|n>`.
    coeff: Vec<Vec<f64>>,
}

pub fn build_splitter(transmissivity: f64, dim: usize) -> Result<SplitterIsometry> {
    if !(0.0..=1.0).contains(&transmissivity) {
        return Err(Error::Parameter(format!(
            "transmissivity {transmissivity} outside [0, 1]"
        )));
    }
    let idx = ModeIndexing::new(dim, dim)?;
    let t = transmissivity.sqrt();
    let s = (1.0 - transmissivity).sqrt();
    let mut binom = vec![1.0f64];
    let mut coeff = Vec::with_capacity(dim);
    for n in 0..dim {
        if n > 0 {
            let mut next = vec![1.0; n + 1];
            for k in 1..n {
                next[k] = binom[k - 1] + binom[k];
            }
            binom = next;
        }
        coeff.push(
            (0..=n)
                .map(|k| binom[k].sqrt() * t.powi(k as i32) * s.powi((n - k) as i32))
                .collect(),
        );
    }
    Ok(SplitterIsometry {
        transmissivity,
        idx,
        coeff,
    })
}

impl SplitterIsometry {
    pub fn transmissivity(&self) -> f64 {
        self.transmissivity
    }

    pub fn dim_in(&self) -> usize {
        self.coeff.len()
    }

    pub fn indexing(&self) -> ModeIndexing {
        self.idx
    }

    /// Amplitude of `|k, n-k>` in `V|n>`.
    pub fn amplitude(&self, n: usize, k: usize) -> f64 {
        self.coeff[n][k]
    }

    /// Dense `(dim·dim) x dim` matrix of the isometry.
    pub fn matrix(&self) -> ComplexMatrix {
        let dim = self.dim_in();
        let mut v = ComplexMatrix::zeros(self.idx.total(), dim);
        for (n, col) in self.coeff.iter().enumerate() {
            for (k, &c) in col.iter().enumerate() {
                v[(self.idx.flat(k, n - k), n)] = C64::new(c, 0.0);
            }
        }
        v
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if dim != self.dim_in() {
            return Err(Error::Shape(format!(
                "splitter built for dim {} applied to dim {dim}",
                self.dim_in()
            )));
        }
        Ok(())
    }

    /// Two-mode amplitudes `V|ψ>`, flat in [`ModeIndexing`] order.
    pub fn apply_vector(&self, psi: &FockVector) -> Result<Vec<C64>> {
        self.check_dim(psi.dim())?;
        let mut out = vec![C64::new(0.0, 0.0); self.idx.total()];
        for (n, &amp) in psi.amps().iter().enumerate() {
            for (k, &c) in self.coeff[n].iter().enumerate() {
                out[self.idx.flat(k, n - k)] = amp * c;
            }
        }
        Ok(out)
    }

    /// `V σ V†`.
    pub fn apply_density(&self, sigma: &FockDensity) -> Result<TwoModeDensity> {
        self.check_dim(sigma.dim())?;
        let total = self.idx.total();
        let s = sigma.matrix();
        let mut rho = ComplexMatrix::zeros(total, total);
        for n in 0..self.dim_in() {
            for m in 0..self.dim_in() {
                let x = s[(n, m)];
                if x == C64::new(0.0, 0.0) {
                    continue;
                }
                for (k, &cn) in self.coeff[n].iter().enumerate() {
                    let row = self.idx.flat(k, n - k);
                    let xn = x * cn;
                    for (l, &cm) in self.coeff[m].iter().enumerate() {
                        rho[(row, self.idx.flat(l, m - l))] = xn * cm;
                    }
                }
            }
        }
        Ok(TwoModeDensity::from_trusted(self.idx, rho))
    }
}

/// Mixes `sigma` with vacuum on a beamsplitter of transmissivity `t`.
pub fn split_with_vacuum(sigma: &FockDensity, t: f64) -> Result<TwoModeDensity> {
    build_splitter(t, sigma.dim())?.apply_density(sigma)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransmissivityScan {
    /// `(T, log-negativity)` in grid order.
    pub points: Vec<(f64, f64)>,
    /// First grid point attaining the maximum.
    pub argmax: f64,
}

/// Log-negativity of the split state at every transmissivity in `grid`.
pub fn scan_transmissivity(sigma: &FockDensity, grid: &[f64]) -> Result<TransmissivityScan> {
    if grid.is_empty() {
        return Err(Error::Parameter("empty transmissivity grid".into()));
    }
    if let Some(t) = grid.iter().find(|t| !(0.0..=1.0).contains(*t)) {
        return Err(Error::Parameter(format!("transmissivity {t} outside [0, 1]")));
    }
    let points = grid
        .iter()
        .map(|&t| Ok((t, split_log_negativity(sigma, t)?.value)))
        .collect::<Result<Vec<_>>>()?;
    let argmax = points
        .iter()
        .fold(points[0], |best, &p| if p.1 > best.1 { p } else { best })
        .0;
    Ok(TransmissivityScan { points, argmax })
}
