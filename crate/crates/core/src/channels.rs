//! Photon loss (amplitude damping) on truncated Fock states.

use crate::error::{Error, Result};
use crate::measures::entanglement_potential;
use crate::operator_algebra::{ComplexMatrix, C64};
use crate::states::FockDensity;

/// Loss after a dimensionless time `γt`; the energy transmission is
/// `η = e^{-γt}`, so coherent amplitudes shrink by `√η`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LossParams {
    gamma_t: f64,
}

impl LossParams {
    pub fn new(gamma_t: f64) -> Result<Self> {
        if !(gamma_t >= 0.0) || gamma_t.is_nan() {
            return Err(Error::Parameter(format!("gamma_t = {gamma_t} must be >= 0")));
        }
        Ok(Self { gamma_t })
    }

    pub fn gamma_t(&self) -> f64 {
        self.gamma_t
    }

    pub fn eta(&self) -> f64 {
        (-self.gamma_t).exp()
    }

    pub fn xi(&self) -> f64 {
        self.eta()
    }
}

/// `ρ' = Σ_k A_k ρ A_k†` with
/// `A_k|n> = √C(n,k) η^{(n-k)/2} (1-η)^{k/2} |n-k>`.
pub fn amplitude_damping(sigma: &FockDensity, p: LossParams) -> Result<FockDensity> {
    let dim = sigma.dim();
    let eta = p.eta();
    let loss = 1.0 - eta;
    let rho = sigma.matrix();

    // sqrt_binom[n][k] = √C(n, k)
    let mut sqrt_binom = vec![vec![1.0f64]; dim];
    let mut row = vec![1.0f64];
    for n in 1..dim {
        let mut next = vec![1.0; n + 1];
        for k in 1..n {
            next[k] = row[k - 1] + row[k];
        }
        sqrt_binom[n] = next.iter().map(|c| c.sqrt()).collect();
        row = next;
    }
    let loss_pow: Vec<f64> = (0..dim).map(|k| loss.powi(k as i32)).collect();
    let eta_half: Vec<f64> = (0..dim).map(|n| eta.powf(n as f64 / 2.0)).collect();

    let out = ComplexMatrix::from_fn(dim, dim, |i, j| {
        let mut acc = C64::new(0.0, 0.0);
        for k in 0..dim - i.max(j) {
            acc += rho[(i + k, j + k)]
                * (sqrt_binom[i + k][k] * sqrt_binom[j + k][k] * loss_pow[k]);
        }
        acc * (eta_half[i] * eta_half[j])
    });
    Ok(FockDensity::from_trusted(out))
}

/// Population left out when a damped state is cropped before its EP is
/// evaluated. The induced EP error is of order its square root.
pub const DECAY_CROP_TAIL: f64 = 1e-24;

/// EP of the damped state at each `γt` of an ascending, nonnegative grid.
///
/// Loss moves population downwards, so each damped state is first cropped to
/// the levels carrying all but [`DECAY_CROP_TAIL`] of it.
pub fn ep_decay_curve(sigma: &FockDensity, gamma_t_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    if gamma_t_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Parameter("gamma_t grid must be ascending".into()));
    }
    gamma_t_grid
        .iter()
        .map(|&gt| {
            let damped = amplitude_damping(sigma, LossParams::new(gt)?)?;
            Ok((gt, entanglement_potential(&damped.without_tail(DECAY_CROP_TAIL))?.value))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator_algebra::hermitian_eigenvalues;
    use crate::states::{
        cat_state, coherent_state, density_from_vector, fock_state, thermal_state, CatSpec,
    };
    use proptest::prelude::*;

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn loss_params() {
        assert!(LossParams::new(-0.1).is_err());
        assert!(LossParams::new(f64::NAN).is_err());
        let p = LossParams::new(0.3).unwrap();
        assert!((p.eta() - (-0.3f64).exp()).abs() < 1e-16);
        assert_eq!(p.xi(), p.eta());
    }

    #[test]
    fn zero_time_is_identity() {
        let sigma = density_from_vector(&cat_state(&CatSpec::odd(C64::new(1.0, 0.5)), 20).unwrap());
        let out = amplitude_damping(&sigma, LossParams::new(0.0).unwrap()).unwrap();
        assert!((out.matrix() - sigma.matrix()).max_abs() < 1e-15);
    }

    #[test]
    fn single_photon_decays_to_vacuum_mixture() {
        let sigma = density_from_vector(&fock_state(1, 3).unwrap());
        let p = LossParams::new(0.7).unwrap();
        let eta = p.eta();
        let out = amplitude_damping(&sigma, p).unwrap();
        let expected = ComplexMatrix::from_real_diagonal(&[1.0 - eta, eta, 0.0]);
        assert!((out.matrix() - &expected).max_abs() < 1e-15);
    }

    #[test]
    fn coherent_state_stays_coherent() {
        let sigma = density_from_vector(&coherent_state(re(2.0), 40).unwrap());
        let p = LossParams::new(2f64.ln()).unwrap();
        let out = amplitude_damping(&sigma, p).unwrap();
        let target = coherent_state(re(0.5f64.sqrt() * 2.0), 40).unwrap();
        let v = target.amps();
        let mut fidelity = C64::new(0.0, 0.0);
        for i in 0..40 {
            for j in 0..40 {
                fidelity += v[i].conj() * out.matrix()[(i, j)] * v[j];
            }
        }
        assert!((fidelity.re - 1.0).abs() < 1e-8);
    }

    #[test]
    fn decay_curve_examples() {
        let coh = density_from_vector(&coherent_state(re(1.0), 32).unwrap());
        let curve = ep_decay_curve(&coh, &[0.0, 0.5, 1.0]).unwrap();
        assert!(curve.iter().all(|&(_, ep)| ep < 1e-9));

        let one = density_from_vector(&fock_state(1, 6).unwrap());
        let curve = ep_decay_curve(&one, &[0.0, 0.5, 2.0]).unwrap();
        assert!((curve[0].1 - 1.0).abs() < 1e-12);
        // damped |1>: trace norm η + √((1-η)² + η²)
        for &(gt, ep) in &curve {
            let eta = (-gt as f64).exp();
            let expected = (eta + ((1.0 - eta).powi(2) + eta * eta).sqrt()).log2();
            assert!((ep - expected).abs() < 1e-12);
        }
        assert!(ep_decay_curve(&one, &[1.0, 0.5]).is_err());
        assert!(ep_decay_curve(&one, &[-1.0]).is_err());
    }

    #[test]
    fn cropping_the_tail_leaves_the_ep_unchanged() {
        let cat = density_from_vector(&cat_state(&CatSpec::even(re(3.0)), 48).unwrap());
        let damped = amplitude_damping(&cat, LossParams::new(0.3).unwrap()).unwrap();
        let cropped = damped.without_tail(DECAY_CROP_TAIL);
        assert!(cropped.dim() < damped.dim());
        let full = entanglement_potential(&damped).unwrap().value;
        let fast = entanglement_potential(&cropped).unwrap().value;
        assert!((full - fast).abs() < 1e-12, "{full} vs {fast}");
        assert_eq!(fock_state(0, 5).map(|v| density_from_vector(&v).without_tail(1.0).dim()).unwrap(), 1);
    }

    #[test]
    fn thermal_input_stays_classical() {
        let th = thermal_state(0.5, 40).unwrap();
        let curve = ep_decay_curve(&th, &[0.0, 1.0]).unwrap();
        assert!(curve.iter().all(|&(_, ep)| ep < 1e-9));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn damping_composes_as_a_semigroup(t1 in 0.0f64..2.0, t2 in 0.0f64..2.0, ar in -1.5f64..1.5, ai in -1.5f64..1.5) {
            let sigma = density_from_vector(&cat_state(&CatSpec::even(C64::new(ar, ai)), 24).unwrap());
            let two_step = amplitude_damping(
                &amplitude_damping(&sigma, LossParams::new(t1).unwrap()).unwrap(),
                LossParams::new(t2).unwrap(),
            ).unwrap();
            let one_step = amplitude_damping(&sigma, LossParams::new(t1 + t2).unwrap()).unwrap();
            prop_assert!((two_step.matrix() - one_step.matrix()).max_abs() <= 1e-9);
        }

        #[test]
        fn damping_preserves_trace_and_positivity(t in 0.0f64..5.0, ar in -2.0f64..2.0, ai in -2.0f64..2.0) {
            let sigma = density_from_vector(&cat_state(&CatSpec::odd(C64::new(ar, ai) + 0.1), 44).unwrap());
            let out = amplitude_damping(&sigma, LossParams::new(t).unwrap()).unwrap();
            prop_assert!((out.matrix().trace().re - 1.0).abs() <= 1e-10);
            prop_assert!(hermitian_eigenvalues(out.matrix()).unwrap()[0] >= -1e-10);
        }
    }
}
