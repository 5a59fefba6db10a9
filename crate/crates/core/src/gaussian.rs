//! Phase-space description of Gaussian states.
//!
//! Quadratures are `x = (a + a†)/√2`, `p = (a - a†)/(i√2)`, so the vacuum
//! covariance is `I/2`. Two-mode vectors are ordered `(x_A, p_A, x_B, p_B)`.
//!
//! Squeezing orientation: the quadrature at angle `φ/2` is the squeezed one.
//! The Fock-space operator `S(r, φ)` in [`crate::states`] squeezes the
//! orthogonal quadrature instead, so the two pipelines agree after `φ -> φ + π`.
//! Log-negativity does not depend on the orientation.
//!
//! The closed-form EP is clamped at zero below the classicality threshold.

use std::f64::consts::LN_2;
use std::ops::{Add, Mul, Sub};

use nalgebra::{Matrix2, Matrix4, Vector2, Vector4};

use crate::analytic::ep_gaussian_heatbath;
use crate::error::{Error, Result};
use crate::states::GaussianParams;

const UNCERTAINTY_SLACK: f64 = 1e-12;
const PHYSICALITY_SLACK: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianState {
    pub mean: Vector2<f64>,
    pub cov: Matrix2<f64>,
}

impl GaussianState {
    pub fn new(mean: Vector2<f64>, cov: Matrix2<f64>) -> Result<Self> {
        let asym = (cov[(0, 1)] - cov[(1, 0)]).abs();
        if asym > 1e-12 * cov.amax().max(1.0) {
            return Err(Error::numeric(2, "covariance is not symmetric"));
        }
        if cov[(0, 0)] <= 0.0 || cov.determinant() < 0.25 - UNCERTAINTY_SLACK {
            return Err(Error::numeric(
                2,
                format!("covariance violates the uncertainty relation (det {})", cov.determinant()),
            ));
        }
        Ok(Self { mean, cov })
    }

    pub fn vacuum() -> Self {
        Self {
            mean: Vector2::zeros(),
            cov: Matrix2::identity() * 0.5,
        }
    }

    /// Eigenvalues of the covariance, ascending.
    pub fn principal_variances(&self) -> (f64, f64) {
        let tr = self.cov.trace();
        let det = self.cov.determinant();
        let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
        // the smaller root via det / larger avoids cancellation
        let big = tr / 2.0 + disc;
        (det / big, big)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoModeGaussian {
    pub mean: Vector4<f64>,
    pub cov: Matrix4<f64>,
}

/// `(n̄ + ½) R(φ/2) diag(e^{-2r}, e^{2r}) R(φ/2)ᵀ`, mean `√2 (Re α, Im α)`.
pub fn gaussian_from_params(p: &GaussianParams) -> GaussianState {
    let (s, c) = (p.phi() / 2.0).sin_cos();
    let rot = Matrix2::new(c, -s, s, c);
    let scale = p.nbar() + 0.5;
    let diag = Matrix2::new((-2.0 * p.r()).exp(), 0.0, 0.0, (2.0 * p.r()).exp()) * scale;
    let mut cov = rot * diag * rot.transpose();
    let sym = 0.5 * (cov[(0, 1)] + cov[(1, 0)]);
    cov[(0, 1)] = sym;
    cov[(1, 0)] = sym;
    GaussianState {
        mean: Vector2::new(p.alpha().re, p.alpha().im) * 2f64.sqrt(),
        cov,
    }
}

/// Symplectic beamsplitter acting on `(x, p, x_vac, p_vac)`, matching the
/// Fock-space convention `a_A = t a - s a_v`, `a_B = s a + t a_v`.
fn splitter_symplectic(t: f64) -> Matrix4<f64> {
    let tt = t.sqrt();
    let ss = (1.0 - t).sqrt();
    Matrix4::new(
        tt, 0.0, -ss, 0.0, //
        0.0, tt, 0.0, -ss, //
        ss, 0.0, tt, 0.0, //
        0.0, ss, 0.0, tt,
    )
}

/// Mixes `g` with vacuum on a beamsplitter of transmissivity `t`.
pub fn gaussian_split(g: &GaussianState, t: f64) -> Result<TwoModeGaussian> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Parameter(format!("transmissivity {t} outside [0, 1]")));
    }
    let s = splitter_symplectic(t);
    let mut cov_in = Matrix4::zeros();
    cov_in.fixed_view_mut::<2, 2>(0, 0).copy_from(&g.cov);
    cov_in[(2, 2)] = 0.5;
    cov_in[(3, 3)] = 0.5;
    let mean_in = Vector4::new(g.mean[0], g.mean[1], 0.0, 0.0);
    let cov = s * cov_in * s.transpose();
    Ok(TwoModeGaussian {
        mean: s * mean_in,
        cov: 0.5 * (cov + cov.transpose()),
    })
}

/// Unevaluated sum `hi + lo` (double-double), enough to evaluate the
/// symplectic invariants without cancellation.
#[derive(Clone, Copy, Debug)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    fn product(a: f64, b: f64) -> Self {
        let hi = a * b;
        Dd { hi, lo: a.mul_add(b, -hi) }
    }

    fn renormalized(hi: f64, lo: f64) -> Self {
        let s = hi + lo;
        Dd { hi: s, lo: lo - (s - hi) }
    }

    fn scaled(self, k: f64) -> Self {
        Dd { hi: self.hi * k, lo: self.lo * k }
    }

    fn value(self) -> f64 {
        self.hi + self.lo
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let s = self.hi + o.hi;
        let v = s - self.hi;
        let err = (self.hi - (s - v)) + (o.hi - v);
        Dd::renormalized(s, err + self.lo + o.lo)
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + Dd { hi: -o.hi, lo: -o.lo }
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let p = Dd::product(self.hi, o.hi);
        Dd::renormalized(p.hi, p.lo + self.hi * o.lo + self.lo * o.hi)
    }
}

fn det2(m: &Matrix4<f64>, r: usize, c: usize) -> Dd {
    Dd::product(m[(r, c)], m[(r + 1, c + 1)]) - Dd::product(m[(r, c + 1)], m[(r + 1, c)])
}

fn minor(m: &Matrix4<f64>, row: usize, c0: usize, c1: usize) -> Dd {
    Dd::product(m[(row, c0)], m[(row + 1, c1)]) - Dd::product(m[(row, c1)], m[(row + 1, c0)])
}

/// Laplace expansion along the first two rows.
fn det4(m: &Matrix4<f64>) -> Dd {
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let top: Vec<Dd> = pairs.iter().map(|&(a, b)| minor(m, 0, a, b)).collect();
    let bottom: Vec<Dd> = pairs.iter().map(|&(a, b)| minor(m, 2, a, b)).collect();
    top[0] * bottom[5] - top[1] * bottom[4] + top[2] * bottom[3] + top[3] * bottom[2]
        - top[4] * bottom[1]
        + top[5] * bottom[0]
}

/// Smallest symplectic eigenvalue from the invariants `Δ` and `det σ`,
/// `ν² = 2 det / (Δ + √(Δ² - 4 det))`.
///
/// Near a degenerate pair `Δ² ≈ 4 det` the square root would magnify rounding
/// in the difference to `√ε`, hence the double-double invariants.
fn smallest_symplectic(delta: Dd, det: Dd) -> f64 {
    let disc = (delta * delta - det.scaled(4.0)).value().max(0.0).sqrt();
    (2.0 * det.value() / (delta.value() + disc)).sqrt()
}

/// `max(0, -log₂(2 ν̃₋))` with `ν̃₋` the smallest symplectic eigenvalue of the
/// partially transposed covariance.
pub fn gaussian_log_negativity(g2: &TwoModeGaussian) -> Result<f64> {
    let cov = &g2.cov;
    let det_a = det2(cov, 0, 0);
    let det_b = det2(cov, 2, 2);
    let det_c = det2(cov, 0, 2);
    let det = det4(cov);

    let nu = smallest_symplectic(det_a + det_b + det_c.scaled(2.0), det);
    if !(nu >= 0.5 - PHYSICALITY_SLACK) || det.value() < 1.0 / 16.0 - UNCERTAINTY_SLACK {
        return Err(Error::numeric(
            4,
            format!("two-mode covariance is unphysical (smallest symplectic eigenvalue {nu})"),
        ));
    }
    let nu_pt = smallest_symplectic(det_a + det_b - det_c.scaled(2.0), det);
    Ok((-(2.0 * nu_pt).log2()).max(0.0))
}

/// `max(0, (r - r_c)/ln 2)`.
pub fn gaussian_ep_closed_form(p: &GaussianParams) -> f64 {
    ((p.r() - p.r_c()) / LN_2).max(0.0)
}

fn x_log2_x(x: f64) -> f64 {
    if x > 0.0 {
        x * x.log2()
    } else {
        0.0
    }
}

/// `cosh²(r/2) log₂ cosh²(r/2) - sinh²(r/2) log₂ sinh²(r/2)`; pure states only.
pub fn gaussian_eep_pure(p: &GaussianParams) -> Result<f64> {
    if p.nbar() > 0.0 {
        return Err(Error::Unsupported(format!(
            "entropic potential needs a pure Gaussian state (n̄ = {})",
            p.nbar()
        )));
    }
    let c = (p.r() / 2.0).cosh().powi(2);
    let s = (p.r() / 2.0).sinh().powi(2);
    Ok(x_log2_x(c) - x_log2_x(s))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeatBathOutcome {
    pub state: GaussianState,
    /// From the evolved covariance through the beamsplitter.
    pub ep: f64,
    /// From the closed-form channel formula.
    pub ep_closed_form: f64,
}

const HEAT_BATH_AGREEMENT: f64 = 1e-10;

/// Evolves the state through a bath of occupation `n_thermal` for time
/// `gamma_t`: `σ(t) = e^{-γt} σ(0) + (1 - e^{-γt})(n_T + ½) I`.
///
/// The EP is computed both from the evolved covariance and from the
/// closed form; disagreement beyond 1e-10 is reported as a numeric error.
pub fn heat_bath_evolution(
    p: &GaussianParams,
    gamma_t: f64,
    n_thermal: f64,
) -> Result<HeatBathOutcome> {
    if !(gamma_t >= 0.0) || !(n_thermal >= 0.0) {
        return Err(Error::Parameter(format!(
            "need gamma_t >= 0 and n_T >= 0, got {gamma_t}, {n_thermal}"
        )));
    }
    let g0 = gaussian_from_params(p);
    let decay = (-gamma_t).exp();
    let lost = -(-gamma_t).exp_m1();
    let state = GaussianState {
        mean: g0.mean * decay.sqrt(),
        cov: g0.cov * decay + Matrix2::identity() * (lost * (n_thermal + 0.5)),
    };
    let ep = gaussian_log_negativity(&gaussian_split(&state, 0.5)?)?;
    let ep_closed_form = ep_gaussian_heatbath(p.r() - p.r_c(), gamma_t, n_thermal);
    if (ep - ep_closed_form).abs() > HEAT_BATH_AGREEMENT {
        return Err(Error::numeric(
            4,
            format!("covariance EP {ep} disagrees with channel formula {ep_closed_form}"),
        ));
    }
    Ok(HeatBathOutcome {
        state,
        ep,
        ep_closed_form,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator_algebra::C64;

    fn params(r: f64, phi: f64, nbar: f64) -> GaussianParams {
        GaussianParams::new(C64::new(0.0, 0.0), r, phi, nbar).unwrap()
    }

    #[test]
    fn vacuum_covariance() {
        let g = gaussian_from_params(&params(0.0, 0.0, 0.0));
        assert_eq!(g.mean, Vector2::zeros());
        assert!((g.cov - Matrix2::identity() * 0.5).amax() < 1e-15);
    }

    #[test]
    fn squeezed_vacuum_covariance() {
        let r = 0.7;
        let g = gaussian_from_params(&params(r, 0.0, 0.0));
        let expected = Matrix2::new((-2.0 * r).exp(), 0.0, 0.0, (2.0 * r).exp()) / 2.0;
        assert!((g.cov - expected).amax() < 1e-15);
    }

    #[test]
    fn thermal_covariance() {
        let g = gaussian_from_params(&params(0.0, 1.3, 2.0));
        assert!((g.cov - Matrix2::identity() * 2.5).amax() < 1e-14);
    }

    #[test]
    fn displacement_sets_the_mean() {
        let p = GaussianParams::new(C64::new(1.0, -2.0), 0.0, 0.0, 0.0).unwrap();
        let g = gaussian_from_params(&p);
        assert!((g.mean - Vector2::new(2f64.sqrt(), -2.0 * 2f64.sqrt())).amax() < 1e-15);
    }

    #[test]
    fn squeezing_axis_rotates_with_phase() {
        // squeezed quadrature lies along angle φ/2
        let r = 0.5;
        let phi = 1.2;
        let g = gaussian_from_params(&params(r, phi, 0.0));
        let u = Vector2::new((phi / 2.0).cos(), (phi / 2.0).sin());
        let var = (u.transpose() * g.cov * u)[(0, 0)];
        assert!((var - (-2.0 * r).exp() / 2.0).abs() < 1e-14);
    }

    #[test]
    fn split_of_vacuum_and_coherent_states() {
        let vac = gaussian_split(&GaussianState::vacuum(), 0.5).unwrap();
        assert!((vac.cov - Matrix4::identity() * 0.5).amax() < 1e-15);
        assert_eq!(vac.mean, Vector4::zeros());

        let p = GaussianParams::new(C64::new(1.5, 0.5), 0.0, 0.0, 0.0).unwrap();
        let out = gaussian_split(&gaussian_from_params(&p), 0.5).unwrap();
        assert!((out.cov - Matrix4::identity() * 0.5).amax() < 1e-15);
        // each arm carries α/√2, i.e. quadrature mean (Re α, Im α)
        assert!((out.mean - Vector4::new(1.5, 0.5, 1.5, 0.5)).amax() < 1e-14);
    }

    #[test]
    fn split_of_squeezed_vacuum_correlates_the_arms() {
        let out = gaussian_split(&gaussian_from_params(&params(0.6, 0.0, 0.0)), 0.5).unwrap();
        let block = out.cov.fixed_view::<2, 2>(0, 2);
        assert!(block.amax() > 0.1);
        assert!((out.cov - out.cov.transpose()).amax() == 0.0);
    }

    #[test]
    fn split_rejects_bad_transmissivity() {
        assert!(gaussian_split(&GaussianState::vacuum(), 1.1).is_err());
    }

    #[test]
    fn log_negativity_examples() {
        let vac = gaussian_split(&GaussianState::vacuum(), 0.5).unwrap();
        assert_eq!(gaussian_log_negativity(&vac).unwrap(), 0.0);

        let r = 0.9;
        let sq = gaussian_split(&gaussian_from_params(&params(r, 0.4, 0.0)), 0.5).unwrap();
        assert!((gaussian_log_negativity(&sq).unwrap() - r / LN_2).abs() < 1e-12);

        for nbar in [0.1, 1.0, 7.0] {
            let th = gaussian_split(&gaussian_from_params(&params(0.0, 0.0, nbar)), 0.5).unwrap();
            assert_eq!(gaussian_log_negativity(&th).unwrap(), 0.0);
        }
    }

    #[test]
    fn log_negativity_rejects_unphysical_covariance() {
        let bad = TwoModeGaussian {
            mean: Vector4::zeros(),
            cov: Matrix4::identity() * 0.1,
        };
        assert!(gaussian_log_negativity(&bad).is_err());
        assert!(GaussianState::new(Vector2::zeros(), Matrix2::identity() * 0.2).is_err());
    }

    #[test]
    fn closed_form_examples() {
        assert!((gaussian_ep_closed_form(&params(2f64.ln(), 0.0, 0.0)) - 1.0).abs() < 1e-15);
        let at_threshold = params(3f64.ln() / 2.0, 0.0, 1.0);
        assert!(gaussian_ep_closed_form(&at_threshold).abs() < 1e-15);
        assert!((gaussian_ep_closed_form(&params(0.1, 0.0, 0.0)) - 0.14427).abs() < 1e-5);
        assert_eq!(gaussian_ep_closed_form(&params(0.1, 0.0, 2.0)), 0.0);
    }

    #[test]
    fn eep_examples() {
        assert_eq!(gaussian_eep_pure(&params(0.0, 0.0, 0.0)).unwrap(), 0.0);
        for r in [8.0, 12.0, 16.0] {
            let v = gaussian_eep_pure(&params(r, 0.0, 0.0)).unwrap();
            let asymptote = r / LN_2 - (2.0 - 1.0 / LN_2);
            assert!((v - asymptote).abs() < 10.0 * (-r).exp(), "r={r}");
        }
        assert!(matches!(
            gaussian_eep_pure(&params(0.3, 0.0, 0.1)),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn eep_weak_squeezing_law_is_leading_order_only() {
        // -r²/2 log₂(r/2) omits an r²/(4 ln 2) term, so the relative error
        // only shrinks like 1/ln(1/r). At r = 0.1 it is 16.8 %.
        let rel = |r: f64| {
            let exact = gaussian_eep_pure(&params(r, 0.0, 0.0)).unwrap();
            let law = -r * r / 2.0 * (r / 2.0).log2();
            exact / law - 1.0
        };
        assert!((rel(0.1) - 0.16795).abs() < 1e-4);
        let errors: Vec<f64> = [0.1, 1e-2, 1e-3, 1e-4, 1e-6].iter().map(|&r| rel(r)).collect();
        assert!(errors.windows(2).all(|w| w[1] < w[0]));
        assert!(errors[4] < 0.05);
    }

    #[test]
    fn heat_bath_examples() {
        let p = params(1.3, 0.7, 0.4);
        let start = heat_bath_evolution(&p, 0.0, 0.0).unwrap();
        assert!((start.ep - gaussian_ep_closed_form(&p)).abs() < 1e-12);

        let late = heat_bath_evolution(&p, 60.0, 0.0).unwrap();
        assert!(late.ep < 1e-12);

        // strong squeezing, γt ≪ e^{-2(r - r_c)}: linear initial loss
        let strong = params(5.0, 0.0, 0.0);
        let gt = 1e-7;
        let out = heat_bath_evolution(&strong, gt, 0.0).unwrap();
        let linear = 5.0 / LN_2 - (10f64).exp() / (2.0 * LN_2) * gt;
        let slope_term = (10f64).exp() / (2.0 * LN_2) * gt;
        assert!((out.ep - linear).abs() < 0.05 * slope_term);
    }

    #[test]
    fn heat_bath_mean_and_covariance() {
        let p = GaussianParams::new(C64::new(1.0, 0.5), 0.4, 0.0, 0.0).unwrap();
        let out = heat_bath_evolution(&p, 1.0, 0.5).unwrap();
        let g0 = gaussian_from_params(&p);
        let e = (-1.0f64).exp();
        assert!((out.state.mean - g0.mean * e.sqrt()).amax() < 1e-15);
        assert!((out.state.cov[(0, 0)] - (e * g0.cov[(0, 0)] + (1.0 - e))).abs() < 1e-15);
        assert!(heat_bath_evolution(&p, -1.0, 0.0).is_err());
    }

    #[test]
    fn double_double_determinant_matches_lu() {
        let m = Matrix4::new(
            2.0, 0.3, -0.1, 0.7, //
            0.3, 1.5, 0.2, -0.4, //
            -0.1, 0.2, 3.0, 0.5, //
            0.7, -0.4, 0.5, 2.5,
        );
        assert!((det4(&m).value() - m.determinant()).abs() < 1e-12);
    }

    #[test]
    fn near_vacuum_log_negativity_is_exact() {
        // weak squeezing decayed almost to vacuum: both symplectic
        // eigenvalues of the transposed state are close to ½
        for gt in [5.0, 10.0, 20.0] {
            let out = heat_bath_evolution(&params(0.1, 0.3, 0.0), gt, 0.0).unwrap();
            assert!((out.ep - out.ep_closed_form).abs() < 1e-13, "γt={gt}");
        }
    }
}
