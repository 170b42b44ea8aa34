//! Gain matrices, the small-gain test, the sampling-period bound `T(n)` and
//! transient constants for the CT/DT interconnection.
//!
//! Decay rates are stored as positive numbers: a certificate with rate `a`
//! bounds trajectories by `r·e^{−a t}·‖y(0)‖`.

use nalgebra::{DMatrix, DVector, Matrix2, Vector2};

use crate::error::{Error, Result};
use crate::linalg;
use crate::norms::{self, h_kernel};
use crate::systems::LtiSystem;

/// Lipschitz and one-sided Lipschitz bounds consumed by every certificate.
///
/// `oslip_x_f` is a caller-supplied upper bound `ξ` on the one-sided
/// Lipschitz constant of `f` in `x`; it cannot be checked here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainConstants {
    pub lip_x_f: f64,
    pub lip_z_f: f64,
    pub oslip_x_f: f64,
    pub lip_x_g: f64,
    pub lip_z_g: f64,
    /// Contraction rate `ζ > 0` of the reduced model, when known.
    pub rm_rate: Option<f64>,
}

impl GainConstants {
    pub fn validate(&self) -> Result<()> {
        let named = [
            ("lip_x_f", self.lip_x_f),
            ("lip_z_f", self.lip_z_f),
            ("lip_x_g", self.lip_x_g),
            ("lip_z_g", self.lip_z_g),
        ];
        for (name, v) in named {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::invalid(format!(
                    "{name} must be finite and nonnegative, got {v}"
                )));
            }
        }
        if !self.oslip_x_f.is_finite() {
            return Err(Error::invalid("oslip_x_f must be finite"));
        }
        if let Some(zeta) = self.rm_rate {
            if !(zeta.is_finite() && zeta > 0.0) {
                return Err(Error::invalid(format!("rm_rate must be positive, got {zeta}")));
            }
        }
        Ok(())
    }

    fn require_contractive_g(&self) -> Result<()> {
        self.validate()?;
        if self.lip_z_g >= 1.0 {
            return Err(Error::precondition(format!(
                "lip_z_g = {} must be < 1",
                self.lip_z_g
            )));
        }
        Ok(())
    }

    fn require_zeta(&self) -> Result<f64> {
        self.rm_rate
            .ok_or_else(|| Error::precondition("reduced-model rate zeta is required"))
    }

    /// `Lip_z(G)ⁿ`.
    fn lz_pow(&self, n: u32) -> f64 {
        self.lip_z_g.powi(n as i32)
    }

    /// `(1 − Lⁿ)/(1 − L)`, the Lipschitz factor of the n-fold composition.
    fn geometric_sum(&self, n: u32) -> f64 {
        let l = self.lip_z_g;
        if l == 0.0 {
            1.0
        } else {
            (1.0 - self.lz_pow(n)) / (1.0 - l)
        }
    }

    /// `C₁ = (L_zf L_xG/(1−L)) (L_xf + L_zf L_xG/(1−L))`.
    pub fn c1(&self) -> f64 {
        let k = self.lip_x_g / (1.0 - self.lip_z_g);
        self.lip_z_f * k * (self.lip_x_f + self.lip_z_f * k)
    }

    /// `C₂(n) = Lⁿ L_xG L_zf/(1−L)`.
    pub fn c2(&self, n: u32) -> f64 {
        self.lz_pow(n) * self.lip_x_g * self.lip_z_f / (1.0 - self.lip_z_g)
    }

    /// `C₁₂ = (L_zf L_xG/(1−L)) L_zf`.
    pub fn c12(&self) -> f64 {
        self.lip_z_f * self.lip_x_g / (1.0 - self.lip_z_g) * self.lip_z_f
    }

    /// `C₂₁(n) = (Lⁿ L_xG/(1−L)) (L_xf + L_xG L_zf/(1−L))`.
    pub fn c21(&self, n: u32) -> f64 {
        let k = self.lip_x_g / (1.0 - self.lip_z_g);
        self.lz_pow(n) * k * (self.lip_x_f + k * self.lip_z_f)
    }

    /// `h(T, ξ)(C₂(n) + C₁/ζ) + Lⁿ − 1`; negative means `T < T(n)`.
    pub fn sufficient_condition(&self, n: u32, t: f64) -> Result<f64> {
        self.require_contractive_g()?;
        let zeta = self.require_zeta()?;
        check_n_t(n, t)?;
        Ok(h_kernel(t, self.oslip_x_f) * (self.c2(n) + self.c1() / zeta) + self.lz_pow(n) - 1.0)
    }
}

fn check_n_t(n: u32, t: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("iteration count n must be >= 1"));
    }
    check_t(t)
}

fn check_t(t: f64) -> Result<()> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::invalid(format!(
            "sampling period must be positive and finite, got {t}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CertificateKind {
    SmallGain,
    ReducedModel,
    LtiDtc,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub n: u32,
    pub period: f64,
    /// `A(n,T)`, `Ā(n,T)` (2×2) or `L(n,T)`.
    pub gain_matrix: DMatrix<f64>,
    pub spectral_radius: f64,
    pub perron_weights: Option<Vector2<f64>>,
    pub transient_prefactor: Option<f64>,
    /// `−ln(b)/T`, where `b` is the contraction factor per period.
    pub decay_rate: f64,
    pub is_stable: bool,
}

/// `B(T) = [[max{e^{ξT}, 1}, L_zf h(T, ξ)], [0, 1]]`.
pub fn bound_matrix_b(g: &GainConstants, t: f64) -> Result<Matrix2<f64>> {
    g.validate()?;
    check_t(t)?;
    let xi = g.oslip_x_f;
    Ok(Matrix2::new(
        (xi * t).exp().max(1.0),
        g.lip_z_f * h_kernel(t, xi),
        0.0,
        1.0,
    ))
}

/// `−ξ(1 − L_zG) > L_zf L_xG`.
pub fn small_gain_holds(g: &GainConstants) -> Result<bool> {
    g.require_contractive_g()?;
    Ok(-g.oslip_x_f * (1.0 - g.lip_z_g) > g.lip_z_f * g.lip_x_g)
}

/// Small-gain matrix `A(n, T)`.
pub fn gain_matrix_smallgain(g: &GainConstants, n: u32, t: f64) -> Result<Matrix2<f64>> {
    g.require_contractive_g()?;
    check_n_t(n, t)?;
    let xi = g.oslip_x_f;
    if xi >= 0.0 {
        return Err(Error::precondition(format!(
            "small-gain matrix needs xi < 0, got {xi}"
        )));
    }
    let e = (xi * t).exp();
    let a11 = e;
    let a12 = g.lip_z_f * (-(xi * t).exp_m1()) / (-xi);
    let s = g.geometric_sum(n) * g.lip_x_g;
    let a21 = s * e;
    let a22 = s * a12 + g.lz_pow(n);
    Ok(Matrix2::new(a11, a12, a21, a22))
}

/// Reduced-model gain matrix `Ā(n, T)`.
pub fn gain_matrix_rm(g: &GainConstants, n: u32, t: f64) -> Result<Matrix2<f64>> {
    g.require_contractive_g()?;
    let zeta = g.require_zeta()?;
    check_n_t(n, t)?;
    let h = h_kernel(t, g.oslip_x_f);
    let w = -(-zeta * t).exp_m1() / zeta;
    Ok(Matrix2::new(
        (-zeta * t).exp() + w * h * g.c1(),
        w * (g.lip_z_f + h * g.c12()),
        h * g.c21(n),
        h * g.c2(n) + g.lz_pow(n),
    ))
}

/// Sampling-period bound `T(n)` below which `n` iterations per sample keep
/// the interconnection contractive.
///
/// For `ξ < 0` and `ξ a ≤ −1` (with `a = (1−Lⁿ)/(C₂(n)+C₁/ζ)`) the
/// sufficient condition holds for every `T`, since `h(T, ξ) < 1/|ξ|`; the
/// bound is then `+∞`.
pub fn sampling_bound_tn(g: &GainConstants, n: u32) -> Result<f64> {
    g.require_contractive_g()?;
    let zeta = g.require_zeta()?;
    if n == 0 {
        return Err(Error::invalid("iteration count n must be >= 1"));
    }
    if g.lip_x_g <= 0.0 || g.lip_z_f <= 0.0 {
        return Err(Error::precondition(
            "T(n) needs lip_x_g > 0 and lip_z_f > 0",
        ));
    }
    let a = (1.0 - g.lz_pow(n)) / (g.c2(n) + g.c1() / zeta);
    Ok(invert_h(a, g.oslip_x_f))
}

/// Limit of `T(n)` as `n → ∞`: `(1/ξ) ln(ξζ/C₁ + 1)`.
pub fn sampling_bound_tinf(g: &GainConstants) -> Result<f64> {
    g.require_contractive_g()?;
    let zeta = g.require_zeta()?;
    if g.lip_x_g <= 0.0 || g.lip_z_f <= 0.0 {
        return Err(Error::precondition(
            "T(inf) needs lip_x_g > 0 and lip_z_f > 0",
        ));
    }
    Ok(invert_h(zeta / g.c1(), g.oslip_x_f))
}

/// Solves `h(T, ξ) = a` for `T`, returning `+∞` when `h(·, ξ)` never reaches `a`.
fn invert_h(a: f64, xi: f64) -> f64 {
    if xi.abs() < norms::H_KERNEL_ZERO_RATE {
        return a;
    }
    let arg = xi * a;
    if arg <= -1.0 {
        return f64::INFINITY;
    }
    assert!(
        xi < 0.0 || arg >= 0.0,
        "log argument below one for positive xi"
    );
    arg.ln_1p() / xi
}

/// Closed-form upper bound on `T(n)`, valid for `ξ ≥ 0`:
/// `ζ(1−L)² / (L_zf L_xG (L_xf(1−L) + L_zf L_xG))`.
pub fn sampling_bound_upper(g: &GainConstants) -> Result<f64> {
    g.require_contractive_g()?;
    let zeta = g.require_zeta()?;
    let l = g.lip_z_g;
    let denom = g.lip_z_f * g.lip_x_g * (g.lip_x_f * (1.0 - l) + g.lip_z_f * g.lip_x_g);
    if denom <= 0.0 {
        return Err(Error::precondition("upper bound needs positive interconnection gains"));
    }
    Ok(zeta * (1.0 - l).powi(2) / denom)
}

/// Small-gain certificate: `r = ‖B(T)‖_{2,[η]}/ρ(A)`, rate `−ln ρ(A)/T`.
///
/// When `A(n,T)` has a zero entry the weights are the best found by a
/// one-dimensional search and `ρ` is replaced by the achieved norm.
pub fn transient_constants_smallgain(g: &GainConstants, n: u32, t: f64) -> Result<Certificate> {
    if !small_gain_holds(g)? {
        return Err(Error::precondition("small-gain condition is violated"));
    }
    let a = gain_matrix_smallgain(g, n, t)?;
    let b = bound_matrix_b(g, t)?;
    let rho = norms::spectral_radius_2x2(&a);
    let (eta, achieved) = norms::contraction_weights(&a)?;
    let factor = achieved.max(rho);
    let b_norm = norms::induced_norm_2_weighted_2x2(&b, &eta)?;
    Ok(Certificate {
        kind: CertificateKind::SmallGain,
        n,
        period: t,
        gain_matrix: to_dmatrix(&a),
        spectral_radius: rho,
        perron_weights: Some(eta),
        transient_prefactor: Some(b_norm / factor),
        decay_rate: -factor.ln() / t,
        is_stable: rho < 1.0,
    })
}

/// `[[1, 0], [L_xG/(1−L_zG), 1]]`, relating `(x, z)` to `(x, z − z*(x))` norms.
pub fn coordinate_change_matrix(g: &GainConstants) -> Result<Matrix2<f64>> {
    g.require_contractive_g()?;
    Ok(Matrix2::new(1.0, 0.0, g.lip_x_g / (1.0 - g.lip_z_g), 1.0))
}

/// Reduced-model certificate: `ϱ = ‖B(T)‖²_{η̄} ‖L‖²_{η̄} / ρ(Ā)`,
/// rate `−ln ρ(Ā)/T`, with `η̄` the Perron weights of `Ā(n, T)`.
pub fn transient_constants_rm(g: &GainConstants, n: u32, t: f64) -> Result<Certificate> {
    let tn = sampling_bound_tn(g, n)?;
    if t >= tn {
        return Err(Error::precondition(format!(
            "sampling period {t} is not below T(n) = {tn}"
        )));
    }
    let a = gain_matrix_rm(g, n, t)?;
    let rho = norms::spectral_radius_2x2(&a);
    let (eta, achieved) = norms::contraction_weights(&a)?;
    let factor = achieved.max(rho);
    let b_norm = norms::induced_norm_2_weighted_2x2(&bound_matrix_b(g, t)?, &eta)?;
    let l_norm = norms::induced_norm_2_weighted_2x2(&coordinate_change_matrix(g)?, &eta)?;
    Ok(Certificate {
        kind: CertificateKind::ReducedModel,
        n,
        period: t,
        gain_matrix: to_dmatrix(&a),
        spectral_radius: rho,
        perron_weights: Some(eta),
        transient_prefactor: Some(b_norm * b_norm * l_norm * l_norm / factor),
        decay_rate: -factor.ln() / t,
        is_stable: rho < 1.0,
    })
}

/// Norm weights for [`lti_constants`]: an SPD matrix `P_x` on the plant
/// state (`None` for the identity) and Euclidean norms elsewhere.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LtiWeights {
    pub p_x: Option<DMatrix<f64>>,
}

/// Gain constants of `ẋ = Ax + Bz`, `z⁺ = Cx + Dz` under `‖x‖ = √(xᵀP_x x)`
/// and the Euclidean norm on `z`.
pub fn lti_constants(sys: &LtiSystem, weights: &LtiWeights) -> Result<GainConstants> {
    let nx = sys.nx();
    let p = match &weights.p_x {
        Some(p) => {
            if p.nrows() != nx || p.ncols() != nx {
                return Err(Error::dims(
                    "state weight",
                    format!("{nx}x{nx}"),
                    format!("{}x{}", p.nrows(), p.ncols()),
                ));
            }
            p.clone()
        }
        None => DMatrix::identity(nx, nx),
    };
    // ‖x‖_P = ‖Lᵀx‖₂ for P = LLᵀ.
    let l = linalg::spd_factor(&p, "state weight")?;
    let lt = l.transpose();
    let lt_inv = linalg::inverse(&lt, "state weight factor")?;

    let xi = norms::log_norm_2_weighted(&sys.a, &p)?;
    let lip_x_f = linalg::spectral_norm(&(&lt * &sys.a * &lt_inv));
    let lip_z_f = linalg::spectral_norm(&(&lt * &sys.b));
    let lip_x_g = linalg::spectral_norm(&(&sys.c * &lt_inv));
    let lip_z_g = linalg::spectral_norm(&sys.d);
    let rm = sys.reduced_matrix()?;
    let mu_rm = norms::log_norm_2_weighted(&rm, &p)?;
    Ok(GainConstants {
        lip_x_f,
        lip_z_f,
        oslip_x_f: xi,
        lip_x_g,
        lip_z_g,
        rm_rate: (mu_rm < 0.0).then_some(-mu_rm),
    })
}

/// Exact one-period transition `L(n, T)` of the sampled LTI interconnection
/// and the DTC rate `(1 + ρ(L))/2`.
pub fn lti_dtc_matrix(sys: &LtiSystem, n: u32, t: f64) -> Result<(DMatrix<f64>, f64)> {
    check_n_t(n, t)?;
    let (nx, nz) = (sys.nx(), sys.nz());
    let (phi, gamma) = linalg::expm_with_input_integral(&sys.a, &sys.b, t)?;
    let eye = DMatrix::<f64>::identity(nz, nz);
    let d_n = linalg::matrix_power(&sys.d, n);
    let inv = linalg::inverse(&(&eye - &sys.d), "I - D")?;
    let s = (&eye - &d_n) * inv * &sys.c;
    let l21 = &s * &phi;
    let l22 = &s * &gamma + &d_n;
    let mut l = DMatrix::zeros(nx + nz, nx + nz);
    l.view_mut((0, 0), (nx, nx)).copy_from(&phi);
    l.view_mut((0, nx), (nx, nz)).copy_from(&gamma);
    l.view_mut((nx, 0), (nz, nx)).copy_from(&l21);
    l.view_mut((nx, nx), (nz, nz)).copy_from(&l22);
    let rho = norms::spectral_radius(&l)?;
    Ok((l, 0.5 * (1.0 + rho)))
}

pub fn lti_certificate(sys: &LtiSystem, n: u32, t: f64) -> Result<Certificate> {
    let (l, rate) = lti_dtc_matrix(sys, n, t)?;
    let rho = 2.0 * rate - 1.0;
    Ok(Certificate {
        kind: CertificateKind::LtiDtc,
        n,
        period: t,
        gain_matrix: l,
        spectral_radius: rho,
        perron_weights: None,
        transient_prefactor: None,
        decay_rate: if rho > 0.0 { -rho.ln() / t } else { f64::INFINITY },
        is_stable: rho < 1.0,
    })
}

/// Per-period multiplier of the scalar loop `ẋ = ax + bz`, `z = z*(x)`
/// sampled every `T`: `e^{aT} + (bc/(1−d)) (e^{aT} − 1)/a`.
pub fn scalar_zoh_multiplier(a: f64, b: f64, c: f64, d: f64, t: f64) -> f64 {
    (a * t).exp() + b * c / (1.0 - d) * h_kernel(t, a)
}

/// Smallest `T` at which the scalar multiplier reaches `−2`:
/// `(1/a) ln((−2a(1−d) + bc)/(a(1−d) + bc))`.
pub fn scalar_instability_threshold(a: f64, b: f64, c: f64, d: f64) -> Result<f64> {
    let k = b * c;
    let s = 1.0 - d;
    if !(a > 0.0 && d.abs() < 1.0 && a * s + k < 0.0) {
        return Err(Error::precondition(
            "threshold needs a > 0, |d| < 1 and a + bc/(1-d) < 0",
        ));
    }
    Ok(((-2.0 * a * s + k) / (a * s + k)).ln() / a)
}

pub(crate) fn to_dmatrix(m: &Matrix2<f64>) -> DMatrix<f64> {
    DMatrix::from_column_slice(2, 2, m.as_slice())
}

pub fn weights_to_dvector(eta: &Vector2<f64>) -> DVector<f64> {
    DVector::from_column_slice(eta.as_slice())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn tn_example() -> GainConstants {
        GainConstants {
            lip_x_f: 1.0,
            lip_z_f: 1.0,
            oslip_x_f: 0.0,
            lip_x_g: 1.0,
            lip_z_g: 0.5,
            rm_rate: Some(1.0),
        }
    }

    fn sg_example() -> GainConstants {
        GainConstants {
            lip_x_f: 2.0,
            lip_z_f: 1.0,
            oslip_x_f: -2.0,
            lip_x_g: 0.3,
            lip_z_g: 0.5,
            rm_rate: None,
        }
    }

    #[test]
    fn bound_matrix_examples() {
        let mut g = tn_example();
        let b = bound_matrix_b(&g, 1.0).unwrap();
        assert_eq!(b, Matrix2::new(1.0, 1.0, 0.0, 1.0));
        g.oslip_x_f = -1.0;
        g.lip_z_f = 2.0;
        let b = bound_matrix_b(&g, 1.0).unwrap();
        assert_relative_eq!(b[(0, 0)], 1.0);
        assert_relative_eq!(b[(0, 1)], 2.0 * (1.0 - (-1f64).exp()), epsilon = 1e-15);
        let b = bound_matrix_b(&g, 1e-14).unwrap();
        assert_relative_eq!(b, Matrix2::identity(), epsilon = 1e-12);
        assert!(bound_matrix_b(&g, 0.0).is_err());
    }

    #[test]
    fn small_gain_examples() {
        let mut g = GainConstants {
            lip_x_f: 1.0,
            lip_z_f: 0.9,
            oslip_x_f: -2.0,
            lip_x_g: 1.0,
            lip_z_g: 0.5,
            rm_rate: None,
        };
        assert!(small_gain_holds(&g).unwrap());
        g.oslip_x_f = 0.0;
        assert!(!small_gain_holds(&g).unwrap());
        g.oslip_x_f = -1.0;
        g.lip_z_f = 1.0;
        assert!(!small_gain_holds(&g).unwrap());
        g.lip_z_g = 1.0;
        assert!(small_gain_holds(&g).is_err());
    }

    #[test]
    fn smallgain_matrix_limits_and_example() {
        let g = sg_example();
        let a = gain_matrix_smallgain(&g, 1, 0.7).unwrap();
        assert_relative_eq!(a[(1, 0)], g.lip_x_g * (-1.4f64).exp(), epsilon = 1e-15);

        let a0 = gain_matrix_smallgain(&g, 3, 1e-12).unwrap();
        let s = g.lip_x_g * (1.0 - 0.125) / 0.5;
        assert_relative_eq!(a0, Matrix2::new(1.0, 0.0, s, 0.125), epsilon = 1e-10);

        let a = gain_matrix_smallgain(&g, 2, 0.5).unwrap();
        let e = (-1f64).exp();
        let a12 = (1.0 - e) / 2.0;
        let s = 0.3 * 1.5;
        let expected = Matrix2::new(e, a12, s * e, s * a12 + 0.25);
        assert_relative_eq!(a, expected, epsilon = 1e-15);
        assert!(norms::spectral_radius_2x2(&a) < 1.0);
        assert!(norms::schur_2x2_nonneg(&a).unwrap());
    }

    #[test]
    fn rm_matrix_examples() {
        let g = tn_example();
        let a0 = gain_matrix_rm(&g, 2, 1e-13).unwrap();
        assert_relative_eq!(a0, Matrix2::new(1.0, 0.0, 0.0, 0.25), epsilon = 1e-10);
        let a = gain_matrix_rm(&g, 1, 0.05).unwrap();
        assert!(norms::schur_2x2_nonneg(&a).unwrap());
        assert!(g.sufficient_condition(1, 0.10).unwrap() > 0.0);
        assert_relative_eq!(g.sufficient_condition(1, 0.10).unwrap(), 0.2, epsilon = 1e-12);
        let mut no_zeta = g;
        no_zeta.rm_rate = None;
        assert!(gain_matrix_rm(&no_zeta, 1, 0.05).is_err());
    }

    #[test]
    fn tn_example_values() {
        let g = tn_example();
        assert_relative_eq!(g.c1(), 6.0);
        assert_relative_eq!(g.c2(1), 1.0);
        assert_relative_eq!(sampling_bound_tn(&g, 1).unwrap(), 0.5 / 7.0, epsilon = 1e-15);
        assert_relative_eq!(sampling_bound_tinf(&g).unwrap(), 1.0 / 6.0, epsilon = 1e-15);
        assert_relative_eq!(sampling_bound_tn(&g, 60).unwrap(), 1.0 / 6.0, epsilon = 1e-12);
        // ξ → 0 limit of the logarithmic branch.
        let mut gx = g;
        gx.oslip_x_f = 1e-7;
        assert_relative_eq!(sampling_bound_tinf(&gx).unwrap(), 1.0 / 6.0, epsilon = 1e-7);
    }

    #[test]
    fn tn_is_constant_in_n_without_dt_memory() {
        let mut g = tn_example();
        g.lip_z_g = 0.0;
        let t1 = sampling_bound_tn(&g, 1).unwrap();
        for n in 2..10 {
            assert_eq!(sampling_bound_tn(&g, n).unwrap(), t1);
        }
    }

    #[test]
    fn tn_is_infinite_when_kernel_saturates() {
        let g = GainConstants {
            lip_x_f: 0.1,
            lip_z_f: 0.1,
            oslip_x_f: -5.0,
            lip_x_g: 0.1,
            lip_z_g: 0.5,
            rm_rate: Some(4.0),
        };
        assert_eq!(sampling_bound_tn(&g, 3).unwrap(), f64::INFINITY);
        assert!(g.sufficient_condition(3, 1e6).unwrap() < 0.0);
    }

    #[test]
    fn closed_form_upper_bound_fails_for_negative_xi() {
        // With ξ < 0, ln(1 + u)/ξ exceeds u for u < 0, so T(∞) overshoots ζ/C₁
        // and the closed-form bound (which ignores ξ) is exceeded at large n.
        let g = GainConstants {
            lip_x_f: 1.0,
            lip_z_f: 1.0,
            oslip_x_f: -1.0,
            lip_x_g: 1.0,
            lip_z_g: 0.5,
            rm_rate: Some(1.0),
        };
        let upper = sampling_bound_upper(&g).unwrap();
        assert!(sampling_bound_tn(&g, 50).unwrap() > upper);
        let mut g0 = g;
        g0.oslip_x_f = 0.5;
        assert!(sampling_bound_tn(&g0, 50).unwrap() < sampling_bound_upper(&g0).unwrap());
    }

    #[test]
    fn smallgain_certificate_example() {
        let g = sg_example();
        let cert = transient_constants_smallgain(&g, 2, 0.5).unwrap();
        assert!(cert.is_stable);
        assert!(cert.transient_prefactor.unwrap() > 1.0);
        assert!(cert.decay_rate > 0.0);
        assert_relative_eq!(cert.decay_rate, -cert.spectral_radius.ln() / 0.5, epsilon = 1e-9);
        let mut bad = g;
        bad.oslip_x_f = 0.0;
        assert!(transient_constants_smallgain(&bad, 2, 0.5).is_err());
    }

    #[test]
    fn rm_certificate_example() {
        let g = tn_example();
        let cert = transient_constants_rm(&g, 1, 0.05).unwrap();
        assert!(cert.is_stable);
        assert!(cert.decay_rate > 0.0);
        assert!(cert.transient_prefactor.unwrap() >= 1.0);
        assert!(transient_constants_rm(&g, 1, 0.08).is_err());
    }

    #[test]
    fn scalar_example_threshold() {
        let t = scalar_instability_threshold(1.0, 1.0, -3.0, 0.0).unwrap();
        assert_relative_eq!(t, 2.5f64.ln(), epsilon = 1e-15);
        assert_relative_eq!(scalar_zoh_multiplier(1.0, 1.0, -3.0, 0.0, t), -2.0, epsilon = 1e-12);
        assert_relative_eq!(
            scalar_zoh_multiplier(1.0, 1.0, -3.0, 0.0, 1.0),
            3.0 - 2.0 * std::f64::consts::E,
            epsilon = 1e-14
        );
    }
}
