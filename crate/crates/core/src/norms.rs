//! Weighted vector norms, induced and logarithmic matrix norms, spectral
//! quantities, Perron weights and the kernel `h(t, c) = ∫₀ᵗ e^{c(t−s)} ds`.

use nalgebra::{DMatrix, DVector, Matrix2, Vector2};

use crate::error::{Error, Result};
use crate::linalg;

/// Below this magnitude the rate in [`h_kernel`] is treated as zero.
pub const H_KERNEL_ZERO_RATE: f64 = 1e-12;

/// `h(t, c) = ∫₀ᵗ e^{c(t−s)} ds`, i.e. `(e^{ct} − 1)/c`, or `t` when `c = 0`.
///
/// Nonnegative, zero only at `t = 0`, strictly increasing in both arguments
/// for `t > 0`. Negative `t` is clamped to zero.
pub fn h_kernel(t: f64, c: f64) -> f64 {
    let t = t.max(0.0);
    if c.abs() < H_KERNEL_ZERO_RATE {
        t
    } else {
        (c * t).exp_m1() / c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormKind {
    L1,
    L2,
    LInf,
}

/// `‖v‖_{p,[η]} = (Σ ηᵢ|vᵢ|ᵖ)^{1/p}` for `p ∈ {1, 2}`, and `maxᵢ ηᵢ|vᵢ|` for `p = ∞`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedNorm {
    kind: NormKind,
    weights: DVector<f64>,
}

impl WeightedNorm {
    pub fn new(kind: NormKind, weights: DVector<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::invalid("weighted norm needs at least one weight"));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::invalid(format!(
                "norm weights must be positive and finite, got {w}"
            )));
        }
        Ok(Self { kind, weights })
    }

    pub fn unweighted(kind: NormKind, dim: usize) -> Self {
        Self {
            kind,
            weights: DVector::from_element(dim.max(1), 1.0),
        }
    }

    pub fn euclidean(dim: usize) -> Self {
        Self::unweighted(NormKind::L2, dim)
    }

    pub fn kind(&self) -> NormKind {
        self.kind
    }

    pub fn weights(&self) -> &DVector<f64> {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn eval(&self, v: &[f64]) -> Result<f64> {
        if v.len() != self.dim() {
            return Err(Error::dims("weighted norm", self.dim(), v.len()));
        }
        Ok(self.eval_unchecked(v))
    }

    pub(crate) fn eval_unchecked(&self, v: &[f64]) -> f64 {
        let w = self.weights.iter();
        match self.kind {
            NormKind::L1 => v.iter().zip(w).map(|(x, w)| w * x.abs()).sum(),
            NormKind::L2 => v.iter().zip(w).map(|(x, w)| w * x * x).sum::<f64>().sqrt(),
            NormKind::LInf => v
                .iter()
                .zip(w)
                .map(|(x, w)| w * x.abs())
                .fold(0.0, f64::max),
        }
    }

    /// Matrix norm induced by this norm (same norm on domain and codomain).
    pub fn induced(&self, m: &DMatrix<f64>) -> Result<f64> {
        self.check_square(m, "induced norm")?;
        let eta = &self.weights;
        let n = m.nrows();
        Ok(match self.kind {
            NormKind::L2 => induced_norm_2_weighted(m, eta)?,
            // ‖Dv‖₁-type norm with D = diag(η): ‖M‖ = ‖D M D⁻¹‖₁.
            NormKind::L1 => (0..n)
                .map(|j| {
                    (0..n)
                        .map(|i| eta[i] * m[(i, j)].abs() / eta[j])
                        .sum::<f64>()
                })
                .fold(0.0, f64::max),
            NormKind::LInf => (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| eta[i] * m[(i, j)].abs() / eta[j])
                        .sum::<f64>()
                })
                .fold(0.0, f64::max),
        })
    }

    /// Logarithmic norm induced by this norm.
    pub fn log_norm(&self, a: &DMatrix<f64>) -> Result<f64> {
        self.check_square(a, "log-norm")?;
        let eta = &self.weights;
        let n = a.nrows();
        Ok(match self.kind {
            NormKind::L2 => log_norm_2_weighted(a, &DMatrix::from_diagonal(eta))?,
            NormKind::L1 => (0..n)
                .map(|j| {
                    a[(j, j)]
                        + (0..n)
                            .filter(|&i| i != j)
                            .map(|i| eta[i] * a[(i, j)].abs() / eta[j])
                            .sum::<f64>()
                })
                .fold(f64::NEG_INFINITY, f64::max),
            NormKind::LInf => (0..n)
                .map(|i| {
                    a[(i, i)]
                        + (0..n)
                            .filter(|&j| j != i)
                            .map(|j| eta[i] * a[(i, j)].abs() / eta[j])
                            .sum::<f64>()
                })
                .fold(f64::NEG_INFINITY, f64::max),
        })
    }

    fn check_square(&self, m: &DMatrix<f64>, context: &'static str) -> Result<()> {
        let n = linalg::ensure_square(m, context)?;
        if n != self.dim() {
            return Err(Error::dims(context, self.dim(), n));
        }
        Ok(())
    }
}

/// `‖[x; z]‖_cmp = ‖[‖x‖_X, ‖z‖_Z]‖_outer`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeNorm {
    pub x: WeightedNorm,
    pub z: WeightedNorm,
    pub outer: WeightedNorm,
}

impl CompositeNorm {
    pub fn new(x: WeightedNorm, z: WeightedNorm, outer: WeightedNorm) -> Result<Self> {
        if outer.dim() != 2 {
            return Err(Error::dims("composite outer norm", 2, outer.dim()));
        }
        Ok(Self { x, z, outer })
    }

    /// Euclidean norms on both blocks combined by an unweighted ℓ2 norm; this
    /// equals the plain ℓ2 norm of the stacked vector.
    pub fn euclidean(nx: usize, nz: usize) -> Self {
        Self {
            x: WeightedNorm::euclidean(nx),
            z: WeightedNorm::euclidean(nz),
            outer: WeightedNorm::euclidean(2),
        }
    }

    pub fn with_outer_weights(nx: usize, nz: usize, eta: Vector2<f64>) -> Result<Self> {
        Self::new(
            WeightedNorm::euclidean(nx),
            WeightedNorm::euclidean(nz),
            WeightedNorm::new(NormKind::L2, DVector::from_column_slice(eta.as_slice()))?,
        )
    }

    pub fn parts(&self, x: &[f64], z: &[f64]) -> Result<Vector2<f64>> {
        Ok(Vector2::new(self.x.eval(x)?, self.z.eval(z)?))
    }

    pub fn eval(&self, x: &[f64], z: &[f64]) -> Result<f64> {
        let p = self.parts(x, z)?;
        Ok(self.outer.eval_unchecked(p.as_slice()))
    }
}

/// Weight for a matrix measure: a full SPD matrix `P` (norm `√(xᵀPx)`) or a
/// diagonal weight vector.
#[derive(Debug, Clone, PartialEq)]
pub enum MeasureWeight {
    Spd(DMatrix<f64>),
    Diagonal(DVector<f64>),
}

/// A square matrix paired with the weight of the ℓ2-type norm its
/// logarithmic norm is taken in.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixMeasure {
    matrix: DMatrix<f64>,
    weight: MeasureWeight,
}

impl MatrixMeasure {
    pub fn new(matrix: DMatrix<f64>, weight: MeasureWeight) -> Result<Self> {
        let n = linalg::ensure_square(&matrix, "matrix measure")?;
        match &weight {
            MeasureWeight::Spd(p) => {
                if p.nrows() != n || p.ncols() != n {
                    return Err(Error::dims(
                        "matrix measure weight",
                        format!("{n}x{n}"),
                        format!("{}x{}", p.nrows(), p.ncols()),
                    ));
                }
                linalg::spd_factor(p, "matrix measure weight")?;
            }
            MeasureWeight::Diagonal(eta) => {
                WeightedNorm::new(NormKind::L2, eta.clone())?;
                if eta.len() != n {
                    return Err(Error::dims("matrix measure weight", n, eta.len()));
                }
            }
        }
        Ok(Self { matrix, weight })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn weight(&self) -> &MeasureWeight {
        &self.weight
    }

    pub fn value(&self) -> Result<f64> {
        match &self.weight {
            MeasureWeight::Spd(p) => log_norm_2_weighted(&self.matrix, p),
            MeasureWeight::Diagonal(eta) => {
                log_norm_2_weighted(&self.matrix, &DMatrix::from_diagonal(eta))
            }
        }
    }
}

/// `μ_{2,P}(A) = ½ λ_max(P A P⁻¹ + Aᵀ)`.
///
/// The eigenvalues of `PAP⁻¹ + Aᵀ` are real: the matrix is similar to the
/// symmetric `LᵀAL⁻ᵀ + L⁻¹AᵀL` for `P = LLᵀ`. With `P = I` this is the usual
/// `½ λ_max(A + Aᵀ)`.
pub fn log_norm_2_weighted(a: &DMatrix<f64>, p: &DMatrix<f64>) -> Result<f64> {
    let n = linalg::ensure_square(a, "log-norm matrix")?;
    if p.nrows() != n || p.ncols() != n {
        return Err(Error::dims(
            "log-norm weight",
            format!("{n}x{n}"),
            format!("{}x{}", p.nrows(), p.ncols()),
        ));
    }
    linalg::ensure_finite(a, "log-norm matrix")?;
    linalg::spd_factor(p, "log-norm weight")?;
    let p_inv = linalg::inverse(p, "log-norm weight")?;
    let m = p * a * p_inv + a.transpose();
    let ev = linalg::eigenvalues(&m)?;
    Ok(0.5 * ev.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max))
}

/// Plain `μ₂(A) = ½ λ_max(A + Aᵀ)`.
pub fn log_norm_2(a: &DMatrix<f64>) -> Result<f64> {
    linalg::ensure_square(a, "log-norm matrix")?;
    linalg::symmetric_max_eigenvalue(a)
}

/// `ρ(M) = max |λ|`.
pub fn spectral_radius(m: &DMatrix<f64>) -> Result<f64> {
    Ok(linalg::eigenvalues(m)?
        .iter()
        .map(|l| l.norm())
        .fold(0.0, f64::max))
}

/// `α(M) = max Re λ`.
pub fn spectral_abscissa(m: &DMatrix<f64>) -> Result<f64> {
    Ok(linalg::eigenvalues(m)?
        .iter()
        .map(|l| l.re)
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Spectral radius of a 2×2 matrix from the characteristic quadratic.
pub fn spectral_radius_2x2(m: &Matrix2<f64>) -> f64 {
    let (l1, l2) = linalg::eigenvalues_2x2(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    l1.norm().max(l2.norm())
}

fn ensure_nonneg_2x2(m: &Matrix2<f64>, context: &'static str) -> Result<()> {
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite(context));
    }
    if let Some(v) = m.iter().find(|v| **v < 0.0) {
        return Err(Error::invalid(format!("{context}: negative entry {v}")));
    }
    Ok(())
}

/// Schur test for a nonnegative 2×2 matrix `[[a, b], [c, d]]`:
/// `ρ < 1 ⟺ (1−a)(1−d) > bc and a + d < 2`.
pub fn schur_2x2_nonneg(m: &Matrix2<f64>) -> Result<bool> {
    ensure_nonneg_2x2(m, "Schur test")?;
    let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    Ok((1.0 - a) * (1.0 - d) > b * c && a + d < 2.0)
}

/// Operator norm of `M` under `‖·‖_{2,[η]}`: `σ_max(D^{1/2} M D^{−1/2})`,
/// `D = diag(η)`.
pub fn induced_norm_2_weighted(m: &DMatrix<f64>, eta: &DVector<f64>) -> Result<f64> {
    let n = linalg::ensure_square(m, "weighted induced norm")?;
    if eta.len() != n {
        return Err(Error::dims("weighted induced norm weights", n, eta.len()));
    }
    if let Some(w) = eta.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
        return Err(Error::invalid(format!("weights must be positive, got {w}")));
    }
    let sq: DVector<f64> = eta.map(f64::sqrt);
    let scaled = DMatrix::from_fn(n, n, |i, j| sq[i] * m[(i, j)] / sq[j]);
    Ok(linalg::spectral_norm(&scaled))
}

pub fn induced_norm_2_weighted_2x2(m: &Matrix2<f64>, eta: &Vector2<f64>) -> Result<f64> {
    induced_norm_2_weighted(
        &DMatrix::from_column_slice(2, 2, m.as_slice()),
        &DVector::from_column_slice(eta.as_slice()),
    )
}

const PERRON_TOL: f64 = 1e-12;
const PERRON_MAX_ITER: usize = 10_000;
const PERRON_VERIFY_REL: f64 = 1e-8;

fn power_iteration(m: &Matrix2<f64>) -> Vector2<f64> {
    let mut v = Vector2::new(1.0, 1.0).normalize();
    for _ in 0..PERRON_MAX_ITER {
        let next = (m * v).normalize();
        let delta = (next - v).amax();
        v = next;
        if delta < PERRON_TOL {
            break;
        }
    }
    v
}

fn normalise_first(eta: Vector2<f64>) -> Vector2<f64> {
    eta / eta[0]
}

/// Weights `η` with `‖M‖_{2,[η]} = ρ(M)` for a strictly positive 2×2 matrix.
///
/// Built from the right (`v`) and left (`u`) Perron vectors as `ηᵢ = uᵢ/vᵢ`,
/// then checked numerically; if the check fails, a golden-section search over
/// `η₂/η₁ ∈ [1e-6, 1e6]` is used instead. Returned with `η₁ = 1`.
pub fn perron_weights(m: &Matrix2<f64>) -> Result<Vector2<f64>> {
    ensure_nonneg_2x2(m, "Perron weights")?;
    if m.iter().any(|v| *v <= 0.0) {
        return Err(Error::invalid(
            "Perron weights need a strictly positive matrix",
        ));
    }
    let rho = spectral_radius_2x2(m);
    let target = rho * (1.0 + PERRON_VERIFY_REL);

    let v = power_iteration(m);
    let u = power_iteration(&m.transpose());
    if v.iter().chain(u.iter()).all(|x| *x > 0.0) {
        let eta = normalise_first(Vector2::new(u[0] / v[0], u[1] / v[1]));
        if induced_norm_2_weighted_2x2(m, &eta)? <= target {
            return Ok(eta);
        }
    }

    let (eta, norm) = minimise_weight_ratio(m)?;
    if norm <= target {
        Ok(eta)
    } else {
        Err(Error::NoConvergence {
            what: "Perron weight verification",
            iterations: PERRON_MAX_ITER,
            residual: norm - rho,
        })
    }
}

/// Golden-section search for the weight ratio minimising `‖M‖_{2,[η]}`.
/// Works for any nonnegative 2×2 matrix; returns `(η, ‖M‖_{2,[η]})`.
pub fn minimise_weight_ratio(m: &Matrix2<f64>) -> Result<(Vector2<f64>, f64)> {
    let norm_at = |log_r: f64| -> Result<f64> {
        induced_norm_2_weighted_2x2(m, &Vector2::new(1.0, log_r.exp()))
    };
    let invphi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (1e-6f64.ln(), 1e6f64.ln());
    let mut x1 = hi - invphi * (hi - lo);
    let mut x2 = lo + invphi * (hi - lo);
    let mut f1 = norm_at(x1)?;
    let mut f2 = norm_at(x2)?;
    for _ in 0..200 {
        if hi - lo < 1e-12 {
            break;
        }
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = norm_at(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = norm_at(x2)?;
        }
    }
    let best = 0.5 * (lo + hi);
    let eta = Vector2::new(1.0, best.exp());
    Ok((eta, norm_at(best)?))
}

/// Perron weights when the matrix is strictly positive, otherwise the
/// best-effort minimiser. Returns the weights and the induced norm achieved.
pub fn contraction_weights(m: &Matrix2<f64>) -> Result<(Vector2<f64>, f64)> {
    ensure_nonneg_2x2(m, "contraction weights")?;
    if m.iter().all(|v| *v > 0.0) {
        if let Ok(eta) = perron_weights(m) {
            let n = induced_norm_2_weighted_2x2(m, &eta)?;
            return Ok((eta, n));
        }
    }
    minimise_weight_ratio(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn m2(a: f64, b: f64, c: f64, d: f64) -> Matrix2<f64> {
        Matrix2::new(a, b, c, d)
    }

    fn dm(rows: usize, data: &[f64]) -> DMatrix<f64> {
        DMatrix::from_row_slice(rows, data.len() / rows, data)
    }

    /// Composite Simpson quadrature of ∫₀ᵗ e^{c(t−s)} ds.
    fn h_quadrature(t: f64, c: f64) -> f64 {
        let n = 2000;
        let dx = t / n as f64;
        let f = |s: f64| (c * (t - s)).exp();
        let mut acc = f(0.0) + f(t);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * f(i as f64 * dx);
        }
        acc * dx / 3.0
    }

    #[test]
    fn h_kernel_examples() {
        assert_eq!(h_kernel(1.0, 0.0), 1.0);
        assert_eq!(h_kernel(0.0, 5.0), 0.0);
        let c = std::f64::consts::LN_2;
        let quad = h_quadrature(1.0, c);
        // (e^{ln 2} − 1)/ln 2 = 1/ln 2.
        assert_relative_eq!(quad, std::f64::consts::LOG2_E, max_relative = 1e-10);
        assert_relative_eq!(h_kernel(1.0, c), quad, max_relative = 1e-10);
    }

    #[test]
    fn h_kernel_matches_quadrature_for_negative_rates() {
        for &(t, c) in &[(0.3, -2.0), (2.0, -0.5), (5.0, 1.3)] {
            assert_relative_eq!(h_kernel(t, c), h_quadrature(t, c), max_relative = 1e-10);
        }
    }

    #[test]
    fn h_kernel_is_continuous_at_zero_rate() {
        for &t in &[1e-3, 0.5, 3.0, 10.0] {
            for &c in &[1e-9, -1e-9] {
                assert!((h_kernel(t, c) - t).abs() <= 1e-6 * t);
            }
        }
    }

    #[test]
    fn log_norm_examples() {
        let i2 = DMatrix::identity(2, 2);
        assert_relative_eq!(log_norm_2_weighted(&(-&i2), &i2).unwrap(), -1.0, epsilon = 1e-14);
        let nil = dm(2, &[0.0, 1.0, 0.0, 0.0]);
        assert_relative_eq!(log_norm_2_weighted(&nil, &i2).unwrap(), 0.5, epsilon = 1e-14);
    }

    #[test]
    fn log_norm_rejects_bad_weights() {
        let a = DMatrix::identity(2, 2);
        assert!(matches!(
            log_norm_2_weighted(&a, &DMatrix::identity(3, 3)),
            Err(Error::DimensionMismatch { .. })
        ));
        let indefinite = dm(2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(matches!(
            log_norm_2_weighted(&a, &indefinite),
            Err(Error::NotPositiveDefinite(_))
        ));
    }

    #[test]
    fn printed_log_norm_equals_cholesky_symmetrised_form() {
        let a = dm(3, &[-1.0, 2.0, 0.3, 0.0, -0.5, 1.0, -0.7, 0.1, -2.0]);
        let p = dm(3, &[3.0, 0.5, 0.2, 0.5, 2.0, -0.3, 0.2, -0.3, 1.5]);
        let l = linalg::spd_factor(&p, "test").unwrap();
        let lt = l.transpose();
        let lt_inv = lt.clone().try_inverse().unwrap();
        let s = &lt * &a * &lt_inv;
        let sym = (&s + s.transpose()) * 0.5;
        let expected = sym.symmetric_eigenvalues().max();
        assert_relative_eq!(log_norm_2_weighted(&a, &p).unwrap(), expected, epsilon = 1e-12);
    }

    #[test]
    fn spectral_examples() {
        let i2 = DMatrix::identity(2, 2);
        assert_relative_eq!(spectral_radius(&i2).unwrap(), 1.0);
        assert_relative_eq!(spectral_abscissa(&i2).unwrap(), 1.0);
        // Characteristic polynomial λ² − 0.8λ + 0.13.
        let m = dm(2, &[0.5, 0.1, 0.2, 0.3]);
        let expected = 0.4 + 0.03f64.sqrt();
        assert_relative_eq!(expected * expected - 0.8 * expected + 0.13, 0.0, epsilon = 1e-15);
        assert_relative_eq!(spectral_radius(&m).unwrap(), expected, epsilon = 1e-14);
    }

    #[test]
    fn schur_examples() {
        assert!(schur_2x2_nonneg(&m2(0.5, 0.1, 0.2, 0.3)).unwrap());
        assert!(!schur_2x2_nonneg(&m2(1.0, 0.0, 0.0, 1.0)).unwrap());
        assert!(!schur_2x2_nonneg(&m2(0.0, 1.0, 1.0, 0.0)).unwrap());
        assert!(schur_2x2_nonneg(&m2(-0.1, 0.0, 0.0, 0.5)).is_err());
    }

    #[test]
    fn induced_norm_examples() {
        let eta = DVector::from_vec(vec![3.0, 0.2]);
        assert_relative_eq!(
            induced_norm_2_weighted(&DMatrix::identity(2, 2), &eta).unwrap(),
            1.0,
            epsilon = 1e-14
        );
        let d = dm(2, &[2.0, 0.0, 0.0, 0.5]);
        assert_relative_eq!(
            induced_norm_2_weighted(&d, &DVector::from_element(2, 1.0)).unwrap(),
            2.0,
            epsilon = 1e-14
        );
        let m = m2(0.5, 0.1, 0.2, 0.3);
        let eta = perron_weights(&m).unwrap();
        assert_relative_eq!(
            induced_norm_2_weighted_2x2(&m, &eta).unwrap(),
            spectral_radius_2x2(&m),
            epsilon = 1e-8
        );
    }

    #[test]
    fn perron_weights_symmetric_cases() {
        for m in [m2(0.5, 0.5, 0.5, 0.5), m2(0.9, 0.05, 0.05, 0.9)] {
            let eta = perron_weights(&m).unwrap();
            assert_relative_eq!(eta[0], 1.0);
            assert_relative_eq!(eta[1], 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn perron_weights_reject_zero_entries() {
        assert!(perron_weights(&m2(0.5, 0.0, 0.2, 0.3)).is_err());
    }

    #[test]
    fn contraction_weights_handle_triangular_matrix() {
        let m = m2(0.6, 0.4, 0.0, 0.1);
        let (_, norm) = contraction_weights(&m).unwrap();
        assert!(norm <= 0.6 * (1.0 + 1e-5), "norm {norm}");
    }

    #[test]
    fn weighted_norm_values_and_validation() {
        let w = DVector::from_vec(vec![4.0, 1.0]);
        let v = [1.0, -2.0];
        assert_relative_eq!(WeightedNorm::new(NormKind::L1, w.clone()).unwrap().eval(&v).unwrap(), 6.0);
        assert_relative_eq!(WeightedNorm::new(NormKind::L2, w.clone()).unwrap().eval(&v).unwrap(), 8f64.sqrt());
        assert_relative_eq!(WeightedNorm::new(NormKind::LInf, w).unwrap().eval(&v).unwrap(), 4.0);
        assert!(WeightedNorm::new(NormKind::L2, DVector::from_vec(vec![1.0, 0.0])).is_err());
        assert!(WeightedNorm::euclidean(2).eval(&[1.0]).is_err());
    }

    #[test]
    fn induced_and_log_norms_for_l1_linf() {
        let a = dm(2, &[-3.0, 1.0, 2.0, -4.0]);
        let l1 = WeightedNorm::unweighted(NormKind::L1, 2);
        let linf = WeightedNorm::unweighted(NormKind::LInf, 2);
        assert_relative_eq!(l1.induced(&a).unwrap(), 5.0);
        assert_relative_eq!(linf.induced(&a).unwrap(), 6.0);
        assert_relative_eq!(l1.log_norm(&a).unwrap(), -1.0);
        assert_relative_eq!(linf.log_norm(&a).unwrap(), -2.0);
    }

    #[test]
    fn matrix_measure_validates_weight() {
        let a = dm(2, &[0.0, 1.0, -1.0, -1.0]);
        let ok = MatrixMeasure::new(a.clone(), MeasureWeight::Diagonal(DVector::from_vec(vec![1.0, 2.0])))
            .unwrap();
        let direct = log_norm_2_weighted(&a, &DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 2.0])))
            .unwrap();
        assert_relative_eq!(ok.value().unwrap(), direct);
        assert!(MatrixMeasure::new(a, MeasureWeight::Spd(dm(2, &[1.0, 0.5, 0.4, 1.0]))).is_err());
    }
}
