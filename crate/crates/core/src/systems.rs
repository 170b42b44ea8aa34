//! CT/DT interconnections `ẋ = f(x, z)`, `z_k = Gⁿ(x(kT), z_{k−1})`, their
//! fixed points and reduced models, and the LTI special case.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg;

pub type VectorField = Arc<dyn Fn(&DVector<f64>, &DVector<f64>) -> DVector<f64> + Send + Sync>;

pub const FIXED_POINT_TOL: f64 = 1e-12;
pub const FIXED_POINT_MAX_ITER: usize = 100_000;
const NORMALISATION_TOL: f64 = 1e-12;

/// Sampled-data interconnection of a CT vector field and a DT map.
#[derive(Clone)]
pub struct CtDtSystem {
    f: VectorField,
    g: VectorField,
    nx: usize,
    nz: usize,
    /// Iterations of `G` per sample.
    pub n: u32,
    /// Sampling period `T`.
    pub period: f64,
}

impl fmt::Debug for CtDtSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CtDtSystem")
            .field("nx", &self.nx)
            .field("nz", &self.nz)
            .field("n", &self.n)
            .field("period", &self.period)
            .finish_non_exhaustive()
    }
}

impl CtDtSystem {
    /// Checks dimensions and the normalisation `f(0,0) = 0`, `G(0,0) = 0`.
    pub fn new(f: VectorField, g: VectorField, nx: usize, nz: usize, n: u32, period: f64) -> Result<Self> {
        if nx == 0 || nz == 0 {
            return Err(Error::invalid("state and input dimensions must be positive"));
        }
        if n == 0 {
            return Err(Error::invalid("iteration count n must be >= 1"));
        }
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::invalid(format!("sampling period must be positive, got {period}")));
        }
        let sys = Self { f, g, nx, nz, n, period };
        let (x0, z0) = (DVector::zeros(nx), DVector::zeros(nz));
        let f0 = sys.eval_f(&x0, &z0)?;
        let g0 = sys.eval_g(&x0, &z0)?;
        if f0.amax() > NORMALISATION_TOL || g0.amax() > NORMALISATION_TOL {
            return Err(Error::invalid("system must satisfy f(0,0) = 0 and G(0,0) = 0"));
        }
        Ok(sys)
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn nz(&self) -> usize {
        self.nz
    }

    pub fn with_schedule(&self, n: u32, period: f64) -> Result<Self> {
        Self::new(self.f.clone(), self.g.clone(), self.nx, self.nz, n, period)
    }

    fn check_args(&self, x: &DVector<f64>, z: &DVector<f64>) -> Result<()> {
        if x.len() != self.nx {
            return Err(Error::dims("state vector", self.nx, x.len()));
        }
        if z.len() != self.nz {
            return Err(Error::dims("input vector", self.nz, z.len()));
        }
        Ok(())
    }

    pub fn eval_f(&self, x: &DVector<f64>, z: &DVector<f64>) -> Result<DVector<f64>> {
        self.check_args(x, z)?;
        let out = (self.f)(x, z);
        if out.len() != self.nx {
            return Err(Error::dims("vector field output", self.nx, out.len()));
        }
        Ok(out)
    }

    pub fn eval_g(&self, x: &DVector<f64>, z: &DVector<f64>) -> Result<DVector<f64>> {
        self.check_args(x, z)?;
        let out = (self.g)(x, z);
        if out.len() != self.nz {
            return Err(Error::dims("DT map output", self.nz, out.len()));
        }
        Ok(out)
    }

    /// Unchecked evaluation for inner loops whose dimensions were validated once.
    pub(crate) fn f_raw(&self, x: &DVector<f64>, z: &DVector<f64>) -> DVector<f64> {
        (self.f)(x, z)
    }

    /// `Gⁿ(x, z)`, the `n`-fold composition in `z` at fixed `x`.
    pub fn compose_g(&self, x: &DVector<f64>, z: &DVector<f64>, n: u32) -> Result<DVector<f64>> {
        self.check_args(x, z)?;
        let mut z = z.clone();
        for _ in 0..n {
            z = (self.g)(x, &z);
            if z.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite("DT map iteration"));
            }
        }
        Ok(z)
    }

    /// Picard iteration `z ← G(x, z)` until `‖G(x, z) − z‖₂ ≤ tol`.
    pub fn fixed_point_zstar(
        &self,
        x: &DVector<f64>,
        z0: &DVector<f64>,
        tol: f64,
        max_iter: usize,
    ) -> Result<FixedPointResult> {
        self.check_args(x, z0)?;
        picard(|z| (self.g)(x, z), z0.clone(), tol, max_iter)
    }

    pub fn zstar(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        Ok(self
            .fixed_point_zstar(x, &DVector::zeros(self.nz), FIXED_POINT_TOL, FIXED_POINT_MAX_ITER)?
            .z_star)
    }

    /// The reduced model `ẋ = f(x, z*(x))`.
    pub fn reduced_model(&self) -> ReducedModel<'_> {
        ReducedModel { sys: self }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixedPointResult {
    pub z_star: DVector<f64>,
    pub iterations: usize,
    /// `‖G(x, z_star) − z_star‖₂` at the last iterate.
    pub residual: f64,
}

/// Generic Picard iteration of `map` from `z0`.
pub fn picard<F>(map: F, z0: DVector<f64>, tol: f64, max_iter: usize) -> Result<FixedPointResult>
where
    F: Fn(&DVector<f64>) -> DVector<f64>,
{
    let mut z = z0;
    let mut residual = f64::INFINITY;
    for k in 0..=max_iter {
        let next = map(&z);
        if next.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("fixed-point iteration"));
        }
        residual = (&next - &z).norm();
        if residual <= tol {
            return Ok(FixedPointResult {
                z_star: z,
                iterations: k,
                residual,
            });
        }
        z = next;
    }
    Err(Error::NoConvergence {
        what: "fixed-point iteration",
        iterations: max_iter,
        residual,
    })
}

pub struct ReducedModel<'a> {
    sys: &'a CtDtSystem,
}

impl ReducedModel<'_> {
    pub fn eval(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        let z = self.sys.zstar(x)?;
        self.sys.eval_f(x, &z)
    }
}

/// `ẋ = Ax + Bz`, `z⁺ = Cx + Dz`.
#[derive(Debug, Clone, PartialEq)]
pub struct LtiSystem {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub c: DMatrix<f64>,
    pub d: DMatrix<f64>,
}

impl LtiSystem {
    pub fn new(a: DMatrix<f64>, b: DMatrix<f64>, c: DMatrix<f64>, d: DMatrix<f64>) -> Result<Self> {
        let nx = linalg::ensure_square(&a, "A")?;
        let nz = linalg::ensure_square(&d, "D")?;
        if b.shape() != (nx, nz) {
            return Err(Error::dims("B", format!("{nx}x{nz}"), format!("{}x{}", b.nrows(), b.ncols())));
        }
        if c.shape() != (nz, nx) {
            return Err(Error::dims("C", format!("{nz}x{nx}"), format!("{}x{}", c.nrows(), c.ncols())));
        }
        for (m, name) in [(&a, "A"), (&b, "B"), (&c, "C"), (&d, "D")] {
            linalg::ensure_finite(m, name)?;
        }
        Ok(Self { a, b, c, d })
    }

    /// Scalar system from four numbers.
    pub fn scalar(a: f64, b: f64, c: f64, d: f64) -> Self {
        let m = |v| DMatrix::from_element(1, 1, v);
        Self { a: m(a), b: m(b), c: m(c), d: m(d) }
    }

    pub fn nx(&self) -> usize {
        self.a.nrows()
    }

    pub fn nz(&self) -> usize {
        self.d.nrows()
    }

    /// `(I − D)⁻¹C`, so that `z*(x) = (I − D)⁻¹Cx`.
    pub fn zstar_matrix(&self) -> Result<DMatrix<f64>> {
        let eye = DMatrix::identity(self.nz(), self.nz());
        Ok(linalg::inverse(&(eye - &self.d), "I - D")? * &self.c)
    }

    /// `A + B(I − D)⁻¹C`.
    pub fn reduced_matrix(&self) -> Result<DMatrix<f64>> {
        Ok(&self.a + &self.b * self.zstar_matrix()?)
    }

    pub fn to_ctdt(&self, n: u32, period: f64) -> Result<CtDtSystem> {
        let (a, b, c, d) = (self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone());
        CtDtSystem::new(
            Arc::new(move |x, z| &a * x + &b * z),
            Arc::new(move |x, z| &c * x + &d * z),
            self.nx(),
            self.nz(),
            n,
            period,
        )
    }
}

/// Exact zero-order-hold pair `(e^{AΔ}, (∫₀^Δ e^{A(Δ−s)} ds) B)`.
pub fn zoh_discretize(a: &DMatrix<f64>, b: &DMatrix<f64>, dt: f64) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::invalid(format!("discretisation step must be positive, got {dt}")));
    }
    linalg::expm_with_input_integral(a, b, dt)
}
