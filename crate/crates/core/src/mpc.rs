//! Linear MPC with a condensed cost, single gradient steps as the DT map,
//! soft state constraints, and reduced-model log-norm maps.
//!
//! Decision variable `z = (z₁, …, z_H)`; predictions `x₁ = x`,
//! `x_{i+1} = Ā x_i + B̄ z_i`; cost
//! `Σ_{i≤H} (z_iᵀ R z_i + x_iᵀ Q x_i) + x_{H+1}ᵀ P x_{H+1}` plus, when soft
//! constraints are present, `γ Σ_{i≤H} (‖max{0, lb − x_i}‖² + ‖max{0, x_i − ub}‖²)`.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg;
use crate::norms;
use crate::systems::{self, CtDtSystem, FixedPointResult};

pub const DARE_TOL: f64 = 1e-12;
pub const DARE_MAX_ITER: usize = 1_000_000;
/// Central-difference half-width used for `z*` Jacobians.
pub const JACOBIAN_FD_STEP: f64 = 0.01;

/// `P ← ĀᵀPĀ − (ĀᵀPB̄)(B̄ᵀPB̄ + R)⁻¹(ĀᵀPB̄)ᵀ + Q`, iterated from `P = Q`
/// until successive iterates differ by at most `tol` (max-abs).
pub fn dare_solve(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    q: &DMatrix<f64>,
    r: &DMatrix<f64>,
    tol: f64,
    max_iter: usize,
) -> Result<DMatrix<f64>> {
    let nx = linalg::ensure_square(a, "DARE A")?;
    let nu = linalg::ensure_square(r, "DARE R")?;
    if b.shape() != (nx, nu) || q.shape() != (nx, nx) {
        return Err(Error::dims("DARE operands", format!("B {nx}x{nu}, Q {nx}x{nx}"), format!("B {:?}, Q {:?}", b.shape(), q.shape())));
    }
    linalg::spd_factor(r, "DARE R")?;
    let mut p = q.clone();
    let mut delta = f64::INFINITY;
    for _ in 0..max_iter {
        let next = riccati_step(a, b, q, r, &p)?;
        delta = (&next - &p).amax();
        p = next;
        if !delta.is_finite() {
            return Err(Error::NonFinite("Riccati recursion"));
        }
        if delta <= tol {
            return Ok(p);
        }
    }
    Err(Error::NoConvergence {
        what: "Riccati recursion",
        iterations: max_iter,
        residual: delta,
    })
}

fn riccati_step(a: &DMatrix<f64>, b: &DMatrix<f64>, q: &DMatrix<f64>, r: &DMatrix<f64>, p: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let apb = a.transpose() * p * b;
    let s = b.transpose() * p * b + r;
    let s_inv = linalg::inverse(&s, "B'PB + R")?;
    let next = a.transpose() * p * a - &apb * s_inv * apb.transpose() + q;
    Ok((&next + next.transpose()) * 0.5)
}

/// Max-abs residual of the DARE at `p`.
pub fn dare_residual(a: &DMatrix<f64>, b: &DMatrix<f64>, q: &DMatrix<f64>, r: &DMatrix<f64>, p: &DMatrix<f64>) -> Result<f64> {
    Ok((riccati_step(a, b, q, r, p)? - p).amax())
}

/// `γ ‖max{0, lb − x}‖² + γ ‖max{0, x − ub}‖²` on each predicted state.
#[derive(Debug, Clone, PartialEq)]
pub struct SoftConstraints {
    pub gamma: f64,
    pub lb: DVector<f64>,
    pub ub: DVector<f64>,
}

impl SoftConstraints {
    pub fn new(gamma: f64, lb: DVector<f64>, ub: DVector<f64>) -> Result<Self> {
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(Error::invalid(format!("penalty weight must be nonnegative, got {gamma}")));
        }
        if lb.len() != ub.len() {
            return Err(Error::dims("state bounds", lb.len(), ub.len()));
        }
        if lb.iter().zip(ub.iter()).any(|(l, u)| !(l <= u)) {
            return Err(Error::invalid("state bounds need lb <= ub"));
        }
        Ok(Self { gamma, lb, ub })
    }

    pub fn symmetric(gamma: f64, half_widths: &[f64]) -> Result<Self> {
        let ub = DVector::from_column_slice(half_widths);
        Self::new(gamma, -&ub, ub)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MpcProblem {
    /// Continuous-time plant `ẋ = Ax + Bu`.
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    /// Discretisation step `Δ`.
    pub dt: f64,
    pub a_bar: DMatrix<f64>,
    pub b_bar: DMatrix<f64>,
    pub horizon: usize,
    pub q: DMatrix<f64>,
    pub r: DMatrix<f64>,
    /// Terminal weight.
    pub p: DMatrix<f64>,
    pub soft: Option<SoftConstraints>,
}

impl MpcProblem {
    /// Discretises the plant with step `dt`; `terminal = None` uses the DARE
    /// solution for the discretised pair.
    pub fn new(
        a: DMatrix<f64>,
        b: DMatrix<f64>,
        dt: f64,
        horizon: usize,
        q: DMatrix<f64>,
        r: DMatrix<f64>,
        terminal: Option<DMatrix<f64>>,
    ) -> Result<Self> {
        let nx = linalg::ensure_square(&a, "plant A")?;
        let nu = linalg::ensure_square(&r, "R")?;
        if b.shape() != (nx, nu) {
            return Err(Error::dims("plant B", format!("{nx}x{nu}"), format!("{}x{}", b.nrows(), b.ncols())));
        }
        if q.shape() != (nx, nx) {
            return Err(Error::dims("Q", format!("{nx}x{nx}"), format!("{}x{}", q.nrows(), q.ncols())));
        }
        if horizon == 0 {
            return Err(Error::invalid("horizon must be >= 1"));
        }
        linalg::spd_factor(&q, "Q")?;
        linalg::spd_factor(&r, "R")?;
        let (a_bar, b_bar) = systems::zoh_discretize(&a, &b, dt)?;
        let p = match terminal {
            Some(p) => {
                if p.shape() != (nx, nx) {
                    return Err(Error::dims("P", format!("{nx}x{nx}"), format!("{}x{}", p.nrows(), p.ncols())));
                }
                p
            }
            None => dare_solve(&a_bar, &b_bar, &q, &r, DARE_TOL, DARE_MAX_ITER)?,
        };
        linalg::spd_factor(&p, "P")?;
        Ok(Self { a, b, dt, a_bar, b_bar, horizon, q, r, p, soft: None })
    }

    /// `ẍ = u` with `Q = I`, `R = 1` and DARE terminal weight.
    pub fn double_integrator(dt: f64, horizon: usize) -> Result<Self> {
        Self::new(
            DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]),
            DMatrix::from_row_slice(2, 1, &[0.0, 1.0]),
            dt,
            horizon,
            DMatrix::identity(2, 2),
            DMatrix::identity(1, 1),
            None,
        )
    }

    pub fn with_soft_constraints(mut self, soft: SoftConstraints) -> Result<Self> {
        if soft.lb.len() != self.nx() {
            return Err(Error::dims("state bounds", self.nx(), soft.lb.len()));
        }
        self.soft = Some(soft);
        Ok(self)
    }

    pub fn nx(&self) -> usize {
        self.a.nrows()
    }

    pub fn nu(&self) -> usize {
        self.b.ncols()
    }

    /// Length of the stacked decision variable, `H · n_u`.
    pub fn nz(&self) -> usize {
        self.horizon * self.nu()
    }

    /// `Π₁`, selecting the first input from the stacked decision variable.
    pub fn first_input_selector(&self) -> DMatrix<f64> {
        let mut s = DMatrix::zeros(self.nu(), self.nz());
        s.view_mut((0, 0), (self.nu(), self.nu())).fill_with_identity();
        s
    }

    pub fn gamma(&self) -> f64 {
        self.soft.as_ref().map_or(0.0, |s| s.gamma)
    }
}

/// The cost as a function of `(z, x)` with prediction operators
/// `x_i = Φ_i x + Γ_i z`, `i = 1, …, H+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CondensedCost {
    nx: usize,
    nz: usize,
    horizon: usize,
    phi: Vec<DMatrix<f64>>,
    gamma_ops: Vec<DMatrix<f64>>,
    /// Quadratic part `zᵀ H_s z + 2 zᵀ F x + xᵀ E x`.
    hs: DMatrix<f64>,
    f: DMatrix<f64>,
    e: DMatrix<f64>,
    /// `Γ` stacked over `i = 1, …, H` (rows `nx·H`), and `Φ` likewise.
    gamma_stack: DMatrix<f64>,
    phi_stack: DMatrix<f64>,
    soft: Option<SoftConstraints>,
    mu: f64,
    ell: f64,
}

/// Builds the prediction operators and the quadratic and penalty parts.
pub fn condense(prob: &MpcProblem) -> Result<CondensedCost> {
    let (nx, nu, h) = (prob.nx(), prob.nu(), prob.horizon);
    let nz = prob.nz();
    let mut phi = Vec::with_capacity(h + 1);
    let mut gamma_ops = Vec::with_capacity(h + 1);
    phi.push(DMatrix::identity(nx, nx));
    gamma_ops.push(DMatrix::zeros(nx, nz));
    for i in 1..=h {
        let next_phi = &prob.a_bar * &phi[i - 1];
        let mut next_gamma = &prob.a_bar * &gamma_ops[i - 1];
        let mut block = next_gamma.view_mut((0, (i - 1) * nu), (nx, nu));
        block += &prob.b_bar;
        phi.push(next_phi);
        gamma_ops.push(next_gamma);
    }
    let mut hs = DMatrix::zeros(nz, nz);
    for i in 0..h {
        hs.view_mut((i * nu, i * nu), (nu, nu)).copy_from(&prob.r);
    }
    let mut f = DMatrix::zeros(nz, nx);
    let mut e = DMatrix::zeros(nx, nx);
    for i in 0..=h {
        let w = if i < h { &prob.q } else { &prob.p };
        let gtw = gamma_ops[i].transpose() * w;
        hs += &gtw * &gamma_ops[i];
        f += &gtw * &phi[i];
        e += phi[i].transpose() * w * &phi[i];
    }
    hs = (&hs + hs.transpose()) * 0.5;

    let mut gamma_stack = DMatrix::zeros(nx * h, nz);
    let mut phi_stack = DMatrix::zeros(nx * h, nx);
    for i in 0..h {
        gamma_stack.view_mut((i * nx, 0), (nx, nz)).copy_from(&gamma_ops[i]);
        phi_stack.view_mut((i * nx, 0), (nx, nx)).copy_from(&phi[i]);
    }

    let hess = &hs * 2.0;
    let (mu, _) = linalg::symmetric_eigen_range(&hess)?;
    let g = prob.gamma();
    let upper = if g > 0.0 {
        &hess + gamma_stack.transpose() * &gamma_stack * (2.0 * g)
    } else {
        hess
    };
    let (_, ell) = linalg::symmetric_eigen_range(&upper)?;
    if mu <= 0.0 {
        return Err(Error::NotPositiveDefinite("condensed Hessian"));
    }
    Ok(CondensedCost {
        nx,
        nz,
        horizon: h,
        phi,
        gamma_ops,
        hs,
        f,
        e,
        gamma_stack,
        phi_stack,
        soft: prob.soft.clone().filter(|s| s.gamma > 0.0),
        mu,
        ell,
    })
}

impl CondensedCost {
    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn nz(&self) -> usize {
        self.nz
    }

    /// Strong-convexity modulus: smallest eigenvalue of the quadratic Hessian `2H_s`.
    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Smoothness bound: largest eigenvalue of `2H_s + 2γ Σ_{i≤H} Γ_iᵀΓ_i`.
    pub fn ell(&self) -> f64 {
        self.ell
    }

    /// `2H_s`, the Hessian of the quadratic part.
    pub fn quadratic_hessian(&self) -> DMatrix<f64> {
        &self.hs * 2.0
    }

    /// `F` in the cross term `2zᵀFx`.
    pub fn cross_term(&self) -> &DMatrix<f64> {
        &self.f
    }

    /// Predicted states `x_1, …, x_{H+1}`.
    pub fn predict(&self, z: &DVector<f64>, x: &DVector<f64>) -> Vec<DVector<f64>> {
        (0..=self.horizon)
            .map(|i| &self.phi[i] * x + &self.gamma_ops[i] * z)
            .collect()
    }

    fn check(&self, z: &DVector<f64>, x: &DVector<f64>) -> Result<()> {
        if z.len() != self.nz {
            return Err(Error::dims("decision vector", self.nz, z.len()));
        }
        if x.len() != self.nx {
            return Err(Error::dims("state vector", self.nx, x.len()));
        }
        Ok(())
    }

    /// Constraint violations `max{0, x_i − ub} − max{0, lb − x_i}` stacked
    /// over `i ≤ H`.
    fn violations(&self, soft: &SoftConstraints, z: &DVector<f64>, x: &DVector<f64>) -> DVector<f64> {
        let xs = &self.phi_stack * x + &self.gamma_stack * z;
        DVector::from_fn(xs.len(), |k, _| {
            let j = k % self.nx;
            (xs[k] - soft.ub[j]).max(0.0) - (soft.lb[j] - xs[k]).max(0.0)
        })
    }

    pub fn cost(&self, z: &DVector<f64>, x: &DVector<f64>) -> Result<f64> {
        self.check(z, x)?;
        let mut c = z.dot(&(&self.hs * z)) + 2.0 * z.dot(&(&self.f * x)) + x.dot(&(&self.e * x));
        if let Some(soft) = &self.soft {
            c += soft.gamma * self.violations(soft, z, x).norm_squared();
        }
        Ok(c)
    }

    pub fn gradient(&self, z: &DVector<f64>, x: &DVector<f64>) -> Result<DVector<f64>> {
        self.check(z, x)?;
        Ok(self.gradient_unchecked(z, x))
    }

    fn gradient_unchecked(&self, z: &DVector<f64>, x: &DVector<f64>) -> DVector<f64> {
        let mut g = (&self.hs * z + &self.f * x) * 2.0;
        if let Some(soft) = &self.soft {
            let v = self.violations(soft, z, x);
            if v.iter().any(|e| *e != 0.0) {
                g += self.gamma_stack.tr_mul(&v) * (2.0 * soft.gamma);
            }
        }
        g
    }

    /// Generalised Hessian at `z`: the quadratic part plus `2γ Γᵀ S Γ` with
    /// `S` selecting the active penalty rows.
    fn generalised_hessian(&self, z: &DVector<f64>, x: &DVector<f64>) -> DMatrix<f64> {
        let mut h = &self.hs * 2.0;
        if let Some(soft) = &self.soft {
            let v = self.violations(soft, z, x);
            for (k, e) in v.iter().enumerate() {
                if *e != 0.0 {
                    let row = self.gamma_stack.row(k);
                    h += row.transpose() * row * (2.0 * soft.gamma);
                }
            }
        }
        h
    }

    /// `−H_s⁻¹F`, the minimiser map of the quadratic part.
    pub fn unconstrained_minimiser(&self) -> Result<DMatrix<f64>> {
        Ok(-(linalg::inverse(&self.hs, "condensed Hessian")? * &self.f))
    }

    /// Minimiser `z*(x)` of the full cost.
    ///
    /// The quadratic case is solved in closed form. With penalties the cost
    /// is piecewise quadratic and is minimised by generalised Newton steps
    /// with backtracking, falling back to gradient iterations with step
    /// `2/(μ + ℓ)`. The result is accepted when `‖∇‖₂ ≤ tol`.
    pub fn minimiser(&self, x: &DVector<f64>, tol: f64, max_iter: usize) -> Result<FixedPointResult> {
        self.check(&DVector::zeros(self.nz), x)?;
        let hs_inv = linalg::inverse(&self.hs, "condensed Hessian")?;
        let mut z = -(&hs_inv * (&self.f * x));
        if self.soft.is_none() {
            let residual = self.gradient_unchecked(&z, x).norm();
            return Ok(FixedPointResult { z_star: z, iterations: 0, residual });
        }
        let mut cost = self.cost(&z, x)?;
        for k in 0..max_iter.min(200) {
            let g = self.gradient_unchecked(&z, x);
            let gn = g.norm();
            if gn <= tol {
                return Ok(FixedPointResult { z_star: z, iterations: k, residual: gn });
            }
            let h = self.generalised_hessian(&z, x);
            let Some(chol) = h.cholesky() else { break };
            let dir = -chol.solve(&g);
            let slope = g.dot(&dir);
            let mut t = 1.0;
            let mut accepted = false;
            while t > 1e-12 {
                let cand = &z + &dir * t;
                let c = self.cost(&cand, x)?;
                if c <= cost + 1e-4 * t * slope {
                    z = cand;
                    cost = c;
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        let step = 2.0 / (self.mu + self.ell);
        let res = systems::picard(|z| z - self.gradient_unchecked(z, x) * step, z, tol * step, max_iter)?;
        let residual = self.gradient_unchecked(&res.z_star, x).norm();
        Ok(FixedPointResult { residual, ..res })
    }

    /// Step `min(1/ℓ, 1.9 μ/ℓ²)`, always inside `(0, 2μ/ℓ²)`.
    pub fn default_step(&self) -> f64 {
        (1.0 / self.ell).min(1.9 * self.mu / (self.ell * self.ell))
    }

    pub fn max_step(&self) -> f64 {
        2.0 * self.mu / (self.ell * self.ell)
    }
}

/// `G(x, z) = z − η ∇_z cost(z, x)`.
#[derive(Debug, Clone)]
pub struct GradientMap {
    cost: Arc<CondensedCost>,
    step: f64,
}

impl GradientMap {
    pub fn new(cost: Arc<CondensedCost>, step: f64) -> Result<Self> {
        let max = cost.max_step();
        if !(step > 0.0 && step < max) {
            return Err(Error::invalid(format!(
                "gradient step {step} outside the admissible interval (0, {max})"
            )));
        }
        Ok(Self { cost, step })
    }

    pub fn with_default_step(cost: Arc<CondensedCost>) -> Self {
        let step = cost.default_step();
        Self { cost, step }
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn cost(&self) -> &CondensedCost {
        &self.cost
    }

    pub fn eval(&self, x: &DVector<f64>, z: &DVector<f64>) -> Result<DVector<f64>> {
        Ok(z - self.cost.gradient(z, x)? * self.step)
    }

    /// Lipschitz constant of `z ↦ G(x, z)`: `max |1 − η λ|` over the Hessian
    /// eigenvalues (quadratic case) or over `[μ, ℓ]` (with penalties).
    pub fn lipschitz_z(&self) -> Result<f64> {
        let eta = self.step;
        if self.cost.soft.is_some() {
            return Ok((1.0 - eta * self.cost.mu).abs().max((1.0 - eta * self.cost.ell).abs()));
        }
        let ev = self.cost.quadratic_hessian().symmetric_eigenvalues();
        Ok(ev.iter().map(|l| (1.0 - eta * l).abs()).fold(0.0, f64::max))
    }

    /// Lipschitz constant of `x ↦ G(x, z)`, bounded by `η ‖∇²_{zx}‖` with
    /// penalty rows included when present.
    pub fn lipschitz_x(&self) -> f64 {
        let c = &self.cost;
        let base = linalg::spectral_norm(&(&c.f * 2.0));
        let pen = c.soft.as_ref().map_or(0.0, |s| {
            2.0 * s.gamma * linalg::spectral_norm(&c.gamma_stack) * linalg::spectral_norm(&c.phi_stack)
        });
        self.step * (base + pen)
    }

    /// Interconnection with the CT plant `ẋ = Ax + BΠ₁z`.
    pub fn to_ctdt(&self, prob: &MpcProblem, n: u32, period: f64) -> Result<CtDtSystem> {
        let bp = &prob.b * prob.first_input_selector();
        let a = prob.a.clone();
        let map = self.clone();
        CtDtSystem::new(
            Arc::new(move |x, z| &a * x + &bp * z),
            Arc::new(move |x, z| z - map.cost.gradient_unchecked(z, x) * map.step),
            prob.nx(),
            prob.nz(),
            n,
            period,
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnconstrainedGain {
    /// `z*(x) = −K x`.
    pub k: DMatrix<f64>,
    /// `Π₁ K`.
    pub k_first: DMatrix<f64>,
    /// `A − B Π₁ K` for the continuous-time plant.
    pub a_cl: DMatrix<f64>,
}

pub fn unconstrained_gain(prob: &MpcProblem) -> Result<UnconstrainedGain> {
    if prob.gamma() > 0.0 {
        return Err(Error::precondition("closed-form gain needs gamma = 0"));
    }
    let cost = condense(prob)?;
    let k = -cost.unconstrained_minimiser()?;
    let k_first = prob.first_input_selector() * &k;
    let a_cl = &prob.a - &prob.b * &k_first;
    Ok(UnconstrainedGain { k, k_first, a_cl })
}

/// Central-difference Jacobian of `z*` at `x` with half-width `fd_step`.
pub fn zstar_jacobian(cost: &CondensedCost, x: &DVector<f64>, fd_step: f64) -> Result<DMatrix<f64>> {
    if !(fd_step > 0.0) {
        return Err(Error::invalid("finite-difference step must be positive"));
    }
    let mut j = DMatrix::zeros(cost.nz(), cost.nx());
    for i in 0..cost.nx() {
        let mut xp = x.clone();
        let mut xm = x.clone();
        xp[i] += fd_step;
        xm[i] -= fd_step;
        let zp = cost.minimiser(&xp, ZSTAR_TOL, ZSTAR_MAX_ITER)?.z_star;
        let zm = cost.minimiser(&xm, ZSTAR_TOL, ZSTAR_MAX_ITER)?.z_star;
        j.set_column(i, &((zp - zm) / (2.0 * fd_step)));
    }
    Ok(j)
}

const ZSTAR_TOL: f64 = 1e-10;
const ZSTAR_MAX_ITER: usize = 100_000;

/// Rectangular grid over the first two state coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourGrid {
    pub x1: (f64, f64),
    pub x2: (f64, f64),
    pub n1: usize,
    pub n2: usize,
}

impl ContourGrid {
    pub fn axis(range: (f64, f64), n: usize) -> Vec<f64> {
        match n {
            0 => Vec::new(),
            1 => vec![0.5 * (range.0 + range.1)],
            _ => (0..n)
                .map(|i| range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64)
                .collect(),
        }
    }

    /// Cell centres in row-major order (outer `x1`, inner `x2`).
    pub fn points(&self) -> Vec<(f64, f64)> {
        let a2 = Self::axis(self.x2, self.n2);
        Self::axis(self.x1, self.n1)
            .into_iter()
            .flat_map(|a| a2.iter().map(move |b| (a, *b)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContourField {
    pub points: Vec<(f64, f64)>,
    /// `NaN` where the minimiser failed.
    pub values: Vec<f64>,
}

/// `μ_{2,P}(A + B Π₁ J_{z*}(x))` on every grid point of a two-state problem.
pub fn rm_lognorm_contour(prob: &MpcProblem, weight: &DMatrix<f64>, grid: &ContourGrid) -> Result<ContourField> {
    if prob.nx() != 2 {
        return Err(Error::dims("contour state dimension", 2, prob.nx()));
    }
    linalg::spd_factor(weight, "contour weight")?;
    let cost = condense(prob)?;
    let sel = prob.first_input_selector();
    let points = grid.points();
    let values = points
        .par_iter()
        .map(|&(a, b)| {
            let x = DVector::from_vec(vec![a, b]);
            zstar_jacobian(&cost, &x, JACOBIAN_FD_STEP)
                .and_then(|j| norms::log_norm_2_weighted(&(&prob.a + &prob.b * &sel * j), weight))
                .unwrap_or(f64::NAN)
        })
        .collect();
    Ok(ContourField { points, values })
}
