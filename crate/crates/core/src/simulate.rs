//! Zero-order-hold simulation of CT/DT interconnections, empirical decay
//! rates, constant estimation and forward-invariance checks.

use nalgebra::{DVector, Matrix2, Vector2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::certify::GainConstants;
use crate::error::{Error, Result};
use crate::norms::CompositeNorm;
use crate::systems::CtDtSystem;

/// Stacked-state norm above which a run is declared divergent.
pub const DIVERGENCE_THRESHOLD: f64 = 1e12;
const BOUND_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Recording {
    /// Every integrator step.
    Full,
    /// Only the sampling instants `kT`.
    Samples,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimOptions {
    /// RK4 steps per sampling interval.
    pub substeps: usize,
    /// Apply `Gⁿ` at `t = 0` instead of holding `z0` on `[0, T)`.
    pub update_at_zero: bool,
    pub recording: Recording,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self {
            substeps: 100,
            update_at_zero: false,
            recording: Recording::Full,
        }
    }
}

/// Time-stamped `(x, z)` samples. The `z` stored at `t = kT` is the value
/// held on `[kT, (k+1)T)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub period: f64,
    pub times: Vec<f64>,
    pub x: Vec<DVector<f64>>,
    pub z: Vec<DVector<f64>>,
    /// Positions in `times` where `t = kT`, in increasing `k`.
    pub sample_indices: Vec<usize>,
    pub diverged: bool,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn is_sample(&self) -> Vec<bool> {
        let mut flags = vec![false; self.len()];
        for &i in &self.sample_indices {
            flags[i] = true;
        }
        flags
    }

    pub fn sample_times(&self) -> Vec<f64> {
        self.sample_indices.iter().map(|&i| self.times[i]).collect()
    }

    pub fn final_state(&self) -> (&DVector<f64>, &DVector<f64>) {
        let last = self.len() - 1;
        (&self.x[last], &self.z[last])
    }
}

fn rk4_step(sys: &CtDtSystem, x: &DVector<f64>, z: &DVector<f64>, h: f64) -> DVector<f64> {
    let k1 = sys.f_raw(x, z);
    let k2 = sys.f_raw(&(x + &k1 * (0.5 * h)), z);
    let k3 = sys.f_raw(&(x + &k2 * (0.5 * h)), z);
    let k4 = sys.f_raw(&(x + &k3 * h), z);
    x + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

fn is_divergent(x: &DVector<f64>, z: &DVector<f64>) -> bool {
    let sq = x.norm_squared() + z.norm_squared();
    !sq.is_finite() || sq.sqrt() > DIVERGENCE_THRESHOLD
}

/// Simulates `ẋ = f(x, z)` with `z` held between samples and updated as
/// `z_k = Gⁿ(x(kT), z_{k−1})`, over the sampling instants `kT ≤ t_end`.
///
/// Runs whose stacked state leaves the ball of radius
/// [`DIVERGENCE_THRESHOLD`] stop early with `diverged` set.
pub fn simulate_ctdt(
    sys: &CtDtSystem,
    x0: &DVector<f64>,
    z0: &DVector<f64>,
    t_end: f64,
    opts: &SimOptions,
) -> Result<Trajectory> {
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(Error::invalid(format!("t_end must be positive, got {t_end}")));
    }
    if opts.substeps == 0 {
        return Err(Error::invalid("substeps must be >= 1"));
    }
    sys.eval_f(x0, z0)?;
    let period = sys.period;
    let intervals = (t_end / period + 1e-9).floor() as usize;
    let h = period / opts.substeps as f64;
    let full = opts.recording == Recording::Full;

    let capacity = if full { intervals * opts.substeps + 1 } else { intervals + 1 };
    let mut traj = Trajectory {
        period,
        times: Vec::with_capacity(capacity),
        x: Vec::with_capacity(capacity),
        z: Vec::with_capacity(capacity),
        sample_indices: Vec::with_capacity(intervals + 1),
        diverged: false,
    };
    let push = |traj: &mut Trajectory, t: f64, x: &DVector<f64>, z: &DVector<f64>, sample: bool| {
        if sample {
            traj.sample_indices.push(traj.times.len());
        }
        traj.times.push(t);
        traj.x.push(x.clone());
        traj.z.push(z.clone());
    };

    let mut x = x0.clone();
    let mut z = if opts.update_at_zero {
        sys.compose_g(&x, z0, sys.n)?
    } else {
        z0.clone()
    };
    push(&mut traj, 0.0, &x, &z, true);
    if is_divergent(&x, &z) {
        traj.diverged = true;
        return Ok(traj);
    }

    for k in 0..intervals {
        let t0 = k as f64 * period;
        for j in 1..=opts.substeps {
            x = rk4_step(sys, &x, &z, h);
            if j < opts.substeps {
                if is_divergent(&x, &z) {
                    push(&mut traj, t0 + j as f64 * h, &x, &z, false);
                    traj.diverged = true;
                    return Ok(traj);
                }
                if full {
                    push(&mut traj, t0 + j as f64 * h, &x, &z, false);
                }
            }
        }
        let t1 = (k + 1) as f64 * period;
        if is_divergent(&x, &z) {
            push(&mut traj, t1, &x, &z, true);
            traj.diverged = true;
            return Ok(traj);
        }
        z = match sys.compose_g(&x, &z, sys.n) {
            Ok(z) => z,
            Err(Error::NonFinite(_)) => {
                push(&mut traj, t1, &x, &z, true);
                traj.diverged = true;
                return Ok(traj);
            }
            Err(e) => return Err(e),
        };
        push(&mut traj, t1, &x, &z, true);
        if is_divergent(&x, &z) {
            traj.diverged = true;
            return Ok(traj);
        }
    }
    Ok(traj)
}

/// Runs [`simulate_ctdt`] for every initial condition in parallel; results
/// keep the input order.
pub fn simulate_batch(
    sys: &CtDtSystem,
    initial: &[(DVector<f64>, DVector<f64>)],
    t_end: f64,
    opts: &SimOptions,
) -> Vec<Result<Trajectory>> {
    initial
        .par_iter()
        .map(|(x0, z0)| simulate_ctdt(sys, x0, z0, t_end, opts))
        .collect()
}

/// `count` vectors with i.i.d. uniform `(0, 1)` entries scaled to unit ℓ2 norm.
pub fn unit_uniform_initial_conditions(count: usize, dim: usize, seed: u64) -> Vec<DVector<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let v = DVector::from_fn(dim, |_, _| loop {
                let u: f64 = rng.random();
                if u > 0.0 {
                    break u;
                }
            });
            let n = v.norm();
            v / n
        })
        .collect()
}

/// Least-squares slope of `ln ‖y(kT)‖` against `kT`; negative means decay.
///
/// Uses the sampling instants only. Samples after the first with zero norm
/// are dropped.
pub fn empirical_decay_rate(traj: &Trajectory, norm: &CompositeNorm) -> Result<f64> {
    decay_rate_on(traj, norm, f64::NEG_INFINITY, f64::INFINITY)
}

/// As [`empirical_decay_rate`], restricted to samples with `t ∈ [t_from, t_to]`.
pub fn decay_rate_on(traj: &Trajectory, norm: &CompositeNorm, t_from: f64, t_to: f64) -> Result<f64> {
    let mut pts = Vec::with_capacity(traj.sample_indices.len());
    for (j, &i) in traj.sample_indices.iter().enumerate() {
        let t = traj.times[i];
        if t < t_from || t > t_to {
            continue;
        }
        let v = norm.eval(traj.x[i].as_slice(), traj.z[i].as_slice())?;
        if v == 0.0 {
            if j == 0 || pts.is_empty() {
                return Err(Error::invalid("decay rate undefined from a zero initial norm"));
            }
            continue;
        }
        pts.push((t, v.ln()));
    }
    if pts.len() < 10 {
        return Err(Error::invalid(format!(
            "decay rate needs at least 10 samples, got {}",
            pts.len()
        )));
    }
    Ok(least_squares_slope(&pts))
}

pub fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let (mt, my) = pts
        .iter()
        .fold((0.0, 0.0), |(a, b), (t, y)| (a + t / n, b + y / n));
    let (mut sty, mut stt) = (0.0, 0.0);
    for (t, y) in pts {
        sty += (t - mt) * (y - my);
        stt += (t - mt) * (t - mt);
    }
    sty / stt
}

fn check_same_grid(a: &Trajectory, b: &Trajectory) -> Result<()> {
    if a.period != b.period || a.times != b.times || a.sample_indices != b.sample_indices {
        return Err(Error::invalid("trajectories do not share a time grid"));
    }
    Ok(())
}

fn difference_parts(a: &Trajectory, b: &Trajectory, i: usize, norm: &CompositeNorm) -> Result<Vector2<f64>> {
    let dx = &a.x[i] - &b.x[i];
    let dz = &a.z[i] - &b.z[i];
    norm.parts(dx.as_slice(), dz.as_slice())
}

fn entrywise_le(lhs: &Vector2<f64>, rhs: &Vector2<f64>, slack: f64) -> bool {
    lhs.iter()
        .zip(rhs.iter())
        .all(|(l, r)| *l <= r + slack * (1.0 + r.abs()))
}

/// Checks `[‖x̃((k+1)T)‖, ‖z̃_{k+1}‖] ≤ M [‖x̃(kT)‖, ‖z̃_k‖]` entrywise at
/// every sample, for the differences of two trajectories on the same grid.
pub fn check_dtc_bound(a: &Trajectory, b: &Trajectory, gain: &Matrix2<f64>, norm: &CompositeNorm) -> Result<bool> {
    check_same_grid(a, b)?;
    let idx = &a.sample_indices;
    for w in idx.windows(2) {
        let prev = difference_parts(a, b, w[0], norm)?;
        let next = difference_parts(a, b, w[1], norm)?;
        if !entrywise_le(&next, &(gain * prev), BOUND_SLACK) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks `[‖x̃(kT+τ)‖, ‖z̃(kT+τ)‖] ≤ B [‖x̃(kT)‖, ‖z̃_k‖]` for every stored
/// `τ ∈ [0, T)`, with relative slack `slack`.
pub fn check_interval_bound(
    a: &Trajectory,
    b: &Trajectory,
    bound: &Matrix2<f64>,
    norm: &CompositeNorm,
    slack: f64,
) -> Result<bool> {
    check_same_grid(a, b)?;
    let idx = &a.sample_indices;
    for (k, &start) in idx.iter().enumerate() {
        let end = idx.get(k + 1).copied().unwrap_or(a.len());
        let rhs = bound * difference_parts(a, b, start, norm)?;
        for i in start..end {
            if !entrywise_le(&difference_parts(a, b, i, norm)?, &rhs, slack) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Checks `‖y(t)‖ ≤ r · b^{t/T} · ‖y(0)‖` at every stored instant.
pub fn check_transient_bound(traj: &Trajectory, norm: &CompositeNorm, prefactor: f64, b: f64, slack: f64) -> Result<bool> {
    let y0 = norm.eval(traj.x[0].as_slice(), traj.z[0].as_slice())?;
    for i in 0..traj.len() {
        let y = norm.eval(traj.x[i].as_slice(), traj.z[i].as_slice())?;
        let bound = prefactor * b.powf(traj.times[i] / traj.period) * y0;
        if y > bound + slack * (1.0 + bound) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Axis-aligned box `[lo, hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxSet {
    pub lo: DVector<f64>,
    pub hi: DVector<f64>,
}

impl BoxSet {
    pub fn new(lo: DVector<f64>, hi: DVector<f64>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::dims("box bounds", lo.len(), hi.len()));
        }
        if lo.iter().zip(hi.iter()).any(|(l, h)| !(l.is_finite() && h.is_finite() && l <= h)) {
            return Err(Error::invalid("box bounds must be finite with lo <= hi"));
        }
        Ok(Self { lo, hi })
    }

    pub fn symmetric(half_widths: &[f64]) -> Result<Self> {
        let hi = DVector::from_column_slice(half_widths);
        Self::new(-&hi, hi)
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn contains(&self, v: &DVector<f64>) -> bool {
        v.len() == self.dim()
            && v.iter()
                .zip(self.lo.iter().zip(self.hi.iter()))
                .all(|(x, (l, h))| *l <= *x && *x <= *h)
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo.iter().zip(self.hi.iter()).any(|(l, h)| l >= h)
    }

    pub fn contains_box(&self, other: &BoxSet) -> bool {
        self.contains(&other.lo) && self.contains(&other.hi)
    }

    /// Largest `|x_i|/h_i` over coordinates, for a box symmetric about 0;
    /// values above one lie outside.
    pub fn scaled_extent(&self, v: &DVector<f64>) -> f64 {
        v.iter()
            .zip(self.hi.iter())
            .map(|(x, h)| x.abs() / h)
            .fold(0.0, f64::max)
    }

    fn sample(&self, rng: &mut impl Rng) -> DVector<f64> {
        DVector::from_fn(self.dim(), |i, _| {
            let (l, h) = (self.lo[i], self.hi[i]);
            if l == h {
                l
            } else {
                rng.random_range(l..h)
            }
        })
    }

    /// Points of a regular grid with `per_edge` points per coordinate that
    /// lie on the boundary, in lexicographic order.
    pub fn boundary_grid(&self, per_edge: usize) -> Vec<DVector<f64>> {
        let d = self.dim();
        if per_edge < 2 || d == 0 {
            return vec![self.lo.clone()];
        }
        let mut out = Vec::new();
        let mut idx = vec![0usize; d];
        loop {
            if idx.iter().any(|&i| i == 0 || i == per_edge - 1) {
                out.push(DVector::from_fn(d, |i, _| {
                    let s = idx[i] as f64 / (per_edge - 1) as f64;
                    self.lo[i] + s * (self.hi[i] - self.lo[i])
                }));
            }
            let mut pos = d;
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < per_edge {
                    break;
                }
                idx[pos] = 0;
            }
        }
    }
}

/// Sampled Lipschitz estimates. Maxima over finitely many difference
/// quotients, hence lower bounds on the true constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatedConstants {
    pub constants: GainConstants,
    pub samples: usize,
    /// Relative inflation applied by [`EstimatedConstants::with_margin`].
    pub margin: f64,
}

impl EstimatedConstants {
    /// Inflates every Lipschitz estimate by `1 + margin` and moves `ξ` and
    /// `ζ` by the same relative amount in the conservative direction.
    pub fn with_margin(&self) -> GainConstants {
        let c = &self.constants;
        let k = 1.0 + self.margin;
        GainConstants {
            lip_x_f: c.lip_x_f * k,
            lip_z_f: c.lip_z_f * k,
            oslip_x_f: c.oslip_x_f + c.oslip_x_f.abs() * self.margin,
            lip_x_g: c.lip_x_g * k,
            lip_z_g: c.lip_z_g * k,
            rm_rate: c.rm_rate.map(|z| z / k),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateOptions {
    pub samples: usize,
    /// Half-width of the central difference.
    pub fd_step: f64,
    pub seed: u64,
    pub margin: f64,
    /// Also estimate the reduced-model rate, solving `z*(x)` at each sample.
    pub reduced_model: bool,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        Self {
            samples: 10_000,
            fd_step: 1e-3,
            seed: 0,
            margin: 0.0,
            reduced_model: false,
        }
    }
}

fn random_unit(rng: &mut impl Rng, dim: usize) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(dim, |_, _| rng.random_range(-1.0..1.0));
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return v / n;
        }
    }
}

/// Estimates the gain constants of `sys` over the box `X × Z` from central
/// differences along random directions at random base points.
pub fn estimate_constants(sys: &CtDtSystem, x_box: &BoxSet, z_box: &BoxSet, opts: &EstimateOptions) -> Result<EstimatedConstants> {
    if x_box.dim() != sys.nx() {
        return Err(Error::dims("state box", sys.nx(), x_box.dim()));
    }
    if z_box.dim() != sys.nz() {
        return Err(Error::dims("input box", sys.nz(), z_box.dim()));
    }
    if !(opts.fd_step > 0.0) {
        return Err(Error::invalid("finite-difference step must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let two_d = 2.0 * opts.fd_step;
    let (mut lxf, mut lzf, mut osl, mut lxg, mut lzg) = (0.0f64, 0.0f64, f64::NEG_INFINITY, 0.0f64, 0.0f64);
    let mut rm_osl = f64::NEG_INFINITY;
    for _ in 0..opts.samples {
        let x = x_box.sample(&mut rng);
        let z = z_box.sample(&mut rng);
        let dx = random_unit(&mut rng, sys.nx()) * opts.fd_step;
        let dz = random_unit(&mut rng, sys.nz()) * opts.fd_step;
        let (xp, xm) = (&x + &dx, &x - &dx);
        let (zp, zm) = (&z + &dz, &z - &dz);

        let fx = sys.eval_f(&xp, &z)? - sys.eval_f(&xm, &z)?;
        lxf = lxf.max(fx.norm() / two_d);
        // ⟨f(x₁)−f(x₂), x₁−x₂⟩/‖x₁−x₂‖² with x₁ − x₂ = 2dx.
        osl = osl.max(fx.dot(&dx) / (2.0 * dx.norm_squared()));
        lzf = lzf.max((sys.eval_f(&x, &zp)? - sys.eval_f(&x, &zm)?).norm() / two_d);
        lxg = lxg.max((sys.eval_g(&xp, &z)? - sys.eval_g(&xm, &z)?).norm() / two_d);
        lzg = lzg.max((sys.eval_g(&x, &zp)? - sys.eval_g(&x, &zm)?).norm() / two_d);

        if opts.reduced_model {
            let rm = sys.reduced_model();
            let fr = rm.eval(&xp)? - rm.eval(&xm)?;
            rm_osl = rm_osl.max(fr.dot(&dx) / (2.0 * dx.norm_squared()));
        }
    }
    if opts.samples == 0 {
        osl = 0.0;
    }
    Ok(EstimatedConstants {
        constants: GainConstants {
            lip_x_f: lxf,
            lip_z_f: lzf,
            oslip_x_f: osl,
            lip_x_g: lxg,
            lip_z_g: lzg,
            rm_rate: (opts.reduced_model && rm_osl < 0.0).then_some(-rm_osl),
        },
        samples: opts.samples,
        margin: opts.margin,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExitEvent {
    pub run: usize,
    pub time: f64,
    pub x: DVector<f64>,
    pub z: DVector<f64>,
    pub diverged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceReport {
    pub invariant: bool,
    pub runs: usize,
    pub exits: usize,
    /// Earliest exit over all runs (ties broken by run index).
    pub first_exit: Option<ExitEvent>,
    /// Per-run decay rate in the Euclidean stacked norm, when defined.
    pub decay_rates: Vec<Option<f64>>,
    pub initial_states: Vec<DVector<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceProblem {
    pub x0: BoxSet,
    pub z0: Vec<DVector<f64>>,
    pub x: BoxSet,
    /// `None` leaves the input unconstrained.
    pub z: Option<BoxSet>,
    pub per_edge: usize,
    pub t_end: f64,
}

/// Simulates from the boundary grid of `X0` × every `z0` and reports
/// whether any trajectory leaves `X × Z` before `t_end`.
pub fn check_forward_invariance(sys: &CtDtSystem, prob: &InvarianceProblem, opts: &SimOptions) -> Result<InvarianceReport> {
    if !prob.x.contains_box(&prob.x0) {
        return Err(Error::precondition("X0 must be contained in X"));
    }
    if let Some(zb) = &prob.z {
        if prob.z0.iter().any(|z| !zb.contains(z)) {
            return Err(Error::precondition("Z0 must be contained in Z"));
        }
    }
    let mut initial = Vec::new();
    for x0 in prob.x0.boundary_grid(prob.per_edge) {
        for z0 in &prob.z0 {
            initial.push((x0.clone(), z0.clone()));
        }
    }
    let cmp = CompositeNorm::euclidean(sys.nx(), sys.nz());
    let results: Vec<Result<(Option<ExitEvent>, Option<f64>)>> = initial
        .par_iter()
        .enumerate()
        .map(|(run, (x0, z0))| {
            let traj = simulate_ctdt(sys, x0, z0, prob.t_end, opts)?;
            let exit = (0..traj.len())
                .find(|&i| !prob.x.contains(&traj.x[i]) || prob.z.as_ref().is_some_and(|zb| !zb.contains(&traj.z[i])))
                .map(|i| ExitEvent {
                    run,
                    time: traj.times[i],
                    x: traj.x[i].clone(),
                    z: traj.z[i].clone(),
                    diverged: traj.diverged,
                })
                .or_else(|| {
                    traj.diverged.then(|| {
                        let (x, z) = traj.final_state();
                        ExitEvent {
                            run,
                            time: *traj.times.last().unwrap(),
                            x: x.clone(),
                            z: z.clone(),
                            diverged: true,
                        }
                    })
                });
            Ok((exit, empirical_decay_rate(&traj, &cmp).ok()))
        })
        .collect();

    let mut exits = 0;
    let mut first: Option<ExitEvent> = None;
    let mut rates = Vec::with_capacity(results.len());
    for r in results {
        let (exit, rate) = r?;
        rates.push(rate);
        if let Some(e) = exit {
            exits += 1;
            if first.as_ref().is_none_or(|f| e.time < f.time) {
                first = Some(e);
            }
        }
    }
    Ok(InvarianceReport {
        invariant: exits == 0,
        runs: initial.len(),
        exits,
        first_exit: first,
        decay_rates: rates,
        initial_states: initial.into_iter().map(|(x, _)| x).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::{zoh_discretize, LtiSystem};
    use approx::assert_relative_eq;
    use nalgebra::DMatrix;
    use std::sync::Arc;

    fn dm(rows: usize, data: &[f64]) -> DMatrix<f64> {
        DMatrix::from_row_slice(rows, data.len() / rows, data)
    }

    fn v(data: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(data)
    }

    #[test]
    fn zero_field_follows_dt_iteration() {
        let sys = CtDtSystem::new(
            Arc::new(|x, _| x * 0.0),
            Arc::new(|_, z| z * 0.5),
            1,
            1,
            2,
            0.5,
        )
        .unwrap();
        let traj = simulate_ctdt(&sys, &v(&[3.0]), &v(&[1.0]), 2.0, &SimOptions::default()).unwrap();
        assert!(traj.x.iter().all(|x| x[0] == 3.0));
        let zs: Vec<f64> = traj.sample_indices.iter().map(|&i| traj.z[i][0]).collect();
        assert_eq!(zs, vec![1.0, 0.25, 0.0625, 0.015625, 0.00390625]);
        assert_eq!(traj.sample_times(), vec![0.0, 0.5, 1.0, 1.5, 2.0]);
        assert_eq!(traj.len(), 4 * 100 + 1);
    }

    #[test]
    fn update_at_zero_applies_map_first() {
        let sys = LtiSystem::scalar(0.0, 0.0, 1.0, 0.0).to_ctdt(1, 1.0).unwrap();
        let opts = SimOptions { update_at_zero: true, ..SimOptions::default() };
        let traj = simulate_ctdt(&sys, &v(&[2.0]), &v(&[5.0]), 1.0, &opts).unwrap();
        assert_eq!(traj.z[0][0], 2.0);
    }

    #[test]
    fn lti_samples_match_exact_discretisation() {
        let lti = LtiSystem::new(
            dm(2, &[0.0, 1.0, -2.0, -0.3]),
            dm(2, &[0.0, 1.0]),
            dm(1, &[-0.5, -0.2]),
            dm(1, &[0.1]),
        )
        .unwrap();
        let t = 0.25;
        let sys = lti.to_ctdt(2, t).unwrap();
        let traj = simulate_ctdt(&sys, &v(&[1.0, -0.5]), &v(&[0.3]), 5.0, &SimOptions::default()).unwrap();
        let (ad, bd) = zoh_discretize(&lti.a, &lti.b, t).unwrap();
        let (mut x, mut z) = (v(&[1.0, -0.5]), v(&[0.3]));
        for &i in &traj.sample_indices[1..] {
            x = &ad * &x + &bd * &z;
            for _ in 0..2 {
                z = &lti.c * &x + &lti.d * &z;
            }
            assert!((&traj.x[i] - &x).amax() < 1e-10);
            assert!((&traj.z[i] - &z).amax() < 1e-10);
        }
    }

    #[test]
    fn divergence_truncates() {
        let sys = LtiSystem::scalar(5.0, 0.0, 0.0, 0.0).to_ctdt(1, 1.0).unwrap();
        let traj = simulate_ctdt(&sys, &v(&[1.0]), &v(&[0.0]), 100.0, &SimOptions::default()).unwrap();
        assert!(traj.diverged);
        assert!(*traj.times.last().unwrap() < 10.0);
    }

    #[test]
    fn decay_rate_of_exponential() {
        let sys = LtiSystem::scalar(-1.0, 0.0, 0.0, 0.0).to_ctdt(1, 0.1).unwrap();
        let traj = simulate_ctdt(&sys, &v(&[1.0]), &v(&[0.0]), 5.0, &SimOptions::default()).unwrap();
        let rate = empirical_decay_rate(&traj, &CompositeNorm::euclidean(1, 1)).unwrap();
        assert_relative_eq!(rate, -1.0, epsilon = 1e-6);
        let short = simulate_ctdt(&sys, &v(&[1.0]), &v(&[0.0]), 0.5, &SimOptions::default()).unwrap();
        assert!(empirical_decay_rate(&short, &CompositeNorm::euclidean(1, 1)).is_err());
    }

    #[test]
    fn initial_conditions_are_unit_and_positive() {
        let a = unit_uniform_initial_conditions(20, 7, 3);
        assert_eq!(a, unit_uniform_initial_conditions(20, 7, 3));
        for x in &a {
            assert_relative_eq!(x.norm(), 1.0, epsilon = 1e-14);
            assert!(x.iter().all(|v| *v > 0.0));
        }
    }

    #[test]
    fn boundary_grid_counts() {
        let b = BoxSet::symmetric(&[10.0, 3.0]).unwrap();
        let g = b.boundary_grid(21);
        assert_eq!(g.len(), 80);
        assert!(g.iter().all(|p| b.contains(p) && b.scaled_extent(p) >= 1.0 - 1e-15));
        let b3 = BoxSet::symmetric(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(b3.boundary_grid(3).len(), 26);
    }

    #[test]
    fn estimates_vanish_for_trivial_system() {
        let sys = CtDtSystem::new(Arc::new(|x, _| x * 0.0), Arc::new(|_, z| z * 0.0), 2, 1, 1, 1.0).unwrap();
        let e = estimate_constants(
            &sys,
            &BoxSet::symmetric(&[1.0, 1.0]).unwrap(),
            &BoxSet::symmetric(&[1.0]).unwrap(),
            &EstimateOptions { samples: 100, ..Default::default() },
        )
        .unwrap();
        let c = e.constants;
        assert_eq!((c.lip_x_f, c.lip_z_f, c.oslip_x_f, c.lip_x_g, c.lip_z_g), (0.0, 0.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn identical_trajectories_satisfy_any_bound() {
        let sys = LtiSystem::scalar(-1.0, 1.0, 0.5, 0.2).to_ctdt(1, 0.5).unwrap();
        let traj = simulate_ctdt(&sys, &v(&[1.0]), &v(&[0.0]), 5.0, &SimOptions::default()).unwrap();
        let cmp = CompositeNorm::euclidean(1, 1);
        assert!(check_dtc_bound(&traj, &traj, &Matrix2::zeros(), &cmp).unwrap());
    }

    #[test]
    fn unstable_scalar_loop_leaves_tight_box() {
        let sys = LtiSystem::scalar(1.0, 1.0, -3.0, 0.0).to_ctdt(1, 1.2).unwrap();
        let prob = InvarianceProblem {
            x0: BoxSet::symmetric(&[0.1]).unwrap(),
            z0: vec![v(&[0.0])],
            x: BoxSet::symmetric(&[1.0]).unwrap(),
            z: None,
            per_edge: 2,
            t_end: 20.0,
        };
        let report = check_forward_invariance(&sys, &prob, &SimOptions::default()).unwrap();
        assert!(!report.invariant);
        assert!(report.first_exit.unwrap().time > 0.0);
    }

    #[test]
    fn contractive_lti_stays_in_box() {
        let lti = LtiSystem::new(dm(2, &[-1.0, 0.2, 0.0, -1.5]), dm(2, &[0.1, 0.0]), dm(1, &[0.2, 0.1]), dm(1, &[0.3])).unwrap();
        let sys = lti.to_ctdt(1, 0.1).unwrap();
        let x = BoxSet::symmetric(&[1.0, 1.0]).unwrap();
        let prob = InvarianceProblem {
            x0: BoxSet::symmetric(&[0.1, 0.1]).unwrap(),
            z0: vec![v(&[0.0])],
            x,
            z: None,
            per_edge: 5,
            t_end: 10.0,
        };
        let report = check_forward_invariance(&sys, &prob, &SimOptions::default()).unwrap();
        assert!(report.invariant);
        assert_eq!(report.runs, 16);
    }
}
