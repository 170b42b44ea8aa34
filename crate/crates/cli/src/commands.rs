use std::sync::Arc;

use ctdt_core::certify::{self, GainConstants, LtiWeights};
use ctdt_core::mpc::{self, ContourGrid, GradientMap, SoftConstraints};
use ctdt_core::norms;
use ctdt_core::simulate::{self, Recording};
use ctdt_core::{BoxSet, CompositeNorm, CtDtSystem, LtiSystem, MpcProblem, SimOptions, Trajectory};
use nalgebra::{DMatrix, DVector};
use serde_json::{json, Value};

use crate::config::{self, ExperimentConfig, InitialSpec, Kind, MpcSpec, RecordingSpec, StateWeight, SystemSpec};
use crate::error::CliError;
use crate::output::{fmt_f64, fmt_opt, Csv, OutputDir};

/// State shared by every command: the resolved config and seed, the output
/// directory and the manifest summary rows.
pub struct Context {
    pub cfg: ExperimentConfig,
    pub seed: Option<u64>,
    pub out: OutputDir,
    pub summary: Vec<Value>,
}

pub fn dispatch(kind: Kind, ctx: &mut Context) -> Result<(), CliError> {
    match kind {
        Kind::Certify => certify_cmd(ctx),
        Kind::Simulate | Kind::MpcClosedform | Kind::MpcSuboptimal => simulate_cmd(kind, ctx),
        Kind::Contour => contour_cmd(ctx),
        Kind::Example1 => example1_cmd(ctx),
        Kind::Sweep => sweep_cmd(ctx),
    }
}

fn lti_from_spec(spec: &SystemSpec) -> Result<Option<LtiSystem>, CliError> {
    Ok(match spec {
        SystemSpec::Lti { a, b, c, d } => Some(LtiSystem::new(
            config::matrix(a, "system.a")?,
            config::matrix(b, "system.b")?,
            config::matrix(c, "system.c")?,
            config::matrix(d, "system.d")?,
        )?),
        SystemSpec::Scalar { a, b, c, d } => Some(LtiSystem::scalar(*a, *b, *c, *d)),
        _ => None,
    })
}

fn mpc_problem(spec: &MpcSpec, gamma: f64) -> Result<MpcProblem, CliError> {
    let p = spec.p.as_ref().map(|p| config::matrix(p, "system.p")).transpose()?;
    let prob = MpcProblem::new(
        config::matrix(&spec.a, "system.a")?,
        config::matrix(&spec.b, "system.b")?,
        spec.dt,
        spec.horizon,
        config::matrix(&spec.q, "system.q")?,
        config::matrix(&spec.r, "system.r")?,
        p,
    )?;
    if gamma == 0.0 {
        return Ok(prob);
    }
    let (lb, ub) = match (&spec.lb, &spec.ub) {
        (Some(lb), Some(ub)) => (
            config::vector(lb, prob.nx(), "system.lb")?,
            config::vector(ub, prob.nx(), "system.ub")?,
        ),
        _ => return Err(CliError::Config("system.lb/system.ub: required when gamma > 0".into())),
    };
    Ok(prob.with_soft_constraints(SoftConstraints::new(gamma, lb, ub)?)?)
}

fn mpc_spec(cfg: &ExperimentConfig) -> Result<&MpcSpec, CliError> {
    match cfg.system()? {
        SystemSpec::Mpc(m) => Ok(m),
        _ => Err(CliError::Config("system.type: this command needs an \"mpc\" system".into())),
    }
}

fn gradient_system(spec: &MpcSpec, prob: &MpcProblem, n: u32, period: f64) -> Result<CtDtSystem, CliError> {
    let cost = Arc::new(mpc::condense(prob)?);
    let map = match spec.step {
        Some(step) => GradientMap::new(cost, step)?,
        None => GradientMap::with_default_step(cost),
    };
    Ok(map.to_ctdt(prob, n, period)?)
}

/// Plant `ẋ = Ax + BΠ₁z` with `z` reset to the exact minimiser at each sample.
fn closed_form_system(prob: &MpcProblem, n: u32, period: f64) -> Result<CtDtSystem, CliError> {
    let cost = Arc::new(mpc::condense(prob)?);
    let bp = &prob.b * prob.first_input_selector();
    let a = prob.a.clone();
    let nz = prob.nz();
    let g: ctdt_core::systems::VectorField = if prob.soft.is_none() {
        let k = mpc::unconstrained_gain(prob)?.k;
        Arc::new(move |x, _z| -(&k * x))
    } else {
        // A failed solve poisons the state so the run stops as diverged.
        Arc::new(move |x, _z| {
            cost.minimiser(x, 1e-12, 10_000)
                .map(|r| r.z_star)
                .unwrap_or_else(|_| DVector::from_element(nz, f64::NAN))
        })
    };
    Ok(CtDtSystem::new(Arc::new(move |x, z| &a * x + &bp * z), g, prob.nx(), nz, n, period)?)
}

fn sim_options(cfg: &ExperimentConfig) -> SimOptions {
    SimOptions {
        substeps: cfg.run.substeps,
        update_at_zero: cfg.run.update_at_zero,
        recording: match cfg.run.recording {
            RecordingSpec::Full => Recording::Full,
            RecordingSpec::Samples => Recording::Samples,
        },
    }
}

type Initial = Vec<(DVector<f64>, DVector<f64>)>;

fn initial_conditions(ctx: &Context, nx: usize, nz: usize) -> Result<Initial, CliError> {
    let run = &ctx.cfg.run;
    let z0 = match &run.z0 {
        Some(z) => config::vector(z, nz, "run.z0")?,
        None => DVector::zeros(nz),
    };
    let spec = run.initial.as_ref().ok_or_else(|| CliError::Config("run.initial: missing table".into()))?;
    let split = |y: DVector<f64>| (y.rows(0, nx).into_owned(), y.rows(nx, nz).into_owned());
    match spec {
        InitialSpec::List { points } => points
            .iter()
            .enumerate()
            .map(|(i, p)| {
                if p.len() == nx {
                    Ok((DVector::from_column_slice(p), z0.clone()))
                } else if p.len() == nx + nz {
                    Ok(split(DVector::from_column_slice(p)))
                } else {
                    Err(CliError::Config(format!(
                        "run.initial.points[{i}]: expected {nx} or {} entries, got {}",
                        nx + nz,
                        p.len()
                    )))
                }
            })
            .collect(),
        InitialSpec::Random { count } => {
            let seed = ctx
                .seed
                .ok_or_else(|| CliError::Config("seed: required for random initial conditions".into()))?;
            Ok(simulate::unit_uniform_initial_conditions(*count, nx + nz, seed)
                .into_iter()
                .map(split)
                .collect())
        }
        InitialSpec::BoundaryGrid { lo, hi, per_edge } => {
            let bx = BoxSet::new(
                config::vector(lo, nx, "run.initial.lo")?,
                config::vector(hi, nx, "run.initial.hi")?,
            )?;
            Ok(bx.boundary_grid(*per_edge).into_iter().map(|x| (x, z0.clone())).collect())
        }
    }
}

fn state_box(ctx: &Context, nx: usize) -> Result<Option<BoxSet>, CliError> {
    ctx.cfg
        .run
        .state_box
        .as_ref()
        .map(|b| {
            Ok(BoxSet::new(
                config::vector(&b.lo, nx, "run.state_box.lo")?,
                config::vector(&b.hi, nx, "run.state_box.hi")?,
            )?)
        })
        .transpose()
}

struct RunResult {
    traj: Trajectory,
    decay_rate: f64,
}

fn run_batch(
    sys: &CtDtSystem,
    inits: &[(DVector<f64>, DVector<f64>)],
    t_end: f64,
    opts: &SimOptions,
) -> Result<Vec<RunResult>, CliError> {
    let cmp = CompositeNorm::euclidean(sys.nx(), sys.nz());
    simulate::simulate_batch(sys, inits, t_end, opts)
        .into_iter()
        .map(|r| {
            let traj = r?;
            // Short or zero-norm runs have no fitted rate.
            let decay_rate = simulate::empirical_decay_rate(&traj, &cmp).unwrap_or(f64::NAN);
            Ok(RunResult { traj, decay_rate })
        })
        .collect()
}

fn seed_cell(seed: Option<u64>) -> String {
    seed.map_or_else(|| "nan".into(), |s| s.to_string())
}

fn trajectory_csv(traj: &Trajectory) -> Csv {
    let nx = traj.x.first().map_or(0, |v| v.len());
    let nz = traj.z.first().map_or(0, |v| v.len());
    let mut header = vec!["t".to_string()];
    header.extend((1..=nx).map(|i| format!("x{i}")));
    header.extend((1..=nz).map(|i| format!("z{i}")));
    header.push("is_sample".into());
    let mut csv = Csv::new(&header);
    for ((t, x), (z, s)) in traj.times.iter().zip(&traj.x).zip(traj.z.iter().zip(traj.is_sample())) {
        let mut row = vec![fmt_f64(*t)];
        row.extend(x.iter().map(|v| fmt_f64(*v)));
        row.extend(z.iter().map(|v| fmt_f64(*v)));
        row.push(u8::from(s).to_string());
        csv.row(&row);
    }
    csv
}

/// Mean ± one standard deviation and the min/max envelope of `‖(x, z)‖₂`
/// across runs at each sampling instant. Diverged runs drop out once they
/// stop.
fn bands_csv(runs: &[RunResult]) -> Csv {
    let mut csv = Csv::new(&["t", "runs", "mean", "mean_minus_std", "mean_plus_std", "min", "max"]);
    let len = runs.iter().map(|r| r.traj.sample_indices.len()).max().unwrap_or(0);
    for j in 0..len {
        let mut t = f64::NAN;
        let vals: Vec<f64> = runs
            .iter()
            .filter_map(|r| {
                let i = *r.traj.sample_indices.get(j)?;
                t = r.traj.times[i];
                Some((r.traj.x[i].norm_squared() + r.traj.z[i].norm_squared()).sqrt())
            })
            .collect();
        let n = vals.len() as f64;
        let mean = vals.iter().sum::<f64>() / n;
        let std = (vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
        let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        csv.row(&[
            fmt_f64(t),
            vals.len().to_string(),
            fmt_f64(mean),
            fmt_f64(mean - std),
            fmt_f64(mean + std),
            fmt_f64(min),
            fmt_f64(max),
        ]);
    }
    csv
}

fn first_exit(traj: &Trajectory, bx: &BoxSet) -> Option<f64> {
    if traj.diverged {
        // A diverged run has left every bounded set by its last stored instant.
        let i = traj.x.iter().position(|x| !bx.contains(x)).unwrap_or(traj.times.len() - 1);
        return Some(traj.times[i]);
    }
    traj.x.iter().position(|x| !bx.contains(x)).map(|i| traj.times[i])
}

fn simulate_cmd(kind: Kind, ctx: &mut Context) -> Result<(), CliError> {
    let period = ctx.cfg.period()?;
    let n = ctx.cfg.run.n;
    let sys = match kind {
        Kind::Simulate => {
            let spec = ctx.cfg.system()?;
            lti_from_spec(spec)?
                .ok_or_else(|| CliError::Config("system.type: simulate needs an \"lti\" or \"scalar\" system".into()))?
                .to_ctdt(n, period)?
        }
        Kind::MpcClosedform => {
            let spec = mpc_spec(&ctx.cfg)?;
            closed_form_system(&mpc_problem(spec, spec.gamma)?, n, period)?
        }
        _ => {
            let spec = mpc_spec(&ctx.cfg)?;
            gradient_system(spec, &mpc_problem(spec, spec.gamma)?, n, period)?
        }
    };
    let inits = initial_conditions(ctx, sys.nx(), sys.nz())?;
    let bx = state_box(ctx, sys.nx())?;
    let runs = run_batch(&sys, &inits, ctx.cfg.run.t_end, &sim_options(&ctx.cfg))?;

    if ctx.cfg.output.trajectories {
        for (i, r) in runs.iter().enumerate() {
            ctx.out.write_csv(&format!("trajectories/run_{i:04}.csv"), &trajectory_csv(&r.traj))?;
        }
    }
    let mut summary = Csv::new(&["run", "seed", "decay_rate", "diverged"]);
    for (i, r) in runs.iter().enumerate() {
        summary.row(&[i.to_string(), seed_cell(ctx.seed), fmt_f64(r.decay_rate), r.traj.diverged.to_string()]);
    }
    ctx.out.write_csv("summary.csv", &summary)?;
    ctx.out.write_csv("bands.csv", &bands_csv(&runs))?;

    let exits: Vec<Option<f64>> = match &bx {
        Some(bx) => runs.iter().map(|r| first_exit(&r.traj, bx)).collect(),
        None => vec![None; runs.len()],
    };
    if bx.is_some() {
        let mut inv = Csv::new(&["run", "exited", "exit_time"]);
        for (i, e) in exits.iter().enumerate() {
            inv.row(&[i.to_string(), e.is_some().to_string(), fmt_opt(*e)]);
        }
        ctx.out.write_csv("invariance.csv", &inv)?;
    }

    for (i, r) in runs.iter().enumerate() {
        let mut row = json!({ "run": i, "decay_rate": r.decay_rate, "diverged": r.traj.diverged });
        if bx.is_some() {
            row["exit_time"] = json!(exits[i]);
        }
        ctx.summary.push(row);
    }
    let diverged = runs.iter().filter(|r| r.traj.diverged).count();
    let decaying = runs.iter().filter(|r| r.decay_rate < 0.0).count();
    let worst = runs.iter().map(|r| r.decay_rate).fold(f64::NEG_INFINITY, f64::max);
    println!(
        "{}: {} runs, n = {n}, T = {period}: {decaying} with negative decay rate, {diverged} diverged, largest rate {worst:.6}",
        kind.name(),
        runs.len()
    );
    if bx.is_some() {
        println!("forward invariance: {} of {} runs left the state box", exits.iter().flatten().count(), runs.len());
    }
    Ok(())
}

struct CertifyInput {
    gains: GainConstants,
    lti: Option<LtiSystem>,
}

fn certify_input(cfg: &ExperimentConfig) -> Result<CertifyInput, CliError> {
    let spec = cfg.system()?;
    let weight = cfg.certify.state_weight;
    let (lti, p) = match spec {
        SystemSpec::Gains { lip_x_f, lip_z_f, oslip_x_f, lip_x_g, lip_z_g, rm_rate } => {
            let gains = GainConstants {
                lip_x_f: *lip_x_f,
                lip_z_f: *lip_z_f,
                oslip_x_f: *oslip_x_f,
                lip_x_g: *lip_x_g,
                lip_z_g: *lip_z_g,
                rm_rate: *rm_rate,
            };
            gains.validate()?;
            return Ok(CertifyInput { gains, lti: None });
        }
        SystemSpec::Mpc(m) => {
            if m.gamma != 0.0 {
                return Err(CliError::Config("system.gamma: certify needs the unconstrained problem (gamma = 0)".into()));
            }
            let prob = mpc_problem(m, 0.0)?;
            let k = mpc::unconstrained_gain(&prob)?.k_first;
            let nu = prob.nu();
            let lti = LtiSystem::new(prob.a.clone(), prob.b.clone(), -k, DMatrix::zeros(nu, nu))?;
            (lti, (weight == StateWeight::Terminal).then(|| prob.p.clone()))
        }
        other => {
            if weight == StateWeight::Terminal {
                return Err(CliError::Config("certify.state_weight: \"terminal\" needs an mpc system".into()));
            }
            (lti_from_spec(other)?.expect("lti or scalar"), None)
        }
    };
    let gains = certify::lti_constants(&lti, &LtiWeights { p_x: p })?;
    Ok(CertifyInput { gains, lti: Some(lti) })
}

fn certify_cmd(ctx: &mut Context) -> Result<(), CliError> {
    let CertifyInput { gains: g, lti } = certify_input(&ctx.cfg)?;
    let small_gain = certify::small_gain_holds(&g)?;
    let contractive_g = g.lip_z_g < 1.0;
    let tinf = if contractive_g && g.rm_rate.is_some() { certify::sampling_bound_tinf(&g)? } else { f64::NAN };
    let upper = if contractive_g && g.rm_rate.is_some() && g.oslip_x_f >= 0.0 {
        certify::sampling_bound_upper(&g)?
    } else {
        f64::NAN
    };

    let mut constants = Csv::new(&["name", "value"]);
    let named = [
        ("lip_x_f", g.lip_x_f),
        ("lip_z_f", g.lip_z_f),
        ("oslip_x_f", g.oslip_x_f),
        ("lip_x_g", g.lip_x_g),
        ("lip_z_g", g.lip_z_g),
        ("rm_rate", g.rm_rate.unwrap_or(f64::NAN)),
        ("t_inf", tinf),
        ("t_upper", upper),
    ];
    println!("gain constants:");
    for (name, v) in named {
        constants.row(&[name.into(), fmt_f64(v)]);
        println!("  {name} = {v}");
    }
    constants.row(&["small_gain".into(), u8::from(small_gain).to_string()]);
    ctx.out.write_csv("constants.csv", &constants)?;
    println!("small-gain condition: {small_gain}");

    let mut tn_csv = Csv::new(&["n", "t_n"]);
    if contractive_g && g.rm_rate.is_some() {
        println!("sampling bounds:");
        for &n in &ctx.cfg.certify.n_list {
            let tn = certify::sampling_bound_tn(&g, n)?;
            tn_csv.row(&[n.to_string(), fmt_f64(tn)]);
            println!("  T({n}) = {tn}");
            ctx.summary.push(json!({ "n": n, "t_n": tn }));
        }
        println!("  T(inf) = {tinf}");
        if upper.is_finite() {
            println!("  upper bound = {upper}");
        }
    } else {
        println!("sampling bounds: not available (needs Lip_z(G) < 1 and a contracting reduced model)");
    }
    ctx.out.write_csv("tn.csv", &tn_csv)?;

    let mut sweep = Csv::new(&[
        "n",
        "period",
        "rho_smallgain",
        "rate_smallgain",
        "prefactor_smallgain",
        "rho_rm",
        "rate_rm",
        "prefactor_rm",
        "rho_lti",
        "certified",
    ]);
    for &n in &ctx.cfg.certify.n_list {
        for &t in &ctx.cfg.certify.periods {
            if !(t.is_finite() && t > 0.0) {
                return Err(CliError::Config(format!("certify.periods: must be positive, got {t}")));
            }
            let sg = if small_gain { Some(certify::transient_constants_smallgain(&g, n, t)?) } else { None };
            let rho_rm = if contractive_g && g.rm_rate.is_some() {
                norms::spectral_radius_2x2(&certify::gain_matrix_rm(&g, n, t)?)
            } else {
                f64::NAN
            };
            let rm = if rho_rm < 1.0 && t < certify::sampling_bound_tn(&g, n)? {
                Some(certify::transient_constants_rm(&g, n, t)?)
            } else {
                None
            };
            let rho_lti = match &lti {
                Some(sys) => norms::spectral_radius(&certify::lti_dtc_matrix(sys, n, t)?.0)?,
                None => f64::NAN,
            };
            let certified = sg.as_ref().is_some_and(|c| c.is_stable) || rho_rm < 1.0 || rho_lti < 1.0;
            sweep.row(&[
                n.to_string(),
                fmt_f64(t),
                fmt_opt(sg.as_ref().map(|c| c.spectral_radius)),
                fmt_opt(sg.as_ref().map(|c| c.decay_rate)),
                fmt_opt(sg.as_ref().and_then(|c| c.transient_prefactor)),
                fmt_f64(rho_rm),
                fmt_opt(rm.as_ref().map(|c| c.decay_rate)),
                fmt_opt(rm.as_ref().and_then(|c| c.transient_prefactor)),
                fmt_f64(rho_lti),
                certified.to_string(),
            ]);
            ctx.summary.push(json!({ "n": n, "period": t, "certified": certified, "rho_lti": rho_lti }));
        }
    }
    ctx.out.write_csv("rho_sweep.csv", &sweep)?;
    Ok(())
}

fn contour_cmd(ctx: &mut Context) -> Result<(), CliError> {
    let spec = mpc_spec(&ctx.cfg)?.clone();
    let c = ctx.cfg.contour.clone();
    let grid = ContourGrid { x1: (c.x1[0], c.x1[1]), x2: (c.x2[0], c.x2[1]), n1: c.n1, n2: c.n2 };
    for &gamma in &c.gammas {
        let prob = mpc_problem(&spec, gamma)?;
        let weight = match c.weight {
            StateWeight::Terminal => prob.p.clone(),
            StateWeight::Identity => DMatrix::identity(prob.nx(), prob.nx()),
        };
        let field = mpc::rm_lognorm_contour(&prob, &weight, &grid)?;
        let mut csv = Csv::new(&["x1", "x2", "mu"]);
        for (&(a, b), v) in field.points.iter().zip(&field.values) {
            csv.row(&[fmt_f64(a), fmt_f64(b), fmt_f64(*v)]);
        }
        ctx.out.write_csv(&format!("contour_gamma_{gamma}.csv"), &csv)?;
        let finite: Vec<f64> = field.values.iter().copied().filter(|v| v.is_finite()).collect();
        let negative = finite.iter().filter(|v| **v < 0.0).count();
        let missing = field.values.len() - finite.len();
        let min = finite.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = finite.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        println!(
            "gamma = {gamma}: {} cells, {negative} negative, {} non-negative, {missing} missing, range [{min:.5}, {max:.5}]",
            field.values.len(),
            finite.len() - negative
        );
        ctx.summary.push(json!({
            "gamma": gamma,
            "cells": field.values.len(),
            "negative": negative,
            "missing": missing,
            "min": min,
            "max": max,
        }));
    }
    Ok(())
}

fn example1_cmd(ctx: &mut Context) -> Result<(), CliError> {
    let (a, b, c, d) = match ctx.cfg.system.as_ref() {
        None => (1.0, 1.0, -3.0, 0.0),
        Some(SystemSpec::Scalar { a, b, c, d }) => (*a, *b, *c, *d),
        Some(_) => return Err(CliError::Config("system.type: example1 needs a \"scalar\" system".into())),
    };
    let lti = LtiSystem::scalar(a, b, c, d);
    let g = certify::lti_constants(&lti, &LtiWeights::default())?;
    let small_gain = certify::small_gain_holds(&g)?;
    let threshold = certify::scalar_instability_threshold(a, b, c, d)?;
    println!("scalar loop a = {a}, b = {b}, c = {c}, d = {d}");
    println!("small-gain condition: {small_gain} (osLip = {})", g.oslip_x_f);
    println!(
        "multiplier <= -2 for T >= {threshold} (multiplier there {})",
        certify::scalar_zoh_multiplier(a, b, c, d, threshold)
    );

    let intervals = ctx.cfg.example1.intervals.max(2);
    let mut csv = Csv::new(&["period", "multiplier", "simulated_ratio", "rho_l", "stable"]);
    for &t in &ctx.cfg.example1.periods {
        if !(t.is_finite() && t > 0.0) {
            return Err(CliError::Config(format!("example1.periods: must be positive, got {t}")));
        }
        let m = certify::scalar_zoh_multiplier(a, b, c, d, t);
        let sys = lti.to_ctdt(1, t)?;
        let opts = SimOptions { substeps: ctx.cfg.run.substeps, update_at_zero: true, recording: Recording::Samples };
        let traj = simulate::simulate_ctdt(&sys, &DVector::from_element(1, 1.0), &DVector::zeros(1), intervals as f64 * t, &opts)?;
        let s = &traj.sample_indices;
        let ratio = traj.x[s[s.len() - 1]][0] / traj.x[s[s.len() - 2]][0];
        let rho = norms::spectral_radius(&certify::lti_dtc_matrix(&lti, 1, t)?.0)?;
        let stable = m.abs() < 1.0;
        csv.row(&[fmt_f64(t), fmt_f64(m), fmt_f64(ratio), fmt_f64(rho), stable.to_string()]);
        println!("  T = {t:.6}: multiplier {m:.9}, simulated ratio {ratio:.9}, rho(L) {rho:.6}");
        ctx.summary.push(json!({ "period": t, "multiplier": m, "simulated_ratio": ratio, "rho_l": rho }));
    }
    ctx.summary.push(json!({ "threshold": threshold, "small_gain": small_gain }));
    ctx.out.write_csv("example1.csv", &csv)?;
    Ok(())
}

fn sweep_cmd(ctx: &mut Context) -> Result<(), CliError> {
    let spec = mpc_spec(&ctx.cfg)?.clone();
    let prob = mpc_problem(&spec, spec.gamma)?;
    let inits = initial_conditions(ctx, prob.nx(), prob.nz())?;
    let opts = sim_options(&ctx.cfg);
    let mut csv = Csv::new(&["period", "runs", "diverged", "max_decay_rate"]);
    let mut first = None;
    for &t in &ctx.cfg.sweep.periods {
        if !(t.is_finite() && t > 0.0) {
            return Err(CliError::Config(format!("sweep.periods: must be positive, got {t}")));
        }
        let sys = gradient_system(&spec, &prob, ctx.cfg.run.n, t)?;
        let runs = run_batch(&sys, &inits, ctx.cfg.run.t_end, &opts)?;
        let diverged = runs.iter().filter(|r| r.traj.diverged).count();
        let worst = runs.iter().map(|r| r.decay_rate).filter(|r| r.is_finite()).fold(f64::NEG_INFINITY, f64::max);
        csv.row(&[fmt_f64(t), runs.len().to_string(), diverged.to_string(), fmt_f64(worst)]);
        println!("  T = {t}: {diverged}/{} diverged, largest decay rate {worst:.6}", runs.len());
        ctx.summary.push(json!({ "period": t, "diverged": diverged, "max_decay_rate": worst }));
        if diverged > 0 && first.is_none() {
            first = Some(t);
            if ctx.cfg.sweep.stop_at_first {
                break;
            }
        }
    }
    ctx.out.write_csv("sweep.csv", &csv)?;
    match first {
        Some(t) => println!("first diverging period: T = {t}"),
        None => println!("no diverging period in the sweep"),
    }
    ctx.summary.push(json!({ "first_diverging_period": first }));
    Ok(())
}
