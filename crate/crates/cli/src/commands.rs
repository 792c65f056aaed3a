use bowstate::analytic::profile_grid;
use bowstate::atom_dielectric::{
    classify_regime, coherence_map, default_phi, hydrogen_polarizability, lamb_shift_dielectric,
    lamb_shift_usual, vdw_energy, Precision,
};
use bowstate::diagnostics::{action_curve, bow_energy_sweep, energy_profile, SweepOutcome};
use bowstate::kernel::{reconstruct_field, solve_flat};
use bowstate::{Error, TrajectorySolution};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{Cell, Emitter, Table};

pub struct Output {
    pub name: &'static str,
    pub table: Table,
    pub results: Value,
}

fn trajectory(cfg: &RunConfig, via_solver: bool) -> Result<TrajectorySolution, CliError> {
    cfg.model.validate()?;
    let grid = cfg.grid.build()?;
    Ok(if via_solver {
        solve_flat(&cfg.model, &grid, &cfg.solver)?
    } else {
        TrajectorySolution::analytic(&cfg.model, &grid, &cfg.quadrature, cfg.solver.exec)?
    })
}

fn path_label(via_solver: bool) -> &'static str {
    if via_solver {
        "solver"
    } else {
        "analytic"
    }
}

pub fn string_profile(cfg: &RunConfig, via_solver: bool) -> Result<Output, CliError> {
    let p = &cfg.profile;
    if p.points < 2 || !(p.y_max > 0.0) {
        return Err(CliError::Config(
            "profile needs y_max > 0 and at least 2 points".into(),
        ));
    }
    let ys: Vec<f64> = (0..p.points)
        .map(|k| -p.y_max + 2.0 * p.y_max * k as f64 / (p.points - 1) as f64)
        .collect();
    let mut table = Table::new(&["gamma_tau", "y_gamma_over_s", "u_over_xi"]);
    if via_solver {
        let traj = trajectory(cfg, true)?;
        let field = reconstruct_field(&traj, &ys, &p.taus, cfg.solver.exec)?;
        for (it, &t) in p.taus.iter().enumerate() {
            for (iy, &y) in ys.iter().enumerate() {
                table.push(vec![t.into(), y.into(), field.u_at(iy, it).into()]);
            }
        }
    } else {
        cfg.model.validate()?;
        for s in profile_grid(&ys, &p.taus, &cfg.quadrature, cfg.solver.exec)? {
            table.push(vec![s.tau.into(), s.y.into(), s.u.into()]);
        }
    }
    Ok(Output {
        name: "string_profile",
        table,
        results: json!({ "path": path_label(via_solver), "taus": p.taus }),
    })
}

pub fn energies(cfg: &RunConfig, via_solver: bool) -> Result<Output, CliError> {
    let e = &cfg.energies;
    if !(e.t_min > 0.0 && e.t_max > e.t_min) || e.samples < 2 {
        return Err(CliError::Config(
            "energies need 0 < t_min < t_max and at least 2 samples".into(),
        ));
    }
    let traj = trajectory(cfg, via_solver)?;
    let mut taus = vec![0.0];
    let ratio = e.t_max / e.t_min;
    taus.extend((0..e.samples).map(|k| e.t_min * ratio.powf(k as f64 / (e.samples - 1) as f64)));
    let parts = energy_profile(&traj, &taus, &e.heights, cfg.solver.exec)?;
    let mut table = Table::new(&[
        "gamma_tau",
        "x_over_xi",
        "E_particle_over_V",
        "E_string_over_V",
        "E_total_over_V",
        "E_elastic_over_V",
        "E_kinetic_over_V",
    ]);
    let mut crossing = None;
    let mut prev: Option<(f64, f64)> = None;
    for b in &parts {
        let x = traj.position_at(b.tau);
        let diff = b.particle - b.string();
        if let (None, Some((x0, d0))) = (crossing, prev) {
            if d0 < 0.0 && diff >= 0.0 {
                crossing = Some(x0 + (x - x0) * d0 / (d0 - diff));
            }
        }
        prev = Some((x, diff));
        table.push(vec![
            b.tau.into(),
            x.into(),
            b.particle.into(),
            b.string().into(),
            b.total.into(),
            b.string_elastic.into(),
            b.string_kinetic.into(),
        ]);
    }
    let drift = parts
        .iter()
        .map(|b| (b.total - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(Output {
        name: "energies",
        table,
        results: json!({
            "path": path_label(via_solver),
            "equal_share_x_over_xi": crossing,
            "max_total_drift": drift,
        }),
    })
}

pub fn action(cfg: &RunConfig, via_solver: bool) -> Result<Output, CliError> {
    let traj = trajectory(cfg, via_solver)?;
    let curve = action_curve(&traj, &cfg.action, cfg.solver.exec)?;
    let mut table = Table::new(&[
        "x_over_xi",
        "gamma_tau",
        "A",
        "A_wkb",
        "ratio",
        "local_ratio",
    ]);
    for s in &curve.samples {
        table.push(vec![
            s.x.into(),
            s.tau.into(),
            s.action.into(),
            s.wkb.into(),
            s.ratio.into(),
            s.local_ratio.into(),
        ]);
    }
    let probe = |x: f64| {
        curve
            .at_x(x)
            .map(|s| json!({ "ratio": s.ratio, "local_ratio": s.local_ratio }))
    };
    Ok(Output {
        name: "action",
        table,
        results: json!({
            "path": path_label(via_solver),
            "hbar_gamma_over_V": curve.hbar_gamma_over_v,
            "at_x_0.1": probe(0.1),
            "at_x_8": probe(8.0),
        }),
    })
}

pub fn field_sweep(cfg: &RunConfig) -> Result<Output, CliError> {
    cfg.model.validate()?;
    let sc = cfg.model.scales()?;
    let grid = cfg.sweep.grid.build()?;
    let fields: Vec<f64> = cfg
        .sweep
        .reduced_fields
        .iter()
        .map(|f| f * sc.barrier / sc.xi)
        .collect();
    let res = bow_energy_sweep(&cfg.model, &fields, &grid, &cfg.solver)?;
    let mut table = Table::new(&[
        "field_xi_over_V",
        "E_bow_over_V",
        "gamma_tau0",
        "gamma_tau_exit",
        "beyond_quantum_limit",
        "bow_condition_violated",
        "status",
    ]);
    let mut failures = Vec::new();
    for e in &res.entries {
        let (energy, tau0, exit, status) = match &e.outcome {
            SweepOutcome::Solved { energy, tau0, exit } => (Some(*energy), *tau0, *exit, "ok"),
            SweepOutcome::Failed { error } => {
                failures.push(json!({ "field_xi_over_V": e.reduced_field, "error": error }));
                (None, None, None, "failed")
            }
        };
        table.push(vec![
            e.reduced_field.into(),
            energy.into(),
            tau0.into(),
            exit.into(),
            e.beyond_quantum_limit.into(),
            e.bow_condition_violated.into(),
            Cell::from(status),
        ]);
    }
    Ok(Output {
        name: "field_sweep",
        table,
        results: json!({
            "half_energy_field_xi_over_V": res.crossover,
            "monotone": res.is_monotone(1e-9),
            "failures": failures,
        }),
    })
}

pub fn regimes(cfg: &RunConfig) -> Result<Output, CliError> {
    let r = &cfg.regimes;
    let map = coherence_map(
        &cfg.atom,
        r.log10_lo,
        r.log10_hi,
        r.per_decade,
        cfg.solver.exec,
    )?;
    let mut table = Table::new(&["log10_R_over_aB", "log10_xi_over_aB", "regime"]);
    for p in &map {
        table.push(vec![
            p.log10_r.into(),
            p.log10_xi.into(),
            p.regime.label().into(),
        ]);
    }
    let a = &cfg.atom;
    Ok(Output {
        name: "regimes",
        table,
        results: json!({
            "R_small_intermediate_over_aB": a.phonon_ratio(),
            "R_intermediate_large_over_aB": a.relaxation_ratio(),
            "small_R_plateau_xi_over_aB": a.phonon_ratio().powi(2),
        }),
    })
}

pub fn vdw(cfg: &RunConfig) -> Result<Output, CliError> {
    let base = &cfg.atom;
    let alpha = hydrogen_polarizability(base.a_b);
    let phi = |e: f64| cfg.vdw.phi.unwrap_or_else(|| default_phi(e));
    let mut table = Table::new(&["R_over_aB", "U_over_V", "retarded_regime"]);
    let mut coefficient = None;
    for &r in &cfg.vdw.distances {
        let u = vdw_energy(&base.with_distance(r * base.a_b), alpha, phi)?;
        coefficient = Some(u.coefficient);
        table.push(vec![
            r.into(),
            (u.energy.value / base.rydberg).into(),
            u.retarded_regime.into(),
        ]);
    }
    let coefficient = match coefficient {
        Some(c) => c,
        None => vdw_energy(base, alpha, phi)?.coefficient,
    };
    Ok(Output {
        name: "vdw",
        table,
        results: json!({
            "eps0": base.dielectric.eps0,
            "phi": phi(base.dielectric.eps0),
            "coefficient": coefficient,
        }),
    })
}

fn precision_label(p: Precision) -> &'static str {
    match p {
        Precision::Exact => "exact",
        Precision::Estimate => "estimate",
    }
}

pub fn lamb(cfg: &RunConfig) -> Result<Output, CliError> {
    let base = &cfg.atom;
    let mut table = Table::new(&[
        "R_over_aB",
        "regime",
        "hbar_gamma_eff_over_V",
        "dE_dielectric_over_V",
        "precision",
    ]);
    for &r in &cfg.lamb.distances {
        let scn = base.with_distance(r * base.a_b);
        let rep = classify_regime(&scn)?;
        let gamma = rep.effective_damping.value;
        let shift = lamb_shift_dielectric(&scn, gamma)?;
        table.push(vec![
            r.into(),
            rep.regime.label().into(),
            (base.hbar * gamma / base.rydberg).into(),
            (shift.value / base.rydberg).into(),
            precision_label(shift.precision).into(),
        ]);
    }
    let usual = lamb_shift_usual(1.0 / base.fine_structure_inverse, 1.0).map_err(|e| match e {
        Error::OutOfRange(_) => CliError::Config("fine_structure_inverse must exceed 1".into()),
        other => other.into(),
    })?;
    Ok(Output {
        name: "lamb",
        table,
        results: json!({
            "vacuum_shift_over_V": usual.value,
            "vacuum_shift_precision": precision_label(usual.precision),
        }),
    })
}

/// Write `out` through `emitter`, returning the data path.
pub fn emit(emitter: &Emitter, command: &str, out: Output) -> Result<std::path::PathBuf, CliError> {
    emitter.write(command, out.name, &out.table, out.results)
}
