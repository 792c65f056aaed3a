//! Acceptance checks, one line per criterion.
//!
//! Every criterion is evaluated and reported; the process exits nonzero on a
//! failure only when `ACCEPTANCE_STRICT` is set, so that the remaining test
//! targets of a workspace run still execute.

use std::f64::consts::PI;
use std::time::Instant;

use bowstate::analytic::{eval_velocity, eval_x, reduced};
use bowstate::atom_dielectric::{
    classify_regime, coherence_length, coherence_map, default_phi, hydrogen_polarizability,
    lamb_shift_dielectric, repulsion_layer_bound, vdw_energy, AtomDielectricScenario, Regime,
};
use bowstate::diagnostics::{
    action_curve, bow_energy_sweep, energy_profile, particle_energy_asymptote,
    total_energy_double_integral, ActionOptions, EnergyGrid,
};
use bowstate::kernel::solve_flat;
use bowstate::{
    Execution, QuadratureSpec, SolverOptions, StringModel, TauGrid, TrajectorySolution,
};

type Check = Result<(bool, String), String>;

struct Report {
    failed: usize,
}

impl Report {
    fn run(&mut self, id: u32, title: &str, budget_s: f64, check: impl FnOnce() -> Check) {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        let (pass, detail) = match outcome {
            Ok((ok, detail)) => (ok, detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let timing = if secs > budget_s {
            format!("{secs:.2}s, over the {budget_s}s budget")
        } else {
            format!("{secs:.2}s")
        };
        if !pass {
            self.failed += 1;
        }
        println!(
            "{} {id:>2}. {title}: {detail} [{timing}]",
            if pass { "PASS" } else { "FAIL" }
        );
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// A model with non-unit scales, so that unit conversions are exercised.
fn physical_model() -> StringModel {
    StringModel::new(1.7, 2.3, 0.45, 3.1).unwrap()
}

fn flat(n: usize) -> Result<TrajectorySolution, String> {
    let grid = TauGrid::graded(n, 50.0, 2.0).map_err(err)?;
    solve_flat(&StringModel::unit(), &grid, &SolverOptions::default()).map_err(err)
}

fn analytic(n: usize) -> Result<TrajectorySolution, String> {
    let grid = TauGrid::graded(n, 50.0, 2.0).map_err(err)?;
    TrajectorySolution::analytic(
        &StringModel::unit(),
        &grid,
        &QuadratureSpec::default(),
        Execution::default(),
    )
    .map_err(err)
}

fn launch_speed() -> Check {
    let model = physical_model();
    let sc = model.scales().map_err(err)?;
    let tau = 1e-9 / sc.gamma;
    let v = eval_velocity(&model, tau, &QuadratureSpec::default()).map_err(err)?;
    let target = (2.0 * model.v / model.m).sqrt();
    let d = rel(v, target);
    Ok((
        d < 1e-3,
        format!("v(0+) = {v:.6}, sqrt(2V/m) = {target:.6}, rel dev {d:.2e} (tol 1e-3)"),
    ))
}

fn small_time_law() -> Check {
    let model = physical_model();
    let sc = model.scales().map_err(err)?;
    let tau = 1e-3 / sc.gamma;
    let x = eval_x(&model, tau, &QuadratureSpec::default()).map_err(err)?;
    let target = PI * 1e-3;
    let d = rel(x / sc.xi, target);
    Ok((
        d < 5e-3,
        format!(
            "x/xi = {:.6e} vs pi*gamma*tau = {target:.6e}, rel dev {d:.2e} (tol 5e-3)",
            x / sc.xi
        ),
    ))
}

fn large_time_law() -> Check {
    let model = physical_model();
    let sc = model.scales().map_err(err)?;
    let spec = QuadratureSpec::default();
    let a = eval_x(&model, 100.0 / sc.gamma, &spec).map_err(err)?;
    let b = eval_x(&model, 200.0 / sc.gamma, &spec).map_err(err)?;
    let diff = (b - a) / sc.xi;
    let target = 2.0 * 2f64.ln();
    let d = rel(diff, target);
    Ok((
        d < 0.02,
        format!(
            "[x(200) - x(100)]/xi = {diff:.6} vs 2 ln 2 = {target:.6}, rel dev {d:.2e} (tol 2e-2)"
        ),
    ))
}

fn total_energy() -> Check {
    let traj = analytic(2000)?;
    let laplace = total_energy_double_integral(&traj, Execution::default());
    let field = energy_profile(&traj, &[0.0], &EnergyGrid::default(), Execution::default())
        .map_err(err)?[0]
        .total;
    let d = (laplace - 1.0).abs();
    let gap = (field - laplace).abs();
    Ok((
        d < 5e-3 && gap < 1e-3,
        format!("double integral E/V = {laplace:.6} (tol 5e-3), field route {field:.6}, gap {gap:.2e} (tol 1e-3)"),
    ))
}

fn conservation() -> Check {
    let traj = flat(2000)?;
    let taus: Vec<f64> = (0..=40).map(|k| 0.25 * k as f64).collect();
    let e =
        energy_profile(&traj, &taus, &EnergyGrid::default(), Execution::default()).map_err(err)?;
    let (worst, at) = e
        .iter()
        .map(|b| ((b.total - 1.0).abs(), b.tau))
        .fold((0.0, 0.0), |m, p| if p.0 > m.0 { p } else { m });
    Ok((
        worst < 1e-3,
        format!("max |E - V|/V = {worst:.2e} at gamma*tau = {at} (tol 1e-3)"),
    ))
}

fn energy_asymptote() -> Check {
    let fit = particle_energy_asymptote(&analytic(2000)?, 3.0, 6.0, 61).map_err(err)?;
    let lead = (4.0 / (PI * PI)).ln();
    let ds = rel(fit.slope, -1.0);
    let di = rel(fit.intercept, lead);
    Ok((
        ds < 0.02 && di < 0.02,
        format!(
            "slope {:.4} (want -1, rel dev {ds:.3}), intercept {:.4} (want ln(4/pi^2) = {lead:.4}, rel dev {di:.3}); tol 2e-2",
            fit.slope, fit.intercept
        ),
    ))
}

fn action_halving() -> Check {
    let traj = flat(2000)?;
    let curve =
        action_curve(&traj, &ActionOptions::default(), Execution::default()).map_err(err)?;
    let near = curve.at_x(0.1).ok_or("x = 0.1 xi not reached")?;
    let far = curve.at_x(8.0).ok_or("x = 8 xi not reached")?;
    let dn = (near.ratio - 1.0).abs();
    let df = (far.ratio - 0.5).abs() / 0.5;
    Ok((
        dn < 0.05 && df < 0.05,
        format!(
            "A/A_wkb = {:.4} at 0.1 xi (want 1), {:.4} at 8 xi (want 0.5, local slope ratio {:.4}); tol 5%",
            near.ratio, far.ratio, far.local_ratio
        ),
    ))
}

fn max_deviation(sol: &TrajectorySolution, t_max: f64) -> Result<f64, String> {
    let spec = QuadratureSpec::default();
    let mut worst: f64 = 0.0;
    for (&t, &x) in sol.times().iter().zip(&sol.x).skip(1) {
        if t > t_max {
            break;
        }
        let exact = reduced::x(t, &spec).map_err(err)?;
        worst = worst.max((x - exact).abs() / exact);
    }
    Ok(worst)
}

fn solver_vs_oracle() -> Check {
    let coarse = max_deviation(&flat(2000)?, 10.0)?;
    let fine = max_deviation(&flat(4000)?, 10.0)?;
    let gain = coarse / fine;
    Ok((
        coarse < 1e-3 && gain >= 2.0,
        format!("max rel dev {coarse:.2e} at N = 2000 (tol 1e-3), {fine:.2e} at N = 4000, reduction {gain:.2}x (want >= 2)"),
    ))
}

fn field_sweep() -> Check {
    let model = StringModel::unit();
    let reduced_fields = [0.0, 0.03, 0.1, 0.3, 1.0, 3.0, 10.0, 30.0];
    let grid = TauGrid::graded(800, 50.0, 2.0).map_err(err)?;
    let res =
        bow_energy_sweep(&model, &reduced_fields, &grid, &SolverOptions::default()).map_err(err)?;
    let energy = |f: f64| -> Result<f64, String> {
        res.entries
            .iter()
            .find(|e| e.reduced_field == f)
            .and_then(|e| e.energy())
            .ok_or_else(|| format!("no energy at eE0 xi/V = {f}"))
    };
    let monotone = res.is_monotone(0.0);
    let low = energy(0.1)?;
    let mut ok = monotone && low >= 0.8;
    let mut detail = format!("monotone {monotone}; E(0.1) = {low:.4} (want >= 0.8)");
    for f in [3.0, 10.0, 30.0] {
        let ratio = energy(f)? * f;
        ok &= (0.5..=2.0).contains(&ratio);
        detail.push_str(&format!("; E*F at {f} = {ratio:.3}"));
    }
    detail.push_str(" (want each within [0.5, 2])");
    Ok((ok, detail))
}

fn regime_map() -> Check {
    let base = AtomDielectricScenario::preset(10.0);
    let xi_at = |r: f64| -> Result<f64, String> {
        let scn = base.with_distance(r * base.a_b);
        Ok(coherence_length(&scn).map_err(err)?.value / scn.a_b)
    };
    let plateau = xi_at(10.0)?;
    let lower = xi_at(1e3)?;
    let upper = xi_at(1e6)?;
    let map = coherence_map(&base, 0.5, 8.0, 20, Execution::default()).map_err(err)?;
    let slope = |a: f64, b: f64| -> Result<f64, String> {
        let find = |x: f64| {
            map.iter()
                .find(|p| (p.log10_r - x).abs() < 1e-9)
                .ok_or_else(|| format!("no map point at log10 R = {x}"))
        };
        let (p, q) = (find(a)?, find(b)?);
        Ok((q.log10_xi - p.log10_xi) / (b - a))
    };
    let slopes = [slope(0.5, 2.5)?, slope(3.5, 5.5)?, slope(6.5, 8.0)?];
    let edge_regimes = (
        classify_regime(&base.with_distance(1e3 * base.a_b))
            .map_err(err)?
            .regime,
        classify_regime(&base.with_distance(1e6 * base.a_b))
            .map_err(err)?
            .regime,
    );
    let ok = rel(plateau, 1e6) < 1e-9
        && rel(lower, 1e6) < 1e-9
        && rel(upper, 1e12) < 1e-9
        && (slopes[0] - 0.0).abs() < 1e-9
        && (slopes[1] - 2.0).abs() < 1e-9
        && (slopes[2] - 3.0).abs() < 1e-9
        && edge_regimes == (Regime::IntermediateRNonohmic, Regime::LargeROhmic);
    Ok((
        ok,
        format!(
            "plateau xi/a_B = {plateau:.4e}; edges {lower:.4e} at 1e3, {upper:.4e} at 1e6; slopes {:.3}, {:.3}, {:.3}",
            slopes[0], slopes[1], slopes[2]
        ),
    ))
}

fn van_der_waals() -> Check {
    let scn = AtomDielectricScenario::preset(1e3);
    let alpha = hydrogen_polarizability(scn.a_b);
    let near = vdw_energy(&scn, alpha, default_phi).map_err(err)?;
    let far = vdw_energy(&scn.with_distance(2.0 * scn.r), alpha, default_phi).map_err(err)?;
    let ratio = near.energy.value / far.energy.value;
    let three_sig = (near.coefficient - 37.3).abs() < 0.05;
    Ok((
        three_sig && ratio == 16.0,
        format!(
            "coefficient {:.4} (want 37.3), U(R)/U(2R) = {ratio}",
            near.coefficient
        ),
    ))
}

fn lamb_estimates() -> Check {
    let small = AtomDielectricScenario::preset(1e2);
    let gamma = classify_regime(&small)
        .map_err(err)?
        .effective_damping
        .value;
    let shift = lamb_shift_dielectric(&small, gamma).map_err(err)?.value / small.rydberg;
    let small_ok = shift > 1e-7 && shift < 1e-5;

    let large = AtomDielectricScenario::preset(1e7);
    let gamma = classify_regime(&large)
        .map_err(err)?
        .effective_damping
        .value;
    let got = lamb_shift_dielectric(&large, gamma).map_err(err)?.value;
    let formula = large.hbar * gamma / (2.0 * PI) * 137.036f64.ln();
    Ok((
        small_ok && got == formula,
        format!(
            "small-R shift {shift:.3e} V (want within 10x of 1e-6 V); large-R shift equals (hbar gamma/2pi) ln 137.036: {}",
            got == formula
        ),
    ))
}

fn repulsion_layer() -> Check {
    let scn = AtomDielectricScenario::preset(10.0);
    let b = repulsion_layer_bound(&scn, 1e-2).map_err(err)?;
    let d = rel(b.r_max, 1e-6);
    Ok((
        d < 1e-9 && !b.capped,
        format!("R_max = {:.6e} m for L = 1 cm (want 1e-6 m)", b.r_max),
    ))
}

fn main() {
    let mut report = Report { failed: 0 };
    report.run(1, "launch speed", 1.0, launch_speed);
    report.run(2, "small-time law", 1.0, small_time_law);
    report.run(3, "large-time law", 5.0, large_time_law);
    report.run(4, "total energy", 30.0, total_energy);
    report.run(5, "energy conservation", 60.0, conservation);
    report.run(6, "particle-energy asymptote", 30.0, energy_asymptote);
    report.run(7, "action halving", 60.0, action_halving);
    report.run(8, "solver vs closed form", 300.0, solver_vs_oracle);
    report.run(9, "field sweep", 600.0, field_sweep);
    report.run(10, "coherence-length map", 1.0, regime_map);
    report.run(11, "van der Waals", 1.0, van_der_waals);
    report.run(12, "Lamb shift estimates", 1.0, lamb_estimates);
    report.run(13, "repulsion layer", 1.0, repulsion_layer);
    println!("{} of 13 criteria pass", 13 - report.failed);
    if report.failed > 0 && std::env::var_os("ACCEPTANCE_STRICT").is_some() {
        std::process::exit(1);
    }
}
