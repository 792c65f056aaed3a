use std::f64::consts::PI;

use bowstate::atom_dielectric::*;
use bowstate::{Error, Execution};
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn at(r_over_ab: f64) -> AtomDielectricScenario {
    AtomDielectricScenario::preset(r_over_ab)
}

#[test]
fn debye_permittivity() {
    let d = at(10.0).dielectric;
    assert_eq!(d.epsilon(0.0).re, d.eps0);
    assert_eq!(d.epsilon(0.0).im, 0.0);
    let e = d.epsilon(d.omega0);
    assert!(rel(e.re, d.eps_inf + 0.5 * (d.eps0 - d.eps_inf)) < 1e-14);
    assert!(rel(e.im, 0.5 * (d.eps0 - d.eps_inf)) < 1e-14);
    let h = 1e-6 * d.omega0;
    let fd = (d.epsilon(h).im - d.epsilon(-h).im) / (2.0 * h);
    assert!(rel(fd, d.loss_slope()) < 1e-9);
}

proptest! {
    #[test]
    fn loss_is_positive_and_reflection_conjugates(w in 1e-3f64..1e3) {
        let d = at(10.0).dielectric;
        let omega = w * d.omega0;
        prop_assert!(d.epsilon(omega).im > 0.0);
        prop_assert_eq!(d.epsilon(-omega), d.epsilon(omega).conj());
    }

    #[test]
    fn dimensionless_outputs_are_homogeneous(log_r in 0.6f64..7.0, scale in 0.1f64..10.0) {
        let a = at(10f64.powf(log_r));
        let mut b = a;
        b.a_b *= scale;
        b.r *= scale;
        prop_assert!(rel(coherence_length(&b).unwrap().value / b.a_b, coherence_length(&a).unwrap().value / a.a_b) < 1e-12);
        prop_assert!(rel(damping_ohmic(&b).unwrap().value, damping_ohmic(&a).unwrap().value) < 1e-12);
        prop_assert_eq!(classify_regime(&a).unwrap().regime, classify_regime(&b).unwrap().regime);
    }

    #[test]
    fn coherence_length_never_decreases(lo in 0.6f64..7.0, step in 0.0f64..1.0) {
        let a = coherence_length(&at(10f64.powf(lo))).unwrap().value;
        let b = coherence_length(&at(10f64.powf(lo + step))).unwrap().value;
        prop_assert!(b >= a * (1.0 - 1e-12));
    }
}

#[test]
fn ohmic_damping() {
    let g = damping_ohmic(&at(1e7)).unwrap();
    assert_eq!(g.precision, Precision::Exact);
    assert!(rel(g.value, 1.0 / 18.0 * 1e6 * 1e-21) < 1e-9);
    let ratio = damping_ohmic(&at(1e5)).unwrap().value / damping_ohmic(&at(2e5)).unwrap().value;
    assert!(rel(ratio, 8.0) < 1e-12);
    assert!(damping_ohmic(&at(1e300)).unwrap().value < 1e-290);
}

#[test]
fn regimes() {
    assert_eq!(
        classify_regime(&at(1e4)).unwrap().regime,
        Regime::IntermediateRNonohmic
    );
    assert_eq!(
        classify_regime(&at(1e2)).unwrap().regime,
        Regime::SmallRNonohmic
    );
    assert_eq!(
        classify_regime(&at(1e7)).unwrap().regime,
        Regime::LargeROhmic
    );
    let rep = classify_regime(&at(1e4)).unwrap();
    assert!(rep.r_small_intermediate < rep.r_intermediate_large);
    assert!(rel(rep.r_small_intermediate / 1e-10, 1e3) < 1e-12);
    assert!(!rep.crossover && classify_regime(&at(2e3)).unwrap().crossover);
    assert!(matches!(
        classify_regime(&at(0.5)),
        Err(Error::InvalidScenario(_))
    ));
}

#[test]
fn coherence_length_bands_meet() {
    let plateau = coherence_length(&at(10.0)).unwrap().value / 1e-10;
    assert!(rel(plateau, 1e6) < 1e-12);
    let edge = coherence_length(&at(1e3 * (1.0 + 1e-12))).unwrap().value / 1e-10;
    assert!(rel(edge, 1e6) < 1e-9);
    let below = coherence_length(&at(1e6 * (1.0 - 1e-12))).unwrap().value / 1e-10;
    let above = coherence_length(&at(1e6 * (1.0 + 1e-12))).unwrap().value / 1e-10;
    assert!(rel(below, 1e12) < 1e-9 && rel(above, 1e12) < 1e-9);
}

#[test]
fn coherence_map_slopes() {
    let map = coherence_map(&at(10.0), 0.5, 7.0, 20, Execution::Serial).unwrap();
    assert_eq!(map.len(), 131);
    let slope = |a: f64, b: f64| {
        let p = map.iter().find(|p| (p.log10_r - a).abs() < 1e-9).unwrap();
        let q = map.iter().find(|p| (p.log10_r - b).abs() < 1e-9).unwrap();
        (q.log10_xi - p.log10_xi) / (b - a)
    };
    assert!(slope(0.5, 2.5).abs() < 1e-12);
    assert!((slope(3.5, 5.5) - 2.0).abs() < 1e-9);
    assert!((slope(6.5, 7.0) - 3.0).abs() < 1e-9);
}

#[test]
fn tau0_per_band() {
    let unit = si::HBAR / si::RYDBERG;
    assert!(rel(nonohmic_tau0(&at(1e4)).unwrap().value, 1e8 * unit) < 1e-12);
    assert!(rel(nonohmic_tau0(&at(1e2)).unwrap().value, 1e6 * unit) < 1e-12);
    assert!(matches!(
        nonohmic_tau0(&at(1e7)),
        Err(Error::WrongRegime { .. })
    ));
    // ξ ~ τ₀√(V/m) to within the order-unity factors of the estimates.
    for r in [1e2, 1e4] {
        let scn = at(r);
        let chained =
            nonohmic_tau0(&scn).unwrap().value * (scn.rydberg / scn.electron_mass()).sqrt();
        let xi = coherence_length(&scn).unwrap().value;
        assert!(
            chained / xi > 0.1 && chained / xi < 10.0,
            "{r}: {chained} vs {xi}"
        );
    }
}

#[test]
fn repulsion_layer() {
    let b = repulsion_layer_bound(&at(10.0), 1e-2).unwrap();
    assert!(rel(b.r_max, 1e-6) < 1e-12 && !b.capped);
    let b = repulsion_layer_bound(&at(10.0), 1e8 * 1e-10).unwrap();
    assert!(rel(b.r_max / 1e-10, 1e4) < 1e-12);
    let b = repulsion_layer_bound(&at(10.0), 1e30).unwrap();
    assert!(b.capped && rel(b.r_max / 1e-10, 1e6) < 1e-12);
    assert!(repulsion_layer_bound(&at(10.0), 1e-6).is_err());
}

#[test]
fn van_der_waals() {
    let scn = at(1e3);
    let alpha = hydrogen_polarizability(scn.a_b);
    let u = vdw_energy(&scn, alpha, default_phi).unwrap();
    assert!((u.coefficient - 37.3).abs() < 0.05);
    assert!(
        u.retarded_regime
            && !vdw_energy(&at(10.0), alpha, default_phi)
                .unwrap()
                .retarded_regime
    );
    let far = vdw_energy(&at(2e3), alpha, default_phi).unwrap();
    assert_eq!(u.energy.value / far.energy.value, 16.0);
    let mut neutral = scn;
    // The interaction vanishes linearly as ε₀ → 1.
    neutral.dielectric.eps0 = 1.0 + 1e-9;
    let weak = vdw_energy(&neutral, alpha, default_phi).unwrap();
    assert!(rel(weak.coefficient / 1e-9, 3.0 * 37.3 / 2.0) < 1e-6);
    // Independent arithmetic: (27/8π)(ħc/e²)(1/3)φ.
    let expect = 27.0 / (8.0 * PI) * 137.036 / 3.0 * default_phi(2.0);
    assert!(rel(u.coefficient, expect) < 1e-14);
}

#[test]
fn bow_field() {
    let scn = at(1e2);
    let gamma = 1e-2 * scn.rydberg / scn.hbar;
    let b = bow_field_estimate(&scn, 1.0, gamma).unwrap();
    assert!(rel(b.field.value, 0.1 * scn.rydberg) < 1e-12 && b.within_bow_condition);
    let edge = bow_field_estimate(&scn, 1.0, scn.rydberg / scn.hbar).unwrap();
    assert!(edge.non_semiclassical && !edge.within_bow_condition);
    let rep = classify_regime(&scn).unwrap();
    let chained = bow_field_estimate(
        &scn,
        rep.coherence_length.value,
        rep.effective_damping.value,
    )
    .unwrap();
    // (V/ξ)·10⁻³ with ξ = 10⁶ a_B.
    assert!(rel(chained.field.value, scn.rydberg / (1e6 * scn.a_b) * 1e-3) < 1e-9);
}

#[test]
fn lamb_shifts() {
    let g = 1.0 / 137.036;
    let l = lamb_shift_usual(g, 1.0).unwrap();
    assert_eq!(l.precision, Precision::Estimate);
    assert!(rel(l.value, 1.91e-6) < 5e-3);
    assert!(lamb_shift_usual(1e-30, 1.0).unwrap().value < 1e-80);
    let small = at(1e2);
    let gamma = classify_regime(&small).unwrap().effective_damping.value;
    let d = lamb_shift_dielectric(&small, gamma).unwrap();
    assert!(rel(d.value / small.rydberg, 1e-6) < 1e-9);
    let large = at(1e7);
    let gamma = classify_regime(&large).unwrap().effective_damping.value;
    let d = lamb_shift_dielectric(&large, gamma).unwrap();
    assert_eq!(d.value, large.hbar * gamma / (2.0 * PI) * 137.036f64.ln());
    assert!(rel(d.value / (large.hbar * gamma), 0.783) < 1e-3);
    assert_eq!(lamb_shift_dielectric(&large, 0.0).unwrap().value, 0.0);
}

proptest! {
    #[test]
    fn vacuum_lamb_shift_grows_below_inverse_e(a in 1e-4f64..0.36, b in 1e-4f64..0.36) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assume!(hi > lo);
        prop_assert!(lamb_shift_usual(hi, 1.0).unwrap().value > lamb_shift_usual(lo, 1.0).unwrap().value);
    }
}

#[test]
fn friction_power_laws() {
    let ohmic = at(1e7);
    let r =
        dissipation_rate(&ohmic, 2.0).unwrap().value / dissipation_rate(&ohmic, 1.0).unwrap().value;
    assert!(rel(r, 4.0) < 1e-14);
    let mid = at(1e4);
    let r = dissipation_rate(&mid, 2.0).unwrap().value / dissipation_rate(&mid, 1.0).unwrap().value;
    assert!(rel(r, 2.0) < 1e-14);
    let small = at(1e2);
    let r =
        dissipation_rate(&small, 2.0).unwrap().value / dissipation_rate(&small, 1.0).unwrap().value;
    assert!(rel(r, 0.5) < 1e-14);
    assert!(matches!(
        dissipation_rate(&small, 0.0),
        Err(Error::ZeroVelocity)
    ));
    assert!(dissipation_rate(&ohmic, 0.0).is_ok());
}

#[test]
fn derived_constants() {
    let scn = at(10.0);
    // a_B = ħ²/(m e²) and V = m e⁴/(2ħ²).
    let (m, e2) = (scn.electron_mass(), scn.charge_squared());
    assert!(rel(scn.hbar * scn.hbar / (m * e2), scn.a_b) < 1e-14);
    assert!(rel(m * e2 * e2 / (2.0 * scn.hbar * scn.hbar), scn.rydberg) < 1e-14);
}

#[test]
fn rejects_bad_dielectrics() {
    let mut scn = at(10.0);
    scn.dielectric.eps_inf = 3.0;
    assert!(classify_regime(&scn).is_err());
    let mut scn = at(10.0);
    scn.dielectric.omega_ph = scn.dielectric.omega0 * 0.5;
    assert!(coherence_length(&scn).is_err());
}
