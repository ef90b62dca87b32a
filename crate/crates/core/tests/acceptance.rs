//! Acceptance suite: every criterion prints one pass/fail line and asserts
//! at its stated tolerance.

use entrosteer::bounds::{verify_bound_numeric, BoundScenario, DEFAULT_BUDGET};
use entrosteer::criteria::{
    assemblage, closed_form_isotropic, closed_form_two_qubit_q2, one_way_window, steering_shannon,
    steering_tsallis, tsallis_entropy_form_term, tsallis_setting_term, Scenario, SettingDist,
};
use entrosteer::entropy::{entropy, relative_entropy, EntropyKind, ProbDist};
use entrosteer::linalg::RngSeed;
use entrosteer::measurements::{
    bes_measurements, mub_complete, pauli_set, pauli_triple, PauliAxis,
};
use entrosteer::presets::{tripartite_config, TriScenario};
use entrosteer::solvers::{
    survey_random, threshold_bisect, CriterionConfig, SolverError, SURVEY_CRITERIA,
};
use entrosteer::states::{
    bes_admissible, bound_entangled, extract_bloch, two_qubit_bloch, BlochParams, StateFamily,
};
use rand::Rng;
use std::time::Instant;

const LN2: f64 = std::f64::consts::LN_2;

fn report(name: &str, ok: bool, detail: &str) {
    println!(
        "acceptance {name}: {} — {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "acceptance {name} failed: {detail}");
}

fn pauli3_config(kind: EntropyKind) -> CriterionConfig {
    CriterionConfig::bipartite(kind, pauli_triple(), pauli_triple()).unwrap()
}

fn bisect(family: &StateFamily, config: &CriterionConfig) -> Option<f64> {
    match threshold_bisect(family, config, 1e-4) {
        Ok(r) => Some(r.critical),
        Err(SolverError::NoViolation) => None,
        Err(e) => panic!("bisection failed: {e}"),
    }
}

#[test]
fn criterion_1_werner_threshold() {
    let start = Instant::now();
    let config = pauli3_config(EntropyKind::Tsallis { q: 2.0 });
    let r = threshold_bisect(&StateFamily::Werner, &config, 1e-4).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let target = 1.0 / 3.0_f64.sqrt();
    let ok = (r.critical - target).abs() <= 1e-3 && elapsed < 5.0;
    report(
        "1 (Werner q=2 threshold)",
        ok,
        &format!(
            "critical {:.4} vs 1/sqrt(3) = {:.4}, {:.2}s",
            r.critical, target, elapsed
        ),
    );
}

#[test]
fn criterion_2_isotropic_law() {
    let start = Instant::now();
    let mut details = Vec::new();
    let mut ok = true;
    for d in [2usize, 3, 5, 7] {
        let alice = mub_complete(d).unwrap();
        let config = CriterionConfig::bipartite(
            EntropyKind::Tsallis { q: 2.0 },
            alice.clone(),
            alice.conjugate(),
        )
        .unwrap();
        let r = threshold_bisect(&StateFamily::Isotropic { d }, &config, 1e-4).unwrap();
        let law = 1.0 / ((d + 1) as f64).sqrt();
        ok &= (r.critical - law).abs() <= 1e-3;
        details.push(format!("d={d}: {:.4} (law {:.4})", r.critical, law));
    }
    let elapsed = start.elapsed().as_secs_f64();
    ok &= elapsed < 30.0;
    report(
        "2 (isotropic 1/sqrt(d+1) law)",
        ok,
        &format!("{}; {:.2}s", details.join(", "), elapsed),
    );
}

fn fixture_families() -> [StateFamily; 3] {
    [
        StateFamily::Werner,
        StateFamily::NoisyExampleTwo,
        StateFamily::NoisyExampleThree,
    ]
}

#[test]
fn criterion_3a_renyi_vs_shannon_ordering() {
    // As specified: Rényi thresholds at r in {1.5, 2, 3} must not undercut
    // the Shannon threshold on the fixtures. With the criterion's published
    // probability form and the catalog bounds this fails structurally: the
    // left-hand side is monotonically non-increasing in r (Rényi divergences
    // grow with the order), so on (1,2) the criterion fires strictly earlier
    // than Shannon under the shared bound.
    let resolution = 1e-4;
    let mut ok = true;
    let mut details = Vec::new();
    for fam in fixture_families() {
        let shannon = bisect(&fam, &pauli3_config(EntropyKind::Shannon)).unwrap();
        for r in [1.5, 2.0, 3.0] {
            let thr = bisect(&fam, &pauli3_config(EntropyKind::Renyi { r }));
            let val = thr.unwrap_or(1.0);
            if val < shannon - resolution {
                ok = false;
                details.push(format!(
                    "{} r={r}: {:.4} < shannon {:.4}",
                    fam.label(),
                    val,
                    shannon
                ));
            }
        }
    }
    report(
        "3a (Rényi thresholds ≥ Shannon)",
        ok,
        &if details.is_empty() {
            "ordering holds".to_string()
        } else {
            details.join("; ")
        },
    );
}

#[test]
fn criterion_3b_tsallis_vs_shannon_ordering() {
    let resolution = 1e-4;
    let mut ok = true;
    let mut details = Vec::new();
    for fam in fixture_families() {
        let shannon = bisect(&fam, &pauli3_config(EntropyKind::Shannon)).unwrap();
        let q2 = bisect(&fam, &pauli3_config(EntropyKind::Tsallis { q: 2.0 })).unwrap();
        ok &= q2 <= shannon + resolution;
        details.push(format!(
            "{}: q2 {:.4} ≤ shannon {:.4}",
            fam.label(),
            q2,
            shannon
        ));
    }
    report(
        "3b (Tsallis q=2 thresholds ≤ Shannon)",
        ok,
        &details.join(", "),
    );
}

#[test]
fn criterion_4_one_way_windows() {
    let mut ok = true;
    let mut details = Vec::new();
    for theta in [
        std::f64::consts::PI / 16.0,
        std::f64::consts::PI / 8.0,
        3.0 * std::f64::consts::PI / 16.0,
    ] {
        for (m, axes) in [
            (2usize, vec![PauliAxis::X, PauliAxis::Z]),
            (3, vec![PauliAxis::X, PauliAxis::Y, PauliAxis::Z]),
        ] {
            let set = pauli_set(&axes).unwrap();
            let config =
                CriterionConfig::bipartite(EntropyKind::Tsallis { q: 2.0 }, set.clone(), set)
                    .unwrap();
            let fam = StateFamily::OneWay { theta };
            let bisected = threshold_bisect(&fam, &config, 1e-5).unwrap().critical;
            let window = one_way_window(theta, m).unwrap();
            let pass = (bisected - window.lower).abs() <= 1e-3;
            ok &= pass;
            details.push(format!(
                "θ={theta:.3} m={m}: {:.4} vs {:.4}",
                bisected, window.lower
            ));
        }
    }
    report("4 (one-way detection windows)", ok, &details.join(", "));
}

#[test]
fn criterion_5_random_survey() {
    let start = Instant::now();
    let n = 100_000;
    let table = survey_random(n, RngSeed(0), &SURVEY_CRITERIA);
    let pct = |c: usize| 100.0 * c as f64 / n as f64;
    let none = pct(table.none_violated());
    let all = pct(table.all_violated());
    let only = pct(table.only_closed_form());
    let linear_only = table.linear_without_closed_form();
    let elapsed = start.elapsed().as_secs_f64();
    let ok = (none - 94.34).abs() <= 0.5
        && (all - 3.81).abs() <= 0.5
        && (only - 1.85).abs() <= 0.5
        && linear_only == 0
        && elapsed < 600.0;
    report(
        "5 (random survey fractions)",
        ok,
        &format!(
            "none {none:.2}% (94.34), all {all:.2}% (3.81), only-closed {only:.2}% (1.85), linear-only {linear_only}; {elapsed:.1}s"
        ),
    );
}

#[test]
fn criterion_6_tripartite_table() {
    let sep = |b: bool| TriScenario::AToBc { separable_bound: b };
    let shannon = EntropyKind::Shannon;
    let q2 = EntropyKind::Tsallis { q: 2.0 };
    let ghz = StateFamily::NoisyGhz;
    let w = StateFamily::NoisyW;
    // (family, scenario, m, kind, printed threshold or None for no violation)
    let rows: Vec<(&StateFamily, TriScenario, usize, EntropyKind, Option<f64>)> = vec![
        (&ghz, sep(true), 2, shannon, Some(0.8631)),
        (&ghz, sep(true), 2, q2, Some(0.866)),
        (&ghz, sep(true), 3, shannon, Some(0.7642)),
        (&ghz, sep(false), 3, shannon, Some(0.909)),
        (&ghz, sep(false), 3, q2, Some(0.775)),
        (&w, sep(true), 2, shannon, Some(0.9814)),
        (&w, sep(true), 2, q2, None),
        (&w, sep(true), 3, shannon, Some(0.8523)),
        (&w, sep(false), 3, shannon, None),
        (&w, sep(false), 3, q2, Some(0.8366)),
        (&ghz, TriScenario::AbToCLocal, 2, shannon, Some(0.7476)),
        (&ghz, TriScenario::AbToCLocal, 2, q2, Some(0.6751)),
        (&ghz, TriScenario::AbToCLocal, 3, shannon, Some(0.6247)),
        (&ghz, TriScenario::AbToCLocal, 3, q2, Some(0.5514)),
        (&w, TriScenario::AbToCLocal, 2, shannon, Some(0.818)),
        (&w, TriScenario::AbToCLocal, 2, q2, Some(0.75)),
        (&w, TriScenario::AbToCLocal, 3, shannon, Some(0.698)),
        (&w, TriScenario::AbToCLocal, 3, q2, Some(0.623)),
        // global settings reproduce the local thresholds for the GHZ family
        (&ghz, TriScenario::AbToCGlobal, 2, shannon, Some(0.7476)),
        (&ghz, TriScenario::AbToCGlobal, 2, q2, Some(0.6751)),
        (&ghz, TriScenario::AbToCGlobal, 3, shannon, Some(0.6247)),
        (&ghz, TriScenario::AbToCGlobal, 3, q2, Some(0.5514)),
        (&w, TriScenario::AbToCGlobal, 2, shannon, Some(0.8571)),
        (&w, TriScenario::AbToCGlobal, 2, q2, Some(0.7802)),
        (&w, TriScenario::AbToCGlobal, 3, shannon, Some(0.7414)),
        (&w, TriScenario::AbToCGlobal, 3, q2, Some(0.6548)),
    ];
    let mut ok = true;
    let mut failures = Vec::new();
    for (fam, scen, m, kind, expected) in rows {
        let config = tripartite_config(fam, scen, m, kind).unwrap();
        let got = bisect(fam, &config);
        let pass = match (got, expected) {
            (Some(g), Some(e)) => (g - e).abs() <= 2e-3,
            (None, None) => true,
            _ => false,
        };
        if !pass {
            ok = false;
            failures.push(format!(
                "{} {scen:?} m={m} {kind:?}: got {got:?}, printed {expected:?}",
                fam.label()
            ));
        }
    }
    report(
        "6 (tripartite thresholds, incl. dual-bound 0.7642/0.909)",
        ok,
        &if failures.is_empty() {
            "all 26 printed entries within ±2e-3".to_string()
        } else {
            failures.join("; ")
        },
    );
}

#[test]
fn criterion_7_bound_entangled_no_violation() {
    let set = bes_measurements();
    let scenario = Scenario::bipartite(set.clone(), set).unwrap();
    let bound = entrosteer::bounds::bound_tsallis_mub(3, 2, 2.0).unwrap();
    let mut min_margin = f64::INFINITY;
    let mut checked = 0usize;
    for i in 0..30 {
        for j in 0..30 {
            let m1 = i as f64 / 29.0;
            let m2 = j as f64 / 29.0;
            if !bes_admissible(m1, m2) {
                continue;
            }
            let rho = bound_entangled(m1, m2).unwrap();
            let dists = assemblage(&rho, &scenario).unwrap();
            let rep = steering_tsallis(&dists, 2.0, &bound);
            min_margin = min_margin.min(rep.margin());
            checked += 1;
        }
    }
    let ok = min_margin >= -1e-9 && checked > 500;
    report(
        "7 (bound-entangled family never violates)",
        ok,
        &format!("min margin {min_margin:.3e} over {checked} admissible grid points"),
    );
}

#[test]
fn criterion_8_bound_certification() {
    let mut ok = true;
    let mut details = Vec::new();
    let mut check = |label: &str, got: f64, want: f64| {
        let pass = (got - want).abs() <= 1e-5;
        ok &= pass;
        details.push(format!("{label}: {got:.6} vs {want:.6}"));
    };

    let triple = pauli_triple();
    let nb = verify_bound_numeric(
        &[&triple],
        EntropyKind::Shannon,
        BoundScenario::Single,
        DEFAULT_BUDGET,
        RngSeed(101),
    )
    .unwrap();
    check("single qubit Shannon triple", nb.bound.value, 2.0 * LN2);

    let nb = verify_bound_numeric(
        &[&triple, &triple],
        EntropyKind::Shannon,
        BoundScenario::CompositeAny,
        DEFAULT_BUDGET,
        RngSeed(102),
    )
    .unwrap();
    check(
        "two-qubit any-state Shannon triple",
        nb.bound.value,
        3.0 * LN2,
    );

    let pair = pauli_set(&[PauliAxis::X, PauliAxis::Z]).unwrap();
    for (q, want) in [(2.0, 0.5), (3.0, 0.375)] {
        let nb = verify_bound_numeric(
            &[&pair],
            EntropyKind::Tsallis { q },
            BoundScenario::Single,
            DEFAULT_BUDGET,
            RngSeed(103),
        )
        .unwrap();
        check(&format!("qubit pair Tsallis q={q}"), nb.bound.value, want);
    }

    // composite-bound crossover at q = 2: the all-state bound follows
    // 3·ln_q 2 below q=2 and 2·ln_q 4 above, meeting at 3/2
    let lnq = |x: f64, q: f64| entrosteer::entropy::q_log(x, q).unwrap();
    for (q, want_any) in [
        (1.5, 3.0 * lnq(2.0, 1.5)),
        (2.0, 1.5),
        (3.0, 2.0 * lnq(4.0, 3.0)),
    ] {
        let nb = verify_bound_numeric(
            &[&triple, &triple],
            EntropyKind::Tsallis { q },
            BoundScenario::CompositeAny,
            DEFAULT_BUDGET,
            RngSeed(104),
        )
        .unwrap();
        check(
            &format!("two-qubit any-state q={q}"),
            nb.bound.value,
            want_any,
        );
    }
    for (q, want_sep) in [(1.5, 2.0 * lnq(4.0, 1.5)), (2.0, 1.5)] {
        let nb = verify_bound_numeric(
            &[&triple, &triple],
            EntropyKind::Tsallis { q },
            BoundScenario::CompositeSeparable,
            DEFAULT_BUDGET,
            RngSeed(105),
        )
        .unwrap();
        check(
            &format!("two-qubit separable q={q}"),
            nb.bound.value,
            want_sep,
        );
    }

    report("8 (numerical bound certification)", ok, &details.join("; "));
}

#[test]
fn criterion_9_property_suites() {
    let mut ok = true;
    let mut notes = Vec::new();
    let mut rng = RngSeed(2026).rng();
    let rand_dist = |rng: &mut rand_chacha::ChaCha8Rng, n: usize| {
        let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(1e-3..1.0)).collect();
        let s: f64 = raw.iter().sum();
        ProbDist::new(raw.into_iter().map(|x| x / s).collect()).unwrap()
    };

    // entropy axioms over seeded random instances
    let grid = [0.5, 1.5, 2.0, 3.0, 5.0];
    let mut axiom_ok = true;
    for _ in 0..100 {
        let p = rand_dist(&mut rng, 6);
        let mut prev_t = f64::INFINITY;
        let mut prev_r = f64::INFINITY;
        for &g in &grid {
            let st = entropy(&p, EntropyKind::Tsallis { q: g });
            let sr = entropy(&p, EntropyKind::Renyi { r: g });
            axiom_ok &= st <= prev_t + 1e-12 && sr <= prev_r + 1e-12;
            prev_t = st;
            prev_r = sr;
            // Rényi–Tsallis bridge
            let bridged = (1.0 + (1.0 - g) * st).ln() / (1.0 - g);
            axiom_ok &= (sr - bridged).abs() < 1e-10;
        }
        // pseudo-additivity
        let q = 2.0;
        let r2 = rand_dist(&mut rng, 4);
        let joint = entropy(&p.product(&r2), EntropyKind::Tsallis { q });
        let (sp, sr2) = (
            entropy(&p, EntropyKind::Tsallis { q }),
            entropy(&r2, EntropyKind::Tsallis { q }),
        );
        axiom_ok &= (joint - (sp + sr2 + (1.0 - q) * sp * sr2)).abs() < 1e-10;
    }
    // joint convexity spot checks
    for kind in [
        EntropyKind::Shannon,
        EntropyKind::Tsallis { q: 0.5 },
        EntropyKind::Tsallis { q: 2.0 },
        EntropyKind::Renyi { r: 0.5 },
    ] {
        for _ in 0..30 {
            let (p1, q1) = (rand_dist(&mut rng, 4), rand_dist(&mut rng, 4));
            let (p2, q2d) = (rand_dist(&mut rng, 4), rand_dist(&mut rng, 4));
            let lam = rng.gen_range(0.0..1.0);
            let mixed = relative_entropy(&p1.mix(&p2, lam), &q1.mix(&q2d, lam), kind).unwrap();
            let split = lam * relative_entropy(&p1, &q1, kind).unwrap()
                + (1.0 - lam) * relative_entropy(&p2, &q2d, kind).unwrap();
            axiom_ok &= mixed <= split + 1e-10;
        }
    }
    ok &= axiom_ok;
    notes.push(format!(
        "entropy axioms {}",
        if axiom_ok { "green" } else { "RED" }
    ));

    // entropy-form vs probability-form identity
    let mut identity_ok = true;
    for _ in 0..40 {
        let raw: Vec<f64> = (0..12).map(|_| rng.gen_range(0.05..1.0)).collect();
        let s: f64 = raw.iter().sum();
        let sd = SettingDist::from_joint(raw.into_iter().map(|x| x / s).collect(), vec![3, 4], 1)
            .unwrap();
        for q in [0.7, 1.4, 2.0, 2.6] {
            identity_ok &=
                (tsallis_setting_term(&sd, q) - tsallis_entropy_form_term(&sd, q)).abs() < 1e-10;
        }
    }
    ok &= identity_ok;
    notes.push(format!(
        "lhs identity {}",
        if identity_ok { "green" } else { "RED" }
    ));

    // closed forms vs generic pipeline to 1e-10
    let mut closed_ok = true;
    for d in [2usize, 3] {
        let alice = mub_complete(d).unwrap();
        let scenario = Scenario::bipartite(alice.clone(), alice.conjugate()).unwrap();
        let m = d + 1;
        for k in 0..200 {
            let alpha = k as f64 / 199.0;
            let closed = closed_form_isotropic(d, m, 2.0, alpha).unwrap();
            let dists =
                assemblage(&entrosteer::states::isotropic(d, alpha).unwrap(), &scenario).unwrap();
            let pipe = steering_tsallis(&dists, 2.0, &closed.bound);
            closed_ok &= (closed.lhs - pipe.lhs).abs() < 1e-10;
        }
    }
    let pauli_scenario = Scenario::bipartite(pauli_triple(), pauli_triple()).unwrap();
    let mut tried = 0;
    while tried < 200 {
        let p = BlochParams {
            a: [
                rng.gen_range(-0.4..0.4),
                rng.gen_range(-0.4..0.4),
                rng.gen_range(-0.4..0.4),
            ],
            b: [
                rng.gen_range(-0.4..0.4),
                rng.gen_range(-0.4..0.4),
                rng.gen_range(-0.4..0.4),
            ],
            c: [
                rng.gen_range(-0.6..0.6),
                rng.gen_range(-0.6..0.6),
                rng.gen_range(-0.6..0.6),
            ],
        };
        let Ok(rho) = two_qubit_bloch(&p) else {
            continue;
        };
        tried += 1;
        let closed = closed_form_two_qubit_q2(&extract_bloch(&rho)).unwrap();
        let dists = assemblage(&rho, &pauli_scenario).unwrap();
        let pipe = steering_tsallis(&dists, 2.0, &closed.bound);
        closed_ok &= (closed.lhs - pipe.lhs).abs() < 1e-10;
    }
    ok &= closed_ok;
    notes.push(format!(
        "closed forms {}",
        if closed_ok { "green" } else { "RED" }
    ));

    // q → 1 continuity on fixtures
    let mut cont_ok = true;
    for fam in fixture_families() {
        let rho = fam.state(0.75).unwrap();
        let dists = assemblage(&rho, &pauli_scenario).unwrap();
        let bound = entrosteer::bounds::bound_shannon_mub(2, 3).unwrap();
        let shannon = steering_shannon(&dists, &bound).lhs;
        for q in [1.0 - 1e-6, 1.0 + 1e-6] {
            cont_ok &= (steering_tsallis(&dists, q, &bound).lhs - shannon).abs() < 1e-4;
        }
    }
    ok &= cont_ok;
    notes.push(format!(
        "q→1 continuity {}",
        if cont_ok { "green" } else { "RED" }
    ));

    report("9 (property suites)", ok, &notes.join(", "));
}
