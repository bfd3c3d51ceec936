//! Acceptance gate: one test per criterion, each ending in a single
//! machine-readable PASS line (a panic marks the criterion failed).

use mcgate::circuit::QubitId;
use mcgate::cost;
use mcgate::mcsu2::{self, Su2Request};
use mcgate::mcu;
use mcgate::mcx::{self, McxRequest};
use mcgate::oracle::{distance, pattern_errors, ControlSpec, DistanceMode, StateVector};
use mcgate::qasm;
use mcgate::unitary::{
    min_base_controls, random_real_secondary_su2, random_unitary, spectral_error,
    spectral_error_for_theta, UnitaryMatrix2, C64,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn std_wires(k: usize) -> (Vec<QubitId>, QubitId, usize) {
    ((1..=k).rev().collect(), 0, k + 1)
}

/// Statevector comparison of a circuit against a product of ideal
/// multi-controlled gates, over all (or sampled) basis columns.
fn multi_gate_distance(
    circuit: &mcgate::Circuit,
    gates: &[(UnitaryMatrix2, QubitId)],
    controls: &[QubitId],
    sample: Option<(usize, u64)>,
) -> f64 {
    let n = circuit.width();
    let dim = 1usize << n;
    let cols: Vec<usize> = match sample {
        None => (0..dim).collect(),
        Some((count, seed)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let cmask: usize = controls.iter().map(|&c| 1 << c).sum();
            let mut v: Vec<usize> = vec![cmask, dim - 1, 0];
            v.extend((0..count).map(|_| rng.gen_range(0..dim)));
            v
        }
    };
    let mut worst = 0.0f64;
    for col in cols {
        let mut measured = StateVector::basis(n, col).unwrap();
        measured.apply_circuit(circuit).unwrap();
        let mut ideal = StateVector::basis(n, col).unwrap();
        for (w, t) in gates {
            ideal.apply_ideal_mcu(w, &ControlSpec::single(controls, *t));
        }
        worst = worst.max(measured.max_abs_diff(&ideal));
    }
    worst
}

#[test]
fn ac1_exactness_suite() {
    for n in 3..=9usize {
        let k = n - 1;
        let (controls, target, width) = std_wires(k);
        let mut rng = ChaCha8Rng::seed_from_u64(100 + n as u64);
        for _ in 0..20 {
            let u = random_unitary(&mut rng);
            let r = mcu::mcu_exact(&u, &controls, target, width).unwrap();
            assert_eq!(r.cnot_count, 4 * n * n - 12 * n + 10, "count at n={n}");
            let spec = ControlSpec::single(&controls, target);
            let d = distance(&r.circuit, &u, &spec, DistanceMode::Full).unwrap();
            assert!(d <= 1e-10, "n={n} distance {d}");
        }
    }
    println!("AC1 exactness suite (n=3..9, 20 seeds each): PASS");
}

#[test]
fn ac2_toffoli_family() {
    // plain Toffoli: ideal C^2 X with 6 CNOTs
    let t = mcx::toffoli(3, 1, 2, 0);
    assert_eq!(t.cnot_count(), 6);
    let d = distance(
        &t,
        &UnitaryMatrix2::x(),
        &ControlSpec::single(&[1, 2], 0),
        DistanceMode::Full,
    )
    .unwrap();
    assert!(d <= 1e-10, "toffoli distance {d}");

    // multi-target Toffoli: 2nt + 4 CNOTs, exact
    for nt in 1..=4usize {
        let width = 2 + nt;
        let targets: Vec<QubitId> = (2..2 + nt).collect();
        let c = mcx::multi_target_toffoli(width, 0, 1, &targets).unwrap();
        assert_eq!(c.cnot_count(), 2 * nt + 4, "nt={nt}");
        let gates: Vec<(UnitaryMatrix2, QubitId)> =
            targets.iter().map(|&t| (UnitaryMatrix2::x(), t)).collect();
        let d = multi_gate_distance(&c, &gates, &[0, 1], None);
        assert!(d <= 1e-10, "multi-target toffoli nt={nt} distance {d}");
    }

    // dirty-ancilla multi-target MCX with ancilla restoration
    for k in 3..=6usize {
        for nt in 1..=3usize {
            let controls: Vec<QubitId> = (0..k).collect();
            let targets: Vec<QubitId> = (k..k + nt).collect();
            let dirty: Vec<QubitId> = (k + nt..k + nt + k - 2).collect();
            let width = k + nt + k - 2;
            let req = McxRequest::new(&controls, &targets, &dirty, width);
            let (c, stats) = mcx::mcx_multi_target(&req).unwrap();
            assert_eq!(
                stats.toffoli_class,
                2 * (2 * k + nt - 5),
                "Toffoli-class count at k={k} nt={nt}"
            );
            let gates: Vec<(UnitaryMatrix2, QubitId)> =
                targets.iter().map(|&t| (UnitaryMatrix2::x(), t)).collect();
            // exactness over every basis input (small) or a seeded sample
            // (large) proves the action AND that dirty ancillas come back
            let sample = (width > 11).then_some((128, 7u64 + k as u64));
            let d = multi_gate_distance(&c, &gates, &controls, sample);
            assert!(d <= 1e-10, "mcx k={k} nt={nt} distance {d}");
        }
    }
    println!("AC2 Toffoli family (Lemmas 5-6 counts, ancilla restoration): PASS");
}

#[test]
fn ac3_mcsu2_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(300);
    // single target, n = k + 1 in 5..=11
    for n in 5..=11usize {
        let k = n - 1;
        let (controls, target, width) = std_wires(k);
        let spec = ControlSpec::single(&controls, target);
        let mode = if width <= 10 {
            DistanceMode::Full
        } else {
            DistanceMode::SampledColumns { count: 64, seed: 3 }
        };
        let tol = if width <= 10 { 1e-10 } else { 1e-9 };
        let bound = 16 * n - 40;

        let ws = random_real_secondary_su2(&mut rng);
        let c = mcsu2::mcsu2_real_secondary(&ws, &controls, target, width).unwrap();
        assert!(c.cnot_count() <= bound, "secondary n={n}: {}", c.cnot_count());
        let d = distance(&c, &ws, &spec, mode).unwrap();
        assert!(d <= tol, "secondary n={n} distance {d}");

        let wm = UnitaryMatrix2::rx(rng.gen_range(0.1..3.0));
        let c = mcsu2::mcsu2_real_main(&wm, &controls, target, width).unwrap();
        assert!(c.cnot_count() <= bound, "main n={n}: {}", c.cnot_count());
        let d = distance(&c, &wm, &spec, mode).unwrap();
        assert!(d <= tol, "main n={n} distance {d}");

        let u = random_unitary(&mut rng);
        let wg = u.scale(C64::from_polar(1.0, -u.det().arg() / 2.0));
        let c = mcsu2::mcsu2_general(&wg, &controls, target, width).unwrap();
        assert!(c.cnot_count() <= bound, "general n={n}: {}", c.cnot_count());
        let d = distance(&c, &wg, &spec, mode).unwrap();
        assert!(d <= tol, "general n={n} distance {d}");
    }
    // multi target: n = k + nt in 5..=11, nt = 1..=3, k >= 2
    for n in 5..=11usize {
        for nt in 1..=3usize {
            let k = n - nt;
            if k < 2 {
                continue;
            }
            let controls: Vec<QubitId> = (nt..n).collect();
            let gates: Vec<(UnitaryMatrix2, QubitId)> = (0..nt)
                .map(|t| (random_real_secondary_su2(&mut rng), t))
                .collect();
            let req = Su2Request::new(gates.clone(), &controls, n);
            let c = mcsu2::mcsu2_multi_target(&req).unwrap();
            assert!(
                c.cnot_count() <= 16 * n + 16 * (nt - 1) - 40,
                "multi n={n} nt={nt}: {}",
                c.cnot_count()
            );
            let sample = (n > 10).then_some((64, 5));
            let d = multi_gate_distance(&c, &gates, &controls, sample);
            let tol = if n <= 10 { 1e-10 } else { 1e-9 };
            assert!(d <= tol, "multi n={n} nt={nt} distance {d}");
        }
    }
    println!("AC3 MCSU2 suite (n=5..11, nt=1..3, counts and oracle): PASS");
}

#[test]
fn ac4_base_control_minimality() {
    assert_eq!(min_base_controls(PI, 1e-3).unwrap(), 13);
    let mut rng = ChaCha8Rng::seed_from_u64(400);
    let mut checked = 0;
    while checked < 50 {
        let theta: f64 = rng.gen_range(0.02..PI);
        let eps: f64 = rng.gen_range(0.001..1.0);
        let nb = min_base_controls(theta, eps).unwrap();
        // error at nb passes the budget...
        assert!(
            spectral_error_for_theta(theta, 1u64 << (nb - 1)) <= eps,
            "theta={theta} eps={eps} nb={nb}"
        );
        // ...and nb is minimal: one fewer base control fails (when nb > 1)
        if nb > 1 {
            assert!(
                spectral_error_for_theta(theta, 1u64 << (nb - 2)) > eps,
                "theta={theta} eps={eps} nb={nb} not minimal"
            );
            checked += 1;
        }
    }
    println!("AC4 base-control bound (nb(pi,1e-3)=13; 50-pair minimality grid): PASS");
}

#[test]
fn ac5_approximation_error_suite() {
    let u = UnitaryMatrix2::x();
    let eps = 0.3;
    let expected_all_active = spectral_error(&u, 1u64 << 4).unwrap(); // nb = 5
    for k in 6..=12usize {
        let (controls, target, width) = std_wires(k);
        let spec = ControlSpec::single(&controls, target);
        for strategy in ["thm1", "thm3"] {
            let r = if strategy == "thm1" {
                mcu::mcu_approx(&u, &controls, target, width, eps).unwrap()
            } else {
                mcu::mcu_approx_opt(&u, &controls, target, width, eps).unwrap()
            };
            if width <= 10 {
                let d = distance(&r.circuit, &u, &spec, DistanceMode::Full).unwrap();
                assert!(d <= eps + 1e-9, "{strategy} k={k} full distance {d}");
            }
            let errs = pattern_errors(&r.circuit, &u, &spec).unwrap();
            // b1 is wire k; extras are wires k-5 .. 1
            for (name, e) in &errs {
                assert!(*e <= eps + 1e-9, "{strategy} k={k} pattern {name}: {e}");
                if name == "all-active" {
                    assert!(
                        (e - expected_all_active).abs() <= 1e-9,
                        "{strategy} k={k} all-active {e} vs {expected_all_active}"
                    );
                }
                let exact_pattern = name == "all-inactive"
                    || name == &format!("inactive q{k}")
                    || name
                        .strip_prefix("inactive q")
                        .and_then(|s| s.parse::<usize>().ok())
                        .is_some_and(|q| (1..=k - 5).contains(&q));
                if exact_pattern {
                    assert!(*e <= 1e-9, "{strategy} k={k} pattern {name}: {e}");
                }
            }
        }
    }
    println!("AC5 approximation error suite (eps=0.3, k=6..12, both strategies): PASS");
}

#[test]
fn ac6_count_bounds() {
    assert_eq!(cost::thm3_bound(30, 13).unwrap(), 1424);
    assert_eq!(cost::thm1_bound(30, 13).unwrap(), 6528);
    assert_eq!(cost::barenco_iten_count(30, 1e-3).unwrap(), 7400);
    assert_eq!(cost::crossover_vs_exact(1e-3).unwrap(), 18);
    // Theorem-1 advantage over the Barenco/Iten baseline at eps = 1e-3.
    // The exact formulas cross at n = 44 (slopes 384 vs 320 per qubit), so
    // the advantage is asserted on 14..=43; theorem 3 keeps the advantage
    // through n = 100 and beyond.
    for n in 14..=43usize {
        assert!(
            cost::thm1_bound(n, 13).unwrap() < cost::barenco_iten_count(n, 1e-3).unwrap(),
            "thm1 vs baseline at n={n}"
        );
    }
    for n in 21..=100usize {
        assert!(
            cost::thm3_bound(n, 13).unwrap() < cost::barenco_iten_count(n, 1e-3).unwrap(),
            "thm3 vs baseline at n={n}"
        );
    }
    // every constructed approximate circuit satisfies its theorem bound
    let u = UnitaryMatrix2::x();
    for k in 6..=16usize {
        let (controls, target, width) = std_wires(k);
        let r1 = mcu::mcu_approx(&u, &controls, target, width, 0.3).unwrap();
        assert!(r1.cnot_count <= r1.bound.unwrap(), "thm1 bound at k={k}");
        let r3 = mcu::mcu_approx_opt(&u, &controls, target, width, 0.3).unwrap();
        if let Some(b) = r3.bound {
            assert!(r3.cnot_count <= b, "thm3 bound at k={k}");
        }
    }
    println!("AC6 count bounds (reference values, baseline sweep, crossover=18): PASS");
}

#[test]
fn ac7_section_iv_reproduction() {
    let u = UnitaryMatrix2::x();
    let eps = 1e-3;
    let nb = 13usize;
    for k in 14..=29usize {
        let n = k + 1;
        let (controls, target, width) = std_wires(k);
        let r = mcu::mcu_approx_opt(&u, &controls, target, width, eps).unwrap();
        let curve = 4 * (nb - 1) * (nb - 1) + 32 * n - 112;
        assert!(r.cnot_count <= curve, "k={k}: {} > {curve}", r.cnot_count);
        if k >= nb + 5 {
            assert_eq!(r.cnot_count, curve, "analytic curve at k={k}");
        }
        if n <= 18 {
            let spec = ControlSpec::single(&controls, target);
            let errs = pattern_errors(&r.circuit, &u, &spec).unwrap();
            for (name, e) in &errs {
                assert!(*e <= eps, "k={k} pattern {name}: {e}");
            }
        }
    }
    // Fig-10-equivalent CSV over the swept range
    let table = cost::compare_table(15..=30, eps, 2).unwrap();
    let csv = table.to_csv();
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("cnot_comparison.csv");
    std::fs::write(&path, &csv).unwrap();
    assert_eq!(csv.lines().count(), 17);
    assert!(csv.starts_with("n,exact,thm1,thm3,barenco_iten,su2_single,su2_multi\n"));
    println!(
        "AC7 counts reproduction (k=14..29, eps=1e-3; CSV at {}): PASS",
        path.display()
    );
}

#[test]
fn ac8_serialization() {
    let mut rng = ChaCha8Rng::seed_from_u64(800);
    for n in 3..=6usize {
        let k = n - 1;
        let (controls, target, width) = std_wires(k);
        let u = random_unitary(&mut rng);
        let r = mcu::mcu_exact(&u, &controls, target, width).unwrap();

        // JSON round trip is gate-exact
        let back = mcgate::Circuit::from_json(&r.circuit.to_json()).unwrap();
        assert_eq!(back, r.circuit, "JSON round trip at n={n}");

        // QASM re-import through the independent parser matches the ideal
        // gate up to a global phase (per-gate u3 emission drops phases)
        let reimported = qasm::parse_qasm(&qasm::to_qasm(&r.circuit)).unwrap();
        let dim = 1usize << n;
        let cmask: usize = controls.iter().map(|&c| 1 << c).sum();
        // measure the reimported circuit's phase on an active column
        let mut probe = StateVector::basis(n, cmask).unwrap();
        probe.apply_circuit(&reimported).unwrap();
        let mut ideal_probe = StateVector::basis(n, cmask).unwrap();
        ideal_probe.apply_ideal_mcu(&u, &ControlSpec::single(&controls, target));
        let mut phase = C64::new(1.0, 0.0);
        for i in 0..dim {
            if ideal_probe.amps[i].norm() > 0.5 {
                phase = probe.amps[i] / ideal_probe.amps[i];
            }
        }
        assert!((phase.norm() - 1.0).abs() < 1e-9);
        let mut worst = 0.0f64;
        for col in 0..dim {
            let mut measured = StateVector::basis(n, col).unwrap();
            measured.apply_circuit(&reimported).unwrap();
            let mut ideal = StateVector::basis(n, col).unwrap();
            ideal.apply_ideal_mcu(&u, &ControlSpec::single(&controls, target));
            for i in 0..dim {
                worst = worst.max((measured.amps[i] - phase * ideal.amps[i]).norm());
            }
        }
        assert!(worst <= 1e-9, "QASM re-import at n={n}: {worst}");
    }
    println!("AC8 serialization (QASM re-import n<=6; JSON gate-exact): PASS");
}
