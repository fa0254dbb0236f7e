//! Acceptance suite: one test per criterion, each printing a pass line with
//! its pinned tolerances. Desk scale throughout: dimensions 4 and 6,
//! 16 low-discrepancy points, seed 42.

mod util;

use std::process::Command;

use norden_core::connection::{self, covariant_derivative, curvature_of, ConnectionField};
use norden_core::lab::{self, q1_closed_form, q2_alpha, q2_rank_one_tensor};
use norden_core::manifold::MetricKind;
use norden_core::tensor::{self, multi_indices, Lower, Scalar, Tensor, Upper};
use norden_core::{Chart, Expression, Frame, QFamily, RunConfig, StatStructure, Status, SuiteId};
use util::*;

fn charts_dims_4_and_6() -> Vec<Chart> {
    vec![
        Chart::flat_kahler(2).unwrap(),
        Chart::flat_kahler(3).unwrap(),
        Chart::conformal_flat(2, "x1*x2").unwrap(),
        Chart::conformal_flat(3, "x1*x2").unwrap(),
    ]
}

fn frames(chart: &Chart, points: usize) -> Vec<Frame> {
    chart
        .sample_points(points, 42)
        .iter()
        .map(|p| chart.frame_at(p).unwrap())
        .collect()
}

#[test]
fn criterion_1_axioms_and_fundamentals() {
    let cfg = RunConfig::default();
    for chart in charts_dims_4_and_6() {
        let reports = lab::run_suite(&chart, SuiteId::Axioms, &cfg).unwrap();
        for r in &reports {
            assert_eq!(r.status, Status::Pass, "{} on {}: {}", r.check_id, chart.name(), r.max_residual);
            assert!(r.max_residual <= 1e-8, "{} on {}: {}", r.check_id, chart.name(), r.max_residual);
        }
    }
    // flat Kahler: F = theta = R0 = 0 at 1e-12
    for n in [2usize, 3] {
        let chart = Chart::flat_kahler(n).unwrap();
        for p in chart.sample_points(16, 42) {
            assert!(chart.tensor_f(&p).unwrap().max_abs() <= 1e-12);
            assert!(chart.lie_forms(&p).unwrap().theta.max_abs() <= 1e-12);
            assert!(chart.curvature_r0(&p, MetricKind::G).unwrap().max_abs() <= 1e-12);
        }
    }
    println!("criterion 1: PASS - axioms, F properties, R0 properties, nabla0 g = 0 at <= 1e-8; flat Kahler exact at <= 1e-12");
}

#[test]
fn criterion_2_jet_and_contraction_correctness() {
    // 1000 random expression/point pairs against central finite differences
    let mut rng = SplitMix64::new(42);
    let dim = 2;
    let mut accepted = 0usize;
    let mut attempts = 0usize;
    while accepted < 1000 {
        attempts += 1;
        assert!(attempts < 400_000, "generator rejection rate too high");
        let text = random_expr_text(&mut rng, dim, 2 + (attempts % 2));
        let expr = Expression::parse(&text, dim).unwrap();
        let p: Vec<f64> = (0..dim).map(|_| rng.range(0.35, 0.9)).collect();
        let Ok(jet) = expr.eval_jet(&p, 3) else { continue };
        if jet.value().abs() > 1.5 {
            continue;
        }
        let free = expr.free_variables();
        let mut usable = true;
        for i in 0..dim {
            if jet.grad(i).abs() > 20.0 {
                usable = false;
            }
            for j in 0..dim {
                let h = jet.hess(i, j);
                if h.abs() > 60.0 || (free.contains(&i) && free.contains(&j) && h.abs() < 0.05) {
                    usable = false;
                }
                for k in 0..dim {
                    if jet.third(i, j, k).abs() > 400.0 {
                        usable = false;
                    }
                }
            }
        }
        if !usable {
            continue;
        }
        accepted += 1;
        let grad = fd_gradient(&expr, &p);
        let hess = fd_hessian(&expr, &p);
        for (i, g_fd) in grad.iter().enumerate() {
            assert!(fd_matches(jet.grad(i), *g_fd), "`{text}` grad[{i}]");
            for (j, h_fd) in hess[i].iter().enumerate() {
                assert!(fd_matches(jet.hess(i, j), *h_fd), "`{text}` hess[{i}{j}]");
            }
        }
    }
    // contraction engine vs naive loops on 100 random tensors
    let mut rng = SplitMix64::new(2024);
    for case in 0..100 {
        let dim = if case % 2 == 0 { 4 } else { 6 };
        let rank = 2 + (case % 3);
        let mut variance = vec![Lower; rank];
        variance[1] = Upper;
        let t = Tensor::from_fn(dim, &variance, |_| rng.range(-1.0, 1.0));
        let c = t.contract(0, 1).unwrap();
        for out_idx in multi_indices(dim, rank - 2) {
            let mut want = 0.0;
            for k in 0..dim {
                let mut full = vec![k, k];
                full.extend_from_slice(&out_idx);
                want += t.get(&full);
            }
            assert!((want - c.get(&out_idx)).abs() <= 1e-13);
        }
    }
    println!("criterion 2: PASS - 1000 jet/FD pairs at rel 1e-4; 100 contraction cases at <= 1e-13");
}

#[test]
fn criterion_3_conjugation_algebra() {
    let chart = Chart::conformal_flat(2, "x1*x2").unwrap();
    for fr in frames(&chart, 16) {
        let nabla = ConnectionField::SeededOffset { seed: 42 };
        // involutions at 1e-12 (both senses)
        let twice_metric = nabla
            .clone()
            .metric_conjugate(MetricKind::G)
            .metric_conjugate(MetricKind::G);
        assert!(connection::coefficient_distance(&fr, &nabla, &twice_metric) <= 1e-12);
        let twice_complex = nabla.clone().complex_conjugate().complex_conjugate();
        assert!(connection::coefficient_distance(&fr, &nabla, &twice_complex) <= 1e-12);
        // curvature pairing: g(R(X,Y)Z,W) + g(R*(X,Y)W,Z) = 0 at 1e-8
        let star = nabla.clone().metric_conjugate(MetricKind::G);
        let r = nabla.curvature(&fr).r04;
        let rs = star.curvature(&fr).r04;
        let dim = fr.dim();
        for idx in multi_indices(dim, 4) {
            let v = r.get(&idx) + rs.get(&[idx[0], idx[1], idx[3], idx[2]]);
            assert!(v.abs() <= 1e-8, "curvature pairing residual {v}");
        }
        // (nabla* g)(JY,JZ) + (nabla g)(Y,Z) = 0 at 1e-9
        let cc = nabla.clone().complex_conjugate();
        let ng = nabla.covariant_derivative(&fr, &fr.g).values();
        let nsg = cc.covariant_derivative(&fr, &fr.g).values();
        let jv = fr.j.values();
        for i in 0..dim {
            for y in 0..dim {
                for z in 0..dim {
                    let mut twisted = 0.0;
                    for a in 0..dim {
                        for b in 0..dim {
                            twisted += nsg.get(&[i, a, b]) * jv.get(&[a, y]) * jv.get(&[b, z]);
                        }
                    }
                    assert!((twisted + ng.get(&[i, y, z])).abs() <= 1e-9);
                }
            }
        }
        // the average of a g-conjugate pair is a metric connection at 1e-9
        let avg = ConnectionField::average(nabla.clone(), star);
        assert!(avg.covariant_derivative(&fr, &fr.g).values().max_abs() <= 1e-9);
    }
    println!("criterion 3: PASS - involutions <= 1e-12, curvature pairing <= 1e-8, J-flip of nabla g <= 1e-9, conjugate average metric <= 1e-9");
}

#[test]
fn criterion_4_section_2_suite() {
    let cfg = RunConfig::default();
    for chart in [Chart::flat_kahler(2).unwrap(), Chart::conformal_flat(2, "x1*x2").unwrap()] {
        // Prop 2.1: identity at 1e-8, implications consistent (pass or skip)
        for r in lab::run_suite(&chart, SuiteId::Prop21, &cfg).unwrap() {
            assert_ne!(r.status, Status::Fail, "{}: {}", r.check_id, r.max_residual);
            if r.check_id.starts_with("prop-2.1:identity") {
                assert_eq!(r.status, Status::Pass);
                assert!(r.max_residual <= 1e-8);
            }
        }
        // Prop 2.2 / Cor 2.2 with nabla0 and nabla~0 at 1e-9
        for r in lab::run_suite(&chart, SuiteId::Cor22, &cfg).unwrap() {
            assert_eq!(r.status, Status::Pass, "{}", r.check_id);
            assert!(r.max_residual <= 1e-9, "{}: {}", r.check_id, r.max_residual);
        }
        for r in lab::run_suite(&chart, SuiteId::Prop22, &cfg).unwrap() {
            assert_eq!(r.status, Status::Pass, "{}: {}", r.check_id, r.max_residual);
        }
        // natural-connection equivalence for D
        for r in lab::run_suite(&chart, SuiteId::Natural, &cfg).unwrap() {
            assert_eq!(r.status, Status::Pass, "{}: {}", r.check_id, r.max_residual);
            if r.check_id == "natural:lich" {
                assert!(r.max_residual <= 1e-9);
            }
        }
    }
    println!("criterion 4: PASS - Prop 2.1 identity <= 1e-8 with consistent implications; Prop 2.2/Cor 2.2 <= 1e-9; D natural");
}

#[test]
fn criterion_5_section_3_suite() {
    let cfg = RunConfig::default();
    let mut any_skip_shown = false;
    for chart in charts_dims_4_and_6() {
        let sec3 = lab::run_suite(&chart, SuiteId::Sec3, &cfg).unwrap();
        for r in &sec3 {
            assert_ne!(r.status, Status::Fail, "{} on {}: {}", r.check_id, chart.name(), r.max_residual);
            match r.check_id.as_str() {
                "sec-3:JR" | "sec-3:P" | "sec-3:K-vs-P" => {
                    assert_eq!(r.status, Status::Pass);
                    assert!(r.max_residual <= 1e-8, "{}: {}", r.check_id, r.max_residual);
                }
                // hypothesis-gated identities pass at 1e-7 where met
                _ => {
                    if r.status == Status::Pass {
                        assert!(r.max_residual <= 1e-7, "{}: {}", r.check_id, r.max_residual);
                    } else {
                        any_skip_shown = true;
                        assert_eq!(r.status, Status::Skipped);
                    }
                }
            }
        }
        // D satisfies Dg = Dg~ = DJ = 0 at 1e-9
        for r in lab::run_suite(&chart, SuiteId::Natural, &cfg).unwrap() {
            if r.check_id == "natural:lich" {
                assert!(r.max_residual <= 1e-9);
            }
        }
        let p32 = lab::run_suite(&chart, SuiteId::Prop32, &cfg).unwrap();
        for r in &p32 {
            assert_ne!(r.status, Status::Fail, "{}: {}", r.check_id, r.max_residual);
            if r.status == Status::Pass {
                assert!(r.max_residual <= 1e-7, "{}: {}", r.check_id, r.max_residual);
            }
        }
        // the conformal charts are W1, so the gated checks must actually run
        if chart.name().starts_with("conformal") {
            let w1 = p32.iter().find(|r| r.check_id == "prop-3.2:r-star").unwrap();
            assert_eq!(w1.status, Status::Pass, "W1 hypothesis must be met on {}", chart.name());
            // and isotropic-omega must be skipped (theta(Omega) != 0):
            // a hypothesis no shipped chart meets is reported, not passed
            let iso = lab::run_suite(&chart, SuiteId::IsotropicOmega, &cfg).unwrap();
            assert_eq!(iso[0].status, Status::Skipped);
            any_skip_shown = true;
        }
    }
    assert!(any_skip_shown, "at least one unmet hypothesis must surface as a skip");
    println!("criterion 5: PASS - JR*/P/K-vs-P <= 1e-8; D natural <= 1e-9; gated scalar-curvature, W1-norm, isotropy-iff and conjugate-curvature closed forms pass at <= 1e-7 or skip");
}

/// One statistical-family evaluation with the difference tensor shared
/// across all checks.
struct FamilyChecks {
    sym: f64,
    nabla_g: f64,
    curv_diff: f64,
    stat_curv: f64,
    weyl_consistent: bool,
    weyl_p_vs_r0: f64,
    l_norm: f64,
    p_vs_r0: f64,
}

fn family_checks(fr: &Frame, pair: &tensor::MetricPair, family: QFamily, lam: [f64; 4]) -> FamilyChecks {
    let dim = fr.dim();
    let q = connection::q_tensor(family, lam, fr);
    let q_low = Tensor::from_fn(dim, &[Lower; 3], |idx| {
        let mut acc = fr.g.get(&[0, idx[2]]).mul(q.get(&[0, idx[0], idx[1]]));
        for m in 1..dim {
            acc = acc.add(&fr.g.get(&[m, idx[2]]).mul(q.get(&[m, idx[0], idx[1]])));
        }
        acc
    });
    let qv = q_low.values();
    let mut sym = 0.0f64;
    for idx in multi_indices(dim, 3) {
        let v = qv.get(&idx);
        sym = sym.max((v - qv.get(&[idx[1], idx[0], idx[2]])).abs());
        sym = sym.max((v - qv.get(&[idx[0], idx[2], idx[1]])).abs());
    }
    let gamma_n = fr.gamma.add(&q).unwrap();
    let gamma_s = fr.gamma.sub(&q).unwrap();
    // nabla g = -2Q
    let ng = covariant_derivative(&gamma_n, &fr.g).values();
    let nabla_g = ng.max_abs_diff(&qv.scale(-2.0));
    // curvatures
    let r = curvature_of(fr, &gamma_n).r04;
    let rs = curvature_of(fr, &gamma_s).r04;
    let r0 = curvature_of(fr, &fr.gamma).r04;
    let p = r.add(&rs).unwrap().scale(0.5);
    // covariant derivative gap of Q versus the curvature difference
    let nq = covariant_derivative(&fr.gamma, &q_low).values();
    let mut curv_diff = 0.0f64;
    for idx in multi_indices(dim, 4) {
        let (x, y, z, w) = (idx[0], idx[1], idx[2], idx[3]);
        let lhs = nq.get(&[x, y, z, w]) - nq.get(&[y, x, z, w]);
        let rhs = 0.5 * (r.get(&idx) - rs.get(&idx));
        curv_diff = curv_diff.max((lhs - rhs).abs());
    }
    // L from the brute-force difference-tensor oracle, built from Q values
    let quv = q.values();
    let gval = fr.g.values();
    let inner = |x: usize, w: usize, y: usize, z: usize| -> f64 {
        let mut acc = 0.0;
        for a in 0..dim {
            for b in 0..dim {
                acc += gval.get(&[a, b]) * quv.get(&[a, x, w]) * quv.get(&[b, y, z]);
            }
        }
        acc
    };
    let l = Tensor::from_fn(dim, &[Lower; 4], |idx| {
        inner(idx[0], idx[3], idx[1], idx[2]) - inner(idx[0], idx[2], idx[1], idx[3])
    });
    let stat_curv = p.max_abs_diff(&r0.add(&l).unwrap());
    // Cor 4.1 biconditional
    let w_p = tensor::weyl(&p, pair).unwrap();
    let w_r0 = tensor::weyl(&r0, pair).unwrap();
    let w_l = tensor::weyl(&l, pair).unwrap();
    let ra = w_p.max_abs_diff(&w_r0);
    let rb = w_l.max_abs();
    let weyl_consistent = (ra <= 1e-8) == (rb <= 1e-8);
    FamilyChecks {
        sym,
        nabla_g,
        curv_diff,
        stat_curv,
        weyl_consistent,
        weyl_p_vs_r0: ra,
        l_norm: l.max_abs(),
        p_vs_r0: p.max_abs_diff(&r0),
    }
}

#[test]
fn criterion_6_section_4_suite() {
    let default_lam = [0.3, -0.7, 0.2, 0.5];
    let mut rng = SplitMix64::new(42);
    let draws: Vec<[f64; 4]> = (0..20).map(|_| random_lambdas(&mut rng)).collect();
    let charts = [
        Chart::flat_kahler(2).unwrap(),
        Chart::conformal_flat(2, "x1*x2").unwrap(),
        Chart::conformal_flat(3, "x1*x2").unwrap(),
    ];
    for chart in &charts {
        let frs = frames(chart, 16);
        let pairs: Vec<_> = frs.iter().map(|f| f.metric_pair()).collect();
        let mut lambdas = vec![default_lam];
        lambdas.extend_from_slice(&draws);
        for lam in &lambdas {
            for family in [QFamily::Q1, QFamily::Q2] {
                for (fr, pair) in frs.iter().zip(&pairs) {
                    let c = family_checks(fr, pair, family, *lam);
                    assert!(c.sym <= 1e-9, "{}: Q symmetry {}", chart.name(), c.sym);
                    assert!(c.nabla_g <= 1e-9, "{}: nabla g + 2Q {}", chart.name(), c.nabla_g);
                    assert!(c.curv_diff <= 1e-8, "{}: curvature difference {}", chart.name(), c.curv_diff);
                    assert!(c.stat_curv <= 1e-8, "{}: P = R0 + L {}", chart.name(), c.stat_curv);
                    assert!(c.weyl_consistent, "{}: Cor 4.1 inconsistent", chart.name());
                    // Prop 4.6 isotropic-Omega consequence where the
                    // hypothesis holds
                    if family == QFamily::Q2
                        && fr.theta_omega().abs() <= 1e-8
                        && fr.theta_j_omega().abs() <= 1e-8
                    {
                        assert!(c.l_norm <= 1e-8);
                        assert!(c.p_vs_r0 <= 1e-8);
                    }
                }
                // Prop 4.4: lambda3 = lambda4 = 0 forces W(P) = W(R0)
                if family == QFamily::Q1 {
                    let lam44 = [lam[0], lam[1], 0.0, 0.0];
                    for (fr, pair) in frs.iter().zip(&pairs).take(4) {
                        let c = family_checks(fr, pair, QFamily::Q1, lam44);
                        assert!(c.weyl_p_vs_r0 <= 1e-8, "{}: Prop 4.4 {}", chart.name(), c.weyl_p_vs_r0);
                    }
                }
            }
        }
    }
    println!("criterion 6: PASS - Q symmetry and nabla g = -2Q <= 1e-9, curvature-difference and P = R0 + L <= 1e-8, Cor 4.1 consistent, Prop 4.4 <= 1e-8, Prop 4.6 consequence <= 1e-8 (default lambda + 20 draws)");
}

#[test]
fn criterion_7_closed_form_audits() {
    // the R5 brute-force oracle is ground truth; the reconstructed closed
    // forms must match it; the printed forms are recorded for comparison
    let mut rng = SplitMix64::new(777);
    let charts = [
        Chart::conformal_flat(2, "x1*x2").unwrap(), // theta(Omega) != 0
        Chart::sheared(2).unwrap(),                 // theta(J Omega) != 0
    ];
    let mut printed_q1_worst = 0.0f64;
    let mut printed_q2_worst = 0.0f64;
    for chart in &charts {
        let frs = frames(chart, 4);
        let pairs: Vec<_> = frs.iter().map(|f| f.metric_pair()).collect();
        for _ in 0..20 {
            let lam = random_lambdas(&mut rng);
            for (fr, pair) in frs.iter().zip(&pairs) {
                let s1 = StatStructure::new(QFamily::Q1, lam);
                let oracle = s1.l_from_q(fr);
                assert!(
                    oracle.max_abs_diff(&q1_closed_form(fr, pair, lam)) <= 1e-10,
                    "{}: Prop 4.3 reconstructed form",
                    chart.name()
                );
                printed_q1_worst = printed_q1_worst
                    .max(oracle.max_abs_diff(&lab::q1_closed_form_printed(fr, pair, lam)));
                let s2 = StatStructure::new(QFamily::Q2, lam);
                let oracle2 = s2.l_from_q(fr);
                let e = q2_rank_one_tensor(fr);
                let alpha = q2_alpha(lam, fr.theta_omega(), fr.theta_j_omega());
                assert!(
                    oracle2.max_abs_diff(&e.scale(alpha)) <= 1e-10,
                    "{}: Prop 4.6 reconstructed alpha",
                    chart.name()
                );
                let alpha_p = lab::q2_alpha_printed(lam, fr.theta_omega(), fr.theta_j_omega());
                printed_q2_worst = printed_q2_worst.max(oracle2.max_abs_diff(&e.scale(alpha_p)));
            }
        }
    }
    // the derived correction is real: the printed forms disagree with the
    // oracle where their cross terms activate
    assert!(printed_q1_worst > 1e-4, "printed S1/S2 bracket should disagree: {printed_q1_worst}");
    assert!(printed_q2_worst > 1e-4, "printed alpha sign should disagree: {printed_q2_worst}");
    println!("criterion 7: PASS - reconstructed closed forms match the difference-tensor oracle at <= 1e-10 over 20 random draws");
    println!("  audit record: printed S1/S2 worst residual {printed_q1_worst:.3e} (cross brackets must read theta(X)theta(JY)+theta(JX)theta(Y), S2 cross sign +)");
    println!("  audit record: printed alpha worst residual {printed_q2_worst:.3e} (theta(J Omega) coefficient must read -(l1 l2 - l3 l4))");
}

#[test]
fn criterion_8_cli_contract() {
    let bin = env!("CARGO_BIN_EXE_norden");
    let dir = tempfile::tempdir().unwrap();
    // generate the flat Kahler file with the builtin command
    let out = Command::new(bin)
        .args(["builtin", "flat-kahler", "--n", "2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let file = dir.path().join("flat_kahler_4.json");
    std::fs::write(&file, &out.stdout).unwrap();
    // check --suite all: exit 0, everything pass-or-skip
    let out = Command::new(bin)
        .args(["check", file.to_str().unwrap(), "--suite", "all", "--json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let rows: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for row in rows.as_array().unwrap() {
        let status = row["status"].as_str().unwrap();
        assert!(status == "pass" || status == "skipped", "{row}");
    }
    // byte-identical across two runs with the same config
    let rerun = Command::new(bin)
        .args(["check", file.to_str().unwrap(), "--suite", "all", "--json"])
        .output()
        .unwrap();
    assert_eq!(out.stdout, rerun.stdout);
    // malformed files exit 2 with a located diagnostic
    let bad = dir.path().join("broken.json");
    let mut v: serde_json::Value = serde_json::from_slice(&std::fs::read(&file).unwrap()).unwrap();
    v["g"][0][1] = serde_json::Value::String("1+".to_string());
    std::fs::write(&bad, serde_json::to_string(&v).unwrap()).unwrap();
    let out = Command::new(bin)
        .args(["validate", bad.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("g[0][1]"), "{err}");
    println!("criterion 8: PASS - check --suite all exits 0 pass-or-skip, byte-identical JSON, located diagnostics at exit 2");
}
