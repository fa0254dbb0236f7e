//! Chart-level quantities against finite-difference oracles: Christoffel
//! symbols from differenced metric entries, curvature from differenced
//! coefficients, and the Nijenhuis tensor from differenced J entries.

mod common;

use common::FD_H;
use norden_core::manifold::{Chart, MetricKind};
use norden_core::tensor::{Lower, Tensor, Upper};

/// g entries at a point, by direct value evaluation.
fn g_values(chart: &Chart, p: &[f64]) -> Vec<f64> {
    chart
        .g_exprs()
        .iter()
        .map(|e| e.eval_value(p).unwrap())
        .collect()
}

fn j_values(chart: &Chart, p: &[f64]) -> Vec<f64> {
    chart
        .j_exprs()
        .iter()
        .map(|e| e.eval_value(p).unwrap())
        .collect()
}

fn invert(m: &[f64], n: usize) -> Vec<f64> {
    // small unpivoted Gauss-Jordan is fine for these well-conditioned tests
    let mut a = m.to_vec();
    let mut inv = vec![0.0; n * n];
    for i in 0..n {
        inv[i * n + i] = 1.0;
    }
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if a[r * n + col].abs() > a[piv * n + col].abs() {
                piv = r;
            }
        }
        for k in 0..n {
            a.swap(col * n + k, piv * n + k);
            inv.swap(col * n + k, piv * n + k);
        }
        let d = a[col * n + col];
        for k in 0..n {
            a[col * n + k] /= d;
            inv[col * n + k] /= d;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a[r * n + col];
            for k in 0..n {
                a[r * n + k] -= f * a[col * n + k];
                inv[r * n + k] -= f * inv[col * n + k];
            }
        }
    }
    inv
}

#[test]
fn christoffel_matches_fd_of_metric_entries() {
    let chart = Chart::conformal_flat(2, "x1*x2").unwrap();
    let dim = 4;
    for p in chart.sample_points(4, 42) {
        let gamma = chart.levi_civita(&p, MetricKind::G, 0).unwrap().values();
        // dg[i][j][k] = d_k g_ij by central differences of the entries
        let mut dg = vec![0.0; dim * dim * dim];
        for k in 0..dim {
            let mut hi = p.clone();
            let mut lo = p.clone();
            hi[k] += FD_H;
            lo[k] -= FD_H;
            let ghi = g_values(&chart, &hi);
            let glo = g_values(&chart, &lo);
            for i in 0..dim {
                for j in 0..dim {
                    dg[(i * dim + j) * dim + k] = (ghi[i * dim + j] - glo[i * dim + j]) / (2.0 * FD_H);
                }
            }
        }
        let ginv = invert(&g_values(&chart, &p), dim);
        for k in 0..dim {
            for i in 0..dim {
                for j in 0..dim {
                    let mut want = 0.0;
                    for l in 0..dim {
                        want += 0.5
                            * ginv[k * dim + l]
                            * (dg[(j * dim + l) * dim + i] + dg[(i * dim + l) * dim + j]
                                - dg[(i * dim + j) * dim + l]);
                    }
                    let got = *gamma.get(&[k, i, j]);
                    let scale = want.abs().max(1e-3);
                    assert!(
                        (want - got).abs() <= 1e-4 * scale,
                        "Gamma^{k}_{i}{j}: fd {want} vs jet {got}"
                    );
                }
            }
        }
    }
}

#[test]
fn curvature_matches_fd_of_christoffel_field() {
    let chart = Chart::conformal_flat(2, "x1*x2").unwrap();
    let dim = 4;
    let p = chart.sample_points(1, 42)[0].clone();
    let gamma0 = chart.levi_civita(&p, MetricKind::G, 0).unwrap().values();
    // dGamma[l][j][k][i] = d_i Gamma^l_{jk} by central differences of the
    // exactly evaluated coefficient field
    let mut dgamma = vec![0.0; dim * dim * dim * dim];
    for i in 0..dim {
        let mut hi = p.clone();
        let mut lo = p.clone();
        hi[i] += FD_H;
        lo[i] -= FD_H;
        let ga = chart.levi_civita(&hi, MetricKind::G, 0).unwrap().values();
        let gb = chart.levi_civita(&lo, MetricKind::G, 0).unwrap().values();
        for l in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    dgamma[((l * dim + j) * dim + k) * dim + i] =
                        (ga.get(&[l, j, k]) - gb.get(&[l, j, k])) / (2.0 * FD_H);
                }
            }
        }
    }
    let r0 = chart.curvature_r0(&p, MetricKind::G).unwrap();
    let g = g_values(&chart, &p);
    for i in 0..dim {
        for j in 0..dim {
            for k in 0..dim {
                for w in 0..dim {
                    let mut up = vec![0.0; dim];
                    for (l, u) in up.iter_mut().enumerate() {
                        let mut acc = dgamma[((l * dim + j) * dim + k) * dim + i]
                            - dgamma[((l * dim + i) * dim + k) * dim + j];
                        for m in 0..dim {
                            acc += gamma0.get(&[l, i, m]) * gamma0.get(&[m, j, k]);
                            acc -= gamma0.get(&[l, j, m]) * gamma0.get(&[m, i, k]);
                        }
                        *u = acc;
                    }
                    let want: f64 = (0..dim).map(|l| g[l * dim + w] * up[l]).sum();
                    let got = *r0.get(&[i, j, k, w]);
                    assert!(
                        (want - got).abs() <= 1e-3 * want.abs().max(1.0),
                        "R0[{i}{j}{k}{w}]: fd {want} vs jet {got}"
                    );
                }
            }
        }
    }
}

#[test]
fn nijenhuis_matches_fd_of_j_entries() {
    let chart = Chart::sheared(2).unwrap();
    let dim = 4;
    for p in chart.sample_points(3, 42) {
        let jv = Tensor::from_fn(dim, &[Upper, Lower], |idx| {
            j_values(&chart, &p)[idx[0] * dim + idx[1]]
        });
        // dj[k][j][i] = d_i J^k_j from differenced entries
        let mut dj = vec![0.0; dim * dim * dim];
        for i in 0..dim {
            let mut hi = p.clone();
            let mut lo = p.clone();
            hi[i] += FD_H;
            lo[i] -= FD_H;
            let ja = j_values(&chart, &hi);
            let jb = j_values(&chart, &lo);
            for k in 0..dim {
                for j in 0..dim {
                    dj[(k * dim + j) * dim + i] = (ja[k * dim + j] - jb[k * dim + j]) / (2.0 * FD_H);
                }
            }
        }
        let got = chart.nijenhuis(&p).unwrap();
        let want = Tensor::from_fn(dim, &[Upper, Lower, Lower], |idx| {
            let (k, i, j) = (idx[0], idx[1], idx[2]);
            let mut acc = 0.0;
            for m in 0..dim {
                acc += jv.get(&[m, i]) * dj[(k * dim + j) * dim + m];
                acc -= jv.get(&[m, j]) * dj[(k * dim + i) * dim + m];
                acc += jv.get(&[k, m]) * (dj[(m * dim + i) * dim + j] - dj[(m * dim + j) * dim + i]);
            }
            acc
        });
        assert!(
            got.max_abs_diff(&want) <= 1e-4,
            "nijenhuis fd mismatch: {}",
            got.max_abs_diff(&want)
        );
    }
}

#[test]
fn frame_identities_hold_at_16_points_on_both_builtins() {
    // structural axioms, F properties, curvature-like R0 and nabla0 g = 0 at
    // 16 seeded points, dims 4 and 6
    for chart in [
        Chart::flat_kahler(2).unwrap(),
        Chart::flat_kahler(3).unwrap(),
        Chart::conformal_flat(2, "x1*x2").unwrap(),
        Chart::conformal_flat(3, "x1*x2").unwrap(),
        Chart::sheared(2).unwrap(),
        Chart::sheared(3).unwrap(),
        Chart::boosted(2).unwrap(),
        Chart::boosted(3).unwrap(),
    ] {
        let cfg = norden_core::RunConfig::default();
        let reports = norden_core::lab::run_suite(&chart, norden_core::SuiteId::Axioms, &cfg).unwrap();
        for r in reports {
            assert_eq!(
                r.status,
                norden_core::Status::Pass,
                "{} on {}: residual {}",
                r.check_id,
                chart.name(),
                r.max_residual
            );
        }
    }
}
