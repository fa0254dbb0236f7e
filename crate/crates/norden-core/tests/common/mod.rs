//! Shared helpers for the integration suites: a deterministic generator,
//! central finite differences, and a random expression source.

// shared across several test targets; not every target uses every helper
#![allow(dead_code)]

use norden_core::Expression;

pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }
}

pub const FD_H: f64 = 1e-5;

/// Central difference gradient of an expression's value.
pub fn fd_gradient(e: &Expression, p: &[f64]) -> Vec<f64> {
    let dim = p.len();
    (0..dim)
        .map(|i| {
            let mut hi = p.to_vec();
            let mut lo = p.to_vec();
            hi[i] += FD_H;
            lo[i] -= FD_H;
            (e.eval_value(&hi).unwrap() - e.eval_value(&lo).unwrap()) / (2.0 * FD_H)
        })
        .collect()
}

/// Central difference Hessian (diagonal three-point, mixed four-point).
pub fn fd_hessian(e: &Expression, p: &[f64]) -> Vec<Vec<f64>> {
    let dim = p.len();
    let f = |q: &[f64]| e.eval_value(q).unwrap();
    let mut h = vec![vec![0.0; dim]; dim];
    for i in 0..dim {
        let mut hi = p.to_vec();
        let mut lo = p.to_vec();
        hi[i] += FD_H;
        lo[i] -= FD_H;
        h[i][i] = (f(&hi) - 2.0 * f(p) + f(&lo)) / (FD_H * FD_H);
        for j in i + 1..dim {
            let mut pp = p.to_vec();
            let mut pm = p.to_vec();
            let mut mp = p.to_vec();
            let mut mm = p.to_vec();
            pp[i] += FD_H;
            pp[j] += FD_H;
            pm[i] += FD_H;
            pm[j] -= FD_H;
            mp[i] -= FD_H;
            mp[j] += FD_H;
            mm[i] -= FD_H;
            mm[j] -= FD_H;
            let v = (f(&pp) - f(&pm) - f(&mp) + f(&mm)) / (4.0 * FD_H * FD_H);
            h[i][j] = v;
            h[j][i] = v;
        }
    }
    h
}

/// The comparison rule: relative 1e-4, absolute 1e-7 below 1e-3.
pub fn fd_matches(true_v: f64, fd_v: f64) -> bool {
    let err = (true_v - fd_v).abs();
    if true_v.abs() >= 1e-3 {
        err <= 1e-4 * true_v.abs()
    } else {
        err <= 1e-7
    }
}

/// Random well-formed expression text over `dim` coordinates.
pub fn random_expr_text(rng: &mut SplitMix64, dim: usize, depth: usize) -> String {
    if depth == 0 {
        return match rng.below(3) {
            0 | 1 => format!("x{}", 1 + rng.below(dim as u64)),
            _ => format!("{:.3}", rng.range(0.2, 0.9)),
        };
    }
    let a = random_expr_text(rng, dim, depth - 1);
    let b = random_expr_text(rng, dim, depth - 1);
    match rng.below(10) {
        0 => format!("({a}+{b})"),
        1 => format!("({a}-{b})"),
        2 | 3 => format!("({a}*{b})"),
        4 => format!("({a}/(2+({b})^2))"),
        5 => format!("sin({a})"),
        6 => format!("cos(({a}*{b}))"),
        7 => format!("exp(({a}*{b}))"),
        8 => format!("tanh({a})"),
        _ => format!("({a})^{}", 2 + rng.below(2)),
    }
}
