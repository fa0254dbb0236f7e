//! Chart-level structure of an almost Norden manifold.
//!
//! A [`Chart`] is a presentation by expression matrices: a symmetric metric
//! `g` and an almost complex structure `J` over a coordinate box. At any
//! interior point a [`Frame`] evaluates everything the identity suites
//! need — `g`, `J`, the twin metric, their inverses, the Levi-Civita
//! coefficients of both metrics, the fundamental tensor
//! `F(X,Y,Z) = g((nabla0_X J)Y, Z)`, the Lie form and vector — all as jets,
//! so first derivatives of every derived tensor are exact.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::expr::{EvalError, Expression, ParseError};
use crate::jet::Jet;
use crate::linalg::{self, LinalgError};
use crate::tensor::{Lower, MetricPair, Scalar, Tensor, TensorError, Upper};

#[derive(Clone, Debug)]
pub enum ChartError {
    InvalidHalfDimension(usize),
    DomainShape { expected: usize, got: usize },
    MatrixShape { matrix: &'static str, expected: usize, got: usize },
    EmptyDomainInterval { coord: usize },
    PointShape { expected: usize, got: usize },
    PointOutsideDomain { coord: usize, value: f64 },
    OrderBudget { requested: usize, max: usize },
    /// An expression entry failed to evaluate.
    Entry { matrix: &'static str, row: usize, col: usize, source: EvalError },
    /// Structural axiom violation (J^2, Norden compatibility, symmetry,
    /// signature, conditioning), with the worst entry named inside.
    Axiom(TensorError),
    Parse(ParseError),
    /// `g[i][j]` and `g[j][i]` evaluate differently.
    AsymmetricEntry { row: usize, col: usize, residual: f64 },
}

impl fmt::Display for ChartError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChartError::InvalidHalfDimension(n) => {
                write!(f, "half-dimension n = {n} unsupported (need 2..=6)")
            }
            ChartError::DomainShape { expected, got } => {
                write!(f, "domain has {got} intervals, expected {expected}")
            }
            ChartError::MatrixShape { matrix, expected, got } => {
                write!(f, "{matrix} matrix has {got} entries, expected {expected}")
            }
            ChartError::EmptyDomainInterval { coord } => {
                write!(f, "empty domain interval for coordinate x{}", coord + 1)
            }
            ChartError::PointShape { expected, got } => {
                write!(f, "point has {got} coordinates, expected {expected}")
            }
            ChartError::PointOutsideDomain { coord, value } => {
                write!(f, "coordinate x{} = {value} outside the chart domain", coord + 1)
            }
            ChartError::OrderBudget { requested, max } => {
                write!(f, "jet order {requested} exceeds the available budget {max}")
            }
            ChartError::Entry { matrix, row, col, source } => {
                write!(f, "{matrix}[{row}][{col}]: {source}")
            }
            ChartError::Axiom(e) => write!(f, "chart axiom violation: {e}"),
            ChartError::Parse(e) => write!(f, "{e}"),
            ChartError::AsymmetricEntry { row, col, residual } => write!(
                f,
                "g[{row}][{col}] and g[{col}][{row}] differ by {residual:.3e}"
            ),
        }
    }
}

impl core::error::Error for ChartError {}

impl From<TensorError> for ChartError {
    fn from(e: TensorError) -> Self {
        ChartError::Axiom(e)
    }
}

impl From<ParseError> for ChartError {
    fn from(e: ParseError) -> Self {
        ChartError::Parse(e)
    }
}

impl From<LinalgError> for ChartError {
    fn from(e: LinalgError) -> Self {
        ChartError::Axiom(TensorError::Linalg(e))
    }
}

/// Default tolerance for the structural axioms (eq-level identities checked
/// at chart validation time).
pub const AXIOM_TOL: f64 = 1e-10;

/// An almost Norden manifold presentation on a coordinate box.
#[derive(Clone, Debug)]
pub struct Chart {
    name: String,
    n: usize,
    domain: Vec<(f64, f64)>,
    g_exprs: Vec<Expression>,
    j_exprs: Vec<Expression>,
}

impl Chart {
    /// Generic chart from parsed expression matrices (row-major, `2n x 2n`).
    pub fn new(
        name: &str,
        n: usize,
        domain: Vec<(f64, f64)>,
        g_exprs: Vec<Expression>,
        j_exprs: Vec<Expression>,
    ) -> Result<Chart, ChartError> {
        if !(2..=6).contains(&n) {
            return Err(ChartError::InvalidHalfDimension(n));
        }
        let dim = 2 * n;
        if domain.len() != dim {
            return Err(ChartError::DomainShape { expected: dim, got: domain.len() });
        }
        for (c, (lo, hi)) in domain.iter().enumerate() {
            // also rejects NaN bounds
            if matches!(lo.partial_cmp(hi), Some(core::cmp::Ordering::Less)) {
                continue;
            }
            return Err(ChartError::EmptyDomainInterval { coord: c });
        }
        if g_exprs.len() != dim * dim {
            return Err(ChartError::MatrixShape { matrix: "g", expected: dim * dim, got: g_exprs.len() });
        }
        if j_exprs.len() != dim * dim {
            return Err(ChartError::MatrixShape { matrix: "J", expected: dim * dim, got: j_exprs.len() });
        }
        Ok(Chart {
            name: name.to_string(),
            n,
            domain,
            g_exprs,
            j_exprs,
        })
    }

    /// Parse string matrices and build a chart.
    pub fn from_strings(
        name: &str,
        n: usize,
        domain: Vec<(f64, f64)>,
        g: &[&str],
        j: &[&str],
    ) -> Result<Chart, ChartError> {
        let dim = 2 * n;
        let parse_all = |entries: &[&str]| -> Result<Vec<Expression>, ChartError> {
            entries
                .iter()
                .map(|s| Expression::parse(s, dim).map_err(ChartError::Parse))
                .collect()
        };
        Chart::new(name, n, domain, parse_all(g)?, parse_all(j)?)
    }

    fn standard_j_strings(n: usize) -> Vec<String> {
        let dim = 2 * n;
        let mut j = vec!["0".to_string(); dim * dim];
        for i in 0..n {
            j[(n + i) * dim + i] = "1".to_string();
            j[i * dim + (n + i)] = "-1".to_string();
        }
        j
    }

    fn standard_domain(dim: usize) -> Vec<(f64, f64)> {
        vec![(-0.5, 0.5); dim]
    }

    /// Flat Kahler Norden chart: `g = diag(I_n, -I_n)`, `J e_i = e_{n+i}`,
    /// `J e_{n+i} = -e_i`. Everything covariant vanishes: `F = theta = R0 = 0`.
    pub fn flat_kahler(n: usize) -> Result<Chart, ChartError> {
        let dim = 2 * n;
        let mut g = vec!["0".to_string(); dim * dim];
        for i in 0..dim {
            g[i * dim + i] = if i < n { "1".to_string() } else { "-1".to_string() };
        }
        let j = Self::standard_j_strings(n);
        let gs: Vec<&str> = g.iter().map(|s| s.as_str()).collect();
        let js: Vec<&str> = j.iter().map(|s| s.as_str()).collect();
        Chart::from_strings(&format!("flat_kahler_{dim}"), n, Self::standard_domain(dim), &gs, &js)
    }

    /// Conformally flat chart `g = exp(2u) diag(I_n, -I_n)` with constant `J`.
    /// `u` is an expression in the chart coordinates.
    pub fn conformal_flat(n: usize, u: &str) -> Result<Chart, ChartError> {
        let dim = 2 * n;
        // validate u on its own for a clean error position
        Expression::parse(u, dim)?;
        let mut g = vec!["0".to_string(); dim * dim];
        for i in 0..dim {
            g[i * dim + i] = if i < n {
                format!("exp(2*({u}))")
            } else {
                format!("-exp(2*({u}))")
            };
        }
        let j = Self::standard_j_strings(n);
        let gs: Vec<&str> = g.iter().map(|s| s.as_str()).collect();
        let js: Vec<&str> = j.iter().map(|s| s.as_str()).collect();
        Chart::from_strings(&format!("conformal_flat_{dim}"), n, Self::standard_domain(dim), &gs, &js)
    }

    /// A non-integrable example: the flat structure pushed through the
    /// unipotent shear `T = I + x3 E_{1,2} + x1 E_{n+1,n+2}`, so
    /// `g = (I-N)^T g0 (I-N)` and `J = (I+N) J0 (I-N)`. The Nijenhuis tensor
    /// does not vanish and the chart sits in none of the basic classes,
    /// which makes it the canonical hypothesis-not-met fixture.
    pub fn sheared(n: usize) -> Result<Chart, ChartError> {
        if !(2..=6).contains(&n) {
            return Err(ChartError::InvalidHalfDimension(n));
        }
        let dim = 2 * n;
        let mut g = vec!["0".to_string(); dim * dim];
        for i in 0..dim {
            g[i * dim + i] = if i < n { "1".to_string() } else { "-1".to_string() };
        }
        // upper block shear by x3 on (0,1); lower block shear by x1 on (n, n+1)
        g[1] = "-x3".to_string();
        g[dim] = "-x3".to_string();
        g[dim + 1] = "1+x3^2".to_string();
        g[n * dim + n + 1] = "x1".to_string();
        g[(n + 1) * dim + n] = "x1".to_string();
        g[(n + 1) * dim + n + 1] = "-1-x1^2".to_string();
        let mut j = Self::standard_j_strings(n);
        j[n + 1] = "x1-x3".to_string();
        j[n * dim + 1] = "x1-x3".to_string();
        let gs: Vec<&str> = g.iter().map(|s| s.as_str()).collect();
        let js: Vec<&str> = j.iter().map(|s| s.as_str()).collect();
        Chart::from_strings(&format!("sheared_{dim}"), n, Self::standard_domain(dim), &gs, &js)
    }

    /// A constant flat metric with `J` boosted pointwise in the
    /// `(x1, x_{n+1})` plane by rapidity `2*x2`. The metric trace of
    /// `dJ` vanishes, so `theta = 0` while `F != 0`: the canonical
    /// Lie-form-free, non-Kahler fixture.
    pub fn boosted(n: usize) -> Result<Chart, ChartError> {
        if !(2..=6).contains(&n) {
            return Err(ChartError::InvalidHalfDimension(n));
        }
        let dim = 2 * n;
        let mut g = vec!["0".to_string(); dim * dim];
        for i in 0..dim {
            g[i * dim + i] = if i < n { "1".to_string() } else { "-1".to_string() };
        }
        let mut j = Self::standard_j_strings(n);
        j[0] = "sinh(2*x2)".to_string();
        j[n * dim] = "cosh(2*x2)".to_string();
        j[n] = "-cosh(2*x2)".to_string();
        j[n * dim + n] = "-sinh(2*x2)".to_string();
        let gs: Vec<&str> = g.iter().map(|s| s.as_str()).collect();
        let js: Vec<&str> = j.iter().map(|s| s.as_str()).collect();
        Chart::from_strings(&format!("boosted_{dim}"), n, Self::standard_domain(dim), &gs, &js)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn half_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn domain(&self) -> &[(f64, f64)] {
        &self.domain
    }

    pub fn g_exprs(&self) -> &[Expression] {
        &self.g_exprs
    }

    pub fn j_exprs(&self) -> &[Expression] {
        &self.j_exprs
    }

    fn check_point(&self, p: &[f64]) -> Result<(), ChartError> {
        if p.len() != self.dim() {
            return Err(ChartError::PointShape { expected: self.dim(), got: p.len() });
        }
        for (c, (&x, &(lo, hi))) in p.iter().zip(&self.domain).enumerate() {
            if x < lo || x > hi {
                return Err(ChartError::PointOutsideDomain { coord: c, value: x });
            }
        }
        Ok(())
    }

    /// Deterministic low-discrepancy sample points (Halton, prime bases per
    /// coordinate) mapped into the domain box; `seed` selects the offset
    /// into the sequence.
    pub fn sample_points(&self, count: usize, seed: u64) -> Vec<Vec<f64>> {
        let dim = self.dim();
        let offset = 101 + seed % 8191;
        (0..count)
            .map(|k| {
                (0..dim)
                    .map(|c| {
                        let h = halton(offset + k as u64, PRIMES[c]);
                        let (lo, hi) = self.domain[c];
                        lo + (hi - lo) * h
                    })
                    .collect()
            })
            .collect()
    }

    fn eval_matrix(
        &self,
        which: &'static str,
        p: &[f64],
        order: usize,
    ) -> Result<Vec<Jet>, ChartError> {
        let dim = self.dim();
        let exprs = if which == "g" { &self.g_exprs } else { &self.j_exprs };
        let mut out = Vec::with_capacity(dim * dim);
        for row in 0..dim {
            for col in 0..dim {
                let e = &exprs[row * dim + col];
                let j = e
                    .eval_jet(p, order)
                    .map_err(|source| ChartError::Entry { matrix: which, row, col, source })?;
                out.push(j);
            }
        }
        Ok(out)
    }

    /// Metric pair at `p` as jets of the requested order, with the Norden
    /// axioms validated at the value level.
    pub fn metric_pair_at(&self, p: &[f64], order: usize) -> Result<JetMetricPair, ChartError> {
        self.check_point(p)?;
        if order > 3 {
            return Err(ChartError::OrderBudget { requested: order, max: 3 });
        }
        let dim = self.dim();
        let g_entries = self.eval_matrix("g", p, order)?;
        let j_entries = self.eval_matrix("J", p, order)?;
        // symmetric positions must agree numerically
        for i in 0..dim {
            for j in i + 1..dim {
                let d = (g_entries[i * dim + j].value() - g_entries[j * dim + i].value()).abs();
                if d > 1e-12 {
                    return Err(ChartError::AsymmetricEntry { row: i, col: j, residual: d });
                }
            }
        }
        let g = Tensor::from_fn(dim, &[Lower, Lower], |idx| {
            g_entries[idx[0] * dim + idx[1]].clone()
        });
        let j = Tensor::from_fn(dim, &[Upper, Lower], |idx| {
            j_entries[idx[0] * dim + idx[1]].clone()
        });
        // validate axioms on the value parts (this also rejects singular
        // and badly conditioned metrics)
        MetricPair::new(g.values(), j.values(), AXIOM_TOL)?;
        let g_inv = invert_jet_matrix(&g)?;
        // g~_{ij} = g_{ia} J^a_j
        let g_tilde = mat_mul_ll(&g, &j);
        let g_tilde_inv = invert_jet_matrix(&g_tilde)?;
        Ok(JetMetricPair { g, g_tilde, g_inv, g_tilde_inv, j })
    }

    /// Full evaluation frame at `p`: all derived tensors at jet order 2
    /// (coefficients differentiable once more), entries at order 3.
    pub fn frame_at(&self, p: &[f64]) -> Result<Frame, ChartError> {
        let pair3 = self.metric_pair_at(p, 3)?;
        Ok(Frame::build(self.n, p.to_vec(), pair3))
    }

    /// Levi-Civita coefficients of `g` or the twin metric at jet order
    /// `order` (at most 2: one order is consumed by the metric derivative).
    pub fn levi_civita(
        &self,
        p: &[f64],
        which: MetricKind,
        order: usize,
    ) -> Result<Tensor<Jet>, ChartError> {
        if order + 1 > 3 {
            return Err(ChartError::OrderBudget { requested: order + 1, max: 3 });
        }
        let pair = self.metric_pair_at(p, order + 1)?;
        let (h, hinv) = match which {
            MetricKind::G => (&pair.g, invert_jet_matrix(&truncate_tensor(&pair.g, order))?),
            MetricKind::GTilde => (
                &pair.g_tilde,
                invert_jet_matrix(&truncate_tensor(&pair.g_tilde, order))?,
            ),
        };
        Ok(christoffel(h, &hinv))
    }

    /// Fundamental tensor `F` at `p` (point values).
    pub fn tensor_f(&self, p: &[f64]) -> Result<Tensor<f64>, ChartError> {
        Ok(self.frame_at(p)?.f.values())
    }

    /// Lie form, its `J`-twist and the Lie vector at `p` (point values).
    pub fn lie_forms(&self, p: &[f64]) -> Result<LieForms, ChartError> {
        let fr = self.frame_at(p)?;
        Ok(LieForms {
            theta: fr.theta.values(),
            theta_j: fr.theta_j.values(),
            omega: fr.omega.values(),
        })
    }

    /// Classification residuals against the basic-class characteristic
    /// conditions, with memberships decided at `threshold`.
    pub fn classify(&self, p: &[f64], threshold: f64) -> Result<ClassReport, ChartError> {
        Ok(self.frame_at(p)?.classify(threshold))
    }

    /// Curvature (0,4) tensor of the Levi-Civita connection of `g` or of the
    /// twin metric, lowered with the same metric that generated it.
    pub fn curvature_r0(&self, p: &[f64], which: MetricKind) -> Result<Tensor<f64>, ChartError> {
        let fr = self.frame_at(p)?;
        Ok(match which {
            MetricKind::G => curvature_lowered(&fr.gamma, &fr.g),
            MetricKind::GTilde => curvature_lowered(&fr.gamma_tilde, &fr.g_tilde),
        })
    }

    /// Both square-norm contractions of `nabla0 J` and the isotropy flag.
    pub fn nabla0j_norms(&self, p: &[f64], tol: f64) -> Result<NormReport, ChartError> {
        Ok(self.frame_at(p)?.nabla0j_norms(tol))
    }

    /// Nijenhuis tensor (1,2) of `J` at `p`.
    pub fn nijenhuis(&self, p: &[f64]) -> Result<Tensor<f64>, ChartError> {
        Ok(self.frame_at(p)?.nijenhuis())
    }
}

/// Selects one of the twin Norden metrics.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MetricKind {
    G,
    GTilde,
}

/// Metric pair evaluated as jets.
#[derive(Clone, Debug)]
pub struct JetMetricPair {
    pub g: Tensor<Jet>,
    pub g_tilde: Tensor<Jet>,
    pub g_inv: Tensor<Jet>,
    pub g_tilde_inv: Tensor<Jet>,
    pub j: Tensor<Jet>,
}

#[derive(Clone, Debug)]
pub struct LieForms {
    pub theta: Tensor<f64>,
    pub theta_j: Tensor<f64>,
    pub omega: Tensor<f64>,
}

#[derive(Clone, Debug)]
pub struct NormReport {
    pub norm_sq: f64,
    pub norm_sq_alt: f64,
    pub isotropic: bool,
}

/// Residuals of the characteristic class conditions and the memberships
/// they imply at a threshold.
#[derive(Clone, Debug)]
pub struct ClassReport {
    pub residual_w0: f64,
    pub residual_w1: f64,
    pub residual_w2_cyclic: f64,
    pub residual_theta: f64,
    pub residual_w3_cyclic: f64,
    pub residual_w12_cyclic: f64,
    pub threshold: f64,
    pub member_w0: bool,
    pub member_w1: bool,
    pub member_w2: bool,
    pub member_w3: bool,
    pub member_w12: bool,
}

const PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn halton(index: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    let mut i = index;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

pub(crate) fn invert_jet_matrix(m: &Tensor<Jet>) -> Result<Tensor<Jet>, ChartError> {
    let dim = m.dim();
    let inv = linalg::invert_jets(m.components(), dim)?;
    Ok(Tensor::from_fn(dim, &[Upper, Upper], |idx| {
        inv[idx[0] * dim + idx[1]].clone()
    }))
}

pub(crate) fn truncate_tensor(t: &Tensor<Jet>, order: usize) -> Tensor<Jet> {
    Tensor::from_fn(t.dim(), t.variance(), |idx| t.get(idx).truncate(order))
}

/// g~_{ij} = g_{ia} J^a_j as jets.
fn mat_mul_ll(g: &Tensor<Jet>, j: &Tensor<Jet>) -> Tensor<Jet> {
    let dim = g.dim();
    Tensor::from_fn(dim, &[Lower, Lower], |idx| {
        let mut acc = g.get(&[idx[0], 0]).mul(j.get(&[0, idx[1]]));
        for a in 1..dim {
            acc = acc.add(&g.get(&[idx[0], a]).mul(j.get(&[a, idx[1]])));
        }
        acc
    })
}

/// Christoffel symbols of `h` (jets one order below `h`):
/// `G^k_{ij} = h^{kl} (d_i h_{jl} + d_j h_{il} - d_l h_{ij}) / 2`.
/// `hinv` must already be at the target order.
pub(crate) fn christoffel(h: &Tensor<Jet>, hinv: &Tensor<Jet>) -> Tensor<Jet> {
    let dim = h.dim();
    Tensor::from_fn(dim, &[Upper, Lower, Lower], |idx| {
        let (k, i, j) = (idx[0], idx[1], idx[2]);
        let mut acc: Option<Jet> = None;
        for l in 0..dim {
            let term = h
                .get(&[j, l])
                .derivative(i)
                .add(&h.get(&[i, l]).derivative(j))
                .sub(&h.get(&[i, j]).derivative(l));
            let term = hinv.get(&[k, l]).mul(&term);
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term),
            });
        }
        acc.expect("dim >= 1").scale(0.5)
    })
}

/// `(nabla_i J)^k_j = d_i J^k_j + G^k_{il} J^l_j - G^l_{ij} J^k_l` as jets
/// one order below `j3`.
pub(crate) fn nabla_j(gamma: &Tensor<Jet>, j3: &Tensor<Jet>, j2: &Tensor<Jet>) -> Tensor<Jet> {
    let dim = gamma.dim();
    Tensor::from_fn(dim, &[Upper, Lower, Lower], |idx| {
        let (k, i, j) = (idx[0], idx[1], idx[2]);
        let mut acc = j3.get(&[k, j]).derivative(i);
        for l in 0..dim {
            acc = acc.add(&gamma.get(&[k, i, l]).mul(j2.get(&[l, j])));
            acc = acc.sub(&gamma.get(&[l, i, j]).mul(j2.get(&[k, l])));
        }
        acc
    })
}

/// Coordinate curvature of connection coefficients given as jets
/// (order >= 1), lowered with the value part of `h`:
/// `R^l_{ijk} = d_i G^l_{jk} - d_j G^l_{ik} + G^l_{im} G^m_{jk} - G^l_{jm} G^m_{ik}`,
/// then `R_{ijkw} = h_{lw} R^l_{ijk}`.
pub(crate) fn curvature_lowered(gamma: &Tensor<Jet>, h: &Tensor<Jet>) -> Tensor<f64> {
    let up = curvature_upper(gamma);
    lower_last_slot(&up, &h.values())
}

pub(crate) fn curvature_upper(gamma: &Tensor<Jet>) -> Tensor<f64> {
    let dim = gamma.dim();
    Tensor::from_fn(dim, &[Upper, Lower, Lower, Lower], |idx| {
        let (l, i, j, k) = (idx[0], idx[1], idx[2], idx[3]);
        let mut acc = gamma.get(&[l, j, k]).grad(i) - gamma.get(&[l, i, k]).grad(j);
        for m in 0..dim {
            acc += gamma.get(&[l, i, m]).value() * gamma.get(&[m, j, k]).value();
            acc -= gamma.get(&[l, j, m]).value() * gamma.get(&[m, i, k]).value();
        }
        acc
    })
}

/// `R_{ijkw} = h_{lw} R^l_{ijk}` for an (1,3) curvature with the upper slot
/// first.
pub(crate) fn lower_last_slot(up: &Tensor<f64>, h: &Tensor<f64>) -> Tensor<f64> {
    let dim = up.dim();
    Tensor::from_fn(dim, &[Lower; 4], |idx| {
        let (i, j, k, w) = (idx[0], idx[1], idx[2], idx[3]);
        (0..dim).map(|l| h.get(&[l, w]) * up.get(&[l, i, j, k])).sum()
    })
}

/// Everything the check suites need at one point, derived tensors at jet
/// order 2 (entries at order 3).
#[derive(Clone, Debug)]
pub struct Frame {
    n: usize,
    point: Vec<f64>,
    /// entries at order 3
    pub g3: Tensor<Jet>,
    pub j3: Tensor<Jet>,
    pub gt3: Tensor<Jet>,
    /// order-2 working tensors
    pub g: Tensor<Jet>,
    pub g_inv: Tensor<Jet>,
    pub j: Tensor<Jet>,
    pub g_tilde: Tensor<Jet>,
    pub g_tilde_inv: Tensor<Jet>,
    pub gamma: Tensor<Jet>,
    pub gamma_tilde: Tensor<Jet>,
    /// `(nabla0 J)^k_{ij}` with respect to the Levi-Civita connection of g
    pub nabla0_j: Tensor<Jet>,
    /// fundamental tensor `F_{ijk}`
    pub f: Tensor<Jet>,
    pub theta: Tensor<Jet>,
    pub theta_j: Tensor<Jet>,
    pub omega: Tensor<Jet>,
    pub j_omega: Tensor<Jet>,
}

impl Frame {
    fn build(n: usize, point: Vec<f64>, pair3: JetMetricPair) -> Frame {
        let dim = 2 * n;
        let g3 = pair3.g;
        let j3 = pair3.j;
        let gt3 = pair3.g_tilde;
        let g = truncate_tensor(&g3, 2);
        let j = truncate_tensor(&j3, 2);
        let g_tilde = truncate_tensor(&gt3, 2);
        let g_inv = truncate_tensor(&pair3.g_inv, 2);
        let g_tilde_inv = truncate_tensor(&pair3.g_tilde_inv, 2);
        let gamma = christoffel(&g3, &g_inv);
        let gamma_tilde = christoffel(&gt3, &g_tilde_inv);
        let nabla0_j = nabla_j(&gamma, &j3, &j);
        // F_{ijk} = g_{mk} A^m_{ij}
        let f = Tensor::from_fn(dim, &[Lower; 3], |idx| {
            let (i, jx, k) = (idx[0], idx[1], idx[2]);
            let mut acc = g.get(&[0, k]).mul(nabla0_j.get(&[0, i, jx]));
            for m in 1..dim {
                acc = acc.add(&g.get(&[m, k]).mul(nabla0_j.get(&[m, i, jx])));
            }
            acc
        });
        // theta_k = g^{ij} F_{ijk}
        let theta = Tensor::from_fn(dim, &[Lower], |idx| {
            let k = idx[0];
            let mut acc: Option<Jet> = None;
            for i in 0..dim {
                for jx in 0..dim {
                    let term = g_inv.get(&[i, jx]).mul(f.get(&[i, jx, k]));
                    acc = Some(match acc {
                        None => term,
                        Some(a) => a.add(&term),
                    });
                }
            }
            acc.expect("dim >= 1")
        });
        let omega = Tensor::from_fn(dim, &[Upper], |idx| {
            let a = idx[0];
            let mut acc = g_inv.get(&[a, 0]).mul(theta.get(&[0]));
            for b in 1..dim {
                acc = acc.add(&g_inv.get(&[a, b]).mul(theta.get(&[b])));
            }
            acc
        });
        let theta_j = Tensor::from_fn(dim, &[Lower], |idx| {
            let k = idx[0];
            let mut acc = theta.get(&[0]).mul(j.get(&[0, k]));
            for a in 1..dim {
                acc = acc.add(&theta.get(&[a]).mul(j.get(&[a, k])));
            }
            acc
        });
        let j_omega = Tensor::from_fn(dim, &[Upper], |idx| {
            let k = idx[0];
            let mut acc = j.get(&[k, 0]).mul(omega.get(&[0]));
            for a in 1..dim {
                acc = acc.add(&j.get(&[k, a]).mul(omega.get(&[a])));
            }
            acc
        });
        Frame {
            n,
            point,
            g3,
            j3,
            gt3,
            g,
            g_inv,
            j,
            g_tilde,
            g_tilde_inv,
            gamma,
            gamma_tilde,
            nabla0_j,
            f,
            theta,
            theta_j,
            omega,
            j_omega,
        }
    }

    pub fn half_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn point(&self) -> &[f64] {
        &self.point
    }

    /// Validated value-level metric pair.
    pub fn metric_pair(&self) -> MetricPair {
        MetricPair::new(self.g.values(), self.j.values(), AXIOM_TOL)
            .expect("frame construction validated the axioms")
    }

    /// `theta(Omega)`.
    pub fn theta_omega(&self) -> f64 {
        (0..self.dim())
            .map(|k| self.theta.get(&[k]).value() * self.omega.get(&[k]).value())
            .sum()
    }

    /// `theta(J Omega)`.
    pub fn theta_j_omega(&self) -> f64 {
        (0..self.dim())
            .map(|k| self.theta.get(&[k]).value() * self.j_omega.get(&[k]).value())
            .sum()
    }

    /// Classification residuals at `threshold`.
    pub fn classify(&self, threshold: f64) -> ClassReport {
        let dim = self.dim();
        let n = self.n as f64;
        let f = self.f.values();
        let g = self.g.values();
        let gt = self.g_tilde.values();
        let th = self.theta.values();
        let tj = self.theta_j.values();
        let jv = self.j.values();
        let residual_w0 = f.max_abs();
        let residual_theta = th.max_abs();
        let mut residual_w1 = 0.0f64;
        let mut residual_w2 = 0.0f64;
        let mut residual_w3 = 0.0f64;
        for x in 0..dim {
            for y in 0..dim {
                for z in 0..dim {
                    let f1 = (g.get(&[x, y]) * th.get(&[z])
                        + gt.get(&[x, y]) * tj.get(&[z])
                        + g.get(&[x, z]) * th.get(&[y])
                        + gt.get(&[x, z]) * tj.get(&[y]))
                        / (2.0 * n);
                    residual_w1 = residual_w1.max((f.get(&[x, y, z]) - f1).abs());
                    let mut cyc2 = 0.0;
                    for m in 0..dim {
                        cyc2 += f.get(&[x, y, m]) * jv.get(&[m, z])
                            + f.get(&[y, z, m]) * jv.get(&[m, x])
                            + f.get(&[z, x, m]) * jv.get(&[m, y]);
                    }
                    residual_w2 = residual_w2.max(cyc2.abs());
                    let cyc3 = f.get(&[x, y, z]) + f.get(&[y, z, x]) + f.get(&[z, x, y]);
                    residual_w3 = residual_w3.max(cyc3.abs());
                }
            }
        }
        ClassReport {
            residual_w0,
            residual_w1,
            residual_w2_cyclic: residual_w2,
            residual_theta,
            residual_w3_cyclic: residual_w3,
            residual_w12_cyclic: residual_w2,
            threshold,
            member_w0: residual_w0 <= threshold,
            member_w1: residual_w1 <= threshold,
            member_w2: residual_w2 <= threshold && residual_theta <= threshold,
            member_w3: residual_w3 <= threshold,
            member_w12: residual_w2 <= threshold,
        }
    }

    /// Square norm of `nabla0 J` by the defining contraction and by the
    /// alternate one (they agree on the integrable class).
    pub fn nabla0j_norms(&self, tol: f64) -> NormReport {
        let dim = self.dim();
        let gv = self.g.values();
        let gi = self.g_inv.values();
        let a = self.nabla0_j.values();
        let pair_g = |i: usize, k: usize, j: usize, l: usize| -> f64 {
            let mut acc = 0.0;
            for p in 0..dim {
                for q in 0..dim {
                    acc += gv.get(&[p, q]) * a.get(&[p, i, k]) * a.get(&[q, j, l]);
                }
            }
            acc
        };
        let mut norm_sq = 0.0;
        let mut norm_alt = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    for l in 0..dim {
                        let inner = pair_g(i, k, j, l);
                        norm_sq += gi.get(&[i, j]) * gi.get(&[k, l]) * inner;
                        norm_alt += 2.0 * gi.get(&[i, l]) * gi.get(&[j, k]) * inner;
                    }
                }
            }
        }
        NormReport {
            norm_sq,
            norm_sq_alt: norm_alt,
            isotropic: norm_sq.abs() <= tol,
        }
    }

    /// Nijenhuis tensor `N(X,Y) = [JX,JY] - J[JX,Y] - J[X,JY] - [X,Y]` in
    /// coordinates (point values).
    pub fn nijenhuis(&self) -> Tensor<f64> {
        let dim = self.dim();
        let jv = self.j.values();
        // dj[k][j][i] = d_i J^k_j
        let dj = |k: usize, j: usize, i: usize| self.j3.get(&[k, j]).grad(i);
        Tensor::from_fn(dim, &[Upper, Lower, Lower], |idx| {
            let (k, i, j) = (idx[0], idx[1], idx[2]);
            let mut acc = 0.0;
            for m in 0..dim {
                acc += jv.get(&[m, i]) * dj(k, j, m) - jv.get(&[m, j]) * dj(k, i, m);
                acc += jv.get(&[k, m]) * (dj(m, i, j) - dj(m, j, i));
            }
            acc
        })
    }
}
