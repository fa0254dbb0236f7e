//! Dense pointwise tensors over a neutral-signature metric.
//!
//! A [`Tensor`] stores `dim^rank` components row-major together with a
//! per-slot variance. The scalar type is generic: `Tensor<f64>` is the
//! pointwise value algebra, `Tensor<Jet>` carries derivative information for
//! the chart machinery. [`MetricPair`] bundles a validated Norden metric
//! with its twin, both inverses, and the almost complex structure, and is
//! the context for index movement, Ricci contraction and the Weyl tensor.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::jet::Jet;
use crate::linalg::{self, LinalgError};

/// Slot variance: `Lower` indices contract against `Upper` ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variance {
    Lower,
    Upper,
}

pub use Variance::{Lower, Upper};

#[derive(Clone, Debug, PartialEq)]
pub enum TensorError {
    DimMismatch { left: usize, right: usize },
    RankMismatch { expected: usize, got: usize },
    SlotOutOfRange { slot: usize, rank: usize },
    /// Contraction slots must carry opposite variance; same-variance pairs
    /// need an explicit metric.
    SameVariance { a: usize, b: usize },
    WrongVariance { slot: usize },
    /// A symmetry precondition failed beyond tolerance.
    SymmetryViolation { what: &'static str, residual: f64 },
    /// One of the Norden axioms failed; names the worst entry.
    AxiomViolation { what: String, residual: f64 },
    /// The metric signature is not (n, n).
    SignatureViolation { negatives: usize, positives: usize },
    UnsupportedDimension { dim: usize },
    Linalg(LinalgError),
}

impl fmt::Display for TensorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TensorError::DimMismatch { left, right } => {
                write!(f, "tensor dimension mismatch: {left} vs {right}")
            }
            TensorError::RankMismatch { expected, got } => {
                write!(f, "tensor rank mismatch: expected {expected}, got {got}")
            }
            TensorError::SlotOutOfRange { slot, rank } => {
                write!(f, "slot {slot} out of range for rank {rank}")
            }
            TensorError::SameVariance { a, b } => write!(
                f,
                "slots {a} and {b} carry the same variance; contract against a metric instead"
            ),
            TensorError::WrongVariance { slot } => write!(f, "wrong variance at slot {slot}"),
            TensorError::SymmetryViolation { what, residual } => {
                write!(f, "{what} symmetry violated (residual {residual:.3e})")
            }
            TensorError::AxiomViolation { what, residual } => {
                write!(f, "{what} (residual {residual:.3e})")
            }
            TensorError::SignatureViolation { negatives, positives } => write!(
                f,
                "metric signature is ({positives},{negatives}), expected neutral (n,n)"
            ),
            TensorError::UnsupportedDimension { dim } => {
                write!(f, "unsupported dimension {dim}")
            }
            TensorError::Linalg(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for TensorError {}

impl From<LinalgError> for TensorError {
    fn from(e: LinalgError) -> Self {
        TensorError::Linalg(e)
    }
}

/// Component scalars a tensor can hold: plain values or jets.
pub trait Scalar: Clone {
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, c: f64) -> Self;
    fn zero_like(&self) -> Self;
}

impl Scalar for f64 {
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, c: f64) -> Self {
        self * c
    }
    fn zero_like(&self) -> Self {
        0.0
    }
}

impl Scalar for Jet {
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, c: f64) -> Self {
        Jet::scale(self, c)
    }
    fn zero_like(&self) -> Self {
        Jet::zero_like(self)
    }
}

/// Dense tensor with per-slot variance.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor<T = f64> {
    dim: usize,
    variance: Vec<Variance>,
    data: Vec<T>,
}

/// Iterate all multi-indices of the given rank in row-major order.
pub fn multi_indices(dim: usize, rank: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = dim.pow(rank as u32);
    (0..total).map(move |mut flat| {
        let mut idx = vec![0usize; rank];
        for slot in (0..rank).rev() {
            idx[slot] = flat % dim;
            flat /= dim;
        }
        idx
    })
}

impl<T: Scalar> Tensor<T> {
    pub fn from_fn(dim: usize, variance: &[Variance], mut f: impl FnMut(&[usize]) -> T) -> Self {
        let data = multi_indices(dim, variance.len()).map(|idx| f(&idx)).collect();
        Tensor {
            dim,
            variance: variance.to_vec(),
            data,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.variance.len()
    }

    pub fn variance(&self) -> &[Variance] {
        &self.variance
    }

    fn flat(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.rank());
        let mut f = 0;
        for &i in idx {
            debug_assert!(i < self.dim);
            f = f * self.dim + i;
        }
        f
    }

    pub fn get(&self, idx: &[usize]) -> &T {
        &self.data[self.flat(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: T) {
        let f = self.flat(idx);
        self.data[f] = v;
    }

    pub fn components(&self) -> &[T] {
        &self.data
    }

    fn check_same_shape(&self, o: &Tensor<T>) -> Result<(), TensorError> {
        if self.dim != o.dim {
            return Err(TensorError::DimMismatch {
                left: self.dim,
                right: o.dim,
            });
        }
        if self.rank() != o.rank() {
            return Err(TensorError::RankMismatch {
                expected: self.rank(),
                got: o.rank(),
            });
        }
        Ok(())
    }

    pub fn add(&self, o: &Tensor<T>) -> Result<Tensor<T>, TensorError> {
        self.check_same_shape(o)?;
        Ok(Tensor {
            dim: self.dim,
            variance: self.variance.clone(),
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    pub fn sub(&self, o: &Tensor<T>) -> Result<Tensor<T>, TensorError> {
        self.check_same_shape(o)?;
        Ok(Tensor {
            dim: self.dim,
            variance: self.variance.clone(),
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(a, b)| a.sub(b))
                .collect(),
        })
    }

    pub fn scale(&self, c: f64) -> Tensor<T> {
        Tensor {
            dim: self.dim,
            variance: self.variance.clone(),
            data: self.data.iter().map(|a| a.scale(c)).collect(),
        }
    }

    /// Einstein contraction of two slots of opposite variance; rank drops
    /// by two.
    pub fn contract(&self, slot_a: usize, slot_b: usize) -> Result<Tensor<T>, TensorError> {
        let rank = self.rank();
        for s in [slot_a, slot_b] {
            if s >= rank {
                return Err(TensorError::SlotOutOfRange { slot: s, rank });
            }
        }
        if slot_a == slot_b || self.variance[slot_a] == self.variance[slot_b] {
            return Err(TensorError::SameVariance {
                a: slot_a,
                b: slot_b,
            });
        }
        let (lo, hi) = if slot_a < slot_b {
            (slot_a, slot_b)
        } else {
            (slot_b, slot_a)
        };
        let out_variance: Vec<Variance> = self
            .variance
            .iter()
            .enumerate()
            .filter(|(s, _)| *s != lo && *s != hi)
            .map(|(_, v)| *v)
            .collect();
        let dim = self.dim;
        let mut full = vec![0usize; rank];
        let out = Tensor::from_fn(dim, &out_variance, |idx| {
            let kept = (0..rank).filter(|s| *s != lo && *s != hi);
            for (slot, &val) in kept.zip(idx) {
                full[slot] = val;
            }
            let mut acc: Option<T> = None;
            for k in 0..dim {
                full[lo] = k;
                full[hi] = k;
                let term = self.get(&full).clone();
                acc = Some(match acc {
                    None => term,
                    Some(a) => a.add(&term),
                });
            }
            acc.expect("dim >= 1")
        });
        Ok(out)
    }

    /// Tensor (outer) product.
    pub fn tensor_product(&self, o: &Tensor<T>) -> Result<Tensor<T>, TensorError> {
        if self.dim != o.dim {
            return Err(TensorError::DimMismatch {
                left: self.dim,
                right: o.dim,
            });
        }
        let mut variance = self.variance.clone();
        variance.extend_from_slice(&o.variance);
        let r1 = self.rank();
        Ok(Tensor::from_fn(self.dim, &variance, |idx| {
            self.get(&idx[..r1]).mul(o.get(&idx[r1..]))
        }))
    }
}

impl Tensor<f64> {
    pub fn zeros(dim: usize, variance: &[Variance]) -> Tensor<f64> {
        Tensor::from_fn(dim, variance, |_| 0.0)
    }

    /// Identity as a (1,1) tensor.
    pub fn identity(dim: usize) -> Tensor<f64> {
        Tensor::from_fn(dim, &[Upper, Lower], |idx| if idx[0] == idx[1] { 1.0 } else { 0.0 })
    }

    /// Largest absolute component.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Largest absolute difference against another tensor of the same shape.
    pub fn max_abs_diff(&self, o: &Tensor<f64>) -> f64 {
        debug_assert_eq!(self.dim, o.dim);
        debug_assert_eq!(self.rank(), o.rank());
        self.data
            .iter()
            .zip(&o.data)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
    }
}

impl Tensor<Jet> {
    /// Strip derivative information.
    pub fn values(&self) -> Tensor<f64> {
        Tensor {
            dim: self.dim,
            variance: self.variance.clone(),
            data: self.data.iter().map(|j| j.value()).collect(),
        }
    }

    /// All components finite in every derivative slot.
    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|j| j.is_finite())
    }
}

/// A validated almost Norden structure at a point: `g`, the twin metric
/// `g~(X,Y) = g(X,JY)`, both inverses, and `J` itself.
#[derive(Clone, Debug)]
pub struct MetricPair {
    pub g: Tensor<f64>,
    pub g_tilde: Tensor<f64>,
    pub g_inv: Tensor<f64>,
    pub g_tilde_inv: Tensor<f64>,
    pub j: Tensor<f64>,
}

impl MetricPair {
    /// Validate the Norden axioms at tolerance `tol` and assemble the pair.
    ///
    /// `g` must be a symmetric nondegenerate (0,2) tensor of neutral
    /// signature, `j` a (1,1) tensor with `J^2 = -I` and `g(JX,JY) = -g(X,Y)`.
    pub fn new(g: Tensor<f64>, j: Tensor<f64>, tol: f64) -> Result<MetricPair, TensorError> {
        let dim = g.dim();
        if !dim.is_multiple_of(2) || dim < 4 {
            return Err(TensorError::UnsupportedDimension { dim });
        }
        if g.rank() != 2 || j.rank() != 2 {
            return Err(TensorError::RankMismatch {
                expected: 2,
                got: g.rank().max(j.rank()),
            });
        }
        if j.dim() != dim {
            return Err(TensorError::DimMismatch {
                left: dim,
                right: j.dim(),
            });
        }
        // symmetry of g
        let mut worst = 0.0f64;
        for i in 0..dim {
            for k in 0..dim {
                worst = worst.max((g.get(&[i, k]) - g.get(&[k, i])).abs());
            }
        }
        if worst > tol {
            return Err(TensorError::SymmetryViolation {
                what: "metric",
                residual: worst,
            });
        }
        // J^2 = -I
        let mut worst = 0.0f64;
        let mut at = (0, 0);
        for i in 0..dim {
            for k in 0..dim {
                let mut acc = 0.0;
                for m in 0..dim {
                    acc += g_at(&j, i, m) * g_at(&j, m, k);
                }
                let want = if i == k { -1.0 } else { 0.0 };
                if (acc - want).abs() > worst {
                    worst = (acc - want).abs();
                    at = (i, k);
                }
            }
        }
        if worst > tol {
            return Err(TensorError::AxiomViolation {
                what: format!("J^2 = -I fails worst at entry ({}, {})", at.0, at.1),
                residual: worst,
            });
        }
        // g(JX, JY) = -g(X, Y)
        let mut worst = 0.0f64;
        let mut at = (0, 0);
        for x in 0..dim {
            for y in 0..dim {
                let mut acc = 0.0;
                for a in 0..dim {
                    for b in 0..dim {
                        acc += g_at(&j, a, x) * g.get(&[a, b]) * g_at(&j, b, y);
                    }
                }
                let r = (acc + g.get(&[x, y])).abs();
                if r > worst {
                    worst = r;
                    at = (x, y);
                }
            }
        }
        if worst > tol {
            return Err(TensorError::AxiomViolation {
                what: format!("g(JX,JY) = -g(X,Y) fails worst at entry ({}, {})", at.0, at.1),
                residual: worst,
            });
        }
        // signature and conditioning
        let gm: Vec<f64> = (0..dim * dim)
            .map(|f| g.components()[f])
            .collect();
        let (neg, pos, cond) = linalg::signature_and_condition(&gm, dim);
        if neg != dim / 2 || pos != dim / 2 {
            return Err(TensorError::SignatureViolation {
                negatives: neg,
                positives: pos,
            });
        }
        if cond > linalg::MAX_CONDITION {
            return Err(TensorError::Linalg(LinalgError::IllConditioned { cond }));
        }
        let g_inv_data = linalg::invert(&gm, dim)?;
        let g_inv = Tensor {
            dim,
            variance: vec![Upper, Upper],
            data: g_inv_data,
        };
        // twin metric g~(e_i, e_j) = g(e_i, J e_j)
        let g_tilde = Tensor::from_fn(dim, &[Lower, Lower], |idx| {
            (0..dim).map(|a| g.get(&[idx[0], a]) * g_at(&j, a, idx[1])).sum()
        });
        let gtm: Vec<f64> = g_tilde.components().to_vec();
        let g_tilde_inv_data = linalg::invert(&gtm, dim)?;
        let g_tilde_inv = Tensor {
            dim,
            variance: vec![Upper, Upper],
            data: g_tilde_inv_data,
        };
        Ok(MetricPair {
            g,
            g_tilde,
            g_inv,
            g_tilde_inv,
            j,
        })
    }

    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    pub fn half_dim(&self) -> usize {
        self.g.dim() / 2
    }
}

#[inline]
fn g_at(t: &Tensor<f64>, i: usize, j: usize) -> f64 {
    *t.get(&[i, j])
}

/// Raise or lower one slot against the metric pair's `g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MoveDirection {
    Raise,
    Lower,
}

pub fn move_index(
    t: &Tensor<f64>,
    slot: usize,
    direction: MoveDirection,
    m: &MetricPair,
) -> Result<Tensor<f64>, TensorError> {
    let rank = t.rank();
    if slot >= rank {
        return Err(TensorError::SlotOutOfRange { slot, rank });
    }
    let (metric, want, new_var) = match direction {
        MoveDirection::Raise => (&m.g_inv, Lower, Upper),
        MoveDirection::Lower => (&m.g, Upper, Lower),
    };
    if t.variance()[slot] != want {
        return Err(TensorError::WrongVariance { slot });
    }
    let mut variance = t.variance().to_vec();
    variance[slot] = new_var;
    let dim = t.dim();
    let mut full = vec![0usize; rank];
    Ok(Tensor::from_fn(dim, &variance, |idx| {
        full.copy_from_slice(idx);
        let mut acc = 0.0;
        for b in 0..dim {
            full[slot] = b;
            acc += metric.get(&[idx[slot], b]) * t.get(&full);
        }
        acc
    }))
}

/// Kulkarni-Nomizu product of two (0,2) tensors:
/// `(A o^ B)(X,Y,Z,W) = A(Y,Z)B(X,W) - A(X,Z)B(Y,W) + A(X,W)B(Y,Z) - A(Y,W)B(X,Z)`.
pub fn kulkarni_nomizu(a: &Tensor<f64>, b: &Tensor<f64>) -> Result<Tensor<f64>, TensorError> {
    if a.dim() != b.dim() {
        return Err(TensorError::DimMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    if a.rank() != 2 || b.rank() != 2 {
        return Err(TensorError::RankMismatch {
            expected: 2,
            got: a.rank().max(b.rank()),
        });
    }
    Ok(Tensor::from_fn(a.dim(), &[Lower; 4], |i| {
        let (x, y, z, w) = (i[0], i[1], i[2], i[3]);
        g_at(a, y, z) * g_at(b, x, w) - g_at(a, x, z) * g_at(b, y, w)
            + g_at(a, x, w) * g_at(b, y, z)
            - g_at(a, y, w) * g_at(b, x, z)
    }))
}

/// The psi/pi family of (0,4) tensors built from a (0,2) tensor `S`:
/// `psi1(S) = g o^ S`, `psi2(S) = g~ o^ S~` with `S~(X,Y) = S(X,JY)`,
/// `pi1 = psi1(g)/2`, `pi2 = psi2(g)/2`, `pi3 = -psi1(g~)`.
#[derive(Clone, Debug)]
pub struct PsiPiFamily {
    pub psi1: Tensor<f64>,
    pub psi2: Tensor<f64>,
    pub pi1: Tensor<f64>,
    pub pi2: Tensor<f64>,
    pub pi3: Tensor<f64>,
}

pub fn psi1(s: &Tensor<f64>, m: &MetricPair) -> Result<Tensor<f64>, TensorError> {
    kulkarni_nomizu(&m.g, s)
}

pub fn psi2(s: &Tensor<f64>, m: &MetricPair) -> Result<Tensor<f64>, TensorError> {
    let dim = m.dim();
    let s_twist = Tensor::from_fn(dim, &[Lower, Lower], |idx| {
        (0..dim).map(|a| g_at(s, idx[0], a) * g_at(&m.j, a, idx[1])).sum()
    });
    kulkarni_nomizu(&m.g_tilde, &s_twist)
}

pub fn psi_pi_family(s: &Tensor<f64>, m: &MetricPair) -> Result<PsiPiFamily, TensorError> {
    if s.dim() != m.dim() {
        return Err(TensorError::DimMismatch {
            left: s.dim(),
            right: m.dim(),
        });
    }
    Ok(PsiPiFamily {
        psi1: psi1(s, m)?,
        psi2: psi2(s, m)?,
        pi1: psi1(&m.g, m)?.scale(0.5),
        pi2: psi2(&m.g, m)?.scale(0.5),
        pi3: psi1(&m.g_tilde, m)?.scale(-1.0),
    })
}

fn expect_04(l: &Tensor<f64>) -> Result<(), TensorError> {
    if l.rank() != 4 {
        return Err(TensorError::RankMismatch {
            expected: 4,
            got: l.rank(),
        });
    }
    if let Some(slot) = l.variance().iter().position(|v| *v != Lower) {
        return Err(TensorError::WrongVariance { slot });
    }
    Ok(())
}

/// Antisymmetry in the first and last pairs plus the first Bianchi cyclic
/// sum. Returns the decision at `tol` with the worst residual.
pub fn is_curvature_like(l: &Tensor<f64>, tol: f64) -> Result<(bool, f64), TensorError> {
    expect_04(l)?;
    let dim = l.dim();
    let mut worst = 0.0f64;
    for x in 0..dim {
        for y in 0..dim {
            for z in 0..dim {
                for w in 0..dim {
                    let v = *l.get(&[x, y, z, w]);
                    worst = worst.max((v + l.get(&[y, x, z, w])).abs());
                    worst = worst.max((v + l.get(&[x, y, w, z])).abs());
                    worst = worst
                        .max((v + l.get(&[y, z, x, w]) + l.get(&[z, x, y, w])).abs());
                }
            }
        }
    }
    Ok((worst <= tol, worst))
}

/// The Kahler property in (0,4) form: `L(X,Y,JZ,JW) = -L(X,Y,Z,W)`.
pub fn is_kahler_tensor(
    l: &Tensor<f64>,
    m: &MetricPair,
    tol: f64,
) -> Result<(bool, f64), TensorError> {
    expect_04(l)?;
    let dim = l.dim();
    let mut worst = 0.0f64;
    for x in 0..dim {
        for y in 0..dim {
            for z in 0..dim {
                for w in 0..dim {
                    let mut acc = 0.0;
                    for a in 0..dim {
                        for b in 0..dim {
                            acc += l.get(&[x, y, a, b]) * g_at(&m.j, a, z) * g_at(&m.j, b, w);
                        }
                    }
                    worst = worst.max((acc + l.get(&[x, y, z, w])).abs());
                }
            }
        }
    }
    Ok((worst <= tol, worst))
}

/// Ricci tensor and scalar curvature of a (0,4) tensor:
/// `rho(L)(X,Y) = g^{ij} L(e_i, X, Y, e_j)`, `tau = g^{ij} rho(e_i, e_j)`.
pub fn ricci_scalar(l: &Tensor<f64>, m: &MetricPair) -> Result<(Tensor<f64>, f64), TensorError> {
    expect_04(l)?;
    let dim = l.dim();
    let rho = Tensor::from_fn(dim, &[Lower, Lower], |idx| {
        let mut acc = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                acc += m.g_inv.get(&[i, j]) * l.get(&[i, idx[0], idx[1], j]);
            }
        }
        acc
    });
    let mut tau = 0.0;
    for x in 0..dim {
        for y in 0..dim {
            tau += m.g_inv.get(&[x, y]) * rho.get(&[x, y]);
        }
    }
    Ok((rho, tau))
}

/// Weyl tensor of a curvature-like (0,4) tensor (`dim >= 4`):
/// `W(L) = L - (psi1(rho) - tau/(2n-1) pi1) / (2(n-1))`.
pub fn weyl(l: &Tensor<f64>, m: &MetricPair) -> Result<Tensor<f64>, TensorError> {
    expect_04(l)?;
    let dim = l.dim();
    if dim < 4 {
        return Err(TensorError::UnsupportedDimension { dim });
    }
    let n = dim / 2;
    let (rho, tau) = ricci_scalar(l, m)?;
    let psi1_rho = psi1(&rho, m)?;
    let pi1 = psi1(&m.g, m)?.scale(0.5);
    let correction = psi1_rho
        .sub(&pi1.scale(tau / (2.0 * n as f64 - 1.0)))?
        .scale(1.0 / (2.0 * (n as f64 - 1.0)));
    l.sub(&correction)
}
