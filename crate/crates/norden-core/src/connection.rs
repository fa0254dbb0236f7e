//! Linear connections as first-class values.
//!
//! A [`ConnectionField`] is a recipe whose coefficients can be evaluated in
//! any [`Frame`]: the Levi-Civita connections of either Norden metric, the
//! Lichnerowicz first canonical connection, conjugates with respect to a
//! metric (`Xh(Y,Z) = h(nabla_X Y, Z) + h(Y, nabla*_X Z)`) or to the almost
//! complex structure (`nabla*_X Y = nabla_X Y - J(nabla_X J)Y`), averages,
//! and offsets of `nabla0` by a difference tensor. Difference-tensor
//! connections built from the Lie form come in the two four-parameter
//! families [`QFamily::Q1`] and [`QFamily::Q2`]; both have completely
//! symmetric `g(Q(X,Y),Z)`, which makes `(g, nabla, nabla*)` a statistical
//! structure.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::jet::Jet;
use crate::manifold::{self, Frame, MetricKind};
use crate::rng::SplitMix64;
use crate::tensor::{Lower, Scalar, Tensor, Upper};

/// The two difference-tensor families built from the Lie form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QFamily {
    /// Terms pair the Lie forms with the metrics: `theta(X)Y + theta(Y)X +
    /// g(X,Y)Omega` and its three J-twisted companions.
    Q1,
    /// Terms are cubic in the Lie forms alone.
    Q2,
}

/// A linear connection, evaluable at any chart point.
#[derive(Clone, Debug)]
pub enum ConnectionField {
    /// Levi-Civita connection of `g` or of the twin metric.
    LeviCivita(MetricKind),
    /// `D = nabla0 - J(nabla0 J)/2`, the first canonical connection;
    /// natural: `Dg = Dg~ = DJ = 0`.
    Lichnerowicz,
    /// Conjugate of the inner connection with respect to the chosen metric.
    MetricConjugate(Box<ConnectionField>, MetricKind),
    /// Conjugate of the inner connection with respect to `J`.
    ComplexConjugate(Box<ConnectionField>),
    /// Coefficient mean of two connections.
    Average(Box<ConnectionField>, Box<ConnectionField>),
    /// `nabla0 + sign * Q(family, lambdas)`.
    QOffset {
        family: QFamily,
        lambdas: [f64; 4],
        sign: f64,
    },
    /// `nabla0` offset by a deterministic polynomial difference tensor;
    /// a generic non-metric, torsionful probe connection for the suites.
    SeededOffset { seed: u64 },
}

impl ConnectionField {
    pub fn levi_civita_g() -> Self {
        ConnectionField::LeviCivita(MetricKind::G)
    }

    pub fn levi_civita_g_tilde() -> Self {
        ConnectionField::LeviCivita(MetricKind::GTilde)
    }

    pub fn metric_conjugate(self, which: MetricKind) -> Self {
        ConnectionField::MetricConjugate(Box::new(self), which)
    }

    pub fn complex_conjugate(self) -> Self {
        ConnectionField::ComplexConjugate(Box::new(self))
    }

    pub fn average(a: ConnectionField, b: ConnectionField) -> Self {
        ConnectionField::Average(Box::new(a), Box::new(b))
    }

    /// Coefficients as jets at the frame's working order.
    pub fn coefficients(&self, fr: &Frame) -> Tensor<Jet> {
        match self {
            ConnectionField::LeviCivita(MetricKind::G) => fr.gamma.clone(),
            ConnectionField::LeviCivita(MetricKind::GTilde) => fr.gamma_tilde.clone(),
            ConnectionField::Lichnerowicz => {
                let correction = j_contract_a(fr, &fr.nabla0_j).scale(0.5);
                fr.gamma.sub(&correction).expect("same shape")
            }
            ConnectionField::MetricConjugate(inner, which) => {
                metric_conjugate_coeffs(fr, &inner.coefficients(fr), *which)
            }
            ConnectionField::ComplexConjugate(inner) => {
                let gamma = inner.coefficients(fr);
                let a = nabla_j_of(fr, &gamma);
                gamma.sub(&j_contract_a(fr, &a)).expect("same shape")
            }
            ConnectionField::Average(a, b) => a
                .coefficients(fr)
                .add(&b.coefficients(fr))
                .expect("same shape")
                .scale(0.5),
            ConnectionField::QOffset { family, lambdas, sign } => {
                let q = q_tensor(*family, *lambdas, fr);
                fr.gamma.add(&q.scale(*sign)).expect("same shape")
            }
            ConnectionField::SeededOffset { seed } => {
                let q = seeded_offset(fr, *seed);
                fr.gamma.add(&q).expect("same shape")
            }
        }
    }

    /// Torsion components `T^k_{ij} = G^k_{ij} - G^k_{ji}` at the point.
    pub fn torsion(&self, fr: &Frame) -> Tensor<f64> {
        let gamma = self.coefficients(fr).values();
        Tensor::from_fn(fr.dim(), &[Upper, Lower, Lower], |idx| {
            gamma.get(&[idx[0], idx[1], idx[2]]) - gamma.get(&[idx[0], idx[2], idx[1]])
        })
    }

    /// Coordinate curvature, as (1,3) and lowered with `g` into (0,4).
    pub fn curvature(&self, fr: &Frame) -> Curvature {
        let gamma = self.coefficients(fr);
        let r13 = manifold::curvature_upper(&gamma);
        let r04 = manifold::lower_last_slot(&r13, &fr.g.values());
        Curvature { r13, r04 }
    }

    /// The (0,4) curvature lowered with a chosen metric.
    pub fn curvature_lowered(&self, fr: &Frame, which: MetricKind) -> Tensor<f64> {
        let gamma = self.coefficients(fr);
        let r13 = manifold::curvature_upper(&gamma);
        let h = match which {
            MetricKind::G => fr.g.values(),
            MetricKind::GTilde => fr.g_tilde.values(),
        };
        manifold::lower_last_slot(&r13, &h)
    }

    /// Covariant derivative of a jet tensor field; the new covariant slot
    /// comes first, the jet order drops by one.
    pub fn covariant_derivative(&self, fr: &Frame, t: &Tensor<Jet>) -> Tensor<Jet> {
        covariant_derivative(&self.coefficients(fr), t)
    }
}

/// Curvature of a connection: `R^l_{ijk}` and `R(X,Y,Z,W) = g(R(X,Y)Z, W)`.
#[derive(Clone, Debug)]
pub struct Curvature {
    pub r13: Tensor<f64>,
    pub r04: Tensor<f64>,
}

/// Curvature of explicit coefficient jets (order >= 1), lowered with `g`.
pub fn curvature_of(fr: &Frame, gamma: &Tensor<Jet>) -> Curvature {
    let r13 = manifold::curvature_upper(gamma);
    let r04 = manifold::lower_last_slot(&r13, &fr.g.values());
    Curvature { r13, r04 }
}

/// `(nabla J)^k_{ij}` for arbitrary connection coefficients.
pub fn nabla_j_of(fr: &Frame, gamma: &Tensor<Jet>) -> Tensor<Jet> {
    manifold::nabla_j(gamma, &fr.j3, &fr.j)
}

/// Contract `J^k_m` against the upper slot of an `[U,L,L]` tensor.
fn j_contract_a(fr: &Frame, a: &Tensor<Jet>) -> Tensor<Jet> {
    let dim = fr.dim();
    Tensor::from_fn(dim, &[Upper, Lower, Lower], |idx| {
        let (k, i, j) = (idx[0], idx[1], idx[2]);
        let mut acc = fr.j.get(&[k, 0]).mul(a.get(&[0, i, j]));
        for m in 1..dim {
            acc = acc.add(&fr.j.get(&[k, m]).mul(a.get(&[m, i, j])));
        }
        acc
    })
}

/// Conjugate coefficients with respect to `h`:
/// `G*^l_{ik} = h^{lj} (d_i h_{jk} - G^m_{ij} h_{mk})`.
fn metric_conjugate_coeffs(fr: &Frame, gamma: &Tensor<Jet>, which: MetricKind) -> Tensor<Jet> {
    let dim = fr.dim();
    let (h3, h, hinv) = match which {
        MetricKind::G => (&fr.g3, &fr.g, &fr.g_inv),
        MetricKind::GTilde => (&fr.gt3, &fr.g_tilde, &fr.g_tilde_inv),
    };
    Tensor::from_fn(dim, &[Upper, Lower, Lower], |idx| {
        let (l, i, k) = (idx[0], idx[1], idx[2]);
        let mut acc: Option<Jet> = None;
        for j in 0..dim {
            let mut inner = h3.get(&[j, k]).derivative(i);
            for m in 0..dim {
                inner = inner.sub(&gamma.get(&[m, i, j]).mul(h.get(&[m, k])));
            }
            let term = hinv.get(&[l, j]).mul(&inner);
            acc = Some(match acc {
                None => term,
                Some(s) => s.add(&term),
            });
        }
        acc.expect("dim >= 1")
    })
}

/// Covariant derivative against explicit coefficients, new slot first.
pub fn covariant_derivative(gamma: &Tensor<Jet>, t: &Tensor<Jet>) -> Tensor<Jet> {
    let dim = t.dim();
    let rank = t.rank();
    let in_order = t.components()[0].order();
    assert!(in_order >= 1, "covariant derivative needs jet order >= 1");
    let out_order = in_order - 1;
    let gamma_t = manifold::truncate_tensor(gamma, out_order);
    let t_t = manifold::truncate_tensor(t, out_order);
    let mut variance = Vec::with_capacity(rank + 1);
    variance.push(Lower);
    variance.extend_from_slice(t.variance());
    Tensor::from_fn(dim, &variance, |idx| {
        let i = idx[0];
        let a = &idx[1..];
        let mut acc = t.get(a).derivative(i);
        let mut b = a.to_vec();
        for slot in 0..rank {
            let orig = a[slot];
            for m in 0..dim {
                b[slot] = m;
                let term = match t.variance()[slot] {
                    Upper => gamma_t.get(&[orig, i, m]).mul(t_t.get(&b)),
                    Lower => gamma_t.get(&[m, i, orig]).mul(t_t.get(&b)).neg(),
                };
                acc = acc.add(&term);
            }
            b[slot] = orig;
        }
        acc
    })
}

/// Difference tensor `Q^k_{ij}` of the chosen family at the frame's point.
pub fn q_tensor(family: QFamily, lambdas: [f64; 4], fr: &Frame) -> Tensor<Jet> {
    let dim = fr.dim();
    let [l1, l2, l3, l4] = lambdas;
    let th = &fr.theta;
    let tj = &fr.theta_j;
    let om = &fr.omega;
    let jom = &fr.j_omega;
    let g = &fr.g;
    let gt = &fr.g_tilde;
    let j = &fr.j;
    Tensor::from_fn(dim, &[Upper, Lower, Lower], |idx| {
        let (k, i, jx) = (idx[0], idx[1], idx[2]);
        let mut acc = fr.theta.get(&[0]).zero_like();
        match family {
            QFamily::Q1 => {
                if k == jx {
                    acc = acc.add(&th.get(&[i]).scale(l1)).add(&tj.get(&[i]).scale(l2));
                }
                if k == i {
                    acc = acc.add(&th.get(&[jx]).scale(l1)).add(&tj.get(&[jx]).scale(l2));
                }
                acc = acc.add(&g.get(&[i, jx]).mul(om.get(&[k])).scale(l1));
                acc = acc.add(&g.get(&[i, jx]).mul(jom.get(&[k])).scale(l2));
                acc = acc.add(&th.get(&[i]).mul(j.get(&[k, jx])).scale(l3));
                acc = acc.add(&th.get(&[jx]).mul(j.get(&[k, i])).scale(l3));
                acc = acc.add(&gt.get(&[i, jx]).mul(om.get(&[k])).scale(l3));
                acc = acc.add(&tj.get(&[i]).mul(j.get(&[k, jx])).scale(l4));
                acc = acc.add(&tj.get(&[jx]).mul(j.get(&[k, i])).scale(l4));
                acc = acc.add(&gt.get(&[i, jx]).mul(jom.get(&[k])).scale(l4));
            }
            QFamily::Q2 => {
                let t_i = th.get(&[i]);
                let t_j = th.get(&[jx]);
                let j_i = tj.get(&[i]);
                let j_j = tj.get(&[jx]);
                let om_k = om.get(&[k]);
                let jom_k = jom.get(&[k]);
                acc = acc.add(&t_i.mul(t_j).mul(om_k).scale(l1));
                acc = acc.add(&j_i.mul(j_j).mul(jom_k).scale(l2));
                acc = acc.add(
                    &t_i.mul(t_j)
                        .mul(jom_k)
                        .add(&t_i.mul(j_j).mul(om_k))
                        .add(&j_i.mul(t_j).mul(om_k))
                        .scale(l3),
                );
                acc = acc.add(
                    &j_i.mul(t_j)
                        .mul(jom_k)
                        .add(&j_i.mul(j_j).mul(om_k))
                        .add(&t_i.mul(j_j).mul(jom_k))
                        .scale(l4),
                );
            }
        }
        acc
    })
}

fn seeded_offset(fr: &Frame, seed: u64) -> Tensor<Jet> {
    let dim = fr.dim();
    let mut rng = SplitMix64::new(seed ^ 0x6b9d_3c4f_a1e5_92d7);
    Tensor::from_fn(dim, &[Upper, Lower, Lower], |_| {
        let c0 = 0.4 * (rng.next_f64() - 0.5);
        let c1 = 0.4 * (rng.next_f64() - 0.5);
        let a = (rng.next_u64() % dim as u64) as usize;
        let x = Jet::coordinate(a, fr.point()[a], dim, 2).expect("valid dims");
        let c = Jet::constant(c0, dim, 2).expect("valid dims");
        x.scale(c1).add(&c)
    })
}

/// A statistical structure: `nabla = nabla0 + Q`, `nabla* = nabla0 - Q`
/// with completely symmetric `Q(X,Y,Z) = g(Q(X,Y),Z)`.
#[derive(Clone, Copy, Debug)]
pub struct StatStructure {
    pub family: QFamily,
    pub lambdas: [f64; 4],
}

impl StatStructure {
    pub fn new(family: QFamily, lambdas: [f64; 4]) -> Self {
        StatStructure { family, lambdas }
    }

    pub fn nabla(&self) -> ConnectionField {
        ConnectionField::QOffset {
            family: self.family,
            lambdas: self.lambdas,
            sign: 1.0,
        }
    }

    pub fn nabla_star(&self) -> ConnectionField {
        ConnectionField::QOffset {
            family: self.family,
            lambdas: self.lambdas,
            sign: -1.0,
        }
    }

    /// `Q^k_{ij}` as jets.
    pub fn q_upper(&self, fr: &Frame) -> Tensor<Jet> {
        q_tensor(self.family, self.lambdas, fr)
    }

    /// `Q(X,Y,Z) = g(Q(X,Y),Z)` as jets, slots `(X, Y, Z)`.
    pub fn q_lowered(&self, fr: &Frame) -> Tensor<Jet> {
        let dim = fr.dim();
        let q = self.q_upper(fr);
        Tensor::from_fn(dim, &[Lower, Lower, Lower], |idx| {
            let (i, j, k) = (idx[0], idx[1], idx[2]);
            let mut acc = fr.g.get(&[0, k]).mul(q.get(&[0, i, j]));
            for m in 1..dim {
                acc = acc.add(&fr.g.get(&[m, k]).mul(q.get(&[m, i, j])));
            }
            acc
        })
    }

    /// The cubic form through both defining routes:
    /// `g(nabla*_X Y - nabla_X Y, Z)` and `(nabla_X g)(Y,Z)`.
    pub fn cubic_form(&self, fr: &Frame) -> CubicForm {
        let dim = fr.dim();
        let q_low = self.q_lowered(fr).values();
        let via_difference = q_low.scale(-2.0);
        let nabla_g = self.nabla().covariant_derivative(fr, &fr.g).values();
        // covariant derivative puts the new slot first, matching (X, Y, Z)
        let via_nabla_g = Tensor::from_fn(dim, &[Lower, Lower, Lower], |idx| {
            *nabla_g.get(idx)
        });
        CubicForm {
            via_difference,
            via_nabla_g,
        }
    }

    /// `L(X,Y,Z,W) = g(Q(X,W),Q(Y,Z)) - g(Q(X,Z),Q(Y,W))` (point values).
    pub fn l_from_q(&self, fr: &Frame) -> Tensor<f64> {
        let dim = fr.dim();
        let q = self.q_upper(fr).values();
        let g = fr.g.values();
        let inner = |x: usize, w: usize, y: usize, z: usize| -> f64 {
            let mut acc = 0.0;
            for a in 0..dim {
                for b in 0..dim {
                    acc += g.get(&[a, b]) * q.get(&[a, x, w]) * q.get(&[b, y, z]);
                }
            }
            acc
        };
        Tensor::from_fn(dim, &[Lower; 4], |idx| {
            let (x, y, z, w) = (idx[0], idx[1], idx[2], idx[3]);
            inner(x, w, y, z) - inner(x, z, y, w)
        })
    }
}

/// Both computations of the cubic form; they must agree.
#[derive(Clone, Debug)]
pub struct CubicForm {
    pub via_difference: Tensor<f64>,
    pub via_nabla_g: Tensor<f64>,
}

/// Worst residual of the conjugacy identity
/// `X h(Y,Z) = h(nabla_X Y, Z) + h(Y, nabla'_X Z)` for a pair of
/// coefficient tensors.
pub fn conjugacy_residual(
    fr: &Frame,
    gamma: &Tensor<Jet>,
    gamma_star: &Tensor<Jet>,
    which: MetricKind,
) -> f64 {
    let dim = fr.dim();
    let (h3, h) = match which {
        MetricKind::G => (&fr.g3, fr.g.values()),
        MetricKind::GTilde => (&fr.gt3, fr.g_tilde.values()),
    };
    let gv = gamma.values();
    let sv = gamma_star.values();
    let mut worst = 0.0f64;
    for i in 0..dim {
        for j in 0..dim {
            for k in 0..dim {
                let mut acc = h3.get(&[j, k]).grad(i);
                for m in 0..dim {
                    acc -= gv.get(&[m, i, j]) * h.get(&[m, k]);
                    acc -= sv.get(&[m, i, k]) * h.get(&[j, m]);
                }
                worst = worst.max(acc.abs());
            }
        }
    }
    worst
}

/// Largest coefficient difference between two connections at the point.
pub fn coefficient_distance(fr: &Frame, a: &ConnectionField, b: &ConnectionField) -> f64 {
    a.coefficients(fr).values().max_abs_diff(&b.coefficients(fr).values())
}
