//! Exact linear relations, for systems whose field is linear.

use num_traits::Zero;

use crate::dynamics::OpenDynam;
use crate::error::{Error, Result};
use crate::poly::Monomial;
use crate::rational::{format_rational, int, to_f64, Rational};

use super::linalg::{least_squares, null_space, span_basis, QVec};

/// A subspace of `ℝ^X ⊕ ℝ^X ⊕ ℝ^Y ⊕ ℝ^Y`, coordinates ordered as
/// `(x_conc, inflow, y_conc, outflow)`. The basis is kept in reduced row
/// echelon form, so equal subspaces have equal bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinRelation {
    inputs: usize,
    outputs: usize,
    basis: Vec<QVec>,
}

impl LinRelation {
    pub fn new(inputs: usize, outputs: usize, vectors: Vec<QVec>) -> Result<Self> {
        let dim = 2 * (inputs + outputs);
        if let Some(v) = vectors.iter().find(|v| v.len() != dim) {
            return Err(Error::Dimension {
                expected: dim,
                found: v.len(),
            });
        }
        Ok(LinRelation {
            inputs,
            outputs,
            basis: span_basis(vectors, dim),
        })
    }

    /// `{(x, I, x, I)}` on `n` boundary points.
    pub fn identity(n: usize) -> Self {
        let vectors = (0..2 * n)
            .map(|k| {
                let mut v = vec![Rational::zero(); 4 * n];
                v[k] = int(1);
                v[2 * n + k] = int(1);
                v
            })
            .collect();
        LinRelation::new(n, n, vectors).expect("dimensions agree")
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    pub fn ambient_dim(&self) -> usize {
        2 * (self.inputs + self.outputs)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[QVec] {
        &self.basis
    }

    pub fn basis_strings(&self) -> Vec<Vec<String>> {
        self.basis
            .iter()
            .map(|v| v.iter().map(format_rational).collect())
            .collect()
    }

    /// ∞-norm distance from `point` to its least-squares projection onto
    /// the subspace.
    pub fn distance(&self, point: &[f64]) -> Result<f64> {
        if point.len() != self.ambient_dim() {
            return Err(Error::Dimension {
                expected: self.ambient_dim(),
                found: point.len(),
            });
        }
        let n = self.ambient_dim();
        let k = self.basis.len();
        let a: Vec<Vec<f64>> = (0..n)
            .map(|i| self.basis.iter().map(|v| to_f64(&v[i])).collect())
            .collect();
        let coeffs = least_squares(&a, k, point);
        Ok((0..n)
            .map(|i| {
                let proj: f64 = a[i].iter().zip(&coeffs).map(|(x, c)| x * c).sum();
                (proj - point[i]).abs()
            })
            .fold(0.0, f64::max))
    }
}

/// `b ∘ a`: all `(x, z)` such that some middle `y` has `(x, y) ∈ a` and
/// `(y, z) ∈ b`.
pub fn compose_linear(b: &LinRelation, a: &LinRelation) -> Result<LinRelation> {
    if a.outputs != b.inputs {
        return Err(Error::Dimension {
            expected: a.outputs,
            found: b.inputs,
        });
    }
    let ax = 2 * a.inputs;
    let my = 2 * a.outputs;
    let bz = 2 * b.outputs;
    let (ka, kb) = (a.basis.len(), b.basis.len());
    // λ·A_y − μ·B_y = 0, one equation per middle coordinate.
    let rows: Vec<QVec> = (0..my)
        .map(|m| {
            a.basis
                .iter()
                .map(|v| v[ax + m].clone())
                .chain(b.basis.iter().map(|v| -v[m].clone()))
                .collect()
        })
        .collect();
    let vectors = null_space(&rows, ka + kb)
        .into_iter()
        .map(|w| {
            let mut out = vec![Rational::zero(); ax + bz];
            for (l, v) in w[..ka].iter().zip(&a.basis) {
                if !l.is_zero() {
                    for i in 0..ax {
                        out[i] += l * &v[i];
                    }
                }
            }
            for (m, v) in w[ka..].iter().zip(&b.basis) {
                if !m.is_zero() {
                    for i in 0..bz {
                        out[ax + i] += m * &v[my + i];
                    }
                }
            }
            out
        })
        .collect();
    LinRelation::new(a.inputs, b.outputs, vectors)
}

/// The steady-state relation of a system with linear, homogeneous field:
/// the kernel of `(c, I, O) ↦ v(c) + i_*(I) − o_*(O)` pushed to boundary
/// coordinates.
pub fn linear_blackbox(sys: &OpenDynam) -> Result<LinRelation> {
    let species = sys.apex();
    let field = sys.decoration();
    let legs = sys.cospan();
    let (ns, nx, ny) = (species.len(), sys.left().len(), sys.right().len());
    let ncols = ns + nx + ny;
    let mut rows = vec![vec![Rational::zero(); ncols]; ns];
    for (i, poly) in field.components().iter().enumerate() {
        for (mono, coeff) in poly.terms() {
            if mono.degree() != 1 {
                let what = if mono == &Monomial::one() {
                    "constant term".to_string()
                } else {
                    format!("degree {} term", mono.degree())
                };
                return Err(Error::Nonlinear(format!(
                    "{what} in the component of `{}`",
                    species.label(i)
                )));
            }
            let (var, _) = mono.powers().next().expect("degree one");
            let j = species.index_of(var).expect("field variables lie in the apex");
            rows[i][j] += coeff;
        }
    }
    for (x, &s) in legs.input().indices().iter().enumerate() {
        rows[s][ns + x] += Rational::from_integer(1.into());
    }
    for (y, &s) in legs.output().indices().iter().enumerate() {
        rows[s][ns + nx + y] -= Rational::from_integer(1.into());
    }
    let vectors = null_space(&rows, ncols)
        .into_iter()
        .map(|k| {
            let mut out = Vec::with_capacity(2 * (nx + ny));
            out.extend(legs.input().indices().iter().map(|&s| k[s].clone()));
            out.extend(k[ns..ns + nx].iter().cloned());
            out.extend(legs.output().indices().iter().map(|&s| k[s].clone()));
            out.extend(k[ns + nx..].iter().cloned());
            out
        })
        .collect();
    LinRelation::new(nx, ny, vectors)
}
