//! Steady states of open dynamical systems.

use std::collections::BTreeSet;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dynamics::{boundary_flow, check_len, pullback, CompiledField, OpenDynam};
use crate::error::Result;
use crate::poly::CompiledPoly;
use crate::rational::{from_f64, int, to_f64, Rational};

use super::linalg::{solve, QVec};
use super::newton::{gauss_newton, inf_norm, NewtonOptions, Outcome};

/// Absolute tolerance for calling a point steady, shared by sampling,
/// membership and the functoriality checks.
pub const STEADY_TOL: f64 = 1e-9;

/// Internal components of `v(c)` at most this large count as zero when
/// solving for boundary flows.
pub const INTERNAL_ZERO_TOL: f64 = 1e-12;

/// A point of the black-box relation: `(i^*(c), I, o^*(c), O)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SteadyTuple {
    pub x_conc: Vec<f64>,
    pub inflow: Vec<f64>,
    pub y_conc: Vec<f64>,
    pub outflow: Vec<f64>,
}

impl SteadyTuple {
    /// The tuple observed at concentrations `c` with the given flows.
    pub fn observe(sys: &OpenDynam, c: &[f64], inflow: &[f64], outflow: &[f64]) -> Result<Self> {
        check_len(sys.left().len(), inflow.len())?;
        check_len(sys.right().len(), outflow.len())?;
        Ok(SteadyTuple {
            x_conc: pullback(sys.cospan().input(), c)?,
            inflow: inflow.to_vec(),
            y_conc: pullback(sys.cospan().output(), c)?,
            outflow: outflow.to_vec(),
        })
    }

    /// Coordinates in the order `(x_conc, inflow, y_conc, outflow)`.
    pub fn to_vector(&self) -> Vec<f64> {
        [&self.x_conc, &self.inflow, &self.y_conc, &self.outflow]
            .into_iter()
            .flatten()
            .copied()
            .collect()
    }

    pub(crate) fn check_shape(&self, sys: &OpenDynam) -> Result<()> {
        check_len(sys.left().len(), self.x_conc.len())?;
        check_len(sys.left().len(), self.inflow.len())?;
        check_len(sys.right().len(), self.y_conc.len())?;
        check_len(sys.right().len(), self.outflow.len())
    }
}

/// `v(c) + i_*(I) − o_*(O)`.
pub fn residual(sys: &OpenDynam, c: &[f64], inflow: &[f64], outflow: &[f64]) -> Result<Vec<f64>> {
    let mut r = sys.decoration().eval(c)?;
    for (ri, b) in r.iter_mut().zip(boundary_flow(sys, inflow, outflow)?) {
        *ri += b;
    }
    Ok(r)
}

pub fn is_steady(sys: &OpenDynam, c: &[f64], inflow: &[f64], outflow: &[f64]) -> Result<bool> {
    Ok(inf_norm(&residual(sys, c, inflow, outflow)?) <= STEADY_TOL)
}

/// Apex indices split into boundary species `i(X) ∪ o(Y)` and the rest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryPartition {
    pub boundary: Vec<usize>,
    pub internal: Vec<usize>,
}

impl BoundaryPartition {
    pub fn boundary_labels<'a>(&self, sys: &'a OpenDynam) -> Vec<&'a str> {
        self.boundary.iter().map(|&i| sys.apex().label(i)).collect()
    }

    pub fn internal_labels<'a>(&self, sys: &'a OpenDynam) -> Vec<&'a str> {
        self.internal.iter().map(|&i| sys.apex().label(i)).collect()
    }
}

pub fn partition(sys: &OpenDynam) -> BoundaryPartition {
    let legs = sys.cospan();
    let hit: BTreeSet<usize> = legs
        .input()
        .indices()
        .iter()
        .chain(legs.output().indices())
        .copied()
        .collect();
    let internal = (0..sys.apex().len()).filter(|i| !hit.contains(i)).collect();
    BoundaryPartition {
        boundary: hit.into_iter().collect(),
        internal,
    }
}

/// Result of solving for internal concentrations at fixed boundary values.
#[derive(Clone, Debug, PartialEq)]
pub struct InternalSolution {
    /// Distinct full concentration vectors found, in start order.
    pub roots: Vec<Vec<f64>>,
    /// Internal species that no internal equation involves; any value is
    /// steady, so roots carry the start value.
    pub underdetermined: Vec<usize>,
    pub singular_starts: usize,
}

/// Equations `v_σ(c) + offset_σ = 0` for `σ ∈ rows`, solved for the
/// coordinates in `unknowns` with everything else frozen.
pub(crate) struct Restricted<'a> {
    components: Vec<&'a CompiledPoly>,
    offsets: Vec<f64>,
    jacobian: Vec<Vec<CompiledPoly>>,
    unknowns: Vec<usize>,
}

impl<'a> Restricted<'a> {
    pub(crate) fn new(
        sys: &OpenDynam,
        compiled: &'a CompiledField,
        rows: &[usize],
        offsets: Vec<f64>,
        unknowns: Vec<usize>,
    ) -> Self {
        let field = sys.decoration();
        let index = sys
            .apex()
            .iter()
            .enumerate()
            .map(|(i, v)| (v, i))
            .collect();
        let jacobian = rows
            .iter()
            .map(|&r| {
                unknowns
                    .iter()
                    .map(|&u| {
                        field.components()[r]
                            .derivative(sys.apex().label(u))
                            .compile(&index)
                    })
                    .collect()
            })
            .collect();
        Restricted {
            components: rows.iter().map(|&r| compiled.component(r)).collect(),
            offsets,
            jacobian,
            unknowns,
        }
    }

    fn fill(&self, base: &[f64], x: &[f64]) -> Vec<f64> {
        let mut c = base.to_vec();
        for (&u, &v) in self.unknowns.iter().zip(x) {
            c[u] = v;
        }
        c
    }

    /// Runs Gauss–Newton from `base` with the unknowns replaced by `x0`.
    pub(crate) fn solve(&self, base: &[f64], x0: Vec<f64>, opts: &NewtonOptions) -> Outcome {
        let f = |x: &[f64]| {
            let c = self.fill(base, x);
            self.components
                .iter()
                .zip(&self.offsets)
                .map(|(p, o)| p.eval(&c) + o)
                .collect()
        };
        let jac = |x: &[f64]| {
            let c = self.fill(base, x);
            self.jacobian
                .iter()
                .map(|row| row.iter().map(|p| p.eval(&c)).collect())
                .collect()
        };
        match gauss_newton(x0, f, jac, opts) {
            Outcome::Converged(x) => Outcome::Converged(self.fill(base, &x)),
            other => other,
        }
    }
}

/// Multi-start Newton on `v(c)|_internal = 0` with the boundary species
/// frozen at `boundary_vals` (ordered as [`partition`]'s boundary list).
pub fn solve_internal(
    sys: &OpenDynam,
    boundary_vals: &[f64],
    opts: &NewtonOptions,
) -> Result<InternalSolution> {
    let part = partition(sys);
    check_len(part.boundary.len(), boundary_vals.len())?;
    let field = sys.decoration();
    let rows: Vec<usize> = part
        .internal
        .iter()
        .copied()
        .filter(|&i| !field.components()[i].is_zero())
        .collect();
    let involved: BTreeSet<usize> = rows
        .iter()
        .flat_map(|&r| field.components()[r].variables())
        .filter_map(|v| sys.apex().index_of(&v))
        .collect();
    let unknowns: Vec<usize> = part
        .internal
        .iter()
        .copied()
        .filter(|i| involved.contains(i))
        .collect();
    let underdetermined: Vec<usize> = part
        .internal
        .iter()
        .copied()
        .filter(|i| !involved.contains(i) && !rows.contains(i))
        .collect();

    let compiled = field.compile();
    let problem = Restricted::new(sys, &compiled, &rows, vec![0.0; rows.len()], unknowns.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let (lo, hi) = opts.start_range;
    let draw = |rng: &mut ChaCha8Rng| if lo < hi { rng.random_range(lo..hi) } else { lo };

    let mut base = vec![0.0; sys.apex().len()];
    for (&b, &v) in part.boundary.iter().zip(boundary_vals) {
        base[b] = v;
    }
    let mut roots: Vec<Vec<f64>> = Vec::new();
    let mut singular_starts = 0;
    let starts = if unknowns.is_empty() { 1 } else { opts.starts };
    for _ in 0..starts {
        let mut start = base.clone();
        for &u in &underdetermined {
            start[u] = draw(&mut rng);
        }
        let x0: Vec<f64> = unknowns.iter().map(|_| draw(&mut rng)).collect();
        match problem.solve(&start, x0, opts) {
            Outcome::Converged(c) => {
                let fresh = roots.iter().all(|r| {
                    unknowns
                        .iter()
                        .any(|&u| (r[u] - c[u]).abs() > 1e-6 * r[u].abs().max(1.0))
                });
                if fresh {
                    roots.push(c);
                }
            }
            Outcome::Singular => singular_starts += 1,
            Outcome::Failed => {}
        }
    }
    Ok(InternalSolution {
        roots,
        underdetermined,
        singular_starts,
    })
}

/// Flows making `c` steady: one particular solution and a kernel basis.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineFlowSolution {
    pub inflow: Vec<f64>,
    pub outflow: Vec<f64>,
    /// Basis of `{(I, O) : i_*(I) = o_*(O)}`.
    pub kernel: Vec<(Vec<f64>, Vec<f64>)>,
}

/// Solves `i_*(I) − o_*(O) = −v(c)` exactly over the rationals. Returns
/// `None` when some internal component of `v(c)` exceeds
/// [`INTERNAL_ZERO_TOL`], since no flow reaches internal species.
pub fn flows_for(sys: &OpenDynam, c: &[f64]) -> Result<Option<AffineFlowSolution>> {
    let mut v = sys.decoration().eval(c)?;
    let part = partition(sys);
    for &i in &part.internal {
        if v[i].abs() > INTERNAL_ZERO_TOL {
            return Ok(None);
        }
        v[i] = 0.0;
    }
    let (nx, ny) = (sys.left().len(), sys.right().len());
    let legs = sys.cospan();
    let mut rows: Vec<QVec> = vec![vec![Rational::zero(); nx + ny]; v.len()];
    for (x, &s) in legs.input().indices().iter().enumerate() {
        rows[s][x] = int(1);
    }
    for (y, &s) in legs.output().indices().iter().enumerate() {
        rows[s][nx + y] = int(-1);
    }
    let rhs: QVec = v.iter().map(|&x| -from_f64(x)).collect();
    let Some((particular, kernel)) = solve(&rows, &rhs, nx + ny) else {
        return Ok(None);
    };
    let split = |w: &QVec| -> (Vec<f64>, Vec<f64>) {
        (
            w[..nx].iter().map(to_f64).collect(),
            w[nx..].iter().map(to_f64).collect(),
        )
    };
    let (inflow, outflow) = split(&particular);
    Ok(Some(AffineFlowSolution {
        inflow,
        outflow,
        kernel: kernel.iter().map(split).collect(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;
    use crate::dynamics::grey_box;

    fn system(text: &str) -> OpenDynam {
        grey_box(&parse(text).unwrap())
    }

    const F: &str = "species A B C
transition alpha: A + B -> 2 C @ 1
input 1 -> A
input 2 -> B
input 3 -> B
output 4 -> C
";

    #[test]
    fn residual_of_black_one_example() {
        let f = system(F);
        for c_val in [0.0, 0.7, 3.0] {
            let r = residual(&f, &[1.0, 1.0, c_val], &[1.0, 0.4, 0.6], &[2.0]).unwrap();
            assert!(inf_norm(&r) <= 1e-15, "{r:?}");
        }
    }

    #[test]
    fn zero_state_is_steady_without_constant_terms() {
        let f = system(F);
        assert!(is_steady(&f, &[0.0; 3], &[0.0; 3], &[0.0]).unwrap());
    }

    #[test]
    fn partitions() {
        let f = system(F);
        assert!(partition(&f).internal.is_empty());
        let closed = system("species A B\ntransition t: A -> B @ 1\n");
        let p = partition(&closed);
        assert!(p.boundary.is_empty());
        assert_eq!(p.internal, vec![0, 1]);
    }

    #[test]
    fn internal_root_of_composite() {
        let fg = system(
            "species A B C E F
transition alpha: A + B -> 2 C @ 1
transition beta: C -> E + F @ 2
input 1 -> A
input 2 -> B
input 3 -> B
output 5 -> E
output 6 -> F
",
        );
        let p = partition(&fg);
        assert_eq!(p.internal_labels(&fg), ["C"]);
        let sol = solve_internal(&fg, &[1.0, 1.0, 0.5, 0.5], &NewtonOptions::default()).unwrap();
        assert_eq!(sol.roots.len(), 1);
        assert!((sol.roots[0][2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn untouched_internal_species_are_underdetermined() {
        let sys = system("species A Z\ntransition t: A -> 0 @ 1\ninput 1 -> A\n");
        let sol = solve_internal(&sys, &[0.3], &NewtonOptions::default()).unwrap();
        assert_eq!(sol.underdetermined, vec![1]);
        assert_eq!(sol.roots.len(), 1);
        assert_eq!(sol.roots[0][0], 0.3);
    }

    #[test]
    fn no_internal_species_returns_the_boundary_point() {
        let f = system(F);
        let sol = solve_internal(&f, &[1.0, 2.0, 3.0], &NewtonOptions::default()).unwrap();
        assert_eq!(sol.roots, vec![vec![1.0, 2.0, 3.0]]);
    }

    #[test]
    fn flows_for_black_one() {
        let f = system(F);
        let sol = flows_for(&f, &[2.0, 0.5, 7.0]).unwrap().unwrap();
        assert_eq!(sol.inflow[0], 1.0);
        assert_eq!(sol.inflow[1] + sol.inflow[2], 1.0);
        assert_eq!(sol.outflow, vec![2.0]);
        assert_eq!(sol.kernel.len(), 1);
        let (ki, ko) = &sol.kernel[0];
        assert_eq!(ki[0], 0.0);
        assert_eq!(ki[1], -ki[2]);
        assert_eq!(ko, &vec![0.0]);
    }

    #[test]
    fn closed_system_away_from_equilibrium_has_no_flows() {
        let sys = system("species A B\ntransition t: A -> B @ 1\n");
        assert!(flows_for(&sys, &[1.0, 0.0]).unwrap().is_none());
        assert!(flows_for(&sys, &[0.0, 1.0]).unwrap().is_some());
    }
}
