//! Sampling the black-box relation and checking its functoriality.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dynamics::{boundary_flow, check_len, pullback, pushforward, OpenDynam};
use crate::error::{Error, Result};
use crate::finset::pushout;

use super::linalg::least_squares;
use super::newton::{gauss_newton, inf_norm, NewtonOptions, Outcome};
use super::steady::{
    flows_for, partition, residual, solve_internal, Restricted, SteadyTuple, STEADY_TOL,
};

#[derive(Clone, Debug, PartialEq)]
pub struct SampleOptions {
    pub samples: usize,
    pub seed: u64,
    /// Per-species concentration range; `lo == hi` pins the value.
    pub ranges: BTreeMap<String, (f64, f64)>,
    pub default_range: (f64, f64),
    pub newton: NewtonOptions,
}

impl Default for SampleOptions {
    fn default() -> Self {
        SampleOptions {
            samples: 16,
            seed: 0,
            ranges: BTreeMap::new(),
            default_range: (0.0, 2.0),
            newton: NewtonOptions::default(),
        }
    }
}

impl SampleOptions {
    pub fn new(samples: usize, seed: u64) -> Self {
        SampleOptions {
            samples,
            seed,
            ..SampleOptions::default()
        }
    }

    pub fn with_range(mut self, species: &str, lo: f64, hi: f64) -> Self {
        self.ranges.insert(species.to_string(), (lo, hi));
        self
    }

    fn range(&self, species: &str) -> (f64, f64) {
        self.ranges
            .get(species)
            .copied()
            .unwrap_or(self.default_range)
    }
}

/// A sampled tuple together with the concentrations that witness it.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledTuple {
    pub tuple: SteadyTuple,
    pub witness: Vec<f64>,
}

fn uniform(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if lo < hi {
        rng.random_range(lo..hi)
    } else {
        lo
    }
}

/// Draws boundary concentrations, solves for internal species and flows,
/// and returns every tuple that passes an independent residual check. Each
/// root contributes its particular flow solution and, if the flow kernel is
/// nontrivial, one randomly offset copy.
pub fn sample_blackbox(sys: &OpenDynam, opts: &SampleOptions) -> Result<Vec<SampledTuple>> {
    if opts.samples == 0 {
        return Err(Error::InvalidArgument("at least one sample is required".into()));
    }
    for (species, &(lo, hi)) in &opts.ranges {
        if !sys.apex().contains(species) {
            return Err(Error::UnknownLabel(species.clone()));
        }
        if !(lo <= hi && lo.is_finite() && hi.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "bad range {lo}:{hi} for `{species}`"
            )));
        }
    }
    let part = partition(sys);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut out = Vec::new();
    for _ in 0..opts.samples {
        let boundary: Vec<f64> = part
            .boundary
            .iter()
            .map(|&b| uniform(&mut rng, opts.range(sys.apex().label(b))))
            .collect();
        let newton = NewtonOptions {
            seed: rng.random(),
            ..opts.newton.clone()
        };
        for c in solve_internal(sys, &boundary, &newton)?.roots {
            let Some(flows) = flows_for(sys, &c)? else {
                continue;
            };
            let mut candidates = vec![(flows.inflow.clone(), flows.outflow.clone())];
            if !flows.kernel.is_empty() {
                let (mut i, mut o) = (flows.inflow.clone(), flows.outflow.clone());
                for (ki, ko) in &flows.kernel {
                    let w: f64 = rng.random_range(-1.0..1.0);
                    i.iter_mut().zip(ki).for_each(|(a, k)| *a += w * k);
                    o.iter_mut().zip(ko).for_each(|(a, k)| *a += w * k);
                }
                candidates.push((i, o));
            }
            for (i, o) in candidates {
                if inf_norm(&residual(sys, &c, &i, &o)?) <= STEADY_TOL {
                    out.push(SampledTuple {
                        tuple: SteadyTuple::observe(sys, &c, &i, &o)?,
                        witness: c.clone(),
                    });
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Membership {
    /// Concentrations at which the tuple is steady.
    Found(Vec<f64>),
    /// No witness located. This is not a proof of non-membership.
    NotFound(String),
}

impl Membership {
    pub fn is_found(&self) -> bool {
        matches!(self, Membership::Found(_))
    }
}

/// Searches for concentrations `c` with `i^*(c)`, `o^*(c)` as in `tuple`
/// making the tuple's flows steady.
pub fn check_membership(
    sys: &OpenDynam,
    tuple: &SteadyTuple,
    opts: &NewtonOptions,
) -> Result<Membership> {
    tuple.check_shape(sys)?;
    let legs = sys.cospan();
    let mut fixed: Vec<Option<f64>> = vec![None; sys.apex().len()];
    let observed = legs
        .input()
        .indices()
        .iter()
        .zip(&tuple.x_conc)
        .chain(legs.output().indices().iter().zip(&tuple.y_conc));
    for (&s, &v) in observed {
        match fixed[s] {
            Some(prev) if (prev - v).abs() > STEADY_TOL => {
                return Ok(Membership::NotFound(format!(
                    "boundary values disagree on `{}`: {prev} vs {v}",
                    sys.apex().label(s)
                )))
            }
            Some(_) => {}
            None => fixed[s] = Some(v),
        }
    }
    let base: Vec<f64> = fixed.iter().map(|v| v.unwrap_or(0.0)).collect();
    let offsets = boundary_flow(sys, &tuple.inflow, &tuple.outflow)?;
    let unknowns: Vec<usize> = (0..base.len()).filter(|&i| fixed[i].is_none()).collect();
    let rows: Vec<usize> = (0..base.len()).collect();
    let compiled = sys.decoration().compile();
    let problem = Restricted::new(sys, &compiled, &rows, offsets, unknowns.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let starts = if unknowns.is_empty() { 1 } else { opts.starts };
    for _ in 0..starts {
        let x0 = unknowns
            .iter()
            .map(|_| uniform(&mut rng, opts.start_range))
            .collect();
        if let Outcome::Converged(c) = problem.solve(&base, x0, opts) {
            if inf_norm(&residual(sys, &c, &tuple.inflow, &tuple.outflow)?) <= STEADY_TOL {
                return Ok(Membership::Found(c));
            }
        }
    }
    Ok(Membership::NotFound(format!(
        "no steady witness after {starts} starts"
    )))
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct FunctorialityReport {
    /// Joint steady states of both factors attempted and found.
    pub forward_attempts: usize,
    pub forward_joined: usize,
    /// Joined tuples whose composite lies in the composite's relation.
    pub forward_members: usize,
    pub forward_max_residual: f64,
    /// Tuples sampled from the composite.
    pub backward_samples: usize,
    /// Composite tuples split into two steady factor tuples.
    pub backward_split: usize,
    pub backward_max_residual: f64,
}

impl FunctorialityReport {
    pub fn forward_ok(&self) -> bool {
        self.forward_joined > 0 && self.forward_members == self.forward_joined
    }

    pub fn backward_ok(&self) -> bool {
        self.backward_samples > 0 && self.backward_split == self.backward_samples
    }

    pub fn passed(&self) -> bool {
        self.forward_ok() && self.backward_ok()
    }
}

/// Compares the relation of `g ∘ f` with the composite of the relations of
/// `f` and `g`, in both directions, on sampled points.
///
/// Forward: steady states of `f` and `g` that agree on the shared boundary
/// (`y_conc` equal and `O = I′`) are found jointly, by Gauss–Newton on both
/// steady equations plus the gluing constraints. Each joined pair must give
/// a member of the composite's relation.
///
/// Backward: every sampled tuple of `g ∘ f` is split along the pushout into
/// concentrations for each factor, and the middle flow is recovered by least
/// squares from the two steady equations. Both factor residuals must vanish.
pub fn check_functoriality(
    f: &OpenDynam,
    g: &OpenDynam,
    opts: &SampleOptions,
) -> Result<FunctorialityReport> {
    let gf = f.then(g)?;
    let mut report = FunctorialityReport::default();
    forward(f, g, &gf, opts, &mut report)?;
    backward(f, g, &gf, opts, &mut report)?;
    Ok(report)
}

fn forward(
    f: &OpenDynam,
    g: &OpenDynam,
    gf: &OpenDynam,
    opts: &SampleOptions,
    report: &mut FunctorialityReport,
) -> Result<()> {
    let (s, s2) = (f.apex().len(), g.apex().len());
    let (nx, ny, nz) = (f.left().len(), f.right().len(), g.right().len());
    let n = s + s2 + nx + ny + nz;
    let (fv, gv) = (f.decoration().compile(), g.decoration().compile());
    let (fj, gj) = (f.decoration().jacobian(), g.decoration().jacobian());
    fn index(sys: &OpenDynam) -> std::collections::HashMap<&str, usize> {
        sys.apex().iter().enumerate().map(|(i, v)| (v, i)).collect()
    }
    let (fi, gi) = (index(f), index(g));
    let fjc: Vec<Vec<_>> = fj.iter().map(|r| r.iter().map(|p| p.compile(&fi)).collect()).collect();
    let gjc: Vec<Vec<_>> = gj.iter().map(|r| r.iter().map(|p| p.compile(&gi)).collect()).collect();
    let (fin, fout) = (f.cospan().input().indices(), f.cospan().output().indices());
    let (gin, gout) = (g.cospan().input().indices(), g.cospan().output().indices());

    // Unknown layout: c | c′ | I | O (= I′) | O′.
    let (oc2, oi, oo, oo2) = (s, s + s2, s + s2 + nx, s + s2 + nx + ny);
    let eqs = |x: &[f64]| -> Vec<f64> {
        let (c, c2) = (&x[..s], &x[oc2..oi]);
        let mut r = fv.eval(c);
        for (k, &sp) in fin.iter().enumerate() {
            r[sp] += x[oi + k];
        }
        for (k, &sp) in fout.iter().enumerate() {
            r[sp] -= x[oo + k];
        }
        let mut r2 = gv.eval(c2);
        for (k, &sp) in gin.iter().enumerate() {
            r2[sp] += x[oo + k];
        }
        for (k, &sp) in gout.iter().enumerate() {
            r2[sp] -= x[oo2 + k];
        }
        r.extend(r2);
        r.extend((0..ny).map(|y| c[fout[y]] - c2[gin[y]]));
        r
    };
    let jac = |x: &[f64]| -> Vec<Vec<f64>> {
        let (c, c2) = (&x[..s], &x[oc2..oi]);
        let mut rows = vec![vec![0.0; n]; s + s2 + ny];
        for i in 0..s {
            for j in 0..s {
                rows[i][j] = fjc[i][j].eval(c);
            }
        }
        for i in 0..s2 {
            for j in 0..s2 {
                rows[s + i][oc2 + j] = gjc[i][j].eval(c2);
            }
        }
        for (k, &sp) in fin.iter().enumerate() {
            rows[sp][oi + k] += 1.0;
        }
        for (k, &sp) in fout.iter().enumerate() {
            rows[sp][oo + k] -= 1.0;
        }
        for (k, &sp) in gin.iter().enumerate() {
            rows[s + sp][oo + k] += 1.0;
        }
        for (k, &sp) in gout.iter().enumerate() {
            rows[s + sp][oo2 + k] -= 1.0;
        }
        for y in 0..ny {
            rows[s + s2 + y][fout[y]] += 1.0;
            rows[s + s2 + y][oc2 + gin[y]] -= 1.0;
        }
        rows
    };

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x9e37_79b9_7f4a_7c15);
    for _ in 0..opts.samples {
        report.forward_attempts += 1;
        let mut x0 = Vec::with_capacity(n);
        for (sys, len) in [(f, s), (g, s2)] {
            for i in 0..len {
                x0.push(uniform(&mut rng, opts.range(sys.apex().label(i))));
            }
        }
        for _ in 0..nx + ny + nz {
            x0.push(uniform(&mut rng, opts.default_range));
        }
        let Outcome::Converged(x) = gauss_newton(x0, eqs, jac, &opts.newton) else {
            continue;
        };
        let (c, c2) = (&x[..s], &x[oc2..oi]);
        let (i, o, o2) = (&x[oi..oo], &x[oo..oo2], &x[oo2..]);
        let rf = inf_norm(&residual(f, c, i, o)?);
        let rg = inf_norm(&residual(g, c2, o, o2)?);
        let t1 = SteadyTuple::observe(f, c, i, o)?;
        let t2 = SteadyTuple::observe(g, c2, o, o2)?;
        let glued = t1
            .y_conc
            .iter()
            .zip(&t2.x_conc)
            .all(|(a, b)| (a - b).abs() <= STEADY_TOL);
        if rf > STEADY_TOL || rg > STEADY_TOL || !glued {
            continue;
        }
        report.forward_joined += 1;
        let composite = SteadyTuple {
            x_conc: t1.x_conc,
            inflow: t1.inflow,
            y_conc: t2.y_conc,
            outflow: t2.outflow,
        };
        if let Membership::Found(w) = check_membership(gf, &composite, &opts.newton)? {
            report.forward_members += 1;
            let r = inf_norm(&residual(gf, &w, &composite.inflow, &composite.outflow)?);
            report.forward_max_residual = report.forward_max_residual.max(r.max(rf).max(rg));
        }
    }
    Ok(())
}

fn backward(
    f: &OpenDynam,
    g: &OpenDynam,
    gf: &OpenDynam,
    opts: &SampleOptions,
    report: &mut FunctorialityReport,
) -> Result<()> {
    let (_, j, j2) = pushout(f.cospan().output(), g.cospan().input())?;
    check_len(gf.apex().len(), j.cod().len())?;
    let ny = f.right().len();
    let (s, s2) = (f.apex().len(), g.apex().len());
    // o_*(O) on f's species stacked over i′_*(O) on g's species.
    let mut a = vec![vec![0.0; ny]; s + s2];
    for (y, &sp) in f.cospan().output().indices().iter().enumerate() {
        a[sp][y] += 1.0;
    }
    for (y, &sp) in g.cospan().input().indices().iter().enumerate() {
        a[s + sp][y] += 1.0;
    }
    for sample in sample_blackbox(gf, opts)? {
        report.backward_samples += 1;
        let b = &sample.witness;
        let c = pullback(&j, b)?;
        let c2 = pullback(&j2, b)?;
        let t = &sample.tuple;
        // f: o_*(O) = v(c) + i_*(I);  g: i′_*(O) = o′_*(O′) − v′(c′).
        let mut rhs = f.decoration().eval(&c)?;
        for (r, p) in rhs.iter_mut().zip(pushforward(f.cospan().input(), &t.inflow)?) {
            *r += p;
        }
        let mut rhs2 = pushforward(g.cospan().output(), &t.outflow)?;
        for (r, v) in rhs2.iter_mut().zip(g.decoration().eval(&c2)?) {
            *r -= v;
        }
        rhs.extend(rhs2);
        let middle = least_squares(&a, ny, &rhs);
        let rf = inf_norm(&residual(f, &c, &t.inflow, &middle)?);
        let rg = inf_norm(&residual(g, &c2, &middle, &t.outflow)?);
        let worst = rf.max(rg);
        report.backward_max_residual = report.backward_max_residual.max(worst);
        if worst <= STEADY_TOL {
            report.backward_split += 1;
        }
    }
    Ok(())
}
