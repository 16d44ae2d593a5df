use crate::error::{Error, Result};
use crate::finset::FinSet;

use super::field::{check_len, OpenDynam};
use super::flow::{FlowSpec, OpenRateRhs};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SimOptions {
    /// Clamp negative concentrations to zero after every step. Off by
    /// default: the field is defined on all of `ℝ^S`.
    pub project_nonnegative: bool,
}

/// Sampled solution of the open rate equation: one row per step,
/// starting with the initial state at `t = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub species: FinSet,
    pub rows: Vec<(f64, Vec<f64>)>,
}

impl Trajectory {
    pub fn last(&self) -> Option<&(f64, Vec<f64>)> {
        self.rows.last()
    }

    pub fn column(&self, species: &str) -> Option<Vec<f64>> {
        let i = self.species.index_of(species)?;
        Some(self.rows.iter().map(|(_, c)| c[i]).collect())
    }
}

pub fn simulate(
    sys: &OpenDynam,
    c0: &[f64],
    flows: &FlowSpec,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory> {
    simulate_with(sys, c0, flows, t_end, dt, &SimOptions::default())
}

/// Classical fixed-step RK4. The final step is shortened if `t_end` is not
/// a whole multiple of `dt`.
pub fn simulate_with(
    sys: &OpenDynam,
    c0: &[f64],
    flows: &FlowSpec,
    t_end: f64,
    dt: f64,
    opts: &SimOptions,
) -> Result<Trajectory> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidStep(format!("dt must be positive, got {dt}")));
    }
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidStep(format!("t_end must be non-negative, got {t_end}")));
    }
    check_len(sys.apex().len(), c0.len())?;
    let rhs = OpenRateRhs::new(sys, flows)?;

    let ratio = t_end / dt;
    let steps = if (ratio - ratio.round()).abs() <= 1e-9 * ratio.max(1.0) {
        ratio.round() as usize
    } else {
        ratio.ceil() as usize
    };
    let time = |k: usize| if k == steps { t_end } else { k as f64 * dt };

    let n = c0.len();
    let mut c = c0.to_vec();
    let mut rows = Vec::with_capacity(steps + 1);
    rows.push((0.0, c.clone()));
    let mut tmp = vec![0.0; n];
    for k in 0..steps {
        let (t, t_next) = (time(k), time(k + 1));
        let h = t_next - t;
        let k1 = rhs.eval(&c, t);
        axpy(&c, h / 2.0, &k1, &mut tmp);
        let k2 = rhs.eval(&tmp, t + h / 2.0);
        axpy(&c, h / 2.0, &k2, &mut tmp);
        let k3 = rhs.eval(&tmp, t + h / 2.0);
        axpy(&c, h, &k3, &mut tmp);
        let k4 = rhs.eval(&tmp, t_next);
        for i in 0..n {
            c[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            if opts.project_nonnegative && c[i] < 0.0 {
                c[i] = 0.0;
            }
        }
        if c.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite { t: t_next });
        }
        rows.push((t_next, c.clone()));
    }
    Ok(Trajectory {
        species: sys.apex().clone(),
        rows,
    })
}

fn axpy(x: &[f64], a: f64, y: &[f64], out: &mut [f64]) {
    for ((o, xi), yi) in out.iter_mut().zip(x).zip(y) {
        *o = xi + a * yi;
    }
}
