use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use crate::cospan::{Decoration, OpenDecorated};
use crate::error::{Error, Result};
use crate::finset::{coproduct, FinFun, FinSet};
use crate::poly::{CompiledPoly, Monomial, Poly};
use crate::rational::{format_rational, int};
use crate::reaction::{OpenRxNet, RxNet};

/// An algebraic vector field on `ℝ^S`: one polynomial per species.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PolyField {
    vars: FinSet,
    components: Vec<Poly>,
}

pub type OpenDynam = OpenDecorated<PolyField>;

impl PolyField {
    pub fn new(vars: FinSet, components: Vec<Poly>) -> Result<Self> {
        if components.len() != vars.len() {
            return Err(Error::Dimension {
                expected: vars.len(),
                found: components.len(),
            });
        }
        for p in &components {
            if let Some(v) = p.variables().into_iter().find(|v| !vars.contains(v)) {
                return Err(Error::UnknownLabel(v));
            }
        }
        Ok(PolyField { vars, components })
    }

    pub fn zero(vars: FinSet) -> Self {
        let components = vec![Poly::zero(); vars.len()];
        PolyField { vars, components }
    }

    pub fn from_map(vars: FinSet, mut comps: BTreeMap<String, Poly>) -> Result<Self> {
        let components = vars
            .iter()
            .map(|v| comps.remove(v).unwrap_or_default())
            .collect();
        if let Some(extra) = comps.into_keys().next() {
            return Err(Error::UnknownLabel(extra));
        }
        PolyField::new(vars, components)
    }

    pub fn vars(&self) -> &FinSet {
        &self.vars
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn component(&self, var: &str) -> Option<&Poly> {
        self.vars.index_of(var).map(|i| &self.components[i])
    }

    pub fn degree(&self) -> u32 {
        self.components.iter().map(Poly::degree).max().unwrap_or(0)
    }

    /// `f_* ∘ v ∘ f^*`, computed symbolically: each variable `σ` becomes
    /// `f(σ)` inside every component, then components are summed over fibers.
    pub fn push_forward(&self, f: &FinFun) -> Result<PolyField> {
        if f.dom() != &self.vars {
            return Err(Error::DecorationMismatch {
                expected: f.dom().to_string(),
                found: self.vars.to_string(),
            });
        }
        let map = f.label_map();
        let rename = |v: &str| map[v].to_string();
        let mut components = vec![Poly::zero(); f.cod().len()];
        for (i, p) in self.components.iter().enumerate() {
            let j = f.apply(i);
            components[j] = &components[j] + &p.rename(&rename);
        }
        Ok(PolyField {
            vars: f.cod().clone(),
            components,
        })
    }

    /// Block sum of two fields on the canonical coproduct of their variables.
    pub fn disjoint_sum(&self, other: &PolyField) -> PolyField {
        let (vars, inl, inr) = coproduct(&self.vars, &other.vars);
        let mut components = vec![Poly::zero(); vars.len()];
        for (field, inj) in [(self, &inl), (other, &inr)] {
            let map = inj.label_map();
            let rename = |v: &str| map[v].to_string();
            for (i, p) in field.components.iter().enumerate() {
                components[inj.apply(i)] = p.rename(&rename);
            }
        }
        PolyField { vars, components }
    }

    pub fn compile(&self) -> CompiledField {
        let index: HashMap<&str, usize> = self.vars.iter().enumerate().map(|(i, v)| (v, i)).collect();
        CompiledField {
            components: self.components.iter().map(|p| p.compile(&index)).collect(),
        }
    }

    pub fn eval(&self, c: &[f64]) -> Result<Vec<f64>> {
        check_len(self.vars.len(), c.len())?;
        Ok(self.compile().eval(c))
    }

    /// Jacobian entries `∂v_i/∂x_j` as polynomials.
    pub fn jacobian(&self) -> Vec<Vec<Poly>> {
        self.components
            .iter()
            .map(|p| self.vars.iter().map(|v| p.derivative(v)).collect())
            .collect()
    }
}

impl Decoration for PolyField {
    fn carrier(&self) -> &FinSet {
        &self.vars
    }

    fn map_along(&self, f: &FinFun) -> Result<Self> {
        self.push_forward(f)
    }

    fn combine(&self, other: &Self) -> Self {
        self.disjoint_sum(other)
    }

    fn empty() -> Self {
        PolyField::default()
    }

    fn fingerprint(&self, idx: usize) -> String {
        let me = self.vars.label(idx);
        let shape = |p: &Poly, var: Option<&str>| -> Vec<String> {
            let mut rows: Vec<String> = p
                .terms()
                .map(|(m, c)| {
                    let mut exps: Vec<u32> = m.powers().map(|(_, e)| e).collect();
                    exps.sort_unstable();
                    let own = var.map(|v| m.exponent(v)).unwrap_or(0);
                    format!("{}|{:?}|{own}", format_rational(c), exps)
                })
                .collect();
            rows.sort();
            rows
        };
        let own = shape(&self.components[idx], None).join(",");
        let mut uses: Vec<String> = self
            .components
            .iter()
            .filter(|p| p.variables().contains(me))
            .map(|p| shape(p, Some(me)).join(","))
            .collect();
        uses.sort();
        format!("{own}#{}", uses.join(";"))
    }
}

/// A field lowered to double precision for repeated evaluation.
#[derive(Clone, Debug)]
pub struct CompiledField {
    components: Vec<CompiledPoly>,
}

impl CompiledField {
    pub fn eval(&self, c: &[f64]) -> Vec<f64> {
        self.components.iter().map(|p| p.eval(c)).collect()
    }

    pub fn eval_into(&self, c: &[f64], out: &mut [f64]) {
        for (o, p) in out.iter_mut().zip(&self.components) {
            *o = p.eval(c);
        }
    }

    pub fn component(&self, i: usize) -> &CompiledPoly {
        &self.components[i]
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

/// The mass-action vector field
/// `v(c) = Σ_τ r(τ) (t(τ) − s(τ)) c^{s(τ)}`.
pub fn mass_action_field(r: &RxNet) -> PolyField {
    let vars = r.species().clone();
    let mut components = vec![Poly::zero(); vars.len()];
    for t in r.transitions() {
        let mono = Monomial::from_powers(t.source.iter());
        for (i, s) in vars.iter().enumerate() {
            let net = t.target.get(s) as i64 - t.source.get(s) as i64;
            if net != 0 {
                let coeff = &t.rate * int(net);
                if !coeff.is_zero() {
                    components[i].add_term(mono.clone(), coeff);
                }
            }
        }
    }
    PolyField { vars, components }
}

/// Copies coordinates back along `f`: `f^*(c)(σ) = c(f(σ))`.
pub fn pullback(f: &FinFun, c: &[f64]) -> Result<Vec<f64>> {
    check_len(f.cod().len(), c.len())?;
    Ok(f.indices().iter().map(|&j| c[j]).collect())
}

/// Sums coordinates over fibers: `f_*(w)(σ') = Σ_{f(σ) = σ'} w(σ)`.
pub fn pushforward(f: &FinFun, w: &[f64]) -> Result<Vec<f64>> {
    check_len(f.dom().len(), w.len())?;
    let mut out = vec![0.0; f.cod().len()];
    for (i, &j) in f.indices().iter().enumerate() {
        out[j] += w[i];
    }
    Ok(out)
}

/// Same cospan, decorated by the mass-action field of the network.
pub fn grey_box(net: &OpenRxNet) -> OpenDynam {
    net.map_decoration(mass_action_field)
        .expect("mass-action field lives on the species set")
}

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::Dimension { expected, found });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::reaction::{Complex, Transition};

    fn set(labels: &[&str]) -> FinSet {
        FinSet::new(labels.iter().copied()).unwrap()
    }

    fn var(v: &str) -> Poly {
        Poly::var(v)
    }

    fn cx(terms: &[(&str, u32)]) -> Complex {
        Complex::from_terms(terms.iter().copied())
    }

    #[test]
    fn a_plus_b_to_2c() {
        let r = RxNet::new(
            set(&["A", "B", "C"]),
            vec![Transition::new("alpha", cx(&[("A", 1), ("B", 1)]), cx(&[("C", 2)]), ratio(3, 7))],
        )
        .unwrap();
        let v = mass_action_field(&r);
        let ab = (&var("A") * &var("B")).scale(&ratio(3, 7));
        assert_eq!(v.component("A").unwrap(), &-&ab);
        assert_eq!(v.component("B").unwrap(), &-&ab);
        assert_eq!(v.component("C").unwrap(), &ab.scale(&int(2)));
    }

    #[test]
    fn no_transitions_gives_zero_field() {
        let v = mass_action_field(&RxNet::discrete(set(&["A", "B"])));
        assert_eq!(v, PolyField::zero(set(&["A", "B"])));
    }

    #[test]
    fn collapsing_cancels() {
        let v = PolyField::new(set(&["A", "B"]), vec![-var("A"), var("A")]).unwrap();
        let f = FinFun::from_pairs(v.vars().clone(), set(&["Z"]), [("A", "Z"), ("B", "Z")])
            .unwrap();
        assert_eq!(v.push_forward(&f).unwrap(), PolyField::zero(set(&["Z"])));
    }

    #[test]
    fn pullback_copies_and_pushforward_sums() {
        let src = set(&["A", "B", "C", "D", "E", "F"]);
        let dst = set(&["A", "B", "C", "E", "F"]);
        let f = FinFun::from_pairs(
            src,
            dst,
            [("A", "A"), ("B", "B"), ("C", "C"), ("D", "C"), ("E", "E"), ("F", "F")],
        )
        .unwrap();
        let c = pullback(&f, &[1.0, 2.0, 3.0, 5.0, 7.0]).unwrap();
        assert_eq!(c, vec![1.0, 2.0, 3.0, 3.0, 5.0, 7.0]);
        let w = pushforward(&f, &[1.0, 1.0, 1.0, 1.0, 1.0, 1.0]).unwrap();
        assert_eq!(w, vec![1.0, 1.0, 2.0, 1.0, 1.0]);
        assert!(pullback(&f, &[1.0]).is_err());
    }

    #[test]
    fn disjoint_sum_with_empty_is_unit() {
        let v = PolyField::new(set(&["A"]), vec![var("A")]).unwrap();
        assert_eq!(v.disjoint_sum(&PolyField::empty()), v);
        assert_eq!(PolyField::empty().disjoint_sum(&v), v);
    }

    #[test]
    fn rejects_foreign_variables() {
        assert!(PolyField::new(set(&["A"]), vec![var("B")]).is_err());
        assert!(PolyField::new(set(&["A"]), vec![]).is_err());
    }
}
