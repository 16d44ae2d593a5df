//! Reaction networks with rate constants, their Petri-net form, and the
//! decoration structure that makes open networks composable.
//!
//! Pushing a network forward along `f : S → S'` keeps every transition and
//! its rate, and replaces each complex by its fiber sums:
//! `f_*(κ)(σ') = Σ_{f(σ) = σ'} κ(σ)`.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use num_traits::Signed;

use crate::cospan::{Decoration, OpenDecorated};
use crate::error::{Error, Result};
use crate::finset::{coproduct, disjoint_labels, FinFun, FinSet};
use crate::rational::{format_rational, Rational};

/// A finite multiset of species. Zero multiplicities are never stored.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Complex(BTreeMap<String, u32>);

impl Complex {
    pub fn new() -> Self {
        Complex::default()
    }

    pub fn from_terms<'a, I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (&'a str, u32)>,
    {
        let mut c = Complex::new();
        for (s, n) in terms {
            c.add(s, n);
        }
        c
    }

    pub fn add(&mut self, species: &str, count: u32) {
        if count > 0 {
            *self.0.entry(species.to_string()).or_insert(0) += count;
        }
    }

    pub fn get(&self, species: &str) -> u32 {
        self.0.get(species).copied().unwrap_or(0)
    }

    /// Total number of tokens.
    pub fn total(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u32)> {
        self.0.iter().map(|(s, &n)| (s.as_str(), n))
    }

    fn relabel(&self, f: &FinFun) -> Complex {
        let map = f.label_map();
        let mut out = Complex::new();
        for (s, n) in self.iter() {
            out.add(map[s], n);
        }
        out
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .iter()
            .map(|(s, n)| if n == 1 { s.to_string() } else { format!("{n} {s}") })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    pub name: String,
    pub source: Complex,
    pub target: Complex,
    pub rate: Rational,
}

impl Transition {
    pub fn new(
        name: impl Into<String>,
        source: Complex,
        target: Complex,
        rate: Rational,
    ) -> Self {
        Transition {
            name: name.into(),
            source,
            target,
            rate,
        }
    }
}

/// A reaction network with rates on a fixed set of species.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RxNet {
    species: FinSet,
    transitions: Vec<Transition>,
}

impl RxNet {
    pub fn new(species: FinSet, transitions: Vec<Transition>) -> Result<Self> {
        let mut names = HashSet::new();
        for t in &transitions {
            if !names.insert(t.name.as_str()) {
                return Err(Error::DuplicateLabel(t.name.clone()));
            }
            if !t.rate.is_positive() {
                return Err(Error::NonPositiveRate(format_rational(&t.rate)));
            }
            for (s, _) in t.source.iter().chain(t.target.iter()) {
                if !species.contains(s) {
                    return Err(Error::InvalidNetwork(format!(
                        "transition {} mentions undeclared species {s}",
                        t.name
                    )));
                }
            }
        }
        Ok(RxNet {
            species,
            transitions,
        })
    }

    /// The network on `species` with no transitions.
    pub fn discrete(species: FinSet) -> Self {
        RxNet {
            species,
            transitions: Vec::new(),
        }
    }

    pub fn species(&self) -> &FinSet {
        &self.species
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    /// Every complex appearing as a source or target, deduplicated.
    pub fn complexes(&self) -> BTreeSet<Complex> {
        self.transitions
            .iter()
            .flat_map(|t| [t.source.clone(), t.target.clone()])
            .collect()
    }

    /// True when every transition consumes and produces exactly one token.
    pub fn is_markov(&self) -> bool {
        self.transitions
            .iter()
            .all(|t| t.source.total() == 1 && t.target.total() == 1)
    }

    /// Pushes every complex forward along `f`; transitions and rates are kept.
    pub fn push_forward(&self, f: &FinFun) -> Result<RxNet> {
        if f.dom() != &self.species {
            return Err(Error::DecorationMismatch {
                expected: f.dom().to_string(),
                found: self.species.to_string(),
            });
        }
        let transitions = self
            .transitions
            .iter()
            .map(|t| Transition {
                name: t.name.clone(),
                source: t.source.relabel(f),
                target: t.target.relabel(f),
                rate: t.rate.clone(),
            })
            .collect();
        Ok(RxNet {
            species: f.cod().clone(),
            transitions,
        })
    }

    /// Disjoint union on the canonical coproduct of the species sets.
    /// Colliding transition names get the same side suffixes as species.
    pub fn disjoint_union(&self, other: &RxNet) -> RxNet {
        let (species, inl, inr) = coproduct(&self.species, &other.species);
        let ln: Vec<String> = self.transitions.iter().map(|t| t.name.clone()).collect();
        let rn: Vec<String> = other.transitions.iter().map(|t| t.name.clone()).collect();
        let (ln, rn) = disjoint_labels(&ln, &rn);
        let left = self.transitions.iter().zip(ln).map(|(t, name)| Transition {
            name,
            source: t.source.relabel(&inl),
            target: t.target.relabel(&inl),
            rate: t.rate.clone(),
        });
        let right = other.transitions.iter().zip(rn).map(|(t, name)| Transition {
            name,
            source: t.source.relabel(&inr),
            target: t.target.relabel(&inr),
            rate: t.rate.clone(),
        });
        RxNet {
            species,
            transitions: left.chain(right).collect(),
        }
    }

    pub fn to_petri(&self) -> PetriView {
        let ns = self.species.len();
        let nt = self.transitions.len();
        let mut m = vec![vec![0; nt]; ns];
        let mut n = vec![vec![0; nt]; ns];
        for (k, t) in self.transitions.iter().enumerate() {
            for (s, c) in t.source.iter() {
                m[self.species.index_of(s).unwrap()][k] = c;
            }
            for (s, c) in t.target.iter() {
                n[self.species.index_of(s).unwrap()][k] = c;
            }
        }
        PetriView {
            species: self.species.clone(),
            transitions: self.transitions.iter().map(|t| t.name.clone()).collect(),
            rates: self.transitions.iter().map(|t| t.rate.clone()).collect(),
            m,
            n,
        }
    }

    pub fn from_petri(p: &PetriView) -> Result<RxNet> {
        let nt = p.transitions.len();
        let ns = p.species.len();
        let shape_ok = p.rates.len() == nt
            && p.m.len() == ns
            && p.n.len() == ns
            && p.m.iter().chain(p.n.iter()).all(|row| row.len() == nt);
        if !shape_ok {
            return Err(Error::InvalidNetwork(
                "Petri net tables do not match species and transitions".into(),
            ));
        }
        let transitions = (0..nt)
            .map(|k| {
                let column = |table: &[Vec<u32>]| {
                    Complex::from_terms(
                        (0..ns).map(|i| (p.species.label(i), table[i][k])),
                    )
                };
                Transition {
                    name: p.transitions[k].clone(),
                    source: column(&p.m),
                    target: column(&p.n),
                    rate: p.rates[k].clone(),
                }
            })
            .collect();
        RxNet::new(p.species.clone(), transitions)
    }

    fn sorted_transition_data(&self) -> Vec<(&Complex, &Complex, &Rational)> {
        let mut v: Vec<_> = self
            .transitions
            .iter()
            .map(|t| (&t.source, &t.target, &t.rate))
            .collect();
        v.sort();
        v
    }
}

impl Decoration for RxNet {
    fn carrier(&self) -> &FinSet {
        &self.species
    }

    fn map_along(&self, f: &FinFun) -> Result<Self> {
        self.push_forward(f)
    }

    fn combine(&self, other: &Self) -> Self {
        self.disjoint_union(other)
    }

    fn empty() -> Self {
        RxNet::default()
    }

    /// Networks are compared up to renaming and reordering of transitions.
    fn same_as(&self, other: &Self) -> bool {
        self.species == other.species
            && self.sorted_transition_data() == other.sorted_transition_data()
    }

    fn fingerprint(&self, idx: usize) -> String {
        let s = self.species.label(idx);
        let mut rows: Vec<String> = self
            .transitions
            .iter()
            .filter(|t| t.source.get(s) + t.target.get(s) > 0)
            .map(|t| {
                format!(
                    "{}:{}:{}:{}:{}",
                    t.source.get(s),
                    t.target.get(s),
                    t.source.total(),
                    t.target.total(),
                    t.rate
                )
            })
            .collect();
        rows.sort();
        rows.join(";")
    }
}

/// Species × transition incidence tables, with rates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PetriView {
    pub species: FinSet,
    pub transitions: Vec<String>,
    pub rates: Vec<Rational>,
    /// `m[σ][τ]`: how often `σ` is an input of `τ`.
    pub m: Vec<Vec<u32>>,
    /// `n[σ][τ]`: how often `σ` is an output of `τ`.
    pub n: Vec<Vec<u32>>,
}

pub type OpenRxNet = OpenDecorated<RxNet>;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn set(labels: &[&str]) -> FinSet {
        FinSet::new(labels.iter().copied()).unwrap()
    }

    fn cx(terms: &[(&str, u32)]) -> Complex {
        Complex::from_terms(terms.iter().copied())
    }

    fn sirs() -> RxNet {
        RxNet::new(
            set(&["S", "I", "R"]),
            vec![
                Transition::new("iota", cx(&[("S", 1), ("I", 1)]), cx(&[("I", 2)]), int(1)),
                Transition::new("rho", cx(&[("I", 1)]), cx(&[("R", 1)]), int(1)),
                Transition::new("lambda", cx(&[("R", 1)]), cx(&[("S", 1)]), int(1)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn petri_tables_for_3a_to_b_plus_c() {
        let r = RxNet::new(
            set(&["A", "B", "C"]),
            vec![Transition::new("tau", cx(&[("A", 3)]), cx(&[("B", 1), ("C", 1)]), int(1))],
        )
        .unwrap();
        let p = r.to_petri();
        assert_eq!(p.m, vec![vec![3], vec![0], vec![0]]);
        assert_eq!(p.n, vec![vec![0], vec![1], vec![1]]);
        assert_eq!(RxNet::from_petri(&p).unwrap(), r);
    }

    #[test]
    fn empty_network_has_empty_tables() {
        let p = RxNet::default().to_petri();
        assert!(p.m.is_empty() && p.n.is_empty() && p.transitions.is_empty());
        assert_eq!(RxNet::from_petri(&p).unwrap(), RxNet::default());
    }

    #[test]
    fn complexes_of_sirs() {
        let got = sirs().complexes();
        let want: BTreeSet<Complex> = [
            cx(&[("S", 1), ("I", 1)]),
            cx(&[("I", 2)]),
            cx(&[("I", 1)]),
            cx(&[("R", 1)]),
            cx(&[("S", 1)]),
        ]
        .into_iter()
        .collect();
        assert_eq!(got, want);
        assert!(RxNet::default().complexes().is_empty());
    }

    #[test]
    fn complexes_of_abcd() {
        let r = RxNet::new(
            set(&["A", "B", "C", "D"]),
            vec![
                Transition::new("alpha", cx(&[("A", 1), ("B", 1)]), cx(&[("C", 2)]), int(1)),
                Transition::new("beta", cx(&[("C", 1)]), cx(&[("D", 1)]), int(1)),
            ],
        )
        .unwrap();
        assert_eq!(r.complexes().len(), 4);
        assert!(!r.is_markov());
    }

    #[test]
    fn markov_detection() {
        let ab = RxNet::new(
            set(&["A", "B"]),
            vec![Transition::new("t", cx(&[("A", 1)]), cx(&[("B", 1)]), int(1))],
        )
        .unwrap();
        assert!(ab.is_markov());
        assert!(!sirs().is_markov());
    }

    #[test]
    fn collapsing_a_and_b() {
        let r = RxNet::new(
            set(&["A", "B"]),
            vec![Transition::new("t", cx(&[("A", 1), ("B", 1)]), cx(&[("A", 2)]), ratio(3, 2))],
        )
        .unwrap();
        let f = FinFun::from_pairs(r.species().clone(), set(&["Z"]), [("A", "Z"), ("B", "Z")])
            .unwrap();
        let pushed = r.push_forward(&f).unwrap();
        assert_eq!(pushed.transitions()[0].source, cx(&[("Z", 2)]));
        assert_eq!(pushed.transitions()[0].target, cx(&[("Z", 2)]));
        assert_eq!(pushed.transitions()[0].rate, ratio(3, 2));
    }

    #[test]
    fn rejects_bad_networks() {
        let s = set(&["A"]);
        let zero = Transition::new("t", cx(&[("A", 1)]), cx(&[]), int(0));
        assert!(matches!(RxNet::new(s.clone(), vec![zero]), Err(Error::NonPositiveRate(_))));
        let stray = Transition::new("t", cx(&[("B", 1)]), cx(&[]), int(1));
        assert!(matches!(RxNet::new(s.clone(), vec![stray]), Err(Error::InvalidNetwork(_))));
        let t = Transition::new("t", cx(&[]), cx(&[]), int(1));
        assert!(matches!(
            RxNet::new(s, vec![t.clone(), t]),
            Err(Error::DuplicateLabel(_))
        ));
    }

    #[test]
    fn disjoint_union_suffixes_names() {
        let u = sirs().disjoint_union(&sirs());
        assert_eq!(u.species().len(), 6);
        assert_eq!(u.transitions().len(), 6);
        assert_eq!(u.transitions()[0].name, "iota·l");
        assert_eq!(u.transitions()[3].name, "iota·r");
        assert_eq!(u.transitions()[3].source, cx(&[("S·r", 1), ("I·r", 1)]));
    }

    #[test]
    fn same_as_ignores_transition_names() {
        let a = sirs();
        let mut ts = a.transitions().to_vec();
        ts.reverse();
        ts[0].name = "renamed".into();
        let b = RxNet::new(a.species().clone(), ts).unwrap();
        assert!(a.same_as(&b));
        assert_ne!(a, b);
    }
}
