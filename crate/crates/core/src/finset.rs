//! Finite sets of labels, functions between them, coproducts and pushouts.
//!
//! A [`FinSet`] keeps its labels sorted so that two sets with the same labels
//! compare equal regardless of construction order. A [`FinFun`] stores, for
//! each element of its domain (by canonical index), the index of its image.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};

/// Suffix appended to left-hand labels that collide in a disjoint union.
pub const LEFT_SUFFIX: &str = "·l";
/// Suffix appended to right-hand labels that collide in a disjoint union.
pub const RIGHT_SUFFIX: &str = "·r";

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FinSet {
    labels: Vec<String>,
}

impl FinSet {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        labels.sort();
        if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateLabel(w[0].clone()));
        }
        Ok(FinSet { labels })
    }

    pub fn empty() -> Self {
        FinSet::default()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, idx: usize) -> &str {
        &self.labels[idx]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels
            .binary_search_by(|l| l.as_str().cmp(label))
            .ok()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.index_of(label).is_some()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.labels.iter().map(String::as_str)
    }
}

impl fmt::Debug for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.labels.iter()).finish()
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.labels.join(", "))
    }
}

/// A function between finite sets.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinFun {
    dom: FinSet,
    cod: FinSet,
    map: Vec<usize>,
}

impl FinFun {
    pub fn new(dom: FinSet, cod: FinSet, map: Vec<usize>) -> Result<Self> {
        if map.len() != dom.len() {
            return Err(Error::InvalidFunction(format!(
                "assignment has {} entries for a domain of size {}",
                map.len(),
                dom.len()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&j| j >= cod.len()) {
            return Err(Error::InvalidFunction(format!(
                "image index {bad} outside codomain of size {}",
                cod.len()
            )));
        }
        Ok(FinFun { dom, cod, map })
    }

    /// Builds a function from `(source, target)` label pairs; every domain
    /// element must appear exactly once.
    pub fn from_pairs<'a, I>(dom: FinSet, cod: FinSet, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut map = vec![usize::MAX; dom.len()];
        for (a, b) in pairs {
            let i = dom
                .index_of(a)
                .ok_or_else(|| Error::UnknownLabel(a.to_string()))?;
            let j = cod
                .index_of(b)
                .ok_or_else(|| Error::UnknownLabel(b.to_string()))?;
            if map[i] != usize::MAX && map[i] != j {
                return Err(Error::InvalidFunction(format!("{a} assigned twice")));
            }
            map[i] = j;
        }
        if let Some(i) = map.iter().position(|&j| j == usize::MAX) {
            return Err(Error::InvalidFunction(format!(
                "{} has no image",
                dom.label(i)
            )));
        }
        Ok(FinFun { dom, cod, map })
    }

    pub fn identity(set: &FinSet) -> Self {
        FinFun {
            dom: set.clone(),
            cod: set.clone(),
            map: (0..set.len()).collect(),
        }
    }

    /// The unique function out of the empty set.
    pub fn initial(cod: &FinSet) -> Self {
        FinFun {
            dom: FinSet::empty(),
            cod: cod.clone(),
            map: Vec::new(),
        }
    }

    pub fn dom(&self) -> &FinSet {
        &self.dom
    }

    pub fn cod(&self) -> &FinSet {
        &self.cod
    }

    pub fn indices(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, idx: usize) -> usize {
        self.map[idx]
    }

    pub fn apply_label(&self, label: &str) -> Option<&str> {
        self.dom
            .index_of(label)
            .map(|i| self.cod.label(self.map[i]))
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &FinFun) -> Result<FinFun> {
        if self.cod != next.dom {
            return Err(Error::InvalidFunction(format!(
                "cannot compose: codomain {} differs from domain {}",
                self.cod, next.dom
            )));
        }
        Ok(FinFun {
            dom: self.dom.clone(),
            cod: next.cod.clone(),
            map: self.map.iter().map(|&j| next.map[j]).collect(),
        })
    }

    /// Domain indices mapping to codomain index `j`.
    pub fn fiber(&self, j: usize) -> Vec<usize> {
        self.map
            .iter()
            .enumerate()
            .filter(|(_, &k)| k == j)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn is_bijection(&self) -> bool {
        if self.dom.len() != self.cod.len() {
            return false;
        }
        let mut seen = vec![false; self.cod.len()];
        self.map.iter().all(|&j| !std::mem::replace(&mut seen[j], true))
    }

    /// Indices of the codomain hit by this function, sorted.
    pub fn image(&self) -> Vec<usize> {
        let mut img: Vec<usize> = self.map.clone();
        img.sort_unstable();
        img.dedup();
        img
    }

    /// Label-to-label map, convenient for relabeling keyed structures.
    pub fn label_map(&self) -> HashMap<&str, &str> {
        self.map
            .iter()
            .enumerate()
            .map(|(i, &j)| (self.dom.label(i), self.cod.label(j)))
            .collect()
    }
}

impl fmt::Debug for FinFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (i, &j) in self.map.iter().enumerate() {
            m.entry(&self.dom.label(i), &self.cod.label(j));
        }
        m.finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Side {
    Left,
    Right,
}

impl Side {
    fn suffix(self) -> &'static str {
        match self {
            Side::Left => LEFT_SUFFIX,
            Side::Right => RIGHT_SUFFIX,
        }
    }
}

/// Turns candidate names into pairwise distinct ones. Names shared between
/// the two sides get a side suffix; anything still colliding after that keeps
/// its first occurrence and suffixes the rest.
fn assign_unique(cands: &[(String, Side)]) -> Vec<String> {
    let mut names: Vec<String> = cands.iter().map(|(n, _)| n.clone()).collect();
    let shared: Vec<usize> = group_indices(&names)
        .into_values()
        .filter(|g| g.len() > 1)
        .flatten()
        .collect();
    for i in shared {
        names[i].push_str(cands[i].1.suffix());
    }
    loop {
        let clashes: Vec<usize> = group_indices(&names)
            .into_values()
            .filter(|g| g.len() > 1)
            .flat_map(|g| g.into_iter().skip(1))
            .collect();
        let mut changed = false;
        for i in clashes {
            names[i].push_str(cands[i].1.suffix());
            changed = true;
        }
        if !changed {
            return names;
        }
    }
}

fn group_indices(names: &[String]) -> BTreeMap<&str, Vec<usize>> {
    let mut groups: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, n) in names.iter().enumerate() {
        groups.entry(n.as_str()).or_default().push(i);
    }
    groups
}

/// Disjoint union of two label lists. Labels present on both sides receive
/// the `·l` / `·r` suffixes; the returned lists are aligned with the inputs.
pub fn disjoint_labels(left: &[String], right: &[String]) -> (Vec<String>, Vec<String>) {
    let cands: Vec<(String, Side)> = left
        .iter()
        .map(|l| (l.clone(), Side::Left))
        .chain(right.iter().map(|r| (r.clone(), Side::Right)))
        .collect();
    let mut names = assign_unique(&cands);
    let right_names = names.split_off(left.len());
    (names, right_names)
}

/// The coproduct `a + b` with its two injections.
pub fn coproduct(a: &FinSet, b: &FinSet) -> (FinSet, FinFun, FinFun) {
    let (ln, rn) = disjoint_labels(a.labels(), b.labels());
    let sum = FinSet::new(ln.iter().chain(rn.iter()).cloned())
        .expect("disjoint labels are distinct");
    let inl = ln.iter().map(|l| sum.index_of(l).unwrap()).collect();
    let inr = rn.iter().map(|r| sum.index_of(r).unwrap()).collect();
    (
        sum.clone(),
        FinFun {
            dom: a.clone(),
            cod: sum.clone(),
            map: inl,
        },
        FinFun {
            dom: b.clone(),
            cod: sum,
            map: inr,
        },
    )
}

/// `f + g : A + B → C + D`, using the canonical coproducts on both ends.
pub fn sum_map(f: &FinFun, g: &FinFun) -> FinFun {
    let (dom, dl, dr) = coproduct(f.dom(), g.dom());
    let (cod, cl, cr) = coproduct(f.cod(), g.cod());
    let mut map = vec![0; dom.len()];
    for i in 0..f.dom().len() {
        map[dl.apply(i)] = cl.apply(f.apply(i));
    }
    for i in 0..g.dom().len() {
        map[dr.apply(i)] = cr.apply(g.apply(i));
    }
    FinFun { dom, cod, map }
}

/// The copairing `[f, g] : A + B → C` out of the canonical coproduct.
pub fn copair(f: &FinFun, g: &FinFun) -> Result<FinFun> {
    if f.cod() != g.cod() {
        return Err(Error::InvalidFunction(
            "copairing needs a common codomain".into(),
        ));
    }
    let (dom, inl, inr) = coproduct(f.dom(), g.dom());
    let mut map = vec![0; dom.len()];
    for i in 0..f.dom().len() {
        map[inl.apply(i)] = f.apply(i);
    }
    for i in 0..g.dom().len() {
        map[inr.apply(i)] = g.apply(i);
    }
    Ok(FinFun {
        dom,
        cod: f.cod().clone(),
        map,
    })
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}

/// Pushout of `s ←o− y −i2→ s2`.
///
/// Each equivalence class of `s ⊔ s2` is labeled by the least label among
/// its members; two classes ending up with the same label are told apart
/// with the usual side suffixes.
pub fn pushout(o: &FinFun, i2: &FinFun) -> Result<(FinSet, FinFun, FinFun)> {
    if o.dom() != i2.dom() {
        return Err(Error::BoundaryMismatch {
            left: o.dom().to_string(),
            right: i2.dom().to_string(),
        });
    }
    let (s, s2) = (o.cod(), i2.cod());
    let n = s.len();
    let mut uf = UnionFind::new(n + s2.len());
    for y in 0..o.dom().len() {
        uf.union(o.apply(y), n + i2.apply(y));
    }
    let label_of = |k: usize| -> (&str, Side) {
        if k < n {
            (s.label(k), Side::Left)
        } else {
            (s2.label(k - n), Side::Right)
        }
    };
    // root -> (best label, side of the member carrying it)
    let mut best: BTreeMap<usize, (&str, Side)> = BTreeMap::new();
    let root_of: Vec<usize> = (0..n + s2.len()).map(|k| uf.find(k)).collect();
    for (k, &r) in root_of.iter().enumerate() {
        let cand = label_of(k);
        best.entry(r)
            .and_modify(|b| {
                if cand < *b {
                    *b = cand;
                }
            })
            .or_insert(cand);
    }
    let roots: Vec<usize> = best.keys().copied().collect();
    let cands: Vec<(String, Side)> = roots
        .iter()
        .map(|r| (best[r].0.to_string(), best[r].1))
        .collect();
    let names = assign_unique(&cands);
    let apex = FinSet::new(names.iter().cloned()).expect("class names are distinct");
    let class_index: HashMap<usize, usize> = roots
        .iter()
        .zip(&names)
        .map(|(&r, name)| (r, apex.index_of(name).unwrap()))
        .collect();
    let j = FinFun {
        dom: s.clone(),
        cod: apex.clone(),
        map: (0..n).map(|k| class_index[&root_of[k]]).collect(),
    };
    let j2 = FinFun {
        dom: s2.clone(),
        cod: apex.clone(),
        map: (0..s2.len()).map(|k| class_index[&root_of[n + k]]).collect(),
    };
    Ok((apex, j, j2))
}
