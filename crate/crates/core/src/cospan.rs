//! Decorated cospans over finite sets.
//!
//! An open system `X → S ← Y` is a [`Cospan`] whose apex `S` carries a
//! decoration. Anything implementing [`Decoration`] (a functor out of finite
//! sets together with a laxator for disjoint unions) gets composition by
//! pushout, tensor by coproduct, dagger and an equivalence check for free.

use std::fmt;

use crate::error::{Error, Result};
use crate::finset::{copair, coproduct, pushout, sum_map, FinFun, FinSet};

/// Largest number of apex elements not pinned down by the legs that
/// [`OpenDecorated::is_equivalent`] is willing to permute.
pub const EQUIVALENCE_SEARCH_CAP: usize = 10;

/// Structure that can decorate the apex of a cospan.
///
/// Implementors must satisfy the functor laws for [`map_along`] and
/// naturality for [`combine`]; the law suite in [`crate::laws`] checks both.
///
/// [`map_along`]: Decoration::map_along
/// [`combine`]: Decoration::combine
pub trait Decoration: Clone + PartialEq + fmt::Debug + Send + Sync {
    /// The finite set this decoration lives on.
    fn carrier(&self) -> &FinSet;

    /// Transport along `f`, whose domain must be the carrier.
    fn map_along(&self, f: &FinFun) -> Result<Self>;

    /// Decoration on the canonical coproduct of the two carriers.
    fn combine(&self, other: &Self) -> Self;

    /// Decoration of the empty set.
    fn empty() -> Self;

    /// Equality used when comparing decorations up to equivalence. Defaults
    /// to structural equality.
    fn same_as(&self, other: &Self) -> bool {
        self == other
    }

    /// A relabeling-invariant summary of the element at `idx`, used to prune
    /// the bijection search. Elements with different fingerprints can never
    /// correspond.
    fn fingerprint(&self, _idx: usize) -> String {
        String::new()
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cospan {
    input: FinFun,
    output: FinFun,
}

impl Cospan {
    pub fn new(input: FinFun, output: FinFun) -> Result<Self> {
        if input.cod() != output.cod() {
            return Err(Error::InvalidFunction(format!(
                "cospan legs land in {} and {}",
                input.cod(),
                output.cod()
            )));
        }
        Ok(Cospan { input, output })
    }

    pub fn identity(set: &FinSet) -> Self {
        Cospan {
            input: FinFun::identity(set),
            output: FinFun::identity(set),
        }
    }

    pub fn left(&self) -> &FinSet {
        self.input.dom()
    }

    pub fn right(&self) -> &FinSet {
        self.output.dom()
    }

    pub fn apex(&self) -> &FinSet {
        self.input.cod()
    }

    pub fn input(&self) -> &FinFun {
        &self.input
    }

    pub fn output(&self) -> &FinFun {
        &self.output
    }
}

impl fmt::Debug for Cospan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} -{:?}-> {} <-{:?}- {}",
            self.left(),
            self.input,
            self.apex(),
            self.output,
            self.right()
        )
    }
}

/// A cospan whose apex carries a decoration of kind `D`.
#[derive(Clone, Debug, PartialEq)]
pub struct OpenDecorated<D> {
    cospan: Cospan,
    decoration: D,
}

impl<D: Decoration> OpenDecorated<D> {
    pub fn new(cospan: Cospan, decoration: D) -> Result<Self> {
        if decoration.carrier() != cospan.apex() {
            return Err(Error::DecorationMismatch {
                expected: cospan.apex().to_string(),
                found: decoration.carrier().to_string(),
            });
        }
        Ok(OpenDecorated { cospan, decoration })
    }

    /// Identity on `set`: both legs identity, decorated by the image of the
    /// empty decoration along `∅ → set`.
    pub fn identity(set: &FinSet) -> Self {
        let decoration = D::empty()
            .map_along(&FinFun::initial(set))
            .expect("initial map has empty domain");
        OpenDecorated {
            cospan: Cospan::identity(set),
            decoration,
        }
    }

    /// The tensor unit: empty cospan, empty decoration.
    pub fn unit() -> Self {
        Self::identity(&FinSet::empty())
    }

    pub fn cospan(&self) -> &Cospan {
        &self.cospan
    }

    pub fn decoration(&self) -> &D {
        &self.decoration
    }

    pub fn left(&self) -> &FinSet {
        self.cospan.left()
    }

    pub fn right(&self) -> &FinSet {
        self.cospan.right()
    }

    pub fn apex(&self) -> &FinSet {
        self.cospan.apex()
    }

    /// Keeps the cospan and replaces the decoration.
    pub fn map_decoration<E: Decoration>(
        &self,
        f: impl FnOnce(&D) -> E,
    ) -> Result<OpenDecorated<E>> {
        OpenDecorated::new(self.cospan.clone(), f(&self.decoration))
    }

    /// `next ∘ self`: glue this system's outputs to `next`'s inputs.
    pub fn then(&self, next: &Self) -> Result<Self> {
        if self.right() != next.left() {
            return Err(Error::BoundaryMismatch {
                left: self.right().to_string(),
                right: next.left().to_string(),
            });
        }
        let (_, j, j2) = pushout(self.cospan.output(), next.cospan.input())?;
        let input = self.cospan.input().then(&j)?;
        let output = next.cospan.output().then(&j2)?;
        let glue = copair(&j, &j2)?;
        let decoration = self.decoration.combine(&next.decoration).map_along(&glue)?;
        OpenDecorated::new(Cospan::new(input, output)?, decoration)
    }

    /// Side-by-side composition.
    pub fn tensor(&self, other: &Self) -> Self {
        let input = sum_map(self.cospan.input(), other.cospan.input());
        let output = sum_map(self.cospan.output(), other.cospan.output());
        let decoration = self.decoration.combine(&other.decoration);
        debug_assert_eq!(
            decoration.carrier(),
            &coproduct(self.apex(), other.apex()).0
        );
        OpenDecorated {
            cospan: Cospan { input, output },
            decoration,
        }
    }

    /// Swap inputs and outputs.
    pub fn dagger(&self) -> Self {
        OpenDecorated {
            cospan: Cospan {
                input: self.cospan.output.clone(),
                output: self.cospan.input.clone(),
            },
            decoration: self.decoration.clone(),
        }
    }

    /// Searches for an apex bijection commuting with both legs that carries
    /// one decoration onto the other.
    pub fn is_equivalent(&self, other: &Self) -> Result<bool> {
        Ok(self.find_equivalence(other)?.is_some())
    }

    /// Like [`is_equivalent`](Self::is_equivalent), returning the witness.
    pub fn find_equivalence(&self, other: &Self) -> Result<Option<FinFun>> {
        if self.left() != other.left() || self.right() != other.right() {
            return Err(Error::BoundaryMismatch {
                left: format!("{} / {}", self.left(), self.right()),
                right: format!("{} / {}", other.left(), other.right()),
            });
        }
        let n = self.apex().len();
        if n != other.apex().len() {
            return Ok(None);
        }
        const NONE: usize = usize::MAX;
        let mut assign = vec![NONE; n];
        let mut used = vec![false; n];
        let legs = [
            (self.cospan.input(), other.cospan.input()),
            (self.cospan.output(), other.cospan.output()),
        ];
        for (mine, theirs) in legs {
            for p in 0..mine.dom().len() {
                let (a, b) = (mine.apply(p), theirs.apply(p));
                if assign[a] == NONE {
                    if used[b] {
                        return Ok(None);
                    }
                    assign[a] = b;
                    used[b] = true;
                } else if assign[a] != b {
                    return Ok(None);
                }
            }
        }
        let fa: Vec<String> = (0..n).map(|i| self.decoration.fingerprint(i)).collect();
        let fb: Vec<String> = (0..n).map(|i| other.decoration.fingerprint(i)).collect();
        if (0..n).any(|a| assign[a] != NONE && fa[a] != fb[assign[a]]) {
            return Ok(None);
        }
        let free: Vec<usize> = (0..n).filter(|&a| assign[a] == NONE).collect();
        if free.len() > EQUIVALENCE_SEARCH_CAP {
            return Err(Error::ApexTooLarge {
                free: free.len(),
                limit: EQUIVALENCE_SEARCH_CAP,
            });
        }
        let mut search = BijectionSearch {
            source: self,
            target: other,
            fa: &fa,
            fb: &fb,
            free: &free,
            assign,
            used,
        };
        search.run(0)
    }
}

struct BijectionSearch<'a, D> {
    source: &'a OpenDecorated<D>,
    target: &'a OpenDecorated<D>,
    fa: &'a [String],
    fb: &'a [String],
    free: &'a [usize],
    assign: Vec<usize>,
    used: Vec<bool>,
}

impl<D: Decoration> BijectionSearch<'_, D> {
    fn run(&mut self, depth: usize) -> Result<Option<FinFun>> {
        if depth == self.free.len() {
            let f = FinFun::new(
                self.source.apex().clone(),
                self.target.apex().clone(),
                self.assign.clone(),
            )?;
            let moved = self.source.decoration.map_along(&f)?;
            return Ok(moved.same_as(&self.target.decoration).then_some(f));
        }
        let a = self.free[depth];
        for b in 0..self.used.len() {
            if self.used[b] || self.fa[a] != self.fb[b] {
                continue;
            }
            self.assign[a] = b;
            self.used[b] = true;
            if let Some(f) = self.run(depth + 1)? {
                return Ok(Some(f));
            }
            self.used[b] = false;
        }
        self.assign[a] = usize::MAX;
        Ok(None)
    }
}

/// `g ∘ f`, in the usual right-to-left order.
pub fn compose<D: Decoration>(
    g: &OpenDecorated<D>,
    f: &OpenDecorated<D>,
) -> Result<OpenDecorated<D>> {
    f.then(g)
}
