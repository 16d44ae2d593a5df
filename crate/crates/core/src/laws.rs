//! Random small instances and the law suite run by `orn check-laws`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blackbox::{compose_linear, linear_blackbox};
use crate::cospan::{Cospan, Decoration};
use crate::dynamics::{grey_box, mass_action_field, OpenDynam};
use crate::error::Result;
use crate::finset::{coproduct, pushout, FinFun, FinSet};
use crate::rational::ratio;
use crate::reaction::{Complex, OpenRxNet, RxNet, Transition};

const SPECIES_POOL: [&str; 8] = ["A", "B", "C", "D", "E", "F", "G", "H"];

/// A random subset of the species pool with at most `max` elements.
pub fn random_species(rng: &mut impl Rng, max: usize) -> FinSet {
    let n = rng.random_range(0..=max.min(SPECIES_POOL.len()));
    let mut pool = SPECIES_POOL.to_vec();
    pool.shuffle(rng);
    FinSet::new(pool[..n].iter().copied()).expect("pool labels are distinct")
}

/// Boundary points `p0, p1, …` (at most `max`).
pub fn random_points(rng: &mut impl Rng, prefix: &str, max: usize) -> FinSet {
    let n = rng.random_range(0..=max);
    FinSet::new((0..n).map(|k| format!("{prefix}{k}"))).expect("distinct")
}

/// A uniformly random function, or `None` if `cod` is empty and `dom` not.
pub fn random_fun(rng: &mut impl Rng, dom: &FinSet, cod: &FinSet) -> Option<FinFun> {
    if cod.is_empty() && !dom.is_empty() {
        return None;
    }
    let map = (0..dom.len()).map(|_| rng.random_range(0..cod.len())).collect();
    Some(FinFun::new(dom.clone(), cod.clone(), map).expect("indices in range"))
}

fn random_complex(rng: &mut impl Rng, species: &FinSet, max_coeff: u32) -> Complex {
    let mut c = Complex::new();
    for s in species.iter() {
        if rng.random_bool(0.4) {
            c.add(s, rng.random_range(1..=max_coeff));
        }
    }
    c
}

/// A random network on `species`. Markov networks have one species in
/// every source and target.
pub fn random_rxnet(
    rng: &mut impl Rng,
    species: &FinSet,
    max_transitions: usize,
    markov: bool,
) -> RxNet {
    let count = if species.is_empty() {
        0
    } else {
        rng.random_range(0..=max_transitions)
    };
    let transitions = (0..count)
        .map(|k| {
            let (source, target) = if markov {
                let pick = |rng: &mut _| {
                    Complex::from_terms([(species.label(random_index(rng, species.len())), 1)])
                };
                (pick(rng), pick(rng))
            } else {
                (random_complex(rng, species, 2), random_complex(rng, species, 2))
            };
            let rate = ratio(rng.random_range(1..=5), rng.random_range(1..=3));
            Transition::new(format!("t{k}"), source, target, rate)
        })
        .collect();
    RxNet::new(species.clone(), transitions).expect("generated networks are valid")
}

fn random_index(rng: &mut impl Rng, n: usize) -> usize {
    rng.random_range(0..n)
}

/// A random open network `left → S ← right` with at most `max_species`
/// species (at least one when the boundary is nonempty).
pub fn random_open_net(
    rng: &mut impl Rng,
    left: &FinSet,
    right: &FinSet,
    max_species: usize,
    markov: bool,
) -> OpenRxNet {
    let mut species = random_species(rng, max_species);
    if species.is_empty() && (!left.is_empty() || !right.is_empty() || markov) {
        species = FinSet::new([SPECIES_POOL[random_index(rng, SPECIES_POOL.len())]]).unwrap();
    }
    let net = random_rxnet(rng, &species, 3, markov);
    let input = random_fun(rng, left, &species).expect("apex nonempty");
    let output = random_fun(rng, right, &species).expect("apex nonempty");
    OpenRxNet::new(Cospan::new(input, output).expect("legs share the apex"), net)
        .expect("decoration on the apex")
}

/// Classes of `S ⊔ S2` under the closure of `o(y) ~ i2(y)`, computed by
/// repeated relaxation rather than union-find. Elements are numbered with
/// `S` first.
pub fn closure_classes(o: &FinFun, i2: &FinFun) -> Vec<usize> {
    let n1 = o.cod().len();
    let n = n1 + i2.cod().len();
    let mut class: Vec<usize> = (0..n).collect();
    loop {
        let mut changed = false;
        for y in 0..o.dom().len() {
            let (a, b) = (o.apply(y), n1 + i2.apply(y));
            let (ca, cb) = (class[a], class[b]);
            let m = ca.min(cb);
            for c in class.iter_mut() {
                if (*c == ca || *c == cb) && *c != m {
                    *c = m;
                    changed = true;
                }
            }
        }
        if !changed {
            return class;
        }
    }
}

/// Outcome of one law over many random cases.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LawReport {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn law<F>(name: &'static str, cases: usize, rng: &mut ChaCha8Rng, mut case: F) -> LawReport
where
    F: FnMut(&mut ChaCha8Rng) -> Result<std::result::Result<(), String>>,
{
    let mut report = LawReport {
        name,
        cases,
        failures: Vec::new(),
    };
    for k in 0..cases {
        let outcome = match case(rng) {
            Ok(r) => r,
            Err(e) => Err(format!("error: {e}")),
        };
        if let Err(msg) = outcome {
            report.failures.push(format!("case {k}: {msg}"));
        }
    }
    report
}

fn check(ok: bool, what: &str) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

/// A composable triple `X → Y → Z → W` of open networks.
pub fn random_triple(
    rng: &mut impl Rng,
    max_species: usize,
) -> (OpenRxNet, OpenRxNet, OpenRxNet) {
    let x = random_points(rng, "x", 2);
    let y = random_points(rng, "y", 2);
    let z = random_points(rng, "z", 2);
    let w = random_points(rng, "w", 2);
    (
        random_open_net(rng, &x, &y, max_species, false),
        random_open_net(rng, &y, &z, max_species, false),
        random_open_net(rng, &z, &w, max_species, false),
    )
}

/// Runs every law on `cases` random instances each.
pub fn run_law_suite(seed: u64, cases: usize) -> Vec<LawReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rng = &mut rng;
    vec![
        law("pushout matches equivalence closure", cases, rng, |rng| {
            let s = random_points(rng, "s", 6);
            let s2 = random_points(rng, "s", 6);
            let y = random_points(rng, "y", 6);
            let (Some(o), Some(i2)) = (random_fun(rng, &y, &s), random_fun(rng, &y, &s2)) else {
                return Ok(Ok(()));
            };
            let (apex, j, j2) = pushout(&o, &i2)?;
            let classes = closure_classes(&o, &i2);
            let image: Vec<usize> = j.indices().iter().chain(j2.indices()).copied().collect();
            let n = image.len();
            let same = (0..n).all(|a| (0..n).all(|b| (classes[a] == classes[b]) == (image[a] == image[b])));
            let distinct: std::collections::BTreeSet<_> = classes.iter().collect();
            Ok(check(same && distinct.len() == apex.len(), "classes differ"))
        }),
        law("gray-boxing is natural", cases, rng, |rng| {
            let species = random_species(rng, 5);
            let r = random_rxnet(rng, &species, 4, false);
            let cod = random_species(rng, 5);
            let Some(f) = random_fun(rng, &species, &cod) else {
                return Ok(Ok(()));
            };
            let lhs = mass_action_field(&r.push_forward(&f)?);
            let rhs = mass_action_field(&r).push_forward(&f)?;
            Ok(check(lhs == rhs, "θ(F(f)R) ≠ D(f)θ(R)"))
        }),
        law("F and D preserve identities and composites", cases, rng, |rng| {
            let s = random_species(rng, 5);
            let t = random_species(rng, 5);
            let u = random_species(rng, 5);
            let r = random_rxnet(rng, &s, 4, false);
            let v = mass_action_field(&r);
            let id = FinFun::identity(&s);
            let (Some(f), Some(g)) = (random_fun(rng, &s, &t), random_fun(rng, &t, &u)) else {
                return Ok(Ok(()));
            };
            let gf = f.then(&g)?;
            Ok(check(
                r.map_along(&id)? == r
                    && v.map_along(&id)? == v
                    && r.map_along(&gf)? == r.map_along(&f)?.map_along(&g)?
                    && v.map_along(&gf)? == v.map_along(&f)?.map_along(&g)?,
                "functor law fails",
            ))
        }),
        law("gray-boxing is monoidal", cases, rng, |rng| {
            let (s, s2) = (random_species(rng, 4), random_species(rng, 4));
            let r = random_rxnet(rng, &s, 3, false);
            let r2 = random_rxnet(rng, &s2, 3, false);
            let lhs = mass_action_field(&r.combine(&r2));
            let rhs = mass_action_field(&r).combine(&mass_action_field(&r2));
            Ok(check(lhs == rhs, "θ(φ(R, R′)) ≠ δ(θR, θR′)"))
        }),
        law("composition is associative and unital", cases, rng, |rng| {
            let (f, g, h) = random_triple(rng, 3);
            let left = f.then(&g)?.then(&h)?;
            let right = f.then(&g.then(&h)?)?;
            let id_x = OpenRxNet::identity(f.left());
            let id_y = OpenRxNet::identity(f.right());
            Ok(check(left.is_equivalent(&right)?, "associativity")
                .and(check(id_x.then(&f)?.is_equivalent(&f)?, "left unit"))
                .and(check(f.then(&id_y)?.is_equivalent(&f)?, "right unit")))
        }),
        law("gray-boxing preserves composition", cases, rng, |rng| {
            let (f, g, _) = random_triple(rng, 3);
            let lhs = grey_box(&f.then(&g)?);
            let rhs: OpenDynam = grey_box(&f).then(&grey_box(&g))?;
            Ok(check(lhs.is_equivalent(&rhs)?, "θ(g∘f) ≇ θg∘θf"))
        }),
        law("dagger is an involution and reverses composites", cases, rng, |rng| {
            let (f, g, _) = random_triple(rng, 3);
            let lhs = f.then(&g)?.dagger();
            let rhs = g.dagger().then(&f.dagger())?;
            Ok(check(f.dagger().dagger() == f, "involution")
                .and(check(lhs.is_equivalent(&rhs)?, "(g∘f)† ≇ f†∘g†")))
        }),
        law("tensor interchanges with composition", cases, rng, |rng| {
            let (f, g, _) = random_triple(rng, 2);
            let (f2, g2, _) = random_triple(rng, 2);
            let lhs = f.tensor(&f2).then(&g.tensor(&g2))?;
            let rhs = f.then(&g)?.tensor(&f2.then(&g2)?);
            let unit = f.tensor(&OpenRxNet::unit());
            Ok(check(lhs.is_equivalent(&rhs)?, "interchange")
                .and(check(unit.is_equivalent(&f)?, "tensor unit")))
        }),
        law("linear black-boxing is functorial", cases, rng, |rng| {
            let x = random_points(rng, "x", 2);
            let y = random_points(rng, "y", 2);
            let z = random_points(rng, "z", 2);
            let f = grey_box(&random_open_net(rng, &x, &y, 5, true));
            let g = grey_box(&random_open_net(rng, &y, &z, 5, true));
            let lhs = linear_blackbox(&f.then(&g)?)?;
            let rhs = compose_linear(&linear_blackbox(&g)?, &linear_blackbox(&f)?)?;
            Ok(check(lhs == rhs, "■(g∘f) ≠ ■g∘■f"))
        }),
        law("coproduct injections are jointly bijective", cases, rng, |rng| {
            let a = random_species(rng, 5);
            let b = random_species(rng, 5);
            let (sum, inl, inr) = coproduct(&a, &b);
            let mut hit: Vec<usize> = inl.indices().iter().chain(inr.indices()).copied().collect();
            hit.sort_unstable();
            Ok(check(hit == (0..sum.len()).collect::<Vec<_>>(), "not a bijection"))
        }),
    ]
}
