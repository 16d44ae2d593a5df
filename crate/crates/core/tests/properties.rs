//! Property tests for the invariants of every module.

mod common;

use proptest::collection::vec;
use proptest::prelude::*;

use common::{closure_matrix, mass_action_eval, max_abs, same_span};
use orn_core::blackbox::{
    compose_linear, flows_for, linear_blackbox, partition, residual, sample_blackbox, SampleOptions,
};
use orn_core::cospan::Decoration;
use orn_core::dsl;
use orn_core::dynamics::{
    emit_equations, grey_box, mass_action_field, parse_equations, pullback, pushforward, simulate,
    EquationFormat, FlowSpec, OpenDynam,
};
use orn_core::finset::sum_map;
use orn_core::io::{from_json, to_json, TupleDocument};
use orn_core::rational::ratio;
use orn_core::{coproduct, pushout, Complex, Cospan, FinFun, FinSet, OpenRxNet, RxNet, Transition};

const POOL: [&str; 6] = ["A", "B", "C", "D", "E", "F"];

fn species(n: usize) -> FinSet {
    FinSet::new(POOL[..n].iter().copied()).unwrap()
}

fn points(prefix: &str, n: usize) -> FinSet {
    FinSet::new((0..n).map(|k| format!("{prefix}{k}"))).unwrap()
}

fn complex_from(species: &FinSet, counts: &[u32]) -> Complex {
    Complex::from_terms(species.iter().zip(counts.iter().copied()))
}

/// A function from an `n`-element set into an `m`-element set.
fn finfun(dom: FinSet, cod: FinSet) -> BoxedStrategy<FinFun> {
    let m = cod.len();
    if m == 0 {
        assert!(dom.is_empty());
        return Just(FinFun::new(dom, cod, vec![]).unwrap()).boxed();
    }
    vec(0..m, dom.len())
        .prop_map(move |map| FinFun::new(dom.clone(), cod.clone(), map).unwrap())
        .boxed()
}

type RawTransition = (Vec<u32>, Vec<u32>, i64, i64);

fn build_net(n: usize, raw: Vec<RawTransition>) -> RxNet {
    let s = species(n);
    let transitions = raw
        .into_iter()
        .enumerate()
        .map(|(k, (src, tgt, p, q))| {
            Transition::new(format!("t{k}"), complex_from(&s, &src), complex_from(&s, &tgt), ratio(p, q))
        })
        .collect();
    RxNet::new(s, transitions).unwrap()
}

/// Networks on the first `n` pool species. Markov networks have one token
/// on each side of every transition.
fn rxnet_on(n: usize, markov: bool) -> BoxedStrategy<RxNet> {
    if n == 0 {
        return Just(RxNet::discrete(FinSet::empty())).boxed();
    }
    let complex = if markov {
        (0..n)
            .prop_map(move |i| (0..n).map(|j| u32::from(i == j)).collect::<Vec<u32>>())
            .boxed()
    } else {
        vec(0u32..3, n).boxed()
    };
    vec((complex.clone(), complex, 1i64..6, 1i64..4), 0..=4)
        .prop_map(move |raw| build_net(n, raw))
        .boxed()
}

fn rxnet(max: usize) -> impl Strategy<Value = RxNet> {
    (0..=max).prop_flat_map(|n| rxnet_on(n, false))
}

/// Networks where every transition moves as many tokens out as in.
fn conserving_rxnet() -> impl Strategy<Value = RxNet> {
    (1usize..=5).prop_flat_map(|n| {
        vec((vec(0u32..3, n), 0..n, 1i64..6, 1i64..4), 0..=4).prop_map(move |raw| {
            let raw = raw
                .into_iter()
                .map(|(src, shift, p, q)| {
                    let mut tgt = src.clone();
                    tgt.rotate_left(shift);
                    (src, tgt, p, q)
                })
                .collect();
            build_net(n, raw)
        })
    })
}

fn open_net(left: FinSet, right: FinSet, max_species: usize, markov: bool) -> BoxedStrategy<OpenRxNet> {
    let min = usize::from(!left.is_empty() || !right.is_empty() || markov);
    (min..=max_species)
        .prop_flat_map(move |n| {
            let s = species(n);
            (
                rxnet_on(n, markov),
                finfun(left.clone(), s.clone()),
                finfun(right.clone(), s),
            )
        })
        .prop_map(|(net, i, o)| OpenRxNet::new(Cospan::new(i, o).unwrap(), net).unwrap())
        .boxed()
}

fn any_open_net(max_points: usize, max_species: usize) -> impl Strategy<Value = OpenRxNet> {
    (0..=max_points, 0..=max_points)
        .prop_flat_map(move |(nx, ny)| open_net(points("x", nx), points("y", ny), max_species, false))
}

/// `X → Y → Z` with both nets drawn independently.
fn composable_pair(max_species: usize, markov: bool) -> impl Strategy<Value = (OpenRxNet, OpenRxNet)> {
    (0usize..=2, 0usize..=2, 0usize..=2).prop_flat_map(move |(nx, ny, nz)| {
        (
            open_net(points("x", nx), points("y", ny), max_species, markov),
            open_net(points("y", ny), points("z", nz), max_species, markov),
        )
    })
}

fn composable_triple(max_species: usize) -> impl Strategy<Value = (OpenRxNet, OpenRxNet, OpenRxNet)> {
    (0usize..=2, 0usize..=2, 0usize..=2, 0usize..=2).prop_flat_map(move |(nx, ny, nz, nw)| {
        (
            open_net(points("x", nx), points("y", ny), max_species, false),
            open_net(points("y", ny), points("z", nz), max_species, false),
            open_net(points("z", nz), points("w", nw), max_species, false),
        )
    })
}

/// A net together with a composable pair of maps out of its species.
fn net_with_maps() -> impl Strategy<Value = (RxNet, FinFun, FinFun)> {
    (0usize..=5, 1usize..=5, 1usize..=5).prop_flat_map(|(n, m, k)| {
        let (s, t, u) = (species(n), points("t", m), points("u", k));
        (rxnet_on(n, false), finfun(s, t.clone()), finfun(t, u))
    })
}

fn point_in(n: usize) -> impl Strategy<Value = Vec<f64>> {
    vec(-2.0f64..2.0, n)
}

fn eq_or_err<T: PartialEq + std::fmt::Debug>(a: &T, b: &T) -> Result<(), TestCaseError> {
    prop_assert_eq!(a, b);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn rendered_documents_reparse_to_equivalent_nets(net in any_open_net(3, 5)) {
        let text = dsl::render(&net);
        let back = dsl::parse(&text).unwrap();
        prop_assert!(back.is_equivalent(&net).unwrap(), "{}", text);
        prop_assert_eq!(dsl::render(&back), text);
    }

    #[test]
    fn pushout_classes_are_the_equivalence_closure(
        (o, i2) in (0usize..=6, 0usize..=6, 0usize..=6)
            .prop_filter("nonempty codomains", |(n1, n2, ny)| *ny == 0 || (*n1 > 0 && *n2 > 0))
            .prop_flat_map(|(n1, n2, ny)| {
                let y = points("y", ny);
                (finfun(y.clone(), points("a", n1)), finfun(y, points("b", n2)))
            })
    ) {
        let (apex, j, j2) = pushout(&o, &i2).unwrap();
        let n1 = o.cod().len();
        let n = n1 + i2.cod().len();
        let class = |k: usize| if k < n1 { j.apply(k) } else { j2.apply(k - n1) };
        let rel = closure_matrix(&o, &i2);
        for a in 0..n {
            for b in 0..n {
                prop_assert_eq!(class(a) == class(b), rel[a][b]);
            }
        }
        let hit: std::collections::BTreeSet<usize> = (0..n).map(class).collect();
        prop_assert_eq!(hit.len(), apex.len());
        for y in 0..o.dom().len() {
            prop_assert_eq!(j.apply(o.apply(y)), j2.apply(i2.apply(y)));
        }
    }

    #[test]
    fn coproduct_injections_partition_the_sum(a in 0usize..=6, b in 0usize..=6, shift in 0usize..6) {
        let left = species(a);
        let right = FinSet::new(POOL.iter().cycle().skip(shift).take(b).copied()).unwrap();
        let (sum, i1, i2) = coproduct(&left, &right);
        prop_assert_eq!(sum.len(), a + b);
        let mut seen = vec![false; a + b];
        for k in i1.indices().iter().chain(i2.indices()) {
            prop_assert!(!seen[*k]);
            seen[*k] = true;
        }
        if right.iter().all(|l| !left.contains(l)) {
            for l in left.iter().chain(right.iter()) {
                prop_assert!(sum.contains(l));
            }
        }
    }

    #[test]
    fn push_forward_keeps_rates_and_token_totals((r, f, _) in net_with_maps()) {
        let moved = r.push_forward(&f).unwrap();
        prop_assert_eq!(moved.transitions().len(), r.transitions().len());
        for (t, u) in r.transitions().iter().zip(moved.transitions()) {
            prop_assert_eq!(&t.rate, &u.rate);
            prop_assert_eq!(t.source.total(), u.source.total());
            prop_assert_eq!(t.target.total(), u.target.total());
        }
    }

    #[test]
    fn network_functor_laws((r, f, g) in net_with_maps()) {
        prop_assert_eq!(&r.push_forward(&FinFun::identity(r.species())).unwrap(), &r);
        let gf = f.then(&g).unwrap();
        eq_or_err(&r.push_forward(&gf).unwrap(), &r.push_forward(&f).unwrap().push_forward(&g).unwrap())?;
    }

    #[test]
    fn field_functor_laws((r, f, g) in net_with_maps()) {
        let v = mass_action_field(&r);
        prop_assert_eq!(&v.push_forward(&FinFun::identity(v.vars())).unwrap(), &v);
        let gf = f.then(&g).unwrap();
        eq_or_err(&v.push_forward(&gf).unwrap(), &v.push_forward(&f).unwrap().push_forward(&g).unwrap())?;
    }

    #[test]
    fn mass_action_is_natural((r, f, _) in net_with_maps()) {
        eq_or_err(
            &mass_action_field(&r.push_forward(&f).unwrap()),
            &mass_action_field(&r).push_forward(&f).unwrap(),
        )?;
    }

    #[test]
    fn mass_action_is_monoidal(r in rxnet(4), r2 in rxnet(4)) {
        eq_or_err(
            &mass_action_field(&r.combine(&r2)),
            &mass_action_field(&r).combine(&mass_action_field(&r2)),
        )?;
    }

    #[test]
    fn disjoint_union_restricts_to_each_block(r in rxnet(4), r2 in rxnet(4)) {
        let both = r.combine(&r2);
        let (sum, i1, i2) = coproduct(r.species(), r2.species());
        prop_assert_eq!(both.species(), &sum);
        let n = r.transitions().len();
        prop_assert_eq!(both.transitions().len(), n + r2.transitions().len());
        for (part, inj, block) in [(&r, &i1, &both.transitions()[..n]), (&r2, &i2, &both.transitions()[n..])] {
            let moved = part.push_forward(inj).unwrap();
            for (t, u) in moved.transitions().iter().zip(block) {
                prop_assert_eq!(&t.source, &u.source);
                prop_assert_eq!(&t.target, &u.target);
                prop_assert_eq!(&t.rate, &u.rate);
            }
        }
    }

    #[test]
    fn petri_tables_round_trip(r in rxnet(5)) {
        let p = r.to_petri();
        for (k, t) in r.transitions().iter().enumerate() {
            for (i, s) in r.species().iter().enumerate() {
                prop_assert_eq!(p.m[i][k], t.source.get(s));
                prop_assert_eq!(p.n[i][k], t.target.get(s));
            }
        }
        prop_assert_eq!(RxNet::from_petri(&p).unwrap(), r);
    }

    #[test]
    fn evaluation_matches_pull_then_push(((r, f, _), c) in net_with_maps().prop_flat_map(|(r, f, g)| {
        let m = f.cod().len();
        (Just((r, f, g)), point_in(m))
    })) {
        let field = mass_action_field(&r).push_forward(&f).unwrap();
        let got = field.eval(&c).unwrap();
        let pulled = pullback(&f, &c).unwrap();
        let want = pushforward(&f, &mass_action_eval(&r, &pulled)).unwrap();
        let scale = 1.0 + max_abs(want.iter().copied());
        prop_assert!(max_abs(got.iter().zip(&want).map(|(a, b)| a - b)) <= 1e-12 * scale);
    }

    #[test]
    fn pushforward_is_adjoint_to_pullback(((_, f, _), w, c) in net_with_maps().prop_flat_map(|(r, f, g)| {
        let (n, m) = (f.dom().len(), f.cod().len());
        (Just((r, f, g)), point_in(n), point_in(m))
    })) {
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        let lhs = dot(&pushforward(&f, &w).unwrap(), &c);
        let rhs = dot(&w, &pullback(&f, &c).unwrap());
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
    }

    #[test]
    fn conserving_networks_have_zero_total_rate(r in conserving_rxnet()) {
        let v = mass_action_field(&r);
        let total = v.components().iter().fold(orn_core::Poly::zero(), |acc, p| &acc + p);
        prop_assert!(total.is_zero(), "Σ v = {}", total);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_is_associative_and_unital((f, g, h) in composable_triple(3)) {
        let left = f.then(&g).unwrap().then(&h).unwrap();
        let right = f.then(&g.then(&h).unwrap()).unwrap();
        prop_assert!(left.is_equivalent(&right).unwrap());
        prop_assert!(OpenRxNet::identity(f.left()).then(&f).unwrap().is_equivalent(&f).unwrap());
        prop_assert!(f.then(&OpenRxNet::identity(f.right())).unwrap().is_equivalent(&f).unwrap());
    }

    #[test]
    fn dagger_is_an_involution_reversing_composition((f, g) in composable_pair(4, false)) {
        prop_assert_eq!(&f.dagger().dagger(), &f);
        let gf = f.then(&g).unwrap();
        prop_assert!(gf.dagger().is_equivalent(&g.dagger().then(&f.dagger()).unwrap()).unwrap());
        let id = OpenRxNet::identity(f.left());
        prop_assert_eq!(&id.dagger(), &id);
    }

    #[test]
    fn tensor_interchange((f, g) in composable_pair(3, false), (f2, g2) in composable_pair(3, false)) {
        let lhs = f.tensor(&f2).then(&g.tensor(&g2)).unwrap();
        let rhs = f.then(&g).unwrap().tensor(&f2.then(&g2).unwrap());
        prop_assert!(lhs.is_equivalent(&rhs).unwrap());
        prop_assert!(f.tensor(&OpenRxNet::unit()).is_equivalent(&f).unwrap());
    }

    #[test]
    fn grey_boxing_is_functorial((f, g) in composable_pair(4, false)) {
        let lhs = grey_box(&f.then(&g).unwrap());
        let rhs = grey_box(&f).then(&grey_box(&g)).unwrap();
        prop_assert!(lhs.is_equivalent(&rhs).unwrap());
    }

    #[test]
    fn rendered_composites_reparse((f, g) in composable_pair(4, false)) {
        let gf = f.then(&g).unwrap();
        let back = dsl::parse(&dsl::render(&gf)).unwrap();
        prop_assert!(back.is_equivalent(&gf).unwrap());
    }

    #[test]
    fn equations_parse_back(net in any_open_net(3, 5)) {
        let sys = grey_box(&net);
        let parsed = parse_equations(&emit_equations(&sys, EquationFormat::Text)).unwrap();
        prop_assert_eq!(&parsed.field, sys.decoration());
        let leg = |flows: &[(String, String)], f: &FinFun| -> Result<(), TestCaseError> {
            prop_assert_eq!(flows.len(), f.dom().len());
            for (s, p) in flows {
                prop_assert_eq!(f.apply_label(p), Some(s.as_str()));
            }
            Ok(())
        };
        leg(&parsed.inflows, sys.cospan().input())?;
        leg(&parsed.outflows, sys.cospan().output())?;
    }

    #[test]
    fn constant_inflow_into_a_zero_field_is_linear(n in 1usize..=4, c0 in vec(-1.0f64..1.0, 4), rate in -2.0f64..2.0) {
        let net = dsl::parse(&format!("species {}\ninput p -> A\n", POOL[..n].join(" "))).unwrap();
        let sys = grey_box(&net);
        let c0 = &c0[..n];
        let traj = simulate(&sys, c0, &FlowSpec::constant(&[("p", rate)], &[]), 1.0, 0.125).unwrap();
        for (t, c) in &traj.rows {
            prop_assert!((c[0] - (c0[0] + rate * t)).abs() <= 4.0 * f64::EPSILON * (1.0 + rate.abs()));
            prop_assert_eq!(&c[1..], &c0[1..]);
        }
    }

    #[test]
    fn flows_exist_exactly_when_internal_rates_vanish(net in any_open_net(2, 4), c in point_in(6)) {
        let sys = grey_box(&net);
        let c = &c[..sys.apex().len()];
        let v = mass_action_eval(net.decoration(), c);
        let internal_busy = partition(&sys).internal.iter().any(|&i| v[i].abs() > 1e-12);
        let solution = flows_for(&sys, c).unwrap();
        prop_assert_eq!(solution.is_none(), internal_busy);
        if let Some(sol) = solution {
            let base = residual(&sys, c, &sol.inflow, &sol.outflow).unwrap();
            prop_assert!(max_abs(base.iter().copied()) <= 1e-9);
            for (ki, ko) in &sol.kernel {
                let shifted_i: Vec<f64> = sol.inflow.iter().zip(ki).map(|(a, b)| a + 0.7 * b).collect();
                let shifted_o: Vec<f64> = sol.outflow.iter().zip(ko).map(|(a, b)| a + 0.7 * b).collect();
                let moved = residual(&sys, c, &shifted_i, &shifted_o).unwrap();
                prop_assert!(max_abs(moved.iter().zip(&base).map(|(a, b)| a - b)) <= 1e-12);
            }
        }
    }
}

/// `v(c) + i_*(I) − o_*(O)` from the network and the legs directly.
fn independent_residual(net: &OpenRxNet, c: &[f64], inflow: &[f64], outflow: &[f64]) -> f64 {
    let mut r = mass_action_eval(net.decoration(), c);
    for (x, flow) in inflow.iter().enumerate() {
        r[net.cospan().input().apply(x)] += flow;
    }
    for (y, flow) in outflow.iter().enumerate() {
        r[net.cospan().output().apply(y)] -= flow;
    }
    max_abs(r)
}

fn check_observed(sys: &OpenDynam, c: &[f64], t: &orn_core::blackbox::SteadyTuple) -> Result<(), TestCaseError> {
    prop_assert_eq!(&t.x_conc, &pullback(sys.cospan().input(), c).unwrap());
    prop_assert_eq!(&t.y_conc, &pullback(sys.cospan().output(), c).unwrap());
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn sampled_tuples_are_steady(net in any_open_net(2, 4), seed in any::<u64>()) {
        let sys = grey_box(&net);
        for s in sample_blackbox(&sys, &SampleOptions::new(3, seed)).unwrap() {
            let r = independent_residual(&net, &s.witness, &s.tuple.inflow, &s.tuple.outflow);
            prop_assert!(r <= 1e-9, "residual {r:e}");
            check_observed(&sys, &s.witness, &s.tuple)?;
        }
    }

    #[test]
    fn markov_samples_lie_in_the_linear_relation(
        net in (0usize..=2, 0usize..=2).prop_flat_map(|(nx, ny)| open_net(points("x", nx), points("y", ny), 4, true)),
        seed in any::<u64>(),
    ) {
        let sys = grey_box(&net);
        let rel = linear_blackbox(&sys).unwrap();
        for s in sample_blackbox(&sys, &SampleOptions::new(3, seed)).unwrap() {
            prop_assert!(rel.distance(&s.tuple.to_vector()).unwrap() <= 1e-9);
        }
    }

    #[test]
    fn markov_relations_compose((f, g) in composable_pair(5, true)) {
        let whole = linear_blackbox(&grey_box(&f.then(&g).unwrap())).unwrap();
        let parts = compose_linear(
            &linear_blackbox(&grey_box(&g)).unwrap(),
            &linear_blackbox(&grey_box(&f)).unwrap(),
        )
        .unwrap();
        prop_assert!(same_span(whole.basis(), parts.basis()));
        prop_assert_eq!(whole, parts);
    }

    #[test]
    fn tuple_documents_survive_json(net in any_open_net(2, 3), seed in any::<u64>()) {
        let sys = grey_box(&net);
        let tuples: Vec<_> = sample_blackbox(&sys, &SampleOptions::new(2, seed))
            .unwrap()
            .into_iter()
            .map(|s| s.tuple)
            .collect();
        let doc = TupleDocument::new("prop", &sys, tuples);
        let text = to_json(&doc);
        let back: TupleDocument = from_json(&text).unwrap();
        prop_assert_eq!(&back, &doc);
        let raw: serde_json::Value = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(raw["tolerance"].as_f64(), Some(1e-9));
        let listed = raw["tuples"].as_array().unwrap();
        prop_assert_eq!(listed.len(), doc.tuples.len());
        for (v, t) in listed.iter().zip(&doc.tuples) {
            let floats = |key: &str| -> Vec<f64> {
                v[key].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
            };
            prop_assert_eq!(floats("x_conc"), t.x_conc.clone());
            prop_assert_eq!(floats("inflow"), t.inflow.clone());
            prop_assert_eq!(floats("y_conc"), t.y_conc.clone());
            prop_assert_eq!(floats("outflow"), t.outflow.clone());
        }
    }
}

#[test]
fn sum_map_of_identities_is_identity() {
    let (a, b) = (species(2), points("p", 3));
    let both = sum_map(&FinFun::identity(&a), &FinFun::identity(&b));
    assert_eq!(both, FinFun::identity(&coproduct(&a, &b).0));
}
