//! Fixtures and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use orn_core::rational::int;
use orn_core::{dsl, FinFun, Monomial, OpenRxNet, Poly, Rational, RxNet};

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(data_path(name)).unwrap()
}

pub fn net(name: &str) -> OpenRxNet {
    dsl::parse(&fixture(name)).unwrap()
}

/// `A + B -> 2 C` fed through three inputs, with `C` as output.
pub fn dimer(rate: &str) -> OpenRxNet {
    dsl::parse(&format!(
        "species A B C\ntransition alpha: A + B -> 2 C @ {rate}\n\
         input 1 -> A\ninput 2 -> B\ninput 3 -> B\noutput 4 -> C\n"
    ))
    .unwrap()
}

/// `D -> E + F` taking input 4 and emitting on 5 and 6.
pub fn split(rate: &str) -> OpenRxNet {
    dsl::parse(&format!(
        "species D E F\ntransition beta: D -> E + F @ {rate}\n\
         input 4 -> D\noutput 5 -> E\noutput 6 -> F\n"
    ))
    .unwrap()
}

/// Builds a polynomial from `(coefficient, monomial)` pairs.
pub fn poly(terms: &[(Rational, &[(&str, u32)])]) -> Poly {
    let mut p = Poly::zero();
    for (c, m) in terms {
        p.add_term(Monomial::from_powers(m.iter().copied()), c.clone());
    }
    p
}

/// Mass-action velocity evaluated straight from the transition list.
pub fn mass_action_eval(r: &RxNet, c: &[f64]) -> Vec<f64> {
    let species = r.species();
    let mut v = vec![0.0; species.len()];
    for t in r.transitions() {
        let num: f64 = t.rate.numer().to_string().parse().unwrap();
        let den: f64 = t.rate.denom().to_string().parse().unwrap();
        let mut flux = num / den;
        for (s, k) in t.source.iter() {
            flux *= c[species.index_of(s).unwrap()].powi(k as i32);
        }
        for (s, k) in t.target.iter() {
            v[species.index_of(s).unwrap()] += flux * f64::from(k);
        }
        for (s, k) in t.source.iter() {
            v[species.index_of(s).unwrap()] -= flux * f64::from(k);
        }
    }
    v
}

/// Equivalence relation on `S ⊔ S2` generated by `o(y) ~ i2(y)`, as a full
/// boolean matrix closed under transitivity with Warshall's algorithm.
pub fn closure_matrix(o: &FinFun, i2: &FinFun) -> Vec<Vec<bool>> {
    let n1 = o.cod().len();
    let n = n1 + i2.cod().len();
    let mut rel = vec![vec![false; n]; n];
    for (k, row) in rel.iter_mut().enumerate() {
        row[k] = true;
    }
    for y in 0..o.dom().len() {
        let (a, b) = (o.apply(y), n1 + i2.apply(y));
        rel[a][b] = true;
        rel[b][a] = true;
    }
    for k in 0..n {
        for a in 0..n {
            if rel[a][k] {
                for b in 0..n {
                    if rel[k][b] {
                        rel[a][b] = true;
                    }
                }
            }
        }
    }
    rel
}

/// Rank of a list of rational vectors by plain Gaussian elimination.
pub fn rank(vectors: &[Vec<Rational>]) -> usize {
    let mut rows: Vec<Vec<Rational>> = vectors.to_vec();
    let zero = int(0);
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][col] != zero) else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && rows[i][col] != zero {
                let factor = &rows[i][col] / &rows[r][col];
                for j in 0..ncols {
                    let d = &factor * &rows[r][j];
                    rows[i][j] = &rows[i][j] - &d;
                }
            }
        }
        r += 1;
    }
    r
}

/// Whether two spanning sets generate the same subspace.
pub fn same_span(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> bool {
    let joint: Vec<Vec<Rational>> = a.iter().chain(b).cloned().collect();
    let r = rank(&joint);
    rank(a) == r && rank(b) == r
}

pub fn max_abs(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |m, x| m.max(x.abs()))
}
