//! Sparse multivariate polynomials with exact rational coefficients.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::rational::{format_rational, int, to_f64, Rational};

/// A product of variables with positive exponents.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Monomial(BTreeMap<String, u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(name: &str) -> Self {
        Monomial::from_powers([(name, 1)])
    }

    pub fn from_powers<'a, I>(powers: I) -> Self
    where
        I: IntoIterator<Item = (&'a str, u32)>,
    {
        let mut m = BTreeMap::new();
        for (v, e) in powers {
            if e > 0 {
                *m.entry(v.to_string()).or_insert(0) += e;
            }
        }
        Monomial(m)
    }

    pub fn degree(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn exponent(&self, var: &str) -> u32 {
        self.0.get(var).copied().unwrap_or(0)
    }

    pub fn powers(&self) -> impl Iterator<Item = (&str, u32)> {
        self.0.iter().map(|(v, &e)| (v.as_str(), e))
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    fn times(&self, other: &Monomial) -> Monomial {
        let mut m = self.0.clone();
        for (v, e) in &other.0 {
            *m.entry(v.clone()).or_insert(0) += e;
        }
        Monomial(m)
    }

    fn rename(&self, map: &dyn Fn(&str) -> String) -> Monomial {
        let mut m = BTreeMap::new();
        for (v, e) in &self.0 {
            *m.entry(map(v)).or_insert(0) += e;
        }
        Monomial(m)
    }
}

/// Higher total degree first, then lexicographic on the exponent list.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .degree()
            .cmp(&self.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        f.write_str(&render_monomial(self, Style::Text))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    Text,
    Latex,
}

/// Wraps a variable name for LaTeX output.
pub fn latex_name(v: &str) -> String {
    let escaped = v.replace('_', "\\_").replace('·', "\\cdot ");
    if v.chars().count() == 1 {
        escaped
    } else {
        format!("\\mathrm{{{escaped}}}")
    }
}

fn render_monomial(m: &Monomial, style: Style) -> String {
    let parts: Vec<String> = m
        .powers()
        .map(|(v, e)| match (style, e) {
            (Style::Text, 1) => v.to_string(),
            (Style::Text, e) => format!("{v}^{e}"),
            (Style::Latex, 1) => latex_name(v),
            (Style::Latex, e) => format!("{}^{{{e}}}", latex_name(v)),
        })
        .collect();
    match style {
        Style::Text => parts.join("*"),
        Style::Latex => parts.join(" "),
    }
}

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: Rational) -> Self {
        Poly::term(c, Monomial::one())
    }

    pub fn var(name: &str) -> Self {
        Poly::term(Rational::one(), Monomial::var(name))
    }

    pub fn term(coeff: Rational, mono: Monomial) -> Self {
        let mut p = Poly::zero();
        p.add_term(mono, coeff);
        p
    }

    pub fn add_term(&mut self, mono: Monomial, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(mono.clone()).or_insert_with(Rational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&mono);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, mono: &Monomial) -> Rational {
        self.terms.get(mono).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn variables(&self) -> BTreeSet<String> {
        self.terms
            .keys()
            .flat_map(|m| m.powers().map(|(v, _)| v.to_string()))
            .collect()
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k * c))
                .collect(),
        }
    }

    /// Substitutes variable `v` by variable `map(v)` everywhere; equal
    /// monomials that arise are merged.
    pub fn rename(&self, map: &dyn Fn(&str) -> String) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.rename(map), c.clone());
        }
        out
    }

    pub fn derivative(&self, var: &str) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            if e == 0 {
                continue;
            }
            let lowered =
                Monomial::from_powers(m.powers().map(|(v, k)| if v == var { (v, k - 1) } else { (v, k) }));
            out.add_term(lowered, c * int(e as i64));
        }
        out
    }

    pub fn eval(&self, value: impl Fn(&str) -> f64) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                to_f64(c) * m.powers().map(|(v, e)| value(v).powi(e as i32)).product::<f64>()
            })
            .sum()
    }

    pub fn eval_exact(&self, value: impl Fn(&str) -> Rational) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.powers() {
                t *= num_traits::pow(value(v), e as usize);
            }
            acc += t;
        }
        acc
    }

    /// Lowers to a form that evaluates on a dense vector indexed by
    /// `index(var)`.
    pub fn compile(&self, index: &HashMap<&str, usize>) -> CompiledPoly {
        CompiledPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    (
                        to_f64(c),
                        m.powers().map(|(v, e)| (index[v], e as i32)).collect(),
                    )
                })
                .collect(),
        }
    }

    pub fn render(&self, style: Style) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (k, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            out.push_str(&render_term(&mag, m, style));
        }
        out
    }
}

fn render_term(mag: &Rational, m: &Monomial, style: Style) -> String {
    let coeff = match style {
        Style::Text => format_rational(mag),
        Style::Latex if mag.is_integer() => mag.numer().to_string(),
        Style::Latex => format!("\\frac{{{}}}{{{}}}", mag.numer(), mag.denom()),
    };
    if m.is_one() {
        return coeff;
    }
    let mono = render_monomial(m, style);
    if mag.is_one() {
        mono
    } else {
        match style {
            Style::Text => format!("{coeff}*{mono}"),
            Style::Latex => format!("{coeff} {mono}"),
        }
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Style::Text))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Style::Text))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.times(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

/// A polynomial lowered to `f64` coefficients over dense variable indices.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    terms: Vec<(f64, Vec<(usize, i32)>)>,
}

impl CompiledPoly {
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, pw)| c * pw.iter().map(|&(i, e)| x[i].powi(e)).product::<f64>())
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn v(name: &str) -> Poly {
        Poly::var(name)
    }

    #[test]
    fn arithmetic_cancels_to_zero() {
        let p = &(&v("A") * &v("B")) - &(&v("B") * &v("A"));
        assert!(p.is_zero());
        assert_eq!(p.len(), 0);
    }

    #[test]
    fn rename_merges_terms() {
        let p = &v("A") - &v("B");
        let q = p.rename(&|_| "Z".to_string());
        assert!(q.is_zero());
        let r = (&v("A") * &v("B")).rename(&|_| "Z".to_string());
        assert_eq!(r, &v("Z") * &v("Z"));
    }

    #[test]
    fn derivative_and_eval() {
        let p = &(&v("A") * &v("A")).scale(&ratio(3, 2)) + &v("B");
        assert_eq!(p.derivative("A"), v("A").scale(&int(3)));
        assert_eq!(p.degree(), 2);
        let x = p.eval(|n| if n == "A" { 2.0 } else { 1.0 });
        assert_eq!(x, 7.0);
        let idx: HashMap<&str, usize> = [("A", 0), ("B", 1)].into_iter().collect();
        assert_eq!(p.compile(&idx).eval(&[2.0, 1.0]), 7.0);
        assert_eq!(p.eval_exact(|_| int(2)), int(8));
    }

    #[test]
    fn renders_text_and_latex() {
        let p = &(&v("A") * &v("B")).scale(&int(-2)) + &v("C").scale(&ratio(1, 2));
        assert_eq!(p.render(Style::Text), "-2*A*B + 1/2*C");
        assert_eq!(p.render(Style::Latex), "-2 A B + \\frac{1}{2} C");
        assert_eq!(Poly::zero().render(Style::Text), "0");
        assert_eq!((&v("A") * &v("A")).render(Style::Text), "A^2");
    }
}
