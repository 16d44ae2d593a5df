use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::lexer::{lex_line, Cursor, Tok};
use crate::rational::{parse_rational, to_f64};

use super::field::{check_len, pushforward, CompiledField, OpenDynam};

/// A piecewise-polynomial function of time. Piece `k` applies from its start
/// time until the next piece starts; before the first piece the value is 0.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeFn {
    pieces: Vec<(f64, Vec<f64>)>,
}

impl TimeFn {
    pub fn constant(c: f64) -> Self {
        TimeFn {
            pieces: vec![(f64::NEG_INFINITY, vec![c])],
        }
    }

    /// `coeffs[k]` multiplies `t^k`.
    pub fn polynomial(coeffs: Vec<f64>) -> Self {
        TimeFn {
            pieces: vec![(f64::NEG_INFINITY, coeffs)],
        }
    }

    pub fn piecewise(pieces: Vec<(f64, Vec<f64>)>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidFlow("piecewise function without pieces".into()));
        }
        if pieces.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidFlow(
                "piece start times must be strictly increasing".into(),
            ));
        }
        if pieces.iter().any(|(s, c)| s.is_nan() || c.iter().any(|x| !x.is_finite())) {
            return Err(Error::InvalidFlow("non-finite piece data".into()));
        }
        Ok(TimeFn { pieces })
    }

    pub fn pieces(&self) -> &[(f64, Vec<f64>)] {
        &self.pieces
    }

    pub fn eval(&self, t: f64) -> f64 {
        let Some((_, coeffs)) = self.pieces.iter().rev().find(|(s, _)| *s <= t) else {
            return 0.0;
        };
        coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }
}

impl TimeFn {
    /// Reads `expr` or `start:expr;start:expr;…`, where each `expr` is a
    /// polynomial in `t` such as `1 + 2*t - t^2` or `1/2 t`.
    pub fn parse(text: &str) -> Result<TimeFn> {
        let bad = |m: String| Error::InvalidFlow(format!("`{text}`: {m}"));
        if !text.contains(':') {
            return Ok(TimeFn::polynomial(parse_t_poly(text).map_err(bad)?));
        }
        let pieces = text
            .split(';')
            .map(|piece| {
                let (start, expr) = piece
                    .split_once(':')
                    .ok_or_else(|| format!("piece `{piece}` lacks `start:`"))?;
                let start = parse_rational(start)
                    .map(|r| to_f64(&r))
                    .ok_or_else(|| format!("bad start time `{start}`"))?;
                Ok((start, parse_t_poly(expr)?))
            })
            .collect::<std::result::Result<Vec<_>, String>>()
            .map_err(bad)?;
        TimeFn::piecewise(pieces)
    }
}

/// A polynomial in `t`, returned as coefficients of `t^0, t^1, …`.
fn parse_t_poly(text: &str) -> std::result::Result<Vec<f64>, String> {
    let tokens = lex_line(text, 1).map_err(|e| e.message)?;
    let mut cur = Cursor::new(&tokens, 1, text.chars().count());
    let mut coeffs: Vec<f64> = Vec::new();
    let mut first = true;
    while !cur.at_end() || first {
        let sign = if cur.eat(&Tok::Minus) {
            -1.0
        } else if first || cur.eat(&Tok::Plus) {
            1.0
        } else {
            return Err(cur.unexpected("`+` or `-`").message);
        };
        first = false;
        let mut coeff = sign;
        let mut power = 0usize;
        loop {
            match cur.advance().map(|t| &t.tok) {
                Some(Tok::Number(n)) => {
                    let mut lit = n.clone();
                    if cur.eat(&Tok::Slash) {
                        match cur.advance().map(|t| &t.tok) {
                            Some(Tok::Number(d)) => lit = format!("{lit}/{d}"),
                            _ => return Err("expected a denominator".into()),
                        }
                    }
                    let value = parse_rational(&lit).ok_or_else(|| format!("bad number `{lit}`"))?;
                    coeff *= to_f64(&value);
                }
                Some(Tok::Ident(t)) if t == "t" => {
                    let mut k = 1;
                    if cur.eat(&Tok::Caret) {
                        k = match cur.advance().map(|t| &t.tok) {
                            Some(Tok::Number(e)) => {
                                e.parse().map_err(|_| format!("bad exponent `{e}`"))?
                            }
                            _ => return Err("expected an exponent".into()),
                        };
                    }
                    power += k;
                }
                Some(other) => return Err(format!("unexpected {}", other.describe())),
                None => return Err("expected a term".into()),
            }
            let juxtaposed = matches!(cur.peek(), Some(Tok::Ident(_)));
            if !(cur.eat(&Tok::Star) || juxtaposed) {
                break;
            }
        }
        if coeffs.len() <= power {
            coeffs.resize(power + 1, 0.0);
        }
        coeffs[power] += coeff;
    }
    Ok(coeffs)
}

/// Splits `k=v,k=v`, rejecting repeated keys.
pub fn assignments(text: &str) -> Result<Vec<(String, String)>> {
    let mut out: Vec<(String, String)> = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| {
            Error::InvalidArgument(format!("expected `name=value`, got `{item}`"))
        })?;
        let k = k.trim().to_string();
        if out.iter().any(|(seen, _)| *seen == k) {
            return Err(Error::InvalidArgument(format!("`{k}` given twice")));
        }
        out.push((k, v.trim().to_string()));
    }
    Ok(out)
}

/// Inflows at input points and outflows at output points, keyed by point
/// label. Points without an entry have zero flow.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FlowSpec {
    pub inflows: BTreeMap<String, TimeFn>,
    pub outflows: BTreeMap<String, TimeFn>,
}

impl FlowSpec {
    pub fn none() -> Self {
        FlowSpec::default()
    }

    pub fn constant(inflows: &[(&str, f64)], outflows: &[(&str, f64)]) -> Self {
        FlowSpec {
            inflows: inflows
                .iter()
                .map(|&(p, v)| (p.to_string(), TimeFn::constant(v)))
                .collect(),
            outflows: outflows
                .iter()
                .map(|&(p, v)| (p.to_string(), TimeFn::constant(v)))
                .collect(),
        }
    }

    /// Reads `point=expr,…` lists for inflows and outflows; see
    /// [`TimeFn::parse`] for `expr`.
    pub fn parse(inflows: &str, outflows: &str) -> Result<Self> {
        let read = |text: &str| -> Result<BTreeMap<String, TimeFn>> {
            assignments(text)?
                .into_iter()
                .map(|(p, e)| Ok((p, TimeFn::parse(&e)?)))
                .collect()
        };
        Ok(FlowSpec {
            inflows: read(inflows)?,
            outflows: read(outflows)?,
        })
    }

    pub fn validate(&self, sys: &OpenDynam) -> Result<()> {
        for p in self.inflows.keys() {
            if !sys.left().contains(p) {
                return Err(Error::InvalidFlow(format!("`{p}` is not an input point")));
            }
        }
        for p in self.outflows.keys() {
            if !sys.right().contains(p) {
                return Err(Error::InvalidFlow(format!("`{p}` is not an output point")));
            }
        }
        Ok(())
    }

    pub fn inflow_at(&self, sys: &OpenDynam, t: f64) -> Vec<f64> {
        sys.left()
            .iter()
            .map(|p| self.inflows.get(p).map_or(0.0, |f| f.eval(t)))
            .collect()
    }

    pub fn outflow_at(&self, sys: &OpenDynam, t: f64) -> Vec<f64> {
        sys.right()
            .iter()
            .map(|p| self.outflows.get(p).map_or(0.0, |f| f.eval(t)))
            .collect()
    }
}

/// The right-hand side `v(c) + i_*(I(t)) − o_*(O(t))`, prepared for repeated
/// evaluation.
pub struct OpenRateRhs<'a> {
    sys: &'a OpenDynam,
    field: CompiledField,
    flows: &'a FlowSpec,
}

impl<'a> OpenRateRhs<'a> {
    pub fn new(sys: &'a OpenDynam, flows: &'a FlowSpec) -> Result<Self> {
        flows.validate(sys)?;
        Ok(OpenRateRhs {
            sys,
            field: sys.decoration().compile(),
            flows,
        })
    }

    pub fn dim(&self) -> usize {
        self.field.len()
    }

    pub fn eval(&self, c: &[f64], t: f64) -> Vec<f64> {
        let mut out = self.field.eval(c);
        let legs = self.sys.cospan();
        let inflow = self.flows.inflow_at(self.sys, t);
        let outflow = self.flows.outflow_at(self.sys, t);
        for (x, &s) in legs.input().indices().iter().enumerate() {
            out[s] += inflow[x];
        }
        for (y, &s) in legs.output().indices().iter().enumerate() {
            out[s] -= outflow[y];
        }
        out
    }
}

pub fn open_rate_rhs(sys: &OpenDynam, c: &[f64], flows: &FlowSpec, t: f64) -> Result<Vec<f64>> {
    check_len(sys.apex().len(), c.len())?;
    let rhs = OpenRateRhs::new(sys, flows)?;
    Ok(rhs.eval(c, t))
}

/// `i_*(I) − o_*(O)` for constant flow vectors.
pub fn boundary_flow(sys: &OpenDynam, inflow: &[f64], outflow: &[f64]) -> Result<Vec<f64>> {
    let mut net = pushforward(sys.cospan().input(), inflow)?;
    let out = pushforward(sys.cospan().output(), outflow)?;
    for (n, o) in net.iter_mut().zip(out) {
        *n -= o;
    }
    Ok(net)
}
