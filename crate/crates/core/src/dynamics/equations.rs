//! Rendering of open rate equations, and a reader for the text form.
//!
//! Text form, one line per species in canonical order:
//!
//! ```text
//! dA/dt = -A*B + I_1
//! dC/dt = 2*A*B - O_4
//! ```

use std::collections::BTreeMap;

use num_traits::One;

use crate::error::{ParseError, Result};
use crate::finset::FinSet;
use crate::lexer::{lex_line, Cursor, Tok};
use crate::poly::{latex_name, Monomial, Poly, Style};
use crate::rational::{parse_rational, Rational};

use super::field::{OpenDynam, PolyField};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EquationFormat {
    Text,
    Latex,
}

pub fn emit_equations(sys: &OpenDynam, format: EquationFormat) -> String {
    let field = sys.decoration();
    let legs = sys.cospan();
    let mut out = String::new();
    for (i, species) in sys.apex().iter().enumerate() {
        let mut flows: Vec<(bool, String)> = Vec::new();
        for x in legs.input().fiber(i) {
            flows.push((true, sys.left().label(x).to_string()));
        }
        for y in legs.output().fiber(i) {
            flows.push((false, sys.right().label(y).to_string()));
        }
        let style = match format {
            EquationFormat::Text => Style::Text,
            EquationFormat::Latex => Style::Latex,
        };
        let poly = &field.components()[i];
        let mut rhs = if poly.is_zero() && !flows.is_empty() {
            String::new()
        } else {
            poly.render(style)
        };
        for (inflow, point) in flows {
            let symbol = match (format, inflow) {
                (EquationFormat::Text, true) => format!("I_{point}"),
                (EquationFormat::Text, false) => format!("O_{point}"),
                (EquationFormat::Latex, true) => format!("I_{{{}}}", latex_point(&point)),
                (EquationFormat::Latex, false) => format!("O_{{{}}}", latex_point(&point)),
            };
            let sign = match (rhs.is_empty(), inflow) {
                (true, true) => "",
                (true, false) => "-",
                (false, true) => " + ",
                (false, false) => " - ",
            };
            rhs.push_str(sign);
            rhs.push_str(&symbol);
        }
        match format {
            EquationFormat::Text => out.push_str(&format!("d{species}/dt = {rhs}\n")),
            EquationFormat::Latex => out.push_str(&format!(
                "\\frac{{d{}}}{{dt}} = {rhs} \\\\\n",
                latex_name(species)
            )),
        }
    }
    out
}

fn latex_point(p: &str) -> String {
    p.replace('_', "\\_").replace('·', "\\cdot ")
}

/// Contents of a text-format equation listing.
#[derive(Clone, Debug, PartialEq)]
pub struct ParsedEquations {
    pub field: PolyField,
    /// `(species, input point)` for every `+ I_x` term.
    pub inflows: Vec<(String, String)>,
    /// `(species, output point)` for every `- O_y` term.
    pub outflows: Vec<(String, String)>,
}

/// Reads the text form produced by [`emit_equations`]. Identifiers of the
/// form `I_x` and `O_y` are flow terms, everything else a species.
pub fn parse_equations(text: &str) -> Result<ParsedEquations> {
    let mut comps: BTreeMap<String, Poly> = BTreeMap::new();
    let mut inflows = Vec::new();
    let mut outflows = Vec::new();
    let mut positions: Vec<(String, usize)> = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line_no = k + 1;
        let tokens = lex_line(line, line_no)?;
        if tokens.is_empty() {
            continue;
        }
        let mut cur = Cursor::new(&tokens, line_no, line.chars().count());
        let (lhs, _, col) = cur.ident("`dX/dt`")?;
        let species = lhs
            .strip_prefix('d')
            .filter(|s| !s.is_empty())
            .ok_or_else(|| ParseError::new(line_no, col, "left side must read `dX/dt`"))?
            .to_string();
        cur.expect(Tok::Slash, "`/dt`")?;
        match cur.ident("`dt`")? {
            (dt, _, _) if dt == "dt" => {}
            (_, l, c) => return Err(ParseError::new(l, c, "expected `dt`").into()),
        }
        cur.expect(Tok::Equals, "`=`")?;
        let mut poly = Poly::zero();
        let mut first = true;
        while !cur.at_end() {
            let negative = if cur.eat(&Tok::Minus) {
                true
            } else if first || cur.eat(&Tok::Plus) {
                false
            } else {
                return Err(cur.unexpected("`+` or `-`").into());
            };
            first = false;
            match parse_term(&mut cur)? {
                Term::Flow(is_in, point) => {
                    if is_in == negative {
                        return Err(cur.error("inflows enter with `+`, outflows with `-`").into());
                    }
                    if is_in {
                        inflows.push((species.clone(), point));
                    } else {
                        outflows.push((species.clone(), point));
                    }
                }
                Term::Mono(c, m) => {
                    poly.add_term(m, if negative { -c } else { c });
                }
            }
        }
        if first {
            return Err(cur.unexpected("a right-hand side").into());
        }
        if comps.insert(species.clone(), poly).is_some() {
            return Err(ParseError::new(line_no, col, format!("second equation for `{species}`")).into());
        }
        positions.push((species, line_no));
    }
    let vars = FinSet::new(comps.keys().cloned())?;
    let field = PolyField::from_map(vars, comps)?;
    Ok(ParsedEquations {
        field,
        inflows,
        outflows,
    })
}

enum Term {
    Flow(bool, String),
    Mono(Rational, Monomial),
}

fn parse_term(cur: &mut Cursor<'_>) -> Result<Term, ParseError> {
    let mut coeff = Rational::one();
    let mut powers: Vec<(String, u32)> = Vec::new();
    loop {
        match cur.peek() {
            Some(Tok::Number(n)) => {
                let mut text = n.clone();
                cur.advance();
                if cur.peek() == Some(&Tok::Slash) {
                    if let Some(Tok::Number(d)) = cur.peek_at(1) {
                        text = format!("{text}/{d}");
                        cur.advance();
                        cur.advance();
                    }
                }
                coeff *= parse_rational(&text).ok_or_else(|| cur.error("malformed number"))?;
            }
            Some(Tok::Ident(name)) => {
                let name = name.clone();
                cur.advance();
                let flow = name
                    .strip_prefix("I_")
                    .map(|p| (true, p))
                    .or_else(|| name.strip_prefix("O_").map(|p| (false, p)));
                if let Some((is_in, point)) = flow {
                    if !powers.is_empty() || !coeff.is_one() {
                        return Err(cur.error("flow terms cannot carry factors"));
                    }
                    return Ok(Term::Flow(is_in, point.to_string()));
                }
                let mut exp = 1;
                if cur.eat(&Tok::Caret) {
                    exp = match cur.advance().map(|t| &t.tok) {
                        Some(Tok::Number(e)) => e.parse().map_err(|_| cur.error("bad exponent"))?,
                        _ => return Err(cur.error("expected an exponent")),
                    };
                }
                powers.push((name, exp));
            }
            _ => return Err(cur.unexpected("a number or identifier")),
        }
        if !cur.eat(&Tok::Star) {
            break;
        }
    }
    let mono = Monomial::from_powers(powers.iter().map(|(v, e)| (v.as_str(), *e)));
    Ok(Term::Mono(coeff, mono))
}
