//! The `.orn` text format for open reaction networks.
//!
//! ```text
//! species S I R
//! transition iota: S + I -> 2 I @ 1/2
//! transition rho: I -> R @ 1
//! input 1 -> S
//! output 2 -> R
//! ```
//!
//! The empty complex is written `0`. Rates are positive decimals or
//! fractions `p/q`.

use std::collections::HashMap;

use num_traits::Signed;

use crate::cospan::Cospan;
use crate::error::{ParseError, Result};
use crate::finset::{FinFun, FinSet};
use crate::lexer::{is_point_name, lex_line, Cursor, Tok};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::reaction::{Complex, OpenRxNet, RxNet, Transition};

/// One parsed `.orn` file, before it is assembled into a network.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct NetworkDocument {
    pub species: Vec<String>,
    pub transitions: Vec<Transition>,
    pub inputs: Vec<(String, String)>,
    pub outputs: Vec<(String, String)>,
}

impl NetworkDocument {
    pub fn parse(text: &str) -> Result<Self> {
        Parser::default().run(text)
    }

    pub fn from_open_net(net: &OpenRxNet) -> Self {
        let legs = net.cospan();
        let boundary = |f: &FinFun| {
            f.dom()
                .iter()
                .enumerate()
                .map(|(x, p)| (p.to_string(), f.cod().label(f.apply(x)).to_string()))
                .collect()
        };
        NetworkDocument {
            species: net.apex().labels().to_vec(),
            transitions: net.decoration().transitions().to_vec(),
            inputs: boundary(legs.input()),
            outputs: boundary(legs.output()),
        }
    }

    pub fn to_open_net(&self) -> Result<OpenRxNet> {
        let species = FinSet::new(self.species.iter().cloned())?;
        let leg = |pairs: &[(String, String)]| -> Result<FinFun> {
            let dom = FinSet::new(pairs.iter().map(|(p, _)| p.clone()))?;
            FinFun::from_pairs(
                dom,
                species.clone(),
                pairs.iter().map(|(p, s)| (p.as_str(), s.as_str())),
            )
        };
        let cospan = Cospan::new(leg(&self.inputs)?, leg(&self.outputs)?)?;
        let net = RxNet::new(species.clone(), self.transitions.clone())?;
        OpenRxNet::new(cospan, net)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        if !self.species.is_empty() {
            out.push_str("species ");
            out.push_str(&self.species.join(" "));
            out.push('\n');
        }
        for t in &self.transitions {
            out.push_str(&format!(
                "transition {}: {} -> {} @ {}\n",
                t.name,
                t.source,
                t.target,
                format_rational(&t.rate)
            ));
        }
        let mut inputs = self.inputs.clone();
        inputs.sort();
        for (p, s) in inputs {
            out.push_str(&format!("input {p} -> {s}\n"));
        }
        let mut outputs = self.outputs.clone();
        outputs.sort();
        for (p, s) in outputs {
            out.push_str(&format!("output {p} -> {s}\n"));
        }
        out
    }
}

pub fn parse(text: &str) -> Result<OpenRxNet> {
    NetworkDocument::parse(text)?.to_open_net()
}

pub fn render(net: &OpenRxNet) -> String {
    NetworkDocument::from_open_net(net).render()
}

#[derive(Default)]
struct Parser {
    doc: NetworkDocument,
    species: HashMap<String, (usize, usize)>,
    transitions: HashMap<String, (usize, usize)>,
    inputs: HashMap<String, (usize, usize)>,
    outputs: HashMap<String, (usize, usize)>,
    /// Species references seen before the declaration could be checked.
    pending: Vec<(String, usize, usize)>,
}

impl Parser {
    fn run(mut self, text: &str) -> Result<NetworkDocument> {
        for (k, line) in text.lines().enumerate() {
            let line_no = k + 1;
            let tokens = lex_line(line, line_no)?;
            if tokens.is_empty() {
                continue;
            }
            let mut cur = Cursor::new(&tokens, line_no, line.chars().count());
            let (keyword, l, c) = cur.ident("a declaration keyword")?;
            match keyword.as_str() {
                "species" => self.species_decl(&mut cur)?,
                "transition" => self.transition_decl(&mut cur)?,
                "input" => self.boundary_decl(&mut cur, true)?,
                "output" => self.boundary_decl(&mut cur, false)?,
                other => {
                    return Err(ParseError::new(
                        l,
                        c,
                        format!(
                            "unknown declaration `{other}`; expected species, transition, input or output"
                        ),
                    )
                    .into())
                }
            }
            cur.finish()?;
        }
        for (s, l, c) in &self.pending {
            if !self.species.contains_key(s) {
                return Err(ParseError::new(*l, *c, format!("undeclared species `{s}`")).into());
            }
        }
        Ok(self.doc)
    }

    fn species_decl(&mut self, cur: &mut Cursor<'_>) -> Result<(), ParseError> {
        let mut any = false;
        while !cur.at_end() {
            let (name, l, c) = cur.ident("a species name")?;
            if let Some((pl, pc)) = self.species.insert(name.clone(), (l, c)) {
                return Err(ParseError::new(
                    l,
                    c,
                    format!("species `{name}` already declared at line {pl}, column {pc}"),
                ));
            }
            self.doc.species.push(name);
            any = true;
        }
        if any {
            Ok(())
        } else {
            Err(cur.unexpected("at least one species name"))
        }
    }

    fn transition_decl(&mut self, cur: &mut Cursor<'_>) -> Result<(), ParseError> {
        let (name, l, c) = cur.ident("a transition name")?;
        if let Some((pl, _)) = self.transitions.insert(name.clone(), (l, c)) {
            return Err(ParseError::new(
                l,
                c,
                format!("transition `{name}` already declared at line {pl}"),
            ));
        }
        cur.expect(Tok::Colon, "`:`")?;
        let source = self.complex(cur)?;
        cur.expect(Tok::Arrow, "`->`")?;
        let target = self.complex(cur)?;
        cur.expect(Tok::At, "`@` and a rate")?;
        let rate = rate(cur)?;
        self.doc.transitions.push(Transition::new(name, source, target, rate));
        Ok(())
    }

    fn complex(&mut self, cur: &mut Cursor<'_>) -> Result<Complex, ParseError> {
        if cur.peek() == Some(&Tok::Number("0".into())) && !matches!(cur.peek_at(1), Some(Tok::Ident(_))) {
            cur.advance();
            return Ok(Complex::new());
        }
        let mut complex = Complex::new();
        loop {
            let mut count = 1;
            if let Some(Tok::Number(n)) = cur.peek() {
                count = n
                    .parse::<u32>()
                    .ok()
                    .filter(|&k| k > 0)
                    .ok_or_else(|| cur.error(format!("`{n}` is not a positive whole multiplicity")))?;
                cur.advance();
            }
            let (species, l, c) = cur.ident("a species name")?;
            self.reference(species.clone(), l, c);
            complex.add(&species, count);
            if !cur.eat(&Tok::Plus) {
                return Ok(complex);
            }
        }
    }

    fn boundary_decl(&mut self, cur: &mut Cursor<'_>, input: bool) -> Result<(), ParseError> {
        let (point, l, c) = match cur.advance() {
            Some(t) => match &t.tok {
                Tok::Ident(s) | Tok::Number(s) if is_point_name(s) => (s.clone(), t.line, t.column),
                _ => {
                    return Err(ParseError::new(
                        t.line,
                        t.column,
                        format!("expected a point name, found {}", t.tok.describe()),
                    ))
                }
            },
            None => return Err(cur.unexpected("a point name")),
        };
        let (seen, side) = if input {
            (&mut self.inputs, "input")
        } else {
            (&mut self.outputs, "output")
        };
        if let Some((pl, _)) = seen.insert(point.clone(), (l, c)) {
            return Err(ParseError::new(
                l,
                c,
                format!("{side} point `{point}` already declared at line {pl}"),
            ));
        }
        cur.expect(Tok::Arrow, "`->`")?;
        let (species, sl, sc) = cur.ident("a species name")?;
        self.reference(species.clone(), sl, sc);
        let list = if input {
            &mut self.doc.inputs
        } else {
            &mut self.doc.outputs
        };
        list.push((point, species));
        Ok(())
    }

    fn reference(&mut self, species: String, line: usize, column: usize) {
        if !self.species.contains_key(&species) {
            self.pending.push((species, line, column));
        }
    }
}

fn rate(cur: &mut Cursor<'_>) -> Result<Rational, ParseError> {
    let (line, column) = cur.here();
    let negative = cur.eat(&Tok::Minus);
    let mut text = match cur.advance().map(|t| &t.tok) {
        Some(Tok::Number(n)) => n.clone(),
        _ => return Err(ParseError::new(line, column, "expected a rate constant")),
    };
    if cur.eat(&Tok::Slash) {
        match cur.advance().map(|t| &t.tok) {
            Some(Tok::Number(d)) => text = format!("{text}/{d}"),
            _ => return Err(cur.error("expected a denominator")),
        }
    }
    let value = parse_rational(&text)
        .ok_or_else(|| ParseError::new(line, column, format!("malformed rate `{text}`")))?;
    let value = if negative { -value } else { value };
    if !value.is_positive() {
        return Err(ParseError::new(
            line,
            column,
            format!("rate constant must be positive, got {}", format_rational(&value)),
        ));
    }
    Ok(value)
}
