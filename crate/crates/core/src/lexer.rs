//! Line-oriented tokenizer shared by the network and equation parsers.

use crate::error::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Number(String),
    Arrow,
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    Colon,
    At,
    Equals,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Number(s) => format!("number `{s}`"),
            Tok::Arrow => "`->`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Caret => "`^`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Colon => "`:`".into(),
            Tok::At => "`@`".into(),
            Tok::Equals => "`=`".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

pub fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

pub fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '·' | '\'')
}

/// True if `s` lexes back as a single identifier token.
pub fn is_ident(s: &str) -> bool {
    matches!(lex_line(s, 1).as_deref(), Ok([Token { tok: Tok::Ident(t), .. }]) if t == s)
}

/// True if `s` lexes back as a single identifier or unsigned integer.
pub fn is_point_name(s: &str) -> bool {
    match lex_line(s, 1).as_deref() {
        Ok([Token { tok: Tok::Ident(t), .. }]) => t == s,
        Ok([Token { tok: Tok::Number(t), .. }]) => t == s && t.chars().all(|c| c.is_ascii_digit()),
        _ => false,
    }
}

/// Tokenizes one line; `#` starts a comment. Columns are 1-based and count
/// characters, not bytes.
pub fn lex_line(line: &str, line_no: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        let push = |tok, out: &mut Vec<Token>| {
            out.push(Token {
                tok,
                line: line_no,
                column,
            })
        };
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(char::is_ascii_digit)) {
            let end = scan_number(&chars, i);
            if chars
                .get(end)
                .is_some_and(|&n| matches!(n, '·' | '_' | '\''))
            {
                let word_end = scan_word(&chars, i);
                push(Tok::Ident(chars[i..word_end].iter().collect()), &mut out);
                i = word_end;
            } else {
                push(Tok::Number(chars[i..end].iter().collect()), &mut out);
                i = end;
            }
            continue;
        }
        if is_ident_start(c) {
            let end = scan_word(&chars, i);
            push(Tok::Ident(chars[i..end].iter().collect()), &mut out);
            i = end;
            continue;
        }
        let tok = match c {
            '-' if chars.get(i + 1) == Some(&'>') => {
                push(Tok::Arrow, &mut out);
                i += 2;
                continue;
            }
            '→' => Tok::Arrow,
            '+' => Tok::Plus,
            '-' | '−' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '/' => Tok::Slash,
            ':' => Tok::Colon,
            '@' => Tok::At,
            '=' => Tok::Equals,
            other => {
                return Err(ParseError::new(
                    line_no,
                    column,
                    format!("unexpected character `{other}`"),
                ))
            }
        };
        push(tok, &mut out);
        i += 1;
    }
    Ok(out)
}

fn scan_word(chars: &[char], start: usize) -> usize {
    let mut j = start;
    while j < chars.len() && is_ident_char(chars[j]) {
        j += 1;
    }
    j
}

fn scan_number(chars: &[char], start: usize) -> usize {
    let digits = |mut j: usize| {
        while j < chars.len() && chars[j].is_ascii_digit() {
            j += 1;
        }
        j
    };
    let mut j = digits(start);
    if chars.get(j) == Some(&'.') && chars.get(j + 1).is_some_and(char::is_ascii_digit) {
        j = digits(j + 1);
    }
    if matches!(chars.get(j), Some('e' | 'E')) {
        let k = if matches!(chars.get(j + 1), Some('+' | '-')) { j + 2 } else { j + 1 };
        if chars.get(k).is_some_and(char::is_ascii_digit) {
            j = digits(k);
        }
    }
    j
}

/// Cursor over the tokens of one line.
pub struct Cursor<'a> {
    tokens: &'a [Token],
    pos: usize,
    line: usize,
    line_len: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(tokens: &'a [Token], line: usize, line_len: usize) -> Self {
        Cursor {
            tokens,
            pos: 0,
            line,
            line_len,
        }
    }

    pub fn peek(&self) -> Option<&'a Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    pub fn peek_at(&self, k: usize) -> Option<&'a Tok> {
        self.tokens.get(self.pos + k).map(|t| &t.tok)
    }

    pub fn advance(&mut self) -> Option<&'a Token> {
        let t = self.tokens.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    /// Position of the next token, or just past the end of the line.
    pub fn here(&self) -> (usize, usize) {
        match self.tokens.get(self.pos) {
            Some(t) => (t.line, t.column),
            None => (self.line, self.line_len + 1),
        }
    }

    pub fn error(&self, message: impl Into<String>) -> ParseError {
        let (line, column) = self.here();
        ParseError::new(line, column, message)
    }

    pub fn unexpected(&self, wanted: &str) -> ParseError {
        match self.peek() {
            Some(t) => self.error(format!("expected {wanted}, found {}", t.describe())),
            None => self.error(format!("expected {wanted}, found end of line")),
        }
    }

    pub fn expect(&mut self, tok: Tok, wanted: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(wanted))
        }
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn ident(&mut self, wanted: &str) -> Result<(String, usize, usize), ParseError> {
        match self.tokens.get(self.pos) {
            Some(Token {
                tok: Tok::Ident(s),
                line,
                column,
            }) => {
                self.pos += 1;
                Ok((s.clone(), *line, *column))
            }
            _ => Err(self.unexpected(wanted)),
        }
    }

    pub fn finish(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.unexpected("end of line"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        lex_line(s, 1).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn lexes_transition_line() {
        assert_eq!(
            toks("transition iota: S + I -> 2I @ 1/2 # comment"),
            vec![
                Tok::Ident("transition".into()),
                Tok::Ident("iota".into()),
                Tok::Colon,
                Tok::Ident("S".into()),
                Tok::Plus,
                Tok::Ident("I".into()),
                Tok::Arrow,
                Tok::Number("2".into()),
                Tok::Ident("I".into()),
                Tok::At,
                Tok::Number("1".into()),
                Tok::Slash,
                Tok::Number("2".into()),
            ]
        );
    }

    #[test]
    fn suffixed_labels_are_identifiers() {
        assert_eq!(toks("1·l B·r"), vec![Tok::Ident("1·l".into()), Tok::Ident("B·r".into())]);
        assert!(is_point_name("1·l"));
        assert!(is_point_name("12"));
        assert!(!is_point_name("1.5"));
        assert!(is_ident("S·l·r"));
        assert!(!is_ident("a b"));
    }

    #[test]
    fn numbers_with_exponents() {
        assert_eq!(toks("1e-3"), vec![Tok::Number("1e-3".into())]);
        assert_eq!(toks("2E"), vec![Tok::Number("2".into()), Tok::Ident("E".into())]);
        assert_eq!(toks("0.25"), vec![Tok::Number("0.25".into())]);
    }

    #[test]
    fn reports_bad_characters_with_position() {
        let err = lex_line("species A $", 3).unwrap_err();
        assert_eq!((err.line, err.column), (3, 11));
    }
}
