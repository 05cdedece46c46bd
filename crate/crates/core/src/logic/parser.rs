//! Recursive-descent parser for the formula grammar.
//!
//! ```text
//! formula  := quant | disj
//! quant    := ("Ex"|"Ax") objvar "." formula | ("EX"|"AX") setvar "." formula
//! disj     := conj ("|" conj)*
//! conj     := unary ("&" unary)*
//! unary    := "!" unary | "(" formula ")" | atom
//! atom     := objvar "=" objvar | setvar "=" setvar | "adj(" objvar "," objvar ")"
//!           | "label" INT "(" objvar ")" | setvar "(" objvar ")"
//! ```

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use thiserror::Error;

use super::Formula;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{kind} at offset {offset}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: &'static str, found: String },
    #[error("label index {label} outside 1..={width}")]
    LabelOutOfRange { label: usize, width: usize },
    #[error("label width must be at least 1")]
    ZeroWidth,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(usize),
    LParen,
    RParen,
    Comma,
    Dot,
    Amp,
    Bar,
    Bang,
    Eq,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => alloc::format!("identifier {s:?}"),
            Tok::Int(n) => alloc::format!("integer {n}"),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::Dot => "'.'".into(),
            Tok::Amp => "'&'".into(),
            Tok::Bar => "'|'".into(),
            Tok::Bang => "'!'".into(),
            Tok::Eq => "'='".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'.' => Tok::Dot,
            b'&' => Tok::Amp,
            b'|' => Tok::Bar,
            b'!' => Tok::Bang,
            b'=' => Tok::Eq,
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            c if c.is_ascii_digit() => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n = text[start..i].parse().unwrap_or(usize::MAX);
                out.push((Tok::Int(n), start));
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(ParseError {
                    offset: i,
                    kind: ParseErrorKind::UnexpectedChar(ch),
                });
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::Eof, text.len()));
    Ok(out)
}

fn is_objvar(s: &str) -> bool {
    s.starts_with(|c: char| c.is_ascii_lowercase() || c == '_')
}

fn is_setvar(s: &str) -> bool {
    s.starts_with(|c: char| c.is_ascii_uppercase())
}

/// `label7` style identifiers.
fn glued_label(s: &str) -> Option<usize> {
    let digits = s.strip_prefix("label")?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    Some(digits.parse().unwrap_or(usize::MAX))
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    width: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &'static str) -> ParseError {
        ParseError {
            offset: self.offset(),
            kind: ParseErrorKind::Unexpected {
                expected,
                found: self.peek().describe(),
            },
        }
    }

    fn expect(&mut self, tok: Tok, expected: &'static str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn objvar(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Tok::Ident(s) if is_objvar(s) && s != "adj" && glued_label(s).is_none() && s != "label" => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => Err(self.error("object variable")),
        }
    }

    fn setvar(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Tok::Ident(s) if is_setvar(s) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => Err(self.error("set variable")),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        if let Tok::Ident(kw) = self.peek() {
            if matches!(kw.as_str(), "Ex" | "Ax" | "EX" | "AX")
                && matches!(self.peek_at(1), Tok::Ident(_))
            {
                let kw = kw.clone();
                self.bump();
                let var = if kw.ends_with('x') {
                    self.objvar()?
                } else {
                    self.setvar()?
                };
                self.expect(Tok::Dot, "'.'")?;
                let body = Box::new(self.formula()?);
                return Ok(match kw.as_str() {
                    "Ex" => Formula::ExistsObj(var, body),
                    "Ax" => Formula::ForallObj(var, body),
                    "EX" => Formula::ExistsSet(var, body),
                    _ => Formula::ForallSet(var, body),
                });
            }
        }
        self.disj()
    }

    fn disj(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.conj()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            let g = self.conj()?;
            f = Formula::Or(Box::new(f), Box::new(g));
        }
        Ok(f)
    }

    fn conj(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let g = self.unary()?;
            f = Formula::And(Box::new(f), Box::new(g));
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Bang => {
                self.bump();
                Ok(Formula::Not(Box::new(self.unary()?)))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(f)
            }
            _ => self.atom(),
        }
    }

    fn label_index(&mut self, label: usize, at: usize) -> Result<usize, ParseError> {
        if label == 0 || label > self.width {
            return Err(ParseError {
                offset: at,
                kind: ParseErrorKind::LabelOutOfRange {
                    label,
                    width: self.width,
                },
            });
        }
        Ok(label)
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let at = self.offset();
        let name = match self.peek() {
            Tok::Ident(s) => s.clone(),
            _ => return Err(self.error("formula")),
        };
        if name == "adj" && *self.peek_at(1) == Tok::LParen {
            self.bump();
            self.bump();
            let x = self.objvar()?;
            self.expect(Tok::Comma, "','")?;
            let y = self.objvar()?;
            self.expect(Tok::RParen, "')'")?;
            return Ok(Formula::Adj(x, y));
        }
        let label = if let Some(n) = glued_label(&name) {
            self.bump();
            Some(n)
        } else if name == "label" {
            self.bump();
            match self.bump() {
                Tok::Int(n) => Some(n),
                _ => {
                    self.pos -= 1;
                    return Err(self.error("label index"));
                }
            }
        } else {
            None
        };
        if let Some(n) = label {
            let n = self.label_index(n, at)?;
            self.expect(Tok::LParen, "'('")?;
            let x = self.objvar()?;
            self.expect(Tok::RParen, "')'")?;
            return Ok(Formula::Label(n, x));
        }
        if is_setvar(&name) {
            self.bump();
            return match self.peek() {
                Tok::LParen => {
                    self.bump();
                    let x = self.objvar()?;
                    self.expect(Tok::RParen, "')'")?;
                    Ok(Formula::In(name, x))
                }
                Tok::Eq => {
                    self.bump();
                    let y = self.setvar()?;
                    Ok(Formula::SetEqual(name, y))
                }
                _ => Err(self.error("'(' or '='")),
            };
        }
        let x = self.objvar()?;
        self.expect(Tok::Eq, "'='")?;
        let y = self.objvar()?;
        Ok(Formula::Equal(x, y))
    }
}

/// Parses `text` over the vocabulary with label width `width`.
///
/// Bound variables are alpha-renamed (see [`Formula::alpha_normalize`]); free
/// variables are accepted and show up in [`Formula::free_variables`].
pub fn parse_formula(text: &str, width: usize) -> Result<Formula, ParseError> {
    if width == 0 {
        return Err(ParseError {
            offset: 0,
            kind: ParseErrorKind::ZeroWidth,
        });
    }
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        width,
    };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error("end of input"));
    }
    Ok(f.alpha_normalize())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar_examples() {
        assert_eq!(
            parse_formula("Ex x. Ex y. adj(x,y)", 1).unwrap(),
            Formula::exists("x", Formula::exists("y", Formula::adj("x", "y")))
        );
        assert_eq!(
            parse_formula("AX S. Ex x. S(x)", 1).unwrap(),
            Formula::forall_set("S", Formula::exists("x", Formula::member("S", "x")))
        );
        let err = parse_formula("adj(x,", 1).unwrap_err();
        assert_eq!(err.offset, 6);
    }

    #[test]
    fn labels_and_equalities() {
        assert_eq!(parse_formula("label2(x)", 2).unwrap(), Formula::label(2, "x"));
        assert_eq!(parse_formula("label 2 (x)", 2).unwrap(), Formula::label(2, "x"));
        let err = parse_formula("label3(x)", 2).unwrap_err();
        assert_eq!(
            err.kind,
            ParseErrorKind::LabelOutOfRange { label: 3, width: 2 }
        );
        assert_eq!(parse_formula("x = y", 1).unwrap(), Formula::equal("x", "y"));
        assert_eq!(parse_formula("X = Y", 1).unwrap(), Formula::set_equal("X", "Y"));
    }

    #[test]
    fn precedence_and_scope() {
        // & binds tighter than |, quantifier bodies extend to the right
        let f = parse_formula("Ex x. adj(x,x) | label1(x) & x = x", 1).unwrap();
        let expected = Formula::exists(
            "x",
            Formula::adj("x", "x").or(Formula::label(1, "x").and(Formula::equal("x", "x"))),
        );
        assert_eq!(f, expected);
        let g = parse_formula("!!adj(x,y) & !(Ex z. adj(z,z))", 1).unwrap();
        assert_eq!(
            g,
            Formula::adj("x", "y")
                .not()
                .not()
                .and(Formula::exists("z", Formula::adj("z", "z")).not())
        );
    }

    #[test]
    fn errors_carry_offsets() {
        assert_eq!(parse_formula("adj(x,y) &", 1).unwrap_err().offset, 10);
        assert_eq!(parse_formula("Ex X. adj(x,x)", 1).unwrap_err().offset, 3);
        assert_eq!(parse_formula("adj(x,y) $", 1).unwrap_err().offset, 9);
        assert_eq!(parse_formula("(adj(x,y)", 1).unwrap_err().offset, 9);
        assert!(parse_formula("", 1).is_err());
    }

    #[test]
    fn unbound_variables_are_free() {
        let f = parse_formula("Ex x. adj(x,y) & X(y)", 1).unwrap();
        let fv = f.free_variables();
        assert_eq!(fv.objects, alloc::vec!["y".to_string()]);
        assert_eq!(fv.sets, alloc::vec!["X".to_string()]);
    }

    #[test]
    fn shadowed_binders_are_renamed() {
        let f = parse_formula("Ex x. Ex x. adj(x,x)", 1).unwrap();
        assert!(f.is_alpha_normal());
        assert_eq!(f.quantifier_rank(), 2);
    }
}
