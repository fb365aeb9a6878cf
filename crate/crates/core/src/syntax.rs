//! Concrete syntax for types and the JSON certificate format.
//!
//! ```text
//! type  := arrow
//! arrow := inter ("->" arrow)?          right-associative
//! inter := prim ("&" prim)*             left-associative, binds tighter
//! prim  := "U" | "c" digits | "(" type ")"
//! ```
//!
//! `∩` and `→` are accepted as input aliases for `&` and `->`. Printing
//! uses the minimal number of parentheses that parses back to the same
//! tree; an intersection nested as the right operand of `&` is the only
//! intersection that needs them.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::bcd::{bcd_validate, BcdDerivation, BcdRule};
use crate::derivation::{validate, Derivation, Rule, ValidationError};
use crate::types::{Ty, TyKind};

/// Byte offsets into the parsed text.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("parse error at {}: expected {}, found {found}", span.start, expected.join(" or "))]
pub struct ParseError {
    pub span: SourceSpan,
    pub expected: Vec<&'static str>,
    pub found: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Top,
    Const(u32),
    LParen,
    RParen,
    Amp,
    Arrow,
    Eof,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Top => f.write_str("`U`"),
            Token::Const(i) => write!(f, "`c{i}`"),
            Token::LParen => f.write_str("`(`"),
            Token::RParen => f.write_str("`)`"),
            Token::Amp => f.write_str("`&`"),
            Token::Arrow => f.write_str("`->`"),
            Token::Eof => f.write_str("end of input"),
        }
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
    peeked: Option<(Token, SourceSpan)>,
}

const PRIM: &[&str] = &["`U`", "constant", "`(`"];

impl<'a> Parser<'a> {
    fn lex(&mut self) -> Result<(Token, SourceSpan), ParseError> {
        let rest = &self.text[self.pos..];
        let trimmed = rest.trim_start();
        let start = self.pos + (rest.len() - trimmed.len());
        let mut chars = trimmed.chars();
        let (tok, len) = match chars.next() {
            None => (Token::Eof, 0),
            Some('U') => (Token::Top, 1),
            Some('(') => (Token::LParen, 1),
            Some(')') => (Token::RParen, 1),
            Some('&') => (Token::Amp, 1),
            Some('∩') => (Token::Amp, '∩'.len_utf8()),
            Some('→') => (Token::Arrow, '→'.len_utf8()),
            Some('-') if trimmed[1..].starts_with('>') => (Token::Arrow, 2),
            Some('c') => {
                let digits = trimmed[1..]
                    .find(|ch: char| !ch.is_ascii_digit())
                    .unwrap_or(trimmed.len() - 1);
                let span = SourceSpan {
                    start,
                    end: start + 1 + digits,
                };
                let index = trimmed[1..1 + digits].parse().map_err(|_| ParseError {
                    span,
                    expected: vec!["constant index"],
                    found: trimmed[..1 + digits].to_string(),
                })?;
                (Token::Const(index), 1 + digits)
            }
            Some(ch) => {
                return Err(ParseError {
                    span: SourceSpan {
                        start,
                        end: start + ch.len_utf8(),
                    },
                    expected: vec!["a type"],
                    found: format!("`{ch}`"),
                })
            }
        };
        self.pos = start + len;
        Ok((
            tok,
            SourceSpan {
                start,
                end: start + len,
            },
        ))
    }

    fn peek(&mut self) -> Result<&(Token, SourceSpan), ParseError> {
        if self.peeked.is_none() {
            self.peeked = Some(self.lex()?);
        }
        Ok(self.peeked.as_ref().unwrap())
    }

    fn next(&mut self) -> Result<(Token, SourceSpan), ParseError> {
        self.peek()?;
        Ok(self.peeked.take().unwrap())
    }

    fn arrow(&mut self) -> Result<Ty, ParseError> {
        let left = self.inter()?;
        if self.peek()?.0 == Token::Arrow {
            self.next()?;
            let right = self.arrow()?;
            Ok(Ty::arrow(left, right))
        } else {
            Ok(left)
        }
    }

    fn inter(&mut self) -> Result<Ty, ParseError> {
        let mut acc = self.prim()?;
        while self.peek()?.0 == Token::Amp {
            self.next()?;
            acc = Ty::inter(acc, self.prim()?);
        }
        Ok(acc)
    }

    fn prim(&mut self) -> Result<Ty, ParseError> {
        let (tok, span) = self.next()?;
        match tok {
            Token::Top => Ok(Ty::top()),
            Token::Const(i) => Ok(Ty::constant(i)),
            Token::LParen => {
                let inner = self.arrow()?;
                let (close, span) = self.next()?;
                if close != Token::RParen {
                    return Err(ParseError {
                        span,
                        expected: vec!["`)`", "`&`", "`->`"],
                        found: close.to_string(),
                    });
                }
                Ok(inner)
            }
            other => Err(ParseError {
                span,
                expected: PRIM.to_vec(),
                found: other.to_string(),
            }),
        }
    }
}

pub fn parse(text: &str) -> Result<Ty, ParseError> {
    let mut p = Parser {
        text,
        pos: 0,
        peeked: None,
    };
    let ty = p.arrow()?;
    let (tok, span) = p.next()?;
    if tok != Token::Eof {
        return Err(ParseError {
            span,
            expected: vec!["`&`", "`->`", "end of input"],
            found: tok.to_string(),
        });
    }
    Ok(ty)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Ctx {
    /// Anywhere a full type may appear.
    Type,
    /// Left operand of `&` or `->`.
    Inter,
    /// Right operand of `&`.
    Prim,
}

fn write_ty(f: &mut impl fmt::Write, t: &Ty, ctx: Ctx) -> fmt::Result {
    match t.kind() {
        TyKind::Top => f.write_char('U'),
        TyKind::Const(i) => write!(f, "c{i}"),
        TyKind::Arrow(l, r) => {
            let parens = ctx != Ctx::Type;
            if parens {
                f.write_char('(')?;
            }
            write_ty(f, l, Ctx::Inter)?;
            f.write_str(" -> ")?;
            write_ty(f, r, Ctx::Type)?;
            if parens {
                f.write_char(')')?;
            }
            Ok(())
        }
        TyKind::Inter(l, r) => {
            let parens = ctx == Ctx::Prim;
            if parens {
                f.write_char('(')?;
            }
            write_ty(f, l, Ctx::Inter)?;
            f.write_str(" & ")?;
            write_ty(f, r, Ctx::Prim)?;
            if parens {
                f.write_char(')')?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_ty(f, self, Ctx::Type)
    }
}

pub fn print(a: &Ty) -> String {
    a.to_string()
}

/// One node of a serialized certificate. Field order is the wire order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonNode {
    pub rule: String,
    pub lhs: String,
    pub rhs: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mid: Option<String>,
    pub premises: Vec<JsonNode>,
}

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad type {text:?} in certificate: {source}")]
    Type { text: String, source: ParseError },
    #[error("unknown rule {0:?}")]
    UnknownRule(String),
    #[error("rule {rule} expects {expected} premises, found {found}")]
    Arity {
        rule: String,
        expected: usize,
        found: usize,
    },
    #[error("rule {rule} is missing field {field}")]
    MissingField { rule: String, field: &'static str },
    #[error(transparent)]
    Invalid(#[from] ValidationError),
}

fn derivation_node(d: &Derivation) -> JsonNode {
    let witness = match d.rule() {
        Rule::ArrowPrime { witness, .. } => Some(print(witness)),
        _ => None,
    };
    JsonNode {
        rule: d.rule_name().to_string(),
        lhs: print(d.lhs()),
        rhs: print(d.rhs()),
        witness,
        mid: None,
        premises: d.premises().into_iter().map(derivation_node).collect(),
    }
}

fn bcd_node(d: &BcdDerivation) -> JsonNode {
    let mid = match d.rule() {
        BcdRule::Trans { mid, .. } => Some(print(mid)),
        _ => None,
    };
    JsonNode {
        rule: d.rule_name().to_string(),
        lhs: print(d.lhs()),
        rhs: print(d.rhs()),
        witness: None,
        mid,
        premises: d.premises().into_iter().map(bcd_node).collect(),
    }
}

/// Serializes a valid certificate as compact JSON.
pub fn derivation_to_json(d: &Derivation) -> Result<String, ValidationError> {
    validate(d)?;
    Ok(serde_json::to_string(&derivation_node(d)).expect("plain data serializes"))
}

pub fn bcd_to_json(d: &BcdDerivation) -> Result<String, ValidationError> {
    bcd_validate(d)?;
    Ok(serde_json::to_string(&bcd_node(d)).expect("plain data serializes"))
}

fn ty_field(text: &str) -> Result<Ty, FormatError> {
    parse(text).map_err(|source| FormatError::Type {
        text: text.to_string(),
        source,
    })
}

fn arity(node: &JsonNode, expected: usize) -> Result<(), FormatError> {
    if node.premises.len() == expected {
        Ok(())
    } else {
        Err(FormatError::Arity {
            rule: node.rule.clone(),
            expected,
            found: node.premises.len(),
        })
    }
}

fn derivation_from_node(node: &JsonNode) -> Result<Derivation, FormatError> {
    let (lhs, rhs) = (ty_field(&node.lhs)?, ty_field(&node.rhs)?);
    let kids = node
        .premises
        .iter()
        .map(derivation_from_node)
        .collect::<Result<Vec<_>, _>>()?;
    let rule = match node.rule.as_str() {
        "refl_atom" => arity(node, 0).map(|_| Rule::ReflAtom)?,
        "lb_l" => arity(node, 1).map(|_| Rule::LbL(kids[0].clone()))?,
        "lb_r" => arity(node, 1).map(|_| Rule::LbR(kids[0].clone()))?,
        "glb" => arity(node, 2).map(|_| Rule::Glb(kids[0].clone(), kids[1].clone()))?,
        "arrow_prime" => {
            arity(node, 2)?;
            let witness = node.witness.as_deref().ok_or(FormatError::MissingField {
                rule: node.rule.clone(),
                field: "witness",
            })?;
            Rule::ArrowPrime {
                witness: ty_field(witness)?,
                dom: kids[0].clone(),
                cod: kids[1].clone(),
            }
        }
        "u_top" => arity(node, 0).map(|_| Rule::UTop)?,
        "u_arrow" => arity(node, 0).map(|_| Rule::UArrow)?,
        other => return Err(FormatError::UnknownRule(other.to_string())),
    };
    Ok(Derivation::new(lhs, rhs, rule))
}

fn bcd_from_node(node: &JsonNode) -> Result<BcdDerivation, FormatError> {
    let (lhs, rhs) = (ty_field(&node.lhs)?, ty_field(&node.rhs)?);
    let kids = node
        .premises
        .iter()
        .map(bcd_from_node)
        .collect::<Result<Vec<_>, _>>()?;
    let rule = match node.rule.as_str() {
        "refl" => arity(node, 0).map(|_| BcdRule::Refl)?,
        "trans" => {
            arity(node, 2)?;
            let mid = node.mid.as_deref().ok_or(FormatError::MissingField {
                rule: node.rule.clone(),
                field: "mid",
            })?;
            BcdRule::Trans {
                mid: ty_field(mid)?,
                left: kids[0].clone(),
                right: kids[1].clone(),
            }
        }
        "incl_l" => arity(node, 0).map(|_| BcdRule::InclL)?,
        "incl_r" => arity(node, 0).map(|_| BcdRule::InclR)?,
        "glb" => arity(node, 2).map(|_| BcdRule::Glb(kids[0].clone(), kids[1].clone()))?,
        "arrow" => arity(node, 2).map(|_| BcdRule::Arrow {
            dom: kids[0].clone(),
            cod: kids[1].clone(),
        })?,
        "arrow_inter" => arity(node, 0).map(|_| BcdRule::ArrowInter)?,
        "u_top" => arity(node, 0).map(|_| BcdRule::UTop)?,
        "u_arrow" => arity(node, 0).map(|_| BcdRule::UArrow)?,
        other => return Err(FormatError::UnknownRule(other.to_string())),
    };
    Ok(BcdDerivation::new(lhs, rhs, rule))
}

/// Reads and validates a transitivity-free certificate.
pub fn derivation_from_json(text: &str) -> Result<Derivation, FormatError> {
    let node: JsonNode = serde_json::from_str(text)?;
    let d = derivation_from_node(&node)?;
    validate(&d)?;
    Ok(d)
}

/// Reads and validates a BCD certificate.
pub fn bcd_from_json(text: &str) -> Result<BcdDerivation, FormatError> {
    let node: JsonNode = serde_json::from_str(text)?;
    let d = bcd_from_node(&node)?;
    bcd_validate(&d)?;
    Ok(d)
}

fn write_tree(out: &mut String, node: &JsonNode, indent: usize) {
    let _ = write!(out, "{:indent$}{} <: {}  [{}", "", node.lhs, node.rhs, node.rule);
    if let Some(w) = &node.witness {
        let _ = write!(out, " witness {w}");
    }
    if let Some(m) = &node.mid {
        let _ = write!(out, " via {m}");
    }
    out.push_str("]\n");
    for p in &node.premises {
        write_tree(out, p, indent + 2);
    }
}

/// Indented text rendering, one node per line, premises below their
/// conclusion.
pub fn derivation_to_tree(d: &Derivation) -> String {
    let mut out = String::new();
    write_tree(&mut out, &derivation_node(d), 0);
    out
}

pub fn bcd_to_tree(d: &BcdDerivation) -> String {
    let mut out = String::new();
    write_tree(&mut out, &bcd_node(d), 0);
    out.replace(" <: ", " <= ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subtype::check_sub;

    fn c(i: u32) -> Ty {
        Ty::constant(i)
    }

    #[test]
    fn precedence() {
        assert_eq!(
            parse("c0->c1&c2").unwrap(),
            Ty::arrow(c(0), Ty::inter(c(1), c(2)))
        );
        assert_eq!(
            parse("(c0&c1)->U").unwrap(),
            Ty::arrow(Ty::inter(c(0), c(1)), Ty::top())
        );
        assert_eq!(
            parse("c0 -> c1 -> c2").unwrap(),
            Ty::arrow(c(0), Ty::arrow(c(1), c(2)))
        );
        assert_eq!(
            parse("c0 & c1 & c2").unwrap(),
            Ty::inter(Ty::inter(c(0), c(1)), c(2))
        );
        assert_eq!(parse(" c0 ∩ c1 → U ").unwrap(), parse("c0&c1->U").unwrap());
    }

    #[test]
    fn errors_carry_offsets() {
        let e = parse("c0->").unwrap_err();
        assert_eq!(e.span.start, 4);
        assert_eq!(e.found, "end of input");
        let e = parse("(c0 & c1").unwrap_err();
        assert_eq!(e.span.start, 8);
        assert!(e.expected.contains(&"`)`"));
        let e = parse("c0 c1").unwrap_err();
        assert_eq!(e.span, SourceSpan { start: 3, end: 5 });
        assert!(parse("c").is_err());
        assert!(parse("x").is_err());
        assert!(parse("c99999999999").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn printing() {
        assert_eq!(print(&Ty::arrow(c(0), Ty::inter(c(1), c(2)))), "c0 -> c1 & c2");
        assert_eq!(print(&Ty::inter(Ty::inter(c(0), c(1)), c(2))), "c0 & c1 & c2");
        assert_eq!(print(&Ty::inter(c(0), Ty::inter(c(1), c(2)))), "c0 & (c1 & c2)");
        assert_eq!(print(&Ty::top()), "U");
        assert_eq!(print(&Ty::arrow(Ty::arrow(c(0), c(1)), c(2))), "(c0 -> c1) -> c2");
        assert_eq!(print(&Ty::inter(Ty::arrow(c(0), c(1)), c(2))), "(c0 -> c1) & c2");
    }

    #[test]
    fn json_refl() {
        let d = check_sub(&c(0), &c(0)).unwrap();
        assert_eq!(
            derivation_to_json(&d).unwrap(),
            r#"{"rule":"refl_atom","lhs":"c0","rhs":"c0","premises":[]}"#
        );
    }

    #[test]
    fn json_witness_and_round_trip() {
        let lhs = parse("(c0 -> c1) & (c0 -> c2)").unwrap();
        let rhs = parse("c0 -> c1 & c2").unwrap();
        let d = check_sub(&lhs, &rhs).unwrap();
        let text = derivation_to_json(&d).unwrap();
        assert!(text.starts_with(r#"{"rule":"arrow_prime","lhs":"(c0 -> c1) & (c0 -> c2)","rhs":"c0 -> c1 & c2","witness":"#));
        assert_eq!(derivation_from_json(&text).unwrap(), d);
        let tree = derivation_to_tree(&d);
        assert!(tree.lines().next().unwrap().contains("arrow_prime witness"));
    }

    #[test]
    fn json_rejects_invalid() {
        let text = r#"{"rule":"refl_atom","lhs":"c0","rhs":"c1","premises":[]}"#;
        assert!(matches!(derivation_from_json(text), Err(FormatError::Invalid(_))));
        let text = r#"{"rule":"trans","lhs":"c0","rhs":"c0","premises":[]}"#;
        assert!(matches!(derivation_from_json(text), Err(FormatError::UnknownRule(_))));
        assert!(matches!(bcd_from_json(text), Err(FormatError::Arity { .. })));
    }

    #[test]
    fn bcd_json_has_mid() {
        let d = BcdDerivation::trans(
            BcdDerivation::new(Ty::inter(c(0), c(1)), c(0), BcdRule::InclL),
            BcdDerivation::refl(c(0)),
        );
        let text = bcd_to_json(&d).unwrap();
        assert!(text.starts_with(r#"{"rule":"trans","lhs":"c0 & c1","rhs":"c0","mid":"c0","premises":["#));
        assert_eq!(bcd_from_json(&text).unwrap(), d);
    }
}
