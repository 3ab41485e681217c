//! S-expression surface syntax.
//!
//! ```text
//! expr := true | false | unit | IDENT
//!       | (lam (IDENT : type) expr)
//!       | (expr expr ...)                ; application, left-associative
//!       | (eq base)
//!       | (eqp base const)               ; staged tester, printer output only
//!       | (beq base expr expr expr)
//!       | (xeq (IDENT : type) type expr expr expr)
//! type := base | (refine (IDENT : base) expr)
//!       | (fun (IDENT : type) type) | (eqrt type expr expr)
//! base := Bool | Unit
//! ```
//!
//! `;` starts a line comment. Bare `Bool`/`Unit` in type position is
//! shorthand for the trivially refined base and is expanded at parse time.
//! Printing an AST and reparsing it yields an alpha-equal AST.

use crate::syntax::{BaseType, ConstKind, Expr, Type};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at {}:{}: {}", self.line, self.col, self.msg)
    }
}

impl std::error::Error for ParseError {}

/// Top-level query forms accepted in CLI input files.
#[derive(Debug, Clone, PartialEq)]
pub enum Query {
    /// A bare expression (for `eval`, or `check` in synthesis mode).
    Expr(Expr),
    /// `(ascribe expr type)`
    Ascribe(Expr, Type),
    /// `(subtype-query type type)`
    Subtype(Type, Type),
    /// `(lr-query expr expr type)`
    Lr(Expr, Expr, Type),
    /// `(refl-query expr type)`
    Refl(Expr, Type),
    /// `(sym-query expr type expr expr)`: proof, index type, endpoints.
    Sym(Expr, Type, Expr, Expr),
    /// `(trans-query expr expr type expr expr expr)`
    Trans(Expr, Expr, Type, Expr, Expr, Expr),
}

const KEYWORDS: &[&str] = &[
    "lam", "eq", "eqp", "beq", "xeq", "refine", "fun", "eqrt", "true", "false", "unit", "Bool",
    "Unit", "ascribe", "subtype-query", "lr-query", "refl-query", "sym-query", "trans-query",
];

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    LParen,
    RParen,
    Colon,
    Word(String),
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            ';' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
            }
            '(' => {
                out.push(Spanned {
                    tok: Tok::LParen,
                    line,
                    col,
                });
                chars.next();
                col += 1;
            }
            ')' => {
                out.push(Spanned {
                    tok: Tok::RParen,
                    line,
                    col,
                });
                chars.next();
                col += 1;
            }
            ':' => {
                out.push(Spanned {
                    tok: Tok::Colon,
                    line,
                    col,
                });
                chars.next();
                col += 1;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start_col = col;
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' || c == '\'' || c == '-' {
                        word.push(c);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                out.push(Spanned {
                    tok: Tok::Word(word),
                    line,
                    col: start_col,
                });
            }
            other => {
                return Err(ParseError {
                    line,
                    col,
                    msg: format!("unexpected character {other:?}"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let (line, col) = self
            .toks
            .get(self.pos.min(self.toks.len().saturating_sub(1)))
            .map(|s| (s.line, s.col))
            .unwrap_or((1, 1));
        Err(ParseError {
            line,
            col,
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|s| s.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        match self.next() {
            Some(t) if t == tok => Ok(()),
            Some(t) => {
                self.pos -= 1;
                self.err(format!("expected {tok:?}, found {t:?}"))
            }
            None => self.err(format!("expected {tok:?}, found end of input")),
        }
    }

    fn word(&mut self) -> Result<String, ParseError> {
        match self.next() {
            Some(Tok::Word(w)) => Ok(w),
            Some(t) => {
                self.pos -= 1;
                self.err(format!("expected identifier, found {t:?}"))
            }
            None => self.err("expected identifier, found end of input"),
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        let w = self.word()?;
        if KEYWORDS.contains(&w.as_str()) {
            self.pos -= 1;
            return self.err(format!("reserved word {w:?} cannot be used as a variable"));
        }
        Ok(w)
    }

    fn base(&mut self) -> Result<BaseType, ParseError> {
        let w = self.word()?;
        match w.as_str() {
            "Bool" => Ok(BaseType::Bool),
            "Unit" => Ok(BaseType::Unit),
            _ => {
                self.pos -= 1;
                self.err(format!("expected base type Bool or Unit, found {w:?}"))
            }
        }
    }

    /// `(IDENT : type)`
    fn binder(&mut self) -> Result<(String, Type), ParseError> {
        self.expect(Tok::LParen)?;
        let name = self.ident()?;
        self.expect(Tok::Colon)?;
        let ty = self.ty()?;
        self.expect(Tok::RParen)?;
        Ok((name, ty))
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(Tok::Word(_)) => {
                let w = self.word()?;
                match w.as_str() {
                    "true" => Ok(Expr::truth(true)),
                    "false" => Ok(Expr::truth(false)),
                    "unit" => Ok(Expr::unit()),
                    _ if KEYWORDS.contains(&w.as_str()) => {
                        self.pos -= 1;
                        self.err(format!("unexpected keyword {w:?} in expression position"))
                    }
                    _ => Ok(Expr::var(w)),
                }
            }
            Some(Tok::LParen) => {
                self.next();
                let e = self.expr_form()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Some(t) => {
                let t = t.clone();
                self.err(format!("expected expression, found {t:?}"))
            }
            None => self.err("expected expression, found end of input"),
        }
    }

    /// Contents of a parenthesized expression, after the opening paren.
    fn expr_form(&mut self) -> Result<Expr, ParseError> {
        if let Some(Tok::Word(w)) = self.peek() {
            match w.as_str() {
                "lam" => {
                    self.next();
                    let (x, ty) = self.binder()?;
                    let body = self.expr()?;
                    return Ok(Expr::lam(x, ty, body));
                }
                "eq" => {
                    self.next();
                    let b = self.base()?;
                    return Ok(Expr::Const(ConstKind::EqOp(b)));
                }
                "eqp" => {
                    self.next();
                    let b = self.base()?;
                    let lit = self.word()?;
                    let inner = match lit.as_str() {
                        "true" => ConstKind::True,
                        "false" => ConstKind::False,
                        "unit" => ConstKind::UnitVal,
                        _ => {
                            self.pos -= 1;
                            return self.err(format!(
                                "eqp takes a literal constant, found {lit:?}"
                            ));
                        }
                    };
                    if inner.literal_base() != Some(b) {
                        self.pos -= 1;
                        return self.err(format!("eqp literal {lit} does not have base {b}"));
                    }
                    return Ok(Expr::Const(ConstKind::EqOpPartial(Box::new(inner), b)));
                }
                "beq" => {
                    self.next();
                    let b = self.base()?;
                    let l = self.expr()?;
                    let r = self.expr()?;
                    let p = self.expr()?;
                    return Ok(Expr::beq(b, l, r, p));
                }
                "xeq" => {
                    self.next();
                    let (x, dom) = self.binder()?;
                    let cod = self.ty()?;
                    let l = self.expr()?;
                    let r = self.expr()?;
                    let p = self.expr()?;
                    return Ok(Expr::xeq(x, dom, cod, l, r, p));
                }
                _ => {}
            }
        }
        // Application: two or more expressions, folded to the left.
        let head = self.expr()?;
        let mut parts = Vec::new();
        while !matches!(self.peek(), Some(Tok::RParen) | None) {
            parts.push(self.expr()?);
        }
        if parts.is_empty() {
            return self.err("application needs at least two expressions");
        }
        Ok(parts.into_iter().fold(head, Expr::app))
    }

    fn ty(&mut self) -> Result<Type, ParseError> {
        match self.peek() {
            Some(Tok::Word(w)) if w == "Bool" => {
                self.next();
                Ok(Type::trivial(BaseType::Bool))
            }
            Some(Tok::Word(w)) if w == "Unit" => {
                self.next();
                Ok(Type::trivial(BaseType::Unit))
            }
            Some(Tok::LParen) => {
                self.next();
                let t = self.ty_form()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Some(t) => {
                let t = t.clone();
                self.err(format!("expected type, found {t:?}"))
            }
            None => self.err("expected type, found end of input"),
        }
    }

    fn ty_form(&mut self) -> Result<Type, ParseError> {
        let head = self.word()?;
        match head.as_str() {
            "refine" => {
                self.expect(Tok::LParen)?;
                let binder = self.ident()?;
                self.expect(Tok::Colon)?;
                let base = self.base()?;
                self.expect(Tok::RParen)?;
                let refinement = self.expr()?;
                Ok(Type::refined(binder, base, refinement))
            }
            "fun" => {
                let (x, dom) = self.binder()?;
                let cod = self.ty()?;
                Ok(Type::fun(x, dom, cod))
            }
            "eqrt" => {
                let index = self.ty()?;
                let l = self.expr()?;
                let r = self.expr()?;
                Ok(Type::eqrt(index, l, r))
            }
            other => {
                self.pos -= 1;
                self.err(format!("expected refine, fun, or eqrt, found {other:?}"))
            }
        }
    }

    fn at_end(&self) -> bool {
        self.pos == self.toks.len()
    }

    fn expect_end(&mut self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            self.err("trailing input after the first form")
        }
    }
}

pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let e = p.expr()?;
    p.expect_end()?;
    Ok(e)
}

pub fn parse_type(text: &str) -> Result<Type, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let t = p.ty()?;
    p.expect_end()?;
    Ok(t)
}

/// Parses a CLI input file: one query form, or a bare expression.
pub fn parse_query(text: &str) -> Result<Query, ParseError> {
    let toks = lex(text)?;
    let head = match toks.as_slice() {
        [Spanned {
            tok: Tok::LParen, ..
        }, Spanned {
            tok: Tok::Word(w), ..
        }, ..] => Some(w.clone()),
        _ => None,
    };
    let mut p = Parser { toks, pos: 0 };
    let q = match head.as_deref() {
        Some("ascribe") => {
            p.next();
            p.next();
            let e = p.expr()?;
            let t = p.ty()?;
            p.expect(Tok::RParen)?;
            Query::Ascribe(e, t)
        }
        Some("subtype-query") => {
            p.next();
            p.next();
            let a = p.ty()?;
            let b = p.ty()?;
            p.expect(Tok::RParen)?;
            Query::Subtype(a, b)
        }
        Some("lr-query") => {
            p.next();
            p.next();
            let e1 = p.expr()?;
            let e2 = p.expr()?;
            let t = p.ty()?;
            p.expect(Tok::RParen)?;
            Query::Lr(e1, e2, t)
        }
        Some("refl-query") => {
            p.next();
            p.next();
            let e = p.expr()?;
            let t = p.ty()?;
            p.expect(Tok::RParen)?;
            Query::Refl(e, t)
        }
        Some("sym-query") => {
            p.next();
            p.next();
            let pf = p.expr()?;
            let t = p.ty()?;
            let e1 = p.expr()?;
            let e2 = p.expr()?;
            p.expect(Tok::RParen)?;
            Query::Sym(pf, t, e1, e2)
        }
        Some("trans-query") => {
            p.next();
            p.next();
            let p12 = p.expr()?;
            let p23 = p.expr()?;
            let t = p.ty()?;
            let e1 = p.expr()?;
            let e2 = p.expr()?;
            let e3 = p.expr()?;
            p.expect(Tok::RParen)?;
            Query::Trans(p12, p23, t, e1, e2, e3)
        }
        _ => Query::Expr(p.expr()?),
    };
    p.expect_end()?;
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{alpha_eq, alpha_eq_type};

    #[test]
    fn parses_lambda_with_shorthand_annotation() {
        let e = parse_expr("(lam (x : Bool) x)").unwrap();
        assert!(alpha_eq(
            &e,
            &Expr::lam("x", Type::trivial(BaseType::Bool), Expr::var("x"))
        ));
    }

    #[test]
    fn application_is_left_associative() {
        let e = parse_expr("(f a b)").unwrap();
        let expected = Expr::app(Expr::app(Expr::var("f"), Expr::var("a")), Expr::var("b"));
        assert_eq!(e, expected);
    }

    #[test]
    fn parses_eq_forms() {
        let e = parse_expr("((eq Bool) true true)").unwrap();
        assert_eq!(
            e,
            Expr::eq_at(BaseType::Bool, Expr::truth(true), Expr::truth(true))
        );
        let p = parse_expr("(beq Bool true true unit)").unwrap();
        assert_eq!(
            p,
            Expr::beq(BaseType::Bool, Expr::truth(true), Expr::truth(true), Expr::unit())
        );
    }

    #[test]
    fn parses_types() {
        let t = parse_type("(refine (v : Bool) ((eq Bool) v true))").unwrap();
        assert!(alpha_eq_type(
            &t,
            &Type::refined(
                "v",
                BaseType::Bool,
                Expr::eq_at(BaseType::Bool, Expr::var("v"), Expr::truth(true))
            )
        ));
        let t = parse_type("(fun (x : Bool) (eqrt Bool x x))").unwrap();
        assert!(matches!(t, Type::Fun { .. }));
    }

    #[test]
    fn comments_and_whitespace() {
        let e = parse_expr("; a comment\n  (lam (x : Bool) ; binder\n x)").unwrap();
        assert!(matches!(e, Expr::Lam(..)));
    }

    #[test]
    fn rejects_reserved_words_as_variables() {
        assert!(parse_expr("(lam (eq : Bool) true)").is_err());
        assert!(parse_expr("(f lam)").is_err());
    }

    #[test]
    fn error_positions_are_reported() {
        let err = parse_expr("(lam (x : Frob) x)").unwrap_err();
        assert_eq!(err.line, 1);
        assert!(err.msg.contains("Frob"));
    }

    #[test]
    fn rejects_unary_parenthesized_expression() {
        assert!(parse_expr("(x)").is_err());
    }

    #[test]
    fn print_parse_print_is_stable() {
        let sources = [
            "(lam (x : Bool) (x true))",
            "(beq Bool true ((lam (x : Bool) x) true) unit)",
            "(xeq (x : (refine (b : Bool) ((eq Bool) b true))) Bool (lam (y : Bool) y) (lam (y : Bool) true) unit)",
            "((eq Unit) unit unit)",
        ];
        for src in sources {
            let e = parse_expr(src).unwrap();
            let printed = e.to_string();
            let reparsed = parse_expr(&printed).unwrap();
            assert!(alpha_eq(&e, &reparsed), "roundtrip failed for {src}");
            assert_eq!(printed, reparsed.to_string());
        }
    }

    #[test]
    fn eqp_roundtrips() {
        let e = parse_expr("(eqp Bool true)").unwrap();
        assert_eq!(
            e,
            Expr::Const(ConstKind::EqOpPartial(
                Box::new(ConstKind::True),
                BaseType::Bool
            ))
        );
        assert_eq!(e.to_string(), "(eqp Bool true)");
        assert!(parse_expr("(eqp Bool unit)").is_err());
    }

    #[test]
    fn query_forms() {
        assert!(matches!(
            parse_query("(ascribe true Bool)").unwrap(),
            Query::Ascribe(..)
        ));
        assert!(matches!(
            parse_query("(subtype-query Bool Unit)").unwrap(),
            Query::Subtype(..)
        ));
        assert!(matches!(
            parse_query("(lr-query true true Bool)").unwrap(),
            Query::Lr(..)
        ));
        assert!(matches!(parse_query("true").unwrap(), Query::Expr(_)));
    }
}
