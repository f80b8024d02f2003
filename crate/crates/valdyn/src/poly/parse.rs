//! Recursive-descent parser for map files.
//!
//! ```text
//! file   := stmt (";" | newline)* stmt?
//! stmt   := ("P" | "Q") "=" expr
//! expr   := term (("+"|"-") term)*
//! term   := factor ("*" factor)*
//! factor := base ("^" UINT)?
//! base   := "x" | "y" | INT | INT "/" UINT | "(" expr ")"
//! ```
//! `#` starts a comment that runs to the end of the line.

use num_bigint::BigInt;

use super::{BiPoly, PolyError, PolyMap};
use crate::numeric::{Coeff, Rat};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(char),
    Newline,
    End,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, PolyError> {
    let mut out = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let mut chars = text.chars().peekable();
    while let Some(&ch) = chars.peek() {
        let (l, c) = (line, col);
        if ch == '\n' {
            chars.next();
            out.push(Spanned { tok: Tok::Newline, line: l, col: c });
            line += 1;
            col = 1;
        } else if ch == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                chars.next();
                col += 1;
            }
        } else if ch.is_whitespace() {
            chars.next();
            col += 1;
        } else if ch.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                s.push(d);
                chars.next();
                col += 1;
            }
            out.push(Spanned { tok: Tok::Int(s.parse().expect("digits")), line: l, col: c });
        } else if ch.is_alphabetic() || ch == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_alphanumeric() || **d == '_') {
                s.push(d);
                chars.next();
                col += 1;
            }
            out.push(Spanned { tok: Tok::Ident(s), line: l, col: c });
        } else if "=+-*/^();".contains(ch) {
            chars.next();
            col += 1;
            out.push(Spanned { tok: Tok::Sym(ch), line: l, col: c });
        } else {
            return Err(PolyError::SyntaxError {
                line: l,
                col: c,
                msg: format!("unexpected character `{ch}`"),
            });
        }
    }
    out.push(Spanned { tok: Tok::End, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, PolyError> {
        let t = self.peek();
        Err(PolyError::SyntaxError { line: t.line, col: t.col, msg: msg.into() })
    }

    fn expect_sym(&mut self, c: char) -> Result<(), PolyError> {
        if self.peek().tok == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    /// Newlines only separate statements; inside parentheses they are skipped.
    fn skip_newlines(&mut self) {
        while self.peek().tok == Tok::Newline {
            self.bump();
        }
    }

    fn file(&mut self) -> Result<PolyMap, PolyError> {
        let (mut p, mut q) = (None, None);
        loop {
            while matches!(self.peek().tok, Tok::Newline | Tok::Sym(';')) {
                self.bump();
            }
            if self.peek().tok == Tok::End {
                break;
            }
            let head = self.bump();
            let slot = match &head.tok {
                Tok::Ident(name) if name == "P" => &mut p,
                Tok::Ident(name) if name == "Q" => &mut q,
                Tok::Ident(name) => {
                    return Err(PolyError::UnknownIdentifier {
                        name: name.clone(),
                        line: head.line,
                        col: head.col,
                    })
                }
                _ => {
                    return Err(PolyError::SyntaxError {
                        line: head.line,
                        col: head.col,
                        msg: "expected `P` or `Q`".into(),
                    })
                }
            };
            if slot.is_some() {
                return Err(PolyError::SyntaxError {
                    line: head.line,
                    col: head.col,
                    msg: "component defined twice".into(),
                });
            }
            self.expect_sym('=')?;
            *slot = Some(self.expr(false)?);
            if !matches!(self.peek().tok, Tok::Newline | Tok::Sym(';') | Tok::End) {
                return self.err("expected end of statement");
            }
        }
        match (p, q) {
            (Some(p), Some(q)) => Ok(PolyMap::new(p, q)),
            (None, _) => self.err("missing component `P`"),
            (_, None) => self.err("missing component `Q`"),
        }
    }

    fn expr(&mut self, nested: bool) -> Result<BiPoly, PolyError> {
        if nested {
            self.skip_newlines();
        }
        let mut acc = self.term(nested)?;
        loop {
            if nested {
                self.skip_newlines();
            }
            match self.peek().tok {
                Tok::Sym('+') => {
                    self.bump();
                    acc = &acc + &self.term(nested)?;
                }
                Tok::Sym('-') => {
                    self.bump();
                    acc = &acc - &self.term(nested)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self, nested: bool) -> Result<BiPoly, PolyError> {
        let mut acc = self.factor(nested)?;
        loop {
            if nested {
                self.skip_newlines();
            }
            if self.peek().tok != Tok::Sym('*') {
                return Ok(acc);
            }
            self.bump();
            acc = &acc * &self.factor(nested)?;
        }
    }

    fn factor(&mut self, nested: bool) -> Result<BiPoly, PolyError> {
        let base = self.base(nested)?;
        if self.peek().tok != Tok::Sym('^') {
            return Ok(base);
        }
        self.bump();
        match self.bump().tok {
            Tok::Int(n) => {
                let e: u32 = n.try_into().map_err(|_| PolyError::SyntaxError {
                    line: self.peek().line,
                    col: self.peek().col,
                    msg: "exponent too large".into(),
                })?;
                Ok(base.pow(e))
            }
            _ => {
                self.pos -= 1;
                self.err("expected an unsigned exponent")
            }
        }
    }

    fn base(&mut self, nested: bool) -> Result<BiPoly, PolyError> {
        if nested {
            self.skip_newlines();
        }
        let t = self.peek().clone();
        match t.tok {
            Tok::Ident(ref s) if s == "x" => {
                self.bump();
                Ok(BiPoly::x())
            }
            Tok::Ident(ref s) if s == "y" => {
                self.bump();
                Ok(BiPoly::y())
            }
            Tok::Ident(s) => Err(PolyError::UnknownIdentifier { name: s, line: t.line, col: t.col }),
            // A leading minus belongs to a signed INT; applied to any other
            // base it negates it.
            Tok::Sym('-') => {
                self.bump();
                Ok(-&self.base(nested)?)
            }
            Tok::Int(n) => {
                self.bump();
                if self.peek().tok == Tok::Sym('/') {
                    self.bump();
                    match self.bump().tok {
                        Tok::Int(d) if d != BigInt::from(0) => {
                            Ok(BiPoly::constant(Coeff::from(Rat::new(n, d))))
                        }
                        _ => {
                            self.pos -= 1;
                            self.err("expected a nonzero denominator")
                        }
                    }
                } else {
                    Ok(BiPoly::constant(Coeff::from(Rat::from_int(n))))
                }
            }
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr(true)?;
                self.skip_newlines();
                self.expect_sym(')')?;
                Ok(e)
            }
            _ => self.err("expected `x`, `y`, a number or `(`"),
        }
    }
}

/// Parses a map file such as `P = x*(x - y^2); Q = x + y`.
pub fn parse_map(text: &str) -> Result<PolyMap, PolyError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    p.file()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_identity() {
        assert_eq!(parse_map("P = x; Q = y").unwrap(), PolyMap::identity());
    }

    #[test]
    fn parses_with_newlines_and_comments() {
        let f = parse_map("# remark map\nP = y^3\nQ = x^2 # tail\n").unwrap();
        assert_eq!(f.p, BiPoly::y().pow(3));
        assert_eq!(f.q, BiPoly::x().pow(2));
    }

    #[test]
    fn rational_constants() {
        let f = parse_map("P = 3/2*x; Q = -1/3 + y").unwrap();
        assert_eq!(f.p.coeff(1, 0), Coeff::from(Rat::new(3, 2)));
        assert_eq!(f.q.coeff(0, 0), Coeff::from(Rat::new(-1, 3)));
    }

    #[test]
    fn reports_positions() {
        match parse_map("P = x +\nQ = y") {
            Err(PolyError::SyntaxError { line, .. }) => assert_eq!(line, 1),
            other => panic!("unexpected {other:?}"),
        }
        match parse_map("P = x*z; Q = y") {
            Err(PolyError::UnknownIdentifier { name, line, col }) => {
                assert_eq!((name.as_str(), line, col), ("z", 1, 7));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_map("P = x"), Err(PolyError::SyntaxError { .. })));
        assert!(matches!(parse_map("P = x^y; Q = y"), Err(PolyError::SyntaxError { .. })));
    }
}
