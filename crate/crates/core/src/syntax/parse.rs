//! Recursive-descent parsers for terms and types.
//!
//! Terms: `\x.t` or `λx.t`; application both as juxtaposition `t u v` and in
//! the style `(t)u v`, where a parenthesised group applies to every atom that
//! follows it. Types: `∀X.A` or `forall X.A`, arrows `→` or `->`,
//! right-associative.

use std::fmt;

use super::name::Name;
use super::term::Term;
use super::types::Type;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    /// Byte offset into the input.
    pub offset: usize,
    pub expected: Vec<&'static str>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at byte {}: expected {}, found {}",
            self.offset,
            self.expected.join(" or "),
            self.found
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Lambda,
    Forall,
    Dot,
    LParen,
    RParen,
    Arrow,
    Ident(String),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Lambda => "`λ`".into(),
            Tok::Forall => "`∀`".into(),
            Tok::Dot => "`.`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Arrow => "`→`".into(),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn is_ident_start(c: char) -> bool {
    (c.is_alphabetic() || c == '_') && c != 'λ'
}

fn is_ident_continue(c: char) -> bool {
    is_ident_start(c) || c.is_numeric() || c == '\'' || c == '′'
}

fn lex(input: &str, keyword_forall: bool) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut toks = Vec::new();
    let mut chars = input.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let tok = match c {
            '\\' | 'λ' => Tok::Lambda,
            '∀' => Tok::Forall,
            '.' => Tok::Dot,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '→' => Tok::Arrow,
            '-' => {
                chars.next();
                match chars.peek() {
                    Some(&(_, '>')) => {
                        chars.next();
                        toks.push((i, Tok::Arrow));
                        continue;
                    }
                    _ => {
                        return Err(ParseError {
                            offset: i,
                            expected: vec!["`->`"],
                            found: "`-`".into(),
                        })
                    }
                }
            }
            c if is_ident_start(c) => {
                let mut end = i;
                while let Some(&(j, d)) = chars.peek() {
                    if is_ident_continue(d) {
                        end = j + d.len_utf8();
                        chars.next();
                    } else {
                        break;
                    }
                }
                let word = &input[i..end];
                if keyword_forall && word == "forall" {
                    toks.push((i, Tok::Forall));
                } else {
                    toks.push((i, Tok::Ident(word.to_string())));
                }
                continue;
            }
            other => {
                return Err(ParseError {
                    offset: i,
                    expected: vec!["identifier", "`(`", "`)`", "`λ`", "`.`"],
                    found: format!("`{other}`"),
                })
            }
        };
        chars.next();
        toks.push((i, tok));
    }
    toks.push((input.len(), Tok::Eof));
    Ok(toks)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: Vec<&'static str>) -> ParseError {
        let (offset, tok) = &self.toks[self.pos];
        ParseError {
            offset: *offset,
            expected,
            found: tok.describe(),
        }
    }

    fn expect(&mut self, want: Tok, label: &'static str) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.error(vec![label]))
        }
    }

    fn ident(&mut self) -> Result<Name, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(Name::from(s))
            }
            _ => Err(self.error(vec!["identifier"])),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Eof => Ok(()),
            _ => Err(self.error(vec!["end of input"])),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let items = self.sequence()?;
        let mut items = items.into_iter();
        match items.next() {
            Some(head) => Ok(Term::apps(head, items)),
            None => Err(self.error(vec!["identifier", "`(`", "`λ`"])),
        }
    }

    fn lambda(&mut self) -> Result<Term, ParseError> {
        self.expect(Tok::Lambda, "`λ`")?;
        let x = self.ident()?;
        self.expect(Tok::Dot, "`.`")?;
        let body = self.term()?;
        Ok(Term::lam(x, body))
    }

    /// Consecutive application items. A λ extends to the end of the group; a
    /// parenthesised term takes all remaining items as its arguments.
    fn sequence(&mut self) -> Result<Vec<Term>, ParseError> {
        let mut items = Vec::new();
        loop {
            match self.peek() {
                Tok::Ident(_) => {
                    let x = self.ident()?;
                    items.push(Term::Free(x));
                }
                Tok::Lambda => {
                    items.push(self.lambda()?);
                    break;
                }
                Tok::LParen => {
                    self.bump();
                    let inner = self.term()?;
                    self.expect(Tok::RParen, "`)`")?;
                    let rest = self.sequence()?;
                    items.push(Term::apps(inner, rest));
                    break;
                }
                _ => break,
            }
        }
        Ok(items)
    }

    fn ty(&mut self) -> Result<Type, ParseError> {
        if *self.peek() == Tok::Forall {
            self.bump();
            let x = self.ident()?;
            self.expect(Tok::Dot, "`.`")?;
            let body = self.ty()?;
            return Ok(Type::forall(x, body));
        }
        let dom = self.type_atom()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let cod = self.ty()?;
            Ok(Type::arrow(dom, cod))
        } else {
            Ok(dom)
        }
    }

    fn type_atom(&mut self) -> Result<Type, ParseError> {
        match self.peek() {
            Tok::Ident(_) => Ok(Type::Var(self.ident()?)),
            Tok::LParen => {
                self.bump();
                let t = self.ty()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            _ => Err(self.error(vec!["identifier", "`(`", "`∀`"])),
        }
    }
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser {
        toks: lex(text, false)?,
        pos: 0,
    };
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_type(text: &str) -> Result<Type, ParseError> {
    let mut p = Parser {
        toks: lex(text, true)?,
        pos: 0,
    };
    let t = p.ty()?;
    p.finish()?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Term {
        Term::var(s)
    }

    #[test]
    fn identity() {
        assert_eq!(parse_term(r"\x.x").unwrap(), Term::lam("x", v("x")));
        assert_eq!(parse_term("λx.x").unwrap(), Term::lam("x", v("x")));
    }

    #[test]
    fn parenthesised_application_is_left_nested() {
        let expected = Term::app(Term::app(v("t"), v("u")), v("v"));
        assert_eq!(parse_term("(t)u v").unwrap(), expected);
        assert_eq!(parse_term("t u v").unwrap(), expected);
    }

    #[test]
    fn group_applies_to_following_group() {
        // (f)(f)x is f applied to (f x)
        let t = parse_term("(f)(f)x").unwrap();
        assert_eq!(t, Term::app(v("f"), Term::app(v("f"), v("x"))));
    }

    #[test]
    fn trailing_lambda_argument() {
        let t = parse_term(r"(\z.z) \f.\x.x").unwrap();
        let zero = Term::lam("f", Term::lam("x", v("x")));
        assert_eq!(t, Term::app(Term::lam("z", v("z")), zero));
    }

    #[test]
    fn truncated_lambda_fails_at_end() {
        let err = parse_term(r"\x.").unwrap_err();
        assert_eq!(err.offset, 3);
        assert_eq!(err.found, "end of input");
        assert!(err.expected.contains(&"identifier"));
    }

    #[test]
    fn unbalanced_parens() {
        assert!(parse_term("(x").is_err());
        assert!(parse_term("x)").is_err());
        assert!(parse_term("").is_err());
    }

    #[test]
    fn types() {
        let ent = parse_type("∀X.(X→X)→(X→X)").unwrap();
        let xx = Type::arrow(Type::var("X"), Type::var("X"));
        assert_eq!(ent, Type::forall("X", Type::arrow(xx.clone(), xx)));
        assert_eq!(parse_type("forall X. (X -> X) -> X -> X").unwrap(), ent);
        assert_eq!(
            parse_type("X→Y→Z").unwrap(),
            Type::arrow(Type::var("X"), Type::arrow(Type::var("Y"), Type::var("Z")))
        );
    }

    #[test]
    fn missing_binder() {
        let err = parse_type("∀.X").unwrap_err();
        assert_eq!(err.expected, vec!["identifier"]);
        assert_eq!(err.offset, "∀".len());
    }

    #[test]
    fn primed_identifiers() {
        assert_eq!(parse_term("x′").unwrap(), v("x′"));
        assert_eq!(parse_term("x'").unwrap(), v("x'"));
    }
}
