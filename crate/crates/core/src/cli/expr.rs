//! Parser for function-spec expressions.
//!
//! ```text
//! spec   := NAME | NAME ":" kvlist | COMB "(" spec ("," arg)* ")"
//! kvlist := key "=" number ("," key "=" number)*
//! ```
//!
//! Names: `one`, `unit`, `squarefree`, `divisor` (`rho`), `omega_exp` and
//! `bigomega_exp` (`z`, optional `zi`), and the additive `omega`, `bigomega`.
//! Combinators: `twist(f, tau)`, `coprime(f, D)`, `conv(f, g)`, `expext(f)`,
//! `cofactor(r, s)`. Whitespace between tokens is ignored.

use std::fmt;

use num_complex::Complex64;

use crate::funcspec::{AddSpec, MultSpec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Empty,
    UnknownName(String),
    MalformedKvList(String),
    Arity { name: &'static str, expected: usize, found: usize },
    /// A value was well-formed but rejected by the constructor.
    InvalidValue(String),
    /// An additive spec where a multiplicative one is needed, or vice versa.
    WrongKind(String),
    Unexpected(String),
}

/// A parse failure at byte `offset` of the input.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: ", self.offset)?;
        match &self.kind {
            ParseErrorKind::Empty => write!(f, "empty expression"),
            ParseErrorKind::UnknownName(n) => write!(f, "unknown name `{n}`"),
            ParseErrorKind::MalformedKvList(m) => write!(f, "malformed key=value list: {m}"),
            ParseErrorKind::Arity { name, expected, found } => {
                write!(f, "`{name}` takes {expected} argument(s), found {found}")
            }
            ParseErrorKind::InvalidValue(m) => write!(f, "invalid value: {m}"),
            ParseErrorKind::WrongKind(m) => write!(f, "{m}"),
            ParseErrorKind::Unexpected(m) => write!(f, "{m}"),
        }
    }
}

/// A parsed expression.
#[derive(Clone, Debug, PartialEq)]
pub enum Spec {
    Mult(MultSpec),
    Add(AddSpec),
}

impl fmt::Display for Spec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Spec::Mult(s) => s.fmt(f),
            Spec::Add(s) => s.fmt(f),
        }
    }
}

pub fn parse_spec(expr: &str) -> Result<Spec, ParseError> {
    let mut p = Parser { src: expr, pos: 0 };
    p.skip_ws();
    if p.pos == expr.len() {
        return Err(p.error(ParseErrorKind::Empty));
    }
    let spec = p.spec()?;
    p.skip_ws();
    if p.pos != expr.len() {
        return Err(p.error(ParseErrorKind::Unexpected(format!(
            "trailing input `{}`",
            &expr[p.pos..]
        ))));
    }
    Ok(spec)
}

/// Parse an expression that must denote a multiplicative function.
pub fn parse_mult(expr: &str) -> Result<MultSpec, ParseError> {
    match parse_spec(expr)? {
        Spec::Mult(s) => Ok(s),
        Spec::Add(s) => Err(ParseError {
            offset: 0,
            kind: ParseErrorKind::WrongKind(format!("`{s}` is additive, expected a multiplicative spec")),
        }),
    }
}

/// Parse an expression that must denote an additive function.
pub fn parse_add(expr: &str) -> Result<AddSpec, ParseError> {
    match parse_spec(expr)? {
        Spec::Add(s) => Ok(s),
        Spec::Mult(s) => Err(ParseError {
            offset: 0,
            kind: ParseErrorKind::WrongKind(format!("`{s}` is multiplicative, expected an additive spec")),
        }),
    }
}

enum Arg {
    Spec(Spec, usize),
    Number(String, usize),
}

const COMBINATORS: [(&str, usize); 5] =
    [("twist", 2), ("coprime", 2), ("conv", 2), ("expext", 1), ("cofactor", 2)];

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { offset: self.pos, kind }
    }

    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn take_while(&mut self, pred: impl Fn(u8) -> bool) -> &'a str {
        let start = self.pos;
        while self.peek().is_some_and(&pred) {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn ident(&mut self) -> Result<(&'a str, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let name = self.take_while(|c| c.is_ascii_alphanumeric() || c == b'_');
        if name.is_empty() {
            let found = self.src[self.pos..].chars().next();
            return Err(self.error(ParseErrorKind::Unexpected(match found {
                Some(c) => format!("expected a name, found `{c}`"),
                None => "expected a name, found end of input".into(),
            })));
        }
        Ok((name, start))
    }

    fn number(&mut self) -> (&'a str, usize) {
        self.skip_ws();
        let start = self.pos;
        let text = self.take_while(|c| c.is_ascii_digit() || matches!(c, b'.' | b'e' | b'E' | b'+' | b'-'));
        (text, start)
    }

    fn spec(&mut self) -> Result<Spec, ParseError> {
        let (name, start) = self.ident()?;
        self.skip_ws();
        if let Some(&(comb, arity)) = COMBINATORS.iter().find(|(c, _)| *c == name) {
            if !self.eat(b'(') {
                return Err(ParseError {
                    offset: start,
                    kind: ParseErrorKind::Arity { name: comb, expected: arity, found: 0 },
                });
            }
            let mut args = vec![self.arg()?];
            while self.eat(b',') {
                args.push(self.arg()?);
            }
            if !self.eat(b')') {
                return Err(self.error(ParseErrorKind::Unexpected(format!("expected `,` or `)` in `{comb}(...)`"))));
            }
            if args.len() != arity {
                return Err(ParseError {
                    offset: start,
                    kind: ParseErrorKind::Arity { name: comb, expected: arity, found: args.len() },
                });
            }
            return self.combine(comb, args);
        }
        let kv = if self.peek() == Some(b':') {
            self.pos += 1;
            self.kvlist()?
        } else {
            Vec::new()
        };
        if self.peek() == Some(b'(') {
            return Err(self.error(ParseErrorKind::Unexpected(format!("`{name}` takes no arguments"))));
        }
        self.catalog(name, start, kv)
    }

    fn arg(&mut self) -> Result<Arg, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c.is_ascii_digit() || matches!(c, b'.' | b'+' | b'-') => {
                let (text, at) = self.number();
                Ok(Arg::Number(text.to_string(), at))
            }
            _ => {
                self.skip_ws();
                let at = self.pos;
                Ok(Arg::Spec(self.spec()?, at))
            }
        }
    }

    /// `key=number(,key=number)*`, stopping before a `,` that does not start
    /// another `key=` pair (so kvlists nest inside combinator arguments).
    fn kvlist(&mut self) -> Result<Vec<(&'a str, f64, usize)>, ParseError> {
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            let key_at = self.pos;
            let key = self.take_while(|c| c.is_ascii_alphanumeric() || c == b'_');
            if key.is_empty() || !self.eat(b'=') {
                self.pos = key_at;
                return Err(self.error(ParseErrorKind::MalformedKvList("expected `key=number`".into())));
            }
            let (text, at) = self.number();
            let value: f64 = text.parse().map_err(|_| ParseError {
                offset: at,
                kind: ParseErrorKind::MalformedKvList(format!("`{key}` needs a number")),
            })?;
            if out.iter().any(|&(k, _, _)| k == key) {
                return Err(ParseError {
                    offset: key_at,
                    kind: ParseErrorKind::MalformedKvList(format!("duplicate key `{key}`")),
                });
            }
            out.push((key, value, key_at));
            let save = self.pos;
            if !self.eat(b',') {
                return Ok(out);
            }
            self.skip_ws();
            let look = self.pos;
            let next = self.take_while(|c| c.is_ascii_alphanumeric() || c == b'_');
            let is_pair = !next.is_empty() && {
                self.skip_ws();
                self.peek() == Some(b'=')
            };
            if is_pair {
                self.pos = look;
            } else {
                self.pos = save;
                return Ok(out);
            }
        }
    }

    fn catalog(&self, name: &str, at: usize, kv: Vec<(&str, f64, usize)>) -> Result<Spec, ParseError> {
        let allowed: &[&str] = match name {
            "one" | "unit" | "squarefree" | "omega" | "bigomega" => &[],
            "divisor" => &["rho"],
            "omega_exp" | "bigomega_exp" => &["z", "zi"],
            _ => {
                return Err(ParseError { offset: at, kind: ParseErrorKind::UnknownName(name.to_string()) })
            }
        };
        if let Some(&(k, _, off)) = kv.iter().find(|(k, _, _)| !allowed.contains(k)) {
            return Err(ParseError {
                offset: off,
                kind: ParseErrorKind::MalformedKvList(format!("`{name}` has no parameter `{k}`")),
            });
        }
        let get = |key: &str| kv.iter().find(|(k, _, _)| *k == key).map(|&(_, v, _)| v);
        let require = |key: &str| {
            get(key).ok_or_else(|| ParseError {
                offset: at,
                kind: ParseErrorKind::MalformedKvList(format!("`{name}` needs `{key}=`")),
            })
        };
        let invalid = |e: crate::Error| ParseError { offset: at, kind: ParseErrorKind::InvalidValue(e.to_string()) };
        Ok(match name {
            "one" => Spec::Mult(MultSpec::one()),
            "unit" => Spec::Mult(MultSpec::unit()),
            "squarefree" => Spec::Mult(MultSpec::squarefree()),
            "omega" => Spec::Add(AddSpec::omega()),
            "bigomega" => Spec::Add(AddSpec::bigomega()),
            "divisor" => Spec::Mult(MultSpec::divisor(require("rho")?).map_err(invalid)?),
            _ => {
                let z = Complex64::new(require("z")?, get("zi").unwrap_or(0.0));
                Spec::Mult(if name == "omega_exp" {
                    MultSpec::omega_exp(z).map_err(invalid)?
                } else {
                    MultSpec::bigomega_exp(z).map_err(invalid)?
                })
            }
        })
    }

    fn combine(&self, comb: &'static str, args: Vec<Arg>) -> Result<Spec, ParseError> {
        let mut it = args.into_iter();
        let mut spec_arg = || -> Result<MultSpec, ParseError> {
            match it.next() {
                Some(Arg::Spec(Spec::Mult(s), _)) => Ok(s),
                Some(Arg::Spec(Spec::Add(s), at)) => Err(ParseError {
                    offset: at,
                    kind: ParseErrorKind::WrongKind(format!("`{comb}` needs a multiplicative spec, `{s}` is additive")),
                }),
                Some(Arg::Number(t, at)) => Err(ParseError {
                    offset: at,
                    kind: ParseErrorKind::WrongKind(format!("`{comb}` needs a spec, found number `{t}`")),
                }),
                None => unreachable!("arity checked"),
            }
        };
        let f = spec_arg()?;
        let spec = match comb {
            "twist" => {
                let (t, at) = number_arg(comb, it.next())?;
                let tau: f64 = t.parse().map_err(|_| bad_number(comb, &t, at))?;
                if !tau.is_finite() {
                    return Err(bad_number(comb, &t, at));
                }
                MultSpec::twist(&f, tau)
            }
            "coprime" => {
                let (t, at) = number_arg(comb, it.next())?;
                let d: u64 = t.parse().map_err(|_| bad_number(comb, &t, at))?;
                MultSpec::coprime(&f, d)
                    .map_err(|e| ParseError { offset: at, kind: ParseErrorKind::InvalidValue(e.to_string()) })?
            }
            "conv" | "cofactor" => {
                let g = match it.next() {
                    Some(Arg::Spec(Spec::Mult(g), _)) => g,
                    Some(Arg::Spec(Spec::Add(s), at)) => {
                        return Err(ParseError {
                            offset: at,
                            kind: ParseErrorKind::WrongKind(format!("`{comb}` needs a multiplicative spec, `{s}` is additive")),
                        })
                    }
                    Some(Arg::Number(t, at)) => {
                        return Err(ParseError {
                            offset: at,
                            kind: ParseErrorKind::WrongKind(format!("`{comb}` needs a spec, found number `{t}`")),
                        })
                    }
                    None => unreachable!("arity checked"),
                };
                if comb == "conv" {
                    MultSpec::conv(&f, &g)
                } else {
                    MultSpec::cofactor(&f, &g)
                }
            }
            _ => MultSpec::exp_extension(&f),
        };
        Ok(Spec::Mult(spec))
    }
}

fn number_arg(comb: &str, arg: Option<Arg>) -> Result<(String, usize), ParseError> {
    match arg {
        Some(Arg::Number(t, at)) => Ok((t, at)),
        Some(Arg::Spec(s, at)) => Err(ParseError {
            offset: at,
            kind: ParseErrorKind::WrongKind(format!("`{comb}` needs a number, found spec `{s}`")),
        }),
        None => unreachable!("arity checked"),
    }
}

fn bad_number(comb: &str, text: &str, at: usize) -> ParseError {
    ParseError { offset: at, kind: ParseErrorKind::InvalidValue(format!("`{text}` is not a valid `{comb}` argument")) }
}
