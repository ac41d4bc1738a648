//! Parser for map definition files.
//!
//! ```text
//! map       := stmt (sep stmt)* sep?
//! sep       := ";" | <newline before the next statement>
//! stmt      := COMPONENT "=" expr          (COMPONENT is f1, f2, ... in order)
//!            | "tail" "zeros"
//!            | "tail" "shift" "from" INTEGER
//!            | "post" "project"
//! expr      := term (("+" | "-") term)*
//! term      := unary (("*" | "/") unary)*
//! unary     := "-" unary | primary
//! primary   := NUMBER | VARIABLE | "(" expr ")"
//!            | ("min" | "max") "(" expr ("," expr)* ")"
//!            | "abs" "(" expr ")"
//!            | "pow" "(" expr "," "-"? NUMBER ")"
//! ```
//!
//! Variables are `x1, x2, ...`; `#` starts a comment running to end of line.

use std::fmt;

use super::expr::{BinOp, Expr};
use super::spec::{MapSpec, PostStep, TailRule};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ParseErrorKind {
    Syntax {
        expected: Vec<String>,
        found: String,
    },
    UndeclaredVariable(String),
    UnknownFunction(String),
    Arity {
        function: &'static str,
        expected: &'static str,
        found: usize,
    },
    ComponentOrder {
        expected: usize,
        found: String,
    },
    DuplicateDirective(&'static str),
    InvalidNumber(String),
    EmptyComponentList,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax { expected, found } => {
                if expected.len() == 1 {
                    write!(f, "expected {}, found {found}", expected[0])
                } else {
                    write!(f, "expected one of {}, found {found}", expected.join(", "))
                }
            }
            ParseErrorKind::UndeclaredVariable(name) => {
                write!(f, "undeclared variable `{name}` (variables are x1, x2, ...)")
            }
            ParseErrorKind::UnknownFunction(name) => {
                write!(f, "unknown function `{name}` (expected min, max, abs or pow)")
            }
            ParseErrorKind::Arity {
                function,
                expected,
                found,
            } => {
                write!(f, "`{function}` takes {expected} argument(s), found {found}")
            }
            ParseErrorKind::ComponentOrder { expected, found } => {
                write!(f, "expected component `f{expected}`, found `{found}`")
            }
            ParseErrorKind::DuplicateDirective(d) => write!(f, "duplicate `{d}` directive"),
            ParseErrorKind::InvalidNumber(s) => write!(f, "invalid number `{s}`"),
            ParseErrorKind::EmptyComponentList => f.write_str("map defines no components"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(f64, String),
    Sym(char),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Num(_, s) => write!(f, "`{s}`"),
            Tok::Sym(c) => write!(f, "`{c}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
    starts_line: bool,
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let mut starts_line = true;
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            starts_line = true;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let (start_line, start_col) = (line, col);
        let start = i;
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            match text.parse::<f64>() {
                Ok(v) if v.is_finite() => Tok::Num(v, text),
                _ => {
                    return Err(ParseError {
                        line: start_line,
                        column: start_col,
                        kind: ParseErrorKind::InvalidNumber(text),
                    })
                }
            }
        } else if "+-*/(),=;".contains(c) {
            i += 1;
            Tok::Sym(c)
        } else {
            return Err(ParseError {
                line,
                column: col,
                kind: ParseErrorKind::Syntax {
                    expected: vec!["a number, variable, operator or directive".into()],
                    found: format!("`{c}`"),
                },
            });
        };
        col += i - start;
        out.push(Token {
            tok,
            line: start_line,
            column: start_col,
            starts_line,
        });
        starts_line = false;
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column: col,
        starts_line: true,
    });
    Ok(out)
}

fn variable_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('x')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.starts_with('0') {
        return None;
    }
    digits.parse().ok()
}

fn component_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('f')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.starts_with('0') {
        return None;
    }
    digits.parse().ok()
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

const OPERAND: [&str; 4] = ["a number", "a variable", "a function call", "`(`"];

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, t: &Token, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: t.line,
            column: t.column,
            kind,
        }
    }

    /// Syntax error at the current token. A premature end of input is
    /// reported at the token that left the construct dangling.
    fn unexpected(&self, expected: &[&str]) -> ParseError {
        let t = self.peek();
        let anchor = if t.tok == Tok::Eof && self.pos > 0 {
            &self.toks[self.pos - 1]
        } else {
            t
        };
        let found = match &t.tok {
            Tok::Eof if self.pos > 0 => format!("end of input after {}", self.toks[self.pos - 1].tok),
            other => other.to_string(),
        };
        self.error_at(
            anchor,
            ParseErrorKind::Syntax {
                expected: expected.iter().map(|s| s.to_string()).collect(),
                found,
            },
        )
    }

    fn expect_sym(&mut self, c: char) -> Result<Token, ParseError> {
        if self.peek().tok == Tok::Sym(c) {
            Ok(self.bump())
        } else {
            let label = format!("`{c}`");
            Err(self.unexpected(&[label.as_str()]))
        }
    }

    fn expect_word(&mut self, w: &str) -> Result<Token, ParseError> {
        if matches!(&self.peek().tok, Tok::Ident(s) if s == w) {
            Ok(self.bump())
        } else {
            let label = format!("`{w}`");
            Err(self.unexpected(&[label.as_str()]))
        }
    }

    fn parse_map(&mut self) -> Result<MapSpec, ParseError> {
        let mut components = Vec::new();
        let mut tail: Option<TailRule> = None;
        let mut post: Option<PostStep> = None;
        loop {
            while self.peek().tok == Tok::Sym(';') {
                self.bump();
            }
            let t = self.peek().clone();
            match &t.tok {
                Tok::Eof => break,
                Tok::Ident(w) if w == "tail" => {
                    self.bump();
                    if tail.is_some() {
                        return Err(self.error_at(&t, ParseErrorKind::DuplicateDirective("tail")));
                    }
                    tail = Some(self.parse_tail()?);
                }
                Tok::Ident(w) if w == "post" => {
                    self.bump();
                    if post.is_some() {
                        return Err(self.error_at(&t, ParseErrorKind::DuplicateDirective("post")));
                    }
                    self.expect_word("project")?;
                    post = Some(PostStep::ProjectToSimplex);
                }
                Tok::Ident(w) if component_index(w).is_some() => {
                    let idx = component_index(w).unwrap();
                    if idx != components.len() + 1 {
                        return Err(self.error_at(
                            &t,
                            ParseErrorKind::ComponentOrder {
                                expected: components.len() + 1,
                                found: w.clone(),
                            },
                        ));
                    }
                    self.bump();
                    self.expect_sym('=')?;
                    components.push(self.parse_expr()?);
                }
                _ => {
                    let next = format!("`f{}`", components.len() + 1);
                    return Err(self.unexpected(&[next.as_str(), "`tail`", "`post`"]));
                }
            }
            // statement boundary
            let t = self.peek();
            match t.tok {
                Tok::Sym(';') | Tok::Eof => {}
                _ if t.starts_line => {}
                _ => return Err(self.unexpected(&["`;`", "an operator", "a new line"])),
            }
        }
        if components.is_empty() {
            let t = self.peek();
            return Err(self.error_at(t, ParseErrorKind::EmptyComponentList));
        }
        Ok(MapSpec::new(
            components,
            tail.unwrap_or(TailRule::Zeros),
            post.unwrap_or(PostStep::None),
        ))
    }

    fn parse_tail(&mut self) -> Result<TailRule, ParseError> {
        match &self.peek().tok {
            Tok::Ident(w) if w == "zeros" => {
                self.bump();
                Ok(TailRule::Zeros)
            }
            Tok::Ident(w) if w == "shift" => {
                self.bump();
                self.expect_word("from")?;
                let t = self.peek().clone();
                match t.tok {
                    Tok::Num(v, _) if v >= 1.0 && v.fract() == 0.0 && v <= 1e9 => {
                        self.bump();
                        Ok(TailRule::ShiftFrom(v as usize))
                    }
                    _ => Err(self.unexpected(&["a positive integer"])),
                }
            }
            _ => Err(self.unexpected(&["`zeros`", "`shift`"])),
        }
    }

    fn parse_expr(&mut self) -> Result<Expr, ParseError> {
        let mut left = self.parse_term()?;
        loop {
            let op = match self.peek().tok {
                Tok::Sym('+') => BinOp::Add,
                Tok::Sym('-') => BinOp::Sub,
                _ => return Ok(left),
            };
            self.bump();
            let right = self.parse_term()?;
            left = Expr::Binary(op, Box::new(left), Box::new(right));
        }
    }

    fn parse_term(&mut self) -> Result<Expr, ParseError> {
        let mut left = self.parse_unary()?;
        loop {
            let op = match self.peek().tok {
                Tok::Sym('*') => BinOp::Mul,
                Tok::Sym('/') => BinOp::Div,
                _ => return Ok(left),
            };
            self.bump();
            let right = self.parse_unary()?;
            left = Expr::Binary(op, Box::new(left), Box::new(right));
        }
    }

    fn parse_unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek().tok == Tok::Sym('-') {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.parse_unary()?)));
        }
        self.parse_primary()
    }

    fn parse_primary(&mut self) -> Result<Expr, ParseError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Num(v, _) => {
                self.bump();
                Ok(Expr::Num(*v))
            }
            Tok::Sym('(') => {
                self.bump();
                let e = self.parse_expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump();
                if self.peek().tok == Tok::Sym('(') {
                    return self.parse_call(&t, name);
                }
                match variable_index(name) {
                    Some(i) => Ok(Expr::Var(i)),
                    None => Err(self.error_at(&t, ParseErrorKind::UndeclaredVariable(name.clone()))),
                }
            }
            _ => Err(self.unexpected(&OPERAND)),
        }
    }

    fn parse_args(&mut self) -> Result<Vec<Expr>, ParseError> {
        self.expect_sym('(')?;
        let mut args = vec![self.parse_expr()?];
        while self.peek().tok == Tok::Sym(',') {
            self.bump();
            args.push(self.parse_expr()?);
        }
        self.expect_sym(')')?;
        Ok(args)
    }

    fn parse_call(&mut self, at: &Token, name: &str) -> Result<Expr, ParseError> {
        match name {
            "min" | "max" => {
                let args = self.parse_args()?;
                Ok(if name == "min" {
                    Expr::Min(args)
                } else {
                    Expr::Max(args)
                })
            }
            "abs" => {
                let mut args = self.parse_args()?;
                if args.len() != 1 {
                    return Err(self.error_at(
                        at,
                        ParseErrorKind::Arity {
                            function: "abs",
                            expected: "1",
                            found: args.len(),
                        },
                    ));
                }
                Ok(Expr::Abs(Box::new(args.remove(0))))
            }
            "pow" => {
                self.expect_sym('(')?;
                let base = self.parse_expr()?;
                self.expect_sym(',')?;
                let negative = if self.peek().tok == Tok::Sym('-') {
                    self.bump();
                    true
                } else {
                    false
                };
                let exponent = match self.peek().tok {
                    Tok::Num(v, _) => {
                        self.bump();
                        if negative {
                            -v
                        } else {
                            v
                        }
                    }
                    _ => return Err(self.unexpected(&["a numeric exponent"])),
                };
                self.expect_sym(')')?;
                Ok(Expr::Pow(Box::new(base), exponent))
            }
            other => Err(self.error_at(at, ParseErrorKind::UnknownFunction(other.to_string()))),
        }
    }
}

/// Parses map source text into a validated [`MapSpec`].
pub fn parse_map(source: &str) -> Result<MapSpec, ParseError> {
    let toks = lex(source)?;
    Parser { toks, pos: 0 }.parse_map()
}
