//! Matrix templates: a tiny expression language for parameterized families.
//!
//! Expressions support real literals, the imaginary unit `i`, named real
//! parameters, unary minus, `+ - * /`, `sqrt(...)` (principal branch) and
//! parentheses. Unary minus binds tighter than `*` and `/`, which bind
//! tighter than `+` and `-`; binary operators are left-associative.
//!
//! Template files (`.ham`) are line oriented:
//!
//! ```text
//! name: h_original
//! params: a, b, c
//! dim: 2
//! a + i*c | i*b
//! i*b | -a + i*c
//! ```
//!
//! `#` starts a comment and blank lines are ignored.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use thiserror::Error;

use crate::numerics::{c, principal_sqrt, real, ComplexScalar, DenseMatrix};

/// Maximum expression tree depth and parser nesting.
pub const MAX_DEPTH: usize = 64;
pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 8;

const RESERVED: [&str; 2] = ["i", "sqrt"];

pub type Assignment = BTreeMap<String, f64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at offset {offset}: {message}")]
pub struct ParseError {
    /// Byte offset into the parsed text.
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("no value for parameter '{0}'")]
    MissingParameter(String),
    #[error("result is not finite")]
    NonFinite,
    #[error("entry ({row}, {col}): {source}")]
    AtEntry {
        row: usize,
        col: usize,
        #[source]
        source: Box<EvalError>,
    },
}

#[derive(Debug, Error)]
pub enum TemplateError {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("line {line}, field {field}: {source}")]
    Expression {
        line: usize,
        field: usize,
        #[source]
        source: ParseError,
    },
    #[error("undeclared identifier '{name}' in entry ({row}, {col})")]
    Undeclared { name: String, row: usize, col: usize },
    #[error("invalid template: {0}")]
    Invalid(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    I,
    Param(String),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Sqrt(Box<Expr>),
}

impl Expr {
    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn depth(&self) -> usize {
        match self {
            Expr::Num(_) | Expr::I | Expr::Param(_) => 1,
            Expr::Neg(e) | Expr::Sqrt(e) => 1 + e.depth(),
            Expr::Binary(_, l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    /// Parameter names referenced anywhere in the tree.
    pub fn params(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_params(&mut out);
        out
    }

    fn collect_params<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Expr::Param(name) => {
                out.insert(name);
            }
            Expr::Neg(e) | Expr::Sqrt(e) => e.collect_params(out),
            Expr::Binary(_, l, r) => {
                l.collect_params(out);
                r.collect_params(out);
            }
            Expr::Num(_) | Expr::I => {}
        }
    }

    pub fn evaluate(&self, assignment: &Assignment) -> Result<ComplexScalar, EvalError> {
        match self {
            Expr::Num(x) => Ok(real(*x)),
            Expr::I => Ok(c(0.0, 1.0)),
            Expr::Param(name) => assignment
                .get(name)
                .map(|&v| real(v))
                .ok_or_else(|| EvalError::MissingParameter(name.clone())),
            Expr::Neg(e) => Ok(-e.evaluate(assignment)?),
            Expr::Sqrt(e) => Ok(principal_sqrt(e.evaluate(assignment)?)),
            Expr::Binary(op, l, r) => {
                let (x, y) = (l.evaluate(assignment)?, r.evaluate(assignment)?);
                match op {
                    BinOp::Add => Ok(x + y),
                    BinOp::Sub => Ok(x - y),
                    BinOp::Mul => Ok(x * y),
                    BinOp::Div => {
                        if y.re == 0.0 && y.im == 0.0 {
                            Err(EvalError::DivisionByZero)
                        } else {
                            Ok(x / y)
                        }
                    }
                }
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(op, _, _) => op.precedence(),
            Expr::Neg(_) => 3,
            _ => 4,
        }
    }
}

impl fmt::Display for Expr {
    /// Minimal parenthesisation that reparses to the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(x) => write!(f, "{x}"),
            Expr::I => f.write_str("i"),
            Expr::Param(name) => f.write_str(name),
            Expr::Sqrt(e) => write!(f, "sqrt({e})"),
            Expr::Neg(e) => {
                if e.precedence() < 3 {
                    write!(f, "-({e})")
                } else {
                    write!(f, "-{e}")
                }
            }
            Expr::Binary(op, l, r) => {
                let p = op.precedence();
                if l.precedence() < p {
                    write!(f, "({l})")?;
                } else {
                    write!(f, "{l}")?;
                }
                write!(f, " {} ", op.symbol())?;
                if r.precedence() <= p {
                    write!(f, "({r})")
                } else {
                    write!(f, "{r}")
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(x) => format!("number {x}"),
            Tok::Ident(s) => format!("identifier '{s}'"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let ch = src[pos..].chars().next().unwrap();
        let start = pos;
        match ch {
            ' ' | '\t' | '\r' | '\n' => pos += 1,
            '+' => {
                toks.push((Tok::Plus, start));
                pos += 1;
            }
            // ASCII hyphen or U+2212 minus sign
            '-' | '\u{2212}' => {
                toks.push((Tok::Minus, start));
                pos += ch.len_utf8();
            }
            '*' => {
                toks.push((Tok::Star, start));
                pos += 1;
            }
            '/' => {
                toks.push((Tok::Slash, start));
                pos += 1;
            }
            '(' => {
                toks.push((Tok::LParen, start));
                pos += 1;
            }
            ')' => {
                toks.push((Tok::RParen, start));
                pos += 1;
            }
            '0'..='9' | '.' => {
                let mut end = pos;
                while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'.') {
                    end += 1;
                }
                if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
                    let mut k = end + 1;
                    if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                        k += 1;
                    }
                    if k < bytes.len() && bytes[k].is_ascii_digit() {
                        while k < bytes.len() && bytes[k].is_ascii_digit() {
                            k += 1;
                        }
                        end = k;
                    }
                }
                let text = &src[start..end];
                let value: f64 = text.parse().map_err(|_| ParseError {
                    offset: start,
                    message: format!("malformed number '{text}'"),
                })?;
                if !value.is_finite() {
                    return Err(ParseError {
                        offset: start,
                        message: format!("number '{text}' is out of range"),
                    });
                }
                toks.push((Tok::Num(value), start));
                pos = end;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut end = pos;
                while end < bytes.len() && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_') {
                    end += 1;
                }
                toks.push((Tok::Ident(src[start..end].to_string()), start));
                pos = end;
            }
            other => {
                return Err(ParseError {
                    offset: start,
                    message: format!("unexpected character '{other}'"),
                })
            }
        }
    }
    toks.push((Tok::End, src.len()));
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    nesting: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
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

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            offset: self.offset(),
            message: message.into(),
        }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        self.error(format!("expected {wanted}, found {}", self.peek().describe()))
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.nesting += 1;
        if self.nesting > MAX_DEPTH {
            return Err(self.error(format!("expression nested deeper than {MAX_DEPTH}")));
        }
        Ok(())
    }

    fn leave(&mut self) {
        self.nesting -= 1;
    }

    fn checked(&self, e: Expr, at: usize) -> Result<Expr, ParseError> {
        if e.depth() > MAX_DEPTH {
            return Err(ParseError {
                offset: at,
                message: format!("expression tree deeper than {MAX_DEPTH}"),
            });
        }
        Ok(e)
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            let at = self.offset();
            self.bump();
            let rhs = self.term()?;
            lhs = self.checked(Expr::binary(op, lhs, rhs), at)?;
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            let at = self.offset();
            self.bump();
            let rhs = self.unary()?;
            lhs = self.checked(Expr::binary(op, lhs, rhs), at)?;
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            let at = self.offset();
            self.bump();
            self.enter()?;
            let inner = self.unary()?;
            self.leave();
            return self.checked(Expr::Neg(Box::new(inner)), at);
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let at = self.offset();
        match self.peek().clone() {
            Tok::Num(x) => {
                self.bump();
                Ok(Expr::Num(x))
            }
            Tok::Ident(name) if name == "i" => {
                self.bump();
                Ok(Expr::I)
            }
            Tok::Ident(name) if name == "sqrt" => {
                self.bump();
                if *self.peek() != Tok::LParen {
                    return Err(self.unexpected("'(' after sqrt"));
                }
                self.bump();
                self.enter()?;
                let inner = self.expr()?;
                self.leave();
                if *self.peek() != Tok::RParen {
                    return Err(self.unexpected("')'"));
                }
                self.bump();
                self.checked(Expr::Sqrt(Box::new(inner)), at)
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Expr::Param(name))
            }
            Tok::LParen => {
                self.bump();
                self.enter()?;
                let inner = self.expr()?;
                self.leave();
                if *self.peek() != Tok::RParen {
                    return Err(self.unexpected("')'"));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.unexpected("a number, identifier, 'i', 'sqrt' or '('")),
        }
    }
}

pub fn parse_expression(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        nesting: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("an operator or end of input"));
    }
    Ok(e)
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianTemplate {
    name: String,
    params: Vec<String>,
    entries: Vec<Vec<Expr>>,
}

impl HamiltonianTemplate {
    pub fn new(
        name: impl Into<String>,
        params: Vec<String>,
        entries: Vec<Vec<Expr>>,
    ) -> Result<Self, TemplateError> {
        let n = entries.len();
        if !(MIN_DIM..=MAX_DIM).contains(&n) {
            return Err(TemplateError::Invalid(format!(
                "dimension {n} outside {MIN_DIM}..={MAX_DIM}"
            )));
        }
        if entries.iter().any(|row| row.len() != n) {
            return Err(TemplateError::Invalid("non-square matrix".into()));
        }
        let mut seen = BTreeSet::new();
        for p in &params {
            if !is_identifier(p) || RESERVED.contains(&p.as_str()) {
                return Err(TemplateError::Invalid(format!(
                    "'{p}' cannot be used as a parameter name"
                )));
            }
            if !seen.insert(p.as_str()) {
                return Err(TemplateError::Invalid(format!("duplicate parameter '{p}'")));
            }
        }
        for (r, row) in entries.iter().enumerate() {
            for (col, e) in row.iter().enumerate() {
                if let Some(name) = e.params().into_iter().find(|p| !seen.contains(p)) {
                    return Err(TemplateError::Undeclared {
                        name: name.to_string(),
                        row: r,
                        col,
                    });
                }
            }
        }
        Ok(HamiltonianTemplate {
            name: name.into(),
            params,
            entries,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, row: usize, col: usize) -> &Expr {
        &self.entries[row][col]
    }

    pub fn instantiate(&self, assignment: &Assignment) -> Result<DenseMatrix, EvalError> {
        let n = self.dim();
        let mut data = Vec::with_capacity(n * n);
        for (row, exprs) in self.entries.iter().enumerate() {
            for (col, e) in exprs.iter().enumerate() {
                let at = |source| EvalError::AtEntry {
                    row,
                    col,
                    source: Box::new(source),
                };
                let z = e.evaluate(assignment).map_err(at)?;
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(at(EvalError::NonFinite));
                }
                data.push(z);
            }
        }
        Ok(DenseMatrix::new(n, n, data).expect("finite square data"))
    }

    /// Renders the template in `.ham` format; parsing the result gives back
    /// an identical template.
    pub fn to_source(&self) -> String {
        let mut out = format!(
            "name: {}\nparams: {}\ndim: {}\n",
            self.name,
            self.params.join(", "),
            self.dim()
        );
        for row in &self.entries {
            let fields: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            out.push_str(&fields.join(" | "));
            out.push('\n');
        }
        out
    }
}

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(head, _)| head).trim()
}

fn header<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    key: &str,
    last_line: usize,
) -> Result<(usize, &'a str), TemplateError> {
    let (line, text) = lines.next().ok_or_else(|| TemplateError::Format {
        line: last_line,
        message: format!("missing '{key}:' header"),
    })?;
    let value = text
        .strip_prefix(key)
        .and_then(|rest| rest.trim_start().strip_prefix(':'))
        .ok_or_else(|| TemplateError::Format {
            line,
            message: format!("expected '{key}:' header"),
        })?;
    Ok((line, value.trim()))
}

/// Parses `.ham` source text.
pub fn parse_template(src: &str) -> Result<HamiltonianTemplate, TemplateError> {
    let last_line = src.lines().count().max(1);
    let mut lines = src
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, strip_comment(l)))
        .filter(|(_, l)| !l.is_empty());

    let (name_line, name) = header(&mut lines, "name", last_line)?;
    if name.is_empty() {
        return Err(TemplateError::Format {
            line: name_line,
            message: "empty template name".into(),
        });
    }

    let (params_line, params_text) = header(&mut lines, "params", last_line)?;
    let mut params: Vec<String> = Vec::new();
    if !params_text.is_empty() {
        for p in params_text.split(',').map(str::trim) {
            let fail = |message: String| TemplateError::Format {
                line: params_line,
                message,
            };
            if !is_identifier(p) {
                return Err(fail(format!("invalid parameter name '{p}'")));
            }
            if RESERVED.contains(&p) {
                return Err(fail(format!("'{p}' is reserved and cannot be a parameter")));
            }
            if params.iter().any(|q| q == p) {
                return Err(fail(format!("duplicate parameter '{p}'")));
            }
            params.push(p.to_string());
        }
    }

    let (dim_line, dim_text) = header(&mut lines, "dim", last_line)?;
    let dim: usize = dim_text.parse().map_err(|_| TemplateError::Format {
        line: dim_line,
        message: format!("invalid dimension '{dim_text}'"),
    })?;
    if !(MIN_DIM..=MAX_DIM).contains(&dim) {
        return Err(TemplateError::Format {
            line: dim_line,
            message: format!("dimension {dim} outside {MIN_DIM}..={MAX_DIM}"),
        });
    }

    let mut entries = Vec::with_capacity(dim);
    for (line, text) in lines {
        if entries.len() == dim {
            return Err(TemplateError::Format {
                line,
                message: format!("non-square matrix: more than {dim} rows"),
            });
        }
        let fields: Vec<&str> = text.split('|').collect();
        if fields.len() != dim {
            return Err(TemplateError::Format {
                line,
                message: format!(
                    "non-square matrix: row has {} fields, expected {dim}",
                    fields.len()
                ),
            });
        }
        let row = fields
            .iter()
            .enumerate()
            .map(|(field, f)| {
                parse_expression(f).map_err(|source| TemplateError::Expression {
                    line,
                    field: field + 1,
                    source,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        entries.push(row);
    }
    if entries.len() != dim {
        return Err(TemplateError::Format {
            line: last_line,
            message: format!(
                "non-square matrix: expected {dim} rows, found {}",
                entries.len()
            ),
        });
    }
    HamiltonianTemplate::new(name, params, entries)
}

pub fn load_template_file(path: impl AsRef<Path>) -> Result<HamiltonianTemplate, TemplateError> {
    let path = path.as_ref();
    let src = std::fs::read_to_string(path).map_err(|source| TemplateError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_template(&src)
}
