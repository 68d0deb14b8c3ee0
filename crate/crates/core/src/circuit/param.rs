// Copyright 2026 The rivetlite Authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Gate parameters: plain angles or deferred expressions over named symbols.
//!
//! Expressions are kept deliberately small (sums, products and negation of
//! constants and symbols). They are enough for feature maps that multiply
//! features together, and for translation rules that shift a symbolic angle
//! by a constant. Evaluation happens at bind time.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use super::CircuitError;

/// A deferred arithmetic expression over named symbols.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(f64),
    Symbol(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
}

// Builder methods consume `self`, so the operator names read naturally.
#[allow(clippy::should_implement_trait)]
impl Expr {
    pub fn symbol(name: impl Into<String>) -> Self {
        Expr::Symbol(name.into())
    }

    /// `self + other`, folding constants.
    pub fn add(self, other: Expr) -> Expr {
        match (self, other) {
            (Expr::Const(a), Expr::Const(b)) => Expr::Const(a + b),
            (Expr::Const(a), e) | (e, Expr::Const(a)) if a == 0.0 => e,
            // Keep a trailing constant in canonical position so repeated shifts fold.
            (Expr::Add(l, r), Expr::Const(b)) => match *r {
                Expr::Const(a) => (*l).add(Expr::Const(a + b)),
                r => Expr::Add(Box::new(Expr::Add(l, Box::new(r))), Box::new(Expr::Const(b))),
            },
            (Expr::Const(a), e) => e.add(Expr::Const(a)),
            (a, b) => Expr::Add(Box::new(a), Box::new(b)),
        }
    }

    /// `self * other`, folding constants.
    pub fn mul(self, other: Expr) -> Expr {
        match (self, other) {
            (Expr::Const(a), Expr::Const(b)) => Expr::Const(a * b),
            (Expr::Const(a), _) | (_, Expr::Const(a)) if a == 0.0 => Expr::Const(0.0),
            (Expr::Const(a), e) | (e, Expr::Const(a)) if a == 1.0 => e,
            (a, b) => Expr::Mul(Box::new(a), Box::new(b)),
        }
    }

    pub fn neg(self) -> Expr {
        match self {
            Expr::Const(a) => Expr::Const(-a),
            Expr::Neg(e) => *e,
            e => Expr::Neg(Box::new(e)),
        }
    }

    pub fn sub(self, other: Expr) -> Expr {
        self.add(other.neg())
    }

    pub fn is_const(&self) -> bool {
        matches!(self, Expr::Const(_))
    }

    pub fn collect_symbols(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Const(_) => {}
            Expr::Symbol(s) => {
                out.insert(s.clone());
            }
            Expr::Neg(e) => e.collect_symbols(out),
            Expr::Add(a, b) | Expr::Mul(a, b) => {
                a.collect_symbols(out);
                b.collect_symbols(out);
            }
        }
    }

    /// Evaluate with `lookup` resolving symbol values.
    pub fn eval<F>(&self, lookup: &F) -> Result<f64, CircuitError>
    where
        F: Fn(&str) -> Option<f64>,
    {
        Ok(match self {
            Expr::Const(v) => *v,
            Expr::Symbol(s) => lookup(s).ok_or_else(|| CircuitError::MissingSymbol(s.clone()))?,
            Expr::Neg(e) => -e.eval(lookup)?,
            Expr::Add(a, b) => a.eval(lookup)? + b.eval(lookup)?,
            Expr::Mul(a, b) => a.eval(lookup)? * b.eval(lookup)?,
        })
    }

    /// Replace the symbols `lookup` knows about with constants.
    pub fn substitute<F>(&self, lookup: &F) -> Expr
    where
        F: Fn(&str) -> Option<f64>,
    {
        match self {
            Expr::Const(v) => Expr::Const(*v),
            Expr::Symbol(s) => lookup(s).map_or_else(|| Expr::Symbol(s.clone()), Expr::Const),
            Expr::Neg(e) => e.substitute(lookup).neg(),
            Expr::Add(a, b) => a.substitute(lookup).add(b.substitute(lookup)),
            Expr::Mul(a, b) => a.substitute(lookup).mul(b.substitute(lookup)),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) => 1,
            Expr::Mul(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Const(v) if *v < 0.0 => 3,
            _ => 4,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let wrap = self.precedence() < min;
        if wrap {
            f.write_str("(")?;
        }
        match self {
            Expr::Const(v) => write!(f, "{v:?}")?,
            Expr::Symbol(s) => f.write_str(s)?,
            Expr::Neg(e) => {
                f.write_str("-")?;
                e.fmt_prec(f, 4)?;
            }
            Expr::Add(a, b) => {
                a.fmt_prec(f, 1)?;
                f.write_str(" + ")?;
                b.fmt_prec(f, 2)?;
            }
            Expr::Mul(a, b) => {
                a.fmt_prec(f, 2)?;
                f.write_str("*")?;
                b.fmt_prec(f, 3)?;
            }
        }
        if wrap {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl FromStr for Expr {
    type Err = CircuitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parser = Parser { src: s, pos: 0 };
        let expr = parser.expr()?;
        parser.skip_ws();
        if parser.pos != s.len() {
            return Err(parser.error("trailing input"));
        }
        Ok(expr)
    }
}

// expr   := term (('+' | '-') term)*
// term   := unary (('*' | '/') unary)*
// unary  := '-' unary | atom
// atom   := number | ident | '(' expr ')'
struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, what: &str) -> CircuitError {
        CircuitError::Parse(format!("{what} at offset {} in expression {:?}", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, want: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(want) {
            self.pos += want.len_utf8();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, CircuitError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = lhs.add(self.term()?);
            } else if self.eat('-') {
                lhs = lhs.sub(self.term()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, CircuitError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = lhs.mul(self.unary()?);
            } else if self.eat('/') {
                match self.unary()? {
                    Expr::Const(d) if d != 0.0 => lhs = lhs.mul(Expr::Const(1.0 / d)),
                    _ => return Err(self.error("division is only supported by nonzero constants")),
                }
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, CircuitError> {
        if self.eat('-') {
            Ok(self.unary()?.neg())
        } else {
            self.atom()
        }
    }

    fn atom(&mut self) -> Result<Expr, CircuitError> {
        self.skip_ws();
        if self.eat('(') {
            let e = self.expr()?;
            if !self.eat(')') {
                return Err(self.error("expected ')'"));
            }
            return Ok(e);
        }
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let rest = &self.src[start..];
                let mut end = 0;
                let bytes = rest.as_bytes();
                while end < bytes.len() {
                    let b = bytes[end];
                    let exp_sign = (b == b'+' || b == b'-') && end > 0 && matches!(bytes[end - 1], b'e' | b'E');
                    if b.is_ascii_digit() || b == b'.' || b == b'e' || b == b'E' || exp_sign {
                        end += 1;
                    } else {
                        break;
                    }
                }
                let v: f64 = rest[..end].parse().map_err(|_| self.error("bad number"))?;
                self.pos += end;
                Ok(Expr::Const(v))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let len: usize = self.src[start..]
                    .chars()
                    .take_while(|c| c.is_alphanumeric() || *c == '_')
                    .map(char::len_utf8)
                    .sum();
                self.pos += len;
                let name = &self.src[start..start + len];
                Ok(if name == "pi" { Expr::Const(PI) } else { Expr::symbol(name) })
            }
            _ => Err(self.error("expected number, symbol or '('")),
        }
    }
}

/// A gate parameter.
///
/// `Symbolic` always carries at least one unbound symbol; purely numeric
/// results are folded into `Value`.
#[derive(Clone, Debug, PartialEq)]
pub enum Param {
    Value(f64),
    Symbolic(Expr),
}

impl Param {
    pub fn symbol(name: impl Into<String>) -> Self {
        Param::Symbolic(Expr::symbol(name))
    }

    fn from_expr(e: Expr) -> Self {
        match e {
            Expr::Const(v) => Param::Value(v),
            e => Param::Symbolic(e),
        }
    }

    fn into_expr(self) -> Expr {
        match self {
            Param::Value(v) => Expr::Const(v),
            Param::Symbolic(e) => e,
        }
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            Param::Value(v) => Some(*v),
            Param::Symbolic(_) => None,
        }
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self, Param::Symbolic(_))
    }

    /// If this parameter is exactly one bare symbol, its name.
    pub fn as_symbol(&self) -> Option<&str> {
        match self {
            Param::Symbolic(Expr::Symbol(s)) => Some(s),
            _ => None,
        }
    }

    pub fn add(&self, other: &Param) -> Param {
        match (self, other) {
            (Param::Value(a), Param::Value(b)) => Param::Value(a + b),
            _ => Param::from_expr(self.clone().into_expr().add(other.clone().into_expr())),
        }
    }

    pub fn shifted(&self, by: f64) -> Param {
        self.add(&Param::Value(by))
    }

    pub fn mul(&self, other: &Param) -> Param {
        match (self, other) {
            (Param::Value(a), Param::Value(b)) => Param::Value(a * b),
            _ => Param::from_expr(self.clone().into_expr().mul(other.clone().into_expr())),
        }
    }

    pub fn scaled(&self, by: f64) -> Param {
        self.mul(&Param::Value(by))
    }

    pub fn neg(&self) -> Param {
        Param::from_expr(self.clone().into_expr().neg())
    }

    pub fn collect_symbols(&self, out: &mut BTreeSet<String>) {
        if let Param::Symbolic(e) = self {
            e.collect_symbols(out);
        }
    }

    pub fn eval<F>(&self, lookup: &F) -> Result<f64, CircuitError>
    where
        F: Fn(&str) -> Option<f64>,
    {
        match self {
            Param::Value(v) => Ok(*v),
            Param::Symbolic(e) => e.eval(lookup),
        }
    }

    pub fn substitute<F>(&self, lookup: &F) -> Param
    where
        F: Fn(&str) -> Option<f64>,
    {
        match self {
            Param::Value(v) => Param::Value(*v),
            Param::Symbolic(e) => Param::from_expr(e.substitute(lookup)),
        }
    }
}

impl From<f64> for Param {
    fn from(v: f64) -> Self {
        Param::Value(v)
    }
}

impl From<Expr> for Param {
    fn from(e: Expr) -> Self {
        Param::from_expr(e)
    }
}

impl From<&str> for Param {
    fn from(name: &str) -> Self {
        Param::symbol(name)
    }
}

impl From<String> for Param {
    fn from(name: String) -> Self {
        Param::symbol(name)
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Value(v) => write!(f, "{v:?}"),
            Param::Symbolic(e) => e.fmt(f),
        }
    }
}

/// Values for named circuit parameters.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ParameterBinding(BTreeMap<String, f64>);

impl ParameterBinding {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: impl Into<String>, value: f64) -> Option<f64> {
        self.0.insert(name.into(), value)
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.0.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.0.contains_key(name)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    /// Merge `other` into `self`; entries of `other` win.
    pub fn extend(&mut self, other: &ParameterBinding) {
        self.0.extend(other.0.iter().map(|(k, v)| (k.clone(), *v)));
    }

    pub fn lookup(&self) -> impl Fn(&str) -> Option<f64> + '_ {
        move |name| self.get(name)
    }
}

impl<K: Into<String>> FromIterator<(K, f64)> for ParameterBinding {
    fn from_iter<I: IntoIterator<Item = (K, f64)>>(iter: I) -> Self {
        Self(iter.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }
}
