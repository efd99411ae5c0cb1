//! Operator-precedence expression grammar for scalars and polynomials:
//! `^` (right-associative) binds above unary minus, then `*` `/`, then
//! `+` `-`. Scalar literals are integers, fractions `p/q` and `zeta(N)^k`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num::{BigInt, ToPrimitive};
use thiserror::Error;

use crate::arith::{CycloNumber, Rat};
use crate::poly::{CoefPoly, VarTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{pos}: {message}")]
pub struct ExprError {
    pub pos: Pos,
    pub message: String,
}

fn err<T>(pos: Pos, message: impl Into<String>) -> Result<T, ExprError> {
    Err(ExprError {
        pos,
        message: message.into(),
    })
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Debug, Clone, PartialEq)]
struct SpannedTok {
    tok: Tok,
    pos: Pos,
}

fn tokenize(src: &str, start: Pos) -> Result<Vec<SpannedTok>, ExprError> {
    let mut out = Vec::new();
    let mut line = start.line;
    let mut col = start.col;
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, col };
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
            '0'..='9' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        s.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                out.push(SpannedTok {
                    tok: Tok::Int(s.parse().expect("digits")),
                    pos,
                });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        s.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                out.push(SpannedTok {
                    tok: Tok::Ident(s),
                    pos,
                });
            }
            _ => {
                let tok = match c {
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    '^' => Tok::Caret,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    other => return err(pos, format!("unexpected character `{other}`")),
                };
                chars.next();
                col += 1;
                out.push(SpannedTok { tok, pos });
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Ast {
    Int(BigInt, Pos),
    Var(String, Pos),
    Zeta(Box<Ast>, Pos),
    Neg(Box<Ast>, Pos),
    Add(Box<Ast>, Box<Ast>, Pos),
    Sub(Box<Ast>, Box<Ast>, Pos),
    Mul(Box<Ast>, Box<Ast>, Pos),
    Div(Box<Ast>, Box<Ast>, Pos),
    Pow(Box<Ast>, Box<Ast>, Pos),
}

impl Ast {
    pub fn pos(&self) -> Pos {
        match self {
            Ast::Int(_, p)
            | Ast::Var(_, p)
            | Ast::Zeta(_, p)
            | Ast::Neg(_, p)
            | Ast::Add(_, _, p)
            | Ast::Sub(_, _, p)
            | Ast::Mul(_, _, p)
            | Ast::Div(_, _, p)
            | Ast::Pow(_, _, p) => *p,
        }
    }
}

struct Parser {
    toks: Vec<SpannedTok>,
    idx: usize,
    end: Pos,
}

impl Parser {
    fn peek(&self) -> Option<&SpannedTok> {
        self.toks.get(self.idx)
    }

    fn next(&mut self) -> Option<SpannedTok> {
        let t = self.toks.get(self.idx).cloned();
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    fn here(&self) -> Pos {
        self.peek().map(|t| t.pos).unwrap_or(self.end)
    }

    fn expr(&mut self) -> Result<Ast, ExprError> {
        let mut lhs = self.term()?;
        while let Some(t) = self.peek() {
            let pos = t.pos;
            match t.tok {
                Tok::Plus => {
                    self.next();
                    let rhs = self.term()?;
                    lhs = Ast::Add(Box::new(lhs), Box::new(rhs), pos);
                }
                Tok::Minus => {
                    self.next();
                    let rhs = self.term()?;
                    lhs = Ast::Sub(Box::new(lhs), Box::new(rhs), pos);
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Ast, ExprError> {
        let mut lhs = self.unary()?;
        while let Some(t) = self.peek() {
            let pos = t.pos;
            match t.tok {
                Tok::Star => {
                    self.next();
                    let rhs = self.unary()?;
                    lhs = Ast::Mul(Box::new(lhs), Box::new(rhs), pos);
                }
                Tok::Slash => {
                    self.next();
                    let rhs = self.unary()?;
                    lhs = Ast::Div(Box::new(lhs), Box::new(rhs), pos);
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Ast, ExprError> {
        if let Some(t) = self.peek() {
            if t.tok == Tok::Minus {
                let pos = t.pos;
                self.next();
                let inner = self.unary()?;
                return Ok(Ast::Neg(Box::new(inner), pos));
            }
        }
        self.power()
    }

    fn power(&mut self) -> Result<Ast, ExprError> {
        let base = self.atom()?;
        if let Some(t) = self.peek() {
            if t.tok == Tok::Caret {
                let pos = t.pos;
                self.next();
                // Right-associative; the exponent may itself carry a caret.
                let exp = self.exponent()?;
                return Ok(Ast::Pow(Box::new(base), Box::new(exp), pos));
            }
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<Ast, ExprError> {
        let base = self.atom()?;
        if let Some(t) = self.peek() {
            if t.tok == Tok::Caret {
                let pos = t.pos;
                self.next();
                let exp = self.exponent()?;
                return Ok(Ast::Pow(Box::new(base), Box::new(exp), pos));
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Ast, ExprError> {
        let t = match self.next() {
            Some(t) => t,
            None => return err(self.end, "unexpected end of expression"),
        };
        match t.tok {
            Tok::Int(n) => Ok(Ast::Int(n, t.pos)),
            Tok::Ident(name) => {
                if name == "zeta" {
                    let open = self.here();
                    match self.next() {
                        Some(SpannedTok {
                            tok: Tok::LParen, ..
                        }) => {}
                        _ => return err(open, "expected `(` after zeta"),
                    }
                    let arg = self.expr()?;
                    match self.next() {
                        Some(SpannedTok {
                            tok: Tok::RParen, ..
                        }) => {}
                        _ => return err(self.here(), "expected `)`"),
                    }
                    Ok(Ast::Zeta(Box::new(arg), t.pos))
                } else {
                    Ok(Ast::Var(name, t.pos))
                }
            }
            Tok::LParen => {
                let inner = self.expr()?;
                match self.next() {
                    Some(SpannedTok {
                        tok: Tok::RParen, ..
                    }) => Ok(inner),
                    _ => err(self.here(), "expected `)`"),
                }
            }
            other => err(t.pos, format!("unexpected token `{other:?}`")),
        }
    }
}

pub fn parse_expression_at(src: &str, start: Pos) -> Result<Ast, ExprError> {
    let toks = tokenize(src, start)?;
    let end = toks.last().map(|t| t.pos).unwrap_or(start);
    let mut p = Parser { toks, idx: 0, end };
    let ast = p.expr()?;
    if let Some(t) = p.peek() {
        return err(t.pos, format!("trailing input `{:?}`", t.tok));
    }
    Ok(ast)
}

pub fn parse_expression(src: &str) -> Result<Ast, ExprError> {
    parse_expression_at(src, Pos { line: 1, col: 1 })
}

/// Resolution context for identifiers in polynomial expressions.
pub struct EvalContext {
    pub table: Arc<VarTable>,
    pub conductor: u64,
    /// Algebra generator names; `name^e` resolves to the central-generator
    /// variable when `e` is a multiple of the generator's central power.
    pub generators: HashMap<String, usize>,
}

impl EvalContext {
    /// Generator names are derived from the table's central-generator
    /// variables, so `x1^2` resolves through the central power.
    pub fn plain(table: Arc<VarTable>, conductor: u64) -> EvalContext {
        let mut generators = HashMap::new();
        for (idx, def) in table.defs().iter().enumerate() {
            if let crate::poly::VarRole::CentralGen { generator, .. } = def.role {
                generators.insert(table.name(idx).to_string(), generator);
            }
        }
        EvalContext {
            table,
            conductor,
            generators,
        }
    }
}

enum Value {
    Poly(CoefPoly),
    /// A bare algebra generator, legal only under a suitable power.
    Gen(usize, Pos),
}

impl Value {
    fn into_poly(self, ctx: &EvalContext) -> Result<CoefPoly, ExprError> {
        match self {
            Value::Poly(p) => Ok(p),
            Value::Gen(g, pos) => resolve_gen_power(ctx, g, 1, pos),
        }
    }
}

fn resolve_gen_power(
    ctx: &EvalContext,
    gen: usize,
    e: u64,
    pos: Pos,
) -> Result<CoefPoly, ExprError> {
    let var = match ctx.table.central_var_of(gen) {
        Some(v) => v,
        None => return err(pos, "generator has no central power in this context"),
    };
    let power = match ctx.table.role(var) {
        crate::poly::VarRole::CentralGen { power, .. } => *power,
        _ => unreachable!("central_var_of returns CentralGen"),
    };
    if e % power != 0 {
        return err(
            pos,
            format!("generator power {e} is not a multiple of the central power {power}"),
        );
    }
    Ok(CoefPoly::var_pow(
        ctx.table.clone(),
        var,
        (e / power) as u32,
        ctx.conductor,
    ))
}

fn eval(ast: &Ast, ctx: &EvalContext) -> Result<Value, ExprError> {
    match ast {
        Ast::Int(n, _) => Ok(Value::Poly(CoefPoly::constant(
            ctx.table.clone(),
            CycloNumber::from_rat(Rat::from_integer(n.clone()), ctx.conductor),
        ))),
        Ast::Var(name, pos) => {
            // Generator names win: `x1` written in a document always means
            // the algebra generator, whose central power is a table variable.
            if let Some(&g) = ctx.generators.get(name) {
                Ok(Value::Gen(g, *pos))
            } else if let Some(idx) = ctx.table.index_of(name) {
                Ok(Value::Poly(CoefPoly::var(
                    ctx.table.clone(),
                    idx,
                    ctx.conductor,
                )))
            } else {
                err(*pos, format!("unknown variable `{name}`"))
            }
        }
        Ast::Zeta(arg, pos) => {
            let n = eval_integer(arg, ctx)?;
            if n <= 0 {
                return err(*pos, "zeta order must be positive");
            }
            let n = n as u64;
            if ctx.conductor % n != 0 {
                return err(
                    *pos,
                    format!(
                        "incompatible conductor: zeta({n}) does not lie in Q(zeta_{})",
                        ctx.conductor
                    ),
                );
            }
            let z = CycloNumber::zeta_power(n, 1)
                .lift(ctx.conductor)
                .expect("conductor multiple");
            Ok(Value::Poly(CoefPoly::constant(ctx.table.clone(), z)))
        }
        Ast::Neg(inner, _) => {
            let v = eval(inner, ctx)?.into_poly(ctx)?;
            Ok(Value::Poly(v.neg()))
        }
        Ast::Add(a, b, _) => {
            let a = eval(a, ctx)?.into_poly(ctx)?;
            let b = eval(b, ctx)?.into_poly(ctx)?;
            Ok(Value::Poly(a.add(&b)))
        }
        Ast::Sub(a, b, _) => {
            let a = eval(a, ctx)?.into_poly(ctx)?;
            let b = eval(b, ctx)?.into_poly(ctx)?;
            Ok(Value::Poly(a.sub(&b)))
        }
        Ast::Mul(a, b, _) => {
            let a = eval(a, ctx)?.into_poly(ctx)?;
            let b = eval(b, ctx)?.into_poly(ctx)?;
            Ok(Value::Poly(a.mul(&b)))
        }
        Ast::Div(a, b, pos) => {
            let a = eval(a, ctx)?.into_poly(ctx)?;
            let b = eval(b, ctx)?.into_poly(ctx)?;
            if !b.is_constant() {
                return err(*pos, "division is only defined by nonzero scalars");
            }
            let c = b.constant_value();
            if c.is_zero() {
                return err(*pos, "division by zero");
            }
            Ok(Value::Poly(
                a.mul_scalar(&c.inverse().expect("nonzero scalar")),
            ))
        }
        Ast::Pow(base, exp, pos) => {
            let e = eval_integer(exp, ctx)?;
            if e < 0 {
                return err(*pos, "negative exponents are not supported");
            }
            match eval(base, ctx)? {
                Value::Poly(p) => Ok(Value::Poly(p.pow(e as u64))),
                Value::Gen(g, gpos) => Ok(Value::Poly(resolve_gen_power(ctx, g, e as u64, gpos)?)),
            }
        }
    }
}

fn eval_integer(ast: &Ast, ctx: &EvalContext) -> Result<i64, ExprError> {
    let v = eval(ast, ctx)?.into_poly(ctx)?;
    let pos = ast.pos();
    if !v.is_constant() {
        return err(pos, "expected an integer, found a polynomial");
    }
    let c = v.constant_value();
    let r = match c.as_rat() {
        Some(r) => r,
        None => return err(pos, "expected an integer, found a cyclotomic scalar"),
    };
    if !r.is_integer() {
        return err(pos, "expected an integer, found a fraction");
    }
    r.to_integer()
        .to_i64()
        .ok_or(())
        .or_else(|_| err(pos, "integer out of range"))
}

/// Parses and evaluates a polynomial over the given context.
pub fn eval_polynomial(src: &str, ctx: &EvalContext) -> Result<CoefPoly, ExprError> {
    eval_polynomial_at(src, ctx, Pos { line: 1, col: 1 })
}

pub fn eval_polynomial_at(src: &str, ctx: &EvalContext, start: Pos) -> Result<CoefPoly, ExprError> {
    let ast = parse_expression_at(src, start)?;
    eval(&ast, ctx)?.into_poly(ctx)
}

/// Parses a scalar (constant polynomial) expression.
pub fn eval_scalar(src: &str, conductor: u64) -> Result<CycloNumber, ExprError> {
    let ctx = EvalContext::plain(VarTable::empty(), conductor);
    let p = eval_polynomial(src, &ctx)?;
    Ok(p.constant_value())
}

/// Collects every `zeta(N)` order appearing in an expression, so sessions
/// can pick a conductor before evaluation.
pub fn zeta_orders(ast: &Ast) -> Vec<i64> {
    let mut out = Vec::new();
    collect_zeta(ast, &mut out);
    out
}

fn collect_zeta(ast: &Ast, out: &mut Vec<i64>) {
    match ast {
        Ast::Int(..) | Ast::Var(..) => {}
        Ast::Zeta(arg, _) => {
            if let Ast::Int(n, _) = arg.as_ref() {
                if let Some(v) = n.to_i64() {
                    out.push(v);
                }
            }
            collect_zeta(arg, out);
        }
        Ast::Neg(a, _) => collect_zeta(a, out),
        Ast::Add(a, b, _)
        | Ast::Sub(a, b, _)
        | Ast::Mul(a, b, _)
        | Ast::Div(a, b, _)
        | Ast::Pow(a, b, _) => {
            collect_zeta(a, out);
            collect_zeta(b, out);
        }
    }
}
