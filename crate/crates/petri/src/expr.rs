//! The expression language used by conditions and expression bodies.
//!
//! Conditions are boolean expressions over in-port values. Bodies are
//! `;`-separated assignments `${port.field} := expr`; right-hand sides read
//! in-ports, left-hand sides write out-ports. All right-hand sides see the
//! values bound to the in-ports, never an earlier assignment.

use std::fmt;

use thiserror::Error;

use crate::types::{ColorType, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{msg} at offset {pos}")]
pub struct ExprError {
    pub pos: usize,
    pub msg: String,
}

impl ExprError {
    fn new(pos: usize, msg: impl Into<String>) -> Self {
        Self { pos, msg: msg.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("integer overflow in `{0}`")]
    Overflow(&'static str),
    #[error("{0} of an empty list")]
    EmptyList(&'static str),
    #[error("no value bound to port `{0}`")]
    UnboundPort(String),
    #[error("value has no field `{0}`")]
    MissingField(String),
    #[error("operand of `{0}` has the wrong type")]
    Type(&'static str),
}

/// `${port.field.field}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    pub port: String,
    pub fields: Vec<String>,
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "${{{}", self.port)?;
        for fd in &self.fields {
            write!(f, ".{fd}")?;
        }
        f.write_str("}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Eq => ":eq:",
            BinOp::Ne => ":ne:",
            BinOp::Lt => ":lt:",
            BinOp::Le => ":le:",
            BinOp::Gt => ":gt:",
            BinOp::Ge => ":ge:",
            BinOp::And => ":and:",
            BinOp::Or => ":or:",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Head,
    Tail,
    Empty,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Int(i64),
    Bool(bool),
    Path(Path),
    Neg(Box<Expr>),
    Not(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
    List(Vec<Expr>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Assign {
    pub target: Path,
    pub value: Expr,
    pub pos: usize,
}

/// A parsed expression body.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Program {
    pub assigns: Vec<Assign>,
}

// ---------------------------------------------------------------- lexer

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(i64),
    Ident(String),
    Path(Path),
    Op(BinOp),
    Not,
    Minus,
    Assign,
    Semi,
    Comma,
    LParen,
    RParen,
    LBrack,
    RBrack,
}

fn is_ident_start(c: u8) -> bool {
    c.is_ascii_alphabetic() || c == b'_'
}

fn is_ident_char(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_'
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let b = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let ident = |i: &mut usize| -> Option<String> {
        if *i < b.len() && is_ident_start(b[*i]) {
            let start = *i;
            while *i < b.len() && is_ident_char(b[*i]) {
                *i += 1;
            }
            Some(src[start..*i].to_string())
        } else {
            None
        }
    };
    while i < b.len() {
        let c = b[i];
        let pos = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            b'$' => {
                if b.get(i + 1) != Some(&b'{') {
                    return Err(ExprError::new(pos, "expected `{` after `$`"));
                }
                i += 2;
                let port = ident(&mut i).ok_or_else(|| ExprError::new(i, "expected port name"))?;
                let mut fields = Vec::new();
                while i < b.len() && b[i] == b'.' {
                    i += 1;
                    fields.push(ident(&mut i).ok_or_else(|| ExprError::new(i, "expected field name"))?);
                }
                if b.get(i) != Some(&b'}') {
                    return Err(ExprError::new(i, "expected `}`"));
                }
                i += 1;
                Tok::Path(Path { port, fields })
            }
            b'0'..=b'9' => {
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                let n = src[pos..i]
                    .parse::<i64>()
                    .map_err(|_| ExprError::new(pos, "integer literal out of range"))?;
                Tok::Int(n)
            }
            b':' => {
                if b.get(i + 1) == Some(&b'=') {
                    i += 2;
                    Tok::Assign
                } else {
                    i += 1;
                    let word = ident(&mut i).ok_or_else(|| ExprError::new(pos, "expected operator after `:`"))?;
                    if b.get(i) != Some(&b':') {
                        return Err(ExprError::new(i, "expected closing `:`"));
                    }
                    i += 1;
                    match word.as_str() {
                        "eq" => Tok::Op(BinOp::Eq),
                        "ne" => Tok::Op(BinOp::Ne),
                        "lt" => Tok::Op(BinOp::Lt),
                        "le" => Tok::Op(BinOp::Le),
                        "gt" => Tok::Op(BinOp::Gt),
                        "ge" => Tok::Op(BinOp::Ge),
                        "and" => Tok::Op(BinOp::And),
                        "or" => Tok::Op(BinOp::Or),
                        "not" => Tok::Not,
                        other => return Err(ExprError::new(pos, format!("unknown operator `:{other}:`"))),
                    }
                }
            }
            b'+' => {
                i += 1;
                Tok::Op(BinOp::Add)
            }
            b'-' => {
                i += 1;
                Tok::Minus
            }
            b'*' => {
                i += 1;
                Tok::Op(BinOp::Mul)
            }
            b';' => {
                i += 1;
                Tok::Semi
            }
            b',' => {
                i += 1;
                Tok::Comma
            }
            b'(' => {
                i += 1;
                Tok::LParen
            }
            b')' => {
                i += 1;
                Tok::RParen
            }
            b'[' => {
                i += 1;
                Tok::LBrack
            }
            b']' => {
                i += 1;
                Tok::RBrack
            }
            c if is_ident_start(c) => Tok::Ident(ident(&mut i).unwrap_or_default()),
            _ => {
                let ch = src[pos..].chars().next().unwrap_or('?');
                return Err(ExprError::new(pos, format!("unexpected character `{ch}`")));
            }
        };
        out.push((tok, pos));
    }
    Ok(out)
}

// ---------------------------------------------------------------- parser

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self, ExprError> {
        Ok(Self {
            toks: lex(src)?,
            at: 0,
            end: src.len(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(_, p)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(t, _)| t.clone());
        self.at += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ExprError> {
        if self.peek() == Some(&want) {
            self.at += 1;
            Ok(())
        } else {
            Err(ExprError::new(self.pos(), format!("expected {what}")))
        }
    }

    fn binary(
        &mut self,
        ops: &[BinOp],
        next: fn(&mut Self) -> Result<Expr, ExprError>,
    ) -> Result<Expr, ExprError> {
        let mut lhs = next(self)?;
        loop {
            let op = match self.peek() {
                Some(Tok::Op(op)) if ops.contains(op) => *op,
                Some(Tok::Minus) if ops.contains(&BinOp::Sub) => BinOp::Sub,
                _ => return Ok(lhs),
            };
            let pos = self.pos();
            self.at += 1;
            let rhs = next(self)?;
            lhs = Expr {
                kind: ExprKind::Bin(op, Box::new(lhs), Box::new(rhs)),
                pos,
            };
        }
    }

    fn or(&mut self) -> Result<Expr, ExprError> {
        self.binary(&[BinOp::Or], Self::and)
    }

    fn and(&mut self) -> Result<Expr, ExprError> {
        self.binary(&[BinOp::And], Self::not)
    }

    fn not(&mut self) -> Result<Expr, ExprError> {
        if self.peek() == Some(&Tok::Not) {
            let pos = self.pos();
            self.at += 1;
            let e = self.not()?;
            return Ok(Expr {
                kind: ExprKind::Not(Box::new(e)),
                pos,
            });
        }
        self.cmp()
    }

    fn cmp(&mut self) -> Result<Expr, ExprError> {
        let lhs = self.add()?;
        let op = match self.peek() {
            Some(Tok::Op(op @ (BinOp::Eq | BinOp::Ne | BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge))) => *op,
            _ => return Ok(lhs),
        };
        let pos = self.pos();
        self.at += 1;
        let rhs = self.add()?;
        if let Some(Tok::Op(BinOp::Eq | BinOp::Ne | BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge)) = self.peek() {
            return Err(ExprError::new(self.pos(), "comparisons do not chain"));
        }
        Ok(Expr {
            kind: ExprKind::Bin(op, Box::new(lhs), Box::new(rhs)),
            pos,
        })
    }

    fn add(&mut self) -> Result<Expr, ExprError> {
        self.binary(&[BinOp::Add, BinOp::Sub], Self::mul)
    }

    fn mul(&mut self) -> Result<Expr, ExprError> {
        self.binary(&[BinOp::Mul], Self::unary)
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.peek() == Some(&Tok::Minus) {
            let pos = self.pos();
            self.at += 1;
            let e = self.unary()?;
            return Ok(Expr {
                kind: ExprKind::Neg(Box::new(e)),
                pos,
            });
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr, ExprError> {
        let pos = self.pos();
        let kind = match self.bump() {
            Some(Tok::Int(n)) => ExprKind::Int(n),
            Some(Tok::Path(p)) => ExprKind::Path(p),
            Some(Tok::LParen) => {
                let e = self.or()?;
                self.expect(Tok::RParen, "`)`")?;
                return Ok(e);
            }
            Some(Tok::LBrack) => {
                let mut items = Vec::new();
                if self.peek() != Some(&Tok::RBrack) {
                    loop {
                        items.push(self.or()?);
                        if self.peek() == Some(&Tok::Comma) {
                            self.at += 1;
                        } else {
                            break;
                        }
                    }
                }
                self.expect(Tok::RBrack, "`]`")?;
                ExprKind::List(items)
            }
            Some(Tok::Ident(name)) => match name.as_str() {
                "true" => ExprKind::Bool(true),
                "false" => ExprKind::Bool(false),
                "head" | "tail" | "empty" => {
                    let f = match name.as_str() {
                        "head" => Func::Head,
                        "tail" => Func::Tail,
                        _ => Func::Empty,
                    };
                    self.expect(Tok::LParen, "`(`")?;
                    let arg = self.or()?;
                    self.expect(Tok::RParen, "`)`")?;
                    ExprKind::Call(f, Box::new(arg))
                }
                other => return Err(ExprError::new(pos, format!("unknown identifier `{other}`"))),
            },
            Some(_) => return Err(ExprError::new(pos, "expected an expression")),
            None => return Err(ExprError::new(pos, "unexpected end of input")),
        };
        Ok(Expr { kind, pos })
    }
}

/// Parses a single expression, e.g. a condition.
pub fn parse_expr(src: &str) -> Result<Expr, ExprError> {
    let mut p = Parser::new(src)?;
    let e = p.or()?;
    if p.peek().is_some() {
        return Err(ExprError::new(p.pos(), "trailing input"));
    }
    Ok(e)
}

/// Parses an assignment list. The empty string is the empty program.
pub fn parse_program(src: &str) -> Result<Program, ExprError> {
    let mut p = Parser::new(src)?;
    let mut assigns = Vec::new();
    while p.peek().is_some() {
        if p.peek() == Some(&Tok::Semi) {
            p.at += 1;
            continue;
        }
        let pos = p.pos();
        let target = match p.bump() {
            Some(Tok::Path(path)) => path,
            _ => return Err(ExprError::new(pos, "expected an assignment target")),
        };
        p.expect(Tok::Assign, "`:=`")?;
        let value = p.or()?;
        assigns.push(Assign { target, value, pos });
        match p.peek() {
            None | Some(Tok::Semi) => {}
            _ => return Err(ExprError::new(p.pos(), "expected `;`")),
        }
    }
    Ok(Program { assigns })
}

// ---------------------------------------------------------------- typing

#[derive(Debug, Clone, PartialEq)]
enum Ty {
    Known(ColorType),
    /// `[]`, which fits any list type.
    EmptyList,
}

impl Ty {
    fn describe(&self) -> String {
        match self {
            Ty::Known(t) => t.to_string(),
            Ty::EmptyList => "list<?>".into(),
        }
    }

    fn is(&self, t: &ColorType) -> bool {
        matches!(self, Ty::Known(k) if k == t)
    }
}

fn unify(a: &Ty, b: &Ty) -> Option<Ty> {
    match (a, b) {
        (Ty::EmptyList, Ty::EmptyList) => Some(Ty::EmptyList),
        (Ty::EmptyList, Ty::Known(t @ ColorType::List { .. })) | (Ty::Known(t @ ColorType::List { .. }), Ty::EmptyList) => {
            Some(Ty::Known(t.clone()))
        }
        (Ty::Known(x), Ty::Known(y)) if x == y => Some(a.clone()),
        _ => None,
    }
}

fn resolve<'a>(path: &Path, root: &'a ColorType, pos: usize) -> Result<&'a ColorType, ExprError> {
    let mut ty = root;
    for f in &path.fields {
        ty = ty
            .field(f)
            .ok_or_else(|| ExprError::new(pos, format!("`{path}`: type {ty} has no field `{f}`")))?;
    }
    Ok(ty)
}

/// Named, typed ports visible to an expression.
pub type PortTypes<'a> = &'a [(String, ColorType)];

fn lookup<'a>(ports: PortTypes<'a>, name: &str) -> Option<&'a ColorType> {
    ports.iter().find(|(n, _)| n == name).map(|(_, t)| t)
}

impl Expr {
    fn infer(&self, inputs: PortTypes<'_>) -> Result<Ty, ExprError> {
        let err = |msg: String| Err(ExprError::new(self.pos, msg));
        match &self.kind {
            ExprKind::Int(_) => Ok(Ty::Known(ColorType::Int)),
            ExprKind::Bool(_) => Ok(Ty::Known(ColorType::Bool)),
            ExprKind::Path(p) => {
                let root = lookup(inputs, &p.port)
                    .ok_or_else(|| ExprError::new(self.pos, format!("unknown in-port `{}`", p.port)))?;
                Ok(Ty::Known(resolve(p, root, self.pos)?.clone()))
            }
            ExprKind::Neg(e) => {
                let t = e.infer(inputs)?;
                if t.is(&ColorType::Int) {
                    Ok(t)
                } else {
                    err(format!("unary `-` needs int, found {}", t.describe()))
                }
            }
            ExprKind::Not(e) => {
                let t = e.infer(inputs)?;
                if t.is(&ColorType::Bool) {
                    Ok(t)
                } else {
                    err(format!("`:not:` needs bool, found {}", t.describe()))
                }
            }
            ExprKind::Bin(op, a, b) => {
                let (ta, tb) = (a.infer(inputs)?, b.infer(inputs)?);
                let (want, result) = match op {
                    BinOp::Add | BinOp::Sub | BinOp::Mul => (Some(ColorType::Int), ColorType::Int),
                    BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => (Some(ColorType::Int), ColorType::Bool),
                    BinOp::And | BinOp::Or => (Some(ColorType::Bool), ColorType::Bool),
                    BinOp::Eq | BinOp::Ne => (None, ColorType::Bool),
                };
                match want {
                    Some(w) if !(ta.is(&w) && tb.is(&w)) => err(format!(
                        "`{}` needs {w} operands, found {} and {}",
                        op.symbol(),
                        ta.describe(),
                        tb.describe()
                    )),
                    None if unify(&ta, &tb).is_none() => err(format!(
                        "`{}` compares {} with {}",
                        op.symbol(),
                        ta.describe(),
                        tb.describe()
                    )),
                    _ => Ok(Ty::Known(result)),
                }
            }
            ExprKind::Call(f, arg) => {
                let t = arg.infer(inputs)?;
                let elem = match &t {
                    Ty::Known(ColorType::List { elem }) => Some((**elem).clone()),
                    Ty::EmptyList => None,
                    other => return err(format!("{f:?} needs a list, found {}", other.describe()).to_lowercase()),
                };
                match f {
                    Func::Empty => Ok(Ty::Known(ColorType::Bool)),
                    Func::Tail => Ok(t),
                    Func::Head => match elem {
                        Some(e) => Ok(Ty::Known(e)),
                        None => err("head of a literal empty list".into()),
                    },
                }
            }
            ExprKind::List(items) => {
                let mut acc: Option<Ty> = None;
                for item in items {
                    let t = item.infer(inputs)?;
                    let t = match t {
                        Ty::Known(t) => t,
                        Ty::EmptyList => {
                            return Err(ExprError::new(item.pos, "nested empty list literal needs a type"));
                        }
                    };
                    match &acc {
                        Some(Ty::Known(prev)) if prev != &t => {
                            return Err(ExprError::new(item.pos, format!("list mixes {prev} and {t}")));
                        }
                        _ => acc = Some(Ty::Known(t)),
                    }
                }
                Ok(match acc {
                    Some(Ty::Known(e)) => Ty::Known(ColorType::list(e)),
                    _ => Ty::EmptyList,
                })
            }
        }
    }

    /// Type checks a condition: it must be a bool over the given in-ports.
    pub fn check_condition(&self, inputs: PortTypes<'_>) -> Result<(), ExprError> {
        let t = self.infer(inputs)?;
        if t.is(&ColorType::Bool) {
            Ok(())
        } else {
            Err(ExprError::new(self.pos, format!("condition has type {}, expected bool", t.describe())))
        }
    }

    /// Evaluates against a binding of in-port names to values.
    pub fn eval(&self, env: &[(&str, &Value)]) -> Result<Value, EvalError> {
        match &self.kind {
            ExprKind::Int(n) => Ok(Value::Int(*n)),
            ExprKind::Bool(b) => Ok(Value::Bool(*b)),
            ExprKind::Path(p) => {
                let mut v = env
                    .iter()
                    .find(|(n, _)| *n == p.port)
                    .map(|(_, v)| *v)
                    .ok_or_else(|| EvalError::UnboundPort(p.port.clone()))?;
                for f in &p.fields {
                    v = v.field(f).ok_or_else(|| EvalError::MissingField(f.clone()))?;
                }
                Ok(v.clone())
            }
            ExprKind::Neg(e) => {
                let n = e.eval(env)?.as_int().ok_or(EvalError::Type("-"))?;
                n.checked_neg().map(Value::Int).ok_or(EvalError::Overflow("-"))
            }
            ExprKind::Not(e) => Ok(Value::Bool(!e.eval(env)?.as_bool().ok_or(EvalError::Type(":not:"))?)),
            ExprKind::Bin(op, a, b) => {
                let (x, y) = (a.eval(env)?, b.eval(env)?);
                let ints = || match (x.as_int(), y.as_int()) {
                    (Some(p), Some(q)) => Ok((p, q)),
                    _ => Err(EvalError::Type(op.symbol())),
                };
                let bools = || match (x.as_bool(), y.as_bool()) {
                    (Some(p), Some(q)) => Ok((p, q)),
                    _ => Err(EvalError::Type(op.symbol())),
                };
                let arith = |r: Option<i64>| r.map(Value::Int).ok_or(EvalError::Overflow(op.symbol()));
                match op {
                    BinOp::Add => ints().and_then(|(p, q)| arith(p.checked_add(q))),
                    BinOp::Sub => ints().and_then(|(p, q)| arith(p.checked_sub(q))),
                    BinOp::Mul => ints().and_then(|(p, q)| arith(p.checked_mul(q))),
                    BinOp::Lt => ints().map(|(p, q)| Value::Bool(p < q)),
                    BinOp::Le => ints().map(|(p, q)| Value::Bool(p <= q)),
                    BinOp::Gt => ints().map(|(p, q)| Value::Bool(p > q)),
                    BinOp::Ge => ints().map(|(p, q)| Value::Bool(p >= q)),
                    BinOp::And => bools().map(|(p, q)| Value::Bool(p && q)),
                    BinOp::Or => bools().map(|(p, q)| Value::Bool(p || q)),
                    BinOp::Eq => Ok(Value::Bool(x == y)),
                    BinOp::Ne => Ok(Value::Bool(x != y)),
                }
            }
            ExprKind::Call(f, arg) => {
                let v = arg.eval(env)?;
                let items = match v {
                    Value::List(items) => items,
                    _ => return Err(EvalError::Type("list function")),
                };
                match f {
                    Func::Empty => Ok(Value::Bool(items.is_empty())),
                    Func::Head => items.into_iter().next().ok_or(EvalError::EmptyList("head")),
                    Func::Tail => {
                        if items.is_empty() {
                            Err(EvalError::EmptyList("tail"))
                        } else {
                            Ok(Value::List(items[1..].to_vec()))
                        }
                    }
                }
            }
            ExprKind::List(items) => items.iter().map(|e| e.eval(env)).collect::<Result<_, _>>().map(Value::List),
        }
    }
}

/// Evaluates an expression against a binding.
pub fn eval(expr: &Expr, env: &[(&str, &Value)]) -> Result<Value, EvalError> {
    expr.eval(env)
}

/// Whether an out-port starts out holding the value of the same-named in-port.
fn inherits(name: &str, ty: &ColorType, inputs: PortTypes<'_>) -> bool {
    lookup(inputs, name) == Some(ty)
}

fn complete(ty: &ColorType, prefix: &[String], assigned: &[&[String]]) -> bool {
    if assigned.contains(&prefix) {
        return true;
    }
    match ty {
        ColorType::Record { fields } => fields.iter().all(|f| {
            let mut p = prefix.to_vec();
            p.push(f.name.clone());
            complete(&f.ty, &p, assigned)
        }),
        _ => false,
    }
}

fn skeleton(ty: &ColorType) -> Value {
    match ty {
        ColorType::Record { fields } => Value::Record(fields.iter().map(|f| (f.name.clone(), Value::Unit)).collect()),
        _ => Value::Unit,
    }
}

fn set_path(slot: &mut Value, ty: &ColorType, fields: &[String], value: Value) {
    let Some((first, rest)) = fields.split_first() else {
        *slot = value;
        return;
    };
    if !matches!(slot, Value::Record(_)) {
        *slot = skeleton(ty);
    }
    if let (Some(fty), Some(v)) = (ty.field(first), slot.field_mut(first)) {
        set_path(v, fty, rest, value);
    }
}

impl Program {
    /// Checks reads against `inputs`, writes against `outputs`, and that
    /// every out-port ends up with a value.
    pub fn check(&self, inputs: PortTypes<'_>, outputs: PortTypes<'_>) -> Vec<ExprError> {
        let mut errs = Vec::new();
        for a in &self.assigns {
            let Some(root) = lookup(outputs, &a.target.port) else {
                errs.push(ExprError::new(a.pos, format!("unknown out-port `{}`", a.target.port)));
                continue;
            };
            let target = match resolve(&a.target, root, a.pos) {
                Ok(t) => t,
                Err(e) => {
                    errs.push(e);
                    continue;
                }
            };
            match a.value.infer(inputs) {
                Ok(t) if unify(&t, &Ty::Known(target.clone())).is_some() => {}
                Ok(t) => errs.push(ExprError::new(
                    a.value.pos,
                    format!("cannot assign {} to `{}` of type {target}", t.describe(), a.target),
                )),
                Err(e) => errs.push(e),
            }
        }
        for (name, ty) in outputs {
            if *ty == ColorType::Unit || inherits(name, ty, inputs) {
                continue;
            }
            let assigned: Vec<&[String]> = self
                .assigns
                .iter()
                .filter(|a| &a.target.port == name)
                .map(|a| a.target.fields.as_slice())
                .collect();
            if !complete(ty, &[], &assigned) {
                errs.push(ExprError::new(0, format!("out-port `{name}` is not fully assigned")));
            }
        }
        errs
    }

    /// Runs the assignments and returns one value per out-port, in order.
    pub fn run(&self, env: &[(&str, &Value)], outputs: PortTypes<'_>) -> Result<Vec<Value>, EvalError> {
        let mut slots: Vec<Option<Value>> = outputs
            .iter()
            .map(|(name, ty)| match env.iter().find(|(n, _)| n == name) {
                Some((_, v)) if v.conforms(ty) => Some((*v).clone()),
                _ if *ty == ColorType::Unit => Some(Value::Unit),
                _ => None,
            })
            .collect();
        let values = self
            .assigns
            .iter()
            .map(|a| a.value.eval(env))
            .collect::<Result<Vec<_>, _>>()?;
        for (a, v) in self.assigns.iter().zip(values) {
            let idx = outputs
                .iter()
                .position(|(n, _)| *n == a.target.port)
                .ok_or_else(|| EvalError::UnboundPort(a.target.port.clone()))?;
            let slot = slots[idx].get_or_insert(Value::Unit);
            set_path(slot, &outputs[idx].1, &a.target.fields, v);
        }
        slots
            .into_iter()
            .zip(outputs)
            .map(|(s, (n, _))| s.ok_or_else(|| EvalError::UnboundPort(n.clone())))
            .collect()
    }
}
