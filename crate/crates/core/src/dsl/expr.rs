use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variable {
    /// The right variable `t`.
    T,
    /// The left variable `t'`, spelled `tp`.
    Tp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Sqrt,
}

impl Func {
    pub const ALL: [Func; 4] = [Func::Sin, Func::Cos, Func::Exp, Func::Sqrt];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Number(f64),
    ImaginaryUnit,
    Param(String),
    Var(Variable),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

/// Values for the free names of an expression.
#[derive(Debug, Clone, Copy, Default)]
pub struct Bindings<'a> {
    pub t: Option<f64>,
    pub tp: Option<f64>,
    pub params: Option<&'a BTreeMap<String, f64>>,
}

impl<'a> Bindings<'a> {
    pub fn new(params: &'a BTreeMap<String, f64>) -> Self {
        Self { t: None, tp: None, params: Some(params) }
    }

    pub fn at(self, tp: f64, t: f64) -> Self {
        Self { t: Some(t), tp: Some(tp), ..self }
    }

    pub fn with_t(self, t: f64) -> Self {
        Self { t: Some(t), ..self }
    }

    pub fn with_tp(self, tp: f64) -> Self {
        Self { tp: Some(tp), ..self }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("unbound name `{0}`")]
    Unbound(String),
    #[error("division by zero in `{0}`")]
    DivisionByZero(String),
    #[error("`{0}` is outside the domain of the real field")]
    Domain(String),
    #[error("`{0}` evaluates to a non-finite value")]
    NonFinite(String),
    #[error("the imaginary unit is not available in the real field")]
    ImaginaryInRealField,
}

impl Expr {
    pub fn number(x: f64) -> Self {
        Expr::Number(x)
    }

    pub fn binary(op: BinOp, l: Expr, r: Expr) -> Self {
        Expr::Binary(op, Box::new(l), Box::new(r))
    }

    /// Parameter names, excluding `t`, `tp` and the imaginary unit.
    pub fn free_params(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |e| {
            if let Expr::Param(name) = e {
                out.insert(name.clone());
            }
        });
        out
    }

    pub fn uses(&self, v: Variable) -> bool {
        let mut found = false;
        self.visit(&mut |e| found |= *e == Expr::Var(v));
        found
    }

    fn visit(&self, f: &mut impl FnMut(&Expr)) {
        f(self);
        match self {
            Expr::Neg(e) | Expr::Call(_, e) => e.visit(f),
            Expr::Binary(_, l, r) => {
                l.visit(f);
                r.visit(f);
            }
            Expr::Number(_) | Expr::ImaginaryUnit | Expr::Param(_) | Expr::Var(_) => {}
        }
    }

    /// Evaluates left to right over the tree; every intermediate must be finite.
    pub fn eval<S: Scalar>(&self, b: &Bindings<'_>) -> Result<S, EvalError> {
        let v = match self {
            Expr::Number(x) => S::from_real(*x),
            Expr::ImaginaryUnit => S::imaginary_unit().ok_or(EvalError::ImaginaryInRealField)?,
            Expr::Param(name) => S::from_real(
                *b.params.and_then(|p| p.get(name)).ok_or_else(|| EvalError::Unbound(name.clone()))?,
            ),
            Expr::Var(Variable::T) => S::from_real(b.t.ok_or_else(|| EvalError::Unbound("t".into()))?),
            Expr::Var(Variable::Tp) => S::from_real(b.tp.ok_or_else(|| EvalError::Unbound("tp".into()))?),
            // `0 - x` keeps imaginary zeros positive, off the branch cuts
            Expr::Neg(e) => S::zero() - e.eval::<S>(b)?,
            Expr::Binary(op, l, r) => {
                let (x, y) = (l.eval::<S>(b)?, r.eval::<S>(b)?);
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => {
                        if y.modulus() == 0.0 {
                            return Err(EvalError::DivisionByZero(self.to_string()));
                        }
                        x / y
                    }
                    BinOp::Pow => {
                        if S::FIELD == "real" && x.re() < 0.0 && y.re().fract() != 0.0 {
                            return Err(EvalError::Domain(self.to_string()));
                        }
                        x.pow(y)
                    }
                }
            }
            Expr::Call(func, e) => {
                let x = e.eval::<S>(b)?;
                match func {
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Exp => x.exp(),
                    Func::Sqrt => {
                        if S::FIELD == "real" && x.re() < 0.0 {
                            return Err(EvalError::Domain(self.to_string()));
                        }
                        x.sqrt()
                    }
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(EvalError::NonFinite(self.to_string()))
        }
    }
}

/// Fully parenthesized, so that printing and re-parsing reproduce the tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Number(x) => write!(f, "{x}"),
            Expr::ImaginaryUnit => f.write_str("i"),
            Expr::Param(name) => f.write_str(name),
            Expr::Var(Variable::T) => f.write_str("t"),
            Expr::Var(Variable::Tp) => f.write_str("tp"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Binary(op, l, r) => {
                let sym = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                    BinOp::Pow => "^",
                };
                write!(f, "({l} {sym} {r})")
            }
            Expr::Call(func, e) => write!(f, "{}({e})", func.name()),
        }
    }
}
