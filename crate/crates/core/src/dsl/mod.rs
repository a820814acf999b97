//! Kernel expressions and problem files.

pub mod expr;
pub mod parser;
pub mod problem;

pub use expr::{BinOp, Bindings, EvalError, Expr, Func, Variable};
pub use parser::{parse_expr, Field, ParseError, ParseErrorKind};
pub use problem::{load_problem, Builtin, ComponentSpec, MethodChoice, OutputSpec, Problem, ProblemSpec, SolverSpec};
