//! Problem files: grid, field, inhomogeneity, components and solver settings.
//!
//! ```json
//! {
//!   "grid": {"t_min": 0, "t_max": 1, "n": 801},
//!   "field": "complex",
//!   "g": {"delta": 1, "smooth": "0"},
//!   "components": [
//!     {"separable": {"a": "-(i/2)*f1*sin(w*tp)", "b": "1"}},
//!     {"numeric": {"k": "exp(-(tp - t))"}},
//!     {"builtin": {"name": "constant_ab", "params": {"a": 1, "b": 2}}}
//!   ],
//!   "solver": {"orders": 8, "method": "both"},
//!   "params": {"f1": 1, "w": 1},
//!   "output": {"stride": 1}
//! }
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::expr::{Bindings, Expr, Variable};
use super::parser::{parse_expr, Field};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::resolvent::{Component, SeparableComponent, SeriesConfig, SumKernel};
use crate::scalar::Scalar;
use crate::star::{GeneralizedKernel, OneVariableFunction, TriangularField};
use crate::validation::{heun_build_kernel, ConstantKernelOracle, HeunProblem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodChoice {
    Neumann,
    #[default]
    Resummed,
    Both,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSpec {
    /// Maximum number of series orders.
    pub orders: usize,
    pub method: MethodChoice,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_neumann_terms: usize,
    /// Product order of the component resolvents; identity when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<usize>>,
}

impl Default for SolverSpec {
    fn default() -> Self {
        let cfg = SeriesConfig::default();
        Self {
            orders: 8,
            method: MethodChoice::default(),
            abs_tol: cfg.abs_tol,
            rel_tol: cfg.rel_tol,
            max_neumann_terms: cfg.max_neumann_terms,
            order: None,
        }
    }
}

impl SolverSpec {
    pub fn config(&self) -> SeriesConfig {
        SeriesConfig {
            abs_tol: self.abs_tol,
            rel_tol: self.rel_tol,
            max_neumann_terms: self.max_neumann_terms,
            ..SeriesConfig::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSpec {
    /// Write every `stride`-th node in each direction.
    pub stride: usize,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self { stride: 1 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Builtin {
    /// `aΘ + bΘ` as two separable constants.
    ConstantAb { a: f64, b: f64 },
    /// The driven two-level system kernel; needs `t_min = 0` and the complex field.
    HeunXieHai { f1: f64, nu: f64, omega: f64 },
}

impl Builtin {
    pub const NAMES: [&'static str; 2] = ["constant_ab", "heun_xie_hai"];
}

#[derive(Debug, Clone, PartialEq)]
pub enum ComponentSpec {
    /// `a(t') b(t)`.
    Separable { a: Expr, b: Expr },
    /// `k(t', t)` sampled on the grid.
    Numeric { k: Expr },
    Builtin(Builtin),
}

/// A validated problem file.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub grid: Grid,
    pub field: Field,
    pub g_delta: Expr,
    pub g_smooth: Expr,
    pub components: Vec<ComponentSpec>,
    pub solver: SolverSpec,
    pub params: BTreeMap<String, f64>,
    pub output: OutputSpec,
}

/// The discretized problem.
#[derive(Debug, Clone)]
pub struct Problem<S> {
    pub sum_kernel: SumKernel<S>,
    pub g: GeneralizedKernel<S>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    grid: RawGrid,
    field: Field,
    #[serde(default)]
    g: RawG,
    components: Vec<RawComponent>,
    #[serde(default)]
    solver: SolverSpec,
    #[serde(default)]
    params: BTreeMap<String, f64>,
    #[serde(default)]
    output: OutputSpec,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    t_min: f64,
    t_max: f64,
    n: usize,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawValue {
    Number(f64),
    Expr(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawG {
    #[serde(default = "unit_delta")]
    delta: RawValue,
    #[serde(default = "zero_smooth")]
    smooth: String,
}

fn unit_delta() -> RawValue {
    RawValue::Number(1.0)
}

fn zero_smooth() -> String {
    "0".into()
}

impl Default for RawG {
    fn default() -> Self {
        Self { delta: unit_delta(), smooth: zero_smooth() }
    }
}

#[derive(Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum RawComponent {
    Separable {
        a: String,
        b: String,
    },
    Numeric {
        k: String,
    },
    Builtin {
        name: String,
        #[serde(default)]
        params: BTreeMap<String, f64>,
    },
}

/// Reads and validates a problem file.
pub fn load_problem(path: impl AsRef<Path>) -> Result<ProblemSpec> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.display().to_string(), source })?;
    ProblemSpec::from_json(&text)
}

struct Checker<'a> {
    field: Field,
    params: &'a BTreeMap<String, f64>,
}

impl Checker<'_> {
    /// Parses `src` and checks that it uses only the allowed variables and declared parameters.
    fn expr(&self, path: &str, src: &str, allowed: &[Variable]) -> Result<Expr> {
        let e = parse_expr(src, self.field).map_err(|source| Error::Expression { path: path.into(), source })?;
        for v in [Variable::T, Variable::Tp] {
            if e.uses(v) && !allowed.contains(&v) {
                let name = if v == Variable::T { "t" } else { "tp" };
                let ok = match allowed {
                    [] => "no variables".to_string(),
                    [Variable::T] => "only `t`".to_string(),
                    [Variable::Tp] => "only `tp`".to_string(),
                    _ => "`t` and `tp`".to_string(),
                };
                return Err(Error::Schema { path: path.into(), message: format!("uses `{name}` but may depend on {ok}") });
            }
        }
        for name in e.free_params() {
            if !self.params.contains_key(&name) {
                let hint = if name == "i" && self.field == Field::Real {
                    " (the imaginary unit needs \"field\": \"complex\")"
                } else {
                    ""
                };
                return Err(Error::MissingParameter { path: path.into(), name, hint: hint.into() });
            }
        }
        Ok(e)
    }

    fn builtin(&self, path: &str, name: &str, local: &BTreeMap<String, f64>) -> Result<Builtin> {
        let get = |key: &str| -> Result<f64> {
            local.get(key).or_else(|| self.params.get(key)).copied().ok_or_else(|| Error::MissingParameter {
                path: format!("{path}.params"),
                name: key.into(),
                hint: String::new(),
            })
        };
        match name {
            "constant_ab" => Ok(Builtin::ConstantAb { a: get("a")?, b: get("b")? }),
            "heun_xie_hai" => {
                if self.field != Field::Complex {
                    return Err(Error::Schema { path: format!("{path}.name"), message: "heun_xie_hai needs \"field\": \"complex\"".into() });
                }
                Ok(Builtin::HeunXieHai { f1: get("f1")?, nu: get("nu")?, omega: get("omega")? })
            }
            other => Err(Error::Schema {
                path: format!("{path}.name"),
                message: format!("unknown builtin `{other}` (known: {})", Builtin::NAMES.join(", ")),
            }),
        }
    }
}

impl ProblemSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let raw: RawProblem = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::Schema { path: if path == "." { "<root>".into() } else { path }, message: e.into_inner().to_string() }
        })?;

        let grid = Grid::new(raw.grid.t_min, raw.grid.t_max, raw.grid.n)
            .map_err(|e| Error::Schema { path: "grid".into(), message: e.to_string() })?;
        let check = Checker { field: raw.field, params: &raw.params };
        let g_delta = match &raw.g.delta {
            RawValue::Number(x) => Expr::Number(*x),
            RawValue::Expr(src) => check.expr("g.delta", src, &[])?,
        };
        let g_smooth = check.expr("g.smooth", &raw.g.smooth, &[Variable::Tp, Variable::T])?;
        if raw.components.is_empty() {
            return Err(Error::Schema { path: "components".into(), message: "needs at least one component".into() });
        }
        let mut components = Vec::with_capacity(raw.components.len());
        for (k, c) in raw.components.iter().enumerate() {
            let path = format!("components[{k}]");
            components.push(match c {
                RawComponent::Separable { a, b } => ComponentSpec::Separable {
                    a: check.expr(&format!("{path}.separable.a"), a, &[Variable::Tp])?,
                    b: check.expr(&format!("{path}.separable.b"), b, &[Variable::T])?,
                },
                RawComponent::Numeric { k } => {
                    ComponentSpec::Numeric { k: check.expr(&format!("{path}.numeric.k"), k, &[Variable::Tp, Variable::T])? }
                }
                RawComponent::Builtin { name, params } => {
                    ComponentSpec::Builtin(check.builtin(&format!("{path}.builtin"), name, params)?)
                }
            });
        }
        if raw.solver.orders == 0 {
            return Err(Error::Schema { path: "solver.orders".into(), message: "must be at least 1".into() });
        }
        if raw.output.stride == 0 {
            return Err(Error::Schema { path: "output.stride".into(), message: "must be at least 1".into() });
        }
        Ok(Self {
            grid,
            field: raw.field,
            g_delta,
            g_smooth,
            components,
            solver: raw.solver,
            params: raw.params,
            output: raw.output,
        })
    }

    /// Samples every expression on the grid.
    ///
    /// `S` must match the declared field.
    pub fn build<S: Scalar>(&self) -> Result<Problem<S>> {
        let declared = match self.field {
            Field::Real => "real",
            Field::Complex => "complex",
        };
        if S::FIELD != declared {
            return Err(Error::Invalid(format!("problem is {declared} but was built over the {} field", S::FIELD)));
        }
        let grid = self.grid;
        let b = Bindings::new(&self.params);
        let at = |path: String| move |source: Error| Error::InProblem { path: path.clone(), source: Box::new(source) };

        let delta: S = self.g_delta.eval(&b).map_err(|source| Error::Evaluation { path: "g.delta".into(), source })?;
        let g = GeneralizedKernel::make_kernel(grid, delta, |tp, t| self.g_smooth.eval::<S>(&b.at(tp, t)))
            .map_err(at("g.smooth".into()))?;

        let mut components = Vec::new();
        for (k, c) in self.components.iter().enumerate() {
            let path = format!("components[{k}]");
            match c {
                ComponentSpec::Separable { a, b: bexpr } => {
                    let fa = OneVariableFunction::try_from_fn(grid, |tp| a.eval::<S>(&b.with_tp(tp)))
                        .map_err(at(format!("{path}.separable.a")))?;
                    let fb = OneVariableFunction::try_from_fn(grid, |t| bexpr.eval::<S>(&b.with_t(t)))
                        .map_err(at(format!("{path}.separable.b")))?;
                    components.push(Component::Separable(SeparableComponent::new(fa, fb)?));
                }
                ComponentSpec::Numeric { k } => {
                    let kernel = GeneralizedKernel::make_kernel(grid, S::zero(), |tp, t| k.eval::<S>(&b.at(tp, t)))
                        .map_err(at(format!("{path}.numeric.k")))?;
                    components.push(Component::Numeric(kernel));
                }
                ComponentSpec::Builtin(Builtin::ConstantAb { a, b }) => {
                    let sk = ConstantKernelOracle::new(*a, *b).sum_kernel(grid)?;
                    components.extend(sk.components().iter().map(|c| cast_component::<f64, S>(c)));
                }
                ComponentSpec::Builtin(Builtin::HeunXieHai { f1, nu, omega }) => {
                    if grid.t_min() != 0.0 {
                        return Err(Error::Schema {
                            path: format!("{path}.builtin"),
                            message: "heun_xie_hai needs grid.t_min = 0".into(),
                        });
                    }
                    let p = HeunProblem::new(*f1, *nu, *omega, grid.t_max(), grid.n_points()).map_err(at(path.clone()))?;
                    let sk = heun_build_kernel(&p);
                    components.extend(sk.components().iter().map(|c| cast_component::<Complex64, S>(c)));
                }
            }
        }
        Ok(Problem { sum_kernel: SumKernel::new(components)?, g })
    }
}

/// Moves a component between fields; the caller guarantees the target can hold every value.
fn cast_component<A: Scalar, B: Scalar>(c: &Component<A>) -> Component<B> {
    let cast = |v: A| B::from_parts(v.re(), v.im()).expect("value representable in the target field");
    let cast_fn = |f: &OneVariableFunction<A>| {
        OneVariableFunction::from_samples(*f.grid(), f.values().iter().map(|&v| cast(v)).collect()).expect("grid-sized")
    };
    match c {
        Component::Separable(s) => {
            Component::Separable(SeparableComponent::new(cast_fn(s.a()), cast_fn(s.b())).expect("same grid"))
        }
        Component::Numeric(k) => {
            let smooth = TriangularField::from_fn(*k.grid(), |i, j| cast(k.smooth().get(i, j)));
            Component::Numeric(GeneralizedKernel::new(cast(k.delta_coeff()), smooth))
        }
    }
}
