use std::fmt;
use std::sync::Arc;

use evalexpr::{ContextWithMutableVariables, EvalexprError, HashMapContext, Node, Value};
use serde::{Deserialize, Serialize};

use super::regularize::GProfile;
use crate::error::{Error, Result};

/// A nonnegative rate function `g` on `S`.
#[derive(Clone)]
pub enum GFunction {
    Constant(f64),
    /// `g(a) = a[index]`; negative values are rejected when evaluated on a path.
    Coordinate(usize),
    Radial(GProfile),
    Expr(ExprG),
    Product(Box<GFunction>, Box<GFunction>),
    Custom(Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>),
}

impl fmt::Debug for GFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GFunction::Constant(c) => write!(f, "Constant({c})"),
            GFunction::Coordinate(i) => write!(f, "Coordinate({i})"),
            GFunction::Radial(p) => write!(f, "Radial({} breakpoints)", p.breakpoints.len()),
            GFunction::Expr(e) => write!(f, "Expr({:?})", e.source),
            GFunction::Product(a, b) => write!(f, "Product({a:?}, {b:?})"),
            GFunction::Custom(_) => write!(f, "Custom"),
        }
    }
}

/// A rate given by an arithmetic expression in `x0, x1, ..` (`x` is `x0`)
/// and `r`, the Euclidean norm.
#[derive(Clone)]
pub struct ExprG {
    source: String,
    tree: Node,
}

impl ExprG {
    pub fn parse(source: &str) -> Result<Self> {
        let tree = evalexpr::build_operator_tree(source).map_err(|e| Error::Expr(format!("{source:?}: {e}")))?;
        let g = Self { source: source.to_string(), tree };
        // some malformed input only surfaces on evaluation
        match g.tree.eval_number_with_context(&HashMapContext::new()) {
            Err(EvalexprError::VariableIdentifierNotFound(_)) | Ok(_) => Ok(g),
            Err(e) => Err(Error::Expr(format!("{source:?}: {e}"))),
        }
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    fn eval(&self, a: &[f64]) -> Result<f64> {
        let norm = a.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut vars: Vec<(String, f64)> = vec![("r".into(), norm), ("x".into(), a[0])];
        vars.extend(a.iter().enumerate().map(|(i, v)| (format!("x{i}"), *v)));
        self.eval_with(vars)
    }

    /// Evaluates with the given variable bindings.
    pub fn eval_named(&self, vars: &[(&str, f64)]) -> Result<f64> {
        self.eval_with(vars.iter().map(|(k, v)| (k.to_string(), *v)).collect())
    }

    fn eval_with(&self, vars: Vec<(String, f64)>) -> Result<f64> {
        let mut ctx = HashMapContext::new();
        for (k, v) in vars {
            ctx.set_value(k, Value::Float(v)).map_err(|e| Error::Expr(e.to_string()))?;
        }
        self.tree
            .eval_number_with_context(&ctx)
            .map_err(|e| Error::Expr(format!("{:?}: {e}", self.source)))
    }
}

impl GFunction {
    pub fn custom(f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        GFunction::Custom(Arc::new(f))
    }

    pub fn product(a: GFunction, b: GFunction) -> Self {
        GFunction::Product(Box::new(a), Box::new(b))
    }

    /// `g(a)`, checked to be a finite nonnegative number.
    pub fn eval(&self, a: &[f64]) -> Result<f64> {
        let v = match self {
            GFunction::Constant(c) => *c,
            GFunction::Coordinate(i) => *a
                .get(*i)
                .ok_or_else(|| Error::InvalidArgument(format!("coordinate {i} out of range")))?,
            GFunction::Radial(p) => p.eval(a),
            GFunction::Expr(e) => e.eval(a)?,
            GFunction::Product(f, g) => f.eval(a)? * g.eval(a)?,
            GFunction::Custom(f) => f(a),
        };
        if !(v >= 0.0) || !v.is_finite() {
            return Err(Error::NegativeRate { value: v });
        }
        Ok(v)
    }

    pub fn is_zero(&self, a: &[f64]) -> Result<bool> {
        Ok(self.eval(a)? == 0.0)
    }
}

/// Rate function as written in configuration files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GSpec {
    Constant { value: f64 },
    Coordinate { index: usize },
    RadialProfile { profile: GProfile },
    Expr { expr: String },
}

impl TryFrom<GSpec> for GFunction {
    type Error = Error;

    fn try_from(spec: GSpec) -> Result<Self> {
        Ok(match spec {
            GSpec::Constant { value } => {
                if !(value >= 0.0) || !value.is_finite() {
                    return Err(Error::InvalidArgument(format!("constant rate must be finite and >= 0, got {value}")));
                }
                GFunction::Constant(value)
            }
            GSpec::Coordinate { index } => GFunction::Coordinate(index),
            GSpec::RadialProfile { profile } => GFunction::Radial(profile.validated()?),
            GSpec::Expr { expr } => GFunction::Expr(ExprG::parse(&expr)?),
        })
    }
}
