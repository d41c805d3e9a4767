//! Scalar-field expressions in named variables.
//!
//! Grammar, loosest binding first: `+ -`, then `* /`, then unary `-`, then
//! `^` (right-associative, constant exponent only). Atoms are numbers,
//! declared variables, the constant `pi`, parenthesized expressions and calls
//! to `sin cos tan exp log sqrt sinh cosh tanh`.

mod ast;
mod parse;
mod scalar;

use std::fmt;
use std::sync::Arc;

pub use ast::{BinaryOp, Expr, UnaryOp};
pub use parse::{ParseError, ParseErrorKind};
pub use scalar::{EvalError, Grad3, Jet2, Jet3, Scalar};

/// A parsed expression together with the variables it was declared over.
///
/// Cloning is cheap; the tree is shared and never mutated.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    vars: Arc<[String]>,
    root: Arc<Expr>,
}

/// Parse `text` as a scalar field over `variables`.
pub fn parse_scalar_field(text: &str, variables: &[&str]) -> Result<ScalarField, ParseError> {
    ScalarField::parse(text, variables)
}

impl ScalarField {
    pub fn parse(text: &str, variables: &[&str]) -> Result<Self, ParseError> {
        let vars: Vec<String> = variables.iter().map(|s| s.to_string()).collect();
        let root = parse::parse_expr(text, &vars)?;
        Ok(ScalarField {
            vars: vars.into(),
            root: Arc::new(root),
        })
    }

    pub fn constant(c: f64, variables: &[&str]) -> Self {
        ScalarField {
            vars: variables.iter().map(|s| s.to_string()).collect(),
            root: Arc::new(Expr::Const(c)),
        }
    }

    pub fn variables(&self) -> &[String] {
        &self.vars
    }

    pub fn expr(&self) -> &Expr {
        &self.root
    }

    pub fn is_constant(&self) -> bool {
        self.root.is_constant()
    }

    /// Replace every variable-free subtree by its value.
    pub fn fold_constants(&self) -> Self {
        ScalarField {
            vars: self.vars.clone(),
            root: Arc::new(fold(&self.root, &self.vars)),
        }
    }

    /// Evaluate with any [`Scalar`] type bound to the declared variables in order.
    pub fn eval_with<S: Scalar>(&self, args: &[S]) -> Result<S, EvalError> {
        if args.len() != self.vars.len() {
            return Err(EvalError::Arity {
                declared: self.vars.len(),
                given: args.len(),
            });
        }
        scalar::eval_generic(&self.root, args, &self.vars)
    }

    pub fn eval(&self, point: &[f64]) -> Result<f64, EvalError> {
        self.eval_with(point)
    }

    /// Value and partials to second order; the field must be declared over two variables.
    pub fn eval_jet2(&self, u: f64, v: f64) -> Result<Jet2, EvalError> {
        self.eval_with(&[Jet2::var_u(u), Jet2::var_v(v)])
    }

    /// Derivatives to third order; the field must be declared over one variable.
    pub fn eval_jet3(&self, s: f64) -> Result<Jet3, EvalError> {
        self.eval_with(&[Jet3::var(s)])
    }
}

fn fold(e: &Expr, vars: &[String]) -> Expr {
    if e.is_constant() {
        if let Ok(c) = scalar::eval_generic::<f64>(e, &[], vars) {
            return Expr::Const(c);
        }
        return e.clone();
    }
    match e {
        Expr::Const(_) | Expr::Var(_) => e.clone(),
        Expr::Unary(op, a) => Expr::Unary(*op, Box::new(fold(a, vars))),
        Expr::Pow(a, p) => Expr::Pow(Box::new(fold(a, vars)), *p),
        Expr::Binary(op, a, b) => Expr::Binary(*op, Box::new(fold(a, vars)), Box::new(fold(b, vars))),
    }
}

impl fmt::Display for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.root.display(&self.vars))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn uv(text: &str) -> ScalarField {
        ScalarField::parse(text, &["u", "v"]).unwrap()
    }

    #[test]
    fn product_of_calls() {
        let f = uv("sin(u)*cos(v)");
        match f.expr() {
            Expr::Binary(BinaryOp::Mul, a, b) => {
                assert!(matches!(**a, Expr::Unary(UnaryOp::Sin, _)));
                assert!(matches!(**b, Expr::Unary(UnaryOp::Cos, _)));
            }
            other => panic!("unexpected tree {other:?}"),
        }
    }

    #[test]
    fn polynomial_value() {
        assert_eq!(uv("u^2 + 2*u*v").eval(&[2.0, 1.0]).unwrap(), 8.0);
    }

    #[test]
    fn unbalanced_paren_offset() {
        let err = ScalarField::parse("sin(u", &["u"]).unwrap_err();
        assert_eq!(err.offset, 5);
        assert!(matches!(err.kind, ParseErrorKind::Expected { .. }));
    }

    #[test]
    fn unknown_names() {
        let err = ScalarField::parse("u + w", &["u"]).unwrap_err();
        assert_eq!(err.offset, 4);
        assert_eq!(err.kind, ParseErrorKind::UnknownIdentifier("w".into()));
        let err = ScalarField::parse("asin(u)", &["u"]).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownFunction("asin".into()));
        let err = ScalarField::parse("u ^ v", &["u", "v"]).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::NonConstantExponent);
        assert_eq!(ScalarField::parse("  ", &["u"]).unwrap_err().kind, ParseErrorKind::Empty);
        assert!(ScalarField::parse("u $ 2", &["u"]).is_err());
        assert!(ScalarField::parse("u 2", &["u"]).is_err());
    }

    #[test]
    fn precedence() {
        // unary minus binds looser than ^, tighter than *
        assert_eq!(uv("-u^2").eval(&[3.0, 0.0]).unwrap(), -9.0);
        assert_eq!(uv("2^3^2").eval(&[0.0, 0.0]).unwrap(), 512.0);
        assert_eq!(uv("u^-1").eval(&[4.0, 0.0]).unwrap(), 0.25);
        assert_eq!(uv("8/2/2").eval(&[0.0, 0.0]).unwrap(), 2.0);
        assert_eq!(uv("1-2-3").eval(&[0.0, 0.0]).unwrap(), -4.0);
        assert_eq!(uv("2*-u").eval(&[3.0, 0.0]).unwrap(), -6.0);
        assert_relative_eq!(uv("cos(pi)").eval(&[0.0, 0.0]).unwrap(), -1.0);
        assert_eq!(uv("1.5e1 + .5").eval(&[0.0, 0.0]).unwrap(), 15.5);
    }

    #[test]
    fn jet2_polynomial() {
        let j = uv("u^2*v").eval_jet2(2.0, 3.0).unwrap();
        assert_eq!(
            j,
            Jet2 { value: 12.0, du: 12.0, dv: 4.0, duu: 6.0, duv: 4.0, dvv: 0.0 }
        );
        let j = uv("u").eval_jet2(5.0, 7.0).unwrap();
        assert_eq!(j, Jet2 { value: 5.0, du: 1.0, ..Default::default() });
        let j = uv("exp(u)").eval_jet2(0.0, 0.3).unwrap();
        assert_eq!((j.value, j.du, j.duu, j.dv, j.duv, j.dvv), (1.0, 1.0, 1.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn jet3_examples() {
        let s = |t: &str| ScalarField::parse(t, &["s"]).unwrap();
        assert_eq!(s("sin(s)").eval_jet3(0.0).unwrap(), Jet3 { value: 0.0, d1: 1.0, d2: 0.0, d3: -1.0 });
        assert_eq!(s("s").eval_jet3(2.0).unwrap(), Jet3 { value: 2.0, d1: 1.0, d2: 0.0, d3: 0.0 });
        assert_eq!(s("s^3").eval_jet3(1.0).unwrap(), Jet3 { value: 1.0, d1: 3.0, d2: 6.0, d3: 6.0 });
    }

    #[test]
    fn jet3_quotient_and_transcendentals() {
        // d^k/ds^k of 1/(1+s) at 0: 1, -1, 2, -6
        let f = ScalarField::parse("1/(1+s)", &["s"]).unwrap();
        assert_eq!(f.eval_jet3(0.0).unwrap(), Jet3 { value: 1.0, d1: -1.0, d2: 2.0, d3: -6.0 });
        let f = ScalarField::parse("log(1+s)", &["s"]).unwrap();
        assert_eq!(f.eval_jet3(0.0).unwrap(), Jet3 { value: 0.0, d1: 1.0, d2: -1.0, d3: 2.0 });
        let j = ScalarField::parse("tan(s)", &["s"]).unwrap().eval_jet3(0.0).unwrap();
        assert_eq!((j.d1, j.d2, j.d3), (1.0, 0.0, 2.0));
        let j = ScalarField::parse("tanh(s)", &["s"]).unwrap().eval_jet3(0.0).unwrap();
        assert_eq!((j.d1, j.d2, j.d3), (1.0, 0.0, -2.0));
        let j = ScalarField::parse("sqrt(s)", &["s"]).unwrap().eval_jet3(4.0).unwrap();
        assert_relative_eq!(j.d3, 3.0 / 8.0 / 32.0);
    }

    #[test]
    fn domain_errors_name_the_node() {
        let f = uv("1 + log(u - 1)");
        match f.eval_jet2(0.5, 0.0).unwrap_err() {
            EvalError::Domain { node, .. } => assert_eq!(node, "log((u - 1.0))"),
            e => panic!("{e:?}"),
        }
        assert!(uv("u/v").eval(&[1.0, 0.0]).is_err());
        assert!(uv("sqrt(u)").eval(&[-1.0, 0.0]).is_err());
        // sqrt(0) has a value but no derivative
        assert_eq!(uv("sqrt(u)").eval(&[0.0, 0.0]).unwrap(), 0.0);
        assert!(uv("sqrt(u)").eval_jet2(0.0, 0.0).is_err());
        assert!(uv("u^0.5").eval(&[-2.0, 0.0]).is_err());
        assert_eq!(uv("u^2").eval_jet2(0.0, 0.0).unwrap().duu, 2.0);
        assert!(uv("u^-1").eval_jet2(0.0, 1.0).is_err());
    }

    #[test]
    fn arity_is_checked() {
        assert!(matches!(
            uv("u").eval_jet3(1.0),
            Err(EvalError::Arity { declared: 2, given: 1 })
        ));
    }

    #[test]
    fn display_reparses() {
        let f = uv("-u^2 + sin(v)/3 - 2^-1*exp(-u*v)");
        let again = ScalarField::parse(&f.to_string(), &["u", "v"]).unwrap();
        for &(u, v) in &[(0.3, -0.7), (1.1, 2.0)] {
            assert_eq!(f.eval(&[u, v]).unwrap(), again.eval(&[u, v]).unwrap());
        }
    }

    #[test]
    fn folding_collapses_constant_subtrees() {
        let f = uv("(2*3)*u + sin(pi/2)");
        let g = f.fold_constants();
        assert!(g.expr().node_count() < f.expr().node_count());
        assert_eq!(f.eval(&[1.25, 0.0]).unwrap(), g.eval(&[1.25, 0.0]).unwrap());
    }
}
