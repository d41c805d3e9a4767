//! Forward-mode jet arithmetic.
//!
//! Every numeric type here implements [`Scalar`], so a single tree walker
//! evaluates plain values, gradients, second-order jets in `(u, v)` and
//! third-order jets in `s`. Unary functions are applied through their Taylor
//! coefficients, which keeps the truncation exact up to the carried order.

use serde::Serialize;
use thiserror::Error;

use super::ast::{BinaryOp, Expr, UnaryOp};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("domain error in `{node}`: {reason}")]
    Domain { node: String, reason: &'static str },
    #[error("expression declared over {declared} variable(s), evaluated with {given}")]
    Arity { declared: usize, given: usize },
}

pub trait Scalar: Clone {
    /// Highest derivative order carried.
    const ORDER: usize;

    fn constant(c: f64) -> Self;
    fn value(&self) -> f64;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// Caller guarantees `o.value() != 0`.
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Apply a scalar function given `[f, f', f'', f''']` at `self.value()`.
    fn compose(&self, d: [f64; 4]) -> Self;
    fn is_finite(&self) -> bool;
}

impl Scalar for f64 {
    const ORDER: usize = 0;

    fn constant(c: f64) -> Self {
        c
    }
    fn value(&self) -> f64 {
        *self
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn compose(&self, d: [f64; 4]) -> Self {
        d[0]
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

/// Value and first partials in three variables.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Grad3 {
    pub value: f64,
    pub grad: [f64; 3],
}

impl Grad3 {
    pub fn var(index: usize, x: f64) -> Self {
        let mut grad = [0.0; 3];
        grad[index] = 1.0;
        Grad3 { value: x, grad }
    }
}

impl Scalar for Grad3 {
    const ORDER: usize = 1;

    fn constant(c: f64) -> Self {
        Grad3 {
            value: c,
            grad: [0.0; 3],
        }
    }
    fn value(&self) -> f64 {
        self.value
    }
    fn add(&self, o: &Self) -> Self {
        Grad3 {
            value: self.value + o.value,
            grad: std::array::from_fn(|i| self.grad[i] + o.grad[i]),
        }
    }
    fn sub(&self, o: &Self) -> Self {
        Grad3 {
            value: self.value - o.value,
            grad: std::array::from_fn(|i| self.grad[i] - o.grad[i]),
        }
    }
    fn mul(&self, o: &Self) -> Self {
        Grad3 {
            value: self.value * o.value,
            grad: std::array::from_fn(|i| self.grad[i] * o.value + self.value * o.grad[i]),
        }
    }
    fn div(&self, o: &Self) -> Self {
        let q = self.value / o.value;
        Grad3 {
            value: q,
            grad: std::array::from_fn(|i| (self.grad[i] - q * o.grad[i]) / o.value),
        }
    }
    fn neg(&self) -> Self {
        Grad3 {
            value: -self.value,
            grad: self.grad.map(|g| -g),
        }
    }
    fn compose(&self, d: [f64; 4]) -> Self {
        Grad3 {
            value: d[0],
            grad: self.grad.map(|g| d[1] * g),
        }
    }
    fn is_finite(&self) -> bool {
        self.value.is_finite() && self.grad.iter().all(|g| g.is_finite())
    }
}

/// Value and partials up to second order in `(u, v)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Jet2 {
    pub value: f64,
    pub du: f64,
    pub dv: f64,
    pub duu: f64,
    pub duv: f64,
    pub dvv: f64,
}

impl Jet2 {
    pub fn var_u(u: f64) -> Self {
        Jet2 {
            value: u,
            du: 1.0,
            ..Default::default()
        }
    }

    pub fn var_v(v: f64) -> Self {
        Jet2 {
            value: v,
            dv: 1.0,
            ..Default::default()
        }
    }
}

impl Scalar for Jet2 {
    const ORDER: usize = 2;

    fn constant(c: f64) -> Self {
        Jet2 {
            value: c,
            ..Default::default()
        }
    }
    fn value(&self) -> f64 {
        self.value
    }
    fn add(&self, o: &Self) -> Self {
        Jet2 {
            value: self.value + o.value,
            du: self.du + o.du,
            dv: self.dv + o.dv,
            duu: self.duu + o.duu,
            duv: self.duv + o.duv,
            dvv: self.dvv + o.dvv,
        }
    }
    fn sub(&self, o: &Self) -> Self {
        Jet2 {
            value: self.value - o.value,
            du: self.du - o.du,
            dv: self.dv - o.dv,
            duu: self.duu - o.duu,
            duv: self.duv - o.duv,
            dvv: self.dvv - o.dvv,
        }
    }
    fn mul(&self, o: &Self) -> Self {
        let (a, b) = (self, o);
        Jet2 {
            value: a.value * b.value,
            du: a.du * b.value + a.value * b.du,
            dv: a.dv * b.value + a.value * b.dv,
            duu: a.duu * b.value + 2.0 * a.du * b.du + a.value * b.duu,
            duv: a.duv * b.value + a.du * b.dv + a.dv * b.du + a.value * b.duv,
            dvv: a.dvv * b.value + 2.0 * a.dv * b.dv + a.value * b.dvv,
        }
    }
    fn div(&self, o: &Self) -> Self {
        let (a, b) = (self, o);
        let q = a.value / b.value;
        let qu = (a.du - q * b.du) / b.value;
        let qv = (a.dv - q * b.dv) / b.value;
        Jet2 {
            value: q,
            du: qu,
            dv: qv,
            duu: (a.duu - 2.0 * qu * b.du - q * b.duu) / b.value,
            duv: (a.duv - qu * b.dv - qv * b.du - q * b.duv) / b.value,
            dvv: (a.dvv - 2.0 * qv * b.dv - q * b.dvv) / b.value,
        }
    }
    fn neg(&self) -> Self {
        Jet2 {
            value: -self.value,
            du: -self.du,
            dv: -self.dv,
            duu: -self.duu,
            duv: -self.duv,
            dvv: -self.dvv,
        }
    }
    fn compose(&self, d: [f64; 4]) -> Self {
        let a = self;
        Jet2 {
            value: d[0],
            du: d[1] * a.du,
            dv: d[1] * a.dv,
            duu: d[2] * a.du * a.du + d[1] * a.duu,
            duv: d[2] * a.du * a.dv + d[1] * a.duv,
            dvv: d[2] * a.dv * a.dv + d[1] * a.dvv,
        }
    }
    fn is_finite(&self) -> bool {
        [self.value, self.du, self.dv, self.duu, self.duv, self.dvv]
            .iter()
            .all(|x| x.is_finite())
    }
}

/// Value and derivatives up to third order in a single parameter.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Jet3 {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

impl Jet3 {
    pub fn var(s: f64) -> Self {
        Jet3 {
            value: s,
            d1: 1.0,
            d2: 0.0,
            d3: 0.0,
        }
    }
}

impl Scalar for Jet3 {
    const ORDER: usize = 3;

    fn constant(c: f64) -> Self {
        Jet3 {
            value: c,
            ..Default::default()
        }
    }
    fn value(&self) -> f64 {
        self.value
    }
    fn add(&self, o: &Self) -> Self {
        Jet3 {
            value: self.value + o.value,
            d1: self.d1 + o.d1,
            d2: self.d2 + o.d2,
            d3: self.d3 + o.d3,
        }
    }
    fn sub(&self, o: &Self) -> Self {
        Jet3 {
            value: self.value - o.value,
            d1: self.d1 - o.d1,
            d2: self.d2 - o.d2,
            d3: self.d3 - o.d3,
        }
    }
    fn mul(&self, o: &Self) -> Self {
        let (a, b) = (self, o);
        Jet3 {
            value: a.value * b.value,
            d1: a.d1 * b.value + a.value * b.d1,
            d2: a.d2 * b.value + 2.0 * a.d1 * b.d1 + a.value * b.d2,
            d3: a.d3 * b.value + 3.0 * a.d2 * b.d1 + 3.0 * a.d1 * b.d2 + a.value * b.d3,
        }
    }
    fn div(&self, o: &Self) -> Self {
        let (a, b) = (self, o);
        let q = a.value / b.value;
        let q1 = (a.d1 - q * b.d1) / b.value;
        let q2 = (a.d2 - 2.0 * q1 * b.d1 - q * b.d2) / b.value;
        let q3 = (a.d3 - 3.0 * q2 * b.d1 - 3.0 * q1 * b.d2 - q * b.d3) / b.value;
        Jet3 {
            value: q,
            d1: q1,
            d2: q2,
            d3: q3,
        }
    }
    fn neg(&self) -> Self {
        Jet3 {
            value: -self.value,
            d1: -self.d1,
            d2: -self.d2,
            d3: -self.d3,
        }
    }
    fn compose(&self, d: [f64; 4]) -> Self {
        let a = self;
        Jet3 {
            value: d[0],
            d1: d[1] * a.d1,
            d2: d[2] * a.d1 * a.d1 + d[1] * a.d2,
            d3: d[3] * a.d1 * a.d1 * a.d1 + 3.0 * d[2] * a.d1 * a.d2 + d[1] * a.d3,
        }
    }
    fn is_finite(&self) -> bool {
        [self.value, self.d1, self.d2, self.d3]
            .iter()
            .all(|x| x.is_finite())
    }
}

fn is_integral(p: f64) -> bool {
    p.fract() == 0.0 && p.abs() < 1e9
}

fn pow_derivs(x: f64, p: f64) -> [f64; 4] {
    let mut out = [0.0; 4];
    let mut coeff = 1.0;
    for (k, slot) in out.iter_mut().enumerate() {
        if coeff == 0.0 {
            break;
        }
        let e = p - k as f64;
        let xp = if is_integral(e) {
            x.powi(e as i32)
        } else {
            x.powf(e)
        };
        *slot = coeff * xp;
        coeff *= e;
    }
    out
}

/// `[f, f', f'', f''']` for a unary op, or a domain complaint.
fn unary_derivs(op: UnaryOp, x: f64) -> Result<[f64; 4], &'static str> {
    Ok(match op {
        UnaryOp::Neg => [-x, -1.0, 0.0, 0.0],
        UnaryOp::Sin => {
            let (s, c) = x.sin_cos();
            [s, c, -s, -c]
        }
        UnaryOp::Cos => {
            let (s, c) = x.sin_cos();
            [c, -s, -c, s]
        }
        UnaryOp::Tan => {
            let t = x.tan();
            let sec2 = 1.0 + t * t;
            [t, sec2, 2.0 * t * sec2, 2.0 * sec2 * (1.0 + 3.0 * t * t)]
        }
        UnaryOp::Exp => {
            let e = x.exp();
            [e; 4]
        }
        UnaryOp::Log => {
            if x <= 0.0 {
                return Err("log of non-positive value");
            }
            let r = 1.0 / x;
            [x.ln(), r, -r * r, 2.0 * r * r * r]
        }
        UnaryOp::Sqrt => {
            if x < 0.0 {
                return Err("sqrt of negative value");
            }
            let r = x.sqrt();
            [r, 0.5 / r, -0.25 / (r * r * r), 0.375 / (r * r * r * r * r)]
        }
        UnaryOp::Sinh => {
            let (s, c) = (x.sinh(), x.cosh());
            [s, c, s, c]
        }
        UnaryOp::Cosh => {
            let (s, c) = (x.sinh(), x.cosh());
            [c, s, c, s]
        }
        UnaryOp::Tanh => {
            let t = x.tanh();
            let sech2 = 1.0 - t * t;
            [t, sech2, -2.0 * t * sech2, -2.0 * sech2 * (1.0 - 3.0 * t * t)]
        }
    })
}

fn domain<S>(e: &Expr, vars: &[String], reason: &'static str) -> Result<S, EvalError> {
    Err(EvalError::Domain {
        node: e.display(vars).to_string(),
        reason,
    })
}

fn checked_compose<S: Scalar>(
    e: &Expr,
    vars: &[String],
    a: &S,
    d: [f64; 4],
) -> Result<S, EvalError> {
    if d[..=S::ORDER].iter().any(|x| !x.is_finite()) {
        return domain(e, vars, "non-finite value or derivative");
    }
    Ok(a.compose(d))
}

/// Walk `e` with the given variable bindings.
pub(crate) fn eval_generic<S: Scalar>(
    e: &Expr,
    args: &[S],
    vars: &[String],
) -> Result<S, EvalError> {
    let out = match e {
        Expr::Const(c) => S::constant(*c),
        Expr::Var(i) => args[*i].clone(),
        Expr::Unary(op, a) => {
            let a = eval_generic(a, args, vars)?;
            let d = match unary_derivs(*op, a.value()) {
                Ok(d) => d,
                Err(reason) => return domain(e, vars, reason),
            };
            checked_compose(e, vars, &a, d)?
        }
        Expr::Pow(a, p) => {
            let a = eval_generic(a, args, vars)?;
            let x = a.value();
            if x < 0.0 && !is_integral(*p) {
                return domain(e, vars, "non-integer power of negative value");
            }
            checked_compose(e, vars, &a, pow_derivs(x, *p))?
        }
        Expr::Binary(op, a, b) => {
            let a = eval_generic(a, args, vars)?;
            let b = eval_generic(b, args, vars)?;
            match op {
                BinaryOp::Add => a.add(&b),
                BinaryOp::Sub => a.sub(&b),
                BinaryOp::Mul => a.mul(&b),
                BinaryOp::Div => {
                    if b.value() == 0.0 {
                        return domain(e, vars, "division by zero");
                    }
                    a.div(&b)
                }
            }
        }
    };
    if !out.is_finite() {
        return domain(e, vars, "non-finite result");
    }
    Ok(out)
}
