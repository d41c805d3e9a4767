use std::fmt;

/// Built-in unary functions plus negation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Neg,
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Sinh,
    Cosh,
    Tanh,
}

impl UnaryOp {
    pub(crate) fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => UnaryOp::Sin,
            "cos" => UnaryOp::Cos,
            "tan" => UnaryOp::Tan,
            "exp" => UnaryOp::Exp,
            "log" => UnaryOp::Log,
            "sqrt" => UnaryOp::Sqrt,
            "sinh" => UnaryOp::Sinh,
            "cosh" => UnaryOp::Cosh,
            "tanh" => UnaryOp::Tanh,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            UnaryOp::Neg => "-",
            UnaryOp::Sin => "sin",
            UnaryOp::Cos => "cos",
            UnaryOp::Tan => "tan",
            UnaryOp::Exp => "exp",
            UnaryOp::Log => "log",
            UnaryOp::Sqrt => "sqrt",
            UnaryOp::Sinh => "sinh",
            UnaryOp::Cosh => "cosh",
            UnaryOp::Tanh => "tanh",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinaryOp {
    fn symbol(self) -> char {
        match self {
            BinaryOp::Add => '+',
            BinaryOp::Sub => '-',
            BinaryOp::Mul => '*',
            BinaryOp::Div => '/',
        }
    }
}

/// Expression tree. Variables are stored as indices into the owning
/// [`ScalarField`](super::ScalarField)'s declared variable list.
///
/// Powers carry an already-evaluated constant exponent.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(usize),
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, f64),
}

impl Expr {
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Const(_) => true,
            Expr::Var(_) => false,
            Expr::Unary(_, a) | Expr::Pow(a, _) => a.is_constant(),
            Expr::Binary(_, a, b) => a.is_constant() && b.is_constant(),
        }
    }

    /// Highest variable index referenced, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Const(_) => None,
            Expr::Var(i) => Some(*i),
            Expr::Unary(_, a) | Expr::Pow(a, _) => a.max_var(),
            Expr::Binary(_, a, b) => match (a.max_var(), b.max_var()) {
                (Some(x), Some(y)) => Some(x.max(y)),
                (x, y) => x.or(y),
            },
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var(_) => 1,
            Expr::Unary(_, a) | Expr::Pow(a, _) => 1 + a.node_count(),
            Expr::Binary(_, a, b) => 1 + a.node_count() + b.node_count(),
        }
    }

    /// Render with the given variable names. Output is fully parenthesized
    /// and re-parses to a tree that evaluates identically.
    pub fn display<'a>(&'a self, vars: &'a [String]) -> ExprDisplay<'a> {
        ExprDisplay { expr: self, vars }
    }
}

pub struct ExprDisplay<'a> {
    expr: &'a Expr,
    vars: &'a [String],
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(f, self.expr, self.vars)
    }
}

fn write_const(f: &mut fmt::Formatter<'_>, c: f64) -> fmt::Result {
    if c.is_sign_negative() {
        write!(f, "(-{:?})", -c)
    } else {
        write!(f, "{c:?}")
    }
}

fn write_expr(f: &mut fmt::Formatter<'_>, e: &Expr, vars: &[String]) -> fmt::Result {
    match e {
        Expr::Const(c) => write_const(f, *c),
        Expr::Var(i) => match vars.get(*i) {
            Some(name) => f.write_str(name),
            None => write!(f, "${i}"),
        },
        Expr::Unary(UnaryOp::Neg, a) => {
            f.write_str("(-")?;
            write_expr(f, a, vars)?;
            f.write_str(")")
        }
        Expr::Unary(op, a) => {
            write!(f, "{}(", op.name())?;
            write_expr(f, a, vars)?;
            f.write_str(")")
        }
        Expr::Binary(op, a, b) => {
            f.write_str("(")?;
            write_expr(f, a, vars)?;
            write!(f, " {} ", op.symbol())?;
            write_expr(f, b, vars)?;
            f.write_str(")")
        }
        Expr::Pow(a, p) => {
            f.write_str("(")?;
            write_expr(f, a, vars)?;
            f.write_str("^")?;
            write_const(f, *p)?;
            f.write_str(")")
        }
    }
}
