use std::fmt;

/// Expression tree of one component function.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    /// Variable `x_i`, 1-based.
    Var(usize),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Min(Vec<Expr>),
    Max(Vec<Expr>),
    Abs(Box<Expr>),
    /// `pow(base, exponent)` with a literal exponent.
    Pow(Box<Expr>, f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }
}

/// Failure while evaluating an expression.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalFault {
    DivisionByZero,
    NonFinite,
}

impl Expr {
    pub fn eval(&self, var: &impl Fn(usize) -> f64) -> Result<f64, EvalFault> {
        let v = match self {
            Expr::Num(c) => *c,
            Expr::Var(i) => var(*i),
            Expr::Neg(e) => -e.eval(var)?,
            Expr::Binary(op, l, r) => {
                let (a, b) = (l.eval(var)?, r.eval(var)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b == 0.0 {
                            return Err(EvalFault::DivisionByZero);
                        }
                        a / b
                    }
                }
            }
            Expr::Min(args) => fold_args(args, var, f64::min)?,
            Expr::Max(args) => fold_args(args, var, f64::max)?,
            Expr::Abs(e) => e.eval(var)?.abs(),
            Expr::Pow(b, p) => {
                let base = b.eval(var)?;
                if base == 0.0 && *p < 0.0 {
                    return Err(EvalFault::DivisionByZero);
                }
                base.powf(*p)
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(EvalFault::NonFinite)
        }
    }

    /// Largest variable index referenced, 0 if none.
    pub fn max_var(&self) -> usize {
        match self {
            Expr::Num(_) => 0,
            Expr::Var(i) => *i,
            Expr::Neg(e) | Expr::Abs(e) | Expr::Pow(e, _) => e.max_var(),
            Expr::Binary(_, l, r) => l.max_var().max(r.max_var()),
            Expr::Min(args) | Expr::Max(args) => args.iter().map(Expr::max_var).max().unwrap_or(0),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(op, ..) => op.precedence(),
            Expr::Neg(_) => 3,
            _ => 4,
        }
    }
}

fn fold_args(args: &[Expr], var: &impl Fn(usize) -> f64, f: fn(f64, f64) -> f64) -> Result<f64, EvalFault> {
    let mut it = args.iter();
    let first = it.next().expect("parser guarantees at least one argument").eval(var)?;
    it.try_fold(first, |acc, e| Ok(f(acc, e.eval(var)?)))
}

struct Wrapped<'a>(&'a Expr, bool);

impl fmt::Display for Wrapped<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

fn write_args(f: &mut fmt::Formatter<'_>, name: &str, args: &[Expr]) -> fmt::Result {
    write!(f, "{name}(")?;
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{a}")?;
    }
    f.write_str(")")
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(c) => write!(f, "{c}"),
            Expr::Var(i) => write!(f, "x{i}"),
            Expr::Neg(e) => write!(f, "-{}", Wrapped(e, e.precedence() < 3)),
            Expr::Binary(op, l, r) => {
                let p = op.precedence();
                // left-associative: equal precedence on the right needs parentheses
                write!(
                    f,
                    "{} {} {}",
                    Wrapped(l, l.precedence() < p),
                    op.symbol(),
                    Wrapped(r, r.precedence() <= p)
                )
            }
            Expr::Min(args) => write_args(f, "min", args),
            Expr::Max(args) => write_args(f, "max", args),
            Expr::Abs(e) => write!(f, "abs({e})"),
            Expr::Pow(b, p) => write!(f, "pow({b}, {p})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(op: BinOp, l: Expr, r: Expr) -> Expr {
        Expr::Binary(op, Box::new(l), Box::new(r))
    }

    #[test]
    fn evaluates_with_variables() {
        let e = b(BinOp::Add, b(BinOp::Mul, Expr::Num(0.5), Expr::Var(1)), Expr::Var(3));
        let x = [0.2, 0.0, 0.4];
        assert_eq!(e.eval(&|i| x.get(i - 1).copied().unwrap_or(0.0)), Ok(0.5));
        assert_eq!(e.max_var(), 3);
    }

    #[test]
    fn division_by_zero_is_reported() {
        let e = b(BinOp::Div, Expr::Num(1.0), Expr::Var(2));
        assert_eq!(e.eval(&|_| 0.0), Err(EvalFault::DivisionByZero));
        let e = Expr::Pow(Box::new(Expr::Var(1)), -1.0);
        assert_eq!(e.eval(&|_| 0.0), Err(EvalFault::DivisionByZero));
        let e = Expr::Pow(Box::new(Expr::Num(-1.0)), 0.5);
        assert_eq!(e.eval(&|_| 0.0), Err(EvalFault::NonFinite));
    }

    #[test]
    fn prints_minimal_parentheses() {
        let e = b(BinOp::Sub, Expr::Var(1), b(BinOp::Sub, Expr::Var(2), Expr::Var(3)));
        assert_eq!(e.to_string(), "x1 - (x2 - x3)");
        let e = b(
            BinOp::Mul,
            b(BinOp::Add, Expr::Var(1), Expr::Num(1.0)),
            Expr::Neg(Box::new(Expr::Var(2))),
        );
        assert_eq!(e.to_string(), "(x1 + 1) * -x2");
        let e = Expr::Neg(Box::new(b(BinOp::Add, Expr::Var(1), Expr::Var(2))));
        assert_eq!(e.to_string(), "-(x1 + x2)");
    }
}
