//! Expression parsing, evaluation, and forward-mode differentiation.
//!
//! Expressions are built from decimal literals, the single variable `x`,
//! the binary operators `+ - * / ^`, unary minus, and the functions
//! `sin`, `cos`, `exp`, `log` (natural), `sqrt`, and `abs`. Precedence is
//! `^` over unary minus over `* /` over `+ -`, and `^` associates to the
//! right, so `-x^2` means `-(x^2)` and `x^2^3` means `x^(2^3)`.
//!
//! [`ExprAst::eval`] evaluates numerically; [`ExprAst::eval_dual`]
//! additionally carries a first derivative through every operation
//! (forward-mode AD). `abs` is the one non-smooth primitive: its
//! derivative is `sign(u) * u'` away from zero and is reported as an
//! error exactly at zero.
//!
//! [`FunctionModel`] pairs an expression with a domain `[a, b]` and the
//! list of points where the caller declares the derivative undefined
//! (breakpoints, typically the kinks of `abs` terms).

mod model;
mod parser;

use std::fmt;
use std::ops;
use std::str::FromStr;

pub use model::{FunctionModel, ModelError};
pub use parser::ParseError;

/// Built-in unary functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
    Abs,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            _ => return None,
        })
    }
}

/// Binary operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

/// Parsed expression tree.
#[derive(Clone, Debug, PartialEq)]
pub enum ExprAst {
    Const(f64),
    /// The free variable `x`.
    Var,
    Neg(Box<ExprAst>),
    Binary(BinOp, Box<ExprAst>, Box<ExprAst>),
    Apply(Func, Box<ExprAst>),
}

/// A value paired with its first derivative with respect to `x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DualValue {
    pub value: f64,
    pub derivative: f64,
}

impl DualValue {
    /// A constant: derivative zero.
    pub fn constant(value: f64) -> Self {
        DualValue { value, derivative: 0.0 }
    }

    /// The variable itself: derivative one.
    pub fn variable(value: f64) -> Self {
        DualValue { value, derivative: 1.0 }
    }
}

impl ops::Add for DualValue {
    type Output = DualValue;
    fn add(self, rhs: DualValue) -> DualValue {
        DualValue {
            value: self.value + rhs.value,
            derivative: self.derivative + rhs.derivative,
        }
    }
}

impl ops::Sub for DualValue {
    type Output = DualValue;
    fn sub(self, rhs: DualValue) -> DualValue {
        DualValue {
            value: self.value - rhs.value,
            derivative: self.derivative - rhs.derivative,
        }
    }
}

impl ops::Mul for DualValue {
    type Output = DualValue;
    fn mul(self, rhs: DualValue) -> DualValue {
        DualValue {
            value: self.value * rhs.value,
            derivative: self.derivative * rhs.value + self.value * rhs.derivative,
        }
    }
}

impl ops::Div for DualValue {
    type Output = DualValue;
    fn div(self, rhs: DualValue) -> DualValue {
        DualValue {
            value: self.value / rhs.value,
            derivative: (self.derivative * rhs.value - self.value * rhs.derivative)
                / (rhs.value * rhs.value),
        }
    }
}

impl ops::Neg for DualValue {
    type Output = DualValue;
    fn neg(self) -> DualValue {
        DualValue { value: -self.value, derivative: -self.derivative }
    }
}

/// Evaluation failures. These carry the evaluation point, not a source
/// offset: by the time an expression is evaluated it has already parsed.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("division by zero at x = {x}")]
    DivisionByZero { x: f64 },
    #[error("{func}({arg}) is outside the function domain (at x = {x})")]
    OutsideDomain { func: &'static str, arg: f64, x: f64 },
    #[error("power {base}^{exponent} is undefined (at x = {x})")]
    PowerUndefined { base: f64, exponent: f64, x: f64 },
    #[error("derivative is undefined at x = {x}")]
    NonDifferentiable { x: f64 },
    #[error("evaluation produced a non-finite value at x = {x}")]
    NotFinite { x: f64 },
    #[error("x = {x} is outside the model domain [{lo}, {hi}]")]
    OutsideInterval { x: f64, lo: f64, hi: f64 },
}

impl ExprAst {
    /// Parse an expression from text. Also available through [`FromStr`].
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        parser::parse(text)
    }

    /// Evaluate at `x`.
    pub fn eval(&self, x: f64) -> Result<f64, EvalError> {
        let v = self.eval_node(x)?;
        if !v.is_finite() {
            return Err(EvalError::NotFinite { x });
        }
        Ok(v)
    }

    /// Evaluate at `x`, carrying the first derivative along.
    pub fn eval_dual(&self, x: f64) -> Result<DualValue, EvalError> {
        let d = self.dual_node(x)?;
        if !d.value.is_finite() || !d.derivative.is_finite() {
            return Err(EvalError::NotFinite { x });
        }
        Ok(d)
    }

    fn eval_node(&self, x: f64) -> Result<f64, EvalError> {
        Ok(match self {
            ExprAst::Const(c) => *c,
            ExprAst::Var => x,
            ExprAst::Neg(u) => -u.eval_node(x)?,
            ExprAst::Binary(op, l, r) => {
                let a = l.eval_node(x)?;
                let b = r.eval_node(x)?;
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b == 0.0 {
                            return Err(EvalError::DivisionByZero { x });
                        }
                        a / b
                    }
                    BinOp::Pow => {
                        let v = a.powf(b);
                        if v.is_nan() && !a.is_nan() && !b.is_nan() {
                            return Err(EvalError::PowerUndefined { base: a, exponent: b, x });
                        }
                        v
                    }
                }
            }
            ExprAst::Apply(f, u) => {
                let a = u.eval_node(x)?;
                match f {
                    Func::Sin => a.sin(),
                    Func::Cos => a.cos(),
                    Func::Exp => a.exp(),
                    Func::Log => {
                        if a <= 0.0 {
                            return Err(EvalError::OutsideDomain { func: "log", arg: a, x });
                        }
                        a.ln()
                    }
                    Func::Sqrt => {
                        if a < 0.0 {
                            return Err(EvalError::OutsideDomain { func: "sqrt", arg: a, x });
                        }
                        a.sqrt()
                    }
                    Func::Abs => a.abs(),
                }
            }
        })
    }

    fn dual_node(&self, x: f64) -> Result<DualValue, EvalError> {
        Ok(match self {
            ExprAst::Const(c) => DualValue::constant(*c),
            ExprAst::Var => DualValue::variable(x),
            ExprAst::Neg(u) => -u.dual_node(x)?,
            ExprAst::Binary(op, l, r) => {
                let a = l.dual_node(x)?;
                let b = r.dual_node(x)?;
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b.value == 0.0 {
                            return Err(EvalError::DivisionByZero { x });
                        }
                        a / b
                    }
                    BinOp::Pow => pow_dual(a, b, x)?,
                }
            }
            ExprAst::Apply(f, u) => {
                let u = u.dual_node(x)?;
                match f {
                    Func::Sin => DualValue {
                        value: u.value.sin(),
                        derivative: u.value.cos() * u.derivative,
                    },
                    Func::Cos => DualValue {
                        value: u.value.cos(),
                        derivative: -u.value.sin() * u.derivative,
                    },
                    Func::Exp => {
                        let e = u.value.exp();
                        DualValue { value: e, derivative: e * u.derivative }
                    }
                    Func::Log => {
                        if u.value <= 0.0 {
                            return Err(EvalError::OutsideDomain { func: "log", arg: u.value, x });
                        }
                        DualValue { value: u.value.ln(), derivative: u.derivative / u.value }
                    }
                    Func::Sqrt => {
                        if u.value < 0.0 {
                            return Err(EvalError::OutsideDomain { func: "sqrt", arg: u.value, x });
                        }
                        if u.value == 0.0 {
                            // The one-sided derivative is unbounded here.
                            return Err(EvalError::NonDifferentiable { x });
                        }
                        let s = u.value.sqrt();
                        DualValue { value: s, derivative: u.derivative / (2.0 * s) }
                    }
                    Func::Abs => {
                        if u.value == 0.0 {
                            return Err(EvalError::NonDifferentiable { x });
                        }
                        DualValue {
                            value: u.value.abs(),
                            derivative: u.value.signum() * u.derivative,
                        }
                    }
                }
            }
        })
    }
}

fn pow_dual(base: DualValue, exp: DualValue, x: f64) -> Result<DualValue, EvalError> {
    let value = base.value.powf(exp.value);
    if value.is_nan() && !base.value.is_nan() && !exp.value.is_nan() {
        return Err(EvalError::PowerUndefined { base: base.value, exponent: exp.value, x });
    }
    let derivative = if exp.derivative == 0.0 {
        // Constant exponent: plain power rule.
        let c = exp.value;
        if c == 0.0 {
            0.0
        } else {
            if base.value == 0.0 && c < 1.0 {
                return Err(EvalError::PowerUndefined { base: 0.0, exponent: c, x });
            }
            c * base.value.powf(c - 1.0) * base.derivative
        }
    } else {
        // General u^v needs a positive base for the logarithmic derivative.
        if base.value <= 0.0 {
            return Err(EvalError::PowerUndefined {
                base: base.value,
                exponent: exp.value,
                x,
            });
        }
        value
            * (exp.derivative * base.value.ln() + exp.value * base.derivative / base.value)
    };
    Ok(DualValue { value, derivative })
}

impl FromStr for ExprAst {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        parser::parse(s)
    }
}

// Precedence levels used by the printer. A child is parenthesized when its
// level is below what its position requires.
const PREC_ADD: u8 = 1;
const PREC_MUL: u8 = 2;
const PREC_NEG: u8 = 3;
const PREC_POW: u8 = 4;
const PREC_ATOM: u8 = 5;

fn prec(ast: &ExprAst) -> u8 {
    match ast {
        ExprAst::Const(_) | ExprAst::Var | ExprAst::Apply(..) => PREC_ATOM,
        ExprAst::Neg(_) => PREC_NEG,
        ExprAst::Binary(BinOp::Add | BinOp::Sub, ..) => PREC_ADD,
        ExprAst::Binary(BinOp::Mul | BinOp::Div, ..) => PREC_MUL,
        ExprAst::Binary(BinOp::Pow, ..) => PREC_POW,
    }
}

fn fmt_node(ast: &ExprAst, min_prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let wrap = prec(ast) < min_prec;
    if wrap {
        f.write_str("(")?;
    }
    match ast {
        ExprAst::Const(c) => write!(f, "{c}")?,
        ExprAst::Var => f.write_str("x")?,
        ExprAst::Neg(u) => {
            f.write_str("-")?;
            fmt_node(u, PREC_NEG, f)?;
        }
        ExprAst::Binary(op, l, r) => {
            let (sym, lp, rp) = match op {
                BinOp::Add => (" + ", PREC_ADD, PREC_ADD + 1),
                BinOp::Sub => (" - ", PREC_ADD, PREC_ADD + 1),
                BinOp::Mul => (" * ", PREC_MUL, PREC_MUL + 1),
                BinOp::Div => (" / ", PREC_MUL, PREC_MUL + 1),
                // Right-associative, and the exponent may carry a unary minus.
                BinOp::Pow => ("^", PREC_ATOM, PREC_NEG),
            };
            fmt_node(l, lp, f)?;
            f.write_str(sym)?;
            fmt_node(r, rp, f)?;
        }
        ExprAst::Apply(func, u) => {
            f.write_str(func.name())?;
            f.write_str("(")?;
            fmt_node(u, 0, f)?;
            f.write_str(")")?;
        }
    }
    if wrap {
        f.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for ExprAst {
    /// Prints a form that parses back to a structurally identical tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_node(self, 0, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> ExprAst {
        ExprAst::parse(text).unwrap()
    }

    #[test]
    fn parses_powers_of_function_applications() {
        // sin(x)^2 applies the power to the call result.
        let ast = parse("sin(x)^2");
        match ast {
            ExprAst::Binary(BinOp::Pow, l, r) => {
                assert_eq!(*l, ExprAst::Apply(Func::Sin, Box::new(ExprAst::Var)));
                assert_eq!(*r, ExprAst::Const(2.0));
            }
            other => panic!("unexpected tree: {other:?}"),
        }
    }

    #[test]
    fn power_binds_tighter_than_unary_minus() {
        assert_eq!(parse("-x^2"), ExprAst::Neg(Box::new(parse("x^2"))));
        // A parenthesized base keeps the minus inside.
        match parse("(-x)^2") {
            ExprAst::Binary(BinOp::Pow, l, _) => {
                assert_eq!(*l, ExprAst::Neg(Box::new(ExprAst::Var)));
            }
            other => panic!("unexpected tree: {other:?}"),
        }
    }

    #[test]
    fn power_is_right_associative() {
        // x^2^3 = x^(2^3): evaluates to x^8, not (x^2)^3 = x^6.
        let ast = parse("x^2^3");
        assert_eq!(ast.eval(2.0).unwrap(), 256.0);
    }

    #[test]
    fn evaluates_polynomial() {
        let ast = parse("2*x + 1");
        assert_eq!(ast.eval(0.25).unwrap(), 1.5);
    }

    #[test]
    fn dual_of_square_is_power_rule() {
        let d = parse("x^2").eval_dual(3.0).unwrap();
        assert_eq!(d.value, 9.0);
        assert_eq!(d.derivative, 6.0);
    }

    #[test]
    fn dual_of_abs_uses_sign() {
        let d = parse("abs(x - 0.5)").eval_dual(0.25).unwrap();
        assert_eq!(d.value, 0.25);
        assert_eq!(d.derivative, -1.0);

        let d = parse("abs(x - 0.5)").eval_dual(0.75).unwrap();
        assert_eq!(d.derivative, 1.0);
    }

    #[test]
    fn dual_of_abs_at_kink_is_an_error() {
        let err = parse("abs(x - 0.5)").eval_dual(0.5).unwrap_err();
        assert_eq!(err, EvalError::NonDifferentiable { x: 0.5 });
    }

    #[test]
    fn dual_chain_rule_through_functions() {
        // d/dx sin(x^2) = 2x cos(x^2)
        let x = 0.7;
        let d = parse("sin(x^2)").eval_dual(x).unwrap();
        let expect = 2.0 * x * (x * x).cos();
        assert!((d.derivative - expect).abs() < 1e-15);
    }

    #[test]
    fn domain_errors_are_reported() {
        assert!(matches!(
            parse("log(x)").eval(-1.0),
            Err(EvalError::OutsideDomain { func: "log", .. })
        ));
        assert!(matches!(
            parse("sqrt(x)").eval(-4.0),
            Err(EvalError::OutsideDomain { func: "sqrt", .. })
        ));
        assert!(matches!(parse("1/x").eval(0.0), Err(EvalError::DivisionByZero { .. })));
        assert!(matches!(
            parse("x^0.5").eval(-2.0),
            Err(EvalError::PowerUndefined { .. })
        ));
        assert!(matches!(parse("exp(x)").eval(1000.0), Err(EvalError::NotFinite { .. })));
    }

    #[test]
    fn negative_base_with_integer_exponent_is_fine() {
        let d = parse("x^3").eval_dual(-2.0).unwrap();
        assert_eq!(d.value, -8.0);
        assert_eq!(d.derivative, 12.0);
    }

    #[test]
    fn general_power_needs_positive_base() {
        assert!(matches!(
            parse("x^x").eval_dual(-1.0),
            Err(EvalError::PowerUndefined { .. })
        ));
        let d = parse("x^x").eval_dual(2.0).unwrap();
        // d/dx x^x = x^x (ln x + 1)
        assert!((d.derivative - 4.0 * (2.0f64.ln() + 1.0)).abs() < 1e-14);
    }

    #[test]
    fn display_round_trips_structure() {
        for text in [
            "x^2",
            "-x^2",
            "(-x)^2",
            "x^2^3",
            "1 - (2 - x)",
            "1 - 2 - x",
            "x / (2 * x)",
            "-(x + 1)",
            "--x",
            "sin(x)^2 + cos(x)^2",
            "abs(x - 0.5)",
            "2.5e-3 * x",
        ] {
            let ast = parse(text);
            let printed = ast.to_string();
            assert_eq!(parse(&printed), ast, "{text} printed as {printed}");
        }
    }
}
