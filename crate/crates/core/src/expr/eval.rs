use num_traits::Zero;
use serde_json::{json, Value as Json};

use super::{Expr, Func};
use crate::arith::{fmt_rational, is_p_unit, Laurent, Laurent2, Prime, Rational};
use crate::error::{Error, Result};
use crate::free::{MixedTensor, ThetaPoly};
use crate::kk::{q_body, theta};

/// The result of evaluating an expression.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    /// uⁿ times an element of K∨₀K ⊗ (free θ-algebra); with no generators
    /// this is just uⁿ·f(w).
    Elt { degree: i64, body: MixedTensor },
    /// An element of K∨₀K ⊗ K∨₀K as a function of (w₁, w₂).
    Two(Laurent2),
}

fn invalid<T>(message: impl Into<String>) -> Result<T> {
    Err(Error::Invalid(message.into()))
}

impl Value {
    fn kk(f: Laurent) -> Value {
        Value::Elt { degree: 0, body: MixedTensor::constant(f) }
    }

    /// The K∨₀K part, when the value involves no generators.
    pub fn as_laurent(&self) -> Option<Laurent> {
        match self {
            Value::Elt { body, .. } if body.terms().all(|(m, _)| m.is_one()) => {
                Some(body.coefficient(&crate::free::Monomial::one()))
            }
            _ => None,
        }
    }

    pub fn degree(&self) -> i64 {
        match self {
            Value::Elt { degree, .. } => *degree,
            Value::Two(_) => 0,
        }
    }

    /// The value as an element of a free θ-algebra (constant coefficients).
    pub fn as_theta_poly(&self) -> Option<ThetaPoly> {
        let Value::Elt { degree: 0, body } = self else { return None };
        let terms: Option<Vec<_>> = body.terms().map(|(m, c)| Some((m.clone(), c.as_constant()?))).collect();
        Some(ThetaPoly::from_terms(terms?))
    }

    fn as_rational(&self) -> Option<Rational> {
        match self {
            Value::Elt { degree: 0, .. } => self.as_laurent()?.as_constant(),
            Value::Two(f) => {
                let mut terms = f.terms();
                match (terms.next(), terms.next()) {
                    (None, _) => Some(Rational::zero()),
                    (Some((e, c)), None) if *e == [0, 0] => Some(c.clone()),
                    _ => None,
                }
            }
            _ => None,
        }
    }

    /// Canonical text: Laurent form for K∨₀K elements, the mixed display
    /// (Θ-form at p = 2) once generators occur.
    pub fn display(&self, p: Prime) -> String {
        match self {
            Value::Two(f) => f.to_string(),
            Value::Elt { degree, body } => {
                let text = match self.as_laurent() {
                    Some(f) => f.to_string(),
                    None => body.display(p),
                };
                match *degree {
                    0 => text,
                    d => {
                        let u = if d == 1 { "u".to_string() } else { format!("u^{d}") };
                        match text.as_str() {
                            "1" => u,
                            "0" => text,
                            _ => format!("{u}*({text})"),
                        }
                    }
                }
            }
        }
    }

    pub fn to_json(&self, p: Prime) -> Json {
        match self {
            Value::Two(f) => json!({
                "kind": "tensor2",
                "text": self.display(p),
                "terms": f.terms().map(|(e, c)| json!([e[0], e[1], fmt_rational(c)])).collect::<Vec<_>>(),
            }),
            Value::Elt { degree, body } => match self.as_laurent() {
                Some(f) => json!({
                    "kind": "kk",
                    "degree": degree,
                    "text": self.display(p),
                    "terms": f.terms().map(|(e, c)| json!([e, fmt_rational(c)])).collect::<Vec<_>>(),
                }),
                None => {
                    let mut v = body.to_json(p);
                    v["kind"] = json!("mixed");
                    v["degree"] = json!(degree);
                    v["text"] = json!(self.display(p));
                    v
                }
            },
        }
    }
}

fn add(a: Value, b: Value, negate: bool) -> Result<Value> {
    let b = if negate { neg(b) } else { b };
    match (a, b) {
        (Value::Elt { degree: da, body: x }, Value::Elt { degree: db, body: y }) => {
            let degree = if x.is_zero() {
                db
            } else if y.is_zero() || da == db {
                da
            } else {
                return invalid(format!("cannot add elements of degrees {da} and {db}"));
            };
            Ok(Value::Elt { degree, body: x.add(&y) })
        }
        (Value::Two(x), Value::Two(y)) => Ok(Value::Two(&x + &y)),
        (Value::Two(x), other) | (other, Value::Two(x)) => match other.as_rational() {
            Some(c) => Ok(Value::Two(&x + &Laurent2::one().scale(&c))),
            None => invalid("cannot add a function of (w1, w2) to a function of w"),
        },
    }
}

fn neg(a: Value) -> Value {
    match a {
        Value::Elt { degree, body } => Value::Elt { degree, body: body.neg() },
        Value::Two(x) => Value::Two(-&x),
    }
}

fn mul(a: Value, b: Value) -> Result<Value> {
    match (a, b) {
        (Value::Elt { degree: da, body: x }, Value::Elt { degree: db, body: y }) => {
            Ok(Value::Elt { degree: da + db, body: x.mul(&y) })
        }
        (Value::Two(x), Value::Two(y)) => Ok(Value::Two(&x * &y)),
        (Value::Two(x), other) | (other, Value::Two(x)) => match other.as_rational() {
            Some(c) => Ok(Value::Two(x.scale(&c))),
            None => invalid("cannot multiply a function of (w1, w2) by a function of w"),
        },
    }
}

/// c·wᵏ, if f is a single term.
fn as_monomial(f: &Laurent) -> Option<(Rational, i64)> {
    let mut terms = f.terms();
    let (e, c) = terms.next()?;
    terms.next().is_none().then(|| (c.clone(), e))
}

fn inverse(v: &Value) -> Result<Value> {
    if let Some(c) = v.as_rational() {
        if c.is_zero() {
            return invalid("division by zero");
        }
        return Ok(match v {
            Value::Two(_) => Value::Two(Laurent2::one().scale(&c.recip())),
            _ => Value::kk(Laurent::constant(c.recip())),
        });
    }
    if let (Value::Elt { degree, .. }, Some(f)) = (v, v.as_laurent()) {
        if let Some((c, e)) = as_monomial(&f) {
            return Ok(Value::Elt { degree: -degree, body: MixedTensor::constant(Laurent::monomial(c.recip(), -e)) });
        }
    }
    invalid("can only divide by a nonzero constant or a single term c*w^k")
}

fn pow(v: Value, n: i64) -> Result<Value> {
    let (base, n) = if n < 0 { (inverse(&v)?, n.unsigned_abs()) } else { (v, n as u64) };
    let n = u32::try_from(n).or_else(|_| invalid("exponent too large"))?;
    Ok(match base {
        Value::Elt { degree, body } => Value::Elt { degree: degree * n as i64, body: body.pow(n) },
        Value::Two(x) => Value::Two(x.pow(n)),
    })
}

fn kk_only(v: &Value, what: &str) -> Result<(i64, Laurent)> {
    match (v, v.as_laurent()) {
        (Value::Elt { degree, .. }, Some(f)) => Ok((*degree, f)),
        _ => invalid(format!("{what} applies to elements of K∨₀K only")),
    }
}

fn apply(func: Func, v: Value, p: Prime) -> Result<Value> {
    let pr = Rational::from_integer(p.big());
    match func {
        Func::Q | Func::Qtilde => {
            if v.degree() != 0 {
                return invalid("power operations are applied in degree 0");
            }
            match &v {
                Value::Two(x) => {
                    let qx = (x - &x.pow(p.get())).scale(&pr.recip());
                    Ok(Value::Two(if func == Func::Q { qx } else { &qx.scale(&pr) + &x.pow(p.get()) }))
                }
                Value::Elt { body, .. } => match v.as_laurent() {
                    Some(f) => {
                        let qf = q_body(&f, p);
                        Ok(Value::kk(if func == Func::Q { qf } else { &qf.scale(&pr) + &f.pow(p.get()) }))
                    }
                    None if func == Func::Q => {
                        let out = body.q_checked(p).ok_or_else(|| Error::InexactDivision(p.to_string()))?;
                        Ok(Value::Elt { degree: 0, body: out })
                    }
                    None => Ok(Value::Elt { degree: 0, body: body.qtilde(p) }),
                },
            }
        }
        // χ(u) = uw and χ(w) = w⁻¹
        Func::Chi => {
            let (degree, f) = kk_only(&v, "chi")?;
            Ok(Value::Elt { degree, body: MixedTensor::constant(f.invert_var().shift(degree)) })
        }
        Func::Coproduct => {
            let (degree, f) = kk_only(&v, "coproduct")?;
            if degree != 0 {
                return invalid("coproduct is implemented in degree 0");
            }
            Ok(Value::Two(Laurent2::embed_product(&f, &[0, 1])))
        }
    }
}

/// ψᵃ(uⁿf(w)) = aⁿuⁿ·f(a⁻¹w).
fn psi(a: &Rational, v: Value, p: Prime) -> Result<Value> {
    if !is_p_unit(a, p) {
        return Err(Error::NotUnit { value: a.to_string(), p: p.get() });
    }
    let (degree, f) = kk_only(&v, "psi")?;
    let scale = crate::arith::rational_pow(a, degree);
    Ok(Value::Elt { degree, body: MixedTensor::constant(f.scale_var(&a.recip()).scale(&scale)) })
}

pub fn evaluate(e: &Expr, p: Prime) -> Result<Value> {
    Ok(match e {
        Expr::Num(r) => Value::kk(Laurent::constant(r.clone())),
        Expr::W => Value::kk(Laurent::w()),
        Expr::WSlot(i) => Value::Two(Laurent2::var(*i)),
        Expr::U => Value::Elt { degree: 1, body: MixedTensor::one() },
        Expr::Gen(name) => Value::Elt { degree: 0, body: MixedTensor::var(name, 0) },
        Expr::Theta(family, n) => Value::kk(theta(p, *n, *family)?.into_body()),
        Expr::Neg(a) => neg(evaluate(a, p)?),
        Expr::Add(a, b) => add(evaluate(a, p)?, evaluate(b, p)?, false)?,
        Expr::Sub(a, b) => add(evaluate(a, p)?, evaluate(b, p)?, true)?,
        Expr::Mul(a, b) => mul(evaluate(a, p)?, evaluate(b, p)?)?,
        Expr::Div(a, b) => mul(evaluate(a, p)?, inverse(&evaluate(b, p)?)?)?,
        Expr::Pow(a, n) => pow(evaluate(a, p)?, *n)?,
        Expr::Apply(func, a) => apply(*func, evaluate(a, p)?, p)?,
        Expr::Psi(a, x) => psi(a, evaluate(x, p)?, p)?,
    })
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    fn text(s: &str, p: u32) -> String {
        let p = Prime::new(p).unwrap();
        evaluate(&parse(s).unwrap(), p).unwrap().display(p)
    }

    #[test]
    fn kk_values() {
        assert_eq!(text("(1 - w)/2", 2), "1/2 - 1/2*w");
        assert_eq!(text("Q(1)", 2), "0");
        assert_eq!(text("Q(w)", 3), "1/3*w - 1/3*w^3");
        assert_eq!(text("Qtilde(w^2 + w^-1)", 5), "w^-1 + w^2");
        assert_eq!(text("Theta[1]", 2), "1/8 - 1/8*w^2");
        assert_eq!(text("chi(w^2)", 2), "w^-2");
        assert_eq!(text("psi[3](w)", 2), "1/3*w");
        assert_eq!(text("coproduct(w^2 - 1)", 2), "-1 + w1^2*w2^2");
        assert_eq!(text("u^2*Theta[1]", 2), "u^2*(1/8 - 1/8*w^2)");
        assert_eq!(text("chi(u)", 2), "u*(w)");
        assert_eq!(text("psi[3](u)", 2), "u*(3)");
    }

    #[test]
    fn free_and_mixed_values() {
        assert_eq!(text("Q(x)", 2), "Q(x)");
        assert_eq!(text("Q(x^2)", 2), "2*x^2*Q(x) + 2*Q(x)^2");
        assert_eq!(text("w*x2 + Theta[0]", 2), "w*x2 + Theta0");
    }

    #[test]
    fn output_reparses() {
        let p = Prime::TWO;
        for s in ["Q(w*x2 + Theta[0])", "Theta[3]", "u^2*Theta[1]", "coproduct(Theta[1])", "Q(x^2) - 3*x"] {
            let v = evaluate(&parse(s).unwrap(), p).unwrap();
            let again = evaluate(&parse(&v.display(p)).unwrap(), p).unwrap();
            assert_eq!(again, v, "{s}");
        }
    }

    #[test]
    fn evaluation_errors() {
        let p = Prime::TWO;
        assert!(matches!(evaluate(&parse("psi[2](w)").unwrap(), p), Err(Error::NotUnit { .. })));
        assert!(matches!(evaluate(&parse("Theta[1]").unwrap(), Prime::new(3).unwrap()), Err(Error::ThetaFamilyNeedsTwo(3))));
        assert!(evaluate(&parse("1/(1 - w)").unwrap(), p).is_err());
        assert!(evaluate(&parse("u + 1").unwrap(), p).is_err());
        assert!(evaluate(&parse("w1 + w").unwrap(), p).is_err());
    }
}
