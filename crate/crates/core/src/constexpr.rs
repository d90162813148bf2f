//! Exact integer constant expressions that may be too large to materialize.
//!
//! The universal system carries a coefficient `(2z)^(5^59 + 1)`, whose decimal
//! expansion has about 10^41 digits. Such constants stay as expression trees
//! and only fold to literals when both operands are literals (and, for powers,
//! when the result fits in 64 bits). Anything else is evaluated on request by
//! [`ConstExpr::materialize`], which refuses rather than approximates.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::Coefficient;

/// Largest result, in bits, that [`ConstExpr::materialize`] will build.
pub const MATERIALIZE_LIMIT_BITS: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ConstExpr {
    Lit(BigInt),
    Add(Box<ConstExpr>, Box<ConstExpr>),
    Mul(Box<ConstExpr>, Box<ConstExpr>),
    Pow(Box<ConstExpr>, Box<ConstExpr>),
}

impl ConstExpr {
    pub fn lit(v: impl Into<BigInt>) -> Self {
        ConstExpr::Lit(v.into())
    }

    pub fn as_lit(&self) -> Option<&BigInt> {
        match self {
            ConstExpr::Lit(v) => Some(v),
            _ => None,
        }
    }

    /// `base^exponent`, folded only when the result is a small literal.
    pub fn pow(base: ConstExpr, exponent: ConstExpr) -> Self {
        if let (ConstExpr::Lit(b), ConstExpr::Lit(e)) = (&base, &exponent) {
            if e.is_zero() {
                return ConstExpr::Lit(BigInt::one());
            }
            if let Some(e) = e.to_u32() {
                if b.is_zero() || b.abs().is_one() || b.bits() * (e as u64) <= 63 {
                    return ConstExpr::Lit(Pow::pow(b, e));
                }
            }
        }
        ConstExpr::Pow(Box::new(base), Box::new(exponent))
    }

    /// Exact value, or an error naming the expression when the value is too
    /// large (or has a negative exponent).
    pub fn materialize(&self) -> Result<BigInt> {
        match self {
            ConstExpr::Lit(v) => Ok(v.clone()),
            ConstExpr::Add(a, b) => Ok(a.materialize()? + b.materialize()?),
            ConstExpr::Mul(a, b) => Ok(a.materialize()? * b.materialize()?),
            ConstExpr::Pow(b, e) => {
                let base = b.materialize()?;
                let exp = e.materialize().map_err(|_| Error::NonMaterializable(self.to_string()))?;
                if exp.is_negative() {
                    return Err(Error::NonMaterializable(self.to_string()));
                }
                if base.is_zero() || base.abs().is_one() {
                    let odd = exp.bit(0);
                    return Ok(if base.is_zero() {
                        if exp.is_zero() {
                            BigInt::one()
                        } else {
                            BigInt::zero()
                        }
                    } else if base.is_negative() && odd {
                        -BigInt::one()
                    } else {
                        BigInt::one()
                    });
                }
                let e = exp.to_u64().ok_or_else(|| Error::NonMaterializable(self.to_string()))?;
                if e.saturating_mul(base.bits()) > MATERIALIZE_LIMIT_BITS {
                    return Err(Error::NonMaterializable(self.to_string()));
                }
                Ok(Pow::pow(&base, e))
            }
        }
    }

    pub fn is_materializable(&self) -> bool {
        self.materialize().is_ok()
    }

    /// Structural zero test that does not require materialization for powers
    /// and products.
    fn known_zero(&self) -> bool {
        match self {
            ConstExpr::Lit(v) => v.is_zero(),
            ConstExpr::Mul(a, b) => a.known_zero() || b.known_zero(),
            ConstExpr::Pow(b, _) => b.known_zero(),
            ConstExpr::Add(..) => self.materialize().map(|v| v.is_zero()).unwrap_or(false),
        }
    }

    fn negative_hint(&self) -> bool {
        match self {
            ConstExpr::Lit(v) => v.is_negative(),
            ConstExpr::Mul(a, _) => a.negative_hint(),
            _ => false,
        }
    }
}

impl From<BigInt> for ConstExpr {
    fn from(v: BigInt) -> Self {
        ConstExpr::Lit(v)
    }
}

impl From<i64> for ConstExpr {
    fn from(v: i64) -> Self {
        ConstExpr::Lit(BigInt::from(v))
    }
}

impl Add for ConstExpr {
    type Output = ConstExpr;

    fn add(self, rhs: ConstExpr) -> ConstExpr {
        match (self, rhs) {
            (ConstExpr::Lit(a), ConstExpr::Lit(b)) => ConstExpr::Lit(a + b),
            (ConstExpr::Lit(a), x) | (x, ConstExpr::Lit(a)) if a.is_zero() => x,
            (a, b) => ConstExpr::Add(Box::new(a), Box::new(b)),
        }
    }
}

impl Mul for ConstExpr {
    type Output = ConstExpr;

    fn mul(self, rhs: ConstExpr) -> ConstExpr {
        match (self, rhs) {
            (ConstExpr::Lit(a), ConstExpr::Lit(b)) => ConstExpr::Lit(a * b),
            (ConstExpr::Lit(a), _) | (_, ConstExpr::Lit(a)) if a.is_zero() => ConstExpr::Lit(a),
            (ConstExpr::Lit(a), x) | (x, ConstExpr::Lit(a)) if a.is_one() => x,
            (ConstExpr::Lit(a), ConstExpr::Mul(l, r)) | (ConstExpr::Mul(l, r), ConstExpr::Lit(a)) => match *l {
                ConstExpr::Lit(b) => ConstExpr::Lit(a * b) * *r,
                other => ConstExpr::Mul(Box::new(ConstExpr::Lit(a)), Box::new(ConstExpr::Mul(Box::new(other), r))),
            },
            (x, ConstExpr::Lit(a)) => ConstExpr::Mul(Box::new(ConstExpr::Lit(a)), Box::new(x)),
            (a, b) => ConstExpr::Mul(Box::new(a), Box::new(b)),
        }
    }
}

impl Neg for ConstExpr {
    type Output = ConstExpr;

    fn neg(self) -> ConstExpr {
        ConstExpr::Lit(-BigInt::one()) * self
    }
}

impl Sub for ConstExpr {
    type Output = ConstExpr;

    fn sub(self, rhs: ConstExpr) -> ConstExpr {
        self + (-rhs)
    }
}

impl Zero for ConstExpr {
    fn zero() -> Self {
        ConstExpr::Lit(BigInt::zero())
    }

    fn is_zero(&self) -> bool {
        self.known_zero()
    }
}

impl One for ConstExpr {
    fn one() -> Self {
        ConstExpr::Lit(BigInt::one())
    }

    fn is_one(&self) -> bool {
        matches!(self, ConstExpr::Lit(v) if v.is_one())
    }
}

impl Coefficient for ConstExpr {
    fn from_i64(v: i64) -> Self {
        ConstExpr::from(v)
    }

    fn is_negative_hint(&self) -> bool {
        self.negative_hint()
    }
}

/// Serialized form: decimal literals, `add(a,b)`, `mul(a,b)`, `pow(b,e)`.
impl fmt::Display for ConstExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstExpr::Lit(v) => write!(f, "{v}"),
            ConstExpr::Add(a, b) => write!(f, "add({a},{b})"),
            ConstExpr::Mul(a, b) => write!(f, "mul({a},{b})"),
            ConstExpr::Pow(b, e) => write!(f, "pow({b},{e})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_to_the_fifty_nine_is_exact() {
        let p = ConstExpr::pow(5.into(), 59.into());
        assert!(matches!(p, ConstExpr::Pow(..)), "stays symbolic at construction");
        let v = p.materialize().unwrap();
        assert_eq!(v.to_string(), "173472347597680709441192448139190673828125");
        assert_eq!(v.to_string().len(), 42);
    }

    #[test]
    fn tower_refuses_to_materialize() {
        let e = ConstExpr::pow(5.into(), 59.into()) + ConstExpr::from(1);
        let tower = ConstExpr::pow(2.into(), e);
        assert!(matches!(tower.materialize(), Err(Error::NonMaterializable(_))));
        assert!(!tower.is_zero());
        assert_eq!(tower.to_string(), "pow(2,add(pow(5,59),1))");
    }

    #[test]
    fn small_literals_fold() {
        assert_eq!(ConstExpr::pow(2.into(), 2.into()), ConstExpr::from(4));
        assert_eq!(ConstExpr::from(2) * ConstExpr::from(4), ConstExpr::from(8));
        assert_eq!(ConstExpr::from(3) + ConstExpr::from(-3), ConstExpr::zero());
        assert_eq!(ConstExpr::pow((-1).into(), 1001.into()), ConstExpr::from(-1));
    }

    #[test]
    fn scaling_symbolic_keeps_literal_in_front() {
        let p = ConstExpr::pow(3.into(), 100.into());
        let scaled = p.clone() * ConstExpr::from(2);
        assert_eq!(scaled.to_string(), "mul(2,pow(3,100))");
        let neg = -scaled;
        assert_eq!(neg.to_string(), "mul(-2,pow(3,100))");
        assert!(neg.is_negative_hint());
        assert_eq!(neg.materialize().unwrap(), -BigInt::from(2) * Pow::pow(BigInt::from(3), 100u32));
    }
}
