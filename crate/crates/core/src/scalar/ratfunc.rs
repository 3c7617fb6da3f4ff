use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{Field, Polynomial, Rational, ScalarError};

/// Element of ℚ(t): `numerator / denominator` with coprime parts and a monic
/// denominator, so equality is structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    /// Builds and normalizes `num / den`.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::from_poly(Polynomial::zero()));
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let lc = den.leading().expect("nonzero").clone();
        let inv = lc.recip();
        Ok(RationalFunction {
            num: num.scale(&inv),
            den: den.scale(&inv),
        })
    }

    pub fn from_poly(p: Polynomial) -> Self {
        RationalFunction {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn t() -> Self {
        Self::from_poly(Polynomial::t())
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, t0: &Rational) -> Result<Rational, ScalarError> {
        let d = self.den.eval(t0);
        if Zero::is_zero(&d) {
            return Err(ScalarError::Pole(t0.clone()));
        }
        Ok(self.num.eval(t0) / d)
    }

    pub fn pow(&self, e: u32) -> Self {
        RationalFunction {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }
}

/// `rf_eval` in function form.
pub fn rf_eval(f: &RationalFunction, t0: &Rational) -> Result<Rational, ScalarError> {
    f.eval(t0)
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            return write!(f, "{}", self.num);
        }
        let num = if self
            .num
            .coeffs()
            .iter()
            .filter(|c| !Zero::is_zero(*c))
            .count()
            > 1
        {
            format!("({})", self.num)
        } else {
            self.num.to_string()
        };
        write!(f, "{}/({})", num, self.den)
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}

impl Add for RationalFunction {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        if self.den == rhs.den {
            return Self::new(&self.num + &rhs.num, self.den).expect("nonzero denominator");
        }
        Self::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
        .expect("nonzero denominator")
    }
}

impl Sub for RationalFunction {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for RationalFunction {
    type Output = Self;
    fn neg(self) -> Self {
        RationalFunction {
            num: -self.num,
            den: self.den,
        }
    }
}

impl Mul for RationalFunction {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.num.is_zero() || rhs.num.is_zero() {
            return Self::zero();
        }
        Self::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero denominator")
    }
}

impl Field for RationalFunction {
    fn zero() -> Self {
        Self::from_poly(Polynomial::zero())
    }

    fn one() -> Self {
        Self::from_poly(Polynomial::one())
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(Self::new(self.den.clone(), self.num.clone()).expect("nonzero numerator"))
        }
    }

    fn from_rational(r: &Rational) -> Self {
        Self::from_poly(Polynomial::constant(r.clone()))
    }

    fn as_rational(&self) -> Option<Rational> {
        if self.num.is_constant() && self.den.is_constant() {
            Some(self.num.constant_term())
        } else {
            None
        }
    }

    fn is_one(&self) -> bool {
        self.den.is_constant() && self.num.is_constant() && One::is_one(&self.num.constant_term())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use proptest::prelude::*;

    fn poly(c: &[i64]) -> Polynomial {
        Polynomial::from_i64(c)
    }

    fn jump_entry() -> RationalFunction {
        // 2t(1-t) / ((1-t)^2 + t^2)
        let t = Polynomial::t();
        let one_minus_t = &Polynomial::one() - &t;
        let num = &(&t * &one_minus_t).scale(&rat(2, 1)) + &Polynomial::zero();
        let den = &(&one_minus_t * &one_minus_t) + &(&t * &t);
        RationalFunction::new(num, den).unwrap()
    }

    #[test]
    fn normalizes() {
        // (t^2 - 1) / (2t - 2) = (t + 1)/2
        let f = RationalFunction::new(poly(&[-1, 0, 1]), poly(&[-2, 2])).unwrap();
        assert_eq!(f.denominator(), &Polynomial::one());
        assert_eq!(f.numerator(), &Polynomial::new(vec![rat(1, 2), rat(1, 2)]));
        assert!(RationalFunction::new(poly(&[1]), Polynomial::zero()).is_err());
    }

    #[test]
    fn eval_examples() {
        let f = RationalFunction::t();
        assert_eq!(f.eval(&rat(0, 1)).unwrap(), rat(0, 1));
        // numerator 2·(1/2)·(1/2) = 1/2, denominator 1/4 + 1/4 = 1/2
        assert_eq!(rf_eval(&jump_entry(), &rat(1, 2)).unwrap(), rat(1, 1));
        let g = RationalFunction::new(poly(&[1]), poly(&[-1, 1])).unwrap();
        assert_eq!(g.eval(&rat(1, 1)), Err(ScalarError::Pole(rat(1, 1))));
    }

    #[test]
    fn display() {
        assert_eq!(jump_entry().to_string(), "(-t^2 + t)/(t^2 - t + 1/2)");
        assert_eq!(RationalFunction::t().to_string(), "t");
    }

    fn arb_rf() -> impl Strategy<Value = RationalFunction> {
        (
            prop::collection::vec(-4i64..4, 0..3),
            prop::collection::vec(-4i64..4, 1..3),
        )
            .prop_filter_map("nonzero denominator", |(n, d)| {
                RationalFunction::new(poly(&n), poly(&d)).ok()
            })
    }

    proptest! {
        #[test]
        fn eval_is_additive(f in arb_rf(), g in arb_rf(), n in -10i64..10, d in 1i64..5) {
            let t0 = rat(n, d);
            let sum = f.clone() + g.clone();
            if let (Ok(a), Ok(b)) = (f.eval(&t0), g.eval(&t0)) {
                prop_assert_eq!(sum.eval(&t0).unwrap(), a + b);
            }
        }

        #[test]
        fn field_inverse(f in arb_rf()) {
            if !f.is_zero() {
                prop_assert!((f.clone() * f.inv().unwrap()).is_one());
            }
        }
    }
}
