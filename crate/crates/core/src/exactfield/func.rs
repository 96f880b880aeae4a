//! Rational functions over Q in named parameters, kept in lowest terms with
//! a monic denominator.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{gcd, rational_sqrt, ParamPoly};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParamFunction {
    num: ParamPoly,
    den: ParamPoly,
}

impl ParamFunction {
    pub fn zero() -> Self {
        ParamFunction {
            num: ParamPoly::zero(),
            den: ParamPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(ParamPoly::one())
    }

    pub fn from_poly(p: ParamPoly) -> Self {
        ParamFunction {
            num: p,
            den: ParamPoly::one(),
        }
    }

    pub fn from_rational(q: BigRational) -> Self {
        Self::from_poly(ParamPoly::constant(q))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn param(name: &str) -> Self {
        Self::from_poly(ParamPoly::var(name))
    }

    /// Build `num/den` in lowest terms. Panics on a zero denominator.
    pub fn new(num: ParamPoly, den: ParamPoly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        if let Some(c) = den.as_constant() {
            return Self::from_poly(num.scale(&c.recip()));
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        };
        Self::with_monic_den(num, den)
    }

    fn with_monic_den(num: ParamPoly, den: ParamPoly) -> Self {
        let lc = den.leading_coeff();
        if lc.is_one() {
            ParamFunction { num, den }
        } else {
            let k = lc.recip();
            ParamFunction {
                num: num.scale(&k),
                den: den.scale(&k),
            }
        }
    }

    pub fn numer(&self) -> &ParamPoly {
        &self.num
    }

    pub fn denom(&self) -> &ParamPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn vars(&self) -> Vec<String> {
        let mut v: Vec<String> = self.num.vars().iter().chain(self.den.vars()).cloned().collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && other.den.is_one() {
            return Self::from_poly(self.num.add(&other.num));
        }
        if self.den == other.den {
            let num = self.num.add(&other.num);
            return Self::new(num, self.den.clone());
        }
        if other.den.is_one() {
            let num = self.num.add(&other.num.mul(&self.den));
            return ParamFunction { num, den: self.den.clone() };
        }
        if self.den.is_one() {
            let num = other.num.add(&self.num.mul(&other.den));
            return ParamFunction { num, den: other.den.clone() };
        }
        let g = gcd(&self.den, &other.den);
        let d1 = self.den.div_exact(&g).unwrap();
        let d2 = other.den.div_exact(&g).unwrap();
        let num = self.num.mul(&d2).add(&other.num.mul(&d1));
        let den = self.den.mul(&d2);
        if num.is_zero() {
            return Self::zero();
        }
        if g.is_one() {
            return ParamFunction { num, den };
        }
        let h = gcd(&num, &g);
        if h.is_one() {
            ParamFunction { num, den }
        } else {
            Self::with_monic_den(num.div_exact(&h).unwrap(), den.div_exact(&h).unwrap())
        }
    }

    pub fn neg(&self) -> Self {
        ParamFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return Self::from_poly(self.num.mul(&other.num));
        }
        if let Some(c) = other.num.as_constant().filter(|_| other.den.is_one()) {
            return ParamFunction { num: self.num.scale(&c), den: self.den.clone() };
        }
        if let Some(c) = self.num.as_constant().filter(|_| self.den.is_one()) {
            return ParamFunction { num: other.num.scale(&c), den: other.den.clone() };
        }
        let g1 = gcd(&self.num, &other.den);
        let g2 = gcd(&other.num, &self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = other.den.div_exact(&g1).unwrap();
        let n2 = other.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        Self::with_monic_den(n1.mul(&n2), d1.mul(&d2))
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        ParamFunction {
            num: self.num.scale(k),
            den: self.den.clone(),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::with_monic_den(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        Some(self.mul(&other.inv()?))
    }

    /// Square root in Q(params) when one exists; the returned root has a
    /// positive leading coefficient in its numerator.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        if let Some(q) = self.as_rational() {
            return rational_sqrt(&q).map(Self::from_rational);
        }
        // num/den with den monic: num = c*P^2 and den = R^2 up to the
        // scalar absorbed in c
        let c = self.num.leading_coeff();
        let sc = rational_sqrt(&c)?;
        let p = self.num.scale(&c.recip()).sqrt()?;
        let r = self.den.sqrt()?;
        Some(Self::new(p.scale(&sc), r))
    }

    pub fn eval_f64(&self, lookup: &dyn Fn(&str) -> num_complex::Complex64) -> num_complex::Complex64 {
        self.num.eval_f64(lookup) / self.den.eval_f64(lookup)
    }
}

impl fmt::Display for ParamFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num.fmt_with_parens(), self.den.fmt_with_parens())
        }
    }
}

impl Default for ParamFunction {
    fn default() -> Self {
        Self::zero()
    }
}

impl Zero for ParamFunction {
    fn zero() -> Self {
        ParamFunction::zero()
    }
    fn is_zero(&self) -> bool {
        ParamFunction::is_zero(self)
    }
}

impl std::ops::Add for ParamFunction {
    type Output = ParamFunction;
    fn add(self, rhs: Self) -> Self {
        ParamFunction::add(&self, &rhs)
    }
}

impl One for ParamFunction {
    fn one() -> Self {
        ParamFunction::one()
    }
}

impl std::ops::Mul for ParamFunction {
    type Output = ParamFunction;
    fn mul(self, rhs: Self) -> Self {
        ParamFunction::mul(&self, &rhs)
    }
}
