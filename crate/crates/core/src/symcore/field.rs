//! Reduced rational functions.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::{gcd, qi, Poly, Var, FIBRE_MASK, Q};
use crate::error::{Error, Result};

/// Exact rational function `num/den` with `gcd(num, den) = 1` and a monic
/// denominator. Zero is stored as `0/1`.
#[derive(Clone, Debug, Default)]
pub struct Rsf {
    num: Poly,
    den: Poly,
}

impl Rsf {
    pub fn zero() -> Rsf {
        Rsf { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Rsf {
        Rsf::from_poly(Poly::one())
    }

    pub fn from_poly(p: Poly) -> Rsf {
        Rsf { num: p, den: Poly::one() }
    }

    pub fn constant(c: Q) -> Rsf {
        Rsf::from_poly(Poly::constant(c))
    }

    pub fn int(v: i64) -> Rsf {
        Rsf::constant(qi(v))
    }

    pub fn var(v: Var) -> Rsf {
        Rsf::from_poly(Poly::var(v))
    }

    pub fn x(i: usize) -> Rsf {
        Rsf::var(Var::X(i as u8))
    }

    pub fn p(i: usize) -> Rsf {
        Rsf::var(Var::P(i as u8))
    }

    /// Reduce `num/den`. Panics on a zero denominator; use [`Rsf::checked_div`]
    /// for fallible division.
    pub fn new(num: Poly, den: Poly) -> Rsf {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Rsf::zero();
        }
        if let Some(c) = den.constant_value() {
            return Rsf { num: num.scale(&c.recip()), den: Poly::one() };
        }
        if let Some(qt) = num.exact_div(&den) {
            return Rsf::from_poly(qt);
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
        };
        let lc = den.leading().unwrap().1.clone();
        if lc.is_one() {
            Rsf { num, den }
        } else {
            let inv = lc.recip();
            Rsf { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
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

    pub fn constant_value(&self) -> Option<Q> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn var_mask(&self) -> u32 {
        self.num.var_mask() | self.den.var_mask()
    }

    pub fn depends_on_fibre(&self) -> bool {
        self.var_mask() & FIBRE_MASK != 0
    }

    pub fn neg(&self) -> Rsf {
        Rsf { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn scale(&self, c: &Q) -> Rsf {
        if c.is_zero() {
            return Rsf::zero();
        }
        Rsf { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn add_ref(&self, o: &Rsf) -> Rsf {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && o.den.is_one() {
            return Rsf::from_poly(self.num.add(&o.num));
        }
        if self.den == o.den {
            return Rsf::new(self.num.add(&o.num), self.den.clone());
        }
        if o.den.is_one() {
            // gcd(a + b d, d) = gcd(a, d) = 1
            return Rsf { num: self.num.add(&o.num.mul(&self.den)), den: self.den.clone() };
        }
        if self.den.is_one() {
            return Rsf { num: o.num.add(&self.num.mul(&o.den)), den: o.den.clone() };
        }
        Rsf::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    pub fn sub_ref(&self, o: &Rsf) -> Rsf {
        self.add_ref(&o.neg())
    }

    pub fn mul_ref(&self, o: &Rsf) -> Rsf {
        if self.is_zero() || o.is_zero() {
            return Rsf::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return Rsf::from_poly(self.num.mul(&o.num));
        }
        // cross-cancel so the product is already reduced
        let g1 = gcd(&self.num, &o.den);
        let g2 = gcd(&o.num, &self.den);
        let n1 = self.num.exact_div(&g1).unwrap();
        let d2 = o.den.exact_div(&g1).unwrap();
        let n2 = o.num.exact_div(&g2).unwrap();
        let d1 = self.den.exact_div(&g2).unwrap();
        let num = n1.mul(&n2);
        let den = d1.mul(&d2);
        let lc = den.leading().unwrap().1.clone();
        if lc.is_one() {
            Rsf { num, den }
        } else {
            let inv = lc.recip();
            Rsf { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn inv(&self) -> Option<Rsf> {
        if self.is_zero() {
            None
        } else {
            Some(Rsf::new(self.den.clone(), self.num.clone()))
        }
    }

    pub fn checked_div(&self, o: &Rsf) -> Result<Rsf> {
        let inv = o.inv().ok_or(Error::DivisionByZero)?;
        Ok(self.mul_ref(&inv))
    }

    pub fn pow(&self, e: i32) -> Rsf {
        if e >= 0 {
            let e = e as u32;
            Rsf { num: self.num.pow(e), den: self.den.pow(e) }
        } else {
            self.inv().expect("negative power of zero").pow(-e)
        }
    }

    pub fn partial_slot(&self, slot: usize) -> Rsf {
        let dn = self.num.derivative(slot);
        if self.den.is_one() {
            return Rsf::from_poly(dn);
        }
        let dd = self.den.derivative(slot);
        if dd.is_zero() {
            return Rsf::new(dn, self.den.clone());
        }
        Rsf::new(dn.mul(&self.den).sub(&self.num.mul(&dd)), self.den.mul(&self.den))
    }

    pub fn partial(&self, v: Var) -> Rsf {
        self.partial_slot(v.slot())
    }

    /// Partial derivative by coordinate name, restricted to a chart of
    /// dimension `n`.
    pub fn partial_named(&self, name: &str, n: usize) -> Result<Rsf> {
        let v = Var::parse(name)
            .filter(|v| v.index() <= n)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        Ok(self.partial(v))
    }

    /// Substitute a rational function for a variable.
    pub fn substitute(&self, v: Var, val: &Rsf) -> Rsf {
        let s = v.slot();
        let horner = |p: &Poly| {
            let mut acc = Rsf::zero();
            for c in p.coeffs_in(s).iter().rev() {
                acc = acc.mul_ref(val).add_ref(&Rsf::from_poly(c.clone()));
            }
            acc
        };
        if self.var_mask() & (1 << s) == 0 {
            return self.clone();
        }
        horner(&self.num).mul_ref(&horner(&self.den).inv().expect("substitution zeroes denominator"))
    }

    /// Degree-`d` part in the fibre variables. Requires a denominator free of
    /// fibre variables.
    pub fn grade_in_p(&self, d: u32) -> Result<Rsf> {
        if self.den.var_mask() & FIBRE_MASK != 0 {
            return Err(Error::NotPolynomialInP(self.to_string()));
        }
        Ok(Rsf::new(self.num.graded_part(FIBRE_MASK, d), self.den.clone()))
    }

    /// Largest fibre degree present (requires polynomial dependence on p).
    pub fn max_p_degree(&self) -> Result<u32> {
        if self.den.var_mask() & FIBRE_MASK != 0 {
            return Err(Error::NotPolynomialInP(self.to_string()));
        }
        Ok(self.num.max_degree_in(FIBRE_MASK))
    }
}

impl PartialEq for Rsf {
    fn eq(&self, o: &Rsf) -> bool {
        if self.den == o.den {
            return self.num == o.num;
        }
        self.num.mul(&o.den) == o.num.mul(&self.den)
    }
}

impl Eq for Rsf {}

impl fmt::Display for Rsf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            let multi = |p: &Poly| p.terms().len() > 1 || !p.terms()[0].1.is_one();
            let ns = if multi(&self.num) { format!("({})", self.num) } else { self.num.to_string() };
            let ds = if multi(&self.den) { format!("({})", self.den) } else { self.den.to_string() };
            write!(f, "{ns}/{ds}")
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl $tr<&Rsf> for &Rsf {
            type Output = Rsf;
            fn $m(self, o: &Rsf) -> Rsf {
                self.$f(o)
            }
        }
        impl $tr<Rsf> for Rsf {
            type Output = Rsf;
            fn $m(self, o: Rsf) -> Rsf {
                self.$f(&o)
            }
        }
        impl $tr<&Rsf> for Rsf {
            type Output = Rsf;
            fn $m(self, o: &Rsf) -> Rsf {
                self.$f(o)
            }
        }
        impl $tr<Rsf> for &Rsf {
            type Output = Rsf;
            fn $m(self, o: Rsf) -> Rsf {
                self.$f(&o)
            }
        }
    };
}

binop!(Add, add, add_ref);
binop!(Sub, sub, sub_ref);
binop!(Mul, mul, mul_ref);

impl Div<&Rsf> for &Rsf {
    type Output = Rsf;
    fn div(self, o: &Rsf) -> Rsf {
        self.checked_div(o).expect("division by zero")
    }
}

impl Div<Rsf> for Rsf {
    type Output = Rsf;
    fn div(self, o: Rsf) -> Rsf {
        &self / &o
    }
}

impl Neg for Rsf {
    type Output = Rsf;
    fn neg(self) -> Rsf {
        Rsf::neg(&self)
    }
}

impl Neg for &Rsf {
    type Output = Rsf;
    fn neg(self) -> Rsf {
        Rsf::neg(self)
    }
}

impl Zero for Rsf {
    fn zero() -> Self {
        Rsf::zero()
    }
    fn is_zero(&self) -> bool {
        Rsf::is_zero(self)
    }
}

impl One for Rsf {
    fn one() -> Self {
        Rsf::one()
    }
}

impl std::iter::Sum for Rsf {
    fn sum<I: Iterator<Item = Rsf>>(iter: I) -> Rsf {
        iter.fold(Rsf::zero(), |a, b| a.add_ref(&b))
    }
}

impl From<i64> for Rsf {
    fn from(v: i64) -> Rsf {
        Rsf::int(v)
    }
}

impl From<Q> for Rsf {
    fn from(v: Q) -> Rsf {
        Rsf::constant(v)
    }
}
