use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::symcore::{Rsf, Var, Q};

/// `rat + root * sqrt(2)` with rational-function parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surd {
    pub rat: Rsf,
    pub root: Rsf,
}

impl Surd {
    pub fn zero() -> Surd {
        Surd { rat: Rsf::zero(), root: Rsf::zero() }
    }
    pub fn one() -> Surd {
        Surd::from(Rsf::one())
    }
    pub fn sqrt2() -> Surd {
        Surd { rat: Rsf::zero(), root: Rsf::one() }
    }
    pub fn new(rat: Rsf, root: Rsf) -> Surd {
        Surd { rat, root }
    }
    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.root.is_zero()
    }
    pub fn scale(&self, c: &Q) -> Surd {
        Surd { rat: self.rat.scale(c), root: self.root.scale(c) }
    }
    pub fn scale_rsf(&self, c: &Rsf) -> Surd {
        Surd { rat: &self.rat * c, root: &self.root * c }
    }
    pub fn partial(&self, v: Var) -> Surd {
        Surd { rat: self.rat.partial(v), root: self.root.partial(v) }
    }
    pub fn map(&self, f: impl Fn(&Rsf) -> Rsf) -> Surd {
        Surd { rat: f(&self.rat), root: f(&self.root) }
    }
    /// `(a - b sqrt2) / (a^2 - 2 b^2)`; the norm of a nonzero element never
    /// vanishes since `sqrt 2` is irrational.
    pub fn inv(&self) -> Option<Surd> {
        if self.is_zero() {
            return None;
        }
        let norm = &self.rat * &self.rat - (&self.root * &self.root).scale(&Q::from_integer(2.into()));
        let ni = norm.inv()?;
        Some(Surd { rat: &self.rat * &ni, root: -(&self.root * &ni) })
    }
}

impl From<Rsf> for Surd {
    fn from(r: Rsf) -> Surd {
        Surd { rat: r, root: Rsf::zero() }
    }
}

impl From<i64> for Surd {
    fn from(v: i64) -> Surd {
        Surd::from(Rsf::int(v))
    }
}

impl Add<&Surd> for &Surd {
    type Output = Surd;
    fn add(self, o: &Surd) -> Surd {
        Surd { rat: &self.rat + &o.rat, root: &self.root + &o.root }
    }
}

impl Sub<&Surd> for &Surd {
    type Output = Surd;
    fn sub(self, o: &Surd) -> Surd {
        Surd { rat: &self.rat - &o.rat, root: &self.root - &o.root }
    }
}

impl Mul<&Surd> for &Surd {
    type Output = Surd;
    fn mul(self, o: &Surd) -> Surd {
        let two = Q::from_integer(2.into());
        Surd {
            rat: &self.rat * &o.rat + (&self.root * &o.root).scale(&two),
            root: &self.rat * &o.root + &self.root * &o.rat,
        }
    }
}

impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd { rat: -&self.rat, root: -&self.root }
    }
}

macro_rules! owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Surd> for Surd {
            type Output = Surd;
            fn $m(self, o: Surd) -> Surd {
                (&self).$m(&o)
            }
        }
        impl $tr<&Surd> for Surd {
            type Output = Surd;
            fn $m(self, o: &Surd) -> Surd {
                (&self).$m(o)
            }
        }
    };
}

owned!(Add, add);
owned!(Sub, sub);
owned!(Mul, mul);

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        -&self
    }
}

impl std::iter::Sum for Surd {
    fn sum<I: Iterator<Item = Surd>>(iter: I) -> Surd {
        iter.fold(Surd::zero(), |a, b| a + b)
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.rat.is_zero(), self.root.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", self.rat),
            (true, false) => write!(f, "({})*sqrt2", self.root),
            (false, false) => write!(f, "{} + ({})*sqrt2", self.rat, self.root),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::q;

    #[test]
    fn sqrt2_squares_to_two() {
        assert_eq!(&Surd::sqrt2() * &Surd::sqrt2(), Surd::from(2));
    }

    #[test]
    fn inverse() {
        let a = Surd::new(Rsf::x(1), Rsf::int(3));
        assert_eq!(&a * &a.inv().unwrap(), Surd::one());
        assert_eq!(Surd::sqrt2().inv().unwrap(), Surd::sqrt2().scale(&q(1, 2)));
    }
}
