//! Exact scalar fields: big rationals and Gaussian rationals `a + b i`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

/// `n / d` as an exact rational. Panics on `d == 0`.
pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Formats a rational as `n` or `n/d`.
pub fn fmt_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// The operations needed for exact linear algebra.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    /// Multiplicative inverse; `None` for zero.
    fn inverse(&self) -> Option<Self>;

    fn from_rational(x: Rational) -> Self;
}

impl Field for Rational {
    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_rational(x: Rational) -> Self {
        x
    }
}

/// Gaussian rational `re + im·i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Gaussian {
    pub re: Rational,
    pub im: Rational,
}

impl Gaussian {
    pub fn new(re: Rational, im: Rational) -> Self {
        Gaussian { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Gaussian {
            re,
            im: Rational::zero(),
        }
    }

    pub fn i() -> Self {
        Gaussian {
            re: Rational::zero(),
            im: Rational::one(),
        }
    }

    pub fn conj(&self) -> Self {
        Gaussian::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Exact square root in `Q(i)` when one exists.
    pub fn sqrt(&self) -> Option<Gaussian> {
        if self.im.is_zero() {
            if self.re.is_negative() {
                return rational_sqrt(&-self.re.clone()).map(|s| Gaussian::new(Rational::zero(), s));
            }
            return rational_sqrt(&self.re).map(Gaussian::real);
        }
        // (x + iy)^2 = a + ib  with  x^2 = (a + |z|)/2, y = b / 2x.
        let modulus = rational_sqrt(&self.norm_sqr())?;
        let two = qi(2);
        let x = rational_sqrt(&((&self.re + &modulus) / &two))?;
        if x.is_zero() {
            return None;
        }
        let y = &self.im / (&two * &x);
        Some(Gaussian::new(x, y))
    }
}

impl fmt::Display for Gaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rational(&self.re)),
            (true, false) => write!(f, "{}*i", fmt_rational(&self.im)),
            (false, false) => {
                if self.im.is_negative() {
                    write!(f, "({}-{}*i)", fmt_rational(&self.re), fmt_rational(&-self.im.clone()))
                } else {
                    write!(f, "({}+{}*i)", fmt_rational(&self.re), fmt_rational(&self.im))
                }
            }
        }
    }
}

impl Zero for Gaussian {
    fn zero() -> Self {
        Gaussian::default()
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for Gaussian {
    fn one() -> Self {
        Gaussian::real(Rational::one())
    }
}

impl Add for Gaussian {
    type Output = Gaussian;
    fn add(self, rhs: Gaussian) -> Gaussian {
        Gaussian::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for Gaussian {
    type Output = Gaussian;
    fn sub(self, rhs: Gaussian) -> Gaussian {
        Gaussian::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for Gaussian {
    type Output = Gaussian;
    fn mul(self, rhs: Gaussian) -> Gaussian {
        let re = &self.re * &rhs.re - &self.im * &rhs.im;
        let im = &self.re * &rhs.im + &self.im * &rhs.re;
        Gaussian::new(re, im)
    }
}

impl Neg for Gaussian {
    type Output = Gaussian;
    fn neg(self) -> Gaussian {
        Gaussian::new(-self.re, -self.im)
    }
}

impl Div for Gaussian {
    type Output = Gaussian;
    fn div(self, rhs: Gaussian) -> Gaussian {
        self * rhs.inverse().expect("division by zero Gaussian rational")
    }
}

impl Field for Gaussian {
    fn inverse(&self) -> Option<Self> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return None;
        }
        Some(Gaussian::new(&self.re / &n, -(&self.im / &n)))
    }

    fn from_rational(x: Rational) -> Self {
        Gaussian::real(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_are_reduced() {
        let x = q(6, -4);
        assert_eq!(x, q(-3, 2));
        assert!(x.denom().is_positive());
        assert_eq!(fmt_rational(&x), "-3/2");
    }

    #[test]
    fn gaussian_field_ops() {
        let a = Gaussian::new(q(1, 2), qi(1));
        let b = Gaussian::new(qi(-3), q(2, 5));
        let prod = a.clone() * b.clone();
        assert_eq!(prod.clone() / b.clone(), a);
        assert_eq!(Gaussian::i() * Gaussian::i(), -Gaussian::one());
        assert!(Gaussian::zero().inverse().is_none());
        assert_eq!(a.clone() * a.inverse().unwrap(), Gaussian::one());
    }

    #[test]
    fn square_roots() {
        assert_eq!(rational_sqrt(&q(9, 4)), Some(q(3, 2)));
        assert_eq!(rational_sqrt(&qi(2)), None);
        assert_eq!(Gaussian::real(qi(-4)).sqrt(), Some(Gaussian::new(qi(0), qi(2))));
        // (1 + 2i)^2 = -3 + 4i
        let s = Gaussian::new(qi(-3), qi(4)).sqrt().unwrap();
        assert_eq!(s.clone() * s, Gaussian::new(qi(-3), qi(4)));
    }

    #[test]
    fn display() {
        assert_eq!(Gaussian::new(qi(0), q(-1, 2)).to_string(), "-1/2*i");
        assert_eq!(Gaussian::new(qi(1), q(-1, 2)).to_string(), "(1-1/2*i)");
        assert_eq!(Gaussian::real(qi(3)).to_string(), "3");
    }
}
