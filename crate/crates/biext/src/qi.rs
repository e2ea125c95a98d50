//! Exact arithmetic over the Gaussian rationals ℚ(i).
//!
//! Every binary64 float embeds exactly into ℚ, so structures read from JSON
//! can be handled without rounding. All filtration and period computations
//! downstream stay exact; floats appear again only at output time.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// A Gaussian rational `re + im·i` with exact rational parts.
#[derive(Clone, PartialEq, Eq)]
pub struct Qi {
    pub re: BigRational,
    pub im: BigRational,
}

impl Qi {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Qi { re, im }
    }

    pub fn zero() -> Self {
        Qi::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        Qi::new(BigRational::one(), BigRational::zero())
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Qi::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Qi::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Qi::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    pub fn from_real(re: BigRational) -> Self {
        Qi::new(re, BigRational::zero())
    }

    /// Exact embedding of a binary64 value. Fails on NaN/±∞.
    pub fn from_f64(re: f64, im: f64) -> Option<Self> {
        Some(Qi::new(BigRational::from_float(re)?, BigRational::from_float(im)?))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Qi::new(self.re.clone(), -self.im.clone())
    }

    /// |z|² = z·conj(z), a nonnegative rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "division by zero in Qi");
        let n = self.norm_sqr();
        Qi::new(&self.re / &n, -&self.im / &n)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (rat_to_f64(&self.re), rat_to_f64(&self.im))
    }

    pub fn to_complex(&self) -> num_complex::Complex64 {
        let (re, im) = self.to_f64();
        num_complex::Complex64::new(re, im)
    }
}

/// Rational to nearest binary64.
pub fn rat_to_f64(r: &BigRational) -> f64 {
    // Scale down large numerators/denominators to stay in range.
    let num = r.numer();
    let den = r.denom();
    let nb = num.bits() as i64;
    let db = den.bits() as i64;
    let shift = (nb.max(db) - 900).max(0) as u64;
    let n = num >> shift;
    let d = den >> shift;
    let nf = bigint_to_f64(&n);
    let df = bigint_to_f64(&d);
    if df == 0.0 {
        if nf > 0.0 {
            f64::INFINITY
        } else if nf < 0.0 {
            f64::NEG_INFINITY
        } else {
            0.0
        }
    } else {
        nf / df
    }
}

fn bigint_to_f64(n: &BigInt) -> f64 {
    let (sign, digits) = n.to_u64_digits();
    let mut value = 0.0f64;
    for d in digits.iter().rev() {
        value = value * 1.8446744073709552e19 + *d as f64;
    }
    if sign == num_bigint::Sign::Minus {
        -value
    } else {
        value
    }
}

impl fmt::Debug for Qi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}i)", self.re, self.im)
    }
}

impl fmt::Display for Qi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{} - {}i", self.re, -self.im.clone())
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}

impl Add for Qi {
    type Output = Qi;
    fn add(self, rhs: Qi) -> Qi {
        Qi::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl<'a> Add<&'a Qi> for Qi {
    type Output = Qi;
    fn add(self, rhs: &Qi) -> Qi {
        Qi::new(self.re + &rhs.re, self.im + &rhs.im)
    }
}

impl Sub for Qi {
    type Output = Qi;
    fn sub(self, rhs: Qi) -> Qi {
        Qi::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl<'a> Sub<&'a Qi> for Qi {
    type Output = Qi;
    fn sub(self, rhs: &Qi) -> Qi {
        Qi::new(self.re - &rhs.re, self.im - &rhs.im)
    }
}

impl Mul for Qi {
    type Output = Qi;
    fn mul(self, rhs: Qi) -> Qi {
        &self * &rhs
    }
}

impl<'a, 'b> Mul<&'b Qi> for &'a Qi {
    type Output = Qi;
    fn mul(self, rhs: &Qi) -> Qi {
        Qi::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl<'a> Mul<&'a Qi> for Qi {
    type Output = Qi;
    fn mul(self, rhs: &Qi) -> Qi {
        &self * rhs
    }
}

impl Div for Qi {
    type Output = Qi;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Qi) -> Qi {
        self * rhs.inv()
    }
}

impl Neg for Qi {
    type Output = Qi;
    fn neg(self) -> Qi {
        Qi::new(-self.re, -self.im)
    }
}

impl AddAssign for Qi {
    fn add_assign(&mut self, rhs: Qi) {
        self.re += rhs.re;
        self.im += rhs.im;
    }
}

impl SubAssign for Qi {
    fn sub_assign(&mut self, rhs: Qi) {
        self.re -= rhs.re;
        self.im -= rhs.im;
    }
}

impl MulAssign for Qi {
    fn mul_assign(&mut self, rhs: Qi) {
        *self = self.clone() * rhs;
    }
}
