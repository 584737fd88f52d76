//! Complex scalars with a fixed comparison tolerance.

use num_complex::Complex64;
use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Componentwise tolerance used whenever two scalars are compared.
pub const TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, Default)]
pub struct Scalar(pub Complex64);

fn clean(x: f64) -> f64 {
    // fold -0.0 into 0.0 so ordering and hashing agree with equality
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

impl Scalar {
    pub const ZERO: Scalar = Scalar(Complex64 { re: 0.0, im: 0.0 });
    pub const ONE: Scalar = Scalar(Complex64 { re: 1.0, im: 0.0 });

    pub fn new(re: f64, im: f64) -> Self {
        Scalar(Complex64::new(clean(re), clean(im)))
    }

    pub fn real(re: f64) -> Self {
        Self::new(re, 0.0)
    }

    pub fn re(self) -> f64 {
        self.0.re
    }

    pub fn im(self) -> f64 {
        self.0.im
    }

    pub fn is_finite(self) -> bool {
        self.0.re.is_finite() && self.0.im.is_finite()
    }

    pub fn approx_eq(self, other: Scalar, tol: f64) -> bool {
        (self.0.re - other.0.re).abs() <= tol && (self.0.im - other.0.im).abs() <= tol
    }

    pub fn is_zero(self) -> bool {
        self.approx_eq(Scalar::ZERO, TOL)
    }

    pub fn is_one(self) -> bool {
        self.approx_eq(Scalar::ONE, TOL)
    }

    pub fn norm_sqr(self) -> f64 {
        self.0.norm_sqr()
    }

    pub fn abs(self) -> f64 {
        self.0.norm()
    }

    pub fn conj(self) -> Self {
        Self::new(self.0.re, -self.0.im)
    }

    pub fn scale(self, k: f64) -> Self {
        Self::new(self.0.re * k, self.0.im * k)
    }
}

impl From<Complex64> for Scalar {
    fn from(c: Complex64) -> Self {
        Scalar::new(c.re, c.im)
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::real(x)
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Scalar {}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        clean(self.0.re)
            .total_cmp(&clean(other.0.re))
            .then(clean(self.0.im).total_cmp(&clean(other.0.im)))
    }
}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        clean(self.0.re).to_bits().hash(state);
        clean(self.0.im).to_bits().hash(state);
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, o: Scalar) -> Scalar {
        (self.0 + o.0).into()
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, o: Scalar) -> Scalar {
        (self.0 - o.0).into()
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        (self.0 * o.0).into()
    }
}

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, o: Scalar) -> Scalar {
        (self.0 / o.0).into()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.0.re, -self.0.im)
    }
}

/// Formats a real number with at most ten decimals, trailing zeros trimmed.
pub fn fmt_real(x: f64) -> String {
    let s = format!("{:.10}", clean(x));
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".to_string()
    } else {
        s
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = (self.0.re, self.0.im);
        let re_s = fmt_real(re);
        let im_s = fmt_real(im);
        if im_s == "0" {
            write!(f, "{re_s}")
        } else if re_s == "0" {
            write!(f, "{im_s}*i")
        } else if im < 0.0 {
            write!(f, "{re_s} - {}*i", fmt_real(-im))
        } else {
            write!(f, "{re_s} + {im_s}*i")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negative_zero_is_zero() {
        assert_eq!(Scalar::new(-0.0, 0.0), Scalar::ZERO);
        assert_eq!(Scalar::real(-0.0).to_string(), "0");
    }

    #[test]
    fn tolerance() {
        assert!(Scalar::real(0.9999999999).is_one());
        assert!(!Scalar::real(0.99).is_one());
        assert!(Scalar::real(1e-12).is_zero());
    }

    #[test]
    fn display() {
        assert_eq!(Scalar::real(0.5).to_string(), "0.5");
        assert_eq!(Scalar::real(1.0 / 2f64.sqrt()).to_string(), "0.7071067812");
        assert_eq!(Scalar::new(0.0, 1.0).to_string(), "1*i");
        assert_eq!(Scalar::new(1.0, -2.0).to_string(), "1 - 2*i");
    }
}
