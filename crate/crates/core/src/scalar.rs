//! The scalar field kernels and solutions live in: `f64` or `Complex64`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex64;
use num_traits::{NumAssign, Zero};

/// Field over which every kernel, resolvent and solution is defined.
pub trait Scalar:
    NumAssign + Copy + Send + Sync + Debug + Display + Sum + std::ops::Neg<Output = Self> + 'static
{
    /// `"real"` or `"complex"`, as used in problem files.
    const FIELD: &'static str;

    fn from_real(x: f64) -> Self;

    /// `None` in the real field.
    fn imaginary_unit() -> Option<Self>;

    fn re(self) -> f64;
    fn im(self) -> f64;
    fn modulus(self) -> f64;
    fn exp(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn sqrt(self) -> Self;
    fn pow(self, exponent: Self) -> Self;

    fn is_finite(self) -> bool;

    /// Builds a field element from its parts; `None` when `im != 0` in the real field.
    fn from_parts(re: f64, im: f64) -> Option<Self>;

    fn scale(self, factor: f64) -> Self {
        self * Self::from_real(factor)
    }

    /// `acc[k] += a * x[k]` over the common length.
    #[inline]
    fn axpy(acc: &mut [Self], a: Self, x: &[Self]) {
        for (y, &v) in acc.iter_mut().zip(x) {
            *y += a * v;
        }
    }

    fn to_complex(self) -> Complex64 {
        Complex64::new(self.re(), self.im())
    }
}

impl Scalar for f64 {
    const FIELD: &'static str = "real";

    fn from_real(x: f64) -> Self {
        x
    }
    fn imaginary_unit() -> Option<Self> {
        None
    }
    fn re(self) -> f64 {
        self
    }
    fn im(self) -> f64 {
        0.0
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn pow(self, exponent: Self) -> Self {
        if exponent.fract() == 0.0 && exponent.abs() <= i32::MAX as f64 {
            self.powi(exponent as i32)
        } else {
            self.powf(exponent)
        }
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    fn from_parts(re: f64, im: f64) -> Option<Self> {
        (im == 0.0).then_some(re)
    }
    fn scale(self, factor: f64) -> Self {
        self * factor
    }
}

impl Scalar for Complex64 {
    const FIELD: &'static str = "complex";

    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn imaginary_unit() -> Option<Self> {
        Some(Complex64::i())
    }
    fn re(self) -> f64 {
        self.re
    }
    fn im(self) -> f64 {
        self.im
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn exp(self) -> Self {
        Complex64::exp(self)
    }
    fn sin(self) -> Self {
        Complex64::sin(self)
    }
    fn cos(self) -> Self {
        Complex64::cos(self)
    }
    fn sqrt(self) -> Self {
        Complex64::sqrt(self)
    }
    fn pow(self, exponent: Self) -> Self {
        if exponent.im == 0.0 && exponent.re.fract() == 0.0 && exponent.re.abs() <= i32::MAX as f64 {
            self.powi(exponent.re as i32)
        } else if self.is_zero() {
            if exponent.re > 0.0 {
                Complex64::zero()
            } else {
                Complex64::new(f64::NAN, f64::NAN)
            }
        } else {
            self.powc(exponent)
        }
    }
    fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn from_parts(re: f64, im: f64) -> Option<Self> {
        Some(Complex64::new(re, im))
    }
    fn scale(self, factor: f64) -> Self {
        self * factor
    }

    #[inline]
    fn axpy(acc: &mut [Self], a: Self, x: &[Self]) {
        let n = acc.len().min(x.len());
        let (acc, x) = (&mut acc[..n], &x[..n]);
        // explicit real/imaginary updates vectorize better than Complex64 ops
        let (ar, ai) = (a.re, a.im);
        for (y, v) in acc.iter_mut().zip(x) {
            let re = y.re + (ar * v.re - ai * v.im);
            let im = y.im + (ar * v.im + ai * v.re);
            *y = Complex64::new(re, im);
        }
    }
}
