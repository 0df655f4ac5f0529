//! Coefficient backends: exact Gaussian rationals and binary64 complex numbers.
//!
//! Every series and map in this crate is generic over [`Coeff`]. A computation
//! never mixes backends; the CLI picks one per run.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// Float coefficients below this magnitude are dropped during cleanup.
pub const FLOAT_DROP: f64 = 1e-14;

/// Complex coefficient field used by all series arithmetic.
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    /// True for the exact backend: equality and zero tests are decidable.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn i() -> Self;
    fn from_int(n: i64) -> Self;
    /// Real rational entry `num/den`.
    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_f64_pair(re: f64, im: f64) -> Self;

    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn conj(&self) -> Self;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn is_zero(&self) -> bool;
    /// Modulus as f64 (approximate on the exact backend, used only for reports).
    fn abs(&self) -> f64;
    fn to_c64(&self) -> Complex64;
    fn re_f64(&self) -> f64 {
        self.to_c64().re
    }
    fn im_f64(&self) -> f64 {
        self.to_c64().im
    }

    /// Square root staying inside the backend. Exact backend: a Gaussian
    /// rational root when one exists, `None` otherwise. Float: principal root.
    fn sqrt(&self) -> Option<Self>;

    /// Coefficients with `abs() < threshold` are dropped on cleanup; zero for exact.
    fn drop_threshold() -> f64 {
        if Self::EXACT {
            0.0
        } else {
            FLOAT_DROP
        }
    }

    fn div(&self, o: &Self) -> Option<Self> {
        o.inv().map(|v| self.mul(&v))
    }

    /// Canonical JSON for one real part: rational as string, float as number.
    fn part_json(v: &Self, imag: bool) -> serde_json::Value;
    fn from_part_json(re: &serde_json::Value, im: &serde_json::Value) -> Result<Self, String>;
}

/// Exact complex rational: `re + i*im` with `re, im` in `Q`.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactC {
    pub re: BigRational,
    pub im: BigRational,
}

impl ExactC {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        ExactC { re, im }
    }

    pub fn from_ratios(re_n: i64, re_d: i64, im_n: i64, im_d: i64) -> Self {
        ExactC {
            re: BigRational::new(BigInt::from(re_n), BigInt::from(re_d)),
            im: BigRational::new(BigInt::from(im_n), BigInt::from(im_d)),
        }
    }

    fn norm_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl fmt::Debug for ExactC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ExactC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else {
            write!(f, "{}+({})i", self.re, self.im)
        }
    }
}

/// Exact square root of a nonnegative rational, if it is a rational square.
fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    if q.is_zero() {
        return Some(BigRational::zero());
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| format!("bad rational `{s}`"))?;
        let d: BigInt = d.trim().parse().map_err(|_| format!("bad rational `{s}`"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in `{s}`"));
        }
        Ok(BigRational::new(n, d))
    } else {
        let n: BigInt = s.parse().map_err(|_| format!("bad rational `{s}`"))?;
        Ok(BigRational::from_integer(n))
    }
}

impl Coeff for ExactC {
    const EXACT: bool = true;

    fn zero() -> Self {
        ExactC::new(BigRational::zero(), BigRational::zero())
    }
    fn one() -> Self {
        ExactC::new(BigRational::one(), BigRational::zero())
    }
    fn i() -> Self {
        ExactC::new(BigRational::zero(), BigRational::one())
    }
    fn from_int(n: i64) -> Self {
        ExactC::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        ExactC::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }
    fn from_f64_pair(re: f64, im: f64) -> Self {
        // Rarely needed on the exact path; exact only for dyadic inputs.
        let cv = |x: f64| BigRational::from_float(x).unwrap_or_else(BigRational::zero);
        ExactC::new(cv(re), cv(im))
    }

    fn add(&self, o: &Self) -> Self {
        ExactC::new(&self.re + &o.re, &self.im + &o.im)
    }
    fn sub(&self, o: &Self) -> Self {
        ExactC::new(&self.re - &o.re, &self.im - &o.im)
    }
    fn mul(&self, o: &Self) -> Self {
        ExactC::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
    fn neg(&self) -> Self {
        ExactC::new(-self.re.clone(), -self.im.clone())
    }
    fn conj(&self) -> Self {
        ExactC::new(self.re.clone(), -self.im.clone())
    }
    fn inv(&self) -> Option<Self> {
        let n = self.norm_sq();
        if n.is_zero() {
            return None;
        }
        Some(ExactC::new(&self.re / &n, -(&self.im / &n)))
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn abs(&self) -> f64 {
        self.to_c64().norm()
    }
    fn to_c64(&self) -> Complex64 {
        let cv = |q: &BigRational| q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN);
        Complex64::new(cv(&self.re), cv(&self.im))
    }

    fn sqrt(&self) -> Option<Self> {
        if self.im.is_zero() {
            if !self.re.is_negative() {
                return rational_sqrt(&self.re).map(|r| ExactC::new(r, BigRational::zero()));
            }
            return rational_sqrt(&(-self.re.clone())).map(|r| ExactC::new(BigRational::zero(), r));
        }
        // (x+iy)^2 = a+ib  =>  x^2 = (a + |c|)/2, y = b/(2x)
        let r = rational_sqrt(&self.norm_sq())?;
        let two = BigRational::from_integer(BigInt::from(2));
        let x2 = (&self.re + &r) / &two;
        let x = rational_sqrt(&x2)?;
        if x.is_zero() {
            return None;
        }
        let y = &self.im / &(&two * &x);
        Some(ExactC::new(x, y))
    }

    fn part_json(v: &Self, imag: bool) -> serde_json::Value {
        let q = if imag { &v.im } else { &v.re };
        serde_json::Value::String(q.to_string())
    }
    fn from_part_json(re: &serde_json::Value, im: &serde_json::Value) -> Result<Self, String> {
        let part = |v: &serde_json::Value| -> Result<BigRational, String> {
            match v {
                serde_json::Value::String(s) => parse_rational(s),
                serde_json::Value::Number(n) => {
                    if let Some(k) = n.as_i64() {
                        Ok(BigRational::from_integer(BigInt::from(k)))
                    } else {
                        BigRational::from_float(n.as_f64().ok_or("bad number")?)
                            .ok_or_else(|| "non-finite".to_string())
                    }
                }
                serde_json::Value::Null => Ok(BigRational::zero()),
                _ => Err("expected rational string or number".to_string()),
            }
        };
        Ok(ExactC::new(part(re)?, part(im)?))
    }
}

/// Binary64 complex backend.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct C64(pub Complex64);

impl fmt::Display for C64 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Coeff for C64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        C64(Complex64::new(0.0, 0.0))
    }
    fn one() -> Self {
        C64(Complex64::new(1.0, 0.0))
    }
    fn i() -> Self {
        C64(Complex64::new(0.0, 1.0))
    }
    fn from_int(n: i64) -> Self {
        C64(Complex64::new(n as f64, 0.0))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        C64(Complex64::new(num as f64 / den as f64, 0.0))
    }
    fn from_f64_pair(re: f64, im: f64) -> Self {
        C64(Complex64::new(re, im))
    }

    fn add(&self, o: &Self) -> Self {
        C64(self.0 + o.0)
    }
    fn sub(&self, o: &Self) -> Self {
        C64(self.0 - o.0)
    }
    fn mul(&self, o: &Self) -> Self {
        C64(self.0 * o.0)
    }
    fn neg(&self) -> Self {
        C64(-self.0)
    }
    fn conj(&self) -> Self {
        C64(self.0.conj())
    }
    fn inv(&self) -> Option<Self> {
        if self.0.norm() == 0.0 {
            None
        } else {
            Some(C64(self.0.inv()))
        }
    }

    fn is_zero(&self) -> bool {
        self.0.re == 0.0 && self.0.im == 0.0
    }
    fn abs(&self) -> f64 {
        self.0.norm()
    }
    fn to_c64(&self) -> Complex64 {
        self.0
    }

    fn sqrt(&self) -> Option<Self> {
        Some(C64(self.0.sqrt()))
    }

    fn part_json(v: &Self, imag: bool) -> serde_json::Value {
        let x = if imag { v.0.im } else { v.0.re };
        serde_json::json!(x)
    }
    fn from_part_json(re: &serde_json::Value, im: &serde_json::Value) -> Result<Self, String> {
        let part = |v: &serde_json::Value| -> Result<f64, String> {
            match v {
                serde_json::Value::Number(n) => n.as_f64().ok_or_else(|| "bad number".to_string()),
                serde_json::Value::String(s) => {
                    let q = parse_rational(s)?;
                    Ok(q.numer().to_f64().ok_or("overflow")? / q.denom().to_f64().ok_or("overflow")?)
                }
                serde_json::Value::Null => Ok(0.0),
                _ => Err("expected number".to_string()),
            }
        };
        Ok(C64(Complex64::new(part(re)?, part(im)?)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_field_ops() {
        let a = ExactC::from_ratios(2, 5, 1, 3);
        let b = ExactC::from_ratios(-1, 2, 3, 7);
        let prod = a.mul(&b);
        let back = prod.div(&b).unwrap();
        assert_eq!(a, back);
        assert_eq!(a.mul(&a.conj()).im, BigRational::zero());
    }

    #[test]
    fn exact_sqrt_gaussian() {
        // sqrt(2i) = 1+i
        let c = ExactC::from_ratios(0, 1, 2, 1);
        let r = c.sqrt().unwrap();
        assert_eq!(r.mul(&r), c);
        // 3 has no rational square root
        assert!(ExactC::from_int(3).sqrt().is_none());
        // 9/25 does
        let q = ExactC::from_ratio(9, 25).sqrt().unwrap();
        assert_eq!(q, ExactC::from_ratio(3, 5));
        // negative real: sqrt(-4) = 2i
        let m = ExactC::from_int(-4).sqrt().unwrap();
        assert_eq!(m, ExactC::from_ratios(0, 1, 2, 1));
    }

    #[test]
    fn json_round_trip() {
        let a = ExactC::from_ratios(2, 5, -1, 3);
        let re = ExactC::part_json(&a, false);
        let im = ExactC::part_json(&a, true);
        let b = ExactC::from_part_json(&re, &im).unwrap();
        assert_eq!(a, b);
    }
}
