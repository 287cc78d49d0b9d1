//! Arbitrary-precision reals and integer certification.
//!
//! `BigReal` is a thin wrapper over `astro_float::BigFloat` that carries its
//! working precision. Certification rounds a computed sum to the nearest
//! integer and accepts it only when the distance is below
//! `max(1e-9·|value|, 1e-30)` (capped below 0.4); otherwise the computation
//! is redone at doubled precision, up to three times.
//!
//! The reported residual is the distance to the nearest integer, floored at
//! `|value|·2^-(p-32)`: once the sum has fewer than ~32 fractional bits the
//! distance alone says nothing.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rootsys::Q;

pub const DEFAULT_PRECISION: usize = 192;
pub const MIN_PRECISION: usize = 64;
pub const MAX_ESCALATIONS: u32 = 3;
/// Bits of working precision assumed lost to accumulated rounding.
pub const GUARD_BITS: usize = 32;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

fn check(x: BigFloat) -> Result<BigFloat> {
    if x.is_nan() || x.is_inf() {
        Err(Error::Numeric(format!("non-finite intermediate {x}")))
    } else {
        Ok(x)
    }
}

pub fn check_precision(bits: usize) -> Result<()> {
    if bits < MIN_PRECISION {
        return Err(Error::InvalidPrecision {
            min: MIN_PRECISION,
            got: bits,
        });
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct BigReal {
    value: BigFloat,
    precision_bits: usize,
}

impl BigReal {
    fn wrap(value: BigFloat, precision_bits: usize) -> Result<Self> {
        Ok(Self {
            value: check(value)?,
            precision_bits,
        })
    }

    pub fn zero(precision_bits: usize) -> Self {
        Self {
            value: BigFloat::from_u8(0, precision_bits),
            precision_bits,
        }
    }

    pub fn from_u64(n: u64, precision_bits: usize) -> Self {
        Self {
            value: BigFloat::from_u64(n, precision_bits),
            precision_bits,
        }
    }

    pub fn from_biguint(n: &BigUint, precision_bits: usize) -> Self {
        let digits = n.to_u64_digits();
        if digits.is_empty() {
            return Self::zero(precision_bits);
        }
        // exact: value = 0.m × 2^(64·len)
        let mut value = BigFloat::from_words(&digits, Sign::Pos, (digits.len() * 64) as i32);
        if value.precision().unwrap_or(0) > precision_bits {
            value.set_precision(precision_bits, RM).ok();
        }
        Self {
            value,
            precision_bits,
        }
    }

    pub fn precision_bits(&self) -> usize {
        self.precision_bits
    }

    pub fn as_bigfloat(&self) -> &BigFloat {
        &self.value
    }

    fn p(&self, other: &Self) -> usize {
        self.precision_bits.max(other.precision_bits)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let p = self.p(other);
        Self::wrap(self.value.add(&other.value, p, RM), p)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let p = self.p(other);
        Self::wrap(self.value.sub(&other.value, p, RM), p)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let p = self.p(other);
        Self::wrap(self.value.mul(&other.value, p, RM), p)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::Numeric("division by zero".into()));
        }
        let p = self.p(other);
        Self::wrap(self.value.div(&other.value, p, RM), p)
    }

    pub fn powi(&self, n: u32) -> Result<Self> {
        let p = self.precision_bits;
        Self::wrap(self.value.powi(n as usize, p, RM), p)
    }

    pub fn abs(&self) -> Self {
        Self {
            value: self.value.abs(),
            precision_bits: self.precision_bits,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        !self.value.is_zero() && self.value.is_positive()
    }

    /// Nearest integer (ties to even) of a nonnegative value.
    pub fn round_to_biguint(&self) -> Result<BigUint> {
        if self.value.is_negative() && !self.value.is_zero() {
            return Err(Error::Numeric(format!("negative value {}", self.value)));
        }
        let rounded = self.value.round(0, RM);
        Ok(bigfloat_to_biguint(&rounded))
    }

    /// Approximate value as `f64` (saturating to 0 / ∞ outside its range).
    pub fn to_f64(&self) -> f64 {
        if self.value.is_zero() {
            return 0.0;
        }
        let s = format!("{}", self.value);
        s.parse::<f64>().unwrap_or(f64::NAN)
    }
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.value.cmp(&other.value) == Some(0)
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.cmp(&other.value).map(|c| c.cmp(&0))
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Integer part of a finite nonnegative `BigFloat` that has no fractional bits.
fn bigfloat_to_biguint(x: &BigFloat) -> BigUint {
    let (Some(words), Some(exp)) = (x.mantissa_digits(), x.exponent()) else {
        return BigUint::zero();
    };
    if x.is_zero() || exp <= 0 {
        return BigUint::zero();
    }
    // value = 0.m × 2^exp with m the little-endian word string
    let mantissa = BigUint::from_slice(
        &words
            .iter()
            .flat_map(|&w| [(w & 0xffff_ffff) as u32, (w >> 32) as u32])
            .collect::<Vec<_>>(),
    );
    let mbits = words.len() * 64;
    let exp = exp as usize;
    if exp >= mbits {
        mantissa << (exp - mbits)
    } else {
        mantissa >> (mbits - exp)
    }
}

/// `π` at the requested precision.
pub fn pi(precision_bits: usize) -> BigReal {
    let value = CONSTS.with(|c| c.borrow_mut().pi(precision_bits, RM));
    BigReal {
        value,
        precision_bits,
    }
}

/// `4 sin²(π x)` for an exact rational `x`.
///
/// The argument is reduced exactly: `sin²(πx)` has period 1 and is
/// symmetric under `x ↦ 1 − x`, so only `x ∈ (0, ½]` reaches the sine.
/// Returns `None` when `x` is an integer (the factor vanishes).
pub fn four_sin_sq_pi(x: Q, precision_bits: usize) -> Result<Option<BigReal>> {
    let (num, den) = (*x.numer(), *x.denom());
    let mut r = num.mod_floor(&den);
    if r == 0 {
        return Ok(None);
    }
    if 2 * r > den {
        r = den - r;
    }
    if 2 * r == den {
        return Ok(Some(BigReal::from_u64(4, precision_bits)));
    }
    // a few guard bits for the argument; the result is rounded back
    let wp = precision_bits + 64;
    let angle = pi(wp)
        .value
        .mul(&BigFloat::from_i64(r, wp), wp, RM)
        .div(&BigFloat::from_i64(den, wp), wp, RM);
    let s = CONSTS.with(|c| angle.sin(wp, RM, &mut c.borrow_mut()));
    let mut v = check(s.mul(&s, wp, RM).mul(&BigFloat::from_u8(4, wp), wp, RM))?;
    v.set_precision(precision_bits, RM)
        .map_err(|e| Error::Numeric(e.to_string()))?;
    Ok(Some(BigReal {
        value: v,
        precision_bits,
    }))
}

/// A rounded integer with the evidence for accepting it.
#[derive(Clone, Debug, PartialEq)]
pub struct Certified {
    pub value: BigUint,
    pub residual: f64,
    pub precision_bits: usize,
}

/// `max(1e-9·|value|, 1e-30)`, kept strictly below 0.4.
pub fn integrality_tolerance(value: &BigUint) -> f64 {
    let v = value.to_f64().unwrap_or(f64::INFINITY);
    (1e-9 * v).clamp(1e-30, 0.399)
}

/// Distance from `x` to its nearest integer.
pub fn round_with_residual(x: &BigReal) -> Result<(BigUint, BigReal)> {
    let n = x.round_to_biguint()?;
    let nearest = BigReal::from_biguint(&n, x.precision_bits() + 64);
    let residual = x.sub(&nearest)?.abs();
    Ok((n, residual))
}

/// `|value|·2^-(p-GUARD_BITS)`, the smallest residual the working precision
/// can resolve.
pub fn resolution_bound(value: &BigUint, precision_bits: usize) -> f64 {
    let exp = value.bits() as i64 - precision_bits as i64 + GUARD_BITS as i64;
    2f64.powi(exp.clamp(-2000, 2000) as i32)
}

/// Runs `eval` at `start_bits`, doubling the precision up to
/// [`MAX_ESCALATIONS`] times until the result is within tolerance of an
/// integer.
pub fn certify<F>(start_bits: usize, eval: F) -> Result<Certified>
where
    F: Fn(usize) -> Result<BigReal>,
{
    check_precision(start_bits)?;
    let mut bits = start_bits;
    let mut attempt = 0;
    loop {
        let x = eval(bits)?;
        let (n, residual) = round_with_residual(&x)?;
        let residual = residual.to_f64().max(resolution_bound(&n, bits));
        let tolerance = integrality_tolerance(&n);
        if residual < tolerance {
            return Ok(Certified {
                value: n,
                residual,
                precision_bits: bits,
            });
        }
        if attempt == MAX_ESCALATIONS {
            return Err(Error::Integrality {
                nearest: n,
                residual,
                tolerance,
                precision_bits: bits,
            });
        }
        attempt += 1;
        bits *= 2;
    }
}
