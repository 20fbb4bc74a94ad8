//! Exact `sign * sqrt(rational)` values.
//!
//! Squares of 3j-symbols are rational, so a symbol is represented exactly as
//! a sign together with a non-negative radicand in lowest terms. Conversion
//! to floating point goes through a mantissa/exponent split of the big
//! rational, so values whose numerator or denominator overflows `f64` still
//! convert accurately (or saturate to `inf`/`0` when genuinely out of range).

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Exact value `sign * sqrt(radicand)` with `radicand >= 0` in lowest terms.
///
/// Canonical form: the radicand is reduced (handled by [`BigRational`]) and
/// `sign == 0` exactly when the radicand is zero, so derived equality is
/// value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SignedSqrtRational {
    sign: i8,
    radicand: BigRational,
}

impl SignedSqrtRational {
    /// Build from a sign and a non-negative radicand.
    ///
    /// Panics if `radicand < 0`; callers always hold a square.
    pub fn new(sign: i8, radicand: BigRational) -> Self {
        assert!(!radicand.is_negative(), "radicand must be non-negative");
        let v = SignedSqrtRational { sign: sign.signum(), radicand };
        v.reduced()
    }

    /// The value `c * sqrt(r)` for an integer coefficient `c` and a
    /// non-negative rational `r`, folded into canonical form.
    pub fn from_coeff_sqrt(c: &BigInt, r: BigRational) -> Self {
        assert!(!r.is_negative(), "radicand must be non-negative");
        let sign = match c.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        };
        let radicand = BigRational::from(c * c) * r;
        SignedSqrtRational { sign, radicand }.reduced()
    }

    pub fn zero() -> Self {
        SignedSqrtRational { sign: 0, radicand: BigRational::zero() }
    }

    pub fn one() -> Self {
        SignedSqrtRational { sign: 1, radicand: BigRational::from(BigInt::from(1)) }
    }

    /// Canonical form: lowest terms, sign zeroed with the radicand.
    /// Idempotent, and `new`/`from_coeff_sqrt` already apply it.
    pub fn reduced(&self) -> Self {
        // BigRational keeps itself in lowest terms; normalize the sign pairing.
        let sign = if self.radicand.is_zero() { 0 } else { self.sign.signum() };
        let radicand = if sign == 0 { BigRational::zero() } else { self.radicand.clone() };
        SignedSqrtRational { sign, radicand }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn radicand(&self) -> &BigRational {
        &self.radicand
    }

    /// Signed square `sign * radicand`, exact.
    pub fn signed_square(&self) -> BigRational {
        match self.sign.cmp(&0) {
            Ordering::Less => -self.radicand.clone(),
            Ordering::Equal => BigRational::zero(),
            Ordering::Greater => self.radicand.clone(),
        }
    }

    /// Closest double to `sign * sqrt(radicand)`; a couple of ulps at worst.
    pub fn to_f64(&self) -> f64 {
        if self.sign == 0 {
            return 0.0;
        }
        let n = self.radicand.numer().magnitude();
        let d = self.radicand.denom().magnitude();
        f64::from(self.sign) * sqrt_ratio_f64(n, d)
    }

    /// Natural log of |value| = ln(radicand)/2, computed from the big
    /// integers directly so it stays finite far beyond the `f64` range.
    pub fn ln_abs(&self) -> f64 {
        if self.sign == 0 {
            return f64::NEG_INFINITY;
        }
        0.5 * (ln_biguint(self.radicand.numer().magnitude())
            - ln_biguint(self.radicand.denom().magnitude()))
    }
}

impl fmt::Display for SignedSqrtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign == 0 {
            return f.write_str("0");
        }
        if self.sign < 0 {
            f.write_str("-")?;
        }
        if self.radicand.denom() == &BigInt::from(1) {
            write!(f, "sqrt({})", self.radicand.numer())
        } else {
            write!(f, "sqrt({}/{})", self.radicand.numer(), self.radicand.denom())
        }
    }
}

impl fmt::Debug for SignedSqrtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `x` as `(mantissa, exponent)` with `value = mantissa * 2^exponent` and the
/// mantissa carrying the top 64 bits.
fn biguint_parts(x: &BigUint) -> (f64, i64) {
    let bits = x.bits();
    if bits <= 64 {
        (x.to_f64().expect("fits"), 0)
    } else {
        let shift = bits - 64;
        ((x >> shift).to_f64().expect("64-bit"), shift as i64)
    }
}

/// ln of a positive big integer, accurate to ~1 ulp of the result.
pub(crate) fn ln_biguint(x: &BigUint) -> f64 {
    let (m, e) = biguint_parts(x);
    m.ln() + e as f64 * std::f64::consts::LN_2
}

/// `x * 2^e` with saturation, valid for exponents far outside i32.
fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e > 0 {
        let c = e.min(512);
        x *= 2f64.powi(c as i32);
        if x.is_infinite() {
            return x;
        }
        e -= c;
    }
    while e < 0 {
        let c = (-e).min(512);
        x *= 2f64.powi(-(c as i32));
        if x == 0.0 {
            return x;
        }
        e += c;
    }
    x
}

/// sqrt(n/d) for positive big integers, via mantissa/exponent.
fn sqrt_ratio_f64(n: &BigUint, d: &BigUint) -> f64 {
    if n.is_zero() {
        return 0.0;
    }
    let (mn, en) = biguint_parts(n);
    let (md, ed) = biguint_parts(d);
    let mut m = mn / md;
    let mut e = en - ed;
    // make the exponent even so its half is exact
    let r = e.rem_euclid(2);
    if r != 0 {
        m *= 2.0;
        e -= 1;
    }
    ldexp(m.sqrt(), e / 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn reduction_examples() {
        let v = SignedSqrtRational::new(1, rat(4, 8));
        assert_eq!(v.radicand(), &rat(1, 2));
        assert_eq!(v.sign(), 1);

        let z = SignedSqrtRational::new(-1, rat(0, 5));
        assert_eq!(z, SignedSqrtRational::zero());
        assert_eq!(z.sign(), 0);

        let w = SignedSqrtRational::new(1, rat(9, 1));
        assert_eq!(w.to_string(), "sqrt(9)");
    }

    #[test]
    fn reduce_is_idempotent() {
        let v = SignedSqrtRational::new(-1, rat(50, 8));
        assert_eq!(v.reduced(), v);
        assert_eq!(v.reduced().reduced(), v);
    }

    #[test]
    fn float_roundtrip_small() {
        let v = SignedSqrtRational::new(-1, rat(1, 3));
        let f = v.to_f64();
        assert!((f + (1f64 / 3.0).sqrt()).abs() < 1e-15);
        // (to_f64)^2 ~ radicand within a couple of ulps
        let sq = f * f;
        assert!((sq - 1.0 / 3.0).abs() <= 4.0 * f64::EPSILON);
    }

    #[test]
    fn float_handles_huge_ratios() {
        // numerator and denominator both far beyond f64 range, ratio ~ 4
        let big: BigUint = BigUint::one() << 4000;
        let v = SignedSqrtRational::new(
            1,
            BigRational::new(BigInt::from(big.clone() << 2), BigInt::from(big)),
        );
        assert!((v.to_f64() - 2.0).abs() < 1e-14);
        assert!((v.ln_abs() - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn ln_abs_matches_log_of_value() {
        let v = SignedSqrtRational::new(-1, rat(49, 16));
        assert!((v.ln_abs() - (7f64 / 4.0).ln()).abs() < 1e-14);
    }

    #[test]
    fn coeff_sqrt_folds_square() {
        // -2 sqrt(1/70) = -sqrt(4/70) = -sqrt(2/35)
        let v = SignedSqrtRational::from_coeff_sqrt(&BigInt::from(-2), rat(1, 70));
        assert_eq!(v.sign(), -1);
        assert_eq!(v.radicand(), &rat(2, 35));
    }
}
