//! Two independent exact evaluators for the Wigner 3j-symbol.
//!
//! [`racah_3j`] is the classical single-sum factorial formula. The second
//! route, [`bargmann_moment_3j`], evaluates the twelve-dimensional Gaussian
//! inner-product integral analytically: monomials are orthogonal under the
//! Gaussian weight with norm `n!` per complex coordinate, so the integral
//! collapses to extracting one monomial coefficient from a product of
//! determinant powers. Both produce canonical [`SignedSqrtRational`] values
//! and must agree exactly; the pair is the library's primary self-check.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::halfint::{selection_rules, JmConfig, SelectionOutcome};
use crate::sqrt_rational::{ln_biguint, SignedSqrtRational};

/// Exact 3j value plus the selection rule that forced a structural zero.
///
/// `zero_reason` is `None` for values that vanish "accidentally" (all rules
/// hold but the coefficient sums to zero), e.g. (1 1 1; 0 0 0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactValue {
    pub value: SignedSqrtRational,
    pub zero_reason: Option<SelectionOutcome>,
}

impl ExactValue {
    fn structural_zero(reason: SelectionOutcome) -> Self {
        ExactValue { value: SignedSqrtRational::zero(), zero_reason: Some(reason) }
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }
}

/// Exponents of the monomial `prod z_{r mu}^{n[r][mu]}` on C^6.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonomialExponents {
    pub n: [[u64; 2]; 3],
}

impl MonomialExponents {
    /// The monomial carried by the basis state of `c`:
    /// `n[r] = (j_r + m_r, j_r - m_r)`.
    pub fn for_config(c: &JmConfig) -> Option<Self> {
        let tj = c.twice_j();
        let tm = c.twice_m();
        let mut n = [[0u64; 2]; 3];
        for r in 0..3 {
            let a = tj[r] + tm[r];
            let b = tj[r] - tm[r];
            if a < 0 || b < 0 || a % 2 != 0 || b % 2 != 0 {
                return None;
            }
            n[r] = [(a / 2) as u64, (b / 2) as u64];
        }
        Some(MonomialExponents { n })
    }
}

/// Factorials `0!..=max!` as a lookup table.
pub(crate) fn factorial_table(max: u64) -> Vec<BigUint> {
    let mut t = Vec::with_capacity(max as usize + 1);
    t.push(BigUint::one());
    for k in 1..=max {
        let next = t.last().unwrap() * k;
        t.push(next);
    }
    t
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Triangle exponents `k1 = j2+j3-j1`, `k2 = j3+j1-j2`, `k3 = j1+j2-j3`
/// when they are non-negative integers.
pub(crate) fn triangle_exponents(c: &JmConfig) -> Option<[u64; 3]> {
    let [tj1, tj2, tj3] = c.twice_j();
    let k = [tj2 + tj3 - tj1, tj3 + tj1 - tj2, tj1 + tj2 - tj3];
    if k.iter().any(|&x| x < 0 || x % 2 != 0) {
        return None;
    }
    Some(k.map(|x| (x / 2) as u64))
}

/// Classical single-sum evaluation, exact in big-integer arithmetic.
///
/// Invalid configurations return an exact zero carrying the violated rule.
pub fn racah_3j(c: &JmConfig) -> ExactValue {
    match selection_rules(c) {
        SelectionOutcome::Valid => {}
        reason => return ExactValue::structural_zero(reason),
    }
    let [tj1, tj2, tj3] = c.twice_j();
    let [tm1, tm2, tm3] = c.twice_m();
    let k = triangle_exponents(c).expect("valid config has triangle exponents");
    let big_j = ((tj1 + tj2 + tj3) / 2) as u64;
    let table = factorial_table(big_j + 1);

    // sum over t with all six factorial arguments non-negative
    let b1 = (tj1 - tm1) / 2; // j1 - m1
    let a2 = (tj2 + tm2) / 2; // j2 + m2
    let c1 = (tj3 - tj2 + tm1) / 2; // j3 - j2 + m1  (+t)
    let c2 = (tj3 - tj1 - tm2) / 2; // j3 - j1 - m2  (+t)
    let t_min = 0i64.max(-c1).max(-c2);
    let t_max = (k[2] as i64).min(b1).min(a2);

    let mut sum = BigRational::zero();
    for t in t_min..=t_max {
        let denom = &table[t as usize]
            * &table[(k[2] as i64 - t) as usize]
            * &table[(b1 - t) as usize]
            * &table[(a2 - t) as usize]
            * &table[(c1 + t) as usize]
            * &table[(c2 + t) as usize];
        let term = BigRational::new(BigInt::from(1), BigInt::from(denom));
        if t % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }

    // radicand factor: Delta(j1 j2 j3) * prod (j_r +- m_r)!
    let mut prod = BigUint::one();
    for r in 0..3 {
        let tj = c.twice_j()[r];
        let tm = c.twice_m()[r];
        prod *= &table[((tj + tm) / 2) as usize];
        prod *= &table[((tj - tm) / 2) as usize];
    }
    let delta_num = &table[k[0] as usize] * &table[k[1] as usize] * &table[k[2] as usize];
    let weight = BigRational::new(
        BigInt::from(delta_num * prod),
        BigInt::from(table[(big_j + 1) as usize].clone()),
    );

    let phase_exp = (tj1 - tj2 - tm3) / 2;
    let phase: i8 = if phase_exp.rem_euclid(2) == 0 { 1 } else { -1 };
    let sign = phase * sum.numer().to_i8_sign();
    let radicand = &sum * &sum * weight;
    ExactValue { value: SignedSqrtRational::new(sign, radicand), zero_reason: None }
}

trait SignToI8 {
    fn to_i8_sign(&self) -> i8;
}

impl SignToI8 for BigInt {
    fn to_i8_sign(&self) -> i8 {
        if self.is_zero() {
            0
        } else if self.is_negative() {
            -1
        } else {
            1
        }
    }
}

/// Coefficient of the target monomial in `d1^k1 d2^k2 d3^k3`, where
///
/// ```text
/// d1 = z21 z32 - z31 z22
/// d2 = z31 z12 - z11 z32
/// d3 = z11 z22 - z21 z12
/// ```
///
/// Each power expands binomially; the six exponent-matching constraints fix
/// two of the three binomial indices, so a single loop suffices.
pub fn delta_power_coefficient(k: [u64; 3], target: &MonomialExponents) -> BigInt {
    let n = &target.n;
    let total: u64 = n.iter().flatten().sum();
    if total != 2 * (k[0] + k[1] + k[2]) {
        return BigInt::zero();
    }
    // exponents generated by indices (a1, a2, a3):
    //   n11 = a2 + (k3 - a3)      n12 = (k2 - a2) + a3
    //   n21 = (k1 - a1) + a3      n22 = a1 + (k3 - a3)
    //   n31 = a1 + (k2 - a2)      n32 = (k1 - a1) + a2
    let mut coeff = BigInt::zero();
    for a1 in 0..=k[0] {
        let a3 = n[1][0] as i64 - k[0] as i64 + a1 as i64;
        if a3 < 0 || a3 as u64 > k[2] {
            continue;
        }
        let a3 = a3 as u64;
        let a2 = n[0][0] as i64 - k[2] as i64 + a3 as i64;
        if a2 < 0 || a2 as u64 > k[1] {
            continue;
        }
        let a2 = a2 as u64;
        let matches = n[0][1] == (k[1] - a2) + a3
            && n[1][1] == a1 + (k[2] - a3)
            && n[2][0] == a1 + (k[1] - a2)
            && n[2][1] == (k[0] - a1) + a2;
        if !matches {
            continue;
        }
        let mag = BigInt::from(binomial(k[0], a1) * binomial(k[1], a2) * binomial(k[2], a3));
        if (a1 + a2 + a3) % 2 == 0 {
            coeff += mag;
        } else {
            coeff -= mag;
        }
    }
    coeff
}

/// Exact 3j by analytic evaluation of the Bargmann inner product.
///
/// Monomial orthogonality turns the integral into
///
/// ```text
/// 3j = C * sqrt( prod_r (j_r+m_r)! (j_r-m_r)! / ((j1+j2+j3+1)! k1! k2! k3!) )
/// ```
///
/// where `C` is the coefficient extracted by [`delta_power_coefficient`].
pub fn bargmann_moment_3j(c: &JmConfig) -> ExactValue {
    match selection_rules(c) {
        SelectionOutcome::Valid => {}
        reason => return ExactValue::structural_zero(reason),
    }
    let k = triangle_exponents(c).expect("valid config has triangle exponents");
    let target = MonomialExponents::for_config(c).expect("valid config has exponents");
    let coeff = delta_power_coefficient(k, &target);

    let big_j = k[0] + k[1] + k[2];
    let table = factorial_table(big_j + 1);
    let mut num = BigUint::one();
    for r in 0..3 {
        num *= &table[target.n[r][0] as usize];
        num *= &table[target.n[r][1] as usize];
    }
    let den = &table[(big_j + 1) as usize]
        * &table[k[0] as usize]
        * &table[k[1] as usize]
        * &table[k[2] as usize];
    let ratio = BigRational::new(BigInt::from(num), BigInt::from(den));
    ExactValue {
        value: SignedSqrtRational::from_coeff_sqrt(&coeff, ratio),
        zero_reason: None,
    }
}

/// The constant in front of the Bargmann integral:
/// `N = 1 / (pi^6 sqrt(B))` with
/// `B = prod_r (j_r+m_r)!(j_r-m_r)! * (j1+j2+j3+1)! k1! k2! k3!`.
///
/// Kept exact as the big integer `B`; the `pi^6` stays symbolic so that it
/// can cancel against `(2 pi)^8` downstream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizationConstant {
    big_radicand: BigUint,
}

impl NormalizationConstant {
    /// The integer `B` under the square root.
    pub fn big_radicand(&self) -> &BigUint {
        &self.big_radicand
    }

    /// Exact square-root part `sqrt(1/B)`; the full constant is this over pi^6.
    pub fn sqrt_part(&self) -> SignedSqrtRational {
        SignedSqrtRational::new(
            1,
            BigRational::new(BigInt::from(1), BigInt::from(self.big_radicand.clone())),
        )
    }

    /// ln N, stable for arbitrarily large quantum numbers.
    pub fn ln(&self) -> f64 {
        -6.0 * std::f64::consts::PI.ln() - 0.5 * ln_biguint(&self.big_radicand)
    }

    /// N as a double; underflows to 0 for very large configurations.
    pub fn value(&self) -> f64 {
        self.sqrt_part().to_f64() / std::f64::consts::PI.powi(6)
    }
}

/// Normalization for a valid configuration; `InvalidConfig` if any triangle
/// exponent is negative or another selection rule fails.
pub fn normalization(c: &JmConfig) -> Result<NormalizationConstant> {
    match selection_rules(c) {
        SelectionOutcome::Valid => {}
        reason => return Err(Error::InvalidConfig(reason)),
    }
    let k = triangle_exponents(c).expect("valid");
    let target = MonomialExponents::for_config(c).expect("valid");
    let big_j = k[0] + k[1] + k[2];
    let table = factorial_table(big_j + 1);
    let mut b = table[(big_j + 1) as usize].clone();
    for r in 0..3 {
        b *= &table[target.n[r][0] as usize];
        b *= &table[target.n[r][1] as usize];
    }
    for i in 0..3 {
        b *= &table[k[i] as usize];
    }
    Ok(NormalizationConstant { big_radicand: b })
}
