//! Exact half-integer quantum numbers and selection rules.
//!
//! Angular-momentum labels live on the half-integer lattice, so every value
//! is stored as its double (`twice = 2j`). All arithmetic stays on integers;
//! nothing here ever rounds.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

/// A half-integer stored exactly as `twice = 2j`.
///
/// `HalfInt::from_twice(3)` is 3/2, `HalfInt::from_int(-2)` is -2. Sums and
/// differences of half-integers are half-integers, so `+`/`-` are closed.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };
    pub const HALF: HalfInt = HalfInt { twice: 1 };
    pub const ONE: HalfInt = HalfInt { twice: 2 };

    /// The half-integer `n/2`.
    pub const fn from_twice(n: i64) -> Self {
        HalfInt { twice: n }
    }

    /// The integer `n` as a half-integer.
    pub const fn from_int(n: i64) -> Self {
        HalfInt { twice: 2 * n }
    }

    /// The doubled value `2j`.
    pub const fn twice(self) -> i64 {
        self.twice
    }

    pub const fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    pub const fn is_negative(self) -> bool {
        self.twice < 0
    }

    pub fn abs(self) -> Self {
        HalfInt { twice: self.twice.abs() }
    }

    /// Exact conversion; every i64-backed half-integer is representable.
    pub fn to_f64(self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub fn to_rational(self) -> BigRational {
        BigRational::new(BigInt::from(self.twice), BigInt::from(2))
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice + rhs.twice }
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice - rhs.twice }
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt { twice: -self.twice }
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl fmt::Debug for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseHalfIntError(String);

impl fmt::Display for ParseHalfIntError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid half-integer `{}` (expected e.g. 2, 3/2, 1.5)", self.0)
    }
}

impl std::error::Error for ParseHalfIntError {}

impl FromStr for HalfInt {
    type Err = ParseHalfIntError;

    /// Accepts `2`, `-3`, `3/2`, `-1/2`, `1.5`, `-0.5`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseHalfIntError(s.to_owned());
        let t = s.trim();
        if let Some((num, den)) = t.split_once('/') {
            let n: i64 = num.trim().parse().map_err(|_| bad())?;
            let d: i64 = den.trim().parse().map_err(|_| bad())?;
            return match d {
                1 => Ok(HalfInt::from_int(n)),
                2 => Ok(HalfInt::from_twice(n)),
                _ => Err(bad()),
            };
        }
        if let Some((int, frac)) = t.split_once('.') {
            let trimmed = frac.trim_end_matches('0');
            let negative = int.trim().starts_with('-');
            let whole: i64 = if int.trim() == "-" { 0 } else { int.trim().parse().map_err(|_| bad())? };
            let half = match trimmed {
                "" => 0,
                "5" => 1,
                _ => return Err(bad()),
            };
            let twice = 2 * whole + if negative { -half } else { half };
            return Ok(HalfInt::from_twice(twice));
        }
        t.parse::<i64>().map(HalfInt::from_int).map_err(|_| bad())
    }
}

/// Why a 3j-symbol is identically zero (or `Valid` when no rule fires).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SelectionOutcome {
    Valid,
    TriangleViolated,
    MSumNonzero,
    MOutOfRange,
    NonIntegerJm,
}

impl fmt::Display for SelectionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SelectionOutcome::Valid => "Valid",
            SelectionOutcome::TriangleViolated => "TriangleViolated",
            SelectionOutcome::MSumNonzero => "MSumNonzero",
            SelectionOutcome::MOutOfRange => "MOutOfRange",
            SelectionOutcome::NonIntegerJm => "NonIntegerJm",
        };
        f.write_str(s)
    }
}

/// Argument list of a 3j-symbol: three `j` labels over three `m` labels.
///
/// Construction does not validate; [`selection_rules`] reports violations so
/// that invalid configurations can be mapped to exact zeros with a reason.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct JmConfig {
    j: [HalfInt; 3],
    m: [HalfInt; 3],
}

impl JmConfig {
    pub fn new(j: [HalfInt; 3], m: [HalfInt; 3]) -> Self {
        JmConfig { j, m }
    }

    /// Build from doubled integers `(2j, 2m)`.
    pub fn from_twice(tj: [i64; 3], tm: [i64; 3]) -> Self {
        JmConfig {
            j: tj.map(HalfInt::from_twice),
            m: tm.map(HalfInt::from_twice),
        }
    }

    pub fn j(&self) -> [HalfInt; 3] {
        self.j
    }

    pub fn m(&self) -> [HalfInt; 3] {
        self.m
    }

    pub fn twice_j(&self) -> [i64; 3] {
        self.j.map(|x| x.twice())
    }

    pub fn twice_m(&self) -> [i64; 3] {
        self.m.map(|x| x.twice())
    }

    pub fn j_f64(&self) -> [f64; 3] {
        self.j.map(HalfInt::to_f64)
    }

    pub fn m_f64(&self) -> [f64; 3] {
        self.m.map(HalfInt::to_f64)
    }

    /// Apply a column permutation (indices into the original columns).
    pub fn permuted(&self, perm: [usize; 3]) -> JmConfig {
        JmConfig {
            j: [self.j[perm[0]], self.j[perm[1]], self.j[perm[2]]],
            m: [self.m[perm[0]], self.m[perm[1]], self.m[perm[2]]],
        }
    }
}

impl fmt::Display for JmConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({} {} {}; {} {} {})",
            self.j[0], self.j[1], self.j[2], self.m[0], self.m[1], self.m[2]
        )
    }
}

impl fmt::Debug for JmConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Triangle condition: |j1-j2| <= j3 <= j1+j2 with integer perimeter.
///
/// Degenerate triangles (equality) count as satisfied; the geometry layer
/// flags them separately as caustics.
pub fn triangle_satisfied(j1: HalfInt, j2: HalfInt, j3: HalfInt) -> bool {
    let (a, b, c) = (j1.twice(), j2.twice(), j3.twice());
    (a - b).abs() <= c && c <= a + b && (a + b + c) % 2 == 0
}

/// Check all selection rules; any outcome other than `Valid` means the
/// 3j-symbol is identically zero.
///
/// Checked in order: half-integer consistency of (j, m), |m| <= j,
/// m1+m2+m3 = 0, then the triangle condition.
pub fn selection_rules(c: &JmConfig) -> SelectionOutcome {
    let tj = c.twice_j();
    let tm = c.twice_m();
    for r in 0..3 {
        if (tj[r] + tm[r]) % 2 != 0 {
            return SelectionOutcome::NonIntegerJm;
        }
    }
    for r in 0..3 {
        if tm[r].abs() > tj[r] {
            return SelectionOutcome::MOutOfRange;
        }
    }
    if tm[0] + tm[1] + tm[2] != 0 {
        return SelectionOutcome::MSumNonzero;
    }
    if !triangle_satisfied(c.j[0], c.j[1], c.j[2]) {
        return SelectionOutcome::TriangleViolated;
    }
    SelectionOutcome::Valid
}
