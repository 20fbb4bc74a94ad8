//! Stationary-phase geometry: triangle angles, tilt and twist rotations,
//! reference spinors, the SU(2) lift, and the Hopf projection.
//!
//! The construction places the third vector on the z-axis, tilts the triangle
//! about y by `beta` so the third projection matches `m3`, then twists about
//! the tilted axis by `gamma` to match `m1`. Lifting the rotation to SU(2)
//! and applying it to real reference spinors yields a point where the
//! stationarity conditions `I_r = l_r`, `J_rz = m_r`, `sum_r J_r = 0` hold to
//! machine precision. Two branches exist: `P` with twist `+gamma` and
//! `PPrime` with `-gamma`.
//!
//! Lengths enter as plain reals so the same code serves both the quantum
//! lengths `j_r` and the half-shifted lengths `j_r + 1/2`.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::halfint::{selection_rules, JmConfig, SelectionOutcome};

/// Detection threshold on `|cos| - 1` for caustics and on `sin(beta) sin(eta2)`
/// for polar singularities.
pub const CAUSTIC_EPS: f64 = 1e-9;
/// `|cos gamma|` in `(1, 1 + FUZZ_EPS]` clamps to the boundary instead of
/// reporting a forbidden configuration.
pub const FUZZ_EPS: f64 = 1e-9;
/// Threshold on `|z|` and `|delta_i|` below which logarithms are refused.
pub const LOG_EPS: f64 = 1e-12;

/// Numerical guards, overridable through the CLI config file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub caustic: f64,
    pub fuzz: f64,
    pub log_eps: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { caustic: CAUSTIC_EPS, fuzz: FUZZ_EPS, log_eps: LOG_EPS }
    }
}

/// The two even column permutations besides the identity.
pub const EVEN_PERMUTATIONS: [[usize; 3]; 3] = [[0, 1, 2], [1, 2, 0], [2, 0, 1]];

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn add(&self, o: &Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

/// Two-component complex spinor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spinor {
    pub z1: Complex64,
    pub z2: Complex64,
}

impl Spinor {
    pub fn new(z1: Complex64, z2: Complex64) -> Self {
        Spinor { z1, z2 }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.z1.norm_sqr() + self.z2.norm_sqr()
    }

    pub fn conj(&self) -> Spinor {
        Spinor::new(self.z1.conj(), self.z2.conj())
    }

    pub fn scaled(&self, c: Complex64) -> Spinor {
        Spinor::new(c * self.z1, c * self.z2)
    }
}

/// The C^6 point: one spinor per angular momentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinorTriple {
    pub s: [Spinor; 3],
}

impl SpinorTriple {
    pub fn conj(&self) -> SpinorTriple {
        SpinorTriple { s: [self.s[0].conj(), self.s[1].conj(), self.s[2].conj()] }
    }

    /// The three SU(2)-invariant determinants
    /// `d1 = z21 z32 - z31 z22`, `d2 = z31 z12 - z11 z32`, `d3 = z11 z22 - z21 z12`.
    pub fn deltas(&self) -> [Complex64; 3] {
        let [a, b, c] = self.s;
        [
            b.z1 * c.z2 - c.z1 * b.z2,
            c.z1 * a.z2 - a.z1 * c.z2,
            a.z1 * b.z2 - b.z1 * a.z2,
        ]
    }

    /// Components in row-major order (z11, z12, z21, z22, z31, z32).
    pub fn components(&self) -> [Complex64; 6] {
        [
            self.s[0].z1, self.s[0].z2,
            self.s[1].z1, self.s[1].z2,
            self.s[2].z1, self.s[2].z2,
        ]
    }
}

/// Exterior angles of the length triangle, each in [0, pi].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleAngles {
    pub eta1: f64,
    pub eta2: f64,
    pub eta3: f64,
}

/// Which stationary point: `P` carries twist `+gamma`, `PPrime` `-gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    P,
    PPrime,
}

impl Branch {
    pub fn twist_sign(self) -> f64 {
        match self {
            Branch::P => 1.0,
            Branch::PPrime => -1.0,
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Branch::P => f.write_str("p"),
            Branch::PPrime => f.write_str("p'"),
        }
    }
}

/// A constructed stationary point together with the data it was built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryPoint {
    pub angles: TriangleAngles,
    pub beta: f64,
    /// Magnitude of the twist angle in [0, pi]; the applied twist is
    /// `branch.twist_sign() * gamma`.
    pub gamma: f64,
    pub branch: Branch,
    pub spinors: SpinorTriple,
    pub vectors: [Vec3; 3],
    /// Vector lengths the point was built for (quantum or half-shifted).
    pub lengths: [f64; 3],
    /// Target z-projections (the magnetic quantum numbers).
    pub z_targets: [f64; 3],
}

impl StationaryPoint {
    pub fn twist(&self) -> f64 {
        self.branch.twist_sign() * self.gamma
    }

    pub fn residual(&self) -> f64 {
        stationarity_residual(self, self.lengths, self.z_targets)
    }
}

/// Exterior angles from the law of cosines,
/// `cos eta_r = (l_r^2 - l_s^2 - l_t^2) / (2 l_s l_t)`.
///
/// `DegenerateTriangle` when any cosine is within [`CAUSTIC_EPS`] of +-1
/// (collinear triangle or violated inequality).
pub fn interior_angles(lengths: [f64; 3]) -> Result<TriangleAngles> {
    interior_angles_with(lengths, &Tolerances::default())
}

pub fn interior_angles_with(lengths: [f64; 3], tol: &Tolerances) -> Result<TriangleAngles> {
    let [l1, l2, l3] = lengths;
    let cos = [
        (l1 * l1 - l2 * l2 - l3 * l3) / (2.0 * l2 * l3),
        (l2 * l2 - l3 * l3 - l1 * l1) / (2.0 * l3 * l1),
        (l3 * l3 - l1 * l1 - l2 * l2) / (2.0 * l1 * l2),
    ];
    if cos.iter().any(|c| c.abs() >= 1.0 - tol.caustic) {
        return Err(Error::DegenerateTriangle);
    }
    Ok(TriangleAngles { eta1: cos[0].acos(), eta2: cos[1].acos(), eta3: cos[2].acos() })
}

/// Tilt angle about y: `beta = arccos(m3 / l3)` in [0, pi].
pub fn tilt_angle_beta(l3: f64, m3: f64) -> Result<f64> {
    if m3.abs() > l3 {
        return Err(Error::OutOfRange);
    }
    Ok((m3 / l3).clamp(-1.0, 1.0).acos())
}

/// Twist angle about the tilted third axis:
/// `cos gamma = (l1 cos(beta) cos(eta2) - m1) / (l1 sin(beta) sin(eta2))`,
/// returned in [0, pi]. The caller forms `-gamma` for the second branch.
pub fn twist_angle_gamma(l1: f64, m1: f64, beta: f64, eta2: f64) -> Result<f64> {
    twist_angle_gamma_with(l1, m1, beta, eta2, &Tolerances::default())
}

pub fn twist_angle_gamma_with(
    l1: f64,
    m1: f64,
    beta: f64,
    eta2: f64,
    tol: &Tolerances,
) -> Result<f64> {
    let s = beta.sin() * eta2.sin();
    if s <= tol.caustic {
        return Err(Error::PolarSingularity);
    }
    let x = (l1 * beta.cos() * eta2.cos() - m1) / (l1 * s);
    if x.abs() > 1.0 + tol.fuzz {
        return Err(Error::ClassicallyForbidden);
    }
    Ok(x.clamp(-1.0, 1.0).acos())
}

/// Real spinors over the reference triangle (third vector on +z):
///
/// ```text
/// s1 = sqrt(2 l1) (cos(eta2/2),  sin(eta2/2))
/// s2 = sqrt(2 l2) (cos(eta1/2), -sin(eta1/2))
/// s3 = sqrt(2 l3) (1, 0)
/// ```
pub fn reference_spinors(lengths: [f64; 3], angles: &TriangleAngles) -> SpinorTriple {
    let re = |x: f64| Complex64::new(x, 0.0);
    let n1 = (2.0 * lengths[0]).sqrt();
    let n2 = (2.0 * lengths[1]).sqrt();
    let n3 = (2.0 * lengths[2]).sqrt();
    SpinorTriple {
        s: [
            Spinor::new(re(n1 * (angles.eta2 / 2.0).cos()), re(n1 * (angles.eta2 / 2.0).sin())),
            Spinor::new(re(n2 * (angles.eta1 / 2.0).cos()), re(-n2 * (angles.eta1 / 2.0).sin())),
            Spinor::new(re(n3), re(0.0)),
        ],
    }
}

/// SU(2) lift `u(y, beta) u(z, gamma)`:
///
/// ```text
/// [ e^{-i gamma/2} cos(beta/2)   -e^{i gamma/2} sin(beta/2) ]
/// [ e^{-i gamma/2} sin(beta/2)    e^{i gamma/2} cos(beta/2) ]
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su2(pub [[Complex64; 2]; 2]);

impl Su2 {
    pub fn apply(&self, s: &Spinor) -> Spinor {
        Spinor::new(
            self.0[0][0] * s.z1 + self.0[0][1] * s.z2,
            self.0[1][0] * s.z1 + self.0[1][1] * s.z2,
        )
    }

    pub fn det(&self) -> Complex64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    /// Max deviation from unitarity (entries of u u^dagger - 1).
    pub fn unitarity_defect(&self) -> f64 {
        let a = self.0;
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..2 {
                    acc += a[i][k] * a[j][k].conj();
                }
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((acc - target).norm());
            }
        }
        worst
    }
}

pub fn su2_lift(beta: f64, gamma: f64) -> Su2 {
    let em = Complex64::from_polar(1.0, -gamma / 2.0);
    let ep = Complex64::from_polar(1.0, gamma / 2.0);
    let c = (beta / 2.0).cos();
    let s = (beta / 2.0).sin();
    Su2([[em * c, -ep * s], [em * s, ep * c]])
}

/// Hopf projection of a spinor:
/// `J = (Re(conj(z1) z2), Im(conj(z1) z2), (|z1|^2 - |z2|^2)/2)` and
/// `I = (|z1|^2 + |z2|^2)/2`, with `|J| = I` identically.
pub fn hopf_project(s: &Spinor) -> (Vec3, f64) {
    let w = s.z1.conj() * s.z2;
    let jz = 0.5 * (s.z1.norm_sqr() - s.z2.norm_sqr());
    let i = 0.5 * (s.z1.norm_sqr() + s.z2.norm_sqr());
    (Vec3::new(w.re, w.im, jz), i)
}

/// Build a full stationary point for the given lengths and z-projections.
///
/// The inputs are taken as already permuted: `m3` must avoid the poles of
/// the construction (otherwise `PolarSingularity` propagates and the caller
/// retries with an even column permutation; see [`classify_lengths`]).
pub fn stationary_point(lengths: [f64; 3], m: [f64; 3], branch: Branch) -> Result<StationaryPoint> {
    stationary_point_with(lengths, m, branch, &Tolerances::default())
}

pub fn stationary_point_with(
    lengths: [f64; 3],
    m: [f64; 3],
    branch: Branch,
    tol: &Tolerances,
) -> Result<StationaryPoint> {
    let angles = interior_angles_with(lengths, tol)?;
    let beta = tilt_angle_beta(lengths[2], m[2])?;
    let gamma = twist_angle_gamma_with(lengths[0], m[0], beta, angles.eta2, tol)?;
    let twist = branch.twist_sign() * gamma;

    let lift = su2_lift(beta, twist);
    let refs = reference_spinors(lengths, &angles);
    let spinors = SpinorTriple {
        s: [lift.apply(&refs.s[0]), lift.apply(&refs.s[1]), lift.apply(&refs.s[2])],
    };

    let (cb, sb) = (beta.cos(), beta.sin());
    let (cg, sg) = (twist.cos(), twist.sin());
    let (c1, s1) = (angles.eta1.cos(), angles.eta1.sin());
    let (c2, s2) = (angles.eta2.cos(), angles.eta2.sin());
    let vectors = [
        Vec3::new(
            lengths[0] * (cb * cg * s2 + sb * c2),
            lengths[0] * (sg * s2),
            lengths[0] * (-sb * cg * s2 + cb * c2),
        ),
        Vec3::new(
            lengths[1] * (-cb * cg * s1 + sb * c1),
            lengths[1] * (-sg * s1),
            lengths[1] * (sb * cg * s1 + cb * c1),
        ),
        Vec3::new(lengths[2] * sb, 0.0, lengths[2] * cb),
    ];

    Ok(StationaryPoint {
        angles,
        beta,
        gamma,
        branch,
        spinors,
        vectors,
        lengths,
        z_targets: m,
    })
}

/// Spinors of the stationary point only.
pub fn stationary_spinors(lengths: [f64; 3], m: [f64; 3], branch: Branch) -> Result<SpinorTriple> {
    Ok(stationary_point(lengths, m, branch)?.spinors)
}

/// Closed-form vectors of the stationary point only.
pub fn stationary_vectors(lengths: [f64; 3], m: [f64; 3], branch: Branch) -> Result<[Vec3; 3]> {
    Ok(stationary_point(lengths, m, branch)?.vectors)
}

/// Worst normalized violation of the stationarity conditions at `st`:
/// `|I_r - l_r|` and `|J_rz - m_r|` scaled by `max(1, l_r)`, and the closure
/// `|sum_r J_r|` scaled by `max(1, max_r l_r)`.
pub fn stationarity_residual(st: &StationaryPoint, lengths: [f64; 3], m: [f64; 3]) -> f64 {
    let mut worst: f64 = 0.0;
    let mut closure = Vec3::default();
    for r in 0..3 {
        let (j, i) = hopf_project(&st.spinors.s[r]);
        let scale = lengths[r].max(1.0);
        worst = worst.max((i - lengths[r]).abs() / scale);
        worst = worst.max((j.z - m[r]).abs() / scale);
        closure = closure.add(&j);
    }
    let scale = lengths.iter().cloned().fold(1.0f64, f64::max);
    worst.max(closure.norm() / scale)
}

/// Geometric classification of a configuration at given vector lengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConfigClass {
    Allowed,
    Forbidden,
    Caustic,
    PolarDegenerate,
}

impl fmt::Display for ConfigClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ConfigClass::Allowed => "Allowed",
            ConfigClass::Forbidden => "Forbidden",
            ConfigClass::Caustic => "Caustic",
            ConfigClass::PolarDegenerate => "PolarDegenerate",
        };
        f.write_str(s)
    }
}

/// Classify at explicit lengths, trying the even column permutations.
///
/// The construction pins the third vector to the z-axis, which is arbitrary;
/// when `m3 = +-l3` makes it singular, an even permutation (which leaves the
/// 3j-symbol invariant) usually rescues the configuration. Returns the class
/// and the permutation that realized it.
pub fn classify_lengths(lengths: [f64; 3], m: [f64; 3]) -> (ConfigClass, [usize; 3]) {
    classify_lengths_with(lengths, m, &Tolerances::default())
}

pub fn classify_lengths_with(
    lengths: [f64; 3],
    m: [f64; 3],
    tol: &Tolerances,
) -> (ConfigClass, [usize; 3]) {
    let angles = match interior_angles_with(lengths, tol) {
        Ok(a) => a,
        Err(_) => return (ConfigClass::Caustic, EVEN_PERMUTATIONS[0]),
    };
    let etas = [angles.eta1, angles.eta2, angles.eta3];
    let mut saw_caustic = false;
    let mut saw_forbidden = false;
    for perm in EVEN_PERMUTATIONS {
        let l = [lengths[perm[0]], lengths[perm[1]], lengths[perm[2]]];
        let mm = [m[perm[0]], m[perm[1]], m[perm[2]]];
        // eta2 of the permuted triple is the exterior angle at its second edge
        let eta2 = etas[perm[1]];
        let beta = match tilt_angle_beta(l[2], mm[2]) {
            Ok(b) => b,
            Err(_) => return (ConfigClass::Caustic, perm), // cannot happen for valid configs
        };
        let s = beta.sin() * eta2.sin();
        if s <= tol.caustic {
            continue; // polar for this permutation
        }
        let x = (l[0] * beta.cos() * eta2.cos() - mm[0]) / (l[0] * s);
        if x.abs() < 1.0 - tol.caustic {
            return (ConfigClass::Allowed, perm);
        }
        if x.abs() <= 1.0 + tol.fuzz {
            saw_caustic = true;
        } else {
            saw_forbidden = true;
        }
    }
    if saw_caustic {
        (ConfigClass::Caustic, EVEN_PERMUTATIONS[0])
    } else if saw_forbidden {
        (ConfigClass::Forbidden, EVEN_PERMUTATIONS[0])
    } else {
        (ConfigClass::PolarDegenerate, EVEN_PERMUTATIONS[0])
    }
}

/// Classify a quantum configuration at its quantum lengths `l_r = j_r`.
///
/// `InvalidConfig` when the selection rules already force a zero.
pub fn classify_configuration(c: &JmConfig) -> Result<ConfigClass> {
    classify_configuration_full(c).map(|(class, _)| class)
}

/// Classification plus the even permutation that realized it.
pub fn classify_configuration_full(c: &JmConfig) -> Result<(ConfigClass, [usize; 3])> {
    classify_configuration_full_with(c, &Tolerances::default())
}

pub fn classify_configuration_full_with(
    c: &JmConfig,
    tol: &Tolerances,
) -> Result<(ConfigClass, [usize; 3])> {
    match selection_rules(c) {
        SelectionOutcome::Valid => {}
        reason => return Err(Error::InvalidConfig(reason)),
    }
    Ok(classify_lengths_with(c.j_f64(), c.m_f64(), tol))
}
