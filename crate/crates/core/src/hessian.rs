//! The 8x8 transversal Hessian of the phase function in reduced coordinates,
//! verified four ways: analytic entries against central finite differences,
//! and the determinant by direct elimination, by a symmetric closed form in
//! the ratio variables, and by a closed form in the spinor components.
//!
//! Coordinates: with `z_s1 = R_s r_s2 e^{i(Phi_s + phi_s2)}` and
//! `z_s2 = r_s2 e^{i phi_s2}`, the stationary set is a 4-torus (three overall
//! phases and one combined rotation). The eight transversal directions are
//! `(Phi_1, Phi_2, R_1, R_2, R_3, r_12, r_22, r_32)`; `Phi_3` and the three
//! `phi_s2` are gauge and frozen at their stationary values. The constructed
//! stationary points have `Z_3 = z_31/z_32 = cot(beta/2) > 0`, so the frozen
//! `Phi_3` is zero and the phase function below fixes `Z_3 = R_3`.
//!
//! The three `d^2 f / dR_s^2` diagonal entries are simplified with the
//! first-derivative conditions, so the analytic matrix equals the true
//! Hessian only at stationary points; every comparison below evaluates there.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{hopf_project, SpinorTriple, LOG_EPS};
use crate::halfint::JmConfig;
use crate::semiclassical::projected_area_delta_z;

/// Reduced transversal coordinates.
///
/// `phi1`, `phi2`: relative phases `arg z_s1 - arg z_s2` for s = 1, 2;
/// `r1`, `r2`, `r3`: modulus ratios `|z_s1| / |z_s2|`;
/// `r12`, `r22`, `r32`: moduli of the second components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedCoords {
    pub phi1: f64,
    pub phi2: f64,
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    pub r12: f64,
    pub r22: f64,
    pub r32: f64,
}

impl ReducedCoords {
    pub fn as_array(&self) -> [f64; 8] {
        [self.phi1, self.phi2, self.r1, self.r2, self.r3, self.r12, self.r22, self.r32]
    }

    pub fn from_array(a: [f64; 8]) -> Self {
        ReducedCoords {
            phi1: a[0], phi2: a[1],
            r1: a[2], r2: a[3], r3: a[4],
            r12: a[5], r22: a[6], r32: a[7],
        }
    }

    fn z(&self) -> [Complex64; 3] {
        [
            Complex64::from_polar(self.r1, self.phi1),
            Complex64::from_polar(self.r2, self.phi2),
            Complex64::new(self.r3, 0.0),
        ]
    }
}

/// Gauge data frozen during Hessian evaluation: the phases of the second
/// components and the relative phase of the third spinor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaugePhases {
    pub phi3: f64,
    pub phi_s2: [f64; 3],
}

/// Project spinors onto the reduced coordinates.
///
/// `CoordinateSingularity` when any component is too small for the ratios to
/// make sense (|m_s| at its extremes).
pub fn to_reduced(spinors: &SpinorTriple) -> Result<ReducedCoords> {
    Ok(reduced_with_gauge(spinors)?.0)
}

/// Reduced coordinates together with the frozen gauge phases.
pub fn reduced_with_gauge(spinors: &SpinorTriple) -> Result<(ReducedCoords, GaugePhases)> {
    let c = spinors.components();
    if c.iter().any(|z| z.norm() < LOG_EPS) {
        return Err(Error::CoordinateSingularity);
    }
    let rel = |s: usize| {
        let z1 = c[2 * s];
        let z2 = c[2 * s + 1];
        (z1.norm() / z2.norm(), (z1 / z2).arg())
    };
    let (r1, phi1) = rel(0);
    let (r2, phi2) = rel(1);
    let (r3, phi3) = rel(2);
    Ok((
        ReducedCoords {
            phi1, phi2,
            r1, r2, r3,
            r12: c[1].norm(), r22: c[3].norm(), r32: c[5].norm(),
        },
        GaugePhases { phi3, phi_s2: [c[1].arg(), c[3].arg(), c[5].arg()] },
    ))
}

/// Rebuild spinors from reduced coordinates and frozen gauge phases.
pub fn from_reduced(q: &ReducedCoords, gauge: &GaugePhases) -> SpinorTriple {
    let build = |ratio: f64, rel_phase: f64, r2: f64, phase2: f64| {
        crate::geometry::Spinor::new(
            Complex64::from_polar(ratio * r2, rel_phase + phase2),
            Complex64::from_polar(r2, phase2),
        )
    };
    SpinorTriple {
        s: [
            build(q.r1, q.phi1, q.r12, gauge.phi_s2[0]),
            build(q.r2, q.phi2, q.r22, gauge.phi_s2[1]),
            build(q.r3, gauge.phi3, q.r32, gauge.phi_s2[2]),
        ],
    }
}

fn quantum_numbers(c: &JmConfig) -> ([f64; 3], [f64; 3], [f64; 3]) {
    let j = c.j_f64();
    let m = c.m_f64();
    let k = [
        j[1] + j[2] - j[0],
        j[2] + j[0] - j[1],
        j[0] + j[1] - j[2],
    ];
    (j, m, k)
}

/// The phase function in reduced coordinates (with `Phi_3 = 0`):
///
/// ```text
/// f = sum_s (j_s + m_s) ln conj(Z_s)
///   + k1 ln(Z2 - Z3) + k2 ln(Z3 - Z1) + k3 ln(Z1 - Z2)
///   - sum_s r_s2^2 R_s^2 + sum_s 4 j_s ln r_s2 - sum_s r_s2^2
/// ```
///
/// `branch_ref` supplies reference arguments for the three difference
/// logarithms so finite-difference stencils stay on one branch.
pub fn f_reduced(q: &ReducedCoords, c: &JmConfig) -> Result<Complex64> {
    f_reduced_branched(q, c, None)
}

pub fn f_reduced_branched(
    q: &ReducedCoords,
    c: &JmConfig,
    branch_ref: Option<&[f64; 3]>,
) -> Result<Complex64> {
    let (j, m, k) = quantum_numbers(c);
    let z = q.z();
    let diffs = [z[1] - z[2], z[2] - z[0], z[0] - z[1]];
    if diffs.iter().any(|d| d.norm() < LOG_EPS) {
        return Err(Error::LogSingularity);
    }
    let rr = [q.r1, q.r2, q.r3];
    let r2 = [q.r12, q.r22, q.r32];
    if rr.iter().chain(r2.iter()).any(|&x| x < LOG_EPS) {
        return Err(Error::LogSingularity);
    }
    let mut f = Complex64::new(0.0, 0.0);
    let phis = [q.phi1, q.phi2, 0.0];
    for s in 0..3 {
        // ln conj(Z_s) = ln R_s - i Phi_s, no branch cut in the coordinates
        f += (j[s] + m[s]) * Complex64::new(rr[s].ln(), -phis[s]);
    }
    for i in 0..3 {
        let arg = match branch_ref {
            None => diffs[i].arg(),
            Some(refs) => refs[i] + wrap_pm_pi(diffs[i].arg() - refs[i]),
        };
        f += k[i] * Complex64::new(diffs[i].norm().ln(), arg);
    }
    for s in 0..3 {
        f += -r2[s] * r2[s] * rr[s] * rr[s] + 4.0 * j[s] * r2[s].ln() - r2[s] * r2[s];
    }
    Ok(f)
}

fn wrap_pm_pi(x: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut r = x.rem_euclid(two_pi);
    if r > std::f64::consts::PI {
        r -= two_pi;
    }
    r
}

/// The eight analytic first derivatives of [`f_reduced`], in coordinate
/// order `(Phi_1, Phi_2, R_1, R_2, R_3, r_12, r_22, r_32)`.
pub fn grad_f_reduced(q: &ReducedCoords, c: &JmConfig) -> Result<[Complex64; 8]> {
    let (j, m, k) = quantum_numbers(c);
    let z = q.z();
    let d23 = z[1] - z[2];
    let d31 = z[2] - z[0];
    let d12 = z[0] - z[1];
    if [d23, d31, d12].iter().any(|d| d.norm() < LOG_EPS) {
        return Err(Error::LogSingularity);
    }
    let i = Complex64::i();
    let g_phi1 = i * (-(j[0] + m[0]) - k[1] * z[0] / d31 + k[2] * z[0] / d12);
    let g_phi2 = i * (-(j[1] + m[1]) + k[0] * z[1] / d23 - k[2] * z[1] / d12);
    let g_r1 = ((j[0] + m[0]) - k[1] * z[0] / d31 + k[2] * z[0] / d12
        - 2.0 * q.r12 * q.r12 * q.r1 * q.r1)
        / q.r1;
    let g_r2 = ((j[1] + m[1]) + k[0] * z[1] / d23 - k[2] * z[1] / d12
        - 2.0 * q.r22 * q.r22 * q.r2 * q.r2)
        / q.r2;
    let g_r3 = ((j[2] + m[2]) - k[0] * z[2] / d23 + k[1] * z[2] / d31
        - 2.0 * q.r32 * q.r32 * q.r3 * q.r3)
        / q.r3;
    let radial = |rs: f64, rs2: f64, js: f64| -2.0 * (1.0 + rs * rs) * rs2 + 4.0 * js / rs2;
    Ok([
        g_phi1,
        g_phi2,
        g_r1,
        g_r2,
        g_r3,
        radial(q.r1, q.r12, j[0]).into(),
        radial(q.r2, q.r22, j[1]).into(),
        radial(q.r3, q.r32, j[2]).into(),
    ])
}

pub type ComplexMatrix8 = [[Complex64; 8]; 8];

/// Index pairs (upper triangle) of the 21 structurally nonzero entries.
pub const NONZERO_PATTERN: [(usize, usize); 21] = [
    (0, 0), (0, 1), (0, 2), (0, 3), (0, 4),
    (1, 1), (1, 2), (1, 3), (1, 4),
    (2, 2), (2, 3), (2, 4), (2, 5),
    (3, 3), (3, 4), (3, 6),
    (4, 4), (4, 7),
    (5, 5), (6, 6), (7, 7),
];

/// The symmetric 8x8 matrix with the 21 analytic second derivatives (the
/// `R_s R_s` diagonals use the stationarity identities; see module docs).
pub fn hessian_analytic(q: &ReducedCoords, c: &JmConfig) -> Result<ComplexMatrix8> {
    let (j, _m, k) = quantum_numbers(c);
    let z = q.z();
    let d23 = z[1] - z[2];
    let d31 = z[2] - z[0];
    let d12 = z[0] - z[1];
    if [d23, d31, d12].iter().any(|d| d.norm() < LOG_EPS) {
        return Err(Error::LogSingularity);
    }
    let d23_2 = d23 * d23;
    let d31_2 = d31 * d31;
    let d12_2 = d12 * d12;
    let e1 = Complex64::from_polar(1.0, q.phi1);
    let e2 = Complex64::from_polar(1.0, q.phi2);
    let i = Complex64::i();

    let mut h = [[Complex64::new(0.0, 0.0); 8]; 8];
    h[0][0] = k[1] * z[0] * z[2] / d31_2 + k[2] * z[0] * z[1] / d12_2;
    h[0][1] = -k[2] * z[0] * z[1] / d12_2;
    h[0][2] = -i * (k[1] * z[2] * e1 / d31_2 + k[2] * z[1] * e1 / d12_2);
    h[0][3] = i * k[2] * z[0] * e2 / d12_2;
    h[0][4] = i * k[1] * z[0] / d31_2;
    h[1][1] = k[0] * z[1] * z[2] / d23_2 + k[2] * z[0] * z[1] / d12_2;
    h[1][2] = i * k[2] * z[1] * e1 / d12_2;
    h[1][3] = -i * (k[0] * z[2] * e2 / d23_2 + k[2] * z[0] * e2 / d12_2);
    h[1][4] = i * k[0] * z[1] / d23_2;
    h[2][2] = -(k[1] * z[2] * e1 / (q.r1 * d31_2)
        + k[2] * z[1] * e1 / (q.r1 * d12_2)
        + 4.0 * q.r12 * q.r12);
    h[2][3] = k[2] * e1 * e2 / d12_2;
    h[2][4] = k[1] * e1 / d31_2;
    h[3][3] = -(k[0] * z[2] * e2 / (q.r2 * d23_2)
        + k[2] * z[0] * e2 / (q.r2 * d12_2)
        + 4.0 * q.r22 * q.r22);
    h[3][4] = k[0] * e2 / d23_2;
    h[4][4] = -(k[0] * z[1] / (q.r3 * d23_2)
        + k[1] * z[0] / (q.r3 * d31_2)
        + 4.0 * q.r32 * q.r32);
    h[2][5] = (-4.0 * q.r12 * q.r1).into();
    h[3][6] = (-4.0 * q.r22 * q.r2).into();
    h[4][7] = (-4.0 * q.r32 * q.r3).into();
    h[5][5] = (-2.0 * (1.0 + q.r1 * q.r1 + 2.0 * j[0] / (q.r12 * q.r12))).into();
    h[6][6] = (-2.0 * (1.0 + q.r2 * q.r2 + 2.0 * j[1] / (q.r22 * q.r22))).into();
    h[7][7] = (-2.0 * (1.0 + q.r3 * q.r3 + 2.0 * j[2] / (q.r32 * q.r32))).into();

    for a in 0..8 {
        for b in (a + 1)..8 {
            h[b][a] = h[a][b];
        }
    }
    Ok(h)
}

/// Central finite-difference Hessian of [`f_reduced`], with per-coordinate
/// steps `h_i = step * max(1, |q_i|)` and branch-tracked logarithms.
pub fn hessian_fd(q: &ReducedCoords, c: &JmConfig, step: f64) -> Result<ComplexMatrix8> {
    let base = q.as_array();
    let z = q.z();
    let refs = [
        (z[1] - z[2]).arg(),
        (z[2] - z[0]).arg(),
        (z[0] - z[1]).arg(),
    ];
    let eval = |coords: [f64; 8]| -> Result<Complex64> {
        f_reduced_branched(&ReducedCoords::from_array(coords), c, Some(&refs))
    };
    let h: Vec<f64> = base.iter().map(|&x| step * x.abs().max(1.0)).collect();
    let f0 = eval(base)?;
    let mut out = [[Complex64::new(0.0, 0.0); 8]; 8];
    for a in 0..8 {
        let mut plus = base;
        let mut minus = base;
        plus[a] += h[a];
        minus[a] -= h[a];
        out[a][a] = (eval(plus)? - 2.0 * f0 + eval(minus)?) / (h[a] * h[a]);
    }
    for a in 0..8 {
        for b in (a + 1)..8 {
            let mut pp = base;
            let mut pm = base;
            let mut mp = base;
            let mut mm = base;
            pp[a] += h[a]; pp[b] += h[b];
            pm[a] += h[a]; pm[b] -= h[b];
            mp[a] -= h[a]; mp[b] += h[b];
            mm[a] -= h[a]; mm[b] -= h[b];
            let val = (eval(pp)? - eval(pm)? - eval(mp)? + eval(mm)?) / (4.0 * h[a] * h[b]);
            out[a][b] = val;
            out[b][a] = val;
        }
    }
    Ok(out)
}

/// Central finite-difference gradient of [`f_reduced`].
pub fn grad_fd(q: &ReducedCoords, c: &JmConfig, step: f64) -> Result<[Complex64; 8]> {
    let base = q.as_array();
    let z = q.z();
    let refs = [
        (z[1] - z[2]).arg(),
        (z[2] - z[0]).arg(),
        (z[0] - z[1]).arg(),
    ];
    let eval = |coords: [f64; 8]| -> Result<Complex64> {
        f_reduced_branched(&ReducedCoords::from_array(coords), c, Some(&refs))
    };
    let mut g = [Complex64::new(0.0, 0.0); 8];
    for a in 0..8 {
        let h = step * base[a].abs().max(1.0);
        let mut plus = base;
        let mut minus = base;
        plus[a] += h;
        minus[a] -= h;
        g[a] = (eval(plus)? - eval(minus)?) / (2.0 * h);
    }
    Ok(g)
}

/// Determinant by LU elimination with partial pivoting.
pub fn det8(m: &ComplexMatrix8) -> Complex64 {
    let mut a = *m;
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..8 {
        let pivot = (col..8)
            .max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm()))
            .unwrap();
        if a[pivot][col].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        for row in (col + 1)..8 {
            let factor = a[row][col] / a[col][col];
            for k in col..8 {
                let sub = factor * a[col][k];
                a[row][k] -= sub;
            }
        }
    }
    det
}

/// The four bracket factors of the symmetric determinant form, valid at
/// stationary points:
///
/// ```text
/// g1 = -k2 Z2/(Z3-Z1) + k3 Z2/(Z1-Z2)      g2 = k1 Z3/(Z2-Z3) - k3 Z1/(Z1-Z2)
/// g3 =  k2 Z3/(Z3-Z1) - k3 Z2/(Z1-Z2)      g4 = -k1 Z1/(Z2-Z3) + k3 Z1/(Z1-Z2)
/// ```
pub fn symmetric_form_factors(q: &ReducedCoords, c: &JmConfig) -> Result<[Complex64; 4]> {
    let (_j, _m, k) = quantum_numbers(c);
    let z = q.z();
    let d23 = z[1] - z[2];
    let d31 = z[2] - z[0];
    let d12 = z[0] - z[1];
    if [d23, d31, d12].iter().any(|d| d.norm() < LOG_EPS) {
        return Err(Error::LogSingularity);
    }
    Ok([
        -k[1] * z[1] / d31 + k[2] * z[1] / d12,
        k[0] * z[2] / d23 - k[2] * z[0] / d12,
        k[1] * z[2] / d31 - k[2] * z[1] / d12,
        -k[0] * z[0] / d23 + k[2] * z[0] / d12,
    ])
}

/// Determinant via the symmetric form
/// `det H = 4^6 Z1 Z2 Z3 / ((Z1-Z2)(Z2-Z3)(Z3-Z1)) * (g1 g2 - g3 g4)`.
///
/// Assumes the first-derivative conditions hold (stationary point).
pub fn hessian_det_symmetric(q: &ReducedCoords, c: &JmConfig) -> Result<Complex64> {
    let z = q.z();
    let d23 = z[1] - z[2];
    let d31 = z[2] - z[0];
    let d12 = z[0] - z[1];
    let [g1, g2, g3, g4] = symmetric_form_factors(q, c)?;
    let g = 4096.0 * z[0] * z[1] * z[2] / (d12 * d23 * d31);
    Ok(g * (g1 * g2 - g3 * g4))
}

/// Post-elimination diagonal entries in the radial block,
/// `-2 (1 - R_s^2 + 2 j_s / r_s2^2)`; each equals -4 at stationarity.
pub fn eliminated_radial_diagonal(q: &ReducedCoords, c: &JmConfig) -> [Complex64; 3] {
    let (j, _m, _k) = quantum_numbers(c);
    let entry = |rs: f64, rs2: f64, js: f64| {
        Complex64::from(-2.0 * (1.0 - rs * rs + 2.0 * js / (rs2 * rs2)))
    };
    [
        entry(q.r1, q.r12, j[0]),
        entry(q.r2, q.r22, j[1]),
        entry(q.r3, q.r32, j[2]),
    ]
}

/// Closed form of the full transversal Hessian (determinant times the
/// coordinate Jacobian `prod r_{s mu}^{-2}`), directly from the spinors:
///
/// ```text
/// Hessian = i 4^7 Delta_z /
///   [ conj(z11 z12 z21 z22 z31 z32) * d3 * d2 * d1 ]
/// ```
pub fn hessian_closed_form(spinors: &SpinorTriple) -> Result<Complex64> {
    let comps = spinors.components();
    let deltas = spinors.deltas();
    if comps.iter().any(|z| z.norm() < LOG_EPS) || deltas.iter().any(|d| d.norm() < LOG_EPS) {
        return Err(Error::LogSingularity);
    }
    let (j1, _) = hopf_project(&spinors.s[0]);
    let (j2, _) = hopf_project(&spinors.s[1]);
    let delta_z = projected_area_delta_z(&j1, &j2);
    let mut denom = Complex64::new(1.0, 0.0);
    for z in comps {
        denom *= z.conj();
    }
    denom *= deltas[2] * deltas[1] * deltas[0];
    Ok(Complex64::i() * 16384.0 * delta_z / denom)
}

/// Coordinate Jacobian `prod_{s,mu} r_{s mu}^{-2}`.
pub fn jacobian_factor(spinors: &SpinorTriple) -> f64 {
    spinors
        .components()
        .iter()
        .map(|z| 1.0 / z.norm_sqr())
        .product()
}

/// Everything criterion-level checks need, computed at one stationary point.
///
/// The elimination that produces the symmetric determinant form rescales the
/// three radial-ratio rows by `1/r_s2^2`, so the raw determinant satisfies
/// `det_direct = radial_row_scale * det_symmetric`, and the closed form is
/// `closed_form = jacobian * det_symmetric`. [`HessianReport::det_eliminated`]
/// puts the direct determinant in the same normalization as the other two.
#[derive(Debug, Clone)]
pub struct HessianReport {
    pub analytic: ComplexMatrix8,
    pub fd: ComplexMatrix8,
    /// Direct LU determinant of `analytic`.
    pub det_direct: Complex64,
    /// Symmetric-form determinant.
    pub det_symmetric: Complex64,
    /// Closed form including the Jacobian factor.
    pub closed_form: Complex64,
    pub jacobian: f64,
    /// `prod_s r_s2^2`, the row scaling absorbed by the elimination.
    pub radial_row_scale: f64,
    /// `max |analytic - fd|` over `max |analytic|` (matrix max-norms).
    pub max_rel_err: f64,
    /// Worst `|fd|` on a structurally zero entry, over `max |analytic|`.
    pub zero_pattern_err: f64,
}

impl HessianReport {
    /// Direct determinant in the eliminated normalization; agrees with
    /// `det_symmetric` and `closed_form / jacobian`.
    pub fn det_eliminated(&self) -> Complex64 {
        self.det_direct / self.radial_row_scale
    }
}

/// Default FD step used by [`hessian_report`].
pub const FD_STEP: f64 = 1e-4;

pub fn hessian_report(spinors: &SpinorTriple, c: &JmConfig) -> Result<HessianReport> {
    let q = to_reduced(spinors)?;
    let analytic = hessian_analytic(&q, c)?;
    let fd = hessian_fd(&q, c, FD_STEP)?;
    let scale = analytic
        .iter()
        .flatten()
        .map(|z| z.norm())
        .fold(0.0f64, f64::max);
    let mut err: f64 = 0.0;
    let mut zero_err: f64 = 0.0;
    let nonzero: std::collections::HashSet<(usize, usize)> = NONZERO_PATTERN
        .iter()
        .flat_map(|&(a, b)| [(a, b), (b, a)])
        .collect();
    for a in 0..8 {
        for b in 0..8 {
            let diff = (analytic[a][b] - fd[a][b]).norm();
            err = err.max(diff);
            if !nonzero.contains(&(a, b)) {
                zero_err = zero_err.max(fd[a][b].norm());
                assert_eq!(analytic[a][b], Complex64::new(0.0, 0.0));
            }
        }
    }
    Ok(HessianReport {
        analytic,
        fd,
        det_direct: det8(&analytic),
        det_symmetric: hessian_det_symmetric(&q, c)?,
        closed_form: hessian_closed_form(spinors)?,
        jacobian: jacobian_factor(spinors),
        radial_row_scale: (q.r12 * q.r22 * q.r32).powi(2),
        max_rel_err: err / scale,
        zero_pattern_err: zero_err / scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{stationary_point, Branch};
    use approx::assert_relative_eq;

    fn cfg(tj: [i64; 3], tm: [i64; 3]) -> JmConfig {
        JmConfig::from_twice(tj, tm)
    }

    fn stationary_coords(c: &JmConfig) -> (ReducedCoords, SpinorTriple) {
        let p = stationary_point(c.j_f64(), c.m_f64(), Branch::P).unwrap();
        (to_reduced(&p.spinors).unwrap(), p.spinors)
    }

    #[test]
    fn reduced_coordinate_identities() {
        let c = cfg([8, 10, 12], [2, -4, 2]);
        let (q, spinors) = stationary_coords(&c);
        let j = c.j_f64();
        let m = c.m_f64();
        // r_s2 = sqrt(j_s - m_s)
        assert_relative_eq!(q.r12, (j[0] - m[0]).sqrt(), max_relative = 1e-12);
        assert_relative_eq!(q.r32, (j[2] - m[2]).sqrt(), max_relative = 1e-12);
        // R_s^2 = (j_s + m_s)/(j_s - m_s)
        for (r, s) in [(q.r1, 0), (q.r2, 1), (q.r3, 2)] {
            assert_relative_eq!(
                r * r,
                (j[s] + m[s]) / (j[s] - m[s]),
                max_relative = 1e-12
            );
        }
        // round-trip through the gauge
        let (_, gauge) = reduced_with_gauge(&spinors).unwrap();
        let rebuilt = from_reduced(&q, &gauge);
        for (a, b) in rebuilt.components().iter().zip(spinors.components()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn reference_spinors_have_zero_or_pi_phases() {
        // the third reference spinor sits at the pole (z32 = 0), so only the
        // first two have well-defined relative phases
        let c = cfg([8, 10, 12], [0, 0, 0]);
        let angles = crate::geometry::interior_angles(c.j_f64()).unwrap();
        let refs = crate::geometry::reference_spinors(c.j_f64(), &angles);
        let phi1 = (refs.s[0].z1 / refs.s[0].z2).arg();
        let phi2 = (refs.s[1].z1 / refs.s[1].z2).arg();
        assert!(phi1.abs() < 1e-14);
        // second spinor has a negative lower component: relative phase pi
        assert_relative_eq!(phi2.abs(), std::f64::consts::PI, max_relative = 1e-12);
        assert!(matches!(to_reduced(&refs), Err(Error::CoordinateSingularity)));
    }

    #[test]
    fn gradient_vanishes_at_stationary_points() {
        for (tj, tm) in [([8i64, 10, 12], [2i64, -4, 2]), ([5, 7, 8], [1, 1, -2])] {
            let c = cfg(tj, tm);
            let (q, _) = stationary_coords(&c);
            let g = grad_f_reduced(&q, &c).unwrap();
            let scale = c.j_f64().iter().cloned().fold(1.0, f64::max);
            for (i, v) in g.iter().enumerate() {
                assert!(v.norm() / scale < 1e-9, "grad[{i}] = {v}");
            }
            // the Phi_1 stationarity identity behind the g1 factor
            let (j, m, k) = super::quantum_numbers(&c);
            let z = q.z();
            let lhs = Complex64::from(j[0] + m[0]);
            let rhs = -k[1] * z[0] / (z[2] - z[0]) + k[2] * z[0] / (z[0] - z[1]);
            assert!((lhs - rhs).norm() < 1e-9);
        }
    }

    #[test]
    fn gradient_matches_fd_off_stationary() {
        let c = cfg([8, 10, 12], [2, -4, 2]);
        let (q0, _) = stationary_coords(&c);
        // push off the stationary set, deterministically
        let mut arr = q0.as_array();
        for (i, x) in arr.iter_mut().enumerate() {
            *x *= 1.0 + 0.07 * ((i as f64) + 1.0).sin();
            if x.abs() < 0.05 {
                *x += 0.11;
            }
        }
        let q = ReducedCoords::from_array(arr);
        let g = grad_f_reduced(&q, &c).unwrap();
        let fd = grad_fd(&q, &c, 1e-6).unwrap();
        let scale = g.iter().map(|v| v.norm()).fold(1.0f64, f64::max);
        for a in 0..8 {
            assert!((g[a] - fd[a]).norm() / scale < 1e-6, "component {a}");
        }
    }

    #[test]
    fn f_reduced_matches_full_phase_function_up_to_constant() {
        // perturb the transversal coordinates with the gauge frozen; the
        // difference between f_reduced and the full phase function stays
        // constant
        let c = cfg([8, 10, 12], [2, -4, 2]);
        let (q0, spinors) = stationary_coords(&c);
        let (_, gauge) = reduced_with_gauge(&spinors).unwrap();
        let diff_at = |q: &ReducedCoords| {
            let full = crate::semiclassical::phase_function_f(&from_reduced(q, &gauge), &c, false)
                .unwrap();
            let red = f_reduced(q, &c).unwrap();
            full - red
        };
        // the gauge phases contribute integer-weighted principal-branch wraps,
        // so the real part is constant outright and the imaginary part mod 2 pi
        let base = diff_at(&q0);
        for idx in 0..8 {
            let mut arr = q0.as_array();
            arr[idx] *= 1.04;
            let d = diff_at(&ReducedCoords::from_array(arr));
            assert!((d.re - base.re).abs() < 1e-9, "coordinate {idx}: {d} vs {base}");
            assert!(
                crate::semiclassical::angle_distance(d.im, base.im) < 1e-9,
                "coordinate {idx}: {d} vs {base}"
            );
        }
    }

    #[test]
    fn analytic_hessian_matches_fd_at_stationary_points() {
        for (tj, tm) in [
            ([8i64, 10, 12], [2i64, -4, 2]),
            ([5, 7, 8], [1, 1, -2]),
            ([20, 22, 30], [4, -10, 6]),
        ] {
            let c = cfg(tj, tm);
            let (_, spinors) = stationary_coords(&c);
            let report = hessian_report(&spinors, &c).unwrap();
            assert!(report.max_rel_err < 1e-5, "{c}: rel err {}", report.max_rel_err);
            assert!(report.zero_pattern_err < 1e-5, "{c}: zero pattern {}", report.zero_pattern_err);
        }
    }

    #[test]
    fn fd_error_scales_quadratically_then_hits_roundoff() {
        let c = cfg([8, 10, 12], [2, -4, 2]);
        let (q, _) = stationary_coords(&c);
        let analytic = hessian_analytic(&q, &c).unwrap();
        let scale = analytic.iter().flatten().map(|z| z.norm()).fold(0.0f64, f64::max);
        let err_at = |h: f64| {
            let fd = hessian_fd(&q, &c, h).unwrap();
            let mut e: f64 = 0.0;
            for a in 0..8 {
                for b in 0..8 {
                    e = e.max((analytic[a][b] - fd[a][b]).norm());
                }
            }
            e / scale
        };
        // in the truncation-dominated region the error drops ~100x per decade
        let e2 = err_at(1e-2);
        let e3 = err_at(1e-3);
        let ratio = e2 / e3;
        assert!((50.0..200.0).contains(&ratio), "e2={e2} e3={e3} ratio={ratio}");
        // still decreasing at 1e-4; at 1e-5 roundoff may dominate but must
        // stay within the acceptance tolerance
        let e4 = err_at(1e-4);
        let e5 = err_at(1e-5);
        assert!(e4 < e3, "e3={e3} e4={e4}");
        assert!(e5 < 1e-5, "e5={e5}");
    }

    #[test]
    fn spec_entry_values() {
        let c = cfg([8, 10, 12], [2, -4, 2]);
        let (q, _) = stationary_coords(&c);
        let h = hessian_analytic(&q, &c).unwrap();
        // d2f/dr12 dr12 = -2 (1 + R1^2 + 2 j1 / r12^2)
        let expect = -2.0 * (1.0 + q.r1 * q.r1 + 2.0 * 4.0 / (q.r12 * q.r12));
        assert_relative_eq!(h[5][5].re, expect, max_relative = 1e-14);

        // post-elimination radial diagonal is -4 at stationarity
        for d in eliminated_radial_diagonal(&q, &c) {
            assert!((d - Complex64::from(-4.0)).norm() < 1e-10, "{d}");
        }
    }

    #[test]
    fn determinant_routes_agree() {
        for (tj, tm) in [
            ([8i64, 10, 12], [2i64, -4, 2]),
            ([5, 7, 8], [1, 1, -2]),
            ([20, 22, 30], [4, -10, 6]),
        ] {
            let c = cfg(tj, tm);
            let (q, spinors) = stationary_coords(&c);
            let report = hessian_report(&spinors, &c).unwrap();
            let rel = |a: Complex64, b: Complex64| (a - b).norm() / a.norm().max(b.norm());
            assert!(
                rel(report.det_eliminated(), report.det_symmetric) < 1e-9,
                "{c} direct vs symmetric"
            );
            let closed_as_det = report.closed_form / report.jacobian;
            assert!(rel(report.det_eliminated(), closed_as_det) < 1e-9, "{c} direct vs closed");

            // stationarity identities for the bracket factors
            let [g1, g2, g3, g4] = symmetric_form_factors(&q, &c).unwrap();
            let (j, m, _) = super::quantum_numbers(&c);
            assert!((g2 - Complex64::from(-(j[1] - m[1]))).norm() < 1e-9);
            assert!((g3 - Complex64::from(j[0] - m[0])).norm() < 1e-9);
            let z = q.z();
            assert!((g1 - (j[0] + m[0]) * z[1] / z[0]).norm() < 1e-9);
            assert!((g4 + (j[1] + m[1]) * z[0] / z[1]).norm() < 1e-9);

            // det H = +4 i g Delta_z at stationarity
            let d23 = z[1] - z[2];
            let d31 = z[2] - z[0];
            let d12 = z[0] - z[1];
            let g = 4096.0 * z[0] * z[1] * z[2] / (d12 * d23 * d31);
            let (v1, _) = hopf_project(&spinors.s[0]);
            let (v2, _) = hopf_project(&spinors.s[1]);
            let dz = projected_area_delta_z(&v1, &v2);
            let expected = Complex64::i() * 4.0 * g * dz;
            assert!(rel(report.det_eliminated(), expected) < 1e-9, "{c} det vs 4 i g dz");
        }
    }

    #[test]
    fn branch_relation_and_equilateral_value() {
        let c = cfg([4, 4, 4], [0, 0, 0]);
        let p = stationary_point(c.j_f64(), c.m_f64(), Branch::P).unwrap();
        let pp = stationary_point(c.j_f64(), c.m_f64(), Branch::PPrime).unwrap();
        let hp = hessian_closed_form(&p.spinors).unwrap();
        let hpp = hessian_closed_form(&pp.spinors).unwrap();
        assert!((hp.conj() - hpp).norm() < 1e-10 * hp.norm());

        // hand value: det H = +4^6 * 4/3, Jacobian 1/64
        assert_relative_eq!(hp.re, 4096.0 * 4.0 / 3.0 / 64.0, max_relative = 1e-12);
        assert!(hp.im.abs() < 1e-12);
    }
}
