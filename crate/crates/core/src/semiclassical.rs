//! Semiclassical evaluation: phase functions, the closed-form asymptotic
//! phase `S`, the projected area `Delta_z`, and the asymptotic formula
//! `cos(S + pi/4) / sqrt(2 pi |Delta_z|)`.
//!
//! Two length conventions are supported. `HalfShiftEverywhere` (the default)
//! builds the geometry from lengths `j_r + 1/2`; `PaperLiteral` keeps the
//! quantum lengths `j_r`. In both, the outer coefficients of `S` are
//! `J_r = j_r + 1/2`, which is where the standard half-integer shift of the
//! semiclassical phase lives. The classification gate is always run at the
//! quantum lengths, so "forbidden" means classically forbidden for the
//! quantum vectors.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exact::normalization;
use crate::geometry::{
    classify_configuration_full_with, interior_angles_with, reference_spinors,
    stationary_point_with, tilt_angle_beta, twist_angle_gamma_with, Branch, ConfigClass,
    SpinorTriple, StationaryPoint, Tolerances, Vec3,
};
use crate::halfint::JmConfig;

/// Which vector lengths feed the stationary geometry (angles, beta, gamma,
/// and `Delta_z`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Convention {
    /// Lengths `j_r + 1/2` everywhere; empirically the more accurate choice.
    #[default]
    HalfShiftEverywhere,
    /// Quantum lengths `j_r` in the geometry and in `Delta_z`.
    PaperLiteral,
}

impl Convention {
    pub fn lengths(self, j: [f64; 3]) -> [f64; 3] {
        match self {
            Convention::HalfShiftEverywhere => j.map(|x| x + 0.5),
            Convention::PaperLiteral => j,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Convention::HalfShiftEverywhere => "half-shift",
            Convention::PaperLiteral => "paper-literal",
        }
    }
}

/// How to resolve the undetermined overall sign of the asymptotic formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SignConvention {
    /// Report `+cos(S + pi/4) / sqrt(2 pi |Delta_z|)`; the sign is
    /// undetermined by the derivation and left positive.
    #[default]
    Plus,
    /// Flip the sign unconditionally.
    Minus,
    /// Heuristic parity `(-1)^(j1 - j2 - m3)`; matches some tabulations, not
    /// guaranteed.
    PonzanoRegge,
}

impl SignConvention {
    fn factor(self, c: &JmConfig) -> f64 {
        match self {
            SignConvention::Plus => 1.0,
            SignConvention::Minus => -1.0,
            SignConvention::PonzanoRegge => {
                let [tj1, tj2, _] = c.twice_j();
                let tm3 = c.twice_m()[2];
                if ((tj1 - tj2 - tm3) / 2).rem_euclid(2) == 0 {
                    1.0
                } else {
                    -1.0
                }
            }
        }
    }
}

/// Phase-function values at a stationary point.
///
/// `f` and `f1` use principal-branch logarithms throughout. `s` is the
/// asymptotic phase `Im f1` with the determinant logarithms taken on the
/// branch fixed by the reference orientation, where those terms vanish; with
/// plain principal branches `Im f1` would differ from `s` by odd multiples
/// of `(k_i + 1/2) pi` coming from the signs of the (rotation-invariant)
/// determinants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseEval {
    pub f: Complex64,
    pub f1: Complex64,
    /// `Im f1` on the reference branch; equals the closed-form `S` at branch P.
    pub s: f64,
    pub re_f: f64,
}

/// Asymptotic value and everything that went into it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticResult {
    /// Closed-form phase (un-reduced; reduce with [`wrap_angle`] for display).
    pub s: f64,
    /// Projected area of the momentum triangle on the xy-plane, at branch P.
    pub delta_z: f64,
    /// `1 / sqrt(2 pi |delta_z|)`.
    pub amplitude: f64,
    /// `sign * cos(s + pi/4) * amplitude`.
    pub value: f64,
    pub convention: Convention,
    pub sign_convention: SignConvention,
    /// `Im f1` on the reference branch at `p` and at `p'`.
    pub branch_data: [f64; 2],
    /// Even column permutation the geometry was built with.
    pub permutation: [usize; 3],
}

/// Wrap an angle into `(-pi, pi]` for reporting.
pub fn wrap_angle(x: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut r = x.rem_euclid(two_pi);
    if r > std::f64::consts::PI {
        r -= two_pi;
    }
    r
}

/// Distance between two angles mod 2 pi.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    wrap_angle(a - b).abs()
}

fn phase_coefficients(c: &JmConfig, shifted: bool) -> ([f64; 3], [f64; 3], [f64; 3]) {
    let shift = if shifted { 0.5 } else { 0.0 };
    let j = c.j_f64();
    let m = c.m_f64();
    let a = [j[0] + m[0] + shift, j[1] + m[1] + shift, j[2] + m[2] + shift];
    let b = [j[0] - m[0] + shift, j[1] - m[1] + shift, j[2] - m[2] + shift];
    let k = [
        j[1] + j[2] - j[0] + shift,
        j[2] + j[0] - j[1] + shift,
        j[0] + j[1] - j[2] + shift,
    ];
    (a, b, k)
}

/// The phase function
///
/// ```text
/// f  = sum_r [ (j_r+m_r) ln conj(z_r1) + (j_r-m_r) ln conj(z_r2) ]
///    + sum_i k_i ln delta_i - sum |z|^2
/// ```
///
/// (`shifted` adds 1/2 to every exponent, giving `f1`). Principal-branch
/// logarithms; `LogSingularity` when any component or determinant is tiny.
pub fn phase_function_f(spinors: &SpinorTriple, c: &JmConfig, shifted: bool) -> Result<Complex64> {
    phase_function_with_branch(spinors, c, shifted, None)
}

/// Same as [`phase_function_f`] but with the three determinant logarithms
/// taken relative to reference values: `ln delta_i = ln|delta_i/ref_i| +
/// ln|ref_i| + i arg(delta_i / ref_i)`. Passing the determinants of the
/// reference spinors keeps `Im f` continuous near a constructed stationary
/// point, where the relative arguments vanish.
pub fn phase_function_with_branch(
    spinors: &SpinorTriple,
    c: &JmConfig,
    shifted: bool,
    delta_branch: Option<&[Complex64; 3]>,
) -> Result<Complex64> {
    let (a, b, k) = phase_coefficients(c, shifted);
    let comps = spinors.components();
    let deltas = spinors.deltas();
    let eps = crate::geometry::LOG_EPS;
    if comps.iter().any(|z| z.norm() < eps) || deltas.iter().any(|d| d.norm() < eps) {
        return Err(Error::LogSingularity);
    }
    let mut f = Complex64::new(0.0, 0.0);
    let mut norm2 = 0.0;
    for r in 0..3 {
        f += a[r] * comps[2 * r].conj().ln();
        f += b[r] * comps[2 * r + 1].conj().ln();
        norm2 += comps[2 * r].norm_sqr() + comps[2 * r + 1].norm_sqr();
    }
    for i in 0..3 {
        let term = match delta_branch {
            None => deltas[i].ln(),
            Some(refs) => {
                Complex64::new(deltas[i].norm().ln(), (deltas[i] / refs[i]).arg())
            }
        };
        f += k[i] * term;
    }
    f -= norm2;
    Ok(f)
}

/// `Im f1` on the reference branch: spinor arguments principal, determinant
/// arguments measured relative to the reference-orientation determinants (so
/// they vanish at constructed stationary points).
pub fn im_f1_reference_branch(st: &StationaryPoint, c: &JmConfig) -> Result<f64> {
    let (a, b, k) = phase_coefficients(c, true);
    let comps = st.spinors.components();
    let eps = crate::geometry::LOG_EPS;
    if comps.iter().any(|z| z.norm() < eps) {
        return Err(Error::LogSingularity);
    }
    let refs = reference_spinors(st.lengths, &st.angles).deltas();
    let deltas = st.spinors.deltas();
    if refs.iter().any(|d| d.norm() < eps) || deltas.iter().any(|d| d.norm() < eps) {
        return Err(Error::LogSingularity);
    }
    let mut s = 0.0;
    for r in 0..3 {
        s += a[r] * (-comps[2 * r].arg());
        s += b[r] * (-comps[2 * r + 1].arg());
    }
    for i in 0..3 {
        s += k[i] * (deltas[i] / refs[i]).arg();
    }
    Ok(s)
}

/// Projected area `Delta_z = (J1x J2y - J2x J1y) / 2`.
pub fn projected_area_delta_z(v1: &Vec3, v2: &Vec3) -> f64 {
    0.5 * (v1.x * v2.y - v2.x * v1.y)
}

/// Everything the asymptotic evaluation shares: quantum classification,
/// permutation, geometry at the convention lengths, both branches.
pub(crate) struct Pipeline {
    pub permuted: JmConfig,
    pub permutation: [usize; 3],
    pub lengths: [f64; 3],
    pub m: [f64; 3],
    pub p: StationaryPoint,
    pub p_prime: StationaryPoint,
}

pub(crate) fn prepare(c: &JmConfig, convention: Convention, tol: &Tolerances) -> Result<Pipeline> {
    let (class, permutation) = classify_configuration_full_with(c, tol)?;
    match class {
        ConfigClass::Allowed => {}
        ConfigClass::Forbidden => return Err(Error::ClassicallyForbidden),
        ConfigClass::Caustic => return Err(Error::Caustic),
        ConfigClass::PolarDegenerate => return Err(Error::PolarDegenerate),
    }
    let permuted = c.permuted(permutation);
    let lengths = convention.lengths(permuted.j_f64());
    let m = permuted.m_f64();
    let p = stationary_point_with(lengths, m, Branch::P, tol)?;
    let p_prime = stationary_point_with(lengths, m, Branch::PPrime, tol)?;
    Ok(Pipeline { permuted, permutation, lengths, m, p, p_prime })
}

/// Closed-form asymptotic phase for explicit lengths:
///
/// ```text
/// S = J1 acos[(L1 cb - m1 c2)/(s2 L1p)] + J2 acos[(m2 c1 - L2 cb)/(s1 L2p)]
///   + J3 gamma + m1 acos[(L1 c2 - m1 cb)/(sb L1p)]
///   - m2 acos[(L2 c1 - m2 cb)/(sb L2p)]
/// ```
///
/// with `L_rp = sqrt(L_r^2 - m_r^2)`, angles from the `L` triangle, and the
/// outer coefficients `J_r` supplied by the caller (`j_r + 1/2`).
pub(crate) fn s_closed_form_lengths(
    lengths: [f64; 3],
    m: [f64; 3],
    coeff_j: [f64; 3],
    tol: &Tolerances,
) -> Result<f64> {
    let angles = interior_angles_with(lengths, tol)?;
    let beta = tilt_angle_beta(lengths[2], m[2])?;
    let gamma = twist_angle_gamma_with(lengths[0], m[0], beta, angles.eta2, tol)?;
    let (cb, sb) = (beta.cos(), beta.sin());
    let (c1, s1) = (angles.eta1.cos(), angles.eta1.sin());
    let (c2, s2) = (angles.eta2.cos(), angles.eta2.sin());
    let perp = |r: usize| (lengths[r] * lengths[r] - m[r] * m[r]).sqrt();
    let l1p = perp(0);
    let l2p = perp(1);
    if l1p <= tol.caustic || l2p <= tol.caustic || sb <= tol.caustic {
        return Err(Error::PolarSingularity);
    }
    let acos_clamped = |x: f64| -> Result<f64> {
        if x.abs() > 1.0 + tol.fuzz {
            return Err(Error::ClassicallyForbidden);
        }
        Ok(x.clamp(-1.0, 1.0).acos())
    };
    let a1 = acos_clamped((lengths[0] * cb - m[0] * c2) / (s2 * l1p))?;
    let a2 = acos_clamped((m[1] * c1 - lengths[1] * cb) / (s1 * l2p))?;
    let b1 = acos_clamped((lengths[0] * c2 - m[0] * cb) / (sb * l1p))?;
    let b2 = acos_clamped((lengths[1] * c1 - m[1] * cb) / (sb * l2p))?;
    Ok(coeff_j[0] * a1 + coeff_j[1] * a2 + coeff_j[2] * gamma + m[0] * b1 - m[1] * b2)
}

/// Closed-form phase `S` for a quantum configuration under a convention.
///
/// Geometry (angles, tilt, twist, perpendicular lengths) comes from the
/// convention lengths; the outer multipliers are always `J_r = j_r + 1/2`.
pub fn phase_s_closed_form(c: &JmConfig, convention: Convention) -> Result<f64> {
    let tol = Tolerances::default();
    let pipe = prepare(c, convention, &tol)?;
    let coeff_j = pipe.permuted.j_f64().map(|x| x + 0.5);
    s_closed_form_lengths(pipe.lengths, pipe.m, coeff_j, &tol)
}

/// Evaluate `f`, `f1`, `S`, and `Re f` at a constructed stationary point.
pub fn evaluate_phases(st: &StationaryPoint, c: &JmConfig) -> Result<PhaseEval> {
    let f = phase_function_f(&st.spinors, c, false)?;
    let f1 = phase_function_f(&st.spinors, c, true)?;
    let s = im_f1_reference_branch(st, c)?;
    Ok(PhaseEval { f, f1, s, re_f: f.re })
}

/// Asymptotic 3j evaluation.
///
/// Errors: `InvalidConfig` (selection rules), `ClassicallyForbidden`,
/// `Caustic` (degenerate triangle or `|Delta_z|` below threshold), or
/// `PolarDegenerate`, all decided at the quantum lengths before the
/// convention geometry is built.
pub fn asymptotic_3j(
    c: &JmConfig,
    convention: Convention,
    sign: SignConvention,
) -> Result<AsymptoticResult> {
    asymptotic_3j_with(c, convention, sign, &Tolerances::default())
}

pub fn asymptotic_3j_with(
    c: &JmConfig,
    convention: Convention,
    sign: SignConvention,
    tol: &Tolerances,
) -> Result<AsymptoticResult> {
    let pipe = prepare(c, convention, tol)?;
    let coeff_j = pipe.permuted.j_f64().map(|x| x + 0.5);
    let s = s_closed_form_lengths(pipe.lengths, pipe.m, coeff_j, tol)?;
    let delta_z = projected_area_delta_z(&pipe.p.vectors[0], &pipe.p.vectors[1]);
    let area_scale = (pipe.lengths[0] * pipe.lengths[1]).max(1.0);
    if delta_z.abs() <= tol.caustic * area_scale {
        return Err(Error::Caustic);
    }
    let amplitude = 1.0 / (2.0 * std::f64::consts::PI * delta_z.abs()).sqrt();
    let value = sign.factor(c) * (s + std::f64::consts::FRAC_PI_4).cos() * amplitude;
    let branch_data = [
        im_f1_reference_branch(&pipe.p, &pipe.permuted)?,
        im_f1_reference_branch(&pipe.p_prime, &pipe.permuted)?,
    ];
    Ok(AsymptoticResult {
        s,
        delta_z,
        amplitude,
        value,
        convention,
        sign_convention: sign,
        branch_data,
        permutation: pipe.permutation,
    })
}

/// Stirling prefactor ratio `(2 pi)^8 N e^{Re f1(p)} / 2^6 * sqrt(2 pi)`.
///
/// `N` is the exact normalization constant and `Re f1` is evaluated at the
/// half-shifted stationary point, where the half-integer offsets make the
/// factorial cancellation sharp: the ratio tends to 1 with an `O(1/j)`
/// deviation. Computed in log space so large configurations do not overflow.
pub fn prefactor_check(c: &JmConfig) -> Result<f64> {
    let tol = Tolerances::default();
    let tj = c.twice_j();
    let tm = c.twice_m();
    if (0..3).any(|r| tj[r] + tm[r] <= 0 || tj[r] - tm[r] <= 0) {
        return Err(Error::OutOfRange);
    }
    let pipe = prepare(c, Convention::HalfShiftEverywhere, &tol)?;
    let n = normalization(&pipe.permuted)?;
    let f1 = phase_function_f(&pipe.p.spinors, &pipe.permuted, true)?;
    let two_pi = 2.0 * std::f64::consts::PI;
    let ln_ratio = 8.5 * two_pi.ln() - 6.0 * 2f64.ln() + n.ln() + f1.re;
    Ok(ln_ratio.exp())
}
