//! Property tests for the numeric and geometric invariants.

use num_complex::Complex64;
use proptest::prelude::*;

use bargmann3j::geometry::{
    hopf_project, interior_angles, stationary_point, su2_lift, Branch, Spinor,
};
use bargmann3j::halfint::HalfInt;
use bargmann3j::semiclassical::projected_area_delta_z;
use bargmann3j::verify::apply_torus_gauge;

proptest! {
    #[test]
    fn halfint_arithmetic_matches_rationals(a in -2000i64..2000, b in -2000i64..2000) {
        let x = HalfInt::from_twice(a);
        let y = HalfInt::from_twice(b);
        prop_assert_eq!((x + y).to_rational(), x.to_rational() + y.to_rational());
        prop_assert_eq!((x - y).to_rational(), x.to_rational() - y.to_rational());
        prop_assert_eq!((x < y), (x.to_rational() < y.to_rational()));
    }

    #[test]
    fn hopf_norm_identity(re1 in -5.0f64..5.0, im1 in -5.0f64..5.0,
                          re2 in -5.0f64..5.0, im2 in -5.0f64..5.0) {
        let s = Spinor::new(Complex64::new(re1, im1), Complex64::new(re2, im2));
        let (j, i) = hopf_project(&s);
        // |J| = I up to a couple of ulps
        prop_assert!((j.norm() - i).abs() <= 4.0 * f64::EPSILON * i.max(1.0));
    }

    #[test]
    fn hopf_gauge_covariance(re1 in -5.0f64..5.0, im1 in -5.0f64..5.0,
                             re2 in -5.0f64..5.0, im2 in -5.0f64..5.0,
                             phase in -3.14f64..3.14) {
        let s = Spinor::new(Complex64::new(re1, im1), Complex64::new(re2, im2));
        let rotated = s.scaled(Complex64::from_polar(1.0, phase));
        let (j, i) = hopf_project(&s);
        let (jr, ir) = hopf_project(&rotated);
        let scale = i.max(1.0);
        prop_assert!((j.x - jr.x).abs() <= 8.0 * f64::EPSILON * scale);
        prop_assert!((j.y - jr.y).abs() <= 8.0 * f64::EPSILON * scale);
        prop_assert!((j.z - jr.z).abs() <= 8.0 * f64::EPSILON * scale);
        prop_assert!((i - ir).abs() <= 8.0 * f64::EPSILON * scale);
    }

    #[test]
    fn su2_lift_is_special_unitary(beta in 0.0f64..std::f64::consts::PI,
                                   gamma in -std::f64::consts::PI..std::f64::consts::PI) {
        let u = su2_lift(beta, gamma);
        prop_assert!(u.unitarity_defect() < 1e-14);
        prop_assert!((u.det() - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn stationary_vectors_match_hopf_projection(
        tj in prop::array::uniform3(4i64..=200),
        f1 in 0.0f64..1.0, f2 in 0.0f64..1.0,
    ) {
        // force a closing triangle, then sample projections inside the range
        let tj = {
            let mut t = tj;
            t[2] = t[2].clamp((t[0] - t[1]).abs() + 2, t[0] + t[1] - 2).max(2);
            if (t[0] + t[1] + t[2]) % 2 != 0 { t[2] += 1; }
            t
        };
        prop_assume!(t_strict_triangle(tj));
        let lengths = [tj[0] as f64 / 2.0, tj[1] as f64 / 2.0, tj[2] as f64 / 2.0];
        prop_assume!(interior_angles(lengths).is_ok());
        // pick m3 and m1 in the open allowed range via the fractions f1, f2
        let m3 = (2.0 * f1 - 1.0) * 0.9 * lengths[2];
        let beta = (m3 / lengths[2]).acos();
        let angles = interior_angles(lengths).unwrap();
        let lo = lengths[0] * (beta.cos() * angles.eta2.cos()
            - beta.sin() * angles.eta2.sin() * 0.95);
        let hi = lengths[0] * (beta.cos() * angles.eta2.cos()
            + beta.sin() * angles.eta2.sin() * 0.95);
        let m1 = lo + f2 * (hi - lo);
        let m = [m1, -m1 - m3, m3];
        for branch in [Branch::P, Branch::PPrime] {
            if let Ok(p) = stationary_point(lengths, m, branch) {
                for r in 0..3 {
                    let (j, _) = hopf_project(&p.spinors.s[r]);
                    let scale = lengths[r].max(1.0);
                    prop_assert!((j.x - p.vectors[r].x).abs() < 1e-12 * scale);
                    prop_assert!((j.y - p.vectors[r].y).abs() < 1e-12 * scale);
                    prop_assert!((j.z - p.vectors[r].z).abs() < 1e-12 * scale);
                }
                prop_assert!(p.residual() < 1e-12);
            }
        }
    }

    #[test]
    fn torus_action_preserves_stationarity(
        theta in -3.14f64..3.14,
        p1 in -3.14f64..3.14, p2 in -3.14f64..3.14, p3 in -3.14f64..3.14,
    ) {
        let lengths = [4.0, 3.5, 2.5];
        let m = [1.0, -2.0, 1.0];
        let p = stationary_point(lengths, m, Branch::P).unwrap();
        let gauged = apply_torus_gauge(&p.spinors, theta, [p1, p2, p3]);
        let mut moved = p;
        moved.spinors = gauged;
        prop_assert!(moved.residual() < 1e-12);

        let dz = projected_area_delta_z(&p.vectors[0], &p.vectors[1]).abs();
        let (g1, _) = hopf_project(&gauged.s[0]);
        let (g2, _) = hopf_project(&gauged.s[1]);
        let dz2 = projected_area_delta_z(&g1, &g2).abs();
        prop_assert!((dz - dz2).abs() < 1e-12 * dz.max(1.0));
    }
}

fn t_strict_triangle(tj: [i64; 3]) -> bool {
    tj[0] + tj[1] > tj[2] && tj[1] + tj[2] > tj[0] && tj[2] + tj[0] > tj[1]
}
