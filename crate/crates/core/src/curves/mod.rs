//! Weight-one computations over finite fields: elliptic curve point groups
//! with Frobenius and Verschiebung, units and Picard groups with the partial
//! Frobenius, and comparisons of their fixed points along field towers.

mod isogeny;
mod points;
mod spec;
mod twisted;
mod weierstrass;
mod weight1;

pub use isogeny::{
    degree_form, isogeny_degree_form, odd_power_sharpness, point_count_from_trace, trace_of_frobenius, verschiebung_checks,
    LevelCheck, OddPowerWitness, VerschiebungReport,
};
pub use points::{hasse_interval, point_group, PointGroup, PointGroupSummary};
pub use spec::{builtin_corpus, find_curve, load_corpus, parse_corpus, EllipticCurveSpec};
pub use twisted::{cycle_lengths, perm_twisted_fixed_points, PermTwistedReport, TwistedLevel};
pub use weierstrass::{Point, WeierstrassCurve};
pub use weight1::{
    pic_group, point_independence_check, rigidity_compare, units_class_death, units_group, units_transition,
    weight1_frobenius_cohomology, BasisUnit, ClassCertificate, ClassKind, EvaluationClass, LevelGroup, P1Point,
    PartialFrobenius, PicDescription, PointIndependenceReport, RigidityReport, SummandFixedPoints, SummandRigidity,
    UnitsDescription, Variety, WeightOneLevel, Witness, UNITS_SEARCH_FACTOR,
};

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use num_bigint::BigInt;

    use super::*;
    use crate::abgroup::{FgAbGroup, PrimeSet};
    use crate::field::FqField;

    fn curve(p: u64, a: [i64; 5]) -> EllipticCurveSpec {
        EllipticCurveSpec::new(p, a).unwrap()
    }

    fn cyc(n: i64) -> FgAbGroup {
        FgAbGroup::cyclic(n)
    }

    #[test]
    fn supersingular_over_f2() {
        let e = curve(2, [0, 0, 1, 0, 0]);
        let g = point_group(&e, 1).unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(g.group(), &cyc(3));
        assert_eq!(trace_of_frobenius(&e).unwrap(), 0);
    }

    #[test]
    fn singular_curves_are_rejected() {
        assert!(EllipticCurveSpec::new(5, [0, 0, 0, 0, 0]).is_err());
        assert!(EllipticCurveSpec::new(3, [0, 0, 0, 0, 1]).is_err());
        assert!(EllipticCurveSpec::new(2, [0, 0, 0, 1, 1]).is_err());
    }

    #[test]
    fn corpus_loads() {
        let c = builtin_corpus();
        assert!(c.len() >= 10);
        for p in [2, 3, 5, 7] {
            assert!(c.iter().any(|e| e.p == p));
        }
        assert_eq!(find_curve(&c, "E2").unwrap().p, 5);
        let json = r#"[{"p": 5, "a4": 1}]"#;
        assert_eq!(parse_corpus(json, true).unwrap()[0].a4, 1);
        assert!(parse_corpus("[[curve]]\np = 5\n", false).is_err());
    }

    #[test]
    fn point_groups_match_brute_force() {
        for e in builtin_corpus() {
            for k in 1..=2 {
                let g = point_group(&e, k).unwrap();
                let f = g.field().clone();
                let c = g.curve();
                let brute = 1 + f.elements().flat_map(|x| f.elements().map(move |y| (x, y))).filter(|&(x, y)| c.contains(Point::Affine(x, y))).count();
                assert_eq!(g.len(), brute, "{} level {k}", e.label());
                assert!(g.hasse_bound_holds());
                assert!(g.group().invariant_factors().len() <= 2);
                assert_eq!(g.group().order().unwrap(), BigInt::from(g.len()));
                // Closure under addition on a sample.
                for &a in g.points().iter().step_by(3) {
                    for &b in g.points().iter().step_by(5) {
                        assert!(c.contains(g.add(a, b)));
                    }
                }
            }
        }
    }

    #[test]
    fn counts_follow_the_trace_recurrence() {
        for e in builtin_corpus() {
            let a = trace_of_frobenius(&e).unwrap();
            assert!(a * a <= 4 * e.p as i64);
            for k in 1..=3 {
                assert_eq!(point_group(&e, k).unwrap().len() as i128, point_count_from_trace(a, e.p, k));
            }
        }
    }

    #[test]
    fn frobenius_and_verschiebung() {
        let e = curve(5, [0, 0, 0, 1, 0]);
        let r = verschiebung_checks(&e, &[1, 2, 3], 5).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.deg_p_minus_v, 5 * 4);
        let g = point_group(&e, 1).unwrap();
        for &pt in g.points() {
            assert_eq!(g.frobenius(pt), pt);
            assert_eq!(g.verschiebung(pt), g.mul(5, pt));
        }
    }

    #[test]
    fn ordinary_curve_has_rational_kernel_somewhere() {
        // y² + xy = x³ + 1 over F_2 is ordinary; ker(2 − V) = 2·|E(F_2)| becomes rational.
        let e = curve(2, [1, 0, 0, 0, 1]);
        assert_ne!(trace_of_frobenius(&e).unwrap() % 2, 0);
        let r = verschiebung_checks(&e, &[1, 2, 3, 4], 3).unwrap();
        assert!(r.passed);
        assert!(!r.rational_levels.is_empty(), "{r:?}");
    }

    #[test]
    fn degree_form_values() {
        let e = curve(7, [0, 0, 0, 1, 0]);
        assert_eq!(isogeny_degree_form(&e, 0, 1).unwrap(), 1);
        assert_eq!(isogeny_degree_form(&e, 1, 0).unwrap(), 7);
        assert!(isogeny_degree_form(&e, 0, 0).is_err());
    }

    #[test]
    fn odd_power_witnesses() {
        for p in [2, 3] {
            let w = odd_power_sharpness(p).unwrap();
            assert_eq!(w.trace.abs(), 2 * p as i64);
            assert_eq!(w.degree, 0);
            assert!(w.frobenius_is_scalar && w.kernel_is_everything);
        }
    }

    #[test]
    fn units_examples() {
        let f4 = FqField::new(2, 2).unwrap();
        let u = units_group(&Variety::Point, 2, &[P1Point::Finite(0), P1Point::Infinity], 2).unwrap();
        assert_eq!(u.group, cyc(3).direct_sum(&FgAbGroup::free(1)));
        let u = units_group(&Variety::Point, 3, &[P1Point::Finite(0), P1Point::Finite(1), P1Point::Infinity], 2).unwrap();
        assert_eq!(u.group, cyc(8).direct_sum(&FgAbGroup::free(2)));
        assert_eq!(u.frobenius.constant_multiplier, 3);
        // Coefficient Frobenius fixes t and t − 1.
        let m = u.frobenius.map.matrix();
        assert_eq!(m[(1, 1)], BigInt::from(1));
        assert_eq!(m[(2, 2)], BigInt::from(1));
        // A Frobenius orbit {α, α²} of F_4 gets permuted.
        let a = f4.generator();
        let u = units_group(&Variety::ProjLine, 2, &[P1Point::Finite(a), P1Point::Finite(f4.mul(a, a)), P1Point::Infinity], 2).unwrap();
        assert_eq!(u.frobenius.divisor_permutation, vec![0, 2, 1]);
        assert!(units_group(&Variety::Point, 2, &[P1Point::Finite(a)], 2).is_err());
        assert!(units_group(&Variety::Point, 2, &[P1Point::Finite(9)], 2).is_err());
        // Without infinity the lattice is the degree-zero part.
        let u = units_group(&Variety::Point, 5, &[P1Point::Finite(0), P1Point::Finite(1), P1Point::Finite(2)], 1).unwrap();
        assert_eq!(u.lattice_rank(), 2);
    }

    #[test]
    fn pic_examples() {
        let e = curve(5, [0, 0, 0, 1, 0]);
        let x = Variety::Elliptic { curve: e.clone() };
        let pic = pic_group(&x, 5, 1).unwrap();
        assert_eq!(pic.group, cyc(2).direct_sum(&cyc(2)).direct_sum(&FgAbGroup::free(1)));
        assert!(pic.frobenius.same_map(&crate::abgroup::GroupHom::identity(&pic.group.presentation())));
        let pic2 = pic_group(&x, 5, 2).unwrap();
        let (k, _) = crate::abgroup::kernel(&pic2.frobenius.one_minus().unwrap()).unwrap();
        assert_eq!(k, cyc(2).direct_sum(&cyc(2)).direct_sum(&FgAbGroup::free(1)));
        assert_eq!(pic_group(&Variety::ProjLine, 3, 4).unwrap().group, FgAbGroup::free(1));
        assert!(pic_group(&x, 3, 1).is_err());
    }

    #[test]
    fn weight_one_point_is_kummer() {
        for p in [2u64, 3, 5] {
            for m in 1..=3 {
                let w = weight1_frobenius_cohomology(&Variety::Point, p, m, false).unwrap();
                let u = w.summand("units").unwrap();
                assert_eq!(u.fixed.h0.underlying(), &cyc(p as i64 - 1));
                assert_eq!(u.fixed.h1.underlying(), &cyc(p as i64 - 1));
                assert_eq!(w.degrees.degree(1).quot.underlying(), &cyc(p as i64 - 1));
            }
        }
        let w = weight1_frobenius_cohomology(&Variety::ProjLine, 3, 2, true).unwrap();
        let d = w.summand("degree").unwrap();
        assert_eq!((d.fixed.h0.free_rank(), d.fixed.h1.free_rank()), (1, 1));
    }

    #[test]
    fn rigidity_for_point_and_line() {
        let r = rigidity_compare(&Variety::Point, 3, &[1, 2, 3], false).unwrap();
        assert!(r.passed, "{:?}", r.failures);
        let u = r.summand("units").unwrap();
        assert_eq!(u.stable_from, Some(1));
        assert!(u.kernels.iter().all(|k| k.group.underlying() == &cyc(2)));
        let r = rigidity_compare(&Variety::ProjLine, 5, &[1, 2, 3, 4], true).unwrap();
        assert!(r.passed);
        assert!(r.summand("degree").unwrap().coker_constant);
        assert!(rigidity_compare(&Variety::Point, 3, &[2], false).is_err());
    }

    #[test]
    fn rigidity_for_elliptic_curves() {
        for (p, a) in [(3, [0, 0, 0, -1, 0]), (5, [0, 0, 0, 1, 0])] {
            let x = Variety::Elliptic { curve: curve(p, a) };
            let r = rigidity_compare(&x, p, &[1, 2, 3], true).unwrap();
            assert!(r.passed, "{:?}", r.failures);
            let pic0 = r.summand("pic0").unwrap();
            assert_eq!(pic0.stable_from, Some(1));
            assert!(pic0.classes.iter().all(|c| c.dies_at.is_some()));
        }
    }

    #[test]
    fn units_transition_matches_field_embeddings() {
        // The embedded generator is a unit multiple of the model transition.
        for (p, m, m2) in [(2u64, 2u32, 4u32), (2, 3, 6), (3, 1, 2), (3, 2, 4), (5, 1, 3)] {
            let small = FqField::new(p, m).unwrap();
            let big = FqField::new(p, m2).unwrap();
            let e = small.embedding_into(&big).unwrap();
            let img = BigInt::from(big.log(e.apply(small.generator())).unwrap());
            let t = units_transition(p, m, m2).unwrap();
            assert_eq!(&img % &t, BigInt::from(0));
            let u = img / t;
            let n = BigInt::from(small.order() - 1);
            assert!(num_integer::Integer::gcd(&u, &n) == BigInt::from(1));
        }
    }

    #[test]
    fn point_independence_on_p1_minus_three_points() {
        for (p, m) in [(2u64, 2u32), (3, 2)] {
            let f = FqField::new(p, m).unwrap();
            let removed = [P1Point::Finite(0), P1Point::Finite(1), P1Point::Infinity];
            let pts: Vec<_> = f.elements().filter(|&c| c > 1).collect();
            for &c0 in &pts {
                for &c1 in &pts {
                    let r = point_independence_check(&Variety::Point, p, &removed, m, c0, c1).unwrap();
                    assert!(r.passed, "{r:?}");
                }
            }
        }
    }

    #[test]
    fn evaluation_differs_raw_but_agrees_after_fixed_points() {
        let f = FqField::new(3, 2).unwrap();
        let removed = [P1Point::Finite(0), P1Point::Infinity];
        let (c0, c1) = (f.exp(0), f.exp(1));
        let r = point_independence_check(&Variety::Point, 3, &removed, 2, c0, c1).unwrap();
        assert!(r.passed);
        assert!(r.classes.iter().any(|c| !c.raw_equal));
    }

    #[test]
    fn perm_twisted() {
        let r = perm_twisted_fixed_points(&[0], 3, 4).unwrap();
        assert!(r.passed);
        assert!(r.levels.iter().all(|l| l.kernel == cyc(2)));
        let r = perm_twisted_fixed_points(&[1, 0], 3, 4).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.levels[2].kernel, cyc(8));
        assert!(r.integral.is_certified());
        let r = perm_twisted_fixed_points(&[1, 2, 0, 3], 2, 4).unwrap();
        assert!(r.kernels_match_cycles && r.passed);
        assert!(perm_twisted_fixed_points(&[0, 0], 3, 3).is_err());
        let _ = PrimeSet::none();
        let _ = Arc::new(0);
    }
}
