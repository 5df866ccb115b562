mod common;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;

use frobfix::abgroup::{cokernel, kernel, localize, snf, FgAbGroup, GroupHom, IntMatrix, LocalizedGroup, PrimeSet};
use frobfix::curves::{point_group, EllipticCurveSpec};
use frobfix::field::FqField;
use frobfix::fixpoint::{fixed_points, Endo};
use frobfix::thh::hkr_thh;

use common::{
    binomial, brute_force, count_points_prime_field, determinantal_divisors, kernel_profile, profile_of_orders,
    quotient_profile, FiniteGroup,
};

fn int_matrix(m: &[Vec<i128>]) -> IntMatrix {
    let cols = m.first().map_or(0, |r| r.len());
    let rows: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    IntMatrix::from_rows(cols, &rows)
}

fn matrix() -> impl Strategy<Value = Vec<Vec<i128>>> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-9i128..=9, c), r))
}

/// A finite group of order ≤ 1000 in invariant-factor form plus a raw seed
/// matrix, turned into a well-defined endomorphism.
fn finite_endo() -> impl Strategy<Value = (FgAbGroup, Vec<Vec<i64>>)> {
    prop::collection::vec(1u64..=12, 1..=3)
        .prop_filter("order at most 1000", |o| o.iter().product::<u64>() <= 1000)
        .prop_flat_map(|orders| {
            let g = FgAbGroup::from_orders(0, &orders.iter().map(|&n| BigInt::from(n)).collect::<Vec<_>>());
            let k = g.generator_count();
            (Just(g), prop::collection::vec(prop::collection::vec(0i64..1000, k), k))
        })
        .prop_map(|(g, seed)| {
            let d: Vec<i64> = g.invariant_factors().iter().map(|x| x.to_i64().unwrap()).collect();
            let m = (0..d.len())
                .map(|i| (0..d.len()).map(|j| (seed[i][j] % d[i]) * (d[i] / d[i].gcd(&d[j]))).collect())
                .collect();
            (g, m)
        })
}

fn group() -> impl Strategy<Value = FgAbGroup> {
    (0usize..=2, prop::collection::vec(0u64..=60, 0..=3))
        .prop_map(|(r, o)| FgAbGroup::from_orders(r, &o.into_iter().map(BigInt::from).collect::<Vec<_>>()))
}

fn primes() -> impl Strategy<Value = PrimeSet> {
    prop_oneof![
        Just(PrimeSet::none()),
        Just(PrimeSet::single(2)),
        Just(PrimeSet::single(3)),
        Just(PrimeSet::single(5)),
        Just(PrimeSet::local_at(2)),
        Just(PrimeSet::local_at(3)),
    ]
}

fn as_u64(v: &[BigInt]) -> Vec<u64> {
    v.iter().map(|x| x.to_u64().unwrap()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn smith_form_is_a_unimodular_diagonalization(a in matrix()) {
        let m = int_matrix(&a);
        let s = snf::smith(&m);
        prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.d.clone());
        prop_assert!(s.d.is_diagonal());
        prop_assert!(s.u.determinant().abs().is_one());
        prop_assert!(s.v.determinant().abs().is_one());
        prop_assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(m.cols()));
        let diag = s.diagonal();
        prop_assert_eq!(diag.len(), s.rank);
        prop_assert!(diag.iter().all(|d| d.is_positive()));
        prop_assert!(diag.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
        let dd = determinantal_divisors(&a);
        let mut prod = BigInt::one();
        for (k, d) in dd.iter().enumerate() {
            prod *= s.d[(k, k)].abs();
            prop_assert_eq!(&prod, &BigInt::from(*d));
        }
    }

    #[test]
    fn kernel_and_cokernel_match_enumeration((g, m) in finite_endo()) {
        let fg = FiniteGroup::new(as_u64(g.invariant_factors()));
        let exp = g.exponent().to_u64().unwrap();
        let rows: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        let f = GroupHom::between(&g, &g, int_matrix(&rows)).unwrap();
        let brute = brute_force(&fg, &m);
        let (k, inclusion) = kernel(&f).unwrap();
        let c = cokernel(&f).unwrap();
        prop_assert_eq!(profile_of_orders(&as_u64(k.invariant_factors()), exp), kernel_profile(&fg, &brute.ker, exp));
        prop_assert_eq!(profile_of_orders(&as_u64(c.group.invariant_factors()), exp), quotient_profile(&fg, &brute.image, exp));
        // The inclusion lands in the kernel and the projection kills the image.
        prop_assert!(f.compose(&inclusion).unwrap().is_zero_map());
        prop_assert!(c.projection.compose(&f).unwrap().is_zero_map());
    }

    #[test]
    fn fixed_points_of_finite_groups_balance((g, m) in finite_endo()) {
        let rows: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        let e = Endo::new(LocalizedGroup::from(g.clone()), int_matrix(&rows)).unwrap();
        let fp = fixed_points(&e).unwrap();
        prop_assert_eq!(fp.h0.order(), fp.h1.order());
        // Fixed elements by enumeration: x with φ(x) = x.
        let fg = FiniteGroup::new(as_u64(g.invariant_factors()));
        let fixed = fg.elements().into_iter().filter(|x| fg.apply(&m, x) == *x).count();
        prop_assert_eq!(fp.h0.order().unwrap(), BigInt::from(fixed));
    }

    #[test]
    fn localization_is_idempotent_and_additive(a in group(), b in group(), s in primes(), t in primes()) {
        let la = localize(&a, &s);
        prop_assert_eq!(la.localize(&s), la.clone());
        prop_assert_eq!(localize(&a.direct_sum(&b), &s), la.direct_sum(&localize(&b, &s)));
        prop_assert_eq!(la.localize(&t), localize(&a, &s.union(&t)));
        prop_assert_eq!(la.free_rank(), a.free_rank());
        let want: BigInt = a.invariant_factors().iter().map(|d| s.surviving_part(d)).product();
        prop_assert_eq!(la.torsion().order().unwrap(), want);
    }

    #[test]
    fn multiplication_fixed_points_are_cyclic_quotients(n in 2u64..200, c in -20i64..20) {
        // On Z/n, ker and coker of 1 − c are both Z/gcd(n, 1 − c).
        let g = LocalizedGroup::from(FgAbGroup::cyclic(n));
        let fp = fixed_points(&Endo::mult(g, c)).unwrap();
        let want = FgAbGroup::cyclic(BigInt::from(n).gcd(&BigInt::from(1 - c)));
        prop_assert_eq!(fp.h0.underlying(), &want);
        prop_assert_eq!(fp.h1.underlying(), &want);
    }

    #[test]
    fn field_frobenius_is_a_ring_automorphism(pm in prop_oneof![Just((2u64, 4u32)), Just((3, 3)), Just((5, 2)), Just((7, 2))], a in 0u32..10_000, b in 0u32..10_000) {
        let f = FqField::new(pm.0, pm.1).unwrap();
        let q = f.order() as u32;
        let (a, b) = (a % q, b % q);
        prop_assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
        prop_assert_eq!(f.frobenius(f.mul(a, b)), f.mul(f.frobenius(a), f.frobenius(b)));
        prop_assert_eq!(f.frobenius_inv(f.frobenius(a)), a);
        prop_assert_eq!(f.pow(a, f.order()), a);
    }

    #[test]
    fn point_counts_match_brute_force(p in prop_oneof![Just(2u64), Just(3), Just(5), Just(7), Just(11)], a in prop::array::uniform5(0i64..11)) {
        let a = a.map(|x| x % p as i64);
        if let Ok(e) = EllipticCurveSpec::new(p, a) {
            let g = point_group(&e, 1).unwrap();
            prop_assert_eq!(g.len() as u64, count_points_prime_field(p, a));
            prop_assert!(g.hasse_bound_holds());
            prop_assert_eq!(g.group().order().unwrap(), BigInt::from(g.len()));
        }
    }

    #[test]
    fn hkr_dimension_is_a_binomial_sum(d in 1usize..=3, n in 0usize..=6, bound in 0u32..=6) {
        let want: usize = (0..=n / 2).map(|i| binomial(d, n - 2 * i) * binomial(bound as usize + d, d)).sum();
        prop_assert_eq!(hkr_thh(d, n, bound, 3).unwrap().dim(), want);
    }
}
