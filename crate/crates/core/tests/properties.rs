mod common;

use std::collections::BTreeSet;

use facekoszul::characters::{irr_character, mult_in};
use facekoszul::homdims::gldim;
use facekoszul::koszulcheck::{full_report, linear_extension, parse_report, verify_koszul_numerical};
use facekoszul::lp::System;
use facekoszul::poly::{Poly, PolyMatrix};
use facekoszul::weightposet::{dpsi, interval_psi, is_interval_closed, preceq, preceq_psi, LambdaPoint};
use facekoszul::{RootSystem, Weight};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

const TYPES: [(&str, usize); 8] = [("A", 1), ("A", 2), ("A", 3), ("B", 2), ("C", 2), ("G", 2), ("B", 3), ("D", 4)];

fn weight_in(rank: usize, bound: i64) -> impl Strategy<Value = Weight> {
    prop::collection::vec(-bound..=bound, rank).prop_map(Weight::new)
}

fn typed_weights() -> impl Strategy<Value = (usize, Weight, Weight, usize)> {
    (0..TYPES.len()).prop_flat_map(|t| {
        let rank = TYPES[t].1;
        (Just(t), weight_in(rank, 5), weight_in(rank, 5), 0..rank)
    })
}

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec(-20i64..=20, 0..5)
        .prop_map(|c| Poly::from_coeffs(c.into_iter().map(BigInt::from).collect()))
}

fn fixture_index() -> impl Strategy<Value = usize> {
    0..fixtures().len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn form_is_weyl_invariant((t, a, b, i) in typed_weights()) {
        let rs = RootSystem::of_type(TYPES[t].0, TYPES[t].1).unwrap();
        let (sa, sb) = (rs.simple_reflection(i, &a).unwrap(), rs.simple_reflection(i, &b).unwrap());
        prop_assert_eq!(rs.pairing(&sa, &sb), rs.pairing(&a, &b));
        prop_assert_eq!(rs.simple_reflection(i, &sa).unwrap(), a.clone());
        prop_assert!(rs.dominant_representative(&a).is_dominant());
    }

    #[test]
    fn characters_are_weyl_invariant_with_weyl_dimension(t in 0..6usize, seed in any::<u64>()) {
        let (letter, rank) = TYPES[t];
        let rs = RootSystem::of_type(letter, rank).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lam = random_dominant(&mut rng, rank, 3);
        let ch = irr_character(&rs, &lam).unwrap();
        prop_assert!(ch.is_weyl_invariant());
        prop_assert_eq!(ch.dimension() as u64, rs.weyl_dim(&lam).unwrap());
        prop_assert_eq!(ch.get(&lam), 1);
    }

    #[test]
    fn tensor_products_multiply_dimensions(t in 0..3usize, seed in any::<u64>()) {
        let (letter, rank) = TYPES[t];
        let rs = RootSystem::of_type(letter, rank).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (l1, l2) = (random_dominant(&mut rng, rank, 2), random_dominant(&mut rng, rank, 2));
        let (a, b) = (irr_character(&rs, &l1).unwrap(), irr_character(&rs, &l2).unwrap());
        let ab = a.tensor(&b).unwrap();
        prop_assert_eq!(&ab, &b.tensor(&a).unwrap());
        prop_assert_eq!(ab.dimension(), a.dimension() * b.dimension());
        prop_assert_eq!(mult_in(&(&l1 + &l2), &ab).unwrap(), 1);
    }

    #[test]
    fn weight_syntax_round_trips(w in weight_in(4, 50), r in -9i64..9) {
        prop_assert_eq!(Weight::parse(&w.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")).unwrap(), w.clone());
        let d = Weight::new(w.coords().iter().map(|c| c.abs()).collect());
        let s = format!("{}@{r}", d.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","));
        prop_assert_eq!(LambdaPoint::parse(&s).unwrap(), LambdaPoint::new(d, r).unwrap());
    }

    #[test]
    fn poly_ring_laws(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(a.negate_variable().negate_variable(), a.clone());
        prop_assert_eq!(&(&a - &b) + &b, a);
    }

    #[test]
    fn matrix_products_agree(entries in prop::collection::vec(poly(), 16), other in prop::collection::vec(poly(), 16)) {
        let m = |e: &[Poly]| PolyMatrix::from_rows(e.chunks(4).map(|r| r.to_vec()).collect());
        let (a, b) = (m(&entries), m(&other));
        prop_assert_eq!(a.mul_row_major(&b), a.mul_column_major(&b));
        prop_assert_eq!(a.mul_row_major(&PolyMatrix::identity(4)), a);
    }

    #[test]
    fn lp_solutions_satisfy_the_system(
        rows in prop::collection::vec((prop::collection::vec(-3i64..=3, 3), -4i64..=4, any::<bool>()), 1..7),
        eq in prop::option::of((prop::collection::vec(-3i64..=3, 3), -4i64..=4)),
    ) {
        let q = |x: i64| BigRational::from_integer(x.into());
        let mut sys = System::new(3);
        for (c, r, strict) in &rows {
            sys.at_most(c.iter().map(|&x| q(x)).collect(), q(*r), *strict);
        }
        if let Some((c, r)) = &eq {
            sys.equal(c.iter().map(|&x| q(x)).collect(), q(*r));
        }
        if let Some(x) = sys.solve() {
            let dot = |c: &[BigRational]| c.iter().zip(&x).fold(BigRational::zero(), |a, (c, x)| a + c * x);
            for i in &sys.inequalities {
                let v = dot(&i.coeffs);
                let ok = if i.strict { v < i.rhs } else { v <= i.rhs };
                prop_assert!(ok);
            }
            for e in &sys.equations {
                prop_assert_eq!(dot(&e.coeffs), e.rhs.clone());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dpsi_is_additive_and_antisymmetric(f in fixture_index(), seed in any::<u64>(), a in 0..4usize, b in 0..4usize) {
        let fx = &fixtures()[f];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = LambdaPoint::new(random_dominant(&mut rng, fx.rank(), 3), 0).unwrap();
        let (q, _) = climb(&mut rng, &fx.face, &p, a);
        let (s, _) = climb(&mut rng, &fx.face, &LambdaPoint { weight: q.clone(), degree: 0 }, b);
        let d = |x: &Weight, y: &Weight| dpsi(&fx.face, x, y).unwrap();
        prop_assert_eq!(d(&p.weight, &s), Some((a + b) as u64));
        prop_assert_eq!(d(&p.weight, &q).zip(d(&q, &s)).map(|(x, y)| x + y), d(&p.weight, &s));
        if a + b > 0 {
            prop_assert_eq!(d(&s, &p.weight), None);
        }
    }

    #[test]
    fn face_order_refines_and_is_antisymmetric(f in fixture_index(), seed in any::<u64>(), depth in 0..4usize) {
        let fx = &fixtures()[f];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (p, q) = random_pair(&mut rng, &fx.face, 3, depth);
        prop_assert!(preceq_psi(&fx.face, &p, &q).unwrap());
        prop_assert!(preceq(fx.ws(), &p, &q));
        prop_assert_eq!(preceq_psi(&fx.face, &q, &p).unwrap(), p == q);
    }

    #[test]
    fn intervals_are_interval_closed(f in fixture_index(), seed in any::<u64>(), depth in 0..4usize) {
        let fx = &fixtures()[f];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (p, q) = random_pair(&mut rng, &fx.face, 3, depth);
        let g = interval_psi(&fx.face, &p, &q).unwrap();
        prop_assert!(g.points().contains(&p) && g.points().contains(&q));
        prop_assert!(is_interval_closed(&fx.face, g.points()).unwrap());
        let ext = linear_extension(&fx.face, g.points());
        for (i, x) in ext.iter().enumerate() {
            for y in &ext[..i] {
                prop_assert!(!preceq_psi(&fx.face, x, y).unwrap());
            }
        }
    }

    #[test]
    fn gldim_is_monotone_and_bounded(f in fixture_index(), seed in any::<u64>(), depth in 1..4usize, cut in 0..4usize) {
        let fx = &fixtures()[f];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (p, q) = random_pair(&mut rng, &fx.face, 3, depth);
        let g = interval_psi(&fx.face, &p, &q).unwrap();
        let points: Vec<&LambdaPoint> = g.points().iter().collect();
        let lo = points[cut % points.len()];
        let above: BTreeSet<LambdaPoint> = points
            .iter()
            .filter(|x| preceq_psi(&fx.face, lo, x).unwrap())
            .map(|x| (*x).clone())
            .collect();
        let sub = interval_psi(&fx.face, lo, &q).unwrap();
        prop_assert_eq!(sub.points(), &above);
        let (big, small) = (gldim(&g).unwrap(), gldim(&sub).unwrap());
        prop_assert!(small <= big);
        prop_assert!(big <= fx.face.n_psi());
    }

    #[test]
    fn koszul_identity_on_random_intervals(f in fixture_index(), seed in any::<u64>(), depth in 0..4usize) {
        let fx = &fixtures()[f];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (p, q) = random_pair(&mut rng, &fx.face, 3, depth);
        let g = interval_psi(&fx.face, &p, &q).unwrap();
        let check = verify_koszul_numerical(&fx.face, &g).unwrap();
        prop_assert!(check.verdict.is_pass());
        prop_assert!(check.b.matrix.is_lower_unitriangular());
        prop_assert!(check.e_neg.matrix.is_lower_unitriangular());
        prop_assert_eq!(&check.product, &check.e_neg.matrix.mul_column_major(&check.b.matrix));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn reports_reparse_and_validate(f in fixture_index(), seed in any::<u64>(), depth in 0..3usize) {
        let fx = &fixtures()[f];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (p, q) = random_pair(&mut rng, &fx.face, 2, depth);
        let g = interval_psi(&fx.face, &p, &q).unwrap();
        let report = full_report(&fx.face, &g, None).unwrap();
        let json = serde_json::to_string(&report).unwrap();
        let back = parse_report(&json).unwrap();
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), json);
    }
}
