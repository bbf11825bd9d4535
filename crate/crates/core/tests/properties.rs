use num_bigint::BigInt;
use proptest::prelude::*;

use goppa_orbits::arith::{big_pow, divisors, moebius, weighted_moebius_inversion};
use goppa_orbits::pgl::{ActionKernel, SemiLinear};
use goppa_orbits::{Embedding, FieldCtx, IrreducibleSet, Pgl, Poly, PolyRing, ProjMat};

fn elems(m: u32) -> impl Strategy<Value = (u64, u64, u64)> {
    let top = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    (0..=top, 0..=top, 0..=top)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_axioms(m in prop::sample::select(vec![1u32, 2, 5, 8, 13, 16, 17, 31, 45, 63]), seed in any::<u64>()) {
        let ctx = FieldCtx::new(m).unwrap();
        let mask = ctx.size() - 1;
        let (a, b, c) = (seed & mask, seed.rotate_left(21) & mask, seed.rotate_left(42) & mask);
        prop_assert_eq!(ctx.mul(a, ctx.mul(b, c)), ctx.mul(ctx.mul(a, b), c));
        prop_assert_eq!(ctx.mul(a, b), ctx.mul(b, a));
        prop_assert_eq!(ctx.mul(a, ctx.add(b, c)), ctx.add(ctx.mul(a, b), ctx.mul(a, c)));
        prop_assert_eq!(ctx.frobenius(ctx.add(a, b), 1), ctx.add(ctx.sqr(a), ctx.sqr(b)));
        prop_assert_eq!(ctx.frobenius(a, m as u64), a);
        if a != 0 {
            prop_assert_eq!(ctx.mul(a, ctx.inv(a).unwrap()), 1);
            prop_assert_eq!(ctx.pow(a, ctx.mult_order()), 1);
        }
    }

    #[test]
    fn table_and_generic_paths_agree((a, b, _) in elems(12)) {
        let ctx = FieldCtx::new(12).unwrap();
        // the m <= 16 path uses tables; multiplication by repeated doubling is the reference
        let mut acc = 0u64;
        let mut x = a;
        for i in 0..12 {
            if b >> i & 1 == 1 {
                acc ^= x;
            }
            x = ctx.mul(x, 2);
        }
        prop_assert_eq!(ctx.mul(a, b), acc);
    }

    #[test]
    fn embedding_is_a_homomorphism((a, b, _) in elems(5)) {
        let src = FieldCtx::new(5).unwrap();
        let dst = FieldCtx::new(15).unwrap();
        let e = Embedding::new(&src, &dst).unwrap();
        prop_assert_eq!(e.embed(src.mul(a, b)), dst.mul(e.embed(a), e.embed(b)));
        prop_assert_eq!(e.embed(a ^ b), e.embed(a) ^ e.embed(b));
        prop_assert_eq!(e.pull_back(e.embed(a)), Some(a));
    }

    #[test]
    fn division_identity(a in prop::collection::vec(0u64..32, 0..12), b in prop::collection::vec(0u64..32, 1..6)) {
        let ctx = FieldCtx::new(5).unwrap();
        let ring = PolyRing::new(&ctx);
        let (a, b) = (Poly::new(a), Poly::new(b));
        prop_assume!(!b.is_zero());
        let (q, r) = ring.divrem(&a, &b).unwrap();
        prop_assert_eq!(ring.add(&ring.mul(&q, &b), &r), a);
        prop_assert!(r.degree().is_none_or(|d| d < b.degree().unwrap()));
    }

    #[test]
    fn action_is_a_left_action(e in prop::array::uniform8(0u64..32), pick in 0usize..10912) {
        let ctx = FieldCtx::new(5).unwrap();
        let pgl = Pgl::new(&ctx);
        let (Ok(a), Ok(b)) = (pgl.mat(e[0], e[1], e[2], e[3]), pgl.mat(e[4], e[5], e[6], e[7])) else {
            return Ok(());
        };
        let key = IrreducibleSet::sieve(&ctx, 3).keys().nth(pick).unwrap();
        let f = Poly::from_key(key, 5, 3);
        let lhs = pgl.act(&a, &pgl.act(&b, &f, 3).unwrap(), 3).unwrap();
        prop_assert_eq!(&lhs, &pgl.act(&pgl.mul(&a, &b), &f, 3).unwrap());
        prop_assert_eq!(pgl.act(&ProjMat::IDENTITY, &f, 3).unwrap(), f.clone());
        let ring = PolyRing::new(&ctx);
        prop_assert!(ring.is_irreducible(&lhs));
        let kernel = ActionKernel::new(&ctx, 3).unwrap();
        prop_assert_eq!(kernel.apply(&pgl.packed(&kernel, &a), key), pgl.act(&a, &f, 3).unwrap().key(5));
    }

    #[test]
    fn semilinear_twist(e in prop::array::uniform8(0u64..32), i in 0u64..5, j in 0u64..5, pick in 0usize..10912) {
        let ctx = FieldCtx::new(5).unwrap();
        let pgl = Pgl::new(&ctx);
        let (Ok(a), Ok(b)) = (pgl.mat(e[0], e[1], e[2], e[3]), pgl.mat(e[4], e[5], e[6], e[7])) else {
            return Ok(());
        };
        let g = SemiLinear { mat: a, frob: i };
        let h = SemiLinear { mat: b, frob: j };
        let f = Poly::from_key(IrreducibleSet::sieve(&ctx, 3).keys().nth(pick).unwrap(), 5, 3);
        let step = pgl.act_semilinear(&g, &pgl.act_semilinear(&h, &f, 3).unwrap(), 3).unwrap();
        prop_assert_eq!(step, pgl.act_semilinear(&pgl.compose(&g, &h, 5), &f, 3).unwrap());
    }

    #[test]
    fn inversion_round_trip(n in 1u64..400, k in 1u64..4) {
        // F(m) = Σ_{d|m} χ(d) G(m/d), χ(d) = d^k
        let chi = |d: u64| BigInt::from(d).pow(k as u32);
        let g = |m: u64| big_pow(2, m % 17) + BigInt::from(m);
        let f = |m: u64| divisors(m).into_iter().map(|d| chi(d) * g(m / d)).sum::<BigInt>();
        prop_assert_eq!(weighted_moebius_inversion(chi, f, n), g(n));
        prop_assert_eq!(divisors(n).into_iter().map(moebius).sum::<i64>(), (n == 1) as i64);
    }
}
