use goppa_orbits::census::{self, Census};
use goppa_orbits::oracle::{self, Group, Limits};
use goppa_orbits::pgl::ActionKernel;
use goppa_orbits::{FieldCtx, IrreducibleSet, Pgl};

fn limits() -> Limits {
    Limits::default()
}

#[test]
fn pgl_class_sum_matches_brute_force_on_small_fields() {
    // class sums hold for every q, so the hypotheses are forced here
    for (n, r) in [
        (2u32, 3usize),
        (2, 4),
        (2, 5),
        (2, 6),
        (3, 3),
        (3, 4),
        (3, 5),
        (3, 6),
        (3, 7),
        (4, 3),
        (4, 4),
    ] {
        let terms = census::pgl_orbit_count(n as u64, r as u64).unwrap();
        let part = oracle::enumerate_orbits(Group::Pgl, n, r, &limits()).unwrap();
        assert_eq!(
            terms.pgl_orbits.to_string(),
            part.len().to_string(),
            "n={n} r={r}"
        );
    }
}

#[test]
fn printed_n2_overcounts_where_diagonal_terms_exist() {
    // q = 8, r = 7: 7 | q - 1
    let terms = census::pgl_orbit_count(3, 7).unwrap();
    let part = oracle::enumerate_orbits(Group::Pgl, 3, 7, &limits()).unwrap();
    assert_eq!(terms.pgl_orbits.to_string(), part.len().to_string());
    assert!(!terms.pgl_orbits_printed.is_integer() || terms.pgl_orbits_printed != terms.pgl_orbits);
    // q = 4, r = 3: 3 | q - 1
    let terms = census::pgl_orbit_count(2, 3).unwrap();
    assert_eq!(terms.pgl_orbits.to_string(), "1");
    assert!(!terms.pgl_orbits_printed.is_integer());
}

#[test]
fn census_s_matches_pgammal_oracle() {
    for (n, r) in [(5u32, 3usize), (5, 4), (7, 3)] {
        let rep = Census::new(n as u64)
            .unwrap()
            .report(r as u64, false)
            .unwrap();
        let part = oracle::enumerate_orbits(Group::PGammaL, n, r, &limits()).unwrap();
        assert_eq!(rep.s.to_string(), part.len().to_string(), "n={n} r={r}");
        let pgl = oracle::enumerate_orbits(Group::Pgl, n, r, &limits()).unwrap();
        assert!(oracle::orbit_structure_violations(&pgl, &part).is_empty());
        let table = oracle::classify_x(n, r).unwrap();
        let sigma = oracle::sigma_fixed_orbit_count(&table, Some(&pgl)).unwrap();
        assert_eq!(rep.s0.to_string(), sigma.blocks.to_string());
    }
}

#[test]
fn pgammal_orbits_are_unions_of_pgl_orbits() {
    let pgl = oracle::enumerate_orbits(Group::Pgl, 5, 4, &limits()).unwrap();
    let pgammal = oracle::enumerate_orbits(Group::PGammaL, 5, 4, &limits()).unwrap();
    assert!(oracle::orbit_structure_violations(&pgl, &pgammal).is_empty());
    let total: u64 = pgammal.orbit_sizes().iter().sum();
    assert_eq!(total, 261888);
    for o in &pgammal.orbits {
        assert_eq!(
            pgammal.orbit_of_key(o.representative),
            pgammal
                .representatives()
                .iter()
                .position(|&k| k == o.representative)
        );
    }
}

#[test]
fn partition_ignores_generator_choice() {
    let ctx = FieldCtx::new(5).unwrap();
    let pgl = Pgl::new(&ctx);
    let standard = oracle::enumerate_orbits(Group::Pgl, 5, 3, &limits()).unwrap();
    let everything = oracle::partition_with_generators(
        &pgl,
        IrreducibleSet::sieve(&ctx, 3),
        &pgl.enumerate(),
        Group::Pgl,
    )
    .unwrap();
    assert!(standard.same_blocks(&everything));
    let ctx = FieldCtx::new(3).unwrap();
    let pgl = Pgl::new(&ctx);
    for group in [Group::Pgl, Group::PGammaL] {
        let standard = oracle::enumerate_orbits(group, 3, 5, &limits()).unwrap();
        let everything = oracle::partition_with_generators(
            &pgl,
            IrreducibleSet::sieve(&ctx, 5),
            &pgl.enumerate(),
            group,
        )
        .unwrap();
        assert!(standard.same_blocks(&everything));
    }
}

#[test]
fn partition_ignores_worker_count() {
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| oracle::enumerate_orbits(Group::PGammaL, 5, 3, &limits()).unwrap())
    };
    let (a, b) = (run(1), run(4));
    assert!(a.same_blocks(&b));
    assert_eq!(a.orbits, b.orbits);
}

#[test]
fn fix_counts_are_class_functions() {
    let ctx = FieldCtx::new(5).unwrap();
    let pgl = Pgl::new(&ctx);
    let kernel = ActionKernel::new(&ctx, 3).unwrap();
    let keys: Vec<u64> = IrreducibleSet::sieve(&ctx, 3).keys().collect();
    let conjugators = [
        pgl.mat(1, 1, 0, 1).unwrap(),
        pgl.mat(0, 1, 1, 0).unwrap(),
        pgl.mat(3, 7, 2, 9).unwrap(),
    ];
    let classes = pgl.conjugacy_classes().unwrap();
    for class in classes.iter().step_by(4) {
        let rep = class.representative;
        let base = oracle::fix_count(&pgl, &kernel, &keys, &rep);
        for p in &conjugators {
            assert_eq!(
                oracle::fix_count(&pgl, &kernel, &keys, &pgl.conjugate(p, &rep)),
                base,
                "{}",
                class.family
            );
        }
    }
}

#[test]
fn burnside_on_small_fields() {
    for (n, r) in [(2u32, 5usize), (3, 4), (4, 3)] {
        let b = oracle::burnside_count(n, r, &limits()).unwrap();
        let part = oracle::enumerate_orbits(Group::Pgl, n, r, &limits()).unwrap();
        assert_eq!(b.orbits, part.len() as u64);
    }
}

#[test]
fn heavy_sextic_is_gated() {
    let err = oracle::enumerate_orbits(Group::Pgl, 5, 6, &limits()).unwrap_err();
    assert!(err.to_string().contains("--heavy"));
}
