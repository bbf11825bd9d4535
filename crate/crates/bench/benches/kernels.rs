use criterion::{black_box, criterion_group, criterion_main, Criterion};

use goppa_orbits::census::Census;
use goppa_orbits::goppa::{self, GoppaSpec};
use goppa_orbits::oracle::{self, Group, Limits};
use goppa_orbits::pgl::ActionKernel;
use goppa_orbits::{iter_irreducible, FieldCtx, IrreducibleSet, Pgl, Poly, PolyRing};

fn field(c: &mut Criterion) {
    let small = FieldCtx::new(5).unwrap();
    let large = FieldCtx::new(45).unwrap();
    c.bench_function("gf32 mul+inv", |b| {
        b.iter(|| {
            (1..32u64).fold(1u64, |acc, x| {
                small.mul(acc, small.inv(black_box(x)).unwrap())
            })
        })
    });
    c.bench_function("gf2^45 mul", |b| {
        b.iter(|| (1..256u64).fold(3u64, |acc, x| large.mul(acc, black_box(x * 0x1234567))))
    });
}

fn polys(c: &mut Criterion) {
    let ctx = FieldCtx::new(5).unwrap();
    let ring = PolyRing::new(&ctx);
    let f = iter_irreducible(&ctx, 6).next().unwrap();
    c.bench_function("rabin degree 6 over gf32", |b| {
        b.iter(|| ring.is_irreducible(black_box(&f)))
    });
    c.bench_function("sieve I_3 over gf32", |b| {
        b.iter(|| IrreducibleSet::sieve(&ctx, 3).len())
    });
}

fn actions(c: &mut Criterion) {
    let ctx = FieldCtx::new(5).unwrap();
    let pgl = Pgl::new(&ctx);
    let kernel = ActionKernel::new(&ctx, 4).unwrap();
    let m = pgl.mat(3, 7, 11, 2).unwrap();
    let packed = pgl.packed(&kernel, &m);
    let keys: Vec<u64> = IrreducibleSet::sieve(&ctx, 4).keys().take(4096).collect();
    c.bench_function("packed action x4096", |b| {
        b.iter(|| {
            keys.iter()
                .fold(0u64, |acc, &k| acc ^ kernel.apply(&packed, k))
        })
    });
    let f = Poly::from_key(keys[0], 5, 4);
    c.bench_function("polynomial action", |b| {
        b.iter(|| pgl.act(&m, black_box(&f), 4).unwrap())
    });
    c.bench_function("PΓL partition of I_3", |b| {
        b.iter(|| {
            oracle::enumerate_orbits(Group::PGammaL, 5, 3, &Limits::default())
                .unwrap()
                .len()
        })
    });
}

fn census(c: &mut Criterion) {
    let census = Census::new(5).unwrap();
    c.bench_function("census report (5, 19)", |b| {
        b.iter(|| census.report(black_box(19), false).unwrap())
    });
}

fn codes(c: &mut Criterion) {
    let ctx = FieldCtx::new(5).unwrap();
    let g = iter_irreducible(&ctx, 3).next().unwrap();
    let spec = GoppaSpec::new(5, &g).unwrap();
    let code = goppa::extend(&goppa::build_goppa(&spec).unwrap());
    c.bench_function("build cubic Goppa code", |b| {
        b.iter(|| goppa::build_goppa(&spec).unwrap())
    });
    c.bench_function("weight enumerator 2^17", |b| {
        b.iter(|| goppa::weight_enumerator(&code, 24).unwrap())
    });
}

criterion_group!(benches, field, polys, actions, census, codes);
criterion_main!(benches);
