//! PGL2(F_q) and PΓL2(F_q) for q = 2^n: canonical matrices, the actions on
//! monic irreducibles, and the conjugacy classes.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::{Embedding, FieldCtx};
use crate::linmap::LinearMap;
use crate::poly::{Poly, PolyRing};

/// A 2x2 invertible matrix modulo scalars, scaled so that the first nonzero
/// entry of `(a, b, c, d)` is 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjMat {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
}

impl ProjMat {
    pub const IDENTITY: ProjMat = ProjMat {
        a: 1,
        b: 0,
        c: 0,
        d: 1,
    };

    pub fn entries(&self) -> [u64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// Packs the entries `n` bits each, `a` lowest.
    pub fn key(&self, n: u32) -> u64 {
        self.a | self.b << n | self.c << (2 * n) | self.d << (3 * n)
    }

    /// Parses `"a;b;c;d"`.
    pub fn parse(text: &str) -> Result<[u64; 4]> {
        let parts = text
            .split(';')
            .map(|t| {
                t.trim()
                    .parse::<u64>()
                    .map_err(|e| Error::Parse(format!("matrix entry {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        parts
            .try_into()
            .map_err(|_| Error::Parse(format!("expected four entries in {text:?}")))
    }
}

impl fmt::Display for ProjMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};{};{};{}", self.a, self.b, self.c, self.d)
    }
}

impl Serialize for ProjMat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `A σ^frob`, an element of PΓL2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SemiLinear {
    pub mat: ProjMat,
    pub frob: u64,
}

/// The matrices `A1..A6` with entries in GF(2); they form a copy of S3.
pub fn binary_matrices() -> [ProjMat; 6] {
    let m = |a, b, c, d| ProjMat { a, b, c, d };
    [
        m(1, 0, 0, 1),
        m(0, 1, 1, 0),
        m(1, 1, 0, 1),
        m(1, 0, 1, 1),
        m(1, 1, 1, 0),
        m(0, 1, 1, 1),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Family {
    Identity,
    Parabolic,
    Diagonal { a: u64 },
    Elliptic { i: u64, gamma: u64 },
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Identity => write!(f, "identity"),
            Family::Parabolic => write!(f, "parabolic"),
            Family::Diagonal { a } => write!(f, "diagonal(a={a})"),
            Family::Elliptic { i, .. } => write!(f, "elliptic(i={i})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjClass {
    pub family: Family,
    pub representative: ProjMat,
    pub size: u64,
    pub order_in_pgl: u64,
}

/// The group PGL2(F_q) over a fixed field.
#[derive(Clone, Debug)]
pub struct Pgl {
    ctx: FieldCtx,
}

impl Pgl {
    pub fn new(ctx: &FieldCtx) -> Self {
        Pgl { ctx: ctx.clone() }
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn q(&self) -> u64 {
        self.ctx.size()
    }

    /// `q^3 - q`.
    pub fn order(&self) -> u64 {
        let q = self.q();
        q * q * q - q
    }

    pub fn mat(&self, a: u64, b: u64, c: u64, d: u64) -> Result<ProjMat> {
        if [a, b, c, d].iter().any(|&x| !self.ctx.contains(x)) {
            return Err(Error::Domain("matrix entry outside the field".into()));
        }
        let det = self.ctx.mul(a, d) ^ self.ctx.mul(b, c);
        if det == 0 {
            return Err(Error::Singular);
        }
        Ok(self.canonical(a, b, c, d))
    }

    fn canonical(&self, a: u64, b: u64, c: u64, d: u64) -> ProjMat {
        let lead = [a, b, c, d]
            .into_iter()
            .find(|&x| x != 0)
            .expect("nonzero matrix");
        if lead == 1 {
            return ProjMat { a, b, c, d };
        }
        let s = self.ctx.inv(lead).expect("nonzero");
        let k = |x| self.ctx.mul(x, s);
        ProjMat {
            a: k(a),
            b: k(b),
            c: k(c),
            d: k(d),
        }
    }

    pub fn mul(&self, x: &ProjMat, y: &ProjMat) -> ProjMat {
        let f = &self.ctx;
        self.canonical(
            f.mul(x.a, y.a) ^ f.mul(x.b, y.c),
            f.mul(x.a, y.b) ^ f.mul(x.b, y.d),
            f.mul(x.c, y.a) ^ f.mul(x.d, y.c),
            f.mul(x.c, y.b) ^ f.mul(x.d, y.d),
        )
    }

    pub fn inv(&self, x: &ProjMat) -> ProjMat {
        self.canonical(x.d, x.b, x.c, x.a)
    }

    pub fn pow(&self, x: &ProjMat, mut e: u64) -> ProjMat {
        let mut acc = ProjMat::IDENTITY;
        let mut base = *x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn transpose(&self, x: &ProjMat) -> ProjMat {
        self.canonical(x.a, x.c, x.b, x.d)
    }

    /// Entrywise `a -> a^(2^i)`.
    pub fn frobenius(&self, x: &ProjMat, i: u64) -> ProjMat {
        let s = |v| self.ctx.frobenius(v, i);
        self.canonical(s(x.a), s(x.b), s(x.c), s(x.d))
    }

    /// `p x p^-1`.
    pub fn conjugate(&self, p: &ProjMat, x: &ProjMat) -> ProjMat {
        self.mul(&self.mul(p, x), &self.inv(p))
    }

    /// Order of `x` in PGL2, by repeated multiplication.
    pub fn order_of(&self, x: &ProjMat) -> u64 {
        let mut y = *x;
        let mut k = 1;
        while y != ProjMat::IDENTITY {
            y = self.mul(&y, x);
            k += 1;
        }
        k
    }

    /// Every element once, ascending in `(a, b, c, d)`.
    pub fn enumerate(&self) -> Vec<ProjMat> {
        let q = self.q();
        let f = &self.ctx;
        let mut out = Vec::with_capacity(self.order() as usize);
        for c in 1..q {
            for d in 0..q {
                out.push(ProjMat { a: 0, b: 1, c, d });
            }
        }
        for b in 0..q {
            for c in 0..q {
                let bc = f.mul(b, c);
                for d in 0..q {
                    if d != bc {
                        out.push(ProjMat { a: 1, b, c, d });
                    }
                }
            }
        }
        out
    }

    /// `[[1,1],[0,1]]`, `diag(g, 1)` for a primitive `g`, and `[[0,1],[1,0]]`.
    pub fn standard_generators(&self) -> Vec<ProjMat> {
        let g = self.ctx.primitive_element();
        vec![
            ProjMat {
                a: 1,
                b: 1,
                c: 0,
                d: 1,
            },
            self.canonical(g, 0, 0, 1),
            ProjMat {
                a: 0,
                b: 1,
                c: 1,
                d: 0,
            },
        ]
    }

    /// The subgroup generated by `gens`, sorted.
    pub fn closure(&self, gens: &[ProjMat]) -> Vec<ProjMat> {
        let mut seen: HashSet<ProjMat> = HashSet::from([ProjMat::IDENTITY]);
        let mut frontier = vec![ProjMat::IDENTITY];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = self.mul(g, &x);
                if seen.insert(y) {
                    frontier.push(y);
                }
            }
        }
        let mut out: Vec<_> = seen.into_iter().collect();
        out.sort_unstable();
        out
    }

    /// The set S: for each `a != 1` keep the smaller of `{a, a^-1}`.
    pub fn diagonal_transversal(&self) -> Vec<u64> {
        (2..self.q())
            .filter(|&a| a < self.ctx.inv(a).expect("nonzero"))
            .collect()
    }

    /// The conjugacy classes: identity, parabolic, split diagonal `D_{1,a}`
    /// for `a` in S, and elliptic `V_{γ_i}` for `1 <= i <= q/2`.
    pub fn conjugacy_classes(&self) -> Result<Vec<ConjClass>> {
        let q = self.q();
        let n = self.ctx.m();
        let mut out = vec![
            ConjClass {
                family: Family::Identity,
                representative: ProjMat::IDENTITY,
                size: 1,
                order_in_pgl: 1,
            },
            ConjClass {
                family: Family::Parabolic,
                representative: ProjMat {
                    a: 1,
                    b: 1,
                    c: 0,
                    d: 1,
                },
                size: q * q - 1,
                order_in_pgl: 2,
            },
        ];
        for a in self.diagonal_transversal() {
            out.push(ConjClass {
                family: Family::Diagonal { a },
                representative: ProjMat {
                    a: 1,
                    b: 0,
                    c: 0,
                    d: a,
                },
                size: q * (q + 1),
                order_in_pgl: self.ctx.element_order(a)?,
            });
        }
        let big = FieldCtx::new(2 * n)?;
        let emb = Embedding::new(&self.ctx, &big)?;
        let xi = big.primitive_element();
        for i in 1..=q / 2 {
            let gamma = big.pow(xi, (q - 1) * i);
            let gamma_q = big.frobenius(gamma, n as u64);
            let norm = big.mul(gamma, gamma_q);
            let trace = gamma ^ gamma_q;
            let (c, d) = match (emb.pull_back(norm), emb.pull_back(trace)) {
                (Some(c), Some(d)) => (c, d),
                _ => {
                    return Err(Error::Internal(format!(
                        "norm or trace of γ_{i} outside F_q"
                    )))
                }
            };
            out.push(ConjClass {
                family: Family::Elliptic { i, gamma },
                representative: ProjMat { a: 0, b: 1, c, d },
                size: q * (q - 1),
                order_in_pgl: big.element_order(big.pow(gamma, q - 1))?,
            });
        }
        Ok(out)
    }

    /// `Af = (cx + a)^r f((dx + b)/(cx + a))`, made monic.
    pub fn act(&self, m: &ProjMat, f: &Poly, r: usize) -> Result<Poly> {
        self.substitute(f, r, [m.d, m.b], [m.c, m.a])
    }

    /// `A∘f = (bx + d)^r f((ax + c)/(bx + d))`, made monic.
    pub fn act_circ(&self, m: &ProjMat, f: &Poly, r: usize) -> Result<Poly> {
        self.substitute(f, r, [m.a, m.c], [m.b, m.d])
    }

    /// `(A σ^i) f = (A (σ^i f))^*`.
    pub fn act_semilinear(&self, g: &SemiLinear, f: &Poly, r: usize) -> Result<Poly> {
        let ring = PolyRing::new(&self.ctx);
        self.act(&g.mat, &ring.frobenius_on_poly(f, g.frob), r)
    }

    /// `(A σ^i)(B σ^j) = A σ^i(B) σ^(i+j)`, exponents mod `period`.
    pub fn compose(&self, g: &SemiLinear, h: &SemiLinear, period: u64) -> SemiLinear {
        SemiLinear {
            mat: self.mul(&g.mat, &self.frobenius(&h.mat, g.frob)),
            frob: (g.frob + h.frob) % period,
        }
    }

    // Σ f_i (num)^i (den)^(r-i) with num = n1 x + n0, den = d1 x + d0.
    fn substitute(&self, f: &Poly, r: usize, num: [u64; 2], den: [u64; 2]) -> Result<Poly> {
        if f.degree() != Some(r) {
            return Err(Error::Domain(format!("expected degree {r}")));
        }
        let ring = PolyRing::new(&self.ctx);
        let num = Poly::new(vec![num[1], num[0]]);
        let den = Poly::new(vec![den[1], den[0]]);
        let basis = substitution_basis(&ring, &num, &den, r);
        let mut acc = Poly::zero();
        for (i, p) in basis.iter().enumerate() {
            acc = ring.add(&acc, &ring.scale(p, f.coeff(i)));
        }
        if acc.degree() != Some(r) {
            return Err(Error::Domain("image has degree below r".into()));
        }
        ring.monic(&acc)
    }

    /// Fast application of one matrix to packed monic keys of degree `r`.
    pub fn packed(&self, kernel: &ActionKernel, m: &ProjMat) -> PackedAction {
        let ring = PolyRing::new(&self.ctx);
        let num = Poly::new(vec![m.b, m.d]);
        let den = Poly::new(vec![m.a, m.c]);
        let basis = substitution_basis(&ring, &num, &den, kernel.r);
        kernel.linearize(&ring, &basis)
    }
}

// (num)^i (den)^(r-i) for i = 0..=r.
fn substitution_basis(ring: &PolyRing<'_>, num: &Poly, den: &Poly, r: usize) -> Vec<Poly> {
    let mut num_pows = vec![Poly::one()];
    let mut den_pows = vec![Poly::one()];
    for i in 1..=r {
        num_pows.push(ring.mul(&num_pows[i - 1], num));
        den_pows.push(ring.mul(&den_pows[i - 1], den));
    }
    (0..=r)
        .map(|i| ring.mul(&num_pows[i], &den_pows[r - i]))
        .collect()
}

/// Shared tables for acting on packed keys of monic degree-`r` polynomials
/// over GF(2^n); needs `(r + 1) n <= 64`.
#[derive(Clone, Debug)]
pub struct ActionKernel {
    n: u32,
    r: usize,
    // scale[λ] maps packed low coefficients v to λ^-1 v
    scale: Vec<LinearMap>,
    frob: LinearMap,
}

impl ActionKernel {
    pub fn new(ctx: &FieldCtx, r: usize) -> Result<Self> {
        let n = ctx.m();
        if (r + 1) * n as usize > 64 {
            return Err(Error::Capacity {
                resource: "packed polynomial width (bits)".into(),
                required: ((r + 1) * n as usize) as u128,
                limit: 64,
            });
        }
        let bits = r * n as usize;
        let coord = |j: usize| (1u64 << (j % n as usize), n as usize * (j / n as usize));
        let mut scale = vec![LinearMap::from_images(&[])];
        for lambda in 1..ctx.size() {
            let s = ctx.inv(lambda)?;
            let images: Vec<u64> = (0..bits)
                .map(|j| {
                    let (v, shift) = coord(j);
                    ctx.mul(v, s) << shift
                })
                .collect();
            scale.push(LinearMap::from_images(&images));
        }
        let images: Vec<u64> = (0..bits)
            .map(|j| {
                let (v, shift) = coord(j);
                ctx.sqr(v) << shift
            })
            .collect();
        Ok(ActionKernel {
            n,
            r,
            scale,
            frob: LinearMap::from_images(&images),
        })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Coefficientwise squaring of a packed key.
    #[inline]
    pub fn frobenius(&self, key: u64) -> u64 {
        self.frob.apply(key)
    }

    fn linearize(&self, ring: &PolyRing<'_>, basis: &[Poly]) -> PackedAction {
        let n = self.n as usize;
        let pack = |p: &Poly| {
            p.coeffs()
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, &c)| acc | c << (n * i))
        };
        let images: Vec<u64> = (0..self.r * n)
            .map(|j| pack(&ring.scale(&basis[j / n], 1u64 << (j % n))))
            .collect();
        PackedAction {
            map: LinearMap::from_images(&images),
            lead: pack(&basis[self.r]),
            low_bits: (self.r * n) as u32,
        }
    }

    /// Image of the monic polynomial with packed key `key`.
    #[inline]
    pub fn apply(&self, action: &PackedAction, key: u64) -> u64 {
        let out = action.lead ^ action.map.apply(key);
        let lambda = out >> action.low_bits;
        debug_assert!(lambda != 0);
        let low = out & ((1u64 << action.low_bits) - 1);
        self.scale[lambda as usize].apply(low)
    }
}

/// One matrix compiled against an [`ActionKernel`].
#[derive(Clone, Debug)]
pub struct PackedAction {
    map: LinearMap,
    lead: u64,
    low_bits: u32,
}

/// Outcome of checking the class list against brute-force conjugation.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ConjugacyAudit {
    pub q: u64,
    pub class_count: usize,
    pub expected_class_count: u64,
    pub size_sum: u64,
    pub group_order: u64,
    pub exhaustive: bool,
    pub violations: Vec<String>,
}

impl ConjugacyAudit {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks class count, sizes (via centralizers), orders (via powering) and,
/// when `exhaustive`, that the classes of the representatives partition the
/// group.
pub fn conjugacy_audit(pgl: &Pgl, exhaustive: bool) -> Result<ConjugacyAudit> {
    let q = pgl.q();
    let classes = pgl.conjugacy_classes()?;
    let group = pgl.enumerate();
    let mut audit = ConjugacyAudit {
        q,
        class_count: classes.len(),
        expected_class_count: 2 + (q - 2) / 2 + q / 2,
        size_sum: classes.iter().map(|c| c.size).sum(),
        group_order: pgl.order(),
        exhaustive,
        violations: Vec::new(),
    };
    if audit.class_count as u64 != audit.expected_class_count {
        audit.violations.push(format!(
            "{} classes, expected {}",
            audit.class_count, audit.expected_class_count
        ));
    }
    if audit.size_sum != audit.group_order {
        audit.violations.push(format!(
            "class sizes sum to {}, group order {}",
            audit.size_sum, audit.group_order
        ));
    }
    for class in &classes {
        let rep = class.representative;
        let centralizer = group
            .iter()
            .filter(|p| pgl.mul(p, &rep) == pgl.mul(&rep, p))
            .count() as u64;
        if centralizer * class.size != audit.group_order {
            audit.violations.push(format!(
                "{}: size {} but centralizer {}",
                class.family, class.size, centralizer
            ));
        }
        let order = pgl.order_of(&rep);
        if order != class.order_in_pgl {
            audit.violations.push(format!(
                "{}: order {} but powering gives {}",
                class.family, class.order_in_pgl, order
            ));
        }
        let divides = match class.family {
            Family::Identity => order == 1,
            Family::Parabolic => order == 2,
            Family::Diagonal { .. } => order > 1 && (q - 1) % order == 0,
            Family::Elliptic { .. } => order > 1 && (q + 1) % order == 0,
        };
        if !divides {
            audit.violations.push(format!(
                "{}: order {order} has the wrong shape",
                class.family
            ));
        }
    }
    if exhaustive {
        let mut covered: BTreeSet<ProjMat> = BTreeSet::new();
        for class in &classes {
            let orbit: BTreeSet<ProjMat> = group
                .iter()
                .map(|p| pgl.conjugate(p, &class.representative))
                .collect();
            if orbit.len() as u64 != class.size {
                audit.violations.push(format!(
                    "{}: conjugation orbit has {} elements",
                    class.family,
                    orbit.len()
                ));
            }
            if !covered.is_disjoint(&orbit) {
                audit
                    .violations
                    .push(format!("{} is conjugate to an earlier class", class.family));
            }
            covered.extend(orbit);
        }
        if covered.len() as u64 != audit.group_order {
            audit
                .violations
                .push(format!("classes cover {} elements", covered.len()));
        }
    }
    Ok(audit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::irreducible_keys;

    fn pgl(n: u32) -> Pgl {
        Pgl::new(&FieldCtx::new(n).unwrap())
    }

    #[test]
    fn canonical_forms() {
        let g = pgl(5);
        let m = g.mat(3, 7, 0, 9).unwrap();
        assert_eq!(m.a, 1);
        let f = g.ctx().clone();
        let l = 13;
        let scaled = g.mat(f.mul(3, l), f.mul(7, l), 0, f.mul(9, l)).unwrap();
        assert_eq!(scaled, m);
        assert_eq!(g.mul(&m, &g.inv(&m)), ProjMat::IDENTITY);
        assert_eq!(g.mat(1, 1, 1, 1), Err(Error::Singular));
        assert_eq!(ProjMat::parse("1;2;3;4").unwrap(), [1, 2, 3, 4]);
        assert_eq!(m.to_string().split(';').count(), 4);
    }

    #[test]
    fn binary_matrices_form_s3() {
        let g = pgl(5);
        let [a1, a2, a3, a4, a5, a6] = binary_matrices();
        assert_eq!(a1, ProjMat::IDENTITY);
        assert_eq!(g.mul(&a5, &a5), a6);
        assert_eq!(g.pow(&a5, 3), a1);
        for x in [a2, a3, a4] {
            assert_eq!(g.mul(&x, &x), a1);
        }
        let all: HashSet<ProjMat> = binary_matrices().into_iter().collect();
        for x in binary_matrices() {
            for y in binary_matrices() {
                assert!(all.contains(&g.mul(&x, &y)));
            }
        }
    }

    #[test]
    fn group_orders() {
        for (n, order) in [(1u32, 6usize), (2, 60), (5, 32736)] {
            let g = pgl(n);
            let all = g.enumerate();
            assert_eq!(all.len(), order);
            let distinct: HashSet<_> = all.iter().collect();
            assert_eq!(distinct.len(), order);
            assert_eq!(g.closure(&g.standard_generators()).len(), order);
        }
    }

    #[test]
    fn reciprocal_action() {
        let g = pgl(5);
        let f = Poly::parse("1,1,0,1").unwrap();
        let a2 = binary_matrices()[1];
        assert_eq!(g.act(&a2, &f, 3).unwrap(), Poly::parse("1,0,1,1").unwrap());
        assert_eq!(g.act(&ProjMat::IDENTITY, &f, 3).unwrap(), f);
        assert_eq!(g.act_circ(&ProjMat::IDENTITY, &f, 3).unwrap(), f);
    }

    #[test]
    fn a2_act_and_circ_agree() {
        let g = pgl(5);
        let a2 = binary_matrices()[1];
        for k in irreducible_keys(g.ctx(), 3) {
            let f = Poly::from_key(k, 5, 3);
            assert_eq!(g.act(&a2, &f, 3).unwrap(), g.act_circ(&a2, &f, 3).unwrap());
        }
    }

    #[test]
    fn conjugacy_tables() {
        let g = pgl(2);
        let classes = g.conjugacy_classes().unwrap();
        let sizes: Vec<u64> = classes.iter().map(|c| c.size).collect();
        assert_eq!(sizes, vec![1, 15, 20, 12, 12]);
        let g = pgl(5);
        let classes = g.conjugacy_classes().unwrap();
        assert_eq!(classes.len(), 33);
        assert_eq!(classes.iter().map(|c| c.size).sum::<u64>(), 32736);
    }

    #[test]
    fn diagonal_inverse_pairs_are_conjugate() {
        let g = pgl(3);
        for a in 2..8u64 {
            let ai = g.ctx().inv(a).unwrap();
            let x = ProjMat {
                a: 1,
                b: 0,
                c: 0,
                d: a,
            };
            let y = g.mat(1, 0, 0, ai).unwrap();
            assert!(g.enumerate().iter().any(|p| g.conjugate(p, &x) == y));
        }
    }

    #[test]
    fn audits_small_fields() {
        for n in [2u32, 3] {
            let audit = conjugacy_audit(&pgl(n), true).unwrap();
            assert!(audit.passed(), "{:?}", audit.violations);
        }
    }

    #[test]
    fn packed_kernel_matches_polynomial_action() {
        let g = pgl(5);
        for r in [3usize, 4] {
            let kernel = ActionKernel::new(g.ctx(), r).unwrap();
            let keys = irreducible_keys(g.ctx(), r);
            for m in g.enumerate().into_iter().step_by(331) {
                let packed = g.packed(&kernel, &m);
                for &k in keys.iter().step_by(101) {
                    let f = Poly::from_key(k, 5, r);
                    assert_eq!(kernel.apply(&packed, k), g.act(&m, &f, r).unwrap().key(5));
                }
            }
            for &k in keys.iter().step_by(101) {
                let f = Poly::from_key(k, 5, r);
                let ring = PolyRing::new(g.ctx());
                assert_eq!(kernel.frobenius(k), ring.frobenius_on_poly(&f, 1).key(5));
            }
        }
    }
}
