//! Brute-force ground truth: orbit partitions of I_r, direct Burnside sums,
//! the classification of X, and the factorization checks behind |Δ5|.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::arith::{gcd, irreducible_count};
use crate::census::{self, CensusReport};
use crate::error::{Error, Result};
use crate::gf2::{Embedding, FieldCtx};
use crate::pgl::{binary_matrices, ActionKernel, Pgl, ProjMat};
use crate::poly::{IrreducibleSet, Poly, PolyRing};

/// Resource limits for the brute-force routines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest |I_r| enumerated without `heavy`.
    pub max_irreducibles: u64,
    /// Hard cap on the estimated working set, heavy or not.
    pub memory_bytes: u64,
    /// Largest |PGL| * |I_r| attempted by a Burnside sum without `heavy`.
    pub max_burnside_ops: u128,
    pub heavy: bool,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_irreducibles: 1 << 27,
            memory_bytes: 2 << 30,
            max_burnside_ops: 1 << 34,
            heavy: false,
        }
    }
}

impl Limits {
    pub fn heavy() -> Self {
        Limits {
            heavy: true,
            ..Limits::default()
        }
    }

    /// Refuses enumerations of I_r that exceed the limits.
    pub fn check_enumeration(&self, n: u32, r: usize) -> Result<()> {
        let key_bits = n as u128 * r as u128;
        if key_bits >= 64 || (r + 1) as u128 * n as u128 > 64 {
            return Err(Error::Capacity {
                resource: "packed key width (bits)".into(),
                required: (r as u128 + 1) * n as u128,
                limit: 64,
            });
        }
        let count = irreducible_count(1 << n, r as u64)
            .to_u128()
            .unwrap_or(u128::MAX);
        if !self.heavy && count > self.max_irreducibles as u128 {
            return Err(Error::Capacity {
                resource: "|I_r| without --heavy".into(),
                required: count,
                limit: self.max_irreducibles as u128,
            });
        }
        // sieve words, bitmap, rank table, union-find array
        let space = 1u128 << key_bits;
        let estimate = space / 8 * 2 + space / 64 * 4 + count * 4;
        if estimate > self.memory_bytes as u128 {
            return Err(Error::Capacity {
                resource: "memory (bytes)".into(),
                required: estimate,
                limit: self.memory_bytes as u128,
            });
        }
        Ok(())
    }

    fn check_burnside(&self, n: u32, r: usize) -> Result<()> {
        self.check_enumeration(n, r)?;
        let q = 1u128 << n;
        let ops = q
            * (q * q - 1)
            * irreducible_count(1 << n, r as u64)
                .to_u128()
                .unwrap_or(u128::MAX);
        if !self.heavy && ops > self.max_burnside_ops {
            return Err(Error::Capacity {
                resource: "Burnside applications without --heavy".into(),
                required: ops,
                limit: self.max_burnside_ops,
            });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Group {
    #[serde(rename = "PGL")]
    Pgl,
    #[serde(rename = "PΓL")]
    PGammaL,
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Group::Pgl => "PGL",
            Group::PGammaL => "PΓL",
        })
    }
}

impl std::str::FromStr for Group {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pgl" => Ok(Group::Pgl),
            "pgammal" | "pγl" | "pgaml" => Ok(Group::PGammaL),
            _ => Err(Error::Parse(format!("unknown group {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Orbit {
    /// Least key in the orbit.
    pub representative: u64,
    pub size: u64,
    /// Some member divides `x^(2^r) + x`.
    pub divisor_flag: bool,
}

/// A partition of I_r into orbits. Orbit ids follow ascending
/// representatives.
#[derive(Clone, Debug)]
pub struct OrbitPartition {
    pub group: Group,
    pub n: u32,
    pub r: usize,
    pub set: IrreducibleSet,
    orbit_of: Vec<u32>,
    pub orbits: Vec<Orbit>,
}

impl OrbitPartition {
    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    pub fn orbit_of_key(&self, key: u64) -> Option<usize> {
        self.set
            .index_of(key)
            .map(|i| self.orbit_of[i as usize] as usize)
    }

    pub fn orbit_sizes(&self) -> Vec<u64> {
        self.orbits.iter().map(|o| o.size).collect()
    }

    pub fn representatives(&self) -> Vec<u64> {
        self.orbits.iter().map(|o| o.representative).collect()
    }

    /// Keys of one orbit, ascending.
    pub fn members(&self, id: usize) -> Vec<u64> {
        self.set
            .keys()
            .zip(&self.orbit_of)
            .filter(|&(_, &o)| o as usize == id)
            .map(|(k, _)| k)
            .collect()
    }

    /// Same underlying set of blocks.
    pub fn same_blocks(&self, other: &OrbitPartition) -> bool {
        self.set.len() == other.set.len()
            && self.orbits.len() == other.orbits.len()
            && self.orbit_of == other.orbit_of
    }
}

/// Orbits of `group` on I_r, closing under the standard generators (and
/// coefficientwise squaring for PΓL).
pub fn enumerate_orbits(group: Group, n: u32, r: usize, limits: &Limits) -> Result<OrbitPartition> {
    limits.check_enumeration(n, r)?;
    let ctx = FieldCtx::new(n)?;
    let pgl = Pgl::new(&ctx);
    let set = IrreducibleSet::sieve(&ctx, r);
    partition_with_generators(&pgl, set, &pgl.standard_generators(), group)
}

/// Orbit partition of the members of `set` under the given matrices, plus
/// squaring when `group` is PΓL.
pub fn partition_with_generators(
    pgl: &Pgl,
    set: IrreducibleSet,
    gens: &[ProjMat],
    group: Group,
) -> Result<OrbitPartition> {
    let ctx = pgl.ctx();
    let (n, r) = (ctx.m(), set.r());
    let kernel = ActionKernel::new(ctx, r)?;
    let actions: Vec<_> = gens.iter().map(|g| pgl.packed(&kernel, g)).collect();
    let with_frob = group == Group::PGammaL;
    let image_count = actions.len() + with_frob as usize;
    let image = |j: usize, key: u64| {
        if j < actions.len() {
            kernel.apply(&actions[j], key)
        } else {
            kernel.frobenius(key)
        }
    };

    let len = set.len() as usize;
    let mut parent: Vec<u32> = (0..len as u32).collect();
    const BATCH: usize = 1 << 14;
    const CHUNK: usize = 256;
    let words = set.word_count();
    for start in (0..words).step_by(BATCH) {
        let end = (start + BATCH).min(words);
        let chunks: Vec<usize> = (start..end).step_by(CHUNK).collect();
        let pairs: Vec<Vec<(u32, u32)>> = chunks
            .par_iter()
            .map(|&w0| {
                let mut out = Vec::new();
                for (i, key) in set.indexed_keys_in(w0..(w0 + CHUNK).min(end)) {
                    for j in 0..image_count {
                        let target = set.index_of(image(j, key)).unwrap_or(u32::MAX);
                        out.push((i, target));
                    }
                }
                out
            })
            .collect();
        for (i, j) in pairs.into_iter().flatten() {
            if j == u32::MAX {
                return Err(Error::Internal("generator image left I_r".into()));
            }
            union(&mut parent, i, j);
        }
    }

    // roots are least indices, so parent[i] <= i throughout
    for i in 0..len {
        let p = parent[i] as usize;
        parent[i] = parent[p];
    }
    const TAG: u32 = 1 << 31;
    let mut orbits: Vec<Orbit> = Vec::new();
    for (i, key) in set.keys().enumerate() {
        let root = parent[i];
        let id = if root as usize == i {
            orbits.push(Orbit {
                representative: key,
                size: 0,
                divisor_flag: false,
            });
            (orbits.len() - 1) as u32
        } else {
            parent[root as usize] & !TAG
        };
        parent[i] = id | TAG;
        orbits[id as usize].size += 1;
    }
    for p in parent.iter_mut() {
        *p &= !TAG;
    }

    let mut part = OrbitPartition {
        group,
        n,
        r,
        set,
        orbit_of: parent,
        orbits,
    };
    for f in x_members(n, r)? {
        let id = part
            .orbit_of_key(f.key(n))
            .ok_or_else(|| Error::Internal("member of X missing from I_r".into()))?;
        part.orbits[id].divisor_flag = true;
    }
    Ok(part)
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        let gp = parent[parent[x as usize] as usize];
        parent[x as usize] = gp;
        x = gp;
    }
    x
}

fn union(parent: &mut [u32], a: u32, b: u32) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        parent[hi as usize] = lo;
    }
}

/// Violations of the orbit-size laws: PGL orbit sizes divide |PGL|, and each
/// PΓL orbit is a union of 1 or n PGL orbits.
pub fn orbit_structure_violations(
    pgl_part: &OrbitPartition,
    pgammal_part: &OrbitPartition,
) -> Vec<String> {
    let q = 1u64 << pgl_part.n;
    let order = q * (q * q - 1);
    let mut out = Vec::new();
    for o in &pgl_part.orbits {
        if order % o.size != 0 {
            out.push(format!(
                "PGL orbit of {} has size {} not dividing {order}",
                o.representative, o.size
            ));
        }
    }
    let mut pieces: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); pgammal_part.len()];
    for (a, b) in pgl_part.orbit_of.iter().zip(&pgammal_part.orbit_of) {
        pieces[*b as usize].insert(*a);
    }
    for (id, p) in pieces.iter().enumerate() {
        if p.len() != 1 && p.len() != pgl_part.n as usize {
            out.push(format!(
                "PΓL orbit of {} splits into {} PGL orbits",
                pgammal_part.orbits[id].representative,
                p.len()
            ));
        }
    }
    out
}

/// Result of a direct Cauchy-Frobenius sum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Burnside {
    pub total_fixed: u128,
    pub group_order: u64,
    pub orbits: u64,
}

/// `|Fix(m)|` on the given keys.
pub fn fix_count(pgl: &Pgl, kernel: &ActionKernel, keys: &[u64], m: &ProjMat) -> u64 {
    let action = pgl.packed(kernel, m);
    keys.iter()
        .filter(|&&k| kernel.apply(&action, k) == k)
        .count() as u64
}

/// `Σ_A |Fix(A)| / |PGL|` with every matrix applied to every member of I_r.
pub fn burnside_count(n: u32, r: usize, limits: &Limits) -> Result<Burnside> {
    limits.check_burnside(n, r)?;
    let ctx = FieldCtx::new(n)?;
    let pgl = Pgl::new(&ctx);
    let kernel = ActionKernel::new(&ctx, r)?;
    let keys: Vec<u64> = IrreducibleSet::sieve(&ctx, r).keys().collect();
    let total: u128 = pgl
        .enumerate()
        .par_iter()
        .map(|m| fix_count(&pgl, &kernel, &keys, m) as u128)
        .sum();
    let order = pgl.order();
    if total % order as u128 != 0 {
        return Err(Error::Internal(format!(
            "fixed-point total {total} not divisible by |PGL| = {order}"
        )));
    }
    Ok(Burnside {
        total_fixed: total,
        group_order: order,
        orbits: (total / order as u128) as u64,
    })
}

/// Largest r for which X is enumerated.
pub const X_MAX_DEGREE: usize = 26;

/// X: the members of I_r dividing `x^(2^r) + x`, ascending by key. A root of
/// such an f lies in GF(2^r) and has degree r over F_q, which forces
/// gcd(r, n) = 1 and makes f binary; so X is the binary irreducibles of
/// degree r when gcd(r, n) = 1 and is empty otherwise.
pub fn x_members(n: u32, r: usize) -> Result<Vec<Poly>> {
    if r > X_MAX_DEGREE {
        return Err(Error::Capacity {
            resource: "degree r for enumerating X".into(),
            required: r as u128,
            limit: X_MAX_DEGREE as u128,
        });
    }
    if gcd(n as u64, r as u64) != 1 {
        return Ok(Vec::new());
    }
    let f2 = FieldCtx::new(1)?;
    let mut out: Vec<Poly> = IrreducibleSet::sieve(&f2, r)
        .keys()
        .map(|k| Poly::from_key(k, 1, r))
        .collect();
    out.sort_by_key(|f| f.key(n));
    Ok(out)
}

/// X by filtering I_r with `f | x^(2^r) + x`; the slow route, for checking
/// [`x_members`].
pub fn x_members_by_filter(n: u32, r: usize) -> Result<Vec<Poly>> {
    let ctx = FieldCtx::new(n)?;
    let ring = PolyRing::new(&ctx);
    let keys = IrreducibleSet::sieve(&ctx, r).keys().collect::<Vec<_>>();
    let hits: Vec<u64> = keys
        .par_iter()
        .copied()
        .filter(|&k| {
            ring.divides_x2r_x(&Poly::from_key(k, n, r), r)
                .unwrap_or(false)
        })
        .collect();
    Ok(hits.into_iter().map(|k| Poly::from_key(k, n, r)).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum DeltaClass {
    D2,
    D3,
    D4,
    D5,
    D7,
}

impl DeltaClass {
    pub fn index(self) -> u8 {
        match self {
            DeltaClass::D2 => 2,
            DeltaClass::D3 => 3,
            DeltaClass::D4 => 4,
            DeltaClass::D5 => 5,
            DeltaClass::D7 => 7,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct XMember {
    pub key: u64,
    #[serde(serialize_with = "ser_display")]
    pub poly: Poly,
    /// Fixed by A2, ..., A6.
    pub fixed_by: [bool; 5],
    pub class: DeltaClass,
    /// `{A_1 f, ..., A_6 f}` as sorted keys.
    pub g_f: Vec<u64>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DeltaCounts {
    pub x: u64,
    pub delta2: u64,
    pub delta3: u64,
    pub delta4: u64,
    pub delta5: u64,
    pub delta6: u64,
    pub delta7: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DeltaTable {
    pub n: u32,
    pub r: usize,
    pub counts: DeltaCounts,
    pub members: Vec<XMember>,
}

impl DeltaTable {
    pub fn member(&self, key: u64) -> Option<&XMember> {
        self.members
            .binary_search_by_key(&key, |m| m.key)
            .ok()
            .map(|i| &self.members[i])
    }

    /// `(1/3)(|Δ2|+|Δ3|+|Δ4|) + (1/2)|Δ5| + (1/6)|Δ7|`.
    pub fn s0(&self) -> BigRational {
        let c = &self.counts;
        let r = |a: u64, b: u64| BigRational::new(BigInt::from(a), BigInt::from(b));
        r(c.delta2 + c.delta3 + c.delta4, 3) + r(c.delta5, 2) + r(c.delta7, 6)
    }
}

fn ser_display<T: fmt::Display, S: Serializer>(
    x: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

/// Membership of every f in X in Δ2..Δ7 and its set G_f. Fails with
/// [`Error::Structural`] when the case analysis does not hold.
pub fn classify_x(n: u32, r: usize) -> Result<DeltaTable> {
    let ctx = FieldCtx::new(n)?;
    let pgl = Pgl::new(&ctx);
    let mats = binary_matrices();
    let xs = x_members(n, r)?;
    let keys: BTreeSet<u64> = xs.iter().map(|f| f.key(n)).collect();
    let mut violations = Vec::new();
    let mut members = Vec::with_capacity(xs.len());
    for f in &xs {
        let key = f.key(n);
        let images = mats
            .iter()
            .map(|m| pgl.act(m, f, r).map(|g| g.key(n)))
            .collect::<Result<Vec<u64>>>()?;
        let mut fixed_by = [false; 5];
        for i in 0..5 {
            fixed_by[i] = images[i + 1] == key;
        }
        if fixed_by[3] != fixed_by[4] {
            violations.push(format!("{f}: A5 and A6 disagree"));
        }
        let hits: Vec<usize> = (0..4).filter(|&i| fixed_by[i]).collect();
        let class = match hits.as_slice() {
            [] => DeltaClass::D7,
            [0] => DeltaClass::D2,
            [1] => DeltaClass::D3,
            [2] => DeltaClass::D4,
            [3] => DeltaClass::D5,
            _ => {
                violations.push(format!("{f}: fixed by several of A2..A5"));
                DeltaClass::D7
            }
        };
        let g_f: Vec<u64> = images
            .iter()
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        for g in &g_f {
            if !keys.contains(g) {
                violations.push(format!("{f}: image {g} not in X"));
            }
        }
        members.push((
            XMember {
                key,
                poly: f.clone(),
                fixed_by,
                class,
                g_f,
            },
            images,
        ));
    }

    let class_of: BTreeMap<u64, DeltaClass> =
        members.iter().map(|(m, _)| (m.key, m.class)).collect();
    let mut counts = DeltaCounts {
        x: xs.len() as u64,
        ..DeltaCounts::default()
    };
    for (m, images) in &members {
        let f = &m.poly;
        let cls = |k: u64| class_of.get(&k).copied();
        let expect = |violations: &mut Vec<String>, size: usize, pairs: &[(usize, DeltaClass)]| {
            if m.g_f.len() != size {
                violations.push(format!("{f}: |G_f| = {} instead of {size}", m.g_f.len()));
            }
            for &(i, want) in pairs {
                if cls(images[i]) != Some(want) {
                    violations.push(format!("{f}: A{} f lies outside Δ{}", i + 1, want.index()));
                }
            }
        };
        match m.class {
            DeltaClass::D2 => {
                counts.delta2 += 1;
                expect(
                    &mut violations,
                    3,
                    &[(2, DeltaClass::D4), (3, DeltaClass::D3)],
                );
            }
            DeltaClass::D3 => {
                counts.delta3 += 1;
                expect(
                    &mut violations,
                    3,
                    &[(1, DeltaClass::D4), (3, DeltaClass::D2)],
                );
            }
            DeltaClass::D4 => {
                counts.delta4 += 1;
                expect(
                    &mut violations,
                    3,
                    &[(1, DeltaClass::D3), (2, DeltaClass::D2)],
                );
            }
            DeltaClass::D5 => {
                counts.delta5 += 1;
                expect(&mut violations, 2, &[(1, DeltaClass::D5)]);
                if !(images[1] == images[2] && images[2] == images[3]) {
                    violations.push(format!("{f}: A2 f, A3 f, A4 f differ"));
                }
            }
            DeltaClass::D7 => {
                counts.delta7 += 1;
                expect(&mut violations, 6, &[]);
            }
        }
        if m.fixed_by[4] {
            counts.delta6 += 1;
        }
    }
    if counts.delta5 != counts.delta6 {
        violations.push(format!(
            "|Δ5| = {} but |Δ6| = {}",
            counts.delta5, counts.delta6
        ));
    }
    if counts.delta2 != counts.delta3 || counts.delta3 != counts.delta4 {
        violations.push(format!(
            "|Δ2|, |Δ3|, |Δ4| = {}, {}, {}",
            counts.delta2, counts.delta3, counts.delta4
        ));
    }
    if counts.x != 3 * counts.delta2 + counts.delta5 + counts.delta7 {
        violations.push(format!(
            "|X| = {} but 3|Δ2| + |Δ5| + |Δ7| = {}",
            counts.x,
            3 * counts.delta2 + counts.delta5 + counts.delta7
        ));
    }
    if !violations.is_empty() {
        return Err(Error::Structural(violations));
    }
    Ok(DeltaTable {
        n,
        r,
        counts,
        members: members.into_iter().map(|(m, _)| m).collect(),
    })
}

/// `|Δ5|` by testing `A5 f = f` on every member of X.
pub fn count_delta5_bruteforce(n: u32, r: usize) -> Result<u64> {
    if r % 3 != 0 {
        return Ok(0);
    }
    let ctx = FieldCtx::new(n)?;
    let pgl = Pgl::new(&ctx);
    let a5 = binary_matrices()[4];
    let mut count = 0;
    for f in x_members(n, r)? {
        if pgl.act(&a5, &f, r)? == f {
            count += 1;
        }
    }
    Ok(count)
}

/// Binary monic irreducibles of degree r fixed by A5, by scanning.
pub fn count_a5_fixed_f2_bruteforce(r: usize) -> Result<u64> {
    if r % 3 != 0 {
        return Err(Error::Domain(format!("3 does not divide r = {r}")));
    }
    let f2 = FieldCtx::new(1)?;
    let pgl = Pgl::new(&f2);
    let a5 = binary_matrices()[4];
    let mut count = 0;
    for k in IrreducibleSet::sieve(&f2, r).keys() {
        let f = Poly::from_key(k, 1, r);
        if pgl.act(&a5, &f, r)? == f {
            count += 1;
        }
    }
    Ok(count)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SigmaFixed {
    /// Number of distinct sets G_f over f in X.
    pub blocks: u64,
    /// Orbits with `PGL(σ^r f) = PGL(f)`, when I_r was enumerated.
    pub direct: Option<u64>,
}

/// PGL orbits fixed by σ^r, counted from the G_f blocks of X and, given a
/// PGL partition, directly on orbit representatives.
pub fn sigma_fixed_orbit_count(
    table: &DeltaTable,
    partition: Option<&OrbitPartition>,
) -> Result<SigmaFixed> {
    let blocks: BTreeSet<&[u64]> = table.members.iter().map(|m| m.g_f.as_slice()).collect();
    let blocks = blocks.len() as u64;
    let direct = match partition {
        None => None,
        Some(p) => {
            if p.group != Group::Pgl || p.n != table.n || p.r != table.r {
                return Err(Error::Domain(
                    "expected the PGL partition of the same I_r".into(),
                ));
            }
            let ctx = FieldCtx::new(p.n)?;
            let kernel = ActionKernel::new(&ctx, p.r)?;
            let mut count = 0;
            for (id, o) in p.orbits.iter().enumerate() {
                let mut k = o.representative;
                for _ in 0..p.r % p.n as usize {
                    k = kernel.frobenius(k);
                }
                if p.orbit_of_key(k) == Some(id) {
                    count += 1;
                }
            }
            Some(count)
        }
    };
    if let Some(d) = direct {
        if d != blocks {
            return Err(Error::Structural(vec![format!(
                "σ^r-fixed orbits: {blocks} G_f blocks but {d} by direct test"
            )]));
        }
    }
    Ok(SigmaFixed { blocks, direct })
}

/// For each divisor-flagged orbit, its members in X must be exactly G_f.
pub fn lastlem_violations(partition: &OrbitPartition, table: &DeltaTable) -> Vec<String> {
    let mut by_orbit: BTreeMap<usize, BTreeSet<u64>> = BTreeMap::new();
    let mut out = Vec::new();
    for m in &table.members {
        match partition.orbit_of_key(m.key) {
            Some(id) => {
                by_orbit.entry(id).or_default().insert(m.key);
            }
            None => out.push(format!("{} missing from the partition", m.poly)),
        }
    }
    for (id, o) in partition.orbits.iter().enumerate() {
        match (o.divisor_flag, by_orbit.get(&id)) {
            (true, Some(set)) => {
                for &k in set {
                    let g_f: BTreeSet<u64> = table
                        .member(k)
                        .map(|m| m.g_f.iter().copied().collect())
                        .unwrap_or_default();
                    if &g_f != set {
                        out.push(format!(
                            "orbit of {}: X-members differ from G_f",
                            o.representative
                        ));
                    }
                }
            }
            (false, None) => {}
            _ => out.push(format!(
                "orbit of {}: divisor flag inconsistent",
                o.representative
            )),
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GcdIdentity {
    pub n: u64,
    pub r: u64,
    #[serde(serialize_with = "ser_display")]
    pub gcd: BigUint,
    #[serde(serialize_with = "ser_display")]
    pub expected: BigUint,
    pub holds: bool,
}

/// `gcd(2^{n r/2} + 1, 2^r - 1) = 2^{r/2} + 1` for even r coprime to n.
pub fn verify_gcd_identity(n: u64, r: u64) -> Result<GcdIdentity> {
    if r == 0 || r % 2 == 1 || gcd(r, n) != 1 {
        return Err(Error::Domain(format!(
            "need even r coprime to n, got n = {n}, r = {r}"
        )));
    }
    let half = r / 2;
    let lhs = BigUint::one() << (n * half) as usize;
    let g = (lhs + 1u32).gcd(&((BigUint::one() << r as usize) - 1u32));
    let expected = (BigUint::one() << half as usize) + 1u32;
    Ok(GcdIdentity {
        n,
        r,
        holds: g == expected,
        gcd: g,
        expected,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorizationReport {
    pub n: u32,
    pub r: usize,
    pub r0: usize,
    pub degree: usize,
    pub expected_degree: usize,
    /// The A5-fixed binary factor whose root is used as α.
    pub f: Option<String>,
    /// α in GF(2^r) with its default modulus.
    pub alpha: Option<u64>,
    pub roots_in_gf2r: usize,
    pub thetas_checked: usize,
    pub linear_factor_free: bool,
    pub quadratic_divides: bool,
    pub r0_even: bool,
    pub failures: Vec<String>,
}

impl FactorizationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Builds `F = gcd(x^{q^{r0}+1} + x + 1, x^{2^r} + x)` and checks its degree,
/// its roots `α` and `θ_γ = (γ²+γ+1)/(α+γ) + γ + 1` for γ in GF(2^{r0}), and
/// its factors of degree 1 and 2 over F_q.
pub fn verify_f_factorization(n: u32, r: usize) -> Result<FactorizationReport> {
    if r % 3 != 0 || r == 6 || r < 3 {
        return Err(Error::Domain(format!("need 3 | r and r != 6, got r = {r}")));
    }
    if r > 15 {
        return Err(Error::Capacity {
            resource: "degree r for the factorization check".into(),
            required: r as u128,
            limit: 15,
        });
    }
    if gcd(n as u64, r as u64) != 1 {
        return Err(Error::Domain(format!(
            "need gcd(r, n) = 1, got n = {n}, r = {r}"
        )));
    }
    let r0 = r / 3;
    let fq = FieldCtx::new(n)?;
    let ring = PolyRing::new(&fq);
    let big_m = ring.add(&Poly::monomial(1, 1 << r), &Poly::x());

    let mut t = Poly::x();
    for _ in 0..n as usize * r0 {
        t = ring.sqr_mod(&t, &big_m);
    }
    let p = ring.rem(
        &ring.add(&ring.mul(&t, &Poly::x()), &Poly::new(vec![1, 1])),
        &big_m,
    );
    let f_big = ring.gcd(&p, &big_m);
    let degree = f_big.degree().unwrap_or(0);
    let expected_degree = (1 << r0) + 1;
    let mut failures = Vec::new();
    if degree != expected_degree {
        failures.push(format!("deg F = {degree}, expected {expected_degree}"));
    }
    if !f_big.is_binary() {
        failures.push("F is not binary".into());
    }

    let lin = ring.gcd(
        &f_big,
        &ring.add(
            &ring.powmod_x(&f_big, n as u64),
            &ring.rem(&Poly::x(), &f_big),
        ),
    );
    let linear_factor_free = lin.degree() == Some(0);
    if !linear_factor_free {
        failures.push(format!("F has {} roots in F_q", lin.degree().unwrap_or(0)));
    }
    let quadratic_divides = ring.rem(&f_big, &Poly::new(vec![1, 1, 1])).is_zero();
    let r0_even = r0 % 2 == 0;
    if quadratic_divides != r0_even {
        failures.push(format!("x^2+x+1 | F is {quadratic_divides} but r0 = {r0}"));
    }

    let k = FieldCtx::new(r as u32)?;
    let kring = PolyRing::new(&k);
    let roots = kring.roots(&f_big);
    if roots.len() != degree {
        failures.push(format!(
            "{} distinct roots in GF(2^{r}) for degree {degree}",
            roots.len()
        ));
    }
    let f2 = FieldCtx::new(1)?;
    let pgl2 = Pgl::new(&f2);
    let a5 = binary_matrices()[4];
    let mut chosen = None;
    for &alpha in &roots {
        let conj: BTreeSet<u64> = (0..r as u64).map(|i| k.frobenius(alpha, i)).collect();
        if conj.len() != r {
            continue;
        }
        let conj: Vec<u64> = conj.into_iter().collect();
        let minpoly = kring.from_roots(&conj);
        if !minpoly.is_binary() {
            failures.push("minimal polynomial of a root is not binary".into());
            break;
        }
        if pgl2.act(&a5, &minpoly, r)? == minpoly {
            chosen = Some((alpha, minpoly));
            break;
        }
    }
    let mut thetas_checked = 0;
    match &chosen {
        None => failures.push("no A5-fixed binary factor of degree r".into()),
        Some((alpha, _)) => {
            let alpha = *alpha;
            let one = 1u64;
            if k.add(k.sqr(alpha), k.add(alpha, one)) == 0 {
                failures.push("α² + α + 1 = 0".into());
            }
            let sub = FieldCtx::new(r0 as u32)?;
            let emb = Embedding::new(&sub, &k)?;
            let mut seen = BTreeSet::from([alpha]);
            for g in sub.elements() {
                let gamma = emb.embed(g);
                let den = k.add(alpha, gamma);
                if den == 0 {
                    failures.push(format!("α + γ = 0 at γ = {g}"));
                    continue;
                }
                let numer = k.add(k.sqr(gamma), k.add(gamma, one));
                let theta = k.add(k.div(numer, den), k.add(gamma, one));
                if kring.eval(&f_big, theta) != 0 {
                    failures.push(format!("θ_γ is not a root at γ = {g}"));
                }
                if !seen.insert(theta) {
                    failures.push(format!("θ_γ repeats a root at γ = {g}"));
                }
                thetas_checked += 1;
            }
            if seen.len() == degree && seen.iter().copied().collect::<Vec<_>>() != roots {
                failures.push("α and the θ_γ are not the roots of F".into());
            }
        }
    }
    Ok(FactorizationReport {
        n,
        r,
        r0,
        degree,
        expected_degree,
        f: chosen.as_ref().map(|(_, f)| f.to_string()),
        alpha: chosen.map(|(a, _)| a),
        roots_in_gf2r: roots.len(),
        thetas_checked,
        linear_factor_free,
        quadratic_divides,
        r0_even,
        failures,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixRelation {
    pub n: u32,
    pub r: usize,
    pub matrices: usize,
    pub polynomials: usize,
    pub fixed_pairs: u64,
    pub mismatches: Vec<String>,
}

/// Over all of I_r and `samples` random matrices A (the identity and the
/// six binary matrices first), checks `A f = f` iff `(A^T)^{-1} ∘ f = f`.
pub fn fix_relation_check(
    n: u32,
    r: usize,
    samples: usize,
    seed: u64,
    limits: &Limits,
) -> Result<FixRelation> {
    use rand::{Rng, SeedableRng};
    limits.check_enumeration(n, r)?;
    let ctx = FieldCtx::new(n)?;
    let pgl = Pgl::new(&ctx);
    let keys: Vec<u64> = IrreducibleSet::sieve(&ctx, r).keys().collect();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut mats: Vec<ProjMat> = binary_matrices().to_vec();
    while mats.len() < samples {
        let e: [u64; 4] = std::array::from_fn(|_| rng.gen_range(0..ctx.size()));
        if let Ok(m) = pgl.mat(e[0], e[1], e[2], e[3]) {
            mats.push(m);
        }
    }
    mats.truncate(samples);
    let results: Vec<Result<(u64, Vec<String>)>> = mats
        .par_iter()
        .map(|m| {
            let dual = pgl.inv(&pgl.transpose(m));
            let mut fixed = 0;
            let mut bad = Vec::new();
            for &k in &keys {
                let f = Poly::from_key(k, n, r);
                let a = pgl.act(m, &f, r)? == f;
                let b = pgl.act_circ(&dual, &f, r)? == f;
                fixed += a as u64;
                if a != b {
                    bad.push(format!("A = {m}, f = {f}"));
                }
            }
            Ok((fixed, bad))
        })
        .collect();
    let mut fixed_pairs = 0;
    let mut mismatches = Vec::new();
    for res in results {
        let (f, b) = res?;
        fixed_pairs += f;
        mismatches.extend(b);
    }
    Ok(FixRelation {
        n,
        r,
        matrices: mats.len(),
        polynomials: keys.len(),
        fixed_pairs,
        mismatches,
    })
}

fn ser_opt_ratio<S: Serializer>(
    x: &Option<BigRational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.collect_str(v),
        None => s.serialize_none(),
    }
}

/// One quantity seen three ways.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub quantity: String,
    #[serde(serialize_with = "ser_opt_ratio")]
    pub printed: Option<BigRational>,
    #[serde(serialize_with = "ser_opt_ratio")]
    pub census: Option<BigRational>,
    #[serde(serialize_with = "ser_opt_ratio")]
    pub oracle: Option<BigRational>,
    pub printed_agrees: Option<bool>,
    pub census_agrees: Option<bool>,
}

impl Comparison {
    fn new(
        quantity: &str,
        printed: Option<BigRational>,
        census: Option<BigRational>,
        oracle: Option<BigRational>,
    ) -> Self {
        let agree = |v: &Option<BigRational>| match (v, &oracle) {
            (Some(a), Some(b)) => Some(a == b),
            _ => None,
        };
        Comparison {
            quantity: quantity.into(),
            printed_agrees: agree(&printed),
            census_agrees: agree(&census),
            printed,
            census,
            oracle,
        }
    }

    pub fn discrepant(&self) -> bool {
        self.printed_agrees == Some(false) || self.census_agrees == Some(false)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Discrepancy,
}

/// Closed forms against brute force for one `(n, r)`; the oracle values
/// are authoritative.
#[derive(Clone, Debug, Serialize)]
pub struct Adjudication {
    pub n: u32,
    pub r: usize,
    pub census: CensusReport,
    pub delta: Option<DeltaCounts>,
    pub sigma_fixed: Option<SigmaFixed>,
    pub pgl_orbits: Option<u64>,
    pub pgammal_orbits: Option<u64>,
    pub burnside: Option<Burnside>,
    /// Checks skipped for capacity, with the reason.
    pub skipped: Vec<String>,
    pub structural_violations: Vec<String>,
    pub comparisons: Vec<Comparison>,
    pub verdict: Verdict,
}

fn int(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn exact(e: census::Exact) -> Option<BigRational> {
    e.ok().map(BigRational::from_integer)
}

/// Runs the census and every oracle that fits the limits, and compares.
/// Capacity shortfalls are recorded as skips; structural failures and
/// internal errors are returned as errors.
pub fn adjudicate(n: u32, r: usize, force: bool, limits: &Limits) -> Result<Adjudication> {
    let report = census::orbit_count_total(n as u64, r as u64, force)?;
    let mut skipped = Vec::new();
    let mut keep = |res: Result<()>, what: &str| -> Result<bool> {
        match res {
            Ok(()) => Ok(true),
            Err(e @ Error::Capacity { .. }) => {
                skipped.push(format!("{what}: {e}"));
                Ok(false)
            }
            Err(e) => Err(e),
        }
    };

    let table = classify_x(n, r)?;
    let (pgl_part, pgammal_part) = if keep(limits.check_enumeration(n, r), "orbit enumeration")? {
        (
            Some(enumerate_orbits(Group::Pgl, n, r, limits)?),
            Some(enumerate_orbits(Group::PGammaL, n, r, limits)?),
        )
    } else {
        (None, None)
    };
    let burnside = if keep(limits.check_burnside(n, r), "Burnside sum")? {
        Some(burnside_count(n, r, limits)?)
    } else {
        None
    };
    let sigma = sigma_fixed_orbit_count(&table, pgl_part.as_ref())?;

    let mut structural = Vec::new();
    if let (Some(a), Some(b)) = (&pgl_part, &pgammal_part) {
        structural.extend(orbit_structure_violations(a, b));
        structural.extend(lastlem_violations(a, &table));
    }
    if !structural.is_empty() {
        return Err(Error::Structural(structural));
    }

    let c = &table.counts;
    let pgl_count = pgl_part.as_ref().map(|p| p.len() as u64);
    let mut comparisons = vec![
        Comparison::new(
            "|X|",
            exact(census::count_x(r as u64)),
            Some(report.x_count.clone()),
            Some(int(c.x)),
        ),
        Comparison::new(
            "|Δ2|",
            exact(census::count_delta2(r as u64)),
            Some(report.delta2.clone()),
            Some(int(c.delta2)),
        ),
        Comparison::new(
            "|Δ5|",
            Some(report.delta5_printed.clone()),
            Some(report.delta5.clone()),
            Some(int(c.delta5)),
        ),
        Comparison::new(
            "s0",
            Some(report.s0_printed.clone()),
            Some(report.s0.clone()),
            Some(int(sigma.blocks)),
        ),
        Comparison::new(
            "s0 (Δ sums)",
            None,
            Some(report.s0.clone()),
            Some(table.s0()),
        ),
        Comparison::new(
            "PGL orbits",
            Some(report.pgl_orbits_printed.clone()),
            Some(report.pgl_orbits.clone()),
            pgl_count.map(int),
        ),
        Comparison::new(
            "s",
            Some(report.s_printed.clone()),
            Some(report.s.clone()),
            pgammal_part.as_ref().map(|p| int(p.len() as u64)),
        ),
    ];
    if let Some(b) = &burnside {
        comparisons.push(Comparison::new(
            "PGL orbits (Burnside)",
            None,
            pgl_count.map(int),
            Some(int(b.orbits)),
        ));
    }
    if r % 3 == 0 {
        let a5 = count_a5_fixed_f2_bruteforce(r)?;
        comparisons.push(Comparison::new(
            "N(F2, r)",
            None,
            exact(census::count_a5_invariant_f2(r as u64)?),
            Some(int(a5)),
        ));
    }
    let verdict = if comparisons.iter().any(Comparison::discrepant) {
        Verdict::Discrepancy
    } else {
        Verdict::Pass
    };
    Ok(Adjudication {
        n,
        r,
        census: report,
        delta: Some(table.counts),
        sigma_fixed: Some(sigma),
        pgl_orbits: pgl_count,
        pgammal_orbits: pgammal_part.map(|p| p.len() as u64),
        burnside,
        skipped,
        structural_violations: Vec::new(),
        comparisons,
        verdict,
    })
}
