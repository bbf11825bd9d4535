//! Polynomials over a binary field: arithmetic, Rabin irreducibility,
//! enumeration of monic irreducibles and root extraction.

use std::fmt;

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::arith::FactoredInt;
use crate::error::{Error, Result};
use crate::gf2::FieldCtx;
use crate::linmap::LinearMap;

/// Coefficients in ascending degree, without trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    coeffs: Vec<u64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![1] }
    }

    pub fn x() -> Self {
        Poly { coeffs: vec![0, 1] }
    }

    pub fn monomial(c: u64, deg: usize) -> Self {
        let mut coeffs = vec![0; deg + 1];
        coeffs[deg] = c;
        Poly::new(coeffs)
    }

    /// Binary polynomial from its bit encoding (bit `i` = coefficient of `x^i`).
    pub fn from_binary_bits(bits: u64) -> Self {
        Poly::new((0..64).map(|i| bits >> i & 1).collect())
    }

    /// Monic polynomial of degree `r` whose lower coefficients are packed in
    /// `key`, `n` bits each, constant term in the lowest bits.
    pub fn from_key(key: u64, n: u32, r: usize) -> Self {
        let mask = (1u64 << n) - 1;
        let mut coeffs: Vec<u64> = (0..r).map(|i| key >> (n as usize * i) & mask).collect();
        coeffs.push(1);
        Poly { coeffs }
    }

    /// Inverse of [`Poly::from_key`]; `self` must be monic with `deg * n <= 64`.
    pub fn key(&self, n: u32) -> u64 {
        let d = self.coeffs.len().saturating_sub(1);
        self.coeffs[..d]
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &c)| acc | c << (n as usize * i))
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn is_binary(&self) -> bool {
        self.coeffs.iter().all(|&c| c <= 1)
    }

    /// Bit encoding of a binary polynomial of degree < 64.
    pub fn binary_bits(&self) -> Option<u64> {
        if !self.is_binary() || self.coeffs.len() > 64 {
            return None;
        }
        Some(
            self.coeffs
                .iter()
                .enumerate()
                .fold(0, |acc, (i, &c)| acc | c << i),
        )
    }

    /// Parses the comma-separated text form, e.g. `"1,1,0,1"`.
    pub fn parse(text: &str) -> Result<Self> {
        let coeffs = text
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u64>()
                    .map_err(|e| Error::Parse(format!("coefficient {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(coeffs))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(u64::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Arithmetic on [`Poly`] values over a fixed field.
#[derive(Clone, Copy, Debug)]
pub struct PolyRing<'a> {
    ctx: &'a FieldCtx,
}

impl<'a> PolyRing<'a> {
    pub fn new(ctx: &'a FieldCtx) -> Self {
        PolyRing { ctx }
    }

    pub fn ctx(&self) -> &'a FieldCtx {
        self.ctx
    }

    pub fn check(&self, f: &Poly) -> Result<()> {
        if f.coeffs.iter().all(|&c| self.ctx.contains(c)) {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "coefficient outside GF(2^{})",
                self.ctx.m()
            )))
        }
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        let (long, short) = if a.coeffs.len() >= b.coeffs.len() {
            (a, b)
        } else {
            (b, a)
        };
        let mut c = long.coeffs.clone();
        for (x, &y) in c.iter_mut().zip(&short.coeffs) {
            *x ^= y;
        }
        Poly::new(c)
    }

    pub fn scale(&self, a: &Poly, s: u64) -> Poly {
        Poly::new(a.coeffs.iter().map(|&c| self.ctx.mul(c, s)).collect())
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![0u64; a.coeffs.len() + b.coeffs.len() - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                c[i + j] ^= self.ctx.mul(x, y);
            }
        }
        Poly::new(c)
    }

    pub fn sqr(&self, a: &Poly) -> Poly {
        let mut c = vec![0u64; (2 * a.coeffs.len()).saturating_sub(1)];
        for (i, &x) in a.coeffs.iter().enumerate() {
            c[2 * i] = self.ctx.sqr(x);
        }
        Poly::new(c)
    }

    pub fn monic(&self, f: &Poly) -> Result<Poly> {
        match f.leading() {
            0 => Err(Error::Domain("zero polynomial has no monic form".into())),
            1 => Ok(f.clone()),
            l => Ok(self.scale(f, self.ctx.inv(l)?)),
        }
    }

    pub fn divrem(&self, a: &Poly, b: &Poly) -> Result<(Poly, Poly)> {
        let db = b.degree().ok_or(Error::DivisionByZero)?;
        let inv_lead = self.ctx.inv(b.leading())?;
        let mut r = a.coeffs.clone();
        if r.len() <= db {
            return Ok((Poly::zero(), a.clone()));
        }
        let mut q = vec![0u64; r.len() - db];
        let support: Vec<(usize, u64)> = b.coeffs[..db]
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(j, &c)| (j, c))
            .collect();
        for i in (db..r.len()).rev() {
            let c = r[i];
            if c == 0 {
                continue;
            }
            let t = self.ctx.mul(c, inv_lead);
            q[i - db] = t;
            r[i] = 0;
            for &(j, bj) in &support {
                r[i - db + j] ^= self.ctx.mul(t, bj);
            }
        }
        r.truncate(db);
        Ok((Poly::new(q), Poly::new(r)))
    }

    pub fn rem(&self, a: &Poly, b: &Poly) -> Poly {
        self.divrem(a, b).expect("nonzero divisor").1
    }

    pub fn mul_mod(&self, a: &Poly, b: &Poly, m: &Poly) -> Poly {
        self.rem(&self.mul(a, b), m)
    }

    pub fn sqr_mod(&self, a: &Poly, m: &Poly) -> Poly {
        self.rem(&self.sqr(a), m)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            self.monic(&a).expect("nonzero")
        }
    }

    /// Returns `(g, s, t)` with `g = s a + t b` monic.
    pub fn ext_gcd(&self, a: &Poly, b: &Poly) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = self.divrem(&r0, &r1).expect("nonzero");
            r0 = std::mem::replace(&mut r1, r);
            let s = self.add(&s0, &self.mul(&q, &s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = self.add(&t0, &self.mul(&q, &t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let l = self.ctx.inv(r0.leading()).expect("nonzero");
        (self.scale(&r0, l), self.scale(&s0, l), self.scale(&t0, l))
    }

    /// Inverse of `a` modulo `m`, if it exists.
    pub fn inv_mod(&self, a: &Poly, m: &Poly) -> Option<Poly> {
        let (g, s, _) = self.ext_gcd(&self.rem(a, m), m);
        (g == Poly::one()).then(|| self.rem(&s, m))
    }

    pub fn eval(&self, f: &Poly, x: u64) -> u64 {
        f.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| self.ctx.mul(acc, x) ^ c)
    }

    /// `x^(2^k) mod f`.
    pub fn powmod_x(&self, f: &Poly, k: u64) -> Poly {
        let mut t = self.rem(&Poly::x(), f);
        for _ in 0..k {
            t = self.sqr_mod(&t, f);
        }
        t
    }

    /// Rabin test over the ring's field.
    pub fn is_irreducible(&self, f: &Poly) -> bool {
        let r = match f.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(r) => r as u64,
        };
        let n = self.ctx.m() as u64;
        let x = self.rem(&Poly::x(), f);
        if self.powmod_x(f, n * r) != x {
            return false;
        }
        FactoredInt::new(r).primes().all(|p| {
            let h = self.add(&self.powmod_x(f, n * (r / p)), &x);
            self.gcd(f, &h).degree() == Some(0)
        })
    }

    /// Whether `f` divides `x^(2^r) + x`, for `f` monic of degree `r >= 3`.
    pub fn divides_x2r_x(&self, f: &Poly, r: usize) -> Result<bool> {
        if r < 3 || f.degree() != Some(r) || !f.is_monic() {
            return Err(Error::Domain(format!(
                "expected a monic polynomial of degree r = {r} >= 3"
            )));
        }
        Ok(self.powmod_x(f, r as u64) == Poly::x())
    }

    /// Applies `a -> a^(2^i)` to every coefficient.
    pub fn frobenius_on_poly(&self, f: &Poly, i: u64) -> Poly {
        Poly::new(f.coeffs.iter().map(|&c| self.ctx.frobenius(c, i)).collect())
    }

    /// The distinct roots of `f` in the field, in ascending encoding order.
    pub fn roots(&self, f: &Poly) -> Vec<u64> {
        if f.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let f = self.monic(f).expect("nonzero");
        let x = self.rem(&Poly::x(), &f);
        let frob = self.powmod_x(&f, self.ctx.m() as u64);
        let split = self.gcd(&f, &self.add(&frob, &x));
        let mut out = Vec::new();
        self.split_linear(&split, &mut out);
        out.sort_unstable();
        out
    }

    // `g` is monic, squarefree and a product of linear factors.
    fn split_linear(&self, g: &Poly, out: &mut Vec<u64>) {
        match g.degree() {
            None | Some(0) => {}
            Some(1) => out.push(g.coeffs[0]),
            Some(d) => {
                for j in 0..self.ctx.m() {
                    let beta = Poly::monomial(1u64 << j, 1);
                    let mut t = self.rem(&beta, g);
                    let mut tr = t.clone();
                    for _ in 1..self.ctx.m() {
                        t = self.sqr_mod(&t, g);
                        tr = self.add(&tr, &t);
                    }
                    let h = self.gcd(g, &tr);
                    let dh = h.degree().unwrap_or(0);
                    if dh > 0 && dh < d {
                        let other = self.divrem(g, &h).expect("nonzero").0;
                        self.split_linear(&h, out);
                        self.split_linear(&other, out);
                        return;
                    }
                }
                unreachable!("trace forms separate distinct roots");
            }
        }
    }

    /// `prod (x - root)` over the given roots.
    pub fn from_roots(&self, roots: &[u64]) -> Poly {
        roots.iter().fold(Poly::one(), |acc, &a| {
            self.mul(&acc, &Poly::new(vec![a, 1]))
        })
    }
}

/// Monic irreducible polynomials of degree `r`, ascending by key.
pub struct IrreducibleIter<'a> {
    ring: PolyRing<'a>,
    r: usize,
    cursor: u64,
    end: u64,
}

impl<'a> IrreducibleIter<'a> {
    pub fn new(ctx: &'a FieldCtx, r: usize) -> Self {
        assert!(r >= 1);
        let bits = ctx.m() as usize * r;
        assert!(bits < 64, "key space too large");
        IrreducibleIter {
            ring: PolyRing::new(ctx),
            r,
            cursor: 0,
            end: 1u64 << bits,
        }
    }
}

impl Iterator for IrreducibleIter<'_> {
    type Item = Poly;

    fn next(&mut self) -> Option<Poly> {
        let n = self.ring.ctx.m();
        while self.cursor < self.end {
            let f = Poly::from_key(self.cursor, n, self.r);
            self.cursor += 1;
            if self.ring.is_irreducible(&f) {
                return Some(f);
            }
        }
        None
    }
}

pub fn iter_irreducible(ctx: &FieldCtx, r: usize) -> IrreducibleIter<'_> {
    IrreducibleIter::new(ctx, r)
}

/// The monic irreducibles of degree `r` as a bitmap over packed keys, with
/// rank support so each member has a dense index.
#[derive(Clone, Debug)]
pub struct IrreducibleSet {
    n: u32,
    r: usize,
    bits: Vec<u64>,
    rank: Vec<u32>,
    len: u64,
}

impl IrreducibleSet {
    /// Strikes out reducible keys by multiplying every irreducible `g` of
    /// degree `d <= r/2` with every monic cofactor of degree `r - d`; the
    /// product is GF(2)-linear in the cofactor's bits. The result does not
    /// depend on the thread count.
    pub fn sieve(ctx: &FieldCtx, r: usize) -> Self {
        let n = ctx.m() as usize;
        let key_bits = n * r;
        assert!(r >= 1 && key_bits < 64, "key space too large");
        let total = 1u64 << key_bits;
        let words = total.div_ceil(64) as usize;
        let sieve: Vec<AtomicU64> = (0..words).map(|_| AtomicU64::new(0)).collect();
        let jobs: Vec<(usize, u64)> = (1..=r / 2)
            .flat_map(|d| {
                IrreducibleSet::sieve(ctx, d)
                    .keys()
                    .map(move |k| (d, k))
                    .collect::<Vec<_>>()
            })
            .collect();
        let ring = PolyRing::new(ctx);
        jobs.par_iter().for_each(|&(d, gkey)| {
            let g = Poly::from_key(gkey, n as u32, d);
            let e = r - d;
            // product = x^e g + g h_low, keys drop the leading 1
            let lead_part = pack_low(&shift(&g, e), n, r);
            let images: Vec<u64> = (0..n * e)
                .map(|bit| {
                    let term = Poly::monomial(1u64 << (bit % n), bit / n);
                    pack_low(&ring.mul(&g, &term), n, r)
                })
                .collect();
            let map = LinearMap::from_images(&images);
            for h in 0..1u64 << (n * e) {
                let k = lead_part ^ map.apply(h);
                sieve[(k / 64) as usize].fetch_or(1 << (k % 64), Ordering::Relaxed);
            }
        });
        let mut bits: Vec<u64> = sieve.into_iter().map(|w| !w.into_inner()).collect();
        if total % 64 != 0 {
            bits[words - 1] &= (1u64 << (total % 64)) - 1;
        }
        let mut rank = Vec::with_capacity(words);
        let mut acc = 0u64;
        for w in &bits {
            rank.push(acc as u32);
            acc += w.count_ones() as u64;
        }
        assert!(acc <= u32::MAX as u64, "too many irreducibles to index");
        IrreducibleSet {
            n: n as u32,
            r,
            bits,
            rank,
            len: acc,
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, key: u64) -> bool {
        self.bits
            .get((key / 64) as usize)
            .is_some_and(|w| w >> (key % 64) & 1 == 1)
    }

    /// Position of `key` in ascending order, if it is a member.
    #[inline]
    pub fn index_of(&self, key: u64) -> Option<u32> {
        let w = (key / 64) as usize;
        let word = *self.bits.get(w)?;
        let b = key % 64;
        if word >> b & 1 == 0 {
            return None;
        }
        Some(self.rank[w] + (word & ((1u64 << b) - 1)).count_ones())
    }

    /// Members in ascending order.
    pub fn keys(&self) -> impl Iterator<Item = u64> + '_ {
        self.bits.iter().enumerate().flat_map(|(w, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                (rest != 0).then(|| {
                    let b = rest.trailing_zeros() as u64;
                    rest &= rest - 1;
                    w as u64 * 64 + b
                })
            })
        })
    }

    /// Members of the word range `words`, with their indices.
    pub fn indexed_keys_in(
        &self,
        words: std::ops::Range<usize>,
    ) -> impl Iterator<Item = (u32, u64)> + '_ {
        let start = self
            .rank
            .get(words.start)
            .copied()
            .unwrap_or(self.len as u32);
        self.bits[words.clone()]
            .iter()
            .enumerate()
            .flat_map(move |(i, &word)| {
                let w = words.start + i;
                let mut rest = word;
                std::iter::from_fn(move || {
                    (rest != 0).then(|| {
                        let b = rest.trailing_zeros() as u64;
                        rest &= rest - 1;
                        w as u64 * 64 + b
                    })
                })
            })
            .zip(start..)
            .map(|(k, i)| (i, k))
    }

    pub fn word_count(&self) -> usize {
        self.bits.len()
    }
}

/// Keys of all monic irreducibles of degree `r`, ascending.
pub fn irreducible_keys(ctx: &FieldCtx, r: usize) -> Vec<u64> {
    IrreducibleSet::sieve(ctx, r).keys().collect()
}

fn shift(f: &Poly, e: usize) -> Poly {
    let mut c = vec![0u64; e];
    c.extend_from_slice(f.coeffs());
    Poly::new(c)
}

// Packs coefficients below degree `r`, `n` bits each.
fn pack_low(f: &Poly, n: usize, r: usize) -> u64 {
    f.coeffs()
        .iter()
        .take(r)
        .enumerate()
        .fold(0, |acc, (i, &c)| acc | c << (n * i))
}

/// Keys of all monic irreducibles of degree `r` by filtering every candidate
/// through the Rabin test.
pub fn irreducible_keys_by_rabin(ctx: &FieldCtx, r: usize) -> Vec<u64> {
    let n = ctx.m();
    let bits = n as usize * r;
    assert!(bits < 64, "key space too large");
    let end = 1u64 << bits;
    let block = 1u64 << 12;
    let ring = PolyRing::new(ctx);
    let blocks: Vec<Vec<u64>> = (0..end.div_ceil(block))
        .into_par_iter()
        .map(|b| {
            (b * block..((b + 1) * block).min(end))
                .filter(|&k| ring.is_irreducible(&Poly::from_key(k, n, r)))
                .collect()
        })
        .collect();
    blocks.concat()
}
