//! Binary fields GF(2^m) in the polynomial basis.
//!
//! Elements are plain `u64` values: bit `i` is the coefficient of `x^i`.
//! [`FieldCtx`] carries the modulus and does the arithmetic; [`FieldElem`]
//! is a checked pairing of a value with its field.

use std::sync::Arc;

use crate::arith::FactoredInt;
use crate::error::{Error, Result};
use crate::poly::{Poly, PolyRing};

/// Arithmetic in GF(2)[x] on machine words.
pub mod gf2x {
    pub fn degree(a: u128) -> i32 {
        127 - a.leading_zeros() as i32
    }

    pub fn clmul(a: u64, b: u64) -> u128 {
        let a = a as u128;
        let mut b = b;
        let mut acc = 0u128;
        while b != 0 {
            let i = b.trailing_zeros();
            acc ^= a << i;
            b &= b - 1;
        }
        acc
    }

    pub fn rem(mut a: u128, m: u64) -> u64 {
        let dm = degree(m as u128);
        let m = m as u128;
        loop {
            let da = degree(a);
            if da < dm {
                return a as u64;
            }
            a ^= m << (da - dm);
        }
    }

    pub fn divrem(mut a: u64, b: u64) -> (u64, u64) {
        let db = degree(b as u128);
        let mut q = 0u64;
        loop {
            let da = degree(a as u128);
            if da < db {
                return (q, a);
            }
            q |= 1 << (da - db);
            a ^= b << (da - db);
        }
    }

    pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
        rem(clmul(a, b), m)
    }

    pub fn gcd(mut a: u64, mut b: u64) -> u64 {
        while b != 0 {
            let r = divrem(a, b).1;
            a = b;
            b = r;
        }
        a
    }

    /// `x^(2^k) mod f`.
    pub fn x_pow_2k(k: u32, f: u64) -> u64 {
        let mut t = rem(2, f);
        for _ in 0..k {
            t = mulmod(t, t, f);
        }
        t
    }

    pub fn is_irreducible(f: u64) -> bool {
        let m = degree(f as u128);
        if m < 1 {
            return false;
        }
        if m == 1 {
            return true;
        }
        let m = m as u32;
        if x_pow_2k(m, f) != rem(2, f) {
            return false;
        }
        crate::arith::FactoredInt::new(m as u64)
            .primes()
            .all(|p| gcd(f, x_pow_2k(m / p as u32, f) ^ 2) == 1)
    }

    /// A nontrivial irreducible factor of a reducible `f`.
    pub fn some_irreducible_factor(f: u64) -> u64 {
        if f & 1 == 0 {
            return 2;
        }
        let m = degree(f as u128) as u32;
        for d in 1..=m / 2 {
            let g = gcd(f, x_pow_2k(d, f) ^ 2);
            if degree(g as u128) > 0 {
                return split_equal_degree(g, d);
            }
        }
        f
    }

    fn split_equal_degree(g: u64, d: u32) -> u64 {
        if degree(g as u128) as u32 == d {
            return g;
        }
        for h in 2u64.. {
            let h = rem(h as u128, g);
            let mut t = h;
            let mut tr = h;
            for _ in 1..d {
                t = mulmod(t, t, g);
                tr ^= t;
            }
            let s = gcd(g, tr);
            let ds = degree(s as u128);
            if ds > 0 && ds < degree(g as u128) {
                return split_equal_degree(s, d);
            }
        }
        unreachable!()
    }
}

const TABLE_MAX_DEGREE: u32 = 16;

#[derive(Debug)]
struct Tables {
    log: Vec<u32>,
    exp: Vec<u64>,
}

#[derive(Debug)]
struct Inner {
    m: u32,
    modulus: u64,
    order: u64,
    order_primes: Vec<u64>,
    tables: Option<Tables>,
}

/// The field GF(2^m) with a fixed irreducible modulus. Cloning is cheap.
#[derive(Clone, Debug)]
pub struct FieldCtx {
    inner: Arc<Inner>,
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.m() == other.m() && self.modulus() == other.modulus()
    }
}

impl Eq for FieldCtx {}

impl FieldCtx {
    /// Field with the least irreducible modulus of degree `m`.
    pub fn new(m: u32) -> Result<Self> {
        Self::with_modulus(m, default_modulus(m)?)
    }

    /// `modulus` includes the leading bit `x^m`.
    pub fn with_modulus(m: u32, modulus: u64) -> Result<Self> {
        if !(1..=63).contains(&m) {
            return Err(Error::InvalidModulus(format!("degree {m} outside 1..=63")));
        }
        if gf2x::degree(modulus as u128) != m as i32 {
            return Err(Error::InvalidModulus(format!(
                "{modulus:#x} does not have degree {m}"
            )));
        }
        if !gf2x::is_irreducible(modulus) {
            return Err(Error::ReducibleModulus {
                modulus,
                factor: gf2x::some_irreducible_factor(modulus),
            });
        }
        let order = (1u64 << m) - 1;
        let order_primes = FactoredInt::new(order).primes().collect();
        let mut inner = Inner {
            m,
            modulus,
            order,
            order_primes,
            tables: None,
        };
        if m <= TABLE_MAX_DEGREE {
            inner.tables = Some(build_tables(&inner));
        }
        Ok(FieldCtx {
            inner: Arc::new(inner),
        })
    }

    pub fn m(&self) -> u32 {
        self.inner.m
    }

    pub fn modulus(&self) -> u64 {
        self.inner.modulus
    }

    /// Number of elements, `2^m`.
    pub fn size(&self) -> u64 {
        self.inner.order + 1
    }

    /// Order of the multiplicative group, `2^m - 1`.
    pub fn mult_order(&self) -> u64 {
        self.inner.order
    }

    pub fn contains(&self, a: u64) -> bool {
        a <= self.inner.order
    }

    pub fn elements(&self) -> std::ops::Range<u64> {
        0..self.size()
    }

    pub fn elem(&self, value: u64) -> Result<FieldElem<'_>> {
        if !self.contains(value) {
            return Err(Error::Domain(format!(
                "{value} is not an element of GF(2^{})",
                self.m()
            )));
        }
        Ok(FieldElem { ctx: self, value })
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        match &self.inner.tables {
            Some(t) => {
                if a == 0 || b == 0 {
                    0
                } else {
                    t.exp[(t.log[a as usize] + t.log[b as usize]) as usize]
                }
            }
            None => gf2x::mulmod(a, b, self.inner.modulus),
        }
    }

    #[inline]
    pub fn sqr(&self, a: u64) -> u64 {
        self.mul(a, a)
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        if let Some(t) = &self.inner.tables {
            if a == 0 {
                return u64::from(e == 0);
            }
            let l = (t.log[a as usize] as u128 * e as u128 % self.inner.order as u128) as usize;
            return t.exp[l];
        }
        let mut base = a;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.sqr(base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.inner.tables {
            Some(t) => t.exp[(self.inner.order as u32 - t.log[a as usize]) as usize],
            None => self.pow(a, self.inner.order - 1),
        })
    }

    /// `a / b`; panics when `b = 0`.
    pub fn div(&self, a: u64, b: u64) -> u64 {
        self.mul(a, self.inv(b).expect("division by zero"))
    }

    /// `a^(2^i)`, with `i` reduced mod `m`.
    pub fn frobenius(&self, a: u64, i: u64) -> u64 {
        let mut x = a;
        for _ in 0..i % self.m() as u64 {
            x = self.sqr(x);
        }
        x
    }

    pub fn element_order(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::Domain("order of zero".into()));
        }
        let mut k = self.inner.order;
        for &p in &self.inner.order_primes {
            while k % p == 0 && self.pow(a, k / p) == 1 {
                k /= p;
            }
        }
        Ok(k)
    }

    /// Least element (by encoding) generating the multiplicative group.
    pub fn primitive_element(&self) -> u64 {
        if let Some(t) = &self.inner.tables {
            return t.exp[1];
        }
        (1..self.size())
            .find(|&a| self.element_order(a) == Ok(self.inner.order))
            .expect("multiplicative group is cyclic")
    }

    /// Absolute trace to GF(2).
    pub fn trace(&self, a: u64) -> u64 {
        let mut t = a;
        let mut acc = a;
        for _ in 1..self.m() {
            t = self.sqr(t);
            acc ^= t;
        }
        acc
    }
}

fn default_modulus(m: u32) -> Result<u64> {
    if !(1..=63).contains(&m) {
        return Err(Error::InvalidModulus(format!("degree {m} outside 1..=63")));
    }
    let lead = 1u64 << m;
    (lead..=lead | (lead - 1))
        .find(|&f| gf2x::is_irreducible(f))
        .ok_or_else(|| Error::Internal(format!("no irreducible of degree {m}")))
}

fn build_tables(inner: &Inner) -> Tables {
    let order = inner.order;
    let size = (order + 1) as usize;
    let primitive = (1..=order)
        .find(|&a| {
            inner.order_primes.iter().all(|&p| {
                let mut acc = 1u64;
                let mut base = a;
                let mut e = order / p;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = gf2x::mulmod(acc, base, inner.modulus);
                    }
                    base = gf2x::mulmod(base, base, inner.modulus);
                    e >>= 1;
                }
                acc != 1
            })
        })
        .expect("multiplicative group is cyclic");
    let mut exp = vec![0u64; 2 * size];
    let mut log = vec![0u32; size];
    let mut x = 1u64;
    for (i, e) in exp.iter_mut().take(order as usize).enumerate() {
        *e = x;
        log[x as usize] = i as u32;
        x = gf2x::mulmod(x, primitive, inner.modulus);
    }
    for i in order as usize..2 * size {
        exp[i] = exp[i - order as usize];
    }
    Tables { log, exp }
}

/// An element bound to its field; operations check that both operands share
/// the same field.
#[derive(Clone, Copy, Debug)]
pub struct FieldElem<'a> {
    ctx: &'a FieldCtx,
    value: u64,
}

impl PartialEq for FieldElem<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.value == other.value
    }
}

impl Eq for FieldElem<'_> {}

impl<'a> FieldElem<'a> {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn ctx(&self) -> &'a FieldCtx {
        self.ctx
    }

    fn same(&self, other: &Self) -> Result<()> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        Ok(FieldElem {
            ctx: self.ctx,
            value: self.value ^ other.value,
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        Ok(FieldElem {
            ctx: self.ctx,
            value: self.ctx.mul(self.value, other.value),
        })
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(FieldElem {
            ctx: self.ctx,
            value: self.ctx.inv(self.value)?,
        })
    }

    pub fn pow(&self, e: u64) -> Self {
        FieldElem {
            ctx: self.ctx,
            value: self.ctx.pow(self.value, e),
        }
    }

    pub fn frobenius(&self, i: u64) -> Self {
        FieldElem {
            ctx: self.ctx,
            value: self.ctx.frobenius(self.value, i),
        }
    }

    pub fn order(&self) -> Result<u64> {
        self.ctx.element_order(self.value)
    }
}

/// Field homomorphism GF(2^m) -> GF(2^(mk)) sending `x` to a chosen root of
/// the source modulus.
#[derive(Clone, Debug)]
pub struct Embedding {
    src: FieldCtx,
    dst: FieldCtx,
    image_of_generator: u64,
    basis: Vec<u64>,
    // Rows with distinct leading bits, sorted by leading bit descending,
    // paired with the source element they come from.
    echelon: Vec<(u64, u64)>,
}

impl Embedding {
    /// Uses the least root (by encoding) of the source modulus.
    pub fn new(src: &FieldCtx, dst: &FieldCtx) -> Result<Self> {
        if dst.m() % src.m() != 0 {
            return Err(Error::Domain(format!(
                "GF(2^{}) does not embed in GF(2^{})",
                src.m(),
                dst.m()
            )));
        }
        let ring = PolyRing::new(dst);
        let modulus = Poly::from_binary_bits(src.modulus());
        let roots = ring.roots(&modulus);
        let image = *roots
            .first()
            .ok_or_else(|| Error::Internal("source modulus has no root".into()))?;
        Self::with_image(src, dst, image)
    }

    pub fn with_image(src: &FieldCtx, dst: &FieldCtx, image: u64) -> Result<Self> {
        let ring = PolyRing::new(dst);
        if ring.eval(&Poly::from_binary_bits(src.modulus()), image) != 0 {
            return Err(Error::Domain(
                "image is not a root of the source modulus".into(),
            ));
        }
        let mut basis = Vec::with_capacity(src.m() as usize);
        let mut t = 1u64;
        for _ in 0..src.m() {
            basis.push(t);
            t = dst.mul(t, image);
        }
        let mut echelon: Vec<(u64, u64)> = Vec::new();
        for (j, &b) in basis.iter().enumerate() {
            let (mut row, mut combo) = (b, 1u64 << j);
            for &(r, c) in &echelon {
                if row ^ r < row {
                    row ^= r;
                    combo ^= c;
                }
            }
            if row == 0 {
                return Err(Error::Internal("embedding basis is dependent".into()));
            }
            echelon.push((row, combo));
            echelon.sort_by_key(|e| std::cmp::Reverse(e.0));
        }
        Ok(Embedding {
            src: src.clone(),
            dst: dst.clone(),
            image_of_generator: image,
            basis,
            echelon,
        })
    }

    pub fn src(&self) -> &FieldCtx {
        &self.src
    }

    pub fn dst(&self) -> &FieldCtx {
        &self.dst
    }

    pub fn image_of_generator(&self) -> u64 {
        self.image_of_generator
    }

    pub fn embed(&self, e: u64) -> u64 {
        let mut acc = 0u64;
        let mut bits = e;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            acc ^= self.basis[j];
            bits &= bits - 1;
        }
        acc
    }

    pub fn embed_elem<'a>(&'a self, e: &FieldElem<'_>) -> Result<FieldElem<'a>> {
        if *e.ctx() != self.src {
            return Err(Error::ContextMismatch);
        }
        Ok(FieldElem {
            ctx: &self.dst,
            value: self.embed(e.value()),
        })
    }

    /// Preimage of `y`, or `None` when `y` lies outside the image.
    pub fn pull_back(&self, y: u64) -> Option<u64> {
        let mut y = y;
        let mut combo = 0u64;
        for &(row, c) in &self.echelon {
            if y ^ row < y {
                y ^= row;
                combo ^= c;
            }
        }
        (y == 0).then_some(combo)
    }

    pub fn embed_poly(&self, f: &Poly) -> Poly {
        Poly::new(f.coeffs().iter().map(|&c| self.embed(c)).collect())
    }

    pub fn pull_back_poly(&self, f: &Poly) -> Option<Poly> {
        f.coeffs()
            .iter()
            .map(|&c| self.pull_back(c))
            .collect::<Option<Vec<_>>>()
            .map(Poly::new)
    }
}
