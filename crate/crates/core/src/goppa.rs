//! Irreducible binary Goppa codes over the support L = F_q, their one-bit
//! extensions, and weight enumerators.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::{Embedding, FieldCtx};
use crate::pgl::{Pgl, ProjMat};
use crate::poly::{Poly, PolyRing};

/// Binary word of arbitrary length, bit `i` in word `i / 64`.
pub type Word = Vec<u64>;

fn get_bit(w: &[u64], i: usize) -> bool {
    w[i / 64] >> (i % 64) & 1 == 1
}

fn flip_bit(w: &mut [u64], i: usize) {
    w[i / 64] ^= 1 << (i % 64);
}

fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

fn weight(w: &[u64]) -> usize {
    w.iter().map(|x| x.count_ones() as usize).sum()
}

/// A binary linear code given by independent generator rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BinaryCode {
    pub length: usize,
    pub basis: Vec<Word>,
}

impl BinaryCode {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    fn words_per_row(length: usize) -> usize {
        length.div_ceil(64).max(1)
    }

    /// The row space of `rows`, reduced to an independent basis.
    pub fn from_rows(length: usize, rows: Vec<Word>) -> Self {
        let mut rows = rows;
        let rank = row_reduce(&mut rows, length);
        rows.truncate(rank);
        BinaryCode {
            length,
            basis: rows,
        }
    }

    /// Codeword for the message bits `m` (bit i selects row i).
    pub fn encode(&self, m: u64) -> Word {
        let mut w = vec![0; Self::words_per_row(self.length)];
        for (i, row) in self.basis.iter().enumerate() {
            if m >> i & 1 == 1 {
                xor_into(&mut w, row);
            }
        }
        w
    }

    pub fn bit(&self, word: &[u64], i: usize) -> bool {
        get_bit(word, i)
    }
}

// Gaussian elimination to reduced row echelon form; returns the rank and
// leaves the independent rows first.
fn row_reduce(rows: &mut [Word], length: usize) -> usize {
    let mut rank = 0;
    for col in 0..length {
        let Some(p) = (rank..rows.len()).find(|&i| get_bit(&rows[i], col)) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && get_bit(row, col) {
                xor_into(row, &pivot);
            }
        }
        rank += 1;
    }
    rank
}

/// Kernel of the binary matrix whose columns are the bit patterns `cols`
/// (each `height` bits tall).
fn nullspace(cols: &[u64], height: usize) -> Vec<Word> {
    let length = cols.len();
    let wpr = BinaryCode::words_per_row(length);
    let mut rows: Vec<Word> = (0..height)
        .map(|b| {
            let mut w = vec![0; wpr];
            for (j, &c) in cols.iter().enumerate() {
                if c >> b & 1 == 1 {
                    flip_bit(&mut w, j);
                }
            }
            w
        })
        .collect();
    let rank = row_reduce(&mut rows, length);
    let pivots: Vec<usize> = rows[..rank]
        .iter()
        .map(|r| (0..length).find(|&c| get_bit(r, c)).expect("nonzero row"))
        .collect();
    let pivot_set: BTreeSet<usize> = pivots.iter().copied().collect();
    (0..length)
        .filter(|c| !pivot_set.contains(c))
        .map(|free| {
            let mut w = vec![0; wpr];
            flip_bit(&mut w, free);
            for (row, &p) in rows[..rank].iter().zip(&pivots) {
                if get_bit(row, free) {
                    flip_bit(&mut w, p);
                }
            }
            w
        })
        .collect()
}

/// Goppa polynomial `g` over F_q = GF(2^n), a root `alpha` of it in
/// GF(2^{nr}), and the support order.
#[derive(Clone, Debug)]
pub struct GoppaSpec {
    pub n: u32,
    pub r: usize,
    pub g: Poly,
    pub alpha: u64,
    /// Elements of F_q in support order; canonical order is ascending.
    pub support: Vec<u64>,
    pub big: FieldCtx,
    pub embedding: Embedding,
}

impl GoppaSpec {
    fn fields(n: u32, r: usize) -> Result<(FieldCtx, FieldCtx, Embedding)> {
        if n as usize * r > 63 {
            return Err(Error::Capacity {
                resource: "extension degree n*r".into(),
                required: (n as usize * r) as u128,
                limit: 63,
            });
        }
        let fq = FieldCtx::new(n)?;
        let big = FieldCtx::new(n * r as u32)?;
        let emb = Embedding::new(&fq, &big)?;
        Ok((fq, big, emb))
    }

    /// `g` with its least root as α.
    pub fn new(n: u32, g: &Poly) -> Result<Self> {
        let r = g.degree().unwrap_or(0);
        let (fq, big, emb) = Self::fields(n, r)?;
        let ring = PolyRing::new(&fq);
        ring.check(g)?;
        if r < 2 || !g.is_monic() || !ring.is_irreducible(g) {
            return Err(Error::Domain(format!(
                "{g} is not monic irreducible of degree >= 2"
            )));
        }
        let roots = PolyRing::new(&big).roots(&emb.embed_poly(g));
        let alpha = *roots
            .first()
            .ok_or_else(|| Error::Internal("g has no root".into()))?;
        Ok(GoppaSpec {
            n,
            r,
            g: g.clone(),
            alpha,
            support: fq.elements().collect(),
            big,
            embedding: emb,
        })
    }

    /// The Goppa polynomial is the minimal polynomial of `alpha` over F_q,
    /// which must have degree `r`.
    pub fn from_alpha(n: u32, r: usize, alpha: u64) -> Result<Self> {
        let (fq, big, emb) = Self::fields(n, r)?;
        if !big.contains(alpha) {
            return Err(Error::Domain(format!(
                "{alpha} is not in GF(2^{})",
                n as usize * r
            )));
        }
        let conj: BTreeSet<u64> = (0..r as u64)
            .map(|i| big.frobenius(alpha, n as u64 * i))
            .collect();
        if conj.len() != r {
            return Err(Error::Domain(format!(
                "{alpha} has degree below {r} over F_q"
            )));
        }
        let conj: Vec<u64> = conj.into_iter().collect();
        let g = emb
            .pull_back_poly(&PolyRing::new(&big).from_roots(&conj))
            .ok_or_else(|| Error::Internal("minimal polynomial left F_q".into()))?;
        Ok(GoppaSpec {
            n,
            r,
            g,
            alpha,
            support: fq.elements().collect(),
            big,
            embedding: emb,
        })
    }

    pub fn q(&self) -> usize {
        1 << self.n
    }
}

/// The code `{c : Σ c_i / (α - α_i) = 0}` in GF(2^{nr}), i.e. the kernel
/// of the nr x q binary expansion of `H(α)`.
pub fn build_goppa(spec: &GoppaSpec) -> Result<BinaryCode> {
    let big = &spec.big;
    let ring = PolyRing::new(big);
    if ring.eval(&spec.embedding.embed_poly(&spec.g), spec.alpha) != 0 {
        return Err(Error::Domain("α is not a root of g".into()));
    }
    let cols = spec
        .support
        .iter()
        .map(|&a| big.inv(big.add(spec.alpha, spec.embedding.embed(a))))
        .collect::<Result<Vec<u64>>>()?;
    let height = spec.n as usize * spec.r;
    let basis = nullspace(&cols, height);
    if basis.len() + height < cols.len() {
        return Err(Error::Internal("dimension below q - rn".into()));
    }
    Ok(BinaryCode {
        length: cols.len(),
        basis,
    })
}

/// `Σ c_i / (x - α_i) mod g` over F_q; zero for every codeword.
pub fn syndrome_poly(spec: &GoppaSpec, word: &[u64]) -> Result<Poly> {
    let fq = spec.embedding.src().clone();
    let ring = PolyRing::new(&fq);
    let mut acc = Poly::zero();
    for (i, &a) in spec.support.iter().enumerate() {
        if get_bit(word, i) {
            let lin = Poly::new(vec![a, 1]);
            let inv = ring
                .inv_mod(&lin, &spec.g)
                .ok_or_else(|| Error::Domain("g vanishes on the support".into()))?;
            acc = ring.add(&acc, &inv);
        }
    }
    Ok(acc)
}

/// Appends an overall parity bit.
pub fn extend(code: &BinaryCode) -> BinaryCode {
    let length = code.length + 1;
    let wpr = BinaryCode::words_per_row(length);
    let basis = code
        .basis
        .iter()
        .map(|row| {
            let mut w = row.clone();
            w.resize(wpr, 0);
            if weight(row) % 2 == 1 {
                flip_bit(&mut w, code.length);
            }
            w
        })
        .collect();
    BinaryCode { length, basis }
}

pub const DEFAULT_WEIGHT_CAP: usize = 24;

/// Histogram of codeword weights as `(weight, count)`, ascending.
pub fn weight_enumerator(code: &BinaryCode, cap: usize) -> Result<Vec<(usize, u64)>> {
    let k = code.dimension();
    if k > cap {
        return Err(Error::Capacity {
            resource: "code dimension for exhaustive enumeration".into(),
            required: k as u128,
            limit: cap as u128,
        });
    }
    // the top `split` message bits pick a coset; each is walked in Gray order
    let split = k.min(6);
    let low = k - split;
    let hist = (0..1u64 << split)
        .into_par_iter()
        .map(|prefix| {
            let mut hist = vec![0u64; code.length + 1];
            let mut w = code.encode(prefix << low);
            hist[weight(&w)] += 1;
            for step in 1..1u64 << low {
                xor_into(&mut w, &code.basis[step.trailing_zeros() as usize]);
                hist[weight(&w)] += 1;
            }
            hist
        })
        .reduce(
            || vec![0u64; code.length + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    Ok(hist
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c > 0)
        .collect())
}

/// Least nonzero weight in an enumerator.
pub fn minimum_distance(enumerator: &[(usize, u64)]) -> Option<usize> {
    enumerator.iter().map(|&(w, _)| w).find(|&w| w > 0)
}

#[derive(Clone, Debug, Serialize)]
pub struct Trial {
    pub alpha: u64,
    pub matrix: ProjMat,
    pub frob: u64,
    pub beta: u64,
    pub dimension: usize,
    pub equal: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvarianceReport {
    pub n: u32,
    pub r: usize,
    pub seed: u64,
    pub trials: Vec<Trial>,
    pub mismatches: usize,
}

/// `A σ^i α = (a α^{2^i} + b) / (c α^{2^i} + d)` in GF(2^{nr}).
pub fn transport(
    spec_big: &FieldCtx,
    emb: &Embedding,
    m: &ProjMat,
    frob: u64,
    alpha: u64,
) -> Result<u64> {
    let x = spec_big.frobenius(alpha, frob);
    let [a, b, c, d] = m.entries().map(|e| emb.embed(e));
    let num = spec_big.add(spec_big.mul(a, x), b);
    let den = spec_big.add(spec_big.mul(c, x), d);
    Ok(spec_big.mul(num, spec_big.inv(den)?))
}

/// For each trial draws α of degree r over F_q and a random `(A, i)` in
/// PΓL, then compares the weight enumerators of the extended codes of α and
/// `A σ^i α`. The first two trials use the identity and σ alone. Fails with
/// [`Error::Structural`] on any mismatch.
pub fn equivalence_invariant_check(
    n: u32,
    r: usize,
    trials: usize,
    seed: u64,
) -> Result<InvarianceReport> {
    let (fq, big, emb) = GoppaSpec::fields(n, r)?;
    let pgl = Pgl::new(&fq);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(trials);
    let mut failures = Vec::new();
    for t in 0..trials {
        let alpha = loop {
            let a = rng.gen_range(0..big.size());
            let conj: BTreeSet<u64> = (0..r as u64)
                .map(|i| big.frobenius(a, n as u64 * i))
                .collect();
            if conj.len() == r {
                break a;
            }
        };
        let (matrix, frob) = match t {
            0 => (ProjMat::IDENTITY, 0),
            1 => (ProjMat::IDENTITY, 1),
            _ => loop {
                let e: [u64; 4] = std::array::from_fn(|_| rng.gen_range(0..fq.size()));
                if let Ok(m) = pgl.mat(e[0], e[1], e[2], e[3]) {
                    break (m, rng.gen_range(0..n as u64));
                }
            },
        };
        let beta = transport(&big, &emb, &matrix, frob, alpha)?;
        let ca = extend(&build_goppa(&GoppaSpec::from_alpha(n, r, alpha)?)?);
        let cb = extend(&build_goppa(&GoppaSpec::from_alpha(n, r, beta)?)?);
        let wa = weight_enumerator(&ca, DEFAULT_WEIGHT_CAP)?;
        let wb = weight_enumerator(&cb, DEFAULT_WEIGHT_CAP)?;
        let equal = wa == wb && ca.dimension() == cb.dimension();
        if !equal {
            failures.push(format!(
                "trial {t}: α = {alpha}, β = {beta} give different enumerators"
            ));
        }
        out.push(Trial {
            alpha,
            matrix,
            frob,
            beta,
            dimension: ca.dimension(),
            equal,
        });
    }
    if !failures.is_empty() {
        return Err(Error::Structural(failures));
    }
    Ok(InvarianceReport {
        n,
        r,
        seed,
        trials: out,
        mismatches: 0,
    })
}
