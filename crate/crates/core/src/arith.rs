//! Integer number theory for the counting formulas: factorization,
//! Möbius and Euler functions, divisor lattices and necklace counts.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

/// A positive integer together with its prime factorization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactoredInt {
    pub value: u64,
    /// `(prime, exponent)` pairs with strictly increasing primes.
    pub factors: Vec<(u64, u32)>,
}

impl FactoredInt {
    pub fn new(value: u64) -> Self {
        assert!(value >= 1, "factorization of zero");
        let mut primes = Vec::new();
        collect_prime_factors(value, &mut primes);
        primes.sort_unstable();
        let mut factors: Vec<(u64, u32)> = Vec::new();
        for p in primes {
            match factors.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => factors.push((p, 1)),
            }
        }
        FactoredInt { value, factors }
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn divisors(&self) -> Vec<u64> {
        let mut out = vec![1u64];
        for &(p, e) in &self.factors {
            let len = out.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    out.push(out[i] * pk);
                }
            }
        }
        out.sort_unstable();
        out
    }
}

const SMALL_PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

fn collect_prime_factors(mut n: u64, out: &mut Vec<u64>) {
    for &p in &SMALL_PRIMES {
        while n % p == 0 {
            out.push(p);
            n /= p;
        }
    }
    // Trial division is enough for most inputs; rho handles large cofactors
    // such as Mersenne numbers with big prime factors.
    let mut p = 101u64;
    while n > 1 && p <= 1 << 16 && p.saturating_mul(p) <= n {
        while n % p == 0 {
            out.push(p);
            n /= p;
        }
        p += 2;
    }
    if n > 1 {
        split_large(n, out);
    }
}

fn split_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    split_large(d, out);
    split_large(n / d, out);
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES[..12] {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

pub fn moebius(n: u64) -> i64 {
    let f = FactoredInt::new(n);
    if !f.is_squarefree() {
        return 0;
    }
    if f.factors.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn euler_phi(n: u64) -> u64 {
    let f = FactoredInt::new(n);
    f.factors.iter().fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

pub fn divisors(n: u64) -> Vec<u64> {
    FactoredInt::new(n).divisors()
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn big_pow(base: u64, exp: u64) -> BigInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}

/// Σ_{d|r} μ(d) q^{r/d}, before division by `r`.
pub fn necklace_sum(q: u64, r: u64) -> BigInt {
    divisors(r)
        .into_iter()
        .map(|d| moebius(d) * big_pow(q, r / d))
        .sum()
}

/// Number of monic irreducible polynomials of degree `r` over GF(q).
pub fn irreducible_count(q: u64, r: u64) -> BigUint {
    assert!(q >= 2 && r >= 1);
    let (quot, rem) = necklace_sum(q, r).div_rem(&BigInt::from(r));
    assert!(rem.is_zero(), "necklace sum not divisible by {r}");
    quot.to_biguint().expect("negative irreducible count")
}

/// G(n) = Σ_{d|n} χ(d) μ(d) F(n/d) for completely multiplicative χ.
pub fn weighted_moebius_inversion<C, F>(chi: C, f: F, n: u64) -> BigInt
where
    C: Fn(u64) -> BigInt,
    F: Fn(u64) -> BigInt,
{
    divisors(n)
        .into_iter()
        .filter(|&d| moebius(d) != 0)
        .map(|d| moebius(d) * chi(d) * f(n / d))
        .sum()
}

/// Exact quotient of two big integers, or `None` when the division leaves a
/// remainder.
pub fn exact_div(num: &BigInt, den: &BigInt) -> Option<BigInt> {
    let (q, r) = num.div_rem(den);
    r.is_zero().then_some(q)
}
