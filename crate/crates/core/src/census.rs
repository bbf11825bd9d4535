//! Closed-form counts: fixed points of each conjugacy class, PGL orbits on
//! I_r, the σ^r-fixed orbit count s0, the PΓL orbit count s, and the
//! specialized formulas for particular degrees.
//!
//! Every division is checked. A remainder never gets rounded away: the value
//! is kept as an exact rational and a consistency flag records the terms.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::arith::{big_pow, divisors, euler_phi, gcd, is_prime, moebius, necklace_sum};
use crate::error::{Error, Result};
use crate::gf2::FieldCtx;
use crate::pgl::{ConjClass, Family, Pgl};

/// A division that left a remainder.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Inexact {
    pub quantity: String,
    #[serde(serialize_with = "ser_big")]
    pub numerator: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub denominator: BigInt,
    pub terms: Vec<String>,
}

impl fmt::Display for Inexact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} = ({}) / {} is not an integer",
            self.quantity,
            self.terms.join(" + "),
            self.denominator
        )
    }
}

pub type Exact = std::result::Result<BigInt, Inexact>;

fn divide(quantity: &str, terms: Vec<BigInt>, den: BigInt) -> Exact {
    let num: BigInt = terms.iter().sum();
    let (quot, rem) = num.div_rem(&den);
    if rem.is_zero() {
        Ok(quot)
    } else {
        Err(Inexact {
            quantity: quantity.to_string(),
            numerator: num,
            denominator: den,
            terms: terms.iter().map(BigInt::to_string).collect(),
        })
    }
}

fn big(x: u64) -> BigInt {
    BigInt::from(x)
}

fn ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

fn as_ratio(e: &Exact) -> BigRational {
    match e {
        Ok(v) => BigRational::from_integer(v.clone()),
        Err(i) => ratio(i.numerator.clone(), i.denominator.clone()),
    }
}

/// Number of monic irreducibles fixed by the parabolic class.
pub fn fix_parabolic(q: u64, r: u64) -> Exact {
    if r % 2 == 1 {
        return Ok(BigInt::zero());
    }
    let half = r / 2;
    let terms = divisors(half)
        .into_iter()
        .filter(|d| d % 2 == 1)
        .map(|d| moebius(d) * big_pow(q, half / d))
        .collect();
    divide("Fix(U1)", terms, big(r))
}

fn coprime_sum(q: u64, m: u64, modulus: u64, sign_term: impl Fn(u64) -> BigInt) -> Vec<BigInt> {
    divisors(m)
        .into_iter()
        .filter(|&d| gcd(d, modulus) == 1)
        .map(|d| moebius(d) * (big_pow(q, m / d) + sign_term(m / d)))
        .collect()
}

/// Fixed points of `D_{1,a}` with `ord(a) = order`.
pub fn fix_diagonal(q: u64, r: u64, order: u64) -> Result<Exact> {
    if order <= 1 || (q - 1) % order != 0 {
        return Err(Error::Domain(format!(
            "order {order} must divide q-1 = {}",
            q - 1
        )));
    }
    if r % order != 0 {
        return Ok(Ok(BigInt::zero()));
    }
    let phi = big(euler_phi(order));
    let terms = coprime_sum(q, r / order, order, |_| BigInt::from(-1))
        .into_iter()
        .map(|t| &phi * t)
        .collect();
    Ok(divide(&format!("Fix(D, ord {order})"), terms, big(r)))
}

/// Fixed points of `V_γ` with `ord(V_γ) = order`.
pub fn fix_elliptic(q: u64, r: u64, order: u64) -> Result<Exact> {
    if order <= 1 || (q + 1) % order != 0 {
        return Err(Error::Domain(format!(
            "order {order} must divide q+1 = {}",
            q + 1
        )));
    }
    if r % order != 0 {
        return Ok(Ok(BigInt::zero()));
    }
    let phi = big(euler_phi(order));
    let terms = coprime_sum(q, r / order, order, |e| {
        BigInt::from(if e % 2 == 1 { 1 } else { -1 })
    })
    .into_iter()
    .map(|t| &phi * t)
    .collect();
    Ok(divide(&format!("Fix(V, ord {order})"), terms, big(r)))
}

/// `|X|`, the members of I_r dividing `x^(2^r) + x`.
pub fn count_x(r: u64) -> Exact {
    let terms = divisors(r)
        .into_iter()
        .map(|d| moebius(d) * (big_pow(2, r / d) - 1))
        .collect();
    divide("|X|", terms, big(r))
}

/// `|Δ2|`, the self-reciprocal members of X.
pub fn count_delta2(r: u64) -> Exact {
    if r % 2 == 1 {
        return Ok(BigInt::zero());
    }
    let half = r / 2;
    let terms = divisors(half)
        .into_iter()
        .filter(|d| d % 2 == 1)
        .map(|d| moebius(d) * big_pow(2, half / d))
        .collect();
    divide("|Δ2|", terms, big(r))
}

fn a5_terms(r: u64) -> Vec<BigInt> {
    let third = r / 3;
    coprime_sum(2, third, 3, |e| {
        BigInt::from(if e % 2 == 1 { 1 } else { -1 })
    })
}

/// `|Δ5|` by the three-case formula as printed; compare with
/// [`count_a5_invariant_f2`].
pub fn count_delta5_printed(r: u64) -> Exact {
    if r % 3 != 0 || r == 6 {
        return Ok(BigInt::zero());
    }
    divide("|Δ5| (printed)", a5_terms(r), big(r))
}

/// Number of binary monic irreducibles of degree `r` (3 | r) fixed by A5.
pub fn count_a5_invariant_f2(r: u64) -> Result<Exact> {
    if r % 3 != 0 {
        return Err(Error::Domain(format!("3 does not divide r = {r}")));
    }
    let terms = a5_terms(r).into_iter().map(|t| 2 * t).collect();
    Ok(divide("N(F2, r)", terms, big(r)))
}

/// `|Δ5|` counted as the A5-fixed members of X, which are binary when
/// gcd(r, n) = 1.
pub fn count_delta5(r: u64) -> Exact {
    if r % 3 != 0 {
        return Ok(BigInt::zero());
    }
    count_a5_invariant_f2(r).expect("3 | r")
}

fn ser_big<S: Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

fn ser_ratio<S: Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hypotheses {
    pub n_prime_at_least_5: bool,
    pub r_at_least_3: bool,
    pub r_coprime_to_n: bool,
    /// Set when the report was produced despite a failed hypothesis.
    pub forced: bool,
}

impl Hypotheses {
    pub fn check(n: u64, r: u64) -> Self {
        Hypotheses {
            n_prime_at_least_5: n >= 5 && is_prime(n),
            r_at_least_3: r >= 3,
            r_coprime_to_n: gcd(r, n) == 1,
            forced: false,
        }
    }

    pub fn all(&self) -> bool {
        self.n_prime_at_least_5 && self.r_at_least_3 && self.r_coprime_to_n
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Flag {
    pub name: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Corollary {
    pub name: String,
    #[serde(serialize_with = "ser_ratio")]
    pub value: BigRational,
    pub equals_s: bool,
    pub equals_s_printed: bool,
}

/// All intermediate and final counts for one `(n, r)`.
///
/// Quantities without a `_printed` suffix come from the class-by-class
/// fixed-point sum and the A5-fixed binary count; the `_printed` ones follow
/// the closed forms verbatim. Both are kept so disagreements stay visible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub n: u64,
    pub r: u64,
    pub q: u64,
    #[serde(serialize_with = "ser_ratio")]
    pub n0: BigRational,
    #[serde(serialize_with = "ser_ratio")]
    pub n1: BigRational,
    #[serde(serialize_with = "ser_ratio")]
    pub n2: BigRational,
    #[serde(serialize_with = "ser_ratio")]
    pub n2_printed: BigRational,
    #[serde(serialize_with = "ser_ratio")]
    pub n3: BigRational,
    #[serde(serialize_with = "ser_ratio")]
    pub n3_printed: BigRational,
    #[serde(serialize_with = "ser_ratio")]
    pub pgl_orbits: BigRational,
    #[serde(serialize_with = "ser_ratio")]
    pub pgl_orbits_printed: BigRational,
    #[serde(serialize_with = "ser_ratio")]
    pub x_count: BigRational,
    #[serde(serialize_with = "ser_ratio")]
    pub delta2: BigRational,
    #[serde(serialize_with = "ser_ratio")]
    pub delta5: BigRational,
    #[serde(serialize_with = "ser_ratio")]
    pub delta5_printed: BigRational,
    #[serde(serialize_with = "ser_ratio")]
    pub s0: BigRational,
    #[serde(serialize_with = "ser_ratio")]
    pub s0_printed: BigRational,
    #[serde(serialize_with = "ser_ratio")]
    pub s: BigRational,
    #[serde(serialize_with = "ser_ratio")]
    pub s_printed: BigRational,
    #[serde(serialize_with = "ser_ratio")]
    pub bound: BigRational,
    pub hypotheses: Hypotheses,
    pub consistency: Vec<Flag>,
    pub inexact: Vec<Inexact>,
    pub corollaries: Vec<Corollary>,
}

impl CensusReport {
    pub fn consistent(&self) -> bool {
        self.consistency.iter().all(|f| f.ok)
    }

    pub fn flag(&self, name: &str) -> Option<bool> {
        self.consistency
            .iter()
            .find(|f| f.name == name)
            .map(|f| f.ok)
    }

    pub fn failed_flags(&self) -> Vec<&str> {
        self.consistency
            .iter()
            .filter(|f| !f.ok)
            .map(|f| f.name.as_str())
            .collect()
    }

    /// `s` as an integer, when it is one.
    pub fn s_integer(&self) -> Option<BigInt> {
        self.s.is_integer().then(|| self.s.to_integer())
    }

    pub fn pgl_orbits_integer(&self) -> Option<BigInt> {
        self.pgl_orbits
            .is_integer()
            .then(|| self.pgl_orbits.to_integer())
    }
}

/// Conjugacy data for one `n`, reusable across degrees.
#[derive(Clone, Debug)]
pub struct Census {
    n: u64,
    q: u64,
    classes: Vec<ConjClass>,
}

impl Census {
    pub fn new(n: u64) -> Result<Self> {
        if !(1..=31).contains(&n) {
            return Err(Error::Domain(format!("n = {n} outside 1..=31")));
        }
        let ctx = FieldCtx::new(n as u32)?;
        let classes = Pgl::new(&ctx).conjugacy_classes()?;
        Ok(Census {
            n,
            q: 1 << n,
            classes,
        })
    }

    pub fn classes(&self) -> &[ConjClass] {
        &self.classes
    }

    /// N0..N3 and `|PGL \ I_r|`, plus the verbatim closed forms of N2, N3.
    pub fn pgl_terms(&self, r: u64) -> Result<PglTerms> {
        let q = self.q;
        let mut inexact = Vec::new();
        let mut keep = |e: Exact| -> BigRational {
            if let Err(i) = &e {
                inexact.push(i.clone());
            }
            as_ratio(&e)
        };
        let n0 = keep(divide("N0", vec![necklace_sum(q, r)], big(r)));
        let n1 = keep(fix_parabolic(q, r)) * BigRational::from_integer(big(q * q - 1));
        let mut n2 = BigRational::zero();
        let mut n3 = BigRational::zero();
        for class in &self.classes {
            let size = BigRational::from_integer(big(class.size));
            match class.family {
                Family::Diagonal { .. } => {
                    n2 += size * keep(fix_diagonal(q, r, class.order_in_pgl)?)
                }
                Family::Elliptic { .. } => {
                    n3 += size * keep(fix_elliptic(q, r, class.order_in_pgl)?)
                }
                _ => {}
            }
        }
        let n2_printed = keep(closed_form_n(
            q,
            r,
            q - 1,
            "N2 (printed)",
            big(q * (q + 1)),
            |_| BigInt::from(-1),
        ));
        let n3_printed = keep(closed_form_n(
            q,
            r,
            q + 1,
            "N3 (printed)",
            big(q * (q - 1) / 2),
            |e| BigInt::from(if e % 2 == 1 { 1 } else { -1 }),
        ));
        let order = BigRational::from_integer(big(q) * big(q * q - 1));
        let pgl_orbits = (&n0 + &n1 + &n2 + &n3) / &order;
        let pgl_orbits_printed = (&n0 + &n1 + &n2_printed + &n3_printed) / &order;
        Ok(PglTerms {
            n0,
            n1,
            n2,
            n2_printed,
            n3,
            n3_printed,
            pgl_orbits,
            pgl_orbits_printed,
            inexact,
        })
    }

    /// The full report. Fails when the hypotheses do not hold unless
    /// `force` is set, in which case the report is marked as forced.
    pub fn report(&self, r: u64, force: bool) -> Result<CensusReport> {
        let (n, q) = (self.n, self.q);
        let mut hypotheses = Hypotheses::check(n, r);
        if !hypotheses.all() {
            if !force {
                return Err(Error::Hypothesis(format!(
                    "need n prime >= 5, r >= 3 and gcd(r, n) = 1; got n = {n}, r = {r}"
                )));
            }
            hypotheses.forced = true;
        }
        if r < 1 {
            return Err(Error::Domain("r must be positive".into()));
        }
        let pgl = self.pgl_terms(r)?;
        let mut inexact = pgl.inexact.clone();
        let mut keep = |e: Exact| -> BigRational {
            if let Err(i) = &e {
                inexact.push(i.clone());
            }
            as_ratio(&e)
        };
        let x_count = keep(count_x(r));
        let delta2 = keep(count_delta2(r));
        let delta5 = keep(count_delta5(r));
        let delta5_printed = keep(count_delta5_printed(r));

        let six = BigRational::from_integer(big(6));
        let nn = BigRational::from_integer(big(n));
        let order = BigRational::from_integer(big(q) * big(q * q - 1));
        let weighted = |d5: &BigRational| &x_count + &delta2 * big(3) + d5 * big(2);
        let s0 = weighted(&delta5) / &six;
        let s0_printed = weighted(&delta5_printed) / &six;
        let displayed = |d5: &BigRational, n2: &BigRational, n3: &BigRational| {
            (&nn - BigRational::one()) / (&six * &nn) * weighted(d5)
                + (&pgl.n0 + &pgl.n1 + n2 + n3) / (&nn * &order)
        };
        let s = displayed(&delta5, &pgl.n2, &pgl.n3);
        let s_printed = displayed(&delta5_printed, &pgl.n2_printed, &pgl.n3_printed);
        let s_route = &s0 + (&pgl.pgl_orbits - &s0) / &nn;
        let s_printed_route = &s0_printed + (&pgl.pgl_orbits_printed - &s0_printed) / &nn;

        let mut flags = Vec::new();
        let mut flag = |name: &str, ok: bool, detail: String| {
            flags.push(Flag {
                name: name.to_string(),
                ok,
                detail: if ok { String::new() } else { detail },
            })
        };
        flag(
            "exact_divisions",
            inexact.is_empty(),
            inexact
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join("; "),
        );
        flag(
            "n2_routes_agree",
            pgl.n2 == pgl.n2_printed,
            format!("class sum {} vs closed form {}", pgl.n2, pgl.n2_printed),
        );
        flag(
            "n3_routes_agree",
            pgl.n3 == pgl.n3_printed,
            format!("class sum {} vs closed form {}", pgl.n3, pgl.n3_printed),
        );
        flag(
            "pgl_orbits_integral",
            pgl.pgl_orbits.is_integer(),
            format!("{}", pgl.pgl_orbits),
        );
        flag(
            "pgl_orbits_printed_integral",
            pgl.pgl_orbits_printed.is_integer(),
            format!("{}", pgl.pgl_orbits_printed),
        );
        flag(
            "delta5_printed_matches",
            delta5 == delta5_printed,
            format!("A5-fixed binary count {delta5} vs printed {delta5_printed}"),
        );
        flag("s0_integral", s0.is_integer(), format!("{s0}"));
        flag(
            "s0_printed_integral",
            s0_printed.is_integer(),
            format!("{s0_printed}"),
        );
        flag(
            "s_routes_agree",
            s == s_route && s_printed == s_printed_route,
            format!("{s} vs {s_route}; {s_printed} vs {s_printed_route}"),
        );
        flag("s_integral", s.is_integer(), format!("{s}"));
        flag(
            "s_printed_integral",
            s_printed.is_integer(),
            format!("{s_printed}"),
        );
        flag(
            "monotone",
            s <= pgl.pgl_orbits && pgl.pgl_orbits <= pgl.n0,
            format!("s = {s}, pgl = {}, |I_r| = {}", pgl.pgl_orbits, pgl.n0),
        );
        let corollaries: Vec<Corollary> = corollary_formulas(n, r)
            .into_iter()
            .map(|(name, value)| Corollary {
                equals_s: value == s,
                equals_s_printed: value == s_printed,
                name,
                value,
            })
            .collect();
        for c in &corollaries {
            flag(
                &format!("corollary_{}", c.name),
                c.equals_s,
                format!("{} vs s = {s}", c.value),
            );
        }
        Ok(CensusReport {
            n,
            r,
            q,
            n0: pgl.n0,
            n1: pgl.n1,
            n2: pgl.n2,
            n2_printed: pgl.n2_printed,
            n3: pgl.n3,
            n3_printed: pgl.n3_printed,
            pgl_orbits: pgl.pgl_orbits,
            pgl_orbits_printed: pgl.pgl_orbits_printed,
            x_count,
            delta2,
            delta5,
            delta5_printed,
            bound: s.clone(),
            s0,
            s0_printed,
            s,
            s_printed,
            hypotheses,
            consistency: flags,
            inexact,
            corollaries,
        })
    }
}

/// Output of [`Census::pgl_terms`].
#[derive(Clone, Debug)]
pub struct PglTerms {
    pub n0: BigRational,
    pub n1: BigRational,
    pub n2: BigRational,
    pub n2_printed: BigRational,
    pub n3: BigRational,
    pub n3_printed: BigRational,
    pub pgl_orbits: BigRational,
    pub pgl_orbits_printed: BigRational,
    pub inexact: Vec<Inexact>,
}

// factor * Σ_{D | gcd(r, group), D != 1} φ(D)^2 / r * Σ_{d | r/D, gcd(d,D)=1} μ(d)(q^{r/Dd} + sign)
fn closed_form_n(
    q: u64,
    r: u64,
    group: u64,
    quantity: &str,
    factor: BigInt,
    sign: impl Fn(u64) -> BigInt + Copy,
) -> Exact {
    let terms = divisors(gcd(r, group))
        .into_iter()
        .filter(|&d| d != 1)
        .flat_map(|d| {
            let phi2 = big(euler_phi(d)).pow(2);
            let factor = factor.clone();
            coprime_sum(q, r / d, d, sign)
                .into_iter()
                .map(move |t| &factor * &phi2 * t)
        })
        .collect();
    divide(quantity, terms, big(r))
}

/// `|PGL \ I_r|` for one `(n, r)`.
pub fn pgl_orbit_count(n: u64, r: u64) -> Result<PglTerms> {
    Census::new(n)?.pgl_terms(r)
}

/// The full report for one `(n, r)`.
pub fn orbit_count_total(n: u64, r: u64, force: bool) -> Result<CensusReport> {
    Census::new(n)?.report(r, force)
}

fn rat(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

/// `(2^{3n} + 2^{2n} + 3·2^n + 12n - 18) / 6n`, the sextic closed form.
pub fn sextic_closed_form(n: u64) -> BigRational {
    rat(
        big_pow(2, 3 * n) + big_pow(2, 2 * n) + 3 * big_pow(2, n) + BigInt::from(12 * n) - 18,
        big(6 * n),
    )
}

/// The specialized closed forms that apply to `(n, r)`, by name.
pub fn corollary_formulas(n: u64, r: u64) -> Vec<(String, BigRational)> {
    let mut out = Vec::new();
    let q = big_pow(2, n);
    let nn = big(n);
    if r == 4 {
        out.push((
            "r4".to_string(),
            rat(big_pow(2, n - 1) - 1, nn.clone()) + BigRational::one(),
        ));
    }
    if r % 2 == 0 && r >= 6 && is_prime(r / 2) {
        let p = r / 2;
        let pp = big(p);
        let q2m1 = &q * &q - 1;
        let common = rat(
            num_traits::pow(q.clone(), (2 * p - 1) as usize)
                + num_traits::pow(q.clone(), (p + 1) as usize)
                - 2 * num_traits::pow(q.clone(), (p - 1) as usize)
                - &q * &q
                - &q
                + 2,
            2 * &pp * &nn * &q2m1,
        ) + rat(
            2 * (&nn - 1) * (big_pow(2, 2 * p - 3) + big_pow(2, p - 2) - 1),
            3 * &pp * &nn,
        );
        let p1 = (&pp - 1) * (&pp - 1);
        let qm1 = (&q - BigInt::one()).mod_floor(&pp).is_zero();
        let qp1 = (&q + BigInt::one()).mod_floor(&pp).is_zero();
        if qm1 {
            out.push((
                "r2p-subcase1".to_string(),
                common + rat(&q * &p1, 2 * &pp * &nn),
            ));
        } else if qp1 {
            out.push((
                "r2p-subcase2".to_string(),
                common + rat((&q - 2) * &p1, 4 * &pp * &nn),
            ));
        } else {
            out.push(("r2p-subcase3".to_string(), common));
        }
    }
    let group: BigInt = 2 * (&q * &q - BigInt::one());
    let coprime = group.gcd(&big(r)).is_one();
    if r >= 3 && coprime {
        let x_sum: BigInt = divisors(r)
            .into_iter()
            .map(|d| moebius(d) * (big_pow(2, r / d) - 1))
            .sum();
        let i_sum: BigInt = divisors(r)
            .into_iter()
            .map(|d| moebius(d) * num_traits::pow(q.clone(), (r / d) as usize))
            .sum();
        let value = rat((&nn - 1) * x_sum, 6 * big(r) * &nn)
            + rat(i_sum, big(r) * &nn * &q * (&q * &q - 1));
        out.push(("coprime".to_string(), value));
    }
    out
}
