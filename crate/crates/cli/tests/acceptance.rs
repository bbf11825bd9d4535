//! Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero when
//! any criterion fails.

use std::process::{Command, Output};
use std::time::Instant;

use serde_json::Value;

use goppa_orbits::arith::gcd;
use goppa_orbits::census::{self, Census};
use goppa_orbits::goppa::{self, GoppaSpec};
use goppa_orbits::oracle::{self, Group, Limits};
use goppa_orbits::pgl::conjugacy_audit;
use goppa_orbits::{iter_irreducible, FieldCtx, Pgl};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_goppa-orbits"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn quartic() -> Check {
    let rep = census::orbit_count_total(5, 4, false).map_err(err)?;
    let part = oracle::enumerate_orbits(Group::PGammaL, 5, 4, &Limits::default()).map_err(err)?;
    ensure(rep.s.to_string() == "4", format!("census s = {}", rep.s))?;
    ensure(
        part.len() == 4,
        format!("oracle PΓL orbits = {}", part.len()),
    )?;
    Ok(format!(
        "census s = {}, oracle PΓL orbits = {} over {} polynomials",
        rep.s,
        part.len(),
        part.set.len()
    ))
}

fn pgl_counts() -> Check {
    let limits = Limits::default();
    let mut notes = Vec::new();
    for (r, want) in [(3usize, 1u64), (4, 16)] {
        let census = census::pgl_orbit_count(5, r as u64)
            .map_err(err)?
            .pgl_orbits;
        let burnside = oracle::burnside_count(5, r, &limits).map_err(err)?.orbits;
        let part = oracle::enumerate_orbits(Group::Pgl, 5, r, &limits)
            .map_err(err)?
            .len() as u64;
        ensure(
            census.to_string() == want.to_string() && burnside == want && part == want,
            format!(
                "r = {r}: census {census}, Burnside {burnside}, partition {part}, expected {want}"
            ),
        )?;
        notes.push(format!("r = {r}: {want}"));
    }
    Ok(notes.join(", "))
}

fn sextic() -> Check {
    let rep = census::orbit_count_total(5, 6, false).map_err(err)?;
    let closed = census::sextic_closed_form(5);
    let cor = rep
        .corollaries
        .iter()
        .find(|c| c.name == "r2p-subcase2")
        .ok_or("subcase-2 corollary not applied")?;
    ensure(rep.s.to_string() == "1131", format!("s = {}", rep.s))?;
    ensure(
        closed == rep.s && cor.value == rep.s,
        format!("closed form {closed}, corollary {}", cor.value),
    )?;
    let table = oracle::classify_x(5, 6).map_err(err)?;
    let blocks = oracle::sigma_fixed_orbit_count(&table, None)
        .map_err(err)?
        .blocks;
    ensure(
        table.counts.x == 9 && blocks == 2 && rep.s0.to_string() == "2" && table.s0() == rep.s0,
        format!(
            "|X| = {}, blocks = {blocks}, census s0 = {}",
            table.counts.x, rep.s0
        ),
    )?;
    Ok(format!(
        "s = 1131 three ways, oracle s0 = {blocks} on |X| = 9"
    ))
}

fn corollaries() -> Check {
    let mut checked = 0;
    let mut pairs = 0;
    for n in [5u64, 7, 11, 13] {
        let census = Census::new(n).map_err(err)?;
        for r in 3..=20u64 {
            if !census::Hypotheses::check(n, r).all() {
                continue;
            }
            let rep = census.report(r, false).map_err(err)?;
            pairs += 1;
            let exact_flag = rep
                .flag("exact_divisions")
                .ok_or("missing exact_divisions flag")?;
            ensure(
                exact_flag == rep.inexact.is_empty(),
                format!("({n},{r}): inexact divisions not flagged"),
            )?;
            for c in &rep.corollaries {
                ensure(
                    c.equals_s,
                    format!("({n},{r}) {}: {} vs s = {}", c.name, c.value, rep.s),
                )?;
                checked += 1;
            }
        }
    }
    Ok(format!(
        "{checked} corollary values over {pairs} parameter pairs"
    ))
}

fn conjugacy() -> Check {
    let mut notes = Vec::new();
    for (n, exhaustive) in [(2u32, true), (3, true), (5, false)] {
        let ctx = FieldCtx::new(n).map_err(err)?;
        let pgl = Pgl::new(&ctx);
        let audit = conjugacy_audit(&pgl, exhaustive).map_err(err)?;
        let q = pgl.q();
        let expected = 2 + (q - 2) / 2 + q / 2;
        ensure(
            audit.passed()
                && audit.class_count as u64 == expected
                && audit.size_sum == q * (q * q - 1),
            format!("q = {q}: {:?}", audit.violations),
        )?;
        notes.push(format!("q = {q}: {} classes", audit.class_count));
    }
    Ok(notes.join(", "))
}

fn fix_relation() -> Check {
    let rep = oracle::fix_relation_check(5, 3, 500, 2024, &Limits::default()).map_err(err)?;
    ensure(
        rep.mismatches.is_empty(),
        format!(
            "{} mismatches, first {:?}",
            rep.mismatches.len(),
            rep.mismatches.first()
        ),
    )?;
    Ok(format!(
        "{} matrices x {} polynomials, {} fixed pairs",
        rep.matrices, rep.polynomials, rep.fixed_pairs
    ))
}

fn structural() -> Check {
    let mut notes = Vec::new();
    for r in [3usize, 4, 6] {
        let table = oracle::classify_x(5, r).map_err(err)?;
        notes.push(format!("r = {r}: |X| = {}", table.counts.x));
        if r != 6 {
            let part =
                oracle::enumerate_orbits(Group::Pgl, 5, r, &Limits::default()).map_err(err)?;
            let v = oracle::lastlem_violations(&part, &table);
            ensure(v.is_empty(), format!("r = {r}: {v:?}"))?;
            let flagged = part.orbits.iter().filter(|o| o.divisor_flag).count();
            notes.push(format!("{flagged} flagged orbits"));
        }
    }
    Ok(notes.join(", "))
}

fn adjudication() -> Check {
    let out = bin(&["verify", "--n", "5", "--r", "3"]);
    ensure(
        out.status.code() == Some(1),
        format!("exit {:?}, expected 1", out.status.code()),
    )?;
    let v: Value = serde_json::from_slice(&out.stdout).map_err(err)?;
    let d5 = v["comparisons"]
        .as_array()
        .and_then(|a| a.iter().find(|c| c["quantity"] == "|Δ5|"))
        .ok_or("no |Δ5| comparison")?;
    ensure(
        d5["printed"] == "1" && d5["census"] == "2" && d5["oracle"] == "2",
        format!("|Δ5| row {d5}"),
    )?;
    ensure(
        v["pgammal_orbits"] == 1,
        format!("PΓL orbits {}", v["pgammal_orbits"]),
    )?;
    let fail = bin(&["verify", "--n", "5", "--r", "41"]);
    ensure(
        fail.status.code() == Some(3),
        format!("capacity run exit {:?}", fail.status.code()),
    )?;
    Ok("printed |Δ5| = 1, definitional |Δ5| = 2, PΓL orbits = 1; exit 1, capacity exit 3".into())
}

fn gcd_identity() -> Check {
    let mut count = 0;
    for n in [5u64, 7, 11] {
        for r in (2..=40u64).step_by(2) {
            if gcd(r, n) != 1 {
                continue;
            }
            let id = oracle::verify_gcd_identity(n, r).map_err(err)?;
            ensure(id.holds, format!("n = {n}, r = {r}: gcd {}", id.gcd))?;
            count += 1;
        }
    }
    Ok(format!("{count} cases"))
}

fn factorization() -> Check {
    let mut notes = Vec::new();
    for r in [9usize, 12] {
        let rep = oracle::verify_f_factorization(5, r).map_err(err)?;
        ensure(rep.passed(), format!("r = {r}: {:?}", rep.failures))?;
        notes.push(format!("r = {r}: deg {}", rep.degree));
    }
    Ok(notes.join(", "))
}

fn goppa_invariance() -> Check {
    let rep = goppa::equivalence_invariant_check(5, 3, 20, 11).map_err(err)?;
    let dim = rep.trials[0].dimension;
    ensure(rep.trials.iter().all(|t| t.equal), "enumerators differ")?;
    ensure(dim >= 32 - 15, format!("dimension {dim}"))?;
    let ctx = FieldCtx::new(5).map_err(err)?;
    let g = iter_irreducible(&ctx, 3).next().ok_or("no cubic")?;
    let code =
        goppa::extend(&goppa::build_goppa(&GoppaSpec::new(5, &g).map_err(err)?).map_err(err)?);
    let mass: u64 = goppa::weight_enumerator(&code, goppa::DEFAULT_WEIGHT_CAP)
        .map_err(err)?
        .iter()
        .map(|p| p.1)
        .sum();
    ensure(mass == 1 << code.dimension(), format!("mass {mass}"))?;
    Ok(format!(
        "20 transports agree, dimension {dim}, mass 2^{}",
        code.dimension()
    ))
}

fn determinism() -> Check {
    let runs: [&[&str]; 7] = [
        &["census", "--n", "5,7,11,13", "--r", "3..20"],
        &["verify", "--n", "5", "--r", "3"],
        &["verify", "--n", "5", "--r", "6", "--format", "csv"],
        &[
            "oracle-orbits",
            "--n",
            "5",
            "--r",
            "4",
            "--group",
            "pgammal",
            "--format",
            "csv",
        ],
        &["oracle-orbits", "--n", "5", "--r", "4", "--group", "pgl"],
        &["conjugacy", "--n", "5"],
        &[
            "goppa",
            "--n",
            "5",
            "--r",
            "3",
            "--extended",
            "--weights",
            "--trials",
            "5",
            "--seed",
            "9",
        ],
    ];
    for args in runs {
        let outs: Vec<Output> = ["1", "4"]
            .iter()
            .map(|w| {
                let mut a = args.to_vec();
                a.extend(["--workers", w]);
                bin(&a)
            })
            .collect();
        ensure(
            outs[0].stdout == outs[1].stdout && outs[0].status.code() == outs[1].status.code(),
            format!("{} differs between 1 and 4 workers", args.join(" ")),
        )?;
        ensure(
            !outs[0].stdout.is_empty(),
            format!("{} printed nothing", args.join(" ")),
        )?;
    }
    Ok(format!("{} runs byte-identical", runs.len()))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("quartic reproduction", quartic),
        ("PGL orbit counts", pgl_counts),
        ("sextic closed form", sextic),
        ("corollary coherence", corollaries),
        ("conjugacy audit", conjugacy),
        ("fixed-point relation", fix_relation),
        ("structural laws on X", structural),
        ("adjudication output", adjudication),
        ("integer identity", gcd_identity),
        ("F-factorization", factorization),
        ("Goppa invariance", goppa_invariance),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
