//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Library results are checked against the exhaustive oracle and against
//! the independent reference code shared with the core tests. A criterion
//! listed in `KNOWN_FAILURES` prints FAIL without failing the run, as long
//! as it fails exactly in the documented way; anything else is fatal.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use common::{all_matchings, matching_fits, reference_delta, reference_is_popular, reference_pairs};
use lcsm_core::fixtures::{sample, sample_m, sample_m_double_prime, sample_m_prime};
use lcsm_core::generate::{generate, GeneratorConfig};
use lcsm_core::io::read_instance;
use lcsm_core::model::is_feasible_matching;
use lcsm_core::oracle::{random_feasible, Oracle};
use lcsm_core::popularity::{
    apply_structure, check_characterization, correspondence, decompose, delta_value, hospital_vote_positional,
    reduced_decomposition, rewritten_delta, Label, TieBreak, Vertex, ViolationKind,
};
use lcsm_core::reduction::{build_gs, check_invariants, lower_copy_labels, map_down, map_up};
use lcsm_core::solvers::{max_cardinality_popular, popular_among_max_cardinality};
use lcsm_core::stable::solve_stable;
use lcsm_core::{Instance, Matching};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::Value;

/// Criteria expected to fail; see the project notes for the analysis.
const KNOWN_FAILURES: &[&str] = &["7g"];

struct Line {
    id: &'static str,
    title: &'static str,
    pass: bool,
    detail: String,
    elapsed: Duration,
    limit: Option<Duration>,
}

fn check(id: &'static str, title: &'static str, limit: Option<Duration>, f: impl FnOnce() -> (bool, String)) -> Line {
    let start = Instant::now();
    let result = f();
    record(id, title, limit, result, start.elapsed())
}

/// Prints the line for a result computed elsewhere.
fn record(
    id: &'static str,
    title: &'static str,
    limit: Option<Duration>,
    result: (bool, String),
    elapsed: Duration,
) -> Line {
    let (pass, detail) = result;
    let in_time = limit.is_none_or(|l| elapsed <= l);
    let line = Line { id, title, pass: pass && in_time, detail, elapsed, limit };
    let limit = line.limit.map_or(String::new(), |l| format!(" (limit {:.0?})", l));
    println!(
        "criterion {:<3} {:<4} {} — {}; {:.2?}{limit}",
        line.id,
        if line.pass { "PASS" } else { "FAIL" },
        line.title,
        line.detail,
        line.elapsed
    );
    line
}

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

fn crowded(seed: u64) -> GeneratorConfig {
    GeneratorConfig {
        seed,
        n_residents: 6,
        n_hospitals: 3,
        max_capacity: 2,
        edge_density: 0.7,
        max_tree_depth: 2,
        class_branching: 2,
        quota_tightness: 0.5,
        partition: false,
    }
}

/// `n` instances alternating between the desk family and crowded ones
/// (|R| ≤ 6, |H| ≤ 4, capacity ≤ 3, class depth ≤ 3), resident count capped.
fn family(n: u64, offset: u64, max_residents: usize) -> Vec<(String, Instance)> {
    (0..n)
        .map(|i| {
            let seed = offset + i;
            let mut c = if i % 2 == 0 { GeneratorConfig::desk(seed) } else { crowded(seed) };
            c.n_residents = c.n_residents.min(max_residents);
            (format!("seed {seed}"), generate(&c).unwrap())
        })
        .collect()
}

fn lcsm(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_lcsm")).args(args).current_dir(fixtures()).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

/// First failure message, or the success summary.
fn first_failure(failures: Vec<String>, ok: String) -> (bool, String) {
    match failures.into_iter().next() {
        Some(f) => (false, f),
        None => (true, ok),
    }
}

fn criterion_1() -> (bool, String) {
    let mut fails = Vec::new();
    let (code, _) = lcsm(&["verify", "stable", "sample.lcsm", "M.matching"]);
    if code != 0 {
        fails.push(format!("verify stable M exited {code}"));
    }
    let (code, out) = lcsm(&["verify", "stable", "sample.lcsm", "Mprime.matching"]);
    if code != 1 || !out.contains("(r3, h1)") {
        fails.push(format!("verify stable M' exited {code}: {out}"));
    }
    let (_, out) = lcsm(&["--json", "compare", "sample.lcsm", "M.matching", "Mprime.matching"]);
    let report: Value = serde_json::from_str(&out).unwrap();
    let h1 = &report["hospitals"][0];
    let corr_sum: i64 = h1["corr"].as_array().unwrap().iter().map(|p| p["vote"].as_i64().unwrap()).sum();
    if h1["name"] != "h1" || h1["vote"] != 0 || corr_sum != 0 {
        fails.push(format!("h1 is not indifferent: {h1}"));
    }
    let (_, out2) = lcsm(&["--json", "compare", "sample.lcsm", "M.matching", "Mdoubleprime.matching"]);
    let report2: Value = serde_json::from_str(&out2).unwrap();

    let inst = sample();
    let (m, mp, mpp) = (sample_m(&inst), sample_m_prime(&inst), sample_m_double_prime(&inst));
    let want = [(reference_delta(&inst, &m, &mp), -1), (reference_delta(&inst, &m, &mpp), 0)];
    let got = [
        (delta_value(&inst, &m, &mp).unwrap(), report["delta"].as_i64().unwrap()),
        (delta_value(&inst, &m, &mpp).unwrap(), report2["delta"].as_i64().unwrap()),
    ];
    for ((reference, expected), (lib, cli)) in want.into_iter().zip(got) {
        if reference != expected || lib != expected || cli != expected {
            fails.push(format!("delta: reference {reference}, library {lib}, cli {cli}, expected {expected}"));
        }
    }
    first_failure(fails, "M stable, M' blocked by (r3,h1), h1 vote 0, Δ(M',M) = -1, Δ(M'',M) = 0".into())
}

/// Rank-for-rank comparison of the two difference sets, written out
/// directly from the definition.
fn reference_positional(inst: &Instance, h: usize, m: &Matching, mp: &Matching) -> i64 {
    let (a, b) = (m.residents_of(h), mp.residents_of(h));
    let mut x: Vec<usize> =
        a.iter().copied().filter(|r| !b.contains(r)).map(|r| inst.hospital_rank(h, r).unwrap()).collect();
    let mut y: Vec<usize> =
        b.iter().copied().filter(|r| !a.contains(r)).map(|r| inst.hospital_rank(h, r).unwrap()).collect();
    x.sort_unstable();
    y.sort_unstable();
    let pairs: i64 = x.iter().zip(&y).map(|(p, q)| (*p as i64 - *q as i64).signum()).sum();
    pairs + y.len() as i64 - x.len() as i64
}

fn criterion_2() -> (bool, String) {
    let inst = sample();
    let (m, mp) = (sample_m(&inst), sample_m_prime(&inst));
    let h1 = inst.hospital_id("h1").unwrap();
    let lib_h1 = hospital_vote_positional(&inst, h1, &m, &mp).unwrap();
    let residents: i64 = (0..inst.num_residents())
        .map(|r| {
            let rank = |h: Option<usize>| h.map(|h| inst.resident_rank(r, h).unwrap());
            match (rank(mp.hospital_of(r)), rank(m.hospital_of(r))) {
                (Some(x), Some(y)) => (y as i64 - x as i64).signum(),
                (Some(_), None) => 1,
                (None, Some(_)) => -1,
                (None, None) => 0,
            }
        })
        .sum();
    let mut naive_lib = residents;
    let mut naive_ref = residents;
    for h in 0..inst.num_hospitals() {
        naive_lib += hospital_vote_positional(&inst, h, &m, &mp).unwrap();
        naive_ref += reference_positional(&inst, h, &m, &mp);
    }
    let corr_delta = delta_value(&inst, &m, &mp).unwrap();
    let pass = lib_h1 == 2
        && reference_positional(&inst, h1, &m, &mp) == 2
        && naive_lib == 1
        && naive_ref == 1
        && corr_delta <= 0;
    (pass, format!("positional h1 = {lib_h1:+}, naive Δ = {naive_lib:+}, class-aware Δ = {corr_delta}"))
}

fn criterion_3() -> (bool, String) {
    let instances = family(500, 1000, 6);
    let oracle = Oracle::default();
    let fails: Vec<String> = instances
        .par_iter()
        .filter_map(|(tag, inst)| {
            let m = solve_stable(inst);
            let lib = oracle.brute_is_popular(inst, &m).unwrap().holds;
            let reference = reference_is_popular(inst, &all_matchings(inst), &m);
            (!lib || !reference).then(|| format!("{tag}: oracle {lib}, reference {reference}"))
        })
        .collect();
    first_failure(fails, format!("{} instances, every stable output popular", instances.len()))
}

/// Largest size of a popular matching by direct search over `all`.
fn reference_max_popular(inst: &Instance, all: &[Matching]) -> Option<usize> {
    let mut order: Vec<&Matching> = all.iter().collect();
    order.sort_by_key(|m| std::cmp::Reverse(m.len()));
    order.into_iter().find(|m| reference_is_popular(inst, all, m)).map(Matching::len)
}

fn criterion_4() -> (bool, String) {
    let instances = family(200, 2000, 6);
    let oracle = Oracle::default();
    let fails: Vec<String> = instances
        .par_iter()
        .filter_map(|(tag, inst)| {
            let m = max_cardinality_popular(inst).unwrap();
            let brute = oracle.brute_max_popular_size(inst).unwrap();
            let reference = reference_max_popular(inst, &all_matchings(inst));
            let popular = oracle.brute_is_popular(inst, &m).unwrap().holds;
            let ok = popular && Some(m.len()) == reference && m.len() == brute;
            (!ok)
                .then(|| format!("{tag}: size {}, oracle {brute}, reference {reference:?}, popular {popular}", m.len()))
        })
        .collect();
    first_failure(fails, format!("{} instances, output popular and of largest popular size", instances.len()))
}

fn criterion_5() -> (bool, String) {
    let instances = family(200, 3000, 6);
    let oracle = Oracle::default();
    let fails: Vec<String> = instances
        .par_iter()
        .filter_map(|(tag, inst)| {
            let m = popular_among_max_cardinality(inst).unwrap();
            let all = all_matchings(inst);
            let max = all.iter().map(Matching::len).max().unwrap_or(0);
            let brute_max = oracle.brute_max_cardinality(inst).unwrap();
            let unbeaten = oracle.brute_unbeaten_among_maxcard(inst, &m).unwrap().holds;
            let reference = all.iter().filter(|x| x.len() == max).all(|x| reference_delta(inst, &m, x) <= 0);
            let ok = m.len() == max && brute_max == max && unbeaten && reference;
            (!ok).then(|| format!("{tag}: size {} of {max}, unbeaten {unbeaten}, reference {reference}", m.len()))
        })
        .collect();
    first_failure(fails, format!("{} instances, output maximum and unbeaten among maximum", instances.len()))
}

fn triples(n: usize, seed: u64) -> Vec<(String, Instance, Matching, Matching)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let instances = family(200, seed, 6);
    (0..n)
        .map(|i| {
            let (tag, inst) = &instances[i % instances.len()];
            let m = random_feasible(inst, &mut rng);
            let mp = random_feasible(inst, &mut rng);
            (tag.clone(), inst.clone(), m, mp)
        })
        .collect()
}

fn criterion_6() -> (bool, String) {
    let mut fails = Vec::new();
    let mut structures = 0;
    for (tag, inst, m, mp) in triples(1000, 4000) {
        for rho in decompose(&inst, &m, &mp).unwrap().structures {
            structures += 1;
            if !matching_fits(&inst, &apply_structure(&m, &rho)) {
                fails.push(format!("{tag}: swap along {rho:?} infeasible"));
            }
        }
    }
    first_failure(fails, format!("1000 triples, {structures} structures, every swap feasible"))
}

fn criterion_7a() -> (bool, String) {
    let mut fails = Vec::new();
    for (tag, inst, m, mp) in triples(1000, 5000) {
        let fwd = correspondence(&inst, &m, &mp, TieBreak::default()).unwrap();
        let back = correspondence(&inst, &mp, &m, TieBreak::default()).unwrap();
        for h in 0..inst.num_hospitals() {
            let mut want = reference_pairs(&inst, h, &m.residents_of(h), &mp.residents_of(h));
            want.sort_unstable();
            let mut got: Vec<(usize, usize)> =
                fwd.hospitals[h].paired().filter(|(r, _)| m.hospital_of(*r) == Some(h)).collect();
            got.sort_unstable();
            let symmetric =
                fwd.hospitals[h].paired().all(|(r, p)| back.get(h, p) == Some(r) && fwd.get(h, p) == Some(r));
            if got != want || !symmetric {
                fails.push(format!("{tag}: hospital {h}: {got:?} vs reference {want:?}"));
            }
        }
    }
    first_failure(fails, "1000 triples, pairing symmetric and equal to the reference".into())
}

fn criterion_7b() -> (bool, String) {
    let mut fails = Vec::new();
    for (tag, inst, m, mp) in triples(1000, 6000) {
        let (d, back) = (delta_value(&inst, &m, &mp).unwrap(), delta_value(&inst, &mp, &m).unwrap());
        if d != -back || delta_value(&inst, &m, &m).unwrap() != 0 || d != reference_delta(&inst, &m, &mp) {
            fails.push(format!("{tag}: Δ {d}, reversed {back}"));
        }
    }
    first_failure(fails, "1000 triples, Δ antisymmetric, Δ(M,M) = 0, equal to the reference".into())
}

fn criterion_7c() -> (bool, String) {
    let mut fails = Vec::new();
    for (tag, inst, m, mp) in triples(1000, 7000) {
        let d = delta_value(&inst, &m, &mp).unwrap();
        let full = decompose(&inst, &m, &mp).unwrap();
        let (a, b) = (rewritten_delta(&full), rewritten_delta(&reduced_decomposition(&full)));
        if a != d || b != d {
            fails.push(format!("{tag}: direct {d}, rewritten {a} / reduced {b}"));
        }
    }
    first_failure(fails, "1000 triples, direct sum equals the path/cycle rewrite".into())
}

fn criterion_7de() -> ((bool, String), (bool, String)) {
    let instances = family(150, 8000, 6);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut inv_fails, mut lift_fails) = (Vec::new(), Vec::new());
    let (mut stable_runs, mut lifted) = (0, 0);
    for (tag, inst) in &instances {
        let n = inst.num_residents();
        if n < 2 {
            continue;
        }
        for s in [2, n] {
            let l = build_gs(inst, s).unwrap();
            let m_s = solve_stable(l.instance());
            stable_runs += 1;
            let issues = check_invariants(&l, &m_s);
            if let Some(i) = issues.first() {
                inv_fails.push(format!("{tag} s={s}: {i}"));
                continue;
            }
            let m = map_down(&l, &m_s).unwrap();
            for _ in 0..10 {
                let rival = random_feasible(inst, &mut rng);
                for rho in decompose(inst, &m, &rival).unwrap().structures {
                    let rho_s = map_up(&l, &m_s, &rho);
                    lifted += 1;
                    let positive = rho_s.edges.iter().any(|e| e.label.is_some_and(Label::is_positive))
                        || lower_copy_labels(&l, &m_s, &rho_s).iter().any(|x| x.label.is_positive());
                    if positive {
                        lift_fails.push(format!("{tag} s={s}: (1,1) edge on a lifted structure"));
                    }
                }
            }
        }
    }
    (
        first_failure(inv_fails, format!("{stable_runs} stable layered matchings (s = 2 and s = |R|)")),
        first_failure(lift_fails, format!("{lifted} lifted structures, none with a (1,1) edge")),
    )
}

/// The documented exception: a free-end path whose two ends are the same
/// hospital, where the swap along it ties.
fn is_same_hospital_tie(
    inst: &Instance,
    m: &Matching,
    kind: ViolationKind,
    walk: &[Vertex],
    swapped: &Matching,
) -> bool {
    kind == ViolationKind::OpenPath11
        && matches!(walk[0], Vertex::Hospital(_))
        && walk[0] == walk[walk.len() - 1]
        && reference_delta(inst, m, swapped) == 0
}

/// Returns (no certificate ⇒ popular) and (popular ⇒ no certificate), plus
/// whether every exception to the second has the documented shape.
fn criterion_7fg() -> ((bool, String), (bool, String), bool) {
    let mut instances = family(150, 9000, 5);
    let gap = read_instance(&std::fs::read_to_string(fixtures().join("charc_gap.lcsm")).unwrap()).unwrap();
    instances.push(("charc_gap fixture".into(), gap));
    let oracle = Oracle::default();
    struct Tally {
        matchings: usize,
        popular: usize,
        uncertified_unpopular: Vec<String>,
        certified_popular: usize,
        undocumented: Vec<String>,
    }
    let tallies: Vec<Tally> = instances
        .par_iter()
        .map(|(tag, inst)| {
            let all = all_matchings(inst);
            let mut t = Tally {
                matchings: all.len(),
                popular: 0,
                uncertified_unpopular: Vec::new(),
                certified_popular: 0,
                undocumented: Vec::new(),
            };
            for m in &all {
                let popular = reference_is_popular(inst, &all, m);
                debug_assert_eq!(popular, oracle.brute_is_popular(inst, m).unwrap().holds);
                t.popular += popular as usize;
                let mut certified = false;
                for x in &all {
                    for v in check_characterization(inst, m, x).unwrap() {
                        certified = true;
                        let swapped = apply_structure(m, &v.structure);
                        if popular && !is_same_hospital_tie(inst, m, v.kind, &v.structure.vertices, &swapped) {
                            t.undocumented.push(format!("{tag}: {:?}", v.kind));
                        }
                    }
                }
                if !popular && !certified {
                    t.uncertified_unpopular.push(format!("{tag}: unpopular {m:?} has no certificate"));
                }
                t.certified_popular += (popular && certified) as usize;
            }
            t
        })
        .collect();
    let matchings: usize = tallies.iter().map(|t| t.matchings).sum();
    let popular: usize = tallies.iter().map(|t| t.popular).sum();
    let gaps: usize = tallies.iter().map(|t| t.certified_popular).sum();
    let missed: Vec<String> = tallies.iter().flat_map(|t| t.uncertified_unpopular.clone()).collect();
    let undocumented: Vec<String> = tallies.iter().flat_map(|t| t.undocumented.clone()).collect();
    let f = first_failure(
        missed,
        format!("{} instances, {matchings} matchings: every unpopular one has a certificate", instances.len()),
    );
    let g = (
        gaps == 0,
        format!(
            "{gaps} of {popular} popular matchings still admit a certificate \
             (free-end path, both ends at one hospital, swap ties)"
        ),
    );
    (f, g, undocumented.is_empty())
}

fn criterion_8() -> (bool, String) {
    let inst = sample();
    let sizes = (
        solve_stable(&inst).len(),
        max_cardinality_popular(&inst).unwrap().len(),
        popular_among_max_cardinality(&inst).unwrap().len(),
    );
    let mut fails = Vec::new();
    if !(sizes.0 < sizes.1 && sizes.1 <= sizes.2) {
        fails.push(format!("sample sizes {sizes:?}"));
    }
    let instances = family(400, 10_000, 6);
    let mut strict = 0;
    for (tag, inst) in &instances {
        let a = solve_stable(inst).len();
        let b = max_cardinality_popular(inst).unwrap().len();
        let c = popular_among_max_cardinality(inst).unwrap().len();
        strict += (a < b) as usize;
        if !(a <= b && b <= c) {
            fails.push(format!("{tag}: sizes {a} {b} {c}"));
        }
    }
    first_failure(
        fails,
        format!(
            "{} instances monotone, {strict} strict; sample {} < {} ≤ {}",
            instances.len(),
            sizes.0,
            sizes.1,
            sizes.2
        ),
    )
}

fn benchmark() -> (bool, String) {
    let config = GeneratorConfig {
        seed: 2024,
        n_residents: 2000,
        n_hospitals: 200,
        max_capacity: 10,
        edge_density: 0.05,
        max_tree_depth: 2,
        class_branching: 2,
        quota_tightness: 0.7,
        partition: false,
    };
    let inst = generate(&config).unwrap();
    let start = Instant::now();
    let m = max_cardinality_popular(&inst).unwrap();
    let took = start.elapsed();
    let stable = solve_stable(&inst).len();
    let ok = is_feasible_matching(&inst, &m) && m.len() >= stable;
    (ok, format!("{} edges, pipeline {took:.2?}, size {} (stable {stable})", inst.num_edges(), m.len()))
}

fn main() {
    // `cargo test -- --list` and filters pass arguments; this suite has a
    // single entry point and ignores them apart from listing.
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let secs = Duration::from_secs;
    let mut lines = vec![
        check("1", "sample goldens", Some(secs(1)), criterion_1),
        check("2", "naive positional scheme contrast", Some(secs(1)), criterion_2),
        check("3", "stable matchings are popular", Some(secs(300)), criterion_3),
        check("4", "maximum-cardinality popular matching", Some(secs(600)), criterion_4),
        check("5", "popular among maximum-cardinality matchings", Some(secs(600)), criterion_5),
        check("6", "swaps along structures stay feasible", None, criterion_6),
        check("7a", "correspondence symmetry", None, criterion_7a),
        check("7b", "vote margin antisymmetry", None, criterion_7b),
        check("7c", "direct and rewritten vote margins agree", None, criterion_7c),
    ];
    // Each pair below shares one run; both lines show its duration.
    let start = Instant::now();
    let (d, e) = criterion_7de();
    let took = start.elapsed();
    lines.push(record("7d", "layered invariants I1-I3", None, d, took));
    lines.push(record("7e", "no (1,1) edge after lifting", None, e, took));
    let start = Instant::now();
    let (f, g, documented) = criterion_7fg();
    let took = start.elapsed();
    lines.push(record("7f", "no certificate implies popular", None, f, took));
    lines.push(record("7g", "popular implies no certificate", None, g, took));
    lines.push(check("8", "size chain stable ≤ max-popular ≤ popular-maxcard", None, criterion_8));
    lines.push(check("B", "benchmark |R|=2000 |H|=200 density 0.05", Some(secs(60)), benchmark));

    let passed = lines.iter().filter(|l| l.pass).count();
    let unexpected: Vec<&str> =
        lines.iter().filter(|l| !l.pass && !KNOWN_FAILURES.contains(&l.id)).map(|l| l.id).collect();
    let known: Vec<&str> = lines.iter().filter(|l| !l.pass && KNOWN_FAILURES.contains(&l.id)).map(|l| l.id).collect();
    println!(
        "acceptance: {passed}/{} criteria pass; known failures {known:?}; unexpected failures {unexpected:?}",
        lines.len()
    );
    if !documented {
        println!("acceptance: a popular matching has a certificate outside the documented exception");
    }
    if !unexpected.is_empty() || !documented {
        std::process::exit(1);
    }
}
