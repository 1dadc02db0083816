//! Command-line adapters over `lcsm-core`.
//!
//! Each verb loads its inputs, calls one library operation and turns the
//! result into an [`Outcome`]: a text report, the same content as JSON, and
//! whether the checked property held. `main` only prints and sets the exit
//! code (0 held, 1 violated, 2 usage or input error).

mod render;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lcsm_core::generate::{generate, GeneratorConfig};
use lcsm_core::io::{parse_matching, read_instance, write_instance, write_matching};
use lcsm_core::model::{blocking_pairs, is_feasible_matching};
use lcsm_core::oracle::{Guard, Oracle, Verdict};
use lcsm_core::popularity::{
    check_characterization, correspondence, decompose, delta, delta_value, reduced_decomposition, rewritten_delta,
    vote, TieBreak, Vertex,
};
use lcsm_core::reduction::{build_gs, pcsm_to_spa, write_spa};
use lcsm_core::solvers::{max_cardinality_popular, popular_among_max_cardinality};
use lcsm_core::stable::solve_stable;
use lcsm_core::{Instance, Matching};

use render::*;

/// Overrides the oracle's enumeration guard: `RESIDENTS[,PRODUCT]`.
pub const GUARD_ENV: &str = "LCSM_ORACLE_GUARD";

#[derive(Debug, Parser)]
#[command(name = "lcsm", version, about = "Stable and popular matchings under laminar class quotas")]
pub struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute a matching.
    Solve { algorithm: Algorithm, instance: PathBuf },
    /// Check a property of a matching; exits 1 when it fails.
    Verify { property: Property, instance: PathBuf, matching: PathBuf, rival: Option<PathBuf> },
    /// Votes of B against A, with the labeled decomposition of A ⊕ B.
    Compare { instance: PathBuf, a: PathBuf, b: PathBuf },
    /// Emit the layered instance with K levels, or the project-allocation view.
    Reduce {
        #[arg(long, value_name = "K", required_unless_present = "spa", conflicts_with = "spa")]
        s: Option<usize>,
        #[arg(long)]
        spa: bool,
        instance: PathBuf,
    },
    /// Generate a seeded random instance.
    Gen(GenArgs),
    /// Exhaustive checks for small instances.
    Oracle {
        /// Worker threads; 0 uses all cores.
        #[arg(long, default_value_t = 0)]
        threads: usize,
        #[command(subcommand)]
        op: OracleOp,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Stable,
    MaxPopular,
    PopularMaxcard,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Property {
    Feasible,
    Stable,
    /// Against RIVAL, or against every feasible matching.
    Popular,
    /// Path/cycle certificates against RIVAL, or against every feasible matching.
    Charc,
}

#[derive(Debug, Clone, Default, clap::Args)]
pub struct GenArgs {
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub residents: Option<usize>,
    #[arg(long)]
    pub hospitals: Option<usize>,
    #[arg(long)]
    pub max_capacity: Option<u32>,
    #[arg(long)]
    pub density: Option<f64>,
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long)]
    pub branching: Option<usize>,
    #[arg(long)]
    pub tightness: Option<f64>,
    /// One level of classes covering every list.
    #[arg(long)]
    pub partition: bool,
}

impl GenArgs {
    pub fn config(&self) -> GeneratorConfig {
        let d = GeneratorConfig::default();
        GeneratorConfig {
            seed: self.seed.unwrap_or(d.seed),
            n_residents: self.residents.unwrap_or(d.n_residents),
            n_hospitals: self.hospitals.unwrap_or(d.n_hospitals),
            max_capacity: self.max_capacity.unwrap_or(d.max_capacity),
            edge_density: self.density.unwrap_or(d.edge_density),
            max_tree_depth: self.depth.unwrap_or(d.max_tree_depth),
            class_branching: self.branching.unwrap_or(d.class_branching),
            quota_tightness: self.tightness.unwrap_or(d.quota_tightness),
            partition: self.partition,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum OracleOp {
    /// Number of feasible matchings.
    Count { instance: PathBuf },
    /// Every feasible matching in enumeration order.
    Enumerate { instance: PathBuf },
    /// Whether MATCHING is popular; a beating matching otherwise.
    Popular { instance: PathBuf, matching: PathBuf },
    /// Largest feasible matching size.
    MaxCard { instance: PathBuf },
    /// Largest popular matching size.
    MaxPopular { instance: PathBuf },
    /// Whether no maximum-cardinality matching beats MATCHING.
    Unbeaten { instance: PathBuf, matching: PathBuf },
    /// Every stable matching.
    Stable { instance: PathBuf },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub holds: bool,
    pub text: String,
    pub json: Value,
}

impl Outcome {
    fn ok(text: String, json: Value) -> Outcome {
        Outcome { holds: true, text, json }
    }

    pub fn exit_code(&self) -> u8 {
        if self.holds {
            0
        } else {
            1
        }
    }

    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            let mut s = serde_json::to_string_pretty(&self.json).expect("reports serialize");
            s.push('\n');
            s
        } else {
            self.text.clone()
        }
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

pub fn load_instance(path: &Path) -> anyhow::Result<Instance> {
    read_instance(&read(path)?).with_context(|| format!("{}", path.display()))
}

pub fn load_matching(inst: &Instance, path: &Path) -> anyhow::Result<Matching> {
    parse_matching(inst, &read(path)?).with_context(|| format!("{}", path.display()))
}

/// The oracle used by CLI verbs, honouring [`GUARD_ENV`].
pub fn oracle(threads: usize) -> anyhow::Result<Oracle> {
    let oracle = match std::env::var(GUARD_ENV) {
        Ok(v) => {
            let guard: Guard = v.parse()?;
            log::warn!(
                "{GUARD_ENV}={v}: enumeration limited to {} residents and search space {}",
                guard.max_residents,
                guard.max_product
            );
            Oracle::uniform(guard)
        }
        Err(_) => Oracle::default(),
    };
    Ok(oracle.with_threads(threads)?)
}

pub fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    match &cli.command {
        Command::Solve { algorithm, instance } => solve(*algorithm, &load_instance(instance)?),
        Command::Verify { property, instance, matching, rival } => {
            let inst = load_instance(instance)?;
            let m = load_matching(&inst, matching)?;
            let rival = rival.as_deref().map(|p| load_matching(&inst, p)).transpose()?;
            match property {
                Property::Feasible => Ok(verify_feasible(&inst, &m)),
                Property::Stable => verify_stable(&inst, &m),
                Property::Popular => verify_popular(&inst, &m, rival.as_ref()),
                Property::Charc => verify_charc(&inst, &m, rival.as_ref()),
            }
        }
        Command::Compare { instance, a, b } => {
            let inst = load_instance(instance)?;
            let a = load_matching(&inst, a)?;
            let b = load_matching(&inst, b)?;
            compare(&inst, &a, &b)
        }
        Command::Reduce { s, spa, instance } => {
            let inst = load_instance(instance)?;
            let (format, text) = match (s, spa) {
                (_, true) => ("spa", write_spa(&pcsm_to_spa(&inst)?)),
                (Some(k), false) => ("lcsm", write_instance(build_gs(&inst, *k)?.instance())),
                (None, false) => bail!("one of --s K or --spa is required"),
            };
            Ok(Outcome::ok(text.clone(), json!({ "format": format, "text": text })))
        }
        Command::Gen(args) => {
            let config = args.config();
            let text = write_instance(&generate(&config)?);
            let json = json!({ "seed": config.seed, "text": text });
            Ok(Outcome::ok(text, json))
        }
        Command::Oracle { threads, op } => run_oracle(&oracle(*threads)?, op),
    }
}

pub fn solve(algorithm: Algorithm, inst: &Instance) -> anyhow::Result<Outcome> {
    let (name, m) = match algorithm {
        Algorithm::Stable => ("stable", solve_stable(inst)),
        Algorithm::MaxPopular => ("max-popular", max_cardinality_popular(inst)?),
        Algorithm::PopularMaxcard => ("popular-maxcard", popular_among_max_cardinality(inst)?),
    };
    let text = format!("# {name} matching, size {}\n{}", m.len(), write_matching(inst, &m));
    Ok(Outcome::ok(text, json!({ "algorithm": name, "size": m.len(), "matching": pairs_json(inst, &m) })))
}

/// Classes whose quota `m` exceeds, as (hospital, class name, count, quota).
fn over_quota(inst: &Instance, m: &Matching) -> Vec<(usize, String, usize, u32)> {
    let mut out = Vec::new();
    for (h, set) in m.hospital_sets(inst.num_hospitals()).iter().enumerate() {
        for class in inst.class_tree(h).classes() {
            let n = set.iter().filter(|r| class.members.contains(r)).count();
            if n > class.quota as usize {
                out.push((h, class.name.clone(), n, class.quota));
            }
        }
    }
    out
}

fn over_quota_report(inst: &Instance, m: &Matching, text: &mut String) -> Value {
    let over = over_quota(inst, m);
    for (h, c, n, q) in &over {
        writeln!(text, "  {}.{c} holds {n}, quota {q}", inst.hospital_name(*h)).unwrap();
    }
    over.iter()
        .map(|(h, c, n, q)| json!({ "hospital": inst.hospital_name(*h), "class": c, "count": n, "quota": q }))
        .collect()
}

pub fn verify_feasible(inst: &Instance, m: &Matching) -> Outcome {
    let holds = is_feasible_matching(inst, m);
    let mut text = format!("feasible: {}\n", yes_no(holds));
    let over = over_quota_report(inst, m, &mut text);
    Outcome { holds, text, json: json!({ "property": "feasible", "holds": holds, "over_quota": over }) }
}

pub fn verify_stable(inst: &Instance, m: &Matching) -> anyhow::Result<Outcome> {
    if !is_feasible_matching(inst, m) {
        let mut text = "stable: no\nmatching is infeasible:\n".to_string();
        let over = over_quota_report(inst, m, &mut text);
        let json = json!({ "property": "stable", "holds": false, "feasible": false, "over_quota": over });
        return Ok(Outcome { holds: false, text, json });
    }
    let pairs = blocking_pairs(inst, m)?;
    let holds = pairs.is_empty();
    let mut text = format!("stable: {}\n", yes_no(holds));
    if !holds {
        text.push_str("blocking pairs:\n");
    }
    for &(r, h) in &pairs {
        writeln!(text, "  ({}, {})", inst.resident_name(r), inst.hospital_name(h)).unwrap();
    }
    let json_pairs: Vec<Value> =
        pairs.iter().map(|&(r, h)| json!([inst.resident_name(r), inst.hospital_name(h)])).collect();
    Ok(Outcome { holds, text, json: json!({ "property": "stable", "holds": holds, "blocking_pairs": json_pairs }) })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn set_text(inst: &Instance, m: &Matching) -> String {
    let pairs: Vec<String> =
        m.pairs().map(|(r, h)| format!("{} {}", inst.resident_name(r), inst.hospital_name(h))).collect();
    format!("{{{}}}", pairs.join(", "))
}

/// Δ against one rival plus any certificates it yields.
fn rival_section(inst: &Instance, m: &Matching, rival: &Matching, text: &mut String) -> anyhow::Result<Value> {
    let d = delta_value(inst, m, rival)?;
    let found = check_characterization(inst, m, rival)?;
    writeln!(text, "rival: {}", set_text(inst, rival)).unwrap();
    writeln!(text, "delta(rival, M) = {}", signed(d)).unwrap();
    violations_text(inst, &found, text);
    Ok(json!({
        "rival": pairs_json(inst, rival),
        "delta": d,
        "certificates": violations_json(inst, &found),
    }))
}

/// Popularity is decided by votes: against RIVAL alone if given, otherwise
/// by exhaustive search. Certificates are reported alongside.
pub fn verify_popular(inst: &Instance, m: &Matching, rival: Option<&Matching>) -> anyhow::Result<Outcome> {
    let mut text = String::new();
    let (holds, detail) = match rival {
        Some(x) => {
            let holds = delta_value(inst, m, x)? <= 0;
            writeln!(text, "popular against rival: {}", yes_no(holds)).unwrap();
            (holds, rival_section(inst, m, x, &mut text)?)
        }
        None => {
            let Verdict { holds, witness, .. } = oracle(1)?.brute_is_popular(inst, m)?;
            writeln!(text, "popular: {}", yes_no(holds)).unwrap();
            match witness {
                Some(x) => (holds, rival_section(inst, m, &x, &mut text)?),
                None => (holds, Value::Null),
            }
        }
    };
    let scope = if rival.is_some() { "rival" } else { "all" };
    Ok(Outcome {
        holds,
        text,
        json: json!({ "property": "popular", "scope": scope, "holds": holds, "witness": detail }),
    })
}

/// Holds when no rival yields a path/cycle certificate against M.
pub fn verify_charc(inst: &Instance, m: &Matching, rival: Option<&Matching>) -> anyhow::Result<Outcome> {
    let rivals = match rival {
        Some(x) => vec![x.clone()],
        None => oracle(1)?.enumerate_feasible(inst)?,
    };
    let mut certified = 0usize;
    let mut first: Option<&Matching> = None;
    for x in &rivals {
        if !check_characterization(inst, m, x)?.is_empty() {
            certified += 1;
            first.get_or_insert(x);
        }
    }
    let holds = certified == 0;
    let mut text = format!(
        "certificate-free: {}\nrivals checked: {}, with certificates: {certified}\n",
        yes_no(holds),
        rivals.len()
    );
    let detail = match first {
        Some(x) => rival_section(inst, m, x, &mut text)?,
        None => Value::Null,
    };
    let json = json!({
        "property": "charc",
        "holds": holds,
        "rivals": rivals.len(),
        "certified_rivals": certified,
        "first": detail,
    });
    Ok(Outcome { holds, text, json })
}

/// Votes of `b` against `a`.
pub fn compare(inst: &Instance, a: &Matching, b: &Matching) -> anyhow::Result<Outcome> {
    let tally = delta(inst, a, b)?;
    let corr = correspondence(inst, a, b, TieBreak::default())?;
    let dec = decompose(inst, a, b)?;
    let reduced = reduced_decomposition(&dec);
    let mut text = format!("delta(B, A) = {}\nresident votes:\n", signed(tally.delta));
    let mut residents = Vec::new();
    for (r, &v) in tally.per_resident.iter().enumerate() {
        let (x, y) = (a.hospital_of(r), b.hospital_of(r));
        let name = inst.resident_name(r);
        writeln!(text, "  {name}: {} -> {}  {}", partner(inst, x), partner(inst, y), signed(v as i64)).unwrap();
        residents.push(json!({ "name": name, "a": partner(inst, x), "b": partner(inst, y), "vote": v }));
    }
    text.push_str("hospital votes:\n");
    let mut hospitals = Vec::new();
    for (h, t) in tally.per_hospital.iter().enumerate() {
        let (in_a, in_b) = (a.residents_of(h), b.residents_of(h));
        let size = in_b.len() as i64 - in_a.len() as i64;
        let mut pairs = Vec::new();
        let mut pair_text = Vec::new();
        for (r, p) in corr.hospitals[h].paired() {
            if in_a.contains(&r) && !in_b.contains(&r) {
                let v = vote(inst, Vertex::Hospital(h), Some(p), Some(r))?;
                pair_text.push(format!(
                    "{} over {} {}",
                    inst.resident_name(p),
                    inst.resident_name(r),
                    signed(v as i64)
                ));
                pairs.push(json!({ "b": inst.resident_name(p), "a": inst.resident_name(r), "vote": v }));
            }
        }
        let name = inst.hospital_name(h);
        write!(text, "  {name}: {}  size {}", signed(t.vote), signed(size)).unwrap();
        if !pair_text.is_empty() {
            write!(text, "; corr {}", pair_text.join(", ")).unwrap();
        }
        text.push('\n');
        hospitals.push(json!({
            "name": name, "vote": t.vote, "size": size, "corr": pairs, "common": t.common, "vacant": t.vacant,
        }));
    }
    decomposition_text(inst, "decomposition", &dec, &mut text);
    decomposition_text(inst, "reduced", &reduced, &mut text);
    let rewritten = rewritten_delta(&reduced);
    writeln!(text, "rewritten delta = {}", signed(rewritten)).unwrap();
    let json = json!({
        "delta": tally.delta,
        "residents": residents,
        "hospitals": hospitals,
        "decomposition": decomposition_json(inst, &dec),
        "reduced": decomposition_json(inst, &reduced),
        "rewritten_delta": rewritten,
    });
    Ok(Outcome::ok(text, json))
}

fn verdict_outcome(inst: &Instance, what: &str, m: &Matching, v: Verdict) -> Outcome {
    let mut text = format!("{what}: {}\n", yes_no(v.holds));
    if let (Some(w), Some(d)) = (&v.witness, v.witness_delta) {
        writeln!(text, "witness: {}\ndelta(witness, M) = {}", set_text(inst, w), signed(d)).unwrap();
    }
    let json = json!({
        "operation": what,
        "matching": pairs_json(inst, m),
        "holds": v.holds,
        "witness": v.witness.as_ref().map(|w| pairs_json(inst, w)),
        "witness_delta": v.witness_delta,
    });
    Outcome { holds: v.holds, text, json }
}

fn list_outcome(inst: &Instance, what: &str, ms: &[Matching]) -> Outcome {
    let mut text = format!("# {what}: {}\n", ms.len());
    for m in ms {
        writeln!(text, "{}", set_text(inst, m)).unwrap();
    }
    let list: Vec<Value> = ms.iter().map(|m| pairs_json(inst, m)).collect();
    Outcome::ok(text, json!({ "operation": what, "count": ms.len(), "matchings": list }))
}

fn number_outcome(what: &str, n: u64) -> Outcome {
    Outcome::ok(format!("{what}: {n}\n"), json!({ "operation": what, "value": n }))
}

pub fn run_oracle(oracle: &Oracle, op: &OracleOp) -> anyhow::Result<Outcome> {
    Ok(match op {
        OracleOp::Count { instance } => {
            number_outcome("feasible matchings", oracle.count_feasible(&load_instance(instance)?)?)
        }
        OracleOp::Enumerate { instance } => {
            let inst = load_instance(instance)?;
            list_outcome(&inst, "feasible matchings", &oracle.enumerate_feasible(&inst)?)
        }
        OracleOp::Popular { instance, matching } => {
            let inst = load_instance(instance)?;
            let m = load_matching(&inst, matching)?;
            verdict_outcome(&inst, "popular", &m, oracle.brute_is_popular(&inst, &m)?)
        }
        OracleOp::MaxCard { instance } => {
            number_outcome("maximum cardinality", oracle.brute_max_cardinality(&load_instance(instance)?)? as u64)
        }
        OracleOp::MaxPopular { instance } => {
            number_outcome("largest popular size", oracle.brute_max_popular_size(&load_instance(instance)?)? as u64)
        }
        OracleOp::Unbeaten { instance, matching } => {
            let inst = load_instance(instance)?;
            let m = load_matching(&inst, matching)?;
            verdict_outcome(
                &inst,
                "unbeaten among maximum cardinality",
                &m,
                oracle.brute_unbeaten_among_maxcard(&inst, &m)?,
            )
        }
        OracleOp::Stable { instance } => {
            let inst = load_instance(instance)?;
            list_outcome(&inst, "stable matchings", &oracle.brute_stable_matchings(&inst)?)
        }
    })
}
