//! Command implementations behind the `irrq` binary.
//!
//! Every command returns an [`Outcome`] holding its stdout, stderr and exit
//! code instead of printing, so tests can drive commands in-process.
//!
//! Exit codes: 0 success (or irreducibly quantified, or no counterexample
//! found), 1 negative answer, 2 input error, 3 resources exceeded, 4 an
//! internal certificate failed re-verification. In batch mode the worst
//! entry wins, in the order 4, 2, 3, 1.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::congruence::DEFAULT_DEGREE_CAP;
use crate::decision::{decide, DecideOptions, Verdict};
use crate::error::{Error, LoadError};
use crate::model::{ConservedBasis, ConservedQuantity, Configuration, Interaction, SiteGraph};
use crate::binomial::DEFAULT_WORK_LIMIT;
use crate::verification::{equivalent, maximal_interaction, search_counterexample, swap_reachability_check, SearchOutcome};

/// Trials of the seeded swap spot-check run by `oracle`.
const SWAP_TRIALS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Decide irreducible quantification, with certificates.
    Check { paths: Vec<PathBuf> },
    /// Print full and normalized integer bases of conserved quantities.
    Conserved { paths: Vec<PathBuf> },
    /// Search complete site graphs directly for a counterexample.
    Oracle { paths: Vec<PathBuf> },
    /// Group interactions by equivalence of conserved spaces.
    Classify { paths: Vec<PathBuf> },
    /// Emit the largest interaction with a given conserved basis.
    Maximal { path: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Eq, Parser)]
#[command(name = "irrq", version, about = "Decide irreducible quantification of finite interactions")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// State whose conserved values are normalized to zero.
    #[arg(long, global = true, default_value_t = 0)]
    pub base_point: usize,
    /// Largest site graph tried by `oracle`.
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_sites: u64,
    /// Bound on enumerated monomials or configurations.
    #[arg(long, global = true, default_value_t = DEFAULT_DEGREE_CAP, value_parser = clap::value_parser!(u128))]
    pub degree_cap: u128,
    /// Bound on S-pair reductions per Gröbner completion.
    #[arg(long, global = true, default_value_t = DEFAULT_WORK_LIMIT)]
    pub work_limit: usize,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for batch inputs; 0 uses all cores.
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            base_point: 0,
            max_sites: 3,
            degree_cap: DEFAULT_DEGREE_CAP,
            work_limit: DEFAULT_WORK_LIMIT,
            format: OutputFormat::Text,
            seed: 0,
            jobs: 0,
        }
    }

    fn decide_options(&self) -> DecideOptions {
        DecideOptions { base_point: self.base_point, work_limit: self.work_limit, space_cap: self.degree_cap }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub exit_code: i32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
enum Status {
    Ok,
    Negative,
    Resources,
    InputError,
    Soundness,
}

impl Status {
    fn of_error(e: &Error) -> Status {
        match e {
            Error::Load(_) | Error::Precondition(_) => Status::InputError,
            Error::Resources(_) => Status::Resources,
            Error::Soundness(_) => Status::Soundness,
        }
    }

    fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Negative => 1,
            Status::InputError => 2,
            Status::Resources => 3,
            Status::Soundness => 4,
        }
    }

    fn severity(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Negative => 1,
            Status::Resources => 2,
            Status::InputError => 3,
            Status::Soundness => 4,
        }
    }
}

fn aggregate(statuses: impl IntoIterator<Item = Status>) -> i32 {
    statuses.into_iter().max_by_key(|s| s.severity()).unwrap_or(Status::Ok).exit_code()
}

/// One interaction read from an input file. `name` is `path` for a single
/// object and `path#k` for entry `k` of a list.
struct Entry {
    name: String,
    interaction: Result<Interaction, LoadError>,
}

fn load_entries(paths: &[PathBuf]) -> Vec<Entry> {
    let mut out = Vec::new();
    for path in paths {
        let name = path.display().to_string();
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                out.push(Entry { name, interaction: Err(LoadError::Malformed(e.to_string())) });
                continue;
            }
        };
        match serde_json::from_str::<Value>(&text) {
            Ok(Value::Array(items)) => {
                for (k, item) in items.iter().enumerate() {
                    out.push(Entry {
                        name: format!("{name}#{k}"),
                        interaction: Interaction::from_json(&item.to_string()),
                    });
                }
            }
            Ok(_) => out.push(Entry { name, interaction: Interaction::from_json(&text) }),
            Err(e) => out.push(Entry { name, interaction: Err(LoadError::Malformed(e.to_string())) }),
        }
    }
    out
}

fn in_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

fn json_out<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

pub fn run(cfg: &RunConfig) -> Outcome {
    match &cfg.command {
        Command::Check { paths } => cmd_check(cfg, paths),
        Command::Conserved { paths } => cmd_conserved(cfg, paths),
        Command::Oracle { paths } => cmd_oracle(cfg, paths),
        Command::Classify { paths } => cmd_classify(cfg, paths),
        Command::Maximal { path } => cmd_maximal(cfg, path),
    }
}

fn fmt_values(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

fn fmt_config(c: &Configuration) -> String {
    let parts: Vec<String> = c.states().iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

fn fmt_basis(basis: &[ConservedQuantity]) -> String {
    if basis.is_empty() {
        return "(none)".into();
    }
    basis.iter().map(|q| fmt_values(&q.values)).collect::<Vec<_>>().join(" ")
}

// ---- check ----

#[derive(Serialize)]
struct CheckReport {
    input: String,
    status: Status,
    error: Option<String>,
    verdict: Option<Verdict>,
}

fn check_entry(entry: &Entry, opts: &DecideOptions) -> CheckReport {
    let result = entry.interaction.clone().map_err(Error::from).and_then(|i| decide(&i, opts));
    match result {
        Ok(v) => CheckReport {
            input: entry.name.clone(),
            status: if v.irreducibly_quantified { Status::Ok } else { Status::Negative },
            error: None,
            verdict: Some(v),
        },
        Err(e) => CheckReport { input: entry.name.clone(), status: Status::of_error(&e), error: Some(e.to_string()), verdict: None },
    }
}

fn check_text(r: &CheckReport, out: &mut String) {
    let _ = writeln!(out, "== {}", r.input);
    let Some(v) = &r.verdict else {
        let _ = writeln!(out, "error: {}", r.error.as_deref().unwrap_or(""));
        return;
    };
    let _ = write!(out, "exchangeable: {}", v.exchangeable);
    if let Some(w) = v.exchangeable_witness {
        let _ = write!(out, " (pair ({},{}) cannot reach its swap)", w.0, w.1);
    }
    out.push('\n');
    if let Some(sep) = v.separable {
        let _ = write!(out, "separable: {sep}");
        if let Some((s, t)) = v.separable_witness {
            let _ = write!(out, " (states {s} and {t} share all conserved values)");
        }
        out.push('\n');
    }
    if let Some(c) = &v.conserved {
        let _ = writeln!(out, "conserved (normalized at {}): {}", c.base_point, fmt_basis(&c.normalized));
    }
    if let (Some(t), Some(d)) = (v.torsion_free, &v.elementary_divisors) {
        let _ = writeln!(out, "torsion_free: {t} (elementary divisors {})", fmt_values(d));
    }
    if let Some(c) = v.cancellative {
        let _ = writeln!(out, "cancellative: {c}");
    }
    if let Some(eq) = v.lattice_ideal_equal {
        let _ = write!(out, "lattice_ideal_equal: {eq}");
        if let Some(w) = &v.lattice_ideal_witness {
            let _ = write!(out, " (witness x^{:?} - x^{:?})", w.lead.counts(), w.trail.counts());
        }
        out.push('\n');
    }
    let _ = writeln!(out, "irreducibly_quantified: {}", v.irreducibly_quantified);
    if let Some(c) = &v.counterexample {
        let _ = writeln!(
            out,
            "counterexample: {} vs {} on the complete graph with {} sites",
            fmt_config(&c.eta),
            fmt_config(&c.eta_prime),
            c.graph.size()
        );
    }
}

pub fn cmd_check(cfg: &RunConfig, paths: &[PathBuf]) -> Outcome {
    let entries = load_entries(paths);
    let opts = cfg.decide_options();
    let reports: Vec<CheckReport> = in_pool(cfg.jobs, || entries.par_iter().map(|e| check_entry(e, &opts)).collect());
    let exit_code = aggregate(reports.iter().map(|r| r.status));
    let stdout = match cfg.format {
        OutputFormat::Json => json_out(&reports),
        OutputFormat::Text => {
            let mut s = String::new();
            reports.iter().for_each(|r| check_text(r, &mut s));
            s
        }
    };
    Outcome { stdout, stderr: errors_of(reports.iter().map(|r| (&r.input, &r.error))), exit_code }
}

fn errors_of<'a>(items: impl Iterator<Item = (&'a String, &'a Option<String>)>) -> String {
    let mut s = String::new();
    for (name, err) in items {
        if let Some(e) = err {
            let _ = writeln!(s, "{name}: {e}");
        }
    }
    s
}

// ---- conserved ----

#[derive(Serialize)]
struct ConservedReport {
    input: String,
    status: Status,
    error: Option<String>,
    conserved: Option<ConservedBasis>,
}

pub fn cmd_conserved(cfg: &RunConfig, paths: &[PathBuf]) -> Outcome {
    let reports: Vec<ConservedReport> = load_entries(paths)
        .into_iter()
        .map(|e| {
            let result = e.interaction.map_err(Error::from).and_then(|i| {
                if cfg.base_point >= i.states() {
                    Err(Error::Precondition(format!("base point {} out of range for {} states", cfg.base_point, i.states())))
                } else {
                    Ok(i.conserved_basis(cfg.base_point))
                }
            });
            match result {
                Ok(c) => ConservedReport { input: e.name, status: Status::Ok, error: None, conserved: Some(c) },
                Err(err) => ConservedReport {
                    input: e.name,
                    status: Status::of_error(&err),
                    error: Some(err.to_string()),
                    conserved: None,
                },
            }
        })
        .collect();
    let exit_code = aggregate(reports.iter().map(|r| r.status));
    let stdout = match cfg.format {
        OutputFormat::Json => json_out(&reports),
        OutputFormat::Text => {
            let mut s = String::new();
            for r in &reports {
                let _ = writeln!(s, "== {}", r.input);
                match &r.conserved {
                    Some(c) => {
                        let _ = writeln!(s, "full: {}", fmt_basis(&c.full));
                        let _ = writeln!(s, "normalized (base point {}): {}", c.base_point, fmt_basis(&c.normalized));
                    }
                    None => {
                        let _ = writeln!(s, "error: {}", r.error.as_deref().unwrap_or(""));
                    }
                }
            }
            s
        }
    };
    Outcome { stdout, stderr: errors_of(reports.iter().map(|r| (&r.input, &r.error))), exit_code }
}

// ---- oracle ----

#[derive(Serialize)]
struct OracleReport {
    input: String,
    status: Status,
    error: Option<String>,
    search: Option<SearchOutcome>,
    /// Seeded spot-check that transposing two sites stays in a component;
    /// only run for exchangeable inputs.
    swap_check: Option<bool>,
}

fn oracle_entry(entry: &Entry, cfg: &RunConfig, index: usize) -> OracleReport {
    let max_sites = cfg.max_sites as usize;
    let result = entry.interaction.clone().map_err(Error::from).and_then(|i| {
        let search = search_counterexample(&i, max_sites, cfg.degree_cap)?;
        let swap = if i.is_exchangeable() {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(index as u64));
            Some(swap_reachability_check(&i, &SiteGraph::path(max_sites), SWAP_TRIALS, &mut rng, cfg.degree_cap)?)
        } else {
            None
        };
        Ok((search, swap))
    });
    match result {
        Ok((search, swap_check)) => {
            let mut status = match search {
                SearchOutcome::Found(_) => Status::Negative,
                SearchOutcome::VerifiedUpTo { .. } => Status::Ok,
            };
            let mut error = None;
            if swap_check == Some(false) {
                status = Status::Soundness;
                error = Some("a site transposition left its component".into());
            }
            OracleReport { input: entry.name.clone(), status, error, search: Some(search), swap_check }
        }
        Err(e) => OracleReport {
            input: entry.name.clone(),
            status: Status::of_error(&e),
            error: Some(e.to_string()),
            search: None,
            swap_check: None,
        },
    }
}

pub fn cmd_oracle(cfg: &RunConfig, paths: &[PathBuf]) -> Outcome {
    let entries = load_entries(paths);
    let reports: Vec<OracleReport> = in_pool(cfg.jobs, || {
        entries.par_iter().enumerate().map(|(k, e)| oracle_entry(e, cfg, k)).collect()
    });
    let exit_code = aggregate(reports.iter().map(|r| r.status));
    let stdout = match cfg.format {
        OutputFormat::Json => json_out(&reports),
        OutputFormat::Text => {
            let mut s = String::new();
            for r in &reports {
                let _ = writeln!(s, "== {}", r.input);
                match &r.search {
                    Some(SearchOutcome::VerifiedUpTo { sites }) => {
                        let _ = writeln!(s, "verified-up-to {sites}");
                    }
                    Some(SearchOutcome::Found(c)) => {
                        let _ = writeln!(
                            s,
                            "counterexample: {} vs {} on the complete graph with {} sites",
                            fmt_config(&c.eta),
                            fmt_config(&c.eta_prime),
                            c.graph.size()
                        );
                    }
                    None => {}
                }
                if let Some(ok) = r.swap_check {
                    let _ = writeln!(s, "swap check: {}", if ok { "passed" } else { "FAILED" });
                }
                if let Some(e) = &r.error {
                    let _ = writeln!(s, "error: {e}");
                }
            }
            s
        }
    };
    Outcome { stdout, stderr: errors_of(reports.iter().map(|r| (&r.input, &r.error))), exit_code }
}

// ---- classify ----

#[derive(Serialize)]
struct ClassMember {
    input: String,
    /// Bijection from this member's states to the class representative's,
    /// under which conserved quantities correspond.
    map: Vec<usize>,
    status: Status,
    error: Option<String>,
    irreducibly_quantified: Option<bool>,
    verdict: Option<Verdict>,
}

#[derive(Serialize)]
struct ClassifyReport {
    classes: Vec<Vec<ClassMember>>,
    /// Inputs that could not be loaded or compared.
    errors: Vec<ClassMember>,
}

pub fn cmd_classify(cfg: &RunConfig, paths: &[PathBuf]) -> Outcome {
    let entries = load_entries(paths);
    let opts = cfg.decide_options();
    let checks: Vec<CheckReport> = in_pool(cfg.jobs, || entries.par_iter().map(|e| check_entry(e, &opts)).collect());

    let member = |k: usize, map: Vec<usize>, err: Option<String>| {
        let c = &checks[k];
        let status = if err.is_some() { Status::Resources } else { c.status };
        ClassMember {
            input: c.input.clone(),
            map,
            status,
            error: err.or_else(|| c.error.clone()),
            irreducibly_quantified: c.verdict.as_ref().map(|v| v.irreducibly_quantified),
            verdict: c.verdict.clone(),
        }
    };

    // representative entry index, members as (entry index, map)
    type Class = (usize, Vec<(usize, Vec<usize>)>);
    let mut classes: Vec<Class> = Vec::new();
    let mut errors = Vec::new();
    for (k, e) in entries.iter().enumerate() {
        let Ok(i) = &e.interaction else {
            errors.push(member(k, Vec::new(), None));
            continue;
        };
        let mut placed = false;
        let mut failure = None;
        for (rep, members) in classes.iter_mut() {
            let Ok(r) = &entries[*rep].interaction else { unreachable!("representatives load") };
            match equivalent(r, i) {
                Ok(Some(perm)) => {
                    let mut map = vec![0; perm.len()];
                    for (s, &t) in perm.iter().enumerate() {
                        map[t] = s;
                    }
                    members.push((k, map));
                    placed = true;
                    break;
                }
                Ok(None) => {}
                Err(err) => {
                    failure = Some(err.to_string());
                    break;
                }
            }
        }
        if let Some(err) = failure {
            errors.push(member(k, Vec::new(), Some(err)));
        } else if !placed {
            classes.push((k, vec![(k, (0..i.states()).collect())]));
        }
    }
    let report = ClassifyReport {
        classes: classes
            .into_iter()
            .map(|(_, ms)| ms.into_iter().map(|(k, map)| member(k, map, None)).collect())
            .collect(),
        errors,
    };
    let exit_code = aggregate(report.errors.iter().map(|m| m.status));
    let stdout = match cfg.format {
        OutputFormat::Json => json_out(&report),
        OutputFormat::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "{} classes", report.classes.len());
            for (c, members) in report.classes.iter().enumerate() {
                let _ = writeln!(s, "class {c}:");
                for m in members {
                    let iq = m.irreducibly_quantified.map_or("undecided".to_string(), |b| b.to_string());
                    let _ = writeln!(s, "  {} map {:?} irreducibly_quantified: {iq}", m.input, m.map);
                }
            }
            for m in &report.errors {
                let _ = writeln!(s, "error: {}: {}", m.input, m.error.as_deref().unwrap_or(""));
            }
            s
        }
    };
    let stderr = errors_of(report.errors.iter().map(|m| (&m.input, &m.error)));
    Outcome { stdout, stderr, exit_code }
}

// ---- maximal ----

fn parse_big(v: &Value) -> Result<BigInt, LoadError> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| LoadError::Malformed(format!("basis entry {n} is not an integer"))),
        Value::String(s) => s.parse().map_err(|_| LoadError::Malformed(format!("basis entry {s:?} is not an integer"))),
        other => Err(LoadError::Malformed(format!("basis entry {other} is not an integer"))),
    }
}

/// Parses `{"states": n, "basis": [[...], ...]}`. Entries may be JSON
/// integers or decimal strings.
pub fn parse_basis_file(text: &str) -> Result<(usize, Vec<ConservedQuantity>), LoadError> {
    #[derive(serde::Deserialize)]
    #[serde(deny_unknown_fields)]
    struct BasisFile {
        states: usize,
        basis: Vec<Vec<Value>>,
    }
    let file: BasisFile = serde_json::from_str(text).map_err(|e| LoadError::Malformed(e.to_string()))?;
    if file.states == 0 {
        return Err(LoadError::NoStates);
    }
    let mut basis = Vec::new();
    for row in &file.basis {
        if row.len() != file.states {
            return Err(LoadError::BasisLength { expected: file.states, found: row.len() });
        }
        basis.push(ConservedQuantity::new(row.iter().map(parse_big).collect::<Result<_, _>>()?));
    }
    Ok((file.states, basis))
}

pub fn cmd_maximal(_cfg: &RunConfig, path: &PathBuf) -> Outcome {
    let result = std::fs::read_to_string(path)
        .map_err(|e| Error::from(LoadError::Malformed(e.to_string())))
        .and_then(|text| Ok(parse_basis_file(&text)?))
        .and_then(|(n, basis)| {
            let i = maximal_interaction(n, &basis);
            if let Some(q) = basis.iter().find(|q| !q.is_conserved_by(&i)) {
                return Err(Error::Soundness(format!("{} not conserved by the maximal interaction", fmt_values(&q.values))));
            }
            Ok(i)
        });
    match result {
        Ok(i) => Outcome { stdout: json_out(&i), stderr: String::new(), exit_code: 0 },
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("{}: {e}\n", path.display()),
            exit_code: Status::of_error(&e).exit_code(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    #[test]
    fn aggregate_prefers_worst() {
        assert_eq!(aggregate([Status::Ok, Status::Negative]), 1);
        assert_eq!(aggregate([Status::Negative, Status::Resources]), 3);
        assert_eq!(aggregate([Status::Resources, Status::InputError]), 2);
        assert_eq!(aggregate([Status::InputError, Status::Soundness]), 4);
        assert_eq!(aggregate([]), 0);
    }

    #[test]
    fn batch_list_names_entries() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(&dir, "b.json", r#"[{"states":2,"edges":[[[0,1],[1,0]]]},{"states":2,"edges":[]}]"#);
        let names: Vec<String> = load_entries(&[p]).into_iter().map(|e| e.name).collect();
        assert!(names[0].ends_with("b.json#0") && names[1].ends_with("b.json#1"));
    }

    #[test]
    fn basis_file_parsing() {
        let (n, b) = parse_basis_file(r#"{"states":3,"basis":[[0,1,"2"]]}"#).unwrap();
        assert_eq!(n, 3);
        assert_eq!(b, vec![ConservedQuantity::from_i64(&[0, 1, 2])]);
        assert_eq!(
            parse_basis_file(r#"{"states":3,"basis":[[0,1]]}"#),
            Err(LoadError::BasisLength { expected: 3, found: 2 })
        );
        assert!(parse_basis_file(r#"{"states":3}"#).is_err());
    }
}
