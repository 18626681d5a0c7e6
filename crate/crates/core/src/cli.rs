//! Command-line front end.
//!
//! Every command prints a human-readable table by default, or with `--json`
//! a single envelope object
//! `{"schema_version", "command", "input", "result", "warnings"}` on stdout.
//! Diagnostics go to stderr. Exit codes: 0 success, 1 capacity or internal
//! failure, 2 invalid input.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::Signed;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::families::{fermat_asymptotics, sigma_m_rows, FamilyRow};
use crate::json::rational_value;
use crate::limits::Limits;
use crate::reeb::{connected_sum_chi, has_isolated_exponent, mean_euler};
use crate::reproduce;
use crate::search::{certify_non_brieskorn_pairs, distinctness_classes, enumerate_sphere_tuples, persist, write_jsonl};
use crate::topology::{build_graph, chi_s1, evaluate_criterion, kappa, ExponentTuple};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "brieskorn", version, about = "Exact invariants of Brieskorn manifolds and contact connected sums")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Emit a single JSON object instead of tables.
    #[arg(long, global = true)]
    pub json: bool,

    /// Largest tuple length for subset enumeration.
    #[arg(long = "cap-subsets", env = "BK_CAP_SUBSETS", global = true)]
    pub cap_subsets: Option<usize>,

    /// Largest inclusion-exclusion antichain.
    #[arg(long = "cap-antichain", env = "BK_CAP_ANTICHAIN", global = true)]
    pub cap_antichain: Option<usize>,

    /// Largest Fermat index l+n.
    #[arg(long = "cap-fermat", env = "BK_CAP_FERMAT", global = true)]
    pub cap_fermat: Option<u32>,

    /// Longest range counted by the direct loop.
    #[arg(long = "direct-count-limit", env = "BK_DIRECT_COUNT_LIMIT", global = true)]
    pub direct_count_limit: Option<u64>,

    /// Largest number of candidate tuples visited by `search`.
    #[arg(long = "search-budget", env = "BK_SEARCH_BUDGET", global = true)]
    pub search_budget: Option<u64>,
}

impl GlobalArgs {
    pub fn limits(&self) -> Limits {
        let d = Limits::default();
        Limits {
            subset_cap: self.cap_subsets.unwrap_or(d.subset_cap),
            antichain_cap: self.cap_antichain.unwrap_or(d.antichain_cap),
            fermat_cap: self.cap_fermat.unwrap_or(d.fermat_cap),
            direct_count_limit: self.direct_count_limit.unwrap_or(d.direct_count_limit),
            search_budget: self.search_budget.unwrap_or(d.search_budget),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate Brieskorn's sphere criterion.
    Criterion {
        /// Exponents, space- or comma-separated.
        #[arg(required = true, num_args = 1..)]
        entries: Vec<String>,
    },
    /// Homology rank, equivariant and mean Euler characteristics.
    Invariants {
        #[arg(required = true, num_args = 1..)]
        entries: Vec<String>,
        /// Print the Reeb period strata.
        #[arg(long)]
        strata: bool,
    },
    /// Mean Euler characteristic of a contact connected sum, e.g.
    /// `sum 4,5,9,19 + 4,5,9,19`.
    Sum {
        #[arg(required = true, num_args = 1.., allow_hyphen_values = true)]
        terms: Vec<String>,
    },
    /// Scan one of the parametric families.
    #[command(subcommand)]
    Family(FamilyCommand),
    /// Enumerate sphere 4-tuples and certify non-Brieskorn connected sums.
    Search {
        #[arg(long = "max-exponent")]
        max_exponent: u64,
        /// Write certificates as JSON lines.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full reproduction suite.
    VerifyPaper,
}

#[derive(Debug, Subcommand)]
pub enum FamilyCommand {
    /// Σ(m, m+1, 2m+1, 4m+3)
    SigmaM {
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
    },
    /// Consecutive Fermat numbers (F_l, ..., F_{l+n}).
    Fermat {
        #[arg(long)]
        ell: u32,
        #[arg(long)]
        n: u32,
        /// Number of consecutive values of l to scan.
        #[arg(long, default_value_t = 1)]
        scan: u32,
    },
}

/// Parse the arguments and run the command, returning the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(rendered.as_bytes()) } else { out.write_all(rendered.as_bytes()) };
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(output) => {
            let text = if cli.global.json {
                let envelope = json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": output.command,
                    "input": output.input,
                    "result": output.result,
                    "warnings": output.warnings,
                });
                format!("{}\n", serde_json::to_string_pretty(&envelope).expect("serializable"))
            } else {
                for w in &output.warnings {
                    let _ = writeln!(err, "warning: {w}");
                }
                output.text
            };
            let _ = out.write_all(text.as_bytes());
            output.exit_code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_user_error() {
                2
            } else {
                1
            }
        }
    }
}

/// Result of one command before rendering.
pub struct Output {
    pub command: &'static str,
    pub input: Value,
    pub result: Value,
    pub warnings: Vec<String>,
    pub text: String,
    pub exit_code: i32,
}

impl Output {
    fn new(command: &'static str, input: Value, result: Value, text: String) -> Self {
        Output { command, input, result, warnings: Vec::new(), text, exit_code: 0 }
    }
}

pub fn execute(cli: &Cli) -> Result<Output> {
    let limits = cli.global.limits();
    match &cli.command {
        Command::Criterion { entries } => criterion(&parse_tuple(entries)?),
        Command::Invariants { entries, strata } => invariants(&parse_tuple(entries)?, *strata, &limits),
        Command::Sum { terms } => sum(terms, &limits),
        Command::Family(FamilyCommand::SigmaM { from, to }) => family_sigma_m(*from, *to, &limits),
        Command::Family(FamilyCommand::Fermat { ell, n, scan }) => family_fermat(*ell, *n, *scan, &limits),
        Command::Search { max_exponent, out } => search(*max_exponent, out.as_deref(), &limits),
        Command::VerifyPaper => verify_paper(&limits),
    }
}

/// Exponents from tokens that may themselves be comma-separated.
pub fn parse_tuple<S: AsRef<str>>(tokens: &[S]) -> Result<ExponentTuple> {
    let entries = tokens
        .iter()
        .flat_map(|t| t.as_ref().split([',', ' ']).map(str::trim).filter(|s| !s.is_empty()).collect::<Vec<_>>())
        .map(|s| s.parse::<BigInt>().map_err(|_| Error::InvalidInput(format!("not an integer: {s:?}"))))
        .collect::<Result<Vec<_>>>()?;
    ExponentTuple::new(entries)
}

fn index_set(ix: &[usize]) -> String {
    format!("{{{}}}", ix.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
}

fn criterion(a: &ExponentTuple) -> Result<Output> {
    let verdict = evaluate_criterion(a)?;
    let graph = build_graph(a);
    let label = |ix: &[usize]| ix.iter().map(|&i| format!("a_{i}={}", a.entries()[i])).collect::<Vec<_>>().join(", ");
    let mut text = String::new();
    text += &format!("tuple                {a}\n");
    text += &format!("dimension            {}\n", a.dimension());
    text += &format!("verdict              {}\n", verdict.kind);
    text += &format!(
        "components           {}\n",
        graph.components.iter().map(|c| index_set(c)).collect::<Vec<_>>().join(" ")
    );
    text += &format!("isolated points      {}\n", if verdict.isolated_points.is_empty() { "none".into() } else { label(&verdict.isolated_points) });
    text += &format!(
        "even component       {} (size {}, pairwise gcd 2: {})\n",
        if graph.even_component.is_empty() { "empty".into() } else { label(&graph.even_component) },
        verdict.even_component_size,
        if verdict.even_component_pairwise_gcd2 { "yes" } else { "no" }
    );
    let result = json!({
        "tuple": a.to_strings(),
        "dimension": a.dimension(),
        "verdict": verdict,
        "graph": graph,
    });
    Ok(Output::new("criterion", json!({ "tuple": a.to_strings() }), result, text))
}

fn invariants(a: &ExponentTuple, show_strata: bool, limits: &Limits) -> Result<Output> {
    let k = kappa(a, limits)?;
    let chi = chi_s1(a, limits)?;
    let report = mean_euler(a, limits)?;
    let verdict = if a.len() >= 3 { Some(evaluate_criterion(a)?) } else { None };

    let chi_m_text = match &report.value {
        Some(v) => v.to_string(),
        None => "undefined (μ_RS = 0)".to_string(),
    };
    let mut text = String::new();
    text += &format!("tuple                {a}\n");
    text += &format!("dimension            {}\n", a.dimension());
    if let Some(v) = &verdict {
        text += &format!("verdict              {}\n", v.kind);
    }
    text += &format!("d = lcm              {}\n", report.period);
    text += &format!("kappa                {k}\n");
    text += &format!("chi_S1               {chi}\n");
    text += &format!("total mu_RS          {}\n", report.total_mu_rs);
    text += &format!("isolated exponent    {}\n", if has_isolated_exponent(a) { "yes" } else { "no" });
    text += &format!("chi_m                {chi_m_text}\n");
    if show_strata {
        text += &format!("\n{:>12}  {:<24} {:>4} {:>10} {:>10} {:>8}\n", "T", "b", "dim", "mu_RS", "phi", "chi_S1");
        for s in &report.strata {
            text += &format!(
                "{:>12}  {:<24} {:>4} {:>10} {:>10} {:>8}\n",
                s.period.to_string(),
                s.subtuple.to_string(),
                s.dim,
                s.mu_rs.to_string(),
                s.frequency.to_string(),
                s.chi_s1.to_string()
            );
        }
    }

    let mut result = json!({
        "tuple": a.to_strings(),
        "dimension": a.dimension(),
        "verdict": verdict,
        "d": report.period.to_string(),
        "kappa": k.to_string(),
        "chi_s1": chi.to_string(),
        "total_mu_rs": report.total_mu_rs.to_string(),
        "has_isolated_exponent": has_isolated_exponent(a),
        "chi_m_defined": report.defined(),
        "chi_m": report.value.as_ref().map(rational_value),
    });
    if show_strata {
        result["strata"] = serde_json::to_value(&report.strata).expect("serializable");
    }
    let input = json!({ "tuple": a.to_strings(), "strata": show_strata });
    Ok(Output::new("invariants", input, result, text))
}

fn sum(terms: &[String], limits: &Limits) -> Result<Output> {
    let joined = terms.join(" ");
    let tuples = joined
        .split('+')
        .map(|group| {
            let tokens: Vec<&str> = group.split_whitespace().collect();
            if tokens.is_empty() {
                return Err(Error::InvalidInput("empty summand in connected sum".into()));
            }
            parse_tuple(&tokens)
        })
        .collect::<Result<Vec<_>>>()?;
    let len = tuples[0].len();
    if let Some(t) = tuples.iter().find(|t| t.len() != len) {
        return Err(Error::InvalidInput(format!(
            "all summands must have the same dimension; {} has length {}, expected {len}",
            t,
            t.len()
        )));
    }
    if len < 3 {
        return Err(Error::InvalidInput("connected sums need tuples of length at least 3".into()));
    }

    let mut warnings = Vec::new();
    let mut values = Vec::new();
    let mut all_spheres = true;
    let mut rows = Vec::new();
    let mut text = String::new();
    for t in &tuples {
        let chi = mean_euler(t, limits)?
            .value
            .ok_or_else(|| Error::Precondition(format!("mean Euler characteristic of {t} is undefined (μ_RS = 0)")))?;
        let sphere = evaluate_criterion(t)?.is_sphere();
        if !sphere {
            all_spheres = false;
            warnings.push(format!("{t} is not a Brieskorn sphere"));
        }
        text += &format!("chi_m{t} = {chi}\n");
        rows.push(json!({ "tuple": t.to_strings(), "chi_m": rational_value(&chi), "sphere": sphere }));
        values.push(chi);
    }
    let n = len - 1;
    let total = connected_sum_chi(&values, n)?;
    let certified = len == 4 && tuples.len() >= 2 && all_spheres && !total.is_positive();
    if len != 4 && !total.is_positive() {
        warnings.push("non-Brieskorn certification is only available in dimension 5".into());
    }
    text += &format!("chi_m of connected sum = {total}\n");
    if certified {
        text += "certified non-Brieskorn (every 5-dimensional Brieskorn sphere has chi_m > 0)\n";
    }
    let result = json!({
        "summands": rows,
        "n": n,
        "chi_m_sum": rational_value(&total),
        "certified_non_brieskorn": certified,
    });
    let input = json!({ "summands": tuples.iter().map(|t| t.to_strings()).collect::<Vec<_>>() });
    let mut output = Output::new("sum", input, result, text);
    output.warnings = warnings;
    Ok(output)
}

fn family_table(rows: &[FamilyRow]) -> String {
    let mut text = format!("{:>6}  {:<24} {:<14} {:<22} {:<22} {}\n", "m", "tuple", "verdict", "chi_m", "closed form", "agree");
    for r in rows {
        let chi = r.chi_m.as_ref().map(ToString::to_string).unwrap_or_else(|| "undefined".into());
        let (closed, agree) = match (&r.closed_form, r.agrees) {
            (Some(c), Some(true)) => (c.to_string(), "✓".to_string()),
            (Some(c), _) => (c.to_string(), "✗".to_string()),
            (None, _) => ("-".to_string(), "closed form n/a (3 | m)".to_string()),
        };
        text += &format!(
            "{:>6}  {:<24} {:<14} {:<22} {:<22} {}\n",
            r.parameter.to_string(),
            r.tuple.to_string(),
            r.sphere_verdict.kind.as_str(),
            chi,
            closed,
            agree
        );
    }
    text
}

fn family_sigma_m(from: u64, to: u64, limits: &Limits) -> Result<Output> {
    if from < 2 || from > to {
        return Err(Error::InvalidInput(format!("need 2 <= from <= to, got {from}..{to}")));
    }
    let rows = sigma_m_rows(from..=to, limits)?;
    let valid: Vec<&FamilyRow> = rows.iter().filter(|r| r.closed_form.is_some()).collect();
    let all_agree = valid.iter().all(|r| r.agrees == Some(true));
    let decreasing = valid.windows(2).all(|w| w[1].chi_m < w[0].chi_m);
    let mut text = family_table(&rows);
    text += &format!(
        "\nclosed form agrees on {}/{} rows with gcd(m,3)=1; strictly decreasing over those rows: {}\n",
        valid.iter().filter(|r| r.agrees == Some(true)).count(),
        valid.len(),
        if decreasing { "yes" } else { "no" }
    );
    let result = json!({
        "rows": rows,
        "all_agree": all_agree,
        "strictly_decreasing_coprime_rows": decreasing,
    });
    Ok(Output::new("family sigma-m", json!({ "from": from, "to": to }), result, text))
}

fn family_fermat(ell: u32, n: u32, scan: u32, limits: &Limits) -> Result<Output> {
    if scan == 0 {
        return Err(Error::InvalidInput("--scan must be at least 1".into()));
    }
    let last = ell
        .checked_add(scan - 1)
        .ok_or_else(|| Error::InvalidInput("Fermat index overflow".into()))?;
    let report = fermat_asymptotics(ell..=last, n, limits)?;
    let mut text = String::new();
    for r in &report.rows {
        text += &format!("l = {}\n", r.ell);
        text += &format!("  tuple              {}\n", r.tuple);
        if let Some(v) = &r.sphere_verdict {
            text += &format!("  verdict            {}\n", v.kind);
        }
        text += &format!("  chi_m              {}\n", r.chi_m);
        text += &format!("  ratio to 1/(2x^3)  {}\n", r.asymptotic_ratio);
        text += &format!("  signed self sum    {}\n", r.signed_self_sum);
    }
    text += "\n";
    for c in &report.checks {
        text += &format!("{} {}{}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, if c.detail.is_empty() { String::new() } else { format!(" ({})", c.detail) });
    }
    let input = json!({ "ell": ell, "n": n, "scan": scan });
    let result = serde_json::to_value(&report).expect("serializable");
    Ok(Output::new("family fermat", input, result, text))
}

fn search(max_exponent: u64, out: Option<&std::path::Path>, limits: &Limits) -> Result<Output> {
    let spheres = enumerate_sphere_tuples(max_exponent, 4, limits)?;
    let certs = certify_non_brieskorn_pairs(&spheres, limits)?;
    let classes = distinctness_classes(&certs);
    let boundary = certs.iter().filter(|c| c.boundary).count();
    let inconclusive = classes.iter().filter(|c| !c.conclusive).count();
    if let Some(path) = out {
        persist(&certs, path)?;
    }
    let mut text = String::new();
    text += &format!("sphere 4-tuples with entries <= {max_exponent}: {}\n", spheres.len());
    text += &format!("certificates: {} ({} boundary)\n", certs.len(), boundary);
    text += &format!("distinct chi_m classes: {} ({} inconclusive)\n", classes.len(), inconclusive);
    match out {
        Some(path) => text += &format!("written to {}\n", path.display()),
        None => {
            let mut buf = Vec::new();
            write_jsonl(&certs, &mut buf).map_err(|source| Error::Io { path: "<stdout>".into(), source })?;
            text += &String::from_utf8(buf).expect("JSON is UTF-8");
        }
    }
    let mut result = json!({
        "sphere_tuples": spheres.len(),
        "certificates": certs.len(),
        "boundary_certificates": boundary,
        "classes": classes.len(),
        "inconclusive_classes": inconclusive,
        "out": out.map(|p| p.display().to_string()),
    });
    if out.is_none() {
        result["certificate_list"] = serde_json::to_value(&certs).expect("serializable");
    }
    let input = json!({ "max_exponent": max_exponent, "out": out.map(|p| p.display().to_string()) });
    Ok(Output::new("search", input, result, text))
}

fn verify_paper(limits: &Limits) -> Result<Output> {
    let suite = reproduce::run(limits);
    let mut text = String::new();
    for item in &suite.items {
        text += &format!(
            "{} [{:>2}] {} ({} ms): {}\n",
            if item.passed { "PASS" } else { "FAIL" },
            item.id,
            item.title,
            item.elapsed_ms,
            item.detail
        );
    }
    let passed = suite.items.iter().filter(|i| i.passed).count();
    text += &format!("\n{passed}/{} items passed in {} ms\n", suite.items.len(), suite.elapsed_ms);
    let mut output = Output::new(
        "verify-paper",
        json!({}),
        json!({ "passed": suite.passed(), "items": suite.items, "elapsed_ms": suite.elapsed_ms }),
        text,
    );
    output.exit_code = if suite.passed() { 0 } else { 1 };
    Ok(output)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuple_parsing_forms() {
        let want = ExponentTuple::from_u64s(&[4, 5, 9, 19]).unwrap();
        assert_eq!(parse_tuple(&["4", "5", "9", "19"]).unwrap(), want);
        assert_eq!(parse_tuple(&["4,5,9,19"]).unwrap(), want);
        assert_eq!(parse_tuple(&["4,5", "9", "19,"]).unwrap(), want);
        assert!(matches!(parse_tuple(&["4", "x"]), Err(Error::InvalidInput(_))));
        assert!(matches!(parse_tuple(&["2", "1", "3"]), Err(Error::EntryTooSmall { index: 1, .. })));
    }

    #[test]
    fn limits_from_flags() {
        let cli = Cli::try_parse_from(["brieskorn", "--cap-subsets", "5", "criterion", "2", "3", "5"]).unwrap();
        assert_eq!(cli.global.limits().subset_cap, 5);
        assert_eq!(cli.global.limits().antichain_cap, 24);
    }
}
