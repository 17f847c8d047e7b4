//! Command-line harness: group ingestion, the four subcommands, and
//! deterministic report assembly.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};

use wreathcheck_core::catalog::catalog;
use wreathcheck_core::chartab::character_table;
use wreathcheck_core::group::{FiniteGroup, GroupFile};
use wreathcheck_core::monomial::{
    check_factor_monomiality_hypothesis, check_main_hypothesis, counterexample_search, SearchContext,
    SearchLimits,
};
use wreathcheck_core::report::{
    AnalyzeReport, GroupSummary, SearchReport, TableReport, Timings, WreathReport, SCHEMA_VERSION,
};
use wreathcheck_core::wreath::{BaseLabel, WreathAnalysis, WreathGroup};

/// Exit code when the counterexample search actually finds one.
pub const EXIT_COUNTEREXAMPLE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "wreathcheck",
    about = "Exact monomiality certificates for finite groups and their wreath products",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Emit the report as JSON instead of text
    #[arg(long, global = true)]
    pub json: bool,

    /// Write the report to a file instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,

    /// Cap on conjugacy classes of subgroups per group
    #[arg(long, global = true, default_value_t = 100_000, value_name = "N")]
    pub subgroup_limit: usize,

    /// Cap on group orders for closures, products and wreath products
    #[arg(long, global = true, default_value_t = 20_000, value_name = "N")]
    pub order_limit: usize,

    /// Include wall-clock timings in the report (breaks byte-for-byte
    /// reproducibility, hence opt-in)
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the exact character table of a group
    Table {
        /// Catalog name (C6, D10, S4, A5, Q8, SL(2,3), ...) or a path to a
        /// JSON group file
        group: String,
    },
    /// Classify a group against the monomiality hierarchy, with witnesses
    Analyze { group: String },
    /// Build A wr C_p, report its restriction census, and optionally check
    /// the extension-case hypotheses
    Wreath {
        group: String,
        p: usize,
        /// Check the separation hypothesis for extension characters
        #[arg(long)]
        check_main: bool,
        /// Check that extension characters come from monomial factors
        #[arg(long)]
        check_factor: bool,
        /// Print the extension fiber over a diagonal label, e.g. "2,2"
        #[arg(long, value_name = "LABEL")]
        fiber: Option<String>,
    },
    /// Sweep wreath products of catalog groups for counterexamples to
    /// almost-monomiality closure
    Search {
        /// Comma-separated base group names
        #[arg(long, value_delimiter = ',', required = true)]
        catalog: Vec<String>,
        /// Comma-separated primes
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<usize>,
    },
}

impl Cli {
    fn limits(&self) -> SearchLimits {
        SearchLimits {
            subgroup_limit: self.subgroup_limit,
            order_limit: self.order_limit,
        }
    }
}

/// Resolve a group argument: an existing path is loaded as a group file,
/// anything else is looked up in the catalog.
pub fn resolve_group(spec: &str, order_limit: usize) -> anyhow::Result<Arc<FiniteGroup>> {
    if Path::new(spec).is_file() {
        let text = std::fs::read_to_string(spec).with_context(|| format!("reading {spec}"))?;
        let file = GroupFile::parse(&text)?;
        return Ok(file.build(order_limit)?);
    }
    Ok(catalog(spec)?)
}

struct Stopwatch {
    enabled: bool,
    last: Instant,
    timings: Timings,
}

impl Stopwatch {
    fn new(enabled: bool) -> Stopwatch {
        Stopwatch {
            enabled,
            last: Instant::now(),
            timings: BTreeMap::new(),
        }
    }

    fn lap(&mut self, label: &str) {
        let now = Instant::now();
        if self.enabled {
            self.timings
                .insert(label.to_string(), now.duration_since(self.last).as_millis() as u64);
        }
        self.last = now;
    }

    fn take(self) -> Option<Timings> {
        if self.enabled {
            Some(self.timings)
        } else {
            None
        }
    }
}

/// Run a parsed command line; returns the rendered report and exit code.
pub fn execute(cli: &Cli) -> anyhow::Result<(String, i32)> {
    let limits = cli.limits();
    match &cli.command {
        Command::Table { group } => {
            let mut watch = Stopwatch::new(cli.timings);
            let g = resolve_group(group, limits.order_limit)?;
            watch.lap("build");
            let table = character_table(&g)?;
            watch.lap("table");
            let mut report = TableReport::new(&g, &table);
            report.timings_ms = watch.take();
            report.validate().map_err(anyhow::Error::msg)?;
            let text = if cli.json {
                serde_json::to_string_pretty(&report)?
            } else {
                render_table(&report)
            };
            Ok((text, 0))
        }
        Command::Analyze { group } => {
            let mut watch = Stopwatch::new(cli.timings);
            let g = resolve_group(group, limits.order_limit)?;
            watch.lap("build");
            let ctx = SearchContext::build(&g, &limits)?;
            watch.lap("search_context");
            let classification = ctx.classify()?;
            watch.lap("classify");
            let mut by_order: Vec<(usize, usize)> = Vec::new();
            for class in ctx.classes() {
                match by_order.last_mut() {
                    Some((o, n)) if *o == class.order => *n += 1,
                    _ => by_order.push((class.order, 1)),
                }
            }
            let mut report = AnalyzeReport {
                schema: SCHEMA_VERSION,
                group: GroupSummary::of(&g),
                subgroup_classes_by_order: by_order,
                classification,
                timings_ms: watch.take(),
            };
            report.validate().map_err(anyhow::Error::msg)?;
            let text = if cli.json {
                serde_json::to_string_pretty(&report)?
            } else {
                render_analyze(&mut report)
            };
            Ok((text, 0))
        }
        Command::Wreath {
            group,
            p,
            check_main,
            check_factor,
            fiber,
        } => {
            let mut watch = Stopwatch::new(cli.timings);
            let a = resolve_group(group, limits.order_limit)?;
            let wreath = WreathGroup::build(&a, *p, limits.order_limit)?;
            watch.lap("build");
            let analysis = WreathAnalysis::analyze(wreath)?;
            watch.lap("census");
            let mut report = WreathReport::new(&analysis);
            if let Some(label_text) = fiber {
                let label = parse_label(label_text)?;
                let members = analysis.gallagher_fiber(&label)?;
                report.fiber = Some(wreathcheck_core::report::FiberReport {
                    label: label.0.clone(),
                    members,
                });
                watch.lap("fiber");
            }
            if *check_factor || *check_main {
                let ctx_a = SearchContext::build(&a, &limits)?;
                watch.lap("base_context");
                if *check_factor {
                    let h = check_factor_monomiality_hypothesis(&analysis, &ctx_a, || {
                        SearchContext::from_table(analysis.table.clone(), &limits)
                    })?;
                    report.hypotheses.push(h);
                    watch.lap("check_factor");
                }
                if *check_main {
                    let ctx_w = SearchContext::from_table(analysis.table.clone(), &limits)?;
                    watch.lap("wreath_context");
                    let h = check_main_hypothesis(&analysis, &ctx_a, &ctx_w)?;
                    report.hypotheses.push(h);
                    watch.lap("check_main");
                }
            }
            report.timings_ms = watch.take();
            report.validate().map_err(anyhow::Error::msg)?;
            let text = if cli.json {
                serde_json::to_string_pretty(&report)?
            } else {
                render_wreath(&report)
            };
            Ok((text, 0))
        }
        Command::Search { catalog, primes } => {
            let mut watch = Stopwatch::new(cli.timings);
            let mut bases = Vec::new();
            for name in catalog {
                bases.push((name.clone(), resolve_group(name, limits.order_limit)?));
            }
            let survey = counterexample_search(&bases, primes, &limits)?;
            watch.lap("search");
            let report = SearchReport {
                schema: SCHEMA_VERSION,
                survey,
                timings_ms: watch.take(),
            };
            report.validate().map_err(anyhow::Error::msg)?;
            let code = if report.survey.counterexample_found {
                EXIT_COUNTEREXAMPLE
            } else {
                0
            };
            let text = if cli.json {
                serde_json::to_string_pretty(&report)?
            } else {
                render_search(&report)
            };
            Ok((text, code))
        }
    }
}

fn parse_label(text: &str) -> anyhow::Result<BaseLabel> {
    let parts: Result<Vec<usize>, _> = text.split(',').map(|s| s.trim().parse()).collect();
    match parts {
        Ok(v) if !v.is_empty() => Ok(BaseLabel(v)),
        _ => bail!("expected a comma-separated label such as \"2,2\", got {text:?}"),
    }
}

fn group_heading(g: &GroupSummary) -> String {
    let name = g.name.as_deref().unwrap_or("<unnamed>");
    format!(
        "group {name} (order {}, exponent {}, {} classes)",
        g.order,
        g.exponent,
        g.class_sizes.len()
    )
}

fn render_table(report: &TableReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", group_heading(&report.group));
    let sizes: Vec<String> = report.classes.iter().map(usize::to_string).collect();
    let _ = writeln!(out, "class sizes: {}", sizes.join(" "));
    for (i, row) in report.irreducibles.iter().enumerate() {
        let exact: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(
            out,
            "chi_{i} (degree {}): {}",
            report.degrees[i],
            exact.join(", ")
        );
        let numeric: Vec<String> = row
            .iter()
            .map(|v| {
                let c = v.to_complex();
                format!("{:.4}{:+.4}i", c.re, c.im)
            })
            .collect();
        let _ = writeln!(out, "    ~ {}", numeric.join(", "));
    }
    out
}

fn render_analyze(report: &mut AnalyzeReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", group_heading(&report.group));
    let degrees: Vec<String> = report
        .classification
        .irreducible_degrees
        .iter()
        .map(usize::to_string)
        .collect();
    let _ = writeln!(out, "irreducible degrees: {}", degrees.join(" "));
    let counts: Vec<String> = report
        .subgroup_classes_by_order
        .iter()
        .map(|(o, n)| format!("{o}:{n}"))
        .collect();
    let total: usize = report.subgroup_classes_by_order.iter().map(|(_, n)| n).sum();
    let _ = writeln!(out, "subgroup classes: {total} (by order: {})", counts.join(" "));
    let c = &report.classification;
    let _ = writeln!(out, "monomial: {}", c.monomial);
    let _ = writeln!(out, "quasi_monomial: {}", c.quasi_monomial);
    let _ = writeln!(out, "almost_monomial: {}", c.almost_monomial);
    let _ = writeln!(out, "normally_almost_monomial: {}", c.normally_almost_monomial);
    let missing_pairs: Vec<String> = c
        .separations
        .iter()
        .filter(|o| o.witness.is_none())
        .map(|o| format!("({},{})", o.pair.0, o.pair.1))
        .collect();
    if !missing_pairs.is_empty() {
        let _ = writeln!(out, "unseparated pairs: {}", missing_pairs.join(" "));
    }
    out
}

fn render_wreath(report: &WreathReport) -> String {
    let mut out = String::new();
    let base = report.base.name.as_deref().unwrap_or("<base>");
    let _ = writeln!(
        out,
        "W = {base} wr C{} (order {}), |Irr(W)| = {}",
        report.copies, report.group.order, report.census.irr_count
    );
    let _ = writeln!(
        out,
        "labels: {} shift-fixed, {} full orbits; {} induced + {} extension characters",
        report.census.fixed_labels,
        report.census.full_orbits,
        report.census.case_induced,
        report.census.case_extension
    );
    let _ = writeln!(
        out,
        "census: |Irr| = {} + {}*{} and sum d^2 = {} = |W|",
        report.census.full_orbits,
        report.copies,
        report.census.fixed_labels,
        report.census.predicted_degree_square_sum
    );
    for (i, case) in report.cases.iter().enumerate() {
        match case {
            wreathcheck_core::report::CaseReport::Induced { orbit } => {
                let labels: Vec<String> = orbit
                    .iter()
                    .map(|l| {
                        let parts: Vec<String> = l.iter().map(usize::to_string).collect();
                        format!("({})", parts.join(","))
                    })
                    .collect();
                let _ = writeln!(
                    out,
                    "chi_{i} (degree {}): induced from orbit {}",
                    report.degrees[i],
                    labels.join(" ")
                );
            }
            wreathcheck_core::report::CaseReport::Extension { phi } => {
                let _ = writeln!(
                    out,
                    "chi_{i} (degree {}): extension of phi index {phi}",
                    report.degrees[i]
                );
            }
        }
    }
    if let Some(fiber) = &report.fiber {
        let parts: Vec<String> = fiber.label.iter().map(usize::to_string).collect();
        let members: Vec<String> = fiber.members.iter().map(|m| format!("chi_{m}")).collect();
        let _ = writeln!(out, "fiber over ({}): {}", parts.join(","), members.join(" "));
    }
    for h in &report.hypotheses {
        let kind = match h.kind {
            wreathcheck_core::monomial::HypothesisKind::FactorMonomiality => "factor-monomiality",
            wreathcheck_core::monomial::HypothesisKind::Main => "separation",
        };
        let _ = writeln!(
            out,
            "hypothesis {kind}: overall={} over {} cases",
            h.overall,
            h.cases.len()
        );
        if let Some(conc) = &h.conclusion {
            let _ = writeln!(
                out,
                "  conclusion: premise={} holds={:?} consistent={}",
                conc.premise_holds, conc.conclusion_holds, conc.consistent
            );
        }
    }
    out
}

fn render_search(report: &SearchReport) -> String {
    let mut out = String::new();
    for e in &report.survey.entries {
        if let Some(reason) = &e.skipped {
            let _ = writeln!(out, "{} wr C{}: skipped ({reason})", e.base, e.p);
            continue;
        }
        let _ = writeln!(
            out,
            "{} wr C{} (order {}): almost_monomial={} hypothesis={}{}",
            e.base,
            e.p,
            e.w_order.unwrap_or(0),
            e.w_almost_monomial.unwrap_or(false),
            e.hypothesis_overall.unwrap_or(false),
            if e.counterexample { "  ** COUNTEREXAMPLE **" } else { "" }
        );
    }
    if report.survey.counterexample_found {
        let _ = writeln!(out, "counterexample found");
    } else {
        let _ = writeln!(out, "no counterexample found");
    }
    out
}
