//! Command dispatch for the `roughtopo` binary.
//!
//! [`run`] takes the argument list and I/O handles and returns the process
//! exit status, so every command is testable in-process.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use roughtopo::document::display_order;
use roughtopo::{
    audit, format_accuracy, parse_space, ApproximationSpace, Area, AuditConfig, AuditReport,
    Corpus, ElementSet, EnumerationCap, FamilyListing, LawKind, ParsedSpace, RoughError, SetFamily,
    Tier, Universe,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_LAW_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

/// Pairs per sampled space above which verify samples pairs instead of
/// enumerating them.
const PAIR_LIMIT: usize = 4096;

#[derive(Debug, Parser)]
#[command(
    name = "roughtopo",
    version,
    about = "Rough approximations over relation-generated topologies"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Largest universe for which subset enumeration is allowed.
    #[arg(long = "max-enum", global = true, value_name = "N")]
    max_enum: Option<usize>,
    /// Space description file; standard input when omitted.
    #[arg(long, global = true, value_name = "FILE")]
    space: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Tau,
    Pre,
    Deltap,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Tau => "tau",
            Kind::Pre => "pre",
            Kind::Deltap => "deltap",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TierChoice {
    Tau,
    P,
    Dp,
    All,
}

impl TierChoice {
    fn tiers(self) -> Vec<Tier> {
        match self {
            TierChoice::Tau => vec![Tier::Tau],
            TierChoice::P => vec![Tier::P],
            TierChoice::Dp => vec![Tier::Dp],
            TierChoice::All => Tier::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Subbase, base, topology, preopen and δP-open families.
    Topology,
    /// One open family, or all three without --kind.
    Families {
        #[arg(long, value_enum)]
        kind: Option<Kind>,
    },
    /// Lower and upper approximations with accuracy.
    Approx {
        #[arg(long, value_name = "EXPR")]
        set: String,
        #[arg(long, value_enum, default_value_t = TierChoice::All)]
        tier: TierChoice,
    },
    /// Accuracy of every nonempty proper subset under each tier.
    AccuracyTable {
        /// Only subsets of one to three elements.
        #[arg(long = "paper-rows")]
        small_subsets: bool,
    },
    /// The 24 areas cut out by the three tiers.
    Regions {
        #[arg(long, value_name = "EXPR")]
        set: String,
    },
    /// Definability class and exactness per tier.
    Classify {
        #[arg(long, value_name = "EXPR")]
        set: String,
    },
    /// Rough inclusion of one set in another.
    Include {
        #[arg(long, value_name = "EXPR")]
        set: String,
        #[arg(long = "in", value_name = "EXPR")]
        within: String,
        #[arg(long, value_enum, default_value_t = TierChoice::All)]
        tier: TierChoice,
    },
    /// Blocks formed by the δP-closures of the points.
    Partition,
    /// Audit the laws over generated spaces.
    Verify {
        /// Every relation on N points (N ≤ 3; 4 with --allow-large).
        #[arg(long, value_name = "N", conflicts_with = "sample")]
        exhaustive: Option<usize>,
        #[arg(long)]
        allow_large: bool,
        /// Seeded random relations.
        #[arg(long)]
        sample: bool,
        #[arg(long, default_value_t = 0, requires = "sample")]
        seed: u64,
        #[arg(long, default_value_t = 100, requires = "sample")]
        count: usize,
        #[arg(long = "n", default_value_t = 5, requires = "sample")]
        size: usize,
        /// Where audit findings are written, one JSON object per line.
        #[arg(long, default_value = "findings.jsonl")]
        findings: PathBuf,
    },
}

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match dispatch(&cli, stdin, err) {
        Ok((text, code)) => {
            if out.write_all(text.as_bytes()).is_err() {
                return EXIT_USAGE;
            }
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

#[derive(Debug)]
struct Failure {
    message: String,
    code: i32,
}

impl From<RoughError> for Failure {
    fn from(e: RoughError) -> Self {
        let code = match e {
            RoughError::EnumerationCapExceeded { .. } | RoughError::UniverseTooLarge { .. } => {
                EXIT_CAP
            }
            _ => EXIT_USAGE,
        };
        Failure {
            message: e.to_string(),
            code,
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        message: message.into(),
        code: EXIT_USAGE,
    }
}

type Outcome = Result<(String, i32), Failure>;

fn dispatch(cli: &Cli, stdin: &mut dyn Read, err: &mut dyn Write) -> Outcome {
    let cap = match cli.max_enum {
        Some(n) => EnumerationCap::new(n)?,
        None => EnumerationCap::default(),
    };
    if let Command::Verify {
        exhaustive,
        allow_large,
        sample,
        seed,
        count,
        size,
        findings,
    } = &cli.command
    {
        let _ = writeln!(err, "roughtopo {}", env!("CARGO_PKG_VERSION"));
        let corpus = if *sample {
            cap.check(*size)?;
            let pairs = (1u128 << (2 * size) > PAIR_LIMIT as u128).then_some(PAIR_LIMIT);
            Corpus::sampled(*seed, *count, &[*size], pairs)
        } else {
            let n = exhaustive.unwrap_or(3);
            if n > 4 || (n == 4 && !allow_large) {
                return Err(Failure {
                    message: format!(
                        "exhaustive enumeration of {n}-point relations is not supported{}",
                        if n == 4 {
                            " without --allow-large"
                        } else {
                            " (limit 4)"
                        }
                    ),
                    code: EXIT_CAP,
                });
            }
            Corpus::exhaustive(n, *allow_large)?
        };
        let config = AuditConfig {
            cap,
            ..AuditConfig::default()
        };
        let report = audit(&corpus, &config)?;
        std::fs::write(findings, report.findings_jsonl())
            .map_err(|e| usage(format!("cannot write {}: {e}", findings.display())))?;
        let text = render_verify(&report, &findings.display().to_string(), cli.format);
        return Ok((text, verify_status(&report)));
    }

    let parsed = read_space(cli, stdin)?;
    for [a, b] in &parsed.duplicate_pairs {
        let _ = writeln!(err, "warning: duplicate pair [{a}, {b}] ignored");
    }
    let space = parsed.build(cap)?;
    let u = space.universe();
    let text = match &cli.command {
        Command::Topology => render_topology(&parsed, &space, cli.format),
        Command::Families { kind } => render_families(&space, *kind, cli.format),
        Command::Approx { set, tier } => {
            render_approx(&space, u.parse_set(set)?, &tier.tiers(), cli.format)
        }
        Command::AccuracyTable { small_subsets } => {
            render_accuracy(&space, *small_subsets, cli.format)
        }
        Command::Regions { set } => render_regions(&space, u.parse_set(set)?, cli.format),
        Command::Classify { set } => render_classify(&space, u.parse_set(set)?, cli.format),
        Command::Include { set, within, tier } => render_include(
            &space,
            u.parse_set(set)?,
            u.parse_set(within)?,
            &tier.tiers(),
            cli.format,
        ),
        Command::Partition => {
            render_partition(&space, space.point_closure_partition()?, cli.format)
        }
        Command::Verify { .. } => unreachable!("handled above"),
    };
    Ok((text, EXIT_OK))
}

fn read_space(cli: &Cli, stdin: &mut dyn Read) -> Result<ParsedSpace, Failure> {
    let text = match &cli.space {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?,
        None => {
            let mut buf = String::new();
            stdin
                .read_to_string(&mut buf)
                .map_err(|e| usage(format!("cannot read standard input: {e}")))?;
            buf
        }
    };
    Ok(parse_space(&text)?)
}

/// Exit status for a finished audit: nonzero iff a guaranteed law failed.
pub fn verify_status(report: &AuditReport) -> i32 {
    if report.passed() {
        EXIT_OK
    } else {
        EXIT_LAW_FAILURE
    }
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn render_json(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("in-memory JSON");
    text.push('\n');
    text
}

fn labels(u: &Universe, s: ElementSet) -> Value {
    json!(u.set_labels(&s))
}

/// Left-aligned columns separated by two spaces.
fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: Vec<&str>| {
        let mut text = String::new();
        for (i, cell) in cells.iter().enumerate() {
            if i > 0 {
                text.push_str("  ");
            }
            text.push_str(cell);
            let pad = widths[i] - cell.chars().count();
            text.extend(std::iter::repeat_n(' ', pad));
        }
        out.push_str(text.trim_end());
        out.push('\n');
    };
    line(headers.to_vec());
    for row in rows {
        line(row.iter().map(String::as_str).collect());
    }
    out
}

fn yes_no(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}

fn family_section(u: &Universe, title: &str, family: &SetFamily) -> String {
    let mut out = format!("{title} ({})\n", family.len());
    for s in display_order(family) {
        out.push_str("  ");
        out.push_str(&u.format_set(&s));
        out.push('\n');
    }
    out
}

fn topology_families(space: &ApproximationSpace) -> [(&'static str, &SetFamily); 5] {
    let t = space.topology();
    [
        ("subbase", t.subbase()),
        ("base", t.base()),
        ("tau", t.opens()),
        ("pre", &space.families().preopen),
        ("deltap", &space.families().deltap_open),
    ]
}

fn render_topology(parsed: &ParsedSpace, space: &ApproximationSpace, format: Format) -> String {
    let u = space.universe();
    let families = topology_families(space);
    match format {
        Format::Json => render_json(&json!({
            "name": parsed.document.name,
            "universe": u.labels(),
            "families": families
                .iter()
                .map(|(k, f)| listing_value(&FamilyListing::new(u, k, f)))
                .collect::<Vec<_>>(),
        })),
        Format::Table => {
            let mut out = format!(
                "space: {} ({} elements, {} pairs)\n",
                parsed.document.name.as_deref().unwrap_or("unnamed"),
                u.len(),
                parsed.relation.len()
            );
            for (title, family) in families {
                out.push('\n');
                out.push_str(&family_section(u, title, family));
            }
            out
        }
    }
}

fn listing_value(listing: &FamilyListing) -> Value {
    serde_json::to_value(listing).expect("listing serializes")
}

fn kind_family(space: &ApproximationSpace, kind: Kind) -> &SetFamily {
    match kind {
        Kind::Tau => space.topology().opens(),
        Kind::Pre => &space.families().preopen,
        Kind::Deltap => &space.families().deltap_open,
    }
}

/// Canonical JSON for a single family listing.
pub fn render_listing(listing: &FamilyListing) -> String {
    render_json(&listing_value(listing))
}

fn render_families(space: &ApproximationSpace, kind: Option<Kind>, format: Format) -> String {
    let u = space.universe();
    let kinds = match kind {
        Some(k) => vec![k],
        None => vec![Kind::Tau, Kind::Pre, Kind::Deltap],
    };
    match format {
        Format::Json if kinds.len() == 1 => render_listing(&FamilyListing::new(
            u,
            kinds[0].name(),
            kind_family(space, kinds[0]),
        )),
        Format::Json => render_json(&json!(kinds
            .iter()
            .map(|&k| listing_value(&FamilyListing::new(u, k.name(), kind_family(space, k))))
            .collect::<Vec<_>>())),
        Format::Table => kinds
            .iter()
            .map(|&k| family_section(u, k.name(), kind_family(space, k)))
            .collect::<Vec<_>>()
            .join("\n"),
    }
}

fn accuracy_text(a: Option<roughtopo::Accuracy>) -> String {
    a.map_or_else(|| "undefined".to_string(), |a| format_accuracy(&a))
}

fn render_approx(
    space: &ApproximationSpace,
    s: ElementSet,
    tiers: &[Tier],
    format: Format,
) -> String {
    let u = space.universe();
    let rows: Vec<_> = tiers
        .iter()
        .map(|&t| (space.approximate(s, t), space.classify(s, t)))
        .collect();
    match format {
        Format::Json => render_json(&json!({
            "set": labels(u, s),
            "tiers": rows.iter().map(|(a, c)| json!({
                "tier": a.tier.name(),
                "lower": labels(u, a.lower),
                "upper": labels(u, a.upper),
                "accuracy": a.accuracy.map(|x| format_accuracy(&x)),
                "class": c.class.name(),
                "exact": c.exact,
            })).collect::<Vec<_>>(),
        })),
        Format::Table => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|(a, c)| {
                    vec![
                        a.tier.name().to_string(),
                        u.format_set(&a.lower),
                        u.format_set(&a.upper),
                        accuracy_text(a.accuracy),
                        c.class.name().to_string(),
                        yes_no(c.exact),
                    ]
                })
                .collect();
            format!(
                "set: {}\n{}",
                u.format_set(&s),
                table(
                    &["tier", "lower", "upper", "accuracy", "class", "exact"],
                    &body
                )
            )
        }
    }
}

fn render_accuracy(space: &ApproximationSpace, small_subsets: bool, format: Format) -> String {
    let u = space.universe();
    let rows = space.accuracy_rows(small_subsets);
    match format {
        Format::Json => render_json(&json!({
            "rows": rows.iter().map(|r| json!({
                "subset": labels(u, r.subset),
                "tau": format_accuracy(&r.accuracy[Tier::Tau as usize]),
                "p": format_accuracy(&r.accuracy[Tier::P as usize]),
                "dp": format_accuracy(&r.accuracy[Tier::Dp as usize]),
            })).collect::<Vec<_>>(),
        })),
        Format::Table => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let mut row = vec![u.format_set(&r.subset)];
                    row.extend(r.accuracy.iter().map(format_accuracy));
                    row
                })
                .collect();
            table(&["subset", "tau", "p", "dp"], &body)
        }
    }
}

fn render_regions(space: &ApproximationSpace, s: ElementSet, format: Format) -> String {
    let u = space.universe();
    let report = space.regions(s);
    match format {
        Format::Json => render_json(&json!({
            "set": labels(u, s),
            "areas": report.iter().map(|(area, set)| json!({
                "number": area.number(),
                "key": area.key(),
                "set": labels(u, set),
            })).collect::<Vec<_>>(),
        })),
        Format::Table => {
            let body: Vec<Vec<String>> = Area::ALL
                .iter()
                .map(|&a| {
                    vec![
                        a.number().to_string(),
                        a.symbol().to_string(),
                        u.format_set(&report.get(a)),
                    ]
                })
                .collect();
            format!(
                "set: {}\n{}",
                u.format_set(&s),
                table(&["no", "area", "members"], &body)
            )
        }
    }
}

fn render_classify(space: &ApproximationSpace, s: ElementSet, format: Format) -> String {
    let u = space.universe();
    let classes: Vec<_> = Tier::ALL.iter().map(|&t| space.classify(s, t)).collect();
    match format {
        Format::Json => render_json(&json!({
            "set": labels(u, s),
            "tiers": classes.iter().map(|c| json!({
                "tier": c.tier.name(),
                "class": c.class.name(),
                "exact": c.exact,
            })).collect::<Vec<_>>(),
        })),
        Format::Table => {
            let body: Vec<Vec<String>> = classes
                .iter()
                .map(|c| {
                    vec![
                        c.tier.name().to_string(),
                        format!("{}{}", c.tier.prefix(), c.class.name()),
                        if c.exact { "exact" } else { "rough" }.to_string(),
                    ]
                })
                .collect();
            format!(
                "set: {}\n{}",
                u.format_set(&s),
                table(&["tier", "class", "status"], &body)
            )
        }
    }
}

fn render_include(
    space: &ApproximationSpace,
    s: ElementSet,
    n: ElementSet,
    tiers: &[Tier],
    format: Format,
) -> String {
    let u = space.universe();
    let rows: Vec<_> = tiers
        .iter()
        .map(|&t| (t, space.rough_inclusion(s, n, t)))
        .collect();
    match format {
        Format::Json => render_json(&json!({
            "set": labels(u, s),
            "in": labels(u, n),
            "tiers": rows.iter().map(|(t, r)| json!({
                "tier": t.name(),
                "bottom": r.bottom,
                "top": r.top,
                "full": r.full,
            })).collect::<Vec<_>>(),
        })),
        Format::Table => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|(t, r)| {
                    vec![
                        t.name().to_string(),
                        yes_no(r.bottom),
                        yes_no(r.top),
                        yes_no(r.full),
                    ]
                })
                .collect();
            format!(
                "set: {}\nin: {}\n{}",
                u.format_set(&s),
                u.format_set(&n),
                table(&["tier", "bottom", "top", "full"], &body)
            )
        }
    }
}

fn render_partition(space: &ApproximationSpace, blocks: SetFamily, format: Format) -> String {
    let u = space.universe();
    let ordered = display_order(&blocks);
    match format {
        Format::Json => render_json(&json!({
            "blocks": ordered.iter().map(|&b| labels(u, b)).collect::<Vec<_>>(),
        })),
        Format::Table => family_section(u, "blocks", &blocks),
    }
}

/// Summary of an audit run.
pub fn render_verify(report: &AuditReport, findings_path: &str, format: Format) -> String {
    let audited = report.audited_findings().count();
    let guaranteed = report.guaranteed_failures().count();
    let kind = |k: LawKind| match k {
        LawKind::Guaranteed => "guaranteed",
        LawKind::Audited => "audited",
    };
    match format {
        Format::Json => render_json(&json!({
            "spaces": report.spaces,
            "laws": report.stats.iter().map(|(law, s)| json!({
                "id": law.id(),
                "kind": kind(law.kind()),
                "checks": s.checks,
                "violations": s.violations,
            })).collect::<Vec<_>>(),
            "findings": report.findings.len(),
            "findings_file": findings_path,
            "passed": report.passed(),
        })),
        Format::Table => {
            let body: Vec<Vec<String>> = report
                .stats
                .iter()
                .map(|(law, s)| {
                    vec![
                        law.id().to_string(),
                        kind(law.kind()).to_string(),
                        s.checks.to_string(),
                        s.violations.to_string(),
                    ]
                })
                .collect();
            format!(
                "spaces: {}\n{}findings: {} audited, {} guaranteed, written to {}\nresult: {}\n",
                report.spaces,
                table(&["law", "kind", "checks", "violations"], &body),
                audited,
                guaranteed,
                findings_path,
                if report.passed() { "PASS" } else { "FAIL" }
            )
        }
    }
}
