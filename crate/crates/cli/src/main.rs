//! `blockcoh` command line front end.
//!
//! Exit codes: 0 holds/pass/regular, 1 fails (a witness is printed),
//! 2 usage or input error, 3 hypothesis or precondition violation,
//! 4 unsupported or undetermined (symbolic ψ, unknown rank),
//! 5 engine inconsistency or cache I/O failure.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use blockcoh::cohomology::factor::{cache_entries, cache_seed, FactorKey};
use blockcoh::collections::{orthogonality_check, preset_collection, right_dual, verify_nblock, Preset, SigmaVariant};
use blockcoh::criteria::{
    characterization_check, is_normalized, spi_check, tpq_check, trivial_summand_check, CharInput, CriterionReport,
    ScanOptions, SpiException, SpiIndexMode, TrivialIndexing,
};
use blockcoh::dsl::parse;
use blockcoh::regularity::{is_regular, min_balanced_reg};
use blockcoh::{cohomology, ext, BundleExpr, CohomTable, Error, PsiRanks, Space};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

const CACHE_FILE: &str = "factor-tables.jsonl";

#[derive(Parser)]
#[command(name = "blockcoh", version, about = "Cohomology, block collections and splitting criteria on P^n x Q^m products")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Report every witness instead of the first.
    #[arg(long, short, global = true)]
    verbose: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Target {
    /// Space such as "P3xQ3".
    #[arg(long)]
    space: String,
    /// Bundle expression such as "O(1,-2) + S(0)#O(3)".
    #[arg(long, allow_hyphen_values = true)]
    bundle: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Cohomology table, one row per balanced twist.
    Cohom {
        #[command(flatten)]
        target: Target,
        /// Inclusive twist range "a..b".
        #[arg(long, allow_hyphen_values = true)]
        range: Option<String>,
    },
    /// ext^•(A, B) = H^•(A^∨ ⊗ B).
    Ext {
        #[arg(long)]
        space: String,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
    },
    /// Verify a preset n-block collection.
    Verify {
        #[arg(long)]
        space: String,
        /// std, spinor-first, sigma:j or sigma-completed:j
        #[arg(long, default_value = "std")]
        preset: String,
    },
    /// Right dual collection of a preset.
    Dual {
        #[arg(long)]
        space: String,
        #[arg(long, default_value = "std")]
        preset: String,
        /// ψ rank as "j=r"; repeatable.
        #[arg(long = "psi-rank")]
        psi_rank: Vec<String>,
    },
    /// Regularity at a twist vector.
    Regular {
        #[command(flatten)]
        target: Target,
        /// Comma-separated twist per factor, e.g. "0,-1".
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Least t with E(t, ..., t) regular.
    RegIndex {
        #[command(flatten)]
        target: Target,
    },
    /// Run a splitting or characterization criterion.
    Split {
        #[command(flatten)]
        target: Target,
        /// tpq, spi, normalized, trivial or char:j
        #[arg(long)]
        criterion: String,
        /// Collection preset for char:j.
        #[arg(long, default_value = "std")]
        preset: String,
        /// ψ rank as "j=r"; repeatable.
        #[arg(long = "psi-rank")]
        psi_rank: Vec<String>,
        /// Run even when the factor hypotheses fail; the report is flagged.
        #[arg(long)]
        override_hypotheses: bool,
        #[arg(long, value_enum, default_value_t = SpiModeArg::AtMost)]
        spi_mode: SpiModeArg,
        #[arg(long, value_enum, default_value_t = SpiExceptionArg::BlockIndex)]
        spi_exception: SpiExceptionArg,
        #[arg(long, value_enum, default_value_t = TrivialArg::Literal)]
        trivial_indexing: TrivialArg,
        /// Multiply the scan window (1 = default window).
        #[arg(long, default_value_t = 1)]
        window_scale: i64,
    },
    /// Restrict to a hyperplane section of one factor.
    Restrict {
        #[command(flatten)]
        target: Target,
        /// Zero-based factor index.
        #[arg(long)]
        factor: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SpiModeArg {
    AtMost,
    Exactly,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpiExceptionArg {
    BlockIndex,
    Literal,
}

#[derive(Clone, Copy, ValueEnum)]
enum TrivialArg {
    Literal,
    Complementary,
}

/// A command failure with its exit code.
struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::EmptySpace
            | Error::InvalidFactor(_)
            | Error::Parse { .. }
            | Error::Arity { .. }
            | Error::InvalidBundle(_)
            | Error::Collection(_) => 2,
            Error::Hypothesis(_) | Error::Precondition(_) => 3,
            Error::Symbolic(_) | Error::Unsupported(_) | Error::UnknownRank(_) | Error::RecursionAmbiguity(_) => 4,
            Error::Inconsistent(_) => 5,
        };
        Failure { code, msg: e.to_string() }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: 2, msg: msg.into() }
}

/// Output plus whether the verdict is positive.
struct Outcome {
    json: Value,
    text: String,
    ok: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cache_dir = std::env::var_os("BLOCKCOH_CACHE_DIR").map(PathBuf::from);
    if let Some(dir) = &cache_dir {
        if let Err(msg) = load_cache(dir) {
            eprintln!("error: {msg}");
            return ExitCode::from(5);
        }
    }
    let result = run(&cli);
    if let Some(dir) = &cache_dir {
        if let Err(msg) = save_cache(dir) {
            eprintln!("error: {msg}");
            return ExitCode::from(5);
        }
    }
    match result {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let rendered = match cli.format {
                Format::Json => serde_json::to_string_pretty(&out.json).expect("json values serialize"),
                Format::Text => out.text.trim_end().to_string(),
            };
            let _ = writeln!(stdout, "{rendered}");
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn load_cache(dir: &Path) -> Result<(), String> {
    let path = dir.join(CACHE_FILE);
    let Ok(body) = fs::read_to_string(&path) else {
        return Ok(());
    };
    let mut entries = Vec::new();
    for (n, line) in body.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let v: Value = serde_json::from_str(line).map_err(|e| format!("{}:{}: {e}", path.display(), n + 1))?;
        let key: FactorKey =
            serde_json::from_value(v["key"].clone()).map_err(|e| format!("{}:{}: {e}", path.display(), n + 1))?;
        let table: CohomTable =
            serde_json::from_value(v["table"].clone()).map_err(|e| format!("{}:{}: {e}", path.display(), n + 1))?;
        entries.push((key, table));
    }
    cache_seed(entries);
    Ok(())
}

fn save_cache(dir: &Path) -> Result<(), String> {
    fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    let mut lines: Vec<String> = cache_entries()
        .into_iter()
        .map(|(key, table)| json!({ "key": key, "table": table }).to_string())
        .collect();
    lines.sort();
    let tmp = dir.join(format!("{CACHE_FILE}.{}", std::process::id()));
    fs::write(&tmp, lines.join("\n") + "\n").map_err(|e| format!("{}: {e}", tmp.display()))?;
    fs::rename(&tmp, dir.join(CACHE_FILE)).map_err(|e| format!("{}: {e}", dir.display()))
}

fn space_of(s: &str) -> Result<Space, Failure> {
    Ok(s.parse::<Space>()?)
}

fn bundle_of(s: &str, space: &Space) -> Result<BundleExpr, Failure> {
    parse(s, space).map_err(|e| match e {
        Error::Parse { pos, ref msg } => usage(format!("{e}\n  {s}\n  {}^ {msg}", " ".repeat(pos))),
        other => other.into(),
    })
}

fn target(t: &Target) -> Result<(Space, BundleExpr), Failure> {
    let space = space_of(&t.space)?;
    let bundle = bundle_of(&t.bundle, &space)?;
    Ok((space, bundle))
}

fn preset_of(s: &str) -> Result<Preset, Failure> {
    s.parse::<Preset>().map_err(Failure::from)
}

fn psi_ranks(args: &[String]) -> Result<PsiRanks, Failure> {
    let mut psi = PsiRanks::new();
    for a in args {
        let (j, r) = a.split_once('=').ok_or_else(|| usage(format!("--psi-rank expects j=r, got {a:?}")))?;
        let j: u32 = j.trim().parse().map_err(|_| usage(format!("bad psi index in {a:?}")))?;
        let r: u64 = r.trim().parse().map_err(|_| usage(format!("bad psi rank in {a:?}")))?;
        psi.insert(j, r);
    }
    Ok(psi)
}

fn parse_range(s: &str) -> Result<(i64, i64), Failure> {
    let (a, b) = s.split_once("..").ok_or_else(|| usage(format!("--range expects a..b, got {s:?}")))?;
    let a: i64 = a.trim().parse().map_err(|_| usage(format!("bad range start in {s:?}")))?;
    let b: i64 = b.trim().parse().map_err(|_| usage(format!("bad range end in {s:?}")))?;
    if a > b {
        return Err(usage(format!("empty range {s:?}")));
    }
    Ok((a, b))
}

fn table_row(t: &CohomTable) -> String {
    if t.is_symbolic() {
        return "symbolic".to_string();
    }
    t.dims().iter().map(|v| format!("{v:>8}")).collect::<Vec<_>>().join("")
}

fn table_header(d: usize) -> String {
    (0..=d).map(|i| format!("{:>8}", format!("h^{i}"))).collect()
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.cmd {
        Cmd::Cohom { target: t, range } => {
            let (space, e) = target(t)?;
            let (a, b) = match range {
                Some(r) => parse_range(r)?,
                None => (0, 0),
            };
            let mut rows = Vec::new();
            let mut text = format!("{:>6}{}\n", "t", table_header(space.dim()));
            for tw in a..=b {
                let table = cohomology(&e.twist_balanced(tw), &space)?;
                text.push_str(&format!("{tw:>6}{}\n", table_row(&table)));
                rows.push(json!({ "t": tw, "table": table }));
            }
            Ok(Outcome {
                json: json!({ "space": space.to_string(), "bundle": e.to_string(), "rows": rows }),
                text,
                ok: true,
            })
        }
        Cmd::Ext { space, from, to } => {
            let space = space_of(space)?;
            let a = bundle_of(from, &space)?;
            let b = bundle_of(to, &space)?;
            let table = ext(&a, &b, &space)?;
            let text = format!("ext^*({a}, {b})\n{}\n{}", table_header(space.dim()), table_row(&table));
            Ok(Outcome {
                json: json!({ "space": space.to_string(), "from": a.to_string(), "to": b.to_string(), "table": table }),
                text,
                ok: true,
            })
        }
        Cmd::Verify { space, preset } => {
            let space = space_of(space)?;
            let presets = match preset_of(preset)? {
                Preset::Sigma(j, _) => vec![Preset::Sigma(j, SigmaVariant::Literal), Preset::Sigma(j, SigmaVariant::Completed)],
                p => vec![p],
            };
            let mut reports = Vec::new();
            let mut text = String::new();
            for p in presets {
                let c = preset_collection(&space, p)?;
                let r = verify_nblock(&c)?;
                text.push_str(&format!(
                    "{}: {} type {:?}, {} pairs checked\n",
                    r.label,
                    if r.pass { "PASS" } else { "FAIL" },
                    r.type_vector,
                    r.pairs_checked
                ));
                let shown = if cli.verbose { r.violations.len() } else { 1 };
                for v in r.violations.iter().take(shown) {
                    text.push_str(&format!(
                        "  {:?} {} -> {} degree {} dim {}{}\n",
                        v.kind,
                        v.from.as_deref().unwrap_or("-"),
                        v.to.as_deref().unwrap_or("-"),
                        v.degree.map_or("-".to_string(), |d| d.to_string()),
                        v.dim,
                        v.expected.as_ref().map_or(String::new(), |x| format!(" (expected {x})"))
                    ));
                }
                reports.push(r);
            }
            let ok = reports.iter().all(|r| r.pass);
            Ok(Outcome { json: json!({ "reports": reports }), text, ok })
        }
        Cmd::Dual { space, preset, psi_rank } => {
            let space = space_of(space)?;
            let preset = preset_of(preset)?;
            let psi = psi_ranks(psi_rank)?;
            let dual = right_dual(&space, preset)?;
            let blocks: Vec<Vec<String>> =
                dual.blocks.iter().map(|b| b.iter().map(|m| m.bundle.to_string()).collect()).collect();
            let ranks = dual.rank_vector(&psi);
            let mut text = format!("{}\n", dual.label);
            for (j, (b, r)) in blocks.iter().zip(&ranks).enumerate() {
                let r = r.map_or("?".to_string(), |r| r.to_string());
                text.push_str(&format!("  'E_{j}: {}   (rank {r})\n", b.join(", ")));
            }
            let mut json = json!({ "label": dual.label, "blocks": blocks, "ranks": ranks });
            let original = preset_collection(&space, preset)?;
            if !original.members().any(|(_, m)| m.bundle.is_symbolic()) {
                let orth = orthogonality_check(&original, &dual)?;
                text.push_str(&format!(
                    "orthogonality: {} ({} pairs, {} symbolic skipped)\n",
                    if orth.pass { "PASS" } else { "FAIL" },
                    orth.pairs_checked,
                    orth.symbolic_skipped
                ));
                json["orthogonality"] = serde_json::to_value(&orth).expect("report serializes");
            }
            Ok(Outcome { json, text, ok: true })
        }
        Cmd::Regular { target: t, at } => {
            let (space, e) = target(t)?;
            let p = at
                .split(',')
                .map(|x| x.trim().parse::<i64>().map_err(|_| usage(format!("bad --at entry {x:?}"))))
                .collect::<Result<Vec<_>, _>>()?;
            let mut r = is_regular(&e, &space, &p)?;
            if !cli.verbose {
                r.witnesses.truncate(1);
            }
            let mut text = format!("{e} at {p:?}: {}\n", if r.is_regular() { "regular" } else { "not regular" });
            for w in &r.witnesses {
                text.push_str(&format!("  H^{} with block {} {:?}: dim {}\n", w.i, w.block, w.index_vector, w.dim));
            }
            Ok(Outcome { json: serde_json::to_value(&r).expect("report serializes"), text, ok: r.is_regular() })
        }
        Cmd::RegIndex { target: t } => {
            let (space, e) = target(t)?;
            let t = min_balanced_reg(&e, &space)?;
            Ok(Outcome {
                json: json!({ "space": space.to_string(), "bundle": e.to_string(), "minBalancedReg": t }),
                text: format!("{t}\n"),
                ok: true,
            })
        }
        Cmd::Split {
            target: t,
            criterion,
            preset,
            psi_rank,
            override_hypotheses,
            spi_mode,
            spi_exception,
            trivial_indexing,
            window_scale,
        } => {
            let (space, e) = target(t)?;
            let opts = ScanOptions {
                override_hypotheses: *override_hypotheses,
                window_scale: *window_scale,
                collect_all: cli.verbose,
                spi_mode: match spi_mode {
                    SpiModeArg::AtMost => SpiIndexMode::AtMost,
                    SpiModeArg::Exactly => SpiIndexMode::Exactly,
                },
                spi_exception: match spi_exception {
                    SpiExceptionArg::BlockIndex => SpiException::BlockIndex,
                    SpiExceptionArg::Literal => SpiException::Literal,
                },
            };
            let report = match criterion.as_str() {
                "tpq" => tpq_check(&e, &space, &opts)?,
                "spi" => spi_check(&e, &space, &opts)?,
                "normalized" => is_normalized(&e, &space)?,
                "trivial" => {
                    let ix = match trivial_indexing {
                        TrivialArg::Literal => TrivialIndexing::Literal,
                        TrivialArg::Complementary => TrivialIndexing::Complementary,
                    };
                    trivial_summand_check(&e, &space, ix)?
                }
                c => match c.strip_prefix("char:").map(str::parse::<usize>) {
                    Some(Ok(j)) => {
                        let psi = psi_ranks(psi_rank)?;
                        characterization_check(CharInput::Bundle(&e), &space, preset_of(preset)?, j, &psi)?
                    }
                    _ => return Err(usage(format!("unknown criterion {c:?}; expected tpq, spi, normalized, trivial or char:j"))),
                },
            };
            Ok(Outcome {
                text: report_text(&report),
                ok: report.holds(),
                json: serde_json::to_value(&report).expect("report serializes"),
            })
        }
        Cmd::Restrict { target: t, factor } => {
            let (space, e) = target(t)?;
            if *factor >= space.len() {
                return Err(usage(format!("factor {factor} out of range for {space}")));
            }
            let (r, sub) = e.restrict_hyperplane(&space, *factor)?;
            Ok(Outcome {
                json: json!({ "space": sub.to_string(), "bundle": r.to_string() }),
                text: format!("{r} on {sub}\n"),
                ok: true,
            })
        }
    }
}

fn report_text(r: &CriterionReport) -> String {
    let mut s = format!("{}: {}\n", r.criterion, if r.holds() { "holds" } else { "fails" });
    if r.outside_hypotheses {
        s.push_str("  (outside theorem hypotheses)\n");
    }
    if let Some(c) = &r.certificate {
        s.push_str(&format!("  certificate: {}\n", c.statement));
    }
    let shown: Vec<_> = if r.all_witnesses.is_empty() { r.witness.iter().collect() } else { r.all_witnesses.iter().collect() };
    for w in shown {
        let at = w.t.map_or(String::new(), |t| format!(" at t = {t}"));
        s.push_str(&format!("  witness: {} violated{at}: H^{} with {} has dim {}\n", w.condition, w.i, w.block, w.dim));
    }
    if let Some((lo, hi)) = r.scan_window {
        s.push_str(&format!("  scan window: {lo}..{hi}\n"));
    }
    if let Some(x) = r.cross_check {
        s.push_str(&format!("  literal cross-check: {}\n", if x { "agrees" } else { "disagrees" }));
    }
    for n in &r.notes {
        s.push_str(&format!("  note: {n}\n"));
    }
    s
}
