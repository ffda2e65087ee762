//! Batch command line front end: load groups, resolutions and series,
//! run the library operations, and emit canonical text or JSON.
//!
//! Exit codes: 0 on success, 1 on validation or computation errors
//! (including a failed consistency check), 2 on parse errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use eqzeta_core::burnside::{BurnsideQElement, BurnsideQRing, CharRing, EqRing};
use eqzeta_core::group::GroupContext;
use eqzeta_core::invariants::{
    poincare_series, recover_zeta, rhohat_check, zeta_functions, RecoverMode,
};
use eqzeta_core::render;
use eqzeta_core::resolution::{multiplicity_matrix, n_value, omega_vector, validate, Resolution};
use eqzeta_core::series::{factorize, IntRing, MultiSeries};

use eqzeta_cli::io;
use eqzeta_cli::report::RunReport;
use eqzeta_cli::text;
use eqzeta_cli::fixtures;

#[derive(Parser)]
#[command(name = "eqzeta", version, about = "Exact equivariant Poincare series and monodromy zeta functions from resolution combinatorics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect a group: subgroup classes, characters, legend.
    Group {
        #[command(subcommand)]
        cmd: GroupCmd,
    },
    /// Arithmetic in the ring of equipped classes.
    Ring {
        #[command(subcommand)]
        cmd: RingCmd,
    },
    /// Truncated series operations.
    Series {
        #[command(subcommand)]
        cmd: SeriesCmd,
    },
    /// Resolution combinatorics.
    Resolution {
        #[command(subcommand)]
        cmd: ResolutionCmd,
    },
    /// Factored Poincare series of a resolution, with its expansion.
    Poincare {
        #[arg(long)]
        resolution: PathBuf,
        /// Componentwise truncation bound, e.g. 6,6.
        #[arg(long, value_parser = parse_bound)]
        bound: Bound,
    },
    /// The two equivariant zeta functions.
    Zeta {
        #[command(subcommand)]
        cmd: ZetaCmd,
    },
    /// Consistency checks.
    Check {
        #[command(subcommand)]
        cmd: CheckCmd,
    },
    /// Bundled fixture suite.
    Fixtures {
        #[command(subcommand)]
        cmd: FixturesCmd,
    },
}

#[derive(Subcommand)]
enum GroupCmd {
    Inspect(GroupArgs),
}

#[derive(Args)]
struct GroupArgs {
    #[arg(long)]
    group: PathBuf,
}

#[derive(Subcommand)]
enum RingCmd {
    /// Multiply two ring elements given in canonical text form.
    Mul {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Symmetric power of a class, e.g. --class "[G/e]" --k 2.
    Sympow {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        class: String,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Subcommand)]
enum SeriesCmd {
    /// Expand a factored series to a bound.
    Expand {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        factored: PathBuf,
        #[arg(long, value_parser = parse_bound)]
        bound: Bound,
    },
    /// Multiply two series files (same ring and bound).
    Mul {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Invert a series with unit constant term.
    Invert {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        series: PathBuf,
    },
    /// Substitute each variable by a monomial, e.g. --images "[[1,1],[0,2]]".
    Subst {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        series: PathBuf,
        #[arg(long)]
        images: String,
        #[arg(long, value_parser = parse_bound)]
        bound: Bound,
    },
    /// Factor a series over the equipped ring into binomials.
    Factor {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        series: PathBuf,
    },
    /// Apply a reduction homomorphism to every coefficient.
    Reduce {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        series: PathBuf,
        #[arg(long, value_enum)]
        reduction: Reduction,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Reduction {
    Rho,
    Rhohat,
    Eps,
}

#[derive(Subcommand)]
enum ResolutionCmd {
    Validate {
        #[arg(long)]
        resolution: PathBuf,
    },
    Mmatrix {
        #[arg(long)]
        resolution: PathBuf,
    },
    Omega {
        #[arg(long)]
        resolution: PathBuf,
    },
}

#[derive(Subcommand)]
enum ZetaCmd {
    /// Both zeta functions straight from resolution data.
    FromResolution {
        #[arg(long)]
        resolution: PathBuf,
    },
    /// Recover both zeta functions from a factored Poincare series.
    Recover {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        series: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Free,
    General,
}

#[derive(Subcommand)]
enum CheckCmd {
    /// Reduction consistency against an independent plain series.
    Statement1 {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        series: PathBuf,
        #[arg(long)]
        nonequiv: PathBuf,
        #[arg(long, value_parser = parse_bound)]
        bound: Bound,
    },
}

#[derive(Subcommand)]
enum FixturesCmd {
    Run {
        /// Seed for the randomized law suite.
        #[arg(long, default_value_t = fixtures::DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Clone)]
struct Bound(Vec<u32>);

fn parse_bound(s: &str) -> Result<Bound, String> {
    let parts: Result<Vec<u32>, _> = s.split(',').map(|p| p.trim().parse::<u32>()).collect();
    match parts {
        Ok(v) if !v.is_empty() && v.iter().all(|&x| x > 0) => Ok(Bound(v)),
        Ok(_) => Err("bound components must be positive".to_string()),
        Err(e) => Err(format!("bad bound: {}", e)),
    }
}

/// An error with the exit code it maps to.
struct CliError {
    code: u8,
    message: String,
}

type CliResult<T> = Result<T, CliError>;

/// Parse-phase failures exit with 2.
fn parse_err<E: std::fmt::Display>(e: E) -> CliError {
    CliError { code: 2, message: format!("{:#}", e) }
}

/// Validation and computation failures exit with 1.
fn run_err<E: std::fmt::Display>(e: E) -> CliError {
    CliError { code: 1, message: format!("{:#}", e) }
}

fn load_group(path: &Path) -> CliResult<GroupContext> {
    io::load_group(path).map_err(parse_err)
}

fn load_resolution(path: &Path) -> CliResult<(GroupContext, Resolution)> {
    io::load_resolution(path).map_err(parse_err)
}

fn ensure_valid(ctx: &GroupContext, res: &Resolution) -> CliResult<()> {
    let report = validate(ctx, res);
    if report.is_ok() {
        Ok(())
    } else {
        Err(run_err(format!("resolution data is inconsistent: {}", report.failures.join("; "))))
    }
}

fn factored_result(ctx: &GroupContext, f: &eqzeta_core::series::FactoredSeries) -> serde_json::Value {
    serde_json::json!({
        "text": render::factored_series(ctx, f),
        "factored": io::factored_series_to_file(ctx, f),
    })
}

fn eq_series_result(ctx: &GroupContext, s: &MultiSeries<eqzeta_core::burnside::EqElement>) -> serde_json::Value {
    serde_json::json!({
        "text": render::series(s, |c| render::eq_element(ctx, c)),
        "series": io::eq_series_to_file(ctx, s),
    })
}

fn zeta_result(ctx: &GroupContext, z: &eqzeta_core::invariants::FactoredZeta) -> serde_json::Value {
    serde_json::json!({
        "text": render::factored_zeta(ctx, z),
        "zeta": io::zeta_to_file(ctx, z),
    })
}

fn run(cli: &Cli) -> CliResult<RunReport> {
    match &cli.command {
        Command::Group { cmd: GroupCmd::Inspect(args) } => {
            let ctx = load_group(&args.group)?;
            let mut report = RunReport::new("group inspect");
            let mut lines = vec![format!("order: {}", ctx.order())];
            let elements: Vec<String> =
                ctx.group().elements().map(|e| ctx.group().label(e)).collect();
            lines.push(format!("elements: {}", elements.join(", ")));
            let classes: Vec<serde_json::Value> = ctx
                .classes()
                .iter()
                .enumerate()
                .map(|(cid, class)| {
                    let rep = ctx.class_representative(cid);
                    serde_json::json!({
                        "name": ctx.subgroup_class_name(cid),
                        "order": rep.order(),
                        "conjugates": class.members.len(),
                        "representative": rep.elems(),
                        "characters": ctx.characters(class.rep).len(),
                    })
                })
                .collect();
            lines.push(format!(
                "subgroup classes: {} ({} subgroups total)",
                ctx.classes().len(),
                ctx.subgroups().len()
            ));
            lines.push(format!("equipped classes: {}", ctx.eq_class_count()));
            report.text = lines.join("\n");
            report.result = serde_json::json!({
                "order": ctx.order(),
                "elements": elements,
                "classes": classes,
                "equipped_classes": ctx.eq_class_count(),
            });
            report.legend = render::legend(&ctx);
            Ok(report)
        }
        Command::Ring { cmd } => match cmd {
            RingCmd::Mul { group, a, b } => {
                let ctx = load_group(group)?;
                let ea = text::parse_eq_element(&ctx, a).map_err(parse_err)?;
                let eb = text::parse_eq_element(&ctx, b).map_err(parse_err)?;
                let mut ring = EqRing::new(&ctx);
                let prod = ring.mul_elements(&ea, &eb);
                let mut report = RunReport::new("ring mul");
                report.text = render::eq_element(&ctx, &prod);
                report.result = serde_json::json!({
                    "text": render::eq_element(&ctx, &prod),
                    "terms": prod.terms().map(|(c, n)| serde_json::json!({
                        "class": ctx.eq_class_token(c.0), "n": n
                    })).collect::<Vec<_>>(),
                });
                report.legend = render::legend(&ctx);
                Ok(report)
            }
            RingCmd::Sympow { group, class, k } => {
                let ctx = load_group(group)?;
                let cls = text::parse_class_token(&ctx, class).map_err(parse_err)?;
                let mut ring = EqRing::new(&ctx);
                let power = ring.class_sym_power(cls, *k);
                let mut report = RunReport::new("ring sympow");
                report.text = render::eq_element(&ctx, &power);
                report.result = serde_json::json!({
                    "text": render::eq_element(&ctx, &power),
                    "terms": power.terms().map(|(c, n)| serde_json::json!({
                        "class": ctx.eq_class_token(c.0), "n": n
                    })).collect::<Vec<_>>(),
                });
                report.legend = render::legend(&ctx);
                Ok(report)
            }
        },
        Command::Series { cmd } => run_series(cmd),
        Command::Resolution { cmd } => match cmd {
            ResolutionCmd::Validate { resolution } => {
                let (ctx, res) = load_resolution(resolution)?;
                let vr = validate(&ctx, &res);
                let mut report = RunReport::new("resolution validate");
                report.text = if vr.is_ok() {
                    "valid".to_string()
                } else {
                    format!("invalid:\n  {}", vr.failures.join("\n  "))
                };
                report.notes = vr.notes.clone();
                report.result = serde_json::json!({
                    "valid": vr.is_ok(),
                    "failures": vr.failures,
                });
                report.legend = render::legend(&ctx);
                if vr.is_ok() {
                    Ok(report)
                } else {
                    // still print the report, then fail
                    emit(&report, cli)?;
                    Err(CliError { code: 1, message: "validation failed".into() })
                }
            }
            ResolutionCmd::Mmatrix { resolution } => {
                let (ctx, res) = load_resolution(resolution)?;
                ensure_valid(&ctx, &res)?;
                let m = multiplicity_matrix(&res.graph).map_err(run_err)?;
                let n = m.size();
                let rows: Vec<Vec<i64>> = (0..n as u32)
                    .map(|i| (0..n as u32).map(|j| m.get(i, j)).collect())
                    .collect();
                let mut report = RunReport::new("resolution mmatrix");
                report.text = rows
                    .iter()
                    .map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "))
                    .collect::<Vec<_>>()
                    .join("\n");
                report.result = serde_json::json!({ "m": rows });
                Ok(report)
            }
            ResolutionCmd::Omega { resolution } => {
                let (ctx, res) = load_resolution(resolution)?;
                ensure_valid(&ctx, &res)?;
                let m = multiplicity_matrix(&res.graph).map_err(run_err)?;
                let mut lines = Vec::new();
                let mut entries = Vec::new();
                for st in &res.strata {
                    let w = omega_vector(&ctx, &res, &m, st);
                    let n = n_value(&res, &m, st);
                    lines.push(format!("{}: omega = {:?}, n = {}", st.id, w, n));
                    entries.push(serde_json::json!({
                        "stratum": st.id,
                        "omega": w,
                        "n": n,
                    }));
                }
                let mut report = RunReport::new("resolution omega");
                report.text = lines.join("\n");
                report.result = serde_json::json!({ "strata": entries });
                report.legend = render::legend(&ctx);
                Ok(report)
            }
        },
        Command::Poincare { resolution, bound } => {
            let (ctx, res) = load_resolution(resolution)?;
            if bound.0.len() != res.arity() {
                return Err(parse_err(format!(
                    "bound has {} components but the resolution has {} valuations",
                    bound.0.len(),
                    res.arity()
                )));
            }
            let mut ring = EqRing::new(&ctx);
            let (factored, expansion) =
                poincare_series(&ctx, &mut ring, &res, &bound.0).map_err(run_err)?;
            let mut report = RunReport::new("poincare");
            report.text = format!(
                "{}\nexpansion: {}",
                render::factored_series(&ctx, &factored),
                render::series(&expansion, |c| render::eq_element(&ctx, c))
            );
            report.result = serde_json::json!({
                "factored": factored_result(&ctx, &factored),
                "expansion": eq_series_result(&ctx, &expansion),
            });
            report.legend = render::legend(&ctx);
            Ok(report)
        }
        Command::Zeta { cmd } => match cmd {
            ZetaCmd::FromResolution { resolution } => {
                let (ctx, res) = load_resolution(resolution)?;
                let (zeta, tilde) = zeta_functions(&ctx, &res).map_err(run_err)?;
                let mut report = RunReport::new("zeta from-resolution");
                report.text = format!(
                    "zeta: {}\nzeta-tilde: {}",
                    render::factored_zeta(&ctx, &zeta),
                    render::factored_zeta(&ctx, &tilde)
                );
                report.result = serde_json::json!({
                    "zeta": zeta_result(&ctx, &zeta),
                    "zeta_tilde": zeta_result(&ctx, &tilde),
                });
                report.legend = render::legend(&ctx);
                Ok(report)
            }
            ZetaCmd::Recover { group, series, mode } => {
                let ctx = load_group(group)?;
                let file: io::FactoredSeriesFile = io::read_json(series).map_err(parse_err)?;
                let factored = io::factored_series_from_file(&ctx, &file).map_err(parse_err)?;
                let mode = match mode {
                    Mode::Free => RecoverMode::Free,
                    Mode::General => RecoverMode::General,
                };
                let rec = recover_zeta(&ctx, &factored, mode).map_err(run_err)?;
                let mut report = RunReport::new("zeta recover");
                report.text = format!(
                    "zeta: {}\nzeta-tilde: {}",
                    render::factored_zeta(&ctx, &rec.zeta),
                    render::factored_zeta(&ctx, &rec.zeta_tilde)
                );
                report.warnings = rec.warnings.clone();
                report.notes = rec.notes.clone();
                report.result = serde_json::json!({
                    "zeta": zeta_result(&ctx, &rec.zeta),
                    "zeta_tilde": zeta_result(&ctx, &rec.zeta_tilde),
                });
                report.legend = render::legend(&ctx);
                Ok(report)
            }
        },
        Command::Check { cmd: CheckCmd::Statement1 { group, series, nonequiv, bound } } => {
            let ctx = load_group(group)?;
            let pfile: io::FactoredSeriesFile = io::read_json(series).map_err(parse_err)?;
            let factored = io::factored_series_from_file(&ctx, &pfile).map_err(parse_err)?;
            let nfile: io::NonEquivFile = io::read_json(nonequiv).map_err(parse_err)?;
            let plain = io::nonequiv_from_file(&nfile);
            let mut ring = EqRing::new(&ctx);
            let check =
                rhohat_check(&ctx, &mut ring, &factored, &plain, &bound.0).map_err(run_err)?;
            let mut report = RunReport::new("check statement1");
            report.text = format!(
                "equal: {}\nreduced: {}\nsubstituted: {}",
                check.equal,
                render::int_series(&check.reduced),
                render::int_series(&check.substituted)
            );
            report.result = serde_json::json!({
                "equal": check.equal,
                "reduced": io::int_series_to_file(&check.reduced),
                "substituted": io::int_series_to_file(&check.substituted),
            });
            if check.equal {
                Ok(report)
            } else {
                emit(&report, cli)?;
                Err(CliError { code: 1, message: "reduction consistency check failed".into() })
            }
        }
        Command::Fixtures { cmd: FixturesCmd::Run { seed } } => {
            let (lines, ok) = fixtures::run_all(*seed);
            let mut report = RunReport::new("fixtures run");
            report.text = lines.join("\n");
            report.result = serde_json::json!({ "ok": ok, "lines": lines });
            if ok {
                Ok(report)
            } else {
                emit(&report, cli)?;
                Err(CliError { code: 1, message: "fixture suite failed".into() })
            }
        }
    }
}

fn run_series(cmd: &SeriesCmd) -> CliResult<RunReport> {
    match cmd {
        SeriesCmd::Expand { group, factored, bound } => {
            let ctx = load_group(group)?;
            let file: io::FactoredSeriesFile = io::read_json(factored).map_err(parse_err)?;
            let f = io::factored_series_from_file(&ctx, &file).map_err(parse_err)?;
            let mut ring = EqRing::new(&ctx);
            let s = f.expand(&mut ring, &bound.0).map_err(run_err)?;
            let mut report = RunReport::new("series expand");
            report.text = render::series(&s, |c| render::eq_element(&ctx, c));
            report.result = eq_series_result(&ctx, &s);
            report.legend = render::legend(&ctx);
            Ok(report)
        }
        SeriesCmd::Mul { group, a, b } => {
            let ctx = load_group(group)?;
            let fa: io::SeriesFile = io::read_json(a).map_err(parse_err)?;
            let fb: io::SeriesFile = io::read_json(b).map_err(parse_err)?;
            if fa.ring != fb.ring {
                return Err(parse_err(format!("ring mismatch: {} vs {}", fa.ring, fb.ring)));
            }
            let mut report = RunReport::new("series mul");
            report.legend = render::legend(&ctx);
            match fa.ring.as_str() {
                io::RING_EQUIPPED => {
                    let sa = io::eq_series_from_file(&ctx, &fa).map_err(parse_err)?;
                    let sb = io::eq_series_from_file(&ctx, &fb).map_err(parse_err)?;
                    let mut ring = EqRing::new(&ctx);
                    let s = MultiSeries::mul(&mut ring, &sa, &sb).map_err(run_err)?;
                    report.text = render::series(&s, |c| render::eq_element(&ctx, c));
                    report.result = eq_series_result(&ctx, &s);
                }
                io::RING_BURNSIDE_Q => {
                    let sa = io::burnside_q_series_from_file(&ctx, &fa).map_err(parse_err)?;
                    let sb = io::burnside_q_series_from_file(&ctx, &fb).map_err(parse_err)?;
                    let mut ring = BurnsideQRing::new(&ctx);
                    let s = MultiSeries::mul(&mut ring, &sa, &sb).map_err(run_err)?;
                    report.text = render::series(&s, |c| render::burnside_q_element(&ctx, c));
                    report.result = serde_json::json!({
                        "text": report.text,
                        "series": io::burnside_q_series_to_file(&ctx, &s),
                    });
                }
                io::RING_CHAR => {
                    let sa = io::char_series_from_file(&ctx, &fa).map_err(parse_err)?;
                    let sb = io::char_series_from_file(&ctx, &fb).map_err(parse_err)?;
                    let mut ring = CharRing::new(&ctx);
                    let s = MultiSeries::mul(&mut ring, &sa, &sb).map_err(run_err)?;
                    report.text = render::series(&s, |c| render::char_ring_element(&ctx, c));
                    report.result = serde_json::json!({
                        "text": report.text,
                        "series": io::char_series_to_file(&ctx, &s),
                    });
                }
                io::RING_INT => {
                    let sa = io::int_series_from_file(&fa).map_err(parse_err)?;
                    let sb = io::int_series_from_file(&fb).map_err(parse_err)?;
                    let mut ring = IntRing;
                    let s = MultiSeries::mul(&mut ring, &sa, &sb).map_err(run_err)?;
                    report.text = render::int_series(&s);
                    report.result = serde_json::json!({
                        "text": report.text,
                        "series": io::int_series_to_file(&s),
                    });
                }
                other => return Err(parse_err(format!("unsupported ring {:?} for mul", other))),
            }
            Ok(report)
        }
        SeriesCmd::Invert { group, series } => {
            let ctx = load_group(group)?;
            let f: io::SeriesFile = io::read_json(series).map_err(parse_err)?;
            let mut report = RunReport::new("series invert");
            report.legend = render::legend(&ctx);
            match f.ring.as_str() {
                io::RING_EQUIPPED => {
                    let s = io::eq_series_from_file(&ctx, &f).map_err(parse_err)?;
                    let mut ring = EqRing::new(&ctx);
                    let inv = MultiSeries::inverse(&mut ring, &s).map_err(run_err)?;
                    report.text = render::series(&inv, |c| render::eq_element(&ctx, c));
                    report.result = eq_series_result(&ctx, &inv);
                }
                io::RING_INT => {
                    let s = io::int_series_from_file(&f).map_err(parse_err)?;
                    let mut ring = IntRing;
                    let inv = MultiSeries::inverse(&mut ring, &s).map_err(run_err)?;
                    report.text = render::int_series(&inv);
                    report.result = serde_json::json!({
                        "text": report.text,
                        "series": io::int_series_to_file(&inv),
                    });
                }
                other => return Err(parse_err(format!("unsupported ring {:?} for invert", other))),
            }
            Ok(report)
        }
        SeriesCmd::Subst { group, series, images, bound } => {
            let ctx = load_group(group)?;
            let f: io::SeriesFile = io::read_json(series).map_err(parse_err)?;
            let images: Vec<Vec<u32>> = serde_json::from_str(images).map_err(parse_err)?;
            let mut report = RunReport::new("series subst");
            report.legend = render::legend(&ctx);
            match f.ring.as_str() {
                io::RING_EQUIPPED => {
                    let s = io::eq_series_from_file(&ctx, &f).map_err(parse_err)?;
                    let ring = EqRing::new(&ctx);
                    let out = MultiSeries::substitute(&ring, &s, &images, bound.0.clone())
                        .map_err(run_err)?;
                    report.text = render::series(&out, |c| render::eq_element(&ctx, c));
                    report.result = eq_series_result(&ctx, &out);
                }
                io::RING_INT => {
                    let s = io::int_series_from_file(&f).map_err(parse_err)?;
                    let out = MultiSeries::substitute(&IntRing, &s, &images, bound.0.clone())
                        .map_err(run_err)?;
                    report.text = render::int_series(&out);
                    report.result = serde_json::json!({
                        "text": report.text,
                        "series": io::int_series_to_file(&out),
                    });
                }
                other => return Err(parse_err(format!("unsupported ring {:?} for subst", other))),
            }
            Ok(report)
        }
        SeriesCmd::Factor { group, series } => {
            let ctx = load_group(group)?;
            let f: io::SeriesFile = io::read_json(series).map_err(parse_err)?;
            let s = io::eq_series_from_file(&ctx, &f).map_err(parse_err)?;
            let mut ring = EqRing::new(&ctx);
            let factored = factorize(&mut ring, &s).map_err(run_err)?;
            let mut report = RunReport::new("series factor");
            report.text = render::factored_series(&ctx, &factored);
            report.result = factored_result(&ctx, &factored);
            report.legend = render::legend(&ctx);
            Ok(report)
        }
        SeriesCmd::Reduce { group, series, reduction } => {
            let ctx = load_group(group)?;
            let f: io::SeriesFile = io::read_json(series).map_err(parse_err)?;
            let s = io::eq_series_from_file(&ctx, &f).map_err(parse_err)?;
            let mut report = RunReport::new("series reduce");
            report.legend = render::legend(&ctx);
            match reduction {
                Reduction::Rho => {
                    let target = BurnsideQRing::new(&ctx);
                    let out = s.map_coefficients(&target, |e| {
                        BurnsideQElement::from_integer(&eqzeta_core::burnside::rho(&ctx, e))
                    });
                    report.text = render::series(&out, |c| render::burnside_q_element(&ctx, c));
                    report.result = serde_json::json!({
                        "text": report.text,
                        "series": io::burnside_q_series_to_file(&ctx, &out),
                    });
                }
                Reduction::Rhohat => {
                    let out =
                        s.map_coefficients(&IntRing, |e| eqzeta_core::burnside::rhohat(&ctx, e));
                    report.text = render::int_series(&out);
                    report.result = serde_json::json!({
                        "text": report.text,
                        "series": io::int_series_to_file(&out),
                    });
                }
                Reduction::Eps => {
                    let target = CharRing::new(&ctx);
                    let out =
                        s.map_coefficients(&target, |e| eqzeta_core::burnside::eps(&ctx, e));
                    report.text =
                        render::series(&out, |c| render::char_ring_element(&ctx, c));
                    report.result = serde_json::json!({
                        "text": report.text,
                        "series": io::char_series_to_file(&ctx, &out),
                    });
                }
            }
            Ok(report)
        }
    }
}

fn emit(report: &RunReport, cli: &Cli) -> CliResult<()> {
    let body = match cli.format {
        Format::Text => report.render_text(),
        Format::Json => report.render_json(),
    };
    match &cli.out {
        Some(path) => std::fs::write(path, body).map_err(run_err)?,
        None => print!("{}", body),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(&cli) {
        Ok(report) => {
            if let Err(e) = emit(&report, &cli) {
                eprintln!("error: {}", e.message);
                return ExitCode::from(e.code);
            }
            eprintln!("# elapsed_ms: {}", start.elapsed().as_millis());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            eprintln!("# elapsed_ms: {}", start.elapsed().as_millis());
            ExitCode::from(e.code)
        }
    }
}
