use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;
use wml_core::invariants::{report_with, InvariantOptions, InvariantReport};
use wml_core::montecarlo::estimate_moment;
use wml_core::stallings::FringeOptions;
use wml_core::surfaces::{build_surface, enumerate_matchings, genus_spectrum, DEFAULT_SPEC_CAP};
use wml_core::weingarten::moment::DEFAULT_TERM_CAP;
use wml_core::weingarten::{laurent, moment_with_cap, TraceMonomial};
use wml_core::whitehead::DEFAULT_ORBIT_CAP;
use wml_core::words::is_balanced;
use wml_core::{Error, Word};

mod cache;
mod config;
mod verify;

use cache::Cache;
use config::Config;

/// Free-group invariants and exact unitary word-map moments.
#[derive(Parser, Debug)]
#[command(name = "wml", version)]
struct Cli {
    /// Defaults file with `key = value` lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Result cache directory.
    #[arg(long, global = true, env = "WML_CACHE")]
    cache_dir: Option<PathBuf>,
    /// Skip the result cache.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Emit tables as CSV instead of JSON.
    #[arg(long, global = true)]
    csv: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Default)]
struct Caps {
    /// Rank of the ambient free group (default: largest generator used).
    #[arg(long, short)]
    rank: Option<usize>,
    #[arg(long)]
    genus_cap: Option<usize>,
    #[arg(long)]
    orbit_cap: Option<usize>,
    /// Largest core graph whose fringe is enumerated.
    #[arg(long)]
    vertex_cap: Option<usize>,
    /// Enumerate the fringe past the vertex cap.
    #[arg(long)]
    force: bool,
    #[arg(long)]
    spec_cap: Option<u64>,
    #[arg(long)]
    max_subdivision: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reduced form, cyclic core, proper-power root and exponent sums.
    Parse {
        word: String,
        #[arg(long, short)]
        rank: Option<usize>,
    },
    /// Primitivity rank, commutator length and commutator-critical subgroups.
    Invariants {
        word: String,
        #[command(flatten)]
        caps: Caps,
    },
    /// `E_w[xi_{m_1} ... xi_{m_l}]` exactly, at a fixed n, or by Monte Carlo.
    Moment {
        word: String,
        /// Trace exponents, e.g. `1,-1`.
        #[arg(short = 'T', long = "trace", default_value = "1", allow_hyphen_values = true)]
        t: String,
        #[arg(long, short)]
        rank: Option<usize>,
        /// Exact rational function of n (the default).
        #[arg(long, conflicts_with = "mc")]
        symbolic: bool,
        /// Evaluate at this matrix size.
        #[arg(long = "n")]
        n: Option<u64>,
        /// Monte Carlo estimate at `--n`.
        #[arg(long, requires = "n")]
        mc: bool,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Terms of the expansion at infinity beyond the leading one.
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        term_cap: Option<u64>,
        /// Print only the value.
        #[arg(long)]
        plain: bool,
    },
    /// Genus spectrum of the matching surfaces of a word list.
    Surfaces {
        #[arg(required = true)]
        words: Vec<String>,
        #[arg(long, short)]
        rank: Option<usize>,
        /// Largest number of matchings per generator.
        #[arg(short = 'K', long = "max-subdivision")]
        k: Option<usize>,
        #[arg(long)]
        spec_cap: Option<u64>,
        /// Emit every surface (cells, gluings, components) instead of the spectrum.
        #[arg(long)]
        emit: bool,
    },
    /// Compare exact expansions with the predicted leading terms.
    Verify {
        word: String,
        /// Trace exponents; repeat for several rows.
        #[arg(short = 'T', long = "trace", default_value = "1", allow_hyphen_values = true)]
        t: Vec<String>,
        #[command(flatten)]
        caps: Caps,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        term_cap: Option<u64>,
        /// Add wall-clock timings to each row.
        #[arg(long)]
        timings: bool,
    },
}

struct Ctx {
    config: Config,
    csv: bool,
    cache: Option<Cache>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::Invalid(_) | Error::BelowValidity { .. } => 2,
        Error::Cap { .. } | Error::Undecided(_) => 3,
        Error::Internal(_) => 4,
    }
}

fn word(ctx: &Ctx, text: &str, rank: Option<usize>) -> Result<Word, Error> {
    match rank.or(ctx.config.get("rank")?) {
        Some(r) => Ok(Word::parse(text, r)?),
        None => {
            let w = Word::parse(text, 26)?;
            let r = w.max_generator().max(1);
            Ok(w.with_rank(r))
        }
    }
}

fn trace(text: &str) -> Result<TraceMonomial, Error> {
    text.parse()
}

fn options(ctx: &Ctx, caps: &Caps) -> Result<InvariantOptions, Error> {
    let c = &ctx.config;
    let d = InvariantOptions::default();
    Ok(InvariantOptions {
        fringe: FringeOptions {
            vertex_cap: c.pick(caps.vertex_cap, "vertex_cap", d.fringe.vertex_cap)?,
            force: caps.force,
        },
        orbit_cap: c.pick(caps.orbit_cap, "orbit_cap", DEFAULT_ORBIT_CAP)?,
        genus_cap: c.pick(caps.genus_cap, "genus_cap", d.genus_cap)?,
        max_subdivision: c.pick(caps.max_subdivision, "max_subdivision", d.max_subdivision)?,
        spec_cap: c.pick(caps.spec_cap, "spec_cap", DEFAULT_SPEC_CAP)?,
    })
}

fn to_json<T: Serialize>(v: &T) -> Result<Vec<u8>, Error> {
    let mut out = serde_json::to_vec_pretty(v).map_err(|e| Error::Internal(e.to_string()))?;
    out.push(b'\n');
    Ok(out)
}

fn to_csv(header: &[&str], rows: &[Vec<String>]) -> Result<Vec<u8>, Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| Error::Internal(e.to_string());
    w.write_record(header).map_err(err)?;
    for r in rows {
        w.write_record(r).map_err(err)?;
    }
    w.into_inner().map_err(|e| Error::Internal(e.to_string()))
}

fn cmd_parse(ctx: &Ctx, text: &str, rank: Option<usize>) -> Result<Vec<u8>, Error> {
    let w = word(ctx, text, rank)?;
    let (core, conjugator) = w.cyclic_reduce();
    let pp = w.is_proper_power();
    let v = json!({
        "input": text,
        "word": w,
        "signed": w.signed_letters(),
        "length": w.len(),
        "rank": w.rank(),
        "cyclic_core": core,
        "conjugator": conjugator,
        "cyclic_length": core.len(),
        "proper_power": pp,
        "exponent_sums": w.exponent_sums(),
        "balanced": is_balanced(std::slice::from_ref(&w)).balanced,
        "canonical_key": w.canonical_key(),
    });
    if ctx.csv {
        let row = vec![
            w.to_string(),
            w.len().to_string(),
            core.to_string(),
            conjugator.to_string(),
            pp.root.to_string(),
            pp.exponent.to_string(),
            w.exponent_sums().iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" "),
        ];
        let header = ["word", "length", "cyclic_core", "conjugator", "root", "exponent", "exponent_sums"];
        return to_csv(&header, &[row]);
    }
    to_json(&v)
}

fn invariants_csv(r: &InvariantReport) -> Result<Vec<u8>, Error> {
    let count = r.comm_crit.count().map_or("undecided".to_string(), |c| c.to_string());
    let row = vec![
        r.word.to_string(),
        r.rank.to_string(),
        r.pi.to_string(),
        r.cl.to_string(),
        count,
        r.proper_power.root.to_string(),
        r.proper_power.exponent.to_string(),
    ];
    let header = ["word", "rank", "pi", "cl", "comm_crit_count", "root", "exponent"];
    to_csv(&header, &[row])
}

/// Returns the output bytes and whether anything was left undecided.
fn cmd_invariants(ctx: &Ctx, text: &str, caps: &Caps) -> Result<(Vec<u8>, bool), Error> {
    let w = word(ctx, text, caps.rank)?;
    let opts = options(ctx, caps)?;
    let key = Cache::key(
        "invariants",
        &[
            w.canonical_key(),
            w.rank().to_string(),
            format!(
                "vertex_cap={} force={} orbit_cap={} genus_cap={} max_subdivision={} spec_cap={}",
                opts.fringe.vertex_cap, opts.fringe.force, opts.orbit_cap, opts.genus_cap, opts.max_subdivision, opts.spec_cap
            ),
            if ctx.csv { "csv" } else { "json" }.to_string(),
        ],
    );
    if let Some(bytes) = ctx.cache.as_ref().and_then(|c| c.get(&key)) {
        return Ok((bytes, false));
    }
    let r = report_with(&w, w.rank(), &opts);
    let bytes = if ctx.csv { invariants_csv(&r)? } else { to_json(&r)? };
    let undecided = r.is_undecided();
    if !undecided {
        if let Some(c) = &ctx.cache {
            c.put(&key, &bytes)?;
        }
    }
    Ok((bytes, undecided))
}

#[allow(clippy::too_many_arguments)]
fn cmd_moment(
    ctx: &Ctx,
    text: &str,
    t: &str,
    rank: Option<usize>,
    n: Option<u64>,
    mc: bool,
    samples: Option<u64>,
    seed: Option<u64>,
    depth: Option<usize>,
    term_cap: Option<u64>,
    plain: bool,
) -> Result<Vec<u8>, Error> {
    let c = &ctx.config;
    let w = word(ctx, text, rank)?;
    let t = trace(t)?;
    if mc {
        let n = n.expect("clap enforces --n with --mc");
        let samples = c.pick(samples, "samples", 100_000)?;
        let seed = c.pick(seed, "seed", 0)?;
        let e = estimate_moment(&w, &t, n as usize, samples, seed)?;
        if plain {
            return Ok(format!("{} +- {}\n", e.mean_re, e.stderr).into_bytes());
        }
        return to_json(&json!({"word": w, "T": t.to_string(), "estimate": e}));
    }
    let term_cap = c.pick(term_cap, "term_cap", DEFAULT_TERM_CAP)?;
    let m = moment_with_cap(&w, &t, term_cap)?;
    if let Some(n) = n {
        let v = m.eval(n)?;
        if plain {
            return Ok(format!("{v}\n").into_bytes());
        }
        return to_json(&json!({"word": w, "T": t.to_string(), "n": n, "n_min": m.n_min, "value": v.to_string()}));
    }
    if plain {
        return Ok(format!("{}\n", m.value).into_bytes());
    }
    let depth = c.pick(depth, "depth", 4)?;
    to_json(&json!({
        "word": w,
        "T": t.to_string(),
        "value": m.value,
        "n_min": m.n_min,
        "laurent": laurent(&m.value, depth),
    }))
}

fn cmd_surfaces(
    ctx: &Ctx,
    texts: &[String],
    rank: Option<usize>,
    k: Option<usize>,
    spec_cap: Option<u64>,
    emit: bool,
) -> Result<Vec<u8>, Error> {
    let c = &ctx.config;
    let parsed = texts.iter().map(|s| word(ctx, s, rank)).collect::<Result<Vec<_>, _>>()?;
    let r = parsed.iter().map(|w| w.rank()).max().unwrap_or(1);
    let words: Vec<Word> = parsed.into_iter().map(|w| w.with_rank(r)).collect();
    let k = c.pick(k, "max_subdivision", 2)?;
    let cap = c.pick(spec_cap, "spec_cap", DEFAULT_SPEC_CAP)?;
    if emit {
        let specs = enumerate_matchings(&words, k, cap)?;
        let mut out = Vec::new();
        for spec in specs.iter() {
            let s = build_surface(&spec)?;
            let mut v = s.to_json();
            v["matchings"] = json!(spec.matchings);
            v["chi"] = json!(s.chi());
            out.push(v);
        }
        return to_json(&out);
    }
    let s = genus_spectrum(&words, k, cap)?;
    if ctx.csv {
        let rows: Vec<Vec<String>> = s
            .component_ranks
            .iter()
            .map(|(&(chi, b, rk), n)| vec![chi.to_string(), b.to_string(), rk.to_string(), n.to_string()])
            .collect();
        return to_csv(&["chi", "boundaries", "image_rank", "count"], &rows);
    }
    let mut v = s.to_json();
    v["words"] = json!(words);
    v["max_subdivision"] = json!(k);
    to_json(&v)
}

/// Returns the output bytes and whether every row passed.
fn cmd_verify(
    ctx: &Ctx,
    text: &str,
    ts: &[String],
    caps: &Caps,
    depth: Option<usize>,
    term_cap: Option<u64>,
    timings: bool,
) -> Result<(Vec<u8>, bool), Error> {
    let c = &ctx.config;
    let w = word(ctx, text, caps.rank)?;
    let ts = ts.iter().map(|t| trace(t)).collect::<Result<Vec<_>, _>>()?;
    let opts = options(ctx, caps)?;
    let depth = depth.or(c.get("depth")?);
    let term_cap = c.pick(term_cap, "term_cap", DEFAULT_TERM_CAP)?;
    let inv = report_with(&w, w.rank(), &opts);
    let rows = ts
        .iter()
        .map(|t| verify::verify_row(&w, t, &inv, depth, term_cap, timings))
        .collect::<Result<Vec<_>, _>>()?;
    let ok = rows.iter().all(|r| r.passed());
    let bytes = if ctx.csv {
        let mut header = verify::CSV_HEADER.to_vec();
        if timings {
            header.push("elapsed_ms");
        }
        to_csv(&header, &rows.iter().map(verify::csv_record).collect::<Vec<_>>())?
    } else {
        to_json(&json!({"word": w, "rank": w.rank(), "rows": rows, "all_passed": ok}))?
    };
    Ok((bytes, ok))
}

fn run(cli: Cli) -> Result<(Vec<u8>, u8), Error> {
    let config = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let cache_dir = cli.cache_dir.clone().or_else(|| config.cache_dir());
    let cache = match (&cache_dir, cli.no_cache) {
        (Some(d), false) => Some(Cache::open(d)?),
        _ => None,
    };
    let ctx = Ctx { config, csv: cli.csv, cache };
    match &cli.command {
        Command::Parse { word, rank } => Ok((cmd_parse(&ctx, word, *rank)?, 0)),
        Command::Invariants { word, caps } => {
            let (out, undecided) = cmd_invariants(&ctx, word, caps)?;
            Ok((out, if undecided { 3 } else { 0 }))
        }
        Command::Moment { word, t, rank, symbolic: _, n, mc, samples, seed, depth, term_cap, plain } => {
            let out = cmd_moment(&ctx, word, t, *rank, *n, *mc, *samples, *seed, *depth, *term_cap, *plain)?;
            Ok((out, 0))
        }
        Command::Surfaces { words, rank, k, spec_cap, emit } => {
            Ok((cmd_surfaces(&ctx, words, *rank, *k, *spec_cap, *emit)?, 0))
        }
        Command::Verify { word, t, caps, depth, term_cap, timings } => {
            let (out, _) = cmd_verify(&ctx, word, t, caps, *depth, *term_cap, *timings)?;
            Ok((out, 0))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = std::panic::catch_unwind(|| run(cli));
    match result {
        Ok(Ok((out, code))) => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(&out).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(4);
            }
            ExitCode::from(code)
        }
        Ok(Err(e)) => {
            eprintln!("wml: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(_) => ExitCode::from(4),
    }
}
