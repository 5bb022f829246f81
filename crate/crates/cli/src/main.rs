mod config;
mod run;

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, Write};
use std::process::ExitCode;

use anyhow::Context as _;
use clap::Parser;
use rayon::prelude::*;
use serde::Serialize;

use config::{Cli, Command, ConfigEcho, Format, Mode, RunArgs, Suite, VerifyArgs};
use run::{compute_record, rank_is_one, run_suite, CheckRow, Context, ReportRecord};

#[derive(Serialize)]
struct Meta {
    version: &'static str,
    config: ConfigEcho,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    checks: Vec<CheckRow>,
}

#[derive(Serialize)]
struct Report<'a, T: Serialize> {
    meta: Meta,
    records: &'a [T],
}

#[derive(Serialize, Clone)]
struct TableRow {
    family: hopf_chern::connection::Family,
    mu: i64,
    rank: i64,
    chern: i64,
}

fn open_out(path: &Option<std::path::PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    })
}

fn pool(jobs: usize) -> anyhow::Result<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()?)
}

fn compute_records(args: &RunArgs) -> anyhow::Result<Vec<ReportRecord>> {
    let ctx = Context::new(args).map_err(anyhow::Error::msg)?;
    let mus = args.common.mu.values();
    Ok(pool(args.common.jobs)?.install(|| {
        mus.par_iter()
            .map(|&mu| compute_record(args, &ctx, mu))
            .collect()
    }))
}

/// Suites that are not per-record run once for the whole report.
fn global_checks(args: &RunArgs) -> Vec<CheckRow> {
    let suites = args.verify.clone().unwrap_or_default();
    suites
        .into_iter()
        .filter(|s| {
            matches!(
                s,
                Suite::Confluence | Suite::Representations | Suite::Quotient
            )
        })
        .flat_map(|s| {
            let d = args.common.mu.max_abs() as usize;
            run_suite(s, args.common.family, &[], &args.common.s, d)
        })
        .collect()
}

fn write_records(
    out: &mut dyn Write,
    fmt: Format,
    timings: bool,
    meta: Meta,
    recs: &[ReportRecord],
) -> anyhow::Result<()> {
    match fmt {
        Format::Json => {
            serde_json::to_writer_pretty(
                &mut *out,
                &Report {
                    meta,
                    records: recs,
                },
            )?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record([
                "family",
                "mu",
                "s",
                "rank",
                "chern",
                "exact_expr",
                "verified",
                "elapsed_ms",
            ])?;
            for r in recs {
                w.write_record([
                    r.family.to_string(),
                    r.mu.to_string(),
                    r.s.clone(),
                    r.rank.clone().unwrap_or_default(),
                    r.chern.map(|c| c.to_string()).unwrap_or_default(),
                    r.exact_expr.clone().unwrap_or_default(),
                    r.verified().to_string(),
                    if timings {
                        r.elapsed_ms.to_string()
                    } else {
                        String::new()
                    },
                ])?;
            }
            w.flush()?;
        }
        Format::Text => {
            for c in &meta.checks {
                writeln!(
                    out,
                    "{:<16} {:<24} {:<4} {}",
                    format!("{:?}", c.suite).to_lowercase(),
                    c.item,
                    if c.passed { "ok" } else { "FAIL" },
                    c.detail
                )?;
            }
            for r in recs {
                let mut line = format!("{} mu={:>3} s={}", r.family, r.mu, r.s);
                if let Some(rank) = &r.rank {
                    line += &format!(" rank={rank}");
                }
                match r.chern {
                    Some(c) => line += &format!(" chern={c}"),
                    None if r.exact_expr.is_some() => line += " chern=?",
                    None => {}
                }
                if let Some(e) = &r.exact_expr {
                    line += &format!(" pairing={e}");
                }
                if let Some(n) = &r.numeric {
                    line += &format!(" numeric={:.12} tail<={:.3e}", n.estimate, n.tail_bound);
                }
                for (s, ok) in &r.verification {
                    line += &format!(
                        " {}={}",
                        format!("{s:?}").to_lowercase(),
                        if *ok { "ok" } else { "FAIL" }
                    );
                }
                if let Some(e) = &r.error {
                    line += &format!(" error={e}");
                }
                writeln!(out, "{line}")?;
            }
        }
    }
    Ok(())
}

fn cmd_chern(args: &RunArgs) -> anyhow::Result<bool> {
    let recs = compute_records(args)?;
    let checks = global_checks(args);
    let ok = recs.iter().all(|r| r.passed(args.mode)) && checks.iter().all(|c| c.passed);
    for r in &recs {
        log::debug!("mu={} elapsed {} ms", r.mu, r.elapsed_ms);
    }
    let meta = Meta {
        version: env!("CARGO_PKG_VERSION"),
        config: args.echo("chern"),
        checks,
    };
    let mut out = open_out(&args.common.out)?;
    write_records(&mut *out, args.common.format, args.timings, meta, &recs)?;
    Ok(ok)
}

fn cmd_table(args: &RunArgs) -> anyhow::Result<bool> {
    let recs = compute_records(args)?;
    let mut ok = true;
    let mut rows = Vec::new();
    for r in &recs {
        match (r.chern, rank_is_one(&r.rank)) {
            (Some(c), true) if r.error.is_none() => rows.push(TableRow {
                family: r.family,
                mu: r.mu,
                rank: 1,
                chern: c,
            }),
            _ => {
                log::error!(
                    "mu={}: no (rank, chern) row: rank {:?} chern {:?}",
                    r.mu,
                    r.rank,
                    r.chern
                );
                ok = false;
            }
        }
        ok &= r.passed(Mode::Exact);
    }
    let meta = Meta {
        version: env!("CARGO_PKG_VERSION"),
        config: args.echo("table"),
        checks: Vec::new(),
    };
    let mut out = open_out(&args.common.out)?;
    match args.common.format {
        Format::Json => {
            serde_json::to_writer_pretty(
                &mut *out,
                &Report {
                    meta,
                    records: &rows,
                },
            )?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            for r in &rows {
                w.serialize(r)?;
            }
            if rows.is_empty() {
                w.write_record(["family", "mu", "rank", "chern"])?;
            }
            w.flush()?;
        }
        Format::Text => {
            for r in &rows {
                writeln!(out, "({}, {})", r.rank, r.chern)?;
            }
        }
    }
    Ok(ok)
}

fn cmd_verify(args: &VerifyArgs) -> anyhow::Result<bool> {
    let c = &args.common;
    let mus = c.mu.values();
    let suites = args.suites();
    let rows: Vec<CheckRow> = pool(c.jobs)?.install(|| {
        suites
            .par_iter()
            .flat_map(|&s| run_suite(s, c.family, &mus, &c.s, args.degree))
            .collect()
    });
    let ok = rows.iter().all(|r| r.passed);
    let mut out = open_out(&c.out)?;
    match c.format {
        Format::Json => {
            let mut by_suite: BTreeMap<Suite, bool> = BTreeMap::new();
            for r in &rows {
                *by_suite.entry(r.suite).or_insert(true) &= r.passed;
            }
            #[derive(Serialize)]
            struct V<'a> {
                version: &'static str,
                passed: bool,
                suites: BTreeMap<Suite, bool>,
                checks: &'a [CheckRow],
            }
            serde_json::to_writer_pretty(
                &mut *out,
                &V {
                    version: env!("CARGO_PKG_VERSION"),
                    passed: ok,
                    suites: by_suite,
                    checks: &rows,
                },
            )?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            for r in &rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        Format::Text => {
            for r in &rows {
                let suite = format!("{:?}", r.suite).to_lowercase();
                let mark = if r.passed { "pass" } else { "FAIL" };
                writeln!(out, "{suite:<16} {:<28} {mark:<4} {}", r.item, r.detail)?;
            }
        }
    }
    Ok(ok)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("LOG_LEVEL", "warn")).init();
    let cli = Cli::parse();
    if let Command::Chern(a) | Command::Table(a) = &cli.command {
        if let Err(e) = a.validate() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
        if matches!(cli.command, Command::Table(_)) && a.mode != Mode::Exact {
            eprintln!("error: table requires --mode exact");
            return ExitCode::from(2);
        }
    }
    let result = match &cli.command {
        Command::Chern(a) => cmd_chern(a),
        Command::Table(a) => cmd_table(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
