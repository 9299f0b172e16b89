//! The `ccnet` command-line tool.
//!
//! [`run`] parses arguments, executes a subcommand and returns the process
//! exit code; failures are reported on stderr as a JSON document.

pub mod args;
pub mod error;
pub mod output;

use std::ffi::OsString;
use std::path::Path;

use ccnet::bowtie::filter_provider_flows;
use ccnet::ledger::{
    read_ledger_files, slice_by_period, write_transactions, write_users, ParseReport,
};
use ccnet::multilayer::{layer_report, partition_layers};
use ccnet::nullmodel::RewireConfig;
use ccnet::report::{
    bowtie_section, build_report, geo_section, ledger_section, metrics_section, null_section,
    overview, LedgerSection, Overview, ReportConfig, DEFAULT_BALANCE_EDGES,
};
use ccnet::synthgen::{generate_ledger, SellerChoice, SynthConfig, RNG_ALGORITHM};
use ccnet::{build_graph, BuildOptions, TransactionSet};
use clap::Parser;
use serde::Serialize;

use args::{Cli, Command, Input};
use error::CliError;
use output::*;

/// Runs the tool and returns its exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let err = CliError::Usage(e.to_string().trim_end().to_string());
            eprintln!("{}", err.to_json());
            return err.exit_code();
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    }
}

/// Executes a parsed subcommand on a thread pool of the requested size.
pub fn execute(cmd: Command) -> Result<(), CliError> {
    let threads = match &cmd {
        Command::Ingest(c) => c.common.threads,
        Command::Metrics(c) => c.common.threads,
        Command::Bowtie(c) => c.common.threads,
        Command::Nullmodel(c) => c.common.threads,
        Command::Multilayer(c) => c.common.threads,
        Command::Geo(c) => c.common.threads,
        Command::Synth(c) => c.common.threads,
        Command::Report(c) => c.common.threads,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Internal(e.to_string()))?;
    pool.install(|| dispatch(cmd))
}

fn dispatch(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Ingest(c) => ingest(&c.input, &c.common.out),
        Command::Metrics(c) => {
            let (_, slices) = load(&c.input)?;
            for set in &slices {
                let g = build_graph(set, opts(&c.input));
                let m = metrics_section(
                    &g,
                    set,
                    c.cycles.cycles_max_len as usize,
                    c.cycles.cycle_cap,
                )?;
                write_metrics(&period_dir(&c.common.out, &set.period), &g, &m)?;
            }
            Ok(())
        }
        Command::Bowtie(c) => {
            let (_, slices) = load(&c.input)?;
            for set in &slices {
                let dir = period_dir(&c.common.out, &set.period);
                let set = if c.filter_providers {
                    filter_provider_flows(set)
                } else {
                    set.clone()
                };
                let g = build_graph(&set, opts(&c.input));
                let b = bowtie_section(&g, &set);
                write_bowtie(&dir, &g, &b, c.top_k)?;
            }
            Ok(())
        }
        Command::Nullmodel(c) => {
            let cfg = rewire(&c.null)?;
            let (_, slices) = load(&c.input)?;
            for set in &slices {
                let dir = period_dir(&c.common.out, &set.period);
                let set = if c.filter_providers {
                    filter_provider_flows(set)
                } else {
                    set.clone()
                };
                let g = build_graph(&set, opts(&c.input));
                let n = null_section(&g.binary(), None, &cfg)?;
                write_null(&dir, &n)?;
            }
            Ok(())
        }
        Command::Multilayer(c) => {
            let (_, slices) = load(&c.input)?;
            for set in &slices {
                let g = build_graph(set, opts(&c.input));
                let p = partition_layers(set.users.values());
                let r = layer_report(&g, &p);
                write_multilayer(&period_dir(&c.common.out, &set.period), &g, &p, &r)?;
            }
            Ok(())
        }
        Command::Geo(c) => {
            let (_, slices) = load(&c.input)?;
            for set in &slices {
                write_geo(&period_dir(&c.common.out, &set.period), &geo_section(set))?;
            }
            Ok(())
        }
        Command::Synth(c) => synth(&c),
        Command::Report(c) => report(&c),
    }
}

fn opts(input: &Input) -> BuildOptions {
    BuildOptions {
        include_isolated: input.include_isolated,
    }
}

fn rewire(n: &args::NullFlags) -> Result<RewireConfig, CliError> {
    let cfg = RewireConfig {
        swap_multiplier: n.swap_mult,
        seed: n.seed,
        runs: n.runs,
    };
    cfg.validate()?;
    Ok(cfg)
}

/// Reads the ledger and slices it into the selected years.
fn load(input: &Input) -> Result<((TransactionSet, ParseReport), Vec<TransactionSet>), CliError> {
    let (set, parse) = read_ledger_files(&input.tx, input.users.as_deref())?;
    let years = if input.year.is_empty() {
        set.years()
    } else {
        input.year.clone()
    };
    let slices = years.iter().map(|&y| slice_by_period(&set, y)).collect();
    Ok(((set, parse), slices))
}

#[derive(Serialize)]
struct IngestPeriod {
    overview: Overview,
    ledger: LedgerSection,
}

#[derive(Serialize)]
struct IngestSummary<'a> {
    transactions: usize,
    users: usize,
    years: Vec<i32>,
    parse: &'a ParseReport,
    periods: Vec<IngestPeriod>,
}

fn write_ingest(
    out: &Path,
    input: &Input,
    full: &TransactionSet,
    parse: &ParseReport,
    slices: &[TransactionSet],
) -> Result<(), CliError> {
    let mut periods = Vec::new();
    for set in slices {
        let g = build_graph(set, opts(input));
        write_flows(&period_dir(out, &set.period), &g, set)?;
        periods.push(IngestPeriod {
            overview: overview(&g, set),
            ledger: ledger_section(&g, set, &DEFAULT_BALANCE_EDGES)?,
        });
    }
    write_json(
        &out.join("ingest.json"),
        &IngestSummary {
            transactions: full.transactions.len(),
            users: full.users.len(),
            years: full.years(),
            parse,
            periods,
        },
    )
}

fn ingest(input: &Input, out: &Path) -> Result<(), CliError> {
    let ((full, parse), slices) = load(input)?;
    write_ingest(out, input, &full, &parse, &slices)
}

fn synth(c: &args::Synth) -> Result<(), CliError> {
    let mut cfg = match &c.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Input {
                path: path.clone(),
                message: e.to_string(),
            })?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
        }
        None => SynthConfig {
            seed: args::DEFAULT_SEED,
            ..Default::default()
        },
    };
    if let Some(x) = c.seed {
        cfg.seed = x;
    }
    if let Some(x) = c.n_users {
        cfg.n_users = x;
    }
    if let Some(x) = c.n_tx {
        cfg.n_transactions = x;
    }
    if let Some(x) = c.beta {
        cfg.imitation_beta = x;
    }
    if let Some(x) = c.alpha {
        cfg.activity_tail = x;
    }
    if !c.years.is_empty() {
        cfg.years = c.years.clone();
    }
    if let Some(x) = c.seller_choice {
        cfg.seller_choice = match x {
            args::SellerChoiceArg::Capped => SellerChoice::Capped,
            args::SellerChoiceArg::Global => SellerChoice::Global,
        };
    }
    let set = generate_ledger(&cfg)?;
    let out = &c.common.out;
    let csv_err = |p: &str| {
        let path = out.join(p);
        move |e: csv::Error| CliError::Output {
            path: path.clone(),
            message: e.to_string(),
        }
    };
    let mut tx = Vec::new();
    write_transactions(&mut tx, &set.transactions).map_err(csv_err("transactions.csv"))?;
    write_atomic(&out.join("transactions.csv"), &tx)?;
    let mut users = Vec::new();
    write_users(&mut users, set.users.values()).map_err(csv_err("users.csv"))?;
    write_atomic(&out.join("users.csv"), &users)?;
    #[derive(Serialize)]
    struct Echo<'a> {
        rng: &'static str,
        config: &'a SynthConfig,
    }
    write_json(
        &out.join("config.json"),
        &Echo {
            rng: RNG_ALGORITHM,
            config: &cfg,
        },
    )
}

fn report(c: &args::Report) -> Result<(), CliError> {
    let cfg = ReportConfig {
        cycles_max_len: c.cycles.cycles_max_len as usize,
        cycle_cap: c.cycles.cycle_cap,
        rewire: rewire(&c.null)?,
        include_isolated: c.input.include_isolated,
        ..Default::default()
    };
    let ((full, parse), slices) = load(&c.input)?;
    let years: Vec<i32> = if c.input.year.is_empty() {
        full.years()
    } else {
        c.input.year.clone()
    };
    let doc = build_report(&full, &years, &cfg)?;
    let out = &c.common.out;
    write_ingest(out, &c.input, &full, &parse, &slices)?;
    for (set, period) in slices.iter().zip(&doc.periods) {
        let dir = period_dir(out, &set.period);
        let g = build_graph(set, cfg.build_options());
        write_metrics(&dir.join("metrics"), &g, &period.metrics)?;
        write_bowtie(&dir.join("bowtie"), &g, &period.bowtie, 5)?;
        let filtered = filter_provider_flows(set);
        let fg = build_graph(&filtered, cfg.build_options());
        write_bowtie(
            &dir.join("bowtie_without_providers"),
            &fg,
            &period.bowtie_without_providers,
            5,
        )?;
        write_null(&dir.join("nullmodel"), &period.null_model)?;
        let p = partition_layers(set.users.values());
        write_multilayer(&dir.join("multilayer"), &g, &p, &period.multilayer)?;
        write_geo(&dir.join("geo"), &period.geo)?;
    }
    write_document(&out.join("report.json"), &doc)
}
