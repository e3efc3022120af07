use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use sgrid_core::{
    bench_estimators, generate, score_matches, spread_queries, BenchRow, Dataset, GroundTruth, Miner,
    MinerConfig, QueryResult, SyntheticSpec,
};

use crate::args::{BenchArgs, DataArgs, EvalArgs, Format, MineArgs, OutputArgs, SynthArgs};
use crate::error::{CliError, Result};
use crate::report::{CacheSummary, DataSummary, EvalReport, MineReport, Report, SynthReport, Timing};

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn load(args: &DataArgs) -> Result<(Dataset, f64)> {
    let start = Instant::now();
    let ds = Dataset::load_csv(&args.data, args.header)?;
    Ok((ds, ms(start)))
}

fn summary(args: &DataArgs, ds: &Dataset) -> DataSummary {
    DataSummary {
        path: args.data.display().to_string(),
        n: ds.n(),
        d: ds.d(),
    }
}

struct Mined {
    results: Vec<QueryResult>,
    cache: CacheSummary,
    build_ms: f64,
    search_ms: f64,
}

fn run_miner(ds: &Dataset, cfg: &MinerConfig, queries: &[usize], jobs: usize) -> Result<Mined> {
    let miner = Miner::new(ds, cfg.clone())?;
    let start = Instant::now();
    let results = miner.mine(queries, jobs)?;
    let search_ms = ms(start);
    let cache = CacheSummary {
        enabled: miner.cache().is_some(),
        hits: miner.cache().map_or(0, |c| c.hits()),
        misses: miner.cache().map_or(0, |c| c.misses()),
        stats_computed: miner.stats_computed(),
    };
    Ok(Mined {
        results,
        cache,
        build_ms: miner.build_time().as_secs_f64() * 1e3,
        search_ms,
    })
}

fn emit(report: &Report, format: Format, out: Option<&Path>) -> Result<()> {
    let json = report.to_json()?;
    let body = match format {
        Format::Json => json,
        // text is rendered from the serialized report, never from live state
        Format::Text => serde_json::from_str::<Report>(&json)?.to_text(),
    };
    write_out(&body, out)
}

fn write_out(body: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, body).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

fn timing(output: &OutputArgs, ingest_ms: f64, mined: &Mined) -> Option<Timing> {
    (!output.no_timing).then_some(Timing {
        ingest_ms,
        build_ms: mined.build_ms,
        search_ms: mined.search_ms,
    })
}

pub fn mine(args: MineArgs) -> Result<()> {
    let (ds, ingest_ms) = load(&args.data)?;
    let cfg = args.search.config();
    let mined = run_miner(&ds, &cfg, &args.query, args.search.jobs)?;
    let report = Report::Mine(MineReport {
        data: summary(&args.data, &ds),
        config: cfg,
        jobs: args.search.jobs,
        timing: timing(&args.output, ingest_ms, &mined),
        cache: mined.cache,
        results: mined.results,
    });
    emit(&report, args.output.format, args.output.out.as_deref())
}

pub fn eval(args: EvalArgs) -> Result<()> {
    let (ds, ingest_ms) = load(&args.data)?;
    let truth = GroundTruth::load(&args.truth)?;
    truth.check_against(&ds)?;
    let cfg = args.search.config();
    let mined = run_miner(&ds, &cfg, &truth.records(), args.search.jobs)?;
    let matches = score_matches(&mined.results, &truth)?;
    let report = Report::Eval(EvalReport {
        data: summary(&args.data, &ds),
        truth: args.truth.display().to_string(),
        config: cfg,
        jobs: args.search.jobs,
        exact_rate: matches.exact_rate(),
        match_rate: matches.match_rate(),
        matches,
        timing: timing(&args.output, ingest_ms, &mined),
        cache: mined.cache,
    });
    emit(&report, args.output.format, args.output.out.as_deref())
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

pub fn synth(args: SynthArgs) -> Result<()> {
    let spec = SyntheticSpec {
        n: args.size,
        d: args.dims,
        group_sizes: args.groups.clone(),
        outlier_count: args.outliers,
        seed: args.seed,
    };
    let data = generate(&spec)?;
    let csv = with_suffix(&args.out, ".csv");
    let truth = with_suffix(&args.out, ".truth");
    data.dataset.save_csv(&csv)?;
    data.truth.save(&truth)?;
    let report = Report::Synth(SynthReport {
        csv: csv.display().to_string(),
        truth: truth.display().to_string(),
        n: spec.n,
        d: spec.d,
        group_sizes: spec.group_sizes,
        outliers: data.truth.records(),
        seed: spec.seed,
    });
    emit(&report, args.format, None)
}

fn mean_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

pub fn bench(args: BenchArgs) -> Result<()> {
    if args.repeat == 0 {
        return Err(CliError::Usage("--repeat must be at least 1".into()));
    }
    if args.queries == 0 {
        return Err(CliError::Usage("--queries must be at least 1".into()));
    }
    let (ds, _) = load(&args.data)?;
    let queries = spread_queries(ds.n(), args.queries);
    let configs: Vec<MinerConfig> = args
        .estimators
        .iter()
        .map(|&e| MinerConfig {
            max_depth: args.depth,
            beam_width: args.beam_width,
            top_k: args.top_k,
            estimator: e.into(),
            block_size: args.block_size,
            ..MinerConfig::default()
        })
        .collect();
    let rows = bench_estimators(&ds, &queries, &configs, args.repeat)?;

    let mut body = String::from(BenchRow::CSV_HEADER);
    body.push('\n');
    for row in &rows {
        body.push_str(&row.to_csv());
        body.push('\n');
    }
    write_out(&body, args.out.as_deref())?;

    for chunk in rows.chunks(args.repeat) {
        let search: Vec<f64> = chunk.iter().map(|r| r.search_ms).collect();
        let (mean, sd) = mean_sd(&search);
        eprintln!(
            "{}: search_ms mean {mean:.3} sd {sd:.3} over {} runs",
            chunk[0].estimator,
            chunk.len()
        );
    }
    Ok(())
}
