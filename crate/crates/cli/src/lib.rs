//! Command-line pipeline: extraction, model building, scoring and evaluation.

pub mod config;

use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use hypernym::corpus::CorpusReader;
use hypernym::dist::{build_window_space, DistributionalSpace, Measure, DEFAULT_MIN_COUNT, DEFAULT_WINDOW};
use hypernym::eval::{
    load_dataset, markdown_table, results_tsv, run_benchmark, skew_histogram, skew_tsv, sweep, validation_metric,
    Benchmark, DatasetRecord, DistScorer, EvalResult, ProtocolOptions, Scorer, DEFAULT_GRID,
};
use hypernym::model_io::{self, Model};
use hypernym::rng::DEFAULT_SEED;
use hypernym::scorer::{build_matrix, PairMatrix};
use hypernym::{extract_corpus, ExtractOptions, PairCounts, PatternSet, Weighting};

use config::{require_file, require_output, with_suffix, FileConfig, Provenance};

#[derive(Debug, Parser)]
#[command(name = "hypernym", version, about = "Hearst-pattern hypernymy pipeline")]
pub struct Cli {
    /// TOML configuration file; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for extraction and the repeated protocols.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extract and postprocess hyponym/hypernym pairs from an annotated corpus.
    Extract(ExtractArgs),
    /// Build a sparse prob/ppmi model (and optionally its SVD) from extracted pairs.
    Build(BuildArgs),
    /// Factorize a sparse model at a given rank.
    Svd(SvdArgs),
    /// Score ad-hoc pairs with a model.
    Score(ScoreArgs),
    /// Run benchmark protocols and write TSV and markdown results.
    Eval(EvalArgs),
    /// Evaluate a hyperparameter grid on one benchmark's validation data.
    Sweep(SweepArgs),
    /// Rank/frequency table of terms in extracted pairs.
    ReportSkew(SkewArgs),
    /// Build a window-based distributional space from an annotated corpus.
    BuildSpace(SpaceArgs),
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Pattern file; the built-in pattern set when omitted.
    #[arg(long)]
    pub patterns: Option<PathBuf>,
    /// Also emit multiword noun-phrase pairs.
    #[arg(long)]
    pub multiword: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[arg(long)]
    pub pairs: Option<PathBuf>,
    /// `ppmi` or `prob`.
    #[arg(long)]
    pub weighting: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// SVD rank, or `full`.
    #[arg(long)]
    pub rank: Option<String>,
    #[arg(long)]
    pub svd_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SvdArgs {
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long)]
    pub rank: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// `hyponym:hypernym`; repeatable.
    #[arg(long = "pair")]
    pub pairs: Vec<String>,
    /// TSV with `x<TAB>y` per line.
    #[arg(long)]
    pub pairs_file: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Model file; repeatable.
    #[arg(long)]
    pub model: Vec<PathBuf>,
    /// Distributional space prefix (`.weights`, `.contexts`, `.counts`).
    #[arg(long)]
    pub space: Option<PathBuf>,
    /// Distributional measure; repeatable. All measures when omitted.
    #[arg(long)]
    pub measure: Vec<String>,
    /// Top-N contexts for SLQS when not sweeping.
    #[arg(long)]
    pub top_n: Option<usize>,
    /// Benchmark name; repeatable, paired in order with `--dataset`.
    #[arg(long)]
    pub benchmark: Vec<String>,
    #[arg(long)]
    pub dataset: Vec<PathBuf>,
    /// Also evaluate SVD smoothings of sparse models at this rank (or `full`).
    #[arg(long)]
    pub rank: Option<String>,
    /// Select the SVD rank and SLQS N per benchmark on validation data.
    #[arg(long)]
    pub sweep: bool,
    /// Comma-separated rank grid.
    #[arg(long, value_delimiter = ',')]
    pub rank_grid: Vec<usize>,
    /// Comma-separated SLQS N grid.
    #[arg(long, value_delimiter = ',')]
    pub n_grid: Vec<usize>,
    /// Output prefix for `.tsv`, `.md` and `.sweep.tsv`; markdown to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Sparse model whose SVD rank is swept.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Distributional space whose SLQS N is swept (with `--measure`).
    #[arg(long)]
    pub space: Option<PathBuf>,
    #[arg(long)]
    pub measure: Option<String>,
    #[arg(long)]
    pub benchmark: Option<String>,
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    pub grid: Vec<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SkewArgs {
    #[arg(long)]
    pub pairs: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpaceArgs {
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    #[arg(long)]
    pub window: Option<usize>,
    #[arg(long)]
    pub min_count: Option<u64>,
    /// Output prefix for `.weights`, `.contexts` and `.counts`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

struct Ctx {
    file: FileConfig,
    seed: u64,
    jobs: usize,
}

fn pick<T: Clone>(flag: &Option<T>, file: &Option<T>, name: &str) -> Result<T> {
    flag.clone().or_else(|| file.clone()).ok_or_else(|| anyhow!("missing --{name} (flag or config entry)"))
}

pub fn run(cli: Cli) -> Result<()> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let seed = cli.seed.or(file.seed).unwrap_or(DEFAULT_SEED);
    let jobs = cli.jobs.or(file.jobs).unwrap_or(1).max(1);
    let ctx = Ctx { file, seed, jobs };
    match &cli.command {
        Command::Extract(a) => run_extract(&ctx, a),
        Command::Build(a) => cmd_build(&ctx, a),
        Command::Svd(a) => cmd_svd(&ctx, a),
        Command::Score(a) => cmd_score(&ctx, a),
        Command::Eval(a) => cmd_eval(&ctx, a),
        Command::Sweep(a) => cmd_sweep(&ctx, a),
        Command::ReportSkew(a) => cmd_report_skew(&ctx, a),
        Command::BuildSpace(a) => cmd_build_space(&ctx, a),
    }
}

fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn read_pairs(path: &Path) -> Result<PairCounts> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(PairCounts::read_tsv(BufReader::new(f), &path.display().to_string())?)
}

fn load_model(path: &Path) -> Result<Model> {
    require_file(path, "model")?;
    Ok(model_io::load(path).with_context(|| format!("loading model {}", path.display()))?.model)
}

fn load_space(prefix: &Path) -> Result<DistributionalSpace> {
    let open = |suffix: &str| -> Result<BufReader<File>> {
        let p = with_suffix(prefix, suffix);
        require_file(&p, "space file")?;
        Ok(BufReader::new(File::open(&p)?))
    };
    DistributionalSpace::load(open(".weights")?, open(".contexts")?, open(".counts")?)
        .with_context(|| format!("loading space {}", prefix.display()))
}

fn parse_rank(text: &str, m: usize) -> Result<usize> {
    let r = if text == "full" {
        m
    } else {
        text.parse::<usize>().map_err(|_| anyhow!("invalid rank {text:?}: expected a positive integer or `full`"))?
    };
    if r == 0 || r > m {
        bail!("invalid rank {r}: must lie in 1..={m}");
    }
    Ok(r)
}

fn space_prefix_inputs(prov: &mut Provenance, prefix: &Path) -> Result<()> {
    for suffix in [".weights", ".contexts", ".counts"] {
        prov.input(&format!("space{suffix}"), &with_suffix(prefix, suffix))?;
    }
    Ok(())
}

/// Extracts, postprocesses and writes the pair TSV; returns the summary line.
pub fn cmd_extract(
    corpus: &Path,
    patterns: Option<&Path>,
    multiword: bool,
    out: &Path,
    seed: u64,
    jobs: usize,
) -> Result<String> {
    require_file(corpus, "corpus")?;
    if let Some(p) = patterns {
        require_file(p, "pattern file")?;
    }
    require_output(out)?;
    let pattern_set = match patterns {
        Some(p) => {
            PatternSet::parse(&std::fs::read_to_string(p)?).with_context(|| format!("pattern file {}", p.display()))?
        }
        None => PatternSet::builtin(),
    };
    let source = corpus.file_name().map_or_else(|| "corpus".into(), |n| n.to_string_lossy().into_owned());
    let reader = CorpusReader::new(BufReader::new(File::open(corpus)?), source);
    let raw = extract_corpus(reader, &pattern_set, &ExtractOptions { multiword }, jobs)?;
    let kept = raw.postprocess();

    let mut prov = Provenance::new("extract", seed);
    prov.setting("multiword", multiword);
    prov.input("corpus", corpus)?;
    match patterns {
        Some(p) => prov.input("patterns", p)?,
        None => prov.setting("patterns", "builtin"),
    };
    let stats = format!(
        "matches={} kept_matches={} unique_pairs={} unique_terms={}",
        raw.total(),
        kept.total(),
        kept.len(),
        kept.terms().len()
    );
    let mut header = prov.header();
    header.push(stats.clone());
    let mut buf = Vec::new();
    kept.write_tsv(&mut buf, &header)?;
    write_file(out, &buf)?;
    Ok(stats)
}

fn run_extract(ctx: &Ctx, a: &ExtractArgs) -> Result<()> {
    let corpus = pick(&a.corpus, &ctx.file.corpus, "corpus")?;
    let out = pick(&a.out, &ctx.file.out, "out")?;
    let patterns = a.patterns.clone().or_else(|| ctx.file.patterns.clone());
    let multiword = a.multiword || ctx.file.multiword.unwrap_or(false);
    let stats = cmd_extract(&corpus, patterns.as_deref(), multiword, &out, ctx.seed, ctx.jobs)?;
    for item in stats.split(' ') {
        println!("{}", item.replacen('=', "\t", 1));
    }
    Ok(())
}

fn cmd_build(ctx: &Ctx, a: &BuildArgs) -> Result<()> {
    let pairs = pick(&a.pairs, &ctx.file.pairs, "pairs")?;
    let out = pick(&a.out, &ctx.file.out, "out")?;
    let weighting: Weighting =
        pick(&a.weighting, &ctx.file.weighting, "weighting").unwrap_or_else(|_| "ppmi".into()).parse()?;
    let rank = a.rank.clone().or_else(|| ctx.file.rank.clone());
    require_file(&pairs, "pairs file")?;
    require_output(&out)?;
    if rank.is_some() && a.svd_out.is_none() {
        bail!("--rank requires --svd-out");
    }
    if let Some(p) = &a.svd_out {
        require_output(p)?;
    }
    let counts = read_pairs(&pairs)?;
    let matrix = build_matrix(&counts, weighting)?;
    let mut prov = Provenance::new("build", ctx.seed);
    prov.setting("weighting", weighting);
    prov.input("pairs", &pairs)?;
    model_io::save(&out, &Model::Sparse(matrix.clone()), &prov.header_text())?;
    println!("terms\t{}", matrix.vocab.len());
    println!("nonzeros\t{}", matrix.matrix.nnz());
    if let (Some(rank), Some(svd_out)) = (rank, &a.svd_out) {
        let r = parse_rank(&rank, matrix.vocab.len())?;
        let smoothed = matrix.factorize(r, ctx.seed)?;
        prov.setting("rank", r);
        model_io::save(svd_out, &Model::Smoothed(smoothed), &prov.header_text())?;
        println!("rank\t{r}");
    }
    Ok(())
}

fn sparse_of(model: Model, path: &Path) -> Result<PairMatrix> {
    match model {
        Model::Sparse(m) => Ok(m),
        Model::Smoothed(_) => bail!("{} is already an SVD model; a sparse model is required", path.display()),
    }
}

fn cmd_svd(ctx: &Ctx, a: &SvdArgs) -> Result<()> {
    let path = a.model.clone().or_else(|| ctx.file.model.first().cloned()).ok_or_else(|| anyhow!("missing --model"))?;
    let out = pick(&a.out, &ctx.file.out, "out")?;
    let rank = pick(&a.rank, &ctx.file.rank, "rank")?;
    require_output(&out)?;
    let matrix = sparse_of(load_model(&path)?, &path)?;
    let r = parse_rank(&rank, matrix.vocab.len())?;
    let mut prov = Provenance::new("svd", ctx.seed);
    prov.setting("weighting", matrix.weighting).setting("rank", r);
    prov.input("model", &path)?;
    model_io::save(&out, &Model::Smoothed(matrix.factorize(r, ctx.seed)?), &prov.header_text())?;
    println!("rank\t{r}");
    Ok(())
}

fn cmd_score(ctx: &Ctx, a: &ScoreArgs) -> Result<()> {
    let path = a.model.clone().or_else(|| ctx.file.model.first().cloned()).ok_or_else(|| anyhow!("missing --model"))?;
    let model = load_model(&path)?;
    let mut queries: Vec<(String, String)> = Vec::new();
    for p in &a.pairs {
        let (x, y) = p.split_once(':').ok_or_else(|| anyhow!("--pair expects hyponym:hypernym, got {p:?}"))?;
        queries.push((x.to_lowercase(), y.to_lowercase()));
    }
    if let Some(file) = &a.pairs_file {
        require_file(file, "pairs file")?;
        for (n, line) in std::fs::read_to_string(file)?.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split('\t');
            match (cols.next(), cols.next()) {
                (Some(x), Some(y)) => queries.push((x.to_lowercase(), y.to_lowercase())),
                _ => bail!("{}:{}: expected x<TAB>y", file.display(), n + 1),
            }
        }
    }
    let mut prov = Provenance::new("score", ctx.seed);
    prov.input("model", &path)?;
    let mut text = prov.header_text();
    text.push_str(&format!("x\ty\t{}\n", model.name()));
    for (x, y) in &queries {
        let s = model.score(x, y).map_or_else(|| "OOV".to_string(), |v| v.to_string());
        text.push_str(&format!("{x}\t{y}\t{s}\n"));
    }
    match &a.out {
        Some(out) => write_file(out, text.as_bytes()),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn benchmarks(names: &[String], paths: &[PathBuf], file: &FileConfig) -> Result<Vec<(Benchmark, PathBuf)>> {
    let pairs: Vec<(String, PathBuf)> = if names.is_empty() && paths.is_empty() {
        file.datasets.iter().map(|(k, v)| (k.clone(), v.clone())).collect()
    } else {
        if names.len() != paths.len() {
            bail!("{} --benchmark flags but {} --dataset flags; they pair up in order", names.len(), paths.len());
        }
        names.iter().cloned().zip(paths.iter().cloned()).collect()
    };
    if pairs.is_empty() {
        bail!("no benchmarks given (use --benchmark NAME --dataset PATH)");
    }
    let mut out = Vec::new();
    for (name, path) in pairs {
        let b: Benchmark = name.parse()?;
        require_file(&path, "dataset")?;
        out.push((b, path));
    }
    Ok(out)
}

fn read_dataset(b: Benchmark, path: &Path) -> Result<Vec<DatasetRecord>> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(load_dataset(BufReader::new(f), &path.display().to_string(), b)?)
}

fn measures(names: &[String]) -> Result<Vec<Measure>> {
    if names.is_empty() {
        return Ok(Measure::ALL.to_vec());
    }
    names.iter().map(|n| n.parse::<Measure>().map_err(Into::into)).collect()
}

fn grid_for(flag: &[usize], file: &Option<Vec<usize>>, limit: usize) -> Vec<usize> {
    let base: Vec<usize> =
        if !flag.is_empty() { flag.to_vec() } else { file.clone().unwrap_or_else(|| DEFAULT_GRID.to_vec()) };
    let kept: Vec<usize> = base.into_iter().filter(|&v| v >= 1 && v <= limit).collect();
    if kept.is_empty() {
        vec![limit]
    } else {
        kept
    }
}

struct SweepRow {
    scorer: String,
    benchmark: String,
    param: &'static str,
    value: usize,
    metric: f64,
    selected: bool,
}

fn cmd_eval(ctx: &Ctx, a: &EvalArgs) -> Result<()> {
    let model_paths: Vec<PathBuf> = if a.model.is_empty() { ctx.file.model.clone() } else { a.model.clone() };
    let space_path = a.space.clone().or_else(|| ctx.file.space.clone());
    if model_paths.is_empty() && space_path.is_none() {
        bail!("nothing to evaluate: give --model and/or --space");
    }
    let benches = benchmarks(&a.benchmark, &a.dataset, &ctx.file)?;
    let out = a.out.clone().or_else(|| ctx.file.out.clone());
    if let Some(o) = &out {
        require_output(o)?;
    }
    let rank = a.rank.clone().or_else(|| ctx.file.rank.clone());
    let measure_names = if a.measure.is_empty() { ctx.file.measure.clone() } else { a.measure.clone() };
    let top_n = a.top_n.or(ctx.file.top_n).unwrap_or(100);
    let opts = ProtocolOptions::with_jobs(ctx.jobs);

    let mut prov = Provenance::new("eval", ctx.seed);
    prov.setting("sweep", a.sweep);
    for (i, p) in model_paths.iter().enumerate() {
        prov.input(&format!("model{i}"), p)?;
    }
    if let Some(sp) = &space_path {
        space_prefix_inputs(&mut prov, sp)?;
    }
    for (b, p) in &benches {
        prov.input(&format!("dataset.{b}"), p)?;
    }
    if let Some(r) = &rank {
        prov.setting("rank", r);
    }

    let datasets: Vec<(Benchmark, Vec<DatasetRecord>)> =
        benches.iter().map(|(b, p)| Ok((*b, read_dataset(*b, p)?))).collect::<Result<_>>()?;
    let mut results: Vec<EvalResult> = Vec::new();
    let mut sweep_rows: Vec<SweepRow> = Vec::new();

    for path in &model_paths {
        let model = load_model(path)?;
        for (b, records) in &datasets {
            results.push(run_benchmark(*b, &model, records, ctx.seed, &opts)?);
        }
        let Model::Sparse(matrix) = model else { continue };
        let m = matrix.vocab.len();
        if let Some(r) = &rank {
            let smoothed = matrix.factorize(parse_rank(r, m)?, ctx.seed)?;
            for (b, records) in &datasets {
                results.push(run_benchmark(*b, &smoothed, records, ctx.seed, &opts)?);
            }
        }
        if a.sweep {
            let grid = grid_for(&a.rank_grid, &ctx.file.rank_grid, m);
            let models: Vec<_> = grid.iter().map(|&r| matrix.factorize(r, ctx.seed)).collect::<Result<_, _>>()?;
            for (b, records) in &datasets {
                let picked = sweep(&grid, |r| {
                    let k = grid.iter().position(|&g| g == r).expect("grid value");
                    validation_metric(*b, &models[k], records, ctx.seed, &opts)
                })?;
                let k = grid.iter().position(|&g| g == picked.best).expect("grid value");
                let scorer_name = models[k].name();
                for (value, metric) in &picked.metrics {
                    sweep_rows.push(SweepRow {
                        scorer: scorer_name.clone(),
                        benchmark: b.name().into(),
                        param: "rank",
                        value: *value,
                        metric: *metric,
                        selected: *value == picked.best,
                    });
                }
                results.push(run_benchmark(*b, &models[k], records, ctx.seed, &opts)?);
            }
        }
    }

    if let Some(sp) = &space_path {
        let space = load_space(sp)?;
        for measure in measures(&measure_names)? {
            for (b, records) in &datasets {
                let mut n = top_n;
                if a.sweep && measure.uses_top_n() {
                    let grid = grid_for(&a.n_grid, &ctx.file.n_grid, usize::MAX);
                    let picked = sweep(&grid, |n| {
                        validation_metric(
                            *b,
                            &DistScorer { space: &space, measure, top_n: n },
                            records,
                            ctx.seed,
                            &opts,
                        )
                    })?;
                    for (value, metric) in &picked.metrics {
                        sweep_rows.push(SweepRow {
                            scorer: measure.name().into(),
                            benchmark: b.name().into(),
                            param: "N",
                            value: *value,
                            metric: *metric,
                            selected: *value == picked.best,
                        });
                    }
                    n = picked.best;
                }
                let scorer = DistScorer { space: &space, measure, top_n: n };
                results.push(run_benchmark(*b, &scorer, records, ctx.seed, &opts)?);
            }
        }
    }

    let header = prov.header();
    let md = markdown_table(&results, &header);
    match &out {
        Some(prefix) => {
            write_file(&with_suffix(prefix, ".tsv"), results_tsv(&results, &header).as_bytes())?;
            write_file(&with_suffix(prefix, ".md"), md.as_bytes())?;
            if a.sweep {
                let mut text = prov.header_text();
                text.push_str("scorer\tbenchmark\tparam\tvalue\tmetric\tselected\n");
                for r in &sweep_rows {
                    text.push_str(&format!(
                        "{}\t{}\t{}\t{}\t{}\t{}\n",
                        r.scorer,
                        r.benchmark,
                        r.param,
                        r.value,
                        r.metric,
                        if r.selected { "yes" } else { "" }
                    ));
                }
                write_file(&with_suffix(prefix, ".sweep.tsv"), text.as_bytes())?;
            }
            print!("{md}");
        }
        None => print!("{md}"),
    }
    Ok(())
}

fn cmd_sweep(ctx: &Ctx, a: &SweepArgs) -> Result<()> {
    let name = a.benchmark.clone().ok_or_else(|| anyhow!("missing --benchmark"))?;
    let path = a
        .dataset
        .clone()
        .or_else(|| ctx.file.datasets.get(&name).cloned())
        .ok_or_else(|| anyhow!("missing --dataset"))?;
    let b: Benchmark = name.parse()?;
    require_file(&path, "dataset")?;
    let out = a.out.clone().or_else(|| ctx.file.out.clone());
    if let Some(o) = &out {
        require_output(o)?;
    }
    let records = read_dataset(b, &path)?;
    let opts = ProtocolOptions::with_jobs(ctx.jobs);
    let mut prov = Provenance::new("sweep", ctx.seed);
    prov.setting("benchmark", b);
    prov.input("dataset", &path)?;

    let model_path = a.model.clone().or_else(|| ctx.file.model.first().cloned());
    let space_path = a.space.clone().or_else(|| ctx.file.space.clone());
    let (param, picked) = match (model_path, space_path) {
        (Some(mp), None) => {
            prov.input("model", &mp)?;
            let matrix = sparse_of(load_model(&mp)?, &mp)?;
            let grid = grid_for(&a.grid, &ctx.file.rank_grid, matrix.vocab.len());
            let picked = sweep(&grid, |r| {
                let smoothed = matrix.factorize(r, ctx.seed)?;
                validation_metric(b, &smoothed, &records, ctx.seed, &opts)
            })?;
            ("rank", picked)
        }
        (None, Some(sp)) => {
            space_prefix_inputs(&mut prov, &sp)?;
            let measure: Measure = a.measure.clone().unwrap_or_else(|| "slqs".into()).parse()?;
            prov.setting("measure", measure.name());
            let space = load_space(&sp)?;
            let grid = grid_for(&a.grid, &ctx.file.n_grid, usize::MAX);
            let picked = sweep(&grid, |n| {
                validation_metric(b, &DistScorer { space: &space, measure, top_n: n }, &records, ctx.seed, &opts)
            })?;
            ("N", picked)
        }
        _ => bail!("give exactly one of --model (rank sweep) or --space (N sweep)"),
    };
    let mut text = prov.header_text();
    text.push_str(&format!("{param}\tmetric\tselected\n"));
    for (v, m) in &picked.metrics {
        text.push_str(&format!("{v}\t{m}\t{}\n", if *v == picked.best { "yes" } else { "" }));
    }
    match out {
        Some(o) => write_file(&o, text.as_bytes())?,
        None => print!("{text}"),
    }
    println!("selected\t{param}={}\t{}", picked.best, picked.best_metric);
    Ok(())
}

fn cmd_report_skew(ctx: &Ctx, a: &SkewArgs) -> Result<()> {
    let pairs = pick(&a.pairs, &ctx.file.pairs, "pairs")?;
    let out = pick(&a.out, &ctx.file.out, "out")?;
    require_file(&pairs, "pairs file")?;
    require_output(&out)?;
    let counts = read_pairs(&pairs)?;
    let mut prov = Provenance::new("report-skew", ctx.seed);
    prov.input("pairs", &pairs)?;
    write_file(&out, skew_tsv(&skew_histogram(&counts), &prov.header()).as_bytes())
}

fn cmd_build_space(ctx: &Ctx, a: &SpaceArgs) -> Result<()> {
    let corpus = pick(&a.corpus, &ctx.file.corpus, "corpus")?;
    let out = pick(&a.out, &ctx.file.out, "out")?;
    let window = a.window.or(ctx.file.window).unwrap_or(DEFAULT_WINDOW);
    let min_count = a.min_count.or(ctx.file.min_count).unwrap_or(DEFAULT_MIN_COUNT);
    require_file(&corpus, "corpus")?;
    require_output(&out)?;
    let reader = CorpusReader::new(BufReader::new(File::open(&corpus)?), corpus.display().to_string());
    let sentences = reader.collect::<hypernym::Result<Vec<_>>>()?;
    let space = build_window_space(&sentences, window, min_count)?;
    let mut prov = Provenance::new("build-space", ctx.seed);
    prov.setting("window", window).setting("min_count", min_count);
    prov.input("corpus", &corpus)?;
    let create = |suffix: &str| -> Result<std::io::BufWriter<File>> {
        let p = with_suffix(&out, suffix);
        Ok(std::io::BufWriter::new(File::create(&p).with_context(|| format!("creating {}", p.display()))?))
    };
    space.save(create(".weights")?, create(".contexts")?, create(".counts")?, &prov.header())?;
    println!("terms\t{}", space.terms().len());
    println!("contexts\t{}", space.contexts().len());
    Ok(())
}
