//! Acceptance suite: one pass/fail line per criterion. Criterion 9 runs only
//! when `HYPERNYM_FULL_PAIRS` and `HYPERNYM_BENCH_DIR` are set.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use anyhow::{bail, ensure, Context, Result};
use hypernym::dist::{cl, cosine, inv_cl, weeds_prec, DistributionalSpace, SparseVec};
use hypernym::eval::{
    average_precision, detection_eval, direction_bibless, direction_bless, direction_wbless, graded_eval, load_dataset,
    run_benchmark, spearman, sweep, validation_metric, Benchmark, DatasetRecord, FnScorer, ProtocolOptions, Scorer,
    DEFAULT_GRID,
};
use hypernym::model_io::Model;
use hypernym::rng::{below, rng_from_seed, symmetric_unit, PortableRng};
use hypernym::scorer::{build_matrix, prob, spmi, Vocabulary, Weighting};
use hypernym::{truncated_svd, CsrMatrix, PairCounts};
use hypernym_oracles as oracle;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn timed(limit: Duration, f: impl FnOnce() -> Result<String>) -> Result<String> {
    let start = Instant::now();
    let detail = f()?;
    let elapsed = start.elapsed();
    ensure!(elapsed < limit, "took {elapsed:?}, limit {limit:?}");
    Ok(format!("{detail}; {:.2}s", elapsed.as_secs_f64()))
}

fn criterion_1() -> Result<String> {
    timed(Duration::from_secs(1), || {
        let dir = tempfile::tempdir()?;
        let out = dir.path().join("pairs.tsv");
        hypernym_cli::cmd_extract(&fixtures().join("corpus.conll"), None, false, &out, 42, 1)?;
        let got = std::fs::read_to_string(&out)?;
        let golden = std::fs::read_to_string(fixtures().join("extract.golden.tsv"))?;
        ensure!(got == golden, "output differs from golden TSV");
        let hand = std::fs::read_to_string(
            Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/extract.body.tsv"),
        )?;
        let body: String = got.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
        ensure!(body == hand, "pair rows differ from the hand-matched table");
        Ok(format!("{} pairs byte-identical", hand.lines().count()))
    })
}

fn random_rows(rng: &mut PortableRng, max_pairs: usize, vocab: usize) -> Vec<(String, String, u64)> {
    let mut seen = HashMap::new();
    let n = 1 + below(rng, max_pairs);
    for _ in 0..n {
        let key = (format!("t{:02}", below(rng, vocab)), format!("t{:02}", below(rng, vocab)));
        seen.insert(key, 1 + below(rng, 19) as u64);
    }
    let mut rows: Vec<_> = seen.into_iter().map(|((x, y), c)| (x, y, c)).collect();
    rows.sort();
    rows
}

fn to_counts(rows: &[(String, String, u64)]) -> PairCounts {
    let mut c = PairCounts::new();
    for (x, y, n) in rows {
        c.insert(x, y, *n, ["p".to_string()]);
    }
    c
}

fn criterion_2() -> Result<String> {
    let mut rng = rng_from_seed(2);
    let mut checked = 0;
    for case in 0..300 {
        let rows = random_rows(&mut rng, 50, 12);
        let counts = to_counts(&rows);
        let m = build_matrix(&counts, Weighting::Ppmi)?;
        for x in m.vocab.terms() {
            for y in m.vocab.terms() {
                let (got, want) = (m.score(x, y).unwrap(), oracle::ppmi(&rows, x, y));
                ensure!((got - want).abs() <= 1e-12, "case {case} ({x},{y}): {got} vs {want}");
                checked += 1;
            }
        }
        let total: f64 = rows.iter().map(|(x, y, _)| prob(&counts, x, y).unwrap()).sum();
        ensure!((total - 1.0).abs() <= 1e-12, "case {case}: sum of probabilities {total}");
    }
    Ok(format!("{checked} entries within 1e-12 over 300 random count tables"))
}

fn criterion_3() -> Result<String> {
    let mut rng = rng_from_seed(3);
    let mut checked = 0;
    for case in 0..40 {
        let rows = random_rows(&mut rng, 40, 20);
        let pm = build_matrix(&to_counts(&rows), Weighting::Ppmi)?;
        let m = pm.vocab.len();
        ensure!(m <= 20);
        let model = pm.factorize(m, 42)?;
        let dense = pm.matrix.to_dense();
        for (i, x) in pm.vocab.terms().iter().enumerate() {
            for (j, y) in pm.vocab.terms().iter().enumerate() {
                let got = spmi(&model, x, y)?;
                let observed = rows.iter().any(|(a, b, _)| a == x && b == y);
                let want = if observed { pm.score(x, y).unwrap() } else { oracle::truncated_entry(&dense, m, i, j) };
                ensure!((got - want).abs() <= 1e-8, "case {case} ({x},{y}): {got} vs {want}");
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} entries within 1e-8 at full rank"))
}

fn random_matrix(n: usize, seed: u64) -> Result<CsrMatrix> {
    let mut rng = rng_from_seed(seed);
    let mut t = Vec::new();
    for i in 0..n {
        for j in 0..n {
            t.push((i, j, symmetric_unit(&mut rng)));
        }
    }
    Ok(CsrMatrix::from_triplets(n, n, t)?)
}

fn orthonormality_residual(factor: &[f64], n: usize, r: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for a in 0..r {
        for b in 0..r {
            let dot: f64 = (0..n).map(|i| factor[i * r + a] * factor[i * r + b]).sum();
            worst = worst.max((dot - if a == b { 1.0 } else { 0.0 }).abs());
        }
    }
    worst
}

fn criterion_4() -> Result<String> {
    timed(Duration::from_secs(5), || {
        let mut worst_sigma: f64 = 0.0;
        let mut worst_orth: f64 = 0.0;
        for seed in [1, 2, 3] {
            let a = random_matrix(50, seed)?;
            let want = oracle::singular_values(&a.to_dense());
            for rank in [5, 20, 50] {
                let model = truncated_svd(&a, rank, 42)?;
                for (k, w) in want.iter().take(rank).enumerate() {
                    worst_sigma = worst_sigma.max((model.singular_values()[k] - w).abs());
                }
                worst_orth = worst_orth
                    .max(orthonormality_residual(model.u_factor(), 50, rank))
                    .max(orthonormality_residual(model.v_factor(), 50, rank));
                let again = truncated_svd(&a, rank, 42)?;
                ensure!(
                    model.singular_values() == again.singular_values()
                        && model.u_factor() == again.u_factor()
                        && model.v_factor() == again.v_factor(),
                    "seed {seed} rank {rank}: factors differ between runs"
                );
            }
        }
        ensure!(worst_sigma <= 1e-6, "singular value error {worst_sigma:e}");
        ensure!(worst_orth <= 1e-8, "orthonormality residual {worst_orth:e}");
        Ok(format!("max sigma error {worst_sigma:.1e}, max residual {worst_orth:.1e}, bit-identical reruns"))
    })
}

fn random_row(rng: &mut PortableRng, k: usize) -> Vec<f64> {
    loop {
        let row: Vec<f64> =
            (0..k).map(|_| if below(rng, 3) == 0 { (symmetric_unit(rng) + 1.0) * 2.0 } else { 0.0 }).collect();
        if row.iter().any(|v| *v > 0.0) {
            return row;
        }
    }
}

fn triplets(d: &[Vec<f64>]) -> Vec<(usize, usize, f64)> {
    d.iter().enumerate().flat_map(|(i, r)| r.iter().enumerate().map(move |(j, v)| (i, j, *v))).collect()
}

fn to_sparse(dense: &[f64]) -> (Vec<usize>, Vec<f64>) {
    dense.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(i, v)| (i, *v)).unzip()
}

fn criterion_5() -> Result<String> {
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-12;
    let (m, k) = (10, 14);
    for seed in 0..10 {
        let mut rng = rng_from_seed(500 + seed);
        let w: Vec<Vec<f64>> = (0..m).map(|_| random_row(&mut rng, k)).collect();
        let n: Vec<Vec<f64>> = w
            .iter()
            .map(|row| row.iter().map(|&v| if v > 0.0 { 1.0 + below(&mut rng, 9) as f64 } else { 0.0 }).collect())
            .collect();
        let space = DistributionalSpace::new(
            Vocabulary::from_terms((0..m).map(|i| format!("w{i}")).collect())?,
            (0..k).map(|c| format!("c{c}")).collect(),
            (0..k).map(|c| n.iter().map(|r| r[c]).sum()).collect(),
            CsrMatrix::from_triplets(m, k, triplets(&w))?,
            CsrMatrix::from_triplets(m, k, triplets(&n))?,
        )?;
        for x in 0..m {
            for y in 0..m {
                let (tx, ty) = (format!("w{x}"), format!("w{y}"));
                ensure!(close(space.cosine(&tx, &ty)?, oracle::cosine(&w[x], &w[y])), "cosine {x} {y}");
                ensure!(close(space.weeds_prec(&tx, &ty)?, oracle::weeds_prec(&w[x], &w[y])), "weeds_prec {x} {y}");
                ensure!(close(space.cl(&tx, &ty)?, oracle::cl(&w[x], &w[y])), "cl {x} {y}");
                ensure!(close(space.inv_cl(&tx, &ty)?, oracle::inv_cl(&w[x], &w[y])), "inv_cl {x} {y}");
                for top in [1, 3, 20] {
                    ensure!(close(space.slqs_entropy(&tx, top)?, oracle::slqs_entropy(&w, &n, x, top)), "entropy {x}");
                    if oracle::slqs_entropy(&w, &n, y, top) > 0.0 {
                        ensure!(close(space.slqs(&tx, &ty, top)?, oracle::slqs(&w, &n, x, y, top)), "slqs {x} {y}");
                        ensure!(
                            close(space.slqs_cos(&tx, &ty, top)?, oracle::slqs_cos(&w, &n, x, y, top)),
                            "slqs_cos {x} {y}"
                        );
                    }
                }
            }
        }
    }
    let mut rng = rng_from_seed(55);
    let unit = |v: f64| (0.0..=1.0 + 1e-12).contains(&v);
    for case in 0..10_000 {
        let x = random_row(&mut rng, 8);
        let y = random_row(&mut rng, 8);
        let ((xi, xv), (yi, yv)) = (to_sparse(&x), to_sparse(&y));
        let (sx, sy) = (SparseVec::new(&xi, &xv), SparseVec::new(&yi, &yv));
        let (c, w, f, b, i) = (cosine(sx, sy)?, weeds_prec(sx, sy)?, cl(sx, sy)?, cl(sy, sx)?, inv_cl(sx, sy)?);
        ensure!(unit(c) && unit(w) && unit(f) && unit(i), "case {case}: value outside [0,1]");
        ensure!((i * i - f * (1.0 - b)).abs() <= 1e-12, "case {case}: inv_cl identity violated");
    }
    Ok("7 measures within 1e-12 on 10 random spaces; bounds and inv_cl identity over 10000 cases".into())
}

fn criterion_6() -> Result<String> {
    let ranked = |positives: &[usize], n: usize| -> Vec<(f64, bool)> {
        (1..=n).map(|r| ((n - r) as f64, positives.contains(&r))).collect()
    };
    let hand: [(&[usize], usize, f64); 4] =
        [(&[1, 3], 5, 5.0 / 6.0), (&[2, 3], 4, 7.0 / 12.0), (&[1], 3, 1.0), (&[4, 5], 5, 13.0 / 40.0)];
    for (pos, n, want) in hand {
        let got = average_precision(&ranked(pos, n))?;
        ensure!((got - want).abs() <= 1e-15, "positives {pos:?} of {n}: {got} vs {want}");
    }
    for n in 1..=6usize {
        for mask in 1u32..(1 << n) {
            let items: Vec<(f64, bool)> = (0..n).map(|i| (((i * 7) % 3) as f64, mask >> i & 1 == 1)).collect();
            ensure!(average_precision(&items)? == oracle::average_precision(&items).unwrap(), "n={n} mask={mask:b}");
        }
    }
    let tied = spearman(&[1.0, 2.0, 2.0, 3.0, 3.0], &[1.0, 3.0, 2.0, 5.0, 4.0])?;
    let want = oracle::pearson(&[1.0, 2.5, 2.5, 4.5, 4.5], &[1.0, 3.0, 2.0, 5.0, 4.0]);
    ensure!((tied - want).abs() <= 1e-12, "tied spearman {tied} vs {want}");
    let mut rng = rng_from_seed(6);
    for _ in 0..200 {
        let n = 2 + below(&mut rng, 60);
        let pred: Vec<f64> = (0..n).map(|_| below(&mut rng, 6) as f64).collect();
        let gold: Vec<f64> = (0..n).map(|_| below(&mut rng, 13) as f64 * 0.5).collect();
        if gold.iter().all(|g| *g == gold[0]) || pred.iter().all(|p| *p == pred[0]) {
            continue;
        }
        ensure!((spearman(&pred, &gold)? - oracle::spearman(&pred, &gold)).abs() <= 1e-12);
    }
    Ok("4 hand-computed AP rankings, all labellings up to n=6, tied Spearman within 1e-12".into())
}

type Table = HashMap<(String, String), Option<f64>>;

fn protocol_fixture(labels: &[&str], seed: u64) -> (Vec<DatasetRecord>, Table) {
    let mut rng = rng_from_seed(seed);
    let mut records = Vec::new();
    let mut scores = HashMap::new();
    for i in 0..50 {
        let (x, y) = (format!("x{i}"), format!("y{i}"));
        let label = labels[below(&mut rng, labels.len())];
        let oov = below(&mut rng, 10) == 0;
        let f = below(&mut rng, 16) as f64 / 8.0;
        let b = if below(&mut rng, 6) == 0 { f } else { below(&mut rng, 16) as f64 / 8.0 };
        scores.insert((x.clone(), y.clone()), (!oov).then_some(f));
        scores.insert((y.clone(), x.clone()), (!oov).then_some(b));
        records.push(DatasetRecord::new(x, y, label));
    }
    (records, scores)
}

fn table_scorer<'a>(scores: &'a Table, f: impl Fn(f64) -> f64 + Sync + 'a) -> impl Scorer + 'a {
    FnScorer::new("table", move |x: &str, y: &str| {
        scores.get(&(x.to_string(), y.to_string())).copied().flatten().map(&f)
    })
}

fn oracle_pairs(records: &[DatasetRecord], scores: &Table) -> Vec<oracle::ProtocolPair> {
    records
        .iter()
        .map(|r| oracle::ProtocolPair {
            forward: scores[&(r.x.clone(), r.y.clone())],
            backward: scores[&(r.y.clone(), r.x.clone())],
            gold: r.relation.clone(),
        })
        .collect()
}

fn criterion_7() -> Result<String> {
    let (wr, ws) = protocol_fixture(&["hyper", "cohyp", "random", "hypo"], 42);
    let (br, bs) = protocol_fixture(&["hyper", "hypo", "other"], 42);
    let (w, b) = (table_scorer(&ws, |v| v), table_scorer(&bs, |v| v));
    let wbase = direction_wbless(&w, &wr, 42, 1)?.value;
    let bbase = direction_bibless(&b, &br, 42, 1)?.value;
    for jobs in [1, 2, 4, 8] {
        ensure!(direction_wbless(&w, &wr, 42, jobs)?.value.to_bits() == wbase.to_bits(), "wbless jobs={jobs}");
        ensure!(direction_bibless(&b, &br, 42, jobs)?.value.to_bits() == bbase.to_bits(), "bibless jobs={jobs}");
    }
    let wo = oracle::wbless(&oracle_pairs(&wr, &ws), 42, 1000);
    let bo = oracle::bibless(&oracle_pairs(&br, &bs), 42, 1000);
    ensure!(wo.to_bits() == wbase.to_bits(), "wbless {wbase} vs independent {wo}");
    ensure!(bo.to_bits() == bbase.to_bits(), "bibless {bbase} vs independent {bo}");
    Ok(format!("wbless {wbase:.4}, bibless {bbase:.4}; identical across jobs 1/2/4/8 and to the independent run"))
}

fn fixture_benchmarks() -> Result<Vec<(Benchmark, Vec<DatasetRecord>)>> {
    Benchmark::ALL
        .iter()
        .filter_map(|b| {
            let path = fixtures().join("bench").join(format!("{}.tsv", b.name()));
            path.is_file().then(|| {
                let text = std::fs::read(&path)?;
                Ok((*b, load_dataset(text.as_slice(), b.name(), *b)?))
            })
        })
        .collect()
}

fn criterion_8() -> Result<String> {
    let affine = |v: f64| 2.0 * v + 1.0;
    let mut checks = 0;
    for seed in [5, 6, 7] {
        let (records, scores) = protocol_fixture(&["hyper", "cohyp", "random", "hypo"], seed);
        let (plain, moved) = (table_scorer(&scores, |v| v), table_scorer(&scores, affine));
        ensure!(detection_eval(&plain, &records)?.value == detection_eval(&moved, &records)?.value, "AP");
        ensure!(direction_wbless(&plain, &records, 42, 1)?.value == direction_wbless(&moved, &records, 42, 1)?.value);
        let hyper: Vec<DatasetRecord> = records.iter().map(|r| DatasetRecord::new(&r.x, &r.y, "hyper")).collect();
        ensure!(direction_bless(&plain, &hyper, 42)?.value == direction_bless(&moved, &hyper, 42)?.value);
        let (br, bs) = protocol_fixture(&["hyper", "hypo", "other"], seed);
        ensure!(
            direction_bibless(&table_scorer(&bs, |v| v), &br, 42, 1)?.value
                == direction_bibless(&table_scorer(&bs, affine), &br, 42, 1)?.value
        );
        let graded: Vec<DatasetRecord> = records
            .iter()
            .enumerate()
            .map(|(i, r)| DatasetRecord { gold_score: Some((i % 7) as f64), ..r.clone() })
            .collect();
        ensure!(graded_eval(&plain, &graded)?.value == graded_eval(&moved, &graded)?.value, "Spearman");
        checks += 5;
    }

    let text = std::fs::read(fixtures().join("extract.golden.tsv"))?;
    let counts = PairCounts::read_tsv(text.as_slice(), "golden")?;
    let benches = fixture_benchmarks()?;
    let opts = ProtocolOptions::default();
    for weighting in [Weighting::Prob, Weighting::Ppmi] {
        let a = build_matrix(&counts, weighting)?;
        let b = build_matrix(&counts.scaled(10), weighting)?;
        let models = [
            (Model::Sparse(a.clone()), Model::Sparse(b.clone())),
            (Model::Smoothed(a.factorize(5, 42)?), Model::Smoothed(b.factorize(5, 42)?)),
        ];
        for (ma, mb) in &models {
            for (bench, records) in &benches {
                let ra = run_benchmark(*bench, ma, records, 42, &opts)?;
                let rb = run_benchmark(*bench, mb, records, 42, &opts)?;
                ensure!(
                    ra.value.to_bits() == rb.value.to_bits(),
                    "{} on {bench}: counts x10 changed the result",
                    ma.name()
                );
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} outcomes unchanged under 2x+1 scores and x10 counts"))
}

/// Detection AP and direction accuracy rows for the sparse models, and the graded value of the smoothed one.
const REFERENCE: [(&str, [(&str, f64); 8]); 2] = [
    (
        "prob",
        [
            ("bless", 0.49),
            ("eval", 0.38),
            ("leds", 0.71),
            ("shwartz", 0.29),
            ("wbless", 0.74),
            ("dir-bless", 0.46),
            ("dir-wbless", 0.69),
            ("dir-bibless", 0.62),
        ],
    ),
    (
        "ppmi",
        [
            ("bless", 0.45),
            ("eval", 0.36),
            ("leds", 0.70),
            ("shwartz", 0.28),
            ("wbless", 0.72),
            ("dir-bless", 0.46),
            ("dir-wbless", 0.68),
            ("dir-bibless", 0.61),
        ],
    ),
];
const REFERENCE_SPMI_HYPERLEX: f64 = 0.53;

fn criterion_9(pairs: &Path, bench_dir: &Path) -> Result<String> {
    let file = std::fs::File::open(pairs).with_context(|| pairs.display().to_string())?;
    let counts = PairCounts::read_tsv(std::io::BufReader::new(file), &pairs.display().to_string())?;
    let load = |name: &str| -> Result<Vec<DatasetRecord>> {
        let path = bench_dir.join(format!("{name}.tsv"));
        let text = std::fs::read(&path).with_context(|| path.display().to_string())?;
        Ok(load_dataset(text.as_slice(), name, name.parse()?)?)
    };
    let opts = ProtocolOptions::with_jobs(std::thread::available_parallelism().map_or(1, |n| n.get()));
    let mut worst: f64 = 0.0;
    for (weighting, row) in REFERENCE {
        let model = build_matrix(&counts, weighting.parse()?)?;
        for (name, want) in row {
            let got = run_benchmark(name.parse()?, &model, &load(name)?, 42, &opts)?.value;
            ensure!((got - want).abs() <= 0.03, "{weighting} on {name}: {got:.3} vs {want:.2}");
            worst = worst.max((got - want).abs());
        }
    }
    let ppmi = build_matrix(&counts, Weighting::Ppmi)?;
    let records = load("hyperlex")?;
    let grid: Vec<usize> = DEFAULT_GRID.iter().copied().filter(|&r| r <= ppmi.vocab.len()).collect();
    let picked =
        sweep(&grid, |r| validation_metric(Benchmark::Hyperlex, &ppmi.factorize(r, 42)?, &records, 42, &opts))?;
    let rho = run_benchmark(Benchmark::Hyperlex, &ppmi.factorize(picked.best, 42)?, &records, 42, &opts)?.value;
    ensure!((rho - REFERENCE_SPMI_HYPERLEX).abs() <= 0.05, "spmi hyperlex rho {rho:.3}");
    Ok(format!("max deviation {worst:.3}; spmi rank {} rho {rho:.3}", picked.best))
}

fn criterion_10() -> Result<String> {
    timed(Duration::from_secs(10), || {
        let dir = tempfile::tempdir()?;
        let d = dir.path();
        let run = |args: &[&str]| -> Result<()> {
            let out = Command::new(env!("CARGO_BIN_EXE_hypernym")).args(args).output()?;
            if !out.status.success() {
                bail!("{args:?} exited with {}: {}", out.status, String::from_utf8_lossy(&out.stderr));
            }
            Ok(())
        };
        let f = fixtures();
        let p = |name: &str| d.join(name).display().to_string();
        run(&["extract", "--corpus", &f.join("corpus.conll").display().to_string(), "--out", &p("pairs.tsv")])?;
        run(&[
            "build",
            "--pairs",
            &p("pairs.tsv"),
            "--weighting",
            "ppmi",
            "--out",
            &p("ppmi.hksm"),
            "--rank",
            "5",
            "--svd-out",
            &p("spmi.hksm"),
        ])?;
        let benches = fixture_benchmarks()?;
        let mut args: Vec<String> =
            ["eval", "--model", &p("ppmi.hksm"), "--model", &p("spmi.hksm"), "--out", &p("results")]
                .iter()
                .map(|s| s.to_string())
                .collect();
        for (b, _) in &benches {
            args.extend(["--benchmark".into(), b.name().into(), "--dataset".into()]);
            args.push(f.join("bench").join(format!("{}.tsv", b.name())).display().to_string());
        }
        run(&args.iter().map(String::as_str).collect::<Vec<_>>())?;

        let tsv = std::fs::read_to_string(d.join("results.tsv"))?;
        let header: Vec<&str> = tsv.lines().take_while(|l| l.starts_with('#')).collect();
        ensure!(
            header.first().is_some_and(|l| l.starts_with("# hypernym ") && l.ends_with(" eval")),
            "missing tool line"
        );
        ensure!(
            header.iter().any(|l| l.starts_with("# config=") && l.ends_with(" seed=42")),
            "missing config/seed line"
        );
        for key in ["model0", "model1"]
            .into_iter()
            .map(String::from)
            .chain(benches.iter().map(|(b, _)| format!("dataset.{b}")))
        {
            ensure!(header.iter().any(|l| l.starts_with(&format!("# {key}=sha256:"))), "header lacks {key}");
        }
        let mut rows = tsv.lines().skip(header.len());
        ensure!(
            rows.next() == Some("scorer\tbenchmark\tmetric\tvalue\tvalidation\tn_pairs\tn_oov\thyperparameters\tseed"),
            "unexpected column header"
        );
        let rows: Vec<Vec<&str>> = rows.map(|l| l.split('\t').collect()).collect();
        ensure!(rows.len() == 2 * benches.len(), "expected {} result rows, got {}", 2 * benches.len(), rows.len());
        for r in &rows {
            ensure!(r.len() == 9, "row with {} columns", r.len());
            for i in [0, 1, 2, 3, 5, 6, 8] {
                ensure!(!r[i].is_empty(), "empty column {i} in {r:?}");
            }
            ensure!(r[3].parse::<f64>()?.is_finite(), "non-finite value in {r:?}");
            ensure!(r[0] != "spmi(x,y)" || r[7] == "rank=5", "smoothed row lacks its rank");
        }
        let md = std::fs::read_to_string(d.join("results.md"))?;
        ensure!(md.contains("| ppmi(x,y) |") && md.contains("| spmi(x,y) |"), "markdown table incomplete");
        Ok(format!("{} benchmarks x 2 models", benches.len()))
    })
}

type Check = fn() -> Result<String>;

fn main() -> ExitCode {
    let gating: [(u32, &str, Check); 9] = [
        (1, "extraction golden", criterion_1),
        (2, "ppmi equivalence", criterion_2),
        (3, "full-rank svd identity", criterion_3),
        (4, "svd oracle", criterion_4),
        (5, "baseline formulas", criterion_5),
        (6, "ap and spearman oracles", criterion_6),
        (7, "protocol determinism", criterion_7),
        (8, "monotone invariance", criterion_8),
        (10, "end-to-end smoke", criterion_10),
    ];
    let mut failed = 0;
    for (id, name, check) in gating {
        match check() {
            Ok(detail) => println!("criterion {id:>2} {name}: PASS ({detail})"),
            Err(e) => {
                failed += 1;
                println!("criterion {id:>2} {name}: FAIL ({e:#})");
            }
        }
        if id == 8 {
            match (std::env::var_os("HYPERNYM_FULL_PAIRS"), std::env::var_os("HYPERNYM_BENCH_DIR")) {
                (Some(pairs), Some(dir)) => match criterion_9(Path::new(&pairs), Path::new(&dir)) {
                    Ok(detail) => println!("criterion  9 full-scale reproduction: PASS ({detail})"),
                    Err(e) => println!("criterion  9 full-scale reproduction: FAIL, not gating ({e:#})"),
                },
                _ => println!(
                    "criterion  9 full-scale reproduction: SKIP (set HYPERNYM_FULL_PAIRS and HYPERNYM_BENCH_DIR)"
                ),
            }
        }
    }
    if failed > 0 {
        println!("{failed} gating criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
