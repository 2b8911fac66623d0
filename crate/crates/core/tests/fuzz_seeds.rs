use std::path::{Path, PathBuf};

use hypernym::dist::DistributionalSpace;
use hypernym::eval::{load_dataset, Benchmark};
use hypernym::model_io::decode;
use hypernym::{parse_corpus_str, PairCounts, PatternSet};

fn seeds(target: &str) -> Vec<(PathBuf, Vec<u8>)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let path = e.unwrap().path();
            let bytes = std::fs::read(&path).unwrap();
            (path, bytes)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

fn text(bytes: &[u8]) -> &str {
    std::str::from_utf8(bytes).unwrap()
}

#[test]
fn every_checked_in_seed_is_valid_input() {
    for (path, bytes) in seeds("parse_corpus") {
        assert!(!parse_corpus_str(text(&bytes)).unwrap().is_empty(), "{}", path.display());
    }
    for (path, bytes) in seeds("parse_patterns") {
        PatternSet::parse(text(&bytes)).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    }
    for (path, bytes) in seeds("pairs_tsv") {
        PairCounts::read_tsv(bytes.as_slice(), "seed").unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    }
    for (path, bytes) in seeds("model_decode") {
        decode(&bytes).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    }
    for (path, bytes) in seeds("space_load") {
        let parts: Vec<&str> = text(&bytes).splitn(3, '\0').collect();
        DistributionalSpace::load_str(parts[0], parts[1], parts[2])
            .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    }
    for (path, bytes) in seeds("dataset_load") {
        let benchmark = Benchmark::ALL[bytes[0] as usize % Benchmark::ALL.len()];
        load_dataset(&bytes[1..], "seed", benchmark).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    }
}
