#![no_main]
use hypernym::eval::{load_dataset, Benchmark};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((selector, body)) = data.split_first() else { return };
    let benchmark = Benchmark::ALL[*selector as usize % Benchmark::ALL.len()];
    let Ok(records) = load_dataset(body, "fuzz", benchmark) else { return };
    for r in &records {
        assert!(!r.x.is_empty() && !r.y.is_empty());
        assert_eq!(r.gold_score.is_some(), benchmark.is_graded());
    }
});
