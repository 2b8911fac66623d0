#![no_main]
use hypernym::PairCounts;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(counts) = PairCounts::read_tsv(data, "fuzz") else { return };
    let text = counts.to_tsv_string();
    let again = PairCounts::read_tsv(text.as_bytes(), "fuzz").expect("written TSV parses");
    assert_eq!(counts, again);
    let _ = counts.postprocess();
});
