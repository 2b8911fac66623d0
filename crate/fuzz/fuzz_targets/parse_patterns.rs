#![no_main]
use hypernym::{chunk_noun_phrases, match_sentence, parse_corpus_str, ExtractOptions, PatternSet};
use libfuzzer_sys::fuzz_target;

const SENTENCE: &str = "animals\tanimal\tNNS\nsuch\tsuch\tJJ\nas\tas\tIN\ncats\tcat\tNNS\n,\t,\t,\ndogs\tdog\tNNS\nand\tand\tCC\nother\tother\tJJ\npets\tpet\tNNS\n";

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(patterns) = PatternSet::parse(text) else { return };
    let sentences = parse_corpus_str(SENTENCE).expect("fixed sentence parses");
    let nps = chunk_noun_phrases(&sentences[0]);
    for multiword in [false, true] {
        let _ = match_sentence(&sentences[0], patterns.patterns(), &nps, &ExtractOptions { multiword });
    }
});
