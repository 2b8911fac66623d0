#![no_main]
use hypernym::{chunk_noun_phrases, match_sentence, parse_corpus_str, ExtractOptions, PatternSet};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(sentences) = parse_corpus_str(text) else { return };
    let patterns = PatternSet::builtin();
    let options = ExtractOptions { multiword: true };
    for sentence in &sentences {
        let nps = chunk_noun_phrases(sentence);
        for np in &nps {
            assert!(np.start <= np.head && np.head < np.end && np.end <= sentence.tokens.len());
        }
        let _ = match_sentence(sentence, patterns.patterns(), &nps, &options);
    }
});
