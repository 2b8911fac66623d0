#![no_main]
use hypernym::model_io::{decode, encode};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(file) = decode(data) else { return };
    let bytes = encode(&file.model, &file.header).expect("decoded model encodes");
    let again = decode(&bytes).expect("encoded model decodes");
    assert_eq!(encode(&again.model, &again.header).expect("re-encode"), bytes);
    let terms = file.model.vocab().terms();
    if let (Some(x), Some(y)) = (terms.first(), terms.last()) {
        let _ = file.model.score(x, y);
    }
});
