#![no_main]
use hypernym::dist::{DistributionalSpace, Measure};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let mut parts = text.splitn(3, '\0');
    let (Some(weights), Some(contexts), Some(counts)) = (parts.next(), parts.next(), parts.next()) else { return };
    let Ok(space) = DistributionalSpace::load_str(weights, contexts, counts) else { return };
    let terms = space.terms().terms();
    if let (Some(x), Some(y)) = (terms.first(), terms.last()) {
        for measure in Measure::ALL {
            let _ = space.measure(measure, x, y, 3);
        }
    }
});
