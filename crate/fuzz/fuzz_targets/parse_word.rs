#![no_main]

use libfuzzer_sys::fuzz_target;
use pgroup_witness::words::{parse_word, Alphabet};

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(w) = parse_word(text, &Alphabet::standard(4)) {
            assert!(!w.terms().is_empty());
        }
    }
});
