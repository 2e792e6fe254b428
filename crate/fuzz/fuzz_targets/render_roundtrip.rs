#![no_main]

use libfuzzer_sys::fuzz_target;
use pgroup_witness::words::{parse_word, render_word, Alphabet};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let alphabet = Alphabet::standard(4);
    let Ok(w) = parse_word(text, &alphabet) else {
        return;
    };
    let rendered = render_word(&w);
    let again = parse_word(&rendered, &alphabet).expect("canonical rendering parses");
    assert_eq!(again, w);
    assert_eq!(render_word(&again), rendered);
});
