#![no_main]

use libfuzzer_sys::fuzz_target;
use pgroup_witness::obstruction::{RelationShape, Theorem};
use pgroup_witness::words::Alphabet;

// First line: theorem name. Second line: relation text.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let (head, relation) = text.split_once('\n').unwrap_or((text, "x^3 [y1,y2]"));
    let Ok(theorem) = head.parse::<Theorem>() else {
        return;
    };
    let alphabet = Alphabet::standard(3);
    for p in [2, 3, 5] {
        if let Ok(shape) = RelationShape::parse(relation, &alphabet, p, theorem) {
            assert!(shape.l() >= 1);
            assert!(shape.u() % p as i64 != 0);
            if let Ok(e) = shape.leading_exponent(p, theorem) {
                assert_ne!(e, 0);
            }
        }
    }
});
