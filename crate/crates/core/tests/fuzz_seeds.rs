//! Replays the checked-in fuzz corpus through the same invariants the fuzz
//! targets assert, so regressions show up without a fuzzing toolchain.

use std::fs;
use std::path::PathBuf;

use pgroup_witness::obstruction::{GridSpec, RelationShape, Theorem, MAX_GRID_POINTS};
use pgroup_witness::words::{parse_word, render_word, Alphabet};

fn seeds(target: &str) -> Vec<String> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut files: Vec<PathBuf> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    assert!(!files.is_empty(), "no seeds for {target}");
    files
        .iter()
        .filter_map(|f| String::from_utf8(fs::read(f).unwrap()).ok())
        .collect()
}

#[test]
fn word_seeds_round_trip() {
    let alphabet = Alphabet::standard(4);
    let mut parsed = 0;
    for text in seeds("parse_word")
        .into_iter()
        .chain(seeds("render_roundtrip"))
    {
        if let Ok(w) = parse_word(&text, &alphabet) {
            let rendered = render_word(&w);
            let again = parse_word(&rendered, &alphabet).unwrap();
            assert_eq!(again, w, "{text:?}");
            assert_eq!(render_word(&again), rendered);
            parsed += 1;
        }
    }
    assert!(parsed >= 10);
}

#[test]
fn grid_seeds_respect_caps() {
    let mut parsed = 0;
    for text in seeds("parse_grid") {
        if let Ok(g) = GridSpec::parse(&text) {
            let points = [
                g.theorems.len(),
                g.p.len(),
                g.k.len(),
                g.m.len(),
                g.l.len(),
                g.u.len(),
                g.w.len(),
            ]
            .iter()
            .product::<usize>();
            assert!(points <= MAX_GRID_POINTS);
            parsed += 1;
        }
    }
    assert!(parsed >= 4);
}

#[test]
fn relation_seeds_split_the_leading_exponent() {
    let alphabet = Alphabet::standard(3);
    let mut parsed = 0;
    for text in seeds("parse_relation") {
        let (head, relation) = text.split_once('\n').unwrap_or((&text, "x^3 [y1,y2]"));
        let Ok(theorem) = head.parse::<Theorem>() else {
            continue;
        };
        for p in [2u64, 3, 5] {
            if let Ok(shape) = RelationShape::parse(relation, &alphabet, p, theorem) {
                assert!(shape.l() >= 1);
                assert!(shape.u() % p as i64 != 0);
                parsed += 1;
            }
        }
    }
    assert!(parsed >= 6);
}
