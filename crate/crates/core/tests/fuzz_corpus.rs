//! The checked-in fuzz seeds parse and survive the round trip the fuzz
//! targets assert.

use std::fs;
use std::path::{Path, PathBuf};

use critsym::dsl::{parse_expr, parse_model, render_model, Scope};
use critsym::expr::render_dsl;
use critsym::jet::Block;

fn seeds(target: &str) -> Vec<(PathBuf, String)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|f| {
            let p = f.unwrap().path();
            let text = fs::read_to_string(&p).unwrap();
            (p, text)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds in {}", dir.display());
    out
}

#[test]
fn model_seeds_round_trip() {
    for (path, src) in seeds("parse_model") {
        let m = parse_model(&src).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(parse_model(&render_model(&m)).unwrap(), m, "{}", path.display());
    }
}

#[test]
fn expression_seeds_round_trip() {
    let scope = Scope::new(&["n", "p"], vec![Block::symbolic("x", "n"), Block::concrete("y", 2)], &["u", "v"]);
    for (path, src) in seeds("parse_expr") {
        let e = parse_expr(&src, &scope).unwrap_or_else(|err| panic!("{}: {err}", path.display()));
        assert_eq!(parse_expr(&render_dsl(&e), &scope).unwrap(), e, "{}", path.display());
    }
}
