#![no_main]

use critsym::dsl::{parse_expr, Scope};
use critsym::expr::render_dsl;
use critsym::jet::Block;
use libfuzzer_sys::fuzz_target;

// Accepted expressions render to text that parses back to the same expression.
fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    let scope = Scope::new(&["n", "p"], vec![Block::symbolic("x", "n"), Block::concrete("y", 2)], &["u", "v"]);
    if let Ok(e) = parse_expr(src, &scope) {
        let text = render_dsl(&e);
        assert_eq!(parse_expr(&text, &scope).as_ref(), Ok(&e), "{text}");
    }
});
