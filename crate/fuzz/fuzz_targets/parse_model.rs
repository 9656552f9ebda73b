#![no_main]

use critsym::dsl::{parse_model, render_model};
use libfuzzer_sys::fuzz_target;

// Accepted models render to text that parses back to the same model.
fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    if let Ok(m) = parse_model(src) {
        let text = render_model(&m);
        assert_eq!(parse_model(&text).as_ref(), Ok(&m), "{text}");
    }
});
