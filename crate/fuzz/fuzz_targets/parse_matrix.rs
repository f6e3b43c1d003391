#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = dicg::harness::io::parse_matrix_str(text);
        let _ = dicg::harness::io::parse_vector_str(text);
    }
});
