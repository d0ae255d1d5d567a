//! Any document that parses must serialize and parse back to the same
//! value: JSON numbers cannot carry non-finite floats, so the round trip
//! is exact.

#![no_main]

use libfuzzer_sys::fuzz_target;
use qsuff::problem::ProblemFile;

fuzz_target!(|data: &[u8]| {
    if let Ok(file) = ProblemFile::from_slice(data) {
        let json = file.to_json();
        let again = ProblemFile::from_slice(json.as_bytes()).expect("round trip must parse");
        assert_eq!(file, again, "round trip changed the document");
    }
});
