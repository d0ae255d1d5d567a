//! Parse arbitrary bytes as a problem file; whatever parses must also
//! survive validation without panicking.

#![no_main]

use libfuzzer_sys::fuzz_target;
use qsuff::problem::ProblemFile;

fuzz_target!(|data: &[u8]| {
    if let Ok(file) = ProblemFile::from_slice(data) {
        let _ = file.validate();
    }
});
