#![no_main]

use libfuzzer_sys::fuzz_target;
use odrk_core::usability::{parse_sessions_csv, parse_sus_csv, summarize_study, StudyLog};

fuzz_target!(|data: &[u8]| {
    let sessions = parse_sessions_csv(data).unwrap_or_default();
    let sus = parse_sus_csv(data).unwrap_or_default();
    if let Ok(log) = StudyLog::new(sessions, sus) {
        let _ = summarize_study(&log);
    }
});
