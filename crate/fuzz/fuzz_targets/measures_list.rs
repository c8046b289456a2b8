#![no_main]

use libfuzzer_sys::fuzz_target;
use qsweep::config::MeasureSet;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(set) = MeasureSet::parse_list(text) {
        let any = set.discord
            || set.deficit1
            || set.deficit2
            || set.deficit3
            || set.concurrence
            || set.deficit_q.is_some();
        assert!(any);
        if let Some(q) = set.deficit_q {
            assert!(q.is_finite() && q > 0.0);
        }
    }
});
