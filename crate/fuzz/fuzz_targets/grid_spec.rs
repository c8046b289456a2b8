#![no_main]

use libfuzzer_sys::fuzz_target;
use qsweep::config::FieldGrid;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(grid) = text.parse::<FieldGrid>() {
        assert!(grid.min < grid.max);
        assert!(grid.points >= 2);
        if grid.points <= 4096 {
            let values = grid.values();
            assert_eq!(values.len(), grid.points);
            assert_eq!(values[0], grid.min);
            assert!(values.iter().all(|v| v.is_finite()));
        }
    }
});
