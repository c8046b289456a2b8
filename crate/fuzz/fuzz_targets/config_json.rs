#![no_main]

use libfuzzer_sys::fuzz_target;
use qsweep::config::{resolve, FileConfig, Model, Overrides};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(file) = FileConfig::from_json(text) else { return };
    // resolve materialises the separations list, so keep n fuzz sized
    if file.n.unwrap_or(0) > 64 {
        return;
    }
    let flags = Overrides::default();
    for model in [Model::Aligned, Model::CyclicNn, Model::OpenNn, Model::FullyConnected] {
        if let Ok(cfg) = resolve(model, &file, &flags) {
            assert!(cfg.grid.points >= 2);
            assert!(cfg.separations.iter().all(|&l| l >= 1 && l <= cfg.n / 2));
            if let Some(q) = cfg.measures.deficit_q {
                assert!(q.is_finite() && q > 0.0);
            }
        }
    }
});
