use std::path::PathBuf;

use ramiforge::cover::datasets;
use ramiforge::cover::file::{cover_to_json, load_cover};

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/covers")
}

/// Set RAMIFORGE_BLESS=1 to rewrite the files from the datasets.
#[test]
fn bundled_cover_files_match_datasets() {
    let bless = std::env::var_os("RAMIFORGE_BLESS").is_some();
    for c in datasets::all() {
        let path = data_dir().join(format!("{}.cover", c.name));
        let text = cover_to_json(&c);
        if bless {
            std::fs::write(&path, &text).unwrap();
        }
        let on_disk = std::fs::read_to_string(&path)
            .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(on_disk, text, "{} is stale", path.display());
        let loaded = load_cover(&path).unwrap();
        assert_eq!(cover_to_json(&loaded), text);
        assert_eq!(loaded.caveats(), c.caveats());
    }
}
