//! Regenerates the JSON measurement fixtures under tests/data/.

use entrosteer::measurements::{bes_measurements, mub_dim4, set_to_json};
use std::path::Path;

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data");
    std::fs::create_dir_all(&dir).expect("create tests/data");
    std::fs::write(dir.join("mub_dim4.json"), set_to_json(&mub_dim4())).unwrap();
    std::fs::write(
        dir.join("bes_measurements.json"),
        set_to_json(&bes_measurements()),
    )
    .unwrap();
    println!("fixtures written to {}", dir.display());
}
