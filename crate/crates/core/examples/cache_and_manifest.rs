//! Store a table in the binary cache, load it back, and record a run manifest.

use expsum::families::master_table;
use expsum::report::{cache_table, load_table, write_json_file, RunManifest, TableKey};
use expsum::{FamilySpec, OddPrime};

fn main() -> expsum::Result<()> {
    let dir = std::env::temp_dir().join("expsum-example-cache");
    let p = OddPrime::new(10007)?;
    let table = master_table(&FamilySpec::kloosterman(1), p)?;
    let path = cache_table(&dir, &table)?;
    let back = load_table(&dir, &TableKey::of(&table))?.expect("just written");
    println!(
        "{} ({} entries, identical: {})",
        path.display(),
        back.values.len(),
        back.values == table.values
    );

    let mut manifest = RunManifest::new(std::env::args().collect());
    manifest.p = Some(p.get());
    manifest.cache_hits = 1;
    write_json_file(&dir.join("manifest.json"), &manifest)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&manifest).expect("serializable")
    );
    Ok(())
}
