use std::path::PathBuf;

use sha2::{Digest, Sha256};

#[test]
fn fixtures_match_recorded_checksums() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let sums = std::fs::read_to_string(dir.join("SHA256SUMS")).unwrap();
    let mut checked = 0;
    for line in sums.lines().filter(|l| !l.trim().is_empty()) {
        let (digest, name) = line.split_once("  ").unwrap();
        let bytes = std::fs::read(dir.join(name)).unwrap();
        assert_eq!(hex::encode(Sha256::digest(&bytes)), digest, "{name}");
        checked += 1;
    }
    let listed = qpack::fixtures::FILES.len();
    assert_eq!(checked, listed);
}
