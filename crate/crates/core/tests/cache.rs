use std::fs;
use std::sync::Arc;

use vsc_core::algebra::{int, rat};
use vsc_core::cache::VscCache;
use vsc_core::gf::gf_closed;
use vsc_core::{CorrelatorSpec, Evaluator, InsertionProfile, Model};

fn spec(d: u32) -> CorrelatorSpec {
    CorrelatorSpec::closed(Model::cp2(), d, 2, 2, InsertionProfile::from_pairs(&[(2, 3 * d - 2)]))
}

#[test]
fn values_persist_across_instances() {
    let dir = tempfile::tempdir().unwrap();
    let c = VscCache::with_dir(dir.path()).unwrap();
    c.put(&spec(1), &int(1)).unwrap();
    c.put(&spec(2), &rat(-7, 3)).unwrap();
    c.put(&spec(2), &int(99)).unwrap();
    assert_eq!(c.get(&spec(2)), Some(rat(-7, 3)));

    let again = VscCache::with_dir(dir.path()).unwrap();
    assert_eq!(again.get(&spec(1)), Some(int(1)));
    assert_eq!(again.get(&spec(2)), Some(rat(-7, 3)));
    assert_eq!(again.len(), 2);
}

#[test]
fn corrupt_lines_are_skipped() {
    let dir = tempfile::tempdir().unwrap();
    let c = VscCache::with_dir(dir.path()).unwrap();
    c.put(&spec(1), &int(5)).unwrap();
    let path = dir.path().join(format!("{}.ndjson", Model::cp2().key()));
    let mut text = fs::read_to_string(&path).unwrap();
    text.push_str("{not json\n");
    text.push_str(&text.lines().next().unwrap().replace("vsc-residue-1", "old-engine").replace(&spec(1).canonical(), &spec(2).canonical()));
    text.push('\n');
    fs::write(&path, text).unwrap();

    let again = VscCache::with_dir(dir.path()).unwrap();
    assert_eq!(again.get(&spec(1)), Some(int(5)));
    assert_eq!(again.get(&spec(2)), None);
}

#[test]
fn warm_cache_gives_identical_series() {
    let dir = tempfile::tempdir().unwrap();
    let cold = Evaluator::with_cache(Arc::new(VscCache::with_dir(dir.path()).unwrap()), 8);
    let a = gf_closed(&cold, &Model::cp2(), 1, 1, 3, 2).unwrap();
    assert!(!cold.cache().is_empty());

    let warm = Evaluator::with_cache(Arc::new(VscCache::with_dir(dir.path()).unwrap()), 8);
    let b = gf_closed(&warm, &Model::cp2(), 1, 1, 3, 2).unwrap();
    assert_eq!(a, b);
    assert_eq!(a, gf_closed(&Evaluator::new(), &Model::cp2(), 1, 1, 3, 2).unwrap());
}
