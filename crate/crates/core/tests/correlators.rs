use vsc_core::algebra::{int, rat, BigRational};
use vsc_core::model::{CorrelatorSpec, InsertionProfile, Model};
use vsc_core::Evaluator;

fn ins(p: &[(u32, u32)]) -> InsertionProfile {
    InsertionProfile::from_pairs(p)
}

fn closed(m: Model, d: u32, a: i64, b: i64, p: &[(u32, u32)]) -> BigRational {
    Evaluator::new().vsc(&CorrelatorSpec::closed(m, d, a, b, ins(p))).unwrap()
}

fn open(m: Model, d: u32, a: i64, p: &[(u32, u32)]) -> BigRational {
    Evaluator::new().vsc(&CorrelatorSpec::open(m, d, a, ins(p))).unwrap()
}

#[test]
fn closed_cp2_values() {
    assert_eq!(closed(Model::cp2(), 1, 2, 2, &[]), int(1));
    assert_eq!(closed(Model::cp2(), 1, 2, 0, &[(2, 2)]), int(1));
    assert_eq!(closed(Model::cp2(), 2, 2, 2, &[(2, 3)]), int(4));
    assert_eq!(closed(Model::cp2(), 1, 0, 0, &[(2, 4)]), int(6));
    assert_eq!(closed(Model::cp2(), 1, 2, 1, &[(0, 1), (2, 1)]), int(0));
}

#[test]
fn closed_cp2_series_coefficients() {
    // a=b=1: 16/15 (x2)^5 q^2 and 961/420 (x2)^8 q^3
    assert_eq!(closed(Model::cp2(), 2, 1, 1, &[(2, 5)]), rat(16 * 120, 15));
    assert_eq!(closed(Model::cp2(), 3, 1, 1, &[(2, 8)]), rat(961 * 40320, 420));
}

#[test]
fn closed_m89_values() {
    assert_eq!(closed(Model::m89(), 1, 1, 1, &[(3, 1)]), int(9 * 306470385));
    assert_eq!(closed(Model::m89(), 1, 1, 1, &[(2, 2)]), int(9 * 2 * 215613333));
    assert_eq!(closed(Model::m89(), 2, 1, 1, &[(2, 1)]), int(9 * 89761934928094677));
}

#[test]
fn open_cp2_values() {
    assert_eq!(open(Model::cp2(), 1, 2, &[]), int(2));
    assert_eq!(open(Model::cp2(), 2, 2, &[(2, 3)]), rat(9, 4));
    assert_eq!(open(Model::cp2(), 1, 1, &[(0, 1), (3, 1)]), rat(1, 2));
}

#[test]
fn open_m89_values() {
    assert_eq!(open(Model::m89(), 1, 0, &[(3, 1)]), int(945));
    assert_eq!(open(Model::m89(), 2, 1, &[]), int(90642729450u64 as i64));
}
