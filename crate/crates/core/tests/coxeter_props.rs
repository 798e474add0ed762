use std::time::{Duration, Instant};

use artin_lab::coxeter::{GroupTable, DEFAULT_CAP};
use artin_lab::diagram::{CoxeterDiagram, FamilyTag};

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn timed(t: FamilyTag) -> (usize, Duration) {
    let start = Instant::now();
    let g = GroupTable::enumerate(&t.diagram().unwrap(), DEFAULT_CAP).unwrap();
    (g.order(), start.elapsed())
}

#[test]
fn orders_match_closed_forms() {
    let mut cases = Vec::new();
    for n in 1..=5 {
        cases.push((FamilyTag::A(n), factorial(n + 1)));
    }
    for n in 2..=5 {
        cases.push((FamilyTag::B(n), (1 << n) * factorial(n)));
    }
    for n in 4..=5 {
        cases.push((FamilyTag::D(n), (1 << (n - 1)) * factorial(n)));
    }
    for m in 3..=8 {
        cases.push((FamilyTag::I2(m), 2 * m as usize));
    }
    cases.push((FamilyTag::H3, 120));
    cases.push((FamilyTag::F4, 1152));
    cases.push((FamilyTag::H4, 14400));
    cases.push((FamilyTag::E6, 51840));
    for (t, expected) in cases {
        let (order, took) = timed(t);
        assert_eq!(order, expected, "{t}");
        assert!(took < Duration::from_secs(10), "{t} took {took:?}");
    }
}

#[test]
fn products_of_components() {
    let d = CoxeterDiagram::from_named(&["a", "b", "c", "d"], &[("a", "b", 5), ("c", "d", 3)]).unwrap();
    let g = GroupTable::enumerate(&d, DEFAULT_CAP).unwrap();
    assert_eq!(g.order(), 10 * 6);
}
