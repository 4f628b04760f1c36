use nicecone::linalg::{rat, Rat};
use nicecone::structured::{example1, example2, for_each_grid_matrix, rational_grid_values, Example1};
use nicecone::SymMat;
use num_traits::{Signed, Zero};

fn det2(a: &Rat, b: &Rat, c: &Rat) -> Rat {
    a * c - b * b
}

/// PSD by principal minors, written out for orders 2 and 3.
fn psd_by_minors(x: &SymMat) -> bool {
    let g = |i, j| x.get(i, j).clone();
    match x.order() {
        2 => !g(0, 0).is_negative() && !g(1, 1).is_negative() && !det2(&g(0, 0), &g(0, 1), &g(1, 1)).is_negative(),
        3 => {
            let diag = (0..3).all(|i| !g(i, i).is_negative());
            let pairs = [(0, 1), (0, 2), (1, 2)]
                .iter()
                .all(|&(i, j)| !det2(&g(i, i), &g(i, j), &g(j, j)).is_negative());
            let det = g(0, 0) * (g(1, 1) * g(2, 2) - g(1, 2) * g(1, 2))
                - g(0, 1) * (g(0, 1) * g(2, 2) - g(1, 2) * g(0, 2))
                + g(0, 2) * (g(0, 1) * g(1, 2) - g(1, 1) * g(0, 2));
            diag && pairs && !det.is_negative()
        }
        _ => unreachable!(),
    }
}

#[test]
fn example1_dual_matches_psd_with_nonnegative_corner() {
    let ex = example1().unwrap();
    let vals = rational_grid_values(4, 3);
    assert_eq!(vals.len(), 37);
    let mut count = 0;
    for_each_grid_matrix(2, &vals, |y| {
        let oracle = psd_by_minors(y) && !y.get(0, 1).is_negative();
        assert_eq!(ex.cone.dual.member(y).unwrap().is_in(), oracle, "{y:?}");
        count += 1;
    });
    assert_eq!(count, 37 * 37 * 37);
}

#[test]
fn example1_cone_matches_closed_description() {
    let ex = example1().unwrap();
    let vals = rational_grid_values(2, 2);
    for_each_grid_matrix(2, &vals, |x| {
        assert_eq!(ex.cone.form.member(x).unwrap().is_in(), Example1::closed_description(x), "{x:?}");
    });
}

#[test]
fn example2_cone_and_dual_on_reduced_grid() {
    let ex = example2().unwrap();
    let vals = vec![rat(-1, 1), Rat::zero(), rat(1, 2), rat(1, 1)];
    let mut members = vec![];
    let mut dual_members = vec![];
    for_each_grid_matrix(3, &vals, |x| {
        let oracle = psd_by_minors(x) && !x.get(0, 1).is_negative();
        assert_eq!(ex.cone.form.member(x).unwrap().is_in(), oracle, "{x:?}");
        if oracle {
            members.push(x.clone());
        }
        if ex.cone.dual.member(x).unwrap().is_in() {
            dual_members.push(x.clone());
        }
    });
    assert!(!members.is_empty() && !dual_members.is_empty());
    // every accepted dual element is nonnegative on every grid element of K
    for y in &dual_members {
        for x in &members {
            assert!(!y.inner(x).unwrap().is_negative(), "{y:?} {x:?}");
        }
    }
    // the overlap witness I + M/2 is interior to both pieces
    let w = SymMat::identity(3).add(&ex.m.scale(&rat(1, 2)));
    assert!(psd_by_minors(&w) && ex.m.inner(&w).unwrap().is_positive());
}
