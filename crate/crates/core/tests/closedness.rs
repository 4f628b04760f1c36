use nicecone::closedness::{
    cl_dir_member, closure_perturbation, dir_epsilon, dir_member, image_dual_closed, ri_base_point, BaseCone, LinMap,
};
use nicecone::linalg::{int, psd_check, rat, Metric, QVec, Rat};
use nicecone::{PolyCone, SymMat};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sv(rows: &[&[i64]]) -> QVec {
    SymMat::from_i64(rows).to_svec()
}

fn random_vec(rng: &mut ChaCha8Rng, d: usize, b: i64) -> QVec {
    QVec::new((0..d).map(|_| int(rng.gen_range(-b..=b))).collect())
}

fn orthant(d: usize) -> PolyCone {
    let gens: Vec<QVec> = (0..d).map(|i| QVec::unit(d, i)).collect();
    PolyCone::from_generators(&Metric::euclidean(d), &gens, &[]).unwrap()
}

/// A random PSD(2) matrix `L L^T` of rank up to 2.
fn random_psd2(rng: &mut ChaCha8Rng) -> QVec {
    let a = random_vec(rng, 2, 2);
    let mut x = SymMat::outer(&a);
    if rng.gen_bool(0.4) {
        x = x.add(&SymMat::outer(&random_vec(rng, 2, 2)));
    }
    x.to_svec()
}

#[test]
fn orthant_images_are_closed() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let c = BaseCone::Polyhedral(orthant(3));
    for _ in 0..30 {
        let m = rng.gen_range(1..=3);
        let cols = (0..m).map(|_| random_vec(&mut rng, 3, 3)).collect();
        let lm = LinMap::new(&Metric::euclidean(3), cols).unwrap();
        assert!(image_dual_closed(&c, &lm).unwrap().closed);
    }
}

#[test]
fn polyhedral_dir_equals_cl_dir_and_epsilon_works() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let k = orthant(3);
    let c = BaseCone::Polyhedral(k.clone());
    for _ in 0..200 {
        // a point on a random face
        let x = QVec::new((0..3).map(|_| int(rng.gen_range(0..=2))).collect());
        let y = random_vec(&mut rng, 3, 3);
        let d = dir_member(&c, &x, &y).unwrap();
        assert_eq!(d, cl_dir_member(&c, &x, &y).unwrap());
        match dir_epsilon(&c, &x, &y).unwrap() {
            Some(eps) => {
                assert!(d);
                assert!(k.contains(&x.axpy(&eps, &y)).unwrap());
            }
            None => assert!(!d),
        }
    }
}

#[test]
fn psd_dir_oracles() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let c = BaseCone::Psd(2);
    for _ in 0..200 {
        let x = random_psd2(&mut rng);
        let y = random_vec(&mut rng, 3, 3);
        let d = dir_member(&c, &x, &y).unwrap();
        let cl = cl_dir_member(&c, &x, &y).unwrap();
        assert!(!d || cl);
        let eps = dir_epsilon(&c, &x, &y).unwrap();
        assert_eq!(d, eps.is_some(), "{x:?} {y:?}");
        if let Some(e) = eps {
            // monotone in ε
            let half: Rat = e / int(2);
            assert!(psd_check(&SymMat::from_svec(2, &x.axpy(&half, &y)).unwrap()).is_psd());
        }
        if cl {
            for delta in [int(1), rat(1, 10), rat(1, 1000)] {
                let z = closure_perturbation(2, &x, &y, &delta).unwrap();
                assert!(dir_member(&c, &x, &z).unwrap());
            }
        }
    }
}

#[test]
fn e11_off_diagonal_direction_determinant() {
    let c = BaseCone::Psd(2);
    let (x, y) = (sv(&[&[1, 0], &[0, 0]]), sv(&[&[0, 1], &[1, 0]]));
    assert!(!dir_member(&c, &x, &y).unwrap());
    // det(E11 + εY) = -ε^2
    let mut eps = int(1);
    for _ in 0..30 {
        let z = SymMat::from_svec(2, &x.axpy(&eps, &y)).unwrap();
        let det = z.get(0, 0) * z.get(1, 1) - z.get(0, 1) * z.get(0, 1);
        assert_eq!(det, -(&eps * &eps));
        eps = eps / int(3);
    }
}

#[test]
fn slater_and_base_points() {
    let m = Metric::sym(2);
    let c = BaseCone::Psd(2);
    let lm = LinMap::new(&m, vec![sv(&[&[1, 0], &[0, 1]]), sv(&[&[0, 1], &[1, 0]])]).unwrap();
    let r = image_dual_closed(&c, &lm).unwrap();
    assert!(r.closed);
    assert_eq!(psd_check(&SymMat::from_svec(2, &r.x).unwrap()).rank(), Some(2));
    let e = Metric::euclidean(3);
    let line = LinMap::new(&e, vec![QVec::from_i64(&[1, 1, 0])]).unwrap();
    assert_eq!(ri_base_point(&BaseCone::Polyhedral(orthant(3)), &line).unwrap(), QVec::from_i64(&[1, 1, 0]));
}

/// `M*(X) = (x11, 2 x12)` on PSD(2): `(1/k, 1)` is an image, `(0, 1)` is not.
#[test]
fn off_diagonal_map_against_direct_image() {
    let m = Metric::sym(2);
    let lm = LinMap::new(&m, vec![sv(&[&[1, 0], &[0, 0]]), sv(&[&[0, 1], &[1, 0]])]).unwrap();
    for k in 1..20i64 {
        let x = SymMat::from_rows(&[vec![rat(1, k), rat(1, 2)], vec![rat(1, 2), rat(k, 4)]]).unwrap();
        assert!(psd_check(&x).is_psd());
        assert_eq!(lm.adjoint(&x.to_svec()), QVec::new(vec![rat(1, k), int(1)]));
    }
    // x11 = 0 and PSD force x12 = 0, so (0, 1) has no preimage
    let r = image_dual_closed(&BaseCone::Psd(2), &lm).unwrap();
    assert!(!r.closed);
    let w = r.witness.unwrap();
    assert_eq!(w, sv(&[&[0, 1], &[1, 0]]));
    assert!(cl_dir_member(&BaseCone::Psd(2), &r.x, &w).unwrap());
    assert!(!dir_member(&BaseCone::Psd(2), &r.x, &w).unwrap());
}

/// Order 3 with a rank-one ray in the kernel block: `M*(X) = (x11, 2 x12 + x33)`
/// takes `(ε, -1)` for every `ε > 0` but never `(0, -1)`.
#[test]
fn order_three_rank_one_ray() {
    let m = Metric::sym(3);
    let y = SymMat::unit(3, 0, 1).add(&SymMat::unit(3, 2, 2));
    let lm = LinMap::new(&m, vec![SymMat::unit(3, 0, 0).to_svec(), y.to_svec()]).unwrap();
    for k in 1..10i64 {
        let eps = rat(1, k);
        let x = SymMat::from_rows(&[
            vec![eps.clone(), rat(-1, 2), Rat::zero()],
            vec![rat(-1, 2), int(1) / (int(4) * &eps), Rat::zero()],
            vec![Rat::zero(), Rat::zero(), Rat::zero()],
        ])
        .unwrap();
        assert!(psd_check(&x).is_psd());
        assert_eq!(lm.adjoint(&x.to_svec()), QVec::new(vec![eps, int(-1)]));
    }
    let r = image_dual_closed(&BaseCone::Psd(3), &lm).unwrap();
    assert_eq!(r.x, SymMat::unit(3, 0, 0).to_svec());
    assert!(!r.closed);
    let w = r.witness.unwrap();
    assert!(lm.range.contains(&w));

    // diagonal coordinates only: image is the closed quadrant
    let diag = LinMap::new(&m, vec![SymMat::unit(3, 0, 0).to_svec(), SymMat::unit(3, 1, 1).to_svec()]).unwrap();
    assert!(image_dual_closed(&BaseCone::Psd(3), &diag).unwrap().closed);
    assert!(!diag.adjoint(&SymMat::identity(3).to_svec()).entries().iter().any(|v| v.is_negative()));
}
