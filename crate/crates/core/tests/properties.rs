use nicecone::linalg::{fmt_rat, int, parse_rat, rat, Metric, QVec};
use nicecone::{psd_check, PolyCone, PsdVerdict, SymMat};
use proptest::prelude::*;

fn cone_strategy() -> impl Strategy<Value = PolyCone> {
    (2usize..=3).prop_flat_map(|d| {
        prop::collection::vec(prop::collection::vec(-3i64..=3, d), 1..=5).prop_map(move |gens| {
            let g: Vec<QVec> = gens.iter().map(|v| QVec::from_i64(v)).filter(|v| !v.is_zero()).collect();
            PolyCone::from_generators(&Metric::euclidean(d), &g, &[]).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rationals_round_trip(p in -1000i64..1000, q in 1i64..100) {
        let r = rat(p, q);
        prop_assert_eq!(parse_rat(&fmt_rat(&r)), Some(r));
    }

    #[test]
    fn dual_is_an_involution(k in cone_strategy()) {
        prop_assert_eq!(k.dual().dual(), k);
    }

    #[test]
    fn every_face_dual_is_dual_plus_perp(k in cone_strategy()) {
        let kd = k.dual();
        for f in &k.face_lattice().unwrap().faces {
            prop_assert_eq!(k.face_cone(f).dual(), kd.add_subspace(&k.face_perp(f)).unwrap());
        }
    }

    #[test]
    fn psd_verdicts_certify_themselves(entries in prop::collection::vec(-3i64..=3, 6)) {
        let mut x = SymMat::zero(3);
        let mut it = entries.into_iter();
        for i in 0..3 {
            for j in i..3 {
                x.set(i, j, int(it.next().unwrap()));
            }
        }
        match psd_check(&x) {
            PsdVerdict::Psd { factor, .. } => prop_assert_eq!(factor.reconstruct(3), x),
            PsdVerdict::NotPsd { witness } => prop_assert!(x.quad(&witness) < int(0)),
        }
    }
}
