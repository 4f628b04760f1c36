//! Acceptance suite: one PASS/FAIL line per criterion, with its time budget.
//! Runs without the libtest harness so the lines always reach the output.
//! Every tolerance is exact: rational equality and a wall-clock ceiling.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use nicecone::certify::{poly, structured as cert};
use nicecone::closedness::{
    cl_dir_member, closure_perturbation, dir_epsilon, dir_member, image_dual_closed, BaseCone, LinMap,
};
use nicecone::linalg::{int, rat, Metric, QVec, Rat};
use nicecone::structured::{
    additive_face_test, example1, example2, member_verdict, smallest_exposed_face, FaceSet,
};
use nicecone::{psd_check, PolyCone, SymMat};
use nicecone_cli::format;
use nicecone_cli::paper::rational_grid;
use nicecone_cli::search::{self, random_polyhedral, trial_rng, Family, SearchConfig};
use num_traits::{Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Nice/exposed verdicts collected from every suite, for the alarm check.
type Verdicts = Vec<(String, Option<bool>, Option<bool>)>;

// ---- independent oracles -------------------------------------------------

/// 2x2 PSD by principal minors.
fn psd2(a: &Rat, b: &Rat, c: &Rat) -> bool {
    !a.is_negative() && !c.is_negative() && a * c >= b * b
}

/// `X ∈ PSD(2) + cone [[0,1],[1,0]]`: some `t >= 0` makes `X - tM` PSD;
/// for `b >= 0` take `t = b`, otherwise `t = 0` is best.
fn in_k1(a: &Rat, b: &Rat, c: &Rat) -> bool {
    if b.is_negative() {
        psd2(a, b, c)
    } else {
        !a.is_negative() && !c.is_negative()
    }
}

fn m2(a: &Rat, b: &Rat, c: &Rat) -> SymMat {
    SymMat::from_rows(&[vec![a.clone(), b.clone()], vec![b.clone(), c.clone()]]).unwrap()
}

fn random_psd(rng: &mut ChaCha8Rng, n: usize, rank: usize) -> SymMat {
    (0..rank).fold(SymMat::zero(n), |acc, _| {
        let w = QVec::new((0..n).map(|_| int(rng.gen_range(-2..=2))).collect());
        acc.add(&SymMat::outer(&w))
    })
}

fn random_sym(rng: &mut ChaCha8Rng, n: usize, b: i64) -> SymMat {
    let mut m = SymMat::zero(n);
    for i in 0..n {
        for j in i..n {
            m.set(i, j, int(rng.gen_range(-b..=b)));
        }
    }
    m
}

fn is_psd(x: &SymMat) -> bool {
    psd_check(x).is_psd()
}

// ---- criterion 1 -----------------------------------------------------------

fn criterion1(v: &mut Verdicts) -> String {
    let ex = example1().unwrap();
    let cone = &ex.cone;
    let y = SymMat::from_i64(&[&[0, 0], &[0, 1]]);
    let x = SymMat::from_i64(&[&[0, 1], &[1, 0]]);
    assert_eq!(ex.y, y);
    assert_eq!(ex.x, x);

    let g = cone.face("G").unwrap();
    let f = cone.face("F").unwrap();
    let hull_g = smallest_exposed_face(&cone.form, &cone.dual, &g.set).unwrap();
    let hull_f = smallest_exposed_face(&cone.form, &cone.dual, &f.set).unwrap();

    let grid = rational_grid(4, 3);
    let mut points = 0;
    for a in &grid {
        for b in &grid {
            for c in &grid {
                let m = m2(a, b, c);
                let in_kstar = psd2(a, b, c) && !b.is_negative();
                let got = member_verdict(&cone.dual, &m).unwrap().map(|r| r.is_in());
                assert_eq!(got, Some(in_kstar), "K* at {a} {b} {c}");
                // K* ∩ G^perp (x11 = 0) and K* ∩ F^perp (x11 = x12 = 0) are both cone Y
                let ray_y = a.is_zero() && b.is_zero() && !c.is_negative();
                assert_eq!(in_kstar && a.is_zero(), ray_y);
                assert_eq!(in_kstar && a.is_zero() && b.is_zero(), ray_y);
                // K ∩ Y^perp is F = cone{E11, M}: x22 = 0, x11 >= 0, x12 >= 0
                let in_f = c.is_zero() && !a.is_negative() && !b.is_negative();
                assert_eq!(in_k1(a, b, c) && c.is_zero(), in_f);
                points += 1;
            }
        }
    }
    assert_eq!(points, 37 * 37 * 37);
    // the same sets, compared exactly as canonical cones
    let metric = Metric::sym(2);
    let cone_y = FaceSet::Poly(PolyCone::from_generators(&metric, &[y.to_svec()], &[]).unwrap());
    let face_f = FaceSet::Poly(PolyCone::from_generators(&metric, &[SymMat::unit(2, 0, 0).to_svec(), x.to_svec()], &[]).unwrap());
    assert_eq!(hull_g.conjugate, cone_y);
    assert_eq!(hull_f.conjugate, cone_y);
    assert_eq!(hull_g.face, face_f);
    assert_eq!(hull_g.y, y);
    assert_eq!(hull_g.is_exposed, Some(false));
    assert_eq!(hull_g.face.same_set(&f.set), Some(true));

    let exposed = cert::is_facially_exposed(cone).unwrap();
    assert_eq!(exposed.exposed, Some(false));
    let w = exposed.witness.as_ref().unwrap();
    assert_eq!(w.y, y.to_svec());

    let nice = cert::is_nice(cone).unwrap();
    assert_eq!(nice.nice, Some(false));
    let rec = nice.failing_face().unwrap();
    assert_eq!(rec.face, "F");
    assert_eq!(rec.witness.as_ref(), Some(&x.to_svec()));
    assert!(rec.conditions.iter().all(|c| c.verdict == Some(false)));
    // X ∈ F* = {x11 >= 0, x12 >= 0}
    assert!(f.dual.member(&x).unwrap());
    // X - S ∈ F^perp = span{E22} leaves S(t) = [[0,1],[1,-t]]: zero corner,
    // nonzero off-diagonal, never PSD for any t
    for t in &grid {
        let s = m2(&int(0), &int(1), &-t);
        assert!(!psd2(s.get(0, 0), s.get(0, 1), s.get(1, 1)));
    }
    let sum = cone.dual_plus_perp(f);
    assert_eq!(member_verdict(&sum, &x).unwrap().map(|m| m.is_in()), Some(false));
    let wit = cert::nonclosedness_witness(cone, "G").unwrap();
    assert_eq!(wit.point, x.to_svec());
    v.push(("example1".into(), nice.nice, exposed.exposed));
    format!("{points} grid points, witness X = [[0,1],[1,0]]")
}

// ---- criterion 2 -----------------------------------------------------------

fn criterion2(v: &mut Verdicts) -> String {
    let ex = example2().unwrap();
    let cone = &ex.cone;
    let n = 3;
    let metric = Metric::sym(n);
    let m = SymMat::from_i64(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 0]]);
    assert_eq!(ex.m, m);
    let f = cone.face("F").unwrap();

    // ri F1 ∩ ri F2: PD upper-left block, zero elsewhere, M . X > 0
    let p = &f.overlap.as_ref().unwrap().point;
    assert!(p.get(0, 0).is_positive() && (p.get(0, 0) * p.get(1, 1) - p.get(0, 1) * p.get(0, 1)).is_positive());
    assert!((0..n).all(|j| p.get(2, j).is_zero()));
    assert!(p.inner(&m).unwrap().is_positive());

    let h = f.dual_faces.iter().find(|h| h.name == "H").unwrap();
    // H = {x11 = x12 = 0, x22 >= 0}
    let e = |i, j| SymMat::unit(n, i, j).to_svec();
    let fperp = [e(0, 2), e(1, 2), e(2, 2)];
    let want_h = PolyCone::from_generators(&metric, &[e(1, 1)], &fperp).unwrap();
    assert_eq!(h.set, FaceSet::Poly(want_h.clone()));
    assert!(additive_face_test(&f.dual.to_form(), &h.eqs).is_ok());

    // a ray plus F^perp has exactly two faces: F^perp and itself
    assert_eq!(want_h.generators().len(), 1);
    assert!(h.properly_minimal);
    let mut inside = vec![];
    for d in &f.dual_faces {
        if let FaceSet::Poly(ds) = &d.set {
            let sub = ds.generators().iter().all(|g| want_h.contains(g).unwrap())
                && ds.lineality().basis().iter().all(|l| want_h.lin_span().contains(l));
            if sub && d.name != "H" {
                inside.push(d.name.as_str());
            }
        }
    }
    assert_eq!(inside, ["Fperp"]);

    let y = SymMat::from_i64(&[&[0, 0, 0], &[0, 1, 0], &[0, 0, 0]]);
    let z = SymMat::unit(n, 0, 0);
    assert_eq!(h.set.ri_member(&y), Some(true));
    let hull = smallest_exposed_face(&f.dual.to_form(), &f.set.to_form(), &h.set).unwrap();
    assert_eq!(hull.y, z);
    assert_eq!(hull.is_exposed, Some(false));
    assert_eq!(hull.face.same_set(&ex.h_plus_m), Some(true));
    // M is in H + cone M but not in H (its x12 is nonzero)
    assert!(hull.face.member(&m).unwrap());
    assert!(!h.set.member(&m).unwrap());

    let nice = cert::is_nice(cone).unwrap();
    let exposed = cert::is_facially_exposed(cone).unwrap();
    assert_eq!(nice.nice, Some(true));
    assert_eq!(exposed.exposed, Some(true));
    v.push(("example2".into(), nice.nice, exposed.exposed));
    format!("{} inventory faces, H properly minimal and not exposed", cone.faces.len())
}

// ---- criterion 3 -----------------------------------------------------------

fn criterion3(v: &mut Verdicts) -> String {
    let cones = 200;
    let mut faces_total = 0;
    let mut pairs = 0;
    for i in 0..cones {
        let k = random_polyhedral(&mut trial_rng(2024, i), 5, 8, 5);
        assert!(k.ambient_dim() <= 5 && k.generators().len() <= 8);
        let kd = k.dual();
        assert_eq!(kd.dual(), k, "dual involution, cone {i}");
        let lat = k.face_lattice().unwrap();
        let exposed = poly::is_facially_exposed(&k).unwrap();
        assert_eq!(exposed.exposed, Some(true));
        let nice = poly::is_nice(&k).unwrap();
        assert_eq!(nice.nice, Some(true));
        for (f, rec) in lat.faces.iter().zip(&nice.faces) {
            // exposing normal: in K*, and tight exactly on the face generators
            let ex = k.exposure(f);
            assert!(k.generators().iter().all(|g| !ex.normal.dot(g).is_negative()));
            assert!(k.lineality().basis().iter().all(|l| ex.normal.dot(l).is_zero()));
            let tight: Vec<usize> = (0..k.generators().len())
                .filter(|&g| ex.normal.dot(&k.generators()[g]).is_zero())
                .collect();
            assert_eq!(tight, f.generators, "cone {i} face exposure");
            // F* = K* + F^perp
            assert_eq!(k.face_cone(f).dual(), kd.add_subspace(&k.face_perp(f)).unwrap());
            if !rec.trivial {
                assert_eq!(rec.conditions.len(), 10);
                assert!(rec.conditions.iter().all(|c| c.verdict == Some(true)), "cone {i} {}", rec.face);
                assert!(!rec.xfh.is_empty());
                for x in &rec.xfh {
                    assert_eq!(x.in_projection, Some(true));
                    pairs += 1;
                }
            }
        }
        assert!(poly::lattice_telescopes(&k).unwrap(), "cone {i} chains");
        faces_total += lat.faces.len();
        v.push((format!("polyhedral #{i}"), nice.nice, exposed.exposed));
    }
    format!("{cones} cones, {faces_total} faces, {pairs} (F, H) pairs")
}

// ---- criterion 4 -----------------------------------------------------------

fn criterion4(v: &mut Verdicts) -> String {
    for family in [Family::default(), Family::Structured] {
        let r = search::run(&SearchConfig {
            trials: 40,
            seed: 99,
            family,
        })
        .unwrap();
        assert_eq!(r.alarms, 0);
        assert_eq!(r.json["counts"]["nice_not_exposed"], 0);
        for c in r.json["candidates"].as_array().unwrap() {
            v.push((format!("candidate {}", c["trial"]), Some(false), Some(true)));
        }
    }
    let out = run_cli(&["search", "--trials", "10", "--seed", "5", "--family", "structured"]);
    assert_eq!(out.status.code(), Some(0));
    let alarms: Vec<_> = v
        .iter()
        .filter(|(_, nice, exposed)| *nice == Some(true) && *exposed == Some(false))
        .map(|(name, ..)| name.clone())
        .collect();
    assert!(alarms.is_empty(), "nice but not exposed: {alarms:?}");
    format!("{} verdicts collected, no cone nice but not facially exposed", v.len())
}

// ---- criterion 5 -----------------------------------------------------------

fn criterion5() -> String {
    let mut rng = trial_rng(77, 0);
    let e = |d| Metric::euclidean(d);
    // orthant images
    for _ in 0..100 {
        let d = rng.gen_range(2..=4);
        let orthant = PolyCone::from_generators(
            &e(d),
            &(0..d)
                .map(|i| QVec::new((0..d).map(|j| int((i == j) as i64)).collect()))
                .collect::<Vec<_>>(),
            &[],
        )
        .unwrap();
        let m = rng.gen_range(1..=3);
        let cols = (0..m)
            .map(|_| QVec::new((0..d).map(|_| int(rng.gen_range(-3..=3))).collect()))
            .collect();
        let lm = LinMap::new(&e(d), cols).unwrap();
        let r = image_dual_closed(&BaseCone::Polyhedral(orthant), &lm).unwrap();
        assert!(r.closed && r.witness.is_none());
    }
    // Slater: the range contains the identity
    let s2 = Metric::sym(2);
    for _ in 0..20 {
        let extra = random_sym(&mut rng, 2, 3);
        let lm = LinMap::new(&s2, vec![SymMat::identity(2).to_svec(), extra.to_svec()]).unwrap();
        let r = image_dual_closed(&BaseCone::Psd(2), &lm).unwrap();
        assert!(r.closed, "Slater map with {extra:?}");
    }
    // (a, b) -> [[a, b], [b, 0]]: adjoint X -> (x11, 2 x12)
    let lm = LinMap::new(
        &s2,
        vec![SymMat::from_i64(&[&[1, 0], &[0, 0]]).to_svec(), SymMat::from_i64(&[&[0, 1], &[1, 0]]).to_svec()],
    )
    .unwrap();
    for k in 1..50i64 {
        // (1/k, 1) is the image of [[1/k, 1/2], [1/2, k/4]], a PSD matrix
        let x = m2(&rat(1, k), &rat(1, 2), &rat(k, 4));
        assert!(psd2(x.get(0, 0), x.get(0, 1), x.get(1, 1)));
        assert_eq!(lm.adjoint(&x.to_svec()), QVec::new(vec![rat(1, k), int(1)]));
    }
    // (0, 1) is not: x11 = 0 with x12 = 1/2 violates the 2x2 minor
    assert!(!psd2(&int(0), &rat(1, 2), &int(1000)));
    let r = image_dual_closed(&BaseCone::Psd(2), &lm).unwrap();
    assert!(!r.closed);
    let w = r.witness.clone().unwrap();
    assert!(lm.range.contains(&w));
    assert_eq!(w, lm.apply(&[int(0), int(1)]).unwrap());
    assert!(cl_dir_member(&BaseCone::Psd(2), &r.x, &w).unwrap());
    assert!(!dir_member(&BaseCone::Psd(2), &r.x, &w).unwrap());

    // dir ⊆ cl dir on random triples, with explicit ε certificates
    let mut inside = 0;
    for t in 0..500 {
        let n = if t % 2 == 0 { 2 } else { 3 };
        let rank = rng.gen_range(0..=n);
        let x = random_psd(&mut rng, n, rank);
        let y = random_sym(&mut rng, n, 2);
        let c = BaseCone::Psd(n);
        let d = dir_member(&c, &x.to_svec(), &y.to_svec()).unwrap();
        let cd = cl_dir_member(&c, &x.to_svec(), &y.to_svec()).unwrap();
        assert!(!d || cd, "dir ⊄ cl dir at {x:?} {y:?}");
        if d {
            inside += 1;
            let eps = dir_epsilon(&c, &x.to_svec(), &y.to_svec()).unwrap().unwrap();
            assert!(is_psd(&x.add(&y.scale(&eps))));
        }
    }
    assert!(inside > 0);

    // polyhedral dir = cl dir
    for t in 0..200 {
        let k = random_polyhedral(&mut trial_rng(78, t), 4, 6, 3);
        let d = k.ambient_dim();
        let x = k
            .generators()
            .iter()
            .fold(QVec::zeros(d), |acc, g| acc.axpy(&int(rng.gen_range(0..=1)), g));
        let y = QVec::new((0..d).map(|_| int(rng.gen_range(-3..=3))).collect());
        let c = BaseCone::Polyhedral(k.clone());
        let dm = dir_member(&c, &x, &y).unwrap();
        assert_eq!(dm, cl_dir_member(&c, &x, &y).unwrap());
        if dm {
            let eps = dir_epsilon(&c, &x, &y).unwrap().unwrap();
            assert!(k.contains(&x.axpy(&eps, &y)).unwrap());
        }
    }

    // δ-perturbation: y + δ K K^T ∈ dir for each δ, and -> y as δ -> 0
    let mut checked = 0;
    while checked < 200 {
        let n = if checked % 2 == 0 { 2 } else { 3 };
        let rank = rng.gen_range(0..n);
        let x = random_psd(&mut rng, n, rank);
        let y = random_sym(&mut rng, n, 2);
        let c = BaseCone::Psd(n);
        if !cl_dir_member(&c, &x.to_svec(), &y.to_svec()).unwrap() {
            continue;
        }
        let one = closure_perturbation(n, &x.to_svec(), &y.to_svec(), &int(1)).unwrap();
        let step = one.sub(&y.to_svec());
        for delta in [int(1), rat(1, 10), rat(1, 1000)] {
            let z = closure_perturbation(n, &x.to_svec(), &y.to_svec(), &delta).unwrap();
            assert_eq!(z, y.to_svec().axpy(&delta, &step));
            assert!(dir_member(&c, &x.to_svec(), &z).unwrap());
            let eps = dir_epsilon(&c, &x.to_svec(), &z).unwrap().unwrap();
            let zm = SymMat::from_svec(n, &z).unwrap();
            assert!(is_psd(&x.add(&zm.scale(&eps))));
        }
        checked += 1;
    }
    format!("100 orthant maps, 500 triples ({inside} in dir), 200 polyhedral triples, 200 perturbations")
}

// ---- criterion 6 -----------------------------------------------------------

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_nicecone")
}

fn run_cli(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("run nicecone")
}

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

fn criterion6() -> String {
    let mut files: Vec<PathBuf> = std::fs::read_dir(corpus())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    assert!(files.len() >= 8);
    for p in &files {
        let text = std::fs::read_to_string(p).unwrap();
        let parsed = format::parse(&text).unwrap();
        assert_eq!(format::serialize(&parsed), text, "{}", p.display());
        assert_eq!(format::parse(&format::serialize(&parsed)).unwrap(), parsed);
        let out = run_cli(&["canon", p.to_str().unwrap()]);
        assert_eq!(String::from_utf8(out.stdout).unwrap(), text);
    }

    let out = run_cli(&["paper-examples"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));

    let args = ["search", "--trials", "24", "--seed", "42"];
    let a = run_cli(&args);
    let b = run_cli(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let other = run_cli(&["search", "--trials", "24", "--seed", "43"]);
    assert_ne!(a.stdout, other.stdout);

    // exit codes: 0 complete, 1 golden mismatch, 2 parse error, 3 unsupported
    let dir = tempfile::tempdir().unwrap();
    let orthant = corpus().join("orthant3.json");
    assert_eq!(run_cli(&["nice", orthant.to_str().unwrap()]).status.code(), Some(0));
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"space\": {\"type\": \"vec\", \"d\": 2},\n \"cone\": {\"op\": \"sum\", \"children\": []}}\n").unwrap();
    let out = run_cli(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2, column 24"));
    let psd_vec = dir.path().join("psd_vec.json");
    std::fs::write(&psd_vec, r#"{"space": {"type": "vec", "d": 3}, "cone": {"atom": "psd"}}"#).unwrap();
    assert_eq!(run_cli(&["analyze", psd_vec.to_str().unwrap()]).status.code(), Some(3));
    let gold = dir.path().join("golden");
    std::fs::create_dir(&gold).unwrap();
    let shipped = Path::new(env!("CARGO_MANIFEST_DIR")).join("golden");
    for name in ["example1.json", "example2.json"] {
        std::fs::copy(shipped.join(name), gold.join(name)).unwrap();
    }
    let corrupt = std::fs::read_to_string(gold.join("example2.json")).unwrap().replacen("true", "false", 1);
    std::fs::write(gold.join("example2.json"), corrupt).unwrap();
    let out = run_cli(&["paper-examples", "--golden", gold.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("example2.json"));
    format!("{} corpus files round-trip, goldens reproduced, exit codes 0/1/2/3", files.len())
}

// ---- driver ----------------------------------------------------------------

fn main() {
    let mut verdicts: Verdicts = vec![];
    type Crit<'a> = Box<dyn FnOnce(&mut Verdicts) -> String + 'a>;
    let criteria: Vec<(u32, &str, Duration, Crit)> = vec![
        (1, "first example reproduced", Duration::from_secs(1), Box::new(criterion1)),
        (2, "second example reproduced", Duration::from_secs(1), Box::new(criterion2)),
        (3, "polyhedral property suite", Duration::from_secs(120), Box::new(criterion3)),
        (4, "nice implies facially exposed everywhere", Duration::from_secs(120), Box::new(criterion4)),
        (5, "closedness suite", Duration::from_secs(10), Box::new(|_: &mut Verdicts| criterion5())),
        (6, "command-line contract", Duration::from_secs(120), Box::new(|_: &mut Verdicts| criterion6())),
    ];
    let mut failed = 0;
    for (n, title, limit, f) in criteria {
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(|| f(&mut verdicts)));
        let secs = start.elapsed().as_secs_f64();
        let (ok, detail) = match res {
            Ok(d) if start.elapsed() <= limit => (true, d),
            Ok(d) => (false, format!("{d}; over the time budget")),
            Err(e) => {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                (false, msg)
            }
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {n} ({title}): {} in {secs:.2}s (limit {}s): {detail}",
            if ok { "PASS" } else { "FAIL" },
            limit.as_secs()
        );
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
