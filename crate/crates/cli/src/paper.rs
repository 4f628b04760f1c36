//! Reproduction of the two worked examples: named assertions, then the
//! certificate bundles byte-compared against the shipped golden files.

use std::path::{Path, PathBuf};

use nicecone::certify::structured;
use nicecone::linalg::{psd_check, Metric, Rat};
use nicecone::structured::{
    additive_face_test, example1, example2, member_verdict, smallest_exposed_face, Closedness, FaceSet,
};
use nicecone::{PolyCone, SymMat};
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::format::Space;
use crate::report;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assertion {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GoldenStatus {
    Match,
    Mismatch { first_diff_line: usize },
    Missing,
    Blessed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenCheck {
    pub file: String,
    pub status: GoldenStatus,
}

#[derive(Clone, Debug)]
pub struct PaperReport {
    pub assertions: Vec<Assertion>,
    pub golden: Vec<GoldenCheck>,
}

impl PaperReport {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
            && self
                .golden
                .iter()
                .all(|g| matches!(g.status, GoldenStatus::Match | GoldenStatus::Blessed))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": "paper-examples",
            "passed": self.passed(),
            "assertions": self.assertions.iter().map(|a| json!({
                "name": a.name,
                "passed": a.passed,
                "detail": a.detail,
            })).collect::<Vec<_>>(),
            "golden": self.golden.iter().map(|g| json!({
                "file": g.file,
                "status": match g.status {
                    GoldenStatus::Match => "match".to_string(),
                    GoldenStatus::Mismatch { first_diff_line } => format!("mismatch at line {first_diff_line}"),
                    GoldenStatus::Missing => "missing".to_string(),
                    GoldenStatus::Blessed => "written".to_string(),
                },
            })).collect::<Vec<_>>(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for a in &self.assertions {
            let tag = if a.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{tag} {}: {}\n", a.name, a.detail));
        }
        for g in &self.golden {
            let line = match g.status {
                GoldenStatus::Match => format!("PASS golden {}", g.file),
                GoldenStatus::Blessed => format!("WROTE golden {}", g.file),
                GoldenStatus::Missing => format!("FAIL golden {}: file missing", g.file),
                GoldenStatus::Mismatch { first_diff_line } => {
                    format!("FAIL golden {}: differs from line {first_diff_line}", g.file)
                }
            };
            out.push_str(&line);
            out.push('\n');
        }
        out.push_str(if self.passed() { "all examples reproduced\n" } else { "examples NOT reproduced\n" });
        out
    }

    /// Names of failed assertions and mismatched golden files.
    pub fn failures(&self) -> Vec<String> {
        let mut v: Vec<String> = self
            .assertions
            .iter()
            .filter(|a| !a.passed)
            .map(|a| a.name.to_string())
            .collect();
        v.extend(
            self.golden
                .iter()
                .filter(|g| !matches!(g.status, GoldenStatus::Match | GoldenStatus::Blessed))
                .map(|g| g.file.clone()),
        );
        v
    }
}

pub fn default_golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("golden")
}

fn check(name: &'static str, passed: bool, detail: impl Into<String>) -> Assertion {
    Assertion {
        name,
        passed,
        detail: detail.into(),
    }
}

/// Rationals `p/q` with `q <= max_den` and `|p/q| <= bound`, sorted, distinct.
pub fn rational_grid(max_den: i64, bound: i64) -> Vec<Rat> {
    let mut v: Vec<Rat> = (1..=max_den)
        .flat_map(|q| (-bound * q..=bound * q).map(move |p| Rat::new(p.into(), q.into())))
        .collect();
    v.sort();
    v.dedup();
    v
}

fn ex1_assertions(out: &mut Vec<Assertion>) -> CliResult<Value> {
    let ex = example1()?;
    let cone = &ex.cone;
    let n = 2;

    // K* against {X PSD, x12 >= 0}
    let grid = rational_grid(4, 3);
    let mut mismatches = 0usize;
    let mut points = 0usize;
    for a in &grid {
        for b in &grid {
            for c in &grid {
                let x = SymMat::from_rows(&[vec![a.clone(), b.clone()], vec![b.clone(), c.clone()]])?;
                let want = !a.is_negative() && !c.is_negative() && a * c >= b * b && !b.is_negative();
                let got = member_verdict(&cone.dual, &x)?.map(|m| m.is_in());
                if got != Some(want) {
                    mismatches += 1;
                }
                points += 1;
            }
        }
    }
    out.push(check(
        "example1.dual_cone_grid",
        mismatches == 0,
        format!("{points} grid points, {mismatches} disagreements with PSD and x12 >= 0"),
    ));
    out.push(check(
        "example1.closed",
        cone.expr.closed == Closedness::Proven,
        "closedness certificate shipped with the construction",
    ));

    let f = cone.face("F").ok_or_else(|| CliError::Breach("example1 has no face F".into()))?;
    let g = cone.face("G").ok_or_else(|| CliError::Breach("example1 has no face G".into()))?;
    let metric = Metric::sym(n);
    let cone_e22 = FaceSet::Poly(PolyCone::from_generators(&metric, &[ex.y.to_svec()], &[])?);
    let conj_g = smallest_exposed_face(&cone.form, &cone.dual, &g.set)?;
    let conj_f = smallest_exposed_face(&cone.form, &cone.dual, &f.set)?;
    out.push(check(
        "example1.G_conjugate_equals_F_conjugate",
        conj_g.conjugate.same_set(&cone_e22) == Some(true) && conj_f.conjugate.same_set(&cone_e22) == Some(true),
        "K* meets the annihilators of G and of F in the same ray, spanned by diag(0,1)",
    ));
    out.push(check(
        "example1.smallest_exposed_face_of_G",
        conj_g.is_exposed == Some(false) && conj_g.y == ex.y && conj_g.face.same_set(&f.set) == Some(true),
        "G is not exposed; the face exposed by Y = diag(0,1) is F",
    ));
    let exposed = structured::is_facially_exposed(cone)?;
    let w = exposed.witness.as_ref();
    out.push(check(
        "example1.not_facially_exposed",
        exposed.exposed == Some(false) && w.is_some_and(|w| w.y == ex.y.to_svec()),
        "exposedness certificate is false with exposing matrix diag(0,1)",
    ));

    let nice = structured::is_nice(cone)?;
    let rec = nice.failing_face();
    let all_false = rec.is_some_and(|r| r.conditions.iter().all(|c| c.verdict == Some(false)));
    out.push(check(
        "example1.not_nice",
        nice.nice == Some(false) && rec.is_some_and(|r| r.face == "F") && all_false,
        "niceness fails at F under every equivalent condition",
    ));
    let sum = cone.dual_plus_perp(f);
    let in_fstar = f.dual.member(&ex.x)?;
    let in_sum = member_verdict(&sum, &ex.x)?.map(|m| m.is_in());
    out.push(check(
        "example1.nonclosedness_witness",
        rec.and_then(|r| r.witness.as_ref()) == Some(&ex.x.to_svec()) && in_fstar && in_sum == Some(false),
        "X = [[0,1],[1,0]] lies in F* but not in K* + F^perp",
    ));
    out.push(check(
        "example1.nice_implies_exposed",
        !(nice.nice == Some(true) && exposed.exposed == Some(false)),
        "alarm invariant",
    ));

    let space = Space::Sym { n };
    let witness = structured::nonclosedness_witness(cone, "G")?;
    Ok(json!({
        "cone": cone.name,
        "exposedness": report::exposedness(&space, &exposed),
        "niceness": report::niceness(&space, &nice, None),
        "nonclosedness": report::nonclosedness(&space, &witness),
    }))
}

fn ex2_assertions(out: &mut Vec<Assertion>) -> CliResult<Value> {
    let ex = example2()?;
    let cone = &ex.cone;
    let n = 3;
    let f = cone.face("F").ok_or_else(|| CliError::Breach("example2 has no face F".into()))?;

    // ri overlap of the two operands of F: PD upper-left block, zero elsewhere, M . X > 0
    let overlap_ok = f.overlap.as_ref().is_some_and(|o| {
        let p = &o.point;
        let block_pd = psd_check(&p.principal(&[0, 1])).rank() == Some(2);
        let outside_zero = (0..n).all(|j| p.get(2, j).is_zero());
        let strictly = p.inner(&ex.m).map(|v| v.is_positive()).unwrap_or(false);
        block_pd && outside_zero && strictly
    });
    out.push(check(
        "example2.face_dual_sum_rule",
        overlap_ok,
        "a point of ri F1 meets ri F2, so F* = F1* + F2*",
    ));

    let h = f
        .dual_faces
        .iter()
        .find(|h| h.name == "H")
        .ok_or_else(|| CliError::Breach("example2 inventory lacks H".into()))?;
    let fstar = f.dual.to_form();
    out.push(check(
        "example2.H_additive_face_test",
        additive_face_test(&fstar, &h.eqs).is_ok(),
        "H = F* cut by its equations is a face",
    ));

    let FaceSet::Poly(hset) = &h.set else {
        return Err(CliError::Breach("H is polyhedral".into()));
    };
    let mut inside = vec![];
    for d in &f.dual_faces {
        if d.name == h.name {
            continue;
        }
        if let FaceSet::Poly(ds) = &d.set {
            let gens_in = ds.generators().iter().all(|v| hset.contains(v).unwrap_or(false));
            let lines_in = ds.lineality().basis().iter().all(|v| hset.lin_span().contains(v));
            if gens_in && lines_in {
                inside.push(d.name.clone());
            }
        }
    }
    out.push(check(
        "example2.H_properly_minimal",
        h.properly_minimal && inside == ["Fperp"],
        format!("proper subfaces of H in the inventory: {inside:?}"),
    ));

    let hull = smallest_exposed_face(&fstar, &f.set.to_form(), &h.set)?;
    let strictly_larger = hull.face.same_set(&ex.h_plus_m) == Some(true) && hull.face.same_set(&h.set) == Some(false);
    out.push(check(
        "example2.H_not_exposed",
        h.set.ri_member(&ex.y) == Some(true) && hull.y == ex.z && hull.is_exposed == Some(false) && strictly_larger,
        "Y = diag(0,1,0) in ri H; Z = E11 exposes H + cone M, strictly larger than H",
    ));

    let nice = structured::is_nice(cone)?;
    let exposed = structured::is_facially_exposed(cone)?;
    out.push(check(
        "example2.nice",
        nice.nice == Some(true),
        format!("{} inventory faces certified", nice.faces.len()),
    ));
    out.push(check(
        "example2.facially_exposed",
        exposed.exposed == Some(true),
        "every inventory face is exposed",
    ));

    let space = Space::Sym { n };
    Ok(json!({
        "cone": cone.name,
        "exposedness": report::exposedness(&space, &exposed),
        "niceness": report::niceness(&space, &nice, None),
    }))
}

fn first_diff_line(a: &str, b: &str) -> usize {
    let mut la = a.lines();
    let mut lb = b.lines();
    let mut i = 1;
    loop {
        match (la.next(), lb.next()) {
            (None, None) => return i,
            (x, y) if x != y => return i,
            _ => i += 1,
        }
    }
}

/// Compare `text` against `dir/file`, or overwrite it when blessing.
fn golden(dir: &Path, file: &str, text: &str, bless: bool) -> CliResult<GoldenCheck> {
    let path = dir.join(file);
    let status = if bless {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        std::fs::write(&path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        GoldenStatus::Blessed
    } else {
        match std::fs::read_to_string(&path) {
            Err(_) => GoldenStatus::Missing,
            Ok(old) if old == text => GoldenStatus::Match,
            Ok(old) => GoldenStatus::Mismatch {
                first_diff_line: first_diff_line(&old, text),
            },
        }
    };
    Ok(GoldenCheck {
        file: file.to_string(),
        status,
    })
}

pub fn bundle_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

pub fn run(golden_dir: &Path, bless: bool) -> CliResult<PaperReport> {
    let mut assertions = vec![];
    let b1 = ex1_assertions(&mut assertions)?;
    let b2 = ex2_assertions(&mut assertions)?;
    let golden = vec![
        golden(golden_dir, "example1.json", &bundle_text(&b1), bless)?,
        golden(golden_dir, "example2.json", &bundle_text(&b2), bless)?,
    ];
    Ok(PaperReport { assertions, golden })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_has_expected_size() {
        // |p/q| <= 3 with q <= 4: 7 integers, and per unit interval the
        // fractions 1/4, 1/3, 1/2, 2/3, 3/4
        assert_eq!(rational_grid(4, 3).len(), 7 + 6 * 5);
    }

    #[test]
    fn diff_line() {
        assert_eq!(first_diff_line("a\nb\n", "a\nc\n"), 2);
        assert_eq!(first_diff_line("a\n", "a\nb\n"), 2);
    }
}
