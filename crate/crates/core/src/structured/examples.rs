//! The two worked examples: `PSD(2) + cone M`, and `PSD(3) ∩ {M . X >= 0}`.

use num_traits::Signed;

use super::expr::{Closedness, ConeExpr};
use super::inventory::{DualFace, FaceSet, StructuredCone};
use crate::error::Result;
use crate::linalg::{Metric, QVec, Subspace, SymMat};
use crate::polyhedral::PolyCone;

fn e(n: usize, i: usize, j: usize) -> SymMat {
    SymMat::unit(n, i, j)
}

fn ww(w: &[i64]) -> SymMat {
    SymMat::outer(&QVec::from_i64(w))
}

#[derive(Clone, Debug)]
pub struct Example1 {
    pub cone: StructuredCone,
    /// The off-diagonal generator `[[0,1],[1,0]]`.
    pub m: SymMat,
    /// Exposes the smallest exposed face containing `G`.
    pub y: SymMat,
    /// Lies in `F*` but not in `K* + F^perp`.
    pub x: SymMat,
    pub f_perp: Subspace,
}

impl Example1 {
    /// Closed description of `K`, shipped as the closedness certificate:
    /// `x11, x22 >= 0` and either `x12 >= 0` or `x11 x22 >= x12^2`. Both
    /// pieces are closed, and membership agreement with the sum is checked
    /// by the grid tests.
    pub fn closed_description(x: &SymMat) -> bool {
        let (a, b, c) = (x.get(0, 0), x.get(0, 1), x.get(1, 1));
        !a.is_negative() && !c.is_negative() && (!b.is_negative() || a * c >= b * b)
    }
}

pub fn example1() -> Result<Example1> {
    let n = 2;
    let m = e(n, 0, 1);
    let expr = ConeExpr::sum(vec![ConeExpr::psd(n), ConeExpr::ray(m.clone())])?
        .with_closedness(Closedness::Proven);
    let (dual_expr, overlap) = expr.dual_expr(&[])?;
    let form = expr.lower()?;
    let dual = dual_expr.lower()?;
    let mut cone = StructuredCone {
        name: "example1".into(),
        n,
        expr,
        form,
        dual_expr,
        dual: dual.clone(),
        overlap,
        faces: vec![],
    };
    cone.push_face("0", vec![e(n, 0, 0), e(n, 1, 1), e(n, 0, 1)], None)?;
    cone.push_face("G", vec![e(n, 1, 1), e(n, 0, 1)], None)?;
    cone.push_face("G'", vec![e(n, 0, 0), e(n, 0, 1)], None)?;
    cone.push_face("M", vec![e(n, 0, 0), e(n, 1, 1)], None)?;
    cone.push_face("V", vec![ww(&[1, 1])], None)?;
    cone.push_face("F", vec![e(n, 1, 1)], None)?;
    cone.push_face("F'", vec![e(n, 0, 0)], None)?;
    cone.push_face("K", vec![], Some((FaceSet::Form(dual), vec![], None)))?;
    let f_perp = cone.face("F").expect("pushed").perp.clone();
    Ok(Example1 {
        cone,
        y: e(n, 1, 1),
        x: m.clone(),
        m,
        f_perp,
    })
}

#[derive(Clone, Debug)]
pub struct Example2 {
    pub cone: StructuredCone,
    pub m: SymMat,
    /// `diag(0,1,0)`, in the relative interior of `H`.
    pub y: SymMat,
    /// `E11`, in the relative interior of `F ∩ H^perp`.
    pub z: SymMat,
    /// `H + cone M`.
    pub h_plus_m: FaceSet,
}

/// Faces of `F* = {X : X[01,01] PSD} + cone M`. Modulo `F^perp` this is the
/// first example's cone, whose rank-one faces `cone vv^T` with
/// `v1 v2 < 0` form a one-parameter family; `v = (1,-1)` represents it.
fn fstar_faces(lines: &[QVec]) -> Result<Vec<DualFace>> {
    let n = 3;
    let metric = Metric::sym(n);
    let m = e(n, 0, 1);
    let specs: Vec<(&str, Vec<SymMat>, Vec<SymMat>, bool, bool)> = vec![
        ("Fperp", vec![], vec![e(n, 0, 0), e(n, 1, 1), e(n, 0, 1)], false, true),
        ("H11", vec![e(n, 0, 0)], vec![e(n, 1, 1), e(n, 0, 1)], true, false),
        ("H", vec![e(n, 1, 1)], vec![e(n, 0, 0), e(n, 0, 1)], true, false),
        ("HM", vec![m.clone()], vec![e(n, 0, 0), e(n, 1, 1)], true, false),
        ("Hv", vec![ww(&[1, -1, 0])], vec![ww(&[1, 1, 0])], true, false),
        ("H11M", vec![e(n, 0, 0), m.clone()], vec![e(n, 1, 1)], false, false),
        ("H22M", vec![e(n, 1, 1), m.clone()], vec![e(n, 0, 0)], false, false),
    ];
    specs
        .into_iter()
        .map(|(name, gens, eqs, pm, ls)| {
            let g: Vec<QVec> = gens.iter().map(SymMat::to_svec).collect();
            let set = PolyCone::from_generators(&metric, &g, lines)?;
            let ri = SymMat::from_svec(n, &set.ri_point()).expect("packed length");
            Ok(DualFace {
                name: name.into(),
                eqs,
                set: FaceSet::Poly(set),
                ri_point: ri,
                properly_minimal: pm,
                lspace: ls,
            })
        })
        .collect()
}

pub fn example2() -> Result<Example2> {
    let n = 3;
    let m = e(n, 0, 1);
    let expr = ConeExpr::intersect(vec![ConeExpr::psd(n), ConeExpr::halfspace(m.clone())])?;
    let (dual_expr, overlap) = expr.dual_expr(&[])?;
    let form = expr.lower()?;
    let dual = dual_expr.lower()?;
    let mut cone = StructuredCone {
        name: "example2".into(),
        n,
        expr,
        form,
        dual_expr,
        dual: dual.clone(),
        overlap,
        faces: vec![],
    };
    cone.push_face("0", vec![SymMat::identity(n)], None)?;
    cone.push_face("E11", vec![e(n, 1, 1), e(n, 2, 2)], None)?;

    let f_expr = ConeExpr::intersect(vec![ConeExpr::psd_face(n, &[0, 1]), ConeExpr::halfspace(m.clone())])?;
    let (fstar_expr, f_overlap) = f_expr.dual_expr(&[])?;
    let fstar = FaceSet::Form(fstar_expr.lower()?);
    // F^perp: matrices with zero upper-left 2x2 block
    let lines = vec![e(n, 0, 2).to_svec(), e(n, 1, 2).to_svec(), e(n, 2, 2).to_svec()];
    let mut faces = fstar_faces(&lines)?;
    let top_ri = fstar.ri_point().expect("block interior");
    faces.push(DualFace {
        name: "Fstar".into(),
        eqs: vec![],
        set: fstar.clone(),
        ri_point: top_ri,
        properly_minimal: false,
        lspace: false,
    });
    cone.push_face("F", vec![e(n, 2, 2)], Some((fstar, faces, f_overlap)))?;
    cone.push_face("K", vec![], Some((FaceSet::Form(dual), vec![], None)))?;

    let metric = Metric::sym(n);
    let h_plus_m = FaceSet::Poly(PolyCone::from_generators(
        &metric,
        &[e(n, 1, 1).to_svec(), m.to_svec()],
        &lines,
    )?);
    Ok(Example2 {
        cone,
        y: e(n, 1, 1),
        z: e(n, 0, 0),
        m,
        h_plus_m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structured::inventory::{smallest_exposed_face, Trivial};

    #[test]
    fn example1_inventory_is_consistent() {
        let ex = example1().unwrap();
        ex.cone.verify().unwrap();
        let g = ex.cone.face("G").unwrap();
        assert_eq!(g.trivial, None);
        assert_eq!(ex.cone.face("0").unwrap().trivial, Some(Trivial::Lspace));
        assert_eq!(ex.cone.face("K").unwrap().trivial, Some(Trivial::Whole));
        let want = Subspace::span(&Metric::sym(2), &[e(2, 1, 1).to_svec()]).unwrap();
        assert_eq!(ex.f_perp, want);
        let hull = smallest_exposed_face(&ex.cone.form, &ex.cone.dual, &g.set).unwrap();
        assert_eq!(hull.y, ex.y);
        assert_eq!(hull.is_exposed, Some(false));
        assert_eq!(hull.face.same_set(&ex.cone.face("F").unwrap().set), Some(true));
    }

    #[test]
    fn example2_inventory_is_consistent() {
        let ex = example2().unwrap();
        ex.cone.verify().unwrap();
        let f = ex.cone.face("F").unwrap();
        assert!(f.overlap.is_some());
        let h = f.dual_faces.iter().find(|h| h.name == "H").unwrap();
        assert_eq!(h.ri_point, ex.y);
        let fform = ex.cone.face("F").unwrap().set.to_form();
        let hull = smallest_exposed_face(&f.dual.to_form(), &fform, &h.set).unwrap();
        assert_eq!(hull.y, ex.z);
        assert_eq!(hull.is_exposed, Some(false));
        assert_eq!(hull.face.same_set(&ex.h_plus_m), Some(true));
    }
}
