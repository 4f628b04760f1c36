//! Structured cones with an explicit inventory of faces.
//!
//! Face enumeration for PSD-based cones is not attempted. Every face in an
//! inventory is given by equations `N . X = 0` cutting it out of the cone,
//! and is checked with the additive face test. Duals of polyhedral faces
//! and their face lattices are computed; the others are shipped with the
//! inventory and checked the same way.

use super::expr::{ConeExpr, RiOverlap};
use super::forcing::{additive_face_test, restrict_coords};
use super::form::{Membership, SumForm};
use crate::error::{Error, Result};
use crate::linalg::{Metric, QVec, Subspace, SymMat};
use crate::polyhedral::PolyCone;

/// A set that is either polyhedral or a sum form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FaceSet {
    Poly(PolyCone),
    Form(SumForm),
}

fn mat(n: usize, v: &QVec) -> SymMat {
    SymMat::from_svec(n, v).expect("packed length")
}

impl FaceSet {
    /// Polyhedral when the form allows it.
    pub fn from_form(f: SumForm) -> Self {
        match f.to_poly() {
            Some(p) => FaceSet::Poly(p),
            None => FaceSet::Form(f),
        }
    }

    pub fn order(&self) -> usize {
        match self {
            FaceSet::Poly(p) => crate::linalg::order_of_packed(p.ambient_dim()),
            FaceSet::Form(f) => f.order(),
        }
    }

    pub fn to_form(&self) -> SumForm {
        match self {
            FaceSet::Poly(p) => SumForm::from_poly(self.order(), p),
            FaceSet::Form(f) => f.clone(),
        }
    }

    pub fn as_poly(&self) -> Option<&PolyCone> {
        match self {
            FaceSet::Poly(p) => Some(p),
            FaceSet::Form(_) => None,
        }
    }

    pub fn member(&self, x: &SymMat) -> Result<bool> {
        match self {
            FaceSet::Poly(p) => p.contains(&x.to_svec()),
            FaceSet::Form(f) => Ok(f.member(x)?.is_in()),
        }
    }

    pub fn ri_point(&self) -> Option<SymMat> {
        match self {
            FaceSet::Poly(p) => Some(mat(self.order(), &p.ri_point())),
            FaceSet::Form(f) => f.ri_point(),
        }
    }

    /// Members summing to a relative interior point.
    pub fn ri_parts(&self) -> Option<Vec<SymMat>> {
        match self {
            FaceSet::Poly(p) => Some(p.generators().iter().map(|g| mat(self.order(), g)).collect()),
            FaceSet::Form(f) => f.ri_parts(),
        }
    }

    /// `None` when no exact test is available.
    pub fn ri_member(&self, x: &SymMat) -> Option<bool> {
        match self {
            FaceSet::Poly(p) => p.ri_member(&x.to_svec()).ok(),
            FaceSet::Form(f) => f.ri_member(x),
        }
    }

    pub fn span(&self) -> Option<Subspace> {
        match self {
            FaceSet::Poly(p) => Some(p.lin_span()),
            FaceSet::Form(f) => f.span(),
        }
    }

    /// Set equality: exact for polyhedral pairs, structural for canonical
    /// forms, `None` otherwise.
    pub fn same_set(&self, other: &FaceSet) -> Option<bool> {
        match (self, other) {
            (FaceSet::Poly(a), FaceSet::Poly(b)) => Some(a == b),
            (FaceSet::Form(a), FaceSet::Form(b)) if a == b => Some(true),
            _ => None,
        }
    }

    /// Generators modulo the lineality space, for polyhedral sets.
    pub fn generators(&self) -> Option<Vec<SymMat>> {
        let n = self.order();
        self.as_poly().map(|p| p.generators().iter().map(|g| mat(n, g)).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualFace {
    pub name: String,
    /// Equations cutting the face out of `F*`, when it is shipped rather
    /// than computed.
    pub eqs: Vec<SymMat>,
    pub set: FaceSet,
    pub ri_point: SymMat,
    pub properly_minimal: bool,
    pub lspace: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Trivial {
    Lspace,
    Whole,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvFace {
    pub name: String,
    pub eqs: Vec<SymMat>,
    pub set: FaceSet,
    /// `F^perp`.
    pub perp: Subspace,
    /// `F*`.
    pub dual: FaceSet,
    pub dual_faces: Vec<DualFace>,
    pub trivial: Option<Trivial>,
    /// Intersection certificate for `F*` when `F` is an intersection.
    pub overlap: Option<RiOverlap>,
}

impl InvFace {
    pub fn perp_mats(&self) -> Vec<SymMat> {
        let n = self.set.order();
        self.perp.basis().iter().map(|v| mat(n, v)).collect()
    }

    pub fn properly_minimal(&self) -> impl Iterator<Item = &DualFace> {
        self.dual_faces.iter().filter(|h| h.properly_minimal)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuredCone {
    pub name: String,
    pub n: usize,
    pub expr: ConeExpr,
    pub form: SumForm,
    pub dual_expr: ConeExpr,
    pub dual: SumForm,
    pub overlap: Option<RiOverlap>,
    pub faces: Vec<InvFace>,
}

/// Dual faces of a polyhedral `F*`, read off its face lattice.
pub fn lattice_dual_faces(n: usize, fstar: &PolyCone) -> Result<Vec<DualFace>> {
    let l = fstar.face_lattice()?;
    let minimal: Vec<usize> = l.covers[l.bottom].clone();
    Ok(l.faces
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let set = fstar.face_cone(f);
            DualFace {
                name: format!("H{i}"),
                eqs: vec![],
                ri_point: mat(n, &set.ri_point()),
                set: FaceSet::Poly(set),
                properly_minimal: minimal.contains(&i),
                lspace: i == l.bottom,
            }
        })
        .collect())
}

impl StructuredCone {
    /// Adds the face `K ∩ {N . X = 0}`; its dual is computed when the face
    /// is polyhedral and must be supplied otherwise.
    pub fn push_face(
        &mut self,
        name: &str,
        eqs: Vec<SymMat>,
        shipped_dual: Option<(FaceSet, Vec<DualFace>, Option<RiOverlap>)>,
    ) -> Result<()> {
        let n = self.n;
        let set = FaceSet::from_form(restrict_coords(&self.form, &eqs)?);
        let span = set
            .span()
            .ok_or_else(|| Error::Undecided(format!("span of face {name}")))?;
        let perp = span.orth_complement();
        let (dual, dual_faces, overlap) = match (&set, shipped_dual) {
            (_, Some(d)) => d,
            (FaceSet::Poly(p), None) => {
                let d = p.dual();
                let faces = lattice_dual_faces(n, &d)?;
                (FaceSet::Poly(d), faces, None)
            }
            (FaceSet::Form(_), None) => {
                return Err(Error::Unsupported(format!("dual of non-polyhedral face {name}")))
            }
        };
        let full = Subspace::full(&Metric::sym(n));
        let trivial = if span == full || eqs.is_empty() {
            Some(Trivial::Whole)
        } else if set.as_poly().is_some_and(|p| p.generators().is_empty()) {
            Some(Trivial::Lspace)
        } else {
            None
        };
        self.faces.push(InvFace {
            name: name.to_string(),
            eqs,
            set,
            perp,
            dual,
            dual_faces,
            trivial,
            overlap,
        });
        Ok(())
    }

    pub fn face(&self, name: &str) -> Option<&InvFace> {
        self.faces.iter().find(|f| f.name == name)
    }

    /// `K* + F^perp`.
    pub fn dual_plus_perp(&self, f: &InvFace) -> SumForm {
        self.dual.with_lines(&f.perp_mats())
    }

    /// Consistency checks on the inventory: every face passes the additive
    /// face test; shipped dual faces are faces of `F*` cut out by their
    /// equations, contain their relative interior point, and the lineality
    /// face equals `F^perp`.
    pub fn verify(&self) -> Result<()> {
        let breach = |m: String| Err(Error::InvariantBreach(m));
        for f in &self.faces {
            additive_face_test(&self.form, &f.eqs)?;
            let fstar = f.dual.to_form();
            for h in &f.dual_faces {
                if !h.eqs.is_empty() {
                    additive_face_test(&fstar, &h.eqs)?;
                    let cut = FaceSet::from_form(restrict_coords(&fstar, &h.eqs)?);
                    if cut.same_set(&h.set) != Some(true) {
                        return breach(format!("dual face {} of {} differs from its equations", h.name, f.name));
                    }
                }
                if h.set.ri_member(&h.ri_point) == Some(false) {
                    return breach(format!("point outside ri {} of {}", h.name, f.name));
                }
                if h.lspace {
                    let Some(p) = h.set.as_poly() else {
                        return breach(format!("lineality face of {} not polyhedral", f.name));
                    };
                    if !p.generators().is_empty() || p.lineality() != &f.perp {
                        return breach(format!("lineality face of {}* is not F^perp", f.name));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Smallest exposed face of `c` containing `e`, realized as `c ∩ y^perp`
/// with `y ∈ ri(c* ∩ e^perp)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExposedHull {
    /// `c* ∩ e^perp`.
    pub conjugate: FaceSet,
    pub y: SymMat,
    pub face: FaceSet,
    /// `None` when the comparison with `e` is not decidable here.
    pub is_exposed: Option<bool>,
}

pub fn smallest_exposed_face(c: &SumForm, cstar: &SumForm, e: &FaceSet) -> Result<ExposedHull> {
    let n = c.order();
    let span = e
        .span()
        .ok_or_else(|| Error::Undecided("span of the face".into()))?;
    let eqs: Vec<SymMat> = span.basis().iter().map(|v| mat(n, v)).collect();
    let conjugate = FaceSet::from_form(restrict_coords(cstar, &eqs)?);
    let parts = conjugate
        .ri_parts()
        .ok_or_else(|| Error::Undecided("relative interior point of the conjugate face".into()))?;
    let y = parts.iter().fold(SymMat::zero(n), |acc, p| acc.add(p));
    // every part lies in c*, so c ∩ y^perp is cut out by all parts at once
    let face = match restrict_coords(c, &parts) {
        Ok(f) => FaceSet::from_form(f),
        Err(Error::Undecided(_)) => FaceSet::from_form(c.exposed_face(&y)?),
        Err(e) => return Err(e),
    };
    let is_exposed = face.same_set(e);
    Ok(ExposedHull {
        conjugate,
        y,
        face,
        is_exposed,
    })
}

/// Membership of `x` in a sum form, `Undecided` propagated as `None`.
pub fn member_verdict(f: &SumForm, x: &SymMat) -> Result<Option<Membership>> {
    match f.member(x) {
        Ok(m) => Ok(Some(m)),
        Err(Error::Undecided(_)) => Ok(None),
        Err(e) => Err(e),
    }
}
