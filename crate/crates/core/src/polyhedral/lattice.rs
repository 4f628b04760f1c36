use std::collections::{BTreeMap, VecDeque};

use super::{PolyCone, PolyFace};
use crate::error::{Error, Result};

pub const MAX_DIM: usize = 8;
pub const MAX_GENERATORS: usize = 12;

/// All faces of a polyhedral cone, sorted by dimension then generator set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceLattice {
    pub faces: Vec<PolyFace>,
    /// `covers[i]`: faces immediately above face `i`.
    pub covers: Vec<Vec<usize>>,
    pub bottom: usize,
    pub top: usize,
}

impl FaceLattice {
    pub(super) fn enumerate(c: &PolyCone) -> Result<FaceLattice> {
        if c.ambient_dim() > MAX_DIM {
            return Err(Error::CapExceeded(format!(
                "ambient dimension {} > {MAX_DIM}",
                c.ambient_dim()
            )));
        }
        if c.generators().len() > MAX_GENERATORS {
            return Err(Error::CapExceeded(format!(
                "{} generators > {MAX_GENERATORS}",
                c.generators().len()
            )));
        }
        let top = c.top_face();
        let mut seen: BTreeMap<Vec<usize>, PolyFace> = BTreeMap::new();
        let mut queue = VecDeque::from([top.clone()]);
        seen.insert(top.active.clone(), top);
        while let Some(f) = queue.pop_front() {
            for i in 0..c.inequalities().len() {
                if f.active.contains(&i) {
                    continue;
                }
                let mut act = f.active.clone();
                act.push(i);
                let g = c.face_with_active(&act);
                if !seen.contains_key(&g.active) {
                    seen.insert(g.active.clone(), g.clone());
                    queue.push_back(g);
                }
            }
        }
        let mut faces: Vec<PolyFace> = seen.into_values().collect();
        faces.sort_by(|a, b| (a.dim, &a.generators).cmp(&(b.dim, &b.generators)));

        let covers = (0..faces.len())
            .map(|i| {
                (0..faces.len())
                    .filter(|&j| faces[j].dim == faces[i].dim + 1 && is_subface(&faces[i], &faces[j]))
                    .collect()
            })
            .collect();
        Ok(FaceLattice {
            bottom: 0,
            top: faces.len() - 1,
            faces,
            covers,
        })
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn index_of(&self, f: &PolyFace) -> Option<usize> {
        self.faces.iter().position(|g| g == f)
    }

    /// Faces immediately above the lineality space.
    pub fn properly_minimal(&self) -> Vec<&PolyFace> {
        self.covers[self.bottom].iter().map(|&j| &self.faces[j]).collect()
    }

    /// Faces immediately below the whole cone.
    pub fn properly_maximal(&self) -> Vec<&PolyFace> {
        (0..self.faces.len())
            .filter(|&i| self.covers[i].contains(&self.top))
            .map(|i| &self.faces[i])
            .collect()
    }

    /// Index of the intersection of two faces.
    pub fn meet(&self, a: usize, b: usize) -> usize {
        let gens: Vec<usize> = self.faces[a]
            .generators
            .iter()
            .filter(|g| self.faces[b].generators.contains(g))
            .copied()
            .collect();
        self.faces
            .iter()
            .position(|f| f.generators == gens)
            .expect("lattice closed under meets")
    }
}

/// `a ⊆ b` (both faces of the same cone).
pub fn is_subface(a: &PolyFace, b: &PolyFace) -> bool {
    a.generators.iter().all(|g| b.generators.contains(g))
}

#[cfg(test)]
mod tests {
    use crate::linalg::{Metric, QVec};
    use crate::polyhedral::PolyCone;

    fn v(x: &[i64]) -> QVec {
        QVec::from_i64(x)
    }

    #[test]
    fn orthant_has_two_to_the_n_faces() {
        for d in 1..=4 {
            let gens: Vec<QVec> = (0..d).map(|i| QVec::unit(d, i)).collect();
            let c = PolyCone::from_generators(&Metric::euclidean(d), &gens, &[]).unwrap();
            let l = c.face_lattice().unwrap();
            assert_eq!(l.len(), 1 << d);
            assert_eq!(l.properly_minimal().len(), d);
            assert_eq!(l.properly_maximal().len(), d);
        }
    }

    #[test]
    fn halfspace_has_two_faces() {
        let c = PolyCone::from_inequalities(&Metric::euclidean(3), &[v(&[0, 1, 1])], &[]).unwrap();
        let l = c.face_lattice().unwrap();
        assert_eq!(l.len(), 2);
        assert_eq!(l.properly_minimal(), vec![&l.faces[l.top]]);
        assert_eq!(l.properly_maximal(), vec![&l.faces[l.bottom]]);
        assert_eq!(l.faces[l.bottom].dim, 2);
    }

    #[test]
    fn caps_are_enforced() {
        let d = 9;
        let gens: Vec<QVec> = (0..d).map(|i| QVec::unit(d, i)).collect();
        let c = PolyCone::from_generators(&Metric::euclidean(d), &gens, &[]).unwrap();
        assert!(matches!(c.face_lattice(), Err(crate::Error::CapExceeded(_))));
    }
}
