//! The pair `SL2 < GL2` with `kappa = det` and the section `z -> diag(z, 1)`.

use super::{Elem, Fq, GroupError, GroupInstance, GroupLabel};

pub struct ExtensionData {
    /// Image in `GL2` of each `SL2` element.
    inclusion: Vec<Elem>,
    /// Inverse of `inclusion`, `u32::MAX` off `SL2`.
    preimage: Vec<u32>,
}

impl ExtensionData {
    pub fn new(g: &GroupInstance, h: &GroupInstance) -> Result<ExtensionData, GroupError> {
        if g.label() != GroupLabel::SL2 || h.label() != GroupLabel::GL2 || g.q() != h.q() {
            return Err(GroupError::UnsupportedInstance { label: g.label(), q: g.q() });
        }
        let inclusion: Vec<Elem> = g.elements().map(|x| h.index_of(g.matrix(x))).collect();
        let mut preimage = vec![u32::MAX; h.order()];
        for (i, &y) in inclusion.iter().enumerate() {
            preimage[y as usize] = i as u32;
        }
        Ok(ExtensionData { inclusion, preimage })
    }

    pub fn include(&self, x: Elem) -> Elem {
        self.inclusion[x as usize]
    }

    /// The `SL2` element, when `y` lies in `SL2`.
    pub fn preimage(&self, y: Elem) -> Option<Elem> {
        let i = self.preimage[y as usize];
        (i != u32::MAX).then_some(i)
    }

    /// `kappa(y) = det y`.
    pub fn kappa(&self, h: &GroupInstance, y: Elem) -> Fq {
        h.det(y)
    }

    /// `z -> diag(z, 1)`.
    pub fn section(&self, h: &GroupInstance, z: Fq) -> Elem {
        h.index_of([z, 0, 0, 1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exactness_q3() {
        let g = GroupInstance::build(GroupLabel::SL2, 3).unwrap();
        let h = GroupInstance::build(GroupLabel::GL2, 3).unwrap();
        let e = ExtensionData::new(&g, &h).unwrap();
        assert_eq!(h.order(), g.order() * 2);
        assert_eq!(e.kappa(&h, h.index_of([2, 0, 0, 1])), 2);
        let kernel = h.elements().filter(|&y| e.kappa(&h, y) == 1).count();
        assert_eq!(kernel, 24);
        for x in g.elements() {
            assert_eq!(e.kappa(&h, e.include(x)), 1);
            assert_eq!(e.preimage(e.include(x)), Some(x));
        }
        for z in h.tower().units() {
            assert_eq!(e.kappa(&h, e.section(&h, z)), z);
        }
    }
}
