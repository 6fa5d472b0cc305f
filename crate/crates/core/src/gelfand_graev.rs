//! Regular characters of `U_0`, the idempotent `e_psi`, the Gelfand-Graev character and the
//! endomorphism ring `E = e_psi Q G e_psi` with its symmetrizing form.
//!
//! Group-algebra coefficients live in `Q(zeta_p)`; they are lifted to the instance field only
//! when paired with character values.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;

use crate::arith::{CycField, CycNum, Rat, RootSum};
use crate::chartab::{induce, ChartabError, ClassContext, ClassFunction};
use crate::groups::{ConjClassData, Elem, ExtensionData, Fq, GroupInstance};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GgError {
    #[error("endomorphism basis has dimension {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("structure constants do not reproduce h_{i} h_{j}")]
    Reconstruction { i: usize, j: usize },
    #[error("h_{i} h_{j} != h_{j} h_{i}")]
    NotCommutative { i: usize, j: usize },
    #[error("regular character index {0} out of range")]
    NoSuchCharacter(usize),
    #[error(transparent)]
    Table(#[from] ChartabError),
}

/// `psi_a(x) = zeta_p^{Tr(a x)}` on `U_0 = {[[1, x], [0, 1]]}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct RegularCharacter {
    pub a: Fq,
}

impl RegularCharacter {
    /// Exponent `e` with `psi(u_x) = zeta_p^e`.
    pub fn exponent(&self, g: &GroupInstance, x: Fq) -> i64 {
        let t = g.tower();
        t.trace(t.mul(self.a, x)) as i64
    }
}

/// The `q - 1` nontrivial characters of `U_0`, ordered by `a`.
pub fn regular_characters(g: &GroupInstance) -> Vec<RegularCharacter> {
    g.tower().units().map(|a| RegularCharacter { a }).collect()
}

/// `Q(zeta_p)`, the field of group-algebra coefficients.
pub fn coefficient_field(g: &GroupInstance) -> Arc<CycField> {
    CycField::get(g.p())
}

/// Sparse element of the group algebra; zero coefficients are never stored.
#[derive(Clone)]
pub struct GroupAlgebraElement {
    field: Arc<CycField>,
    coeffs: BTreeMap<Elem, CycNum>,
}

impl PartialEq for GroupAlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.conductor() == other.field.conductor() && self.coeffs == other.coeffs
    }
}

impl Eq for GroupAlgebraElement {}

impl std::fmt::Debug for GroupAlgebraElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map().entries(self.coeffs.iter().map(|(g, c)| (g, c.to_string()))).finish()
    }
}

impl GroupAlgebraElement {
    pub fn zero(field: &Arc<CycField>) -> GroupAlgebraElement {
        GroupAlgebraElement { field: Arc::clone(field), coeffs: BTreeMap::new() }
    }

    pub fn basis(field: &Arc<CycField>, g: Elem) -> GroupAlgebraElement {
        GroupAlgebraElement::from_terms(field, [(g, CycNum::one(field))])
    }

    pub fn from_terms(field: &Arc<CycField>, terms: impl IntoIterator<Item = (Elem, CycNum)>) -> GroupAlgebraElement {
        let mut acc: HashMap<Elem, CycNum> = HashMap::new();
        for (g, c) in terms {
            match acc.get_mut(&g) {
                Some(v) => *v = &*v + &c,
                None => {
                    acc.insert(g, c);
                }
            }
        }
        GroupAlgebraElement {
            field: Arc::clone(field),
            coeffs: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn field(&self) -> &Arc<CycField> {
        &self.field
    }

    pub fn coeff(&self, g: Elem) -> CycNum {
        self.coeffs.get(&g).cloned().unwrap_or_else(|| CycNum::zero(&self.field))
    }

    pub fn terms(&self) -> impl Iterator<Item = (Elem, &CycNum)> {
        self.coeffs.iter().map(|(&g, c)| (g, c))
    }

    pub fn support(&self) -> impl Iterator<Item = Elem> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &GroupAlgebraElement) -> GroupAlgebraElement {
        GroupAlgebraElement::from_terms(&self.field, self.terms().chain(other.terms()).map(|(g, c)| (g, c.clone())))
    }

    pub fn sub(&self, other: &GroupAlgebraElement) -> GroupAlgebraElement {
        self.add(&other.scale(&CycNum::from_int(&self.field, -1)))
    }

    pub fn scale(&self, c: &CycNum) -> GroupAlgebraElement {
        if c.is_zero() {
            return GroupAlgebraElement::zero(&self.field);
        }
        GroupAlgebraElement { field: Arc::clone(&self.field), coeffs: self.coeffs.iter().map(|(&g, x)| (g, x * c)).collect() }
    }

    pub fn mul(&self, other: &GroupAlgebraElement, g: &GroupInstance) -> GroupAlgebraElement {
        let terms = self.terms().flat_map(|(a, x)| other.terms().map(move |(b, y)| (g.mul(a, b), x * y)));
        GroupAlgebraElement::from_terms(&self.field, terms)
    }

    /// `x * self` for a group element `x`.
    pub fn left_translate(&self, x: Elem, g: &GroupInstance) -> GroupAlgebraElement {
        GroupAlgebraElement { field: Arc::clone(&self.field), coeffs: self.terms().map(|(a, c)| (g.mul(x, a), c.clone())).collect() }
    }

    /// Relabels the group elements through an injective map.
    pub fn map_elements(&self, f: impl Fn(Elem) -> Elem) -> GroupAlgebraElement {
        GroupAlgebraElement { field: Arc::clone(&self.field), coeffs: self.terms().map(|(a, c)| (f(a), c.clone())).collect() }
    }

    pub fn lift_to(&self, field: &Arc<CycField>) -> GroupAlgebraElement {
        GroupAlgebraElement {
            field: Arc::clone(field),
            coeffs: self.terms().map(|(a, c)| (a, c.lift_to(field).expect("coefficient field embeds"))).collect(),
        }
    }

    /// `sum_{g in c} x_g` for every class `c`, in `field`.
    pub fn class_weights(&self, cc: &ConjClassData, field: &Arc<CycField>) -> Vec<CycNum> {
        let mut w = vec![CycNum::zero(&self.field); cc.len()];
        for (g, c) in self.terms() {
            let k = cc.class_of(g);
            w[k] = &w[k] + c;
        }
        w.into_iter().map(|x| x.lift_to(field).expect("coefficient field embeds")).collect()
    }

    /// `|U_0| * (coefficient of the identity)`.
    pub fn tau(&self, g: &GroupInstance) -> CycNum {
        self.coeff(g.identity()).scale_int(g.q() as i64)
    }
}

fn psi_sum(field: &Arc<CycField>, p: u32, exps: &[i64], scale: &Rat) -> CycNum {
    let n = field.conductor() as i64;
    let mut s = RootSum::new(field);
    for &e in exps {
        if n == 1 {
            // p = 2: zeta_2^e = (-1)^e
            s.add_root(0, &if e % 2 == 0 { scale.clone() } else { -scale.clone() });
        } else {
            s.add_root(e * (n / p as i64), scale);
        }
    }
    s.finish()
}

/// `e_psi = (1/q) sum_x psi(-x) u_x`.
pub fn gg_idempotent(g: &GroupInstance, psi: RegularCharacter) -> GroupAlgebraElement {
    let field = coefficient_field(g);
    let q = g.q() as i64;
    let p = g.p();
    let inv_q = Rat::new(BigInt::from(1), BigInt::from(q));
    let terms = g.tower().elements().map(|x| {
        let e = -psi.exponent(g, x);
        (g.index_of([1, x, 0, 1]), psi_sum(&field, p, &[e], &inv_q))
    });
    GroupAlgebraElement::from_terms(&field, terms)
}

/// `e_psi g e_psi`, summed as roots of unity before reduction.
pub fn sandwich(g: &GroupInstance, psi: RegularCharacter, x: Elem) -> GroupAlgebraElement {
    let field = coefficient_field(g);
    let t = g.tower();
    let q = g.q() as i64;
    let p = g.p();
    let u: Vec<(Elem, i64)> = t.elements().map(|a| (g.index_of([1, a, 0, 1]), -psi.exponent(g, a))).collect();
    let mut acc: HashMap<Elem, Vec<i64>> = HashMap::new();
    for &(ua, ea) in &u {
        let left = g.mul(ua, x);
        for &(ub, eb) in &u {
            acc.entry(g.mul(left, ub)).or_default().push(ea + eb);
        }
    }
    let scale = Rat::new(BigInt::from(1), BigInt::from(q * q));
    let terms = acc.into_iter().map(|(y, exps)| (y, psi_sum(&field, p, &exps, &scale)));
    GroupAlgebraElement::from_terms(&field, terms)
}

/// `e_psi x` for a group-algebra element `x`.
fn left_idempotent(g: &GroupInstance, psi: RegularCharacter, x: &GroupAlgebraElement) -> GroupAlgebraElement {
    let e = gg_idempotent(g, psi);
    e.mul(x, g)
}

/// `Gamma = Ind_{U_0}^G psi`, as a class function over the instance field.
pub fn gg_character(
    ctx: &ClassContext,
    g: &GroupInstance,
    cc: &ConjClassData,
    psi: RegularCharacter,
) -> Result<ClassFunction, ChartabError> {
    let field = &ctx.field;
    let u = g.unipotent_radical();
    let vals: Vec<CycNum> = g
        .tower()
        .elements()
        .map(|x| CycNum::root_of_unity(field, g.p(), psi.exponent(g, x)).expect("p divides the conductor"))
        .collect();
    induce(ctx, g, cc, &u, &vals)
}

/// Character of the left module `(Q G) e_psi` at each class representative, from the action
/// on the spanning set `{g e_psi}` indexed by left cosets of `U_0`.
pub fn module_character(g: &GroupInstance, cc: &ConjClassData, psi: RegularCharacter, field: &Arc<CycField>) -> Vec<CycNum> {
    let e = gg_idempotent(g, psi);
    let u = g.unipotent_radical();
    let mut reps = Vec::new();
    let mut seen = vec![false; g.order()];
    for x in g.elements() {
        if !seen[x as usize] {
            for &v in &u {
                seen[g.mul(x, v) as usize] = true;
            }
            reps.push(x);
        }
    }
    let q = CycNum::from_int(&coefficient_field(g), g.q() as i64);
    cc.reps()
        .iter()
        .map(|&x| {
            let mut tr = CycNum::zero(&coefficient_field(g));
            for &r in &reps {
                let xr = g.mul(x, r);
                if u.iter().any(|&v| g.mul(r, v) == xr) {
                    let img = e.left_translate(xr, g);
                    tr = tr + img.coeff(r) * &q;
                }
            }
            tr.lift_to(field).expect("coefficient field embeds")
        })
        .collect()
}

/// Basis `h_i = e_psi g_i e_psi` of `E` with structure constants and Gram matrix of `tau`.
#[derive(Debug, Clone)]
pub struct EndoBasis {
    psi: RegularCharacter,
    field: Arc<CycField>,
    reps: Vec<Elem>,
    elements: Vec<GroupAlgebraElement>,
    pivots: Vec<Elem>,
    structure: Vec<Vec<Vec<CycNum>>>,
    gram: Vec<Vec<CycNum>>,
}

impl EndoBasis {
    /// Greedy scan over the group in enumeration order. `expected` is `<Gamma, Gamma>` when known.
    pub fn build(g: &GroupInstance, psi: RegularCharacter, expected: Option<usize>) -> Result<EndoBasis, GgError> {
        let field = coefficient_field(g);
        let mut reps = Vec::new();
        let mut elements: Vec<GroupAlgebraElement> = Vec::new();
        let mut reduced: Vec<(Elem, GroupAlgebraElement)> = Vec::new();
        for x in g.elements() {
            let h = sandwich(g, psi, x);
            let mut v = h.clone();
            for (piv, row) in &reduced {
                let c = v.coeff(*piv);
                if !c.is_zero() {
                    let f = c.checked_div(&row.coeff(*piv)).expect("pivot is nonzero");
                    v = v.sub(&row.scale(&f));
                }
            }
            let lead = v.support().next();
            if let Some(piv) = lead {
                reduced.push((piv, v));
                reps.push(x);
                elements.push(h);
            }
        }
        if let Some(n) = expected {
            if n != elements.len() {
                return Err(GgError::DimensionMismatch { expected: n, got: elements.len() });
            }
        }
        let n = elements.len();
        let pivots: Vec<Elem> = elements
            .iter()
            .map(|h| h.terms().find(|(y, _)| elements.iter().filter(|o| !o.coeff(*y).is_zero()).count() == 1).map(|(y, _)| y))
            .collect::<Option<Vec<_>>>()
            .ok_or(GgError::Reconstruction { i: 0, j: 0 })?;
        let mut structure = vec![vec![Vec::new(); n]; n];
        let mut gram = vec![vec![CycNum::zero(&field); n]; n];
        for i in 0..n {
            for j in 0..n {
                // h_i h_j = e g_i e e g_j e = e (g_i h_j)
                let prod = left_idempotent(g, psi, &elements[j].left_translate(reps[i], g));
                let coords: Vec<CycNum> =
                    (0..n).map(|k| ratio(&prod, &elements[k], pivots[k])).collect();
                let mut rebuilt = GroupAlgebraElement::zero(&field);
                for (k, c) in coords.iter().enumerate() {
                    if !c.is_zero() {
                        rebuilt = rebuilt.add(&elements[k].scale(c));
                    }
                }
                if rebuilt != prod {
                    return Err(GgError::Reconstruction { i, j });
                }
                gram[i][j] = prod.tau(g);
                structure[i][j] = coords;
            }
        }
        for i in 0..n {
            for j in 0..i {
                if structure[i][j] != structure[j][i] {
                    return Err(GgError::NotCommutative { i, j });
                }
            }
        }
        Ok(EndoBasis { psi, field, reps, elements, pivots, structure, gram })
    }

    pub fn psi(&self) -> RegularCharacter {
        self.psi
    }

    pub fn field(&self) -> &Arc<CycField> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    /// The `g_i` with `h_i = e g_i e`.
    pub fn reps(&self) -> &[Elem] {
        &self.reps
    }

    pub fn elements(&self) -> &[GroupAlgebraElement] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &GroupAlgebraElement {
        &self.elements[i]
    }

    /// `c_{ij}^k` with `h_i h_j = sum_k c_{ij}^k h_k`.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &CycNum {
        &self.structure[i][j][k]
    }

    /// `tau(h_i h_j)`.
    pub fn gram(&self) -> &[Vec<CycNum>] {
        &self.gram
    }

    /// Index of the basis element equal to `e_psi`.
    pub fn unit_index(&self) -> usize {
        self.reps.iter().position(|&x| x == 0).expect("e_psi is the first element scanned")
    }

    /// Coordinates of an element of `E` in this basis (`None` if it is not in the span).
    pub fn coordinates(&self, x: &GroupAlgebraElement) -> Option<Vec<CycNum>> {
        let coords: Vec<CycNum> =
            (0..self.dim()).map(|k| ratio(x, &self.elements[k], self.pivots[k])).collect();
        (self.combine(&coords) == *x).then_some(coords)
    }

    /// `sum_k c_k h_k`.
    pub fn combine(&self, coords: &[CycNum]) -> GroupAlgebraElement {
        let mut acc = GroupAlgebraElement::zero(&self.field);
        for (k, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&self.elements[k].scale(c));
            }
        }
        acc
    }

    /// Product of two coordinate vectors through the structure constants (any field containing the constants).
    pub fn multiply(&self, x: &[CycNum], y: &[CycNum]) -> Vec<CycNum> {
        let field = x[0].field().clone();
        let n = self.dim();
        let mut out = vec![CycNum::zero(&field); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                let xy = &x[i] * &y[j];
                for k in 0..n {
                    let c = &self.structure[i][j][k];
                    if !c.is_zero() {
                        out[k] = &out[k] + &(&xy * &c.lift_to(&field).expect("coefficient field embeds"));
                    }
                }
            }
        }
        out
    }

    /// `tau(sum_k c_k h_k) = sum_k c_k tau(h_k)`.
    pub fn tau_of(&self, coords: &[CycNum]) -> CycNum {
        let field = coords[0].field().clone();
        let u = self.unit_index();
        let mut acc = CycNum::zero(&field);
        for (k, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                acc = acc + c * &self.gram[u][k].lift_to(&field).expect("coefficient field embeds");
            }
        }
        acc
    }
}

fn ratio(x: &GroupAlgebraElement, h: &GroupAlgebraElement, at: Elem) -> CycNum {
    x.coeff(at).checked_div(&h.coeff(at)).expect("pivot coefficient is nonzero")
}

/// The identity map on coefficients, from `Q SL2` into `Q GL2`.
pub fn include_into_h(x: &GroupAlgebraElement, ext: &ExtensionData) -> GroupAlgebraElement {
    x.map_elements(|y| ext.include(y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{determinant, is_pm_integral, LocalRingSpec};
    use crate::groups::GroupLabel;
    use crate::instance::Instance;

    #[test]
    fn idempotent_properties() {
        let g = GroupInstance::build(GroupLabel::GL2, 3).unwrap();
        for psi in regular_characters(&g) {
            let e = gg_idempotent(&g, psi);
            assert_eq!(e.mul(&e, &g), e);
            assert_eq!(e.coeff(0), CycNum::from_ratio(e.field(), 1, 3));
            assert_eq!(e.tau(&g), CycNum::one(e.field()));
            for x in g.tower().elements() {
                let u = g.index_of([1, x, 0, 1]);
                let z = CycNum::root_of_unity(e.field(), 3, psi.exponent(&g, x)).unwrap();
                assert_eq!(e.left_translate(u, &g), e.scale(&z));
            }
        }
        assert_eq!(regular_characters(&g).len(), 2);
    }

    #[test]
    fn gamma_and_endomorphisms_gl2_3() {
        let inst = Instance::build(GroupLabel::GL2, 3).unwrap();
        let (g, cc) = (inst.group(), inst.classes());
        let psi = regular_characters(g)[0];
        let gamma = gg_character(inst.context(), g, cc, psi).unwrap();
        assert_eq!(gamma.value(0), &CycNum::from_int(inst.field(), 16));
        let norm = inst.context().inner_product(&gamma, &gamma).unwrap();
        assert_eq!(norm, CycNum::from_int(inst.field(), 6));
        let mults = inst.table().decompose(&gamma).unwrap();
        assert!(mults.iter().all(|m| m.is_zero() || m.is_one()));
        assert_eq!(module_character(g, cc, psi, inst.field()), gamma.values());
        let e = EndoBasis::build(g, psi, Some(6)).unwrap();
        assert_eq!(e.reps()[0], 0);
        assert_eq!(e.element(0), &gg_idempotent(g, psi));
        for i in 0..e.dim() {
            for j in 0..e.dim() {
                let direct = e.element(i).mul(e.element(j), g);
                let coords: Vec<CycNum> = (0..e.dim()).map(|k| e.structure_constant(i, j, k).clone()).collect();
                assert_eq!(e.combine(&coords), direct);
            }
        }
        let det = determinant(e.field(), e.gram()).unwrap();
        let ring = LocalRingSpec::new(3, 1).unwrap();
        assert!(is_pm_integral(&det, &ring) && is_pm_integral(&det.inv().unwrap(), &ring));
    }

    #[test]
    fn inclusion_is_multiplicative() {
        let g = GroupInstance::build(GroupLabel::SL2, 3).unwrap();
        let h = GroupInstance::build(GroupLabel::GL2, 3).unwrap();
        let ext = ExtensionData::new(&g, &h).unwrap();
        let psi = regular_characters(&g)[0];
        let e = EndoBasis::build(&g, psi, Some(4)).unwrap();
        assert_eq!(include_into_h(&gg_idempotent(&g, psi), &ext), gg_idempotent(&h, psi));
        let eh = gg_idempotent(&h, psi);
        for x in e.elements() {
            let y = include_into_h(x, &ext);
            assert_eq!(eh.mul(&y, &h).mul(&eh, &h), y);
            for z in e.elements() {
                assert_eq!(include_into_h(&x.mul(z, &g), &ext), y.mul(&include_into_h(z, &ext), &h));
            }
        }
    }
}
