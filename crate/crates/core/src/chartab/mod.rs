//! Ordinary character tables and the calculus of class functions.

pub(crate) mod dixon;

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use crate::arith::{rat, CycField, CycNum, Rat, RootAcc, RootVec};
use crate::groups::{ConjClassData, Elem, GroupInstance, GroupLabel};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChartabError {
    #[error("character table computation failed: {0}")]
    TableComputationFailed(String),
    #[error("class functions belong to different groups")]
    GroupMismatch,
    #[error("not a subgroup")]
    NotASubgroup,
}

/// Identifies the group a class function lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupTag {
    pub label: GroupLabel,
    pub q: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassFunction {
    tag: GroupTag,
    values: Vec<CycNum>,
}

impl ClassFunction {
    pub fn new(tag: GroupTag, values: Vec<CycNum>) -> ClassFunction {
        ClassFunction { tag, values }
    }

    pub fn tag(&self) -> GroupTag {
        self.tag
    }

    pub fn values(&self) -> &[CycNum] {
        &self.values
    }

    pub fn value(&self, c: usize) -> &CycNum {
        &self.values[c]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn zip(&self, other: &ClassFunction, f: impl Fn(&CycNum, &CycNum) -> CycNum) -> Result<ClassFunction, ChartabError> {
        if self.tag != other.tag || self.len() != other.len() {
            return Err(ChartabError::GroupMismatch);
        }
        Ok(ClassFunction { tag: self.tag, values: self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect() })
    }

    pub fn add(&self, other: &ClassFunction) -> Result<ClassFunction, ChartabError> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ClassFunction) -> Result<ClassFunction, ChartabError> {
        self.zip(other, |a, b| a - b)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &ClassFunction) -> Result<ClassFunction, ChartabError> {
        self.zip(other, |a, b| a * b)
    }

    pub fn scale(&self, c: &CycNum) -> ClassFunction {
        ClassFunction { tag: self.tag, values: self.values.iter().map(|v| v * c).collect() }
    }

    pub fn conj(&self) -> ClassFunction {
        ClassFunction { tag: self.tag, values: self.values.iter().map(CycNum::conj).collect() }
    }
}

/// Class sizes and the scalar field, everything needed for inner products.
#[derive(Debug, Clone)]
pub struct ClassContext {
    pub tag: GroupTag,
    pub field: Arc<CycField>,
    pub group_order: usize,
    pub sizes: Vec<usize>,
    pub inverse: Vec<usize>,
}

impl ClassContext {
    pub fn new(g: &GroupInstance, cc: &ConjClassData, field: &Arc<CycField>) -> ClassContext {
        ClassContext {
            tag: GroupTag { label: g.label(), q: g.q() },
            field: Arc::clone(field),
            group_order: g.order(),
            sizes: cc.sizes(),
            inverse: (0..cc.len()).map(|c| cc.inverse_class(c)).collect(),
        }
    }

    pub fn num_classes(&self) -> usize {
        self.sizes.len()
    }

    pub fn constant(&self, v: i64) -> ClassFunction {
        ClassFunction::new(self.tag, vec![CycNum::from_int(&self.field, v); self.num_classes()])
    }

    pub fn function(&self, values: Vec<CycNum>) -> ClassFunction {
        assert_eq!(values.len(), self.num_classes());
        ClassFunction::new(self.tag, values)
    }

    /// `(1/|G|) sum_c |c| f(c) conj(g(c))`.
    pub fn inner_product(&self, f: &ClassFunction, g: &ClassFunction) -> Result<CycNum, ChartabError> {
        if f.tag != self.tag || g.tag != self.tag || f.len() != self.num_classes() || g.len() != self.num_classes() {
            return Err(ChartabError::GroupMismatch);
        }
        let mut acc = CycNum::zero(&self.field);
        for (c, &s) in self.sizes.iter().enumerate() {
            if f.values[c].is_zero() || g.values[c].is_zero() {
                continue;
            }
            acc = acc + (&f.values[c] * &g.values[c].conj()).scale_int(s as i64);
        }
        Ok(acc.scale(&rat(1, self.group_order as i64)))
    }
}

/// Irreducible characters, rows sorted by degree then by value vector.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    ctx: ClassContext,
    degrees: Vec<u64>,
    chars: Vec<ClassFunction>,
    roots: Vec<Vec<RootVec>>,
}

impl CharacterTable {
    /// Computes the table by Dixon's method and validates it exactly.
    pub fn compute(g: &GroupInstance, cc: &ConjClassData, field: &Arc<CycField>, modulus: u32) -> Result<CharacterTable, ChartabError> {
        let ctx = ClassContext::new(g, cc, field);
        let out = dixon::dixon(g, cc, modulus)?;
        let mut rows: Vec<(u64, Vec<CycNum>, Vec<RootVec>)> = out
            .degrees
            .into_iter()
            .zip(out.values)
            .map(|(d, r)| (d, r.iter().map(|v| v.to_cycnum(field)).collect(), r))
            .collect();
        rows.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
        let table = CharacterTable {
            degrees: rows.iter().map(|r| r.0).collect(),
            chars: rows.iter().map(|r| ClassFunction::new(ctx.tag, r.1.clone())).collect(),
            roots: rows.into_iter().map(|r| r.2).collect(),
            ctx,
        };
        table.validate()?;
        Ok(table)
    }

    /// Rebuilds a table from stored values, re-running every invariant check.
    pub fn from_values(ctx: ClassContext, values: Vec<Vec<CycNum>>) -> Result<CharacterTable, ChartabError> {
        let mut roots = Vec::with_capacity(values.len());
        for row in &values {
            let mut r = Vec::with_capacity(row.len());
            for v in row {
                r.push(power_basis_roots(v).ok_or_else(|| {
                    ChartabError::TableComputationFailed("stored character value is not an algebraic integer".into())
                })?);
            }
            roots.push(r);
        }
        let degrees = values
            .iter()
            .map(|row| {
                row[0]
                    .to_integer()
                    .and_then(|d| u64::try_from(d).ok())
                    .ok_or_else(|| ChartabError::TableComputationFailed("degree is not a positive integer".into()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let chars = values.into_iter().map(|v| ClassFunction::new(ctx.tag, v)).collect();
        let table = CharacterTable { ctx, degrees, chars, roots };
        table.validate()?;
        Ok(table)
    }

    pub fn context(&self) -> &ClassContext {
        &self.ctx
    }

    pub fn field(&self) -> &Arc<CycField> {
        &self.ctx.field
    }

    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn chars(&self) -> &[ClassFunction] {
        &self.chars
    }

    pub fn char(&self, i: usize) -> &ClassFunction {
        &self.chars[i]
    }

    /// Character values as unreduced root sums (same order as [`CharacterTable::chars`]).
    pub fn root_values(&self) -> &[Vec<RootVec>] {
        &self.roots
    }

    /// Exact checks of both orthogonality relations, degrees and integrality.
    pub fn validate(&self) -> Result<(), ChartabError> {
        let k = self.ctx.num_classes();
        let fail = |m: String| Err(ChartabError::TableComputationFailed(m));
        if self.chars.len() != k {
            return fail(format!("{} characters for {k} classes", self.chars.len()));
        }
        let order = self.ctx.group_order as u64;
        if self.degrees.iter().map(|d| d * d).sum::<u64>() != order {
            return fail("sum of squared degrees differs from |G|".into());
        }
        if self.degrees.iter().any(|&d| d == 0 || !order.is_multiple_of(d)) {
            return fail("degree does not divide |G|".into());
        }
        for (i, row) in self.chars.iter().enumerate() {
            if row.values[0].to_integer() != Some(BigInt::from(self.degrees[i])) {
                return fail(format!("row {i}: value at identity is not the degree"));
            }
            if row.values.iter().any(|v| !v.is_algebraic_integer()) {
                return fail(format!("row {i}: non-integral value"));
            }
            if self.roots[i].iter().zip(&row.values).any(|(r, v)| &r.to_cycnum(&self.ctx.field) != v) {
                return fail(format!("row {i}: root form disagrees with power basis"));
            }
        }
        let modulus = self.roots.first().and_then(|r| r.first()).map_or(1, RootVec::modulus);
        let field = &self.ctx.field;
        let conj: Vec<Vec<RootVec>> = self.roots.iter().map(|r| r.iter().map(RootVec::conj).collect()).collect();
        for a in 0..k {
            for b in a..k {
                let mut acc = RootAcc::new(modulus);
                for c in 0..k {
                    acc.add_product(&self.roots[a][c], &conj[b][c], self.ctx.sizes[c] as i64);
                }
                let expect = if a == b { order as i64 } else { 0 };
                if acc.finish(field) != CycNum::from_int(field, expect) {
                    return fail(format!("rows {a}, {b} are not orthonormal"));
                }
            }
        }
        for c in 0..k {
            for d in c..k {
                let mut acc = RootAcc::new(modulus);
                for i in 0..k {
                    acc.add_product(&self.roots[i][c], &conj[i][d], 1);
                }
                let expect = if c == d { (order as usize / self.ctx.sizes[c]) as i64 } else { 0 };
                if acc.finish(field) != CycNum::from_int(field, expect) {
                    return fail(format!("columns {c}, {d} violate second orthogonality"));
                }
            }
        }
        Ok(())
    }

    /// Index of the trivial character.
    pub fn trivial(&self) -> usize {
        self.chars.iter().position(|c| c.values.iter().all(CycNum::is_one)).expect("trivial character present")
    }

    /// Multiplicities `<f, chi_i>` for every row.
    pub fn decompose(&self, f: &ClassFunction) -> Result<Vec<CycNum>, ChartabError> {
        self.chars.iter().map(|chi| self.ctx.inner_product(f, chi)).collect()
    }

    /// The regular character `|G| delta_1`.
    pub fn regular_character(&self) -> ClassFunction {
        let mut v = vec![CycNum::zero(&self.ctx.field); self.ctx.num_classes()];
        v[0] = CycNum::from_int(&self.ctx.field, self.ctx.group_order as i64);
        self.ctx.function(v)
    }
}

fn power_basis_roots(v: &CycNum) -> Option<RootVec> {
    if !v.is_algebraic_integer() {
        return None;
    }
    let n = v.conductor();
    let terms = v.numerators().iter().enumerate().map(|(i, c)| i64::try_from(c).map(|c| (i as i64, c)));
    Some(RootVec::from_terms(n, terms.collect::<Result<Vec<_>, _>>().ok()?))
}

/// `Ind_K^G f` for a function `f` on the elements of a subgroup `K` (listed by `subgroup`).
pub fn induce(
    ctx: &ClassContext,
    g: &GroupInstance,
    cc: &ConjClassData,
    subgroup: &[Elem],
    f: &[CycNum],
) -> Result<ClassFunction, ChartabError> {
    if subgroup.len() != f.len() || !g.order().is_multiple_of(subgroup.len()) {
        return Err(ChartabError::NotASubgroup);
    }
    let mut sums = vec![CycNum::zero(&ctx.field); cc.len()];
    for (&k, v) in subgroup.iter().zip(f) {
        if !v.is_zero() {
            let c = cc.class_of(k);
            sums[c] = &sums[c] + v;
        }
    }
    let values = sums
        .into_iter()
        .enumerate()
        .map(|(c, s)| s.scale(&Rat::new(BigInt::from(cc.centralizer_order(c)), BigInt::from(subgroup.len()))))
        .collect();
    Ok(ctx.function(values))
}

/// Values of a class function on the listed subgroup elements.
pub fn restrict(f: &ClassFunction, cc: &ConjClassData, subgroup: &[Elem]) -> Vec<CycNum> {
    subgroup.iter().map(|&k| f.values[cc.class_of(k)].clone()).collect()
}

/// `(1/|K|) sum_k f(k) conj(g(k))` for functions on the elements of a subgroup.
pub fn subgroup_inner_product(field: &Arc<CycField>, f: &[CycNum], g: &[CycNum]) -> CycNum {
    let mut acc = CycNum::zero(field);
    for (a, b) in f.iter().zip(g) {
        if !a.is_zero() && !b.is_zero() {
            acc = acc + a * &b.conj();
        }
    }
    acc.scale(&Rat::new(BigInt::one(), BigInt::from(f.len())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::Instance;

    #[test]
    fn gl2_3_table() {
        let inst = Instance::build(GroupLabel::GL2, 3).unwrap();
        let t = inst.table();
        assert_eq!(t.len(), 8);
        assert_eq!(t.degrees().iter().map(|d| d * d).sum::<u64>(), 48);
        let triv = t.trivial();
        assert!(t.char(triv).values().iter().all(CycNum::is_one));
    }

    #[test]
    fn sl2_3_degrees() {
        let inst = Instance::build(GroupLabel::SL2, 3).unwrap();
        assert_eq!(inst.table().degrees(), &[1, 1, 1, 2, 2, 2, 3]);
    }

    #[test]
    fn regular_character_decomposes_into_degrees() {
        let inst = Instance::build(GroupLabel::GL2, 3).unwrap();
        let t = inst.table();
        let m = t.decompose(&t.regular_character()).unwrap();
        let expect: Vec<CycNum> = t.degrees().iter().map(|&d| CycNum::from_int(t.field(), d as i64)).collect();
        assert_eq!(m, expect);
    }

    #[test]
    fn induction_from_whole_group_is_identity() {
        let inst = Instance::build(GroupLabel::GL2, 3).unwrap();
        let g = inst.group();
        let cc = inst.classes();
        let all: Vec<Elem> = g.elements().collect();
        let chi = inst.table().char(3);
        let res = restrict(chi, cc, &all);
        assert_eq!(&induce(inst.table().context(), g, cc, &all, &res).unwrap(), chi);
    }
}
