//! One group instance with its classes, scalar field and character table.

use std::sync::Arc;

use crate::arith::CycField;
use crate::chartab::{CharacterTable, ChartabError, ClassContext};
use crate::groups::{ConjClassData, GroupError, GroupInstance, GroupLabel, Torus};

#[derive(Debug, thiserror::Error)]
pub enum InstanceError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Table(#[from] ChartabError),
}

pub struct Instance {
    group: GroupInstance,
    classes: ConjClassData,
    modulus: u32,
    field: Arc<CycField>,
    table: CharacterTable,
    tori: Vec<Torus>,
}

impl Instance {
    pub fn build(label: GroupLabel, q: u32) -> Result<Instance, InstanceError> {
        Instance::build_with(GroupInstance::build(label, q)?, CharacterTable::compute)
    }

    /// Builds an instance, obtaining the character table from `table` (for example a cache).
    pub fn build_with(
        group: GroupInstance,
        table: impl FnOnce(&GroupInstance, &ConjClassData, &Arc<CycField>, u32) -> Result<CharacterTable, ChartabError>,
    ) -> Result<Instance, InstanceError> {
        let classes = group.conjugacy_classes();
        let modulus = instance_modulus(group.p(), group.q());
        let field = CycField::get(modulus);
        let table = table(&group, &classes, &field, modulus)?;
        let tori = if group.label() == GroupLabel::PGL2 { Vec::new() } else { group.tori() };
        Ok(Instance { group, classes, modulus, field, table, tori })
    }

    pub fn label(&self) -> GroupLabel {
        self.group.label()
    }

    pub fn q(&self) -> u32 {
        self.group.q()
    }

    pub fn p(&self) -> u32 {
        self.group.p()
    }

    pub fn group(&self) -> &GroupInstance {
        &self.group
    }

    pub fn classes(&self) -> &ConjClassData {
        &self.classes
    }

    /// `p (q^2 - 1)`: every character value is a sum of `modulus`-th roots of unity.
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn field(&self) -> &Arc<CycField> {
        &self.field
    }

    pub fn table(&self) -> &CharacterTable {
        &self.table
    }

    pub fn context(&self) -> &ClassContext {
        self.table.context()
    }

    /// Standard split and nonsplit tori (empty for `PGL2`).
    pub fn tori(&self) -> &[Torus] {
        &self.tori
    }
}

pub fn instance_modulus(p: u32, q: u32) -> u32 {
    p * (q * q - 1)
}
