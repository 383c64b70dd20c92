//! Binary formal contexts and the derivation operators.
//!
//! A [`FormalContext`] keeps the incidence relation twice: one bitset per
//! object (its row `g'`) and one per attribute (its column `m'`). Both are
//! built once and never mutated, so derivation in either direction is a
//! chain of bitset intersections.

mod binarize;
mod generators;

pub use binarize::{
    binarize, BinarizationConfig, ColumnRule, ManyValuedTable, ValueList, DEFAULT_NAME_TEMPLATE,
};
pub use generators::{contranominal, prop7_context};

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::sets::{ItemSet, ObjectSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalContext {
    object_names: Vec<String>,
    attribute_names: Vec<String>,
    rows: Vec<FixedBitSet>,
    cols: Vec<FixedBitSet>,
}

impl FormalContext {
    /// Builds a context from per-object attribute id lists.
    ///
    /// Ids inside a row may be unsorted or repeated; they are normalized.
    pub fn from_rows<R>(
        object_names: Vec<String>,
        attribute_names: Vec<String>,
        rows: R,
    ) -> Result<Self>
    where
        R: IntoIterator,
        R::Item: AsRef<[u32]>,
    {
        let n_attrs = attribute_names.len();
        let mut row_bits = Vec::with_capacity(object_names.len());
        for (g, row) in rows.into_iter().enumerate() {
            let mut bits = FixedBitSet::with_capacity(n_attrs);
            for &m in row.as_ref() {
                if m as usize >= n_attrs {
                    return Err(Error::invalid(format!(
                        "object {g} references attribute {m}, but there are only {n_attrs}"
                    )));
                }
                bits.insert(m as usize);
            }
            row_bits.push(bits);
        }
        if row_bits.len() != object_names.len() {
            return Err(Error::invalid(format!(
                "{} object names for {} rows",
                object_names.len(),
                row_bits.len()
            )));
        }
        Ok(Self::from_row_bits(object_names, attribute_names, row_bits))
    }

    /// Builds a context with generated names `g0..` and `m0..`.
    pub fn from_unnamed_rows<R>(n_attributes: usize, rows: R) -> Result<Self>
    where
        R: IntoIterator,
        R::Item: AsRef<[u32]>,
    {
        let rows: Vec<R::Item> = rows.into_iter().collect();
        let objects = (0..rows.len()).map(|g| format!("g{g}")).collect();
        let attrs = (0..n_attributes).map(|m| format!("m{m}")).collect();
        Self::from_rows(objects, attrs, rows)
    }

    pub(crate) fn from_row_bits(
        object_names: Vec<String>,
        attribute_names: Vec<String>,
        rows: Vec<FixedBitSet>,
    ) -> Self {
        let n_objects = rows.len();
        let mut cols = vec![FixedBitSet::with_capacity(n_objects); attribute_names.len()];
        for (g, row) in rows.iter().enumerate() {
            for m in row.ones() {
                cols[m].insert(g);
            }
        }
        Self {
            object_names,
            attribute_names,
            rows,
            cols,
        }
    }

    pub fn n_objects(&self) -> usize {
        self.rows.len()
    }

    pub fn n_attributes(&self) -> usize {
        self.cols.len()
    }

    pub fn object_names(&self) -> &[String] {
        &self.object_names
    }

    pub fn attribute_names(&self) -> &[String] {
        &self.attribute_names
    }

    /// `g I m`.
    pub fn has(&self, g: u32, m: u32) -> bool {
        self.rows[g as usize].contains(m as usize)
    }

    /// The row `g'` as a bitset over attributes.
    pub fn row(&self, g: u32) -> &FixedBitSet {
        &self.rows[g as usize]
    }

    /// The column `m'` as a bitset over objects.
    pub fn col(&self, m: u32) -> &FixedBitSet {
        &self.cols[m as usize]
    }

    /// Number of crosses in the incidence relation.
    pub fn incidence_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones(..)).sum()
    }

    /// Relative number of crosses, `|I| / (|G|·|M|)`; zero for a degenerate context.
    pub fn density(&self) -> f64 {
        let cells = self.n_objects() * self.n_attributes();
        if cells == 0 {
            0.0
        } else {
            self.incidence_count() as f64 / cells as f64
        }
    }

    /// Support `|m'|` of every attribute.
    pub fn attribute_supports(&self) -> Vec<usize> {
        self.cols.iter().map(|c| c.count_ones(..)).collect()
    }

    fn check_items(&self, b: &ItemSet) -> Result<()> {
        match b.max_id() {
            Some(m) if m as usize >= self.n_attributes() => Err(Error::invalid(format!(
                "attribute id {m} out of range (|M| = {})",
                self.n_attributes()
            ))),
            _ => Ok(()),
        }
    }

    fn check_objects(&self, a: &ObjectSet) -> Result<()> {
        match a.max_id() {
            Some(g) if g as usize >= self.n_objects() => Err(Error::invalid(format!(
                "object id {g} out of range (|G| = {})",
                self.n_objects()
            ))),
            _ => Ok(()),
        }
    }

    /// `B'`: the objects having every attribute of `b`.
    pub fn extent(&self, b: &ItemSet) -> Result<ObjectSet> {
        self.check_items(b)?;
        Ok(ObjectSet::from_bits(&self.extent_bits(b.as_slice())))
    }

    /// `A'`: the attributes shared by every object of `a`.
    pub fn intent(&self, a: &ObjectSet) -> Result<ItemSet> {
        self.check_objects(a)?;
        Ok(ItemSet::from_bits(
            &self.intent_bits(&a.to_bits(self.n_objects())),
        ))
    }

    /// `B''`.
    pub fn closure(&self, b: &ItemSet) -> Result<ItemSet> {
        self.check_items(b)?;
        let ext = self.extent_bits(b.as_slice());
        Ok(ItemSet::from_bits(&self.intent_bits(&ext)))
    }

    /// Extent of an unchecked attribute id list.
    pub(crate) fn extent_bits(&self, items: &[u32]) -> FixedBitSet {
        let mut ext = FixedBitSet::with_capacity(self.n_objects());
        ext.insert_range(..);
        for &m in items {
            ext.intersect_with(&self.cols[m as usize]);
        }
        ext
    }

    /// Intent of an object bitset sized `|G|`.
    pub(crate) fn intent_bits(&self, objects: &FixedBitSet) -> FixedBitSet {
        let mut int = FixedBitSet::with_capacity(self.n_attributes());
        int.insert_range(..);
        for g in objects.ones() {
            int.intersect_with(&self.rows[g]);
            if int.is_clear() {
                break;
            }
        }
        int
    }

    /// Subcontext `(G_s, M, I ∩ G_s×M)` keeping the full attribute set.
    ///
    /// Objects are renumbered `0..|keep|` in ascending order of their
    /// original ids.
    pub fn sample_objects(&self, keep: &ObjectSet) -> Result<FormalContext> {
        self.check_objects(keep)?;
        let names = keep
            .iter()
            .map(|g| self.object_names[g as usize].clone())
            .collect();
        let rows = keep.iter().map(|g| self.rows[g as usize].clone()).collect();
        Ok(Self::from_row_bits(
            names,
            self.attribute_names.clone(),
            rows,
        ))
    }

    /// Reorders attributes by descending support (ties keep input order).
    ///
    /// Returns the new context and `perm`, where `perm[new_id] = old_id`.
    pub fn sorted_by_frequency_desc(&self) -> (FormalContext, Vec<u32>) {
        let supports = self.attribute_supports();
        let mut perm: Vec<u32> = (0..self.n_attributes() as u32).collect();
        perm.sort_by_key(|&m| std::cmp::Reverse(supports[m as usize]));
        (self.permute_attributes(&perm), perm)
    }

    /// Context whose attribute `i` is the old attribute `perm[i]`.
    pub fn permute_attributes(&self, perm: &[u32]) -> FormalContext {
        let names = perm
            .iter()
            .map(|&m| self.attribute_names[m as usize].clone())
            .collect();
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut bits = FixedBitSet::with_capacity(perm.len());
                for (new, &old) in perm.iter().enumerate() {
                    if row.contains(old as usize) {
                        bits.insert(new);
                    }
                }
                bits
            })
            .collect();
        Self::from_row_bits(self.object_names.clone(), names, rows)
    }

    /// Attribute ids of row `g`.
    pub fn row_items(&self, g: u32) -> ItemSet {
        ItemSet::from_bits(&self.rows[g as usize])
    }
}
