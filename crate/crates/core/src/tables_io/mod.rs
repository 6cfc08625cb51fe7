//! Radical text grammar, the bundled reference tables, basis-independent
//! comparison against computed tables, and exporters.

mod compare;
mod export;
mod expr;
mod reference;

pub use compare::{compare_projectors, BlockReport, CompareReport, EntryDiff};
pub use export::{caption, column_heads, export_table, radical_latex, to_reference_json, Format};
pub use expr::parse_radical_expr;
pub use reference::{
    corpus_files, data_dir, radical_state, state_inner, state_inner_vector, BlockJson, Descriptor, Group, ParentBasis,
    ParentBasisJson, RadicalState, RefBlock, ReferenceJson, ReferenceTable,
};

use crate::builder::{Engine, ReductionTask};
use crate::error::Result;

/// Builds the table a reference describes and compares the two.
pub fn verify_reference(engine: &Engine, reference: &ReferenceTable) -> Result<CompareReport> {
    let mut task = ReductionTask::new(reference.f1.clone(), reference.f2.clone());
    task.strict = true;
    let table = engine.table(&task)?;
    compare_projectors(engine, &table, reference)
}
