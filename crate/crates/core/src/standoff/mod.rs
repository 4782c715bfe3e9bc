//! Reference units, span expressions, coverage reconstruction and
//! inline/stand-off re-synchronization.

mod align;
mod coverage;
mod segment;
mod span;

pub use align::{align_inline, unit_extents, AlignedElement};
pub use coverage::{
    coverage_fingerprint, covered_units, reconstruct_coverage, Fingerprint, LevelContent,
    LevelGraph,
};
pub use segment::{
    segment_text, tokenize, unit_id, unit_number, ReferenceUnit, SplitTable, SplitTableError,
    DETACHABLE_PUNCTUATION,
};
pub use span::{resolve_positions, resolve_span, Segmentation, SpanExpr, SpanPart};
