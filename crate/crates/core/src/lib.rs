//! Archive engine for multi-level annotated linguistic corpora.

pub mod archive;
pub mod error;
pub mod formats;
pub mod graph;
pub mod item;
pub mod markup;
pub mod metadata;
pub mod model;
pub mod registry;
pub mod standoff;
pub mod versioning;

pub use archive::{
    Archive, Deposit, FixedClock, SystemClock, ValidationReport, Violation, ViolationKind,
};
pub use error::{Error, Result};
pub use formats::FormatTag;
pub use item::{AnnotationItem, Link};
pub use model::{
    Corpus, CorpusDescriptor, CoverageContribution, Dependency, DepositInfo, DescriptionLevel,
    LevelClass, LevelDescriptor, LevelKind, Representation, Resource,
};
pub use registry::{DataCategory, Registry};
pub use standoff::{Fingerprint, SplitTable};
pub use versioning::{Classification, GranularityRelation, VersionRecord};
