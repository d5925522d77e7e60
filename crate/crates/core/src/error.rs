use alloc::string::String;
use thiserror::Error;

use crate::homotopy::Hypothesis;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("a space needs at least one point")]
    NoPoints,
    #[error("{count} points exceeds the supported maximum of {max}")]
    TooManyPoints { count: usize, max: usize },
    #[error("duplicate point name {0:?}")]
    DuplicateName(String),
    #[error("unknown point {0:?}")]
    UnknownPoint(String),
    #[error("subset bitmask {bits:#b} uses indices outside a {points}-point space")]
    IndexOutOfRange { bits: u32, points: usize },
    #[error("point index {index} outside a {points}-point space")]
    PointOutOfRange { index: usize, points: usize },
    #[error("open family must contain the empty set")]
    MissingEmpty,
    #[error("open family must contain the whole set")]
    MissingFull,
    #[error("open family not closed under union: {left} u {right} is missing")]
    NotUnionClosed { left: String, right: String },
    #[error("open family not closed under intersection: {left} n {right} is missing")]
    NotIntersectionClosed { left: String, right: String },
    #[error("topology enumeration supports 1..=5 points, got {0}")]
    EnumerationRange(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("invalid rational {0:?}")]
    Rational(String),
    #[error("invalid interval {text:?}: {reason}")]
    Interval { text: String, reason: &'static str },
    #[error("invalid word token {0:?}")]
    WordToken(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("map has {got} images but the domain has {expected} points")]
    WrongLength { expected: usize, got: usize },
    #[error("image index {index} outside the {points}-point codomain")]
    ImageOutOfRange { index: usize, points: usize },
    #[error("codomain of the first map differs from the domain of the second")]
    SpaceMismatch,
    #[error("unsupported query {0:?}")]
    UnsupportedQuery(String),
    #[error("search bound {0} outside 1..=4")]
    SearchBound(usize),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("step path has no pieces")]
    Empty,
    #[error("piece {index} is empty")]
    EmptyPiece { index: usize },
    #[error("pieces must start at 0 with a closed endpoint")]
    BadStart,
    #[error("pieces must end at 1 with a closed endpoint")]
    BadEnd,
    #[error("pieces {index} and {next} do not meet in exactly one owner")]
    NotAPartition { index: usize, next: usize },
    #[error("value index {index} outside the {points}-point space")]
    ValueOutOfRange { index: usize, points: usize },
    #[error("endpoint mismatch: first path ends at {end}, second starts at {start}")]
    EndpointMismatch { end: String, start: String },
    #[error("paths live in different spaces")]
    SpaceMismatch,
    #[error("reparameterization must satisfy rho(0) = 0 and rho(1) = 1")]
    ReparamEndpoints,
    #[error("reparameterization must be nondecreasing")]
    NotMonotone,
    #[error("piecewise-linear map needs strictly increasing nodes from t = 0 to t = 1")]
    BadNodes,
    #[error("piecewise-linear map takes values outside [0,1]")]
    ValueOutsideUnit,
    #[error("mode must be 1, 2 or 3, got {0}")]
    BadMode(u8),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// A certificate node failed one of its side conditions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{node} ({rule}): {hypothesis}{}", detail_suffix(.detail))]
pub struct CertError {
    /// Location of the node, e.g. `root.trans[1].paste[0]`.
    pub node: String,
    pub rule: &'static str,
    pub hypothesis: Hypothesis,
    pub detail: String,
}

fn detail_suffix(detail: &str) -> String {
    if detail.is_empty() {
        String::new()
    } else {
        alloc::format!(" ({detail})")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SliceError {
    #[error("bands must partition [0,1] in order (band {0})")]
    BadBands(usize),
    #[error("band {band}: expected {expected} piece specs for {bounds} bounds")]
    Shape { band: usize, expected: usize, bounds: usize },
    #[error("band {band}: bounds {index} and {next} cross at t = {t}")]
    Crossing { band: usize, index: usize, next: usize, t: String },
    #[error("band {band}: slice at t = {t} is not a step path: {source}")]
    BadSlice { band: usize, t: String, source: PathError },
    #[error("families do not glue: end slice of the first differs from start slice of the second")]
    GlueMismatch,
    #[error("grid must be positive")]
    BadGrid,
    #[error(transparent)]
    Path(#[from] PathError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("generator {0:?} is already registered")]
    DuplicateName(String),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("loop must start and end at the basepoint {basepoint}")]
    NotALoop { basepoint: String },
    #[error("path is not so-{mode}-continuous: preimage of {set} is {preimage}")]
    NotSoI { mode: u8, set: String, preimage: String },
    #[error("words come from different tables")]
    TableMismatch,
    #[error("operation requires mode 2, table has mode {0}")]
    NeedsIrresolute(u8),
    #[error("map is not irresolute: {0}")]
    MapNotIrresolute(String),
    #[error("map domain differs from the table's space")]
    MapDomainMismatch,
    #[error("change-of-basepoint path must start at {expected}, starts at {got}")]
    BasepointMismatch { expected: String, got: String },
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Cert(#[from] CertError),
}
