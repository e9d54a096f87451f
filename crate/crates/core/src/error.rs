use thiserror::Error;

use crate::geometry::PointId;
use crate::influence::NodeId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point {0} repeats the coordinates of an earlier point")]
    DuplicatePoint(PointId),
    #[error("point {0} has a non-finite coordinate")]
    NonFinite(PointId),
    #[error("input point set is empty")]
    EmptyInput,
    #[error("all input points are collinear")]
    AllCollinear,
    #[error(
        "triangulation has not been bootstrapped (fewer than 3 non-collinear points inserted)"
    )]
    NotBootstrapped,
    #[error("hint region {region} is not a valid stage-{stage} conflict of point {point}")]
    BadHint {
        region: NodeId,
        point: PointId,
        stage: usize,
    },
    #[error("conflict graph is inconsistent: {0}")]
    InconsistentState(String),
    #[error("spanning subgraph does not reach point {0}")]
    DisconnectedSubgraph(PointId),
    #[error("spanning subgraph edge {0}-{1} is not an edge of the Delaunay triangulation")]
    SubgraphEdgeNotDelaunay(PointId, PointId),
    #[error("spanning subgraph is invalid: {0}")]
    InvalidSubgraph(String),
    #[error("points are not in convex position (turn at index {0})")]
    NotConvex(usize),
    #[error("convex polygon is given in clockwise order")]
    NotCcw,
    #[error("exhaustive enumeration of {count} cases exceeds the limit of {limit}")]
    TooLarge { count: u128, limit: u128 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
