use thiserror::Error;

use crate::digraph::Vertex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("loop arc ({0}, {0})")]
    LoopArc(Vertex),

    #[error("duplicate arc ({0}, {1})")]
    DuplicateArc(Vertex, Vertex),

    #[error("vertex {vertex} out of range for a digraph on {vertex_count} vertices")]
    VertexOutOfRange { vertex: Vertex, vertex_count: usize },

    #[error("operation requires a nonempty vertex set")]
    EmptySet,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("enumeration budget of {limit} search steps exhausted")]
    BudgetExceeded { limit: usize },

    #[error("instance has {vertex_count} vertices, above the bound of {bound}")]
    SizeBound { vertex_count: usize, bound: usize },

    #[error("supplied set is not a 3-kernel of D - x0")]
    NotAKernel,

    #[error("D[M_{index}] has no 3-kernel")]
    SubkernelMissing { index: usize },

    #[error("D - {x0} has no 3-kernel")]
    NoBaseKernel { x0: Vertex },

    #[error("no road of length {length} from vertex {vertex}")]
    NoRoadFound { vertex: Vertex, length: usize },

    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Strips any line annotation added by the text parser.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtLine { source, .. } => source.root(),
            other => other,
        }
    }

    pub fn is_resource_bound(&self) -> bool {
        matches!(self.root(), Error::BudgetExceeded { .. } | Error::SizeBound { .. })
    }
}
