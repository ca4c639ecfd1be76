use thiserror::Error;

/// A single reason a curve description is not a valid nodal curve.
#[derive(Clone, Debug, PartialEq, Eq, Error, serde::Serialize)]
pub enum Violation {
    #[error("component {component} carries two branch points at parameter {param}")]
    DuplicateBranch { component: String, param: String },
    #[error("node {node} references unknown component {component}")]
    DanglingBranch { node: String, component: String },
    #[error("curve is disconnected; unreachable components: {unreachable:?}")]
    Disconnected { unreachable: Vec<String> },
    #[error("duplicate identifier {0}")]
    DuplicateId(String),
    #[error("curve has no components")]
    Empty,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid curve: {}", format_violations(.0))]
    InvalidCurve(Vec<Violation>),
    #[error("decomposition has an empty side")]
    EmptySide,
    #[error("{components} components exceed the enumeration bound {bound}")]
    TooManyComponents { components: usize, bound: usize },
    #[error("twist point {param} on component {component} collides with a node branch")]
    TwistOnNode { component: String, param: String },
    #[error("invalid bundle: {0}")]
    InvalidBundle(String),
    #[error("the section space is zero")]
    ZeroSpace,
    #[error("section has a pole at {0} in the requested frame")]
    PoleAtPoint(String),
    #[error("bundles live on different subcurves")]
    BundleMismatch,
    #[error("genus {0} is too small (need at least 2)")]
    GenusTooSmall(i64),
    #[error("M has {0} sections; a pencil needs exactly 2")]
    NotAPencil(usize),
    #[error("M is not globally generated")]
    NotGloballyGenerated,
    #[error("only {0} sections; at least 3 are needed")]
    TooFewSections(usize),
    #[error("secant has {found} points but r - 1 = {expected}")]
    WrongCardinality { expected: usize, found: usize },
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
