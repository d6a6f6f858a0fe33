use thiserror::Error;

use crate::adele::Place;
use crate::duality::Violation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole: {0}")]
    Pole(String),

    /// A Wilson-type component sits at a place where the character is ramified.
    #[error("ramified collision at {0}: Wilson and t'Hooft insertions cannot share a place")]
    RamifiedCollision(Place),

    #[error("{0} is ramified in the extension")]
    RamifiedPlace(Place),

    #[error("the prime above 3 is wild for cubic symbols")]
    WildPlace,

    #[error("Wilson data is not the ramification pattern of any quadratic field")]
    NotDualizable,

    #[error("invalid insertion configuration: {}", format_violations(.0))]
    Config(Vec<Violation>),

    #[error("parse error: {0}")]
    Parse(String),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
