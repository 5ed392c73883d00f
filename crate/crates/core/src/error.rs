use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus {0} is not a prime power")]
    NotPrimePower(u64),
    #[error("modulus l^r = {l}^{r} does not fit the entry width")]
    ModulusTooLarge { l: u32, r: u32 },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invalid group data: {0}")]
    Group(String),
    #[error("invalid module data: {0}")]
    Module(String),
    #[error("not an intertwiner: {0}")]
    NotEquivariant(String),
    #[error("cap exceeded: {0}")]
    Cap(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("filtration error: {0}")]
    Filtration(String),
}

pub type Result<T> = std::result::Result<T, Error>;
