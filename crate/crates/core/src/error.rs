use thiserror::Error;

/// Per-degree lower/upper bounds reported when a computation cannot be pinned down.
pub type Bounds = [(u64, u64); 4];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("Sym2/Wedge2 applied to a subexpression of rank {rank} (at most 3 supported){}", span.map(|(a, b)| format!(" at {a}..{b}")).unwrap_or_default())]
    UnsupportedSchurPower { rank: u64, span: Option<(usize, usize)> },

    #[error("Koszul spectral sequence degeneration could not be certified (bounds {bounds:?}, chi {chi})")]
    AmbiguousSpectralSequence {
        /// First page: `first_page[j][q] = h^q(G, E(-j)) * binom(3, j)`.
        first_page: Vec<[u64; 7]>,
        bounds: Bounds,
        chi: i64,
    },

    #[error("long exact sequence leaves the cohomology of {label} undetermined (bounds {bounds:?})")]
    AmbiguousLongExactSequence { label: String, bounds: Bounds },

    #[error("window [{lo}, {hi}] too narrow: {reason}")]
    WindowTooNarrow { lo: i64, hi: i64, reason: String },

    #[error("Riemann-Roch produced a non-integral Euler characteristic {num}/{den}")]
    NonIntegralChi { num: i128, den: i128 },

    #[error("class is not in the integral span of (O(-1), U, Q*, O)")]
    NotInLattice,

    #[error("collection is not exceptional at ({i}, {j}): nonzero Ext degrees {degrees:?}")]
    NotExceptional { i: usize, j: usize, degrees: Vec<usize> },

    #[error("Hom({source_label}, {target}) vanishes, mutation undefined")]
    NoMorphisms { source_label: String, target: String },

    #[error("inconsistent cohomology table: {0}")]
    InconsistentTable(String),

    #[error("rank must be positive")]
    ZeroRank,

    #[error("bundle is not aCM: failures at {witnesses:?}")]
    NotAcm { witnesses: Vec<(usize, i64)> },

    #[error("bundle is not normalized: need -rank < c1 <= 0, got rank {rank}, c1 {c1}")]
    NotNormalized { rank: i64, c1: i64 },

    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("operation needs a locally free sheaf, {0} is not")]
    NotLocallyFree(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl Error {
    /// Stable machine-readable code used by the CLI.
    pub fn code(&self) -> &'static str {
        match self {
            Error::UnsupportedSchurPower { .. } => "unsupported_schur_power",
            Error::AmbiguousSpectralSequence { .. } => "ambiguous_spectral_sequence",
            Error::AmbiguousLongExactSequence { .. } => "ambiguous_long_exact_sequence",
            Error::WindowTooNarrow { .. } => "window_too_narrow",
            Error::NonIntegralChi { .. } => "non_integral_chi",
            Error::NotInLattice => "not_in_lattice",
            Error::NotExceptional { .. } => "not_exceptional",
            Error::NoMorphisms { .. } => "no_morphisms",
            Error::InconsistentTable(_) => "inconsistent_table",
            Error::ZeroRank => "zero_rank",
            Error::NotAcm { .. } => "not_acm",
            Error::NotNormalized { .. } => "not_normalized",
            Error::Syntax { .. } => "syntax_error",
            Error::NotLocallyFree(_) => "not_locally_free",
            Error::Internal(_) => "internal",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
