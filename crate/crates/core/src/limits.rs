/// Environment variable that overrides [`Limits::max_cells`].
pub const GUARDRAIL_ENV: &str = "KNAPGAP_GUARDRAIL_CELLS";

/// Resource caps for per-instance tables (group tables, sieves, DP scans).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_cells: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_cells: 100_000_000,
        }
    }
}

impl Limits {
    pub fn new(max_cells: u64) -> Self {
        Limits { max_cells }
    }

    /// Default limits, with the cell cap taken from `KNAPGAP_GUARDRAIL_CELLS` when set.
    pub fn from_env() -> Result<Self, String> {
        match std::env::var(GUARDRAIL_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map(Limits::new)
                .map_err(|_| format!("{GUARDRAIL_ENV}={v:?} is not a nonnegative integer")),
            Err(_) => Ok(Limits::default()),
        }
    }

    pub(crate) fn check(&self, what: &'static str, needed: u128) -> crate::Result<()> {
        if needed > u128::from(self.max_cells) {
            Err(crate::Error::BoundTooLarge {
                what,
                needed,
                limit: self.max_cells,
            })
        } else {
            Ok(())
        }
    }
}
