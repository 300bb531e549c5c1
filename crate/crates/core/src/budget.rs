/// Hard limits on enumeration and search sizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of folded cells (`2 deg^n`) a decomposition may enumerate.
    pub cells: u64,
    /// Maximum number of cells a planar breadth-first search may visit.
    pub frontier: u64,
}

pub const DEFAULT_CELL_BUDGET: u64 = 1 << 22;
pub const DEFAULT_FRONTIER_BUDGET: u64 = 10_000_000;
pub const BUDGET_ENV: &str = "PILLOW_BUDGET";

impl Default for Budget {
    fn default() -> Self {
        Budget { cells: DEFAULT_CELL_BUDGET, frontier: DEFAULT_FRONTIER_BUDGET }
    }
}

impl Budget {
    pub fn uniform(limit: u64) -> Self {
        Budget { cells: limit, frontier: limit }
    }

    /// Defaults, overridden by a positive integer in `PILLOW_BUDGET`.
    pub fn from_env() -> Result<Self, String> {
        match std::env::var(BUDGET_ENV) {
            Ok(raw) => match raw.trim().parse::<u64>() {
                Ok(v) if v > 0 => Ok(Budget::uniform(v)),
                _ => Err(format!("{BUDGET_ENV} must be a positive integer, got {raw:?}")),
            },
            Err(_) => Ok(Budget::default()),
        }
    }
}
