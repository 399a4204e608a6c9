use serde::Serialize;

/// Run-level knobs shared by every computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Settings {
    /// Seed for every randomized step; recorded in reports.
    pub seed: u64,
    /// Largest extension degree tried when searching for a splitting field.
    pub field_cap: usize,
    /// Largest group the engine will materialize.
    pub group_cap: usize,
    pub h1_cap: usize,
    pub h2_cap: usize,
    /// Random algebra elements drawn before the exhaustive irreducibility fallback.
    pub meataxe_budget: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            seed: 1,
            field_cap: 12,
            group_cap: crate::group::DEFAULT_GROUP_CAP,
            h1_cap: 2000,
            h2_cap: 256,
            meataxe_budget: 200,
        }
    }
}

impl Settings {
    pub fn with_seed(seed: u64) -> Settings {
        Settings { seed, ..Settings::default() }
    }
}
