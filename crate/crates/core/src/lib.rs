//! Exact computation of discriminants and centers of quantum algebras:
//! skew polynomial rings, generalized quantum Weyl algebras and Clifford
//! algebras over cyclotomic coefficient fields.
//!
//! The crate is organized around a small exact-arithmetic kernel
//! ([`arith`]), sparse multivariate polynomials ([`poly`]), a PBW
//! normal-form engine for the supported relation shapes ([`algebra`]),
//! the finite-field criterion deciding when centers are polynomial rings
//! ([`center`]), a brute-force trace/Gram discriminant oracle with the
//! matching closed forms ([`discr`]), quadratic-form machinery for
//! Clifford algebras ([`clifford`]), a certifying divisor-closure engine
//! ([`closure`]) and the `.alg` document front end ([`input`]).

pub mod algebra;
pub mod arith;
pub mod center;
pub mod clifford;
pub mod closure;
pub mod discr;
pub mod expr;
pub mod input;
pub mod poly;
pub mod report;
pub mod session;

/// Session-level resource limits; every cap is overridable from the CLI
/// or an input document's `[options]` section.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest allowed cyclotomic conductor.
    pub conductor_cap: u64,
    /// Largest allowed rank of the free module over the center.
    pub rank_cap: u64,
    /// Total-degree cap per algebra element, to fail fast on runaway input.
    pub degree_cap: u32,
    /// Round cap for the divisor-closure semidecision.
    pub max_rounds: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            conductor_cap: arith::DEFAULT_CONDUCTOR_CAP,
            rank_cap: 256,
            degree_cap: 64,
            max_rounds: 8,
        }
    }
}

/// Environment variable consulted for a rank-cap override.
pub const RANK_CAP_ENV: &str = "QALG_RANK_CAP";

impl Limits {
    /// Applies the `QALG_RANK_CAP` environment override, if present.
    pub fn with_env_overrides(mut self) -> Self {
        if let Ok(v) = std::env::var(RANK_CAP_ENV) {
            if let Ok(cap) = v.parse::<u64>() {
                self.rank_cap = cap;
            }
        }
        self
    }
}
