//! Passive attacks recovering session keys from public transcripts.

mod bcfrx;
mod integer;
mod linear;
mod report;

pub use bcfrx::*;
pub use integer::{attack_bcfrx_integer, is_special_linear, report_key_matrix, IntegerAttackConfig, LiftSearch};
pub use linear::{attack_hks, attack_ru, hks_public_sampler, LinearAttack, HKS_CHECK_DRAWS, HKS_MAX_SAMPLES};
pub use report::{AttackReport, PrimeRecord, RecoveredKey};
