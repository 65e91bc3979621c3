//! Honest-party simulators producing transcripts and ground truth.

mod bcfrx;
mod commuting;
pub mod doc;

pub use bcfrx::{
    alice_finish, bcfrx_keygen, bcfrx_run, bcfrx_sample_subgroup, embed_block, run_lambda, BcfrxKey,
    BcfrxSecrets, BcfrxTranscript, LambdaBound, Subgroup,
};
pub use commuting::{
    bivariate_eval, hks_bob_key, hks_sample_secret, hks_setup, hks_with_secrets, matrix_poly_eval,
    poly_sum_eval, ru_bob_key, ru_setup, ru_with_secrets, Bivariate, HksInstance, HksPublic, HksSecrets,
    RuInstance, RuPublic, RuSecrets,
};
