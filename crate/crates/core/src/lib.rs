//! Codes over `Σ_q` that correct any number of tandem duplications of length
//! at most `k ∈ {2, 3}`, built from `≤k`-irreducible words.
//!
//! - [`word`]: words, duplication, roots and a random duplication channel.
//! - [`enumeration`]: exact counts, minimum out-degrees, rates and `(ℓ, m)` choice.
//! - [`ranking`]: bijective rank/unrank of irreducible words.
//! - [`fse`]: the finite-state encoder over irreducible blocks.
//! - [`codec`]: the length-`n` code and its root decoder.
//! - [`oracle`]: brute-force references.

pub mod codec;
pub mod enumeration;
pub mod error;
pub mod fse;
pub mod oracle;
pub mod ranking;
pub mod word;

pub use codec::{code_rate, decode_codeword, encode_codeword, message_capacity, CodeSpec, TdCodec};
pub use enumeration::{
    asymptotic_rate, choose_params, code_size, count_irr, count_irr_prefix, growth_constant,
    min_out_degree, rate_table, CountTable, FseParams, MinDegreeTable, PrefixCountTable, RateInfo,
};
pub use error::{Error, Result};
pub use fse::{
    build_lookup_table, decode_stream, encode_stream, neighbor_index, neighbors, nth_neighbor,
    Backend, EdgeLabelTable, FseCodec,
};
pub use oracle::{
    all_roots_bfs, descendants_bfs, enumerate_irr_bruteforce, min_outdegree_bruteforce,
    OracleBudget,
};
pub use ranking::{rank_irr, rank_irr_prefix, unrank_irr, unrank_irr_prefix, Ranker};
pub use word::{
    extend_with_last, find_tandem_repeat, is_irreducible, random_descendant, root,
    tandem_duplicate, DupSystem, DuplicationEvent, Word,
};

pub use num_bigint::BigUint;
