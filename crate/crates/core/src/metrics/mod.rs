//! Cipher-image statistics and randomness tests.

mod image_stats;
mod nist;

pub use image_stats::{
    correlation, entropy, histogram, npcr, pearson, uaci, Adjacency, MetricsReport,
    CORRELATION_LIMIT, DEFAULT_CORRELATION_PAIRS, ENTROPY_TARGET, NPCR_BAND, UACI_BAND,
};
pub use nist::{
    approximate_entropy, bits_from_bytes, bits_from_sequence, block_frequency, cumulative_sums,
    dft, longest_run, monobit, nist_core, parse_bits, runs, serial, test_passed, write_nist_csv,
    NistResult, NistTest, ALPHA, APEN_M, BLOCK_FREQUENCY_M, SERIAL_M,
};
