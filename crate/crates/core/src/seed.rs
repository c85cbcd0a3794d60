//! Seed derivation for reproducible parallel experiments.

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// One round of splitmix64.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for stream `(a, b)` under `master`. Distinct label pairs give
/// unrelated seeds; the result depends on nothing else.
pub fn derive_seed(master: u64, a: u64, b: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ a) ^ b.wrapping_mul(GOLDEN))
}

/// Stream labels used by the protocol simulator.
pub mod label {
    pub const ALICE_STRING: u64 = 1;
    pub const NOISE: u64 = 2;
    pub const CODEWORD: u64 = 3;
    pub const PERTURBATION: u64 = 4;
}
