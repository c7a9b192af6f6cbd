//! Stable hashing used for pair ids and for deriving per-item RNG seeds.
//!
//! Everything that needs randomness derives its generator from the global
//! seed plus a string key, so results never depend on iteration or thread
//! order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

fn digest(parts: &[&str]) -> [u8; 32] {
    let mut hasher = Sha256::new();
    for part in parts {
        hasher.update((part.len() as u64).to_le_bytes());
        hasher.update(part.as_bytes());
    }
    hasher.finalize().into()
}

/// Hex digest of the given parts, truncated to 16 characters.
pub fn stable_id(parts: &[&str]) -> String {
    digest(parts)[..8].iter().map(|b| format!("{b:02x}")).collect()
}

/// 64-bit seed mixed from a global seed and a key.
pub fn derive_seed(seed: u64, parts: &[&str]) -> u64 {
    let seed_str = seed.to_string();
    let mut all = Vec::with_capacity(parts.len() + 1);
    all.push(seed_str.as_str());
    all.extend_from_slice(parts);
    let d = digest(&all);
    u64::from_le_bytes(d[..8].try_into().expect("8 bytes"))
}

pub fn rng_for(seed: u64, parts: &[&str]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, parts))
}
