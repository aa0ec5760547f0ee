//! Counter-based randomness: every trial draws from its own stream of a
//! seeded ChaCha generator, so results never depend on worker layout.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub(crate) fn trial_rng(seed: u64, trial_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial_index);
    rng
}

/// Stable seed derivation for sub-experiments (one stream family per salt).
pub(crate) fn derive_seed(base: u64, salt: u64) -> u64 {
    splitmix64(base ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Uniform f-subset of 0..nv, sorted ascending, written into `out`.
/// Floyd's algorithm for small f; partial Fisher-Yates otherwise.
pub(crate) fn sample_codes(rng: &mut ChaCha8Rng, nv: u64, f: u64, out: &mut Vec<u64>) {
    debug_assert!(f <= nv);
    out.clear();
    if f == 0 {
        return;
    }
    if f <= 1024 {
        for j in nv - f..nv {
            let pick = rng.random_range(0..=j);
            match out.binary_search(&pick) {
                Ok(_) => {
                    let at = out.binary_search(&j).unwrap_err();
                    out.insert(at, j);
                }
                Err(at) => out.insert(at, pick),
            }
        }
    } else {
        let mut deck: Vec<u64> = (0..nv).collect();
        for i in 0..f {
            let j = rng.random_range(i..nv);
            deck.swap(i as usize, j as usize);
        }
        out.extend_from_slice(&deck[..f as usize]);
        out.sort_unstable();
    }
}
