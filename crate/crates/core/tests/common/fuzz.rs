use std::panic::{catch_unwind, AssertUnwindSafe};

use mlse::io::Container;
use mlse::{decode_sequence, encode_sequence, EncryptionLevel};
use rand::Rng;

use super::{key, keystream, rng, textured_plane};

pub fn valid_container() -> Vec<u8> {
    let mut r = rng(31);
    let frames = vec![textured_plane(&mut r, 32, 24), textured_plane(&mut r, 32, 24)];
    encode_sequence(&frames, 25, EncryptionLevel::Heavyweight, &keystream()).unwrap().container.to_bytes()
}

#[derive(Debug, Default)]
pub struct FuzzStats {
    pub format_errors: usize,
    pub decode_errors: usize,
    pub decoded: usize,
}

/// Alternates random truncations and 1-4 bit flips of a valid container.
/// Anything that parses is also decoded. Panics are caught and reported.
pub fn fuzz_container(seed: u64, trials: usize) -> Result<FuzzStats, String> {
    let good = valid_container();
    let mut r = rng(seed);
    let mut stats = FuzzStats::default();
    for i in 0..trials {
        let mut bytes = good.clone();
        let truncated = i % 2 == 0;
        if truncated {
            bytes.truncate(r.gen_range(0..good.len()));
        } else {
            for _ in 0..r.gen_range(1..=4) {
                let bit = r.gen_range(0..bytes.len() * 8);
                bytes[bit / 8] ^= 0x80 >> (bit % 8);
            }
        }
        let outcome = catch_unwind(AssertUnwindSafe(|| match Container::parse(&bytes) {
            Err(e) => (true, e.offset <= bytes.len().max(32)),
            Ok(c) => (false, decode_sequence(&c, Some(&key())).is_ok()),
        }));
        match outcome {
            Err(_) => return Err(format!("trial {i}: panic")),
            Ok((true, offset_ok)) => {
                if !offset_ok {
                    return Err(format!("trial {i}: error offset past end of input"));
                }
                stats.format_errors += 1;
            }
            Ok((false, decoded)) => {
                if truncated {
                    return Err(format!("trial {i}: truncated container of {} bytes accepted", bytes.len()));
                }
                if decoded {
                    stats.decoded += 1;
                } else {
                    stats.decode_errors += 1;
                }
            }
        }
    }
    Ok(stats)
}
