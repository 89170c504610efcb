use bitvec::prelude::*;

use super::{IvId, Payload};

/// splitmix64 finalizer.
fn mix(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Synthetic map output `v_{q,n}` of `bits` bits.
///
/// Byte `j` is the low byte of `mix(mix(mix(mix(seed) ^ q) ^ n) ^ j)`; bit `i`
/// of the value is bit `i % 8` (least significant first) of byte `i / 8`.
/// Deterministic and identical on every platform.
pub fn map_oracle(seed: u64, id: IvId, bits: usize) -> Payload {
    let prefix = mix(mix(mix(seed) ^ id.q as u64) ^ id.n as u64);
    let bytes: Vec<u8> = (0..bits.div_ceil(8)).map(|j| mix(prefix ^ j as u64) as u8).collect();
    let mut v = BitVec::<u8, Lsb0>::from_vec(bytes);
    v.truncate(bits);
    v
}
