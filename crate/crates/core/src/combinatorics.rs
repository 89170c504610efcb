//! Binomials, subset enumeration and small-number helpers.

use itertools::Itertools;
use num_integer::Integer;

/// Exact `C(n, k)`; zero when `k > n`.
///
/// Panics if the result does not fit in a `u64`, which never happens for
/// desk-scale clusters.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step.
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    u64::try_from(acc).expect("binomial coefficient overflows u64")
}

/// All `s`-subsets of `{1, ..., ground}` in lexicographic order of their
/// sorted member lists.
pub fn subsets_of_size(ground: usize, s: usize) -> Vec<Vec<usize>> {
    (1..=ground).combinations(s).collect()
}

/// `lcm(1, 2, ..., m)`, with `lcm_upto(0) == 1`.
pub fn lcm_upto(m: u64) -> u64 {
    (1..=m).fold(1, |acc, i| acc.lcm(&i))
}
