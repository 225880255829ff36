//! Integer helpers shared by the coefficient rings: primality, modular
//! inverses and p-adic valuations.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SMALL_PRIMES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Miller-Rabin primality test.
///
/// Deterministic for `n < 3.3 * 10^24` (which covers every 64-bit input); above
/// that, 32 additional pseudo-random bases push the error below 2^-64.
pub fn is_prime(n: &BigInt) -> bool {
    if n < &BigInt::from(2) {
        return false;
    }
    for &q in SMALL_PRIMES.iter() {
        let q = BigInt::from(q);
        if n == &q {
            return true;
        }
        if (n % &q).is_zero() {
            return false;
        }
    }
    let one = BigInt::one();
    let n_minus_one = n - &one;
    let mut d = n_minus_one.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    let witness = |a: &BigInt| -> bool {
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_one {
            return true;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_one {
                return true;
            }
        }
        false
    };
    if !SMALL_PRIMES.iter().all(|&a| witness(&BigInt::from(a))) {
        return false;
    }
    let bound: BigInt = "3317044064679887385961981".parse().unwrap();
    if n < &bound {
        return true;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0f_b5d);
    let bits = n.bits();
    (0..32).all(|_| {
        let mut bytes = vec![0u8; bits.div_ceil(8) as usize];
        rng.fill(bytes.as_mut_slice());
        let a = BigInt::from_bytes_le(Sign::Plus, &bytes) % (n - 3u32) + 2u32;
        witness(&a)
    })
}

/// Inverse of `a` modulo `m` (`m > 1`), if it exists. The result lies in `[0, m)`.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let a = a.mod_floor(m);
    let egcd = a.extended_gcd(m);
    if !egcd.gcd.is_one() {
        return None;
    }
    Some(egcd.x.mod_floor(m))
}

/// The exponent of `p` in the nonzero integer `n`.
pub fn valuation(n: &BigInt, p: &BigInt) -> u32 {
    debug_assert!(!n.is_zero());
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// Strips all factors of `p`, returning `(v, n / p^v)`.
pub fn split_valuation(n: &BigInt, p: &BigInt) -> (u32, BigInt) {
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return (v, n);
        }
        n = q;
        v += 1;
    }
}
