//! Prime generation and integer factorization utilities: a segmented sieve
//! for coefficient streaming, deterministic Miller-Rabin for u64, Pollard rho
//! for field discriminants, and the descending prime stream used by
//! CRT-modular algorithms.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::modp::{mulm, powm};

/// Deterministic Miller-Rabin for u64 (standard 7-base certificate).
#[must_use]
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 325, 9375, 28178, 450775, 9780504, 1795265022] {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = powm(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulm(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Unbounded iterator of primes descending from just below 2^62, for CRT
/// accumulation. Each draw is Miller-Rabin certified.
pub fn crt_prime_iter() -> impl Iterator<Item = u64> {
    let mut n: u64 = (1 << 62) - 1;
    std::iter::from_fn(move || {
        loop {
            if n < 3 {
                return None;
            }
            let candidate = n;
            n -= 2;
            if is_prime_u64(candidate) {
                return Some(candidate);
            }
        }
    })
}

/// Ascending primes from 2, for factorization-by-trial and splitting loops.
pub fn small_prime_iter() -> impl Iterator<Item = u64> {
    let mut n: u64 = 1;
    std::iter::from_fn(move || {
        loop {
            n += 1;
            if is_prime_u64(n) {
                return Some(n);
            }
        }
    })
}

/// All primes <= bound by a bit sieve.
#[must_use]
pub fn primes_upto(bound: usize) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; bound + 1];
    let mut out = Vec::new();
    for n in 2..=bound {
        if !composite[n] {
            out.push(n as u64);
            let mut m = n * n;
            while m <= bound {
                composite[m] = true;
                m += n;
            }
        }
    }
    out
}

fn pollard_rho_u64(n: u64) -> u64 {
    // Brent's cycle variant; n must be odd composite, not a prime power
    // handled by the caller loop.
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mulm(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        let mut count = 0u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u64(x.abs_diff(y), n);
            count += 1;
            if count > 1 << 22 {
                break;
            }
        }
        if d != n && d != 1 {
            return d;
        }
        c += 1;
    }
}

#[must_use]
pub fn gcd_u64(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Factor a u64 into (prime, exponent) pairs, ascending by prime.
#[must_use]
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        if n == 1 {
            break;
        }
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    let mut stack = vec![n];
    let mut rest: Vec<u64> = Vec::new();
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            rest.push(m);
            continue;
        }
        let d = pollard_rho_u64(m);
        stack.push(d);
        stack.push(m / d);
    }
    rest.sort_unstable();
    for p in rest {
        match out.iter_mut().find(|(q, _)| *q == p) {
            Some((_, e)) => *e += 1,
            None => out.push((p, 1)),
        }
    }
    out.sort_unstable_by_key(|&(p, _)| p);
    out
}

/// Factor |n| for a BigInt that fits the u64 pipeline after stripping small
/// primes; number-field discriminants in scope stay far below 2^64 once
/// small primes are removed, and the assertion guards the assumption.
#[must_use]
pub fn factor_bigint(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut m = n.abs();
    assert!(!m.is_zero(), "factoring zero");
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    if m.is_one() {
        return out;
    }
    for p in primes_upto(100_000) {
        if m.is_one() {
            break;
        }
        let pb = BigInt::from(p);
        let mut e = 0u32;
        loop {
            let (q, r) = num_integer::Integer::div_rem(&m, &pb);
            if r.is_zero() {
                m = q;
                e += 1;
            } else {
                break;
            }
        }
        if e > 0 {
            out.push((pb, e));
        }
    }
    if !m.is_one() {
        let small: u64 = m.to_string().parse().unwrap_or_else(|_| {
            panic!("cofactor too large for the u64 factoring pipeline: {m}")
        });
        for (p, e) in factor_u64(small) {
            out.push((BigInt::from(p), e));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Non-panicking variant of factor_bigint: None when the cofactor after
/// small-prime stripping exceeds the u64 pipeline.
#[must_use]
pub fn try_factor_bigint(n: &BigInt) -> Option<Vec<(BigInt, u32)>> {
    let mut m = n.abs();
    if m.is_zero() {
        return None;
    }
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    for p in primes_upto(100_000) {
        if m.is_one() {
            break;
        }
        let pb = BigInt::from(p);
        let mut e = 0u32;
        loop {
            let (q, r) = num_integer::Integer::div_rem(&m, &pb);
            if r.is_zero() {
                m = q;
                e += 1;
            } else {
                break;
            }
        }
        if e > 0 {
            out.push((pb, e));
        }
    }
    if !m.is_one() {
        let small: u64 = m.to_string().parse().ok()?;
        for (p, e) in factor_u64(small) {
            out.push((BigInt::from(p), e));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn miller_rabin_agrees_with_sieve() {
        let sieved = primes_upto(2000);
        for n in 0..=2000u64 {
            assert_eq!(is_prime_u64(n), sieved.contains(&n), "n = {n}");
        }
    }

    #[test]
    fn miller_rabin_known_large_values() {
        assert!(is_prime_u64((1 << 61) - 1)); // Mersenne prime
        assert!(!is_prime_u64((1 << 62) - 1)); // 3 * 715827883 * 2147483647
        assert!(is_prime_u64(4611686018427387847)); // first prime below 2^62
    }

    #[test]
    fn crt_primes_are_prime_and_descending() {
        let ps: Vec<u64> = crt_prime_iter().take(5).collect();
        for w in ps.windows(2) {
            assert!(w[0] > w[1]);
        }
        for p in ps {
            assert!(is_prime_u64(p));
            assert!(p < (1 << 62));
        }
    }

    #[test]
    fn factor_u64_roundtrip() {
        for n in [2u64 * 3 * 3 * 25013, 600851475143, 1 << 40, 9999999967] {
            let fs = factor_u64(n);
            let mut back = 1u64;
            for (p, e) in &fs {
                assert!(is_prime_u64(*p));
                back *= p.pow(*e);
            }
            assert_eq!(back, n);
        }
    }

    #[test]
    fn factor_bigint_on_desk_discriminant_scale() {
        // 186624 = 2^8 * 3^6
        let fs = factor_bigint(&BigInt::from(186624));
        assert_eq!(
            fs,
            vec![(BigInt::from(2), 8), (BigInt::from(3), 6)]
        );
    }
}
