//! Sieves, primality testing, and integer factorization helpers.
//!
//! Everything here works on `u64` values small enough for trial division
//! (the library caps moduli at 2^20, and sieve arguments stay desk-scale).

/// Ascending list of all primes `<= x` by a sieve of Eratosthenes.
///
/// Returns an empty list for `x < 2`.
pub fn sieve_upto(x: u64) -> Vec<u64> {
    if x < 2 {
        return Vec::new();
    }
    let n = x as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// Number of primes `<= x`.
pub fn prime_count(x: u64) -> u64 {
    sieve_upto(x).len() as u64
}

/// Trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization `n = prod q_i^{e_i}` with ascending `q_i`.
///
/// `factorize(1)` is the empty product.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1, "factorize requires n >= 1");
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0u32;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// All divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (q, e) in factorize(n) {
        let prev = out.clone();
        let mut qk = 1u64;
        for _ in 0..e {
            qk *= q;
            out.extend(prev.iter().map(|d| d * qk));
        }
    }
    out.sort_unstable();
    out
}

pub fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Euler's totient, by trial-division factorization.
pub fn euler_phi(n: u64) -> u64 {
    let mut phi = n;
    for (q, _) in factorize(n) {
        phi = phi / q * (q - 1);
    }
    phi
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_small() {
        assert_eq!(sieve_upto(10), vec![2, 3, 5, 7]);
        assert_eq!(sieve_upto(2), vec![2]);
        assert_eq!(sieve_upto(1), Vec::<u64>::new());
        assert_eq!(sieve_upto(100).len(), 25);
    }

    #[test]
    fn primality() {
        assert!(is_prime(2) && is_prime(3) && is_prime(1009));
        assert!(!is_prime(1) && !is_prime(9) && !is_prime(1001));
        let sieved = sieve_upto(2000);
        for n in 0..=2000u64 {
            assert_eq!(is_prime(n), sieved.binary_search(&n).is_ok());
        }
    }

    #[test]
    fn factorization_roundtrip() {
        for n in 1..=3000u64 {
            let f = factorize(n);
            let back: u64 = f.iter().map(|&(q, e)| q.pow(e)).product();
            assert_eq!(back, n);
            for w in f.windows(2) {
                assert!(w[0].0 < w[1].0);
            }
        }
        assert_eq!(factorize(12), vec![(2, 2), (3, 1)]);
    }

    #[test]
    fn divisor_lists() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(49), vec![1, 7, 49]);
    }

    #[test]
    fn phi_values() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(2), 1);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(97), 96);
    }
}
