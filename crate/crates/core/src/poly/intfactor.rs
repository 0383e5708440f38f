//! Integer factorization support for the rational-root search: trial
//! division, deterministic-enough Miller-Rabin, and Brent's variant of
//! Pollard rho. Desk-scale inputs only.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

const SMALL_PRIME_LIMIT: u64 = 20_000;

/// All positive divisors of |n|, ascending. n must be nonzero.
pub fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    assert!(!n.is_zero(), "divisors of zero");
    let factors = factorize(&n);
    let mut divs = vec![BigInt::one()];
    for (p, e) in factors {
        let base_len = divs.len();
        let mut pk = BigInt::one();
        for _ in 0..e {
            pk = &pk * &p;
            for i in 0..base_len {
                divs.push(&divs[i] * &pk);
            }
        }
    }
    divs.sort();
    divs
}

/// Prime factorization of n >= 1 as (prime, exponent), primes ascending.
pub fn factorize(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    let mut n = n.clone();
    assert!(n > BigInt::zero());

    let push = |p: BigInt, e: u32, out: &mut Vec<(BigInt, u32)>| {
        if let Some(last) = out.iter_mut().find(|(q, _)| *q == p) {
            last.1 += e;
        } else {
            out.push((p, e));
        }
    };

    let mut d: u64 = 2;
    while d < SMALL_PRIME_LIMIT {
        let db = BigInt::from(d);
        if (&db * &db) > n {
            break;
        }
        let mut e = 0;
        while (&n % &db).is_zero() {
            n /= &db;
            e += 1;
        }
        if e > 0 {
            push(db, e, &mut out);
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n.is_one() {
        out.sort();
        return out;
    }
    // remaining cofactor: either prime or split recursively
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_probable_prime(&m) {
            push(m, 1, &mut out);
            continue;
        }
        if let Some(root) = exact_square_root(&m) {
            stack.push(root.clone());
            stack.push(root);
            continue;
        }
        let f = pollard_brent(&m);
        stack.push(&m / &f);
        stack.push(f);
    }
    out.sort();
    out
}

/// Miller-Rabin with the first twelve primes as bases; deterministic below
/// 3.3e24 and overwhelmingly reliable above.
pub fn is_probable_prime(n: &BigInt) -> bool {
    if *n < BigInt::from(2) {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let pb = BigInt::from(p);
        if *n == pb {
            return true;
        }
        if (n % &pb).is_zero() {
            return false;
        }
    }
    let one = BigInt::one();
    let n_minus_1 = n - &one;
    let mut d = n_minus_1.clone();
    let mut s = 0u32;
    while (&d % 2u8).is_zero() {
        d /= 2u8;
        s += 1;
    }
    'bases: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = x.modpow(&BigInt::from(2u8), n);
            if x == n_minus_1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn exact_square_root(n: &BigInt) -> Option<BigInt> {
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

/// Brent-cycle Pollard rho; n must be odd composite with no small factors.
fn pollard_brent(n: &BigInt) -> BigInt {
    let one = BigInt::one();
    let two = BigInt::from(2u8);
    for c in 1u64.. {
        let cb = BigInt::from(c);
        let mut x = two.clone();
        let mut y = two.clone();
        let mut d = one.clone();
        let f = |v: &BigInt| (v * v + &cb) % n;
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            if diff.is_zero() {
                break; // cycle without factor, try next c
            }
            d = diff.gcd(n);
        }
        if !d.is_one() && d != *n {
            return d;
        }
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisors_of_12() {
        let d = divisors(&BigInt::from(12));
        let expected: Vec<BigInt> = [1, 2, 3, 4, 6, 12].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(d, expected);
    }

    #[test]
    fn factorize_mixed() {
        let n = BigInt::from(2u64 * 2 * 3 * 49_999 * 49_999); // 49999 is prime
        let f = factorize(&n);
        assert_eq!(
            f,
            vec![
                (BigInt::from(2), 2),
                (BigInt::from(3), 1),
                (BigInt::from(49_999), 2)
            ]
        );
    }

    #[test]
    fn factorize_large_semiprime() {
        // two 10-digit primes
        let p = BigInt::from(1_000_000_007u64);
        let q = BigInt::from(1_000_000_009u64);
        let f = factorize(&(&p * &q));
        assert_eq!(f, vec![(p, 1), (q, 1)]);
    }

    #[test]
    fn primality_small() {
        assert!(is_probable_prime(&BigInt::from(2)));
        assert!(is_probable_prime(&BigInt::from(97)));
        assert!(!is_probable_prime(&BigInt::from(1)));
        assert!(!is_probable_prime(&BigInt::from(561))); // Carmichael
    }
}
