//! Small-integer number theory helpers.

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization as ascending (prime, exponent) pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let m = m as u128;
    let (mut r, mut b) = (1 % m, b as u128 % m);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r as u64
}

/// Legendre symbol (a / p) for an odd prime p: 1, -1, or 0.
pub fn legendre(a: i128, p: u64) -> i32 {
    let r = a.rem_euclid(p as i128) as u64;
    if r == 0 {
        return 0;
    }
    match pow_mod(r, (p - 1) / 2, p) {
        1 => 1,
        _ => -1,
    }
}

pub fn is_square(n: u64) -> bool {
    let r = (n as f64).sqrt() as u64;
    (r.saturating_sub(1)..=r + 1).any(|s| s * s == n)
}

/// Smallest quadratic non-residue modulo an odd prime.
pub fn least_nonresidue(p: u64) -> u64 {
    (2..p).find(|&u| legendre(u as i128, p) == -1).expect("odd prime has a non-residue")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_and_factors() {
        let primes: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(factorize(1458), vec![(2, 1), (3, 6)]);
        assert_eq!(factorize(1), vec![]);
    }

    #[test]
    fn legendre_matches_euler_table() {
        // squares mod 7: 1, 2, 4
        let sym: Vec<i32> = (0..7).map(|a| legendre(a, 7)).collect();
        assert_eq!(sym, vec![0, 1, 1, -1, 1, -1, -1]);
        assert_eq!(legendre(-1, 5), 1);
        assert_eq!(legendre(-1, 3), -1);
        assert_eq!(legendre(2048, 3), -1);
        assert_eq!(least_nonresidue(17), 3);
    }

    #[test]
    fn squares() {
        assert!(is_square(0) && is_square(1) && is_square(144));
        assert!(!is_square(2) && !is_square(143));
    }
}
