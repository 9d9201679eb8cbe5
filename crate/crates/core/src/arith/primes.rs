//! Prime sieves, deterministic 64-bit primality and integer factorization.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// Below this bound factorization is plain trial division.
const TRIAL_DIVISION_LIMIT: u64 = 10_000_000;

/// All primes `<= limit` in ascending order. Empty for `limit < 2`.
pub fn sieve_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    // odd-only sieve: index i stands for 2i+1
    let half = n / 2 + 1;
    let mut composite = vec![false; half];
    composite[0] = true;
    let mut i = 1;
    while (2 * i + 1) * (2 * i + 1) <= n {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = p * p / 2;
            while j < half {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    let mut primes = Vec::with_capacity(n / 8 + 4);
    primes.push(2);
    for (i, &c) in composite.iter().enumerate() {
        let v = 2 * i + 1;
        if !c && v <= n {
            primes.push(v as u64);
        }
    }
    primes
}

/// Number of primes `<= limit`.
pub fn prime_pi(limit: u64) -> usize {
    sieve_primes(limit).len()
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn strong_probable_prime(n: u64, d: u64, s: u32, a: u64) -> bool {
    let a = a % n;
    if a == 0 {
        return true;
    }
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Deterministic Miller–Rabin for all `n < 2^64` (first twelve prime bases).
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    BASES.iter().all(|&a| strong_probable_prime(n, d, s, a))
}

/// Prime factorization as `(prime, exponent)` pairs with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct Factorization {
    pub pairs: Vec<(u64, u32)>,
}

impl Factorization {
    /// Reconstructs the factored integer; `None` on u64 overflow.
    pub fn value(&self) -> Option<u64> {
        self.pairs.iter().try_fold(1u64, |acc, &(p, e)| {
            p.checked_pow(e).and_then(|pe| acc.checked_mul(pe))
        })
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.pairs.iter().map(|&(p, _)| p)
    }

    pub fn is_squarefree(&self) -> bool {
        self.pairs.iter().all(|&(_, e)| e == 1)
    }

    /// All positive divisors, ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.pairs {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

fn trial_divide(mut n: u64, out: &mut Vec<(u64, u32)>) -> u64 {
    for p in [2u64, 3, 5] {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    // wheel mod 30
    const STEPS: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];
    let mut p = 7u64;
    let mut k = 0;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += STEPS[k];
        k = (k + 1) % 8;
    }
    n
}

/// Brent's variant of Pollard rho; returns a nontrivial factor of composite `n`.
fn pollard_brent(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut q) = (2u64, 2u64, 1u64);
        let mut g = 1u64;
        let mut r = 1u64;
        let mut ys = y;
        const M: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..M.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += M;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn split_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let f = pollard_brent(n);
    split_large(f, out);
    split_large(n / f, out);
}

/// Complete factorization of `n >= 1`; `factorize(1)` is the empty product.
pub fn factorize(n: u64) -> Factorization {
    assert!(n >= 1, "factorize requires n >= 1");
    let mut pairs = Vec::new();
    if n < TRIAL_DIVISION_LIMIT {
        let rest = trial_divide(n, &mut pairs);
        if rest > 1 {
            pairs.push((rest, 1));
        }
        return Factorization { pairs };
    }
    // strip small primes first; rho handles what is left
    let mut rest = n;
    for p in sieve_primes(1000) {
        let mut e = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            pairs.push((p, e));
        }
    }
    let mut big = Vec::new();
    split_large(rest, &mut big);
    big.sort_unstable();
    for p in big {
        match pairs.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => pairs.push((p, 1)),
        }
    }
    Factorization { pairs }
}

/// Number of distinct prime divisors.
pub fn omega(b: u64) -> u32 {
    assert!(b >= 1, "omega requires b >= 1");
    factorize(b).pairs.len() as u32
}

/// Smallest-prime-factor table for `0..=limit`.
pub struct SpfTable {
    spf: Vec<u32>,
}

impl SpfTable {
    pub fn new(limit: usize) -> Self {
        let mut spf = vec![0u32; limit + 1];
        for i in 2..=limit {
            if spf[i] == 0 {
                let mut j = i;
                while j <= limit {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        SpfTable { spf }
    }

    pub fn limit(&self) -> usize {
        self.spf.len() - 1
    }

    pub fn factorize(&self, mut n: usize) -> Factorization {
        assert!(n >= 1 && n <= self.limit());
        let mut pairs: Vec<(u64, u32)> = Vec::new();
        while n > 1 {
            let p = self.spf[n] as usize;
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            pairs.push((p as u64, e));
        }
        Factorization { pairs }
    }
}

/// Floor square root.
pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.checked_mul(x).is_none_or(|v| v > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|v| v <= n) {
        x += 1;
    }
    x
}

/// Floor of `n^(1/k)` for `k >= 1`.
pub fn iroot(n: u64, k: u32) -> u64 {
    if k == 1 || n < 2 {
        return n;
    }
    let mut x = (n as f64).powf(1.0 / k as f64).round() as u64;
    let fits = |x: u64| x.checked_pow(k).is_some_and(|v| v <= n);
    while x > 0 && !fits(x) {
        x -= 1;
    }
    while fits(x + 1) {
        x += 1;
    }
    x
}

/// A square root of `a` modulo an odd prime `p`, if one exists (Tonelli–Shanks).
pub fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_is_prime(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn sieve_small_cases() {
        assert_eq!(sieve_primes(10), vec![2, 3, 5, 7]);
        assert_eq!(sieve_primes(2), vec![2]);
        assert!(sieve_primes(1).is_empty());
        assert!(sieve_primes(0).is_empty());
        let by_trial = (0..=100).filter(|&n| trial_is_prime(n)).count();
        assert_eq!(by_trial, 25);
        assert_eq!(sieve_primes(100).len(), by_trial);
    }

    #[test]
    fn sieve_agrees_with_trial_division() {
        let primes = sieve_primes(20_000);
        let trial: Vec<u64> = (0..=20_000).filter(|&n| trial_is_prime(n)).collect();
        assert_eq!(primes, trial);
    }

    #[test]
    fn miller_rabin_matches_sieve_and_known_primes() {
        let primes = sieve_primes(100_000);
        let mut it = primes.iter().peekable();
        for n in 0..=100_000u64 {
            let expected = it.peek().is_some_and(|&&p| p == n);
            if expected {
                it.next();
            }
            assert_eq!(is_prime(n), expected, "n={n}");
        }
        assert!(is_prime(1_000_003));
        assert!(is_prime(18_446_744_073_709_551_557)); // largest 64-bit prime
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to 2,3,5,7
        assert!(!is_prime(18_446_744_073_709_551_557u64 - 2));
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(12).pairs, vec![(2, 2), (3, 1)]);
        assert!(factorize(1).pairs.is_empty());
        assert_eq!(factorize(1_000_003).pairs, vec![(1_000_003, 1)]);
        let n = 1_000_003u64 * 999_983;
        assert_eq!(factorize(n).pairs, vec![(999_983, 1), (1_000_003, 1)]);
        let n = 4_294_967_291u64 * 4_294_967_279;
        assert_eq!(factorize(n).pairs, vec![(4_294_967_279, 1), (4_294_967_291, 1)]);
        let n = 2u64.pow(10) * 3u64.pow(4) * 1_000_003u64.pow(2);
        assert_eq!(factorize(n).pairs, vec![(2, 10), (3, 4), (1_000_003, 2)]);
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega(1), 0);
        assert_eq!(omega(12), 2);
        assert_eq!(omega(30030), 6);
    }

    #[test]
    fn factorization_reconstructs_up_to_a_million() {
        for n in 2..=1_000_000u64 {
            let f = factorize(n);
            assert_eq!(f.value(), Some(n));
            assert!(f.primes().all(is_prime));
            assert!(f.pairs.windows(2).all(|w| w[0].0 < w[1].0));
        }
    }

    #[test]
    fn spf_table_agrees_with_factorize() {
        let t = SpfTable::new(50_000);
        for n in 1..=50_000usize {
            assert_eq!(t.factorize(n), factorize(n as u64));
        }
    }

    #[test]
    fn divisors_of_360() {
        let d = factorize(360).divisors();
        assert_eq!(d.len(), 24);
        assert!(d.iter().all(|x| 360 % x == 0));
    }

    #[test]
    fn roots() {
        for n in 0..10_000u64 {
            let r = isqrt(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n);
            let c = iroot(n, 3);
            assert!(c * c * c <= n && (c + 1).pow(3) > n);
        }
        assert_eq!(isqrt(u64::MAX), 4_294_967_295);
    }

    #[test]
    fn tonelli_shanks() {
        for p in sieve_primes(2000).into_iter().skip(1) {
            for a in 0..p.min(200) {
                match sqrt_mod_prime(a, p) {
                    Some(r) => assert_eq!(mul_mod(r, r, p), a % p),
                    None => assert!((0..p).all(|x| mul_mod(x, x, p) != a)),
                }
            }
        }
    }
}
