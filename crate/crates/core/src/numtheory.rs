//! Exact 64-bit number theory: primality, neighbouring primes, prime-gap
//! quotients, Legendre symbols, modular square roots and the four-square
//! generator sets used by the LPS Cayley graphs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;

const SMALL_PRIMES: [u64; 15] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];

/// Miller–Rabin bases that are deterministic for every n < 2^64 (Sinclair).
const WITNESSES_U64: [u64; 7] = [2, 325, 9375, 28178, 450775, 9780504, 1795265022];

/// Miller–Rabin bases that are deterministic for every n < 4 759 123 141.
const WITNESSES_U32: [u64; 3] = [2, 7, 61];

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
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

/// Deterministic primality test valid over the whole `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    if n < 47 * 47 {
        return true;
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    let bases: &[u64] = if n < 4_759_123_141 {
        &WITNESSES_U32
    } else {
        &WITNESSES_U64
    };
    bases.iter().all(|&a| strong_probable_prime(n, d, s, a))
}

/// Largest prime strictly below `k`.
pub fn prev_prime(k: u64) -> Result<u64> {
    if k < 3 {
        return Err(Error::InvalidArgument(format!(
            "prev_prime needs k >= 3, got {k}"
        )));
    }
    let mut c = k - 1;
    while !is_prime(c) {
        c -= 1;
    }
    Ok(c)
}

/// Smallest prime strictly above `p`.
pub fn next_prime(p: u64) -> u64 {
    let mut c = p + 1;
    while !is_prime(c) {
        c += 1;
    }
    c
}

/// The prime-gap plan for a target regularity `k`: the greatest prime `p`
/// below `k`, the following prime, and how many +1 steps take a
/// `(p+1)`-regular graph to a `k`-regular one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrimePlan {
    pub k: u64,
    pub p: u64,
    pub p_next: u64,
    pub increments: u64,
    pub delta_k: f64,
}

impl PrimePlan {
    pub fn for_regularity(k: u64) -> Result<Self> {
        let p = prev_prime(k)?;
        let p_next = next_prime(p);
        Ok(PrimePlan {
            k,
            p,
            p_next,
            increments: k - p - 1,
            delta_k: gap_quotient(p, p_next),
        })
    }
}

#[inline]
fn gap_quotient(p: u64, p_next: u64) -> f64 {
    (p_next - p) as f64 / (p as f64).sqrt()
}

/// `(p' - p) / sqrt(p)` where `p` is the greatest prime below `k`.
pub fn delta_k(k: u64) -> Result<f64> {
    Ok(PrimePlan::for_regularity(k)?.delta_k)
}

/// Maximum of `delta_k` over an inclusive range of `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaMax {
    pub lo: u64,
    pub hi: u64,
    pub max_delta: f64,
    /// Smallest `k` in the range attaining the maximum.
    pub witness_k: u64,
    pub p: u64,
    pub p_next: u64,
}

impl DeltaMax {
    /// The maximum rounded up to two decimals, as a table entry.
    pub fn ceil2(&self) -> f64 {
        ceil_to_hundredths(self.max_delta)
    }
}

pub fn ceil_to_hundredths(x: f64) -> f64 {
    (x * 100.0).ceil() / 100.0
}

const SCAN_CHUNK: u64 = 1 << 16;

/// All primes in the inclusive range `[lo, hi]`, ascending.
pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    if hi < lo {
        return Vec::new();
    }
    let chunks = ((hi - lo) / SCAN_CHUNK + 1) as usize;
    par::map_range(chunks, |c| {
        let start = lo + c as u64 * SCAN_CHUNK;
        let end = hi.min(start.saturating_add(SCAN_CHUNK - 1));
        (start..=end).filter(|&n| is_prime(n)).collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect()
}

/// Maximum of `delta_k(k)` for `k` in `[lo, hi]`.
///
/// `delta_k` only depends on `prev_prime(k)`, so the scan walks the primes
/// `p` from `prev_prime(lo)` to `prev_prime(hi)` together with their
/// successors rather than every `k`.
pub fn max_delta_in_range(lo: u64, hi: u64) -> Result<DeltaMax> {
    if lo < 3 || hi < lo {
        return Err(Error::InvalidArgument(format!(
            "need 3 <= lo <= hi, got [{lo}, {hi}]"
        )));
    }
    let first = prev_prime(lo)?;
    let last = prev_prime(hi)?;
    let mut primes = primes_between(first, last);
    primes.push(next_prime(last));

    let mut best: Option<(f64, u64, u64)> = None;
    for w in primes.windows(2) {
        let d = gap_quotient(w[0], w[1]);
        if best.is_none_or(|(b, _, _)| d > b) {
            best = Some((d, w[0], w[1]));
        }
    }
    let (max_delta, p, p_next) = best.expect("window holds at least one prime pair");
    Ok(DeltaMax {
        lo,
        hi,
        max_delta,
        witness_k: lo.max(p + 1),
        p,
        p_next,
    })
}

fn check_odd_prime(q: u64) -> Result<()> {
    if q == 2 || !is_prime(q) {
        return Err(Error::InvalidArgument(format!("{q} is not an odd prime")));
    }
    Ok(())
}

fn reduce(a: i64, q: u64) -> u64 {
    a.rem_euclid(q as i64) as u64
}

/// Legendre symbol `(a | q)` by Euler's criterion.
pub fn legendre(a: i64, q: u64) -> Result<i8> {
    check_odd_prime(q)?;
    let a = reduce(a, q);
    if a == 0 {
        return Ok(0);
    }
    Ok(if pow_mod(a, (q - 1) / 2, q) == 1 { 1 } else { -1 })
}

/// Square root of `a` modulo the odd prime `q` (Tonelli–Shanks).
/// Returns the smaller of the two roots.
pub fn sqrt_mod(a: i64, q: u64) -> Result<u64> {
    match legendre(a, q)? {
        0 => return Ok(0),
        -1 => return Err(Error::NonResidue { a, q }),
        _ => {}
    }
    let a = reduce(a, q);
    let s = (q - 1).trailing_zeros();
    let odd = (q - 1) >> s;
    let root = if s == 1 {
        pow_mod(a, (q + 1) / 4, q)
    } else {
        let z = (2..q)
            .find(|&z| pow_mod(z, (q - 1) / 2, q) == q - 1)
            .expect("odd prime has a non-residue");
        let mut m = s;
        let mut c = pow_mod(z, odd, q);
        let mut t = pow_mod(a, odd, q);
        let mut r = pow_mod(a, (odd + 1) / 2, q);
        while t != 1 {
            let mut i = 0;
            let mut t2 = t;
            while t2 != 1 {
                t2 = mul_mod(t2, t2, q);
                i += 1;
            }
            let b = pow_mod(c, 1 << (m - i - 1), q);
            m = i;
            c = mul_mod(b, b, q);
            t = mul_mod(t, c, q);
            r = mul_mod(r, b, q);
        }
        r
    };
    Ok(root.min(q - root))
}

/// A representation `p = a0² + a1² + a2² + a3²` with `a0` odd and positive
/// and `a1, a2, a3` even.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FourSquareTuple(pub i64, pub i64, pub i64, pub i64);

impl FourSquareTuple {
    pub fn norm(&self) -> i64 {
        self.0 * self.0 + self.1 * self.1 + self.2 * self.2 + self.3 * self.3
    }

    /// The quaternion conjugate, which is again a valid tuple.
    pub fn conjugate(&self) -> Self {
        FourSquareTuple(self.0, -self.1, -self.2, -self.3)
    }
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// All `p + 1` four-square tuples of a prime `p ≡ 1 (mod 4)`, in
/// lexicographic order.
pub fn four_square_generators(p: u64) -> Result<Vec<FourSquareTuple>> {
    if !is_prime(p) || p % 4 != 1 {
        return Err(Error::InvalidArgument(format!(
            "{p} is not a prime congruent to 1 mod 4"
        )));
    }
    let p = p as i64;
    let bound = isqrt(p as u64) as i64;
    let mut out = Vec::with_capacity(p as usize + 1);
    for a0 in (1..=bound).step_by(2) {
        for a1 in (-bound..=bound).filter(|x| x % 2 == 0) {
            for a2 in (-bound..=bound).filter(|x| x % 2 == 0) {
                let rest = p - a0 * a0 - a1 * a1 - a2 * a2;
                if rest < 0 {
                    continue;
                }
                let r = isqrt(rest as u64) as i64;
                if r * r != rest || r % 2 != 0 {
                    continue;
                }
                if r == 0 {
                    out.push(FourSquareTuple(a0, a1, a2, 0));
                } else {
                    out.push(FourSquareTuple(a0, a1, a2, -r));
                    out.push(FourSquareTuple(a0, a1, a2, r));
                }
            }
        }
    }
    out.sort();
    debug_assert_eq!(out.len() as i64, p + 1);
    Ok(out)
}
