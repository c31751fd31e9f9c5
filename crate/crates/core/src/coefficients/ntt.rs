//! Exact integer convolution via number-theoretic transforms over five
//! NTT-friendly primes, recombined with Garner's algorithm.

/// (prime, primitive root); every prime is c·2^k + 1 with k ≥ 23.
const PRIMES: [(u64, u64); 5] = [
    (2_013_265_921, 31),
    (1_811_939_329, 13),
    (2_113_929_217, 5),
    (998_244_353, 3),
    (469_762_049, 3),
];

const SCHOOLBOOK_LIMIT: usize = 1024;

fn pow_mod(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1u64;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    acc
}

fn ntt(a: &mut [u64], invert: bool, modulus: u64, root: u64) {
    let n = a.len();
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j ^= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let mut w_len = pow_mod(root, (modulus - 1) / len as u64, modulus);
        if invert {
            w_len = pow_mod(w_len, modulus - 2, modulus);
        }
        for start in (0..n).step_by(len) {
            let mut w = 1u64;
            for k in 0..len / 2 {
                let u = a[start + k];
                let v = a[start + k + len / 2] * w % modulus;
                a[start + k] = if u + v >= modulus { u + v - modulus } else { u + v };
                a[start + k + len / 2] = if u >= v { u - v } else { u + modulus - v };
                w = w * w_len % modulus;
            }
        }
        len <<= 1;
    }
    if invert {
        let n_inv = pow_mod(n as u64, modulus - 2, modulus);
        for x in a.iter_mut() {
            *x = *x * n_inv % modulus;
        }
    }
}

fn reduce(v: i128, modulus: u64) -> u64 {
    v.rem_euclid(modulus as i128) as u64
}

fn convolve_mod(a: &[i128], b: &[i128], out_len: usize, modulus: u64, root: u64) -> Vec<u64> {
    let full = a.len() + b.len() - 1;
    let size = full.next_power_of_two();
    let mut fa = vec![0u64; size];
    let mut fb = vec![0u64; size];
    for (dst, &v) in fa.iter_mut().zip(a) {
        *dst = reduce(v, modulus);
    }
    for (dst, &v) in fb.iter_mut().zip(b) {
        *dst = reduce(v, modulus);
    }
    ntt(&mut fa, false, modulus, root);
    ntt(&mut fb, false, modulus, root);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x = *x * y % modulus;
    }
    ntt(&mut fa, true, modulus, root);
    fa.truncate(out_len.min(full));
    fa
}

/// Recombine residues into the signed integer of least absolute value.
/// Valid while that value is below 2^126 in magnitude.
fn garner(residues: &[u64; 5]) -> i128 {
    let mut digits = [0u64; 5];
    for i in 0..5 {
        let p = PRIMES[i].0;
        // Evaluate the partial mixed-radix number mod p.
        let mut value = 0u64;
        let mut radix = 1u64;
        for j in 0..i {
            value = (value + digits[j] % p * radix) % p;
            radix = radix * (PRIMES[j].0 % p) % p;
        }
        let diff = (residues[i] + p - value) % p;
        digits[i] = diff * pow_mod(radix, p - 2, p) % p;
    }
    let mut wrapped = 0u128;
    let mut modulus = 1u128;
    let mut fraction = 0.0f64;
    let total: f64 = PRIMES.iter().map(|&(p, _)| p as f64).product();
    let mut radix_f = 1.0f64;
    for i in 0..5 {
        wrapped = wrapped.wrapping_add((digits[i] as u128).wrapping_mul(modulus));
        fraction += digits[i] as f64 * radix_f / total;
        modulus = modulus.wrapping_mul(PRIMES[i].0 as u128);
        radix_f *= PRIMES[i].0 as f64;
    }
    if fraction > 0.5 {
        wrapped.wrapping_sub(modulus) as i128
    } else {
        wrapped as i128
    }
}

/// First `out_len` coefficients of the product of two integer polynomials.
pub fn convolve_exact(a: &[i128], b: &[i128], out_len: usize) -> Vec<i128> {
    if a.is_empty() || b.is_empty() || out_len == 0 {
        return vec![0; out_len];
    }
    let a = &a[..a.len().min(out_len)];
    let b = &b[..b.len().min(out_len)];
    let mut out = vec![0i128; out_len];
    if a.len().min(b.len()) <= 64 || a.len() + b.len() <= SCHOOLBOOK_LIMIT {
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate().take(out_len - i) {
                out[i + j] += x * y;
            }
        }
        return out;
    }
    let per_prime: Vec<Vec<u64>> = PRIMES
        .iter()
        .map(|&(p, g)| convolve_mod(a, b, out_len, p, g))
        .collect();
    let produced = per_prime[0].len();
    for (k, slot) in out.iter_mut().enumerate().take(produced) {
        let residues = [
            per_prime[0][k],
            per_prime[1][k],
            per_prime[2][k],
            per_prime[3][k],
            per_prime[4][k],
        ];
        *slot = garner(&residues);
    }
    out
}
