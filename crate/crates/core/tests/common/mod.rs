//! Brute-force references written without the library's algorithms.
#![allow(dead_code)]

use polarlab_core::BinaryInputChannel;

/// Index with its `n` low bits reversed, via the binary string.
pub fn reverse_bits(i: usize, n: u32) -> usize {
    if n == 0 {
        return 0;
    }
    let s: String = format!("{:0width$b}", i, width = n as usize).chars().rev().collect();
    usize::from_str_radix(&s, 2).unwrap()
}

/// `x = u B_N F^{⊗n}` from the generator-matrix definition:
/// `F^{⊗n}[i][j] = 1` iff the bits of `j` are a subset of those of `i`.
pub fn encode(u: &[u8]) -> Vec<u8> {
    let len = u.len();
    let n = len.trailing_zeros();
    let permuted: Vec<u8> = (0..len).map(|i| u[reverse_bits(i, n)]).collect();
    (0..len)
        .map(|j| (0..len).filter(|&i| i & j == j).fold(0, |acc, i| acc ^ permuted[i]))
        .collect()
}

/// Bits of `v`, most significant first, as a length-`len` word.
pub fn word(v: usize, len: usize) -> Vec<u8> {
    (0..len).map(|j| ((v >> (len - 1 - j)) & 1) as u8).collect()
}

/// `W_N^{(i)}(y, u_0^{i−1} | b)` for `b = 0, 1`, summing over every tail.
pub fn bit_channel(w: &BinaryInputChannel, y: &[usize], prefix: &[u8]) -> (f64, f64) {
    let len = y.len();
    let i = prefix.len();
    let tail = len - i - 1;
    let mut out = [0.0; 2];
    for b in 0..2u8 {
        for t in 0..1usize << tail {
            let mut u = prefix.to_vec();
            u.push(b);
            u.extend(word(t, tail));
            let x = encode(&u);
            out[b as usize] += y.iter().zip(&x).map(|(&yj, &xj)| w.prob(yj, xj)).product::<f64>();
        }
    }
    let scale = 0.5f64.powi(len as i32 - 1);
    (out[0] * scale, out[1] * scale)
}

/// Every observation vector of length `len` over `m` symbols.
pub fn observations(m: usize, len: usize) -> Vec<Vec<usize>> {
    let total = m.pow(len as u32);
    (0..total)
        .map(|mut v| {
            let mut y = vec![0; len];
            for j in (0..len).rev() {
                y[j] = v % m;
                v /= m;
            }
            y
        })
        .collect()
}

/// Bhattacharyya parameters of all `N` synthetic channels by enumeration.
pub fn z_brute(w: &BinaryInputChannel, n: u32) -> Vec<f64> {
    let len = 1usize << n;
    let obs = observations(w.outputs(), len);
    (0..len)
        .map(|i| {
            let mut z = 0.0;
            for y in &obs {
                for p in 0..1usize << i {
                    let (a, b) = bit_channel(w, y, &word(p, i));
                    z += (a * b).sqrt();
                }
            }
            z
        })
        .collect()
}

pub fn h2(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}

/// `h2⁻¹` on `[0, 1/2]` by Newton steps from the left.
pub fn h2_inverse(h: f64) -> f64 {
    let mut p: f64 = 1e-3;
    for _ in 0..200 {
        let slope = ((1.0 - p) / p).log2();
        p = (p - (h2(p) - h) / slope).clamp(1e-15, 0.5);
    }
    p
}

/// `P(X ≥ k)` for `X ~ Binomial(trials, p)`.
pub fn binomial_upper_tail(k: u64, trials: u64, p: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    if p <= 0.0 {
        return 0.0;
    }
    let ln_p = p.ln();
    let ln_q = (1.0 - p).ln();
    let mut ln_choose = 0.0;
    let mut total = 0.0;
    for j in 0..=trials {
        if j > 0 {
            ln_choose += ((trials - j + 1) as f64).ln() - (j as f64).ln();
        }
        if j >= k {
            total += (ln_choose + j as f64 * ln_p + (trials - j) as f64 * ln_q).exp();
        }
    }
    total.min(1.0)
}
