//! The polar transform `x = u H_n`, `H_n = A_n G2^{⊗n}`, over GF(2).
//!
//! `A_n` is the bit-reversal permutation on `n`-bit indices written MSB
//! first. The permutation is applied to the input (row-vector convention),
//! then the Kronecker power of `G2 = [[1, 0], [1, 1]]` is applied by an
//! in-place butterfly. Both factors are involutions and they commute, so
//! `H_n` is its own inverse.

use serde::{Deserialize, Serialize};

use crate::bits::{BitVector, IndexSet};
use crate::{Error, Result, MAX_EXPONENT};

/// Blocklength exponent `n` and blocklength `N = 2^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct TransformSpec {
    n: u32,
}

impl TransformSpec {
    pub fn new(n: u32) -> Result<Self> {
        if n > MAX_EXPONENT {
            return Err(Error::ExponentTooLarge(n));
        }
        Ok(TransformSpec { n })
    }

    pub fn exponent(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        1usize << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The exponent for a blocklength, if it is a power of two.
    pub fn for_len(len: usize) -> Result<Self> {
        if !len.is_power_of_two() {
            return Err(Error::Precondition(format!(
                "blocklength {len} is not a power of two"
            )));
        }
        TransformSpec::new(len.trailing_zeros())
    }
}

impl TryFrom<u32> for TransformSpec {
    type Error = Error;
    fn try_from(n: u32) -> Result<Self> {
        TransformSpec::new(n)
    }
}

impl From<TransformSpec> for u32 {
    fn from(t: TransformSpec) -> u32 {
        t.n
    }
}

/// The `n`-bit reversal of `i`.
#[inline]
pub fn bit_reversal(i: usize, n: u32) -> usize {
    if n == 0 {
        return 0;
    }
    i.reverse_bits() >> (usize::BITS - n)
}

/// The full bit-reversal permutation of `0..2^n`.
pub fn bit_reversal_permutation(n: u32) -> Vec<usize> {
    (0..1usize << n).map(|i| bit_reversal(i, n)).collect()
}

// Lanes whose position modulo 2h lies in the lower half, for h < 64.
const BUTTERFLY_MASKS: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0F0F_0F0F_0F0F_0F0F,
    0x00FF_00FF_00FF_00FF,
    0x0000_FFFF_0000_FFFF,
    0x0000_0000_FFFF_FFFF,
];

/// Applies `G2^{⊗n}` in place: at each stage with half-width `h`,
/// `v[j] ^= v[j + h]` for every `j` in the lower half of a `2h` block.
pub fn kronecker_in_place(v: &mut BitVector) {
    let len = v.len();
    debug_assert!(len.is_power_of_two());
    let words = v.words_mut();
    let mut h = 1usize;
    while h < len {
        if h < 64 {
            let mask = BUTTERFLY_MASKS[h.trailing_zeros() as usize];
            for w in words.iter_mut() {
                *w ^= (*w >> h) & mask;
            }
        } else {
            let hw = h / 64;
            for block in words.chunks_mut(2 * hw) {
                let (lo, hi) = block.split_at_mut(hw);
                for (a, b) in lo.iter_mut().zip(hi.iter()) {
                    *a ^= *b;
                }
            }
        }
        h <<= 1;
    }
}

/// Returns `u H_n`.
pub fn polar_transform(u: &BitVector, spec: TransformSpec) -> Result<BitVector> {
    let len = spec.len();
    if u.len() != len {
        return Err(Error::LengthMismatch {
            expected: len,
            actual: u.len(),
        });
    }
    let n = spec.exponent();
    let mut x = BitVector::zeros(len);
    for j in 0..len {
        let b = u.get(bit_reversal(j, n));
        if b == 1 {
            x.set(j, 1);
        }
    }
    kronecker_in_place(&mut x);
    Ok(x)
}

/// Shorthand for vectors whose length already fixes the exponent.
pub fn transform(u: &BitVector) -> BitVector {
    let spec = TransformSpec::for_len(u.len()).expect("length must be a power of two");
    polar_transform(u, spec).expect("length checked")
}

/// Components of `u` at the indices of `set`, in ascending index order.
pub fn extract(u: &BitVector, set: &IndexSet) -> Result<BitVector> {
    if let Some(max) = set.max() {
        if max >= u.len() {
            return Err(Error::IndexOutOfRange {
                index: max,
                len: u.len(),
            });
        }
    }
    Ok(BitVector::from_bits(
        &set.iter().map(|i| u.get(i)).collect::<Vec<_>>(),
    ))
}

/// Writes `values` into `u` at the indices of `set`.
pub fn scatter(u: &mut BitVector, set: &IndexSet, values: &BitVector) -> Result<()> {
    if set.len() != values.len() {
        return Err(Error::LengthMismatch {
            expected: set.len(),
            actual: values.len(),
        });
    }
    for (k, i) in set.iter().enumerate() {
        if i >= u.len() {
            return Err(Error::IndexOutOfRange { index: i, len: u.len() });
        }
        u.set(i, values.get(k));
    }
    Ok(())
}
