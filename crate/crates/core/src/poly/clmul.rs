//! Word-level carry-less multiplication kernels.
//!
//! `mul_limbs` picks the PCLMULQDQ kernel on x86_64 when the CPU has it and
//! a portable shift-XOR kernel otherwise. Both produce identical bits.

/// Operand size (in limbs) from which Karatsuba splitting is used.
pub(crate) const KARATSUBA_LIMBS: usize = 24;

/// Portable 64x64 -> 128 carry-less product, returned as (low, high).
#[inline]
pub(crate) fn clmul64_portable(a: u64, b: u64) -> (u64, u64) {
    let mut lo = 0u64;
    let mut hi = 0u64;
    let mut bits = b;
    while bits != 0 {
        let i = bits.trailing_zeros();
        lo ^= a << i;
        if i > 0 {
            hi ^= a >> (64 - i);
        }
        bits &= bits - 1;
    }
    (lo, hi)
}

#[cfg(target_arch = "x86_64")]
mod x86 {
    use std::arch::x86_64::*;

    #[target_feature(enable = "pclmulqdq,sse2")]
    pub(super) unsafe fn schoolbook(a: &[u64], b: &[u64], out: &mut [u64]) {
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            let va = _mm_set_epi64x(0, ai as i64);
            for (j, &bj) in b.iter().enumerate() {
                if bj == 0 {
                    continue;
                }
                let vb = _mm_set_epi64x(0, bj as i64);
                let r = _mm_clmulepi64_si128(va, vb, 0x00);
                let lo = _mm_cvtsi128_si64(r) as u64;
                let hi = _mm_cvtsi128_si64(_mm_unpackhi_epi64(r, r)) as u64;
                out[i + j] ^= lo;
                out[i + j + 1] ^= hi;
            }
        }
    }
}

fn schoolbook_portable(a: &[u64], b: &[u64], out: &mut [u64]) {
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            let (lo, hi) = clmul64_portable(ai, bj);
            out[i + j] ^= lo;
            out[i + j + 1] ^= hi;
        }
    }
}

#[inline]
fn has_pclmul() -> bool {
    #[cfg(target_arch = "x86_64")]
    {
        std::is_x86_feature_detected!("pclmulqdq")
    }
    #[cfg(not(target_arch = "x86_64"))]
    {
        false
    }
}

/// XORs the product `a * b` into `out`, which must hold `a.len() + b.len()` limbs.
fn schoolbook_words(a: &[u64], b: &[u64], out: &mut [u64], pclmul: bool) {
    #[cfg(target_arch = "x86_64")]
    if pclmul {
        // SAFETY: the caller observed the pclmulqdq feature at runtime.
        unsafe { x86::schoolbook(a, b, out) };
        return;
    }
    let _ = pclmul;
    schoolbook_portable(a, b, out);
}

fn karatsuba(a: &[u64], b: &[u64], out: &mut [u64], pclmul: bool) {
    let n = a.len().max(b.len());
    let short = a.len().min(b.len());
    if short < KARATSUBA_LIMBS || 2 * short < n {
        schoolbook_words(a, b, out, pclmul);
        return;
    }
    let m = n / 2;
    let (a0, a1) = a.split_at(m.min(a.len()));
    let (b0, b1) = b.split_at(m.min(b.len()));

    let mut z0 = vec![0u64; a0.len() + b0.len()];
    karatsuba(a0, b0, &mut z0, pclmul);
    let mut z2 = vec![0u64; a1.len() + b1.len()];
    karatsuba(a1, b1, &mut z2, pclmul);

    let mut sa = a0.to_vec();
    sa.resize(a0.len().max(a1.len()), 0);
    for (d, s) in sa.iter_mut().zip(a1) {
        *d ^= s;
    }
    let mut sb = b0.to_vec();
    sb.resize(b0.len().max(b1.len()), 0);
    for (d, s) in sb.iter_mut().zip(b1) {
        *d ^= s;
    }
    let mut z1 = vec![0u64; sa.len() + sb.len()];
    karatsuba(&sa, &sb, &mut z1, pclmul);
    for (d, s) in z1.iter_mut().zip(&z0) {
        *d ^= s;
    }
    for (d, s) in z1.iter_mut().zip(&z2) {
        *d ^= s;
    }

    for (d, s) in out.iter_mut().zip(&z0) {
        *d ^= s;
    }
    for (d, s) in out[m..].iter_mut().zip(&z1) {
        *d ^= s;
    }
    for (d, s) in out[2 * m..].iter_mut().zip(&z2) {
        *d ^= s;
    }
}

/// Full product of two limb slices; the result has `a.len() + b.len()` limbs.
pub(crate) fn mul_limbs(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len()];
    if a.is_empty() || b.is_empty() {
        return out;
    }
    karatsuba(a, b, &mut out, has_pclmul());
    out
}

/// Same product computed only with the portable kernel.
pub(crate) fn mul_limbs_portable(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len()];
    if a.is_empty() || b.is_empty() {
        return out;
    }
    karatsuba(a, b, &mut out, false);
    out
}

/// Inserts a zero bit after every bit of `x`: the square of a 32-bit polynomial.
#[inline]
pub(crate) fn spread32(x: u32) -> u64 {
    let mut x = x as u64;
    x = (x | (x << 16)) & 0x0000_FFFF_0000_FFFF;
    x = (x | (x << 8)) & 0x00FF_00FF_00FF_00FF;
    x = (x | (x << 4)) & 0x0F0F_0F0F_0F0F_0F0F;
    x = (x | (x << 2)) & 0x3333_3333_3333_3333;
    x = (x | (x << 1)) & 0x5555_5555_5555_5555;
    x
}

/// Gathers the even-indexed bits of `x`; inverse of [`spread32`].
#[inline]
pub(crate) fn compress_even(x: u64) -> u32 {
    let mut x = x & 0x5555_5555_5555_5555;
    x = (x | (x >> 1)) & 0x3333_3333_3333_3333;
    x = (x | (x >> 2)) & 0x0F0F_0F0F_0F0F_0F0F;
    x = (x | (x >> 4)) & 0x00FF_00FF_00FF_00FF;
    x = (x | (x >> 8)) & 0x0000_FFFF_0000_FFFF;
    x = (x | (x >> 16)) & 0x0000_0000_FFFF_FFFF;
    x as u32
}
