//! Iterative in-place radix-2 FFT with precomputed twiddles.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    /// Inverse transform, normalised by `1/len`.
    Inverse,
}

/// Butterfly stages whose span fits in these many points run chunk by chunk
/// (first an L1-sized, then an L2-sized chunk), so early passes stay in cache.
const BLOCKS: [usize; 2] = [1 << 11, 1 << 16];

/// A reusable transform plan for one power-of-two length.
#[derive(Debug, Clone)]
pub struct Fft {
    len: usize,
    /// Stage twiddles stored contiguously: for butterfly size `s`, the
    /// factors `exp(-2 pi i j / s)`, `j < s/2`, start at offset `s/2 - 1`.
    twiddles: Vec<Complex64>,
    bitrev: Vec<u32>,
}

impl Fft {
    pub fn new(len: usize) -> Result<Self> {
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::Size(format!(
                "FFT length must be a power of two, got {len}"
            )));
        }
        let mut twiddles = Vec::with_capacity(len.saturating_sub(1));
        let mut size = 2;
        while size <= len {
            twiddles.extend((0..size / 2).map(|j| {
                let (s, c) = (-2.0 * PI * j as f64 / size as f64).sin_cos();
                Complex64::new(c, s)
            }));
            size <<= 1;
        }
        let bits = len.trailing_zeros();
        let bitrev = (0..len as u32)
            .map(|i| if bits == 0 { 0 } else { i.reverse_bits() >> (32 - bits) })
            .collect();
        Ok(Self {
            len,
            twiddles,
            bitrev,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Transforms `data` in place. Panics if `data.len() != self.len()`.
    pub fn process(&self, data: &mut [Complex64], direction: Direction) {
        self.process_unscaled(data, direction);
        if direction == Direction::Inverse {
            let scale = 1.0 / self.len as f64;
            for z in data.iter_mut() {
                *z *= scale;
            }
        }
    }

    /// Like [`Fft::process`] but the inverse is not divided by `len`.
    pub(crate) fn process_unscaled(&self, data: &mut [Complex64], direction: Direction) {
        let n = self.len;
        assert_eq!(data.len(), n, "buffer length does not match FFT plan");

        self.bit_reverse(data);
        match direction {
            Direction::Forward => self.stages::<false>(data),
            Direction::Inverse => self.stages::<true>(data),
        }
    }

    pub(crate) fn bit_reverse<T>(&self, data: &mut [T]) {
        for (i, &r) in self.bitrev.iter().enumerate() {
            let r = r as usize;
            if i < r {
                data.swap(i, r);
            }
        }
    }

    /// Forward transform of natural-order input, leaving the output in
    /// bit-reversed order (decimation in frequency, no permutation pass).
    pub(crate) fn forward_to_bitrev(&self, data: &mut [Complex64]) {
        assert_eq!(data.len(), self.len, "buffer length does not match FFT plan");
        let n = self.len;
        let [inner, outer] = BLOCKS.map(|b| b.min(n));
        let mut size = n;
        while size > outer {
            if size / 2 > outer {
                self.dif_pair(data, size);
                size >>= 2;
            } else {
                self.dif_stage(data, size);
                size >>= 1;
            }
        }
        for chunk in data.chunks_exact_mut(outer) {
            let mut s = size;
            while s > inner {
                self.dif_stage(chunk, s);
                s >>= 1;
            }
            for sub in chunk.chunks_exact_mut(inner) {
                let mut s = s;
                while s >= 2 {
                    self.dif_stage(sub, s);
                    s >>= 1;
                }
            }
        }
    }

    /// Unscaled inverse transform of bit-reversed input, natural-order output.
    pub(crate) fn inverse_from_bitrev(&self, data: &mut [Complex64]) {
        assert_eq!(data.len(), self.len, "buffer length does not match FFT plan");
        self.stages::<true>(data);
    }

    fn dif_stage(&self, data: &mut [Complex64], size: usize) {
        let half = size / 2;
        let tw = &self.twiddles[half - 1..size - 1];
        for group in data.chunks_exact_mut(size) {
            let (lo, hi) = group.split_at_mut(half);
            for ((a, b), &w) in lo.iter_mut().zip(hi.iter_mut()).zip(tw) {
                let d = *a - *b;
                *a += *b;
                *b = d * w;
            }
        }
    }

    /// Stages `size` and `size / 2` of the frequency decimation, fused.
    fn dif_pair(&self, data: &mut [Complex64], size: usize) {
        let half = size / 2;
        let h = size / 4;
        let tw_big = &self.twiddles[half - 1..size - 1];
        let tw_small = &self.twiddles[h - 1..half - 1];
        for group in data.chunks_exact_mut(size) {
            let (left, right) = group.split_at_mut(half);
            let (q0, q1) = left.split_at_mut(h);
            let (q2, q3) = right.split_at_mut(h);
            for j in 0..h {
                let (wa, wb, w) = (tw_big[j], tw_big[j + h], tw_small[j]);
                let (a0, a2) = (q0[j] + q2[j], (q0[j] - q2[j]) * wa);
                let (a1, a3) = (q1[j] + q3[j], (q1[j] - q3[j]) * wb);
                q0[j] = a0 + a1;
                q1[j] = (a0 - a1) * w;
                q2[j] = a2 + a3;
                q3[j] = (a2 - a3) * w;
            }
        }
    }

    fn stages<const INVERSE: bool>(&self, data: &mut [Complex64]) {
        let n = self.len;
        let [inner, outer] = BLOCKS.map(|b| b.min(n));
        // all stages up to `outer` while each outer chunk is cache resident
        for chunk in data.chunks_exact_mut(outer) {
            for sub in chunk.chunks_exact_mut(inner) {
                let mut s = 2;
                while s <= inner {
                    self.stage::<INVERSE>(sub, s);
                    s <<= 1;
                }
            }
            let mut s = inner << 1;
            while s <= outer {
                self.stage::<INVERSE>(chunk, s);
                s <<= 1;
            }
        }
        let mut size = outer << 1;
        // remaining stages two at a time: one sweep over memory per pair
        while size << 1 <= n {
            self.stage_pair::<INVERSE>(data, size);
            size <<= 2;
        }
        if size <= n {
            self.stage::<INVERSE>(data, size);
        }
    }

    /// Butterfly stages `size` and `2 size` fused.
    fn stage_pair<const INVERSE: bool>(&self, data: &mut [Complex64], size: usize) {
        let h = size / 2;
        let tw1 = &self.twiddles[h - 1..size - 1];
        let tw2 = &self.twiddles[size - 1..2 * size - 1];
        for group in data.chunks_exact_mut(2 * size) {
            let (left, right) = group.split_at_mut(size);
            let (q0, q1) = left.split_at_mut(h);
            let (q2, q3) = right.split_at_mut(h);
            for j in 0..h {
                let (mut w1, mut wa, mut wb) = (tw1[j], tw2[j], tw2[j + h]);
                if INVERSE {
                    w1 = w1.conj();
                    wa = wa.conj();
                    wb = wb.conj();
                }
                let t = w1 * q1[j];
                let (a0, a1) = (q0[j] + t, q0[j] - t);
                let t = w1 * q3[j];
                let (a2, a3) = (q2[j] + t, q2[j] - t);
                let t = wa * a2;
                q0[j] = a0 + t;
                q2[j] = a0 - t;
                let t = wb * a3;
                q1[j] = a1 + t;
                q3[j] = a1 - t;
            }
        }
    }

    #[inline]
    fn stage<const INVERSE: bool>(&self, data: &mut [Complex64], size: usize) {
        let half = size / 2;
        let tw = &self.twiddles[half - 1..size - 1];
        for group in data.chunks_exact_mut(size) {
            let (lo, hi) = group.split_at_mut(half);
            for ((a, b), &w) in lo.iter_mut().zip(hi.iter_mut()).zip(tw) {
                let w = if INVERSE { w.conj() } else { w };
                let t = w * *b;
                *b = *a - t;
                *a += t;
            }
        }
    }
}

/// One-shot transform of a power-of-two length sequence.
pub fn fft(x: &[Complex64], direction: Direction) -> Result<Vec<Complex64>> {
    let plan = Fft::new(x.len())?;
    let mut out = x.to_vec();
    plan.process(&mut out, direction);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn naive_dft(x: &[Complex64]) -> Vec<Complex64> {
        let n = x.len();
        (0..n)
            .map(|k| {
                x.iter().enumerate().fold(Complex64::new(0.0, 0.0), |acc, (j, &v)| {
                    let ang = -2.0 * PI * ((j * k) % n) as f64 / n as f64;
                    acc + v * Complex64::from_polar(1.0, ang)
                })
            })
            .collect()
    }

    #[test]
    fn impulse_and_constant() {
        let y = fft(&[c(1.0), c(0.0), c(0.0), c(0.0)], Direction::Forward).unwrap();
        assert!(y.iter().all(|z| (*z - c(1.0)).norm() < 1e-15));
        let y = fft(&[c(1.0); 4], Direction::Forward).unwrap();
        assert!((y[0] - c(4.0)).norm() < 1e-15);
        assert!(y[1..].iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn unordered_pair_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for e in [0u32, 1, 2, 5, 12, 17, 18] {
            let n = 1usize << e;
            let plan = Fft::new(n).unwrap();
            let x: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let mut ordered = x.clone();
            plan.process(&mut ordered, Direction::Forward);
            let mut y = x.clone();
            plan.forward_to_bitrev(&mut y);
            plan.bit_reverse(&mut y);
            let scale = ordered.iter().fold(1.0f64, |m, z| m.max(z.norm()));
            assert!(y.iter().zip(&ordered).all(|(a, b)| (a - b).norm() < 1e-12 * scale), "n = {n}");
            plan.bit_reverse(&mut y);
            plan.inverse_from_bitrev(&mut y);
            assert!(y.iter().zip(&x).all(|(a, b)| (a / n as f64 - b).norm() < 1e-12), "n = {n}");
        }
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert!(matches!(fft(&[c(1.0); 6], Direction::Forward), Err(Error::Size(_))));
        assert!(Fft::new(0).is_err());
    }

    #[test]
    fn length_one_is_identity() {
        let y = fft(&[Complex64::new(3.0, -2.0)], Direction::Inverse).unwrap();
        assert_eq!(y, vec![Complex64::new(3.0, -2.0)]);
    }

    #[test]
    fn matches_naive_dft() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &n in &[2usize, 8, 64, 256] {
            let x: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let fast = fft(&x, Direction::Forward).unwrap();
            let slow = naive_dft(&x);
            let err: f64 = fast.iter().zip(&slow).map(|(a, b)| (a - b).norm_sqr()).sum();
            let nrm: f64 = slow.iter().map(|z| z.norm_sqr()).sum();
            assert!((err / nrm).sqrt() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn round_trip_1024() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x: Vec<Complex64> = (0..1024)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let back = fft(&fft(&x, Direction::Forward).unwrap(), Direction::Inverse).unwrap();
        let err: f64 = back.iter().zip(&x).map(|(a, b)| (a - b).norm_sqr()).sum();
        let nrm: f64 = x.iter().map(|z| z.norm_sqr()).sum();
        assert!((err / nrm).sqrt() < 1e-12);
    }
}
