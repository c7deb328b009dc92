//! Seedable random streams and the variate generators used by the samplers.
//!
//! The base generator is ChaCha8, a counter-based cipher generator. A stream is
//! identified by `(seed, stream index)`: the 64-bit seed is expanded into the
//! ChaCha key and the index selects one of the 2^64 independent ChaCha
//! streams under that key. [`RandomStream::new`] uses index 0 and
//! [`RandomStream::derive`] gives worker `j` the index `j + 1`, so worker
//! streams never overlap each other or the parent.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{ensure_positive, Result};

/// Largest double strictly below one.
const ONE_BELOW: f64 = 1.0 - f64::EPSILON / 2.0;

/// A single-owner deterministic random stream.
#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    index: u64,
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        Self::with_index(seed, 0)
    }

    /// Sub-stream for worker `worker` under the parent `seed`.
    pub fn derive(seed: u64, worker: u64) -> Self {
        Self::with_index(seed, worker.wrapping_add(1))
    }

    fn with_index(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        Self { seed, index, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_index(&self) -> u64 {
        self.index
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform variate on the open interval (0, 1).
    ///
    /// 53 random bits on the grid `k / 2^53`; `k = 0` is rejected, and the
    /// grid never reaches 1.
    pub fn next_uniform(&mut self) -> f64 {
        loop {
            let k = self.rng.next_u64() >> 11;
            if k != 0 {
                return k as f64 * (1.0 / (1u64 << 53) as f64);
            }
        }
    }

    /// Standard normal variate (Marsaglia polar method, second value discarded).
    pub fn sample_normal(&mut self) -> f64 {
        loop {
            let u = 2.0 * self.next_uniform() - 1.0;
            let v = 2.0 * self.next_uniform() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                return u * (-2.0 * s.ln() / s).sqrt();
            }
        }
    }

    pub fn sample_exponential(&mut self, rate: f64) -> Result<f64> {
        ensure_positive("rate", rate)?;
        Ok(-self.next_uniform().ln() / rate)
    }

    /// Unit-scale gamma variate.
    ///
    /// Marsaglia–Tsang squeeze for `shape >= 1`; smaller shapes use
    /// `Gamma(a) = Gamma(a + 1) * U^(1/a)`, combined in log space. Results that
    /// would underflow are returned as the smallest positive normal double.
    pub fn sample_gamma(&mut self, shape: f64) -> Result<f64> {
        ensure_positive("shape", shape)?;
        if shape >= 1.0 {
            return Ok(self.marsaglia_tsang(shape));
        }
        let boosted = self.marsaglia_tsang(shape + 1.0);
        let log_value = boosted.ln() + self.next_uniform().ln() / shape;
        Ok(log_value.exp().max(f64::MIN_POSITIVE))
    }

    fn marsaglia_tsang(&mut self, shape: f64) -> f64 {
        let d = shape - 1.0 / 3.0;
        let c = 1.0 / (9.0 * d).sqrt();
        loop {
            let (x, v) = loop {
                let x = self.sample_normal();
                let v = 1.0 + c * x;
                if v > 0.0 {
                    break (x, v * v * v);
                }
            };
            let u = self.next_uniform();
            let x2 = x * x;
            if u < 1.0 - 0.0331 * x2 * x2 || u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
                return d * v;
            }
        }
    }

    /// Beta(alpha, beta) variate strictly inside (0, 1).
    ///
    /// Cheng's BB algorithm when both shapes exceed one, BC otherwise. A
    /// result that rounds to an endpoint is moved to the nearest interior
    /// double.
    pub fn sample_beta(&mut self, alpha: f64, beta: f64) -> Result<f64> {
        ensure_positive("alpha", alpha)?;
        ensure_positive("beta", beta)?;
        let x = if alpha.min(beta) > 1.0 {
            self.cheng_bb(alpha, beta)
        } else {
            self.cheng_bc(alpha, beta)
        };
        Ok(x.clamp(f64::MIN_POSITIVE, ONE_BELOW))
    }

    fn cheng_bb(&mut self, alpha: f64, beta: f64) -> f64 {
        let a = alpha.min(beta);
        let b = alpha.max(beta);
        let sum = a + b;
        let scale = ((sum - 2.0) / (2.0 * a * b - sum)).sqrt();
        let shift = a + 1.0 / scale;
        let (w, b) = loop {
            let u1 = self.next_uniform();
            let u2 = self.next_uniform();
            let v = scale * (u1 / (1.0 - u1)).ln();
            let w = a * v.exp();
            let z = u1 * u1 * u2;
            let r = shift * v - std::f64::consts::LN_2 * 2.0;
            let s = a + r - w;
            if s + 2.609_437_912_434_1 >= 5.0 * z {
                break (w, b);
            }
            let t = z.ln();
            if s > t || r + sum * (sum / (b + w)).ln() >= t {
                break (w, b);
            }
        };
        swap_ratio(w, b, a == alpha)
    }

    fn cheng_bc(&mut self, alpha: f64, beta: f64) -> f64 {
        let a = alpha.max(beta);
        let b = alpha.min(beta);
        let sum = a + b;
        let scale = 1.0 / b;
        let delta = 1.0 + a - b;
        let k1 = delta * (0.013_888_9 + 0.041_666_7 * b) / (a * scale - 0.777_778);
        let k2 = 0.25 + (0.5 + 0.25 / delta) * b;
        let w = loop {
            let u1 = self.next_uniform();
            let u2 = self.next_uniform();
            let z;
            if u1 < 0.5 {
                let y = u1 * u2;
                z = u1 * y;
                if 0.25 * u2 + z - y >= k1 {
                    continue;
                }
            } else {
                z = u1 * u1 * u2;
                if z <= 0.25 {
                    let v = scale * (u1 / (1.0 - u1)).ln();
                    break a * v.exp();
                }
                if z >= k2 {
                    continue;
                }
            }
            let v = scale * (u1 / (1.0 - u1)).ln();
            let w = a * v.exp();
            if sum * ((sum / (b + w)).ln() + v) - 1.386_294_361_119_890_6 >= z.ln() {
                break w;
            }
        };
        swap_ratio(w, b, a == alpha)
    }
}

/// `w / (b + w)` when the first shape drove `w`, else `b / (b + w)`, written to
/// survive `w` overflowing to infinity.
fn swap_ratio(w: f64, b: f64, first: bool) -> f64 {
    if first {
        1.0 / (1.0 + b / w)
    } else {
        1.0 / (1.0 + w / b)
    }
}
