//! Deterministic 64-bit generator for simulations and randomized tests.
//!
//! The recurrence is xorshift64* (Marsaglia's xorshift with a multiplicative
//! output scramble):
//!
//! ```text
//! s ^= s >> 12;  s ^= s << 25;  s ^= s >> 27;
//! output = s * 0x2545F4914F6CDD1D
//! ```
//!
//! Seeding runs one splitmix64 round over the user seed so that nearby seeds
//! (seed, seed + 1, ...) give unrelated streams; a zero state is remapped to
//! a fixed nonzero constant. Integer-only and identical on every platform.

/// xorshift64* stream.
#[derive(Debug, Clone)]
pub struct Xorshift64Star {
    state: u64,
}

impl Xorshift64Star {
    pub fn new(seed: u64) -> Xorshift64Star {
        // One splitmix64 round.
        let mut z = seed.wrapping_add(0x9E3779B97F4A7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^= z >> 31;
        Xorshift64Star {
            state: if z == 0 { 0x9E3779B97F4A7C15 } else { z },
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut s = self.state;
        s ^= s >> 12;
        s ^= s << 25;
        s ^= s >> 27;
        self.state = s;
        s.wrapping_mul(0x2545F4914F6CDD1D)
    }

    /// Uniform draw from `0..n` by rejection sampling (no modulo bias).
    pub fn gen_range(&mut self, n: u64) -> u64 {
        assert!(n > 0, "gen_range(0)");
        let zone = u64::MAX - u64::MAX % n;
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % n;
            }
        }
    }

    /// `k` distinct values from `0..n` by partial Fisher-Yates, in draw order.
    pub fn sample_distinct(&mut self, n: u64, k: u64) -> Vec<u64> {
        assert!(k <= n, "cannot sample {k} distinct values from 0..{n}");
        let mut pool: Vec<u64> = (0..n).collect();
        let mut out = Vec::with_capacity(k as usize);
        for i in 0..k as usize {
            let j = i + self.gen_range(n - i as u64) as usize;
            pool.swap(i, j);
            out.push(pool[i]);
        }
        out
    }
}
