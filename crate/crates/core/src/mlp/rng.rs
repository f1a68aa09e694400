/// Seeded xorshift64 generator used everywhere determinism matters
/// (weight init, epoch shuffles, dataset splits, synthetic corpora).
///
/// The sequence is fully specified so other implementations can reproduce
/// it bit for bit:
///
/// * **Seeding.** `state = splitmix64(seed)`; if that is zero, `state = 1`.
///   `splitmix64(z)`: `z += 0x9E3779B97F4A7C15; z = (z ^ (z >> 30)) *
///   0xBF58476D1CE4E5B9; z = (z ^ (z >> 27)) * 0x94D049BB133111EB;
///   return z ^ (z >> 31)` (all arithmetic wrapping mod 2^64).
/// * **Step.** `x ^= x << 13; x ^= x >> 7; x ^= x << 17`; the new state is
///   the output.
/// * **Unit float.** `(next_u64() >> 11) as f64 * 2^-53`, in `[0, 1)`.
/// * **Uniform.** `lo + (hi - lo) * unit`.
/// * **Below n.** `next_u64() % n`.
/// * **Shuffle.** Fisher-Yates from the back: for `i` in `n-1` down to `1`,
///   swap `i` with `below(i + 1)`.
#[derive(Debug, Clone)]
pub struct XorShift64 {
    state: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl XorShift64 {
    pub fn new(seed: u64) -> Self {
        let state = match splitmix64(seed) {
            0 => 1,
            s => s,
        };
        Self { state }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.state = x;
        x
    }

    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Integer in `[0, n)`; `n` must be positive.
    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    /// Integer in the inclusive range `[lo, hi]`.
    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        lo + self.below(hi - lo + 1)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }
}
