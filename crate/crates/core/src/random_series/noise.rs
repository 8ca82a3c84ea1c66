use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Law of the i.i.d. noise Xₙ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RandomLaw {
    /// ±1 with probability ½.
    Rademacher,
    /// Standard normal.
    Gaussian,
    /// Uniform on [−a, a].
    BoundedUniform { a: f64 },
}

impl RandomLaw {
    /// Sub-Gaussian parameter σ with 𝔼[e^{rX}] ≤ e^{σ²r²/2}. For the uniform
    /// law sinh(ra)/(ra) ≤ e^{r²a²/6} gives σ = a/√3.
    pub fn sigma(&self) -> f64 {
        match *self {
            RandomLaw::Rademacher | RandomLaw::Gaussian => 1.0,
            RandomLaw::BoundedUniform { a } => a / 3f64.sqrt(),
        }
    }

    /// 𝔼[X²].
    pub fn second_moment(&self) -> f64 {
        match *self {
            RandomLaw::Rademacher | RandomLaw::Gaussian => 1.0,
            RandomLaw::BoundedUniform { a } => a * a / 3.0,
        }
    }

    /// Draw number `n` of the family seeded by `seed`. Each entry has its own
    /// ChaCha8 stream, so it depends only on `(seed, n)`.
    pub fn draw(&self, seed: u64, n: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(n);
        match *self {
            RandomLaw::Rademacher => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            RandomLaw::Gaussian => rng.sample(StandardNormal),
            RandomLaw::BoundedUniform { a } => rng.random_range(-a..=a),
        }
    }
}

/// X₀, …, X_{count−1} for one seed.
pub fn draw_noise(law: RandomLaw, count: usize, seed: u64) -> Vec<f64> {
    (0..count as u64).map(|n| law.draw(seed, n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_and_deterministic() {
        assert!(draw_noise(RandomLaw::Gaussian, 0, 1).is_empty());
        let a = draw_noise(RandomLaw::Gaussian, 100, 42);
        let b = draw_noise(RandomLaw::Gaussian, 100, 42);
        assert_eq!(a, b);
        let c = draw_noise(RandomLaw::Gaussian, 100, 43);
        assert_ne!(a, c);
    }

    #[test]
    fn prefix_stable() {
        let short = draw_noise(RandomLaw::Rademacher, 10, 7);
        let long = draw_noise(RandomLaw::Rademacher, 1000, 7);
        assert_eq!(short[..], long[..10]);
    }

    #[test]
    fn uniform_bounds() {
        let v = draw_noise(RandomLaw::BoundedUniform { a: 2.0 }, 1000, 3);
        assert!(v.iter().all(|x| x.abs() <= 2.0));
    }
}
