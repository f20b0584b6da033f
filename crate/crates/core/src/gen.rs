//! Seeded random generation of valid configurations for property suites.

use rand::Rng;

use crate::config::{validate_configuration, ConfigFile, Configuration, FileKind};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfigGenerator {
    pub max_delta: u32,
    pub max_n: usize,
    /// Probability that a point after the forced free prefix is satellite.
    pub satellite_rate: f64,
}

impl Default for ConfigGenerator {
    fn default() -> Self {
        ConfigGenerator {
            max_delta: 4,
            max_n: 14,
            satellite_rate: 0.35,
        }
    }
}

impl ConfigGenerator {
    pub fn new(max_delta: u32, max_n: usize) -> Self {
        ConfigGenerator {
            max_delta,
            max_n,
            ..Self::default()
        }
    }

    /// A uniformly-shaped random valid configuration.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Configuration {
        let delta = rng.random_range(0..=self.max_delta);
        let n = rng.random_range(1..=self.max_n);
        let kind = match delta {
            0 => None,
            _ if rng.random_bool(0.5) => Some(FileKind::Special),
            _ => Some(FileKind::General),
        };
        self.build(rng, delta, n, kind, false)
    }

    /// A random configuration defining a non-special valuation.
    pub fn sample_nonspecial<R: Rng + ?Sized>(&self, rng: &mut R) -> Configuration {
        let delta = rng.random_range(1..=self.max_delta.max(1));
        let lo = delta as usize + 1;
        let n = rng.random_range(lo..=self.max_n.max(lo));
        self.build(rng, delta, n, Some(FileKind::General), true)
    }

    /// Random satellites, then random legal incidences. With `nonspecial` the
    /// first `delta + 1` points stay free and `F_1` stops at `p_1`.
    fn build<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        delta: u32,
        n: usize,
        kind: Option<FileKind>,
        nonspecial: bool,
    ) -> Configuration {
        let mut sat: Vec<Option<usize>> = vec![None; n + 1];
        let first_sat = if nonspecial { delta as usize + 2 } else { 3 };
        for i in first_sat.max(3)..=n {
            if !rng.random_bool(self.satellite_rate) {
                continue;
            }
            sat[i] = match sat[i - 1] {
                Some(j) if rng.random_bool(0.5) => Some(j),
                _ => Some(i - 2),
            };
        }
        let lead = (2..=n).find(|&i| sat[i].is_some()).map_or(n, |i| i - 1);
        let satellites: Vec<(usize, usize)> =
            (1..=n).filter_map(|i| sat[i].map(|j| (i, j))).collect();

        let deep = |rng: &mut R| -> i64 { rng.random_range(1..=lead) as i64 };
        let (f1, m0, m1) = match kind {
            Some(FileKind::General) => {
                let f1 = if nonspecial || rng.random_bool(0.6) {
                    1
                } else {
                    deep(rng)
                };
                let nonspecial = delta >= 1 && f1 == 1 && lead > delta as usize;
                let m1 = if nonspecial {
                    let m1 = rng.random_range(delta as usize + 1..=lead) as i64;
                    if m1 == delta as i64 + 1 && rng.random_bool(0.5) {
                        None
                    } else {
                        Some(m1)
                    }
                } else {
                    None
                };
                (f1, 0, m1)
            }
            _ => {
                if rng.random_bool(0.5) {
                    (deep(rng), 1, None)
                } else {
                    (1, deep(rng), None)
                }
            }
        };
        let raw = ConfigFile::new(delta as i64, kind, n, &satellites, f1, m0, m1);
        validate_configuration(&raw).expect("generator only emits valid configurations")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generator_is_deterministic_and_valid() {
        let g = ConfigGenerator::default();
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let x = g.sample(&mut a);
            assert_eq!(x, g.sample(&mut b));
            assert!(x.n() <= 14 && x.delta() <= 4);
        }
        for _ in 0..300 {
            let x = g.sample_nonspecial(&mut a);
            assert!(x.incidences().m1 > x.delta() as usize);
        }
    }
}
