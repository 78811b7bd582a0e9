//! Setting sources: the honest uniform chooser and the conspiring chooser
//! that inspects potential outcomes before deciding.

use crate::model::SettingSource;
use crate::random::RandomStream;
use crate::table::Octuple;
use crate::value::Setting;

/// Honest source: each setting with probability 1/4, peek ignored.
#[derive(Debug, Clone, Copy, Default)]
pub struct UniformSource;

impl UniformSource {
    pub fn new() -> Self {
        UniformSource
    }
}

impl SettingSource for UniformSource {
    fn no_conspiracy(&self) -> bool {
        true
    }

    fn choose(
        &mut self,
        _trial_index: usize,
        rng: &mut RandomStream,
        _peek: Option<&Octuple>,
    ) -> Setting {
        Setting::ALL[rng.below(4)]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConspiracyTarget {
    Maximize,
    Minimize,
}

/// Conspiring source: peeks at the eight potential outcomes and picks the
/// setting whose realized product pushes the S-filtered CHSH statistic
/// toward the target.
///
/// Maximize: among settings whose product carries the sign that raises the
/// statistic (+1 for the three positive terms, −1 for ⟨AB⟩), pick uniformly;
/// with no favorable setting, pick uniformly among all four. Minimize: among
/// the least-chosen settings (so every correlation stays estimable), pick
/// the one whose selection leaves the projected statistic smallest.
#[derive(Debug, Clone)]
pub struct ConspiracySource {
    target: ConspiracyTarget,
    sums: [f64; 4],
    counts: [usize; 4],
}

impl ConspiracySource {
    pub fn new(target: ConspiracyTarget) -> Self {
        ConspiracySource {
            target,
            sums: [0.0; 4],
            counts: [0; 4],
        }
    }

    /// The sign with which a setting's product enters the CHSH sum.
    fn term_sign(setting: Setting) -> f64 {
        if setting == Setting::S1 {
            -1.0
        } else {
            1.0
        }
    }

    fn projected_statistic(&self, candidate: Setting, product: f64) -> f64 {
        let mut total = 0.0;
        for s in Setting::ALL {
            let i = s.ordinal();
            let (sum, count) = if s == candidate {
                (self.sums[i] + product, self.counts[i] + 1)
            } else {
                (self.sums[i], self.counts[i])
            };
            if count > 0 {
                total += Self::term_sign(s) * sum / count as f64;
            }
        }
        total.abs()
    }
}

impl SettingSource for ConspiracySource {
    fn no_conspiracy(&self) -> bool {
        false
    }

    fn choose(
        &mut self,
        _trial_index: usize,
        rng: &mut RandomStream,
        peek: Option<&Octuple>,
    ) -> Setting {
        let Some(octuple) = peek else {
            return Setting::ALL[rng.below(4)];
        };
        let products: [f64; 4] = std::array::from_fn(|i| octuple.product(Setting::ALL[i]));

        let chosen = match self.target {
            ConspiracyTarget::Maximize => {
                let favorable: Vec<Setting> = Setting::ALL
                    .into_iter()
                    .filter(|&s| products[s.ordinal()] == Self::term_sign(s))
                    .collect();
                if favorable.is_empty() {
                    Setting::ALL[rng.below(4)]
                } else {
                    favorable[rng.below(favorable.len())]
                }
            }
            ConspiracyTarget::Minimize => {
                let min_count = *self.counts.iter().min().expect("four settings");
                let mut best = f64::INFINITY;
                let mut argmin: Vec<Setting> = Vec::with_capacity(4);
                for s in Setting::ALL {
                    if self.counts[s.ordinal()] != min_count {
                        continue;
                    }
                    let projected = self.projected_statistic(s, products[s.ordinal()]);
                    if projected < best - 1e-15 {
                        best = projected;
                        argmin.clear();
                        argmin.push(s);
                    } else if (projected - best).abs() <= 1e-15 {
                        argmin.push(s);
                    }
                }
                argmin[rng.below(argmin.len())]
            }
        };

        self.sums[chosen.ordinal()] += products[chosen.ordinal()];
        self.counts[chosen.ordinal()] += 1;
        chosen
    }
}

/// Wrapper that withholds the peek from an inner source, structurally
/// enforcing no-conspiracy regardless of what the inner source would do.
pub struct PeekBlind<S>(pub S);

impl<S: SettingSource> SettingSource for PeekBlind<S> {
    fn no_conspiracy(&self) -> bool {
        true
    }

    fn choose(
        &mut self,
        trial_index: usize,
        rng: &mut RandomStream,
        _peek: Option<&Octuple>,
    ) -> Setting {
        self.0.choose(trial_index, rng, None)
    }
}
