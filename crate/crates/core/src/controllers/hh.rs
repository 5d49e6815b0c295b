use rand::seq::SliceRandom;

use crate::rng::RandomSource;

/// Selection mechanisms of single-point selection hyper-heuristics.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HhMechanism {
    SimpleRandom,
    RandomGradient,
    Greedy,
    Permutation,
    GeneralizedRandomGradient,
    SigmaGrg,
}

impl HhMechanism {
    pub fn name(self) -> &'static str {
        match self {
            HhMechanism::SimpleRandom => "simple-random",
            HhMechanism::RandomGradient => "random-gradient",
            HhMechanism::Greedy => "greedy",
            HhMechanism::Permutation => "permutation",
            HhMechanism::GeneralizedRandomGradient => "grg",
            HhMechanism::SigmaGrg => "sigma-grg",
        }
    }
}

/// What to apply in the next iteration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HhChoice {
    Operator(usize),
    /// Apply every operator and keep the best offspring.
    All,
}

#[derive(Clone, Debug)]
pub struct HhState {
    mechanism: HhMechanism,
    k: usize,
    current: usize,
    counter: u64,
    successes: u64,
    tau: u64,
    sigma: u64,
    adapt_tau: bool,
    tau_cap: u64,
    order: Vec<usize>,
    pos: usize,
}

impl HhState {
    /// `tau` is the phase length of the phase-based mechanisms and is ignored
    /// by the others. Panics on an empty portfolio.
    pub fn new(mechanism: HhMechanism, k: usize, tau: u64, rng: &mut RandomSource) -> Self {
        assert!(k > 0, "empty portfolio");
        let mut order: Vec<usize> = (0..k).collect();
        if mechanism == HhMechanism::Permutation {
            order.shuffle(rng);
        }
        let current = match mechanism {
            HhMechanism::Permutation => order[0],
            _ => rng.below(k),
        };
        Self {
            mechanism,
            k,
            current,
            counter: 0,
            successes: 0,
            tau: tau.max(1),
            sigma: 1,
            adapt_tau: false,
            tau_cap: u64::MAX,
            order,
            pos: 0,
        }
    }

    /// Success threshold `sigma` and optional self-adjusting phase length
    /// capped at `tau_cap`.
    pub fn with_sigma(mut self, sigma: u64, adapt_tau: bool, tau_cap: u64) -> Self {
        self.sigma = sigma.max(1);
        self.tau = self.tau.max(self.sigma);
        self.adapt_tau = adapt_tau;
        self.tau_cap = tau_cap.max(self.sigma);
        self
    }

    pub fn mechanism(&self) -> HhMechanism {
        self.mechanism
    }

    pub fn portfolio_size(&self) -> usize {
        self.k
    }

    pub fn tau(&self) -> u64 {
        self.tau
    }

    pub fn phase_counter(&self) -> u64 {
        self.counter
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn choice(&self) -> HhChoice {
        match self.mechanism {
            HhMechanism::Greedy => HhChoice::All,
            _ => HhChoice::Operator(self.current),
        }
    }

    /// Feeds back whether the last iteration strictly improved.
    pub fn observe(&mut self, improved: bool, rng: &mut RandomSource) {
        match self.mechanism {
            HhMechanism::SimpleRandom => self.current = rng.below(self.k),
            HhMechanism::RandomGradient => {
                if !improved {
                    self.current = rng.below(self.k);
                }
            }
            HhMechanism::Greedy => {}
            HhMechanism::Permutation => {
                self.pos = (self.pos + 1) % self.k;
                self.current = self.order[self.pos];
            }
            HhMechanism::GeneralizedRandomGradient => {
                self.counter += 1;
                if improved {
                    self.counter = 0;
                } else if self.counter >= self.tau {
                    self.counter = 0;
                    self.current = rng.below(self.k);
                }
            }
            HhMechanism::SigmaGrg => {
                self.counter += 1;
                self.successes += improved as u64;
                if self.successes >= self.sigma {
                    self.counter = 0;
                    self.successes = 0;
                    if self.adapt_tau {
                        self.tau = sigma_grg_tau_update(self.tau, true, self.sigma, self.tau_cap);
                    }
                } else if self.counter >= self.tau {
                    self.counter = 0;
                    self.successes = 0;
                    self.current = rng.below(self.k);
                    if self.adapt_tau {
                        self.tau = sigma_grg_tau_update(self.tau, false, self.sigma, self.tau_cap);
                    }
                }
            }
        }
    }
}

/// Observes the last outcome and returns the next choice.
pub fn hh_next_operator(state: &mut HhState, last_improved: bool, rng: &mut RandomSource) -> HhChoice {
    state.observe(last_improved, rng);
    state.choice()
}

/// Doubles `tau` after a failed phase (up to `cap`), halves it after a
/// successful one (down to `sigma`).
pub fn sigma_grg_tau_update(tau: u64, succeeded: bool, sigma: u64, cap: u64) -> u64 {
    if succeeded {
        (tau / 2).max(sigma)
    } else {
        tau.saturating_mul(2).min(cap)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MigrationScheme {
    /// `(2τ, 1)`: reset to 1 on success.
    DoubleReset,
    /// `(2τ, τ/2)`: halve on success.
    DoubleHalve,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MigrationEvent {
    ImprovedOrReceived,
    Stagnant,
}

pub fn migration_interval_update(tau: u64, event: MigrationEvent, scheme: MigrationScheme) -> u64 {
    match (event, scheme) {
        (MigrationEvent::Stagnant, _) => tau.saturating_mul(2),
        (MigrationEvent::ImprovedOrReceived, MigrationScheme::DoubleReset) => 1,
        (MigrationEvent::ImprovedOrReceived, MigrationScheme::DoubleHalve) => (tau / 2).max(1),
    }
}
