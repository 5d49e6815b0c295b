use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;

use crate::algorithms::{
    run_island_model, run_mu_plus_one_rank, run_non_elitist_portfolio, run_ollga,
    run_one_plus_lambda, run_one_plus_one, run_rls, run_rls_ab, run_sa, run_self_adaptive_one_comma_lambda,
    run_single_point_hh, GaLambdaPolicy, LambdaPolicy, OffspringRate, RatePolicy, RunOptions, RunOutcome, Schedule,
    Selection, StrengthPolicy, SuccessCount, Topology,
};
use crate::controllers::{DoublingScheme, HhMechanism, HhState, MigrationScheme};
use crate::error::{Error, Result};
use crate::operators::FlipOperator;
use crate::oracles::{lo_fixed_target_dp, DriftTable};
use crate::problems::{
    gen_connected_triangles, gen_random_linear_weights, gen_random_lo_instance, BitProblem, GraphInstance, Jump,
    LeadingOnes, Linear, Metric, MstProblem, OneMax, Plateau, RValuedOneMax, TriangleWeights,
};
use crate::genome::{BitString, IntString};
use crate::rng::RandomSource;

pub const PROBLEMS: &[&str] = &["onemax", "leadingones", "jump", "plateau", "linear", "mst", "rvalued-onemax"];
pub const ALGORITHMS: &[&str] = &[
    "one-plus-one",
    "rls",
    "rls-ab",
    "one-plus-lambda",
    "ollga",
    "mu-plus-one-rank",
    "sa",
    "self-adaptive-comma",
    "non-elitist-portfolio",
    "hh",
    "island",
];
/// Controller choices per algorithm, as accepted by the `control` and
/// `lambda_control` keys.
pub const CONTROLLERS: &[(&str, &[&str])] = &[
    ("one-plus-one", &["static", "time-dependent", "fitness-dependent", "self-adaptive"]),
    ("rls", &["fixed", "best-of-set", "drift-max", "eps-greedy", "mixture"]),
    ("one-plus-lambda", &["static", "fitness-dependent", "two-rate"]),
    ("one-plus-lambda (lambda_control)", &["static", "doubling-reset", "doubling-halve", "doubling-jansen"]),
    ("ollga", &["static", "fitness-dependent", "one-fifth"]),
    ("sa", &["constant", "multiplicative", "stepwise"]),
    ("hh", &["simple-random", "random-gradient", "greedy", "permutation", "grg", "sigma-grg"]),
    ("island", &["double-reset", "double-halve"]),
];

/// One experiment: every dimension in `dimensions` is run `runs` times.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub runs: usize,
    pub budget: u64,
    pub dimensions: Vec<usize>,
    #[serde(default)]
    pub trace_stride: u64,
    pub target: Option<f64>,
    pub out_dir: Option<PathBuf>,
    pub workers: Option<usize>,
    pub problem: ProblemSpec,
    pub algorithm: AlgorithmSpec,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub name: String,
    /// Gap of jump, width of plateau.
    pub k: Option<usize>,
    /// Random target string (OneMax) or random bit order (LeadingOnes).
    #[serde(default)]
    pub randomize: bool,
    pub weight_low: Option<f64>,
    pub weight_high: Option<f64>,
    /// Edge-list file for `mst`; otherwise a chain of `n` triangles.
    pub graph: Option<PathBuf>,
    pub epsilon: Option<f64>,
    pub light: Option<u64>,
    pub heavy: Option<u64>,
    pub alphabet: Option<u32>,
    pub metric: Option<u8>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmSpec {
    pub name: String,
    pub control: Option<String>,
    pub lambda_control: Option<String>,
    /// Mutation rate as a multiple of `1/n`.
    pub rate: Option<f64>,
    pub k: Option<usize>,
    /// `distinct` or `with-replacement` for 2-bit flips.
    pub two_bit: Option<String>,
    pub strengths: Option<Vec<usize>>,
    pub weights: Option<Vec<f64>>,
    pub cap: Option<usize>,
    pub epsilon: Option<f64>,
    pub delta: Option<f64>,
    pub lambda: Option<usize>,
    pub lambda_max: Option<usize>,
    /// `strict` or `weak` success counting of the doubling schemes.
    pub success: Option<String>,
    pub factor: Option<f64>,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    pub r_init: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub mu: Option<usize>,
    pub temperature: Option<f64>,
    pub alpha: Option<f64>,
    pub tau: Option<u64>,
    pub sigma: Option<u64>,
    #[serde(default)]
    pub adapt_tau: bool,
    pub mechanism: Option<String>,
    /// Rate multiples of `1/n` for the non-elitist portfolio.
    pub rates: Option<Vec<f64>>,
    pub switch_p: Option<f64>,
    pub selection: Option<String>,
    pub topology: Option<String>,
    pub scheme: Option<String>,
}

fn config_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}

fn unknown<T>(what: &str, got: &str, valid: &[&str]) -> Result<T> {
    config_err(format!("unknown {what} {got:?}; valid: {}", valid.join(", ")))
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    /// Reads a config file; `PARAMCTL_SEED` overrides the seed when set.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut config = Self::parse(&text)?;
        if let Ok(seed) = std::env::var("PARAMCTL_SEED") {
            config.seed = seed
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("PARAMCTL_SEED={seed:?} is not an unsigned integer")))?;
        }
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return config_err("runs must be at least 1");
        }
        if self.budget == 0 {
            return config_err("budget must be at least 1");
        }
        if self.dimensions.is_empty() || self.dimensions.contains(&0) {
            return config_err("dimensions must be a nonempty list of positive sizes");
        }
        if self.workers == Some(0) {
            return config_err("workers must be at least 1");
        }
        if !PROBLEMS.contains(&self.problem.name.as_str()) {
            return unknown("problem", &self.problem.name, PROBLEMS);
        }
        if !ALGORITHMS.contains(&self.algorithm.name.as_str()) {
            return unknown("algorithm", &self.algorithm.name, ALGORITHMS);
        }
        // per-level strengths come from the LeadingOnes level probabilities
        if self.algorithm.control.as_deref() == Some("best-of-set") && self.problem.name != "leadingones" {
            return config_err("best-of-set control is defined for leadingones only");
        }
        Ok(())
    }

    pub fn run_options(&self) -> RunOptions {
        let mut opts = RunOptions::new(self.budget).with_stride(self.trace_stride);
        opts.target = self.target;
        opts
    }
}

/// A constructed benchmark instance, shared read-only by all runs of one
/// dimension.
pub enum ProblemInstance {
    Bits(Box<dyn BitProblem + Send + Sync>),
    Ints(RValuedOneMax),
}

impl ProblemInstance {
    pub fn name(&self) -> &str {
        match self {
            ProblemInstance::Bits(p) => p.name(),
            ProblemInstance::Ints(p) => crate::problems::IntProblem::name(p),
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            ProblemInstance::Bits(p) => p.dimension(),
            ProblemInstance::Ints(p) => crate::problems::IntProblem::dimension(p),
        }
    }
}

/// Instances are drawn from a stream disjoint from the run streams.
pub fn instance_stream(n: usize) -> u64 {
    1 << 63 | n as u64
}

impl ProblemSpec {
    pub fn build(&self, n: usize, seed: u64) -> Result<ProblemInstance> {
        let mut rng = RandomSource::new(seed, instance_stream(n));
        let need_k = || self.k.ok_or_else(|| Error::Config(format!("problem {} needs k", self.name)));
        let bits: Box<dyn BitProblem + Send + Sync> = match self.name.as_str() {
            "onemax" if self.randomize => Box::new(OneMax::with_target(BitString::random(n, &mut rng))),
            "onemax" => Box::new(OneMax::new(n)),
            "leadingones" if self.randomize => Box::new(LeadingOnes::from_instance(gen_random_lo_instance(n, &mut rng))),
            "leadingones" => Box::new(LeadingOnes::new(n)),
            "jump" => Box::new(Jump::new(n, need_k()?)?),
            "plateau" => Box::new(Plateau::new(n, need_k()?)?),
            "linear" => {
                let w = gen_random_linear_weights(n, self.weight_low.unwrap_or(1.0), self.weight_high.unwrap_or(2.0), &mut rng)?;
                Box::new(Linear::new(w)?)
            }
            "mst" => {
                let graph = match &self.graph {
                    Some(path) => GraphInstance::load(path)?,
                    None => {
                        let weights = match (self.light, self.heavy) {
                            (Some(light), Some(heavy)) => TriangleWeights::Fixed { light, heavy },
                            (None, None) => TriangleWeights::Separated {
                                epsilon: self.epsilon.unwrap_or(1.0),
                            },
                            _ => return config_err("mst needs both light and heavy, or neither"),
                        };
                        gen_connected_triangles(n, weights, &mut rng)?
                    }
                };
                Box::new(MstProblem::new(graph))
            }
            "rvalued-onemax" => {
                let r = self.alphabet.ok_or_else(|| Error::Config("rvalued-onemax needs alphabet".into()))?;
                let metric = Metric::from_mode(self.metric.unwrap_or(1))?;
                let target = IntString::random(n, r, &mut rng);
                return Ok(ProblemInstance::Ints(RValuedOneMax::new(target, metric)));
            }
            other => return unknown("problem", other, PROBLEMS),
        };
        Ok(ProblemInstance::Bits(bits))
    }
}

/// An algorithm with every parameter resolved for one dimension.
#[derive(Clone, Debug)]
pub enum AlgorithmPlan {
    OnePlusOne(RatePolicy),
    Rls(StrengthPolicy),
    RlsAb { a: f64, b: f64 },
    OnePlusLambda(LambdaPolicy, OffspringRate),
    Ollga(GaLambdaPolicy),
    MuPlusOneRank(usize),
    Sa(Schedule),
    SelfAdaptiveComma { lambda: usize, factor: f64, lo: f64, hi: f64, r_init: f64 },
    Portfolio { lambda: usize, rates: Vec<f64>, switch_p: f64, selection: Selection },
    Hh { mechanism: HhMechanism, portfolio: Vec<FlipOperator>, tau: u64, sigma: Option<u64>, adapt_tau: bool },
    Island { lambda: usize, topology: Topology, scheme: MigrationScheme },
}

fn flip_operator(k: usize, two_bit: Option<&str>) -> Result<FlipOperator> {
    match (k, two_bit) {
        (_, None | Some("distinct")) => Ok(FlipOperator::Distinct(k)),
        (2, Some("with-replacement")) => Ok(FlipOperator::PairWithReplacement),
        (_, Some(other)) => unknown("two_bit variant", other, &["distinct", "with-replacement"]),
    }
}

impl AlgorithmSpec {
    pub fn plan(&self, n: usize) -> Result<AlgorithmPlan> {
        let nf = n as f64;
        let control = self.control.as_deref();
        let need = |v: Option<usize>, key: &str| v.ok_or_else(|| Error::Config(format!("{} needs {key}", self.name)));
        let plan = match self.name.as_str() {
            "one-plus-one" => AlgorithmPlan::OnePlusOne(match control.unwrap_or("static") {
                "static" => RatePolicy::Static(self.rate.unwrap_or(1.0) / nf),
                "time-dependent" => RatePolicy::TimeDependent,
                "fitness-dependent" => RatePolicy::FitnessDependentLo,
                "self-adaptive" => RatePolicy::SelfAdaptive {
                    r_init: self.r_init.unwrap_or(1.0),
                    factor: self.factor.unwrap_or(2.0),
                    lo: self.lo.unwrap_or(1.0),
                    hi: self.hi.unwrap_or(nf / 4.0),
                },
                other => return unknown("control", other, CONTROLLERS[0].1),
            }),
            "rls" => match control.unwrap_or("fixed") {
                "fixed" => AlgorithmPlan::Rls(StrengthPolicy::Fixed(flip_operator(
                    self.k.unwrap_or(1),
                    self.two_bit.as_deref(),
                )?)),
                "best-of-set" => {
                    let strengths = self.strengths.clone().unwrap_or_else(|| vec![1, 2, 3]);
                    let dp = lo_fixed_target_dp(n, &strengths).map_err(|e| Error::Config(e.to_string()))?;
                    AlgorithmPlan::Rls(StrengthPolicy::PerLevel(dp.best_strength))
                }
                "drift-max" => {
                    AlgorithmPlan::Rls(StrengthPolicy::DriftMax(Arc::new(DriftTable::with_cap(n, self.cap.unwrap_or(n)))))
                }
                "eps-greedy" => AlgorithmPlan::Rls(StrengthPolicy::EpsGreedy {
                    k: self.k.unwrap_or(10),
                    delta: self.delta.unwrap_or(nf.powf(-0.99)),
                    epsilon: self.epsilon.unwrap_or(nf.powf(-0.01)),
                }),
                "mixture" => {
                    let strengths = self.strengths.clone().unwrap_or_else(|| vec![1, 2]);
                    let weights = self
                        .weights
                        .clone()
                        .unwrap_or_else(|| vec![1.0 / strengths.len() as f64; strengths.len()]);
                    let ops = strengths
                        .iter()
                        .map(|&k| flip_operator(k, self.two_bit.as_deref()))
                        .collect::<Result<_>>()?;
                    AlgorithmPlan::Rls(StrengthPolicy::Mixture { ops, weights })
                }
                other => return unknown("control", other, CONTROLLERS[1].1),
            },
            "rls-ab" => AlgorithmPlan::RlsAb {
                a: self.a.unwrap_or(1.7),
                b: self.b.unwrap_or(0.9),
            },
            "one-plus-lambda" => {
                let count = match self.success.as_deref().unwrap_or("strict") {
                    "strict" => SuccessCount::StrictlyBetter,
                    "weak" => SuccessCount::AtLeastAsGood,
                    other => return unknown("success counting", other, &["strict", "weak"]),
                };
                let doubling = |scheme| LambdaPolicy::Doubling {
                    scheme,
                    count,
                    max: self.lambda_max.unwrap_or(n),
                };
                let lambda = match self.lambda_control.as_deref().unwrap_or("static") {
                    "static" => LambdaPolicy::Static(self.lambda.unwrap_or(1)),
                    "doubling-reset" => doubling(DoublingScheme::Reset),
                    "doubling-halve" => doubling(DoublingScheme::Halve),
                    "doubling-jansen" => doubling(DoublingScheme::Jansen),
                    other => return unknown("lambda_control", other, CONTROLLERS[3].1),
                };
                let rate = match control.unwrap_or("static") {
                    "static" => OffspringRate::Static(self.rate.unwrap_or(1.0) / nf),
                    "fitness-dependent" => OffspringRate::FitnessDependentOneMax,
                    "two-rate" => OffspringRate::TwoRate {
                        r_init: self.r_init.unwrap_or(2.0),
                    },
                    other => return unknown("control", other, CONTROLLERS[2].1),
                };
                AlgorithmPlan::OnePlusLambda(lambda, rate)
            }
            "ollga" => AlgorithmPlan::Ollga(match control.unwrap_or("one-fifth") {
                "static" => GaLambdaPolicy::Static(self.lambda.unwrap_or(1)),
                "fitness-dependent" => GaLambdaPolicy::FitnessDependent,
                "one-fifth" => GaLambdaPolicy::OneFifth {
                    factor: self.factor.unwrap_or(1.5),
                },
                other => return unknown("control", other, CONTROLLERS[4].1),
            }),
            "mu-plus-one-rank" => AlgorithmPlan::MuPlusOneRank(need(self.mu, "mu")?),
            "sa" => {
                let t1 = self
                    .temperature
                    .ok_or_else(|| Error::Config("sa needs temperature".into()))?;
                AlgorithmPlan::Sa(match control.unwrap_or("constant") {
                    "constant" => Schedule::Constant(t1),
                    "multiplicative" => Schedule::Multiplicative {
                        t1,
                        alpha: self.alpha.unwrap_or(1.0 - 1.0 / nf),
                    },
                    "stepwise" => Schedule::Stepwise {
                        t1,
                        alpha: self.alpha.unwrap_or(0.5),
                        tau: self.tau.unwrap_or(n as u64),
                    },
                    other => return unknown("control", other, CONTROLLERS[5].1),
                })
            }
            "self-adaptive-comma" => AlgorithmPlan::SelfAdaptiveComma {
                lambda: need(self.lambda, "lambda")?,
                factor: self.factor.unwrap_or(2.0),
                lo: self.lo.unwrap_or(2.0),
                hi: self.hi.unwrap_or(nf / 4.0),
                r_init: self.r_init.unwrap_or(2.0),
            },
            "non-elitist-portfolio" => AlgorithmPlan::Portfolio {
                lambda: need(self.lambda, "lambda")?,
                rates: self.rates.clone().unwrap_or_else(|| vec![1.0]).iter().map(|r| r / nf).collect(),
                switch_p: self.switch_p.unwrap_or(0.0),
                selection: match self.selection.as_deref().unwrap_or("tournament-2") {
                    "uniform" => Selection::Uniform,
                    "tournament-2" => Selection::Tournament2,
                    "best" => Selection::Best,
                    other => return unknown("selection", other, &["uniform", "tournament-2", "best"]),
                },
            },
            "hh" => {
                let name = self.mechanism.as_deref().unwrap_or("simple-random");
                let mechanism = match name {
                    "simple-random" => HhMechanism::SimpleRandom,
                    "random-gradient" => HhMechanism::RandomGradient,
                    "greedy" => HhMechanism::Greedy,
                    "permutation" => HhMechanism::Permutation,
                    "grg" => HhMechanism::GeneralizedRandomGradient,
                    "sigma-grg" => HhMechanism::SigmaGrg,
                    other => return unknown("mechanism", other, CONTROLLERS[6].1),
                };
                let portfolio = self
                    .strengths
                    .clone()
                    .unwrap_or_else(|| vec![1, 2])
                    .into_iter()
                    .map(|k| flip_operator(k, self.two_bit.as_deref()))
                    .collect::<Result<Vec<_>>>()?;
                AlgorithmPlan::Hh {
                    mechanism,
                    portfolio,
                    tau: self.tau.unwrap_or(10 * n as u64),
                    sigma: self.sigma,
                    adapt_tau: self.adapt_tau,
                }
            }
            "island" => AlgorithmPlan::Island {
                lambda: need(self.lambda, "lambda")?,
                topology: Topology::parse(self.topology.as_deref().unwrap_or("complete"))
                    .map_err(|e| Error::Config(e.to_string()))?,
                scheme: match self.scheme.as_deref().unwrap_or("double-reset") {
                    "double-reset" => MigrationScheme::DoubleReset,
                    "double-halve" => MigrationScheme::DoubleHalve,
                    other => return unknown("scheme", other, CONTROLLERS[7].1),
                },
            },
            other => return unknown("algorithm", other, ALGORITHMS),
        };
        Ok(plan)
    }
}

impl AlgorithmPlan {
    pub fn execute(&self, problem: &ProblemInstance, opts: &RunOptions, rng: &mut RandomSource) -> Result<RunOutcome> {
        let bits = match (self, problem) {
            (AlgorithmPlan::RlsAb { a, b }, ProblemInstance::Ints(p)) => return run_rls_ab(p, *a, *b, opts, rng),
            (AlgorithmPlan::RlsAb { .. }, ProblemInstance::Bits(_)) => {
                return config_err("rls-ab runs on r-valued problems only")
            }
            (_, ProblemInstance::Ints(_)) => return config_err("r-valued problems need rls-ab"),
            (_, ProblemInstance::Bits(p)) => p.as_ref(),
        };
        match self {
            AlgorithmPlan::OnePlusOne(policy) => run_one_plus_one(bits, policy, opts, rng),
            AlgorithmPlan::Rls(policy) => run_rls(bits, policy, opts, rng),
            AlgorithmPlan::OnePlusLambda(lambda, rate) => run_one_plus_lambda(bits, lambda, rate, opts, rng),
            AlgorithmPlan::Ollga(policy) => run_ollga(bits, policy, opts, rng),
            AlgorithmPlan::MuPlusOneRank(mu) => run_mu_plus_one_rank(bits, *mu, opts, rng),
            AlgorithmPlan::Sa(schedule) => run_sa(bits, schedule, opts, rng),
            AlgorithmPlan::SelfAdaptiveComma {
                lambda,
                factor,
                lo,
                hi,
                r_init,
            } => run_self_adaptive_one_comma_lambda(bits, *lambda, *factor, *lo, *hi, *r_init, opts, rng),
            AlgorithmPlan::Portfolio {
                lambda,
                rates,
                switch_p,
                selection,
            } => run_non_elitist_portfolio(bits, *lambda, rates, *switch_p, *selection, opts, rng),
            AlgorithmPlan::Hh {
                mechanism,
                portfolio,
                tau,
                sigma,
                adapt_tau,
            } => {
                let mut state = HhState::new(*mechanism, portfolio.len().max(1), *tau, rng);
                if let Some(sigma) = sigma {
                    let n2 = (bits.dimension() as u64).saturating_pow(2);
                    state = state.with_sigma(*sigma, *adapt_tau, n2);
                }
                run_single_point_hh(bits, state, portfolio, opts, rng)
            }
            AlgorithmPlan::Island {
                lambda,
                topology,
                scheme,
            } => run_island_model(bits, *lambda, *topology, *scheme, opts, rng),
            AlgorithmPlan::RlsAb { .. } => unreachable!(),
        }
    }
}
