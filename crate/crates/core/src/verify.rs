//! Randomized verification suites and their reports.
//!
//! Each suite draws fresh instances per trial from
//! `SeededRng::for_trial(master_seed, trial)`, evaluates one or more
//! identities/inequalities, and records the worst violation. Trials run in
//! parallel; results are collected in trial order, so a report depends only
//! on its configuration.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{
    haar_unitary, random_channel, random_dio, random_permutation_mixture, random_povm,
    random_stochastic, ChannelKind, SeededRng,
};
use crate::powers::{
    cnot_matrix, composite_ent_lower_bound, conversion_ent_lower_bound, duality_check,
    embed_measurement_channel, measurement_cohering_power, CONVERSION_DIM_CAP,
};
use crate::qobjects::{classical_postprocess, compose, pullback_povm, Channel, Measurement};
use crate::resources::{
    decompose_incoherent, is_incoherent_measurement, measurement_coherence,
    measurement_coherence_bruteforce, measurement_relative_entropy,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    DmProperties,
    CmFaithfulness,
    CmOracle,
    StructureLemma,
    PowerMonotone,
    PowerConvexity,
    ConversionEquality,
    Thm3Proxy,
    Duality,
    Thm7Reduction,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::DmProperties,
        Suite::CmFaithfulness,
        Suite::CmOracle,
        Suite::StructureLemma,
        Suite::PowerMonotone,
        Suite::PowerConvexity,
        Suite::ConversionEquality,
        Suite::Thm3Proxy,
        Suite::Duality,
        Suite::Thm7Reduction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::DmProperties => "dm_properties",
            Suite::CmFaithfulness => "cm_faithfulness",
            Suite::CmOracle => "cm_oracle",
            Suite::StructureLemma => "structure_lemma",
            Suite::PowerMonotone => "power_monotone",
            Suite::PowerConvexity => "power_convexity",
            Suite::ConversionEquality => "conversion_equality",
            Suite::Thm3Proxy => "thm3_proxy",
            Suite::Duality => "duality",
            Suite::Thm7Reduction => "thm7_reduction",
        }
    }

    /// Tolerance used when the caller does not override it.
    pub fn default_tolerance(self) -> f64 {
        match self {
            Suite::CmOracle => 5e-3,
            Suite::StructureLemma => 1e-10,
            Suite::ConversionEquality | Suite::Thm7Reduction => 1e-9,
            _ => 1e-8,
        }
    }

    fn note(self) -> &'static str {
        match self {
            Suite::Thm3Proxy => {
                "one-sided check: the averaged entanglement lower bound is a proxy that \
                 lower-bounds the measurement-entangling power"
            }
            Suite::PowerMonotone => {
                "unital DIO channels are sampled from permutation mixtures and \
                 permutation-after-dephasing mixtures, a subfamily of all unital DIO"
            }
            Suite::CmOracle => "grid oracle over incoherent two-outcome qubit POVMs",
            _ => "",
        }
    }

    /// Rejects dimensions a suite cannot run at.
    pub fn check_dim(self, dim: usize) -> Result<()> {
        if dim < 2 {
            return Err(Error::UnsupportedScale(format!("dimension must be >= 2, got {dim}")));
        }
        match self {
            Suite::CmOracle if dim != 2 => Err(Error::UnsupportedScale(format!(
                "cm_oracle runs at d = 2 only, got {dim}"
            ))),
            Suite::ConversionEquality if dim > CONVERSION_DIM_CAP => Err(Error::DimensionCap {
                dim,
                cap: CONVERSION_DIM_CAP,
            }),
            Suite::Thm3Proxy if dim > 3 => Err(Error::UnsupportedScale(format!(
                "thm3_proxy acts on d^2 dimensions; d <= 3 supported, got {dim}"
            ))),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Malformed(format!("unknown suite '{s}'")))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub dim: usize,
    pub trials: usize,
    pub seed: u64,
    /// `None` selects [`Suite::default_tolerance`].
    pub tol: Option<f64>,
    pub oracle_grid_steps: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            dim: 2,
            trials: 100,
            seed: 42,
            tol: None,
            oracle_grid_steps: 1000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialFailure {
    pub trial: usize,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub dim: usize,
    pub trials: usize,
    pub master_seed: u64,
    pub tolerance: f64,
    pub max_violation: f64,
    pub failures: Vec<TrialFailure>,
    pub passed: bool,
    pub wall_time_ms: u64,
    /// Headline quantity per trial (suite specific).
    pub values: Vec<f64>,
    pub violations: Vec<f64>,
    pub note: String,
}

impl VerificationReport {
    pub fn summary_line(&self) -> String {
        format!(
            "{} {:<20} dim={} trials={} seed={} max_violation={:.3e} tol={:.1e} failures={}",
            if self.passed { "PASS" } else { "FAIL" },
            self.suite,
            self.dim,
            self.trials,
            self.master_seed,
            self.max_violation,
            self.tolerance,
            self.failures.len()
        )
    }

    /// One row per trial: `suite,dim,trial,value,violation`.
    pub fn csv_rows(&self) -> Vec<String> {
        self.values
            .iter()
            .zip(&self.violations)
            .enumerate()
            .map(|(t, (v, x))| format!("{},{},{},{:e},{:e}", self.suite, self.dim, t, v, x))
            .collect()
    }
}

pub const CSV_HEADER: &str = "suite,dim,trial,value,violation";

/// Outcome of one trial: a headline value, a nonnegative violation measured
/// against the suite tolerance, and any qualitative failure.
struct Trial {
    value: f64,
    violation: f64,
    failure: Option<String>,
}

impl Trial {
    fn new(value: f64) -> Self {
        Self {
            value,
            violation: 0.0,
            failure: None,
        }
    }

    fn violate(&mut self, v: f64) {
        // NaN counts as an unbounded violation
        let v = if v.is_nan() { f64::INFINITY } else { v };
        self.violation = self.violation.max(v);
    }

    fn fail(&mut self, msg: String) {
        match &mut self.failure {
            Some(s) => {
                s.push_str("; ");
                s.push_str(&msg);
            }
            None => self.failure = Some(msg),
        }
    }
}

type F = f64;

fn gen_channel(d: usize, rng: &mut SeededRng) -> Result<Channel<F>> {
    let rank = 1 + rng.index(d * d);
    random_channel(d, rank, ChannelKind::General, rng)
}

fn gen_dio(d: usize, rng: &mut SeededRng) -> Result<Channel<F>> {
    match rng.index(3) {
        0 => random_dio(d, false, rng),
        1 => random_dio(d, true, rng),
        _ => {
            let count = 1 + rng.index(3);
            random_permutation_mixture(d, count, rng)
        }
    }
}

fn gen_unital_dio(d: usize, rng: &mut SeededRng) -> Result<Channel<F>> {
    if rng.index(2) == 0 {
        random_dio(d, true, rng)
    } else {
        let count = 1 + rng.index(3);
        random_permutation_mixture(d, count, rng)
    }
}

fn dm(m: &Measurement<F>, n: &Measurement<F>) -> Result<f64> {
    measurement_relative_entropy(m, n)
}

fn c(e: &Channel<F>) -> Result<f64> {
    measurement_cohering_power(e)
}

fn dm_properties(d: usize, tol: f64, rng: &mut SeededRng) -> Result<Trial> {
    let n = 2 + rng.index(2);
    let m = random_povm::<F>(d, n, false, rng)?;
    let nn = random_povm::<F>(d, n, false, rng)?;
    let base = dm(&m, &nn)?;
    let mut t = Trial::new(base);

    // (1) nonnegativity and faithfulness
    t.violate(-base);
    t.violate(dm(&m, &m)?.abs());
    if m.max_abs_diff(&nn) > 1e-6 && base <= tol {
        t.fail(format!("D_m = {base:e} for distinct POVMs"));
    }

    // (2) data processing under a unital channel
    let rank = 1 + rng.index(d * d);
    let e = random_channel::<F>(d, rank, ChannelKind::Unital, rng)?;
    t.violate(dm(&pullback_povm(&e, &m)?, &pullback_povm(&e, &nn)?)? - base);

    // (3) unitary invariance
    let u = Channel::unitary(haar_unitary::<F>(d, rng))?;
    t.violate((dm(&pullback_povm(&u, &m)?, &pullback_povm(&u, &nn)?)? - base).abs());

    // (4) classical post-processing
    let rows = 1 + rng.index(3);
    let s = random_stochastic::<F>(rows, n, rng);
    t.violate(dm(&classical_postprocess(&m, &s)?, &classical_postprocess(&nn, &s)?)? - base);

    // (5) tensor additivity
    let k = random_povm::<F>(2, 2, false, rng)?;
    let l = random_povm::<F>(2, 2, false, rng)?;
    let joint = dm(&m.tensor(&k), &nn.tensor(&l))?;
    t.violate((joint - base - dm(&k, &l)?).abs());

    // (6) joint convexity
    let m2 = random_povm::<F>(d, n, false, rng)?;
    let n2 = random_povm::<F>(d, n, false, rng)?;
    let p = rng.uniform();
    let mixed = dm(&Measurement::mixture(p, &m, &m2)?, &Measurement::mixture(p, &nn, &n2)?)?;
    t.violate(mixed - p * base - (1.0 - p) * dm(&m2, &n2)?);
    Ok(t)
}

fn cm_faithfulness(d: usize, trial: usize, tol: f64, rng: &mut SeededRng) -> Result<Trial> {
    let n = 2 + rng.index(3);
    let incoherent = trial.is_multiple_of(2);
    let m = random_povm::<F>(d, n, incoherent, rng)?;
    let cm = measurement_coherence(&m)?;
    let flagged = is_incoherent_measurement(&m, 1e-8);
    let mut t = Trial::new(cm);
    if incoherent {
        t.violate(cm.abs());
        if !flagged {
            t.fail("incoherent POVM not recognised as incoherent".into());
        }
    } else {
        t.violate(-cm);
        if cm <= tol {
            t.fail(format!("coherent POVM has C_m = {cm:e}"));
        }
        if flagged {
            t.fail("coherent POVM flagged incoherent".into());
        }
    }
    Ok(t)
}

fn cm_oracle(steps: usize, rng: &mut SeededRng) -> Result<Trial> {
    let m = random_povm::<F>(2, 2, false, rng)?;
    let closed = measurement_coherence(&m)?;
    let oracle = measurement_coherence_bruteforce(&m, steps)?;
    let mut t = Trial::new(closed);
    t.violate((closed - oracle).abs());
    Ok(t)
}

fn structure_lemma(d: usize, rng: &mut SeededRng) -> Result<Trial> {
    let n = 2 + rng.index(5);
    let m = random_povm::<F>(d, n, true, rng)?;
    let dec = decompose_incoherent(&m)?;
    let mut t = Trial::new(dec.residual);
    t.violate(dec.residual);
    t.violate(dec.post.column_sum_deviation());
    Ok(t)
}

fn power_monotone(d: usize, trial: usize, tol: f64, rng: &mut SeededRng) -> Result<Trial> {
    let e = gen_channel(d, rng)?;
    let ce = c(&e)?;
    let mut t = Trial::new(ce);
    t.violate(-ce);

    // faithfulness, both directions
    let dio = gen_dio(d, rng)?;
    let c_dio = c(&dio)?;
    t.violate(c_dio.abs());
    let e_is_dio = e.classify().dio;
    if e_is_dio && ce > tol {
        t.fail(format!("DIO channel has C = {ce:e}"));
    }
    if !e_is_dio && ce <= tol {
        t.fail(format!("non-DIO channel has C = {ce:e}"));
    }

    // monotonicity under K . E . L
    let k = gen_dio(d, rng)?;
    let l = gen_unital_dio(d, rng)?;
    let sandwiched = compose(&k, &compose(&e, &l)?)?;
    t.violate(c(&sandwiched)? - ce);

    // basis permutations on both sides leave C unchanged
    if trial.is_multiple_of(2) {
        let p = Channel::permutation(&rng.permutation(d))?;
        let q = Channel::permutation(&rng.permutation(d))?;
        let permuted = compose(&p, &compose(&e, &q)?)?;
        t.violate((c(&permuted)? - ce).abs());
    }
    Ok(t)
}

fn power_convexity(d: usize, rng: &mut SeededRng) -> Result<Trial> {
    let e = gen_channel(d, rng)?;
    let g = gen_channel(d, rng)?;
    let p = rng.uniform();
    let mix = Channel::mixture(p, &e, &g)?;
    let lhs = c(&mix)?;
    let mut t = Trial::new(lhs);
    t.violate(lhs - p * c(&e)? - (1.0 - p) * c(&g)?);
    Ok(t)
}

fn conversion_equality(d: usize, trial: usize, rng: &mut SeededRng) -> Result<Trial> {
    let e = if trial.is_multiple_of(2) {
        Channel::unitary(haar_unitary::<F>(d, rng))?
    } else {
        let rank = 2 + rng.index(d * d - 1);
        random_channel::<F>(d, rank, ChannelKind::General, rng)?
    };
    let cert = conversion_ent_lower_bound(&e)?;
    let mut t = Trial::new(cert.cohering_power);
    t.violate(cert.gap);
    Ok(t)
}

fn thm3_proxy(d: usize, rng: &mut SeededRng) -> Result<Trial> {
    let dd = d * d;
    let e = gen_channel(d, rng)?;
    let k = match rng.index(3) {
        0 => Channel::identity(dd),
        1 => random_dio(dd, false, rng)?,
        _ => random_permutation_mixture(dd, 1 + rng.index(3), rng)?,
    };
    let l = match rng.index(3) {
        0 => Channel::unitary(cnot_matrix::<F>(d).adjoint())?,
        1 => random_dio(dd, true, rng)?,
        _ => random_permutation_mixture(dd, 1 + rng.index(3), rng)?,
    };
    let proxy = composite_ent_lower_bound(&e, &k, &l)?;
    let mut t = Trial::new(proxy);
    t.violate(proxy - c(&e)?);
    Ok(t)
}

fn duality(d: usize, rng: &mut SeededRng) -> Result<Trial> {
    let rank = 1 + rng.index(d * d);
    let e = random_channel::<F>(d, rank, ChannelKind::Unital, rng)?;
    let r = duality_check(&e)?;
    let mut t = Trial::new(r.c_adj);
    t.violate(r.c_g / d as f64 - r.c_adj);
    t.violate(r.c_adj - r.c_g);
    let id_gap = (r.c_adj - r.c_adj_identity).abs();
    if id_gap > 1e-10 || id_gap.is_nan() {
        t.fail(format!("C(E^dag) differs from (1/d) sum C_R by {id_gap:e}"));
    }
    Ok(t)
}

fn thm7_reduction(d: usize, trial: usize, rng: &mut SeededRng) -> Result<Trial> {
    let n = 2 + rng.index(d - 1);
    let m = random_povm::<F>(d, n, trial % 4 == 3, rng)?;
    let cm = measurement_coherence(&m)?;
    let power = c(&embed_measurement_channel(&m)?)?;
    let mut t = Trial::new(power);
    t.violate((power - cm).abs());
    Ok(t)
}

fn run_trial(suite: Suite, cfg: &SuiteConfig, tol: f64, trial: usize) -> Result<Trial> {
    let mut rng = SeededRng::for_trial(cfg.seed, trial as u64);
    let d = cfg.dim;
    match suite {
        Suite::DmProperties => dm_properties(d, tol, &mut rng),
        Suite::CmFaithfulness => cm_faithfulness(d, trial, tol, &mut rng),
        Suite::CmOracle => cm_oracle(cfg.oracle_grid_steps, &mut rng),
        Suite::StructureLemma => structure_lemma(d, &mut rng),
        Suite::PowerMonotone => power_monotone(d, trial, tol, &mut rng),
        Suite::PowerConvexity => power_convexity(d, &mut rng),
        Suite::ConversionEquality => conversion_equality(d, trial, &mut rng),
        Suite::Thm3Proxy => thm3_proxy(d, &mut rng),
        Suite::Duality => duality(d, &mut rng),
        Suite::Thm7Reduction => thm7_reduction(d, trial, &mut rng),
    }
}

/// Runs one suite. Fails only on configuration errors; numerical problems
/// inside a trial are reported as failures.
pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<VerificationReport> {
    suite.check_dim(cfg.dim)?;
    let tol = cfg.tol.unwrap_or_else(|| suite.default_tolerance());
    let start = Instant::now();
    let outcomes: Vec<Result<Trial>> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| run_trial(suite, cfg, tol, i))
        .collect();

    let mut values = Vec::with_capacity(cfg.trials);
    let mut violations = Vec::with_capacity(cfg.trials);
    let mut failures = Vec::new();
    let mut max_violation = 0.0f64;
    for (trial, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok(t) => {
                values.push(t.value);
                violations.push(t.violation);
                max_violation = max_violation.max(t.violation);
                if let Some(detail) = t.failure {
                    failures.push(TrialFailure { trial, detail });
                } else if t.violation > tol {
                    failures.push(TrialFailure {
                        trial,
                        detail: format!("violation {:e} exceeds tolerance", t.violation),
                    });
                }
            }
            Err(e) => {
                values.push(f64::NAN);
                violations.push(f64::INFINITY);
                max_violation = f64::INFINITY;
                failures.push(TrialFailure {
                    trial,
                    detail: e.to_string(),
                });
            }
        }
    }
    let passed = max_violation <= tol && failures.is_empty();
    Ok(VerificationReport {
        suite: suite.name().to_string(),
        dim: cfg.dim,
        trials: cfg.trials,
        master_seed: cfg.seed,
        tolerance: tol,
        max_violation,
        failures,
        passed,
        wall_time_ms: start.elapsed().as_millis() as u64,
        values,
        violations,
        note: suite.note().to_string(),
    })
}
