//! Seeded random instances (Haar unitaries, channels, POVMs) and the fixed
//! example channels.
//!
//! Every generator is a pure function of its [`SeededRng`]. Randomized suites
//! derive one stream per trial with [`SeededRng::for_trial`], so results do
//! not depend on scheduling.

use std::collections::BTreeMap;

use nalgebra::{Complex, ComplexField, DMatrix};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::error::{Error, Result};
use crate::matcore::Hermitian;
use crate::powers::cnot_unitary;
use crate::qobjects::{classical_postprocess, compose, Channel, Measurement, Stochastic};
use crate::scalar::{CMatrix, Scalar};

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// `i`-th output of a SplitMix64 stream started at `master`.
pub fn splitmix(master: u64, i: u64) -> u64 {
    let mut z = master.wrapping_add(GOLDEN_GAMMA.wrapping_mul(i.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// ChaCha8 stream keyed by a 64-bit seed. Portable: identical seeds give
/// bit-identical draws on every platform.
#[derive(Clone, Debug)]
pub struct SeededRng {
    seed: u64,
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Independent stream for trial `trial` of a suite seeded with `master`.
    pub fn for_trial(master: u64, trial: u64) -> Self {
        Self::new(splitmix(master, trial))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.inner)
    }

    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.inner.random_range(0..n)
    }

    /// Flat Dirichlet sample of length `k`.
    pub fn dirichlet(&mut self, k: usize) -> Vec<f64> {
        let raw: Vec<f64> = (0..k).map(|_| Exp1.sample(&mut self.inner)).collect();
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|x| x / total).collect()
    }

    pub fn permutation(&mut self, d: usize) -> Vec<usize> {
        let mut p: Vec<usize> = (0..d).collect();
        for i in (1..d).rev() {
            let j = self.index(i + 1);
            p.swap(i, j);
        }
        p
    }
}

impl RngCore for SeededRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

/// Complex Ginibre matrix with unit-variance entries.
pub fn ginibre<T: Scalar>(rows: usize, cols: usize, rng: &mut SeededRng) -> CMatrix<T> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    // column-major fill keeps the draw order fixed
    CMatrix::from_fn(rows, cols, |_, _| {
        let re = rng.normal() * s;
        let im = rng.normal() * s;
        Complex::new(T::c(re), T::c(im))
    })
}

/// Haar-distributed unitary via QR of a Ginibre matrix with the phases of
/// `diag(R)` divided out.
pub fn haar_unitary<T: Scalar>(d: usize, rng: &mut SeededRng) -> CMatrix<T> {
    let z = ginibre::<T>(d, d, rng);
    let qr = z.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..d {
        let rjj = r[(j, j)];
        let m = rjj.modulus();
        let phase = if m > T::zero() {
            rjj.unscale(m)
        } else {
            Complex::new(T::one(), T::zero())
        };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    q
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChannelKind {
    /// Stinespring isometry sliced into Kraus blocks.
    General,
    /// Dirichlet mixture of Haar unitaries.
    Unital,
}

pub fn random_channel<T: Scalar>(
    d: usize,
    kraus_rank: usize,
    kind: ChannelKind,
    rng: &mut SeededRng,
) -> Result<Channel<T>> {
    if kraus_rank == 0 || kraus_rank > d * d {
        return Err(Error::InvalidRank {
            rank: kraus_rank,
            dim: d,
            max: d * d,
        });
    }
    match kind {
        ChannelKind::General => {
            let u = haar_unitary::<T>(d * kraus_rank, rng);
            let kraus = (0..kraus_rank)
                .map(|k| u.view((k * d, 0), (d, d)).into_owned())
                .collect();
            Channel::from_kraus(kraus)
        }
        ChannelKind::Unital => {
            let w = rng.dirichlet(kraus_rank);
            let kraus = w
                .iter()
                .map(|p| {
                    let s = T::c(p.sqrt());
                    haar_unitary::<T>(d, rng).map(|z| z.scale(s))
                })
                .collect();
            Channel::from_kraus(kraus)
        }
    }
}

/// Dirichlet mixture of `count` random basis-permutation unitaries; unital
/// and DIO.
pub fn random_permutation_mixture<T: Scalar>(
    d: usize,
    count: usize,
    rng: &mut SeededRng,
) -> Result<Channel<T>> {
    let w: Vec<T> = rng.dirichlet(count.max(1)).into_iter().map(T::c).collect();
    let perms = (0..w.len())
        .map(|_| Channel::permutation(&rng.permutation(d)))
        .collect::<Result<Vec<_>>>()?;
    Channel::convex_combination(&w, &perms)
}

/// Random DIO channel.
///
/// `unital = false`: a random CPTP map after full dephasing.
/// `unital = true`: Dirichlet mixture of `permutation . Delta` channels.
pub fn random_dio<T: Scalar>(d: usize, unital: bool, rng: &mut SeededRng) -> Result<Channel<T>> {
    if d < 2 {
        return Err(Error::PreconditionViolation(format!("random_dio needs d >= 2, got {d}")));
    }
    let delta = Channel::dephasing(d);
    let ch = if unital {
        let count = 1 + rng.index(d);
        let w: Vec<T> = rng.dirichlet(count).into_iter().map(T::c).collect();
        let parts = (0..count)
            .map(|_| compose(&Channel::permutation(&rng.permutation(d))?, &delta))
            .collect::<Result<Vec<_>>>()?;
        Channel::convex_combination(&w, &parts)?
    } else {
        let rank = 1 + rng.index(d * d);
        compose(&random_channel(d, rank, ChannelKind::General, rng)?, &delta)?
    };
    let class = ch.classify();
    if !class.cptp || !class.dio || (unital && !class.unital) {
        return Err(Error::ConstructionFailed(format!(
            "random_dio(d = {d}, unital = {unital}) produced {class:?}"
        )));
    }
    Ok(ch)
}

/// Column-stochastic `rows x cols` matrix with flat Dirichlet columns.
pub fn random_stochastic<T: Scalar>(rows: usize, cols: usize, rng: &mut SeededRng) -> Stochastic<T> {
    let mut p = DMatrix::zeros(rows, cols);
    for i in 0..cols {
        for (x, v) in rng.dirichlet(rows).into_iter().enumerate() {
            p[(x, i)] = T::c(v);
        }
    }
    // Dirichlet columns sum to one up to rounding
    Stochastic::new(p).expect("Dirichlet columns are stochastic")
}

pub fn random_povm<T: Scalar>(
    d: usize,
    n: usize,
    incoherent: bool,
    rng: &mut SeededRng,
) -> Result<Measurement<T>> {
    if n < 2 {
        return Err(Error::PreconditionViolation(format!("random_povm needs n >= 2, got {n}")));
    }
    if incoherent {
        let s = random_stochastic::<T>(n, d, rng);
        return classical_postprocess(&Measurement::basis(d), &s);
    }
    let mut last_min = 0.0;
    for _ in 0..10 {
        let grams: Vec<Hermitian<T>> = (0..n)
            .map(|_| {
                let a = ginibre::<T>(d, d, rng);
                Hermitian::from_matrix_unchecked(&a * a.adjoint())
            })
            .collect();
        let total = grams.iter().fold(Hermitian::zeros(d), |acc, g| acc.plus(g));
        let (vals, vecs) = total.eigh();
        last_min = vals.iter().copied().fold(f64::INFINITY, |a, b| a.min(b.f64()));
        if last_min < 1e-12 {
            continue;
        }
        let inv_sqrt = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            d,
            vals.iter().map(|l| Complex::new(T::one() / l.sqrt(), T::zero())),
        ));
        let t = &vecs * inv_sqrt * vecs.adjoint();
        let elements = grams.iter().map(|g| g.conjugate_by(&t)).collect();
        return Measurement::new(elements);
    }
    Err(Error::SingularTotal {
        min_eigenvalue: last_min,
    })
}

/// Random density operator `A A^dag / tr(A A^dag)` with Ginibre `A`.
pub fn random_density<T: Scalar>(d: usize, rng: &mut SeededRng) -> Hermitian<T> {
    let a = ginibre::<T>(d, d, rng);
    let g = Hermitian::from_matrix_unchecked(&a * a.adjoint());
    let tr = g.trace();
    g.scaled(T::one() / tr)
}

/// Random pure state `|psi><psi|`.
pub fn random_pure<T: Scalar>(d: usize, rng: &mut SeededRng) -> Hermitian<T> {
    let psi = ginibre::<T>(d, 1, rng);
    let norm = psi.norm();
    Hermitian::outer(&psi.column(0).unscale(norm))
}

/// Random Hermitian operator with Gaussian entries.
pub fn random_hermitian<T: Scalar>(d: usize, rng: &mut SeededRng) -> Hermitian<T> {
    Hermitian::from_matrix_unchecked(ginibre::<T>(d, d, rng))
}

/// Named channels used throughout the docs and tests.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExampleChannel {
    /// `rho -> tr(rho) |+><+|`
    Prep,
    /// `rho -> <+|rho|+> |0><0| + <-|rho|-> |1><1|`
    G,
    Hadamard,
    QubitDephase,
    Cnot2,
}

impl ExampleChannel {
    pub const ALL: [ExampleChannel; 5] = [
        ExampleChannel::Prep,
        ExampleChannel::G,
        ExampleChannel::Hadamard,
        ExampleChannel::QubitDephase,
        ExampleChannel::Cnot2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExampleChannel::Prep => "prep",
            ExampleChannel::G => "g",
            ExampleChannel::Hadamard => "hadamard",
            ExampleChannel::QubitDephase => "qubit_dephase",
            ExampleChannel::Cnot2 => "cnot2",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|e| e.name() == name)
    }
}

fn c2<T: Scalar>(rows: [[f64; 2]; 2]) -> CMatrix<T> {
    CMatrix::from_fn(2, 2, |r, c| Complex::new(T::c(rows[r][c]), T::zero()))
}

pub fn named_examples<T: Scalar>() -> BTreeMap<ExampleChannel, Channel<T>> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = BTreeMap::new();
    // |+><0|, |+><1|
    let prep = Channel::from_kraus(vec![c2([[s, 0.0], [s, 0.0]]), c2([[0.0, s], [0.0, s]])]);
    // |0><+|, |1><-|
    let g = Channel::from_kraus(vec![c2([[s, s], [0.0, 0.0]]), c2([[0.0, 0.0], [s, -s]])]);
    let h = Channel::unitary(c2([[s, s], [s, -s]]));
    out.insert(ExampleChannel::Prep, prep.expect("prep is CPTP"));
    out.insert(ExampleChannel::G, g.expect("g is CPTP"));
    out.insert(ExampleChannel::Hadamard, h.expect("hadamard is unitary"));
    out.insert(ExampleChannel::QubitDephase, Channel::dephasing(2));
    out.insert(ExampleChannel::Cnot2, cnot_unitary(2).expect("d = 2"));
    out
}
