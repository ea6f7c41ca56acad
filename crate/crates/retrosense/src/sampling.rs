//! Seeded random inputs for sweeps and verification: Haar-ish unitaries,
//! bounded-spectrum Hermitian generators, unit directions, multinomial shots.
//!
//! All randomness in the crate flows through a caller-provided ChaCha RNG so
//! identical seeds reproduce identical runs bit for bit.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::linalg::{CMatrix, C64};
use crate::states::HermitianOperator;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn standard_normal(rng: &mut impl Rng) -> f64 {
    // Box-Muller; avoids a rand_distr dependency for one distribution.
    loop {
        let u: f64 = rng.gen::<f64>();
        if u > f64::MIN_POSITIVE {
            let v: f64 = rng.gen::<f64>();
            return (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos();
        }
    }
}

fn ginibre(dim: usize, rng: &mut impl Rng) -> CMatrix {
    CMatrix::from_fn(dim, dim, |_, _| {
        C64::new(standard_normal(rng), standard_normal(rng))
    })
}

/// Haar-distributed unitary via QR of a Ginibre matrix with the standard
/// phase fix.
pub fn random_unitary(dim: usize, rng: &mut impl Rng) -> CMatrix {
    let g = ginibre(dim, rng);
    let qr = g.qr();
    let r_diag: Vec<C64> = (0..dim).map(|i| qr.r()[(i, i)]).collect();
    let mut q = qr.q();
    for (i, d) in r_diag.iter().enumerate() {
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        let col = q.column(i) * phase;
        q.set_column(i, &col);
    }
    q
}

/// GUE-style Hermitian matrix rescaled to the given spectral radius.
pub fn random_hermitian(dim: usize, spectral_radius: f64, rng: &mut impl Rng) -> HermitianOperator {
    let g = ginibre(dim, rng);
    let h = (&g + g.adjoint()).scale(0.5);
    let op = HermitianOperator::new(h).expect("symmetrized matrix is Hermitian");
    let (vals, _) = op.eigen();
    let radius = vals[0].abs().max(vals[vals.len() - 1].abs()).max(1e-12);
    HermitianOperator::new(op.matrix().scale(spectral_radius / radius))
        .expect("rescaling preserves Hermiticity")
}

/// Random CPTP channel: Ginibre Kraus operators whitened so that
/// sum K^dag K = I exactly.
pub fn random_channel(
    dim: usize,
    kraus_count: usize,
    rng: &mut impl Rng,
) -> crate::channels::KrausChannel {
    let gs: Vec<CMatrix> = (0..kraus_count.max(1)).map(|_| ginibre(dim, rng)).collect();
    let mut s = CMatrix::zeros(dim, dim);
    for g in &gs {
        s += g.adjoint() * g;
    }
    let (vals, vecs) = crate::linalg::hermitian_eigen(&s);
    let inv_sqrt = {
        let d = CMatrix::from_fn(dim, dim, |i, j| {
            if i == j {
                C64::new(1.0 / vals[i].max(1e-300).sqrt(), 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        &vecs * d * vecs.adjoint()
    };
    let ops: Vec<CMatrix> = gs.into_iter().map(|g| g * &inv_sqrt).collect();
    crate::channels::KrausChannel::new(ops).expect("whitened Kraus set is trace preserving")
}

/// Uniform direction on the unit sphere.
pub fn random_direction(rng: &mut impl Rng) -> [f64; 3] {
    loop {
        let v = [
            standard_normal(rng),
            standard_normal(rng),
            standard_normal(rng),
        ];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-6 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

/// Draws `shots` multinomial samples and returns empirical frequencies.
pub fn multinomial_frequencies(probs: &[f64], shots: u64, rng: &mut impl Rng) -> Vec<f64> {
    let mut counts = vec![0u64; probs.len()];
    let total: f64 = probs.iter().sum();
    for _ in 0..shots {
        let mut u: f64 = rng.gen::<f64>() * total;
        let mut chosen = probs.len() - 1;
        for (i, &p) in probs.iter().enumerate() {
            if u < p {
                chosen = i;
                break;
            }
            u -= p;
        }
        counts[chosen] += 1;
    }
    counts
        .into_iter()
        .map(|c| c as f64 / shots as f64)
        .collect()
}
