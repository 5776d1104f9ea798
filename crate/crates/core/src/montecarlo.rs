//! Haar-random unitaries and Monte Carlo estimates of word moments.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::weingarten::TraceMonomial;
use crate::words::Word;
use crate::Error;

pub const UNITARITY_TOLERANCE: f64 = 1e-10;
/// Samples drawn from one RNG stream.
pub const BLOCK: u64 = 1024;
pub const RNG_NAME: &str = "ChaCha8Rng (rand_chacha 0.9), seed_from_u64(seed), stream = block index";

#[derive(Clone, Debug)]
pub struct UnitarySample {
    pub n: usize,
    pub matrix: DMatrix<Complex64>,
}

impl UnitarySample {
    /// `max |(U* U - I)_ij|`.
    pub fn unitarity_error(&self) -> f64 {
        let g = self.matrix.adjoint() * &self.matrix;
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g[(i, j)] - Complex64::new(target, 0.0)).norm());
            }
        }
        worst
    }
}

/// QR of a complex Ginibre matrix, with the phases of `R`'s diagonal moved
/// into `Q` so that the result is Haar distributed.
pub fn sample_haar<R: Rng>(n: usize, rng: &mut R) -> UnitarySample {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let z = DMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * scale, im * scale)
    });
    let qr = z.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let norm = d.norm();
        let phase = if norm > 0.0 { d / norm } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    UnitarySample { n, matrix: q }
}

#[derive(Clone, Debug, Serialize)]
pub struct Estimate {
    pub mean_re: f64,
    pub mean_im: f64,
    /// `sqrt(se_re^2 + se_im^2)`.
    pub stderr: f64,
    pub stderr_re: f64,
    pub stderr_im: f64,
    pub samples: u64,
    pub seed: u64,
    pub n: usize,
    pub rng: &'static str,
    pub max_unitarity_error: f64,
}

#[derive(Clone, Copy, Default)]
struct Sums {
    re: f64,
    im: f64,
    re2: f64,
    im2: f64,
    worst: f64,
}

fn evaluate(w: &Word, us: &[DMatrix<Complex64>], adj: &[DMatrix<Complex64>], n: usize) -> DMatrix<Complex64> {
    let mut m = DMatrix::<Complex64>::identity(n, n);
    for l in w.letters() {
        let g = l.generator() - 1;
        m = if l.is_inverse() { m * &adj[g] } else { m * &us[g] };
    }
    m
}

fn run_block(w: &Word, t: &TraceMonomial, n: usize, seed: u64, block: u64, count: u64) -> Result<Sums, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    let r = w.rank().max(w.max_generator());
    let max_power = t.exponents().iter().map(|m| m.unsigned_abs()).max().unwrap_or(0) as usize;
    let mut s = Sums::default();
    for _ in 0..count {
        let mut us = Vec::with_capacity(r);
        for _ in 0..r {
            let u = sample_haar(n, &mut rng);
            let err = u.unitarity_error();
            if err > UNITARITY_TOLERANCE {
                return Err(Error::Internal(format!("sampled matrix off the unitary group by {err:e}")));
            }
            s.worst = s.worst.max(err);
            us.push(u.matrix);
        }
        let adj: Vec<_> = us.iter().map(|u| u.adjoint()).collect();
        let wm = evaluate(w, &us, &adj, n);
        // tr(W^k) for k = 1..max; negative powers are conjugates
        let mut traces = Vec::with_capacity(max_power + 1);
        traces.push(Complex64::new(n as f64, 0.0));
        let mut p = DMatrix::<Complex64>::identity(n, n);
        for _ in 0..max_power {
            p = &p * &wm;
            traces.push(p.trace());
        }
        let value = t.exponents().iter().fold(Complex64::new(1.0, 0.0), |acc, &m| {
            let tr = traces[m.unsigned_abs() as usize];
            acc * if m > 0 { tr } else { tr.conj() }
        });
        s.re += value.re;
        s.im += value.im;
        s.re2 += value.re * value.re;
        s.im2 += value.im * value.im;
    }
    Ok(s)
}

/// Mean of `prod tr(w(U_1..U_r)^{m_i})` over `samples` Haar draws.
pub fn estimate_moment(w: &Word, t: &TraceMonomial, n: usize, samples: u64, seed: u64) -> Result<Estimate, Error> {
    if n == 0 || samples < 2 {
        return Err(Error::Invalid("need n >= 1 and at least two samples".into()));
    }
    let blocks = samples.div_ceil(BLOCK);
    let size = |b: u64| BLOCK.min(samples - b * BLOCK);

    #[cfg(feature = "parallel")]
    let partial: Vec<Result<Sums, Error>> = {
        use rayon::prelude::*;
        (0..blocks).into_par_iter().map(|b| run_block(w, t, n, seed, b, size(b))).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let partial: Vec<Result<Sums, Error>> = (0..blocks).map(|b| run_block(w, t, n, seed, b, size(b))).collect();

    let mut total = Sums::default();
    for p in partial {
        let p = p?;
        total.re += p.re;
        total.im += p.im;
        total.re2 += p.re2;
        total.im2 += p.im2;
        total.worst = total.worst.max(p.worst);
    }
    let k = samples as f64;
    let (mre, mim) = (total.re / k, total.im / k);
    let var = |s2: f64, m: f64| ((s2 - k * m * m) / (k - 1.0)).max(0.0);
    let se_re = (var(total.re2, mre) / k).sqrt();
    let se_im = (var(total.im2, mim) / k).sqrt();
    Ok(Estimate {
        mean_re: mre,
        mean_im: mim,
        stderr: (se_re * se_re + se_im * se_im).sqrt(),
        stderr_re: se_re,
        stderr_im: se_im,
        samples,
        seed,
        n,
        rng: RNG_NAME,
        max_unitarity_error: total.worst,
    })
}

impl Estimate {
    /// Distance to `exact` in units of the combined standard error.
    pub fn z_score(&self, exact: f64) -> f64 {
        let d = ((self.mean_re - exact).powi(2) + self.mean_im.powi(2)).sqrt();
        if self.stderr == 0.0 {
            if d == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            d / self.stderr
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    #[test]
    fn samples_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in [1, 2, 5, 12] {
            let u = sample_haar(n, &mut rng);
            assert!(u.unitarity_error() < UNITARITY_TOLERANCE);
        }
        let u = sample_haar(1, &mut rng);
        assert!((u.matrix[(0, 0)].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reproducible() {
        let t: TraceMonomial = "1,-1".parse().unwrap();
        let a = estimate_moment(&w("x"), &t, 3, 3000, 11).unwrap();
        let b = estimate_moment(&w("x"), &t, 3, 3000, 11).unwrap();
        assert_eq!(a.mean_re.to_bits(), b.mean_re.to_bits());
        assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
        let c = estimate_moment(&w("x"), &t, 3, 3000, 12).unwrap();
        assert_ne!(a.mean_re.to_bits(), c.mean_re.to_bits());
    }

    #[test]
    fn small_agreement() {
        let one: TraceMonomial = "1".parse().unwrap();
        let e = estimate_moment(&w("x"), &one, 4, 20_000, 3).unwrap();
        assert!(e.z_score(0.0) < 4.0);
        let e = estimate_moment(&w("x x y y"), &one, 8, 20_000, 5).unwrap();
        assert!(e.z_score(0.0) < 4.0);
        let e = estimate_moment(&w("x"), &"1,-1".parse().unwrap(), 5, 20_000, 9).unwrap();
        assert!(e.z_score(1.0) < 4.0);
    }
}
