use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::matrix::ComplexMatrix;

/// One CN(0, 1) draw: real and imaginary parts each N(0, 1/2).
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
}

/// `rows × cols` matrix of i.i.d. CN(0, 1) entries, filled row by row.
pub fn sample_complex_gaussian<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    let data = (0..rows * cols).map(|_| complex_gaussian(rng)).collect();
    ComplexMatrix::from_row_major(rows, cols, data).expect("gaussian samples are finite")
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn same_seed_same_matrix() {
        let a = sample_complex_gaussian(&mut ChaCha8Rng::seed_from_u64(9), 3, 4);
        let b = sample_complex_gaussian(&mut ChaCha8Rng::seed_from_u64(9), 3, 4);
        assert_eq!(a, b);
    }

    #[test]
    fn zero_rows_gives_empty_matrix() {
        let m = sample_complex_gaussian(&mut ChaCha8Rng::seed_from_u64(1), 0, 5);
        assert_eq!((m.rows(), m.cols()), (0, 5));
        assert!(m.as_slice().is_empty());
    }

    #[test]
    fn unit_second_moment() {
        let n = 100_000;
        let m = sample_complex_gaussian(&mut ChaCha8Rng::seed_from_u64(5), n, 1);
        let mags: Vec<f64> = m.as_slice().iter().map(|z| z.norm_sqr()).collect();
        let mean = mags.iter().sum::<f64>() / n as f64;
        // |z|^2 ~ Exp(1): variance 1.
        let sigma = 1.0 / (n as f64).sqrt();
        assert!((mean - 1.0).abs() < 3.0 * sigma, "mean |z|^2 = {mean}");
        let mean_re = m.as_slice().iter().map(|z| z.re).sum::<f64>() / n as f64;
        assert!(mean_re.abs() < 3.0 * (0.5 / n as f64).sqrt());
    }
}
