//! τ-function and wave profile. Everything runs in log space: the τ-sum is a
//! positive combination of exponentials whose exponents are the tropical
//! terms, so ln τ is a log-sum-exp and u = 2∂²ₓ ln τ is a softmax variance.

use crate::grassmann::{GrassmannPoint, KappaParams};
use crate::numeric::log_sum_exp;
use crate::tropical::{tropical_field, TropicalError, TropicalField};

/// Evaluator for one point's τ-function and KP solution u.
#[derive(Clone, Debug)]
pub struct Wave {
    field: TropicalField,
}

impl Wave {
    pub fn new(point: &GrassmannPoint, kappa: &KappaParams) -> Result<Wave, TropicalError> {
        Ok(Wave { field: tropical_field(point, kappa)? })
    }

    pub fn from_field(field: TropicalField) -> Wave {
        Wave { field }
    }

    pub fn field(&self) -> &TropicalField {
        &self.field
    }

    pub fn log_tau(&self, x: f64, y: f64, t: f64) -> f64 {
        let exps: Vec<f64> = self.field.terms().iter().map(|tm| tm.eval(x, y, t)).collect();
        log_sum_exp(&exps)
    }

    /// τ itself; overflows to +∞ for large exponents (use `log_tau` instead).
    pub fn tau(&self, x: f64, y: f64, t: f64) -> f64 {
        self.log_tau(x, y, t).exp()
    }

    /// u = 2 ∂²ₓ ln τ = 2·Var_w(p) where w is the softmax of the exponents
    /// and p their x-coefficients.
    pub fn u(&self, x: f64, y: f64, t: f64) -> f64 {
        let exps: Vec<f64> = self.field.terms().iter().map(|tm| tm.eval(x, y, t)).collect();
        let m = exps.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut z = 0.0;
        let mut s1 = 0.0;
        let mut s2 = 0.0;
        for (tm, e) in self.field.terms().iter().zip(&exps) {
            let w = (e - m).exp();
            z += w;
            s1 += w * tm.p;
            s2 += w * tm.p * tm.p;
        }
        let mean = s1 / z;
        2.0 * (s2 / z - mean * mean)
    }
}

pub fn tau(point: &GrassmannPoint, kappa: &KappaParams, x: f64, y: f64, t: f64) -> Result<f64, TropicalError> {
    Ok(Wave::new(point, kappa)?.tau(x, y, t))
}

pub fn u(point: &GrassmannPoint, kappa: &KappaParams, x: f64, y: f64, t: f64) -> Result<f64, TropicalError> {
    Ok(Wave::new(point, kappa)?.u(x, y, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::validate_kappa;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn one_soliton() -> Wave {
        let p = GrassmannPoint::from_rows(1, 2, vec![vec![1.0, 1.0]]).unwrap();
        let kappa = validate_kappa(&[-1.0, 1.0], 1).unwrap();
        Wave::new(&p, &kappa).unwrap()
    }

    #[test]
    fn gr12_tau_values() {
        let w = one_soliton();
        assert!((w.tau(0.0, 0.0, 0.0) - 2.0).abs() < 1e-12);
        for y in [-1.3, 0.0, 0.7] {
            assert!((w.tau(0.0, y, 0.0) - 2.0 * y.exp()).abs() < 1e-10);
        }
    }

    #[test]
    fn gr12_crest_height_and_decay() {
        let w = one_soliton();
        // crest along x = −t, height (κ₂−κ₁)²/2 = 2
        for (y, t) in [(0.0, 0.0), (3.0, -1.5), (-2.0, 2.0)] {
            assert!((w.u(-t, y, t) - 2.0).abs() < 1e-8);
        }
        assert!(w.u(-1000.0, 0.0, 0.0).abs() < 1e-8);
    }

    #[test]
    fn tau_matches_wronskian() {
        // τ_A = Wr(f₁,f₂) with f_i = Σ_j a_ij exp(κ_j x + κ_j² y + κ_j³ t)
        let rows = vec![vec![1.0, 0.0, -1.0, -2.0], vec![0.0, 1.0, 2.0, 3.0]];
        let p = GrassmannPoint::from_rows(2, 4, rows.clone()).unwrap();
        let kappa = validate_kappa(&[-3.0, -1.0, 0.5, 2.0], 2).unwrap();
        let w = Wave::new(&p, &kappa).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let x = rng.gen_range(-2.0..2.0);
            let y = rng.gen_range(-2.0..2.0);
            let t = rng.gen_range(-1.0..1.0);
            let theta: Vec<f64> = (0..4)
                .map(|j| {
                    let kj = kappa.value(j + 1);
                    kj * x + kj * kj * y + kj * kj * kj * t
                })
                .collect();
            let f: Vec<f64> = (0..2)
                .map(|i| (0..4).map(|j| rows[i][j] * theta[j].exp()).sum())
                .collect();
            let fx: Vec<f64> = (0..2)
                .map(|i| (0..4).map(|j| rows[i][j] * kappa.value(j + 1) * theta[j].exp()).sum())
                .collect();
            let (a, b) = (f[0] * fx[1], f[1] * fx[0]);
            let wr = a - b;
            let tau = w.tau(x, y, t);
            // the Wronskian subtraction itself loses digits when |a|,|b| ≫ |wr|
            let tol = (1e-10 * wr.abs()).max(1e-13 * (a.abs() + b.abs()));
            assert!((tau - wr).abs() <= tol, "({x},{y},{t})");
        }
    }

    #[test]
    fn u_matches_finite_difference() {
        let p = GrassmannPoint::from_rows(
            2,
            4,
            vec![vec![1.0, 0.0, -1.0, -2.0], vec![0.0, 1.0, 2.0, 3.0]],
        )
        .unwrap();
        let kappa = validate_kappa(&[-3.0, -1.0, 0.5, 2.0], 2).unwrap();
        let w = Wave::new(&p, &kappa).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let h = 1e-4;
        for _ in 0..200 {
            let x = rng.gen_range(-5.0..5.0);
            let y = rng.gen_range(-5.0..5.0);
            let t = rng.gen_range(-3.0..3.0);
            let fd = (w.log_tau(x + h, y, t) - 2.0 * w.log_tau(x, y, t) + w.log_tau(x - h, y, t))
                / (h * h);
            assert!((w.u(x, y, t) - 2.0 * fd).abs() < 1e-4);
        }
    }

    #[test]
    fn log_tau_sandwiched_by_tropical_max() {
        let p = GrassmannPoint::from_rows(
            2,
            4,
            vec![vec![1.0, 0.0, -1.0, -2.0], vec![0.0, 1.0, 2.0, 3.0]],
        )
        .unwrap();
        let kappa = validate_kappa(&[-3.0, -1.0, 0.5, 2.0], 2).unwrap();
        let w = Wave::new(&p, &kappa).unwrap();
        let bound = (w.field().terms().len() as f64).ln();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..1000 {
            let x = rng.gen_range(-50.0..50.0);
            let y = rng.gen_range(-50.0..50.0);
            let t = rng.gen_range(-10.0..10.0);
            let f = w.field().f_a(x, y, t);
            let lt = w.log_tau(x, y, t);
            assert!(f <= lt + 1e-9 && lt <= f + bound + 1e-9);
        }
    }
}
