//! Natural cubic spline on strictly increasing knots.

#[derive(Clone, Debug)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    /// Second derivatives at the knots.
    m: Vec<f64>,
}

impl CubicSpline {
    /// Caller guarantees `x` strictly increasing and `x.len() == y.len() >= 2`.
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Self {
        let n = x.len();
        debug_assert!(n >= 2 && y.len() == n);
        let mut m = vec![0.0; n];
        if n > 2 {
            // Thomas algorithm on the interior equations, natural end conditions.
            let mut c_prime = vec![0.0; n];
            let mut d_prime = vec![0.0; n];
            for i in 1..n - 1 {
                let h0 = x[i] - x[i - 1];
                let h1 = x[i + 1] - x[i];
                let a = h0;
                let b = 2.0 * (h0 + h1);
                let c = h1;
                let d = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
                let denom = b - a * c_prime[i - 1];
                c_prime[i] = c / denom;
                d_prime[i] = (d - a * d_prime[i - 1]) / denom;
            }
            for i in (1..n - 1).rev() {
                m[i] = d_prime[i] - c_prime[i] * m[i + 1];
            }
        }
        Self { x, y, m }
    }

    /// Evaluates inside `[x₀, x_{n−1}]`; outside, the end cubic is continued.
    pub fn eval(&self, t: f64) -> f64 {
        let n = self.x.len();
        let i = match self.x.partition_point(|&xi| xi <= t) {
            0 => 0,
            p if p >= n => n - 2,
            p => p - 1,
        };
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        a * self.y[i]
            + b * self.y[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates_knots_exactly() {
        let x: Vec<f64> = (0..20).map(|i| (i as f64 * 0.37).powf(1.3)).collect();
        let y: Vec<f64> = x.iter().map(|v| v.sin()).collect();
        let s = CubicSpline::new(x.clone(), y.clone());
        for (xi, yi) in x.iter().zip(&y) {
            assert!((s.eval(*xi) - yi).abs() < 1e-15);
        }
    }

    #[test]
    fn fourth_order_accuracy_on_smooth_data() {
        let err = |n: usize| {
            let x: Vec<f64> = (0..n).map(|i| 3.0 * i as f64 / (n - 1) as f64).collect();
            let y: Vec<f64> = x.iter().map(|v| v.cos()).collect();
            let s = CubicSpline::new(x, y);
            // stay away from the natural end conditions
            (0..200)
                .map(|j| 1.0 + j as f64 / 200.0)
                .map(|t| (s.eval(t) - t.cos()).abs())
                .fold(0.0, f64::max)
        };
        let ratio = err(41) / err(81);
        assert!(ratio > 12.0, "convergence ratio {ratio}");
    }

    #[test]
    fn linear_data_is_reproduced() {
        let x = vec![0.0, 0.5, 2.0, 2.1, 7.0];
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v - 1.0).collect();
        let s = CubicSpline::new(x, y);
        for t in [0.1, 1.3, 2.05, 5.5, 8.0] {
            assert!((s.eval(t) - (3.0 * t - 1.0)).abs() < 1e-12);
        }
    }
}
