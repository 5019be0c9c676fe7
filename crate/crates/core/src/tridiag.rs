//! Thomas algorithm for tridiagonal systems.

/// Solves `A x = rhs` in place, where row `i` of `A` is
/// `lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1]`.
///
/// `lower[0]` and `upper[n-1]` are ignored. No pivoting: the matrix must be
/// diagonally dominant (or otherwise safe for elimination without pivoting).
pub fn solve(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &mut [f64]) {
    let n = rhs.len();
    assert!(
        lower.len() == n && diag.len() == n && upper.len() == n,
        "tridiagonal bands must match the right-hand side length"
    );
    if n == 0 {
        return;
    }
    let mut c_prime = vec![0.0; n];
    c_prime[0] = upper[0] / diag[0];
    rhs[0] /= diag[0];
    for i in 1..n {
        let denom = diag[i] - lower[i] * c_prime[i - 1];
        c_prime[i] = upper[i] / denom;
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / denom;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= c_prime[i] * rhs[i + 1];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_dense_product() {
        let lower = [0.0, -1.0, 0.5, -0.3, 0.2];
        let diag = [4.0, 3.0, 5.0, 2.5, 3.0];
        let upper = [1.0, -0.7, 0.4, 0.9, 0.0];
        let x = [1.0, -2.0, 0.5, 3.0, -1.5];
        let mut rhs: Vec<f64> = (0..5)
            .map(|i| {
                let mut s = diag[i] * x[i];
                if i > 0 {
                    s += lower[i] * x[i - 1];
                }
                if i < 4 {
                    s += upper[i] * x[i + 1];
                }
                s
            })
            .collect();
        solve(&lower, &diag, &upper, &mut rhs);
        for (a, b) in rhs.iter().zip(x) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn single_row() {
        let mut rhs = [6.0];
        solve(&[0.0], &[3.0], &[0.0], &mut rhs);
        assert_eq!(rhs[0], 2.0);
    }
}
