//! Exact and floating-point linear algebra on the graph Laplacian `Q` and on
//! `Q̂ = Q + J`: eigenvalues, induced norms, condition numbers, exact
//! big-integer determinants, spanning-tree counts, and a truncated
//! log-determinant expansion with a certified remainder bound.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matrix::{jacobi_eigen, jacobi_eigenvalues, Mat};

/// Arbitrary-precision non-negative integer used for every exact count.
pub type BigCount = BigUint;

/// The Laplacian `Q` of a simple graph: `Q_jj = d_j`, `Q_jk = -1` on edges,
/// `0` otherwise. Symmetric with zero row sums; eigenvalues are real and
/// non-negative with the smallest equal to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaplacianMatrix {
    n: usize,
    entries: Vec<i64>,
}

/// `Q̂ = Q + J` where `J` is the all-ones matrix. Its spectrum is that of `Q`
/// with the zero eigenvalue (for the all-ones eigenvector) replaced by `n`,
/// so `Q̂` is positive definite exactly when the graph is connected, and
/// `‖Q̂‖₁ = n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QHatMatrix {
    n: usize,
    entries: Vec<i64>,
}

macro_rules! int_matrix_impl {
    ($ty:ident) => {
        impl $ty {
            pub fn n(&self) -> usize {
                self.n
            }

            #[inline]
            pub fn entry(&self, i: usize, j: usize) -> i64 {
                self.entries[i * self.n + j]
            }

            /// Floating-point copy for the eigensolver and norm routines.
            pub fn to_mat(&self) -> Mat {
                Mat::from_fn(self.n, |i, j| self.entry(i, j) as f64)
            }
        }
    };
}

int_matrix_impl!(LaplacianMatrix);
int_matrix_impl!(QHatMatrix);

/// Exact integer Laplacian of `g`.
pub fn laplacian(g: &Graph) -> LaplacianMatrix {
    let n = g.n();
    let mut entries = vec![0i64; n * n];
    for v in 0..n {
        entries[v * n + v] = g.degree(v) as i64;
    }
    for &(u, v) in g.edges() {
        entries[u * n + v] = -1;
        entries[v * n + u] = -1;
    }
    LaplacianMatrix { n, entries }
}

/// Exact integer `Q̂ = Q + J`.
pub fn qhat(g: &Graph) -> QHatMatrix {
    let q = laplacian(g);
    let n = q.n;
    let entries = q.entries.iter().map(|&x| x + 1).collect();
    QHatMatrix { n, entries }
}

/// Sorted eigenvalues, algebraic connectivity, top eigenvalue, and
/// `gamma = lambda_2 / n` in one bundle.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralSummary {
    pub eigenvalues: Vec<f64>,
    pub lambda2: f64,
    pub lambda_n: f64,
    pub gamma: f64,
}

/// All eigenvalues of a symmetric matrix, ascending.
///
/// Symmetry is checked up to `tol` before solving; the cyclic Jacobi solver
/// keeps spot-check residuals well below `1e-9 * ‖M‖₂` at these sizes.
pub fn eigenvalues(m: &Mat, tol: f64) -> Result<Vec<f64>> {
    if let Some((i, j)) = m.is_symmetric(tol) {
        return Err(Error::NotSymmetric { i, j });
    }
    jacobi_eigenvalues(m)
}

/// Eigenvalues plus eigenvectors (columns), for residual checks and
/// covariance work.
pub fn eigen_decomposition(m: &Mat, tol: f64) -> Result<(Vec<f64>, Mat)> {
    if let Some((i, j)) = m.is_symmetric(tol) {
        return Err(Error::NotSymmetric { i, j });
    }
    jacobi_eigen(m)
}

pub fn spectral_summary(g: &Graph) -> Result<SpectralSummary> {
    let n = g.n();
    if n < 2 {
        return Err(Error::InvalidInput(
            "spectral summary needs at least two vertices".into(),
        ));
    }
    let eig = eigenvalues(&laplacian(g).to_mat(), 0.0)?;
    let lambda2 = eig[1];
    let lambda_n = eig[n - 1];
    Ok(SpectralSummary {
        lambda2,
        lambda_n,
        gamma: lambda2 / n as f64,
        eigenvalues: eig,
    })
}

/// The second-smallest Laplacian eigenvalue; zero exactly when the graph is
/// disconnected (which callers should decide by traversal, not by this
/// float).
pub fn algebraic_connectivity(g: &Graph) -> Result<f64> {
    Ok(spectral_summary(g)?.lambda2)
}

/// Number of spanning trees, computed exactly as the principal minor of `Q`
/// with row and column 0 deleted, by fraction-free elimination.
///
/// Equals `det Q̂ / n²` exactly; zero exactly when the graph is disconnected.
pub fn spanning_tree_count(g: &Graph) -> BigCount {
    let q = laplacian(g);
    let n = q.n;
    if n == 1 {
        return BigCount::from(1u32);
    }
    let m = n - 1;
    let mut minor = Vec::with_capacity(m * m);
    for i in 1..n {
        for j in 1..n {
            minor.push(BigInt::from(q.entry(i, j)));
        }
    }
    let det = bareiss_determinant(minor, m);
    debug_assert!(det.sign() != Sign::Minus);
    det.magnitude().clone()
}

/// Exact integer determinant of `Q̂`; equals `n² · t(G)`.
pub fn det_qhat_exact(g: &Graph) -> BigCount {
    let qh = qhat(g);
    let entries = qh.entries.iter().map(|&x| BigInt::from(x)).collect();
    let det = bareiss_determinant(entries, qh.n);
    debug_assert!(det.sign() != Sign::Minus);
    det.magnitude().clone()
}

/// Natural log of `det Q̂`, taken from the exact integer value.
///
/// Errors on disconnected graphs, where the determinant is zero.
pub fn log_det_qhat(g: &Graph) -> Result<f64> {
    let det = det_qhat_exact(g);
    if det.is_zero() {
        return Err(Error::Disconnected);
    }
    Ok(ln_bigcount(&det))
}

/// Natural log of a positive big integer, accurate to double precision even
/// when the value overflows `f64`.
pub fn ln_bigcount(x: &BigCount) -> f64 {
    assert!(!x.is_zero(), "ln of zero");
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top: BigUint = x >> shift;
    let mantissa = top.to_f64().expect("64-bit mantissa");
    mantissa.ln() + (shift as f64) * std::f64::consts::LN_2
}

/// Fraction-free (Bareiss) determinant over exact integers; row-major input.
fn bareiss_determinant(mut m: Vec<BigInt>, n: usize) -> BigInt {
    if n == 0 {
        return BigInt::from(1);
    }
    let idx = |i: usize, j: usize| i * n + j;
    let mut sign = 1i8;
    let mut prev = BigInt::from(1);
    for k in 0..n.saturating_sub(1) {
        if m[idx(k, k)].is_zero() {
            let swap = ((k + 1)..n).find(|&r| !m[idx(r, k)].is_zero());
            match swap {
                Some(r) => {
                    for j in 0..n {
                        m.swap(idx(k, j), idx(r, j));
                    }
                    sign = -sign;
                }
                None => return BigInt::from(0),
            }
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let t = &m[idx(i, j)] * &m[idx(k, k)] - &m[idx(i, k)] * &m[idx(k, j)];
                // exact by the Bareiss identity
                m[idx(i, j)] = t / &prev;
            }
        }
        prev = m[idx(k, k)].clone();
    }
    let det = m[idx(n - 1, n - 1)].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Which induced matrix norm to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormP {
    One,
    Two,
    Inf,
}

pub fn matrix_norm(m: &Mat, p: NormP) -> Result<f64> {
    match p {
        NormP::One => Ok(m.norm_one()),
        NormP::Inf => Ok(m.norm_inf()),
        NormP::Two => m.norm_two(),
    }
}

/// Condition number `μ_p = ‖M‖_p · ‖M⁻¹‖_p`; always at least one.
pub fn condition_number(m: &Mat, p: NormP) -> Result<f64> {
    let inv = m.inverse()?;
    Ok(matrix_norm(m, p)? * matrix_norm(&inv, p)?)
}

/// Truncated log-determinant of `I + X` with a certified remainder bound.
///
/// Requires `‖X‖₂ < 1`. Returns `(approx, bound)` with
/// `approx = Σ_{r=1}^{m-1} (-1)^{r+1} tr(Xʳ)/r` and
/// `bound = (n/m) ‖X‖₂^m / (1-‖X‖₂)`, so that
/// `|log det(I+X) - approx| <= bound`.
pub fn truncated_logdet(x: &Mat, m: usize) -> Result<(f64, f64)> {
    if m < 2 {
        return Err(Error::InvalidInput("truncation order must be >= 2".into()));
    }
    let norm = x.norm_two()?;
    if !(norm < 1.0) {
        return Err(Error::SpectralNormTooLarge { norm });
    }
    let n = x.n();
    let mut approx = 0.0f64;
    let mut power = x.clone();
    for r in 1..m {
        let sign = if r % 2 == 1 { 1.0 } else { -1.0 };
        approx += sign * power.trace() / r as f64;
        if r + 1 < m {
            power = power.matmul(x);
        }
    }
    let bound = if norm == 0.0 {
        0.0
    } else {
        (n as f64 / m as f64) * norm.powi(m as i32) / (1.0 - norm)
    };
    Ok((approx, bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph;

    #[test]
    fn laplacian_of_k3_is_3i_minus_j() {
        let g = graph::complete(3).unwrap();
        let q = laplacian(&g);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 2 } else { -1 };
                assert_eq!(q.entry(i, j), want);
            }
        }
        let qh = qhat(&g);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 3 } else { 0 };
                assert_eq!(qh.entry(i, j), want);
            }
        }
    }

    #[test]
    fn laplacian_rows_sum_to_zero() {
        let g = graph::random_even_graph(9, 30, 11).unwrap();
        let q = laplacian(&g);
        for i in 0..g.n() {
            let s: i64 = (0..g.n()).map(|j| q.entry(i, j)).sum();
            assert_eq!(s, 0);
        }
    }

    #[test]
    fn qhat_of_k5_is_5i() {
        let g = graph::complete(5).unwrap();
        let qh = qhat(&g);
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(qh.entry(i, j), if i == j { 5 } else { 0 });
            }
        }
    }

    #[test]
    fn eigenvalues_of_k3_laplacian() {
        let g = graph::complete(3).unwrap();
        let eig = eigenvalues(&laplacian(&g).to_mat(), 0.0).unwrap();
        let want = [0.0, 3.0, 3.0];
        for (a, b) in eig.iter().zip(want) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn eigenvalues_of_c4_match_circulant_formula() {
        // 2 - 2cos(2πk/4) for k = 0..3, sorted
        let g = graph::cycle(4).unwrap();
        let eig = eigenvalues(&laplacian(&g).to_mat(), 0.0).unwrap();
        let want = [0.0, 2.0, 2.0, 4.0];
        for (a, b) in eig.iter().zip(want) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn non_symmetric_rejected() {
        let mut m = Mat::zeros(2);
        m.set(0, 1, 1.0);
        assert_eq!(
            eigenvalues(&m, 0.0).unwrap_err(),
            Error::NotSymmetric { i: 0, j: 1 }
        );
    }

    #[test]
    fn connectivity_eigenvalue() {
        let kn = graph::complete(6).unwrap();
        assert!((algebraic_connectivity(&kn).unwrap() - 6.0).abs() < 1e-9);
        let two = graph::Graph::new(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert!(algebraic_connectivity(&two).unwrap().abs() < 1e-9);
        let c4 = graph::cycle(4).unwrap();
        assert!((algebraic_connectivity(&c4).unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn spanning_trees_of_named_graphs() {
        assert_eq!(
            spanning_tree_count(&graph::complete(5).unwrap()),
            BigCount::from(125u32)
        );
        assert_eq!(
            spanning_tree_count(&graph::complete_bipartite(3, 3).unwrap()),
            BigCount::from(81u32)
        );
        for n in 3..=10 {
            assert_eq!(
                spanning_tree_count(&graph::cycle(n).unwrap()),
                BigCount::from(n as u32),
                "t(C_{n})"
            );
        }
        let disconnected =
            graph::Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert!(spanning_tree_count(&disconnected).is_zero());
    }

    #[test]
    fn det_qhat_of_named_graphs() {
        assert_eq!(
            det_qhat_exact(&graph::complete(3).unwrap()),
            BigCount::from(27u32)
        );
        assert_eq!(
            det_qhat_exact(&graph::complete(5).unwrap()),
            BigCount::from(3125u32)
        );
        assert_eq!(
            det_qhat_exact(&graph::cycle(4).unwrap()),
            BigCount::from(64u32)
        );
    }

    #[test]
    fn tree_count_times_n_squared_is_det_qhat() {
        for seed in 0..12 {
            let g = graph::random_even_graph(8, 25, seed).unwrap();
            let t = spanning_tree_count(&g);
            let n2 = BigCount::from((g.n() * g.n()) as u64);
            assert_eq!(t * n2, det_qhat_exact(&g));
        }
    }

    #[test]
    fn log_det_matches_eigenvalue_route() {
        let g = graph::random_even_graph(9, 20, 5).unwrap();
        if !g.is_connected() {
            return;
        }
        let exact = log_det_qhat(&g).unwrap();
        let eig = eigenvalues(&qhat(&g).to_mat(), 0.0).unwrap();
        let from_eig: f64 = eig.iter().map(|x| x.ln()).sum();
        assert!(
            (exact - from_eig).abs() <= 1e-9 * exact.abs().max(1.0),
            "exact {exact} vs eigen {from_eig}"
        );
    }

    #[test]
    fn ln_bigcount_handles_huge_values() {
        let big = BigCount::from(3u32).pow(5000);
        let want = 5000.0 * 3.0f64.ln();
        assert!((ln_bigcount(&big) - want).abs() < 1e-9 * want);
    }

    #[test]
    fn norms_and_condition_numbers() {
        let id = Mat::identity(5);
        for p in [NormP::One, NormP::Two, NormP::Inf] {
            assert!((matrix_norm(&id, p).unwrap() - 1.0).abs() < 1e-12);
            assert!((condition_number(&id, p).unwrap() - 1.0).abs() < 1e-12);
        }
        let g = graph::complete(7).unwrap();
        let qh = qhat(&g).to_mat();
        assert!((matrix_norm(&qh, NormP::One).unwrap() - 7.0).abs() < 1e-12);
        assert!((condition_number(&qh, NormP::Two).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn spectral_norm_below_one_norm_for_symmetric() {
        let g = graph::random_even_graph(7, 15, 2).unwrap();
        let m = laplacian(&g).to_mat();
        let two = matrix_norm(&m, NormP::Two).unwrap();
        let one = matrix_norm(&m, NormP::One).unwrap();
        assert!(two <= one + 1e-9);
    }

    #[test]
    fn truncated_logdet_zero_matrix() {
        let (approx, bound) = truncated_logdet(&Mat::zeros(3), 4).unwrap();
        assert_eq!(approx, 0.0);
        assert_eq!(bound, 0.0);
    }

    #[test]
    fn truncated_logdet_diagonal_example() {
        let mut x = Mat::zeros(2);
        x.set(0, 0, 0.1);
        x.set(1, 1, -0.2);
        let (approx, bound) = truncated_logdet(&x, 2).unwrap();
        assert!((approx - (-0.1)).abs() < 1e-12);
        assert!((bound - 0.05).abs() < 1e-12);
        let truth = (1.1f64 * 0.8).ln();
        assert!((truth - approx).abs() <= bound);
    }

    #[test]
    fn truncated_logdet_rejects_large_norm() {
        let x = Mat::identity(2);
        assert!(matches!(
            truncated_logdet(&x, 3).unwrap_err(),
            Error::SpectralNormTooLarge { .. }
        ));
    }
}
