//! Log-space closed-form estimators and bounds for `EO(G)`: the
//! spanning-tree estimator for even-degree graphs with large algebraic
//! connectivity, the complete-graph and complete-bipartite asymptotics, and
//! the classical lower/upper bounds for `2d`-regular graphs.

use std::f64::consts::PI;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::spectral::{self, BigCount};

/// A non-negative quantity stored as a sign and the natural log of its
/// magnitude, so that estimates far beyond `f64` range stay representable.
///
/// Multiplication adds logs. Comparisons against exact integers happen in
/// log space; the log of a `BigCount` is accurate to roughly `1e-12`
/// relative, which is the resolution callers should assume.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LogNumber {
    /// `0` for the zero value, `+1` otherwise.
    pub sign: i8,
    /// Natural log of the magnitude; meaningless when `sign == 0`.
    pub ln_mag: f64,
}

impl LogNumber {
    pub fn zero() -> Self {
        LogNumber { sign: 0, ln_mag: f64::NEG_INFINITY }
    }

    pub fn from_ln(ln_mag: f64) -> Self {
        LogNumber { sign: 1, ln_mag }
    }

    pub fn from_f64(x: f64) -> Result<Self> {
        if x < 0.0 {
            return Err(Error::InvalidInput("LogNumber holds non-negative values".into()));
        }
        if x == 0.0 {
            return Ok(LogNumber::zero());
        }
        Ok(LogNumber::from_ln(x.ln()))
    }

    pub fn from_bigcount(x: &BigCount) -> Self {
        if x.is_zero() {
            LogNumber::zero()
        } else {
            LogNumber::from_ln(spectral::ln_bigcount(x))
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn ln(&self) -> f64 {
        if self.sign == 0 {
            f64::NEG_INFINITY
        } else {
            self.ln_mag
        }
    }

    /// The plain value; overflows to infinity beyond `f64` range.
    pub fn to_f64(&self) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            self.ln_mag.exp()
        }
    }

    pub fn mul(&self, other: &LogNumber) -> LogNumber {
        if self.sign == 0 || other.sign == 0 {
            LogNumber::zero()
        } else {
            LogNumber::from_ln(self.ln_mag + other.ln_mag)
        }
    }

    /// `self / other` in log space; zero denominators are rejected.
    pub fn div(&self, other: &LogNumber) -> Result<LogNumber> {
        if other.sign == 0 {
            return Err(Error::InvalidInput("division by zero LogNumber".into()));
        }
        if self.sign == 0 {
            return Ok(LogNumber::zero());
        }
        Ok(LogNumber::from_ln(self.ln_mag - other.ln_mag))
    }

    /// Decimal rendering `≈m.mmme±EE` for reports; the `≈` marks that the
    /// value left log space.
    pub fn approx_string(&self) -> String {
        if self.sign == 0 {
            return "0".to_string();
        }
        let log10 = self.ln_mag / std::f64::consts::LN_10;
        let exp = log10.floor();
        let mantissa = 10f64.powf(log10 - exp);
        format!("≈{:.4}e{}", mantissa, exp as i64)
    }
}

/// `exact / estimate` as a plain float, computed in log space.
pub fn ratio_exact_over_estimate(exact: &BigCount, estimate: &LogNumber) -> Result<f64> {
    if estimate.is_zero() {
        return Err(Error::InvalidInput("estimate is zero".into()));
    }
    if exact.is_zero() {
        return Ok(0.0);
    }
    Ok((spectral::ln_bigcount(exact) - estimate.ln_mag).exp())
}

/// One estimator run on one graph, serialized with stable field names.
#[derive(Clone, Debug, Serialize)]
pub struct EstimateReport {
    pub graph_id: String,
    pub n: usize,
    pub m: usize,
    pub lambda2: f64,
    pub gamma: f64,
    pub ln_t: Option<f64>,
    pub ln_estimate: f64,
    pub method: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Spanning-tree estimator for a connected even-degree graph:
/// `ln Ê = (m + n/2)·ln 2 - (n/2)·ln π - ln(t(G))/2`, with `t(G)` exact.
pub fn theta_estimate(g: &Graph) -> Result<LogNumber> {
    if let Some(v) = g.odd_vertex() {
        return Err(Error::OddDegree { vertex: v });
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.n() as f64;
    let m = g.edge_count() as f64;
    let t = spectral::spanning_tree_count(g);
    let ln_t = spectral::ln_bigcount(&t);
    Ok(LogNumber::from_ln(
        (m + n / 2.0) * std::f64::consts::LN_2 - (n / 2.0) * PI.ln() - 0.5 * ln_t,
    ))
}

/// Closed-form regular-tournament asymptotic for `K_n`:
/// `(2^{n+1} / (π n))^{(n-1)/2} · n^{1/2} · e^{-1/2}`.
///
/// `K_n` has even degrees exactly when `n` is odd, so the formula is exposed
/// for odd `n` only; reports carry a note rather than silently correcting
/// the parity convention.
pub fn mckay_kn(n: usize) -> Result<LogNumber> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::InvalidInput(format!(
            "complete-graph estimator needs odd n >= 3, got {n}"
        )));
    }
    let nf = n as f64;
    let ln = ((nf + 1.0) * std::f64::consts::LN_2 - (PI * nf).ln()) * (nf - 1.0) / 2.0
        + 0.5 * nf.ln()
        - 0.5;
    Ok(LogNumber::from_ln(ln))
}

/// Closed-form asymptotic for the complete bipartite graph `K_{n,n}`:
/// `e^{-1} · 2^{n²+n-1/2} / (π^{n-1/2} · n^{n-1})`, for even `n`.
pub fn isaev_knn(n: usize) -> Result<LogNumber> {
    if n < 2 || n % 2 == 1 {
        return Err(Error::InvalidInput(format!(
            "bipartite estimator needs even n >= 2, got {n}"
        )));
    }
    let nf = n as f64;
    let ln = -1.0 + (nf * nf + nf - 0.5) * std::f64::consts::LN_2
        - (nf - 0.5) * PI.ln()
        - (nf - 1.0) * nf.ln();
    Ok(LogNumber::from_ln(ln))
}

fn ln_factorial(k: usize) -> f64 {
    libm::lgamma(k as f64 + 1.0)
}

/// `ln((2d-1)!!)` via `(2d)! / (2^d d!)`.
fn ln_double_factorial_odd(d: usize) -> f64 {
    ln_factorial(2 * d) - d as f64 * std::f64::consts::LN_2 - ln_factorial(d)
}

/// Classical bounds for loop-free `2d`-regular graphs on `n` vertices:
/// `2^d ((2d-1)!!/d!)^{n-1} <= EO(G) <= ((2d)!/(d! d!))^{n/2}`.
pub fn regular_bounds(n: usize, d: usize) -> Result<(LogNumber, LogNumber)> {
    if d == 0 || n < 2 {
        return Err(Error::InvalidInput("regular bounds need d >= 1, n >= 2".into()));
    }
    let ln_lower = d as f64 * std::f64::consts::LN_2
        + (n as f64 - 1.0) * (ln_double_factorial_odd(d) - ln_factorial(d));
    let ln_upper = (n as f64 / 2.0) * (ln_factorial(2 * d) - 2.0 * ln_factorial(d));
    Ok((LogNumber::from_ln(ln_lower), LogNumber::from_ln(ln_upper)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{eo_count_backtrack, DEFAULT_EDGE_CAP};
    use crate::graph;
    use crate::graph::Graph;

    #[test]
    fn lognumber_multiplication_matches_plain_products() {
        let pairs = [(2.5, 8.0), (1e-8, 3e12), (7.0, 7.0)];
        for (a, b) in pairs {
            let la = LogNumber::from_f64(a).unwrap();
            let lb = LogNumber::from_f64(b).unwrap();
            let prod = la.mul(&lb).to_f64();
            assert!(
                (prod - a * b).abs() <= 1e-12 * (a * b).abs(),
                "{a} * {b} gave {prod}"
            );
        }
        assert!(LogNumber::zero().mul(&LogNumber::from_f64(3.0).unwrap()).is_zero());
    }

    #[test]
    fn theta_estimate_on_k5() {
        // direct evaluation of the closed form, independent of log plumbing
        let want = 2f64.powf(12.5) / PI.powf(2.5) / 125f64.sqrt();
        let est = theta_estimate(&graph::complete(5).unwrap()).unwrap();
        assert!((est.to_f64() - want).abs() < 1e-9 * want);
        // cross-check against the exact count
        let exact = eo_count_backtrack(&graph::complete(5).unwrap(), DEFAULT_EDGE_CAP).unwrap();
        let ratio = ratio_exact_over_estimate(&exact, &est).unwrap();
        assert!((ratio - 0.81).abs() < 0.01, "ratio {ratio}");
    }

    #[test]
    fn theta_estimate_on_k7_ratio() {
        let est = theta_estimate(&graph::complete(7).unwrap()).unwrap();
        let exact = eo_count_backtrack(&graph::complete(7).unwrap(), DEFAULT_EDGE_CAP).unwrap();
        let ratio = ratio_exact_over_estimate(&exact, &est).unwrap();
        assert!((ratio - 0.79).abs() < 0.01, "ratio {ratio}");
    }

    #[test]
    fn theta_estimate_rejects_bad_inputs() {
        let path = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        assert!(matches!(
            theta_estimate(&path).unwrap_err(),
            Error::OddDegree { .. }
        ));
        let two = Graph::new(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert_eq!(theta_estimate(&two).unwrap_err(), Error::Disconnected);
    }

    #[test]
    fn theta_estimate_is_relabeling_invariant() {
        let g = graph::random_even_graph(7, 12, 4).unwrap();
        if !g.is_connected() {
            return;
        }
        let a = theta_estimate(&g).unwrap();
        let h = g.relabel(&[6, 4, 2, 0, 5, 3, 1]).unwrap();
        let b = theta_estimate(&h).unwrap();
        assert!((a.ln() - b.ln()).abs() < 1e-12);
    }

    #[test]
    fn mckay_values() {
        // n = 5: (2^6/(5π))^2 · √5 · e^{-1/2}
        let want5 = (64.0 / (5.0 * PI)).powi(2) * 5f64.sqrt() * (-0.5f64).exp();
        let got5 = mckay_kn(5).unwrap().to_f64();
        assert!((got5 - want5).abs() < 1e-9 * want5);
        assert!((got5 - 22.51).abs() < 0.01);

        let want3 = (16.0 / (3.0 * PI)) * 3f64.sqrt() * (-0.5f64).exp();
        let got3 = mckay_kn(3).unwrap().to_f64();
        assert!((got3 - want3).abs() < 1e-12 * want3);
        assert!((got3 - 1.783).abs() < 0.001);

        assert!(mckay_kn(4).is_err());
        assert!(mckay_kn(1).is_err());
    }

    #[test]
    fn isaev_value_at_n2() {
        let want = (-1f64).exp() * 2f64.powf(5.5) / (PI.powf(1.5) * 2.0);
        let got = isaev_knn(2).unwrap().to_f64();
        assert!((got - want).abs() < 1e-12 * want);
        assert!(isaev_knn(3).is_err());
    }

    #[test]
    fn theta_over_isaev_is_constant_for_knn() {
        // t(K_{n,n}) = n^{2n-2} makes the ratio e·sqrt(2/π) for every even n
        let want = 1f64.exp() * (2.0 / PI).sqrt();
        for n in [2usize, 4, 6] {
            let g = graph::complete_bipartite(n, n).unwrap();
            let theta = theta_estimate(&g).unwrap();
            let knn = isaev_knn(n).unwrap();
            let ratio = theta.div(&knn).unwrap().to_f64();
            assert!((ratio - want).abs() < 1e-9, "n={n} ratio={ratio}");
        }
    }

    #[test]
    fn regular_bounds_examples() {
        // d = 1: cycles
        for n in [4usize, 9, 40] {
            let (lo, hi) = regular_bounds(n, 1).unwrap();
            assert!((lo.to_f64() - 2.0).abs() < 1e-12);
            assert!((hi.ln() - (n as f64 / 2.0) * std::f64::consts::LN_2).abs() < 1e-12);
        }
        // d = 2, n = 5
        let (lo, hi) = regular_bounds(5, 2).unwrap();
        assert!((lo.to_f64() - 20.25).abs() < 1e-9);
        assert!((hi.to_f64() - 6f64.powf(2.5)).abs() < 1e-9);
        assert!(lo.to_f64() <= 24.0 && 24.0 <= hi.to_f64());
    }

    #[test]
    fn lower_bound_never_exceeds_upper() {
        for d in 1..=20 {
            for n in (2..=100).step_by(7) {
                let (lo, hi) = regular_bounds(n, d).unwrap();
                assert!(
                    lo.ln() <= hi.ln() + 1e-9,
                    "d={d} n={n}: {} > {}",
                    lo.ln(),
                    hi.ln()
                );
            }
        }
    }

    #[test]
    fn mckay_vs_theta_on_complete_graphs() {
        for n in [3usize, 5, 7, 9, 11] {
            let ratio = mckay_kn(n)
                .unwrap()
                .div(&theta_estimate(&graph::complete(n).unwrap()).unwrap())
                .unwrap()
                .to_f64();
            assert!(
                (0.3..=3.0).contains(&ratio),
                "n={n}: mckay/theta = {ratio}"
            );
        }
    }
}
