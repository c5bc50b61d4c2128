//! Series machinery for the fixed-endpoint kernel.
//!
//! The apsidal-angle integrand depends on the orbit through the kernel
//! `E_alpha(s, q)`; this module holds the weight family `omega_n^alpha`, the
//! auxiliary functions `A_n(s)` and `K_n^alpha(s)`, the kernel in closed and
//! series form, its `q`-derivative with a rigorous truncation bound, the
//! envelope `M_alpha(q)`, and the exact-rational coefficient tables used by
//! the verification grids.

mod coeffs;
pub mod exact;
mod kernels;

pub use coeffs::{
    coef_poly, coef_poly_audited, k_weighted_sum, q0_coeff, q0_coeff_direct, r_poly, r_poly_exact,
    s_sum, COEF_MAX_ORDER,
};
pub use exact::{weight_exact, ExactRational};
pub use kernels::{c_alpha, de_dq, e_boundary, e_closed, e_series, m_bound, Boundary};

pub(crate) use coeffs::{e0_tilde_poly, e1_tilde_poly, r_poly_table, r_tilde_poly};
pub(crate) use kernels::{kernel_dq_st, kernel_st};

/// Errors from series-engine evaluations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SeriesError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error(
        "truncation failure: tail bound {tail:.3e} exceeds budget {budget:.3e} at order {order}"
    )]
    Truncation { tail: f64, budget: f64, order: usize },
}

/// Truncation policy for series evaluations: hard cap on the summation
/// order and the largest acceptable proven tail bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    /// Highest series index the evaluation may use.
    pub max_order: usize,
    /// Budget for the proven bound on the discarded remainder.
    pub tail_bound: f64,
}

impl Truncation {
    pub fn new(max_order: usize, tail_bound: f64) -> Result<Self, SeriesError> {
        if max_order < 2 {
            return Err(SeriesError::Domain(format!(
                "max_order must be >= 2, got {max_order}"
            )));
        }
        if !(tail_bound >= 0.0) {
            return Err(SeriesError::Domain(format!(
                "tail_bound must be >= 0, got {tail_bound}"
            )));
        }
        Ok(Self {
            max_order,
            tail_bound,
        })
    }
}

impl Default for Truncation {
    fn default() -> Self {
        Self {
            max_order: 2_000_000,
            tail_bound: 1e-12,
        }
    }
}

fn check_alpha_series(alpha: f64) -> Result<(), SeriesError> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(SeriesError::Domain(format!(
            "alpha must lie in [0, 1), got {alpha}"
        )));
    }
    Ok(())
}

fn check_unit(name: &str, x: f64, lo_open: bool, hi_open: bool) -> Result<(), SeriesError> {
    let lo_ok = if lo_open { x > 0.0 } else { x >= 0.0 };
    let hi_ok = if hi_open { x < 1.0 } else { x <= 1.0 };
    if !(lo_ok && hi_ok) || x.is_nan() {
        return Err(SeriesError::Domain(format!("{name} = {x} out of range")));
    }
    Ok(())
}

/// Weight `omega_n^alpha`: `-binom(alpha, n)(-1)^n` for `alpha` in `(0, 1)`,
/// `1/n` for `alpha = 0`. Positive for every `n >= 1`, and satisfies
/// `omega_{n+1}/omega_n = (n - alpha)/(n + 1)`.
pub fn weight(alpha: f64, n: usize) -> Result<f64, SeriesError> {
    check_alpha_series(alpha)?;
    if n < 1 {
        return Err(SeriesError::Domain("weight index n must be >= 1".into()));
    }
    if alpha == 0.0 {
        return Ok(1.0 / n as f64);
    }
    let mut w = alpha;
    for k in 1..n {
        w *= (k as f64 - alpha) / (k as f64 + 1.0);
    }
    Ok(w)
}

/// Precomputed weight table `omega_1 .. omega_n_max` for one `alpha`;
/// immutable after construction.
#[derive(Debug, Clone)]
pub struct Weights {
    alpha: f64,
    table: Vec<f64>,
}

impl Weights {
    pub fn new(alpha: f64, n_max: usize) -> Result<Self, SeriesError> {
        check_alpha_series(alpha)?;
        if n_max < 1 {
            return Err(SeriesError::Domain("n_max must be >= 1".into()));
        }
        let mut table = Vec::with_capacity(n_max);
        if alpha == 0.0 {
            table.extend((1..=n_max).map(|n| 1.0 / n as f64));
        } else {
            let mut w = alpha;
            table.push(w);
            for k in 1..n_max {
                w *= (k as f64 - alpha) / (k as f64 + 1.0);
                table.push(w);
            }
        }
        Ok(Self { alpha, table })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `omega_n`, for `1 <= n <= n_max`.
    pub fn get(&self, n: usize) -> f64 {
        self.table[n - 1]
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

/// `A_n(s) = (1 - (1-s)^{n-1})/s`, evaluated in the cancellation-free sum
/// form `sum_{j=0}^{n-2} (1-s)^j`, so `s = 0` (value `n - 1`) and `s = 1`
/// (value `1`) are exact.
pub fn a_fn(n: usize, s: f64) -> Result<f64, SeriesError> {
    if n < 2 {
        return Err(SeriesError::Domain("a_fn requires n >= 2".into()));
    }
    check_unit("s", s, false, false)?;
    Ok(a_fn_unchecked(n, 1.0 - s))
}

/// Sum form in `t = 1 - s`.
pub(crate) fn a_fn_unchecked(n: usize, t: f64) -> f64 {
    let mut acc = 0.0;
    let mut pw = 1.0;
    for _ in 0..n - 1 {
        acc += pw;
        pw *= t;
    }
    acc
}

/// First derivative `A_n'(s) = -sum_{j=1}^{n-2} j (1-s)^{j-1}`.
pub fn a_fn_d1(n: usize, s: f64) -> Result<f64, SeriesError> {
    if n < 2 {
        return Err(SeriesError::Domain("a_fn_d1 requires n >= 2".into()));
    }
    check_unit("s", s, false, false)?;
    let t = 1.0 - s;
    let mut acc = 0.0;
    let mut pw = 1.0;
    for j in 1..=n.saturating_sub(2) {
        acc += j as f64 * pw;
        pw *= t;
    }
    Ok(-acc)
}

/// Second derivative `A_n''(s) = sum_{j=2}^{n-2} j (j-1) (1-s)^{j-2}`.
pub fn a_fn_d2(n: usize, s: f64) -> Result<f64, SeriesError> {
    if n < 2 {
        return Err(SeriesError::Domain("a_fn_d2 requires n >= 2".into()));
    }
    check_unit("s", s, false, false)?;
    let t = 1.0 - s;
    let mut acc = 0.0;
    let mut pw = 1.0;
    for j in 2..=n.saturating_sub(2) {
        acc += (j * (j - 1)) as f64 * pw;
        pw *= t;
    }
    Ok(acc)
}

/// `K_n^alpha(s) = 2 (n - alpha)/(n + 1) A_{n+1}(s) - A_n(s)`.
pub fn k_fn(alpha: f64, n: usize, s: f64) -> Result<f64, SeriesError> {
    check_alpha_series(alpha)?;
    if n < 2 {
        return Err(SeriesError::Domain("k_fn requires n >= 2".into()));
    }
    check_unit("s", s, false, false)?;
    let t = 1.0 - s;
    Ok(2.0 * (n as f64 - alpha) / (n as f64 + 1.0) * a_fn_unchecked(n + 1, t)
        - a_fn_unchecked(n, t))
}

/// `d/ds K_n^alpha(s)`.
pub fn k_fn_d1(alpha: f64, n: usize, s: f64) -> Result<f64, SeriesError> {
    check_alpha_series(alpha)?;
    if n < 2 {
        return Err(SeriesError::Domain("k_fn_d1 requires n >= 2".into()));
    }
    Ok(2.0 * (n as f64 - alpha) / (n as f64 + 1.0) * a_fn_d1(n + 1, s)? - a_fn_d1(n, s)?)
}

/// `d^2/ds^2 K_n^alpha(s)`.
pub fn k_fn_d2(alpha: f64, n: usize, s: f64) -> Result<f64, SeriesError> {
    check_alpha_series(alpha)?;
    if n < 2 {
        return Err(SeriesError::Domain("k_fn_d2 requires n >= 2".into()));
    }
    Ok(2.0 * (n as f64 - alpha) / (n as f64 + 1.0) * a_fn_d2(n + 1, s)? - a_fn_d2(n, s)?)
}

/// Gap `K_{n+1}^alpha(s) - K_n^alpha(s)`; positive for all `n >= 2`, and
/// decreasing in `s` for `n >= 4`.
pub fn k_gap(alpha: f64, n: usize, s: f64) -> Result<f64, SeriesError> {
    Ok(k_fn(alpha, n + 1, s)? - k_fn(alpha, n, s)?)
}

/// `g_n(s) = (n-1)/n K_n^0(s) - (n-3)/(2(n-1)) K_2^0(s)`; monotonically
/// decreasing on `[0, 1]` for every `n >= 2`.
pub fn g_fn(n: usize, s: f64) -> Result<f64, SeriesError> {
    if n < 2 {
        return Err(SeriesError::Domain("g_fn requires n >= 2".into()));
    }
    let nf = n as f64;
    Ok((nf - 1.0) / nf * k_fn(0.0, n, s)?
        - (nf - 3.0) / (2.0 * (nf - 1.0)) * k_fn(0.0, 2, s)?)
}

/// `H_alpha(n, m) = omega_{n+2} omega_m (n - m)`; the symmetrized sum
/// `H(n,m) + H(m,n)` is positive whenever `n > m`.
pub fn h_sym(alpha: f64, n: usize, m: usize) -> Result<f64, SeriesError> {
    if n < 1 || m < 1 {
        return Err(SeriesError::Domain("h_sym requires n, m >= 1".into()));
    }
    Ok(weight(alpha, n + 2)? * weight(alpha, m)? * (n as f64 - m as f64))
}

// Tail sums of the geometric-with-polynomial-factor series used by the
// truncation bounds. All assume 0 < q < 1 and N >= 1.

/// `sum_{n > N} q^{n-2}`.
pub(crate) fn tail_geom0(n: usize, q: f64) -> f64 {
    q.powi(n as i32 - 1) / (1.0 - q)
}

/// `sum_{n > N} n q^{n-2}`.
pub(crate) fn tail_geom1(n: usize, q: f64) -> f64 {
    let nf = n as f64;
    q.powi(n as i32 - 1) * ((nf + 1.0) - nf * q) / ((1.0 - q) * (1.0 - q))
}

/// `sum_{n > N} n (n-1) q^{n-2}`.
pub(crate) fn tail_geom2(n: usize, q: f64) -> f64 {
    let nf = n as f64;
    let om = 1.0 - q;
    q.powi(n as i32 - 1) * (nf + 1.0) * nf / om
        + 2.0 * q.powi(n as i32) * (nf + 1.0) / (om * om)
        + 2.0 * q.powi(n as i32 + 1) / (om * om * om)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_examples() {
        // alpha = 0, n = 7 -> 1/7
        assert_eq!(weight(0.0, 7).unwrap(), 1.0 / 7.0);
        // n = 1 -> alpha for alpha > 0; 1 for alpha = 0
        assert_eq!(weight(0.7, 1).unwrap(), 0.7);
        assert_eq!(weight(0.0, 1).unwrap(), 1.0);
        // alpha = 0.5, n = 2 -> -binom(1/2,2) = 1/8 ... times (-1)^2; value 0.125
        assert!((weight(0.5, 2).unwrap() - 0.125).abs() < 1e-16);
    }

    #[test]
    fn weight_recurrence_and_positivity() {
        for &alpha in &[0.0, 0.1, 0.5, 0.9] {
            let w = Weights::new(alpha, 60).unwrap();
            for n in 1..=60 {
                assert!(w.get(n) > 0.0, "omega must stay positive");
            }
            if alpha > 0.0 {
                for n in 1..60 {
                    let ratio = w.get(n + 1) / w.get(n);
                    assert!((ratio - (n as f64 - alpha) / (n as f64 + 1.0)).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn weight_domain_errors() {
        assert!(weight(0.5, 0).is_err());
        assert!(weight(1.0, 3).is_err());
        assert!(weight(-0.1, 3).is_err());
    }

    #[test]
    fn a_fn_examples() {
        // A_2 = 1 for any s; A_n(1) = 1 for any n
        for &s in &[0.0, 0.3, 0.77, 1.0] {
            assert_eq!(a_fn(2, s).unwrap(), 1.0);
        }
        for n in 2..12 {
            assert_eq!(a_fn(n, 1.0).unwrap(), 1.0);
        }
        // A_3(1/2) = (1 - 1/4)/(1/2) = 3/2
        assert!((a_fn(3, 0.5).unwrap() - 1.5).abs() < 1e-15);
        // A_n(0) = n - 1
        assert_eq!(a_fn(9, 0.0).unwrap(), 8.0);
    }

    #[test]
    fn a_fn_matches_rational_form() {
        for n in 2..20 {
            for k in 1..20 {
                let s = k as f64 / 20.0;
                let direct = (1.0 - (1.0 - s).powi(n as i32 - 1)) / s;
                assert!((a_fn(n, s).unwrap() - direct).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn a_fn_telescoping() {
        // A_{n+1}(s) - A_n(s) = (1-s)^{n-1}
        for n in 2..30 {
            for k in 0..=40 {
                let s = k as f64 / 40.0;
                let lhs = a_fn(n + 1, s).unwrap() - a_fn(n, s).unwrap();
                assert!((lhs - (1.0 - s).powi(n as i32 - 1)).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn a_fn_derivative_signs_and_ordering() {
        // n >= 3: A_n' < 0, A_n'' > 0 on (0,1); A_n' < A_m' for n > m.
        for n in 3..=30 {
            for k in 1..40 {
                let s = k as f64 / 40.0;
                assert!(a_fn_d1(n, s).unwrap() < 0.0);
                assert!(a_fn_d2(n, s).unwrap() > 0.0);
            }
        }
        for k in 1..40 {
            let s = k as f64 / 40.0;
            for m in 2..15 {
                for n in (m + 1)..=16 {
                    assert!(a_fn_d1(n, s).unwrap() < a_fn_d1(m, s).unwrap());
                }
            }
        }
    }

    #[test]
    fn a_fn_d1_matches_finite_differences() {
        let h = 1e-6;
        for n in 2..15 {
            for k in 1..10 {
                let s = k as f64 / 10.0 - 0.05;
                let fd = (a_fn(n, s + h).unwrap() - a_fn(n, s - h).unwrap()) / (2.0 * h);
                assert!((a_fn_d1(n, s).unwrap() - fd).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn k_fn_examples() {
        // K_n^0(1) = (n-1)/(n+1); n = 3 -> 1/2
        assert!((k_fn(0.0, 3, 1.0).unwrap() - 0.5).abs() < 1e-15);
        for n in 2..12 {
            let expect = (n as f64 - 1.0) / (n as f64 + 1.0);
            assert!((k_fn(0.0, n, 1.0).unwrap() - expect).abs() < 1e-14);
        }
        // K_5^0 - K_3^0 at s = 1 equals 1/6
        let gap = k_fn(0.0, 5, 1.0).unwrap() - k_fn(0.0, 3, 1.0).unwrap();
        assert!((gap - 1.0 / 6.0).abs() < 1e-14);
    }

    #[test]
    fn k_gap_positive() {
        for &alpha in &[0.0, 0.25, 0.5, 0.75, 0.95] {
            for n in 2..=30 {
                for k in 0..=50 {
                    let s = k as f64 / 50.0;
                    assert!(
                        k_gap(alpha, n, s).unwrap() > 0.0,
                        "K gap must be positive at alpha={alpha} n={n} s={s}"
                    );
                }
            }
        }
    }

    #[test]
    fn k_gap_decreasing_for_n_ge_4() {
        for &alpha in &[0.0, 0.4, 0.9] {
            for n in 4..=25 {
                let mut prev = f64::INFINITY;
                for k in 0..=100 {
                    let s = k as f64 / 100.0;
                    let v = k_gap(alpha, n, s).unwrap();
                    assert!(v <= prev + 1e-12, "gap not decreasing: alpha={alpha} n={n} s={s}");
                    prev = v;
                }
            }
        }
    }

    #[test]
    fn k5_minus_k3_local_minimum_bracket() {
        // The difference K_5^0 - K_3^0 has a local minimum inside
        // [0.7230, 0.7233] with value above 1/6.
        let f = |s: f64| k_fn(0.0, 5, s).unwrap() - k_fn(0.0, 3, s).unwrap();
        let lo = 0.7230;
        let hi = 0.7233;
        // derivative changes sign inside the bracket
        let h = 1e-7;
        let d = |s: f64| (f(s + h) - f(s - h)) / (2.0 * h);
        assert!(d(lo) < 0.0 && d(hi) > 0.0);
        let mut min_v = f64::INFINITY;
        let mut max_v = f64::NEG_INFINITY;
        for k in 0..=100 {
            let s = lo + (hi - lo) * k as f64 / 100.0;
            min_v = min_v.min(f(s));
            max_v = max_v.max(f(s));
        }
        assert!(min_v >= 0.1672 && max_v <= 0.1785);
        assert!(min_v > 1.0 / 6.0);
    }

    #[test]
    fn g_fn_decreasing() {
        for n in 2..=20 {
            let mut prev = f64::INFINITY;
            for k in 0..=200 {
                let s = k as f64 / 200.0;
                let v = g_fn(n, s).unwrap();
                assert!(v <= prev + 1e-12, "g_n must decrease: n={n} s={s}");
                prev = v;
            }
        }
    }

    #[test]
    fn h_sym_values() {
        // alpha = 0: H(n,m) + H(m,n) = 2 (n-m)^2 / (n m (n+2)(m+2)); n=3, m=1 -> 8/45
        let v = h_sym(0.0, 3, 1).unwrap() + h_sym(0.0, 1, 3).unwrap();
        assert!((v - 8.0 / 45.0).abs() < 1e-15);
        // n = m -> 0
        assert_eq!(h_sym(0.3, 4, 4).unwrap(), 0.0);
        // alpha = 0.5, n=4, m=2: positive sum, cross-checked in exact arithmetic
        let v = h_sym(0.5, 4, 2).unwrap() + h_sym(0.5, 2, 4).unwrap();
        let half = ExactRational::from_integers(1, 2);
        let exact = weight_exact(&half, 6)
            .mul(&weight_exact(&half, 2))
            .mul(&ExactRational::from_int(2))
            .add(
                &weight_exact(&half, 4)
                    .mul(&weight_exact(&half, 4))
                    .mul(&ExactRational::from_int(-2)),
            );
        assert!(v > 0.0);
        assert!((v - exact.to_f64()).abs() < 1e-15);
        // symmetrized positivity on a sweep
        for &alpha in &[0.0, 0.2, 0.6, 0.9] {
            for m in 1..10 {
                for n in (m + 1)..12 {
                    assert!(h_sym(alpha, n, m).unwrap() + h_sym(alpha, m, n).unwrap() > 0.0);
                }
            }
        }
    }

    #[test]
    fn geometric_tail_formulas() {
        let q = 0.37;
        for n in [3usize, 7, 20] {
            let (mut s0, mut s1, mut s2) = (0.0, 0.0, 0.0);
            for k in (n + 1)..(n + 2000) {
                let term = q.powi(k as i32 - 2);
                s0 += term;
                s1 += k as f64 * term;
                s2 += (k * (k - 1)) as f64 * term;
            }
            assert!((tail_geom0(n, q) - s0).abs() < 1e-12 * s0);
            assert!((tail_geom1(n, q) - s1).abs() < 1e-12 * s1);
            assert!((tail_geom2(n, q) - s2).abs() < 1e-12 * s2);
        }
    }
}
