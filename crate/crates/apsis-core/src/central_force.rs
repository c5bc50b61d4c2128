//! Force laws, effective potentials, admissible orbits, and the apses.
//!
//! Two families are supported: the homogeneous potential
//! `V_alpha(r) = 1/(alpha r^alpha)` with exponent `alpha` in `[-2, 1]`
//! excluding zero, and the logarithmic potential `V_0(r) = -ln r`. The
//! mechanical energy is `E = |v|^2/2 - V`, so motion is allowed where the
//! effective potential `V_eff(r) = l^2/(2 r^2) - V(r)` stays below `E`.

use crate::series_engine::exact::{next_down, next_up};

/// Errors from orbit construction and apsis solving.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CentralForceError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("energy {energy} not admissible for this potential: {reason}")]
    Regime { energy: f64, reason: String },
    #[error("no radial oscillation: {0}")]
    NoOscillation(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
}

type Result<T> = std::result::Result<T, CentralForceError>;

#[derive(Debug, Clone, Copy, PartialEq)]
enum PotentialKind {
    Homogeneous(f64),
    Logarithmic,
}

/// Which central force law an orbit lives in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialSpec {
    kind: PotentialKind,
}

impl PotentialSpec {
    /// Homogeneous potential of exponent `alpha` in `[-2, 1]`, `alpha != 0`.
    pub fn homogeneous(alpha: f64) -> Result<Self> {
        if !(-2.0..=1.0).contains(&alpha) || alpha == 0.0 || alpha.is_nan() {
            return Err(CentralForceError::Domain(format!(
                "homogeneous exponent must lie in [-2, 1] \\ {{0}}, got {alpha}"
            )));
        }
        Ok(Self {
            kind: PotentialKind::Homogeneous(alpha),
        })
    }

    pub fn logarithmic() -> Self {
        Self {
            kind: PotentialKind::Logarithmic,
        }
    }

    pub fn is_logarithmic(&self) -> bool {
        matches!(self.kind, PotentialKind::Logarithmic)
    }

    /// The exponent for the homogeneous family, `None` for logarithmic.
    pub fn alpha(&self) -> Option<f64> {
        match self.kind {
            PotentialKind::Homogeneous(a) => Some(a),
            PotentialKind::Logarithmic => None,
        }
    }

    /// Exponent as used by the kernel series: the logarithmic case behaves
    /// as `alpha = 0`.
    pub(crate) fn kernel_alpha(&self) -> f64 {
        self.alpha().unwrap_or(0.0)
    }

    /// `V(r)`.
    pub fn potential(&self, r: f64) -> f64 {
        match self.kind {
            PotentialKind::Homogeneous(a) => 1.0 / (a * r.powf(a)),
            PotentialKind::Logarithmic => -r.ln(),
        }
    }

    /// `V'(r)`; the attracting force per unit mass is `-V'(r) = ...`, always
    /// directed at the origin for the laws in scope.
    pub fn potential_deriv(&self, r: f64) -> f64 {
        match self.kind {
            PotentialKind::Homogeneous(a) => -r.powf(-a - 1.0),
            PotentialKind::Logarithmic => -1.0 / r,
        }
    }
}

/// Effective potential `l^2/(2 r^2) - V(r)`.
pub fn effective_potential(spec: &PotentialSpec, ell: f64, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(CentralForceError::Domain(format!(
            "effective potential needs r > 0, got {r}"
        )));
    }
    Ok(0.5 * ell * ell / (r * r) - spec.potential(r))
}

/// Largest angular momentum admitting an orbit at the given energy: the
/// circular-orbit value `e^{E - 1/2}` for the logarithmic potential and
/// `((2 alpha/(alpha - 2)) E)^{-(2 - alpha)/(2 alpha)}` for the homogeneous
/// one.
pub fn ell_max(spec: &PotentialSpec, energy: f64) -> Result<f64> {
    check_energy_regime(spec, energy)?;
    match spec.kind {
        PotentialKind::Logarithmic => Ok((energy - 0.5).exp()),
        PotentialKind::Homogeneous(a) => {
            let base = 2.0 * a / (a - 2.0) * energy;
            Ok(base.powf(-(2.0 - a) / (2.0 * a)))
        }
    }
}

fn check_energy_regime(spec: &PotentialSpec, energy: f64) -> Result<()> {
    match spec.kind {
        PotentialKind::Logarithmic => Ok(()),
        PotentialKind::Homogeneous(a) if a > 0.0 => {
            if energy < 0.0 {
                Ok(())
            } else {
                Err(CentralForceError::Regime {
                    energy,
                    reason: format!("bounded orbits need E < 0 for alpha = {a} > 0"),
                })
            }
        }
        PotentialKind::Homogeneous(a) => {
            if energy > 0.0 {
                Ok(())
            } else {
                Err(CentralForceError::Regime {
                    energy,
                    reason: format!("bounded orbits need E > 0 for alpha = {a} < 0"),
                })
            }
        }
    }
}

/// Radius of the circular orbit at angular momentum `ell`: the minimum of
/// the effective potential, `ell^{2/(2 - alpha)}` (homogeneous) or `ell`
/// (logarithmic).
pub fn circular_radius(spec: &PotentialSpec, ell: f64) -> Result<f64> {
    if !(ell > 0.0) {
        return Err(CentralForceError::Domain(format!(
            "circular radius needs ell > 0, got {ell}"
        )));
    }
    match spec.kind {
        PotentialKind::Logarithmic => Ok(ell),
        PotentialKind::Homogeneous(a) => Ok(ell.powf(2.0 / (2.0 - a))),
    }
}

/// Energy and scalar angular momentum of one admissible orbit
/// (counterclockwise convention: `ell > 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitConfig {
    energy: f64,
    ell: f64,
}

impl OrbitConfig {
    pub fn new(spec: &PotentialSpec, energy: f64, ell: f64) -> Result<Self> {
        if !(ell > 0.0) || ell.is_nan() || energy.is_nan() {
            return Err(CentralForceError::Domain(format!(
                "need ell > 0 and finite energy, got ell = {ell}, E = {energy}"
            )));
        }
        let lmax = ell_max(spec, energy)?;
        if ell >= lmax {
            return Err(CentralForceError::NoOscillation(format!(
                "ell = {ell} >= ell_max = {lmax}; no noncircular orbit at E = {energy}"
            )));
        }
        Ok(Self { energy, ell })
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn ell(&self) -> f64 {
        self.ell
    }
}

/// Pericenter/apocenter radii with the derived inverse radii
/// `a = 1/r_plus`, `b = 1/r_minus`, `L = b - a`, and shape parameter
/// `q = L/b = 1 - r_minus/r_plus` in `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApsisPair {
    pub r_minus: f64,
    pub r_plus: f64,
}

impl ApsisPair {
    pub fn new(r_minus: f64, r_plus: f64) -> Result<Self> {
        if !(0.0 < r_minus && r_minus < r_plus) {
            return Err(CentralForceError::Domain(format!(
                "apses must satisfy 0 < r_minus < r_plus, got ({r_minus}, {r_plus})"
            )));
        }
        Ok(Self { r_minus, r_plus })
    }

    /// Inverse apocenter radius.
    pub fn a(&self) -> f64 {
        1.0 / self.r_plus
    }

    /// Inverse pericenter radius.
    pub fn b(&self) -> f64 {
        1.0 / self.r_minus
    }

    /// `L = b - a`.
    pub fn big_l(&self) -> f64 {
        self.b() - self.a()
    }

    /// Shape parameter `q = 1 - a/b`.
    pub fn q(&self) -> f64 {
        1.0 - self.r_minus / self.r_plus
    }
}

/// Solves the apses equation `l^2/(2 r^2) - V(r) - E = 0` on both sides of
/// the circular radius. Brackets by shrinking/growing powers of ten around
/// `r_c` (the equation is monotone on each side), then runs a hybrid
/// Newton/bisection iteration until the residual is below `tol`.
pub fn apses(spec: &PotentialSpec, orbit: &OrbitConfig, tol: f64) -> Result<ApsisPair> {
    if !(tol > 0.0) {
        return Err(CentralForceError::Domain(format!(
            "apses tolerance must be positive, got {tol}"
        )));
    }
    let ell = orbit.ell();
    let energy = orbit.energy();
    let rc = circular_radius(spec, ell)?;
    let h = |r: f64| 0.5 * ell * ell / (r * r) - spec.potential(r) - energy;
    let dh = |r: f64| -ell * ell / (r * r * r) - spec.potential_deriv(r);

    if h(rc) >= 0.0 {
        return Err(CentralForceError::NoOscillation(format!(
            "effective potential minimum {:-e} does not lie below E = {energy}",
            -h(rc) + energy
        )));
    }

    // Inner bracket: h > 0 as r -> 0 (the centrifugal term wins).
    let mut lo = rc;
    let mut k = 0;
    while h(lo) < 0.0 {
        lo *= 0.1;
        k += 1;
        if k > 60 {
            return Err(CentralForceError::Numeric(format!(
                "no inner bracket below r_c = {rc} after {k} decades (E = {energy}, ell = {ell})"
            )));
        }
    }
    let r_minus = hybrid_root(&h, &dh, lo, rc, tol)?;

    // Outer bracket: -V - E eventually dominates for every law in scope.
    let mut hi = rc;
    k = 0;
    while h(hi) < 0.0 {
        hi *= 10.0;
        k += 1;
        if k > 60 {
            return Err(CentralForceError::Numeric(format!(
                "no outer bracket above r_c = {rc} after {k} decades (E = {energy}, ell = {ell})"
            )));
        }
    }
    let r_plus = hybrid_root(&h, &dh, rc, hi, tol)?;

    if !(r_minus < rc && rc < r_plus) {
        return Err(CentralForceError::Numeric(format!(
            "apses ({r_minus}, {r_plus}) do not straddle r_c = {rc}"
        )));
    }
    ApsisPair::new(r_minus, r_plus)
}

/// Newton steps guarded by a maintained bracket; bisection whenever Newton
/// leaves the bracket or stalls.
fn hybrid_root(
    f: &dyn Fn(f64) -> f64,
    df: &dyn Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> Result<f64> {
    let (flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(CentralForceError::Numeric(format!(
            "bracket [{lo}, {hi}] has no sign change (f = {flo:e}, {fhi:e})"
        )));
    }
    let sign_lo = flo.signum();
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == sign_lo {
            lo = x;
        } else {
            hi = x;
        }
        let d = df(x);
        let newton = x - fx / d;
        x = if d != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (hi - lo) <= 4.0 * f64::EPSILON * x.abs() {
            break;
        }
    }
    let fx = f(x);
    if fx.abs() < tol {
        Ok(x)
    } else {
        Err(CentralForceError::Numeric(format!(
            "root iteration stalled at x = {x} with residual {fx:e} (tol {tol:e})"
        )))
    }
}

/// Real branches of the Lambert W function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WBranch {
    /// `W_0`, values `>= -1`.
    Principal,
    /// `W_{-1}`, values `<= -1`, defined on `[-1/e, 0)`.
    Lower,
}

/// Lambert W by Halley iteration from branch-specific initial guesses,
/// iterated to `1e-15`; satisfies `W e^W = x` to better than `1e-13`
/// relative.
pub fn lambert_w(branch: WBranch, x: f64) -> Result<f64> {
    const INV_E: f64 = 1.0 / std::f64::consts::E;
    if x.is_nan() {
        return Err(CentralForceError::Domain("lambert_w of NaN".into()));
    }
    // 1 + e x, clamped against roundoff right at the branch point
    let mut onepex = std::f64::consts::E * x + 1.0;
    if onepex < 0.0 {
        if onepex > -1e-12 {
            onepex = 0.0;
        } else {
            return Err(CentralForceError::Domain(format!(
                "lambert_w argument {x} below the branch point -1/e"
            )));
        }
    }
    match branch {
        WBranch::Principal => {
            if x == 0.0 {
                return Ok(0.0);
            }
        }
        WBranch::Lower => {
            if x >= 0.0 {
                return Err(CentralForceError::Domain(format!(
                    "lower branch needs x in [-1/e, 0), got {x}"
                )));
            }
        }
    }

    let p = (2.0 * onepex).sqrt();
    let series = |p: f64| -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p.powi(3) - 43.0 / 540.0 * p.powi(4);
    let w0 = match branch {
        WBranch::Principal => {
            if x < -INV_E + 0.04 {
                series(p)
            } else if x < 3.0 {
                // W ~ x near zero; crude but inside Halley's basin
                let l = (1.0 + x).ln();
                l * (1.0 - l / (2.0 + l) * ((1.0 + l).ln()) / (1.0 + (1.0 + l).ln()))
            } else {
                let l = x.ln();
                l - l.ln()
            }
        }
        WBranch::Lower => {
            if x < -INV_E + 0.04 {
                series(-p)
            } else {
                let l = (-x).ln();
                l - (-l).ln()
            }
        }
    };
    // At the branch point the series is the answer.
    if p < 1e-6 {
        return Ok(series(match branch {
            WBranch::Principal => p,
            WBranch::Lower => -p,
        }));
    }

    let mut w = w0;
    for _ in 0..60 {
        let ew = w.exp();
        let f = w * ew - x;
        let denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0);
        if denom == 0.0 {
            break;
        }
        let step = f / denom;
        w -= step;
        if step.abs() <= 1e-15 * (1.0 + w.abs()) {
            break;
        }
    }
    let resid = w * w.exp() - x;
    if resid.abs() <= 1e-13 * x.abs().max(1e-30) {
        Ok(w)
    } else {
        Err(CentralForceError::Numeric(format!(
            "lambert_w failed to converge at x = {x}: w = {w}, residual {resid:e}"
        )))
    }
}

/// Apses of the logarithmic potential through the two Lambert branches.
/// The inverse radii solve `ln(z^2) - l^2 z^2 = -2E`, whence
/// `z = sqrt(-W_j(-l^2 e^{-2E})) / l` with the principal branch giving
/// `1/r_plus` and the lower branch `1/r_minus`.
pub fn lambert_apses(energy: f64, ell: f64) -> Result<ApsisPair> {
    if !(ell > 0.0) {
        return Err(CentralForceError::Domain(format!(
            "lambert_apses needs ell > 0, got {ell}"
        )));
    }
    let arg = -ell * ell * (-2.0 * energy).exp();
    if arg < next_down(-1.0 / std::f64::consts::E) {
        return Err(CentralForceError::NoOscillation(format!(
            "W argument {arg} below -1/e: ell = {ell} exceeds ell_max at E = {energy}"
        )));
    }
    let z_apo = (-lambert_w(WBranch::Principal, arg)?).sqrt() / ell;
    let z_peri = (-lambert_w(WBranch::Lower, arg)?).sqrt() / ell;
    ApsisPair::new(1.0 / z_peri, 1.0 / z_apo)
}

/// Griffin's integrand weight `w(z) = 2/alpha z^alpha` (homogeneous) or
/// `2 ln z` (logarithmic); increasing in `z` for every law in scope.
pub fn griffin_w(spec: &PotentialSpec, z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Err(CentralForceError::Domain(format!(
            "griffin_w needs z > 0, got {z}"
        )));
    }
    Ok(match spec.kind {
        PotentialKind::Homogeneous(a) => 2.0 / a * z.powf(a),
        PotentialKind::Logarithmic => 2.0 * z.ln(),
    })
}

/// Duality between force-law exponents: the apsidal angle at
/// `beta = -2 alpha/(2 - alpha)` is `(2 - alpha)/2` times the angle at
/// `alpha`. Returns `(beta, factor)`.
pub fn scaling_pair(alpha: f64) -> Result<(f64, f64)> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(CentralForceError::Domain(format!(
            "scaling_pair needs alpha in (0, 1], got {alpha}"
        )));
    }
    Ok((-2.0 * alpha / (2.0 - alpha), (2.0 - alpha) / 2.0))
}

/// Upward-rounded helper shared with the verified module.
pub(crate) fn _next_up(x: f64) -> f64 {
    next_up(x)
}
