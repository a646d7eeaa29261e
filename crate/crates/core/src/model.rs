//! The `CP^n` chart, the rotated eigenframe and the isospectral family
//! `H(λ) = U(λ) H₀ U(λ)†` with `H₀ = ε₀ |n+1⟩⟨n+1|`.
//!
//! A point is `z_α = θ_α e^{iφ_α}`, `α = 1..n`, with the implicit
//! `θ_{n+1} = π/2`, `φ_{n+1} = 0`. The frame is the product of plane
//! rotations `exp(G_α)`, `G_α = z_α|α⟩⟨n+1| − z̄_α|n+1⟩⟨α|`, composed as
//! `U_n ⋯ U_1` so that its columns are the closed-form eigenvectors.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, TAU};
use core::fmt;

#[allow(unused_imports)] // f64 math is inherent in core on newer toolchains
use num_traits::{Euclid, Float};

use crate::error::{Error, Result};
use crate::linalg::{cis, CMatrix, UnitaryMatrix, C64};

/// Slack allowed when validating `θ ∈ [0, π/2]`; values inside it are clamped.
const CHART_SLACK: f64 = 1e-12;

/// One chart coordinate; the level index is 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coord {
    Theta(usize),
    Phi(usize),
}

impl Coord {
    pub fn level(self) -> usize {
        match self {
            Coord::Theta(k) | Coord::Phi(k) => k,
        }
    }

    pub fn is_theta(self) -> bool {
        matches!(self, Coord::Theta(_))
    }
}

/// Formats as `theta:β` / `phi:β` with a 1-based level.
impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coord::Theta(k) => write!(f, "theta:{}", k + 1),
            Coord::Phi(k) => write!(f, "phi:{}", k + 1),
        }
    }
}

/// Parses the [`Display`](fmt::Display) form, `theta:β` or `phi:β` with `β ≥ 1`.
impl core::str::FromStr for Coord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidPoint(format!("bad coordinate `{s}`, expected theta:<k> or phi:<k>"));
        let (kind, idx) = s.trim().split_once(':').ok_or_else(bad)?;
        let k: usize = idx.trim().parse().map_err(|_| bad())?;
        if k == 0 {
            return Err(bad());
        }
        match kind.trim().to_ascii_lowercase().as_str() {
            "theta" => Ok(Coord::Theta(k - 1)),
            "phi" => Ok(Coord::Phi(k - 1)),
            _ => Err(bad()),
        }
    }
}

/// Reduces an angle to `[0, 2π)`.
pub fn wrap_phi(phi: f64) -> f64 {
    let r = Euclid::rem_euclid(&phi, &TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Signed difference `b − a` of two azimuths, reduced to `(−π, π]`.
pub fn phi_delta(a: f64, b: f64) -> f64 {
    let d = Euclid::rem_euclid(&(b - a), &TAU);
    if d > core::f64::consts::PI {
        d - TAU
    } else {
        d
    }
}

/// A point `λ = (θ₁..θₙ, φ₁..φₙ)` of the chart.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlPoint {
    theta: Vec<f64>,
    phi: Vec<f64>,
}

impl ControlPoint {
    pub fn new(theta: Vec<f64>, phi: Vec<f64>) -> Result<Self> {
        if theta.is_empty() {
            return Err(Error::InvalidPoint("n must be at least 1".into()));
        }
        if theta.len() != phi.len() {
            return Err(Error::DimensionMismatch { expected: theta.len(), found: phi.len() });
        }
        let mut theta = theta;
        for (k, t) in theta.iter_mut().enumerate() {
            if !t.is_finite() {
                return Err(Error::NonFinite("theta"));
            }
            if *t < -CHART_SLACK || *t > FRAC_PI_2 + CHART_SLACK {
                return Err(Error::InvalidPoint(format!("theta[{}] = {} outside [0, pi/2]", k + 1, t)));
            }
            *t = t.clamp(0.0, FRAC_PI_2);
        }
        if phi.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite("phi"));
        }
        let phi = phi.into_iter().map(wrap_phi).collect();
        Ok(ControlPoint { theta, phi })
    }

    /// The chart origin, where the frame is the identity.
    pub fn origin(n: usize) -> Self {
        assert!(n >= 1);
        ControlPoint { theta: vec![0.0; n], phi: vec![0.0; n] }
    }

    pub fn n(&self) -> usize {
        self.theta.len()
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    pub fn get(&self, coord: Coord) -> f64 {
        match coord {
            Coord::Theta(k) => self.theta[k],
            Coord::Phi(k) => self.phi[k],
        }
    }

    /// Copy with one coordinate replaced (validated and reduced).
    pub fn with(&self, coord: Coord, value: f64) -> Result<Self> {
        if coord.level() >= self.n() {
            return Err(Error::LevelOutOfRange { level: coord.level(), limit: self.n() });
        }
        let mut theta = self.theta.clone();
        let mut phi = self.phi.clone();
        match coord {
            Coord::Theta(k) => theta[k] = value,
            Coord::Phi(k) => phi[k] = value,
        }
        ControlPoint::new(theta, phi)
    }

    /// Largest coordinate difference, azimuths compared modulo 2π.
    pub fn distance(&self, other: &ControlPoint) -> f64 {
        assert_eq!(self.n(), other.n());
        let dt = self.theta.iter().zip(&other.theta).map(|(a, b)| (a - b).abs());
        let dp = self.phi.iter().zip(&other.phi).map(|(a, b)| phi_delta(*a, *b).abs());
        dt.chain(dp).fold(0.0, f64::max)
    }

    /// Per-coordinate displacement to `other` (azimuths along the short arc),
    /// laid out as `[dθ₁..dθₙ, dφ₁..dφₙ]`.
    pub fn displacement_to(&self, other: &ControlPoint) -> Vec<f64> {
        let n = self.n();
        let mut d = Vec::with_capacity(2 * n);
        d.extend((0..n).map(|k| other.theta[k] - self.theta[k]));
        d.extend((0..n).map(|k| phi_delta(self.phi[k], other.phi[k])));
        d
    }

    /// `self + t·delta` with `delta` laid out as in [`displacement_to`](Self::displacement_to).
    pub(crate) fn offset(&self, delta: &[f64], t: f64) -> ControlPoint {
        let n = self.n();
        let theta = (0..n).map(|k| (self.theta[k] + t * delta[k]).clamp(0.0, FRAC_PI_2)).collect();
        let phi = (0..n).map(|k| wrap_phi(self.phi[k] + t * delta[n + k])).collect();
        ControlPoint { theta, phi }
    }

    #[inline]
    fn theta_ext(&self, k: usize) -> f64 {
        if k == self.n() {
            FRAC_PI_2
        } else {
            self.theta[k]
        }
    }

    #[inline]
    fn phi_ext(&self, k: usize) -> f64 {
        if k == self.n() {
            0.0
        } else {
            self.phi[k]
        }
    }
}

/// `U(λ) = U_n(z_n) ⋯ U_1(z_1)`, each factor the closed-form rotation
/// `[[cos θ, e^{iφ} sin θ], [−e^{−iφ} sin θ, cos θ]]` in the `(α, n+1)` plane.
pub fn frame_unitary(p: &ControlPoint) -> UnitaryMatrix {
    let n = p.n();
    let last = n;
    let mut u = CMatrix::identity(n + 1);
    for alpha in 0..n {
        let (s, c) = p.theta[alpha].sin_cos();
        let e = cis(p.phi[alpha]);
        // left-multiply by U_α: only rows α and n+1 change
        for col in 0..=n {
            let ra = u[(alpha, col)];
            let rl = u[(last, col)];
            u[(alpha, col)] = ra * c + e * s * rl;
            u[(last, col)] = -(e.conj() * s) * ra + rl * c;
        }
    }
    UnitaryMatrix::from_exact(u)
}

/// Closed-form rotated eigenvector `|level(θ, φ)⟩`, `level ∈ 0..=n`
/// (`level == n` is the excited state).
pub fn eigenstate(p: &ControlPoint, level: usize) -> Result<Vec<C64>> {
    let n = p.n();
    if level > n {
        return Err(Error::LevelOutOfRange { level, limit: n + 1 });
    }
    let mut v = vec![C64::new(0.0, 0.0); n + 1];
    if level == n {
        let mut cos_prod = 1.0;
        for (j, slot) in v.iter_mut().enumerate() {
            *slot = cis(p.phi_ext(j)) * (p.theta_ext(j).sin() * cos_prod);
            if j < n {
                cos_prod *= p.theta[j].cos();
            }
        }
        return Ok(v);
    }
    let (s_a, c_a) = p.theta[level].sin_cos();
    v[level] = C64::new(c_a, 0.0);
    let lead = -cis(-p.phi[level]) * s_a;
    let mut cos_prod = 1.0;
    for (j, slot) in v.iter_mut().enumerate().skip(level + 1) {
        *slot = lead * cis(p.phi_ext(j)) * (p.theta_ext(j).sin() * cos_prod);
        if j < n {
            cos_prod *= p.theta[j].cos();
        }
    }
    Ok(v)
}

/// The first `n` rotated eigenvectors as columns of an `(n+1)×n` array,
/// returned column-major.
pub(crate) fn code_frame(p: &ControlPoint) -> Vec<Vec<C64>> {
    (0..p.n()).map(|a| eigenstate(p, a).expect("level in range")).collect()
}

/// The isospectral family `H(λ) = ε₀ |n+1(λ)⟩⟨n+1(λ)|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HamiltonianFamily {
    n: usize,
    epsilon0: f64,
}

impl HamiltonianFamily {
    pub fn new(n: usize, epsilon0: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidPoint("n must be at least 1".into()));
        }
        if !epsilon0.is_finite() || epsilon0 == 0.0 {
            return Err(Error::InvalidSchedule(format!("epsilon0 must be finite and nonzero, got {epsilon0}")));
        }
        Ok(HamiltonianFamily { n, epsilon0 })
    }

    /// `ε₀ = 1`.
    pub fn unit(n: usize) -> Self {
        HamiltonianFamily { n, epsilon0: 1.0 }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn epsilon0(&self) -> f64 {
        self.epsilon0
    }

    /// `H₀ = ε₀ |n+1⟩⟨n+1|`.
    pub fn h0(&self) -> CMatrix {
        let mut h = CMatrix::zeros(self.n + 1);
        h[(self.n, self.n)] = C64::new(self.epsilon0, 0.0);
        h
    }

    pub fn hamiltonian_at(&self, p: &ControlPoint) -> Result<CMatrix> {
        if p.n() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: p.n() });
        }
        let v = eigenstate(p, self.n)?;
        Ok(CMatrix::outer(&v, &v).scale_real(self.epsilon0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, hermitian_spectrum};
    use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_point(rng: &mut ChaCha8Rng, n: usize) -> ControlPoint {
        ControlPoint::new(
            (0..n).map(|_| rng.random_range(0.0..FRAC_PI_2)).collect(),
            (0..n).map(|_| rng.random_range(0.0..TAU)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn origin_frame_is_identity() {
        for n in 1..=5 {
            let p = ControlPoint::origin(n);
            assert!(frame_unitary(&p).matrix().max_abs_diff(&CMatrix::identity(n + 1)) == 0.0);
            for a in 0..=n {
                let v = eigenstate(&p, a).unwrap();
                for (j, z) in v.iter().enumerate() {
                    assert_eq!(*z, c(if j == a { 1.0 } else { 0.0 }, 0.0));
                }
            }
        }
    }

    #[test]
    fn quarter_turn_frame_for_n1() {
        let p = ControlPoint::new(vec![FRAC_PI_2], vec![0.0]).unwrap();
        let expected = CMatrix::from_real(2, &[0.0, 1.0, -1.0, 0.0]);
        assert!(frame_unitary(&p).matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn closed_form_eigenstate_example() {
        let p = ControlPoint::new(vec![FRAC_PI_4, 0.0], vec![0.0, 0.0]).unwrap();
        let v = eigenstate(&p, 0).unwrap();
        let expected = [c(FRAC_1_SQRT_2, 0.0), c(0.0, 0.0), c(-FRAC_1_SQRT_2, 0.0)];
        for (a, b) in v.iter().zip(expected) {
            assert!((a - b).norm() < 1e-15);
        }
        let col = frame_unitary(&p).matrix().column(0);
        for (a, b) in v.iter().zip(col) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn eigenstates_are_frame_columns() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut worst = 0.0f64;
        for &n in &[1usize, 2, 4] {
            for _ in 0..200 {
                let p = random_point(&mut rng, n);
                let u = frame_unitary(&p);
                assert!(u.defect() < 1e-12);
                for a in 0..=n {
                    let v = eigenstate(&p, a).unwrap();
                    for (j, z) in v.iter().enumerate() {
                        worst = worst.max((z - u.matrix()[(j, a)]).norm());
                    }
                }
            }
        }
        assert!(worst < 1e-10, "column mismatch {worst}");
    }

    #[test]
    fn eigenstates_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let p = random_point(&mut rng, 3);
            for a in 0..=3 {
                for b in 0..=3 {
                    let va = eigenstate(&p, a).unwrap();
                    let vb = eigenstate(&p, b).unwrap();
                    let ip: C64 = va.iter().zip(&vb).map(|(x, y)| x.conj() * y).sum();
                    let expected = if a == b { 1.0 } else { 0.0 };
                    assert!((ip - c(expected, 0.0)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn eigenstate_rejects_bad_level() {
        let p = ControlPoint::origin(2);
        assert!(matches!(eigenstate(&p, 3), Err(Error::LevelOutOfRange { level: 3, limit: 3 })));
    }

    #[test]
    fn coord_text_round_trip() {
        for c in [Coord::Theta(0), Coord::Phi(3)] {
            assert_eq!(alloc::string::ToString::to_string(&c).parse::<Coord>().unwrap(), c);
        }
        for bad in ["theta:0", "rho:1", "phi", "phi:x"] {
            assert!(bad.parse::<Coord>().is_err());
        }
    }

    #[test]
    fn point_validation_and_phi_reduction() {
        assert!(ControlPoint::new(vec![2.0], vec![0.0]).is_err());
        assert!(ControlPoint::new(vec![-0.1], vec![0.0]).is_err());
        assert!(ControlPoint::new(vec![0.1, 0.2], vec![0.0]).is_err());
        assert!(ControlPoint::new(vec![f64::NAN], vec![0.0]).is_err());
        let p = ControlPoint::new(vec![0.3], vec![-FRAC_PI_2]).unwrap();
        assert!((p.phi()[0] - 1.5 * PI).abs() < 1e-15);
        let q = ControlPoint::new(vec![FRAC_PI_2 + 1e-13], vec![7.0 * PI]).unwrap();
        assert_eq!(q.theta()[0], FRAC_PI_2);
        assert!((q.phi()[0] - PI).abs() < 1e-12);
    }

    #[test]
    fn hamiltonian_at_origin_is_h0() {
        let f = HamiltonianFamily::new(3, 2.5).unwrap();
        let h = f.hamiltonian_at(&ControlPoint::origin(3)).unwrap();
        assert_eq!(h.max_abs_diff(&f.h0()), 0.0);
        assert!(f.hamiltonian_at(&ControlPoint::origin(2)).is_err());
    }

    #[test]
    fn isospectral_everywhere() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for i in 0..100 {
            let n = 1 + i % 4;
            let eps = 0.5 + i as f64 * 0.01;
            let f = HamiltonianFamily::new(n, eps).unwrap();
            let h = f.hamiltonian_at(&random_point(&mut rng, n)).unwrap();
            assert!(h.hermitian_defect() < 1e-14);
            let spec = hermitian_spectrum(&h);
            for v in &spec[..n] {
                assert!(v.abs() < 1e-10);
            }
            assert!((spec[n] - eps).abs() < 1e-10);
        }
    }

    // Two-level restriction: the orbit element equals (ε₀/2)𝟙 − (ε₀/2) B(2θ, π−φ)·σ,
    // i.e. the traceless B·σ form up to the trace shift and azimuth reflection.
    #[test]
    fn two_level_restriction_is_bloch_form() {
        let eps = 1.7;
        let f = HamiltonianFamily::new(1, eps).unwrap();
        for &(th, ph) in &[(0.3, 0.4), (1.2, 5.0), (FRAC_PI_4, PI), (0.0, 2.0)] {
            let h = f.hamiltonian_at(&ControlPoint::new(vec![th], vec![ph]).unwrap()).unwrap();
            let (big, az) = (2.0 * th, PI - ph);
            let b = [big.sin() * az.cos(), big.sin() * az.sin(), big.cos()];
            let b_sigma = CMatrix::from_row_major(vec![
                c(b[2], 0.0),
                c(b[0], -b[1]),
                c(b[0], b[1]),
                c(-b[2], 0.0),
            ])
            .unwrap();
            let expected = &CMatrix::identity(2).scale_real(eps / 2.0) - &b_sigma.scale_real(eps / 2.0);
            assert!(h.max_abs_diff(&expected) < 1e-14);
        }
    }

    // Central differences of the frame converge at second order.
    #[test]
    fn frame_is_smooth() {
        let p = ControlPoint::new(vec![0.4, 0.9, 0.7], vec![1.0, 2.0, 3.0]).unwrap();
        let coords = [Coord::Theta(0), Coord::Theta(2), Coord::Phi(1), Coord::Phi(2)];
        for coord in coords {
            let deriv = |h: f64| {
                let x = p.get(coord);
                let up = frame_unitary(&p.with(coord, x + h).unwrap());
                let dn = frame_unitary(&p.with(coord, x - h).unwrap());
                (up.matrix() - dn.matrix()).scale_real(0.5 / h)
            };
            let (d1, d2, d4) = (deriv(0.02), deriv(0.01), deriv(0.005));
            let ratio = d1.max_abs_diff(&d2) / d2.max_abs_diff(&d4);
            assert!((ratio - 4.0).abs() < 0.8, "{coord}: ratio {ratio}");
        }
    }
}
