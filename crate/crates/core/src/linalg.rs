//! Dense complex linear algebra for the small matrices this crate needs
//! (dimension ≲ 64): products, a cyclic Jacobi eigensolver for hermitian
//! matrices, the exponential of anti-hermitian generators and polar
//! re-unitarization.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Index, IndexMut, Mul, Sub};

#[allow(unused_imports)] // f64 math is inherent in core on newer toolchains
use num_traits::Float;

use crate::error::{Error, Result};

pub use num_complex::Complex64 as C64;

/// Accepted unitarity defect `max |M†M − I|` without repair.
pub const UNITARY_TOL: f64 = 1e-9;
/// Largest defect that is still repaired by polar projection.
pub const UNITARY_REPAIR_LIMIT: f64 = 1e-6;

const JACOBI_MAX_SWEEPS: usize = 64;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn cis(angle: f64) -> C64 {
    C64::new(angle.cos(), angle.sin())
}

/// Square complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        CMatrix { dim, data: vec![C64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for k in 0..dim {
            m[(k, k)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for col in 0..dim {
                data.push(f(r, col));
            }
        }
        CMatrix { dim, data }
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (k, &d) in diag.iter().enumerate() {
            m[(k, k)] = d;
        }
        m
    }

    /// Builds a matrix from row-major entries; `entries.len()` must be a square.
    pub fn from_row_major(entries: Vec<C64>) -> Result<Self> {
        let dim = isqrt(entries.len());
        if dim * dim != entries.len() {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: entries.len() });
        }
        Ok(CMatrix { dim, data: entries })
    }

    /// Builds a matrix from real entries.
    pub fn from_real(dim: usize, rows: &[f64]) -> Self {
        assert_eq!(rows.len(), dim * dim);
        CMatrix { dim, data: rows.iter().map(|&x| C64::new(x, 0.0)).collect() }
    }

    /// The outer product `|u⟩⟨v|`.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        assert_eq!(u.len(), v.len());
        Self::from_fn(u.len(), |r, col| u[r] * v[col].conj())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[C64] {
        &self.data[r * self.dim..(r + 1) * self.dim]
    }

    pub fn column(&self, col: usize) -> Vec<C64> {
        (0..self.dim).map(|r| self[(r, col)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, col| self[(col, r)].conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        CMatrix { dim: self.dim, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        CMatrix { dim: self.dim, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|k| self[(k, k)]).sum()
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entry-wise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Operator 2-norm (largest singular value).
    pub fn spectral_norm(&self) -> f64 {
        let gram = &self.adjoint() * self;
        let (vals, _) = hermitian_eigen(&gram);
        vals.last().copied().unwrap_or(0.0).max(0.0).sqrt()
    }

    pub fn commutator(&self, other: &CMatrix) -> CMatrix {
        &(self * other) - &(other * self)
    }

    /// `max |M + M†|`.
    pub fn antihermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.dim {
            for col in 0..self.dim {
                worst = worst.max((self[(r, col)] + self[(col, r)].conj()).norm());
            }
        }
        worst
    }

    /// `max |M − M†|`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.dim {
            for col in 0..self.dim {
                worst = worst.max((self[(r, col)] - self[(col, r)].conj()).norm());
            }
        }
        worst
    }

    /// `(M − M†)/2`.
    pub fn antihermitian_part(&self) -> CMatrix {
        Self::from_fn(self.dim, |r, col| (self[(r, col)] - self[(col, r)].conj()) * 0.5)
    }

    /// `max |M†M − I|`.
    pub fn unitarity_defect(&self) -> f64 {
        (&self.adjoint() * self).max_abs_diff(&Self::identity(self.dim))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let d = other.dim;
        Self::from_fn(self.dim * d, |r, col| self[(r / d, col / d)] * other[(r % d, col % d)])
    }

    /// Embeds a 2×2 block acting on levels `(a, b)` into the identity of size `dim`.
    pub fn embed_two_level(dim: usize, a: usize, b: usize, block: &CMatrix) -> CMatrix {
        assert_eq!(block.dim, 2);
        let mut m = Self::identity(dim);
        m[(a, a)] = block[(0, 0)];
        m[(a, b)] = block[(0, 1)];
        m[(b, a)] = block[(1, 0)];
        m[(b, b)] = block[(1, 1)];
        m
    }
}

fn isqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (r, col): (usize, usize)) -> &C64 {
        &self.data[r * self.dim + col]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (r, col): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.dim + col]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix product dimension mismatch");
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for col in 0..n {
                    out.data[r * n + col] += a * rhs.data[k * n + col];
                }
            }
        }
        out
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim);
        CMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim);
        CMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix({}x{}) [", self.dim, self.dim)?;
        for r in 0..self.dim {
            write!(f, "  ")?;
            for z in self.row(r) {
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Eigen-decomposition of a hermitian matrix by cyclic complex Jacobi rotations.
///
/// Returns eigenvalues in ascending order and the unitary whose columns are
/// the matching eigenvectors. Only the hermitian part of `h` is used.
pub fn hermitian_eigen(h: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = h.dim();
    let mut a = CMatrix::from_fn(n, |r, col| (h[(r, col)] + h[(col, r)].conj()) * 0.5);
    let mut v = CMatrix::identity(n);
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);

    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= 1e-17 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r <= 1e-300 {
                    continue;
                }
                // Phase the (p,q) entry real, then apply a real symmetric rotation.
                let e = apq / r;
                let e_conj = e.conj();
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * r);
                let t = if theta == 0.0 {
                    1.0
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                let j_pp = C64::new(cs, 0.0);
                let j_pq = C64::new(sn, 0.0);
                let j_qp = e_conj * (-sn);
                let j_qq = e_conj * cs;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * j_pp + akq * j_qp;
                    a[(k, q)] = akp * j_pq + akq * j_qq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = j_pp.conj() * apk + j_qp.conj() * aqk;
                    a[(q, k)] = j_pq.conj() * apk + j_qq.conj() * aqk;
                }
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * j_pp + vkq * j_qp;
                    v[(k, q)] = vkp * j_pq + vkq * j_qq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let vectors = CMatrix::from_fn(n, |r, col| v[(r, order[col])]);
    (values, vectors)
}

/// Eigenvalues of a hermitian matrix, ascending.
pub fn hermitian_spectrum(h: &CMatrix) -> Vec<f64> {
    hermitian_eigen(h).0
}

/// `exp(M)` for anti-hermitian `M`, via the spectral decomposition of the
/// hermitian matrix `iM`.
pub fn expm_antihermitian(m: &CMatrix) -> CMatrix {
    let n = m.dim();
    if n == 1 {
        return CMatrix::from_diagonal(&[m[(0, 0)].exp()]);
    }
    let h = m.scale(C64::new(0.0, 1.0));
    let (vals, vecs) = hermitian_eigen(&h);
    // M = −i H  ⇒  exp(M) = V diag(e^{−iλ}) V†
    let phases: Vec<C64> = vals.iter().map(|&l| cis(-l)).collect();
    let mut out = CMatrix::zeros(n);
    for r in 0..n {
        for col in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..n {
                acc += vecs[(r, k)] * phases[k] * vecs[(col, k)].conj();
            }
            out[(r, col)] = acc;
        }
    }
    out
}

/// Nearest unitary `X (X†X)^{-1/2}`; `None` if `X` is numerically singular.
pub fn polar_unitary(x: &CMatrix) -> Option<CMatrix> {
    let n = x.dim();
    let gram = &x.adjoint() * x;
    let (vals, vecs) = hermitian_eigen(&gram);
    if vals.first().is_none_or(|&v| v <= 1e-24) {
        return None;
    }
    let inv_sqrt: Vec<f64> = vals.iter().map(|v| 1.0 / v.sqrt()).collect();
    let root = CMatrix::from_fn(n, |r, col| {
        let mut acc = C64::new(0.0, 0.0);
        for k in 0..n {
            acc += vecs[(r, k)] * inv_sqrt[k] * vecs[(col, k)].conj();
        }
        acc
    });
    Some(x * &root)
}

/// Distance after removing the best global phase: returns `(max |a − e^{iφ} b|, φ)`
/// with `φ = arg tr(b† a)`.
pub fn distance_up_to_phase(a: &CMatrix, b: &CMatrix) -> (f64, f64) {
    let overlap: C64 = a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| y.conj() * x).sum();
    let phase = if overlap.norm() > 1e-300 { overlap.arg() } else { 0.0 };
    (a.max_abs_diff(&b.scale(cis(phase))), phase)
}

/// Dense complex matrix with certified unitarity.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix {
    matrix: CMatrix,
    raw_defect: f64,
}

impl UnitaryMatrix {
    /// Accepts `m` if its defect is below [`UNITARY_TOL`]; repairs it by polar
    /// projection up to [`UNITARY_REPAIR_LIMIT`]; rejects above.
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::NonFinite("unitary candidate"));
        }
        let defect = m.unitarity_defect();
        if defect <= UNITARY_TOL {
            Ok(UnitaryMatrix { matrix: m, raw_defect: defect })
        } else if defect <= UNITARY_REPAIR_LIMIT {
            let matrix = polar_unitary(&m).ok_or(Error::NotUnitary { defect })?;
            Ok(UnitaryMatrix { matrix, raw_defect: defect })
        } else {
            Err(Error::NotUnitary { defect })
        }
    }

    /// Always re-unitarizes by polar projection, recording the raw defect.
    pub fn project(m: CMatrix) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::NonFinite("unitary candidate"));
        }
        let defect = m.unitarity_defect();
        if defect > UNITARY_REPAIR_LIMIT {
            return Err(Error::NotUnitary { defect });
        }
        let matrix = polar_unitary(&m).ok_or(Error::NotUnitary { defect })?;
        Ok(UnitaryMatrix { matrix, raw_defect: defect })
    }

    /// For matrices unitary by construction (exponentials of anti-hermitian
    /// generators, permutations, products of unitaries).
    pub(crate) fn from_exact(matrix: CMatrix) -> Self {
        debug_assert!(matrix.unitarity_defect() < 1e-8, "defect {}", matrix.unitarity_defect());
        UnitaryMatrix { matrix, raw_defect: 0.0 }
    }

    pub fn identity(dim: usize) -> Self {
        UnitaryMatrix { matrix: CMatrix::identity(dim), raw_defect: 0.0 }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// Defect measured before any repair.
    pub fn raw_defect(&self) -> f64 {
        self.raw_defect
    }

    /// Defect of the stored matrix.
    pub fn defect(&self) -> f64 {
        self.matrix.unitarity_defect()
    }

    pub fn adjoint(&self) -> Self {
        UnitaryMatrix { matrix: self.matrix.adjoint(), raw_defect: self.raw_defect }
    }

    pub fn distance(&self, other: &UnitaryMatrix) -> f64 {
        self.matrix.max_abs_diff(&other.matrix)
    }

    pub fn distance_up_to_phase(&self, other: &CMatrix) -> (f64, f64) {
        distance_up_to_phase(&self.matrix, other)
    }
}

impl Mul for &UnitaryMatrix {
    type Output = UnitaryMatrix;
    fn mul(self, rhs: &UnitaryMatrix) -> UnitaryMatrix {
        UnitaryMatrix {
            matrix: &self.matrix * &rhs.matrix,
            raw_defect: self.raw_defect.max(rhs.raw_defect),
        }
    }
}
