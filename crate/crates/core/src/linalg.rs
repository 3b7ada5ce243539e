//! Dense complex matrices sized for one and two qubits.
//!
//! Everything here works on 2×2 and 4×4 matrices only; the eigensolver is a
//! cyclic complex Jacobi iteration, which is unconditionally stable and more
//! than fast enough at this size.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Hermiticity tolerance required by the eigensolver.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues closer than this are treated as one degenerate group.
pub const DEGENERACY_TOL: f64 = 1e-10;
/// Negative eigenvalues above `-CLIP_TOL` are round-off and clipped to zero.
pub const CLIP_TOL: f64 = 1e-10;

const JACOBI_REL_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 64;

/// Row-major dense complex matrix of dimension 2 or 4.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

fn check_dim(dim: usize) -> Result<()> {
    match dim {
        2 | 4 => Ok(()),
        _ => Err(Error::Dimension(dim)),
    }
}

impl ComplexMatrix {
    /// Zero matrix. Panics on a dimension other than 2 or 4.
    pub fn zeros(dim: usize) -> Self {
        check_dim(dim).expect("ComplexMatrix::zeros");
        ComplexMatrix {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_rows(dim: usize, entries: Vec<C64>) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::EntryCount {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        Ok(ComplexMatrix { dim, data: entries })
    }

    pub fn from_real_rows(dim: usize, entries: &[f64]) -> Result<Self> {
        Self::from_rows(dim, entries.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn from_diag(diag: &[f64]) -> Result<Self> {
        check_dim(diag.len())?;
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        Ok(m)
    }

    /// `|v⟩⟨w|`.
    pub fn outer(v: &[C64], w: &[C64]) -> Result<Self> {
        check_dim(v.len())?;
        if w.len() != v.len() {
            return Err(Error::Dimension(w.len()));
        }
        let n = v.len();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = v[i] * w[j].conj();
            }
        }
        Ok(m)
    }

    /// `|v⟩⟨v|`.
    pub fn projector(v: &[C64]) -> Result<Self> {
        Self::outer(v, v)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = self[(j, i)].conj();
            }
        }
        m
    }

    pub fn conj(&self) -> Self {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = self[(j, i)];
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn scale(&self, s: C64) -> Self {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    /// Kronecker product `self ⊗ other` of two 2×2 matrices.
    pub fn kron(&self, other: &ComplexMatrix) -> Self {
        assert!(
            self.dim == 2 && other.dim == 2,
            "kron is only defined for two 2x2 factors"
        );
        let mut m = Self::zeros(4);
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    for d in 0..2 {
                        m[(2 * a + c, 2 * b + d)] = self[(a, b)] * other[(c, d)];
                    }
                }
            }
        }
        m
    }

    /// `[A, B] = AB − BA`.
    pub fn commutator(&self, other: &ComplexMatrix) -> Self {
        &(self * other) - &(other * self)
    }

    /// `{A, B} = AB + BA`.
    pub fn anticommutator(&self, other: &ComplexMatrix) -> Self {
        &(self * other) + &(other * self)
    }

    /// `U · self · U†`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Self {
        &(u * self) * &u.adjoint()
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let n = self.dim;
        assert_eq!(v.len(), n);
        (0..n)
            .map(|i| (0..n).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// `Tr[self · other]` without forming the product.
    pub fn trace_product(&self, other: &ComplexMatrix) -> C64 {
        let n = self.dim;
        assert_eq!(n, other.dim);
        let mut acc = ZERO;
        for i in 0..n {
            for k in 0..n {
                acc += self[(i, k)] * other[(k, i)];
            }
        }
        acc
    }

    /// `max |M[i][j] − conj(M[j][i])|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// `(M + M†)/2`.
    pub fn hermitized(&self) -> Self {
        (self + &self.adjoint()).scale_real(0.5)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Induced 1-norm (max column sum).
    pub fn norm_one(&self) -> f64 {
        let n = self.dim;
        (0..n)
            .map(|j| (0..n).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        let n = self.dim;
        assert_eq!(n, rhs.dim, "dimension mismatch in product");
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sum");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in difference");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| {
                    let z = self[(i, j)];
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Single-qubit Pauli matrices and two-qubit products.
pub mod pauli {
    use super::*;

    pub fn identity() -> ComplexMatrix {
        ComplexMatrix::identity(2)
    }

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::from_rows(2, vec![ZERO, ONE, ONE, ZERO]).unwrap()
    }

    pub fn y() -> ComplexMatrix {
        ComplexMatrix::from_rows(2, vec![ZERO, -I, I, ZERO]).unwrap()
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::from_rows(2, vec![ONE, ZERO, ZERO, -ONE]).unwrap()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SortOrder {
    Ascending,
    Descending,
}

/// Eigenvalues with orthonormal eigenvectors, `M = Σ values[k] |v_k⟩⟨v_k|`.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<C64>>,
    pub order: SortOrder,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_values(|x| C64::new(x, 0.0))
    }

    /// `Σ f(values[k]) |v_k⟩⟨v_k|`.
    pub fn map_values(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let n = self.dim();
        let mut m = ComplexMatrix::zeros(n);
        for (lambda, v) in self.values.iter().zip(&self.vectors) {
            let w = f(*lambda);
            for i in 0..n {
                let wi = w * v[i];
                for j in 0..n {
                    m[(i, j)] += wi * v[j].conj();
                }
            }
        }
        m
    }

    /// `max |⟨v_i|v_j⟩ − δ_ij|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let dot = inner(&self.vectors[i], &self.vectors[j]);
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((dot - target).norm());
            }
        }
        worst
    }

    pub fn is_sorted(&self) -> bool {
        self.values.windows(2).all(|w| match self.order {
            SortOrder::Ascending => w[0] <= w[1],
            SortOrder::Descending => w[0] >= w[1],
        })
    }
}

/// `⟨a|b⟩`.
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn vector_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations.
pub fn hermitian_eigen(m: &ComplexMatrix, order: SortOrder) -> Result<SpectralDecomposition> {
    let asymmetry = m.hermiticity_defect();
    if asymmetry > HERMITIAN_TOL {
        return Err(Error::NotHermitian { asymmetry });
    }
    let n = m.dim();
    let mut a = m.hermitized();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();

    if scale > 0.0 {
        for _ in 0..JACOBI_MAX_SWEEPS {
            if off_diagonal_norm(&a) <= JACOBI_REL_TOL * scale {
                break;
            }
            for p in 0..n - 1 {
                for q in p + 1..n {
                    jacobi_rotate(&mut a, &mut v, p, q);
                }
            }
        }
    }

    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    if order == SortOrder::Descending {
        idx.reverse();
    }
    let values: Vec<f64> = idx.iter().map(|&k| a[(k, k)].re).collect();
    let mut vectors: Vec<Vec<C64>> = idx
        .iter()
        .map(|&k| (0..n).map(|i| v[(i, k)]).collect())
        .collect();

    // Re-orthonormalize inside each degenerate group, in index order.
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (values[end] - values[end - 1]).abs() <= DEGENERACY_TOL {
            end += 1;
        }
        if end - start > 1 {
            gram_schmidt(&mut vectors[start..end]);
        }
        start = end;
    }

    Ok(SpectralDecomposition {
        values,
        vectors,
        order,
    })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Zero `a[p][q]` with `a ← G† a G`, `v ← v G`. `G` combines a phase on
/// column `q` (making the pivot real) with a real Givens rotation.
fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let phase_conj = (apq / mag).conj();
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let g_pp = C64::new(c, 0.0);
    let g_pq = C64::new(s, 0.0);
    let g_qp = phase_conj * (-s);
    let g_qq = phase_conj * c;

    let n = a.dim();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}

fn gram_schmidt(vectors: &mut [Vec<C64>]) {
    for i in 0..vectors.len() {
        for j in 0..i {
            let proj = inner(&vectors[j], &vectors[i]);
            let (head, tail) = vectors.split_at_mut(i);
            for (x, y) in tail[0].iter_mut().zip(&head[j]) {
                *x -= proj * y;
            }
        }
        let norm = vector_norm(&vectors[i]);
        for x in vectors[i].iter_mut() {
            *x /= norm;
        }
    }
}

/// Matrix exponential.
///
/// Hermitian and anti-Hermitian inputs go through the eigendecomposition;
/// anything else uses Taylor scaling and squaring.
pub fn matrix_exp(m: &ComplexMatrix) -> ComplexMatrix {
    let tol = 1e-12 * (1.0 + m.max_abs());
    if m.hermiticity_defect() <= tol {
        let eig = hermitian_eigen(m, SortOrder::Ascending).expect("checked Hermitian");
        return eig.map_values(|x| C64::new(x.exp(), 0.0));
    }
    // m = i K with K = −i m Hermitian.
    let k = m.scale(-I);
    if k.hermiticity_defect() <= tol {
        let eig = hermitian_eigen(&k, SortOrder::Ascending).expect("checked Hermitian");
        return eig.map_values(|x| C64::new(0.0, x).exp());
    }
    taylor_expm(m)
}

fn taylor_expm(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.dim();
    let norm = m.norm_one();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let a = m.scale_real(0.5f64.powi(squarings));

    let mut sum = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..=40 {
        term = (&term * &a).scale_real(1.0 / k as f64);
        sum = &sum + &term;
        if term.max_abs() <= 1e-18 * sum.max_abs() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Which tensor factor of a two-qubit operator to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Reduced 2×2 operator of a 4×4 operator on `A ⊗ B`.
pub fn partial_trace(rho: &ComplexMatrix, keep: Subsystem) -> ComplexMatrix {
    assert_eq!(rho.dim(), 4, "partial trace needs a two-qubit operator");
    let mut out = ComplexMatrix::zeros(2);
    for x in 0..2 {
        for y in 0..2 {
            out[(x, y)] = match keep {
                Subsystem::A => rho[(2 * x, 2 * y)] + rho[(2 * x + 1, 2 * y + 1)],
                Subsystem::B => rho[(x, y)] + rho[(2 + x, 2 + y)],
            };
        }
    }
    out
}

/// `−Σ λ log₂ λ` over a probability vector, with `0·log 0 = 0`.
pub fn shannon_bits(probs: impl IntoIterator<Item = f64>) -> f64 {
    probs
        .into_iter()
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum()
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &ComplexMatrix) -> Result<f64> {
    let trace = rho.trace().re;
    if (trace - 1.0).abs() > 1e-8 {
        return Err(Error::Trace { trace, tol: 1e-8 });
    }
    let eig = hermitian_eigen(rho, SortOrder::Descending)?;
    let min = eig.values.iter().copied().fold(f64::INFINITY, f64::min);
    if min < -CLIP_TOL {
        return Err(Error::NotPositive {
            min_eigenvalue: min,
        });
    }
    Ok(shannon_bits(eig.values.iter().map(|&l| l.max(0.0))))
}

/// Eigenvalues of a 2×2 Hermitian matrix, larger first.
pub(crate) fn eigenvalues_2x2(m: &ComplexMatrix) -> [f64; 2] {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let b = m[(0, 1)];
    let mean = 0.5 * (a + d);
    let half = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    [mean + half, mean - half]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn diagonal_eigenvalues_sorted() {
        let m = ComplexMatrix::from_diag(&[2.0, -1.0]).unwrap();
        let e = hermitian_eigen(&m, SortOrder::Ascending).unwrap();
        assert_eq!(e.values, vec![-1.0, 2.0]);
        let e = hermitian_eigen(&m, SortOrder::Descending).unwrap();
        assert_eq!(e.values, vec![2.0, -1.0]);
    }

    #[test]
    fn pauli_x_spectrum() {
        let e = hermitian_eigen(&pauli::x(), SortOrder::Ascending).unwrap();
        assert_abs_diff_eq!(e.values[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.values[1], 1.0, epsilon = 1e-14);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        // Eigenvectors are (|0⟩ ∓ |1⟩)/√2 up to a global phase.
        let minus = [c(s, 0.0), c(-s, 0.0)];
        let plus = [c(s, 0.0), c(s, 0.0)];
        assert_abs_diff_eq!(inner(&minus, &e.vectors[0]).norm(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(inner(&plus, &e.vectors[1]).norm(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_rows(2, vec![ONE, c(0.5, 0.0), ZERO, ONE]).unwrap();
        match hermitian_eigen(&m, SortOrder::Ascending) {
            Err(Error::NotHermitian { asymmetry }) => assert_abs_diff_eq!(asymmetry, 0.5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn complex_hermitian_reconstructs() {
        let m = ComplexMatrix::from_rows(
            4,
            vec![
                c(1.0, 0.0), c(0.3, -0.2), c(0.0, 1.5), c(-0.7, 0.1),
                c(0.3, 0.2), c(-2.0, 0.0), c(0.4, 0.4), c(0.0, 0.0),
                c(0.0, -1.5), c(0.4, -0.4), c(0.5, 0.0), c(1.1, -0.9),
                c(-0.7, -0.1), c(0.0, 0.0), c(1.1, 0.9), c(3.0, 0.0),
            ],
        )
        .unwrap();
        let e = hermitian_eigen(&m, SortOrder::Ascending).unwrap();
        assert!(e.is_sorted());
        assert!(e.orthonormality_defect() <= 1e-12);
        assert!(e.reconstruct().max_abs_diff(&m) <= 1e-12);
    }

    #[test]
    fn degenerate_eigenvectors_stay_orthonormal() {
        let m = ComplexMatrix::from_diag(&[1.0, 1.0, 1.0, -3.0]).unwrap();
        let e = hermitian_eigen(&m, SortOrder::Descending).unwrap();
        assert!(e.orthonormality_defect() <= 1e-14);
        assert_eq!(e.values, vec![1.0, 1.0, 1.0, -3.0]);
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let e = matrix_exp(&ComplexMatrix::zeros(4));
        assert!(e.max_abs_diff(&ComplexMatrix::identity(4)) <= 1e-15);
    }

    #[test]
    fn exp_pauli_rotation() {
        let theta = std::f64::consts::FRAC_PI_2;
        let e = matrix_exp(&pauli::x().scale(c(0.0, -theta)));
        let expected = pauli::x().scale(-I);
        assert!(e.max_abs_diff(&expected) <= 1e-12);
    }

    #[test]
    fn exp_diagonal() {
        let e = matrix_exp(&ComplexMatrix::from_diag(&[1.0, -2.0]).unwrap());
        let expected = ComplexMatrix::from_diag(&[1f64.exp(), (-2f64).exp()]).unwrap();
        assert!(e.max_abs_diff(&expected) <= 1e-12);
    }

    #[test]
    fn taylor_path_matches_nilpotent_closed_form() {
        // exp([[0, a], [0, 0]]) = [[1, a], [0, 1]]
        let m = ComplexMatrix::from_rows(2, vec![ZERO, c(3.0, 1.0), ZERO, ZERO]).unwrap();
        let e = matrix_exp(&m);
        let expected = ComplexMatrix::from_rows(2, vec![ONE, c(3.0, 1.0), ZERO, ONE]).unwrap();
        assert!(e.max_abs_diff(&expected) <= 1e-12);
    }

    #[test]
    fn partial_trace_examples() {
        let mut ket00 = vec![ZERO; 4];
        ket00[0] = ONE;
        let rho = ComplexMatrix::projector(&ket00).unwrap();
        let a = partial_trace(&rho, Subsystem::A);
        assert!(a.max_abs_diff(&ComplexMatrix::from_diag(&[1.0, 0.0]).unwrap()) == 0.0);

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = [c(s, 0.0), ZERO, ZERO, c(s, 0.0)];
        let rho = ComplexMatrix::projector(&bell).unwrap();
        let b = partial_trace(&rho, Subsystem::B);
        assert!(b.max_abs_diff(&ComplexMatrix::identity(2).scale_real(0.5)) <= 1e-15);

        let ra = ComplexMatrix::from_rows(2, vec![c(0.7, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.3, 0.0)]).unwrap();
        let rb = ComplexMatrix::from_diag(&[0.4, 0.6]).unwrap();
        let prod = ra.kron(&rb);
        assert!(partial_trace(&prod, Subsystem::A).max_abs_diff(&ra) <= 1e-15);
        assert!(partial_trace(&prod, Subsystem::B).max_abs_diff(&rb) <= 1e-15);
    }

    #[test]
    fn entropy_examples() {
        let mut ket = vec![ZERO; 4];
        ket[2] = ONE;
        let pure = ComplexMatrix::projector(&ket).unwrap();
        assert_abs_diff_eq!(von_neumann_entropy(&pure).unwrap(), 0.0, epsilon = 1e-14);
        let mixed = ComplexMatrix::identity(4).scale_real(0.25);
        assert_abs_diff_eq!(von_neumann_entropy(&mixed).unwrap(), 2.0, epsilon = 1e-14);
        let d = ComplexMatrix::from_diag(&[0.75, 0.25]).unwrap();
        // −(3/4)log₂(3/4) − (1/4)log₂(1/4)
        let expected = 2.0 - 0.75 * 3f64.log2();
        assert_abs_diff_eq!(von_neumann_entropy(&d).unwrap(), expected, epsilon = 1e-14);
        assert_abs_diff_eq!(expected, 0.811_278_124_459_132_8, epsilon = 1e-15);
    }

    #[test]
    fn entropy_rejects_bad_states() {
        let d = ComplexMatrix::from_diag(&[0.75, 0.5]).unwrap();
        assert!(matches!(von_neumann_entropy(&d), Err(Error::Trace { .. })));
        let d = ComplexMatrix::from_diag(&[1.1, -0.1]).unwrap();
        assert!(matches!(von_neumann_entropy(&d), Err(Error::NotPositive { .. })));
    }

    #[test]
    fn two_by_two_eigenvalues_match_jacobi() {
        let m = ComplexMatrix::from_rows(2, vec![c(0.2, 0.0), c(0.1, -0.3), c(0.1, 0.3), c(0.8, 0.0)]).unwrap();
        let fast = eigenvalues_2x2(&m);
        let e = hermitian_eigen(&m, SortOrder::Descending).unwrap();
        assert_abs_diff_eq!(fast[0], e.values[0], epsilon = 1e-14);
        assert_abs_diff_eq!(fast[1], e.values[1], epsilon = 1e-14);
    }
}
