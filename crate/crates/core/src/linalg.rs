//! Superoperator plumbing on column-stacked 2x2 matrices, the dense 4x4
//! propagator and SVD null-space extraction.
//!
//! Column stacking: `vec(X) = [X00, X10, X01, X11]`, so that
//! `vec(A X B) = (B^T kron A) vec(X)`.

use nalgebra::{Schur, SVD};

use crate::error::{Error, Result};
use crate::{Mat2, Mat4, Vec4, C64};

/// Eigenvector condition number above which the spectral propagator is
/// abandoned for Padé scaling-and-squaring.
pub const EIGENVECTOR_CONDITION_LIMIT: f64 = 1e8;

/// Singular values below `NULL_TOL * sigma_max` count as zero.
pub const NULL_TOL: f64 = 1e-12;

pub fn vectorize(m: &Mat2) -> Vec4 {
    Vec4::new(m[(0, 0)], m[(1, 0)], m[(0, 1)], m[(1, 1)])
}

pub fn unvectorize(v: &Vec4) -> Mat2 {
    Mat2::new(v[0], v[2], v[1], v[3])
}

pub fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    Mat4::from_fn(|r, c| a[(r / 2, c / 2)] * b[(r % 2, c % 2)])
}

/// `X -> A X`.
pub fn left_multiplication(a: &Mat2) -> Mat4 {
    kron(&Mat2::identity(), a)
}

/// `X -> X B`.
pub fn right_multiplication(b: &Mat2) -> Mat4 {
    kron(&b.transpose(), &Mat2::identity())
}

/// `X -> -i [H, X]`.
pub fn commutator_generator(h: &Mat2) -> Mat4 {
    (left_multiplication(h) - right_multiplication(h)) * C64::new(0.0, -1.0)
}

/// `X -> A X A^+ - 1/2 {A^+ A, X}`.
pub fn lindblad_dissipator(a: &Mat2) -> Mat4 {
    let ada = a.adjoint() * a;
    let half = C64::new(0.5, 0.0);
    kron(&a.conjugate(), a) - (left_multiplication(&ada) + right_multiplication(&ada)) * half
}

/// Row vector extracting the trace from a vectorized matrix.
pub fn trace_functional() -> nalgebra::RowVector4<C64> {
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    nalgebra::RowVector4::new(one, zero, zero, one)
}

/// `exp(L t)` for a fixed generator, ready to evaluate at many times.
#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
pub enum Propagator {
    /// `L = V diag(lambda) V^-1`.
    Spectral {
        eigenvalues: Vec4,
        vectors: Mat4,
        inverse: Mat4,
        condition: f64,
    },
    /// Defective or ill-conditioned generator; `exp` by Padé scaling-and-squaring.
    Pade { generator: Mat4 },
}

impl Propagator {
    pub fn new(generator: &Mat4) -> Self {
        spectral_decomposition(generator).unwrap_or(Propagator::Pade {
            generator: *generator,
        })
    }

    pub fn is_spectral(&self) -> bool {
        matches!(self, Propagator::Spectral { .. })
    }

    /// Propagator matrix `exp(L t)`.
    pub fn at(&self, t: f64) -> Mat4 {
        if t == 0.0 {
            return Mat4::identity();
        }
        match self {
            Propagator::Spectral {
                eigenvalues,
                vectors,
                inverse,
                ..
            } => {
                let mut scaled = *vectors;
                for (k, lambda) in eigenvalues.iter().enumerate() {
                    let f = (lambda * t).exp();
                    for r in 0..4 {
                        scaled[(r, k)] *= f;
                    }
                }
                scaled * inverse
            }
            Propagator::Pade { generator } => (generator * C64::new(t, 0.0)).exp(),
        }
    }
}

fn spectral_decomposition(generator: &Mat4) -> Option<Propagator> {
    let scale = generator.norm().max(f64::MIN_POSITIVE);
    let (q, t) = Schur::try_new(*generator, 1e-15, 10_000)?.unpack();
    for i in 1..4 {
        for j in 0..i {
            if t[(i, j)].norm() > 1e-13 * scale {
                return None;
            }
        }
    }
    // eigenvectors of the triangular factor by back substitution
    let tol = 1e-12 * scale;
    let mut y = Mat4::zeros();
    for k in 0..4 {
        y[(k, k)] = C64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut acc = C64::new(0.0, 0.0);
            for j in (i + 1)..=k {
                acc += t[(i, j)] * y[(j, k)];
            }
            let gap = t[(i, i)] - t[(k, k)];
            if gap.norm() <= tol {
                if acc.norm() <= tol {
                    y[(i, k)] = C64::new(0.0, 0.0);
                } else {
                    return None;
                }
            } else {
                y[(i, k)] = -acc / gap;
            }
        }
    }
    let mut vectors = q * y;
    for mut col in vectors.column_iter_mut() {
        let n = col.norm();
        col /= C64::new(n, 0.0);
    }
    let sv = vectors.singular_values();
    let condition = sv.max() / sv.min();
    if !condition.is_finite() || condition > EIGENVECTOR_CONDITION_LIMIT {
        return None;
    }
    let inverse = vectors.try_inverse()?;
    let eigenvalues = Vec4::from_fn(|i, _| t[(i, i)]);
    Some(Propagator::Spectral {
        eigenvalues,
        vectors,
        inverse,
        condition,
    })
}

/// Right null vector of a 4x4 generator, with the singular values that
/// certify it (descending).
#[derive(Debug, Clone)]
pub struct NullVector {
    pub vector: Vec4,
    pub singular_values: [f64; 4],
}

pub fn null_vector(m: &Mat4) -> Result<NullVector> {
    let svd = SVD::new(*m, false, true);
    let mut singular_values = [0.0; 4];
    for (dst, src) in singular_values.iter_mut().zip(svd.singular_values.iter()) {
        *dst = *src;
    }
    let largest = singular_values[0];
    let threshold = NULL_TOL * largest;
    let nullity = singular_values.iter().filter(|&&s| s <= threshold).count();
    if nullity == 0 {
        return Err(Error::NoNullVector {
            smallest: singular_values[3],
            largest,
        });
    }
    if nullity > 1 {
        return Err(Error::DegenerateSteadyState {
            nullity,
            singular_values: singular_values.to_vec(),
        });
    }
    let v_t = svd.v_t.expect("right singular vectors requested");
    let vector = v_t.row(3).adjoint();
    Ok(NullVector {
        vector,
        singular_values,
    })
}
