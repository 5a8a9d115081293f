//! Dense complex 2x2 and 4x4 matrices with the small amount of linear algebra
//! the simulator needs: Hermitian eigendecomposition (cyclic Jacobi), matrix
//! exponential (scaling and squaring), Kronecker products and Pauli operators.
//!
//! Two-qubit operators use the product basis {|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩} with
//! |R⟩ ≡ |↑⟩ and |L⟩ ≡ |↓⟩; qubit 1 is the left tensor factor. This ordering
//! is fixed here and assumed everywhere else in the crate.

use num_complex::Complex64;

use crate::error::Error;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

macro_rules! impl_mat {
    ($name:ident, $n:expr) => {
        #[derive(Clone, Copy, Debug, PartialEq)]
        pub struct $name {
            pub e: [[C64; $n]; $n],
        }

        impl $name {
            pub const DIM: usize = $n;

            pub fn zeros() -> Self {
                Self {
                    e: [[ZERO; $n]; $n],
                }
            }

            pub fn identity() -> Self {
                let mut m = Self::zeros();
                for k in 0..$n {
                    m.e[k][k] = ONE;
                }
                m
            }

            pub fn from_diag(d: &[f64; $n]) -> Self {
                let mut m = Self::zeros();
                for k in 0..$n {
                    m.e[k][k] = C64::new(d[k], 0.0);
                }
                m
            }

            pub fn adjoint(&self) -> Self {
                let mut m = Self::zeros();
                for i in 0..$n {
                    for j in 0..$n {
                        m.e[i][j] = self.e[j][i].conj();
                    }
                }
                m
            }

            pub fn conj(&self) -> Self {
                let mut m = *self;
                for row in m.e.iter_mut() {
                    for z in row.iter_mut() {
                        *z = z.conj();
                    }
                }
                m
            }

            pub fn trace(&self) -> C64 {
                (0..$n).map(|k| self.e[k][k]).sum()
            }

            pub fn scale(&self, a: C64) -> Self {
                let mut m = *self;
                for row in m.e.iter_mut() {
                    for z in row.iter_mut() {
                        *z *= a;
                    }
                }
                m
            }

            pub fn scale_re(&self, a: f64) -> Self {
                self.scale(C64::new(a, 0.0))
            }

            /// Largest entrywise modulus.
            pub fn max_abs(&self) -> f64 {
                self.e
                    .iter()
                    .flatten()
                    .map(|z| z.norm())
                    .fold(0.0, f64::max)
            }

            pub fn max_abs_diff(&self, other: &Self) -> f64 {
                (*self - *other).max_abs()
            }

            /// max |m_ij - conj(m_ji)|.
            pub fn hermiticity_error(&self) -> f64 {
                let mut worst = 0.0f64;
                for i in 0..$n {
                    for j in 0..$n {
                        worst = worst.max((self.e[i][j] - self.e[j][i].conj()).norm());
                    }
                }
                worst
            }

            /// (M + M†)/2, stripping anti-Hermitian rounding noise.
            pub fn hermitize(&self) -> Self {
                (*self + self.adjoint()).scale_re(0.5)
            }

            /// Ascending eigenvalues and orthonormal eigenvectors (columns) of a
            /// Hermitian matrix, by cyclic Jacobi with complex rotations.
            /// Fails if the input deviates from Hermitian by more than 1e-9.
            pub fn eigh(&self) -> Result<($name, [f64; $n]), Error> {
                let herm = self.hermiticity_error();
                if herm > 1e-9 {
                    return Err(Error::NotHermitian { deviation: herm });
                }
                let mut a: [C64; $n * $n] = [ZERO; $n * $n];
                for i in 0..$n {
                    for j in 0..$n {
                        a[i * $n + j] = self.e[i][j];
                    }
                }
                let mut v: [C64; $n * $n] = [ZERO; $n * $n];
                let mut vals = [0.0f64; $n];
                jacobi_hermitian($n, &mut a, &mut v, &mut vals);
                let mut vectors = Self::zeros();
                for i in 0..$n {
                    for j in 0..$n {
                        vectors.e[i][j] = v[i * $n + j];
                    }
                }
                Ok((vectors, vals))
            }
        }

        impl std::ops::Add for $name {
            type Output = Self;
            fn add(self, rhs: Self) -> Self {
                let mut m = self;
                for i in 0..$n {
                    for j in 0..$n {
                        m.e[i][j] += rhs.e[i][j];
                    }
                }
                m
            }
        }

        impl std::ops::Sub for $name {
            type Output = Self;
            fn sub(self, rhs: Self) -> Self {
                let mut m = self;
                for i in 0..$n {
                    for j in 0..$n {
                        m.e[i][j] -= rhs.e[i][j];
                    }
                }
                m
            }
        }

        impl std::ops::Neg for $name {
            type Output = Self;
            fn neg(self) -> Self {
                self.scale_re(-1.0)
            }
        }

        impl std::ops::Mul for $name {
            type Output = Self;
            fn mul(self, rhs: Self) -> Self {
                let mut m = Self::zeros();
                for i in 0..$n {
                    for k in 0..$n {
                        let aik = self.e[i][k];
                        if aik == ZERO {
                            continue;
                        }
                        for j in 0..$n {
                            m.e[i][j] += aik * rhs.e[k][j];
                        }
                    }
                }
                m
            }
        }
    };
}

impl_mat!(Mat2, 2);
impl_mat!(Mat4, 4);

/// In-place cyclic Jacobi diagonalization of a Hermitian matrix stored
/// row-major in `a`. On return `vals` holds ascending eigenvalues and `v`
/// the matching orthonormal eigenvectors as columns.
fn jacobi_hermitian(n: usize, a: &mut [C64], v: &mut [C64], vals: &mut [f64]) {
    for i in 0..n {
        for j in 0..n {
            v[i * n + j] = if i == j { ONE } else { ZERO };
        }
    }
    let scale: f64 = a.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[p * n + q].norm());
            }
        }
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let r = apq.norm();
                if r <= 1e-300 {
                    continue;
                }
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let phase = apq / r;
                let tau = (aqq - app) / (2.0 * r);
                // small root of t^2 - 2*tau*t - 1 = 0 zeroes the (p,q) entry
                let t = if tau >= 0.0 {
                    -1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // G[p][p] = c, G[p][q] = -s e^{i phi}, G[q][p] = s e^{-i phi}, G[q][q] = c
                let gpq = -phase * s;
                let gqp = phase.conj() * s;
                // rows p, q of A <- G† A
                for j in 0..n {
                    let apj = a[p * n + j];
                    let aqj = a[q * n + j];
                    a[p * n + j] = apj * c + aqj * gqp.conj();
                    a[q * n + j] = apj * gpq.conj() + aqj * c;
                }
                // cols p, q of A <- A G; same for the accumulated V
                for i in 0..n {
                    let aip = a[i * n + p];
                    let aiq = a[i * n + q];
                    a[i * n + p] = aip * c + aiq * gqp;
                    a[i * n + q] = aip * gpq + aiq * c;
                    let vip = v[i * n + p];
                    let viq = v[i * n + q];
                    v[i * n + p] = vip * c + viq * gqp;
                    v[i * n + q] = vip * gpq + viq * c;
                }
                a[p * n + q] = ZERO;
                a[q * n + p] = ZERO;
            }
        }
    }
    for k in 0..n {
        vals[k] = a[k * n + k].re;
    }
    // ascending order, eigenvectors permuted along
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| vals[i].partial_cmp(&vals[j]).unwrap());
    let vals_old: Vec<f64> = vals.to_vec();
    let v_old: Vec<C64> = v.to_vec();
    for (new, &old) in idx.iter().enumerate() {
        vals[new] = vals_old[old];
        for i in 0..n {
            v[i * n + new] = v_old[i * n + old];
        }
    }
}

/// exp(A) for a 4x4 complex matrix by scaling and squaring with a Taylor
/// series on the scaled matrix; accurate to ~1e-12 for the operator norms
/// reached in this crate (|H| t up to a few hundred).
pub fn expm4(a: &Mat4) -> Mat4 {
    let norm = a.max_abs() * 4.0; // cheap upper bound on the 1-norm
    let s = if norm > 0.25 {
        (norm / 0.25).log2().ceil() as u32
    } else {
        0
    };
    let b = a.scale_re(0.5f64.powi(s as i32));
    let mut sum = Mat4::identity();
    let mut term = Mat4::identity();
    for k in 1..=18 {
        term = term * b;
        term = term.scale_re(1.0 / k as f64);
        sum = sum + term;
    }
    for _ in 0..s {
        sum = sum * sum;
    }
    sum
}

pub fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut m = Mat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    m.e[2 * i + k][2 * j + l] = a.e[i][j] * b.e[k][l];
                }
            }
        }
    }
    m
}

pub fn sigma_x() -> Mat2 {
    Mat2 {
        e: [[ZERO, ONE], [ONE, ZERO]],
    }
}

pub fn sigma_y() -> Mat2 {
    Mat2 {
        e: [[ZERO, -I], [I, ZERO]],
    }
}

pub fn sigma_z() -> Mat2 {
    Mat2 {
        e: [[ONE, ZERO], [ZERO, -ONE]],
    }
}

pub fn id2() -> Mat2 {
    Mat2::identity()
}
