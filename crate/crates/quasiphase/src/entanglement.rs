//! Entanglement quasiprobabilities of two-qubit states.
//!
//! A state is expanded over the 36 product projectors `|a⟩⟨a| ⊗ |b⟩⟨b|` built
//! from the six Pauli eigenstates on each side. Separable states admit a
//! nonnegative expansion; an entangled state needs negative weights somewhere.

use std::fmt;

use nalgebra::{DMatrix, DVector, Matrix4, Vector2, Vector4};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::nnls::nnls;

/// Single-qubit eigenstates of σ_x, σ_y, σ_z in table order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PauliEigenstate {
    XPlus,
    XMinus,
    YPlus,
    YMinus,
    ZPlus,
    ZMinus,
}

impl PauliEigenstate {
    pub const ALL: [PauliEigenstate; 6] = [
        Self::XPlus,
        Self::XMinus,
        Self::YPlus,
        Self::YMinus,
        Self::ZPlus,
        Self::ZMinus,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// 0, 1, 2 for x, y, z.
    pub fn axis(self) -> usize {
        self.index() / 2
    }

    pub fn sign(self) -> f64 {
        if self.index().is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    pub fn label(self) -> &'static str {
        ["x+", "x-", "y+", "y-", "z+", "z-"][self.index()]
    }

    /// Eigenvector in the computational basis `|0⟩ = z₊`, `|1⟩ = z₋`.
    pub fn vector(self) -> Vector2<C64> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let (a, b) = match self {
            Self::XPlus => (C64::new(h, 0.0), C64::new(h, 0.0)),
            Self::XMinus => (C64::new(h, 0.0), C64::new(-h, 0.0)),
            Self::YPlus => (C64::new(h, 0.0), C64::new(0.0, h)),
            Self::YMinus => (C64::new(h, 0.0), C64::new(0.0, -h)),
            Self::ZPlus => (C64::new(1.0, 0.0), C64::new(0.0, 0.0)),
            Self::ZMinus => (C64::new(0.0, 0.0), C64::new(1.0, 0.0)),
        };
        Vector2::new(a, b)
    }
}

impl fmt::Display for PauliEigenstate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.label())
    }
}

fn kron(a: &Vector2<C64>, b: &Vector2<C64>) -> Vector4<C64> {
    Vector4::new(a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
}

/// Validated two-qubit density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState {
    rho: Matrix4<C64>,
}

const STATE_TOLERANCE: f64 = 1e-10;

impl TwoQubitState {
    pub fn new(rho: Matrix4<C64>) -> Result<Self> {
        if rho.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite("rho"));
        }
        let herm = (rho - rho.adjoint())
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        if herm > STATE_TOLERANCE {
            return Err(Error::InvalidDensity(format!(
                "Hermiticity residual {herm:e}"
            )));
        }
        let trace = rho.trace();
        if (trace - 1.0).norm() > STATE_TOLERANCE {
            return Err(Error::InvalidDensity(format!("trace {trace}")));
        }
        let hermitian = (rho + rho.adjoint()) * C64::new(0.5, 0.0);
        let min = hermitian.symmetric_eigenvalues().min();
        if min < -STATE_TOLERANCE {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(Self { rho })
    }

    pub fn pure(psi: Vector4<C64>) -> Result<Self> {
        Self::new(psi * psi.adjoint())
    }

    /// `(|01⟩ − |10⟩)/√2`.
    pub fn singlet() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi = Vector4::new(
            C64::new(0.0, 0.0),
            C64::new(h, 0.0),
            C64::new(-h, 0.0),
            C64::new(0.0, 0.0),
        );
        Self::pure(psi).expect("singlet is a valid state")
    }

    pub fn product(a: PauliEigenstate, b: PauliEigenstate) -> Self {
        Self::pure(kron(&a.vector(), &b.vector()))
            .expect("product of unit vectors is a valid state")
    }

    /// `p · singlet + (1 − p) · I/4`.
    pub fn werner(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(invalid(
                "p",
                format!("mixing weight must lie in [0, 1], got {p}"),
            ));
        }
        let mixed = Matrix4::<C64>::identity() * C64::new((1.0 - p) / 4.0, 0.0);
        Self::new(Self::singlet().rho * C64::new(p, 0.0) + mixed)
    }

    pub fn matrix(&self) -> &Matrix4<C64> {
        &self.rho
    }
}

/// The 36 projectors `|a⟩⟨a| ⊗ |b⟩⟨b|`, ordered with `a` outer.
pub fn pauli_product_basis() -> Vec<((PauliEigenstate, PauliEigenstate), Matrix4<C64>)> {
    let mut out = Vec::with_capacity(36);
    for a in PauliEigenstate::ALL {
        for b in PauliEigenstate::ALL {
            let v = kron(&a.vector(), &b.vector());
            out.push(((a, b), v * v.adjoint()));
        }
    }
    out
}

/// 16 real coordinates of a Hermitian 4×4 matrix: diagonal, then the real and
/// imaginary parts of the upper triangle.
fn hermitian_coordinates(m: &Matrix4<C64>) -> [f64; 16] {
    let mut out = [0.0; 16];
    let mut k = 0;
    for i in 0..4 {
        out[k] = m[(i, i)].re;
        k += 1;
    }
    for i in 0..4 {
        for j in i + 1..4 {
            out[k] = m[(i, j)].re;
            out[k + 1] = m[(i, j)].im;
            k += 2;
        }
    }
    out
}

/// How [`ent_quasiprob`] chooses among the many exact decompositions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMode {
    /// Nonnegative least squares; falls back to the minimum-norm table when
    /// no nonnegative decomposition reproduces the state.
    NnlsFirst,
    /// Minimum Euclidean norm signed decomposition.
    MinNorm,
}

/// Which solver produced a table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Nnls,
    MinNorm,
}

/// Quasiprobability table `P(a, b)` with its reconstruction error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntQuasiTable {
    pub values: [[f64; 6]; 6],
    /// Frobenius norm of `Σ P(a,b) |ab⟩⟨ab| − ρ`.
    pub residual: f64,
    pub method: Method,
}

impl EntQuasiTable {
    pub fn get(&self, a: PauliEigenstate, b: PauliEigenstate) -> f64 {
        self.values[a.index()][b.index()]
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().flatten().sum()
    }

    pub fn reconstruct(&self) -> Matrix4<C64> {
        pauli_product_basis()
            .into_iter()
            .map(|((a, b), proj)| proj * C64::new(self.get(a, b), 0.0))
            .sum()
    }

    fn from_solution(x: &DVector<f64>, rho: &TwoQubitState, method: Method) -> Self {
        let mut values = [[0.0; 6]; 6];
        for (k, v) in x.iter().enumerate() {
            values[k / 6][k % 6] = *v;
        }
        let mut table = Self {
            values,
            residual: 0.0,
            method,
        };
        table.residual = (table.reconstruct() - rho.matrix()).norm();
        table
    }
}

/// NNLS tolerance and iteration cap.
const NNLS_TOLERANCE: f64 = 1e-12;
const NNLS_MAX_ITER: usize = 10_000;
/// Reconstruction error below which a table counts as exact.
pub const REPRESENTABLE_RESIDUAL: f64 = 1e-8;

/// Decomposes `rho` over the 36 Pauli product projectors.
pub fn ent_quasiprob(rho: &TwoQubitState, mode: SolveMode) -> EntQuasiTable {
    let basis = pauli_product_basis();
    let mut a = DMatrix::<f64>::zeros(17, 36);
    for (col, (_, proj)) in basis.iter().enumerate() {
        for (row, v) in hermitian_coordinates(proj).iter().enumerate() {
            a[(row, col)] = *v;
        }
        a[(16, col)] = 1.0;
    }
    let mut b = DVector::<f64>::zeros(17);
    for (row, v) in hermitian_coordinates(rho.matrix()).iter().enumerate() {
        b[row] = *v;
    }
    b[16] = 1.0;

    if mode == SolveMode::NnlsFirst {
        let sol = nnls(&a, &b, NNLS_TOLERANCE, NNLS_MAX_ITER);
        let table = EntQuasiTable::from_solution(&sol.x, rho, Method::Nnls);
        if table.residual <= REPRESENTABLE_RESIDUAL {
            return table;
        }
        log::debug!(
            "no nonnegative decomposition (residual {:e} after {} iterations, converged: {}); using minimum norm",
            table.residual,
            sol.iterations,
            sol.converged
        );
    }
    let x = a
        .svd(true, true)
        .solve(&b, 1e-12)
        .expect("SVD computed with both factors");
    EntQuasiTable::from_solution(&x, rho, Method::MinNorm)
}

/// Total negativity and the cells below `−1e-10`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NegativityReport {
    pub total_negativity: f64,
    pub negative_cells: Vec<(PauliEigenstate, PauliEigenstate, f64)>,
}

pub fn negativity_report(table: &EntQuasiTable) -> Result<NegativityReport> {
    if table.residual.is_nan() || table.residual >= REPRESENTABLE_RESIDUAL {
        return Err(Error::NotRepresentable {
            residual: table.residual,
            limit: REPRESENTABLE_RESIDUAL,
        });
    }
    let mut total = 0.0;
    let mut cells = Vec::new();
    for a in PauliEigenstate::ALL {
        for b in PauliEigenstate::ALL {
            let v = table.get(a, b);
            total += (-v).max(0.0);
            if v < -1e-10 {
                cells.push((a, b, v));
            }
        }
    }
    Ok(NegativityReport {
        total_negativity: total,
        negative_cells: cells,
    })
}
