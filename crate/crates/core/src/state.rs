//! State vectors and density operators over small composite Hilbert spaces.
//!
//! A [`Space`] is an ordered list of subsystems (factors), each with its own
//! basis tags. Composite basis states are ordered row-major over the factors
//! (the Kronecker convention), and operations address subsystems by index.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest Hilbert-space dimension any state may have.
pub const MAX_DIM: usize = 64;
/// Tolerance for algebraic identities (norm, trace, Hermiticity).
pub const ALGEBRA_TOL: f64 = 1e-12;
/// Tolerance for unitarity of caller-supplied matrices.
pub const UNITARITY_TOL: f64 = 1e-10;
/// Smallest eigenvalue a density operator may have.
pub const EIGEN_FLOOR: f64 = -1e-10;
/// Accepted deviation of a caller-supplied state from unit norm.
const INPUT_NORM_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// One subsystem of a composite space, identified by its basis tags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    labels: Vec<String>,
}

impl Factor {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::Subsystems("a subsystem needs at least one basis state".into()));
        }
        Ok(Factor { labels })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

/// Ordered tensor-product structure of a Hilbert space.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Space {
    factors: Vec<Factor>,
}

impl Space {
    pub fn new(factors: Vec<Factor>) -> Self {
        Space { factors }
    }

    /// Single-factor space with the given basis tags.
    pub fn single<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        Ok(Space::new(vec![Factor::new(labels)?]))
    }

    /// Qubit with tags `0_<tag>`, `1_<tag>` (or `0`, `1` for an empty tag).
    pub fn qubit(tag: &str) -> Self {
        let label = |b: u8| if tag.is_empty() { b.to_string() } else { format!("{b}_{tag}") };
        Space::single([label(0), label(1)]).expect("two labels")
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(Factor::dim).collect()
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(Factor::dim).product()
    }

    /// Tensor product of two spaces (factors of `self` first).
    pub fn product(&self, other: &Space) -> Space {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Space { factors }
    }

    /// Sub-space made of the listed factors, in the listed order.
    pub fn select(&self, keep: &[usize]) -> Space {
        Space { factors: keep.iter().map(|&k| self.factors[k].clone()).collect() }
    }

    /// Per-factor indices of composite basis index `index`.
    pub fn split_index(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.factors.len()];
        for (k, f) in self.factors.iter().enumerate().rev() {
            out[k] = index % f.dim();
            index /= f.dim();
        }
        out
    }

    /// Composite index of a per-factor multi-index.
    pub fn join_index(&self, parts: &[usize]) -> usize {
        parts
            .iter()
            .zip(&self.factors)
            .fold(0, |acc, (&p, f)| acc * f.dim() + p)
    }

    /// Tag of composite basis state `index`: factor tags joined with `,`.
    pub fn basis_label(&self, index: usize) -> String {
        self.split_index(index)
            .iter()
            .zip(&self.factors)
            .map(|(&i, f)| f.labels[i].as_str())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn basis_labels(&self) -> Vec<String> {
        (0..self.dim()).map(|i| self.basis_label(i)).collect()
    }

    fn check_cap(&self) -> Result<()> {
        let dim = self.dim();
        if dim > MAX_DIM {
            return Err(Error::DimensionOverflow { dim, cap: MAX_DIM });
        }
        Ok(())
    }
}

/// Normalized pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: DVector<Complex64>,
    space: Space,
}

impl StateVector {
    /// Wraps already-normalized amplitudes.
    pub fn new(amplitudes: Vec<Complex64>, space: Space) -> Result<Self> {
        let state = Self::unchecked(amplitudes, space)?;
        let norm = state.norm();
        if (norm - 1.0).abs() > INPUT_NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(state)
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(amplitudes: Vec<Complex64>, space: Space) -> Result<Self> {
        let mut state = Self::unchecked(amplitudes, space)?;
        let norm = state.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        state.amplitudes.unscale_mut(norm);
        Ok(state)
    }

    /// Real amplitudes, normalized.
    pub fn from_real(amplitudes: &[f64], space: Space) -> Result<Self> {
        Self::normalized(amplitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect(), space)
    }

    pub fn basis_state(space: Space, index: usize) -> Result<Self> {
        let dim = space.dim();
        if index >= dim {
            return Err(Error::DimensionMismatch { expected: dim, actual: index + 1 });
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Self::unchecked(amps, space)
    }

    fn unchecked(amplitudes: Vec<Complex64>, space: Space) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, actual: 0 });
        }
        space.check_cap()?;
        if amplitudes.len() != space.dim() {
            return Err(Error::DimensionMismatch { expected: space.dim(), actual: amplitudes.len() });
        }
        Ok(StateVector { amplitudes: DVector::from_vec(amplitudes), space })
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        self.amplitudes.as_slice()
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn as_vector(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn basis_labels(&self) -> Vec<String> {
        self.space.basis_labels()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.amplitudes[index].norm_sqr()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), actual: other.dim() });
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// Kronecker product; `self` is the leading factor.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        tensor(self, other)
    }

    pub fn apply_unitary(&self, u: &DMatrix<Complex64>) -> Result<StateVector> {
        apply_unitary(self, u)
    }

    pub fn to_density(&self) -> DensityOperator {
        DensityOperator {
            matrix: &self.amplitudes * self.amplitudes.adjoint(),
            space: self.space.clone(),
        }
    }

    /// Same amplitudes multiplied by a global phase factor.
    pub fn scaled(&self, factor: Complex64) -> Result<StateVector> {
        StateVector::new(self.amplitudes.iter().map(|a| a * factor).collect(), self.space.clone())
    }
}

fn check_normalized(s: &StateVector) -> Result<()> {
    let norm = s.norm();
    if (norm - 1.0).abs() > INPUT_NORM_TOL {
        return Err(Error::NotNormalized { norm });
    }
    Ok(())
}

/// Kronecker product of two normalized states.
pub fn tensor(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    check_normalized(a)?;
    check_normalized(b)?;
    let space = a.space.product(&b.space);
    space.check_cap()?;
    let amps = a
        .amplitudes
        .iter()
        .flat_map(|x| b.amplitudes.iter().map(move |y| x * y))
        .collect();
    StateVector::unchecked(amps, space)
}

/// Largest entrywise deviation of `u† u` from the identity.
pub fn unitarity_defect(u: &DMatrix<Complex64>) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    let n = u.nrows();
    let g = u.adjoint() * u;
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| (g[(i, j)] - if i == j { ONE } else { ZERO }).norm())
        .fold(0.0, f64::max)
}

fn check_unitary(u: &DMatrix<Complex64>, dim: usize) -> Result<()> {
    if u.nrows() != dim || u.ncols() != dim {
        return Err(Error::DimensionMismatch { expected: dim, actual: u.nrows().max(u.ncols()) });
    }
    let deviation = unitarity_defect(u);
    if deviation > UNITARITY_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(())
}

/// `u |s⟩` for a unitary `u` (checked to 1e-10).
pub fn apply_unitary(s: &StateVector, u: &DMatrix<Complex64>) -> Result<StateVector> {
    check_unitary(u, s.dim())?;
    Ok(StateVector { amplitudes: u * &s.amplitudes, space: s.space.clone() })
}

/// Positive semidefinite, unit-trace Hermitian operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: DMatrix<Complex64>,
    space: Space,
}

impl DensityOperator {
    /// Validates Hermiticity, trace and positivity.
    pub fn new(matrix: DMatrix<Complex64>, space: Space) -> Result<Self> {
        space.check_cap()?;
        if !matrix.is_square() || matrix.nrows() != space.dim() {
            return Err(Error::DimensionMismatch { expected: space.dim(), actual: matrix.nrows() });
        }
        let rho = DensityOperator { matrix, space };
        rho.validate()?;
        Ok(rho)
    }

    /// Hermitizes and trace-normalizes a positive operator, then validates.
    pub fn from_unnormalized(matrix: DMatrix<Complex64>, space: Space) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch { expected: matrix.nrows(), actual: matrix.ncols() });
        }
        let herm = (&matrix + matrix.adjoint()).scale(0.5);
        let tr = herm.trace().re;
        if !(tr > 0.0) || !tr.is_finite() {
            return Err(Error::InvalidDensity(format!("trace {tr} is not positive")));
        }
        Self::new(herm.unscale(tr), space)
    }

    pub fn pure(state: &StateVector) -> Self {
        state.to_density()
    }

    /// Diagonal operator with the given populations.
    pub fn diagonal(populations: &[f64], space: Space) -> Result<Self> {
        let diag = DVector::from_iterator(
            populations.len(),
            populations.iter().map(|&p| Complex64::new(p, 0.0)),
        );
        Self::new(DMatrix::from_diagonal(&diag), space)
    }

    pub fn maximally_mixed(space: Space) -> Result<Self> {
        let d = space.dim();
        Self::diagonal(&vec![1.0 / d as f64; d], space)
    }

    fn validate(&self) -> Result<()> {
        let n = self.matrix.nrows();
        for i in 0..n {
            for j in i..n {
                let dev = (self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm();
                if dev > ALGEBRA_TOL {
                    return Err(Error::InvalidDensity(format!(
                        "not Hermitian at ({i},{j}): deviation {dev:e}"
                    )));
                }
            }
        }
        let tr = self.matrix.trace();
        if (tr.re - 1.0).abs() > ALGEBRA_TOL || tr.im.abs() > ALGEBRA_TOL {
            return Err(Error::InvalidDensity(format!("trace {tr} differs from 1")));
        }
        if n > 1 {
            let min = self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
            if min < EIGEN_FLOOR {
                return Err(Error::InvalidDensity(format!("negative eigenvalue {min:e}")));
            }
        }
        Ok(())
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.matrix + self.matrix.adjoint()).scale(0.5);
        herm.symmetric_eigenvalues().iter().copied().collect()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn basis_labels(&self) -> Vec<String> {
        self.space.basis_labels()
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    pub fn population(&self, index: usize) -> f64 {
        self.matrix[(index, index)].re
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    /// `u ρ u†`.
    pub fn evolve(&self, u: &DMatrix<Complex64>) -> Result<Self> {
        check_unitary(u, self.dim())?;
        let m = u * &self.matrix * u.adjoint();
        Self::new((&m + m.adjoint()).scale(0.5), self.space.clone())
    }

    /// Convex combination `(1-w) self + w other`.
    pub fn mix(&self, other: &DensityOperator, weight: f64) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), actual: other.dim() });
        }
        if !(0.0..=1.0).contains(&weight) {
            return Err(Error::OutOfRange(format!("mixing weight {weight} not in [0,1]")));
        }
        Self::new(
            self.matrix.scale(1.0 - weight) + other.matrix.scale(weight),
            self.space.clone(),
        )
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        partial_trace(self, keep)
    }

    pub fn fidelity(&self, target: &StateVector) -> Result<f64> {
        fidelity(self, target)
    }
}

/// Traces out every subsystem not listed in `keep`. The kept subsystems
/// appear in ascending index order; an empty `keep` yields the 1×1 trace.
pub fn partial_trace(rho: &DensityOperator, keep: &[usize]) -> Result<DensityOperator> {
    let nf = rho.space.factors.len();
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.len() != keep.len() {
        return Err(Error::Subsystems(format!("repeated subsystem index in {keep:?}")));
    }
    if let Some(&bad) = kept.iter().find(|&&k| k >= nf) {
        return Err(Error::Subsystems(format!("subsystem {bad} out of range (have {nf})")));
    }
    if rho.space.dim() != rho.dim() {
        return Err(Error::Subsystems(format!(
            "declared dims {:?} do not factor dimension {}",
            rho.space.dims(),
            rho.dim()
        )));
    }
    let traced: Vec<usize> = (0..nf).filter(|k| !kept.contains(k)).collect();
    let kept_space = rho.space.select(&kept);
    let traced_space = rho.space.select(&traced);
    let n = rho.dim();
    let mut out = DMatrix::from_element(kept_space.dim(), kept_space.dim(), ZERO);

    let project = |idx: usize| {
        let parts = rho.space.split_index(idx);
        let k: Vec<usize> = kept.iter().map(|&f| parts[f]).collect();
        let t: Vec<usize> = traced.iter().map(|&f| parts[f]).collect();
        (kept_space.join_index(&k), traced_space.join_index(&t))
    };
    let coords: Vec<(usize, usize)> = (0..n).map(project).collect();
    for i in 0..n {
        for j in 0..n {
            if coords[i].1 == coords[j].1 {
                out[(coords[i].0, coords[j].0)] += rho.matrix[(i, j)];
            }
        }
    }
    DensityOperator::new(out, kept_space)
}

/// `⟨target|ρ|target⟩`, clamped to [0, 1].
pub fn fidelity(rho: &DensityOperator, target: &StateVector) -> Result<f64> {
    if rho.dim() != target.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), actual: target.dim() });
    }
    let t = &target.amplitudes;
    let f = (t.adjoint() * &rho.matrix * t)[(0, 0)].re;
    Ok(f.clamp(0.0, 1.0))
}

/// Operator that swaps two factors of equal dimension in a two-factor space.
pub fn swap_operator(dim: usize) -> DMatrix<Complex64> {
    let n = dim * dim;
    let mut m = DMatrix::from_element(n, n, ZERO);
    for a in 0..dim {
        for b in 0..dim {
            m[(b * dim + a, a * dim + b)] = ONE;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn plus(tag: &str) -> StateVector {
        StateVector::from_real(&[1.0, 1.0], Space::qubit(tag)).unwrap()
    }

    fn bell_singlet() -> StateVector {
        let space = Space::qubit("A").product(&Space::qubit("B"));
        StateVector::from_real(&[0.0, 1.0, -1.0, 0.0], space).unwrap()
    }

    #[test]
    fn tensor_of_basis_states() {
        let zero = StateVector::basis_state(Space::qubit(""), 0).unwrap();
        let one = StateVector::basis_state(Space::qubit(""), 1).unwrap();
        let s = tensor(&zero, &one).unwrap();
        assert_eq!(s.dim(), 4);
        assert_eq!(s.amplitude(1), c(1.0));
        assert_eq!(s.basis_labels()[1], "0,1");
    }

    #[test]
    fn tensor_of_plus_states_is_uniform() {
        let s = tensor(&plus("A"), &plus("B")).unwrap();
        for a in s.amplitudes() {
            assert!((a - c(0.5)).norm() < 1e-15);
        }
        assert_eq!(s.basis_labels(), vec!["0_A,0_B", "0_A,1_B", "1_A,0_B", "1_A,1_B"]);
    }

    #[test]
    fn tensor_rejects_overflow_and_unnormalized() {
        let big = StateVector::basis_state(Space::single((0..16).map(|i| i.to_string())).unwrap(), 0)
            .unwrap();
        let q = StateVector::basis_state(Space::qubit(""), 0).unwrap();
        let s = tensor(&big, &tensor(&q, &q).unwrap()).unwrap();
        assert_eq!(s.dim(), 64);
        assert!(matches!(tensor(&s, &q), Err(Error::DimensionOverflow { dim: 128, cap: 64 })));
        let raw = StateVector::unchecked(vec![c(2.0), c(0.0)], Space::qubit("")).unwrap();
        assert!(matches!(tensor(&raw, &q), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn apply_unitary_identity_and_x() {
        let s = plus("");
        let id = DMatrix::<Complex64>::identity(2, 2);
        assert_eq!(apply_unitary(&s, &id).unwrap(), s);
        let x = DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
        let zero = StateVector::basis_state(Space::qubit(""), 0).unwrap();
        let out = apply_unitary(&zero, &x).unwrap();
        assert_eq!(out.amplitudes(), &[c(0.0), c(1.0)]);
    }

    #[test]
    fn apply_unitary_single_photon_beam_splitter() {
        let h = FRAC_1_SQRT_2;
        let bs = DMatrix::from_row_slice(2, 2, &[c(h), c(h), c(h), c(-h)]);
        let port1 = StateVector::basis_state(Space::single(["a", "b"]).unwrap(), 0).unwrap();
        let out = apply_unitary(&port1, &bs).unwrap();
        assert!((out.amplitude(0) - c(h)).norm() < 1e-15);
        assert!((out.amplitude(1) - c(h)).norm() < 1e-15);
    }

    #[test]
    fn apply_unitary_errors() {
        let s = plus("");
        let bad = DMatrix::from_row_slice(2, 2, &[c(1.0), c(1.0), c(0.0), c(1.0)]);
        assert!(matches!(apply_unitary(&s, &bad), Err(Error::NotUnitary { .. })));
        let id3 = DMatrix::<Complex64>::identity(3, 3);
        assert!(matches!(apply_unitary(&s, &id3), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn partial_trace_of_product_state() {
        let zero_a = StateVector::basis_state(Space::qubit("A"), 0).unwrap();
        let zero_b = StateVector::basis_state(Space::qubit("B"), 0).unwrap();
        let rho = tensor(&zero_a, &zero_b).unwrap().to_density();
        let a = partial_trace(&rho, &[0]).unwrap();
        assert_eq!(a.matrix(), zero_a.to_density().matrix());
        assert_eq!(a.basis_labels(), vec!["0_A", "1_A"]);
    }

    #[test]
    fn partial_trace_of_bell_state_is_maximally_mixed() {
        let rho = bell_singlet().to_density();
        for keep in [[0usize], [1]] {
            let m = partial_trace(&rho, &keep).unwrap();
            assert!((m.population(0) - 0.5).abs() < 1e-15);
            assert!((m.population(1) - 0.5).abs() < 1e-15);
            assert!(m.entry(0, 1).norm() < 1e-15);
        }
    }

    #[test]
    fn partial_trace_to_scalar() {
        let rho = bell_singlet().to_density();
        let scalar = partial_trace(&rho, &[]).unwrap();
        assert_eq!(scalar.dim(), 1);
        assert!((scalar.trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn partial_trace_rejects_bad_indices() {
        let rho = bell_singlet().to_density();
        assert!(matches!(partial_trace(&rho, &[2]), Err(Error::Subsystems(_))));
        assert!(matches!(partial_trace(&rho, &[0, 0]), Err(Error::Subsystems(_))));
    }

    #[test]
    fn fidelity_examples() {
        let psi = bell_singlet();
        assert!((fidelity(&psi.to_density(), &psi).unwrap() - 1.0).abs() < 1e-15);
        let mixed = DensityOperator::maximally_mixed(psi.space().clone()).unwrap();
        assert!((fidelity(&mixed, &psi).unwrap() - 0.25).abs() < 1e-15);
        let q = plus("");
        assert!(matches!(fidelity(&mixed, &q), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn density_validation() {
        let space = Space::qubit("");
        assert!(DensityOperator::diagonal(&[0.6, 0.6], space.clone()).is_err());
        assert!(DensityOperator::diagonal(&[1.2, -0.2], space.clone()).is_err());
        let non_herm = DMatrix::from_row_slice(2, 2, &[c(0.5), c(0.1), c(0.0), c(0.5)]);
        assert!(DensityOperator::new(non_herm, space.clone()).is_err());
        assert!(DensityOperator::diagonal(&[0.85, 0.15], space).is_ok());
    }

    #[test]
    fn swap_operator_exchanges_factors() {
        let s = tensor(
            &StateVector::basis_state(Space::qubit("A"), 0).unwrap(),
            &StateVector::basis_state(Space::qubit("B"), 1).unwrap(),
        )
        .unwrap();
        let out = apply_unitary(&s, &swap_operator(2)).unwrap();
        assert_eq!(out.amplitude(2), c(1.0));
    }
}
