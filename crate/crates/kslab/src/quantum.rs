//! Floating-point checks of the quantum facts the coloring constraints
//! encode: spin-1 squared components have spectrum {0, 1, 1}, squared
//! components of an orthonormal triple commute and sum to 2·I, and the
//! two-particle spin-0 state correlates squared outcomes perfectly.
//!
//! Matrices are 3×3 and 9×9, so plain dense linear algebra with an
//! absolute tolerance of 1e-12 on max-entry norms is plenty. Directions
//! arrive as floats; exact rays convert via [`crate::geometry::Ray::unit_f64`].

use nalgebra::{Complex, Matrix3, SMatrix, SVector, Vector3};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::Error;

type C64 = Complex<f64>;
type Mat3 = Matrix3<C64>;
type Mat9 = SMatrix<C64, 9, 9>;
type Vec9 = SVector<C64, 9>;

/// Absolute tolerance used by every check in this module.
pub const TOLERANCE: f64 = 1e-12;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Spin-1 component along x in the basis where `S_z` is diagonal.
#[rustfmt::skip]
pub fn spin_x() -> Mat3 {
    let s = 1.0 / 2.0_f64.sqrt();
    Mat3::from_row_slice(&[
        c(0.0, 0.0), c(s, 0.0), c(0.0, 0.0),
        c(s, 0.0),   c(0.0, 0.0), c(s, 0.0),
        c(0.0, 0.0), c(s, 0.0), c(0.0, 0.0),
    ])
}

#[rustfmt::skip]
pub fn spin_y() -> Mat3 {
    let s = 1.0 / 2.0_f64.sqrt();
    Mat3::from_row_slice(&[
        c(0.0, 0.0), c(0.0, -s), c(0.0, 0.0),
        c(0.0, s),   c(0.0, 0.0), c(0.0, -s),
        c(0.0, 0.0), c(0.0, s), c(0.0, 0.0),
    ])
}

pub fn spin_z() -> Mat3 {
    Mat3::from_diagonal(&Vector3::new(c(1.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)))
}

/// Max absolute entry over real and imaginary parts.
pub fn max_entry_norm<const R: usize, const N: usize>(m: &SMatrix<C64, R, N>) -> f64 {
    m.iter()
        .map(|z| z.re.abs().max(z.im.abs()))
        .fold(0.0, f64::max)
}

fn norm3(n: [f64; 3]) -> f64 {
    (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt()
}

fn check_unit(n: [f64; 3]) -> Result<(), Error> {
    if (norm3(n) - 1.0).abs() > TOLERANCE {
        return Err(Error::NonUnitDirection);
    }
    Ok(())
}

/// Which component a spin operator measures.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpinLabel {
    X,
    Y,
    Z,
    Direction([f64; 3]),
}

/// The spin component `S_n = n_x S_x + n_y S_y + n_z S_z` for a unit
/// direction `n`, together with its squared operator.
#[derive(Clone, Debug)]
pub struct SpinOperator {
    label: SpinLabel,
    matrix: Mat3,
}

impl SpinOperator {
    pub fn x() -> Self {
        SpinOperator {
            label: SpinLabel::X,
            matrix: spin_x(),
        }
    }

    pub fn y() -> Self {
        SpinOperator {
            label: SpinLabel::Y,
            matrix: spin_y(),
        }
    }

    pub fn z() -> Self {
        SpinOperator {
            label: SpinLabel::Z,
            matrix: spin_z(),
        }
    }

    pub fn label(&self) -> SpinLabel {
        self.label
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.matrix
    }

    pub fn squared(&self) -> Mat3 {
        self.matrix * self.matrix
    }

    /// Hermiticity defect, `‖M − M†‖` in the max-entry norm.
    pub fn hermiticity_residual(&self) -> f64 {
        max_entry_norm(&(self.matrix - self.matrix.adjoint()))
    }

    /// Ascending eigenvalues of the squared operator.
    pub fn squared_eigenvalues(&self) -> [f64; 3] {
        let eig = self.squared().symmetric_eigen();
        let mut vals = [eig.eigenvalues[0], eig.eigenvalues[1], eig.eigenvalues[2]];
        vals.sort_by(f64::total_cmp);
        vals
    }

    /// Spectral projectors of the squared operator onto the eigenvalue
    /// groups near 0 and near 1, built from a numeric eigendecomposition.
    pub fn squared_projectors(&self) -> (Mat3, Mat3) {
        let eig = self.squared().symmetric_eigen();
        let mut p0 = Mat3::zeros();
        let mut p1 = Mat3::zeros();
        for i in 0..3 {
            let v = eig.eigenvectors.column(i);
            let proj = v * v.adjoint();
            if eig.eigenvalues[i] < 0.5 {
                p0 += proj;
            } else {
                p1 += proj;
            }
        }
        (p0, p1)
    }
}

/// Builds `S_n` for a unit direction `n`.
pub fn spin_component(n: [f64; 3]) -> Result<SpinOperator, Error> {
    check_unit(n)?;
    let matrix = spin_x() * c(n[0], 0.0) + spin_y() * c(n[1], 0.0) + spin_z() * c(n[2], 0.0);
    Ok(SpinOperator {
        label: SpinLabel::Direction(n),
        matrix,
    })
}

/// `‖S_x² + S_y² + S_z² − 2·I‖` for an orthonormal triple, in the
/// max-entry norm. Non-orthonormal triples are a domain error.
pub fn sum_rule_residual(x: [f64; 3], y: [f64; 3], z: [f64; 3]) -> Result<f64, Error> {
    for n in [x, y, z] {
        check_unit(n).map_err(|_| Error::NonOrthonormalTriple)?;
    }
    let dots = [
        x[0] * y[0] + x[1] * y[1] + x[2] * y[2],
        x[0] * z[0] + x[1] * z[1] + x[2] * z[2],
        y[0] * z[0] + y[1] * z[1] + y[2] * z[2],
    ];
    if dots.iter().any(|d| d.abs() > TOLERANCE) {
        return Err(Error::NonOrthonormalTriple);
    }
    let sum =
        spin_component(x)?.squared() + spin_component(y)?.squared() + spin_component(z)?.squared();
    let two_i = Mat3::identity() * c(2.0, 0.0);
    Ok(max_entry_norm(&(sum - two_i)))
}

/// `‖[S_a², S_b²]‖` in the max-entry norm. Vanishes (within tolerance)
/// exactly when the directions admit simultaneous measurement.
pub fn commutator_norm(a: &SpinOperator, b: &SpinOperator) -> f64 {
    let (sa, sb) = (a.squared(), b.squared());
    max_entry_norm(&(sa * sb - sb * sa))
}

/// The two-particle total-spin-0 state of two spin-1 particles, in the
/// product basis ordered |m⟩⊗|m'⟩ with m, m' = 1, 0, −1:
/// `(|1,−1⟩ − |0,0⟩ + |−1,1⟩)/√3`.
#[derive(Clone, Debug)]
pub struct SingletState {
    amplitudes: Vec9,
}

impl SingletState {
    pub fn new() -> Self {
        let s = 1.0 / 3.0_f64.sqrt();
        let mut amplitudes = Vec9::zeros();
        amplitudes[2] = c(s, 0.0); // |m=1⟩|m=−1⟩
        amplitudes[4] = c(-s, 0.0); // |m=0⟩|m=0⟩
        amplitudes[6] = c(s, 0.0); // |m=−1⟩|m=1⟩
        SingletState { amplitudes }
    }

    pub fn amplitudes(&self) -> &Vec9 {
        &self.amplitudes
    }

    pub fn norm_residual(&self) -> f64 {
        (self.amplitudes.norm() - 1.0).abs()
    }

    /// Expectation of the total spin squared, `⟨(S⊗I + I⊗S)²⟩`; zero for
    /// the spin-0 state.
    pub fn total_spin_squared_expectation(&self) -> f64 {
        let id = Mat3::identity();
        let mut total = Mat9::zeros();
        for s in [spin_x(), spin_y(), spin_z()] {
            let joint = s.kronecker(&id) + id.kronecker(&s);
            total += joint * joint;
        }
        expectation(&total, &self.amplitudes)
    }
}

impl Default for SingletState {
    fn default() -> Self {
        SingletState::new()
    }
}

fn expectation(m: &Mat9, psi: &Vec9) -> f64 {
    (psi.adjoint() * m * psi)[(0, 0)].re
}

/// Probability that both observers of the singlet obtain the same squared
/// value along `n`: `⟨ψ| P0⊗P0 + P1⊗P1 |ψ⟩`. Equal to 1 for every
/// direction.
pub fn twin_agreement_probability(n: [f64; 3]) -> Result<f64, Error> {
    twin_agreement_for_state(&SingletState::new().amplitudes, n)
}

/// Same agreement probability for an arbitrary normalized two-particle
/// state; the control case for non-singlet inputs.
pub fn twin_agreement_for_state(state: &Vec9, n: [f64; 3]) -> Result<f64, Error> {
    let op = spin_component(n)?;
    let (p0, p1) = op.squared_projectors();
    let both = p0.kronecker(&p0) + p1.kronecker(&p1);
    Ok(expectation(&both, state))
}

/// Product state |m⟩⊗|m'⟩ with m, m' indices 0..3 for m = 1, 0, −1.
pub fn product_basis_state(m_a: usize, m_b: usize) -> Vec9 {
    let mut v = Vec9::zeros();
    v[m_a * 3 + m_b] = c(1.0, 0.0);
    v
}

/// Uniform random unit vector from three standard normals.
pub fn random_unit_vector<R: Rng>(rng: &mut R) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        let norm = norm3(v);
        if norm > 1e-6 {
            return [v[0] / norm, v[1] / norm, v[2] / norm];
        }
    }
}

/// Random orthonormal triple: a random direction, a Gram-Schmidt partner,
/// and their cross product.
pub fn random_orthonormal_triple<R: Rng>(rng: &mut R) -> ([f64; 3], [f64; 3], [f64; 3]) {
    let u = random_unit_vector(rng);
    let v = loop {
        let w = random_unit_vector(rng);
        let d = u[0] * w[0] + u[1] * w[1] + u[2] * w[2];
        let raw = [w[0] - d * u[0], w[1] - d * u[1], w[2] - d * u[2]];
        let norm = norm3(raw);
        if norm > 1e-6 {
            break [raw[0] / norm, raw[1] / norm, raw[2] / norm];
        }
    };
    let w = [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ];
    (u, v, w)
}

/// Worst-case residuals over a seeded randomized sweep; the payload of the
/// CLI `quantum` command.
#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub trials: u64,
    pub seed: u64,
    pub tolerance: f64,
    /// Max `‖S_x²+S_y²+S_z²−2I‖` over random orthonormal triples.
    pub sum_rule_max_residual: f64,
    /// Max deviation of sorted eigenvalues of `S_n²` from (0, 1, 1).
    pub spectrum_max_deviation: f64,
    /// Max `‖P0 + P1 − I‖`.
    pub projector_completeness_max_residual: f64,
    /// Max `‖[S_a², S_b²]‖` over orthogonal pairs from the triples.
    pub commutator_max_norm: f64,
    /// Max `|agreement − 1|` for the singlet over random directions.
    pub twin_agreement_max_deviation: f64,
    pub within_tolerance: bool,
}

/// Runs all sweeps with a deterministic generator; identical inputs give
/// identical reports.
pub fn run_sweeps(trials: u64, seed: u64) -> Result<SweepReport, Error> {
    use rand::SeedableRng;
    if trials < 1 {
        return Err(Error::InvalidArgument("trials must be >= 1".to_string()));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);

    let mut sum_rule = 0.0_f64;
    let mut spectrum = 0.0_f64;
    let mut completeness = 0.0_f64;
    let mut commutator = 0.0_f64;
    let mut twin = 0.0_f64;

    for _ in 0..trials {
        let (u, v, w) = random_orthonormal_triple(&mut rng);
        sum_rule = sum_rule.max(sum_rule_residual(u, v, w)?);

        let op = spin_component(u)?;
        let eig = op.squared_eigenvalues();
        spectrum = spectrum
            .max((eig[0] - 0.0).abs())
            .max((eig[1] - 1.0).abs())
            .max((eig[2] - 1.0).abs());

        let (p0, p1) = op.squared_projectors();
        completeness = completeness.max(max_entry_norm(&(p0 + p1 - Mat3::identity())));

        let (ov, ow) = (spin_component(v)?, spin_component(w)?);
        commutator = commutator
            .max(commutator_norm(&op, &ov))
            .max(commutator_norm(&op, &ow))
            .max(commutator_norm(&ov, &ow));

        twin = twin.max((twin_agreement_probability(u)? - 1.0).abs());
    }

    let within = [sum_rule, spectrum, completeness, commutator, twin]
        .iter()
        .all(|&r| r < TOLERANCE);
    Ok(SweepReport {
        trials,
        seed,
        tolerance: TOLERANCE,
        sum_rule_max_residual: sum_rule,
        spectrum_max_deviation: spectrum,
        projector_completeness_max_residual: completeness,
        commutator_max_norm: commutator,
        twin_agreement_max_deviation: twin,
        within_tolerance: within,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spin_z_squared_is_diagonal() {
        let sz2 = SpinOperator::z().squared();
        let expect = Mat3::from_diagonal(&Vector3::new(c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)));
        assert!(max_entry_norm(&(sz2 - expect)) < TOLERANCE);
        let eig = SpinOperator::z().squared_eigenvalues();
        assert!((eig[0]).abs() < TOLERANCE);
        assert!((eig[1] - 1.0).abs() < TOLERANCE);
        assert!((eig[2] - 1.0).abs() < TOLERANCE);
    }

    #[test]
    fn spin_x_squared_trace_is_two() {
        let trace = SpinOperator::x().squared().trace();
        assert!((trace.re - 2.0).abs() < TOLERANCE);
        assert!(trace.im.abs() < TOLERANCE);
    }

    #[test]
    fn spin_operators_are_hermitian() {
        for op in [SpinOperator::x(), SpinOperator::y(), SpinOperator::z()] {
            assert!(op.hermiticity_residual() < TOLERANCE);
        }
        let tilted = spin_component([0.6, 0.0, 0.8]).unwrap();
        assert!(tilted.hermiticity_residual() < TOLERANCE);
    }

    #[test]
    fn non_unit_directions_are_rejected() {
        assert!(matches!(
            spin_component([1.0, 1.0, 0.0]),
            Err(Error::NonUnitDirection)
        ));
    }

    #[test]
    fn sum_rule_on_standard_basis() {
        let r = sum_rule_residual([1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]).unwrap();
        assert!(r < TOLERANCE);
    }

    #[test]
    fn skewed_triples_are_domain_errors() {
        // 60 degrees apart in the xy plane.
        let a = [1.0, 0.0, 0.0];
        let b = [0.5, 3.0_f64.sqrt() / 2.0, 0.0];
        assert!(matches!(
            sum_rule_residual(a, b, [0.0, 0.0, 1.0]),
            Err(Error::NonOrthonormalTriple)
        ));
    }

    #[test]
    fn orthogonal_squared_components_commute() {
        let (z, x) = (SpinOperator::z(), SpinOperator::x());
        assert!(commutator_norm(&z, &x) < TOLERANCE);
        assert!(commutator_norm(&z, &z) < TOLERANCE);
        // A non-orthogonal pair has a visibly nonzero commutator; computed
        // and reported, never asserted small.
        let s = 1.0 / 2.0_f64.sqrt();
        let skew = spin_component([s, 0.0, s]).unwrap();
        assert!(commutator_norm(&z, &skew) > 1e-6);
    }

    #[test]
    fn singlet_is_normalized_spin_zero() {
        let psi = SingletState::new();
        assert!(psi.norm_residual() < TOLERANCE);
        assert!(psi.total_spin_squared_expectation().abs() < TOLERANCE);
    }

    #[test]
    fn twin_agreement_along_z() {
        let p = twin_agreement_probability([0.0, 0.0, 1.0]).unwrap();
        assert!((p - 1.0).abs() < TOLERANCE);
    }

    #[test]
    fn product_state_control_case() {
        // |0⟩|0⟩ measured along x: computed and reported, not asserted 1.
        let state = product_basis_state(1, 1);
        let p = twin_agreement_for_state(&state, [1.0, 0.0, 0.0]).unwrap();
        assert!((0.0..=1.0 + TOLERANCE).contains(&p));
        // A tilted direction does break agreement for the product state.
        let tilted = [0.6, 0.0, 0.8];
        let q = twin_agreement_for_state(&state, tilted).unwrap();
        assert!(q < 1.0 - 1e-3);
    }

    #[test]
    fn sweeps_are_deterministic() {
        let a = run_sweeps(10, 7).unwrap();
        let b = run_sweeps(10, 7).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        assert!(a.within_tolerance);
    }
}
