//! Density operators on up to eight qubits and single-qubit Kraus channels.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::clifford::{mat_adjoint, mat_mul, pauli_matrix, LocalClifford, Mat2};
use crate::dense::DenseState;
use crate::error::{Error, Result};
use crate::pauli::{Basis, Pauli, PauliObservable};
use crate::qcka::OutcomeSource;

pub const DENSITY_CAP: usize = 8;

const TRACE_TOL: f64 = 1e-12;
const HERMITIAN_TOL: f64 = 1e-12;
/// Eigenvalues down to this are floating-point dust, not negativity.
pub const PSD_FLOOR: f64 = -1e-10;

/// `ρ` on `n` qubits; basis index convention as for [`DenseState`].
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    n: usize,
    rho: DMatrix<Complex64>,
}

fn check_cap(n: usize) -> Result<()> {
    if n > DENSITY_CAP {
        Err(Error::DenseCapExceeded {
            n,
            cap: DENSITY_CAP,
        })
    } else {
        Ok(())
    }
}

/// Kraus operators of `ρ ↦ (1-λ) ρ + λ Tr(ρ) I/2`.
pub fn kraus_depolarizing(lambda: f64) -> Result<Vec<Mat2>> {
    check_probability(lambda)?;
    let mut ks = vec![scaled(pauli_matrix(Pauli::I), (1.0 - 0.75 * lambda).sqrt())];
    for p in [Pauli::X, Pauli::Y, Pauli::Z] {
        ks.push(scaled(pauli_matrix(p), (lambda / 4.0).sqrt()));
    }
    Ok(ks)
}

/// Kraus operators of `ρ ↦ (1-μ) ρ + μ ZρZ`.
pub fn kraus_dephasing(mu: f64) -> Result<Vec<Mat2>> {
    check_probability(mu)?;
    Ok(vec![
        scaled(pauli_matrix(Pauli::I), (1.0 - mu).sqrt()),
        scaled(pauli_matrix(Pauli::Z), mu.sqrt()),
    ])
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidProbability(p))
    }
}

fn scaled(m: Mat2, s: f64) -> Mat2 {
    m.map(|row| row.map(|z| z * s))
}

impl DensityOperator {
    pub fn from_pure(psi: &DenseState) -> Result<Self> {
        check_cap(psi.n())?;
        let a = psi.amplitudes();
        let d = a.len();
        Ok(DensityOperator {
            n: psi.n(),
            rho: DMatrix::from_fn(d, d, |i, j| a[i] * a[j].conj()),
        })
    }

    pub fn maximally_mixed(n: usize) -> Result<Self> {
        check_cap(n)?;
        let d = 1usize << n;
        Ok(DensityOperator {
            n,
            rho: DMatrix::identity(d, d) * Complex64::new(1.0 / d as f64, 0.0),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.rho
    }

    pub fn trace(&self) -> f64 {
        self.rho.trace().re
    }

    pub fn purity(&self) -> f64 {
        self.rho.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn is_hermitian(&self) -> bool {
        let d = self.rho.nrows();
        (0..d).all(|i| (i..d).all(|j| (self.rho[(i, j)] - self.rho[(j, i)].conj()).norm() <= HERMITIAN_TOL))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let h = (&self.rho + self.rho.adjoint()) * Complex64::new(0.5, 0.0);
        h.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Checks unit trace, Hermiticity and the eigenvalue floor.
    pub fn validate(&self) -> Result<()> {
        if (self.trace() - 1.0).abs() > TRACE_TOL {
            return Err(Error::NotNormalised(self.trace()));
        }
        if !self.is_hermitian() {
            return Err(Error::InvalidArgument("density operator is not Hermitian".into()));
        }
        let min = self.min_eigenvalue();
        if min < PSD_FLOOR {
            return Err(Error::InvalidArgument(format!(
                "density operator has eigenvalue {min:e}"
            )));
        }
        Ok(())
    }

    fn bit(&self, q: usize) -> usize {
        1 << (self.n - 1 - q)
    }

    /// `ρ ↦ (M_q) ρ (M_q)†`.
    pub fn conjugate_single(&mut self, q: usize, m: &Mat2) {
        let b = self.bit(q);
        let d = self.rho.nrows();
        for col in 0..d {
            for i in 0..d {
                if i & b == 0 {
                    let (a0, a1) = (self.rho[(i, col)], self.rho[(i | b, col)]);
                    self.rho[(i, col)] = m[0][0] * a0 + m[0][1] * a1;
                    self.rho[(i | b, col)] = m[1][0] * a0 + m[1][1] * a1;
                }
            }
        }
        let md = mat_adjoint(m);
        for row in 0..d {
            for j in 0..d {
                if j & b == 0 {
                    let (a0, a1) = (self.rho[(row, j)], self.rho[(row, j | b)]);
                    self.rho[(row, j)] = a0 * md[0][0] + a1 * md[1][0];
                    self.rho[(row, j | b)] = a0 * md[0][1] + a1 * md[1][1];
                }
            }
        }
    }

    /// `ρ ↦ Σ_k K_k ρ K_k†` on qubit `q`.
    pub fn apply_kraus(&mut self, q: usize, kraus: &[Mat2]) -> Result<()> {
        if q >= self.n {
            return Err(Error::VertexOutOfRange { vertex: q, n: self.n });
        }
        let mut acc = DMatrix::zeros(self.rho.nrows(), self.rho.ncols());
        for k in kraus {
            let mut term = self.clone();
            term.conjugate_single(q, k);
            acc += term.rho;
        }
        self.rho = acc;
        Ok(())
    }

    /// `ρ ↦ (1-w) ρ + w I/2^n`.
    pub fn mix_white(&mut self, w: f64) -> Result<()> {
        check_probability(w)?;
        let d = self.rho.nrows();
        self.rho *= Complex64::new(1.0 - w, 0.0);
        for i in 0..d {
            self.rho[(i, i)] += Complex64::new(w / d as f64, 0.0);
        }
        Ok(())
    }

    /// Diagonal in the product basis given by `bases`.
    pub fn distribution(&self, bases: &[Basis]) -> Result<Vec<f64>> {
        if bases.len() != self.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                found: bases.len(),
            });
        }
        let h = LocalClifford::hadamard().matrix();
        let sdg = LocalClifford::phase().inverse().matrix();
        let hsdg = mat_mul(&h, &sdg);
        let mut s = self.clone();
        for (q, b) in bases.iter().enumerate() {
            match b {
                Basis::Z => {}
                Basis::X => s.conjugate_single(q, &h),
                Basis::Y => s.conjugate_single(q, &hsdg),
            }
        }
        Ok((0..s.rho.nrows()).map(|i| s.rho[(i, i)].re.max(0.0)).collect())
    }
}

impl OutcomeSource for DensityOperator {
    fn qubits(&self) -> usize {
        self.n
    }

    fn outcome_distribution(&self, bases: &[Basis]) -> Result<Vec<f64>> {
        self.distribution(bases)
    }
}

/// `Tr(ρ O)` for a signed Pauli string.
pub fn expectation_mixed(rho: &DensityOperator, obs: &PauliObservable) -> Result<f64> {
    if obs.arity() != rho.n {
        return Err(Error::ArityMismatch {
            expected: rho.n,
            found: obs.arity(),
        });
    }
    let mut flip = 0usize;
    for (q, &p) in obs.letters().iter().enumerate() {
        if p.x_bit() {
            flip |= rho.bit(q);
        }
    }
    let i = Complex64::new(0.0, 1.0);
    let mut total = Complex64::new(0.0, 0.0);
    for j in 0..rho.rho.nrows() {
        // O|j⟩ = c_j |j ⊕ flip⟩
        let mut c = Complex64::new(1.0, 0.0);
        for (q, &p) in obs.letters().iter().enumerate() {
            let one = j & rho.bit(q) != 0;
            match p {
                Pauli::I | Pauli::X => {}
                Pauli::Z if one => c = -c,
                Pauli::Z => {}
                Pauli::Y if one => c *= -i,
                Pauli::Y => c *= i,
            }
        }
        total += c * rho.rho[(j, j ^ flip)];
    }
    Ok(if obs.negative() { -total.re } else { total.re })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bell() -> DensityOperator {
        DensityOperator::from_pure(&DenseState::ghz(2).unwrap()).unwrap()
    }

    #[test]
    fn pure_state_is_valid() {
        let rho = bell();
        rho.validate().unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn depolarizing_one_half_of_a_bell_pair() {
        let lambda = 0.3;
        let mut rho = bell();
        rho.apply_kraus(1, &kraus_depolarizing(lambda).unwrap()).unwrap();
        rho.validate().unwrap();
        let zz = expectation_mixed(&rho, &PauliObservable::parse("ZZ").unwrap()).unwrap();
        assert!((zz - (1.0 - lambda)).abs() < 1e-12);
        let d = rho.distribution(&[Basis::Z, Basis::Z]).unwrap();
        assert!((d[1] + d[2] - lambda / 2.0).abs() < 1e-12);
    }

    #[test]
    fn dephasing_spares_z() {
        let mut rho = bell();
        rho.apply_kraus(0, &kraus_dephasing(0.2).unwrap()).unwrap();
        let zz = expectation_mixed(&rho, &PauliObservable::parse("ZZ").unwrap()).unwrap();
        let xx = expectation_mixed(&rho, &PauliObservable::parse("XX").unwrap()).unwrap();
        let yy = expectation_mixed(&rho, &PauliObservable::parse("-YY").unwrap()).unwrap();
        assert!((zz - 1.0).abs() < 1e-12);
        assert!((xx - 0.6).abs() < 1e-12);
        assert!((yy - 0.6).abs() < 1e-12);
    }

    #[test]
    fn white_noise_scales_stabilizers() {
        let mut rho = DensityOperator::from_pure(&DenseState::ghz(4).unwrap()).unwrap();
        rho.mix_white(0.25).unwrap();
        let x4 = expectation_mixed(&rho, &PauliObservable::parse("XXXX").unwrap()).unwrap();
        assert!((x4 - 0.75).abs() < 1e-12);
        let id = expectation_mixed(&rho, &PauliObservable::identity(4)).unwrap();
        assert!((id - 1.0).abs() < 1e-12);
    }

    #[test]
    fn caps_and_arity() {
        assert!(DensityOperator::maximally_mixed(9).is_err());
        let rho = bell();
        assert!(expectation_mixed(&rho, &PauliObservable::parse("ZZZ").unwrap()).is_err());
        assert!(rho.distribution(&[Basis::Z]).is_err());
        assert!(kraus_depolarizing(1.2).is_err());
    }

    #[test]
    fn negative_eigenvalues_are_rejected() {
        let mut rho = bell();
        rho.rho[(0, 0)] = Complex64::new(-0.1, 0.0);
        rho.rho[(3, 3)] = Complex64::new(1.1, 0.0);
        assert!(rho.validate().is_err());
    }
}
