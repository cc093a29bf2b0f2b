//! Dense state vectors for small qubit counts, used as a verification oracle.
//!
//! Qubit `q` of an `n`-qubit state is bit `n - 1 - q` of the basis index, so
//! the textual bitstring `b_0 b_1 ... b_{n-1}` reads in qubit order.

use num_complex::Complex64;

use crate::clifford::{mat_mul, pauli_matrix, Mat2};
use crate::error::{Error, Result};
use crate::pauli::{Basis, Pauli, PauliObservable};

pub const DENSE_CAP: usize = 12;

const NORM_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    n: usize,
    amps: Vec<Complex64>,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

impl DenseState {
    fn check_cap(n: usize) -> Result<()> {
        if n > DENSE_CAP {
            Err(Error::DenseCapExceeded { n, cap: DENSE_CAP })
        } else {
            Ok(())
        }
    }

    /// `|0...0⟩`.
    pub fn zero(n: usize) -> Result<Self> {
        Self::check_cap(n)?;
        let mut amps = vec![c(0.0); 1 << n];
        amps[0] = c(1.0);
        Ok(DenseState { n, amps })
    }

    /// `|+⟩^{⊗n}`.
    pub fn plus(n: usize) -> Result<Self> {
        Self::check_cap(n)?;
        let a = ((1u64 << n) as f64).sqrt().recip();
        Ok(DenseState {
            n,
            amps: vec![c(a); 1 << n],
        })
    }

    /// `(|0...0⟩ + |1...1⟩)/√2`.
    pub fn ghz(n: usize) -> Result<Self> {
        Self::check_cap(n)?;
        let mut amps = vec![c(0.0); 1 << n];
        amps[0] = c(std::f64::consts::FRAC_1_SQRT_2);
        amps[(1 << n) - 1] = c(std::f64::consts::FRAC_1_SQRT_2);
        Ok(DenseState { n, amps })
    }

    /// Wraps amplitudes, requiring unit norm.
    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        Self::check_cap(n)?;
        if amps.len() != 1 << n {
            return Err(Error::LengthMismatch(format!(
                "{} amplitudes for {n} qubits",
                amps.len()
            )));
        }
        let s = DenseState { n, amps };
        let norm = s.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalised(norm));
        }
        Ok(s)
    }

    /// Like [`DenseState::from_amplitudes`] but rescales to unit norm.
    pub fn normalized(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        Self::check_cap(n)?;
        let mut s = DenseState { n, amps };
        s.renormalize()?;
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn renormalize(&mut self) -> Result<f64> {
        let p = self.norm_sqr();
        if p < 1e-300 {
            return Err(Error::NotNormalised(p));
        }
        let s = p.sqrt().recip();
        for a in &mut self.amps {
            *a *= s;
        }
        Ok(p)
    }

    fn bit(&self, q: usize) -> usize {
        1 << (self.n - 1 - q)
    }

    pub fn scale(&mut self, s: Complex64) {
        for a in &mut self.amps {
            *a *= s;
        }
    }

    /// Applies a 2×2 matrix (not necessarily unitary) to qubit `q`.
    pub fn apply_single(&mut self, q: usize, m: &Mat2) {
        let b = self.bit(q);
        for i in 0..self.amps.len() {
            if i & b == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | b]);
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[i | b] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    pub fn apply_pauli(&mut self, q: usize, p: Pauli) {
        if p != Pauli::I {
            self.apply_single(q, &pauli_matrix(p));
        }
    }

    pub fn apply_cz(&mut self, a: usize, b: usize) {
        let m = self.bit(a) | self.bit(b);
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & m == m {
                *amp = -*amp;
            }
        }
    }

    /// Zeroes every amplitude whose basis index fails `keep`; returns the
    /// retained probability and renormalizes.
    pub fn postselect(&mut self, keep: impl Fn(usize) -> bool) -> Result<f64> {
        for (i, a) in self.amps.iter_mut().enumerate() {
            if !keep(i) {
                *a = c(0.0);
            }
        }
        self.renormalize()
    }

    /// Bits of basis index `i` in qubit order.
    pub fn index_bits(&self, i: usize) -> Vec<u8> {
        (0..self.n).map(|q| ((i & self.bit(q)) != 0) as u8).collect()
    }

    /// Projects qubit `q` onto the `(-1)^outcome` eigenspace of `basis`,
    /// renormalizes, and returns the outcome probability.
    pub fn project(&mut self, q: usize, basis: Basis, outcome: u8) -> Result<f64> {
        let p = pauli_matrix(basis.pauli());
        let s = if outcome == 0 { 0.5 } else { -0.5 };
        let proj = [
            [c(0.5) + p[0][0] * s, p[0][1] * s],
            [p[1][0] * s, c(0.5) + p[1][1] * s],
        ];
        self.apply_single(q, &proj);
        let prob = self.norm_sqr();
        if prob < 1e-12 {
            return Err(Error::ZeroProbabilityOutcome {
                vertex: q,
                basis: basis.to_char(),
                outcome,
            });
        }
        self.renormalize()?;
        Ok(prob)
    }

    /// Probability of `outcome` when measuring qubit `q` in `basis`.
    pub fn outcome_probability(&self, q: usize, basis: Basis, outcome: u8) -> f64 {
        let mut s = self.clone();
        let p = pauli_matrix(basis.pauli());
        let sg = if outcome == 0 { 0.5 } else { -0.5 };
        let proj = [
            [c(0.5) + p[0][0] * sg, p[0][1] * sg],
            [p[1][0] * sg, c(0.5) + p[1][1] * sg],
        ];
        s.apply_single(q, &proj);
        s.norm_sqr()
    }

    pub fn inner(&self, other: &DenseState) -> Result<Complex64> {
        if self.n != other.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &DenseState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Applies every letter of `obs` (with its sign) to a copy of the state.
    fn apply_observable(&self, obs: &PauliObservable) -> DenseState {
        let mut s = self.clone();
        for (q, &p) in obs.letters().iter().enumerate() {
            s.apply_pauli(q, p);
        }
        if obs.negative() {
            s.scale(c(-1.0));
        }
        s
    }

    /// `⟨ψ|O|ψ⟩` for a signed Pauli product.
    pub fn expectation(&self, obs: &PauliObservable) -> Result<f64> {
        if obs.arity() != self.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                found: obs.arity(),
            });
        }
        Ok(self.inner(&self.apply_observable(obs))?.re)
    }

    /// Joint outcome distribution when each qubit is measured in `bases[q]`.
    /// Entry `i` is the probability of the bitstring encoded by index `i`.
    pub fn distribution(&self, bases: &[Basis]) -> Result<Vec<f64>> {
        if bases.len() != self.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                found: bases.len(),
            });
        }
        let mut s = self.clone();
        let h = crate::clifford::LocalClifford::hadamard().matrix();
        let sdg = [[c(1.0), c(0.0)], [c(0.0), Complex64::new(0.0, -1.0)]];
        let hsdg = mat_mul(&h, &sdg);
        for (q, b) in bases.iter().enumerate() {
            match b {
                Basis::Z => {}
                Basis::X => s.apply_single(q, &h),
                Basis::Y => s.apply_single(q, &hsdg),
            }
        }
        Ok(s.amps.iter().map(|a| a.norm_sqr()).collect())
    }

    /// `⟨φ|ρ_A|φ⟩` where `ρ_A` is the reduced state on the qubits in `subset`
    /// (ascending order) and `target` is a pure state on those qubits.
    pub fn subsystem_fidelity(&self, subset: u32, target: &DenseState) -> Result<f64> {
        let a: Vec<usize> = (0..self.n).filter(|&q| subset & (1 << q) != 0).collect();
        if a.len() != target.n {
            return Err(Error::ArityMismatch {
                expected: a.len(),
                found: target.n,
            });
        }
        let a_mask: usize = a.iter().map(|&q| self.bit(q)).sum();
        let mut overlaps: std::collections::BTreeMap<usize, Complex64> = Default::default();
        for (i, amp) in self.amps.iter().enumerate() {
            let ia = a
                .iter()
                .fold(0usize, |acc, &q| (acc << 1) | ((i & self.bit(q)) != 0) as usize);
            *overlaps.entry(i & !a_mask).or_default() += target.amps[ia].conj() * amp;
        }
        Ok(overlaps.values().map(|z| z.norm_sqr()).sum())
    }

    /// Purity `Tr ρ_A²` of the reduced state on the qubits in `subset`
    /// (bit `q` of `subset` selects qubit `q`).
    pub fn reduced_purity(&self, subset: u32) -> f64 {
        let a_qubits: Vec<usize> = (0..self.n).filter(|&q| subset & (1 << q) != 0).collect();
        let b_qubits: Vec<usize> = (0..self.n).filter(|&q| subset & (1 << q) == 0).collect();
        let (da, db) = (1usize << a_qubits.len(), 1usize << b_qubits.len());
        let index = |ia: usize, ib: usize| -> usize {
            let mut i = 0;
            for (k, &q) in a_qubits.iter().enumerate() {
                if ia & (1 << (a_qubits.len() - 1 - k)) != 0 {
                    i |= self.bit(q);
                }
            }
            for (k, &q) in b_qubits.iter().enumerate() {
                if ib & (1 << (b_qubits.len() - 1 - k)) != 0 {
                    i |= self.bit(q);
                }
            }
            i
        };
        let mut rho = vec![c(0.0); da * da];
        for i in 0..da {
            for j in 0..da {
                rho[i * da + j] = (0..db)
                    .map(|k| self.amps[index(i, k)] * self.amps[index(j, k)].conj())
                    .sum();
            }
        }
        rho.iter().map(|x| x.norm_sqr()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plus_and_cz_give_two_vertex_graph_state() {
        let mut s = DenseState::plus(2).unwrap();
        s.apply_cz(0, 1);
        let a = s.amplitudes();
        assert!((a[0].re - 0.5).abs() < 1e-15);
        assert!((a[1].re - 0.5).abs() < 1e-15);
        assert!((a[2].re - 0.5).abs() < 1e-15);
        assert!((a[3].re + 0.5).abs() < 1e-15);
    }

    #[test]
    fn bell_and_ghz_expectations() {
        let bell = DenseState::ghz(2).unwrap();
        let zz = PauliObservable::parse("ZZ").unwrap();
        assert!((bell.expectation(&zz).unwrap() - 1.0).abs() < 1e-12);
        let ghz = DenseState::ghz(4).unwrap();
        let xxxx = PauliObservable::parse("XXXX").unwrap();
        assert!((ghz.expectation(&xxxx).unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(
            ghz.expectation(&zz),
            Err(Error::ArityMismatch { expected: 4, found: 2 })
        ));
    }

    #[test]
    fn projection_probabilities() {
        let mut s = DenseState::ghz(3).unwrap();
        assert!((s.outcome_probability(1, Basis::Z, 1) - 0.5).abs() < 1e-12);
        let p = s.project(1, Basis::Z, 1).unwrap();
        assert!((p - 0.5).abs() < 1e-12);
        assert!(s.project(0, Basis::Z, 0).is_err());
    }

    #[test]
    fn distribution_in_rotated_bases() {
        let ghz = DenseState::ghz(3).unwrap();
        let d = ghz.distribution(&[Basis::X; 3]).unwrap();
        for (i, p) in d.iter().enumerate() {
            let even = (i as u32).count_ones() % 2 == 0;
            assert!((p - if even { 0.25 } else { 0.0 }).abs() < 1e-12);
        }
        // GHZ_3 is stabilized by -XYY
        let d = ghz.distribution(&[Basis::X, Basis::Y, Basis::Y]).unwrap();
        for (i, p) in d.iter().enumerate() {
            let odd = (i as u32).count_ones() % 2 == 1;
            assert!((p - if odd { 0.25 } else { 0.0 }).abs() < 1e-12);
        }
    }

    #[test]
    fn reduced_purity_of_bell_pairs() {
        let bell = DenseState::ghz(2).unwrap();
        assert!((bell.reduced_purity(0b01) - 0.5).abs() < 1e-12);
        assert!((bell.reduced_purity(0b11) - 1.0).abs() < 1e-12);
        assert!(DenseState::zero(13).is_err());
    }
}
