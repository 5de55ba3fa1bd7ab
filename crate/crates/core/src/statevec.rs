//! Dense state-vector simulation of parameterised circuits.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec;
use alloc::vec::Vec;

use crate::bp::{Ansatz, Gate, Pauli, PauliHamiltonian, PauliString};
use crate::error::Result;
use crate::label::{Binding, C64, I, ONE, ZERO};

type M2 = [[C64; 2]; 2];

pub fn rz_matrix(theta: f64) -> M2 {
    [[ONE, ZERO], [ZERO, C64::from_polar(1.0, theta)]]
}

/// `exp(i theta / 2) (cos(theta/2) I - i sin(theta/2) X)`.
pub fn rx_matrix(theta: f64) -> M2 {
    let e = C64::from_polar(1.0, theta / 2.0);
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    [[e * c, -I * e * s], [-I * e * s, e * c]]
}

pub fn h_matrix() -> M2 {
    let s = C64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[s, s], [s, -s]]
}

/// Amplitudes of `n` qubits, qubit 0 most significant.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<C64>,
}

impl StateVector {
    pub fn zero(n: usize) -> Self {
        let mut amps = vec![ZERO; 1 << n];
        amps[0] = ONE;
        StateVector { n, amps }
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    fn mask(&self, q: usize) -> usize {
        1 << (self.n - 1 - q)
    }

    pub fn apply_1q(&mut self, q: usize, m: &M2) {
        let bit = self.mask(q);
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a, b) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = m[0][0] * a + m[0][1] * b;
                self.amps[i | bit] = m[1][0] * a + m[1][1] * b;
            }
        }
    }

    pub fn apply_cnot(&mut self, c: usize, t: usize) {
        let (cb, tb) = (self.mask(c), self.mask(t));
        for i in 0..self.amps.len() {
            if i & cb != 0 && i & tb == 0 {
                self.amps.swap(i, i | tb);
            }
        }
    }

    pub fn apply_cz(&mut self, a: usize, b: usize) {
        let (ab, bb) = (self.mask(a), self.mask(b));
        for (i, z) in self.amps.iter_mut().enumerate() {
            if i & ab != 0 && i & bb != 0 {
                *z = -*z;
            }
        }
    }

    pub fn apply_gate(&mut self, g: &Gate, binding: &Binding) -> Result<()> {
        match g {
            Gate::Rz(q, p) => self.apply_1q(*q, &rz_matrix(binding.require(p)?)),
            Gate::Rx(q, p) => self.apply_1q(*q, &rx_matrix(binding.require(p)?)),
            Gate::RzFixed(q, a) => self.apply_1q(*q, &rz_matrix(*a)),
            Gate::RxFixed(q, a) => self.apply_1q(*q, &rx_matrix(*a)),
            Gate::H(q) => self.apply_1q(*q, &h_matrix()),
            Gate::Cnot(c, t) => self.apply_cnot(*c, *t),
            Gate::Cz(a, b) => self.apply_cz(*a, *b),
        }
        Ok(())
    }

    /// `<psi| P |psi>`.
    pub fn pauli_expectation(&self, p: &PauliString) -> C64 {
        let mut x_mask = 0;
        let mut z_mask = 0;
        let mut phase = ONE;
        for (q, s) in p.0.iter().enumerate() {
            let b = self.mask(q);
            match s {
                Pauli::I => {}
                Pauli::X => x_mask |= b,
                Pauli::Z => z_mask |= b,
                Pauli::Y => {
                    x_mask |= b;
                    z_mask |= b;
                    phase *= I;
                }
            }
        }
        // P |i> = phase * (-1)^{|i & z|} |i ^ x>, with Y = i X Z.
        let mut acc = ZERO;
        for (i, a) in self.amps.iter().enumerate() {
            let sign = if (i & z_mask).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            acc += self.amps[i ^ x_mask].conj() * a * sign;
        }
        acc * phase
    }

    pub fn expectation(&self, h: &PauliHamiltonian) -> f64 {
        h.terms
            .iter()
            .map(|(w, p)| w * self.pauli_expectation(p).re)
            .sum()
    }
}

pub fn simulate(a: &Ansatz, binding: &Binding) -> Result<StateVector> {
    let mut s = StateVector::zero(a.n_qubits());
    for g in a.gates() {
        s.apply_gate(g, binding)?;
    }
    Ok(s)
}

/// The cost `<0| U^dag H U |0>` by direct simulation.
pub fn cost(a: &Ansatz, h: &PauliHamiltonian, binding: &Binding) -> Result<f64> {
    Ok(simulate(a, binding)?.expectation(h))
}

/// Partial derivative of the cost by the two-term parameter shift.
pub fn shift_gradient(a: &Ansatz, h: &PauliHamiltonian, binding: &Binding, param: &str) -> Result<f64> {
    let x = binding.require(&param.into())?;
    let q = core::f64::consts::FRAC_PI_2;
    let up = cost(a, h, &binding.clone().with(param, x + q))?;
    let down = cost(a, h, &binding.clone().with(param, x - q))?;
    Ok(0.5 * (up - down))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_correlations() {
        let mut s = StateVector::zero(2);
        s.apply_1q(0, &h_matrix());
        s.apply_cnot(0, 1);
        let zz = PauliString::parse("ZZ").unwrap();
        let xx = PauliString::parse("XX").unwrap();
        let yy = PauliString::parse("YY").unwrap();
        assert!((s.pauli_expectation(&zz).re - 1.0).abs() < 1e-14);
        assert!((s.pauli_expectation(&xx).re - 1.0).abs() < 1e-14);
        assert!((s.pauli_expectation(&yy).re + 1.0).abs() < 1e-14);
    }

    #[test]
    fn y_on_plus_i() {
        let mut s = StateVector::zero(1);
        s.apply_1q(0, &h_matrix());
        s.apply_1q(0, &rz_matrix(core::f64::consts::FRAC_PI_2));
        let y = PauliString::parse("Y").unwrap();
        assert!((s.pauli_expectation(&y).re - 1.0).abs() < 1e-14);
    }
}
