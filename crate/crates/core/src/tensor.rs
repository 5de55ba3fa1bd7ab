//! Dense complex matrices of shape `2^outputs x 2^inputs`.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use crate::label::{C64, ZERO};

/// A linear map between qubit spaces. Rows are indexed by outputs, columns by inputs,
/// with boundary slot 0 as the most significant bit.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor {
    inputs: usize,
    outputs: usize,
    data: Vec<C64>,
}

impl Tensor {
    pub fn zeros(inputs: usize, outputs: usize) -> Self {
        Tensor {
            inputs,
            outputs,
            data: vec![ZERO; 1 << (inputs + outputs)],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut t = Tensor::zeros(n, n);
        for i in 0..1 << n {
            t.set(i, i, C64::new(1.0, 0.0));
        }
        t
    }

    pub fn scalar(z: C64) -> Self {
        Tensor {
            inputs: 0,
            outputs: 0,
            data: vec![z],
        }
    }

    /// Builds from row-major data; panics if the length is not `2^(inputs+outputs)`.
    pub fn from_data(inputs: usize, outputs: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), 1 << (inputs + outputs), "tensor data length");
        Tensor {
            inputs,
            outputs,
            data,
        }
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(1, |x| x.len());
        let outputs = r.trailing_zeros() as usize;
        let inputs = c.trailing_zeros() as usize;
        assert!(r.is_power_of_two() && c.is_power_of_two(), "shape must be powers of two");
        let data = rows
            .iter()
            .flat_map(|row| row.iter().map(|x| C64::new(*x, 0.0)))
            .collect();
        Tensor::from_data(inputs, outputs, data)
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    pub fn rows(&self) -> usize {
        1 << self.outputs
    }

    pub fn cols(&self) -> usize {
        1 << self.inputs
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.cols() + col]
    }

    pub fn set(&mut self, row: usize, col: usize, z: C64) {
        let c = self.cols();
        self.data[row * c + col] = z;
    }

    /// The single entry of a scalar.
    pub fn as_scalar(&self) -> Option<C64> {
        (self.data.len() == 1).then(|| self.data[0])
    }

    /// `self` after `first`, the composite `self * first`.
    pub fn after(&self, first: &Tensor) -> Tensor {
        assert_eq!(self.inputs, first.outputs, "composition shape");
        let (r, k, c) = (self.rows(), self.cols(), first.cols());
        let mut out = vec![ZERO; r * c];
        for i in 0..r {
            for t in 0..k {
                let a = self.data[i * k + t];
                if a == ZERO {
                    continue;
                }
                for j in 0..c {
                    out[i * c + j] += a * first.data[t * c + j];
                }
            }
        }
        Tensor::from_data(first.inputs, self.outputs, out)
    }

    /// Kronecker product with `self` on the more significant slots.
    pub fn kron(&self, other: &Tensor) -> Tensor {
        let (r1, c1, r2, c2) = (self.rows(), self.cols(), other.rows(), other.cols());
        let mut out = vec![ZERO; r1 * r2 * c1 * c2];
        let c = c1 * c2;
        for i1 in 0..r1 {
            for j1 in 0..c1 {
                let a = self.data[i1 * c1 + j1];
                for i2 in 0..r2 {
                    for j2 in 0..c2 {
                        out[(i1 * r2 + i2) * c + j1 * c2 + j2] = a * other.data[i2 * c2 + j2];
                    }
                }
            }
        }
        Tensor::from_data(self.inputs + other.inputs, self.outputs + other.outputs, out)
    }

    pub fn transpose(&self) -> Tensor {
        let mut t = Tensor::zeros(self.outputs, self.inputs);
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn conj(&self) -> Tensor {
        Tensor {
            inputs: self.inputs,
            outputs: self.outputs,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn dagger(&self) -> Tensor {
        self.transpose().conj()
    }

    pub fn scale(&self, z: C64) -> Tensor {
        Tensor {
            inputs: self.inputs,
            outputs: self.outputs,
            data: self.data.iter().map(|x| x * z).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        assert_eq!(self.inputs, self.outputs, "trace of non-square map");
        (0..self.rows()).map(|i| self.get(i, i)).sum()
    }

    /// Largest entrywise modulus of `self - other`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &Tensor) -> f64 {
        if self.inputs != other.inputs || self.outputs != other.outputs {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Tensor, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }
}

impl Add for &Tensor {
    type Output = Tensor;
    fn add(self, rhs: &Tensor) -> Tensor {
        assert_eq!((self.inputs, self.outputs), (rhs.inputs, rhs.outputs));
        Tensor {
            inputs: self.inputs,
            outputs: self.outputs,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Tensor {
    type Output = Tensor;
    fn sub(self, rhs: &Tensor) -> Tensor {
        assert_eq!((self.inputs, self.outputs), (rhs.inputs, rhs.outputs));
        Tensor {
            inputs: self.inputs,
            outputs: self.outputs,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &Tensor {
    type Output = Tensor;
    /// Matrix product `self * rhs`.
    fn mul(self, rhs: &Tensor) -> Tensor {
        self.after(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_layout() {
        let x = Tensor::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let i = Tensor::identity(1);
        let xi = x.kron(&i);
        // X on the most significant qubit maps |00> to |10>.
        assert_eq!(xi.get(2, 0), C64::new(1.0, 0.0));
        assert_eq!(xi.get(1, 0), ZERO);
    }

    #[test]
    fn product_and_dagger() {
        let a = Tensor::from_data(1, 1, vec![C64::new(1.0, 1.0), ZERO, C64::new(2.0, 0.0), C64::new(0.0, -1.0)]);
        let p = &a.dagger() * &a;
        assert!((p.get(0, 1) - p.get(1, 0).conj()).norm() < 1e-15);
        assert_eq!(a.dagger().dagger(), a);
    }
}
