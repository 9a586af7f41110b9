use nalgebra::{DMatrix, DVector};

use super::{check_samples, FusedOperator, PmlCoefficients, SampleLocations, COEF_A};
use crate::error::{Error, Result};
use crate::reference_element::ReferenceOperators;

/// Weight-adjusted PML operators: only diagonal coefficient samples at the
/// quadrature points are stored; every product goes through the shared
/// reference interpolation `V_q` and projection `P_q`.
#[derive(Debug, Clone)]
pub struct WaaPmlOperators {
    pub n_quad: usize,
    /// Mesh index of each PML element.
    pub elements: Vec<usize>,
    /// `[pml element][component][1/a, b, c, d, 1/kappa][N_q]`.
    pub samples: Vec<f64>,
}

impl WaaPmlOperators {
    pub fn build(coeffs: &PmlCoefficients, ops: &ReferenceOperators) -> Result<Self> {
        if coeffs.locations != SampleLocations::QuadPoints || coeffs.n_samples != ops.n_quad() {
            return Err(Error::Contract(
                "weight-adjusted operators need coefficient samples at the quadrature points".into(),
            ));
        }
        let nq = ops.n_quad();
        let mut samples = coeffs.data.clone();
        for (i, &k) in coeffs.elements.iter().enumerate() {
            let block = &mut samples[i * 15 * nq..(i + 1) * 15 * nq];
            check_samples(block, nq, k)?;
            for u in 0..3 {
                for x in &mut block[(u * 5 + COEF_A) * nq..(u * 5 + COEF_A + 1) * nq] {
                    *x = 1.0 / *x;
                }
            }
        }
        Ok(Self {
            n_quad: nq,
            elements: coeffs.elements.clone(),
            samples,
        })
    }

    pub fn n_elements(&self) -> usize {
        self.elements.len()
    }

    /// Per-element floats stored by this structure (the shared `V_q`, `P_q`
    /// belong to the reference operators).
    pub fn stored_floats(&self) -> usize {
        self.samples.len()
    }

    /// Diagonal samples in slot `op` (`InvMassA` holds `1/a`).
    pub fn diag(&self, i: usize, u: usize, op: FusedOperator) -> &[f64] {
        let start = ((i * 3 + u) * 5 + op as usize) * self.n_quad;
        &self.samples[start..start + self.n_quad]
    }

    /// Apply one fused operator matrix-free:
    ///
    /// * `InvMassA`: `P_q diag(1/a) V_q M_k^-1`
    /// * `B`, `C`: `P_q diag(1/a) V_q P_q diag(alpha) V_q`
    /// * `D`, `InvKappa`: `P_q diag(alpha) V_q`
    pub fn apply(&self, ops: &ReferenceOperators, jacobian: f64, i: usize, u: usize, op: FusedOperator, x: &[f64]) -> Vec<f64> {
        let x = DVector::from_column_slice(x);
        let vq = &ops.interp_to_quad;
        let pq = &ops.project_from_quad;
        let scale = |v: DVector<f64>, d: &[f64]| DVector::from_iterator(v.len(), v.iter().zip(d).map(|(a, b)| a * b));
        let inv_a = self.diag(i, u, FusedOperator::InvMassA);
        let y = match op {
            FusedOperator::InvMassA => {
                let m = &ops.mass_inv * x / jacobian;
                pq * scale(vq * m, inv_a)
            }
            FusedOperator::B | FusedOperator::C => {
                let inner = pq * scale(vq * x, self.diag(i, u, op));
                pq * scale(vq * inner, inv_a)
            }
            FusedOperator::D | FusedOperator::InvKappa => pq * scale(vq * x, self.diag(i, u, op)),
        };
        y.as_slice().to_vec()
    }

    /// Dense form of one fused operator, for tests and diagnostics only.
    pub fn dense(&self, ops: &ReferenceOperators, jacobian: f64, i: usize, u: usize, op: FusedOperator) -> DMatrix<f64> {
        let n = ops.n_nodes;
        let mut m = DMatrix::zeros(n, n);
        let mut e = vec![0.0; n];
        for j in 0..n {
            e[j] = 1.0;
            let col = self.apply(ops, jacobian, i, u, op, &e);
            m.column_mut(j).copy_from_slice(&col);
            e[j] = 0.0;
        }
        m
    }
}
