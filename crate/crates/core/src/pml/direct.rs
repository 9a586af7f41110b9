use nalgebra::{DMatrix, DMatrixView, DVector};

use super::{check_samples, PmlCoefficients, SampleLocations};
use crate::error::{Error, Result};
use crate::reference_element::{QuadratureRule, ReferenceOperators};

/// Slots of the five stored matrices per component.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FusedOperator {
    /// `(M^a)^-1`
    InvMassA = 0,
    /// `(M^a)^-1 M^b`
    B = 1,
    /// `(M^a)^-1 M^c`
    C = 2,
    /// `M^-1 M^d`
    D = 3,
    /// `M^-1 M^(1/kappa)`
    InvKappa = 4,
}

impl FusedOperator {
    pub const ALL: [FusedOperator; 5] = [Self::InvMassA, Self::B, Self::C, Self::D, Self::InvKappa];
}

/// Dense per-element PML operators: five `N_p x N_p` matrices per component.
#[derive(Debug, Clone)]
pub struct DirectPmlOperators {
    pub n_nodes: usize,
    /// Mesh index of each PML element.
    pub elements: Vec<usize>,
    /// `[pml element][component][slot][N_p^2]`, column-major matrices.
    pub data: Vec<f64>,
}

/// Weighted mass matrix `J V^T diag(w alpha) V` on an assembly rule.
fn weighted_mass(v: &DMatrix<f64>, w: &[f64], alpha: &[f64], jacobian: f64) -> DMatrix<f64> {
    let mut scaled = v.clone();
    for (q, mut row) in scaled.row_iter_mut().enumerate() {
        row *= jacobian * w[q] * alpha[q];
    }
    v.transpose() * scaled
}

impl DirectPmlOperators {
    /// Assemble from nodal coefficient samples.
    ///
    /// The nodal interpolant of each coefficient is integrated exactly with a
    /// collapsed rule of degree `3p`.
    pub fn build(coeffs: &PmlCoefficients, jacobians: &[f64], ops: &ReferenceOperators) -> Result<Self> {
        if coeffs.locations != SampleLocations::Nodes || coeffs.n_samples != ops.n_nodes {
            return Err(Error::Contract("direct operators need coefficient samples at the nodes".into()));
        }
        let np = ops.n_nodes;
        let rule = QuadratureRule::collapsed(3 * ops.order);
        let v = ops.lagrange_at(&rule.points);
        let mut data = Vec::with_capacity(coeffs.elements.len() * 15 * np * np);
        for (i, &k) in coeffs.elements.iter().enumerate() {
            check_samples(coeffs.element_block(i), np, k)?;
            let jac = jacobians[k];
            let mass_k_inv = &ops.mass_inv / jac;
            for u in 0..3 {
                let mats: Vec<DMatrix<f64>> = (0..5)
                    .map(|alpha| {
                        let nodal = DVector::from_column_slice(coeffs.samples(i, u, alpha));
                        let at_q = &v * nodal;
                        weighted_mass(&v, &rule.weights, at_q.as_slice(), jac)
                    })
                    .collect();
                let inv_a = mats[0]
                    .clone()
                    .cholesky()
                    .ok_or_else(|| {
                        Error::Coefficient(format!(
                            "weighted mass matrix of a is not positive definite on element {k}, component {u}"
                        ))
                    })?
                    .inverse();
                let t_b = &inv_a * &mats[1];
                let t_c = &inv_a * &mats[2];
                let t_d = &mass_k_inv * &mats[3];
                let t_k = &mass_k_inv * &mats[4];
                for m in [&inv_a, &t_b, &t_c, &t_d, &t_k] {
                    data.extend_from_slice(m.as_slice());
                }
            }
        }
        Ok(Self {
            n_nodes: np,
            elements: coeffs.elements.clone(),
            data,
        })
    }

    pub fn n_elements(&self) -> usize {
        self.elements.len()
    }

    /// Number of stored floating-point values.
    pub fn stored_floats(&self) -> usize {
        self.data.len()
    }

    /// Column-major storage of one matrix.
    pub fn slice(&self, i: usize, u: usize, op: FusedOperator) -> &[f64] {
        let n2 = self.n_nodes * self.n_nodes;
        let start = ((i * 3 + u) * 5 + op as usize) * n2;
        &self.data[start..start + n2]
    }

    pub fn matrix(&self, i: usize, u: usize, op: FusedOperator) -> DMatrixView<'_, f64> {
        DMatrixView::from_slice(self.slice(i, u, op), self.n_nodes, self.n_nodes)
    }

    /// Apply one stored matrix to a nodal vector.
    pub fn apply(&self, i: usize, u: usize, op: FusedOperator, x: &[f64]) -> Vec<f64> {
        let y = self.matrix(i, u, op) * DVector::from_column_slice(x);
        y.as_slice().to_vec()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pml::{SamplingStrategy, COEF_A};
    use crate::reference_element::build_reference_operators;

    /// Coefficients with every sample of coefficient `alpha` equal to `vals[alpha]`.
    pub(crate) fn constant_coeffs(n: usize, vals: [[f64; 5]; 3], locations: SampleLocations) -> PmlCoefficients {
        let mut data = Vec::new();
        for u in 0..3 {
            for alpha in 0..5 {
                data.extend(std::iter::repeat(vals[u][alpha]).take(n));
            }
        }
        PmlCoefficients {
            strategy: SamplingStrategy::ElementConstantFarthestNode,
            locations,
            n_samples: n,
            elements: vec![0],
            data,
        }
    }

    fn max_diff(a: DMatrixView<f64>, b: &DMatrix<f64>) -> f64 {
        (a - b).abs().max() / b.abs().max().max(1e-300)
    }

    #[test]
    fn vacuum_gives_plain_mass_inverse() {
        for p in 1..=4 {
            let ops = build_reference_operators(p).unwrap();
            let jac = 0.37;
            let c = constant_coeffs(ops.n_nodes, [[1.0, 0.0, 0.0, 0.0, 1.0]; 3], SampleLocations::Nodes);
            let d = DirectPmlOperators::build(&c, &[jac], &ops).unwrap();
            let minv = &ops.mass_inv / jac;
            let eye = DMatrix::<f64>::identity(ops.n_nodes, ops.n_nodes);
            for u in 0..3 {
                assert!(max_diff(d.matrix(0, u, FusedOperator::InvMassA), &minv) < 1e-12);
                assert!(d.matrix(0, u, FusedOperator::B).abs().max() == 0.0);
                assert!(d.matrix(0, u, FusedOperator::C).abs().max() == 0.0);
                assert!(d.matrix(0, u, FusedOperator::D).abs().max() == 0.0);
                assert!(max_diff(d.matrix(0, u, FusedOperator::InvKappa), &eye) < 1e-12);
            }
        }
    }

    #[test]
    fn element_constant_closed_forms() {
        for p in 1..=5 {
            let ops = build_reference_operators(p).unwrap();
            let jac = 2.5e-7;
            let vals = [[2.0, 3.0e9, -4.0e19, 5.0e9, 0.5], [1.0, 1.0e10, 0.0, 0.0, 1.0], [0.5, -2.0e10, 7.0e20, 3.0e10, 0.25]];
            let c = constant_coeffs(ops.n_nodes, vals, SampleLocations::Nodes);
            let d = DirectPmlOperators::build(&c, &[jac], &ops).unwrap();
            let eye = DMatrix::<f64>::identity(ops.n_nodes, ops.n_nodes);
            for u in 0..3 {
                let [a, b, cc, dd, ik] = vals[u];
                assert!(max_diff(d.matrix(0, u, FusedOperator::InvMassA), &(&ops.mass_inv / (a * jac))) < 1e-12);
                assert!(max_diff(d.matrix(0, u, FusedOperator::B), &(&eye * (b / a))) < 1e-12);
                if cc != 0.0 {
                    assert!(max_diff(d.matrix(0, u, FusedOperator::C), &(&eye * (cc / a))) < 1e-12);
                }
                if dd != 0.0 {
                    assert!(max_diff(d.matrix(0, u, FusedOperator::D), &(&eye * dd)) < 1e-12);
                }
                assert!(max_diff(d.matrix(0, u, FusedOperator::InvKappa), &(&eye * ik)) < 1e-12);
            }
        }
    }

    #[test]
    fn storage_is_fifteen_square_blocks() {
        let ops = build_reference_operators(3).unwrap();
        let c = constant_coeffs(ops.n_nodes, [[1.0, 0.0, 0.0, 0.0, 1.0]; 3], SampleLocations::Nodes);
        let d = DirectPmlOperators::build(&c, &[1.0], &ops).unwrap();
        assert_eq!(d.stored_floats(), 6000);
    }

    #[test]
    fn non_positive_a_is_rejected() {
        let ops = build_reference_operators(2).unwrap();
        let mut c = constant_coeffs(ops.n_nodes, [[1.0, 0.0, 0.0, 0.0, 1.0]; 3], SampleLocations::Nodes);
        let n = ops.n_nodes;
        c.data[COEF_A * n] = -0.5;
        assert!(matches!(DirectPmlOperators::build(&c, &[1.0], &ops), Err(Error::Coefficient(_))));
        let c = constant_coeffs(n, [[1.0, 0.0, 0.0, 0.0, 1.0]; 3], SampleLocations::QuadPoints);
        assert!(matches!(DirectPmlOperators::build(&c, &[1.0], &ops), Err(Error::Contract(_))));
    }

    #[test]
    fn smooth_coefficient_matches_refined_oracle() {
        // a(r) = 1 + x/4 on the reference element (x = r).
        for p in 1..=4 {
            let ops = build_reference_operators(p).unwrap();
            let nodal: Vec<f64> = ops.nodes.iter().map(|n| 1.0 + n[0] / 4.0).collect();
            let mut c = constant_coeffs(ops.n_nodes, [[1.0, 0.0, 0.0, 0.0, 1.0]; 3], SampleLocations::Nodes);
            c.data[..ops.n_nodes].copy_from_slice(&nodal);
            let d = DirectPmlOperators::build(&c, &[1.0], &ops).unwrap();

            let fine = QuadratureRule::collapsed(4 * p + 4);
            let v = ops.lagrange_at(&fine.points);
            let a: Vec<f64> = fine.points.iter().map(|x| 1.0 + x[0] / 4.0).collect();
            let oracle = weighted_mass(&v, &fine.weights, &a, 1.0);
            let assembled = d.matrix(0, 0, FusedOperator::InvMassA).clone_owned().try_inverse().unwrap();
            let rel = (&assembled - &oracle).norm() / oracle.norm();
            assert!(rel < 1e-10, "p = {p}: {rel:e}");
        }
    }
}
