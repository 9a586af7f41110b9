//! Volume quadrature on the reference tetrahedron.

use super::basis::gauss_jacobi;
use super::quadrature_tables::{XG_DEGREE_10, XG_DEGREE_2, XG_DEGREE_4, XG_DEGREE_6, XG_DEGREE_8};
use crate::error::{Error, Result};

/// Volume of the bi-unit reference tetrahedron.
pub const REFERENCE_VOLUME: f64 = 4.0 / 3.0;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    /// Total polynomial degree integrated exactly.
    pub degree: usize,
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn n_points(&self) -> usize {
        self.weights.len()
    }

    fn from_table(degree: usize, table: &[[f64; 4]]) -> Self {
        Self {
            degree,
            points: table.iter().map(|row| [row[0], row[1], row[2]]).collect(),
            weights: table.iter().map(|row| row[3]).collect(),
        }
    }

    /// Xiao-Gimbutas rule of the given exact degree (2, 4, 6, 8 or 10).
    pub fn xiao_gimbutas(degree: usize) -> Result<Self> {
        let table: &[[f64; 4]] = match degree {
            2 => &XG_DEGREE_2,
            4 => &XG_DEGREE_4,
            6 => &XG_DEGREE_6,
            8 => &XG_DEGREE_8,
            10 => &XG_DEGREE_10,
            _ => {
                return Err(Error::Config(format!(
                    "no tetrahedral quadrature table of degree {degree}"
                )))
            }
        };
        Ok(Self::from_table(degree, table))
    }

    /// Collapsed Gauss-Jacobi product rule exact for total degree `degree`.
    ///
    /// Uses `n = degree / 2 + 1` points per collapsed direction, i.e. `n^3`
    /// points. Available for any degree; used for assembly and as an
    /// independent reference in tests.
    pub fn collapsed(degree: usize) -> Self {
        let n = degree / 2 + 1;
        let (xa, wa) = gauss_jacobi(0, 0, n);
        let (xb, wb) = gauss_jacobi(1, 0, n);
        let (xc, wc) = gauss_jacobi(2, 0, n);
        let mut points = Vec::with_capacity(n * n * n);
        let mut weights = Vec::with_capacity(n * n * n);
        for (a, wa) in xa.iter().zip(&wa) {
            for (b, wb) in xb.iter().zip(&wb) {
                for (c, wc) in xc.iter().zip(&wc) {
                    let r = 0.25 * (1.0 + a) * (1.0 - b) * (1.0 - c) - 1.0;
                    let s = 0.5 * (1.0 + b) * (1.0 - c) - 1.0;
                    points.push([r, s, *c]);
                    weights.push(wa * wb * wc / 8.0);
                }
            }
        }
        Self {
            degree: 2 * n - 1,
            points,
            weights,
        }
    }
}

/// Quadrature used by the weight-adjusted operators at polynomial order `order`:
/// the Xiao-Gimbutas rule of degree `2 * order`.
pub fn build_quadrature(order: usize) -> Result<QuadratureRule> {
    if !(1..=5).contains(&order) {
        return Err(Error::UnsupportedOrder {
            order,
            reason: "quadrature tables exist for orders 1 to 5".into(),
        });
    }
    QuadratureRule::xiao_gimbutas(2 * order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: usize) -> f64 {
        (1..=n).map(|v| v as f64).product()
    }

    /// Exact integral of x^a y^b z^c over the reference tetrahedron, where
    /// (x, y, z) = ((1+r)/2, (1+s)/2, (1+t)/2) are unit-simplex coordinates.
    fn exact_monomial(a: usize, b: usize, c: usize) -> f64 {
        8.0 * factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 3)
    }

    fn check_exactness(rule: &QuadratureRule, degree: usize) -> f64 {
        let mut worst: f64 = 0.0;
        for a in 0..=degree {
            for b in 0..=(degree - a) {
                for c in 0..=(degree - a - b) {
                    let q: f64 = rule
                        .points
                        .iter()
                        .zip(&rule.weights)
                        .map(|(p, w)| {
                            w * ((1.0 + p[0]) / 2.0).powi(a as i32)
                                * ((1.0 + p[1]) / 2.0).powi(b as i32)
                                * ((1.0 + p[2]) / 2.0).powi(c as i32)
                        })
                        .sum();
                    let exact = exact_monomial(a, b, c);
                    worst = worst.max((q - exact).abs() / exact);
                }
            }
        }
        worst
    }

    #[test]
    fn point_counts_match_published_list() {
        let counts: Vec<usize> = (1..=5).map(|p| build_quadrature(p).unwrap().n_points()).collect();
        assert_eq!(counts, vec![4, 11, 23, 44, 74]);
    }

    #[test]
    fn tables_are_exact_to_their_degree() {
        for p in 1..=5 {
            let rule = build_quadrature(p).unwrap();
            assert!(rule.weights.iter().all(|&w| w > 0.0));
            let sum: f64 = rule.weights.iter().sum();
            assert!((sum - REFERENCE_VOLUME).abs() < 1e-12);
            let err = check_exactness(&rule, rule.degree);
            assert!(err < 1e-12, "order {p}: relative error {err:e}");
        }
    }

    #[test]
    fn tables_are_not_exact_one_degree_higher() {
        // The published rules are exactly 2p, not 2p + 1.
        for p in 1..=5 {
            let rule = build_quadrature(p).unwrap();
            assert!(check_exactness(&rule, rule.degree + 1) > 1e-8, "order {p}");
        }
    }

    #[test]
    fn collapsed_rule_is_exact() {
        for degree in [1, 4, 9, 15, 20] {
            let rule = QuadratureRule::collapsed(degree);
            assert!(rule.degree >= degree);
            assert!(check_exactness(&rule, degree) < 1e-12);
        }
    }

    #[test]
    fn unsupported_order_is_rejected() {
        assert!(matches!(build_quadrature(0), Err(Error::UnsupportedOrder { .. })));
        assert!(matches!(build_quadrature(6), Err(Error::UnsupportedOrder { .. })));
    }
}
