//! Integration weights for Lagrange interpolants on arbitrarily spaced nodes.
//!
//! Node positions are given in a shifted coordinate whose origin is the most
//! recent accepted abscissa. For every node `j` the basis polynomial
//! `phi_j(t) = prod_{k != j} (t - t_k)` is obtained by synthetic division of
//! the full node polynomial `Phi(t) = prod_k (t - t_k)` by `(t - t_j)`, then
//! integrated coefficient-wise over `[0, dx]` and normalised by `phi_j(t_j)`.
//! The normalisation is taken from the product form of `phi_j`, which stays
//! accurate when nodes cluster.
//!
//! The construction runs in units of the step (`t / dx`) and the weights are
//! scaled back by `dx` at the end, so the coefficient magnitudes do not depend
//! on the physical size of the abscissa.
//!
//! Dividing out a root that is large compared with the others cancels badly
//! when the recurrence runs down from the leading coefficient. The division
//! is therefore composite: high-degree quotient coefficients come from the
//! downward recurrence, low-degree ones from the upward recurrence starting at
//! the constant term, split according to how many roots are larger.

use crate::error::QuadratureError;

/// Largest number of nodes a single interpolant may use.
///
/// Equals the largest supported Adams-Bashforth order plus one (the
/// Adams-Moulton future node).
pub const MAX_NODES: usize = crate::config::MAX_ORDER + 1;

/// One integration weight per interpolation node, in units of the abscissa.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureWeights {
    weights: Vec<f64>,
    upper: f64,
}

impl QuadratureWeights {
    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// The upper integration limit the weights were built for.
    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `sum_j w_j * values_j`, where `values` yields one slice per node.
    pub fn apply<'a, I>(&self, values: I, out: &mut [f64])
    where
        I: IntoIterator<Item = &'a [f64]>,
    {
        out.iter_mut().for_each(|o| *o = 0.0);
        for (w, v) in self.weights.iter().zip(values) {
            for (o, &d) in out.iter_mut().zip(v) {
                *o += w * d;
            }
        }
    }
}

/// Coefficients (ascending powers) of `prod_k (t - roots_k)`.
pub(crate) fn node_polynomial(roots: &[f64]) -> Vec<f64> {
    let mut coeffs = Vec::with_capacity(roots.len() + 1);
    coeffs.push(1.0);
    for &root in roots {
        coeffs.push(0.0);
        for m in (1..coeffs.len()).rev() {
            coeffs[m] = coeffs[m - 1] - root * coeffs[m];
        }
        coeffs[0] *= -root;
    }
    coeffs
}

/// Divide `poly` (ascending powers) by `(t - root)`.
///
/// Returns the quotient and the remainder.
pub(crate) fn synthetic_division(poly: &[f64], root: f64) -> (Vec<f64>, f64) {
    let degree = poly.len() - 1;
    let mut quotient = vec![0.0; degree];
    let mut carry = poly[degree];
    for m in (0..degree).rev() {
        quotient[m] = carry;
        carry = poly[m] + root * carry;
    }
    (quotient, carry)
}

/// Quotient of `poly` by `(t - root)` when `poly(root) = 0`, stable for
/// roots of any relative size.
///
/// `larger` is the number of the other roots of `poly` whose magnitude exceeds
/// `|root|`.
pub(crate) fn deflate(poly: &[f64], root: f64, larger: usize) -> Vec<f64> {
    let (mut quotient, _) = synthetic_division(poly, root);
    let degree = quotient.len();
    let split = degree.saturating_sub(1 + larger);
    if split == 0 || root == 0.0 {
        return quotient;
    }
    // upward from the constant term for coefficients below the split
    let mut prev = 0.0;
    for m in 0..split {
        prev = (prev - poly[m]) / root;
        quotient[m] = prev;
    }
    quotient
}

/// `int_0^upper poly(t) dt` for a polynomial in ascending powers.
pub(crate) fn integrate_from_zero(poly: &[f64], upper: f64) -> f64 {
    poly.iter()
        .enumerate()
        .rev()
        .fold(0.0, |acc, (m, &c)| acc * upper + c / (m + 1) as f64)
        * upper
}

/// Weights `w_j = int_0^upper psi_j(t) dt` of the Lagrange basis through
/// `shifted_nodes`.
///
/// `shifted_nodes` are abscissae relative to the most recent accepted node,
/// in any order. The returned weights follow the same order.
pub fn quadrature_weights(
    shifted_nodes: &[f64],
    upper: f64,
) -> Result<QuadratureWeights, QuadratureError> {
    let count = shifted_nodes.len();
    if count == 0 {
        return Err(QuadratureError::Empty);
    }
    if count > MAX_NODES {
        return Err(QuadratureError::TooManyNodes {
            count,
            max: MAX_NODES,
        });
    }
    if !upper.is_finite() || upper == 0.0 {
        return Err(QuadratureError::BadUpperLimit(upper));
    }
    if shifted_nodes.iter().any(|t| !t.is_finite()) {
        return Err(QuadratureError::NonFiniteNode);
    }

    let scaled: Vec<f64> = shifted_nodes.iter().map(|&t| t / upper).collect();
    for (a, ta) in scaled.iter().enumerate() {
        for tb in &scaled[a + 1..] {
            if ta == tb {
                return Err(QuadratureError::DuplicateNode(ta * upper));
            }
        }
    }

    let full = node_polynomial(&scaled);
    let weights = scaled
        .iter()
        .enumerate()
        .map(|(j, &root)| {
            let (_, remainder) = synthetic_division(&full, root);
            // measured against the magnitude of the terms Horner summed
            let scale: f64 = full
                .iter()
                .rev()
                .fold(0.0, |acc, c| acc * root.abs() + c.abs());
            debug_assert!(
                remainder.abs() <= 1e-9 * scale,
                "synthetic division remainder {remainder:e} at root {root}"
            );
            let larger = scaled.iter().filter(|t| t.abs() > root.abs()).count();
            let basis = deflate(&full, root, larger);
            let norm: f64 = scaled
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != j)
                .map(|(_, &t)| root - t)
                .product();
            integrate_from_zero(&basis, 1.0) / norm * upper
        })
        .collect();

    Ok(QuadratureWeights { weights, upper })
}
