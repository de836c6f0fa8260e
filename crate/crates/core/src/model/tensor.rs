use super::VelocityModel;
use crate::error::{Error, Result};

/// Tensor-product extension of a 1-D model to `D` dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiDimModel {
    dimension: usize,
    velocities: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl MultiDimModel {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn velocities(&self) -> &[Vec<f64>] {
        &self.velocities
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `Σ w · Π_d v_dᵉᵈ` for the exponent vector `exponents`.
    pub fn moment(&self, exponents: &[u32]) -> f64 {
        assert_eq!(exponents.len(), self.dimension, "one exponent per dimension");
        self.velocities
            .iter()
            .zip(&self.weights)
            .map(|(v, w)| w * v.iter().zip(exponents).map(|(x, &e)| x.powi(e as i32)).product::<f64>())
            .sum()
    }
}

/// D-fold Cartesian product of the velocities with product weights.
/// Velocity tuples are ordered with the last axis varying fastest.
pub fn tensor_product_model(model: &VelocityModel, dimension: usize) -> Result<MultiDimModel> {
    if !(1..=3).contains(&dimension) {
        return Err(Error::InvalidArgument(format!("dimension must be 1, 2 or 3, got {dimension}")));
    }
    let v1 = model.velocities();
    let mut w1 = Vec::with_capacity(v1.len());
    w1.push(model.weights()[0]);
    for &w in &model.weights()[1..] {
        w1.push(w);
        w1.push(w);
    }
    let mut velocities = vec![Vec::new()];
    let mut weights = vec![1.0];
    for _ in 0..dimension {
        let mut nv = Vec::with_capacity(velocities.len() * v1.len());
        let mut nw = Vec::with_capacity(velocities.len() * v1.len());
        for (v, w) in velocities.iter().zip(&weights) {
            for (&x, &wx) in v1.iter().zip(&w1) {
                let mut t = v.clone();
                t.push(x);
                nv.push(t);
                nw.push(w * wx);
            }
        }
        velocities = nv;
        weights = nw;
    }
    Ok(MultiDimModel { dimension, velocities, weights })
}
