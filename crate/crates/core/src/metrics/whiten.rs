use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, reassemble, CMatrix};

/// `Q^{-1/2}` of a Hermitian positive-definite matrix via its eigen-decomposition.
pub fn whiten(q: &CMatrix) -> Result<CMatrix> {
    let (values, vectors) = hermitian_eigen(q);
    if values[0] <= 0.0 || !values[0].is_finite() {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: values[0],
        });
    }
    let inv_sqrt: Vec<f64> = values.iter().map(|l| l.sqrt().recip()).collect();
    Ok(reassemble(&inv_sqrt, &vectors))
}

/// `Q^{-1/2} C`: the channel seen after whitening the interference plus noise.
pub fn whitened_channel(c: &CMatrix, q: &CMatrix) -> Result<CMatrix> {
    Ok(whiten(q)? * c)
}
