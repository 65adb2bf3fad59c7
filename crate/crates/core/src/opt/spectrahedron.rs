use crate::linalg::{hermitian_eigen, reassemble, CMatrix};

/// Frobenius-nearest point of `{X ⪰ 0, tr X <= budget}`.
///
/// Projects the eigenvalues onto `{l >= 0, sum l <= budget}`: clip at zero and,
/// if the sum still exceeds the budget, subtract the uniform shift found by the
/// sorted-threshold rule and clip again.
pub fn project_spectrahedron(w: &CMatrix, budget: f64) -> CMatrix {
    let (values, vectors) = hermitian_eigen(w);
    let projected = project_eigenvalues(&values, budget);
    reassemble(&projected, &vectors)
}

pub(crate) fn project_eigenvalues(values: &[f64], budget: f64) -> Vec<f64> {
    let clipped: Vec<f64> = values.iter().map(|&l| l.max(0.0)).collect();
    if clipped.iter().sum::<f64>() <= budget {
        return clipped;
    }
    let mut sorted = clipped.clone();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut prefix = 0.0;
    let mut shift = 0.0;
    for (j, &u) in sorted.iter().enumerate() {
        prefix += u;
        let t = (prefix - budget) / (j + 1) as f64;
        if u - t > 0.0 {
            shift = t;
        }
    }
    clipped.iter().map(|&l| (l - shift).max(0.0)).collect()
}
