use std::f64::consts::LN_2;

use crate::linalg::{softmax_in_place, CVector, C64};
use crate::metrics::{QuadFormCache, Side};

/// Conjugate (Wirtinger) gradient of the unclamped ASR:
///
/// `(p1/K) sum_i [ sum_j w^b_ij B_ij v - sum_j w^e_ij E_ij v ] / (2 ln 2)`
///
/// where `w_ij` are the normalized weights `exp(-p1 v^H A_ij v / 2) / kappa_i`.
/// A perturbation `d` changes the ASR by `2 Re(g^H d)` to first order.
pub fn asr_gradient(cache: &QuadFormCache, v: &CVector) -> CVector {
    let k = cache.size();
    let mut grad = CVector::zeros(v.len());
    let mut exps = vec![0.0; k * k];
    for (side, sign) in [(Side::Bob, 1.0), (Side::Eve, -1.0)] {
        cache.exponents(side, v, &mut exps);
        let mats = cache.mats(side);
        for i in 0..k {
            let row = &mut exps[i * k..(i + 1) * k];
            softmax_in_place(row);
            for (j, &w) in row.iter().enumerate() {
                if i == j || w == 0.0 {
                    continue;
                }
                grad.gemv(C64::from(w * sign), &mats[i * k + j], v, 1.0.into());
            }
        }
    }
    grad.scale(cache.p1() / (2.0 * LN_2 * k as f64))
}
