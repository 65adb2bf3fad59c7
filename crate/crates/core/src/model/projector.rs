use nalgebra::Cholesky;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, hermitian_part, CMatrix};

/// Condition-number ceiling for `H H^H` before the projector is declared undefined.
pub const MAX_CONDITION: f64 = 1e12;

/// Artificial-noise projector onto the null space of the legitimate channel,
/// normalized so that `tr(T T^H) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnProjector {
    pub t_an: CMatrix,
    /// Frobenius norm of the unnormalized projector.
    pub mu_norm: f64,
}

impl AnProjector {
    /// `T = (I - H^H (H H^H)^{-1} H) / mu` with `mu` the Frobenius norm of the bracket.
    pub fn new(h: &CMatrix) -> Result<Self> {
        let (n_rx, n_tx) = h.shape();
        if n_tx <= n_rx {
            return Err(Error::EmptyNullSpace { n_tx, n_rx });
        }
        let gram = hermitian_part(&(h * h.adjoint()));
        let (eigs, _) = hermitian_eigen(&gram);
        let (lo, hi) = (eigs[0], eigs[eigs.len() - 1]);
        if lo <= 0.0 || hi / lo > MAX_CONDITION {
            return Err(Error::RankDeficient {
                condition: if lo <= 0.0 { f64::INFINITY } else { hi / lo },
            });
        }
        let chol = Cholesky::new(gram).ok_or(Error::RankDeficient {
            condition: hi / lo,
        })?;
        // (H H^H)^{-1} H via a Hermitian solve.
        let x = chol.solve(h);
        let bracket = hermitian_part(&(CMatrix::identity(n_tx, n_tx) - h.adjoint() * x));
        let mu_norm = bracket.norm();
        if mu_norm <= f64::EPSILON {
            return Err(Error::EmptyNullSpace { n_tx, n_rx });
        }
        Ok(AnProjector {
            t_an: bracket.unscale(mu_norm),
            mu_norm,
        })
    }

    pub fn n_tx(&self) -> usize {
        self.t_an.nrows()
    }
}

pub fn an_projector(h: &CMatrix) -> Result<AnProjector> {
    AnProjector::new(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;
    use crate::model::sample_channel;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Orthonormal null-space basis by Gram-Schmidt: first the columns of `H^H`,
    /// then the standard basis, keeping only what survives after the row space.
    fn null_basis(h: &CMatrix) -> CMatrix {
        let (n_rx, n_tx) = h.shape();
        let mut basis: Vec<Vec<C64>> = Vec::new();
        let candidates = (0..n_rx)
            .map(|r| (0..n_tx).map(|c| h[(r, c)].conj()).collect::<Vec<_>>())
            .chain((0..n_tx).map(|k| {
                (0..n_tx)
                    .map(|c| C64::new(if c == k { 1.0 } else { 0.0 }, 0.0))
                    .collect()
            }));
        for mut x in candidates {
            for _ in 0..2 {
                for b in &basis {
                    let dot: C64 = b.iter().zip(&x).map(|(bi, xi)| bi.conj() * xi).sum();
                    for (xi, bi) in x.iter_mut().zip(b) {
                        *xi -= dot * bi;
                    }
                }
            }
            let nrm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if nrm > 1e-8 {
                basis.push(x.iter().map(|z| z / nrm).collect());
            }
        }
        let null: Vec<_> = basis.into_iter().skip(n_rx).collect();
        CMatrix::from_fn(n_tx, null.len(), |r, c| null[c][r])
    }

    #[test]
    fn single_row_projects_onto_second_axis() {
        let h = CMatrix::from_row_slice(1, 2, &[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        let p = an_projector(&h).unwrap();
        let want = CMatrix::from_row_slice(
            2,
            2,
            &[C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
        );
        assert!((p.t_an - want).norm() < 1e-15);
        assert!((p.mu_norm - 1.0).abs() < 1e-15);
    }

    #[test]
    fn columns_lie_in_independent_null_basis() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let h = sample_channel(&mut rng, 2, 4);
            let p = an_projector(&h).unwrap();
            let n = null_basis(&h);
            assert_eq!(n.ncols(), 2);
            let residual = &p.t_an - &n * (n.adjoint() * &p.t_an);
            assert!(residual.norm() <= 1e-10, "residual {}", residual.norm());
            // Same projector up to the normalizer sqrt(N_t - N_b).
            let direct = (&n * n.adjoint()).unscale(2f64.sqrt());
            assert!((&p.t_an - direct).norm() <= 1e-10);
        }
    }

    #[test]
    fn invariants_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (nb, nt) in [(1, 2), (2, 4), (2, 8), (3, 5)] {
            let h = sample_channel(&mut rng, nb, nt);
            let p = an_projector(&h).unwrap();
            assert!((&h * &p.t_an).norm() <= 1e-10 * h.norm());
            assert!(((&p.t_an * p.t_an.adjoint()).trace().re - 1.0).abs() < 1e-10);
            let q = p.t_an.scale(p.mu_norm);
            assert!((&q * &q - &q).norm() < 1e-10, "not idempotent");
        }
    }

    #[test]
    fn square_and_rank_deficient_channels_rejected() {
        let eye = CMatrix::identity(2, 2);
        assert!(matches!(an_projector(&eye), Err(Error::EmptyNullSpace { .. })));
        let row = [C64::new(1.0, 0.5), C64::new(0.0, 1.0), C64::new(2.0, 0.0)];
        let mut both = row.to_vec();
        both.extend_from_slice(&row);
        let h = CMatrix::from_row_slice(2, 3, &both);
        assert!(matches!(an_projector(&h), Err(Error::RankDeficient { .. })));
    }
}
