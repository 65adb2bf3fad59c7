use std::f64::consts::LN_2;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigen, hermitian_part, log2_sum_exp, power, re_trace_product, rescale_power,
    softmax_in_place, CMatrix, CVector, C64,
};
use crate::metrics::{asr, QuadFormCache, Side};
use crate::opt::{is_zero, project_spectrahedron, uniform_precoder, OptTrace};

/// Successive-convex-approximation settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScaParams {
    /// Outer stop: change in the relaxed objective between iterates (bits).
    pub tol: f64,
    pub max_outer: usize,
    /// Inner stop: per-step improvement of the subproblem objective.
    pub inner_tol: f64,
    pub inner_max: usize,
    /// `lambda_2 / lambda_1` at or below which the solution counts as rank one.
    pub rank_tol: f64,
    pub n_randomizations: usize,
}

impl Default for ScaParams {
    fn default() -> Self {
        ScaParams {
            tol: 1e-3,
            max_outer: 50,
            inner_tol: 1e-8,
            inner_max: 500,
            rank_tol: 1e-3,
            n_randomizations: 100,
        }
    }
}

impl ScaParams {
    pub fn validate(&self) -> Result<()> {
        let ok = self.tol > 0.0
            && self.inner_tol > 0.0
            && self.rank_tol > 0.0
            && self.max_outer > 0
            && self.inner_max > 0;
        if !ok {
            return Err(Error::InvalidParameter(format!("invalid SCA parameters {self:?}")));
        }
        Ok(())
    }
}

/// `out[j] = -p1 tr(W A_ij) / 2` for one row `i`.
fn trace_exponents(cache: &QuadFormCache, side: Side, w: &CMatrix, i: usize, out: &mut [f64]) {
    let k = cache.size();
    let half = -0.5 * cache.p1();
    for (j, o) in out.iter_mut().enumerate().take(k) {
        *o = half * re_trace_product(w, cache.mat(side, i, j));
    }
}

fn lse(cache: &QuadFormCache, side: Side, w: &CMatrix, n: usize, m: usize) -> f64 {
    let i = n * cache.order() + m;
    let mut row = vec![0.0; cache.size()];
    trace_exponents(cache, side, w, i, &mut row);
    log2_sum_exp(&row)
}

/// `log2 sum_j exp(-p1 tr(W E_ij) / 2)` for the symbol `i = (n, m)`.
pub fn f1(cache: &QuadFormCache, w: &CMatrix, n: usize, m: usize) -> f64 {
    lse(cache, Side::Eve, w, n, m)
}

/// As [`f1`] with the legitimate-link matrices `B_ij`.
pub fn f2(cache: &QuadFormCache, w: &CMatrix, n: usize, m: usize) -> f64 {
    lse(cache, Side::Bob, w, n, m)
}

/// Softmax-weighted sum `-(p1 / (2 ln 2)) sum_j w_ij A_ij`, the gradient of the
/// log-sum-exp row `i` in the pairing `f(W + D) ~ f(W) + Re tr(G D)`.
fn lse_gradient(cache: &QuadFormCache, side: Side, w: &CMatrix, i: usize, row: &mut [f64]) -> (f64, CMatrix) {
    let k = cache.size();
    let n = cache.n_tx();
    trace_exponents(cache, side, w, i, row);
    let value = softmax_in_place(&mut row[..k]);
    let mut g = CMatrix::zeros(n, n);
    for (j, &wt) in row.iter().enumerate().take(k) {
        if j != i && wt != 0.0 {
            g += cache.mat(side, i, j).scale(wt);
        }
    }
    (value, g.scale(-cache.p1() / (2.0 * LN_2)))
}

/// Gradient of [`f1`] at `w0`: `-p1 sum_j exp(.) E_ij^H / (2 ln 2 sum_j exp(.))`.
pub fn grad_f1(cache: &QuadFormCache, w0: &CMatrix, n: usize, m: usize) -> CMatrix {
    let i = n * cache.order() + m;
    let mut row = vec![0.0; cache.size()];
    let (_, g) = lse_gradient(cache, Side::Eve, w0, i, &mut row);
    g.adjoint()
}

/// Relaxed ASR `(1/K) sum_i [f1_i(W) - f2_i(W)]`; equals `asr(v)` at `W = v v^H`.
pub fn relaxed_asr(cache: &QuadFormCache, w: &CMatrix) -> f64 {
    let k = cache.size();
    let mut row = vec![0.0; k];
    let mut acc = 0.0;
    for i in 0..k {
        trace_exponents(cache, Side::Eve, w, i, &mut row);
        acc += log2_sum_exp(&row);
        trace_exponents(cache, Side::Bob, w, i, &mut row);
        acc -= log2_sum_exp(&row);
    }
    acc / k as f64
}

/// The concave surrogate around `W_prev`: `f1` replaced by its first-order
/// expansion, averaged over symbols.
struct Surrogate<'a> {
    cache: &'a QuadFormCache,
    /// `(1/K) sum_i grad f1_i(W_prev)`, Hermitian.
    slope: CMatrix,
    /// `(1/K) sum_i [f1_i(W_prev) - Re tr(grad_i W_prev)]`.
    offset: f64,
}

impl<'a> Surrogate<'a> {
    fn new(cache: &'a QuadFormCache, w_prev: &CMatrix) -> Self {
        let k = cache.size();
        let n = cache.n_tx();
        let mut row = vec![0.0; k];
        let mut slope = CMatrix::zeros(n, n);
        let mut offset = 0.0;
        for i in 0..k {
            let (value, g) = lse_gradient(cache, Side::Eve, w_prev, i, &mut row);
            offset += value - re_trace_product(&g, w_prev);
            slope += g;
        }
        Surrogate {
            cache,
            slope: hermitian_part(&slope).unscale(k as f64),
            offset: offset / k as f64,
        }
    }

    fn value(&self, w: &CMatrix) -> f64 {
        let k = self.cache.size();
        let mut row = vec![0.0; k];
        let mut bob = 0.0;
        for i in 0..k {
            trace_exponents(self.cache, Side::Bob, w, i, &mut row);
            bob += log2_sum_exp(&row);
        }
        self.offset + re_trace_product(&self.slope, w) - bob / k as f64
    }

    /// Value and Hermitian ascent direction (gradient in the Frobenius pairing).
    fn value_and_gradient(&self, w: &CMatrix) -> (f64, CMatrix) {
        let k = self.cache.size();
        let mut row = vec![0.0; k];
        let mut bob = 0.0;
        let mut grad_bob = CMatrix::zeros(w.nrows(), w.ncols());
        for i in 0..k {
            let (value, g) = lse_gradient(self.cache, Side::Bob, w, i, &mut row);
            bob += value;
            grad_bob += g;
        }
        let value = self.offset + re_trace_product(&self.slope, w) - bob / k as f64;
        let grad = hermitian_part(&(&self.slope - grad_bob.unscale(k as f64)));
        (value, grad)
    }
}

/// `(1/K) sum_i f(W, W_prev)`: the subproblem objective.
pub fn subproblem_objective(cache: &QuadFormCache, w: &CMatrix, w_prev: &CMatrix) -> f64 {
    Surrogate::new(cache, w_prev).value(w)
}

fn check_feasible(w: &CMatrix, budget: f64) -> Result<()> {
    let scale = w.norm().max(1.0);
    if (w - w.adjoint()).norm() > 1e-10 * scale {
        return Err(Error::Infeasible("not Hermitian".into()));
    }
    let (vals, _) = hermitian_eigen(w);
    if vals[0] < -1e-9 * scale {
        return Err(Error::Infeasible(format!("negative eigenvalue {:.3e}", vals[0])));
    }
    let tr = w.trace().re;
    if tr > budget * (1.0 + 1e-9) {
        return Err(Error::Infeasible(format!("trace {tr} exceeds {budget}")));
    }
    Ok(())
}

/// Maximizes the concave surrogate around `w_prev` over the spectrahedron
/// `{W ⪰ 0, tr W <= N_t}` by projected gradient ascent with backtracking,
/// starting from `w_prev`. Every accepted step increases the surrogate.
pub fn solve_sca_subproblem(cache: &QuadFormCache, w_prev: &CMatrix, params: &ScaParams) -> Result<CMatrix> {
    params.validate()?;
    let budget = cache.n_tx() as f64;
    check_feasible(w_prev, budget)?;
    let surrogate = Surrogate::new(cache, w_prev);
    let mut w = hermitian_part(w_prev);
    let (mut value, mut grad) = surrogate.value_and_gradient(&w);
    let mut step = 1.0;
    for _ in 0..params.inner_max {
        let mut accepted = None;
        while step > 1e-16 {
            let next = project_spectrahedron(&(&w + grad.scale(step)), budget);
            let d = &next - &w;
            let next_value = surrogate.value(&next);
            let bound = value + re_trace_product(&grad, &d) - d.norm_squared() / (2.0 * step);
            if next_value >= bound && next_value >= value {
                accepted = Some((next, next_value));
                break;
            }
            step /= 2.0;
        }
        let Some((next, next_value)) = accepted else { break };
        let gain = next_value - value;
        w = next;
        if gain < params.inner_tol {
            break;
        }
        (value, grad) = surrogate.value_and_gradient(&w);
        step *= 2.0;
    }
    Ok(w)
}

/// Max-ASR-SCA on the relaxation `max R(W) s.t. W ⪰ 0, tr W <= N_t`, starting
/// from `W_0 = v0 v0^H` and stopping once consecutive relaxed objectives differ
/// by at most `tol`.
///
/// Returns the last iterate; `trace.final_vector` is its scaled leading
/// eigenvector (see [`extract_precoder`] for randomized rounding).
pub fn max_asr_sca(cache: &QuadFormCache, v0: &CVector, params: &ScaParams) -> Result<(CMatrix, OptTrace)> {
    params.validate()?;
    if v0.len() != cache.n_tx() {
        return Err(Error::DimensionMismatch("initial precoder length".into()));
    }
    if is_zero(v0) {
        return Err(Error::ZeroPrecoder);
    }
    let mut w = v0 * v0.adjoint();
    check_feasible(&w, cache.n_tx() as f64)?;
    let mut value = relaxed_asr(cache, &w);
    let mut history = vec![value];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < params.max_outer {
        iterations += 1;
        let next = solve_sca_subproblem(cache, &w, params)?;
        let next_value = relaxed_asr(cache, &next);
        history.push(next_value);
        let delta = (next_value - value).abs();
        w = next;
        value = next_value;
        if delta <= params.tol {
            converged = true;
            break;
        }
    }
    let final_vector = leading_precoder(&w);
    Ok((
        w,
        OptTrace {
            objective_history: history,
            iterations,
            converged,
            final_vector,
        },
    ))
}

/// Leading eigenvector of `w` scaled to the power of `w`, `tr(v v^H) = tr W`.
pub fn leading_precoder(w: &CMatrix) -> CVector {
    let n = w.nrows();
    let (vals, vecs) = hermitian_eigen(w);
    if vals[n - 1] <= 0.0 {
        return uniform_precoder(n);
    }
    let power: f64 = vals.iter().map(|l| l.max(0.0)).sum();
    rescale_power(&vecs.column(n - 1).into_owned(), power.min(n as f64))
}

/// Rank-one rounding of a relaxed solution.
///
/// Every candidate direction is tried at two power levels, `tr W` and the full
/// budget `N_t`, and the one with the largest unclamped ASR wins. If
/// `lambda_2 / lambda_1 <= rank_tol` the only direction is the leading
/// eigenvector; otherwise `n_randomizations` draws from `CN(0, W)` compete
/// with it.
pub fn extract_precoder<R: Rng + ?Sized>(
    cache: &QuadFormCache,
    w_star: &CMatrix,
    params: &ScaParams,
    rng: &mut R,
) -> CVector {
    let n = w_star.nrows();
    let budget = n as f64;
    let (vals, vecs) = hermitian_eigen(w_star);
    let top = vals[n - 1];
    let lead = leading_precoder(w_star);
    if top <= 0.0 {
        return lead;
    }
    let mut best_value = asr(cache, &lead, false);
    let mut best = lead.clone();
    let mut consider = |dir: &CVector| {
        for cand in [rescale_power(dir, power(&lead)), rescale_power(dir, budget)] {
            let value = asr(cache, &cand, false);
            if value > best_value {
                best_value = value;
                best = cand;
            }
        }
    };
    consider(&lead);
    if n == 1 || vals[n - 2].max(0.0) / top <= params.rank_tol {
        return best;
    }
    let roots: Vec<f64> = vals.iter().map(|&l| l.max(0.0).sqrt()).collect();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for _ in 0..params.n_randomizations {
        let mut xi = CVector::zeros(n);
        for (k, root) in roots.iter().enumerate() {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            xi.axpy(C64::new(re * s, im * s) * *root, &vecs.column(k), 1.0.into());
        }
        if !is_zero(&xi) {
            consider(&xi);
        }
    }
    best
}
