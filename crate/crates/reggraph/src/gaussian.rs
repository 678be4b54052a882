//! Linear-Gaussian cross-validation layer: sample parameters that respect a
//! regression graph's zero pattern, build the implied covariance matrix
//! block-recursively, and check that graph separation coincides with
//! vanishing partial covariance. Also verifies the three classical
//! recursion identities for regression coefficients, concentrations and
//! covariances on 3x3 matrices.

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{RegressionGraph, StoredEdge};
use crate::separation::separates;

const MAX_FAITHFULNESS_NODES: usize = 10;

/// Parameters of one response component: members regressed on the union of
/// all later components (`past`), with correlated residuals inside the block.
#[derive(Debug, Clone)]
pub struct ResponseBlock {
    /// Position of the component in the compatible ordering.
    pub comp: usize,
    pub members: Vec<usize>,
    pub past: Vec<usize>,
    /// members x past; entry nonzero exactly where an arrow points from the
    /// past node into the member.
    pub pi: DMatrix<f64>,
    /// members x members residual covariance; off-diagonal nonzero exactly
    /// on dashed edges; positive definite by diagonal dominance.
    pub w: DMatrix<f64>,
}

#[derive(Debug, Clone)]
pub struct GaussianParams {
    pub response_blocks: Vec<ResponseBlock>,
    /// Context nodes in ascending index order.
    pub context_nodes: Vec<usize>,
    /// Concentration matrix over `context_nodes`; off-diagonal nonzero
    /// exactly on full lines, positive definite by diagonal dominance.
    pub k: DMatrix<f64>,
}

/// Symmetric positive definite covariance matrix over all nodes.
#[derive(Debug, Clone)]
pub struct CovMatrix {
    m: DMatrix<f64>,
}

impl CovMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<CovMatrix> {
        if !m.is_square() {
            return Err(Error::NumericalFailure("covariance matrix not square".into()));
        }
        let n = m.nrows();
        for i in 0..n {
            for k in 0..i {
                if (m[(i, k)] - m[(k, i)]).abs() > 1e-9 * (1.0 + m[(i, i)].abs()) {
                    return Err(Error::NumericalFailure("covariance matrix not symmetric".into()));
                }
            }
        }
        if m.clone().cholesky().is_none() {
            return Err(Error::NumericalFailure("covariance matrix not positive definite".into()));
        }
        Ok(CovMatrix { m })
    }

    pub fn n(&self) -> usize {
        self.m.nrows()
    }

    pub fn entry(&self, i: usize, k: usize) -> f64 {
        self.m[(i, k)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }
}

fn nonzero(rng: &mut impl Rng) -> f64 {
    let mag = rng.gen_range(0.1..=1.0);
    if rng.gen_bool(0.5) {
        mag
    } else {
        -mag
    }
}

/// Fill the off-diagonal pattern given by `coupled`, then make the matrix
/// diagonally dominant (diagonal = 1 + row-sum of absolute off-diagonals).
fn sample_spd(
    rng: &mut impl Rng,
    members: &[usize],
    coupled: impl Fn(usize, usize) -> bool,
) -> DMatrix<f64> {
    let s = members.len();
    let mut m = DMatrix::zeros(s, s);
    for r in 0..s {
        for c in r + 1..s {
            if coupled(members[r], members[c]) {
                let v = nonzero(rng);
                m[(r, c)] = v;
                m[(c, r)] = v;
            }
        }
    }
    for r in 0..s {
        let off: f64 = (0..s).filter(|&c| c != r).map(|c| m[(r, c)].abs()).sum();
        m[(r, r)] = 1.0 + off;
    }
    m
}

/// Deterministic parameter draw respecting the graph's zero pattern; nonzero
/// entries are uniform on +-[0.1, 1.0].
pub fn sample_parameters(g: &RegressionGraph, seed: u64) -> GaussianParams {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut response_blocks = Vec::new();
    for (j, comp) in g.components().iter().enumerate() {
        if g.is_context(comp[0]) {
            continue;
        }
        let mut members = comp.clone();
        members.sort_unstable();
        let past = g.past_of(j);
        let mut pi = DMatrix::zeros(members.len(), past.len());
        for (r, &i) in members.iter().enumerate() {
            for (c, &t) in past.iter().enumerate() {
                if g.edge_between(i, t) == Some(StoredEdge::Arrow { head: i }) {
                    pi[(r, c)] = nonzero(&mut rng);
                }
            }
        }
        let w = sample_spd(&mut rng, &members, |x, y| {
            g.edge_between(x, y) == Some(StoredEdge::Dashed)
        });
        response_blocks.push(ResponseBlock { comp: j, members, past, pi, w });
    }
    let context_nodes = g.context_nodes();
    let k = sample_spd(&mut rng, &context_nodes, |x, y| {
        g.edge_between(x, y) == Some(StoredEdge::Full)
    });
    GaussianParams { response_blocks, context_nodes, k }
}

/// Build the implied covariance matrix block-recursively in reverse
/// compatible order: the context block contributes the inverse of its
/// concentration matrix, then each response block g_j adds
/// Sigma_jj = Pi Sigma_> Pi' + W and Sigma_j> = Pi Sigma_>.
pub fn implied_covariance(p: &GaussianParams, g: &RegressionGraph) -> Result<CovMatrix> {
    let n = g.n();
    let mut sigma = DMatrix::zeros(n, n);

    if !p.context_nodes.is_empty() {
        let kinv = p
            .k
            .clone()
            .cholesky()
            .ok_or_else(|| Error::NumericalFailure("context concentration not positive definite".into()))?
            .inverse();
        for (r, &i) in p.context_nodes.iter().enumerate() {
            for (c, &k) in p.context_nodes.iter().enumerate() {
                sigma[(i, k)] = kinv[(r, c)];
            }
        }
    }

    // components() already lists response blocks before context blocks, so
    // iterating the blocks in reverse ensures each past is complete.
    for b in p.response_blocks.iter().rev() {
        let np = b.past.len();
        let mut sp = DMatrix::zeros(np, np);
        for (r, &x) in b.past.iter().enumerate() {
            for (c, &y) in b.past.iter().enumerate() {
                sp[(r, c)] = sigma[(x, y)];
            }
        }
        let cross = &b.pi * &sp; // members x past
        let own = &cross * b.pi.transpose() + &b.w;
        for (r, &i) in b.members.iter().enumerate() {
            for (c, &k) in b.members.iter().enumerate() {
                sigma[(i, k)] = own[(r, c)];
            }
        }
        for (r, &i) in b.members.iter().enumerate() {
            for (c, &t) in b.past.iter().enumerate() {
                sigma[(i, t)] = cross[(r, c)];
                sigma[(t, i)] = cross[(r, c)];
            }
        }
    }

    CovMatrix::new(sigma)
}

/// Partial covariance sigma_ik|c = Sigma_ik - Sigma_ic Sigma_cc^{-1} Sigma_ck,
/// computed by a Cholesky solve on the conditioning block.
pub fn partial_covariance(
    sigma: &CovMatrix,
    i: usize,
    k: usize,
    c: &BTreeSet<usize>,
) -> Result<f64> {
    let n = sigma.n();
    if i == k || c.contains(&i) || c.contains(&k) {
        return Err(Error::BadSets("i, k and c must be distinct".into()));
    }
    if i >= n || k >= n || c.iter().any(|&v| v >= n) {
        return Err(Error::UnknownLabel(format!("node index out of range for {n} nodes")));
    }
    if c.is_empty() {
        return Ok(sigma.entry(i, k));
    }
    let cs: Vec<usize> = c.iter().copied().collect();
    let nc = cs.len();
    let mut scc = DMatrix::zeros(nc, nc);
    let mut sic = DMatrix::zeros(nc, 1);
    let mut sck = DMatrix::zeros(nc, 1);
    for (r, &x) in cs.iter().enumerate() {
        sic[(r, 0)] = sigma.entry(i, x);
        sck[(r, 0)] = sigma.entry(x, k);
        for (col, &y) in cs.iter().enumerate() {
            scc[(r, col)] = sigma.entry(x, y);
        }
    }
    let chol = scc.cholesky().ok_or(Error::SingularConditioningBlock)?;
    let solved = chol.solve(&sck);
    Ok(sigma.entry(i, k) - (sic.transpose() * solved)[(0, 0)])
}

/// Max absolute residual of the three recursion identities on a 3x3
/// covariance matrix (variables 1, 2, 3 at indices 0, 1, 2):
/// regression coefficients, concentrations and covariances.
pub fn recursion_identity_checks(sigma: &CovMatrix) -> Result<f64> {
    if sigma.n() != 3 {
        return Err(Error::BadSets("recursion identities need a 3x3 matrix".into()));
    }
    let s = |i: usize, k: usize| sigma.entry(i, k);

    // beta_{1|3} = beta_{1|3.2} + beta_{1|2.3} beta_{2|3}
    let b13 = s(0, 2) / s(2, 2);
    let b23 = s(1, 2) / s(2, 2);
    // regression of 1 on (2, 3) via the normal equations
    let a = nalgebra::Matrix2::new(s(1, 1), s(1, 2), s(1, 2), s(2, 2));
    let rhs = nalgebra::Vector2::new(s(0, 1), s(0, 2));
    let sol = a
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::NumericalFailure("singular 2x2 normal equations".into()))?;
    let (b12_3, b13_2) = (sol[0], sol[1]);
    let r_beta = (b13 - (b13_2 + b12_3 * b23)).abs();

    // conc^{23.1} = conc^{23} - conc^{12} conc^{13} / conc^{11}
    let inv = sigma
        .matrix()
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::NumericalFailure("singular covariance matrix".into()))?;
    let marg = nalgebra::Matrix2::new(s(1, 1), s(1, 2), s(1, 2), s(2, 2));
    let minv = marg
        .try_inverse()
        .ok_or_else(|| Error::NumericalFailure("singular 2x2 marginal".into()))?;
    let r_conc = (minv[(0, 1)] - (inv[(1, 2)] - inv[(0, 1)] * inv[(0, 2)] / inv[(0, 0)])).abs();

    // sigma_{12|3} = sigma_12 - sigma_13 sigma_23 / sigma_33
    let swept = partial_covariance(sigma, 0, 1, &BTreeSet::from([2]))?;
    let r_cov = (swept - (s(0, 1) - s(0, 2) * s(1, 2) / s(2, 2))).abs();

    Ok(r_beta.max(r_conc).max(r_cov))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Graph says separated but some draw has a non-vanishing partial
    /// covariance: an algebra bug, never expected.
    NonzeroWhenSeparated,
    /// Graph says connected but no draw shows dependence: a parametric
    /// cancellation, logged but not fatal.
    VanishingWhenConnected,
}

#[derive(Debug, Clone)]
pub struct FaithfulnessViolation {
    pub i: usize,
    pub k: usize,
    pub c: BTreeSet<usize>,
    /// Max |partial covariance| over draws.
    pub value: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone)]
pub struct FaithfulnessReport {
    pub statements_checked: usize,
    pub draws: usize,
    pub violations: Vec<FaithfulnessViolation>,
}

impl FaithfulnessReport {
    /// True when no separated statement produced a nonzero partial
    /// covariance; faithfulness misses do not count against soundness.
    pub fn sound(&self) -> bool {
        !self
            .violations
            .iter()
            .any(|v| v.verdict == Verdict::NonzeroWhenSeparated)
    }

    pub fn to_text(&self, g: &RegressionGraph) -> String {
        let mut out = format!(
            "checked {} statements over {} draws, {} violations\n",
            self.statements_checked,
            self.draws,
            self.violations.len()
        );
        for v in &self.violations {
            let mut cs: Vec<&str> = v.c.iter().map(|&x| g.label(x)).collect();
            cs.sort_unstable();
            let verdict = match v.verdict {
                Verdict::NonzeroWhenSeparated => "nonzero-when-separated",
                Verdict::VanishingWhenConnected => "vanishing-when-connected",
            };
            out.push_str(&format!(
                "{{{}}} _||_ {{{}}} | {{{}}}: value={:.3e}, verdict={}\n",
                g.label(v.i),
                g.label(v.k),
                cs.join(", "),
                v.value,
                verdict
            ));
        }
        out
    }
}

/// Enumerate every singleton pair (i, k) and every conditioning subset of the
/// remaining nodes; separated statements must vanish within `tol_zero` on all
/// draws, connected ones must exceed `tol_nonzero` on at least one draw.
pub fn faithfulness_check(
    g: &RegressionGraph,
    seed: u64,
    draws: usize,
    tol_zero: f64,
    tol_nonzero: f64,
) -> Result<FaithfulnessReport> {
    let n = g.n();
    if n > MAX_FAITHFULNESS_NODES {
        return Err(Error::TooLarge(n, MAX_FAITHFULNESS_NODES));
    }
    let sigmas: Vec<CovMatrix> = (0..draws)
        .map(|d| {
            let p = sample_parameters(g, seed.wrapping_add(d as u64));
            implied_covariance(&p, g)
        })
        .collect::<Result<_>>()?;

    let mut report = FaithfulnessReport { statements_checked: 0, draws, violations: Vec::new() };
    for i in 0..n {
        for k in i + 1..n {
            let others: Vec<usize> = (0..n).filter(|&v| v != i && v != k).collect();
            for mask in 0u32..(1 << others.len()) {
                let c: BTreeSet<usize> = others
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| mask >> b & 1 == 1)
                    .map(|(_, &v)| v)
                    .collect();
                let sep = separates(g, &BTreeSet::from([i]), &BTreeSet::from([k]), &c)?;
                report.statements_checked += 1;
                let mut max_abs = 0.0f64;
                for sigma in &sigmas {
                    max_abs = max_abs.max(partial_covariance(sigma, i, k, &c)?.abs());
                }
                if sep && max_abs > tol_zero {
                    report.violations.push(FaithfulnessViolation {
                        i,
                        k,
                        c,
                        value: max_abs,
                        verdict: Verdict::NonzeroWhenSeparated,
                    });
                } else if !sep && max_abs < tol_nonzero {
                    report.violations.push(FaithfulnessViolation {
                        i,
                        k,
                        c,
                        value: max_abs,
                        verdict: Verdict::VanishingWhenConnected,
                    });
                }
            }
        }
    }
    Ok(report)
}
