//! Lie algebra bases of sp(2N,ℝ) and so(2N,ℝ), the stabilizer split at a
//! reference complex structure, the pullback metric and symplectic form on
//! the state manifold, Cayley retraction, and random group sampling.
//!
//! A tangent frame is a set of algebra generators Ξ_μ whose induced state
//! variations δJ = [Ξ_μ, J₀] are linearly independent. The pullback of the
//! Fubini-Study metric onto such a frame is
//!
//!   g_μν = ±¼ (Tr Ξ_μ Ξ_ν + Tr Ξ_μ J₀ Ξ_ν J₀),
//!
//! with + for bosons and − for fermions; on generators anticommuting with J₀
//! both cases reduce to the Frobenius product ½ Tr(Ξ_μ Ξ_νᵀ). The frame is
//! whitened once at the reference state; left invariance of the metric keeps
//! it orthonormal along the whole group orbit, which is what lets the
//! optimizer reuse one frame for an entire run.

use ndarray::prelude::*;
use ndarray_linalg::SVD;
use num_complex::Complex64 as C64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::linalg::{self, max_abs};
use crate::phase_space::{standard_omega, ParticleKind};
use crate::{Error, Result};

/// Ordered set of Lie algebra generators for one particle kind.
#[derive(Debug, Clone)]
pub struct AlgebraBasis {
    pub kind: ParticleKind,
    pub n_modes: usize,
    pub generators: Vec<Array2<f64>>,
}

/// ‖KΩ + ΩKᵀ‖_max (bosons) or ‖KG + GKᵀ‖_max (fermions) against the standard
/// background; zero iff K is in the algebra.
pub fn algebra_defect(k: &Array2<f64>, kind: ParticleKind) -> f64 {
    let n = k.nrows() / 2;
    let form = match kind {
        ParticleKind::Boson => standard_omega(n),
        ParticleKind::Fermion => Array2::eye(2 * n),
    };
    max_abs(&(k.dot(&form) + form.dot(&k.t())))
}

/// Group defect ‖MΩMᵀ − Ω‖_max resp. ‖MGMᵀ − G‖_max in the standard basis.
pub fn group_defect(m: &Array2<f64>, kind: ParticleKind) -> f64 {
    let n = m.nrows() / 2;
    let form = match kind {
        ParticleKind::Boson => standard_omega(n),
        ParticleKind::Fermion => Array2::eye(2 * n),
    };
    linalg::form_defect(m, &form)
}

fn unit(n2: usize, r: usize, c: usize) -> Array2<f64> {
    let mut m = Array2::zeros((n2, n2));
    m[[r, c]] = 1.0;
    m
}

/// Spanning set of the full algebra: N(2N+1) generators of sp(2N,ℝ) written
/// as [[A, B], [C, −Aᵀ]] with B, C symmetric, or the N(2N−1) antisymmetric
/// elementary generators of so(2N,ℝ).
pub fn full_algebra_basis(kind: ParticleKind, n: usize) -> AlgebraBasis {
    assert!(n >= 1);
    let n2 = 2 * n;
    let mut gens = Vec::new();
    match kind {
        ParticleKind::Boson => {
            for i in 0..n {
                for j in 0..n {
                    let mut k = unit(n2, i, j);
                    k[[n + j, n + i]] = -1.0;
                    gens.push(k);
                }
            }
            for i in 0..n {
                for j in i..n {
                    let mut k = unit(n2, i, n + j);
                    k[[j, n + i]] = 1.0;
                    gens.push(k);
                    let mut k = unit(n2, n + i, j);
                    k[[n + j, i]] = 1.0;
                    gens.push(k);
                }
            }
        }
        ParticleKind::Fermion => {
            for a in 0..n2 {
                for b in (a + 1)..n2 {
                    let mut k = unit(n2, a, b);
                    k[[b, a]] = -1.0;
                    gens.push(k);
                }
            }
        }
    }
    AlgebraBasis {
        kind,
        n_modes: n,
        generators: gens,
    }
}

/// Orthonormal (in Frobenius norm) spanning set of a list of matrices,
/// discarding directions below `rel_cutoff` times the top singular value.
fn span_extract(mats: &[Array2<f64>], rel_cutoff: f64) -> Result<Vec<Array2<f64>>> {
    if mats.is_empty() {
        return Ok(Vec::new());
    }
    let d = mats[0].nrows();
    let mut stacked = Array2::zeros((mats.len(), d * d));
    for (r, m) in mats.iter().enumerate() {
        for (k, v) in m.iter().enumerate() {
            stacked[[r, k]] = *v;
        }
    }
    let (_, sigma, vt) = stacked.svd(false, true)?;
    let vt = vt.expect("requested Vt");
    let smax = sigma.iter().cloned().fold(0.0f64, f64::max);
    if smax == 0.0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for (i, &s) in sigma.iter().enumerate() {
        if s > rel_cutoff * smax {
            let row = vt.row(i);
            let m = Array2::from_shape_vec((d, d), row.to_vec()).expect("reshape");
            out.push(m);
        }
    }
    Ok(out)
}

/// Split a generator span into the stabilizer h' (commuting with J₀) and its
/// complement h'_⊥ (anticommuting with J₀) by projecting each generator with
/// K ↦ ½(K ∓ J₀KJ₀) and re-extracting independent sets.
pub fn stabilizer_split(
    basis: &[Array2<f64>],
    j0: &Array2<f64>,
) -> Result<(Vec<Array2<f64>>, Vec<Array2<f64>>)> {
    let mut commuting = Vec::new();
    let mut anticommuting = Vec::new();
    for k in basis {
        let jkj = j0.dot(k).dot(j0);
        commuting.push((k - &jkj) / 2.0);
        anticommuting.push((k + &jkj) / 2.0);
    }
    let h = span_extract(&commuting, 1e-9)?;
    let h_perp = span_extract(&anticommuting, 1e-9)?;
    // For a pure reference the two spans are complementary in the input span.
    if crate::phase_space::purity_defect(j0) < 1e-8 {
        let input_rank = span_extract(basis, 1e-9)?.len();
        if h.len() + h_perp.len() != input_rank {
            return Err(Error::DegenerateBasis);
        }
    }
    Ok((h, h_perp))
}

fn kind_sign(kind: ParticleKind) -> f64 {
    match kind {
        ParticleKind::Boson => 1.0,
        ParticleKind::Fermion => -1.0,
    }
}

/// Pullback metric g_μν on a generator set at the reference J₀.
pub fn manifold_metric(
    kind: ParticleKind,
    generators: &[Array2<f64>],
    j0: &Array2<f64>,
) -> Array2<f64> {
    let m = generators.len();
    let s = kind_sign(kind);
    if m == 0 {
        return Array2::zeros((0, 0));
    }
    let d = generators[0].nrows();
    let mut p = Array2::zeros((m, d * d)); // rows vec(Ξ_μᵀ)
    let mut q = Array2::zeros((m, d * d)); // rows vec(Ξ_ν)
    let mut r = Array2::zeros((m, d * d)); // rows vec(J Ξ_ν J)
    for (row, g) in generators.iter().enumerate() {
        let gt = g.t();
        let jgj = j0.dot(g).dot(j0);
        for (k, v) in gt.iter().enumerate() {
            p[[row, k]] = *v;
        }
        for (k, v) in g.iter().enumerate() {
            q[[row, k]] = *v;
        }
        for (k, v) in jgj.iter().enumerate() {
            r[[row, k]] = *v;
        }
    }
    let t1 = p.dot(&q.t());
    let t2 = p.dot(&r.t());
    (t1 + t2).mapv(|x| x * s / 4.0)
}

/// Pullback symplectic form ω_μν on a generator set at the reference J₀.
pub fn manifold_symplectic(
    kind: ParticleKind,
    generators: &[Array2<f64>],
    j0: &Array2<f64>,
) -> Array2<f64> {
    let m = generators.len();
    let s = kind_sign(kind);
    let mut w = Array2::zeros((m, m));
    for mu in 0..m {
        let jg_mu = j0.dot(&generators[mu]);
        for nu in 0..m {
            let t1 = linalg::fro_dot(&generators[mu].t().to_owned(), &j0.dot(&generators[nu]));
            let t2 = linalg::fro_dot(&jg_mu.t().to_owned(), &generators[nu]);
            w[[mu, nu]] = s / 4.0 * (t1 - t2);
        }
    }
    w
}

/// Orthonormal tangent frame at a reference complex structure.
#[derive(Debug, Clone)]
pub struct TangentFrame {
    pub kind: ParticleKind,
    j0: Array2<f64>,
    generators: Vec<Array2<f64>>,
}

impl TangentFrame {
    /// Whiten a generator set so the pullback metric becomes the identity.
    /// Fails with `RankDeficient` if the metric has an eigenvalue below 1e−12.
    pub fn orthonormal(
        kind: ParticleKind,
        j0: Array2<f64>,
        generators: Vec<Array2<f64>>,
    ) -> Result<Self> {
        Self::build(kind, j0, generators, false)
    }

    /// Like [`TangentFrame::orthonormal`] but silently dropping the metric
    /// kernel — used for purification frames where the stabilizer directions
    /// sit inside the supplied span.
    pub fn spanning(
        kind: ParticleKind,
        j0: Array2<f64>,
        generators: Vec<Array2<f64>>,
    ) -> Result<Self> {
        Self::build(kind, j0, generators, true)
    }

    fn build(
        kind: ParticleKind,
        j0: Array2<f64>,
        generators: Vec<Array2<f64>>,
        drop_kernel: bool,
    ) -> Result<Self> {
        if generators.is_empty() {
            return Ok(Self {
                kind,
                j0,
                generators,
            });
        }
        let g = manifold_metric(kind, &generators, &j0);
        let (vals, vecs) = linalg::eigh_real(&g)?;
        let vmax = vals.iter().cloned().fold(0.0f64, f64::max);
        let mut new_gens = Vec::new();
        for (i, &v) in vals.iter().enumerate() {
            if v < 1e-12 || v < 1e-12 * vmax {
                if drop_kernel {
                    continue;
                }
                return Err(Error::RankDeficient(v));
            }
            let scale = 1.0 / v.sqrt();
            let mut acc: Array2<f64> = Array2::zeros(generators[0].raw_dim());
            for (nu, gen) in generators.iter().enumerate() {
                acc.scaled_add(vecs[[nu, i]] * scale, gen);
            }
            new_gens.push(acc);
        }
        Ok(Self {
            kind,
            j0,
            generators: new_gens,
        })
    }

    /// Frame spanning the full pure-state manifold at `j0`: the stabilizer
    /// split of the full algebra, whitened.
    pub fn full_manifold(kind: ParticleKind, j0: Array2<f64>) -> Result<Self> {
        let n = j0.nrows() / 2;
        let basis = full_algebra_basis(kind, n);
        let (_, h_perp) = stabilizer_split(&basis.generators, &j0)?;
        Self::orthonormal(kind, j0, h_perp)
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn j0(&self) -> &Array2<f64> {
        &self.j0
    }

    pub fn generators(&self) -> &[Array2<f64>] {
        &self.generators
    }

    /// Re-evaluate the pullback metric on the frame (identity after
    /// orthonormalization).
    pub fn metric(&self) -> Array2<f64> {
        manifold_metric(self.kind, &self.generators, &self.j0)
    }

    pub fn symplectic(&self) -> Array2<f64> {
        manifold_symplectic(self.kind, &self.generators, &self.j0)
    }

    /// Assemble K = Σ_μ coeff_μ Ξ_μ.
    pub fn assemble(&self, coeffs: &Array1<f64>) -> Array2<f64> {
        let mut k = Array2::zeros(self.j0.raw_dim());
        for (c, g) in coeffs.iter().zip(&self.generators) {
            k.scaled_add(*c, g);
        }
        k
    }
}

/// Cayley retraction M = (𝟙 + εK/2)(𝟙 − εK/2)⁻¹, exactly in the group for
/// algebra elements K.
pub fn cayley_retract(k: &Array2<f64>, epsilon: f64) -> Result<Array2<f64>> {
    let n = k.nrows();
    let half = k.mapv(|x| x * epsilon / 2.0);
    let plus = Array2::eye(n) + &half;
    let minus = Array2::eye(n) - &half;
    let minus_inv = linalg::inv_real(&minus).map_err(|_| Error::NearSingular(f64::INFINITY))?;
    let cond = linalg::cond_1(&minus, &minus_inv);
    if cond > 1e12 {
        return Err(Error::NearSingular(cond));
    }
    Ok(plus.dot(&minus_inv))
}

/// Random group element. Fermions draw from the Haar measure on SO(2N);
/// bosons exponentiate a random algebra element with normal entries of
/// standard deviation `spread` (the symplectic group is non-compact, so a
/// Gaussian measure stands in for Haar).
pub fn sample_group(kind: ParticleKind, n: usize, seed: u64, spread: f64) -> Array2<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n2 = 2 * n;
    match kind {
        ParticleKind::Fermion => {
            let mut gauss = Array2::zeros((n2, n2));
            for v in gauss.iter_mut() {
                *v = normal(&mut rng);
            }
            let mut q = linalg::haar_orthogonal(&gauss);
            if linalg::det_sign(&q) < 0.0 {
                let last = n2 - 1;
                for r in 0..n2 {
                    q[[r, last]] = -q[[r, last]];
                }
            }
            q
        }
        ParticleKind::Boson => {
            let mut a = Array2::zeros((n, n));
            for v in a.iter_mut() {
                *v = spread * normal(&mut rng);
            }
            let mut b = Array2::zeros((n, n));
            let mut c = Array2::zeros((n, n));
            for i in 0..n {
                for j in i..n {
                    let x = spread * normal(&mut rng);
                    b[[i, j]] = x;
                    b[[j, i]] = x;
                    let y = spread * normal(&mut rng);
                    c[[i, j]] = y;
                    c[[j, i]] = y;
                }
            }
            let mut k = Array2::zeros((n2, n2));
            k.slice_mut(s![..n, ..n]).assign(&a);
            k.slice_mut(s![..n, n..]).assign(&b);
            k.slice_mut(s![n.., ..n]).assign(&c);
            k.slice_mut(s![n.., n..]).assign(&a.t().mapv(|x| -x));
            linalg::expm_real(&k)
        }
    }
}

/// Standard normal via Box-Muller on the seeded stream.
fn normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Exponential of an algebra element (used where the retraction is switched
/// to the exact exponential for validation).
pub fn exp_retract(k: &Array2<f64>, epsilon: f64) -> Array2<f64> {
    linalg::expm_real(&k.mapv(|x| x * epsilon))
}

/// Push a frame generator along the group: Ξ ↦ M Ξ M⁻¹.
pub fn push_generator(m: &Array2<f64>, m_inv: &Array2<f64>, xi: &Array2<f64>) -> Array2<f64> {
    m.dot(xi).dot(m_inv)
}

/// Complex view of a real matrix (convenience for mixed pipelines).
pub fn complexify(a: &Array2<f64>) -> Array2<C64> {
    linalg::to_complex(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase_space::GaussianState;
    use approx::assert_abs_diff_eq;

    #[test]
    fn algebra_dimensions_and_defects() {
        let sp = full_algebra_basis(ParticleKind::Boson, 1);
        assert_eq!(sp.generators.len(), 3);
        let so = full_algebra_basis(ParticleKind::Fermion, 2);
        assert_eq!(so.generators.len(), 6);
        for k in sp.generators.iter() {
            assert!(algebra_defect(k, ParticleKind::Boson) < 1e-14);
        }
        for k in so.generators.iter() {
            assert!(algebra_defect(k, ParticleKind::Fermion) < 1e-14);
        }
        assert_eq!(
            full_algebra_basis(ParticleKind::Boson, 3).generators.len(),
            3 * 7
        );
    }

    #[test]
    fn stabilizer_split_dimensions() {
        // Boson N=1: dim h' = 1, dim h'_perp = 2.
        let j0 = GaussianState::vacuum(ParticleKind::Boson, 1).j_qp().clone();
        let basis = full_algebra_basis(ParticleKind::Boson, 1);
        let (h, hp) = stabilizer_split(&basis.generators, &j0).unwrap();
        assert_eq!((h.len(), hp.len()), (1, 2));

        // Fermion N=2: dim h'_perp = 2.
        let j0 = GaussianState::vacuum(ParticleKind::Fermion, 2).j_qp().clone();
        let basis = full_algebra_basis(ParticleKind::Fermion, 2);
        let (h, hp) = stabilizer_split(&basis.generators, &j0).unwrap();
        assert_eq!((h.len(), hp.len()), (4, 2));

        // Fermion N=1: trivial tangent space.
        let j0 = GaussianState::vacuum(ParticleKind::Fermion, 1).j_qp().clone();
        let basis = full_algebra_basis(ParticleKind::Fermion, 1);
        let (_, hp) = stabilizer_split(&basis.generators, &j0).unwrap();
        assert_eq!(hp.len(), 0);
    }

    #[test]
    fn split_members_commute_or_anticommute() {
        for kind in [ParticleKind::Boson, ParticleKind::Fermion] {
            let n = 3;
            let j0 = GaussianState::vacuum(kind, n).j_qp().clone();
            let basis = full_algebra_basis(kind, n);
            let (h, hp) = stabilizer_split(&basis.generators, &j0).unwrap();
            for k in &h {
                assert!(max_abs(&(k.dot(&j0) - j0.dot(k))) < 1e-10);
            }
            for k in &hp {
                assert!(max_abs(&(k.dot(&j0) + j0.dot(k))) < 1e-10);
            }
            assert_eq!(h.len() + hp.len(), basis.generators.len());
        }
    }

    #[test]
    fn metric_matches_single_mode_examples() {
        // Boson N=1 at the vacuum: tangents K = ((a,b),(b,-a))/2 give
        // g = (a*a' + b*b')/4.
        let j0 = GaussianState::vacuum(ParticleKind::Boson, 1).j_qp().clone();
        let k = |a: f64, b: f64| array![[a / 2.0, b / 2.0], [b / 2.0, -a / 2.0]];
        let gens = vec![k(1.0, 0.0), k(0.0, 1.0)];
        let g = manifold_metric(ParticleKind::Boson, &gens, &j0);
        assert_abs_diff_eq!(g[[0, 0]], 0.25, epsilon = 1e-14);
        assert_abs_diff_eq!(g[[1, 1]], 0.25, epsilon = 1e-14);
        assert_abs_diff_eq!(g[[0, 1]], 0.0, epsilon = 1e-14);
        let w = manifold_symplectic(ParticleKind::Boson, &gens, &j0);
        assert_abs_diff_eq!(w[[0, 1]], 0.25, epsilon = 1e-14);
        assert_abs_diff_eq!(w[[0, 0]], 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(w[[1, 0]], -0.25, epsilon = 1e-14);
    }

    #[test]
    fn fermion_two_mode_metric_is_positive() {
        let j0 = GaussianState::vacuum(ParticleKind::Fermion, 2).j_qp().clone();
        let basis = full_algebra_basis(ParticleKind::Fermion, 2);
        let (_, hp) = stabilizer_split(&basis.generators, &j0).unwrap();
        let g = manifold_metric(ParticleKind::Fermion, &hp, &j0);
        let (vals, _) = linalg::eigh_real(&g).unwrap();
        assert!(vals.iter().all(|&v| v > 0.0), "metric not PD: {vals:?}");
        let w = manifold_symplectic(ParticleKind::Fermion, &hp, &j0);
        assert!(max_abs(&(&w + &w.t())) < 1e-12, "not antisymmetric");
    }

    #[test]
    fn single_anticommuting_generator_norm() {
        // g11 = 1/2 Tr(XiXi^T) for an anticommuting generator.
        let j0 = GaussianState::vacuum(ParticleKind::Boson, 1).j_qp().clone();
        let xi = array![[0.3, 0.1], [0.1, -0.3]];
        let g = manifold_metric(ParticleKind::Boson, &[xi.clone()], &j0);
        assert_abs_diff_eq!(
            g[[0, 0]],
            0.5 * linalg::fro_dot(&xi, &xi),
            epsilon = 1e-14
        );
    }

    #[test]
    fn orthonormalize_whitens_and_detects_duplicates() {
        let kind = ParticleKind::Boson;
        let n = 2;
        let j0 = GaussianState::vacuum(kind, n).j_qp().clone();
        let basis = full_algebra_basis(kind, n);
        let (_, hp) = stabilizer_split(&basis.generators, &j0).unwrap();
        let frame = TangentFrame::orthonormal(kind, j0.clone(), hp.clone()).unwrap();
        assert_eq!(frame.dim(), n * (n + 1));
        let g = frame.metric();
        let dev = max_abs(&(&g - &linalg::eye(frame.dim())));
        assert!(dev < 1e-10, "metric deviates from identity by {dev:.2e}");

        let mut dup = hp.clone();
        dup.push(hp[0].clone());
        assert!(matches!(
            TangentFrame::orthonormal(kind, j0, dup),
            Err(Error::RankDeficient(_))
        ));
    }

    #[test]
    fn cayley_is_group_exact_and_third_order() {
        let kind = ParticleKind::Boson;
        let k = {
            let basis = full_algebra_basis(kind, 2);
            let mut acc: Array2<f64> = Array2::zeros((4, 4));
            for (i, g) in basis.generators.iter().enumerate() {
                acc.scaled_add(0.1 * (i as f64 + 1.0), g);
            }
            acc
        };
        let m0 = cayley_retract(&k, 0.0).unwrap();
        assert!(max_abs(&(&m0 - &linalg::eye(4))) < 1e-15);

        let m = cayley_retract(&k, 0.1).unwrap();
        assert!(group_defect(&m, kind) < 1e-12);

        // ‖cay(εK) − exp(εK)‖ = O(ε³)
        let mut prev_ratio = None;
        for &eps in &[0.1, 0.05, 0.025] {
            let diff = max_abs(&(&cayley_retract(&k, eps).unwrap() - &exp_retract(&k, eps)));
            let ratio = diff / eps.powi(3);
            if let Some(p) = prev_ratio {
                assert!((ratio / p as f64) < 2.0, "not third order");
            }
            prev_ratio = Some(ratio);
        }
    }

    #[test]
    fn cayley_rejects_singular_denominator() {
        // (eps/2) K has eigenvalue 1 when K = diag(2/eps, ...) in sp form.
        let k = array![[20.0, 0.0], [0.0, -20.0]]; // sp(2) element (A, -A^T)
        assert!(matches!(
            cayley_retract(&k, 0.1),
            Err(Error::NearSingular(_))
        ));
    }

    #[test]
    fn sample_group_properties() {
        let m = sample_group(ParticleKind::Fermion, 2, 7, 1.0);
        assert!(group_defect(&m, ParticleKind::Fermion) < 1e-12);
        assert!((linalg::det_sign(&m) - 1.0).abs() < 1e-12);

        let id = sample_group(ParticleKind::Boson, 1, 3, 0.0);
        assert!(max_abs(&(&id - &linalg::eye(2))) < 1e-15);

        let m1 = sample_group(ParticleKind::Boson, 2, 1, 0.5);
        let m2 = sample_group(ParticleKind::Boson, 2, 2, 0.5);
        assert!(group_defect(&m1, ParticleKind::Boson) < 1e-12);
        assert!(max_abs(&(&m1 - &m2)) > 1e-3);
        let m1_again = sample_group(ParticleKind::Boson, 2, 1, 0.5);
        assert_eq!(m1, m1_again);
    }

    #[test]
    fn left_invariance_of_the_metric() {
        for kind in [ParticleKind::Boson, ParticleKind::Fermion] {
            let n = 2;
            let j0 = GaussianState::vacuum(kind, n).j_qp().clone();
            let frame = TangentFrame::full_manifold(kind, j0.clone()).unwrap();
            let m = sample_group(kind, n, 11, 0.4);
            let m_inv = linalg::inv_real(&m).unwrap();
            let pushed: Vec<_> = frame
                .generators()
                .iter()
                .map(|xi| push_generator(&m, &m_inv, xi))
                .collect();
            let j_m = m.dot(&j0).dot(&m_inv);
            let g = manifold_metric(kind, &pushed, &j_m);
            let dev = max_abs(&(&g - &linalg::eye(frame.dim())));
            assert!(dev < 1e-9, "left invariance violated by {dev:.2e}");
        }
    }
}
