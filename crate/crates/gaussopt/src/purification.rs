//! Standard forms of mixed Gaussian states and the manifold of their
//! purifications.
//!
//! A restricted complex structure J_AB is conjugated into the mixed standard
//! form ⊕ c_i 𝔸₂ (c = cosh 2r for bosons, cos 2r for fermions) by a group
//! element T built from its eigenvectors. Appending ancilla modes and filling
//! in the two-mode squeezing off-diagonals produces the purified standard
//! form, a pure state whose restriction to the original system reproduces
//! J_AB exactly. The set of all purifications is then the orbit of that
//! initial state under transformations 𝟙_AB ⊕ M̃ acting on the ancilla alone,
//! which is the manifold entanglement and complexity of purification
//! optimize over.

use ndarray::prelude::*;
use num_complex::Complex64 as C64;

use crate::geometry::{full_algebra_basis, sample_group, TangentFrame};
use crate::linalg::{self, max_abs};
use crate::phase_space::{
    purity_defect, restrict, standard_omega_inv, ParticleKind, SubsystemPartition,
};
use crate::{Error, Result};

const DEGENERACY_TOL: f64 = 1e-8;

/// Mixed-state standard form data: squeezing parameters r_i (mode order is
/// descending in c_i) and the group element T with J = T J_sta T⁻¹.
#[derive(Debug, Clone)]
pub struct MixedStandardForm {
    pub kind: ParticleKind,
    pub r: Vec<f64>,
    pub t: Array2<f64>,
}

impl MixedStandardForm {
    pub fn n_modes(&self) -> usize {
        self.r.len()
    }

    /// The c_i in mode order.
    pub fn cs(&self) -> Vec<f64> {
        self.r
            .iter()
            .map(|&r| match self.kind {
                ParticleKind::Boson => (2.0 * r).cosh(),
                ParticleKind::Fermion => (2.0 * r).cos(),
            })
            .collect()
    }
}

/// The block-diagonal standard form ⊕ c_i 𝔸₂ in the qp layout.
pub fn mixed_standard_j(kind: ParticleKind, r: &[f64]) -> Array2<f64> {
    let n = r.len();
    let mut j = Array2::zeros((2 * n, 2 * n));
    for (i, &ri) in r.iter().enumerate() {
        let c = match kind {
            ParticleKind::Boson => (2.0 * ri).cosh(),
            ParticleKind::Fermion => (2.0 * ri).cos(),
        };
        j[[i, n + i]] = c;
        j[[n + i, i]] = -c;
    }
    j
}

fn r_from_c(kind: ParticleKind, c: f64) -> f64 {
    match kind {
        ParticleKind::Boson => 0.5 * (c + (c * c - 1.0).max(0.0).sqrt()).ln(),
        ParticleKind::Fermion => 0.5 * c.clamp(-1.0, 1.0).acos(),
    }
}

/// Rotate an eigenvector's overall phase so its largest-modulus entry is
/// real and positive; pins T deterministically.
fn fix_phase(v: &Array1<C64>) -> Array1<C64> {
    let mut best = 0usize;
    let mut best_norm = 0.0;
    for (i, z) in v.iter().enumerate() {
        if z.norm() > best_norm + 1e-12 {
            best_norm = z.norm();
            best = i;
        }
    }
    if best_norm == 0.0 {
        return v.clone();
    }
    let phase = v[best] / best_norm;
    v.mapv(|z| z / phase)
}

/// Decompose a restricted complex structure as J = T (⊕ c_i 𝔸₂) T⁻¹ with T
/// in the group. Eigenvectors are paired into (Re v, Im v) columns and
/// normalized with the background form; degenerate c_i are orthogonalized
/// within their eigenspace, ordered by descending c then input order.
pub fn mixed_standard_form(j_ab: &Array2<f64>, kind: ParticleKind) -> Result<MixedStandardForm> {
    let n2 = j_ab.nrows();
    let n = n2 / 2;
    let mut pairs: Vec<(f64, Array1<f64>, Array1<f64>)> = Vec::new(); // (c, x, y)

    match kind {
        ParticleKind::Boson => {
            let (vals, vecs) = linalg::eig_real(j_ab)?;
            let omega_inv = standard_omega_inv(n);
            let mut idx: Vec<usize> = (0..n2).filter(|&i| vals[i].im > 0.0).collect();
            if idx.len() != n {
                return Err(Error::NotRestrictedComplexStructure(
                    vals.iter().fold(0.0, |m, z| m.max(z.re.abs())),
                ));
            }
            idx.sort_by(|&a, &b| vals[b].im.partial_cmp(&vals[a].im).unwrap());
            let iw = omega_inv.mapv(|x| C64::new(0.0, x)); // iω
            let flush = |group: &mut Vec<Array1<C64>>,
                         c: f64,
                         pairs: &mut Vec<(f64, Array1<f64>, Array1<f64>)>|
             -> Result<()> {
                // Gram-Schmidt under the Hermitian form B(u,v) = u†(iω)v,
                // positive-definite on each +ic eigenspace.
                let mut ortho: Vec<Array1<C64>> = Vec::new();
                for v in group.drain(..) {
                    let mut v = v;
                    for u in &ortho {
                        let proj = u.mapv(|z| z.conj()).dot(&iw.dot(&v)) / 2.0;
                        v = &v - &u.mapv(|z| z * proj);
                    }
                    let norm2 = v.mapv(|z| z.conj()).dot(&iw.dot(&v)).re;
                    if norm2 <= 1e-12 {
                        return Err(Error::DegeneratePairing);
                    }
                    let v = fix_phase(&v.mapv(|z| z / (norm2 / 2.0).sqrt()));
                    ortho.push(v.clone());
                    pairs.push((c, v.mapv(|z| z.re), v.mapv(|z| z.im)));
                }
                Ok(())
            };
            let mut group: Vec<Array1<C64>> = Vec::new();
            let mut group_c = f64::NAN;
            for &i in &idx {
                let c = vals[i].im;
                if !group.is_empty() && (c - group_c).abs() > DEGENERACY_TOL {
                    flush(&mut group, group_c, &mut pairs)?;
                }
                group_c = c;
                group.push(vecs.column(i).to_owned());
            }
            if !group.is_empty() {
                flush(&mut group, group_c, &mut pairs)?;
            }
        }
        ParticleKind::Fermion => {
            // iJ is Hermitian; the J-eigenvalue +ic corresponds to −c here.
            let h = j_ab.mapv(|x| C64::new(0.0, x));
            let (vals, vecs) = linalg::eigh_c(&h)?;
            let mut idx: Vec<usize> = (0..n2).filter(|&i| vals[i] < -DEGENERACY_TOL).collect();
            idx.sort_by(|&a, &b| vals[a].partial_cmp(&vals[b]).unwrap()); // most negative first
            for &i in &idx {
                let v = fix_phase(&vecs.column(i).to_owned());
                let scale = 2.0f64.sqrt();
                pairs.push((
                    -vals[i],
                    v.mapv(|z| scale * z.re),
                    v.mapv(|z| scale * z.im),
                ));
            }
            // Kernel modes (c = 0): a real orthonormal basis, paired in order.
            let kernel: Vec<usize> =
                (0..n2).filter(|&i| vals[i].abs() <= DEGENERACY_TOL).collect();
            if !kernel.is_empty() {
                let mut real_basis: Vec<Array1<f64>> = Vec::new();
                for &i in &kernel {
                    for part in [
                        vecs.column(i).mapv(|z| z.re),
                        vecs.column(i).mapv(|z| z.im),
                    ] {
                        let mut w = part;
                        for u in &real_basis {
                            let p = u.dot(&w);
                            w = &w - &u.mapv(|x| x * p);
                        }
                        let nrm = w.dot(&w).sqrt();
                        if nrm > 1e-8 {
                            real_basis.push(w.mapv(|x| x / nrm));
                        }
                    }
                }
                if real_basis.len() != kernel.len() {
                    return Err(Error::DegeneratePairing);
                }
                for chunk in real_basis.chunks(2) {
                    pairs.push((0.0, chunk[0].clone(), chunk[1].clone()));
                }
            }
        }
    }

    if pairs.len() != n {
        return Err(Error::DegeneratePairing);
    }
    let mut t = Array2::zeros((n2, n2));
    let mut r = Vec::with_capacity(n);
    for (i, (c, x, y)) in pairs.iter().enumerate() {
        r.push(r_from_c(kind, *c));
        for row in 0..n2 {
            t[[row, i]] = x[row];
            t[[row, n + i]] = y[row];
        }
    }

    let j_sta = mixed_standard_j(kind, &r);
    let t_inv = linalg::inv_real(&t).map_err(|_| Error::DegeneratePairing)?;
    let defect = max_abs(&(&t.dot(&j_sta).dot(&t_inv) - j_ab));
    if defect > 1e-8 {
        return Err(Error::DegeneratePairing);
    }
    Ok(MixedStandardForm { kind, r, t })
}

/// Purified standard form on (system ⊕ ancilla) in the qp layout: each
/// system mode is paired with one ancilla mode through a two-mode squeezing
/// block; leftover ancilla modes are pure. Most-mixed modes get partners
/// first when the ancilla is smaller than the system.
pub fn standard_purification(
    standard: &MixedStandardForm,
    n_ancilla: usize,
) -> Result<Array2<f64>> {
    let n_sys = standard.n_modes();
    let n_tot = n_sys + n_ancilla;
    let nonzero = standard.r.iter().filter(|&&r| r > 1e-12).count();
    if n_ancilla < nonzero {
        return Err(Error::InsufficientAncilla {
            needed: nonzero,
            available: n_ancilla,
        });
    }

    let mut order: Vec<usize> = (0..n_sys).collect();
    order.sort_by(|&a, &b| standard.r[b].partial_cmp(&standard.r[a]).unwrap());

    let mut j = Array2::zeros((2 * n_tot, 2 * n_tot));
    let q = |m: usize| m;
    let p = |m: usize| n_tot + m;
    let set_diag = |j: &mut Array2<f64>, m: usize, c: f64| {
        j[[q(m), p(m)]] = c;
        j[[p(m), q(m)]] = -c;
    };
    let cs = standard.cs();
    for m in 0..n_sys {
        set_diag(&mut j, m, cs[m]);
    }
    for a in 0..n_ancilla {
        set_diag(&mut j, n_sys + a, 1.0);
    }
    for (k, &sys) in order.iter().enumerate().take(n_ancilla.min(n_sys)) {
        let anc = n_sys + k;
        let (c, s, lower_sign) = match standard.kind {
            ParticleKind::Boson => (
                (2.0 * standard.r[sys]).cosh(),
                (2.0 * standard.r[sys]).sinh(),
                1.0,
            ),
            ParticleKind::Fermion => (
                (2.0 * standard.r[sys]).cos(),
                (2.0 * standard.r[sys]).sin(),
                -1.0,
            ),
        };
        set_diag(&mut j, anc, c);
        // S2 blocks on (q_sys, p_anc) and (p_sys, q_anc), mirrored with the
        // kind-specific sign in the lower-left corner.
        j[[q(sys), p(anc)]] = s;
        j[[p(sys), q(anc)]] = s;
        j[[q(anc), p(sys)]] = lower_sign * s;
        j[[p(anc), q(sys)]] = lower_sign * s;
    }

    let defect = purity_defect(&j);
    if defect > 1e-12 {
        return Err(Error::Numerical(format!(
            "purified standard form is not pure (defect {defect:.3e})"
        )));
    }
    Ok(j)
}

/// A purification optimization problem: the fixed restricted structure
/// J_AB, an initial pure purification, and the orthonormal ancilla tangent
/// frame the optimizer moves along.
#[derive(Debug, Clone)]
pub struct PurificationProblem {
    pub kind: ParticleKind,
    pub j_ab: Array2<f64>,
    pub partition: SubsystemPartition,
    pub standard: MixedStandardForm,
    pub j_init: Array2<f64>,
    pub frame: TangentFrame,
}

impl PurificationProblem {
    pub fn n_system(&self) -> usize {
        self.standard.n_modes()
    }

    pub fn n_ancilla(&self) -> usize {
        self.partition.n_total() - self.standard.n_modes()
    }

    /// qp indices (in the full layout) of a union of partition blocks.
    pub fn qp_indices_of(&self, labels: &[&str]) -> Result<Vec<usize>> {
        let modes = self.partition.modes_of_union(labels)?;
        Ok(crate::phase_space::qp_indices(
            &modes,
            self.partition.n_total(),
        ))
    }

    /// Embed an ancilla-group element as 𝟙_AB ⊕ M̃.
    pub fn embed_ancilla(&self, m_anc: &Array2<f64>) -> Array2<f64> {
        embed_modes(
            m_anc,
            &(self.n_system()..self.partition.n_total()).collect::<Vec<_>>(),
            self.partition.n_total(),
        )
    }

    /// Random ancilla-only starting transformation for one seed.
    pub fn sample_start(&self, seed: u64, spread: f64) -> Array2<f64> {
        self.embed_ancilla(&sample_group(self.kind, self.n_ancilla(), seed, spread))
    }
}

/// Embed a 2k×2k qp-layout matrix acting on `modes` into the identity on an
/// `n_total`-mode system.
pub fn embed_modes(m: &Array2<f64>, modes: &[usize], n_total: usize) -> Array2<f64> {
    let idx = crate::phase_space::qp_indices(modes, n_total);
    let mut out = Array2::eye(2 * n_total);
    for (r, &ir) in idx.iter().enumerate() {
        for (c, &ic) in idx.iter().enumerate() {
            out[[ir, ic]] = m[[r, c]];
        }
    }
    out
}

/// Embed an algebra element the same way but on a zero background.
pub fn embed_generator(k: &Array2<f64>, modes: &[usize], n_total: usize) -> Array2<f64> {
    let idx = crate::phase_space::qp_indices(modes, n_total);
    let mut out = Array2::zeros((2 * n_total, 2 * n_total));
    for (r, &ir) in idx.iter().enumerate() {
        for (c, &ic) in idx.iter().enumerate() {
            out[[ir, ic]] = k[[r, c]];
        }
    }
    out
}

/// Assemble the purification problem for a mixed J_AB over the given
/// A, B, A', B' partition: initial purification J = (T ⊕ 𝟙) J_sta^p (T ⊕ 𝟙)⁻¹
/// and the whitened ancilla frame (stabilizer directions drop out through
/// the metric kernel).
pub fn build_problem(
    j_ab: &Array2<f64>,
    kind: ParticleKind,
    partition: SubsystemPartition,
) -> Result<PurificationProblem> {
    let n_sys = partition.modes_of_union(&["A", "B"])?.len();
    if j_ab.nrows() != 2 * n_sys {
        return Err(Error::DimensionMismatch {
            expected: 2 * n_sys,
            got: j_ab.nrows(),
        });
    }
    let n_tot = partition.n_total();
    let n_anc = n_tot - n_sys;
    let standard = mixed_standard_form(j_ab, kind)?;
    let j_p = standard_purification(&standard, n_anc)?;

    let sys_modes: Vec<usize> = (0..n_sys).collect();
    let embed_t = embed_modes(&standard.t, &sys_modes, n_tot);
    let embed_t_inv = linalg::inv_real(&embed_t)?;
    let j_init = embed_t.dot(&j_p).dot(&embed_t_inv);

    let restriction_defect = max_abs(&(&restrict(&j_init, &partition, &["A", "B"])? - j_ab));
    if restriction_defect > 1e-9 {
        return Err(Error::Numerical(format!(
            "initial purification fails to restrict to J_AB (defect {restriction_defect:.3e})"
        )));
    }
    if purity_defect(&j_init) > 1e-10 {
        return Err(Error::Numerical("initial purification is not pure".into()));
    }

    let anc_modes: Vec<usize> = (n_sys..n_tot).collect();
    let raw: Vec<Array2<f64>> = full_algebra_basis(kind, n_anc)
        .generators
        .into_iter()
        .map(|k| embed_generator(&k, &anc_modes, n_tot))
        .collect();
    let frame = TangentFrame::spanning(kind, j_init.clone(), raw)?;

    Ok(PurificationProblem {
        kind,
        j_ab: j_ab.clone(),
        partition,
        standard,
        j_init,
        frame,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::sample_group;
    use crate::phase_space::{restrict_modes, restricted_spectrum, GaussianState};
    use approx::assert_abs_diff_eq;

    #[test]
    fn standard_form_of_already_standard_state() {
        let r = 0.3;
        let j = mixed_standard_j(ParticleKind::Boson, &[r]);
        let std = mixed_standard_form(&j, ParticleKind::Boson).unwrap();
        assert_abs_diff_eq!(std.r[0], r, epsilon = 1e-12);
        assert!(max_abs(&(&std.t - &linalg::eye(2))) < 1e-10);
    }

    #[test]
    fn standard_form_of_rotated_thermal_pair() {
        // Two bosonic thermal modes conjugated by a random symplectic.
        let rs = [0.7, 0.25];
        let j_sta = mixed_standard_j(ParticleKind::Boson, &rs);
        let m = sample_group(ParticleKind::Boson, 2, 42, 0.6);
        let m_inv = linalg::inv_real(&m).unwrap();
        let j = m.dot(&j_sta).dot(&m_inv);
        let std = mixed_standard_form(&j, ParticleKind::Boson).unwrap();
        assert_abs_diff_eq!(std.r[0], rs[0], epsilon = 1e-9);
        assert_abs_diff_eq!(std.r[1], rs[1], epsilon = 1e-9);
        let t_inv = linalg::inv_real(&std.t).unwrap();
        let rebuilt = std
            .t
            .dot(&mixed_standard_j(ParticleKind::Boson, &std.r))
            .dot(&t_inv);
        assert!(max_abs(&(&rebuilt - &j)) < 1e-8);
        assert!(crate::geometry::group_defect(&std.t, ParticleKind::Boson) < 1e-9);
    }

    #[test]
    fn standard_form_fermionic_rotated() {
        let rs = [0.55, 0.3];
        let j_sta = mixed_standard_j(ParticleKind::Fermion, &rs);
        let m = sample_group(ParticleKind::Fermion, 2, 3, 1.0);
        let j = m.dot(&j_sta).dot(&m.t());
        let std = mixed_standard_form(&j, ParticleKind::Fermion).unwrap();
        // Descending c means ascending r for fermions.
        assert_abs_diff_eq!(std.r[0], rs[1], epsilon = 1e-9);
        assert_abs_diff_eq!(std.r[1], rs[0], epsilon = 1e-9);
        let t_inv = linalg::inv_real(&std.t).unwrap();
        let rebuilt = std
            .t
            .dot(&mixed_standard_j(ParticleKind::Fermion, &std.r))
            .dot(&t_inv);
        assert!(max_abs(&(&rebuilt - &j)) < 1e-8);
        assert!(crate::geometry::group_defect(&std.t, ParticleKind::Fermion) < 1e-9);
    }

    #[test]
    fn degenerate_spectrum_still_pairs() {
        let rs = [0.4, 0.4];
        let j_sta = mixed_standard_j(ParticleKind::Boson, &rs);
        let m = sample_group(ParticleKind::Boson, 2, 8, 0.5);
        let m_inv = linalg::inv_real(&m).unwrap();
        let j = m.dot(&j_sta).dot(&m_inv);
        let std = mixed_standard_form(&j, ParticleKind::Boson).unwrap();
        let t_inv = linalg::inv_real(&std.t).unwrap();
        let rebuilt = std
            .t
            .dot(&mixed_standard_j(ParticleKind::Boson, &std.r))
            .dot(&t_inv);
        assert!(max_abs(&(&rebuilt - &j)) < 1e-8);
    }

    #[test]
    fn purified_standard_form_blocks() {
        let r = 0.45;
        for kind in [ParticleKind::Boson, ParticleKind::Fermion] {
            let standard = MixedStandardForm {
                kind,
                r: vec![r],
                t: linalg::eye(2),
            };
            let j = standard_purification(&standard, 1).unwrap();
            assert!(purity_defect(&j) < 1e-12);
            let jab = restrict_modes(&j, &[0], 2);
            let c = match kind {
                ParticleKind::Boson => (2.0 * r).cosh(),
                ParticleKind::Fermion => (2.0 * r).cos(),
            };
            assert_abs_diff_eq!(jab[[0, 1]], c, epsilon = 1e-14);
            let s = match kind {
                ParticleKind::Boson => (2.0 * r).sinh(),
                ParticleKind::Fermion => (2.0 * r).sin(),
            };
            assert_abs_diff_eq!(j[[0, 3]], s, epsilon = 1e-14);
        }
    }

    #[test]
    fn zero_squeezing_gives_product_of_pure_modes() {
        let standard = MixedStandardForm {
            kind: ParticleKind::Fermion,
            r: vec![0.0, 0.0],
            t: linalg::eye(4),
        };
        let j = standard_purification(&standard, 2).unwrap();
        let vac = GaussianState::vacuum(ParticleKind::Fermion, 4);
        assert!(max_abs(&(&j - vac.j_qp())) < 1e-14);
    }

    #[test]
    fn insufficient_ancilla_is_rejected() {
        let standard = MixedStandardForm {
            kind: ParticleKind::Boson,
            r: vec![0.5, 0.3],
            t: linalg::eye(4),
        };
        assert!(matches!(
            standard_purification(&standard, 1),
            Err(Error::InsufficientAncilla {
                needed: 2,
                available: 1
            })
        ));
    }

    fn two_mode_mixed(kind: ParticleKind, seed: u64) -> Array2<f64> {
        let rs = match kind {
            ParticleKind::Boson => [0.6, 0.2],
            ParticleKind::Fermion => [0.55, 0.3],
        };
        let j_sta = mixed_standard_j(kind, &rs);
        let m = sample_group(kind, 2, seed, 0.5);
        let m_inv = linalg::inv_real(&m).unwrap();
        m.dot(&j_sta).dot(&m_inv)
    }

    #[test]
    fn build_problem_preserves_restriction() {
        for kind in [ParticleKind::Boson, ParticleKind::Fermion] {
            let j_ab = two_mode_mixed(kind, 17);
            let part = SubsystemPartition::eop(1, 1, 1, 1);
            let prob = build_problem(&j_ab, kind, part).unwrap();

            for seed in 0..100u64 {
                let m = prob.sample_start(seed, 0.8);
                let m_inv = linalg::inv_real(&m).unwrap();
                let j_new = m.dot(&prob.j_init).dot(&m_inv);
                let jab = restrict(&j_new, &prob.partition, &["A", "B"]).unwrap();
                assert!(max_abs(&(&jab - &j_ab)) < 1e-8);
            }
        }
    }

    #[test]
    fn frame_dimensions_match_stabilizer_count() {
        // All r_i > 0: the ancilla stabilizer is trivial, so the frame spans
        // the whole ancilla algebra (dim so(4) = 6).
        let j_ab = two_mode_mixed(ParticleKind::Fermion, 23);
        let part = SubsystemPartition::eop(1, 1, 1, 1);
        let prob = build_problem(&j_ab, ParticleKind::Fermion, part).unwrap();
        assert_eq!(prob.frame.dim(), 6);

        // Pure J_AB (all r_i = 0): the stabilizer is u(2), frame shrinks to
        // dim so(4) − dim u(2) = 2.
        let j_pure = mixed_standard_j(ParticleKind::Fermion, &[0.0, 0.0]);
        let part = SubsystemPartition::eop(1, 1, 1, 1);
        let prob = build_problem(&j_pure, ParticleKind::Fermion, part).unwrap();
        assert_eq!(prob.frame.dim(), 2);
    }

    #[test]
    fn reductions_factorize() {
        let j_ab = two_mode_mixed(ParticleKind::Boson, 5);
        // One extra uncorrelated ancilla mode.
        let part = SubsystemPartition::eop(1, 1, 2, 1);
        let prob = build_problem(&j_ab, ParticleKind::Boson, part).unwrap();
        let j_anc = restrict(&prob.j_init, &prob.partition, &["A'", "B'"]).unwrap();
        let cs_anc = restricted_spectrum(&j_anc, ParticleKind::Boson).unwrap();
        let cs_sys = restricted_spectrum(&j_ab, ParticleKind::Boson).unwrap();
        assert_abs_diff_eq!(cs_anc[0], cs_sys[0], epsilon = 1e-9);
        assert_abs_diff_eq!(cs_anc[1], cs_sys[1], epsilon = 1e-9);
        assert_abs_diff_eq!(cs_anc[2], 1.0, epsilon = 1e-9);
    }
}
