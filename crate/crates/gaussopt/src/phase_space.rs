//! Phase-space conventions, covariance matrices and linear complex structures.
//!
//! All matrices are stored in the real (q, p) layout: indices 0..N are the
//! quadratures q̂_i, indices N..2N the conjugate p̂_i. For bosons the
//! state-independent background is the symplectic form Ω and the covariance
//! matrix is the metric G = ⟨ξ̂ξ̂ + ξ̂ξ̂⟩; for fermions (Majorana modes) the
//! roles swap: G = 𝟙 is fixed by the anticommutation relations and the
//! antisymmetric Ω = −i⟨[ξ̂, ξ̂]⟩ carries the state. Both combine into the
//! linear map J = −Gω = Ωg, which is the object everything else consumes:
//! J² = −𝟙 characterizes pure states, and the imaginary eigenvalue pairs
//! ±i c of a mixed J encode the per-mode mixedness.
//!
//! The complex (creation/annihilation) basis related by â = (q̂ + ip̂)/√2 is
//! available as a view; internal storage stays real.

use ndarray::prelude::*;
use ndarray::concatenate;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::linalg::{self, max_abs, max_abs_c, to_complex};
use crate::{Error, Result};

/// Statistics of the modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParticleKind {
    Boson,
    Fermion,
}

/// Operator basis convention: real quadratures/Majorana modes (`Qp`) or
/// creation/annihilation operators (`Aab`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisConvention {
    Qp,
    Aab,
}

/// Tolerance for the purity test ‖J² + 𝟙‖_max.
pub const PURITY_TOL: f64 = 1e-10;
/// Tolerance on eigenvalue real parts when extracting a restricted spectrum.
pub const SPECTRUM_REAL_TOL: f64 = 1e-9;
/// Allowed range violation of the c_i before clamping fails.
pub const SPECTRUM_CLAMP_TOL: f64 = 1e-8;

/// The state-independent structure fixed by the (anti)commutation relations:
/// Ω for bosons, G for fermions.
#[derive(Debug, Clone)]
pub struct BackgroundStructure {
    pub kind: ParticleKind,
    pub basis: BasisConvention,
    n: usize,
    form_qp: Array2<f64>,
}

impl BackgroundStructure {
    pub fn n_modes(&self) -> usize {
        self.n
    }

    /// The form matrix in the presentation basis.
    pub fn form(&self) -> Array2<C64> {
        match self.basis {
            BasisConvention::Qp => to_complex(&self.form_qp),
            BasisConvention::Aab => form_to_aab(&to_complex(&self.form_qp)),
        }
    }

    /// The form matrix in the canonical real layout.
    pub fn form_qp(&self) -> &Array2<f64> {
        &self.form_qp
    }
}

/// Standard symplectic form of `n` bosonic modes in the (q, p) layout.
pub fn standard_omega(n: usize) -> Array2<f64> {
    let mut f = Array2::zeros((2 * n, 2 * n));
    for i in 0..n {
        f[[i, n + i]] = 1.0;
        f[[n + i, i]] = -1.0;
    }
    f
}

/// Inverse ω of the standard symplectic form.
pub fn standard_omega_inv(n: usize) -> Array2<f64> {
    standard_omega(n).mapv(|x| -x)
}

/// Background structure in a standard basis: Ω for bosons, G = 𝟙 for fermions.
pub fn standard_background(
    kind: ParticleKind,
    basis: BasisConvention,
    n: usize,
) -> BackgroundStructure {
    assert!(n >= 1, "mode count must be positive");
    let form_qp = match kind {
        ParticleKind::Boson => standard_omega(n),
        ParticleKind::Fermion => Array2::eye(2 * n),
    };
    BackgroundStructure {
        kind,
        basis,
        n,
        form_qp,
    }
}

/// Unitary change of basis U with ξ_aab = U ξ_qp, i.e. â = (q̂ + ip̂)/√2.
pub fn aab_from_qp_matrix(n: usize) -> Array2<C64> {
    let s = 1.0 / 2.0f64.sqrt();
    let mut u = Array2::zeros((2 * n, 2 * n));
    for i in 0..n {
        u[[i, i]] = C64::new(s, 0.0);
        u[[i, n + i]] = C64::new(0.0, s);
        u[[n + i, i]] = C64::new(s, 0.0);
        u[[n + i, n + i]] = C64::new(0.0, -s);
    }
    u
}

/// Transform a bilinear form with upper indices (Γ, Ω, G) from qp to aab.
pub fn form_to_aab(form_qp: &Array2<C64>) -> Array2<C64> {
    let n = form_qp.nrows() / 2;
    let u = aab_from_qp_matrix(n);
    u.dot(form_qp).dot(&u.t())
}

/// Transform a bilinear form from aab back to qp (must come out real).
pub fn form_from_aab(form_aab: &Array2<C64>) -> Result<Array2<f64>> {
    let n = form_aab.nrows() / 2;
    let u = aab_from_qp_matrix(n);
    let uinv = linalg::conj_t(&u);
    let qp = uinv.dot(form_aab).dot(&uinv.t());
    linalg::real_part_checked(&qp, 1e-10, "aab→qp form")
}

/// Transform a linear map (J, M, K) from qp to aab.
pub fn map_to_aab(map_qp: &Array2<C64>) -> Array2<C64> {
    let n = map_qp.nrows() / 2;
    let u = aab_from_qp_matrix(n);
    u.dot(map_qp).dot(&linalg::conj_t(&u))
}

pub fn map_from_aab(map_aab: &Array2<C64>) -> Result<Array2<f64>> {
    let n = map_aab.nrows() / 2;
    let u = aab_from_qp_matrix(n);
    let qp = linalg::conj_t(&u).dot(map_aab).dot(&u);
    linalg::real_part_checked(&qp, 1e-10, "aab→qp map")
}

/// Complex structure J = −Gω (bosons) or J = Ωg (fermions) from a covariance
/// matrix and its background, in the qp layout.
pub fn complex_structure(gamma: &Array2<f64>, background: &BackgroundStructure) -> Result<Array2<f64>> {
    let n = background.n;
    if gamma.nrows() != 2 * n || gamma.ncols() != 2 * n {
        return Err(Error::DimensionMismatch {
            expected: 2 * n,
            got: gamma.nrows(),
        });
    }
    match background.kind {
        ParticleKind::Boson => {
            // ω is the inverse of the background symplectic form.
            let omega_inv = linalg::inv_real(background.form_qp()).map_err(|_| Error::SingularForm)?;
            Ok(gamma.dot(&omega_inv).mapv(|x| -x))
        }
        ParticleKind::Fermion => {
            let g_inv = linalg::inv_real(background.form_qp()).map_err(|_| Error::SingularForm)?;
            Ok(gamma.dot(&g_inv))
        }
    }
}

/// The dual route of the defining relation: Ωg for bosons, −Gω for fermions,
/// inverting the state-dependent form (pseudo-inverse with cutoff 1e−12 for
/// singular fermionic Ω). On pure states it agrees with `complex_structure`.
pub fn complex_structure_dual(
    gamma: &Array2<f64>,
    background: &BackgroundStructure,
) -> Result<Array2<f64>> {
    match background.kind {
        ParticleKind::Boson => {
            let g_inv = linalg::inv_real(gamma).map_err(|_| Error::SingularForm)?;
            Ok(background.form_qp().dot(&g_inv))
        }
        ParticleKind::Fermion => {
            let omega_pinv = linalg::pinv_antisymmetric(gamma, 1e-12)?;
            Ok(background.form_qp().dot(&omega_pinv).mapv(|x| -x))
        }
    }
}

/// ‖J² + 𝟙‖_max; zero exactly on pure Gaussian states.
pub fn purity_defect(j: &Array2<f64>) -> f64 {
    let eye: Array2<f64> = Array2::eye(j.nrows());
    let d = j.dot(j) + &eye;
    max_abs(&d)
}

pub fn purity_defect_c(j: &Array2<C64>) -> f64 {
    let eye: Array2<f64> = Array2::eye(j.nrows());
    let d = j.dot(j) + &to_complex(&eye);
    max_abs_c(&d)
}

/// Eigenvalue parameters c_i of a restricted complex structure, sorted in
/// descending order and clamped into the kind-specific range.
pub fn restricted_spectrum(j: &Array2<f64>, kind: ParticleKind) -> Result<Vec<f64>> {
    let (vals, _) = linalg::eig_real(j)?;
    restricted_spectrum_from_eigenvalues(vals.as_slice().unwrap(), kind)
}

pub(crate) fn restricted_spectrum_from_eigenvalues(
    vals: &[C64],
    kind: ParticleKind,
) -> Result<Vec<f64>> {
    let scale = vals.iter().fold(1.0f64, |m, z| m.max(z.norm()));
    let max_re = vals.iter().fold(0.0f64, |m, z| m.max(z.re.abs()));
    if max_re > SPECTRUM_REAL_TOL * scale {
        return Err(Error::NotRestrictedComplexStructure(max_re));
    }
    let mut cs: Vec<f64> = vals.iter().filter(|z| z.im > 0.0).map(|z| z.im).collect();
    // Zero eigenvalues of fermionic J pair up as c = 0; recover them by count.
    let n = vals.len() / 2;
    while cs.len() < n {
        cs.push(0.0);
    }
    if cs.len() != n {
        return Err(Error::NotRestrictedComplexStructure(max_re));
    }
    for c in &mut cs {
        match kind {
            ParticleKind::Boson => {
                if *c < 1.0 - SPECTRUM_CLAMP_TOL {
                    return Err(Error::NotRestrictedComplexStructure(1.0 - *c));
                }
                *c = c.max(1.0);
            }
            ParticleKind::Fermion => {
                if *c > 1.0 + SPECTRUM_CLAMP_TOL || *c < -SPECTRUM_CLAMP_TOL {
                    return Err(Error::NotRestrictedComplexStructure(*c));
                }
                *c = c.clamp(0.0, 1.0);
            }
        }
    }
    cs.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(cs)
}

/// Labeled, ordered mode blocks over an N-mode system.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubsystemPartition {
    blocks: Vec<(String, Vec<usize>)>,
    n_total: usize,
}

impl SubsystemPartition {
    pub fn new(blocks: Vec<(String, Vec<usize>)>, n_total: usize) -> Result<Self> {
        let mut seen = vec![false; n_total];
        for (label, modes) in &blocks {
            for &m in modes {
                if m >= n_total || seen[m] {
                    return Err(Error::BadBlock(label.clone()));
                }
                seen[m] = true;
            }
        }
        if !seen.iter().all(|&s| s) {
            return Err(Error::BadBlock("blocks do not cover all modes".into()));
        }
        Ok(Self { blocks, n_total })
    }

    /// The standard A, B, A', B' partition used by purification problems,
    /// with modes laid out in that order.
    pub fn eop(n_a: usize, n_b: usize, n_ap: usize, n_bp: usize) -> Self {
        let mut start = 0;
        let mut block = |label: &str, len: usize| {
            let modes: Vec<usize> = (start..start + len).collect();
            start += len;
            (label.to_string(), modes)
        };
        let blocks = vec![
            block("A", n_a),
            block("B", n_b),
            block("A'", n_ap),
            block("B'", n_bp),
        ];
        Self {
            blocks,
            n_total: start,
        }
    }

    pub fn n_total(&self) -> usize {
        self.n_total
    }

    pub fn labels(&self) -> Vec<&str> {
        self.blocks.iter().map(|(l, _)| l.as_str()).collect()
    }

    /// Mode indices of one block.
    pub fn modes_of(&self, label: &str) -> Result<&[usize]> {
        self.blocks
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, m)| m.as_slice())
            .ok_or_else(|| Error::BadBlock(label.to_string()))
    }

    /// Mode indices of a union of blocks, in block order.
    pub fn modes_of_union(&self, labels: &[&str]) -> Result<Vec<usize>> {
        let mut modes = Vec::new();
        for label in labels {
            modes.extend_from_slice(self.modes_of(label)?);
        }
        Ok(modes)
    }
}

/// Row/column indices in the (q, p) layout belonging to the given modes.
pub fn qp_indices(modes: &[usize], n_total: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = modes.to_vec();
    idx.extend(modes.iter().map(|m| m + n_total));
    idx
}

/// Sub-block of a 2N×2N qp-layout matrix on the given modes, reindexed to the
/// qp layout of the smaller system.
pub fn restrict_modes(j: &Array2<f64>, modes: &[usize], n_total: usize) -> Array2<f64> {
    let idx = qp_indices(modes, n_total);
    let k = idx.len();
    let mut out = Array2::zeros((k, k));
    for (r, &ir) in idx.iter().enumerate() {
        for (c, &ic) in idx.iter().enumerate() {
            out[[r, c]] = j[[ir, ic]];
        }
    }
    out
}

/// Restriction of J to a partition block (or union of blocks).
pub fn restrict(
    j: &Array2<f64>,
    partition: &SubsystemPartition,
    labels: &[&str],
) -> Result<Array2<f64>> {
    let modes = partition.modes_of_union(labels)?;
    if 2 * partition.n_total() != j.nrows() {
        return Err(Error::DimensionMismatch {
            expected: 2 * partition.n_total(),
            got: j.nrows(),
        });
    }
    Ok(restrict_modes(j, &modes, partition.n_total()))
}

/// A Gaussian state: background plus state-dependent covariance matrix, with
/// the derived complex structure cached. Canonical storage is the real qp
/// layout; `basis` only selects the presentation of the accessors.
#[derive(Debug, Clone)]
pub struct GaussianState {
    background: BackgroundStructure,
    gamma_qp: Array2<f64>,
    j_qp: Array2<f64>,
}

impl GaussianState {
    /// Build a state from its covariance matrix in the qp layout.
    pub fn from_gamma_qp(kind: ParticleKind, gamma: Array2<f64>) -> Result<Self> {
        let n2 = gamma.nrows();
        if n2 % 2 != 0 || gamma.ncols() != n2 {
            return Err(Error::DimensionMismatch {
                expected: n2,
                got: gamma.ncols(),
            });
        }
        let n = n2 / 2;
        let scale = max_abs(&gamma).max(1.0);
        match kind {
            ParticleKind::Boson => {
                let defect = max_abs(&(&gamma - &gamma.t()));
                if defect > 1e-10 * scale {
                    return Err(Error::Numerical(format!(
                        "bosonic covariance matrix not symmetric (defect {defect:.3e})"
                    )));
                }
                let (vals, _) = linalg::eigh_real(&gamma)?;
                if vals.iter().any(|&v| v <= 0.0) {
                    return Err(Error::NotPositive);
                }
            }
            ParticleKind::Fermion => {
                let defect = max_abs(&(&gamma + &gamma.t()));
                if defect > 1e-10 * scale {
                    return Err(Error::Numerical(format!(
                        "fermionic covariance matrix not antisymmetric (defect {defect:.3e})"
                    )));
                }
            }
        }
        let background = standard_background(kind, BasisConvention::Qp, n);
        let j_qp = complex_structure(&gamma, &background)?;
        // Validate the spectrum range (clamped inside restricted_spectrum).
        restricted_spectrum(&j_qp, kind)?;
        Ok(Self {
            background,
            gamma_qp: gamma,
            j_qp,
        })
    }

    /// Build a state from a covariance matrix given in either basis.
    pub fn from_gamma(
        kind: ParticleKind,
        basis: BasisConvention,
        gamma: &Array2<C64>,
    ) -> Result<Self> {
        let gamma_qp = match basis {
            BasisConvention::Qp => linalg::real_part_checked(gamma, 1e-10, "qp covariance")?,
            BasisConvention::Aab => form_from_aab(gamma)?,
        };
        let mut state = Self::from_gamma_qp(kind, gamma_qp)?;
        state.background.basis = basis;
        Ok(state)
    }

    /// Vacuum / standard reference state.
    pub fn vacuum(kind: ParticleKind, n: usize) -> Self {
        let gamma = match kind {
            ParticleKind::Boson => Array2::eye(2 * n),
            ParticleKind::Fermion => standard_omega(n),
        };
        Self::from_gamma_qp(kind, gamma).expect("standard vacuum is a valid state")
    }

    pub fn kind(&self) -> ParticleKind {
        self.background.kind
    }

    pub fn basis(&self) -> BasisConvention {
        self.background.basis
    }

    pub fn n_modes(&self) -> usize {
        self.background.n
    }

    pub fn background(&self) -> &BackgroundStructure {
        &self.background
    }

    pub fn gamma_qp(&self) -> &Array2<f64> {
        &self.gamma_qp
    }

    pub fn j_qp(&self) -> &Array2<f64> {
        &self.j_qp
    }

    /// Covariance matrix in the presentation basis.
    pub fn gamma(&self) -> Array2<C64> {
        match self.background.basis {
            BasisConvention::Qp => to_complex(&self.gamma_qp),
            BasisConvention::Aab => form_to_aab(&to_complex(&self.gamma_qp)),
        }
    }

    /// Complex structure in the presentation basis.
    pub fn j(&self) -> Array2<C64> {
        match self.background.basis {
            BasisConvention::Qp => to_complex(&self.j_qp),
            BasisConvention::Aab => map_to_aab(&to_complex(&self.j_qp)),
        }
    }

    pub fn purity_defect(&self) -> f64 {
        purity_defect(&self.j_qp)
    }

    pub fn is_pure(&self) -> bool {
        self.purity_defect() <= PURITY_TOL
    }

    pub fn restricted_spectrum(&self) -> Result<Vec<f64>> {
        restricted_spectrum(&self.j_qp, self.kind())
    }

    /// Re-express the state in another basis convention. The matrices are
    /// pushed through the fixed change-of-basis unitary and re-canonicalized,
    /// so a round trip exercises the full transformation.
    pub fn change_basis(&self, to: BasisConvention) -> Result<Self> {
        let gamma_in_to = match to {
            BasisConvention::Qp => to_complex(&self.gamma_qp),
            BasisConvention::Aab => form_to_aab(&to_complex(&self.gamma_qp)),
        };
        Self::from_gamma(self.kind(), to, &gamma_in_to)
    }

    /// Reduced state on a subset of modes.
    pub fn restrict_to_modes(&self, modes: &[usize]) -> Result<Self> {
        let gamma = restrict_modes(&self.gamma_qp, modes, self.n_modes());
        Self::from_gamma_qp(self.kind(), gamma)
    }
}

/// Block matrix [[a, b], [c, d]].
pub fn assemble_blocks(
    a: &Array2<f64>,
    b: &Array2<f64>,
    c: &Array2<f64>,
    d: &Array2<f64>,
) -> Array2<f64> {
    let top = concatenate![Axis(1), a.view(), b.view()];
    let bottom = concatenate![Axis(1), c.view(), d.view()];
    concatenate![Axis(0), top, bottom]
}

/// N×N blocks (qq, qp, pq, pp) of a 2N×2N qp-layout matrix.
pub fn split_blocks(m: &Array2<f64>) -> (Array2<f64>, Array2<f64>, Array2<f64>, Array2<f64>) {
    let n = m.nrows() / 2;
    (
        m.slice(s![..n, ..n]).to_owned(),
        m.slice(s![..n, n..]).to_owned(),
        m.slice(s![n.., ..n]).to_owned(),
        m.slice(s![n.., n..]).to_owned(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn standard_backgrounds_match_conventions() {
        let b = standard_background(ParticleKind::Boson, BasisConvention::Qp, 1);
        assert_eq!(b.form_qp(), &array![[0.0, 1.0], [-1.0, 0.0]]);

        let f = standard_background(ParticleKind::Fermion, BasisConvention::Qp, 1);
        assert_eq!(f.form_qp(), &linalg::eye(2));

        let b_aab = standard_background(ParticleKind::Boson, BasisConvention::Aab, 1).form();
        assert!((b_aab[[0, 1]] - C64::new(0.0, -1.0)).norm() < 1e-14);
        assert!((b_aab[[1, 0]] - C64::new(0.0, 1.0)).norm() < 1e-14);
        assert!(b_aab[[0, 0]].norm() < 1e-14);
    }

    #[test]
    fn vacuum_complex_structures() {
        let b = GaussianState::vacuum(ParticleKind::Boson, 1);
        assert_eq!(b.j_qp(), &array![[0.0, 1.0], [-1.0, 0.0]]);
        assert!(b.is_pure());

        let f = GaussianState::vacuum(ParticleKind::Fermion, 1);
        assert_eq!(f.j_qp(), &array![[0.0, 1.0], [-1.0, 0.0]]);
        assert!(f.is_pure());
    }

    /// Single-mode squeezed covariance, rotated by phase phi.
    pub(crate) fn squeezed_gamma(rho: f64, phi: f64) -> Array2<f64> {
        array![
            [
                rho.cosh() + phi.cos() * rho.sinh(),
                phi.sin() * rho.sinh()
            ],
            [
                phi.sin() * rho.sinh(),
                rho.cosh() - phi.cos() * rho.sinh()
            ]
        ]
    }

    #[test]
    fn squeezed_state_j_matches_closed_form() {
        let (rho, phi) = (0.7, 0.4);
        let st = GaussianState::from_gamma_qp(ParticleKind::Boson, squeezed_gamma(rho, phi)).unwrap();
        let j = st.j_qp();
        let expect = array![
            [
                -phi.sin() * rho.sinh(),
                phi.cos() * rho.sinh() + rho.cosh()
            ],
            [
                phi.cos() * rho.sinh() - rho.cosh(),
                phi.sin() * rho.sinh()
            ]
        ];
        assert!(max_abs(&(j - &expect)) < 1e-12);
        assert!(st.purity_defect() < 1e-12);
    }

    #[test]
    fn dual_route_agrees_on_pure_states() {
        let st = GaussianState::from_gamma_qp(ParticleKind::Boson, squeezed_gamma(0.9, 1.3)).unwrap();
        let dual = complex_structure_dual(st.gamma_qp(), st.background()).unwrap();
        assert!(max_abs(&(&dual - st.j_qp())) < 1e-10);

        let f = GaussianState::vacuum(ParticleKind::Fermion, 3);
        let dual = complex_structure_dual(f.gamma_qp(), f.background()).unwrap();
        assert!(max_abs(&(&dual - f.j_qp())) < 1e-10);
    }

    #[test]
    fn purity_defect_of_mixed_blocks() {
        // Fermionic mixed single mode with c = cos(2r), r = pi/8.
        let r = std::f64::consts::PI / 8.0;
        let c = (2.0 * r).cos();
        let j = array![[0.0, c], [-c, 0.0]];
        assert_abs_diff_eq!(purity_defect(&j), 0.5, epsilon = 1e-14);

        // Bosonic mixed single mode with c = cosh(2r).
        let r = 0.37f64;
        let c = (2.0 * r).cosh();
        let j = array![[0.0, c], [-c, 0.0]];
        assert_abs_diff_eq!(purity_defect(&j), c * c - 1.0, epsilon = 1e-12);
    }

    #[test]
    fn restricted_spectrum_ranges() {
        let st = GaussianState::vacuum(ParticleKind::Boson, 3);
        let cs = st.restricted_spectrum().unwrap();
        assert!(cs.iter().all(|&c| (c - 1.0).abs() < 1e-12));

        let c = 2.0f64.cosh();
        let j = array![[0.0, c], [-c, 0.0]];
        let cs = restricted_spectrum(&j, ParticleKind::Boson).unwrap();
        assert_abs_diff_eq!(cs[0], c, epsilon = 1e-12);

        // A matrix with real eigenvalues is rejected.
        let bad = array![[1.0, 0.0], [0.0, -1.0]];
        assert!(matches!(
            restricted_spectrum(&bad, ParticleKind::Boson),
            Err(Error::NotRestrictedComplexStructure(_))
        ));
    }

    #[test]
    fn fermionic_two_mode_example_spectrum() {
        // J_+ of the two-mode family at phi = 0: restriction to mode 1 has
        // c = cos(theta).
        let theta = 0.9f64;
        let (st, ct) = (theta.sin(), theta.cos());
        let omega = array![
            [0.0, 0.0, ct, st],
            [0.0, 0.0, -st, ct],
            [-ct, st, 0.0, 0.0],
            [-st, -ct, 0.0, 0.0]
        ];
        let state = GaussianState::from_gamma_qp(ParticleKind::Fermion, omega).unwrap();
        assert!(state.is_pure());
        let j1 = restrict_modes(state.j_qp(), &[0], 2);
        let cs = restricted_spectrum(&j1, ParticleKind::Fermion).unwrap();
        assert_abs_diff_eq!(cs[0], ct, epsilon = 1e-12);
    }

    #[test]
    fn change_basis_round_trip() {
        let st = GaussianState::from_gamma_qp(ParticleKind::Boson, squeezed_gamma(0.8, 0.2)).unwrap();
        let back = st
            .change_basis(BasisConvention::Aab)
            .unwrap()
            .change_basis(BasisConvention::Qp)
            .unwrap();
        assert!(max_abs(&(back.gamma_qp() - st.gamma_qp())) < 1e-12);
        assert!((back.purity_defect() - st.purity_defect()).abs() < 1e-10);
    }

    #[test]
    fn vacuum_aab_forms_match_standard_form() {
        let b = GaussianState::vacuum(ParticleKind::Boson, 1)
            .change_basis(BasisConvention::Aab)
            .unwrap();
        let g = b.gamma();
        assert!((g[[0, 1]] - C64::new(1.0, 0.0)).norm() < 1e-14);
        assert!(g[[0, 0]].norm() < 1e-14);

        let f = GaussianState::vacuum(ParticleKind::Fermion, 1)
            .change_basis(BasisConvention::Aab)
            .unwrap();
        let om = f.gamma();
        assert!((om[[0, 1]] - C64::new(0.0, -1.0)).norm() < 1e-14);
        assert!((om[[1, 0]] - C64::new(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn restriction_of_block_diagonal_state() {
        let c1 = 1.3f64.cosh();
        let c2 = 2.1f64.cosh();
        // Two uncorrelated bosonic thermal modes.
        let mut gamma = Array2::zeros((4, 4));
        gamma[[0, 0]] = c1;
        gamma[[2, 2]] = c1;
        gamma[[1, 1]] = c2;
        gamma[[3, 3]] = c2;
        let part = SubsystemPartition::new(
            vec![("A".into(), vec![0]), ("B".into(), vec![1])],
            2,
        )
        .unwrap();
        let st = GaussianState::from_gamma_qp(ParticleKind::Boson, gamma).unwrap();
        let ja = restrict(st.j_qp(), &part, &["A"]).unwrap();
        let cs = restricted_spectrum(&ja, ParticleKind::Boson).unwrap();
        assert_abs_diff_eq!(cs[0], c1, epsilon = 1e-12);
        let jall = restrict(st.j_qp(), &part, &["A", "B"]).unwrap();
        assert!(max_abs(&(&jall - st.j_qp())) < 1e-15);
    }

    #[test]
    fn restrict_commutes_with_change_basis() {
        // Restrict-then-convert equals convert-then-restrict: the aab index
        // layout (a_1..a_N, a†_1..a†_N) mirrors the qp one, so a mode subset
        // picks the same index pattern in both bases.
        let theta = 0.6f64;
        let (st_, ct) = (theta.sin(), theta.cos());
        let omega = array![
            [0.0, 0.0, ct, st_],
            [0.0, 0.0, -st_, ct],
            [-ct, st_, 0.0, 0.0],
            [-st_, -ct, 0.0, 0.0]
        ];
        let state = GaussianState::from_gamma_qp(ParticleKind::Fermion, omega).unwrap();
        let restricted_then_converted =
            map_to_aab(&to_complex(&restrict_modes(state.j_qp(), &[0], 2)));
        let j_aab = map_to_aab(&to_complex(state.j_qp()));
        let idx = [0usize, 2]; // mode 0 rows in the 2-mode aab layout
        let mut converted_then_restricted = Array2::zeros((2, 2));
        for (r, &ir) in idx.iter().enumerate() {
            for (c, &ic) in idx.iter().enumerate() {
                converted_then_restricted[[r, c]] = j_aab[[ir, ic]];
            }
        }
        assert!(max_abs_c(&(&restricted_then_converted - &converted_then_restricted)) < 1e-12);
    }

    #[test]
    fn bad_partition_is_rejected() {
        assert!(SubsystemPartition::new(
            vec![("A".into(), vec![0, 1]), ("B".into(), vec![1])],
            3
        )
        .is_err());
        let p = SubsystemPartition::eop(1, 1, 1, 1);
        assert!(p.modes_of("C").is_err());
        assert_eq!(p.modes_of_union(&["A", "A'"]).unwrap(), vec![0, 2]);
    }
}
