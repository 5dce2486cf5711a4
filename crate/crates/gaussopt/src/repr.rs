//! Conversions between the standard parametrizations of Gaussian states.
//!
//! Every conversion is anchored on the relative structure Δ = Γ Γ₀⁻¹ = −J J₀
//! of the state against a reference: its spectrum carries the squeezing
//! parameters, the principal square root T = √Δ is the pure squeezing
//! transformation with J = T J₀ T⁻¹, and K = ½ log Δ generates the Gaussian
//! unitary. From there one reaches the squeezing matrix γ (via
//! L = tanh(½ log Δ) = (Δ−𝟙)(Δ+𝟙)⁻¹), Bogoliubov coefficients (α, β),
//! thermal/modular parameters (q, c₀), position-space wave functions, and
//! the characteristic / quasiprobability exponents.
//!
//! For fermions the spectrum of Δ also decides whether two states can be
//! connected at all: an odd number of (−1, −1) eigenvalue pairs puts them in
//! different components of the Gaussian manifold, and a (−1,−1,−1,−1)
//! quadruple makes the square root ambiguous.

use ndarray::prelude::*;
use num_complex::Complex64 as C64;

use crate::linalg::{self, max_abs, max_abs_c};
use crate::phase_space::{
    self, split_blocks, standard_omega, standard_omega_inv, ParticleKind,
};
use crate::{Error, Result};

const COMPONENT_TOL: f64 = 1e-8;

/// Relative complex structure Δ = Γ Γ₀⁻¹ between two Gaussian states, with
/// the derived square root and logarithm when they exist.
#[derive(Debug, Clone)]
pub struct RelativeStructure {
    pub delta: Array2<f64>,
    pub eigenvalues: Vec<C64>,
    pub same_component: bool,
    ambiguous_sqrt: bool,
    sqrt: Option<Array2<f64>>,
    log_generator: Option<Array2<f64>>,
}

impl RelativeStructure {
    /// T = √Δ, the pure squeezing transformation with J = T J₀ T⁻¹.
    pub fn sqrt(&self) -> Result<&Array2<f64>> {
        if !self.same_component {
            return Err(Error::DifferentComponent);
        }
        if self.ambiguous_sqrt {
            return Err(Error::AmbiguousSqrt);
        }
        Ok(self.sqrt.as_ref().expect("present when unambiguous"))
    }

    /// K₊ = ½ log Δ, the generator of the Gaussian unitary mapping the
    /// reference onto the state.
    pub fn log_generator(&self) -> Result<&Array2<f64>> {
        if !self.same_component {
            return Err(Error::DifferentComponent);
        }
        if self.ambiguous_sqrt {
            return Err(Error::AmbiguousSqrt);
        }
        Ok(self.log_generator.as_ref().expect("present when unambiguous"))
    }
}

/// Squeezing matrix γ: complex N×N, symmetric for bosons and antisymmetric
/// for fermions, with ‖γ‖₂ < 1 required for bosonic normalizability.
#[derive(Debug, Clone)]
pub struct SqueezingMatrix {
    pub kind: ParticleKind,
    pub gamma: Array2<C64>,
}

/// Bogoliubov coefficients of b̂_i = α_ij â_j + β_ij â†_j.
#[derive(Debug, Clone)]
pub struct BogoliubovData {
    pub kind: ParticleKind,
    pub alpha: Array2<C64>,
    pub beta: Array2<C64>,
}

/// Modular (thermal) parameters of ρ = exp(−c₀ − q_ab ξ̂ξ̂) for bosons or
/// ρ = exp(−c₀ − i q_ab ξ̂ξ̂) for fermions.
#[derive(Debug, Clone)]
pub struct ThermalData {
    pub kind: ParticleKind,
    pub q: Array2<f64>,
    pub c0: f64,
}

/// Bosonic wave-function parameters: ψ(x) ∝ exp(−½ xᵀ(A + iB)x) for pure
/// states, ρ(x, x̄) with additional C, D blocks for mixed ones.
#[derive(Debug, Clone)]
pub struct WaveFunctionData {
    pub a: Array2<f64>,
    pub b: Array2<f64>,
    /// Mixing blocks (C, D); absent for pure states. C is symmetric,
    /// D antisymmetric.
    pub cd: Option<(Array2<f64>, Array2<f64>)>,
}

impl WaveFunctionData {
    /// Normalization factor: (det A/π)^¼ for pure states,
    /// (det (A+C)/π)^½ for mixed ones.
    pub fn normalization(&self) -> Result<f64> {
        use ndarray_linalg::Determinant;
        let n = self.a.nrows() as f64;
        match &self.cd {
            None => {
                let det = self.a.det()?;
                if det <= 0.0 {
                    return Err(Error::NotPositive);
                }
                Ok((det / std::f64::consts::PI.powf(n)).powf(0.25))
            }
            Some((c, _)) => {
                let det = (&self.a + c).det()?;
                if det <= 0.0 {
                    return Err(Error::NotPositive);
                }
                Ok((det / std::f64::consts::PI.powf(n)).sqrt())
            }
        }
    }
}

/// Relative complex structure of `gamma` with respect to `gamma0`, with its
/// spectrum classified and the square root / logarithm extracted when the
/// states lie in the same component.
pub fn relative_structure(
    gamma: &Array2<f64>,
    gamma0: &Array2<f64>,
    kind: ParticleKind,
) -> Result<RelativeStructure> {
    let gamma0_inv = linalg::inv_real(gamma0).map_err(|_| Error::SingularForm)?;
    let delta = gamma.dot(&gamma0_inv);
    let (vals, _) = linalg::eig_real(&delta)?;
    let eigenvalues: Vec<C64> = vals.to_vec();

    let mut same_component = true;
    let mut ambiguous_sqrt = false;
    match kind {
        ParticleKind::Boson => {
            // Pairs (e^{2r}, e^{-2r}); positive real spectrum.
            for z in &eigenvalues {
                if z.re <= 0.0 && z.im.abs() < COMPONENT_TOL {
                    return Err(Error::Numerical(format!(
                        "bosonic relative structure has non-positive eigenvalue {z}"
                    )));
                }
            }
        }
        ParticleKind::Fermion => {
            let minus_ones = eigenvalues
                .iter()
                .filter(|z| (*z + C64::new(1.0, 0.0)).norm() < COMPONENT_TOL)
                .count();
            let pairs = minus_ones / 2;
            if pairs % 2 == 1 {
                same_component = false;
            } else if pairs > 0 {
                ambiguous_sqrt = true;
            }
        }
    }

    let (sqrt, log_generator) = if same_component && !ambiguous_sqrt {
        let t = linalg::sqrtm_real(&delta, "sqrt of relative structure")?;
        let k = linalg::logm_real(&delta, "log of relative structure")?.mapv(|x| 0.5 * x);
        (Some(t), Some(k))
    } else {
        (None, None)
    };

    Ok(RelativeStructure {
        delta,
        eigenvalues,
        same_component,
        ambiguous_sqrt,
        sqrt,
        log_generator,
    })
}

/// Γ = e^K Γ₀ e^{Kᵀ}: the covariance matrix reached by the Gaussian unitary
/// generated by K.
pub fn generator_to_covariance(k: &Array2<f64>, gamma0: &Array2<f64>) -> Array2<f64> {
    let m = linalg::expm_real(k);
    m.dot(gamma0).dot(&m.t())
}

/// Squeezing matrix from a covariance pair: γ is read off the block form of
/// L = tanh(½ log Δ) = (Δ − 𝟙)(Δ + 𝟙)⁻¹. Requires gamma0 in the standard
/// form so the (q, p) block pattern of L is meaningful.
pub fn covariance_to_squeezing(
    gamma: &Array2<f64>,
    gamma0: &Array2<f64>,
    kind: ParticleKind,
) -> Result<SqueezingMatrix> {
    let rel = relative_structure(gamma, gamma0, kind)?;
    if !rel.same_component {
        return Err(Error::DifferentComponent);
    }
    let n2 = rel.delta.nrows();
    let eye: Array2<f64> = Array2::eye(n2);
    let denom = &rel.delta + &eye;
    let denom_inv = linalg::inv_real(&denom).map_err(|_| Error::DifferentComponent)?;
    let l = (&rel.delta - &eye).dot(&denom_inv);

    let (l1, l2, l21, l22) = split_blocks(&l);
    let block_dev = max_abs(&(&l21 - &l2)).max(max_abs(&(&l22 + &l1)));
    if block_dev > 1e-7 {
        return Err(Error::Numerical(format!(
            "L lacks the standard-basis block pattern (deviation {block_dev:.3e}); \
             is gamma0 in standard form?"
        )));
    }
    let mut g: Array2<C64> = Array2::zeros((l1.nrows(), l1.ncols()));
    for ((r, c), v) in g.indexed_iter_mut() {
        *v = C64::new(l1[[r, c]], l2[[r, c]]);
    }
    // Enforce the symmetry class, checking the input was close to it.
    let gt = g.t().to_owned();
    let (sym, dev) = match kind {
        ParticleKind::Boson => ((&g + &gt).mapv(|z| z / 2.0), max_abs_c(&(&g - &gt))),
        ParticleKind::Fermion => ((&g - &gt).mapv(|z| z / 2.0), max_abs_c(&(&g + &gt))),
    };
    if dev > 1e-7 {
        return Err(Error::Numerical(format!(
            "squeezing matrix violates its symmetry class by {dev:.3e}"
        )));
    }
    Ok(SqueezingMatrix { kind, gamma: sym })
}

/// Covariance matrix of the squeezed vacuum with squeezing matrix γ, via the
/// closed-form block expressions. Errors with `NonNormalizable` when a
/// bosonic γ has spectral norm ≥ 1.
pub fn squeezing_to_covariance(sq: &SqueezingMatrix) -> Result<Array2<f64>> {
    let g = &sq.gamma;
    let n = g.nrows();
    let gd = linalg::conj_t(g);
    let gdg = gd.dot(g);
    let eye_c: Array2<C64> = Array2::eye(n).mapv(|x: f64| C64::new(x, 0.0));
    let two = C64::new(2.0, 0.0);

    match sq.kind {
        ParticleKind::Boson => {
            let (norms, _) = linalg::eigh_c(&gdg)?;
            let top = norms.iter().cloned().fold(0.0f64, f64::max).max(0.0);
            if top >= 1.0 {
                return Err(Error::NonNormalizable(top.sqrt()));
            }
            let inv = linalg::inv_c(&(&eye_c - &gdg))?;
            let plus = (&eye_c + &g.mapv(|z| z * two) + &gdg).dot(&inv);
            let minus = (&eye_c - &g.mapv(|z| z * two) + &gdg).dot(&inv);
            let mixed = (&eye_c.mapv(|z| -z) + &g.mapv(|z| z * two) - &gdg).dot(&inv);
            let g1 = plus.mapv(|z| z.re);
            let g2 = plus.mapv(|z| z.im);
            let g3 = mixed.mapv(|z| z.im);
            let g4 = minus.mapv(|z| z.re);
            Ok(phase_space::assemble_blocks(&g1, &g2, &g3, &g4))
        }
        ParticleKind::Fermion => {
            let inv = linalg::inv_c(&(&eye_c + &gdg))?;
            let o1 = (&eye_c + g).mapv(|z| -two * z).dot(&inv).mapv(|z| z.im);
            let o2 = (&eye_c + &g.mapv(|z| z * two) - &gdg)
                .dot(&inv)
                .mapv(|z| z.re);
            let o3 = (&eye_c.mapv(|z| -z) + &g.mapv(|z| z * two) + &gdg)
                .dot(&inv)
                .mapv(|z| z.re);
            let o4 = (g - &eye_c).mapv(|z| two * z).dot(&inv).mapv(|z| z.im);
            Ok(phase_space::assemble_blocks(&o1, &o2, &o3, &o4))
        }
    }
}

/// The closed-form fraction recovering γ directly from the covariance blocks
/// (the independent route; `covariance_to_squeezing` goes through Δ).
pub fn squeezing_from_covariance_blocks(
    gamma: &Array2<f64>,
    kind: ParticleKind,
) -> Result<SqueezingMatrix> {
    let (b1, b2, b3, b4) = split_blocks(gamma);
    let n = b1.nrows();
    let cm = |re: &Array2<f64>, im: &Array2<f64>| -> Array2<C64> {
        let mut out = Array2::zeros((n, n));
        for ((r, c), v) in out.indexed_iter_mut() {
            *v = C64::new(re[[r, c]], im[[r, c]]);
        }
        out
    };
    let eye2: Array2<f64> = Array2::eye(n).mapv(|x: f64| 2.0 * x);
    let g = match kind {
        ParticleKind::Boson => {
            // γ = (G1 − G4 + i(G2 + G3)) (2 + G1 + G4 + i(G2 − G3))⁻¹
            let num = cm(&(&b1 - &b4), &(&b2 + &b3));
            let den = cm(&(&eye2 + &b1 + &b4), &(&b2 - &b3));
            num.dot(&linalg::inv_c(&den)?)
        }
        ParticleKind::Fermion => {
            // γ = (Ω2 + Ω3 − i(Ω1 − Ω4)) (2 + Ω2 − Ω3 − i(Ω1 + Ω4))⁻¹
            let num = cm(&(&b2 + &b3), &(&b1 - &b4).mapv(|x| -x));
            let den = cm(&(&eye2 + &b2 - &b3), &(&b1 + &b4).mapv(|x| -x));
            num.dot(&linalg::inv_c(&den)?)
        }
    };
    Ok(SqueezingMatrix { kind, gamma: g })
}

/// Real symplectic/orthogonal group element assembled from Bogoliubov
/// coefficients, in the qp layout. Fails with `NotInGroup` if (α, β) are
/// inconsistent.
pub fn bogoliubov_to_group(data: &BogoliubovData) -> Result<Array2<f64>> {
    let re_a = data.alpha.mapv(|z| z.re);
    let im_a = data.alpha.mapv(|z| z.im);
    let re_b = data.beta.mapv(|z| z.re);
    let im_b = data.beta.mapv(|z| z.im);
    let m = phase_space::assemble_blocks(
        &(&re_a + &re_b),
        &(&im_b - &im_a),
        &(&im_a + &im_b),
        &(&re_a - &re_b),
    );
    let defect = crate::geometry::group_defect(&m, data.kind);
    if defect > 1e-8 {
        return Err(Error::NotInGroup(defect));
    }
    Ok(m)
}

/// Complex-basis form [[α, β], [β*, α*]] of the same transformation.
pub fn bogoliubov_matrix_aab(data: &BogoliubovData) -> Array2<C64> {
    let n = data.alpha.nrows();
    let mut m = Array2::zeros((2 * n, 2 * n));
    for r in 0..n {
        for c in 0..n {
            m[[r, c]] = data.alpha[[r, c]];
            m[[r, n + c]] = data.beta[[r, c]];
            m[[n + r, c]] = data.beta[[r, c]].conj();
            m[[n + r, n + c]] = data.alpha[[r, c]].conj();
        }
    }
    m
}

/// Read (α, β) off a group element in the qp layout.
pub fn group_to_bogoliubov_from_m(m: &Array2<f64>, kind: ParticleKind) -> BogoliubovData {
    let (m11, m12, m21, m22) = split_blocks(m);
    let n = m11.nrows();
    let mut alpha = Array2::zeros((n, n));
    let mut beta = Array2::zeros((n, n));
    for r in 0..n {
        for c in 0..n {
            alpha[[r, c]] = C64::new(
                (m11[[r, c]] + m22[[r, c]]) / 2.0,
                (m21[[r, c]] - m12[[r, c]]) / 2.0,
            );
            beta[[r, c]] = C64::new(
                (m11[[r, c]] - m22[[r, c]]) / 2.0,
                (m12[[r, c]] + m21[[r, c]]) / 2.0,
            );
        }
    }
    BogoliubovData { kind, alpha, beta }
}

/// Bogoliubov data of the transformation M = T u taking `gamma0` to `gamma`,
/// with T = √Δ and u a stabilizer element of the reference (defaults to 𝟙).
pub fn group_to_bogoliubov(
    gamma: &Array2<f64>,
    gamma0: &Array2<f64>,
    kind: ParticleKind,
    u: Option<&Array2<f64>>,
) -> Result<BogoliubovData> {
    let rel = relative_structure(gamma, gamma0, kind)?;
    let t = rel.sqrt()?;
    let m = match u {
        Some(u) => t.dot(u),
        None => t.clone(),
    };
    Ok(group_to_bogoliubov_from_m(&m, kind))
}

fn arccoth(z: C64) -> C64 {
    // ½ log((z+1)/(z−1))
    (((z + 1.0) / (z - 1.0)).ln()) * 0.5
}

fn arctanh(z: C64) -> C64 {
    (((1.0 + z) / (1.0 - z)).ln()) * 0.5
}

/// Modular parameters (q, c₀) of a mixed Gaussian state with restricted
/// complex structure J: q = −iω arccoth(iJ) and c₀ = ¼ log det((𝟙+J²)/4)
/// for bosons, q = −ig arctanh(iJ) and the opposite-sign c₀ for fermions.
/// Modes with c within 1e−10 of purity make the parameters diverge and are
/// reported through `PureModeDivergence`.
pub fn covariance_to_thermal(j: &Array2<f64>, kind: ParticleKind) -> Result<ThermalData> {
    let cs = phase_space::restricted_spectrum(j, kind)?;
    let offending: Vec<usize> = cs
        .iter()
        .enumerate()
        .filter(|(_, &c)| (c - 1.0).abs() < 1e-10)
        .map(|(i, _)| i)
        .collect();
    if !offending.is_empty() {
        return Err(Error::PureModeDivergence(offending));
    }
    let n = j.nrows() / 2;
    let i = C64::new(0.0, 1.0);
    let (q_raw, c0) = match kind {
        ParticleKind::Boson => {
            let w = linalg::matfun_real(j, |z| -i * arccoth(i * z), "thermal arccoth")?;
            let q = standard_omega_inv(n).dot(&w);
            let c0 = 0.5 * cs.iter().map(|c| ((c * c - 1.0) / 4.0).ln()).sum::<f64>();
            (q, c0)
        }
        ParticleKind::Fermion => {
            let w = linalg::matfun_real(j, |z| -i * arctanh(i * z), "thermal arctanh")?;
            let c0 = -0.5 * cs.iter().map(|c| ((1.0 - c * c) / 4.0).ln()).sum::<f64>();
            (w, c0)
        }
    };
    let q = match kind {
        ParticleKind::Boson => linalg::sym_part(&q_raw),
        ParticleKind::Fermion => linalg::antisym_part(&q_raw),
    };
    Ok(ThermalData { kind, q, c0 })
}

/// Covariance matrix and restricted complex structure of the thermal state
/// with modular form q: the inversion of [`covariance_to_thermal`].
pub fn thermal_to_covariance(thermal: &ThermalData) -> Result<(Array2<f64>, Array2<f64>)> {
    let n = thermal.q.nrows() / 2;
    let i = C64::new(0.0, 1.0);
    let coth = |z: C64| z.cosh() / z.sinh();
    let j = match thermal.kind {
        ParticleKind::Boson => {
            let x = standard_omega(n).dot(&thermal.q);
            linalg::matfun_real(&x, |z| -i * coth(i * z), "thermal coth")?
        }
        ParticleKind::Fermion => {
            linalg::matfun_real(&thermal.q, |z| -i * (i * z).tanh(), "thermal tanh")?
        }
    };
    let gamma = match thermal.kind {
        ParticleKind::Boson => j.dot(&standard_omega(n)).mapv(|x| -x),
        ParticleKind::Fermion => j.clone(),
    };
    Ok((gamma, j))
}

/// Quadratic-form matrix of the characteristic function χ_s(w) =
/// exp(−wᵀ · out · w): ¼(G + sG₀) for bosons, (i/4)(Ω − sΩ₀) for fermions.
pub fn characteristic_exponent(
    gamma: &Array2<f64>,
    gamma0: &Array2<f64>,
    s: f64,
    kind: ParticleKind,
) -> Array2<C64> {
    match kind {
        ParticleKind::Boson => {
            (gamma + &gamma0.mapv(|x| s * x)).mapv(|x| C64::new(x / 4.0, 0.0))
        }
        ParticleKind::Fermion => {
            (gamma - &gamma0.mapv(|x| s * x)).mapv(|x| C64::new(0.0, x / 4.0))
        }
    }
}

/// Exponent matrix and normalization of the quasiprobability distribution
/// W_s. For bosons W_s(ξ) = norm · exp(−ξᵀ · out · ξ) with
/// out = (G + sG₀)⁻¹ and norm = det(π(G+sG₀))^{−1/2}; the fermionic pair is
/// the formal (Grassmann) analogue with out = 4i(Ω − sΩ₀)⁻¹ and
/// norm = det((Ω − sΩ₀)/2)^{−1/2}.
pub fn quasiprob_exponent(
    gamma: &Array2<f64>,
    gamma0: &Array2<f64>,
    s: f64,
    kind: ParticleKind,
) -> Result<(Array2<C64>, f64)> {
    use ndarray_linalg::Determinant;
    match kind {
        ParticleKind::Boson => {
            let m = gamma + &gamma0.mapv(|x| s * x);
            let det = m.det().map_err(|_| Error::SingularDistribution)?;
            if det.abs() < 1e-12 {
                return Err(Error::SingularDistribution);
            }
            let inv = linalg::inv_real(&m).map_err(|_| Error::SingularDistribution)?;
            let norm = (std::f64::consts::PI.powi(m.nrows() as i32) * det).powf(-0.5);
            Ok((inv.mapv(|x| C64::new(x, 0.0)), norm))
        }
        ParticleKind::Fermion => {
            let m = gamma - &gamma0.mapv(|x| s * x);
            let det = m.det().map_err(|_| Error::SingularDistribution)?;
            if det.abs() < 1e-12 {
                return Err(Error::SingularDistribution);
            }
            let inv = linalg::inv_real(&m).map_err(|_| Error::SingularDistribution)?;
            let norm = (m.mapv(|x| x / 2.0).det().unwrap_or(0.0)).powf(-0.5);
            Ok((inv.mapv(|x| C64::new(0.0, 4.0 * x)), norm))
        }
    }
}

/// Wave-function parameters of a bosonic covariance matrix in the standard
/// basis; pure states return (A, B), mixed ones also the (C, D) blocks.
pub fn covariance_to_wavefunction(g: &Array2<f64>, mixed: bool) -> Result<WaveFunctionData> {
    let (gqq, gqp, gpq, gpp) = split_blocks(g);
    let a_pos = linalg::inv_real(&gqq).map_err(|_| Error::SingularPositionBlock)?;
    if !mixed {
        let b = a_pos.dot(&gqp).mapv(|x| -x);
        return Ok(WaveFunctionData {
            a: linalg::sym_part(&a_pos),
            b: linalg::sym_part(&b),
            cd: None,
        });
    }
    // X = Gpp − Gpq Gqq⁻¹ Gqp is the momentum covariance conditioned on q.
    let x = &gpp - &gpq.dot(&a_pos).dot(&gqp);
    let a = (&a_pos + &x).mapv(|v| v / 2.0);
    let c = (&a_pos - &x).mapv(|v| v / 2.0);
    let t1 = a_pos.dot(&gqp);
    let t2 = gpq.dot(&a_pos);
    let b = (&t1 + &t2).mapv(|v| -v / 2.0);
    let d = (&t1 - &t2).mapv(|v| v / 2.0);
    Ok(WaveFunctionData {
        a: linalg::sym_part(&a),
        b: linalg::sym_part(&b),
        cd: Some((linalg::sym_part(&c), linalg::antisym_part(&d))),
    })
}

/// Covariance matrix assembled from wave-function parameters.
pub fn wavefunction_to_covariance(wf: &WaveFunctionData) -> Result<Array2<f64>> {
    let n = wf.a.nrows();
    let zero: Array2<f64> = Array2::zeros((n, n));
    let (c, d) = match &wf.cd {
        Some((c, d)) => (c.clone(), d.clone()),
        None => (zero.clone(), zero),
    };
    let apc = &wf.a + &c;
    let (vals, _) = linalg::eigh_real(&apc)?;
    if vals.iter().any(|&v| v <= 0.0) {
        return Err(Error::NotPositive);
    }
    let apc_inv = linalg::inv_real(&apc)?;
    let bpd = &wf.b + &d;
    let bmd = &wf.b - &d;
    let gqq = apc_inv.clone();
    let gqp = apc_inv.dot(&bmd).mapv(|x| -x);
    let gpq = bpd.dot(&apc_inv).mapv(|x| -x);
    let gpp = &wf.a - &c + &bpd.dot(&apc_inv).dot(&bmd);
    Ok(phase_space::assemble_blocks(&gqq, &gqp, &gpq, &gpp))
}
