//! Brute-force reference in a truncated two-mode Fock basis.
//!
//! States are built and propagated as state vectors or density matrices
//! over `{|n, m⟩ : n, m < cutoff}`, independently of the covariance-matrix
//! machinery, and are meant only for small photon numbers.

use faer::{c64, Mat, Side};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::interferometer::LossModel;
use crate::resource::{ResourceKind, ResourceSpec};

pub const DEFAULT_CUTOFF: usize = 40;
/// Largest probability allowed outside the truncated basis.
pub const MAX_LEAKAGE: f64 = 1e-8;
/// Phase step of the central difference in [`oracle_qfi`].
pub const QFI_STEP: f64 = 1e-4;
/// Eigenvalue pairs with `p_i + p_j` below this are dropped from the SLD.
const SLD_FLOOR: f64 = 1e-12;
/// Eigenvalues at or below this are treated as rounding noise in [`oracle_fidelity`].
const FIDELITY_EIG_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone)]
enum Repr {
    Pure(Vec<c64>),
    Mixed(Mat<c64>),
}

/// Two-mode state in the truncated number basis, index `n * cutoff + m`
/// for `|n⟩_a |m⟩_b`.
#[derive(Debug, Clone)]
pub struct FockState {
    repr: Repr,
    cutoff: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FockChannel {
    /// Same convention as the Gaussian `M_B(θ)`: `a → cos θ a + sin θ b`.
    BeamSplitter(f64),
    /// `exp(-iφ a†a)`.
    Phase(f64),
    Loss {
        eta_a: f64,
        eta_b: f64,
    },
}

fn check_cutoff(cutoff: usize) -> Result<()> {
    if cutoff < 2 {
        return Err(invalid(format!("cutoff {cutoff} is too small")));
    }
    Ok(())
}

fn coherent_amplitudes(alpha: f64, cutoff: usize) -> Vec<f64> {
    let mut c = vec![0.0; cutoff];
    c[0] = (-0.5 * alpha * alpha).exp();
    for n in 1..cutoff {
        c[n] = c[n - 1] * alpha / (n as f64).sqrt();
    }
    c
}

/// Squeezed vacuum with the `X` quadrature anti-squeezed:
/// `c_{2m} = tanh^m r √((2m)!) / (2^m m! √cosh r)`.
fn squeezed_amplitudes(r: f64, cutoff: usize) -> Vec<f64> {
    let mut c = vec![0.0; cutoff];
    let t = r.tanh();
    c[0] = 1.0 / r.cosh().sqrt();
    let mut n = 2;
    while n < cutoff {
        c[n] = c[n - 2] * t * ((n - 1) as f64 / n as f64).sqrt();
        n += 2;
    }
    c
}

fn norm_sqr(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

/// Pure input state of `spec`. Fails when more than [`MAX_LEAKAGE`] of the
/// probability lies outside the basis.
pub fn build_fock_input(spec: &ResourceSpec, cutoff: usize) -> Result<FockState> {
    check_cutoff(cutoff)?;
    spec.input_state()?;
    let mut psi = vec![c64::new(0.0, 0.0); cutoff * cutoff];
    let kept = match spec.kind {
        ResourceKind::Tmsv => {
            let t = spec.s.tanh();
            let mut amp = 1.0 / spec.s.cosh();
            for n in 0..cutoff {
                psi[n * cutoff + n] = c64::new(amp, 0.0);
                amp *= t;
            }
            1.0 - t.powi(2 * cutoff as i32)
        }
        ResourceKind::Csv | ResourceKind::Coherent => {
            let a = coherent_amplitudes(spec.alpha, cutoff);
            let b = if spec.kind == ResourceKind::Csv {
                squeezed_amplitudes(spec.r, cutoff)
            } else {
                {
                    let mut v = vec![0.0; cutoff];
                    v[0] = 1.0;
                    v
                }
            };
            for n in 0..cutoff {
                for m in 0..cutoff {
                    psi[n * cutoff + m] = c64::new(a[n] * b[m], 0.0);
                }
            }
            norm_sqr(&a) * norm_sqr(&b)
        }
    };
    let leakage = (1.0 - kept).max(0.0);
    if leakage > MAX_LEAKAGE {
        return Err(Error::CutoffTooSmall { cutoff, leakage });
    }
    let norm = kept.sqrt();
    psi.iter_mut().for_each(|x| *x /= norm);
    Ok(FockState { repr: Repr::Pure(psi), cutoff })
}

impl FockState {
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.cutoff * self.cutoff
    }

    pub fn is_pure(&self) -> bool {
        matches!(self.repr, Repr::Pure(_))
    }

    pub fn density_matrix(&self) -> Mat<c64> {
        match &self.repr {
            Repr::Pure(psi) => Mat::from_fn(psi.len(), psi.len(), |i, j| psi[i] * psi[j].conj()),
            Repr::Mixed(dm) => dm.clone(),
        }
    }

    pub fn trace(&self) -> f64 {
        match &self.repr {
            Repr::Pure(psi) => psi.iter().map(|x| x.norm_sqr()).sum(),
            Repr::Mixed(dm) => (0..dm.nrows()).map(|i| dm[(i, i)].re).sum(),
        }
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        match &self.repr {
            Repr::Pure(_) => Ok(0.0),
            Repr::Mixed(dm) => {
                let ev = dm
                    .self_adjoint_eigenvalues(Side::Lower)
                    .map_err(|e| Error::NumericFailure(format!("eigendecomposition failed: {e:?}")))?;
                Ok(ev.first().copied().unwrap_or(0.0))
            }
        }
    }

    /// Photon-number distribution of both modes, `p[n * cutoff + m]`.
    pub fn populations(&self) -> Vec<f64> {
        match &self.repr {
            Repr::Pure(psi) => psi.iter().map(|x| x.norm_sqr()).collect(),
            Repr::Mixed(dm) => (0..dm.nrows()).map(|i| dm[(i, i)].re).collect(),
        }
    }

    pub fn mean_photon_number(&self) -> f64 {
        let c = self.cutoff;
        self.populations().iter().enumerate().map(|(i, p)| p * ((i / c + i % c) as f64)).sum()
    }
}

/// `exp(θ (a†b - a b†))` restricted to the block of total photon number
/// `total`, in the basis `|n, total - n⟩` for increasing `n`.
fn splitter_block(theta: f64, total: usize, cutoff: usize) -> (usize, DMatrix<f64>) {
    let lo = total.saturating_sub(cutoff - 1);
    let hi = total.min(cutoff - 1);
    let len = hi - lo + 1;
    let mut gen = DMatrix::<f64>::zeros(len, len);
    for k in 0..len {
        let n = lo + k;
        let m = total - n;
        // a†b |n, m⟩ = √((n+1) m) |n+1, m-1⟩
        if k + 1 < len {
            gen[(k + 1, k)] += ((n + 1) as f64 * m as f64).sqrt();
        }
        // a b† |n, m⟩ = √(n (m+1)) |n-1, m+1⟩
        if k > 0 {
            gen[(k - 1, k)] -= (n as f64 * (m + 1) as f64).sqrt();
        }
    }
    (lo, (gen * theta).exp())
}

fn splitter_blocks(theta: f64, cutoff: usize) -> Vec<(usize, DMatrix<f64>)> {
    (0..=2 * (cutoff - 1)).map(|total| splitter_block(theta, total, cutoff)).collect()
}

/// `v ← U v` for the block-diagonal splitter, `v` strided through `get`/`set`.
fn apply_blocks(blocks: &[(usize, DMatrix<f64>)], cutoff: usize, v: &mut [c64]) {
    let mut buf = Vec::with_capacity(cutoff);
    for (total, (lo, u)) in blocks.iter().enumerate() {
        let len = u.nrows();
        buf.clear();
        buf.extend((0..len).map(|k| {
            let n = lo + k;
            v[n * cutoff + total - n]
        }));
        for i in 0..len {
            let mut acc = c64::new(0.0, 0.0);
            for (j, x) in buf.iter().enumerate() {
                acc += *x * u[(i, j)];
            }
            let n = lo + i;
            v[n * cutoff + total - n] = acc;
        }
    }
}

fn apply_splitter_dm(dm: &Mat<c64>, blocks: &[(usize, DMatrix<f64>)], cutoff: usize) -> Mat<c64> {
    let d = dm.nrows();
    // U ρ: transform every column; (U ρ) U† = (U (U ρ)†)†.
    let mut work = vec![c64::new(0.0, 0.0); d];
    let mut left = Mat::<c64>::zeros(d, d);
    for j in 0..d {
        for i in 0..d {
            work[i] = dm[(i, j)];
        }
        apply_blocks(blocks, cutoff, &mut work);
        for i in 0..d {
            left[(i, j)] = work[i];
        }
    }
    let mut out = Mat::<c64>::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            work[j] = left[(i, j)].conj();
        }
        apply_blocks(blocks, cutoff, &mut work);
        for j in 0..d {
            out[(i, j)] = work[j].conj();
        }
    }
    out
}

fn sqrt_binomials(size: usize) -> Vec<Vec<f64>> {
    let mut t = vec![vec![0.0f64; size]; size];
    for n in 0..size {
        t[n][0] = 1.0;
        for k in 1..=n {
            t[n][k] = t[n - 1][k - 1] + if k < n { t[n - 1][k] } else { 0.0 };
        }
    }
    t.iter().map(|row| row.iter().map(|x| x.sqrt()).collect()).collect()
}

/// Pure loss on one mode, element by element:
/// `ρ'_{n n'} = Σ_k √(C(n+k,k) C(n'+k,k)) η^{(n+n')/2} (1-η)^k ρ_{n+k, n'+k}`.
fn apply_loss_dm(dm: &Mat<c64>, eta: f64, on_a: bool, cutoff: usize) -> Mat<c64> {
    let d = dm.nrows();
    let sb = sqrt_binomials(2 * cutoff);
    let sqrt_eta: Vec<f64> = (0..2 * cutoff).map(|n| eta.powf(0.5 * n as f64)).collect();
    let gamma: Vec<f64> = (0..cutoff).map(|k| (1.0 - eta).powi(k as i32)).collect();
    let split = |i: usize| if on_a { (i / cutoff, i % cutoff) } else { (i % cutoff, i / cutoff) };
    let join = |lossy: usize, other: usize| if on_a { lossy * cutoff + other } else { other * cutoff + lossy };
    Mat::from_fn(d, d, |i, j| {
        let (n, m) = split(i);
        let (np, mp) = split(j);
        let mut acc = c64::new(0.0, 0.0);
        let kmax = cutoff - n.max(np);
        for k in 0..kmax {
            let w = sb[n + k][k] * sb[np + k][k] * gamma[k];
            acc += dm[(join(n + k, m), join(np + k, mp))] * w;
        }
        acc * (sqrt_eta[n] * sqrt_eta[np])
    })
}

fn phase_factor(n: usize, phi: f64) -> c64 {
    c64::from_polar(1.0, -(n as f64) * phi)
}

pub fn apply_channel_fock(state: &FockState, channel: &FockChannel) -> Result<FockState> {
    let c = state.cutoff;
    let repr = match (channel, &state.repr) {
        (FockChannel::BeamSplitter(theta), repr) => {
            if !theta.is_finite() {
                return Err(invalid("beam-splitter angle must be finite"));
            }
            let blocks = splitter_blocks(*theta, c);
            match repr {
                Repr::Pure(psi) => {
                    let mut v = psi.clone();
                    apply_blocks(&blocks, c, &mut v);
                    Repr::Pure(v)
                }
                Repr::Mixed(dm) => Repr::Mixed(apply_splitter_dm(dm, &blocks, c)),
            }
        }
        (FockChannel::Phase(phi), repr) => {
            if !phi.is_finite() {
                return Err(invalid("phase must be finite"));
            }
            match repr {
                Repr::Pure(psi) => {
                    Repr::Pure(psi.iter().enumerate().map(|(i, x)| x * phase_factor(i / c, *phi)).collect())
                }
                Repr::Mixed(dm) => Repr::Mixed(Mat::from_fn(dm.nrows(), dm.ncols(), |i, j| {
                    dm[(i, j)] * phase_factor(i / c, *phi) * phase_factor(j / c, *phi).conj()
                })),
            }
        }
        (FockChannel::Loss { eta_a, eta_b }, repr) => {
            let loss = LossModel::new(*eta_a, *eta_b)?;
            if loss.is_lossless() {
                repr.clone()
            } else {
                let mut dm = match repr {
                    Repr::Pure(_) => state.density_matrix(),
                    Repr::Mixed(dm) => dm.clone(),
                };
                if loss.eta_a < 1.0 {
                    dm = apply_loss_dm(&dm, loss.eta_a, true, c);
                }
                if loss.eta_b < 1.0 {
                    dm = apply_loss_dm(&dm, loss.eta_b, false, c);
                }
                Repr::Mixed(dm)
            }
        }
    };
    Ok(FockState { repr, cutoff: c })
}

/// Input, first splitter and loss; the φ-independent part of the pipeline.
pub fn oracle_internal_state(resource: &ResourceSpec, loss: &LossModel, cutoff: usize) -> Result<FockState> {
    let st = build_fock_input(resource, cutoff)?;
    let st = apply_channel_fock(&st, &FockChannel::BeamSplitter(std::f64::consts::FRAC_PI_4))?;
    apply_channel_fock(&st, &FockChannel::Loss { eta_a: loss.eta_a, eta_b: loss.eta_b })
}

fn finish_mzi(internal: &FockState, phi: f64) -> Result<FockState> {
    let st = apply_channel_fock(internal, &FockChannel::Phase(phi))?;
    apply_channel_fock(&st, &FockChannel::BeamSplitter(-std::f64::consts::FRAC_PI_4))
}

/// Output of the full interferometer.
pub fn oracle_output(resource: &ResourceSpec, phi: f64, loss: &LossModel, cutoff: usize) -> Result<FockState> {
    finish_mzi(&oracle_internal_state(resource, loss, cutoff)?, phi)
}

/// Operators with explicit truncated matrix elements.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FockOperator {
    /// `(-1)^{a†a}`.
    ParityA,
    /// `X_θa^p X_θb^q`; a power of zero drops that mode.
    Quadratures { angle_a: f64, power_a: u32, angle_b: f64, power_b: u32 },
}

impl FockOperator {
    pub fn quad_a(angle: f64, power: u32) -> Self {
        FockOperator::Quadratures { angle_a: angle, power_a: power, angle_b: 0.0, power_b: 0 }
    }

    pub fn quad_b(angle: f64, power: u32) -> Self {
        FockOperator::Quadratures { angle_a: 0.0, power_a: 0, angle_b: angle, power_b: power }
    }

    pub fn x_a() -> Self {
        Self::quad_a(0.0, 1)
    }

    pub fn p_a() -> Self {
        Self::quad_a(std::f64::consts::FRAC_PI_2, 1)
    }

    pub fn x2_a() -> Self {
        Self::quad_a(0.0, 2)
    }

    pub fn x4_a() -> Self {
        Self::quad_a(0.0, 4)
    }

    pub fn xx_ab() -> Self {
        FockOperator::Quadratures { angle_a: 0.0, power_a: 1, angle_b: 0.0, power_b: 1 }
    }

    pub fn x2x2_ab() -> Self {
        FockOperator::Quadratures { angle_a: 0.0, power_a: 2, angle_b: 0.0, power_b: 2 }
    }
}

/// `X_θ^p` on one mode, computed in a basis with two spare levels so that
/// the truncation only corrupts the top of the kept block.
fn quadrature_power(angle: f64, power: u32, cutoff: usize) -> DMatrix<c64> {
    let big = cutoff + 2 * power as usize;
    // X_θ = (a e^{-iθ} + a† e^{iθ}) / √2
    let x = DMatrix::<c64>::from_fn(big, big, |i, j| {
        if i + 1 == j {
            c64::from_polar((j as f64 / 2.0).sqrt(), -angle)
        } else if j + 1 == i {
            c64::from_polar((i as f64 / 2.0).sqrt(), angle)
        } else {
            c64::new(0.0, 0.0)
        }
    });
    let mut out = DMatrix::<c64>::identity(big, big);
    for _ in 0..power {
        out = &out * &x;
    }
    out.view((0, 0), (cutoff, cutoff)).into_owned()
}

/// `Tr(ρ O)`.
pub fn oracle_expectation(state: &FockState, op: &FockOperator) -> Result<f64> {
    let c = state.cutoff;
    match *op {
        FockOperator::ParityA => {
            let p = state.populations();
            Ok(p.iter().enumerate().map(|(i, x)| if (i / c).is_multiple_of(2) { *x } else { -*x }).sum())
        }
        FockOperator::Quadratures { angle_a, power_a, angle_b, power_b } => {
            if power_a > 8 || power_b > 8 {
                return Err(invalid("quadrature powers above 8 are not supported"));
            }
            let oa = quadrature_power(angle_a, power_a, c);
            let ob = quadrature_power(angle_b, power_b, c);
            let band = |o: &DMatrix<c64>, p: u32| -> Vec<(usize, usize, c64)> {
                let mut v = Vec::new();
                for i in 0..c {
                    for j in i.saturating_sub(p as usize)..(i + p as usize + 1).min(c) {
                        if o[(i, j)].norm() > 0.0 {
                            v.push((i, j, o[(i, j)]));
                        }
                    }
                }
                v
            };
            let (ba, bb) = (band(&oa, power_a), band(&ob, power_b));
            // Tr(ρ O_a⊗O_b) = Σ ρ_{(n,m),(n',m')} O_a[n',n] O_b[m',m]
            let mut acc = c64::new(0.0, 0.0);
            let elem = |i: usize, j: usize| -> c64 {
                match &state.repr {
                    Repr::Pure(psi) => psi[i] * psi[j].conj(),
                    Repr::Mixed(dm) => dm[(i, j)],
                }
            };
            for &(np, n, wa) in &ba {
                for &(mp, m, wb) in &bb {
                    acc += elem(n * c + m, np * c + mp) * wa * wb;
                }
            }
            Ok(acc.re)
        }
    }
}

fn eigen(dm: &Mat<c64>) -> Result<(Vec<f64>, Mat<c64>)> {
    let evd = dm
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::NumericFailure(format!("eigendecomposition failed: {e:?}")))?;
    let s = evd.S().column_vector();
    let p = (0..dm.nrows()).map(|i| s[i].re).collect();
    Ok((p, evd.U().to_owned()))
}

/// Root fidelity `Tr √(√ρ₁ ρ₂ √ρ₁)`.
pub fn oracle_fidelity(s1: &FockState, s2: &FockState) -> Result<f64> {
    if s1.cutoff != s2.cutoff {
        return Err(invalid("states live in different truncations"));
    }
    // with a pure argument F = √⟨ψ|ρ|ψ⟩
    let overlap = |psi: &[c64], other: &FockState| -> f64 {
        let v = match &other.repr {
            Repr::Pure(phi) => psi.iter().zip(phi).map(|(a, b)| a.conj() * b).sum::<c64>().norm_sqr(),
            Repr::Mixed(dm) => {
                let d = psi.len();
                let mut acc = c64::new(0.0, 0.0);
                for i in 0..d {
                    let mut row = c64::new(0.0, 0.0);
                    for j in 0..d {
                        row += dm[(i, j)] * psi[j];
                    }
                    acc += psi[i].conj() * row;
                }
                acc.re
            }
        };
        v.max(0.0).sqrt()
    };
    match (&s1.repr, &s2.repr) {
        (Repr::Pure(psi), _) => Ok(overlap(psi, s2)),
        (_, Repr::Pure(psi)) => Ok(overlap(psi, s1)),
        (Repr::Mixed(a), Repr::Mixed(b)) => {
            // F = ‖√ρ₁ √ρ₂‖₁, the sum of singular values of
            // diag(√p₁) U₁†U₂ diag(√p₂) on the numerically nonzero spectrum
            let (p1, u1) = eigen(a)?;
            let (p2, u2) = eigen(b)?;
            let support = |p: &[f64]| -> Vec<usize> { (0..p.len()).filter(|&i| p[i] > FIDELITY_EIG_FLOOR).collect() };
            let (k1, k2) = (support(&p1), support(&p2));
            let v1 = Mat::from_fn(u1.nrows(), k1.len(), |i, k| u1[(i, k1[k])] * p1[k1[k]].sqrt());
            let v2 = Mat::from_fn(u2.nrows(), k2.len(), |i, k| u2[(i, k2[k])] * p2[k2[k]].sqrt());
            let m = v1.adjoint() * &v2;
            let sv = m.singular_values().map_err(|e| Error::NumericFailure(format!("SVD failed: {e:?}")))?;
            Ok(sv.iter().sum())
        }
    }
}

/// Quantum Fisher information from the symmetric logarithmic derivative,
/// `F = Σ_{ij} 2 |⟨i|∂ρ|j⟩|² / (p_i + p_j)`, with `∂ρ` from a central
/// difference of step [`QFI_STEP`]. Pure states use `4(⟨∂ψ|∂ψ⟩ - |⟨ψ|∂ψ⟩|²)`.
pub fn oracle_qfi(resource: &ResourceSpec, phi: f64, loss: &LossModel, cutoff: usize) -> Result<f64> {
    let internal = oracle_internal_state(resource, loss, cutoff)?;
    let h = QFI_STEP;
    let plus = finish_mzi(&internal, phi + h)?;
    let minus = finish_mzi(&internal, phi - h)?;
    let centre = finish_mzi(&internal, phi)?;
    match (&centre.repr, &plus.repr, &minus.repr) {
        (Repr::Pure(psi), Repr::Pure(pp), Repr::Pure(pm)) => {
            let dpsi: Vec<c64> = pp.iter().zip(pm).map(|(a, b)| (a - b) / (2.0 * h)).collect();
            let norm: f64 = dpsi.iter().map(|x| x.norm_sqr()).sum();
            let proj: c64 = psi.iter().zip(&dpsi).map(|(a, b)| a.conj() * b).sum();
            Ok(4.0 * (norm - proj.norm_sqr()))
        }
        (Repr::Mixed(rho), Repr::Mixed(rp), Repr::Mixed(rm)) => {
            let d = rho.nrows();
            let drho = Mat::from_fn(d, d, |i, j| (rp[(i, j)] - rm[(i, j)]) / (2.0 * h));
            let (p, u) = eigen(rho)?;
            // only eigenvectors with p_j > floor/2 can enter a retained pair
            let keep: Vec<usize> = (0..d).filter(|&j| p[j] > 0.5 * SLD_FLOOR).collect();
            let us = Mat::from_fn(d, keep.len(), |i, k| u[(i, keep[k])]);
            let e = u.adjoint() * (&drho * &us);
            let mut f = 0.0;
            for (k, &j) in keep.iter().enumerate() {
                for i in 0..d {
                    let s = p[i] + p[j];
                    if s <= SLD_FLOOR {
                        continue;
                    }
                    let term = 2.0 * e[(i, k)].norm_sqr() / s;
                    // pairs with i outside `keep` are counted once here for (i, j) and once for (j, i)
                    f += if p[i] > 0.5 * SLD_FLOOR { term } else { 2.0 * term };
                }
            }
            Ok(f)
        }
        _ => Err(Error::NumericFailure("inconsistent state representations".into())),
    }
}
