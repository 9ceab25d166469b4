//! Jones-calculus optics for routing two-photon Bell states into the
//! analyzer.
//!
//! Polarization states live in the circular basis; the two-photon basis
//! order is (RR, RL, LR, LL) with the first slot the μ-arm photon.
//! Waveplates are specified by their linear-basis Jones matrix
//! W(θ, φ) = R(θ)·diag(e^{-iφ/2}, e^{+iφ/2})·R(-θ) (θ the fast-axis angle,
//! φ the retardance: π/2 for a quarter-wave plate, π for a half-wave plate)
//! and conjugated into the circular basis with the unitary whose columns are
//! |R⟩ = (1, -i)/√2 and |L⟩ = (1, +i)/√2.
//!
//! The standard conversion chain on one arm — quarter-wave at 45°,
//! half-wave at θ, quarter-wave at 135° — maps the Bell family onto itself:
//! θ = 0° exchanges the + and - states within each letter, θ = 45° exchanges
//! the Ψ and Φ letters (Ψ± ↔ Φ∓), up to a global phase.

use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::rates::BellChannel;

type C64 = Complex64;
type M2 = [[C64; 2]; 2];

/// Identification result: one of the four Bell states, or anything else.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateId {
    /// Matches a Bell state within tolerance.
    Bell(BellChannel),
    /// Not a Bell state (low or ambiguous best fidelity).
    Other,
}

/// Waveplate retardance class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaveplateKind {
    /// Quarter-wave plate (retardance π/2).
    Quarter,
    /// Half-wave plate (retardance π).
    Half,
}

/// Which photon the element acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arm {
    /// First slot of the two-photon basis.
    Mu,
    /// Second slot of the two-photon basis.
    Nu,
}

/// A waveplate in one arm with its fast axis at `angle_deg` to the linear
/// horizontal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpticalElement {
    /// Retardance class.
    pub kind: WaveplateKind,
    /// Fast-axis angle in degrees.
    pub angle_deg: f64,
    /// Target arm.
    pub arm: Arm,
}

/// Two-photon polarization state in the circular (RR, RL, LR, LL) basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPhotonState {
    /// Complex amplitudes in basis order (RR, RL, LR, LL).
    pub amps: [C64; 4],
}

impl TwoPhotonState {
    /// The requested Bell state:
    /// Ψ± = (RL ± LR)/√2, Φ± = (RR ± LL)/√2.
    pub fn bell(which: BellChannel) -> Self {
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let zero = C64::new(0.0, 0.0);
        let amps = match which {
            BellChannel::PsiPlus => [zero, h, h, zero],
            BellChannel::PsiMinus => [zero, h, -h, zero],
            BellChannel::PhiPlus => [h, zero, zero, h],
            BellChannel::PhiMinus => [h, zero, zero, -h],
        };
        TwoPhotonState { amps }
    }

    /// Euclidean norm of the amplitude vector.
    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Inner product ⟨self|other⟩.
    pub fn inner(&self, other: &TwoPhotonState) -> C64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Fidelity |⟨self|other⟩|² / (‖self‖²·‖other‖²), insensitive to global
    /// phases.
    pub fn fidelity(&self, other: &TwoPhotonState) -> f64 {
        let n2 = self.norm().powi(2) * other.norm().powi(2);
        self.inner(other).norm_sqr() / n2
    }
}

fn mat2_mul(a: &M2, b: &M2) -> M2 {
    let mut out = [[C64::new(0.0, 0.0); 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            *slot = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn mat2_dagger(a: &M2) -> M2 {
    [
        [a[0][0].conj(), a[1][0].conj()],
        [a[0][1].conj(), a[1][1].conj()],
    ]
}

/// Linear-basis Jones matrix of a waveplate with fast axis at `angle_deg`.
pub fn jones_linear(kind: WaveplateKind, angle_deg: f64) -> M2 {
    let phi = match kind {
        WaveplateKind::Quarter => std::f64::consts::FRAC_PI_2,
        WaveplateKind::Half => std::f64::consts::PI,
    };
    let theta = angle_deg.to_radians();
    let (s, c) = theta.sin_cos();
    let fast = C64::from_polar(1.0, -0.5 * phi);
    let slow = C64::from_polar(1.0, 0.5 * phi);
    let rot = [
        [C64::new(c, 0.0), C64::new(-s, 0.0)],
        [C64::new(s, 0.0), C64::new(c, 0.0)],
    ];
    let rot_back = [
        [C64::new(c, 0.0), C64::new(s, 0.0)],
        [C64::new(-s, 0.0), C64::new(c, 0.0)],
    ];
    let retarder = [
        [fast, C64::new(0.0, 0.0)],
        [C64::new(0.0, 0.0), slow],
    ];
    mat2_mul(&rot, &mat2_mul(&retarder, &rot_back))
}

/// Circular-basis change matrix: columns are |R⟩ = (1, -i)/√2 and
/// |L⟩ = (1, +i)/√2 expressed in the linear basis.
fn circular_columns() -> M2 {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    [
        [C64::new(h, 0.0), C64::new(h, 0.0)],
        [C64::new(0.0, -h), C64::new(0.0, h)],
    ]
}

/// Circular-basis Jones matrix of a waveplate: C†·W_linear·C.
pub fn jones_circular(kind: WaveplateKind, angle_deg: f64) -> M2 {
    let c = circular_columns();
    mat2_mul(
        &mat2_dagger(&c),
        &mat2_mul(&jones_linear(kind, angle_deg), &c),
    )
}

/// Apply a sequence of waveplates (listed in the order the light traverses
/// them) to a two-photon state. The input must be normalized to 1 within
/// 1e-6; the output is renormalized to remove accumulated rounding.
// The explicit 0..2 index loop mirrors the 2x2 arm-contraction it computes.
#[allow(clippy::needless_range_loop)]
pub fn apply_elements(state: &TwoPhotonState, elements: &[OpticalElement]) -> Result<TwoPhotonState> {
    let norm = state.norm();
    if (norm - 1.0).abs() > 1e-6 {
        return Err(CoreError::InvalidParam(format!(
            "input state must be normalized (norm = {norm})"
        )));
    }
    let mut amps = state.amps;
    for element in elements {
        let u = jones_circular(element.kind, element.angle_deg);
        let mut next = [C64::new(0.0, 0.0); 4];
        // Index layout: amps[2·a + b] with a the μ-arm circular index
        // (0 = R, 1 = L) and b the ν-arm index.
        for a_out in 0..2 {
            for b_out in 0..2 {
                let mut acc = C64::new(0.0, 0.0);
                for src in 0..2 {
                    let (amp_index, u_elem) = match element.arm {
                        Arm::Mu => (2 * src + b_out, u[a_out][src]),
                        Arm::Nu => (2 * a_out + src, u[b_out][src]),
                    };
                    acc += u_elem * amps[amp_index];
                }
                next[2 * a_out + b_out] = acc;
            }
        }
        amps = next;
    }
    let out = TwoPhotonState { amps };
    let n = out.norm();
    let mut normalized = out;
    for a in &mut normalized.amps {
        *a /= C64::new(n, 0.0);
    }
    Ok(normalized)
}

/// Identify which Bell state (if any) a state is, up to global phase.
/// Returns the best label and its fidelity; a best fidelity below 0.999, or
/// two labels tied within 1e-9, yields [`StateId::Other`].
pub fn identify_bell(state: &TwoPhotonState) -> (StateId, f64) {
    let candidates = [
        BellChannel::PsiPlus,
        BellChannel::PsiMinus,
        BellChannel::PhiPlus,
        BellChannel::PhiMinus,
    ];
    let mut fidelities: Vec<(BellChannel, f64)> = candidates
        .iter()
        .map(|&c| (c, state.fidelity(&TwoPhotonState::bell(c))))
        .collect();
    fidelities.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    let (best_label, best) = fidelities[0];
    let runner_up = fidelities[1].1;
    if best < 0.999 || (best - runner_up).abs() < 1e-9 {
        (StateId::Other, best)
    } else {
        (StateId::Bell(best_label), best)
    }
}

/// The conversion chain on one arm: quarter-wave at 45°, half-wave at
/// `hwp_deg`, quarter-wave at 135°, listed in traversal order.
pub fn conversion_chain(hwp_deg: f64, arm: Arm) -> Vec<OpticalElement> {
    vec![
        OpticalElement {
            kind: WaveplateKind::Quarter,
            angle_deg: 45.0,
            arm,
        },
        OpticalElement {
            kind: WaveplateKind::Half,
            angle_deg: hwp_deg,
            arm,
        },
        OpticalElement {
            kind: WaveplateKind::Quarter,
            angle_deg: 135.0,
            arm,
        },
    ]
}

/// One row of the Bell-conversion table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConversionRow {
    /// Bell state entering the chain.
    pub input: BellChannel,
    /// Half-wave-plate angle of the chain, degrees.
    pub hwp_deg: f64,
    /// Identified output state.
    pub output: StateId,
    /// Fidelity of the output against its identified label (or the best
    /// Bell fidelity when `output` is `Other`).
    pub fidelity: f64,
}

/// Conversion table of all four Bell inputs through the μ-arm chain at
/// half-wave-plate angles 0° and 45°.
pub fn conversion_table() -> Result<Vec<ConversionRow>> {
    let mut rows = Vec::with_capacity(8);
    for &hwp_deg in &[0.0, 45.0] {
        for input in [
            BellChannel::PsiPlus,
            BellChannel::PsiMinus,
            BellChannel::PhiPlus,
            BellChannel::PhiMinus,
        ] {
            let out = apply_elements(
                &TwoPhotonState::bell(input),
                &conversion_chain(hwp_deg, Arm::Mu),
            )?;
            let (output, fidelity) = identify_bell(&out);
            rows.push(ConversionRow {
                input,
                hwp_deg,
                output,
                fidelity,
            });
        }
    }
    Ok(rows)
}
