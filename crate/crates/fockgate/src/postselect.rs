//! Post-selection: the effective operator on signal modes after preparing
//! ancilla modes in photon-number states and projecting a detector outcome.
//!
//! The entry convention is `⟨m_sig| S |n_sig⟩ = ⟨m_sig, out| Û |n_sig, in⟩`.
//! The operator is stored unnormalized, exactly as those matrix elements;
//! the success probability of an input is a separate query. Detection is
//! ideal projective photon counting.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{FockBasis, OccupationVector, StateVector};
use crate::lift::FockOperator;

/// Accepted deviation of an input state's squared norm from 1.
pub const INPUT_NORM_TOL: f64 = 1e-9;

/// Which modes are signal, which are ancilla, and what the ancillas carry.
#[derive(Clone, Debug, PartialEq)]
pub struct PostSelectSpec {
    signal_modes: Vec<usize>,
    ancilla_modes: Vec<usize>,
    ancilla_in: OccupationVector,
    detect_out: OccupationVector,
}

impl PostSelectSpec {
    pub fn new(
        signal_modes: Vec<usize>,
        ancilla_modes: Vec<usize>,
        ancilla_in: OccupationVector,
        detect_out: OccupationVector,
    ) -> Result<Self> {
        if ancilla_in.modes() != ancilla_modes.len() || detect_out.modes() != ancilla_modes.len() {
            return Err(Error::ModePartition(format!(
                "ancilla occupations must cover {} ancilla mode(s)",
                ancilla_modes.len()
            )));
        }
        Ok(Self {
            signal_modes,
            ancilla_modes,
            ancilla_in,
            detect_out,
        })
    }

    pub fn signal_modes(&self) -> &[usize] {
        &self.signal_modes
    }

    pub fn ancilla_modes(&self) -> &[usize] {
        &self.ancilla_modes
    }

    pub fn ancilla_in(&self) -> &OccupationVector {
        &self.ancilla_in
    }

    pub fn detect_out(&self) -> &OccupationVector {
        &self.detect_out
    }

    /// Signal and ancilla modes together must partition `0..modes`.
    fn validate_partition(&self, modes: usize) -> Result<()> {
        let mut seen = vec![false; modes];
        for &m in self.signal_modes.iter().chain(self.ancilla_modes.iter()) {
            if m >= modes {
                return Err(Error::ModePartition(format!(
                    "mode {m} out of range for {modes} modes"
                )));
            }
            if seen[m] {
                return Err(Error::ModePartition(format!("mode {m} listed twice")));
            }
            seen[m] = true;
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::ModePartition(format!(
                "mode {missing} is neither signal nor ancilla"
            )));
        }
        Ok(())
    }

    /// Full-circuit occupation with `signal` on the signal modes and `ancilla`
    /// on the ancilla modes.
    fn embed(
        &self,
        modes: usize,
        signal: &OccupationVector,
        ancilla: &OccupationVector,
    ) -> OccupationVector {
        let mut counts = vec![0u32; modes];
        for (&mode, &count) in self.signal_modes.iter().zip(signal.counts()) {
            counts[mode] = count;
        }
        for (&mode, &count) in self.ancilla_modes.iter().zip(ancilla.counts()) {
            counts[mode] = count;
        }
        OccupationVector::new(counts)
    }

    /// Split a full-circuit occupation into (signal, ancilla) parts.
    fn split(&self, full: &OccupationVector) -> (OccupationVector, OccupationVector) {
        let counts = full.counts();
        let signal = self.signal_modes.iter().map(|&m| counts[m]).collect();
        let ancilla = self.ancilla_modes.iter().map(|&m| counts[m]).collect();
        (OccupationVector::new(signal), OccupationVector::new(ancilla))
    }
}

/// Generally non-unitary operator on the signal modes; one outcome branch of
/// a complete measurement, so every singular value is at most 1.
#[derive(Clone, Debug)]
pub struct EffectiveOperator {
    modes: usize,
    states: Vec<OccupationVector>,
    index: HashMap<OccupationVector, usize>,
    matrix: DMatrix<Complex64>,
}

impl EffectiveOperator {
    pub fn from_parts(
        modes: usize,
        states: Vec<OccupationVector>,
        matrix: DMatrix<Complex64>,
    ) -> Result<Self> {
        if matrix.nrows() != states.len() || matrix.ncols() != states.len() {
            return Err(Error::DimensionMismatch {
                expected: states.len(),
                found: matrix.nrows(),
            });
        }
        let index = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Ok(Self {
            modes,
            states,
            index,
            matrix,
        })
    }

    /// Number of signal modes.
    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[OccupationVector] {
        &self.states
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn index_of(&self, occ: &OccupationVector) -> Option<usize> {
        self.index.get(occ).copied()
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    pub fn entry_occ(&self, m: &OccupationVector, n: &OccupationVector) -> Result<Complex64> {
        let row = self
            .index_of(m)
            .ok_or_else(|| Error::UnknownState(m.to_string()))?;
        let col = self
            .index_of(n)
            .ok_or_else(|| Error::UnknownState(n.to_string()))?;
        Ok(self.matrix[(row, col)])
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim()).map(|i| self.matrix[(i, i)]).collect()
    }

    pub fn apply(&self, amplitudes: &DVector<Complex64>) -> Result<DVector<Complex64>> {
        if amplitudes.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: amplitudes.len(),
            });
        }
        Ok(&self.matrix * amplitudes)
    }

    /// `‖S|ψ⟩‖²` for a normalized amplitude vector over this operator's states.
    pub fn success_probability(&self, amplitudes: &DVector<Complex64>) -> Result<f64> {
        let norm_squared: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_squared - 1.0).abs() > INPUT_NORM_TOL {
            return Err(Error::Unnormalized { norm_squared });
        }
        Ok(self.apply(amplitudes)?.iter().map(|a| a.norm_sqr()).sum())
    }

    /// Sub-operator over an explicit state list, in the order given.
    pub fn restrict(&self, states: &[OccupationVector]) -> Result<EffectiveOperator> {
        let indices: Vec<usize> = states
            .iter()
            .map(|s| {
                self.index_of(s)
                    .ok_or_else(|| Error::UnknownState(s.to_string()))
            })
            .collect::<Result<_>>()?;
        let matrix = DMatrix::from_fn(states.len(), states.len(), |r, c| {
            self.matrix[(indices[r], indices[c])]
        });
        EffectiveOperator::from_parts(self.modes, states.to_vec(), matrix)
    }

    pub fn max_singular_value(&self) -> f64 {
        if self.dim() == 0 {
            return 0.0;
        }
        self.matrix
            .clone()
            .singular_values()
            .iter()
            .fold(0.0f64, |acc, &s| acc.max(s))
    }
}

/// The effective operator induced by `spec` on the signal modes of `u`.
///
/// The signal basis cutoff is the reachable sector: the full cutoff minus the
/// larger of the prepared and detected ancilla totals, so every matrix element
/// stays inside the lifted basis.
pub fn effective_operator(u: &FockOperator, spec: &PostSelectSpec) -> Result<EffectiveOperator> {
    let modes = u.basis().modes();
    spec.validate_partition(modes)?;
    let ancilla_load = spec.ancilla_in.total().max(spec.detect_out.total());
    let cutoff = u.basis().cutoff();
    if ancilla_load > cutoff {
        return Err(Error::CutoffExceeded {
            total: ancilla_load,
            cutoff,
        });
    }
    let signal_basis = FockBasis::new(spec.signal_modes.len(), cutoff - ancilla_load)?;
    let dim = signal_basis.len();
    let mut matrix = DMatrix::zeros(dim, dim);
    for (col, n_sig) in signal_basis.states().iter().enumerate() {
        let full_in = spec.embed(modes, n_sig, &spec.ancilla_in);
        for (row, m_sig) in signal_basis.states().iter().enumerate() {
            let full_out = spec.embed(modes, m_sig, &spec.detect_out);
            matrix[(row, col)] = u.entry(&full_out, &full_in)?;
        }
    }
    EffectiveOperator::from_parts(
        spec.signal_modes.len(),
        signal_basis.states().to_vec(),
        matrix,
    )
}

/// `‖S|ψ⟩‖²` for a normalized signal-basis state.
pub fn success_probability(op: &EffectiveOperator, input: &StateVector) -> Result<f64> {
    if input.basis().states() != op.states() {
        return Err(Error::BasisMismatch);
    }
    op.success_probability(input.amplitudes())
}

/// Probabilities of every ancilla detection outcome for the given signal
/// input, with the ancillas prepared per `spec` (its `detect_out` plays no
/// role here). Outcomes are listed in canonical basis order up to the largest
/// reachable total; they sum to 1 for a unitary `u`.
pub fn outcome_distribution(
    u: &FockOperator,
    spec: &PostSelectSpec,
    input: &StateVector,
) -> Result<Vec<(OccupationVector, f64)>> {
    let modes = u.basis().modes();
    spec.validate_partition(modes)?;
    if input.basis().modes() != spec.signal_modes.len() {
        return Err(Error::DimensionMismatch {
            expected: spec.signal_modes.len(),
            found: input.basis().modes(),
        });
    }
    let norm_squared = input.norm_squared();
    if (norm_squared - 1.0).abs() > INPUT_NORM_TOL {
        return Err(Error::Unnormalized { norm_squared });
    }

    // Embed the signal input alongside the prepared ancillas.
    let mut full_in = StateVector::zero(u.basis());
    let mut max_total = 0u32;
    for (i, sig_occ) in input.basis().states().iter().enumerate() {
        let amp = input.amplitudes()[i];
        if amp == Complex64::ZERO {
            continue;
        }
        let full = spec.embed(modes, sig_occ, &spec.ancilla_in);
        if full.total() > u.basis().cutoff() {
            return Err(Error::CutoffExceeded {
                total: full.total(),
                cutoff: u.basis().cutoff(),
            });
        }
        max_total = max_total.max(full.total());
        full_in.set_amplitude(&full, amp)?;
    }

    let out = u.apply(&full_in)?;

    let mut probabilities: HashMap<OccupationVector, f64> = HashMap::new();
    for (i, full_occ) in u.basis().states().iter().enumerate() {
        let p = out.amplitudes()[i].norm_sqr();
        if p == 0.0 {
            continue;
        }
        let (_, anc) = spec.split(full_occ);
        *probabilities.entry(anc).or_insert(0.0) += p;
    }

    // Every outcome reachable by photon-number conservation, zeros included.
    let outcome_basis = FockBasis::new(spec.ancilla_modes.len(), max_total)?;
    Ok(outcome_basis
        .states()
        .iter()
        .map(|anc| (anc.clone(), probabilities.get(anc).copied().unwrap_or(0.0)))
        .collect())
}
