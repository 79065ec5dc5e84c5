//! Circuit data model: an ordered element list plus the ancilla
//! preparation/detection that defines the post-selection.

use std::sync::Arc;

use crate::elements::{compose, Element, TransferMatrix};
use crate::error::{Error, Result};
use crate::fock::{FockBasis, OccupationVector};
use crate::lift::{lift, FockOperator};
use crate::postselect::{effective_operator, EffectiveOperator, PostSelectSpec};

/// One ancilla mode: prepared with `input` photons, post-selected on
/// detecting `detect` photons.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ancilla {
    pub mode: usize,
    pub input: u32,
    pub detect: u32,
}

/// A validated linear-optical circuit. Ancillas are kept sorted by mode so
/// the canonical text form is stable.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    modes: usize,
    elements: Vec<Element>,
    ancillas: Vec<Ancilla>,
    declared_inputs: Vec<OccupationVector>,
}

impl Circuit {
    pub fn new(
        modes: usize,
        elements: Vec<Element>,
        mut ancillas: Vec<Ancilla>,
        declared_inputs: Vec<OccupationVector>,
    ) -> Result<Self> {
        if modes == 0 {
            return Err(Error::NoModes);
        }
        for element in &elements {
            element.validate(modes)?;
        }
        ancillas.sort_by_key(|a| a.mode);
        for pair in ancillas.windows(2) {
            if pair[0].mode == pair[1].mode {
                return Err(Error::DuplicateMode { mode: pair[0].mode });
            }
        }
        for ancilla in &ancillas {
            if ancilla.mode >= modes {
                return Err(Error::ModeOutOfRange {
                    mode: ancilla.mode,
                    modes,
                });
            }
        }
        let signal_count = modes - ancillas.len();
        for input in &declared_inputs {
            if input.modes() != signal_count {
                return Err(Error::DimensionMismatch {
                    expected: signal_count,
                    found: input.modes(),
                });
            }
        }
        Ok(Self {
            modes,
            elements,
            ancillas,
            declared_inputs,
        })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn ancillas(&self) -> &[Ancilla] {
        &self.ancillas
    }

    pub fn declared_inputs(&self) -> &[OccupationVector] {
        &self.declared_inputs
    }

    /// Modes not claimed by an ancilla, ascending.
    pub fn signal_modes(&self) -> Vec<usize> {
        let mut is_ancilla = vec![false; self.modes];
        for a in &self.ancillas {
            is_ancilla[a.mode] = true;
        }
        (0..self.modes).filter(|&m| !is_ancilla[m]).collect()
    }

    pub fn ancilla_in_total(&self) -> u32 {
        self.ancillas.iter().map(|a| a.input).sum()
    }

    pub fn postselect_spec(&self) -> PostSelectSpec {
        let ancilla_modes: Vec<usize> = self.ancillas.iter().map(|a| a.mode).collect();
        let ancilla_in = OccupationVector::new(self.ancillas.iter().map(|a| a.input).collect());
        let detect_out = OccupationVector::new(self.ancillas.iter().map(|a| a.detect).collect());
        PostSelectSpec::new(self.signal_modes(), ancilla_modes, ancilla_in, detect_out)
            .expect("ancilla occupations built from the ancilla list")
    }

    /// Composed mode-level transfer matrix of all elements in order.
    pub fn transfer_matrix(&self) -> Result<TransferMatrix> {
        compose(&self.elements, self.modes)
    }

    /// Lift of the composed transfer matrix onto the cutoff basis. Rejects
    /// circuits whose ancilla preparation alone already exceeds the cutoff.
    pub fn lift(&self, cutoff: u32) -> Result<FockOperator> {
        let prepared = self.ancilla_in_total();
        if prepared > cutoff {
            return Err(Error::CutoffExceeded {
                total: prepared,
                cutoff,
            });
        }
        let basis = Arc::new(FockBasis::new(self.modes, cutoff)?);
        lift(&self.transfer_matrix()?, &basis)
    }

    /// Effective operator on the signal modes under this circuit's
    /// post-selection, at the given basis cutoff.
    pub fn effective_operator(&self, cutoff: u32) -> Result<EffectiveOperator> {
        let u = self.lift(cutoff)?;
        effective_operator(&u, &self.postselect_spec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn empty_circuit_is_the_identity_on_signal_modes() {
        let circuit = Circuit::new(2, vec![], vec![], vec![]).unwrap();
        let s = circuit.effective_operator(2).unwrap();
        for row in 0..s.dim() {
            for col in 0..s.dim() {
                let expected = if row == col { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(s.entry(row, col).re, expected, epsilon = 1e-15);
                assert_abs_diff_eq!(s.entry(row, col).im, 0.0, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn nonlinear_sign_circuit_from_parts() {
        let circuit = Circuit::new(
            2,
            vec![Element::beam_splitter(0, 1, 0.25)],
            vec![Ancilla {
                mode: 1,
                input: 1,
                detect: 1,
            }],
            vec![],
        )
        .unwrap();
        let s = circuit.effective_operator(3).unwrap();
        let d = s.diagonal();
        assert_abs_diff_eq!(d[0].re, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(d[1].re, -0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(d[2].re, -0.625, epsilon = 1e-12);
    }

    #[test]
    fn rejects_duplicate_ancilla_modes() {
        let err = Circuit::new(
            2,
            vec![],
            vec![
                Ancilla {
                    mode: 1,
                    input: 0,
                    detect: 0,
                },
                Ancilla {
                    mode: 1,
                    input: 1,
                    detect: 1,
                },
            ],
            vec![],
        )
        .unwrap_err();
        assert!(matches!(err, Error::DuplicateMode { mode: 1 }));
    }

    #[test]
    fn rejects_preparation_beyond_cutoff() {
        let circuit = Circuit::new(
            2,
            vec![Element::beam_splitter(0, 1, 0.5)],
            vec![Ancilla {
                mode: 1,
                input: 3,
                detect: 3,
            }],
            vec![],
        )
        .unwrap();
        assert!(matches!(
            circuit.lift(2),
            Err(Error::CutoffExceeded { total: 3, cutoff: 2 })
        ));
    }

    #[test]
    fn declared_inputs_must_cover_the_signal_modes() {
        let err = Circuit::new(
            3,
            vec![],
            vec![Ancilla {
                mode: 2,
                input: 0,
                detect: 0,
            }],
            vec![OccupationVector::from([1, 0, 0])],
        )
        .unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { expected: 2, .. }));
    }
}
