//! Optical circuit elements and their M×M unitary transfer matrices.
//!
//! A beam splitter of reflectivity `R` acts on its two modes as
//! `[[√R, i√(1−R)], [i√(1−R), √R]]`: the reflection amplitude is the real
//! `√R` and the cross (transmission) amplitude carries the factor `i`.
//! Attenuation is not a primitive element; it is a beam splitter coupling to
//! a fresh ancilla mode that is post-selected on zero photons, so every
//! element here stays unitary.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

/// Bound on `max |(T†T − I)_ij|` for every generated transfer matrix.
pub const UNITARITY_TOL: f64 = 1e-12;

/// A single linear-optical element.
#[derive(Clone, Debug, PartialEq)]
pub enum Element {
    /// Two-mode beam splitter; `adjoint` applies the conjugate-transposed block.
    BeamSplitter {
        mode_a: usize,
        mode_b: usize,
        reflectivity: f64,
        adjoint: bool,
    },
    /// Phase `e^{iφ}` on a single mode.
    PhaseShifter { mode: usize, phase: f64 },
    /// Polarizing beam splitter over two (H-mode, V-mode) rails: transmits H,
    /// reflects V, i.e. swaps the V modes and leaves the H modes in place.
    PolarizingBeamSplitter {
        rail_a: (usize, usize),
        rail_b: (usize, usize),
    },
    /// Relabeling of modes: mode `i` goes to `permutation[i]`.
    ModePermutation { permutation: Vec<usize> },
}

impl Element {
    pub fn beam_splitter(mode_a: usize, mode_b: usize, reflectivity: f64) -> Self {
        Element::BeamSplitter {
            mode_a,
            mode_b,
            reflectivity,
            adjoint: false,
        }
    }

    pub fn beam_splitter_adjoint(mode_a: usize, mode_b: usize, reflectivity: f64) -> Self {
        Element::BeamSplitter {
            mode_a,
            mode_b,
            reflectivity,
            adjoint: true,
        }
    }

    pub fn phase_shifter(mode: usize, phase: f64) -> Self {
        Element::PhaseShifter { mode, phase }
    }

    pub fn pbs(rail_a: (usize, usize), rail_b: (usize, usize)) -> Self {
        Element::PolarizingBeamSplitter { rail_a, rail_b }
    }

    pub fn swap(mode_a: usize, mode_b: usize, modes: usize) -> Self {
        let mut permutation: Vec<usize> = (0..modes).collect();
        permutation.swap(mode_a, mode_b);
        Element::ModePermutation { permutation }
    }

    /// Mode indices referenced by this element, in declaration order.
    pub fn referenced_modes(&self) -> Vec<usize> {
        match self {
            Element::BeamSplitter { mode_a, mode_b, .. } => vec![*mode_a, *mode_b],
            Element::PhaseShifter { mode, .. } => vec![*mode],
            Element::PolarizingBeamSplitter { rail_a, rail_b } => {
                vec![rail_a.0, rail_a.1, rail_b.0, rail_b.1]
            }
            Element::ModePermutation { permutation } => permutation.clone(),
        }
    }

    pub fn validate(&self, modes: usize) -> Result<()> {
        let referenced = self.referenced_modes();
        for &m in &referenced {
            if m >= modes {
                return Err(Error::ModeOutOfRange { mode: m, modes });
            }
        }
        let mut seen = vec![false; modes];
        for &m in &referenced {
            if seen[m] {
                return Err(Error::DuplicateMode { mode: m });
            }
            seen[m] = true;
        }
        match self {
            Element::BeamSplitter { reflectivity, .. }
                if !(0.0..=1.0).contains(reflectivity) =>
            {
                Err(Error::ReflectivityOutOfRange {
                    value: *reflectivity,
                })
            }
            Element::ModePermutation { permutation } if permutation.len() != modes => {
                Err(Error::InvalidPermutation)
            }
            _ => Ok(()),
        }
    }
}

/// M×M unitary acting on the mode (creation) operators.
#[derive(Clone, Debug, PartialEq)]
pub struct TransferMatrix {
    matrix: DMatrix<Complex64>,
}

impl TransferMatrix {
    /// Wrap a matrix, checking unitarity against [`UNITARITY_TOL`].
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        let deviation = unitarity_deviation(&matrix);
        if deviation.is_nan() || deviation >= UNITARITY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self { matrix })
    }

    pub fn identity(modes: usize) -> Self {
        Self {
            matrix: DMatrix::identity(modes, modes),
        }
    }

    pub fn modes(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn unitarity_deviation(&self) -> f64 {
        unitarity_deviation(&self.matrix)
    }

    /// Unitary drawn from the QR decomposition of a matrix with uniform
    /// random complex entries. Deterministic for a seeded `rng`.
    pub fn random_unitary<R: Rng>(modes: usize, rng: &mut R) -> Self {
        let g = DMatrix::from_fn(modes, modes, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let q = g.qr().q();
        Self { matrix: q }
    }
}

/// `max |(T†T − I)_ij|`.
pub fn unitarity_deviation(matrix: &DMatrix<Complex64>) -> f64 {
    let n = matrix.nrows();
    let gram = matrix.adjoint() * matrix;
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let expected = if i == j { Complex64::new(1.0, 0.0) } else { Complex64::ZERO };
            dev = dev.max((gram[(i, j)] - expected).norm());
        }
    }
    dev
}

/// Transfer matrix of a single element embedded in an `modes`-mode identity.
pub fn transfer_matrix(element: &Element, modes: usize) -> Result<TransferMatrix> {
    element.validate(modes)?;
    let mut m = DMatrix::identity(modes, modes);
    match element {
        Element::BeamSplitter {
            mode_a,
            mode_b,
            reflectivity,
            adjoint,
        } => {
            let r = Complex64::new(reflectivity.sqrt(), 0.0);
            let t = Complex64::new(0.0, (1.0 - reflectivity).sqrt());
            let (a, b) = (*mode_a, *mode_b);
            if *adjoint {
                m[(a, a)] = r;
                m[(a, b)] = -t;
                m[(b, a)] = -t;
                m[(b, b)] = r;
            } else {
                m[(a, a)] = r;
                m[(a, b)] = t;
                m[(b, a)] = t;
                m[(b, b)] = r;
            }
        }
        Element::PhaseShifter { mode, phase } => {
            m[(*mode, *mode)] = Complex64::new(0.0, *phase).exp();
        }
        Element::PolarizingBeamSplitter { rail_a, rail_b } => {
            let (va, vb) = (rail_a.1, rail_b.1);
            m[(va, va)] = Complex64::ZERO;
            m[(vb, vb)] = Complex64::ZERO;
            m[(va, vb)] = Complex64::new(1.0, 0.0);
            m[(vb, va)] = Complex64::new(1.0, 0.0);
        }
        Element::ModePermutation { permutation } => {
            m.fill(Complex64::ZERO);
            for (from, &to) in permutation.iter().enumerate() {
                m[(to, from)] = Complex64::new(1.0, 0.0);
            }
        }
    }
    TransferMatrix::new(m)
}

/// Product of element transfer matrices in application order: the first
/// element of the list is applied first, so the composite is `T_k ··· T_1`.
pub fn compose(elements: &[Element], modes: usize) -> Result<TransferMatrix> {
    if modes == 0 {
        return Err(Error::NoModes);
    }
    let mut acc = DMatrix::identity(modes, modes);
    for element in elements {
        let t = transfer_matrix(element, modes)?;
        acc = t.matrix() * acc;
    }
    TransferMatrix::new(acc)
}
