//! Multi-mode photon-number (Fock) bases and complex state vectors over them.
//!
//! A basis state is an [`OccupationVector`] listing photons per optical mode,
//! written `|n1,n2,...⟩`. A [`FockBasis`] enumerates every occupation up to a
//! photon-number cutoff in a fixed canonical order (total photon number
//! ascending, then lexicographically descending on the counts), so printed
//! matrices are reproducible bit for bit across runs.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Refuse to enumerate bases larger than this many states.
pub const DEFAULT_STATE_LIMIT: usize = 1_000_000;

/// Photon counts per optical mode.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct OccupationVector(Vec<u32>);

impl OccupationVector {
    pub fn new(counts: Vec<u32>) -> Self {
        Self(counts)
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn modes(&self) -> usize {
        self.0.len()
    }

    /// Total photon number.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Occupation of the concatenated mode list `self ++ other`.
    pub fn concat(&self, other: &Self) -> Self {
        let mut counts = self.0.clone();
        counts.extend_from_slice(&other.0);
        Self(counts)
    }

    /// Comma-separated counts without the ket decoration, e.g. `1,0,2`.
    pub fn counts_string(&self) -> String {
        self.0
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl From<&[u32]> for OccupationVector {
    fn from(counts: &[u32]) -> Self {
        Self(counts.to_vec())
    }
}

impl<const N: usize> From<[u32; N]> for OccupationVector {
    fn from(counts: [u32; N]) -> Self {
        Self(counts.to_vec())
    }
}

impl fmt::Display for OccupationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{}⟩", self.counts_string())
    }
}

/// Enumerate every occupation of `modes` modes with total photon number
/// exactly `total`, in canonical order (lexicographically descending, i.e.
/// the first mode drains first: `(2,0), (1,1), (0,2)`).
pub fn enumerate_sector(modes: usize, total: u32) -> Vec<OccupationVector> {
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(modes);
    fill_sector(modes, total, &mut prefix, &mut out);
    out
}

fn fill_sector(modes: usize, total: u32, prefix: &mut Vec<u32>, out: &mut Vec<OccupationVector>) {
    if modes == 1 {
        prefix.push(total);
        out.push(OccupationVector::new(prefix.clone()));
        prefix.pop();
        return;
    }
    for k in (0..=total).rev() {
        prefix.push(k);
        fill_sector(modes - 1, total - k, prefix, out);
        prefix.pop();
    }
}

/// Number of occupations of `modes` modes with total exactly `total`
/// (stars and bars).
pub fn sector_size(modes: usize, total: u32) -> u128 {
    binomial(total as u128 + modes as u128 - 1, modes as u128 - 1)
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Ordered photon-number basis for a fixed mode count and cutoff.
#[derive(Debug)]
pub struct FockBasis {
    modes: usize,
    cutoff: u32,
    /// When set, the basis holds only the sector with this total.
    sector: Option<u32>,
    states: Vec<OccupationVector>,
    index: HashMap<OccupationVector, usize>,
}

impl PartialEq for FockBasis {
    fn eq(&self, other: &Self) -> bool {
        self.modes == other.modes && self.cutoff == other.cutoff && self.sector == other.sector
    }
}

impl Eq for FockBasis {}

impl FockBasis {
    /// Enumerate all occupations with total `<= cutoff`.
    pub fn new(modes: usize, cutoff: u32) -> Result<Self> {
        Self::with_state_limit(modes, cutoff, DEFAULT_STATE_LIMIT)
    }

    /// As [`FockBasis::new`] with an explicit safety limit on the state count.
    pub fn with_state_limit(modes: usize, cutoff: u32, limit: usize) -> Result<Self> {
        if modes == 0 {
            return Err(Error::NoModes);
        }
        let total_states: u128 = (0..=cutoff).map(|n| sector_size(modes, n)).sum();
        if total_states > limit as u128 {
            return Err(Error::BasisTooLarge {
                states: total_states,
                limit,
            });
        }
        let mut states = Vec::with_capacity(total_states as usize);
        for n in 0..=cutoff {
            states.extend(enumerate_sector(modes, n));
        }
        Ok(Self::from_states(modes, cutoff, None, states))
    }

    /// Basis restricted to the fixed sector with total exactly `total`.
    pub fn sector(modes: usize, total: u32) -> Result<Self> {
        if modes == 0 {
            return Err(Error::NoModes);
        }
        let size = sector_size(modes, total);
        if size > DEFAULT_STATE_LIMIT as u128 {
            return Err(Error::BasisTooLarge {
                states: size,
                limit: DEFAULT_STATE_LIMIT,
            });
        }
        let states = enumerate_sector(modes, total);
        Ok(Self::from_states(modes, total, Some(total), states))
    }

    fn from_states(
        modes: usize,
        cutoff: u32,
        sector: Option<u32>,
        states: Vec<OccupationVector>,
    ) -> Self {
        let index = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Self {
            modes,
            cutoff,
            sector,
            states,
            index,
        }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[OccupationVector] {
        &self.states
    }

    pub fn state(&self, index: usize) -> &OccupationVector {
        &self.states[index]
    }

    /// Position of an occupation in the basis, if present.
    pub fn index_of(&self, occ: &OccupationVector) -> Option<usize> {
        self.index.get(occ).copied()
    }
}

/// Complex amplitudes over a [`FockBasis`].
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    basis: Arc<FockBasis>,
    amplitudes: DVector<Complex64>,
}

impl StateVector {
    pub fn zero(basis: &Arc<FockBasis>) -> Self {
        Self {
            basis: Arc::clone(basis),
            amplitudes: DVector::zeros(basis.len()),
        }
    }

    /// The basis state `|occ⟩` with amplitude 1.
    pub fn basis_state(basis: &Arc<FockBasis>, occ: &OccupationVector) -> Result<Self> {
        let idx = basis.index_of(occ).ok_or(Error::CutoffExceeded {
            total: occ.total(),
            cutoff: basis.cutoff(),
        })?;
        let mut state = Self::zero(basis);
        state.amplitudes[idx] = Complex64::new(1.0, 0.0);
        Ok(state)
    }

    pub fn from_amplitudes(basis: &Arc<FockBasis>, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != basis.len() {
            return Err(Error::DimensionMismatch {
                expected: basis.len(),
                found: amplitudes.len(),
            });
        }
        Ok(Self {
            basis: Arc::clone(basis),
            amplitudes: DVector::from_vec(amplitudes),
        })
    }

    pub fn from_vector(basis: &Arc<FockBasis>, amplitudes: DVector<Complex64>) -> Result<Self> {
        Self::from_amplitudes(basis, amplitudes.data.into())
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, occ: &OccupationVector) -> Complex64 {
        match self.basis.index_of(occ) {
            Some(i) => self.amplitudes[i],
            None => Complex64::ZERO,
        }
    }

    pub fn set_amplitude(&mut self, occ: &OccupationVector, value: Complex64) -> Result<()> {
        let idx = self.basis.index_of(occ).ok_or(Error::CutoffExceeded {
            total: occ.total(),
            cutoff: self.basis.cutoff(),
        })?;
        self.amplitudes[idx] = value;
        Ok(())
    }

    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        let amplitudes = if n > 0.0 {
            self.amplitudes.clone() / Complex64::new(n, 0.0)
        } else {
            self.amplitudes.clone()
        };
        Self {
            basis: Arc::clone(&self.basis),
            amplitudes,
        }
    }
}

/// Inner product `⟨a|b⟩`, conjugate-linear in the first argument.
pub fn inner(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    if a.basis != b.basis {
        return Err(Error::BasisMismatch);
    }
    Ok(a.amplitudes.dotc(&b.amplitudes))
}

/// Tensor product: the amplitude of a concatenated occupation is the product
/// of the component amplitudes. The result lives on the full basis with
/// `modes = Ma + Mb` and `cutoff = Na + Nb`.
pub fn tensor(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    let modes = a.basis.modes() + b.basis.modes();
    let cutoff = a
        .basis
        .cutoff()
        .checked_add(b.basis.cutoff())
        .ok_or(Error::CutoffExceeded {
            total: u32::MAX,
            cutoff: u32::MAX,
        })?;
    let basis = Arc::new(FockBasis::new(modes, cutoff)?);
    let mut out = StateVector::zero(&basis);
    for (ia, occ_a) in a.basis.states().iter().enumerate() {
        let amp_a = a.amplitudes[ia];
        if amp_a == Complex64::ZERO {
            continue;
        }
        for (ib, occ_b) in b.basis.states().iter().enumerate() {
            let amp_b = b.amplitudes[ib];
            if amp_b == Complex64::ZERO {
                continue;
            }
            let occ = occ_a.concat(occ_b);
            let idx = basis.index_of(&occ).expect("concat stays within cutoff");
            out.amplitudes[idx] = amp_a * amp_b;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn occ(counts: &[u32]) -> OccupationVector {
        OccupationVector::from(counts)
    }

    #[test]
    fn two_modes_cutoff_two_enumerates_in_canonical_order() {
        let basis = FockBasis::new(2, 2).unwrap();
        let expected: Vec<OccupationVector> = [
            [0, 0],
            [1, 0],
            [0, 1],
            [2, 0],
            [1, 1],
            [0, 2],
        ]
        .iter()
        .map(|c| occ(c))
        .collect();
        assert_eq!(basis.states(), expected.as_slice());
    }

    #[test]
    fn single_mode_vacuum_basis() {
        let basis = FockBasis::new(1, 0).unwrap();
        assert_eq!(basis.states(), &[occ(&[0])]);
    }

    #[test]
    fn four_modes_cutoff_two_matches_brute_force() {
        // Independent enumeration: filter the full 4-fold count grid.
        let mut brute = 0usize;
        for a in 0..=2u32 {
            for b in 0..=2u32 {
                for c in 0..=2u32 {
                    for d in 0..=2u32 {
                        if a + b + c + d <= 2 {
                            brute += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(brute, 15);
        let basis = FockBasis::new(4, 2).unwrap();
        assert_eq!(basis.len(), 15);
    }

    #[test]
    fn sector_sizes_match_stars_and_bars() {
        for modes in 1..=5usize {
            for total in 0..=4u32 {
                let states = enumerate_sector(modes, total);
                assert_eq!(states.len() as u128, sector_size(modes, total));
                // no duplicates
                let mut sorted = states.clone();
                sorted.sort();
                sorted.dedup();
                assert_eq!(sorted.len(), states.len());
            }
        }
    }

    #[test]
    fn index_is_inverse_of_position() {
        let basis = FockBasis::new(3, 3).unwrap();
        for (k, state) in basis.states().iter().enumerate() {
            assert_eq!(basis.index_of(state), Some(k));
        }
    }

    #[test]
    fn rejects_zero_modes() {
        assert!(matches!(FockBasis::new(0, 2), Err(Error::NoModes)));
    }

    #[test]
    fn rejects_oversized_basis() {
        let err = FockBasis::with_state_limit(2, 3, 5).unwrap_err();
        assert!(matches!(err, Error::BasisTooLarge { .. }));
    }

    #[test]
    fn sector_basis_is_fixed_total() {
        let basis = FockBasis::sector(3, 2).unwrap();
        assert_eq!(basis.len() as u128, sector_size(3, 2));
        assert!(basis.states().iter().all(|s| s.total() == 2));
    }

    #[test]
    fn tensor_of_single_photons() {
        let one_mode = Arc::new(FockBasis::new(1, 1).unwrap());
        let a = StateVector::basis_state(&one_mode, &occ(&[1])).unwrap();
        let b = StateVector::basis_state(&one_mode, &occ(&[1])).unwrap();
        let ab = tensor(&a, &b).unwrap();
        assert_eq!(ab.amplitude(&occ(&[1, 1])), Complex64::new(1.0, 0.0));
        assert_abs_diff_eq!(ab.norm(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn tensor_with_vacuum_keeps_amplitudes() {
        let one_mode = Arc::new(FockBasis::new(1, 1).unwrap());
        let s = 0.5_f64.sqrt();
        let a = StateVector::from_amplitudes(
            &one_mode,
            vec![Complex64::new(s, 0.0), Complex64::new(s, 0.0)],
        )
        .unwrap();
        let vac = StateVector::basis_state(&one_mode, &occ(&[0])).unwrap();
        let out = tensor(&a, &vac).unwrap();
        assert_abs_diff_eq!(out.amplitude(&occ(&[0, 0])).re, s, epsilon = 1e-15);
        assert_abs_diff_eq!(out.amplitude(&occ(&[1, 0])).re, s, epsilon = 1e-15);
        assert_eq!(out.amplitude(&occ(&[0, 1])), Complex64::ZERO);
    }

    #[test]
    fn tensor_of_circular_polarizations_in_dual_rail() {
        // (|H⟩ + i|V⟩)/√2 ⊗ (|H⟩ − i|V⟩)/√2 with H = (1,0), V = (0,1).
        let rail = Arc::new(FockBasis::new(2, 1).unwrap());
        let s = Complex64::new(0.5_f64.sqrt(), 0.0);
        let i = Complex64::new(0.0, 1.0);
        let mut right = StateVector::zero(&rail);
        right.set_amplitude(&occ(&[1, 0]), s).unwrap();
        right.set_amplitude(&occ(&[0, 1]), i * s).unwrap();
        let mut left = StateVector::zero(&rail);
        left.set_amplitude(&occ(&[1, 0]), s).unwrap();
        left.set_amplitude(&occ(&[0, 1]), -i * s).unwrap();

        let out = tensor(&right, &left).unwrap();
        let half = Complex64::new(0.5, 0.0);
        assert!((out.amplitude(&occ(&[1, 0, 1, 0])) - half).norm() < 1e-15); // HH
        assert!((out.amplitude(&occ(&[1, 0, 0, 1])) - -i * half).norm() < 1e-15); // HV
        assert!((out.amplitude(&occ(&[0, 1, 1, 0])) - i * half).norm() < 1e-15); // VH
        assert!((out.amplitude(&occ(&[0, 1, 0, 1])) - half).norm() < 1e-15); // VV
    }

    #[test]
    fn tensor_is_associative_up_to_mode_relabeling() {
        // Dyadic components keep every product exact, so equality is bitwise.
        let rail = Arc::new(FockBasis::new(2, 1).unwrap());
        let mk = |h: Complex64, v: Complex64| {
            let mut s = StateVector::zero(&rail);
            s.set_amplitude(&occ(&[1, 0]), h).unwrap();
            s.set_amplitude(&occ(&[0, 1]), v).unwrap();
            s
        };
        let a = mk(Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.75));
        let b = mk(Complex64::new(0.25, 0.5), Complex64::new(0.5, 0.0));
        let c = mk(Complex64::new(0.0, 1.0), Complex64::new(0.25, 0.125));
        let left = tensor(&tensor(&a, &b).unwrap(), &c).unwrap();
        let right = tensor(&a, &tensor(&b, &c).unwrap()).unwrap();
        assert_eq!(left.basis(), right.basis());
        for (x, y) in left.amplitudes().iter().zip(right.amplitudes().iter()) {
            assert!((x - y).norm() == 0.0);
        }
    }

    #[test]
    fn inner_product_examples() {
        let basis = Arc::new(FockBasis::new(2, 2).unwrap());
        let one_one = StateVector::basis_state(&basis, &occ(&[1, 1])).unwrap();
        assert_eq!(
            inner(&one_one, &one_one).unwrap(),
            Complex64::new(1.0, 0.0)
        );

        let ten = StateVector::basis_state(&basis, &occ(&[1, 0])).unwrap();
        let zero_one = StateVector::basis_state(&basis, &occ(&[0, 1])).unwrap();
        assert_eq!(inner(&ten, &zero_one).unwrap(), Complex64::ZERO);

        let s = 0.5_f64.sqrt();
        let mut sup = StateVector::zero(&basis);
        sup.set_amplitude(&occ(&[2, 0]), Complex64::new(s, 0.0))
            .unwrap();
        sup.set_amplitude(&occ(&[0, 2]), Complex64::new(s, 0.0))
            .unwrap();
        let two_zero = StateVector::basis_state(&basis, &occ(&[2, 0])).unwrap();
        assert_abs_diff_eq!(inner(&sup, &two_zero).unwrap().re, s, epsilon = 1e-15);
    }

    #[test]
    fn inner_is_conjugate_linear_in_first_argument() {
        let basis = Arc::new(FockBasis::new(1, 1).unwrap());
        let i = Complex64::new(0.0, 1.0);
        let a = StateVector::from_amplitudes(&basis, vec![i, Complex64::ZERO]).unwrap();
        let b = StateVector::from_amplitudes(
            &basis,
            vec![Complex64::new(1.0, 0.0), Complex64::ZERO],
        )
        .unwrap();
        assert_eq!(inner(&a, &b).unwrap(), -i);
        assert_eq!(inner(&b, &a).unwrap(), i);
    }

    #[test]
    fn inner_rejects_basis_mismatch() {
        let b1 = Arc::new(FockBasis::new(2, 1).unwrap());
        let b2 = Arc::new(FockBasis::new(2, 2).unwrap());
        let a = StateVector::zero(&b1);
        let b = StateVector::zero(&b2);
        assert!(matches!(inner(&a, &b), Err(Error::BasisMismatch)));
    }
}
