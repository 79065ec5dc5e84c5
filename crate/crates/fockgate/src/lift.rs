//! Lifting a mode-level [`TransferMatrix`] to the unitary operator it induces
//! on the photon-number basis.
//!
//! Two genuinely independent algorithms produce the same operator and
//! cross-validate each other:
//!
//! * [`lift`] (the default) writes each input occupation as a normalized
//!   monomial of creation operators on vacuum, substitutes every creation
//!   operator by its transfer-matrix image, expands multinomially with exact
//!   integer combinatorics, and collects output occupations. Cross-sector
//!   entries are exactly zero by construction.
//! * [`lift_permanent`] evaluates each matrix element as the permanent of the
//!   row/column-repeated transfer matrix, `⟨m|Û|n⟩ = per(T[m|n]) / √(∏mᵢ!∏nⱼ!)`,
//!   with the permanent computed by direct sum over permutations. Photon
//!   sectors in scope are tiny, so the factorial cost is irrelevant.
//!
//! Both substitute creation operators column-wise: `â_j† ↦ Σ_i T_ij â_i†`, so
//! `lift(T₁·T₂) = lift(T₁)·lift(T₂)`.
//!
//! Per-column lifting is independent and runs in parallel under the
//! `parallel` feature; the output is deterministic either way because each
//! column is evaluated in a fixed order and written back by index.

use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::elements::TransferMatrix;
use crate::error::{Error, Result};
use crate::fock::{FockBasis, OccupationVector, StateVector};

/// Largest photon sector [`lift_permanent`] will evaluate.
pub const PERMANENT_PHOTON_LIMIT: u32 = 6;

/// Largest photon total either lift supports: 33! is the largest factorial
/// representable in the u128 combinatorics.
pub const LIFT_PHOTON_LIMIT: u32 = 33;

/// Operator on a [`FockBasis`], photon-number block diagonal.
#[derive(Clone, Debug)]
pub struct FockOperator {
    basis: Arc<FockBasis>,
    matrix: DMatrix<Complex64>,
}

impl FockOperator {
    pub fn identity(basis: &Arc<FockBasis>) -> Self {
        Self {
            basis: Arc::clone(basis),
            matrix: DMatrix::identity(basis.len(), basis.len()),
        }
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// `⟨m|Û|n⟩` by occupation labels.
    pub fn entry(&self, m: &OccupationVector, n: &OccupationVector) -> Result<Complex64> {
        let row = self
            .basis
            .index_of(m)
            .ok_or_else(|| Error::UnknownState(m.to_string()))?;
        let col = self
            .basis
            .index_of(n)
            .ok_or_else(|| Error::UnknownState(n.to_string()))?;
        Ok(self.matrix[(row, col)])
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if state.basis() != &self.basis {
            return Err(Error::BasisMismatch);
        }
        StateVector::from_vector(&self.basis, &self.matrix * state.amplitudes())
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &FockOperator) -> Result<FockOperator> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch);
        }
        Ok(FockOperator {
            basis: Arc::clone(&self.basis),
            matrix: &self.matrix * &other.matrix,
        })
    }

    pub fn adjoint(&self) -> FockOperator {
        FockOperator {
            basis: Arc::clone(&self.basis),
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn unitarity_deviation(&self) -> f64 {
        crate::elements::unitarity_deviation(&self.matrix)
    }

    /// Largest entry magnitude between states of different photon totals.
    pub fn max_cross_sector_entry(&self) -> f64 {
        let states = self.basis.states();
        let mut worst: f64 = 0.0;
        for (row, m) in states.iter().enumerate() {
            for (col, n) in states.iter().enumerate() {
                if m.total() != n.total() {
                    worst = worst.max(self.matrix[(row, col)].norm());
                }
            }
        }
        worst
    }

    /// Largest entrywise difference to another operator on the same basis.
    pub fn max_entry_difference(&self, other: &FockOperator) -> Result<f64> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch);
        }
        Ok(self
            .matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

fn check_dimensions(transfer: &TransferMatrix, basis: &FockBasis) -> Result<()> {
    if transfer.modes() != basis.modes() {
        return Err(Error::DimensionMismatch {
            expected: basis.modes(),
            found: transfer.modes(),
        });
    }
    if basis.cutoff() > LIFT_PHOTON_LIMIT {
        return Err(Error::PhotonLimitExceeded {
            photons: basis.cutoff(),
            limit: LIFT_PHOTON_LIMIT,
        });
    }
    Ok(())
}

/// Run a column computation over `0..count`, in parallel when enabled.
/// Results are collected in index order, so the output does not depend on
/// the evaluation schedule.
#[cfg(feature = "parallel")]
fn map_columns<F>(count: usize, f: F) -> Vec<DVector<Complex64>>
where
    F: Fn(usize) -> DVector<Complex64> + Sync + Send,
{
    use rayon::prelude::*;
    (0..count).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_columns<F>(count: usize, f: F) -> Vec<DVector<Complex64>>
where
    F: Fn(usize) -> DVector<Complex64> + Sync + Send,
{
    (0..count).map(f).collect()
}

/// Lift by multinomial expansion of creation-operator monomials.
pub fn lift(transfer: &TransferMatrix, basis: &Arc<FockBasis>) -> Result<FockOperator> {
    check_dimensions(transfer, basis)?;
    let dim = basis.len();
    let columns = map_columns(dim, |col| lift_column(transfer, basis, col));
    Ok(FockOperator {
        basis: Arc::clone(basis),
        matrix: DMatrix::from_columns(&columns),
    })
}

fn lift_column(transfer: &TransferMatrix, basis: &FockBasis, col: usize) -> DVector<Complex64> {
    let input = basis.state(col);
    let modes = basis.modes();

    // Polynomial in creation operators: monomial exponents -> coefficient.
    // BTreeMap keeps the accumulation order deterministic.
    let mut poly: BTreeMap<Vec<u32>, Complex64> = BTreeMap::new();
    poly.insert(vec![0; modes], Complex64::new(1.0, 0.0));

    for (j, &nj) in input.counts().iter().enumerate() {
        if nj == 0 {
            continue;
        }
        let factor = multinomial_power(transfer, j, nj);
        let mut next: BTreeMap<Vec<u32>, Complex64> = BTreeMap::new();
        for (mono, coeff) in &poly {
            for (exps, value) in &factor {
                let mut combined = mono.clone();
                for (c, e) in combined.iter_mut().zip(exps.iter()) {
                    *c += e;
                }
                *next.entry(combined).or_insert(Complex64::ZERO) += coeff * value;
            }
        }
        poly = next;
    }

    let input_norm = product_factorial_sqrt(input.counts());
    let mut column = DVector::zeros(basis.len());
    for (mono, coeff) in poly {
        let occ = OccupationVector::new(mono);
        let row = basis
            .index_of(&occ)
            .expect("expansion conserves the photon total");
        column[row] = coeff * product_factorial_sqrt(occ.counts()) / input_norm;
    }
    column
}

/// Terms of `(Σ_i T_ij â_i†)^k`: exponent vectors with their coefficients
/// `multinomial(k; e) · Π_i T_ij^{e_i}`. The multinomial coefficient is exact
/// integer arithmetic; only the matrix entries contribute rounding.
fn multinomial_power(
    transfer: &TransferMatrix,
    col: usize,
    power: u32,
) -> Vec<(Vec<u32>, Complex64)> {
    let modes = transfer.modes();
    let mut terms = Vec::new();
    let mut exponents = vec![0u32; modes];
    expand_compositions(transfer, col, power, 0, &mut exponents, &mut terms);
    terms
}

fn expand_compositions(
    transfer: &TransferMatrix,
    col: usize,
    remaining: u32,
    mode: usize,
    exponents: &mut Vec<u32>,
    terms: &mut Vec<(Vec<u32>, Complex64)>,
) {
    let modes = transfer.modes();
    if mode == modes - 1 {
        exponents[mode] = remaining;
        let mut value = Complex64::new(multinomial(exponents) as f64, 0.0);
        for (i, &e) in exponents.iter().enumerate() {
            if e > 0 {
                value *= transfer.entry(i, col).powu(e);
            }
        }
        if value != Complex64::ZERO {
            terms.push((exponents.clone(), value));
        }
        exponents[mode] = 0;
        return;
    }
    for k in (0..=remaining).rev() {
        exponents[mode] = k;
        expand_compositions(transfer, col, remaining - k, mode + 1, exponents, terms);
    }
    exponents[mode] = 0;
}

fn factorial(n: u32) -> u128 {
    (1..=n as u128).product()
}

fn multinomial(parts: &[u32]) -> u128 {
    let total: u32 = parts.iter().sum();
    let mut acc = factorial(total);
    for &p in parts {
        acc /= factorial(p);
    }
    acc
}

fn product_factorial_sqrt(counts: &[u32]) -> f64 {
    let product: u128 = counts.iter().map(|&c| factorial(c)).product();
    (product as f64).sqrt()
}

/// Permanent by direct sum over permutations (row expansion with a column
/// mask). `per` of the empty matrix is 1.
pub fn permanent(matrix: &DMatrix<Complex64>) -> Complex64 {
    debug_assert_eq!(matrix.nrows(), matrix.ncols());
    permanent_rec(matrix, 0, 0)
}

fn permanent_rec(matrix: &DMatrix<Complex64>, row: usize, used: u32) -> Complex64 {
    let n = matrix.nrows();
    if row == n {
        return Complex64::new(1.0, 0.0);
    }
    let mut total = Complex64::ZERO;
    for col in 0..n {
        if used & (1 << col) != 0 {
            continue;
        }
        let entry = matrix[(row, col)];
        if entry != Complex64::ZERO {
            total += entry * permanent_rec(matrix, row + 1, used | (1 << col));
        }
    }
    total
}

/// Lift by the permanent formula; the independent oracle for [`lift`].
pub fn lift_permanent(transfer: &TransferMatrix, basis: &Arc<FockBasis>) -> Result<FockOperator> {
    check_dimensions(transfer, basis)?;
    if basis.cutoff() > PERMANENT_PHOTON_LIMIT {
        return Err(Error::PhotonLimitExceeded {
            photons: basis.cutoff(),
            limit: PERMANENT_PHOTON_LIMIT,
        });
    }
    let dim = basis.len();
    // Row candidates never leave the photon sector of the input column.
    let sectors: Vec<Vec<usize>> = {
        let mut by_total: Vec<Vec<usize>> = vec![Vec::new(); basis.cutoff() as usize + 1];
        for (i, s) in basis.states().iter().enumerate() {
            by_total[s.total() as usize].push(i);
        }
        by_total
    };
    let columns = map_columns(dim, |col| {
        let n = basis.state(col);
        let mut column = DVector::zeros(dim);
        for &row in &sectors[n.total() as usize] {
            let m = basis.state(row);
            column[row] = permanent_entry(transfer, m, n);
        }
        column
    });
    Ok(FockOperator {
        basis: Arc::clone(basis),
        matrix: DMatrix::from_columns(&columns),
    })
}

fn permanent_entry(
    transfer: &TransferMatrix,
    m: &OccupationVector,
    n: &OccupationVector,
) -> Complex64 {
    let rows = repeat_indices(m.counts());
    let cols = repeat_indices(n.counts());
    debug_assert_eq!(rows.len(), cols.len());
    let k = rows.len();
    let repeated = DMatrix::from_fn(k, k, |r, c| transfer.entry(rows[r], cols[c]));
    permanent(&repeated) / (product_factorial_sqrt(m.counts()) * product_factorial_sqrt(n.counts()))
}

fn repeat_indices(counts: &[u32]) -> Vec<usize> {
    let mut out = Vec::new();
    for (i, &c) in counts.iter().enumerate() {
        for _ in 0..c {
            out.push(i);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elements::{compose, transfer_matrix, Element};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn occ(counts: &[u32]) -> OccupationVector {
        OccupationVector::from(counts)
    }

    fn bs(r: f64) -> TransferMatrix {
        transfer_matrix(&Element::beam_splitter(0, 1, r), 2).unwrap()
    }

    #[test]
    fn lift_of_identity_is_identity() {
        let basis = Arc::new(FockBasis::new(2, 3).unwrap());
        let u = lift(&TransferMatrix::identity(2), &basis).unwrap();
        let id = FockOperator::identity(&basis);
        assert_eq!(u.max_entry_difference(&id).unwrap(), 0.0);
    }

    #[test]
    fn one_one_diagonal_is_two_r_minus_one() {
        let basis = Arc::new(FockBasis::new(2, 2).unwrap());
        for r in [0.0, 0.25, 1.0 / 3.0, 0.5, 1.0] {
            let u = lift(&bs(r), &basis).unwrap();
            let d = u.entry(&occ(&[1, 1]), &occ(&[1, 1])).unwrap();
            assert_abs_diff_eq!(d.re, 2.0 * r - 1.0, epsilon = 1e-14);
            assert_abs_diff_eq!(d.im, 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn hong_ou_mandel_bunching() {
        // Expansion of (â₁† + iâ₂†)(iâ₁† + â₂†)/2 on vacuum: i(|2,0⟩ + |0,2⟩)/√2.
        let basis = Arc::new(FockBasis::new(2, 2).unwrap());
        let u = lift(&bs(0.5), &basis).unwrap();
        let input = StateVector::basis_state(&basis, &occ(&[1, 1])).unwrap();
        let out = u.apply(&input).unwrap();
        let expect = Complex64::new(0.0, 0.5_f64.sqrt());
        assert!((out.amplitude(&occ(&[2, 0])) - expect).norm() < 1e-14);
        assert!((out.amplitude(&occ(&[0, 2])) - expect).norm() < 1e-14);
        assert!(out.amplitude(&occ(&[1, 1])).norm() < 1e-14);
    }

    #[test]
    fn permanent_of_empty_matrix_is_one() {
        let m = DMatrix::<Complex64>::zeros(0, 0);
        assert_eq!(permanent(&m), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn permanent_of_two_by_two() {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1.0, 0.0),
                Complex64::new(2.0, 0.0),
                Complex64::new(3.0, 0.0),
                Complex64::new(0.0, 4.0),
            ],
        );
        // per = ad + bc = 4i + 6
        assert_eq!(permanent(&m), Complex64::new(6.0, 4.0));
    }

    #[test]
    fn permanent_lift_attenuation_diagonal() {
        let basis = Arc::new(FockBasis::new(2, 4).unwrap());
        for r in [0.25, 0.5, 0.75] {
            let u = lift_permanent(&bs(r), &basis).unwrap();
            for n in 0..=4u32 {
                let d = u.entry(&occ(&[n, 0]), &occ(&[n, 0])).unwrap();
                assert_abs_diff_eq!(d.re, r.sqrt().powi(n as i32), epsilon = 1e-12);
                assert_abs_diff_eq!(d.im, 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn permanent_lift_vacuum_entry_is_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let basis = Arc::new(FockBasis::new(3, 2).unwrap());
        let t = TransferMatrix::random_unitary(3, &mut rng);
        let u = lift_permanent(&t, &basis).unwrap();
        let vac = occ(&[0, 0, 0]);
        assert_eq!(u.entry(&vac, &vac).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn permanent_lift_two_zero_from_one_one() {
        let basis = Arc::new(FockBasis::new(2, 2).unwrap());
        let u = lift_permanent(&bs(0.5), &basis).unwrap();
        let e = u.entry(&occ(&[2, 0]), &occ(&[1, 1])).unwrap();
        let expect = Complex64::new(0.0, 0.5_f64.sqrt());
        assert!((e - expect).norm() < 1e-14);
    }

    #[test]
    fn permanent_lift_rejects_large_sectors() {
        let basis = Arc::new(FockBasis::new(2, 7).unwrap());
        assert!(matches!(
            lift_permanent(&bs(0.5), &basis),
            Err(Error::PhotonLimitExceeded { .. })
        ));
    }

    #[test]
    fn lift_rejects_dimension_mismatch() {
        let basis = Arc::new(FockBasis::new(3, 2).unwrap());
        assert!(matches!(
            lift(&bs(0.5), &basis),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn lift_rejects_cutoffs_beyond_exact_combinatorics() {
        let basis = Arc::new(FockBasis::new(2, LIFT_PHOTON_LIMIT + 1).unwrap());
        assert!(matches!(
            lift(&bs(0.5), &basis),
            Err(Error::PhotonLimitExceeded { .. })
        ));
    }

    #[test]
    fn cross_sector_entries_are_exact_zeros() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let basis = Arc::new(FockBasis::new(3, 3).unwrap());
        let t = TransferMatrix::random_unitary(3, &mut rng);
        assert_eq!(lift(&t, &basis).unwrap().max_cross_sector_entry(), 0.0);
        assert_eq!(
            lift_permanent(&t, &basis).unwrap().max_cross_sector_entry(),
            0.0
        );
    }

    #[test]
    fn composite_circuit_agrees_with_permanent_oracle() {
        let elements = [
            Element::beam_splitter(0, 1, 1.0 / 3.0),
            Element::phase_shifter(2, 1.2),
            Element::beam_splitter(1, 2, 0.7),
            Element::pbs((0, 1), (2, 3)),
        ];
        let t = compose(&elements, 4).unwrap();
        let basis = Arc::new(FockBasis::new(4, 3).unwrap());
        let a = lift(&t, &basis).unwrap();
        let b = lift_permanent(&t, &basis).unwrap();
        assert!(a.max_entry_difference(&b).unwrap() < 1e-10);
    }

    fn seeded_unitary(seed: u64, modes: usize) -> TransferMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        TransferMatrix::random_unitary(modes, &mut rng)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn oracle_equivalence_on_random_unitaries(
            seed in 0u64..1_000_000,
            modes in 1usize..=3,
            cutoff in 0u32..=3,
        ) {
            let basis = Arc::new(FockBasis::new(modes, cutoff).unwrap());
            let t = seeded_unitary(seed, modes);
            let a = lift(&t, &basis).unwrap();
            let b = lift_permanent(&t, &basis).unwrap();
            prop_assert!(a.max_entry_difference(&b).unwrap() < 1e-10);
        }

        #[test]
        fn lift_is_a_homomorphism(seed in 0u64..1_000_000, modes in 1usize..=3) {
            let basis = Arc::new(FockBasis::new(modes, 3).unwrap());
            let t1 = seeded_unitary(seed, modes);
            let t2 = seeded_unitary(seed.wrapping_add(1), modes);
            let product = TransferMatrix::new(t1.matrix() * t2.matrix()).unwrap();
            let lifted_product = lift(&product, &basis).unwrap();
            let composed = lift(&t1, &basis)
                .unwrap()
                .compose(&lift(&t2, &basis).unwrap())
                .unwrap();
            prop_assert!(lifted_product.max_entry_difference(&composed).unwrap() < 1e-10);
        }

        #[test]
        fn lift_preserves_norms(seed in 0u64..1_000_000, modes in 1usize..=3) {
            let basis = Arc::new(FockBasis::new(modes, 3).unwrap());
            let t = seeded_unitary(seed, modes);
            let u = lift(&t, &basis).unwrap();
            prop_assert!(u.unitarity_deviation() < 1e-10);

            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabcdef);
            let amps: Vec<Complex64> = (0..basis.len())
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let state = StateVector::from_amplitudes(&basis, amps).unwrap().normalized();
            let out = u.apply(&state).unwrap();
            prop_assert!((out.norm() - 1.0).abs() < 1e-10);
        }

        #[test]
        fn lift_respects_adjoints(seed in 0u64..1_000_000, modes in 1usize..=3) {
            let basis = Arc::new(FockBasis::new(modes, 3).unwrap());
            let t = seeded_unitary(seed, modes);
            let lifted_adjoint = lift(&t.adjoint(), &basis).unwrap();
            let adjoint_of_lift = lift(&t, &basis).unwrap().adjoint();
            prop_assert!(lifted_adjoint.max_entry_difference(&adjoint_of_lift).unwrap() < 1e-10);
        }
    }
}
