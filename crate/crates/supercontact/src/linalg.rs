//! Exact sparse linear algebra over the rationals.
//!
//! Two entry points cover every use in the crate:
//!
//! * [`Eliminator`] incrementally row-reduces a stream of sparse vectors.
//!   It answers rank and span-membership questions without storing the
//!   original rows.
//! * [`RrefSystem`] keeps a fully reduced (Gauss-Jordan) system `A x = b`
//!   with row-operation tracking, so it can return either an exact solution
//!   or an exact infeasibility witness: a combination of the original
//!   equations that is identically zero on the left and nonzero on the
//!   right. It also produces nullspace bases.
//!
//! Vectors are sorted coordinate lists with no zero entries.

use crate::scalar::Scalar;
use std::collections::BTreeMap;

/// Sparse vector: strictly increasing coordinates, nonzero entries.
pub type SparseVec = Vec<(u32, Scalar)>;

/// Builds a canonical [`SparseVec`] from arbitrary (possibly repeated,
/// possibly zero) entries.
pub fn sparse_from_entries(entries: impl IntoIterator<Item = (u32, Scalar)>) -> SparseVec {
    let mut acc: BTreeMap<u32, Scalar> = BTreeMap::new();
    for (i, c) in entries {
        if c.is_zero() {
            continue;
        }
        let slot = acc.entry(i).or_default();
        *slot += &c;
        if slot.is_zero() {
            acc.remove(&i);
        }
    }
    acc.into_iter().collect()
}

/// `dst += s * src` on sparse vectors.
fn axpy(dst: &SparseVec, s: &Scalar, src: &SparseVec) -> SparseVec {
    if s.is_zero() {
        return dst.clone();
    }
    let mut out = SparseVec::with_capacity(dst.len() + src.len());
    let (mut i, mut j) = (0, 0);
    while i < dst.len() || j < src.len() {
        match (dst.get(i), src.get(j)) {
            (Some((ci, vi)), Some((cj, vj))) if ci == cj => {
                let v = vi + &(s * vj);
                if !v.is_zero() {
                    out.push((*ci, v));
                }
                i += 1;
                j += 1;
            }
            (Some((ci, vi)), Some((cj, _))) if ci < cj => {
                out.push((*ci, vi.clone()));
                i += 1;
            }
            (Some(_), Some((cj, vj))) => {
                out.push((*cj, s * vj));
                j += 1;
            }
            (Some((ci, vi)), None) => {
                out.push((*ci, vi.clone()));
                i += 1;
            }
            (None, Some((cj, vj))) => {
                out.push((*cj, s * vj));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

pub(crate) fn coeff_at(v: &SparseVec, col: u32) -> Scalar {
    match v.binary_search_by_key(&col, |(c, _)| *c) {
        Ok(pos) => v[pos].1.clone(),
        Err(_) => Scalar::ZERO,
    }
}

/// Incremental row reducer for rank and span-membership queries.
#[derive(Debug, Default, Clone)]
pub struct Eliminator {
    /// Pivot column -> row with leading 1 at that column.
    pivots: BTreeMap<u32, SparseVec>,
}

impl Eliminator {
    pub fn new() -> Self {
        Self::default()
    }

    /// Reduces `row` by the stored pivots until its leading coordinate has
    /// no pivot (or it vanishes). The result is zero iff `row` lies in the
    /// span of the inserted rows.
    pub fn reduce(&self, mut row: SparseVec) -> SparseVec {
        while let Some((col, lead)) = row.first().cloned() {
            match self.pivots.get(&col) {
                Some(p) => row = axpy(&row, &-&lead, p),
                None => break,
            }
        }
        row
    }

    /// Inserts a row; returns `true` when it enlarged the span.
    pub fn insert(&mut self, row: SparseVec) -> bool {
        let red = self.reduce(row);
        match red.first().cloned() {
            None => false,
            Some((col, lead)) => {
                let inv = lead.recip();
                let normalized: SparseVec =
                    red.into_iter().map(|(c, v)| (c, &v * &inv)).collect();
                self.pivots.insert(col, normalized);
                true
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn contains(&self, row: SparseVec) -> bool {
        self.reduce(row).is_empty()
    }
}

/// Rank of the span of a collection of sparse vectors.
pub fn rank_of(rows: impl IntoIterator<Item = SparseVec>) -> usize {
    let mut e = Eliminator::new();
    for row in rows {
        e.insert(row);
    }
    e.rank()
}

/// Infeasibility witness for a linear system: a combination of the original
/// equations that cancels every unknown but not the right-hand side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Infeasibility {
    /// `(equation index, multiplier)` pairs with nonzero multipliers.
    pub combination: Vec<(u32, Scalar)>,
    /// The nonzero value `sum_i multiplier_i * rhs_i`.
    pub rhs_value: Scalar,
}

#[derive(Debug, Clone)]
struct TrackedRow {
    coeffs: SparseVec,
    rhs: Scalar,
    /// Combination of original equations this row equals.
    trace: SparseVec,
}

/// Fully reduced linear system with row-operation tracking.
///
/// Equations are added one at a time with [`add_equation`](Self::add_equation);
/// each carries the caller's equation index for witness reporting.
#[derive(Debug, Default, Clone)]
pub struct RrefSystem {
    /// Pivot column -> tracked row, mutually reduced (Gauss-Jordan).
    pivots: BTreeMap<u32, TrackedRow>,
}

impl RrefSystem {
    pub fn new() -> Self {
        Self::default()
    }

    fn reduce_tracked(&self, mut row: TrackedRow) -> TrackedRow {
        // Pivot rows are mutually reduced, so each pivot column in `row`
        // is cleared in one pass over its (growing, sorted) support.
        let mut k = 0;
        while k < row.coeffs.len() {
            let (col, v) = row.coeffs[k].clone();
            if let Some(p) = self.pivots.get(&col) {
                let s = -&v;
                row.coeffs = axpy(&row.coeffs, &s, &p.coeffs);
                row.rhs = &row.rhs + &(&s * &p.rhs);
                row.trace = axpy(&row.trace, &s, &p.trace);
                // The entry at `col` is gone; `k` now indexes the next column.
            } else {
                k += 1;
            }
        }
        row
    }

    /// Adds `coeffs . x = rhs` as equation number `eq_index`.
    ///
    /// Returns an [`Infeasibility`] witness as soon as the system becomes
    /// inconsistent.
    pub fn add_equation(
        &mut self,
        eq_index: u32,
        coeffs: SparseVec,
        rhs: Scalar,
    ) -> Result<(), Infeasibility> {
        let row = TrackedRow {
            coeffs,
            rhs,
            trace: vec![(eq_index, Scalar::ONE)],
        };
        let red = self.reduce_tracked(row);
        match red.coeffs.first().cloned() {
            None => {
                if red.rhs.is_zero() {
                    Ok(())
                } else {
                    Err(Infeasibility {
                        combination: red.trace,
                        rhs_value: red.rhs,
                    })
                }
            }
            Some((col, lead)) => {
                let inv = lead.recip();
                let new_row = TrackedRow {
                    coeffs: red.coeffs.iter().map(|(c, v)| (*c, v * &inv)).collect(),
                    rhs: &red.rhs * &inv,
                    trace: red.trace.iter().map(|(c, v)| (*c, v * &inv)).collect(),
                };
                // Keep existing pivot rows reduced at the new column.
                let updates: Vec<(u32, Scalar)> = self
                    .pivots
                    .iter()
                    .filter_map(|(pc, pr)| {
                        let v = coeff_at(&pr.coeffs, col);
                        (!v.is_zero()).then_some((*pc, v))
                    })
                    .collect();
                for (pc, v) in updates {
                    let s = -&v;
                    let pr = self.pivots.get_mut(&pc).unwrap();
                    pr.coeffs = axpy(&pr.coeffs, &s, &new_row.coeffs);
                    pr.rhs = &pr.rhs + &(&s * &new_row.rhs);
                    pr.trace = axpy(&pr.trace, &s, &new_row.trace);
                }
                self.pivots.insert(col, new_row);
                Ok(())
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// The reduced pivot rows as `(pivot column, coefficients, rhs, trace)`.
    /// Traces express each row as a combination of the original equations.
    pub fn rows(&self) -> impl Iterator<Item = (u32, &SparseVec, &Scalar, &SparseVec)> {
        self.pivots
            .iter()
            .map(|(col, r)| (*col, &r.coeffs, &r.rhs, &r.trace))
    }

    /// The particular solution with every free unknown set to zero,
    /// as sparse `(unknown, value)` pairs.
    pub fn particular_solution(&self) -> SparseVec {
        self.pivots
            .iter()
            .filter(|(_, r)| !r.rhs.is_zero())
            .map(|(col, r)| (*col, r.rhs.clone()))
            .collect()
    }

    /// Basis of the homogeneous nullspace over unknowns `0..n_unknowns`,
    /// one sparse vector per free column.
    pub fn nullspace(&self, n_unknowns: u32) -> Vec<SparseVec> {
        let mut basis = Vec::new();
        for free in 0..n_unknowns {
            if self.pivots.contains_key(&free) {
                continue;
            }
            let mut v: Vec<(u32, Scalar)> = vec![(free, Scalar::ONE)];
            for (pc, pr) in &self.pivots {
                let c = coeff_at(&pr.coeffs, free);
                if !c.is_zero() {
                    v.push((*pc, -&c));
                }
            }
            v.sort_by_key(|(c, _)| *c);
            basis.push(v);
        }
        basis
    }
}

/// Solves `A x = b` where `rows[i]` is equation `i`; returns either the
/// free-variables-zero solution or an infeasibility witness.
pub fn solve_with_certificate(
    rows: &[SparseVec],
    rhs: &[Scalar],
) -> Result<SparseVec, Infeasibility> {
    assert_eq!(rows.len(), rhs.len());
    let mut sys = RrefSystem::new();
    for (i, (row, b)) in rows.iter().zip(rhs).enumerate() {
        sys.add_equation(i as u32, row.clone(), b.clone())?;
    }
    Ok(sys.particular_solution())
}

/// Dot product of a sparse vector with a dense slice indexed by coordinate.
pub fn sparse_dot_dense(v: &SparseVec, dense: &[Scalar]) -> Scalar {
    let mut acc = Scalar::ZERO;
    for (c, s) in v {
        acc += s * &dense[*c as usize];
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sv(entries: &[(u32, i64)]) -> SparseVec {
        sparse_from_entries(entries.iter().map(|(c, n)| (*c, Scalar::from_int(*n))))
    }

    #[test]
    fn rank_and_span_membership() {
        let mut e = Eliminator::new();
        assert!(e.insert(sv(&[(0, 1), (1, 2)])));
        assert!(e.insert(sv(&[(1, 1), (2, 1)])));
        assert!(!e.insert(sv(&[(0, 1), (1, 3), (2, 1)])), "dependent row");
        assert_eq!(e.rank(), 2);
        assert!(e.contains(sv(&[(0, 2), (1, 5), (2, 1)])));
        assert!(!e.contains(sv(&[(2, 1)])));
    }

    #[test]
    fn solve_simple_system() {
        // x + y = 3, x - y = 1  =>  x = 2, y = 1.
        let rows = vec![sv(&[(0, 1), (1, 1)]), sv(&[(0, 1), (1, -1)])];
        let rhs = vec![Scalar::from_int(3), Scalar::from_int(1)];
        let x = solve_with_certificate(&rows, &rhs).unwrap();
        assert_eq!(x, sv(&[(0, 2), (1, 1)]));
    }

    #[test]
    fn infeasible_system_yields_checkable_witness() {
        // x + y = 1, 2x + 2y = 3 is inconsistent.
        let rows = vec![sv(&[(0, 1), (1, 1)]), sv(&[(0, 2), (1, 2)])];
        let rhs = vec![Scalar::from_int(1), Scalar::from_int(3)];
        let w = solve_with_certificate(&rows, &rhs).unwrap_err();
        // Re-multiply: the combination annihilates every column but not rhs.
        let mut lhs_combo: BTreeMap<u32, Scalar> = BTreeMap::new();
        let mut rhs_combo = Scalar::ZERO;
        for (eq, m) in &w.combination {
            for (col, v) in &rows[*eq as usize] {
                *lhs_combo.entry(*col).or_default() += m * v;
            }
            rhs_combo += m * &rhs[*eq as usize];
        }
        assert!(lhs_combo.values().all(Scalar::is_zero));
        assert!(!rhs_combo.is_zero());
        assert_eq!(rhs_combo, w.rhs_value);
    }

    #[test]
    fn nullspace_basis() {
        // x + y + z = 0 has a two-dimensional nullspace.
        let mut sys = RrefSystem::new();
        sys.add_equation(0, sv(&[(0, 1), (1, 1), (2, 1)]), Scalar::ZERO)
            .unwrap();
        let basis = sys.nullspace(3);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            let total: Scalar = v.iter().fold(Scalar::ZERO, |a, (_, s)| a + s);
            assert!(total.is_zero());
        }
    }

    fn arb_matrix() -> impl Strategy<Value = Vec<SparseVec>> {
        proptest::collection::vec(
            proptest::collection::vec((-5i64..=5).prop_map(Scalar::from_int), 5),
            1..6,
        )
        .prop_map(|dense| {
            dense
                .into_iter()
                .map(|row| {
                    sparse_from_entries(row.into_iter().enumerate().map(|(i, s)| (i as u32, s)))
                })
                .collect()
        })
    }

    proptest! {
        #[test]
        fn solution_or_witness_verifies_by_remultiplication(
            rows in arb_matrix(),
            rhs_ints in proptest::collection::vec(-5i64..=5, 6),
        ) {
            let rhs: Vec<Scalar> =
                rows.iter().zip(&rhs_ints).map(|(_, n)| Scalar::from_int(*n)).collect();
            match solve_with_certificate(&rows, &rhs) {
                Ok(x) => {
                    let mut dense = vec![Scalar::ZERO; 5];
                    for (c, v) in &x {
                        dense[*c as usize] = v.clone();
                    }
                    for (row, b) in rows.iter().zip(&rhs) {
                        prop_assert_eq!(&sparse_dot_dense(row, &dense), b);
                    }
                }
                Err(w) => {
                    let mut combo: BTreeMap<u32, Scalar> = BTreeMap::new();
                    let mut total = Scalar::ZERO;
                    for (eq, m) in &w.combination {
                        for (col, v) in &rows[*eq as usize] {
                            *combo.entry(*col).or_default() += m * v;
                        }
                        total += m * &rhs[*eq as usize];
                    }
                    prop_assert!(combo.values().all(Scalar::is_zero));
                    prop_assert!(!total.is_zero());
                    prop_assert_eq!(total, w.rhs_value);
                }
            }
        }

        #[test]
        fn nullity_plus_rank_is_dimension(rows in arb_matrix()) {
            let mut sys = RrefSystem::new();
            for (i, r) in rows.iter().enumerate() {
                sys.add_equation(i as u32, r.clone(), Scalar::ZERO).unwrap();
            }
            let null = sys.nullspace(5);
            prop_assert_eq!(sys.rank() + null.len(), 5);
            prop_assert_eq!(sys.rank(), rank_of(rows.iter().cloned()));
            // Every basis vector annihilates every row.
            for v in &null {
                let mut dense = vec![Scalar::ZERO; 5];
                for (c, s) in v {
                    dense[*c as usize] = s.clone();
                }
                for row in &rows {
                    prop_assert!(sparse_dot_dense(row, &dense).is_zero());
                }
            }
        }
    }
}
