//! Exact sparse linear algebra over the rationals and over word-sized prime
//! fields.
//!
//! Vectors are sparse maps from canonical word indices to coefficients, bases
//! are kept in reduced row-echelon form with the pivot of every row at its
//! smallest nonzero index.  Rank computations may run modulo independent
//! 62-bit primes as a fast path, but any dimension that is reported as exact
//! must be certified rationally; a disagreement between primes is an error
//! and is never resolved silently.

use std::collections::BTreeMap;
use std::fmt::Debug;

use num::{BigInt, BigRational, One, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// Arbitrary-precision rational scalar; always stored in lowest terms with a
/// positive denominator.
pub type Scalar = BigRational;

/// Scalar from a machine integer.
pub fn sc(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

/// Scalar `n/d` in lowest terms.
pub fn ratio(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Coefficient field for the generic elimination routines.
pub trait Field: Clone {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse of a nonzero element.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = Scalar;

    fn zero(&self) -> Scalar {
        Scalar::zero()
    }
    fn one(&self) -> Scalar {
        Scalar::one()
    }
    fn is_zero(&self, a: &Scalar) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        a + b
    }
    fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        a * b
    }
    fn neg(&self, a: &Scalar) -> Scalar {
        -a
    }
    fn inv(&self, a: &Scalar) -> Scalar {
        a.recip()
    }
}

/// The prime field `Z/p` for a word-sized prime `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    pub p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        debug_assert!(is_prime_u64(p));
        PrimeField { p }
    }

    fn mul_mod(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    fn pow_mod(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_mod(acc, base);
            }
            base = self.mul_mod(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Image of a rational scalar, when its denominator is a unit mod `p`.
    pub fn reduce_scalar(&self, s: &Scalar) -> Option<u64> {
        let p = BigInt::from(self.p);
        let num = ((s.numer() % &p) + &p) % &p;
        let den = ((s.denom() % &p) + &p) % &p;
        let num: u64 = num.try_into().expect("residue fits in u64");
        let den: u64 = den.try_into().expect("residue fits in u64");
        if den == 0 {
            return None;
        }
        Some(self.mul_mod(num, self.pow_mod(den, self.p - 2)))
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.mul_mod(*a, *b)
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> u64 {
        debug_assert!(*a != 0);
        self.pow_mod(*a, self.p - 2)
    }
}

/// Sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseVec<E> {
    entries: Vec<(u32, E)>,
}

impl<E: Clone + PartialEq + Debug> SparseVec<E> {
    pub fn empty() -> Self {
        SparseVec { entries: Vec::new() }
    }

    /// Build from unsorted pairs, combining duplicates and dropping zeros.
    pub fn from_pairs<F: Field<Elem = E>>(field: &F, pairs: Vec<(u32, E)>) -> Self {
        let mut map: BTreeMap<u32, E> = BTreeMap::new();
        for (i, c) in pairs {
            match map.remove(&i) {
                Some(old) => {
                    let s = field.add(&old, &c);
                    if !field.is_zero(&s) {
                        map.insert(i, s);
                    }
                }
                None => {
                    if !field.is_zero(&c) {
                        map.insert(i, c);
                    }
                }
            }
        }
        SparseVec {
            entries: map.into_iter().collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn leading(&self) -> Option<&(u32, E)> {
        self.entries.first()
    }

    pub fn get(&self, index: u32) -> Option<&E> {
        self.entries
            .binary_search_by_key(&index, |e| e.0)
            .ok()
            .map(|pos| &self.entries[pos].1)
    }

    pub fn iter(&self) -> impl Iterator<Item = &(u32, E)> {
        self.entries.iter()
    }

    pub fn scale<F: Field<Elem = E>>(&self, field: &F, c: &E) -> Self {
        if field.is_zero(c) {
            return SparseVec::empty();
        }
        SparseVec {
            entries: self
                .entries
                .iter()
                .map(|(i, v)| (*i, field.mul(v, c)))
                .collect(),
        }
    }

    /// `self + c * other`, merging the two sorted entry lists.
    pub fn add_scaled<F: Field<Elem = E>>(&self, field: &F, other: &Self, c: &E) -> Self {
        if field.is_zero(c) {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (0, 0);
        while a < self.entries.len() && b < other.entries.len() {
            let (ia, va) = &self.entries[a];
            let (ib, vb) = &other.entries[b];
            match ia.cmp(ib) {
                std::cmp::Ordering::Less => {
                    out.push((*ia, va.clone()));
                    a += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((*ib, field.mul(vb, c)));
                    b += 1;
                }
                std::cmp::Ordering::Equal => {
                    let v = field.add(va, &field.mul(vb, c));
                    if !field.is_zero(&v) {
                        out.push((*ia, v));
                    }
                    a += 1;
                    b += 1;
                }
            }
        }
        out.extend(self.entries[a..].iter().cloned());
        out.extend(
            other.entries[b..]
                .iter()
                .map(|(i, v)| (*i, field.mul(v, c))),
        );
        SparseVec { entries: out }
    }
}

impl SparseVec<Scalar> {
    /// Reduction mod `p`; `None` when some denominator vanishes mod `p`.
    pub fn reduce_mod(&self, fp: &PrimeField) -> Option<SparseVec<u64>> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for (i, c) in &self.entries {
            let r = fp.reduce_scalar(c)?;
            if r != 0 {
                entries.push((*i, r));
            }
        }
        Some(SparseVec { entries })
    }
}

/// A subspace kept as a reduced row-echelon basis.
///
/// Every row's pivot (its smallest index) has coefficient one, every pivot
/// index occurs in exactly one row, and all other rows are zero there.  Rows
/// are reported in increasing pivot order, which makes the representation of
/// a subspace canonical.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    field: F,
    rows: Vec<SparseVec<F::Elem>>,
    pivots: BTreeMap<u32, usize>,
}

pub type SubspaceBasis = Echelon<Rationals>;

impl<F: Field> Echelon<F> {
    pub fn new(field: F) -> Self {
        Echelon {
            field,
            rows: Vec::new(),
            pivots: BTreeMap::new(),
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn pivot_indices(&self) -> impl Iterator<Item = u32> + '_ {
        self.pivots.keys().copied()
    }

    /// Rows in increasing pivot order.
    pub fn rows(&self) -> impl Iterator<Item = &SparseVec<F::Elem>> {
        self.pivots.values().map(|&slot| &self.rows[slot])
    }

    /// Fully reduce `v` against the basis without inserting it.
    pub fn reduce(&self, v: &SparseVec<F::Elem>) -> SparseVec<F::Elem> {
        let mut v = v.clone();
        loop {
            let hit = v
                .iter()
                .find(|(i, _)| self.pivots.contains_key(i))
                .map(|(i, c)| (*i, c.clone()));
            match hit {
                None => return v,
                Some((i, c)) => {
                    let row = &self.rows[self.pivots[&i]];
                    v = v.add_scaled(&self.field, row, &self.field.neg(&c));
                }
            }
        }
    }

    pub fn contains(&self, v: &SparseVec<F::Elem>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Insert a vector, returning `true` when it was already in the span.
    pub fn insert_reduce(&mut self, v: &SparseVec<F::Elem>) -> bool {
        let mut v = self.reduce(v);
        if v.is_empty() {
            return true;
        }
        let (pivot, lead) = {
            let (i, c) = v.leading().expect("nonzero after reduction");
            (*i, c.clone())
        };
        v = v.scale(&self.field, &self.field.inv(&lead));
        // Keep the basis fully reduced: clear the new pivot from older rows.
        for row in self.rows.iter_mut() {
            if let Some(c) = row.get(pivot).cloned() {
                *row = row.add_scaled(&self.field, &v, &self.field.neg(&c));
            }
        }
        self.rows.push(v);
        self.pivots.insert(pivot, self.rows.len() - 1);
        false
    }

    /// Raw constructor for rows already known to be in reduced echelon form
    /// with pairwise distinct pivots (e.g. orbit sums with disjoint support).
    pub fn from_echelon_rows(field: F, rows: Vec<SparseVec<F::Elem>>) -> Self {
        let mut basis = Echelon::new(field);
        for row in rows {
            let pivot = row.leading().expect("echelon row must be nonzero").0;
            debug_assert!(!basis.pivots.contains_key(&pivot));
            basis.rows.push(row);
            basis.pivots.insert(pivot, basis.rows.len() - 1);
        }
        basis
    }
}

/// Rank of a list of vectors, independent of their order.
pub fn span_dim<F: Field>(field: F, vectors: &[SparseVec<F::Elem>]) -> usize {
    let mut basis = Echelon::new(field);
    for v in vectors {
        basis.insert_reduce(v);
    }
    basis.dim()
}

/// `dim(ambient) - dim(sub)`, after checking `sub` really sits inside
/// `ambient`.
pub fn quotient_dim<F: Field>(ambient: &Echelon<F>, sub: &Echelon<F>) -> Result<usize> {
    for (index, row) in sub.rows().enumerate() {
        if !ambient.contains(row) {
            return Err(Error::NotInSubspace { index });
        }
    }
    Ok(ambient.dim() - sub.dim())
}

/// Kernel of a linear endomorphism given by its action on basis vectors.
///
/// Columns are inserted while tracking the combination of inputs that
/// produced each reduced row; a column that reduces to zero yields a kernel
/// vector expressed in the same basis indexing.
pub fn kernel_of_endomorphism<F, A>(field: F, action: A, dim: u32) -> Echelon<F>
where
    F: Field,
    A: Fn(u32) -> SparseVec<F::Elem>,
{
    let columns: Vec<SparseVec<F::Elem>> = (0..dim).map(action).collect();
    let kernel = nullspace(field.clone(), &columns);
    let mut basis = Echelon::new(field);
    for v in kernel {
        basis.insert_reduce(&v);
    }
    basis
}

/// Nullspace of the matrix whose columns are the given vectors; returned as
/// combination vectors indexed by column position.
pub fn nullspace<F: Field>(field: F, columns: &[SparseVec<F::Elem>]) -> Vec<SparseVec<F::Elem>> {
    // Each echelon row carries the combination of input columns it came from.
    let mut rows: Vec<(SparseVec<F::Elem>, SparseVec<F::Elem>)> = Vec::new();
    let mut pivots: BTreeMap<u32, usize> = BTreeMap::new();
    let mut kernel = Vec::new();
    for (j, col) in columns.iter().enumerate() {
        let mut v = col.clone();
        let mut combo = SparseVec::from_pairs(&field, vec![(j as u32, field.one())]);
        loop {
            let hit = v
                .iter()
                .find(|(i, _)| pivots.contains_key(i))
                .map(|(i, c)| (*i, c.clone()));
            match hit {
                None => break,
                Some((i, c)) => {
                    let (row, row_combo) = &rows[pivots[&i]];
                    let scale = field.neg(&c);
                    v = v.add_scaled(&field, row, &scale);
                    combo = combo.add_scaled(&field, row_combo, &scale);
                }
            }
        }
        if v.is_empty() {
            kernel.push(combo);
        } else {
            let lead = {
                let (i, c) = v.leading().expect("nonzero");
                (*i, c.clone())
            };
            let inv = field.inv(&lead.1);
            v = v.scale(&field, &inv);
            combo = combo.scale(&field, &inv);
            rows.push((v, combo));
            pivots.insert(lead.0, rows.len() - 1);
        }
    }
    kernel
}

// ---------------------------------------------------------------------------
// Primes and multi-modular rank checks.

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut base: u64, mut exp: u64| {
        let mut acc = 1u64;
        base %= n;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            exp >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Random 62-bit prime from the given source.
pub fn random_prime_62<R: Rng>(rng: &mut R) -> u64 {
    loop {
        let candidate = (rng.gen::<u64>() >> 2) | (1 << 61) | 1;
        if is_prime_u64(candidate) {
            return candidate;
        }
    }
}

/// Rank modulo two independent primes; the primes must agree.
pub fn rank_two_primes(
    vectors: &[SparseVec<Scalar>],
    prime_a: u64,
    prime_b: u64,
) -> Result<usize> {
    let rank_of = |p: u64| -> usize {
        let fp = PrimeField::new(p);
        let mut basis = Echelon::new(fp);
        for v in vectors {
            // A vanishing denominator makes the reduction meaningless; the
            // caller picks primes at random so this does not occur in
            // practice, and skipping would only lower the rank.
            let vm = v.reduce_mod(&fp).expect("denominator unit mod p");
            basis.insert_reduce(&vm);
        }
        basis.dim()
    };
    let ra = rank_of(prime_a);
    let rb = rank_of(prime_b);
    if ra != rb {
        return Err(Error::RankDisagreement {
            prime_a,
            rank_a: ra,
            prime_b,
            rank_b: rb,
        });
    }
    Ok(ra)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::{prop_assert, prop_assert_eq, proptest};

    fn unit(i: u32) -> SparseVec<Scalar> {
        SparseVec::from_pairs(&Rationals, vec![(i, sc(1))])
    }

    fn vec_of(pairs: &[(u32, i64)]) -> SparseVec<Scalar> {
        SparseVec::from_pairs(
            &Rationals,
            pairs.iter().map(|&(i, c)| (i, sc(c))).collect(),
        )
    }

    #[test]
    fn insert_into_empty_creates_pivot() {
        let mut basis = Echelon::new(Rationals);
        let absorbed = basis.insert_reduce(&unit(0));
        assert!(!absorbed);
        assert_eq!(basis.dim(), 1);
    }

    #[test]
    fn zero_vector_is_absorbed() {
        let mut basis = Echelon::new(Rationals);
        assert!(basis.insert_reduce(&SparseVec::empty()));
        basis.insert_reduce(&unit(3));
        assert!(basis.insert_reduce(&SparseVec::empty()));
        assert_eq!(basis.dim(), 1);
    }

    #[test]
    fn linear_dependence_detected() {
        let mut basis = Echelon::new(Rationals);
        assert!(!basis.insert_reduce(&vec_of(&[(0, 1), (1, 1)])));
        assert!(!basis.insert_reduce(&vec_of(&[(0, 1)])));
        assert!(basis.insert_reduce(&vec_of(&[(1, 1)])));
        assert_eq!(basis.dim(), 2);
    }

    #[test]
    fn span_dim_examples() {
        assert_eq!(
            span_dim(
                Rationals,
                &[unit(0), unit(1), vec_of(&[(0, 1), (1, 1)])]
            ),
            2
        );
        assert_eq!(span_dim(Rationals, &[]), 0);
        assert_eq!(
            span_dim(Rationals, &[vec_of(&[(0, 2)]), vec_of(&[(0, 3)])]),
            1
        );
    }

    #[test]
    fn quotient_dim_examples() {
        let mut ambient = Echelon::new(Rationals);
        let mut sub = Echelon::new(Rationals);
        for i in 0..5 {
            ambient.insert_reduce(&unit(i));
        }
        for i in 0..3 {
            sub.insert_reduce(&unit(i));
        }
        assert_eq!(quotient_dim(&ambient, &sub).unwrap(), 2);
        assert_eq!(quotient_dim(&ambient, &ambient).unwrap(), 0);
        assert_eq!(quotient_dim(&ambient, &Echelon::new(Rationals)).unwrap(), 5);
        assert!(matches!(
            quotient_dim(&sub, &ambient),
            Err(Error::NotInSubspace { .. })
        ));
    }

    #[test]
    fn kernel_of_identity_minus_identity_is_full() {
        let kernel = kernel_of_endomorphism(Rationals, |_| SparseVec::empty(), 7);
        assert_eq!(kernel.dim(), 7);
    }

    #[test]
    fn nullspace_combinations_are_kernel_vectors() {
        // Columns: c0 = e0, c1 = e0 + e1, c2 = e1 (so c1 - c0 - c2 = 0).
        let cols = vec![unit(0), vec_of(&[(0, 1), (1, 1)]), unit(1)];
        let kernel = nullspace(Rationals, &cols);
        assert_eq!(kernel.len(), 1);
        let combo = &kernel[0];
        // Verify the combination really annihilates the columns.
        let mut acc = SparseVec::empty();
        for (j, c) in combo.iter() {
            acc = acc.add_scaled(&Rationals, &cols[*j as usize], c);
        }
        assert!(acc.is_empty());
    }

    #[test]
    fn reduced_echelon_invariants_hold() {
        let mut basis = Echelon::new(Rationals);
        let vectors = [
            vec_of(&[(2, 3), (5, 1), (9, -2)]),
            vec_of(&[(2, 1), (3, 1)]),
            vec_of(&[(3, 4), (5, 2)]),
            vec_of(&[(2, 2), (3, 2), (9, 1)]),
        ];
        for v in &vectors {
            basis.insert_reduce(v);
        }
        let pivots: Vec<u32> = basis.pivot_indices().collect();
        for row in basis.rows() {
            let (pivot, lead) = row.leading().unwrap();
            assert_eq!(lead, &sc(1));
            // Zero at every other row's pivot.
            for p in &pivots {
                if p != pivot {
                    assert!(row.get(*p).is_none());
                }
            }
        }
    }

    #[test]
    fn miller_rabin_agrees_with_trial_division() {
        let small: Vec<u64> = (2..2000).filter(|&n| is_prime_u64(n)).collect();
        let by_trial: Vec<u64> = (2..2000u64)
            .filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
            .collect();
        assert_eq!(small, by_trial);
    }

    #[test]
    fn random_primes_are_62_bit() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..3 {
            let p = random_prime_62(&mut rng);
            assert!(p >= (1 << 61) && p < (1 << 62));
            assert!(is_prime_u64(p));
        }
    }

    #[test]
    fn modular_rank_matches_rational_rank() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        let vectors: Vec<SparseVec<Scalar>> = (0..20)
            .map(|_| {
                let pairs: Vec<(u32, Scalar)> = (0..6)
                    .map(|_| (rng.gen_range(0..12u32), sc(rng.gen_range(-4..5))))
                    .collect();
                SparseVec::from_pairs(&Rationals, pairs)
            })
            .collect();
        let exact = span_dim(Rationals, &vectors);
        let pa = random_prime_62(&mut rng);
        let pb = random_prime_62(&mut rng);
        assert_eq!(rank_two_primes(&vectors, pa, pb).unwrap(), exact);
    }

    proptest! {
        #[test]
        fn span_dim_invariant_under_permutation_and_scaling(
            seed in 0u64..500,
            swap_a in 0usize..6,
            swap_b in 0usize..6,
            scale in 1i64..20,
        ) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut vectors: Vec<SparseVec<Scalar>> = (0..6)
                .map(|_| {
                    let pairs: Vec<(u32, Scalar)> = (0..4)
                        .map(|_| (rng.gen_range(0..8u32), sc(rng.gen_range(-3..4))))
                        .collect();
                    SparseVec::from_pairs(&Rationals, pairs)
                })
                .collect();
            let before = span_dim(Rationals, &vectors);
            vectors.swap(swap_a, swap_b);
            vectors[swap_a] = vectors[swap_a].scale(&Rationals, &sc(scale));
            prop_assert_eq!(span_dim(Rationals, &vectors), before);
        }

        #[test]
        fn insert_reduce_is_idempotent(seed in 0u64..500) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let v = SparseVec::from_pairs(
                &Rationals,
                (0..5)
                    .map(|_| (rng.gen_range(0..10u32), sc(rng.gen_range(-3..4))))
                    .collect(),
            );
            let mut basis = Echelon::new(Rationals);
            basis.insert_reduce(&v);
            let dim = basis.dim();
            prop_assert!(basis.insert_reduce(&v));
            prop_assert_eq!(basis.dim(), dim);
        }
    }
}
