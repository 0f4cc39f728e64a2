//! The tensor algebra without unit on a based vector space: words, sparse
//! homogeneous tensors, the symplectic pairing and its two-form, slot
//! permutations, contractions and (anti)symmetrization.
//!
//! Slots are numbered from 1 so displayed identities transcribe directly.
//! Words are stored densely as generator indices; tensors sparsely as maps
//! from words to rational coefficients with no zero entries.

use std::collections::BTreeMap;
use std::fmt;

use arrayvec::ArrayVec;
use num::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{sc, Echelon, Rationals, Scalar, SparseVec};

/// Largest tensor degree ever materialized (polygon expansions stay well
/// below this; the heavy computations live in degree at most six).
pub const MAX_DEGREE: usize = 16;

/// A basis word: the sequence of generator indices, length = degree.
pub type Word = ArrayVec<u8, MAX_DEGREE>;

pub fn word(letters: &[u8]) -> Word {
    letters.iter().copied().collect()
}

/// The based coefficient space: either symplectic of genus `g` with basis
/// `x1..xg, y1..yg`, or plain of dimension `n` with basis `e1..en`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Space {
    Symplectic { genus: u16 },
    Plain { dim: u16 },
}

impl Space {
    pub fn symplectic(genus: u16) -> Space {
        assert!(genus >= 1, "genus must be at least 1");
        Space::Symplectic { genus }
    }

    pub fn plain(dim: u16) -> Space {
        assert!(dim >= 2, "plain spaces need dimension at least 2");
        Space::Plain { dim }
    }

    pub fn dim(&self) -> usize {
        match self {
            Space::Symplectic { genus } => 2 * *genus as usize,
            Space::Plain { dim } => *dim as usize,
        }
    }

    pub fn genus(&self) -> Option<usize> {
        match self {
            Space::Symplectic { genus } => Some(*genus as usize),
            Space::Plain { .. } => None,
        }
    }

    pub fn is_symplectic(&self) -> bool {
        matches!(self, Space::Symplectic { .. })
    }

    /// Generator index of `x_i` (1-based `i`).
    pub fn x(&self, i: usize) -> u8 {
        debug_assert!(self.is_symplectic());
        (i - 1) as u8
    }

    /// Generator index of `y_i` (1-based `i`).
    pub fn y(&self, i: usize) -> u8 {
        let g = self.genus().expect("y-generator needs a symplectic space");
        (g + i - 1) as u8
    }

    /// Generator index of `e_i` (1-based `i`).
    pub fn e(&self, i: usize) -> u8 {
        (i - 1) as u8
    }

    pub fn label(&self, idx: u8) -> String {
        match self {
            Space::Plain { .. } => format!("e{}", idx + 1),
            Space::Symplectic { genus } => {
                let g = *genus as usize;
                let i = idx as usize;
                if i < g {
                    format!("x{}", i + 1)
                } else {
                    format!("y{}", i - g + 1)
                }
            }
        }
    }

    /// The skew pairing on generators: `x_i . y_j = delta_ij`,
    /// `y_i . x_j = -delta_ij`, zero otherwise.
    pub fn pairing_int(&self, a: u8, b: u8) -> Result<i64> {
        let g = self.genus().ok_or(Error::NotSymplectic)?;
        let (a, b) = (a as usize, b as usize);
        if a < g && b >= g && b - g == a {
            Ok(1)
        } else if a >= g && b < g && a - g == b {
            Ok(-1)
        } else {
            Ok(0)
        }
    }

    pub fn pairing(&self, a: u8, b: u8) -> Result<Scalar> {
        Ok(sc(self.pairing_int(a, b)?))
    }

    /// Canonical index of a word: base-`dim` positional encoding, so that
    /// numeric order on indices is lexicographic order on words.
    pub fn encode(&self, w: &Word) -> u32 {
        let n = self.dim() as u32;
        w.iter().fold(0u32, |acc, &l| acc * n + l as u32)
    }

    pub fn decode(&self, mut index: u32, degree: usize) -> Word {
        let n = self.dim() as u32;
        let mut letters = vec![0u8; degree];
        for slot in (0..degree).rev() {
            letters[slot] = (index % n) as u8;
            index /= n;
        }
        word(&letters)
    }

    pub fn word_count(&self, degree: usize) -> usize {
        self.dim().pow(degree as u32)
    }
}

/// Homogeneous element of the tensor algebra: a finitely supported map from
/// degree-`d` words to nonzero rationals.  The zero tensor keeps an explicit
/// degree so degree checks stay total.
#[derive(Clone, PartialEq, Eq)]
pub struct Tensor {
    space: Space,
    degree: usize,
    terms: BTreeMap<Word, Scalar>,
}

impl Tensor {
    pub fn zero(space: Space, degree: usize) -> Tensor {
        Tensor {
            space,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(space: Space, letters: &[u8], coeff: Scalar) -> Tensor {
        let mut t = Tensor::zero(space, letters.len());
        t.add_term(word(letters), coeff);
        t
    }

    pub fn generator(space: Space, idx: u8) -> Tensor {
        Tensor::monomial(space, &[idx], sc(1))
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, w: Word, coeff: Scalar) {
        debug_assert_eq!(w.len(), self.degree);
        if coeff.is_zero() {
            return;
        }
        match self.terms.remove(&w) {
            Some(old) => {
                let s = old + coeff;
                if !s.is_zero() {
                    self.terms.insert(w, s);
                }
            }
            None => {
                self.terms.insert(w, coeff);
            }
        }
    }

    pub fn add(&self, other: &Tensor) -> Result<Tensor> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        let mut out = self.clone();
        for (w, c) in other.terms() {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Tensor) -> Result<Tensor> {
        self.add(&other.scale(&sc(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> Tensor {
        if c.is_zero() {
            return Tensor::zero(self.space, self.degree);
        }
        Tensor {
            space: self.space,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(w, v)| (w.clone(), v * c))
                .collect(),
        }
    }

    pub fn neg(&self) -> Tensor {
        self.scale(&sc(-1))
    }

    /// Concatenation product in the tensor algebra.
    pub fn product(&self, other: &Tensor) -> Result<Tensor> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        let mut out = Tensor::zero(self.space, self.degree + other.degree);
        for (w1, c1) in self.terms() {
            for (w2, c2) in other.terms() {
                let mut w = w1.clone();
                w.try_extend_from_slice(w2).expect("degree within bounds");
                out.add_term(w, c1 * c2);
            }
        }
        Ok(out)
    }

    /// Rearrange letters so the letter in slot `i` moves to slot `perm[i]`
    /// (both 1-based); optionally multiply by the sign of the permutation.
    pub fn permute_slots(&self, perm: &[usize], signed: bool) -> Result<Tensor> {
        let d = self.degree;
        if perm.len() != d {
            return Err(Error::SlotOutOfRange {
                slot: perm.len(),
                degree: d,
            });
        }
        let mut seen = vec![false; d];
        for &p in perm {
            if p < 1 || p > d || seen[p - 1] {
                return Err(Error::SlotOutOfRange { slot: p, degree: d });
            }
            seen[p - 1] = true;
        }
        let sign = if signed && permutation_sign(perm) < 0 {
            sc(-1)
        } else {
            sc(1)
        };
        let mut out = Tensor::zero(self.space, d);
        for (w, c) in self.terms() {
            let mut letters = vec![0u8; d];
            for (slot, &l) in w.iter().enumerate() {
                letters[perm[slot] - 1] = l;
            }
            out.add_term(word(&letters), c * &sign);
        }
        Ok(out)
    }

    /// The cyclic shift `u1 (x) ... (x) um  ->  u2 (x) ... (x) um (x) u1`.
    pub fn cyclic_shift(&self) -> Tensor {
        let mut out = Tensor::zero(self.space, self.degree);
        for (w, c) in self.terms() {
            let mut letters = w.clone();
            if letters.len() > 1 {
                letters.rotate_left(1);
            }
            out.add_term(letters, c.clone());
        }
        out
    }

    pub fn is_cyclic_invariant(&self) -> bool {
        *self == self.cyclic_shift()
    }

    /// Move the letter in slot `i` to the front, shifting slots `1..i-1`
    /// right (1-based, `2 <= i <= degree`).
    pub fn front_insert(&self, i: usize) -> Result<Tensor> {
        if i < 2 || i > self.degree {
            return Err(Error::SlotOutOfRange {
                slot: i,
                degree: self.degree,
            });
        }
        let mut out = Tensor::zero(self.space, self.degree);
        for (w, c) in self.terms() {
            let mut letters = w.clone();
            letters[..i].rotate_right(1);
            out.add_term(letters, c.clone());
        }
        Ok(out)
    }

    /// Cycle the first `i` slots left by one, sending slot 1's letter to
    /// slot `i` (1-based).  For `i = degree` this is `cyclic_shift`; it is
    /// the inverse of `front_insert(i)`.
    pub fn cycle_prefix(&self, i: usize) -> Result<Tensor> {
        if i < 2 || i > self.degree {
            return Err(Error::SlotOutOfRange {
                slot: i,
                degree: self.degree,
            });
        }
        let mut out = Tensor::zero(self.space, self.degree);
        for (w, c) in self.terms() {
            let mut letters = w.clone();
            letters[..i].rotate_left(1);
            out.add_term(letters, c.clone());
        }
        Ok(out)
    }

    /// Contract slots `p < q` against the skew pairing, deleting both slots.
    pub fn contract(&self, p: usize, q: usize) -> Result<Tensor> {
        if !self.space.is_symplectic() {
            return Err(Error::NotSymplectic);
        }
        let d = self.degree;
        if p == q || p < 1 || q < 1 || p > d || q > d {
            return Err(Error::SlotOutOfRange {
                slot: p.max(q),
                degree: d,
            });
        }
        let (p, q) = (p.min(q), p.max(q));
        let mut out = Tensor::zero(self.space, d - 2);
        for (w, c) in self.terms() {
            let pairing = self.space.pairing_int(w[p - 1], w[q - 1])?;
            if pairing == 0 {
                continue;
            }
            let mut letters = Word::new();
            for (slot, &l) in w.iter().enumerate() {
                if slot != p - 1 && slot != q - 1 {
                    letters.push(l);
                }
            }
            out.add_term(letters, c * sc(pairing));
        }
        Ok(out)
    }

    /// Place the two letters of `self` at slots `i < j` of a degree-4 word
    /// and the two letters of `other` at the remaining slots in order.
    pub fn otimes_ij(&self, other: &Tensor, i: usize, j: usize) -> Result<Tensor> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        if self.degree != 2 || other.degree != 2 {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        if !(1..=4).contains(&i) || !(1..=4).contains(&j) || i >= j {
            return Err(Error::SlotOutOfRange { slot: j, degree: 4 });
        }
        let rest: Vec<usize> = (1..=4).filter(|s| *s != i && *s != j).collect();
        let mut out = Tensor::zero(self.space, 4);
        for (w1, c1) in self.terms() {
            for (w2, c2) in other.terms() {
                let mut letters = [0u8; 4];
                letters[i - 1] = w1[0];
                letters[j - 1] = w1[1];
                letters[rest[0] - 1] = w2[0];
                letters[rest[1] - 1] = w2[1];
                out.add_term(word(&letters), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn to_sparse(&self) -> SparseVec<Scalar> {
        SparseVec::from_pairs(
            &Rationals,
            self.terms()
                .map(|(w, c)| (self.space.encode(w), c.clone()))
                .collect(),
        )
    }

    pub fn from_sparse(space: Space, degree: usize, v: &SparseVec<Scalar>) -> Tensor {
        let mut t = Tensor::zero(space, degree);
        for (i, c) in v.iter() {
            t.add_term(space.decode(*i, degree), c.clone());
        }
        t
    }
}

impl fmt::Display for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            let label = w
                .iter()
                .map(|&l| self.space.label(l))
                .collect::<Vec<_>>()
                .join("*");
            if k == 0 {
                if c.is_one() {
                    write!(f, "{label}")?;
                } else {
                    write!(f, "({c}){label}")?;
                }
            } else if c.is_one() {
                write!(f, " + {label}")?;
            } else {
                write!(f, " + ({c}){label}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Sign of a permutation given in image form.
pub fn permutation_sign(perm: &[usize]) -> i8 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1i8;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut at = start;
        while !seen[at] {
            seen[at] = true;
            at = perm[at] - 1;
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// All permutations of `0..n` with their signs, in a deterministic order.
pub fn permutations_with_sign(n: usize) -> Vec<(Vec<u8>, i8)> {
    let mut out = Vec::new();
    let mut items: Vec<u8> = (0..n as u8).collect();
    heap_permute(&mut items, 1, &mut out);
    out
}

fn heap_permute(items: &mut Vec<u8>, sign: i8, out: &mut Vec<(Vec<u8>, i8)>) {
    // Iterative Heap's algorithm; each swap flips the sign.
    let n = items.len();
    let mut c = vec![0usize; n];
    let mut sign = sign;
    out.push((items.clone(), sign));
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                items.swap(0, i);
            } else {
                items.swap(c[i], i);
            }
            sign = -sign;
            out.push((items.clone(), sign));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Signed sum over all arrangements of the given generators.
pub fn antisymmetrize(space: Space, letters: &[u8]) -> Tensor {
    let mut out = Tensor::zero(space, letters.len());
    for (perm, sign) in permutations_with_sign(letters.len()) {
        let arranged: Vec<u8> = perm.iter().map(|&p| letters[p as usize]).collect();
        out.add_term(word(&arranged), sc(sign as i64));
    }
    out
}

/// Unsigned sum over the distinct arrangements of the given generators
/// (each distinct word once, so repeated letters do not inflate
/// coefficients).
pub fn symmetrize_embed(space: Space, letters: &[u8]) -> Tensor {
    let mut seen = std::collections::BTreeSet::new();
    for (perm, _) in permutations_with_sign(letters.len()) {
        let arranged: Vec<u8> = perm.iter().map(|&p| letters[p as usize]).collect();
        seen.insert(arranged);
    }
    let mut out = Tensor::zero(space, letters.len());
    for arranged in seen {
        out.add_term(word(&arranged), sc(1));
    }
    out
}

/// Shorthand for `x_a /\ x_b` style wedges of two generators.
pub fn wedge2(space: Space, a: u8, b: u8) -> Tensor {
    antisymmetrize(space, &[a, b])
}

/// The symplectic two-form `sum_i x_i (x) y_i - y_i (x) x_i`.
pub fn omega0(space: Space) -> Result<Tensor> {
    let g = space.genus().ok_or(Error::NotSymplectic)?;
    let mut out = Tensor::zero(space, 2);
    for i in 1..=g {
        out.add_term(word(&[space.x(i), space.y(i)]), sc(1));
        out.add_term(word(&[space.y(i), space.x(i)]), sc(-1));
    }
    Ok(out)
}

/// Number of cyclic-shift-fixed basis vectors of the degree-`m` tensor
/// space over an `n`-dimensional space: `(1/m) sum_{d|m} phi(d) n^(m/d)`.
pub fn necklace_count(n: usize, m: usize) -> usize {
    let mut total: u128 = 0;
    for d in 1..=m {
        if m % d == 0 {
            total += euler_phi(d) as u128 * (n as u128).pow((m / d) as u32);
        }
    }
    (total / m as u128) as usize
}

pub fn euler_phi(n: usize) -> usize {
    let mut result = n;
    let mut n = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Echelon basis of the subspace of degree-`m` tensors fixed by the cyclic
/// shift: one orbit sum per necklace, with disjoint supports, so the rows
/// are already in reduced echelon form.
pub fn invariant_subspace(space: Space, m: usize) -> Echelon<Rationals> {
    let n = space.dim();
    let mut rows = Vec::new();
    for index in 0..space.word_count(m) as u32 {
        let w = space.decode(index, m);
        // Keep only canonical representatives: the minimal rotation.
        let mut rotations = std::collections::BTreeSet::new();
        let mut rot = w.clone();
        for _ in 0..m {
            rotations.insert(space.encode(&rot));
            rot.rotate_left(1);
        }
        if *rotations.iter().next().unwrap() != index {
            continue;
        }
        let entries: Vec<(u32, Scalar)> =
            rotations.into_iter().map(|i| (i, sc(1))).collect();
        rows.push(SparseVec::from_pairs(&Rationals, entries));
    }
    debug_assert_eq!(rows.len(), necklace_count(n, m));
    Echelon::from_echelon_rows(Rationals, rows)
}
