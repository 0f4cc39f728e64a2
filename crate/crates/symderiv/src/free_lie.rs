//! The free Lie algebra inside the tensor algebra: Lyndon-word bases, the
//! kernel description of the symplectic Lie-derivation algebra, and trace
//! maps on derivations of the free Lie algebra.
//!
//! Lie elements are represented as tensors (via `[a,b] = ab - ba`) so that
//! the Lie subalgebra sits literally inside the associative one.  Words are
//! ordered lexicographically on generator index, `x1 < ... < xg < y1 < ...`.

use crate::deriv::Derivation;
use crate::error::{Error, Result};
use crate::linalg::{nullspace, sc, Echelon, Rationals};
use crate::tensor::{permutations_with_sign, word, Space, Tensor, Word};

/// All Lyndon words of length exactly `d` over `0..n`, in lexicographic
/// order (Duval's generation).
pub fn lyndon_words(n: usize, d: usize) -> Vec<Word> {
    assert!(d >= 1 && d <= 16);
    let mut out = Vec::new();
    let mut w = vec![0u8];
    loop {
        if w.len() == d {
            out.push(word(&w));
        }
        let len = w.len();
        while w.len() < d {
            let c = w[w.len() - len];
            w.push(c);
        }
        while let Some(&last) = w.last() {
            if last as usize == n - 1 {
                w.pop();
            } else {
                break;
            }
        }
        match w.last_mut() {
            None => break,
            Some(last) => *last += 1,
        }
    }
    out
}

fn is_lyndon(w: &[u8]) -> bool {
    let mut rot = w.to_vec();
    for _ in 1..w.len() {
        rot.rotate_left(1);
        if rot.as_slice() <= w {
            return false;
        }
    }
    true
}

/// The bracket monomial of a Lyndon word via its standard factorization
/// `w = uv`, `v` the longest proper Lyndon suffix: `b(w) = [b(u), b(v)]`.
pub fn lyndon_bracket_tensor(space: Space, w: &[u8]) -> Tensor {
    if w.len() == 1 {
        return Tensor::generator(space, w[0]);
    }
    debug_assert!(is_lyndon(w));
    let mut split = None;
    for start in 1..w.len() {
        if is_lyndon(&w[start..]) {
            split = Some(start);
            break;
        }
    }
    let split = split.expect("a Lyndon word has a Lyndon proper suffix");
    let left = lyndon_bracket_tensor(space, &w[..split]);
    let right = lyndon_bracket_tensor(space, &w[split..]);
    lie_bracket_tensor(&left, &right).expect("degrees add")
}

/// `t (x) u - u (x) t` in the tensor algebra.
pub fn lie_bracket_tensor(t: &Tensor, u: &Tensor) -> Result<Tensor> {
    t.product(u)?.sub(&u.product(t)?)
}

/// Basis of the degree-`d` part of the free Lie algebra, realized as
/// tensors; one bracket monomial per Lyndon word.
pub fn lyndon_basis(space: Space, d: usize) -> Vec<Tensor> {
    lyndon_words(space.dim(), d)
        .iter()
        .map(|w| lyndon_bracket_tensor(space, w))
        .collect()
}

/// Dimension of the degree-`d` part of the free Lie algebra on `n`
/// generators: `(1/d) sum_{e|d} mu(e) n^(d/e)`.
pub fn witt_number(n: usize, d: usize) -> usize {
    let mut total: i128 = 0;
    for e in 1..=d {
        if d % e == 0 {
            total += moebius(e) as i128 * (n as i128).pow((d / e) as u32);
        }
    }
    (total / d as i128) as usize
}

fn moebius(n: usize) -> i32 {
    let mut n = n;
    let mut count = 0;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            count += 1;
        }
        p += 1;
    }
    if n > 1 {
        count += 1;
    }
    if count % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Echelon span of the Lie elements of degree `d`; membership in this span
/// is the Lie-element test.
pub fn lie_subspace(space: Space, d: usize) -> Echelon<Rationals> {
    let mut basis = Echelon::new(Rationals);
    for t in lyndon_basis(space, d) {
        basis.insert_reduce(&t.to_sparse());
    }
    basis
}

/// Basis of the degree-`k` symplectic Lie-derivation algebra: the kernel of
/// the bracket pairing `H (x) L(k+1) -> L(k+2)`, pulled back to derivations
/// whose generator images are Lie elements and which kill the two-form.
pub fn basis_l(g: u16, k: usize) -> Vec<Derivation> {
    let space = Space::symplectic(g);
    let lie = lyndon_basis(space, k + 1);
    // Column (i, l): the tensor h_i (x) l - l (x) h_i of degree k+2.
    let mut columns = Vec::with_capacity(space.dim() * lie.len());
    for i in 0..space.dim() as u8 {
        let h = Tensor::generator(space, i);
        for l in &lie {
            let col = lie_bracket_tensor(&h, l).expect("same space");
            columns.push(col.to_sparse());
        }
    }
    let kernel = nullspace(Rationals, &columns);
    kernel
        .iter()
        .map(|combo| {
            let mut dual = Tensor::zero(space, k + 2);
            for (col, c) in combo.iter() {
                let i = (*col as usize) / lie.len();
                let l = &lie[(*col as usize) % lie.len()];
                let h = Tensor::generator(space, i as u8);
                dual = dual
                    .add(&h.product(l).expect("same space").scale(c))
                    .expect("degrees match");
            }
            Derivation::from_dual_tensor(&dual).expect("kernel vectors are invariant")
        })
        .collect()
}

/// Basis of the degree-`k` derivations of the free Lie algebra (no
/// symplectic constraint): each generator mapped to each Lyndon bracket
/// monomial of degree `k+1`.
pub fn der_lie_basis(space: Space, k: usize) -> Vec<Derivation> {
    let lie = lyndon_basis(space, k + 1);
    let mut out = Vec::new();
    for i in 0..space.dim() as u8 {
        for l in &lie {
            out.push(Derivation::single(space, i, l.clone()).expect("image degree k+1"));
        }
    }
    out
}

/// Trace map on degree-`k` derivations of the free Lie algebra: contract
/// the dual generator against the first tensor slot, then average over all
/// slot permutations to land in the symmetric power.
///
/// With this normalization the degree-2 trace satisfies
/// `c13 = -2 * trace_2` on derivations with Lie-element images.
pub fn trace_k(d: &Derivation) -> Result<Tensor> {
    let space = d.space();
    let k = d.degree();
    if k < 1 {
        return Err(Error::BadParameter("trace needs positive degree".into()));
    }
    let mut contracted = Tensor::zero(space, k);
    for (i, image) in d.images().iter().enumerate() {
        for (w, c) in image.terms() {
            if w[0] as usize == i {
                contracted.add_term(word(&w[1..]), c.clone());
            }
        }
    }
    Ok(symmetrize_average(&contracted))
}

fn symmetrize_average(t: &Tensor) -> Tensor {
    let d = t.degree();
    let perms = permutations_with_sign(d);
    let factorial = sc(perms.len() as i64);
    let mut out = Tensor::zero(t.space(), d);
    for (w, c) in t.terms() {
        let share = c / &factorial;
        for (perm, _) in &perms {
            let letters: Vec<u8> = perm.iter().map(|&p| w[p as usize]).collect();
            out.add_term(word(&letters), share.clone());
        }
    }
    out
}

/// Rank of the trace map restricted to a family of derivations.
pub fn trace_image_dim(derivations: &[Derivation]) -> Result<usize> {
    let mut basis = Echelon::new(Rationals);
    for d in derivations {
        basis.insert_reduce(&trace_k(d)?.to_sparse());
    }
    Ok(basis.dim())
}

/// Is the tensor a rational combination of bracket monomials of its degree?
pub fn is_lie_element(t: &Tensor) -> bool {
    if t.is_zero() {
        return true;
    }
    lie_subspace(t.space(), t.degree()).contains(&t.to_sparse())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deriv::basis_a;
    use crate::linalg::{span_dim, Scalar, SparseVec};
    use rand::{Rng, SeedableRng};

    fn sympl(g: u16) -> Space {
        Space::symplectic(g)
    }

    #[test]
    fn lyndon_words_are_lyndon_and_counted_by_witt() {
        for n in 2..=4usize {
            for d in 1..=5usize {
                let words = lyndon_words(n, d);
                assert!(words.iter().all(|w| is_lyndon(w)));
                assert_eq!(words.len(), witt_number(n, d), "n={n} d={d}");
            }
        }
    }

    #[test]
    fn witt_dimension_table() {
        assert_eq!(witt_number(4, 2), 6);
        assert_eq!(witt_number(4, 3), 20);
        assert_eq!(witt_number(6, 4), 315);
        assert_eq!(witt_number(8, 5), 6552);
    }

    #[test]
    fn lyndon_basis_spans_with_witt_dimension() {
        for (n, d) in [(2usize, 3usize), (4, 2), (4, 3), (4, 4)] {
            let space = sympl((n / 2) as u16);
            let vectors: Vec<SparseVec<Scalar>> = lyndon_basis(space, d)
                .iter()
                .map(Tensor::to_sparse)
                .collect();
            assert_eq!(span_dim(Rationals, &vectors), witt_number(n, d));
        }
    }

    #[test]
    fn degree_two_lie_part_is_the_exterior_square() {
        // Over a 4-dimensional space the degree-2 part has dimension 6.
        assert_eq!(lyndon_basis(sympl(2), 2).len(), 6);
    }

    #[test]
    fn bracket_tensor_expansion_oracle() {
        // [[x1,x2],x1] expanded by hand.
        let h = sympl(2);
        let x1 = Tensor::generator(h, h.x(1));
        let x2 = Tensor::generator(h, h.x(2));
        let inner = lie_bracket_tensor(&x1, &x2).unwrap();
        let nested = lie_bracket_tensor(&inner, &x1).unwrap();
        let mut expected = Tensor::zero(h, 3);
        expected.add_term(word(&[h.x(1), h.x(2), h.x(1)]), sc(2));
        expected.add_term(word(&[h.x(2), h.x(1), h.x(1)]), sc(-1));
        expected.add_term(word(&[h.x(1), h.x(1), h.x(2)]), sc(-1));
        assert_eq!(nested, expected);
    }

    #[test]
    fn jacobi_sum_of_generators_vanishes() {
        let h = sympl(2);
        let a = Tensor::generator(h, h.x(1));
        let b = Tensor::generator(h, h.x(2));
        let c = Tensor::generator(h, h.y(1));
        let jac = lie_bracket_tensor(&lie_bracket_tensor(&a, &b).unwrap(), &c)
            .unwrap()
            .add(&lie_bracket_tensor(&lie_bracket_tensor(&b, &c).unwrap(), &a).unwrap())
            .unwrap()
            .add(&lie_bracket_tensor(&lie_bracket_tensor(&c, &a).unwrap(), &b).unwrap())
            .unwrap();
        assert!(jac.is_zero());
    }

    #[test]
    fn g1_wedge_is_the_two_form() {
        let h = sympl(1);
        let b = lie_bracket_tensor(
            &Tensor::generator(h, h.x(1)),
            &Tensor::generator(h, h.y(1)),
        )
        .unwrap();
        assert_eq!(b, crate::tensor::omega0(h).unwrap());
    }

    #[test]
    fn lie_element_test_accepts_commutators_rejects_squares() {
        let h = sympl(2);
        let x1 = Tensor::generator(h, h.x(1));
        let y2 = Tensor::generator(h, h.y(2));
        assert!(is_lie_element(&lie_bracket_tensor(&x1, &y2).unwrap()));
        assert!(!is_lie_element(&Tensor::monomial(
            h,
            &[h.x(1), h.x(1)],
            sc(1)
        )));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let l3 = lyndon_basis(h, 3);
            let pick = &l3[rng.gen_range(0..l3.len())];
            let gen = Tensor::generator(h, rng.gen_range(0..4u8));
            assert!(is_lie_element(&lie_bracket_tensor(pick, &gen).unwrap()));
        }
    }

    #[test]
    fn basis_l_dimensions() {
        // dim = n * witt(k+1) - witt(k+2) by surjectivity of the bracket.
        assert_eq!(basis_l(2, 1).len(), 4);
        assert_eq!(basis_l(2, 2).len(), 4 * 20 - 60);
        assert_eq!(basis_l(3, 2).len(), 105);
        for (g, k) in [(1u16, 1usize), (1, 2), (2, 1), (2, 2), (2, 3)] {
            let n = 2 * g as usize;
            assert_eq!(
                basis_l(g, k).len(),
                n * witt_number(n, k + 1) - witt_number(n, k + 2),
                "g={g} k={k}"
            );
        }
    }

    #[test]
    fn basis_l_lands_in_the_symplectic_algebra_with_lie_images() {
        let basis = basis_l(2, 1);
        let mut span = Echelon::new(Rationals);
        for d in basis_a(2, 1) {
            span.insert_reduce(&d.dual_tensor().unwrap().to_sparse());
        }
        for d in &basis {
            assert!(d.annihilates_omega0().unwrap());
            for img in d.images() {
                assert!(is_lie_element(img));
            }
            assert!(span.contains(&d.dual_tensor().unwrap().to_sparse()));
        }
    }

    #[test]
    fn trace2_matches_minus_half_c13_on_lie_derivations() {
        for n in [2u16, 3] {
            let space = Space::plain(n);
            for d in der_lie_basis(space, 2) {
                let c13 = d.c13().unwrap();
                let tr = trace_k(&d).unwrap();
                assert_eq!(c13, tr.scale(&sc(-2)), "n={n}");
            }
        }
    }

    #[test]
    fn traces_vanish_on_brackets() {
        // Degree (1,1) and (1,2) brackets of Lie derivations, n = 4.
        let space = Space::plain(4);
        let deg1 = der_lie_basis(space, 1);
        for (i, d) in deg1.iter().enumerate() {
            for e in deg1.iter().skip(i + 1) {
                let tr = trace_k(&d.bracket(e).unwrap()).unwrap();
                assert!(tr.is_zero());
            }
        }
        let deg2 = der_lie_basis(space, 2);
        for d in deg1.iter().step_by(5) {
            for e in deg2.iter().step_by(7) {
                let tr = trace_k(&d.bracket(e).unwrap()).unwrap();
                assert!(tr.is_zero());
            }
        }
    }

    #[test]
    fn trace3_image_on_symplectic_lie_derivations_g2() {
        // The cubic trace restricted to the degree-3 part has the full
        // symmetric-cube dimension, here 20.
        let basis = basis_l(2, 3);
        assert_eq!(basis.len(), 36);
        assert_eq!(trace_image_dim(&basis).unwrap(), 20);
    }
}
