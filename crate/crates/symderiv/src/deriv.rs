//! Derivations of the tensor algebra.
//!
//! A degree-`k` derivation is stored by its generator images, each a
//! homogeneous tensor of degree `k+1`, and acts on all of the tensor algebra
//! by the Leibniz rule.  On symplectic spaces the correspondence
//! `D <-> D* = sum_i x_i (x) D(y_i) - y_i (x) D(x_i)` identifies the
//! derivations killing the two-form with the cyclic-shift invariants of the
//! word space, and that identification is what the bases below are built
//! from.  On plain spaces there is no pairing; the dual generator is kept as
//! an explicit functional instead.

use num::Zero;

use crate::error::{Error, Result};
use crate::linalg::{sc, Scalar};
use crate::tensor::{invariant_subspace, omega0, word, Space, Tensor, Word};

/// Degree-`k` derivation, determined by the images of the generators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Derivation {
    space: Space,
    degree: usize,
    images: Vec<Tensor>,
}

impl Derivation {
    pub fn zero(space: Space, degree: usize) -> Derivation {
        let images = (0..space.dim())
            .map(|_| Tensor::zero(space, degree + 1))
            .collect();
        Derivation {
            space,
            degree,
            images,
        }
    }

    pub fn from_images(space: Space, degree: usize, images: Vec<Tensor>) -> Result<Derivation> {
        if images.len() != space.dim() {
            return Err(Error::BadParameter(format!(
                "expected {} generator images, got {}",
                space.dim(),
                images.len()
            )));
        }
        for img in &images {
            if img.space() != space {
                return Err(Error::SpaceMismatch);
            }
            if img.degree() != degree + 1 {
                return Err(Error::DegreeMismatch(img.degree(), degree + 1));
            }
        }
        Ok(Derivation {
            space,
            degree,
            images,
        })
    }

    /// The derivation sending one generator to one tensor and the rest to
    /// zero.
    pub fn single(space: Space, generator: u8, image: Tensor) -> Result<Derivation> {
        if image.degree() == 0 {
            return Err(Error::BadParameter("image must have degree >= 1".into()));
        }
        let degree = image.degree() - 1;
        let images = (0..space.dim())
            .map(|i| {
                if i == generator as usize {
                    image.clone()
                } else {
                    Tensor::zero(space, image.degree())
                }
            })
            .collect();
        Derivation::from_images(space, degree, images)
    }

    pub fn space(&self) -> Space {
        self.space
    }

    /// Derivation degree `k`; generator images live in degree `k+1`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn image(&self, generator: u8) -> &Tensor {
        &self.images[generator as usize]
    }

    pub fn images(&self) -> &[Tensor] {
        &self.images
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(Tensor::is_zero)
    }

    pub fn add(&self, other: &Derivation) -> Result<Derivation> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Ok(Derivation {
            space: self.space,
            degree: self.degree,
            images,
        })
    }

    pub fn sub(&self, other: &Derivation) -> Result<Derivation> {
        self.add(&other.scale(&sc(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> Derivation {
        Derivation {
            space: self.space,
            degree: self.degree,
            images: self.images.iter().map(|t| t.scale(c)).collect(),
        }
    }

    /// Extend to the whole tensor algebra by the Leibniz rule.
    pub fn apply(&self, t: &Tensor) -> Result<Tensor> {
        if t.space() != self.space {
            return Err(Error::SpaceMismatch);
        }
        let mut out = Tensor::zero(self.space, t.degree() + self.degree);
        for (w, c) in t.terms() {
            for slot in 0..w.len() {
                let image = &self.images[w[slot] as usize];
                for (iw, ic) in image.terms() {
                    let mut letters = Word::new();
                    letters.extend(w[..slot].iter().copied());
                    letters.extend(iw.iter().copied());
                    letters.extend(w[slot + 1..].iter().copied());
                    out.add_term(letters, c * ic);
                }
            }
        }
        Ok(out)
    }

    /// Lie bracket by composition, generator by generator.
    pub fn bracket(&self, other: &Derivation) -> Result<Derivation> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        let images = (0..self.space.dim())
            .map(|i| {
                let de = self.apply(&other.images[i])?;
                let ed = other.apply(&self.images[i])?;
                de.sub(&ed)
            })
            .collect::<Result<_>>()?;
        Ok(Derivation {
            space: self.space,
            degree: self.degree + other.degree,
            images,
        })
    }

    /// Does the derivation kill the symplectic two-form?
    pub fn annihilates_omega0(&self) -> Result<bool> {
        let w = omega0(self.space)?;
        Ok(self.apply(&w)?.is_zero())
    }

    /// The dual tensor `sum_i x_i (x) D(y_i) - y_i (x) D(x_i)`.
    pub fn dual_tensor(&self) -> Result<Tensor> {
        let g = self.space.genus().ok_or(Error::NotSymplectic)?;
        let mut out = Tensor::zero(self.space, self.degree + 2);
        for i in 1..=g {
            for (w, c) in self.images[self.space.y(i) as usize].terms() {
                let mut letters = word(&[self.space.x(i)]);
                letters.extend(w.iter().copied());
                out.add_term(letters, c.clone());
            }
            for (w, c) in self.images[self.space.x(i) as usize].terms() {
                let mut letters = word(&[self.space.y(i)]);
                letters.extend(w.iter().copied());
                out.add_term(letters, -c.clone());
            }
        }
        Ok(out)
    }

    /// Inverse of `dual_tensor` on cyclic invariants: the generator image is
    /// `D(u) = -sum (u . t_1) (remaining slots)` over the terms of `t`.
    pub fn from_dual_tensor(t: &Tensor) -> Result<Derivation> {
        if !t.space().is_symplectic() {
            return Err(Error::NotSymplectic);
        }
        if t.degree() < 2 {
            return Err(Error::DegreeMismatch(t.degree(), 2));
        }
        if !t.is_cyclic_invariant() {
            return Err(Error::NotCyclicInvariant);
        }
        Ok(Self::from_dual_tensor_unchecked(t))
    }

    /// Same contraction without the invariance check; the result kills the
    /// two-form exactly when `t` was invariant.
    pub fn from_dual_tensor_unchecked(t: &Tensor) -> Derivation {
        let space = t.space();
        let degree = t.degree() - 2;
        let mut images: Vec<Tensor> = (0..space.dim())
            .map(|_| Tensor::zero(space, degree + 1))
            .collect();
        for (w, c) in t.terms() {
            for u in 0..space.dim() as u8 {
                let pairing = space.pairing_int(u, w[0]).expect("symplectic");
                if pairing == 0 {
                    continue;
                }
                let rest = word(&w[1..]);
                images[u as usize].add_term(rest, c * sc(-pairing));
            }
        }
        Derivation {
            space,
            degree,
            images,
        }
    }

    /// Contraction of the dual generator against the second tensor slot:
    /// `f (x) u1 (x) u2 (x) u3 -> f(u2) u1 (x) u3`, summed over the
    /// functional decomposition of a degree-2 derivation.  Works over any
    /// space since it only needs the dual basis.
    pub fn c13(&self) -> Result<Tensor> {
        if self.degree != 2 {
            return Err(Error::DegreeMismatch(self.degree, 2));
        }
        let mut out = Tensor::zero(self.space, 2);
        for (i, image) in self.images.iter().enumerate() {
            for (w, c) in image.terms() {
                if w[1] as usize == i {
                    out.add_term(word(&[w[0], w[2]]), c.clone());
                }
            }
        }
        Ok(out)
    }
}

/// An element of the dual space of a plain space, one coefficient per
/// generator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DualForm {
    space: Space,
    coeffs: Vec<Scalar>,
}

impl DualForm {
    pub fn new(space: Space, coeffs: Vec<Scalar>) -> Result<DualForm> {
        if space.is_symplectic() {
            return Err(Error::Unsupported(
                "dual forms are kept explicit only on plain spaces".into(),
            ));
        }
        if coeffs.len() != space.dim() {
            return Err(Error::BadParameter(format!(
                "expected {} coefficients, got {}",
                space.dim(),
                coeffs.len()
            )));
        }
        Ok(DualForm { space, coeffs })
    }

    /// The basis functional dual to `e_i` (1-based).
    pub fn dual_basis(space: Space, i: usize) -> Result<DualForm> {
        let mut coeffs = vec![Scalar::zero(); space.dim()];
        coeffs[i - 1] = sc(1);
        DualForm::new(space, coeffs)
    }

    pub fn eval(&self, generator: u8) -> Scalar {
        self.coeffs[generator as usize].clone()
    }

    /// The derivation `f (x) t : u -> f(u) t`.
    pub fn tensor_with(&self, t: &Tensor) -> Result<Derivation> {
        if t.space() != self.space {
            return Err(Error::SpaceMismatch);
        }
        if t.degree() == 0 {
            return Err(Error::BadParameter("image must have degree >= 1".into()));
        }
        let images = (0..self.space.dim())
            .map(|i| t.scale(&self.coeffs[i]))
            .collect();
        Derivation::from_images(self.space, t.degree() - 1, images)
    }
}

/// Basis of the degree-`k` part of the symplectic derivation algebra: one
/// derivation per cyclic-invariant orbit sum of degree `k+2`.
pub fn basis_a(g: u16, k: usize) -> Vec<Derivation> {
    let space = Space::symplectic(g);
    invariant_subspace(space, k + 2)
        .rows()
        .map(|row| {
            let t = Tensor::from_sparse(space, k + 2, row);
            Derivation::from_dual_tensor_unchecked(&t)
        })
        .collect()
}

/// Basis of the degree-`k` derivations of the free associative algebra on a
/// plain space: all `f (x) word` with `f` a dual basis vector.
pub fn basis_der_plain(n: u16, k: usize) -> Vec<Derivation> {
    let space = Space::plain(n);
    let mut out = Vec::new();
    for i in 1..=space.dim() {
        let f = DualForm::dual_basis(space, i).expect("plain space");
        for index in 0..space.word_count(k + 1) as u32 {
            let w = space.decode(index, k + 1);
            let t = Tensor::monomial(space, &w, sc(1));
            out.push(f.tensor_with(&t).expect("basis image"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ratio;
    use crate::tensor::{necklace_count, symmetrize_embed};
    use rand::{Rng, SeedableRng};

    fn sympl(g: u16) -> Space {
        Space::symplectic(g)
    }

    #[test]
    fn leibniz_on_a_simple_word() {
        let h = sympl(1);
        let d = Derivation::single(
            h,
            h.x(1),
            Tensor::monomial(h, &[h.x(1), h.x(1)], sc(1)),
        )
        .unwrap();
        let t = Tensor::monomial(h, &[h.x(1), h.y(1)], sc(1));
        let applied = d.apply(&t).unwrap();
        assert_eq!(
            applied,
            Tensor::monomial(h, &[h.x(1), h.x(1), h.y(1)], sc(1))
        );
    }

    #[test]
    fn dual_of_single_image_derivation() {
        let h = sympl(1);
        let d = Derivation::single(h, h.y(1), Tensor::generator(h, h.x(1))).unwrap();
        assert_eq!(
            d.dual_tensor().unwrap(),
            Tensor::monomial(h, &[h.x(1), h.x(1)], sc(1))
        );
    }

    #[test]
    fn from_dual_of_x1x1_sends_y1_to_x1() {
        let h = sympl(2);
        let t = Tensor::monomial(h, &[h.x(1), h.x(1)], sc(1));
        let d = Derivation::from_dual_tensor(&t).unwrap();
        assert_eq!(d.image(h.y(1)), &Tensor::generator(h, h.x(1)));
        for gen in 0..h.dim() as u8 {
            if gen != h.y(1) {
                assert!(d.image(gen).is_zero());
            }
        }
        assert!(d.annihilates_omega0().unwrap());
    }

    #[test]
    fn from_dual_rejects_non_invariant_input() {
        let h = sympl(1);
        let t = Tensor::monomial(h, &[h.x(1), h.y(1)], sc(1));
        assert!(matches!(
            Derivation::from_dual_tensor(&t),
            Err(Error::NotCyclicInvariant)
        ));
    }

    #[test]
    fn roundtrip_on_invariant_basis_g2_degree4() {
        // Exhaustive over all 70 orbit sums of degree 4.
        let h = sympl(2);
        let basis = invariant_subspace(h, 4);
        assert_eq!(basis.dim(), 70);
        for row in basis.rows() {
            let t = Tensor::from_sparse(h, 4, row);
            let d = Derivation::from_dual_tensor(&t).unwrap();
            assert_eq!(d.dual_tensor().unwrap(), t);
            assert!(d.annihilates_omega0().unwrap());
        }
    }

    #[test]
    fn dual_is_invariant_iff_omega0_killed() {
        let h = sympl(2);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
        for trial in 0..100 {
            let d = if trial % 2 == 0 {
                // Random images: essentially never kills the two-form.
                let images = (0..h.dim())
                    .map(|_| {
                        let mut t = Tensor::zero(h, 2);
                        for _ in 0..3 {
                            let w = [rng.gen_range(0..4u8), rng.gen_range(0..4u8)];
                            t.add_term(word(&w), ratio(rng.gen_range(-6..7), 2));
                        }
                        t
                    })
                    .collect();
                Derivation::from_images(h, 1, images).unwrap()
            } else {
                // Random invariant combination: always kills it.
                let basis = basis_a(2, 1);
                let mut acc = Derivation::zero(h, 1);
                for d in basis {
                    acc = acc.add(&d.scale(&sc(rng.gen_range(-3..4)))).unwrap();
                }
                acc
            };
            assert_eq!(
                d.annihilates_omega0().unwrap(),
                d.dual_tensor().unwrap().is_cyclic_invariant()
            );
        }
    }

    #[test]
    fn bracket_is_alternating_and_adds_degrees() {
        let basis = basis_a(2, 1);
        let d = &basis[3];
        assert!(d.bracket(d).unwrap().is_zero());
        let e = &basis[10];
        let b = d.bracket(e).unwrap();
        assert_eq!(b.degree(), 2);
        assert_eq!(b, e.bracket(d).unwrap().scale(&sc(-1)));
    }

    #[test]
    fn bracket_of_symplectic_derivations_is_symplectic() {
        let basis = basis_a(2, 1);
        for (i, d) in basis.iter().enumerate().step_by(7) {
            for e in basis.iter().skip(i + 1).step_by(9) {
                let b = d.bracket(e).unwrap();
                assert!(b.annihilates_omega0().unwrap());
                assert!(b.dual_tensor().unwrap().is_cyclic_invariant());
            }
        }
    }

    #[test]
    fn jacobi_identity_on_random_triples() {
        let basis = basis_a(2, 1);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let d = &basis[rng.gen_range(0..basis.len())];
            let e = &basis[rng.gen_range(0..basis.len())];
            let f = &basis[rng.gen_range(0..basis.len())];
            let lhs = d
                .bracket(e)
                .unwrap()
                .bracket(f)
                .unwrap()
                .add(&e.bracket(f).unwrap().bracket(d).unwrap())
                .unwrap()
                .add(&f.bracket(d).unwrap().bracket(e).unwrap())
                .unwrap();
            assert!(lhs.is_zero());
        }
    }

    #[test]
    fn basis_a_sizes_match_necklace_counts() {
        assert_eq!(basis_a(2, 1).len(), 24);
        assert_eq!(basis_a(2, 2).len(), 70);
        assert_eq!(basis_a(1, 1).len(), 4);
        assert_eq!(basis_a(2, 1).len(), necklace_count(4, 3));
    }

    // Oracle: the bracket of two degree-1 derivations written out on their
    // dual tensors, four placements with pairing coefficients per pair of
    // words.
    fn bracket_dual_formula(xi: &Tensor, eta: &Tensor) -> Tensor {
        let space = xi.space();
        let mut out = Tensor::zero(space, 4);
        for (u, cu) in xi.terms() {
            for (v, cv) in eta.terms() {
                let c = cu * cv;
                let p = |a: u8, b: u8| space.pairing_int(a, b).unwrap();
                let mut add = |coeff: i64, letters: [u8; 4]| {
                    if coeff != 0 {
                        out.add_term(word(&letters), &c * sc(coeff));
                    }
                };
                add(p(u[0], v[1]), [v[0], u[1], u[2], v[2]]);
                add(p(u[0], v[2]), [v[0], v[1], u[1], u[2]]);
                add(-p(v[0], u[1]), [u[0], v[1], v[2], u[2]]);
                add(-p(v[0], u[2]), [u[0], u[1], v[1], v[2]]);
            }
        }
        out
    }

    #[test]
    fn bracket_composition_matches_dual_formula_exhaustively_g2() {
        let basis = basis_a(2, 1);
        let duals: Vec<Tensor> = basis.iter().map(|d| d.dual_tensor().unwrap()).collect();
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                let composed = basis[i].bracket(&basis[j]).unwrap().dual_tensor().unwrap();
                let direct = bracket_dual_formula(&duals[i], &duals[j]);
                assert_eq!(composed, direct, "pair ({i}, {j})");
            }
        }
    }

    #[test]
    fn xi3_eta2_bracket_is_four_times_the_fourth_power() {
        // Two symmetric cubic generators with dual tensors x1^3 and
        // sym(x1, x1, y1); their bracket has dual tensor 4 x1^4.
        let h = sympl(2);
        let xi3 = Tensor::monomial(h, &[h.x(1), h.x(1), h.x(1)], sc(1));
        let eta2 = symmetrize_embed(h, &[h.x(1), h.x(1), h.y(1)]);
        let dxi = Derivation::from_dual_tensor(&xi3).unwrap();
        let deta = Derivation::from_dual_tensor(&eta2).unwrap();
        let dual = dxi.bracket(&deta).unwrap().dual_tensor().unwrap();
        assert_eq!(
            dual,
            Tensor::monomial(h, &[h.x(1), h.x(1), h.x(1), h.x(1)], sc(4))
        );
    }

    #[test]
    fn degree_zero_part_kills_omega0() {
        // Degree-0 derivations come from invariant degree-2 duals, which are
        // exactly the symmetric two-tensors.
        let h = sympl(2);
        let basis = invariant_subspace(h, 2);
        assert_eq!(basis.dim(), necklace_count(4, 2));
        for row in basis.rows() {
            let t = Tensor::from_sparse(h, 2, row);
            let d = Derivation::from_dual_tensor(&t).unwrap();
            assert_eq!(d.degree(), 0);
            assert!(d.annihilates_omega0().unwrap());
            assert_eq!(t.permute_slots(&[2, 1], false).unwrap(), t);
        }
    }

    #[test]
    fn plain_basis_counts_and_c13_rule() {
        assert_eq!(basis_der_plain(2, 1).len(), 8);
        assert_eq!(basis_der_plain(3, 1).len(), 27);
        let p = Space::plain(2);
        let f = DualForm::dual_basis(p, 1).unwrap();
        let t = Tensor::monomial(p, &[p.e(2), p.e(1), p.e(2)], sc(1));
        let d = f.tensor_with(&t).unwrap();
        assert_eq!(
            d.c13().unwrap(),
            Tensor::monomial(p, &[p.e(2), p.e(2)], sc(1))
        );
    }

    #[test]
    fn plain_bracket_matches_functional_formula() {
        // [f (x) u1 u2, h (x) v1 v2] expanded through four contractions.
        let p = Space::plain(3);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let fi = rng.gen_range(1..=3);
            let hi = rng.gen_range(1..=3);
            let u: Vec<u8> = (0..2).map(|_| rng.gen_range(0..3u8)).collect();
            let v: Vec<u8> = (0..2).map(|_| rng.gen_range(0..3u8)).collect();
            let f = DualForm::dual_basis(p, fi).unwrap();
            let h = DualForm::dual_basis(p, hi).unwrap();
            let df = f.tensor_with(&Tensor::monomial(p, &u, sc(1))).unwrap();
            let dh = h.tensor_with(&Tensor::monomial(p, &v, sc(1))).unwrap();
            let composed = df.bracket(&dh).unwrap();

            let mut expected = Derivation::zero(p, 2);
            let mut add = |form: &DualForm, letters: &[u8], coeff: Scalar| {
                if coeff.is_zero() {
                    return;
                }
                let t = Tensor::monomial(p, letters, coeff);
                expected = expected.add(&form.tensor_with(&t).unwrap()).unwrap();
            };
            add(&h, &[u[0], u[1], v[1]], f.eval(v[0]));
            add(&h, &[v[0], u[0], u[1]], f.eval(v[1]));
            add(&f, &[v[0], v[1], u[1]], -h.eval(u[0]));
            add(&f, &[u[0], v[0], v[1]], -h.eval(u[1]));
            assert_eq!(composed, expected);
        }
    }
}
