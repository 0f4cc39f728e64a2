//! The symplectic Lie algebra acting on tensor spaces: Chevalley
//! generators, weights, highest-weight tests, the Weyl dimension formula
//! for `Sp(2g)`, and the battery of named degree-4 vectors used to locate
//! the cyclic invariants inside each isotypic piece.

use num::{One, Zero};

use crate::deriv::Derivation;
use crate::error::{Error, Result};
use crate::linalg::{sc, Echelon, Rationals, Scalar};
use crate::tensor::{
    antisymmetrize, invariant_subspace, necklace_count, omega0, wedge2, Space, Tensor,
};

/// A weakly decreasing tuple naming an irreducible `Sp(2g)` representation;
/// trailing zeros are normalized away.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IrrepLabel(Vec<u32>);

impl IrrepLabel {
    pub fn new(mut rows: Vec<u32>) -> IrrepLabel {
        assert!(rows.windows(2).all(|w| w[0] >= w[1]), "weakly decreasing");
        while rows.last() == Some(&0) {
            rows.pop();
        }
        IrrepLabel(rows)
    }

    pub fn rows(&self) -> &[u32] {
        &self.0
    }

    /// Weyl dimension formula for type C: with `m_i = g - i + 1` and
    /// `l_i = lambda_i + m_i`,
    /// `dim = prod_i l_i/m_i * prod_{i<j} (l_i^2 - l_j^2)/(m_i^2 - m_j^2)`.
    pub fn weyl_dim(&self, g: usize) -> Result<u64> {
        if self.0.len() > g {
            return Err(Error::LabelTooLong {
                len: self.0.len(),
                rank: g,
            });
        }
        let mut l = Vec::with_capacity(g);
        let mut m = Vec::with_capacity(g);
        for i in 0..g {
            let lambda = *self.0.get(i).unwrap_or(&0) as i128;
            let mi = (g - i) as i128;
            m.push(mi);
            l.push(lambda + mi);
        }
        let mut dim = Scalar::one();
        for i in 0..g {
            dim *= Scalar::new(l[i].into(), m[i].into());
            for j in i + 1..g {
                dim *= Scalar::new(
                    (l[i] * l[i] - l[j] * l[j]).into(),
                    (m[i] * m[i] - m[j] * m[j]).into(),
                );
            }
        }
        debug_assert!(dim.is_integer());
        Ok(dim.to_integer().try_into().expect("dimension fits in u64"))
    }
}

impl std::fmt::Display for IrrepLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for r in &self.0 {
            write!(f, "{r}")?;
        }
        write!(f, "]")
    }
}

/// A degree-0 derivation whose matrix is compatible with the skew pairing:
/// `(A u) . v + u . (A v) = 0` on all basis pairs.
#[derive(Clone, Debug)]
pub struct SpGenerator {
    der: Derivation,
}

impl SpGenerator {
    /// Build from generator images (columns of the matrix), validating the
    /// symplectic compatibility identity.
    pub fn new(space: Space, images: Vec<Tensor>) -> Result<SpGenerator> {
        if !space.is_symplectic() {
            return Err(Error::NotSymplectic);
        }
        let der = Derivation::from_images(space, 0, images)?;
        let n = space.dim() as u8;
        for u in 0..n {
            for v in 0..n {
                // omega(Au, v) + omega(u, Av) = 0.
                let mut total = Scalar::zero();
                for (w, c) in der.image(u).terms() {
                    total += c * space.pairing(w[0], v)?;
                }
                for (w, c) in der.image(v).terms() {
                    total += c * space.pairing(u, w[0])?;
                }
                if !total.is_zero() {
                    return Err(Error::BadParameter(
                        "matrix is not compatible with the skew pairing".into(),
                    ));
                }
            }
        }
        Ok(SpGenerator { der })
    }

    pub fn as_derivation(&self) -> &Derivation {
        &self.der
    }

    /// Derivation action on a tensor.
    pub fn act(&self, t: &Tensor) -> Result<Tensor> {
        self.der.apply(t)
    }
}

/// Cartan generator `h_i`: `x_i -> x_i`, `y_i -> -y_i` (1-based `i`).
pub fn cartan(space: Space, i: usize) -> Result<SpGenerator> {
    let g = space.genus().ok_or(Error::NotSymplectic)?;
    assert!((1..=g).contains(&i));
    let images = (0..space.dim() as u8)
        .map(|l| {
            if l == space.x(i) {
                Tensor::generator(space, l)
            } else if l == space.y(i) {
                Tensor::generator(space, l).neg()
            } else {
                Tensor::zero(space, 1)
            }
        })
        .collect();
    SpGenerator::new(space, images)
}

/// Raising generator `e_i`: for `i < g` sends `x_{i+1} -> x_i` and
/// `y_i -> -y_{i+1}`; the long root `e_g` sends `y_g -> x_g`.
pub fn raising(space: Space, i: usize) -> Result<SpGenerator> {
    let g = space.genus().ok_or(Error::NotSymplectic)?;
    assert!((1..=g).contains(&i));
    let images = (0..space.dim() as u8)
        .map(|l| {
            if i < g && l == space.x(i + 1) {
                Tensor::generator(space, space.x(i))
            } else if i < g && l == space.y(i) {
                Tensor::generator(space, space.y(i + 1)).neg()
            } else if i == g && l == space.y(g) {
                Tensor::generator(space, space.x(g))
            } else {
                Tensor::zero(space, 1)
            }
        })
        .collect();
    SpGenerator::new(space, images)
}

/// Simultaneous Cartan weight of a tensor, or `None` when it mixes weights.
/// The weight of a word counts `x_i` letters minus `y_i` letters per index.
pub fn weight_of(t: &Tensor) -> Option<Vec<i64>> {
    let g = t.space().genus()?;
    if t.is_zero() {
        return None;
    }
    let mut weight: Option<Vec<i64>> = None;
    for (w, _) in t.terms() {
        let mut wt = vec![0i64; g];
        for &l in w.iter() {
            let l = l as usize;
            if l < g {
                wt[l] += 1;
            } else {
                wt[l - g] -= 1;
            }
        }
        match &weight {
            None => weight = Some(wt),
            Some(prev) if *prev != wt => return None,
            _ => {}
        }
    }
    weight
}

/// A nonzero weight vector annihilated by every raising generator.
pub fn is_highest_weight(t: &Tensor) -> Result<bool> {
    let g = t.space().genus().ok_or(Error::NotSymplectic)?;
    if weight_of(t).is_none() {
        return Ok(false);
    }
    for i in 1..=g {
        if !raising(t.space(), i)?.act(t)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The degree-4 vectors spanning the cyclic analysis of the quadratic part:
/// the invariant two-form placements, the wedge and square placements, and
/// the highest-weight families for the remaining isotypic pieces.
pub struct NamedVectors {
    pub space: Space,
    pub omega12: Tensor,
    pub omega13: Tensor,
    pub omega14: Tensor,
    /// Placements of `x1 /\ x2` at the six slot pairs, ordered
    /// (1,2), (1,3), (1,4), (2,3), (2,4), (3,4).
    pub alpha: Vec<Tensor>,
    pub alpha1_comb: Tensor,
    pub alpha2_comb: Tensor,
    /// Placements of `x1 (x) x1`, same order.
    pub beta: Vec<Tensor>,
    pub beta_comb: Tensor,
    pub gamma1: Tensor,
    pub gamma2: Tensor,
    pub delta: Vec<Tensor>,
    pub epsilon: Vec<Tensor>,
    pub quartic_wedge: Tensor,
}

pub const SLOT_PAIRS: [(usize, usize); 6] = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];

impl NamedVectors {
    /// Requires genus at least 4 (the four-fold wedge needs four x's).
    pub fn build(g: u16) -> Result<NamedVectors> {
        if g < 4 {
            return Err(Error::BadParameter(
                "named degree-4 vectors need genus >= 4".into(),
            ));
        }
        let h = Space::symplectic(g);
        let om = omega0(h)?;
        let wedge = wedge2(h, h.x(1), h.x(2));
        let square = Tensor::monomial(h, &[h.x(1), h.x(1)], sc(1));

        let omega12 = om.product(&om)?;
        let omega13 = om.otimes_ij(&om, 1, 3)?;
        let omega14 = om.otimes_ij(&om, 1, 4)?;

        let alpha: Vec<Tensor> = SLOT_PAIRS
            .iter()
            .map(|&(i, j)| wedge.otimes_ij(&om, i, j))
            .collect::<Result<_>>()?;
        let beta: Vec<Tensor> = SLOT_PAIRS
            .iter()
            .map(|&(i, j)| square.otimes_ij(&om, i, j))
            .collect::<Result<_>>()?;

        let alpha1_comb = alpha[1].sub(&alpha[4])?;
        let alpha2_comb = alpha[0].sub(&alpha[2])?.sub(&alpha[3])?.add(&alpha[5])?;
        let beta_comb = beta[0].add(&beta[2])?.sub(&beta[3])?.add(&beta[5])?;

        let gamma1 = wedge.product(&wedge)?;
        let mut gamma2 = Tensor::zero(h, 4);
        let (a, b) = (h.x(1), h.x(2));
        gamma2.add_term(crate::tensor::word(&[a, a, b, b]), sc(1));
        gamma2.add_term(crate::tensor::word(&[b, b, a, a]), sc(1));
        gamma2.add_term(crate::tensor::word(&[a, b, a, b]), sc(-1));
        gamma2.add_term(crate::tensor::word(&[b, a, b, a]), sc(-1));

        // delta_1 = 3 x2.x1.x1.x1 - x1.x2.x1.x1 - x1.x1.x2.x1 - x1.x1.x1.x2;
        // the family cycles the letter in slot 1 into slot i, which for
        // i = 4 is the full cyclic shift.
        let mut delta1 = Tensor::zero(h, 4);
        delta1.add_term(crate::tensor::word(&[b, a, a, a]), sc(3));
        delta1.add_term(crate::tensor::word(&[a, b, a, a]), sc(-1));
        delta1.add_term(crate::tensor::word(&[a, a, b, a]), sc(-1));
        delta1.add_term(crate::tensor::word(&[a, a, a, b]), sc(-1));
        let delta = vec![
            delta1.clone(),
            delta1.cycle_prefix(2)?,
            delta1.cycle_prefix(3)?,
            delta1.cycle_prefix(4)?,
        ];

        let epsilon1 = Tensor::generator(h, h.x(1))
            .product(&antisymmetrize(h, &[h.x(1), h.x(2), h.x(3)]))?;
        let epsilon = vec![
            epsilon1.clone(),
            epsilon1.cycle_prefix(2)?,
            epsilon1.cycle_prefix(3)?,
            epsilon1.cycle_prefix(4)?,
        ];

        let quartic_wedge = antisymmetrize(h, &[h.x(1), h.x(2), h.x(3), h.x(4)]);

        Ok(NamedVectors {
            space: h,
            omega12,
            omega13,
            omega14,
            alpha,
            alpha1_comb,
            alpha2_comb,
            beta,
            beta_comb,
            gamma1,
            gamma2,
            delta,
            epsilon,
            quartic_wedge,
        })
    }

    /// The fifteen cyclic-shift identities of the invariant, wedge and
    /// square families, as (name, computed, expected) triples.
    pub fn sigma4_identities(&self) -> Vec<(String, Tensor, Tensor)> {
        let mut checks = Vec::new();
        checks.push((
            "sigma4(omega12) = -omega14".into(),
            self.omega12.cyclic_shift(),
            self.omega14.neg(),
        ));
        checks.push((
            "sigma4(omega13) = -omega13".into(),
            self.omega13.cyclic_shift(),
            self.omega13.neg(),
        ));
        checks.push((
            "sigma4(omega14) = -omega12".into(),
            self.omega14.cyclic_shift(),
            self.omega12.neg(),
        ));
        // alpha_{12..34} map to -alpha_{14}, -alpha_{24}, -alpha_{34},
        // -alpha_{12}, -alpha_{13}, -alpha_{23}.
        let alpha_targets = [2usize, 4, 5, 0, 1, 3];
        for (k, &(i, j)) in SLOT_PAIRS.iter().enumerate() {
            let (ti, tj) = SLOT_PAIRS[alpha_targets[k]];
            checks.push((
                format!("sigma4(alpha{i}{j}) = -alpha{ti}{tj}"),
                self.alpha[k].cyclic_shift(),
                self.alpha[alpha_targets[k]].neg(),
            ));
        }
        // beta_{12..34} map to beta_{14}, beta_{24}, beta_{34}, -beta_{12},
        // -beta_{13}, -beta_{23}.
        let beta_targets: [(usize, i64); 6] = [(2, 1), (4, 1), (5, 1), (0, -1), (1, -1), (3, -1)];
        for (k, &(i, j)) in SLOT_PAIRS.iter().enumerate() {
            let (target, sign) = beta_targets[k];
            let (ti, tj) = SLOT_PAIRS[target];
            let sign_str = if sign < 0 { "-" } else { "" };
            checks.push((
                format!("sigma4(beta{i}{j}) = {sign_str}beta{ti}{tj}"),
                self.beta[k].cyclic_shift(),
                self.beta[target].scale(&sc(sign)),
            ));
        }
        checks
    }

    /// The six invariant combinations generating the cyclic-fixed part of
    /// the quadratic piece.
    pub fn invariant_generators(&self) -> Vec<(String, Tensor)> {
        vec![
            (
                "omega12 - omega14".into(),
                self.omega12.sub(&self.omega14).unwrap(),
            ),
            ("alpha13 - alpha24".into(), self.alpha1_comb.clone()),
            (
                "alpha12 - alpha14 - alpha23 + alpha34".into(),
                self.alpha2_comb.clone(),
            ),
            (
                "beta12 + beta14 - beta23 + beta34".into(),
                self.beta_comb.clone(),
            ),
            (
                "gamma1 - gamma2".into(),
                self.gamma1.sub(&self.gamma2).unwrap(),
            ),
            (
                "epsilon1 + epsilon3".into(),
                self.epsilon[0].add(&self.epsilon[2]).unwrap(),
            ),
        ]
    }

    /// Highest-weight vectors named alongside their expected weights.
    pub fn highest_weight_claims(&self) -> Vec<(String, Tensor, Vec<i64>)> {
        let g = self.space.genus().unwrap();
        let pad = |w: &[i64]| {
            let mut v = w.to_vec();
            v.resize(g, 0);
            v
        };
        vec![
            (
                "x1 wedge x2".into(),
                wedge2(self.space, self.space.x(1), self.space.x(2)),
                pad(&[1, 1]),
            ),
            (
                "x1 (x) x1".into(),
                Tensor::monomial(self.space, &[self.space.x(1), self.space.x(1)], sc(1)),
                pad(&[2]),
            ),
            ("gamma1".into(), self.gamma1.clone(), pad(&[2, 2])),
            ("gamma2".into(), self.gamma2.clone(), pad(&[2, 2])),
            ("delta1".into(), self.delta[0].clone(), pad(&[3, 1])),
            ("epsilon1".into(), self.epsilon[0].clone(), pad(&[2, 1, 1])),
            (
                "x1 wedge x2 wedge x3 wedge x4".into(),
                self.quartic_wedge.clone(),
                pad(&[1, 1, 1, 1]),
            ),
            (
                "x1^4".into(),
                Tensor::monomial(self.space, [self.space.x(1); 4].as_slice(), sc(1)),
                pad(&[4]),
            ),
        ]
    }
}

/// The two dimension bookkeeping identities for the quadratic part at a
/// given genus: the full degree-4 tensor space against its isotypic
/// multiplicities, and the cyclic-invariant part against the surviving
/// summands.
pub struct DecompositionReport {
    pub genus: usize,
    /// (label, multiplicity, Weyl dimension) for the degree-4 tensor space.
    pub tensor4: Vec<(IrrepLabel, u64, u64)>,
    pub tensor4_sum: u64,
    pub tensor4_expected: u64,
    /// Same for the cyclic-invariant subspace.
    pub invariant: Vec<(IrrepLabel, u64, u64)>,
    pub invariant_sum: u64,
    pub invariant_expected: u64,
    pub quartic_wedge_excluded: bool,
}

pub fn decomposition_report(g: u16) -> Result<DecompositionReport> {
    if g < 4 {
        return Err(Error::BadParameter(
            "the isotypic bookkeeping needs genus >= 4".into(),
        ));
    }
    let gu = g as usize;
    let label = |rows: &[u32]| IrrepLabel::new(rows.to_vec());
    let tensor4_mults: Vec<(IrrepLabel, u64)> = vec![
        (label(&[]), 3),
        (label(&[1, 1]), 6),
        (label(&[2]), 6),
        (label(&[2, 2]), 2),
        (label(&[3, 1]), 3),
        (label(&[2, 1, 1]), 3),
        (label(&[1, 1, 1, 1]), 1),
        (label(&[4]), 1),
    ];
    let invariant_mults: Vec<(IrrepLabel, u64)> = vec![
        (label(&[]), 1),
        (label(&[1, 1]), 2),
        (label(&[2]), 1),
        (label(&[2, 2]), 1),
        (label(&[2, 1, 1]), 1),
        (label(&[4]), 1),
    ];
    let expand = |mults: &[(IrrepLabel, u64)]| -> Result<(Vec<(IrrepLabel, u64, u64)>, u64)> {
        let mut rows = Vec::new();
        let mut sum = 0u64;
        for (l, m) in mults {
            let dim = l.weyl_dim(gu)?;
            sum += m * dim;
            rows.push((l.clone(), *m, dim));
        }
        Ok((rows, sum))
    };
    let (tensor4, tensor4_sum) = expand(&tensor4_mults)?;
    let (invariant, invariant_sum) = expand(&invariant_mults)?;
    let space = Space::symplectic(g);
    let quartic = antisymmetrize(space, &[space.x(1), space.x(2), space.x(3), space.x(4)]);
    Ok(DecompositionReport {
        genus: gu,
        tensor4,
        tensor4_sum,
        tensor4_expected: (2 * gu as u64).pow(4),
        invariant,
        invariant_sum,
        invariant_expected: necklace_count(2 * gu, 4) as u64,
        quartic_wedge_excluded: !quartic.is_cyclic_invariant(),
    })
}

/// Echelon span of the symmetric embedding of the cubic monomials.
pub fn symmetric_cube_subspace(space: Space) -> Echelon<Rationals> {
    let n = space.dim();
    let mut basis = Echelon::new(Rationals);
    for a in 0..n as u8 {
        for b in a..n as u8 {
            for c in b..n as u8 {
                let t = crate::tensor::symmetrize_embed(space, &[a, b, c]);
                basis.insert_reduce(&t.to_sparse());
            }
        }
    }
    basis
}

/// Echelon span of the three-fold wedges.
pub fn exterior_cube_subspace(space: Space) -> Echelon<Rationals> {
    let n = space.dim();
    let mut basis = Echelon::new(Rationals);
    for a in 0..n as u8 {
        for b in a + 1..n as u8 {
            for c in b + 1..n as u8 {
                basis.insert_reduce(&antisymmetrize(space, &[a, b, c]).to_sparse());
            }
        }
    }
    basis
}

/// The degree-1 splitting: inside the cyclic invariants of degree 3 the
/// symmetric cube and the exterior cube meet trivially and together fill
/// the space.  Returns (invariant dim, symmetric dim, exterior dim).
pub fn degree_one_split(g: u16) -> Result<(usize, usize, usize)> {
    let space = Space::symplectic(g);
    let invariants = invariant_subspace(space, 3);
    let sym = symmetric_cube_subspace(space);
    let ext = exterior_cube_subspace(space);
    for row in sym.rows().chain(ext.rows()) {
        if !invariants.contains(row) {
            return Err(Error::NotInSubspace { index: 0 });
        }
    }
    let mut joint = Echelon::new(Rationals);
    for row in sym.rows().chain(ext.rows()) {
        joint.insert_reduce(row);
    }
    if joint.dim() != sym.dim() + ext.dim() || joint.dim() != invariants.dim() {
        return Err(Error::Unsupported(format!(
            "degree-1 splitting failed: {} + {} vs {}",
            sym.dim(),
            ext.dim(),
            invariants.dim()
        )));
    }
    Ok((invariants.dim(), sym.dim(), ext.dim()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::word;
    use rand::{Rng, SeedableRng};

    fn sympl(g: u16) -> Space {
        Space::symplectic(g)
    }

    #[test]
    fn cartan_acts_diagonally() {
        let h = sympl(3);
        let t = Tensor::monomial(h, &[h.x(1), h.x(2)], sc(1));
        let h1 = cartan(h, 1).unwrap();
        assert_eq!(h1.act(&t).unwrap(), t);
        assert_eq!(weight_of(&t), Some(vec![1, 1, 0]));
        let mixed = Tensor::monomial(h, &[h.x(1), h.y(1)], sc(1));
        assert_eq!(weight_of(&mixed), Some(vec![0, 0, 0]));
    }

    #[test]
    fn chevalley_generators_kill_the_two_form() {
        for g in [2u16, 4] {
            let h = sympl(g);
            let om = omega0(h).unwrap();
            for i in 1..=g as usize {
                assert!(cartan(h, i).unwrap().act(&om).unwrap().is_zero());
                assert!(raising(h, i).unwrap().act(&om).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn weight_mixing_is_detected() {
        let h = sympl(2);
        let mut t = Tensor::generator(h, h.x(1));
        t.add_term(word(&[h.y(1)]), sc(1));
        assert_eq!(weight_of(&t), None);
    }

    #[test]
    fn wedge_is_highest_weight_and_transposed_word_is_not() {
        let h = sympl(4);
        assert!(is_highest_weight(&wedge2(h, h.x(1), h.x(2))).unwrap());
        let bad = Tensor::monomial(h, &[h.x(2), h.x(1)], sc(1));
        assert!(!is_highest_weight(&bad).unwrap());
    }

    #[test]
    fn sp_action_is_a_lie_algebra_action() {
        // act([X,Y]) = act(X)act(Y) - act(Y)act(X) on random tensors.
        let h = sympl(2);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let gens: Vec<SpGenerator> = (1..=2)
            .flat_map(|i| [cartan(h, i).unwrap(), raising(h, i).unwrap()])
            .collect();
        for _ in 0..20 {
            let x = &gens[rng.gen_range(0..gens.len())];
            let y = &gens[rng.gen_range(0..gens.len())];
            let mut t = Tensor::zero(h, 3);
            for _ in 0..4 {
                let letters = [
                    rng.gen_range(0..4u8),
                    rng.gen_range(0..4u8),
                    rng.gen_range(0..4u8),
                ];
                t.add_term(word(&letters), sc(rng.gen_range(-3..4)));
            }
            let bracket = x
                .as_derivation()
                .bracket(y.as_derivation())
                .unwrap()
                .apply(&t)
                .unwrap();
            let composed = x
                .act(&y.act(&t).unwrap())
                .unwrap()
                .sub(&y.act(&x.act(&t).unwrap()).unwrap())
                .unwrap();
            assert_eq!(bracket, composed);
        }
    }

    #[test]
    fn weyl_dimension_table_at_g4() {
        let dim = |rows: &[u32]| IrrepLabel::new(rows.to_vec()).weyl_dim(4).unwrap();
        assert_eq!(dim(&[1, 1]), 27);
        assert_eq!(dim(&[2]), 36);
        assert_eq!(dim(&[2, 2]), 308);
        assert_eq!(dim(&[3, 1]), 594);
        assert_eq!(dim(&[2, 1, 1]), 315);
        assert_eq!(dim(&[1, 1, 1, 1]), 42);
        assert_eq!(dim(&[4]), 330);
        assert_eq!(dim(&[]), 1);
    }

    #[test]
    fn weyl_dim_of_fundamental_pieces_in_closed_form() {
        for g in 2..=6usize {
            // [2] is the adjoint piece, g(2g+1); [1^2] has dim 2g^2-g-1,
            // one less than the exterior square.
            assert_eq!(
                IrrepLabel::new(vec![2]).weyl_dim(g).unwrap(),
                (g * (2 * g + 1)) as u64
            );
            assert_eq!(
                IrrepLabel::new(vec![1, 1]).weyl_dim(g).unwrap(),
                (2 * g * g - g - 1) as u64
            );
            assert_eq!(
                IrrepLabel::new(vec![1, 1]).weyl_dim(g).unwrap() + 1,
                (g * (2 * g - 1)) as u64
            );
        }
        assert!(IrrepLabel::new(vec![1, 1, 1]).weyl_dim(2).is_err());
    }

    #[test]
    fn sigma4_identity_battery() {
        let named = NamedVectors::build(4).unwrap();
        let checks = named.sigma4_identities();
        assert_eq!(checks.len(), 15);
        for (name, computed, expected) in checks {
            assert_eq!(computed, expected, "{name}");
        }
    }

    #[test]
    fn gamma_swap_under_the_cyclic_shift() {
        let named = NamedVectors::build(4).unwrap();
        assert_eq!(named.gamma1.cyclic_shift(), named.gamma2.neg());
        assert_eq!(named.gamma2.cyclic_shift(), named.gamma1.neg());
    }

    #[test]
    fn delta_family_relations() {
        let named = NamedVectors::build(4).unwrap();
        let sum = named.delta[0]
            .add(&named.delta[1])
            .unwrap()
            .add(&named.delta[2])
            .unwrap()
            .add(&named.delta[3])
            .unwrap();
        assert!(sum.is_zero());
        let first_three: Vec<_> = named.delta[..3].iter().map(Tensor::to_sparse).collect();
        assert_eq!(crate::linalg::span_dim(Rationals, &first_three), 3);
        // The shift cycles the family backwards: delta_1 -> delta_4 etc.
        assert_eq!(named.delta[0].cyclic_shift(), named.delta[3]);
        assert_eq!(named.delta[1].cyclic_shift(), named.delta[0]);
        assert_eq!(named.delta[2].cyclic_shift(), named.delta[1]);
        assert_eq!(named.delta[3].cyclic_shift(), named.delta[2]);
    }

    #[test]
    fn epsilon_family_relations() {
        let named = NamedVectors::build(4).unwrap();
        let alternating = named.epsilon[0]
            .sub(&named.epsilon[1])
            .unwrap()
            .add(&named.epsilon[2])
            .unwrap()
            .sub(&named.epsilon[3])
            .unwrap();
        assert!(alternating.is_zero());
        let first_three: Vec<_> = named.epsilon[..3].iter().map(Tensor::to_sparse).collect();
        assert_eq!(crate::linalg::span_dim(Rationals, &first_three), 3);
        let combo = named.epsilon[0].add(&named.epsilon[2]).unwrap();
        assert_eq!(combo, named.epsilon[1].add(&named.epsilon[3]).unwrap());
        assert!(combo.is_cyclic_invariant());
        assert_eq!(named.epsilon[0].cyclic_shift(), named.epsilon[3]);
        assert_eq!(named.epsilon[1].cyclic_shift(), named.epsilon[0]);
    }

    #[test]
    fn front_insert_of_delta1_gives_delta2() {
        // In slot 2 the exchange and the prefix cycle agree.
        let named = NamedVectors::build(4).unwrap();
        assert_eq!(named.delta[0].front_insert(2).unwrap(), named.delta[1]);
    }

    #[test]
    fn named_highest_weight_claims_hold() {
        let named = NamedVectors::build(4).unwrap();
        for (name, t, wt) in named.highest_weight_claims() {
            assert_eq!(weight_of(&t), Some(wt.clone()), "{name}");
            assert!(is_highest_weight(&t).unwrap(), "{name}");
        }
    }

    #[test]
    fn invariant_generators_are_cyclic_invariant() {
        let named = NamedVectors::build(4).unwrap();
        let invariants = invariant_subspace(named.space, 4);
        for (name, t) in named.invariant_generators() {
            assert!(t.is_cyclic_invariant(), "{name}");
            assert!(!t.is_zero(), "{name}");
            assert!(invariants.contains(&t.to_sparse()), "{name}");
        }
        assert!(!named.quartic_wedge.is_cyclic_invariant());
    }

    #[test]
    fn decomposition_sums_at_g4() {
        let report = decomposition_report(4).unwrap();
        assert_eq!(report.tensor4_sum, 4096);
        assert_eq!(report.tensor4_sum, report.tensor4_expected);
        assert_eq!(report.invariant_sum, 1044);
        assert_eq!(report.invariant_sum, report.invariant_expected);
        assert!(report.quartic_wedge_excluded);
    }

    #[test]
    fn degree_one_split_at_g2() {
        let (inv, sym, ext) = degree_one_split(2).unwrap();
        assert_eq!((inv, sym, ext), (24, 20, 4));
    }
}
