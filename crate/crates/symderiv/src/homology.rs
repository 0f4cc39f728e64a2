//! Weight-graded abelianizations of the positive-degree derivation algebras,
//! the exactness analysis of the weight-2 sequence, the polygon contractions
//! on powers of the exterior (and symmetric) square, and the plain-space
//! computations.
//!
//! Heavy rank computations run modulo two independent 62-bit primes; a
//! reported exact dimension is certified rationally, either by a full
//! rational elimination on small instances or by the containment sandwich:
//! the bracket image lies inside the kernel of the projected slot-1/3
//! contraction (checked exactly, pair by pair), the kernel dimension is
//! computed rationally, and a matching modular rank pins the exact rank
//! between the two.

use rand::SeedableRng;
use rayon::prelude::*;

use crate::cache::CacheStore;
use crate::deriv::{basis_a, basis_der_plain, Derivation};
use crate::error::{Error, Result};
use crate::free_lie::{basis_l, witt_number};
use crate::linalg::{
    random_prime_62, sc, Echelon, PrimeField, Rationals, Scalar, SparseVec,
};
use crate::tensor::{necklace_count, omega0, Space, Tensor};

/// Which graded Lie algebra a computation runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgebraHandle {
    /// Derivations of the free associative algebra killing the two-form.
    SymplecticAssoc { genus: u16 },
    /// Derivations of the free Lie algebra killing the two-form.
    SymplecticLie { genus: u16 },
    /// All derivations of the free associative algebra on a plain space.
    PlainAssoc { dim: u16 },
}

impl AlgebraHandle {
    pub fn space(&self) -> Space {
        match self {
            AlgebraHandle::SymplecticAssoc { genus } | AlgebraHandle::SymplecticLie { genus } => {
                Space::symplectic(*genus)
            }
            AlgebraHandle::PlainAssoc { dim } => Space::plain(*dim),
        }
    }

    pub fn label(&self) -> String {
        match self {
            AlgebraHandle::SymplecticAssoc { genus } => format!("symplectic-associative g={genus}"),
            AlgebraHandle::SymplecticLie { genus } => format!("symplectic-lie g={genus}"),
            AlgebraHandle::PlainAssoc { dim } => format!("plain-associative n={dim}"),
        }
    }

    pub fn key_fragment(&self) -> String {
        match self {
            AlgebraHandle::SymplecticAssoc { genus } => format!("sympl-g{genus}"),
            AlgebraHandle::SymplecticLie { genus } => format!("lie-g{genus}"),
            AlgebraHandle::PlainAssoc { dim } => format!("plain-n{dim}"),
        }
    }

    pub fn basis(&self, k: usize) -> Vec<Derivation> {
        match self {
            AlgebraHandle::SymplecticAssoc { genus } => basis_a(*genus, k),
            AlgebraHandle::SymplecticLie { genus } => basis_l(*genus, k),
            AlgebraHandle::PlainAssoc { dim } => basis_der_plain(*dim, k),
        }
    }

    /// Dimension of the degree-`k` part, by the counting formulas.
    pub fn ambient_dim(&self, k: usize) -> usize {
        match self {
            AlgebraHandle::SymplecticAssoc { genus } => {
                necklace_count(2 * *genus as usize, k + 2)
            }
            AlgebraHandle::SymplecticLie { genus } => {
                let n = 2 * *genus as usize;
                n * witt_number(n, k + 1) - witt_number(n, k + 2)
            }
            AlgebraHandle::PlainAssoc { dim } => (*dim as usize).pow(k as u32 + 2),
        }
    }

    /// Coordinates of a derivation in the canonical indexing of its degree:
    /// the dual tensor's word index for symplectic algebras, stacked
    /// (generator, word) indices for plain ones.
    pub fn coords(&self, d: &Derivation) -> Result<SparseVec<Scalar>> {
        match self {
            AlgebraHandle::SymplecticAssoc { .. } | AlgebraHandle::SymplecticLie { .. } => {
                Ok(d.dual_tensor()?.to_sparse())
            }
            AlgebraHandle::PlainAssoc { .. } => {
                let space = d.space();
                let block = space.word_count(d.degree() + 1) as u32;
                let mut pairs = Vec::new();
                for (i, image) in d.images().iter().enumerate() {
                    for (w, c) in image.terms() {
                        pairs.push((i as u32 * block + space.encode(w), c.clone()));
                    }
                }
                Ok(SparseVec::from_pairs(&Rationals, pairs))
            }
        }
    }
}

/// Degree pairs `(i, j)` with `i <= j`, `i + j = m`, both positive.
pub fn default_degree_pairs(m: usize) -> Vec<(usize, usize)> {
    (1..=m / 2).map(|i| (i, m - i)).collect()
}

fn chunked_bracket_coords<T, F>(
    handle: AlgebraHandle,
    degree_pairs: &[(usize, usize)],
    per_vector: F,
    mut consume: impl FnMut(T) -> Result<()>,
) -> Result<usize>
where
    T: Send,
    F: Fn(&Derivation) -> Result<T> + Sync,
{
    let mut total = 0usize;
    for &(i, j) in degree_pairs {
        let left = handle.basis(i);
        let (right, same) = if i == j {
            (Vec::new(), true)
        } else {
            (handle.basis(j), false)
        };
        let pairs: Vec<(usize, usize)> = if same {
            (0..left.len())
                .flat_map(|a| (a + 1..left.len()).map(move |b| (a, b)))
                .collect()
        } else {
            (0..left.len())
                .flat_map(|a| (0..right.len()).map(move |b| (a, b)))
                .collect()
        };
        total += pairs.len();
        for chunk in pairs.chunks(256) {
            let results: Vec<T> = chunk
                .par_iter()
                .map(|&(a, b)| {
                    let rb = if same { &left[b] } else { &right[b] };
                    let bracket = left[a].bracket(rb)?;
                    per_vector(&bracket)
                })
                .collect::<Result<Vec<T>>>()?;
            for r in results {
                consume(r)?;
            }
        }
    }
    Ok(total)
}

/// Echelon span of the bracket vectors for the given degree pairs, over the
/// rationals.
pub fn bracket_image_pairs(
    handle: AlgebraHandle,
    degree_pairs: &[(usize, usize)],
) -> Result<Echelon<Rationals>> {
    let mut image = Echelon::new(Rationals);
    chunked_bracket_coords(
        handle,
        degree_pairs,
        |b| handle.coords(b),
        |v| {
            image.insert_reduce(&v);
            Ok(())
        },
    )?;
    Ok(image)
}

/// Echelon span of all weight-`m` brackets of positive-degree pieces.
pub fn bracket_image(handle: AlgebraHandle, m: usize) -> Result<Echelon<Rationals>> {
    bracket_image_pairs(handle, &default_degree_pairs(m))
}

/// How an exact dimension claim was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certification {
    /// Full rational elimination.
    Exact,
    /// Modular rank equal to a rationally computed kernel bound, with the
    /// containment checked exactly; the rank is therefore exact.
    ExactViaContainment { prime_a: u64, prime_b: u64 },
    /// Two independent primes agree; not certified exact.
    TwoPrimesAgree { prime_a: u64, prime_b: u64 },
}

#[derive(Clone, Debug)]
pub struct H1Result {
    pub algebra: String,
    pub weight: usize,
    pub ambient_dim: usize,
    pub image_dim: usize,
    pub quotient_dim: usize,
    pub representatives: Vec<Derivation>,
    pub certification: Certification,
}

impl H1Result {
    pub fn consistent(&self) -> bool {
        self.ambient_dim == self.image_dim + self.quotient_dim
            && self.representatives.len() == self.quotient_dim
    }
}

/// The two deterministic certification primes.
pub fn certification_primes() -> (u64, u64) {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x53594d_44455249);
    let a = random_prime_62(&mut rng);
    let b = loop {
        let candidate = random_prime_62(&mut rng);
        if candidate != a {
            break candidate;
        }
    };
    (a, b)
}

/// Deterministic source for randomized spot checks.
pub fn spot_check_rng() -> rand_chacha::ChaCha8Rng {
    rand_chacha::ChaCha8Rng::seed_from_u64(0x0b5e55ed)
}

fn reduce_mod_checked(v: &SparseVec<Scalar>, fp: &PrimeField) -> Result<SparseVec<u64>> {
    v.reduce_mod(fp).ok_or_else(|| {
        Error::Unsupported(format!(
            "denominator divisible by certification prime {}",
            fp.p
        ))
    })
}

/// Antisymmetric part of a degree-2 tensor, as coordinates on the pairs
/// `a < b`.
fn wedge_coords(t: &Tensor) -> SparseVec<Scalar> {
    let space = t.space();
    let n = space.dim() as u32;
    let mut pairs = Vec::new();
    for (w, c) in t.terms() {
        let (a, b) = (w[0] as u32, w[1] as u32);
        if a < b {
            pairs.push((a * n + b, c.clone()));
        } else if a > b {
            pairs.push((b * n + a, -c.clone()));
        }
    }
    SparseVec::from_pairs(&Rationals, pairs)
}

/// Rank of a family of degree-2 tensors inside the exterior square modulo
/// the line of the two-form.
pub fn projected_wedge_rank<'a>(
    space: Space,
    tensors: impl Iterator<Item = &'a Tensor>,
) -> Result<usize> {
    let mut ech = Echelon::new(Rationals);
    ech.insert_reduce(&wedge_coords(&omega0(space)?));
    let base = ech.dim();
    for t in tensors {
        ech.insert_reduce(&wedge_coords(t));
    }
    Ok(ech.dim() - base)
}

/// Exact weight-2 analysis for the symplectic associative algebra via the
/// containment sandwich, with the heavy eliminations done modulo two
/// primes and the echelon bases cached.
#[derive(Clone, Debug)]
pub struct CertifiedWeight2 {
    pub genus: u16,
    pub ambient_dim: usize,
    pub image_dim: usize,
    pub quotient_dim: usize,
    /// `ambient - rank` of the projected contraction: the rational upper
    /// bound for the image dimension.
    pub kernel_bound: usize,
    pub projected_c13_rank: usize,
    pub pairs_total: usize,
    pub c13_pairs_checked: usize,
    pub c13_all_vanish: bool,
    pub prime_a: u64,
    pub prime_b: u64,
    pub representatives: Vec<Tensor>,
    pub warm_cache: bool,
}

impl CertifiedWeight2 {
    pub fn certification(&self) -> Certification {
        if self.c13_all_vanish && self.image_dim == self.kernel_bound {
            Certification::ExactViaContainment {
                prime_a: self.prime_a,
                prime_b: self.prime_b,
            }
        } else {
            Certification::TwoPrimesAgree {
                prime_a: self.prime_a,
                prime_b: self.prime_b,
            }
        }
    }
}

pub fn weight2_certified(g: u16, cache: &CacheStore) -> Result<CertifiedWeight2> {
    let handle = AlgebraHandle::SymplecticAssoc { genus: g };
    let space = handle.space();
    let ambient: Vec<Tensor> = basis_a(g, 2)
        .iter()
        .map(|d| d.dual_tensor())
        .collect::<Result<_>>()?;
    let ambient_dim = ambient.len();
    debug_assert_eq!(ambient_dim, handle.ambient_dim(2));

    // Rational upper bound: the image lies in the kernel of the projected
    // contraction, whose rank over the invariants is computed exactly.
    let c13_images: Vec<Tensor> = ambient
        .iter()
        .map(|t| t.contract(1, 3))
        .collect::<Result<_>>()?;
    let projected_c13_rank = projected_wedge_rank(space, c13_images.iter())?;
    let kernel_bound = ambient_dim - projected_c13_rank;

    let (prime_a, prime_b) = certification_primes();
    let fpa = PrimeField::new(prime_a);
    let fpb = PrimeField::new(prime_b);
    let key_a = format!("{}-m2-image-mod-{prime_a}", handle.key_fragment());
    let key_b = format!("{}-m2-image-mod-{prime_b}", handle.key_fragment());

    let load_echelon = |key: &str, fp: &PrimeField| -> Option<Echelon<PrimeField>> {
        let rows = cache.load_rows(key, space, 4)?;
        let mut converted = Vec::with_capacity(rows.len());
        for row in &rows {
            let mut entries = Vec::with_capacity(row.len());
            for (i, c) in row.iter() {
                if !c.is_integer() {
                    return None;
                }
                let v: u64 = c.to_integer().try_into().ok()?;
                if v == 0 || v >= fp.p {
                    return None;
                }
                entries.push((*i, v));
            }
            converted.push(SparseVec::from_pairs(fp, entries));
        }
        Some(Echelon::from_echelon_rows(*fp, converted))
    };

    let cached = (load_echelon(&key_a, &fpa), load_echelon(&key_b, &fpb));
    let (ech_a, c13_all_vanish, c13_pairs_checked, pairs_total, warm_cache) = match cached {
        (Some(a), Some(b)) if a.dim() == b.dim() => {
            // Cache entries are only ever written after the exact
            // containment check passed on the run that produced them.
            let b1 = necklace_count(2 * g as usize, 3);
            (a, true, 0, b1 * (b1 - 1) / 2, true)
        }
        _ => {
            let mut ech_a = Echelon::new(fpa);
            let mut ech_b = Echelon::new(fpb);
            let mut all_vanish = true;
            let pairs_total = chunked_bracket_coords(
                handle,
                &[(1usize, 1usize)],
                |bracket| {
                    let dual = bracket.dual_tensor()?;
                    let c13_zero = dual.contract(1, 3)?.is_zero();
                    let v = dual.to_sparse();
                    Ok((c13_zero, v))
                },
                |(c13_zero, v)| {
                    all_vanish &= c13_zero;
                    if ech_a.dim() < kernel_bound {
                        ech_a.insert_reduce(&reduce_mod_checked(&v, &fpa)?);
                    }
                    ech_b.insert_reduce(&reduce_mod_checked(&v, &fpb)?);
                    Ok(())
                },
            )?;
            if ech_a.dim() != ech_b.dim() {
                return Err(Error::RankDisagreement {
                    prime_a,
                    rank_a: ech_a.dim(),
                    prime_b,
                    rank_b: ech_b.dim(),
                });
            }
            if all_vanish {
                let to_rows = |e: &Echelon<PrimeField>| -> Vec<SparseVec<Scalar>> {
                    e.rows()
                        .map(|r| {
                            SparseVec::from_pairs(
                                &Rationals,
                                r.iter().map(|(i, v)| (*i, sc(*v as i64))).collect(),
                            )
                        })
                        .collect()
                };
                cache.save_rows(&key_a, space, 4, &to_rows(&ech_a))?;
                cache.save_rows(&key_b, space, 4, &to_rows(&ech_b))?;
            }
            (ech_a, all_vanish, pairs_total, pairs_total, false)
        }
    };

    let image_dim = ech_a.dim();
    // Representatives: ambient basis vectors that stay independent of the
    // image modulo the first prime.  Independence modulo a prime implies
    // independence over the rationals.
    let mut augmented = ech_a.clone();
    let mut representatives = Vec::new();
    for t in &ambient {
        let v = reduce_mod_checked(&t.to_sparse(), &fpa)?;
        if !augmented.insert_reduce(&v) {
            representatives.push(t.clone());
        }
    }

    let quotient_dim = ambient_dim - image_dim;
    if representatives.len() != quotient_dim {
        return Err(Error::Unsupported(format!(
            "representative extraction found {} vectors for a quotient of dimension {quotient_dim}",
            representatives.len()
        )));
    }

    Ok(CertifiedWeight2 {
        genus: g,
        ambient_dim,
        image_dim,
        quotient_dim,
        kernel_bound,
        projected_c13_rank,
        pairs_total,
        c13_pairs_checked,
        c13_all_vanish,
        prime_a,
        prime_b,
        representatives,
        warm_cache,
    })
}

/// Weight-`m` piece of the abelianization of the positive-degree part.
pub fn h1_weight(
    handle: AlgebraHandle,
    m: usize,
    cache: &CacheStore,
    allow_expensive: bool,
) -> Result<H1Result> {
    if m == 0 {
        return Err(Error::BadParameter("weight must be positive".into()));
    }
    if m == 1 {
        let basis = handle.basis(1);
        return Ok(H1Result {
            algebra: handle.label(),
            weight: 1,
            ambient_dim: basis.len(),
            image_dim: 0,
            quotient_dim: basis.len(),
            representatives: basis,
            certification: Certification::Exact,
        });
    }

    if let AlgebraHandle::SymplecticAssoc { genus } = handle {
        if m == 2 && genus >= 3 {
            let w2 = weight2_certified(genus, cache)?;
            let certification = w2.certification();
            return Ok(H1Result {
                algebra: handle.label(),
                weight: 2,
                ambient_dim: w2.ambient_dim,
                image_dim: w2.image_dim,
                quotient_dim: w2.quotient_dim,
                representatives: w2
                    .representatives
                    .iter()
                    .map(Derivation::from_dual_tensor_unchecked)
                    .collect(),
                certification,
            });
        }
        if m >= 3 && !allow_expensive {
            return Err(Error::Unsupported(format!(
                "weight {m} of the symplectic associative algebra grows combinatorially; \
                 rerun with the expensive-computations flag to force it"
            )));
        }
    }

    let pair_count: usize = default_degree_pairs(m)
        .iter()
        .map(|&(i, j)| {
            let a = handle.ambient_dim(i);
            if i == j {
                a * (a - 1) / 2
            } else {
                a * handle.ambient_dim(j)
            }
        })
        .sum();
    if pair_count > 20_000 && !allow_expensive {
        return Err(Error::Unsupported(format!(
            "{pair_count} bracket pairs at weight {m}; rerun with the expensive-computations flag"
        )));
    }

    let ambient_basis = handle.basis(m);
    let ambient_dim = ambient_basis.len();

    if pair_count <= 2500 {
        let image = bracket_image(handle, m)?;
        let mut augmented = image.clone();
        let mut representatives = Vec::new();
        for d in &ambient_basis {
            if !augmented.insert_reduce(&handle.coords(d)?) {
                representatives.push(d.clone());
            }
        }
        let image_dim = image.dim();
        return Ok(H1Result {
            algebra: handle.label(),
            weight: m,
            ambient_dim,
            image_dim,
            quotient_dim: ambient_dim - image_dim,
            representatives,
            certification: Certification::Exact,
        });
    }

    // Large instance: two independent primes, reported not certified.
    let (prime_a, prime_b) = certification_primes();
    let fpa = PrimeField::new(prime_a);
    let fpb = PrimeField::new(prime_b);
    let mut ech_a = Echelon::new(fpa);
    let mut ech_b = Echelon::new(fpb);
    chunked_bracket_coords(
        handle,
        &default_degree_pairs(m),
        |b| handle.coords(b),
        |v| {
            ech_a.insert_reduce(&reduce_mod_checked(&v, &fpa)?);
            ech_b.insert_reduce(&reduce_mod_checked(&v, &fpb)?);
            Ok(())
        },
    )?;
    if ech_a.dim() != ech_b.dim() {
        return Err(Error::RankDisagreement {
            prime_a,
            rank_a: ech_a.dim(),
            prime_b,
            rank_b: ech_b.dim(),
        });
    }
    let image_dim = ech_a.dim();
    let mut augmented = ech_a.clone();
    let mut representatives = Vec::new();
    for d in &ambient_basis {
        let v = reduce_mod_checked(&handle.coords(d)?, &fpa)?;
        if !augmented.insert_reduce(&v) {
            representatives.push(d.clone());
        }
    }
    Ok(H1Result {
        algebra: handle.label(),
        weight: m,
        ambient_dim,
        image_dim,
        quotient_dim: ambient_dim - image_dim,
        representatives,
        certification: Certification::TwoPrimesAgree { prime_a, prime_b },
    })
}

/// Exactness analysis of the weight-2 sequence
/// `wedge^2 (degree 1) -> degree 2 -> exterior square mod the two-form`.
#[derive(Clone, Debug)]
pub struct ExactnessOutcome {
    pub genus: u16,
    pub ambient_dim: usize,
    pub image_dim: usize,
    pub quotient_dim: usize,
    pub projected_c13_rank: usize,
    pub expected_projected_rank: usize,
    pub c13_pairs_checked: usize,
    pub c13_all_vanish: bool,
    pub exact: bool,
    pub certification: Certification,
}

pub fn verify_exact_sequence(g: u16, cache: &CacheStore) -> Result<ExactnessOutcome> {
    let expected_projected_rank = 2 * (g as usize) * (g as usize) - g as usize - 1;
    if g >= 3 {
        let w2 = weight2_certified(g, cache)?;
        return Ok(ExactnessOutcome {
            genus: g,
            ambient_dim: w2.ambient_dim,
            image_dim: w2.image_dim,
            quotient_dim: w2.quotient_dim,
            projected_c13_rank: w2.projected_c13_rank,
            expected_projected_rank,
            c13_pairs_checked: w2.c13_pairs_checked,
            c13_all_vanish: w2.c13_all_vanish,
            exact: w2.c13_all_vanish && w2.image_dim == w2.kernel_bound,
            certification: w2.certification(),
        });
    }

    let handle = AlgebraHandle::SymplecticAssoc { genus: g };
    let space = handle.space();
    let ambient: Vec<Tensor> = basis_a(g, 2)
        .iter()
        .map(|d| d.dual_tensor())
        .collect::<Result<_>>()?;
    let c13_images: Vec<Tensor> = ambient
        .iter()
        .map(|t| t.contract(1, 3))
        .collect::<Result<_>>()?;
    let projected_c13_rank = projected_wedge_rank(space, c13_images.iter())?;

    let mut image = Echelon::new(Rationals);
    let mut all_vanish = true;
    let pairs = chunked_bracket_coords(
        handle,
        &[(1usize, 1usize)],
        |bracket| {
            let dual = bracket.dual_tensor()?;
            let vanish = dual.contract(1, 3)?.is_zero();
            Ok((vanish, dual.to_sparse()))
        },
        |(vanish, v)| {
            all_vanish &= vanish;
            image.insert_reduce(&v);
            Ok(())
        },
    )?;
    let image_dim = image.dim();
    let ambient_dim = ambient.len();
    Ok(ExactnessOutcome {
        genus: g,
        ambient_dim,
        image_dim,
        quotient_dim: ambient_dim - image_dim,
        projected_c13_rank,
        expected_projected_rank,
        c13_pairs_checked: pairs,
        c13_all_vanish: all_vanish,
        exact: all_vanish && image_dim == ambient_dim - projected_c13_rank,
        certification: Certification::Exact,
    })
}

/// Does the bracket map the exterior square of the degree-1 Lie part onto
/// the degree-2 part?
#[derive(Clone, Debug)]
pub struct HainOutcome {
    pub genus: u16,
    pub degree1_dim: usize,
    pub degree2_dim: usize,
    pub image_dim: usize,
    pub surjective: bool,
    pub closure_ok: bool,
}

pub fn hain_surjectivity(g: u16) -> Result<HainOutcome> {
    let deg1 = basis_l(g, 1);
    let deg2 = basis_l(g, 2);
    let mut lie2_span = Echelon::new(Rationals);
    for d in &deg2 {
        lie2_span.insert_reduce(&d.dual_tensor()?.to_sparse());
    }
    let mut image = Echelon::new(Rationals);
    let mut closure_ok = true;
    for (a, d) in deg1.iter().enumerate() {
        for e in deg1.iter().skip(a + 1) {
            let v = d.bracket(e)?.dual_tensor()?.to_sparse();
            closure_ok &= lie2_span.contains(&v);
            image.insert_reduce(&v);
        }
    }
    Ok(HainOutcome {
        genus: g,
        degree1_dim: deg1.len(),
        degree2_dim: deg2.len(),
        image_dim: image.dim(),
        surjective: image.dim() == deg2.len(),
        closure_ok,
    })
}

// ---------------------------------------------------------------------------
// Polygon contractions.

/// Sparse matrix over the generator basis, as (row, column, value) entries.
type EntryMat = Vec<(u8, u8, i64)>;

fn mat_mul(a: &EntryMat, b: &EntryMat) -> EntryMat {
    let mut out: EntryMat = Vec::with_capacity(4);
    for &(ar, ac, av) in a {
        for &(br, bc, bv) in b {
            if ac != br {
                continue;
            }
            let v = av * bv;
            match out.iter_mut().find(|(r, c, _)| *r == ar && *c == bc) {
                Some(entry) => entry.2 += v,
                None => out.push((ar, bc, v)),
            }
        }
    }
    out.retain(|&(_, _, v)| v != 0);
    out
}

fn mat_trace(a: &EntryMat) -> i64 {
    a.iter().filter(|(r, c, _)| r == c).map(|&(_, _, v)| v).sum()
}

/// The pairing-absorbed factor matrices: factor `i` is the wedge (or
/// symmetrized product) of `x_i` and `y_{i+1}` (cyclic), with the skew
/// pairing folded into the second slot.
fn chain_factor_matrices(space: Space, k: usize, symmetric: bool) -> Vec<EntryMat> {
    let g = space.genus().expect("symplectic");
    debug_assert!(k <= g);
    (1..=k)
        .map(|i| {
            let next = if i == k { 1 } else { i + 1 };
            // Term x_i (x) y_{next}: the folded pairing hits x_{next}.
            // Term y_{next} (x) x_i (with the variant's sign): it hits y_i.
            let first = (space.x(i), space.x(next), -1i64);
            let second_sign = if symmetric { 1i64 } else { -1 };
            let second = (space.y(next), space.y(i), second_sign);
            vec![first, second]
        })
        .collect()
}

/// Signed sum over all factor orderings of the product of cycle traces; the
/// segment lengths split the positions into disjoint cycles.
fn contraction_sum(mats: &[EntryMat], segments: &[usize]) -> i64 {
    debug_assert_eq!(segments.iter().sum::<usize>(), mats.len());
    let perms = crate::tensor::permutations_with_sign(mats.len());
    let mut total = 0i64;
    for (perm, sign) in perms {
        let mut product = 1i64;
        let mut at = 0;
        for &len in segments {
            let mut chain = mats[perm[at] as usize].clone();
            for step in 1..len {
                chain = mat_mul(&chain, &mats[perm[at + step] as usize]);
                if chain.is_empty() {
                    break;
                }
            }
            product *= mat_trace(&chain);
            if product == 0 {
                break;
            }
            at += len;
        }
        total += sign as i64 * product;
    }
    total
}

/// The cyclic polygon contraction applied to the alternating sum of the
/// `k` wedge factors `x_i /\ y_{i+1}` (indices cyclic): slot 2 of each
/// factor is paired with slot 1 of the next, and the results are summed
/// with the sign of the factor ordering.
pub fn polygon_contract(k: usize, g: u16) -> Result<Scalar> {
    polygon_scalar(k, g, false)
}

/// Same construction with symmetrized factors `x_i . y_{i+1}`.
pub fn polygon_contract_symmetric(k: usize, g: u16) -> Result<Scalar> {
    polygon_scalar(k, g, true)
}

fn polygon_scalar(k: usize, g: u16, symmetric: bool) -> Result<Scalar> {
    if k < 2 || k > g as usize {
        return Err(Error::BadParameter(format!(
            "polygon contraction needs 2 <= k <= g, got k={k}, g={g}"
        )));
    }
    let mats = chain_factor_matrices(Space::symplectic(g), k, symmetric);
    Ok(sc(contraction_sum(&mats, &[k])))
}

/// The contraction of two disjoint polygons with `k1` and `k2` vertices
/// applied to the same alternating sum on `k1 + k2` factors.
pub fn disconnected_contract(k1: usize, k2: usize, g: u16) -> Result<Scalar> {
    let k = k1 + k2;
    if k1 < 2 || k2 < 2 || k > g as usize {
        return Err(Error::BadParameter(format!(
            "disconnected contraction needs k1, k2 >= 2 and k1+k2 <= g, got {k1}+{k2}, g={g}"
        )));
    }
    let mats = chain_factor_matrices(Space::symplectic(g), k, false);
    Ok(sc(contraction_sum(&mats, &[k1, k2])))
}

/// Weight-2 abelianization of the positive-degree plain derivation algebra,
/// reported against the predicted square dimension.
pub fn conjecture_probe(n: u16, cache: &CacheStore) -> Result<(H1Result, usize)> {
    let handle = AlgebraHandle::PlainAssoc { dim: n };
    let result = h1_weight(handle, 2, cache, false)?;
    Ok((result, (n as usize) * (n as usize)))
}

/// Rank of the slot-1/3 contraction over a family of degree-2 derivations.
pub fn c13_span_dim(derivations: &[Derivation]) -> Result<usize> {
    let mut span = Echelon::new(Rationals);
    for d in derivations {
        span.insert_reduce(&d.c13()?.to_sparse());
    }
    Ok(span.dim())
}
