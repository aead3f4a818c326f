//! Exhaustive generation of small QB-algebras and checks of the structural
//! facts about clouds, parity and irreducibility.
//!
//! The general search uses that joins and meets factor through the square
//! map: QL1 and QL4 give `x ∨ y = (x ∨ x) ∨ (y ∨ y)`, and with QL5 also
//! `x ∧ y = (x ∨ x) ∧ (y ∨ y)`. An algebra is therefore fixed by its Boolean
//! algebra of regular elements, the map `ρ(x) = x ∨ x` on irregular elements
//! and an involution on the irregular elements. Every such candidate is run
//! through the full axiom check before it is kept.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Element, FiniteAlgebra};
use crate::quotients::{
    are_isomorphic, count_automorphisms, embed_into_product, find_isomorphism, is_irreducible, make_irreducible,
};

pub const MAX_GENERAL_SIZE: usize = 6;
pub const MAX_FLAT_SIZE: usize = 16;
/// Listing every labelled flat algebra is only done up to this size.
pub const MAX_LABELED_FLAT_SIZE: usize = 12;

#[derive(Debug, Error)]
pub enum EnumerationError {
    #[error("size {size} is outside the supported range 1..={limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("could not write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

/// One structural claim evaluated on one algebra.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimCheck {
    pub claim: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureViolation {
    pub claim: String,
    /// Position of the offending algebra in `iso_classes`.
    pub algebra: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationReport {
    pub size: usize,
    pub flat_only: bool,
    pub up_to_iso: bool,
    /// Number of algebras on the carrier `0..n` with zero at index 0.
    pub total_labeled: u64,
    /// Class representatives, or every labelled algebra when `up_to_iso` is false.
    pub iso_classes: Vec<FiniteAlgebra>,
    pub violations: Vec<StructureViolation>,
}

fn check_size(n: usize, limit: usize) -> Result<(), EnumerationError> {
    if n == 0 || n > limit {
        return Err(EnumerationError::TooLarge { size: n, limit });
    }
    Ok(())
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Every involution on `0..m`, as image vectors.
pub fn involutions(m: usize) -> Vec<Vec<usize>> {
    fn go(perm: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let Some(i) = perm.iter().position(|&p| p == usize::MAX) else {
            out.push(perm.clone());
            return;
        };
        perm[i] = i;
        go(perm, out);
        for j in i + 1..perm.len() {
            if perm[j] == usize::MAX {
                perm[i] = j;
                perm[j] = i;
                go(perm, out);
                perm[j] = usize::MAX;
            }
        }
        perm[i] = usize::MAX;
    }
    let mut out = Vec::new();
    go(&mut vec![usize::MAX; m], &mut out);
    out
}

fn flat_names(n: usize) -> Vec<String> {
    (0..n).map(|i| if i == 0 { "0".to_string() } else { format!("e{i}") }).collect()
}

fn flat_algebra(star: &[Element]) -> FiniteAlgebra {
    FiniteAlgebra::from_fn(flat_names(star.len()), |_, _| 0, |_, _| 0, |x| star[x], 0, 0)
        .expect("flat tables are well formed")
}

/// `|Aut|` of a flat algebra with `k` star-fixed points: permutations of the
/// non-zero fixed points times the symmetries of the star pairs.
fn flat_automorphisms(n: usize, k: usize) -> u64 {
    let m = (n - k) / 2;
    factorial(k - 1) * (1u64 << m) * factorial(m)
}

/// Flat QB-algebras of size `n`.
///
/// Up to isomorphism, candidates are one involution per fixed-point count,
/// once with 0 fixed and once with 0 moved; validation discards the latter.
pub fn enumerate_flat(n: usize, up_to_iso: bool) -> Result<EnumerationReport, EnumerationError> {
    check_size(n, MAX_FLAT_SIZE)?;
    let mut classes: Vec<FiniteAlgebra> = Vec::new();
    let mut total_labeled = 0u64;
    if up_to_iso {
        for k in (0..=n).filter(|k| (n - k).is_multiple_of(2)) {
            let mut candidates = Vec::new();
            if k >= 1 {
                // fixed points 0..k, then pairs
                candidates.push((0..n).map(|x| pair_layout(x, k)).collect::<Vec<_>>());
            }
            if n - k >= 2 {
                // 0 paired with 1, fixed points after the pairs
                let pairs_end = n - k;
                candidates.push((0..n).map(|x| if x < pairs_end { x ^ 1 } else { x }).collect());
            }
            for star in candidates {
                let a = flat_algebra(&star);
                if a.is_qb_algebra() {
                    total_labeled += factorial(n - 1) / flat_automorphisms(n, k);
                    classes.push(a);
                }
            }
        }
    } else {
        if n > MAX_LABELED_FLAT_SIZE {
            return Err(EnumerationError::TooLarge { size: n, limit: MAX_LABELED_FLAT_SIZE });
        }
        for star in involutions(n) {
            let a = flat_algebra(&star);
            if a.is_qb_algebra() {
                classes.push(a);
            }
        }
        total_labeled = classes.len() as u64;
    }
    Ok(finish(n, true, up_to_iso, total_labeled, classes))
}

fn pair_layout(x: usize, fixed: usize) -> usize {
    if x < fixed {
        x
    } else if (x - fixed).is_multiple_of(2) {
        x + 1
    } else {
        x - 1
    }
}

fn general_names(r: usize, n: usize) -> Vec<String> {
    let regular: Vec<String> = match r {
        1 => vec!["0".into()],
        2 => vec!["0".into(), "1".into()],
        _ => (0..r)
            .map(|m| match m {
                0 => "0".to_string(),
                m if m == r - 1 => "1".to_string(),
                m => format!("r{m}"),
            })
            .collect(),
    };
    let irregular = (r..n).map(|i| format!("u{}", i - r + 1));
    regular.into_iter().chain(irregular).collect()
}

/// The algebra with regular part `2^k` on bitmasks `0..r`, squares `rho` and
/// involution `sigma` on the irregular elements `r..n`.
fn assemble(n: usize, r: usize, rho: &[usize], sigma: &[usize]) -> FiniteAlgebra {
    let square = |x: Element| if x < r { x } else { rho[x - r] };
    let top = r - 1;
    FiniteAlgebra::from_fn(
        general_names(r, n),
        |x, y| square(x) | square(y),
        |x, y| square(x) & square(y),
        |x| if x < r { x ^ top } else { r + sigma[x - r] },
        0,
        top,
    )
    .expect("candidate tables are well formed")
}

type BucketKey = Vec<(bool, bool, usize, usize)>;

/// Cheap isomorphism invariant used to bucket candidates before searching.
fn bucket_key(a: &FiniteAlgebra) -> BucketKey {
    let mut key: BucketKey = a
        .elements()
        .map(|x| {
            let square = a.join(x, x);
            (
                a.is_regular(x),
                a.star(x) == x,
                a.cloud_of(x).len(),
                a.elements().filter(|&y| a.join(y, y) == square).count(),
            )
        })
        .collect();
    key.sort_unstable();
    key
}

fn dedupe(candidates: impl IntoIterator<Item = FiniteAlgebra>) -> Vec<FiniteAlgebra> {
    let mut buckets: HashMap<BucketKey, Vec<usize>> = HashMap::new();
    let mut classes: Vec<FiniteAlgebra> = Vec::new();
    for a in candidates {
        let bucket = buckets.entry(bucket_key(&a)).or_default();
        if bucket.iter().all(|&i| find_isomorphism(&classes[i], &a).is_none()) {
            bucket.push(classes.len());
            classes.push(a);
        }
    }
    classes
}

fn permutations_fixing_zero(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: &mut Vec<usize>, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            prefix.push(x);
            go(rest, prefix, out);
            prefix.pop();
            rest.insert(i, x);
        }
    }
    let mut out = Vec::new();
    go(&mut (1..n).collect(), &mut vec![0], &mut out);
    out
}

/// All QB-algebras of size `n ≤ 6`.
pub fn enumerate_all(n: usize, up_to_iso: bool) -> Result<EnumerationReport, EnumerationError> {
    check_size(n, MAX_GENERAL_SIZE)?;
    let mut candidates = Vec::new();
    let mut r = 1;
    while r <= n {
        let m = n - r;
        let sigmas = involutions(m);
        let mut rho = vec![0usize; m];
        loop {
            for sigma in &sigmas {
                let a = assemble(n, r, &rho, sigma);
                if a.is_qb_algebra() {
                    candidates.push(a);
                }
            }
            // odometer over ρ : irregular → regular
            let mut i = 0;
            while i < m && rho[i] == r - 1 {
                rho[i] = 0;
                i += 1;
            }
            if i == m {
                break;
            }
            rho[i] += 1;
        }
        r *= 2;
    }
    let classes = dedupe(candidates);
    let total_labeled: u64 = classes.iter().map(|a| factorial(n - 1) / count_automorphisms(a) as u64).sum();
    if up_to_iso {
        return Ok(finish(n, false, true, total_labeled, classes));
    }
    let mut seen = HashSet::new();
    let mut labeled = Vec::new();
    for a in &classes {
        for perm in permutations_fixing_zero(n) {
            let b = a.relabel(&perm);
            if seen.insert(b.table_key()) {
                labeled.push(b);
            }
        }
    }
    debug_assert_eq!(labeled.len() as u64, total_labeled);
    Ok(finish(n, false, false, labeled.len() as u64, labeled))
}

fn finish(
    n: usize,
    flat_only: bool,
    up_to_iso: bool,
    total_labeled: u64,
    iso_classes: Vec<FiniteAlgebra>,
) -> EnumerationReport {
    let violations = iso_classes
        .iter()
        .enumerate()
        .flat_map(|(i, a)| {
            verify_structure(a)
                .into_iter()
                .filter(|c| !c.passed)
                .map(move |c| StructureViolation { claim: c.claim, algebra: i })
        })
        .collect();
    EnumerationReport { size: n, flat_only, up_to_iso, total_labeled, iso_classes, violations }
}

pub const CLAIM_CLOUD_UNIQUE: &str = "each cloud contains exactly one regular element";
pub const CLAIM_CLOUDS_PARTITION: &str = "the clouds partition the carrier";
pub const CLAIM_STAR_CLOUD: &str = "star maps cl(r) bijectively onto cl(r*)";
pub const CLAIM_NO_FIXED_POINT: &str = "non-flat: star has no fixed point";
pub const CLAIM_DISJOINT: &str = "non-flat: cl(r) and cl(r*) are disjoint";
pub const CLAIM_REGULAR_EVEN: &str = "non-flat: |R(Q)| is even";
pub const CLAIM_ORDER_EVEN: &str = "non-flat: |Q| is even";
pub const CLAIM_IRREDUCIBLE_EMBEDS: &str = "irreducible: embeds into 2 x F with one star-fixed point";
pub const CLAIM_IRREDUCIBLE_SHAPE: &str = "irreducible: isomorphic to 2 x F_{2k+1} with |Q| = 4k+2";
pub const CLAIM_FLAT_OPS: &str = "flat: all joins and meets are 0";
pub const CLAIM_FLAT_REGULAR: &str = "flat: R(Q) = {0}";
pub const CLAIM_FLAT_CLOUD: &str = "flat: cl(0) = Q";
pub const CLAIM_FLAT_PARITY: &str = "flat: |Q| = m + k with m even, k star-fixed points";

/// Evaluates every structural claim that applies to `a`.
pub fn verify_structure(a: &FiniteAlgebra) -> Vec<ClaimCheck> {
    let mut out = Vec::new();
    let mut claim = |claim: &str, passed: bool| out.push(ClaimCheck { claim: claim.to_string(), passed });
    let regular = a.regular_elements();
    let squares_regular = a.elements().all(|x| a.is_regular(a.join(x, x)));

    claim(
        CLAIM_CLOUD_UNIQUE,
        squares_regular && a.elements().all(|x| a.cloud_of(x).iter().filter(|&&y| a.is_regular(y)).count() == 1),
    );
    let cloud_total: usize = regular.iter().map(|&r| a.cloud_of(r).len()).sum();
    claim(CLAIM_CLOUDS_PARTITION, squares_regular && cloud_total == a.size());
    claim(
        CLAIM_STAR_CLOUD,
        regular.iter().all(|&r| {
            let mut image: Vec<Element> = a.cloud_of(r).iter().map(|&y| a.star(y)).collect();
            image.sort_unstable();
            image.dedup();
            image == a.cloud_of(a.star(r))
        }),
    );

    if a.is_flat() {
        claim(
            CLAIM_FLAT_OPS,
            a.elements().all(|x| a.elements().all(|y| a.join(x, y) == a.zero() && a.meet(x, y) == a.zero())),
        );
        claim(CLAIM_FLAT_REGULAR, regular == [a.zero()]);
        claim(CLAIM_FLAT_CLOUD, a.cloud_of(a.zero()).len() == a.size());
        let k = a.elements().filter(|&x| a.star(x) == x).count();
        claim(CLAIM_FLAT_PARITY, k >= 1 && (a.size() - k).is_multiple_of(2) && (k != 1 || a.size() % 2 == 1));
        return out;
    }

    claim(CLAIM_NO_FIXED_POINT, a.elements().all(|x| a.star(x) != x));
    claim(
        CLAIM_DISJOINT,
        regular.iter().all(|&r| {
            let other = a.cloud_of(a.star(r));
            a.cloud_of(r).iter().all(|y| !other.contains(y))
        }),
    );
    claim(CLAIM_REGULAR_EVEN, regular.len().is_multiple_of(2));
    claim(CLAIM_ORDER_EVEN, a.size().is_multiple_of(2));

    if is_irreducible(a) == Ok(true) {
        let embeds = embed_into_product(a).is_ok_and(|e| {
            e.boolean_factor.size() == 2
                && e.flat_factor.elements().filter(|&x| e.flat_factor.star(x) == x).count() == 1
        });
        claim(CLAIM_IRREDUCIBLE_EMBEDS, embeds);
        let shape = a.size() % 4 == 2 && are_isomorphic(a, &make_irreducible((a.size() - 2) / 4));
        claim(CLAIM_IRREDUCIBLE_SHAPE, shape);
    }
    out
}

/// File name used by [`emit`] for the `index`-th algebra of size `n`.
pub fn emitted_file_name(n: usize, index: usize) -> String {
    format!("qba_n{n}_{index}.alg")
}

/// Writes every algebra of the report into `dir`, creating it if needed.
pub fn emit(report: &EnumerationReport, dir: &Path) -> Result<Vec<PathBuf>, EnumerationError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| EnumerationError::Io { path, source }
    };
    fs::create_dir_all(dir).map_err(io(dir))?;
    let mut written = Vec::new();
    for (i, a) in report.iso_classes.iter().enumerate() {
        let path = dir.join(emitted_file_name(report.size, i));
        fs::write(&path, a.to_file_string()).map_err(io(&path))?;
        written.push(path);
    }
    Ok(written)
}
