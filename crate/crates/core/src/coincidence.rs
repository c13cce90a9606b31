//! Functions between finite universes, coincidence sets, and the two relations
//! a collection induces on a function space: exact (`{f=g} ∈ P`) and weak
//! (`{f=g}` contains a member of `P`).

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::setalgebra::{classify_collection, SubsetCollection, SubsetMask, Universe};
use crate::spaces::{centered_at_unchecked, CenteredSpace};

/// A total function stored as its value table.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteFunction {
    domain: Universe,
    codomain: Universe,
    values: Vec<usize>,
}

impl FiniteFunction {
    pub fn new(domain: Universe, codomain: Universe, values: Vec<usize>) -> Result<Self> {
        if values.len() != domain.size() {
            return Err(Error::FunctionArity {
                len: values.len(),
                expected: domain.size(),
            });
        }
        if let Some((position, &value)) = values
            .iter()
            .enumerate()
            .find(|(_, &v)| v >= codomain.size())
        {
            return Err(Error::FunctionValue {
                position,
                value,
                size: codomain.size(),
            });
        }
        Ok(FiniteFunction {
            domain,
            codomain,
            values,
        })
    }

    pub fn identity(universe: Universe) -> Self {
        FiniteFunction {
            domain: universe,
            codomain: universe,
            values: universe.points().collect(),
        }
    }

    pub fn constant(domain: Universe, codomain: Universe, value: usize) -> Result<Self> {
        codomain.check_point(value)?;
        Ok(FiniteFunction {
            domain,
            codomain,
            values: vec![value; domain.size()],
        })
    }

    #[inline]
    pub fn domain(&self) -> Universe {
        self.domain
    }

    #[inline]
    pub fn codomain(&self) -> Universe {
        self.codomain
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// Panics if `x` is outside the domain.
    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.values[x]
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &FiniteFunction) -> Result<FiniteFunction> {
        if inner.codomain != self.domain {
            return Err(Error::UniverseMismatch {
                expected: self.domain.size(),
                found: inner.codomain.size(),
            });
        }
        Ok(FiniteFunction {
            domain: inner.domain,
            codomain: self.codomain,
            values: inner.values.iter().map(|&v| self.values[v]).collect(),
        })
    }

    pub fn image(&self, a: SubsetMask) -> SubsetMask {
        a.points()
            .fold(SubsetMask::EMPTY, |acc, x| acc.with_point(self.values[x]))
    }

    pub fn preimage(&self, b: SubsetMask) -> SubsetMask {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, &v)| b.contains(v))
            .fold(SubsetMask::EMPTY, |acc, (x, _)| acc.with_point(x))
    }
}

impl Serialize for FiniteFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.values.serialize(serializer)
    }
}

/// `|codomain|^|domain|`, or `None` on overflow.
pub fn function_count(domain: Universe, codomain: Universe) -> Option<u64> {
    (codomain.size() as u64).checked_pow(domain.size() as u32)
}

/// All functions `domain → codomain`, lexicographic on value tables.
#[derive(Clone, Debug)]
pub struct FunctionSpace {
    domain: Universe,
    codomain: Universe,
    next: Option<Vec<usize>>,
}

impl FunctionSpace {
    pub fn new(domain: Universe, codomain: Universe) -> Self {
        FunctionSpace {
            domain,
            codomain,
            next: Some(vec![0; domain.size()]),
        }
    }
}

impl Iterator for FunctionSpace {
    type Item = FiniteFunction;

    fn next(&mut self) -> Option<FiniteFunction> {
        let values = self.next.take()?;
        let mut succ = values.clone();
        let mut i = succ.len();
        let k = self.codomain.size();
        self.next = loop {
            if i == 0 {
                break None;
            }
            i -= 1;
            succ[i] += 1;
            if succ[i] < k {
                break Some(succ);
            }
            succ[i] = 0;
        };
        Some(FiniteFunction {
            domain: self.domain,
            codomain: self.codomain,
            values,
        })
    }
}

/// Limit on the size of a function space enumerated for relation analysis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FunctionCap {
    max_functions: u64,
}

impl FunctionCap {
    pub const DEFAULT: u64 = 256;
    pub const HARD_LIMIT: u64 = 4096;

    pub fn new(max_functions: u64) -> Result<Self> {
        if max_functions > Self::HARD_LIMIT {
            return Err(Error::CapExceeded {
                what: "function space size",
                requested: max_functions,
                limit: Self::HARD_LIMIT,
            });
        }
        Ok(FunctionCap { max_functions })
    }

    pub fn max_functions(&self) -> u64 {
        self.max_functions
    }
}

impl Default for FunctionCap {
    fn default() -> Self {
        FunctionCap {
            max_functions: Self::DEFAULT,
        }
    }
}

/// Every function `domain → codomain`, refusing spaces larger than `cap`.
pub fn all_functions(
    domain: Universe,
    codomain: Universe,
    cap: FunctionCap,
) -> Result<Vec<FiniteFunction>> {
    let count = function_count(domain, codomain).unwrap_or(u64::MAX);
    if count > cap.max_functions {
        return Err(Error::CapExceeded {
            what: "function space size",
            requested: count,
            limit: cap.max_functions,
        });
    }
    Ok(FunctionSpace::new(domain, codomain).collect())
}

fn check_pair(f: &FiniteFunction, g: &FiniteFunction) -> Result<()> {
    if f.domain != g.domain {
        return Err(Error::UniverseMismatch {
            expected: f.domain.size(),
            found: g.domain.size(),
        });
    }
    if f.codomain != g.codomain {
        return Err(Error::UniverseMismatch {
            expected: f.codomain.size(),
            found: g.codomain.size(),
        });
    }
    Ok(())
}

/// `{x | f(x) = g(x)}`.
pub fn coincidence_set(f: &FiniteFunction, g: &FiniteFunction) -> Result<SubsetMask> {
    check_pair(f, g)?;
    Ok(coincidence_unchecked(f, g))
}

#[inline]
fn coincidence_unchecked(f: &FiniteFunction, g: &FiniteFunction) -> SubsetMask {
    f.values
        .iter()
        .zip(&g.values)
        .enumerate()
        .filter(|(_, (a, b))| a == b)
        .fold(SubsetMask::EMPTY, |acc, (x, _)| acc.with_point(x))
}

fn check_domain(p: &SubsetCollection, f: &FiniteFunction) -> Result<()> {
    if p.universe() != f.domain {
        return Err(Error::UniverseMismatch {
            expected: p.universe().size(),
            found: f.domain.size(),
        });
    }
    Ok(())
}

/// Which relation a collection induces on a function space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RelationMode {
    /// The coincidence set is a member.
    Exact,
    /// The coincidence set contains a member.
    Weak,
}

impl RelationMode {
    #[inline]
    pub fn holds(self, p: &SubsetCollection, coincidence: SubsetMask) -> bool {
        match self {
            RelationMode::Exact => p.contains(coincidence),
            RelationMode::Weak => p.iter().any(|m| m.is_subset_of(coincidence)),
        }
    }
}

/// `{f=g} ∈ p`.
pub fn related(p: &SubsetCollection, f: &FiniteFunction, g: &FiniteFunction) -> Result<bool> {
    check_pair(f, g)?;
    check_domain(p, f)?;
    Ok(RelationMode::Exact.holds(p, coincidence_unchecked(f, g)))
}

/// Some member of `p` lies inside `{f=g}`.
pub fn weakly_related(
    p: &SubsetCollection,
    f: &FiniteFunction,
    g: &FiniteFunction,
) -> Result<bool> {
    check_pair(f, g)?;
    check_domain(p, f)?;
    Ok(RelationMode::Weak.holds(p, coincidence_unchecked(f, g)))
}

/// Evidence for a failed relation property.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Counterexample {
    NotReflexive {
        f: FiniteFunction,
    },
    NotSymmetric {
        f: FiniteFunction,
        g: FiniteFunction,
    },
    NotTransitive {
        f: FiniteFunction,
        g: FiniteFunction,
        h: FiniteFunction,
    },
    /// Every pair is related; `f`, `g` is a related pair with the smallest
    /// coincidence set.
    Trivial {
        f: FiniteFunction,
        g: FiniteFunction,
    },
}

impl Counterexample {
    /// Re-evaluates the witness against the relation.
    pub fn confirms(&self, p: &SubsetCollection, mode: RelationMode) -> Result<bool> {
        let rel = |a: &FiniteFunction, b: &FiniteFunction| -> Result<bool> {
            check_pair(a, b)?;
            check_domain(p, a)?;
            Ok(mode.holds(p, coincidence_unchecked(a, b)))
        };
        Ok(match self {
            Counterexample::NotReflexive { f } => !rel(f, f)?,
            Counterexample::NotSymmetric { f, g } => rel(f, g)? && !rel(g, f)?,
            Counterexample::NotTransitive { f, g, h } => rel(f, g)? && rel(g, h)? && !rel(f, h)?,
            Counterexample::Trivial { f, g } => rel(f, g)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub reflexive: bool,
    pub symmetric: bool,
    pub transitive: bool,
    pub nontrivial: bool,
    /// Witness for the first failed property in the order reflexive,
    /// symmetric, transitive, nontrivial.
    pub counterexample: Option<Counterexample>,
}

impl RelationReport {
    pub fn is_equivalence(&self) -> bool {
        self.reflexive && self.symmetric && self.transitive
    }

    pub fn is_nontrivial_equivalence(&self) -> bool {
        self.is_equivalence() && self.nontrivial
    }
}

/// Square relation matrix with one bitset row per function.
struct RelationMatrix {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl RelationMatrix {
    fn build(functions: &[FiniteFunction], p: &SubsetCollection, mode: RelationMode) -> Self {
        let n = functions.len();
        let words = n.div_ceil(64).max(1);
        let mut rows = vec![0u64; n * words];
        for (i, f) in functions.iter().enumerate() {
            for (j, g) in functions.iter().enumerate() {
                if mode.holds(p, coincidence_unchecked(f, g)) {
                    rows[i * words + j / 64] |= 1 << (j % 64);
                }
            }
        }
        RelationMatrix { n, words, rows }
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i * self.words + j / 64] & (1 << (j % 64)) != 0
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.rows[i * self.words..(i + 1) * self.words]
    }

    fn first_reflexive_failure(&self) -> Option<usize> {
        (0..self.n).find(|&i| !self.get(i, i))
    }

    fn first_symmetric_failure(&self) -> Option<(usize, usize)> {
        (0..self.n)
            .flat_map(|i| (0..self.n).map(move |j| (i, j)))
            .find(|&(i, j)| self.get(i, j) && !self.get(j, i))
    }

    /// Lexicographically first `(i, j, k)` with `i~j`, `j~k` and not `i~k`.
    /// Transitivity at `i` is `row(j) ⊆ row(i)` for every `j` in `row(i)`.
    fn first_transitive_failure(&self) -> Option<(usize, usize, usize)> {
        for i in 0..self.n {
            let ri = self.row(i);
            for j in (0..self.n).filter(|&j| self.get(i, j)) {
                let rj = self.row(j);
                for (w, (&a, &b)) in rj.iter().zip(ri).enumerate() {
                    let missing = a & !b;
                    if missing != 0 {
                        return Some((i, j, w * 64 + missing.trailing_zeros() as usize));
                    }
                }
            }
        }
        None
    }

    fn first_unrelated_pair(&self) -> Option<(usize, usize)> {
        (0..self.n)
            .flat_map(|i| (0..self.n).map(move |j| (i, j)))
            .find(|&(i, j)| !self.get(i, j))
    }
}

/// Analyses the relation `p` induces on an explicit list of functions.
///
/// All functions must share `p`'s universe as domain and one codomain.
pub fn analyze_functions(
    p: &SubsetCollection,
    mode: RelationMode,
    functions: &[FiniteFunction],
) -> Result<RelationReport> {
    if let Some(f) = functions.first() {
        check_domain(p, f)?;
        for g in functions {
            check_pair(f, g)?;
        }
    }
    let m = RelationMatrix::build(functions, p, mode);
    let refl = m.first_reflexive_failure();
    let sym = m.first_symmetric_failure();
    let trans = m.first_transitive_failure();
    let unrelated = m.first_unrelated_pair();

    let f = |i: usize| functions[i].clone();
    let counterexample = if let Some(i) = refl {
        Some(Counterexample::NotReflexive { f: f(i) })
    } else if let Some((i, j)) = sym {
        Some(Counterexample::NotSymmetric { f: f(i), g: f(j) })
    } else if let Some((i, j, k)) = trans {
        Some(Counterexample::NotTransitive {
            f: f(i),
            g: f(j),
            h: f(k),
        })
    } else if unrelated.is_none() {
        trivial_witness(functions).map(|(i, j)| Counterexample::Trivial { f: f(i), g: f(j) })
    } else {
        None
    };

    Ok(RelationReport {
        reflexive: refl.is_none(),
        symmetric: sym.is_none(),
        transitive: trans.is_none(),
        nontrivial: unrelated.is_some(),
        counterexample,
    })
}

fn trivial_witness(functions: &[FiniteFunction]) -> Option<(usize, usize)> {
    let n = functions.len();
    (0..n)
        .flat_map(|i| (i..n).map(move |j| (i, j)))
        .min_by_key(|&(i, j)| coincidence_unchecked(&functions[i], &functions[j]).len())
}

/// Exhaustive analysis of the relation `p` induces on `codomain^universe`.
pub fn analyze_relation(
    p: &SubsetCollection,
    codomain: Universe,
    mode: RelationMode,
    cap: FunctionCap,
) -> Result<RelationReport> {
    let functions = all_functions(p.universe(), codomain, cap)?;
    analyze_functions(p, mode, &functions)
}

fn check_witness_inputs(
    domain: Universe,
    codomain: Universe,
    a: SubsetMask,
    b: SubsetMask,
    colors: &[usize],
) -> Result<()> {
    domain.check_mask(a)?;
    domain.check_mask(b)?;
    for (i, &y) in colors.iter().enumerate() {
        codomain
            .check_point(y)
            .map_err(|_| Error::NonDistinctColors)?;
        if colors[..i].contains(&y) {
            return Err(Error::NonDistinctColors);
        }
    }
    Ok(())
}

fn tabulate(domain: Universe, codomain: Universe, rule: impl Fn(usize) -> usize) -> FiniteFunction {
    FiniteFunction {
        domain,
        codomain,
        values: domain.points().map(rule).collect(),
    }
}

/// Three functions whose coincidence sets are `{f=h} = a`, `{h=g} = b` and
/// `{f=g} = a∩b`, built from three distinct colors.
pub fn witness_triple_filter(
    domain: Universe,
    codomain: Universe,
    a: SubsetMask,
    b: SubsetMask,
    colors: [usize; 3],
) -> Result<(FiniteFunction, FiniteFunction, FiniteFunction)> {
    check_witness_inputs(domain, codomain, a, b, &colors)?;
    let [y1, y2, y3] = colors;
    let meet = a.intersection(b);
    let join = a.union(b);
    let only_a = a.difference(b);
    let f = tabulate(domain, codomain, |x| {
        if meet.contains(x) {
            y1
        } else if join.contains(x) {
            y2
        } else {
            y3
        }
    });
    let g = tabulate(domain, codomain, |x| if join.contains(x) { y1 } else { y2 });
    let h = tabulate(
        domain,
        codomain,
        |x| if only_a.contains(x) { y2 } else { y1 },
    );
    Ok((f, g, h))
}

/// Three functions with `{g=h} = a`, `b ⊆ {f=g}` and `{f=h} = a∩b`, built
/// from two distinct colors.
pub fn witness_triple_filterbase(
    domain: Universe,
    codomain: Universe,
    a: SubsetMask,
    b: SubsetMask,
    colors: [usize; 2],
) -> Result<(FiniteFunction, FiniteFunction, FiniteFunction)> {
    check_witness_inputs(domain, codomain, a, b, &colors)?;
    let [y1, y2] = colors;
    let join = a.union(b);
    let only_b = b.difference(a);
    let f = tabulate(domain, codomain, |x| if b.contains(x) { y1 } else { y2 });
    let g = tabulate(domain, codomain, |x| if join.contains(x) { y1 } else { y2 });
    let h = tabulate(
        domain,
        codomain,
        |x| if only_b.contains(x) { y2 } else { y1 },
    );
    Ok((f, g, h))
}

fn check_germ_inputs(space: &CenteredSpace, x: usize, target: &CenteredSpace) -> Result<()> {
    space.universe().check_point(x)?;
    if target.universe().size() < 2 {
        return Err(Error::CodomainTooSmall {
            needed: 2,
            size: target.universe().size(),
        });
    }
    let filterbase = classify_collection(space.nu(x))
        .map(|c| c.is_filterbase)
        .unwrap_or(false);
    if !filterbase {
        return Err(Error::NotFilterbase { point: x });
    }
    Ok(())
}

/// `C_x(X,Y)`: every function into `target` that is centered at `x`.
pub fn centered_functions_at(
    space: &CenteredSpace,
    x: usize,
    target: &CenteredSpace,
    cap: FunctionCap,
) -> Result<Vec<FiniteFunction>> {
    space.universe().check_point(x)?;
    let all = all_functions(space.universe(), target.universe(), cap)?;
    Ok(all
        .into_iter()
        .filter(|f| centered_at_unchecked(f, space, target, x))
        .collect())
}

/// The germ of `f` at `x`: all `g ∈ C_x(X,Y)` agreeing with `f` on some probe
/// of `ν(x)`. Germs exist only where `ν(x)` is a filterbase.
pub fn germ_class(
    space: &CenteredSpace,
    x: usize,
    f: &FiniteFunction,
    target: &CenteredSpace,
    cap: FunctionCap,
) -> Result<Vec<FiniteFunction>> {
    check_germ_inputs(space, x, target)?;
    if f.domain != space.universe() || f.codomain != target.universe() {
        return Err(Error::UniverseMismatch {
            expected: space.universe().size(),
            found: f.domain.size(),
        });
    }
    if !centered_at_unchecked(f, space, target, x) {
        return Err(Error::NotCenteredAt { point: x });
    }
    let probes = space.nu(x);
    Ok(centered_functions_at(space, x, target, cap)?
        .into_iter()
        .filter(|g| RelationMode::Weak.holds(probes, coincidence_unchecked(f, g)))
        .collect())
}

/// Splits `C_x(X,Y)` into germ classes, ordered by their first member.
pub fn germ_partition(
    space: &CenteredSpace,
    x: usize,
    target: &CenteredSpace,
    cap: FunctionCap,
) -> Result<Vec<Vec<FiniteFunction>>> {
    check_germ_inputs(space, x, target)?;
    let probes = space.nu(x);
    let mut classes: Vec<Vec<FiniteFunction>> = Vec::new();
    for g in centered_functions_at(space, x, target, cap)? {
        match classes
            .iter_mut()
            .find(|c| RelationMode::Weak.holds(probes, coincidence_unchecked(&c[0], &g)))
        {
            Some(class) => class.push(g),
            None => classes.push(vec![g]),
        }
    }
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setalgebra::{enumerate_collections, principal_filter, EnumerationCap};

    fn u(n: usize) -> Universe {
        Universe::new(n).unwrap()
    }

    fn coll(n: usize, sets: &[&[usize]]) -> SubsetCollection {
        SubsetCollection::from_point_sets(u(n), sets).unwrap()
    }

    fn func(d: usize, c: usize, v: &[usize]) -> FiniteFunction {
        FiniteFunction::new(u(d), u(c), v.to_vec()).unwrap()
    }

    #[test]
    fn function_validation() {
        assert!(FiniteFunction::new(u(2), u(2), vec![0]).is_err());
        assert!(FiniteFunction::new(u(2), u(2), vec![0, 2]).is_err());
        let f = func(3, 2, &[1, 0, 1]);
        assert_eq!(f.image(u(3).full()).bits(), 0b11);
        assert_eq!(
            f.preimage(SubsetMask::from_bits(u(2), 0b10).unwrap())
                .bits(),
            0b101
        );
        let g = func(2, 3, &[2, 0]);
        assert_eq!(f.compose(&g).unwrap().values(), &[1, 1]);
        assert!(g.compose(&g).is_err());
    }

    #[test]
    fn function_space_is_lexicographic() {
        let all: Vec<Vec<usize>> = FunctionSpace::new(u(2), u(3))
            .map(|f| f.values().to_vec())
            .collect();
        assert_eq!(all.len(), 9);
        assert_eq!(all[0], vec![0, 0]);
        assert_eq!(all[1], vec![0, 1]);
        assert_eq!(all[8], vec![2, 2]);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert!(all_functions(u(9), u(2), FunctionCap::default()).is_err());
        assert!(FunctionCap::new(FunctionCap::HARD_LIMIT + 1).is_err());
    }

    #[test]
    fn coincidence_examples() {
        let f = func(3, 2, &[0, 1, 0]);
        assert_eq!(coincidence_set(&f, &f).unwrap(), u(3).full());
        let a = FiniteFunction::constant(u(3), u(2), 0).unwrap();
        let b = FiniteFunction::constant(u(3), u(2), 1).unwrap();
        assert!(coincidence_set(&a, &b).unwrap().is_empty());
        assert_eq!(coincidence_set(&f, &a).unwrap().to_points(), vec![0, 2]);
        assert!(coincidence_set(&f, &func(2, 2, &[0, 0])).is_err());
    }

    #[test]
    fn related_examples() {
        let p = coll(2, &[&[0]]);
        assert!(related(&p, &func(2, 2, &[0, 1]), &func(2, 2, &[0, 0])).unwrap());
        assert!(!related(&p, &func(2, 2, &[0, 1]), &func(2, 2, &[0, 1])).unwrap());
        let with_x = coll(2, &[&[0, 1]]);
        assert!(related(&with_x, &func(2, 2, &[1, 1]), &func(2, 2, &[1, 1])).unwrap());
        assert!(related(&p, &func(3, 2, &[0, 0, 0]), &func(3, 2, &[0, 0, 0])).is_err());
    }

    #[test]
    fn weakly_related_examples() {
        let p = coll(3, &[&[0, 1]]);
        assert!(weakly_related(&p, &func(3, 2, &[0, 1, 1]), &func(3, 2, &[0, 1, 0])).unwrap());
        let f = func(3, 2, &[1, 0, 1]);
        assert!(weakly_related(&coll(3, &[&[2]]), &f, &f).unwrap());
    }

    #[test]
    fn filter_gives_nontrivial_equivalence() {
        let x = u(3);
        let p = principal_filter(x.singleton(1).unwrap(), x).unwrap();
        let report =
            analyze_relation(&p, u(3), RelationMode::Exact, FunctionCap::default()).unwrap();
        assert!(report.is_nontrivial_equivalence());
        assert_eq!(report.counterexample, None);
    }

    #[test]
    fn sharpness_example() {
        let p = coll(4, &[&[0, 1], &[0, 2], &[0, 3]]);
        let class = classify_collection(&p).unwrap();
        assert!(!class.is_filterbase && !class.is_filter);
        // X is not a member, so the exact relation cannot be reflexive
        let literal =
            analyze_relation(&p, u(2), RelationMode::Exact, FunctionCap::default()).unwrap();
        assert!(!literal.reflexive);
        assert!(literal
            .counterexample
            .unwrap()
            .confirms(&p, RelationMode::Exact)
            .unwrap());

        let with_x = p.with_members([u(4).full()]).unwrap();
        assert!(!classify_collection(&with_x).unwrap().is_filterbase);
        let two =
            analyze_relation(&with_x, u(2), RelationMode::Exact, FunctionCap::default()).unwrap();
        assert!(two.is_nontrivial_equivalence(), "{two:?}");
        // with three colors transitivity breaks
        let three =
            analyze_relation(&with_x, u(3), RelationMode::Exact, FunctionCap::default()).unwrap();
        assert!(three.reflexive && !three.transitive);
        assert!(three
            .counterexample
            .unwrap()
            .confirms(&with_x, RelationMode::Exact)
            .unwrap());
    }

    #[test]
    fn empty_set_makes_weak_relation_trivial() {
        let p = coll(2, &[&[]]);
        let report =
            analyze_relation(&p, u(3), RelationMode::Weak, FunctionCap::default()).unwrap();
        assert!(report.is_equivalence());
        assert!(!report.nontrivial);
        let witness = report.counterexample.unwrap();
        match &witness {
            Counterexample::Trivial { f, g } => {
                assert!(coincidence_set(f, g).unwrap().is_empty())
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(witness.confirms(&p, RelationMode::Weak).unwrap());
    }

    #[test]
    fn counterexamples_recheck() {
        let cap = EnumerationCap::default();
        for p in enumerate_collections(u(2), None, cap).unwrap() {
            for mode in [RelationMode::Exact, RelationMode::Weak] {
                let r = analyze_relation(&p, u(3), mode, FunctionCap::default()).unwrap();
                let all_true = r.is_nontrivial_equivalence();
                assert_eq!(r.counterexample.is_none(), all_true);
                if let Some(c) = r.counterexample {
                    assert!(c.confirms(&p, mode).unwrap());
                }
            }
        }
    }

    #[test]
    fn single_color_codomain_is_trivial() {
        for p in enumerate_collections(u(2), None, EnumerationCap::default()).unwrap() {
            let functions = all_functions(u(2), u(1), FunctionCap::default()).unwrap();
            assert_eq!(functions.len(), 1);
            let r = analyze_functions(&p, RelationMode::Weak, &functions).unwrap();
            assert!(r.is_equivalence() && !r.nontrivial);
        }
    }

    #[test]
    fn witness_examples() {
        let x = u(2);
        let (f, g, h) = witness_triple_filter(x, u(3), x.full(), x.full(), [0, 1, 2]).unwrap();
        assert_eq!(f.values(), &[0, 0]);
        assert_eq!(f, g);
        assert_eq!(g, h);
        let (f, g, _) = witness_triple_filter(
            x,
            u(3),
            x.singleton(0).unwrap(),
            x.singleton(1).unwrap(),
            [0, 1, 2],
        )
        .unwrap();
        assert!(coincidence_set(&f, &g).unwrap().is_empty());
        assert_eq!(
            witness_triple_filter(x, u(3), x.full(), x.full(), [0, 0, 1]),
            Err(Error::NonDistinctColors)
        );
        assert_eq!(
            witness_triple_filterbase(x, u(3), x.full(), x.full(), [1, 1]),
            Err(Error::NonDistinctColors)
        );
        let (f, _, h) = witness_triple_filterbase(x, u(2), x.full(), x.full(), [0, 1]).unwrap();
        assert_eq!(coincidence_set(&f, &h).unwrap(), x.full());
        let (f, g, _) =
            witness_triple_filterbase(x, u(2), x.full(), SubsetMask::EMPTY, [1, 0]).unwrap();
        assert!(SubsetMask::EMPTY.is_subset_of(coincidence_set(&f, &g).unwrap()));
    }

    #[test]
    fn germs_of_discrete_structure() {
        let x = u(3);
        let space = CenteredSpace::discrete(x);
        let target = CenteredSpace::discrete(u(2));
        let cap = FunctionCap::default();
        let f = func(3, 2, &[1, 0, 0]);
        let class = germ_class(&space, 0, &f, &target, cap).unwrap();
        let expected: Vec<FiniteFunction> = centered_functions_at(&space, 0, &target, cap)
            .unwrap()
            .into_iter()
            .filter(|g| g.apply(0) == f.apply(0))
            .collect();
        assert_eq!(class, expected);
        assert_eq!(class.len(), 4);
    }

    #[test]
    fn germs_of_indiscrete_structure_are_singletons() {
        let x = u(3);
        let space = CenteredSpace::indiscrete(x);
        let target = CenteredSpace::indiscrete(u(2));
        let f = func(3, 2, &[0, 1, 1]);
        let class = germ_class(&space, 1, &f, &target, FunctionCap::default()).unwrap();
        assert_eq!(class, vec![f]);
    }

    #[test]
    fn germ_preconditions() {
        let x = u(2);
        let not_base = CenteredSpace::new(x, vec![coll(2, &[&[0]]), coll(2, &[])]).unwrap();
        let target = CenteredSpace::discrete(u(2));
        assert_eq!(
            germ_partition(&not_base, 1, &target, FunctionCap::default()),
            Err(Error::NotFilterbase { point: 1 })
        );
        assert!(germ_partition(
            &not_base,
            0,
            &CenteredSpace::discrete(u(1)),
            FunctionCap::default()
        )
        .is_err());
        // into a discrete target a non-constant map on ν(0) = {X} is not centered at 0
        let coarse = CenteredSpace::indiscrete(x);
        assert_eq!(
            germ_class(
                &coarse,
                0,
                &func(2, 2, &[0, 1]),
                &target,
                FunctionCap::default()
            ),
            Err(Error::NotCenteredAt { point: 0 })
        );
    }
}
