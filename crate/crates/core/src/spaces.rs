//! Centered spaces: a universe with a collection `ν(x)` of probe sets at each
//! point, every probe containing its point.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::coincidence::FiniteFunction;
use crate::error::{Error, Result};
use crate::setalgebra::{
    classify_collection, principal_filter, CollectionClass, SubsetCollection, SubsetMask, Universe,
};

/// Largest universe for which [`enumerate_spaces`] will list every structure.
pub const SPACE_ENUM_MAX_POINTS: usize = 3;

/// Largest universe for [`enumerate_raw_structures`], which also lists
/// assignments that break centering.
pub const RAW_ENUM_MAX_POINTS: usize = 2;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CenteredSpace {
    universe: Universe,
    nu: Vec<SubsetCollection>,
}

impl CenteredSpace {
    /// Builds a space and checks the centering condition.
    pub fn new(universe: Universe, nu: Vec<SubsetCollection>) -> Result<Self> {
        let space = Self::from_raw(universe, nu)?;
        validate_space(&space)?;
        Ok(space)
    }

    /// Builds a per-point assignment without checking centering. Shapes and
    /// universes are still checked. Use [`validate_space`] before treating the
    /// result as a space.
    pub fn from_raw(universe: Universe, nu: Vec<SubsetCollection>) -> Result<Self> {
        if nu.len() != universe.size() {
            return Err(Error::UniverseMismatch {
                expected: universe.size(),
                found: nu.len(),
            });
        }
        for p in &nu {
            if p.universe() != universe {
                return Err(Error::UniverseMismatch {
                    expected: universe.size(),
                    found: p.universe().size(),
                });
            }
        }
        Ok(CenteredSpace { universe, nu })
    }

    /// `ν(x) = {{x}}`.
    pub fn discrete(universe: Universe) -> Self {
        let nu = universe
            .points()
            .map(|x| {
                SubsetCollection::from_sorted_unchecked(universe, vec![SubsetMask::singleton(x)])
            })
            .collect();
        CenteredSpace { universe, nu }
    }

    /// `ν(x) = {X}`.
    pub fn indiscrete(universe: Universe) -> Self {
        let nu = universe
            .points()
            .map(|_| SubsetCollection::from_sorted_unchecked(universe, vec![universe.full()]))
            .collect();
        CenteredSpace { universe, nu }
    }

    /// Neighborhood filters of the discrete topology: all supersets of `{x}`.
    pub fn discrete_topology(universe: Universe) -> Self {
        let nu = universe
            .points()
            .map(|x| {
                principal_filter(SubsetMask::singleton(x), universe).expect("nonempty singleton")
            })
            .collect();
        CenteredSpace { universe, nu }
    }

    #[inline]
    pub fn universe(&self) -> Universe {
        self.universe
    }

    /// `ν(x)`. Panics if `x` is outside the universe.
    #[inline]
    pub fn nu(&self, x: usize) -> &SubsetCollection {
        &self.nu[x]
    }

    pub fn structure(&self) -> &[SubsetCollection] {
        &self.nu
    }

    /// Applies a collection operator at every point.
    pub fn map_points(&self, op: impl FnMut(&SubsetCollection) -> SubsetCollection) -> Self {
        CenteredSpace {
            universe: self.universe,
            nu: self.nu.iter().map(op).collect(),
        }
    }

    pub fn is_valid(&self) -> bool {
        validate_space(self).is_ok()
    }
}

impl fmt::Display for CenteredSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (x, p) in self.nu.iter().enumerate() {
            if x > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}: {p}")?;
        }
        write!(f, "}}")
    }
}

/// The five concrete categories, from most to least specific along each chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SpaceClass {
    Centered,
    Raster,
    Filterbase,
    PreTop,
    Top,
}

impl SpaceClass {
    pub const ALL: [SpaceClass; 5] = [
        SpaceClass::Centered,
        SpaceClass::Raster,
        SpaceClass::Filterbase,
        SpaceClass::PreTop,
        SpaceClass::Top,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SpaceClass::Centered => "Centered",
            SpaceClass::Raster => "Raster",
            SpaceClass::Filterbase => "Filterbase",
            SpaceClass::PreTop => "PreTop",
            SpaceClass::Top => "Top",
        }
    }

    /// Whether a single point's collection is admissible in this class.
    /// `Top` only constrains points individually as `PreTop` does.
    fn admits_point(self, p: &SubsetCollection) -> bool {
        if self == SpaceClass::Centered {
            return true;
        }
        let Ok(class) = classify_collection(p) else {
            return false;
        };
        match self {
            SpaceClass::Centered => true,
            SpaceClass::Raster => class.is_raster,
            SpaceClass::Filterbase => class.is_filterbase,
            SpaceClass::PreTop | SpaceClass::Top => class.is_filter,
        }
    }

    /// Membership test for a space.
    pub fn contains(self, s: &CenteredSpace) -> bool {
        if !s.is_valid() || !s.nu.iter().all(|p| self.admits_point(p)) {
            return false;
        }
        match self {
            SpaceClass::Top => is_topological(s).unwrap_or(false),
            _ => true,
        }
    }
}

impl fmt::Display for SpaceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SpaceClass {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "centered" => Ok(SpaceClass::Centered),
            "raster" => Ok(SpaceClass::Raster),
            "filterbase" => Ok(SpaceClass::Filterbase),
            "pretop" => Ok(SpaceClass::PreTop),
            "top" => Ok(SpaceClass::Top),
            other => Err(format!(
                "unknown category `{other}` (expected centered, raster, filterbase, pretop or top)"
            )),
        }
    }
}

/// Checks that every probe contains its point; reports the first violation.
pub fn validate_space(s: &CenteredSpace) -> Result<()> {
    for (x, p) in s.nu.iter().enumerate() {
        if let Some(n) = p.iter().find(|n| !n.contains(x)) {
            return Err(Error::CenteringViolation {
                point: x,
                set: n.to_string(),
            });
        }
    }
    Ok(())
}

/// Image collection `{f(N) | N ∈ p}`.
pub fn transport(f: &FiniteFunction, p: &SubsetCollection) -> Result<SubsetCollection> {
    if p.universe() != f.domain() {
        return Err(Error::UniverseMismatch {
            expected: f.domain().size(),
            found: p.universe().size(),
        });
    }
    SubsetCollection::new(f.codomain(), p.iter().map(|&n| f.image(n)))
}

fn check_map(f: &FiniteFunction, src: &CenteredSpace, dst: &CenteredSpace) -> Result<()> {
    if f.domain() != src.universe {
        return Err(Error::UniverseMismatch {
            expected: src.universe.size(),
            found: f.domain().size(),
        });
    }
    if f.codomain() != dst.universe {
        return Err(Error::UniverseMismatch {
            expected: dst.universe.size(),
            found: f.codomain().size(),
        });
    }
    Ok(())
}

/// `f(ν_src(x)) ⪯ ν_dst(f(x))`.
pub fn is_centered_at(
    f: &FiniteFunction,
    src: &CenteredSpace,
    dst: &CenteredSpace,
    x: usize,
) -> Result<bool> {
    check_map(f, src, dst)?;
    src.universe.check_point(x)?;
    Ok(centered_at_unchecked(f, src, dst, x))
}

pub(crate) fn centered_at_unchecked(
    f: &FiniteFunction,
    src: &CenteredSpace,
    dst: &CenteredSpace,
    x: usize,
) -> bool {
    // ⪯ without materialising the image collection
    let images: Vec<SubsetMask> = src.nu[x].iter().map(|&n| f.image(n)).collect();
    dst.nu[f.apply(x)]
        .iter()
        .all(|&m| images.iter().any(|i| i.is_subset_of(m)))
}

/// First point at which `f` fails to be centered, if any.
pub fn first_uncentered_point(
    f: &FiniteFunction,
    src: &CenteredSpace,
    dst: &CenteredSpace,
) -> Result<Option<usize>> {
    check_map(f, src, dst)?;
    Ok(src
        .universe
        .points()
        .find(|&x| !centered_at_unchecked(f, src, dst, x)))
}

/// Whether `f` is a morphism `src → dst`.
pub fn is_centered(f: &FiniteFunction, src: &CenteredSpace, dst: &CenteredSpace) -> Result<bool> {
    Ok(first_uncentered_point(f, src, dst)?.is_none())
}

/// Per-point class flags; an empty collection has every flag false.
pub fn point_classes(s: &CenteredSpace) -> Vec<CollectionClass> {
    s.nu.iter()
        .map(|p| classify_collection(p).unwrap_or_default())
        .collect()
}

/// The most specific of the five classes containing `s`.
pub fn classify_space(s: &CenteredSpace) -> Result<SpaceClass> {
    validate_space(s)?;
    let classes = point_classes(s);
    if classes.iter().all(|c| c.is_filter) {
        if is_topological(s)? {
            return Ok(SpaceClass::Top);
        }
        return Ok(SpaceClass::PreTop);
    }
    if classes.iter().all(|c| c.is_raster) {
        return Ok(SpaceClass::Raster);
    }
    if classes.iter().all(|c| c.is_filterbase) {
        return Ok(SpaceClass::Filterbase);
    }
    Ok(SpaceClass::Centered)
}

/// `τ(ν) = {U | ∀x ∈ U, U ∈ ν(x)}`.
pub fn open_sets(s: &CenteredSpace) -> SubsetCollection {
    let members = s
        .universe
        .subsets()
        .filter(|&u| u.points().all(|x| s.nu[x].contains(u)))
        .collect();
    SubsetCollection::from_sorted_unchecked(s.universe, members)
}

/// Neighborhood systems of a family of open sets: `N` is a neighborhood of
/// `x` when some open `U` satisfies `x ∈ U ⊆ N`.
pub fn neighborhood_space(open: &SubsetCollection) -> CenteredSpace {
    let universe = open.universe();
    let nu = universe
        .points()
        .map(|x| {
            let members = universe
                .subsets()
                .filter(|&n| open.iter().any(|&u| u.contains(x) && u.is_subset_of(n)))
                .collect();
            SubsetCollection::from_sorted_unchecked(universe, members)
        })
        .collect();
    CenteredSpace { universe, nu }
}

/// A pretopology is topological when regenerating neighborhoods from its open
/// sets gives back the same filters.
pub fn is_topological(s: &CenteredSpace) -> Result<bool> {
    for (x, p) in s.nu.iter().enumerate() {
        if !classify_collection(p).map(|c| c.is_filter).unwrap_or(false) {
            return Err(Error::NotFilter { point: x });
        }
    }
    Ok(neighborhood_space(&open_sets(s)) == *s)
}

/// A sequence given by a finite prefix followed by a repeating cycle.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct EventuallyPeriodicSequence {
    prefix: Vec<usize>,
    cycle: Vec<usize>,
}

impl EventuallyPeriodicSequence {
    pub fn new(universe: Universe, prefix: Vec<usize>, cycle: Vec<usize>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::EmptyCycle);
        }
        for &p in prefix.iter().chain(&cycle) {
            universe.check_point(p)?;
        }
        Ok(EventuallyPeriodicSequence { prefix, cycle })
    }

    pub fn constant(universe: Universe, x: usize) -> Result<Self> {
        Self::new(universe, Vec::new(), vec![x])
    }

    pub fn prefix(&self) -> &[usize] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[usize] {
        &self.cycle
    }

    /// The `n`-th term.
    pub fn term(&self, n: usize) -> usize {
        if n < self.prefix.len() {
            self.prefix[n]
        } else {
            self.cycle[(n - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// Points visited by the cycle.
    pub fn cycle_set(&self) -> SubsetMask {
        self.cycle
            .iter()
            .fold(SubsetMask::EMPTY, |acc, &p| acc.with_point(p))
    }

    /// Tail `{s_n | n ≥ k}`, listed directly over one full period past `k`.
    pub fn tail(&self, k: usize) -> SubsetMask {
        let end = k.max(self.prefix.len()) + self.cycle.len();
        (k..end).fold(SubsetMask::EMPTY, |acc, n| acc.with_point(self.term(n)))
    }
}

/// Whether every probe at `x` contains a tail of `seq`.
///
/// Tails shrink as `k` grows and from `k = prefix.len()` on every tail is
/// exactly the cycle's point set, so a probe contains some tail iff it
/// contains the cycle's point set.
pub fn converges(s: &CenteredSpace, seq: &EventuallyPeriodicSequence, x: usize) -> Result<bool> {
    s.universe.check_point(x)?;
    for &p in seq.prefix.iter().chain(&seq.cycle) {
        s.universe.check_point(p)?;
    }
    let cycle = seq.cycle_set();
    Ok(s.nu[x].iter().all(|n| cycle.is_subset_of(*n)))
}

/// Every valid space in `class` on `universe`, in a fixed order.
pub fn enumerate_spaces(universe: Universe, class: SpaceClass) -> Result<Vec<CenteredSpace>> {
    if universe.size() > SPACE_ENUM_MAX_POINTS {
        return Err(Error::CapExceeded {
            what: "space enumeration universe size",
            requested: universe.size() as u64,
            limit: SPACE_ENUM_MAX_POINTS as u64,
        });
    }
    let per_point: Vec<Vec<SubsetCollection>> = universe
        .points()
        .map(|x| {
            let centered: Vec<SubsetMask> = universe.subsets().filter(|m| m.contains(x)).collect();
            all_subcollections(universe, &centered)
                .filter(|p| class.admits_point(p))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for nu in cartesian(&per_point) {
        let space = CenteredSpace { universe, nu };
        if class != SpaceClass::Top || is_topological(&space).unwrap_or(false) {
            out.push(space);
        }
    }
    Ok(out)
}

/// Every per-point assignment of arbitrary collections, centered or not.
pub fn enumerate_raw_structures(universe: Universe) -> Result<Vec<CenteredSpace>> {
    if universe.size() > RAW_ENUM_MAX_POINTS {
        return Err(Error::CapExceeded {
            what: "raw structure enumeration universe size",
            requested: universe.size() as u64,
            limit: RAW_ENUM_MAX_POINTS as u64,
        });
    }
    let all: Vec<SubsetMask> = universe.subsets().collect();
    let candidates: Vec<SubsetCollection> = all_subcollections(universe, &all).collect();
    let per_point = vec![candidates; universe.size()];
    Ok(cartesian(&per_point)
        .map(|nu| CenteredSpace { universe, nu })
        .collect())
}

/// All subcollections of `pool`, the empty one first.
fn all_subcollections(
    universe: Universe,
    pool: &[SubsetMask],
) -> impl Iterator<Item = SubsetCollection> + '_ {
    (0u64..(1u64 << pool.len())).map(move |code| {
        let members = pool
            .iter()
            .enumerate()
            .filter(|(i, _)| code & (1 << i) != 0)
            .map(|(_, &m)| m)
            .collect();
        SubsetCollection::from_sorted_unchecked(universe, members)
    })
}

fn cartesian<T: Clone>(choices: &[Vec<T>]) -> impl Iterator<Item = Vec<T>> + '_ {
    let mut index = vec![0usize; choices.len()];
    let mut done = choices.iter().any(|c| c.is_empty());
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let item = index
            .iter()
            .zip(choices)
            .map(|(&i, c)| c[i].clone())
            .collect();
        // advance the last coordinate fastest
        let mut k = choices.len();
        loop {
            if k == 0 {
                done = true;
                break;
            }
            k -= 1;
            index[k] += 1;
            if index[k] < choices[k].len() {
                break;
            }
            index[k] = 0;
        }
        Some(item)
    })
}
