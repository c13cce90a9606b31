//! Subsets of a finite universe, collections of subsets, and the algebra of
//! conditions F0, F1 and F2.
//!
//! A [`SubsetMask`] stores a subset as a bit pattern: bit `i` set means point
//! `i` belongs to the subset. A [`SubsetCollection`] keeps its members sorted
//! ascending by bit-pattern value with no duplicates, so structural equality
//! of collections is equality of their member lists.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Environment variable that overrides the collection enumeration cap.
pub const MAX_ENUM_ENV: &str = "CENTEREDKIT_MAX_ENUM";

/// A nonempty finite set of points `0..size`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Universe {
    size: usize,
}

impl Universe {
    pub const MAX_SIZE: usize = 24;

    pub fn new(size: usize) -> Result<Self> {
        if size == 0 || size > Self::MAX_SIZE {
            return Err(Error::InvalidUniverse {
                size,
                max: Self::MAX_SIZE,
            });
        }
        Ok(Universe { size })
    }

    #[inline]
    pub fn size(self) -> usize {
        self.size
    }

    /// The whole universe as a mask.
    #[inline]
    pub fn full(self) -> SubsetMask {
        SubsetMask((1u32 << self.size) - 1)
    }

    /// Number of subsets, `2^size`.
    #[inline]
    pub fn subset_count(self) -> u64 {
        1u64 << self.size
    }

    pub fn points(self) -> std::ops::Range<usize> {
        0..self.size
    }

    /// Every subset, ascending by bit-pattern value.
    pub fn subsets(self) -> impl Iterator<Item = SubsetMask> + Clone {
        (0..(1u32 << self.size)).map(SubsetMask)
    }

    pub fn check_point(self, point: usize) -> Result<()> {
        if point < self.size {
            Ok(())
        } else {
            Err(Error::PointOutOfRange {
                point,
                size: self.size,
            })
        }
    }

    pub fn check_mask(self, mask: SubsetMask) -> Result<()> {
        if mask.0 & !self.full().0 == 0 {
            Ok(())
        } else {
            Err(Error::MaskOutOfRange {
                bits: mask.0,
                size: self.size,
            })
        }
    }

    pub fn singleton(self, point: usize) -> Result<SubsetMask> {
        self.check_point(point)?;
        Ok(SubsetMask::singleton(point))
    }
}

/// A subset of a universe as a bit pattern.
///
/// Masks do not remember their universe; validity is checked when a mask is
/// placed into a [`SubsetCollection`] or otherwise paired with a [`Universe`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetMask(u32);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    #[inline]
    pub fn from_bits(universe: Universe, bits: u32) -> Result<Self> {
        let mask = SubsetMask(bits);
        universe.check_mask(mask)?;
        Ok(mask)
    }

    pub fn from_points(universe: Universe, points: &[usize]) -> Result<Self> {
        let mut bits = 0u32;
        for &p in points {
            universe.check_point(p)?;
            bits |= 1 << p;
        }
        Ok(SubsetMask(bits))
    }

    #[inline]
    pub(crate) fn singleton(point: usize) -> Self {
        SubsetMask(1 << point)
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn contains(self, point: usize) -> bool {
        point < 32 && self.0 & (1 << point) != 0
    }

    #[inline]
    pub fn is_subset_of(self, other: SubsetMask) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn intersection(self, other: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 & other.0)
    }

    #[inline]
    pub fn union(self, other: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 | other.0)
    }

    #[inline]
    pub fn difference(self, other: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 & !other.0)
    }

    #[inline]
    pub fn complement(self, universe: Universe) -> SubsetMask {
        SubsetMask(universe.full().0 & !self.0)
    }

    pub fn with_point(self, point: usize) -> SubsetMask {
        SubsetMask(self.0 | (1 << point))
    }

    /// Member points in ascending order.
    pub fn points(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..32usize).filter(move |&i| bits & (1 << i) != 0)
    }

    pub fn to_points(self) -> Vec<usize> {
        self.points().collect()
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.points().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

/// A finite set of subsets of one universe, canonically ordered.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetCollection {
    universe: Universe,
    members: Vec<SubsetMask>,
}

impl SubsetCollection {
    pub fn new(universe: Universe, members: impl IntoIterator<Item = SubsetMask>) -> Result<Self> {
        let mut members: Vec<SubsetMask> = members.into_iter().collect();
        for &m in &members {
            universe.check_mask(m)?;
        }
        members.sort_unstable();
        members.dedup();
        Ok(SubsetCollection { universe, members })
    }

    pub fn empty(universe: Universe) -> Self {
        SubsetCollection {
            universe,
            members: Vec::new(),
        }
    }

    pub fn singleton(universe: Universe, member: SubsetMask) -> Result<Self> {
        Self::new(universe, [member])
    }

    /// Builds a collection from point lists, e.g. `&[&[0, 1], &[1, 2]]`.
    pub fn from_point_sets<S: AsRef<[usize]>>(universe: Universe, sets: &[S]) -> Result<Self> {
        let members = sets
            .iter()
            .map(|s| SubsetMask::from_points(universe, s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(universe, members)
    }

    /// Caller guarantees the members are valid, sorted and deduplicated.
    pub(crate) fn from_sorted_unchecked(universe: Universe, members: Vec<SubsetMask>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        SubsetCollection { universe, members }
    }

    #[inline]
    pub fn universe(&self) -> Universe {
        self.universe
    }

    #[inline]
    pub fn members(&self) -> &[SubsetMask] {
        &self.members
    }

    pub fn iter(&self) -> std::slice::Iter<'_, SubsetMask> {
        self.members.iter()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.members.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    #[inline]
    pub fn contains(&self, mask: SubsetMask) -> bool {
        self.members.binary_search(&mask).is_ok()
    }

    /// `self ⊆ other` as sets of subsets.
    pub fn is_subcollection_of(&self, other: &SubsetCollection) -> bool {
        self.members.iter().all(|&m| other.contains(m))
    }

    /// Adds members, keeping the canonical order.
    pub fn with_members(&self, extra: impl IntoIterator<Item = SubsetMask>) -> Result<Self> {
        Self::new(self.universe, self.members.iter().copied().chain(extra))
    }

    pub fn to_point_sets(&self) -> Vec<Vec<usize>> {
        self.members.iter().map(|m| m.to_points()).collect()
    }

    /// Intersection of all members, or the whole universe when empty.
    pub fn total_intersection(&self) -> SubsetMask {
        self.members
            .iter()
            .fold(self.universe.full(), |acc, &m| acc.intersection(m))
    }
}

impl<'a> IntoIterator for &'a SubsetCollection {
    type Item = &'a SubsetMask;
    type IntoIter = std::slice::Iter<'a, SubsetMask>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

impl fmt::Display for SubsetCollection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, p) in m.points().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Which of the three collection kinds a collection belongs to.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, serde::Serialize)]
pub struct CollectionClass {
    pub is_raster: bool,
    pub is_filterbase: bool,
    pub is_filter: bool,
}

/// Constraint used to narrow [`enumerate_collections`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CollectionKind {
    Raster,
    Filterbase,
    Filter,
}

impl CollectionClass {
    pub fn is(&self, kind: CollectionKind) -> bool {
        match kind {
            CollectionKind::Raster => self.is_raster,
            CollectionKind::Filterbase => self.is_filterbase,
            CollectionKind::Filter => self.is_filter,
        }
    }
}

fn require_nonempty(p: &SubsetCollection) -> Result<()> {
    if p.is_empty() {
        Err(Error::EmptyCollection)
    } else {
        Ok(())
    }
}

/// Condition F0: every finite subfamily has nonempty intersection.
///
/// For a finite collection the whole family is itself a finite subfamily and
/// its intersection is contained in every other subfamily's intersection, so
/// the check reduces to the intersection of all members.
pub fn satisfies_f0(p: &SubsetCollection) -> Result<bool> {
    require_nonempty(p)?;
    Ok(!p.total_intersection().is_empty())
}

/// Condition F1: upward closed. The empty collection is vacuously closed.
pub fn satisfies_f1(p: &SubsetCollection) -> bool {
    let full = p.universe.full();
    // Upward closure is generated by adding one point at a time.
    p.members.iter().all(|&m| {
        full.difference(m)
            .points()
            .all(|q| p.contains(m.with_point(q)))
    })
}

/// Condition F2: every pair of members contains a member below their intersection.
pub fn satisfies_f2(p: &SubsetCollection) -> Result<bool> {
    require_nonempty(p)?;
    let members = p.members();
    for (i, &a) in members.iter().enumerate() {
        for &b in &members[i..] {
            let meet = a.intersection(b);
            if !members.iter().any(|c| c.is_subset_of(meet)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn classify_collection(p: &SubsetCollection) -> Result<CollectionClass> {
    let f0 = satisfies_f0(p)?;
    let f1 = satisfies_f1(p);
    let f2 = satisfies_f2(p)?;
    Ok(CollectionClass {
        is_raster: f0 && f1,
        is_filterbase: f0 && f2,
        is_filter: f0 && f1 && f2,
    })
}

/// `P↑`: every subset of the universe that contains some member.
pub fn up_closure(p: &SubsetCollection) -> SubsetCollection {
    if p.is_empty() {
        return p.clone();
    }
    let minimal = minimal_members(p);
    let members = p
        .universe
        .subsets()
        .filter(|a| minimal.iter().any(|m| m.is_subset_of(*a)))
        .collect();
    SubsetCollection::from_sorted_unchecked(p.universe, members)
}

/// `P∩`: intersections of all nonempty finite subfamilies. The empty family
/// is not included, so the universe is only added if it is already a member.
pub fn cap_closure(p: &SubsetCollection) -> SubsetCollection {
    let generators = p.members();
    let mut closed: BTreeSet<SubsetMask> = generators.iter().copied().collect();
    let mut frontier: Vec<SubsetMask> = generators.to_vec();
    while let Some(s) = frontier.pop() {
        for &g in generators {
            let t = s.intersection(g);
            if closed.insert(t) {
                frontier.push(t);
            }
        }
    }
    SubsetCollection::from_sorted_unchecked(p.universe, closed.into_iter().collect())
}

/// The filter generated by `p`, `P^{∩↑}`. Rejects collections violating F0,
/// whose generated collection would contain the empty set.
pub fn generated_filter(p: &SubsetCollection) -> Result<SubsetCollection> {
    if !satisfies_f0(p)? {
        return Err(Error::NotF0);
    }
    Ok(up_closure(&cap_closure(p)))
}

/// `p1 ⪯ p2`: every member of `p2` contains some member of `p1`.
pub fn finer(p1: &SubsetCollection, p2: &SubsetCollection) -> bool {
    p2.members
        .iter()
        .all(|&n| p1.members.iter().any(|m| m.is_subset_of(n)))
}

/// Ultrafilter test: a filter such that whenever the universe is split into
/// three disjoint (possibly empty) parts, exactly one part is a member.
pub fn is_ultrafilter(p: &SubsetCollection) -> bool {
    if p.is_empty() || !classify_collection(p).map(|c| c.is_filter).unwrap_or(false) {
        return false;
    }
    every_three_partition_has_one_member(p)
}

/// Whether every split of the universe into three labelled parts has exactly
/// one part in `p`. Parts are enumerated by assigning each point a label in
/// `0..3`.
pub fn every_three_partition_has_one_member(p: &SubsetCollection) -> bool {
    let n = p.universe.size();
    let mut labels = vec![0u8; n];
    loop {
        let mut parts = [SubsetMask::EMPTY; 3];
        for (x, &l) in labels.iter().enumerate() {
            parts[l as usize] = parts[l as usize].with_point(x);
        }
        if parts.iter().filter(|&&a| p.contains(a)).count() != 1 {
            return false;
        }
        // odometer over {0,1,2}^n
        let mut i = 0;
        loop {
            if i == n {
                return true;
            }
            labels[i] += 1;
            if labels[i] < 3 {
                break;
            }
            labels[i] = 0;
            i += 1;
        }
    }
}

/// The textbook ultrafilter test: a filter containing exactly one of each
/// subset and its complement.
pub fn is_ultrafilter_by_complement(p: &SubsetCollection) -> bool {
    if p.is_empty() || !classify_collection(p).map(|c| c.is_filter).unwrap_or(false) {
        return false;
    }
    let u = p.universe;
    u.subsets()
        .all(|a| p.contains(a) != p.contains(a.complement(u)))
}

/// All supersets of a nonempty subset.
pub fn principal_filter(a: SubsetMask, universe: Universe) -> Result<SubsetCollection> {
    universe.check_mask(a)?;
    if a.is_empty() {
        return Err(Error::EmptySubset);
    }
    Ok(up_closure(&SubsetCollection::singleton(universe, a)?))
}

/// Members with no strictly smaller member below them.
fn minimal_members(p: &SubsetCollection) -> Vec<SubsetMask> {
    p.members
        .iter()
        .copied()
        .filter(|&m| !p.members.iter().any(|&o| o != m && o.is_subset_of(m)))
        .collect()
}

/// Limit on the universe size for exhaustive collection enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationCap {
    max_points: usize,
}

impl EnumerationCap {
    pub const DEFAULT_POINTS: usize = 4;
    /// Above this the number of collections reaches 2^64.
    pub const HARD_LIMIT: usize = 5;

    pub fn new(max_points: usize) -> Result<Self> {
        if max_points > Self::HARD_LIMIT {
            return Err(Error::CapExceeded {
                what: "collection enumeration universe size",
                requested: max_points as u64,
                limit: Self::HARD_LIMIT as u64,
            });
        }
        Ok(EnumerationCap { max_points })
    }

    /// Reads `CENTEREDKIT_MAX_ENUM`, clamped to the hard limit.
    pub fn from_env() -> Self {
        let max_points = std::env::var(MAX_ENUM_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .map(|v| v.min(Self::HARD_LIMIT))
            .unwrap_or(Self::DEFAULT_POINTS);
        EnumerationCap { max_points }
    }

    pub fn max_points(&self) -> usize {
        self.max_points
    }

    pub fn check(&self, universe: Universe) -> Result<()> {
        if universe.size() > self.max_points {
            return Err(Error::CapExceeded {
                what: "collection enumeration universe size",
                requested: universe.size() as u64,
                limit: self.max_points as u64,
            });
        }
        Ok(())
    }
}

impl Default for EnumerationCap {
    fn default() -> Self {
        EnumerationCap {
            max_points: Self::DEFAULT_POINTS,
        }
    }
}

/// Iterator over every nonempty collection on a universe.
///
/// Collection `k` (counting from 1) has member `A` iff bit `A.bits()` of `k`
/// is set, so members come out already in canonical order.
#[derive(Clone, Debug)]
pub struct Collections {
    universe: Universe,
    kind: Option<CollectionKind>,
    next: u64,
    end: u64,
}

impl Collections {
    /// Total number of nonempty collections, `2^(2^n) − 1`.
    pub fn total(&self) -> u64 {
        self.end - 1
    }

    fn decode(&self, code: u64) -> SubsetCollection {
        let members = (0..64u32)
            .filter(|&i| code & (1u64 << i) != 0)
            .map(SubsetMask)
            .collect();
        SubsetCollection::from_sorted_unchecked(self.universe, members)
    }
}

impl Iterator for Collections {
    type Item = SubsetCollection;

    fn next(&mut self) -> Option<SubsetCollection> {
        while self.next < self.end {
            let code = self.next;
            self.next += 1;
            let p = self.decode(code);
            match self.kind {
                None => return Some(p),
                Some(kind) => {
                    if classify_collection(&p).map(|c| c.is(kind)).unwrap_or(false) {
                        return Some(p);
                    }
                }
            }
        }
        None
    }
}

/// Every nonempty collection on `universe`, optionally only those of one kind.
pub fn enumerate_collections(
    universe: Universe,
    kind: Option<CollectionKind>,
    cap: EnumerationCap,
) -> Result<Collections> {
    cap.check(universe)?;
    let subsets = universe.subset_count();
    // subsets ≤ 32 under the hard limit, so this does not overflow
    let end = 1u64 << subsets;
    Ok(Collections {
        universe,
        kind,
        next: 1,
        end,
    })
}
