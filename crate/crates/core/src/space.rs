//! Finite distance structures.
//!
//! A [`FiniteSpace`] is a labelled point set with a symmetric table of
//! nonnegative rationals. The same table plays the role of `p` for partial
//! metrics and `m` for M-metrics; which axiom system it satisfies is decided
//! separately by [`crate::axioms`].

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{ParseRationalError, Rational};

/// Largest carrier supported. Point sets are 64-bit masks.
pub const MAX_POINTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("a space needs at least one point")]
    Empty,
    #[error("{0} points exceed the supported maximum of {MAX_POINTS}")]
    TooManyPoints(usize),
    #[error("duplicate point label `{0}`")]
    DuplicateLabel(String),
    #[error("table has {found} {what} but there are {expected} points")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("table is not symmetric: d({a},{b}) = {ab} but d({b},{a}) = {ba}")]
    AsymmetricTable {
        a: String,
        b: String,
        ab: String,
        ba: String,
    },
    #[error("negative entry d({a},{b}) = {value}")]
    NegativeEntry {
        a: String,
        b: String,
        value: Rational,
    },
    #[error("entry d({a},{b}): {source}")]
    BadEntry {
        a: String,
        b: String,
        source: ParseRationalError,
    },
    #[error("unknown point label `{0}`")]
    UnknownLabel(String),
    #[error("map is not total: no image for `{0}`")]
    NonTotalMap(String),
    #[error("potential is not total: no value for `{0}`")]
    NonTotalPotential(String),
    #[error("potential is negative at `{label}`: {value}")]
    NegativePotential { label: String, value: Rational },
}

/// A set of carrier indices, stored as a bit mask.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PointSet(u64);

impl PointSet {
    pub const EMPTY: PointSet = PointSet(0);

    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_POINTS);
        if n == MAX_POINTS {
            PointSet(u64::MAX)
        } else {
            PointSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        PointSet(1u64 << i)
    }

    pub fn from_bits(bits: u64) -> Self {
        PointSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1u64 << i;
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1u64 << i) != 0
    }

    pub fn union(self, other: PointSet) -> PointSet {
        PointSet(self.0 | other.0)
    }

    pub fn intersection(self, other: PointSet) -> PointSet {
        PointSet(self.0 & other.0)
    }

    pub fn is_subset(self, other: PointSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(i)
        })
    }
}

impl FromIterator<usize> for PointSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut set = PointSet::EMPTY;
        for i in iter {
            set.insert(i);
        }
        set
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A finite set with a symmetric nonnegative rational distance table.
///
/// Instances are validated on construction and immutable afterwards.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteSpace {
    points: Vec<String>,
    dist: Vec<Vec<Rational>>,
    index: HashMap<String, usize>,
}

impl FiniteSpace {
    /// Validates a labelled table.
    pub fn new(points: Vec<String>, table: Vec<Vec<Rational>>) -> Result<Self, SpaceError> {
        let n = points.len();
        if n == 0 {
            return Err(SpaceError::Empty);
        }
        if n > MAX_POINTS {
            return Err(SpaceError::TooManyPoints(n));
        }
        let mut index = HashMap::with_capacity(n);
        for (i, label) in points.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(SpaceError::DuplicateLabel(label.clone()));
            }
        }
        if table.len() != n {
            return Err(SpaceError::DimensionMismatch {
                what: "rows",
                expected: n,
                found: table.len(),
            });
        }
        if let Some(row) = table.iter().find(|row| row.len() != n) {
            return Err(SpaceError::DimensionMismatch {
                what: "columns in a row",
                expected: n,
                found: row.len(),
            });
        }
        for i in 0..n {
            for j in 0..n {
                if table[i][j].is_negative() {
                    return Err(SpaceError::NegativeEntry {
                        a: points[i].clone(),
                        b: points[j].clone(),
                        value: table[i][j].clone(),
                    });
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if table[i][j] != table[j][i] {
                    return Err(SpaceError::AsymmetricTable {
                        a: points[i].clone(),
                        b: points[j].clone(),
                        ab: table[i][j].to_string(),
                        ba: table[j][i].to_string(),
                    });
                }
            }
        }
        Ok(FiniteSpace {
            points,
            dist: table,
            index,
        })
    }

    /// Validates a table given as rational literals (`"3/4"`, `"10"`, `"0.1"`).
    pub fn parse<L, S>(points: &[L], rows: &[Vec<S>]) -> Result<Self, SpaceError>
    where
        L: AsRef<str>,
        S: AsRef<str>,
    {
        let labels: Vec<String> = points.iter().map(|p| p.as_ref().to_owned()).collect();
        let label_at = |i: usize| {
            labels
                .get(i)
                .cloned()
                .unwrap_or_else(|| format!("#{}", i + 1))
        };
        let mut table = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            let mut parsed = Vec::with_capacity(row.len());
            for (j, cell) in row.iter().enumerate() {
                let value = cell
                    .as_ref()
                    .parse()
                    .map_err(|source| SpaceError::BadEntry {
                        a: label_at(i),
                        b: label_at(j),
                        source,
                    })?;
                parsed.push(value);
            }
            table.push(parsed);
        }
        FiniteSpace::new(labels, table)
    }

    /// Builds a space on `labels` from a distance function.
    pub fn from_fn<L, F>(labels: &[L], mut f: F) -> Result<Self, SpaceError>
    where
        L: AsRef<str>,
        F: FnMut(usize, usize) -> Rational,
    {
        let n = labels.len();
        let table = (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect();
        FiniteSpace::new(
            labels.iter().map(|l| l.as_ref().to_owned()).collect(),
            table,
        )
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.points
    }

    pub fn label(&self, i: usize) -> &str {
        &self.points[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize, SpaceError> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| SpaceError::UnknownLabel(label.to_owned()))
    }

    /// Distance between carrier indices `i` and `j`.
    pub fn d(&self, i: usize, j: usize) -> &Rational {
        &self.dist[i][j]
    }

    /// Distance between two labelled points.
    pub fn dist(&self, x: &str, y: &str) -> Result<&Rational, SpaceError> {
        Ok(self.d(self.index_of(x)?, self.index_of(y)?))
    }

    pub fn table(&self) -> &[Vec<Rational>] {
        &self.dist
    }

    /// `m_{x,y}`, the smaller self-distance.
    pub fn self_min(&self, i: usize, j: usize) -> &Rational {
        Rational::min_of(&self.dist[i][i], &self.dist[j][j])
    }

    /// `M_{x,y}`, the larger self-distance.
    pub fn self_max(&self, i: usize, j: usize) -> &Rational {
        Rational::max_of(&self.dist[i][i], &self.dist[j][j])
    }

    /// `m(x,y) - m_{x,y}`.
    pub fn excess(&self, i: usize, j: usize) -> Rational {
        &self.dist[i][j] - self.self_min(i, j)
    }

    /// Self-distances `m(x,x)` and `m(y,y)` ordered as (min, max).
    pub fn m_extrema(&self, x: &str, y: &str) -> Result<ExtremaPair, SpaceError> {
        let (i, j) = (self.index_of(x)?, self.index_of(y)?);
        Ok(ExtremaPair {
            m_min: self.self_min(i, j).clone(),
            m_max: self.self_max(i, j).clone(),
        })
    }

    /// Points whose self-distance is zero.
    pub fn zero_self_set(&self) -> Vec<String> {
        self.labels_of(self.zero_self_indices())
    }

    pub fn zero_self_indices(&self) -> PointSet {
        (0..self.len())
            .filter(|&i| self.dist[i][i].is_zero())
            .collect()
    }

    pub fn full_set(&self) -> PointSet {
        PointSet::full(self.len())
    }

    pub fn labels_of(&self, set: PointSet) -> Vec<String> {
        set.iter().map(|i| self.points[i].clone()).collect()
    }

    pub fn set_of<L: AsRef<str>>(&self, labels: &[L]) -> Result<PointSet, SpaceError> {
        labels.iter().map(|l| self.index_of(l.as_ref())).collect()
    }
}

impl fmt::Debug for FiniteSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteSpace")
            .field("points", &self.points)
            .field("dist", &self.dist)
            .finish()
    }
}

/// `m_{x,y}` and `M_{x,y}` for a pair of points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremaPair {
    pub m_min: Rational,
    pub m_max: Rational,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceRepr {
    points: Vec<String>,
    m: Vec<Vec<Rational>>,
}

impl Serialize for FiniteSpace {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        SpaceRepr {
            points: self.points.clone(),
            m: self.dist.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FiniteSpace {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = SpaceRepr::deserialize(deserializer)?;
        FiniteSpace::new(repr.points, repr.m).map_err(serde::de::Error::custom)
    }
}

/// A total map between the carriers of two spaces, by index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointMap {
    images: Vec<usize>,
}

impl PointMap {
    /// Builds a map from `(source label, target label)` pairs. Every source
    /// point needs exactly one image; later pairs override earlier ones.
    pub fn from_pairs<'a, I>(
        source: &FiniteSpace,
        target: &FiniteSpace,
        pairs: I,
    ) -> Result<Self, SpaceError>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut images = vec![None; source.len()];
        for (from, to) in pairs {
            images[source.index_of(from)?] = Some(target.index_of(to)?);
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(i, img)| img.ok_or_else(|| SpaceError::NonTotalMap(source.label(i).to_owned())))
            .collect::<Result<_, _>>()?;
        Ok(PointMap { images })
    }

    pub fn from_map(
        source: &FiniteSpace,
        target: &FiniteSpace,
        map: &BTreeMap<String, String>,
    ) -> Result<Self, SpaceError> {
        Self::from_pairs(
            source,
            target,
            map.iter().map(|(a, b)| (a.as_str(), b.as_str())),
        )
    }

    /// Map from raw target indices. `images.len()` must equal the source size.
    pub fn from_indices(images: Vec<usize>) -> Self {
        PointMap { images }
    }

    pub fn identity(n: usize) -> Self {
        PointMap {
            images: (0..n).collect(),
        }
    }

    pub fn constant(n: usize, value: usize) -> Self {
        PointMap {
            images: vec![value; n],
        }
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// Label form, in source carrier order.
    pub fn to_labels(
        &self,
        source: &FiniteSpace,
        target: &FiniteSpace,
    ) -> BTreeMap<String, String> {
        self.images
            .iter()
            .enumerate()
            .map(|(i, &j)| (source.label(i).to_owned(), target.label(j).to_owned()))
            .collect()
    }
}

/// A nonnegative potential `φ` on the points of a space, by index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Potential {
    values: Vec<Rational>,
}

impl Potential {
    pub fn from_pairs<'a, I>(space: &FiniteSpace, pairs: I) -> Result<Self, SpaceError>
    where
        I: IntoIterator<Item = (&'a str, Rational)>,
    {
        let mut values = vec![None; space.len()];
        for (label, value) in pairs {
            values[space.index_of(label)?] = Some(value);
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| SpaceError::NonTotalPotential(space.label(i).to_owned())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_values(space, values)
    }

    /// Values in carrier order.
    pub fn from_values(space: &FiniteSpace, values: Vec<Rational>) -> Result<Self, SpaceError> {
        if values.len() != space.len() {
            let missing = space
                .labels()
                .get(values.len())
                .cloned()
                .unwrap_or_default();
            return Err(SpaceError::NonTotalPotential(missing));
        }
        if let Some(i) = values.iter().position(Rational::is_negative) {
            return Err(SpaceError::NegativePotential {
                label: space.label(i).to_owned(),
                value: values[i].clone(),
            });
        }
        Ok(Potential { values })
    }

    pub fn from_fn(
        space: &FiniteSpace,
        f: impl FnMut(usize) -> Rational,
    ) -> Result<Self, SpaceError> {
        Self::from_values(space, (0..space.len()).map(f).collect())
    }

    pub fn zero(n: usize) -> Self {
        Potential {
            values: vec![Rational::zero(); n],
        }
    }

    pub fn at(&self, i: usize) -> &Rational {
        &self.values[i]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn to_labels(&self, space: &FiniteSpace) -> BTreeMap<String, Rational> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| (space.label(i).to_owned(), v.clone()))
            .collect()
    }
}
