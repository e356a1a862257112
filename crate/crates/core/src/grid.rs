//! Node lists with a declared, checked ordering.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridOrdering {
    /// `0 < v_1 < ... < v_n`
    StrictlyIncreasingPositive,
    /// `v_1 < ... < v_n`
    StrictlyIncreasing,
    /// pairwise distinct, any order
    DistinctOnly,
}

impl GridOrdering {
    fn check(self, values: &[Rational]) -> std::result::Result<(), String> {
        match self {
            GridOrdering::StrictlyIncreasingPositive => {
                if let Some(v) = values.iter().find(|v| !v.is_positive()) {
                    return Err(format!("value {v} is not positive"));
                }
                check_increasing(values)
            }
            GridOrdering::StrictlyIncreasing => check_increasing(values),
            GridOrdering::DistinctOnly => {
                let mut seen = BTreeSet::new();
                for v in values {
                    if !seen.insert(v) {
                        return Err(format!("value {v} is repeated"));
                    }
                }
                Ok(())
            }
        }
    }
}

fn check_increasing(values: &[Rational]) -> std::result::Result<(), String> {
    match values.windows(2).position(|w| w[0] >= w[1]) {
        Some(i) => Err(format!(
            "values are not strictly increasing at positions {} and {} ({} >= {})",
            i + 1,
            i + 2,
            values[i],
            values[i + 1]
        )),
        None => Ok(()),
    }
}

/// Nonempty list of rational nodes whose ordering flag has been verified.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Grid {
    values: Vec<Rational>,
    ordering: GridOrdering,
}

impl Grid {
    pub fn new(values: Vec<Rational>, ordering: GridOrdering) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Grid("a grid needs at least one node".into()));
        }
        ordering.check(&values).map_err(Error::Grid)?;
        Ok(Grid { values, ordering })
    }

    /// Grid with the default strict ordering `0 < v_1 < ... < v_n`.
    pub fn strict(values: Vec<Rational>) -> Result<Self> {
        Grid::new(values, GridOrdering::StrictlyIncreasingPositive)
    }

    pub fn from_ints(values: &[i64], ordering: GridOrdering) -> Result<Self> {
        Grid::new(values.iter().map(|&v| Rational::from_integer(v)).collect(), ordering)
    }

    /// Comma-separated rational literals, e.g. `1,3/2,4`.
    pub fn parse(s: &str, ordering: GridOrdering) -> Result<Self> {
        let values = s
            .split(',')
            .map(|t| t.trim().parse::<Rational>())
            .collect::<Result<Vec<_>>>()?;
        Grid::new(values, ordering)
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn ordering(&self) -> GridOrdering {
        self.ordering
    }

    /// Re-checks the values against a stricter ordering.
    pub fn require(&self, ordering: GridOrdering) -> Result<()> {
        ordering.check(&self.values).map_err(Error::Grid)
    }

    pub fn to_f64(&self) -> Result<Vec<f64>> {
        self.values.iter().map(Rational::to_f64).collect()
    }
}

impl<'de> Deserialize<'de> for Grid {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            values: Vec<Rational>,
            ordering: GridOrdering,
        }
        let raw = Raw::deserialize(d)?;
        Grid::new(raw.values, raw.ordering).map_err(serde::de::Error::custom)
    }
}

/// The `(x, y)` node pair that parameterizes `S = [1 + x_i y_j]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridParams {
    x: Grid,
    y: Grid,
}

impl GridParams {
    pub fn new(x: Grid, y: Grid) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::Grid(format!(
                "x has {} nodes but y has {}",
                x.len(),
                y.len()
            )));
        }
        Ok(GridParams { x, y })
    }

    pub fn symmetric(x: Grid) -> Self {
        GridParams { y: x.clone(), x }
    }

    pub fn x(&self) -> &Grid {
        &self.x
    }

    pub fn y(&self) -> &Grid {
        &self.y
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn require(&self, ordering: GridOrdering) -> Result<()> {
        self.x.require(ordering)?;
        self.y.require(ordering)
    }
}

/// `n` distinct positive rationals with numerators and denominators in
/// `1..=50`, sorted increasingly.
pub fn random_increasing_grid<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Grid {
    let mut set = BTreeSet::new();
    while set.len() < n {
        let p = rng.random_range(1..=50);
        let q = rng.random_range(1..=50);
        set.insert(Rational::new(p, q).expect("nonzero denominator"));
    }
    Grid::strict(set.into_iter().collect()).expect("sorted distinct positive values")
}

/// Increasing positive grid starting in `(0, 1/5]` with steps in
/// `[3/4, 3/2]`. Its Hadamard powers keep every minor well separated from
/// zero relative to the row norms, which float sign checks need.
pub fn random_spread_grid<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Grid {
    let mut v = Rational::new(rng.random_range(1..=4), 20).expect("nonzero denominator");
    let mut values = Vec::with_capacity(n);
    for _ in 0..n {
        values.push(v.clone());
        v += Rational::new(rng.random_range(3..=6), 4).expect("nonzero denominator");
    }
    Grid::strict(values).expect("increasing positive values")
}

/// `n` pairwise distinct rationals of either sign, in random order.
pub fn random_distinct_grid<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Grid {
    let mut set = BTreeSet::new();
    while set.len() < n {
        let p = rng.random_range(-50..=50);
        let q = rng.random_range(1..=50);
        set.insert(Rational::new(p, q).expect("nonzero denominator"));
    }
    let mut values: Vec<_> = set.into_iter().collect();
    values.shuffle(rng);
    Grid::new(values, GridOrdering::DistinctOnly).expect("distinct values")
}
