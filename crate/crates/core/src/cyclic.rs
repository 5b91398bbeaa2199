//! Cyclic quotient singularities `1/N(a_1, ..., a_n)`.
//!
//! A quotient type is identified with the lattice `Z^n + Z * (a/N)` and its
//! generating point `a/N` in the unit hypercube. Group elements are the
//! multiples of that point; the age of the `k`-th element is the sum of its
//! coordinates, and after normalization the minimal log-discrepancy is the
//! least age over the nonzero elements.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num::rational::Ratio;
use num::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::{primitive_generator, LatticeBasis};
use crate::scalar::{common_denominator, frac, gcd_all, int, parse_int, range, Int};

/// `1/N(a_1, ..., a_n)` with `0 <= a_i < N`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuotientType<T> {
    order: T,
    weights: Vec<T>,
}

impl<T: Int> QuotientType<T> {
    pub fn new(order: T, weights: Vec<T>) -> Result<Self> {
        if order < T::one() {
            return Err(Error::InvalidQuotient(format!(
                "order must be positive, got {order}"
            )));
        }
        if let Some(a) = weights.iter().find(|a| a.is_negative() || **a >= order) {
            return Err(Error::InvalidQuotient(format!(
                "weight {a} is outside 0..{order}"
            )));
        }
        Ok(QuotientType { order, weights })
    }

    /// Like [`QuotientType::new`] but reduces every weight modulo the order.
    pub fn reducing(order: T, weights: Vec<T>) -> Result<Self> {
        if order < T::one() {
            return Err(Error::InvalidQuotient(format!(
                "order must be positive, got {order}"
            )));
        }
        let weights = weights.into_iter().map(|a| a.mod_floor(&order)).collect();
        Ok(QuotientType { order, weights })
    }

    /// The trivial group acting on a point: what smooth inputs normalize to.
    pub fn trivial() -> Self {
        QuotientType {
            order: T::one(),
            weights: Vec::new(),
        }
    }

    pub fn order(&self) -> &T {
        &self.order
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.order.is_one()
    }

    /// `(a_1/N, ..., a_n/N)`.
    pub fn generating_point(&self) -> HypercubePoint<T> {
        HypercubePoint {
            coords: self
                .weights
                .iter()
                .map(|a| Ratio::new(a.clone(), self.order.clone()))
                .collect(),
        }
    }

    /// The `k`-th group element as a point of the hypercube.
    pub fn element(&self, k: &T) -> HypercubePoint<T> {
        HypercubePoint {
            coords: self
                .weights
                .iter()
                .map(|a| {
                    Ratio::new(
                        (k.clone() * a.clone()).mod_floor(&self.order),
                        self.order.clone(),
                    )
                })
                .collect(),
        }
    }

    /// `N * age(k)`, i.e. `sum_i (k a_i mod N)`, without range checks.
    pub fn age_numerator(&self, k: &T) -> T {
        self.weights.iter().fold(T::zero(), |acc, a| {
            acc + (k.clone() * a.clone()).mod_floor(&self.order)
        })
    }

    /// `sum_i {k a_i / N}` for `1 <= k <= N - 1`.
    pub fn age(&self, k: &T) -> Result<Ratio<T>> {
        if *k < T::one() || *k >= self.order {
            return Err(Error::IndexOutOfRange {
                k: k.to_string(),
                order: self.order.to_string(),
            });
        }
        Ok(Ratio::new(self.age_numerator(k), self.order.clone()))
    }

    /// Whether `gcd(a_1, ..., a_n, N) = 1`.
    pub fn generates_group(&self) -> bool {
        gcd_all(&self.weights).gcd(&self.order).is_one()
    }

    /// Full diagnostic scan of the group.
    pub fn well_formedness(&self) -> WellFormednessReport<T> {
        let zero_weight_indices = self
            .weights
            .iter()
            .enumerate()
            .filter(|(_, a)| a.is_zero())
            .map(|(i, _)| i + 1)
            .collect();
        let quasi_reflections = range(T::one(), self.order.clone())
            .filter(|k| {
                self.weights
                    .iter()
                    .filter(|a| !(k.clone() * (*a).clone()).is_multiple_of(&self.order))
                    .count()
                    == 1
            })
            .collect();
        WellFormednessReport {
            zero_weight_indices,
            generates_group: self.generates_group(),
            quasi_reflections,
        }
    }

    /// Fast well-formedness test.
    ///
    /// For a generating weight vector, the elements fixing every axis but the
    /// `i`-th form the subgroup of order `gcd(N, a_j : j != i)`, so the type
    /// has no quasi-reflections iff all of those gcds are 1.
    pub fn is_well_formed(&self) -> bool {
        if self.weights.iter().any(|a| a.is_zero()) || !self.generates_group() {
            return false;
        }
        (0..self.weights.len()).all(|i| self.axis_stabilizer_order(i).is_one())
    }

    /// `gcd(N, a_j : j != i)`.
    fn axis_stabilizer_order(&self, i: usize) -> T {
        self.weights
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .fold(self.order.clone(), |g, (_, a)| g.gcd(a))
    }

    fn require_well_formed(&self) -> Result<()> {
        if self.is_well_formed() {
            Ok(())
        } else {
            Err(Error::IllFormed(self.to_string()))
        }
    }

    /// Rewrites the type so that it is well-formed: zero weights are dropped
    /// and every axis is rescaled to its primitive lattice generator.
    pub fn normalize(&self) -> Result<(Self, NormalizationTrace<T>)> {
        if !self.generates_group() {
            return Err(Error::NonGenerating {
                order: self.order.to_string(),
                weights: join(&self.weights),
            });
        }
        let mut trace = NormalizationTrace {
            dropped: Vec::new(),
            axes: Vec::new(),
            scale: Vec::new(),
        };
        // original 1-based index of every surviving coordinate
        let mut labels: Vec<usize> = (1..=self.dim()).collect();
        let mut current = self.clone();
        let mut first_round = true;
        loop {
            let (kept, dropped): (Vec<_>, Vec<_>) = current
                .weights
                .iter()
                .cloned()
                .zip(labels.iter().copied())
                .partition(|(a, _)| !a.is_zero());
            trace.dropped.extend(dropped.into_iter().map(|(_, l)| l));
            labels = kept.iter().map(|(_, l)| *l).collect();
            let weights: Vec<T> = kept.into_iter().map(|(a, _)| a).collect();
            current = QuotientType {
                order: current.order,
                weights,
            };
            if first_round {
                trace.axes = labels.clone();
                trace.scale = vec![T::one(); labels.len()];
                first_round = false;
            }
            if current.weights.is_empty() {
                if !current.order.is_one() {
                    return Err(Error::Verification(format!(
                        "{self} normalized to an empty weight vector of order {}",
                        current.order
                    )));
                }
                break;
            }
            let scale = current.primitive_scales()?;
            if scale.iter().all(|c| c.is_one()) {
                break;
            }
            let point: Vec<Ratio<T>> = current
                .weights
                .iter()
                .zip(&scale)
                .map(|(a, c)| frac(&Ratio::new(a.clone() * c.clone(), current.order.clone())))
                .collect();
            let new_order = common_denominator(&point);
            let expected = scale
                .iter()
                .fold(current.order.clone(), |acc, c| acc / c.clone());
            if new_order != expected {
                return Err(Error::Verification(format!(
                    "rebasing {current} gave order {new_order}, expected {expected}"
                )));
            }
            let weights = point
                .iter()
                .map(|x| (x * Ratio::from_integer(new_order.clone())).to_integer())
                .collect();
            for (label, c) in labels.iter().zip(&scale) {
                let pos = trace
                    .axes
                    .iter()
                    .position(|a| a == label)
                    .expect("label tracked");
                trace.scale[pos] = trace.scale[pos].clone() * c.clone();
            }
            current = QuotientType {
                order: new_order,
                weights,
            };
        }
        trace.dropped.sort_unstable();
        if !current.is_well_formed() {
            return Err(Error::Verification(format!(
                "normalizing {self} produced ill-formed {current}"
            )));
        }
        if current.is_trivial() {
            current = Self::trivial();
        }
        Ok((current, trace))
    }

    /// For each axis, the `c_i` with `e_i / c_i` the primitive point of the
    /// induced lattice on that axis.
    fn primitive_scales(&self) -> Result<Vec<T>> {
        let n = self.dim();
        let lattice = induced_lattice(self)?;
        (0..n)
            .map(|i| {
                let axis: Vec<Ratio<T>> = (0..n)
                    .map(|j| Ratio::from_integer(if i == j { T::one() } else { T::zero() }))
                    .collect();
                let p = primitive_generator(&axis, &lattice)?;
                Ok(p[i].recip().to_integer())
            })
            .collect()
    }

    /// Minimal log-discrepancy by the age criterion. Requires a well-formed type.
    pub fn mld(&self) -> Result<MldResult<T>> {
        self.require_well_formed()?;
        if self.is_trivial() {
            return Ok(MldResult::Smooth);
        }
        let (age, k) = self
            .min_age_in(T::one(), self.order.clone())
            .expect("nontrivial group has a nonzero element");
        Ok(MldResult::Singular {
            mld_log: Ratio::new(age, self.order.clone()),
            witness: Witness::Element(k),
        })
    }

    /// Least age numerator over `from <= k < to` and the smallest `k`
    /// attaining it. Partial scans merge with [`merge_min_age`].
    pub fn min_age_in(&self, from: T, to: T) -> Option<(T, T)> {
        range(from, to).fold(None, |best, k| {
            let age = self.age_numerator(&k);
            merge_min_age(best, Some((age, k)))
        })
    }

    /// `N / gcd(N, sum a_i)`: the least common denominator of all ages.
    pub fn gorenstein_index(&self) -> Result<T> {
        self.require_well_formed()?;
        let sum = self
            .weights
            .iter()
            .fold(T::zero(), |acc, a| acc + a.clone());
        Ok(self.order.clone() / self.order.gcd(&sum))
    }

    /// Lexicographically least sorted weight vector over all unit rescalings.
    pub fn canonical_form(&self) -> Result<Self> {
        self.require_well_formed()?;
        let best = range(T::one(), self.order.clone())
            .filter(|k| k.gcd(&self.order).is_one())
            .map(|k| self.rescaled_sorted(&k))
            .min()
            .unwrap_or_else(|| self.weights.clone());
        Ok(QuotientType {
            order: self.order.clone(),
            weights: best,
        })
    }

    /// Whether the type already equals its canonical form. Cheaper than
    /// computing the canonical form: rejects on the first smaller rescaling.
    pub fn is_canonical(&self) -> bool {
        if !self.weights.windows(2).all(|w| w[0] <= w[1]) {
            return false;
        }
        let Some(first) = self.weights.first() else {
            return true;
        };
        // the unit orbit of a_i has least element gcd(a_i, N)
        let least = self
            .weights
            .iter()
            .map(|a| a.gcd(&self.order))
            .min()
            .expect("nonempty");
        if *first != least {
            return false;
        }
        range(int(2), self.order.clone())
            .filter(|k| k.gcd(&self.order).is_one())
            .all(|k| self.rescaled_sorted(&k).as_slice() >= self.weights.as_slice())
    }

    fn rescaled_sorted(&self, k: &T) -> Vec<T> {
        let mut w: Vec<T> = self
            .weights
            .iter()
            .map(|a| (k.clone() * a.clone()).mod_floor(&self.order))
            .collect();
        w.sort();
        w
    }
}

/// Combines two partial minima, preferring the smaller age and then the
/// smaller index.
pub fn merge_min_age<T: Int>(a: Option<(T, T)>, b: Option<(T, T)>) -> Option<(T, T)> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(if y < x { y } else { x }),
    }
}

/// `Z^n + Z * (a / N)`.
pub fn induced_lattice<T: Int>(q: &QuotientType<T>) -> Result<LatticeBasis<T>> {
    let n = q.dim();
    let mut gens: Vec<Vec<Ratio<T>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Ratio::from_integer(if i == j { T::one() } else { T::zero() }))
                .collect()
        })
        .collect();
    gens.push(q.generating_point().coords);
    LatticeBasis::from_generators(n, &gens)
}

fn join<T: fmt::Display>(xs: &[T]) -> String {
    xs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

impl<T: Int> fmt::Display for QuotientType<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.order, join(&self.weights))
    }
}

impl<T: Int> fmt::Debug for QuotientType<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1/{}({})", self.order, join(&self.weights))
    }
}

impl<T: Int> FromStr for QuotientType<T> {
    type Err = Error;

    /// Parses `N:a1,a2,...,an`; whitespace is not allowed.
    fn from_str(s: &str) -> Result<Self> {
        let (order, weights) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected N:a1,...,an, got {s:?}")))?;
        let order = parse_int(order)?;
        let weights = if weights.is_empty() {
            Vec::new()
        } else {
            weights
                .split(',')
                .map(parse_int)
                .collect::<Result<Vec<T>>>()?
        };
        QuotientType::new(order, weights).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl<T: Int> PartialOrd for QuotientType<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Ordered by order first, then weights lexicographically.
impl<T: Int> Ord for QuotientType<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order
            .cmp(&other.order)
            .then_with(|| self.weights.cmp(&other.weights))
    }
}

/// A point of the closed unit hypercube.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HypercubePoint<T: Int> {
    coords: Vec<Ratio<T>>,
}

impl<T: Int> fmt::Debug for HypercubePoint<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", join(&self.coords))
    }
}

impl<T: Int> HypercubePoint<T> {
    pub fn new(coords: Vec<Ratio<T>>) -> Result<Self> {
        let (zero, one) = (
            Ratio::from_integer(T::zero()),
            Ratio::from_integer(T::one()),
        );
        if let Some(c) = coords.iter().find(|c| **c < zero || **c > one) {
            return Err(Error::InvalidQuotient(format!(
                "coordinate {c} is outside [0, 1]"
            )));
        }
        Ok(HypercubePoint { coords })
    }

    pub fn coords(&self) -> &[Ratio<T>] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// The `m`-th multiple: coordinates equal to 1 stay 1, every other
    /// coordinate becomes the fractional part of `m` times itself.
    pub fn multiple(&self, m: &T) -> Self {
        let scale = Ratio::from_integer(m.clone());
        HypercubePoint {
            coords: self
                .coords
                .iter()
                .map(|c| {
                    if c.is_one() {
                        c.clone()
                    } else {
                        frac(&(c * &scale))
                    }
                })
                .collect(),
        }
    }

    pub fn coordinate_sum(&self) -> Ratio<T> {
        self.coords
            .iter()
            .fold(Ratio::from_integer(T::zero()), |acc, c| acc + c)
    }

    pub fn face_signature(&self) -> FaceSignature {
        let zeros = self.coords.iter().filter(|c| c.is_zero()).count();
        let ones = self.coords.iter().filter(|c| c.is_one()).count();
        FaceSignature {
            zeros,
            ones,
            interior: self.coords.len() - zeros - ones,
        }
    }

    /// Least `q > 0` with the `q`-th multiple a vertex of the cube.
    pub fn order(&self) -> T {
        common_denominator(&self.coords)
    }

    /// The cyclic quotient generated by this point, reading coordinates modulo 1.
    pub fn to_quotient(&self) -> QuotientType<T> {
        let order = self.order();
        let scale = Ratio::from_integer(order.clone());
        let weights = self
            .coords
            .iter()
            .map(|c| (frac(c) * &scale).to_integer())
            .collect();
        QuotientType { order, weights }
    }
}

/// Counts of coordinates equal to 0, equal to 1, and strictly between.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FaceSignature {
    pub zeros: usize,
    pub ones: usize,
    pub interior: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WellFormednessReport<T> {
    /// 1-based positions of zero weights.
    pub zero_weight_indices: Vec<usize>,
    pub generates_group: bool,
    /// Every `k` whose element has exactly one nonzero coordinate.
    pub quasi_reflections: Vec<T>,
}

impl<T> WellFormednessReport<T> {
    pub fn is_clean(&self) -> bool {
        self.zero_weight_indices.is_empty()
            && self.generates_group
            && self.quasi_reflections.is_empty()
    }
}

/// What [`QuotientType::normalize`] did.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizationTrace<T> {
    /// 1-based input positions removed as torus factors.
    pub dropped: Vec<usize>,
    /// 1-based input positions that survived the initial zero-weight drop.
    pub axes: Vec<usize>,
    /// Total rescaling `c_i` of each entry of `axes`.
    pub scale: Vec<T>,
}

impl<T: Int> NormalizationTrace<T> {
    pub fn is_trivial(&self) -> bool {
        self.dropped.is_empty() && self.scale.iter().all(|c| c.is_one())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness<T: Int> {
    /// Index `k` of the minimizing group element.
    Element(T),
    /// A minimizing lattice point.
    Point(Vec<Ratio<T>>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MldResult<T: Int> {
    Smooth,
    Singular {
        mld_log: Ratio<T>,
        witness: Witness<T>,
    },
}

impl<T: Int> MldResult<T> {
    pub fn is_smooth(&self) -> bool {
        matches!(self, MldResult::Smooth)
    }

    pub fn mld_log(&self) -> Option<&Ratio<T>> {
        match self {
            MldResult::Smooth => None,
            MldResult::Singular { mld_log, .. } => Some(mld_log),
        }
    }

    /// Minimal discrepancy, `mld_log - 1`.
    pub fn discrepancy(&self) -> Option<Ratio<T>> {
        self.mld_log().map(|x| x - Ratio::from_integer(T::one()))
    }

    pub fn witness(&self) -> Option<&Witness<T>> {
        match self {
            MldResult::Smooth => None,
            MldResult::Singular { witness, .. } => Some(witness),
        }
    }

    pub fn classify(&self) -> Result<SingularityClass> {
        let mld = self.mld_log().ok_or(Error::Smooth)?;
        Ok(SingularityClass::of(mld))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SingularityClass {
    Terminal,
    CanonicalNotTerminal,
    KltNotCanonical,
}

impl SingularityClass {
    pub fn of<T: Int>(mld_log: &Ratio<T>) -> Self {
        match mld_log.cmp(&Ratio::from_integer(T::one())) {
            Ordering::Greater => SingularityClass::Terminal,
            Ordering::Equal => SingularityClass::CanonicalNotTerminal,
            Ordering::Less => SingularityClass::KltNotCanonical,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SingularityClass::Terminal => "terminal",
            SingularityClass::CanonicalNotTerminal => "canonical-not-terminal",
            SingularityClass::KltNotCanonical => "klt-not-canonical",
        }
    }
}

impl fmt::Display for SingularityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SingularityClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "terminal" => Ok(SingularityClass::Terminal),
            "canonical-not-terminal" => Ok(SingularityClass::CanonicalNotTerminal),
            "klt-not-canonical" => Ok(SingularityClass::KltNotCanonical),
            other => Err(Error::Parse(format!("unknown singularity class {other:?}"))),
        }
    }
}
