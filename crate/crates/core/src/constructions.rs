//! Families of cyclic quotients with prescribed minimal log-discrepancy.
//!
//! * [`lift_plus_one`] appends the coordinates `(1/N, 1 - 1/N)` to the
//!   generating point, raising the mld by exactly one.
//! * [`construct_limit_sequence`] places an `m`-dimensional base on a face of
//!   the `n`-cube and walks along the segment from that face point `T` towards
//!   the vertex `P`, producing quotients whose mld decreases to `eps + l`.

use num::rational::Ratio;
use num::{One, Zero};

use crate::cyclic::{HypercubePoint, MldResult, QuotientType, Witness};
use crate::error::{Error, Result};
use crate::scalar::Int;

/// `1/N(a, 1, N-1)`, checked to have mld exactly one more than `q`.
pub fn lift_plus_one<T: Int>(q: &QuotientType<T>) -> Result<QuotientType<T>> {
    let before = q.mld()?.mld_log().cloned().ok_or(Error::Smooth)?;
    let n = q.order().clone();
    let mut weights = q.weights().to_vec();
    weights.push(T::one());
    weights.push(n.clone() - T::one());
    let lifted = QuotientType::new(n, weights)?;
    let after = lifted.mld()?.mld_log().cloned().ok_or(Error::Smooth)?;
    if after != before.clone() + Ratio::one() {
        return Err(Error::Verification(format!(
            "lift of {q} has mld {after}, expected {before} + 1"
        )));
    }
    Ok(lifted)
}

/// Applies [`lift_plus_one`] `times` times.
pub fn lift_times<T: Int>(q: &QuotientType<T>, times: usize) -> Result<QuotientType<T>> {
    (0..times).try_fold(q.clone(), |acc, _| lift_plus_one(&acc))
}

/// Parameters of a limit sequence.
#[derive(Clone, Debug)]
pub struct SequenceSpec<T: Int> {
    pub base: QuotientType<T>,
    /// Number of coordinates pinned to 1 on the face holding the base.
    pub l: usize,
    /// Target dimension.
    pub n: usize,
    pub orders: Vec<T>,
}

/// Base data derived from a [`SequenceSpec`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceBase<T: Int> {
    /// The base point realizing `eps`.
    pub alpha: HypercubePoint<T>,
    /// Minimal log-discrepancy of the base.
    pub eps: Ratio<T>,
    /// `ceil(eps)`.
    pub r: T,
    /// Order of `alpha`.
    pub q: T,
    /// Dimension of the base.
    pub m: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceTerm<T: Int> {
    pub order: T,
    pub point: HypercubePoint<T>,
    pub quotient: QuotientType<T>,
    pub expected_mld: Ratio<T>,
    pub verified_mld: Ratio<T>,
}

impl<T: Int> SequenceSpec<T> {
    /// Checks the preconditions and extracts the base data.
    ///
    /// The base point is the minimizing group element of the base type, so
    /// that its coordinate sum is exactly `eps`.
    pub fn base_data(&self) -> Result<SequenceBase<T>> {
        if !self.base.is_well_formed() {
            return Err(Error::IllFormed(self.base.to_string()));
        }
        let (eps, k) = match self.base.mld()? {
            MldResult::Smooth => return Err(Error::Smooth),
            MldResult::Singular {
                mld_log,
                witness: Witness::Element(k),
            } => (mld_log, k),
            MldResult::Singular {
                witness: Witness::Point(_),
                ..
            } => unreachable!("age witnesses are indices"),
        };
        let alpha = self.base.element(&k);
        let q = alpha.order();
        let r = eps.ceil().to_integer();
        let m = self.base.dim();
        let required =
            r.clone() + T::from_usize(m + 2 * self.l).expect("dimension fits the scalar");
        let n = T::from_usize(self.n).expect("dimension fits the scalar");
        if n < required {
            return Err(Error::DimensionBound {
                n: self.n,
                required: required.to_string(),
            });
        }
        for order in &self.orders {
            if *order < T::one() + T::one() {
                return Err(Error::OrderTooSmall(order.to_string()));
            }
            if !(order.clone() - T::one()).is_multiple_of(&q) {
                return Err(Error::Congruence {
                    order: order.to_string(),
                    modulus: q.to_string(),
                });
            }
        }
        Ok(SequenceBase {
            alpha,
            eps,
            r,
            q,
            m,
        })
    }

    /// `T = (alpha; 1, ..., 1; 0, ..., 0)`, the limit of the sequence.
    pub fn limit_point(&self) -> Result<HypercubePoint<T>> {
        let base = self.base_data()?;
        Ok(self.face_point(&base))
    }

    fn face_point(&self, base: &SequenceBase<T>) -> HypercubePoint<T> {
        let mut coords = base.alpha.coords().to_vec();
        coords.extend(std::iter::repeat_n(Ratio::one(), self.l));
        coords.extend(std::iter::repeat_n(Ratio::zero(), self.n - base.m - self.l));
        HypercubePoint::new(coords).expect("face point lies in the cube")
    }

    /// `eps + l`.
    pub fn limit(&self) -> Result<Ratio<T>> {
        let base = self.base_data()?;
        Ok(base.eps + Ratio::from_integer(T::from_usize(self.l).expect("fits")))
    }
}

/// Builds `A_N = P/N + (1 - 1/N) T` for every requested order `N`, converts
/// it to a quotient of order `N` and checks that its mld equals the sum of
/// its coordinates.
pub fn construct_limit_sequence<T: Int>(spec: &SequenceSpec<T>) -> Result<Vec<SequenceTerm<T>>> {
    let base = spec.base_data()?;
    let face = spec.face_point(&base);
    let free = spec.n - base.m - spec.l;
    let limit = base.eps.clone() + Ratio::from_integer(T::from_usize(spec.l).expect("fits"));
    let free_count = Ratio::from_integer(T::from_usize(free).expect("fits"));

    spec.orders
        .iter()
        .map(|order| {
            let inv = Ratio::new(T::one(), order.clone());
            let keep = Ratio::one() - inv.clone();
            let coords: Vec<Ratio<T>> = face
                .coords()
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    let vertex = if i >= base.m + spec.l {
                        Ratio::one()
                    } else {
                        Ratio::zero()
                    };
                    inv.clone() * vertex + keep.clone() * t
                })
                .collect();
            let point = HypercubePoint::new(coords)?;
            if point.order() != *order {
                return Err(Error::Verification(format!(
                    "A_{order} has order {}, expected {order}",
                    point.order()
                )));
            }
            let quotient = point.to_quotient();
            let expected_mld = point.coordinate_sum();
            let closed_form = free_count.clone() * inv.clone() + keep.clone() * limit.clone();
            if expected_mld != closed_form {
                return Err(Error::Verification(format!(
                    "coordinate sum {expected_mld} of A_{order} differs from {closed_form}"
                )));
            }
            if !quotient.is_well_formed() {
                return Err(Error::Verification(format!(
                    "{quotient} is not well-formed"
                )));
            }
            let verified_mld = quotient
                .mld()?
                .mld_log()
                .cloned()
                .ok_or_else(|| Error::Verification(format!("{quotient} is smooth")))?;
            if verified_mld != expected_mld {
                return Err(Error::Verification(format!(
                    "{quotient} has mld {verified_mld}, expected {expected_mld}"
                )));
            }
            Ok(SequenceTerm {
                order: order.clone(),
                point,
                quotient,
                expected_mld,
                verified_mld,
            })
        })
        .collect()
}

/// Diagnostics for a finite sequence approaching a limit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FromAboveReport<T: Int> {
    /// Every value is strictly greater than the limit.
    pub all_above: bool,
    /// Every value equals the limit (a constant family).
    pub all_equal: bool,
    pub monotone_non_increasing: bool,
    pub strictly_decreasing: bool,
    /// Last value minus the limit.
    pub last_gap: Option<Ratio<T>>,
}

impl<T: Int> FromAboveReport<T> {
    /// Approaches from above, or sits exactly at the limit.
    pub fn from_above(&self) -> bool {
        self.all_above || self.all_equal
    }
}

pub fn verify_from_above<T: Int>(values: &[Ratio<T>], limit: &Ratio<T>) -> FromAboveReport<T> {
    FromAboveReport {
        all_above: values.iter().all(|v| v > limit),
        all_equal: values.iter().all(|v| v == limit),
        monotone_non_increasing: values.windows(2).all(|w| w[1] <= w[0]),
        strictly_decreasing: values.windows(2).all(|w| w[1] < w[0]),
        last_gap: values.last().map(|v| v - limit),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = Ratio<i64>;

    fn qt(s: &str) -> QuotientType<i64> {
        s.parse().unwrap()
    }

    fn r(p: i64, d: i64) -> Q {
        Ratio::new(p, d)
    }

    fn mld(q: &QuotientType<i64>) -> Q {
        *q.mld().unwrap().mld_log().unwrap()
    }

    #[test]
    fn lift_examples() {
        let lifted = lift_plus_one(&qt("3:1,1")).unwrap();
        assert_eq!(lifted, qt("3:1,1,1,2"));
        // ages 5/3 and 7/3
        assert_eq!(mld(&lifted), r(5, 3));
        assert_eq!(mld(&lift_plus_one(&qt("2:1,1")).unwrap()), r(2, 1));
        assert_eq!(lift_plus_one(&qt("2:1,1")).unwrap(), qt("2:1,1,1,1"));
        assert_eq!(mld(&lift_plus_one(&qt("2:1,1,1")).unwrap()), r(5, 2));
        assert_eq!(
            lift_plus_one(&QuotientType::<i64>::trivial()),
            Err(Error::Smooth)
        );
        assert!(matches!(
            lift_plus_one(&qt("4:1,2")),
            Err(Error::IllFormed(_))
        ));
    }

    #[test]
    fn repeated_lifts_add_integers() {
        for s in ["3:1,1", "5:1,2", "7:1,2,4", "11:1,3,5"] {
            let q = qt(s);
            for t in 1..=3 {
                let lifted = lift_times(&q, t).unwrap();
                assert_eq!(lifted.dim(), q.dim() + 2 * t);
                assert_eq!(mld(&lifted), mld(&q) + r(t as i64, 1), "{s} x{t}");
            }
        }
    }

    fn spec(base: &str, l: usize, n: usize, orders: &[i64]) -> SequenceSpec<i64> {
        SequenceSpec {
            base: qt(base),
            l,
            n,
            orders: orders.to_vec(),
        }
    }

    #[test]
    fn sequence_examples() {
        let terms = construct_limit_sequence(&spec("3:1,1", 0, 3, &[4, 7])).unwrap();
        assert_eq!(terms[0].point.coords(), &[r(1, 4), r(1, 4), r(1, 4)]);
        assert_eq!(terms[0].quotient, qt("4:1,1,1"));
        assert_eq!(terms[0].verified_mld, r(3, 4));
        assert_eq!(terms[1].point.coords(), &[r(2, 7), r(2, 7), r(1, 7)]);
        assert_eq!(terms[1].quotient, qt("7:2,2,1"));
        assert_eq!(terms[1].verified_mld, r(5, 7));

        let terms = construct_limit_sequence(&spec("2:1,1", 1, 6, &[3])).unwrap();
        assert_eq!(
            terms[0].point.coords(),
            &[r(1, 3), r(1, 3), r(2, 3), r(1, 3), r(1, 3), r(1, 3)]
        );
        assert_eq!(terms[0].quotient, qt("3:1,1,2,1,1,1"));
        assert_eq!(terms[0].verified_mld, r(7, 3));
    }

    #[test]
    fn sequence_preconditions() {
        assert!(matches!(
            construct_limit_sequence(&spec("3:1,1", 0, 2, &[4])),
            Err(Error::DimensionBound { n: 2, .. })
        ));
        assert!(matches!(
            construct_limit_sequence(&spec("3:1,1", 0, 3, &[5])),
            Err(Error::Congruence { .. })
        ));
        assert!(matches!(
            construct_limit_sequence(&spec("3:1,1", 0, 3, &[1])),
            Err(Error::OrderTooSmall(_))
        ));
        assert!(matches!(
            construct_limit_sequence(&spec("4:1,2", 0, 4, &[5])),
            Err(Error::IllFormed(_))
        ));
    }

    #[test]
    fn closed_form_for_the_two_thirds_family() {
        let orders: Vec<i64> = (4..=100).filter(|n| n % 3 == 1).collect();
        let terms = construct_limit_sequence(&spec("3:1,1", 0, 3, &orders)).unwrap();
        for t in &terms {
            assert_eq!(t.verified_mld, r(2, 3) + r(1, 3 * t.order));
        }
        let values: Vec<Q> = terms.iter().map(|t| t.verified_mld).collect();
        let rep = verify_from_above(&values, &r(2, 3));
        assert!(rep.all_above && rep.strictly_decreasing);
    }

    #[test]
    fn limit_identity_branches() {
        // n - m - l = 3 > eps + l = 2: strictly decreasing to 2
        let s = spec("2:1,1", 1, 6, &[3, 5, 7, 9]);
        let values: Vec<Q> = construct_limit_sequence(&s)
            .unwrap()
            .iter()
            .map(|t| t.verified_mld)
            .collect();
        assert_eq!(values, vec![r(7, 3), r(11, 5), r(15, 7), r(19, 9)]);
        let limit = s.limit().unwrap();
        assert_eq!(limit, r(2, 1));
        assert!(verify_from_above(&values, &limit).strictly_decreasing);
        let face = s.limit_point().unwrap().face_signature();
        assert_eq!((face.ones, face.zeros), (1, 3));

        // n - m - l = 2 = eps + l: constant
        let s = spec("2:1,1", 1, 5, &[3, 5, 7, 9]);
        let values: Vec<Q> = construct_limit_sequence(&s)
            .unwrap()
            .iter()
            .map(|t| t.verified_mld)
            .collect();
        let rep = verify_from_above(&values, &s.limit().unwrap());
        assert!(rep.all_equal && rep.from_above() && !rep.strictly_decreasing);
    }

    #[test]
    fn from_above_examples() {
        let rep = verify_from_above(&[r(3, 4), r(5, 7), r(9, 13)], &r(2, 3));
        assert!(rep.all_above && rep.strictly_decreasing && rep.from_above());
        assert_eq!(rep.last_gap, Some(r(9, 13) - r(2, 3)));
        let rep = verify_from_above(&[r(1, 1); 3], &r(1, 1));
        assert!(rep.all_equal && !rep.all_above && rep.from_above() && rep.monotone_non_increasing);
        let rep = verify_from_above(&[r(1, 2), r(3, 4)], &r(2, 3));
        assert!(!rep.from_above() && !rep.monotone_non_increasing);
    }
}
