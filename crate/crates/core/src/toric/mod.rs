//! Simplicial toric cones over arbitrary lattices.
//!
//! This is the lattice-point route to the minimal log-discrepancy: enumerate
//! the finite group `N / <P_i>`, keep points lying in the interior of
//! non-regular faces and minimize the Q-Gorenstein functional over them. For
//! cyclic lattices it serves as an oracle for the age computation in
//! [`crate::cyclic`].

mod file;

pub use file::{parse_cone, write_cone};

use num::rational::Ratio;
use num::Zero;

use crate::cyclic::{induced_lattice, MldResult, QuotientType, Witness};
use crate::error::{Error, Result};
use crate::lattice::{enumerate_residues, primitive_generator, LatticeBasis, Matrix};
use crate::scalar::{common_denominator, Int};

/// A full-dimensional simplicial cone with rays in a lattice.
#[derive(Clone, Debug)]
pub struct SimplicialConeData<T: Int> {
    lattice: LatticeBasis<T>,
    rays: Vec<Vec<Ratio<T>>>,
    primitive: LatticeBasis<T>,
}

/// The linear functional taking the value 1 on every primitive ray point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QGorensteinFunctional<T: Int> {
    pub coefficients: Vec<Ratio<T>>,
}

impl<T: Int> QGorensteinFunctional<T> {
    pub fn eval(&self, v: &[Ratio<T>]) -> Ratio<T> {
        self.coefficients
            .iter()
            .zip(v)
            .fold(Ratio::zero(), |acc, (a, b)| acc + a * b)
    }
}

/// A coset of the primitive-ray sublattice, reduced into its fundamental
/// parallelepiped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residue<T: Int> {
    /// Ambient coordinates.
    pub point: Vec<Ratio<T>>,
    /// Coordinates in the basis of primitive ray points, each in `[0, 1)`.
    pub ray_coords: Vec<Ratio<T>>,
}

impl<T: Int> Residue<T> {
    /// 0-based indices of the rays with nonzero coordinate.
    pub fn support(&self) -> Vec<usize> {
        self.ray_coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.ray_coords.iter().all(Zero::is_zero)
    }

    /// Sum of the ray coordinates, which equals `F(point)`.
    pub fn value(&self) -> Ratio<T> {
        self.ray_coords.iter().fold(Ratio::zero(), |acc, c| acc + c)
    }
}

/// What [`SimplicialConeData::reduce_to_cyclic`] used and checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTrace<T: Int> {
    /// The mld witness of the cone.
    pub witness: Vec<Ratio<T>>,
    /// The lattice point whose residue generates the reduced group.
    pub generator: Vec<Ratio<T>>,
    /// 0-based ray indices spanning the face containing the generator.
    pub support: Vec<usize>,
    pub cone_mld: Ratio<T>,
    pub reduced_mld: Ratio<T>,
}

impl<T: Int> ReductionTrace<T> {
    pub fn verified(&self) -> bool {
        self.cone_mld == self.reduced_mld
    }
}

impl<T: Int> SimplicialConeData<T> {
    pub fn new(lattice: LatticeBasis<T>, rays: Vec<Vec<Ratio<T>>>) -> Result<Self> {
        let n = lattice.dim();
        if rays.len() != n {
            return Err(Error::InvalidLattice(format!(
                "a full-dimensional simplicial cone in dimension {n} needs {n} rays, got {}",
                rays.len()
            )));
        }
        for ray in &rays {
            if ray.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: ray.len(),
                });
            }
            if !lattice.contains(ray)? {
                return Err(Error::InvalidLattice(format!(
                    "ray {} is not a lattice point",
                    show(ray)
                )));
            }
        }
        if Matrix::from_columns(&rays)?.determinant().is_zero() {
            return Err(Error::InvalidLattice("rays are linearly dependent".into()));
        }
        let primitive_rays = rays
            .iter()
            .map(|r| primitive_generator(r, &lattice))
            .collect::<Result<Vec<_>>>()?;
        let primitive = LatticeBasis::new(&primitive_rays)?;
        Ok(SimplicialConeData {
            lattice,
            rays,
            primitive,
        })
    }

    /// The positive orthant over `Z^n + Z * (a / N)`.
    pub fn from_quotient(q: &QuotientType<T>) -> Result<Self> {
        if q.dim() == 0 {
            return Err(Error::InvalidLattice(
                "a cone needs dimension at least 1".into(),
            ));
        }
        let n = q.dim();
        let rays = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| Ratio::from_integer(if i == j { T::one() } else { T::zero() }))
                    .collect()
            })
            .collect();
        Self::new(induced_lattice(q)?, rays)
    }

    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    pub fn lattice(&self) -> &LatticeBasis<T> {
        &self.lattice
    }

    pub fn rays(&self) -> &[Vec<Ratio<T>>] {
        &self.rays
    }

    /// `P_i`: the lattice point on each ray closest to the origin.
    pub fn primitive_rays(&self) -> Vec<Vec<Ratio<T>>> {
        self.primitive.basis_vectors()
    }

    /// The unique `F` with `F(P_i) = 1` for all `i`.
    pub fn functional(&self) -> QGorensteinFunctional<T> {
        let p_inv = self
            .primitive
            .matrix()
            .inverse()
            .expect("primitive rays are independent");
        let n = self.dim();
        let coefficients = (0..n)
            .map(|j| (0..n).fold(Ratio::zero(), |acc, i| acc + p_inv[(i, j)].clone()))
            .collect();
        QGorensteinFunctional { coefficients }
    }

    /// Cosets of `<P_i>` in the lattice, sorted lexicographically by ambient
    /// coordinates; the zero coset comes first only if it is smallest.
    pub fn residues(&self) -> Result<Vec<Residue<T>>> {
        enumerate_residues(&self.lattice, &self.primitive)?
            .into_iter()
            .map(|point| {
                let ray_coords = self.primitive.coordinates(&point)?;
                Ok(Residue { point, ray_coords })
            })
            .collect()
    }

    /// Whether `{P_i : i in face}` is a basis of the lattice points in its span.
    pub fn is_regular_subcone(&self, face: &[usize]) -> Result<bool> {
        self.check_face(face)?;
        Ok(regular_given(&self.residues()?, face))
    }

    fn check_face(&self, face: &[usize]) -> Result<()> {
        if face.is_empty() {
            return Err(Error::InvalidLattice(
                "a face needs at least one ray".into(),
            ));
        }
        if let Some(i) = face.iter().find(|i| **i >= self.dim()) {
            return Err(Error::InvalidLattice(format!("ray index {i} out of range")));
        }
        Ok(())
    }

    /// Minimal log-discrepancy from lattice points: the least value of `F`
    /// over nonzero residues lying in the interior of non-regular faces.
    /// Ties go to the lexicographically smallest point.
    pub fn mld_toric(&self) -> Result<MldResult<T>> {
        let residues = self.residues()?;
        let functional = self.functional();
        let mut best: Option<(Ratio<T>, &Residue<T>)> = None;
        for r in residues.iter().filter(|r| !r.is_zero()) {
            if regular_given(&residues, &r.support()) {
                continue;
            }
            let value = functional.eval(&r.point);
            if best.as_ref().is_none_or(|(v, _)| value < *v) {
                best = Some((value, r));
            }
        }
        match best {
            Some((mld_log, r)) => Ok(MldResult::Singular {
                mld_log,
                witness: Witness::Point(r.point.clone()),
            }),
            None if residues.iter().all(Residue::is_zero) => Ok(MldResult::Smooth),
            None => Err(Error::Verification(
                "non-regular cone without a competing lattice point".into(),
            )),
        }
    }

    /// Number of nonzero residues the face-regularity filter discarded.
    pub fn excluded_residues(&self) -> Result<usize> {
        let residues = self.residues()?;
        Ok(residues
            .iter()
            .filter(|r| !r.is_zero() && regular_given(&residues, &r.support()))
            .count())
    }

    /// Least common denominator of `F` over the lattice.
    pub fn gorenstein_index(&self) -> T {
        let f = self.functional();
        let values: Vec<Ratio<T>> = self
            .lattice
            .basis_vectors()
            .iter()
            .map(|b| f.eval(b))
            .collect();
        // F(N) = h Z with h the gcd of the values
        let den = common_denominator(&values);
        let scale = Ratio::from_integer(den.clone());
        let g = values
            .iter()
            .fold(T::zero(), |acc, v| acc.gcd(&(v * &scale).to_integer()));
        Ratio::new(g, den).denom().clone()
    }

    /// Reduces the cone to a cyclic quotient with the same minimal
    /// log-discrepancy.
    ///
    /// If `N / <P_i>` is already cyclic the quotient is read off a generator
    /// of the whole group (the lexicographically smallest among those of least
    /// `F`-value). Otherwise the mld witness `x` is used: with `S` its
    /// support, the result is the group `(Z<P_i : i in S> + Z x) / Z<P_i : i in S>`
    /// written in the coordinates of the face spanned by `S`. In both cases
    /// the mld of the result is recomputed and compared with the cone's.
    pub fn reduce_to_cyclic(&self) -> Result<(QuotientType<T>, ReductionTrace<T>)> {
        let (cone_mld, witness) = match self.mld_toric()? {
            MldResult::Smooth => return Err(Error::Smooth),
            MldResult::Singular {
                mld_log,
                witness: Witness::Point(p),
            } => (mld_log, p),
            MldResult::Singular {
                witness: Witness::Element(_),
                ..
            } => {
                unreachable!("lattice mld reports point witnesses")
            }
        };
        let residues = self.residues()?;
        let group_order = T::from_usize(residues.len()).expect("group order fits the scalar");
        let generator = residues
            .iter()
            .filter(|r| common_denominator(&r.ray_coords) == group_order)
            .min_by(|a, b| {
                a.value()
                    .cmp(&b.value())
                    .then_with(|| a.point.cmp(&b.point))
            });
        let (generator, coords) = match generator {
            Some(r) => (r.point.clone(), r.ray_coords.clone()),
            None => (witness.clone(), self.primitive.coordinates(&witness)?),
        };
        let support: Vec<usize> = coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
            .collect();
        let face_coords: Vec<Ratio<T>> = support.iter().map(|&i| coords[i].clone()).collect();
        // order of the generator modulo the face lattice spanned by its P_i
        let order = common_denominator(&face_coords);
        let scale = Ratio::from_integer(order.clone());
        let weights = face_coords
            .iter()
            .map(|c| (c * &scale).to_integer())
            .collect();
        let reduced = QuotientType::new(order, weights)?;
        if !reduced.is_well_formed() {
            return Err(Error::Verification(format!(
                "reduction produced ill-formed {reduced}"
            )));
        }
        let reduced_mld =
            reduced.mld()?.mld_log().cloned().ok_or_else(|| {
                Error::Verification(format!("reduction produced smooth {reduced}"))
            })?;
        let trace = ReductionTrace {
            witness,
            generator,
            support,
            cone_mld,
            reduced_mld,
        };
        if !trace.verified() {
            return Err(Error::Verification(format!(
                "reduced type {reduced} has mld {} but the cone has {}",
                trace.reduced_mld, trace.cone_mld
            )));
        }
        Ok((reduced, trace))
    }
}

/// A face is regular iff no nonzero residue is supported inside it.
fn regular_given<T: Int>(residues: &[Residue<T>], face: &[usize]) -> bool {
    !residues.iter().any(|r| {
        !r.is_zero()
            && r.ray_coords
                .iter()
                .enumerate()
                .all(|(i, c)| c.is_zero() || face.contains(&i))
    })
}

fn show<T: Int>(v: &[Ratio<T>]) -> String {
    format!(
        "({})",
        v.iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",")
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigInt;

    type Q = Ratio<i64>;

    fn r(p: i64, d: i64) -> Q {
        Ratio::new(p, d)
    }

    fn z(p: i64) -> Q {
        Ratio::from_integer(p)
    }

    fn unit(n: usize, i: usize) -> Vec<Q> {
        (0..n).map(|j| z((i == j) as i64)).collect()
    }

    fn cone(n: usize, extra: &[Vec<Q>], rays: Vec<Vec<Q>>) -> SimplicialConeData<i64> {
        let mut gens: Vec<Vec<Q>> = (0..n).map(|i| unit(n, i)).collect();
        gens.extend(extra.iter().cloned());
        SimplicialConeData::new(LatticeBasis::from_generators(n, &gens).unwrap(), rays).unwrap()
    }

    fn standard(n: usize) -> SimplicialConeData<i64> {
        cone(n, &[], (0..n).map(|i| unit(n, i)).collect())
    }

    fn half() -> SimplicialConeData<i64> {
        cone(2, &[vec![r(1, 2), r(1, 2)]], vec![unit(2, 0), unit(2, 1)])
    }

    fn klein() -> SimplicialConeData<i64> {
        cone(
            3,
            &[vec![r(1, 2), r(1, 2), z(0)], vec![z(0), r(1, 2), r(1, 2)]],
            (0..3).map(|i| unit(3, i)).collect(),
        )
    }

    #[test]
    fn primitive_ray_examples() {
        assert_eq!(standard(2).primitive_rays(), vec![unit(2, 0), unit(2, 1)]);
        let scaled = cone(2, &[], vec![vec![z(2), z(0)], unit(2, 1)]);
        assert_eq!(scaled.primitive_rays(), vec![unit(2, 0), unit(2, 1)]);
        assert_eq!(half().primitive_rays(), vec![unit(2, 0), unit(2, 1)]);
    }

    #[test]
    fn functional_examples() {
        assert_eq!(standard(2).functional().coefficients, vec![z(1), z(1)]);
        let scaled = cone(2, &[], vec![vec![z(2), z(0)], unit(2, 1)]);
        assert_eq!(scaled.functional().coefficients, vec![z(1), z(1)]);
        assert_eq!(klein().functional().coefficients, vec![z(1), z(1), z(1)]);
        let skew = cone(2, &[], vec![vec![z(1), z(0)], vec![z(1), z(2)]]);
        let f = skew.functional();
        for p in skew.primitive_rays() {
            assert_eq!(f.eval(&p), z(1));
        }
    }

    #[test]
    fn regularity_examples() {
        assert!(standard(2).is_regular_subcone(&[0, 1]).unwrap());
        assert!(!half().is_regular_subcone(&[0, 1]).unwrap());
        assert!(half().is_regular_subcone(&[0]).unwrap());
        assert!(!klein().is_regular_subcone(&[0, 1]).unwrap());
        assert!(klein().is_regular_subcone(&[2]).unwrap());
        assert!(klein().is_regular_subcone(&[]).is_err());
    }

    #[test]
    fn mld_examples() {
        assert_eq!(standard(2).mld_toric().unwrap(), MldResult::Smooth);
        assert_eq!(
            half().mld_toric().unwrap(),
            MldResult::Singular {
                mld_log: z(1),
                witness: Witness::Point(vec![r(1, 2), r(1, 2)])
            }
        );
        // three residues of value 1; the lexicographically smallest wins
        assert_eq!(
            klein().mld_toric().unwrap(),
            MldResult::Singular {
                mld_log: z(1),
                witness: Witness::Point(vec![z(0), r(1, 2), r(1, 2)])
            }
        );
        assert_eq!(klein().excluded_residues().unwrap(), 0);
    }

    #[test]
    fn reduction_examples() {
        let (q, trace) = half().reduce_to_cyclic().unwrap();
        assert_eq!(q.to_string(), "2:1,1");
        assert!(trace.verified());

        let (q, trace) = klein().reduce_to_cyclic().unwrap();
        assert_eq!(q.to_string(), "2:1,1");
        assert_eq!(trace.support, vec![1, 2]);
        assert_eq!(trace.generator, trace.witness);
        assert_eq!(trace.cone_mld, z(1));

        // the minimum of 1/8(1,5) sits at a non-generator; the group is cyclic
        let q8: QuotientType<i64> = "8:1,5".parse().unwrap();
        let (q, trace) = SimplicialConeData::from_quotient(&q8)
            .unwrap()
            .reduce_to_cyclic()
            .unwrap();
        assert_eq!(q.canonical_form().unwrap(), q8);
        assert_eq!(trace.witness, vec![r(1, 4), r(1, 4)]);
        assert_eq!(trace.reduced_mld, r(1, 2));

        let third = cone(2, &[vec![r(1, 3), r(1, 3)]], vec![unit(2, 0), unit(2, 1)]);
        let (q, trace) = third.reduce_to_cyclic().unwrap();
        assert_eq!(q.to_string(), "3:1,1");
        assert_eq!(trace.reduced_mld, r(2, 3));

        assert_eq!(standard(3).reduce_to_cyclic().unwrap_err(), Error::Smooth);
    }

    #[test]
    fn rejects_bad_cones() {
        let l = LatticeBasis::standard(2);
        assert!(SimplicialConeData::new(l.clone(), vec![unit(2, 0)]).is_err());
        assert!(SimplicialConeData::new(l.clone(), vec![unit(2, 0), vec![z(2), z(0)]]).is_err());
        assert!(SimplicialConeData::new(l, vec![unit(2, 0), vec![r(1, 2), z(1)]]).is_err());
    }

    #[test]
    fn cyclic_oracle_agrees_on_examples() {
        for s in ["5:1,2", "7:1,2,4", "3:1,1", "2:1,1,1", "12:1,5,7"] {
            let q: QuotientType<i64> = s.parse().unwrap();
            let c = SimplicialConeData::from_quotient(&q).unwrap();
            assert_eq!(
                c.mld_toric().unwrap().mld_log(),
                q.mld().unwrap().mld_log(),
                "{s}"
            );
            assert_eq!(c.gorenstein_index(), q.gorenstein_index().unwrap(), "{s}");
        }
    }

    #[test]
    fn normalization_matches_raw_lattice() {
        for s in ["6:2,3", "4:1,2,0", "4:1,2", "10:2,5,1"] {
            let q: QuotientType<i64> = s.parse().unwrap();
            let raw = SimplicialConeData::from_quotient(&q)
                .unwrap()
                .mld_toric()
                .unwrap();
            let (norm, _) = q.normalize().unwrap();
            assert_eq!(raw.mld_log(), norm.mld().unwrap().mld_log(), "{s}");
        }
    }

    #[test]
    fn bigint_cone() {
        let q: QuotientType<BigInt> = "5:1,2".parse().unwrap();
        let c = SimplicialConeData::from_quotient(&q).unwrap();
        assert_eq!(c.mld_toric().unwrap().mld_log().unwrap().to_string(), "3/5");
    }
}
