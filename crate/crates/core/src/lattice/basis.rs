use num::rational::Ratio;
use num::{One, Signed, Zero};

use super::matrix::{Matrix, RationalMatrix};
use super::snf::smith_normal_form;
use crate::error::{Error, Result};
use crate::scalar::{common_denominator, frac, gcd_all, Int};

/// A full-rank lattice in `Q^n`, the integer span of the columns of `basis`.
#[derive(Clone)]
pub struct LatticeBasis<T> {
    basis: RationalMatrix<T>,
    inverse: RationalMatrix<T>,
}

impl<T: Int> PartialEq for LatticeBasis<T> {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis
    }
}

impl<T: Int> Eq for LatticeBasis<T> {}

impl<T: Int> std::fmt::Debug for LatticeBasis<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_tuple("LatticeBasis").field(&self.basis).finish()
    }
}

impl<T: Int> LatticeBasis<T> {
    /// Lattice spanned by exactly `n` linearly independent vectors of length `n`.
    pub fn new(columns: &[Vec<Ratio<T>>]) -> Result<Self> {
        let n = columns.len();
        if n == 0 {
            return Err(Error::InvalidLattice(
                "a lattice needs at least one basis vector".into(),
            ));
        }
        if let Some(c) = columns.iter().find(|c| c.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: c.len(),
            });
        }
        let basis = Matrix::from_columns(columns)?;
        let inverse = basis
            .inverse()
            .map_err(|_| Error::InvalidLattice("basis vectors are linearly dependent".into()))?;
        Ok(LatticeBasis { basis, inverse })
    }

    pub fn from_integer_columns(columns: &[Vec<T>]) -> Result<Self> {
        let cols: Vec<Vec<Ratio<T>>> = columns
            .iter()
            .map(|c| c.iter().cloned().map(Ratio::from_integer).collect())
            .collect();
        Self::new(&cols)
    }

    /// The standard lattice `Z^n`.
    pub fn standard(n: usize) -> Self {
        let basis = Matrix::identity(n);
        LatticeBasis {
            inverse: basis.clone(),
            basis,
        }
    }

    /// Reduces an arbitrary spanning set of a full-rank lattice in `Q^dim`
    /// to a basis.
    pub fn from_generators(dim: usize, generators: &[Vec<Ratio<T>>]) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: g.len(),
            });
        }
        let all: Vec<Ratio<T>> = generators.iter().flatten().cloned().collect();
        let den = common_denominator(&all);
        let scale = Ratio::from_integer(den.clone());
        let int_cols: Vec<Vec<T>> = generators
            .iter()
            .map(|g| g.iter().map(|x| (x * &scale).to_integer()).collect())
            .collect();
        if int_cols.is_empty() {
            return Err(Error::InvalidLattice("no generators given".into()));
        }
        let g = Matrix::from_columns(&int_cols)?;
        let snf = smith_normal_form(&g);
        if snf.rank() < dim {
            return Err(Error::InvalidLattice(format!(
                "generators span a rank {} sublattice of Q^{dim}",
                snf.rank()
            )));
        }
        // G V = U^-1 S, so the first `dim` columns of U^-1 S are a basis.
        let u_inv = snf.u.to_rational().inverse()?;
        let d = snf.invariant_factors();
        let columns: Vec<Vec<Ratio<T>>> = (0..dim)
            .map(|j| {
                let factor = Ratio::new(d[j].clone(), den.clone());
                (0..dim)
                    .map(|i| u_inv[(i, j)].clone() * factor.clone())
                    .collect()
            })
            .collect();
        Self::new(&columns)
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn matrix(&self) -> &RationalMatrix<T> {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Ratio<T>>> {
        self.basis.columns()
    }

    /// Covolume `|det B|`.
    pub fn covolume(&self) -> Ratio<T> {
        self.basis.determinant().abs()
    }

    /// Coordinates of `v` with respect to the basis.
    pub fn coordinates(&self, v: &[Ratio<T>]) -> Result<Vec<Ratio<T>>> {
        self.check_dim(v)?;
        Ok(self.inverse.mul_vec(v))
    }

    /// The point with the given basis coordinates.
    pub fn point(&self, coords: &[Ratio<T>]) -> Vec<Ratio<T>> {
        self.basis.mul_vec(coords)
    }

    pub fn contains(&self, v: &[Ratio<T>]) -> Result<bool> {
        Ok(self.coordinates(v)?.iter().all(Ratio::is_integer))
    }

    fn check_dim(&self, v: &[Ratio<T>]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: v.len(),
            });
        }
        Ok(())
    }
}

/// True iff `v` is an integer combination of the basis of `lattice`.
pub fn lattice_member<T: Int>(v: &[Ratio<T>], lattice: &LatticeBasis<T>) -> Result<bool> {
    lattice.contains(v)
}

/// The nonzero lattice point on the ray through `v` closest to the origin.
///
/// Computed from the denominators of `v` in lattice coordinates: if those
/// coordinates are `w / D` with `w` integral, the answer has coordinates
/// `w / gcd(w)`.
pub fn primitive_generator<T: Int>(
    v: &[Ratio<T>],
    lattice: &LatticeBasis<T>,
) -> Result<Vec<Ratio<T>>> {
    let coords = lattice.coordinates(v)?;
    if coords.iter().all(Zero::is_zero) {
        return Err(Error::InvalidLattice("the zero vector spans no ray".into()));
    }
    let den = Ratio::from_integer(common_denominator(&coords));
    let scaled: Vec<T> = coords.iter().map(|c| (c * &den).to_integer()).collect();
    let g = gcd_all(&scaled);
    let primitive: Vec<Ratio<T>> = scaled
        .into_iter()
        .map(|x| Ratio::from_integer(x / g.clone()))
        .collect();
    Ok(lattice.point(&primitive))
}

/// One representative of each coset of `sub` in `lattice`, reduced into the
/// half-open fundamental parallelepiped of `sub` and sorted lexicographically.
pub fn enumerate_residues<T: Int>(
    lattice: &LatticeBasis<T>,
    sub: &LatticeBasis<T>,
) -> Result<Vec<Vec<Ratio<T>>>> {
    let n = lattice.dim();
    if sub.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: sub.dim(),
        });
    }
    // columns of `sub` in lattice coordinates
    let rel = &lattice.inverse * &sub.basis;
    let rel = rel.to_integer().ok_or_else(|| {
        Error::InvalidLattice("sub-lattice is not contained in the lattice".into())
    })?;
    let snf = smith_normal_form(&rel);
    let d = snf.invariant_factors();
    let u_inv = snf.u.to_rational().inverse()?;

    let mut out = Vec::new();
    let mut y: Vec<T> = vec![T::zero(); n];
    loop {
        let x = u_inv.mul_vec(
            &y.iter()
                .cloned()
                .map(Ratio::from_integer)
                .collect::<Vec<_>>(),
        );
        let ambient = lattice.point(&x);
        let reduced: Vec<Ratio<T>> = sub.coordinates(&ambient)?.iter().map(frac).collect();
        out.push(sub.point(&reduced));

        // odometer over 0 <= y_i < d_i
        let mut i = 0;
        while i < n {
            y[i] = y[i].clone() + T::one();
            if y[i] < d[i] {
                break;
            }
            y[i] = T::zero();
            i += 1;
        }
        if i == n {
            break;
        }
    }
    out.sort();
    Ok(out)
}

/// `[lattice : sub]` computed from covolumes.
pub fn index<T: Int>(lattice: &LatticeBasis<T>, sub: &LatticeBasis<T>) -> Result<T> {
    let ratio = sub.covolume() / lattice.covolume();
    if !ratio.is_integer() || ratio < Ratio::one() {
        return Err(Error::InvalidLattice(
            "sub-lattice is not contained in the lattice".into(),
        ));
    }
    Ok(ratio.to_integer())
}
