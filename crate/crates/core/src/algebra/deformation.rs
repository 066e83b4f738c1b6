use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Real antisymmetric deformation matrix of the twisted torus algebra.
///
/// Entry `xi[k][j]` is the phase exponent in `u_k u_j = e^{2πi xi_kj} u_j u_k`
/// (axes are 1-based in the API, 0-based in storage).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeformationMatrix {
    n: usize,
    entries: Vec<Vec<f64>>,
}

const ANTISYMMETRY_TOL: f64 = 1e-12;

impl DeformationMatrix {
    pub fn new(entries: Vec<Vec<f64>>) -> Result<Self> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::InvalidDeformation("empty matrix".into()));
        }
        for row in &entries {
            if row.len() != n {
                return Err(Error::InvalidDeformation(format!(
                    "row length {} in a {n}x{n} matrix",
                    row.len()
                )));
            }
        }
        for k in 0..n {
            for j in 0..n {
                let s = entries[k][j] + entries[j][k];
                if s.abs() > ANTISYMMETRY_TOL {
                    return Err(Error::InvalidDeformation(format!(
                        "not antisymmetric at ({},{}): {} + {} = {s}",
                        k + 1,
                        j + 1,
                        entries[k][j],
                        entries[j][k]
                    )));
                }
            }
        }
        Ok(Self { n, entries })
    }

    /// Zero matrix: the commutative torus.
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            entries: vec![vec![0.0; n]; n],
        }
    }

    /// n = 2 matrix with the single independent entry `xi_12 = theta`.
    pub fn two_dim(theta: f64) -> Self {
        Self {
            n: 2,
            entries: vec![vec![0.0, theta], vec![-theta, 0.0]],
        }
    }

    /// Antisymmetric matrix from the strictly upper-triangular entries,
    /// row-major: (1,2), (1,3), ..., (1,n), (2,3), ...
    pub fn from_upper(n: usize, upper: &[f64]) -> Result<Self> {
        if upper.len() != n * (n - 1) / 2 {
            return Err(Error::InvalidDeformation(format!(
                "expected {} upper entries for n={n}, got {}",
                n * (n - 1) / 2,
                upper.len()
            )));
        }
        let mut entries = vec![vec![0.0; n]; n];
        let mut it = upper.iter();
        for k in 0..n {
            for j in (k + 1)..n {
                let v = *it.next().unwrap();
                entries[k][j] = v;
                entries[j][k] = -v;
            }
        }
        Ok(Self { n, entries })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// 0-based access.
    pub fn entry(&self, k: usize, j: usize) -> f64 {
        self.entries[k][j]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.entries
    }

    /// Extend to dimension n+1 with a prescribed last row (the new
    /// generator's phases against the old ones); `None` extends by zeros.
    pub fn extended(&self, fiber_row: Option<&[f64]>) -> Result<Self> {
        let n = self.n;
        let row = match fiber_row {
            Some(r) => {
                if r.len() != n {
                    return Err(Error::InvalidDeformation(format!(
                        "fiber row length {} for base dimension {n}",
                        r.len()
                    )));
                }
                r.to_vec()
            }
            None => vec![0.0; n],
        };
        let mut entries = vec![vec![0.0; n + 1]; n + 1];
        for k in 0..n {
            for j in 0..n {
                entries[k][j] = self.entries[k][j];
            }
        }
        for j in 0..n {
            entries[n][j] = row[j];
            entries[j][n] = -row[j];
        }
        Self::new(entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_antisymmetric() {
        let err = DeformationMatrix::new(vec![vec![0.0, 0.3], vec![0.3, 0.0]]);
        assert!(err.is_err());
    }

    #[test]
    fn rejects_nonzero_diagonal() {
        let err = DeformationMatrix::new(vec![vec![0.1, 0.0], vec![0.0, 0.0]]);
        assert!(err.is_err());
    }

    #[test]
    fn builds_from_upper() {
        let xi = DeformationMatrix::from_upper(3, &[0.25, 0.5, -0.125]).unwrap();
        assert_eq!(xi.entry(0, 1), 0.25);
        assert_eq!(xi.entry(1, 0), -0.25);
        assert_eq!(xi.entry(0, 2), 0.5);
        assert_eq!(xi.entry(1, 2), -0.125);
    }

    #[test]
    fn extension_defaults_to_zero_fiber_row() {
        let xi = DeformationMatrix::two_dim(0.25);
        let ext = xi.extended(None).unwrap();
        assert_eq!(ext.dim(), 3);
        assert_eq!(ext.entry(0, 1), 0.25);
        assert_eq!(ext.entry(2, 0), 0.0);
        assert_eq!(ext.entry(2, 1), 0.0);
        let ext2 = xi.extended(Some(&[0.5, -0.75])).unwrap();
        assert_eq!(ext2.entry(2, 0), 0.5);
        assert_eq!(ext2.entry(0, 2), -0.5);
        assert_eq!(ext2.entry(2, 1), -0.75);
    }
}
