use num_complex::Complex64;

use super::{trace_product, CMatrix, HermitianOperator, I};
use crate::error::{Error, Result};

const ORTHO_TOL: f64 = 1e-10;

/// `n^2` Hermitian matrices with `Tr(lambda_mu lambda_nu) = 2 delta_{mu nu}`,
/// element 0 equal to `sqrt(2/n) I`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthogonalBasis {
    dim: usize,
    elements: Vec<HermitianOperator>,
}

impl OrthogonalBasis {
    pub fn new(elements: Vec<HermitianOperator>) -> Result<Self> {
        let len = elements.len();
        let dim = (len as f64).sqrt().round() as usize;
        if dim < 1 || dim * dim != len {
            return Err(Error::BasisInvariant(format!("{len} elements is not a perfect square")));
        }
        let basis = Self { dim, elements };
        basis.validate()?;
        Ok(basis)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.dim;
        for (mu, e) in self.elements.iter().enumerate() {
            if e.dim() != n {
                return Err(Error::BasisInvariant(format!("element {mu} has dimension {}", e.dim())));
            }
        }
        let id = HermitianOperator::identity(n).scale((2.0 / n as f64).sqrt());
        if self.elements[0].max_abs_diff(&id) > ORTHO_TOL {
            return Err(Error::BasisInvariant("element 0 is not sqrt(2/n) I".into()));
        }
        for mu in 0..n * n {
            for nu in mu..n * n {
                let g = trace_product(self.elements[mu].matrix(), self.elements[nu].matrix());
                let want = if mu == nu { 2.0 } else { 0.0 };
                if (g - Complex64::new(want, 0.0)).norm() > ORTHO_TOL {
                    return Err(Error::BasisInvariant(format!(
                        "Tr(l{mu} l{nu}) = {g}, expected {want}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of elements, `n^2`.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[HermitianOperator] {
        &self.elements
    }

    pub fn element(&self, mu: usize) -> &HermitianOperator {
        &self.elements[mu]
    }
}

fn unit(n: usize, entries: &[(usize, usize, Complex64)]) -> HermitianOperator {
    let mut m = CMatrix::zeros(n, n);
    for &(i, j, z) in entries {
        m[(i, j)] = z;
    }
    HermitianOperator::symmetrized(m)
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn sym_pair(n: usize, j: usize, k: usize) -> HermitianOperator {
    unit(n, &[(j, k, re(1.0)), (k, j, re(1.0))])
}

fn antisym_pair(n: usize, j: usize, k: usize) -> HermitianOperator {
    unit(n, &[(j, k, -I), (k, j, I)])
}

/// `sqrt(2 / (l (l+1))) diag(1, .., 1, -l, 0, .., 0)` with `l` ones.
fn diag_element(n: usize, l: usize) -> HermitianOperator {
    let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
    let mut d = vec![0.0; n];
    d.iter_mut().take(l).for_each(|x| *x = norm);
    d[l] = -(l as f64) * norm;
    HermitianOperator::diagonal(&d)
}

/// Orthogonal basis of Hermitian `n x n` matrices.
///
/// Index 0 is `sqrt(2/n) I`. For `n = 2` the remaining elements are
/// `[[0, i], [-i, 0]]`, `[[0, 1], [1, 0]]`, `diag(1, -1)` (note the sign and
/// order of the first two, which make `s1 s2 = i s3`). For `n = 3` they are
/// the Gell-Mann matrices `lambda_1 .. lambda_8` in the usual order. For
/// larger `n`: symmetric off-diagonal pairs, antisymmetric pairs, then the
/// diagonal elements.
pub fn gellmann_basis(n: usize) -> Result<OrthogonalBasis> {
    if n < 2 {
        return Err(Error::InvalidDimension(n, 2));
    }
    let mut elements = vec![HermitianOperator::identity(n).scale((2.0 / n as f64).sqrt())];
    match n {
        2 => {
            elements.push(unit(2, &[(0, 1, I), (1, 0, -I)]));
            elements.push(sym_pair(2, 0, 1));
            elements.push(diag_element(2, 1));
        }
        3 => {
            elements.push(sym_pair(3, 0, 1));
            elements.push(antisym_pair(3, 0, 1));
            elements.push(diag_element(3, 1));
            elements.push(sym_pair(3, 0, 2));
            elements.push(antisym_pair(3, 0, 2));
            elements.push(sym_pair(3, 1, 2));
            elements.push(antisym_pair(3, 1, 2));
            elements.push(diag_element(3, 2));
        }
        _ => {
            let pairs: Vec<(usize, usize)> =
                (0..n).flat_map(|j| (j + 1..n).map(move |k| (j, k))).collect();
            elements.extend(pairs.iter().map(|&(j, k)| sym_pair(n, j, k)));
            elements.extend(pairs.iter().map(|&(j, k)| antisym_pair(n, j, k)));
            elements.extend((1..n).map(|l| diag_element(n, l)));
        }
    }
    OrthogonalBasis::new(elements)
}

/// Antisymmetric `C` and symmetric `d` symbols of an orthogonal basis:
///
/// `[l_mu, l_nu]   = 2i C_{mu nu rho} l_rho`
/// `[l_mu, l_nu]_+ = 2 sqrt(2/n) delta_{mu nu} l_0 + 2 d_{mu nu rho} l_rho`
#[derive(Clone, Debug)]
pub struct StructureConstants {
    dim: usize,
    c: Vec<f64>,
    d: Vec<f64>,
    basis: OrthogonalBasis,
}

impl StructureConstants {
    fn index(&self, mu: usize, nu: usize, rho: usize) -> usize {
        let m = self.dim * self.dim;
        (mu * m + nu) * m + rho
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &OrthogonalBasis {
        &self.basis
    }

    pub fn c(&self, mu: usize, nu: usize, rho: usize) -> f64 {
        self.c[self.index(mu, nu, rho)]
    }

    pub fn d(&self, mu: usize, nu: usize, rho: usize) -> f64 {
        self.d[self.index(mu, nu, rho)]
    }

    /// Coefficient of `l_0` carried explicitly by the anticommutator of a
    /// basis element with itself.
    pub fn identity_term(&self) -> f64 {
        (2.0 / self.dim as f64).sqrt()
    }

    /// `l_mu l_nu` rebuilt as `i C l + sqrt(2/n) delta l_0 + d l`.
    pub fn reconstruct_product(&self, mu: usize, nu: usize) -> CMatrix {
        let n = self.dim;
        let mut acc = CMatrix::zeros(n, n);
        for rho in 0..n * n {
            let coeff = I * self.c(mu, nu, rho) + re(self.d(mu, nu, rho));
            acc += self.basis.element(rho).matrix() * coeff;
        }
        if mu == nu {
            acc += self.basis.element(0).matrix() * re(self.identity_term());
        }
        acc
    }

    /// Entries with `|C| + |d| > threshold`, as `(mu, nu, rho, C, d)`.
    pub fn nonzero_entries(&self, threshold: f64) -> Vec<(usize, usize, usize, f64, f64)> {
        let m = self.dim * self.dim;
        let mut out = Vec::new();
        for mu in 0..m {
            for nu in 0..m {
                for rho in 0..m {
                    let (c, d) = (self.c(mu, nu, rho), self.d(mu, nu, rho));
                    if c.abs() + d.abs() > threshold {
                        out.push((mu, nu, rho, c, d));
                    }
                }
            }
        }
        out
    }
}

pub fn structure_constants(basis: &OrthogonalBasis) -> Result<StructureConstants> {
    basis.validate()?;
    let n = basis.dim();
    let m = n * n;
    let id_term = (2.0 / n as f64).sqrt();
    let mut c = vec![0.0; m * m * m];
    let mut d = vec![0.0; m * m * m];
    for mu in 0..m {
        for nu in 0..m {
            let p = basis.element(mu).product(basis.element(nu));
            let q = basis.element(nu).product(basis.element(mu));
            let comm = &p - &q;
            let anti = &p + &q;
            for rho in 0..m {
                let l = basis.element(rho).matrix();
                let idx = (mu * m + nu) * m + rho;
                c[idx] = (trace_product(&comm, l) / (I * 4.0)).re;
                let mut dv = 0.25 * trace_product(&anti, l).re;
                if mu == nu && rho == 0 {
                    dv -= id_term;
                }
                d[idx] = dv;
            }
        }
    }
    Ok(StructureConstants { dim: n, c, d, basis: basis.clone() })
}

/// The published qutrit `C` and `d` tables, expanded over the index
/// permutations they list.
pub mod qutrit_table {
    const HALF: f64 = 0.5;

    fn sqrt3() -> f64 {
        3f64.sqrt()
    }

    /// Totally antisymmetric `C_{abc}` for `a, b, c` in `1..=8`.
    pub fn c(a: usize, b: usize, cc: usize) -> f64 {
        let base: [((usize, usize, usize), f64); 9] = [
            ((1, 2, 3), 1.0),
            ((4, 5, 8), sqrt3() / 2.0),
            ((6, 7, 8), sqrt3() / 2.0),
            ((1, 4, 7), HALF),
            ((1, 5, 6), -HALF),
            ((2, 4, 6), HALF),
            ((2, 5, 7), HALF),
            ((3, 4, 5), HALF),
            ((3, 6, 7), -HALF),
        ];
        for ((x, y, z), v) in base {
            let perms = [
                ((x, y, z), v),
                ((y, z, x), v),
                ((z, x, y), v),
                ((y, x, z), -v),
                ((x, z, y), -v),
                ((z, y, x), -v),
            ];
            for (p, s) in perms {
                if p == (a, b, cc) {
                    return s;
                }
            }
        }
        0.0
    }

    /// `d_{abc}` for indices in `1..=8` as listed (including their permutations).
    pub fn d(a: usize, b: usize, c: usize) -> f64 {
        let s3 = sqrt3();
        let mut entries: Vec<((usize, usize, usize), f64)> = vec![((8, 8, 8), -1.0 / s3)];
        let perm3 = |x: usize, j: usize, v: f64, out: &mut Vec<((usize, usize, usize), f64)>| {
            out.push(((x, j, j), v));
            out.push(((j, j, x), v));
            out.push(((j, x, j), v));
        };
        for j in 1..=3 {
            perm3(8, j, 1.0 / s3, &mut entries);
        }
        for j in 4..=7 {
            perm3(8, j, -1.0 / (2.0 * s3), &mut entries);
        }
        for j in [4, 5] {
            perm3(3, j, HALF, &mut entries);
        }
        for j in [6, 7] {
            perm3(3, j, -HALF, &mut entries);
        }
        let listed: [(usize, usize, usize, f64); 24] = [
            (1, 4, 6, HALF), (1, 5, 7, HALF), (1, 6, 4, HALF), (1, 7, 5, HALF),
            (2, 4, 7, -HALF), (2, 5, 6, HALF), (2, 6, 5, HALF), (2, 7, 4, -HALF),
            (4, 1, 6, HALF), (4, 2, 7, -HALF), (4, 6, 1, HALF), (4, 7, 2, -HALF),
            (5, 1, 7, HALF), (5, 2, 6, HALF), (5, 6, 2, HALF), (5, 7, 1, HALF),
            (6, 1, 4, HALF), (6, 2, 5, HALF), (6, 4, 1, HALF), (6, 5, 2, HALF),
            (7, 1, 5, HALF), (7, 2, 4, -HALF), (7, 5, 1, HALF), (7, 4, 2, -HALF),
        ];
        entries.extend(listed.iter().map(|&(x, y, z, v)| ((x, y, z), v)));
        entries
            .iter()
            .find(|(k, _)| *k == (a, b, c))
            .map(|(_, v)| *v)
            .unwrap_or(0.0)
    }

    /// Listed `d` entries carrying a 0 index (`d_{jj0} = -d_{0jj} = -d_{j0j} = sqrt(2/3)`).
    pub fn d_zero_index(a: usize, b: usize, c: usize) -> Option<f64> {
        let v = (2.0f64 / 3.0).sqrt();
        match (a, b, c) {
            (j, k, 0) if j == k && j >= 1 => Some(v),
            (0, j, k) if j == k && j >= 1 => Some(-v),
            (j, 0, k) if j == k && j >= 1 => Some(-v),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_small_dimension() {
        assert_eq!(gellmann_basis(1).unwrap_err(), Error::InvalidDimension(1, 2));
        assert!(gellmann_basis(0).is_err());
    }

    #[test]
    fn qubit_basis_matches_listing() {
        let b = gellmann_basis(2).unwrap();
        let z = c(0.0, 0.0);
        let expect = [
            [c(1.0, 0.0), z, z, c(1.0, 0.0)],
            [z, c(0.0, 1.0), c(0.0, -1.0), z],
            [z, c(1.0, 0.0), c(1.0, 0.0), z],
            [c(1.0, 0.0), z, z, c(-1.0, 0.0)],
        ];
        for (mu, e) in expect.iter().enumerate() {
            let m = CMatrix::from_row_slice(2, 2, e);
            assert_eq!(b.element(mu).matrix(), &m, "sigma_{mu}");
        }
        // s1 s2 = i s3
        let p = b.element(1).product(b.element(2));
        assert!((p - b.element(3).matrix() * I).norm() < 1e-15);
    }

    #[test]
    fn qutrit_basis_diagonal_elements() {
        let b = gellmann_basis(3).unwrap();
        let s = (2.0f64 / 3.0).sqrt();
        assert!(b.element(0).max_abs_diff(&HermitianOperator::diagonal(&[s, s, s])) < 1e-15);
        assert_eq!(b.element(3), &HermitianOperator::diagonal(&[1.0, -1.0, 0.0]));
        let r = 1.0 / 3f64.sqrt();
        assert!(b.element(8).max_abs_diff(&HermitianOperator::diagonal(&[r, r, -2.0 * r])) < 1e-15);
        assert_eq!(b.element(2).matrix()[(0, 1)], c(0.0, -1.0));
        assert_eq!(b.element(7).matrix()[(2, 1)], c(0.0, 1.0));
    }

    #[test]
    fn orthogonality_all_dimensions() {
        for n in 2..=10 {
            let b = gellmann_basis(n).unwrap();
            assert_eq!(b.len(), n * n);
            for mu in 0..n * n {
                for nu in 0..n * n {
                    let g = trace_product(b.element(mu).matrix(), b.element(nu).matrix());
                    let want = if mu == nu { 2.0 } else { 0.0 };
                    assert!((g.re - want).abs() < 1e-12 && g.im.abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn non_orthogonal_basis_rejected() {
        let mut els = gellmann_basis(2).unwrap().elements().to_vec();
        els[2] = els[2].add(&els[3]);
        assert!(matches!(OrthogonalBasis::new(els), Err(Error::BasisInvariant(_))));
    }

    #[test]
    fn qubit_structure_constants_are_levi_civita() {
        // oracle: Tr([s_a, s_b] s_c) / 4i on hand-written matrices
        let z = c(0.0, 0.0);
        let s = [
            CMatrix::from_row_slice(2, 2, &[z, c(0.0, 1.0), c(0.0, -1.0), z]),
            CMatrix::from_row_slice(2, 2, &[z, c(1.0, 0.0), c(1.0, 0.0), z]),
            CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), z, z, c(-1.0, 0.0)]),
        ];
        let sc = structure_constants(&gellmann_basis(2).unwrap()).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                for cc in 0..3 {
                    let comm = &s[a] * &s[b] - &s[b] * &s[a];
                    let oracle = ((comm * &s[cc]).trace() / c(0.0, 4.0)).re;
                    let eps = match (a, b, cc) {
                        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
                        (1, 0, 2) | (0, 2, 1) | (2, 1, 0) => -1.0,
                        _ => 0.0,
                    };
                    assert!((oracle - eps).abs() < 1e-15);
                    assert!((sc.c(a + 1, b + 1, cc + 1) - eps).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn qutrit_table_values() {
        let sc = structure_constants(&gellmann_basis(3).unwrap()).unwrap();
        let h = 3f64.sqrt() / 2.0;
        assert!((sc.c(1, 2, 3) - 1.0).abs() < 1e-12);
        assert!((sc.c(4, 5, 8) - h).abs() < 1e-12);
        assert!((sc.c(6, 7, 8) - h).abs() < 1e-12);
        assert!((sc.c(1, 5, 6) + 0.5).abs() < 1e-12);
        assert!((sc.d(8, 8, 8) + 1.0 / 3f64.sqrt()).abs() < 1e-12);
        assert!((sc.d(1, 4, 6) - 0.5).abs() < 1e-12);
        assert!((sc.d(2, 4, 7) + 0.5).abs() < 1e-12);
        for a in 1..9 {
            for b in 1..9 {
                for cc in 1..9 {
                    assert!((sc.c(a, b, cc) - qutrit_table::c(a, b, cc)).abs() < 1e-12, "C{a}{b}{cc}");
                    assert!((sc.d(a, b, cc) - qutrit_table::d(a, b, cc)).abs() < 1e-12, "d{a}{b}{cc}");
                }
            }
        }
    }

    #[test]
    fn c_is_totally_antisymmetric_on_traceless_sector() {
        for n in 2..=5 {
            let sc = structure_constants(&gellmann_basis(n).unwrap()).unwrap();
            let m = n * n;
            for a in 1..m {
                for b in 1..m {
                    for cc in 1..m {
                        let v = sc.c(a, b, cc);
                        assert_eq!(v, -sc.c(b, a, cc));
                        assert!((v - sc.c(b, cc, a)).abs() < 1e-12);
                        assert!((v + sc.c(a, cc, b)).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn products_reconstruct_from_constants() {
        for n in 2..=5 {
            let sc = structure_constants(&gellmann_basis(n).unwrap()).unwrap();
            let b = sc.basis();
            for mu in 0..n * n {
                for nu in 0..n * n {
                    let direct = b.element(mu).product(b.element(nu));
                    let err = (sc.reconstruct_product(mu, nu) - direct).norm();
                    assert!(err < 1e-12, "n={n} mu={mu} nu={nu} err={err}");
                }
            }
        }
    }
}
