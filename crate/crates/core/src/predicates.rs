//! Exact decision procedures for MDS, NMDS, involutory and orthogonal
//! matrices, plus constant-time tests for 4x4 Hadamard and circulant MDS
//! matrices used by the census engines.
//!
//! MDS is decided from the submatrix definition: every square submatrix is
//! nonsingular. NMDS is decided by the rank characterization: a non-MDS
//! matrix of order n >= 2 is NMDS iff for every 1 <= g <= n-1 each g x (g+1)
//! and (g+1) x g submatrix has rank g. (The code-theoretic definition, that
//! `[I | M]` generates a near-MDS code, is equivalent and not implemented
//! separately.)

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::field::{Elem, FieldSpec};
use crate::matrix::{det_in_place, first_combination, next_combination, rank_in_place, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Property {
    Mds,
    Nmds,
    Involutory,
    Orthogonal,
    Nonsingular,
}

impl Property {
    pub const ALL: [Property; 5] = [
        Property::Mds,
        Property::Nmds,
        Property::Involutory,
        Property::Orthogonal,
        Property::Nonsingular,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Mds => "mds",
            Property::Nmds => "nmds",
            Property::Involutory => "involutory",
            Property::Orthogonal => "orthogonal",
            Property::Nonsingular => "nonsingular",
        }
    }

    pub fn parse(s: &str) -> Option<Property> {
        Property::ALL.into_iter().find(|p| p.name() == s.trim().to_ascii_lowercase())
    }
}

/// Row and column index sets of a falsifying submatrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredicateReport {
    pub property: Property,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

impl PredicateReport {
    fn pass(property: Property) -> Self {
        PredicateReport { property, holds: true, witness: None, detail: None }
    }

    fn fail(property: Property, witness: Option<Witness>, detail: impl Into<String>) -> Self {
        PredicateReport { property, holds: false, witness, detail: Some(detail.into()) }
    }
}

/// First singular square submatrix in (size, rows, cols) lexicographic order.
fn first_singular_minor(m: &Matrix<'_>) -> Option<Witness> {
    let n = m.nrows();
    let f = m.field();

    if let Some(pos) = m.entries().iter().position(|x| x.is_zero()) {
        return Some(Witness { rows: vec![pos / n], cols: vec![pos % n] });
    }

    let mut rows = Vec::with_capacity(n);
    let mut cols = Vec::with_capacity(n);
    let mut buf = Vec::with_capacity(n * n);
    for k in 2..=n {
        first_combination(&mut rows, k);
        loop {
            first_combination(&mut cols, k);
            loop {
                buf.clear();
                for &i in &rows {
                    for &j in &cols {
                        buf.push(m.get(i, j));
                    }
                }
                if det_in_place(f, &mut buf, k).is_zero() {
                    return Some(Witness { rows: rows.clone(), cols: cols.clone() });
                }
                if !next_combination(&mut cols, n) {
                    break;
                }
            }
            if !next_combination(&mut rows, n) {
                break;
            }
        }
    }
    None
}

pub fn is_mds(m: &Matrix<'_>) -> Result<PredicateReport> {
    m.order()?;
    Ok(match first_singular_minor(m) {
        None => PredicateReport::pass(Property::Mds),
        Some(w) => {
            let k = w.rows.len();
            PredicateReport::fail(Property::Mds, Some(w), format!("singular {k}x{k} submatrix"))
        }
    })
}

/// Whether `m` is MDS, without locating the smallest witness when a cheaper
/// certificate of singularity exists.
fn is_mds_quick(m: &Matrix<'_>) -> bool {
    if m.entries().iter().any(|x| x.is_zero()) {
        return false;
    }
    if m.det().map_or(true, |d| d.is_zero()) {
        return false;
    }
    first_singular_minor(m).is_none()
}

/// A `g x (g+1)` (or, with `transposed`, `(g+1) x g`) submatrix of rank < g.
fn rank_deficient(m: &Matrix<'_>, g: usize, transposed: bool) -> Option<Witness> {
    let n = m.nrows();
    let f = m.field();
    let (nr, nc) = if transposed { (g + 1, g) } else { (g, g + 1) };
    let mut rows = Vec::with_capacity(nr);
    let mut cols = Vec::with_capacity(nc);
    let mut buf = Vec::with_capacity(nr * nc);
    first_combination(&mut rows, nr);
    loop {
        first_combination(&mut cols, nc);
        loop {
            buf.clear();
            for &i in &rows {
                for &j in &cols {
                    buf.push(m.get(i, j));
                }
            }
            if rank_in_place(f, &mut buf, nr, nc) < g {
                return Some(Witness { rows: rows.clone(), cols: cols.clone() });
            }
            if !next_combination(&mut cols, n) {
                break;
            }
        }
        if !next_combination(&mut rows, n) {
            break;
        }
    }
    None
}

/// NMDS test. The rank conditions are checked cheapest-obstruction first:
/// g = 1 (zero pattern), then g = n-1 down to 2.
pub fn is_nmds(m: &Matrix<'_>) -> Result<PredicateReport> {
    let n = m.order()?;
    if n < 2 {
        return Err(crate::error::Error::OrderTooSmall(n));
    }
    if is_mds_quick(m) {
        let all: Vec<usize> = (0..n).collect();
        return Ok(PredicateReport::fail(
            Property::Nmds,
            Some(Witness { rows: all.clone(), cols: all }),
            "matrix is MDS",
        ));
    }
    let order = std::iter::once(1).chain((2..n).rev());
    for g in order {
        for transposed in [false, true] {
            if let Some(w) = rank_deficient(m, g, transposed) {
                let (a, b) = (w.rows.len(), w.cols.len());
                return Ok(PredicateReport::fail(
                    Property::Nmds,
                    Some(w),
                    format!("{a}x{b} submatrix has rank < {g}"),
                ));
            }
        }
    }
    Ok(PredicateReport::pass(Property::Nmds))
}

pub fn is_involutory(m: &Matrix<'_>) -> Result<bool> {
    m.order()?;
    Ok(m.matmul(m)?.is_identity())
}

pub fn is_orthogonal(m: &Matrix<'_>) -> Result<bool> {
    m.order()?;
    Ok(m.matmul(&m.transpose())?.is_identity())
}

pub fn is_nonsingular(m: &Matrix<'_>) -> Result<PredicateReport> {
    let n = m.order()?;
    Ok(if m.det()?.is_zero() {
        let all: Vec<usize> = (0..n).collect();
        PredicateReport::fail(
            Property::Nonsingular,
            Some(Witness { rows: all.clone(), cols: all }),
            "determinant is zero",
        )
    } else {
        PredicateReport::pass(Property::Nonsingular)
    })
}

/// Evaluate one property as a report; boolean-only properties carry no witness.
pub fn check_property(m: &Matrix<'_>, property: Property) -> Result<PredicateReport> {
    match property {
        Property::Mds => is_mds(m),
        Property::Nmds => is_nmds(m),
        Property::Nonsingular => is_nonsingular(m),
        Property::Involutory => Ok(if is_involutory(m)? {
            PredicateReport::pass(property)
        } else {
            PredicateReport::fail(property, None, "M^2 != I")
        }),
        Property::Orthogonal => Ok(if is_orthogonal(m)? {
            PredicateReport::pass(property)
        } else {
            PredicateReport::fail(property, None, "M M^T != I")
        }),
    }
}

/// `Had(a, b, c, d)` is MDS iff each of
/// a, b, c, d, a+b, c+d, a+c, b+d, a+d, b+c, a+b+c+d, bc+ad, ac+bd, ab+cd
/// is nonzero.
#[inline]
pub fn fast_hadamard4_mds(f: &FieldSpec, a: Elem, b: Elem, c: Elem, d: Elem) -> bool {
    if a.is_zero() || b.is_zero() || c.is_zero() || d.is_zero() {
        return false;
    }
    if a == b || c == d || a == c || b == d || a == d || b == c {
        return false;
    }
    if (a + b + c + d).is_zero() {
        return false;
    }
    f.mul(b, c) != f.mul(a, d) && f.mul(a, c) != f.mul(b, d) && f.mul(a, b) != f.mul(c, d)
}

/// The six conditions on `(a, b, c, d)` equivalent to `Had(a, b, c, d)` being MDS:
/// nonzero, pairwise distinct, and d outside {a^-1 bc, a b^-1 c, a b c^-1, a+b+c}.
pub fn hadamard4_lemma_conditions(f: &FieldSpec, a: Elem, b: Elem, c: Elem, d: Elem) -> bool {
    if [a, b, c, d].iter().any(|x| x.is_zero()) {
        return false;
    }
    let v = [a, b, c, d];
    for i in 0..4 {
        for j in i + 1..4 {
            if v[i] == v[j] {
                return false;
            }
        }
    }
    let inv = |x: Elem| f.inv(x).expect("nonzero");
    let bc = f.mul(b, c);
    d != f.mul(inv(a), bc) && d != f.mul(f.mul(a, inv(b)), c) && d != f.mul(f.mul(a, b), inv(c)) && d != a + b + c
}

/// `Circ(a, b, c, d)` is MDS iff each of the 17 factors of its minors is
/// nonzero. Linear factors first, then quadratic, then cubic.
#[inline]
pub fn fast_circulant4_mds(f: &FieldSpec, a: Elem, b: Elem, c: Elem, d: Elem) -> bool {
    if a.is_zero() || b.is_zero() || c.is_zero() || d.is_zero() {
        return false;
    }
    if a == c || b == d || (a + b + c + d).is_zero() {
        return false;
    }
    let (a2, b2, c2, d2) = (f.square(a), f.square(b), f.square(c), f.square(d));
    let (ab, ac, ad, bc, bd, cd) = (f.mul(a, b), f.mul(a, c), f.mul(a, d), f.mul(b, c), f.mul(b, d), f.mul(c, d));
    if ab == cd || b2 == ac || c2 == bd || bc == ad || a2 == bd || ac == d2 {
        return false;
    }
    // a^2 b + b c^2 + b^2 d + d^3
    let t1 = f.mul(a2, b) + f.mul(b, c2) + f.mul(b2, d) + f.mul(d2, d);
    // a^3 + b^2 c + a c^2 + c d^2
    let t2 = f.mul(a2, a) + f.mul(b2, c) + f.mul(a, c2) + f.mul(c, d2);
    // a b^2 + a^2 c + c^3 + a d^2
    let t3 = f.mul(a, b2) + f.mul(a2, c) + f.mul(c2, c) + f.mul(a, d2);
    // b^3 + a^2 d + c^2 d + b d^2
    let t4 = f.mul(b2, b) + f.mul(a2, d) + f.mul(c2, d) + f.mul(b, d2);
    !(t1.is_zero() || t2.is_zero() || t3.is_zero() || t4.is_zero())
}

/// Pairwise distinctness of a Hadamard first row, necessary for MDS.
pub fn hadamard_mds_distinctness(first_row: &[Elem]) -> bool {
    let mut v = first_row.to_vec();
    v.sort_unstable();
    v.windows(2).all(|w| w[0] != w[1])
}

#[inline]
fn det3(f: &FieldSpec, m: &[Elem; 16], r: [usize; 3], c: [usize; 3]) -> Elem {
    let e = |i: usize, j: usize| m[r[i] * 4 + c[j]];
    let minor = |i0: usize, i1: usize, j0: usize, j1: usize| f.mul(e(i0, j0), e(i1, j1)) + f.mul(e(i0, j1), e(i1, j0));
    f.mul(e(0, 0), minor(1, 2, 1, 2)) + f.mul(e(0, 1), minor(1, 2, 0, 2)) + f.mul(e(0, 2), minor(1, 2, 0, 1))
}

/// MDS test for a row-major 4x4 array, by explicit minors. Equivalent to
/// [`is_mds`] on the same matrix.
pub fn mds4(f: &FieldSpec, m: &[Elem; 16]) -> bool {
    if m.iter().any(|x| x.is_zero()) {
        return false;
    }
    const PAIRS: [[usize; 2]; 6] = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];
    const TRIPLES: [[usize; 3]; 4] = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
    // 2x2 minors of rows {0,1} and {2,3}, kept for the Laplace expansion
    let mut top = [Elem::ZERO; 6];
    let mut bottom = [Elem::ZERO; 6];
    for (ri, r) in PAIRS.iter().enumerate() {
        for (ci, c) in PAIRS.iter().enumerate() {
            let d = f.mul(m[r[0] * 4 + c[0]], m[r[1] * 4 + c[1]]) + f.mul(m[r[0] * 4 + c[1]], m[r[1] * 4 + c[0]]);
            if d.is_zero() {
                return false;
            }
            if ri == 0 {
                top[ci] = d;
            } else if ri == 5 {
                bottom[ci] = d;
            }
        }
    }
    for r in TRIPLES {
        for c in TRIPLES {
            if det3(f, m, r, c).is_zero() {
                return false;
            }
        }
    }
    // Laplace along rows {0,1}: sum over column pairs S of minor(S) * minor(complement of S)
    let det: Elem = (0..6).map(|k| f.mul(top[k], bottom[5 - k])).sum();
    !det.is_zero()
}
