//! Test oracles that avoid the library's table arithmetic and elimination code.
#![allow(dead_code)]

use mds_census::{Elem, FieldSpec};

/// Carry-less product reduced modulo `poly`.
pub fn clmul(x: u16, y: u16, poly: u32, r: u32) -> u16 {
    let mut acc: u32 = 0;
    for i in 0..16 {
        if (y >> i) & 1 == 1 {
            acc ^= (x as u32) << i;
        }
    }
    for bit in (r..32).rev() {
        if (acc >> bit) & 1 == 1 {
            acc ^= poly << (bit - r);
        }
    }
    acc as u16
}

pub fn omul(f: &FieldSpec, x: Elem, y: Elem) -> Elem {
    Elem(clmul(x.0, y.0, f.poly(), f.degree()))
}

/// Determinant by the permutation expansion (no signs in characteristic 2).
pub fn leibniz_det(f: &FieldSpec, m: &[Vec<Elem>]) -> Elem {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = Elem::ZERO;
    heap_permutations(&mut perm, n, &mut |p| {
        let mut prod = Elem::ONE;
        for (i, &j) in p.iter().enumerate() {
            prod = omul(f, prod, m[i][j]);
        }
        total += prod;
    });
    total
}

fn heap_permutations(a: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k <= 1 {
        visit(a);
        return;
    }
    for i in 0..k - 1 {
        heap_permutations(a, k - 1, visit);
        if k % 2 == 0 {
            a.swap(i, k - 1);
        } else {
            a.swap(0, k - 1);
        }
    }
    heap_permutations(a, k - 1, visit);
}

pub fn omatmul(f: &FieldSpec, a: &[Vec<Elem>], b: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
    let n = a.len();
    let m = b[0].len();
    let mut out = vec![vec![Elem::ZERO; m]; n];
    for i in 0..n {
        for j in 0..m {
            for k in 0..b.len() {
                out[i][j] += omul(f, a[i][k], b[k][j]);
            }
        }
    }
    out
}

/// Minimum of wt(x) + wt(x M) over nonzero x.
fn min_weight(f: &FieldSpec, m: &[Vec<Elem>]) -> usize {
    let n = m.len();
    let q = f.order();
    let mut best = usize::MAX;
    let total = q.pow(n as u32);
    for code in 1..total {
        let mut x = vec![Elem::ZERO; n];
        let mut c = code;
        for xi in x.iter_mut() {
            *xi = Elem((c % q) as u16);
            c /= q;
        }
        let mut w = x.iter().filter(|v| !v.is_zero()).count();
        for j in 0..n {
            let mut s = Elem::ZERO;
            for i in 0..n {
                s += omul(f, x[i], m[i][j]);
            }
            if !s.is_zero() {
                w += 1;
            }
        }
        best = best.min(w);
    }
    best
}

fn transpose(m: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
    (0..m[0].len()).map(|j| m.iter().map(|row| row[j]).collect()).collect()
}

/// MDS iff the code generated by `[I | M]` has minimum distance n + 1.
pub fn code_is_mds(f: &FieldSpec, m: &[Vec<Elem>]) -> bool {
    min_weight(f, m) == m.len() + 1
}

/// NMDS iff `[I | M]` and its dual `[M^T | I]` both have minimum distance n.
pub fn code_is_nmds(f: &FieldSpec, m: &[Vec<Elem>]) -> bool {
    let n = m.len();
    min_weight(f, m) == n && min_weight(f, &transpose(m)) == n
}

/// Whether any 4x4 matrix over GF(4) is MDS, by backtracking over entries
/// with every fully-populated square minor checked as soon as it is complete.
pub fn exists_4x4_mds(f: &FieldSpec) -> bool {
    let mut m = vec![vec![Elem::ZERO; 4]; 4];
    fill(f, &mut m, 0)
}

fn fill(f: &FieldSpec, m: &mut Vec<Vec<Elem>>, pos: usize) -> bool {
    if pos == 16 {
        return true;
    }
    let (i, j) = (pos / 4, pos % 4);
    for v in f.nonzero_elements() {
        m[i][j] = v;
        if minors_ok(f, m, i, j) && fill(f, m, pos + 1) {
            return true;
        }
    }
    m[i][j] = Elem::ZERO;
    false
}

/// Check every square submatrix whose bottom-right corner is (i, j).
fn minors_ok(f: &FieldSpec, m: &[Vec<Elem>], i: usize, j: usize) -> bool {
    for k in 2..=i.min(j) + 1 {
        for rows in subsets_with_last(i, k) {
            for cols in subsets_with_last(j, k) {
                let sub: Vec<Vec<Elem>> = rows.iter().map(|&r| cols.iter().map(|&c| m[r][c]).collect()).collect();
                if leibniz_det(f, &sub).is_zero() {
                    return false;
                }
            }
        }
    }
    true
}

/// k-subsets of 0..=last that contain `last`.
fn subsets_with_last(last: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, last: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k - 1 {
            let mut v = cur.clone();
            v.push(last);
            out.push(v);
            return;
        }
        for x in start..last {
            cur.push(x);
            rec(x + 1, last, k, cur, out);
            cur.pop();
        }
    }
    rec(0, last, k, &mut cur, &mut out);
    out
}

pub fn elems(v: &[u16]) -> Vec<Elem> {
    v.iter().map(|&x| Elem(x)).collect()
}

pub fn field(r: u32) -> FieldSpec {
    FieldSpec::new(r, None).unwrap()
}
