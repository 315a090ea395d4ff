//! Exhaustive census engines and closed-form counts for the 4x4 Hadamard,
//! circulant and involutory classes and the 2x2 classes.
//!
//! Counting unit: ordered first-row tuples for Hadamard and circulant
//! classes (these are in bijection with the matrices), full entry tuples for
//! 2x2 classes, and assembled matrices for the 4x4 involutory census.
//!
//! Brute force is allowed by default up to 2^(4r) = 2^24 candidates (r = 6);
//! r = 7 and r = 8 need `allow_long`. Nothing beyond r = 8 is enumerated.

use std::fmt;
use std::ops::AddAssign;
use std::time::Instant;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, FieldSpec};
use crate::matrix::Matrix;
use crate::parallel::{partitioned_sum, Parallelism};
use crate::predicates::{fast_circulant4_mds, fast_hadamard4_mds, is_nmds, mds4};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassId {
    Hadamard4Mds,
    Hadamard4InvMds,
    Hadamard4NoninvMds,
    Circulant4Mds,
    #[serde(rename = "mds_2x2")]
    Mds2x2,
    #[serde(rename = "inv_mds_2x2")]
    InvMds2x2,
    #[serde(rename = "inv_mds_4x4")]
    InvMds4x4,
    #[serde(rename = "hadamard4_nmds_1zero")]
    Hadamard4Nmds1Zero,
    #[serde(rename = "hadamard4_inv_nmds_1zero")]
    Hadamard4InvNmds1Zero,
    #[serde(rename = "circulant4_nmds_1zero")]
    Circulant4Nmds1Zero,
    #[serde(rename = "circulant4_nmds_1zero_singular")]
    Circulant4Nmds1ZeroSingular,
}

impl ClassId {
    pub const ALL: [ClassId; 11] = [
        ClassId::Hadamard4Mds,
        ClassId::Hadamard4InvMds,
        ClassId::Hadamard4NoninvMds,
        ClassId::Circulant4Mds,
        ClassId::Mds2x2,
        ClassId::InvMds2x2,
        ClassId::InvMds4x4,
        ClassId::Hadamard4Nmds1Zero,
        ClassId::Hadamard4InvNmds1Zero,
        ClassId::Circulant4Nmds1Zero,
        ClassId::Circulant4Nmds1ZeroSingular,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClassId::Hadamard4Mds => "hadamard4_mds",
            ClassId::Hadamard4InvMds => "hadamard4_inv_mds",
            ClassId::Hadamard4NoninvMds => "hadamard4_noninv_mds",
            ClassId::Circulant4Mds => "circulant4_mds",
            ClassId::Mds2x2 => "mds_2x2",
            ClassId::InvMds2x2 => "inv_mds_2x2",
            ClassId::InvMds4x4 => "inv_mds_4x4",
            ClassId::Hadamard4Nmds1Zero => "hadamard4_nmds_1zero",
            ClassId::Hadamard4InvNmds1Zero => "hadamard4_inv_nmds_1zero",
            ClassId::Circulant4Nmds1Zero => "circulant4_nmds_1zero",
            ClassId::Circulant4Nmds1ZeroSingular => "circulant4_nmds_1zero_singular",
        }
    }

    pub fn parse(s: &str) -> Option<ClassId> {
        ClassId::ALL.into_iter().find(|c| c.name() == s)
    }

    pub fn has_formula(self) -> bool {
        formula_count(self, 3).is_ok()
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Brute,
    Formula,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Brute => "brute",
            Method::Formula => "formula",
        })
    }
}

/// Options shared by every census engine.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CensusOptions {
    pub parallelism: Parallelism,
    /// Permit brute force at r = 7, 8 (and the r = 4 involutory 4x4 census).
    pub allow_long: bool,
}

/// One census campaign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusResult {
    pub class_id: ClassId,
    pub r: u32,
    #[serde(with = "hex_poly")]
    pub poly: u32,
    pub method: Method,
    pub count: u64,
    pub elapsed_ms: f64,
    pub partitions: usize,
    /// Structured candidates examined, for the 4x4 involutory census.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub candidates: Option<u64>,
}

pub(crate) mod hex_poly {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(p: &u32, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&format_args!("0x{p:X}"))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u32, D::Error> {
        let s = String::deserialize(d)?;
        crate::field::parse_hex_u32(&s).map_err(serde::de::Error::custom)
    }
}

fn elapsed_ms(start: Instant) -> f64 {
    (start.elapsed().as_secs_f64() * 1e6).round() / 1e3
}

fn make_result(class_id: ClassId, field: &FieldSpec, method: Method, count: u64, start: Instant, partitions: usize) -> CensusResult {
    CensusResult {
        class_id,
        r: field.degree(),
        poly: field.poly(),
        method,
        count,
        elapsed_ms: elapsed_ms(start),
        partitions,
        candidates: None,
    }
}

/// Brute-force budget: r <= 6 always, r <= 8 with `allow_long`.
pub fn check_brute_budget(class: ClassId, r: u32, allow_long: bool) -> Result<()> {
    if class == ClassId::InvMds4x4 {
        return match r {
            0..=3 => Ok(()),
            4 if allow_long => Ok(()),
            4 => Err(Error::BudgetExceeded(
                "the 4x4 involutory census at r = 4 (~1.65e9 candidates) needs --allow-long".into(),
            )),
            _ => Err(Error::BudgetExceeded(format!(
                "the 4x4 involutory census is limited to r <= 4, got r = {r}"
            ))),
        };
    }
    match r {
        0..=6 => Ok(()),
        7 | 8 if allow_long => Ok(()),
        7 | 8 => Err(Error::BudgetExceeded(format!(
            "brute force for {class} at r = {r} enumerates 2^{} candidates; pass --allow-long",
            4 * r
        ))),
        _ => Err(Error::BudgetExceeded(format!("brute force for {class} is limited to r <= 8, got r = {r}"))),
    }
}

// Closed forms. Factors are evaluated in i128 because some are negative for
// small r; every product is then nonnegative (a zero factor appears first).
fn to_count(v: i128) -> u64 {
    u64::try_from(v).expect("closed-form counts are nonnegative and fit in 64 bits for r <= 16")
}

fn q_of(r: u32) -> i128 {
    1i128 << r
}

/// (2^r-1)(2^r-2)(2^r-4)(2^r-7)
pub fn hadamard4_mds_formula(r: u32) -> u64 {
    let q = q_of(r);
    to_count((q - 1) * (q - 2) * (q - 4) * (q - 7))
}

/// (2^r-2)(2^r-4)(2^r-7)
pub fn hadamard4_inv_mds_formula(r: u32) -> u64 {
    let q = q_of(r);
    to_count((q - 2) * (q - 4) * (q - 7))
}

/// (2^r-2)^2(2^r-4)(2^r-7)
pub fn hadamard4_noninv_mds_formula(r: u32) -> u64 {
    let q = q_of(r);
    to_count((q - 2) * (q - 2) * (q - 4) * (q - 7))
}

/// (2^r-1)^3 (2^r-2): number of 2x2 MDS matrices.
pub fn mds_2x2_formula(r: u32) -> u64 {
    let q = q_of(r);
    to_count((q - 1).pow(3) * (q - 2))
}

/// (2^r-1)^3 (2^r-3): the 2x2 count as printed in the lemma statement, which
/// its own proof and brute force both contradict. Kept for arbitration reports.
pub(crate) fn mds_2x2_misprinted_formula(r: u32) -> u64 {
    let q = q_of(r);
    to_count((q - 1).pow(3) * (q - 3))
}

/// (2^r-1)(2^r-2)
pub fn inv_mds_2x2_formula(r: u32) -> u64 {
    let q = q_of(r);
    to_count((q - 1) * (q - 2))
}

/// 4 (2^r-1)(2^(2r) - 3 * 2^r + 3)
pub fn hadamard4_nmds_1zero_formula(r: u32) -> u64 {
    let q = q_of(r);
    to_count(4 * (q - 1) * (q * q - 3 * q + 3))
}

/// 4 (2^(2r) - 3 * 2^r + 3)
pub fn hadamard4_inv_nmds_1zero_formula(r: u32) -> u64 {
    let q = q_of(r);
    to_count(4 * (q * q - 3 * q + 3))
}

/// 4 (2^r-1)^3
pub fn circulant4_nmds_1zero_formula(r: u32) -> u64 {
    let q = q_of(r);
    to_count(4 * (q - 1).pow(3))
}

/// 2^r (2^r-1)^3 (2^r-2)^2 (2^r-3)(2^r-4): upper bound on the number of 4x4
/// involutory MDS matrices. Zero for r = 2.
pub fn upper_bound_involutory4(r: u32) -> BigUint {
    let q = BigUint::from(1u8) << r;
    if r < 3 {
        // the (2^r - 4) factor vanishes at r = 2
        return BigUint::from(0u8);
    }
    let f = |k: u32| &q - BigUint::from(k);
    &q * f(1).pow(3) * f(2).pow(2) * f(3) * f(4)
}

/// Closed-form count for `class`, if one exists.
pub fn formula_count(class: ClassId, r: u32) -> Result<u64> {
    Ok(match class {
        ClassId::Hadamard4Mds => hadamard4_mds_formula(r),
        ClassId::Hadamard4InvMds => hadamard4_inv_mds_formula(r),
        ClassId::Hadamard4NoninvMds => hadamard4_noninv_mds_formula(r),
        ClassId::Mds2x2 => mds_2x2_formula(r),
        ClassId::InvMds2x2 => inv_mds_2x2_formula(r),
        ClassId::Hadamard4Nmds1Zero => hadamard4_nmds_1zero_formula(r),
        ClassId::Hadamard4InvNmds1Zero => hadamard4_inv_nmds_1zero_formula(r),
        ClassId::Circulant4Nmds1Zero => circulant4_nmds_1zero_formula(r),
        ClassId::Circulant4Mds | ClassId::InvMds4x4 | ClassId::Circulant4Nmds1ZeroSingular => {
            return Err(Error::NoClosedForm(class.name()))
        }
    })
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
struct Tally {
    total: u64,
    involutory: u64,
}

impl AddAssign for Tally {
    fn add_assign(&mut self, o: Tally) {
        self.total += o.total;
        self.involutory += o.involutory;
    }
}

/// Per-value histogram that merges by elementwise addition.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
struct Histogram(Vec<u64>);

impl AddAssign for Histogram {
    fn add_assign(&mut self, o: Histogram) {
        if self.0.len() < o.0.len() {
            self.0.resize(o.0.len(), 0);
        }
        for (a, b) in self.0.iter_mut().zip(o.0) {
            *a += b;
        }
    }
}

#[inline(always)]
fn el(i: usize) -> Elem {
    Elem(i as u16)
}

fn hadamard4_tally(field: &FieldSpec, par: Parallelism) -> (Tally, usize) {
    let q = field.order();
    partitioned_sum(q, par, |ia| {
        let a = el(ia);
        let mut t = Tally::default();
        for b in field.elements() {
            for c in field.elements() {
                for d in field.elements() {
                    if fast_hadamard4_mds(field, a, b, c, d) {
                        t.total += 1;
                        if a + b + c + d == Elem::ONE {
                            t.involutory += 1;
                        }
                    }
                }
            }
        }
        t
    })
}

/// Hadamard-MDS first rows grouped by their row sum; index = sum value.
pub fn hadamard4_mds_by_row_sum(field: &FieldSpec, par: Parallelism) -> Vec<u64> {
    let q = field.order();
    let (h, _) = partitioned_sum(q, par, |ia| {
        let a = el(ia);
        let mut hist = vec![0u64; q];
        for b in field.elements() {
            for c in field.elements() {
                for d in field.elements() {
                    if fast_hadamard4_mds(field, a, b, c, d) {
                        hist[(a + b + c + d).index()] += 1;
                    }
                }
            }
        }
        Histogram(hist)
    });
    let mut v = h.0;
    v.resize(q, 0);
    v
}

pub fn census_hadamard4_mds(field: &FieldSpec, method: Method, opts: CensusOptions) -> Result<CensusResult> {
    let start = Instant::now();
    let class = ClassId::Hadamard4Mds;
    match method {
        Method::Formula => Ok(make_result(class, field, method, hadamard4_mds_formula(field.degree()), start, 1)),
        Method::Brute => {
            check_brute_budget(class, field.degree(), opts.allow_long)?;
            let (t, parts) = hadamard4_tally(field, opts.parallelism);
            Ok(make_result(class, field, method, t.total, start, parts))
        }
    }
}

/// Involutory Hadamard MDS count together with its non-involutory complement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvolutorySplit {
    pub involutory: CensusResult,
    pub non_involutory: CensusResult,
}

pub fn census_hadamard4_involutory_mds(field: &FieldSpec, method: Method, opts: CensusOptions) -> Result<InvolutorySplit> {
    let start = Instant::now();
    let r = field.degree();
    let (inv, noninv, parts) = match method {
        Method::Formula => (hadamard4_inv_mds_formula(r), hadamard4_noninv_mds_formula(r), 1),
        Method::Brute => {
            check_brute_budget(ClassId::Hadamard4InvMds, r, opts.allow_long)?;
            let (t, parts) = hadamard4_tally(field, opts.parallelism);
            (t.involutory, t.total - t.involutory, parts)
        }
    };
    Ok(InvolutorySplit {
        involutory: make_result(ClassId::Hadamard4InvMds, field, method, inv, start, parts),
        non_involutory: make_result(ClassId::Hadamard4NoninvMds, field, method, noninv, start, parts),
    })
}

pub fn census_circulant4_mds(field: &FieldSpec, opts: CensusOptions) -> Result<CensusResult> {
    let start = Instant::now();
    let class = ClassId::Circulant4Mds;
    check_brute_budget(class, field.degree(), opts.allow_long)?;
    let (count, parts) = partitioned_sum(field.order(), opts.parallelism, |ia| {
        let a = el(ia);
        let mut n = 0u64;
        for b in field.elements() {
            for c in field.elements() {
                for d in field.elements() {
                    n += u64::from(fast_circulant4_mds(field, a, b, c, d));
                }
            }
        }
        n
    });
    Ok(make_result(class, field, Method::Brute, count, start, parts))
}

/// `[[a, b], [c, d]]` is MDS: all entries nonzero and ad + bc != 0.
#[inline]
pub fn mds_2x2(f: &FieldSpec, a: Elem, b: Elem, c: Elem, d: Elem) -> bool {
    !(a.is_zero() || b.is_zero() || c.is_zero() || d.is_zero()) && f.mul(a, d) != f.mul(b, c)
}

/// `[[a, b], [c, d]]^2 = I`.
#[inline]
pub fn involutory_2x2(f: &FieldSpec, a: Elem, b: Elem, c: Elem, d: Elem) -> bool {
    let bc = f.mul(b, c);
    f.square(a) + bc == Elem::ONE
        && f.square(d) + bc == Elem::ONE
        && f.mul(b, a + d).is_zero()
        && f.mul(c, a + d).is_zero()
}

pub fn census_2x2(field: &FieldSpec, involutory_only: bool, method: Method, opts: CensusOptions) -> Result<CensusResult> {
    let start = Instant::now();
    let class = if involutory_only { ClassId::InvMds2x2 } else { ClassId::Mds2x2 };
    match method {
        Method::Formula => Ok(make_result(class, field, method, formula_count(class, field.degree())?, start, 1)),
        Method::Brute => {
            check_brute_budget(class, field.degree(), opts.allow_long)?;
            let (count, parts) = partitioned_sum(field.order(), opts.parallelism, |ia| {
                let a = el(ia);
                let mut n = 0u64;
                for b in field.elements() {
                    for c in field.elements() {
                        for d in field.elements() {
                            if mds_2x2(field, a, b, c, d) && (!involutory_only || involutory_2x2(field, a, b, c, d)) {
                                n += 1;
                            }
                        }
                    }
                }
                n
            });
            Ok(make_result(class, field, method, count, start, parts))
        }
    }
}

/// Row-major 4x4 array.
pub type Mat4 = [Elem; 16];

#[inline]
fn mul2(f: &FieldSpec, x: [Elem; 4], y: [Elem; 4]) -> [Elem; 4] {
    [
        f.mul(x[0], y[0]) + f.mul(x[1], y[2]),
        f.mul(x[0], y[1]) + f.mul(x[1], y[3]),
        f.mul(x[2], y[0]) + f.mul(x[3], y[2]),
        f.mul(x[2], y[1]) + f.mul(x[3], y[3]),
    ]
}

/// `[[A1, (I + A1^2) A3^-1], [A3, A3 A1 A3^-1]]` for 2x2 blocks given row-major.
pub fn assemble_involutory4(f: &FieldSpec, a1: [Elem; 4], a3: [Elem; 4]) -> Option<Mat4> {
    let det3 = f.mul(a3[0], a3[3]) + f.mul(a3[1], a3[2]);
    let dinv = f.inv(det3).ok()?;
    let a3_inv = [f.mul(dinv, a3[3]), f.mul(dinv, a3[1]), f.mul(dinv, a3[2]), f.mul(dinv, a3[0])];
    let mut sq = mul2(f, a1, a1);
    sq[0] += Elem::ONE;
    sq[3] += Elem::ONE;
    let a2 = mul2(f, sq, a3_inv);
    let a4 = mul2(f, mul2(f, a3, a1), a3_inv);
    Some([
        a1[0], a1[1], a2[0], a2[1], //
        a1[2], a1[3], a2[2], a2[3], //
        a3[0], a3[1], a4[0], a4[1], //
        a3[2], a3[3], a4[2], a4[3],
    ])
}

/// `m * m == I` for a row-major 4x4 array.
pub fn involutory4(f: &FieldSpec, m: &Mat4) -> bool {
    for i in 0..4 {
        for j in 0..4 {
            let mut s = Elem::ZERO;
            for k in 0..4 {
                s += f.mul(m[i * 4 + k], m[k * 4 + j]);
            }
            if s != if i == j { Elem::ONE } else { Elem::ZERO } {
                return false;
            }
        }
    }
    true
}

#[inline]
fn proportional(f: &FieldSpec, x0: Elem, x1: Elem, y0: Elem, y1: Elem) -> bool {
    f.mul(x0, y1) == f.mul(x1, y0)
}

/// Scan the structured candidates whose A1 top-left entry is the `ia`-th
/// nonzero element. Calls `hit` for every candidate that is MDS and
/// involutory; returns (candidates, hits).
fn involutory4_scan(f: &FieldSpec, ia: usize, hit: &mut dyn FnMut(&Mat4)) -> (u64, u64) {
    let a = el(ia + 1);
    let mut candidates = 0u64;
    let mut hits = 0u64;
    for b in f.nonzero_elements() {
        for c in f.nonzero_elements() {
            for d in f.nonzero_elements() {
                // A1: 2x2 MDS, not involutory
                if !mds_2x2(f, a, b, c, d) || involutory_2x2(f, a, b, c, d) {
                    continue;
                }
                for e in f.nonzero_elements() {
                    for g in f.nonzero_elements() {
                        // first row of A3 independent of both rows of A1
                        if proportional(f, e, g, a, b) || proportional(f, e, g, c, d) {
                            continue;
                        }
                        for h in f.nonzero_elements() {
                            for k in f.nonzero_elements() {
                                if proportional(f, h, k, a, b) || proportional(f, h, k, c, d) || proportional(f, h, k, e, g) {
                                    continue;
                                }
                                candidates += 1;
                                let m = assemble_involutory4(f, [a, b, c, d], [e, g, h, k]).expect("A3 is nonsingular");
                                if mds4(f, &m) && involutory4(f, &m) {
                                    hits += 1;
                                    hit(&m);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    (candidates, hits)
}

#[derive(Debug, Default, Clone, Copy)]
struct Pair(u64, u64);

impl AddAssign for Pair {
    fn add_assign(&mut self, o: Pair) {
        self.0 += o.0;
        self.1 += o.1;
    }
}

/// Count all 4x4 involutory MDS matrices by enumerating the block structure
/// `[[A1, (I + A1^2) A3^-1], [A3, A3 A1 A3^-1]]` with A1 a non-involutory 2x2
/// MDS matrix and A3 a 2x2 MDS matrix whose rows are independent of the rows
/// of A1. `candidates` reports how many structured matrices were examined.
pub fn census_involutory4_mds(field: &FieldSpec, opts: CensusOptions) -> Result<CensusResult> {
    let start = Instant::now();
    let class = ClassId::InvMds4x4;
    check_brute_budget(class, field.degree(), opts.allow_long)?;
    let (p, parts) = partitioned_sum(field.group_order(), opts.parallelism, |ia| {
        let (c, h) = involutory4_scan(field, ia, &mut |_| {});
        Pair(c, h)
    });
    let mut res = make_result(class, field, Method::Brute, p.1, start, parts);
    res.candidates = Some(p.0);
    Ok(res)
}

/// Every 4x4 involutory MDS matrix over `field`, in enumeration order.
pub fn involutory4_mds_matrices<'f>(field: &'f FieldSpec, opts: CensusOptions) -> Result<Vec<Matrix<'f>>> {
    check_brute_budget(ClassId::InvMds4x4, field.degree(), opts.allow_long)?;
    let mut out = Vec::new();
    for ia in 0..field.group_order() {
        involutory4_scan(field, ia, &mut |m| out.push(Matrix::from_raw(field, 4, 4, m.to_vec())));
    }
    Ok(out)
}

fn exactly_one_zero(v: [Elem; 4]) -> bool {
    v.iter().filter(|x| x.is_zero()).count() == 1
}

pub fn census_hadamard4_nmds_1zero(field: &FieldSpec, involutory_only: bool, method: Method, opts: CensusOptions) -> Result<CensusResult> {
    let start = Instant::now();
    let class = if involutory_only { ClassId::Hadamard4InvNmds1Zero } else { ClassId::Hadamard4Nmds1Zero };
    if method == Method::Formula {
        return Ok(make_result(class, field, method, formula_count(class, field.degree())?, start, 1));
    }
    check_brute_budget(class, field.degree(), opts.allow_long)?;
    let (count, parts) = partitioned_sum(field.order(), opts.parallelism, |ia| {
        let a = el(ia);
        let mut n = 0u64;
        for b in field.elements() {
            for c in field.elements() {
                for d in field.elements() {
                    let row = [a, b, c, d];
                    if !exactly_one_zero(row) || (involutory_only && a + b + c + d != Elem::ONE) {
                        continue;
                    }
                    let m = Matrix::from_raw(field, 4, 4, hadamard4_entries(row).to_vec());
                    if is_nmds(&m).expect("square").holds {
                        n += 1;
                    }
                }
            }
        }
        n
    });
    Ok(make_result(class, field, method, count, start, parts))
}

pub fn census_circulant4_nmds_1zero(field: &FieldSpec, singular_only: bool, method: Method, opts: CensusOptions) -> Result<CensusResult> {
    let start = Instant::now();
    let class = if singular_only { ClassId::Circulant4Nmds1ZeroSingular } else { ClassId::Circulant4Nmds1Zero };
    if method == Method::Formula {
        return Ok(make_result(class, field, method, formula_count(class, field.degree())?, start, 1));
    }
    check_brute_budget(class, field.degree(), opts.allow_long)?;
    let (count, parts) = partitioned_sum(field.order(), opts.parallelism, |ia| {
        let a = el(ia);
        let mut n = 0u64;
        for b in field.elements() {
            for c in field.elements() {
                for d in field.elements() {
                    let row = [a, b, c, d];
                    if !exactly_one_zero(row) {
                        continue;
                    }
                    let m = Matrix::circulant(field, &row).expect("valid row");
                    if singular_only && !m.det().expect("square").is_zero() {
                        continue;
                    }
                    if is_nmds(&m).expect("square").holds {
                        n += 1;
                    }
                }
            }
        }
        n
    });
    Ok(make_result(class, field, method, count, start, parts))
}

fn hadamard4_entries(row: [Elem; 4]) -> Mat4 {
    let mut m = [Elem::ZERO; 16];
    for i in 0..4 {
        for j in 0..4 {
            m[i * 4 + j] = row[i ^ j];
        }
    }
    m
}

/// Run one class with one method. For `hadamard4_inv_mds` and
/// `hadamard4_noninv_mds` only the requested half of the split is returned.
pub fn run_census(class: ClassId, field: &FieldSpec, method: Method, opts: CensusOptions) -> Result<CensusResult> {
    if method == Method::Formula {
        formula_count(class, field.degree())?;
    }
    match class {
        ClassId::Hadamard4Mds => census_hadamard4_mds(field, method, opts),
        ClassId::Hadamard4InvMds => Ok(census_hadamard4_involutory_mds(field, method, opts)?.involutory),
        ClassId::Hadamard4NoninvMds => Ok(census_hadamard4_involutory_mds(field, method, opts)?.non_involutory),
        ClassId::Circulant4Mds => census_circulant4_mds(field, opts),
        ClassId::Mds2x2 => census_2x2(field, false, method, opts),
        ClassId::InvMds2x2 => census_2x2(field, true, method, opts),
        ClassId::InvMds4x4 => census_involutory4_mds(field, opts),
        ClassId::Hadamard4Nmds1Zero => census_hadamard4_nmds_1zero(field, false, method, opts),
        ClassId::Hadamard4InvNmds1Zero => census_hadamard4_nmds_1zero(field, true, method, opts),
        ClassId::Circulant4Nmds1Zero => census_circulant4_nmds_1zero(field, false, method, opts),
        ClassId::Circulant4Nmds1ZeroSingular => census_circulant4_nmds_1zero(field, true, method, opts),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::predicates::{is_involutory, is_mds};

    fn gf(r: u32) -> FieldSpec {
        FieldSpec::new(r, None).unwrap()
    }

    #[test]
    fn formula_values() {
        assert_eq!(hadamard4_mds_formula(4), 22680);
        assert_eq!(hadamard4_mds_formula(8), 4064187960);
        assert_eq!(hadamard4_inv_mds_formula(5), 21000);
        assert_eq!(hadamard4_inv_mds_formula(8), 15937992);
        assert_eq!(hadamard4_mds_formula(2), 0);
        assert_eq!(mds_2x2_formula(3), 2058);
        assert_eq!(mds_2x2_misprinted_formula(3), 1715);
        assert_eq!(inv_mds_2x2_formula(3), 42);
        assert_eq!(hadamard4_nmds_1zero_formula(3), 1204);
        assert_eq!(hadamard4_inv_nmds_1zero_formula(3), 172);
        assert_eq!(circulant4_nmds_1zero_formula(3), 1372);
        assert_eq!(hadamard4_nmds_1zero_formula(2), 84);
        assert_eq!(circulant4_nmds_1zero_formula(2), 108);
        // largest supported degree still fits in u64
        assert!(hadamard4_mds_formula(16) > 0);
    }

    #[test]
    fn upper_bound_values() {
        assert_eq!(upper_bound_involutory4(3), BigUint::from(1975680u32));
        assert_eq!(upper_bound_involutory4(2), BigUint::from(0u32));
        // second evaluation order: (bound for A1) * (bound for A3)
        let q = 16u128;
        let a1 = (q - 1).pow(3) * (q - 2) - (q - 1) * (q - 2);
        assert_eq!(a1, q * (q - 1) * (q - 2).pow(2));
        let a3 = (q - 1).pow(2) * (q - 3) * (q - 4);
        assert_eq!(upper_bound_involutory4(4), BigUint::from(a1 * a3));
        assert_eq!(upper_bound_involutory4(4), BigUint::from(16u128 * 15u128.pow(3) * 14 * 14 * 13 * 12));
    }

    #[test]
    fn budget_policy() {
        assert!(check_brute_budget(ClassId::Circulant4Mds, 6, false).is_ok());
        assert!(matches!(check_brute_budget(ClassId::Circulant4Mds, 7, false), Err(Error::BudgetExceeded(_))));
        assert!(check_brute_budget(ClassId::Circulant4Mds, 8, true).is_ok());
        assert!(check_brute_budget(ClassId::Circulant4Mds, 9, true).is_err());
        assert!(check_brute_budget(ClassId::InvMds4x4, 3, false).is_ok());
        assert!(check_brute_budget(ClassId::InvMds4x4, 4, false).is_err());
        assert!(check_brute_budget(ClassId::InvMds4x4, 4, true).is_ok());
        let f = gf(7);
        assert!(matches!(
            census_hadamard4_mds(&f, Method::Brute, CensusOptions::default()),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn no_formula_classes() {
        for c in [ClassId::Circulant4Mds, ClassId::InvMds4x4, ClassId::Circulant4Nmds1ZeroSingular] {
            assert!(!c.has_formula());
            assert_eq!(run_census(c, &gf(3), Method::Formula, CensusOptions::default()).unwrap_err(), Error::NoClosedForm(c.name()));
        }
    }

    #[test]
    fn class_names_roundtrip() {
        for c in ClassId::ALL {
            assert_eq!(ClassId::parse(c.name()), Some(c));
            assert_eq!(serde_json::to_value(c).unwrap(), serde_json::Value::String(c.name().into()));
        }
    }

    #[test]
    fn small_brute_counts() {
        let o = CensusOptions::default();
        let f3 = gf(3);
        assert_eq!(census_hadamard4_mds(&f3, Method::Brute, o).unwrap().count, 168);
        let split = census_hadamard4_involutory_mds(&f3, Method::Brute, o).unwrap();
        assert_eq!((split.involutory.count, split.non_involutory.count), (24, 144));
        assert_eq!(census_circulant4_mds(&f3, o).unwrap().count, 0);
        assert_eq!(census_2x2(&f3, false, Method::Brute, o).unwrap().count, 2058);
        assert_eq!(census_2x2(&f3, true, Method::Brute, o).unwrap().count, 42);
        assert_eq!(census_2x2(&gf(2), false, Method::Brute, o).unwrap().count, 54);
    }

    #[test]
    fn inline_2x2_predicates_match_generic() {
        let f = gf(3);
        for a in f.elements() {
            for b in f.elements() {
                for c in f.elements() {
                    for d in f.elements() {
                        let m = Matrix::from_rows(&f, &[vec![a, b], vec![c, d]]).unwrap();
                        assert_eq!(mds_2x2(&f, a, b, c, d), is_mds(&m).unwrap().holds);
                        assert_eq!(involutory_2x2(&f, a, b, c, d), is_involutory(&m).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn assembled_candidates_are_involutory() {
        let f = gf(3);
        let a1 = [Elem(2), Elem(3), Elem(4), Elem(7)];
        let a3 = [Elem(1), Elem(5), Elem(6), Elem(2)];
        let m = assemble_involutory4(&f, a1, a3).unwrap();
        assert!(involutory4(&f, &m));
        let mm = Matrix::new(&f, 4, 4, m.to_vec()).unwrap();
        assert!(is_involutory(&mm).unwrap());
    }

    #[test]
    fn result_json_fields() {
        let r = census_hadamard4_mds(&gf(3), Method::Formula, CensusOptions::default()).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["class_id"], "hadamard4_mds");
        assert_eq!(v["poly"], "0xB");
        assert_eq!(v["method"], "formula");
        assert_eq!(v["count"], 168);
        assert!(v.get("candidates").is_none());
    }
}
