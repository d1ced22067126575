use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use super::algebraic::{isolate_closed, AlgebraicNumber};
use super::intpoly::IntPoly;
use super::{constraints, SymbolicError};
use crate::ring::{parse_rational, DPolynomial, Sign};

pub const REGION_VERSION: u32 = 1;

/// Closed interval of `d` values searched for feasibility.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Domain {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Domain {
    pub fn new(lo: BigRational, hi: BigRational) -> Result<Self, SymbolicError> {
        if lo > hi {
            return Err(SymbolicError::InvalidArgument(format!("empty domain [{lo}, {hi}]")));
        }
        Ok(Domain { lo, hi })
    }

    /// Parse `lo:hi`.
    pub fn parse(s: &str) -> Result<Self, SymbolicError> {
        let bad = || SymbolicError::InvalidArgument(format!("domain must look like lo:hi, got {s:?}"));
        let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
        let lo = parse_rational(lo.trim()).map_err(|_| bad())?;
        let hi = parse_rational(hi.trim()).map_err(|_| bad())?;
        Domain::new(lo, hi)
    }
}

impl Default for Domain {
    fn default() -> Self {
        Domain { lo: BigRational::from_integer(0.into()), hi: BigRational::from_integer(4.into()) }
    }
}

/// A region endpoint (or isolated point) with the constraints vanishing there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Endpoint {
    pub value: AlgebraicNumber,
    /// Every `t` whose constraint vanishes at this point, ascending.
    pub binding: Vec<usize>,
    /// Whether the defining polynomial is known to be irreducible.
    pub certified_minimal: bool,
}

impl Endpoint {
    /// Short key used in the binding map: the exact value for rationals, a
    /// 12-digit decimal otherwise.
    pub fn label(&self) -> String {
        match self.value.as_rational() {
            Some(r) => r.to_string(),
            None => format!("{:.12}", self.value.approx_f64()),
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.value.to_json();
        v["label"] = json!(self.label());
        if !self.value.is_exact() {
            v["certified_minimal"] = json!(self.certified_minimal);
        }
        v
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value.as_rational() {
            Some(r) => write!(f, "{r}"),
            None => write!(f, "root of {} ≈ {}", self.value.polynomial(), self.label()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionInterval {
    pub lo: Endpoint,
    pub hi: Endpoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapStatus {
    /// The region contains the whole closed gap.
    Covered,
    /// The region meets the open gap without covering it.
    Partial,
    /// The region misses the open gap entirely.
    Excluded,
}

/// `{d in domain : p_t(d) >= 0 for t = 1..N}` split into its nondegenerate
/// closed intervals and the isolated points left over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibleRegion {
    pub constraint_order: usize,
    pub domain: Domain,
    pub intervals: Vec<RegionInterval>,
    pub isolated_points: Vec<Endpoint>,
}

struct Point {
    value: AlgebraicNumber,
    sources: Vec<usize>,
}

fn insert_point(points: &mut Vec<Point>, mut value: AlgebraicNumber, t: usize) {
    let (mut lo, mut hi) = (0, points.len());
    while lo < hi {
        let mid = (lo + hi) / 2;
        match value.cmp_refining(&mut points[mid].value) {
            Ordering::Less => hi = mid,
            Ordering::Greater => lo = mid + 1,
            Ordering::Equal => {
                if !points[mid].sources.contains(&t) {
                    points[mid].sources.push(t);
                }
                return;
            }
        }
    }
    points.insert(lo, Point { value, sources: vec![t] });
}

/// Roots of `p` in `[lo, hi]`, each carrying the square-free part of `p` with
/// its rational roots divided out (keeps later gcds cheap).
fn constraint_roots(p: &IntPoly, lo: &BigRational, hi: &BigRational) -> Vec<AlgebraicNumber> {
    let sqf = p.square_free();
    let roots = isolate_closed(&sqf, lo, hi);
    let mut deflated = sqf.clone();
    for r in roots.iter().filter_map(AlgebraicNumber::as_rational) {
        deflated = deflated.div_exact(&IntPoly::linear_root(r)).expect("rational root divides");
    }
    let deflated = deflated.primitive();
    roots
        .into_iter()
        .map(|r| match r.as_rational() {
            Some(_) => r,
            // a linear factor vanishing outside [lo, hi] keeps the sign change
            None => AlgebraicNumber::from_parts(deflated.clone(), r.lo().clone(), r.hi().clone()),
        })
        .collect()
}

/// A rational strictly between `a < b`.
fn sample_between(a: &mut AlgebraicNumber, b: &mut AlgebraicNumber) -> BigRational {
    loop {
        if a.hi() < b.lo() {
            return (a.hi() + b.lo()) / BigInt::from(2);
        }
        if a.hi() == b.lo() && !a.is_exact() && !b.is_exact() {
            return a.hi().clone();
        }
        a.refine();
        b.refine();
    }
}

fn negative_at(constraints: &[IntPoly], x: &BigRational) -> Vec<usize> {
    constraints
        .iter()
        .enumerate()
        .filter(|(_, p)| p.sign_at(x) == Sign::Negative)
        .map(|(i, _)| i + 1)
        .collect()
}

fn make_endpoint(point: &Point, polys: &[DPolynomial]) -> Endpoint {
    let mut value = point.value.clone();
    let mut binding = point.sources.clone();
    binding.sort_unstable();
    let vanishing: Vec<DPolynomial> = binding.iter().map(|&t| polys[t - 1].clone()).collect();
    let certified_minimal = value.simplify(&vanishing);
    // narrow enough that the decimal label is exact to the printed digits
    value.refine_to_width(&BigRational::new(BigInt::from(1), BigInt::from(1u64) << 64));
    Endpoint { value, binding, certified_minimal }
}

/// Intersect the feasible sets of the first `order` sign-adjusted constraints
/// within `domain`, exactly.
pub fn feasible_region(order: usize, domain: &Domain) -> Result<FeasibleRegion, SymbolicError> {
    if order == 0 {
        return Err(SymbolicError::InvalidArgument("constraint order must be >= 1".into()));
    }
    let polys = constraints(order)?;
    region_from_constraints(order, &polys, domain)
}

pub(crate) fn region_from_constraints(
    order: usize,
    polys: &[DPolynomial],
    domain: &Domain,
) -> Result<FeasibleRegion, SymbolicError> {
    let ints: Vec<IntPoly> = polys.iter().map(IntPoly::from_dpoly).collect();
    let (lo, hi) = (&domain.lo, &domain.hi);

    let mut points = vec![Point { value: AlgebraicNumber::from_rational(lo.clone()), sources: vec![] }];
    if lo < hi {
        points.push(Point { value: AlgebraicNumber::from_rational(hi.clone()), sources: vec![] });
    }
    for (i, p) in ints.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        for root in constraint_roots(p, lo, hi) {
            insert_point(&mut points, root, i + 1);
        }
    }

    let cell_ok: Vec<Vec<usize>> = (0..points.len().saturating_sub(1))
        .map(|i| {
            let (left, right) = points.split_at_mut(i + 1);
            let x = sample_between(&mut left[i].value, &mut right[0].value);
            negative_at(&ints, &x)
        })
        .collect();
    let cell_feasible: Vec<bool> = cell_ok.iter().map(Vec::is_empty).collect();
    let point_feasible: Vec<bool> = points
        .iter()
        .enumerate()
        .map(|(i, pt)| match pt.value.as_rational() {
            Some(r) => negative_at(&ints, r).is_empty(),
            // interior point: constraints not vanishing here keep the sign
            // they have on the neighbouring cell
            None => cell_ok[i].iter().all(|t| pt.sources.contains(t)),
        })
        .collect();

    let mut intervals = Vec::new();
    let mut i = 0;
    while i < cell_feasible.len() {
        if !cell_feasible[i] {
            i += 1;
            continue;
        }
        let start = i;
        while i < cell_feasible.len() && cell_feasible[i] {
            i += 1;
        }
        intervals.push(RegionInterval {
            lo: make_endpoint(&points[start], polys),
            hi: make_endpoint(&points[i], polys),
        });
    }
    let isolated_points = (0..points.len())
        .filter(|&i| {
            let left = i > 0 && cell_feasible[i - 1];
            let right = i < cell_feasible.len() && cell_feasible[i];
            point_feasible[i] && !left && !right
        })
        .map(|i| make_endpoint(&points[i], polys))
        .collect();

    Ok(FeasibleRegion { constraint_order: order, domain: domain.clone(), intervals, isolated_points })
}

/// Constraints vanishing at `boundary`, which must be an endpoint (or isolated
/// point) of `feasible_region(order)` over the default domain.
pub fn binding_constraints(order: usize, boundary: &AlgebraicNumber) -> Result<Vec<usize>, SymbolicError> {
    feasible_region(order, &Domain::default())?.binding_at(boundary)
}

impl FeasibleRegion {
    pub fn endpoints(&self) -> impl Iterator<Item = &Endpoint> {
        self.intervals.iter().flat_map(|i| [&i.lo, &i.hi]).chain(&self.isolated_points)
    }

    pub fn binding_at(&self, boundary: &AlgebraicNumber) -> Result<Vec<usize>, SymbolicError> {
        let mut b = boundary.clone();
        for e in self.endpoints() {
            if b.equals(&mut e.value.clone()) {
                return Ok(e.binding.clone());
            }
        }
        Err(SymbolicError::NotAnEndpoint(format!("{:.12}", boundary.approx_f64())))
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty() && self.isolated_points.is_empty()
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        self.contains_algebraic(&AlgebraicNumber::from_rational(x.clone()))
    }

    pub fn contains_algebraic(&self, x: &AlgebraicNumber) -> bool {
        let mut x = x.clone();
        self.intervals.iter().any(|iv| {
            x.cmp_refining(&mut iv.lo.value.clone()) != Ordering::Less
                && x.cmp_refining(&mut iv.hi.value.clone()) != Ordering::Greater
        }) || self.isolated_points.iter().any(|p| x.equals(&mut p.value.clone()))
    }

    /// Set inclusion `self ⊆ other`.
    pub fn is_subset_of(&self, other: &FeasibleRegion) -> bool {
        let within = |iv: &RegionInterval| {
            other.intervals.iter().any(|ov| {
                ov.lo.value.clone().cmp_refining(&mut iv.lo.value.clone()) != Ordering::Greater
                    && ov.hi.value.clone().cmp_refining(&mut iv.hi.value.clone()) != Ordering::Less
            })
        };
        self.intervals.iter().all(within) && self.isolated_points.iter().all(|p| other.contains_algebraic(&p.value))
    }

    /// Which of `samples` fall outside the region.
    pub fn missing<'a>(&self, samples: &'a [BigRational]) -> Vec<&'a BigRational> {
        samples.iter().filter(|x| !self.contains(x)).collect()
    }

    /// How the region meets the gap `(a, b)`.
    pub fn gap_status(&self, a: &BigRational, b: &BigRational) -> GapStatus {
        if self.intervals.iter().any(|iv| {
            iv.lo.value.clone().cmp_rational(a) != Ordering::Greater
                && iv.hi.value.clone().cmp_rational(b) != Ordering::Less
        }) {
            return GapStatus::Covered;
        }
        let meets_interval = self.intervals.iter().any(|iv| {
            iv.lo.value.clone().cmp_rational(b) == Ordering::Less
                && iv.hi.value.clone().cmp_rational(a) == Ordering::Greater
        });
        let meets_point = self.isolated_points.iter().any(|p| {
            let mut v = p.value.clone();
            v.cmp_rational(a) == Ordering::Greater && v.cmp_rational(b) == Ordering::Less
        });
        if meets_interval || meets_point {
            GapStatus::Partial
        } else {
            GapStatus::Excluded
        }
    }

    pub fn binding_map(&self) -> BTreeMap<String, Vec<usize>> {
        self.endpoints().map(|e| (e.label(), e.binding.clone())).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "version": REGION_VERSION,
            "constraint_order": self.constraint_order,
            "domain": [self.domain.lo.to_string(), self.domain.hi.to_string()],
            "intervals": self.intervals.iter().map(|iv| json!({
                "lo": iv.lo.to_json(),
                "hi": iv.hi.to_json(),
            })).collect::<Vec<_>>(),
            "isolated_points": self.isolated_points.iter().map(Endpoint::to_json).collect::<Vec<_>>(),
            "binding": self.binding_map(),
        })
    }

    /// One line, e.g. `N=3 on [0, 4]: [0.227998127341, 3] plus {0}`.
    pub fn summary(&self) -> String {
        let ivs: Vec<String> = self.intervals.iter().map(|iv| format!("[{}, {}]", iv.lo.label(), iv.hi.label())).collect();
        let mut s = format!(
            "N={} on [{}, {}]: {}",
            self.constraint_order,
            self.domain.lo,
            self.domain.hi,
            if ivs.is_empty() { "no intervals".to_string() } else { ivs.join(" ∪ ") }
        );
        if !self.isolated_points.is_empty() {
            let pts: Vec<String> = self.isolated_points.iter().map(Endpoint::label).collect();
            s.push_str(&format!(" plus {{{}}}", pts.join(", ")));
        }
        s
    }
}
