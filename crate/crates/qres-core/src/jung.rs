//! From an embedded Q-resolution of f to an abstract Q-resolution of the
//! cyclic surface germ z^n = f(x, y), plus Hirzebruch-Jung data: chains for
//! cyclic points and the refinement of a Q-resolution graph into a smooth
//! resolution graph.
//!
//! The covering is handled locally. Every marked point of the base divisor
//! goes through one of two point transforms (point on a single component,
//! double point), every component through a Riemann-Hurwitz bookkeeping
//! step. Together they rebuild the graph upstairs; no equations are touched.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::{as_i64, gcd_i, lcm_i, mod_inv, modr, qq, qz, QQ};
use crate::error::{Error, Result};
use crate::graph::{q_normal_crossing, DualGraph, Edge, Vertex, VertexKind};
use crate::quotient::{reduce_two_row, CyclicType, TwoRowType, MAX_ORDER};

/// Cyclic surface germ z^n = f(x, y), given by the covering degree and the
/// embedded Q-resolution graph of f (integral multiplicities required).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceGerm {
    pub n: i64,
    pub base: DualGraph,
}

/// Behaviour of one exceptional component under the covering.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentTransform {
    /// Number of connected components of the preimage.
    pub nu: i64,
    /// Covering degree of each component over the base curve.
    pub degree: i64,
    pub genus: u32,
    /// Self-intersection of each single component.
    pub self_int: QQ,
}

fn check_degree(n: i64) -> Result<()> {
    if !(1..=MAX_ORDER).contains(&n) {
        return Err(Error::ParseError(format!(
            "covering degree must be in 1..={MAX_ORDER}, got {n}"
        )));
    }
    Ok(())
}

/// Preimage of a point of type (d; a, b) lying on a single component E of
/// multiplicity s, with E along {y = 0}. Returns the number g of preimage
/// points and their common normalized type (d1; a n2, b), which keeps the
/// component along {y = 0}.
pub fn transform_sing0(n: i64, s: i64, t: &CyclicType) -> Result<(i64, CyclicType)> {
    check_degree(n)?;
    if !t.is_normalized() {
        return Err(Error::NotNormalized(format!(
            "point transform needs a normalized type, got {t}"
        )));
    }
    if s < 1 {
        return Err(Error::InconsistentData(format!(
            "multiplicity must be >= 1, got {s}"
        )));
    }
    let d = t.d();
    if s % d != 0 {
        return Err(Error::DivisibilityViolation(format!(
            "order {d} of {t} does not divide the multiplicity {s}"
        )));
    }
    let s0 = s / d;
    let g = gcd_i(n, s0);
    let n1 = n / g;
    let e = gcd_i(n1, d);
    let n2 = n1 / e;
    let d1 = d / e;
    let an2 = modr_128(t.a() as i128 * n2 as i128, d1);
    let (out, _) = CyclicType::new(d1, an2, t.b())?.normalize()?;
    Ok((g, out))
}

/// Preimage of a double point of type (d; a, b) where the component along
/// {x = 0} has multiplicity r and the one along {y = 0} multiplicity s.
/// Returns the number g of preimage points and their normalized type, again
/// with the r-component along {x = 0}.
///
/// The count g = gcd(n, r, s, m0) with m0 = (ar + bs)/d; this is the unique
/// reading consistent with every worked covering case and with strict
/// transform points (r or s equal to 1).
pub fn transform_double_point(n: i64, r: i64, s: i64, t: &CyclicType) -> Result<(i64, CyclicType)> {
    check_degree(n)?;
    if !t.is_normalized() {
        return Err(Error::NotNormalized(format!(
            "point transform needs a normalized type, got {t}"
        )));
    }
    if r < 1 || s < 1 {
        return Err(Error::InconsistentData(format!(
            "multiplicities must be >= 1, got {r} and {s}"
        )));
    }
    if n == 1 {
        // Trivial covering: the base point comes back unchanged.
        return Ok((1, *t));
    }
    let (d, a, b) = (t.d(), t.a(), t.b());
    let ar_bs = a as i128 * r as i128 + b as i128 * s as i128;
    if ar_bs.rem_euclid(d as i128) != 0 {
        return Err(Error::DivisibilityViolation(format!(
            "{d} does not divide a r + b s = {ar_bs} at a double point of {t}"
        )));
    }
    let m0 = (ar_bs / d as i128) as i64;
    let g = gcd_i(gcd_i(n, r), gcd_i(s, m0));
    let (n1, r1, s1, m1) = (n / g, r / g, s / g, m0 / g);
    let e = gcd_i(gcd_i(n1, r1), s1);
    let (n2, r2, s2) = (n1 / e, r1 / e, s1 / e);
    if gcd_i(m1, e) != 1 {
        return Err(Error::InconsistentData(format!(
            "gcd(m1, e) = gcd({m1}, {e}) > 1: the multiplicities do not match the point type"
        )));
    }
    if d % e != 0 {
        // gcd(m1, e) = 1 forces e | d; reaching this means broken inputs.
        return Err(Error::InconsistentData(format!(
            "e = {e} does not divide the order {d}"
        )));
    }
    let d1 = d / e;
    let (k, l) = solve_kl(modr(m1, n2), modr(r2, n2), modr(s2, n2), n2);
    if d1 as i128 * n2 as i128 > MAX_ORDER as i128 {
        return Err(Error::ParseError(format!(
            "covering order {} exceeds the supported range",
            d1 as i128 * n2 as i128
        )));
    }
    let big = d1 * n2;
    let ap = modr_128(a as i128 + k as i128 * d1 as i128, big);
    let bp = modr_128(b as i128 + l as i128 * d1 as i128, big);
    // a r2 + b s2 = m1 d1, so the twisted pair still pairs to zero mod n2.
    debug_assert_eq!(
        (ap as i128 * r2 as i128 + bp as i128 * s2 as i128).rem_euclid(n2 as i128),
        0
    );
    let two = TwoRowType::new(big, n2, [[ap, bp], [modr(s2, n2), modr(-r2, n2)]])?;
    let (out, _) = reduce_two_row(&two).normalize()?;
    Ok((g, out))
}

fn modr_128(a: i128, d: i64) -> i64 {
    debug_assert!(d >= 1);
    a.rem_euclid(d as i128) as i64
}

/// Smallest (by |k| + |l|, ties in enumeration order) solution of
/// c + k r + l s = 0 mod n. Solvable whenever gcd(r, s, n) | c, which the
/// e-reduction guarantees. The shell search is capped; past the cap a
/// Bezout solution is returned, exact but not minimal. Any valid pair
/// yields isomorphic output types, so minimality is cosmetic.
fn solve_kl(c: i64, r: i64, s: i64, n: i64) -> (i64, i64) {
    debug_assert!(n >= 1);
    let hit = |k: i64, l: i64| {
        (c as i128 + k as i128 * r as i128 + l as i128 * s as i128).rem_euclid(n as i128) == 0
    };
    const SHELL_CAP: i64 = 2048;
    // Some solution has |k|, |l| <= n/2, so shells past n cannot help.
    for total in 0..=SHELL_CAP.min(n) {
        for k in -total..=total {
            let rem = total - k.abs();
            if hit(k, -rem) {
                return (k, -rem);
            }
            if rem > 0 && hit(k, rem) {
                return (k, rem);
            }
        }
    }
    // l s = -c mod gcd(r, n), then lift k modulo n / gcd(r, n).
    let g1 = gcd_i(r, n);
    let l = if g1 == 1 {
        0
    } else {
        modr(-modr(c, g1) * mod_inv(s, g1), g1)
    };
    let cls = c as i128 + l as i128 * s as i128;
    debug_assert_eq!(cls.rem_euclid(g1 as i128), 0);
    let np = n / g1;
    let k = if np == 1 {
        0
    } else {
        let rhs = (-(cls / g1 as i128)).rem_euclid(np as i128) as i64;
        modr(rhs * mod_inv(r / g1, np), np)
    };
    debug_assert!(hit(k, l));
    (k, l)
}

/// Component count, covering degree, genus and self-intersection of the
/// preimage of one rational exceptional component with multiplicity s and
/// self-intersection eta, given the preimage counts g_P of all marked
/// points on it.
///
/// nu = gcd(s, all g_P) components, each an m/nu-fold covering of the base
/// (m = gcd(s, n)); genus from Riemann-Hurwitz over a rational base,
/// 2 - 2g = 2(m/nu) - sum_P (m/nu - g_P/nu); self-intersection m^2 eta/(n nu).
pub fn transform_component(
    n: i64,
    s: i64,
    eta: &QQ,
    point_counts: &[i64],
) -> Result<ComponentTransform> {
    check_degree(n)?;
    if s < 1 {
        return Err(Error::InconsistentData(format!(
            "multiplicity must be >= 1, got {s}"
        )));
    }
    if *eta >= QQ::zero() {
        return Err(Error::InconsistentData(format!(
            "exceptional self-intersection must be negative, got {eta}"
        )));
    }
    let m = gcd_i(s, n);
    let mut nu = s;
    for &g in point_counts {
        if g < 1 {
            return Err(Error::InconsistentData(format!(
                "point preimage counts must be >= 1, got {g}"
            )));
        }
        nu = gcd_i(nu, g);
    }
    if m % nu != 0 {
        return Err(Error::InconsistentData(format!(
            "component count {nu} does not divide the covering degree {m}"
        )));
    }
    let degree = m / nu;
    let mut chi = 2 * degree as i128;
    for &g in point_counts {
        chi -= degree as i128 - (g / nu) as i128;
    }
    if chi > 2 || chi.rem_euclid(2) != 0 {
        return Err(Error::InconsistentData(format!(
            "Riemann-Hurwitz admits no genus: 2 - 2g = {chi}"
        )));
    }
    let genus = u32::try_from((2 - chi) / 2)
        .map_err(|_| Error::InconsistentData(format!("genus out of range: 2 - 2g = {chi}")))?;
    let self_int = qz(m) * qz(m) * eta / (qz(n) * qz(nu));
    Ok(ComponentTransform {
        nu,
        degree,
        genus,
        self_int,
    })
}

/// Output size cap for the covering graph; degrees near the order cap
/// would otherwise ask for graphs with ~10^9 vertices.
const GRAPH_CAP: usize = 1_000_000;

/// Abstract Q-resolution graph of z^n = f, from the embedded Q-resolution
/// graph of f.
///
/// Every base exceptional vertex becomes nu components with data from
/// `transform_component`; its sing0 points and strict-transform crossings
/// become sing0 points upstairs (the strict transforms themselves are not
/// part of the surface resolution, so the output has no arrows), and each
/// divisor-divisor edge lifts to g edges spread cyclically over the
/// component sets. Multiplicities upstairs are lcm(n, s): the order of
/// vanishing of the pulled back f along the component.
pub fn jung_resolution(germ: &SurfaceGerm) -> Result<DualGraph> {
    check_degree(germ.n)?;
    let n = germ.n;
    let base = &germ.base;
    if !q_normal_crossing(base) {
        return Err(Error::InconsistentData(
            "base graph is not a Q-normal crossing resolution".into(),
        ));
    }
    let exc = base.exceptional_ids();
    let mut mult = BTreeMap::new();
    for &id in &exc {
        let v = base.vertex(id).expect("validated");
        if v.genus != 0 {
            return Err(Error::InconsistentData(format!(
                "base vertex {id} has genus {}; the covering formulas assume rational components",
                v.genus
            )));
        }
        let m =
            v.m.as_ref()
                .and_then(as_i64)
                .filter(|m| *m >= 1)
                .ok_or_else(|| {
                    Error::InconsistentData(format!(
                        "vertex {id} needs a positive integral multiplicity"
                    ))
                })?;
        mult.insert(id, m);
    }

    // Per vertex: preimage counts of all marked points, and the points that
    // stay singular, oriented as sing0 entries (owner along {y = 0}).
    let mut counts: BTreeMap<usize, Vec<i64>> = exc.iter().map(|&i| (i, vec![])).collect();
    let mut points: BTreeMap<usize, Vec<(i64, CyclicType)>> =
        exc.iter().map(|&i| (i, vec![])).collect();
    let mut lifted: Vec<(usize, i64, CyclicType)> = Vec::new();

    for &id in &exc {
        let v = base.vertex(id).expect("validated");
        for t in &v.sing0 {
            let (g, p) = transform_sing0(n, mult[&id], t)?;
            counts.get_mut(&id).expect("seeded").push(g);
            points
                .get_mut(&id)
                .expect("seeded")
                .push((g, p.unit_form()?));
        }
    }
    for (idx, e) in base.edges.iter().enumerate() {
        let far = base.vertex(e.v2).expect("validated");
        if far.is_arrow() {
            let s_arrow = match &far.m {
                Some(m) => as_i64(m).filter(|v| *v >= 1).ok_or_else(|| {
                    Error::InconsistentData(format!(
                        "arrow {} needs a positive integral multiplicity",
                        far.id
                    ))
                })?,
                None => 1,
            };
            let (g, p) = transform_double_point(n, mult[&e.v1], s_arrow, &e.ty)?;
            counts.get_mut(&e.v1).expect("seeded").push(g);
            // The covering component sits along {x = 0} here; a sing0 entry
            // wants its owner along {y = 0}.
            points
                .get_mut(&e.v1)
                .expect("seeded")
                .push((g, p.swap().unit_form()?));
        } else {
            let (g, p) = transform_double_point(n, mult[&e.v1], mult[&e.v2], &e.ty)?;
            counts.get_mut(&e.v1).expect("seeded").push(g);
            counts.get_mut(&e.v2).expect("seeded").push(g);
            lifted.push((idx, g, p.unit_form()?));
        }
    }

    let mut out = DualGraph::default();
    let mut comp: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut next = 1usize;
    for &id in &exc {
        let v = base.vertex(id).expect("validated");
        let eta = v.self_int.as_ref().expect("validated");
        let ct = transform_component(n, mult[&id], eta, &counts[&id])?;
        if next + ct.nu as usize > GRAPH_CAP {
            return Err(Error::Internal(format!(
                "covering graph exceeds {GRAPH_CAP} vertices"
            )));
        }
        let mtilde = lcm_i(n, mult[&id]);
        let mut sing0 = Vec::new();
        for (g, p) in &points[&id] {
            if p.d() == 1 {
                continue;
            }
            debug_assert_eq!(g % ct.nu, 0);
            for _ in 0..(g / ct.nu) {
                sing0.push(*p);
            }
        }
        let mut ids = Vec::with_capacity(ct.nu as usize);
        for _ in 0..ct.nu {
            ids.push(next);
            out.vertices.push(Vertex {
                id: next,
                kind: VertexKind::Exceptional,
                m: Some(qz(mtilde)),
                self_int: Some(ct.self_int.clone()),
                genus: ct.genus,
                sing0: sing0.clone(),
                branch: vec![],
            });
            next += 1;
        }
        comp.insert(id, ids);
    }
    for (idx, g, ty) in &lifted {
        let e = &base.edges[*idx];
        let c1 = &comp[&e.v1];
        let c2 = &comp[&e.v2];
        if out.edges.len() + *g as usize > GRAPH_CAP {
            return Err(Error::Internal(format!(
                "covering graph exceeds {GRAPH_CAP} edges"
            )));
        }
        for i in 0..*g as usize {
            let a = c1[i % c1.len()];
            let b = c2[i % c2.len()];
            debug_assert!(a < b);
            out.edges.push(Edge {
                v1: a,
                v2: b,
                ty: *ty,
            });
        }
    }
    debug_assert!(out.validate().is_ok());
    Ok(out)
}

/// Length cap for Hirzebruch-Jung chains; (d; 1, d - 1) needs d - 1 curves
/// and d may be as large as the order cap.
const CHAIN_CAP: usize = 100_000;

/// Continued fraction of d/k by excess division: d = q k - r with
/// 0 <= r < k, so d/k = q1 - 1/(q2 - 1/(...)). For k | d this is [d/k].
pub fn continued_fraction(d: i64, k: i64) -> Result<Vec<i64>> {
    if d < 1 || k < 1 {
        return Err(Error::BadFraction(format!(
            "need positive numerator and denominator, got {d}/{k}"
        )));
    }
    let (mut d, mut k) = (d, k);
    let mut out = Vec::new();
    loop {
        let q = (d + k - 1) / k;
        out.push(q);
        let r = q * k - d;
        if r == 0 {
            return Ok(out);
        }
        if out.len() >= CHAIN_CAP {
            return Err(Error::Internal(format!(
                "continued fraction of {d}/{k} exceeds {CHAIN_CAP} terms"
            )));
        }
        d = k;
        k = r;
    }
}

/// Self-intersections [-q1, ..., -qn] of the Hirzebruch-Jung chain that
/// resolves the cyclic point (d; a, b); empty for a smooth point. The type
/// is first scaled to (d; 1, k), then the chain is cf(d, k) negated.
pub fn resolve_cyclic_point(t: &CyclicType) -> Result<Vec<i64>> {
    if !t.is_normalized() {
        return Err(Error::NotNormalized(format!(
            "cyclic point must be normalized, got {t}"
        )));
    }
    let u = t.unit_form()?;
    if u.d() == 1 {
        return Ok(vec![]);
    }
    Ok(continued_fraction(u.d(), u.b())?
        .into_iter()
        .map(|q| -q)
        .collect())
}

/// One pending chain of rational curves: self-intersections, plus the old
/// vertex ids its head and tail attach to (head on the {y = 0} side).
struct Chain {
    qs: Vec<i64>,
    head: usize,
    tail: Option<usize>,
}

/// Replace every cyclic point of a Q-resolution graph by its
/// Hirzebruch-Jung chain. Sing0 points become dangling chains, singular
/// edges become chains joining the two old endpoints, and each old
/// self-intersection drops by k/d per point of unit form (d; 1, k) as seen
/// from that vertex. The corrected self-intersections must come out
/// integral; the result is a smooth resolution graph.
///
/// Old exceptional vertices keep their ids; chain curves are numbered after
/// them, arrows after the chains.
pub fn smooth_refinement(graph: &DualGraph) -> Result<DualGraph> {
    graph.validate()?;
    let exc = graph.exceptional_ids();
    let max_id = graph.vertices.iter().map(|v| v.id).max().unwrap_or(0);

    let mut corr: BTreeMap<usize, QQ> = exc.iter().map(|&i| (i, QQ::zero())).collect();
    let mut chains: Vec<Chain> = Vec::new();
    let mut kept: Vec<Edge> = Vec::new();
    for e in &graph.edges {
        let u = e.ty.unit_form()?;
        let d = u.d();
        if d == 1 {
            kept.push(Edge {
                v1: e.v1,
                v2: e.v2,
                ty: CyclicType::smooth(),
            });
            continue;
        }
        // v2 sees the point as (d; 1, b), v1 as (d; 1, b^{-1}).
        let b = u.b();
        *corr.get_mut(&e.v1).expect("v1 is exceptional") += qq(mod_inv(b, d), d);
        if let Some(c) = corr.get_mut(&e.v2) {
            *c += qq(b, d);
        }
        chains.push(Chain {
            qs: continued_fraction(d, b)?,
            head: e.v2,
            tail: Some(e.v1),
        });
    }
    for &id in &exc {
        let v = graph.vertex(id).expect("listed");
        for t in &v.sing0 {
            let u = t.unit_form()?;
            if u.d() == 1 {
                continue;
            }
            *corr.get_mut(&id).expect("listed") += qq(u.b(), u.d());
            chains.push(Chain {
                qs: continued_fraction(u.d(), u.b())?,
                head: id,
                tail: None,
            });
        }
    }

    let mut new_self: BTreeMap<usize, QQ> = BTreeMap::new();
    for &id in &exc {
        let v = graph.vertex(id).expect("listed");
        let s = v.self_int.clone().expect("validated") - &corr[&id];
        if !s.is_integer() {
            return Err(Error::IntegralityViolation(format!(
                "refined self-intersection of vertex {id} is {s}"
            )));
        }
        new_self.insert(id, s);
    }

    // Arrows move past the chain curves so chain-to-arrow edges keep the
    // arrow in the v2 slot.
    let total: usize = chains.iter().map(|c| c.qs.len()).sum();
    let mut arrow_map: BTreeMap<usize, usize> = BTreeMap::new();
    for v in &graph.vertices {
        if v.is_arrow() {
            let slot = max_id + 1 + total + arrow_map.len();
            arrow_map.insert(v.id, slot);
        }
    }
    let map_id = |old: usize| *arrow_map.get(&old).unwrap_or(&old);

    let mut out = DualGraph::default();
    for v in &graph.vertices {
        if v.is_exceptional() {
            out.vertices.push(Vertex {
                id: v.id,
                kind: VertexKind::Exceptional,
                m: v.m.clone(),
                self_int: Some(new_self[&v.id].clone()),
                genus: v.genus,
                sing0: vec![],
                branch: vec![],
            });
        }
    }
    let mut next = max_id + 1;
    for c in &chains {
        let first = next;
        for &q in &c.qs {
            out.vertices.push(Vertex {
                id: next,
                kind: VertexKind::Exceptional,
                m: None,
                self_int: Some(qz(-q)),
                genus: 0,
                sing0: vec![],
                branch: vec![],
            });
            next += 1;
        }
        let last = next - 1;
        let h = map_id(c.head);
        out.edges.push(Edge {
            v1: h.min(first),
            v2: h.max(first),
            ty: CyclicType::smooth(),
        });
        for i in first..last {
            out.edges.push(Edge {
                v1: i,
                v2: i + 1,
                ty: CyclicType::smooth(),
            });
        }
        if let Some(t) = c.tail {
            out.edges.push(Edge {
                v1: t,
                v2: last,
                ty: CyclicType::smooth(),
            });
        }
    }
    for v in &graph.vertices {
        if v.is_arrow() {
            out.vertices.push(Vertex {
                id: arrow_map[&v.id],
                kind: VertexKind::StrictArrow,
                m: v.m.clone(),
                self_int: None,
                genus: 0,
                sing0: vec![],
                branch: v.branch.clone(),
            });
        }
    }
    for e in &kept {
        out.edges.push(Edge {
            v1: e.v1,
            v2: map_id(e.v2),
            ty: CyclicType::smooth(),
        });
    }
    debug_assert!(out.validate().is_ok());
    Ok(out)
}
