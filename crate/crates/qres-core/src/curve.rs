//! Embedded Q-resolution of plane curve germs by weighted blow-ups.
//!
//! A germ is a finite set of Puiseux branches at the origin of the plane or
//! of a cyclic quotient X(d; a, b), the branches written as series in the
//! coordinates of the covering plane. The engine keeps one representative
//! series per orbit of branches; deck transforms of fractional exponents and
//! images under the ambient action are reconstructed on demand, so every
//! coefficient stays exact.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::qq_serde::{WireInt, WireRat};
use crate::arith::{lcm_i, qq, qz, Coeff, QQ};
use crate::blowup::{blowup, strict_self_intersection_update, Weight};
use crate::error::{Error, Result};
use crate::graph::{self, DualGraph, Edge, Vertex, VertexKind};
use crate::quotient::CyclicType;

/// Cap on the conjugacy degree of a single branch (the lcm of its exponent
/// denominators) and on the order of a cluster rotation group.
const DELTA_CAP: i64 = 10_000;
/// Cap on the number of series enumerated for one branch orbit.
const CLOSURE_CAP: i64 = 100_000;
/// Blow-up budget: a resolution that exceeds this many centers is a bug.
const SITE_CAP_BASE: usize = 1_000;
const SITE_CAP_PER_TERM: usize = 50;

/// A coordinate axis named by its equation: `X` is the branch {x = 0}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
}

/// One Puiseux term `coeff * x^exp`.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coeff: Coeff,
    pub exp: QQ,
}

impl Term {
    pub fn new(coeff: Coeff, exp: QQ) -> Term {
        Term { coeff, exp }
    }
}

/// One branch of a curve germ: either a coordinate axis or a finite Puiseux
/// series y = sum of terms with strictly increasing positive exponents.
///
/// A branch with fractional exponents stands for all of its conjugates at
/// once; listing two conjugate series as separate branches is rejected as a
/// repeated factor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PuiseuxBranch {
    #[serde(default)]
    pub terms: Vec<Term>,
    #[serde(default)]
    pub axis: Option<Axis>,
}

impl PuiseuxBranch {
    pub fn series(terms: Vec<Term>) -> PuiseuxBranch {
        PuiseuxBranch { terms, axis: None }
    }

    pub fn axis(axis: Axis) -> PuiseuxBranch {
        PuiseuxBranch {
            terms: vec![],
            axis: Some(axis),
        }
    }
}

/// A curve germ on X(d; a, b), given by branches upstairs. The branch set
/// must be closed under the group action when d > 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveGerm {
    pub ambient: CyclicType,
    pub branches: Vec<PuiseuxBranch>,
}

#[derive(Serialize, Deserialize)]
struct WireCoeff {
    num: WireInt,
    den: WireInt,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    turns: Option<WireRat>,
}

#[derive(Serialize, Deserialize)]
struct WireTerm {
    coeff: WireCoeff,
    exp: WireRat,
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        // real coefficients stay plain rationals on the wire; anything else
        // is a positive magnitude plus an angle in turns
        let (rat, turns) = match self.coeff.as_rational() {
            Some(q) => (q, None),
            None => (self.coeff.mag().clone(), Some(self.coeff.turns().clone())),
        };
        WireTerm {
            coeff: WireCoeff {
                num: rat.numer().into(),
                den: rat.denom().into(),
                turns: turns.as_ref().map(WireRat::from),
            },
            exp: WireRat::from(&self.exp),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Term {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Term, D::Error> {
        let w = WireTerm::deserialize(d)?;
        let num = BigInt::try_from(w.coeff.num).map_err(D::Error::custom)?;
        let den = BigInt::try_from(w.coeff.den).map_err(D::Error::custom)?;
        if den.is_zero() {
            return Err(D::Error::custom("zero denominator"));
        }
        let base = QQ::new(num, den);
        let mut coeff =
            Coeff::from_rational(&base).ok_or_else(|| D::Error::custom("zero coefficient"))?;
        if let Some(t) = w.coeff.turns {
            coeff = coeff.rotate(&QQ::try_from(t).map_err(D::Error::custom)?);
        }
        let exp = QQ::try_from(w.exp).map_err(D::Error::custom)?;
        Ok(Term { coeff, exp })
    }
}

/// Checks the output contract of the resolution: the graph is well formed
/// and the recorded multiplicities satisfy every local divisibility imposed
/// by quotient points and crossings. See the graph module for the rules.
pub fn check_q_normal_crossing(g: &DualGraph) -> bool {
    graph::q_normal_crossing(g)
}

/// Embedded Q-resolution of a germ in the smooth plane. The ambient type of
/// `curve` is expected to be (1; 0, 0); quotient ambients are handled too,
/// identically to [`resolve_quotient`].
pub fn resolve(curve: &CurveGerm) -> Result<DualGraph> {
    resolve_quotient(curve)
}

/// Embedded Q-resolution of a germ on a cyclic quotient surface.
///
/// Returns the dual graph of the total transform: exceptional vertices
/// numbered 1.. in order of creation, then one arrow vertex per branch
/// orbit. Crossings and quotient points on the final surface are recorded as
/// typed edges and `sing0` entries.
pub fn resolve_quotient(curve: &CurveGerm) -> Result<DualGraph> {
    if !curve.ambient.is_normalized() {
        return Err(Error::NotNormalized(format!(
            "ambient type ({}) must be normalized",
            curve.ambient
        )));
    }
    let forms = curve
        .branches
        .iter()
        .enumerate()
        .map(|(i, b)| branch_form(b, i + 1))
        .collect::<Result<Vec<_>>>()?;
    for i in 0..forms.len() {
        for j in i + 1..forms.len() {
            if same_branch(&forms[i], &forms[j])? {
                return Err(Error::DegenerateInput(format!(
                    "branches {} and {} define the same curve",
                    i + 1,
                    j + 1
                )));
            }
        }
    }

    // group branches into orbits of the ambient action
    let d = curve.ambient.d();
    let n = forms.len();
    let mut parent: Vec<usize> = (0..n).collect();
    if d > 1 {
        for i in 0..n {
            let image = match &forms[i] {
                Form::XAxis => Form::XAxis,
                Form::Series(s) => Form::Series(action_shift(&curve.ambient, s, 1)),
            };
            let mut hit = None;
            for (j, f) in forms.iter().enumerate() {
                if same_branch(&image, f)? {
                    hit = Some(j);
                    break;
                }
            }
            match hit {
                Some(j) => union(&mut parent, i, j),
                None => {
                    return Err(Error::NonInvariantCurve(format!(
                        "branch {} leaves the branch set under the ambient action",
                        i + 1
                    )))
                }
            }
        }
    }
    let mut roots: Vec<usize> = vec![];
    for i in 0..n {
        if find(&mut parent, i) == i {
            roots.push(i);
        }
    }
    let mut orbits: Vec<Vec<usize>> = vec![vec![]; roots.len()];
    for i in 0..n {
        let r = find(&mut parent, i);
        let k = roots.iter().position(|&x| x == r).expect("own root");
        orbits[k].push(i + 1);
    }

    // the product of the branch equations is semi-invariant; its weight
    // decides whether the divisor multiplicities must come out integral
    let mut chi: i128 = 0;
    let mut branches: Vec<SiteBranch> = Vec::with_capacity(orbits.len());
    let mut total_terms = 0usize;
    for (k, members) in orbits.iter().enumerate() {
        let rep = members[0] - 1;
        let form = forms[rep].clone();
        chi += match &form {
            Form::XAxis => i128::from(curve.ambient.a()),
            Form::Series(s) if s.is_empty() => i128::from(curve.ambient.b()),
            Form::Series(s) => {
                total_terms += s.len();
                let count = i128::from(closure_count(&curve.ambient, s)?);
                i128::from(curve.ambient.b()) * count
            }
        };
        if d > 1 {
            chi = chi.rem_euclid(i128::from(d));
        }
        branches.push(SiteBranch { orbit: k, form });
    }
    let integral = d == 1 || chi == 0;

    let mut builder = Builder {
        vertices: vec![],
        arrows: vec![],
        arrow_of_orbit: vec![None; orbits.len()],
        edges: vec![],
        orbits,
        integral,
        sites: VecDeque::new(),
        processed: 0,
        cap: SITE_CAP_BASE + SITE_CAP_PER_TERM * total_terms,
    };
    builder.sites.push_back(Site {
        ambient: curve.ambient,
        x_div: None,
        y_div: None,
        branches,
    });
    builder.run()
}

pub(crate) type Terms = Vec<(Coeff, QQ)>;

#[derive(Debug, Clone, PartialEq)]
enum Form {
    /// The branch {x = 0}.
    XAxis,
    /// y = sum of terms; the empty series is the branch {y = 0}.
    Series(Terms),
}

#[derive(Debug, Clone)]
struct SiteBranch {
    orbit: usize,
    form: Form,
}

/// An infinitely near point still waiting to be resolved: a point of the
/// current surface with its local ambient type, the exceptional divisors
/// through it along the two local axes, and the branches through it.
#[derive(Debug, Clone)]
struct Site {
    ambient: CyclicType,
    x_div: Option<(usize, QQ)>,
    y_div: Option<(usize, QQ)>,
    branches: Vec<SiteBranch>,
}

#[derive(Debug, Clone, Copy)]
enum End {
    Exc(usize),
    Arrow(usize),
}

struct Builder {
    vertices: Vec<Vertex>,
    /// Arrow slot -> orbit, in order of creation.
    arrows: Vec<usize>,
    arrow_of_orbit: Vec<Option<usize>>,
    /// Crossings as (divisor along x, divisor along y, local type).
    edges: Vec<(End, End, CyclicType)>,
    orbits: Vec<Vec<usize>>,
    integral: bool,
    sites: VecDeque<Site>,
    processed: usize,
    cap: usize,
}

impl Builder {
    fn run(mut self) -> Result<DualGraph> {
        while let Some(site) = self.sites.pop_front() {
            self.processed += 1;
            if self.processed > self.cap {
                return Err(Error::Internal(
                    "resolution exceeded its blow-up budget".into(),
                ));
            }
            self.process(site)?;
        }
        self.finish()
    }

    fn process(&mut self, mut site: Site) -> Result<()> {
        translate(&mut site);
        if self.try_terminal(&mut site)? {
            return Ok(());
        }
        self.blow_up(site)
    }

    /// Records the site if nothing through it needs another blow-up.
    fn try_terminal(&mut self, site: &mut Site) -> Result<bool> {
        let d = site.ambient.d();
        if site.branches.is_empty() {
            match (&site.x_div, &site.y_div) {
                (Some((vx, _)), Some((vy, _))) => {
                    self.edges
                        .push((End::Exc(*vx), End::Exc(*vy), site.ambient));
                }
                (Some((v, _)), None) if d > 1 => self.push_sing0(*v, site.ambient.swap())?,
                (None, Some((v, _))) if d > 1 => self.push_sing0(*v, site.ambient)?,
                _ => {}
            }
            return Ok(true);
        }
        let divs = usize::from(site.x_div.is_some()) + usize::from(site.y_div.is_some());
        if site.branches.len() != 1 || divs > 1 {
            return Ok(false);
        }
        let br = &site.branches[0];
        let terminal = if d > 1 {
            // only an axis in normal crossing with the recorded divisor (or
            // alone at an unblown quotient point) may stop here
            match (&br.form, site.x_div.is_some(), site.y_div.is_some()) {
                (Form::Series(s), true, false) => s.is_empty(),
                (Form::XAxis, false, true) => true,
                (f, false, false) => match f {
                    Form::XAxis => true,
                    Form::Series(s) => s.is_empty(),
                },
                _ => false,
            }
        } else {
            match &br.form {
                Form::XAxis => true,
                Form::Series(s) => s.iter().all(|(_, e)| e.is_integer()),
            }
        };
        if !terminal {
            return Ok(false);
        }
        let arrow = self.new_arrow(br.orbit)?;
        match (&site.x_div, &site.y_div) {
            (Some((v, _)), None) => self.edges.push((End::Exc(*v), arrow, site.ambient)),
            (None, Some((v, _))) => self.edges.push((arrow, End::Exc(*v), site.ambient)),
            (None, None) => {}
            _ => unreachable!("terminal sites have at most one divisor"),
        }
        Ok(true)
    }

    fn blow_up(&mut self, site: Site) -> Result<()> {
        let amb = site.ambient;
        let mut emin: Option<QQ> = None;
        for br in &site.branches {
            if let Form::Series(s) = &br.form {
                if let Some((_, e)) = s.first() {
                    if emin.as_ref().is_none_or(|m| e < m) {
                        emin = Some(e.clone());
                    }
                }
            }
        }
        let (p, q) = match &emin {
            Some(e) => (big_to_i64(e.denom())?, big_to_i64(e.numer())?),
            None => (1, 1),
        };
        let w = Weight::new(p, q)?;
        let bw = blowup(&amb, w)?;

        // order of the total transform along the new divisor
        let mut nu = QQ::zero();
        if let Some((_, m)) = &site.x_div {
            nu += m * qz(p);
        }
        if let Some((_, m)) = &site.y_div {
            nu += m * qz(q);
        }
        for br in &site.branches {
            match &br.form {
                Form::XAxis => nu += qz(p),
                Form::Series(s) if s.is_empty() => nu += qz(q),
                Form::Series(s) => {
                    let count = closure_count(&amb, s)?;
                    let ord = std::cmp::min(qz(q), qz(p) * &s[0].1);
                    nu += qz(count) * ord;
                }
            }
        }
        let m_new = nu / qz(bw.e);
        if self.integral && !m_new.is_integer() {
            return Err(Error::Internal(format!(
                "invariant germ produced the fractional multiplicity {m_new}"
            )));
        }
        let new_id = self.new_exceptional(m_new.clone(), bw.exc_self_intersection.clone());
        if let Some((v, _)) = &site.x_div {
            self.update_self_int(*v, &amb, w, p)?;
        }
        if let Some((v, _)) = &site.y_div {
            self.update_self_int(*v, &amb, w, q)?;
        }

        // route the strict transforms: {x=0} meets the new divisor at the
        // second chart origin, {y=0} and steeper series at the first, series
        // of slope exactly q/p at points of the divisor away from both
        let mut chart1 = Site {
            ambient: bw.chart1_origin,
            x_div: Some((new_id, m_new.clone())),
            y_div: site.y_div.clone(),
            branches: vec![],
        };
        let mut chart2 = Site {
            ambient: bw.chart2_origin,
            x_div: site.x_div.clone(),
            y_div: Some((new_id, m_new.clone())),
            branches: vec![],
        };
        let slope = qq(q, p);
        let mut at_exc: Vec<(usize, Terms)> = vec![];
        for br in site.branches {
            match br.form {
                Form::XAxis => chart2.branches.push(SiteBranch {
                    orbit: br.orbit,
                    form: Form::XAxis,
                }),
                Form::Series(s) if s.is_empty() => chart1.branches.push(SiteBranch {
                    orbit: br.orbit,
                    form: Form::Series(vec![]),
                }),
                Form::Series(s) => {
                    if s[0].1 > slope {
                        chart1.branches.push(SiteBranch {
                            orbit: br.orbit,
                            form: Form::Series(chart_transform(&s, p, q, bw.e)),
                        });
                    } else {
                        debug_assert!(s[0].1 == slope, "weight must be the minimal slope");
                        for elt in closure_elements(&amb, &s)? {
                            at_exc.push((br.orbit, chart_transform(&elt, p, q, bw.e)));
                        }
                    }
                }
            }
        }
        let clusters = split_clusters(&bw.chart1_origin, (new_id, m_new), at_exc)?;
        self.sites.push_back(chart1);
        for c in clusters {
            self.sites.push_back(c);
        }
        self.sites.push_back(chart2);
        Ok(())
    }

    fn new_exceptional(&mut self, m: QQ, self_int: QQ) -> usize {
        let id = self.vertices.len() + 1;
        self.vertices.push(Vertex {
            id,
            kind: VertexKind::Exceptional,
            m: Some(m),
            self_int: Some(self_int),
            genus: 0,
            sing0: vec![],
            branch: vec![],
        });
        id
    }

    fn new_arrow(&mut self, orbit: usize) -> Result<End> {
        if self.arrow_of_orbit[orbit].is_some() {
            return Err(Error::Internal(
                "a branch reached two terminal points".into(),
            ));
        }
        let slot = self.arrows.len();
        self.arrows.push(orbit);
        self.arrow_of_orbit[orbit] = Some(slot);
        Ok(End::Arrow(slot))
    }

    fn push_sing0(&mut self, v: usize, ty: CyclicType) -> Result<()> {
        self.vertices[v - 1].sing0.push(ty.unit_form()?);
        Ok(())
    }

    fn update_self_int(&mut self, v: usize, amb: &CyclicType, w: Weight, mu: i64) -> Result<()> {
        let old = self.vertices[v - 1]
            .self_int
            .clone()
            .expect("exceptional rows carry a self-intersection");
        self.vertices[v - 1].self_int = Some(strict_self_intersection_update(&old, amb, w, mu)?);
        Ok(())
    }

    fn finish(self) -> Result<DualGraph> {
        for (orbit, slot) in self.arrow_of_orbit.iter().enumerate() {
            if slot.is_none() {
                return Err(Error::Internal(format!(
                    "branch {} never reached a terminal point",
                    self.orbits[orbit][0]
                )));
            }
        }
        let r = self.vertices.len();
        let mut vertices = self.vertices;
        for (slot, &orbit) in self.arrows.iter().enumerate() {
            vertices.push(Vertex {
                id: r + 1 + slot,
                kind: VertexKind::StrictArrow,
                m: Some(QQ::one()),
                self_int: None,
                genus: 0,
                sing0: vec![],
                branch: self.orbits[orbit].clone(),
            });
        }
        let id_of = |end: &End| match end {
            End::Exc(v) => *v,
            End::Arrow(slot) => r + 1 + slot,
        };
        let mut edges = Vec::with_capacity(self.edges.len());
        for (ex, ey, ty) in &self.edges {
            let (vx, vy) = (id_of(ex), id_of(ey));
            edges.push(if vx < vy {
                Edge {
                    v1: vx,
                    v2: vy,
                    ty: ty.unit_form()?,
                }
            } else {
                Edge {
                    v1: vy,
                    v2: vx,
                    ty: ty.swap().unit_form()?,
                }
            });
        }
        let g = DualGraph { vertices, edges };
        debug_assert!(g.validate().is_ok());
        Ok(g)
    }
}

fn branch_form(branch: &PuiseuxBranch, pos: usize) -> Result<Form> {
    if let Some(axis) = branch.axis {
        if !branch.terms.is_empty() {
            return Err(Error::ParseError(format!(
                "branch {pos}: an axis branch takes no terms"
            )));
        }
        return Ok(match axis {
            Axis::X => Form::XAxis,
            Axis::Y => Form::Series(vec![]),
        });
    }
    if branch.terms.is_empty() {
        return Err(Error::ParseError(format!(
            "branch {pos} needs terms or an axis"
        )));
    }
    let mut prev: Option<&QQ> = None;
    for t in &branch.terms {
        if !t.exp.is_positive() {
            return Err(Error::ParseError(format!(
                "branch {pos}: exponent {} is not positive",
                t.exp
            )));
        }
        if prev.is_some_and(|p| p >= &t.exp) {
            return Err(Error::ParseError(format!(
                "branch {pos}: exponents must increase strictly"
            )));
        }
        prev = Some(&t.exp);
    }
    let terms: Terms = branch
        .terms
        .iter()
        .map(|t| (t.coeff.clone(), t.exp.clone()))
        .collect();
    exp_delta(&terms)?;
    Ok(Form::Series(terms))
}

fn same_branch(x: &Form, y: &Form) -> Result<bool> {
    match (x, y) {
        (Form::XAxis, Form::XAxis) => Ok(true),
        (Form::Series(a), Form::Series(b)) => det_equivalent(a, b),
        _ => Ok(false),
    }
}

fn find(parent: &mut Vec<usize>, i: usize) -> usize {
    if parent[i] != i {
        let r = find(parent, parent[i]);
        parent[i] = r;
    }
    parent[i]
}

fn union(parent: &mut Vec<usize>, i: usize, j: usize) {
    let (ri, rj) = (find(parent, i), find(parent, j));
    if ri != rj {
        let (lo, hi) = (ri.min(rj), ri.max(rj));
        parent[hi] = lo;
    }
}

/// Strips leading terms that are a smooth change of coordinates: while every
/// series at the site starts with one shared term c x^k, k a positive
/// integer and c x^k equivariant, recenter along y = c x^k + ... instead.
fn translate(site: &mut Site) {
    if site.y_div.is_some() {
        return;
    }
    let (d, a, b) = (site.ambient.d(), site.ambient.a(), site.ambient.b());
    loop {
        let mut lead: Option<(Coeff, QQ)> = None;
        let mut any = false;
        for br in &site.branches {
            let Form::Series(s) = &br.form else { continue };
            let Some((c0, e0)) = s.first() else {
                return;
            };
            if !e0.is_integer() {
                return;
            }
            if d > 1 && !((qz(b) - qz(a) * e0) / qz(d)).is_integer() {
                return;
            }
            match &lead {
                None => lead = Some((c0.clone(), e0.clone())),
                Some((lc, le)) => {
                    if lc != c0 || le != e0 {
                        return;
                    }
                }
            }
            any = true;
        }
        if !any {
            return;
        }
        for br in &mut site.branches {
            if let Form::Series(s) = &mut br.form {
                s.remove(0);
            }
        }
    }
}

/// Strict transform into the first chart of a (p, q) blow-up with covering
/// data e: a term c x^k becomes c x^((pk - q)/e).
fn chart_transform(s: &Terms, p: i64, q: i64, e: i64) -> Terms {
    s.iter()
        .map(|(c, ex)| (c.clone(), (qz(p) * ex - qz(q)) / qz(e)))
        .collect()
}

/// Splits the series meeting the new divisor away from the chart origins
/// into one site per intersection point.
fn split_clusters(
    chart1: &CyclicType,
    xdiv: (usize, QQ),
    elems: Vec<(usize, Terms)>,
) -> Result<Vec<Site>> {
    if elems.is_empty() {
        return Ok(vec![]);
    }
    let d1 = chart1.d();
    if d1 > DELTA_CAP {
        return Err(Error::Internal("cluster rotation group too large".into()));
    }
    // the group moves a point v0 of the divisor to eps^b1 v0, so the class
    // of the leading coefficient is its d1-th power
    let mut groups: Vec<(Coeff, Vec<(usize, Terms)>)> = vec![];
    for (orbit, elt) in elems {
        debug_assert!(elt[0].1.is_zero());
        let key = elt[0].0.powi(d1);
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, members)) => members.push((orbit, elt)),
            None => groups.push((key, vec![(orbit, elt)])),
        }
    }
    let mut sites: Vec<(Coeff, Site)> = vec![];
    for (_, members) in groups {
        let c0 = members
            .iter()
            .map(|(_, elt)| &elt[0].0)
            .min()
            .expect("nonempty group")
            .clone();
        // align each element at the chosen center and keep distinct residues
        let mut residues: Vec<(usize, Terms)> = vec![];
        for (orbit, elt) in &members {
            for t in 0..d1 {
                let moved = action_shift(chart1, elt, t);
                if moved[0].0 != c0 {
                    continue;
                }
                let tail = moved[1..].to_vec();
                if !residues.iter().any(|(o, r)| o == orbit && *r == tail) {
                    residues.push((*orbit, tail));
                }
            }
        }
        let mut tags: Vec<usize> = residues.iter().map(|(o, _)| *o).collect();
        tags.sort_unstable();
        tags.dedup();
        let mut branches = vec![];
        for tag in tags {
            let mut pool: Vec<Terms> = residues
                .iter()
                .filter(|(o, _)| *o == tag)
                .map(|(_, r)| r.clone())
                .collect();
            while !pool.is_empty() {
                let rep = pool
                    .iter()
                    .min_by(|x, y| series_cmp(x, y))
                    .expect("nonempty pool")
                    .clone();
                let before = pool.len();
                let mut kept = Vec::with_capacity(before);
                for r in pool {
                    if !det_equivalent(&rep, &r)? {
                        kept.push(r);
                    }
                }
                debug_assert_eq!(
                    (before - kept.len()) as i64,
                    exp_delta(&rep)?,
                    "residues of one branch split into full deck classes"
                );
                pool = kept;
                branches.push(SiteBranch {
                    orbit: tag,
                    form: Form::Series(rep),
                });
            }
        }
        sites.push((
            c0,
            Site {
                ambient: CyclicType::smooth(),
                x_div: Some(xdiv.clone()),
                y_div: None,
                branches,
            },
        ));
    }
    sites.sort_by(|x, y| x.0.cmp(&y.0));
    Ok(sites.into_iter().map(|(_, s)| s).collect())
}

pub(crate) fn series_cmp(x: &Terms, y: &Terms) -> std::cmp::Ordering {
    for ((cx, ex), (cy, ey)) in x.iter().zip(y) {
        let o = ex.cmp(ey).then_with(|| cx.cmp(cy));
        if o != std::cmp::Ordering::Equal {
            return o;
        }
    }
    x.len().cmp(&y.len())
}

fn big_to_i64(v: &BigInt) -> Result<i64> {
    v.to_i64()
        .ok_or_else(|| Error::ParseError("exponent out of range".into()))
}

/// Least common multiple of the exponent denominators: the number of
/// conjugate determinations of the series.
pub(crate) fn exp_delta(s: &Terms) -> Result<i64> {
    let mut delta = 1i64;
    for (_, e) in s {
        let den = big_to_i64(e.denom())?;
        if den > DELTA_CAP {
            return Err(Error::ParseError(format!(
                "exponent denominator {den} exceeds the supported bound"
            )));
        }
        delta = lcm_i(delta, den);
        if delta > DELTA_CAP {
            return Err(Error::ParseError(
                "branch conjugacy degree exceeds the supported bound".into(),
            ));
        }
    }
    Ok(delta)
}

/// Deck transform: reinterpreting x^(1/delta) rotates the term of exponent e
/// by j*e turns.
fn det_shift(s: &Terms, j: i64) -> Terms {
    s.iter()
        .map(|(c, e)| (c.rotate(&(e * qz(j))), e.clone()))
        .collect()
}

/// Image of a series under the t-th power of the ambient action: the term
/// of exponent e picks up t(b - ae)/d turns.
fn action_shift(amb: &CyclicType, s: &Terms, t: i64) -> Terms {
    if amb.d() == 1 || t == 0 {
        return s.clone();
    }
    let (d, a, b) = (amb.d(), amb.a(), amb.b());
    s.iter()
        .map(|(c, e)| {
            let shift = (qz(b) - qz(a) * e) * qq(t, d);
            (c.rotate(&shift), e.clone())
        })
        .collect()
}

pub(crate) fn det_equivalent(x: &Terms, y: &Terms) -> Result<bool> {
    if x.len() != y.len() || !x.iter().zip(y).all(|((_, ex), (_, ey))| ex == ey) {
        return Ok(false);
    }
    let delta = exp_delta(x)?;
    for j in 0..delta {
        if det_shift(x, j) == *y {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Number of powers of the action needed to return a series to its own deck
/// class. Divides the ambient order.
fn orbit_len(amb: &CyclicType, s: &Terms) -> Result<i64> {
    let d = amb.d();
    if d == 1 {
        return Ok(1);
    }
    for t in divisors(d) {
        if det_equivalent(&action_shift(amb, s, t), s)? {
            return Ok(t);
        }
    }
    unreachable!("the d-th power of the action is a deck transform");
}

/// Number of distinct series over one branch orbit at this site.
fn closure_count(amb: &CyclicType, s: &Terms) -> Result<i64> {
    let delta = exp_delta(s)?;
    let o = orbit_len(amb, s)?;
    o.checked_mul(delta)
        .ok_or_else(|| Error::Internal("branch orbit count overflowed".into()))
}

fn closure_elements(amb: &CyclicType, s: &Terms) -> Result<Vec<Terms>> {
    let delta = exp_delta(s)?;
    let o = orbit_len(amb, s)?;
    if o.checked_mul(delta).is_none_or(|c| c > CLOSURE_CAP) {
        return Err(Error::Internal(
            "branch orbit too large to enumerate".into(),
        ));
    }
    let mut out = Vec::with_capacity((o * delta) as usize);
    for t in 0..o {
        let moved = action_shift(amb, s, t);
        for j in 0..delta {
            out.push(det_shift(&moved, j));
        }
    }
    Ok(out)
}

pub(crate) fn divisors(n: i64) -> Vec<i64> {
    let mut out = vec![];
    let mut i = 1;
    while i * i <= n {
        if n % i == 0 {
            out.push(i);
            if i != n / i {
                out.push(n / i);
            }
        }
        i += 1;
    }
    out.sort_unstable();
    out
}
