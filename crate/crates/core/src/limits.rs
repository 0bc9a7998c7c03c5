//! Pullbacks, weak pushouts and their preservation, by exhaustive search.
//!
//! Squares are drawn
//!
//! ```text
//!   p ──top──▶ c₁
//!   │left      │right
//!   ▼          ▼
//!   c₂ ─bottom─▶ d
//! ```
//!
//! and commute when `right ∘ top = bottom ∘ left`. A weak pushout is a
//! pullback square on a given span that is initial among all pullback
//! squares on that span.

use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::cat::{FinCat, FinFunctor, Mor, Obj};
use crate::par;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LimitError {
    #[error("`{0}` and `{1}` do not share a target")]
    NotACospan(String, String),
    #[error("`{0}` and `{1}` do not share a source")]
    NotASpan(String, String),
    #[error("square does not commute")]
    NonCommuting,
}

/// `left: c₁ → d` and `right: c₂ → d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cospan {
    pub left: Mor,
    pub right: Mor,
}

/// `left: p → c₁` and `right: p → c₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Span {
    pub left: Mor,
    pub right: Mor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Square {
    pub top: Mor,
    pub left: Mor,
    pub right: Mor,
    pub bottom: Mor,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SquareNames {
    pub top: String,
    pub left: String,
    pub right: String,
    pub bottom: String,
}

impl Square {
    pub fn span(&self) -> Span {
        Span {
            left: self.top,
            right: self.left,
        }
    }

    pub fn cospan(&self) -> Cospan {
        Cospan {
            left: self.right,
            right: self.bottom,
        }
    }

    pub fn from_cone(cone: Cone, cospan: Cospan) -> Square {
        Square {
            top: cone.left,
            left: cone.right,
            right: cospan.left,
            bottom: cospan.right,
        }
    }

    pub fn from_cocone(span: Span, cocone: Cocone) -> Square {
        Square {
            top: span.left,
            left: span.right,
            right: cocone.left,
            bottom: cocone.right,
        }
    }

    pub fn apex(&self, c: &FinCat) -> Obj {
        c.src(self.top)
    }

    pub fn corner(&self, c: &FinCat) -> Obj {
        c.tgt(self.right)
    }

    pub fn commutes(&self, c: &FinCat) -> bool {
        c.tgt(self.top) == c.src(self.right)
            && c.tgt(self.left) == c.src(self.bottom)
            && c.src(self.top) == c.src(self.left)
            && c.tgt(self.right) == c.tgt(self.bottom)
            && c.compose(self.right, self.top) == c.compose(self.bottom, self.left)
    }

    pub fn map(&self, f: &FinFunctor) -> Square {
        Square {
            top: f.mor(self.top),
            left: f.mor(self.left),
            right: f.mor(self.right),
            bottom: f.mor(self.bottom),
        }
    }

    pub fn names(&self, c: &FinCat) -> SquareNames {
        SquareNames {
            top: c.mor_name(self.top).to_owned(),
            left: c.mor_name(self.left).to_owned(),
            right: c.mor_name(self.right).to_owned(),
            bottom: c.mor_name(self.bottom).to_owned(),
        }
    }
}

/// A commuting cone `(apex, left, right)` over a cospan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cone {
    pub apex: Obj,
    pub left: Mor,
    pub right: Mor,
}

/// A commuting cocone `(corner, left, right)` under a span.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cocone {
    pub corner: Obj,
    pub left: Mor,
    pub right: Mor,
}

/// Outcome of a universal-property check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Universal {
    Holds,
    /// Some competitor admits no mediating morphism.
    NoMediator {
        competitor: Square,
    },
    /// Some competitor admits at least two mediating morphisms.
    NonUnique {
        competitor: Square,
        mediators: [Mor; 2],
    },
}

impl Universal {
    pub fn holds(&self) -> bool {
        matches!(self, Universal::Holds)
    }
}

fn check_cospan(c: &FinCat, cs: Cospan) -> Result<(), LimitError> {
    if c.tgt(cs.left) != c.tgt(cs.right) {
        return Err(LimitError::NotACospan(
            c.mor_name(cs.left).into(),
            c.mor_name(cs.right).into(),
        ));
    }
    Ok(())
}

fn check_span(c: &FinCat, sp: Span) -> Result<(), LimitError> {
    if c.src(sp.left) != c.src(sp.right) {
        return Err(LimitError::NotASpan(
            c.mor_name(sp.left).into(),
            c.mor_name(sp.right).into(),
        ));
    }
    Ok(())
}

/// All commuting cones over `cs`, ordered by `(apex, left, right)`.
pub fn cones(c: &FinCat, cs: Cospan) -> Vec<Cone> {
    let (c1, c2) = (c.src(cs.left), c.src(cs.right));
    let mut out = Vec::new();
    for p in c.objects() {
        for &l in c.hom(p, c1) {
            let fl = c.compose(cs.left, l);
            for &r in c.hom(p, c2) {
                if c.compose(cs.right, r) == fl {
                    out.push(Cone {
                        apex: p,
                        left: l,
                        right: r,
                    });
                }
            }
        }
    }
    out
}

/// All commuting cocones under `sp`, ordered by `(corner, left, right)`.
pub fn cocones(c: &FinCat, sp: Span) -> Vec<Cocone> {
    let (c1, c2) = (c.tgt(sp.left), c.tgt(sp.right));
    let mut out = Vec::new();
    for d in c.objects() {
        for &l in c.hom(c1, d) {
            let lf = c.compose(l, sp.left);
            for &r in c.hom(c2, d) {
                if c.compose(r, sp.right) == lf {
                    out.push(Cocone {
                        corner: d,
                        left: l,
                        right: r,
                    });
                }
            }
        }
    }
    out
}

/// Morphisms `m: k → t` with `t.left ∘ m = k.left` and `t.right ∘ m = k.right`,
/// at most `cap` of them.
fn cone_mediators(c: &FinCat, t: &Cone, k: &Cone, cap: usize) -> Vec<Mor> {
    c.hom(k.apex, t.apex)
        .iter()
        .copied()
        .filter(|&m| c.compose(t.left, m) == k.left && c.compose(t.right, m) == k.right)
        .take(cap)
        .collect()
}

/// Morphisms `h: w → z` with `h ∘ w.left = z.left` and `h ∘ w.right = z.right`,
/// at most `cap` of them.
fn cocone_mediators(c: &FinCat, w: &Cocone, z: &Cocone, cap: usize) -> Vec<Mor> {
    c.hom(w.corner, z.corner)
        .iter()
        .copied()
        .filter(|&h| c.compose(h, w.left) == z.left && c.compose(h, w.right) == z.right)
        .take(cap)
        .collect()
}

fn is_iso(c: &FinCat, f: Mor) -> bool {
    crate::cat::is_iso(c, f).is_some()
}

/// Least terminal cone among `cones`: a tournament finds a weakly terminal
/// cone, then its equivalence class is verified in order.
fn terminal_cone(c: &FinCat, cones: &[Cone]) -> Option<usize> {
    let mut t = 0;
    for k in 1..cones.len() {
        if cone_mediators(c, &cones[t], &cones[k], 1).is_empty() {
            t = k;
        }
    }
    (0..cones.len()).find(|&k| {
        !cone_mediators(c, &cones[k], &cones[t], 1).is_empty()
            && cones.iter().all(|j| cone_mediators(c, &cones[k], j, 2).len() == 1)
    })
}

fn initial_cocone(c: &FinCat, cocones: &[Cocone]) -> Option<usize> {
    let mut b = 0;
    for k in 1..cocones.len() {
        if cocone_mediators(c, &cocones[b], &cocones[k], 1).is_empty() {
            b = k;
        }
    }
    (0..cocones.len()).find(|&k| {
        !cocone_mediators(c, &cocones[b], &cocones[k], 1).is_empty()
            && cocones
                .iter()
                .all(|z| cocone_mediators(c, &cocones[k], z, 2).len() == 1)
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pullback {
    pub square: Square,
    /// Number of cones over the cospan, each shown to factor uniquely.
    pub competitors: usize,
}

/// The pullback of a cospan with least `(apex, left, right)`, if one exists.
pub fn pullback(c: &FinCat, cs: Cospan) -> Result<Option<Pullback>, LimitError> {
    check_cospan(c, cs)?;
    let cones = cones(c, cs);
    Ok(terminal_cone(c, &cones).map(|k| Pullback {
        square: Square::from_cone(cones[k], cs),
        competitors: cones.len(),
    }))
}

/// Brute-force terminal-cone check of a commuting square over its cospan.
pub fn is_pullback_square(c: &FinCat, sq: &Square) -> Result<Universal, LimitError> {
    if !sq.commutes(c) {
        return Err(LimitError::NonCommuting);
    }
    let cs = sq.cospan();
    let t = Cone {
        apex: sq.apex(c),
        left: sq.top,
        right: sq.left,
    };
    for k in cones(c, cs) {
        let m = cone_mediators(c, &t, &k, 2);
        let competitor = Square::from_cone(k, cs);
        match m.len() {
            0 => return Ok(Universal::NoMediator { competitor }),
            1 => {}
            _ => {
                return Ok(Universal::NonUnique {
                    competitor,
                    mediators: [m[0], m[1]],
                })
            }
        }
    }
    Ok(Universal::Holds)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakPushout {
    pub square: Square,
    /// Every pullback completion of the span with its unique mediator from
    /// the weak pushout corner.
    pub mediators: Vec<(Cocone, Mor)>,
}

/// Cocones under `sp` whose square is a pullback square.
fn pullback_completions(c: &FinCat, sp: Span, is_pb: impl Fn(&Square) -> bool) -> Vec<Cocone> {
    cocones(c, sp)
        .into_iter()
        .filter(|w| is_pb(&Square::from_cocone(sp, *w)))
        .collect()
}

/// The weak pushout of a span with least `(corner, left, right)`, if one
/// exists.
pub fn weak_pushout(c: &FinCat, sp: Span) -> Result<Option<WeakPushout>, LimitError> {
    check_span(c, sp)?;
    let lim = Limits::new(c);
    let comps = pullback_completions(c, sp, |sq| lim.is_pullback(sq));
    Ok(initial_cocone(c, &comps).map(|k| WeakPushout {
        square: Square::from_cocone(sp, comps[k]),
        mediators: comps
            .iter()
            .map(|z| (*z, cocone_mediators(c, &comps[k], z, 1)[0]))
            .collect(),
    }))
}

/// Brute-force weak-pushout check: the square is a pullback square and
/// every pullback square on the same span receives a unique mediator.
pub fn is_weak_pushout_square(c: &FinCat, sq: &Square) -> Result<Universal, LimitError> {
    let own = is_pullback_square(c, sq)?;
    if !own.holds() {
        return Ok(own);
    }
    let sp = sq.span();
    let w = Cocone {
        corner: sq.corner(c),
        left: sq.right,
        right: sq.bottom,
    };
    let comps = pullback_completions(c, sp, |s| is_pullback_square(c, s).map(|u| u.holds()).unwrap_or(false));
    for z in comps {
        let m = cocone_mediators(c, &w, &z, 2);
        let competitor = Square::from_cocone(sp, z);
        match m.len() {
            0 => return Ok(Universal::NoMediator { competitor }),
            1 => {}
            _ => {
                return Ok(Universal::NonUnique {
                    competitor,
                    mediators: [m[0], m[1]],
                })
            }
        }
    }
    Ok(Universal::Holds)
}

/// Memoized pullbacks and weak pushouts of one category.
///
/// A commuting square is a pullback exactly when its mediator into the
/// cached pullback of its cospan is invertible; weak pushouts are compared
/// the same way. Slots fill lazily and may be filled from several threads.
pub struct Limits<'a> {
    c: &'a FinCat,
    in_pos: Vec<usize>,
    out_pos: Vec<usize>,
    cospan_off: Vec<usize>,
    span_off: Vec<usize>,
    pullbacks: Vec<OnceLock<Option<Square>>>,
    pushouts: Vec<OnceLock<Option<Square>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LimitAudit {
    /// Every diagram has its limit (strict reading).
    pub strict_holds: bool,
    /// Diagrams examined.
    pub diagrams: usize,
    /// Diagrams without a limit.
    pub missing: usize,
    /// First diagram without a limit.
    pub counterexample: Option<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeakPushoutAudit {
    /// Every span with at least one pullback completion has a weak pushout.
    pub holds: bool,
    /// Every span has a weak pushout.
    pub strict_holds: bool,
    pub spans: usize,
    /// Spans with no pullback completion at all.
    pub spans_without_completion: usize,
    /// First span with a completion but no weak pushout.
    pub counterexample: Option<(String, String)>,
    /// First span lacking a weak pushout, with or without completions.
    pub strict_counterexample: Option<(String, String)>,
}

impl<'a> Limits<'a> {
    pub fn new(c: &'a FinCat) -> Limits<'a> {
        let mut in_pos = vec![0; c.num_morphisms()];
        let mut out_pos = vec![0; c.num_morphisms()];
        let mut cospan_off = Vec::with_capacity(c.num_objects() + 1);
        let mut span_off = Vec::with_capacity(c.num_objects() + 1);
        let (mut nc, mut ns) = (0, 0);
        for x in c.objects() {
            for (i, &m) in c.incoming(x).iter().enumerate() {
                in_pos[m.idx()] = i;
            }
            for (i, &m) in c.outgoing(x).iter().enumerate() {
                out_pos[m.idx()] = i;
            }
            cospan_off.push(nc);
            span_off.push(ns);
            nc += c.incoming(x).len().pow(2);
            ns += c.outgoing(x).len().pow(2);
        }
        cospan_off.push(nc);
        span_off.push(ns);
        Limits {
            c,
            in_pos,
            out_pos,
            cospan_off,
            span_off,
            pullbacks: (0..nc).map(|_| OnceLock::new()).collect(),
            pushouts: (0..ns).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn category(&self) -> &'a FinCat {
        self.c
    }

    fn cospan_slot(&self, cs: Cospan) -> usize {
        let d = self.c.tgt(cs.left);
        let n = self.c.incoming(d).len();
        self.cospan_off[d.idx()] + self.in_pos[cs.left.idx()] * n + self.in_pos[cs.right.idx()]
    }

    fn span_slot(&self, sp: Span) -> usize {
        let p = self.c.src(sp.left);
        let n = self.c.outgoing(p).len();
        self.span_off[p.idx()] + self.out_pos[sp.left.idx()] * n + self.out_pos[sp.right.idx()]
    }

    /// Every cospan, grouped by common target.
    pub fn cospans(&self) -> Vec<Cospan> {
        let c = self.c;
        c.objects()
            .flat_map(|d| {
                c.incoming(d)
                    .iter()
                    .flat_map(move |&l| c.incoming(d).iter().map(move |&r| Cospan { left: l, right: r }))
            })
            .collect()
    }

    /// Every span, grouped by common source.
    pub fn spans(&self) -> Vec<Span> {
        let c = self.c;
        c.objects()
            .flat_map(|p| {
                c.outgoing(p)
                    .iter()
                    .flat_map(move |&l| c.outgoing(p).iter().map(move |&r| Span { left: l, right: r }))
            })
            .collect()
    }

    /// Cached pullback square. Panics if `cs` is not a cospan.
    pub fn pullback(&self, cs: Cospan) -> Option<Square> {
        *self.pullbacks[self.cospan_slot(cs)].get_or_init(|| pullback(self.c, cs).expect("cospan").map(|p| p.square))
    }

    /// Commuting square whose mediator into the chosen pullback is an iso.
    pub fn is_pullback(&self, sq: &Square) -> bool {
        let c = self.c;
        if !sq.commutes(c) {
            return false;
        }
        let Some(pb) = self.pullback(sq.cospan()) else {
            return false;
        };
        let t = Cone {
            apex: pb.apex(c),
            left: pb.top,
            right: pb.left,
        };
        let k = Cone {
            apex: sq.apex(c),
            left: sq.top,
            right: sq.left,
        };
        cone_mediators(c, &t, &k, 1).first().is_some_and(|&m| is_iso(c, m))
    }

    /// Cached weak pushout square. Panics if `sp` is not a span.
    pub fn weak_pushout(&self, sp: Span) -> Option<Square> {
        *self.pushouts[self.span_slot(sp)].get_or_init(|| {
            let comps = pullback_completions(self.c, sp, |sq| self.is_pullback(sq));
            initial_cocone(self.c, &comps).map(|k| Square::from_cocone(sp, comps[k]))
        })
    }

    /// Pullback square whose mediator from the chosen weak pushout is an iso.
    pub fn is_weak_pushout(&self, sq: &Square) -> bool {
        let c = self.c;
        if !self.is_pullback(sq) {
            return false;
        }
        let Some(wp) = self.weak_pushout(sq.span()) else {
            return false;
        };
        let w = Cocone {
            corner: wp.corner(c),
            left: wp.right,
            right: wp.bottom,
        };
        let z = Cocone {
            corner: sq.corner(c),
            left: sq.right,
            right: sq.bottom,
        };
        cocone_mediators(c, &w, &z, 1).first().is_some_and(|&h| is_iso(c, h))
    }

    /// Whether `sp` has any pullback completion.
    pub fn has_pullback_completion(&self, sp: Span) -> bool {
        cocones(self.c, sp)
            .into_iter()
            .any(|w| self.is_pullback(&Square::from_cocone(sp, w)))
    }

    pub fn audit_pullbacks(&self) -> LimitAudit {
        let cospans = self.cospans();
        let found = par::map(&cospans, |&cs| self.pullback(cs).is_some());
        let missing: Vec<&Cospan> = cospans
            .iter()
            .zip(&found)
            .filter(|(_, &f)| !f)
            .map(|(cs, _)| cs)
            .collect();
        LimitAudit {
            strict_holds: missing.is_empty(),
            diagrams: cospans.len(),
            missing: missing.len(),
            counterexample: missing
                .first()
                .map(|cs| (self.c.mor_name(cs.left).into(), self.c.mor_name(cs.right).into())),
        }
    }

    pub fn audit_weak_pushouts(&self) -> WeakPushoutAudit {
        let spans = self.spans();
        let status = par::map(&spans, |&sp| {
            let found = self.weak_pushout(sp).is_some();
            (found, found || self.has_pullback_completion(sp))
        });
        let name = |sp: &Span| {
            (
                self.c.mor_name(sp.left).to_owned(),
                self.c.mor_name(sp.right).to_owned(),
            )
        };
        let first_bad = spans
            .iter()
            .zip(&status)
            .find(|(_, s)| s.1 && !s.0)
            .map(|(sp, _)| name(sp));
        let first_missing = spans.iter().zip(&status).find(|(_, s)| !s.0).map(|(sp, _)| name(sp));
        WeakPushoutAudit {
            holds: first_bad.is_none(),
            strict_holds: first_missing.is_none(),
            spans: spans.len(),
            spans_without_completion: status.iter().filter(|s| !s.1).count(),
            counterexample: first_bad,
            strict_counterexample: first_missing,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PreservationReport {
    pub holds: bool,
    /// Squares examined in the source.
    pub checked: usize,
    pub counterexample: Option<SquareNames>,
}

/// Every pullback square of the source maps to a pullback square.
pub fn preserves_pullbacks(f: &FinFunctor) -> PreservationReport {
    let (s, t) = (Limits::new(f.source()), Limits::new(f.target()));
    preserves_pullbacks_with(f, &s, &t)
}

pub fn preserves_pullbacks_with(f: &FinFunctor, src: &Limits, tgt: &Limits) -> PreservationReport {
    let squares: Vec<Square> = par::map(&src.cospans(), |&cs| src.pullback(cs))
        .into_iter()
        .flatten()
        .collect();
    let bad = par::find_first(&squares, |sq| (!tgt.is_pullback(&sq.map(f))).then_some(*sq));
    PreservationReport {
        holds: bad.is_none(),
        checked: squares.len(),
        counterexample: bad.map(|sq| sq.names(src.category())),
    }
}

/// Every weak pushout square of the source maps to a weak pushout square.
pub fn preserves_weak_pushouts(f: &FinFunctor) -> PreservationReport {
    let (s, t) = (Limits::new(f.source()), Limits::new(f.target()));
    preserves_weak_pushouts_with(f, &s, &t)
}

pub fn preserves_weak_pushouts_with(f: &FinFunctor, src: &Limits, tgt: &Limits) -> PreservationReport {
    let squares: Vec<Square> = par::map(&src.spans(), |&sp| src.weak_pushout(sp))
        .into_iter()
        .flatten()
        .collect();
    let bad = par::find_first(&squares, |sq| (!tgt.is_weak_pushout(&sq.map(f))).then_some(*sq));
    PreservationReport {
        holds: bad.is_none(),
        checked: squares.len(),
        counterexample: bad.map(|sq| sq.names(src.category())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use std::sync::Arc;

    fn m(c: &FinCat, name: &str) -> Mor {
        c.mor(name).unwrap()
    }

    #[test]
    fn identity_cospan() {
        let c = gen::fi_truncated(2);
        let i = c.id(c.obj("2").unwrap());
        let pb = pullback(&c, Cospan { left: i, right: i }).unwrap().unwrap();
        assert_eq!(c.obj_name(pb.square.apex(&c)), "2");
        assert!(c.is_identity(pb.square.top) && c.is_identity(pb.square.left));
    }

    #[test]
    fn disjoint_and_equal_images() {
        let c = gen::fi_truncated(3);
        let cs = Cospan {
            left: m(&c, "1>2[0]"),
            right: m(&c, "1>2[1]"),
        };
        let pb = pullback(&c, cs).unwrap().unwrap();
        assert_eq!(c.obj_name(pb.square.apex(&c)), "0");
        let same = Cospan {
            left: m(&c, "1>2[0]"),
            right: m(&c, "1>2[0]"),
        };
        let pb = pullback(&c, same).unwrap().unwrap();
        assert_eq!(c.obj_name(pb.square.apex(&c)), "1");
        assert!(c.is_identity(pb.square.top));
    }

    #[test]
    fn too_small_apex_is_not_a_pullback() {
        let c = gen::fi_truncated(2);
        let sq = Square {
            top: m(&c, "0>1[]"),
            left: m(&c, "0>1[]"),
            right: m(&c, "1>2[0]"),
            bottom: m(&c, "1>2[0]"),
        };
        assert!(matches!(
            is_pullback_square(&c, &sq).unwrap(),
            Universal::NoMediator { .. }
        ));
    }

    #[test]
    fn disjoint_square_is_a_pullback() {
        let c = gen::fi_truncated(2);
        let sq = Square {
            top: m(&c, "0>1[]"),
            left: m(&c, "0>1[]"),
            right: m(&c, "1>2[0]"),
            bottom: m(&c, "1>2[1]"),
        };
        assert!(is_pullback_square(&c, &sq).unwrap().holds());
        assert!(Limits::new(&c).is_pullback(&sq));
    }

    #[test]
    fn non_commuting_square_is_an_error() {
        let c = gen::fi_truncated(2);
        let sq = Square {
            top: m(&c, "1>1[0]"),
            left: m(&c, "1>1[0]"),
            right: m(&c, "1>2[0]"),
            bottom: m(&c, "1>2[1]"),
        };
        assert_eq!(is_pullback_square(&c, &sq), Err(LimitError::NonCommuting));
    }

    /// `p, q: x → y` coequalized by `w: y → z`, with `w ∘ p = w ∘ q = r`.
    fn coequalized_pair() -> FinCat {
        use crate::cat::CatParts;
        let mut parts = CatParts::default();
        let (x, y, z) = (parts.add_object("x"), parts.add_object("y"), parts.add_object("z"));
        let ids = vec![
            parts.add_morphism("1x", x, x),
            parts.add_morphism("1y", y, y),
            parts.add_morphism("1z", z, z),
        ];
        let (p, q) = (parts.add_morphism("p", x, y), parts.add_morphism("q", x, y));
        let w = parts.add_morphism("w", y, z);
        let r = parts.add_morphism("r", x, z);
        parts.identities = ids.clone();
        FinCat::from_parts(parts, |g, f| {
            Some(if ids.contains(&g) {
                f
            } else if ids.contains(&f) {
                g
            } else {
                assert!(g == w && (f == p || f == q));
                r
            })
        })
        .unwrap()
    }

    #[test]
    fn non_unique_mediators_are_distinguished() {
        let c = coequalized_pair();
        let (w, z) = (m(&c, "w"), m(&c, "1z"));
        let sq = Square {
            top: w,
            left: w,
            right: z,
            bottom: z,
        };
        match is_pullback_square(&c, &sq).unwrap() {
            Universal::NonUnique { mediators, .. } => {
                assert_eq!(mediators, [m(&c, "p"), m(&c, "q")]);
            }
            other => panic!("{other:?}"),
        }
        let sq = Square {
            top: m(&c, "p"),
            left: m(&c, "p"),
            right: m(&c, "1y"),
            bottom: m(&c, "1y"),
        };
        assert!(matches!(
            is_pullback_square(&c, &sq).unwrap(),
            Universal::NoMediator { .. }
        ));
    }

    #[test]
    fn weak_pushout_of_disjoint_points() {
        let c = gen::fi_truncated(4);
        let e = m(&c, "0>1[]");
        let wp = weak_pushout(&c, Span { left: e, right: e }).unwrap().unwrap();
        assert_eq!(c.obj_name(wp.square.corner(&c)), "2");
        assert!(is_weak_pushout_square(&c, &wp.square).unwrap().holds());
        assert!(!wp.mediators.is_empty());
    }

    #[test]
    fn identity_span() {
        let c = gen::fi_truncated(2);
        let i = c.id(c.obj("1").unwrap());
        let wp = weak_pushout(&c, Span { left: i, right: i }).unwrap().unwrap();
        assert!(c.is_identity(wp.square.right) && c.is_identity(wp.square.bottom));
    }

    #[test]
    fn span_without_completion_has_no_weak_pushout() {
        let c = gen::discrete(2);
        let i = c.id(c.obj("0").unwrap());
        // The only completion is the identity square, which is a pullback.
        assert!(weak_pushout(&c, Span { left: i, right: i }).unwrap().is_some());
        let c = gen::two_parallel_arrows();
        let (p, q) = (m(&c, "p"), m(&c, "q"));
        assert!(weak_pushout(&c, Span { left: p, right: q }).unwrap().is_none());
    }

    #[test]
    fn cached_and_brute_routes_agree_on_fi3() {
        let c = gen::fi_truncated(3);
        let lim = Limits::new(&c);
        for cs in lim.cospans() {
            for k in cones(&c, cs) {
                let sq = Square::from_cone(k, cs);
                assert_eq!(lim.is_pullback(&sq), is_pullback_square(&c, &sq).unwrap().holds());
            }
        }
    }

    #[test]
    fn identity_and_constant_functors_preserve() {
        let c = Arc::new(gen::fi_truncated(2));
        let id = FinFunctor::identity(c.clone());
        assert!(preserves_pullbacks(&id).holds);
        assert!(preserves_weak_pushouts(&id).holds);
        let pt = Arc::new(gen::terminal());
        let k = FinFunctor::new(
            c.clone(),
            pt,
            vec![Obj(0); c.num_objects()],
            vec![Mor(0); c.num_morphisms()],
        )
        .unwrap();
        assert!(preserves_pullbacks(&k).holds);
        assert!(preserves_weak_pushouts(&k).holds);
    }

    #[test]
    fn fi4_audits() {
        let c = gen::fi_truncated(4);
        let lim = Limits::new(&c);
        assert!(lim.audit_pullbacks().strict_holds);
        let wp = lim.audit_weak_pushouts();
        assert!(wp.holds);
        assert!(!wp.strict_holds, "4 <- 0 -> 4 needs a corner of size 8");
    }
}
