//! Coordinate geodesics for the (1,1)-Wasserstein distance: from an
//! optimal coupling, a path that moves one coordinate of one point at a
//! time (birth slides, death slides, collapses to the diagonal, and their
//! reverses), concatenated so that `W(γ(s), γ(t)) = t − s`.

use crate::diagram::PlaneDiagram;
use crate::transport::{wasserstein, CostParams, Mate};
use crate::{Coord, Result};
use num_traits::Zero;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentKind {
    BirthSlide,
    DeathSlide,
    Collapse,
    Expand,
}

impl SegmentKind {
    pub fn name(self) -> &'static str {
        match self {
            SegmentKind::BirthSlide => "birth-slide",
            SegmentKind::DeathSlide => "death-slide",
            SegmentKind::Collapse => "collapse",
            SegmentKind::Expand => "expand",
        }
    }
}

/// One coordinate geodesic in the concatenation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentInfo {
    pub kind: SegmentKind,
    pub duration: Coord,
    pub from: Option<(Coord, Coord)>,
    pub to: Option<(Coord, Coord)>,
}

#[derive(Debug, Clone)]
enum TrackKind {
    Move {
        from: (Coord, Coord),
        to: (Coord, Coord),
        birth_first: bool,
    },
    Collapse {
        from: (Coord, Coord),
    },
    Expand {
        to: (Coord, Coord),
    },
}

#[derive(Debug, Clone)]
struct Track {
    start: Coord,
    end: Coord,
    kind: TrackKind,
}

/// A constant-speed path from `D` to `E` of length `W_{1,1}(D, E)`,
/// sampling to a persistence diagram at any time.
#[derive(Debug, Clone)]
pub struct GeodesicPath {
    base: PlaneDiagram,
    tracks: Vec<Track>,
    total: Coord,
}

fn abs(v: Coord) -> Coord {
    if v < Coord::zero() {
        -v
    } else {
        v
    }
}

fn toward(from: Coord, to: Coord, step: Coord) -> Coord {
    if to >= from {
        from + step
    } else {
        from - step
    }
}

/// Build the concatenated coordinate geodesic realizing an optimal
/// (1,1)-coupling between two persistence diagrams.
pub fn coordinate_geodesic_path(d: &PlaneDiagram, e: &PlaneDiagram) -> Result<GeodesicPath> {
    let (_, coupling) = wasserstein(d, e, CostParams::one_one())?;
    let mut base = PlaneDiagram::empty();
    let mut kinds: Vec<TrackKind> = Vec::new();
    for (src, dst) in &coupling.pairs {
        match (src, dst) {
            (Mate::Point(x0, y0), Mate::Point(x1, y1)) => {
                let from = (*x0, *y0);
                let to = (*x1, *y1);
                if from == to {
                    base.add_value(from.0, from.1, 1);
                } else {
                    // Slide the birth first whenever the target birth stays
                    // below the source death; otherwise the death must move
                    // out of the way first.
                    kinds.push(TrackKind::Move {
                        from,
                        to,
                        birth_first: to.0 < from.1,
                    });
                }
            }
            (Mate::Point(x, y), Mate::Diagonal(_)) => {
                kinds.push(TrackKind::Collapse { from: (*x, *y) })
            }
            (Mate::Diagonal(_), Mate::Point(x, y)) => {
                kinds.push(TrackKind::Expand { to: (*x, *y) })
            }
            (Mate::Diagonal(_), Mate::Diagonal(_)) => {}
        }
    }
    // Deterministic concatenation order.
    kinds.sort_by_key(|k| match k {
        TrackKind::Move { from, to, .. } => (0, *from, *to),
        TrackKind::Collapse { from } => (1, *from, *from),
        TrackKind::Expand { to } => (2, *to, *to),
    });
    let mut tracks = Vec::with_capacity(kinds.len());
    let mut clock = Coord::zero();
    for kind in kinds {
        let duration = match &kind {
            TrackKind::Move { from, to, .. } => abs(to.0 - from.0) + abs(to.1 - from.1),
            TrackKind::Collapse { from } => from.1 - from.0,
            TrackKind::Expand { to } => to.1 - to.0,
        };
        let start = clock;
        clock += duration;
        tracks.push(Track {
            start,
            end: clock,
            kind,
        });
    }
    Ok(GeodesicPath {
        base,
        tracks,
        total: clock,
    })
}

impl GeodesicPath {
    /// Path length τ = W_{1,1}(D, E).
    pub fn total(&self) -> Coord {
        self.total
    }

    /// The diagram γ(t); `t` is clamped to [0, τ].
    pub fn sample(&self, t: Coord) -> PlaneDiagram {
        let t = t.max(Coord::zero()).min(self.total);
        let mut out = self.base.clone();
        for track in &self.tracks {
            match &track.kind {
                TrackKind::Move {
                    from,
                    to,
                    birth_first,
                } => {
                    let point = if t <= track.start {
                        *from
                    } else if t >= track.end {
                        *to
                    } else {
                        let s = t - track.start;
                        let birth_len = abs(to.0 - from.0);
                        if *birth_first {
                            if s <= birth_len {
                                (toward(from.0, to.0, s), from.1)
                            } else {
                                (to.0, toward(from.1, to.1, s - birth_len))
                            }
                        } else {
                            let death_len = abs(to.1 - from.1);
                            if s <= death_len {
                                (from.0, toward(from.1, to.1, s))
                            } else {
                                (toward(from.0, to.0, s - death_len), to.1)
                            }
                        }
                    };
                    out.add_value(point.0, point.1, 1);
                }
                TrackKind::Collapse { from } => {
                    if t < track.end {
                        let s = (t - track.start).max(Coord::zero());
                        out.add_value(from.0 + s, from.1, 1);
                    }
                }
                TrackKind::Expand { to } => {
                    if t > track.start {
                        let s = (track.end - t).max(Coord::zero());
                        out.add_value(to.0 + s, to.1, 1);
                    }
                }
            }
        }
        out
    }

    /// The concatenated coordinate geodesics, one entry per birth slide,
    /// death slide, collapse, or expansion.
    pub fn segments(&self) -> Vec<SegmentInfo> {
        let mut out = Vec::new();
        for track in &self.tracks {
            match &track.kind {
                TrackKind::Move {
                    from,
                    to,
                    birth_first,
                } => {
                    let birth_len = abs(to.0 - from.0);
                    let death_len = abs(to.1 - from.1);
                    let mid_birth_first = (to.0, from.1);
                    let mid_death_first = (from.0, to.1);
                    if *birth_first {
                        if !birth_len.is_zero() {
                            out.push(SegmentInfo {
                                kind: SegmentKind::BirthSlide,
                                duration: birth_len,
                                from: Some(*from),
                                to: Some(mid_birth_first),
                            });
                        }
                        if !death_len.is_zero() {
                            out.push(SegmentInfo {
                                kind: SegmentKind::DeathSlide,
                                duration: death_len,
                                from: Some(mid_birth_first),
                                to: Some(*to),
                            });
                        }
                    } else {
                        if !death_len.is_zero() {
                            out.push(SegmentInfo {
                                kind: SegmentKind::DeathSlide,
                                duration: death_len,
                                from: Some(*from),
                                to: Some(mid_death_first),
                            });
                        }
                        if !birth_len.is_zero() {
                            out.push(SegmentInfo {
                                kind: SegmentKind::BirthSlide,
                                duration: birth_len,
                                from: Some(mid_death_first),
                                to: Some(*to),
                            });
                        }
                    }
                }
                TrackKind::Collapse { from } => out.push(SegmentInfo {
                    kind: SegmentKind::Collapse,
                    duration: from.1 - from.0,
                    from: Some(*from),
                    to: None,
                }),
                TrackKind::Expand { to } => out.push(SegmentInfo {
                    kind: SegmentKind::Expand,
                    duration: to.1 - to.0,
                    from: None,
                    to: Some(*to),
                }),
            }
        }
        out
    }
}
