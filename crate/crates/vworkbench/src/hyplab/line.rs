//! Isometries of the integer line, the δ = 0 model for displacement
//! estimates along an axis.
//!
//! Reflections are stored by their doubled center so edge-midpoint
//! reflections stay in integer arithmetic: `Reflection { center2: c }`
//! maps x to c - x and fixes the point c/2.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LineModelIsometry {
    Translation { offset: i64 },
    Reflection { center2: i64 },
}

use LineModelIsometry::{Reflection, Translation};

impl LineModelIsometry {
    pub fn apply(&self, x: i64) -> i64 {
        match *self {
            Translation { offset } => x + offset,
            Reflection { center2 } => center2 - x,
        }
    }

    /// self ∘ other: `other` acts first.
    pub fn compose(&self, other: &LineModelIsometry) -> LineModelIsometry {
        match (*self, *other) {
            (Translation { offset: s }, Translation { offset: t }) => {
                Translation { offset: s + t }
            }
            (Reflection { center2 }, Translation { offset }) => {
                Reflection { center2: center2 - offset }
            }
            (Translation { offset }, Reflection { center2 }) => {
                Reflection { center2: center2 + offset }
            }
            (Reflection { center2: c }, Reflection { center2: d }) => {
                Translation { offset: c - d }
            }
        }
    }

    pub fn inverse(&self) -> LineModelIsometry {
        match *self {
            Translation { offset } => Translation { offset: -offset },
            r @ Reflection { .. } => r,
        }
    }

    /// Minimal displacement over the line. A reflection with an even
    /// doubled center fixes a vertex; an odd one fixes an edge midpoint
    /// and moves every vertex by at least 1.
    pub fn translation_length(&self) -> i64 {
        match *self {
            Translation { offset } => offset.abs(),
            Reflection { center2 } => center2.rem_euclid(2),
        }
    }

    /// A vertex realizing the minimal displacement.
    pub fn minimal_vertex(&self) -> i64 {
        match *self {
            Translation { .. } => 0,
            Reflection { center2 } => center2.div_euclid(2),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LineModelCheck {
    pub translation: i64,
    pub center2: i64,
    pub min_displacement: i64,
    pub achieved_at: i64,
    pub holds: bool,
}

/// For a nontrivial translation g and a reflection h, both hg and h are
/// elliptic (order two), and some vertex within the scan window moves at
/// most 1 under h; a vertex-centered reflection moves one vertex not at
/// all. The window must cover the reflection's fixed point.
pub fn line_model_check(
    g: &LineModelIsometry,
    h: &LineModelIsometry,
    window: i64,
) -> LineModelCheck {
    let (Translation { offset }, Reflection { center2 }) = (*g, *h) else {
        return LineModelCheck {
            translation: 0,
            center2: 0,
            min_displacement: i64::MAX,
            achieved_at: 0,
            holds: false,
        };
    };
    let hg = h.compose(g);
    let composite_is_reflection = matches!(hg, Reflection { .. });
    let mut best = i64::MAX;
    let mut at = 0;
    for x in -window..=window {
        let moved = (h.apply(x) - x).abs();
        if moved < best {
            best = moved;
            at = x;
        }
    }
    let expected = h.translation_length();
    LineModelCheck {
        translation: offset,
        center2,
        min_displacement: best,
        achieved_at: at,
        holds: offset != 0
            && composite_is_reflection
            && best <= 1
            && best == expected
            && at == h.minimal_vertex(),
    }
}
