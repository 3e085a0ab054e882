//! Compact orientable surfaces with boundary and their free fundamental groups.
//!
//! A surface of genus `g` with `b > 0` boundary circles has free fundamental
//! group of rank `2g + b - 1`. Generators are indexed `0..rank` with the
//! convention: indices `0..2g` are the handle generators `a1..a2g`, indices
//! `2g..rank` are the designated boundary generators `c1..c(b-1)`. The last
//! boundary circle is not a generator; its class is determined by the surface
//! relation, so that all boundary words together with the handle commutators
//! multiply to the identity.

use crate::error::{Error, Result};
use crate::words::FreeWord;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceData {
    pub genus: u32,
    pub boundary_count: u32,
}

impl SurfaceData {
    pub fn new(genus: u32, boundary_count: u32) -> Result<Self> {
        let s = SurfaceData {
            genus,
            boundary_count,
        };
        if boundary_count == 0 {
            return Err(Error::Domain("surface must have boundary".into()));
        }
        if !s.euler_negative() {
            return Err(Error::Domain(format!(
                "Euler characteristic {} is not negative (genus {genus}, boundary {boundary_count})",
                s.euler_characteristic()
            )));
        }
        Ok(s)
    }

    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.boundary_count as i64
    }

    pub fn euler_negative(&self) -> bool {
        self.euler_characteristic() < 0
    }

    /// Rank of the free fundamental group.
    pub fn rank(&self) -> u32 {
        2 * self.genus + self.boundary_count - 1
    }

    /// Generator index of the handle generator `a_i` (1-based).
    pub fn handle_gen(&self, i: u32) -> Option<u32> {
        (i >= 1 && i <= 2 * self.genus).then(|| i - 1)
    }

    /// Generator index of the designated boundary generator `c_i` (1-based,
    /// `i < boundary_count`).
    pub fn boundary_gen(&self, i: u32) -> Option<u32> {
        (i >= 1 && i < self.boundary_count).then(|| 2 * self.genus + i - 1)
    }

    pub fn gen_in_range(&self, gen: u32) -> bool {
        gen < self.rank()
    }
}

/// Validated free reduction of a raw run sequence over the surface group.
///
/// Rejects generator indices outside `0..rank` before reducing. This is the
/// entry point for untrusted letter data; reduction itself lives on
/// [`FreeWord`].
pub fn free_reduce(surface: &SurfaceData, raw: &[(u32, i64)]) -> Result<FreeWord> {
    for &(g, _) in raw {
        if !surface.gen_in_range(g) {
            return Err(Error::MalformedWord {
                index: g,
                rank: surface.rank(),
            });
        }
    }
    Ok(FreeWord::reduce(raw))
}

/// The peripheral word of the `i`-th boundary circle (1-based).
///
/// For `i < boundary_count` this is the designated generator `c_i`. For
/// `i = boundary_count` it is the relation-determined word
/// `([a1,a2]...[a(2g-1),a(2g)] c1...c(b-1))^-1`.
pub fn boundary_word(surface: &SurfaceData, i: u32) -> Result<FreeWord> {
    if i < 1 || i > surface.boundary_count {
        return Err(Error::BoundaryIndex {
            index: i,
            count: surface.boundary_count,
        });
    }
    if let Some(gen) = surface.boundary_gen(i) {
        return Ok(FreeWord::letter(gen, 1));
    }
    // Last boundary: invert the product of handle commutators and the other
    // boundary generators.
    let mut w = FreeWord::identity();
    for h in 0..surface.genus {
        let a = 2 * h;
        let b = 2 * h + 1;
        w = w
            .mul(&FreeWord::letter(a, 1))
            .mul(&FreeWord::letter(b, 1))
            .mul(&FreeWord::letter(a, -1))
            .mul(&FreeWord::letter(b, -1));
    }
    for j in 1..surface.boundary_count {
        w = w.mul(&FreeWord::letter(surface.boundary_gen(j).unwrap(), 1));
    }
    Ok(w.inverse())
}
