//! Block groups: the direct product of a surface group with an infinite
//! cyclic fiber. Elements are pairs (reduced word, fiber exponent); the fiber
//! is central so multiplication is componentwise in the exponent.

use crate::error::{Error, Result};
use crate::surface::SurfaceData;
use crate::words::FreeWord;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlockElement {
    pub surface: SurfaceData,
    pub base: FreeWord,
    pub fiber: i64,
}

impl BlockElement {
    pub fn identity(surface: SurfaceData) -> Self {
        BlockElement {
            surface,
            base: FreeWord::identity(),
            fiber: 0,
        }
    }

    pub fn new(surface: SurfaceData, base: FreeWord, fiber: i64) -> Result<Self> {
        if let Some(g) = base.max_generator() {
            if !surface.gen_in_range(g) {
                return Err(Error::MalformedWord {
                    index: g,
                    rank: surface.rank(),
                });
            }
        }
        Ok(BlockElement {
            surface,
            base,
            fiber,
        })
    }

    /// The central fiber generator `z^exp`.
    pub fn fiber_power(surface: SurfaceData, exp: i64) -> Self {
        BlockElement {
            surface,
            base: FreeWord::identity(),
            fiber: exp,
        }
    }

    pub fn generator(surface: SurfaceData, gen: u32, exp: i64) -> Result<Self> {
        Self::new(surface, FreeWord::letter(gen, exp), 0)
    }

    pub fn is_identity(&self) -> bool {
        self.base.is_identity() && self.fiber == 0
    }

    pub fn mul(&self, other: &BlockElement) -> Result<BlockElement> {
        if self.surface != other.surface {
            return Err(Error::SurfaceMismatch(
                format!("{:?}", self.surface),
                format!("{:?}", other.surface),
            ));
        }
        Ok(self.mul_same_surface(other))
    }

    /// Multiplication when both factors are known to live over one surface
    /// (enforced structurally by the decorated-path machinery).
    pub(crate) fn mul_same_surface(&self, other: &BlockElement) -> BlockElement {
        BlockElement {
            surface: self.surface,
            base: self.base.mul(&other.base),
            fiber: self.fiber + other.fiber,
        }
    }

    pub fn inverse(&self) -> BlockElement {
        BlockElement {
            surface: self.surface,
            base: self.base.inverse(),
            fiber: -self.fiber,
        }
    }

    /// Syllable norm: reduced word length plus absolute fiber exponent.
    pub fn norm(&self) -> u64 {
        self.base.len() + self.fiber.unsigned_abs()
    }

    /// Membership in the peripheral subgroup `<c> x <z>` for the designated
    /// boundary generator with index `gen`: the base word must be a power of
    /// that single generator.
    pub fn in_peripheral(&self, gen: u32) -> bool {
        self.base.is_power_of(gen)
    }
}
