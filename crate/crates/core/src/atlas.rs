//! The geometry classification table and the reference groups used as walk
//! diagnostics.
//!
//! Every closed orientable 3-manifold falls into one of the terminal classes
//! below; the table records what its fundamental group's walk boundary looks
//! like and through which reductions (finite-index subgroup, central-fiber
//! pushforward) that description is reached. Nil and Sol carry exact
//! normal-form arithmetic derived from their standard torus-bundle
//! presentations, and Z^d and free groups ship as calibration targets with
//! known drift behavior.

use crate::block::BlockElement;
use crate::error::{Error, Result};
use crate::measure::{StepMeasure, TailSpec, WalkGroup};
use crate::surface::SurfaceData;
use crate::words::FreeWord;
use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::str::FromStr;

// ---------------------------------------------------------------------------
// Classification table
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GeometryTag {
    S3,
    E3,
    S2xR,
    Nil,
    Sol,
    H2xR,
    SL2R,
    H3,
    Npc,
    NonPrime,
    GraphManifold,
}

impl GeometryTag {
    pub const ALL: [GeometryTag; 11] = [
        GeometryTag::S3,
        GeometryTag::E3,
        GeometryTag::S2xR,
        GeometryTag::Nil,
        GeometryTag::Sol,
        GeometryTag::H2xR,
        GeometryTag::SL2R,
        GeometryTag::H3,
        GeometryTag::Npc,
        GeometryTag::NonPrime,
        GeometryTag::GraphManifold,
    ];
}

impl FromStr for GeometryTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let tag = match s.to_ascii_lowercase().as_str() {
            "s3" => GeometryTag::S3,
            "e3" => GeometryTag::E3,
            "s2xr" => GeometryTag::S2xR,
            "nil" => GeometryTag::Nil,
            "sol" => GeometryTag::Sol,
            "h2xr" => GeometryTag::H2xR,
            "sl2r" | "sl2r~" => GeometryTag::SL2R,
            "h3" => GeometryTag::H3,
            "npc" => GeometryTag::Npc,
            "nonprime" | "non-prime" => GeometryTag::NonPrime,
            "graphmanifold" | "graph-manifold" => GeometryTag::GraphManifold,
            _ => return Err(Error::Parse(format!("unknown geometry tag {s:?}"))),
        };
        Ok(tag)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Triviality {
    Trivial,
    Nontrivial,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundaryDescriptor {
    pub tag: GeometryTag,
    pub triviality: Triviality,
    pub description: String,
    pub reduction_chain: Vec<String>,
}

/// Static lookup of the walk-boundary description for each terminal class.
pub fn classify(tag: GeometryTag) -> BoundaryDescriptor {
    use GeometryTag::*;
    use Triviality::*;
    let (triviality, description, chain): (Triviality, &str, Vec<&str>) = match tag {
        S3 => (
            Trivial,
            "finite fundamental group; bounded harmonic functions are constant",
            vec!["finite-sheeted cover by the 3-sphere", "finite group => trivial boundary"],
        ),
        E3 => (
            Trivial,
            "virtually Z^3; abelian walks have trivial boundary",
            vec!["finite-index subgroup Z^3", "abelian => trivial boundary"],
        ),
        S2xR => (
            Trivial,
            "virtually Z; abelian walks have trivial boundary",
            vec!["finite-index subgroup Z", "abelian => trivial boundary"],
        ),
        Nil => (
            Trivial,
            "virtually nilpotent (twisted circle bundle over the torus); nilpotent walks have trivial boundary",
            vec![
                "finite-index subgroup <a,b,c | ab=ba, cac^-1=a, cbc^-1=b a^n>",
                "nilpotent => trivial boundary",
            ],
        ),
        Sol => (
            Nontrivial,
            "virtually polycyclic Z^2 x| Z with a hyperbolic gluing; the boundary is carried by the contracting line of the hyperbolic action",
            vec![
                "index <= 2 subgroup Z^2 x| Z, kn - ml = 1, |k + n| > 2",
                "polycyclic boundary description (finite first moment)",
            ],
        ),
        H2xR => (
            Nontrivial,
            "virtually (hyperbolic surface group) x Z; the central fiber pushes forward and the boundary is the surface group's circle with harmonic measure",
            vec![
                "finite-index subgroup pi1(F) x Z",
                "central pushforward to pi1(F)",
                "hyperbolic-group boundary with harmonic measure",
            ],
        ),
        SL2R => (
            Nontrivial,
            "virtually a central Z-extension of a hyperbolic surface group; the extension pushes forward and leaves the surface group's boundary",
            vec![
                "finite-index central extension of pi1(F) by Z",
                "central pushforward to pi1(F)",
                "hyperbolic-group boundary with harmonic measure",
            ],
        ),
        H3 => (
            Nontrivial,
            "word-hyperbolic group; the boundary is the visual 2-sphere with harmonic measure",
            vec!["hyperbolic-group boundary with harmonic measure"],
        ),
        Npc => (
            Nontrivial,
            "cocompact isometries of a nonpositively curved universal cover; the visual boundary with harmonic measure (flat covers excepted)",
            vec!["visual boundary of the nonpositively curved cover"],
        ),
        NonPrime => (
            Nontrivial,
            "free product of nontrivial groups: either virtually abelian (Z/2 * Z/2, trivial boundary) or infinitely many ends",
            vec![
                "free product decomposition over the prime summands",
                "infinitely many ends => space of ends with harmonic measure",
            ],
        ),
        GraphManifold => (
            Nontrivial,
            "acts on the Bass-Serre tree of its decomposition graph of groups; the boundary is the space of ends of that tree with harmonic measure",
            vec![
                "finite-sheeted cover with trivially fibered blocks",
                "action on the Bass-Serre covering tree",
                "ends of the tree with harmonic measure",
            ],
        ),
    };
    BoundaryDescriptor {
        tag,
        triviality,
        description: description.to_string(),
        reduction_chain: chain.into_iter().map(String::from).collect(),
    }
}

// ---------------------------------------------------------------------------
// Reference groups
// ---------------------------------------------------------------------------

/// Z^d with the standard generators and the l1 word norm.
pub struct ZdGroup {
    pub d: usize,
}

impl WalkGroup for ZdGroup {
    type Elem = Vec<i64>;

    fn identity(&self) -> Self::Elem {
        vec![0; self.d]
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }
    fn inverse(&self, a: &Self::Elem) -> Self::Elem {
        a.iter().map(|x| -x).collect()
    }
    fn norm(&self, a: &Self::Elem) -> u64 {
        a.iter().map(|x| x.unsigned_abs()).sum()
    }
    fn origin_distance(&self, a: &Self::Elem) -> u64 {
        self.norm(a)
    }
    fn key(&self, a: &Self::Elem) -> String {
        let coords: Vec<String> = a.iter().map(|x| x.to_string()).collect();
        format!("({})", coords.join(","))
    }
    fn generators(&self) -> Vec<Self::Elem> {
        let mut out = Vec::with_capacity(2 * self.d);
        for i in 0..self.d {
            for sign in [1i64, -1] {
                let mut v = vec![0; self.d];
                v[i] = sign;
                out.push(v);
            }
        }
        out
    }
}

/// The free group of a given rank, elements as reduced words.
pub struct FreeRankGroup {
    pub rank: u32,
}

impl WalkGroup for FreeRankGroup {
    type Elem = FreeWord;

    fn identity(&self) -> Self::Elem {
        FreeWord::identity()
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.mul(b)
    }
    fn inverse(&self, a: &Self::Elem) -> Self::Elem {
        a.inverse()
    }
    fn norm(&self, a: &Self::Elem) -> u64 {
        a.len()
    }
    fn origin_distance(&self, a: &Self::Elem) -> u64 {
        a.len()
    }
    fn key(&self, a: &Self::Elem) -> String {
        if a.is_identity() {
            return "1".into();
        }
        a.runs()
            .iter()
            .map(|(g, e)| {
                if *e == 1 {
                    format!("x{}", g + 1)
                } else {
                    format!("x{}^{}", g + 1, e)
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
    fn generators(&self) -> Vec<Self::Elem> {
        let mut out = Vec::new();
        for g in 0..self.rank {
            for sign in [1i64, -1] {
                out.push(FreeWord::letter(g, sign));
            }
        }
        out
    }
}

/// A single block group F x Z, the reference carrier for the central-fiber
/// pushforward.
pub struct BlockGroup {
    pub surface: SurfaceData,
}

impl WalkGroup for BlockGroup {
    type Elem = BlockElement;

    fn identity(&self) -> Self::Elem {
        BlockElement::identity(self.surface)
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.mul(b).expect("same surface")
    }
    fn inverse(&self, a: &Self::Elem) -> Self::Elem {
        a.inverse()
    }
    fn norm(&self, a: &Self::Elem) -> u64 {
        a.norm()
    }
    fn origin_distance(&self, a: &Self::Elem) -> u64 {
        a.norm()
    }
    fn key(&self, a: &Self::Elem) -> String {
        a.to_string()
    }
    fn generators(&self) -> Vec<Self::Elem> {
        let mut out = Vec::new();
        for g in 0..self.surface.rank() {
            for sign in [1i64, -1] {
                out.push(BlockElement::generator(self.surface, g, sign).unwrap());
            }
        }
        out.push(BlockElement::fiber_power(self.surface, 1));
        out.push(BlockElement::fiber_power(self.surface, -1));
        out
    }
}

// ---------------------------------------------------------------------------
// Nil
// ---------------------------------------------------------------------------

/// Element of the twisted torus-bundle group
/// `<a, b, c | ab = ba, c a c^-1 = a, c b c^-1 = b a^n>`
/// in the unique normal form `a^i b^j c^k`. The twist `n >= 1` is fixed per
/// group; `a` generates the center together with the commutators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NilElement {
    pub twist: i64,
    pub i: i64,
    pub j: i64,
    pub k: i64,
}

impl NilElement {
    pub fn identity(twist: i64) -> Self {
        NilElement { twist, i: 0, j: 0, k: 0 }
    }

    pub fn new(twist: i64, i: i64, j: i64, k: i64) -> Result<Self> {
        if twist < 1 {
            return Err(Error::Validation(format!("twist {twist} must be >= 1")));
        }
        Ok(NilElement { twist, i, j, k })
    }

    /// Collection rule: moving `c^k` across `b^j'` deposits `a^(n k j')`.
    pub fn mul(&self, other: &NilElement) -> Result<NilElement> {
        if self.twist != other.twist {
            return Err(Error::Domain(format!(
                "twist mismatch: {} vs {}",
                self.twist, other.twist
            )));
        }
        Ok(NilElement {
            twist: self.twist,
            i: self.i + other.i + self.twist * self.k * other.j,
            j: self.j + other.j,
            k: self.k + other.k,
        })
    }

    pub fn inverse(&self) -> NilElement {
        NilElement {
            twist: self.twist,
            i: -self.i + self.twist * self.k * self.j,
            j: -self.j,
            k: -self.k,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.i == 0 && self.j == 0 && self.k == 0
    }
}

fn isqrt_ceil(x: u64) -> u64 {
    let r = (x as f64).sqrt() as u64;
    let r = r.saturating_sub(2);
    let mut r = r;
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    if r * r < x {
        r + 1
    } else {
        r
    }
}

pub struct NilGroup {
    pub twist: i64,
}

impl WalkGroup for NilGroup {
    type Elem = NilElement;

    fn identity(&self) -> Self::Elem {
        NilElement::identity(self.twist)
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.mul(b).expect("same twist")
    }
    fn inverse(&self, a: &Self::Elem) -> Self::Elem {
        a.inverse()
    }
    /// Word-metric gauge: the central coordinate contributes its square
    /// root (it is quadratically distorted), the others linearly.
    fn norm(&self, a: &Self::Elem) -> u64 {
        a.j.unsigned_abs() + a.k.unsigned_abs() + isqrt_ceil(a.i.unsigned_abs())
    }
    fn origin_distance(&self, a: &Self::Elem) -> u64 {
        self.norm(a)
    }
    fn key(&self, a: &Self::Elem) -> String {
        format!("a^{} b^{} c^{}", a.i, a.j, a.k)
    }
    fn generators(&self) -> Vec<Self::Elem> {
        let t = self.twist;
        [
            (1, 0, 0),
            (-1, 0, 0),
            (0, 1, 0),
            (0, -1, 0),
            (0, 0, 1),
            (0, 0, -1),
        ]
        .into_iter()
        .map(|(i, j, k)| NilElement { twist: t, i, j, k })
        .collect()
    }
}

// ---------------------------------------------------------------------------
// Sol
// ---------------------------------------------------------------------------

/// Gluing data of the Sol torus bundle
/// `<a, b, c | ab = ba, c a c^-1 = a^k b^l, c b c^-1 = a^m b^n>`
/// with `kn - ml = 1` and `|k + n| > 2` (a hyperbolic automorphism of Z^2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SolParams {
    pub k: i64,
    pub l: i64,
    pub m: i64,
    pub n: i64,
}

impl SolParams {
    pub fn new(k: i64, l: i64, m: i64, n: i64) -> Result<Self> {
        let det = k * n - m * l;
        if det != 1 {
            return Err(Error::Validation(format!(
                "kn - ml = {det}, must equal 1"
            )));
        }
        if (k + n).abs() <= 2 {
            return Err(Error::Validation(format!(
                "|k + n| = {} must exceed 2 (hyperbolic automorphism)",
                (k + n).abs()
            )));
        }
        Ok(SolParams { k, l, m, n })
    }

    /// Conjugation matrix on exponent columns: c (a^x b^y) c^-1 has exponents
    /// A (x, y)^T with A = [[k, m], [l, n]].
    fn apply(&self, v: (&BigInt, &BigInt)) -> (BigInt, BigInt) {
        (self.k * v.0 + self.m * v.1, self.l * v.0 + self.n * v.1)
    }

    /// Integer inverse (determinant 1): A^-1 = [[n, -m], [-l, k]].
    fn apply_inv(&self, v: (&BigInt, &BigInt)) -> (BigInt, BigInt) {
        (self.n * v.0 - self.m * v.1, -self.l * v.0 + self.k * v.1)
    }

    /// Exact A^t v for any sign of t.
    pub fn power_apply(&self, t: i64, v: (BigInt, BigInt)) -> (BigInt, BigInt) {
        let mut v = v;
        for _ in 0..t.unsigned_abs() {
            v = if t >= 0 {
                self.apply((&v.0, &v.1))
            } else {
                self.apply_inv((&v.0, &v.1))
            };
        }
        v
    }
}

/// Normal form `a^(v0) b^(v1) c^t`. Exponents are big integers: the
/// conjugation action is exponentially expanding.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SolElement {
    pub params: SolParams,
    pub v: (BigInt, BigInt),
    pub t: i64,
}

impl SolElement {
    pub fn identity(params: SolParams) -> Self {
        SolElement {
            params,
            v: (BigInt::zero(), BigInt::zero()),
            t: 0,
        }
    }

    pub fn generator_a(params: SolParams, exp: i64) -> Self {
        SolElement {
            params,
            v: (BigInt::from(exp), BigInt::zero()),
            t: 0,
        }
    }

    pub fn generator_b(params: SolParams, exp: i64) -> Self {
        SolElement {
            params,
            v: (BigInt::zero(), BigInt::from(exp)),
            t: 0,
        }
    }

    pub fn generator_c(params: SolParams, exp: i64) -> Self {
        SolElement {
            params,
            v: (BigInt::zero(), BigInt::zero()),
            t: exp,
        }
    }

    /// `(v, t) (v', t') = (v + A^t v', t + t')`.
    pub fn mul(&self, other: &SolElement) -> Result<SolElement> {
        if self.params != other.params {
            return Err(Error::Domain("Sol parameter mismatch".into()));
        }
        let moved = self.params.power_apply(self.t, other.v.clone());
        Ok(SolElement {
            params: self.params,
            v: (&self.v.0 + moved.0, &self.v.1 + moved.1),
            t: self.t + other.t,
        })
    }

    pub fn inverse(&self) -> SolElement {
        let moved = self.params.power_apply(-self.t, self.v.clone());
        SolElement {
            params: self.params,
            v: (-moved.0, -moved.1),
            t: -self.t,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.t == 0 && self.v.0.is_zero() && self.v.1.is_zero()
    }
}

pub struct SolGroup {
    pub params: SolParams,
}

impl WalkGroup for SolGroup {
    type Elem = SolElement;

    fn identity(&self) -> Self::Elem {
        SolElement::identity(self.params)
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.mul(b).expect("same params")
    }
    fn inverse(&self, a: &Self::Elem) -> Self::Elem {
        a.inverse()
    }
    /// Word-metric gauge: translation exponents are exponentially distorted,
    /// so they enter through their bit length.
    fn norm(&self, a: &Self::Elem) -> u64 {
        a.t.unsigned_abs() + a.v.0.bits() + a.v.1.bits()
    }
    fn origin_distance(&self, a: &Self::Elem) -> u64 {
        self.norm(a)
    }
    fn key(&self, a: &Self::Elem) -> String {
        format!("a^{} b^{} c^{}", a.v.0, a.v.1, a.t)
    }
    fn generators(&self) -> Vec<Self::Elem> {
        [
            SolElement::generator_a(self.params, 1),
            SolElement::generator_a(self.params, -1),
            SolElement::generator_b(self.params, 1),
            SolElement::generator_b(self.params, -1),
            SolElement::generator_c(self.params, 1),
            SolElement::generator_c(self.params, -1),
        ]
        .to_vec()
    }
}

// ---------------------------------------------------------------------------
// Central-fiber pushforward
// ---------------------------------------------------------------------------

/// Pushes a measure on a block group F x Z forward along the projection that
/// drops the central fiber. Weights of elements whose images coincide are
/// summed; the tail specification carries over (its generators project).
/// Moments never increase under the projection.
pub fn central_pushforward(
    source_group: &BlockGroup,
    m: &StepMeasure<BlockGroup>,
) -> (FreeRankGroup, StepMeasure<FreeRankGroup>) {
    let image_group = FreeRankGroup {
        rank: source_group.surface.rank(),
    };
    let mut merged: HashMap<FreeWord, Rational64> = HashMap::new();
    for (e, w) in m.core() {
        *merged.entry(e.base.clone()).or_insert_with(Rational64::zero) += *w;
    }
    let mut core: Vec<(FreeWord, Rational64)> = merged.into_iter().collect();
    core.sort_by_key(|(e, _)| (e.len(), image_group.key(e)));
    let tail = m.tail().map(|t| TailSpec {
        mass: t.mass,
        length_ratio: t.length_ratio,
    });
    let image = StepMeasure::new_unchecked(&image_group, core, tail);
    (image_group, image)
}

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

fn uniform_on_generators<G: WalkGroup>(group: &G) -> StepMeasure<G> {
    let gens = group.generators();
    let w = Rational64::new(1, gens.len() as i64);
    StepMeasure::build(group, gens.into_iter().map(|g| (g, w)).collect(), None)
        .expect("uniform generator measure is valid")
}

/// A reference group bundled with its simple-walk measure.
pub enum AtlasPreset {
    Z(ZdGroup, StepMeasure<ZdGroup>),
    Z3(ZdGroup, StepMeasure<ZdGroup>),
    F2(FreeRankGroup, StepMeasure<FreeRankGroup>),
    Nil(NilGroup, StepMeasure<NilGroup>),
    Sol(SolGroup, StepMeasure<SolGroup>),
}

impl AtlasPreset {
    pub fn name(&self) -> String {
        match self {
            AtlasPreset::Z(..) => "z1".into(),
            AtlasPreset::Z3(..) => "z3".into(),
            AtlasPreset::F2(..) => "f2".into(),
            AtlasPreset::Nil(g, _) => format!("nil:{}", g.twist),
            AtlasPreset::Sol(g, _) => format!(
                "sol:{},{},{},{}",
                g.params.k, g.params.l, g.params.m, g.params.n
            ),
        }
    }
}

/// Parses `z1 | z3 | f2 | nil:<twist> | sol:<k>,<l>,<m>,<n>`.
pub fn atlas_preset(name: &str) -> Result<AtlasPreset> {
    let lower = name.to_ascii_lowercase();
    if lower == "z1" || lower == "z" {
        let g = ZdGroup { d: 1 };
        let m = uniform_on_generators(&g);
        return Ok(AtlasPreset::Z(g, m));
    }
    if lower == "z3" {
        let g = ZdGroup { d: 3 };
        let m = uniform_on_generators(&g);
        return Ok(AtlasPreset::Z3(g, m));
    }
    if lower == "f2" {
        let g = FreeRankGroup { rank: 2 };
        let m = uniform_on_generators(&g);
        return Ok(AtlasPreset::F2(g, m));
    }
    if let Some(t) = lower.strip_prefix("nil:") {
        let twist: i64 = t
            .parse()
            .map_err(|_| Error::Parse(format!("bad twist {t:?}")))?;
        if twist < 1 {
            return Err(Error::Validation("twist must be >= 1".into()));
        }
        let g = NilGroup { twist };
        let m = uniform_on_generators(&g);
        return Ok(AtlasPreset::Nil(g, m));
    }
    if let Some(p) = lower.strip_prefix("sol:") {
        let nums: Vec<i64> = p
            .split(',')
            .map(|x| x.trim().parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Parse(format!("bad Sol parameters {p:?}")))?;
        if nums.len() != 4 {
            return Err(Error::Parse("sol preset needs k,l,m,n".into()));
        }
        let params = SolParams::new(nums[0], nums[1], nums[2], nums[3])?;
        let g = SolGroup { params };
        let m = uniform_on_generators(&g);
        return Ok(AtlasPreset::Sol(g, m));
    }
    Err(Error::Parse(format!("unknown preset {name:?}")))
}
