//! Closed-form stability classifier for transpositions of `[n]^3`, and the
//! explicit points whose `Ψ_k` images show that unstable ones never acquire
//! an identity tail.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{Budget, TuplePerm, Word};
use crate::psi::{psi_apply, psi_materialize};

/// An unordered pair of distinct words of `[n]^3`, stored with `a < b`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "PairRepr", into = "PairRepr")]
pub struct Transposition3 {
    n: u32,
    a: Word,
    b: Word,
}

#[derive(Serialize, Deserialize)]
struct PairRepr {
    n: u32,
    a: Word,
    b: Word,
}

impl TryFrom<PairRepr> for Transposition3 {
    type Error = Error;

    fn try_from(r: PairRepr) -> Result<Self> {
        Transposition3::new(r.n, r.a, r.b)
    }
}

impl From<Transposition3> for PairRepr {
    fn from(t: Transposition3) -> Self {
        PairRepr { n: t.n, a: t.a, b: t.b }
    }
}

impl Transposition3 {
    pub fn new(n: u32, a: Word, b: Word) -> Result<Self> {
        for w in [&a, &b] {
            if w.arity() != 3 {
                return Err(Error::ArityMismatch { expected: 3, found: w.arity() });
            }
            w.check_alphabet(n)?;
        }
        if a == b {
            return Err(Error::DegenerateCycle);
        }
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        Ok(Transposition3 { n, a, b })
    }

    pub fn from_letters(n: u32, a: [u32; 3], b: [u32; 3]) -> Result<Self> {
        Self::new(n, Word::new(a.to_vec())?, Word::new(b.to_vec())?)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn a(&self) -> &Word {
        &self.a
    }

    pub fn b(&self) -> &Word {
        &self.b
    }

    pub fn perm(&self) -> TuplePerm {
        TuplePerm::transposition(self.n, self.a.clone(), self.b.clone())
            .expect("validated at construction")
    }

    /// Coordinate reversal of both words.
    pub fn reverse(&self) -> Transposition3 {
        Transposition3::new(self.n, self.a.reversed(), self.b.reversed()).expect("reversal keeps words distinct")
    }

    /// Applies a letter permutation `sigma ∈ S([n]^1)` to every coordinate.
    pub fn relabel(&self, sigma: &TuplePerm) -> Result<Transposition3> {
        if sigma.arity() != 1 || sigma.n() != self.n {
            return Err(Error::InvalidArgument("relabeling needs a permutation of [n]".into()));
        }
        let map = |w: &Word| {
            let letters = w
                .letters()
                .iter()
                .map(|&l| sigma.image(&[l]).map_or(l, |img| img.letters()[0]))
                .collect();
            Word::from_vec_unchecked(letters)
        };
        Transposition3::new(self.n, map(&self.a), map(&self.b))
    }

    fn oriented(&self) -> Oriented {
        Oriented::new(&self.a, &self.b)
    }
}

impl fmt::Display for Transposition3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} {}]", self.a, self.b)
    }
}

impl fmt::Debug for Transposition3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Transposition3(n={}, {})", self.n, self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Branch {
    Disjoint,
    DiagonalEqual,
}

/// Which instability argument applies. Listed in precedence order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CaseTag {
    AllEqualA,
    AllEqualB,
    OuterEqualA,
    OuterEqualB,
    CrossA1B3,
    CrossB1A3,
    OverlapA2B1,
    OverlapB2A1,
}

impl Branch {
    pub const ALL: [Branch; 2] = [Branch::Disjoint, Branch::DiagonalEqual];

    pub fn name(self) -> &'static str {
        match self {
            Branch::Disjoint => "Disjoint",
            Branch::DiagonalEqual => "DiagonalEqual",
        }
    }
}

impl CaseTag {
    pub const ALL: [CaseTag; 8] = [
        CaseTag::AllEqualA,
        CaseTag::AllEqualB,
        CaseTag::OuterEqualA,
        CaseTag::OuterEqualB,
        CaseTag::CrossA1B3,
        CaseTag::CrossB1A3,
        CaseTag::OverlapA2B1,
        CaseTag::OverlapB2A1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CaseTag::AllEqualA => "AllEqualA",
            CaseTag::AllEqualB => "AllEqualB",
            CaseTag::OuterEqualA => "OuterEqualA",
            CaseTag::OuterEqualB => "OuterEqualB",
            CaseTag::CrossA1B3 => "CrossA1B3",
            CaseTag::CrossB1A3 => "CrossB1A3",
            CaseTag::OverlapA2B1 => "OverlapA2B1",
            CaseTag::OverlapB2A1 => "OverlapB2A1",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Classification {
    StableRankOne { branch: Branch },
    Unstable { case: CaseTag },
}

impl Classification {
    pub fn is_stable(&self) -> bool {
        matches!(self, Classification::StableRankOne { .. })
    }

    /// `"Disjoint"`, `"OverlapA2B1"`, ...
    pub fn label(&self) -> &'static str {
        match self {
            Classification::StableRankOne { branch } => branch.name(),
            Classification::Unstable { case } => case.name(),
        }
    }

    pub fn verdict(&self) -> &'static str {
        if self.is_stable() {
            "stable"
        } else {
            "unstable"
        }
    }
}

/// JSON form of one classified transposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationRecord {
    pub a: Word,
    pub b: Word,
    pub n: u32,
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<Branch>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<CaseTag>,
}

impl ClassificationRecord {
    pub fn new(t: &Transposition3, c: Classification) -> Self {
        let (branch, case) = match c {
            Classification::StableRankOne { branch } => (Some(branch), None),
            Classification::Unstable { case } => (None, Some(case)),
        };
        ClassificationRecord { a: t.a.clone(), b: t.b.clone(), n: t.n, verdict: c.verdict().into(), branch, case }
    }
}

/// Letters of an ordered pair `(a, b)`, not necessarily canonical.
#[derive(Clone, Copy, Debug)]
struct Oriented {
    a: [u32; 3],
    b: [u32; 3],
}

impl Oriented {
    fn new(a: &Word, b: &Word) -> Self {
        let l = |w: &Word| [w.letters()[0], w.letters()[1], w.letters()[2]];
        Oriented { a: l(a), b: l(b) }
    }

    fn swapped(self) -> Self {
        Oriented { a: self.b, b: self.a }
    }

    fn reversed(self) -> Self {
        let r = |w: [u32; 3]| [w[2], w[1], w[0]];
        Oriented { a: r(self.a), b: r(self.b) }
    }
}

fn same_pair(x: (u32, u32), y: (u32, u32)) -> bool {
    (x.0 == y.0 && x.1 == y.1) || (x.0 == y.1 && x.1 == y.0)
}

/// `{a1,b1} ∩ {a3,b3} = ∅`, `{a1,a2} ≠ {b2,b3}` and `{b1,b2} ≠ {a2,a3}`.
fn disjoint_branch(a: [u32; 3], b: [u32; 3]) -> bool {
    let [a1, a2, a3] = a;
    let [b1, b2, b3] = b;
    let meets = a1 == a3 || a1 == b3 || b1 == a3 || b1 == b3;
    !meets && !same_pair((a1, a2), (b2, b3)) && !same_pair((b1, b2), (a2, a3))
}

/// `a1 = a3 = b1 = b3` with the chain `a1 ≠ a2 ≠ b2 ≠ b1` read pairwise
/// along the chain only.
fn diagonal_branch(a: [u32; 3], b: [u32; 3]) -> bool {
    let [a1, a2, a3] = a;
    let [b1, b2, b3] = b;
    a1 == a3 && a1 == b1 && a1 == b3 && a1 != a2 && a2 != b2 && b2 != b1
}

/// The stable-iff condition on an ordered pair of words of arity 3, with no
/// canonical reordering. Panics unless both words have arity 3.
pub fn stability_condition(a: &Word, b: &Word) -> bool {
    assert!(a.arity() == 3 && b.arity() == 3, "words of arity 3 expected");
    let o = Oriented::new(a, b);
    disjoint_branch(o.a, o.b) || diagonal_branch(o.a, o.b)
}

pub fn classify(t: &Transposition3) -> Classification {
    let Oriented { a, b } = t.oriented();
    if disjoint_branch(a, b) {
        return Classification::StableRankOne { branch: Branch::Disjoint };
    }
    if diagonal_branch(a, b) {
        return Classification::StableRankOne { branch: Branch::DiagonalEqual };
    }
    let [a1, a2, a3] = a;
    let [b1, b2, b3] = b;
    let case = if a1 == a2 && a2 == a3 {
        CaseTag::AllEqualA
    } else if b1 == b2 && b2 == b3 {
        CaseTag::AllEqualB
    } else if a1 == a3 {
        CaseTag::OuterEqualA
    } else if b1 == b3 {
        CaseTag::OuterEqualB
    } else if a1 == b3 {
        CaseTag::CrossA1B3
    } else if b1 == a3 {
        CaseTag::CrossB1A3
    } else if a2 == b1 && a3 == b2 {
        CaseTag::OverlapA2B1
    } else {
        // Only remaining way to fail the disjoint branch.
        debug_assert!(b2 == a1 && b3 == a2);
        CaseTag::OverlapB2A1
    };
    Classification::Unstable { case }
}

/// How much of a witness value the instability argument pins down.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Claim {
    /// The closed form, as written, matches `Ψ_k`.
    Printed,
    /// Only a prefix of the value is pinned.
    HeadOnly,
    /// The closed form needed a length correction, does not hold at this
    /// `r`, or applies only to the other parity; the value comes from
    /// [`psi_apply`].
    Recomputed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// Transposition whose `Ψ_k` is evaluated. Differs from the classified
    /// one only for [`CaseTag::OverlapB2A1`], which is handled on the
    /// reversed pair.
    pub target: Transposition3,
    pub k: usize,
    pub input: Word,
    /// `Ψ_k(target)(input)`.
    pub expected: Word,
    /// The closed-form value (after length correction), if the argument
    /// gives one at this `r`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formula: Option<Word>,
    /// Pinned prefix for [`Claim::HeadOnly`].
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub head: Vec<u32>,
    pub claim: Claim,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessCheck {
    pub witness: Witness,
    /// The materialized `Ψ_k` sends `input` to `expected`, and the pinned
    /// prefix or formula agrees.
    pub value_ok: bool,
    /// `Ψ_k(target)` is not of the form `w ⊗ 1`.
    pub no_identity_tail: bool,
}

impl WitnessCheck {
    pub fn passed(&self) -> bool {
        self.value_ok && self.no_identity_tail
    }
}

fn repeat(block: &[u32], times: usize) -> Vec<u32> {
    block.iter().copied().cycle().take(block.len() * times).collect()
}

fn cat(parts: &[&[u32]]) -> Vec<u32> {
    parts.concat()
}

/// A closed-form witness before evaluation: input, and what the argument
/// claims about its image.
struct Draft {
    k: usize,
    input: Vec<u32>,
    formula: Option<Vec<u32>>,
    head: Vec<u32>,
    /// Whether the formula is claimed at this `r` as printed.
    printed: bool,
}

impl Draft {
    fn exact(k: usize, input: Vec<u32>, out: Vec<u32>, printed: bool) -> Self {
        Draft { k, input, formula: Some(out), head: Vec::new(), printed }
    }
}

/// `a1 = a2 = a3 = a`, at level `3r - 2`.
fn all_equal_drafts(o: Oriented, r: usize) -> Vec<Draft> {
    let a = o.a[0];
    let [b1, b2, b3] = o.b;
    let k = 3 * r - 2;
    let x = vec![a; 3 * r + 1];
    let even = r.is_multiple_of(2);
    if a != b1 {
        let y = cat(&[&vec![a; 3 * r], &[b1]]);
        return vec![
            Draft::exact(k, x.clone(), x, true),
            Draft { k, input: y, formula: None, head: vec![b1], printed: true },
        ];
    }
    if a != b2 && a != b3 {
        // Claimed for even r only.
        let out = cat(&[&[b1], &repeat(&[b2, b3], 3 * r / 2)]);
        let out = (out.len() == 3 * r + 1).then_some(out);
        return vec![Draft { k, input: x, formula: out, head: Vec::new(), printed: even }];
    }
    if a == b2 {
        let out = cat(&[&[b1, b2], &vec![b3; 3 * r - 1]]);
        return vec![Draft::exact(k, x, out, true)];
    }
    // a = b3 != b2; claimed for even r only.
    let z = cat(&[&vec![a; 3 * r], &[b2]]);
    let out = cat(&[&[b1, b2], &vec![a; 3 * r - 1]]);
    vec![Draft::exact(k, x, out, even), Draft::exact(k, z.clone(), z, even)]
}

/// `a1 = a3 != a2`, at level `2r`.
fn outer_equal_drafts(o: Oriented, r: usize) -> Vec<Draft> {
    let [a1, a2, a3] = o.a;
    let [b1, b2, b3] = o.b;
    let k = 2 * r;
    let x = cat(&[&[a1, a2, a3], &repeat(&[a2, a3], r)]);
    if a1 == b1 {
        let out = cat(&[&[b1, b2, b3], &repeat(&[b2, b3], r)]);
        return vec![Draft::exact(k, x, out, true)];
    }
    // Claimed for odd r only.
    let odd = r % 2 == 1;
    let y = cat(&[&[a1, a2, a3], &repeat(&[a2, a3], r - 1), &[a2, a2]]);
    let y_out = cat(&[&[b1, b2, b3], &y[3..]]);
    vec![Draft::exact(k, x.clone(), x, odd), Draft::exact(k, y, y_out, odd)]
}

/// `a1 = b3`, `a1 != a3`, `b1 != b3`, at level `2r`.
fn cross_drafts(o: Oriented, r: usize) -> Vec<Draft> {
    let [a1, a2, a3] = o.a;
    let [b1, b2, b3] = o.b;
    let input = cat(&[&repeat(&[b1, b2], r), &[b1, b2, b3]]);
    // The printed image is two letters short.
    let out = cat(&[&[a1], &repeat(&[a2, a3], r + 1)]);
    vec![Draft::exact(2 * r, input, out, false)]
}

/// `a2 = b1`, `a3 = b2`, `{a1,b1} ∩ {a3,b3} = ∅`, at level `3r - 2`.
fn overlap_drafts(o: Oriented, r: usize) -> Vec<Draft> {
    let [a1, a2, a3] = o.a;
    let [b1, b2, b3] = o.b;
    let k = 3 * r - 2;
    let lead = vec![a1; 3 * r - 3];
    let x = cat(&[&lead, &[a1, a2, a3, b1]]);
    let x_out = cat(&[&[b1, b2], &vec![b3; 3 * r - 2], &[b1]]);
    let y = cat(&[&lead, &[a1, a2, a3, b3]]);
    let y_out = cat(&[&vec![a1; 3 * r - 2], &[b1, b2, b3]]);
    vec![Draft::exact(k, x, x_out, true), Draft::exact(k, y, y_out, true)]
}

/// The points from the instability argument matching `classify(t)`, at the
/// level determined by `r ≥ 1`. Every expected value is evaluated with
/// [`psi_apply`]; see [`Claim`] for how it relates to the closed form.
pub fn witness_points(t: &Transposition3, r: usize) -> Result<Vec<Witness>> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be at least 1".into()));
    }
    let Classification::Unstable { case } = classify(t) else {
        return Err(Error::StableInput);
    };
    let o = t.oriented();
    let (target, drafts) = match case {
        CaseTag::AllEqualA => (t.clone(), all_equal_drafts(o, r)),
        CaseTag::AllEqualB => (t.clone(), all_equal_drafts(o.swapped(), r)),
        CaseTag::OuterEqualA => (t.clone(), outer_equal_drafts(o, r)),
        CaseTag::OuterEqualB => (t.clone(), outer_equal_drafts(o.swapped(), r)),
        CaseTag::CrossA1B3 => (t.clone(), cross_drafts(o, r)),
        CaseTag::CrossB1A3 => (t.clone(), cross_drafts(o.swapped(), r)),
        CaseTag::OverlapA2B1 => (t.clone(), overlap_drafts(o, r)),
        CaseTag::OverlapB2A1 => (t.reverse(), overlap_drafts(o.reversed(), r)),
    };
    let u = target.perm();
    drafts
        .into_iter()
        .map(|d| {
            let input = Word::over(t.n, d.input)?;
            let expected = psi_apply(&u, d.k, &input)?;
            let formula = d.formula.map(Word::new).transpose()?;
            let claim = if !d.head.is_empty() {
                Claim::HeadOnly
            } else if d.printed && formula.as_ref() == Some(&expected) {
                Claim::Printed
            } else {
                Claim::Recomputed
            };
            Ok(Witness { target: target.clone(), k: d.k, input, expected, formula, head: d.head, claim })
        })
        .collect()
}

/// Re-evaluates each witness on the materialized `Ψ_k` and tests the
/// identity-tail property there.
pub fn check_witnesses(witnesses: Vec<Witness>, budget: Budget) -> Result<Vec<WitnessCheck>> {
    let mut cache: Option<(Transposition3, usize, TuplePerm, bool)> = None;
    witnesses
        .into_iter()
        .map(|w| {
            let fresh = !matches!(&cache, Some((t, k, _, _)) if *t == w.target && *k == w.k);
            if fresh {
                let psi = psi_materialize(&w.target.perm(), w.k, budget)?;
                let no_tail = psi.tail_identity_split(1).is_none();
                cache = Some((w.target.clone(), w.k, psi, no_tail));
            }
            let (_, _, psi, no_tail) = cache.as_ref().expect("filled above");
            let image = psi.apply(&w.input)?;
            let pinned_ok = match w.claim {
                Claim::Printed => w.formula.as_ref() == Some(&w.expected),
                Claim::HeadOnly => w.expected.letters().starts_with(&w.head),
                Claim::Recomputed => true,
            };
            Ok(WitnessCheck { value_ok: image == w.expected && pinned_ok, no_identity_tail: *no_tail, witness: w })
        })
        .collect()
}
