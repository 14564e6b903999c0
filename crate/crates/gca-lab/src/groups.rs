//! Group backends, subgroups, quotients, and enumeration of Hom(H, G).
//!
//! Two backends: finite groups stored as full Cayley tables (order <= 64,
//! validated on construction) and free abelian groups Z^d whose elements are
//! integer vectors. Homomorphisms between finite groups are stored as full
//! image tables so equality and composition are plain lookups; homomorphisms
//! between free abelian groups are integer matrices.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Orders up to this bound get the full n^3 associativity check.
pub const ASSOCIATIVITY_CHECK_BOUND: usize = 64;

// ---------------------------------------------------------------------------
// Elements
// ---------------------------------------------------------------------------

/// An element of a [`Group`]: an index into a Cayley table, or an integer
/// vector of length equal to the rank of a free abelian group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Finite(usize),
    Free(Vec<i64>),
}

impl Element {
    pub fn finite_index(&self) -> Option<usize> {
        match self {
            Element::Finite(i) => Some(*i),
            Element::Free(_) => None,
        }
    }

    pub fn vector(&self) -> Option<&[i64]> {
        match self {
            Element::Finite(_) => None,
            Element::Free(v) => Some(v),
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Finite(i) => write!(f, "{i}"),
            Element::Free(v) => {
                if v.len() == 1 {
                    write!(f, "{}", v[0])
                } else {
                    write!(f, "(")?;
                    for (i, c) in v.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{c}")?;
                    }
                    write!(f, ")")
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Finite groups
// ---------------------------------------------------------------------------

/// A finite group given by its full multiplication table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    n: usize,
    /// Row-major: `table[a * n + b] = a * b`.
    table: Vec<usize>,
    inv: Vec<usize>,
    identity: usize,
    generators: Vec<usize>,
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    #[inline]
    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn order_of(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Closure of `seed` under multiplication and inverse, sorted.
    pub fn closure(&self, seed: &[usize]) -> Vec<usize> {
        let mut in_set = vec![false; self.n];
        in_set[self.identity] = true;
        let mut stack: Vec<usize> = vec![self.identity];
        for &s in seed {
            if !in_set[s] {
                in_set[s] = true;
                stack.push(s);
            }
        }
        let mut members: Vec<usize> = stack.clone();
        while let Some(x) = stack.pop() {
            for &y in members.clone().iter() {
                for z in [self.mul(x, y), self.mul(y, x), self.inv(x)] {
                    if !in_set[z] {
                        in_set[z] = true;
                        stack.push(z);
                        members.push(z);
                    }
                }
            }
        }
        let mut out: Vec<usize> = (0..self.n).filter(|&i| in_set[i]).collect();
        out.sort_unstable();
        out
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut generated = self.closure(&[]);
        for g in 0..self.n {
            if generated.len() == self.n {
                break;
            }
            if !generated.contains(&g) {
                gens.push(g);
                generated = self.closure(&gens);
            }
        }
        gens
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Backend {
    Finite(FiniteGroup),
    FreeAbelian { rank: usize },
}

/// A computable group: finite (Cayley table) or free abelian Z^d.
#[derive(Debug, Clone)]
pub struct Group {
    backend: Arc<Backend>,
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.backend, &other.backend) || self.backend == other.backend
    }
}

impl Eq for Group {}

impl std::hash::Hash for Group {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.backend.hash(state);
    }
}

impl Group {
    /// Validate a raw multiplication table and wrap it as a group.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Group> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty multiplication table".into()));
        }
        let mut flat = Vec::with_capacity(n * n);
        for row in &table {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!(
                    "table is not square: row of length {} in an order-{} table",
                    row.len(),
                    n
                )));
            }
            for &v in row {
                if v >= n {
                    return Err(Error::InvalidGroup(format!(
                        "entry {v} out of range for order {n}"
                    )));
                }
                flat.push(v);
            }
        }
        Self::from_flat_table(n, flat)
    }

    fn from_flat_table(n: usize, table: Vec<usize>) -> Result<Group> {
        // Latin square.
        for a in 0..n {
            let mut seen_row = vec![false; n];
            let mut seen_col = vec![false; n];
            for b in 0..n {
                let r = table[a * n + b];
                let c = table[b * n + a];
                if seen_row[r] {
                    return Err(Error::InvalidGroup(format!(
                        "row {a} repeats entry {r}: not a Latin square"
                    )));
                }
                if seen_col[c] {
                    return Err(Error::InvalidGroup(format!(
                        "column {a} repeats entry {c}: not a Latin square"
                    )));
                }
                seen_row[r] = true;
                seen_col[c] = true;
            }
        }
        // Two-sided identity.
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e * n + a] == a && table[a * n + e] == a))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        // Inverses.
        let mut inv = vec![usize::MAX; n];
        for a in 0..n {
            let b = (0..n)
                .find(|&b| table[a * n + b] == identity && table[b * n + a] == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("element {a} has no inverse")))?;
            inv[a] = b;
        }
        // Associativity, exhaustive up to the configured bound.
        if n <= ASSOCIATIVITY_CHECK_BOUND {
            for a in 0..n {
                for b in 0..n {
                    let ab = table[a * n + b];
                    for c in 0..n {
                        if table[ab * n + c] != table[a * n + table[b * n + c]] {
                            return Err(Error::InvalidGroup(format!(
                                "associativity fails on triple ({a}, {b}, {c})"
                            )));
                        }
                    }
                }
            }
        }
        let mut fg = FiniteGroup {
            n,
            table,
            inv,
            identity,
            generators: Vec::new(),
        };
        fg.generators = fg.greedy_generators();
        Ok(Group {
            backend: Arc::new(Backend::Finite(fg)),
        })
    }

    /// The cyclic group Z/n with generator 1.
    pub fn cyclic(n: usize) -> Result<Group> {
        if n == 0 {
            return Err(Error::InvalidGroup("cyclic group of order 0".into()));
        }
        let mut table = vec![0usize; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = (a + b) % n;
            }
        }
        Self::from_flat_table(n, table)
    }

    /// The symmetric group on `n` letters, permutations in lexicographic order.
    pub fn symmetric(n: usize) -> Result<Group> {
        if n == 0 || n > 5 {
            return Err(Error::InvalidGroup(format!(
                "symmetric group supported for 1 <= n <= 5, got {n}"
            )));
        }
        let perms = permutations(n);
        let index: BTreeMap<Vec<usize>, usize> = perms.iter().cloned().zip(0..).collect();
        let m = perms.len();
        let mut table = vec![0usize; m * m];
        for (a, p) in perms.iter().enumerate() {
            for (b, q) in perms.iter().enumerate() {
                // (p * q)(x) = p(q(x))
                let comp: Vec<usize> = (0..n).map(|x| p[q[x]]).collect();
                table[a * m + b] = index[&comp];
            }
        }
        Self::from_flat_table(m, table)
    }

    /// The dihedral group of order 2n, via its action on n vertices.
    pub fn dihedral(n: usize) -> Result<Group> {
        if n < 2 {
            return Err(Error::InvalidGroup("dihedral group needs n >= 2".into()));
        }
        // Elements 0..n are rotations x -> x + k; n..2n are reflections x -> k - x.
        let m = 2 * n;
        let perm = |e: usize| -> Vec<usize> {
            if e < n {
                (0..n).map(|x| (x + e) % n).collect()
            } else {
                let k = e - n;
                (0..n).map(|x| (n + k - x) % n).collect()
            }
        };
        let perms: Vec<Vec<usize>> = (0..m).map(perm).collect();
        let index: BTreeMap<Vec<usize>, usize> = perms.iter().cloned().zip(0..).collect();
        let mut table = vec![0usize; m * m];
        for a in 0..m {
            for b in 0..m {
                let comp: Vec<usize> = (0..n).map(|x| perms[a][perms[b][x]]).collect();
                table[a * m + b] = index[&comp];
            }
        }
        Self::from_flat_table(m, table)
    }

    /// The quaternion group of order 8: 1, -1, i, -i, j, -j, k, -k.
    pub fn quaternion() -> Result<Group> {
        // (sign, unit) with unit in {1, i, j, k}.
        let decode =
            |e: usize| -> (i32, usize) { (if e.is_multiple_of(2) { 1 } else { -1 }, e / 2) };
        let encode = |s: i32, u: usize| -> usize { u * 2 + usize::from(s < 0) };
        let unit_mul = |a: usize, b: usize| -> (i32, usize) {
            match (a, b) {
                (0, x) => (1, x),
                (x, 0) => (1, x),
                (x, y) if x == y => (-1, 0),
                (1, 2) => (1, 3),
                (2, 3) => (1, 1),
                (3, 1) => (1, 2),
                (2, 1) => (-1, 3),
                (3, 2) => (-1, 1),
                (1, 3) => (-1, 2),
                _ => unreachable!(),
            }
        };
        let mut table = vec![0usize; 64];
        for a in 0..8 {
            for b in 0..8 {
                let (sa, ua) = decode(a);
                let (sb, ub) = decode(b);
                let (s, u) = unit_mul(ua, ub);
                table[a * 8 + b] = encode(sa * sb * s, u);
            }
        }
        Self::from_flat_table(8, table)
    }

    /// Direct product; element `(a, b)` is stored at index `a * |B| + b`.
    pub fn direct_product(&self, other: &Group) -> Result<Group> {
        let (fa, fb) = match (self.finite(), other.finite()) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(Error::Unsupported(
                    "direct product is implemented for finite groups".into(),
                ))
            }
        };
        let (na, nb) = (fa.order(), fb.order());
        let n = na * nb;
        let mut table = vec![0usize; n * n];
        for a1 in 0..na {
            for b1 in 0..nb {
                for a2 in 0..na {
                    for b2 in 0..nb {
                        let x = a1 * nb + b1;
                        let y = a2 * nb + b2;
                        table[x * n + y] = fa.mul(a1, a2) * nb + fb.mul(b1, b2);
                    }
                }
            }
        }
        Self::from_flat_table(n, table)
    }

    /// The free abelian group Z^rank under component-wise addition.
    pub fn free_abelian(rank: usize) -> Group {
        Group {
            backend: Arc::new(Backend::FreeAbelian { rank }),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(*self.backend, Backend::Finite(_))
    }

    pub fn order(&self) -> Option<usize> {
        match &*self.backend {
            Backend::Finite(fg) => Some(fg.n),
            Backend::FreeAbelian { rank } => {
                if *rank == 0 {
                    Some(1)
                } else {
                    None
                }
            }
        }
    }

    pub fn rank(&self) -> Option<usize> {
        match &*self.backend {
            Backend::Finite(_) => None,
            Backend::FreeAbelian { rank } => Some(*rank),
        }
    }

    pub fn finite(&self) -> Option<&FiniteGroup> {
        match &*self.backend {
            Backend::Finite(fg) => Some(fg),
            Backend::FreeAbelian { .. } => None,
        }
    }

    pub fn identity(&self) -> Element {
        match &*self.backend {
            Backend::Finite(fg) => Element::Finite(fg.identity),
            Backend::FreeAbelian { rank } => Element::Free(vec![0; *rank]),
        }
    }

    pub fn contains(&self, e: &Element) -> bool {
        match (&*self.backend, e) {
            (Backend::Finite(fg), Element::Finite(i)) => *i < fg.n,
            (Backend::FreeAbelian { rank }, Element::Free(v)) => v.len() == *rank,
            _ => false,
        }
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        match (&*self.backend, a, b) {
            (Backend::Finite(fg), Element::Finite(x), Element::Finite(y)) => {
                Element::Finite(fg.mul(*x, *y))
            }
            (Backend::FreeAbelian { .. }, Element::Free(u), Element::Free(v)) => {
                Element::Free(u.iter().zip(v).map(|(x, y)| x + y).collect())
            }
            _ => panic!("element backend does not match group backend"),
        }
    }

    pub fn inv(&self, a: &Element) -> Element {
        match (&*self.backend, a) {
            (Backend::Finite(fg), Element::Finite(x)) => Element::Finite(fg.inv(*x)),
            (Backend::FreeAbelian { .. }, Element::Free(v)) => {
                Element::Free(v.iter().map(|x| -x).collect())
            }
            _ => panic!("element backend does not match group backend"),
        }
    }

    /// All elements, finite backend only.
    pub fn elements(&self) -> Result<Vec<Element>> {
        let fg = self
            .finite()
            .ok_or_else(|| Error::Unsupported("element enumeration over Z^d".into()))?;
        Ok((0..fg.n).map(Element::Finite).collect())
    }

    pub fn generators(&self) -> Vec<Element> {
        match &*self.backend {
            Backend::Finite(fg) => fg.generators.iter().map(|&g| Element::Finite(g)).collect(),
            Backend::FreeAbelian { rank } => (0..*rank)
                .map(|i| {
                    let mut v = vec![0i64; *rank];
                    v[i] = 1;
                    Element::Free(v)
                })
                .collect(),
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    fn rec(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == cur.len() {
            out.push(cur.clone());
            return;
        }
        for i in k..cur.len() {
            cur.swap(k, i);
            rec(k + 1, cur, out);
            cur.swap(k, i);
        }
    }
    rec(0, &mut cur, &mut out);
    out.sort();
    out
}

/// Convenience constructor used throughout the test and verification suites.
pub fn build_cyclic(n: usize) -> Result<Group> {
    Group::cyclic(n)
}

/// A fixed catalog of finite groups of order at most `max_order`, covering
/// every isomorphism class up to order 8.
pub fn group_catalog(max_order: usize) -> Vec<(String, Group)> {
    let mut out = Vec::new();
    for n in 1..=max_order.min(8) {
        out.push((format!("Z{n}"), Group::cyclic(n).unwrap()));
    }
    let z2 = Group::cyclic(2).unwrap();
    let z4 = Group::cyclic(4).unwrap();
    if max_order >= 4 {
        out.push(("Z2xZ2".into(), z2.direct_product(&z2).unwrap()));
    }
    if max_order >= 6 {
        out.push(("S3".into(), Group::symmetric(3).unwrap()));
    }
    if max_order >= 8 {
        out.push(("Z2xZ4".into(), z2.direct_product(&z4).unwrap()));
        let v4 = z2.direct_product(&z2).unwrap();
        out.push(("Z2xZ2xZ2".into(), z2.direct_product(&v4).unwrap()));
        out.push(("D4".into(), Group::dihedral(4).unwrap()));
        out.push(("Q8".into(), Group::quaternion().unwrap()));
    }
    out
}

// ---------------------------------------------------------------------------
// Homomorphisms
// ---------------------------------------------------------------------------

/// How a homomorphism came to be; equality ignores this tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HomKind {
    General,
    CanonicalProjection,
    Restriction,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum HomMap {
    /// Full image table over a finite domain.
    Table(Vec<usize>),
    /// Integer matrix for Z^cols -> Z^rows, row-major.
    Matrix {
        rows: usize,
        cols: usize,
        entries: Vec<i64>,
    },
    /// Everything to the identity (used for finite -> Z^d).
    Trivial,
}

/// A verified group homomorphism.
#[derive(Debug, Clone)]
pub struct Homomorphism {
    domain: Group,
    codomain: Group,
    map: HomMap,
    kind: HomKind,
}

impl PartialEq for Homomorphism {
    fn eq(&self, other: &Self) -> bool {
        self.domain == other.domain && self.codomain == other.codomain && self.map == other.map
    }
}

impl Eq for Homomorphism {}

impl Homomorphism {
    /// A finite-domain homomorphism from its full image table, verified on
    /// all pairs of domain elements.
    pub fn from_table(domain: Group, codomain: Group, images: Vec<usize>) -> Result<Homomorphism> {
        let fd = domain
            .finite()
            .ok_or_else(|| Error::Unsupported("image table over infinite domain".into()))?;
        let fc = codomain.finite().ok_or_else(|| {
            Error::Unsupported("image table into Z^d; use the trivial map".into())
        })?;
        if images.len() != fd.order() {
            return Err(Error::NotAHomomorphism(format!(
                "image table has {} entries for a domain of order {}",
                images.len(),
                fd.order()
            )));
        }
        if let Some(&bad) = images.iter().find(|&&g| g >= fc.order()) {
            return Err(Error::NotAHomomorphism(format!(
                "image {bad} out of range for codomain of order {}",
                fc.order()
            )));
        }
        if images[fd.identity()] != fc.identity() {
            return Err(Error::NotAHomomorphism(
                "identity is not mapped to the identity".into(),
            ));
        }
        for a in 0..fd.order() {
            for b in 0..fd.order() {
                if images[fd.mul(a, b)] != fc.mul(images[a], images[b]) {
                    return Err(Error::NotAHomomorphism(format!(
                        "phi({a} * {b}) != phi({a}) * phi({b})"
                    )));
                }
            }
        }
        Ok(Homomorphism {
            domain,
            codomain,
            map: HomMap::Table(images),
            kind: HomKind::General,
        })
    }

    /// A matrix homomorphism Z^e -> Z^d.
    pub fn from_matrix(
        domain: Group,
        codomain: Group,
        rows: Vec<Vec<i64>>,
    ) -> Result<Homomorphism> {
        let e = domain
            .rank()
            .ok_or_else(|| Error::Unsupported("matrix homomorphism needs a Z^d domain".into()))?;
        let d = codomain
            .rank()
            .ok_or_else(|| Error::Unsupported("matrix homomorphism needs a Z^d codomain".into()))?;
        if rows.len() != d || rows.iter().any(|r| r.len() != e) {
            return Err(Error::NotAHomomorphism(format!(
                "matrix must be {d}x{e} for Z^{e} -> Z^{d}"
            )));
        }
        let entries = rows.into_iter().flatten().collect();
        Ok(Homomorphism {
            domain,
            codomain,
            map: HomMap::Matrix {
                rows: d,
                cols: e,
                entries,
            },
            kind: HomKind::General,
        })
    }

    /// The trivial homomorphism (everything to the identity).
    pub fn trivial(domain: Group, codomain: Group) -> Homomorphism {
        let map = match (&codomain.finite(), domain.finite()) {
            (Some(fc), Some(fd)) => HomMap::Table(vec![fc.identity(); fd.order()]),
            (Some(_), None) => {
                // Z^e -> finite is not representable; only rank 0 reaches here.
                HomMap::Trivial
            }
            (None, _) => match domain.finite() {
                Some(_) => HomMap::Trivial,
                None => HomMap::Matrix {
                    rows: codomain.rank().unwrap(),
                    cols: domain.rank().unwrap(),
                    entries: vec![0; codomain.rank().unwrap() * domain.rank().unwrap()],
                },
            },
        };
        Homomorphism {
            domain,
            codomain,
            map,
            kind: HomKind::General,
        }
    }

    pub fn identity(group: Group) -> Homomorphism {
        let map = match group.finite() {
            Some(fg) => HomMap::Table((0..fg.order()).collect()),
            None => {
                let d = group.rank().unwrap();
                let mut entries = vec![0i64; d * d];
                for i in 0..d {
                    entries[i * d + i] = 1;
                }
                HomMap::Matrix {
                    rows: d,
                    cols: d,
                    entries,
                }
            }
        };
        Homomorphism {
            domain: group.clone(),
            codomain: group,
            map,
            kind: HomKind::General,
        }
    }

    pub fn domain(&self) -> &Group {
        &self.domain
    }

    pub fn codomain(&self) -> &Group {
        &self.codomain
    }

    pub fn map(&self) -> &HomMap {
        &self.map
    }

    pub fn kind(&self) -> HomKind {
        self.kind
    }

    pub(crate) fn with_kind(mut self, kind: HomKind) -> Homomorphism {
        self.kind = kind;
        self
    }

    pub fn is_endomorphism(&self) -> bool {
        self.domain == self.codomain
    }

    pub fn apply(&self, e: &Element) -> Element {
        match (&self.map, e) {
            (HomMap::Table(t), Element::Finite(i)) => Element::Finite(t[*i]),
            (
                HomMap::Matrix {
                    rows,
                    cols,
                    entries,
                },
                Element::Free(v),
            ) => {
                assert_eq!(v.len(), *cols, "vector length does not match matrix");
                let mut out = vec![0i64; *rows];
                for (r, slot) in out.iter_mut().enumerate() {
                    *slot = (0..*cols).map(|c| entries[r * cols + c] * v[c]).sum();
                }
                Element::Free(out)
            }
            (HomMap::Trivial, _) => self.codomain.identity(),
            _ => panic!("element backend does not match homomorphism map"),
        }
    }

    /// Image table lookup for finite domains.
    #[inline]
    pub fn image_index(&self, i: usize) -> usize {
        match &self.map {
            HomMap::Table(t) => t[i],
            _ => panic!("image_index needs a finite-domain table"),
        }
    }

    pub fn table(&self) -> Option<&[usize]> {
        match &self.map {
            HomMap::Table(t) => Some(t),
            _ => None,
        }
    }

    pub fn matrix(&self) -> Option<(usize, usize, &[i64])> {
        match &self.map {
            HomMap::Matrix {
                rows,
                cols,
                entries,
            } => Some((*rows, *cols, entries)),
            _ => None,
        }
    }

    /// `self . inner : K -> G` for `inner : K -> H`, `self : H -> G`.
    pub fn compose(&self, inner: &Homomorphism) -> Result<Homomorphism> {
        if inner.codomain != self.domain {
            return Err(Error::GroupMismatch(
                "codomain of the inner map must equal domain of the outer map".into(),
            ));
        }
        let map = match (&self.map, &inner.map) {
            (HomMap::Table(outer), HomMap::Table(t)) => {
                HomMap::Table(t.iter().map(|&i| outer[i]).collect())
            }
            (
                HomMap::Matrix {
                    rows,
                    cols,
                    entries,
                },
                HomMap::Matrix {
                    rows: irows,
                    cols: icols,
                    entries: ientries,
                },
            ) => {
                debug_assert_eq!(*cols, *irows);
                let mut prod = vec![0i64; rows * icols];
                for r in 0..*rows {
                    for c in 0..*icols {
                        prod[r * icols + c] = (0..*cols)
                            .map(|k| entries[r * cols + k] * ientries[k * icols + c])
                            .sum();
                    }
                }
                HomMap::Matrix {
                    rows: *rows,
                    cols: *icols,
                    entries: prod,
                }
            }
            (_, HomMap::Trivial) | (HomMap::Trivial, _) => {
                return Ok(Homomorphism::trivial(
                    inner.domain.clone(),
                    self.codomain.clone(),
                ))
            }
            _ => {
                return Err(Error::Unsupported(
                    "composition across mixed backends".into(),
                ))
            }
        };
        Ok(Homomorphism {
            domain: inner.domain.clone(),
            codomain: self.codomain.clone(),
            map,
            kind: HomKind::General,
        })
    }

    pub fn is_injective(&self) -> Result<bool> {
        match &self.map {
            HomMap::Table(t) => {
                let mut seen = vec![false; self.codomain.finite().unwrap().order()];
                for &g in t {
                    if seen[g] {
                        return Ok(false);
                    }
                    seen[g] = true;
                }
                Ok(true)
            }
            HomMap::Matrix {
                rows,
                cols,
                entries,
            } => Ok(matrix_rank(*rows, *cols, entries) == *cols),
            HomMap::Trivial => Ok(self.domain.order() == Some(1)),
        }
    }

    pub fn is_surjective(&self) -> Result<bool> {
        match &self.map {
            HomMap::Table(t) => {
                let m = self.codomain.finite().unwrap().order();
                let mut seen = vec![false; m];
                for &g in t {
                    seen[g] = true;
                }
                Ok(seen.iter().all(|&b| b))
            }
            HomMap::Matrix {
                rows,
                cols,
                entries,
            } => {
                // Surjective over Z iff the Smith normal form has `rows`
                // diagonal entries all equal to 1.
                let diag = smith_diagonal(*rows, *cols, entries);
                Ok(diag.len() >= *rows && diag.iter().take(*rows).all(|&d| d == 1))
            }
            HomMap::Trivial => Ok(self.codomain.order() == Some(1)),
        }
    }

    /// Kernel as a subgroup of the domain (finite domains).
    pub fn kernel(&self) -> Result<Subgroup> {
        let t = self
            .table()
            .ok_or_else(|| Error::Unsupported("kernel enumeration over Z^d".into()))?;
        let idc = self.codomain.finite().unwrap().identity();
        let elems: Vec<usize> = t
            .iter()
            .enumerate()
            .filter(|(_, &g)| g == idc)
            .map(|(i, _)| i)
            .collect();
        Subgroup::from_elements(self.domain.clone(), &elems)
    }
}

fn matrix_rank(rows: usize, cols: usize, entries: &[i64]) -> usize {
    // Fraction-free Gaussian elimination over the rationals.
    let mut m: Vec<i128> = entries.iter().map(|&x| x as i128).collect();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        if let Some(p) = (row..rows).find(|&r| m[r * cols + col] != 0) {
            for c in 0..cols {
                m.swap(row * cols + c, p * cols + c);
            }
            let pivot = m[row * cols + col];
            for r in 0..rows {
                if r != row && m[r * cols + col] != 0 {
                    let factor = m[r * cols + col];
                    for c in 0..cols {
                        m[r * cols + c] = m[r * cols + c] * pivot - factor * m[row * cols + c];
                    }
                }
            }
            rank += 1;
            row += 1;
            if row == rows {
                break;
            }
        }
    }
    rank
}

fn smith_diagonal(rows: usize, cols: usize, entries: &[i64]) -> Vec<i128> {
    let mut m: Vec<i128> = entries.iter().map(|&x| x as i128).collect();
    let at = |m: &Vec<i128>, r: usize, c: usize| m[r * cols + c];
    let mut diag = Vec::new();
    let mut r0 = 0;
    let mut c0 = 0;
    while r0 < rows && c0 < cols {
        // Find a nonzero pivot.
        let mut found = None;
        'outer: for r in r0..rows {
            for c in c0..cols {
                if at(&m, r, c) != 0 {
                    found = Some((r, c));
                    break 'outer;
                }
            }
        }
        let Some((pr, pc)) = found else { break };
        for c in 0..cols {
            m.swap(r0 * cols + c, pr * cols + c);
        }
        for r in 0..rows {
            m.swap(r * cols + c0, r * cols + pc);
        }
        // Reduce the row and column below/right of the pivot.
        loop {
            let p = at(&m, r0, c0);
            let mut dirty = false;
            for r in (r0 + 1)..rows {
                let q = at(&m, r, c0) / p;
                if q != 0 {
                    for c in 0..cols {
                        m[r * cols + c] -= q * m[r0 * cols + c];
                    }
                }
                if at(&m, r, c0) != 0 {
                    // Swap rows to get a smaller pivot and retry.
                    for c in 0..cols {
                        m.swap(r0 * cols + c, r * cols + c);
                    }
                    dirty = true;
                }
            }
            for c in (c0 + 1)..cols {
                let q = at(&m, r0, c) / at(&m, r0, c0);
                if q != 0 {
                    for r in 0..rows {
                        m[r * cols + c] -= q * m[r * cols + c0];
                    }
                }
                if at(&m, r0, c) != 0 {
                    for r in 0..rows {
                        m.swap(r * cols + c0, r * cols + c);
                    }
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }
        diag.push(at(&m, r0, c0).abs());
        r0 += 1;
        c0 += 1;
    }
    diag
}

// ---------------------------------------------------------------------------
// Hom(H, G) enumeration
// ---------------------------------------------------------------------------

/// Complete, duplicate-free, lexicographically ordered list of homomorphisms
/// H -> G. Finite H is required; a Z^d codomain admits only the trivial map.
pub fn enumerate_homomorphisms(h: &Group, g: &Group) -> Result<Vec<Homomorphism>> {
    match (h.finite(), g.finite()) {
        (Some(_), Some(_)) => enumerate_finite_homomorphisms(h, g),
        (Some(_), None) => {
            // A finite group has no nontrivial torsion-free image.
            Ok(vec![Homomorphism::trivial(h.clone(), g.clone())])
        }
        (None, None) => Err(Error::InfiniteFamily(
            "Hom(Z^e, Z^d) is infinite; use enumerate_matrix_homomorphisms with a bound".into(),
        )),
        (None, Some(_)) => Err(Error::Unsupported(
            "homomorphisms from Z^d into a finite group are not represented".into(),
        )),
    }
}

fn enumerate_finite_homomorphisms(h: &Group, g: &Group) -> Result<Vec<Homomorphism>> {
    let fh = h.finite().unwrap();
    let fg = g.finite().unwrap();
    let gens = fh.generators();
    let mut tables: Vec<Vec<usize>> = Vec::new();
    let mut assignment = vec![0usize; gens.len()];
    search_gen_images(fh, fg, gens, 0, &mut assignment, &mut tables);
    tables.sort();
    tables.dedup();
    tables
        .into_iter()
        .map(|t| Homomorphism::from_table(h.clone(), g.clone(), t))
        .collect()
}

fn search_gen_images(
    fh: &FiniteGroup,
    fg: &FiniteGroup,
    gens: &[usize],
    depth: usize,
    assignment: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if depth == gens.len() {
        if let Some(table) = extend_generator_images(fh, fg, gens, assignment) {
            out.push(table);
        }
        return;
    }
    for img in 0..fg.order() {
        // Image order must divide the generator's order.
        if !fh.order_of(gens[depth]).is_multiple_of(fg.order_of(img)) {
            continue;
        }
        assignment[depth] = img;
        search_gen_images(fh, fg, gens, depth + 1, assignment, out);
    }
}

/// Extend generator images to a full table by propagating
/// `phi(x * g) = phi(x) * phi(g)` over the Cayley graph; any conflict means
/// the assignment does not define a homomorphism.
fn extend_generator_images(
    fh: &FiniteGroup,
    fg: &FiniteGroup,
    gens: &[usize],
    images: &[usize],
) -> Option<Vec<usize>> {
    let n = fh.order();
    let mut table = vec![usize::MAX; n];
    table[fh.identity()] = fg.identity();
    let mut queue = vec![fh.identity()];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for (&gen, &img) in gens.iter().zip(images) {
            let y = fh.mul(x, gen);
            let fy = fg.mul(table[x], img);
            if table[y] == usize::MAX {
                table[y] = fy;
                queue.push(y);
            } else if table[y] != fy {
                return None;
            }
        }
    }
    if table.contains(&usize::MAX) {
        return None; // gens do not generate; cannot happen with greedy gens
    }
    // The propagation above already forces the homomorphism property, but a
    // full pairwise check is cheap at this scale and keeps the invariant
    // local to the constructor.
    for a in 0..n {
        for b in 0..n {
            if table[fh.mul(a, b)] != fg.mul(table[a], table[b]) {
                return None;
            }
        }
    }
    Some(table)
}

/// End(G) := Hom(G, G).
pub fn enumerate_endomorphisms(g: &Group) -> Result<Vec<Homomorphism>> {
    enumerate_homomorphisms(g, g)
}

/// All matrix homomorphisms Z^e -> Z^d with entries bounded by `bound` in
/// absolute value, ordered lexicographically on the entry list.
pub fn enumerate_matrix_homomorphisms(
    h: &Group,
    g: &Group,
    bound: i64,
) -> Result<Vec<Homomorphism>> {
    let e = h
        .rank()
        .ok_or_else(|| Error::Unsupported("matrix enumeration needs Z^e domain".into()))?;
    let d = g
        .rank()
        .ok_or_else(|| Error::Unsupported("matrix enumeration needs Z^d codomain".into()))?;
    if bound < 0 {
        return Err(Error::Precondition(
            "entry bound must be nonnegative".into(),
        ));
    }
    let width = (2 * bound + 1) as usize;
    let cells = d * e;
    let total = (width as u128).pow(cells as u32);
    if total > 1 << 24 {
        return Err(Error::BudgetExceeded(format!(
            "{total} candidate matrices exceed the enumeration budget"
        )));
    }
    let mut out = Vec::with_capacity(total as usize);
    for code in 0..total {
        let mut rest = code;
        let mut entries = vec![0i64; cells];
        for slot in entries.iter_mut() {
            *slot = (rest % width as u128) as i64 - bound;
            rest /= width as u128;
        }
        out.push(Homomorphism {
            domain: h.clone(),
            codomain: g.clone(),
            map: HomMap::Matrix {
                rows: d,
                cols: e,
                entries,
            },
            kind: HomKind::General,
        });
    }
    out.sort_by(|a, b| a.matrix().unwrap().2.cmp(b.matrix().unwrap().2));
    Ok(out)
}

// ---------------------------------------------------------------------------
// Subgroups
// ---------------------------------------------------------------------------

/// A subgroup of a finite group (sorted element list) or a sublattice of Z^d
/// (basis vectors).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    parent: Group,
    repr: SubgroupRepr,
    normal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum SubgroupRepr {
    Finite { elements: Vec<usize> },
    Lattice { basis: Vec<Vec<i64>> },
}

impl Subgroup {
    /// Verified subgroup from an explicit element list.
    pub fn from_elements(parent: Group, elements: &[usize]) -> Result<Subgroup> {
        let fg = parent
            .finite()
            .ok_or_else(|| Error::Unsupported("element-list subgroup of Z^d".into()))?;
        let mut elems: Vec<usize> = elements.to_vec();
        elems.sort_unstable();
        elems.dedup();
        if elems.iter().any(|&e| e >= fg.order()) {
            return Err(Error::InvalidSubgroup("element index out of range".into()));
        }
        if !elems.contains(&fg.identity()) {
            return Err(Error::InvalidSubgroup("missing the identity".into()));
        }
        for &a in &elems {
            if elems.binary_search(&fg.inv(a)).is_err() {
                return Err(Error::InvalidSubgroup(format!(
                    "not closed under inverse of {a}"
                )));
            }
            for &b in &elems {
                if elems.binary_search(&fg.mul(a, b)).is_err() {
                    return Err(Error::InvalidSubgroup(format!(
                        "not closed under product {a} * {b}"
                    )));
                }
            }
        }
        let normal = compute_normal(fg, &elems);
        Ok(Subgroup {
            parent,
            repr: SubgroupRepr::Finite { elements: elems },
            normal,
        })
    }

    /// Subgroup generated by the given elements.
    pub fn generated(parent: Group, gens: &[usize]) -> Result<Subgroup> {
        let fg = parent
            .finite()
            .ok_or_else(|| Error::Unsupported("generated subgroup of Z^d".into()))?;
        if gens.iter().any(|&e| e >= fg.order()) {
            return Err(Error::InvalidSubgroup(
                "generator index out of range".into(),
            ));
        }
        let elems = fg.closure(gens);
        Subgroup::from_elements(parent, &elems)
    }

    /// A sublattice of Z^d given by linearly independent basis vectors.
    pub fn lattice(parent: Group, basis: Vec<Vec<i64>>) -> Result<Subgroup> {
        let d = parent
            .rank()
            .ok_or_else(|| Error::Unsupported("lattice subgroup of a finite group".into()))?;
        if basis.iter().any(|v| v.len() != d) {
            return Err(Error::InvalidSubgroup(format!(
                "basis vectors must have length {d}"
            )));
        }
        let flat: Vec<i64> = basis.iter().flatten().copied().collect();
        if matrix_rank(basis.len(), d, &flat) != basis.len() {
            return Err(Error::InvalidSubgroup(
                "basis vectors are linearly dependent".into(),
            ));
        }
        Ok(Subgroup {
            parent,
            repr: SubgroupRepr::Lattice { basis },
            normal: true,
        })
    }

    pub fn parent(&self) -> &Group {
        &self.parent
    }

    pub fn is_normal(&self) -> bool {
        self.normal
    }

    pub fn order(&self) -> Option<usize> {
        match &self.repr {
            SubgroupRepr::Finite { elements } => Some(elements.len()),
            SubgroupRepr::Lattice { .. } => None,
        }
    }

    pub fn element_indices(&self) -> Result<&[usize]> {
        match &self.repr {
            SubgroupRepr::Finite { elements } => Ok(elements),
            SubgroupRepr::Lattice { .. } => Err(Error::Unsupported(
                "element enumeration of a sublattice".into(),
            )),
        }
    }

    pub fn lattice_basis(&self) -> Option<&[Vec<i64>]> {
        match &self.repr {
            SubgroupRepr::Finite { .. } => None,
            SubgroupRepr::Lattice { basis } => Some(basis),
        }
    }

    pub fn contains(&self, e: &Element) -> bool {
        match (&self.repr, e) {
            (SubgroupRepr::Finite { elements }, Element::Finite(i)) => {
                elements.binary_search(i).is_ok()
            }
            (SubgroupRepr::Lattice { basis }, Element::Free(v)) => {
                lattice_coordinates(basis, v).is_some()
            }
            _ => false,
        }
    }

    pub fn contains_index(&self, i: usize) -> bool {
        matches!(&self.repr, SubgroupRepr::Finite { elements } if elements.binary_search(&i).is_ok())
    }

    pub fn index_in_parent(&self) -> Option<usize> {
        match &self.repr {
            SubgroupRepr::Finite { elements } => {
                Some(self.parent.finite().unwrap().order() / elements.len())
            }
            SubgroupRepr::Lattice { .. } => None,
        }
    }

    /// The subgroup as a standalone group, plus the embedding table
    /// (subgroup element index -> parent element index).
    pub fn to_group(&self) -> Result<(Group, Vec<usize>)> {
        let elements = self.element_indices()?.to_vec();
        let fg = self.parent.finite().unwrap();
        let m = elements.len();
        let pos: BTreeMap<usize, usize> = elements.iter().copied().zip(0..).collect();
        let mut table = vec![0usize; m * m];
        for (i, &a) in elements.iter().enumerate() {
            for (j, &b) in elements.iter().enumerate() {
                table[i * m + j] = pos[&fg.mul(a, b)];
            }
        }
        let group = Group::from_flat_table(m, table)?;
        Ok((group, elements))
    }

    /// Image under a homomorphism whose domain is the parent group, as a
    /// subgroup of the codomain.
    pub fn image_under(&self, phi: &Homomorphism) -> Result<Subgroup> {
        if phi.domain() != &self.parent {
            return Err(Error::GroupMismatch(
                "homomorphism domain must be the subgroup's parent".into(),
            ));
        }
        match &self.repr {
            SubgroupRepr::Finite { elements } => {
                let images: Vec<usize> = elements.iter().map(|&k| phi.image_index(k)).collect();
                Subgroup::from_elements(phi.codomain().clone(), &images)
            }
            SubgroupRepr::Lattice { basis } => {
                let mapped: Vec<Vec<i64>> = basis
                    .iter()
                    .map(|b| {
                        phi.apply(&Element::Free(b.clone()))
                            .vector()
                            .unwrap()
                            .to_vec()
                    })
                    .collect();
                Subgroup::lattice(phi.codomain().clone(), mapped)
            }
        }
    }
}

fn compute_normal(fg: &FiniteGroup, elems: &[usize]) -> bool {
    for g in 0..fg.order() {
        for &k in elems {
            let conj = fg.mul(fg.mul(g, k), fg.inv(g));
            if elems.binary_search(&conj).is_err() {
                return false;
            }
        }
    }
    true
}

/// Integer coordinates of `target` in the given lattice basis, if any.
pub fn lattice_coordinates(basis: &[Vec<i64>], target: &[i64]) -> Option<Vec<i64>> {
    // Solve sum c_i b_i = target exactly over the rationals, then check
    // integrality. Dimensions here are tiny.
    let r = basis.len();
    let d = target.len();
    if r == 0 {
        return if target.iter().all(|&x| x == 0) {
            Some(vec![])
        } else {
            None
        };
    }
    // Augmented d x (r + 1) system, columns are basis vectors.
    let mut num: Vec<i128> = Vec::with_capacity(d * (r + 1));
    for row in 0..d {
        for b in basis {
            num.push(b[row] as i128);
        }
        num.push(target[row] as i128);
    }
    let w = r + 1;
    let mut pivot_rows = Vec::new();
    let mut row = 0;
    for col in 0..r {
        if let Some(p) = (row..d).find(|&rr| num[rr * w + col] != 0) {
            for c in 0..w {
                num.swap(row * w + c, p * w + c);
            }
            let piv = num[row * w + col];
            for rr in 0..d {
                if rr != row && num[rr * w + col] != 0 {
                    let f = num[rr * w + col];
                    for c in 0..w {
                        num[rr * w + c] = num[rr * w + c] * piv - f * num[row * w + c];
                    }
                }
            }
            pivot_rows.push((row, col));
            row += 1;
        }
    }
    // Inconsistent rows.
    for rr in row..d {
        if num[rr * w + r] != 0 {
            return None;
        }
    }
    let mut coords = vec![0i64; r];
    for &(rr, col) in &pivot_rows {
        let piv = num[rr * w + col];
        let rhs = num[rr * w + r];
        if rhs % piv != 0 {
            return None;
        }
        let c = rhs / piv;
        coords[col] = i64::try_from(c).ok()?;
    }
    Some(coords)
}

/// Every subgroup of a finite group, ordered by (order, element list).
pub fn all_subgroups(g: &Group) -> Result<Vec<Subgroup>> {
    let fg = g
        .finite()
        .ok_or_else(|| Error::Unsupported("subgroup enumeration over Z^d".into()))?;
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let trivial = fg.closure(&[]);
    seen.insert(trivial.clone());
    let mut frontier = vec![trivial];
    while let Some(current) = frontier.pop() {
        for x in 0..fg.order() {
            if current.binary_search(&x).is_ok() {
                continue;
            }
            let mut gens = current.clone();
            gens.push(x);
            let bigger = fg.closure(&gens);
            if seen.insert(bigger.clone()) {
                frontier.push(bigger);
            }
        }
    }
    let mut lists: Vec<Vec<usize>> = seen.into_iter().collect();
    lists.sort_by_key(|l| (l.len(), l.clone()));
    lists
        .into_iter()
        .map(|l| Subgroup::from_elements(g.clone(), &l))
        .collect()
}

/// True iff `phi(K) <= K` for every endomorphism of the parent group.
pub fn is_fully_invariant(k: &Subgroup) -> Result<bool> {
    let parent = k.parent().clone();
    if !parent.is_finite() {
        return Err(Error::Unsupported(
            "fully-invariant test over an infinite group".into(),
        ));
    }
    let elems = k.element_indices()?;
    for phi in enumerate_endomorphisms(&parent)? {
        for &x in elems {
            if !k.contains_index(phi.image_index(x)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Quotients
// ---------------------------------------------------------------------------

/// The quotient G/N together with the canonical projection. Coset
/// representatives are the least element index in each coset; quotient
/// elements are ordered by representative.
pub fn quotient_group(g: &Group, n: &Subgroup) -> Result<(Group, Homomorphism)> {
    let fg = g
        .finite()
        .ok_or_else(|| Error::Unsupported("quotient of an infinite group".into()))?;
    if n.parent() != g {
        return Err(Error::GroupMismatch("subgroup of a different group".into()));
    }
    if !n.is_normal() {
        let elems = n.element_indices()?;
        for x in 0..fg.order() {
            for &k in elems {
                let conj = fg.mul(fg.mul(x, k), fg.inv(x));
                if !n.contains_index(conj) {
                    return Err(Error::NotNormal {
                        g: Element::Finite(x),
                        k: Element::Finite(k),
                    });
                }
            }
        }
    }
    let nelems = n.element_indices()?;
    let order = fg.order();
    // coset_of[g] = minimal element of gN.
    let mut coset_rep = vec![usize::MAX; order];
    for x in 0..order {
        if coset_rep[x] != usize::MAX {
            continue;
        }
        let mut coset: Vec<usize> = nelems.iter().map(|&k| fg.mul(x, k)).collect();
        coset.sort_unstable();
        let rep = coset[0];
        for &m in &coset {
            coset_rep[m] = rep;
        }
    }
    let mut reps: Vec<usize> = coset_rep.clone();
    reps.sort_unstable();
    reps.dedup();
    let rep_pos: BTreeMap<usize, usize> = reps.iter().copied().zip(0..).collect();
    let q = reps.len();
    let mut table = vec![0usize; q * q];
    for (i, &a) in reps.iter().enumerate() {
        for (j, &b) in reps.iter().enumerate() {
            table[i * q + j] = rep_pos[&coset_rep[fg.mul(a, b)]];
        }
    }
    let quotient = Group::from_flat_table(q, table)?;
    let proj_table: Vec<usize> = (0..order).map(|x| rep_pos[&coset_rep[x]]).collect();
    let rho = Homomorphism::from_table(g.clone(), quotient.clone(), proj_table)?
        .with_kind(HomKind::CanonicalProjection);
    Ok((quotient, rho))
}

/// The unique endomorphism of G/N with `hat(phi) . rho = rho . phi`, for a
/// normal phi-invariant N.
pub fn induced_endomorphism(phi: &Homomorphism, n: &Subgroup) -> Result<Homomorphism> {
    if !phi.is_endomorphism() {
        return Err(Error::Precondition("an endomorphism is required".into()));
    }
    if phi.domain() != n.parent() {
        return Err(Error::GroupMismatch("subgroup of a different group".into()));
    }
    for &k in n.element_indices()? {
        if !n.contains_index(phi.image_index(k)) {
            return Err(Error::NotInvariant {
                k: Element::Finite(k),
            });
        }
    }
    let (quotient, rho) = quotient_group(phi.domain(), n)?;
    let order = phi.domain().finite().unwrap().order();
    let q = quotient.finite().unwrap().order();
    let mut table = vec![usize::MAX; q];
    for x in 0..order {
        let src = rho.image_index(x);
        let dst = rho.image_index(phi.image_index(x));
        if table[src] == usize::MAX {
            table[src] = dst;
        } else if table[src] != dst {
            return Err(Error::Internal(
                "induced map is not well-defined despite invariance".into(),
            ));
        }
    }
    let hat = Homomorphism::from_table(quotient.clone(), quotient, table)?;
    // hat . rho = rho . phi, pointwise on all of G.
    for x in 0..order {
        if hat.image_index(rho.image_index(x)) != rho.image_index(phi.image_index(x)) {
            return Err(Error::Internal(
                "induced endomorphism diagram failure".into(),
            ));
        }
    }
    Ok(hat)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_groups() {
        assert_eq!(build_cyclic(1).unwrap().order(), Some(1));
        let z4 = build_cyclic(4).unwrap();
        let f = z4.finite().unwrap();
        assert_eq!(f.mul(1, 3), 0);
        // Order of 5 in Z6 by repeated addition.
        let z6 = build_cyclic(6).unwrap();
        let f6 = z6.finite().unwrap();
        let mut x = 5;
        let mut ord = 1;
        while x != 0 {
            x = f6.mul(x, 5);
            ord += 1;
        }
        assert_eq!(ord, 6);
        assert_eq!(f6.order_of(5), 6);
        assert!(build_cyclic(0).is_err());
    }

    #[test]
    fn non_associative_table_rejected() {
        // A Latin square with identity that is not a group table.
        let table = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let err = Group::from_table(table).unwrap_err();
        assert!(matches!(err, Error::InvalidGroup(_)));
    }

    #[test]
    fn hom_enumeration_examples() {
        let z2 = build_cyclic(2).unwrap();
        let z3 = build_cyclic(3).unwrap();
        let z4 = build_cyclic(4).unwrap();
        let homs = enumerate_homomorphisms(&z2, &z4).unwrap();
        assert_eq!(homs.len(), 2);
        assert_eq!(homs[0].table().unwrap(), &[0, 0]);
        assert_eq!(homs[1].table().unwrap(), &[0, 2]);

        assert_eq!(enumerate_homomorphisms(&z3, &z4).unwrap().len(), 1);

        let z = Group::free_abelian(1);
        let to_free = enumerate_homomorphisms(&z2, &z).unwrap();
        assert_eq!(to_free.len(), 1);
        assert_eq!(
            to_free[0].apply(&Element::Finite(1)),
            Element::Free(vec![0])
        );

        assert!(matches!(
            enumerate_homomorphisms(&z, &z),
            Err(Error::InfiniteFamily(_))
        ));
    }

    #[test]
    fn endomorphism_counts() {
        let z4 = build_cyclic(4).unwrap();
        assert_eq!(enumerate_endomorphisms(&z4).unwrap().len(), 4);
        let z2 = build_cyclic(2).unwrap();
        assert_eq!(enumerate_endomorphisms(&z2).unwrap().len(), 2);
        let z1 = build_cyclic(1).unwrap();
        assert_eq!(enumerate_endomorphisms(&z1).unwrap().len(), 1);
        // |End(S3)| = 10: trivial + 3 sign-like + 6 inner.
        let s3 = Group::symmetric(3).unwrap();
        assert_eq!(enumerate_endomorphisms(&s3).unwrap().len(), 10);
    }

    #[test]
    fn fully_invariant_examples() {
        let z4 = build_cyclic(4).unwrap();
        let k = Subgroup::from_elements(z4.clone(), &[0, 2]).unwrap();
        assert!(is_fully_invariant(&k).unwrap());

        let s3 = Group::symmetric(3).unwrap();
        let f = s3.finite().unwrap();
        // A3 = rotations = elements of order 1 or 3.
        let a3: Vec<usize> = (0..6).filter(|&x| f.order_of(x) != 2).collect();
        let a3 = Subgroup::from_elements(s3.clone(), &a3).unwrap();
        assert!(is_fully_invariant(&a3).unwrap());

        let t = (0..6).find(|&x| f.order_of(x) == 2).unwrap();
        let k2 = Subgroup::generated(s3.clone(), &[t]).unwrap();
        assert!(!is_fully_invariant(&k2).unwrap());
    }

    #[test]
    fn quotient_examples() {
        let z4 = build_cyclic(4).unwrap();
        let n = Subgroup::from_elements(z4.clone(), &[0, 2]).unwrap();
        let (q, rho) = quotient_group(&z4, &n).unwrap();
        assert_eq!(q.order(), Some(2));
        assert_eq!(rho.image_index(1), rho.image_index(3));
        assert_eq!(rho.kind(), HomKind::CanonicalProjection);
        assert_eq!(rho.kernel().unwrap().element_indices().unwrap(), &[0, 2]);

        let z6 = build_cyclic(6).unwrap();
        let n3 = Subgroup::from_elements(z6.clone(), &[0, 3]).unwrap();
        assert_eq!(quotient_group(&z6, &n3).unwrap().0.order(), Some(3));

        let s3 = Group::symmetric(3).unwrap();
        let f = s3.finite().unwrap();
        let a3: Vec<usize> = (0..6).filter(|&x| f.order_of(x) != 2).collect();
        let a3 = Subgroup::from_elements(s3.clone(), &a3).unwrap();
        assert_eq!(quotient_group(&s3, &a3).unwrap().0.order(), Some(2));

        // Non-normal subgroup rejected.
        let t = (0..6).find(|&x| f.order_of(x) == 2).unwrap();
        let k2 = Subgroup::generated(s3.clone(), &[t]).unwrap();
        assert!(quotient_group(&s3, &k2).is_err());
    }

    #[test]
    fn induced_endomorphism_examples() {
        let z4 = build_cyclic(4).unwrap();
        let n = Subgroup::from_elements(z4.clone(), &[0, 2]).unwrap();
        let mul2 = Homomorphism::from_table(z4.clone(), z4.clone(), vec![0, 2, 0, 2]).unwrap();
        let hat = induced_endomorphism(&mul2, &n).unwrap();
        assert_eq!(hat.table().unwrap(), &[0, 0]); // trivial on Z2

        let id = Homomorphism::identity(z4.clone());
        let hat_id = induced_endomorphism(&id, &n).unwrap();
        assert_eq!(hat_id.table().unwrap(), &[0, 1]);

        let z6 = build_cyclic(6).unwrap();
        let n2 = Subgroup::from_elements(z6.clone(), &[0, 2, 4]).unwrap();
        let mul5 =
            Homomorphism::from_table(z6.clone(), z6.clone(), vec![0, 5, 4, 3, 2, 1]).unwrap();
        let hat5 = induced_endomorphism(&mul5, &n2).unwrap();
        assert_eq!(hat5.table().unwrap(), &[0, 1]); // identity on Z2
    }

    #[test]
    fn subgroup_catalog_and_lattice() {
        let z4 = build_cyclic(4).unwrap();
        let subs = all_subgroups(&z4).unwrap();
        assert_eq!(subs.len(), 3);
        let s3 = Group::symmetric(3).unwrap();
        assert_eq!(all_subgroups(&s3).unwrap().len(), 6);

        let z = Group::free_abelian(1);
        let two_z = Subgroup::lattice(z.clone(), vec![vec![2]]).unwrap();
        assert!(two_z.contains(&Element::Free(vec![4])));
        assert!(!two_z.contains(&Element::Free(vec![3])));
    }

    #[test]
    fn hom_rejects_order_violation() {
        let z2 = build_cyclic(2).unwrap();
        let z4 = build_cyclic(4).unwrap();
        // 1 |-> 1 would need an order-2 image.
        assert!(Homomorphism::from_table(z2, z4, vec![0, 1]).is_err());
    }

    #[test]
    fn matrix_hom_properties() {
        let z = Group::free_abelian(1);
        let dbl = Homomorphism::from_matrix(z.clone(), z.clone(), vec![vec![2]]).unwrap();
        assert!(dbl.is_injective().unwrap());
        assert!(!dbl.is_surjective().unwrap());
        let id = Homomorphism::identity(z.clone());
        assert!(id.is_surjective().unwrap());
        let z2d = Group::free_abelian(2);
        let swap =
            Homomorphism::from_matrix(z2d.clone(), z2d.clone(), vec![vec![0, 1], vec![1, 0]])
                .unwrap();
        assert!(swap.is_injective().unwrap() && swap.is_surjective().unwrap());
    }

    #[test]
    fn catalog_orders() {
        let cat = group_catalog(8);
        assert_eq!(cat.len(), 8 + 6);
        for (_, g) in &cat {
            assert!(g.order().unwrap() <= 8);
        }
        // Distinct tables for the five order-8 entries.
        let order8: Vec<_> = cat.iter().filter(|(_, g)| g.order() == Some(8)).collect();
        assert_eq!(order8.len(), 5);
    }
}
