//! Configuration spaces A^G, the shift action, characteristic functions, and
//! fixed-point sets Fix(K).
//!
//! Three storage kinds sit behind one evaluation interface: dense tables over
//! finite groups, finite-support maps over Z^d, and periodic configurations
//! over Z^d with per-axis periods. Operations that need full enumeration
//! reject infinite backends explicitly instead of sampling.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::groups::{Element, Group, Subgroup};

/// The symbol alphabet {0, .., q-1} with q >= 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Alphabet {
    q: usize,
}

impl Alphabet {
    pub fn new(q: usize) -> Result<Alphabet> {
        if q < 2 {
            return Err(Error::Precondition(format!(
                "alphabet must have at least 2 symbols, got {q}"
            )));
        }
        if q > 256 {
            return Err(Error::Precondition(
                "alphabets beyond 256 symbols are not stored".into(),
            ));
        }
        Ok(Alphabet { q })
    }

    pub fn binary() -> Alphabet {
        Alphabet { q: 2 }
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.q
    }

    pub fn contains(&self, s: u8) -> bool {
        (s as usize) < self.q
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Storage {
    /// Total symbol table indexed by finite-group element.
    Dense(Vec<u8>),
    /// Default symbol plus a finite map over Z^d points; the map never
    /// stores the default.
    FiniteSupport {
        default: u8,
        support: BTreeMap<Vec<i64>, u8>,
    },
    /// Per-axis periods with a fundamental-domain table in mixed-radix
    /// order (axis 0 least significant).
    Periodic { periods: Vec<i64>, table: Vec<u8> },
}

/// An element of A^G.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    group: Group,
    alphabet: Alphabet,
    storage: Storage,
}

impl Configuration {
    pub fn dense(group: Group, alphabet: Alphabet, table: Vec<u8>) -> Result<Configuration> {
        let n = group
            .order()
            .ok_or_else(|| Error::Unsupported("dense storage over an infinite group".into()))?;
        if table.len() != n {
            return Err(Error::Precondition(format!(
                "dense table has {} entries for a group of order {n}",
                table.len()
            )));
        }
        if let Some(&s) = table.iter().find(|&&s| !alphabet.contains(s)) {
            return Err(Error::AlphabetMismatch {
                expected: alphabet.size(),
                got: s as usize + 1,
            });
        }
        Ok(Configuration {
            group,
            alphabet,
            storage: Storage::Dense(table),
        })
    }

    pub fn finite_support(
        group: Group,
        alphabet: Alphabet,
        default: u8,
        support: BTreeMap<Vec<i64>, u8>,
    ) -> Result<Configuration> {
        let d = group
            .rank()
            .ok_or_else(|| Error::Unsupported("finite-support storage needs Z^d".into()))?;
        if !alphabet.contains(default) {
            return Err(Error::AlphabetMismatch {
                expected: alphabet.size(),
                got: default as usize + 1,
            });
        }
        let mut clean = BTreeMap::new();
        for (p, s) in support {
            if p.len() != d {
                return Err(Error::Precondition(format!(
                    "support point of dimension {} in Z^{d}",
                    p.len()
                )));
            }
            if !alphabet.contains(s) {
                return Err(Error::AlphabetMismatch {
                    expected: alphabet.size(),
                    got: s as usize + 1,
                });
            }
            if s != default {
                clean.insert(p, s);
            }
        }
        Ok(Configuration {
            group,
            alphabet,
            storage: Storage::FiniteSupport {
                default,
                support: clean,
            },
        })
    }

    pub fn periodic(
        group: Group,
        alphabet: Alphabet,
        periods: Vec<i64>,
        table: Vec<u8>,
    ) -> Result<Configuration> {
        let d = group
            .rank()
            .ok_or_else(|| Error::Unsupported("periodic storage needs Z^d".into()))?;
        if periods.len() != d || periods.iter().any(|&p| p <= 0) {
            return Err(Error::Precondition(format!(
                "need {d} positive periods, got {periods:?}"
            )));
        }
        let cells: i64 = periods.iter().product();
        if table.len() as i64 != cells {
            return Err(Error::Precondition(format!(
                "fundamental domain has {} entries, lattice index is {cells}",
                table.len()
            )));
        }
        if let Some(&s) = table.iter().find(|&&s| !alphabet.contains(s)) {
            return Err(Error::AlphabetMismatch {
                expected: alphabet.size(),
                got: s as usize + 1,
            });
        }
        Ok(Configuration {
            group,
            alphabet,
            storage: Storage::Periodic { periods, table },
        })
    }

    /// Dense configuration decoded from a mixed-radix code:
    /// `code = sum_g x(g) * q^g`.
    pub fn from_code(group: &Group, alphabet: Alphabet, code: u64) -> Result<Configuration> {
        let n = group
            .order()
            .ok_or_else(|| Error::Unsupported("codes index finite configuration spaces".into()))?;
        let q = alphabet.size() as u64;
        let mut rest = code;
        let mut table = vec![0u8; n];
        for slot in table.iter_mut() {
            *slot = (rest % q) as u8;
            rest /= q;
        }
        Configuration::dense(group.clone(), alphabet, table)
    }

    /// Mixed-radix code of a dense configuration.
    pub fn code(&self) -> Option<u64> {
        match &self.storage {
            Storage::Dense(t) => {
                let q = self.alphabet.size() as u64;
                let mut code = 0u64;
                for &s in t.iter().rev() {
                    code = code * q + s as u64;
                }
                Some(code)
            }
            _ => None,
        }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn storage(&self) -> &Storage {
        &self.storage
    }

    pub fn dense_table(&self) -> Option<&[u8]> {
        match &self.storage {
            Storage::Dense(t) => Some(t),
            _ => None,
        }
    }

    /// x(g).
    pub fn evaluate(&self, g: &Element) -> u8 {
        match (&self.storage, g) {
            (Storage::Dense(t), Element::Finite(i)) => t[*i],
            (Storage::FiniteSupport { default, support }, Element::Free(v)) => {
                support.get(v).copied().unwrap_or(*default)
            }
            (Storage::Periodic { periods, table }, Element::Free(v)) => {
                let mut idx = 0usize;
                let mut stride = 1usize;
                for (c, &p) in v.iter().zip(periods) {
                    idx += stride * (c.rem_euclid(p) as usize);
                    stride *= p as usize;
                }
                table[idx]
            }
            _ => panic!("element backend does not match configuration storage"),
        }
    }

    /// The shift `(g . x)(k) = x(g^-1 k)`; storage kind is preserved.
    pub fn shift(&self, g: &Element) -> Result<Configuration> {
        if !self.group.contains(g) {
            return Err(Error::GroupMismatch(
                "shift element is not in the configuration's group".into(),
            ));
        }
        let storage = match (&self.storage, g) {
            (Storage::Dense(t), Element::Finite(gi)) => {
                let fg = self.group.finite().unwrap();
                let ginv = fg.inv(*gi);
                Storage::Dense((0..t.len()).map(|k| t[fg.mul(ginv, k)]).collect())
            }
            (Storage::FiniteSupport { default, support }, Element::Free(gv)) => {
                let moved = support
                    .iter()
                    .map(|(p, &s)| (p.iter().zip(gv).map(|(a, b)| a + b).collect(), s))
                    .collect();
                Storage::FiniteSupport {
                    default: *default,
                    support: moved,
                }
            }
            (Storage::Periodic { periods, table }, Element::Free(gv)) => {
                // (g . x)(k) = x(k - g): re-index the fundamental domain.
                let cells = table.len();
                let mut shifted = vec![0u8; cells];
                for (idx, slot) in shifted.iter_mut().enumerate() {
                    let mut rest = idx;
                    let mut point = Vec::with_capacity(periods.len());
                    for &p in periods {
                        point.push(rest as i64 % p);
                        rest /= p as usize;
                    }
                    let mut src = 0usize;
                    let mut stride = 1usize;
                    for ((c, gcoord), &p) in point.iter().zip(gv).zip(periods) {
                        src += stride * ((c - gcoord).rem_euclid(p) as usize);
                        stride *= p as usize;
                    }
                    *slot = table[src];
                }
                Storage::Periodic {
                    periods: periods.clone(),
                    table: shifted,
                }
            }
            _ => unreachable!("contains() already matched the backend"),
        };
        Ok(Configuration {
            group: self.group.clone(),
            alphabet: self.alphabet,
            storage,
        })
    }

    /// The pattern `x|_S`.
    pub fn restrict(&self, window: &[Element]) -> Result<Pattern> {
        for e in window {
            if !self.group.contains(e) {
                return Err(Error::GroupMismatch(format!(
                    "window element {e} is not in the configuration's group"
                )));
            }
        }
        Ok(Pattern {
            window: window.to_vec(),
            values: window.iter().map(|e| self.evaluate(e)).collect(),
        })
    }

    /// True iff `x(h) = a` exactly when `h = g`. Decidable for all three
    /// storage kinds.
    pub fn is_characteristic(&self, g: &Element, a: u8) -> Result<bool> {
        if !self.alphabet.contains(a) {
            return Err(Error::AlphabetMismatch {
                expected: self.alphabet.size(),
                got: a as usize + 1,
            });
        }
        if !self.group.contains(g) {
            return Err(Error::GroupMismatch("point outside the group".into()));
        }
        match &self.storage {
            Storage::Dense(t) => {
                let gi = g.finite_index().unwrap();
                Ok(t.iter().enumerate().all(|(i, &s)| (s == a) == (i == gi)))
            }
            Storage::FiniteSupport { default, support } => {
                if *default == a {
                    return Ok(false); // a appears off every finite support
                }
                let gv = g.vector().unwrap();
                Ok(support.get(gv) == Some(&a)
                    && support.iter().all(|(p, &s)| s != a || p.as_slice() == gv))
            }
            Storage::Periodic { table, .. } => {
                // A full-rank periodic configuration repeats every value it
                // takes at infinitely many points.
                let _ = table;
                Ok(false)
            }
        }
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.storage {
            Storage::Dense(t) => {
                write!(f, "dense:[")?;
                for (i, s) in t.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{s}")?;
                }
                write!(f, "]")
            }
            Storage::FiniteSupport { default, support } => {
                write!(f, "support:default={default};{{")?;
                for (i, (p, s)) in support.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{}:{s}", Element::Free(p.clone()))?;
                }
                write!(f, "}}")
            }
            Storage::Periodic { periods, table } => {
                write!(f, "periodic:{periods:?}:{table:?}")
            }
        }
    }
}

/// A finite map from a window of group elements to symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    pub window: Vec<Element>,
    pub values: Vec<u8>,
}

impl Pattern {
    pub fn value_at(&self, e: &Element) -> Option<u8> {
        self.window
            .iter()
            .position(|w| w == e)
            .map(|i| self.values[i])
    }
}

/// Result of window-relative characteristic enumeration.
#[derive(Debug, Clone)]
pub struct CharacteristicPatterns {
    pub patterns: Vec<Pattern>,
    /// True when values outside the window are unconstrained (infinite
    /// groups, or a window that does not cover a finite group).
    pub off_window_free: bool,
}

/// All patterns on `window` taking value `a` exactly at `g`. For a finite
/// group whose window covers every element these are complete configurations.
pub fn characteristic_patterns(
    group: &Group,
    alphabet: Alphabet,
    g: &Element,
    a: u8,
    window: &[Element],
) -> Result<CharacteristicPatterns> {
    if !alphabet.contains(a) {
        return Err(Error::AlphabetMismatch {
            expected: alphabet.size(),
            got: a as usize + 1,
        });
    }
    let gpos = window
        .iter()
        .position(|w| w == g)
        .ok_or_else(|| Error::Precondition("the point must lie in the window".into()))?;
    let others: Vec<usize> = (0..window.len()).filter(|&i| i != gpos).collect();
    // Off-g slots range over the q-1 symbols different from a.
    let q = alphabet.size();
    let free_symbols: Vec<u8> = (0..q as u8).filter(|&s| s != a).collect();
    let count = (q - 1).pow(others.len() as u32);
    let mut patterns = Vec::with_capacity(count);
    for code in 0..count {
        let mut values = vec![0u8; window.len()];
        values[gpos] = a;
        let mut rest = code;
        for &slot in &others {
            values[slot] = free_symbols[rest % (q - 1)];
            rest /= q - 1;
        }
        patterns.push(Pattern {
            window: window.to_vec(),
            values,
        });
    }
    let covers_group = group
        .order()
        .map(|n| {
            let mut idx: Vec<usize> = window.iter().filter_map(|e| e.finite_index()).collect();
            idx.sort_unstable();
            idx.dedup();
            idx.len() == n
        })
        .unwrap_or(false);
    Ok(CharacteristicPatterns {
        patterns,
        off_window_free: !covers_group,
    })
}

/// `chi_k^a := k g^-1 . chi_g^a`; the input must be a-characteristic on `g`.
pub fn translate_characteristic(
    chi: &Configuration,
    g: &Element,
    k: &Element,
    a: u8,
) -> Result<Configuration> {
    if !chi.is_characteristic(g, a)? {
        return Err(Error::Precondition(format!(
            "input is not {a}-characteristic on {g}"
        )));
    }
    let group = chi.group();
    let shifted = chi.shift(&group.mul(k, &group.inv(g)))?;
    if !shifted.is_characteristic(k, a)? {
        return Err(Error::Internal(
            "translated configuration lost the characteristic property".into(),
        ));
    }
    Ok(shifted)
}

/// An explicit enumerated set of dense configurations over a finite group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigSet {
    group: Group,
    alphabet: Alphabet,
    members: Vec<Configuration>,
}

impl ConfigSet {
    pub fn new(
        group: Group,
        alphabet: Alphabet,
        mut members: Vec<Configuration>,
    ) -> Result<ConfigSet> {
        for m in &members {
            if m.group() != &group {
                return Err(Error::GroupMismatch(
                    "mixed groups in a configuration set".into(),
                ));
            }
            if m.alphabet() != alphabet {
                return Err(Error::AlphabetMismatch {
                    expected: alphabet.size(),
                    got: m.alphabet().size(),
                });
            }
        }
        members.sort_by_key(|m| m.code().unwrap_or(u64::MAX));
        members.dedup();
        Ok(ConfigSet {
            group,
            alphabet,
            members,
        })
    }

    pub fn members(&self) -> &[Configuration] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: &Configuration) -> bool {
        self.members.iter().any(|m| m == x)
    }
}

/// `Fix(K) := { x : k . x = x for all k in K }` — exactly the configurations
/// constant on each right coset Kg; cardinality q^[G:K].
pub fn fix_subgroup(k: &Subgroup, alphabet: Alphabet) -> Result<ConfigSet> {
    let parent = k.parent().clone();
    let fg = parent
        .finite()
        .ok_or_else(|| Error::Unsupported("Fix enumeration over an infinite group".into()))?;
    let elems = k.element_indices()?;
    let n = fg.order();
    // coset_id[g] identifies the right coset Kg.
    let mut coset_id = vec![usize::MAX; n];
    let mut cosets = 0usize;
    for g in 0..n {
        if coset_id[g] != usize::MAX {
            continue;
        }
        for &kk in elems {
            coset_id[fg.mul(kk, g)] = cosets;
        }
        cosets += 1;
    }
    let q = alphabet.size();
    let total = (q as u64).pow(cosets as u32);
    let mut members = Vec::with_capacity(total as usize);
    for code in 0..total {
        let mut rest = code;
        let mut symbols = vec![0u8; cosets];
        for s in symbols.iter_mut() {
            *s = (rest % q as u64) as u8;
            rest /= q as u64;
        }
        let table: Vec<u8> = (0..n).map(|g| symbols[coset_id[g]]).collect();
        members.push(Configuration::dense(parent.clone(), alphabet, table)?);
    }
    ConfigSet::new(parent, alphabet, members)
}
