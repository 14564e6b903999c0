//! Local rules and generalized cellular automata.
//!
//! A [`Gca`] is a homomorphism `phi : H -> G` plus a [`LocalRule`] over `G`;
//! it realizes `T(x)(h) = mu((phi(h^-1) . x)|_T) = mu(t -> x(phi(h) t))`.
//! Rule tables are flat arrays indexed by a mixed-radix pattern encoding
//! (memory position 0 least significant), so lookups inside exhaustive loops
//! are a single indexing operation.

use crate::config::{Alphabet, Configuration, Pattern};
use crate::error::{Error, Result};
use crate::exec;
use crate::groups::{Element, Group, Homomorphism};

/// Composed rule tables beyond this size are refused.
pub const MAX_TABLE_SIZE: u64 = 1 << 20;

/// A memory set `T` in `G` with a total lookup table `mu : A^T -> A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalRule {
    group: Group,
    memory: Vec<Element>,
    alphabet: Alphabet,
    table: Vec<u8>,
}

impl LocalRule {
    pub fn new(
        group: Group,
        memory: Vec<Element>,
        alphabet: Alphabet,
        table: Vec<u8>,
    ) -> Result<LocalRule> {
        for t in &memory {
            if !group.contains(t) {
                return Err(Error::GroupMismatch(format!(
                    "memory element {t} is not in the rule's group"
                )));
            }
        }
        let mut dedup = memory.clone();
        dedup.sort();
        dedup.dedup();
        if dedup.len() != memory.len() {
            return Err(Error::Precondition(
                "memory elements must be distinct".into(),
            ));
        }
        let expected = (alphabet.size() as u64).checked_pow(memory.len() as u32);
        if expected.is_none() || expected.unwrap() > MAX_TABLE_SIZE {
            return Err(Error::BudgetExceeded(format!(
                "rule table over {} memory cells at q={}",
                memory.len(),
                alphabet.size()
            )));
        }
        if table.len() as u64 != expected.unwrap() {
            return Err(Error::Precondition(format!(
                "table has {} entries, expected q^|T| = {}",
                table.len(),
                expected.unwrap()
            )));
        }
        if let Some(&s) = table.iter().find(|&&s| !alphabet.contains(s)) {
            return Err(Error::AlphabetMismatch {
                expected: alphabet.size(),
                got: s as usize + 1,
            });
        }
        Ok(LocalRule {
            group,
            memory,
            alphabet,
            table,
        })
    }

    /// Read-at-identity rule.
    pub fn identity(group: Group, alphabet: Alphabet) -> LocalRule {
        let e = group.identity();
        LocalRule::read_at(group, alphabet, e).expect("identity is in the group")
    }

    /// Rule returning `x(g)`.
    pub fn read_at(group: Group, alphabet: Alphabet, g: Element) -> Result<LocalRule> {
        let table: Vec<u8> = (0..alphabet.size() as u8).collect();
        LocalRule::new(group, vec![g], alphabet, table)
    }

    /// Constant rule over the given memory set.
    pub fn constant(
        group: Group,
        alphabet: Alphabet,
        memory: Vec<Element>,
        value: u8,
    ) -> Result<LocalRule> {
        if !alphabet.contains(value) {
            return Err(Error::AlphabetMismatch {
                expected: alphabet.size(),
                got: value as usize + 1,
            });
        }
        let len = (alphabet.size() as u64).pow(memory.len() as u32) as usize;
        LocalRule::new(group, memory, alphabet, vec![value; len])
    }

    /// Sum of all read symbols modulo q (XOR when q = 2).
    pub fn sum_mod_q(group: Group, alphabet: Alphabet, memory: Vec<Element>) -> Result<LocalRule> {
        let q = alphabet.size();
        let len = (q as u64).pow(memory.len() as u32) as usize;
        let mut table = vec![0u8; len];
        for (idx, slot) in table.iter_mut().enumerate() {
            let mut rest = idx;
            let mut sum = 0usize;
            for _ in 0..memory.len() {
                sum += rest % q;
                rest /= q;
            }
            *slot = (sum % q) as u8;
        }
        LocalRule::new(group, memory, alphabet, table)
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn memory(&self) -> &[Element] {
        &self.memory
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn table(&self) -> &[u8] {
        &self.table
    }

    /// Index of a pattern given its symbol list in memory order.
    #[inline]
    pub fn encode(&self, values: &[u8]) -> usize {
        let q = self.alphabet.size();
        let mut idx = 0usize;
        let mut stride = 1usize;
        for &v in values {
            idx += v as usize * stride;
            stride *= q;
        }
        idx
    }

    /// Evaluate the rule on symbols supplied per memory element.
    pub fn eval_with(&self, read: impl Fn(&Element) -> u8) -> u8 {
        let q = self.alphabet.size();
        let mut idx = 0usize;
        let mut stride = 1usize;
        for t in &self.memory {
            idx += read(t) as usize * stride;
            stride *= q;
        }
        self.table[idx]
    }

    pub fn is_constant(&self) -> bool {
        self.table.windows(2).all(|w| w[0] == w[1])
    }

    /// Whether `mu` is invariant under every permutation of its memory
    /// positions (checked on adjacent transpositions, which generate).
    pub fn is_symmetric(&self) -> bool {
        let q = self.alphabet.size();
        let m = self.memory.len();
        for swap in 0..m.saturating_sub(1) {
            let (lo, hi) = (q.pow(swap as u32), q.pow(swap as u32 + 1));
            for (idx, &v) in self.table.iter().enumerate() {
                let a = (idx / lo) % q;
                let b = (idx / hi) % q;
                let swapped = idx - a * lo - b * hi + b * lo + a * hi;
                if self.table[swapped] != v {
                    return false;
                }
            }
        }
        true
    }

    /// Positions `t` such that two patterns differing only at `t` can have
    /// different values.
    pub fn essential_positions(&self) -> Vec<usize> {
        let q = self.alphabet.size();
        let m = self.memory.len();
        (0..m)
            .filter(|&pos| {
                let stride = q.pow(pos as u32);
                self.table.iter().enumerate().any(|(idx, &v)| {
                    let digit = (idx / stride) % q;
                    (0..q).any(|other| {
                        other != digit && self.table[idx - digit * stride + other * stride] != v
                    })
                })
            })
            .collect()
    }

    /// Project the table onto a subset of positions (which must contain every
    /// essential position); remaining coordinates are fixed to symbol 0.
    fn project(&self, keep: &[usize]) -> LocalRule {
        let q = self.alphabet.size();
        let memory: Vec<Element> = keep.iter().map(|&i| self.memory[i].clone()).collect();
        let len = (q as u64).pow(keep.len() as u32) as usize;
        let mut table = vec![0u8; len];
        for (idx, slot) in table.iter_mut().enumerate() {
            let mut rest = idx;
            let mut full = 0usize;
            for &pos in keep {
                full += (rest % q) * q.pow(pos as u32);
                rest /= q;
            }
            *slot = self.table[full];
        }
        LocalRule {
            group: self.group.clone(),
            memory,
            alphabet: self.alphabet,
            table,
        }
    }

    /// The rule on its essential positions only, memory sorted canonically.
    pub fn minimized(&self) -> LocalRule {
        let projected = self.project(&self.essential_positions());
        projected.sorted()
    }

    /// Reorder memory canonically, permuting the table to match.
    fn sorted(&self) -> LocalRule {
        let q = self.alphabet.size();
        let m = self.memory.len();
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| self.memory[a].cmp(&self.memory[b]));
        if order.iter().enumerate().all(|(i, &o)| i == o) {
            return self.clone();
        }
        let memory: Vec<Element> = order.iter().map(|&i| self.memory[i].clone()).collect();
        let len = self.table.len();
        let mut table = vec![0u8; len];
        for (idx, slot) in table.iter_mut().enumerate() {
            // Digit i of the new index belongs to old position order[i].
            let mut rest = idx;
            let mut old = 0usize;
            for &pos in &order {
                old += (rest % q) * q.pow(pos as u32);
                rest /= q;
            }
            *slot = self.table[old];
        }
        LocalRule {
            group: self.group.clone(),
            memory,
            alphabet: self.alphabet,
            table,
        }
    }

    /// Extend the memory set with extra (inessential) elements.
    pub fn extended(&self, extra: &[Element]) -> Result<LocalRule> {
        let mut memory = self.memory.clone();
        for e in extra {
            if !memory.contains(e) {
                memory.push(e.clone());
            }
        }
        let q = self.alphabet.size();
        let expected = (q as u64).checked_pow(memory.len() as u32);
        if expected.is_none() || expected.unwrap() > MAX_TABLE_SIZE {
            return Err(Error::BudgetExceeded("extended rule table".into()));
        }
        let len = expected.unwrap() as usize;
        let mut table = vec![0u8; len];
        for (idx, slot) in table.iter_mut().enumerate() {
            let mut inner = 0usize;
            let mut stride = 1usize;
            for pos in 0..self.memory.len() {
                inner += ((idx / q.pow(pos as u32)) % q) * stride;
                stride *= q;
            }
            *slot = self.table[inner];
        }
        LocalRule::new(self.group.clone(), memory, self.alphabet, table)
    }
}

/// Injectivity/surjectivity flags decided by exhaustive image enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ImageProfile {
    pub injective: bool,
    pub surjective: bool,
}

/// A phi-cellular automaton: a homomorphism `phi : H -> G` and a local rule
/// over `G`, realizing a map `A^G -> A^H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gca {
    phi: Homomorphism,
    rule: LocalRule,
}

impl Gca {
    pub fn new(phi: Homomorphism, rule: LocalRule) -> Result<Gca> {
        if rule.group() != phi.codomain() {
            return Err(Error::GroupMismatch(
                "rule must live over the codomain of the homomorphism".into(),
            ));
        }
        Ok(Gca { phi, rule })
    }

    /// The id-cellular automaton over `G` with the given rule.
    pub fn classical(rule: LocalRule) -> Gca {
        let phi = Homomorphism::identity(rule.group().clone());
        Gca { phi, rule }
    }

    pub fn phi(&self) -> &Homomorphism {
        &self.phi
    }

    pub fn rule(&self) -> &LocalRule {
        &self.rule
    }

    pub fn domain_space(&self) -> &Group {
        self.phi.codomain()
    }

    pub fn output_group(&self) -> &Group {
        self.phi.domain()
    }

    pub fn alphabet(&self) -> Alphabet {
        self.rule.alphabet()
    }

    pub fn is_constant(&self) -> bool {
        self.rule.is_constant()
    }

    /// The unique memory set of minimal cardinality.
    pub fn minimal_memory_set(&self) -> Vec<Element> {
        self.rule.minimized().memory().to_vec()
    }

    /// One output cell: `mu(t -> x(phi(h) t))`.
    pub fn evaluate_cell(&self, x: &Configuration, h: &Element) -> Result<u8> {
        if x.group() != self.domain_space() {
            return Err(Error::GroupMismatch(
                "input configuration lives over the wrong group".into(),
            ));
        }
        if x.alphabet() != self.alphabet() {
            return Err(Error::AlphabetMismatch {
                expected: self.alphabet().size(),
                got: x.alphabet().size(),
            });
        }
        let base = self.phi.apply(h);
        let g = self.domain_space();
        Ok(self.rule.eval_with(|t| x.evaluate(&g.mul(&base, t))))
    }

    /// Apply to a configuration, producing a dense output over a finite H.
    pub fn apply(&self, x: &Configuration) -> Result<Configuration> {
        let h_group = self.output_group().clone();
        let n = h_group
            .order()
            .ok_or_else(|| Error::Unsupported("infinite output group: use apply_window".into()))?;
        let mut table = Vec::with_capacity(n);
        for h in 0..n {
            table.push(self.evaluate_cell(x, &Element::Finite(h))?);
        }
        Configuration::dense(h_group, self.alphabet(), table)
    }

    /// Apply on an explicit output window (any backend combination).
    pub fn apply_window(&self, x: &Configuration, window: &[Element]) -> Result<Pattern> {
        let mut values = Vec::with_capacity(window.len());
        for h in window {
            if !self.output_group().contains(h) {
                return Err(Error::GroupMismatch(format!(
                    "window element {h} is not in the output group"
                )));
            }
            values.push(self.evaluate_cell(x, h)?);
        }
        Ok(Pattern {
            window: window.to_vec(),
            values,
        })
    }

    /// Precompute read offsets for exhaustive loops over finite groups.
    pub fn compile(&self) -> Result<CompiledGca> {
        let fg = self
            .domain_space()
            .finite()
            .ok_or_else(|| Error::Unsupported("compilation needs finite groups".into()))?;
        let fh = self
            .output_group()
            .finite()
            .ok_or_else(|| Error::Unsupported("compilation needs finite groups".into()))?;
        let mem: Vec<usize> = self
            .rule
            .memory()
            .iter()
            .map(|t| t.finite_index().unwrap())
            .collect();
        let mut reads = Vec::with_capacity(fh.order() * mem.len());
        for h in 0..fh.order() {
            let base = self.phi.image_index(h);
            for &t in &mem {
                reads.push(fg.mul(base, t));
            }
        }
        Ok(CompiledGca {
            input_cells: fg.order(),
            output_cells: fh.order(),
            q: self.alphabet().size(),
            mem_len: mem.len(),
            reads,
            table: self.rule.table().to_vec(),
        })
    }

    /// Exhaustive image-based injectivity and surjectivity (finite groups).
    pub fn injectivity_surjectivity(&self) -> Result<ImageProfile> {
        let compiled = self.compile()?;
        let q = compiled.q as u64;
        let inputs = q
            .checked_pow(compiled.input_cells as u32)
            .filter(|&n| n <= 1 << 24)
            .ok_or_else(|| Error::BudgetExceeded("input space too large to enumerate".into()))?;
        let outputs = q
            .checked_pow(compiled.output_cells as u32)
            .filter(|&n| n <= 1 << 24)
            .ok_or_else(|| Error::BudgetExceeded("output space too large to enumerate".into()))?;
        let codes = exec::map_collect(inputs, |code| {
            let mut x = vec![0u8; compiled.input_cells];
            decode_config(code, compiled.q, &mut x);
            compiled.image_code(&x)
        });
        let mut seen = vec![false; outputs as usize];
        let mut injective = true;
        let mut hit = 0u64;
        for &c in &codes {
            if seen[c as usize] {
                injective = false;
            } else {
                seen[c as usize] = true;
                hit += 1;
            }
        }
        let surjective = hit == outputs;
        // Structural consequences of equivariance; a violation here is an
        // implementation bug, not a property of the instance.
        if surjective && !self.phi.is_injective()? {
            return Err(Error::Internal(
                "surjective automaton over a non-injective homomorphism".into(),
            ));
        }
        if injective && !self.phi.is_surjective()? {
            return Err(Error::Internal(
                "injective automaton over a non-surjective homomorphism".into(),
            ));
        }
        Ok(ImageProfile {
            injective,
            surjective,
        })
    }

    /// Same realized map: same homomorphism and same minimized rule.
    pub fn realizes_same(&self, other: &Gca) -> bool {
        self.phi == other.phi && self.rule.minimized() == other.rule.minimized()
    }
}

/// Flat read table for exhaustive enumeration over finite groups.
pub struct CompiledGca {
    pub input_cells: usize,
    pub output_cells: usize,
    pub q: usize,
    mem_len: usize,
    reads: Vec<usize>,
    table: Vec<u8>,
}

impl CompiledGca {
    #[inline]
    pub fn eval_cell(&self, x: &[u8], h: usize) -> u8 {
        let mut idx = 0usize;
        let mut stride = 1usize;
        let base = h * self.mem_len;
        for j in 0..self.mem_len {
            idx += x[self.reads[base + j]] as usize * stride;
            stride *= self.q;
        }
        self.table[idx]
    }

    /// Mixed-radix code of the full output configuration.
    #[inline]
    pub fn image_code(&self, x: &[u8]) -> u64 {
        let mut code = 0u64;
        for h in (0..self.output_cells).rev() {
            code = code * self.q as u64 + self.eval_cell(x, h) as u64;
        }
        code
    }

    pub fn apply_into(&self, x: &[u8], out: &mut Vec<u8>) {
        out.clear();
        for h in 0..self.output_cells {
            out.push(self.eval_cell(x, h));
        }
    }
}

/// Decode `code` into symbol table `x` (position 0 least significant).
#[inline]
pub fn decode_config(code: u64, q: usize, x: &mut [u8]) {
    let mut rest = code;
    for slot in x.iter_mut() {
        *slot = (rest % q as u64) as u8;
        rest /= q as u64;
    }
}

/// The pullback `phi^* : x -> x . phi`, a phi-cellular automaton with memory
/// `{e}` and the read-at-identity rule.
pub fn pullback(phi: &Homomorphism) -> Gca {
    let rule = LocalRule::identity(phi.codomain().clone(), Alphabet::binary());
    Gca {
        phi: phi.clone(),
        rule,
    }
}

/// Pullback over an explicit alphabet.
pub fn pullback_with(phi: &Homomorphism, alphabet: Alphabet) -> Gca {
    let rule = LocalRule::identity(phi.codomain().clone(), alphabet);
    Gca {
        phi: phi.clone(),
        rule,
    }
}

/// Single composed automaton realizing `apply(s) . apply(t)`: for
/// `t : A^G -> A^H` over `phi : H -> G` and `s : A^H -> A^K` over
/// `psi : K -> H`, the result is over `phi . psi : K -> G` with memory set
/// contained in `phi(S)T`.
pub fn compose(t: &Gca, s: &Gca) -> Result<Gca> {
    if s.domain_space() != t.output_group() {
        return Err(Error::GroupMismatch(
            "inner output group must match outer input group".into(),
        ));
    }
    if s.alphabet() != t.alphabet() {
        return Err(Error::AlphabetMismatch {
            expected: t.alphabet().size(),
            got: s.alphabet().size(),
        });
    }
    let g = t.domain_space().clone();
    let phi = t.phi();
    // Memory set phi(S)T, deduplicated and canonically ordered.
    let mut memory: Vec<Element> = Vec::new();
    for srd in s.rule().memory() {
        let img = phi.apply(srd);
        for trd in t.rule().memory() {
            let u = g.mul(&img, trd);
            if !memory.contains(&u) {
                memory.push(u);
            }
        }
    }
    memory.sort();
    let q = t.alphabet().size();
    let len = (q as u64).checked_pow(memory.len() as u32);
    if len.is_none() || len.unwrap() > MAX_TABLE_SIZE {
        return Err(Error::BudgetExceeded(format!(
            "composed memory set phi(S)T has {} cells",
            memory.len()
        )));
    }
    let position: std::collections::BTreeMap<&Element, usize> = memory.iter().zip(0..).collect();
    let len = len.unwrap() as usize;
    let mut table = vec![0u8; len];
    let t_mem = t.rule().memory();
    for (idx, slot) in table.iter_mut().enumerate() {
        let mut z = vec![0u8; memory.len()];
        decode_config(idx as u64, q, &mut z);
        // mu_new(z) = nu(s -> mu(t -> z(phi(s) t))).
        *slot = s.rule().eval_with(|srd| {
            let img = phi.apply(srd);
            t.rule().eval_with(|trd| {
                let u = g.mul(&img, trd);
                z[position[&u]]
            })
        });
        // eval_with consumes t_mem through the closure above
        let _ = t_mem;
    }
    let rule = LocalRule::new(g, memory, t.alphabet(), table)?;
    let combined = phi.compose(s.phi())?;
    Gca::new(combined, rule)
}

/// Split `T = phi^* . tau`: the unique id-cellular automaton with the same
/// local rule, plus the homomorphism to pull back through.
pub fn factorize(t: &Gca) -> (Gca, Homomorphism) {
    (Gca::classical(t.rule().clone()), t.phi().clone())
}
