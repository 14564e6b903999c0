//! Difference sets, equivariance decisions, and homomorphism uniqueness.
//!
//! For homomorphisms `phi, psi : H -> G` the difference set
//! `Delta(phi, psi) = { psi(h)^-1 phi(h) : h in H }` controls whether a
//! non-constant automaton over `phi` can also be equivariant over `psi`:
//! when `Delta` is infinite a concrete distinguishing input exists and is
//! constructed here; when `Delta` is finite a symmetric sum rule over the
//! subgroup it generates realizes the same map through both homomorphisms.

use std::collections::BTreeMap;

use crate::ca::{decode_config, Gca, LocalRule};
use crate::config::{Alphabet, Configuration};
use crate::error::{Error, Result};
use crate::exec;
use crate::groups::{Element, Group, Homomorphism};

/// `Delta(phi, psi)`: either the exact element set (finite domain, or equal
/// matrices) or a certificate that the set is infinite.
#[derive(Debug, Clone)]
pub struct DifferenceSet {
    pub phi: Homomorphism,
    pub psi: Homomorphism,
    pub elements: DeltaElements,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeltaElements {
    /// Sorted, deduplicated enumeration.
    Finite(Vec<Element>),
    /// The set is infinite: `direction` is a nonzero codomain element with
    /// every multiple `n . direction` (n != 0) realized as
    /// `psi(n . along)^-1 phi(n . along)`.
    Infinite { along: Element, direction: Element },
}

impl DifferenceSet {
    pub fn is_finite(&self) -> bool {
        matches!(self.elements, DeltaElements::Finite(_))
    }

    /// `Delta = {e}` exactly when the two homomorphisms coincide.
    pub fn is_trivial(&self) -> bool {
        match &self.elements {
            DeltaElements::Finite(els) => {
                els.len() == 1 && els[0] == self.phi.codomain().identity()
            }
            DeltaElements::Infinite { .. } => false,
        }
    }
}

/// Compute `Delta(phi, psi) = { psi(h)^-1 phi(h) }`.
pub fn difference_set(phi: &Homomorphism, psi: &Homomorphism) -> Result<DifferenceSet> {
    if phi.domain() != psi.domain() || phi.codomain() != psi.codomain() {
        return Err(Error::GroupMismatch(
            "difference set needs a shared domain and codomain".into(),
        ));
    }
    let g = phi.codomain();
    let elements = if let Some(n) = phi.domain().order() {
        let mut els: Vec<Element> = (0..n)
            .map(|i| {
                let h = Element::Finite(i);
                g.mul(&g.inv(&psi.apply(&h)), &phi.apply(&h))
            })
            .collect();
        els.sort();
        els.dedup();
        DeltaElements::Finite(els)
    } else {
        // Z^r -> Z^d: Delta is the image of the matrix phi - psi, infinite
        // exactly when that matrix is nonzero.
        let (rows, cols, a) = phi
            .matrix()
            .ok_or_else(|| Error::Unsupported("mixed group backends".into()))?;
        let (_, _, b) = psi.matrix().unwrap();
        let diff: Vec<i64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        match (0..cols).find(|&j| (0..rows).any(|i| diff[i * cols + j] != 0)) {
            None => DeltaElements::Finite(vec![g.identity()]),
            Some(j) => {
                let mut along = vec![0i64; cols];
                along[j] = 1;
                let direction: Vec<i64> = (0..rows).map(|i| diff[i * cols + j]).collect();
                DeltaElements::Infinite {
                    along: Element::Free(along),
                    direction: Element::Free(direction),
                }
            }
        }
    };
    Ok(DifferenceSet {
        phi: phi.clone(),
        psi: psi.clone(),
        elements,
    })
}

/// A (possibly infinite) enumerable family of candidate translates.
#[derive(Debug, Clone)]
pub enum ElementFamily {
    /// A finite list, scanned in the stored order.
    Explicit(Vec<Element>),
    /// `{ n . direction : n != 0 }` in Z^d, scanned n = 1, -1, 2, -2, ...
    MultiplesOf(Element),
}

/// Find `r` in the family with `rT` disjoint from `T`.
///
/// For an infinite family of multiples of a nonzero direction in `Z^d` the
/// search always succeeds: each collision `r t1 = t2` pins `n` to one of at
/// most `|T|^2` values, so scanning `|T|^2 + 1` candidates is enough.
pub fn find_disjoint_translate(
    family: &ElementFamily,
    group: &Group,
    t: &[Element],
) -> Result<Element> {
    let disjoint = |r: &Element| {
        t.iter().all(|t1| {
            let rt = group.mul(r, t1);
            !t.contains(&rt)
        })
    };
    match family {
        ElementFamily::Explicit(candidates) => candidates
            .iter()
            .find(|r| disjoint(r))
            .cloned()
            .ok_or_else(|| Error::NoDisjointTranslate(format!("{} candidates", candidates.len()))),
        ElementFamily::MultiplesOf(direction) => {
            let d = direction
                .vector()
                .ok_or_else(|| Error::Unsupported("multiples family needs Z^d".into()))?;
            if d.iter().all(|&c| c == 0) {
                return Err(Error::Precondition("zero direction".into()));
            }
            let budget = (t.len() * t.len() + 1) as i64;
            for n in 1..=budget {
                for sign in [1i64, -1] {
                    let r = Element::Free(d.iter().map(|&c| c * n * sign).collect());
                    if disjoint(&r) {
                        return Ok(r);
                    }
                }
            }
            Err(Error::Internal(
                "disjoint translate not found within the guaranteed budget".into(),
            ))
        }
    }
}

/// How an equivariance verdict was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Method {
    IdenticalHomomorphism,
    ConstantRule,
    Exhaustive,
    DisjointTranslate,
}

/// Outcome of comparing the realized maps of `phi^* . tau` and `psi^* . tau`.
#[derive(Debug, Clone)]
pub struct EquivarianceVerdict {
    pub equivariant: bool,
    /// A cell and input where the two maps differ (negative verdicts only).
    pub witness: Option<(Element, Configuration)>,
    pub method: Method,
}

/// Reference evaluator used to re-check witnesses: materializes the shifted
/// configuration and restricts it, instead of reading offsets directly.
pub fn reference_cell(t: &Gca, x: &Configuration, h: &Element) -> Result<u8> {
    let h_inv = t.output_group().inv(h);
    let shifted = x.shift(&t.phi().apply(&h_inv))?;
    let pattern = shifted.restrict(t.rule().memory())?;
    let rule = t.rule();
    Ok(rule.table()[rule.encode(&pattern.values)])
}

fn verify_witness(t: &Gca, s: &Gca, h: &Element, x: &Configuration) -> Result<()> {
    if reference_cell(t, x, h)? == reference_cell(s, x, h)? {
        return Err(Error::Internal(
            "witness does not re-verify under the reference evaluator".into(),
        ));
    }
    Ok(())
}

/// Decide whether the automaton realizes the same map through `psi` as it
/// does through its own homomorphism.
pub fn decide_equivariance(t: &Gca, psi: &Homomorphism) -> Result<EquivarianceVerdict> {
    if psi.domain() != t.output_group() || psi.codomain() != t.domain_space() {
        return Err(Error::GroupMismatch(
            "candidate homomorphism must share domain and codomain".into(),
        ));
    }
    if psi == t.phi() {
        return Ok(EquivarianceVerdict {
            equivariant: true,
            witness: None,
            method: Method::IdenticalHomomorphism,
        });
    }
    if t.is_constant() {
        return Ok(EquivarianceVerdict {
            equivariant: true,
            witness: None,
            method: Method::ConstantRule,
        });
    }
    let s = Gca::new(psi.clone(), t.rule().clone())?;
    if t.domain_space().is_finite() && t.output_group().is_finite() {
        let ct = t.compile()?;
        let cs = s.compile()?;
        let q = ct.q as u64;
        let inputs = q
            .checked_pow(ct.input_cells as u32)
            .filter(|&n| n <= 1 << 24)
            .ok_or_else(|| Error::BudgetExceeded("configuration space too large".into()))?;
        let cells = ct.output_cells;
        let found = exec::find_map_first(inputs, |code| {
            let mut x = vec![0u8; ct.input_cells];
            decode_config(code, ct.q, &mut x);
            (0..cells)
                .find(|&h| ct.eval_cell(&x, h) != cs.eval_cell(&x, h))
                .map(|h| (code, h))
        });
        return match found {
            None => Ok(EquivarianceVerdict {
                equivariant: true,
                witness: None,
                method: Method::Exhaustive,
            }),
            Some((code, h)) => {
                let x = Configuration::from_code(t.domain_space(), t.alphabet(), code)?;
                let h = Element::Finite(h);
                verify_witness(t, &s, &h, &x)?;
                Ok(EquivarianceVerdict {
                    equivariant: false,
                    witness: Some((h, x)),
                    method: Method::Exhaustive,
                })
            }
        };
    }
    if t.domain_space().rank().is_some() && t.output_group().rank().is_some() {
        return disjoint_translate_witness(t, &s, psi);
    }
    Err(Error::Unsupported(
        "equivariance is decided for finite groups and free abelian matrices only".into(),
    ))
}

/// Negative verdict for free abelian groups with a non-constant rule and
/// `psi != phi`: find `h` with `phi(h)T` and `psi(h)T` disjoint, then place
/// two patterns with different rule values on the two windows.
fn disjoint_translate_witness(t: &Gca, s: &Gca, psi: &Homomorphism) -> Result<EquivarianceVerdict> {
    let g = t.domain_space().clone();
    let delta = difference_set(t.phi(), psi)?;
    let (along, direction) = match &delta.elements {
        DeltaElements::Infinite { along, direction } => (along.clone(), direction.clone()),
        DeltaElements::Finite(_) => {
            return Err(Error::Unsupported(
                "finite difference set over an infinite group: no witness construction".into(),
            ))
        }
    };
    let rule = t.rule().minimized();
    let memory = rule.memory().to_vec();
    // psi(h)^-1 phi(h) = n . direction for h = n . along; disjointness of
    // phi(h)T and psi(h)T is exactly (n . direction)T disjoint from T.
    let family = ElementFamily::MultiplesOf(direction.clone());
    let r = find_disjoint_translate(&family, &g, &memory)?;
    let n = {
        let rv = r.vector().unwrap();
        let dv = direction.vector().unwrap();
        let j = dv.iter().position(|&c| c != 0).unwrap();
        rv[j] / dv[j]
    };
    let h = Element::Free(along.vector().unwrap().iter().map(|&c| c * n).collect());
    let phi_h = t.phi().apply(&h);
    let psi_h = psi.apply(&h);
    // First pattern pair (in mixed-radix order) with different rule values.
    let table = rule.table();
    let i1 = 0usize;
    let i2 = table
        .iter()
        .position(|&v| v != table[i1])
        .ok_or_else(|| Error::Internal("non-constant rule with a constant table".into()))?;
    let q = rule.alphabet().size();
    let mut z1 = vec![0u8; memory.len()];
    let mut z2 = vec![0u8; memory.len()];
    decode_config(i1 as u64, q, &mut z1);
    decode_config(i2 as u64, q, &mut z2);
    // Assemble x with x|_{phi(h)T} = z1 and x|_{psi(h)T} = z2.
    let mut support: BTreeMap<Vec<i64>, u8> = BTreeMap::new();
    for (base, z) in [(&phi_h, &z1), (&psi_h, &z2)] {
        for (tm, &v) in memory.iter().zip(z.iter()) {
            let cell = g.mul(base, tm).vector().unwrap().to_vec();
            if support.insert(cell, v).is_some() {
                return Err(Error::Internal(
                    "translated windows overlap despite the disjointness check".into(),
                ));
            }
        }
    }
    let x = Configuration::finite_support(g.clone(), t.alphabet(), 0, support)?;
    verify_witness(t, s, &h, &x)?;
    Ok(EquivarianceVerdict {
        equivariant: false,
        witness: Some((h, x)),
        method: Method::DisjointTranslate,
    })
}

/// All homomorphisms through which the automaton realizes its map.
///
/// The automaton has the unique homomorphism property exactly when this list
/// is `{phi}`; for constant rules it is all of `Hom(H, G)`.
pub fn uhp_scan(t: &Gca) -> Result<Vec<Homomorphism>> {
    if !(t.domain_space().is_finite() && t.output_group().is_finite()) {
        return Err(Error::Unsupported(
            "homomorphism scan needs finite groups; decide each candidate individually".into(),
        ));
    }
    let candidates = crate::groups::enumerate_homomorphisms(t.output_group(), t.domain_space())?;
    let mut kept = Vec::new();
    for psi in candidates {
        if decide_equivariance(t, &psi)?.equivariant {
            kept.push(psi);
        }
    }
    Ok(kept)
}

/// When `Delta(phi, psi)` is finite, the sum-mod-q rule over the subgroup it
/// generates realizes the same map through both homomorphisms; build that
/// automaton (over the identity homomorphism) and verify the equality.
pub fn symmetric_counterexample(
    phi: &Homomorphism,
    psi: &Homomorphism,
    alphabet: Alphabet,
) -> Result<Gca> {
    let delta = difference_set(phi, psi)?;
    let elements = match &delta.elements {
        DeltaElements::Finite(els) => els.clone(),
        DeltaElements::Infinite { .. } => {
            return Err(Error::InfiniteFamily(
                "the difference set is infinite, so no non-constant rule can realize the \
                 same map through both homomorphisms"
                    .into(),
            ))
        }
    };
    let g = phi.codomain().clone();
    let memory: Vec<Element> = if let Some(fg) = g.finite() {
        let seed: Vec<usize> = elements.iter().map(|e| e.finite_index().unwrap()).collect();
        fg.closure(&seed).into_iter().map(Element::Finite).collect()
    } else {
        // Over Z^d a finite difference set is {0}; the generated subgroup is
        // trivial and the rule below degenerates to read-at-identity.
        vec![g.identity()]
    };
    let rule = LocalRule::sum_mod_q(g.clone(), alphabet, memory)?;
    let tau = Gca::classical(rule);
    if tau.is_constant() {
        return Err(Error::Internal(
            "sum rule over a nonempty set is constant".into(),
        ));
    }
    if g.is_finite() {
        let through_phi = Gca::new(phi.clone(), tau.rule().clone())?;
        let through_psi = Gca::new(psi.clone(), tau.rule().clone())?;
        let verdict = decide_equivariance(&through_phi, psi)?;
        if !verdict.equivariant {
            return Err(Error::Internal(format!(
                "constructed rule fails the exhaustive equality check (witness at {:?})",
                verdict.witness.map(|(h, x)| (h, x.to_string()))
            )));
        }
        let _ = through_psi;
    }
    Ok(tau)
}

/// Sufficient criterion: a symmetric rule whose memory set is stabilized by
/// every `psi(h)^-1 phi(h)` makes the automaton equivariant through `psi`
/// without any enumeration. Returns false when the criterion does not apply
/// (which says nothing about equivariance itself).
pub fn symmetric_equivariance_check(t: &Gca, psi: &Homomorphism) -> Result<bool> {
    if psi.domain() != t.output_group() || psi.codomain() != t.domain_space() {
        return Err(Error::GroupMismatch(
            "candidate homomorphism must share domain and codomain".into(),
        ));
    }
    if !t.rule().is_symmetric() {
        return Ok(false);
    }
    let g = t.domain_space();
    let memory = t.rule().memory();
    let stabilizes = |d: &Element| {
        let mut translated: Vec<Element> = memory.iter().map(|m| g.mul(d, m)).collect();
        translated.sort();
        let mut original = memory.to_vec();
        original.sort();
        translated == original
    };
    match difference_set(t.phi(), psi)?.elements {
        DeltaElements::Finite(els) => Ok(els.iter().all(stabilizes)),
        DeltaElements::Infinite { .. } => Ok(false),
    }
}

/// Search the image of an id-automaton for a characteristic configuration
/// (one cell carrying a value that appears nowhere else). Finding one proves
/// that every pullback-composition with this automaton determines its
/// homomorphism uniquely.
pub fn characteristic_uhp_certificate(tau: &Gca) -> Result<Option<(Element, u8, Configuration)>> {
    if tau.phi() != &Homomorphism::identity(tau.domain_space().clone()) {
        return Err(Error::Precondition(
            "certificate search expects an automaton over the identity homomorphism".into(),
        ));
    }
    let compiled = tau.compile()?;
    let q = compiled.q as u64;
    let inputs = q
        .checked_pow(compiled.input_cells as u32)
        .filter(|&n| n <= 1 << 24)
        .ok_or_else(|| Error::BudgetExceeded("configuration space too large".into()))?;
    let found = exec::find_map_first(inputs, |code| {
        let mut x = vec![0u8; compiled.input_cells];
        let mut y = Vec::new();
        decode_config(code, compiled.q, &mut x);
        compiled.apply_into(&x, &mut y);
        for g in 0..compiled.output_cells {
            for a in 0..compiled.q as u8 {
                if y[g] == a && y.iter().enumerate().all(|(k, &v)| (v == a) == (k == g)) {
                    return Some((code, g, a));
                }
            }
        }
        None
    });
    match found {
        None => Ok(None),
        Some((code, g, a)) => {
            let y = Configuration::from_code(tau.domain_space(), tau.alphabet(), code)?;
            let image = tau.apply(&y)?;
            if !image.is_characteristic(&Element::Finite(g), a)? {
                return Err(Error::Internal("certificate does not re-verify".into()));
            }
            Ok(Some((Element::Finite(g), a, y)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{build_cyclic, enumerate_endomorphisms};

    fn xor_on(g: &Group, mem: Vec<usize>) -> LocalRule {
        LocalRule::sum_mod_q(
            g.clone(),
            Alphabet::binary(),
            mem.into_iter().map(Element::Finite).collect(),
        )
        .unwrap()
    }

    fn scale_endo(z: &Group, a: i64) -> Homomorphism {
        Homomorphism::from_matrix(z.clone(), z.clone(), vec![vec![a]]).unwrap()
    }

    #[test]
    fn difference_set_examples() {
        let z6 = build_cyclic(6).unwrap();
        let id = Homomorphism::identity(z6.clone());
        assert!(difference_set(&id, &id).unwrap().is_trivial());

        // psi(x) = 5x: delta(h) = -5h + h = 2h, giving {0, 2, 4}.
        let mul5 =
            Homomorphism::from_table(z6.clone(), z6.clone(), vec![0, 5, 4, 3, 2, 1]).unwrap();
        let d = difference_set(&id, &mul5).unwrap();
        assert_eq!(
            d.elements,
            DeltaElements::Finite(vec![
                Element::Finite(0),
                Element::Finite(2),
                Element::Finite(4)
            ])
        );
        assert!(!d.is_trivial());

        // phi(n) = 2n, psi(n) = 3n over Z: infinite, direction -1.
        let z = Group::free_abelian(1);
        let d = difference_set(&scale_endo(&z, 2), &scale_endo(&z, 3)).unwrap();
        match d.elements {
            DeltaElements::Infinite { direction, .. } => {
                assert_eq!(direction, Element::Free(vec![-1]))
            }
            _ => panic!("expected an infinite difference set"),
        }
    }

    #[test]
    fn disjoint_translate_examples() {
        let z = Group::free_abelian(1);
        // Multiples of 2 against T = {0, 1}: r = 2.
        let fam = ElementFamily::MultiplesOf(Element::Free(vec![2]));
        let t = vec![Element::Free(vec![0]), Element::Free(vec![1])];
        assert_eq!(
            find_disjoint_translate(&fam, &z, &t).unwrap(),
            Element::Free(vec![2])
        );
        // Singleton T: the very first candidate works.
        let fam = ElementFamily::MultiplesOf(Element::Free(vec![1]));
        let t = vec![Element::Free(vec![0])];
        assert_eq!(
            find_disjoint_translate(&fam, &z, &t).unwrap(),
            Element::Free(vec![1])
        );
        // Z^2 with a vertical direction.
        let z2 = Group::free_abelian(2);
        let fam = ElementFamily::MultiplesOf(Element::Free(vec![0, 1]));
        let t = vec![Element::Free(vec![0, 0]), Element::Free(vec![1, 0])];
        assert_eq!(
            find_disjoint_translate(&fam, &z2, &t).unwrap(),
            Element::Free(vec![0, 1])
        );
        // Finite group where every translate meets T.
        let z2f = build_cyclic(2).unwrap();
        let fam = ElementFamily::Explicit(vec![Element::Finite(0), Element::Finite(1)]);
        let t = vec![Element::Finite(0), Element::Finite(1)];
        assert!(matches!(
            find_disjoint_translate(&fam, &z2f, &t),
            Err(Error::NoDisjointTranslate(_))
        ));
    }

    #[test]
    fn decide_equivariance_examples() {
        let z2 = build_cyclic(2).unwrap();
        let xor = Gca::classical(xor_on(&z2, vec![0, 1]));
        // Same homomorphism.
        let v = decide_equivariance(&xor, &Homomorphism::identity(z2.clone())).unwrap();
        assert!(v.equivariant && v.method == Method::IdenticalHomomorphism);
        // Trivial homomorphism: x(0) + x(1) does not depend on the cell.
        let v = decide_equivariance(&xor, &Homomorphism::trivial(z2.clone(), z2.clone())).unwrap();
        assert!(v.equivariant && v.method == Method::Exhaustive);
        // Identity rule is NOT equivariant through the trivial homomorphism.
        let ident = Gca::classical(LocalRule::identity(z2.clone(), Alphabet::binary()));
        let v =
            decide_equivariance(&ident, &Homomorphism::trivial(z2.clone(), z2.clone())).unwrap();
        assert!(!v.equivariant);
        assert!(v.witness.is_some());
    }

    #[test]
    fn infinite_delta_yields_verified_witnesses() {
        // Every non-constant rule over T = {0, 1} on Z, against all pairs of
        // distinct scalings in -2..=2, is distinguished by a built witness.
        let z = Group::free_abelian(1);
        for table_code in 1..15u8 {
            let table: Vec<u8> = (0..4).map(|i| (table_code >> i) & 1).collect();
            let rule = LocalRule::new(
                z.clone(),
                vec![Element::Free(vec![0]), Element::Free(vec![1])],
                Alphabet::binary(),
                table,
            )
            .unwrap();
            for a in -2..=2i64 {
                for b in -2..=2i64 {
                    if a == b {
                        continue;
                    }
                    let t = Gca::new(scale_endo(&z, a), rule.clone()).unwrap();
                    let v = decide_equivariance(&t, &scale_endo(&z, b)).unwrap();
                    assert!(!v.equivariant, "a={a}, b={b}, table={table_code:#b}");
                    assert_eq!(v.method, Method::DisjointTranslate);
                    assert!(v.witness.is_some());
                }
            }
        }
    }

    #[test]
    fn uhp_scan_examples() {
        let z2 = build_cyclic(2).unwrap();
        // Injective automaton: only its own homomorphism.
        let ident = Gca::classical(LocalRule::identity(z2.clone(), Alphabet::binary()));
        let kept = uhp_scan(&ident).unwrap();
        assert_eq!(kept, vec![Homomorphism::identity(z2.clone())]);
        // XOR: both homomorphisms of Z2 work, so uniqueness fails.
        let xor = Gca::classical(xor_on(&z2, vec![0, 1]));
        assert_eq!(uhp_scan(&xor).unwrap().len(), 2);
        // Constant: every homomorphism works.
        let constant = Gca::classical(
            LocalRule::constant(z2.clone(), Alphabet::binary(), vec![Element::Finite(0)], 1)
                .unwrap(),
        );
        assert_eq!(uhp_scan(&constant).unwrap().len(), 2);
    }

    #[test]
    fn injective_automata_have_unique_homomorphisms() {
        // Over groups of order <= 4, every injective automaton with at most
        // two memory cells admits no second homomorphism.
        for (_, g) in crate::groups::group_catalog(4) {
            let n = g.order().unwrap();
            let mems: Vec<Vec<Element>> = {
                let mut v = Vec::new();
                for i in 0..n {
                    v.push(vec![Element::Finite(i)]);
                    for j in i + 1..n {
                        v.push(vec![Element::Finite(i), Element::Finite(j)]);
                    }
                }
                v
            };
            for phi in enumerate_endomorphisms(&g).unwrap() {
                for mem in &mems {
                    let entries = 1u32 << mem.len();
                    for code in 0..1u32 << entries {
                        let table: Vec<u8> =
                            (0..entries).map(|i| ((code >> i) & 1) as u8).collect();
                        let rule =
                            LocalRule::new(g.clone(), mem.clone(), Alphabet::binary(), table)
                                .unwrap();
                        let t = Gca::new(phi.clone(), rule).unwrap();
                        if t.injectivity_surjectivity().unwrap().injective {
                            assert_eq!(uhp_scan(&t).unwrap(), vec![phi.clone()]);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn symmetric_counterexample_examples() {
        let z2 = build_cyclic(2).unwrap();
        let id = Homomorphism::identity(z2.clone());
        let tr = Homomorphism::trivial(z2.clone(), z2.clone());
        let tau = symmetric_counterexample(&id, &tr, Alphabet::binary()).unwrap();
        assert_eq!(tau.rule().memory().len(), 2);
        assert!(!tau.is_constant());

        let z6 = build_cyclic(6).unwrap();
        let id6 = Homomorphism::identity(z6.clone());
        let mul5 =
            Homomorphism::from_table(z6.clone(), z6.clone(), vec![0, 5, 4, 3, 2, 1]).unwrap();
        let tau = symmetric_counterexample(&id6, &mul5, Alphabet::binary()).unwrap();
        assert_eq!(
            tau.rule().memory(),
            &[Element::Finite(0), Element::Finite(2), Element::Finite(4)]
        );

        // phi = psi degenerates to the identity rule.
        let tau = symmetric_counterexample(&id, &id, Alphabet::binary()).unwrap();
        assert_eq!(tau.rule().memory(), &[Element::Finite(0)]);

        // Infinite difference set: the construction must refuse.
        let z = Group::free_abelian(1);
        assert!(matches!(
            symmetric_counterexample(&scale_endo(&z, 2), &scale_endo(&z, 3), Alphabet::binary()),
            Err(Error::InfiniteFamily(_))
        ));
    }

    #[test]
    fn symmetric_criterion_examples() {
        // Sum rule over a subgroup containing Delta: criterion applies.
        let z6 = build_cyclic(6).unwrap();
        let mul5 =
            Homomorphism::from_table(z6.clone(), z6.clone(), vec![0, 5, 4, 3, 2, 1]).unwrap();
        let tau = Gca::classical(xor_on(&z6, vec![0, 2, 4]));
        assert!(symmetric_equivariance_check(&tau, &mul5).unwrap());
        // The criterion's positive answer agrees with the exhaustive check.
        assert!(decide_equivariance(&tau, &mul5).unwrap().equivariant);

        // Infinite Delta over Z: translate condition fails.
        let z = Group::free_abelian(1);
        let rule = LocalRule::sum_mod_q(
            z.clone(),
            Alphabet::binary(),
            vec![Element::Free(vec![0]), Element::Free(vec![1])],
        )
        .unwrap();
        let t = Gca::new(scale_endo(&z, 2), rule).unwrap();
        assert!(!symmetric_equivariance_check(&t, &scale_endo(&z, 3)).unwrap());

        // Asymmetric rule: criterion inapplicable even for psi = phi, yet
        // the full decision still reports equivariance.
        let z4 = build_cyclic(4).unwrap();
        let read0 = LocalRule::new(
            z4.clone(),
            vec![Element::Finite(0), Element::Finite(1)],
            Alphabet::binary(),
            vec![0, 1, 0, 1],
        )
        .unwrap();
        let t = Gca::classical(read0);
        let id4 = Homomorphism::identity(z4.clone());
        assert!(!symmetric_equivariance_check(&t, &id4).unwrap());
        assert!(decide_equivariance(&t, &id4).unwrap().equivariant);
    }

    #[test]
    fn characteristic_certificate_examples() {
        let z2 = build_cyclic(2).unwrap();
        let ident = Gca::classical(LocalRule::identity(z2.clone(), Alphabet::binary()));
        let (g, a, y) = characteristic_uhp_certificate(&ident).unwrap().unwrap();
        assert_eq!((g, a), (Element::Finite(0), 1));
        assert_eq!(y.dense_table().unwrap(), &[1, 0]);

        let constant = Gca::classical(
            LocalRule::constant(z2.clone(), Alphabet::binary(), vec![Element::Finite(0)], 1)
                .unwrap(),
        );
        assert!(characteristic_uhp_certificate(&constant).unwrap().is_none());

        // XOR on Z4: every image y(g) = x(g) + x(g+1) has even weight, so no
        // configuration with a single distinguished cell is ever produced.
        let z4 = build_cyclic(4).unwrap();
        let xor = Gca::classical(xor_on(&z4, vec![0, 1]));
        assert!(characteristic_uhp_certificate(&xor).unwrap().is_none());
    }

    #[test]
    fn certificate_implies_unique_homomorphism() {
        // Wherever a characteristic certificate exists, scanning confirms
        // that only the automaton's own homomorphism works.
        let z4 = build_cyclic(4).unwrap();
        for code in 0..16u32 {
            let table: Vec<u8> = (0..4).map(|i| ((code >> i) & 1) as u8).collect();
            let rule = LocalRule::new(
                z4.clone(),
                vec![Element::Finite(0), Element::Finite(1)],
                Alphabet::binary(),
                table,
            )
            .unwrap();
            let tau = Gca::classical(rule);
            if characteristic_uhp_certificate(&tau).unwrap().is_some() {
                assert_eq!(
                    uhp_scan(&tau).unwrap(),
                    vec![Homomorphism::identity(z4.clone())]
                );
            }
        }
    }

    #[test]
    fn negative_verdicts_carry_sound_witnesses() {
        // Exhaustive path: re-evaluate the witness by hand.
        let z4 = build_cyclic(4).unwrap();
        let ident = Gca::classical(LocalRule::identity(z4.clone(), Alphabet::binary()));
        for psi in enumerate_endomorphisms(&z4).unwrap() {
            let v = decide_equivariance(&ident, &psi).unwrap();
            if let Some((h, x)) = v.witness {
                let s = Gca::new(psi.clone(), ident.rule().clone()).unwrap();
                assert_ne!(
                    reference_cell(&ident, &x, &h).unwrap(),
                    reference_cell(&s, &x, &h).unwrap()
                );
            }
        }
    }

    #[test]
    fn free_abelian_witness_values_match_the_chosen_patterns() {
        let z = Group::free_abelian(1);
        let rule = LocalRule::sum_mod_q(
            z.clone(),
            Alphabet::binary(),
            vec![Element::Free(vec![0]), Element::Free(vec![1])],
        )
        .unwrap();
        let t = Gca::new(scale_endo(&z, 2), rule.clone()).unwrap();
        let psi = scale_endo(&z, 3);
        let v = decide_equivariance(&t, &psi).unwrap();
        let (h, x) = v.witness.unwrap();
        let s = Gca::new(psi, rule).unwrap();
        let lhs = t.evaluate_cell(&x, &h).unwrap();
        let rhs = s.evaluate_cell(&x, &h).unwrap();
        assert_ne!(lhs, rhs);
    }
}
