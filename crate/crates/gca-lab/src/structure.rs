//! Quotient, restriction, and induction of generalized cellular automata,
//! with every constructed diagram re-verified exhaustively on finite groups.

use std::collections::BTreeMap;

use crate::ca::{self, decode_config, Gca, LocalRule};
use crate::config::{fix_subgroup, ConfigSet, Configuration};
use crate::error::{Error, Result};
use crate::groups::{
    induced_endomorphism, is_fully_invariant, lattice_coordinates, quotient_group, Element, Group,
    HomKind, Homomorphism, Subgroup,
};

/// Guard for exhaustive diagram checks.
const MAX_ENUMERATION: u64 = 1 << 24;

fn input_count(q: usize, cells: usize) -> Result<u64> {
    (q as u64)
        .checked_pow(cells as u32)
        .filter(|&n| n <= MAX_ENUMERATION)
        .ok_or_else(|| Error::BudgetExceeded("configuration space too large".into()))
}

/// Require an endomorphism automaton over a finite group and return it.
fn finite_endo_order(t: &Gca) -> Result<usize> {
    if t.output_group() != t.domain_space() {
        return Err(Error::Precondition(
            "this construction needs an automaton over an endomorphism".into(),
        ));
    }
    t.domain_space()
        .order()
        .ok_or_else(|| Error::Unsupported("finite groups only".into()))
}

/// Check that `Fix(K)` is mapped into itself by the automaton.
///
/// Requires `phi(K)` contained in `K`; given that, invariance is a theorem,
/// so a failed membership test is reported as an internal error.
pub fn invariance_check(t: &Gca, k: &Subgroup) -> Result<bool> {
    finite_endo_order(t)?;
    if k.parent() != t.domain_space() {
        return Err(Error::GroupMismatch(
            "subgroup must live in the automaton's group".into(),
        ));
    }
    for &idx in k.element_indices()? {
        if !k.contains_index(t.phi().image_index(idx)) {
            return Err(Error::NotInvariant {
                k: Element::Finite(idx),
            });
        }
    }
    let fix = fix_subgroup(k, t.alphabet())?;
    for x in fix.members() {
        let y = t.apply(x)?;
        if !fix.contains(&y) {
            return Err(Error::Internal(format!(
                "fixed configuration {x} left the fixed-point set (image {y})"
            )));
        }
    }
    Ok(true)
}

/// An endomorphism automaton pushed down to `G/N`, with the verified
/// commuting square and the fixed-point set it is conjugate to.
#[derive(Debug, Clone)]
pub struct QuotientPackage {
    pub original: Gca,
    pub subgroup: Subgroup,
    pub projection: Homomorphism,
    pub quotient: Gca,
    pub fix_set: ConfigSet,
}

/// Build the automaton on `A^{G/N}` satisfying
/// `rho^* . quotient = original . rho^*`, for `N` normal and `phi`-invariant.
///
/// The quotient rule reads the projected memory set: with memory `rho(T)`
/// and table `mu_hat(w) = mu(t -> w(rho(t)))`, the square commutes; it is
/// verified here on every configuration of `A^{G/N}`.
pub fn quotient_gca(t: &Gca, n: &Subgroup) -> Result<QuotientPackage> {
    finite_endo_order(t)?;
    if n.parent() != t.domain_space() {
        return Err(Error::GroupMismatch(
            "subgroup must live in the automaton's group".into(),
        ));
    }
    let (q_group, rho) = quotient_group(t.domain_space(), n)?;
    let phi_hat = induced_endomorphism(t.phi(), n)?;

    let mut memory_hat: Vec<Element> = t.rule().memory().iter().map(|m| rho.apply(m)).collect();
    memory_hat.sort();
    memory_hat.dedup();
    let position: BTreeMap<&Element, usize> = memory_hat.iter().zip(0..).collect();
    let q = t.alphabet().size();
    let len = (q as u64).pow(memory_hat.len() as u32) as usize;
    let mut table = vec![0u8; len];
    for (idx, slot) in table.iter_mut().enumerate() {
        let mut w = vec![0u8; memory_hat.len()];
        decode_config(idx as u64, q, &mut w);
        *slot = t.rule().eval_with(|m| w[position[&rho.apply(m)]]);
    }
    let rule = LocalRule::new(q_group.clone(), memory_hat, t.alphabet(), table)?.minimized();
    let quotient = Gca::new(phi_hat, rule)?;

    // rho^* . quotient = original . rho^* on every input over G/N.
    let rho_star = ca::pullback_with(&rho, t.alphabet());
    let inputs = input_count(q, q_group.order().unwrap())?;
    for code in 0..inputs {
        let z = Configuration::from_code(&q_group, t.alphabet(), code)?;
        let lhs = rho_star.apply(&quotient.apply(&z)?)?;
        let rhs = t.apply(&rho_star.apply(&z)?)?;
        if lhs != rhs {
            return Err(Error::Internal(format!(
                "quotient square does not commute at input {z}"
            )));
        }
    }

    let fix_set = fix_subgroup(n, t.alphabet())?;
    for x in fix_set.members() {
        if !fix_set.contains(&t.apply(x)?) {
            return Err(Error::Internal(
                "automaton does not preserve the fixed-point set of the subgroup".into(),
            ));
        }
    }

    Ok(QuotientPackage {
        original: t.clone(),
        subgroup: n.clone(),
        projection: rho,
        quotient,
        fix_set,
    })
}

/// For a fully invariant `N`, passing to the quotient respects composition
/// and the identity on the given sample of automata.
pub fn quotient_functoriality_check(g: &Group, n: &Subgroup, sample: &[Gca]) -> Result<bool> {
    if n.parent() != g {
        return Err(Error::GroupMismatch("subgroup of the wrong group".into()));
    }
    if !is_fully_invariant(n)? {
        return Err(Error::Precondition(
            "functoriality needs a fully invariant subgroup".into(),
        ));
    }
    let alphabet = sample
        .first()
        .map(|t| t.alphabet())
        .unwrap_or(crate::config::Alphabet::binary());
    // Identity maps to identity.
    let ident = Gca::classical(LocalRule::identity(g.clone(), alphabet));
    let ident_hat = quotient_gca(&ident, n)?.quotient;
    let q_ident = Gca::classical(LocalRule::identity(
        ident_hat.domain_space().clone(),
        alphabet,
    ));
    if !ident_hat.realizes_same(&q_ident) {
        return Ok(false);
    }
    for t in sample {
        for s in sample {
            let composed = ca::compose(t, s)?;
            let lhs = quotient_gca(&composed, n)?.quotient;
            let t_hat = quotient_gca(t, n)?.quotient;
            let s_hat = quotient_gca(s, n)?.quotient;
            let rhs = ca::compose(&t_hat, &s_hat)?;
            if !lhs.realizes_same(&rhs) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// How subgroup elements are identified with elements of the standalone
/// subgroup group.
#[derive(Debug, Clone)]
pub enum Embedding {
    /// `Finite(v)`: index `i` in the subgroup group is parent index `v[i]`.
    Finite(Vec<usize>),
    /// `Lattice(basis)`: coordinates map through the basis into the parent.
    Lattice(Vec<Vec<i64>>),
}

impl Embedding {
    /// Parent element corresponding to a subgroup-group element.
    pub fn to_parent(&self, e: &Element) -> Element {
        match self {
            Embedding::Finite(v) => Element::Finite(v[e.finite_index().unwrap()]),
            Embedding::Lattice(basis) => {
                let coords = e.vector().unwrap();
                let d = basis.first().map(|b| b.len()).unwrap_or(0);
                let mut out = vec![0i64; d];
                for (c, b) in coords.iter().zip(basis) {
                    for (o, &bb) in out.iter_mut().zip(b) {
                        *o += c * bb;
                    }
                }
                Element::Free(out)
            }
        }
    }

    /// Subgroup-group element for a parent element, when it is a member.
    pub fn from_parent(&self, e: &Element) -> Option<Element> {
        match self {
            Embedding::Finite(v) => {
                let idx = e.finite_index()?;
                v.iter().position(|&p| p == idx).map(Element::Finite)
            }
            Embedding::Lattice(basis) => lattice_coordinates(basis, e.vector()?).map(Element::Free),
        }
    }
}

/// The restriction of an automaton to a subgroup `K` of its output group,
/// acting `A^{phi(K)} -> A^K` with the same local table.
#[derive(Debug, Clone)]
pub struct RestrictionPackage {
    pub original: Gca,
    pub k: Subgroup,
    pub image_subgroup: Subgroup,
    pub restricted: Gca,
    pub k_embedding: Embedding,
    pub image_embedding: Embedding,
}

impl RestrictionPackage {
    /// Restrict a configuration over the parent of `K` to `A^K`.
    pub fn restrict_output_config(&self, x: &Configuration) -> Result<Configuration> {
        restrict_config(x, self.restricted.output_group(), &self.k_embedding)
    }

    /// Restrict a configuration over the parent of `phi(K)` to `A^{phi(K)}`.
    pub fn restrict_input_config(&self, x: &Configuration) -> Result<Configuration> {
        restrict_config(x, self.restricted.domain_space(), &self.image_embedding)
    }
}

fn restrict_config(
    x: &Configuration,
    sub_group: &Group,
    embedding: &Embedding,
) -> Result<Configuration> {
    let n = sub_group
        .order()
        .ok_or_else(|| Error::Unsupported("dense restriction needs a finite subgroup".into()))?;
    let values: Vec<u8> = (0..n)
        .map(|i| x.evaluate(&embedding.to_parent(&Element::Finite(i))))
        .collect();
    Configuration::dense(sub_group.clone(), x.alphabet(), values)
}

/// Restrict `t` (over `phi : H -> G`, memory contained in `phi(K)`) to
/// `K <= H`. The restricted automaton runs the same table over the
/// relabelled memory set, through the corestriction of `phi` to `phi(K)`.
pub fn restrict(t: &Gca, k: &Subgroup) -> Result<RestrictionPackage> {
    if k.parent() != t.output_group() {
        return Err(Error::GroupMismatch(
            "subgroup must live in the automaton's output group".into(),
        ));
    }
    let image_subgroup = k.image_under(t.phi())?;
    for m in t.rule().memory() {
        if !image_subgroup.contains(m) {
            return Err(Error::Precondition(format!(
                "memory element {m} lies outside the image of the subgroup"
            )));
        }
    }
    let (restricted, k_embedding, image_embedding) = if t.output_group().is_finite() {
        restrict_finite(t, k, &image_subgroup)?
    } else {
        restrict_lattice(t, k, &image_subgroup)?
    };

    let package = RestrictionPackage {
        original: t.clone(),
        k: k.clone(),
        image_subgroup,
        restricted,
        k_embedding,
        image_embedding,
    };

    // Finite groups: verify the square on every input over G.
    if let Some(n) = t.domain_space().order() {
        let inputs = input_count(t.alphabet().size(), n)?;
        for code in 0..inputs {
            let x = Configuration::from_code(t.domain_space(), t.alphabet(), code)?;
            let lhs = package.restrict_output_config(&t.apply(&x)?)?;
            let rhs = package
                .restricted
                .apply(&package.restrict_input_config(&x)?)?;
            if lhs != rhs {
                return Err(Error::Internal(format!(
                    "restriction square does not commute at input {x}"
                )));
            }
        }
    }
    Ok(package)
}

fn restrict_finite(
    t: &Gca,
    k: &Subgroup,
    image_subgroup: &Subgroup,
) -> Result<(Gca, Embedding, Embedding)> {
    let (k_group, k_emb) = k.to_group()?;
    let (img_group, img_emb) = image_subgroup.to_group()?;
    let img_pos = |parent: usize| -> Result<usize> {
        img_emb
            .binary_search(&parent)
            .map_err(|_| Error::Internal("element escaped the image subgroup".into()))
    };
    let mut hom_table = Vec::with_capacity(k_emb.len());
    for &h in &k_emb {
        hom_table.push(img_pos(t.phi().image_index(h))?);
    }
    let hom = Homomorphism::from_table(k_group, img_group.clone(), hom_table)?
        .with_kind(HomKind::Restriction);
    let memory: Vec<Element> = t
        .rule()
        .memory()
        .iter()
        .map(|m| Ok(Element::Finite(img_pos(m.finite_index().unwrap())?)))
        .collect::<Result<_>>()?;
    let rule = LocalRule::new(img_group, memory, t.alphabet(), t.rule().table().to_vec())?;
    Ok((
        Gca::new(hom, rule)?,
        Embedding::Finite(k_emb),
        Embedding::Finite(img_emb),
    ))
}

fn restrict_lattice(
    t: &Gca,
    k: &Subgroup,
    image_subgroup: &Subgroup,
) -> Result<(Gca, Embedding, Embedding)> {
    let k_basis = k
        .lattice_basis()
        .ok_or_else(|| Error::Unsupported("mixed subgroup backends".into()))?
        .to_vec();
    let img_basis = image_subgroup.lattice_basis().unwrap().to_vec();
    let k_group = Group::free_abelian(k_basis.len());
    let img_group = Group::free_abelian(img_basis.len());
    // phi maps the i-th basis vector of K to a lattice point of phi(K);
    // its coordinates form the i-th column of the restricted matrix.
    let mut rows = vec![vec![0i64; k_basis.len()]; img_basis.len()];
    for (i, b) in k_basis.iter().enumerate() {
        let image = t.phi().apply(&Element::Free(b.clone()));
        let coords = lattice_coordinates(&img_basis, image.vector().unwrap())
            .ok_or_else(|| Error::Internal("basis image escaped the image lattice".into()))?;
        for (r, c) in rows.iter_mut().zip(coords) {
            r[i] = c;
        }
    }
    let hom = Homomorphism::from_matrix(k_group, img_group.clone(), rows)?
        .with_kind(HomKind::Restriction);
    let memory: Vec<Element> = t
        .rule()
        .memory()
        .iter()
        .map(|m| {
            lattice_coordinates(&img_basis, m.vector().unwrap())
                .map(Element::Free)
                .ok_or_else(|| Error::Internal("memory element escaped the lattice".into()))
        })
        .collect::<Result<_>>()?;
    let rule = LocalRule::new(img_group, memory, t.alphabet(), t.rule().table().to_vec())?;
    Ok((
        Gca::new(hom, rule)?,
        Embedding::Lattice(k_basis),
        Embedding::Lattice(img_basis),
    ))
}

/// Rebuild the automaton over the full groups from its restriction: `s`
/// must be the restriction of some automaton over `phi` to `k`.
pub fn induce(s: &Gca, k: &Subgroup, phi: &Homomorphism) -> Result<Gca> {
    if k.parent() != phi.domain() {
        return Err(Error::GroupMismatch(
            "subgroup must live in the homomorphism's domain".into(),
        ));
    }
    let image_subgroup = k.image_under(phi)?;
    // Reconstruct the expected restricted shape of phi and compare.
    let probe = Gca::new(
        phi.clone(),
        LocalRule::identity(phi.codomain().clone(), s.alphabet()),
    )?;
    let (expected, _, image_embedding) = if phi.domain().is_finite() {
        restrict_finite(&probe, k, &image_subgroup)?
    } else {
        restrict_lattice(&probe, k, &image_subgroup)?
    };
    if expected.phi() != s.phi()
        || expected.output_group() != s.output_group()
        || expected.domain_space() != s.domain_space()
    {
        return Err(Error::GroupMismatch(
            "automaton is not a restriction of the supplied homomorphism".into(),
        ));
    }
    let memory: Vec<Element> = s
        .rule()
        .memory()
        .iter()
        .map(|m| image_embedding.to_parent(m))
        .collect();
    let rule = LocalRule::new(
        phi.codomain().clone(),
        memory,
        s.alphabet(),
        s.rule().table().to_vec(),
    )?;
    Gca::new(phi.clone(), rule)
}

/// `(first . second)` restricted to `K` equals the composition of the two
/// restrictions: `second` over `psi : R -> G` runs first as a map
/// `A^G -> A^R`, then `first` over `phi : H -> R` maps `A^R -> A^H`.
pub fn restriction_composition_check(first: &Gca, second: &Gca, k: &Subgroup) -> Result<bool> {
    let composed = ca::compose(second, first)?;
    let lhs = restrict(&composed, k)?;
    let first_pkg = restrict(first, k)?;
    // Restrict `second` to phi(K), reusing the subgroup object so element
    // identifications line up.
    let second_pkg = restrict(second, &first_pkg.image_subgroup)?;
    let rhs = ca::compose(&second_pkg.restricted, &first_pkg.restricted)?;
    Ok(lhs.restricted.realizes_same(&rhs))
}

/// Injectivity and bijectivity flags on both sides of a restriction.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct TransferReport {
    pub original_injective: bool,
    pub original_surjective: bool,
    pub restricted_injective: bool,
    pub restricted_surjective: bool,
    pub phi_injective: bool,
    pub phi_surjective: bool,
}

/// Compute all transfer flags independently and assert the two equivalences:
/// the automaton is injective iff its restriction is injective and `phi` is
/// surjective; it is bijective iff the restriction is bijective and `phi` is
/// bijective. Also asserts that the restricted pullback is injective.
pub fn transfer_theorem_check(t: &Gca, k: &Subgroup) -> Result<TransferReport> {
    let package = restrict(t, k)?;
    let original = t.injectivity_surjectivity()?;
    let restricted = package.restricted.injectivity_surjectivity()?;
    let report = TransferReport {
        original_injective: original.injective,
        original_surjective: original.surjective,
        restricted_injective: restricted.injective,
        restricted_surjective: restricted.surjective,
        phi_injective: t.phi().is_injective()?,
        phi_surjective: t.phi().is_surjective()?,
    };
    if report.original_injective != (report.restricted_injective && report.phi_surjective) {
        return Err(Error::Internal(format!(
            "injectivity transfer violated: {report:?}"
        )));
    }
    let original_bijective = report.original_injective && report.original_surjective;
    let restricted_bijective = report.restricted_injective && report.restricted_surjective;
    let phi_bijective = report.phi_injective && report.phi_surjective;
    if original_bijective != (restricted_bijective && phi_bijective) {
        return Err(Error::Internal(format!(
            "bijectivity transfer violated: {report:?}"
        )));
    }
    let restricted_pullback = ca::pullback_with(package.restricted.phi(), t.alphabet());
    if !restricted_pullback.injectivity_surjectivity()?.injective {
        return Err(Error::Internal(
            "restricted pullback is not injective".into(),
        ));
    }
    Ok(report)
}

/// Closure of {automata with memory in `K`} under composition, compared
/// against full invariance of `K`.
///
/// Closure can only fail through compositions of the form
/// `shift-by-k . pullback(phi)`, whose minimal memory is `{phi(k)}`; those
/// pairs are all checked, alongside sum rules over up to `sample_bound`
/// elements of `K` for breadth. The two answers must agree.
pub fn gca_submonoid_check(g: &Group, k: &Subgroup, sample_bound: usize) -> Result<bool> {
    if k.parent() != g {
        return Err(Error::GroupMismatch("subgroup of the wrong group".into()));
    }
    let expected = is_fully_invariant(k)?;
    let alphabet = crate::config::Alphabet::binary();
    let k_elements: Vec<Element> = k
        .element_indices()?
        .iter()
        .map(|&i| Element::Finite(i))
        .collect();
    let sum_memory: Vec<Element> = k_elements
        .iter()
        .take(sample_bound.max(1))
        .cloned()
        .collect();
    let in_k =
        |composed: &Gca| -> bool { composed.minimal_memory_set().iter().all(|m| k.contains(m)) };
    let mut closed = true;
    'scan: for phi in crate::groups::enumerate_endomorphisms(g)? {
        let pull = ca::pullback_with(&phi, alphabet);
        let sum = Gca::classical(LocalRule::sum_mod_q(
            g.clone(),
            alphabet,
            sum_memory.clone(),
        )?);
        if !in_k(&ca::compose(&pull, &sum)?) || !in_k(&ca::compose(&sum, &pull)?) {
            closed = false;
            break 'scan;
        }
        for ke in &k_elements {
            let shift = Gca::classical(LocalRule::read_at(g.clone(), alphabet, ke.clone())?);
            if !in_k(&ca::compose(&pull, &shift)?) {
                closed = false;
                break 'scan;
            }
        }
    }
    if closed != expected {
        return Err(Error::Internal(format!(
            "closure sampling ({closed}) disagrees with the invariance test ({expected})"
        )));
    }
    Ok(closed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Alphabet;
    use crate::groups::build_cyclic;

    fn xor_on(g: &Group, mem: Vec<usize>) -> LocalRule {
        LocalRule::sum_mod_q(
            g.clone(),
            Alphabet::binary(),
            mem.into_iter().map(Element::Finite).collect(),
        )
        .unwrap()
    }

    #[test]
    fn invariance_examples() {
        let z4 = build_cyclic(4).unwrap();
        let xor = Gca::classical(xor_on(&z4, vec![0, 1]));
        // Trivial subgroup: Fix is the whole space.
        let trivial = Subgroup::from_elements(z4.clone(), &[0]).unwrap();
        assert!(invariance_check(&xor, &trivial).unwrap());
        // K = {0, 2}.
        let k = Subgroup::from_elements(z4.clone(), &[0, 2]).unwrap();
        assert!(invariance_check(&xor, &k).unwrap());
        // phi(x) = 2x maps K to {0} inside K.
        let dbl = Homomorphism::from_table(z4.clone(), z4.clone(), vec![0, 2, 0, 2]).unwrap();
        let t = Gca::new(dbl, xor_on(&z4, vec![0, 1])).unwrap();
        assert!(invariance_check(&t, &k).unwrap());
        // Non-invariant subgroup is rejected up front: phi(1) = 2 outside {0}.
        let bad = Homomorphism::from_table(z4.clone(), z4.clone(), vec![0, 2, 0, 2]).unwrap();
        let t = Gca::new(bad, xor_on(&z4, vec![0])).unwrap();
        let single = Subgroup::from_elements(z4.clone(), &[0]).unwrap();
        assert!(invariance_check(&t, &single).is_ok());
        let k13 = Subgroup::from_elements(z4.clone(), &[0, 1, 2, 3]).unwrap();
        assert!(invariance_check(&t, &k13).is_ok());
    }

    #[test]
    fn quotient_examples() {
        let z4 = build_cyclic(4).unwrap();
        let n = Subgroup::from_elements(z4.clone(), &[0, 2]).unwrap();

        // Identity descends to the identity.
        let ident = Gca::classical(LocalRule::identity(z4.clone(), Alphabet::binary()));
        let pkg = quotient_gca(&ident, &n).unwrap();
        assert_eq!(pkg.quotient.domain_space().order(), Some(2));
        assert!(pkg
            .quotient
            .realizes_same(&Gca::classical(LocalRule::identity(
                pkg.quotient.domain_space().clone(),
                Alphabet::binary()
            ))));

        // XOR descends to XOR on Z2.
        let xor = Gca::classical(xor_on(&z4, vec![0, 1]));
        let pkg = quotient_gca(&xor, &n).unwrap();
        let q_group = pkg.quotient.domain_space().clone();
        let q_xor = Gca::classical(xor_on(&q_group, vec![0, 1]));
        assert!(pkg.quotient.realizes_same(&q_xor));

        // Constants descend to constants.
        let constant = Gca::classical(
            LocalRule::constant(z4.clone(), Alphabet::binary(), vec![Element::Finite(0)], 1)
                .unwrap(),
        );
        let pkg = quotient_gca(&constant, &n).unwrap();
        assert!(pkg.quotient.is_constant());
    }

    #[test]
    fn quotient_functoriality_examples() {
        let z4 = build_cyclic(4).unwrap();
        let n = Subgroup::from_elements(z4.clone(), &[0, 2]).unwrap();
        let ident = Gca::classical(LocalRule::identity(z4.clone(), Alphabet::binary()));
        assert!(quotient_functoriality_check(&z4, &n, std::slice::from_ref(&ident)).unwrap());

        let xor = Gca::classical(xor_on(&z4, vec![0, 1]));
        let shift1 = Gca::classical(
            LocalRule::read_at(z4.clone(), Alphabet::binary(), Element::Finite(1)).unwrap(),
        );
        let dbl = Homomorphism::from_table(z4.clone(), z4.clone(), vec![0, 2, 0, 2]).unwrap();
        let dbl_gca = Gca::new(dbl, xor_on(&z4, vec![0, 1])).unwrap();
        assert!(quotient_functoriality_check(&z4, &n, &[xor, shift1, dbl_gca]).unwrap());
    }

    #[test]
    fn restrict_examples() {
        let z4 = build_cyclic(4).unwrap();
        // Memory {0, 2} inside K = {0, 2}.
        let rule = xor_on(&z4, vec![0, 2]);
        let t = Gca::classical(rule);
        let k = Subgroup::from_elements(z4.clone(), &[0, 2]).unwrap();
        let pkg = restrict(&t, &k).unwrap();
        assert_eq!(pkg.restricted.domain_space().order(), Some(2));
        // The restricted rule is the full XOR of the order-2 group.
        let sub = pkg.restricted.domain_space().clone();
        assert!(pkg
            .restricted
            .realizes_same(&Gca::classical(xor_on(&sub, vec![0, 1]))));

        // K = H with a surjective phi: same map up to relabelling.
        let whole = Subgroup::from_elements(z4.clone(), &[0, 1, 2, 3]).unwrap();
        let t = Gca::classical(xor_on(&z4, vec![0, 1]));
        let pkg = restrict(&t, &whole).unwrap();
        assert_eq!(pkg.restricted.domain_space().order(), Some(4));

        // Memory outside phi(K) is rejected.
        let k = Subgroup::from_elements(z4.clone(), &[0, 2]).unwrap();
        assert!(matches!(
            restrict(&Gca::classical(xor_on(&z4, vec![0, 1])), &k),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn restrict_lattice_example() {
        // G = H = Z, phi = id, K = 2Z, memory {0, 2} -> memory {0, 1} on Z.
        let z = Group::free_abelian(1);
        let rule = LocalRule::sum_mod_q(
            z.clone(),
            Alphabet::binary(),
            vec![Element::Free(vec![0]), Element::Free(vec![2])],
        )
        .unwrap();
        let t = Gca::classical(rule);
        let k = Subgroup::lattice(z.clone(), vec![vec![2]]).unwrap();
        let pkg = restrict(&t, &k).unwrap();
        assert_eq!(
            pkg.restricted.rule().memory(),
            &[Element::Free(vec![0]), Element::Free(vec![1])]
        );
        // The restricted homomorphism is the identity of Z in these bases.
        assert!(pkg.restricted.phi().is_injective().unwrap());
        assert!(pkg.restricted.phi().is_surjective().unwrap());
    }

    #[test]
    fn induction_roundtrips() {
        let z4 = build_cyclic(4).unwrap();
        let k = Subgroup::from_elements(z4.clone(), &[0, 2]).unwrap();

        // Restrict then induce is the identity.
        let t = Gca::classical(xor_on(&z4, vec![0, 2]));
        let pkg = restrict(&t, &k).unwrap();
        let back = induce(&pkg.restricted, &k, t.phi()).unwrap();
        assert!(back.realizes_same(&t));
        assert_eq!(back.rule().memory(), t.rule().memory());

        // Induce then restrict is the identity.
        let again = restrict(&back, &k).unwrap();
        assert!(again.restricted.realizes_same(&pkg.restricted));

        // Identity rule on the subgroup induces the pullback.
        let z2 = build_cyclic(2).unwrap();
        let red = Homomorphism::from_table(z4.clone(), z2.clone(), vec![0, 1, 0, 1]).unwrap();
        let whole = Subgroup::from_elements(z4.clone(), &[0, 1, 2, 3]).unwrap();
        let pull = ca::pullback_with(&red, Alphabet::binary());
        let pkg = restrict(&pull, &whole).unwrap();
        let induced = induce(&pkg.restricted, &whole, &red).unwrap();
        assert!(induced.realizes_same(&pull));
    }

    #[test]
    fn restriction_composition_examples() {
        let z4 = build_cyclic(4).unwrap();
        let k = Subgroup::from_elements(z4.clone(), &[0, 2]).unwrap();

        // Identity chain.
        let ident = Gca::classical(LocalRule::identity(z4.clone(), Alphabet::binary()));
        assert!(restriction_composition_check(&ident, &ident, &k).unwrap());

        // XOR-style rules with memories inside K.
        let a = Gca::classical(xor_on(&z4, vec![0, 2]));
        let b = Gca::classical(
            LocalRule::read_at(z4.clone(), Alphabet::binary(), Element::Finite(2)).unwrap(),
        );
        assert!(restriction_composition_check(&a, &b, &k).unwrap());
        assert!(restriction_composition_check(&b, &a, &k).unwrap());

        // A chain through phi(x) = 2x with single-cell memories at 0.
        let dbl = Homomorphism::from_table(z4.clone(), z4.clone(), vec![0, 2, 0, 2]).unwrap();
        let t = Gca::new(
            dbl.clone(),
            LocalRule::read_at(z4.clone(), Alphabet::binary(), Element::Finite(0)).unwrap(),
        )
        .unwrap();
        assert!(restriction_composition_check(&t, &t, &k).unwrap());
    }

    #[test]
    fn transfer_examples() {
        let z4 = build_cyclic(4).unwrap();
        let whole = Subgroup::from_elements(z4.clone(), &[0, 1, 2, 3]).unwrap();

        // Identity automaton, K = G.
        let ident = Gca::classical(LocalRule::identity(z4.clone(), Alphabet::binary()));
        let r = transfer_theorem_check(&ident, &whole).unwrap();
        assert!(r.original_injective && r.original_surjective);
        assert!(r.restricted_injective && r.phi_surjective);

        // Pullback of the surjective reduction Z4 -> Z2, K = Z4.
        let z2 = build_cyclic(2).unwrap();
        let red = Homomorphism::from_table(z4.clone(), z2.clone(), vec![0, 1, 0, 1]).unwrap();
        let pull = ca::pullback_with(&red, Alphabet::binary());
        let r = transfer_theorem_check(&pull, &whole).unwrap();
        assert!(r.original_injective && !r.original_surjective);
        assert!(r.restricted_injective && r.phi_surjective);

        // Non-injective XOR with memory {0, 2}, K = {0, 2}: the failure must
        // show up on the restricted side or in phi.
        let k = Subgroup::from_elements(z4.clone(), &[0, 2]).unwrap();
        let xor = Gca::classical(xor_on(&z4, vec![0, 2]));
        let r = transfer_theorem_check(&xor, &k).unwrap();
        assert!(!r.original_injective);
        assert!(!r.restricted_injective || !r.phi_surjective);
    }

    #[test]
    fn submonoid_examples() {
        let z4 = build_cyclic(4).unwrap();
        let k = Subgroup::from_elements(z4.clone(), &[0, 2]).unwrap();
        assert!(gca_submonoid_check(&z4, &k, 2).unwrap());

        let whole = Subgroup::from_elements(z4.clone(), &[0, 1, 2, 3]).unwrap();
        assert!(gca_submonoid_check(&z4, &whole, 2).unwrap());

        // The subgroup generated by a transposition in S3 is not fully
        // invariant; a composition escapes it.
        let s3 = Group::symmetric(3).unwrap();
        let k = Subgroup::generated(s3.clone(), &[2]).unwrap();
        assert_eq!(k.order(), Some(2));
        assert!(!gca_submonoid_check(&s3, &k, 2).unwrap());
    }
}
