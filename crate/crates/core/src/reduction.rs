//! Partial traces: the native fermionic route and the qubit route through an
//! ordering, the equivalence check between them, and the exhaustive scan of
//! how the qubit route depends on the ordering.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

pub use crate::bipartition::BipartitionSpec;
use crate::bipartition::{compress_bits, expand_bits};
use crate::error::{Error, Result};
use crate::fock::{act_sequence, DensityOperator, LadderKind, ModeSystem, OperatorString};
use crate::numerics::{trace_distance, ComplexMatrix};
use crate::ordering::{
    inverse_image_restricted, is_physical, kept_block_contiguous, qubit_image, ModeOrdering,
    QubitRepr, QubitState,
};

/// Largest system the ordering scan enumerates (N! orderings).
pub const MAX_SCAN_MODES: usize = 8;

/// Fermionic partial trace over the traced modes:
///
/// `Tr_c(rho) = sum_j <0_c| c_m^{j_m} .. c_1^{j_1} rho (c_1^+)^{j_1} .. (c_m^+)^{j_m} |0_c>`
///
/// Every sign comes from applying the annihilator products to basis kets
/// through [`act_sequence`]. Inputs that break the parity superselection rule
/// are reduced all the same; the result is then only one of several
/// inequivalent candidates.
pub fn fermionic_partial_trace(rho: &DensityOperator, bp: &BipartitionSpec) -> Result<DensityOperator> {
    let system = rho.system();
    bp.check_system(system)?;
    let kept_system = bp.kept_system(system)?;
    let kept = bp.kept_positions();
    let traced = bp.traced_positions();
    let traced_mask = bp.traced_mask();
    let m = rho.matrix();
    let mut out = ComplexMatrix::zeros(kept_system.dim());

    for j in 0..(1usize << traced.len()) {
        // c_m^{j_m} ... c_1^{j_1}
        let factors: Vec<(String, LadderKind)> = traced
            .iter()
            .enumerate()
            .rev()
            .filter(|(i, _)| j >> i & 1 == 1)
            .map(|(_, &p)| (system.label(p).to_string(), LadderKind::Annihilation))
            .collect();
        let ops = OperatorString::new(factors).resolve(system)?;

        // surviving kets: (row index, sign, kept index)
        let surviving: Vec<(usize, f64, usize)> = (0..system.dim())
            .filter_map(|k| {
                let (sign, image) = act_sequence(&ops, k)?;
                (image & traced_mask == 0).then(|| (k, f64::from(sign), compress_bits(image, kept)))
            })
            .collect();

        for &(k, sk, ka) in &surviving {
            for &(l, sl, la) in &surviving {
                let z = m[(k, l)];
                if z != Complex64::new(0.0, 0.0) {
                    out[(ka, la)] += z * (sk * sl);
                }
            }
        }
    }
    Ok(DensityOperator::from_parts(kept_system, out))
}

/// Ordinary multi-qubit partial trace over the traced positions.
pub fn qubit_partial_trace(q: &QubitState, bp: &BipartitionSpec) -> Result<QubitState> {
    let system = q.system();
    bp.check_system(system)?;
    let kept_system = bp.kept_system(system)?;
    let kept = bp.kept_positions();
    let traced = bp.traced_positions();
    let kept_expanded: Vec<usize> = (0..kept_system.dim()).map(|i| expand_bits(i, kept)).collect();
    let mut out = ComplexMatrix::zeros(kept_system.dim());

    match q.repr() {
        QubitRepr::Mixed(m) => {
            for j in 0..(1usize << traced.len()) {
                let tj = expand_bits(j, traced);
                for (ka, &ke) in kept_expanded.iter().enumerate() {
                    for (la, &le) in kept_expanded.iter().enumerate() {
                        out[(ka, la)] += m[(ke | tj, le | tj)];
                    }
                }
            }
        }
        QubitRepr::Pure(v) => {
            for j in 0..(1usize << traced.len()) {
                let tj = expand_bits(j, traced);
                for (ka, &ke) in kept_expanded.iter().enumerate() {
                    let x = v[ke | tj];
                    for (la, &le) in kept_expanded.iter().enumerate() {
                        out[(ka, la)] += x * v[le | tj].conj();
                    }
                }
            }
        }
    }
    let ordering = q.ordering().restricted_to(&kept_system)?;
    QubitState::new(kept_system, ordering, QubitRepr::Mixed(out))
}

/// Reduction through the qubit image of `ordering`:
/// map, trace the traced qubits, map the kept part back.
///
/// Equivalent to [`qubit_image`], [`qubit_partial_trace`] and
/// [`inverse_image_restricted`] in sequence, but only visits the entries that
/// survive the trace. The floating-point operations are the same, so the
/// result is bit-identical to the composed route.
pub fn qubit_route_reduction(
    rho: &DensityOperator,
    bp: &BipartitionSpec,
    ordering: &ModeOrdering,
) -> Result<DensityOperator> {
    let system = rho.system();
    bp.check_system(system)?;
    if ordering.n_modes() != system.n_modes()
        || ordering.labels().iter().zip(ordering.positions()).any(|(l, &p)| system.label(p) != l)
    {
        return Err(Error::InvalidOrdering(format!(
            "ordering {:?} does not belong to system {:?}",
            ordering.labels(),
            system.labels()
        )));
    }
    let kept_system = bp.kept_system(system)?;
    let kept_ordering = ordering.restricted_to(&kept_system)?;
    let kept = bp.kept_positions();
    let traced = bp.traced_positions();
    let kept_expanded: Vec<usize> = (0..kept_system.dim()).map(|i| expand_bits(i, kept)).collect();
    let m = rho.matrix();
    let mut out = ComplexMatrix::zeros(kept_system.dim());
    for j in 0..(1usize << traced.len()) {
        let tj = expand_bits(j, traced);
        let signs: Vec<i8> = kept_expanded.iter().map(|&ke| ordering.sign(ke | tj)).collect();
        for (ka, &ke) in kept_expanded.iter().enumerate() {
            for (la, &le) in kept_expanded.iter().enumerate() {
                out[(ka, la)] += m[(ke | tj, le | tj)] * f64::from(signs[ka] * signs[la]);
            }
        }
    }
    let kept_signs: Vec<i8> = (0..kept_system.dim()).map(|b| kept_ordering.sign(b)).collect();
    for ka in 0..kept_system.dim() {
        for la in 0..kept_system.dim() {
            out[(ka, la)] *= f64::from(kept_signs[ka] * kept_signs[la]);
        }
    }
    Ok(DensityOperator::from_parts(kept_system, out))
}

/// The qubit route as three explicit steps.
pub fn qubit_route_reduction_composed(
    rho: &DensityOperator,
    bp: &BipartitionSpec,
    ordering: &ModeOrdering,
) -> Result<DensityOperator> {
    let image = qubit_image(rho, ordering)?;
    let reduced = qubit_partial_trace(&image, bp)?;
    inverse_image_restricted(&reduced, ordering)
}

/// Outcome of comparing the two reduction routes.
#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub max_entry_diff: f64,
    pub trace_distance: f64,
    pub ssr_compliant: bool,
    pub ordering_used: ModeOrdering,
    pub bipartition: BipartitionSpec,
    pub physical_ordering: bool,
}

impl TheoremReport {
    /// Both routes agree within `tol`.
    pub fn agrees(&self, tol: f64) -> bool {
        self.max_entry_diff < tol
    }
}

/// Compares the fermionic partial trace with the qubit route of `ordering`.
///
/// Non-physical orderings are rejected unless `force` is set.
pub fn theorem_check(
    rho: &DensityOperator,
    bp: &BipartitionSpec,
    ordering: &ModeOrdering,
    force: bool,
) -> Result<TheoremReport> {
    let physical = is_physical(ordering, bp);
    if !physical && !force {
        return Err(Error::NonPhysicalOrdering(ordering.labels().to_vec()));
    }
    let fermionic = fermionic_partial_trace(rho, bp)?;
    let qubit = qubit_route_reduction(rho, bp, ordering)?;
    Ok(TheoremReport {
        max_entry_diff: fermionic.matrix().max_abs_diff(qubit.matrix())?,
        trace_distance: trace_distance(fermionic.matrix(), qubit.matrix())?,
        ssr_compliant: rho.ssr_compliant(),
        ordering_used: ordering.clone(),
        bipartition: bp.clone(),
        physical_ordering: physical,
    })
}

/// For each (kept, traced) pair, whether the traced mode comes first.
///
/// The qubit-route reduction depends on the ordering only through this
/// relation: the sign picked up by entry `(k, l)` of the reduced state for
/// traced pattern `j` is `(-1)^{X(k, j) + X(l, j)}`, where `X` counts the
/// (occupied kept, occupied traced) pairs in which the traced mode precedes.
pub fn cross_precedence(ordering: &ModeOrdering, bp: &BipartitionSpec) -> u64 {
    let rank = ordering.ranks();
    let m = bp.traced_positions().len();
    let mut sig = 0u64;
    for (i, &a) in bp.kept_positions().iter().enumerate() {
        for (j, &c) in bp.traced_positions().iter().enumerate() {
            if rank[c] < rank[a] {
                sig |= 1 << (i * m + j);
            }
        }
    }
    sig
}

/// One group of orderings with identical qubit-route reduced states.
#[derive(Clone, Debug, Serialize)]
pub struct OrderingClass {
    pub representative: ModeOrdering,
    /// Number of orderings in the class.
    pub members: usize,
    /// How many members place every kept mode before every traced mode.
    pub physical_members: usize,
    /// How many members keep the kept modes in consecutive slots.
    pub contiguous_members: usize,
    pub matches_fermionic: bool,
    pub reduced: ComplexMatrix,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub bipartition: BipartitionSpec,
    pub ssr_compliant: bool,
    pub orderings_total: usize,
    /// Distinct cross-precedence relations among all orderings.
    pub signatures: usize,
    /// Extra members re-reduced to confirm the signature determines the result.
    pub invariance_samples: usize,
    pub invariance_holds: bool,
    pub fermionic: ComplexMatrix,
    pub classes: Vec<OrderingClass>,
}

impl ScanReport {
    pub fn fermionic_class(&self) -> Option<&OrderingClass> {
        self.classes.iter().find(|c| c.matches_fermionic)
    }
}

struct SignatureGroup {
    representative: Vec<usize>,
    sample: Option<Vec<usize>>,
    members: usize,
    physical: usize,
    contiguous: usize,
}

/// Enumerates all orderings of the system, groups them by the reduced state
/// they produce, and marks the groups agreeing with the fermionic trace.
///
/// Orderings are first bucketed by [`cross_precedence`]; one reduction per
/// bucket suffices, and for every bucket with more than one member the last
/// enumerated member is reduced as well to confirm the bucket is uniform.
/// `tol` is the entrywise tolerance for matching the fermionic trace; classes
/// themselves are formed by exact equality.
pub fn ordering_scan(rho: &DensityOperator, bp: &BipartitionSpec, tol: f64) -> Result<ScanReport> {
    let system = rho.system();
    bp.check_system(system)?;
    let n = system.n_modes();
    if n > MAX_SCAN_MODES {
        return Err(Error::SystemTooLarge {
            modes: n,
            limit: MAX_SCAN_MODES,
        });
    }

    let mut groups: BTreeMap<u64, SignatureGroup> = BTreeMap::new();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = 0;
    loop {
        let ordering = ModeOrdering::from_positions(system, perm.clone())?;
        let sig = cross_precedence(&ordering, bp);
        let physical = is_physical(&ordering, bp);
        let contiguous = kept_block_contiguous(&ordering, bp);
        let g = groups.entry(sig).or_insert_with(|| SignatureGroup {
            representative: perm.clone(),
            sample: None,
            members: 0,
            physical: 0,
            contiguous: 0,
        });
        if g.members > 0 {
            g.sample = Some(perm.clone());
        }
        g.members += 1;
        g.physical += usize::from(physical);
        g.contiguous += usize::from(contiguous);
        total += 1;
        if !next_permutation(&mut perm) {
            break;
        }
    }

    let fermionic = fermionic_partial_trace(rho, bp)?;
    let mut classes: Vec<OrderingClass> = Vec::new();
    let mut samples = 0;
    let mut invariance_holds = true;
    for g in groups.values() {
        let rep = ModeOrdering::from_positions(system, g.representative.clone())?;
        let reduced = qubit_route_reduction(rho, bp, &rep)?;
        if let Some(sample) = &g.sample {
            let other = ModeOrdering::from_positions(system, sample.clone())?;
            let check = qubit_route_reduction(rho, bp, &other)?;
            samples += 1;
            invariance_holds &= check.matrix() == reduced.matrix();
        }
        let reduced = reduced.into_matrix();
        match classes.iter_mut().find(|c| c.reduced == reduced) {
            Some(c) => {
                c.members += g.members;
                c.physical_members += g.physical;
                c.contiguous_members += g.contiguous;
            }
            None => classes.push(OrderingClass {
                matches_fermionic: reduced.max_abs_diff(fermionic.matrix())? < tol,
                representative: rep,
                members: g.members,
                physical_members: g.physical,
                contiguous_members: g.contiguous,
                reduced,
            }),
        }
    }
    // largest class first, ties by representative
    classes.sort_by(|x, y| {
        y.members
            .cmp(&x.members)
            .then_with(|| x.representative.positions().cmp(y.representative.positions()))
    });

    Ok(ScanReport {
        bipartition: bp.clone(),
        ssr_compliant: rho.ssr_compliant(),
        orderings_total: total,
        signatures: groups.len(),
        invariance_samples: samples,
        invariance_holds,
        fermionic: fermionic.into_matrix(),
        classes,
    })
}

/// Every ordering of the system, in lexicographic order of mode positions.
pub fn all_orderings(system: &ModeSystem) -> Result<Vec<ModeOrdering>> {
    let n = system.n_modes();
    if n > MAX_SCAN_MODES {
        return Err(Error::SystemTooLarge {
            modes: n,
            limit: MAX_SCAN_MODES,
        });
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    loop {
        out.push(ModeOrdering::from_positions(system, perm.clone())?);
        if !next_permutation(&mut perm) {
            return Ok(out);
        }
    }
}

/// Lexicographic successor; returns false after the last permutation.
fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Convenience: a system's default `a | c` bipartition with its identity ordering.
pub fn default_split(system: &ModeSystem) -> Result<(BipartitionSpec, ModeOrdering)> {
    Ok((BipartitionSpec::from_system(system)?, ModeOrdering::identity(system)))
}
