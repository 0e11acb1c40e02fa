//! The weight spectral sequence of the L2 complex at a cusp.
//!
//! `E_1^{p,q} = H^{p+q}(Gr_{-p})`, where the weight `-p` piece behaves like a
//! sum of rank-one pieces with norm exponent `k = -p`. Each slot is filled from
//! [`stalk_row`]. `d_1` vanishes because `N W_l ⊆ W_{l-2}`; `d_2` is induced
//! by `N` between graded pieces two weights apart and is computed exactly.
//! Everything is supported in total degree zero from `E_3` on.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::cohomology::{stalk_row, StalkDescriptor};
use crate::error::{Error, Result};
use crate::monodromy::NilpotentEndomorphism;
use crate::weight_filtration::{build_weight_filtration, WeightFiltration};

#[derive(Debug, Clone)]
pub struct FilteredComplexModel {
    filtration: WeightFiltration,
    piece_exponents: BTreeMap<i64, i64>,
    graded_piece_dims: BTreeMap<i64, usize>,
}

impl FilteredComplexModel {
    pub fn new(filtration: WeightFiltration) -> Self {
        let graded_piece_dims = filtration.graded_dimensions();
        let piece_exponents = graded_piece_dims.keys().map(|&l| (l, l)).collect();
        Self {
            filtration,
            piece_exponents,
            graded_piece_dims,
        }
    }

    pub fn from_nilpotent(n: &NilpotentEndomorphism) -> Self {
        Self::new(build_weight_filtration(n))
    }

    pub fn filtration(&self) -> &WeightFiltration {
        &self.filtration
    }

    pub fn piece_exponents(&self) -> &BTreeMap<i64, i64> {
        &self.piece_exponents
    }

    pub fn graded_piece_dims(&self) -> &BTreeMap<i64, usize> {
        &self.graded_piece_dims
    }

    /// Checks that every frame vector of weight `l` has `vector_weight == l`
    /// and that the piece exponent recorded for `l` is `l`.
    pub fn exponents_consistent(&self) -> bool {
        let frame = self.filtration.model_frame();
        frame
            .vectors
            .iter()
            .zip(&frame.exponents)
            .all(|(v, &w)| self.filtration.vector_weight(v).ok() == Some(w) && self.piece_exponents.get(&w) == Some(&w))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EntryValue {
    Dim {
        dim: usize,
    },
    /// `copies` symbolic `M_1` classes; they only cancel against each other.
    Obstruction {
        copies: usize,
    },
}

impl EntryValue {
    pub fn count(&self) -> usize {
        match *self {
            EntryValue::Dim { dim } => dim,
            EntryValue::Obstruction { copies } => copies,
        }
    }

    fn with_count(&self, count: usize) -> Self {
        match self {
            EntryValue::Dim { .. } => EntryValue::Dim { dim: count },
            EntryValue::Obstruction { .. } => EntryValue::Obstruction { copies: count },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PageEntry {
    pub p: i64,
    pub q: i64,
    pub value: EntryValue,
    pub descriptor: StalkDescriptor,
}

impl PageEntry {
    pub fn total_degree(&self) -> i64 {
        self.p + self.q
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Differential {
    pub source: (i64, i64),
    pub target: (i64, i64),
    pub rank: usize,
    pub iso: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectralPage {
    pub page_index: u32,
    /// Nonzero entries sorted by `(p, q)`.
    pub entries: Vec<PageEntry>,
    /// Differentials leaving this page, `(p, q) -> (p + r, q - r + 1)`.
    pub differentials: Vec<Differential>,
}

impl SpectralPage {
    pub fn entry(&self, p: i64, q: i64) -> Option<&PageEntry> {
        self.entries.iter().find(|e| e.p == p && e.q == q)
    }

    pub fn count(&self, p: i64, q: i64) -> usize {
        self.entry(p, q).map_or(0, |e| e.value.count())
    }

    /// Sum of entry counts over `p + q = d`.
    pub fn degree_total(&self, d: i64) -> usize {
        self.entries
            .iter()
            .filter(|e| e.total_degree() == d)
            .map(|e| e.value.count())
            .sum()
    }

    fn arrows_for(&self, r: i64, rank: impl Fn(&PageEntry, &PageEntry) -> usize) -> Vec<Differential> {
        let mut out = Vec::new();
        for src in &self.entries {
            let (tp, tq) = (src.p + r, src.q - r + 1);
            if let Some(tgt) = self.entry(tp, tq) {
                let rank = rank(src, tgt);
                out.push(Differential {
                    source: (src.p, src.q),
                    target: (tp, tq),
                    rank,
                    iso: rank == src.value.count() && rank == tgt.value.count(),
                });
            }
        }
        out
    }
}

pub fn build_e1(model: &FilteredComplexModel) -> SpectralPage {
    let mut entries = Vec::new();
    for (&l, &dim) in &model.graded_piece_dims {
        let p = -l;
        let row = stalk_row(model.piece_exponents[&l]);
        for degree in 0..=2 {
            let descriptor = row.degree(degree);
            let value = match descriptor {
                StalkDescriptor::Zero => continue,
                StalkDescriptor::M1Obstruction => EntryValue::Obstruction { copies: dim },
                _ => EntryValue::Dim { dim },
            };
            entries.push(PageEntry {
                p,
                q: degree as i64 - p,
                value,
                descriptor,
            });
        }
    }
    entries.sort_by_key(|e| (e.p, e.q));
    let mut page = SpectralPage {
        page_index: 1,
        entries,
        differentials: Vec::new(),
    };
    page.differentials = page.arrows_for(1, |_, _| 0);
    page
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Inclusion {
    pub p: i64,
    /// `N W_{source_weight} ⊆ W_{target_weight}`.
    pub source_weight: i64,
    pub target_weight: i64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct D1Certificate {
    pub inclusions: Vec<Inclusion>,
}

/// Verifies `N W_{-p} ⊆ W_{-p-2}` for every nonempty weight `-p`.
pub fn check_d1_trivial(model: &FilteredComplexModel) -> Result<D1Certificate> {
    let wf = &model.filtration;
    let n = wf.source().matrix();
    let inclusions: Vec<Inclusion> = model
        .graded_piece_dims
        .keys()
        .rev()
        .map(|&l| Inclusion {
            p: -l,
            source_weight: l,
            target_weight: l - 2,
            holds: wf.subspace(l).image(n).is_subspace_of(&wf.subspace(l - 2)),
        })
        .collect();
    if let Some(bad) = inclusions.iter().find(|i| !i.holds) {
        return Err(Error::Structure(format!(
            "N W_{} is not contained in W_{}",
            bad.source_weight, bad.target_weight
        )));
    }
    Ok(D1Certificate { inclusions })
}

/// `E_2 = E_1` with the `d_2` arrows attached.
pub fn e2_page(e1: &SpectralPage, model: &FilteredComplexModel) -> SpectralPage {
    let mut page = SpectralPage {
        page_index: 2,
        entries: e1.entries.clone(),
        differentials: Vec::new(),
    };
    page.differentials = page.arrows_for(2, |src, tgt| {
        let same_kind = std::mem::discriminant(&src.value) == std::mem::discriminant(&tgt.value);
        if same_kind {
            model.filtration.induced_rank(1, -src.p)
        } else {
            0
        }
    });
    page
}

/// Takes the `E_2` page (or `E_1`, whose `d_1` is zero) and returns `E_3`.
pub fn apply_d2(page: &SpectralPage, model: &FilteredComplexModel) -> SpectralPage {
    let e2 = if page.page_index == 2 && !page.differentials.is_empty() {
        page.clone()
    } else {
        e2_page(page, model)
    };
    let mut lost: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    for d in &e2.differentials {
        *lost.entry(d.source).or_default() += d.rank;
        *lost.entry(d.target).or_default() += d.rank;
    }
    let entries = e2
        .entries
        .iter()
        .filter_map(|e| {
            let left = e.value.count() - lost.get(&(e.p, e.q)).copied().unwrap_or(0);
            (left > 0).then(|| PageEntry {
                value: e.value.with_count(left),
                ..e.clone()
            })
        })
        .collect();
    let mut e3 = SpectralPage {
        page_index: 3,
        entries,
        differentials: Vec::new(),
    };
    e3.differentials = e3.arrows_for(3, |_, _| 0);
    e3
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralRun {
    pub d1: D1Certificate,
    pub pages: [SpectralPage; 3],
}

pub fn run_pages(model: &FilteredComplexModel) -> Result<SpectralRun> {
    let d1 = check_d1_trivial(model)?;
    let e1 = build_e1(model);
    let e2 = e2_page(&e1, model);
    let e3 = apply_d2(&e2, model);
    Ok(SpectralRun {
        d1,
        pages: [e1, e2, e3],
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Survivor {
    pub p: i64,
    pub q: i64,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegenerationCertificate {
    pub stalk_h0: usize,
    pub stalk_h1: usize,
    pub stalk_h2: usize,
    pub survivor_positions: Vec<Survivor>,
    pub jordan_type: Vec<usize>,
}

/// Runs the pages once per Jordan block and adds up the survivors.
pub fn degeneration_certificate(model: &FilteredComplexModel) -> Result<DegenerationCertificate> {
    let wf = &model.filtration;
    let jordan_type: Vec<usize> = wf.strings().iter().map(Vec::len).collect();
    let runs = jordan_type
        .par_iter()
        .map(|&size| {
            run_pages(&FilteredComplexModel::from_nilpotent(
                &NilpotentEndomorphism::jordan_block(size),
            ))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut survivors: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    let mut totals = [0usize; 3];
    for run in &runs {
        for e in &run.pages[2].entries {
            let d = e.total_degree();
            if !(0..=2).contains(&d) {
                return Err(Error::Certification(format!(
                    "E_3 entry at ({}, {}) in degree {d}",
                    e.p, e.q
                )));
            }
            totals[d as usize] += e.value.count();
            *survivors.entry((e.p, e.q)).or_default() += e.value.count();
        }
    }
    if totals[1] != 0 || totals[2] != 0 {
        return Err(Error::Certification(format!(
            "E_3 survivors in positive degree: h1 = {}, h2 = {}",
            totals[1], totals[2]
        )));
    }
    let kernel_dim = wf.source().kernel().dim();
    if totals[0] != kernel_dim {
        return Err(Error::Certification(format!(
            "E_3 degree-zero total {} differs from dim ker N = {kernel_dim}",
            totals[0]
        )));
    }
    Ok(DegenerationCertificate {
        stalk_h0: totals[0],
        stalk_h1: totals[1],
        stalk_h2: totals[2],
        survivor_positions: survivors
            .into_iter()
            .map(|((p, q), dim)| Survivor { p, q, dim })
            .collect(),
        jordan_type,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralReport {
    pub graded_dims: BTreeMap<i64, usize>,
    pub d1: D1Certificate,
    pub pages: [SpectralPage; 3],
    pub certificate: DegenerationCertificate,
}

pub fn spectral_report(model: &FilteredComplexModel) -> Result<SpectralReport> {
    let run = run_pages(model)?;
    Ok(SpectralReport {
        graded_dims: model.graded_piece_dims.clone(),
        d1: run.d1,
        pages: run.pages,
        certificate: degeneration_certificate(model)?,
    })
}

/// Terminal grid: `q` decreasing downwards, `p` increasing rightwards.
/// Cells show a dimension, `M×c` for `c` obstruction classes, or `.`.
pub fn render_page(page: &SpectralPage) -> String {
    let mut out = format!("E_{}\n", page.page_index);
    if page.entries.is_empty() {
        out.push_str("  (empty)\n");
        return out;
    }
    let (pmin, pmax) = minmax(page.entries.iter().map(|e| e.p));
    let (qmin, qmax) = minmax(page.entries.iter().map(|e| e.q));
    let cell = |p: i64, q: i64| match page.entry(p, q).map(|e| e.value) {
        None => ".".to_string(),
        Some(EntryValue::Dim { dim }) => dim.to_string(),
        Some(EntryValue::Obstruction { copies }) => format!("M×{copies}"),
    };
    let width = (pmin..=pmax)
        .flat_map(|p| (qmin..=qmax).map(move |q| (p, q)))
        .map(|(p, q)| cell(p, q).chars().count())
        .chain((pmin..=pmax).map(|p| p.to_string().len()))
        .max()
        .unwrap_or(1)
        + 1;
    for q in (qmin..=qmax).rev() {
        let _ = write!(out, "{q:>4} |");
        for p in pmin..=pmax {
            let _ = write!(out, "{:>width$}", cell(p, q));
        }
        out.push('\n');
    }
    let _ = write!(out, "     +{}\n   p  ", "-".repeat(width * (pmax - pmin + 1) as usize));
    for p in pmin..=pmax {
        let _ = write!(out, "{p:>width$}");
    }
    out.push('\n');
    for d in &page.differentials {
        if d.rank > 0 {
            let _ = writeln!(
                out,
                "  d_{}: ({}, {}) -> ({}, {}) rank {}{}",
                page.page_index,
                d.source.0,
                d.source.1,
                d.target.0,
                d.target.1,
                d.rank,
                if d.iso { " iso" } else { "" }
            );
        }
    }
    out
}

fn minmax(it: impl Iterator<Item = i64>) -> (i64, i64) {
    it.fold((i64::MAX, i64::MIN), |(lo, hi), x| (lo.min(x), hi.max(x)))
}
