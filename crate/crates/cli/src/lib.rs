//! Verification suites behind the `fadcert` binary. Each suite returns a
//! [`RunReport`] whose items are sorted by label.

use std::fmt::Write as _;

use anyhow::{bail, Result};
use fadcert_core::bounds::{
    conjugate_families, embed_and_check_yprime, fa_bounds, nielsen_path_count, sweep,
    verify_simple_implies_general, BoundReport, Group, Variant,
};
use fadcert_core::convex::{
    self, feasible, fmt_point, helly_check, random_box_family, random_family, swelling,
    triangle_edges, ConvexBody, ConvexError, HellyVerdict, RationalBox,
};
use fadcert_core::genset::{
    builtin_genset, certify_chain_generation, certify_memberships, certify_pairwise_finite,
    certify_set_finite, compare_with_figure, figure_y2_edges, figure_y4_edges, pair_order_table,
    replay_records, Chain, GenSetName, Status, Y2_NIELSEN, Y4_NIELSEN,
};
use fadcert_core::simplicial::{
    compositions_up_to, join_of_boundaries, verify_join_nerve, CylinderModel, SimplicialComplex,
};
use fadcert_core::Order;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_RANKS: [usize; 4] = [5, 6, 9, 10];
pub const HELLY_TRIALS: usize = 500;
pub const SWELLING_TRIALS: usize = 200;
pub const NERVE_JOIN_TRIALS: usize = 100;
pub const JOIN_MAX_TOTAL: u32 = 6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Item {
    pub label: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunReport {
    pub suite: String,
    pub seed: Option<u64>,
    pub items: Vec<Item>,
}

impl RunReport {
    pub fn new(suite: &str, seed: Option<u64>) -> Self {
        RunReport {
            suite: suite.to_string(),
            seed,
            items: Vec::new(),
        }
    }

    pub fn check(&mut self, label: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.items.push(Item {
            label: label.into(),
            status: if ok { Status::Verified } else { Status::Failed },
            detail: detail.into(),
        });
    }

    pub fn skip(&mut self, label: impl Into<String>, detail: impl Into<String>) {
        self.items.push(Item {
            label: label.into(),
            status: Status::Skipped,
            detail: detail.into(),
        });
    }

    fn finish(mut self) -> Self {
        self.items.sort_by(|a, b| a.label.cmp(&b.label));
        self
    }

    pub fn failed(&self) -> usize {
        self.count(Status::Failed)
    }

    pub fn count(&self, status: Status) -> usize {
        self.items.iter().filter(|i| i.status == status).count()
    }

    pub fn item(&self, label: &str) -> Option<&Item> {
        self.items.iter().find(|i| i.label == label)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "suite {}", self.suite);
        if let Some(seed) = self.seed {
            let _ = write!(out, " (seed {seed})");
        }
        out.push('\n');
        for i in &self.items {
            let _ = writeln!(out, "  [{}] {}  {}", i.status, i.label, i.detail);
        }
        let _ = writeln!(
            out,
            "  {} verified, {} failed, {} skipped",
            self.count(Status::Verified),
            self.failed(),
            self.count(Status::Skipped)
        );
        out
    }
}

/// Replay every fixture relation of both chains at each rank.
pub fn relations(ns: &[usize]) -> Result<RunReport> {
    let mut report = RunReport::new("relations", None);
    for &n in ns {
        for chain in [Chain::Aut, Chain::SAut] {
            if chain == Chain::SAut && n < chain.min_rank() && n >= Chain::Aut.min_rank() {
                report.skip(format!("{chain}/n{n}"), "rank below the SAut chain");
                continue;
            }
            for r in replay_records(chain, n)? {
                report.items.push(Item {
                    label: format!("{chain}/n{n}/{}", r.label),
                    status: r.status,
                    detail: format!("{} = {}", r.lhs, r.rhs),
                });
            }
        }
    }
    Ok(report.finish())
}

/// Membership lines and generation witnesses of both chains.
pub fn generation(ns: &[usize]) -> Result<RunReport> {
    let mut report = RunReport::new("generation", None);
    for &n in ns {
        for chain in [Chain::Aut, Chain::SAut] {
            if chain == Chain::SAut && n < chain.min_rank() && n >= Chain::Aut.min_rank() {
                report.skip(format!("{chain}/n{n}"), "rank below the SAut chain");
                continue;
            }
            let m = certify_memberships(chain, n)?;
            let done = m.steps.iter().filter(|s| s.status == Status::Verified).count();
            report.check(
                format!("membership/{chain}/n{n}"),
                m.all_certified(),
                format!("{done}/{} membership lines certified", m.steps.len()),
            );
            let g = certify_chain_generation(chain, n)?;
            for e in &g.entries {
                report.items.push(Item {
                    label: format!("generation/{chain}/n{n}/{}", e.element),
                    status: e.status,
                    detail: match &e.witness {
                        Some(_) => format!("{} in <{}>, witness length {}", e.element, g.ambient, e.witness_length),
                        None => "no witness".into(),
                    },
                });
            }
        }
    }
    Ok(report.finish())
}

fn product_claims(set: GenSetName) -> Vec<(&'static str, &'static str, u32)> {
    match set {
        GenSetName::Y4 => vec![("e2e4rho12", "(x1,x2)e1e2e3", 6), ("e2e4rho12", "(x2,x3)e1", 4)],
        _ => Vec::new(),
    }
}

/// Orders, product-order claims, the drawn diagram and finiteness
/// certificates for `Y2`, `Y4` or `Yprime`.
pub fn pairs(set: GenSetName, n: usize, cutoff: u32, cap: usize) -> Result<RunReport> {
    if !matches!(set, GenSetName::Y2 | GenSetName::Y4 | GenSetName::YPrime) {
        bail!("pairs supports Y2, Y4 and Yprime, not {set}");
    }
    let gens = builtin_genset(set, n)?;
    let table = pair_order_table(&gens, cutoff)?;
    let mut report = RunReport::new(&format!("pairs {set} n={n}"), None);
    for (k, name) in table.names.iter().enumerate() {
        let order = table.orders[k][k];
        let ok = match set {
            GenSetName::Y2 => order == Order::Finite(2),
            _ => order.finite().is_some(),
        };
        report.check(format!("order/{name}"), ok, format!("ord = {order}"));
    }
    for (a, b, want) in product_claims(set) {
        let got = table.order_of(a, b).expect("names exist");
        report.check(
            format!("product/{a}*{b}"),
            got == Order::Finite(want),
            format!("ord = {got}, expected {want}"),
        );
    }
    let cells = table.cutoff_cells().len();
    report.check("cutoff", cells == 0, format!("{cells} cells exceed cutoff {cutoff}"));
    let figure = match set {
        GenSetName::Y2 => Some((figure_y2_edges(n), Some(3))),
        GenSetName::Y4 => Some((figure_y4_edges(n), None)),
        _ => None,
    };
    if let Some((edges, default_label)) = figure {
        let cmp = compare_with_figure(&table, &edges, default_label);
        let list = |v: &[(String, String)]| {
            v.iter().map(|(a, b)| format!("{a}--{b}")).collect::<Vec<_>>().join(", ")
        };
        report.check(
            "figure/drawn-edges-noncommuting",
            cmp.missing.is_empty() && cmp.unknown_vertices.is_empty(),
            format!("{} drawn edges; commuting: [{}]", edges.len(), list(&cmp.missing)),
        );
        report.check(
            "figure/non-adjacent-commute",
            cmp.extra.is_empty(),
            format!("{} computed edges; undrawn: [{}]", table.edges().len(), list(&cmp.extra)),
        );
        report.check(
            "figure/labels",
            cmp.label_mismatches.is_empty(),
            format!("{} label mismatches", cmp.label_mismatches.len()),
        );
    }
    for pc in certify_pairwise_finite(&gens, cutoff, cap)? {
        report.check(
            format!("pair/{}|{}", pc.a, pc.b),
            pc.certificate.is_certified(),
            format!("{:?}", pc.certificate),
        );
    }
    let nielsen = match set {
        GenSetName::Y2 => Y2_NIELSEN,
        _ => Y4_NIELSEN,
    };
    let rest = gens.without(nielsen);
    let cert = certify_set_finite(&rest, cap)?;
    report.check(
        format!("finite/{}", rest.name),
        matches!(cert, fadcert_core::genset::FinitenessCertificate::SignedPermutation { .. }),
        format!("{cert:?}"),
    );
    Ok(report.finish())
}

/// DOT graph of the commutation diagram.
pub fn diagram(set: GenSetName, n: usize, cutoff: u32) -> Result<String> {
    let table = pair_order_table(&builtin_genset(set, n)?, cutoff)?;
    if let Some(&(i, j)) = table.cutoff_cells().first() {
        bail!(
            "order of {}*{} exceeds cutoff {cutoff}",
            table.names[i],
            table.names[j]
        );
    }
    Ok(table.to_dot())
}

pub fn bound_report(n: u64, group: Group) -> Result<BoundReport> {
    Ok(fa_bounds(n, group)?)
}

pub fn bound_table(lo: u64, hi: u64, group: Group) -> Result<String> {
    let mut out = String::from("n\tmax_d_general\tmax_d_simple\trep_threshold\n");
    for r in sweep(lo, hi, group)? {
        let _ = writeln!(out, "{}\t{}\t{}\t{}", r.n, r.max_d_general, r.max_d_simple, r.rep_threshold);
    }
    Ok(out)
}

/// Required bound values, the exhaustive implication and the rank shift.
pub fn bounds_suite(cap: u64) -> Result<RunReport> {
    let mut report = RunReport::new("bounds", None);
    for (n, group, want) in [(4, Group::Aut, (1, 0)), (12, Group::Aut, (4, 4)), (9, Group::SAut, (2, 2))] {
        let r = fa_bounds(n, group)?;
        report.check(
            format!("bounds/{group}/n{n}"),
            (r.max_d_general, r.max_d_simple) == want,
            format!(
                "general {}, simple {}, rep_threshold {}",
                r.max_d_general, r.max_d_simple, r.rep_threshold
            ),
        );
    }
    let imp = verify_simple_implies_general(4, cap);
    report.check(
        format!("implication/4..{cap}"),
        imp.holds(),
        match imp.counterexample {
            None => format!("{} (n, d) pairs checked", imp.pairs_checked),
            Some(c) => format!("fails at n={} d={} k={}", c.n, c.d, c.k),
        },
    );
    let aut = sweep(4, cap, Group::Aut)?;
    let saut = sweep(5, cap, Group::SAut)?;
    let shifted = saut.iter().zip(&aut).all(|(s, a)| {
        (s.max_d_general, s.max_d_simple) == (a.max_d_general, a.max_d_simple)
    });
    report.check(format!("saut-shift/5..{cap}"), shifted, "SAut at n equals Aut at n-1");
    for (group, rows) in [(Group::Aut, &aut), (Group::SAut, &saut)] {
        let ok = rows.iter().all(|r| r.max_d_simple <= r.max_d_general)
            && rows.windows(2).all(|w| {
                w[0].max_d_general <= w[1].max_d_general && w[0].max_d_simple <= w[1].max_d_simple
            });
        report.check(format!("monotone/{group}"), ok, "simple <= general, both nondecreasing");
    }
    Ok(report.finish())
}

/// Commuting conjugate families, the embedding of `Y4` minus one element,
/// and shortest-path counts on the `Y4` graph.
pub fn families(ns: &[usize]) -> Result<RunReport> {
    let mut report = RunReport::new("families", None);
    for &n in ns {
        for k in 2..=4 {
            for v in [Variant::Tau, Variant::Sigma] {
                if 2 * v.block(k) > n {
                    continue;
                }
                let r = conjugate_families(n, k, v)?;
                report.check(
                    format!("families/{v}/n{n}/k{k}"),
                    r.verified(),
                    format!(
                        "{} families, {} cross commutators, {} nontrivial, orders preserved: {}",
                        r.families.len(),
                        r.commutators_checked,
                        r.noncommuting.len(),
                        r.orders_preserved
                    ),
                );
            }
        }
        if n >= 5 {
            let e = embed_and_check_yprime(n)?;
            let found = e.entries.iter().filter(|x| x.preimage_found && x.embeds_exactly).count();
            report.check(
                format!("embedding/n{n}"),
                e.verified(),
                format!(
                    "{found}/{} elements of Y4 without {} embed; det multiplicative on {} pairs: {}",
                    e.entries.len(),
                    e.excluded,
                    e.det_pairs_checked,
                    e.det_homomorphism
                ),
            );
        }
        if (9..=12).contains(&n) {
            let p = nielsen_path_count(n)?;
            report.check(
                format!("path/n{n}"),
                p.holds(),
                format!("shortest path has {:?} vertices, need >= {}", p.vertices, p.required),
            );
        }
    }
    Ok(report.finish())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BodyKind {
    Box,
    Poly,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct HellyTally {
    pub trials: usize,
    pub consistent: usize,
    pub violating: usize,
    pub total_nonempty: usize,
}

/// Run one random family through the Helly check and re-validate whatever
/// it returns.
pub fn helly_trial<R: Rng>(rng: &mut R, kind: BodyKind, d: usize, sets: usize) -> Result<HellyVerdict, ConvexError> {
    let family = random_family(rng, kind == BodyKind::Poly, d, sets);
    let verdict = helly_check(&family, d)?;
    match &verdict {
        HellyVerdict::TotalNonempty { witness, .. } => {
            if !family.iter().all(|s| s.contains(witness)) {
                return Err(ConvexError::InvalidWitness);
            }
        }
        HellyVerdict::Violating { subfamily } => {
            let sub: Vec<ConvexBody> = subfamily.iter().map(|&k| family[k].clone()).collect();
            if subfamily.len() != (d + 1).min(sets) || feasible(&sub)?.is_some() {
                return Err(ConvexError::InvalidWitness);
            }
        }
    }
    Ok(verdict)
}

pub fn fmt_verdict(v: &Result<HellyVerdict, ConvexError>) -> String {
    match v {
        Ok(HellyVerdict::Violating { subfamily }) => format!("violating subfamily {subfamily:?}"),
        Ok(HellyVerdict::TotalNonempty { witness, subfamilies_checked }) => format!(
            "{subfamilies_checked} subfamilies meet; total witness {}",
            fmt_point(witness)
        ),
        Err(e) => format!("error: {e}"),
    }
}

fn tally(t: &mut HellyTally, outcome: &Result<HellyVerdict, ConvexError>) {
    t.trials += 1;
    match outcome {
        Ok(HellyVerdict::Violating { .. }) => {
            t.consistent += 1;
            t.violating += 1;
        }
        Ok(HellyVerdict::TotalNonempty { .. }) => {
            t.consistent += 1;
            t.total_nonempty += 1;
        }
        Err(_) => {}
    }
}

fn tally_detail(t: &HellyTally) -> String {
    format!(
        "{}/{} consistent ({} violating, {} total nonempty)",
        t.consistent, t.trials, t.violating, t.total_nonempty
    )
}

/// `trials` random families of `sets` bodies in `Q^d`. Without a fixed
/// kind, boxes and polytopes alternate (boxes only above d = 3).
pub fn helly_random(d: usize, sets: usize, trials: usize, seed: u64, kind: Option<BodyKind>) -> Result<RunReport> {
    let mut report = RunReport::new("helly", Some(seed));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = HellyTally::default();
    let mut first_error = None;
    for trial in 0..trials {
        let k = kind.unwrap_or(if trial % 2 == 1 && d <= 3 { BodyKind::Poly } else { BodyKind::Box });
        let outcome = helly_trial(&mut rng, k, d, sets);
        if let Err(e) = &outcome {
            first_error.get_or_insert_with(|| e.to_string());
        }
        tally(&mut t, &outcome);
    }
    let mut detail = tally_detail(&t);
    if let Some(e) = first_error {
        detail.push_str(&format!("; first error: {e}"));
    }
    report.check(format!("helly/random/d{d}/sets{sets}"), t.consistent == t.trials, detail);
    Ok(report.finish())
}

/// Fixed instances plus [`HELLY_TRIALS`] random families: boxes with
/// `d <= 4`, polytopes with `d <= 3`, at most 8 sets.
pub fn helly_suite(seed: u64, trials: usize) -> Result<RunReport> {
    let mut report = RunReport::new("helly", Some(seed));
    let edges = triangle_edges();
    let pairwise = convex::combinations(3, 2)
        .iter()
        .all(|p| matches!(feasible(&[edges[p[0]].clone(), edges[p[1]].clone()]), Ok(Some(_))));
    let verdict = helly_check(&edges, 2);
    report.check(
        "helly/triangle-edges",
        pairwise && verdict == Ok(HellyVerdict::Violating { subfamily: vec![0, 1, 2] }),
        format!("pairwise meeting: {pairwise}; {}", fmt_verdict(&verdict)),
    );
    let boxes: Vec<ConvexBody> = [([0, 0], [3, 3]), ([1, 1], [4, 4]), ([2, 0], [5, 2]), ([0, 2], [2, 5])]
        .iter()
        .map(|(lo, hi)| RationalBox::from_ints(lo, hi).map(Into::into))
        .collect::<Result<_, _>>()?;
    let v = helly_check(&boxes, 2);
    report.check(
        "helly/pairwise-boxes",
        matches!(v, Ok(HellyVerdict::TotalNonempty { .. })),
        fmt_verdict(&v),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut by_kind = [HellyTally::default(), HellyTally::default()];
    let mut errors = Vec::new();
    for trial in 0..trials {
        let poly = trial % 2 == 1;
        let d = if poly { rng.gen_range(1..=3) } else { rng.gen_range(1..=4) };
        let sets = rng.gen_range(2..=8);
        let kind = if poly { BodyKind::Poly } else { BodyKind::Box };
        let outcome = helly_trial(&mut rng, kind, d, sets);
        if let Err(e) = &outcome {
            errors.push(format!("trial {trial}: {e}"));
        }
        tally(&mut by_kind[usize::from(poly)], &outcome);
    }
    for (name, t) in ["box", "poly"].iter().zip(&by_kind) {
        report.check(
            format!("helly/random/{name}"),
            t.consistent == t.trials,
            tally_detail(t),
        );
    }
    if let Some(e) = errors.first() {
        report.check("helly/random/errors", false, e.clone());
    }
    Ok(report.finish())
}

/// Fixed instances plus random box families (at most 8 boxes, `d <= 3`).
pub fn swelling_suite(seed: u64, trials: usize) -> Result<RunReport> {
    let mut report = RunReport::new("swelling", Some(seed));
    let half = convex::q(1, 2);
    let two = [
        RationalBox::from_ints(&[0, 0], &[1, 1])?,
        RationalBox::from_ints(&[2, 2], &[3, 3])?,
    ];
    let t = swelling(&two)?;
    report.check(
        "swelling/disjoint-pair",
        t.validate().is_ok() && t.max_epsilon() <= half,
        format!("epsilons {}", epsilons(&t)),
    );
    let nested = [
        RationalBox::from_ints(&[0], &[10])?,
        RationalBox::from_ints(&[1], &[9])?,
        RationalBox::from_ints(&[2], &[8])?,
    ];
    let t = swelling(&nested)?;
    report.check(
        "swelling/nested",
        t.validate().is_ok() && t.steps.iter().all(|s| s.epsilon == half),
        format!("epsilons {}", epsilons(&t)),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ok = 0;
    let mut first_bad = None;
    for trial in 0..trials {
        let d = rng.gen_range(1..=3);
        let sets = rng.gen_range(1..=8);
        let fam = random_box_family(&mut rng, d, sets);
        let good = match swelling(&fam) {
            Ok(t) => t.validate().is_ok() && t.max_epsilon() <= half,
            Err(_) => false,
        };
        if good {
            ok += 1;
        } else {
            first_bad.get_or_insert(trial);
        }
    }
    report.check(
        "swelling/random",
        ok == trials,
        match first_bad {
            None => format!("{ok}/{trials} nerve-preserving with every epsilon <= 1/2"),
            Some(t) => format!("{ok}/{trials}; first failure at trial {t}"),
        },
    );
    Ok(report.finish())
}

fn epsilons(t: &convex::SwellingTrace) -> String {
    t.steps.iter().map(|s| convex::fmt_q(&s.epsilon)).collect::<Vec<_>>().join(" ")
}

/// Joins of simplex boundaries are spheres of the expected dimension.
pub fn homology_suite(max_total: u32) -> Result<RunReport> {
    let mut report = RunReport::new("homology", None);
    for ks in compositions_up_to(max_total) {
        let dim = ks.iter().sum::<u32>() as usize - 1;
        let complex = join_of_boundaries(&ks)?;
        let h = complex.reduced_homology();
        let label = ks.iter().map(u32::to_string).collect::<Vec<_>>().join("+");
        let euler_ok = h.reduced_euler() == complex.euler_characteristic() - 1;
        report.check(
            format!("join-spheres/{label}"),
            h.is_sphere_of_dim(dim) && euler_ok,
            format!("{} faces, expected sphere of dimension {dim}", complex.simplices().count()),
        );
    }
    for k in 1..=4 {
        let cone = SimplicialComplex::boundary_complex(k)?.join(&SimplicialComplex::point());
        report.check(format!("cone/{k}"), cone.reduced_homology().is_acyclic(), "cone is acyclic");
    }
    Ok(report.finish())
}

/// Nerve of a union of cylinder families against the join of their nerves.
pub fn nerve_join_suite(seed: u64, trials: usize) -> Result<RunReport> {
    let mut report = RunReport::new("nerve-join", Some(seed));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ok = 0;
    let mut by_l = [0usize; 3];
    for _ in 0..trials {
        let m = CylinderModel::random(&mut rng, 3);
        by_l[m.families() - 1] += 1;
        if verify_join_nerve(&m)? {
            ok += 1;
        }
    }
    report.check(
        "nerve-join/random",
        ok == trials,
        format!("{ok}/{trials} isomorphic (l = 1, 2, 3: {by_l:?})"),
    );
    Ok(report.finish())
}

/// Every suite with default parameters.
pub fn all(seed: u64, cutoff: u32, cap: usize) -> Result<Vec<RunReport>> {
    Ok(vec![
        relations(&DEFAULT_RANKS)?,
        generation(&DEFAULT_RANKS)?,
        pairs(GenSetName::Y2, 8, cutoff, cap)?,
        pairs(GenSetName::Y4, 9, cutoff, cap)?,
        pairs(GenSetName::YPrime, 9, cutoff, cap)?,
        bounds_suite(fadcert_core::bounds::DEFAULT_IMPLICATION_CAP)?,
        families(&(4..=12).collect::<Vec<_>>())?,
        helly_suite(seed, HELLY_TRIALS)?,
        swelling_suite(seed, SWELLING_TRIALS)?,
        homology_suite(JOIN_MAX_TOTAL)?,
        nerve_join_suite(seed, NERVE_JOIN_TRIALS)?,
    ])
}
