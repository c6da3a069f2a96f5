use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{add_fit, new_report, specialness_notes, ExperimentConfig, ExperimentId, ExperimentReport, Value};
use crate::combinatorics::{b_tree_size, find_witness_words, l_n_count, FunctionalGraph, VertexSet, GRAPH_SIZE_LIMIT};
use crate::error::{Error, Result};
use crate::ff_core::{FieldContext, FieldElement};
use crate::intpoly::{composition_height_bound, cyclotomic, ln_bigint, IntPolynomial};
use crate::orbits::{
    count_small_order_points, greedy_sequence_cover, m_count, orbit, sup_m_over_sequences, theorem46_lhs,
    GeneratorSet, ReducedSystem, Word, WordStream,
};

/// Largest `phi(s) deg F` accepted by the cyclotomic resultant sweep.
pub const LEMMA41_DEGREE_LIMIT: usize = 4000;
/// Largest composition degree `d^n` accepted by the height sampler.
pub const PROP21_DEGREE_LIMIT: u64 = 243;
/// Largest degree on either side of the collision resultant diagnostic.
const DIAGNOSTIC_DEGREE_LIMIT: usize = 64;

struct PrimeSetup {
    p: u64,
    sys: ReducedSystem,
}

/// Reduces the system at every grid prime; primes where a generator degenerates are skipped.
fn setups(cfg: &ExperimentConfig, gens: &GeneratorSet, primes: &[u64], notes: &mut Vec<String>) -> Result<Vec<PrimeSetup>> {
    let mut out = Vec::new();
    for &p in primes {
        let ctx = FieldContext::extension(p, cfg.s)?;
        match gens.reduce(&ctx) {
            Ok(sys) => out.push(PrimeSetup { p, sys }),
            Err(e @ Error::DegenerateGenerator { .. }) => notes.push(format!("p={p} skipped: {e}")),
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Evaluates `f` on every (prime, point) pair in parallel, keeping grid order.
fn grid_rows<F>(cfg: &ExperimentConfig, setups: &[PrimeSetup], f: F) -> Result<Vec<Vec<Value>>>
where
    F: Fn(&PrimeSetup, FieldElement) -> Result<Option<Vec<Value>>> + Sync,
{
    let mut tasks = Vec::new();
    for s in setups {
        for w in cfg.points_for(s.sys.ctx())? {
            tasks.push((s, w));
        }
    }
    let rows: Vec<Option<Vec<Value>>> = tasks.par_iter().map(|&(s, w)| f(s, w)).collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

fn check_stream(stream: &WordStream, k: usize) -> Result<()> {
    stream.validate()?;
    let max = stream.max_letter();
    if max as usize > k {
        return Err(Error::LetterOutOfRange { letter: max, k });
    }
    Ok(())
}

fn ratio(num: f64, den: f64) -> Value {
    if den > 0.0 {
        Value::Real(num / den)
    } else {
        Value::Na
    }
}

pub fn run_thm44i(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let id = ExperimentId::Thm44i;
    let gens = cfg.generator_set()?;
    let rule = cfg.t_rule()?;
    let n = cfg.n_steps()?;
    let mut notes = specialness_notes(&gens, cfg.strict_special)?;
    let grid = setups(cfg, &gens, &cfg.prime_grid()?, &mut notes)?;
    let rows = grid_rows(cfg, &grid, |s, w| {
        let t = rule.t_for(s.p);
        let best = sup_m_over_sequences(&s.sys, w, t, n)?;
        let nf = n as f64;
        let bound = nf.sqrt().max(nf / cfg.loglog(s.p));
        Ok(Some(vec![
            s.p.into(),
            w.index().into(),
            t.into(),
            n.into(),
            best.value.into(),
            best.witness.to_string().into(),
            bound.into(),
            ratio(best.value as f64, bound),
        ]))
    })?;
    let cols = ["p", "w", "t", "N", "M", "witness", "bound", "ratio"];
    let mut report = new_report(id, cfg, &cols, rows, notes);
    report.summary.push(("primes".into(), grid.len().into()));
    add_fit(&mut report, id);
    Ok(report)
}

pub fn run_thm44ii(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let id = ExperimentId::Thm44ii;
    let gens = cfg.generator_set()?;
    let rule = cfg.t_rule()?;
    let n = cfg.n_steps()?;
    let big_p = cfg.require(cfg.prime_max, "prime_max")?;
    let stream = cfg
        .stream
        .clone()
        .ok_or_else(|| Error::InvalidConfig("missing field 'stream'".into()))?;
    check_stream(&stream, gens.k())?;
    let mut notes = specialness_notes(&gens, cfg.strict_special)?;
    let grid = setups(cfg, &gens, &cfg.prime_grid()?, &mut notes)?;
    let nf = n as f64;
    let rows: Vec<Vec<Value>> = grid
        .par_iter()
        .map(|s| {
            let t = rule.t_for(s.p);
            let points = cfg.points_for(s.sys.ctx())?;
            let mut best: Option<(usize, FieldElement)> = None;
            for &w in &points {
                let m = m_count(&s.sys, &stream, w, t, n)?.count;
                if best.is_none_or(|(bm, _)| m > bm) {
                    best = Some((m, w));
                }
            }
            let base = nf.sqrt().max(nf / (s.p as f64).ln());
            let bound = cfg.constant * base;
            let (m, w) = match best {
                Some((m, w)) => (Value::from(m), Value::from(w.index())),
                None => (Value::Na, Value::Na),
            };
            let exceptional = best.is_some_and(|(bm, _)| bm as f64 > bound);
            Ok(vec![
                s.p.into(),
                t.into(),
                n.into(),
                points.len().into(),
                m,
                w,
                bound.into(),
                exceptional.into(),
                ratio(best.map_or(0.0, |(bm, _)| bm as f64), base),
            ])
        })
        .collect::<Result<_>>()?;
    let exceptional = rows.iter().filter(|r| r[7] == Value::Int(1)).count();
    let cols = ["p", "t", "N", "points", "M_max", "argmax_w", "bound", "exceptional", "ratio"];
    let mut report = new_report(id, cfg, &cols, rows, notes);
    let scanned = grid.len();
    report.summary.push(("primes_scanned".into(), scanned.into()));
    report.summary.push(("exceptional".into(), exceptional.into()));
    let p_over_log = (big_p >= 2).then(|| big_p as f64 / (big_p as f64).ln());
    report.summary.push(("P_over_logP".into(), p_over_log.into()));
    let fraction = (scanned > 0).then(|| exceptional as f64 / scanned as f64);
    report.summary.push(("exceptional_fraction".into(), fraction.into()));
    add_fit(&mut report, id);
    Ok(report)
}

pub fn run_cor45(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let id = ExperimentId::Cor45;
    let gens = cfg.generator_set()?;
    let rule = cfg.t_rule()?;
    let n = cfg.n_steps()?;
    let mut notes = specialness_notes(&gens, cfg.strict_special)?;
    notes.push("levels 0..=N-1 are counted; every count is also at most q".into());
    let grid = setups(cfg, &gens, &cfg.prime_grid()?, &mut notes)?;
    let k = gens.k() as f64;
    let rows = grid_rows(cfg, &grid, |s, w| {
        let t = rule.t_for(s.p);
        let count = count_small_order_points(&s.sys, w, t, n - 1, true)?;
        let nf = n as f64;
        let kn = k.powf(nf);
        let bound = (nf.sqrt() * kn).max(nf * kn / cfg.loglog(s.p));
        Ok(Some(vec![
            s.p.into(),
            w.index().into(),
            t.into(),
            n.into(),
            s.sys.ctx().size().into(),
            count.into(),
            bound.into(),
            ratio(count as f64, bound),
        ]))
    })?;
    let cols = ["p", "w", "t", "N", "q", "count", "bound", "ratio"];
    let mut report = new_report(id, cfg, &cols, rows, notes);
    add_fit(&mut report, id);
    Ok(report)
}

/// First repeat `v_m = v_l`, `l < m`, along the trajectory of `walk` from `w`.
fn first_collision(sys: &ReducedSystem, walk: &WordStream, w: FieldElement) -> Result<(usize, usize)> {
    let len = sys.ctx().size() as usize + 1;
    let traj = sys.trajectory(walk, w, len + 1)?;
    let mut seen = std::collections::HashMap::new();
    for (i, v) in traj.into_iter().enumerate() {
        if let Some(&l) = seen.get(&v) {
            return Ok((i, l));
        }
        seen.insert(v, i);
    }
    unreachable!("a trajectory longer than the field repeats")
}

struct Collision {
    m: usize,
    l: usize,
    n: u64,
    log_abs_q: Option<f64>,
    divisible: Option<bool>,
}

/// `Q = Res(Psi^(m) - Psi^(l), Phi_n)` for the first collision on `walk`; `p | Q` must hold.
fn collision_resultant(
    gens: &GeneratorSet,
    sys: &ReducedSystem,
    walk: &WordStream,
    w: FieldElement,
    n: u64,
) -> Result<Collision> {
    let (m, l) = first_collision(sys, walk, w)?;
    let mut out = Collision { m, l, n, log_abs_q: None, divisible: None };
    let letters = walk.prefix(m);
    let degree = letters
        .letters()
        .iter()
        .try_fold(1usize, |acc, &a| acc.checked_mul(gens.degrees()[a as usize - 1]));
    let phi_n = cyclotomic(n)?;
    let small = degree.is_some_and(|d| d <= DIAGNOSTIC_DEGREE_LIMIT)
        && phi_n.degree().is_some_and(|d| d <= DIAGNOSTIC_DEGREE_LIMIT);
    if !small {
        return Ok(out);
    }
    let psi_m = gens.compose_word(&letters)?;
    let psi_l = gens.compose_word(&Word::new(letters.letters()[..l].to_vec()))?;
    let q = (psi_m - psi_l).resultant(&phi_n)?;
    let p = BigInt::from(sys.ctx().characteristic());
    let divisible = (&q % &p).is_zero();
    if !divisible {
        return Err(Error::GuaranteeViolated(format!("p = {p} does not divide Q = {q}")));
    }
    out.log_abs_q = (!q.is_zero()).then(|| ln_bigint(&q.abs()));
    out.divisible = Some(divisible);
    Ok(out)
}

pub fn run_thm46(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let id = ExperimentId::Thm46;
    let gens = cfg.generator_set()?;
    if !(cfg.constant > 0.0) {
        return Err(Error::InvalidConfig(format!("constant must be positive, got {}", cfg.constant)));
    }
    let mut notes = specialness_notes(&gens, cfg.strict_special)?;
    let grid = setups(cfg, &gens, &cfg.prime_grid()?, &mut notes)?;
    let d = gens.max_degree() as u64;
    let zero_skipped = std::sync::atomic::AtomicUsize::new(0);
    let rows = grid_rows(cfg, &grid, |s, w| {
        if w.is_zero() {
            zero_skipped.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
            return Ok(None);
        }
        let record = orbit(&s.sys, w, cfg.cap, true);
        if record.truncated {
            return Err(Error::Truncated(cfg.cap));
        }
        let big_t = record.size() as u64;
        let tau = s.sys.ctx().mul_order(w)?;
        let cover = greedy_sequence_cover(&s.sys, w, cfg.cap)?;
        let sw = cover.count as u64;
        let lhs = theorem46_lhs(d, big_t, tau, sw)?;
        let rhs = sw as f64 * (cfg.constant * (s.p as f64).ln()).ln();
        let mut row: Vec<Value> = vec![
            s.p.into(),
            w.index().into(),
            big_t.into(),
            tau.into(),
            sw.into(),
            lhs.into(),
            rhs.into(),
            ratio(lhs, rhs),
            (lhs < rhs).into(),
        ];
        if cfg.resultant_diagnostic {
            let c = collision_resultant(&gens, &s.sys, &cover.walks[0], w, tau)?;
            row.extend([c.m.into(), c.l.into(), c.n.into(), c.log_abs_q.into(), c.divisible.into()]);
        }
        Ok(Some(row))
    })?;
    let mut cols = vec!["p", "w", "T", "tau", "s", "lhs", "rhs", "ratio", "exception"];
    if cfg.resultant_diagnostic {
        cols.extend(["m", "l", "n", "log_abs_Q", "p_divides_Q"]);
    }
    let exceptions = rows.iter().filter(|r| r[8] == Value::Int(1)).count();
    let mut report = new_report(id, cfg, &cols, rows, notes);
    report.summary.push(("zero_skipped".into(), zero_skipped.into_inner().into()));
    report.summary.push(("exceptions".into(), exceptions.into()));
    add_fit(&mut report, id);
    Ok(report)
}

/// `h = max(1, floor((log_k N)^(1/(l+1))))`.
fn h_from_n(k: usize, n: usize, l: usize) -> Result<u32> {
    if k < 2 {
        return Err(Error::InvalidConfig("h_from_n needs at least two generators".into()));
    }
    let log_k_n = (n as f64).ln() / (k as f64).ln();
    Ok((log_k_n.powf(1.0 / (l as f64 + 1.0)).floor() as u32).max(1))
}

pub fn run_thm61(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let id = ExperimentId::Thm61;
    let gens = cfg.generator_set()?;
    let rule = cfg.t_rule()?;
    let n = cfg.n_steps()?;
    let l = cfg.require(cfg.l, "l")?;
    if l == 0 {
        return Err(Error::InvalidConfig("l must be at least 1".into()));
    }
    let h = if cfg.h_from_n {
        h_from_n(gens.k(), n, l)?
    } else {
        cfg.require(cfg.h, "h")?
    };
    if h == 0 {
        return Err(Error::InvalidConfig("h must be at least 1".into()));
    }
    let b = b_tree_size(gens.k() as u64, h)?;
    let mut notes = specialness_notes(&gens, cfg.strict_special)?;
    let grid = setups(cfg, &gens, &cfg.prime_grid()?, &mut notes)?;
    let n32 = u32::try_from(n).map_err(|_| Error::InvalidConfig(format!("n = {n} is too large")))?;
    let mut graphs = Vec::new();
    for s in &grid {
        let ctx = s.sys.ctx();
        if ctx.size() > GRAPH_SIZE_LIMIT {
            return Err(Error::TooLarge(format!(
                "functional graph on {} vertices exceeds {GRAPH_SIZE_LIMIT}",
                ctx.size()
            )));
        }
        let t = rule.t_for(s.p);
        let gamma = ctx.small_order_set(t)?;
        let a = VertexSet::new(ctx.size() as usize, gamma.iter().map(|v| v.index() as usize));
        graphs.push((FunctionalGraph::from_reduced(&s.sys), a, t, gamma.len()));
    }
    let b_pow = (b as f64).powi(l as i32 + 1);
    let rows = grid_rows(cfg, &grid, |s, u| {
        let i = grid.iter().position(|g| std::ptr::eq(g, s)).expect("setup from grid");
        let (g, a, t, gamma) = &graphs[i];
        let left = count_small_order_points(&s.sys, u, *t, n, cfg.include_level0)?;
        let hypothesis = left as u128 >= 3 * b && h as usize >= 3 * l;
        let bound_h = b_pow / h as f64;
        let bound_loglog = b_pow / cfg.loglog(s.p);
        let ui = u.index() as usize;
        let wit = find_witness_words(g, ui, a, n32, h, l, cfg.witness_constant)?;
        let recount = l_n_count(g, ui, a, n32, &wit.words)?;
        if recount != wit.count {
            return Err(Error::GuaranteeViolated(format!(
                "witness search reported L_N = {}, recount gives {recount}",
                wit.count
            )));
        }
        let words: Vec<String> = wit.words.iter().map(Word::to_string).collect();
        Ok(Some(vec![
            s.p.into(),
            u.index().into(),
            (*t).into(),
            n.into(),
            h.into(),
            l.into(),
            b.into(),
            (*gamma).into(),
            left.into(),
            hypothesis.into(),
            bound_h.into(),
            bound_loglog.into(),
            ratio(left as f64, bound_h.max(bound_loglog)),
            words.join(" ").into(),
            wit.ball.into(),
            wit.ball_in_a.into(),
            wit.hypothesis_met.into(),
            wit.count.into(),
            wit.reference.into(),
            ratio(wit.count as f64, wit.reference),
        ]))
    })?;
    let cols = [
        "p", "u", "t", "N", "h", "l", "B", "gamma", "left", "hypothesis", "bound_h", "bound_loglog", "left_ratio",
        "witness", "ball", "ball_in_gamma", "witness_hypothesis", "L_N", "L_N_reference", "L_N_ratio",
    ];
    let unmet = rows.iter().filter(|r| r[9] == Value::Int(0)).count();
    let mut report = new_report(id, cfg, &cols, rows, notes);
    report.summary.push(("hypothesis_unmet".into(), unmet.into()));
    add_fit(&mut report, id);
    Ok(report)
}

pub fn run_lemma41(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let id = ExperimentId::Lemma41;
    let gens = cfg.generator_set()?;
    let r_max = cfg.require(cfg.r_max, "r_max")?;
    let s_max = cfg.require(cfg.s_max, "s_max")?;
    let mut tasks = Vec::new();
    for f in gens.polys() {
        for r in 1..=r_max {
            for s in 1..=s_max {
                tasks.push((f, r, s));
            }
        }
    }
    let rows: Vec<Vec<Value>> = tasks
        .par_iter()
        .map(|&(f, r, s)| {
            let deg = f.degree().expect("nonzero generator");
            let phi_s = cyclotomic(s)?;
            let composed_degree = phi_s.degree().expect("nonzero") * deg;
            if composed_degree > LEMMA41_DEGREE_LIMIT {
                return Err(Error::ExplosionGuard(format!(
                    "deg Phi_{s}(F) = {composed_degree} exceeds {LEMMA41_DEGREE_LIMIT}"
                )));
            }
            let phi_r = cyclotomic(r)?;
            let composed = phi_s.compose(f);
            let res = phi_r.resultant(&composed)?;
            let gcd_degree = phi_r.gcd(&composed).degree().unwrap_or(0);
            let zero = res.is_zero();
            if zero != (gcd_degree > 0) {
                return Err(Error::GuaranteeViolated(format!(
                    "Res(Phi_{r}, Phi_{s}(F)) = {res} disagrees with gcd degree {gcd_degree}"
                )));
            }
            let denom = (r * s) as f64 * (f.height()? + deg as f64);
            let log_abs = (!zero).then(|| ln_bigint(&res.abs()));
            let res_text = (res.bits() <= 128).then(|| res.to_string());
            Ok(vec![
                f.to_string().into(),
                r.into(),
                s.into(),
                composed_degree.into(),
                res_text.into(),
                zero.into(),
                gcd_degree.into(),
                log_abs.into(),
                log_abs.map(|x| x / denom).into(),
            ])
        })
        .collect::<Result<_>>()?;
    let cols = ["generator", "r", "s", "degree", "resultant", "zero", "gcd_degree", "log_abs_res", "normalized"];
    let zeros = rows.iter().filter(|r| r[5] == Value::Int(1)).count();
    let mut report = new_report(id, cfg, &cols, rows, Vec::new());
    report.summary.push(("zero_resultants".into(), zeros.into()));
    add_fit(&mut report, id);
    Ok(report)
}

/// Height of one exact composition against its bound.
#[derive(Debug, Clone, PartialEq)]
pub struct HeightCheck {
    pub n: u32,
    pub degree: usize,
    pub height: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Compares `h(phi)` for the composition along `word` with the bound for `n = |word|`.
/// `holds` is decided exactly: `max |a_i| <= H^((d^n-1)/(d-1)) 8^(d^2 (d^(n-1)-1)/(d-1))`
/// with `H = exp h(F)`.
pub fn composition_height_check(gens: &GeneratorSet, word: &Word) -> Result<HeightCheck> {
    let n = u32::try_from(word.len()).map_err(|_| Error::OutOfRange("word too long".into()))?;
    if n == 0 {
        return Err(Error::OutOfRange("height check needs a nonempty word".into()));
    }
    let d = gens.max_degree() as u64;
    let dn = d.checked_pow(n).filter(|&x| x <= PROP21_DEGREE_LIMIT).ok_or_else(|| {
        Error::ExplosionGuard(format!("composition degree {d}^{n} exceeds {PROP21_DEGREE_LIMIT}"))
    })?;
    let phi = gens.compose_word(word)?;
    let max_coeff = |f: &IntPolynomial| -> BigInt {
        f.primitive_part().coeffs().iter().map(Signed::abs).max().expect("nonzero")
    };
    let h_max = gens.polys().iter().map(max_coeff).max().expect("nonempty");
    let e1 = ((dn - 1) / (d - 1)) as u32;
    let e2 = (d * d * (dn / d - 1) / (d - 1)) as u32;
    let limit = num_traits::pow(h_max, e1 as usize) * num_traits::pow(BigInt::from(8), e2 as usize);
    let holds = max_coeff(&phi) <= limit;
    let height = phi.height()?;
    let bound = composition_height_bound(n, d as u32, gens.height())?;
    Ok(HeightCheck { n, degree: phi.degree().expect("nonzero"), height, bound, holds })
}

pub fn run_prop21(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let id = ExperimentId::Prop21;
    let gens = cfg.generator_set()?;
    let n_max = cfg.require(cfg.n_max, "n_max")?;
    let samples = cfg.require(cfg.samples, "samples")?;
    if n_max == 0 {
        return Err(Error::InvalidConfig("n_max must be at least 1".into()));
    }
    let d = gens.max_degree() as u64;
    if d.checked_pow(n_max).is_none_or(|x| x > PROP21_DEGREE_LIMIT) {
        return Err(Error::ExplosionGuard(format!(
            "composition degree {d}^{n_max} exceeds {PROP21_DEGREE_LIMIT}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let k = gens.k() as u32;
    let words: Vec<Word> = (0..samples)
        .map(|_| {
            let n = rng.random_range(1..=n_max);
            Word::new((0..n).map(|_| rng.random_range(1..=k)).collect())
        })
        .collect();
    let rows: Vec<Vec<Value>> = words
        .par_iter()
        .enumerate()
        .map(|(i, w)| {
            let c = composition_height_check(&gens, w)?;
            if !c.holds {
                return Err(Error::GuaranteeViolated(format!(
                    "height {} of the composition along {w} exceeds {}",
                    c.height, c.bound
                )));
            }
            Ok(vec![
                i.into(),
                w.to_string().into(),
                c.n.into(),
                c.degree.into(),
                c.height.into(),
                c.bound.into(),
                c.holds.into(),
                ratio(c.height, c.bound),
            ])
        })
        .collect::<Result<_>>()?;
    let cols = ["sample", "word", "n", "degree", "height", "bound", "holds", "ratio"];
    let mut report = new_report(id, cfg, &cols, rows, Vec::new());
    report.summary.push(("violations".into(), 0u64.into()));
    add_fit(&mut report, id);
    Ok(report)
}
