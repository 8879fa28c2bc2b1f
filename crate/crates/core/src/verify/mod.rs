//! The acceptance suite: nine checks of exact identities and convergence
//! rates, each reporting pass or fail with a short summary.

pub mod fixtures;
pub mod oracle;

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cell::Cell;
use crate::chain::Current;
use crate::error::{GeoError, Result};
use crate::field::VectorField;
use crate::flatnorm::{flat_norm, FlatKind};
use crate::form;
use crate::mountain;
use crate::path::CurrentPath;
use crate::poly::RPoly;
use crate::rational::{self, int, rat, Rational};
use crate::spacetime::{self, SpaceTimeCurrent};
use crate::transport::{self, reduce};

pub const CRITERIA: [(u8, &str); 9] = [
    (1, "flat mountain lipschitz identity"),
    (2, "critical mass identity"),
    (3, "gluing boundary formula"),
    (4, "pushforward weak-solution residual"),
    (5, "coordinate reductions"),
    (6, "coarea identity"),
    (7, "flat norm oracle equivalence"),
    (8, "weak rademacher localization"),
    (9, "variation inequality and equality"),
];

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {} {} {}: {} ({:.1} s)",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail,
            self.seconds
        )
    }
}

type Outcome = Result<(bool, String)>;

/// Runs one criterion; errors count as failures.
pub fn run_criterion(id: u8, seed: u64) -> CriterionResult {
    let start = Instant::now();
    let name = CRITERIA.iter().find(|c| c.0 == id).map_or("unknown", |c| c.1).to_string();
    let out = match id {
        1 => lipschitz(seed),
        2 => critical_mass(),
        3 => gluing(seed),
        4 => residual_rates(),
        5 => reductions(),
        6 => coarea(seed),
        7 => oracle_equivalence(seed),
        8 => localization(seed),
        9 => variations(seed),
        _ => Err(GeoError::Contract(format!("no criterion {id}"))),
    };
    let (passed, detail) = out.unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionResult { id, name, passed, detail, seconds: start.elapsed().as_secs_f64() }
}

pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    CRITERIA.iter().map(|c| run_criterion(c.0, seed)).collect()
}

fn lipschitz(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: Vec<(u64, u64)> = (0..64).map(|j| (j, j + 1)).collect();
    while pairs.len() < 114 {
        let (j, k) = (rng.gen_range(0..=64), rng.gen_range(0..=64));
        if j != k {
            pairs.push((j, k));
        }
    }
    let rep = mountain::verify_lipschitz(3, &pairs)?;
    let bad = rep.entries.iter().filter(|e| !e.ok).count();
    Ok((rep.all_ok, format!("{} pairs at level 3, {bad} mismatches", pairs.len())))
}

fn critical_mass() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for n in 1..=5 {
        let u = mountain::iterate_u(n)?;
        let (crit, var) = mountain::graph_mass_split(&u)?;
        let good = crit.exact == Some(Rational::one()) && var.exact == Some(Rational::one());
        if n <= 2 {
            let gd = mountain::graph_current(&u)?.geometric_derivative(&Rational::zero())?;
            ok &= gd.crit_mass.exact == crit.exact;
        }
        ok &= good;
        notes.push(format!("n={n}: crit {} var {}", crit.value(), var.value()));
    }
    Ok((ok, notes.join(", ")))
}

fn point_times(t: &Current, time: &Rational, sign: i64) -> BTreeMap<Cell, Rational> {
    let mut map = BTreeMap::new();
    let p = Cell::simplex(vec![vec![time.clone()]]).0;
    for (c, m) in t.cells() {
        for (q, s) in p.product(c) {
            Current::accumulate(&mut map, q, m * int(sign * s as i64));
        }
    }
    map
}

fn gluing(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x61);
    let mut failures = Vec::new();
    let mut steps = Vec::new();
    for case in 0..20 {
        let n = rng.gen_range(1..=16);
        steps.push(n);
        let (path, chains) = fixtures::random_boundary_path(&mut rng, 4, n)?;
        let g = spacetime::glue(&path)?;
        let mut expected = point_times(&path.snapshots[n], &int(1), -1);
        for (c, m) in point_times(&path.snapshots[0], &int(0), 1) {
            Current::accumulate(&mut expected, c, m);
        }
        let boundary_ok = g.current.current().boundary().to_cell_map() == expected;
        // fillings are unique on the grid: W_i = C_{i+1} - C_i
        let cell_area = rat(1, 16);
        let oracle: Rational = (0..n)
            .map(|i| {
                let d = chains[i + 1].sub(&chains[i]).expect("same grid");
                d.coeffs().values().map(|m| m.abs() * &cell_area).sum::<Rational>()
            })
            .sum();
        let var = g.current.total_variation()?.exact;
        let var_ok = var.as_ref() == Some(&oracle) && g.filling_mass.exact.as_ref() == Some(&oracle);
        if !boundary_ok || !var_ok {
            failures.push(format!("case {case} (N={n}): boundary {boundary_ok}, variation {var_ok}"));
        }
    }
    let detail = if failures.is_empty() {
        format!("20 paths, N in {:?}..={:?}, boundary and Var = sum F_I exact", steps.iter().min().unwrap(), steps.iter().max().unwrap())
    } else {
        failures.join("; ")
    };
    Ok((failures.is_empty(), detail))
}

/// Residual floor below which a halving is counted as converged.
const RESIDUAL_FLOOR: f64 = 1e-13;

fn residual_rates() -> Outcome {
    let gon = fixtures::regular_polygon(64, [0.5, 0.5], 0.25)?;
    let fields = [
        ("rotation", VectorField::rotation(vec![int(0), int(0)], int(1))),
        ("shear", VectorField::shear(2, rat(1, 2))),
        ("constant", VectorField::constant(vec![rat(1, 2), rat(1, 4)])),
    ];
    let forms = form::battery(2, 1);
    let psis = transport::test_functions();
    let times: Vec<Rational> = (0..=512).map(|j| rat(j, 512)).collect();
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, b) in &fields {
        let fine = transport::transport_path(&gon, b, &times, 1.0 / 4096.0)?;
        let mut res = Vec::new();
        for e in 6..=9u32 {
            let stride = 1usize << (9 - e);
            let idx: Vec<usize> = (0..=512).step_by(stride).collect();
            let sub = CurrentPath::new(
                idx.iter().map(|&i| fine.times[i].clone()).collect(),
                idx.iter().map(|&i| fine.snapshots[i].clone()).collect(),
            )?;
            let r = transport::gte_residuals(&sub, b, &forms, &psis)?;
            res.push(r.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs())));
        }
        let ratios: Vec<f64> = res.windows(2).map(|w| w[0] / w[1]).collect();
        let rates_ok = res.windows(2).all(|w| w[1] < RESIDUAL_FLOOR || w[0] / w[1] >= 3.5);
        let last_ok = res[3] < 1e-5;
        ok &= rates_ok && last_ok;
        notes.push(format!(
            "{name}: residual {:.2e} at dt=1/512, ratios {}",
            res[3],
            ratios.iter().map(|r| format!("{r:.2}")).collect::<Vec<_>>().join("/")
        ));
    }
    Ok((ok, notes.join("; ")))
}

/// `cos^2` bump of radius `r` around `c`; continuously differentiable.
fn bump(x: &[f64], c: [f64; 2], r: f64) -> f64 {
    let d = ((x[0] - c[0]).powi(2) + (x[1] - c[1]).powi(2)).sqrt();
    if d >= r {
        0.0
    } else {
        (std::f64::consts::FRAC_PI_2 * d / r).cos().powi(2)
    }
}

fn reductions() -> Outcome {
    let pts = fixtures::point_masses(&[
        (vec![int(0), int(0)], int(1)),
        (vec![rat(1, 2), rat(1, 4)], int(2)),
        (vec![rat(-1, 3), int(1)], int(-1)),
    ])?;
    let fields = [
        ("constant", VectorField::constant(vec![int(1), rat(1, 2)]), [[1.0, 0.0], [0.0, 1.0]], [1.0, 0.5]),
        ("shear", VectorField::shear(2, int(1)), [[1.0, 1.0], [0.0, 1.0]], [0.0, 0.0]),
    ];
    let battery = form::battery(2, 0);
    let mut worst: f64 = 0.0;
    for (_, b, a, c) in &fields {
        worst = worst.max(reduce::particle_discrepancy(&pts, b, 0.0, 1.0, 64, 1e-3)?);
        // exact time-1 positions x -> A x + c
        let exact = fixtures::point_masses(
            &pts.cells()
                .map(|(cell, m)| {
                    let p: Vec<f64> = cell.vertices()[0].iter().map(rational::to_f64).collect();
                    let y = [a[0][0] * p[0] + a[0][1] * p[1] + c[0], a[1][0] * p[0] + a[1][1] * p[1] + c[1]];
                    Ok((vec![rational::from_f64(y[0])?, rational::from_f64(y[1])?], m.clone()))
                })
                .collect::<Result<Vec<_>>>()?,
        )?;
        let euler = reduce::particles(&pts, b, 0.0, 1.0, 64)?;
        worst = worst.max(reduce::pairing_discrepancy(&euler, &exact, &battery)?);
    }
    let particles_ok = worst < 1e-6;

    let v = [1.0, 0.5];
    let (c0, r, time) = ([0.3, 0.3], 0.2, 0.25);
    let field = VectorField::constant(vec![int(1), rat(1, 2)]);
    let mut errors = Vec::new();
    let mut mass_drift: f64 = 0.0;
    let mut grid_gap = None;
    for m in [64usize, 128, 256, 512] {
        let h = 1.0 / m as f64;
        let init = reduce::DensityGrid::sample(&[0.0, 0.0], h, &[m, m], &|x| bump(x, c0, r), 4);
        let out = reduce::upwind(&init, &field, 0.0, time, 0.8)?;
        let moved = [c0[0] + v[0] * time, c0[1] + v[1] * time];
        let exact = reduce::DensityGrid::sample(&[0.0, 0.0], h, &[m, m], &|x| bump(x, moved, r), 4);
        errors.push(out.grid.l1_distance(&exact));
        mass_drift = mass_drift.max((out.grid.total() - init.total()).abs());
        if m == 64 {
            let pushed = transport::pushforward(&init.to_current()?, &field, 0.0, time, 1e-2)?.current;
            grid_gap = Some(reduce::pairing_discrepancy(&out.grid.to_current()?, &pushed, &form::battery(2, 2))?);
        }
    }
    let slopes: Vec<f64> = errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    let slopes_ok = slopes.iter().all(|s| (0.8..=1.2).contains(s));
    Ok((
        particles_ok && slopes_ok,
        format!(
            "particle pairing gap {worst:.1e}; upwind L1 errors {}, slopes {}, mass drift {mass_drift:.1e}, pairing gap vs pushforward at 64^2 {:.2e}",
            errors.iter().map(|e| format!("{e:.2e}")).collect::<Vec<_>>().join("/"),
            slopes.iter().map(|s| format!("{s:.3}")).collect::<Vec<_>>().join("/"),
            grid_gap.unwrap_or(f64::NAN)
        ),
    ))
}

fn weight(s: &str) -> Result<RPoly> {
    RPoly::parse(s, &["t", "x", "y"])
}

fn coarea(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6c);
    let mut cases: Vec<(String, SpaceTimeCurrent, RPoly)> = Vec::new();
    let u2 = mountain::iterate_u(2)?;
    let fm2 = mountain::graph_current(&u2)?;
    cases.push(("flat mountain n=2, g=1".into(), fm2.clone(), weight("1")?));
    cases.push(("flat mountain n=2, g=1+t+x".into(), fm2, weight("1 + t + x")?));
    let (sq, _) = fixtures::translating_square(0, &rat(1, 2), 1)?;
    cases.push(("moving square, g=1".into(), sq, weight("1")?));
    let (sq, _) = fixtures::translating_square(1, &rat(-1, 3), 1)?;
    cases.push(("moving square, g=t^2+y^2".into(), sq, weight("t^2 + y^2")?));
    let gon = fixtures::regular_polygon(16, [0.5, 0.5], 0.25)?;
    let stat = fixtures::translating(&gon, &[int(0), int(0)], &int(0), &int(1))?;
    cases.push(("static 16-gon, g=1+x*y".into(), stat, weight("1 + x*y")?));
    // a segment whose ends move at different speeds, as two triangles
    let p = |t: i64, x: Rational, y: Rational| vec![int(t), x, y];
    let mut map = BTreeMap::new();
    for (tri, sg) in [
        (vec![p(0, int(0), int(0)), p(1, int(1), rat(1, 2)), p(0, int(1), int(0))], 1),
        (vec![p(1, int(1), rat(1, 2)), p(1, rat(5, 2), int(1)), p(0, int(1), int(0))], 1),
    ] {
        let (c, s) = Cell::simplex(tri);
        Current::accumulate(&mut map, c, int((s * sg) as i64));
    }
    let sheet = SpaceTimeCurrent::new(Current::from_cell_map(3, 2, map)?)?;
    cases.push(("stretching segment, g=1+x^2".into(), sheet, weight("1 + x^2")?));
    let (path, _) = fixtures::random_boundary_path(&mut rng, 4, 4)?;
    cases.push(("glued path, g=1+t".into(), spacetime::glue(&path)?.current, weight("1 + t")?));
    let worldline = fixtures::polyline(&[vec![int(0), rat(1, 4), int(0)], vec![int(1), rat(3, 4), rat(1, 3)]], false)?;
    cases.push(("moving point, g=1+t".into(), SpaceTimeCurrent::new(worldline)?, weight("1 + t")?));
    let (tri, s) = Cell::simplex(vec![vec![int(0), int(0)], vec![int(1), int(0)], vec![rat(1, 2), int(1)]]);
    let mut map = BTreeMap::new();
    map.insert(tri, int(s as i64));
    let planar = SpaceTimeCurrent::new(Current::from_cell_map(2, 2, map)?)?;
    cases.push(("triangle in R x R, g=1+x".into(), planar, RPoly::parse("1 + x", &["t", "x"])?));
    let u1 = mountain::iterate_u(1)?;
    cases.push(("flat mountain n=1, g=t+1".into(), mountain::graph_current(&u1)?, weight("t + 1")?));
    let mut worst: f64 = 0.0;
    let mut bad = Vec::new();
    for (name, s, g) in &cases {
        let rep = spacetime::coarea_check(s, g)?;
        worst = worst.max(rep.gap);
        if rep.gap >= 1e-9 {
            bad.push(format!("{name}: gap {:.2e}", rep.gap));
        }
    }
    let detail = if bad.is_empty() { format!("{} currents, largest gap {worst:.2e}", cases.len()) } else { bad.join("; ") };
    Ok((bad.is_empty(), detail))
}

fn oracle_equivalence(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7e);
    let kinds = [FlatKind::Whitney, FlatKind::Homogeneous, FlatKind::IntegralWhitney, FlatKind::IntegralHomogeneous];
    let mut instances = Vec::new();
    for i in 0..60 {
        let cx = fixtures::small_grid(&mut rng)?;
        let t = if i % 2 == 0 {
            fixtures::random_chain(&mut rng, &cx, 1, 0.4, 2)?
        } else {
            fixtures::random_top_chain(&mut rng, &cx, 0.6, 1)?.boundary()
        };
        instances.push(t);
    }
    for i in 0..50 {
        let cx = fixtures::path_graph(&mut rng, 5)?;
        let t = loop {
            let t = fixtures::random_chain(&mut rng, &cx, 0, 0.7, 2)?;
            let total: Rational = t.coeffs().values().cloned().sum();
            if i % 2 == 0 || total.is_zero() {
                break t;
            }
        };
        instances.push(t);
    }
    let mut compared = 0;
    let mut mismatches = Vec::new();
    for (i, t) in instances.iter().enumerate() {
        let cells: usize = (0..=t.complex().max_dim()).map(|k| t.complex().len(k)).sum();
        if cells > 30 {
            return Err(GeoError::Contract(format!("instance {i} has {cells} cells")));
        }
        for kind in kinds {
            let lp = match flat_norm(t, kind) {
                Ok(c) => Some(c.exact_value().cloned().ok_or_else(|| GeoError::Evaluation("inexact LP value".into()))?),
                Err(GeoError::Infeasible(_)) => None,
                Err(e) => return Err(e),
            };
            let brute = oracle::enumerate_flat_norm(t, kind, 20_000_000)?;
            compared += 1;
            if lp != brute {
                mismatches.push(format!("instance {i} {kind}: lp {lp:?} vs enumeration {brute:?}"));
            }
        }
    }
    let detail = if mismatches.is_empty() {
        format!("{} instances x 4 kinds = {compared} exact agreements", instances.len())
    } else {
        mismatches.join("; ")
    };
    Ok((mismatches.is_empty(), detail))
}

fn localization(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x8a);
    let u = mountain::iterate_u(3)?;
    let path = fixtures::superlevel_path(&u, 64)?;
    let mut js: Vec<i64> = (0..64).collect();
    js.shuffle(&mut rng);
    js.truncate(10);
    js.sort();
    let quarter = rat(1, 4);
    let mut checked = 0;
    let mut bad = Vec::new();
    for &j in &js {
        let t = rat(j, 64);
        let hs: Vec<Rational> = (1..=4 - j % 4).map(|m| rat(m, 64)).collect();
        let (x, y) = mountain::position((j / 4) as usize, 2);
        let lo = [&quarter * int(x as i64), &quarter * int(y as i64)];
        let hi = [&lo[0] + &quarter, &lo[1] + &quarter];
        for (h, r) in hs.iter().zip(spacetime::weak_rademacher_filling(&path, &t, &hs)?) {
            checked += 1;
            let inside = r.cells().all(|(c, _)| {
                let (a, b) = c.bbox();
                (0..2).all(|i| a[i] >= lo[i] && b[i] <= hi[i])
            });
            let mass = r.mass().exact;
            if !inside || mass != Some(Rational::one()) {
                bad.push(format!("t={t}, h={h}: inside {inside}, mass {mass:?}"));
            }
        }
    }
    let detail = if bad.is_empty() {
        format!("t = {:?}/64, {checked} (t, h) pairs, all supported in Q_(t1,t2) with mass 1", js)
    } else {
        bad.join("; ")
    };
    Ok((bad.is_empty(), detail))
}

fn parse_exact(s: Option<&str>) -> Option<Rational> {
    s.and_then(|v| rational::parse(v).ok())
}

fn variations(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x93);
    let mut speeds = [rat(1, 2), rat(-1, 2), rat(1, 4), rat(-3, 4), rat(1, 3), rat(-2, 3), rat(3, 4)];
    speeds.shuffle(&mut rng);
    let mut cases = Vec::new();
    for v in speeds.into_iter().take(6) {
        let axis = rng.gen_range(0..2);
        let (s, cx) = fixtures::translating_square(axis, &v, 3)?;
        cases.push((format!("square v={v} along axis {axis}"), s, cx, 3u32, true));
    }
    let (s, cx) = fixtures::translating_square(0, &Rational::zero(), 3)?;
    cases.push(("static square".into(), s, cx, 3, true));
    for n in [2u32, 3] {
        let u = mountain::iterate_u(n)?;
        cases.push((format!("flat mountain n={n}"), mountain::graph_current(&u)?, u.grid().clone(), n, true));
    }
    let mut bad = Vec::new();
    let mut summary = Vec::new();
    for (name, s, cx, depth, equality) in &cases {
        let rep = spacetime::variation_report(s, *depth, cx)?;
        let var = parse_exact(rep.var_total_exact.as_deref());
        let evs: Vec<Option<Rational>> = rep.ev.iter().map(|r| parse_exact(r.best().1)).collect();
        let monotone = evs.windows(2).all(|w| matches!((&w[0], &w[1]), (Some(a), Some(b)) if a <= b));
        let bounded = rep.ev.iter().all(|r| r.within_var);
        let equal = !equality || (evs.last().cloned().flatten().is_some() && evs.last().cloned().flatten() == var);
        if !(monotone && bounded && equal) {
            bad.push(format!("{name}: monotone {monotone}, <= Var {bounded}, eV(n) = Var {equal}"));
        }
        summary.push(format!("{name}: Var {}", rep.var_total_exact.unwrap_or_else(|| format!("{:.6}", rep.var_total))));
    }
    let detail = if bad.is_empty() { summary.join(", ") } else { bad.join("; ") };
    Ok((bad.is_empty(), detail))
}
