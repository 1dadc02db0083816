//! Exhaustive ground truth for small instances.
//!
//! Everything here is built from feasibility and the vote count alone; no
//! solver or layered construction is consulted. Feasible matchings are
//! enumerated depth-first: residents in index order, each trying its
//! hospitals in preference order and then staying unmatched, with class
//! counters maintained incrementally. Work is split across threads by
//! enumeration prefixes, so counts, maxima and the first witness found do
//! not depend on the number of threads.

use std::ops::ControlFlow;
use std::str::FromStr;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{ensure_feasible, is_stable, Instance, Matching};
use crate::popularity::delta_fast;

/// Size limits for enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guard {
    pub max_residents: usize,
    /// Bound on `Π (options(r) + 1)` over all residents.
    pub max_product: u128,
}

impl Guard {
    pub const DEFAULT: Guard = Guard { max_residents: 8, max_product: 10_000_000 };
    /// For operations that run a popularity check per candidate.
    pub const POPULAR_SIZE: Guard = Guard { max_residents: 6, max_product: 10_000_000 };

    pub fn check(&self, instance: &Instance) -> Result<()> {
        let n = instance.num_residents();
        if n > self.max_residents {
            return Err(Error::TooLarge(format!("{n} residents, guard allows {}", self.max_residents)));
        }
        let product = search_space(instance);
        if product > self.max_product {
            return Err(Error::TooLarge(format!("search space {product} exceeds guard {}", self.max_product)));
        }
        Ok(())
    }
}

impl Default for Guard {
    fn default() -> Self {
        Guard::DEFAULT
    }
}

/// `RESIDENTS` or `RESIDENTS,PRODUCT`, e.g. `10` or `10,100000000`.
impl FromStr for Guard {
    type Err = Error;

    fn from_str(s: &str) -> Result<Guard> {
        let bad = || Error::BadConfig(format!("guard {s:?} is not RESIDENTS[,PRODUCT]"));
        let mut parts = s.split(',').map(str::trim);
        let max_residents = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let max_product = match parts.next() {
            Some(p) => p.parse().map_err(|_| bad())?,
            None => Guard::DEFAULT.max_product,
        };
        if parts.next().is_some() {
            return Err(bad());
        }
        Ok(Guard { max_residents, max_product })
    }
}

/// `Π (|list(r)| + 1)`, saturating.
pub fn search_space(instance: &Instance) -> u128 {
    (0..instance.num_residents())
        .map(|r| instance.resident_prefs(r).len() as u128 + 1)
        .fold(1u128, |acc, x| acc.saturating_mul(x))
}

/// Outcome of a brute-force check. A failed check carries the first
/// counterexample in enumeration order and its vote margin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<Matching>,
    pub witness_delta: Option<i64>,
}

impl Verdict {
    fn from_witness(found: Option<(Matching, i64)>) -> Verdict {
        match found {
            None => Verdict { holds: true, witness: None, witness_delta: None },
            Some((m, d)) => Verdict { holds: false, witness: Some(m), witness_delta: Some(d) },
        }
    }
}

/// Incremental depth-first enumerator.
struct Walker<'a> {
    instance: &'a Instance,
    counts: Vec<Vec<u32>>,
    current: Matching,
}

impl<'a> Walker<'a> {
    fn new(instance: &'a Instance) -> Self {
        Walker {
            instance,
            counts: (0..instance.num_hospitals()).map(|h| vec![0; instance.class_tree(h).len()]).collect(),
            current: Matching::empty(instance.num_residents()),
        }
    }

    fn fits(&self, r: usize, h: usize) -> bool {
        let tree = self.instance.class_tree(h);
        tree.chain(r).all(|c| self.counts[h][c] < tree.class(c).quota)
    }

    fn options(&self, r: usize) -> Vec<Option<usize>> {
        let mut out: Vec<Option<usize>> =
            self.instance.resident_prefs(r).iter().copied().filter(|&h| self.fits(r, h)).map(Some).collect();
        out.push(None);
        out
    }

    fn set(&mut self, r: usize, h: Option<usize>) {
        if let Some(h) = h {
            for c in self.instance.class_tree(h).chain(r) {
                self.counts[h][c] += 1;
            }
        }
        self.current.assign(r, h);
    }

    fn unset(&mut self, r: usize) {
        if let Some(h) = self.current.hospital_of(r) {
            for c in self.instance.class_tree(h).chain(r) {
                self.counts[h][c] -= 1;
            }
        }
        self.current.assign(r, None);
    }

    fn walk<F>(&mut self, r: usize, f: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&Matching) -> ControlFlow<()>,
    {
        if r == self.instance.num_residents() {
            return f(&self.current);
        }
        for h in self.options(r) {
            self.set(r, h);
            let flow = self.walk(r + 1, f);
            self.unset(r);
            flow?;
        }
        ControlFlow::Continue(())
    }
}

/// Feasible assignments of the first residents, in enumeration order,
/// enough of them to keep every thread busy.
fn prefixes(instance: &Instance, target: usize) -> Vec<Vec<Option<usize>>> {
    let mut layer: Vec<Vec<Option<usize>>> = vec![Vec::new()];
    let mut k = 0;
    while layer.len() < target && k < instance.num_residents() {
        let mut next = Vec::new();
        for prefix in &layer {
            let mut w = Walker::new(instance);
            for (r, &h) in prefix.iter().enumerate() {
                w.set(r, h);
            }
            for h in w.options(k) {
                let mut p = prefix.clone();
                p.push(h);
                next.push(p);
            }
        }
        layer = next;
        k += 1;
    }
    layer
}

fn walk_from<F>(instance: &Instance, prefix: &[Option<usize>], f: &mut F) -> ControlFlow<()>
where
    F: FnMut(&Matching) -> ControlFlow<()>,
{
    let mut w = Walker::new(instance);
    for (r, &h) in prefix.iter().enumerate() {
        w.set(r, h);
    }
    w.walk(prefix.len(), f)
}

/// Visits every feasible matching once, in enumeration order, on the
/// calling thread. No guard is applied.
pub fn for_each_feasible<F: FnMut(&Matching)>(instance: &Instance, mut f: F) {
    let _ = Walker::new(instance).walk(0, &mut |m: &Matching| {
        f(m);
        ControlFlow::Continue(())
    });
}

/// A random feasible matching: residents in random order each take a
/// uniformly chosen option (a hospital with room, or staying unmatched).
pub fn random_feasible<R: Rng + ?Sized>(instance: &Instance, rng: &mut R) -> Matching {
    let mut w = Walker::new(instance);
    let mut order: Vec<usize> = (0..instance.num_residents()).collect();
    order.shuffle(rng);
    for r in order {
        let options = w.options(r);
        w.set(r, *options.choose(rng).expect("unmatched is always an option"));
    }
    w.current
}

/// Brute-force checks with a guard and an optional dedicated thread pool.
#[derive(Debug, Clone)]
pub struct Oracle {
    pub guard: Guard,
    /// Extra limit for [`Oracle::brute_max_popular_size`], which runs a
    /// popularity check per candidate.
    pub popular_guard: Guard,
    pool: Option<Arc<rayon::ThreadPool>>,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle::new(Guard::DEFAULT)
    }
}

impl Oracle {
    pub fn new(guard: Guard) -> Self {
        Oracle { guard, popular_guard: Guard::POPULAR_SIZE, pool: None }
    }

    /// One guard for everything, the per-candidate one included.
    pub fn uniform(guard: Guard) -> Self {
        Oracle { guard, popular_guard: guard, pool: None }
    }

    /// Runs on `threads` workers; 0 keeps the global pool.
    pub fn with_threads(mut self, threads: usize) -> Result<Self> {
        self.pool = if threads == 0 {
            None
        } else {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Error::BadConfig(e.to_string()))?;
            Some(Arc::new(pool))
        };
        Ok(self)
    }

    fn install<T: Send>(&self, op: impl FnOnce() -> T + Send) -> T {
        match &self.pool {
            Some(pool) => pool.install(op),
            None => op(),
        }
    }

    fn split(&self, instance: &Instance) -> Vec<Vec<Option<usize>>> {
        let threads = self.pool.as_ref().map_or_else(rayon::current_num_threads, |p| p.current_num_threads());
        prefixes(instance, 4 * threads)
    }

    /// First matching in enumeration order for which `hit` returns a value.
    fn find_first<T, F>(&self, instance: &Instance, hit: F) -> Option<(Matching, T)>
    where
        T: Send,
        F: Fn(&Matching) -> Option<T> + Sync,
    {
        let parts = self.split(instance);
        self.install(|| {
            parts.par_iter().find_map_first(|prefix| {
                let mut found = None;
                let _ = walk_from(instance, prefix, &mut |m: &Matching| match hit(m) {
                    Some(t) => {
                        found = Some((m.clone(), t));
                        ControlFlow::Break(())
                    }
                    None => ControlFlow::Continue(()),
                });
                found
            })
        })
    }

    /// Folds every part with `fold` and combines parts with `merge`.
    fn reduce<T, F, G>(&self, instance: &Instance, init: T, fold: F, merge: G) -> T
    where
        T: Send + Sync + Clone,
        F: Fn(&mut T, &Matching) + Sync,
        G: Fn(T, T) -> T + Sync + Send,
    {
        let parts = self.split(instance);
        self.install(|| {
            parts
                .par_iter()
                .map(|prefix| {
                    let mut acc = init.clone();
                    let _ = walk_from(instance, prefix, &mut |m: &Matching| {
                        fold(&mut acc, m);
                        ControlFlow::Continue(())
                    });
                    acc
                })
                .reduce(|| init.clone(), &merge)
        })
    }

    /// All feasible matchings in enumeration order.
    pub fn enumerate_feasible(&self, instance: &Instance) -> Result<Vec<Matching>> {
        self.guard.check(instance)?;
        let mut out = Vec::new();
        for_each_feasible(instance, |m| out.push(m.clone()));
        Ok(out)
    }

    pub fn count_feasible(&self, instance: &Instance) -> Result<u64> {
        self.guard.check(instance)?;
        Ok(self.reduce(instance, 0u64, |n, _| *n += 1, |a, b| a + b))
    }

    pub fn brute_max_cardinality(&self, instance: &Instance) -> Result<usize> {
        self.guard.check(instance)?;
        Ok(self.reduce(instance, 0usize, |best, m| *best = (*best).max(m.len()), usize::max))
    }

    /// Whether no feasible matching gets more votes than `m`.
    pub fn brute_is_popular(&self, instance: &Instance, m: &Matching) -> Result<Verdict> {
        self.guard.check(instance)?;
        ensure_feasible(instance, m, "M")?;
        let found = self.find_first(instance, |rival| {
            let d = delta_fast(instance, m, rival);
            (d > 0).then_some(d)
        });
        Ok(Verdict::from_witness(found))
    }

    /// Whether no maximum-cardinality feasible matching gets more votes
    /// than `m`, which must itself have maximum cardinality.
    pub fn brute_unbeaten_among_maxcard(&self, instance: &Instance, m: &Matching) -> Result<Verdict> {
        ensure_feasible(instance, m, "M")?;
        let max = self.brute_max_cardinality(instance)?;
        if m.len() < max {
            return Err(Error::NotMaxCardinality { size: m.len(), max });
        }
        let found = self.find_first(instance, |rival| {
            if rival.len() != max {
                return None;
            }
            let d = delta_fast(instance, m, rival);
            (d > 0).then_some(d)
        });
        Ok(Verdict::from_witness(found))
    }

    /// Size of a largest popular matching. Checked under both guards.
    pub fn brute_max_popular_size(&self, instance: &Instance) -> Result<usize> {
        self.guard.check(instance)?;
        self.popular_guard.check(instance)?;
        self.max_popular_size_unchecked(instance)
    }

    fn max_popular_size_unchecked(&self, instance: &Instance) -> Result<usize> {
        let all = self.enumerate_feasible(instance)?;
        // Matchings that beat an earlier candidate tend to beat later ones too.
        let mut hints: Vec<usize> = Vec::new();
        let largest = all.iter().map(Matching::len).max().unwrap_or(0);
        for size in (0..=largest).rev() {
            for m in all.iter().filter(|m| m.len() == size) {
                if hints.iter().any(|&i| delta_fast(instance, m, &all[i]) > 0) {
                    continue;
                }
                let beaten = self.install(|| all.par_iter().position_first(|x| delta_fast(instance, m, x) > 0));
                match beaten {
                    None => return Ok(size),
                    Some(i) => {
                        hints.insert(0, i);
                        hints.truncate(32);
                    }
                }
            }
        }
        // Only reachable if the instance has no popular matching at all.
        Err(Error::InvariantViolation("no popular matching exists".into()))
    }

    /// All stable matchings in enumeration order.
    pub fn brute_stable_matchings(&self, instance: &Instance) -> Result<Vec<Matching>> {
        Ok(self.enumerate_feasible(instance)?.into_iter().filter(|m| is_stable(instance, m).unwrap()).collect())
    }
}
