//! Backtracking search with arc-consistency propagation over per-variable
//! candidate masks.
//!
//! Constraints are binary and given by bit-row tables: an arc from `x` to `y`
//! with table `t` means a value `a` of `x` is supported iff `t[a] & dom(y) != 0`.
//! The lattice front end ([`extend_locally_admissible`] and friends) builds one
//! such problem per query; the torus builder is used for periodic points.

use std::collections::VecDeque;
use std::ops::ControlFlow;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::SftError;
use crate::lattice::Shape;
use crate::pattern::{Letter, Pattern};
use crate::sft::Nnsft;

#[derive(Clone, Copy, Debug)]
struct Arc {
    other: u32,
    table: u32,
}

/// How values are tried at a branching variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValueOrder {
    /// Increasing letter index.
    Ascending,
    /// A seeded shuffle per node, used to draw varied solutions.
    Shuffled(u64),
}

/// Node-count limit for one search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: u64,
}

impl Budget {
    pub const UNLIMITED: Budget = Budget { max_nodes: u64::MAX };
}

impl Default for Budget {
    fn default() -> Self {
        Budget::UNLIMITED
    }
}

/// Outcome of a bounded search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Search<T> {
    Done(T),
    OutOfBudget { nodes: u64 },
}

impl<T> Search<T> {
    pub fn done(self) -> Option<T> {
        match self {
            Search::Done(t) => Some(t),
            Search::OutOfBudget { .. } => None,
        }
    }
}

/// A binary constraint problem over small finite domains.
#[derive(Clone, Debug)]
pub struct Csp {
    domains: Vec<u64>,
    arcs: Vec<Vec<Arc>>,
    tables: Vec<Vec<u64>>,
    order: Vec<u32>,
}

impl Csp {
    pub fn new(domains: Vec<u64>) -> Csp {
        let n = domains.len();
        Csp { domains, arcs: vec![Vec::new(); n], tables: Vec::new(), order: (0..n as u32).collect() }
    }

    pub fn len(&self) -> usize {
        self.domains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domains.is_empty()
    }

    /// Registers a support table and returns its id.
    pub fn add_table(&mut self, rows: Vec<u64>) -> u32 {
        self.tables.push(rows);
        (self.tables.len() - 1) as u32
    }

    /// Constraint between `x` and `y`: `(value of x, value of y)` allowed iff
    /// `fwd[vx]` contains `vy`; `bwd` must be the transposed table.
    pub fn add_constraint(&mut self, x: usize, y: usize, fwd: u32, bwd: u32) {
        if x == y {
            // a self-loop is a unary restriction
            let t = &self.tables[fwd as usize];
            let mut keep = 0;
            let mut d = self.domains[x];
            while d != 0 {
                let a = d.trailing_zeros();
                d &= d - 1;
                if t[a as usize] >> a & 1 == 1 {
                    keep |= 1 << a;
                }
            }
            self.domains[x] = keep;
            return;
        }
        // arcs live on the variable whose change triggers the revision
        self.arcs[y].push(Arc { other: x as u32, table: fwd });
        self.arcs[x].push(Arc { other: y as u32, table: bwd });
    }

    pub fn restrict(&mut self, x: usize, mask: u64) {
        self.domains[x] &= mask;
    }

    /// Static branching order (a permutation of the variables).
    pub fn set_order(&mut self, order: Vec<u32>) {
        debug_assert_eq!(order.len(), self.len());
        self.order = order;
    }

    pub fn domains(&self) -> &[u64] {
        &self.domains
    }

    /// Runs a search, calling `on_solution` for each solution until it breaks.
    pub fn solve(
        &self,
        values: ValueOrder,
        budget: Budget,
        mut on_solution: impl FnMut(&[Letter]) -> ControlFlow<()>,
    ) -> Search<()> {
        let mut st = State {
            csp: self,
            dom: self.domains.clone(),
            trail: Vec::new(),
            nodes: 0,
            budget,
            rng: match values {
                ValueOrder::Shuffled(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
                ValueOrder::Ascending => None,
            },
            queue: VecDeque::new(),
            in_queue: vec![false; self.len()],
            out: vec![0; self.len()],
        };
        if st.dom.contains(&0) {
            return Search::Done(());
        }
        let all: Vec<u32> = (0..self.len() as u32).collect();
        if !st.propagate(&all) {
            return Search::Done(());
        }
        match st.search(0, &mut on_solution) {
            Step::Continue | Step::Stop => Search::Done(()),
            Step::Budget => Search::OutOfBudget { nodes: st.nodes },
        }
    }

    /// First solution in the search order.
    pub fn find_one(&self, values: ValueOrder, budget: Budget) -> Search<Option<Vec<Letter>>> {
        let mut found = None;
        match self.solve(values, budget, |s| {
            found = Some(s.to_vec());
            ControlFlow::Break(())
        }) {
            Search::Done(()) => Search::Done(found),
            Search::OutOfBudget { nodes } => Search::OutOfBudget { nodes },
        }
    }

    /// Exact number of solutions.
    pub fn count(&self, budget: Budget) -> Search<BigUint> {
        let mut n = BigUint::zero();
        let one = BigUint::one();
        match self.solve(ValueOrder::Ascending, budget, |_| {
            n += &one;
            ControlFlow::Continue(())
        }) {
            Search::Done(()) => Search::Done(n),
            Search::OutOfBudget { nodes } => Search::OutOfBudget { nodes },
        }
    }
}

enum Step {
    Continue,
    Stop,
    Budget,
}

struct State<'a> {
    csp: &'a Csp,
    dom: Vec<u64>,
    trail: Vec<(u32, u64)>,
    nodes: u64,
    budget: Budget,
    rng: Option<ChaCha8Rng>,
    queue: VecDeque<u32>,
    in_queue: Vec<bool>,
    out: Vec<Letter>,
}

impl State<'_> {
    fn set(&mut self, x: u32, d: u64) {
        self.trail.push((x, self.dom[x as usize]));
        self.dom[x as usize] = d;
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (x, d) = self.trail.pop().unwrap();
            self.dom[x as usize] = d;
        }
    }

    /// AC-3 from the given changed variables. Returns false on a wipe-out.
    fn propagate(&mut self, changed: &[u32]) -> bool {
        for &x in changed {
            if !self.in_queue[x as usize] {
                self.in_queue[x as usize] = true;
                self.queue.push_back(x);
            }
        }
        while let Some(y) = self.queue.pop_front() {
            self.in_queue[y as usize] = false;
            let dy = self.dom[y as usize];
            // revise every neighbour x against y
            for arc_idx in 0..self.csp.arcs[y as usize].len() {
                let arc = self.csp.arcs[y as usize][arc_idx];
                let x = arc.other;
                let dx = self.dom[x as usize];
                let table = &self.csp.tables[arc.table as usize];
                let mut keep = 0u64;
                let mut rest = dx;
                while rest != 0 {
                    let a = rest.trailing_zeros();
                    rest &= rest - 1;
                    if table[a as usize] & dy != 0 {
                        keep |= 1 << a;
                    }
                }
                if keep != dx {
                    if keep == 0 {
                        self.clear_queue();
                        return false;
                    }
                    self.set(x, keep);
                    if !self.in_queue[x as usize] {
                        self.in_queue[x as usize] = true;
                        self.queue.push_back(x);
                    }
                }
            }
        }
        true
    }

    fn clear_queue(&mut self) {
        while let Some(z) = self.queue.pop_front() {
            self.in_queue[z as usize] = false;
        }
    }

    fn search(&mut self, start: usize, on_solution: &mut impl FnMut(&[Letter]) -> ControlFlow<()>) -> Step {
        let order = &self.csp.order;
        let mut pos = start;
        while pos < order.len() && self.dom[order[pos] as usize].count_ones() == 1 {
            pos += 1;
        }
        if pos == order.len() {
            for (i, d) in self.dom.iter().enumerate() {
                self.out[i] = d.trailing_zeros() as Letter;
            }
            return match on_solution(&self.out) {
                ControlFlow::Continue(()) => Step::Continue,
                ControlFlow::Break(()) => Step::Stop,
            };
        }
        let x = order[pos];
        let d = self.dom[x as usize];
        let mut vals: Vec<u32> = Vec::with_capacity(d.count_ones() as usize);
        let mut rest = d;
        while rest != 0 {
            vals.push(rest.trailing_zeros());
            rest &= rest - 1;
        }
        if let Some(rng) = self.rng.as_mut() {
            vals.shuffle(rng);
        }
        for a in vals {
            self.nodes += 1;
            if self.nodes > self.budget.max_nodes {
                return Step::Budget;
            }
            let mark = self.trail.len();
            self.set(x, 1 << a);
            if self.propagate(&[x]) {
                match self.search(pos + 1, on_solution) {
                    Step::Continue => {}
                    other => {
                        self.undo_to(mark);
                        return other;
                    }
                }
            }
            self.undo_to(mark);
        }
        Step::Continue
    }
}

/// A lattice query compiled into a [`Csp`]: variables are the region sites.
pub struct LatticeProblem {
    pub csp: Csp,
    pub region: Shape,
    /// False when the fixed pattern alone already breaks a constraint.
    pub fixed_consistent: bool,
}

impl LatticeProblem {
    /// Builds the problem of filling `region` next to `fixed`.
    pub fn build(x: &Nnsft, fixed: &Pattern, region: &Shape) -> Result<LatticeProblem, SftError> {
        x.check_dim(region)?;
        x.check_dim(fixed.shape())?;
        if !region.is_disjoint(fixed.shape()) {
            return Err(SftError::Overlap);
        }
        let size = x.alphabet_size();
        let full = crate::pattern::full_mask(size);
        let mut csp = Csp::new(vec![full; region.len()]);
        let mut tables = Vec::with_capacity(x.dim());
        for axis in 0..x.dim() {
            let rel = x.relation(axis);
            let f = csp.add_table(rel.forward.clone());
            let b = csp.add_table(rel.backward.clone());
            tables.push((f, b));
        }
        for (i, s) in region.iter().enumerate() {
            for axis in 0..x.dim() {
                for sign in [1, -1] {
                    let Ok(q) = s.step(axis, sign) else { continue };
                    if let Some(a) = fixed.get(&q) {
                        csp.restrict(i, x.compatible_with_neighbour(axis, sign, a));
                    } else if sign > 0 {
                        if let Some(j) = region.index_of(&q) {
                            // s at p, q at p + e_axis
                            csp.add_constraint(i, j, tables[axis].0, tables[axis].1);
                        }
                    }
                }
            }
        }
        csp.set_order(distance_order(region, fixed.shape()));
        Ok(LatticeProblem { csp, region: region.clone(), fixed_consistent: x.is_locally_admissible(fixed) })
    }

    pub fn to_pattern(&self, values: &[Letter]) -> Pattern {
        Pattern::new(self.region.clone(), values.to_vec()).expect("one value per region site")
    }
}

/// Region sites ordered by (distance to the fixed shape, canonical order).
pub fn distance_order(region: &Shape, fixed: &Shape) -> Vec<u32> {
    let mut keyed: Vec<(u64, u32)> = region
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let d = fixed.iter().map(|q| s.dist(q)).min().unwrap_or(u64::MAX);
            (d, i as u32)
        })
        .collect();
    keyed.sort_unstable();
    keyed.into_iter().map(|(_, i)| i).collect()
}

/// Some fill `w` of `region` with `w ∪ fixed` locally admissible.
pub fn extend_locally_admissible(x: &Nnsft, fixed: &Pattern, region: &Shape) -> Result<Option<Pattern>, SftError> {
    Ok(extend_with(x, fixed, region, ValueOrder::Ascending, Budget::UNLIMITED)?.done().flatten())
}

/// [`extend_locally_admissible`] with explicit value order and budget.
pub fn extend_with(
    x: &Nnsft,
    fixed: &Pattern,
    region: &Shape,
    values: ValueOrder,
    budget: Budget,
) -> Result<Search<Option<Pattern>>, SftError> {
    let prob = LatticeProblem::build(x, fixed, region)?;
    if !prob.fixed_consistent {
        return Ok(Search::Done(None));
    }
    Ok(match prob.csp.find_one(values, budget) {
        Search::Done(v) => Search::Done(v.map(|v| prob.to_pattern(&v))),
        Search::OutOfBudget { nodes } => Search::OutOfBudget { nodes },
    })
}

/// Exact number of locally admissible fills of `region` next to `fixed`.
pub fn count_extensions(x: &Nnsft, fixed: &Pattern, region: &Shape) -> Result<BigUint, SftError> {
    let prob = LatticeProblem::build(x, fixed, region)?;
    if !prob.fixed_consistent {
        return Ok(BigUint::zero());
    }
    Ok(prob.csp.count(Budget::UNLIMITED).done().expect("unlimited budget"))
}

/// Streams every locally admissible fill of `region` next to `fixed`.
pub fn for_each_extension(
    x: &Nnsft,
    fixed: &Pattern,
    region: &Shape,
    mut f: impl FnMut(&Pattern) -> ControlFlow<()>,
) -> Result<(), SftError> {
    let prob = LatticeProblem::build(x, fixed, region)?;
    if !prob.fixed_consistent {
        return Ok(());
    }
    let _ = prob.csp.solve(ValueOrder::Ascending, Budget::UNLIMITED, |v| f(&prob.to_pattern(v)));
    Ok(())
}

/// The three solver modes behind one entry point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    FindOne,
    Count,
    Exhaust,
}

/// Result of [`extend`] for each [`Mode`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Extension {
    Found(Option<Pattern>),
    Count(BigUint),
    All(Vec<Pattern>),
}

pub fn extend(x: &Nnsft, fixed: &Pattern, region: &Shape, mode: Mode) -> Result<Extension, SftError> {
    Ok(match mode {
        Mode::FindOne => Extension::Found(extend_locally_admissible(x, fixed, region)?),
        Mode::Count => Extension::Count(count_extensions(x, fixed, region)?),
        Mode::Exhaust => {
            let mut all = Vec::new();
            for_each_extension(x, fixed, region, |p| {
                all.push(p.clone());
                ControlFlow::Continue(())
            })?;
            Extension::All(all)
        }
    })
}

/// Finds a locally admissible fill of the torus `∏ Z/period_i`.
pub fn solve_torus(x: &Nnsft, periods: &[usize], budget: Budget) -> Result<Search<Option<Vec<Letter>>>, SftError> {
    if periods.len() != x.dim() || periods.contains(&0) {
        return Err(SftError::Invalid("periods must be positive, one per axis".into()));
    }
    let n: usize = periods.iter().product();
    let mut csp = Csp::new(vec![x.alphabet().full_mask(); n]);
    let mut tables = Vec::new();
    for axis in 0..x.dim() {
        let rel = x.relation(axis);
        let f = csp.add_table(rel.forward.clone());
        let b = csp.add_table(rel.backward.clone());
        tables.push((f, b));
    }
    // row-major index with the last axis fastest
    let mut strides = vec![1usize; x.dim()];
    for k in (0..x.dim().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * periods[k + 1];
    }
    for i in 0..n {
        for axis in 0..x.dim() {
            let c = (i / strides[axis]) % periods[axis];
            let j = i - c * strides[axis] + ((c + 1) % periods[axis]) * strides[axis];
            csp.add_constraint(i, j, tables[axis].0, tables[axis].1);
        }
    }
    Ok(csp.find_one(ValueOrder::Ascending, budget))
}
