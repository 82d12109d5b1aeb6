//! Enumerating tensor algebras: reachable models of `tensor(L, R)` on
//! carriers `c0..c(n-1)`, counted up to isomorphism fixing the generators.
//!
//! Models are built one table cell at a time with unit propagation over the
//! ground equation instances: an instance whose sides reduce to a known
//! value and a single open cell forces that cell. When the carrier has at
//! most one non-generator the generator-fixing permutation group is trivial
//! and two shortcuts apply: once every instance is retired the open cells
//! are independent, so their completions are counted as a product, and
//! reachability is settled by inclusion-exclusion over proper closed
//! subsets containing the generators rather than per model. Larger carriers
//! materialize each model, filter by reachability directly and deduplicate
//! by the least table vector under non-generator permutations. Least-value
//! branching only prunes the search (canonical forms are deduplicated
//! either way), so `symmetry_breaking` changes node counts, never class
//! counts.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::rc::Rc;

use itertools::Itertools;
use serde::Serialize;

use crate::model::{FinAlgebra, OpTable};
use crate::theory::{self, Term, Theory};
use crate::value::{index_tuples, FiniteSet};

/// Completions scanned per shortcut leaf while harvesting sample models.
const SAMPLE_SCAN_LIMIT: usize = 10_000;

/// A theory per carrier size. Most theories do not depend on the carrier;
/// the lowered well-order signature needs one flattened operation per arity
/// up to the carrier size, so it grows with `n`.
#[derive(Clone)]
pub struct TheoryFamily {
    pub name: String,
    make: Rc<dyn Fn(usize) -> Theory>,
}

impl TheoryFamily {
    pub fn fixed(t: Theory) -> TheoryFamily {
        let name = t.name.clone();
        TheoryFamily { name, make: Rc::new(move |_| t.clone()) }
    }

    pub fn wellorder_lowered() -> TheoryFamily {
        TheoryFamily {
            name: "WellOrderLowered".into(),
            make: Rc::new(|n| theory::well_order_lowered(n.max(1))),
        }
    }

    /// Resolve a command-line name. Bare `wellorder` means the size-indexed
    /// family; anything else must be a built-in theory, taken at a fixed
    /// size. Theory display names are accepted alongside the short forms.
    pub fn by_name(spec: &str) -> Result<TheoryFamily, String> {
        let head = spec.split_once(':').map_or(spec, |(h, _)| h);
        let canon = head.to_ascii_lowercase();
        if canon == "wellorder" || canon == "wellorderlowered" {
            if spec.contains(':') {
                let t = theory::builtin_theory(&format!("wellorder:{}", spec.split_once(':').unwrap().1))
                    .ok_or_else(|| format!("bad well-order size in '{spec}'"))?;
                return Ok(TheoryFamily::fixed(t));
            }
            return Ok(TheoryFamily::wellorder_lowered());
        }
        let alias = match canon.as_str() {
            "sigma22free" => "sigma22",
            "emptytheory" => "empty",
            "spuriousanalog" => "spurious",
            "statetheory" => "state",
            other => other,
        };
        let tail = spec.split_once(':').map(|(_, t)| t);
        let lookup = match tail {
            Some(t) => format!("{alias}:{t}"),
            None => alias.to_string(),
        };
        theory::builtin_theory(&lookup)
            .map(TheoryFamily::fixed)
            .ok_or_else(|| format!("unknown theory '{spec}'"))
    }

    pub fn at(&self, n: usize) -> Theory {
        (self.make)(n)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchConfig {
    pub generators: usize,
    pub max_carrier: usize,
    /// Test-set bound handed to law checks when samples are re-verified.
    pub test_set_bound: usize,
    pub symmetry_breaking: bool,
    /// Search-node budget shared across all carrier sizes.
    pub budget: u64,
    /// Sample models kept per size for re-verification.
    pub sample_cap: usize,
}

impl Default for SearchConfig {
    fn default() -> SearchConfig {
        SearchConfig {
            generators: 1,
            max_carrier: 3,
            test_set_bound: 2,
            symmetry_breaking: true,
            budget: 50_000_000,
            sample_cap: 8,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SizeCount {
    pub size: usize,
    pub classes: u128,
    pub nodes: u64,
    pub partial: bool,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EnumReport {
    pub left: String,
    pub right: String,
    pub generators: usize,
    pub max_carrier: usize,
    pub symmetry_breaking: bool,
    pub per_size: Vec<SizeCount>,
    pub total: u128,
    pub nodes: u64,
    pub partial: bool,
    #[serde(skip)]
    pub samples: Vec<FinAlgebra>,
}

/// Count reachable models of `tensor(left, right)` per carrier size up to
/// `cfg.max_carrier`, with generators pinned to the first carrier elements.
/// Budget exhaustion and arithmetic overflow surface as the partial flag,
/// never as a silently wrong count.
pub fn enumerate_tensor_algebras(
    left: &TheoryFamily,
    right: &TheoryFamily,
    cfg: &SearchConfig,
) -> Result<EnumReport, String> {
    if cfg.max_carrier == 0 {
        return Err("max_carrier must be at least 1".into());
    }
    if cfg.max_carrier > 8 {
        return Err("carriers above 8 elements are not supported".into());
    }
    if cfg.generators > cfg.max_carrier {
        return Err("more generators than carrier elements".into());
    }
    let mut report = EnumReport {
        left: left.name.clone(),
        right: right.name.clone(),
        generators: cfg.generators,
        max_carrier: cfg.max_carrier,
        symmetry_breaking: cfg.symmetry_breaking,
        per_size: Vec::new(),
        total: 0,
        nodes: 0,
        partial: false,
        samples: Vec::new(),
    };
    let mut node_budget = cfg.budget;
    for n in 1..=cfg.max_carrier {
        if n < cfg.generators {
            report.per_size.push(SizeCount { size: n, classes: 0, nodes: 0, partial: false });
            continue;
        }
        let lt = left.at(n);
        lt.validate().map_err(|e| format!("left theory at size {n}: {e}"))?;
        let rt = right.at(n);
        rt.validate().map_err(|e| format!("right theory at size {n}: {e}"))?;
        let full = theory::theory_tensor(&lt, &rt);
        let mut engine = Engine::new(&full, n, cfg, node_budget)?;
        let counted = engine.run(n);
        node_budget = node_budget.saturating_sub(counted.nodes);
        report.nodes += counted.nodes;
        report.partial |= counted.partial;
        report.total = report.total.saturating_add(counted.classes);
        report.samples.append(&mut engine.samples);
        report.per_size.push(counted);
        if node_budget == 0 {
            report.partial = true;
            break;
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------

/// Ground term over table cells: variables are already carrier indices.
#[derive(Clone, Debug, PartialEq, Eq)]
enum PTerm {
    Const(usize),
    App(usize, Vec<PTerm>),
}

/// Partial value of a ground term under the current assignment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum PE {
    Known(usize),
    Cell(usize),
    Open,
}

struct OpInfo {
    name: String,
    arity: usize,
    offset: usize,
    cells: usize,
}

#[derive(Default)]
struct Undo {
    assigned: Vec<usize>,
    retired: Vec<usize>,
}

struct Engine {
    n: usize,
    g: usize,
    ops: Vec<OpInfo>,
    cell_op: Vec<usize>,
    total_cells: usize,
    instances: Vec<(PTerm, PTerm)>,
    live: Vec<usize>,
    assign: Vec<Option<usize>>,
    allowed: Vec<u32>,
    op_open: Vec<usize>,
    trivial: bool,
    symmetry: bool,
    perms: Vec<Vec<usize>>,
    // pass-local state
    count: u128,
    overflow: bool,
    collect: bool,
    canon: BTreeSet<Vec<usize>>,
    // across passes
    sample_cap: usize,
    samples: Vec<FinAlgebra>,
    nodes: u64,
    node_budget: u64,
    aborted: bool,
}

impl Engine {
    fn new(full: &Theory, n: usize, cfg: &SearchConfig, node_budget: u64) -> Result<Engine, String> {
        let g = cfg.generators;
        let mut names: Vec<(String, usize)> =
            full.ops.iter().map(|o| (o.name.clone(), o.arity)).collect();
        names.sort();
        let mut ops = Vec::new();
        let mut offset = 0usize;
        for (name, arity) in names {
            let cells = n
                .checked_pow(arity as u32)
                .filter(|&c| c <= 1_000_000 && offset + c <= 1_000_000)
                .ok_or_else(|| format!("table for '{name}' is too large at size {n}"))?;
            ops.push(OpInfo { name, arity, offset, cells });
            offset += cells;
        }
        let total_cells = offset;
        let mut cell_op = vec![0; total_cells];
        for (k, op) in ops.iter().enumerate() {
            for c in op.offset..op.offset + op.cells {
                cell_op[c] = k;
            }
        }

        let op_index: BTreeMap<&str, usize> =
            ops.iter().enumerate().map(|(k, o)| (o.name.as_str(), k)).collect();
        let mut budget_check = 0u128;
        for eq in &full.equations {
            let vars = eq.context.len() as u32;
            budget_check += (n as u128).pow(vars);
            if budget_check > 2_000_000 {
                return Err(format!("too many ground equation instances at size {n}"));
            }
        }
        let mut instances = Vec::new();
        for eq in &full.equations {
            for tuple in index_tuples(n, eq.context.len()) {
                let env: BTreeMap<&str, usize> = eq
                    .context
                    .iter()
                    .map(String::as_str)
                    .zip(tuple.iter().copied())
                    .collect();
                let l = compile(&eq.lhs, &env, &op_index);
                let r = compile(&eq.rhs, &env, &op_index);
                if l != r {
                    instances.push((l, r));
                }
            }
        }

        let trivial = n <= g + 1;
        let perms = if trivial {
            Vec::new()
        } else {
            (g..n)
                .permutations(n - g)
                .map(|tail| {
                    let mut p: Vec<usize> = (0..g).collect();
                    p.extend(tail);
                    p
                })
                .collect()
        };
        let live: Vec<usize> = (0..instances.len()).collect();
        Ok(Engine {
            n,
            g,
            ops,
            cell_op,
            total_cells,
            live,
            instances,
            assign: vec![None; total_cells],
            allowed: vec![0; total_cells],
            op_open: Vec::new(),
            trivial,
            symmetry: cfg.symmetry_breaking,
            perms,
            count: 0,
            overflow: false,
            collect: false,
            canon: BTreeSet::new(),
            sample_cap: cfg.sample_cap,
            samples: Vec::new(),
            nodes: 0,
            node_budget,
            aborted: false,
        })
    }

    fn run(&mut self, size: usize) -> SizeCount {
        let classes;
        if self.trivial {
            self.prepare_pass(false, true);
            self.search(self.g);
            let all = self.count;
            let all_overflow = self.overflow;
            // Inclusion-exclusion: with one non-generator the only proper
            // closed subset containing the generators is the generator set
            // itself.
            let mut inner = 0;
            if self.n == self.g + 1 {
                self.prepare_pass(true, false);
                self.search(self.g);
                inner = self.count;
            }
            classes = all.saturating_sub(inner);
            self.overflow |= all_overflow;
        } else {
            self.prepare_pass(false, true);
            self.search(self.g);
            classes = self.canon.len() as u128;
        }
        SizeCount {
            size,
            classes,
            nodes: self.nodes,
            partial: self.aborted || self.overflow,
        }
    }

    fn prepare_pass(&mut self, restrict_to_gens: bool, collect: bool) {
        let full_mask = (1u32 << self.n) - 1;
        let gen_mask = (1u32 << self.g).wrapping_sub(1);
        for c in 0..self.total_cells {
            self.assign[c] = None;
            self.allowed[c] =
                if restrict_to_gens && self.args_all_gens(c) { gen_mask } else { full_mask };
        }
        self.op_open = self.ops.iter().map(|o| o.cells).collect();
        self.live = (0..self.instances.len()).collect();
        self.count = 0;
        self.overflow = false;
        self.collect = collect;
    }

    fn args_all_gens(&self, cell: usize) -> bool {
        let op = &self.ops[self.cell_op[cell]];
        let mut idx = cell - op.offset;
        for _ in 0..op.arity {
            if idx % self.n >= self.g {
                return false;
            }
            idx /= self.n;
        }
        true
    }

    // -- propagation ---------------------------------------------------------

    fn peval(&self, t: &PTerm) -> PE {
        let (op, args) = match t {
            PTerm::Const(v) => return PE::Known(*v),
            PTerm::App(op, args) => (*op, args),
        };
        let info = &self.ops[op];
        if self.op_open[op] == 0 {
            // A fully assigned constant table decides the value whatever
            // the arguments turn out to be.
            if let Some(v) = self.op_constant(op) {
                return PE::Known(v);
            }
        }
        let mut vals: Vec<Option<usize>> = Vec::with_capacity(args.len());
        let mut cell_arg: Option<(usize, usize)> = None;
        let mut open = false;
        for (i, a) in args.iter().enumerate() {
            match self.peval(a) {
                PE::Known(v) => vals.push(Some(v)),
                PE::Cell(c) => {
                    vals.push(None);
                    if cell_arg.is_some() {
                        open = true;
                    } else {
                        cell_arg = Some((i, c));
                    }
                }
                PE::Open => {
                    vals.push(None);
                    open = true;
                }
            }
        }
        if open {
            return PE::Open;
        }
        match cell_arg {
            None => {
                let mut idx = 0;
                for v in &vals {
                    idx = idx * self.n + v.unwrap();
                }
                let cell = info.offset + idx;
                match self.assign[cell] {
                    Some(v) => PE::Known(v),
                    None => PE::Cell(cell),
                }
            }
            Some((pos, c)) if self.op_open[op] == 0 => {
                // One unknown argument over a full table: the result column
                // may be constant or may copy the argument through.
                let mut idx0 = 0;
                for v in &vals {
                    idx0 = idx0 * self.n + v.unwrap_or(0);
                }
                let stride = self.n.pow((info.arity - 1 - pos) as u32);
                let first = self.assign[info.offset + idx0].unwrap();
                let mut constant = true;
                let mut identity = first == 0;
                for v in 1..self.n {
                    let r = self.assign[info.offset + idx0 + v * stride].unwrap();
                    constant &= r == first;
                    identity &= r == v;
                }
                if constant {
                    PE::Known(first)
                } else if identity {
                    PE::Cell(c)
                } else {
                    PE::Open
                }
            }
            Some(_) => PE::Open,
        }
    }

    fn op_constant(&self, op: usize) -> Option<usize> {
        let info = &self.ops[op];
        let first = self.assign[info.offset].unwrap();
        for c in info.offset + 1..info.offset + info.cells {
            if self.assign[c] != Some(first) {
                return None;
            }
        }
        Some(first)
    }

    fn set(&mut self, cell: usize, v: usize, undo: &mut Undo) {
        debug_assert!(self.assign[cell].is_none());
        self.assign[cell] = Some(v);
        self.op_open[self.cell_op[cell]] -= 1;
        undo.assigned.push(cell);
    }

    fn unwind(&mut self, undo: Undo) {
        for &cell in undo.assigned.iter().rev() {
            self.assign[cell] = None;
            self.op_open[self.cell_op[cell]] += 1;
        }
        self.live.extend(undo.retired);
    }

    /// Retire decided instances and force single-cell ones until a fixpoint
    /// or a contradiction. Forced values feed the least-value bound via
    /// `used`: a propagated fresh value licenses branching up to it later.
    fn propagate(&mut self, used: &mut usize, undo: &mut Undo) -> bool {
        loop {
            let mut changed = false;
            let mut i = 0;
            while i < self.live.len() {
                let inst = self.live[i];
                let (a, b) = {
                    let (l, r) = &self.instances[inst];
                    (self.peval(l), self.peval(r))
                };
                match (a, b) {
                    (PE::Known(x), PE::Known(y)) => {
                        if x != y {
                            return false;
                        }
                        self.live.swap_remove(i);
                        undo.retired.push(inst);
                        changed = true;
                    }
                    (PE::Known(x), PE::Cell(c)) | (PE::Cell(c), PE::Known(x)) => {
                        if self.allowed[c] & (1 << x) == 0 {
                            return false;
                        }
                        self.set(c, x, undo);
                        *used = (*used).max(x + 1);
                        self.live.swap_remove(i);
                        undo.retired.push(inst);
                        changed = true;
                    }
                    (PE::Cell(c), PE::Cell(d)) if c == d => {
                        self.live.swap_remove(i);
                        undo.retired.push(inst);
                        changed = true;
                    }
                    _ => i += 1,
                }
            }
            if !changed {
                return true;
            }
        }
    }

    // -- search ---------------------------------------------------------------

    fn search(&mut self, used: usize) {
        if self.aborted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.node_budget {
            self.aborted = true;
            return;
        }
        let mut used = used;
        let mut undo = Undo::default();
        if self.propagate(&mut used, &mut undo) {
            if self.trivial && self.live.is_empty() {
                self.shortcut();
            } else if let Some(cell) = self.next_open() {
                let cap = if self.symmetry { used.min(self.n - 1) } else { self.n - 1 };
                for v in 0..=cap {
                    if self.allowed[cell] & (1 << v) == 0 {
                        continue;
                    }
                    let mut branch = Undo::default();
                    self.set(cell, v, &mut branch);
                    self.search(used.max(v + 1));
                    self.unwind(branch);
                    if self.aborted {
                        break;
                    }
                }
            } else {
                self.leaf();
            }
        }
        self.unwind(undo);
    }

    fn next_open(&self) -> Option<usize> {
        self.assign.iter().position(Option::is_none)
    }

    /// Every instance is retired, so the open cells are independent and the
    /// completions form a product. Only the generator-trivial regime gets
    /// here; nothing needs deduplication.
    fn shortcut(&mut self) {
        let mut prod: u128 = 1;
        let mut open = Vec::new();
        for c in 0..self.total_cells {
            if self.assign[c].is_none() {
                open.push(c);
                let k = self.allowed[c].count_ones() as u128;
                if k == 0 {
                    return;
                }
                match prod.checked_mul(k) {
                    Some(p) => prod = p,
                    None => {
                        self.overflow = true;
                        return;
                    }
                }
            }
        }
        match self.count.checked_add(prod) {
            Some(c) => self.count = c,
            None => {
                self.overflow = true;
                return;
            }
        }
        if self.collect && self.samples.len() < self.sample_cap {
            self.scan_samples(&open);
        }
    }

    /// Walk completions of the open cells, keep reachable ones as samples.
    fn scan_samples(&mut self, open: &[usize]) {
        let choices: Vec<Vec<usize>> = open
            .iter()
            .map(|&c| (0..self.n).filter(|&v| self.allowed[c] & (1 << v) != 0).collect())
            .collect();
        let mut pick = vec![0usize; open.len()];
        let mut scanned = 0;
        'scan: loop {
            for (k, &c) in open.iter().enumerate() {
                self.assign[c] = Some(choices[k][pick[k]]);
            }
            if self.reachable_full() {
                let model = self.materialize();
                self.samples.push(model);
                if self.samples.len() >= self.sample_cap {
                    break;
                }
            }
            scanned += 1;
            if scanned >= SAMPLE_SCAN_LIMIT {
                break;
            }
            let mut k = open.len();
            loop {
                if k == 0 {
                    break 'scan;
                }
                k -= 1;
                pick[k] += 1;
                if pick[k] < choices[k].len() {
                    break;
                }
                pick[k] = 0;
            }
        }
        for &c in open {
            self.assign[c] = None;
        }
    }

    /// Fully assigned model outside the trivial regime: filter by
    /// reachability, deduplicate by canonical table vector.
    fn leaf(&mut self) {
        if self.trivial {
            self.count = self.count.saturating_add(1);
            return;
        }
        if !self.reachable_full() {
            return;
        }
        let table: Vec<usize> = self.assign.iter().map(|v| v.unwrap()).collect();
        let mut best = table.clone();
        for p in &self.perms {
            let mut image = vec![0usize; self.total_cells];
            for op in &self.ops {
                for (j, tuple) in index_tuples(self.n, op.arity).enumerate() {
                    let mut idx = 0;
                    for &a in &tuple {
                        idx = idx * self.n + p[a];
                    }
                    image[op.offset + idx] = p[table[op.offset + j]];
                }
            }
            if image < best {
                best = image;
            }
        }
        if self.canon.insert(best) && self.collect && self.samples.len() < self.sample_cap {
            let model = self.materialize();
            self.samples.push(model);
        }
    }

    fn reachable_full(&self) -> bool {
        let mut inset = vec![false; self.n];
        let mut cnt = 0;
        for i in 0..self.g {
            inset[i] = true;
            cnt += 1;
        }
        loop {
            let mut changed = false;
            for op in &self.ops {
                for (j, tuple) in index_tuples(self.n, op.arity).enumerate() {
                    if tuple.iter().any(|&a| !inset[a]) {
                        continue;
                    }
                    let v = self.assign[op.offset + j].unwrap();
                    if !inset[v] {
                        inset[v] = true;
                        cnt += 1;
                        changed = true;
                    }
                }
            }
            if cnt == self.n {
                return true;
            }
            if !changed {
                return false;
            }
        }
    }

    fn materialize(&self) -> FinAlgebra {
        let carrier = FiniteSet::atoms("c", self.n);
        let generators = (0..self.g).map(|i| carrier.get(i).clone()).collect();
        let mut tables = BTreeMap::new();
        for op in &self.ops {
            let data: Vec<usize> =
                self.assign[op.offset..op.offset + op.cells].iter().map(|v| v.unwrap()).collect();
            tables.insert(op.name.clone(), OpTable::new(op.arity, data));
        }
        FinAlgebra { carrier, generators, tables }
    }
}

fn compile(t: &Term, env: &BTreeMap<&str, usize>, op_index: &BTreeMap<&str, usize>) -> PTerm {
    match t {
        Term::Var(v) => PTerm::Const(env[v.as_str()]),
        Term::App(op, args) => PTerm::App(
            op_index[op.as_str()],
            args.iter().map(|a| compile(a, env, op_index)).collect(),
        ),
    }
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{check_commutation_tables, maps_onto, saturate_free_tensor};

    fn family(spec: &str) -> TheoryFamily {
        TheoryFamily::by_name(spec).unwrap()
    }

    #[test]
    fn name_resolution() {
        assert_eq!(family("wellorder").at(3).ops.len(), 4);
        assert_eq!(family("wellorder:2").at(5).ops.len(), 3);
        assert_eq!(family("Semilattice").name, "Semilattice");
        assert_eq!(family("Sigma22Free").at(1).ops.len(), 2);
        assert!(TheoryFamily::by_name("nosuch").is_err());
    }

    #[test]
    fn two_empty_theories_leave_only_the_generator_point() {
        let cfg = SearchConfig { generators: 1, ..SearchConfig::default() };
        let rep = enumerate_tensor_algebras(&family("empty"), &family("empty"), &cfg).unwrap();
        assert!(!rep.partial);
        let classes: Vec<u128> = rep.per_size.iter().map(|s| s.classes).collect();
        assert_eq!(classes, vec![1, 0, 0]);
        assert_eq!(rep.total, 1);
    }

    #[test]
    fn semilattice_with_one_endomorphism_counts() {
        // Size-by-size by hand: bottomed join-semilattices reachable from
        // one generator are chains with the endomorphism u forced monotone
        // with u(bot) = bot. Size 1: everything collapses. Size 2: bot is
        // the non-generator, u(gen) free. Size 3: the generator is the top
        // (u(top) = mid, u(mid) in {bot, mid}) or the middle (u forced to
        // climb to the top).
        let cfg = SearchConfig { generators: 1, ..SearchConfig::default() };
        let left = family("semilattice");
        let right = family("unary");
        let rep = enumerate_tensor_algebras(&left, &right, &cfg).unwrap();
        assert!(!rep.partial);
        let classes: Vec<u128> = rep.per_size.iter().map(|s| s.classes).collect();
        assert_eq!(classes, vec![1, 2, 3]);
        assert_eq!(rep.total, 6);

        let off = SearchConfig { symmetry_breaking: false, ..cfg.clone() };
        let rep_off = enumerate_tensor_algebras(&left, &right, &off).unwrap();
        let classes_off: Vec<u128> = rep_off.per_size.iter().map(|s| s.classes).collect();
        assert_eq!(classes, classes_off);

        assert!(!rep.samples.is_empty());
        for s in &rep.samples {
            assert!(s.is_reachable());
            let n = s.carrier.len();
            let full = theory::theory_tensor(&left.at(n), &right.at(n));
            assert_eq!(s.check_equations(&full).unwrap(), None);
            assert!(check_commutation_tables(&left.at(n), &right.at(n), s).unwrap().ok);
        }
    }

    #[test]
    fn singleton_carrier_is_the_unique_tensor_algebra() {
        let cfg = SearchConfig { generators: 1, max_carrier: 1, ..SearchConfig::default() };
        let rep =
            enumerate_tensor_algebras(&family("semilattice"), &family("sigma22"), &cfg).unwrap();
        assert_eq!(rep.total, 1);
        assert_eq!(rep.per_size[0].classes, 1);
    }

    #[test]
    fn wellorder_sigma22_counts_are_stable_and_monotone() {
        let cfg = SearchConfig { generators: 2, max_carrier: 2, ..SearchConfig::default() };
        let left = family("wellorder");
        let right = family("sigma22");
        let rep = enumerate_tensor_algebras(&left, &right, &cfg).unwrap();
        assert!(!rep.partial);
        assert_eq!(rep.total, 128);

        let cfg3 = SearchConfig { generators: 2, max_carrier: 3, ..SearchConfig::default() };
        let rep3 = enumerate_tensor_algebras(&left, &right, &cfg3).unwrap();
        assert!(!rep3.partial);
        let classes: Vec<u128> = rep3.per_size.iter().map(|s| s.classes).collect();
        // Size 3 by hand: the flattened non-repetition and associativity
        // instances force iota_2 constantly bottom, the unit law fixes
        // iota_1, and the two binary trees are free: 3 * 3^16 total minus,
        // for each bottom choice among the generators, the 2 * 2^6 * 3^10
        // structures never leaving the generators.
        assert_eq!(classes, vec![0, 128, 121_581_891]);
        assert_eq!(rep3.total, 121_582_019);
        assert!(rep3.total >= rep.total);

        let off = SearchConfig { symmetry_breaking: false, ..cfg3 };
        let rep_off = enumerate_tensor_algebras(&left, &right, &off).unwrap();
        assert_eq!(rep_off.total, rep3.total);
        assert!(!rep.samples.is_empty());
        for s in &rep.samples {
            assert!(s.is_reachable());
            assert!(check_commutation_tables(&left.at(2), &right.at(2), s).unwrap().ok);
        }
    }

    #[test]
    fn exhausted_budget_reports_partial() {
        let cfg =
            SearchConfig { generators: 2, max_carrier: 3, budget: 10, ..SearchConfig::default() };
        let rep =
            enumerate_tensor_algebras(&family("wellorder"), &family("sigma22"), &cfg).unwrap();
        assert!(rep.partial);
    }

    #[test]
    fn free_tensor_covers_every_enumerated_algebra() {
        // tensor(Semilattice, Empty) over one generator: the free algebra
        // has the classes {bot, x0}, and each reachable model is a
        // quotient of it.
        let cfg = SearchConfig { generators: 1, ..SearchConfig::default() };
        let rep = enumerate_tensor_algebras(&family("semilattice"), &family("empty"), &cfg).unwrap();
        let classes: Vec<u128> = rep.per_size.iter().map(|s| s.classes).collect();
        assert_eq!(classes, vec![1, 1, 0]);
        let (free, sat) = saturate_free_tensor(&theory::empty_theory(), 1, 8, 100_000).unwrap();
        assert!(sat.stabilized);
        assert_eq!(sat.classes, 2);
        assert!(!rep.samples.is_empty());
        for s in &rep.samples {
            assert!(maps_onto(&free, s), "no structure map onto {:?}", s.tables);
        }
    }
}
