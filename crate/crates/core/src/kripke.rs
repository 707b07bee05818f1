//! Finite Kripke models with an epistemic relation `E`.
//!
//! A model is a rooted partial order `≤` on worlds, a relation `E ⊆ ≤`
//! closed downwards along `≤`, and a persistent valuation. Under IEL every
//! world must additionally have an `E`-successor.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::formula::{is_valid_atom, Formula, FormulaKind};
use crate::sequent::{Logic, Sequent};

pub type World = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unknown world {0}")]
    UnknownWorld(World),
    #[error("model has no worlds")]
    NoWorlds,
    #[error("invalid variable name {0:?}")]
    InvalidVariable(String),
    #[error("cannot glue an empty family of models")]
    EmptyGlue,
    #[error("variable {var} holds at the new root but not at world {world}")]
    RootPersistence { var: String, world: World },
    #[error("reach flags do not match the number of submodels")]
    ReachMismatch,
}

/// A finite Kripke model. Fields are validated on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeModel {
    worlds: BTreeSet<World>,
    root: World,
    leq: BTreeSet<(World, World)>,
    e: BTreeSet<(World, World)>,
    val: BTreeMap<World, BTreeSet<String>>,
}

impl KripkeModel {
    /// Builds a model, checking that every relation pair, the root and the
    /// valuation refer to listed worlds. Frame conditions are checked
    /// separately by [`check_frame`].
    pub fn new(
        worlds: impl IntoIterator<Item = World>,
        root: World,
        leq: impl IntoIterator<Item = (World, World)>,
        e: impl IntoIterator<Item = (World, World)>,
        val: impl IntoIterator<Item = (World, BTreeSet<String>)>,
    ) -> Result<KripkeModel, ModelError> {
        let worlds: BTreeSet<World> = worlds.into_iter().collect();
        if worlds.is_empty() {
            return Err(ModelError::NoWorlds);
        }
        let known = |w: World| {
            if worlds.contains(&w) {
                Ok(w)
            } else {
                Err(ModelError::UnknownWorld(w))
            }
        };
        known(root)?;
        let mut leq_set = BTreeSet::new();
        for (a, b) in leq {
            leq_set.insert((known(a)?, known(b)?));
        }
        let mut e_set = BTreeSet::new();
        for (a, b) in e {
            e_set.insert((known(a)?, known(b)?));
        }
        let mut val_map = BTreeMap::new();
        for (w, vars) in val {
            known(w)?;
            if let Some(bad) = vars.iter().find(|v| !is_valid_atom(v)) {
                return Err(ModelError::InvalidVariable(bad.clone()));
            }
            if !vars.is_empty() {
                val_map
                    .entry(w)
                    .or_insert_with(BTreeSet::new)
                    .extend(vars);
            }
        }
        Ok(KripkeModel {
            worlds,
            root,
            leq: leq_set,
            e: e_set,
            val: val_map,
        })
    }

    pub fn worlds(&self) -> &BTreeSet<World> {
        &self.worlds
    }

    pub fn root(&self) -> World {
        self.root
    }

    pub fn leq(&self) -> &BTreeSet<(World, World)> {
        &self.leq
    }

    pub fn e_rel(&self) -> &BTreeSet<(World, World)> {
        &self.e
    }

    pub fn len(&self) -> usize {
        self.worlds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.worlds.is_empty()
    }

    pub fn valuation(&self, w: World) -> BTreeSet<String> {
        self.val.get(&w).cloned().unwrap_or_default()
    }

    pub fn is_leq(&self, a: World, b: World) -> bool {
        self.leq.contains(&(a, b))
    }

    pub fn is_e(&self, a: World, b: World) -> bool {
        self.e.contains(&(a, b))
    }

    /// Worlds reachable from `w` by one `E` step.
    pub fn e_successors(&self, w: World) -> impl Iterator<Item = World> + '_ {
        self.e
            .range((w, World::MIN)..=(w, World::MAX))
            .map(|&(_, b)| b)
    }

    /// Worlds `v` with `w ≤ v`.
    pub fn successors(&self, w: World) -> impl Iterator<Item = World> + '_ {
        self.leq
            .range((w, World::MIN)..=(w, World::MAX))
            .map(|&(_, b)| b)
    }

    /// Worlds with no strict successor.
    pub fn final_worlds(&self) -> Vec<World> {
        self.worlds
            .iter()
            .copied()
            .filter(|&w| self.successors(w).all(|v| v == w))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ViolationKind {
    NotPoset,
    NotRooted,
    NotPersistent,
    Im1,
    Im2,
    Im3,
}

/// A failed frame condition with the worlds that witness it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub witness: Vec<World>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            ViolationKind::NotPoset => "order is not a partial order",
            ViolationKind::NotRooted => "world is not above the root",
            ViolationKind::NotPersistent => "valuation is not persistent",
            ViolationKind::Im1 => "E is not contained in the order",
            ViolationKind::Im2 => "E is not closed downwards along the order",
            ViolationKind::Im3 => "world has no E-successor",
        };
        write!(f, "{what} (worlds {:?})", self.witness)
    }
}

/// Checks the frame conditions; an empty result means `m` is a model for
/// `logic`.
pub fn check_frame(m: &KripkeModel, logic: Logic) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |kind, witness: Vec<World>| out.push(Violation { kind, witness });
    let worlds: Vec<World> = m.worlds.iter().copied().collect();

    for &w in &worlds {
        if !m.is_leq(w, w) {
            push(ViolationKind::NotPoset, vec![w]);
        }
    }
    for &(a, b) in &m.leq {
        if a != b && m.is_leq(b, a) && a < b {
            push(ViolationKind::NotPoset, vec![a, b]);
        }
        for c in m.successors(b) {
            if !m.is_leq(a, c) {
                push(ViolationKind::NotPoset, vec![a, b, c]);
            }
        }
    }
    for &w in &worlds {
        if !m.is_leq(m.root, w) {
            push(ViolationKind::NotRooted, vec![w]);
        }
    }
    for &(a, b) in &m.leq {
        if let Some(vars) = m.val.get(&a) {
            let above = m.val.get(&b);
            if vars.iter().any(|p| !above.is_some_and(|s| s.contains(p))) {
                push(ViolationKind::NotPersistent, vec![a, b]);
            }
        }
    }
    for &(a, b) in &m.e {
        if !m.is_leq(a, b) {
            push(ViolationKind::Im1, vec![a, b]);
        }
    }
    for &(a, b) in &m.leq {
        for c in m.e_successors(b) {
            if !m.is_e(a, c) {
                push(ViolationKind::Im2, vec![a, b, c]);
            }
        }
    }
    if logic == Logic::Iel {
        for &w in &worlds {
            if m.e_successors(w).next().is_none() {
                push(ViolationKind::Im3, vec![w]);
            }
        }
    }
    out
}

/// Forcing evaluator for one model. Truth sets of subformulas are cached
/// for the lifetime of the evaluator.
pub struct Evaluator<'m> {
    model: &'m KripkeModel,
    index: HashMap<World, usize>,
    up: Vec<Vec<usize>>,
    strict_up: Vec<Vec<usize>>,
    e_succ: Vec<Vec<usize>>,
    memo: HashMap<Formula, Vec<bool>>,
}

impl<'m> Evaluator<'m> {
    pub fn new(model: &'m KripkeModel) -> Evaluator<'m> {
        let worlds: Vec<World> = model.worlds.iter().copied().collect();
        let index: HashMap<World, usize> =
            worlds.iter().enumerate().map(|(i, &w)| (w, i)).collect();
        let up = worlds
            .iter()
            .map(|&w| model.successors(w).map(|v| index[&v]).collect())
            .collect();
        let strict_up = worlds
            .iter()
            .map(|&w| {
                model
                    .successors(w)
                    .filter(|&v| v != w)
                    .map(|v| index[&v])
                    .collect()
            })
            .collect();
        let e_succ = worlds
            .iter()
            .map(|&w| model.e_successors(w).map(|v| index[&v]).collect())
            .collect();
        Evaluator {
            model,
            index,
            up,
            strict_up,
            e_succ,
            memo: HashMap::new(),
        }
    }

    fn truth(&mut self, f: &Formula) -> Vec<bool> {
        if let Some(t) = self.memo.get(f) {
            return t.clone();
        }
        let n = self.up.len();
        let t: Vec<bool> = match f.kind() {
            FormulaKind::Var(p) => self
                .model
                .worlds
                .iter()
                .map(|w| self.model.val.get(w).is_some_and(|s| s.contains(p)))
                .collect(),
            FormulaKind::Bottom => vec![false; n],
            FormulaKind::And(a, b) => {
                let (ta, tb) = (self.truth(a), self.truth(b));
                (0..n).map(|i| ta[i] && tb[i]).collect()
            }
            FormulaKind::Or(a, b) => {
                let (ta, tb) = (self.truth(a), self.truth(b));
                (0..n).map(|i| ta[i] || tb[i]).collect()
            }
            FormulaKind::Imp(a, b) => {
                let (ta, tb) = (self.truth(a), self.truth(b));
                (0..n)
                    .map(|i| self.up[i].iter().all(|&j| !ta[j] || tb[j]))
                    .collect()
            }
            FormulaKind::K(a) => {
                let ta = self.truth(a);
                (0..n)
                    .map(|i| self.e_succ[i].iter().all(|&j| ta[j]))
                    .collect()
            }
        };
        self.memo.insert(f.clone(), t.clone());
        t
    }

    fn idx(&self, w: World) -> Result<usize, ModelError> {
        self.index
            .get(&w)
            .copied()
            .ok_or(ModelError::UnknownWorld(w))
    }

    pub fn forces(&mut self, w: World, f: &Formula) -> Result<bool, ModelError> {
        let i = self.idx(w)?;
        Ok(self.truth(f)[i])
    }

    pub fn satisfies(&mut self, w: World, s: &Sequent) -> Result<bool, ModelError> {
        let i = self.idx(w)?;
        if s.e && !self.model.is_e(w, w) {
            return Ok(false);
        }
        for a in &s.gamma {
            if !self.truth(a)[i] {
                return Ok(false);
            }
        }
        for b in &s.delta {
            if self.truth(b)[i] {
                return Ok(false);
            }
        }
        let strict = self.strict_up[i].clone();
        for c in &s.theta {
            let tc = self.truth(c);
            if strict.iter().any(|&j| !tc[j]) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Whether world `w` of `m` forces `f`.
pub fn forces(m: &KripkeModel, w: World, f: &Formula) -> Result<bool, ModelError> {
    Evaluator::new(m).forces(w, f)
}

/// Whether world `w` of `m` satisfies the sequent `s`.
pub fn satisfies(m: &KripkeModel, w: World, s: &Sequent) -> Result<bool, ModelError> {
    Evaluator::new(m).satisfies(w, s)
}

/// Number of worlds on the longest `≤`-chain starting at the root.
pub fn depth(m: &KripkeModel) -> usize {
    fn chain(m: &KripkeModel, w: World, memo: &mut HashMap<World, usize>) -> usize {
        if let Some(&d) = memo.get(&w) {
            return d;
        }
        let d = 1 + m
            .successors(w)
            .filter(|&v| v != w && !m.is_leq(v, w))
            .map(|v| chain(m, v, memo))
            .max()
            .unwrap_or(0);
        memo.insert(w, d);
        d
    }
    chain(m, m.root, &mut HashMap::new())
}

/// One world `0` with `≤ = {(0,0)}`, `E = {(0,0)}` or `∅`, and the given
/// valuation.
pub fn single_world(vars: &BTreeSet<String>, e_reflexive: bool) -> KripkeModel {
    let e = if e_reflexive { vec![(0, 0)] } else { vec![] };
    KripkeModel::new([0], 0, [(0, 0)], e, [(0, vars.clone())])
        .expect("single world model is well formed")
}

struct Placed {
    model: KripkeModel,
    map: BTreeMap<World, World>,
}

/// Copies `subs` into disjoint ranges starting at 1, in order.
fn place(subs: &[&KripkeModel]) -> Vec<Placed> {
    let mut next: World = 1;
    subs.iter()
        .map(|m| {
            let map: BTreeMap<World, World> = m
                .worlds
                .iter()
                .map(|&w| {
                    let id = next;
                    next += 1;
                    (w, id)
                })
                .collect();
            let r = |w: &World| map[w];
            let model = KripkeModel {
                worlds: m.worlds.iter().map(r).collect(),
                root: r(&m.root),
                leq: m.leq.iter().map(|(a, b)| (r(a), r(b))).collect(),
                e: m.e.iter().map(|(a, b)| (r(a), r(b))).collect(),
                val: m.val.iter().map(|(w, s)| (r(w), s.clone())).collect(),
            };
            Placed { model, map }
        })
        .collect()
}

fn check_root_persistence(
    root_vars: &BTreeSet<String>,
    subs: &[Placed],
) -> Result<(), ModelError> {
    if let Some(bad) = root_vars.iter().find(|v| !is_valid_atom(v)) {
        return Err(ModelError::InvalidVariable(bad.clone()));
    }
    for p in subs {
        let at_root = p.model.valuation(p.model.root);
        if let Some(var) = root_vars.iter().find(|v| !at_root.contains(*v)) {
            let original = p
                .map
                .iter()
                .find(|(_, &new)| new == p.model.root)
                .map_or(p.model.root, |(&old, _)| old);
            return Err(ModelError::RootPersistence {
                var: var.clone(),
                world: original,
            });
        }
    }
    Ok(())
}

fn assemble(
    root_vars: &BTreeSet<String>,
    subs: Vec<Placed>,
    mut root_e: BTreeSet<World>,
    reflexive: bool,
) -> KripkeModel {
    let mut worlds = BTreeSet::from([0]);
    let mut leq = BTreeSet::from([(0, 0)]);
    let mut e = BTreeSet::new();
    let mut val = BTreeMap::new();
    if !root_vars.is_empty() {
        val.insert(0, root_vars.clone());
    }
    for p in subs {
        for &w in &p.model.worlds {
            leq.insert((0, w));
        }
        worlds.extend(p.model.worlds);
        leq.extend(p.model.leq);
        e.extend(p.model.e);
        val.extend(p.model.val);
    }
    if reflexive {
        root_e.insert(0);
    }
    e.extend(root_e.into_iter().map(|w| (0, w)));
    KripkeModel {
        worlds,
        root: 0,
        leq,
        e,
        val,
    }
}

/// Places a fresh root `0` below the disjoint union of `submodels`.
///
/// The root `E`-reaches every world that some world of a submodel
/// `E`-reaches, and itself when `reflexive_root_e` is set. Submodel worlds
/// are renumbered consecutively from 1, in list order.
pub fn glue(
    root_vars: &BTreeSet<String>,
    submodels: &[KripkeModel],
    reflexive_root_e: bool,
) -> Result<KripkeModel, ModelError> {
    glue_reaching(
        root_vars,
        submodels,
        &vec![false; submodels.len()],
        reflexive_root_e,
    )
}

/// Like [`glue`], but the new root also `E`-reaches the root of every
/// submodel whose flag in `reach_roots` is set.
///
/// Proof search needs this for submodels refuting the right premise of
/// `KR`: the glued root must see such a root through `E` to refute the
/// `K`-formula on the right.
pub fn glue_reaching(
    root_vars: &BTreeSet<String>,
    submodels: &[KripkeModel],
    reach_roots: &[bool],
    reflexive_root_e: bool,
) -> Result<KripkeModel, ModelError> {
    if submodels.is_empty() {
        return Err(ModelError::EmptyGlue);
    }
    if reach_roots.len() != submodels.len() {
        return Err(ModelError::ReachMismatch);
    }
    let subs = place(&submodels.iter().collect::<Vec<_>>());
    check_root_persistence(root_vars, &subs)?;
    let mut root_e = BTreeSet::new();
    for (p, &reach) in subs.iter().zip(reach_roots) {
        root_e.extend(p.model.e.iter().map(|&(_, b)| b));
        if reach {
            root_e.insert(p.model.root);
        }
    }
    Ok(assemble(root_vars, subs, root_e, reflexive_root_e))
}

/// Places a fresh root below `sub` that `E`-reaches exactly what the root
/// of `sub` `E`-reaches.
pub fn glue_kl(root_vars: &BTreeSet<String>, sub: &KripkeModel) -> Result<KripkeModel, ModelError> {
    let subs = place(&[sub]);
    check_root_persistence(root_vars, &subs)?;
    let root_e = subs[0].model.e_successors(subs[0].model.root).collect();
    Ok(assemble(root_vars, subs, root_e, false))
}

/// Plain listing: one line per world, then the strict order and `E`.
impl fmt::Display for KripkeModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &w in &self.worlds {
            let vars: Vec<String> = self.valuation(w).into_iter().collect();
            let tag = if w == self.root { " (root)" } else { "" };
            writeln!(f, "world {w}{tag}: {{{}}}", vars.join(", "))?;
        }
        let order: Vec<String> = self
            .leq
            .iter()
            .filter(|(a, b)| a != b)
            .map(|(a, b)| format!("{a}<{b}"))
            .collect();
        writeln!(f, "order: {}", order.join(" "))?;
        let e: Vec<String> = self.e.iter().map(|(a, b)| format!("{a}E{b}")).collect();
        write!(f, "E: {}", e.join(" "))
    }
}

/// Graphviz rendering: solid edges for covers of `≤`, dashed edges for `E`.
pub fn to_dot(m: &KripkeModel) -> String {
    let mut out = String::from("digraph model {\n  rankdir=BT;\n");
    for &w in &m.worlds {
        let vars: Vec<String> = m.valuation(w).into_iter().collect();
        let shape = if w == m.root { "doublecircle" } else { "circle" };
        out.push_str(&format!(
            "  w{w} [shape={shape}, label=\"{w}: {{{}}}\"];\n",
            vars.join(", ")
        ));
    }
    for &(a, b) in &m.leq {
        let strict = |x: World, y: World| x != y && m.is_leq(x, y);
        let cover = strict(a, b) && !m.worlds.iter().any(|&c| strict(a, c) && strict(c, b));
        if cover {
            out.push_str(&format!("  w{a} -> w{b};\n"));
        }
    }
    for &(a, b) in &m.e {
        out.push_str(&format!("  w{a} -> w{b} [style=dashed];\n"));
    }
    out.push_str("}\n");
    out
}

#[derive(Serialize, Deserialize)]
struct ModelRepr {
    worlds: Vec<World>,
    root: World,
    leq: Vec<[World; 2]>,
    e: Vec<[World; 2]>,
    val: BTreeMap<String, Vec<String>>,
}

impl Serialize for KripkeModel {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let repr = ModelRepr {
            worlds: self.worlds.iter().copied().collect(),
            root: self.root,
            leq: self.leq.iter().map(|&(a, b)| [a, b]).collect(),
            e: self.e.iter().map(|&(a, b)| [a, b]).collect(),
            val: self
                .worlds
                .iter()
                .map(|&w| (w.to_string(), self.valuation(w).into_iter().collect()))
                .collect(),
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for KripkeModel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = ModelRepr::deserialize(deserializer)?;
        let mut val = Vec::new();
        for (key, vars) in repr.val {
            let w: World = key
                .parse()
                .map_err(|_| D::Error::custom(format!("invalid world key {key:?}")))?;
            val.push((w, vars.into_iter().collect()));
        }
        KripkeModel::new(
            repr.worlds,
            repr.root,
            repr.leq.into_iter().map(|[a, b]| (a, b)),
            repr.e.into_iter().map(|[a, b]| (a, b)),
            val,
        )
        .map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn vars(names: &[&str]) -> BTreeSet<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    /// `ρ < ρ'`, `E = {(ρ,ρ'), (ρ',ρ')}`, `a` only at `ρ'`.
    fn reflection_countermodel() -> KripkeModel {
        KripkeModel::new(
            [0, 1],
            0,
            [(0, 0), (0, 1), (1, 1)],
            [(0, 1), (1, 1)],
            [(1, vars(&["a"]))],
        )
        .unwrap()
    }

    #[test]
    fn reflection_countermodel_is_an_iel_model() {
        let m = reflection_countermodel();
        assert!(check_frame(&m, Logic::Iel).is_empty());
        assert!(forces(&m, 0, &parse("K a").unwrap()).unwrap());
        assert!(!forces(&m, 0, &parse("a").unwrap()).unwrap());
        assert!(!forces(&m, 0, &parse("K a -> a").unwrap()).unwrap());
        assert_eq!(depth(&m), 2);
    }

    #[test]
    fn sequent_satisfaction() {
        let m = reflection_countermodel();
        assert!(satisfies(&m, 0, &"; K a => a".parse().unwrap()).unwrap());
        assert!(satisfies(&m, 1, &"false ; a => false [E]".parse().unwrap()).unwrap());
        assert!(!satisfies(&m, 1, &"; => a".parse().unwrap()).unwrap());
        assert!(!satisfies(&m, 0, &"; K a => a [E]".parse().unwrap()).unwrap());
        assert!(satisfies(&m, 0, &"a ; => a".parse().unwrap()).unwrap());
        assert!(!satisfies(&m, 0, &"false ; =>".parse().unwrap()).unwrap());
        assert_eq!(
            satisfies(&m, 7, &"; =>".parse().unwrap()),
            Err(ModelError::UnknownWorld(7))
        );
    }

    #[test]
    fn serial_condition_depends_on_logic() {
        let m = single_world(&BTreeSet::new(), false);
        let violations = check_frame(&m, Logic::Iel);
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].kind, ViolationKind::Im3);
        assert!(check_frame(&m, Logic::IelMinus).is_empty());
    }

    #[test]
    fn detects_unrooted_frames() {
        let m = KripkeModel::new([0, 1], 0, [(0, 0), (1, 1)], [(0, 0), (1, 1)], []).unwrap();
        let kinds: Vec<_> = check_frame(&m, Logic::Iel).iter().map(|v| v.kind).collect();
        assert_eq!(kinds, vec![ViolationKind::NotRooted]);
    }

    #[test]
    fn detects_other_violations() {
        let kinds = |m: &KripkeModel| -> Vec<ViolationKind> {
            check_frame(m, Logic::IelMinus).iter().map(|v| v.kind).collect()
        };
        let no_refl = KripkeModel::new([0], 0, [], [], []).unwrap();
        assert!(kinds(&no_refl).contains(&ViolationKind::NotPoset));
        let not_persistent =
            KripkeModel::new([0, 1], 0, [(0, 0), (0, 1), (1, 1)], [], [(0, vars(&["p"]))])
                .unwrap();
        assert_eq!(kinds(&not_persistent), vec![ViolationKind::NotPersistent]);
        let im1 = KripkeModel::new([0, 1], 0, [(0, 0), (0, 1), (1, 1)], [(1, 0)], []).unwrap();
        assert!(kinds(&im1).contains(&ViolationKind::Im1));
        let im2 = KripkeModel::new([0, 1], 0, [(0, 0), (0, 1), (1, 1)], [(1, 1)], []).unwrap();
        assert_eq!(kinds(&im2), vec![ViolationKind::Im2]);
    }

    #[test]
    fn k_semantics_on_single_worlds() {
        let k_a = parse("K a").unwrap();
        let reflexive = single_world(&BTreeSet::new(), true);
        assert!(!forces(&reflexive, 0, &k_a).unwrap());
        let blind = single_world(&BTreeSet::new(), false);
        assert!(forces(&blind, 0, &k_a).unwrap());
        let knows = single_world(&vars(&["a"]), true);
        assert!(check_frame(&knows, Logic::Iel).is_empty());
        assert!(forces(&knows, 0, &k_a).unwrap());
        assert_eq!(depth(&knows), 1);
    }

    #[test]
    fn glue_two_single_worlds() {
        let subs = [
            single_world(&vars(&["b"]), true),
            single_world(&vars(&["a"]), true),
        ];
        let m = glue(&BTreeSet::new(), &subs, false).unwrap();
        assert_eq!(m.len(), 3);
        assert_eq!(depth(&m), 2);
        assert!(check_frame(&m, Logic::Iel).is_empty());
        assert_eq!(m.e_successors(0).collect::<Vec<_>>(), vec![1, 2]);
        let f = parse("K(a | b) -> K a | K b").unwrap();
        assert!(!forces(&m, 0, &f).unwrap());
    }

    #[test]
    fn glue_inherits_seriality() {
        let m = glue(&BTreeSet::new(), &[single_world(&BTreeSet::new(), true)], false).unwrap();
        assert!(check_frame(&m, Logic::Iel).is_empty());
    }

    #[test]
    fn glue_with_reflexive_root() {
        let m = glue(&vars(&["p"]), &[single_world(&vars(&["p"]), true)], true).unwrap();
        assert_eq!(depth(&m), 2);
        assert!(m.is_e(0, 0));
        assert!(check_frame(&m, Logic::Iel).is_empty());
    }

    #[test]
    fn glue_errors() {
        assert_eq!(glue(&BTreeSet::new(), &[], false), Err(ModelError::EmptyGlue));
        let err = glue(&vars(&["p"]), &[single_world(&BTreeSet::new(), true)], false);
        assert!(matches!(err, Err(ModelError::RootPersistence { .. })));
    }

    #[test]
    fn glue_reaching_adds_root_edges() {
        let sub = single_world(&vars(&["c"]), false);
        let plain = glue(&BTreeSet::new(), std::slice::from_ref(&sub), false).unwrap();
        assert!(!plain.is_e(0, 1));
        let reach = glue_reaching(&BTreeSet::new(), &[sub], &[true], false).unwrap();
        assert!(reach.is_e(0, 1));
        assert!(check_frame(&reach, Logic::IelMinus).is_empty());
        assert_eq!(depth(&reach), depth(&plain));
    }

    #[test]
    fn glue_kl_rebuilds_reflection_countermodel() {
        let m = glue_kl(&BTreeSet::new(), &single_world(&vars(&["a"]), true)).unwrap();
        assert_eq!(m, reflection_countermodel());
    }

    #[test]
    fn glue_kl_respects_frame_conditions() {
        let inner = glue_kl(&BTreeSet::new(), &single_world(&vars(&["a"]), true)).unwrap();
        let m = glue_kl(&BTreeSet::new(), &inner).unwrap();
        assert!(check_frame(&m, Logic::Iel).is_empty());
        assert_eq!(depth(&m), 3);
    }

    #[test]
    fn final_worlds_are_e_reflexive_in_iel_models() {
        let m = reflection_countermodel();
        for w in m.final_worlds() {
            assert!(m.is_e(w, w));
        }
    }

    #[test]
    fn json_round_trip() {
        let m = reflection_countermodel();
        let json = serde_json::to_value(&m).unwrap();
        assert_eq!(
            json,
            serde_json::json!({
                "worlds": [0, 1],
                "root": 0,
                "leq": [[0, 0], [0, 1], [1, 1]],
                "e": [[0, 1], [1, 1]],
                "val": {"0": [], "1": ["a"]}
            })
        );
        assert_eq!(serde_json::from_value::<KripkeModel>(json).unwrap(), m);
        let bad = serde_json::json!({"worlds": [0], "root": 1, "leq": [], "e": [], "val": {}});
        assert!(serde_json::from_value::<KripkeModel>(bad).is_err());
    }

    #[test]
    fn dot_output() {
        let dot = to_dot(&reflection_countermodel());
        assert!(dot.contains("w0 -> w1;"));
        assert!(dot.contains("w0 -> w1 [style=dashed];"));
        assert!(dot.contains("label=\"1: {a}\""));
    }
}
