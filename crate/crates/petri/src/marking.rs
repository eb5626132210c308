use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::sync::atomic::AtomicBool;
use std::sync::Arc;

use thiserror::Error;

use crate::expr::EvalError;
use crate::net::{Body, Net};
use crate::tasks::TaskRegistry;
use crate::types::Value;

#[derive(Clone, Debug, PartialEq)]
pub struct Token {
    pub id: u64,
    pub value: Value,
}

/// Tokens per place. Token ids are unique within a marking and its
/// successors; tokens on a place are kept in increasing id order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Marking {
    places: BTreeMap<String, Vec<Token>>,
    next_id: u64,
}

impl Marking {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a token and returns its id.
    pub fn add(&mut self, place: &str, value: Value) -> u64 {
        let id = self.next_id;
        self.next_id += 1;
        self.places.entry(place.to_string()).or_default().push(Token { id, value });
        id
    }

    pub fn with(mut self, place: &str, values: impl IntoIterator<Item = Value>) -> Self {
        for v in values {
            self.add(place, v);
        }
        self
    }

    pub fn tokens(&self, place: &str) -> &[Token] {
        self.places.get(place).map_or(&[], Vec::as_slice)
    }

    pub fn values(&self, place: &str) -> Vec<&Value> {
        self.tokens(place).iter().map(|t| &t.value).collect()
    }

    pub fn count(&self, place: &str) -> usize {
        self.tokens(place).len()
    }

    pub fn total(&self) -> usize {
        self.places.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.total() == 0
    }

    /// Non-empty places with their tokens.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &[Token])> {
        self.places
            .iter()
            .filter(|(_, v)| !v.is_empty())
            .map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    pub fn remove(&mut self, place: &str, id: u64) -> Option<Token> {
        let toks = self.places.get_mut(place)?;
        let at = toks.binary_search_by_key(&id, |t| t.id).ok()?;
        Some(toks.remove(at))
    }

    /// Removes every token outside `keep` and returns their ids.
    pub fn drain_except(&mut self, keep: Option<&str>) -> Vec<u64> {
        let mut ids = Vec::new();
        for (place, toks) in self.places.iter_mut() {
            if Some(place.as_str()) != keep {
                ids.extend(toks.drain(..).map(|t| t.id));
            }
        }
        ids
    }

    /// Token counts per non-empty place.
    pub fn counts(&self) -> BTreeMap<String, usize> {
        self.iter().map(|(p, t)| (p.to_string(), t.len())).collect()
    }

    /// Checks that every token lives on a known place and fits its color.
    pub fn type_check(&self, net: &Net) -> Result<(), String> {
        for (place, toks) in self.iter() {
            let color = net.color(place).ok_or_else(|| format!("unknown place `{place}`"))?;
            if let Some(t) = toks.iter().find(|t| !t.value.conforms(color)) {
                return Err(format!("token {} on `{place}` does not have color {color}", t.id));
            }
        }
        Ok(())
    }

    /// Equal for markings that differ only in token ids.
    pub fn canonical_key(&self) -> String {
        let mut out = String::new();
        for (place, toks) in self.iter() {
            let mut keys: Vec<String> = toks.iter().map(|t| t.value.canonical_key()).collect();
            keys.sort();
            out.push_str(place);
            out.push('=');
            out.push_str(&keys.join("|"));
            out.push(';');
        }
        out
    }
}

/// One token per in-port of a transition, in port order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Binding {
    pub transition: usize,
    pub tokens: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FireError {
    #[error("transition index {0} out of range")]
    NoSuchTransition(usize),
    #[error("binding is stale: token {token} is no longer on `{place}`")]
    Stale { place: String, token: u64 },
    #[error("binding has {got} tokens, transition has {want} in-ports")]
    Arity { got: usize, want: usize },
    #[error("binding uses token {0} twice")]
    Repeated(u64),
    #[error("condition of `{0}` does not hold")]
    NotEnabled(String),
    #[error("`{transition}`: expected {want} produced values, got {got}")]
    ProducedArity {
        transition: String,
        want: usize,
        got: usize,
    },
    #[error("`{transition}`: value for out-port `{port}` does not have its color")]
    Type { transition: String, port: String },
    #[error("`{transition}`: {error}")]
    Eval { transition: String, error: EvalError },
    #[error("`{transition}`: no body registered for task `{kind}`")]
    UnknownTask { transition: String, kind: String },
    #[error("`{transition}`: task failed: {message}")]
    Task { transition: String, message: String },
}

pub(crate) fn bound_values<'m>(net: &Net, marking: &'m Marking, b: &Binding) -> Result<Vec<&'m Value>, FireError> {
    let t = net.transitions().get(b.transition).ok_or(FireError::NoSuchTransition(b.transition))?;
    if b.tokens.len() != t.in_ports.len() {
        return Err(FireError::Arity {
            got: b.tokens.len(),
            want: t.in_ports.len(),
        });
    }
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(b.tokens.len());
    for (port, &id) in t.in_ports.iter().zip(&b.tokens) {
        if !seen.insert(id) {
            return Err(FireError::Repeated(id));
        }
        let tok = marking
            .tokens(&port.place)
            .iter()
            .find(|tk| tk.id == id)
            .ok_or_else(|| FireError::Stale {
                place: port.place.clone(),
                token: id,
            })?;
        out.push(&tok.value);
    }
    Ok(out)
}

fn condition_holds(net: &Net, t: usize, values: &[&Value]) -> Result<bool, FireError> {
    let c = net.compiled(t);
    let Some(cond) = &c.condition else {
        return Ok(true);
    };
    let env: Vec<(&str, &Value)> = c.in_types.iter().map(|(n, _)| n.as_str()).zip(values.iter().copied()).collect();
    match cond.eval(&env) {
        Ok(Value::Bool(b)) => Ok(b),
        Ok(_) => Err(FireError::Eval {
            transition: net.transitions()[t].id.clone(),
            error: EvalError::Type("condition"),
        }),
        Err(error) => Err(FireError::Eval {
            transition: net.transitions()[t].id.clone(),
            error,
        }),
    }
}

/// Bindings of transition `t`, searched depth first over its in-ports.
/// `order` may permute each candidate list; the search stops after `limit`.
pub(crate) fn search_bindings(
    net: &Net,
    marking: &Marking,
    t: usize,
    limit: usize,
    order: &mut dyn FnMut(&mut Vec<u64>),
) -> Result<Vec<Binding>, FireError> {
    let ports = &net.transitions()[t].in_ports;
    let mut cands: Vec<Vec<u64>> = Vec::with_capacity(ports.len());
    for p in ports {
        let mut ids: Vec<u64> = marking.tokens(&p.place).iter().map(|tk| tk.id).collect();
        if ids.is_empty() {
            return Ok(Vec::new());
        }
        order(&mut ids);
        cands.push(ids);
    }
    let lookup: HashMap<u64, &Value> = ports
        .iter()
        .flat_map(|p| marking.tokens(&p.place).iter().map(|tk| (tk.id, &tk.value)))
        .collect();
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(ports.len());
    fn rec(
        net: &Net,
        t: usize,
        cands: &[Vec<u64>],
        lookup: &HashMap<u64, &Value>,
        chosen: &mut Vec<u64>,
        out: &mut Vec<Binding>,
        limit: usize,
    ) -> Result<(), FireError> {
        if out.len() >= limit {
            return Ok(());
        }
        let k = chosen.len();
        if k == cands.len() {
            let values: Vec<&Value> = chosen.iter().map(|id| lookup[id]).collect();
            if condition_holds(net, t, &values)? {
                out.push(Binding {
                    transition: t,
                    tokens: chosen.clone(),
                });
            }
            return Ok(());
        }
        for &id in &cands[k] {
            if chosen.contains(&id) {
                continue;
            }
            chosen.push(id);
            rec(net, t, cands, lookup, chosen, out, limit)?;
            chosen.pop();
            if out.len() >= limit {
                break;
            }
        }
        Ok(())
    }
    rec(net, t, &cands, &lookup, &mut chosen, &mut out, limit)?;
    Ok(out)
}

/// Every enabled binding, ordered by transition then by token ids.
pub fn enabled_bindings(net: &Net, marking: &Marking) -> Result<Vec<Binding>, FireError> {
    let mut all = Vec::new();
    for t in 0..net.transitions().len() {
        all.extend(search_bindings(net, marking, t, usize::MAX, &mut |_| {})?);
    }
    Ok(all)
}

/// Values an expression transition produces for a binding.
pub fn expression_outputs(net: &Net, marking: &Marking, b: &Binding) -> Result<Vec<Value>, FireError> {
    let values = bound_values(net, marking, b)?;
    eval_body(net, b.transition, &values)
}

pub(crate) fn eval_body(net: &Net, t: usize, values: &[&Value]) -> Result<Vec<Value>, FireError> {
    let c = net.compiled(t);
    let tr = &net.transitions()[t];
    let Some(program) = &c.program else {
        return Err(FireError::UnknownTask {
            transition: tr.id.clone(),
            kind: match &tr.body {
                Body::Task { task } => task.clone(),
                Body::Expr { .. } => String::new(),
            },
        });
    };
    let env: Vec<(&str, &Value)> = c.in_types.iter().map(|(n, _)| n.as_str()).zip(values.iter().copied()).collect();
    program.run(&env, &c.out_types).map_err(|error| FireError::Eval {
        transition: tr.id.clone(),
        error,
    })
}

/// Checks produced values against the out-port colors.
pub(crate) fn check_produced(net: &Net, t: usize, produced: &[Value]) -> Result<(), FireError> {
    let tr = &net.transitions()[t];
    if produced.len() != tr.out_ports.len() {
        return Err(FireError::ProducedArity {
            transition: tr.id.clone(),
            want: tr.out_ports.len(),
            got: produced.len(),
        });
    }
    for (port, v) in tr.out_ports.iter().zip(produced) {
        if !v.conforms(&port.color) {
            return Err(FireError::Type {
                transition: tr.id.clone(),
                port: port.name.clone(),
            });
        }
    }
    Ok(())
}

/// Removes the bound tokens, returning them in port order.
pub(crate) fn consume(net: &Net, marking: &mut Marking, b: &Binding) -> Vec<Token> {
    let t = &net.transitions()[b.transition];
    t.in_ports
        .iter()
        .zip(&b.tokens)
        .filter_map(|(p, &id)| marking.remove(&p.place, id))
        .collect()
}

/// Adds one token per out-port and returns the new ids.
pub(crate) fn produce(net: &Net, marking: &mut Marking, t: usize, produced: Vec<Value>) -> Vec<u64> {
    let tr = &net.transitions()[t];
    tr.out_ports
        .iter()
        .zip(produced)
        .map(|(p, v)| marking.add(&p.place, v))
        .collect()
}

/// Fires `binding` with the given out-port values. The input marking is
/// left untouched.
pub fn fire(net: &Net, marking: &Marking, binding: &Binding, produced: Vec<Value>) -> Result<Marking, FireError> {
    let values = bound_values(net, marking, binding)?;
    if !condition_holds(net, binding.transition, &values)? {
        return Err(FireError::NotEnabled(net.transitions()[binding.transition].id.clone()));
    }
    check_produced(net, binding.transition, &produced)?;
    let mut next = marking.clone();
    consume(net, &mut next, binding);
    produce(net, &mut next, binding.transition, produced);
    Ok(next)
}

/// Fires a binding, computing the produced values from the transition body.
/// Task bodies are looked up in `tasks` and run on the calling thread.
pub fn fire_auto(
    net: &Net,
    marking: &Marking,
    binding: &Binding,
    tasks: Option<&TaskRegistry>,
) -> Result<Marking, FireError> {
    let tr = net
        .transitions()
        .get(binding.transition)
        .ok_or(FireError::NoSuchTransition(binding.transition))?;
    let produced = match &tr.body {
        Body::Expr { .. } => expression_outputs(net, marking, binding)?,
        Body::Task { task } => {
            let f = tasks.and_then(|r| r.get(task)).ok_or_else(|| FireError::UnknownTask {
                transition: tr.id.clone(),
                kind: task.clone(),
            })?;
            let inputs = bound_values(net, marking, binding)?.into_iter().cloned().collect();
            f(inputs, &Arc::new(AtomicBool::new(false))).map_err(|message| FireError::Task {
                transition: tr.id.clone(),
                message,
            })?
        }
    };
    fire(net, marking, binding, produced)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub transition: String,
}

/// Reachable markings found by breadth-first search. States are identified
/// up to token ids.
#[derive(Clone, Debug)]
pub struct StateGraph {
    pub states: Vec<Marking>,
    pub edges: Vec<Edge>,
    /// False when the bound cut the search short.
    pub complete: bool,
}

impl StateGraph {
    /// States without outgoing edges.
    pub fn terminal(&self) -> Vec<usize> {
        let mut has_out = vec![false; self.states.len()];
        for e in &self.edges {
            has_out[e.from] = true;
        }
        (0..self.states.len()).filter(|&i| !has_out[i]).collect()
    }
}

/// Explores the firing relation from `initial`, visiting at most `bound`
/// distinct markings.
pub fn state_graph(
    net: &Net,
    initial: &Marking,
    bound: usize,
    tasks: Option<&TaskRegistry>,
) -> Result<StateGraph, FireError> {
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut states = vec![initial.clone()];
    index.insert(initial.canonical_key(), 0);
    let mut edges = Vec::new();
    let mut seen_edges = HashSet::new();
    let mut queue = VecDeque::from([0usize]);
    let mut complete = true;
    while let Some(s) = queue.pop_front() {
        let m = states[s].clone();
        for b in enabled_bindings(net, &m)? {
            let next = fire_auto(net, &m, &b, tasks)?;
            let key = next.canonical_key();
            let to = match index.get(&key) {
                Some(&i) => i,
                None => {
                    if states.len() >= bound {
                        complete = false;
                        continue;
                    }
                    states.push(next);
                    index.insert(key, states.len() - 1);
                    queue.push_back(states.len() - 1);
                    states.len() - 1
                }
            };
            if seen_edges.insert((s, to, b.transition)) {
                edges.push(Edge {
                    from: s,
                    to,
                    transition: net.transitions()[b.transition].id.clone(),
                });
            }
        }
    }
    Ok(StateGraph {
        states,
        edges,
        complete,
    })
}
