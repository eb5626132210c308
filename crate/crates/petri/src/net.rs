use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{parse_expr, parse_program, Expr, ExprError, Program};
use crate::types::ColorType;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Place {
    pub id: String,
    #[serde(default)]
    pub name: String,
    pub color: ColorType,
}

/// A typed connection between a transition and a place.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Port {
    pub name: String,
    pub color: ColorType,
    pub place: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Body {
    /// Evaluated by the engine when the transition fires.
    Expr {
        #[serde(default)]
        code: String,
    },
    /// Handed to a worker; `task` names an entry of the task registry.
    Task { task: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub id: String,
    #[serde(default)]
    pub name: String,
    pub in_ports: Vec<Port>,
    #[serde(default)]
    pub out_ports: Vec<Port>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition: Option<String>,
    pub body: Body,
    /// Firing this transition ends the run early.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub heureka: bool,
}

/// Static structure of a colored net.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetDef {
    pub name: String,
    pub places: Vec<Place>,
    pub transitions: Vec<Transition>,
    /// The place whose tokens form the result of a run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    /// Assignment to `${<output>}` performed once the net falls quiet with
    /// the output place still empty.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub completion: Option<String>,
}

impl NetDef {
    pub fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            places: Vec::new(),
            transitions: Vec::new(),
            output: None,
            completion: None,
        }
    }

    pub fn place(mut self, id: &str, color: ColorType) -> Self {
        self.places.push(Place {
            id: id.to_string(),
            name: id.to_string(),
            color,
        });
        self
    }

    pub fn transition(mut self, t: Transition) -> Self {
        self.transitions.push(t);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("net definitions always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

impl Transition {
    /// An expression transition with no ports yet.
    pub fn expr(id: &str, code: &str) -> Self {
        Self {
            id: id.to_string(),
            name: id.to_string(),
            in_ports: Vec::new(),
            out_ports: Vec::new(),
            condition: None,
            body: Body::Expr { code: code.to_string() },
            heureka: false,
        }
    }

    pub fn task(id: &str, task: &str) -> Self {
        Self {
            body: Body::Task { task: task.to_string() },
            ..Self::expr(id, "")
        }
    }

    pub fn input(mut self, port: &str, color: ColorType, place: &str) -> Self {
        self.in_ports.push(Port {
            name: port.to_string(),
            color,
            place: place.to_string(),
        });
        self
    }

    pub fn output(mut self, port: &str, color: ColorType, place: &str) -> Self {
        self.out_ports.push(Port {
            name: port.to_string(),
            color,
            place: place.to_string(),
        });
        self
    }

    pub fn when(mut self, condition: &str) -> Self {
        self.condition = Some(condition.to_string());
        self
    }

    pub fn heureka(mut self) -> Self {
        self.heureka = true;
        self
    }

    pub fn is_task(&self) -> bool {
        matches!(self.body, Body::Task { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetError {
    #[error("duplicate place id `{0}`")]
    DuplicatePlace(String),
    #[error("duplicate transition id `{0}`")]
    DuplicateTransition(String),
    #[error("place `{place}`: {msg}")]
    BadColor { place: String, msg: String },
    #[error("transition `{transition}` has no in-ports")]
    NoInputs { transition: String },
    #[error("transition `{transition}`: duplicate {side}-port `{port}`")]
    DuplicatePort {
        transition: String,
        side: &'static str,
        port: String,
    },
    #[error("transition `{transition}`: port `{port}` connects to unknown place `{place}`")]
    UnknownPlace {
        transition: String,
        port: String,
        place: String,
    },
    #[error("transition `{transition}`: port `{port}` has color {port_color} but place `{place}` has {place_color}")]
    ColorMismatch {
        transition: String,
        port: String,
        place: String,
        port_color: ColorType,
        place_color: ColorType,
    },
    #[error("transition `{transition}` condition: {error}")]
    Condition { transition: String, error: ExprError },
    #[error("transition `{transition}` body: {error}")]
    Body { transition: String, error: ExprError },
    #[error("transition `{transition}` has an empty task name")]
    EmptyTask { transition: String },
    #[error("output place `{0}` does not exist")]
    UnknownOutput(String),
    #[error("completion rule: {0}")]
    Completion(String),
}

/// A validated net with parsed expressions and resolved places.
#[derive(Debug, Clone)]
pub struct Net {
    def: NetDef,
    places: HashMap<String, usize>,
    compiled: Vec<Compiled>,
    completion: Option<Program>,
    output: Option<usize>,
}

#[derive(Debug, Clone)]
pub(crate) struct Compiled {
    pub in_types: Vec<(String, ColorType)>,
    pub out_types: Vec<(String, ColorType)>,
    pub condition: Option<Expr>,
    pub program: Option<Program>,
}

fn ports_types(ports: &[Port]) -> Vec<(String, ColorType)> {
    ports.iter().map(|p| (p.name.clone(), p.color.clone())).collect()
}

/// Checks the static well-formedness of a net and reports every problem.
pub fn validate_net(def: &NetDef) -> Result<(), Vec<NetError>> {
    Net::new(def.clone()).map(|_| ())
}

impl Net {
    pub fn new(def: NetDef) -> Result<Self, Vec<NetError>> {
        let mut errs = Vec::new();
        let mut places = HashMap::new();
        for (i, p) in def.places.iter().enumerate() {
            if places.insert(p.id.clone(), i).is_some() {
                errs.push(NetError::DuplicatePlace(p.id.clone()));
            }
            if let Err(msg) = p.color.well_formed() {
                errs.push(NetError::BadColor {
                    place: p.id.clone(),
                    msg,
                });
            }
        }
        let mut compiled = Vec::new();
        for (i, t) in def.transitions.iter().enumerate() {
            if def.transitions[..i].iter().any(|u| u.id == t.id) {
                errs.push(NetError::DuplicateTransition(t.id.clone()));
            }
            if t.in_ports.is_empty() {
                errs.push(NetError::NoInputs {
                    transition: t.id.clone(),
                });
            }
            for (side, ports) in [("in", &t.in_ports), ("out", &t.out_ports)] {
                for (k, port) in ports.iter().enumerate() {
                    if ports[..k].iter().any(|q| q.name == port.name) {
                        errs.push(NetError::DuplicatePort {
                            transition: t.id.clone(),
                            side,
                            port: port.name.clone(),
                        });
                    }
                    match places.get(&port.place) {
                        None => errs.push(NetError::UnknownPlace {
                            transition: t.id.clone(),
                            port: port.name.clone(),
                            place: port.place.clone(),
                        }),
                        Some(&pi) if def.places[pi].color != port.color => errs.push(NetError::ColorMismatch {
                            transition: t.id.clone(),
                            port: port.name.clone(),
                            place: port.place.clone(),
                            port_color: port.color.clone(),
                            place_color: def.places[pi].color.clone(),
                        }),
                        Some(_) => {}
                    }
                }
            }
            let in_types = ports_types(&t.in_ports);
            let out_types = ports_types(&t.out_ports);
            let condition = t.condition.as_deref().and_then(|src| {
                match parse_expr(src).and_then(|e| e.check_condition(&in_types).map(|_| e)) {
                    Ok(e) => Some(e),
                    Err(error) => {
                        errs.push(NetError::Condition {
                            transition: t.id.clone(),
                            error,
                        });
                        None
                    }
                }
            });
            let program = match &t.body {
                Body::Expr { code } => match parse_program(code) {
                    Ok(p) => {
                        for error in p.check(&in_types, &out_types) {
                            errs.push(NetError::Body {
                                transition: t.id.clone(),
                                error,
                            });
                        }
                        Some(p)
                    }
                    Err(error) => {
                        errs.push(NetError::Body {
                            transition: t.id.clone(),
                            error,
                        });
                        None
                    }
                },
                Body::Task { task } => {
                    if task.is_empty() {
                        errs.push(NetError::EmptyTask {
                            transition: t.id.clone(),
                        });
                    }
                    None
                }
            };
            compiled.push(Compiled {
                in_types,
                out_types,
                condition,
                program,
            });
        }
        let output = match &def.output {
            Some(o) => match places.get(o) {
                Some(&i) => Some(i),
                None => {
                    errs.push(NetError::UnknownOutput(o.clone()));
                    None
                }
            },
            None => None,
        };
        let completion = match (&def.completion, output) {
            (None, _) => None,
            (Some(_), None) => {
                errs.push(NetError::Completion("needs an output place".into()));
                None
            }
            (Some(code), Some(oi)) => {
                let outs = vec![(def.places[oi].id.clone(), def.places[oi].color.clone())];
                match parse_program(code) {
                    Ok(p) => {
                        errs.extend(p.check(&[], &outs).into_iter().map(|e| NetError::Completion(e.to_string())));
                        Some(p)
                    }
                    Err(e) => {
                        errs.push(NetError::Completion(e.to_string()));
                        None
                    }
                }
            }
        };
        if errs.is_empty() {
            Ok(Self {
                def,
                places,
                compiled,
                completion,
                output,
            })
        } else {
            Err(errs)
        }
    }

    pub fn def(&self) -> &NetDef {
        &self.def
    }

    pub fn name(&self) -> &str {
        &self.def.name
    }

    pub fn places(&self) -> &[Place] {
        &self.def.places
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.def.transitions
    }

    pub fn place(&self, id: &str) -> Option<&Place> {
        self.places.get(id).map(|&i| &self.def.places[i])
    }

    pub fn transition_index(&self, id: &str) -> Option<usize> {
        self.def.transitions.iter().position(|t| t.id == id)
    }

    /// Id of the output place, if the net has one.
    pub fn output(&self) -> Option<&str> {
        self.output.map(|i| self.def.places[i].id.as_str())
    }

    pub(crate) fn compiled(&self, t: usize) -> &Compiled {
        &self.compiled[t]
    }

    pub(crate) fn completion(&self) -> Option<&Program> {
        self.completion.as_ref()
    }

    pub fn color(&self, place: &str) -> Option<&ColorType> {
        self.place(place).map(|p| &p.color)
    }
}

impl fmt::Display for Net {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "net {}", self.def.name)?;
        for p in &self.def.places {
            writeln!(f, "  place {}: {}", p.id, p.color)?;
        }
        for t in &self.def.transitions {
            let ins: Vec<&str> = t.in_ports.iter().map(|p| p.place.as_str()).collect();
            let outs: Vec<&str> = t.out_ports.iter().map(|p| p.place.as_str()).collect();
            writeln!(f, "  {} : {} -> {}", t.id, ins.join(" "), outs.join(" "))?;
        }
        Ok(())
    }
}
