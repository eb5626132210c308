//! Colored Petri nets with typed ports, guarded transitions, a small
//! expression language and a parallel executor.

pub mod executor;
pub mod expr;
pub mod library;
pub mod marking;
pub mod net;
pub mod tasks;
pub mod types;

pub use executor::{run, EventKind, Firing, RunConfig, RunError, RunHandle, RunResult, TraceEvent};
pub use expr::{eval, parse_expr, parse_program, EvalError, Expr, ExprError, Program};
pub use marking::{
    enabled_bindings, expression_outputs, fire, fire_auto, state_graph, Binding, Edge, FireError, Marking,
    StateGraph, Token,
};
pub use net::{validate_net, Body, Net, NetDef, NetError, Place, Port, Transition};
pub use tasks::{TaskFn, TaskRegistry};
pub use types::{ColorType, Field, Opaque, Value};
