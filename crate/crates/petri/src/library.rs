//! Small reference nets.

use crate::marking::Marking;
use crate::net::{NetDef, Transition};
use crate::tasks::TaskRegistry;
use crate::types::{ColorType, Value};

/// `i → t → o`, moving one token per firing.
pub fn phi() -> NetDef {
    let u = ColorType::Unit;
    NetDef::new("phi")
        .place("i", u.clone())
        .place("o", u.clone())
        .transition(Transition::expr("t", "").input("x", u.clone(), "i").output("x", u, "o"))
}

/// Record with the block number and the block count.
pub fn block_color() -> ColorType {
    ColorType::record([("num", ColorType::Int), ("max", ColorType::Int)])
}

pub fn block(num: i64, max: i64) -> Value {
    Value::record([("num", Value::Int(num)), ("max", Value::Int(max))])
}

/// `s` duplicates a block, `f` and `g` work on the copies and `j` joins
/// matching block numbers from `l` and `r` onto `out`.
pub fn psi() -> NetDef {
    let b = block_color();
    NetDef::new("psi")
        .place("i", b.clone())
        .place("f_in", b.clone())
        .place("g_in", b.clone())
        .place("l", b.clone())
        .place("r", b.clone())
        .place("out", b.clone())
        .transition(
            Transition::expr("s", "${b1} := ${b}; ${b2} := ${b}")
                .input("b", b.clone(), "i")
                .output("b1", b.clone(), "f_in")
                .output("b2", b.clone(), "g_in"),
        )
        .transition(Transition::expr("f", "").input("b", b.clone(), "f_in").output("b", b.clone(), "l"))
        .transition(Transition::expr("g", "").input("b", b.clone(), "g_in").output("b", b.clone(), "r"))
        .transition(
            Transition::expr("j", "${b} := ${l}")
                .input("l", b.clone(), "l")
                .input("r", b.clone(), "r")
                .output("b", b, "out")
                .when("${l.num} :eq: ${r.num}"),
        )
}

/// Sequential reduction: `+` folds tokens from `p` into the sum on `s`,
/// which must hold a start value.
pub fn reduction() -> NetDef {
    let i = ColorType::Int;
    NetDef::new("reduction")
        .place("p", i.clone())
        .place("s", i.clone())
        .transition(
            Transition::expr("plus", "${s} := ${s} + ${a}")
                .input("a", i.clone(), "p")
                .input("s", i.clone(), "s")
                .output("s", i, "s"),
        )
}

/// Sequential reduction without a start value: `down` moves the first
/// token to `s` and disables itself.
pub fn reduction_with_start() -> NetDef {
    let i = ColorType::Int;
    reduction()
        .place("ctl", ColorType::Unit)
        .transition(
            Transition::expr("down", "${s} := ${a}")
                .input("a", i.clone(), "p")
                .input("c", ColorType::Unit, "ctl")
                .output("s", i, "s"),
        )
}

pub fn reduction_with_start_marking(values: &[i64]) -> Marking {
    Marking::new()
        .with("ctl", [Value::Unit])
        .with("p", values.iter().map(|&v| Value::Int(v)))
}

/// Parallel reduction. Two transitions alternate, guarded by the single
/// token cycling between `u` and `d`, and deal the tokens of `p` onto `s`
/// and `r`; `plus` adds one token from each and feeds the sum back to `p`.
/// The result ends up alone on `s`.
///
/// With `task_add` the addition runs as the `int_add` task.
pub fn parallel_reduction(task_add: bool) -> NetDef {
    let i = ColorType::Int;
    let u = ColorType::Unit;
    let plus = if task_add {
        Transition::task("plus", "int_add")
    } else {
        Transition::expr("plus", "${v} := ${a} + ${b}")
    };
    NetDef::new("parallel_reduction")
        .place("p", i.clone())
        .place("u", u.clone())
        .place("d", u.clone())
        .place("s", i.clone())
        .place("r", i.clone())
        .transition(
            Transition::expr("to_s", "")
                .input("a", i.clone(), "p")
                .input("u", u.clone(), "u")
                .output("a", i.clone(), "s")
                .output("d", u.clone(), "d"),
        )
        .transition(
            Transition::expr("to_r", "")
                .input("a", i.clone(), "p")
                .input("d", u.clone(), "d")
                .output("a", i.clone(), "r")
                .output("u", u, "u"),
        )
        .transition(
            plus.input("a", i.clone(), "s")
                .input("b", i.clone(), "r")
                .output("v", i, "p"),
        )
}

pub fn parallel_reduction_marking(values: &[i64]) -> Marking {
    Marking::new()
        .with("u", [Value::Unit])
        .with("p", values.iter().map(|&v| Value::Int(v)))
}

/// Registry holding the `int_add` task.
pub fn int_add_registry() -> TaskRegistry {
    let mut reg = TaskRegistry::new();
    reg.register("int_add", |inputs, _| match inputs.as_slice() {
        [Value::Int(a), Value::Int(b)] => a.checked_add(*b).map(|v| vec![Value::Int(v)]).ok_or_else(|| "overflow".into()),
        _ => Err("int_add expects two ints".into()),
    });
    reg
}

/// `e` peels the head off the list on `L` onto `i`; `x` removes the empty
/// list.
pub fn list_splitter(elem: ColorType) -> NetDef {
    let l = ColorType::list(elem.clone());
    NetDef::new("list_splitter")
        .place("L", l.clone())
        .place("i", elem.clone())
        .transition(
            Transition::expr("e", "${c} := head(${L}); ${L} := tail(${L})")
                .input("L", l.clone(), "L")
                .output("L", l.clone(), "L")
                .output("c", elem, "i")
                .when(":not: empty(${L})"),
        )
        .transition(Transition::expr("x", "").input("L", l, "L").when("empty(${L})"))
}
