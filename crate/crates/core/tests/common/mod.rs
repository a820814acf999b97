//! Test-only oracles shared by the integration tests and the acceptance run.

#![allow(dead_code)]

use std::collections::BTreeMap;

use proptest::prelude::*;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Name(String),
    Func(String),
    Op(char),
    Neg,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Option<Vec<Tok>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        if c.is_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = k;
            while k < chars.len() && (chars[k].is_ascii_digit() || chars[k] == '.') {
                k += 1;
            }
            if k < chars.len() && (chars[k] == 'e' || chars[k] == 'E') {
                let mut j = k + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    k = j;
                    while k < chars.len() && chars[k].is_ascii_digit() {
                        k += 1;
                    }
                }
            }
            out.push(Tok::Num(chars[start..k].iter().collect::<String>().parse().ok()?));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = k;
            while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '_') {
                k += 1;
            }
            let name: String = chars[start..k].iter().collect();
            let next = chars[k..].iter().find(|c| !c.is_whitespace());
            out.push(if next == Some(&'(') { Tok::Func(name) } else { Tok::Name(name) });
        } else {
            let prefix = matches!(out.last(), None | Some(Tok::Op(_)) | Some(Tok::Neg) | Some(Tok::LParen));
            out.push(match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '-' if prefix => Tok::Neg,
                '+' | '-' | '*' | '/' | '^' => Tok::Op(c),
                _ => return None,
            });
            k += 1;
        }
    }
    Some(out)
}

fn precedence(t: &Tok) -> u8 {
    match t {
        Tok::Op('+') | Tok::Op('-') => 1,
        Tok::Op('*') | Tok::Op('/') => 2,
        Tok::Neg => 3,
        Tok::Op('^') => 4,
        _ => 0,
    }
}

/// Dijkstra's shunting-yard over `f64`, with prefix minus binding looser than `^`
/// and tighter than `*`. `None` on syntax errors or any non-finite intermediate.
pub fn shunting_yard_eval(src: &str, vars: &BTreeMap<String, f64>) -> Option<f64> {
    let mut output: Vec<Tok> = Vec::new();
    let mut ops: Vec<Tok> = Vec::new();
    for tok in tokenize(src)? {
        match tok {
            Tok::Num(_) | Tok::Name(_) => output.push(tok),
            Tok::Func(_) | Tok::Neg | Tok::LParen => ops.push(tok),
            Tok::Op(o) => {
                let p = precedence(&Tok::Op(o));
                let right = o == '^';
                while let Some(top) = ops.last() {
                    let q = precedence(top);
                    if matches!(top, Tok::LParen | Tok::Func(_)) || q < p || (q == p && right) {
                        break;
                    }
                    output.push(ops.pop().unwrap());
                }
                ops.push(Tok::Op(o));
            }
            Tok::RParen => {
                loop {
                    match ops.pop()? {
                        Tok::LParen => break,
                        t => output.push(t),
                    }
                }
                if let Some(Tok::Func(_)) = ops.last() {
                    output.push(ops.pop().unwrap());
                }
            }
        }
    }
    while let Some(t) = ops.pop() {
        if t == Tok::LParen {
            return None;
        }
        output.push(t);
    }

    let mut stack: Vec<f64> = Vec::new();
    for t in output {
        let v = match t {
            Tok::Num(x) => x,
            Tok::Name(n) => *vars.get(&n)?,
            Tok::Neg => -stack.pop()?,
            Tok::Func(f) => {
                let x = stack.pop()?;
                match f.as_str() {
                    "sin" => x.sin(),
                    "cos" => x.cos(),
                    "exp" => x.exp(),
                    "sqrt" => x.sqrt(),
                    _ => return None,
                }
            }
            Tok::Op(o) => {
                let y = stack.pop()?;
                let x = stack.pop()?;
                match o {
                    '+' => x + y,
                    '-' => x - y,
                    '*' => x * y,
                    '/' => x / y,
                    _ if y.fract() == 0.0 && y.abs() < 64.0 => x.powi(y as i32),
                    _ => x.powf(y),
                }
            }
            Tok::LParen | Tok::RParen => return None,
        };
        if !v.is_finite() {
            return None;
        }
        stack.push(v);
    }
    if stack.len() == 1 {
        stack.pop()
    } else {
        None
    }
}

/// Bindings used with [`expression_text`]: `t`, `tp`, `a`, `b`.
pub fn oracle_vars() -> BTreeMap<String, f64> {
    BTreeMap::from([("t".into(), 0.3), ("tp".into(), 0.7), ("a".into(), 1.3), ("b".into(), -0.4)])
}

/// Random expression source text: mixed precedence, unary minus, right-assoc powers,
/// optional whitespace and redundant parentheses.
pub fn expression_text() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        (1u32..100).prop_map(|n| format!("{}", n as f64 / 10.0)),
        (1u32..10).prop_map(|n| format!("{n}")),
        Just("2.5e-1".to_string()),
        Just("t".to_string()),
        Just("tp".to_string()),
        Just("a".to_string()),
        Just("b".to_string()),
    ];
    leaf.prop_recursive(5, 40, 2, |inner| {
        let sp = prop_oneof![Just(""), Just(" ")];
        prop_oneof![
            (inner.clone(), prop_oneof![Just('+'), Just('-'), Just('*'), Just('/')], inner.clone(), sp.clone())
                .prop_map(|(l, op, r, s)| format!("{l}{s}{op}{s}{r}")),
            (inner.clone(), prop_oneof![Just("2"), Just("3"), Just("-1"), Just("0.5")], sp.clone())
                .prop_map(|(l, k, s)| format!("{l}{s}^{s}{k}")),
            inner.clone().prop_map(|e| format!("-{e}")),
            inner.clone().prop_map(|e| format!("({e})")),
            (prop_oneof![Just("sin"), Just("cos"), Just("exp"), Just("sqrt")], inner)
                .prop_map(|(f, e)| format!("{f}({e})")),
        ]
    })
}

/// `|x - y| ≤ rtol·|y|`, exact equality included.
pub fn rel_close(x: f64, y: f64, rtol: f64) -> bool {
    x == y || (x - y).abs() <= rtol * y.abs()
}
