use std::sync::Arc;

use super::spec::checked_point;
use super::{MapOracle, SharedMap};
use crate::error::{Error, Result};
use crate::geometry::Point;

/// The builtin map library.
#[derive(Clone, Debug)]
pub enum Builtin {
    Identity,
    /// `(0, x1, x2, ...)`; unbounded support.
    Shift,
    /// Cyclic rotation of the first `n` coordinates that returns the mass
    /// outside them to `f1`:
    /// `(x_n + r, x_1, ..., x_{n-1}, 0, ...)` with `r = 1 - (x_1 + ... + x_n)`.
    /// Its unique fixed point is the barycenter of `F^{n-1}`.
    Rotation(usize),
    Constant(Point),
    /// `t f + (1 - t) g`.
    ConvexCombo(SharedMap, SharedMap, f64),
}

/// Names accepted by [`builtin`], with `<n>`, `<i>` and the combo arguments
/// as placeholders.
pub fn builtin_names() -> &'static [&'static str] {
    &[
        "identity",
        "shift",
        "rotation-<n>",
        "constant-<i>",
        "convex-combo(<map>,<map>,<t>)",
    ]
}

/// One instance of every builtin family, used for audits and tests.
pub const BUILTIN_SUITE: &[&str] = &[
    "identity",
    "shift",
    "rotation-2",
    "rotation-3",
    "rotation-4",
    "constant-1",
    "constant-2",
    "constant-3",
    "convex-combo(rotation-3,shift,0.5)",
    "convex-combo(identity,constant-2,0.25)",
];

fn parse_index(s: &str, name: &str) -> Result<usize> {
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(Error::UnknownBuiltin(name.to_string())),
    }
}

/// Splits `a,b,t` at top-level commas.
fn split_args(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

impl Builtin {
    pub fn from_name(name: &str) -> Result<Builtin> {
        let name = name.trim();
        let unknown = || Error::UnknownBuiltin(name.to_string());
        if name == "identity" {
            return Ok(Builtin::Identity);
        }
        if name == "shift" {
            return Ok(Builtin::Shift);
        }
        if let Some(n) = name.strip_prefix("rotation-") {
            return Ok(Builtin::Rotation(parse_index(n, name)?));
        }
        if let Some(i) = name.strip_prefix("constant-") {
            return Ok(Builtin::Constant(Point::basis(parse_index(i, name)?)));
        }
        if let Some(args) = name.strip_prefix("convex-combo(").and_then(|s| s.strip_suffix(')')) {
            let parts = split_args(args);
            let [a, b, t] = parts.as_slice() else {
                return Err(unknown());
            };
            let t: f64 = t.parse().map_err(|_| unknown())?;
            if !(0.0..=1.0).contains(&t) {
                return Err(Error::InvalidParameter(format!(
                    "convex-combo weight {t} outside [0, 1]"
                )));
            }
            return Ok(Builtin::ConvexCombo(builtin(a)?, builtin(b)?, t));
        }
        Err(unknown())
    }
}

impl MapOracle for Builtin {
    fn evaluate(&self, x: &Point) -> Result<Point> {
        match self {
            Builtin::Identity => Ok(x.clone()),
            Builtin::Shift => Ok(Point::new(x.iter().map(|(i, v)| (i + 1, v)))?),
            Builtin::Rotation(n) => {
                let n = *n;
                let head: f64 = x.iter().filter(|&(i, _)| i <= n).map(|(_, v)| v).sum();
                let rest = (1.0 - head).max(0.0);
                let mut out = vec![(1, x.get(n) + rest)];
                out.extend(x.iter().filter(|&(i, _)| i < n).map(|(i, v)| (i + 1, v)));
                let mut dense = vec![0.0; n];
                for (i, v) in out {
                    dense[i - 1] += v;
                }
                checked_point(&dense, x)
            }
            Builtin::Constant(p) => Ok(p.clone()),
            Builtin::ConvexCombo(f, g, t) => {
                let (a, b) = (f.evaluate(x)?, g.evaluate(x)?);
                let len = a.max_index().max(b.max_index());
                let dense: Vec<f64> = a
                    .to_dense(len)
                    .iter()
                    .zip(b.to_dense(len))
                    .map(|(u, v)| t * u + (1.0 - t) * v)
                    .collect();
                checked_point(&dense, x)
            }
        }
    }

    fn support_bound(&self) -> Option<usize> {
        match self {
            Builtin::Identity | Builtin::Shift => None,
            Builtin::Rotation(n) => Some(*n),
            Builtin::Constant(p) => Some(p.max_index()),
            Builtin::ConvexCombo(f, g, _) => Some(f.support_bound()?.max(g.support_bound()?)),
        }
    }

    fn describe(&self) -> String {
        match self {
            Builtin::Identity => "identity".into(),
            Builtin::Shift => "shift".into(),
            Builtin::Rotation(n) => format!("rotation-{n}"),
            Builtin::Constant(p) => match p.entries() {
                [(i, v)] if *v == 1.0 => format!("constant-{i}"),
                _ => format!("constant({p})"),
            },
            Builtin::ConvexCombo(f, g, t) => format!("convex-combo({},{},{t})", f.describe(), g.describe()),
        }
    }
}

/// Looks up a builtin map by name, e.g. `rotation-3` or
/// `convex-combo(shift,constant-1,0.5)`.
pub fn builtin(name: &str) -> Result<SharedMap> {
    Ok(Arc::new(Builtin::from_name(name)?))
}
