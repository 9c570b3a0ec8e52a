//! Number formatting shared by text and JSON output.

use boolebell::event::Atom;
use boolebell::rational::Rational;
use boolebell::AtomDistribution;
use num_traits::Zero;
use serde_json::{json, Value};

/// Twelve significant digits, trailing zeros dropped.
pub fn float(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.truncate(s.trim_end_matches('0').trim_end_matches('.').len());
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

/// The same rounded value as `float`, as a JSON number.
pub fn float_json(x: f64) -> Value {
    json!(float(x).parse::<f64>().unwrap_or(x))
}

pub fn rational_json(r: &Rational) -> Value {
    Value::String(r.to_string())
}

/// Events occurring in an atom, e.g. `{1,3}`; `{}` for the empty atom.
pub fn atom(n: usize, a: Atom) -> String {
    let inside: Vec<String> = (1..=n).filter(|i| a >> (i - 1) & 1 == 1).map(|i| i.to_string()).collect();
    format!("{{{}}}", inside.join(","))
}

pub fn atom_events(n: usize, a: Atom) -> Vec<usize> {
    (1..=n).filter(|i| a >> (i - 1) & 1 == 1).collect()
}

/// Nonzero atoms of a distribution, in atom order.
pub fn support(d: &AtomDistribution) -> impl Iterator<Item = (Atom, &Rational)> {
    d.weights()
        .iter()
        .enumerate()
        .filter(|(_, w)| !w.is_zero())
        .map(|(a, w)| (a as Atom, w))
}

pub fn distribution_json(d: &AtomDistribution) -> Value {
    Value::Array(
        support(d)
            .map(|(a, w)| json!({ "atom": atom_events(d.n(), a), "weight": rational_json(w) }))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(float(-1.125), "-1.125");
        assert_eq!(float(0.12499999999999997), "0.125");
        assert_eq!(float(std::f64::consts::PI), "3.14159265359");
        assert_eq!(float(1234567.891234567), "1234567.89123");
        assert_eq!(float(1e-5 / 3.0), "0.00000333333333333");
        assert_eq!(float(-1e-17), "-0.00000000000000001");
        assert_eq!(float(0.0), "0");
        assert_eq!(float(-0.0), "0");
        assert_eq!(float(123456789012345.0), "123456789012345");
    }

    #[test]
    fn atoms_list_their_events() {
        assert_eq!(atom(3, 0b101), "{1,3}");
        assert_eq!(atom(3, 0), "{}");
    }
}
