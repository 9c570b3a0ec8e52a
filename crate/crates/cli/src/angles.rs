//! Angle literals for `--angles`: either a multiple of pi (`0`, `pi`, `2pi/3`,
//! `2*pi/3`) or plain radians (`1.0471975512`).

use boolebell::quantum::ExactAngle;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleLiteral {
    pub radians: f64,
    /// Set when the literal is a multiple of pi/12 inside [0, 2pi].
    pub exact: Option<ExactAngle>,
}

fn parse_pi_multiple(text: &str) -> Option<(u64, u64)> {
    let (head, den) = match text.split_once('/') {
        Some((h, d)) => (h, d.trim().parse::<u64>().ok().filter(|&d| d > 0)?),
        None => (text, 1),
    };
    let num = head.trim().strip_suffix("pi")?.trim_end();
    let num = num.strip_suffix('*').unwrap_or(num).trim_end();
    let num = if num.is_empty() { 1 } else { num.parse::<u64>().ok()? };
    Some((num, den))
}

pub fn parse_angle(text: &str) -> Result<AngleLiteral, String> {
    let text = text.trim();
    if let Some((num, den)) = parse_pi_multiple(text) {
        let radians = std::f64::consts::PI * num as f64 / den as f64;
        let exact = (12 * num % den == 0)
            .then(|| 12 * num / den)
            .and_then(|k| u32::try_from(k).ok())
            .and_then(|k| ExactAngle::twelfths(k).ok());
        return Ok(AngleLiteral { radians, exact });
    }
    match text.parse::<f64>() {
        Ok(r) if r.is_finite() => {
            let exact = (r == 0.0).then(|| ExactAngle::twelfths(0).expect("in range"));
            Ok(AngleLiteral { radians: r, exact })
        }
        _ => Err(format!("invalid angle `{text}` (expected radians or a multiple of pi such as 2pi/3)")),
    }
}
