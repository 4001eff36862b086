use coherence_lab::Complex64;

/// Twelve digits after the point, with negative zero printed as zero.
pub fn fixed(x: f64) -> String {
    let s = format!("{x:.12}");
    if s.starts_with('-') && s[1..].bytes().all(|b| b == b'0' || b == b'.') {
        s[1..].to_string()
    } else {
        s
    }
}

/// Shortest round-trip scientific notation.
pub fn sci(x: f64) -> String {
    if x == 0.0 {
        "0e0".to_string()
    } else {
        format!("{x:e}")
    }
}

pub fn complex(z: Complex64) -> String {
    let im = fixed(z.im);
    let sign = if im.starts_with('-') { "" } else { "+" };
    format!("{} {sign}{im} i", fixed(z.re))
}
