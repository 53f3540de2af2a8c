//! `--term` grammar: `[c *] e^m * Mk[i] * Mk[i] ...`, whitespace-insensitive.
//! `e` alone is `e^1`, `Mk` without a twist is `Mk[0]`, a leading `-`
//! negates, and a bare integer factor multiplies the coefficient.

use gl2modrep::field::PrimePower;
use gl2modrep::k0::RawTerm;

pub fn parse_term(pp: PrimePower, s: &str) -> Result<RawTerm, String> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err("empty term".into());
    }
    let (sign, body) = match compact.strip_prefix('-') {
        Some(rest) => (-1i64, rest),
        None => (1, compact.strip_prefix('+').unwrap_or(&compact)),
    };
    let mut coeff = sign;
    let mut m = 0i64;
    let mut factors = Vec::new();
    for part in body.split('*') {
        if part.is_empty() {
            return Err(format!("empty factor in {s:?}"));
        }
        if let Some(rest) = part.strip_prefix('e') {
            m += match rest.strip_prefix('^') {
                Some(e) => parse_int(e, s)?,
                None if rest.is_empty() => 1,
                None => return Err(format!("bad determinant factor {part:?} in {s:?}")),
            };
        } else if let Some(rest) = part.strip_prefix('M') {
            let (k, twist) = match rest.split_once('[') {
                Some((k, t)) => {
                    let t = t.strip_suffix(']').ok_or_else(|| format!("missing ']' in {part:?}"))?;
                    (parse_int(k, s)?, parse_int(t, s)?)
                }
                None => (parse_int(rest, s)?, 0),
            };
            factors.push((k, pp.twist(twist)));
        } else {
            coeff = coeff.checked_mul(parse_int(part, s)?).ok_or("coefficient overflow")?;
        }
    }
    factors.sort_by_key(|f| f.1);
    Ok(RawTerm::new(coeff, m, factors))
}

fn parse_int(x: &str, whole: &str) -> Result<i64, String> {
    x.parse().map_err(|_| format!("expected an integer, found {x:?} in {whole:?}"))
}

/// `a..b` (inclusive) or a single integer.
pub fn parse_range(s: &str) -> Result<Vec<i64>, String> {
    let s = s.trim();
    match s.split_once("..") {
        Some((a, b)) => {
            let a: i64 = a.trim().parse().map_err(|_| format!("bad range start in {s:?}"))?;
            let b = b.trim().strip_prefix('=').unwrap_or(b.trim());
            let b: i64 = b.parse().map_err(|_| format!("bad range end in {s:?}"))?;
            if a > b {
                return Err(format!("empty range {s:?}"));
            }
            Ok((a..=b).collect())
        }
        None => Ok(vec![s.parse().map_err(|_| format!("expected an integer or a..b, found {s:?}"))?]),
    }
}

/// Comma-separated entries, each an integer or a range; the cartesian product.
pub fn parse_grid(s: &str) -> Result<Vec<Vec<i64>>, String> {
    let axes = s.split(',').map(parse_range).collect::<Result<Vec<_>, _>>()?;
    let mut out = vec![Vec::new()];
    for axis in axes {
        out = out.into_iter().flat_map(|v: Vec<i64>| axis.iter().map(move |x| [v.clone(), vec![*x]].concat())).collect();
    }
    Ok(out)
}

/// `4,4;6` → `[[4, 4], [6]]`.
pub fn parse_blocks(s: &str) -> Result<Vec<Vec<i64>>, String> {
    s.split(';')
        .map(|b| b.split(',').map(|x| x.trim().parse().map_err(|_| format!("expected an integer, found {x:?}"))).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn terms() {
        let pp = PrimePower::new(3, 2).unwrap();
        let t = parse_term(pp, "e^0*M3[0]").unwrap();
        assert_eq!(t, RawTerm::new(1, 0, vec![(3, 0)]));
        let t = parse_term(pp, " -2 * e * M1[1] * M4 ").unwrap();
        assert_eq!(t, RawTerm::new(-2, 1, vec![(4, 0), (1, 1)]));
        assert_eq!(parse_term(pp, "M-3[3]").unwrap(), RawTerm::new(1, 0, vec![(-3, 1)]));
        assert!(parse_term(pp, "M3[0").is_err());
        assert!(parse_term(pp, "x").is_err());
        assert!(parse_term(pp, "M1**M2").is_err());
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("-2..1").unwrap(), vec![-2, -1, 0, 1]);
        assert_eq!(parse_range("7").unwrap(), vec![7]);
        assert!(parse_range("3..1").is_err());
        assert_eq!(parse_grid("0..1,2").unwrap(), vec![vec![0, 2], vec![1, 2]]);
        assert_eq!(parse_blocks("4,4;6").unwrap(), vec![vec![4, 4], vec![6]]);
    }
}
