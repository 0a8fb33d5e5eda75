//! Text literals: `1*t^-2 + 1*t^3`, optionally ending in `+ O(t^N)`, and the
//! multi-generator form `2*x^1*y^-1 + 3`.

use crate::char_p::Prime;
use crate::error::{Error, Result};
use crate::series::laurent::{LaurentSeries, EXACT};
use crate::series::poly::Poly;

/// Split a sum into signed terms; a `-` directly after `^` belongs to the
/// exponent.
fn split_terms(s: &str) -> Result<Vec<(bool, String)>> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    let mut prev: Option<char> = None;
    for ch in s.chars().filter(|c| !c.is_whitespace()) {
        if (ch == '+' || ch == '-') && prev != Some('^') && prev.is_some() && prev != Some('(') {
            if cur.is_empty() {
                return Err(Error::Parse(format!("empty term in `{s}`")));
            }
            out.push((neg, std::mem::take(&mut cur)));
            neg = ch == '-';
        } else if (ch == '+' || ch == '-') && prev.is_none() {
            neg = ch == '-';
        } else {
            cur.push(ch);
        }
        prev = Some(ch);
    }
    if cur.is_empty() {
        return Err(Error::Parse(format!("empty term in `{s}`")));
    }
    out.push((neg, cur));
    Ok(out)
}

fn parse_int(s: &str, whole: &str) -> Result<i64> {
    s.parse::<i64>().map_err(|_| Error::Parse(format!("bad integer `{s}` in `{whole}`")))
}

/// Parse `c*v^e*w^f` against the given variable names.
fn parse_monomial(term: &str, names: &[&str], whole: &str) -> Result<(i64, Vec<i64>)> {
    let mut coeff: i64 = 1;
    let mut exps = vec![0i64; names.len()];
    for factor in term.split('*') {
        if factor.is_empty() {
            return Err(Error::Parse(format!("empty factor in `{whole}`")));
        }
        if factor.chars().next().is_some_and(|c| c.is_ascii_digit()) {
            coeff = coeff.checked_mul(parse_int(factor, whole)?).ok_or_else(|| {
                Error::Parse(format!("coefficient overflow in `{whole}`"))
            })?;
            continue;
        }
        let (name, e) = match factor.split_once('^') {
            Some((n, e)) => (n, parse_int(e, whole)?),
            None => (factor, 1),
        };
        let idx = names
            .iter()
            .position(|&n| n == name)
            .ok_or_else(|| Error::Parse(format!("unknown symbol `{name}` in `{whole}`")))?;
        exps[idx] += e;
    }
    Ok((coeff, exps))
}

/// Parse a series literal over `t`. A trailing `O(t^N)` sets the precision;
/// otherwise the series is exact.
pub fn parse_series(p: Prime, s: &str) -> Result<LaurentSeries> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty series literal".into()));
    }
    let mut terms = Vec::new();
    let mut prec = EXACT;
    for (neg, term) in split_terms(s)? {
        if let Some(inner) = term.strip_prefix("O(").and_then(|r| r.strip_suffix(')')) {
            let (_, e) = parse_monomial(inner, &["t"], s)?;
            prec = e[0];
            continue;
        }
        let (c, e) = parse_monomial(&term, &["t"], s)?;
        let c = p.reduce(if neg { -c } else { c });
        terms.push((e[0], c));
    }
    if prec == EXACT {
        Ok(LaurentSeries::exact(p, terms))
    } else {
        let lo = terms.iter().map(|&(e, _)| e).min().unwrap_or(prec).min(0);
        Ok(LaurentSeries::from_terms(p, terms, lo, prec))
    }
}

/// Parse a Laurent polynomial in the named generators.
pub fn parse_poly(p: Prime, names: &[&str], s: &str) -> Result<Poly> {
    let mut out = Poly::zero(p, names.len());
    for (neg, term) in split_terms(s.trim())? {
        let (c, e) = parse_monomial(&term, names, s)?;
        out.add_term(e, p.reduce(if neg { -c } else { c }));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_literals() {
        let p = Prime::new(2).unwrap();
        let s = parse_series(p, "1*t^-2 + 1*t^3").unwrap();
        assert_eq!(s, LaurentSeries::exact(p, [(-2, 1), (3, 1)]));
        let s = parse_series(p, "t + t^7 + O(t^5)").unwrap();
        assert_eq!(s.prec(), 5);
        assert_eq!(s.coeff(7), 0);
        let p3 = Prime::new(3).unwrap();
        let s = parse_series(p3, "-t^-1 - 2").unwrap();
        assert_eq!(s, LaurentSeries::exact(p3, [(-1, 2), (0, 1)]));
        assert_eq!(parse_series(p, "0").unwrap(), LaurentSeries::zero(p));
        assert!(parse_series(p, "1*u^2").is_err());
        assert!(parse_series(p, "t^").is_err());
    }

    #[test]
    fn poly_literals() {
        let p = Prime::new(3).unwrap();
        let x = parse_poly(p, &["x", "y"], "2*x^1*y^-1 + 3 + y").unwrap();
        assert_eq!(x.coeff(&[1, -1]), 2);
        assert_eq!(x.coeff(&[0, 0]), 0);
        assert_eq!(x.coeff(&[0, 1]), 1);
    }
}
