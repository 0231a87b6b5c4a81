//! Parsers for the flag value syntaxes: `X+Yi`, `NxM`, `lo,hi` and
//! functional specs such as `ThetaRatio(1.5,3)`.

use lattice_extremals::extremal::RatioSpec;

/// `X+Yi`, `X-Yi` or `Yi`, with decimal (optionally exponent) reals.
pub fn parse_complex(s: &str) -> Result<(f64, f64), String> {
    let err = || format!("invalid complex number '{s}', expected X+Yi");
    let body = s.trim().strip_suffix('i').ok_or_else(err)?;
    let bytes = body.as_bytes();
    // Split at the last sign that is neither leading nor part of an exponent.
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "+" | "" => "1",
        "-" => "-1",
        other => other.strip_prefix('+').unwrap_or(other),
    };
    let x: f64 = re.parse().map_err(|_| err())?;
    let y: f64 = im.parse().map_err(|_| err())?;
    if !x.is_finite() || !y.is_finite() {
        return Err(err());
    }
    Ok((x, y))
}

/// `NxM` with N, M ≥ 1.
pub fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let err = || format!("invalid grid '{s}', expected NxM");
    let (n, m) = s.split_once(['x', 'X']).ok_or_else(err)?;
    let n: usize = n.trim().parse().map_err(|_| err())?;
    let m: usize = m.trim().parse().map_err(|_| err())?;
    if n == 0 || m == 0 {
        return Err(err());
    }
    Ok((n, m))
}

/// `lo,hi` with finite lo < hi.
pub fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let err = || format!("invalid range '{s}', expected lo,hi");
    let (lo, hi) = s.split_once(',').ok_or_else(err)?;
    let lo: f64 = lo.trim().parse().map_err(|_| err())?;
    let hi: f64 = hi.trim().parse().map_err(|_| err())?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(err());
    }
    Ok((lo, hi))
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (k, c) in s.char_indices() {
        match c {
            '[' => depth += 1,
            ']' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&s[start..k]);
                start = k + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

enum Arg {
    Num(f64),
    List(Vec<f64>),
}

fn parse_arg(s: &str) -> Result<Arg, String> {
    let s = s.trim();
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("invalid number '{}' in spec", t.trim()));
    match s.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
        Some(inner) => inner.split([';', ',']).map(num).collect::<Result<_, _>>().map(Arg::List),
        None => num(s).map(Arg::Num),
    }
}

/// Parses the [`RatioSpec::label`] syntax (case-insensitive names; list
/// entries separated by `;` or `,`).
pub fn parse_spec(s: &str) -> Result<RatioSpec, String> {
    let s = s.trim();
    let open = s.find('(').ok_or_else(|| format!("invalid spec '{s}', expected Name(args)"))?;
    let inner = s[open + 1..].strip_suffix(')').ok_or_else(|| format!("invalid spec '{s}', missing ')'"))?;
    let name = s[..open].trim().to_ascii_lowercase();
    let args = split_top_level(inner).into_iter().map(parse_arg).collect::<Result<Vec<_>, _>>()?;
    let nums = |n: usize| -> Result<Vec<f64>, String> {
        if args.len() != n {
            return Err(format!("{} expects {n} arguments, got {}", &s[..open], args.len()));
        }
        args.iter()
            .map(|a| match a {
                Arg::Num(v) => Ok(*v),
                Arg::List(_) => Err(format!("{} expects scalar arguments", &s[..open])),
            })
            .collect()
    };
    let spec = match name.as_str() {
        "thetaratio" => {
            let v = nums(2)?;
            RatioSpec::ThetaRatio { alpha: v[0], beta: v[1] }
        }
        "thetapowerratio" => {
            let v = nums(3)?;
            RatioSpec::ThetaPowerRatio { alpha: v[0], beta: v[1], k: v[2] }
        }
        "zetathetaratio" => {
            let v = nums(3)?;
            RatioSpec::ZetaThetaRatio { s: v[0], alpha: v[1], k: v[2] }
        }
        "zetathetadifference" => {
            let v = nums(3)?;
            RatioSpec::ZetaThetaDifference { s: v[0], alpha: v[1], k: v[2] }
        }
        "partitionz" => RatioSpec::PartitionZ { r: nums(1)?[0] },
        "partitionztc" => RatioSpec::PartitionZTc { c: nums(1)?[0] },
        "partitionratio" => {
            let v = nums(2)?;
            RatioSpec::PartitionRatio { r1: v[0], r2: v[1] }
        }
        "sumratio" => {
            let mut lists = args.into_iter().map(|a| match a {
                Arg::List(v) => Ok(v),
                Arg::Num(v) => Ok(vec![v]),
            });
            let mut next = || lists.next().unwrap_or_else(|| Err("SumRatio expects 4 lists".to_string()));
            let (a, alpha, b, beta) = (next()?, next()?, next()?, next()?);
            if lists.next().is_some() {
                return Err("SumRatio expects 4 lists".into());
            }
            RatioSpec::SumRatio { a, alpha, b, beta }
        }
        _ => return Err(format!("unknown functional '{}'", &s[..open])),
    };
    spec.validate().map_err(|e| e.to_string())?;
    Ok(spec)
}
