//! Line-oriented fibration description files.
//!
//! ```text
//! # comment
//! r = auto
//! component D coeff=2/9 fiber_degree=9
//! point label=o component=D germ="t - x^5 - x^9"
//! point label=p component=D tangency=3
//! vertical label=o coeff=1/3
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{
    Component, FibrationError, FibrationSpec, GermSource, MarkedPoint, PointGerm, Vertical,
};
use crate::exact::Rational;
use crate::poly::parse_poly;

/// Split a line into whitespace-separated tokens, keeping double-quoted
/// runs together and dropping a trailing `#` comment.
fn tokenize(line: &str, lineno: usize) -> Result<Vec<String>, FibrationError> {
    let mut tokens = Vec::new();
    let mut cur = String::new();
    let mut in_quotes = false;
    let mut have_token = false;
    for c in line.chars() {
        match c {
            '"' => {
                in_quotes = !in_quotes;
                have_token = true;
            }
            '#' if !in_quotes => break,
            c if c.is_whitespace() && !in_quotes => {
                if have_token {
                    tokens.push(std::mem::take(&mut cur));
                    have_token = false;
                }
            }
            c => {
                cur.push(c);
                have_token = true;
            }
        }
    }
    if in_quotes {
        return Err(FibrationError::Syntax {
            line: lineno,
            msg: "unterminated quote".into(),
        });
    }
    if have_token {
        tokens.push(cur);
    }
    Ok(tokens)
}

fn key_values(
    tokens: &[String],
    lineno: usize,
) -> Result<BTreeMap<String, String>, FibrationError> {
    let mut out = BTreeMap::new();
    for tok in tokens {
        let Some((k, v)) = tok.split_once('=') else {
            return Err(FibrationError::Syntax {
                line: lineno,
                msg: format!("expected key=value, found {tok:?}"),
            });
        };
        if out.insert(k.to_string(), v.to_string()).is_some() {
            return Err(FibrationError::Syntax {
                line: lineno,
                msg: format!("key {k:?} given twice"),
            });
        }
    }
    Ok(out)
}

fn take<'a>(
    kv: &'a BTreeMap<String, String>,
    key: &str,
    lineno: usize,
) -> Result<&'a str, FibrationError> {
    kv.get(key)
        .map(String::as_str)
        .ok_or(FibrationError::Syntax {
            line: lineno,
            msg: format!("missing {key}="),
        })
}

fn only_keys(
    kv: &BTreeMap<String, String>,
    allowed: &[&str],
    lineno: usize,
) -> Result<(), FibrationError> {
    match kv.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(FibrationError::Syntax {
            line: lineno,
            msg: format!("unknown key {k:?}"),
        }),
        None => Ok(()),
    }
}

fn rational(text: &str, lineno: usize) -> Result<Rational, FibrationError> {
    text.parse().map_err(|e| FibrationError::Syntax {
        line: lineno,
        msg: format!("{e}"),
    })
}

fn positive_int(text: &str, lineno: usize) -> Result<u32, FibrationError> {
    match text.parse::<u32>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(FibrationError::Syntax {
            line: lineno,
            msg: format!("expected a positive integer, found {text:?}"),
        }),
    }
}

/// Parse and validate a fibration file.
pub fn parse_fibration_file(text: &str) -> Result<FibrationSpec, FibrationError> {
    let mut components: Vec<Component> = Vec::new();
    let mut points: Vec<MarkedPoint> = Vec::new();
    let mut vertical: Vec<Vertical> = Vec::new();
    let mut declared_r: Option<Option<u64>> = None;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let tokens = tokenize(raw, lineno)?;
        let Some(head) = tokens.first() else {
            continue;
        };
        match head.as_str() {
            h if h == "r" || h.starts_with("r=") => {
                let joined = tokens.concat();
                let Some(value) = joined.strip_prefix("r=") else {
                    return Err(FibrationError::Syntax {
                        line: lineno,
                        msg: "expected r = auto | <positive integer>".into(),
                    });
                };
                if declared_r.is_some() {
                    return Err(FibrationError::Syntax {
                        line: lineno,
                        msg: "r given twice".into(),
                    });
                }
                declared_r = Some(if value == "auto" {
                    None
                } else {
                    Some(u64::from(positive_int(value, lineno)?))
                });
            }
            "component" => {
                let Some(id) = tokens.get(1).filter(|t| !t.contains('=')) else {
                    return Err(FibrationError::Syntax {
                        line: lineno,
                        msg: "component needs an id".into(),
                    });
                };
                let kv = key_values(&tokens[2..], lineno)?;
                only_keys(&kv, &["coeff", "fiber_degree"], lineno)?;
                let coefficient = rational(take(&kv, "coeff", lineno)?, lineno)?;
                let fiber_degree = positive_int(take(&kv, "fiber_degree", lineno)?, lineno)?;
                if components.iter().any(|c| &c.id == id) {
                    return Err(FibrationError::Duplicate(format!("component {id}")));
                }
                components.push(Component {
                    id: id.clone(),
                    coefficient,
                    fiber_degree,
                });
            }
            "point" => {
                let kv = key_values(&tokens[1..], lineno)?;
                only_keys(&kv, &["label", "component", "germ", "tangency"], lineno)?;
                let label = take(&kv, "label", lineno)?.to_string();
                let component = take(&kv, "component", lineno)?.to_string();
                let source = match (kv.get("germ"), kv.get("tangency")) {
                    (Some(g), None) => {
                        let eq = parse_poly(g).map_err(|e| FibrationError::Syntax {
                            line: lineno,
                            msg: format!("germ: {e}"),
                        })?;
                        GermSource::Explicit(eq)
                    }
                    (None, Some(l)) => GermSource::Tangency(positive_int(l, lineno)?),
                    _ => {
                        return Err(FibrationError::Syntax {
                            line: lineno,
                            msg: "point needs exactly one of germ= or tangency=".into(),
                        })
                    }
                };
                let germ = PointGerm { component, source };
                match points.iter_mut().find(|p| p.label == label) {
                    Some(p) => {
                        if p.germs.iter().any(|g| g.component == germ.component) {
                            return Err(FibrationError::Duplicate(format!(
                                "point {label} component {}",
                                germ.component
                            )));
                        }
                        p.germs.push(germ);
                    }
                    None => points.push(MarkedPoint {
                        label,
                        germs: vec![germ],
                    }),
                }
            }
            "vertical" => {
                let kv = key_values(&tokens[1..], lineno)?;
                only_keys(&kv, &["label", "coeff"], lineno)?;
                let label = take(&kv, "label", lineno)?.to_string();
                let coefficient = rational(take(&kv, "coeff", lineno)?, lineno)?;
                if vertical.iter().any(|v| v.label == label) {
                    return Err(FibrationError::Duplicate(format!("vertical {label}")));
                }
                vertical.push(Vertical { label, coefficient });
            }
            other => {
                return Err(FibrationError::Syntax {
                    line: lineno,
                    msg: format!("unknown directive {other:?}"),
                })
            }
        }
    }

    FibrationSpec::new(components, points, vertical, declared_r.flatten())
}

impl FibrationSpec {
    /// Render in the file format; `parse_fibration_file` reads it back to an
    /// equal spec.
    pub fn to_file_text(&self) -> String {
        let mut out = String::new();
        match self.declared_r {
            Some(r) => writeln!(out, "r = {r}").unwrap(),
            None => writeln!(out, "r = auto").unwrap(),
        }
        for c in &self.components {
            writeln!(
                out,
                "component {} coeff={} fiber_degree={}",
                c.id, c.coefficient, c.fiber_degree
            )
            .unwrap();
        }
        for p in &self.points {
            for g in &p.germs {
                match &g.source {
                    GermSource::Explicit(eq) => writeln!(
                        out,
                        "point label={} component={} germ=\"{}\"",
                        p.label, g.component, eq
                    )
                    .unwrap(),
                    GermSource::Tangency(l) => writeln!(
                        out,
                        "point label={} component={} tangency={}",
                        p.label, g.component, l
                    )
                    .unwrap(),
                }
            }
        }
        for v in &self.vertical {
            writeln!(out, "vertical label={} coeff={}", v.label, v.coefficient).unwrap();
        }
        out
    }
}
