//! Text formats: rule files, distribution literals and configuration literals.
//!
//! ```text
//! # two rules over {0, 1}
//! alphabet 2
//! radius 1
//! rule id table 0 0 1 1 0 0 1 1
//! rule xor linear 1 0 1
//! ```
//!
//! Distribution literal: `left=(id) mid=(xor xor) right=(id) anchor=0`, or
//! `uniform=xor`. Configuration literals use the same grammar with letters,
//! plus `zero` and `single:<letter>@<position>`.

use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::model::{Alphabet, Configuration, Distribution, Letter, LocalRule, PeriodicWord, RuleId, RuleSet};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

fn numbers<T: std::str::FromStr>(line: usize, tokens: &[&str]) -> Result<Vec<T>> {
    tokens
        .iter()
        .map(|t| t.parse().map_err(|_| parse_err(line, format!("expected an integer, found {t:?}"))))
        .collect()
}

/// Parses a rule file. Rules of different radii are padded to the largest.
pub fn parse_rule_set(text: &str) -> Result<RuleSet> {
    let mut alphabet: Option<Alphabet> = None;
    let mut radius: Option<usize> = None;
    let mut rules: Vec<LocalRule> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens[0] {
            "alphabet" => {
                if alphabet.is_some() {
                    return Err(parse_err(line, "alphabet declared twice"));
                }
                let [_, s] = tokens[..] else {
                    return Err(parse_err(line, "usage: alphabet <size>"));
                };
                let s: usize = numbers(line, &[s])?[0];
                alphabet = Some(Alphabet::new(s).map_err(|e| parse_err(line, e.to_string()))?);
            }
            "radius" => {
                let [_, r] = tokens[..] else {
                    return Err(parse_err(line, "usage: radius <r>"));
                };
                radius = Some(numbers(line, &[r])?[0]);
            }
            "rule" => {
                let a = alphabet.ok_or_else(|| parse_err(line, "alphabet must be declared before rules"))?;
                if tokens.len() < 3 {
                    return Err(parse_err(line, "usage: rule <name> table|linear <values>"));
                }
                let name = tokens[1];
                if !valid_name(name) {
                    return Err(parse_err(line, format!("invalid rule name {name:?}")));
                }
                let values: Vec<Letter> = numbers::<u16>(line, &tokens[3..])?
                    .into_iter()
                    .map(|v| Letter::try_from(v).map_err(|_| parse_err(line, format!("value {v} outside alphabet"))))
                    .collect::<Result<_>>()?;
                let rule = match tokens[2] {
                    "table" => {
                        let r = radius.ok_or_else(|| parse_err(line, "radius must be declared before table rules"))?;
                        LocalRule::from_table(name, a, r, values)
                    }
                    "linear" => {
                        if let Some(r) = radius {
                            if values.len() != 2 * r + 1 {
                                return Err(parse_err(
                                    line,
                                    format!("linear rule {name} needs {} coefficients, got {}", 2 * r + 1, values.len()),
                                ));
                            }
                        }
                        LocalRule::linear(name, a, values)
                    }
                    other => return Err(parse_err(line, format!("unknown rule kind {other:?}"))),
                }
                .map_err(|e| parse_err(line, e.to_string()))?;
                rules.push(rule);
            }
            other => return Err(parse_err(line, format!("unknown directive {other:?}"))),
        }
    }
    let last = text.lines().count().max(1);
    if alphabet.is_none() {
        return Err(parse_err(last, "missing alphabet declaration"));
    }
    RuleSet::new(rules).map_err(|e| parse_err(last, e.to_string()))
}

/// Writes a rule set back out; the result parses to an equal rule set.
pub fn format_rule_set(rules: &RuleSet) -> String {
    let mut out = format!("alphabet {}\nradius {}\n", rules.alphabet().size(), rules.radius());
    for rule in rules.rules() {
        let (kind, values) = match rule.coefficients() {
            Some(c) => ("linear", c),
            None => ("table", rule.table()),
        };
        let values: Vec<String> = values.iter().map(|v| v.to_string()).collect();
        out += &format!("rule {} {kind} {}\n", rule.name(), values.join(" "));
    }
    out
}

/// `key=value` pairs, where a value is a parenthesised list or a bare token.
fn fields(text: &str) -> Result<Vec<(String, Vec<String>)>> {
    let mut out = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let eq = rest.find('=').ok_or_else(|| invalid(format!("expected key=value near {rest:?}")))?;
        let key = rest[..eq].trim().to_string();
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(invalid(format!("malformed key near {rest:?}")));
        }
        let after = rest[eq + 1..].trim_start();
        let (items, remaining) = if let Some(body) = after.strip_prefix('(') {
            let close = body.find(')').ok_or_else(|| invalid(format!("unclosed '(' after {key}=")))?;
            let items = body[..close].split_whitespace().map(str::to_string).collect();
            (items, &body[close + 1..])
        } else {
            let end = after.find(char::is_whitespace).unwrap_or(after.len());
            if end == 0 {
                return Err(invalid(format!("missing value for {key}")));
            }
            (vec![after[..end].to_string()], &after[end..])
        };
        if out.iter().any(|(k, _): &(String, Vec<String>)| *k == key) {
            return Err(invalid(format!("{key} given twice")));
        }
        out.push((key, items));
        rest = remaining.trim_start();
    }
    Ok(out)
}

fn parse_word<T: Copy + Eq>(text: &str, item: impl Fn(&str) -> Result<T>) -> Result<PeriodicWord<T>> {
    let mut left = None;
    let mut middle = Vec::new();
    let mut right = None;
    let mut anchor = 0i64;
    let mut uniform = None;
    for (key, items) in fields(text)? {
        let list = || items.iter().map(|s| item(s)).collect::<Result<Vec<T>>>();
        match key.as_str() {
            "left" => left = Some(list()?),
            "mid" => middle = list()?,
            "right" => right = Some(list()?),
            "anchor" => {
                let [a] = &items[..] else {
                    return Err(invalid("anchor takes a single integer"));
                };
                anchor = a.parse().map_err(|_| invalid(format!("anchor must be an integer, got {a:?}")))?;
            }
            "uniform" => {
                let [u] = &items[..] else {
                    return Err(invalid("uniform takes a single symbol"));
                };
                uniform = Some(item(u)?);
            }
            other => return Err(invalid(format!("unknown field {other:?}"))),
        }
    }
    match (uniform, left, right) {
        (Some(u), None, None) if middle.is_empty() => Ok(PeriodicWord::uniform(u)),
        (Some(_), _, _) => Err(invalid("uniform= cannot be combined with other fields")),
        (None, Some(l), Some(r)) => PeriodicWord::new(l, middle, r, anchor),
        _ => Err(invalid("both left=(...) and right=(...) are required")),
    }
}

/// Parses `left=(...) mid=(...) right=(...) anchor=<i>` or `uniform=<name>`.
pub fn parse_distribution(rules: Arc<RuleSet>, text: &str) -> Result<Distribution> {
    let word = parse_word(text, |name| rules.id(name).ok_or_else(|| invalid(format!("unknown rule {name:?}"))))?;
    Distribution::from_word(rules, word)
}

/// Parses a space-separated list of rule names.
pub fn parse_pattern(rules: &RuleSet, text: &str) -> Result<Vec<RuleId>> {
    let names: Vec<&str> = text.split_whitespace().collect();
    if names.is_empty() {
        return Err(invalid("empty rule pattern"));
    }
    rules.lookup(&names)
}

/// Parses `zero`, `single:<letter>@<pos>`, `uniform=<letter>` or the full
/// `left=(...) mid=(...) right=(...) anchor=<i>` form with letters.
pub fn parse_configuration(alphabet: Alphabet, text: &str) -> Result<Configuration> {
    let text = text.trim();
    let letter = |t: &str| -> Result<Letter> {
        let v: u16 = t.parse().map_err(|_| invalid(format!("expected a letter, found {t:?}")))?;
        Letter::try_from(v)
            .ok()
            .filter(|&a| alphabet.contains(a))
            .ok_or_else(|| invalid(format!("letter {v} outside alphabet of size {}", alphabet.size())))
    };
    if text == "zero" {
        return Ok(Configuration::zero(alphabet));
    }
    if let Some(rest) = text.strip_prefix("single:") {
        let (a, p) = rest.split_once('@').ok_or_else(|| invalid("usage: single:<letter>@<position>"))?;
        let p: i64 = p.trim().parse().map_err(|_| invalid(format!("bad position {p:?}")))?;
        return Configuration::single(alphabet, letter(a.trim())?, p);
    }
    Configuration::from_word(alphabet, parse_word(text, letter)?)
}

fn format_word<T: Copy + Eq>(w: &PeriodicWord<T>, item: impl Fn(T) -> String) -> String {
    let list = |xs: &[T]| xs.iter().map(|&x| item(x)).collect::<Vec<_>>().join(" ");
    format!(
        "left=({}) mid=({}) right=({}) anchor={}",
        list(w.left()),
        list(w.middle()),
        list(w.right()),
        w.anchor()
    )
}

pub fn format_distribution(theta: &Distribution) -> String {
    format_word(theta.word(), |f| theta.rules().name(f).to_string())
}

pub fn format_configuration(x: &Configuration) -> String {
    format_word(x.word(), |a| a.to_string())
}
