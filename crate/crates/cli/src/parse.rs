use setdirect::{Error, GroupTable, Result, Subset};

/// Splits on commas that are not inside parentheses, so cycle-notation labels
/// such as `(0,1,2)` survive.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
        .into_iter()
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .collect()
}

/// An element given by index, or by label for non-numeric tokens. Numeric
/// tokens are always indices, so the identity label `1` is element 1, not 0.
pub fn element(g: &GroupTable, token: &str) -> Result<usize> {
    let token = token.trim();
    if let Ok(x) = token.parse::<usize>() {
        return if x < g.order() {
            Ok(x)
        } else {
            Err(Error::InvalidElement(format!(
                "index {x} out of range for order {}",
                g.order()
            )))
        };
    }
    g.find_label(token)
        .ok_or_else(|| Error::InvalidElement(format!("no element labelled '{token}'")))
}

/// An element list, or one of the keywords `all` and `center`.
pub fn subset(g: &GroupTable, list: &str) -> Result<Subset> {
    match list.trim().to_ascii_lowercase().as_str() {
        "all" => return Ok(g.all()),
        "center" => return Ok(g.center().clone()),
        _ => {}
    }
    let mut s = Subset::empty(g.order());
    for token in split_top_level(list) {
        s.insert(element(g, token)?);
    }
    if s.is_empty() {
        return Err(Error::Parse(format!("empty element list '{list}'")));
    }
    Ok(s)
}

/// `all`/`G`, `center`/`Z`, `trivial`, or a generator list.
pub fn subgroup(g: &GroupTable, arg: &str, group_name: &str) -> Result<Subset> {
    let lower = arg.trim().to_ascii_lowercase();
    if lower == "all" || lower == "g" || lower == group_name.trim().to_ascii_lowercase() {
        return Ok(g.all());
    }
    if lower == "center" || lower == "z" {
        return Ok(g.center().clone());
    }
    if lower == "trivial" {
        return Ok(g.trivial_subgroup());
    }
    g.generated_subgroup(&subset(g, arg)?)
}

pub fn labels(g: &GroupTable, s: &Subset) -> Vec<String> {
    s.iter().map(|x| g.label(x).to_string()).collect()
}
