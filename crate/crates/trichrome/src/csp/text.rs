//! Plain-text CSP instance format.
//!
//! ```text
//! # comment
//! p csp <nvars>
//! v <var-id> <k> <c1> ... <ck>
//! c <v> <cv> <w> <cw>
//! ```
//!
//! Variable ids are 1-indexed in the file. The writer emits a canonical
//! form (header, then `v` lines ascending, then `c` lines in constraint
//! order), so parse(write(i)) == i and write(parse(s)) is a fixpoint.

use super::{Color, CspError, CspInstance};
use crate::workfactor::SizeMeasure;

pub fn write_instance(inst: &CspInstance) -> String {
    // Ids are compacted to 1..=n in variable order; transformations may
    // have left gaps.
    let ids: Vec<_> = inst.var_ids().collect();
    let file_id = |v| ids.iter().position(|&x| x == v).unwrap() + 1;
    let mut out = String::new();
    out.push_str(&format!("p csp {}\n", ids.len()));
    for &v in &ids {
        let dom = inst.domain(v).unwrap();
        out.push_str(&format!("v {} {}", file_id(v), dom.len()));
        for c in dom {
            out.push_str(&format!(" {c}"));
        }
        out.push('\n');
    }
    for c in inst.constraints() {
        let ((v, cv), (w, cw)) = c.ends();
        out.push_str(&format!("c {} {} {} {}\n", file_id(v), cv, file_id(w), cw));
    }
    out
}

pub fn parse_instance(textual: &str) -> Result<CspInstance, CspError> {
    let mut nvars: Option<usize> = None;
    let mut domains: Vec<Option<Vec<Color>>> = Vec::new();
    let mut constraints: Vec<((usize, Color), (usize, Color))> = Vec::new();

    for (lineno, raw) in textual.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let fail = |msg: String| Err(CspError::Build(format!("line {lineno}: {msg}")));
        match toks[0] {
            "p" => {
                if nvars.is_some() {
                    return fail("duplicate p line".into());
                }
                if toks.len() != 3 || toks[1] != "csp" {
                    return fail("expected `p csp <nvars>`".into());
                }
                let n: usize = toks[2]
                    .parse()
                    .map_err(|_| CspError::Build(format!("line {lineno}: bad variable count")))?;
                nvars = Some(n);
                domains = vec![None; n];
            }
            "v" => {
                let n = match nvars {
                    Some(n) => n,
                    None => return fail("v line before p line".into()),
                };
                if toks.len() < 3 {
                    return fail("expected `v <id> <k> <colors...>`".into());
                }
                let id: usize = toks[1]
                    .parse()
                    .map_err(|_| CspError::Build(format!("line {lineno}: bad variable id")))?;
                if id == 0 || id > n {
                    return fail(format!("variable id {id} out of 1..={n}"));
                }
                let k: usize = toks[2]
                    .parse()
                    .map_err(|_| CspError::Build(format!("line {lineno}: bad color count")))?;
                if toks.len() != 3 + k {
                    return fail(format!("expected {k} colors, found {}", toks.len() - 3));
                }
                let mut colors = Vec::with_capacity(k);
                for t in &toks[3..] {
                    let c: Color = t
                        .parse()
                        .map_err(|_| CspError::Build(format!("line {lineno}: bad color `{t}`")))?;
                    colors.push(c);
                }
                if domains[id - 1].is_some() {
                    return fail(format!("variable {id} declared twice"));
                }
                domains[id - 1] = Some(colors);
            }
            "c" => {
                if nvars.is_none() {
                    return fail("c line before p line".into());
                }
                if toks.len() != 5 {
                    return fail("expected `c <v> <cv> <w> <cw>`".into());
                }
                let nums: Result<Vec<u64>, _> = toks[1..].iter().map(|t| t.parse()).collect();
                let nums =
                    nums.map_err(|_| CspError::Build(format!("line {lineno}: bad number")))?;
                let (v, cv, w, cw) = (nums[0], nums[1], nums[2], nums[3]);
                if v == 0 || w == 0 {
                    return fail("variable ids are 1-indexed".into());
                }
                constraints.push((
                    (v as usize - 1, cv as Color),
                    (w as usize - 1, cw as Color),
                ));
            }
            other => return fail(format!("unknown line type `{other}`")),
        }
    }

    let n = nvars.ok_or_else(|| CspError::Build("missing p line".into()))?;
    let mut doms = Vec::with_capacity(n);
    for (i, d) in domains.into_iter().enumerate() {
        match d {
            Some(d) => doms.push(d),
            None => {
                return Err(CspError::Build(format!(
                    "variable {} has no v line",
                    i + 1
                )))
            }
        }
    }
    CspInstance::build(&doms, &constraints, SizeMeasure::default())
}
