//! Polynomial-time solver for instances where every variable has at most
//! two colors, via the implication graph and strongly connected
//! components.

use super::{Assignment, Color, CspError, CspInstance, VarId};

/// Solves an instance whose variables all have at most two colors.
///
/// Each two-color variable becomes a boolean; a constraint forbidding
/// (v=a and w=b) becomes the clause (v!=a or w!=b), contributing the
/// usual pair of implications. Single-color variables enter as units and
/// empty domains are immediately unsatisfiable. Errors if any variable
/// has more than two colors.
pub fn solve_22csp(inst: &CspInstance) -> Result<Option<Assignment>, CspError> {
    let vars: Vec<VarId> = inst.var_ids().collect();
    let mut colors: Vec<Vec<Color>> = Vec::with_capacity(vars.len());
    let mut index = std::collections::BTreeMap::new();
    for (i, &v) in vars.iter().enumerate() {
        let dom = inst.domain(v).unwrap();
        if dom.len() > 2 {
            return Err(CspError::Contract(format!(
                "{v} has {} colors; solve_22csp requires at most two",
                dom.len()
            )));
        }
        if dom.is_empty() {
            return Ok(None);
        }
        index.insert(v, i);
        colors.push(dom.iter().copied().collect());
    }

    // Literal 2i: variable i takes colors[i][0]. Literal 2i+1: it takes
    // colors[i][1] (a phantom for single-color variables, forced false).
    let n_lit = 2 * vars.len();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let lit_of = |i: usize, c: Color, colors: &[Vec<Color>]| -> usize {
        if colors[i][0] == c {
            2 * i
        } else {
            2 * i + 1
        }
    };
    for (i, cs) in colors.iter().enumerate() {
        if cs.len() == 1 {
            // Unit: not(l) implies l.
            edges.push((2 * i + 1, 2 * i));
        }
    }
    for c in inst.constraints() {
        let ((v, cv), (w, cw)) = c.ends();
        let lv = lit_of(index[&v], cv, &colors);
        let lw = lit_of(index[&w], cw, &colors);
        // (not lv) or (not lw)
        edges.push((lv, lw ^ 1));
        edges.push((lw, lv ^ 1));
    }

    let comp = kosaraju(n_lit, &edges);
    let mut out = Assignment::new();
    for (i, &v) in vars.iter().enumerate() {
        if comp[2 * i] == comp[2 * i + 1] {
            return Ok(None);
        }
        // Components are numbered in topological order of the condensation;
        // a literal is true when its component comes later than its
        // negation's.
        let first = comp[2 * i] > comp[2 * i + 1];
        let chosen = if first {
            colors[i][0]
        } else {
            colors[i][if colors[i].len() == 2 { 1 } else { 0 }]
        };
        if !first && colors[i].len() == 1 {
            // The phantom literal won: the forced unit failed.
            return Ok(None);
        }
        out.set(v, chosen);
    }
    debug_assert_eq!(inst.is_solution(&out), Ok(true));
    Ok(Some(out))
}

/// Component ids in topological order of the condensation (sources get
/// smaller ids). Iterative so deep implication chains cannot overflow the
/// stack.
fn kosaraju(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut fwd = vec![Vec::new(); n];
    let mut rev = vec![Vec::new(); n];
    for &(a, b) in edges {
        fwd[a].push(b);
        rev[b].push(a);
    }

    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut stack = vec![(start, 0usize)];
        seen[start] = true;
        while let Some(&mut (u, ref mut next)) = stack.last_mut() {
            if *next < fwd[u].len() {
                let v = fwd[u][*next];
                *next += 1;
                if !seen[v] {
                    seen[v] = true;
                    stack.push((v, 0));
                }
            } else {
                order.push(u);
                stack.pop();
            }
        }
    }

    let mut comp = vec![usize::MAX; n];
    let mut current = 0;
    for &start in order.iter().rev() {
        if comp[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        comp[start] = current;
        while let Some(u) = stack.pop() {
            for &v in &rev[u] {
                if comp[v] == usize::MAX {
                    comp[v] = current;
                    stack.push(v);
                }
            }
        }
        current += 1;
    }
    comp
}
