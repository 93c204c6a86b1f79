//! DOT and ASCII drawings of the dual graph, optionally annotated with
//! cycle coefficients.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::resolution::{DualGraph, FundamentalCycle};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum GraphFormat {
    Dot,
    Ascii,
}

pub fn render_graph(g: &DualGraph, z: Option<&FundamentalCycle>, format: GraphFormat) -> String {
    let z = z.filter(|z| {
        z.branch_coeffs.len() == g.branches.len()
            && g.branches
                .iter()
                .zip(&z.branch_coeffs)
                .all(|(b, c)| b.len() == c.len())
    });
    match format {
        GraphFormat::Dot => dot(g, z),
        GraphFormat::Ascii => ascii(g, z),
    }
}

fn dot(g: &DualGraph, z: Option<&FundamentalCycle>) -> String {
    let mut out = String::from("graph dual {\n  node [shape=circle];\n");
    let node = |out: &mut String, name: &str, w: i64, c: Option<u64>| {
        let _ = match c {
            Some(c) => writeln!(out, "  {name} [label=\"-{w}\", xlabel=\"{c}\"];"),
            None => writeln!(out, "  {name} [label=\"-{w}\"];"),
        };
    };
    node(&mut out, "E0", g.central_weight, z.map(|z| z.n0));
    for (i, b) in g.branches.iter().enumerate() {
        for (j, &w) in b.entries().iter().enumerate() {
            let c = z.map(|z| z.branch_coeffs[i][j]);
            node(&mut out, &format!("E{}_{}", i + 1, j + 1), w, c);
        }
    }
    for (i, b) in g.branches.iter().enumerate() {
        let mut prev = "E0".to_string();
        for j in 0..b.len() {
            let cur = format!("E{}_{}", i + 1, j + 1);
            let _ = writeln!(out, "  {prev} -- {cur};");
            prev = cur;
        }
    }
    out.push_str("}\n");
    out
}

fn ascii(g: &DualGraph, z: Option<&FundamentalCycle>) -> String {
    let vertex = |w: i64, c: Option<u64>| match c {
        Some(c) => format!("(-{w})[{c}]"),
        None => format!("(-{w})"),
    };
    let mut out = vertex(g.central_weight, z.map(|z| z.n0));
    out.push('\n');
    let count = g.branches.len();
    for (i, b) in g.branches.iter().enumerate() {
        let chain: Vec<String> = b
            .entries()
            .iter()
            .enumerate()
            .map(|(j, &w)| vertex(w, z.map(|z| z.branch_coeffs[i][j])))
            .collect();
        let elbow = if i + 1 == count { " `-- " } else { " |-- " };
        out.push_str(elbow);
        out.push_str(&chain.join(" -- "));
        out.push('\n');
    }
    out
}
