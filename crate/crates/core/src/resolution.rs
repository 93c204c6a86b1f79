//! The star-shaped dual graph of the minimal good resolution, its
//! fundamental cycle and the multiplicity.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::divisor::{deg_floor, is_rational_singularity, Fraction, NormalizedDivisor};
use crate::error::{Error, Result};
use crate::hj::HjSequence;
use crate::number::ceil_div;

/// Central vertex of self-intersection `-central_weight` with one chain per
/// fraction, listed from the centre outward.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DualGraph {
    pub central_weight: i64,
    pub branches: Vec<HjSequence>,
}

impl DualGraph {
    pub fn vertex_count(&self) -> usize {
        1 + self.branches.iter().map(HjSequence::len).sum::<usize>()
    }
}

/// Coefficients of a cycle on the dual graph: `n0` on the central curve and
/// one list per branch, centre outward.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FundamentalCycle {
    pub n0: u64,
    pub branch_coeffs: Vec<Vec<u64>>,
}

impl FundamentalCycle {
    pub fn total(&self) -> u64 {
        self.n0 + self.branch_coeffs.iter().flatten().sum::<u64>()
    }
}

impl fmt::Display for FundamentalCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n0={}", self.n0)?;
        for b in &self.branch_coeffs {
            let parts: Vec<String> = b.iter().map(u64::to_string).collect();
            write!(f, " ({})", parts.join(","))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityReport {
    pub value: u64,
    pub cycle: FundamentalCycle,
    pub graph: DualGraph,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Vertex {
    Central,
    /// `branch` and `position` are 0-based; position 0 meets the centre.
    Branch {
        branch: usize,
        position: usize,
    },
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Central => write!(f, "E0"),
            Vertex::Branch { branch, position } => write!(f, "E{},{}", branch + 1, position + 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum CycleCheck {
    ValidFundamental,
    /// `Z·E > 0` at `vertex`.
    Violation {
        vertex: Vertex,
        value: i64,
    },
    SmallerCycle {
        cycle: FundamentalCycle,
    },
    /// Shape does not match the graph, or the cycle is zero.
    Malformed {
        reason: String,
    },
    /// The search hit its state budget before reaching a conclusion.
    BudgetExceeded,
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    /// Maximum number of distinct chain states explored.
    pub budget: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { budget: 5_000_000 }
    }
}

/// Expansion of `den/num` together with every tail `[[b_j, ..., b_m]]` as
/// an integer pair.
fn expand_reciprocal(f: &Fraction) -> (Vec<i64>, Vec<(i64, i64)>) {
    let (mut p, mut q) = (f.den(), f.num());
    let mut entries = Vec::new();
    let mut tails = Vec::new();
    loop {
        let b = ceil_div(p as i128, q as i128) as i64;
        entries.push(b);
        tails.push((p, q));
        let rem = b * q - p;
        if rem == 0 {
            break;
        }
        (p, q) = (q, rem);
    }
    (entries, tails)
}

fn check_regime(d: &NormalizedDivisor) -> Result<()> {
    if d.s() >= 2 || (d.s() == 1 && d.r() >= 3) {
        d.require_ample()
    } else {
        Err(Error::Unsupported(format!(
            "central weight {} with {} branches: the resolution graph is only modelled for s >= 2, or s = 1 with at least three branches",
            d.s(),
            d.r()
        )))
    }
}

pub fn dual_graph(d: &NormalizedDivisor) -> Result<DualGraph> {
    check_regime(d)?;
    let branches = d
        .fractions()
        .iter()
        .map(|f| HjSequence::new(expand_reciprocal(f).0))
        .collect::<Result<Vec<_>>>()?;
    Ok(DualGraph {
        central_weight: d.s(),
        branches,
    })
}

/// The cycle `F_l` with central coefficient `l` and branch coefficients
/// `n_{i1} = ⌈l / e_{i1}⌉`, `n_{i,j+1} = ⌈n_ij / e_{i,j+1}⌉`. It meets every
/// branch vertex non-positively and `F_l·E0 = −deg [lD]`.
pub fn recursion_cycle(d: &NormalizedDivisor, l: u64) -> FundamentalCycle {
    let branch_coeffs = d
        .fractions()
        .iter()
        .map(|f| {
            let (_, tails) = expand_reciprocal(f);
            let mut prev = l as i128;
            tails
                .iter()
                .map(|&(p, q)| {
                    prev = ceil_div(prev * q as i128, p as i128);
                    prev as u64
                })
                .collect()
        })
        .collect();
    FundamentalCycle {
        n0: l,
        branch_coeffs,
    }
}

/// `n0 = min { n : deg [nD] >= 0 }`, then the branch recursion.
pub fn fundamental_cycle(d: &NormalizedDivisor) -> Result<FundamentalCycle> {
    check_regime(d)?;
    let verdict = is_rational_singularity(d)?;
    if !verdict.is_rational() {
        return Err(Error::Precondition(format!(
            "{d} is not a rational singularity (deg [{}D] = {})",
            verdict.witness_n.unwrap_or_default(),
            verdict.witness_value.unwrap_or_default()
        )));
    }
    // deg [nD] >= n·deg D − r, so the search ends by n = ⌈r / deg D⌉.
    let n0 = (1..)
        .find(|&n| deg_floor(d, n) >= 0)
        .expect("ample divisors have nonnegative multiples");
    Ok(recursion_cycle(d, n0))
}

/// `n0(s−2) + Σ n_ij(b_ij−2) + 2`.
pub fn multiplicity(d: &NormalizedDivisor) -> Result<MultiplicityReport> {
    let graph = dual_graph(d)?;
    let cycle = fundamental_cycle(d)?;
    let mut value = cycle.n0 as i128 * (graph.central_weight as i128 - 2) + 2;
    for (seq, coeffs) in graph.branches.iter().zip(&cycle.branch_coeffs) {
        for (&b, &n) in seq.entries().iter().zip(coeffs) {
            value += n as i128 * (b as i128 - 2);
        }
    }
    let value = u64::try_from(value)
        .map_err(|_| Error::Domain(format!("non-positive multiplicity {value} for {d}")))?;
    Ok(MultiplicityReport {
        value,
        cycle,
        graph,
    })
}

fn shape_matches(g: &DualGraph, z: &FundamentalCycle) -> bool {
    z.branch_coeffs.len() == g.branches.len()
        && g.branches
            .iter()
            .zip(&z.branch_coeffs)
            .all(|(b, c)| b.len() == c.len())
}

/// `Z·E` for every vertex, central first, then branches centre outward.
pub fn intersections(g: &DualGraph, z: &FundamentalCycle) -> Result<Vec<(Vertex, i64)>> {
    if !shape_matches(g, z) {
        return Err(Error::Domain("cycle shape does not match the graph".into()));
    }
    let mut out = Vec::with_capacity(g.vertex_count());
    let first_sum: i128 = z.branch_coeffs.iter().map(|c| c[0] as i128).sum();
    out.push((
        Vertex::Central,
        narrow(first_sum - g.central_weight as i128 * z.n0 as i128),
    ));
    for (i, (seq, coeffs)) in g.branches.iter().zip(&z.branch_coeffs).enumerate() {
        for (j, &b) in seq.entries().iter().enumerate() {
            let inner = if j == 0 { z.n0 } else { coeffs[j - 1] } as i128;
            let outer = coeffs.get(j + 1).copied().unwrap_or(0) as i128;
            let v = inner + outer - b as i128 * coeffs[j] as i128;
            out.push((
                Vertex::Branch {
                    branch: i,
                    position: j,
                },
                narrow(v),
            ));
        }
    }
    Ok(out)
}

fn narrow(v: i128) -> i64 {
    v.clamp(i64::MIN as i128, i64::MAX as i128) as i64
}

/// Feasible chain suffixes for one branch, bounded componentwise by `z`.
/// A state `(j, prev, cur)` records `y_{j-1} = prev`, `y_j = cur`.
struct ChainSearch<'a> {
    b: &'a [i64],
    z: &'a [u64],
    memo: HashMap<(usize, u64, u64), (bool, bool)>,
    budget: &'a mut u64,
}

impl ChainSearch<'_> {
    /// `(any, differs)`: some valid completion exists / one exists whose
    /// values from `j` on differ from `z`.
    fn solve(&mut self, j: usize, prev: u64, cur: u64) -> Option<(bool, bool)> {
        if let Some(&hit) = self.memo.get(&(j, prev, cur)) {
            return Some(hit);
        }
        if *self.budget == 0 {
            return None;
        }
        *self.budget -= 1;
        let room = self.b[j] as i128 * cur as i128 - prev as i128;
        let same_here = cur == self.z[j];
        let res = if j + 1 == self.b.len() {
            let ok = room >= 0;
            (ok, ok && !same_here)
        } else {
            let upper = room.min(self.z[j + 1] as i128);
            let (mut any, mut differs) = (false, false);
            for next in 1..=upper.max(0) as u64 {
                let (a, d) = self.solve(j + 1, cur, next)?;
                any |= a;
                differs |= if same_here { d } else { a };
                if any && differs {
                    break;
                }
            }
            (any, differs)
        };
        self.memo.insert((j, prev, cur), res);
        Some(res)
    }

    /// Smallest first value with a valid chain, and smallest one with a chain
    /// different from `z`.
    fn first_values(&mut self, y0: u64) -> Option<(Option<u64>, Option<u64>)> {
        let (mut any, mut differs) = (None, None);
        for y1 in 1..=self.z[0] {
            let (a, d) = self.solve(0, y0, y1)?;
            if a && any.is_none() {
                any = Some(y1);
            }
            if d && differs.is_none() {
                differs = Some(y1);
            }
            if any.is_some() && differs.is_some() {
                break;
            }
        }
        Some((any, differs))
    }

    fn rebuild(&mut self, prev: u64, first: u64, want_diff: bool) -> Vec<u64> {
        let mut out = vec![first];
        let (mut j, mut prev, mut cur, mut want_diff) = (0, prev, first, want_diff);
        while j + 1 < self.b.len() {
            let same_here = cur == self.z[j];
            let need = want_diff && same_here;
            let room = self.b[j] as i128 * cur as i128 - prev as i128;
            let upper = room.min(self.z[j + 1] as i128).max(0) as u64;
            let next = (1..=upper)
                .find(|&n| {
                    let (a, d) = self
                        .memo
                        .get(&(j + 1, cur, n))
                        .copied()
                        .unwrap_or((false, false));
                    if need {
                        d
                    } else {
                        a
                    }
                })
                .expect("memoised state has a completion");
            want_diff = need;
            out.push(next);
            (j, prev, cur) = (j + 1, cur, next);
        }
        out
    }
}

/// Confirms that `z` is the fundamental cycle of `g`: every `Z·E <= 0`, and
/// no nonzero effective `Y <= Z`, `Y != Z`, satisfies the same.
///
/// Such a `Y` has full support on a connected graph, so the search runs over
/// `1 <= y <= z` componentwise: for each central value the branches are
/// independent chains coupled only through `Σ y_{i1} <= s·y0`.
pub fn verify_cycle_with(g: &DualGraph, z: &FundamentalCycle, opts: VerifyOptions) -> CycleCheck {
    if !shape_matches(g, z) {
        return CycleCheck::Malformed {
            reason: "cycle shape does not match the graph".into(),
        };
    }
    if z.total() == 0 {
        return CycleCheck::Malformed {
            reason: "cycle is zero".into(),
        };
    }
    let products = intersections(g, z).expect("shape checked");
    if let Some(&(vertex, value)) = products.iter().find(|(_, v)| *v > 0) {
        return CycleCheck::Violation { vertex, value };
    }
    if z.n0 == 0 || z.branch_coeffs.iter().flatten().any(|&c| c == 0) {
        // A valid nonzero cycle on a connected graph has full support.
        return CycleCheck::Malformed {
            reason: "cycle is not supported on every vertex".into(),
        };
    }
    let mut budget = opts.budget;
    let s = g.central_weight as i128;
    for y0 in 1..=z.n0 {
        let mut firsts = Vec::with_capacity(g.branches.len());
        for (seq, zc) in g.branches.iter().zip(&z.branch_coeffs) {
            let mut cs = ChainSearch {
                b: seq.entries(),
                z: zc,
                memo: HashMap::new(),
                budget: &mut budget,
            };
            let Some(f) = cs.first_values(y0) else {
                return CycleCheck::BudgetExceeded;
            };
            firsts.push(f);
        }
        if firsts.iter().any(|(a, _)| a.is_none()) {
            continue;
        }
        let min_sum: i128 = firsts.iter().map(|(a, _)| a.unwrap() as i128).sum();
        let choice: Option<Option<usize>> = if y0 < z.n0 {
            (min_sum <= s * y0 as i128).then_some(None)
        } else {
            firsts.iter().enumerate().find_map(|(i, (a, d))| {
                let d = (*d)?;
                let sum = min_sum - a.unwrap() as i128 + d as i128;
                (sum <= s * y0 as i128).then_some(Some(i))
            })
        };
        if let Some(differing) = choice {
            let mut branch_coeffs = Vec::new();
            for (i, seq) in g.branches.iter().enumerate() {
                let want = differing == Some(i);
                let first = if want { firsts[i].1 } else { firsts[i].0 }.unwrap();
                let mut scratch = u64::MAX;
                let mut cs = ChainSearch {
                    b: seq.entries(),
                    z: &z.branch_coeffs[i],
                    memo: HashMap::new(),
                    budget: &mut scratch,
                };
                cs.first_values(y0);
                branch_coeffs.push(cs.rebuild(y0, first, want));
            }
            return CycleCheck::SmallerCycle {
                cycle: FundamentalCycle {
                    n0: y0,
                    branch_coeffs,
                },
            };
        }
    }
    CycleCheck::ValidFundamental
}

pub fn verify_cycle(g: &DualGraph, z: &FundamentalCycle) -> CycleCheck {
    verify_cycle_with(g, z, VerifyOptions::default())
}

/// Computation sequence: start from `E0` and add any vertex meeting the
/// current cycle positively until none does.
pub fn laufer_cycle(g: &DualGraph, max_steps: u64) -> Result<FundamentalCycle> {
    let mut z = FundamentalCycle {
        n0: 1,
        branch_coeffs: g.branches.iter().map(|b| vec![0; b.len()]).collect(),
    };
    for _ in 0..max_steps {
        let products = intersections(g, &z)?;
        match products.iter().find(|(_, v)| *v > 0) {
            None => return Ok(z),
            Some((Vertex::Central, _)) => z.n0 += 1,
            Some((Vertex::Branch { branch, position }, _)) => {
                z.branch_coeffs[*branch][*position] += 1
            }
        }
    }
    Err(Error::Domain(format!(
        "computation sequence did not stop within {max_steps} steps"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hj::{hj_expand, hj_tails};
    use crate::number::rat;

    fn nd(s: i64, pairs: &[(i64, i64)]) -> NormalizedDivisor {
        NormalizedDivisor::from_pairs(s, pairs).unwrap()
    }

    fn cyc(n0: u64, branches: &[&[u64]]) -> FundamentalCycle {
        FundamentalCycle {
            n0,
            branch_coeffs: branches.iter().map(|b| b.to_vec()).collect(),
        }
    }

    #[test]
    fn integer_expansion_agrees_with_hj_core() {
        for den in 2..30i64 {
            for num in 1..den {
                let Ok(f) = Fraction::new(num, den) else {
                    continue;
                };
                let (entries, tails) = expand_reciprocal(&f);
                let x = rat(f.den(), f.num());
                let seq = hj_expand(&x).unwrap();
                assert_eq!(entries, seq.entries());
                let expected: Vec<_> = hj_tails(&seq).unwrap();
                let got: Vec<_> = tails.iter().map(|&(p, q)| rat(p, q)).collect();
                assert_eq!(got, expected);
            }
        }
    }

    #[test]
    fn sharp_example_graph_and_cycle() {
        let d = nd(2, &[(3, 5), (4, 5), (1, 2)]);
        let g = dual_graph(&d).unwrap();
        let b: Vec<&[i64]> = g.branches.iter().map(|b| b.entries()).collect();
        assert_eq!(b, vec![&[2, 3][..], &[2, 2, 2, 2], &[2]]);
        let z = fundamental_cycle(&d).unwrap();
        assert_eq!(z, cyc(5, &[&[3, 1], &[4, 3, 2, 1], &[3]]));
        assert_eq!(verify_cycle(&g, &z), CycleCheck::ValidFundamental);
        assert_eq!(multiplicity(&d).unwrap().value, 3);
        let ones = cyc(1, &[&[1, 1], &[1, 1, 1, 1], &[1]]);
        assert!(matches!(
            verify_cycle(&g, &ones),
            CycleCheck::Violation { .. }
        ));
    }

    #[test]
    fn graph_examples() {
        let g = dual_graph(&nd(3, &[])).unwrap();
        assert_eq!(g.central_weight, 3);
        assert!(g.branches.is_empty());
        let g = dual_graph(&nd(2, &[(7, 9), (1, 2), (2, 3)])).unwrap();
        let b: Vec<&[i64]> = g.branches.iter().map(|b| b.entries()).collect();
        assert_eq!(b, vec![&[2, 2, 2, 3][..], &[2], &[2, 2]]);
    }

    #[test]
    fn regime_errors() {
        assert!(matches!(
            dual_graph(&nd(1, &[(1, 2)])),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(
            dual_graph(&nd(0, &[])),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(
            dual_graph(&nd(2, &[(1, 2); 4])),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            fundamental_cycle(&nd(2, &[(1, 2), (1, 2), (1, 2), (1, 3)])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn single_vertex() {
        let g = DualGraph {
            central_weight: 3,
            branches: vec![],
        };
        assert_eq!(verify_cycle(&g, &cyc(1, &[])), CycleCheck::ValidFundamental);
        assert_eq!(fundamental_cycle(&nd(3, &[])).unwrap(), cyc(1, &[]));
        for s in 2..=6 {
            assert_eq!(multiplicity(&nd(s, &[])).unwrap().value, s as u64);
        }
    }

    #[test]
    fn seven_ninths() {
        let d = nd(2, &[(1, 2), (2, 3), (7, 9)]);
        let z = fundamental_cycle(&d).unwrap();
        assert_eq!(z, cyc(6, &[&[3], &[4, 2], &[5, 4, 3, 1]]));
        let g = dual_graph(&d).unwrap();
        assert_eq!(verify_cycle(&g, &z), CycleCheck::ValidFundamental);
        assert_eq!(laufer_cycle(&g, 10_000).unwrap(), z);
    }

    #[test]
    fn sharp_example_p2_uses_recursion() {
        let d = nd(2, &[(3, 4), (1, 2), (1, 2)]);
        let z = fundamental_cycle(&d).unwrap();
        assert_eq!(z, cyc(2, &[&[2, 2, 1], &[1], &[1]]));
        assert_eq!(multiplicity(&d).unwrap().value, 2);
        let g = dual_graph(&d).unwrap();
        let drawn = cyc(2, &[&[1, 1, 1], &[1], &[1]]);
        assert!(matches!(
            verify_cycle(&g, &drawn),
            CycleCheck::Violation {
                vertex: Vertex::Branch {
                    branch: 0,
                    position: 0
                },
                ..
            }
        ));
    }

    #[test]
    fn detects_larger_candidate() {
        let d = nd(2, &[(3, 5), (4, 5), (1, 2)]);
        let g = dual_graph(&d).unwrap();
        let double = cyc(10, &[&[6, 2], &[8, 6, 4, 2], &[6]]);
        match verify_cycle(&g, &double) {
            CycleCheck::SmallerCycle { cycle } => {
                assert!(intersections(&g, &cycle)
                    .unwrap()
                    .iter()
                    .all(|(_, v)| *v <= 0));
                assert_ne!(cycle, double);
            }
            other => panic!("expected a smaller cycle, got {other:?}"),
        }
    }

    #[test]
    fn budget_is_reported() {
        let d = nd(2, &[(3, 5), (4, 5), (1, 2)]);
        let g = dual_graph(&d).unwrap();
        let z = fundamental_cycle(&d).unwrap();
        assert_eq!(
            verify_cycle_with(&g, &z, VerifyOptions { budget: 1 }),
            CycleCheck::BudgetExceeded
        );
    }

    #[test]
    fn central_row_identity() {
        let d = nd(2, &[(1, 2), (2, 3), (7, 9)]);
        let g = dual_graph(&d).unwrap();
        for l in 1..=10 {
            let f = recursion_cycle(&d, l);
            let products = intersections(&g, &f).unwrap();
            assert_eq!(products[0].1 as i128, -deg_floor(&d, l));
            assert!(products[1..].iter().all(|(_, v)| *v <= 0));
        }
    }
}
