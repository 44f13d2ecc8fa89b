//! Closed forms, recursions, and the machinery that cross-checks them
//! against the enumeration oracle.
//!
//! The formula catalog covers the rectangle count, the Jacobsthal sequence,
//! the refined last-column counts and their recursions, and the strip counts
//! for the square and loop rules on Möbius strips, Klein bottles, and
//! projective planes. Two independent evaluators exist for the loop
//! Klein/projective count: the closed-form branches (`loop_klein_thm`) and
//! the structural chain Klein = Möbius minus both-ends-water Möbius
//! (`loop_klein_lemma_chain`, oracle-backed). They disagree for n >= 7; the
//! verify report prints both next to the oracle and never silently
//! reconciles them.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use thiserror::Error;

use crate::enumeration::{count_valid, Constraint, EnumerationError, EnumerationOptions};
use crate::rules::Rule;
use crate::surface::{SquareTiledSurface, SurfaceError};

/// Identifiers of the evaluable formulas and recursions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormulaId {
    /// Rectangle count `6*2^n - 3n - 5` (A101946).
    NClosed,
    /// Jacobsthal `(2^n - (-1)^n) / 3` (A001045).
    JClosed,
    /// One water square in the last column: `2^(n+1) - 2`.
    Nk1Closed,
    /// Two water squares in the last column: `2^n - 1`.
    Nk2Closed,
    /// Third-order recursion `a_n = 2a_{n-1} + a_{n-2} - 2a_{n-3}`,
    /// seeds 2, 6, 14.
    ARec3,
    /// Second-order recursion `a_n = a_{n-1} + 2a_{n-2} + 4`, seeds 2, 6.
    ARec2,
    /// Recursion `b_n = b_{n-1} + 2b_{n-2}`, seeds b_2 = b_3 = 2.
    BRec,
    /// Square-rule strip count, equal on all three non-orientable surfaces.
    SquareThm,
    /// Loop-rule Möbius strip count.
    LoopMobiusThm,
    /// Loop-rule Klein/projective closed-form branches.
    LoopKleinThm,
    /// Loop-rule Klein count via the structural identity, oracle-backed.
    LoopKleinLemmaChain,
    /// Even loop Möbius closed form `5*2^k - 3k - 4` (A213387), n = 2k.
    A213387Form,
    /// Odd loop Möbius closed form `2^(k+3) - 3(k+2)` (A123203), n = 2k+1.
    A123203Form,
}

impl FormulaId {
    pub const ALL: [FormulaId; 13] = [
        FormulaId::NClosed,
        FormulaId::JClosed,
        FormulaId::Nk1Closed,
        FormulaId::Nk2Closed,
        FormulaId::ARec3,
        FormulaId::ARec2,
        FormulaId::BRec,
        FormulaId::SquareThm,
        FormulaId::LoopMobiusThm,
        FormulaId::LoopKleinThm,
        FormulaId::LoopKleinLemmaChain,
        FormulaId::A213387Form,
        FormulaId::A123203Form,
    ];

    pub fn id(self) -> &'static str {
        match self {
            FormulaId::NClosed => "N_closed",
            FormulaId::JClosed => "J_closed",
            FormulaId::Nk1Closed => "Nk1_closed",
            FormulaId::Nk2Closed => "Nk2_closed",
            FormulaId::ARec3 => "a_rec3",
            FormulaId::ARec2 => "a_rec2",
            FormulaId::BRec => "b_rec",
            FormulaId::SquareThm => "square_thm",
            FormulaId::LoopMobiusThm => "loop_mobius_thm",
            FormulaId::LoopKleinThm => "loop_klein_thm",
            FormulaId::LoopKleinLemmaChain => "loop_klein_lemma_chain",
            FormulaId::A213387Form => "A213387_form",
            FormulaId::A123203Form => "A123203_form",
        }
    }
}

impl fmt::Display for FormulaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id())
    }
}

impl FromStr for FormulaId {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FormulaId::ALL.into_iter().find(|f| f.id() == s).ok_or(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SequencesError {
    #[error("{formula} is not defined for n = {n} (needs n >= {min})")]
    BelowRange {
        formula: FormulaId,
        n: usize,
        min: usize,
    },
    #[error("{formula} applies only to {parity} n, got {n}")]
    WrongParity {
        formula: FormulaId,
        parity: &'static str,
        n: usize,
    },
    #[error("integer overflow evaluating {formula} at n = {n}")]
    Overflow { formula: FormulaId, n: usize },
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

fn pow2(formula: FormulaId, n: usize, exp: usize) -> Result<i128, SequencesError> {
    if exp >= 126 {
        return Err(SequencesError::Overflow { formula, n });
    }
    Ok(1i128 << exp)
}

fn sign(n: usize) -> i128 {
    if n.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Rectangle count `6*2^n - 3n - 5`.
fn n_closed(n: usize) -> Result<i128, SequencesError> {
    Ok(6 * pow2(FormulaId::NClosed, n, n)? - 3 * n as i128 - 5)
}

/// Jacobsthal number with `J_0 = 0`.
fn jacobsthal(n: usize) -> Result<i128, SequencesError> {
    Ok((pow2(FormulaId::JClosed, n, n)? - sign(n)) / 3)
}

fn linear_recursion(
    formula: FormulaId,
    n: usize,
    first_index: usize,
    seeds: &[i128],
    step: impl Fn(&[i128]) -> i128,
) -> Result<i128, SequencesError> {
    if n < first_index {
        return Err(SequencesError::BelowRange {
            formula,
            n,
            min: first_index,
        });
    }
    let mut values: Vec<i128> = seeds.to_vec();
    while values.len() <= n - first_index {
        let next = step(&values);
        values.push(next);
    }
    Ok(values[n - first_index])
}

/// Evaluate a formula at `n`. Closed forms and recursions are exact integer
/// computations; `loop_klein_lemma_chain` runs the enumeration oracle with
/// the supplied options.
pub fn eval(
    formula: FormulaId,
    n: usize,
    opts: &EnumerationOptions,
) -> Result<i128, SequencesError> {
    match formula {
        FormulaId::NClosed => n_closed(n),
        FormulaId::JClosed => jacobsthal(n),
        FormulaId::Nk1Closed => Ok(2 * pow2(formula, n, n)? - 2),
        FormulaId::Nk2Closed => Ok(pow2(formula, n, n)? - 1),
        FormulaId::ARec3 => linear_recursion(formula, n, 1, &[2, 6, 14], |v| {
            let m = v.len();
            2 * v[m - 1] + v[m - 2] - 2 * v[m - 3]
        }),
        FormulaId::ARec2 => linear_recursion(formula, n, 1, &[2, 6], |v| {
            let m = v.len();
            v[m - 1] + 2 * v[m - 2] + 4
        }),
        FormulaId::BRec => linear_recursion(formula, n, 2, &[2, 2], |v| {
            let m = v.len();
            v[m - 1] + 2 * v[m - 2]
        }),
        FormulaId::SquareThm => {
            if n == 0 {
                return Err(SequencesError::BelowRange { formula, n, min: 1 });
            }
            let k = n / 2;
            if n.is_multiple_of(2) {
                n_closed(k)
            } else {
                Ok(n_closed(k)? + 3 * pow2(formula, n, k)? - 2)
            }
        }
        FormulaId::LoopMobiusThm => {
            if n == 0 {
                return Err(SequencesError::BelowRange { formula, n, min: 1 });
            }
            let k = n / 2;
            if n.is_multiple_of(2) {
                Ok(n_closed(k)? - pow2(formula, n, k)? + 1)
            } else {
                Ok(n_closed(k)? + 2 * pow2(formula, n, k)? - 1)
            }
        }
        FormulaId::LoopKleinThm => match n {
            0 => Err(SequencesError::BelowRange { formula, n, min: 1 }),
            1 => Ok(1),
            2 => Ok(3),
            3 => Ok(6),
            4 => Ok(7),
            n if n % 2 == 0 => {
                let k = n / 2;
                Ok(n_closed(k)? + 2 * jacobsthal(k - 1)? - 2 * pow2(formula, n, k)? + 2)
            }
            n => {
                let k = n / 2;
                Ok(n_closed(k)? - 2 * jacobsthal(k)? + pow2(formula, n, k)?)
            }
        },
        FormulaId::LoopKleinLemmaChain => Ok(loop_klein_lemma_chain(n, opts)? as i128),
        FormulaId::A213387Form => {
            if n == 0 || !n.is_multiple_of(2) {
                return Err(SequencesError::WrongParity {
                    formula,
                    parity: "even",
                    n,
                });
            }
            let k = n / 2;
            Ok(5 * pow2(formula, n, k)? - 3 * k as i128 - 4)
        }
        FormulaId::A123203Form => {
            if n % 2 != 1 {
                return Err(SequencesError::WrongParity {
                    formula,
                    parity: "odd",
                    n,
                });
            }
            let k = n / 2;
            Ok(pow2(formula, n, k + 3)? - 3 * (k as i128 + 2))
        }
    }
}

/// The structural route to the loop Klein/projective count: valid loop
/// Möbius strips minus those whose end squares 1 and n are both water. Both
/// components come from the enumeration oracle, so this equals the Klein
/// oracle by construction of the gluings.
pub fn loop_klein_lemma_chain(n: usize, opts: &EnumerationOptions) -> Result<u64, SequencesError> {
    if n < 2 {
        return Err(SequencesError::BelowRange {
            formula: FormulaId::LoopKleinLemmaChain,
            n,
            min: 2,
        });
    }
    let mobius = SquareTiledSurface::mobius(n)?;
    let all = count_valid(&mobius, Rule::Loop, &Constraint::none(), opts)?.count;
    let ends = Constraint::water(&[1, n])?;
    let both_ends = count_valid(&mobius, Rule::Loop, &ends, opts)?.count;
    Ok(all - both_ends)
}

/// Surface family selector for oracle-backed verification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VerifyFamily {
    /// `2 x n` rectangle.
    Rectangle,
    /// `2 x n` annulus.
    Annulus,
    /// `2 x n` torus.
    Torus,
    Mobius,
    Klein,
    Projective,
}

impl VerifyFamily {
    pub const ALL: [VerifyFamily; 6] = [
        VerifyFamily::Rectangle,
        VerifyFamily::Annulus,
        VerifyFamily::Torus,
        VerifyFamily::Mobius,
        VerifyFamily::Klein,
        VerifyFamily::Projective,
    ];

    pub fn id(self) -> &'static str {
        match self {
            VerifyFamily::Rectangle => "rectangle",
            VerifyFamily::Annulus => "annulus",
            VerifyFamily::Torus => "torus",
            VerifyFamily::Mobius => "mobius",
            VerifyFamily::Klein => "klein",
            VerifyFamily::Projective => "projective",
        }
    }

    pub fn build(self, n: usize) -> Result<SquareTiledSurface, SurfaceError> {
        match self {
            VerifyFamily::Rectangle => SquareTiledSurface::rectangle(2, n),
            VerifyFamily::Annulus => SquareTiledSurface::annulus(n),
            VerifyFamily::Torus => SquareTiledSurface::torus(2, n),
            VerifyFamily::Mobius => SquareTiledSurface::mobius(n),
            VerifyFamily::Klein => SquareTiledSurface::klein(n),
            VerifyFamily::Projective => SquareTiledSurface::projective(n),
        }
    }

    /// Formulas whose value should equal the oracle count for this family,
    /// rule, and size. The torus has no catalog formula.
    pub fn applicable_formulas(self, rule: Rule, n: usize) -> Vec<FormulaId> {
        match (self, rule) {
            (VerifyFamily::Rectangle | VerifyFamily::Annulus, _) => vec![FormulaId::NClosed],
            (VerifyFamily::Torus, _) => vec![],
            (VerifyFamily::Mobius, Rule::Square) => vec![FormulaId::SquareThm],
            (VerifyFamily::Mobius, Rule::Loop) => {
                let parity_form = if n.is_multiple_of(2) {
                    FormulaId::A213387Form
                } else {
                    FormulaId::A123203Form
                };
                vec![FormulaId::LoopMobiusThm, parity_form]
            }
            (VerifyFamily::Klein | VerifyFamily::Projective, Rule::Square) => {
                vec![FormulaId::SquareThm]
            }
            (VerifyFamily::Klein | VerifyFamily::Projective, Rule::Loop) => {
                let mut v = vec![FormulaId::LoopKleinThm];
                if n >= 2 {
                    v.push(FormulaId::LoopKleinLemmaChain);
                }
                v
            }
        }
    }
}

impl fmt::Display for VerifyFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id())
    }
}

impl FromStr for VerifyFamily {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        VerifyFamily::ALL
            .into_iter()
            .find(|f| f.id() == s)
            .ok_or(())
    }
}

/// One formula evaluated against the oracle at a single size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaComparison {
    pub formula: FormulaId,
    pub value: i128,
    /// Exact equality with the oracle count.
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyRow {
    pub n: usize,
    pub oracle: u64,
    pub comparisons: Vec<FormulaComparison>,
}

/// Oracle counts and per-formula agreement flags over a range of sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountReport {
    pub family: VerifyFamily,
    pub rule: Rule,
    pub rows: Vec<VerifyRow>,
}

impl CountReport {
    pub fn all_agree(&self) -> bool {
        self.rows
            .iter()
            .all(|row| row.comparisons.iter().all(|c| c.agrees))
    }

    pub fn disagreements(&self) -> Vec<(usize, FormulaId, i128, u64)> {
        let mut out = Vec::new();
        for row in &self.rows {
            for c in &row.comparisons {
                if !c.agrees {
                    out.push((row.n, c.formula, c.value, row.oracle));
                }
            }
        }
        out
    }
}

/// Run the oracle over `range` and compare every applicable formula against
/// it. Disagreements are flagged, never reconciled.
pub fn verify(
    family: VerifyFamily,
    rule: Rule,
    range: RangeInclusive<usize>,
    opts: &EnumerationOptions,
) -> Result<CountReport, SequencesError> {
    let mut rows = Vec::new();
    for n in range {
        let surface = family.build(n)?;
        let oracle = count_valid(&surface, rule, &Constraint::none(), opts)?.count;
        let mut comparisons = Vec::new();
        for formula in family.applicable_formulas(rule, n) {
            let value = eval(formula, n, opts)?;
            comparisons.push(FormulaComparison {
                formula,
                value,
                agrees: value == oracle as i128,
            });
        }
        rows.push(VerifyRow {
            n,
            oracle,
            comparisons,
        });
    }
    Ok(CountReport { family, rule, rows })
}

/// What a b-file run evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BfileSource {
    Formula(FormulaId),
    Oracle { family: VerifyFamily, rule: Rule },
}

/// OEIS b-file text: one `n a(n)` line per size, ascending, newline
/// terminated.
pub fn bfile(
    source: BfileSource,
    range: RangeInclusive<usize>,
    opts: &EnumerationOptions,
) -> Result<String, SequencesError> {
    let mut out = String::new();
    for n in range {
        let value: i128 = match source {
            BfileSource::Formula(f) => eval(f, n, opts)?,
            BfileSource::Oracle { family, rule } => {
                let surface = family.build(n)?;
                count_valid(&surface, rule, &Constraint::none(), opts)?.count as i128
            }
        };
        out.push_str(&format!("{n} {value}\n"));
    }
    Ok(out)
}
