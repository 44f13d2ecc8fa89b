//! Cutting operations between strip and rectangle colorings and the
//! machine-checked bijection suites built on them.
//!
//! Rectangular reduction cuts an even `1 x 2k` strip along the central
//! vertical edge and restacks it as a `2 x k` rectangle: rectangle cell
//! `(1, j)` holds strip square `j` and cell `(2, j)` holds strip square
//! `2k + 1 - j`, so the pair `{k, k+1}` forms the last column and `{1, 2k}`
//! the first. Contraction excises the central square of an odd strip. The
//! maps act on raw colorings; validity claims are checked only where the
//! bijection suites assert them, so a failing suite exhibits concrete
//! counterexamples.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::enumeration::{enumerate_valid, Constraint, EnumerationError, EnumerationOptions};
use crate::rules::{Cell, Coloring, Rule, RulesError};
use crate::surface::SquareTiledSurface;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BijectionError {
    #[error("strip length {0} is odd; rectangular reduction needs an even strip")]
    OddStrip(usize),
    #[error("strip length {0} is even; contraction needs an odd strip")]
    EvenStrip(usize),
    #[error("rectangle coloring has {0} squares, which is not of the form 2k")]
    NotARectangle(usize),
    #[error("check needs k >= 1")]
    KZero,
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
    #[error(transparent)]
    Rules(#[from] RulesError),
}

/// Cut an even strip coloring into its `2 x k` rectangle coloring.
pub fn rectangular_reduction(strip: &Coloring) -> Result<Coloring, BijectionError> {
    let n = strip.n_squares();
    if n == 0 || !n.is_multiple_of(2) {
        return Err(BijectionError::OddStrip(n));
    }
    let k = n / 2;
    let mut mask = 0u64;
    for j in 1..=k {
        if strip.is_water(j) {
            mask |= 1 << (j - 1);
        }
        if strip.is_water(2 * k + 1 - j) {
            mask |= 1 << (k + j - 1);
        }
    }
    Ok(Coloring::from_mask(n, mask)?)
}

/// Inverse of [`rectangular_reduction`]: reglue a `2 x k` rectangle coloring
/// into the even strip it came from.
pub fn rectangular_reduction_inverse(rect: &Coloring) -> Result<Coloring, BijectionError> {
    let n = rect.n_squares();
    if n == 0 || !n.is_multiple_of(2) {
        return Err(BijectionError::NotARectangle(n));
    }
    let k = n / 2;
    let mut mask = 0u64;
    for j in 1..=k {
        if rect.is_water(j) {
            mask |= 1 << (j - 1);
        }
        if rect.is_water(k + j) {
            mask |= 1 << (2 * k - j);
        }
    }
    Ok(Coloring::from_mask(n, mask)?)
}

/// Excise the central square of an odd strip coloring, returning the even
/// strip coloring and the excised cell.
pub fn contraction(strip: &Coloring) -> Result<(Coloring, Cell), BijectionError> {
    let n = strip.n_squares();
    if n % 2 != 1 {
        return Err(BijectionError::EvenStrip(n));
    }
    let k = n / 2;
    let central = strip.cell(k + 1);
    let mut mask = 0u64;
    for j in 1..=n {
        if j == k + 1 || !strip.is_water(j) {
            continue;
        }
        let target = if j < k + 1 { j } else { j - 1 };
        mask |= 1 << (target - 1);
    }
    Ok((Coloring::from_mask(n - 1, mask)?, central))
}

/// Inverse of [`contraction`]: insert a central square with the given cell
/// into an even strip coloring.
pub fn contraction_inverse(strip: &Coloring, central: Cell) -> Result<Coloring, BijectionError> {
    let n = strip.n_squares();
    if !n.is_multiple_of(2) {
        return Err(BijectionError::OddStrip(n));
    }
    let k = n / 2;
    let mut mask = 0u64;
    for j in 1..=n {
        if strip.is_water(j) {
            let target = if j <= k { j } else { j + 1 };
            mask |= 1 << (target - 1);
        }
    }
    if central == Cell::Water {
        mask |= 1 << k;
    }
    Ok(Coloring::from_mask(n + 1, mask)?)
}

/// The four bijection suites: each enumerates its domain of valid strips by
/// oracle, applies the cutting map, and confirms the image equals the stated
/// rectangle-side target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BijectionCheck {
    /// Even strips under the square rule map onto all valid rectangles.
    SquareEven,
    /// Odd strips under the square rule map onto all valid rectangles
    /// (central land) together with those whose last column holds one or two
    /// water squares, plus the all-land rectangle (central water).
    SquareOdd,
    /// Even strips under the loop rule map onto valid rectangles whose last
    /// column is not fully water.
    LoopEven,
    /// Odd strips under the loop rule map onto all valid rectangles (central
    /// land) together with those whose last column holds exactly one water
    /// square, plus the all-land rectangle (central water).
    LoopOdd,
}

impl BijectionCheck {
    pub const ALL: [BijectionCheck; 4] = [
        BijectionCheck::SquareEven,
        BijectionCheck::SquareOdd,
        BijectionCheck::LoopEven,
        BijectionCheck::LoopOdd,
    ];

    pub fn id(self) -> &'static str {
        match self {
            BijectionCheck::SquareEven => "square-even",
            BijectionCheck::SquareOdd => "square-odd",
            BijectionCheck::LoopEven => "loop-even",
            BijectionCheck::LoopOdd => "loop-odd",
        }
    }

    pub fn rule(self) -> Rule {
        match self {
            BijectionCheck::SquareEven | BijectionCheck::SquareOdd => Rule::Square,
            BijectionCheck::LoopEven | BijectionCheck::LoopOdd => Rule::Loop,
        }
    }

    fn odd(self) -> bool {
        matches!(self, BijectionCheck::SquareOdd | BijectionCheck::LoopOdd)
    }
}

impl fmt::Display for BijectionCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id())
    }
}

impl FromStr for BijectionCheck {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BijectionCheck::ALL
            .into_iter()
            .find(|c| c.id() == s)
            .ok_or(())
    }
}

/// Outcome of one bijection suite at one size.
#[derive(Debug, Clone)]
pub struct BijectionReport {
    pub check: BijectionCheck,
    pub k: usize,
    pub domain_size: u64,
    pub target_size: u64,
    pub image_in_target: bool,
    pub injective: bool,
    pub surjective: bool,
    /// Labeled cardinalities of the domain/target decomposition.
    pub components: Vec<(String, u64)>,
    /// Up to a handful of offending colorings, for diagnosis; empty on pass.
    pub counterexamples: Vec<String>,
}

impl BijectionReport {
    pub fn passed(&self) -> bool {
        self.image_in_target && self.injective && self.surjective
    }
}

/// Number of water squares in the last column of a `2 x k` rectangle mask.
fn last_column_water(mask: u64, k: usize) -> u32 {
    (mask >> (k - 1) & 1) as u32 + (mask >> (2 * k - 1) & 1) as u32
}

/// Run one bijection suite at size `k`.
pub fn check_bijection(
    check: BijectionCheck,
    k: usize,
    opts: &EnumerationOptions,
) -> Result<BijectionReport, BijectionError> {
    if k == 0 {
        return Err(BijectionError::KZero);
    }
    let rule = check.rule();
    let strip_len = if check.odd() { 2 * k + 1 } else { 2 * k };
    let strip_surface = SquareTiledSurface::mobius(strip_len).expect("strip length within bounds");
    let rect_surface = SquareTiledSurface::rectangle(2, k).expect("rectangle within bounds");

    let domain = enumerate_valid(&strip_surface, rule, &Constraint::none(), opts)?
        .colorings
        .expect("listing requested");
    let rectangles = enumerate_valid(&rect_surface, rule, &Constraint::none(), opts)?
        .colorings
        .expect("listing requested");

    // Target keys: rectangle mask, tagged with the central cell for the odd
    // composites (false = land, true = water).
    let rect_in_target = |mask: u64, central_water: bool| -> bool {
        match check {
            BijectionCheck::SquareEven => true,
            BijectionCheck::LoopEven => last_column_water(mask, k) <= 1,
            BijectionCheck::SquareOdd => {
                if central_water {
                    mask == 0 || matches!(last_column_water(mask, k), 1 | 2)
                } else {
                    true
                }
            }
            BijectionCheck::LoopOdd => {
                if central_water {
                    mask == 0 || last_column_water(mask, k) == 1
                } else {
                    true
                }
            }
        }
    };

    let mut target: BTreeMap<(bool, u64), u64> = BTreeMap::new();
    let centrals: &[bool] = if check.odd() {
        &[false, true]
    } else {
        &[false]
    };
    for rect in &rectangles {
        for &central_water in centrals {
            if rect_in_target(rect.mask(), central_water) {
                *target.entry((central_water, rect.mask())).or_insert(0) += 1;
            }
        }
    }
    let target_size = target.len() as u64;

    let mut image: BTreeMap<(bool, u64), u64> = BTreeMap::new();
    let mut counterexamples = Vec::new();
    let mut image_in_target = true;
    for strip in &domain {
        let (even, central) = if check.odd() {
            let (even, central) = contraction(strip)?;
            (even, central == Cell::Water)
        } else {
            (*strip, false)
        };
        let rect = rectangular_reduction(&even)?;
        let key = (central, rect.mask());
        if !target.contains_key(&key) {
            image_in_target = false;
            if counterexamples.len() < 5 {
                counterexamples.push(format!(
                    "strip {} maps to rectangle {} (central water: {central}) outside the target",
                    strip, rect
                ));
            }
        }
        *image.entry(key).or_insert(0) += 1;
    }

    let mut injective = true;
    for (key, &mult) in &image {
        if mult > 1 {
            injective = false;
            if counterexamples.len() < 5 {
                counterexamples.push(format!(
                    "rectangle mask {:#x} (central water: {}) hit {mult} times",
                    key.1, key.0
                ));
            }
        }
    }

    let mut surjective = true;
    for key in target.keys() {
        if !image.contains_key(key) {
            surjective = false;
            if counterexamples.len() < 5 {
                counterexamples.push(format!(
                    "target rectangle mask {:#x} (central water: {}) not hit",
                    key.1, key.0
                ));
            }
        }
    }

    let components = component_breakdown(check, k, &domain, &rectangles);

    Ok(BijectionReport {
        check,
        k,
        domain_size: domain.len() as u64,
        target_size,
        image_in_target,
        injective,
        surjective,
        components,
        counterexamples,
    })
}

fn component_breakdown(
    check: BijectionCheck,
    k: usize,
    domain: &[Coloring],
    rectangles: &[Coloring],
) -> Vec<(String, u64)> {
    let by_last_col = |i: u32| -> u64 {
        rectangles
            .iter()
            .filter(|r| last_column_water(r.mask(), k) == i)
            .count() as u64
    };
    let mut components = vec![(
        format!("valid strips of length {}", domain.len()),
        domain.len() as u64,
    )];
    components[0].0 = "valid strips".to_string();
    if check.odd() {
        let central = k + 1;
        let central_land = domain.iter().filter(|s| !s.is_water(central)).count() as u64;
        components.push(("strips with central square land".into(), central_land));
        components.push((
            "strips with central square water".into(),
            domain.len() as u64 - central_land,
        ));
    }
    components.push(("valid rectangles".into(), rectangles.len() as u64));
    components.push(("rectangles, last column empty".into(), by_last_col(0)));
    components.push(("rectangles, last column one water".into(), by_last_col(1)));
    components.push(("rectangles, last column full".into(), by_last_col(2)));
    if check.odd() {
        components.push(("all-land rectangle".into(), 1));
    }
    components
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::water_connected;

    fn strip(n: usize, water: &[usize]) -> Coloring {
        Coloring::from_water_squares(n, water).unwrap()
    }

    fn opts() -> EnumerationOptions {
        EnumerationOptions::default()
    }

    #[test]
    fn reduction_all_land() {
        let c = Coloring::all_land(6);
        assert_eq!(rectangular_reduction(&c).unwrap().mask(), 0);
    }

    #[test]
    fn reduction_central_pair_fills_last_column() {
        // strip squares {3,4} land in the last rectangle column {3, 6}
        let c = strip(6, &[3, 4]);
        let rect = rectangular_reduction(&c).unwrap();
        assert_eq!(rect.water_squares(), vec![3, 6]);
    }

    #[test]
    fn reduction_ends_fill_first_column() {
        let c = strip(6, &[1, 6]);
        let rect = rectangular_reduction(&c).unwrap();
        assert_eq!(rect.water_squares(), vec![1, 4]);
    }

    #[test]
    fn reduction_rejects_odd() {
        assert_eq!(
            rectangular_reduction(&strip(5, &[])).unwrap_err(),
            BijectionError::OddStrip(5)
        );
    }

    #[test]
    fn contraction_examples() {
        let (even, central) = contraction(&strip(7, &[1, 7])).unwrap();
        assert_eq!(central, Cell::Land);
        assert_eq!(even.water_squares(), vec![1, 6]);

        let (even, central) = contraction(&strip(7, &[4])).unwrap();
        assert_eq!(central, Cell::Water);
        assert_eq!(even.mask(), 0);

        let back = contraction_inverse(&strip(6, &[3, 4]), Cell::Water).unwrap();
        assert_eq!(back.water_squares(), vec![3, 4, 5]);
    }

    #[test]
    fn contraction_rejects_even() {
        assert_eq!(
            contraction(&strip(6, &[])).unwrap_err(),
            BijectionError::EvenStrip(6)
        );
    }

    #[test]
    fn round_trips_are_identities() {
        for n in [2usize, 4, 6, 8, 10, 12, 14] {
            for mask in 0..1u64 << n {
                let c = Coloring::from_mask(n, mask).unwrap();
                let rect = rectangular_reduction(&c).unwrap();
                assert_eq!(rectangular_reduction_inverse(&rect).unwrap(), c);
            }
        }
        for n in [3usize, 5, 7, 9, 11, 13] {
            for mask in 0..1u64 << n {
                let c = Coloring::from_mask(n, mask).unwrap();
                let (even, central) = contraction(&c).unwrap();
                assert_eq!(contraction_inverse(&even, central).unwrap(), c);
            }
        }
    }

    #[test]
    fn reduction_preserves_connectivity() {
        for k in 1..=7 {
            let strip_surface = SquareTiledSurface::mobius(2 * k).unwrap();
            let rect_surface = SquareTiledSurface::rectangle(2, k).unwrap();
            for mask in 0..1u64 << (2 * k) {
                let c = Coloring::from_mask(2 * k, mask).unwrap();
                let rect = rectangular_reduction(&c).unwrap();
                assert_eq!(
                    water_connected(&strip_surface, &c).unwrap(),
                    water_connected(&rect_surface, &rect).unwrap(),
                    "k={k} mask={mask:#b}"
                );
            }
        }
    }

    #[test]
    fn contraction_preserves_connectivity_of_central_land() {
        for k in 1..=6 {
            let n = 2 * k + 1;
            let odd_surface = SquareTiledSurface::mobius(n).unwrap();
            let even_surface = SquareTiledSurface::mobius(n - 1).unwrap();
            for mask in 0..1u64 << n {
                let c = Coloring::from_mask(n, mask).unwrap();
                if c.is_water(k + 1) {
                    continue;
                }
                let (even, _) = contraction(&c).unwrap();
                assert_eq!(
                    water_connected(&odd_surface, &c).unwrap(),
                    water_connected(&even_surface, &even).unwrap(),
                    "n={n} mask={mask:#b}"
                );
            }
        }
    }

    #[test]
    fn bijection_suites_pass() {
        for check in BijectionCheck::ALL {
            for k in 1..=6 {
                let report = check_bijection(check, k, &opts()).unwrap();
                assert!(
                    report.passed(),
                    "{check} k={k}: {:?}",
                    report.counterexamples
                );
                assert_eq!(report.domain_size, report.target_size, "{check} k={k}");
            }
        }
    }

    #[test]
    fn square_even_cardinalities() {
        let report = check_bijection(BijectionCheck::SquareEven, 2, &opts()).unwrap();
        assert_eq!(report.domain_size, 13);
        assert_eq!(report.target_size, 13);
    }

    #[test]
    fn loop_even_cardinalities() {
        // 10 valid strips of length 4 map onto the 4 + 6 rectangles whose
        // last column is not fully water
        let report = check_bijection(BijectionCheck::LoopEven, 2, &opts()).unwrap();
        assert_eq!(report.domain_size, 10);
        let empty = report
            .components
            .iter()
            .find(|(label, _)| label == "rectangles, last column empty")
            .unwrap()
            .1;
        let one = report
            .components
            .iter()
            .find(|(label, _)| label == "rectangles, last column one water")
            .unwrap()
            .1;
        assert_eq!((empty, one), (4, 6));
        assert_eq!(report.target_size, 10);
    }

    #[test]
    fn loop_odd_cardinalities() {
        // 7 strips of length 3 split as 4 (central land) plus 2 + 1
        let report = check_bijection(BijectionCheck::LoopOdd, 1, &opts()).unwrap();
        assert_eq!(report.domain_size, 7);
        assert_eq!(report.target_size, 7);
        let get = |label: &str| {
            report
                .components
                .iter()
                .find(|(l, _)| l == label)
                .unwrap()
                .1
        };
        assert_eq!(get("strips with central square land"), 4);
        assert_eq!(get("strips with central square water"), 3);
        assert_eq!(get("rectangles, last column one water"), 2);
        assert_eq!(get("all-land rectangle"), 1);
    }

    #[test]
    fn central_square_decomposition() {
        // the two central-cell halves of the odd strip domain always sum to
        // the whole domain
        for rule in Rule::BOTH {
            for k in 1..=5 {
                let n = 2 * k + 1;
                let surface = SquareTiledSurface::mobius(n).unwrap();
                let all = enumerate_valid(&surface, rule, &Constraint::none(), &opts())
                    .unwrap()
                    .count;
                let land = count_with(&surface, rule, &Constraint::land(&[k + 1]).unwrap());
                let water = count_with(&surface, rule, &Constraint::water(&[k + 1]).unwrap());
                assert_eq!(land + water, all);
            }
        }
    }

    fn count_with(surface: &SquareTiledSurface, rule: Rule, constraint: &Constraint) -> u64 {
        crate::enumeration::count_valid(surface, rule, constraint, &opts())
            .unwrap()
            .count
    }
}
