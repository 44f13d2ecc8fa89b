use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use nurikabe_cli::{render_svg, render_text, solve, PuzzleSpec};
use nurikabe_core::{
    bfile, check_bijection, count_valid, enumerate_valid, verify, BfileSource, BijectionCheck,
    Clue, Coloring, Constraint, CountReport, EnumerationOptions, FormulaId, Rule,
    SquareTiledSurface, VerifyFamily,
};

#[derive(Parser)]
#[command(
    name = "nurikabe",
    version,
    about = "Exact Nurikabe enumeration on square-tiled surfaces",
    long_about = "Build square-tiled surfaces (rectangles, annuli, tori, Möbius strips, Klein \
                  bottles, projective planes, staircases, custom gluings), count and list valid \
                  colorings, cross-check closed forms against exhaustive enumeration, check the \
                  strip/rectangle bijections, solve clue puzzles, and render fundamental domains."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count valid colorings on a surface
    Count {
        #[command(flatten)]
        surface: SurfaceSel,
        #[arg(long, value_parser = parse_rule)]
        rule: Rule,
        /// Square constraints, e.g. --constraint water=1,7 land=4
        #[arg(long, value_name = "KEY=SQUARES", num_args = 1..)]
        constraint: Vec<String>,
        #[command(flatten)]
        run: RunOpts,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// List valid colorings in ascending bitmask order
    Enumerate {
        #[command(flatten)]
        surface: SurfaceSel,
        #[arg(long, value_parser = parse_rule)]
        rule: Rule,
        #[arg(long, value_name = "KEY=SQUARES", num_args = 1..)]
        constraint: Vec<String>,
        #[command(flatten)]
        run: RunOpts,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Compare oracle counts against the formula catalog (exit 2 on mismatch)
    Verify {
        /// rectangle | annulus | torus | mobius | klein | projective
        #[arg(long, value_parser = parse_family)]
        family: VerifyFamily,
        #[arg(long, value_parser = parse_rule)]
        rule: Rule,
        #[arg(long, default_value_t = 1)]
        min_n: usize,
        #[arg(long)]
        max_n: usize,
        #[command(flatten)]
        run: RunOpts,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Machine-check a strip/rectangle bijection suite (exit 2 on failure)
    Bijection {
        /// square-even | square-odd | loop-even | loop-odd
        #[arg(long, value_parser = parse_check)]
        check: BijectionCheck,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        run: RunOpts,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Emit an OEIS-style b-file ("n a(n)" per line)
    Bfile {
        /// Formula id, e.g. N_closed, J_closed, loop_klein_thm
        #[arg(long, value_parser = parse_formula, conflicts_with_all = ["family", "rule"])]
        formula: Option<FormulaId>,
        /// Oracle family (needs --rule)
        #[arg(long, value_parser = parse_family, requires = "rule")]
        family: Option<VerifyFamily>,
        #[arg(long, value_parser = parse_rule)]
        rule: Option<Rule>,
        #[arg(long, default_value_t = 1)]
        min_n: usize,
        #[arg(long)]
        max_n: usize,
        #[command(flatten)]
        run: RunOpts,
        #[arg(long, value_enum, default_value_t = Format::Bfile)]
        format: Format,
    },
    /// Describe a surface: gluings, vertex orbits, adjacency, Euler characteristic
    Describe {
        #[command(flatten)]
        surface: SurfaceSel,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Solve a clue puzzle by pruned exhaustive search
    Solve {
        #[command(flatten)]
        surface: SurfaceSel,
        #[arg(long, value_parser = parse_rule)]
        rule: Rule,
        /// Clues, e.g. --clue 1=6 --clue 4=2
        #[arg(long, value_name = "SQUARE=SIZE", num_args = 1..)]
        clue: Vec<String>,
        #[command(flatten)]
        run: RunOpts,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Render a fundamental domain as text or SVG
    Render {
        #[command(flatten)]
        surface: SurfaceSel,
        /// Water squares, e.g. --water 2,3
        #[arg(long, value_name = "SQUARES")]
        water: Option<String>,
        #[arg(long, value_name = "SQUARE=SIZE", num_args = 1..)]
        clue: Vec<String>,
        /// Mark vertex orbits
        #[arg(long)]
        orbits: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Args)]
struct SurfaceSel {
    /// Named surface: rectangle:RxC, torus:RxC, annulus:N, mobius:N,
    /// klein:N, projective:N, staircase:N
    #[arg(long, value_name = "NAME:SIZE")]
    surface: Option<String>,
    /// Surface-spec file (squares/glue directives)
    #[arg(long, value_name = "FILE", conflicts_with = "surface")]
    spec: Option<PathBuf>,
}

impl SurfaceSel {
    fn build(&self) -> Result<SquareTiledSurface> {
        match (&self.surface, &self.spec) {
            (Some(name), None) => parse_surface_name(name),
            (None, Some(path)) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                let name = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| "custom".to_string());
                SquareTiledSurface::parse(name, &text)
                    .map_err(|e| anyhow!("{}: {e}", path.display()))
            }
            _ => bail!("exactly one of --surface or --spec is required"),
        }
    }
}

#[derive(Args)]
struct RunOpts {
    /// Worker threads for enumeration (0 = available parallelism)
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Lift the default enumeration size and listing caps
    #[arg(long)]
    cap_override: bool,
}

impl RunOpts {
    fn options(&self) -> EnumerationOptions {
        EnumerationOptions {
            workers: self.workers,
            allow_over_cap: self.cap_override,
            ..EnumerationOptions::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    JsonLines,
    Svg,
    Bfile,
}

fn parse_rule(s: &str) -> Result<Rule, String> {
    s.parse()
        .map_err(|_| format!("expected square|loop, got `{s}`"))
}

fn parse_family(s: &str) -> Result<VerifyFamily, String> {
    s.parse()
        .map_err(|_| format!("expected rectangle|annulus|torus|mobius|klein|projective, got `{s}`"))
}

fn parse_check(s: &str) -> Result<BijectionCheck, String> {
    s.parse()
        .map_err(|_| format!("expected square-even|square-odd|loop-even|loop-odd, got `{s}`"))
}

fn parse_formula(s: &str) -> Result<FormulaId, String> {
    s.parse().map_err(|_| {
        let known: Vec<&str> = FormulaId::ALL.iter().map(|f| f.id()).collect();
        format!("unknown formula `{s}`; known: {}", known.join(", "))
    })
}

fn parse_surface_name(spec: &str) -> Result<SquareTiledSurface> {
    let (family, size) = spec
        .split_once(':')
        .ok_or_else(|| anyhow!("expected <family>:<size>, got `{spec}`"))?;
    let single = || -> Result<usize> {
        size.parse()
            .with_context(|| format!("invalid size `{size}` for {family}"))
    };
    let pair = || -> Result<(usize, usize)> {
        let (r, c) = size
            .split_once('x')
            .ok_or_else(|| anyhow!("{family} needs <rows>x<cols>, got `{size}`"))?;
        Ok((r.parse()?, c.parse()?))
    };
    let surface = match family {
        "rectangle" => {
            let (r, c) = pair()?;
            SquareTiledSurface::rectangle(r, c)
        }
        "torus" => {
            let (r, c) = pair()?;
            SquareTiledSurface::torus(r, c)
        }
        "annulus" => SquareTiledSurface::annulus(single()?),
        "mobius" => SquareTiledSurface::mobius(single()?),
        "klein" => SquareTiledSurface::klein(single()?),
        "projective" => SquareTiledSurface::projective(single()?),
        "staircase" => SquareTiledSurface::staircase(single()?),
        other => bail!("unknown surface family `{other}`"),
    };
    surface.map_err(Into::into)
}

fn parse_constraint(tokens: &[String]) -> Result<Constraint> {
    let mut water = Vec::new();
    let mut land = Vec::new();
    for token in tokens {
        let (key, squares) = token
            .split_once('=')
            .ok_or_else(|| anyhow!("constraint `{token}` is not of the form key=squares"))?;
        let parsed = parse_square_list(squares)?;
        match key {
            "water" => water.extend(parsed),
            "land" => land.extend(parsed),
            other => bail!("constraint key must be water or land, got `{other}`"),
        }
    }
    Constraint::new(&water, &land).map_err(Into::into)
}

fn parse_square_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .filter(|part| !part.is_empty())
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .with_context(|| format!("invalid square index `{part}`"))
        })
        .collect()
}

fn parse_clues(tokens: &[String]) -> Result<Vec<Clue>> {
    tokens
        .iter()
        .map(|token| {
            let (square, size) = token
                .split_once('=')
                .ok_or_else(|| anyhow!("clue `{token}` is not of the form square=size"))?;
            Ok(Clue {
                square: square.trim().parse()?,
                size: size.trim().parse()?,
            })
        })
        .collect()
}

fn constraint_display(c: &Constraint) -> String {
    if c.is_empty() {
        return "none".to_string();
    }
    let join = |squares: &[usize]| {
        squares
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    let mut parts = Vec::new();
    if !c.forced_water().is_empty() {
        parts.push(format!("water={}", join(c.forced_water())));
    }
    if !c.forced_land().is_empty() {
        parts.push(format!("land={}", join(c.forced_land())));
    }
    parts.join(" ")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let ok = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = e.print();
            return ExitCode::from(if ok { 0 } else { 1 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Count {
            surface,
            rule,
            constraint,
            run,
            format,
        } => {
            let surface = surface.build()?;
            let constraint = parse_constraint(&constraint)?;
            let result = count_valid(&surface, rule, &constraint, &run.options())?;
            match expect_format(format, &[Format::Text, Format::JsonLines])? {
                Format::Text => println!(
                    "surface={} rule={rule} constraint={} count={}",
                    result.surface,
                    constraint_display(&constraint),
                    result.count
                ),
                _ => println!(
                    "{}",
                    json!({
                        "record": "count",
                        "surface": result.surface,
                        "rule": rule.to_string(),
                        "forced_water": constraint.forced_water(),
                        "forced_land": constraint.forced_land(),
                        "count": result.count,
                    })
                ),
            }
            Ok(0)
        }
        Command::Enumerate {
            surface,
            rule,
            constraint,
            run,
            format,
        } => {
            let surface = surface.build()?;
            let constraint = parse_constraint(&constraint)?;
            let result = enumerate_valid(&surface, rule, &constraint, &run.options())?;
            let list = result.colorings.expect("listing requested");
            match expect_format(format, &[Format::Text, Format::JsonLines])? {
                Format::Text => {
                    println!(
                        "surface={} rule={rule} constraint={} count={}",
                        result.surface,
                        constraint_display(&constraint),
                        result.count
                    );
                    for c in &list {
                        println!("coloring mask={} cells={c}", c.mask());
                    }
                }
                _ => {
                    println!(
                        "{}",
                        json!({
                            "record": "count",
                            "surface": result.surface,
                            "rule": rule.to_string(),
                            "count": result.count,
                        })
                    );
                    for c in &list {
                        println!(
                            "{}",
                            json!({
                                "record": "coloring",
                                "mask": c.mask(),
                                "cells": c.to_string(),
                                "water_squares": c.water_squares(),
                            })
                        );
                    }
                }
            }
            Ok(0)
        }
        Command::Verify {
            family,
            rule,
            min_n,
            max_n,
            run,
            format,
        } => {
            if min_n == 0 || min_n > max_n {
                bail!("need 1 <= min-n <= max-n");
            }
            let report = verify(family, rule, min_n..=max_n, &run.options())?;
            print_verify(&report, format)?;
            Ok(if report.all_agree() { 0 } else { 2 })
        }
        Command::Bijection {
            check,
            k,
            run,
            format,
        } => {
            let report = check_bijection(check, k, &run.options())?;
            match expect_format(format, &[Format::Text, Format::JsonLines])? {
                Format::Text => {
                    println!(
                        "check={} k={} domain={} target={} image-in-target={} injective={} \
                         surjective={} {}",
                        report.check,
                        report.k,
                        report.domain_size,
                        report.target_size,
                        yesno(report.image_in_target),
                        yesno(report.injective),
                        yesno(report.surjective),
                        if report.passed() { "PASS" } else { "FAIL" }
                    );
                    for (label, count) in &report.components {
                        println!("  {label}: {count}");
                    }
                    for counterexample in &report.counterexamples {
                        println!("  counterexample: {counterexample}");
                    }
                }
                _ => {
                    println!(
                        "{}",
                        json!({
                            "record": "bijection",
                            "check": report.check.id(),
                            "k": report.k,
                            "domain_size": report.domain_size,
                            "target_size": report.target_size,
                            "image_in_target": report.image_in_target,
                            "injective": report.injective,
                            "surjective": report.surjective,
                            "passed": report.passed(),
                            "components": report.components,
                            "counterexamples": report.counterexamples,
                        })
                    );
                }
            }
            Ok(if report.passed() { 0 } else { 2 })
        }
        Command::Bfile {
            formula,
            family,
            rule,
            min_n,
            max_n,
            run,
            format,
        } => {
            expect_format(format, &[Format::Bfile])?;
            if min_n > max_n {
                bail!("need min-n <= max-n");
            }
            let source = match (formula, family, rule) {
                (Some(f), None, None) => BfileSource::Formula(f),
                (None, Some(family), Some(rule)) => BfileSource::Oracle { family, rule },
                _ => bail!("pass either --formula <id> or --family <name> --rule <rule>"),
            };
            print!("{}", bfile(source, min_n..=max_n, &run.options())?);
            Ok(0)
        }
        Command::Describe { surface, format } => {
            let surface = surface.build()?;
            print_describe(&surface, format)?;
            Ok(0)
        }
        Command::Solve {
            surface,
            rule,
            clue,
            run,
            format,
        } => {
            let surface = surface.build()?;
            let clues = parse_clues(&clue)?;
            let puzzle = PuzzleSpec {
                surface,
                clues,
                rule,
            };
            let solutions = solve(&puzzle, &run.options())?;
            print_solutions(&puzzle, &solutions, format)?;
            Ok(0)
        }
        Command::Render {
            surface,
            water,
            clue,
            orbits,
            format,
        } => {
            let surface = surface.build()?;
            let coloring = water
                .map(|w| -> Result<Coloring> {
                    let squares = parse_square_list(&w)?;
                    Coloring::from_water_squares(surface.n_squares(), &squares).map_err(Into::into)
                })
                .transpose()?;
            let clues = parse_clues(&clue)?;
            match expect_format(format, &[Format::Text, Format::Svg])? {
                Format::Svg => print!(
                    "{}",
                    render_svg(&surface, coloring.as_ref(), &clues, orbits)?
                ),
                _ => print!(
                    "{}",
                    render_text(&surface, coloring.as_ref(), &clues, orbits)?
                ),
            }
            Ok(0)
        }
    }
}

fn expect_format(format: Format, allowed: &[Format]) -> Result<Format> {
    if allowed.contains(&format) {
        Ok(format)
    } else {
        bail!("this command does not support --format {format:?}");
    }
}

fn yesno(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn print_verify(report: &CountReport, format: Format) -> Result<()> {
    match expect_format(format, &[Format::Text, Format::JsonLines])? {
        Format::Text => {
            println!(
                "verify family={} rule={} range={}..{}",
                report.family,
                report.rule,
                report.rows.first().map(|r| r.n).unwrap_or(0),
                report.rows.last().map(|r| r.n).unwrap_or(0)
            );
            println!(
                "{:>3} {:>8}  {:<24} {:>8}  agrees",
                "n", "oracle", "formula", "value"
            );
            for row in &report.rows {
                if row.comparisons.is_empty() {
                    println!(
                        "{:>3} {:>8}  {:<24} {:>8}  -",
                        row.n, row.oracle, "(none)", "-"
                    );
                }
                for c in &row.comparisons {
                    println!(
                        "{:>3} {:>8}  {:<24} {:>8}  {}",
                        row.n,
                        row.oracle,
                        c.formula.id(),
                        c.value,
                        if c.agrees { "yes" } else { "NO" }
                    );
                }
            }
            let mismatches = report.disagreements();
            println!("mismatches={}", mismatches.len());
        }
        _ => {
            for row in &report.rows {
                for c in &row.comparisons {
                    println!(
                        "{}",
                        json!({
                            "record": "verify",
                            "family": report.family.id(),
                            "rule": report.rule.to_string(),
                            "n": row.n,
                            "oracle": row.oracle,
                            "formula": c.formula.id(),
                            "value": c.value.to_string(),
                            "agrees": c.agrees,
                        })
                    );
                }
            }
            println!(
                "{}",
                json!({
                    "record": "verify-summary",
                    "family": report.family.id(),
                    "rule": report.rule.to_string(),
                    "mismatches": report.disagreements().len(),
                })
            );
        }
    }
    Ok(())
}

fn print_describe(surface: &SquareTiledSurface, format: Format) -> Result<()> {
    match expect_format(format, &[Format::Text, Format::JsonLines])? {
        Format::Text => {
            println!(
                "surface={} squares={} gluings={} boundary-slots={} euler-characteristic={}",
                surface.name(),
                surface.n_squares(),
                surface.gluings().len(),
                surface.unglued_slots().len(),
                surface.euler_characteristic()
            );
            let edges = surface
                .adjacency()
                .edges()
                .iter()
                .map(|(a, b)| format!("{a}-{b}"))
                .collect::<Vec<_>>()
                .join(" ");
            println!("adjacency: {edges}");
            for (i, orbit) in surface.vertex_orbits().iter().enumerate() {
                let corners = orbit
                    .corners
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                println!(
                    "orbit {i}: {} square-degree={} squares={{{}}} corners={corners}",
                    if orbit.interior {
                        "interior"
                    } else {
                        "boundary"
                    },
                    orbit.square_degree,
                    orbit
                        .incident_squares
                        .iter()
                        .map(|s| s.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                );
            }
        }
        _ => {
            println!(
                "{}",
                json!({
                    "record": "surface",
                    "name": surface.name(),
                    "squares": surface.n_squares(),
                    "gluings": surface.gluings().len(),
                    "boundary_slots": surface.unglued_slots().len(),
                    "euler_characteristic": surface.euler_characteristic(),
                    "adjacency_edges": surface.adjacency().edges(),
                })
            );
            for (i, orbit) in surface.vertex_orbits().iter().enumerate() {
                println!(
                    "{}",
                    json!({
                        "record": "orbit",
                        "index": i,
                        "interior": orbit.interior,
                        "square_degree": orbit.square_degree,
                        "incident_squares": orbit.incident_squares,
                        "corners": orbit.corners.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    })
                );
            }
        }
    }
    Ok(())
}

fn print_solutions(puzzle: &PuzzleSpec, solutions: &[Coloring], format: Format) -> Result<()> {
    let clue_text = puzzle
        .clues
        .iter()
        .map(|c| format!("{}={}", c.square, c.size))
        .collect::<Vec<_>>()
        .join(" ");
    match expect_format(format, &[Format::Text, Format::JsonLines])? {
        Format::Text => {
            println!(
                "surface={} rule={} clues=[{clue_text}] solutions={}",
                puzzle.surface.name(),
                puzzle.rule,
                solutions.len()
            );
            for s in solutions {
                println!("solution mask={} cells={s}", s.mask());
            }
        }
        _ => {
            println!(
                "{}",
                json!({
                    "record": "solve",
                    "surface": puzzle.surface.name(),
                    "rule": puzzle.rule.to_string(),
                    "clues": puzzle.clues.iter()
                        .map(|c| json!({"square": c.square, "size": c.size}))
                        .collect::<Vec<_>>(),
                    "solutions": solutions.len(),
                })
            );
            for s in solutions {
                println!(
                    "{}",
                    json!({
                        "record": "solution",
                        "mask": s.mask(),
                        "cells": s.to_string(),
                        "water_squares": s.water_squares(),
                    })
                );
            }
        }
    }
    Ok(())
}
