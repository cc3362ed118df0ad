mod json;

use clap::{Args, Parser, Subcommand, ValueEnum};
use json::*;
use periodpoly::closedform::{classify, counts_formula_upto, factorization, spectrum};
use periodpoly::codes::{
    build_code, code_partitions, enumerator_closed_form, weight_distribution_full, weight_distribution_representative,
    WeightEnumerator, FULL_BUDGET, SAMPLES_PER_COSET,
};
use periodpoly::ffield::build_field;
use periodpoly::periods::{count_diagonal_power_sums, period_counts, reduced_periods};
use periodpoly::quadpart::{partitions_for_instance, solve_2b2, solve_d2};
use periodpoly::verify::{self, matrix, parse_instance, run_instance, Options, Tier as VerifyTier, Verdict};
use periodpoly::{Error, Strategy};
use serde::Serialize;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "periodpoly", version, about = "Cyclotomic periods of order 2^m: brute force and closed forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Also write the JSON report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<std::path::PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Brute-force period counts and reduced periods.
    Periods {
        #[arg(short)]
        p: u64,
        #[arg(short)]
        s: u32,
        /// Order of the periods.
        #[arg(short, conflicts_with = "m", required_unless_present = "m")]
        e: Option<u64>,
        /// Order 2^m; also prints the closed-form spectrum.
        #[arg(short)]
        m: Option<u32>,
        #[command(flatten)]
        output: Output,
    },
    /// Closed-form factorization of the reduced period polynomial of order 2^m.
    Factor {
        #[arg(short)]
        p: u64,
        #[arg(short)]
        s: u32,
        #[arg(short)]
        m: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Number of solutions of x_1^e + ... + x_n^e = 0, e = 2^m, for 1..=n variables.
    Counts {
        #[arg(short)]
        p: u64,
        #[arg(short)]
        s: u32,
        #[arg(short)]
        m: u32,
        #[arg(short)]
        n: u32,
        /// Compare with counts from brute-force periods.
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Weight enumerator of the irreducible cyclic code with theta = gamma^N.
    Code {
        #[arg(short)]
        p: u64,
        #[arg(short)]
        l: u32,
        #[arg(short)]
        s: u32,
        #[arg(short = 'N')]
        n: u64,
        /// Cap on q * length for full enumeration; larger codes are checked by coset representatives.
        #[arg(long, default_value_t = FULL_BUDGET)]
        budget: u64,
        /// Seed for sampling extra codewords per coset.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Normalized quadratic partition of p^k.
    Partitions {
        #[arg(short)]
        p: u64,
        #[arg(short)]
        k: u32,
        #[arg(long, value_enum)]
        form: Form,
        #[command(flatten)]
        output: Output,
    },
    /// Run the verification matrix.
    Verify {
        #[arg(long, value_enum, default_value_t = Tier::Fast)]
        tier: Tier,
        /// Single instance, e.g. "p=3,s=4,m=4" or "p=3,l=1,s=4,N=16".
        #[arg(long)]
        instance: Option<String>,
        /// Cap on q * length for full code enumeration.
        #[arg(long, default_value_t = FULL_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Form {
    /// A^2 + 2B^2, p = 3 mod 8.
    TwoBSquared,
    /// C^2 + D^2, p = 5 mod 8.
    SumOfSquares,
}

#[derive(Clone, Copy, ValueEnum)]
enum Tier {
    Fast,
    Full,
    Stretch,
}

/// Process exit status.
enum Failure {
    Verification,
    Error(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification => 1,
            Failure::Error(Error::Budget(_)) => 3,
            Failure::Error(Error::Inconsistency(_) | Error::UniquenessViolation { .. }) => 1,
            Failure::Error(_) => 2,
        }
    }
}

type CmdResult = Result<(), Failure>;

fn emit<T: Serialize>(output: &Output, value: &T, text: impl FnOnce() -> String) -> CmdResult {
    let rendered = serde_json::to_string_pretty(value).expect("serializable");
    if let Some(path) = &output.out {
        std::fs::write(path, format!("{rendered}\n"))
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))?;
    }
    if output.json {
        println!("{rendered}");
    } else {
        print!("{}", text());
    }
    Ok(())
}

fn spectrum_entries(p: u64, s: u32, m: u32) -> Result<(String, Option<Vec<SpectrumEntry>>), Error> {
    let tag = classify(p, s, m)?;
    let parts = partitions_for_instance(&tag)?;
    let sp = match spectrum(&tag, &parts) {
        Ok(sp) => Some(
            sp.entries()
                .iter()
                .map(|(v, k)| SpectrumEntry { value: v.to_string(), multiplicity: *k })
                .collect(),
        ),
        Err(Error::Unsupported(_)) => None,
        Err(e) => return Err(e),
    };
    Ok((tag.case().label().to_string(), sp))
}

fn cmd_periods(p: u64, s: u32, e: Option<u64>, m: Option<u32>, output: &Output) -> CmdResult {
    let (e, case, spectrum) = match m {
        Some(m) => {
            let (case, sp) = spectrum_entries(p, s, m)?;
            (1u64 << m, Some(case), sp)
        }
        None => (e.expect("clap requires -e or -m"), None, None),
    };
    let f = build_field(p, s)?;
    let pc = period_counts(&f, e)?;
    let periods = reduced_periods(&pc);
    let out = PeriodsOutput {
        p,
        s,
        e,
        q: f.q().to_string(),
        counts: pc.rows().to_vec(),
        periods: periods.iter().enumerate().map(|(j, z)| PeriodEntry::new(j, z)).collect(),
        case,
        spectrum,
    };
    emit(output, &out, || {
        let mut t = format!("F_{} with p = {p}, e = {e}\ncounts m[j][c], c = 0..{}:\n", out.q, p - 1);
        for (j, row) in out.counts.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(u64::to_string).collect();
            t += &format!("  {j:>3}: {}\n", cells.join(" "));
        }
        t += "reduced periods:\n";
        for z in &out.periods {
            match &z.integer {
                Some(v) => t += &format!("  eta*_{} = {v}\n", z.index),
                None => t += &format!("  eta*_{} = [{}]\n", z.index, z.coords.join(", ")),
            }
        }
        if let Some(case) = &out.case {
            t += &format!("case: {case}\n");
        }
        if let Some(sp) = &out.spectrum {
            t += "closed-form spectrum:\n";
            for entry in sp {
                t += &format!("  {} (x{})\n", entry.value, entry.multiplicity);
            }
        }
        t
    })
}

fn cmd_factor(p: u64, s: u32, m: u32, output: &Output) -> CmdResult {
    let tag = classify(p, s, m)?;
    let parts = partitions_for_instance(&tag)?;
    let fp = factorization(&tag, &parts)?;
    let out = FactorOutput::new(p, s, m, tag.case().label().to_string(), &fp);
    emit(output, &out, || format!("case: {}\nfactored: {}\nexpanded: {}\n", out.case, out.display, out.expanded_display))
}

fn cmd_counts(p: u64, s: u32, m: u32, n: u32, check: bool, output: &Output) -> CmdResult {
    let tag = classify(p, s, m)?;
    let parts = partitions_for_instance(&tag)?;
    let formula = counts_formula_upto(&tag, &parts, n)?;
    let brute = if check {
        let f = build_field(p, s)?;
        let periods = reduced_periods(&period_counts(&f, tag.e())?);
        Some((1..=n).map(|k| count_diagonal_power_sums(&f, tag.e(), k, &periods)).collect::<Result<Vec<_>, _>>()?)
    } else {
        None
    };
    let counts: Vec<CountEntry> = formula
        .iter()
        .enumerate()
        .map(|(i, c)| CountEntry {
            n: i as u32 + 1,
            count: big(c),
            brute_force: brute.as_ref().map(|b| big(&b[i])),
        })
        .collect();
    let mismatch = counts.iter().any(|c| c.brute_force.as_ref().is_some_and(|b| *b != c.count));
    let out = CountsOutput { p, s, m, counts };
    emit(output, &out, || {
        let mut t = String::new();
        for c in &out.counts {
            t += &format!("N_{} = {}", c.n, c.count);
            if let Some(b) = &c.brute_force {
                t += &format!("  (brute force {b})");
            }
            t += "\n";
        }
        t
    })?;
    if mismatch {
        return Err(Failure::Verification);
    }
    Ok(())
}

fn weight_entries(en: &WeightEnumerator) -> Vec<WeightEntry> {
    en.counts().iter().map(|(w, k)| WeightEntry { weight: *w, count: *k }).collect()
}

fn cmd_code(p: u64, l: u32, s: u32, n: u64, budget: u64, seed: u64, output: &Output) -> CmdResult {
    let c = build_code(p, l, s, n)?;
    let closed = enumerator_closed_form(&c, &code_partitions(&c)?)?;
    let f = build_field(p, s)?;
    let (mode, brute) = match weight_distribution_full(&f, &c, budget, Strategy::default()) {
        Ok(en) => ("full", en),
        Err(Error::Budget(_)) => {
            ("representative", weight_distribution_representative(&f, &c, SAMPLES_PER_COSET, seed)?.enumerator)
        }
        Err(e) => return Err(e.into()),
    };
    let agrees = brute.same_counts(&closed);
    let out = CodeOutput {
        p,
        l,
        s,
        n,
        length: c.length(),
        dimension: c.dimension(),
        e: c.e(),
        enumerator: weight_entries(&closed),
        display: closed.to_string(),
        comparison: Some(Comparison {
            mode: mode.to_string(),
            enumerator: weight_entries(&brute),
            display: brute.to_string(),
            agrees,
        }),
    };
    emit(output, &out, || {
        format!(
            "[{}, {}] code over F_{}, e = {}\n{}\n{} enumeration {}\n",
            out.length,
            out.dimension,
            p.pow(l),
            out.e,
            out.display,
            mode,
            if agrees { "agrees" } else { "DISAGREES" }
        )
    })?;
    if !agrees {
        return Err(Failure::Verification);
    }
    Ok(())
}

fn cmd_partitions(p: u64, k: u32, form: Form, output: &Output) -> CmdResult {
    let (name, values) = match form {
        Form::TwoBSquared => {
            let sol = solve_2b2(p, k)?;
            ("two-b-squared", [("A", big(sol.a())), ("B", big(sol.b()))])
        }
        Form::SumOfSquares => {
            let sol = solve_d2(p, k)?;
            ("sum-of-squares", [("C", big(sol.c())), ("D", big(sol.d()))])
        }
    };
    let out = PartitionOutput {
        p,
        k,
        form: name.to_string(),
        values: values.iter().map(|(n, v)| NamedValue { name: n.to_string(), value: v.clone() }).collect(),
    };
    emit(output, &out, || {
        let parts: Vec<String> = out.values.iter().map(|v| format!("{}={}", v.name, v.value)).collect();
        format!("{}\n", parts.join(" "))
    })
}

fn cmd_verify(tier: Tier, instance: Option<String>, budget: u64, seed: u64, output: &Output) -> CmdResult {
    let instances = match instance {
        Some(sel) => vec![parse_instance(&sel)?],
        None => matrix(match tier {
            Tier::Fast => VerifyTier::Fast,
            Tier::Full => VerifyTier::Full,
            Tier::Stretch => VerifyTier::Stretch,
        }),
    };
    let opts = Options { code_budget: budget, seed, ..Options::default() };
    let mut reports = Vec::with_capacity(instances.len());
    for inst in &instances {
        let r = run_instance(inst, &opts);
        if !output.json {
            print_report(&r);
        }
        reports.push(r);
    }
    let out = VerifyOutput {
        passed: reports.iter().all(verify::InstanceReport::passed),
        instances: reports.iter().map(InstanceOutput::from).collect(),
    };
    emit(output, &out, || {
        let failed = out.instances.iter().filter(|i| !i.passed).count();
        format!("{} instances, {failed} failed\n", out.instances.len())
    })?;
    if !out.passed {
        return Err(Failure::Verification);
    }
    Ok(())
}

fn print_report(r: &verify::InstanceReport) {
    let status = if r.passed() { "PASS" } else { "FAIL" };
    println!("{status} {} ({} ms)", r.key, r.millis);
    for c in &r.checks {
        match &c.verdict {
            Verdict::Pass => {}
            v => println!("    {}: {} ({})", v.label(), c.name, v.detail().unwrap_or("")),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Periods { p, s, e, m, output } => cmd_periods(*p, *s, *e, *m, output),
        Command::Factor { p, s, m, output } => cmd_factor(*p, *s, *m, output),
        Command::Counts { p, s, m, n, check, output } => cmd_counts(*p, *s, *m, *n, *check, output),
        Command::Code { p, l, s, n, budget, seed, output } => cmd_code(*p, *l, *s, *n, *budget, *seed, output),
        Command::Partitions { p, k, form, output } => cmd_partitions(*p, *k, *form, output),
        Command::Verify { tier, instance, budget, seed, output } => {
            cmd_verify(*tier, instance.clone(), *budget, *seed, output)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if let Failure::Error(e) = &f {
                eprintln!("error: {e}");
            }
            ExitCode::from(f.code())
        }
    }
}
