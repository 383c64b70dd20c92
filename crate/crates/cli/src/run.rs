use std::fmt;
use std::io::{self, Write};

use gdpm_core::analysis::{
    attribute_frequencies, coverage_by_level, f1_by_level, frequency_bins, implications,
    level_summary, BinEdges, ClassLabels, Rule,
};
use gdpm_core::io::{
    load_csv, load_transactions, load_transactions_with_names, read_binarization_config,
    read_lines, write_report, Report, ReportFormat,
};
use gdpm_core::{mine, ClosureStructure, FormalContext, MineOptions, ObjectSet, Variant};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::args::{
    AnalyzeCmd, AttributeOrder, Command, InputArgs, InputFormat, MineCmd, MiningArgs, OutputArgs,
    ReportFormatArg, RulesCmd, SampleCmd, SampledCommand, StatsCmd, VariantArg,
};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(gdpm_core::Error),
    Output(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) | CliError::Output(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Data(e) => write!(f, "error: {e}"),
            CliError::Output(e) => write!(f, "error: writing output: {e}"),
        }
    }
}

impl From<gdpm_core::Error> for CliError {
    fn from(e: gdpm_core::Error) -> Self {
        CliError::Data(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Output(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

struct Dataset {
    name: String,
    context: FormalContext,
    labels: Option<Vec<String>>,
}

impl Dataset {
    fn sample(self, keep: &ObjectSet) -> Result<Self> {
        let context = self.context.sample_objects(keep)?;
        let labels = self
            .labels
            .map(|l| keep.iter().map(|g| l[g as usize].clone()).collect());
        Ok(Self {
            name: self.name,
            context,
            labels,
        })
    }
}

fn load(args: &InputArgs) -> Result<Dataset> {
    let name = args.input.file_stem().map_or_else(
        || "dataset".to_string(),
        |s| s.to_string_lossy().into_owned(),
    );
    let (context, labels) = match args.format {
        InputFormat::Transactions => {
            if args.binarize_config.is_some() || args.label_column.is_some() {
                return Err(CliError::Usage(
                    "--binarize-config and --label-column need --format csv".into(),
                ));
            }
            let loaded = match &args.names {
                Some(names) => load_transactions_with_names(&args.input, names)?,
                None => load_transactions(&args.input)?,
            };
            for w in &loaded.warnings {
                eprintln!("warning: {w}");
            }
            (loaded.context, None)
        }
        InputFormat::Csv => {
            if args.names.is_some() {
                return Err(CliError::Usage(
                    "--names applies to transaction files".into(),
                ));
            }
            let cfg_path = args
                .binarize_config
                .as_ref()
                .ok_or_else(|| CliError::Usage("--format csv needs --binarize-config".into()))?;
            let cfg = read_binarization_config(cfg_path)?;
            let loaded = load_csv(&args.input, &cfg, args.label_column.as_deref())?;
            (loaded.context, loaded.labels)
        }
    };
    let context = match args.order {
        AttributeOrder::Input => context,
        AttributeOrder::FreqDesc => context.sorted_by_frequency_desc().0,
    };
    Ok(Dataset {
        name,
        context,
        labels,
    })
}

fn mine_with(ctx: &FormalContext, args: &MiningArgs) -> ClosureStructure {
    let variant = match args.variant {
        VariantArg::Int => Variant::Int,
        VariantArg::Ext => Variant::Ext,
    };
    let opts = MineOptions::new(variant)
        .k_max(args.kmax)
        .parallel(args.parallel);
    mine(ctx, &opts)
}

fn emit(report: &Report, args: &OutputArgs) -> Result<()> {
    if let Some(path) = &args.output {
        let format = match args.report_format {
            ReportFormatArg::Structured => ReportFormat::Structured,
            ReportFormatArg::Tabular => ReportFormat::Tabular,
        };
        write_report(report, path, format)?;
    }
    Ok(())
}

/// Decimal without trailing zeros, at most four places.
fn num(x: f64) -> String {
    let s = format!("{x:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn bounds_line(ctx: &FormalContext, s: &ClosureStructure, scientific: bool) -> String {
    let bounds = s.size_bounds(ctx);
    let ci = s.closure_index();
    let ci = if ci.lower_bound_only {
        format!("CI>={}", ci.value)
    } else {
        format!("CI={}", ci.value)
    };
    let b = if scientific {
        bounds.scientific()
    } else {
        bounds.to_string()
    };
    format!("{ci}; {b}")
}

fn print_levels(out: &mut impl Write, s: &ClosureStructure) -> io::Result<()> {
    writeln!(out, "level\titemsets\tcandidates\ttrie_nodes\tms")?;
    for st in &s.stats {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            st.level,
            st.entries,
            st.candidates,
            st.trie_nodes,
            num(st.elapsed.as_secs_f64() * 1e3)
        )?;
    }
    Ok(())
}

fn run_mine(cmd: &MineCmd, data: Dataset) -> Result<()> {
    let ctx = &data.context;
    let s = mine_with(ctx, &cmd.mining);
    let report = Report::new(ctx, Some(data.name), &s, cmd.output.elide_extents_above);
    let mut out = io::stdout().lock();
    print_levels(&mut out, &s)?;
    writeln!(out, "{}", bounds_line(ctx, &s, false))?;
    emit(&report, &cmd.output)
}

fn run_analyze(cmd: &AnalyzeCmd, data: Dataset) -> Result<()> {
    let ctx = &data.context;
    let edges = BinEdges::new(cmd.bins.clone()).map_err(|e| CliError::Usage(e.to_string()))?;
    let labels = match (&cmd.labels, data.labels) {
        (Some(_), Some(_)) => {
            return Err(CliError::Usage(
                "--labels conflicts with --label-column".into(),
            ))
        }
        (Some(path), None) => Some(read_lines(path)?),
        (None, labels) => labels,
    };
    let s = mine_with(ctx, &cmd.mining);
    let mut report = Report::new(ctx, Some(data.name), &s, cmd.output.elide_extents_above);
    let histogram = frequency_bins(&s, ctx, &edges)?;
    let coverage = if ctx.incidence_count() > 0 {
        Some(coverage_by_level(&s, ctx)?)
    } else {
        eprintln!("warning: context has no incidences, coverage is undefined");
        None
    };
    let f1 = match &labels {
        Some(l) => {
            let classes = ClassLabels::from_strings(l);
            Some(f1_by_level(&s, ctx, &classes.ids, &edges)?)
        }
        None => None,
    };
    let summary = level_summary(&s);

    let mut out = io::stdout().lock();
    writeln!(out, "{}", bounds_line(ctx, &s, false))?;
    writeln!(out, "\n# frequency histogram (% of level)")?;
    let labels_row: Vec<String> = (0..edges.bins()).map(|b| edges.label(b)).collect();
    writeln!(out, "level\titemsets\tshare\t{}", labels_row.join("\t"))?;
    for row in &histogram.rows {
        let pct: Vec<String> = row.percentages.iter().map(|&p| num(p)).collect();
        writeln!(
            out,
            "{}\t{}\t{}\t{}",
            row.level,
            row.itemsets,
            num(row.share),
            pct.join("\t")
        )?;
    }
    if let Some(cov) = &coverage {
        writeln!(out, "\n# coverage")?;
        writeln!(out, "level\tcoverage\toverlap_mean\toverlap_std")?;
        for c in cov {
            writeln!(
                out,
                "{}\t{}\t{}\t{}",
                c.level,
                num(c.row.coverage),
                c.row.overlap_mean.map_or_else(String::new, num),
                c.row.overlap_std.map_or_else(String::new, num)
            )?;
        }
    }
    if let Some(f1) = &f1 {
        writeln!(out, "\n# mean F1 by level and frequency bin")?;
        writeln!(out, "level\tbin\titemsets\tmean_f1")?;
        for c in f1 {
            writeln!(
                out,
                "{}\t{}\t{}\t{}",
                c.level,
                edges.label(c.bin),
                c.itemsets,
                num(c.mean_f1)
            )?;
        }
    }
    writeln!(
        out,
        "\n# itemsets by level and size (count, support mean+std)"
    )?;
    for cell in &summary.cells {
        writeln!(
            out,
            "{}\t{}\t{}\t{}+{}",
            cell.level,
            cell.size,
            cell.count,
            num(cell.mean_support),
            num(cell.std_support)
        )?;
    }

    report.analysis.attribute_frequencies = Some(attribute_frequencies(ctx));
    report.analysis.histogram = Some(histogram);
    report.analysis.coverage = coverage;
    report.analysis.f1 = f1;
    report.analysis.level_summary = Some(summary);
    emit(&report, &cmd.output)
}

fn rule_line(rule: &Rule, names: &[String]) -> String {
    let join = |set: &gdpm_core::ItemSet| {
        set.iter()
            .map(|m| names[m as usize].as_str())
            .collect::<Vec<_>>()
            .join(", ")
    };
    format!(
        "{}\t{}\t{}\t{}\t{}",
        join(&rule.antecedent),
        join(&rule.consequent),
        rule.support,
        num(rule.confidence),
        num(rule.lift)
    )
}

fn run_rules(cmd: &RulesCmd, data: Dataset) -> Result<()> {
    let ctx = &data.context;
    let s = mine_with(ctx, &cmd.mining);
    let mut rules =
        implications(&s, ctx, cmd.min_support).map_err(|e| CliError::Usage(e.to_string()))?;
    if let Some(top) = cmd.top {
        rules.truncate(top);
    }
    let mut out = io::stdout().lock();
    writeln!(out, "antecedents\tconsequents\tsupport\tconf\tlift")?;
    for rule in &rules {
        writeln!(out, "{}", rule_line(rule, ctx.attribute_names()))?;
    }
    let mut report = Report::new(ctx, Some(data.name), &s, cmd.output.elide_extents_above);
    report.analysis.rules = Some(rules);
    emit(&report, &cmd.output)
}

fn run_stats(cmd: &StatsCmd, data: Dataset) -> Result<()> {
    let ctx = &data.context;
    let s = mine_with(ctx, &cmd.mining);
    println!(
        "|G|={} |M|={} density={} {}",
        ctx.n_objects(),
        ctx.n_attributes(),
        num(ctx.density()),
        bounds_line(ctx, &s, cmd.scientific)
    );
    Ok(())
}

fn sample_ids(cmd: &SampleCmd, n: usize) -> Result<ObjectSet> {
    if let Some(keep) = &cmd.keep {
        return Ok(keep.iter().copied().collect());
    }
    let fraction = cmd.fraction.expect("clap requires --keep or --fraction");
    if !(0.0..=1.0).contains(&fraction) {
        return Err(CliError::Usage(format!(
            "--fraction {fraction} is not in [0, 1]"
        )));
    }
    let k = (fraction * n as f64).round() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(cmd.seed);
    Ok(rand::seq::index::sample(&mut rng, n, k)
        .into_iter()
        .map(|g| g as u32)
        .collect())
}

fn run_sample(cmd: &SampleCmd) -> Result<()> {
    let input = match &cmd.then {
        SampledCommand::Mine(c) => &c.input,
        SampledCommand::Analyze(c) => &c.input,
        SampledCommand::Rules(c) => &c.input,
        SampledCommand::Stats(c) => &c.input,
    };
    let data = load(input)?;
    let keep = sample_ids(cmd, data.context.n_objects())?;
    eprintln!(
        "sample: keeping {} of {} objects",
        keep.len(),
        data.context.n_objects()
    );
    let data = data.sample(&keep)?;
    match &cmd.then {
        SampledCommand::Mine(c) => run_mine(c, data),
        SampledCommand::Analyze(c) => run_analyze(c, data),
        SampledCommand::Rules(c) => run_rules(c, data),
        SampledCommand::Stats(c) => run_stats(c, data),
    }
}

pub fn run(command: &Command) -> Result<()> {
    match command {
        Command::Mine(c) => run_mine(c, load(&c.input)?),
        Command::Analyze(c) => run_analyze(c, load(&c.input)?),
        Command::Rules(c) => run_rules(c, load(&c.input)?),
        Command::Stats(c) => run_stats(c, load(&c.input)?),
        Command::Sample(c) => run_sample(c),
    }
}
