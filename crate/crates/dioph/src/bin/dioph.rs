//! Thin command-line wrapper over the library's batch interface.

use clap::Parser;
use dioph::cli::{run, JobConfig, COMMANDS};
use std::io::Write;
use std::process::ExitCode;

/// Exact-arithmetic experiments with continued fractions, Ostrowski
/// numeration and sums of reciprocals of fractional parts.
///
/// Commands: cf, ostrowski, norm, gaps, count, sum, split, trim, linforms,
/// psi-sum, construct-t5, construct-t8, liouville, fiber-scan, verify-all.
///
/// CSV columns by command:
///   cf          k,a_k,p_k,q_k,sign_Dk,absDk_lo,absDk_hi,A_k
///   sum         quantity,N,lo,hi
///   fiber-scan  beta,n,product_hi,psi_n_lo,trivial
///
/// The environment variable DIOPH_PRECISION_CAP overrides the adaptive
/// refinement cap (default 4096 bits). Exit status: 0 all verdicts pass,
/// 1 some bound verdict failed (report still written), 2 usage error.
#[derive(Parser, Debug)]
#[command(name = "dioph", version, verbatim_doc_comment)]
struct Args {
    /// One of the commands listed above.
    command: String,
    /// Real number spec: golden | e | surd:(A+B*sqrtD)/C |
    /// quotients:[a0;a1,...] | periodic:[a0;pre|period] | interval:LO,HI.
    /// For linforms, several specs joined by `;`.
    #[arg(long)]
    alpha: Option<String>,
    /// Shift spec: rational | D:k | digits:[b1,b2,...] | spec:<real-spec>.
    #[arg(long)]
    gamma: Option<String>,
    /// Weight spec: c/n | 1/(n*log^a(n+s)*loglog^b(n+s)) | n^-tau.
    #[arg(long)]
    psi: Option<String>,
    /// Main scan bound N.
    #[arg(long = "N")]
    n: Option<String>,
    /// Threshold for counting, as a rational p/q.
    #[arg(long)]
    eps: Option<String>,
    /// Trim constant, as a rational.
    #[arg(long)]
    c: Option<String>,
    /// Table depth (rows of the convergent table).
    #[arg(long)]
    depth: Option<usize>,
    /// Target precision in bits for certified enclosures.
    #[arg(long)]
    precision: Option<u32>,
    /// Output format: json (default) or csv where supported.
    #[arg(long)]
    format: Option<String>,
    /// Write the report to this path instead of stdout.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    /// Cap the number of worker threads.
    #[arg(long)]
    threads: Option<usize>,
    /// gaps: digit prefix d_1,d_2,... (comma separated).
    #[arg(long)]
    prefix: Option<String>,
    /// linforms: box sizes T_1,T_2,... (comma separated).
    #[arg(long)]
    tsizes: Option<String>,
    /// linforms: cap L (rational, >= 2).
    #[arg(long = "L")]
    l_cap: Option<String>,
    /// fiber-scan: second coordinates, `;`-separated rationals or specs.
    #[arg(long)]
    betas: Option<String>,
    /// construct-t5: number of checkpoint indices.
    #[arg(long)]
    count: Option<usize>,
    /// construct-t5: parity bits, e.g. 0101.
    #[arg(long = "eps-bits")]
    eps_bits: Option<String>,
    /// liouville: growth rule qk | qk-pow-k | const:c | prefix:a,b;rule.
    #[arg(long)]
    rule: Option<String>,
    /// construct-t8: checkpoint indices K_1,K_2,... (comma separated).
    #[arg(long)]
    checkpoints: Option<String>,
    /// liouville: bit budget for q_k (default 20000).
    #[arg(long)]
    budget: Option<u64>,
    /// linforms: min-cap | positive | positive-weighted | symmetric-weighted.
    #[arg(long)]
    mode: Option<String>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = JobConfig {
        command: args.command,
        alpha: args.alpha,
        gamma: args.gamma,
        psi: args.psi,
        n: args.n,
        eps: args.eps,
        c: args.c,
        depth: args.depth,
        precision: args.precision,
        format: args.format,
        threads: args.threads,
        prefix: args.prefix,
        t_sizes: args.tsizes,
        l_cap: args.l_cap,
        betas: args.betas,
        count: args.count,
        eps_bits: args.eps_bits,
        rule: args.rule,
        checkpoints: args.checkpoints,
        budget: args.budget,
        mode: args.mode,
    };
    if !COMMANDS.contains(&cfg.command.as_str()) {
        eprintln!("error: unknown command `{}`; expected one of {:?}", cfg.command, COMMANDS);
        return ExitCode::from(2);
    }
    match run(&cfg) {
        Ok(outcome) => {
            let write_result = match &args.out {
                Some(path) => std::fs::write(path, outcome.report.as_bytes()),
                None => std::io::stdout().write_all(outcome.report.as_bytes()),
            };
            if let Err(e) = write_result {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if outcome.all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
