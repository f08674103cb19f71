//! Acceptance criteria, one line each.

use std::time::{Duration, Instant};

use wellrounded::suites::*;

struct Line {
    n: usize,
    title: &'static str,
    checks: Vec<Check>,
    limit: Option<Duration>,
    elapsed: Duration,
}

impl Line {
    fn passed(&self) -> bool {
        !self.checks.is_empty()
            && self.checks.iter().all(|c| c.passed)
            && self.limit.is_none_or(|l| self.elapsed < l)
    }

    fn print(&self) {
        let cases: usize = self.checks.iter().map(|c| c.count).sum();
        println!(
            "criterion {:>2} {:<18} {} ({} checks, {} cases, {:.1}s)",
            self.n,
            self.title,
            if self.passed() { "PASS" } else { "FAIL" },
            self.checks.len(),
            cases,
            self.elapsed.as_secs_f64()
        );
        for c in self.checks.iter().filter(|c| !c.passed) {
            println!("    {}: {} failures; {}", c.name, c.failures, c.counterexample.as_deref().unwrap_or(&c.detail));
        }
    }
}

fn line(
    n: usize,
    title: &'static str,
    limit: Option<Duration>,
    f: impl FnOnce() -> wellrounded::Result<Vec<Check>>,
) -> Line {
    let start = Instant::now();
    let checks = f().unwrap_or_else(|e| {
        vec![Check {
            name: title.into(),
            passed: false,
            count: 0,
            failures: 1,
            detail: e.to_string(),
            counterexample: Some(e.to_string()),
            elapsed: Duration::ZERO,
        }]
    });
    let l = Line { n, title, checks, limit, elapsed: start.elapsed() };
    l.print();
    l
}

fn suite(name: &str, cfg: &RunConfig, ctx: &wellrounded::contraction::TraceContext) -> wellrounded::Result<Vec<Check>> {
    Ok(run_suite_with(name, cfg, Some(ctx))?.checks)
}

fn main() {
    let cfg = RunConfig::default();
    let ctx = context(&cfg).expect("distance fixpoint");
    let min = Duration::from_secs(60);
    let lines = vec![
        line(1, "incidence table", Some(min), || Ok(vec![check_incidence()])),
        line(2, "appendix list", None, || Ok(vec![check_appendix()])),
        line(3, "example minimal", None, || Ok(vec![check_example_xi()?])),
        line(4, "naive distance", Some(10 * min), || check_naive_distance(&cfg)),
        line(5, "fundamental bases", None, || Ok(vec![check_fundamental_bases(3)])),
        line(6, "norm lemmas", None, || suite("lemmas", &cfg, &ctx)),
        line(7, "minimal sets", None, || check_xi_structure(&ctx, 3)),
        line(8, "contraction", None, || {
            let mut v = suite("trace", &cfg, &ctx)?;
            v.extend(suite("sweep", &cfg, &ctx)?);
            Ok(v)
        }),
        line(9, "tree contraction", None, || check_w2(8, 6)),
        line(10, "projections", None, || suite("projection", &cfg, &ctx)),
        line(11, "cohomology", None, || {
            let mut v = suite("em", &cfg, &ctx)?;
            v.extend(suite("filling", &cfg, &ctx)?);
            Ok(v)
        }),
    ];
    let failed: Vec<usize> = lines.iter().filter(|l| !l.passed()).map(|l| l.n).collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", lines.len());
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
