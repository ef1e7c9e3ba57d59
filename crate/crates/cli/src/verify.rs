use std::collections::BTreeMap;

use anyhow::{bail, Context, Result};
use serde_json::json;
use unfold_core::verify::{run, Check, Comparison, Suite};

use crate::output::{sci, table, Bundle};

/// Environment variable that replaces suite bounds, for exercising the
/// failure path in tests: `suite=bound[,suite=bound...]`, where `all`
/// matches every suite.
pub const TOLERANCE_ENV: &str = "UNFOLD_VERIFY_TOLERANCE";

pub fn parse_overrides(spec: &str) -> Result<BTreeMap<Option<Suite>, f64>> {
    let mut out = BTreeMap::new();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (name, value) = item
            .split_once('=')
            .with_context(|| format!("{TOLERANCE_ENV}: `{item}` is not `suite=bound`"))?;
        let suite = match name.trim() {
            "all" => None,
            s => Some(
                s.parse::<Suite>()
                    .with_context(|| format!("{TOLERANCE_ENV}: unknown suite `{s}`"))?,
            ),
        };
        let bound: f64 = value
            .trim()
            .parse()
            .with_context(|| format!("{TOLERANCE_ENV}: `{value}` is not a number"))?;
        if bound.is_nan() {
            bail!("{TOLERANCE_ENV}: bound for `{name}` is NaN");
        }
        out.insert(suite, bound);
    }
    Ok(out)
}

fn apply(checks: &mut [Check], overrides: &BTreeMap<Option<Suite>, f64>) {
    for c in checks {
        if let Some(&b) = overrides.get(&Some(c.suite)).or_else(|| overrides.get(&None)) {
            c.bound = b;
        }
    }
}

/// Runs the selected suites (all when `suites` is empty). Files:
/// `verify.txt`, `verify.json`. Returns whether every check passed.
pub fn verify(suites: &[Suite], overrides: &BTreeMap<Option<Suite>, f64>) -> Result<(Bundle, bool)> {
    let selected: Vec<Suite> = if suites.is_empty() {
        Suite::ALL.to_vec()
    } else {
        suites.to_vec()
    };
    let mut checks = Vec::new();
    for suite in selected {
        checks.extend(run(suite).with_context(|| format!("suite {suite}"))?);
    }
    apply(&mut checks, overrides);
    let all_passed = checks.iter().all(Check::passed);

    let rows: Vec<Vec<String>> = checks
        .iter()
        .map(|c| {
            let op = match c.comparison {
                Comparison::AtMost => "<=",
                Comparison::AtLeast => ">=",
            };
            vec![
                c.suite.to_string(),
                c.name.clone(),
                sci(c.value),
                format!("{op} {}", sci(c.bound)),
                if c.passed() { "pass" } else { "FAIL" }.into(),
            ]
        })
        .collect();
    let mut text = table(&["suite", "check", "value", "tolerance", "result"], &rows);
    let failed = checks.iter().filter(|c| !c.passed()).count();
    text += &format!("\n{} checks, {failed} failed\n", checks.len());

    let mut bundle = Bundle::default();
    bundle.add("verify.txt", text);
    bundle.add_json(
        "verify.json",
        &json!({
            "passed": all_passed,
            "checks": checks.iter().map(|c| json!({
                "suite": c.suite.name(),
                "check": c.name,
                "value": c.value,
                "bound": c.bound,
                "comparison": match c.comparison {
                    Comparison::AtMost => "at_most",
                    Comparison::AtLeast => "at_least",
                },
                "passed": c.passed(),
            })).collect::<Vec<_>>(),
        }),
    )?;
    Ok((bundle, all_passed))
}
