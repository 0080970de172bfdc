//! The relation tables as rewrite rules: applying one instance, finding
//! the instance between two words, and replaying a derived rule over the
//! defining relations.

use std::fmt::Write;

use domega::words::{
    apply_rule, derived_rule_derivation, find_instance, rule, rule_table, Direction, RuleInstance, Subst, Word,
};

pub fn run_example() -> domega::Result<String> {
    let mut out = String::new();
    writeln!(out, "{} defining relations in dimension 4", rule_table(4).len()).unwrap();
    writeln!(out, "rule 18: {}", rule(18)?).unwrap();

    let w: Word = "w[3] H[1,2] X[1,2]".parse()?;
    let step = RuleInstance::new(18, Direction::LR, 1, Subst::jk(1, 2));
    let v = apply_rule(&w, &step)?;
    writeln!(out, "{w}  --[{step}]-->  {v}").unwrap();
    writeln!(out, "recovered: {}", find_instance(&w, &v, 20).map(|s| s.to_string()).unwrap_or_default()).unwrap();

    let d = derived_rule_derivation(23, Subst::jk(1, 2))?;
    d.check()?;
    writeln!(out, "rule 23 at j=1,k=2: {} steps over rules 1-{}", d.steps.len(), d.max_rule()).unwrap();
    Ok(out)
}

#[allow(dead_code)]
fn main() -> domega::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
