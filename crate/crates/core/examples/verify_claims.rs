//! Runs the claim checkers and summarizes verdicts per claim.

use std::collections::BTreeMap;

use gf2perfect::verify::{self, Verdict, VerifyConfig};

fn main() -> gf2perfect::Result<()> {
    let reports = verify::run(&VerifyConfig::new(6, 30))?;
    let mut summary: BTreeMap<&str, [usize; 3]> = BTreeMap::new();
    for r in &reports {
        let slot = match r.verdict {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::OutOfScope => 2,
        };
        summary.entry(&r.claim_id).or_default()[slot] += 1;
    }
    println!("{:<32} {:>5} {:>5} {:>6}", "claim", "pass", "fail", "scope");
    for (claim, [pass, fail, oos]) in summary {
        println!("{claim:<32} {pass:>5} {fail:>5} {oos:>6}");
    }

    let one = verify::run(&VerifyConfig {
        claim: Some(verify::claims::U_SPLIT_SQUARE.into()),
        ..VerifyConfig::new(3, 3)
    })?;
    for r in one {
        println!("{}", r.to_json_line());
    }
    Ok(())
}
