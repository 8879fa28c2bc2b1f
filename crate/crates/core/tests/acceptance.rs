//! Runs the nine acceptance criteria and prints one line for each.
//! `GEOCUR_CRITERIA=1,4` restricts the run; `GEOCUR_SEED` changes the seed.

use geocur::verify;

fn main() {
    let seed = std::env::var("GEOCUR_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(20_240_601);
    let ids: Vec<u8> = match std::env::var("GEOCUR_CRITERIA") {
        Ok(s) => s.split(',').filter_map(|x| x.trim().parse().ok()).collect(),
        Err(_) => verify::CRITERIA.iter().map(|c| c.0).collect(),
    };
    let mut failed = 0;
    for id in ids {
        let r = verify::run_criterion(id, seed);
        println!("{r}");
        if !r.passed {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
