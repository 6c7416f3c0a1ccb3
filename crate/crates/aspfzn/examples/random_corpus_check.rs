//! Verifies the translation on a seeded corpus of random programs and
//! reports the verdict distribution. An optional first argument sets the
//! corpus size (default 100), an optional second the base seed.
//!
//! Run with: cargo run --example random_corpus_check -- 200 7

use aspfzn::oracle::{check_correspondence, Verdict, DEFAULT_CAP};
use aspfzn::random::{random_program, rng_from_seed, ProgramConfig};
use aspfzn::TranslateOptions;

fn main() {
    let mut args = std::env::args().skip(1);
    let count: usize = args.next().map_or(100, |s| s.parse().expect("count"));
    let seed: u64 = args.next().map_or(1, |s| s.parse().expect("seed"));

    let cfg = ProgramConfig::default();
    let mut rng = rng_from_seed(seed);
    let mut one_to_one = [0usize; 2];
    let mut projection = [0usize; 2];
    for i in 0..count {
        let (p, spec) = random_program(&mut rng, &cfg);
        for (k, strict) in [(0, true), (1, false)] {
            let verdict =
                check_correspondence(&p, &spec, TranslateOptions { strict }, DEFAULT_CAP)
                    .unwrap();
            match verdict {
                Verdict::OneToOne => one_to_one[k] += 1,
                Verdict::ProjectionEqual => projection[k] += 1,
                Verdict::Mismatch { .. } => {
                    eprintln!("mismatch on instance {i} (strict={strict}):");
                    eprintln!("{}", p.to_aspif_text());
                    std::process::exit(1);
                }
            }
        }
    }
    println!("checked {count} random programs, no mismatches");
    println!("  strict:     {} one-to-one, {} projection-equal", one_to_one[0], projection[0]);
    println!("  non-strict: {} one-to-one, {} projection-equal", one_to_one[1], projection[1]);
}
