//! Mutated documents must yield a task or a structured error, never a panic.

use std::fs;

use porplan::{parse_sas, SasError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn mutate(rng: &mut ChaCha8Rng, text: &str) -> String {
    let mut lines: Vec<String> = text.lines().map(str::to_owned).collect();
    for _ in 0..rng.gen_range(1..=3) {
        let i = rng.gen_range(0..lines.len());
        match rng.gen_range(0..6) {
            0 => {
                lines.remove(i);
            }
            1 => lines.insert(i, lines[i].clone()),
            2 => lines[i] = rng.gen_range(-3i64..20).to_string(),
            3 => lines[i].push_str(" 7"),
            4 => lines[i] = "begin_operator".into(),
            _ => {
                let cut = rng.gen_range(0..=lines[i].len());
                lines[i].truncate(cut);
            }
        }
        if lines.is_empty() {
            break;
        }
    }
    lines.join("\n")
}

#[test]
fn mutations_produce_structured_errors() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");
    let docs: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| fs::read_to_string(e.unwrap().path()).unwrap())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut errors = 0;
    for k in 0..2000 {
        let doc = mutate(&mut rng, &docs[k % docs.len()]);
        match parse_sas(&doc) {
            Ok(task) => assert_eq!(parse_sas(&porplan::emit_sas(&task)).unwrap(), task),
            Err(e) => {
                errors += 1;
                assert!(e.line() >= 1, "{e}");
                assert!(!e.to_string().is_empty());
                let _: &SasError = &e;
            }
        }
    }
    assert!(errors > 1000);
}
