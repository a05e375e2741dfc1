//! The S3 pattern algebra: window encoding, composition, transcripts,
//! distances, and transition feasibility.
//!
//! Run with: cargo run --release --example pattern_algebra

use ordchart::pattern::{
    cayley_distance, is_feasible_transition, kendall_distance, transcript, Pattern, Window3,
};

fn main() {
    println!("windows and their patterns");
    for values in [
        [1.0, 2.0, 3.0],
        [0.5, -1.2, 0.1],
        [1.0, 1.0, 0.5], // tie: the earlier position sorts first
        [3.0, 1.0, 2.0],
    ] {
        let window = Window3::new(values).unwrap();
        println!(
            "  {values:?} -> {} (index {}, ties: {})",
            window.pattern(),
            window.pattern().index(),
            window.has_tie()
        );
    }

    println!("\ntranscript table: rows = source, columns = target");
    print!("        ");
    for target in Pattern::ALL {
        print!("{target}  ");
    }
    println!();
    for source in Pattern::ALL {
        print!("{source} ");
        for target in Pattern::ALL {
            print!("{}  ", transcript(source, target));
        }
        println!();
    }

    println!("\ndistances from the identity");
    let id = Pattern::from_index(1).unwrap();
    for p in Pattern::ALL {
        println!(
            "  d_K({id}, {p}) = {}   d_C({id}, {p}) = {}   inversions({p}) = {}   cycles({p}) = {}",
            kendall_distance(id, p),
            cayley_distance(id, p),
            p.inversions(),
            p.cycles()
        );
    }

    let feasible: Vec<(Pattern, Pattern)> = Pattern::ALL
        .iter()
        .flat_map(|&a| Pattern::ALL.iter().map(move |&b| (a, b)))
        .filter(|&(a, b)| is_feasible_transition(a, b))
        .collect();
    println!(
        "\n{} of 36 consecutive-pattern transitions are feasible in a real stream;",
        feasible.len()
    );
    println!(
        "for example {} -> {} cannot occur, while {} -> {} can.",
        Pattern::from_index(1).unwrap(),
        Pattern::from_index(3).unwrap(),
        Pattern::from_index(1).unwrap(),
        Pattern::from_index(1).unwrap(),
    );
}
