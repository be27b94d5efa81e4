//! Writes the named fixtures as JSON files into the given directory
//! (default `fixtures/`).

use std::fs;
use std::path::PathBuf;

use prym_core::enumerate::generic_towers;
use prym_core::fixtures::{covers, graphs};
use prym_core::graph::json::graph_to_json;
use prym_core::oracle::Gram;

fn write(dir: &PathBuf, name: &str, v: &serde_json::Value) {
    let path = dir.join(format!("{name}.json"));
    fs::write(&path, serde_json::to_string_pretty(v).unwrap() + "\n").unwrap();
    println!("{}", path.display());
}

fn main() {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "fixtures".into()));
    fs::create_dir_all(dir.join("graphs")).unwrap();
    fs::create_dir_all(dir.join("covers")).unwrap();
    fs::create_dir_all(dir.join("towers")).unwrap();
    fs::create_dir_all(dir.join("grams")).unwrap();
    for (name, g) in graphs() {
        write(&dir.join("graphs"), name, &graph_to_json(&g));
    }
    for (name, c) in covers() {
        write(&dir.join("covers"), name, &c.to_json());
    }
    // first tower of each small genus, and the first genus-3 tower with an FS2 set
    for g in [2, 3] {
        let (_, towers) = generic_towers(g).unwrap();
        write(&dir.join("towers"), &format!("genus{g}"), &towers[0].to_json());
        if g == 3 {
            let t = towers
                .iter()
                .find(|t| !prym_core::matroid::fs_sets(&t.cover, 2).is_empty())
                .unwrap();
            write(&dir.join("towers"), "genus3-fs2", &t.to_json());
        }
    }
    let grams = [
        ("segment4", Gram::from_ints(&[&[4]])),
        ("square", Gram::from_ints(&[&[1, 0], &[0, 1]])),
        ("hexagonal", Gram::from_ints(&[&[2, -1], &[-1, 2]])),
    ];
    for (name, g) in grams {
        write(&dir.join("grams"), name, &g.unwrap().to_json());
    }
}
