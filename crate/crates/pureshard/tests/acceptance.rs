//! Acceptance run: one line per criterion, exit status 1 if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use pureshard::arrangement::Family;
use pureshard::verify::{run_suite, Options, Status, VerificationReport};
use serde_json::{json, Value};

type Criterion<'a> = (&'static str, Duration, Box<dyn Fn() -> Outcome + 'a>);

struct Outcome {
    ok: bool,
    note: String,
}

fn suites(names: &[&str], opts: &Options) -> Result<Vec<VerificationReport>, String> {
    names.iter().map(|s| run_suite(s, opts).map_err(|e| e.to_string())).collect()
}

fn summarize(reports: &[VerificationReport]) -> Outcome {
    let total: usize = reports.iter().map(|r| r.checks.len()).sum();
    let failed: Vec<String> = reports.iter().flat_map(|r| r.failures().map(|c| format!("{} observed {} expected {}", c.id, c.observed, c.expected))).collect();
    Outcome { ok: failed.is_empty() && total > 0, note: if failed.is_empty() { format!("{total} checks") } else { failed.join("; ") } }
}

fn observed(reports: &[VerificationReport], id: &str) -> Option<Value> {
    reports.iter().flat_map(|r| r.checks.iter()).find(|c| c.id == id && c.status != Status::Error).map(|c| c.observed.clone())
}

fn require(out: &mut Outcome, reports: &[VerificationReport], id: &str, want: Value) {
    let got = observed(reports, id);
    if got.as_ref() != Some(&want) {
        out.ok = false;
        out.note.push_str(&format!("; {id} observed {got:?} wanted {want}"));
    }
}

fn detail(reports: &[VerificationReport], id: &str) -> Option<Value> {
    reports.iter().flat_map(|r| r.checks.iter()).find(|c| c.id == id).map(|c| c.detail.clone())
}

fn run(opts: &Options, names: &[&str], extra: impl FnOnce(&[VerificationReport], &mut Outcome)) -> Outcome {
    match suites(names, opts) {
        Ok(reports) => {
            let mut out = summarize(&reports);
            extra(&reports, &mut out);
            out
        }
        Err(e) => Outcome { ok: false, note: e },
    }
}

fn dihedral_and_a3() -> Vec<Family> {
    vec![Family::I2(3), Family::I2(4), Family::I2(5), Family::I2(6), Family::A(3)]
}

fn main() -> ExitCode {
    let base = Options::default();
    let with = |fams: Vec<Family>| Options { families: Some(fams), ..Options::default() };
    let criteria: Vec<Criterion> = vec![
        (
            "rank-2 interval census for m = 3..7",
            Duration::from_secs(10),
            Box::new(|| run(&base, &["rank2"], |_, _| {})),
        ),
        (
            "A3 interval: 152 elements, 588 chains, not a lattice",
            Duration::from_secs(60),
            Box::new(|| {
                run(&base, &["a3-interval"], |r, out| {
                    require(out, r, "a3-interval.A3.elements", json!(152));
                    require(out, r, "a3-interval.A3.chains", json!(588));
                    require(out, r, "a3-interval.A3.lattice", json!(false));
                    require(out, r, "a3-interval.A3.lattice-witness", json!(true));
                })
            }),
        ),
        (
            "shard loops depend only on the shard crossed",
            Duration::from_secs(60),
            Box::new(|| {
                run(&with(dihedral_and_a3()), &["shard-loops"], |r, out| {
                    require(out, r, "shard-loops.I2(4).classes", json!(6));
                    require(out, r, "shard-loops.A3.classes", json!(11));
                    require(out, r, "shard-loops.A3.join-irreducibles", json!(11));
                    let edges = |id: &str| detail(r, id).and_then(|d| d.get("edges").cloned());
                    if edges("shard-loops.I2(4).classes") != Some(json!(8)) || edges("shard-loops.A3.classes") != Some(json!(36)) {
                        out.ok = false;
                        out.note.push_str("; unexpected cover edge counts");
                    }
                })
            }),
        ),
        (
            "Ω is an order-reversing involution",
            Duration::from_secs(30),
            Box::new(|| run(&with(dihedral_and_a3()), &["omega"], |_, _| {})),
        ),
        (
            "Crackle embeds the shard intersection order",
            Duration::from_secs(60),
            Box::new(|| {
                run(&with(dihedral_and_a3()), &["crackle"], |r, out| {
                    require(out, r, "crackle.I2(4).ranks", json!([0, 1, 1, 1, 1, 1, 1, 4]));
                })
            }),
        ),
        (
            "Snap embedding and braid conjugate classes",
            Duration::from_secs(60),
            Box::new(|| {
                let mut fams = dihedral_and_a3();
                fams.push(Family::B(3));
                run(&with(fams), &["snap", "conj", "inv"], |r, out| {
                    require(out, r, "inv.A3.example", json!(["(12)", "(13)", "(14)", "(34)", "(34)", "(14)", "(13)"]));
                    require(out, r, "conj.I2(4).classes", json!(6));
                    require(out, r, "conj.A3.classes", json!(11));
                })
            }),
        ),
        (
            "Pow embeds the weak order",
            Duration::from_secs(30),
            Box::new(|| run(&with(dihedral_and_a3()), &["pow"], |_, _| {})),
        ),
        (
            "Pow does not depend on the minimal gallery",
            Duration::from_secs(30),
            Box::new(|| run(&with(vec![Family::A(3)]), &["pow-gallery"], |_, _| {})),
        ),
        (
            "sortable elements and noncrossing partitions",
            Duration::from_secs(60),
            Box::new(|| {
                run(&with(dihedral_and_a3()), &["nc"], |r, out| {
                    for c in ["s1s2s3", "s2s1s3", "s1s3s2", "s3s2s1"] {
                        if let Some(v) = observed(r, &format!("nc.A3.{c}.sortables")) {
                            if v != json!(14) {
                                out.ok = false;
                                out.note.push_str(&format!("; |Sort(S4, {c})| = {v}"));
                            }
                        }
                    }
                    if observed(r, "nc.I2(4).noncrossing-shards").is_none() {
                        out.ok = false;
                        out.note.push_str("; noncrossing shard check missing");
                    }
                })
            }),
        ),
        (
            "property suites",
            Duration::from_secs(300),
            Box::new(|| {
                let fams = vec![Family::I2(3), Family::I2(4), Family::I2(5), Family::A(3)];
                run(&Options { samples: 10_000, ..with(fams) }, &["properties"], |r, out| {
                    require(out, r, "properties.A3.loop-associativity", json!(0));
                    require(out, r, "properties.I2(5).gallery-normal-form-vs-flips", json!(0));
                })
            }),
        ),
    ];
    let mut all = true;
    for (i, (name, budget, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = f();
        let elapsed = start.elapsed();
        all &= out.ok;
        let verdict = if out.ok { "PASS" } else { "FAIL" };
        let slow = if elapsed > *budget { format!(", over the {}s target", budget.as_secs()) } else { String::new() };
        println!("criterion {:>2} {verdict}: {name} ({:.1}s{slow}; {})", i + 1, elapsed.as_secs_f64(), out.note);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
