//! Acceptance criteria, one PASS or FAIL line each. The fixture criteria
//! drive the `elrepair` binary; the reasoner criteria use the library with
//! independent reference computations.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpStream;
use std::path::Path;
use std::process::{Child, Command, Stdio};
use std::time::{Duration, Instant};

use elrepair_core::corpus::{random_atomic_tbox, random_nested_tbox, random_normalized_tbox, random_signature};
use elrepair_core::fixture::{mini_galen_tbox, MINI_GALEN_ORACLE};
use elrepair_core::normalize::normalize_tbox;
use elrepair_core::reasoner::{entails, saturate, scc, scc_size};
use elrepair_core::{Axiom, Concept, TBox};
use serde_json::{json, Value};

type Check = Result<String, String>;

const BIN: &str = env!("CARGO_BIN_EXE_elrepair");

fn elrepair(args: &[&str]) -> Result<String, String> {
    let out = Command::new(BIN).args(args).output().map_err(|e| format!("cannot run elrepair: {e}"))?;
    let code = out.status.code().unwrap_or(-1);
    let stdout = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
    if code != 0 {
        return Err(format!("exit {code}: {}", String::from_utf8_lossy(&out.stderr).trim()));
    }
    Ok(stdout)
}

fn json_of(text: &str) -> Result<Value, String> {
    serde_json::from_str(text).map_err(|e| format!("bad report: {e}"))
}

fn repair(strategy: &str) -> Result<Value, String> {
    let start = Instant::now();
    let out = elrepair(&["repair", "--fixture", "mini-galen", "--strategy", strategy])?;
    if start.elapsed() > Duration::from_secs(1) {
        return Err(format!("{strategy} took {:?}", start.elapsed()));
    }
    json_of(&out)
}

fn sizes(v: &Value, key: &str) -> Vec<u64> {
    v[key].as_array().map(|a| a.iter().filter_map(Value::as_u64).collect()).unwrap_or_default()
}

fn axioms(v: &Value, key: &str) -> BTreeSet<String> {
    v[key].as_array().map(|a| a.iter().filter_map(|s| s.as_str().map(str::to_string)).collect()).unwrap_or_default()
}

fn set(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn expect<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, want {want:?}"))
    }
}

const PPR_NPR: &str = "PPr SubClassOf NPr";
const IPR_NPR: &str = "IPr SubClassOf NPr";
const IPR_PPR: &str = "IPr SubClassOf PPr";

fn weakening_row(strategy: &str, sup: &[u64], sub: &[u64], weakened: &[&str]) -> Result<(), String> {
    let r = repair(strategy)?;
    expect(&format!("{strategy} sup"), sizes(&r, "sup_sizes"), sup.to_vec())?;
    expect(&format!("{strategy} sub"), sizes(&r, "sub_sizes"), sub.to_vec())?;
    expect(&format!("{strategy} weakened"), axioms(&r, "weakened"), set(weakened))?;
    expect(&format!("{strategy} valid"), r["repair_valid"].as_bool(), Some(true))
}

fn c1() -> Check {
    weakening_row("C1", &[3, 2, 4], &[2, 3, 1], &[PPR_NPR, IPR_NPR])?;
    Ok("C1 sup (3,2,4), sub (2,3,1), weakened {PPr⊑NPr, IPr⊑NPr}".into())
}

fn c2() -> Check {
    weakening_row("C2", &[3, 2, 2], &[2, 1, 1], &[PPR_NPR, IPR_NPR])?;
    Ok("C2 sup (3,2,2), sub (2,1,1), weakened {PPr⊑NPr, IPr⊑NPr}".into())
}

fn c3_c4() -> Check {
    weakening_row("C3", &[1, 2, 1], &[1, 1, 1], &[IPR_NPR])?;
    weakening_row("C4", &[1, 2, 1], &[1, 1, 1], &[IPR_NPR])?;
    Ok("C3 and C4 sup (1,2,1), sub (1,1,1), weakened {IPr⊑NPr}".into())
}

fn c4_orders() -> Check {
    let out = elrepair(&["permute", "--fixture", "mini-galen", "--strategy", "C4"])?;
    let doc = json_of(&out)?;
    let runs = doc["runs"].as_array().ok_or("no runs")?;
    expect("orders", runs.len(), 6)?;
    let by_order: BTreeMap<Vec<u64>, &Value> = runs.iter().map(|r| (sizes(r, "order"), r)).collect();
    let both = [IPR_NPR, PPR_NPR];
    type Column<'a> = (&'a [u64], Option<&'a [u64]>, &'a [&'a str]);
    let cases: [Column; 5] = [
        (&[1, 2, 3], Some(&[1, 2, 1]), &[IPR_NPR]),
        (&[2, 1, 3], Some(&[2, 2, 2]), &both),
        (&[2, 3, 1], Some(&[2, 2, 1]), &both),
        (&[3, 1, 2], Some(&[1, 2, 1]), &[IPR_NPR]),
        (&[3, 2, 1], None, &both),
    ];
    for (order, sup, weakened) in cases {
        let r = by_order.get(order).ok_or(format!("order {order:?} missing"))?;
        if let Some(sup) = sup {
            expect(&format!("sup for {order:?}"), sizes(r, "sup_sizes"), sup.to_vec())?;
        }
        expect(&format!("weakened for {order:?}"), axioms(r, "weakened"), set(weakened))?;
    }
    Ok("C4 over all orders matches the four pinned columns; ③②① weakened set matches".into())
}

fn c9_c10() -> Check {
    let r = repair("C9")?;
    expect("C9 completion sup", sizes(&r, "completion_sup_sizes"), vec![1, 1])?;
    expect("C9 completion sub", sizes(&r, "completion_sub_sizes"), vec![2, 2])?;
    expect("C9 completed", axioms(&r, "completed"), set(&[PPR_NPR, IPR_NPR]))?;
    expect("C9 added", axioms(&r, "added"), set(&[PPR_NPR, IPR_NPR]))?;
    let r = repair("C10")?;
    expect("C10 completion sub", sizes(&r, "completion_sub_sizes"), vec![2, 3])?;
    expect("C10 added", axioms(&r, "added"), set(&[PPR_NPR, IPR_PPR]))?;
    Ok("C9 sup (1,1), sub (2,2), added {PPr⊑NPr, IPr⊑NPr}; C10 sub (2,3), added {PPr⊑NPr, IPr⊑PPr}".into())
}

fn scc_cardinality() -> Check {
    let t = mini_galen_tbox();
    expect("Mini-GALEN", scc(&t).len(), 54)?;
    for seed in 0..100 {
        let (t, n, k) = random_signature(seed, 12, 3);
        expect(&format!("seed {seed}"), scc(&t).len(), (n * n + n) / 2 + k * n)?;
        expect(&format!("seed {seed} formula"), scc_size(n, k), (n * n + n) / 2 + k * n)?;
    }
    Ok("|scc| = (n²+n)/2 + t·n on Mini-GALEN (54) and 100 random signatures".into())
}

fn corpus_check() -> Result<(Value, Duration), String> {
    let start = Instant::now();
    let out = elrepair(&["hasse-check", "--seed", "1", "--count", "100", "--fixture", "mini-galen"])?;
    Ok((json_of(&out)?, start.elapsed()))
}

fn validity(doc: &Value, elapsed: Duration) -> Check {
    expect("cases", doc["cases"].as_u64(), Some(101))?;
    expect("runs", doc["runs"].as_u64(), Some(101 * 13))?;
    let bad = doc["invalid_runs"].as_array().ok_or("no invalid_runs")?;
    if !bad.is_empty() {
        return Err(format!("{} invalid runs, first {}", bad.len(), bad[0]));
    }
    if elapsed >= Duration::from_secs(60) {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("13 strategies on Mini-GALEN and 100 random problems all verify ({:.1?})", elapsed))
}

fn lattice(doc: &Value) -> Check {
    let checks = doc["checks"].as_u64().ok_or("no checks")?;
    let bad = doc["violations"].as_array().ok_or("no violations")?;
    if checks == 0 {
        return Err("no checks ran".into());
    }
    if !bad.is_empty() {
        return Err(format!("{} violations, first {}", bad.len(), bad[0]));
    }
    Ok(format!("{checks} lattice checks on the same corpus, no violations"))
}

/// Reflexive-transitive closure over atomic edges.
fn closure(t: &TBox) -> BTreeSet<(String, String)> {
    let names: Vec<String> = t.signature().concepts.iter().map(|n| n.to_string()).collect();
    let mut reach: BTreeSet<(String, String)> = names.iter().map(|n| (n.clone(), n.clone())).collect();
    for a in t.axioms() {
        if let (Concept::Atomic(l), Concept::Atomic(r)) = (&a.lhs, &a.rhs) {
            reach.insert((l.to_string(), r.to_string()));
        }
    }
    for k in &names {
        for i in &names {
            for j in &names {
                if reach.contains(&(i.clone(), k.clone())) && reach.contains(&(k.clone(), j.clone())) {
                    reach.insert((i.clone(), j.clone()));
                }
            }
        }
    }
    reach
}

fn reasoner() -> Check {
    let mut pairs = 0;
    for seed in 0..200 {
        let t = random_atomic_tbox(seed, 15);
        let reach = closure(&t);
        for a in t.signature().concepts.iter() {
            for b in t.signature().concepts.iter() {
                let got = entails(&t, &Axiom::atomic(a.as_str(), b.as_str())).map_err(|e| e.to_string())?;
                let want = reach.contains(&(a.to_string(), b.to_string()));
                expect(&format!("seed {seed}: {a} ⊑ {b}"), got, want)?;
                pairs += 1;
            }
        }
    }
    for seed in 0..50 {
        let t = random_normalized_tbox(seed, 8, 2, 12);
        let s = saturate(&t).map_err(|e| e.to_string())?;
        let closed = t.add_axioms(&s.atomic_subsumptions()).map_err(|e| e.to_string())?;
        let again = saturate(&closed).map_err(|e| e.to_string())?;
        expect(&format!("seed {seed} idempotent"), again.subsumer_map(), s.subsumer_map())?;
        let more = random_normalized_tbox(seed + 1000, 8, 2, 3);
        let mut bigger = t.clone();
        bigger.extend_signature(more.signature());
        for a in more.axioms() {
            bigger.insert(a.clone());
        }
        let big = saturate(&bigger).map_err(|e| e.to_string())?.subsumer_map();
        for (c, ups) in s.subsumer_map() {
            let b = big.get(&c).ok_or(format!("seed {seed}: {c:?} lost"))?;
            if !b.is_superset(&ups) {
                return Err(format!("seed {seed}: subsumers of {c:?} shrank"));
            }
        }
    }
    Ok(format!("entails matches the closure on {pairs} pairs; saturation idempotent and monotone on 50 TBoxes"))
}

fn basic(c: &Concept) -> bool {
    matches!(c, Concept::Top | Concept::Atomic(_))
}

/// A ⊑ B, A1 ⊓ A2 ⊑ B, A ⊑ ∃r.B and ∃r.A ⊑ B over basic concepts.
fn normal_shape(a: &Axiom) -> bool {
    match (&a.lhs, &a.rhs) {
        (l, r) if basic(l) && basic(r) => true,
        (Concept::And(x, y), r) => basic(x) && basic(y) && basic(r),
        (l, Concept::Exists(_, b)) => basic(l) && basic(b),
        (Concept::Exists(_, b), r) => basic(b) && basic(r),
        _ => false,
    }
}

fn normalization() -> Check {
    let mut total = 0;
    for seed in 0..50 {
        let t = random_nested_tbox(seed, 6, 2, 6, 3);
        let n = normalize_tbox(&t);
        if let Some(bad) = n.axioms().find(|a| !normal_shape(a)) {
            return Err(format!("seed {seed}: {bad} is not normal"));
        }
        for a in t.axioms() {
            if !entails(&n, a).map_err(|e| e.to_string())? {
                return Err(format!("seed {seed}: {a} lost"));
            }
            total += 1;
        }
    }
    Ok(format!("50 nested TBoxes: all {total} axioms entailed, every output axiom in normal form"))
}

struct Server(Child);

impl Drop for Server {
    fn drop(&mut self) {
        let _ = self.0.kill();
        let _ = self.0.wait();
    }
}

fn http(addr: &str, method: &str, path: &str, body: Option<&Value>) -> Result<(u16, Vec<u8>), String> {
    let mut s = TcpStream::connect(addr).map_err(|e| e.to_string())?;
    let body = body.map(Value::to_string).unwrap_or_default();
    write!(
        s,
        "{method} {path} HTTP/1.1\r\nHost: {addr}\r\nConnection: close\r\nContent-Type: application/json\r\nContent-Length: {}\r\n\r\n{body}",
        body.len()
    )
    .map_err(|e| e.to_string())?;
    let mut raw = Vec::new();
    s.read_to_end(&mut raw).map_err(|e| e.to_string())?;
    let split = raw.windows(4).position(|w| w == b"\r\n\r\n").ok_or("no header end")?;
    let head = String::from_utf8_lossy(&raw[..split]).to_string();
    let status = head.split_whitespace().nth(1).and_then(|c| c.parse().ok()).ok_or("no status")?;
    let mut payload = raw[split + 4..].to_vec();
    if head.to_ascii_lowercase().contains("transfer-encoding: chunked") {
        payload = dechunk(&payload)?;
    }
    Ok((status, payload))
}

fn dechunk(mut data: &[u8]) -> Result<Vec<u8>, String> {
    let mut out = Vec::new();
    loop {
        let eol = data.windows(2).position(|w| w == b"\r\n").ok_or("bad chunk")?;
        let size = usize::from_str_radix(String::from_utf8_lossy(&data[..eol]).trim(), 16).map_err(|e| e.to_string())?;
        if size == 0 {
            return Ok(out);
        }
        out.extend_from_slice(&data[eol + 2..eol + 2 + size]);
        data = &data[eol + 4 + size..];
    }
}

fn equivalence(dir: &Path) -> Check {
    let report = dir.join("c9.json");
    let report_arg = report.to_str().ok_or("path")?;
    elrepair(&["repair", "--fixture", "mini-galen", "--strategy", "C9", "--report", report_arg])?;
    let cli = std::fs::read(&report).map_err(|e| e.to_string())?;

    let mut child = Command::new(BIN)
        .args(["serve", "--addr", "127.0.0.1:0"])
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .map_err(|e| e.to_string())?;
    let stdout = child.stdout.take().ok_or("no stdout")?;
    let server = Server(child);
    let mut line = String::new();
    BufReader::new(stdout).read_line(&mut line).map_err(|e| e.to_string())?;
    let addr = line.trim().strip_prefix("listening on ").ok_or(format!("unexpected banner '{line}'"))?.to_string();

    let create = json!({"fixture": "mini-galen", "strategy": "C9", "oracle": MINI_GALEN_ORACLE});
    let (status, body) = http(&addr, "POST", "/sessions", Some(&create))?;
    let v: Value = serde_json::from_slice(&body).map_err(|e| e.to_string())?;
    expect("create status", status, 201)?;
    let id = v["id"].as_str().ok_or("no id")?.to_string();
    let (status, body) = http(&addr, "POST", &format!("/sessions/{id}/start"), None)?;
    let v: Value = serde_json::from_slice(&body).map_err(|e| e.to_string())?;
    expect("start status", status, 200)?;
    expect("state", v["state"]["status"].as_str(), Some("done"))?;
    let (status, service) = http(&addr, "GET", &format!("/sessions/{id}/report"), None)?;
    expect("report status", status, 200)?;
    drop(server);
    if service != cli {
        return Err("service report differs from the command line report".into());
    }
    Ok(format!("auto-run C9 session report is byte-identical to the command line ({} bytes)", cli.len()))
}

fn main() {
    let dir = tempfile::tempdir().expect("temp dir");
    let corpus = corpus_check();
    let results: Vec<(u8, &str, Check)> = vec![
        (1, "C1 weakening", c1()),
        (2, "C2 weakening", c2()),
        (3, "C3/C4 weakening", c3_c4()),
        (4, "C4 order sweep", c4_orders()),
        (5, "C9/C10 completion", c9_c10()),
        (6, "SCC cardinality", scc_cardinality()),
        (7, "repair validity", corpus.as_ref().map_err(Clone::clone).and_then(|(d, t)| validity(d, *t))),
        (8, "lattice properties", corpus.as_ref().map_err(Clone::clone).and_then(|(d, _)| lattice(d))),
        (9, "reasoner equivalence", reasoner()),
        (10, "normalization", normalization()),
        (11, "command line and service agree", equivalence(dir.path())),
    ];
    let mut failed = Vec::new();
    for (n, name, r) in &results {
        match r {
            Ok(detail) => println!("PASS {n:>2} {name}: {detail}"),
            Err(why) => {
                println!("FAIL {n:>2} {name}: {why}");
                failed.push(*n);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
