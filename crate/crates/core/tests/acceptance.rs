//! Acceptance run: one PASS/FAIL line per criterion. Set VSC_EXTENDED=1 to
//! include the d = 5, 6 disk values.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use vsc_core::algebra::{format_rational, parse_rational, BigRational, Exps, GradedSeries, HalfInt};
use vsc_core::gf::gf_closed;
use vsc_core::iritani::iritani_pipeline;
use vsc_core::mirror::{
    cp2_closed_numbers, disk_h2_invariant, gw_closed_with, inverse_on_slice, kontsevich_numbers, mirror_map_closed,
};
use vsc_core::open::OpenTruncationPolicy;
use vsc_core::verify::{run_suite, Suite, VerifyOptions};
use vsc_core::{Evaluator, Model};

type Outcome = Result<Vec<String>, String>;

fn r(s: &str) -> BigRational {
    parse_rational(s).unwrap_or_else(|| panic!("bad literal {s}"))
}

fn exps(s: &GradedSeries, mono: &[(&str, u16)]) -> Exps {
    let mut e: Exps = smallvec::smallvec![0; s.space().len()];
    for &(name, k) in mono {
        e[s.space().index_of(name).unwrap_or_else(|| panic!("no variable {name}"))] = k;
    }
    e
}

/// Compares reference coefficients, collecting every mismatch.
fn expect(label: &str, s: &GradedSeries, terms: &[(i64, &[(&str, u16)], &str)], errors: &mut Vec<String>) -> usize {
    for (q, mono, want) in terms {
        let got = s.coeff(HalfInt::from_int(*q), &exps(s, mono));
        if got != r(want) {
            errors.push(format!("{label} q^{q} {mono:?}: got {} want {want}", format_rational(&got)));
        }
    }
    terms.len()
}

fn finish(errors: Vec<String>, summary: String) -> Outcome {
    if errors.is_empty() {
        Ok(vec![summary])
    } else {
        Err(errors.join("; "))
    }
}

fn criterion_1(ev: &Evaluator) -> Outcome {
    let map = mirror_map_closed(ev, &Model::cp2(), 5, 2).map_err(|e| e.to_string())?;
    let mut errors = Vec::new();
    let mut n = 0;
    n += expect(
        "t2",
        map.component(1),
        &[
            (0, &[("x2", 1)], "1"),
            (1, &[("x2", 4)], "1/4"),
            (2, &[("x2", 7)], "33/70"),
            (3, &[("x2", 10)], "16589/12600"),
            (4, &[("x2", 13)], "143698921/32432400"),
            (5, &[("x2", 16)], "75631936691/4540536000"),
        ],
        &mut errors,
    );
    n += expect(
        "t1 - x1",
        map.shift(),
        &[
            (1, &[("x2", 3)], "1/2"),
            (2, &[("x2", 6)], "7/10"),
            (3, &[("x2", 9)], "2593/1512"),
            (4, &[("x2", 12)], "2668063/498960"),
            (5, &[("x2", 15)], "120501923/6306300"),
        ],
        &mut errors,
    );
    n += expect(
        "t0",
        map.component(0),
        &[
            (0, &[("x0", 1)], "1"),
            (1, &[("x2", 2)], "1/2"),
            (2, &[("x2", 5)], "8/15"),
            (3, &[("x2", 8)], "983/840"),
            (4, &[("x2", 11)], "4283071/1247400"),
            (5, &[("x2", 14)], "4019248213/340540200"),
        ],
        &mut errors,
    );
    finish(errors, format!("{n} mirror-map coefficients exact through q^5"))
}

fn criterion_2(ev: &Evaluator) -> Outcome {
    let cp2 = Model::cp2();
    let map = mirror_map_closed(ev, &cp2, 5, 2).map_err(|e| e.to_string())?;
    let inv = inverse_on_slice(&map, &[]).map_err(|e| e.to_string())?;
    let hh = gw_closed_with(ev, &cp2, 1, 1, 5, 2, &inv).map_err(|e| e.to_string())?;
    let h2h2 = gw_closed_with(ev, &cp2, 2, 2, 5, 2, &inv).map_err(|e| e.to_string())?;
    let mut errors = Vec::new();
    let hh_want = ["1/2", "1/30", "3/1120", "31/124740", "1559/62270208"];
    let h2_want = ["1", "1/6", "1/60", "31/18144", "1559/8553600"];
    for d in 1..=5u16 {
        expect("<hh>", &hh.series, &[(d as i64, &[("t2", 3 * d - 1)], hh_want[d as usize - 1])], &mut errors);
        expect("<h2h2>", &h2h2.series, &[(d as i64, &[("t2", 3 * d - 3)], h2_want[d as usize - 1])], &mut errors);
    }
    let extracted = cp2_closed_numbers(&h2h2, 5).map_err(|e| e.to_string())?;
    let recursion: Vec<BigRational> = kontsevich_numbers(5).into_iter().map(BigRational::from_integer).collect();
    let expected: Vec<BigRational> = ["1", "1", "12", "620", "87304"].iter().map(|s| r(s)).collect();
    if extracted != recursion || extracted != expected {
        errors.push(format!("N_d extracted {extracted:?} recursion {recursion:?}"));
    }
    finish(errors, "10 series coefficients exact; N_d = 1, 1, 12, 620, 87304 satisfy the recursion".into())
}

fn criterion_3(ev: &Evaluator) -> Outcome {
    let mut want = vec!["2", "-9/4", "3361/32", "-5784805/256"];
    let extended = std::env::var("VSC_EXTENDED").is_ok_and(|v| v == "1");
    if extended {
        want.extend(["28104787833/2048", "-291021328876469/16384"]);
    }
    let mut errors = Vec::new();
    let mut got = Vec::new();
    for (i, w) in want.iter().enumerate() {
        let d = i as u32 + 1;
        let v = disk_h2_invariant(ev, d, &OpenTruncationPolicy::for_degree(d)).map_err(|e| e.to_string())?;
        if v != r(w) {
            errors.push(format!("d={d}: got {} want {w}", format_rational(&v)));
        }
        got.push(format_rational(&v));
    }
    let note = if extended { "" } else { " (d = 5, 6 need VSC_EXTENDED=1)" };
    finish(errors, format!("disk table {}{note}", got.join(", ")))
}

fn suite_outcome(ev: &Evaluator, suites: &[Suite], opts: &VerifyOptions) -> Outcome {
    let mut lines = Vec::new();
    let mut failures = Vec::new();
    for &s in suites {
        let checks = run_suite(ev, s, opts).map_err(|e| format!("{s}: {e}"))?;
        let bad: Vec<_> = checks.iter().filter(|c| !c.pass).collect();
        lines.push(format!("{s}: {}/{} checks", checks.len() - bad.len(), checks.len()));
        failures.extend(bad.iter().map(|c| format!("{} {}: {}", c.suite, c.name, c.detail)));
    }
    if failures.is_empty() {
        Ok(lines)
    } else {
        Err(failures.join("; "))
    }
}

fn criterion_4(ev: &Evaluator) -> Outcome {
    suite_outcome(ev, &[Suite::Oracle], &VerifyOptions::default())
}

fn criterion_5(ev: &Evaluator) -> Outcome {
    let m89 = Model::m89();
    let map = mirror_map_closed(ev, &m89, 3, 6).map_err(|e| e.to_string())?;
    let mut errors = Vec::new();
    let mut n = 0;
    let pos = |j: usize| [0usize, 0, 1, 2, 3, 4, 5][j];
    if !map.shift().is_zero() {
        errors.push(format!("t1 - x1 = {}", map.shift().pretty()));
    }
    n += expect("t0", map.component(pos(0)), &[(0, &[("x0", 1)], "1"), (1, &[], "0")], &mut errors);
    n += expect("t2", map.component(pos(2)), &[(1, &[], "34138908")], &mut errors);
    n += expect(
        "t3",
        map.component(pos(3)),
        &[(1, &[("x2", 1)], "124995960"), (2, &[], "8404934443598718")],
        &mut errors,
    );
    n += expect(
        "t4",
        map.component(pos(4)),
        &[
            (1, &[("x3", 1)], "249752241"),
            (1, &[("x2", 2)], "340609293/2"),
            (2, &[("x2", 1)], "123644755203321141/2"),
            (3, &[], "3815933053700462506215462"),
        ],
        &mut errors,
    );
    n += expect(
        "t5",
        map.component(pos(5)),
        &[
            (1, &[("x4", 1)], "340609293"),
            (1, &[("x3", 1), ("x2", 1)], "556222626"),
            (1, &[("x2", 3)], "257278653/2"),
            (2, &[("x3", 1)], "113932607554152477"),
            (2, &[("x2", 2)], "321886193235880779/2"),
            (3, &[("x2", 1)], "33258838601987300311771653"),
        ],
        &mut errors,
    );
    n += expect(
        "t6",
        map.component(pos(6)),
        &[
            (1, &[("x5", 1)], "374748201"),
            (1, &[("x4", 1), ("x2", 1)], "681218586"),
            (1, &[("x3", 2)], "805974867/2"),
            (1, &[("x3", 1), ("x2", 2)], "556222626"),
            (1, &[("x2", 4)], "257278653/4"),
            (2, &[("x4", 1)], "139268745219642741"),
            (2, &[("x3", 1), ("x2", 1)], "472782967773195564"),
            (2, &[("x2", 3)], "223674801935251734"),
            (3, &[("x3", 1)], "48918351923402413916303613"),
            (3, &[("x2", 2)], "106098778427559977884727547"),
        ],
        &mut errors,
    );
    let ninth = r("1/9");
    let whh = gf_closed(ev, &m89, 1, 1, 3, 6).map_err(|e| e.to_string())?.scale(&ninth);
    n += expect(
        "whh",
        &whh,
        &[
            (0, &[("x4", 1)], "1"),
            (1, &[("x3", 1)], "306470385"),
            (1, &[("x2", 2)], "215613333"),
            (2, &[("x2", 1)], "89761934928094677"),
            (3, &[], "6297488499797163519141951"),
        ],
        &mut errors,
    );
    let inv = inverse_on_slice(&map, &[]).map_err(|e| e.to_string())?;
    let ghh = gw_closed_with(ev, &m89, 1, 1, 3, 6, &inv).map_err(|e| e.to_string())?.series.scale(&ninth);
    n += expect(
        "ghh",
        &ghh,
        &[
            (0, &[("t4", 1)], "1"),
            (1, &[("t2", 2)], "90617373/2"),
            (1, &[("t3", 1)], "56718144"),
            (2, &[("t2", 1)], "35512880615374365/2"),
            (3, &[], "1345851991844128981741851"),
        ],
        &mut errors,
    );
    finish(errors, format!("{n} mirror-map, whh and ghh coefficients exact"))
}

fn criterion_6(ev: &Evaluator) -> Outcome {
    let res = iritani_pipeline(ev, 5, 16).map_err(|e| e.to_string())?;
    let mut errors = Vec::new();
    let y2 = |k: u16| [("y2", k)];
    let mut n = 0;
    let tables: [(&str, &GradedSeries, [&str; 5], u16); 3] = [
        ("(C1)11", &res.c1[0][0], ["-1/2", "13/15", "-3167/840", "44552/2079", "-450037373/3243240"], 2),
        ("(C1)21", &res.c1[1][0], ["1/6", "-11/15", "229/56", "-775267/29700", "233170937/1289925"], 3),
        ("(C1)31", &res.c1[2][0], ["-5/12", "1241/630", "-47977/4200", "201402797/2702700", "-475054027589/908107200"], 4),
    ];
    for (label, s, vals, base) in tables {
        for (i, v) in vals.iter().enumerate() {
            let k = base + 3 * i as u16;
            n += expect(label, s, &[(i as i64 + 1, &y2(k), v)], &mut errors);
        }
    }
    n += expect("(C1)21", &res.c1[1][0], &[(0, &[], "1")], &mut errors);
    let maps: [(&str, &GradedSeries, [&str; 5], u16); 3] = [
        ("t0", res.map.component(0), ["-1/2", "13/30", "-3167/2520", "11138/2079", "-450037373/16216200"], 2),
        ("t1 - y1", res.map.shift(), ["1/6", "-11/30", "229/168", "-775267/118800", "233170937/6449625"], 3),
        ("t2", res.map.component(1), ["-5/12", "1241/1260", "-47977/12600", "201402797/10810800", "-475054027589/4540536000"], 4),
    ];
    for (label, s, vals, base) in maps {
        for (i, v) in vals.iter().enumerate() {
            let k = base + 3 * i as u16;
            n += expect(label, s, &[(i as i64 + 1, &y2(k), v)], &mut errors);
        }
    }
    // connection_matrix refuses any surviving z power, so reaching here means C1 is z-free.
    let rep = &res.report;
    if !rep.c12_equals_c23 {
        errors.push("(C1)12 != (C1)23".into());
    }
    if !rep.observables_equal {
        errors.push("f1, f2, f3 differ from the quasimap series".into());
    }
    if !rep.maps_differ || rep.leading_t2 != ("1/4".into(), "-5/12".into()) {
        errors.push(format!("mirror-map mismatch not reproduced: {:?}", rep.leading_t2));
    }
    finish(
        errors,
        format!(
            "{n} C1 and mirror-map coefficients exact; C1 z-free; {} observable rows equal; leading t2 correction {} vs {}",
            rep.observables.len(),
            rep.leading_t2.0,
            rep.leading_t2.1
        ),
    )
}

fn criterion_7(ev: &Evaluator) -> Outcome {
    let suites = [
        Suite::Axioms,
        Suite::OrderIndependence,
        Suite::Selection,
        Suite::Integrability,
        Suite::Quadrature,
        Suite::Gmt,
        Suite::Truncation,
    ];
    suite_outcome(ev, &suites, &VerifyOptions::default())
}

fn criterion_8(_: &Evaluator) -> Outcome {
    let extended = std::env::var("VSC_EXTENDED").is_ok_and(|v| v == "1");
    Ok(vec![if extended {
        "d = 5, 6 disk values ran under criterion 3".into()
    } else {
        "d = 6 and M_8^9 beyond the reference orders are not promised; covered by the property suites of criterion 7".into()
    }])
}

fn main() -> ExitCode {
    let ev = Evaluator::new();
    let criteria: [(u32, fn(&Evaluator) -> Outcome, Duration); 8] = [
        (1, criterion_1, Duration::from_secs(60)),
        (2, criterion_2, Duration::from_secs(300)),
        (3, criterion_3, Duration::from_secs(3600)),
        (4, criterion_4, Duration::MAX),
        (5, criterion_5, Duration::from_secs(1800)),
        (6, criterion_6, Duration::MAX),
        (7, criterion_7, Duration::MAX),
        (8, criterion_8, Duration::MAX),
    ];
    let extended = std::env::var("VSC_EXTENDED").is_ok_and(|v| v == "1");
    let mut ok = true;
    for (n, run, budget) in criteria {
        let t = Instant::now();
        let outcome = run(&ev);
        let took = t.elapsed();
        let over = budget != Duration::MAX && took > budget && !(n == 3 && extended);
        match outcome {
            Ok(lines) if !over => println!("PASS criterion {n}: {} [{took:.2?}]", lines.join("; ")),
            Ok(lines) => {
                ok = false;
                println!("FAIL criterion {n}: over the {budget:?} budget: {} [{took:.2?}]", lines.join("; "));
            }
            Err(e) => {
                ok = false;
                println!("FAIL criterion {n}: {e} [{took:.2?}]");
            }
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
