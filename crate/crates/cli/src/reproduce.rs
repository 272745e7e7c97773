//! One-command reproduction of the bundled analyses.
//!
//! Re-derives every headline result of the two bundled games from scratch
//! and checks it against frozen expectations: payoff polynomials,
//! gradients, within-space equilibria, the meta-game and its pure
//! equilibrium, the mixing threshold, and the correlation regimes. Output
//! is one `ok`/`FAIL` line per check and fully deterministic.

use std::collections::BTreeSet;

use varsolve_core::{
    chain_store_threshold, correlation_detail, expected_payoff, fd_gradient,
    meta_pure_equilibria, mixed_space_payoff, rat, ratio, within_space_equilibria, JointSpace,
    MeasureSpace, MixedSpaceWeighting, MultilinearPoly, ParamPoint, Rational, ThresholdClass,
};

use crate::commands::backward_induction_line;
use crate::parse::{parse_game_file, GameFile};

/// Which bundled analyses to re-run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    All,
    ChainStore,
    Example,
}

struct Checker {
    lines: Vec<String>,
    passed: usize,
    failed: usize,
}

impl Checker {
    fn new() -> Self {
        Checker {
            lines: Vec::new(),
            passed: 0,
            failed: 0,
        }
    }

    fn check(&mut self, name: &str, ok: bool, detail: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
            self.lines.push(format!("ok {name}"));
        } else {
            self.failed += 1;
            self.lines.push(format!("FAIL {name}: {}", detail()));
        }
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, name: &str, actual: T, expected: T) {
        let ok = actual == expected;
        self.check(name, ok, || format!("got {actual:?}, expected {expected:?}"));
    }

    fn report(self) -> (bool, String) {
        let mut out = self.lines.join("\n");
        out.push('\n');
        out.push_str(&format!("{} passed, {} failed\n", self.passed, self.failed));
        (self.failed == 0, out)
    }
}

fn joint(file: &GameFile, first: &str, second: &str) -> JointSpace {
    let spaces: Vec<MeasureSpace> = [first, second]
        .iter()
        .map(|label| file.space(label).expect("bundled space").clone())
        .collect();
    JointSpace::new(&file.game, spaces).expect("bundled joint space")
}

fn poly_string(file: &GameFile, pair: (&str, &str), player: &str) -> String {
    expected_payoff(&file.game, &joint(file, pair.0, pair.1), player)
        .expect("bundled polynomial")
        .to_string()
}

fn partial_string(file: &GameFile, pair: (&str, &str), player: &str, param: &str) -> String {
    expected_payoff(&file.game, &joint(file, pair.0, pair.1), player)
        .expect("bundled polynomial")
        .partial(param)
        .to_string()
}

fn point(pairs: &[(&str, Rational)]) -> ParamPoint {
    ParamPoint::from_pairs(pairs.iter().map(|(k, v)| (k.to_string(), v.clone()))).unwrap()
}

fn fd_agrees(
    file: &GameFile,
    pair: (&str, &str),
    player: &str,
    at: &ParamPoint,
) -> bool {
    let joint = joint(file, pair.0, pair.1);
    let poly = expected_payoff(&file.game, &joint, player).unwrap();
    let numeric = fd_gradient(&file.game, &joint, player, at, 1e-5).unwrap();
    numeric.into_iter().all(|(param, approximate)| {
        let exact = poly.partial(&param).eval(at).unwrap();
        (approximate - varsolve_core::rational::to_f64(&exact)).abs() <= 1e-6
    })
}

fn check_chain_store(checker: &mut Checker) {
    let file = parse_game_file(include_str!("../games/chainstore.game")).expect("bundled file");
    let game = &file.game;

    checker.eq(
        "chainstore parse",
        (
            game.players().len(),
            game.variables().len(),
            game.payoffs().len(),
            file.spaces.len(),
        ),
        (2, 2, 4, 4),
    );
    checker.check("chainstore validate", game.validate().is_ok(), || {
        "violations found".to_string()
    });
    checker.eq(
        "chainstore backward induction",
        backward_induction_line(game).unwrap(),
        "(x,y)=(1,0) -> 1 0".to_string(),
    );

    for (pair, player, expected) in [
        (("X0", "Y0"), "X", "p - 2*p*r"),
        (("X0", "Y0"), "Y", "1 - p - p*r"),
        (("X0", "Y+"), "X", "-p"),
        (("X0", "Y+"), "Y", "1 - 2*p"),
        (("X0", "Y-"), "X", "p"),
        (("X0", "Y-"), "Y", "1 - p"),
    ] {
        checker.eq(
            &format!("chainstore payoff {}x{} {player}", pair.0, pair.1),
            poly_string(&file, pair, player),
            expected.to_string(),
        );
    }

    for (pair, player, param, expected) in [
        (("X0", "Y0"), "X", "p", "1 - 2*r"),
        (("X0", "Y0"), "Y", "r", "-p"),
        (("X0", "Y+"), "X", "p", "-1"),
        (("X0", "Y-"), "X", "p", "1"),
    ] {
        checker.eq(
            &format!("chainstore gradient d{player}/d{param} in {}x{}", pair.0, pair.1),
            partial_string(&file, pair, player, param),
            expected.to_string(),
        );
    }

    let report = within_space_equilibria(game, &joint(&file, "X0", "Y0")).unwrap();
    let selected = report.selected_point().unwrap();
    checker.eq(
        "chainstore equilibrium X0xY0",
        (
            selected.point.clone(),
            selected.payoffs.clone(),
            selected.indifferent.clone(),
        ),
        (
            ParamPoint::vertex([("p", 1u8), ("q", 0), ("r", 0)]),
            vec![rat(1), rat(0)],
            BTreeSet::from(["q".to_string()]),
        ),
    );
    let report = within_space_equilibria(game, &joint(&file, "X0", "Y+")).unwrap();
    let selected = report.selected_point().unwrap();
    checker.eq(
        "chainstore equilibrium X0xY+",
        (selected.point.clone(), selected.payoffs.clone()),
        (ParamPoint::vertex([("p", 0u8)]), vec![rat(0), rat(1)]),
    );
    let report = within_space_equilibria(game, &joint(&file, "X0", "Y-")).unwrap();
    let selected = report.selected_point().unwrap();
    checker.eq(
        "chainstore equilibrium X0xY-",
        (selected.point.clone(), selected.payoffs.clone()),
        (ParamPoint::vertex([("p", 1u8)]), vec![rat(1), rat(0)]),
    );

    let catalogs = vec![
        vec![file.space("X0").unwrap().clone()],
        vec![
            file.space("Y-").unwrap().clone(),
            file.space("Y0").unwrap().clone(),
            file.space("Y+").unwrap().clone(),
        ],
    ];
    let meta = varsolve_core::build_meta_game(game, &catalogs).unwrap();
    let cells: Vec<Vec<Rational>> = (0..3)
        .map(|j| meta.cell(0, j).payoffs.clone().unwrap())
        .collect();
    checker.eq(
        "chainstore meta table",
        cells,
        vec![
            vec![rat(1), rat(0)],
            vec![rat(1), rat(0)],
            vec![rat(0), rat(1)],
        ],
    );
    let equilibria = meta_pure_equilibria(&meta).unwrap();
    checker.eq(
        "chainstore meta equilibrium",
        equilibria
            .iter()
            .map(|e| (e.profile.clone(), e.payoffs.clone()))
            .collect::<Vec<_>>(),
        vec![(
            vec!["X0".to_string(), "Y+".to_string()],
            vec![rat(0), rat(1)],
        )],
    );

    // The extended-tree mixing condition: X stays out iff c + b*r > 1/2,
    // matching the slope of the mixed payoff, over the exact 1/20 grid.
    let own = file.space("X0").unwrap().clone();
    let branches: Vec<MeasureSpace> = ["Y-", "Y0", "Y+"]
        .iter()
        .map(|l| file.space(l).unwrap().clone())
        .collect();
    let mut case_count = 0usize;
    let mut all_consistent = true;
    for a20 in 0..=20i64 {
        for b20 in 0..=(20 - a20) {
            let a = ratio(a20, 20);
            let b = ratio(b20, 20);
            let c = rat(1) - &a - &b;
            for r20 in 0..=20i64 {
                let r = ratio(r20, 20);
                let class = chain_store_threshold(&a, &b, &c, &r).unwrap();
                let weighting = MixedSpaceWeighting::new(
                    "Y",
                    vec![
                        ("Y-".into(), a.clone()),
                        ("Y0".into(), b.clone()),
                        ("Y+".into(), c.clone()),
                    ],
                )
                .unwrap();
                let poly = mixed_space_payoff(
                    game,
                    &own,
                    &branches,
                    &weighting,
                    &point(&[("r", r.clone())]),
                )
                .unwrap();
                let slope = poly.partial("p").eval(&ParamPoint::empty()).unwrap();
                let expected = match slope.cmp(&rat(0)) {
                    std::cmp::Ordering::Greater => ThresholdClass::Enter,
                    std::cmp::Ordering::Less => ThresholdClass::StayOut,
                    std::cmp::Ordering::Equal => ThresholdClass::Indifferent,
                };
                if class != expected {
                    all_consistent = false;
                }
                case_count += 1;
            }
        }
    }
    checker.check(
        "chainstore threshold grid (4851 cases)",
        all_consistent && case_count == 4851,
        || format!("{case_count} cases, consistent={all_consistent}"),
    );
    checker.eq(
        "chainstore threshold corners",
        (
            chain_store_threshold(&rat(0), &rat(0), &rat(1), &ratio(1, 2)).unwrap(),
            chain_store_threshold(&rat(1), &rat(0), &rat(0), &ratio(1, 2)).unwrap(),
            chain_store_threshold(&rat(0), &rat(1), &rat(0), &ratio(1, 2)).unwrap(),
        ),
        (
            ThresholdClass::StayOut,
            ThresholdClass::Enter,
            ThresholdClass::Indifferent,
        ),
    );

    let probes = [
        point(&[("p", ratio(1, 2)), ("q", ratio(1, 4)), ("r", ratio(1, 3))]),
        point(&[("p", ratio(3, 10)), ("q", ratio(7, 10)), ("r", ratio(9, 10))]),
        point(&[("p", ratio(4, 5)), ("q", ratio(1, 5)), ("r", ratio(2, 5))]),
    ];
    let fd_ok = ["Y0", "Y+", "Y-"].iter().all(|label| {
        probes.iter().all(|at| {
            fd_agrees(&file, ("X0", label), "X", at) && fd_agrees(&file, ("X0", label), "Y", at)
        })
    });
    checker.check("chainstore fd gradients", fd_ok, || {
        "finite differences disagree with analytic gradient".to_string()
    });

    let behavioural = joint(&file, "X0", "Y0");
    let mut sweep_ok = true;
    for k in 1..=9i64 {
        let p = ratio(k, 10);
        let perfectly = correlation_detail(
            &behavioural,
            &point(&[("p", p.clone()), ("q", rat(0)), ("r", rat(1))]),
            "x",
            "y",
        )
        .unwrap();
        let anti = correlation_detail(
            &behavioural,
            &point(&[("p", p.clone()), ("q", rat(1)), ("r", rat(0))]),
            "x",
            "y",
        )
        .unwrap();
        let balanced = correlation_detail(
            &behavioural,
            &point(&[("p", p.clone()), ("q", ratio(k, 10)), ("r", ratio(k, 10))]),
            "x",
            "y",
        )
        .unwrap();
        sweep_ok &= perfectly.exact() == Some(rat(1));
        sweep_ok &= anti.exact() == Some(rat(-1));
        sweep_ok &= balanced.exact() == Some(rat(0));
    }
    for p in [rat(0), rat(1)] {
        let degenerate = correlation_detail(
            &behavioural,
            &point(&[("p", p), ("q", ratio(1, 3)), ("r", ratio(2, 3))]),
            "x",
            "y",
        )
        .unwrap();
        sweep_ok &= degenerate.exact() == Some(rat(0));
    }
    checker.check("chainstore correlation sweep", sweep_ok, || {
        "correlation regimes do not match".to_string()
    });
}

fn check_example(checker: &mut Checker) {
    let file = parse_game_file(include_str!("../games/example.game")).expect("bundled file");
    let game = &file.game;

    checker.eq(
        "example parse",
        (
            game.players().len(),
            game.variables().len(),
            game.payoffs().len(),
            file.spaces.len(),
        ),
        (2, 2, 4, 3),
    );
    checker.eq(
        "example backward induction",
        backward_induction_line(game).unwrap(),
        "(x,y)=(0,1) -> 2 2".to_string(),
    );

    for (pair, player, expected) in [
        (("X0", "Y0"), "X", "3 - 2*p - q + p*q + 3*p*r"),
        (("X0", "Y0"), "Y", "1 + 3*p + q - p*q - p*r"),
        (("X0", "Y1"), "X", "3 + p"),
        (("X0", "Y1"), "Y", "1 + 2*p"),
    ] {
        checker.eq(
            &format!("example payoff {}x{} {player}", pair.0, pair.1),
            poly_string(&file, pair, player),
            expected.to_string(),
        );
    }

    for (pair, player, param, expected) in [
        (("X0", "Y0"), "X", "p", "-2 + q + 3*r"),
        (("X0", "Y0"), "Y", "q", "1 - p"),
        (("X0", "Y0"), "Y", "r", "-p"),
        (("X0", "Y1"), "X", "p", "1"),
    ] {
        checker.eq(
            &format!("example gradient d{player}/d{param} in {}x{}", pair.0, pair.1),
            partial_string(&file, pair, player, param),
            expected.to_string(),
        );
    }

    let behavioural = joint(&file, "X0", "Y0");
    let x_poly = expected_payoff(game, &behavioural, "X").unwrap();
    let y_poly = expected_payoff(game, &behavioural, "Y").unwrap();
    let at = point(&[("p", rat(0)), ("q", rat(1)), ("r", rat(0))]);
    checker.eq(
        "example eval at (0,1,0)",
        (x_poly.eval(&at).unwrap(), y_poly.eval(&at).unwrap()),
        (rat(2), rat(2)),
    );
    let coupled = joint(&file, "X0", "Y1");
    let x_coupled = expected_payoff(game, &coupled, "X").unwrap();
    let y_coupled = expected_payoff(game, &coupled, "Y").unwrap();
    let at_one = point(&[("p", rat(1))]);
    checker.eq(
        "example eval at p=1 under coupling",
        (
            x_coupled.eval(&at_one).unwrap(),
            y_coupled.eval(&at_one).unwrap(),
        ),
        (rat(4), rat(3)),
    );

    let report = within_space_equilibria(game, &behavioural).unwrap();
    let selected = report.selected_point().unwrap();
    checker.eq(
        "example equilibrium X0xY0",
        (
            selected.point.clone(),
            selected.payoffs.clone(),
            selected.indifferent.clone(),
        ),
        (
            ParamPoint::vertex([("p", 0u8), ("q", 1), ("r", 0)]),
            vec![rat(2), rat(2)],
            BTreeSet::from(["r".to_string()]),
        ),
    );
    let report = within_space_equilibria(game, &coupled).unwrap();
    let selected = report.selected_point().unwrap();
    checker.eq(
        "example equilibrium X0xY1",
        (selected.point.clone(), selected.payoffs.clone()),
        (ParamPoint::vertex([("p", 1u8)]), vec![rat(4), rat(3)]),
    );

    let catalogs = vec![
        vec![file.space("X0").unwrap().clone()],
        vec![
            file.space("Y0").unwrap().clone(),
            file.space("Y1").unwrap().clone(),
        ],
    ];
    let meta = varsolve_core::build_meta_game(game, &catalogs).unwrap();
    let cells: Vec<Vec<Rational>> = (0..2)
        .map(|j| meta.cell(0, j).payoffs.clone().unwrap())
        .collect();
    checker.eq(
        "example meta table",
        cells,
        vec![vec![rat(2), rat(2)], vec![rat(4), rat(3)]],
    );
    let equilibria = meta_pure_equilibria(&meta).unwrap();
    checker.eq(
        "example meta equilibrium",
        equilibria
            .iter()
            .map(|e| (e.profile.clone(), e.payoffs.clone()))
            .collect::<Vec<_>>(),
        vec![(
            vec!["X0".to_string(), "Y1".to_string()],
            vec![rat(4), rat(3)],
        )],
    );

    let perfectly = correlation_detail(
        &behavioural,
        &point(&[("p", ratio(1, 2)), ("q", rat(0)), ("r", rat(1))]),
        "x",
        "y",
    )
    .unwrap();
    checker.eq("example correlation at (1/2,0,1)", perfectly.exact(), Some(rat(1)));

    // The polynomial identity behind the X0xY1 leaf table.
    let poly_y1 = MultilinearPoly::from_terms([(vec![], rat(3)), (vec!["p"], rat(1))]);
    checker.eq("example coupled polynomial identity", x_coupled, poly_y1);
}

/// Runs the selected checks; returns overall success and the report text.
pub fn run(scope: Scope) -> (bool, String) {
    let mut checker = Checker::new();
    if scope != Scope::Example {
        check_chain_store(&mut checker);
    }
    if scope != Scope::ChainStore {
        check_example(&mut checker);
    }
    checker.report()
}
