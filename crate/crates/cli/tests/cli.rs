use exactform::{canonicalize, parse_expression};
use serde_json::Value;

const WORKED: &str = "(e^x*sin(y)*cos(z) - 2*y*sin(x)*e^z) dx \
    + (e^x*cos(y)*cos(z) + 2*cos(x)*e^z + 1/(y*z)) dy \
    + (2*y*cos(x)*e^z - e^x*sin(y)*sin(z) - ln(y)/z^2) dz = 0";

struct Output {
    code: i32,
    out: String,
    err: String,
}

fn exactform(args: &[&str]) -> Output {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("exactform").chain(args.iter().copied());
    let code = exactform_cli::run(argv, &mut out, &mut err);
    Output { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let o = exactform(&full);
    let value = serde_json::from_str(&o.out).unwrap_or_else(|e| panic!("{e}: {}", o.out));
    validate(&value);
    (o.code, value)
}

fn validate(value: &Value) {
    let schema: Value =
        serde_json::from_str(include_str!("../schema/report.schema.json")).expect("schema is valid JSON");
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(value).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:#?}\n{value:#}");
}

fn same_function(printed: &str, expected: &str) -> bool {
    canonicalize(&parse_expression(printed).unwrap()) == canonicalize(&parse_expression(expected).unwrap())
}

#[test]
fn check_exit_codes() {
    let o = exactform(&["check", WORKED]);
    assert_eq!(o.code, 0);
    assert!(o.out.contains("exact (symbolic)"));

    let o = exactform(&["check", "y dx - x dy"]);
    assert_eq!(o.code, 2);
    assert!(o.out.contains("not exact"));
    assert!(o.out.contains("pair (x, y): residual 2"));

    let o = exactform(&["check", "y dx + ("]);
    assert_eq!(o.code, 1);
    assert!(o.err.contains("offset 8"), "{}", o.err);
    assert!(o.out.is_empty());
}

#[test]
fn solve_worked_example() {
    let o = exactform(&["solve", "--method", "basic", WORKED]);
    assert_eq!(o.code, 0);
    assert!(o.out.contains("potential (solution is potential = C): e^x*sin(y)*cos(z) + 2*y*cos(x)*e^z + ln(y)/z"));
    assert!(o.out.contains("integrations=3, differentiations=0"));

    let (code, v) = json(&["solve", "--method", "both", WORKED]);
    assert_eq!(code, 0);
    assert_eq!(v["verdicts"]["equivalence"], "Equal");
    for method in ["basic", "standard"] {
        let p = v["results"][method]["potential"].as_str().unwrap();
        assert!(same_function(p, "e^x*sin(y)*cos(z) + 2*y*cos(x)*e^z + ln(y)/z"));
    }
    assert_eq!(v["tallies"]["basic"]["integrations"], 3);
}

#[test]
fn solve_small_and_failing_forms() {
    let o = exactform(&["solve", "--method", "standard", "2*x*y dx + x^2 dy"]);
    assert_eq!(o.code, 0);
    assert!(o.out.contains("potential (solution is potential = C): x^2*y"));

    assert_eq!(exactform(&["solve", "y dx - x dy"]).code, 2);
    let (code, v) = json(&["solve", "--method", "both", "y dx - x dy"]);
    assert_eq!(code, 2);
    assert_eq!(v["results"]["basic"]["error"]["kind"], "not_exact");

    let (code, v) = json(&["solve", "e^(x^2) dx"]);
    assert_eq!(code, 3);
    assert_eq!(v["results"]["basic"]["error"]["kind"], "not_integrable");
}

#[test]
fn input_sources() {
    let path = std::env::temp_dir().join(format!("exactform-cli-test-{}.txt", std::process::id()));
    std::fs::write(&path, "y dx + x dy = 0\n").unwrap();
    let o = exactform(&["solve", "--file", path.to_str().unwrap()]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(o.code, 0);
    assert!(o.out.contains("x*y"));

    assert_eq!(exactform(&["solve", "--file", "/nonexistent/form.txt"]).code, 1);
    assert_eq!(exactform(&["solve"]).code, 1);
    assert_eq!(exactform(&["solve", "y dx", "--file", "f.txt"]).code, 1);
    assert_eq!(exactform(&["check", "--tolerance", "0", "y dx"]).code, 1);
    assert_eq!(exactform(&["solve", "--method", "fancy", "y dx"]).code, 1);
}

#[test]
fn fuzz_runs_and_is_deterministic() {
    let args = ["fuzz", "--seed", "1", "--trials", "100", "--vars", "2..4"];
    let (code, v) = json(&args);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["passes"], 100);
    assert_eq!(v["verdicts"]["all_passed"], true);
    let mut full = vec!["--json"];
    full.extend_from_slice(&args);
    assert_eq!(exactform(&full).out, exactform(&full).out);

    assert_eq!(exactform(&["fuzz", "--trials", "0"]).code, 1);
    assert_eq!(exactform(&["fuzz", "--vars", "1..3"]).code, 1);
}

#[test]
fn bench_table() {
    let (code, v) = json(&["bench", "--vars", "2..5", "--instances", "5"]);
    assert_eq!(code, 0);
    let rows = v["results"]["rows"].as_array().unwrap();
    let models: Vec<u64> = rows.iter().map(|r| r["model"].as_u64().unwrap()).collect();
    assert_eq!(models, vec![5, 17, 49, 129]);
    let basic: Vec<f64> = rows.iter().map(|r| r["basic_mean"].as_f64().unwrap()).collect();
    assert_eq!(basic, vec![2.0, 3.0, 4.0, 5.0]);
    assert_eq!(v["verdicts"]["basic_equals_n"], true);

    let o = exactform(&["bench", "--vars", "2..3", "--instances", "3"]);
    assert_eq!(o.code, 0);
    assert!(o.out.lines().nth(1).unwrap().split_whitespace().collect::<Vec<_>>()[..2] == ["2", "5"]);

    assert_eq!(exactform(&["bench", "--vars", "7..7"]).code, 1);
    assert_eq!(exactform(&["bench", "--vars", "2..7"]).code, 1);
}

#[test]
fn check_json_and_repeatability() {
    let (code, v) = json(&["check", "y dx - x dy"]);
    assert_eq!(code, 2);
    assert_eq!(v["results"]["failures"][0]["residual"], "2");
    assert_eq!(v["schema"], 1);
    assert_eq!(exactform(&["solve", "--method", "both", WORKED]).out, exactform(&["solve", "--method", "both", WORKED]).out);
}

#[test]
fn help_and_version_succeed() {
    let o = exactform(&["--help"]);
    assert_eq!(o.code, 0);
    assert!(o.out.contains("solve"));
    assert_eq!(exactform(&["--version"]).code, 0);
}
