use std::path::Path;
use std::time::Instant;

use serde_json::{json, Map, Value};

use nlfsr_core::attack::{
    estimate_with, multiplier_search, rh_attack, standard_attack, AttackKind, AttackReport,
    FilterGenerator, StandardOptions,
};
use nlfsr_core::espresso::{
    self, bits_to_bytes, espresso_keystream, transform_espresso, verify_equivalence, OutputStats,
};
use nlfsr_core::transform::{
    compensate_state_plain, fib_to_galois, galois_to_fib, state_relation_check,
    uniform_galois_to_fib,
};
use nlfsr_core::{Configuration, FsrFile, RegisterState, Transformed};

use crate::io::{self, bits_to_hex, emit, hex_to_bits, keystream_arg};
use crate::{
    domain, AttackCmd, AttackInput, Cli, CliError, Command, EspressoCmd, Output, Register,
    TransformCmd,
};

/// Ordered key/value report rendered as `key = value` lines or JSON.
#[derive(Default)]
struct Report {
    fields: Vec<(String, Value)>,
    /// Values too bulky for text mode (files, lists), JSON only.
    json_only: Vec<(String, Value)>,
    /// Lines appended in text mode only.
    text_lines: Vec<String>,
    /// Register file printed before the fields in text mode; the fields
    /// then become comments so the output still parses as a register file.
    preamble: Option<String>,
    failure: Option<String>,
}

fn text_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(text_value).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

impl Report {
    fn put(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.fields.push((key.to_string(), value.into()));
        self
    }

    fn put_json(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.json_only.push((key.to_string(), value.into()));
        self
    }

    fn render(&self, json: bool) -> String {
        if json {
            let map: Map<String, Value> =
                self.fields.iter().chain(&self.json_only).cloned().collect();
            return format!(
                "{}\n",
                serde_json::to_string_pretty(&Value::Object(map)).unwrap()
            );
        }
        let mut out = self.preamble.clone().unwrap_or_default();
        let prefix = if self.preamble.is_some() { "# " } else { "" };
        for (k, v) in &self.fields {
            out.push_str(&format!("{prefix}{k} = {}\n", text_value(v)));
        }
        for line in &self.text_lines {
            out.push_str(&format!("{prefix}{line}\n"));
        }
        out
    }
}

pub fn run(cli: &Cli) -> Result<String, (String, CliError)> {
    match dispatch(&cli.command) {
        Ok(report) => {
            let text = report.render(cli.json);
            match report.failure {
                None => Ok(text),
                Some(msg) => Err((text, CliError::Verification(msg))),
            }
        }
        Err(e) => Err((String::new(), e)),
    }
}

fn dispatch(cmd: &Command) -> Result<Report, CliError> {
    match cmd {
        Command::Simulate { spec, init, bits } => simulate(spec, init.as_deref(), *bits),
        Command::Classify { spec } => classify(spec),
        Command::Transform(t) => transform(t),
        Command::Espresso(e) => espresso_cmd(e),
        Command::Attack(a) => attack(a),
        Command::VerifyRelation {
            fib,
            gal,
            clist,
            clocks,
        } => verify_relation(fib, gal, clist, *clocks),
    }
}

fn state_of(file: &FsrFile, init: Option<&str>) -> Result<RegisterState, CliError> {
    let state = match init {
        Some(s) => s
            .parse::<RegisterState>()
            .map_err(|e| CliError::Usage(e.to_string()))?,
        None => file.init.clone().ok_or_else(|| {
            CliError::Usage("no initial state: add `init = ...` or pass --init".into())
        })?,
    };
    if state.len() != file.spec.n() {
        return Err(CliError::Usage(format!(
            "initial state has {} bits, register has {}",
            state.len(),
            file.spec.n()
        )));
    }
    Ok(state)
}

fn simulate(spec: &Path, init: Option<&str>, bits: usize) -> Result<Report, CliError> {
    let file = io::read_spec(spec)?;
    let state = state_of(&file, init)?;
    let ks = file.spec.keystream(&state, bits).map_err(domain)?;
    let mut r = Report::default();
    r.put("bits", bits).put("keystream", bits_to_hex(&ks));
    Ok(r)
}

fn classify(spec: &Path) -> Result<Report, CliError> {
    let file = io::read_spec(spec)?;
    let class = file.spec.classify();
    let mut r = Report::default();
    r.put("n", file.spec.n())
        .put("configuration", class.to_string());
    if let Configuration::UniformGalois { tau } = class {
        r.put("tau", tau);
    }
    r.put("nontrivial_stages", file.spec.nontrivial_stages());
    Ok(r)
}

fn stats(r: &mut Report, s: OutputStats) {
    r.put("output_monomials", s.monomials)
        .put("output_variables", s.variables)
        .put("output_degree", s.degree);
}

/// Writes the transformed register and its compensation list, then reports.
fn finish_transform(t: &Transformed, keep_init: bool, output: &Output) -> Result<Report, CliError> {
    let file = FsrFile::new(t.spec.clone(), keep_init.then(|| t.init.clone()));
    let mut r = Report::default();
    let text = file.to_string();
    r.put_json("spec", text.clone());
    r.preamble = emit(&output.out, text)?;
    if let Some(path) = &output.clist {
        io::write(path, &t.compensation.to_string())?;
    }
    r.put_json("compensation", t.compensation.to_string());
    r.put("configuration", t.spec.classify().to_string());
    r.put("nontrivial_stages", t.spec.nontrivial_stages());
    stats(&mut r, OutputStats::of(t.spec.output()));
    Ok(r)
}

fn transform(cmd: &TransformCmd) -> Result<Report, CliError> {
    let (spec, output) = match cmd {
        TransformCmd::Fib2gal { spec, output, .. }
        | TransformCmd::Gal2fib { spec, output }
        | TransformCmd::Uniform { spec, output } => (spec, output),
    };
    let file = io::read_spec(spec)?;
    let keep_init = file.init.is_some();
    let init = file
        .init
        .clone()
        .unwrap_or_else(|| RegisterState::zeros(file.spec.n()));
    let t = match cmd {
        TransformCmd::Fib2gal { plan, .. } => {
            fib_to_galois(&file.spec, &io::read_plan(plan)?, &init).map_err(domain)?
        }
        TransformCmd::Gal2fib { .. } => galois_to_fib(&file.spec, &init).map_err(domain)?,
        TransformCmd::Uniform { .. } => uniform_galois_to_fib(&file.spec, &init).map_err(domain)?,
    };
    finish_transform(&t, keep_init, output)
}

fn parse_bits(what: &str, hex: &str, expected: usize) -> Result<Vec<bool>, CliError> {
    let bits = hex_to_bits(hex)?;
    if bits.len() != expected {
        return Err(CliError::Usage(format!(
            "{what} must be {} hex digits",
            expected / 4
        )));
    }
    Ok(bits)
}

fn espresso_cmd(cmd: &EspressoCmd) -> Result<Report, CliError> {
    let mut r = Report::default();
    match cmd {
        EspressoCmd::Spec { register, out } => {
            let spec = match register {
                Register::G => espresso::build_espresso_g(),
                Register::F => espresso::build_espresso_f(),
            };
            let text = FsrFile::new(spec.clone(), None).to_string();
            r.put_json("spec", text.clone());
            r.preamble = emit(out, text)?;
            r.put("configuration", spec.classify().to_string());
            r.put("nontrivial_stages", spec.nontrivial_stages());
            stats(&mut r, OutputStats::of(spec.output()));
        }
        EspressoCmd::Keystream { key, iv, bits } => {
            let k = parse_bits("--key", key, espresso::KEY_BITS)?;
            let v = parse_bits("--iv", iv, espresso::IV_BITS)?;
            let ks = espresso_keystream(&k, &v, *bits).map_err(domain)?;
            r.put("bits", *bits)
                .put("keystream", hex::encode(bits_to_bytes(&ks)));
        }
        EspressoCmd::Transform { output } => {
            let t = transform_espresso().map_err(domain)?;
            let file = FsrFile::new(t.lfsr.clone(), None);
            let text = file.to_string();
            r.put_json("spec", text.clone());
            r.preamble = emit(&output.out, text)?;
            if let Some(path) = &output.clist {
                io::write(path, &t.compensation.to_string())?;
            }
            r.put_json("compensation", t.compensation.to_string());
            r.put("f255", t.lfsr.feedback(espresso::N - 1).to_string());
            stats(&mut r, t.output_stats);
            for (stage, tap) in &t.compensated_taps {
                r.put(&format!("tap{stage}"), tap.to_string());
            }
        }
        EspressoCmd::Verify {
            trials,
            bits,
            seed,
            timing,
        } => {
            let start = Instant::now();
            let t = transform_espresso().map_err(domain)?;
            let report = verify_equivalence(&t, *trials, *bits, *seed).map_err(domain)?;
            r.put("trials", *trials)
                .put("bits", *bits)
                .put("seed", *seed)
                .put("mismatches", report.mismatches.len())
                .put("result", if report.passed() { "PASS" } else { "FAIL" });
            if let Some(&(trial, bit)) = report.mismatches.first() {
                r.put("first_mismatch_trial", trial)
                    .put("first_mismatch_bit", bit);
                r.failure = Some(format!("{} trials differ", report.mismatches.len()));
            }
            if *timing {
                r.put("elapsed_ms", start.elapsed().as_millis() as u64);
            }
        }
    }
    Ok(r)
}

fn multiplier_text(factors: &[u32]) -> String {
    if factors.is_empty() {
        return "1".into();
    }
    factors
        .iter()
        .map(|v| format!("(x{v} + 1)"))
        .collect::<Vec<_>>()
        .join("*")
}

fn attack_report(rep: &AttackReport, timing: bool) -> Report {
    let mut r = Report::default();
    r.put("attack", rep.kind.to_string())
        .put(
            "state",
            rep.state
                .as_ref()
                .map_or("none".to_string(), |s| s.to_string()),
        )
        .put("verified", rep.verified)
        .put("equations", rep.equations)
        .put("unknowns", rep.unknowns)
        .put("data_bits", rep.data_bits)
        .put("char_poly_degree", rep.char_poly_degree);
    if rep.kind == AttackKind::Standard {
        r.put("multiplier", multiplier_text(&rep.multiplier))
            .put("degree_h", rep.degree_h)
            .put("e", rep.e);
    }
    if timing {
        r.put("elapsed_ms", rep.elapsed.as_millis() as u64);
    }
    if !rep.verified {
        r.failure = Some("recovered state does not reproduce the keystream".into());
    }
    r
}

fn run_attack(input: &AttackInput, max_e: Option<usize>) -> Result<Report, CliError> {
    let file = io::read_spec(&input.spec)?;
    let gen = FilterGenerator::from_spec(&file.spec).map_err(domain)?;
    let ks = keystream_arg(&input.keystream, input.bits)?;
    let rep = match max_e {
        Some(max_e) => standard_attack(&gen, &ks, StandardOptions { max_e }),
        None => rh_attack(&gen, &ks),
    }
    .map_err(domain)?;
    Ok(attack_report(&rep, input.timing))
}

fn attack(cmd: &AttackCmd) -> Result<Report, CliError> {
    match cmd {
        AttackCmd::Standard { input, max_e } => run_attack(input, Some(*max_e)),
        AttackCmd::Rh { input } => run_attack(input, None),
        AttackCmd::Estimate {
            n,
            d,
            e,
            d_f,
            kind,
            c,
        } => {
            let kind: AttackKind = kind.parse().map_err(|e| CliError::Usage(format!("{e}")))?;
            let est = estimate_with(*n, d_f.unwrap_or(*d), *e, *d, kind, *c).map_err(domain)?;
            let round = |x: f64| (x * 100.0).round() / 100.0;
            let mut r = Report::default();
            r.put("kind", kind.to_string()).put("n", est.n);
            match kind {
                AttackKind::Standard => {
                    r.put("d", est.d)
                        .put("e", est.e)
                        .put("D", est.big_d.to_string())
                        .put("E", est.big_e.to_string());
                }
                AttackKind::Rh => {
                    r.put("d_f", est.d_f).put("D", est.big_d.to_string());
                }
            }
            r.put("omega", est.omega)
                .put("c", est.c)
                .put("log2_data", round(est.data))
                .put("log2_precomputation", round(est.precomputation))
                .put("log2_substitution", round(est.substitution))
                .put("log2_solving", round(est.solving))
                .put("log2_computation", round(est.computation()));
            Ok(r)
        }
        AttackCmd::Multipliers { spec, max_e } => {
            if *max_e == 0 {
                return Err(CliError::Usage("--max-e must be at least 1".into()));
            }
            let file = io::read_spec(spec)?;
            let found = multiplier_search(file.spec.output(), *max_e);
            let mut r = Report::default();
            r.put("filter_degree", file.spec.output().degree())
                .put("count", found.len());
            let list: Vec<Value> = found
                .iter()
                .map(|m| json!({"g": multiplier_text(&m.factors), "factors": m.factors, "degree_h": m.degree}))
                .collect();
            r.put_json("multipliers", list);
            r.text_lines = found
                .iter()
                .map(|m| format!("{} -> degree_h {}", multiplier_text(&m.factors), m.degree))
                .collect();
            Ok(r)
        }
    }
}

fn verify_relation(
    fib: &Path,
    gal: &Path,
    clist: &Path,
    clocks: usize,
) -> Result<Report, CliError> {
    let fib = io::read_spec(fib)?;
    let gal = io::read_spec(gal)?;
    let c = io::read_clist(clist)?;
    let init_fib = state_of(&fib, None)?;
    let init_gal = match &gal.init {
        Some(s) => s.clone(),
        None => compensate_state_plain(&init_fib, &c).map_err(domain)?,
    };
    let rel = state_relation_check(&fib.spec, &gal.spec, &c, &init_fib, &init_gal, clocks)
        .map_err(domain)?;
    let mut r = Report::default();
    r.put("clocks", clocks)
        .put("result", if rel.holds() { "PASS" } else { "FAIL" });
    if let Some((clock, stage)) = rel.first_divergence {
        r.put("divergence_clock", clock)
            .put("divergence_stage", stage);
        r.failure = Some(format!("stage {stage} diverges at clock {clock}"));
    }
    Ok(r)
}
