use std::fmt::Display;

use fieldunits::gf::{factor_poly, Poly};
use fieldunits::groups::{classify_finite_field, classify_scan, classify_scan_exhaustive, Verdict};
use fieldunits::hahn::{HahnField, HahnSeries};
use fieldunits::norm::SimpleExtension;
use fieldunits::perfect::{pc_decompose, DyadicRatFunc};
use fieldunits::ratfunc::{decompose, multiplicative_rank, RatFunc};
use fieldunits::valued::{
    check_valuation_axioms, padic_valuation, parse_rational, AxiomReport, DegreeMap, GroupKind, PAdic, PolyValuation,
    ValuationProbe,
};
use fieldunits::Result;
use serde_json::{json, Value};

use crate::{field_of, selftest, usage, Cli, Command, Report};

pub const DEFAULT_SCAN_BOUND: u64 = 1_000_000;

pub fn dispatch(cli: &Cli) -> Result<Report> {
    let name = cli.command.name();
    match &cli.command {
        Command::Classify { q } => classify(*q),
        Command::ClassifyScan { exhaustive } => scan(cli.bound.unwrap_or(DEFAULT_SCAN_BOUND), *exhaustive),
        Command::Factor { poly } => {
            let field = field_of(cli)?;
            let f = Poly::parse(poly, &field, 'x')?;
            let fac = factor_poly(&f, cli.seed)?;
            let factors: Vec<Value> = fac
                .factors
                .iter()
                .map(|(p, e)| json!({"poly": p.to_string(), "exp": e}))
                .collect();
            let unit = field.format_elem(fac.unit.value());
            let mut parts = vec![unit.clone()];
            parts.extend(fac.factors.iter().map(|(p, e)| {
                if *e == 1 {
                    format!("({p})")
                } else {
                    format!("({p})^{e}")
                }
            }));
            Ok(Report::new(
                name,
                json!({"unit": unit, "factors": factors}),
                format!("{f} = {}", parts.join(" * ")),
            ))
        }
        Command::Decompose { expr } => {
            let field = field_of(cli)?;
            let q = RatFunc::parse(expr, &field, 'x')?;
            let d = decompose(&q, cli.seed)?;
            Ok(Report::new(name, d.to_json(), format!("{q} = {d}")))
        }
        Command::Rank { elems } => {
            let field = field_of(cli)?;
            let qs = elems
                .iter()
                .map(|s| RatFunc::parse(s, &field, 'x'))
                .collect::<Result<Vec<_>>>()?;
            let r = multiplicative_rank(&qs, cli.seed)?;
            Ok(Report::new(name, json!(r), r.to_string()))
        }
        Command::Padic { p, value } => {
            let r = parse_rational(value)?;
            let v = padic_valuation(&r, *p)?;
            Ok(Report::new(name, json!(v), v.to_string()))
        }
        Command::Hahn { group, series, other } => hahn(cli, group, series, other.as_deref()),
        Command::Pc { expr } => {
            let q = DyadicRatFunc::parse(expr)?;
            let level = q.level()?;
            let d = pc_decompose(&q, cli.seed)?;
            let (fr, fi) = (q.frobenius(), q.frobenius_inv());
            let text = format!("value:         {q}\nlevel:         {level}\ndecomposition: {d}\nfrobenius:     {fr}\nfrobenius_inv: {fi}");
            Ok(Report::new(
                name,
                json!({
                    "value": q.to_string(),
                    "level": level,
                    "decomposition": d.to_json(),
                    "frobenius": fr.to_string(),
                    "frobenius_inv": fi.to_string(),
                }),
                text,
            ))
        }
        Command::Norm { elem } => {
            let desc = cli.ext.as_deref().ok_or_else(|| usage("norm needs --ext <descriptor>"))?;
            let ext = SimpleExtension::parse(desc)?;
            let u = ext.parse_elem(elem)?;
            let n = u.norm()?;
            Ok(Report::new(name, json!(n.to_string()), format!("N({u}) = {n}")))
        }
        Command::Axioms { probe, trials } => axioms(cli, probe, *trials),
        Command::Selftest { scale } => Ok(selftest::run(cli.seed, *scale).into_report()),
    }
}

fn classify(q: u64) -> Result<Report> {
    let c = classify_finite_field(q)?;
    let text = match c.verdict {
        Verdict::Indecomposable { family } => format!("GF({q})^* is indecomposable (family {family})"),
        Verdict::Decomposable { a, b } => format!("GF({q})^* is decomposable: {} = {a} * {b} with gcd 1", q - 1),
    };
    Ok(Report::new("classify", serde_json::to_value(c).expect("serializable"), text))
}

fn scan(bound: u64, exhaustive: bool) -> Result<Report> {
    let entries = if exhaustive { classify_scan_exhaustive(bound)? } else { classify_scan(bound)? };
    let mut text = format!("{} fields up to {bound}:", entries.len());
    for e in &entries {
        text.push_str(&format!("\n{:>12}  {:<16} oracle={}", e.q, e.family.to_string(), e.oracle_indecomposable));
    }
    let ok = entries.iter().all(|e| e.oracle_indecomposable);
    let mut r = Report::new("classify-scan", serde_json::to_value(&entries).expect("serializable"), text);
    r.ok = ok;
    Ok(r)
}

fn hahn(cli: &Cli, group: &str, series: &str, other: Option<&str>) -> Result<Report> {
    let field = field_of(cli)?;
    let g: GroupKind = group.parse()?;
    let a = HahnSeries::parse(series, &field, g)?;
    let (v, u) = a.unit_split()?;
    let inv = a.inverse(cli.terms)?;
    let mut doc = json!({
        "group": g.to_string(),
        "series": a.to_string(),
        "valuation": v.to_string(),
        "unit": u.to_string(),
        "inverse": inv.to_string(),
    });
    let mut text = format!("series:    {a}\nvaluation: {v}\nunit:      {u}\ninverse:   {inv}");
    if let Some(b) = other {
        let b = HahnSeries::parse(b, &field, g)?;
        let (s, p) = (a.try_add(&b)?, a.try_mul(&b)?);
        doc["other"] = json!(b.to_string());
        doc["sum"] = json!(s.to_string());
        doc["product"] = json!(p.to_string());
        text.push_str(&format!("\nsum:       {s}\nproduct:   {p}"));
    }
    Ok(Report::new("hahn", doc, text))
}

fn axioms_report<K>(probe: &str, k: &K, trials: usize, seed: u64) -> Result<Report>
where
    K: ValuationProbe,
    K::Elem: Display,
{
    let r = check_valuation_axioms(k, trials, seed)?;
    let (doc, text) = match &r {
        AxiomReport::Pass { pairs } => (
            json!({"probe": probe, "result": "pass", "pairs": pairs}),
            format!("{probe}: pass ({pairs} pairs)"),
        ),
        AxiomReport::Counterexample { x, y, axiom } => (
            json!({"probe": probe, "result": "counterexample", "x": x.to_string(), "y": y.to_string(), "axiom": axiom}),
            format!("{probe}: {axiom} axiom fails at x = {x}, y = {y}"),
        ),
    };
    let mut rep = Report::new("axioms", doc, text);
    rep.ok = r.passed();
    Ok(rep)
}

fn axioms(cli: &Cli, probe: &str, trials: usize) -> Result<Report> {
    let (kind, arg) = probe.split_once(':').unwrap_or((probe, ""));
    match kind {
        "padic" => {
            let p = arg.parse().map_err(|_| usage(format!("bad prime in {probe:?}")))?;
            axioms_report(probe, &PAdic::new(p)?, trials, cli.seed)
        }
        "poly" => {
            let field = field_of(cli)?;
            let v = PolyValuation::new(Poly::parse(arg, &field, 'x')?)?;
            axioms_report(probe, &v, trials, cli.seed)
        }
        "degree" => axioms_report(probe, &DegreeMap::new(field_of(cli)?, 'x'), trials, cli.seed),
        "hahn" => {
            let g: GroupKind = arg.parse()?;
            axioms_report(probe, &HahnField::new(field_of(cli)?, g), trials, cli.seed)
        }
        _ => Err(usage(format!("unknown probe {probe:?}; expected padic:P, poly:F, degree or hahn:G"))),
    }
}
