use std::path::Path;

use lorentzian_fans::convexity::classify_convexity;
use lorentzian_fans::exact::{format_rational, parse_rational, RatMatrix, RatVector, Rational};
use lorentzian_fans::fan::{self, MarkedFan};
use lorentzian_fans::io::{self, cone_key, FanJson, MatroidJson};
use lorentzian_fans::lorentzian::{
    af_report, definition_sample_check, is_lorentzian, volume_poly_2d, volume_polynomial, ConvexSampler,
};
use lorentzian_fans::matroid::{bergman_fan, Matroid};
use lorentzian_fans::minkowski::{check_balancing, star_weight, transport_weight, Divisor, MinkowskiWeight, TropicalFan};
use lorentzian_fans::ops::{act_divisor_fan, polytope_bridge, product_tropical, tropical_modification};
use lorentzian_fans::Error;
use serde_json::{json, Value};

use crate::Command;

pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    pub fn internal(e: impl std::fmt::Display) -> Self {
        Failure { code: 4, message: e.to_string() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Precondition(_) | Error::NotConvex { .. } | Error::OutsideSupport => 3,
            Error::Internal(_) | Error::NotSquare { .. } | Error::NotSymmetric => 4,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

pub struct Report {
    pub value: Value,
    pub code: u8,
}

type Outcome = Result<Report, Failure>;

fn ok(value: Value) -> Outcome {
    Ok(Report { value, code: 0 })
}

fn to_value<T: serde::Serialize>(x: &T) -> Result<Value, Failure> {
    serde_json::to_value(x).map_err(Failure::internal)
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn fan_json(path: &Path) -> Result<FanJson, Failure> {
    Ok(io::parse_fan(&read(path)?)?)
}

/// A fan that passes every axiom, with its weights (ones by default).
fn tropical(path: &Path) -> Result<TropicalFan, Failure> {
    let fj = fan_json(path)?;
    let report = fan::validate(fj.ambient_dim, &fj.rays, &fj.maximal_cones);
    if !report.is_valid() {
        let detail = serde_json::to_string(&report).map_err(Failure::internal)?;
        return Err(Failure::input(format!("invalid fan: {detail}")));
    }
    Ok(fj.to_tropical()?)
}

fn divisors(path: &Path, fan: &MarkedFan) -> Result<Vec<Divisor>, Failure> {
    let ds = io::parse_divisors(&read(path)?)?;
    for d in &ds {
        if d.len() != fan.num_rays() {
            return Err(Error::Arity { expected: fan.num_rays(), got: d.len() }.into());
        }
    }
    Ok(ds)
}

fn one_divisor(path: &Path, fan: &MarkedFan) -> Result<Divisor, Failure> {
    let mut ds = divisors(path, fan)?;
    if ds.len() != 1 {
        return Err(Error::Arity { expected: 1, got: ds.len() }.into());
    }
    Ok(ds.remove(0))
}

fn matrix(m: &RatMatrix) -> Value {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(format_rational).collect::<Vec<_>>())
        .collect::<Vec<_>>()
        .into()
}

fn fan_value(tf: &TropicalFan) -> Result<Value, Failure> {
    to_value(&FanJson::from_tropical(tf))
}

fn parse_point(text: &str) -> Result<RatVector, Failure> {
    Ok(text.split(',').map(|s| parse_rational(s.trim())).collect::<lorentzian_fans::Result<_>>()?)
}

pub fn run(command: &Command) -> Outcome {
    match command {
        Command::Validate { fan } => {
            let fj = fan_json(fan)?;
            let report = fan::validate(fj.ambient_dim, &fj.rays, &fj.maximal_cones);
            let mut value = to_value(&report)?;
            value["valid"] = report.is_valid().into();
            Ok(Report { value, code: if report.is_valid() { 0 } else { 2 } })
        }
        Command::Balance { fan } => {
            let fj = fan_json(fan)?;
            let (f, w) = fj.to_fan()?;
            let w = w.unwrap_or_else(|| MinkowskiWeight::uniform(&f, f.dim(), Rational::from_integer(1.into())));
            let bad = check_balancing(&f, &w)?;
            let keys: Vec<String> = bad.iter().map(|c| cone_key(c)).collect();
            ok(json!({ "balanced": bad.is_empty(), "unbalanced": keys }))
        }
        Command::Degree { fan, divisors: path } => {
            let tf = tropical(fan)?;
            let ds = divisors(path, tf.fan())?;
            let refs: Vec<&[_]> = ds.iter().map(|d| &d[..]).collect();
            ok(format_rational(&tf.degree(&refs)?).into())
        }
        Command::Convexity { fan, divisors: path, weak } => {
            let tf = tropical(fan)?;
            let certs = divisors(path, tf.fan())?
                .iter()
                .map(|d| classify_convexity(tf.fan(), d, !weak))
                .collect::<lorentzian_fans::Result<Vec<_>>>()?;
            ok(json!({ "divisors": to_value(&certs)? }))
        }
        Command::Lorentzian { fan, samples, seed } => {
            let tf = tropical(fan)?;
            let cert = is_lorentzian(&tf)?;
            let mut value = to_value(&cert)?;
            if let (Some(n), Some(seed)) = (samples, seed) {
                value["sample_check"] = to_value(&definition_sample_check(&tf, *n, *seed)?)?;
            }
            ok(value)
        }
        Command::Af { fan, divisors: path, random, seed } => {
            let tf = tropical(fan)?;
            let d = tf.dim();
            if d < 2 {
                return Err(Error::Precondition(format!("fan of dimension {d} has no Alexandrov-Fenchel pairs")).into());
            }
            if let (Some(n), Some(seed)) = (random, seed) {
                let mut sampler = ConvexSampler::for_fan(tf.fan(), *seed)?;
                let mut reports = Vec::with_capacity(*n);
                for _ in 0..*n {
                    let ds = (0..d).map(|_| sampler.sample()).collect::<lorentzian_fans::Result<Vec<_>>>()?;
                    reports.push(af_report(&tf, &ds[0], &ds[1], &ds[2..])?);
                }
                let zero = Rational::from_integer(0.into());
                let violations = reports.iter().filter(|r| r.gap < zero || !r.log_concave).count();
                return ok(json!({ "seed": seed, "pairs": to_value(&reports)?, "violations": violations }));
            }
            let path = path.as_ref().ok_or_else(|| Failure::input("--divisors or --random is required"))?;
            let ds = divisors(path, tf.fan())?;
            if ds.len() != d {
                return Err(Error::Arity { expected: d, got: ds.len() }.into());
            }
            ok(to_value(&af_report(&tf, &ds[0], &ds[1], &ds[2..])?)?)
        }
        Command::Bergman { matroid } => {
            let mj: MatroidJson = serde_json::from_str(&read(matroid)?).map_err(Error::from)?;
            let tf = bergman_fan(&Matroid::from_json(&mj)?)?;
            ok(fan_value(&tf)?)
        }
        Command::Product { fan, other } => {
            let p = product_tropical(&tropical(fan)?, &tropical(other)?)?;
            ok(fan_value(&p)?)
        }
        Command::Star { fan, cone } => {
            let tf = tropical(fan)?;
            let tau = io::parse_cone_key(cone)?;
            let (star, stf) = star_weight(&tf, &tau)?;
            ok(json!({
                "apex": star.apex,
                "fan": fan_value(&stf)?,
                "ray_lift": star.ray_lift,
                "projection": matrix(&star.projection),
            }))
        }
        Command::Stellar { fan, point } => {
            let tf = tropical(fan)?;
            let v = parse_point(point)?;
            if v.len() != tf.fan().ambient_dim() {
                return Err(Error::Arity { expected: tf.fan().ambient_dim(), got: v.len() }.into());
            }
            let sub = tf.fan().stellar_subdivide(&v)?;
            let fine = transport_weight(&tf, &sub.fan, Some(&sub.containment))?;
            ok(json!({
                "fan": fan_value(&fine)?,
                "new_ray": sub.new_ray,
                "carrier": sub.carrier,
                "containment": sub.containment,
            }))
        }
        Command::Modify { fan, divisors: path } => {
            let tf = tropical(fan)?;
            let z = one_divisor(path, tf.fan())?;
            ok(fan_value(&tropical_modification(&tf, &z)?)?)
        }
        Command::Act { fan, divisors: path } => {
            let tf = tropical(fan)?;
            let z = one_divisor(path, tf.fan())?;
            let (acted, rays) = act_divisor_fan(&tf, &z)?;
            ok(json!({ "fan": fan_value(&acted)?, "ray_map": rays }))
        }
        Command::Mixedvol { polytopes } => {
            let input = io::parse_polytopes(&read(polytopes)?)?;
            let (f, _) = input.fan.to_fan()?;
            ok(to_value(&polytope_bridge(&f, &input.rhs)?)?)
        }
        Command::Volpoly { fan } => {
            let tf = tropical(fan)?;
            let poly = volume_polynomial(&tf)?;
            let mut value = json!({ "dim": tf.dim(), "polynomial": poly.to_string() });
            if tf.dim() == 2 {
                let form = volume_poly_2d(&tf)?;
                value["hessian"] = matrix(&form.hessian());
                value["inertia"] = to_value(&form.inertia())?;
            }
            ok(value)
        }
    }
}
