use std::sync::OnceLock;

use regex::Regex;

use super::tables::{Tables, UNIT_DIMENSIONS, UNIT_FACTORS};
use super::{fail, Builder};
use crate::term::{EvalError, Group};

fn quantity_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"^\s*([-+]?\d+(?:[.,]\d+)?)\s*([A-Za-zµ]+)\s*$").expect("valid regex")
    })
}

/// Splits `56.77cl` or `39.88 A` into its number and unit texts.
fn split_quantity(s: &str) -> Result<(&str, &str), EvalError> {
    let caps = quantity_re()
        .captures(s)
        .ok_or_else(|| fail("not a quantity"))?;
    let value = caps.get(1).map_or("", |m| m.as_str());
    let unit = caps.get(2).map_or("", |m| m.as_str());
    Ok((value, unit))
}

fn dimension<'t>(unit: &str, tables: &'t Tables) -> Result<&'t str, EvalError> {
    tables
        .table(UNIT_DIMENSIONS)
        .get(unit)
        .ok_or_else(|| fail("unknown unit"))
}

fn factor(unit: &str, tables: &Tables) -> Result<f64, EvalError> {
    tables
        .table(UNIT_FACTORS)
        .get(unit)
        .and_then(|f| f.parse().ok())
        .ok_or_else(|| fail("unit has no conversion factor"))
}

/// Converts `value` from one unit to another of the same dimension.
pub fn convert_value(value: f64, from: &str, to: &str, tables: &Tables) -> Result<f64, EvalError> {
    if dimension(from, tables)? != dimension(to, tables)? {
        return Err(fail("units measure different dimensions"));
    }
    Ok(value * factor(from, tables)? / factor(to, tables)?)
}

/// Shortest decimal rendering, rounded to nine places.
fn format_number(v: f64) -> String {
    let s = format!("{v:.9}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

pub(crate) fn register(b: &mut Builder) {
    b.set_group(Group::Units);
    let tables = b.tables();

    b.t1("getUnit", "Unit symbol of a quantity", |s| {
        split_quantity(s).map(|(_, u)| u.to_string())
    });
    b.t1("getValue", "Numeric part of a quantity", |s| {
        split_quantity(s).map(|(v, _)| v.to_string())
    });
    let t = tables.clone();
    b.t1(
        "unitDimension",
        "Physical dimension measured by the unit of a quantity",
        move |s| {
            let (_, unit) = split_quantity(s)?;
            dimension(unit, &t).map(str::to_string)
        },
    );
    let t = tables;
    b.t2(
        "convertUnit",
        "Convert a quantity to another unit of the same dimension",
        move |s, target| {
            let (value, unit) = split_quantity(s)?;
            let v: f64 = value
                .replace(',', ".")
                .parse()
                .map_err(|_| fail("not a number"))?;
            let target = target.trim();
            let out = convert_value(v, unit, target, &t)?;
            Ok(format!("{} {target}", format_number(out)))
        },
    );
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_quantities() {
        assert_eq!(split_quantity("56.77cl").unwrap(), ("56.77", "cl"));
        assert_eq!(split_quantity("39.88 A").unwrap(), ("39.88", "A"));
        assert_eq!(split_quantity("1nm").unwrap(), ("1", "nm"));
        assert!(split_quantity("abc").is_err());
    }

    #[test]
    fn converts_within_a_dimension() {
        let t = Tables::builtin();
        assert_eq!(
            format_number(convert_value(5.0, "km", "m", &t).unwrap()),
            "5000"
        );
        assert_eq!(
            format_number(convert_value(56.77, "cl", "l", &t).unwrap()),
            "0.5677"
        );
        assert!(convert_value(1.0, "kg", "m", &t).is_err());
    }

    #[test]
    fn dimensions_ignore_case() {
        let t = Tables::builtin();
        assert_eq!(dimension("Kg", &t).unwrap(), "Mass");
        assert_eq!(dimension("A", &t).unwrap(), "Electricity");
    }
}
