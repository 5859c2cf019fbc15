use std::sync::OnceLock;

use regex::Regex;

use super::tables::{Tables, COUNTRIES};
use super::{fail, Builder};
use crate::term::{EvalError, Group};

fn phone_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"\d{3}-\d{3}-\d{4}").expect("valid regex"))
}

fn code_for(country: &str, tables: &Tables) -> Result<String, EvalError> {
    tables
        .table(COUNTRIES)
        .get(country)
        .map(str::to_string)
        .ok_or_else(|| fail("unknown country"))
}

fn clean_code(code: &str) -> Result<&str, EvalError> {
    let c = code.trim().trim_start_matches('+');
    if c.is_empty() || !c.chars().all(|c| c.is_ascii_digit()) {
        return Err(fail("not a calling code"));
    }
    Ok(c)
}

fn group_digits(digits: &str, sep: &str) -> Result<String, EvalError> {
    let sizes: &[usize] = match digits.len() {
        7 => &[3, 4],
        10 => &[3, 3, 4],
        11 => &[1, 3, 3, 4],
        _ => return Err(fail("unsupported phone length")),
    };
    let mut parts = Vec::new();
    let mut at = 0;
    for &n in sizes {
        parts.push(&digits[at..at + n]);
        at += n;
    }
    Ok(parts.join(sep))
}

pub(crate) fn register(b: &mut Builder) {
    b.set_group(Group::Phones);
    let tables = b.tables();

    let t = tables.clone();
    b.t1(
        "countryCode",
        "International calling code of a country",
        move |s| code_for(s, &t),
    );
    let t = tables.clone();
    b.t2(
        "prefixForCountry",
        "Prefix a number with its country code in parentheses",
        move |num, country| Ok(format!("({}) {}", code_for(country, &t)?, num.trim())),
    );
    let t = tables;
    b.t2(
        "plusPrefixForCountry",
        "Prefix a number with '+' and its country code",
        move |num, country| Ok(format!("+{} {}", code_for(country, &t)?, num.trim())),
    );
    b.t2(
        "addPrefix",
        "Prefix a number with a given calling code",
        |num, code| Ok(format!("+{} {}", clean_code(code)?, num.trim())),
    );
    b.t1(
        "extractPhone",
        "First NNN-NNN-NNNN phone number in a text",
        |s| {
            phone_re()
                .find(s)
                .map(|m| m.as_str().to_string())
                .ok_or_else(|| fail("no phone number"))
        },
    );
    b.t2(
        "formatPhone",
        "Group the digits of a phone number with a separator",
        |s, sep| {
            let digits: String = s.chars().filter(|c| c.is_ascii_digit()).collect();
            group_digits(&digits, sep)
        },
    );
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extracts_phone_numbers() {
        let re = phone_re();
        assert_eq!(
            re.find("[TS]865-000-0000 - 06-23-09").unwrap().as_str(),
            "865-000-0000"
        );
        assert_eq!(
            re.find("17:58-19:29, 425-743-1650").unwrap().as_str(),
            "425-743-1650"
        );
    }

    #[test]
    fn groups_digits() {
        assert_eq!(group_digits("4257854210", "-").unwrap(), "425-785-4210");
        assert_eq!(group_digits("6184390", " ").unwrap(), "618 4390");
        assert!(group_digits("12", "-").is_err());
    }
}
