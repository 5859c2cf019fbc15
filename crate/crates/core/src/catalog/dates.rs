use super::tables::{Tables, MONTHS};
use super::{fail, Builder};
use crate::term::{EvalError, Group};

const MONTH_NAMES: [&str; 12] = [
    "January",
    "February",
    "March",
    "April",
    "May",
    "June",
    "July",
    "August",
    "September",
    "October",
    "November",
    "December",
];

/// Day, month and year recovered from a date written in any common order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DateFields {
    pub day: u32,
    pub month: u32,
    pub year: i64,
    /// Number of digits the year was written with.
    pub year_width: usize,
}

impl DateFields {
    pub fn year_text(&self) -> String {
        format!("{:0w$}", self.year, w = self.year_width)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Token {
    Number { value: i64, width: usize },
    Ordinal(i64),
    Month(u32),
}

fn ordinal_value(word: &str) -> Option<i64> {
    let digits = word.trim_end_matches(|c: char| c.is_ascii_alphabetic());
    let suffix = &word[digits.len()..];
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    matches!(
        suffix.to_ascii_lowercase().as_str(),
        "st" | "nd" | "rd" | "th"
    )
    .then(|| digits.parse().ok())
    .flatten()
}

fn tokenize(text: &str, months: &super::LookupTable) -> Vec<Token> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .filter_map(|w| {
            if w.chars().all(|c| c.is_ascii_digit()) {
                let value = w.parse().ok()?;
                Some(Token::Number {
                    value,
                    width: w.len(),
                })
            } else if let Some(v) = ordinal_value(w) {
                Some(Token::Ordinal(v))
            } else {
                months.get(w).and_then(|m| m.parse().ok()).map(Token::Month)
            }
        })
        .collect()
}

/// Position of (day, month, year) in each preference order.
const ORDERS: [(usize, usize, usize); 3] = [(0, 1, 2), (1, 0, 2), (2, 1, 0)];

fn assign(tokens: &[Token], (d, m, y): (usize, usize, usize)) -> Option<DateFields> {
    let day = match tokens[d] {
        Token::Number { value, width } if width <= 2 => value,
        Token::Ordinal(v) => v,
        _ => return None,
    };
    let month = match tokens[m] {
        Token::Number { value, width } if width <= 2 => value,
        Token::Month(n) => n as i64,
        _ => return None,
    };
    let (year, year_width) = match tokens[y] {
        Token::Number { value, width } => (value, width),
        _ => return None,
    };
    if !(1..=31).contains(&day) || !(1..=12).contains(&month) {
        return None;
    }
    Some(DateFields {
        day: day as u32,
        month: month as u32,
        year,
        year_width,
    })
}

fn parse_with(text: &str, tables: &Tables) -> Result<DateFields, EvalError> {
    let tokens = tokenize(text, tables.table(MONTHS));
    if tokens.len() != 3 {
        return Err(fail("expected three date components"));
    }
    ORDERS
        .iter()
        .find_map(|&order| assign(&tokens, order))
        .ok_or_else(|| fail("no consistent day/month/year assignment"))
}

/// Splits a date into day, month and year.
///
/// Components are separated by any non-alphanumeric run; weekday names and
/// other words are skipped, ordinals such as `16th` count as numbers. The
/// first consistent reading among day-month-year, month-day-year and
/// year-month-day wins, where consistent means the month is 1..=12 or a
/// month name, the day is 1..=31 and four-digit tokens are years.
pub fn parse_date_fields(text: &str) -> Result<DateFields, EvalError> {
    parse_with(text, &Tables::builtin_shared())
}

fn ordinal_suffix(n: u32) -> &'static str {
    match (n % 10, n % 100) {
        (_, 11..=13) => "th",
        (1, _) => "st",
        (2, _) => "nd",
        (3, _) => "rd",
        _ => "th",
    }
}

fn month_number(text: &str, tables: &Tables) -> Option<u32> {
    let t = text.trim();
    if t.chars().all(|c| c.is_ascii_digit()) && !t.is_empty() && t.len() <= 2 {
        return t.parse().ok().filter(|m| (1..=12).contains(m));
    }
    tables.table(MONTHS).get(t).and_then(|m| m.parse().ok())
}

fn expand_year(year: i64, width: usize) -> Option<i64> {
    match width {
        4 => Some(year),
        1 | 2 if year < 30 => Some(2000 + year),
        1 | 2 => Some(1900 + year),
        _ => None,
    }
}

fn digits_date(text: &str, sep: &str) -> Result<String, EvalError> {
    let t = text.trim();
    if !t.chars().all(|c| c.is_ascii_digit()) || !(t.len() == 6 || t.len() == 8) {
        return Err(fail("expected DDMMYY or DDMMYYYY digits"));
    }
    Ok(format!("{}{sep}{}{sep}{}", &t[..2], &t[2..4], &t[4..]))
}

pub(crate) fn register(b: &mut Builder) {
    b.set_group(Group::Dates);
    let tables = b.tables();
    let with = |f: fn(DateFields) -> String| {
        let tables = tables.clone();
        move |s: &str| parse_with(s, &tables).map(f)
    };

    b.t1(
        "getDay",
        "Day of a date, two digits",
        with(|d| format!("{:02}", d.day)),
    );
    b.t1(
        "getMonth",
        "Month of a date, two digits",
        with(|d| format!("{:02}", d.month)),
    );
    b.t1(
        "getYear",
        "Year of a date as written",
        with(|d| d.year_text()),
    );
    b.t1(
        "dayOrdinal",
        "Day of a date in ordinal format",
        with(|d| format!("{:02}{}", d.day, ordinal_suffix(d.day))),
    );

    let tb = tables.clone();
    b.t1(
        "monthName",
        "Full English name of a month number or name",
        move |s| {
            month_number(s, &tb)
                .map(|m| MONTH_NAMES[m as usize - 1].to_string())
                .ok_or_else(|| fail("not a month"))
        },
    );
    let tb = tables.clone();
    b.t1(
        "monthToNumber",
        "Month name or number as two digits",
        move |s| {
            month_number(s, &tb)
                .map(|m| format!("{m:02}"))
                .ok_or_else(|| fail("not a month"))
        },
    );
    b.t1(
        "expandYear",
        "Two-digit year to four digits (pivot 30)",
        |s| {
            let t = s.trim();
            if t.is_empty() || !t.chars().all(|c| c.is_ascii_digit()) {
                return Err(fail("not a year"));
            }
            let year: i64 = t.parse().map_err(|_| fail("not a year"))?;
            expand_year(year, t.len())
                .map(|y| y.to_string())
                .ok_or_else(|| fail("not a year"))
        },
    );

    type Layout = fn(&DateFields, &str) -> String;
    let formats: [(&str, &str, Layout); 3] = [
        (
            "toDMY",
            "Rewrite a date as day, month, year joined by a separator",
            |d, s| format!("{:02}{s}{:02}{s}{}", d.day, d.month, d.year_text()),
        ),
        (
            "toMDY",
            "Rewrite a date as month, day, year joined by a separator",
            |d, s| format!("{:02}{s}{:02}{s}{}", d.month, d.day, d.year_text()),
        ),
        (
            "toYMD",
            "Rewrite a date as year, month, day joined by a separator",
            |d, s| format!("{}{s}{:02}{s}{:02}", d.year_text(), d.month, d.day),
        ),
    ];
    for (id, doc, f) in formats {
        let tb = tables.clone();
        b.t2(id, doc, move |x, sep| {
            parse_with(x, &tb).map(|d| f(&d, sep))
        });
    }
    b.t2(
        "addDatePunctuation",
        "Insert a separator into an undelimited DDMMYY(YY) date",
        digits_date,
    );

    let tb = tables.clone();
    b.tb(
        "isMonthName",
        "Is a month name (case-insensitive)",
        move |s| tb.table(MONTHS).get(s).is_some(),
    );
    let tb = tables;
    b.tb("isDate", "Parses as a date", move |s| {
        parse_with(s, &tb).is_ok()
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fields(s: &str) -> (u32, u32, i64) {
        let d = parse_date_fields(s).unwrap();
        (d.day, d.month, d.year)
    }

    #[test]
    fn resolves_component_order() {
        assert_eq!(fields("03/29/86"), (29, 3, 86));
        assert_eq!(fields("1998/12/25"), (25, 12, 1998));
        assert_eq!(fields("06 30 1975"), (30, 6, 1975));
        assert_eq!(fields("11.02.18"), (11, 2, 18));
        assert_eq!(fields("25-03-74"), (25, 3, 74));
        assert_eq!(fields("11-17-98"), (17, 11, 98));
    }

    #[test]
    fn reads_month_names_and_ordinals() {
        assert_eq!(fields("2 of September of 2010, Monday"), (2, 9, 2010));
        assert_eq!(fields("Tuesday, September 16, 1986"), (16, 9, 1986));
        assert_eq!(fields("February 4th, 2008"), (4, 2, 2008));
    }

    #[test]
    fn rejects_inconsistent_dates() {
        assert!(parse_date_fields("45/67/89").is_err());
        assert!(parse_date_fields("12/12").is_err());
        assert!(parse_date_fields("hello").is_err());
    }

    #[test]
    fn ordinal_suffixes() {
        let got: Vec<_> = [1, 2, 3, 4, 11, 12, 13, 21, 22, 23, 31]
            .iter()
            .map(|&n| ordinal_suffix(n))
            .collect();
        assert_eq!(
            got,
            ["st", "nd", "rd", "th", "th", "th", "th", "st", "nd", "rd", "st"]
        );
    }

    #[test]
    fn year_pivot() {
        assert_eq!(expand_year(74, 2), Some(1974));
        assert_eq!(expand_year(5, 2), Some(2005));
        assert_eq!(expand_year(1998, 4), Some(1998));
        assert_eq!(expand_year(123, 3), None);
    }
}
