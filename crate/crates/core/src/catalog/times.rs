use std::sync::OnceLock;

use regex::Regex;

use super::tables::{Tables, TIMEZONES};
use super::{fail, int_arg, t, text_arg, Builder};
use crate::term::{EvalError, Group, Ty, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Clock {
    hour: u32,
    minute: u32,
    second: Option<u32>,
}

impl Clock {
    fn render(self) -> String {
        match self.second {
            Some(s) => format!("{:02}:{:02}:{:02}", self.hour, self.minute, s),
            None => format!("{:02}:{:02}", self.hour, self.minute),
        }
    }

    fn shift_minutes(self, delta: i64) -> Clock {
        let total = (self.hour as i64 * 60 + self.minute as i64 + delta).rem_euclid(24 * 60);
        Clock {
            hour: (total / 60) as u32,
            minute: (total % 60) as u32,
            ..self
        }
    }
}

fn time_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"(?i)^(\d{1,2}):(\d{2})(?::(\d{2}))?(?:\s*(am|pm))?$").expect("valid regex")
    })
}

fn find_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"\b\d{1,2}:\d{2}(?::\d{2})?\b").expect("valid regex"))
}

/// Parses `H:MM[:SS][ AM|PM]`; the meridiem flag is `Some(is_pm)`.
fn parse_clock(s: &str) -> Result<(Clock, Option<bool>), EvalError> {
    let caps = time_re()
        .captures(s.trim())
        .ok_or_else(|| fail("not a time"))?;
    let num = |i: usize| caps.get(i).map(|m| m.as_str().parse::<u32>().unwrap_or(99));
    let clock = Clock {
        hour: num(1).unwrap_or(99),
        minute: num(2).unwrap_or(99),
        second: num(3),
    };
    let meridiem = caps.get(4).map(|m| m.as_str().eq_ignore_ascii_case("pm"));
    let max_hour = if meridiem.is_some() { 12 } else { 23 };
    let hour_ok = match meridiem {
        Some(_) => (1..=max_hour).contains(&clock.hour),
        None => clock.hour <= max_hour,
    };
    if !hour_ok || clock.minute > 59 || clock.second.is_some_and(|s| s > 59) {
        return Err(fail("time out of range"));
    }
    Ok((clock, meridiem))
}

fn parse_24h(s: &str) -> Result<Clock, EvalError> {
    match parse_clock(s)? {
        (c, None) => Ok(c),
        (_, Some(_)) => Err(fail("expected a 24-hour time")),
    }
}

/// Converts a 12-hour or 24-hour time to 24-hour form.
fn to_24h(s: &str) -> Result<Clock, EvalError> {
    let (c, meridiem) = parse_clock(s)?;
    Ok(match meridiem {
        None => c,
        Some(pm) => Clock {
            hour: c.hour % 12 + if pm { 12 } else { 0 },
            ..c
        },
    })
}

fn to_12h(s: &str) -> Result<String, EvalError> {
    let c = parse_24h(s)?;
    let suffix = if c.hour >= 12 { "PM" } else { "AM" };
    let hour = match c.hour % 12 {
        0 => 12,
        h => h,
    };
    Ok(format!("{} {suffix}", Clock { hour, ..c }.render()))
}

fn zone_offset(zone: &str, tables: &Tables) -> Option<i64> {
    tables.table(TIMEZONES).get_exact(zone)?.parse().ok()
}

fn convert_zone(s: &str, target: &str, tables: &Tables) -> Result<String, EvalError> {
    let target = target.trim();
    let to = zone_offset(target, tables).ok_or_else(|| fail("unknown time zone"))?;
    let mut from = None;
    let mut time = None;
    for word in s.split_whitespace() {
        if let Some(off) = zone_offset(word, tables) {
            from = Some(off);
        } else if time.is_none() {
            time = Some(parse_24h(word)?);
        }
    }
    let time = time.ok_or_else(|| fail("no time"))?;
    let from = from.ok_or_else(|| fail("no source time zone"))?;
    Ok(format!(
        "{} {target}",
        time.shift_minutes(to - from).render()
    ))
}

pub(crate) fn register(b: &mut Builder) {
    b.set_group(Group::Times);
    let tables = b.tables();

    b.t1(
        "extractTime",
        "First HH:MM or HH:MM:SS time in a text",
        |s| {
            find_re()
                .find(s)
                .map(|m| m.as_str().to_string())
                .ok_or_else(|| fail("no time"))
        },
    );
    b.t1("to24h", "Convert a time to 24-hour format", |s| {
        to_24h(s).map(Clock::render)
    });
    b.t1(
        "to12h",
        "Convert a 24-hour time to 12-hour format with AM/PM",
        to_12h,
    );
    b.op(
        "addHoursMod24",
        Ty::chain([t(), Ty::Int], t()),
        "Increase the hour of a time by a number of hours, modulo 24",
        |a, _| {
            let c = parse_24h(text_arg(a, 0)?)?;
            let hours = int_arg(a, 1)?;
            let delta = hours.checked_mul(60).ok_or_else(|| fail("overflow"))?;
            Ok(Value::from(c.shift_minutes(delta).render()))
        },
    );
    b.t2(
        "appendTimeUnit",
        "Append minutes or seconds to a time as another :NN field",
        |s, unit| {
            let u = unit.trim();
            let n: u32 = u.parse().map_err(|_| fail("not a number"))?;
            if n > 59 || s.trim().is_empty() {
                return Err(fail("time unit out of range"));
            }
            Ok(format!("{}:{n:02}", s.trim()))
        },
    );
    let tb = tables;
    b.t2(
        "convertTimeZone",
        "Convert a time with a zone abbreviation into another zone",
        move |s, zone| convert_zone(s, zone, &tb),
    );
    b.t1("getHour", "Hour of a time, two digits", |s| {
        to_24h(s).map(|c| format!("{:02}", c.hour))
    });
    b.t1("getMinutes", "Minutes of a time, two digits", |s| {
        parse_clock(s).map(|(c, _)| format!("{:02}", c.minute))
    });
    b.tb("isTime", "Is a valid 12-hour or 24-hour time", |s| {
        parse_clock(s).is_ok()
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn converts_between_formats() {
        assert_eq!(to_24h("08:55 PM").unwrap().render(), "20:55");
        assert_eq!(to_24h("12:30 AM").unwrap().render(), "00:30");
        assert_eq!(to_12h("00:30").unwrap(), "12:30 AM");
        assert_eq!(to_12h("13:05:09").unwrap(), "01:05:09 PM");
        assert!(to_12h("24:00").is_err());
    }

    #[test]
    fn shifts_wrap_around_midnight() {
        let c = parse_24h("21:20").unwrap();
        assert_eq!(c.shift_minutes(5 * 60).render(), "02:20");
        assert_eq!(c.shift_minutes(-22 * 60).render(), "23:20");
    }

    #[test]
    fn converts_time_zones() {
        let t = Tables::builtin();
        assert_eq!(convert_zone("10:00 UTC", "CET", &t).unwrap(), "11:00 CET");
        assert_eq!(convert_zone("EST 23:30", "UTC", &t).unwrap(), "04:30 UTC");
        assert!(convert_zone("10:00", "CET", &t).is_err());
    }
}
