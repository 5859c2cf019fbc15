use super::tables::{Tables, HONORIFICS};
use super::{fail, Builder};
use crate::term::{EvalError, Group};

fn clean(word: &str) -> &str {
    word.trim_matches(|c: char| c == ',' || c == ';')
}

/// Honorifics match case-sensitively, with or without their trailing dot.
fn is_honorific(word: &str, tables: &Tables) -> bool {
    let t = tables.table(HONORIFICS);
    let w = clean(word);
    if w.is_empty() {
        return false;
    }
    t.get_exact(w).is_some()
        || t.get_exact(&format!("{w}.")).is_some()
        || w.strip_suffix('.')
            .is_some_and(|s| t.get_exact(s).is_some())
}

fn name_words<'a>(s: &'a str, tables: &Tables) -> Vec<&'a str> {
    s.split_whitespace()
        .filter(|w| !is_honorific(w, tables))
        .map(clean)
        .filter(|w| !w.is_empty())
        .collect()
}

fn initial(word: &str) -> Result<char, EvalError> {
    word.chars()
        .find(|c| c.is_alphabetic())
        .ok_or_else(|| fail("name without letters"))
}

fn first_last<'a>(s: &'a str, tables: &Tables) -> Result<(&'a str, &'a str), EvalError> {
    let words = name_words(s, tables);
    match words.as_slice() {
        [] => Err(fail("no name")),
        [only] => Ok((only, only)),
        [first, .., last] => Ok((first, last)),
    }
}

pub(crate) fn register(b: &mut Builder) {
    b.set_group(Group::Names);
    let tables = b.tables();

    let t = tables.clone();
    b.t1(
        "initials",
        "Initial of every name word, each followed by a dot",
        move |s| {
            let words = name_words(s, &t);
            if words.is_empty() {
                return Err(fail("no name"));
            }
            words
                .iter()
                .map(|w| initial(w).map(|c| format!("{}.", c.to_uppercase())))
                .collect()
        },
    );
    let t = tables.clone();
    b.t1(
        "reduceName",
        "First initial and last name, e.g. J.Smith, skipping honorifics",
        move |s| {
            let (first, last) = first_last(s, &t)?;
            Ok(format!("{}.{last}", initial(first)?))
        },
    );
    b.t2(
        "reduceNameFromParts",
        "Initial of a first name joined to a last name, e.g. J.Smith",
        |first, last| {
            let last = last.trim();
            if last.is_empty() {
                return Err(fail("empty last name"));
            }
            Ok(format!("{}.{last}", initial(first.trim())?))
        },
    );
    let t = tables.clone();
    b.t1(
        "makeLogin",
        "Lowercase first initial followed by the lowercase last name",
        move |s| {
            let (first, last) = first_last(s, &t)?;
            let mut out: String = initial(first)?.to_lowercase().collect();
            out.extend(
                last.chars()
                    .filter(|c| c.is_alphanumeric())
                    .flat_map(char::to_lowercase),
            );
            Ok(out)
        },
    );
    let t = tables.clone();
    b.t1(
        "getHonorific",
        "The honorific form in a name, or empty when there is none",
        move |s| {
            Ok(s.split_whitespace()
                .find(|w| is_honorific(w, &t))
                .map(clean)
                .unwrap_or("")
                .to_string())
        },
    );
    let t = tables.clone();
    b.t1(
        "removeHonorific",
        "Drop honorific forms from a name",
        move |s| Ok(name_words(s, &t).join(" ")),
    );
    let t = tables.clone();
    b.t1(
        "firstName",
        "First name word, skipping honorifics",
        move |s| first_last(s, &t).map(|(f, _)| f.to_string()),
    );
    let t = tables.clone();
    b.t1(
        "lastName",
        "Last name word, skipping honorifics",
        move |s| first_last(s, &t).map(|(_, l)| l.to_string()),
    );
    let t = tables;
    b.tb("isHonorific", "Is an honorific form", move |s| {
        is_honorific(s.trim(), &t)
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn honorifics_with_and_without_dot() {
        let t = Tables::builtin();
        assert!(is_honorific("Dr.", &t));
        assert!(is_honorific("Dr", &t));
        assert!(is_honorific("PhD", &t));
        assert!(is_honorific("Miss", &t));
        assert!(!is_honorific("dr.", &t));
        assert!(!is_honorific("B.", &t));
    }

    #[test]
    fn first_and_last_skip_titles() {
        let t = Tables::builtin();
        assert_eq!(
            first_last("Prof. Edward Davis", &t).unwrap(),
            ("Edward", "Davis")
        );
        assert_eq!(
            first_last("Louis Johnson, PhD", &t).unwrap(),
            ("Louis", "Johnson")
        );
    }
}
