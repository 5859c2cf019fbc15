use super::{bool_arg, char_arg, fail, int_arg, list_arg, t, text_arg, Builder, R};
use crate::term::{EvalError, Evaluator, Group, Ty, Value};

fn pred() -> Ty {
    Ty::func(Ty::Char, Ty::Bool)
}

fn text_list() -> Ty {
    Ty::list(Ty::Text)
}

/// Haskell's `isPunctuation` restricted to ASCII: connectors, dashes,
/// brackets, quotes and other punctuation, but not math or currency symbols.
pub(crate) fn is_punctuation(c: char) -> bool {
    c.is_ascii_punctuation() && !matches!(c, '$' | '+' | '<' | '=' | '>' | '^' | '`' | '|' | '~')
        || (!c.is_ascii() && matches!(c, '¡' | '¿' | '«' | '»' | '\u{2013}' | '\u{2014}' | '\u{2026}'))
}

/// Splits a two-field input `left & right` at the first `&`.
pub(crate) fn split_fields(s: &str) -> Option<(&str, &str)> {
    s.split_once('&').map(|(a, b)| (a.trim(), b.trim()))
}

fn closer(open: char) -> Option<char> {
    match open {
        '(' => Some(')'),
        '[' => Some(']'),
        '{' => Some('}'),
        '<' => Some('>'),
        _ => None,
    }
}

fn opener(close: char) -> Option<char> {
    match close {
        ')' => Some('('),
        ']' => Some('['),
        '}' => Some('{'),
        '>' => Some('<'),
        _ => None,
    }
}

/// Closes unclosed brackets at the end and opens unopened ones at the start.
pub(crate) fn complete_brackets(s: &str) -> String {
    let mut stack = Vec::new();
    let mut missing_open = Vec::new();
    for c in s.chars() {
        if closer(c).is_some() {
            stack.push(c);
        } else if let Some(o) = opener(c) {
            if stack.last() == Some(&o) {
                stack.pop();
            } else {
                missing_open.push(o);
            }
        }
    }
    let mut out: String = missing_open.iter().rev().collect();
    out.push_str(s);
    out.extend(stack.iter().rev().filter_map(|&o| closer(o)));
    out
}

fn text_fn(
    f: impl Fn(&Value, &str, &mut Evaluator) -> Result<String, EvalError> + Send + Sync + 'static,
) -> impl Fn(&[Value], &mut Evaluator) -> R + Send + Sync + 'static {
    move |a, ev| f(&a[0], text_arg(a, 1)?, ev).map(Value::from)
}

pub(crate) fn register_default(b: &mut Builder) {
    b.set_group(Group::Default);
    b.constant("zero", Ty::Int, "The integer 0", Value::Int(0));
    b.constant("one", Ty::Int, "The integer 1", Value::Int(1));
    b.constant("true", Ty::Bool, "Boolean True", Value::Bool(true));
    b.constant("false", Ty::Bool, "Boolean False", Value::Bool(false));

    let int2 = Ty::chain([Ty::Int, Ty::Int], Ty::Int);
    b.add("plus", "(+)", int2.clone(), "Integer addition", |a, _| {
        int_arg(a, 0)?
            .checked_add(int_arg(a, 1)?)
            .map(Value::Int)
            .ok_or_else(|| fail("overflow"))
    });
    b.add("minus", "(-)", int2, "Integer subtraction", |a, _| {
        int_arg(a, 0)?
            .checked_sub(int_arg(a, 1)?)
            .map(Value::Int)
            .ok_or_else(|| fail("overflow"))
    });

    let bool2 = Ty::chain([Ty::Bool, Ty::Bool], Ty::Bool);
    b.op(
        "not",
        Ty::func(Ty::Bool, Ty::Bool),
        "Boolean negation",
        |a, _| Ok(Value::Bool(!bool_arg(a, 0)?)),
    );
    b.add(
        "and",
        "(&&)",
        bool2.clone(),
        "Boolean conjunction",
        |a, _| Ok(Value::Bool(bool_arg(a, 0)? && bool_arg(a, 1)?)),
    );
    b.add("or", "(||)", bool2, "Boolean disjunction", |a, _| {
        Ok(Value::Bool(bool_arg(a, 0)? || bool_arg(a, 1)?))
    });

    type Class = fn(char) -> bool;
    let classes: [(&str, &str, Class); 6] = [
        ("isLower", "Lowercase letter", char::is_lowercase),
        ("isUpper", "Uppercase letter", char::is_uppercase),
        ("isDigit", "ASCII decimal digit", |c| c.is_ascii_digit()),
        ("isPunctuation", "Punctuation character", is_punctuation),
        ("isSpace", "Whitespace character", char::is_whitespace),
        ("isAlpha", "Alphabetic character", char::is_alphabetic),
    ];
    for (id, doc, f) in classes {
        b.op(id, pred(), doc, move |a, _| {
            Ok(Value::Bool(f(char_arg(a, 0)?)))
        });
    }

    b.add(
        "append",
        "(++)",
        Ty::chain([t(), t()], t()),
        "Concatenate two strings",
        |a, _| {
            let mut s = text_arg(a, 0)?.to_string();
            s.push_str(text_arg(a, 1)?);
            Ok(Value::from(s))
        },
    );
    b.t1("reverse", "Reverse the characters of a string", |s| {
        Ok(s.chars().rev().collect())
    });

    let hof = Ty::chain([pred(), t()], t());
    b.op(
        "filter",
        hof.clone(),
        "Keep the characters satisfying a predicate",
        text_fn(|p, s, ev| {
            let mut out = String::new();
            for c in s.chars() {
                if ev.apply_bool(p, Value::Char(c))? {
                    out.push(c);
                }
            }
            Ok(out)
        }),
    );
    b.op(
        "takeWhile",
        hof.clone(),
        "Longest prefix whose characters satisfy a predicate",
        text_fn(|p, s, ev| {
            let mut out = String::new();
            for c in s.chars() {
                if !ev.apply_bool(p, Value::Char(c))? {
                    break;
                }
                out.push(c);
            }
            Ok(out)
        }),
    );
    b.op(
        "dropWhile",
        hof,
        "Drop the longest prefix whose characters satisfy a predicate",
        text_fn(|p, s, ev| {
            let mut chars = s.char_indices();
            for (i, c) in chars.by_ref() {
                if !ev.apply_bool(p, Value::Char(c))? {
                    return Ok(s[i..].to_string());
                }
            }
            Ok(String::new())
        }),
    );

    let int_text = Ty::chain([Ty::Int, t()], t());
    b.op("take", int_text.clone(), "First n characters", |a, _| {
        let n = int_arg(a, 0)?.max(0) as usize;
        Ok(Value::from(
            text_arg(a, 1)?.chars().take(n).collect::<String>(),
        ))
    });
    b.op(
        "drop",
        int_text,
        "All but the first n characters",
        |a, _| {
            let n = int_arg(a, 0)?.max(0) as usize;
            Ok(Value::from(
                text_arg(a, 1)?.chars().skip(n).collect::<String>(),
            ))
        },
    );
    b.op(
        "length",
        Ty::func(t(), Ty::Int),
        "Number of characters",
        |a, _| Ok(Value::Int(text_arg(a, 0)?.chars().count() as i64)),
    );

    b.op(
        "words",
        Ty::func(t(), text_list()),
        "Split on whitespace",
        |a, _| {
            let items = text_arg(a, 0)?
                .split_whitespace()
                .map(Value::from)
                .collect();
            Ok(Value::list(Ty::Text, items))
        },
    );
    b.op(
        "unwords",
        Ty::func(text_list(), t()),
        "Join with single spaces",
        |a, _| {
            let parts: Vec<&str> = list_arg(a, 0)?.iter().filter_map(Value::as_text).collect();
            Ok(Value::from(parts.join(" ")))
        },
    );
    b.add(
        "reverseList",
        "reverse",
        Ty::func(text_list(), text_list()),
        "Reverse a list of strings",
        |a, _| {
            let items: Vec<Value> = list_arg(a, 0)?.iter().rev().cloned().collect();
            Ok(Value::list(Ty::Text, items))
        },
    );
    b.op(
        "head",
        Ty::func(text_list(), t()),
        "First element of a non-empty list",
        |a, _| {
            list_arg(a, 0)?
                .first()
                .cloned()
                .ok_or_else(|| fail("empty list"))
        },
    );
    b.op(
        "last",
        Ty::func(text_list(), t()),
        "Last element of a non-empty list",
        |a, _| {
            list_arg(a, 0)?
                .last()
                .cloned()
                .ok_or_else(|| fail("empty list"))
        },
    );
}

pub(crate) fn register_freetext(b: &mut Builder) {
    b.set_group(Group::Freetext);
    for (id, lit, doc) in [
        ("dash", "-", "Constant for dash ('-') symbol"),
        ("slash", "/", "Constant for slash ('/') symbol"),
        ("dot", ".", "Constant for dot ('.') symbol"),
        ("space", " ", "Constant for a single space"),
        ("comma", ",", "Constant for comma (',') symbol"),
        ("colon", ":", "Constant for colon (':') symbol"),
        ("at", "@", "Constant for at ('@') symbol"),
        ("lparen", "(", "Constant for opening parenthesis"),
        ("rparen", ")", "Constant for closing parenthesis"),
    ] {
        b.text_const(id, lit, doc);
    }
    b.constant("two", Ty::Int, "The integer 2", Value::Int(2));

    b.t1("toUpper", "Convert to uppercase", |s| Ok(s.to_uppercase()));
    b.t1("toLower", "Convert to lowercase", |s| Ok(s.to_lowercase()));
    b.t1("capitalize", "Uppercase the first character", |s| {
        let mut cs = s.chars();
        Ok(match cs.next() {
            Some(c) => c.to_uppercase().chain(cs).collect(),
            None => String::new(),
        })
    });
    b.t1("trim", "Strip leading and trailing whitespace", |s| {
        Ok(s.trim().to_string())
    });
    b.t1("firstField", "Left field of a `left & right` input", |s| {
        Ok(split_fields(s).map_or(s.trim(), |(l, _)| l).to_string())
    });
    b.t1(
        "secondField",
        "Right field of a `left & right` input",
        |s| {
            split_fields(s)
                .map(|(_, r)| r.to_string())
                .ok_or_else(|| fail("no `&` separator"))
        },
    );
    b.t1("firstWord", "First whitespace-separated word", |s| {
        s.split_whitespace()
            .next()
            .map(str::to_string)
            .ok_or_else(|| fail("no words"))
    });
    b.t1("lastWord", "Last whitespace-separated word", |s| {
        s.split_whitespace()
            .last()
            .map(str::to_string)
            .ok_or_else(|| fail("no words"))
    });
    b.t1(
        "deletePunctuation",
        "Delete punctuation, symbols and whitespace, keeping letters and digits",
        |s| Ok(s.chars().filter(|c| c.is_alphanumeric()).collect()),
    );
    b.t1(
        "completeBrackets",
        "Add the missing opening or closing brackets",
        |s| Ok(complete_brackets(s)),
    );

    b.t2(
        "getStartToFirstSymbol",
        "Prefix before the first occurrence of a symbol (whole string if absent)",
        |s, sym| Ok(s.find(sym).map_or(s, |i| &s[..i]).to_string()),
    );
    b.t2(
        "getAfterFirstSymbol",
        "Suffix after the first occurrence of a symbol (whole string if absent)",
        |s, sym| Ok(s.find(sym).map_or(s, |i| &s[i + sym.len()..]).to_string()),
    );
    b.t2(
        "removeSymbol",
        "Delete every occurrence of a symbol",
        |s, sym| {
            if sym.is_empty() {
                return Ok(s.to_string());
            }
            Ok(s.replace(sym, ""))
        },
    );
    b.t3(
        "changePunctuationString",
        "Replace a punctuation sign by another one",
        |s, old, new| {
            if old.is_empty() {
                return Err(fail("empty pattern"));
            }
            Ok(s.replace(old, new))
        },
    );
    b.t3(
        "getBetween",
        "Text between the first opening symbol and the next closing symbol",
        |s, open, close| {
            if open.is_empty() || close.is_empty() {
                return Err(fail("empty delimiter"));
            }
            let start = s.find(open).ok_or_else(|| fail("no opening symbol"))? + open.len();
            let len = s[start..]
                .find(close)
                .ok_or_else(|| fail("no closing symbol"))?;
            Ok(s[start..start + len].to_string())
        },
    );

    b.op(
        "parseInt",
        Ty::func(t(), Ty::Int),
        "Read a decimal integer",
        |a, _| {
            text_arg(a, 0)?
                .trim()
                .parse::<i64>()
                .map(Value::Int)
                .map_err(|_| fail("not an integer"))
        },
    );
    b.op(
        "showInt",
        Ty::func(Ty::Int, t()),
        "Decimal rendering of an integer",
        |a, _| Ok(Value::from(int_arg(a, 0)?.to_string())),
    );
    b.tb("isNumber", "Non-empty and made only of digits", |s| {
        !s.is_empty() && s.chars().all(|c| c.is_ascii_digit())
    });
    b.tb("isCapitalized", "Starts with an uppercase letter", |s| {
        s.chars().next().is_some_and(char::is_uppercase)
    });
}
