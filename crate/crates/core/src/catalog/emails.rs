use super::{fail, Builder};
use crate::term::Group;

pub(crate) fn register(b: &mut Builder) {
    b.set_group(Group::Emails);
    b.t1("afterAt", "Everything after the '@' symbol", |s| {
        s.split_once('@')
            .map(|(_, d)| d.to_string())
            .ok_or_else(|| fail("no '@'"))
    });
    b.t1("beforeAt", "Everything before the '@' symbol", |s| {
        s.split_once('@')
            .map(|(u, _)| u.to_string())
            .ok_or_else(|| fail("no '@'"))
    });
    b.t2(
        "joinWithAt",
        "Join two strings with the '@' symbol",
        |a, b| Ok(format!("{a}@{b}")),
    );
    b.t1("appendAt", "Append the '@' symbol", |s| Ok(format!("{s}@")));
    b.t1("appendDotCom", "Append the '.com' top-level domain", |s| {
        Ok(format!("{s}.com"))
    });
    b.t1("dropTLD", "Remove the last dot-separated component", |s| {
        s.rsplit_once('.')
            .map(|(h, _)| h.to_string())
            .ok_or_else(|| fail("no top-level domain"))
    });
    b.t1("getTLD", "Last dot-separated component of a domain", |s| {
        s.rsplit_once('.')
            .map(|(_, t)| t.to_string())
            .filter(|t| !t.is_empty())
            .ok_or_else(|| fail("no top-level domain"))
    });
    b.tb("isEmail", "Looks like user@host.tld", |s| {
        s.split_once('@').is_some_and(|(u, d)| {
            !u.is_empty() && !d.contains('@') && d.contains('.') && !d.ends_with('.')
        })
    });
}

#[cfg(test)]
mod tests {
    use crate::catalog::Catalog;
    use crate::term::{evaluate, EvalBudget, Expr, Value};

    fn run(id: &str, args: &[&str]) -> Option<String> {
        let cat = Catalog::builtin();
        let p = cat.lookup(id).unwrap();
        let e = Expr::apply(Expr::prim(p), (0..args.len()).rev().map(Expr::Var));
        let env: Vec<Value> = args.iter().rev().map(|s| Value::from(*s)).collect();
        evaluate(&e, &env, EvalBudget::default())
            .ok()
            .and_then(|v| v.as_text().map(str::to_string))
    }

    #[test]
    fn splits_and_joins() {
        assert_eq!(
            run("afterAt", &["iabetrae@yahoo.es"]).as_deref(),
            Some("yahoo.es")
        );
        assert_eq!(
            run("beforeAt", &["iabetrae@yahoo.es"]).as_deref(),
            Some("iabetrae")
        );
        assert_eq!(run("afterAt", &["nobody"]), None);
        assert_eq!(
            run("joinWithAt", &["casper", "canal13"]).as_deref(),
            Some("casper@canal13")
        );
        assert_eq!(run("dropTLD", &["hotmail.com"]).as_deref(), Some("hotmail"));
        assert_eq!(run("getTLD", &["yahoo.es"]).as_deref(), Some("es"));
    }
}
