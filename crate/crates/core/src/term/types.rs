use std::fmt;

/// Monomorphic simple types. `Text` is a base type of its own rather than
/// a list of characters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ty {
    Text,
    Char,
    Int,
    Bool,
    List(Box<Ty>),
    Func(Box<Ty>, Box<Ty>),
}

impl Ty {
    pub fn list(elem: Ty) -> Ty {
        Ty::List(Box::new(elem))
    }

    pub fn func(arg: Ty, ret: Ty) -> Ty {
        Ty::Func(Box::new(arg), Box::new(ret))
    }

    /// Builds the curried chain `a1 -> a2 -> ... -> ret`.
    pub fn chain(args: impl IntoIterator<Item = Ty>, ret: Ty) -> Ty {
        let args: Vec<Ty> = args.into_iter().collect();
        args.into_iter().rev().fold(ret, |acc, a| Ty::func(a, acc))
    }

    pub fn is_func(&self) -> bool {
        matches!(self, Ty::Func(..))
    }

    /// Number of arrows along the spine.
    pub fn arity(&self) -> usize {
        match self {
            Ty::Func(_, ret) => 1 + ret.arity(),
            _ => 0,
        }
    }

    /// Splits a curried type into its argument types and final result.
    pub fn uncurry(&self) -> (Vec<&Ty>, &Ty) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Ty::Func(a, r) = cur {
            args.push(a.as_ref());
            cur = r;
        }
        (args, cur)
    }

    /// Nesting depth of type constructors (base types are 1).
    pub fn nesting(&self) -> usize {
        match self {
            Ty::List(e) => 1 + e.nesting(),
            Ty::Func(a, r) => 1 + a.nesting().max(r.nesting()),
            _ => 1,
        }
    }
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ty::Text => write!(f, "Text"),
            Ty::Char => write!(f, "Char"),
            Ty::Int => write!(f, "Int"),
            Ty::Bool => write!(f, "Bool"),
            Ty::List(e) => write!(f, "[{e}]"),
            Ty::Func(a, r) => {
                if a.is_func() {
                    write!(f, "({a}) -> {r}")
                } else {
                    write!(f, "{a} -> {r}")
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_and_uncurry_agree() {
        let ty = Ty::chain([Ty::Text, Ty::Text, Ty::Text], Ty::Text);
        assert_eq!(ty.arity(), 3);
        let (args, ret) = ty.uncurry();
        assert_eq!(args, vec![&Ty::Text, &Ty::Text, &Ty::Text]);
        assert_eq!(ret, &Ty::Text);
    }

    #[test]
    fn display_parenthesizes_function_arguments() {
        let pred = Ty::func(Ty::Char, Ty::Bool);
        let ty = Ty::chain([pred, Ty::Text], Ty::Text);
        assert_eq!(ty.to_string(), "(Char -> Bool) -> Text -> Text");
        assert_eq!(Ty::list(Ty::Text).to_string(), "[Text]");
    }
}
