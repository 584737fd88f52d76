//! Qubit types and general types.
//!
//! Products are lists: `Prod` is always kept right-nested, so `B^3` is
//! `Prod(B, Prod(B, B))`.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Type {
    B,
    Prod(Box<Type>, Box<Type>),
    S(Box<Type>),
    Arrow(Box<Type>, Box<Type>),
}

/// Which of the syntactic classes a type belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    /// Member of the non-superposed (duplicable) types: `B^n` or `Ψ ⇒ A`.
    pub basis: bool,
    /// Member of the qubit types.
    pub qubit: bool,
}

impl Type {
    pub fn bn(n: usize) -> Type {
        assert!(n >= 1, "B^0 is not a type");
        let mut t = Type::B;
        for _ in 1..n {
            t = Type::Prod(Box::new(Type::B), Box::new(t));
        }
        t
    }

    pub fn s(inner: Type) -> Type {
        Type::S(Box::new(inner))
    }

    pub fn lift(self, k: usize) -> Type {
        (0..k).fold(self, |t, _| Type::s(t))
    }

    pub fn arrow(param: Type, result: Type) -> Type {
        Type::Arrow(Box::new(param), Box::new(result))
    }

    /// Product constructor that keeps lists right-nested.
    pub fn prod(left: Type, right: Type) -> Type {
        match left {
            Type::Prod(a, b) => Type::prod(*a, Type::prod(*b, right)),
            l => Type::Prod(Box::new(l), Box::new(right)),
        }
    }

    /// Builds a list type from its elements; panics on an empty list.
    pub fn from_list(mut elems: Vec<Type>) -> Type {
        let mut acc = elems.pop().expect("empty product");
        while let Some(e) = elems.pop() {
            acc = Type::prod(e, acc);
        }
        acc
    }

    /// The elements of a list type (a single element if not a product).
    pub fn list(&self) -> Vec<&Type> {
        let mut out = Vec::new();
        let mut cur = self;
        while let Type::Prod(a, b) = cur {
            out.push(&**a);
            cur = b;
        }
        out.push(cur);
        out
    }

    /// `Some(n)` when the type is `B^n`.
    pub fn as_bn(&self) -> Option<usize> {
        match self {
            Type::B => Some(1),
            Type::Prod(a, b) if **a == Type::B => b.as_bn().map(|n| n + 1),
            _ => None,
        }
    }

    pub fn is_qubit(&self) -> bool {
        match self {
            Type::B => true,
            Type::S(a) => a.is_qubit(),
            Type::Prod(a, b) => a.is_qubit() && b.is_qubit(),
            Type::Arrow(..) => false,
        }
    }

    pub fn is_basis(&self) -> bool {
        self.as_bn().is_some() || matches!(self, Type::Arrow(..))
    }

    pub fn classify(&self) -> Classification {
        Classification {
            basis: self.is_basis(),
            qubit: self.is_qubit(),
        }
    }

    pub fn is_s(&self) -> bool {
        matches!(self, Type::S(_))
    }

    /// Number of outer `S` layers and the remaining core.
    pub fn strip_s(&self) -> (usize, &Type) {
        let mut k = 0;
        let mut cur = self;
        while let Type::S(a) = cur {
            k += 1;
            cur = a;
        }
        (k, cur)
    }

    /// Drops one outer `S` if present.
    pub fn un_s(&self) -> &Type {
        match self {
            Type::S(a) => a,
            t => t,
        }
    }

    /// Checks that every arrow parameter is a qubit type.
    pub fn well_formed(&self) -> Result<(), Type> {
        match self {
            Type::B => Ok(()),
            Type::S(a) => a.well_formed(),
            Type::Prod(a, b) => {
                if !a.is_qubit() {
                    return Err((**a).clone());
                }
                if !b.is_qubit() {
                    return Err((**b).clone());
                }
                Ok(())
            }
            Type::Arrow(p, r) => {
                if !p.is_qubit() {
                    return Err((**p).clone());
                }
                p.well_formed()?;
                r.well_formed()
            }
        }
    }

    /// Lifting order: `a ≤ b` when `b` is reachable from `a` by inserting
    /// `S` layers (at the root or under products and arrow results).
    pub fn leq(&self, other: &Type) -> bool {
        if self == other {
            return true;
        }
        match (self, other) {
            (Type::S(a), Type::S(b)) if a.leq(b) => true,
            (_, Type::S(b)) => self.leq(b),
            (Type::Prod(a1, b1), Type::Prod(a2, b2)) => a1.leq(a2) && b1.leq(b2),
            (Type::Arrow(p1, r1), Type::Arrow(p2, r2)) => p1 == p2 && r1.leq(r2),
            _ => false,
        }
    }

    /// Least upper bound in the lifting order, if any.
    pub fn lub(&self, other: &Type) -> Option<Type> {
        if self == other {
            return Some(self.clone());
        }
        let (i, a) = self.strip_s();
        let (j, b) = other.strip_s();
        let core = match (a, b) {
            (Type::B, Type::B) => Type::B,
            (Type::Prod(x1, y1), Type::Prod(x2, y2)) => Type::prod(x1.lub(x2)?, y1.lub(y2)?),
            (Type::Arrow(p1, r1), Type::Arrow(p2, r2)) if p1 == p2 => {
                Type::arrow((**p1).clone(), r1.lub(r2)?)
            }
            _ => return None,
        };
        Some(core.lift(i.max(j)))
    }

    /// Least type reachable from both by prepending outer `S` layers only.
    pub fn join(&self, other: &Type) -> Option<Type> {
        let i = self.strip_s().0;
        let j = other.strip_s().0;
        let (low, high, gap) = if i <= j {
            (self, other, j - i)
        } else {
            (other, self, i - j)
        };
        let lifted = low.clone().lift(gap);
        (&lifted == high).then_some(lifted)
    }
}

fn fmt_elem(t: &Type, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        Type::Arrow(..) => write!(f, "({t})"),
        _ => write!(f, "{t}"),
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::B => write!(f, "B"),
            Type::S(a) => write!(f, "S({a})"),
            Type::Arrow(p, r) => {
                fmt_elem(p, f)?;
                write!(f, " => {r}")
            }
            Type::Prod(..) => {
                let elems = self.list();
                let mut i = 0;
                let mut first = true;
                while i < elems.len() {
                    if !first {
                        write!(f, " * ")?;
                    }
                    first = false;
                    if *elems[i] == Type::B {
                        let mut n = 0;
                        while i + n < elems.len() && *elems[i + n] == Type::B {
                            n += 1;
                        }
                        if n == 1 {
                            write!(f, "B")?;
                        } else {
                            write!(f, "B^{n}")?;
                        }
                        i += n;
                    } else {
                        fmt_elem(elems[i], f)?;
                        i += 1;
                    }
                }
                Ok(())
            }
        }
    }
}
