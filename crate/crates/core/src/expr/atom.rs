//! Generators of the expression field and their global intern table.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock, RwLock};

use super::Expr;
use crate::jet::MultiIndex;

pub type Sym = Arc<str>;

pub fn sym(s: &str) -> Sym {
    Arc::from(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elementary {
    Exp,
    Sin,
    Cos,
    Sinh,
    Cosh,
    LambertW,
}

impl Elementary {
    pub fn name(self) -> &'static str {
        match self {
            Elementary::Exp => "exp",
            Elementary::Sin => "sin",
            Elementary::Cos => "cos",
            Elementary::Sinh => "sinh",
            Elementary::Cosh => "cosh",
            Elementary::LambertW => "W",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "exp" => Elementary::Exp,
            "sin" => Elementary::Sin,
            "cos" => Elementary::Cos,
            "sinh" => Elementary::Sinh,
            "cosh" => Elementary::Cosh,
            "W" => Elementary::LambertW,
            _ => return None,
        })
    }
}

/// A generator of the differential field.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Atom {
    Indep(Sym),
    Jet { dep: Sym, index: MultiIndex },
    Const(Sym),
    /// `F_{,slots}(args)`; `slots` is sorted, 0-based.
    Opaque { name: Sym, slots: Vec<u8>, args: Vec<Expr> },
    Elem { func: Elementary, arg: Expr },
    /// `base^(1/q)`, `q >= 2`.
    Root { base: Expr, q: u32 },
}

impl Atom {
    pub fn class_rank(&self) -> u8 {
        match self {
            Atom::Indep(_) => 0,
            Atom::Jet { .. } => 1,
            Atom::Const(_) => 2,
            Atom::Opaque { .. } => 3,
            Atom::Elem { .. } | Atom::Root { .. } => 4,
        }
    }

    /// Deterministic total order used for display and for every choice
    /// the algorithms make between generators.
    pub fn display_cmp(&self, other: &Atom) -> Ordering {
        let r = self.class_rank().cmp(&other.class_rank());
        if r != Ordering::Equal {
            return r;
        }
        match (self, other) {
            (Atom::Indep(a), Atom::Indep(b)) | (Atom::Const(a), Atom::Const(b)) => a.cmp(b),
            (Atom::Jet { dep: d1, index: i1 }, Atom::Jet { dep: d2, index: i2 }) => {
                d1.cmp(d2).then_with(|| i1.cmp(i2))
            }
            (
                Atom::Opaque { name: n1, slots: s1, args: a1 },
                Atom::Opaque { name: n2, slots: s2, args: a2 },
            ) => n1
                .cmp(n2)
                .then_with(|| s1.len().cmp(&s2.len()))
                .then_with(|| s1.cmp(s2))
                .then_with(|| cmp_expr_lists(a1, a2)),
            (Atom::Elem { func: f1, arg: a1 }, Atom::Elem { func: f2, arg: a2 }) => {
                f1.cmp(f2).then_with(|| a1.display_cmp(a2))
            }
            (Atom::Elem { .. }, Atom::Root { .. }) => Ordering::Less,
            (Atom::Root { .. }, Atom::Elem { .. }) => Ordering::Greater,
            (Atom::Root { base: b1, q: q1 }, Atom::Root { base: b2, q: q2 }) => {
                q1.cmp(q2).then_with(|| b1.display_cmp(b2))
            }
            _ => Ordering::Equal,
        }
    }

    pub fn jet(dep: &str, index: MultiIndex) -> Atom {
        Atom::Jet { dep: Sym::from(dep), index }
    }
}

fn cmp_expr_lists(a: &[Expr], b: &[Expr]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| {
        for (x, y) in a.iter().zip(b) {
            let c = x.display_cmp(y);
            if c != Ordering::Equal {
                return c;
            }
        }
        Ordering::Equal
    })
}

pub struct AtomInfo {
    pub id: u32,
    pub atom: Atom,
}

/// Interned generator handle. Cheap to copy; compares by intern id.
#[derive(Clone, Copy)]
pub struct Gen(&'static AtomInfo);

impl Gen {
    pub fn intern(atom: Atom) -> Gen {
        let table = table();
        if let Some(g) = table.read().expect("intern table poisoned").get(&atom) {
            return *g;
        }
        let mut w = table.write().expect("intern table poisoned");
        if let Some(g) = w.get(&atom) {
            return *g;
        }
        let info: &'static AtomInfo = Box::leak(Box::new(AtomInfo {
            id: w.len() as u32,
            atom: atom.clone(),
        }));
        let g = Gen(info);
        w.insert(atom, g);
        g
    }

    pub fn atom(&self) -> &'static Atom {
        &self.0.atom
    }

    pub fn id(&self) -> u32 {
        self.0.id
    }

    pub fn is_exp(&self) -> bool {
        matches!(self.0.atom, Atom::Elem { func: Elementary::Exp, .. })
    }

    pub fn is_cosh(&self) -> bool {
        matches!(self.0.atom, Atom::Elem { func: Elementary::Cosh, .. })
    }

    pub fn root_degree(&self) -> Option<u32> {
        match self.0.atom {
            Atom::Root { q, .. } => Some(q),
            _ => None,
        }
    }

    pub fn display_cmp(&self, other: &Gen) -> Ordering {
        if self.id() == other.id() {
            Ordering::Equal
        } else {
            self.atom().display_cmp(other.atom())
        }
    }
}

impl PartialEq for Gen {
    fn eq(&self, other: &Self) -> bool {
        self.0.id == other.0.id
    }
}
impl Eq for Gen {}

impl Hash for Gen {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.id.hash(state)
    }
}

impl PartialOrd for Gen {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Gen {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.id.cmp(&other.0.id)
    }
}

impl fmt::Debug for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::display::atom_string(self.atom()))
    }
}

fn table() -> &'static RwLock<HashMap<Atom, Gen>> {
    static TABLE: OnceLock<RwLock<HashMap<Atom, Gen>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(HashMap::new()))
}
