use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    R,
    S,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constant {
    Pi,
    E,
}

impl Constant {
    pub fn value(self) -> f64 {
        match self {
            Constant::Pi => std::f64::consts::PI,
            Constant::E => std::f64::consts::E,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Tanh,
    Exp,
    Log,
    Sqrt,
    Abs,
}

impl Func {
    pub const ALL: [Func; 10] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Sinh,
        Func::Cosh,
        Func::Tanh,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
        Func::Abs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// Syntax tree of a warp factor `ψ(r, s)`.
#[derive(Debug, Clone, PartialEq)]
pub enum WarpExpr {
    Num(f64),
    Var(Var),
    Const(Constant),
    Neg(Box<WarpExpr>),
    Bin(BinOp, Box<WarpExpr>, Box<WarpExpr>),
    Func(Func, Box<WarpExpr>),
}

impl WarpExpr {
    pub fn num(v: f64) -> Self {
        WarpExpr::Num(v)
    }

    pub fn r() -> Self {
        WarpExpr::Var(Var::R)
    }

    pub fn s() -> Self {
        WarpExpr::Var(Var::S)
    }

    pub fn neg(e: WarpExpr) -> Self {
        WarpExpr::Neg(Box::new(e))
    }

    pub fn bin(op: BinOp, l: WarpExpr, r: WarpExpr) -> Self {
        WarpExpr::Bin(op, Box::new(l), Box::new(r))
    }

    pub fn func(f: Func, arg: WarpExpr) -> Self {
        WarpExpr::Func(f, Box::new(arg))
    }

    /// True when `s` occurs anywhere in the tree.
    pub fn depends_on_s(&self) -> bool {
        match self {
            WarpExpr::Var(v) => *v == Var::S,
            WarpExpr::Num(_) | WarpExpr::Const(_) => false,
            WarpExpr::Neg(e) | WarpExpr::Func(_, e) => e.depends_on_s(),
            WarpExpr::Bin(_, l, r) => l.depends_on_s() || r.depends_on_s(),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            WarpExpr::Num(_) | WarpExpr::Var(_) | WarpExpr::Const(_) => 1,
            WarpExpr::Neg(e) | WarpExpr::Func(_, e) => 1 + e.node_count(),
            WarpExpr::Bin(_, l, r) => 1 + l.node_count() + r.node_count(),
        }
    }

    // Grammar levels: 1 sum, 2 product, 3 signed factor, 4 power, 5 atom.
    fn level(&self) -> u8 {
        match self {
            WarpExpr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
            WarpExpr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
            WarpExpr::Neg(_) => 3,
            WarpExpr::Bin(BinOp::Pow, ..) => 4,
            WarpExpr::Num(v) if *v < 0.0 || v.is_sign_negative() => 3,
            _ => 5,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, need: u8) -> fmt::Result {
        if self.level() < need {
            write!(f, "(")?;
            self.write_at(f, 0)?;
            return write!(f, ")");
        }
        match self {
            WarpExpr::Num(v) => write_number(f, *v),
            WarpExpr::Var(Var::R) => write!(f, "r"),
            WarpExpr::Var(Var::S) => write!(f, "s"),
            WarpExpr::Const(Constant::Pi) => write!(f, "pi"),
            WarpExpr::Const(Constant::E) => write!(f, "e"),
            WarpExpr::Neg(e) => {
                write!(f, "-")?;
                e.write_at(f, 4)
            }
            WarpExpr::Func(func, e) => {
                write!(f, "{}(", func.name())?;
                e.write_at(f, 0)?;
                write!(f, ")")
            }
            WarpExpr::Bin(op, l, r) => {
                let (ln, rn) = match op {
                    BinOp::Add | BinOp::Sub => (1, 2),
                    BinOp::Mul | BinOp::Div => (2, 3),
                    BinOp::Pow => (5, 3),
                };
                l.write_at(f, ln)?;
                match op {
                    BinOp::Add | BinOp::Sub => write!(f, " {} ", op.symbol())?,
                    _ => write!(f, "{}", op.symbol())?,
                }
                r.write_at(f, rn)
            }
        }
    }
}

fn write_number(f: &mut fmt::Formatter<'_>, v: f64) -> fmt::Result {
    if v.is_sign_negative() {
        // Only reachable for hand-built trees; keeps the output parseable.
        write!(f, "-")?;
        return write_number(f, -v);
    }
    // `{:?}` is the shortest representation that round-trips exactly.
    let text = format!("{v:?}");
    let text = text.strip_suffix(".0").unwrap_or(&text);
    write!(f, "{text}")
}

impl fmt::Display for WarpExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}
