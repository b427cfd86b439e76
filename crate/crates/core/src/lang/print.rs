//! Canonical litmus text.

use std::fmt;

use super::*;

struct ExprIn<'a> {
    e: &'a Expr,
    addr: bool,
    locs: &'a [String],
}

fn loc_name(locs: &[String], l: Loc) -> String {
    locs.get(l as usize).cloned().unwrap_or_else(|| format!("loc{l}"))
}

impl ExprIn<'_> {
    fn sub<'b>(&'b self, e: &'b Expr) -> ExprIn<'b> {
        ExprIn { e, addr: self.addr, locs: self.locs }
    }

    // Levels: 0 = sum, 1 = product, 2 = atom.
    fn write(&self, f: &mut fmt::Formatter<'_>, level: u8) -> fmt::Result {
        let (own, lhs, rhs, op) = match self.e {
            Expr::Num(n) => return write!(f, "{n}"),
            Expr::Reg(r) if self.addr => return write!(f, "${r}"),
            Expr::Reg(r) => return f.write_str(r),
            Expr::Loc(l) if self.addr => return f.write_str(&loc_name(self.locs, *l)),
            Expr::Loc(l) => return write!(f, "&{}", loc_name(self.locs, *l)),
            Expr::Plus(a, b) => (0, a, b, " + "),
            Expr::Sub(a, b) => (0, a, b, " - "),
            Expr::Times(a, b) => (1, a, b, " * "),
        };
        if level > own {
            f.write_str("(")?;
        }
        self.sub(lhs).write(f, own)?;
        f.write_str(op)?;
        self.sub(rhs).write(f, own + 1)?;
        if level > own {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for ExprIn<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

struct Printer<'a> {
    locs: &'a [String],
    out: String,
}

impl Printer<'_> {
    fn v<'b>(&'b self, e: &'b Expr) -> ExprIn<'b> {
        ExprIn { e, addr: false, locs: self.locs }
    }

    fn a<'b>(&'b self, e: &'b Expr) -> ExprIn<'b> {
        ExprIn { e, addr: true, locs: self.locs }
    }

    fn block(&mut self, c: &Cmd, indent: usize) {
        let cmds = c.block();
        for (i, c) in cmds.iter().enumerate() {
            self.out.push_str(&"  ".repeat(indent));
            self.cmd(c, indent);
            if i + 1 < cmds.len() {
                self.out.push(';');
            }
            self.out.push('\n');
        }
    }

    fn cmd(&mut self, c: &Cmd, indent: usize) {
        let s = match c {
            Cmd::Read { md, reg, addr } => format!("{reg} := R[{md}] [{}]", self.a(addr)),
            Cmd::Write { md, addr, val } => format!("W[{md}] [{}] {}", self.a(addr), self.v(val)),
            Cmd::Rmw { md, reg, addr, expected, new } => {
                format!("{reg} := RMW[{md}] [{}] {} {}", self.a(addr), self.atomish(expected), self.atomish(new))
            }
            Cmd::Fence(md) => format!("F[{md}]"),
            Cmd::Skip => "skip".into(),
            Cmd::Assign { reg, val } => format!("{reg} := {}", self.v(val)),
            Cmd::AsmRead { reg, addr } => format!("asm {reg} := mov [{}]", self.a(addr)),
            Cmd::AsmWrite { addr, val } => format!("asm mov [{}] {}", self.a(addr), self.v(val)),
            Cmd::AsmNtWrite { addr, val } => format!("asm movnt [{}] {}", self.a(addr), self.v(val)),
            Cmd::AsmRmw { reg, addr, expected, new } => {
                format!("asm {reg} := rmw [{}] {} {}", self.a(addr), self.atomish(expected), self.atomish(new))
            }
            Cmd::AsmMFence => "asm mfence".into(),
            Cmd::AsmSFence => "asm sfence".into(),
            Cmd::If(e, body) | Cmd::While(e, body) => {
                let kw = if matches!(c, Cmd::If(..)) { "if" } else { "while" };
                let head = format!("{kw} {} {{\n", self.v(e));
                self.out.push_str(&head);
                self.block(body, indent + 1);
                self.out.push_str(&"  ".repeat(indent));
                self.out.push('}');
                return;
            }
            Cmd::Seq(..) => unreachable!("block() flattens sequences"),
        };
        self.out.push_str(&s);
    }

    /// Juxtaposed operands are parenthesised unless atomic.
    fn atomish(&self, e: &Expr) -> String {
        match e {
            Expr::Num(_) | Expr::Reg(_) | Expr::Loc(_) => self.v(e).to_string(),
            _ => format!("({})", self.v(e)),
        }
    }
}

/// Canonical text of a single thread body.
pub fn cmd_to_string(c: &Cmd, locations: &[String]) -> String {
    let mut p = Printer { locs: locations, out: String::new() };
    p.block(c, 0);
    p.out
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.locations.is_empty() {
            writeln!(f, "locations {}", self.locations.join(" "))?;
        }
        for (tid, c) in &self.threads {
            writeln!(f, "thread {tid}:")?;
            let mut p = Printer { locs: &self.locations, out: String::new() };
            p.block(c, 1);
            f.write_str(&p.out)?;
        }
        Ok(())
    }
}

impl Predicate {
    pub fn render(&self, p: &Program) -> String {
        match self {
            Predicate::Ub => "UB".into(),
            Predicate::Conj(atoms) => atoms
                .iter()
                .map(|a| match a {
                    Atom::Reg(r, v) => format!("{r}={v}"),
                    Atom::Loc(l, v) => format!("{}={v}", p.loc_name(*l)),
                })
                .collect::<Vec<_>>()
                .join(" /\\ "),
        }
    }
}

impl fmt::Display for LitmusTest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "test {}", self.name)?;
        write!(f, "{}", self.program)?;
        if let Some(vs) = &self.values {
            let vs: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
            writeln!(f, "values {}", vs.join(" "))?;
        }
        for e in &self.expectations {
            let verdict = if e.allowed { "allowed" } else { "forbidden" };
            writeln!(f, "expect {} {verdict}: {}", e.model, e.pred.render(&self.program))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_litmus;

    #[test]
    fn round_trip_text() {
        let src = "test T
locations x y
thread 0:
  asm movnt [x] 1;
  if a * (b + 1) {
    W[rel] [y] a - (b - 1)
  };
  r := RMW[acqrel] [y] (1 + 1) &x
thread 3:
  skip
values 0 1 2
expect rc11ext forbidden: r=1 /\\ x=0
expect rc11 allowed: UB
";
        let t = parse_litmus(src).unwrap();
        assert_eq!(t.to_string(), src);
        assert_eq!(parse_litmus(&t.to_string()).unwrap(), t);
    }
}
