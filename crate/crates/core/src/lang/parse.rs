//! Litmus-file parser.
//!
//! Inside an address `[...]` bare identifiers name locations and `$r` names a
//! register; elsewhere bare identifiers are registers and `&x` is the address
//! of location `x`.

use std::collections::BTreeMap;

use thiserror::Error;

use super::*;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(Val),
    Sym(&'static str),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

const SYMBOLS: [&str; 15] = [":=", "/\\", "[", "]", "{", "}", "(", ")", ";", ":", "+", "-", "*", "&", "$"];
const SYMBOLS_TAIL: [&str; 2] = ["=", ","];

fn lex(text: &str, first_line: usize) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let line_no = first_line + li;
        let line = strip_comment(line);
        let bytes: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i];
            let col = i + 1;
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c.is_ascii_digit() {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = bytes[start..i].iter().collect();
                let n = s.parse().map_err(|_| ParseError { line: line_no, col, msg: format!("number `{s}` out of range") })?;
                out.push(Token { tok: Tok::Num(n), line: line_no, col });
                continue;
            }
            if c.is_alphabetic() || c == '_' {
                let start = i;
                while i < bytes.len() && (bytes[i].is_alphanumeric() || bytes[i] == '_') {
                    i += 1;
                }
                out.push(Token { tok: Tok::Ident(bytes[start..i].iter().collect()), line: line_no, col });
                continue;
            }
            let rest: String = bytes[i..].iter().collect();
            match SYMBOLS.iter().chain(SYMBOLS_TAIL.iter()).find(|s| rest.starts_with(**s)) {
                Some(s) => {
                    out.push(Token { tok: Tok::Sym(s), line: line_no, col });
                    i += s.chars().count();
                }
                None => return Err(ParseError { line: line_no, col, msg: format!("unexpected character `{c}`") }),
            }
        }
    }
    Ok(out)
}

fn strip_comment(line: &str) -> &str {
    let cut = [line.find('#'), line.find("//")].into_iter().flatten().min();
    match cut {
        Some(i) => &line[..i],
        None => line,
    }
}

const KEYWORDS: [&str; 18] = [
    "W", "R", "F", "RMW", "skip", "if", "while", "asm", "mov", "movnt", "mfence", "sfence", "rmw", "thread", "expect", "test", "values",
    "locations",
];

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    locations: Vec<String>,
    eof: (usize, usize),
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map(|t| (t.line, t.col)).unwrap_or(self.eof)
    }

    fn err<T>(&self, msg: impl Into<String>) -> PResult<T> {
        let (line, col) = self.here();
        Err(ParseError { line, col, msg: msg.into() })
    }

    fn describe(&self) -> String {
        match self.peek() {
            None => "end of input".into(),
            Some(Tok::Ident(s)) => format!("`{s}`"),
            Some(Tok::Num(n)) => format!("`{n}`"),
            Some(Tok::Sym(s)) => format!("`{s}`"),
        }
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(x)) if *x == s)
    }

    fn is_kw(&self, k: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(x)) if x == k)
    }

    fn expect_sym(&mut self, s: &str) -> PResult<()> {
        if self.is_sym(s) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected `{s}`, found {}", self.describe()))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek() {
            Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err(format!("expected identifier, found {}", self.describe())),
        }
    }

    fn number(&mut self) -> PResult<Val> {
        match self.peek() {
            Some(Tok::Num(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(n)
            }
            _ => self.err(format!("expected number, found {}", self.describe())),
        }
    }

    fn location(&mut self, name: String) -> Loc {
        match self.locations.iter().position(|l| *l == name) {
            Some(i) => i as Loc,
            None => {
                self.locations.push(name);
                (self.locations.len() - 1) as Loc
            }
        }
    }

    /// Mode inside `[...]`, checked against the command kind.
    fn mode(&mut self, kind: AccessKind) -> PResult<Mode> {
        let at = self.here();
        self.expect_sym("[")?;
        let mut text = String::new();
        while !self.is_sym("]") {
            match self.peek() {
                None => return self.err("unterminated access mode"),
                Some(Tok::Ident(s)) => text.push_str(s),
                Some(Tok::Num(n)) => text.push_str(&n.to_string()),
                Some(Tok::Sym(s)) => text.push_str(s),
            }
            self.pos += 1;
        }
        self.pos += 1;
        let kind_name = format!("{kind:?}").to_lowercase();
        match text.parse::<Mode>() {
            Ok(m) if kind.is_legal(m) => Ok(m),
            _ => Err(ParseError { line: at.0, col: at.1, msg: format!("illegal access mode `{text}` for a {kind_name} command") }),
        }
    }

    fn address(&mut self) -> PResult<Expr> {
        self.expect_sym("[")?;
        let e = self.expr(true)?;
        self.expect_sym("]")?;
        Ok(e)
    }

    fn expr(&mut self, addr: bool) -> PResult<Expr> {
        let mut lhs = self.term(addr)?;
        loop {
            if self.is_sym("+") {
                self.pos += 1;
                lhs = Expr::Plus(Box::new(lhs), Box::new(self.term(addr)?));
            } else if self.is_sym("-") {
                self.pos += 1;
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term(addr)?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self, addr: bool) -> PResult<Expr> {
        let mut lhs = self.atom(addr)?;
        while self.is_sym("*") {
            self.pos += 1;
            lhs = Expr::Times(Box::new(lhs), Box::new(self.atom(addr)?));
        }
        Ok(lhs)
    }

    fn atom(&mut self, addr: bool) -> PResult<Expr> {
        if self.is_sym("(") {
            self.pos += 1;
            let e = self.expr(addr)?;
            self.expect_sym(")")?;
            return Ok(e);
        }
        if self.is_sym("&") {
            self.pos += 1;
            let name = self.ident()?;
            return Ok(Expr::Loc(self.location(name)));
        }
        if self.is_sym("$") {
            self.pos += 1;
            return Ok(Expr::Reg(self.ident()?));
        }
        if let Some(Tok::Num(_)) = self.peek() {
            return Ok(Expr::Num(self.number()?));
        }
        let name = self.ident()?;
        Ok(if addr { Expr::Loc(self.location(name)) } else { Expr::Reg(name) })
    }

    fn block_end(&self) -> bool {
        self.peek().is_none() || self.is_sym("}") || self.is_kw("thread") || self.is_kw("expect") || self.is_kw("values") || self.is_kw("locations")
    }

    fn block(&mut self) -> PResult<Cmd> {
        let mut cmds = vec![self.cmd()?];
        while self.is_sym(";") {
            self.pos += 1;
            if self.block_end() {
                break;
            }
            cmds.push(self.cmd()?);
        }
        Ok(Cmd::seq(cmds))
    }

    fn body(&mut self) -> PResult<Cmd> {
        self.expect_sym("{")?;
        let b = self.block()?;
        self.expect_sym("}")?;
        Ok(b)
    }

    fn cmd(&mut self) -> PResult<Cmd> {
        let Some(Tok::Ident(head)) = self.peek().cloned() else {
            return self.err(format!("expected a command, found {}", self.describe()));
        };
        match head.as_str() {
            "skip" => {
                self.pos += 1;
                Ok(Cmd::Skip)
            }
            "W" => {
                self.pos += 1;
                let md = self.mode(AccessKind::Write)?;
                let addr = self.address()?;
                let val = self.expr(false)?;
                Ok(Cmd::Write { md, addr, val })
            }
            "F" => {
                self.pos += 1;
                Ok(Cmd::Fence(self.mode(AccessKind::Fence)?))
            }
            "if" | "while" => {
                self.pos += 1;
                let e = self.expr(false)?;
                let s = Box::new(self.body()?);
                Ok(if head == "if" { Cmd::If(e, s) } else { Cmd::While(e, s) })
            }
            "asm" => {
                self.pos += 1;
                self.asm()
            }
            _ if matches!(self.peek_at(1), Some(Tok::Sym(":="))) => {
                let reg = self.ident()?;
                self.pos += 1;
                if self.is_kw("R") {
                    self.pos += 1;
                    let md = self.mode(AccessKind::Read)?;
                    let addr = self.address()?;
                    Ok(Cmd::Read { md, reg, addr })
                } else if self.is_kw("RMW") {
                    self.pos += 1;
                    let md = self.mode(AccessKind::Rmw)?;
                    let addr = self.address()?;
                    let expected = self.expr(false)?;
                    let new = self.expr(false)?;
                    Ok(Cmd::Rmw { md, reg, addr, expected, new })
                } else {
                    Ok(Cmd::Assign { reg, val: self.expr(false)? })
                }
            }
            _ => self.err(format!("expected a command, found {}", self.describe())),
        }
    }

    fn asm(&mut self) -> PResult<Cmd> {
        let Some(Tok::Ident(op)) = self.peek().cloned() else {
            return self.err(format!("expected an assembly instruction, found {}", self.describe()));
        };
        match op.as_str() {
            "mov" | "movnt" => {
                self.pos += 1;
                let addr = self.address()?;
                let val = self.expr(false)?;
                Ok(if op == "mov" { Cmd::AsmWrite { addr, val } } else { Cmd::AsmNtWrite { addr, val } })
            }
            "mfence" => {
                self.pos += 1;
                Ok(Cmd::AsmMFence)
            }
            "sfence" => {
                self.pos += 1;
                Ok(Cmd::AsmSFence)
            }
            _ => {
                let reg = self.ident()?;
                self.expect_sym(":=")?;
                if self.is_kw("mov") {
                    self.pos += 1;
                    Ok(Cmd::AsmRead { reg, addr: self.address()? })
                } else if self.is_kw("rmw") {
                    self.pos += 1;
                    let addr = self.address()?;
                    let expected = self.expr(false)?;
                    let new = self.expr(false)?;
                    Ok(Cmd::AsmRmw { reg, addr, expected, new })
                } else {
                    self.err(format!("expected `mov` or `rmw`, found {}", self.describe()))
                }
            }
        }
    }

    fn threads(&mut self) -> PResult<BTreeMap<Tid, Cmd>> {
        let mut threads = BTreeMap::new();
        while self.is_kw("thread") {
            self.pos += 1;
            let at = self.here();
            let tid = self.number()?;
            let tid = Tid::try_from(tid).map_err(|_| ParseError { line: at.0, col: at.1, msg: "thread id too large".into() })?;
            self.expect_sym(":")?;
            let body = self.block()?;
            if threads.insert(tid, body).is_some() {
                return Err(ParseError { line: at.0, col: at.1, msg: format!("duplicate thread {tid}") });
            }
        }
        Ok(threads)
    }
}

/// Parses a complete litmus file.
pub fn parse_litmus(text: &str) -> Result<LitmusTest, ParseError> {
    let mut name = String::from("anonymous");
    let mut first_line = 1;
    let mut body = text;
    // The optional `test NAME` header takes the rest of its line verbatim.
    for (i, line) in text.lines().enumerate() {
        let l = strip_comment(line).trim();
        if l.is_empty() {
            continue;
        }
        if let Some(rest) = l.strip_prefix("test ") {
            name = rest.trim().to_string();
            let offset: usize = text.lines().take(i + 1).map(|l| l.len() + 1).sum();
            body = text.get(offset.min(text.len())..).unwrap_or("");
            first_line = i + 2;
        }
        break;
    }
    let toks = lex(body, first_line)?;
    let eof = toks.last().map(|t| (t.line, t.col + 1)).unwrap_or((first_line, 1));
    let mut p = Parser { toks, pos: 0, locations: Vec::new(), eof };
    let mut threads = BTreeMap::new();
    let mut values = None;
    let mut raw_expect = Vec::new();
    while p.peek().is_some() {
        if p.is_kw("thread") {
            for (t, c) in p.threads()? {
                if threads.insert(t, c).is_some() {
                    return p.err(format!("duplicate thread {t}"));
                }
            }
        } else if p.is_kw("locations") {
            p.pos += 1;
            while let Some(Tok::Ident(_)) = p.peek() {
                if p.block_end() {
                    break;
                }
                let name = p.ident()?;
                if p.locations.contains(&name) {
                    return p.err(format!("location `{name}` declared twice"));
                }
                p.locations.push(name);
            }
        } else if p.is_kw("values") {
            p.pos += 1;
            let mut vs = vec![p.number()?];
            while matches!(p.peek(), Some(Tok::Num(_))) || p.is_sym(",") {
                if p.is_sym(",") {
                    p.pos += 1;
                }
                vs.push(p.number()?);
            }
            values = Some(vs);
        } else if p.is_kw("expect") {
            p.pos += 1;
            let at = p.here();
            let model: ModelId = p.ident_or_kw()?.parse().map_err(|m| ParseError { line: at.0, col: at.1, msg: m })?;
            let allowed = match p.ident_or_kw()?.as_str() {
                "allowed" => true,
                "forbidden" => false,
                other => return Err(ParseError { line: at.0, col: at.1, msg: format!("expected `allowed` or `forbidden`, found `{other}`") }),
            };
            p.expect_sym(":")?;
            let mut atoms = Vec::new();
            let mut ub = false;
            loop {
                let at = p.here();
                let name = p.ident_or_kw()?;
                if name == "UB" {
                    ub = true;
                } else {
                    p.expect_sym("=")?;
                    atoms.push((name, p.number()?, at));
                }
                if p.is_sym("/\\") {
                    p.pos += 1;
                } else {
                    break;
                }
            }
            if ub && !atoms.is_empty() {
                return Err(ParseError { line: at.0, col: at.1, msg: "`UB` cannot be combined with other conditions".into() });
            }
            raw_expect.push((model, allowed, ub, atoms));
        } else {
            return p.err(format!("expected `thread`, `locations`, `values` or `expect`, found {}", p.describe()));
        }
    }
    if threads.is_empty() {
        return p.err("litmus test has no threads");
    }
    let program = Program::new(threads, p.locations.clone());
    program.validate().map_err(|msg| ParseError { line: first_line, col: 1, msg })?;
    let regs = program.registers();
    let mut expectations = Vec::new();
    for (model, allowed, ub, atoms) in raw_expect {
        let pred = if ub {
            Predicate::Ub
        } else {
            let mut conj = Vec::new();
            for (name, v, at) in atoms {
                if regs.contains(&name) {
                    conj.push(Atom::Reg(name, v));
                } else if let Some(l) = program.loc_by_name(&name) {
                    conj.push(Atom::Loc(l, v));
                } else {
                    return Err(ParseError { line: at.0, col: at.1, msg: format!("`{name}` is neither a register nor a location of the program") });
                }
            }
            Predicate::Conj(conj)
        };
        expectations.push(Expectation { model, allowed, pred });
    }
    Ok(LitmusTest { name, program, expectations, values })
}

impl Parser {
    fn ident_or_kw(&mut self) -> PResult<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err(format!("expected identifier, found {}", self.describe())),
        }
    }
}

/// Parses thread declarations only, without a header or expectations.
pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    parse_litmus(text).map(|t| t.program)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MP_NT: &str = "test MP-NT
thread 0:
  asm movnt [x] 1;
  W[rel] [y] 1
thread 1:
  a := R[acq] [y];
  b := R[rlx] [x]
expect rc11ext allowed: a=1 /\\ b=0
";

    #[test]
    fn parses_mp_nt() {
        let t = parse_litmus(MP_NT).unwrap();
        assert_eq!(t.name, "MP-NT");
        assert_eq!(t.program.locations, vec!["x", "y"]);
        let t0 = t.program.threads[&0].block();
        assert_eq!(t0[0], Cmd::AsmNtWrite { addr: Expr::Loc(0), val: Expr::Num(1) });
        assert_eq!(t0[1], Cmd::Write { md: Mode::Rel, addr: Expr::Loc(1), val: Expr::Num(1) });
        let t1 = t.program.threads[&1].block();
        assert_eq!(t1[0], Cmd::Read { md: Mode::Acq, reg: "a".into(), addr: Expr::Loc(1) });
        assert_eq!(t1[1], Cmd::Read { md: Mode::Rlx, reg: "b".into(), addr: Expr::Loc(0) });
        assert_eq!(
            t.expectations,
            vec![Expectation {
                model: ModelId::Rc11Ext,
                allowed: true,
                pred: Predicate::Conj(vec![Atom::Reg("a".into(), 1), Atom::Reg("b".into(), 0)])
            }]
        );
        assert_eq!(t.program.classify(), ProgramClass::Mixed);
    }

    #[test]
    fn rejects_illegal_modes() {
        let e = parse_litmus("thread 0: W[sc=acq] [x] 1").unwrap_err();
        assert!(e.msg.contains("illegal access mode `sc=acq`"), "{e}");
        let e = parse_litmus("thread 0: a := R[rel] [x]").unwrap_err();
        assert!(e.msg.contains("read"), "{e}");
        assert_eq!((e.line, e.col), (1, 17));
    }

    #[test]
    fn parses_skip_thread() {
        let p = parse_program("thread 0: skip").unwrap();
        assert_eq!(p.threads[&0], Cmd::Skip);
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let e = parse_litmus("test T\nthread 0:\n  W[rlx] [x] ;\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_litmus("thread 0: skip\nexpect rc11 allowed: q=1").unwrap_err();
        assert!(e.msg.contains("`q`"), "{e}");
    }

    #[test]
    fn addresses_and_values() {
        let p = parse_program("thread 0: r := 2 + 3; W[na] [x + $r] &y; asm a := rmw [z] 0 1").unwrap();
        let b = p.threads[&0].block();
        assert_eq!(b[1].address(), Some(&Expr::Plus(Box::new(Expr::Loc(0)), Box::new(Expr::reg("r")))));
        assert!(matches!(&b[1], Cmd::Write { val: Expr::Loc(1), .. }));
        assert!(matches!(&b[2], Cmd::AsmRmw { .. }));
    }

    #[test]
    fn shared_registers_rejected() {
        let e = parse_litmus("thread 0: a := R[rlx] [x]\nthread 1: a := R[rlx] [y]").unwrap_err();
        assert!(e.msg.contains("register `a`"), "{e}");
    }
}
