//! Gate constructors and the gate-set configuration language.
//!
//! A gate set names one single-qubit generator `S` and one two-qubit generator family
//! `T(target, control)`. Together they fix every block of a ladder circuit.
//!
//! ```text
//! file    := "single:" S-expr NEWLINE "two:" T-expr
//! S-expr  := S-token ("*" S-token)*       S-token := "H" | "X" | "T" | "R(" INT ")"
//! T-expr  := T-token ("*" T-token)*       T-token := "CX" | "CP(" angle ")" | "EXP(" PP "," angle ")"
//! PP      := two of X, Y, Z (first acts on the target, second on the control)
//! angle   := [SIGN] RATIONAL "*" "pi" "/" "2^" SYM | [SIGN] RATIONAL "*" "pi"
//! RATIONAL:= INT ["/" INT]
//! SYM     := "i" (target) | "j" (control) | "d" (j - i + 1) | INT
//! ```
//!
//! Products are written in circuit order: the leftmost factor acts first, so
//! `H * X` realizes the matrix `X·H`. Whitespace is ignored and `#` starts a comment.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use num_rational::Rational64;
use thiserror::Error;

use crate::numerics::{Complex, DenseMatrix, ONE, ZERO};
use crate::{Error, Result};

/// `e^{2πi·num/den}`, exact at multiples of a quarter turn.
pub(crate) fn unit_phase(num: i64, den: u64) -> Complex {
    let den_i = den as i128;
    let num = (num as i128).rem_euclid(den_i);
    if (4 * num) % den_i == 0 {
        return match 4 * num / den_i {
            0 => ONE,
            1 => Complex::new(0.0, 1.0),
            2 => Complex::new(-1.0, 0.0),
            _ => Complex::new(0.0, -1.0),
        };
    }
    Complex::from_polar(1.0, 2.0 * PI * num as f64 / den as f64)
}

/// `R_k = diag(1, e^{2πi/2^k})` for `k ≥ 1`.
pub fn make_phase_gate(k: i64) -> Result<DenseMatrix> {
    if k < 1 {
        return Err(Error::InvalidPhaseIndex(k));
    }
    let phase = if k < 63 {
        unit_phase(1, 1u64 << k)
    } else {
        Complex::from_polar(1.0, 2.0 * PI * (-(k as f64)).exp2())
    };
    Ok(DenseMatrix::from_raw(2, vec![ONE, ZERO, ZERO, phase]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SingleToken {
    H,
    X,
    T,
    R(u32),
}

impl SingleToken {
    pub fn matrix(self) -> Result<DenseMatrix> {
        match self {
            SingleToken::H => Ok(DenseMatrix::from_raw(
                2,
                vec![
                    Complex::new(FRAC_1_SQRT_2, 0.0),
                    Complex::new(FRAC_1_SQRT_2, 0.0),
                    Complex::new(FRAC_1_SQRT_2, 0.0),
                    Complex::new(-FRAC_1_SQRT_2, 0.0),
                ],
            )),
            SingleToken::X => Ok(DenseMatrix::from_raw(2, vec![ZERO, ONE, ONE, ZERO])),
            SingleToken::T => make_phase_gate(3),
            SingleToken::R(k) => make_phase_gate(k as i64),
        }
    }
}

impl fmt::Display for SingleToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SingleToken::H => f.write_str("H"),
            SingleToken::X => f.write_str("X"),
            SingleToken::T => f.write_str("T"),
            SingleToken::R(k) => write!(f, "R({k})"),
        }
    }
}

/// Matrix of a named single-qubit gate: `"H"`, `"X"` or `"T"`.
pub fn make_named_single(token: &str) -> Result<DenseMatrix> {
    match token {
        "H" => SingleToken::H.matrix(),
        "X" => SingleToken::X.matrix(),
        "T" => SingleToken::T.matrix(),
        other => Err(Error::InvalidArgument(format!(
            "unknown single-qubit gate {other:?}"
        ))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> DenseMatrix {
        let i = Complex::new(0.0, 1.0);
        let data = match self {
            Pauli::X => vec![ZERO, ONE, ONE, ZERO],
            Pauli::Y => vec![ZERO, -i, i, ZERO],
            Pauli::Z => vec![ONE, ZERO, ZERO, -ONE],
        };
        DenseMatrix::from_raw(2, data)
    }

    fn from_char(c: char) -> Option<Self> {
        match c {
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pauli::X => "X",
            Pauli::Y => "Y",
            Pauli::Z => "Z",
        })
    }
}

/// `exp(iθ·(P⊗Q))` with `P` on the high-order qubit.
///
/// Uses `cos θ·I + i·sin θ·(P⊗Q)`, exact because `(P⊗Q)² = I`.
pub fn make_pauli_exponential(p: Pauli, q: Pauli, theta: f64) -> DenseMatrix {
    let pq = p.matrix().tensor(&q.matrix());
    let (s, c) = theta.sin_cos();
    let data = pq
        .as_slice()
        .iter()
        .enumerate()
        .map(|(idx, z)| {
            let diag = if idx % 5 == 0 { c } else { 0.0 };
            Complex::new(diag, 0.0) + Complex::new(0.0, s) * z
        })
        .collect();
    DenseMatrix::from_raw(4, data)
}

/// Which index the angle divisor exponent is read from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DivisorSymbol {
    /// `i`, the target qubit.
    Target,
    /// `j`, the control qubit.
    Control,
    /// `d = j − i + 1`.
    Distance,
    Const(u32),
}

/// `angle(i, j) = c·π / 2^s`; with no divisor the angle is `c·π`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AngleSchedule {
    pub coefficient: Rational64,
    pub divisor: Option<DivisorSymbol>,
}

impl AngleSchedule {
    pub fn new(coefficient: Rational64, divisor: Option<DivisorSymbol>) -> Self {
        Self {
            coefficient,
            divisor,
        }
    }

    pub fn exponent(&self, target: usize, control: usize) -> Result<Option<i64>> {
        let s = match self.divisor {
            None => return Ok(None),
            Some(DivisorSymbol::Target) => target as i64,
            Some(DivisorSymbol::Control) => control as i64,
            Some(DivisorSymbol::Distance) => control as i64 - target as i64 + 1,
            Some(DivisorSymbol::Const(m)) => m as i64,
        };
        if s < 0 {
            return Err(Error::NegativeExponent {
                exponent: s,
                target,
                control,
            });
        }
        Ok(Some(s))
    }

    pub fn evaluate(&self, target: usize, control: usize) -> Result<f64> {
        let c = *self.coefficient.numer() as f64 / *self.coefficient.denom() as f64;
        let scale = match self.exponent(target, control)? {
            None => 1.0,
            Some(s) => (-(s as f64)).exp2(),
        };
        Ok(c * PI * scale)
    }

    /// `e^{i·angle}`, exact when the angle is a multiple of π/2.
    fn phase(&self, target: usize, control: usize) -> Result<Complex> {
        let s = self.exponent(target, control)?.unwrap_or(0);
        let (num, den) = (*self.coefficient.numer(), *self.coefficient.denom());
        // c·π/2^s = 2π·num / (2·den·2^s)
        if s < 40 {
            if let Some(d) = (den as u64).checked_mul(2 << s) {
                return Ok(unit_phase(num, d));
            }
        }
        Ok(Complex::from_polar(1.0, self.evaluate(target, control)?))
    }
}

impl fmt::Display for AngleSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*pi", self.coefficient)?;
        match self.divisor {
            None => Ok(()),
            Some(DivisorSymbol::Target) => f.write_str("/2^i"),
            Some(DivisorSymbol::Control) => f.write_str("/2^j"),
            Some(DivisorSymbol::Distance) => f.write_str("/2^d"),
            Some(DivisorSymbol::Const(m)) => write!(f, "/2^{m}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TwoToken {
    /// Controlled-X.
    Cx,
    /// Controlled phase `diag(1, 1, 1, e^{i·angle})`.
    Cp(AngleSchedule),
    /// `exp(i·angle·P_target ⊗ Q_control)`.
    Exp(Pauli, Pauli, AngleSchedule),
}

impl TwoToken {
    /// 4×4 matrix in local ordering: control is the high bit, target the low bit.
    pub fn realize(&self, target: usize, control: usize) -> Result<DenseMatrix> {
        match self {
            TwoToken::Cx => Ok(DenseMatrix::from_raw(
                4,
                vec![
                    ONE, ZERO, ZERO, ZERO, //
                    ZERO, ONE, ZERO, ZERO, //
                    ZERO, ZERO, ZERO, ONE, //
                    ZERO, ZERO, ONE, ZERO,
                ],
            )),
            TwoToken::Cp(angle) => {
                let phase = angle.phase(target, control)?;
                Ok(DenseMatrix::from_raw(
                    4,
                    vec![
                        ONE, ZERO, ZERO, ZERO, //
                        ZERO, ONE, ZERO, ZERO, //
                        ZERO, ZERO, ONE, ZERO, //
                        ZERO, ZERO, ZERO, phase,
                    ],
                ))
            }
            TwoToken::Exp(p, q, angle) => {
                let theta = angle.evaluate(target, control)?;
                // Control is the high bit locally, so the control Pauli goes first.
                Ok(make_pauli_exponential(*q, *p, theta))
            }
        }
    }
}

impl fmt::Display for TwoToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TwoToken::Cx => f.write_str("CX"),
            TwoToken::Cp(a) => write!(f, "CP({a})"),
            TwoToken::Exp(p, q, a) => write!(f, "EXP({p}{q}, {a})"),
        }
    }
}

/// Circuit-ordered product of single-qubit tokens.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SingleGateExpr(Vec<SingleToken>);

impl SingleGateExpr {
    pub fn new(factors: Vec<SingleToken>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidArgument(
                "empty single-qubit expression".into(),
            ));
        }
        if factors.iter().any(|t| matches!(t, SingleToken::R(0))) {
            return Err(Error::InvalidPhaseIndex(0));
        }
        Ok(Self(factors))
    }

    pub fn factors(&self) -> &[SingleToken] {
        &self.0
    }

    pub fn matrix(&self) -> Result<DenseMatrix> {
        fold_circuit_order(self.0.iter().map(|t| t.matrix()))
    }
}

impl fmt::Display for SingleGateExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_product(f, &self.0)
    }
}

/// Circuit-ordered product of two-qubit tokens.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TwoGateExpr(Vec<TwoToken>);

impl TwoGateExpr {
    pub fn new(factors: Vec<TwoToken>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidArgument("empty two-qubit expression".into()));
        }
        Ok(Self(factors))
    }

    pub fn factors(&self) -> &[TwoToken] {
        &self.0
    }

    pub fn realize(&self, target: usize, control: usize) -> Result<DenseMatrix> {
        realize_two_gate(self, target, control)
    }
}

impl fmt::Display for TwoGateExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_product(f, &self.0)
    }
}

fn write_product<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    for (k, t) in items.iter().enumerate() {
        if k > 0 {
            f.write_str(" * ")?;
        }
        write!(f, "{t}")?;
    }
    Ok(())
}

/// `M_last ··· M_first`.
fn fold_circuit_order(mats: impl Iterator<Item = Result<DenseMatrix>>) -> Result<DenseMatrix> {
    let mut acc: Option<DenseMatrix> = None;
    for m in mats {
        let m = m?;
        acc = Some(match acc {
            None => m,
            Some(prev) => m.mul(&prev)?,
        });
    }
    acc.ok_or_else(|| Error::InvalidArgument("empty gate product".into()))
}

/// Realizes `T(target i, control j)` as a 4×4 matrix (control high, target low).
pub fn realize_two_gate(expr: &TwoGateExpr, target: usize, control: usize) -> Result<DenseMatrix> {
    if target == control {
        return Err(Error::InvalidPlacement {
            target,
            control: Some(control),
            n_qubits: 0,
        });
    }
    fold_circuit_order(expr.0.iter().map(|t| t.realize(target, control)))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GateSetConfig {
    pub single: SingleGateExpr,
    pub two: TwoGateExpr,
}

/// Ladder gate set that realizes the quantum Fourier transform (with bit reversal).
pub const QFT_CONFIG: &str = "single: H\ntwo: CP(2*pi/2^d)";

/// The five generating gate sets studied for non-sparsity, in table order.
pub const GATE_TABLE: [&str; 5] = [
    "single: T\ntwo: CX",
    "single: H\ntwo: CX * CP(2*pi/2^j)",
    "single: H * X\ntwo: CP(2*pi/2^j)",
    "single: H\ntwo: EXP(XX, 1*pi/2^j) * EXP(ZZ, 1*pi/2^j)",
    "single: T\ntwo: EXP(ZZ, -1*pi/2^j)",
];

impl GateSetConfig {
    pub fn parse(text: &str) -> std::result::Result<Self, ParseError> {
        parse_gateset_config(text)
    }

    pub fn qft() -> Self {
        Self::parse(QFT_CONFIG).expect("built-in config parses")
    }

    /// Row `index` (0-based) of [`GATE_TABLE`].
    pub fn table_row(index: usize) -> Option<Self> {
        GATE_TABLE
            .get(index)
            .map(|t| Self::parse(t).expect("built-in config parses"))
    }

    /// Hadamard with an Ising-type coupling `EXP(PQ, π/2^j)`.
    pub fn ising(p: Pauli, q: Pauli) -> Self {
        Self {
            single: SingleGateExpr(vec![SingleToken::H]),
            two: TwoGateExpr(vec![TwoToken::Exp(
                p,
                q,
                AngleSchedule::new(Rational64::from_integer(1), Some(DivisorSymbol::Control)),
            )]),
        }
    }
}

impl fmt::Display for GateSetConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "single: {}\ntwo: {}", self.single, self.two)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unknown token {0:?}")]
    UnknownToken(String),
    #[error("malformed angle: {0}")]
    MalformedAngle(String),
    #[error("empty {0} expression")]
    EmptyExpression(&'static str),
    #[error("expected {0}")]
    Expected(&'static str),
    #[error("phase gate index must be at least 1")]
    InvalidPhaseIndex,
    #[error("missing `{0}` line")]
    MissingLine(&'static str),
    #[error("unexpected trailing content")]
    Trailing,
}

/// Parse failure with a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

pub fn parse_gateset_config(text: &str) -> std::result::Result<GateSetConfig, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(no, raw)| (no + 1, raw.split('#').next().unwrap_or("")))
        .filter(|(_, l)| !l.trim().is_empty());

    let last_line = text.lines().count().max(1);
    let missing = |what| ParseError {
        line: last_line,
        column: 1,
        kind: ParseErrorKind::MissingLine(what),
    };

    let (no, line) = lines.next().ok_or_else(|| missing("single:"))?;
    let mut cur = Cursor::new(line, no);
    cur.expect_keyword("single", "`single:`")?;
    let single = cur.single_expr()?;
    cur.end()?;

    let (no, line) = lines.next().ok_or_else(|| missing("two:"))?;
    let mut cur = Cursor::new(line, no);
    cur.expect_keyword("two", "`two:`")?;
    let two = cur.two_expr()?;
    cur.end()?;

    if let Some((no, line)) = lines.next() {
        let column = line.chars().take_while(|c| c.is_whitespace()).count() + 1;
        return Err(ParseError {
            line: no,
            column,
            kind: ParseErrorKind::Trailing,
        });
    }
    Ok(GateSetConfig { single, two })
}

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    _src: &'a str,
}

type PResult<T> = std::result::Result<T, ParseError>;

impl<'a> Cursor<'a> {
    fn new(src: &'a str, line: usize) -> Self {
        Self {
            chars: src.chars().collect(),
            pos: 0,
            line,
            _src: src,
        }
    }

    fn err_at(&self, pos: usize, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: self.line,
            column: pos + 1,
            kind,
        }
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        self.err_at(self.pos, kind)
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char, what: &'static str) -> PResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(ParseErrorKind::Expected(what)))
        }
    }

    fn word(&mut self) -> (usize, String) {
        self.skip_ws();
        let start = self.pos;
        while self
            .chars
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_')
        {
            self.pos += 1;
        }
        (start, self.chars[start..self.pos].iter().collect())
    }

    fn expect_keyword(&mut self, kw: &str, what: &'static str) -> PResult<()> {
        let (start, w) = self.word();
        if w != kw {
            return Err(self.err_at(start, ParseErrorKind::Expected(what)));
        }
        self.expect(':', what)
    }

    fn end(&mut self) -> PResult<()> {
        if self.peek().is_some() {
            Err(self.err(ParseErrorKind::Trailing))
        } else {
            Ok(())
        }
    }

    fn int(&mut self) -> Option<(usize, u64)> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().ok().map(|v| (start, v))
    }

    fn product<T>(
        &mut self,
        what: &'static str,
        mut token: impl FnMut(&mut Self) -> PResult<T>,
    ) -> PResult<Vec<T>> {
        if self.peek().is_none() {
            return Err(self.err(ParseErrorKind::EmptyExpression(what)));
        }
        let mut out = vec![token(self)?];
        while self.eat('*') {
            out.push(token(self)?);
        }
        Ok(out)
    }

    fn single_expr(&mut self) -> PResult<SingleGateExpr> {
        let factors = self.product("single-qubit", Self::single_token)?;
        Ok(SingleGateExpr(factors))
    }

    fn single_token(&mut self) -> PResult<SingleToken> {
        let (start, w) = self.word();
        match w.as_str() {
            "H" => Ok(SingleToken::H),
            "X" => Ok(SingleToken::X),
            "T" => Ok(SingleToken::T),
            "R" => {
                self.expect('(', "`(` after R")?;
                let (at, k) = self
                    .int()
                    .ok_or_else(|| self.err(ParseErrorKind::Expected("integer phase index")))?;
                if k < 1 || k > u32::MAX as u64 {
                    return Err(self.err_at(at, ParseErrorKind::InvalidPhaseIndex));
                }
                self.expect(')', "`)`")?;
                Ok(SingleToken::R(k as u32))
            }
            "" => Err(self.err_at(start, ParseErrorKind::Expected("single-qubit gate"))),
            other => Err(self.err_at(start, ParseErrorKind::UnknownToken(other.into()))),
        }
    }

    fn two_expr(&mut self) -> PResult<TwoGateExpr> {
        let factors = self.product("two-qubit", Self::two_token)?;
        Ok(TwoGateExpr(factors))
    }

    fn two_token(&mut self) -> PResult<TwoToken> {
        let (start, w) = self.word();
        match w.as_str() {
            "CX" => Ok(TwoToken::Cx),
            "CP" => {
                self.expect('(', "`(` after CP")?;
                let a = self.angle()?;
                self.expect(')', "`)`")?;
                Ok(TwoToken::Cp(a))
            }
            "EXP" => {
                self.expect('(', "`(` after EXP")?;
                let (at, pp) = self.word();
                let paulis: Vec<Pauli> = pp.chars().filter_map(Pauli::from_char).collect();
                if pp.chars().count() != 2 || paulis.len() != 2 {
                    return Err(self.err_at(at, ParseErrorKind::UnknownToken(pp)));
                }
                self.expect(',', "`,` after Pauli pair")?;
                let a = self.angle()?;
                self.expect(')', "`)`")?;
                Ok(TwoToken::Exp(paulis[0], paulis[1], a))
            }
            "" => Err(self.err_at(start, ParseErrorKind::Expected("two-qubit gate"))),
            other => Err(self.err_at(start, ParseErrorKind::UnknownToken(other.into()))),
        }
    }

    fn angle(&mut self) -> PResult<AngleSchedule> {
        let start = {
            self.skip_ws();
            self.pos
        };
        let malformed =
            |s: &Self, msg: &str| s.err_at(start, ParseErrorKind::MalformedAngle(msg.into()));

        let negative = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let (_, num) = self
            .int()
            .ok_or_else(|| malformed(self, "expected a rational coefficient"))?;
        let mut den = 1u64;
        if self.eat('/') {
            den = self
                .int()
                .ok_or_else(|| malformed(self, "expected a denominator"))?
                .1;
            if den == 0 {
                return Err(malformed(self, "zero denominator"));
            }
        }
        if !self.eat('*') {
            return Err(malformed(self, "expected `*pi`"));
        }
        let (_, pi) = self.word();
        if pi != "pi" {
            return Err(malformed(self, "expected `pi`"));
        }
        let to_i64 = |v: u64| i64::try_from(v).map_err(|_| malformed(self, "coefficient overflow"));
        let num = to_i64(num)?;
        let den = to_i64(den)?;
        let coefficient = Rational64::new(if negative { -num } else { num }, den);

        if !self.eat('/') {
            return Ok(AngleSchedule::new(coefficient, None));
        }
        if self.int().map(|(_, b)| b) != Some(2) || !self.eat('^') {
            return Err(malformed(self, "expected `2^` divisor"));
        }
        let divisor = match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let (_, m) = self.int().expect("digit present");
                DivisorSymbol::Const(
                    u32::try_from(m).map_err(|_| malformed(self, "divisor overflow"))?,
                )
            }
            _ => match self.word().1.as_str() {
                "i" => DivisorSymbol::Target,
                "j" => DivisorSymbol::Control,
                "d" => DivisorSymbol::Distance,
                _ => {
                    return Err(malformed(
                        self,
                        "divisor symbol must be i, j, d or an integer",
                    ))
                }
            },
        };
        Ok(AngleSchedule::new(coefficient, Some(divisor)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::testutil::rng;
    use rand::Rng;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn close(a: &DenseMatrix, b: &DenseMatrix, tol: f64) -> bool {
        a.max_abs_diff(b).unwrap() < tol
    }

    /// Truncated Taylor series of `exp(i·A)`, independent of the closed form.
    fn series_exp_i(a: &DenseMatrix, terms: usize) -> DenseMatrix {
        let ia = a.scale(c(0.0, 1.0));
        let mut term = DenseMatrix::identity(a.dim());
        let mut sum = term.clone();
        for k in 1..terms {
            term = term.mul(&ia).unwrap().scale(c(1.0 / k as f64, 0.0));
            sum = DenseMatrix::from_raw(
                a.dim(),
                sum.as_slice()
                    .iter()
                    .zip(term.as_slice())
                    .map(|(x, y)| x + y)
                    .collect(),
            );
        }
        sum
    }

    #[test]
    fn phase_gate_examples() {
        let z = DenseMatrix::diagonal(&[ONE, c(-1.0, 0.0)]).unwrap();
        assert!(close(&make_phase_gate(1).unwrap(), &z, 1e-15));
        let s = DenseMatrix::diagonal(&[ONE, c(0.0, 1.0)]).unwrap();
        assert!(close(&make_phase_gate(2).unwrap(), &s, 1e-15));
        let t = make_phase_gate(3).unwrap();
        assert!((t.get(1, 1) - Complex::from_polar(1.0, PI / 4.0)).norm() < 1e-15);
        assert_eq!(t, make_named_single("T").unwrap());
        assert_eq!(make_phase_gate(0), Err(Error::InvalidPhaseIndex(0)));
        assert!(make_phase_gate(-3).is_err());
        assert!(make_phase_gate(80).unwrap().unitarity_residual() < 1e-15);
    }

    #[test]
    fn named_single_examples() {
        let h = make_named_single("H").unwrap();
        assert!(close(&h.mul(&h).unwrap(), &DenseMatrix::identity(2), 1e-15));
        assert!(make_named_single("Q").is_err());

        let hx = SingleGateExpr::new(vec![SingleToken::H, SingleToken::X])
            .unwrap()
            .matrix()
            .unwrap();
        let r = FRAC_1_SQRT_2;
        let expected = DenseMatrix::from_real_rows(&[vec![r, -r], vec![r, r]]).unwrap();
        assert!(close(&hx, &expected, 1e-15));
    }

    #[test]
    fn pauli_exponential_examples() {
        for p in [Pauli::X, Pauli::Y, Pauli::Z] {
            for q in [Pauli::X, Pauli::Y, Pauli::Z] {
                assert_eq!(make_pauli_exponential(p, q, 0.0), DenseMatrix::identity(4));
            }
        }
        let zz = make_pauli_exponential(Pauli::Z, Pauli::Z, PI / 2.0);
        let expected =
            DenseMatrix::diagonal(&[c(0.0, 1.0), c(0.0, -1.0), c(0.0, -1.0), c(0.0, 1.0)]).unwrap();
        assert!(close(&zz, &expected, 1e-15));

        let xy = Pauli::X
            .matrix()
            .tensor(&Pauli::Y.matrix())
            .scale(c(0.37, 0.0));
        let oracle = series_exp_i(&xy, 30);
        assert!(close(
            &make_pauli_exponential(Pauli::X, Pauli::Y, 0.37),
            &oracle,
            1e-12
        ));
    }

    #[test]
    fn pauli_exponential_inverse_pairs() {
        let mut rng = rng(42);
        let paulis = [Pauli::X, Pauli::Y, Pauli::Z];
        for _ in 0..20 {
            let theta = rng.gen_range(-PI..PI);
            let p = paulis[rng.gen_range(0..3)];
            let q = paulis[rng.gen_range(0..3)];
            let fwd = make_pauli_exponential(p, q, theta);
            let back = make_pauli_exponential(p, q, -theta);
            assert!(close(
                &fwd.mul(&back).unwrap(),
                &DenseMatrix::identity(4),
                1e-12
            ));
            assert!(fwd.unitarity_residual() < 1e-12);
        }
    }

    #[test]
    fn realize_two_gate_examples() {
        let cfg = GateSetConfig::parse("single: H\ntwo: CX").unwrap();
        let cx = cfg.two.realize(1, 2).unwrap();
        let perm = DenseMatrix::from_real_rows(&[
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
            vec![0.0, 0.0, 1.0, 0.0],
        ])
        .unwrap();
        assert_eq!(cx, perm);

        let cp = GateSetConfig::parse("single: H\ntwo: CP(2*pi/2^j)").unwrap();
        let m = cp.two.realize(1, 2).unwrap();
        assert_eq!(
            m,
            DenseMatrix::diagonal(&[ONE, ONE, ONE, c(0.0, 1.0)]).unwrap()
        );

        let row4 = GateSetConfig::table_row(3).unwrap();
        let got = row4.two.realize(1, 3).unwrap();
        let sum = DenseMatrix::from_raw(
            4,
            Pauli::X
                .matrix()
                .tensor(&Pauli::X.matrix())
                .as_slice()
                .iter()
                .zip(Pauli::Z.matrix().tensor(&Pauli::Z.matrix()).as_slice())
                .map(|(a, b)| (a + b) * (PI / 8.0))
                .collect(),
        );
        assert!(close(&got, &series_exp_i(&sum, 30), 1e-12));

        assert!(matches!(
            cfg.two.realize(2, 2),
            Err(Error::InvalidPlacement { .. })
        ));
    }

    #[test]
    fn exp_puts_first_pauli_on_target() {
        let cfg = GateSetConfig::parse("single: H\ntwo: EXP(XZ, 1/3*pi)").unwrap();
        let got = cfg.two.realize(1, 2).unwrap();
        // local ordering is (control, target), so Z⊗X
        assert_eq!(got, make_pauli_exponential(Pauli::Z, Pauli::X, PI / 3.0));
    }

    #[test]
    fn angle_schedules() {
        let parse_angle = |s: &str| match GateSetConfig::parse(&format!("single: H\ntwo: CP({s})"))
            .unwrap()
            .two
            .factors()[0]
        {
            TwoToken::Cp(a) => a,
            _ => unreachable!(),
        };
        let a = parse_angle("2*pi/2^d");
        assert!((a.evaluate(1, 2).unwrap() - PI / 2.0).abs() < 1e-15);
        assert!((a.evaluate(2, 5).unwrap() - PI / 8.0).abs() < 1e-15);
        assert_eq!(
            a.evaluate(3, 1),
            Err(Error::NegativeExponent {
                exponent: -1,
                target: 3,
                control: 1
            })
        );
        let a = parse_angle("-3/4*pi/2^i");
        assert!((a.evaluate(2, 1).unwrap() + 3.0 * PI / 16.0).abs() < 1e-15);
        let a = parse_angle("1*pi/2^3");
        assert!((a.evaluate(5, 1).unwrap() - PI / 8.0).abs() < 1e-15);
        let a = parse_angle("1*pi");
        assert_eq!(a.evaluate(1, 2).unwrap(), PI);
        assert_eq!(a.phase(1, 2).unwrap(), c(-1.0, 0.0));
    }

    #[test]
    fn parses_table_rows() {
        let row2 = GateSetConfig::parse("single: H\ntwo: CX * CP(2*pi/2^j)").unwrap();
        assert_eq!(row2.single.factors(), &[SingleToken::H]);
        assert_eq!(
            row2.two.factors(),
            &[
                TwoToken::Cx,
                TwoToken::Cp(AngleSchedule::new(
                    Rational64::from_integer(2),
                    Some(DivisorSymbol::Control)
                ))
            ]
        );
        let row5 = GateSetConfig::parse("single: T\ntwo: EXP(ZZ, -1*pi/2^j)").unwrap();
        assert_eq!(row5.single.factors(), &[SingleToken::T]);
        assert_eq!(
            row5.two.factors(),
            &[TwoToken::Exp(
                Pauli::Z,
                Pauli::Z,
                AngleSchedule::new(Rational64::from_integer(-1), Some(DivisorSymbol::Control))
            )]
        );
        let qft = GateSetConfig::parse("single: H\ntwo: CP(2*pi/2^d)").unwrap();
        assert_eq!(qft, GateSetConfig::qft());
    }

    #[test]
    fn parser_tolerates_comments_and_whitespace() {
        let text =
            "# ladder\n\n  single :  H*X   # hadamard then flip\n two: CP( 2 * pi / 2 ^ j )\n";
        let cfg = GateSetConfig::parse(text).unwrap();
        assert_eq!(cfg, GateSetConfig::table_row(2).unwrap());
    }

    #[test]
    fn parser_round_trips_table() {
        for text in GATE_TABLE.iter().chain([&QFT_CONFIG]) {
            let cfg = GateSetConfig::parse(text).unwrap();
            let rendered = cfg.to_string();
            assert_eq!(GateSetConfig::parse(&rendered).unwrap(), cfg, "{rendered}");
        }
        let cfg = GateSetConfig::parse("single: R(4) * T\ntwo: EXP(YX, 2/4*pi/2^7)").unwrap();
        assert_eq!(
            cfg.to_string(),
            "single: R(4) * T\ntwo: EXP(YX, 1/2*pi/2^7)"
        );
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = GateSetConfig::parse("single: H * Q\ntwo: CX").unwrap_err();
        assert_eq!((err.line, err.column), (1, 13));
        assert_eq!(err.kind, ParseErrorKind::UnknownToken("Q".into()));

        let err = GateSetConfig::parse("single: H\ntwo: CP(2*pi/2^k)").unwrap_err();
        assert_eq!(err.line, 2);
        assert_eq!(err.column, 9);
        assert!(matches!(err.kind, ParseErrorKind::MalformedAngle(_)));

        let err = GateSetConfig::parse("single:\ntwo: CX").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::EmptyExpression("single-qubit"));

        let err = GateSetConfig::parse("single: H\ntwo:   ").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::EmptyExpression("two-qubit"));

        let err = GateSetConfig::parse("single: H").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::MissingLine("two:"));

        let err = GateSetConfig::parse("single: R(0)\ntwo: CX").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::InvalidPhaseIndex);

        let err = GateSetConfig::parse("single: H\ntwo: EXP(XW, 1*pi)").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownToken("XW".into()));

        let err = GateSetConfig::parse("single: H\ntwo: CP(2*pi/0)").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::MalformedAngle(_)));

        let err = GateSetConfig::parse("two: CX\nsingle: H").unwrap_err();
        assert_eq!((err.line, err.column), (1, 1));

        let err = GateSetConfig::parse("single: H\ntwo: CX\nextra").unwrap_err();
        assert_eq!((err.line, err.kind), (3, ParseErrorKind::Trailing));
    }

    #[test]
    fn realized_gates_have_expected_structure() {
        let mut configs: Vec<GateSetConfig> = (0..5)
            .map(|i| GateSetConfig::table_row(i).unwrap())
            .collect();
        configs.push(GateSetConfig::qft());
        for cfg in &configs {
            assert!(cfg.single.matrix().unwrap().unitarity_residual() < 1e-12);
            for (i, j) in [(1, 2), (1, 5), (3, 4), (2, 9)] {
                let m = cfg.two.realize(i, j).unwrap();
                assert!(m.unitarity_residual() < 1e-12);
            }
        }
        for token in [
            TwoToken::Cp(AngleSchedule::new(
                Rational64::new(3, 5),
                Some(DivisorSymbol::Distance),
            )),
            TwoToken::Cx,
        ] {
            let m = token.realize(2, 4).unwrap();
            if matches!(token, TwoToken::Cp(_)) {
                assert!(m.is_diagonal(0.0));
            } else {
                for r in 0..4 {
                    let row_units = (0..4).filter(|&c| m.get(r, c).norm() == 1.0).count();
                    let col_units = (0..4).filter(|&c| m.get(c, r).norm() == 1.0).count();
                    assert_eq!((row_units, col_units), (1, 1));
                }
            }
        }
    }
}
