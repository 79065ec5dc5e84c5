//! Line-oriented text format for circuits (`.lop` files).
//!
//! ```text
//! program   := line*
//! line      := stmt? comment? EOL
//! comment   := '#' any*
//! stmt      := 'modes' INT
//!            | 'bs' INT INT 'R=' NUM ['adjoint']
//!            | 'ps' INT 'phi=' NUM
//!            | 'pbs' INT INT INT INT        (H_a V_a H_b V_b)
//!            | 'swap' INT INT
//!            | 'ancilla' INT 'in=' INT 'out=' INT
//!            | 'input' OCC                  (occupation of the signal modes)
//! NUM       := decimal | INT '/' INT | [INT ['/' INT] '*'] 'pi' [ '/' INT ]
//! OCC       := INT (',' INT)*
//! ```
//!
//! Exactly one `modes` line, preceding any statement that uses mode indices.
//! Mode indices are zero-based. Numeric literals take decimals, simple
//! fractions and `pi` multiples; they are stored as doubles after exact
//! fraction evaluation. The parser reports every fault it can find rather
//! than stopping at the first.

use std::fmt;

use crate::circuit::{Ancilla, Circuit};
use crate::elements::Element;
use crate::fock::OccupationVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

/// A positioned parser message. Lines and columns are 1-based.
#[derive(Clone, Debug, PartialEq)]
pub struct ParseDiagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub severity: Severity,
}

impl ParseDiagnostic {
    fn error(line: usize, column: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            column,
            message: message.into(),
            severity: Severity::Error,
        }
    }

    fn warning(line: usize, column: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            column,
            message: message.into(),
            severity: Severity::Warning,
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(
            f,
            "{}:{}: {}: {}",
            self.line, self.column, tag, self.message
        )
    }
}

/// Parse a circuit, discarding warnings on success.
pub fn parse(source: &str) -> Result<Circuit, Vec<ParseDiagnostic>> {
    let (circuit, diagnostics) = parse_with_diagnostics(source);
    match circuit {
        Some(c) => Ok(c),
        None => Err(diagnostics),
    }
}

/// Parse a circuit, returning every diagnostic found. The circuit is present
/// exactly when no diagnostic has error severity.
pub fn parse_with_diagnostics(source: &str) -> (Option<Circuit>, Vec<ParseDiagnostic>) {
    Parser::default().run(source)
}

#[derive(Default)]
struct Parser {
    diagnostics: Vec<ParseDiagnostic>,
    modes: Option<usize>,
    elements: Vec<Element>,
    ancillas: Vec<Ancilla>,
    // (line, column, occupation) so lengths can be checked once the ancilla
    // count is known.
    inputs: Vec<(usize, usize, Vec<u32>)>,
}

impl Parser {
    fn run(mut self, source: &str) -> (Option<Circuit>, Vec<ParseDiagnostic>) {
        let mut line_count = 0;
        for (idx, raw_line) in source.lines().enumerate() {
            line_count = idx + 1;
            let line = match raw_line.find('#') {
                Some(pos) => &raw_line[..pos],
                None => raw_line,
            };
            let tokens = tokenize(line);
            if tokens.is_empty() {
                continue;
            }
            self.statement(idx + 1, &tokens);
        }
        self.finish(line_count.max(1))
    }

    fn error(&mut self, line: usize, column: usize, message: impl Into<String>) {
        self.diagnostics
            .push(ParseDiagnostic::error(line, column, message));
    }

    fn statement(&mut self, line: usize, tokens: &[(usize, &str)]) {
        let (col0, directive) = tokens[0];
        match directive {
            "modes" => self.stmt_modes(line, tokens),
            "bs" => self.stmt_bs(line, tokens),
            "ps" => self.stmt_ps(line, tokens),
            "pbs" => self.stmt_pbs(line, tokens),
            "swap" => self.stmt_swap(line, tokens),
            "ancilla" => self.stmt_ancilla(line, tokens),
            "input" => self.stmt_input(line, tokens),
            other => self.error(line, col0, format!("unknown directive `{other}`")),
        }
    }

    /// Modes must be declared before this point; report otherwise.
    fn require_modes(&mut self, line: usize, column: usize) -> Option<usize> {
        match self.modes {
            Some(m) => Some(m),
            None => {
                self.error(
                    line,
                    column,
                    "statement uses mode indices before the `modes` declaration",
                );
                None
            }
        }
    }

    fn arity(&mut self, line: usize, tokens: &[(usize, &str)], min: usize, max: usize) -> bool {
        let n = tokens.len();
        if n < min || n > max {
            let expected = if min == max {
                format!("{}", min - 1)
            } else {
                format!("{} to {}", min - 1, max - 1)
            };
            self.error(
                line,
                tokens[0].0,
                format!(
                    "`{}` takes {} argument(s), found {}",
                    tokens[0].1,
                    expected,
                    n - 1
                ),
            );
            return false;
        }
        true
    }

    fn parse_index(&mut self, line: usize, token: (usize, &str)) -> Option<usize> {
        match parse_unsigned::<usize>(token.1) {
            Ok(v) => Some(v),
            Err(msg) => {
                self.error(line, token.0, msg);
                None
            }
        }
    }

    fn parse_mode(&mut self, line: usize, token: (usize, &str)) -> Option<usize> {
        let value = self.parse_index(line, token)?;
        if let Some(modes) = self.modes {
            if value >= modes {
                self.error(
                    line,
                    token.0,
                    format!("mode index {value} out of range for {modes} modes"),
                );
                return None;
            }
        }
        Some(value)
    }

    fn parse_keyed_number(
        &mut self,
        line: usize,
        token: (usize, &str),
        key: &str,
    ) -> Option<f64> {
        let (col, text) = token;
        let Some(rest) = text.strip_prefix(key) else {
            self.error(line, col, format!("expected `{key}NUM`, found `{text}`"));
            return None;
        };
        match parse_number(rest) {
            Ok(v) => Some(v),
            Err(msg) => {
                self.error(line, col, msg);
                None
            }
        }
    }

    fn parse_keyed_count(&mut self, line: usize, token: (usize, &str), key: &str) -> Option<u32> {
        let (col, text) = token;
        let Some(rest) = text.strip_prefix(key) else {
            self.error(line, col, format!("expected `{key}INT`, found `{text}`"));
            return None;
        };
        match parse_unsigned::<u32>(rest) {
            Ok(v) => Some(v),
            Err(msg) => {
                self.error(line, col, msg);
                None
            }
        }
    }

    fn stmt_modes(&mut self, line: usize, tokens: &[(usize, &str)]) {
        if !self.arity(line, tokens, 2, 2) {
            return;
        }
        if self.modes.is_some() {
            self.error(line, tokens[0].0, "duplicate `modes` directive");
            return;
        }
        let Some(count) = self.parse_index(line, tokens[1]) else {
            return;
        };
        if count == 0 {
            self.error(line, tokens[1].0, "mode count must be at least 1");
            return;
        }
        if count > 12 {
            self.diagnostics.push(ParseDiagnostic::warning(
                line,
                tokens[1].0,
                format!("{count} modes: basis sizes grow combinatorially"),
            ));
        }
        self.modes = Some(count);
    }

    fn stmt_bs(&mut self, line: usize, tokens: &[(usize, &str)]) {
        if !self.arity(line, tokens, 4, 5) {
            return;
        }
        self.require_modes(line, tokens[0].0);
        let a = self.parse_mode(line, tokens[1]);
        let b = self.parse_mode(line, tokens[2]);
        let mut r = self.parse_keyed_number(line, tokens[3], "R=");
        if let Some(value) = r {
            if !(0.0..=1.0).contains(&value) {
                self.error(
                    line,
                    tokens[3].0,
                    format!("reflectivity {value} outside [0, 1]"),
                );
                r = None;
            }
        }
        let adjoint = if tokens.len() == 5 {
            if tokens[4].1 == "adjoint" {
                true
            } else {
                self.error(
                    line,
                    tokens[4].0,
                    format!("expected `adjoint`, found `{}`", tokens[4].1),
                );
                return;
            }
        } else {
            false
        };
        if let (Some(a), Some(b), Some(r)) = (a, b, r) {
            if a == b {
                self.error(line, tokens[2].0, "beam splitter modes must differ");
                return;
            }
            self.elements.push(Element::BeamSplitter {
                mode_a: a,
                mode_b: b,
                reflectivity: r,
                adjoint,
            });
        }
    }

    fn stmt_ps(&mut self, line: usize, tokens: &[(usize, &str)]) {
        if !self.arity(line, tokens, 3, 3) {
            return;
        }
        self.require_modes(line, tokens[0].0);
        let mode = self.parse_mode(line, tokens[1]);
        let phase = self.parse_keyed_number(line, tokens[2], "phi=");
        if let (Some(mode), Some(phase)) = (mode, phase) {
            self.elements.push(Element::PhaseShifter { mode, phase });
        }
    }

    fn stmt_pbs(&mut self, line: usize, tokens: &[(usize, &str)]) {
        if !self.arity(line, tokens, 5, 5) {
            return;
        }
        self.require_modes(line, tokens[0].0);
        let indices: Vec<Option<usize>> = (1..5).map(|i| self.parse_mode(line, tokens[i])).collect();
        if let [Some(ha), Some(va), Some(hb), Some(vb)] = indices[..] {
            let mut sorted = [ha, va, hb, vb];
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                self.error(line, tokens[1].0, "pbs modes must be distinct");
                return;
            }
            self.elements.push(Element::PolarizingBeamSplitter {
                rail_a: (ha, va),
                rail_b: (hb, vb),
            });
        }
    }

    fn stmt_swap(&mut self, line: usize, tokens: &[(usize, &str)]) {
        if !self.arity(line, tokens, 3, 3) {
            return;
        }
        let modes = self.require_modes(line, tokens[0].0);
        let a = self.parse_mode(line, tokens[1]);
        let b = self.parse_mode(line, tokens[2]);
        if let (Some(modes), Some(a), Some(b)) = (modes, a, b) {
            if a == b {
                self.error(line, tokens[2].0, "swap modes must differ");
                return;
            }
            self.elements.push(Element::swap(a, b, modes));
        }
    }

    fn stmt_ancilla(&mut self, line: usize, tokens: &[(usize, &str)]) {
        if !self.arity(line, tokens, 4, 4) {
            return;
        }
        self.require_modes(line, tokens[0].0);
        let mode = self.parse_mode(line, tokens[1]);
        let input = self.parse_keyed_count(line, tokens[2], "in=");
        let detect = self.parse_keyed_count(line, tokens[3], "out=");
        if let (Some(mode), Some(input), Some(detect)) = (mode, input, detect) {
            if self.ancillas.iter().any(|a| a.mode == mode) {
                self.error(
                    line,
                    tokens[1].0,
                    format!("mode {mode} already declared as an ancilla"),
                );
                return;
            }
            self.ancillas.push(Ancilla {
                mode,
                input,
                detect,
            });
        }
    }

    fn stmt_input(&mut self, line: usize, tokens: &[(usize, &str)]) {
        if !self.arity(line, tokens, 2, 2) {
            return;
        }
        let (col, text) = tokens[1];
        let mut counts = Vec::new();
        for part in text.split(',') {
            match parse_unsigned::<u32>(part) {
                Ok(v) => counts.push(v),
                Err(msg) => {
                    self.error(line, col, msg);
                    return;
                }
            }
        }
        self.inputs.push((line, col, counts));
    }

    fn finish(mut self, last_line: usize) -> (Option<Circuit>, Vec<ParseDiagnostic>) {
        let modes = match self.modes {
            Some(m) => m,
            None => {
                self.error(last_line, 1, "missing `modes` directive");
                0
            }
        };
        let signal_count = modes.saturating_sub(self.ancillas.len());
        let mut declared_inputs = Vec::new();
        let inputs = std::mem::take(&mut self.inputs);
        for (line, col, counts) in inputs {
            if self.modes.is_some() && counts.len() != signal_count {
                self.error(
                    line,
                    col,
                    format!(
                        "input lists {} occupation(s) but the circuit has {} signal mode(s)",
                        counts.len(),
                        signal_count
                    ),
                );
            } else {
                declared_inputs.push(OccupationVector::new(counts));
            }
        }
        if self.diagnostics.iter().any(ParseDiagnostic::is_error) {
            return (None, self.diagnostics);
        }
        match Circuit::new(modes, self.elements, self.ancillas, declared_inputs) {
            Ok(circuit) => (Some(circuit), self.diagnostics),
            Err(e) => {
                let mut diagnostics = self.diagnostics;
                diagnostics.push(ParseDiagnostic::error(last_line, 1, e.to_string()));
                (None, diagnostics)
            }
        }
    }
}

fn tokenize(line: &str) -> Vec<(usize, &str)> {
    let mut tokens = Vec::new();
    let mut start: Option<usize> = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                tokens.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        tokens.push((s + 1, &line[s..]));
    }
    tokens
}

fn parse_unsigned<T>(text: &str) -> Result<T, String>
where
    T: std::str::FromStr,
{
    if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("expected an unsigned integer, found `{text}`"));
    }
    text.parse::<T>()
        .map_err(|_| format!("numeric literal overflow in `{text}`"))
}

/// Evaluate a `NUM` literal: a decimal, an exact fraction `p/q`, or a
/// `pi` multiple (`pi`, `pi/2`, `2*pi`, `3/4*pi`, `2*pi/3`).
pub fn parse_number(text: &str) -> Result<f64, String> {
    if text.is_empty() {
        return Err("empty numeric literal".to_string());
    }
    if text.starts_with('+') || text.starts_with('-') {
        return Err(format!("numeric literals are unsigned: `{text}`"));
    }
    if let Some(pos) = text.find("pi") {
        let before = &text[..pos];
        let after = &text[pos + 2..];
        let mut value = std::f64::consts::PI;
        if !before.is_empty() {
            let prefix = before
                .strip_suffix('*')
                .ok_or_else(|| format!("expected `*` before `pi` in `{text}`"))?;
            value *= parse_fraction(prefix)?;
        }
        if !after.is_empty() {
            let denominator = after
                .strip_prefix('/')
                .ok_or_else(|| format!("expected `/` after `pi` in `{text}`"))?;
            let d = parse_unsigned::<u64>(denominator)?;
            if d == 0 {
                return Err(format!("division by zero in `{text}`"));
            }
            value /= d as f64;
        }
        return Ok(value);
    }
    if text.contains('/') {
        return parse_fraction(text);
    }
    match text.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("cannot parse numeric literal `{text}`")),
    }
}

fn parse_fraction(text: &str) -> Result<f64, String> {
    match text.split_once('/') {
        Some((p, q)) => {
            let p = parse_unsigned::<u64>(p)?;
            let q = parse_unsigned::<u64>(q)?;
            if q == 0 {
                return Err(format!("division by zero in `{text}`"));
            }
            Ok(p as f64 / q as f64)
        }
        None => Ok(parse_unsigned::<u64>(text)? as f64),
    }
}

fn format_number(value: f64) -> String {
    // Shortest representation that parses back to the same double.
    format!("{value}")
}

/// Canonical text form. `parse(render(c))` reproduces `c` exactly for every
/// circuit expressible in the grammar; mode permutations that are not single
/// transpositions are emitted as an equivalent swap sequence.
pub fn render(circuit: &Circuit) -> String {
    let mut out = String::new();
    out.push_str(&format!("modes {}\n", circuit.modes()));
    for element in circuit.elements() {
        render_element(&mut out, element);
    }
    for ancilla in circuit.ancillas() {
        out.push_str(&format!(
            "ancilla {} in={} out={}\n",
            ancilla.mode, ancilla.input, ancilla.detect
        ));
    }
    for input in circuit.declared_inputs() {
        out.push_str(&format!("input {}\n", input.counts_string()));
    }
    out
}

fn render_element(out: &mut String, element: &Element) {
    match element {
        Element::BeamSplitter {
            mode_a,
            mode_b,
            reflectivity,
            adjoint,
        } => {
            out.push_str(&format!(
                "bs {} {} R={}{}\n",
                mode_a,
                mode_b,
                format_number(*reflectivity),
                if *adjoint { " adjoint" } else { "" }
            ));
        }
        Element::PhaseShifter { mode, phase } => {
            // NUM literals are unsigned; fold negative phases into [0, 2π).
            let phase = if *phase < 0.0 {
                phase.rem_euclid(2.0 * std::f64::consts::PI)
            } else {
                *phase
            };
            out.push_str(&format!("ps {} phi={}\n", mode, format_number(phase)));
        }
        Element::PolarizingBeamSplitter { rail_a, rail_b } => {
            out.push_str(&format!(
                "pbs {} {} {} {}\n",
                rail_a.0, rail_a.1, rail_b.0, rail_b.1
            ));
        }
        Element::ModePermutation { permutation } => {
            for (a, b) in transposition_sequence(permutation) {
                out.push_str(&format!("swap {} {}\n", a, b));
            }
        }
    }
}

/// Transpositions whose in-order application realizes the permutation.
fn transposition_sequence(permutation: &[usize]) -> Vec<(usize, usize)> {
    let displaced: Vec<usize> = permutation
        .iter()
        .enumerate()
        .filter(|(i, &p)| *i != p)
        .map(|(i, _)| i)
        .collect();
    if displaced.len() == 2 {
        return vec![(displaced[0], displaced[1])];
    }
    let mut swaps = Vec::new();
    let mut current: Vec<usize> = (0..permutation.len()).collect();
    for target in 0..permutation.len() {
        let wanted = permutation
            .iter()
            .position(|&p| p == target)
            .expect("valid permutation");
        let at = current.iter().position(|&c| c == wanted).unwrap();
        if at != target {
            current.swap(at, target);
            swaps.push((target.min(at), target.max(at)));
        }
    }
    // `current` now sends source i to slot current.position(i); the swaps
    // were recorded in application order.
    swaps
}
