//! Text grammar for multivectors.
//!
//! ```text
//! expression := term (('+'|'-') term)*
//! term       := [sign] coefficient ['i'] ['*' blade]
//!             | [sign] blade
//! blade      := 'e' digits                  single-digit generator indices
//!             | 'e' digits ('_' digits)+    underscore-separated for n > 9
//! ```
//!
//! Coefficients are decimal floats, optionally `i`-suffixed for imaginary
//! parts. Permuted blade names (`e21`) normalise with the appropriate sign.
//! Note that `2e12` scans as the float `2e12`; a coefficient is attached to
//! a blade only with an explicit `*` (which is what the canonical printer
//! emits).

use num_complex::Complex64;

use super::{GaError, Multivector, Signature};

/// Parses `text` into a canonical multivector over `sig`.
pub fn parse_multivector(text: &str, sig: Signature) -> Result<Multivector, GaError> {
    Parser::new(text, sig).parse()
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    text: &'a str,
    pos: usize,
    sig: Signature,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, sig: Signature) -> Self {
        Parser {
            chars: text.char_indices().collect(),
            text,
            pos: 0,
            sig,
        }
    }

    fn byte_pos(&self) -> usize {
        self.chars
            .get(self.pos)
            .map(|(b, _)| *b)
            .unwrap_or(self.text.len())
    }

    fn error(&self, message: impl Into<String>) -> GaError {
        GaError::Parse {
            message: message.into(),
            position: self.byte_pos(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|(_, c)| *c)
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).map(|(_, c)| *c)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn parse(&mut self) -> Result<Multivector, GaError> {
        let mut mv = Multivector::zero(self.sig);
        self.skip_ws();
        if self.peek().is_none() {
            return Err(self.error("empty expression"));
        }
        let mut first = true;
        loop {
            self.skip_ws();
            if self.peek().is_none() {
                break;
            }
            let sign = self.parse_sign(first)?;
            self.skip_ws();
            let (mask, value) = self.parse_term()?;
            let current = mv.coeff(mask);
            mv.set_coeff(mask, current + value * sign);
            first = false;
            self.skip_ws();
            match self.peek() {
                None => break,
                Some('+') | Some('-') | Some('\u{2212}') => continue,
                Some(c) => return Err(self.error(format!("expected '+' or '-', found '{c}'"))),
            }
        }
        Ok(mv)
    }

    /// Leading sign; mandatory separator between terms, optional on the first.
    fn parse_sign(&mut self, first: bool) -> Result<f64, GaError> {
        match self.peek() {
            Some('+') => {
                self.pos += 1;
                Ok(1.0)
            }
            Some('-') | Some('\u{2212}') => {
                self.pos += 1;
                Ok(-1.0)
            }
            Some(_) if first => Ok(1.0),
            Some(c) => Err(self.error(format!("expected sign or term, found '{c}'"))),
            None => Err(self.error("unexpected end of expression")),
        }
    }

    fn parse_term(&mut self) -> Result<(usize, Complex64), GaError> {
        match self.peek() {
            Some('e') => {
                let (mask, blade_sign) = self.parse_blade()?;
                Ok((mask, Complex64::new(blade_sign, 0.0)))
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let value = self.parse_coefficient()?;
                self.skip_ws();
                if self.peek() == Some('*') {
                    self.pos += 1;
                    self.skip_ws();
                    let (mask, blade_sign) = self.parse_blade()?;
                    Ok((mask, value * blade_sign))
                } else {
                    Ok((0, value))
                }
            }
            Some(c) => Err(self.error(format!("expected coefficient or blade, found '{c}'"))),
            None => Err(self.error("unexpected end of expression")),
        }
    }

    fn parse_coefficient(&mut self) -> Result<Complex64, GaError> {
        let start_byte = self.byte_pos();
        let start_pos = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == '.') {
            self.pos += 1;
        }
        // An 'e'/'E' continues the float only when followed by an exponent;
        // otherwise it starts a blade name (reachable only via '*').
        if matches!(self.peek(), Some('e') | Some('E')) {
            let mut lookahead = 1;
            if matches!(self.peek_at(1), Some('+') | Some('-')) {
                lookahead = 2;
            }
            if matches!(self.peek_at(lookahead), Some(c) if c.is_ascii_digit()) {
                self.pos += lookahead;
                while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                    self.pos += 1;
                }
            }
        }
        if self.pos == start_pos {
            return Err(self.error("expected a number"));
        }
        let end_byte = self.byte_pos();
        let literal = &self.text[start_byte..end_byte];
        let value: f64 = literal.parse().map_err(|_| GaError::Parse {
            message: format!("invalid number `{literal}`"),
            position: start_byte,
        })?;
        if self.peek() == Some('i') {
            self.pos += 1;
            Ok(Complex64::new(0.0, value))
        } else {
            Ok(Complex64::new(value, 0.0))
        }
    }

    /// Blade name to (mask, permutation sign).
    fn parse_blade(&mut self) -> Result<(usize, f64), GaError> {
        let blade_start = self.byte_pos();
        if self.bump() != Some('e') {
            return Err(self.error("expected blade name starting with 'e'"));
        }
        let start_byte = self.byte_pos();
        while matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == '_') {
            self.pos += 1;
        }
        let body = &self.text[start_byte..self.byte_pos()];
        if body.is_empty() {
            return Err(self.error("blade name 'e' needs generator indices"));
        }
        let indices: Vec<usize> = if body.contains('_') {
            body.split('_')
                .map(|part| {
                    part.parse::<usize>().map_err(|_| GaError::Parse {
                        message: format!("invalid generator index `{part}`"),
                        position: blade_start,
                    })
                })
                .collect::<Result<_, _>>()?
        } else {
            body.chars()
                .map(|c| c.to_digit(10).unwrap() as usize)
                .collect()
        };
        let dim = self.sig.dim();
        let mut mask = 0usize;
        let mut sign = 1.0;
        // Insertion sort, counting transpositions for the permutation sign.
        let mut sorted: Vec<usize> = Vec::with_capacity(indices.len());
        for &idx in &indices {
            if idx == 0 || idx > dim {
                return Err(GaError::GeneratorOutOfRange { index: idx, dim });
            }
            let pos = sorted.partition_point(|&x| x < idx);
            if sorted.get(pos) == Some(&idx) {
                return Err(GaError::Parse {
                    message: format!("repeated generator index {idx} in blade"),
                    position: blade_start,
                });
            }
            if (sorted.len() - pos) % 2 == 1 {
                sign = -sign;
            }
            sorted.insert(pos, idx);
            mask |= 1 << (idx - 1);
        }
        Ok((mask, sign))
    }
}

/// Ascending-blade-order canonical form with 17-significant-digit floats;
/// `parse_multivector` of the output reproduces the input exactly.
pub(super) fn canonical_string(mv: &Multivector) -> String {
    let mut out = String::new();
    let mut first = true;
    for mask in 0..mv.sig().blade_count() {
        let c = mv.coeff(mask);
        for (value, imag) in [(c.re, false), (c.im, true)] {
            if value == 0.0 {
                continue;
            }
            if first {
                if value < 0.0 {
                    out.push('-');
                }
                first = false;
            } else if value < 0.0 {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            out.push_str(&format!("{:.16e}", value.abs()));
            if imag {
                out.push('i');
            }
            if mask != 0 {
                out.push('*');
                out.push_str(&blade_name(mask));
            }
        }
    }
    if first {
        out.push('0');
    }
    out
}

/// Name of a basis blade: `e12` for small indices, `e1_12` when any
/// generator index exceeds 9.
pub fn blade_name(mask: usize) -> String {
    let indices: Vec<usize> = (0..usize::BITS as usize)
        .filter(|i| mask & (1 << i) != 0)
        .map(|i| i + 1)
        .collect();
    if indices.is_empty() {
        return "1".to_string();
    }
    let mut name = String::from("e");
    if indices.iter().any(|&i| i > 9) {
        name.push_str(
            &indices
                .iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join("_"),
        );
    } else {
        for i in indices {
            name.push_str(&i.to_string());
        }
    }
    name
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig4() -> Signature {
        Signature::new(4, 0, 0).unwrap()
    }

    #[test]
    fn parses_blades_and_coefficients() {
        let mv = parse_multivector("e12 + 2*e34", sig4()).unwrap();
        assert_eq!(mv.coeff(0b0011), Complex64::new(1.0, 0.0));
        assert_eq!(mv.coeff(0b1100), Complex64::new(2.0, 0.0));
    }

    #[test]
    fn permuted_blade_normalises_with_sign() {
        let mv = parse_multivector("e21", sig4()).unwrap();
        assert_eq!(mv.coeff(0b0011), Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn underscore_indices() {
        let mv = parse_multivector("1.5 - 0.5*e1_2", sig4()).unwrap();
        assert_eq!(mv.coeff(0), Complex64::new(1.5, 0.0));
        assert_eq!(mv.coeff(0b0011), Complex64::new(-0.5, 0.0));

        let sig12 = Signature::new(12, 0, 0).unwrap();
        let mv = parse_multivector("e1_12", sig12).unwrap();
        assert_eq!(mv.coeff((1 << 0) | (1 << 11)), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn imaginary_coefficients() {
        let mv = parse_multivector("2.5i*e12 - 1i", sig4()).unwrap();
        assert_eq!(mv.coeff(0b0011), Complex64::new(0.0, 2.5));
        assert_eq!(mv.coeff(0), Complex64::new(0.0, -1.0));
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_multivector("e12 + * 2", sig4()) {
            Err(GaError::Parse { position, .. }) => assert_eq!(position, 6),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(matches!(
            parse_multivector("e15", sig4()),
            Err(GaError::GeneratorOutOfRange { index: 5, dim: 4 })
        ));
        assert!(matches!(
            parse_multivector("e11", sig4()),
            Err(GaError::Parse { .. })
        ));
    }

    #[test]
    fn float_exponent_versus_blade() {
        // `2e12` is the float 2e12; blades attach only via '*'.
        let mv = parse_multivector("2e12", sig4()).unwrap();
        assert_eq!(mv.coeff(0), Complex64::new(2e12, 0.0));
        let mv = parse_multivector("1.5e-3*e12", sig4()).unwrap();
        assert_eq!(mv.coeff(0b0011), Complex64::new(1.5e-3, 0.0));
    }

    #[test]
    fn print_parse_round_trip() {
        let mut mv = Multivector::zero(sig4());
        mv.set_coeff(0, Complex64::new(-1.25, 0.0));
        mv.set_coeff(0b0011, Complex64::new(0.1, -2.0));
        mv.set_coeff(0b1111, Complex64::new(3.0e-7, 0.0));
        let text = mv.to_string();
        let back = parse_multivector(&text, sig4()).unwrap();
        assert!(back.approx_eq(&mv, 0.0));
        assert_eq!(Multivector::zero(sig4()).to_string(), "0");
    }
}
