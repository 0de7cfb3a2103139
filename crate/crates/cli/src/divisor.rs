//! Text grammar for divisor classes and one-parameter families.
//!
//! A divisor is a signed sum of terms `[coeff] H` and `[coeff] E<k>` with
//! rational coefficients like `4/3`; an optional `*` may separate the
//! coefficient from the symbol. A family additionally allows the declared
//! parameter as a linear factor in any coefficient, e.g. `3H - E1 - t*E8`.

use kstab::exact::{qserde, Q};
use kstab::DivisorClass;
use num_traits::{One, Zero};

pub fn parse_divisor(expr: &str, r: usize) -> Result<DivisorClass, String> {
    let (base, dir) = parse_family(expr, r, None)?;
    debug_assert!(dir.is_zero());
    Ok(base)
}

/// Splits `expr` into `(base, direction)` with the class being
/// `base + parameter * direction`. With `parameter = None` the parameter
/// is not allowed and `direction` comes back zero.
pub fn parse_family(
    expr: &str,
    r: usize,
    parameter: Option<&str>,
) -> Result<(DivisorClass, DivisorClass), String> {
    if let Some(p) = parameter {
        if p.is_empty() || p == "H" || (p.starts_with('E') && p[1..].chars().all(|c| c.is_ascii_digit())) {
            return Err(format!("parameter name {p:?} collides with divisor symbols"));
        }
    }
    let s: Vec<char> = expr.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty divisor expression".into());
    }
    let mut base_h = Q::zero();
    let mut base_e = vec![Q::zero(); r];
    let mut dir_h = Q::zero();
    let mut dir_e = vec![Q::zero(); r];
    if s.len() == 1 && s[0] == '0' {
        return Ok((
            DivisorClass::from_signed(base_h, base_e),
            DivisorClass::from_signed(dir_h, dir_e),
        ));
    }

    let mut i = 0;
    while i < s.len() {
        let mut coeff = Q::one();
        if s[i] == '+' {
            i += 1;
        } else if s[i] == '-' {
            coeff = -coeff;
            i += 1;
        }
        if i == s.len() {
            return Err("dangling sign".into());
        }
        let mut in_direction = false;
        let (sym, k) = loop {
            // symbol?
            if s[i] == 'H' {
                i += 1;
                break ('H', 0usize);
            }
            if s[i] == 'E' && i + 1 < s.len() && s[i + 1].is_ascii_digit() {
                let mut j = i + 1;
                while j < s.len() && s[j].is_ascii_digit() {
                    j += 1;
                }
                let k: usize = s[i + 1..j]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| "bad exceptional index")?;
                i = j;
                break ('E', k);
            }
            // rational factor?
            if s[i].is_ascii_digit() {
                let mut j = i;
                while j < s.len() && (s[j].is_ascii_digit() || s[j] == '/') {
                    j += 1;
                }
                let lit: String = s[i..j].iter().collect();
                coeff *= qserde::rat_from_str(&lit)?;
                i = j;
            } else if s[i].is_ascii_alphabetic() {
                // parameter factor
                let mut j = i;
                while j < s.len() && (s[j].is_ascii_alphanumeric() || s[j] == '_') {
                    j += 1;
                }
                let word: String = s[i..j].iter().collect();
                match parameter {
                    Some(p) if word == p => {
                        if in_direction {
                            return Err(format!("parameter {p:?} appears twice in one term"));
                        }
                        in_direction = true;
                        i = j;
                    }
                    _ => return Err(format!("unknown symbol {word:?}")),
                }
            } else {
                return Err(format!("unexpected character {:?}", s[i]));
            }
            if i < s.len() && s[i] == '*' {
                i += 1;
            }
            if i == s.len() {
                return Err("term without H or E<k> symbol".into());
            }
        };
        match sym {
            'H' => {
                if in_direction {
                    dir_h += &coeff;
                } else {
                    base_h += &coeff;
                }
            }
            _ => {
                if k == 0 || k > r {
                    return Err(format!("E{k} out of range for rank {r}"));
                }
                if in_direction {
                    dir_e[k - 1] += &coeff;
                } else {
                    base_e[k - 1] += &coeff;
                }
            }
        }
        if i < s.len() && s[i] != '+' && s[i] != '-' {
            return Err(format!("expected + or - before {:?}", s[i]));
        }
    }

    Ok((
        DivisorClass::from_signed(base_h, base_e),
        DivisorClass::from_signed(dir_h, dir_e),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use kstab::exact::{q, qi};

    #[test]
    fn grammar_examples() {
        let d = parse_divisor("3H - E1 - E2 - E3 - E4 - E5 - E6 - E7 - 4/3 E8", 8).unwrap();
        assert_eq!(*d.h(), qi(3));
        assert_eq!(d.e()[0], qi(1));
        assert_eq!(d.e()[7], q(4, 3));

        let d = parse_divisor("H", 0).unwrap();
        assert_eq!(*d.h(), qi(1));

        let d = parse_divisor("-3H + E1 + E2", 2).unwrap();
        assert_eq!(*d.h(), qi(-3));
        assert_eq!(d.e(), &[qi(-1), qi(-1)]);
    }

    #[test]
    fn printer_round_trip() {
        for expr in ["3H - E1 - 4/3 E8", "-H + 2 E3", "0", "6H - 2 E1 - 3 E8"] {
            let d = parse_divisor(expr, 8).unwrap();
            let back = parse_divisor(&d.to_string(), 8).unwrap();
            assert_eq!(d, back, "{expr}");
        }
    }

    #[test]
    fn family_terms() {
        let (b, d) = parse_family("3H - E1 - E2 - t*E8", 8, Some("t")).unwrap();
        assert_eq!(*b.h(), qi(3));
        assert_eq!(b.e()[7], qi(0));
        assert_eq!(d.e()[7], qi(1));
        assert!(*d.h() == qi(0));
        let (b2, d2) = parse_family("2*t*H + 1/2 E1", 3, Some("t")).unwrap();
        assert_eq!(*d2.h(), qi(2));
        assert_eq!(*b2.h(), qi(0));
        assert_eq!(b2.e()[0], q(-1, 2));
    }

    #[test]
    fn rejections() {
        assert!(parse_divisor("E9", 8).is_err());
        assert!(parse_divisor("E0", 8).is_err());
        assert!(parse_divisor("3H -", 8).is_err());
        assert!(parse_divisor("Q", 8).is_err());
        assert!(parse_divisor("3H - t*E8", 8).is_err()); // no parameter declared
        assert!(parse_family("t*t*E1", 8, Some("t")).is_err());
        assert!(parse_family("H", 8, Some("E1")).is_err());
    }
}
