use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write as _;

use super::{Presentation, RelExpr};
use crate::freealg::{letter_name, split_sign};
use crate::scalars::FieldElem;

// binding strength of the surrounding context
const SUM: u8 = 0;
const PRODUCT: u8 = 1;
const POWER: u8 = 2;

fn is_negative(e: &RelExpr) -> bool {
    match e {
        RelExpr::Const(c) | RelExpr::Scaled(c, _) => split_sign(c).0,
        _ => false,
    }
}

fn indices(v: &[u8]) -> String {
    v.iter()
        .map(|i| (*i as usize + 1).to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn scalar(c: &FieldElem, prec: u8) -> String {
    let s = c.to_string();
    if prec > SUM && (s.contains(' ') || s.starts_with('-')) {
        format!("({s})")
    } else {
        s
    }
}

fn text(e: &RelExpr, prec: u8) -> String {
    let wrap = |s: String, at: u8| if prec > at { format!("({s})") } else { s };
    match e {
        RelExpr::Gen(i) => format!("y{}", *i as usize + 1),
        RelExpr::Group(i) => format!("g{}", *i as usize + 1),
        RelExpr::Lam(n) => format!("lam({n})"),
        RelExpr::IteratedAd(v) => format!("ad({})", indices(v)),
        RelExpr::Chain(i, j) => format!("chain({},{})", *i as usize + 1, *j as usize + 1),
        RelExpr::Bracket(a, b) => format!("[{}, {}]c", text(a, SUM), text(b, SUM)),
        RelExpr::Const(c) => scalar(c, prec),
        RelExpr::Power(b, n) => wrap(format!("{}^{n}", text(b, POWER)), PRODUCT),
        RelExpr::Product(v) => wrap(
            v.iter().map(|x| text(x, PRODUCT)).collect::<Vec<_>>().join("*"),
            PRODUCT,
        ),
        RelExpr::Scaled(c, x) => {
            let (negative, mag) = split_sign(c);
            let mut s = String::new();
            if negative {
                s.push('-');
            }
            if !mag.is_one() {
                let m = mag.to_string();
                if m.contains(' ') {
                    let _ = write!(s, "({m})*");
                } else {
                    let _ = write!(s, "{m}*");
                }
            }
            s.push_str(&text(x, PRODUCT));
            if prec > SUM && negative {
                format!("({s})")
            } else {
                wrap(s, PRODUCT)
            }
        }
        RelExpr::Sum(v) => {
            let mut s = text(&v[0], SUM);
            for t in &v[1..] {
                if is_negative(t) {
                    let field = match t {
                        RelExpr::Const(c) | RelExpr::Scaled(c, _) => c.field().clone(),
                        _ => unreachable!("only scalars carry a sign"),
                    };
                    let _ = write!(s, " - {}", text(&super::parse::neg(t.clone(), &field), PRODUCT));
                } else {
                    let _ = write!(s, " + {}", text(t, PRODUCT));
                }
            }
            wrap(s, SUM)
        }
    }
}

/// Canonical text of an expression.
pub fn expr_text(e: &RelExpr) -> String {
    text(e, SUM)
}

/// Presentation text; `parse(print(p)) == p`.
pub fn print(p: &Presentation) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "presentation {}", p.name);
    let _ = writeln!(out, "field {}", p.field.order());
    let _ = writeln!(out, "theta {}", p.theta());
    let rows: Vec<String> = p
        .matrix
        .rows()
        .iter()
        .map(|r| r.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", "))
        .collect();
    let _ = writeln!(out, "matrix [{}]", rows.join("; "));
    if let Some(g) = &p.group {
        let ms: Vec<String> = g.iter().map(u32::to_string).collect();
        let _ = writeln!(out, "group {}", ms.join(" "));
    }
    if let Some(o) = &p.order {
        let names: Vec<String> = o.iter().map(|&l| letter_name(l, p.theta())).collect();
        let _ = writeln!(out, "order {}", names.join(" < "));
    }
    if let Some(r) = &p.roots {
        let degs: Vec<String> = r
            .iter()
            .map(|d| {
                let v: Vec<String> = d.0.iter().map(u32::to_string).collect();
                format!("deg({})", v.join(","))
            })
            .collect();
        let _ = writeln!(out, "roots {}", degs.join(" "));
    }
    for n in &p.notes {
        let _ = writeln!(out, "note {n}");
    }
    for (a, b) in &p.exclusions {
        let _ = writeln!(out, "exclude {a} {b}");
    }
    for f in &p.flags {
        let _ = writeln!(out, "flag {f}");
    }
    for r in &p.relations {
        let _ = write!(out, "rel {} s{} {}", r.name, r.stratum, expr_text(&r.lhs));
        if r.primitive {
            out.push_str(" primitive");
        }
        if r.deformable {
            out.push_str(" deform");
        }
        if let Some(t) = &r.tail {
            let _ = write!(out, " tail {}", expr_text(t));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    fn round_trip(src: &str) {
        let p = parse(src).unwrap();
        let text = print(&p);
        assert_eq!(parse(&text).unwrap(), p, "{text}");
    }

    #[test]
    fn header_only() {
        let src = "presentation e\nfield 2\ntheta 1\nmatrix [z]\n";
        let p = parse(src).unwrap();
        assert_eq!(print(&p), "presentation e\nfield 2\ntheta 1\nmatrix [z]\n");
    }

    #[test]
    fn expressions_round_trip() {
        round_trip(
            "presentation t\nfield 12\ntheta 2\nmatrix [z^4, z; z^3, z^4]\n\
             rel a s0 -y1*y2 + (1 + z)*y2*y1 - 3/2*[y1, ad(1,2)]c\n\
             rel b s0 -(y1 + y2)^2 - z - 1 deform tail lam(b)*(1 - z)*y1 - 2*lam(b)*lam(b)\n\
             rel c s1 (y1^2)^3 - (1/2 + z^3)*chain(2,1)*y1 - (-z)*y2\n",
        );
    }
}
