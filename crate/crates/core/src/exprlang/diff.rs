//! Symbolic differentiation with constant folding and identity elimination.

use num_complex::Complex64;

use super::{BinOp, Expr, Func};

fn lit(c: Complex64) -> Expr {
    Expr::Lit(c)
}

fn zero() -> Expr {
    Expr::real(0.0)
}

fn one() -> Expr {
    Expr::real(1.0)
}

fn is_zero(e: &Expr) -> bool {
    matches!(e, Expr::Lit(c) if *c == Complex64::new(0.0, 0.0))
}

fn is_one(e: &Expr) -> bool {
    matches!(e, Expr::Lit(c) if *c == Complex64::new(1.0, 0.0))
}

fn add(a: Expr, b: Expr) -> Expr {
    if is_zero(&a) {
        return b;
    }
    if is_zero(&b) {
        return a;
    }
    match (&a, &b) {
        (Expr::Lit(x), Expr::Lit(y)) => lit(x + y),
        (_, Expr::Neg(inner)) => sub(a, (**inner).clone()),
        _ => Expr::bin(BinOp::Add, a, b),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    if is_zero(&b) {
        return a;
    }
    if is_zero(&a) {
        return neg(b);
    }
    match (&a, &b) {
        (Expr::Lit(x), Expr::Lit(y)) => lit(x - y),
        _ => Expr::bin(BinOp::Sub, a, b),
    }
}

fn neg(a: Expr) -> Expr {
    match a {
        Expr::Lit(x) => lit(-x),
        Expr::Neg(inner) => *inner,
        other => Expr::Neg(Box::new(other)),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    if is_zero(&a) || is_zero(&b) {
        return zero();
    }
    if is_one(&a) {
        return b;
    }
    if is_one(&b) {
        return a;
    }
    match (&a, &b) {
        (Expr::Lit(x), Expr::Lit(y)) => lit(x * y),
        (Expr::Neg(x), _) => neg(mul((**x).clone(), b)),
        (_, Expr::Neg(y)) => neg(mul(a, (**y).clone())),
        _ => Expr::bin(BinOp::Mul, a, b),
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    if is_zero(&a) {
        return zero();
    }
    if is_one(&b) {
        return a;
    }
    match (&a, &b) {
        (Expr::Lit(x), Expr::Lit(y)) if *y != Complex64::new(0.0, 0.0) => lit(x / y),
        _ => Expr::bin(BinOp::Div, a, b),
    }
}

fn pow(a: Expr, b: Expr) -> Expr {
    if is_zero(&b) {
        return one();
    }
    if is_one(&b) {
        return a;
    }
    Expr::bin(BinOp::Pow, a, b)
}

/// Exact derivative d/dz of `e`.
pub fn differentiate(e: &Expr) -> Expr {
    match e {
        Expr::Var => one(),
        Expr::Lit(_) | Expr::Pi => zero(),
        Expr::Neg(a) => neg(differentiate(a)),
        Expr::Call(f, a) => {
            let da = differentiate(a);
            if is_zero(&da) {
                return zero();
            }
            let u = (**a).clone();
            match f {
                Func::Exp => mul(Expr::call(Func::Exp, u), da),
                Func::Log => div(da, u),
                Func::Sqrt => div(da, mul(Expr::real(2.0), Expr::call(Func::Sqrt, u))),
            }
        }
        Expr::Bin(op, a, b) => {
            let (u, v) = ((**a).clone(), (**b).clone());
            match op {
                BinOp::Add => add(differentiate(a), differentiate(b)),
                BinOp::Sub => sub(differentiate(a), differentiate(b)),
                BinOp::Mul => add(mul(differentiate(a), v), mul(u, differentiate(b))),
                BinOp::Div => {
                    let du = differentiate(a);
                    let dv = differentiate(b);
                    if is_zero(&dv) {
                        return div(du, v);
                    }
                    div(
                        sub(mul(du, v.clone()), mul(u, dv)),
                        pow(v, Expr::real(2.0)),
                    )
                }
                BinOp::Pow => {
                    let du = differentiate(a);
                    if b.is_constant() {
                        // v * u^(v-1) * u'
                        let lowered = match v.as_literal() {
                            Some(c) => lit(c - 1.0),
                            None => sub(v.clone(), one()),
                        };
                        return mul(mul(v, pow(u, lowered)), du);
                    }
                    let dv = differentiate(b);
                    let power = Expr::bin(BinOp::Pow, u.clone(), v.clone());
                    // d/dz exp(v log u) = u^v (v' log u + v u'/u)
                    let inner = add(
                        mul(dv, Expr::call(Func::Log, u.clone())),
                        div(mul(v, du), u),
                    );
                    mul(power, inner)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    fn at(src: &str, z: Complex64) -> Complex64 {
        differentiate(&parse(src).unwrap()).eval(z).unwrap()
    }

    #[test]
    fn examples() {
        assert!((at("z^2", Complex64::new(3.0, 0.0)) - Complex64::new(6.0, 0.0)).norm() < 1e-12);
        assert!((at("log(1-z)", Complex64::new(0.0, 0.0)) + 1.0).norm() < 1e-15);
        let z = Complex64::new(0.5, 0.0);
        let d = at("z/(1-z)", z);
        assert!((d - 4.0).norm() < 1e-14);
        // central finite difference oracle
        let e = parse("z/(1-z)").unwrap();
        let h = 1e-6;
        let fd = (e.eval(z + h).unwrap() - e.eval(z - h).unwrap()) / (2.0 * h);
        assert!((fd - d).norm() / d.norm() < 1e-8);
    }

    #[test]
    fn identities_are_eliminated() {
        assert_eq!(differentiate(&parse("z").unwrap()), Expr::real(1.0));
        assert_eq!(differentiate(&parse("3*z + 2").unwrap()), Expr::real(3.0));
        assert_eq!(differentiate(&parse("exp(2)").unwrap()), Expr::real(0.0));
    }

    #[test]
    fn general_power_rule() {
        // z^z at z = 1.5: z^z (log z + 1)
        let z = Complex64::new(1.5, 0.2);
        let expect = (z * z.ln()).exp() * (z.ln() + 1.0);
        assert!((at("z^z", z) - expect).norm() < 1e-13);
        // 2^z
        let expect = (z * 2f64.ln()).exp() * 2f64.ln();
        assert!((at("2^z", z) - expect).norm() < 1e-13);
    }
}
