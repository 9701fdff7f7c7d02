use telescoper_core::arith::*;
use telescoper_core::ore::*;
use telescoper_core::exactness::*;
use telescoper_core::solvers::SolverBounds;

fn main() {
    let x = MPoly::var(Var::X);
    let y = MPoly::var(Var::Y);
    let z = MPoly::var(Var::Z);
    let u = RatFun::new(x.clone(), y.add(&z).add(&MPoly::one())).unwrap();
    let v = RatFun::new(y.clone(), y.add(&z)).unwrap();
    for ty in [OpKind::Derivation, OpKind::Shift, OpKind::QShift] {
        for tz in [OpKind::Derivation, OpKind::Shift, OpKind::QShift] {
            let f = &apply_theta(OperatorKind::new(Var::Y, ty), &u)
                + &apply_theta(OperatorKind::new(Var::Z, tz), &v);
            eprintln!("case {:?},{:?}: den {}", ty, tz, f.den());
            match is_exact(&f, ty, tz, None, &SolverBounds::default()) {
                Ok(vd) => eprintln!("   -> exact: {}", vd.is_exact()),
                Err(e) => eprintln!("   -> ERR {}", e),
            }
        }
    }
}
