use crate::montague::{Arg, Formula, FormulaError, SortedVar, VarNamer};

use super::{FTerm, FType};

/// Reads a normal System F term of type `t` as a many-sorted formula.
/// Quantifiers are the polymorphic `forall`/`exists` specialized to a sort.
pub fn f_term_to_formula(t: &FTerm) -> Result<Formula, FormulaError> {
    let ty = t.type_of().map_err(|e| FormulaError::IllTyped(e.to_string()))?;
    if ty != FType::t() {
        return Err(FormulaError::NotOfTypeT(ty.to_string()));
    }
    if !t.is_normal() {
        return Err(FormulaError::NotNormal);
    }
    let avoid = t.global_names().into_iter().map(str::to_string);
    let mut conv = Converter { namer: VarNamer::new(avoid), names: Vec::new(), ctx: Vec::new() };
    conv.formula(t)
}

struct Converter {
    namer: VarNamer,
    names: Vec<String>,
    ctx: Vec<(FType, usize)>,
}

/// The constant at the head of a spine, looking through type applications.
fn head_constant(head: &FTerm) -> Option<(&str, Vec<&FType>)> {
    let mut tys = Vec::new();
    let mut h = head;
    while let FTerm::TyApp(inner, u) = h {
        tys.push(u);
        h = inner;
    }
    tys.reverse();
    match h {
        FTerm::Const(c, _) => Some((c, tys)),
        _ => None,
    }
}

impl Converter {
    fn type_of(&mut self, t: &FTerm) -> Result<FType, FormulaError> {
        t.type_in(&mut self.ctx, 0).map_err(|e| FormulaError::IllTyped(e.to_string()))
    }

    fn formula(&mut self, t: &FTerm) -> Result<Formula, FormulaError> {
        let (head, args) = t.spine();
        let Some((c, tys)) = head_constant(head) else {
            return Err(FormulaError::NotAFormula(t.to_string()));
        };
        match (c, tys.len(), args.as_slice()) {
            ("and" | "or" | "implies", 0, [l, r]) => {
                let l = self.formula(l)?;
                let r = self.formula(r)?;
                Ok(match c {
                    "and" => Formula::and(l, r),
                    "or" => Formula::or(l, r),
                    _ => Formula::implies(l, r),
                })
            }
            ("forall" | "exists", 1, [p]) => {
                let (var, body) = self.bind(p)?;
                let body = Box::new(body);
                Ok(if c == "forall" { Formula::Forall { var, body } } else { Formula::Exists { var, body } })
            }
            _ => Ok(Formula::Pred {
                name: c.to_string(),
                args: args.iter().map(|a| self.arg(a)).collect::<Result<_, _>>()?,
            }),
        }
    }

    fn bind(&mut self, p: &FTerm) -> Result<(SortedVar, Formula), FormulaError> {
        let (sort, body) = match p {
            FTerm::Abs(_, ty, body) => (ty.clone(), (**body).clone()),
            other => match self.type_of(other)? {
                FType::Arrow(dom, _) => (*dom, FTerm::app(super::reduce::shift_term(other, 1), FTerm::Bound(0))),
                _ => return Err(FormulaError::NotAFormula(other.to_string())),
            },
        };
        let name = self.namer.fresh();
        self.names.push(name.clone());
        self.ctx.push((sort.clone(), 0));
        let body = self.formula(&body);
        self.names.pop();
        self.ctx.pop();
        Ok((SortedVar { name, sort: sort.to_string() }, body?))
    }

    fn arg(&mut self, t: &FTerm) -> Result<Arg, FormulaError> {
        let ty = self.type_of(t)?;
        if ty == FType::t() {
            return Ok(Arg::Formula { formula: Box::new(self.formula(t)?) });
        }
        match t {
            FTerm::Bound(i) => Ok(Arg::var(self.names[self.names.len() - 1 - i].clone())),
            FTerm::Var(x, _) => Ok(Arg::var(x.clone())),
            FTerm::Const(c, _) => Ok(Arg::constant(c.clone())),
            FTerm::TyApp(..) => match head_constant(t) {
                Some((c, _)) => Ok(Arg::constant(c)),
                None => Err(FormulaError::NotAFormula(t.to_string())),
            },
            FTerm::Abs(..) if matches!(&ty, FType::Arrow(_, cod) if **cod == FType::t()) => {
                let (var, body) = self.bind(t)?;
                Ok(Arg::Abstraction { var, body: Box::new(body) })
            }
            FTerm::App(..) => {
                let (head, args) = t.spine();
                let function = match head {
                    FTerm::Var(x, _) => x.clone(),
                    FTerm::Bound(i) => self.names[self.names.len() - 1 - i].clone(),
                    other => match head_constant(other) {
                        Some((c, _)) => c.to_string(),
                        None => return Err(FormulaError::NotAFormula(t.to_string())),
                    },
                };
                let args = args.iter().map(|a| self.arg(a)).collect::<Result<_, _>>()?;
                Ok(Arg::Apply { function, args })
            }
            _ => Err(FormulaError::NotAFormula(t.to_string())),
        }
    }
}
