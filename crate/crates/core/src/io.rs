//! Structured text formats (JSON syntax) for elements, forms, connections,
//! spinors and residual reports. Term lists are emitted sorted
//! lexicographically by exponent; keys follow the struct order, so output is
//! byte-deterministic for equal inputs.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{DeformationMatrix, ExponentVec, TorusContext, TorusElement};
use crate::bundle::{BundleModel, ConnectionSpec, ModelKind};
use crate::dirac::Spinor;
use crate::error::{Error, Result};
use crate::forms::{FormIndex, TorusForm};
use crate::yang_mills::ResidualReport;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermDto {
    pub m: Vec<i32>,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ElementDto {
    pub n: usize,
    pub xi: Vec<Vec<f64>>,
    pub terms: Vec<TermDto>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FormComponentDto {
    pub axes: Vec<usize>,
    pub element: Vec<TermDto>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FormDto {
    pub n: usize,
    pub xi: Vec<Vec<f64>>,
    pub components: Vec<FormComponentDto>,
}

/// Connection file: model tag, base data and the displacement components
/// (the base dimension and deformation are shared with the outer object).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConnectionDto {
    pub model: String,
    pub n: usize,
    pub xi: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi_fiber_row: Option<Vec<f64>>,
    pub mu: MuDto,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MuDto {
    pub components: Vec<FormComponentDto>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpinorTermDto {
    pub m: Vec<i32>,
    pub vec: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpinorDto {
    pub n: usize,
    pub spin_dim: usize,
    pub terms: Vec<SpinorTermDto>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResidualReportDto {
    pub kind: String,
    pub norm: f64,
    pub is_solution: bool,
    pub residual: FormDto,
    pub consistency_gap: f64,
}

fn terms_to_dto(x: &TorusElement) -> Vec<TermDto> {
    x.terms()
        .map(|(m, c)| TermDto {
            m: m.0.clone(),
            re: c.re,
            im: c.im,
        })
        .collect()
}

pub fn element_to_dto(x: &TorusElement) -> ElementDto {
    ElementDto {
        n: x.dim(),
        xi: x.context().xi.rows().to_vec(),
        terms: terms_to_dto(x),
    }
}

pub fn element_from_dto(dto: &ElementDto) -> Result<(Arc<TorusContext>, TorusElement)> {
    let xi = DeformationMatrix::new(dto.xi.clone())?;
    if xi.dim() != dto.n {
        return Err(Error::DimensionMismatch {
            left: xi.dim(),
            right: dto.n,
        });
    }
    let ctx = TorusContext::new(xi);
    let x = element_terms_from_dto(&ctx, &dto.terms)?;
    Ok((ctx, x))
}

pub fn element_terms_from_dto(
    ctx: &Arc<TorusContext>,
    terms: &[TermDto],
) -> Result<TorusElement> {
    let mut x = TorusElement::zero(ctx);
    for t in terms {
        if t.m.len() != ctx.n {
            return Err(Error::DimensionMismatch {
                left: t.m.len(),
                right: ctx.n,
            });
        }
        x = x.add(&TorusElement::monomial(
            ctx,
            ExponentVec(t.m.clone()),
            Complex64::new(t.re, t.im),
        ));
    }
    Ok(x)
}

pub fn form_to_dto(f: &TorusForm) -> FormDto {
    FormDto {
        n: f.dim(),
        xi: f.context().xi.rows().to_vec(),
        components: form_components_to_dto(f),
    }
}

pub fn form_components_to_dto(f: &TorusForm) -> Vec<FormComponentDto> {
    f.components()
        .map(|(idx, x)| FormComponentDto {
            axes: idx.axes(),
            element: terms_to_dto(x),
        })
        .collect()
}

pub fn form_from_dto(dto: &FormDto) -> Result<(Arc<TorusContext>, TorusForm)> {
    let xi = DeformationMatrix::new(dto.xi.clone())?;
    if xi.dim() != dto.n {
        return Err(Error::DimensionMismatch {
            left: xi.dim(),
            right: dto.n,
        });
    }
    let ctx = TorusContext::new(xi);
    let f = form_components_from_dto(&ctx, &dto.components)?;
    Ok((ctx, f))
}

pub fn form_components_from_dto(
    ctx: &Arc<TorusContext>,
    components: &[FormComponentDto],
) -> Result<TorusForm> {
    let mut f = TorusForm::zero(ctx);
    for comp in components {
        let idx = FormIndex::from_axes(&comp.axes)?;
        if comp.axes.iter().any(|&a| a > ctx.n) {
            return Err(Error::AxisOutOfRange {
                axis: *comp.axes.iter().max().unwrap(),
                n: ctx.n,
            });
        }
        let x = element_terms_from_dto(ctx, &comp.element)?;
        f = f.add(&TorusForm::monomial(idx, x));
    }
    Ok(f)
}

pub fn connection_to_dto(omega: &ConnectionSpec, fiber_row: Option<Vec<f64>>) -> ConnectionDto {
    let model = omega.model();
    ConnectionDto {
        model: match model.kind {
            ModelKind::A => "A".into(),
            ModelKind::B => "B".into(),
        },
        n: model.base_dim(),
        xi: model.base().xi.rows().to_vec(),
        xi_fiber_row: fiber_row,
        mu: MuDto {
            components: form_components_to_dto(omega.mu()),
        },
    }
}

pub fn connection_from_dto(dto: &ConnectionDto) -> Result<(Arc<BundleModel>, ConnectionSpec)> {
    let xi = DeformationMatrix::new(dto.xi.clone())?;
    if xi.dim() != dto.n {
        return Err(Error::DimensionMismatch {
            left: xi.dim(),
            right: dto.n,
        });
    }
    let ctx = TorusContext::new(xi);
    let model = match dto.model.as_str() {
        "A" => BundleModel::model_a(&ctx, dto.xi_fiber_row.as_deref())?,
        "B" => {
            if dto.xi_fiber_row.is_some() {
                return Err(Error::Unsupported(
                    "xi_fiber_row applies to model A only".into(),
                ));
            }
            BundleModel::model_b(&ctx)
        }
        other => {
            return Err(Error::Unsupported(format!(
                "unknown model tag {other:?}, expected \"A\" or \"B\""
            )))
        }
    };
    let mu = form_components_from_dto(&ctx, &dto.mu.components)?;
    let omega = ConnectionSpec::new(&model, mu)?;
    Ok((model, omega))
}

pub fn spinor_to_dto(s: &Spinor) -> SpinorDto {
    SpinorDto {
        n: s.context().n,
        spin_dim: s.spin_dim(),
        terms: s
            .terms()
            .map(|(m, v)| SpinorTermDto {
                m: m.0.clone(),
                vec: v.iter().map(|c| [c.re, c.im]).collect(),
            })
            .collect(),
    }
}

pub fn spinor_from_dto(ctx: &Arc<TorusContext>, dto: &SpinorDto) -> Result<Spinor> {
    if dto.n != ctx.n {
        return Err(Error::DimensionMismatch {
            left: dto.n,
            right: ctx.n,
        });
    }
    let mut s = Spinor::zero(ctx, dto.spin_dim);
    for t in &dto.terms {
        if t.m.len() != ctx.n || t.vec.len() != dto.spin_dim {
            return Err(Error::DimensionMismatch {
                left: t.vec.len(),
                right: dto.spin_dim,
            });
        }
        let v = nalgebra::DVector::from_iterator(
            dto.spin_dim,
            t.vec.iter().map(|[re, im]| Complex64::new(*re, *im)),
        );
        s = s.add(&Spinor::monomial(ctx, ExponentVec(t.m.clone()), v));
    }
    Ok(s)
}

pub fn residual_report_to_dto(rep: &ResidualReport) -> ResidualReportDto {
    ResidualReportDto {
        kind: rep.kind.as_str().into(),
        norm: rep.norm,
        is_solution: rep.is_solution,
        residual: form_to_dto(&rep.residual.coefficient),
        consistency_gap: rep.consistency_gap,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;

    #[test]
    fn element_round_trip_preserves_terms_and_order() {
        let ctx = TorusContext::new(DeformationMatrix::two_dim(0.25));
        let mut rng = sample::rng(7);
        let x = sample::element(&mut rng, &ctx, 2, 5);
        let dto = element_to_dto(&x);
        // sorted lexicographically by exponent
        let mut sorted = dto.terms.clone();
        sorted.sort_by(|a, b| a.m.cmp(&b.m));
        assert_eq!(
            dto.terms.iter().map(|t| &t.m).collect::<Vec<_>>(),
            sorted.iter().map(|t| &t.m).collect::<Vec<_>>()
        );
        let (_, back) = element_from_dto(&dto).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn form_round_trip() {
        let ctx = TorusContext::new(DeformationMatrix::two_dim(0.25));
        let mut rng = sample::rng(11);
        let f = sample::mixed_form(&mut rng, &ctx, 2, 3);
        let dto = form_to_dto(&f);
        let (_, back) = form_from_dto(&dto).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn connection_round_trip_and_validation() {
        let ctx = TorusContext::new(DeformationMatrix::two_dim(0.25));
        let model = BundleModel::model_a(&ctx, None).unwrap();
        let mut rng = sample::rng(3);
        let mu = sample::hermitian_one_form(&mut rng, &ctx, 1, 2);
        let omega = ConnectionSpec::new(&model, mu).unwrap();
        let dto = connection_to_dto(&omega, None);
        let (_, back) = connection_from_dto(&dto).unwrap();
        assert_eq!(back.mu(), omega.mu());
        // corrupted xi fails validation
        let mut bad = dto.clone();
        bad.xi[0][1] = 0.3;
        bad.xi[1][0] = 0.3;
        assert!(connection_from_dto(&bad).is_err());
    }
}
