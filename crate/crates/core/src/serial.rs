//! JSON documents for fields, tables, polynomials and trace-shift instances.
//! Elements are written as canonical indices.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::funcspace::{Codomain, FuncTable, PolyRep};
use crate::trace_shift::{BalanceBranch, Certificate, TraceShiftInstance};

/// Field parameters. The moduli are optional on input; when present they
/// must match the ones the library picks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDoc {
    pub p: u32,
    pub e: u32,
    pub n: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus_q: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus_qn: Option<Vec<Vec<u32>>>,
}

impl FieldDoc {
    pub fn of(field: &Field) -> Self {
        let s = field.scalars();
        let (p, e) = (s.characteristic(), s.degree());
        let digits = |mut c: u32| -> Vec<u32> {
            (0..e)
                .map(|_| {
                    let d = c % p;
                    c /= p;
                    d
                })
                .collect()
        };
        FieldDoc {
            p,
            e,
            n: field.n(),
            modulus_q: Some(s.modulus().to_vec()),
            modulus_qn: Some(field.modulus().iter().map(|&c| digits(c)).collect()),
        }
    }

    pub fn build(&self) -> Result<Field> {
        let field = Field::new(self.p, self.e, self.n)?;
        let canonical = FieldDoc::of(&field);
        if self.modulus_q.as_ref().is_some_and(|m| Some(m) != canonical.modulus_q.as_ref()) {
            return Err(Error::Parse(format!("modulus_q differs from {:?}", canonical.modulus_q.unwrap())));
        }
        if self.modulus_qn.as_ref().is_some_and(|m| Some(m) != canonical.modulus_qn.as_ref()) {
            return Err(Error::Parse(format!("modulus_qn differs from {:?}", canonical.modulus_qn.unwrap())));
        }
        Ok(field)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableDoc {
    pub field: FieldDoc,
    pub codomain: Codomain,
    pub table: Vec<u32>,
}

impl TableDoc {
    pub fn of(field: &Field, t: &FuncTable) -> Self {
        TableDoc { field: FieldDoc::of(field), codomain: t.codomain(), table: t.values().to_vec() }
    }

    /// Validates the table against its own field.
    pub fn build(&self) -> Result<(Field, FuncTable)> {
        let field = self.field.build()?;
        let t = self.table_in(&field)?;
        Ok((field, t))
    }

    /// Validates the table against `field`, which must have the same
    /// parameters.
    pub fn table_in(&self, field: &Field) -> Result<FuncTable> {
        let f = &self.field;
        if (f.p, f.e, f.n) != (field.characteristic(), field.e(), field.n()) {
            return Err(Error::FieldMismatch(format!(
                "table over p={} e={} n={} used with p={} e={} n={}",
                f.p,
                f.e,
                f.n,
                field.characteristic(),
                field.e(),
                field.n()
            )));
        }
        FuncTable::new(field, self.codomain, self.table.clone())
    }
}

/// Polynomial terms [coefficient index, exponent]; the field is optional and
/// may instead come from the caller.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldDoc>,
    pub terms: Vec<(u32, u64)>,
}

impl PolyDoc {
    pub fn of(field: &Field, p: &PolyRep) -> Self {
        PolyDoc { field: Some(FieldDoc::of(field)), terms: p.terms().iter().map(|&(c, k)| (c.0, k)).collect() }
    }

    pub fn poly_in(&self, field: &Field) -> Result<PolyRep> {
        let terms = self
            .terms
            .iter()
            .map(|&(c, k)| Ok((field.elem(c as u64)?, k)))
            .collect::<Result<Vec<(Elem, u64)>>>()?;
        Ok(PolyRep::new(field, terms))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceDoc {
    #[serde(rename = "G")]
    pub g: TableDoc,
    pub gamma: u32,
    #[serde(rename = "H")]
    pub h: TableDoc,
    #[serde(rename = "F")]
    pub f: TableDoc,
    pub certificate: Certificate,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<BalanceBranch>,
}

impl InstanceDoc {
    pub fn of(field: &Field, inst: &TraceShiftInstance, branch: Option<BalanceBranch>) -> Self {
        InstanceDoc {
            g: TableDoc::of(field, &inst.g),
            gamma: inst.gamma.0,
            h: TableDoc::of(field, &inst.h),
            f: TableDoc::of(field, &inst.f),
            certificate: inst.certificate,
            branch,
        }
    }
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("documents serialize")
}
