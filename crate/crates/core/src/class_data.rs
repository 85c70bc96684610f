//! Counting polynomials per conjugacy class and per Picard trace, shipped as
//! `data/tables.json` in both printed (factored) and expanded form.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::IntPoly;
use crate::weyl::ClassReport;

/// Every value the trace of Frobenius on `Pic` can take.
pub const POSSIBLE_TRACES: [i64; 13] = [-6, -4, -3, -2, -1, 0, 1, 2, 3, 4, 5, 6, 8];

const EMBEDDED: &str = include_str!("../data/tables.json");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    /// Low degree first.
    pub coeffs: Vec<i64>,
    pub multiplicity: u32,
}

/// A polynomial as printed: an integer scale times a product of factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactoredPoly {
    pub scale: i64,
    pub factors: Vec<Factor>,
}

impl FactoredPoly {
    pub fn expand(&self) -> IntPoly {
        self.factors.iter().fold(IntPoly::constant(self.scale), |acc, f| {
            &acc * &IntPoly::new(f.coeffs.clone()).pow(f.multiplicity)
        })
    }
}

impl fmt::Display for FactoredPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.scale != 1 {
            write!(f, "{}", self.scale)?;
        }
        let bare = self.scale == 1 && self.factors.len() == 1 && self.factors[0].multiplicity == 1;
        for factor in &self.factors {
            let p = IntPoly::new(factor.coeffs.clone());
            if factor.coeffs == [0, 1] {
                write!(f, "q")?;
            } else if bare {
                write!(f, "{p}")?;
            } else {
                write!(f, "({p})")?;
            }
            if factor.multiplicity != 1 {
                write!(f, "^{}", factor.multiplicity)?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountingPolynomial {
    pub factored: FactoredPoly,
    pub expanded: IntPoly,
}

impl fmt::Display for CountingPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.factored.fmt(f)
    }
}

/// One `+-X` row of the class table.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConjClassRecord {
    /// Unsigned label, e.g. `"7A"`.
    pub name: String,
    pub order: u32,
    #[serde(flatten)]
    pub table1_poly: CountingPolynomial,
    /// Size of the `Sp(6,2)` class; filled from the group computation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sp62_size: Option<usize>,
    /// Trace on `K^perp` of the positive representative; filled from the
    /// group computation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi_std: Option<i64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TraceRecord {
    #[serde(rename = "trace")]
    pub trace_a: i64,
    #[serde(flatten)]
    pub table2_poly: CountingPolynomial,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassData {
    pub version: u32,
    pub classes: Vec<ConjClassRecord>,
    pub traces: Vec<TraceRecord>,
}

/// Checks performed by [`ClassData::validate`], all of which passed.
#[derive(Clone, Debug, Serialize)]
pub struct DataReport {
    pub checks: Vec<String>,
}

impl ClassData {
    /// The tables shipped with the crate.
    pub fn embedded() -> Result<Self> {
        Self::from_json(EMBEDDED)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn class_record(&self, name: &str) -> Result<&ConjClassRecord> {
        let unsigned = name.trim_start_matches(['-', '+', '±']);
        self.classes
            .iter()
            .find(|c| c.name == unsigned)
            .ok_or_else(|| Error::UnknownClass {
                label: name.to_string(),
                valid: self.valid_labels(),
            })
    }

    pub fn trace_record(&self, a: i64) -> Result<&TraceRecord> {
        self.traces
            .iter()
            .find(|t| t.trace_a == a)
            .ok_or(Error::UnknownTrace(a))
    }

    fn valid_labels(&self) -> String {
        self.classes
            .iter()
            .map(|c| format!("±{}", c.name))
            .collect::<Vec<_>>()
            .join(", ")
    }

    /// All 60 signed labels in table order.
    pub fn signed_labels(&self) -> Vec<String> {
        self.classes
            .iter()
            .flat_map(|c| [c.name.clone(), format!("-{}", c.name)])
            .collect()
    }

    /// Fails on the first transcription inconsistency, naming the row.
    pub fn validate(&self) -> Result<DataReport> {
        let mut checks = Vec::new();
        let fail = |row: &str, detail: String| Error::DataIntegrity {
            row: row.to_string(),
            detail,
        };

        if self.classes.len() != 30 {
            return Err(fail("classes", format!("{} rows, expected 30", self.classes.len())));
        }
        let traces: Vec<i64> = self.traces.iter().map(|t| t.trace_a).collect();
        if traces != POSSIBLE_TRACES {
            return Err(fail("traces", format!("rows {traces:?}")));
        }
        for (i, c) in self.classes.iter().enumerate() {
            if self.classes[..i].iter().any(|d| d.name == c.name) {
                return Err(fail(&c.name, "duplicate label".into()));
            }
            if !c.name.starts_with(&c.order.to_string()) {
                return Err(fail(&c.name, format!("label does not match order {}", c.order)));
            }
        }
        checks.push("30 class rows and 13 trace rows with the expected labels".to_string());

        for c in &self.classes {
            let p = &c.table1_poly;
            if p.factored.expand() != p.expanded {
                return Err(fail(
                    &c.name,
                    format!("{} expands to {}, stored {}", p.factored, p.factored.expand(), p.expanded),
                ));
            }
            if !(p.expanded.is_monic() && p.expanded.degree() == Some(6)) {
                return Err(fail(&c.name, format!("{} is not monic of degree 6", p.expanded)));
            }
        }
        checks.push("class polynomials: factored = expanded, monic of degree 6".to_string());

        for t in &self.traces {
            let p = &t.table2_poly;
            if p.factored.expand() != p.expanded {
                return Err(fail(
                    &format!("trace {}", t.trace_a),
                    format!("{} expands to {}, stored {}", p.factored, p.factored.expand(), p.expanded),
                ));
            }
        }
        checks.push("trace polynomials: factored = expanded".to_string());

        for t in &self.traces {
            let mirror = self.trace_record(2 - t.trace_a)?;
            if mirror.table2_poly.expanded != t.table2_poly.expanded {
                return Err(fail(
                    &format!("trace {}", t.trace_a),
                    format!("differs from trace {}", 2 - t.trace_a),
                ));
            }
        }
        checks.push("trace table symmetric under a -> 2 - a".to_string());

        let identity = &self.class_record("1A")?.table1_poly.expanded;
        for a in [-6, 8] {
            if &self.trace_record(a)?.table2_poly.expanded != identity {
                return Err(fail(&format!("trace {a}"), "differs from class 1A".into()));
            }
        }
        checks.push("traces -6 and 8 equal class 1A".to_string());

        if self.class_record("4C")?.table1_poly.expanded
            != self.class_record("4E")?.table1_poly.expanded
        {
            return Err(fail("4C", "differs from 4E".into()));
        }
        checks.push("classes 4C and 4E coincide".to_string());

        Ok(DataReport { checks })
    }

    /// Copies class sizes and standard traces from a named class report.
    pub fn populate(&mut self, report: &ClassReport) -> Result<()> {
        for c in &mut self.classes {
            let entry = report.by_name(&c.name).ok_or_else(|| Error::UnknownClass {
                label: c.name.clone(),
                valid: "names in the class report".into(),
            })?;
            c.sp62_size = Some(entry.size);
            c.chi_std = Some(entry.trace_std);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_data_validates() {
        let data = ClassData::embedded().unwrap();
        let report = data.validate().unwrap();
        assert_eq!(report.checks.len(), 6);
    }

    #[test]
    fn lookups() {
        let data = ClassData::embedded().unwrap();
        assert_eq!(
            data.class_record("7A").unwrap().table1_poly.to_string(),
            "(q^2 - q + 1)(q + 1)q^3"
        );
        assert_eq!(
            data.trace_record(-3).unwrap().table2_poly.to_string(),
            "672(q^2 - 3q + 5)(q + 1)(q - 1)(q - 2)q"
        );
        assert_eq!(
            data.class_record("3C").unwrap().table1_poly.to_string(),
            "q^6 - 2q^5 - 2q^4 - 8q^3 + 16q^2 + 10q + 21"
        );
        assert_eq!(
            data.class_record("6G").unwrap().table1_poly.to_string(),
            "(q^2 + q + 1)^2(q - 1)^2"
        );
        assert_eq!(data.class_record("-7A").unwrap().name, "7A");
        assert!(matches!(data.trace_record(7), Err(Error::UnknownTrace(7))));
        match data.class_record("7B") {
            Err(Error::UnknownClass { valid, .. }) => assert!(valid.contains("±15A")),
            other => panic!("{other:?}"),
        }
        assert_eq!(data.signed_labels().len(), 60);
    }

    #[test]
    fn identical_rows() {
        let data = ClassData::embedded().unwrap();
        let t = |a| data.trace_record(a).unwrap().table2_poly.expanded.clone();
        assert_eq!(t(0), t(2));
        assert_eq!(t(-6), data.class_record("1A").unwrap().table1_poly.expanded);
    }

    #[test]
    fn corrupted_rows_are_named() {
        let mut data = ClassData::embedded().unwrap();
        data.classes[3].table1_poly.expanded = IntPoly::new(vec![1, 2, 3, 4, 5, 6, 1]);
        match data.validate() {
            Err(Error::DataIntegrity { row, .. }) => assert_eq!(row, "2C"),
            other => panic!("{other:?}"),
        }

        let mut data = ClassData::embedded().unwrap();
        let last = data.traces.len() - 1;
        data.traces[last].table2_poly.factored.scale = 2;
        match data.validate() {
            Err(Error::DataIntegrity { row, .. }) => assert_eq!(row, "trace 8"),
            other => panic!("{other:?}"),
        }
    }
}
