//! Serializable classification reports.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Descent, Ladder, Model};
use crate::coxeter::CoxeterDiagram;
use crate::mqfield::FieldTower;
use crate::qspace::QuadraticForm;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "arithmetic")]
    Arithmetic,
    #[serde(rename = "quasi-arithmetic-nonarithmetic")]
    QuasiArithmetic,
    #[serde(rename = "pseudo-arithmetic-first-type")]
    PseudoArithmeticFirstType,
    #[serde(rename = "undetermined")]
    Undetermined,
}

impl Verdict {
    pub fn is_definite(self) -> bool {
        self != Verdict::Undetermined
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Arithmetic => "arithmetic",
            Verdict::QuasiArithmetic => "quasi-arithmetic-nonarithmetic",
            Verdict::PseudoArithmeticFirstType => "pseudo-arithmetic-first-type",
            Verdict::Undetermined => "undetermined",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldJson {
    pub radicands: Vec<u64>,
    pub degree: usize,
}

impl From<&FieldTower> for FieldJson {
    fn from(t: &FieldTower) -> Self {
        FieldJson {
            radicands: t.radicands().to_vec(),
            degree: t.degree(),
        }
    }
}

impl FieldJson {
    pub fn tower(&self) -> FieldTower {
        FieldTower::from_group_generators(self.radicands.iter().copied())
    }

    /// `Q(√2,√3)` style.
    pub fn name(&self) -> String {
        self.tower().to_string()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalJson {
    pub diagonal: Vec<String>,
}

impl From<&QuadraticForm> for DiagonalJson {
    fn from(f: &QuadraticForm) -> Self {
        DiagonalJson {
            diagonal: f.diagonal().iter().map(ToString::to_string).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferJson {
    pub subfield: Vec<u64>,
    pub generator: u64,
    pub hyperbolic: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelJson {
    pub a: u64,
    /// Similitude factor `λ` with `g_K ≅ λ f`.
    pub scale: String,
    pub diagonal: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubordinatedJson {
    pub last: String,
    pub diagonal: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub diagram: String,
    pub n: usize,
    /// 1-based base vertex of the path products.
    pub base_vertex: usize,
    #[serde(rename = "K")]
    pub trace_field: FieldJson,
    pub f: DiagonalJson,
    pub verdict: Verdict,
    pub arithmetic: bool,
    pub quasi_arithmetic: bool,
    #[serde(rename = "k")]
    pub descent_field: FieldJson,
    pub transfers: Vec<TransferJson>,
    pub model: Option<ModelJson>,
    pub subordinated: Vec<SubordinatedJson>,
    pub witnesses: Vec<String>,
    pub ms: u64,
}

#[allow(clippy::too_many_arguments)]
pub(super) fn build(
    d: &CoxeterDiagram,
    big: &FieldTower,
    f: &QuadraticForm,
    base: usize,
    verdict: Verdict,
    ladder: &Ladder,
    descent: &Descent,
    model: Option<&Model>,
    subordinated: &[QuadraticForm],
    witnesses: Vec<String>,
    ms: u64,
) -> ClassificationReport {
    ClassificationReport {
        diagram: d.name.clone(),
        n: d.n,
        base_vertex: base + 1,
        trace_field: big.into(),
        f: f.into(),
        verdict,
        arithmetic: ladder.arithmetic,
        quasi_arithmetic: ladder.quasi_arithmetic,
        descent_field: (&descent.k).into(),
        transfers: descent
            .transfers
            .iter()
            .map(|r| TransferJson {
                subfield: r.subfield.radicands().to_vec(),
                generator: r.generator,
                hyperbolic: r.hyperbolic,
            })
            .collect(),
        model: model.map(|m| ModelJson {
            a: m.a,
            scale: m.scale.to_string(),
            diagonal: DiagonalJson::from(&m.g).diagonal,
        }),
        subordinated: subordinated
            .iter()
            .map(|g| SubordinatedJson {
                last: g.diagonal().last().expect("rank n + 1").to_string(),
                diagonal: DiagonalJson::from(g).diagonal,
            })
            .collect(),
        witnesses,
        ms,
    }
}

/// Column names of [`ClassificationReport::tsv_row`].
pub const TSV_HEADER: &str = "reference\tdim\ttrace field\tdegree\tverdict\tk\ta";

impl ClassificationReport {
    /// One line mirroring the table layout: reference, dim, trace field, degree, verdict, k, a.
    pub fn tsv_row(&self) -> String {
        let a = self
            .model
            .as_ref()
            .map_or_else(|| "-".to_string(), |m| m.a.to_string());
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.diagram,
            self.n,
            self.trace_field.name(),
            self.trace_field.degree,
            self.verdict,
            self.descent_field.name(),
            a
        )
    }

    /// Multi-line human-readable summary.
    pub fn pretty(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("diagram      {}\n", self.diagram));
        s.push_str(&format!("dimension    {}\n", self.n));
        s.push_str(&format!(
            "trace field  {} (degree {})\n",
            self.trace_field.name(),
            self.trace_field.degree
        ));
        s.push_str(&format!("ambient form ⟨{}⟩\n", self.f.diagonal.join(", ")));
        s.push_str(&format!("verdict      {}\n", self.verdict));
        s.push_str(&format!("descent to   {}\n", self.descent_field.name()));
        for t in &self.transfers {
            let sub = FieldJson {
                degree: 1 << t.subfield.len(),
                radicands: t.subfield.clone(),
            };
            s.push_str(&format!(
                "  transfer to {:<14} along √{:<4} {}\n",
                sub.name(),
                t.generator,
                if t.hyperbolic { "hyperbolic" } else { "not hyperbolic" }
            ));
        }
        match &self.model {
            Some(m) => s.push_str(&format!(
                "model        a = {} (⟨{}⟩, scale {})\n",
                m.a,
                m.diagonal.join(", "),
                m.scale
            )),
            None => s.push_str("model        none found\n"),
        }
        if !self.subordinated.is_empty() {
            let lasts: Vec<&str> = self.subordinated.iter().map(|g| g.last.as_str()).collect();
            s.push_str(&format!("subordinated last entries {{{}}}\n", lasts.join(", ")));
        }
        for w in &self.witnesses {
            s.push_str(&format!("witness      {w}\n"));
        }
        s.push_str(&format!("time         {} ms\n", self.ms));
        s
    }
}
