use serde::{Deserialize, Serialize};

use super::{Answer, GatewayError, PromptVariant, Result};

/// Occupation x startup grid of answers for one prompt variant and model.
#[derive(Debug, Clone, PartialEq)]
pub struct VerdictMatrix {
    variant: PromptVariant,
    model_id: String,
    occupations: Vec<String>,
    startups: Vec<String>,
    cells: Vec<Answer>,
}

#[derive(Serialize, Deserialize)]
struct MatrixFile {
    variant: PromptVariant,
    model_id: String,
    occupations: Vec<String>,
    startups: Vec<String>,
    /// One string per occupation, one `y`/`n`/`u` per startup.
    rows: Vec<String>,
}

impl VerdictMatrix {
    /// `cells` is row-major: one row per occupation.
    pub fn new(
        variant: PromptVariant,
        model_id: impl Into<String>,
        occupations: Vec<String>,
        startups: Vec<String>,
        cells: Vec<Answer>,
    ) -> Result<Self> {
        if cells.len() != occupations.len() * startups.len() {
            return Err(GatewayError::InvalidMatrix(format!(
                "{} cells for {}x{} grid",
                cells.len(),
                occupations.len(),
                startups.len()
            )));
        }
        Ok(VerdictMatrix {
            variant,
            model_id: model_id.into(),
            occupations,
            startups,
            cells,
        })
    }

    pub fn variant(&self) -> PromptVariant {
        self.variant
    }

    pub fn model_id(&self) -> &str {
        &self.model_id
    }

    pub fn occupations(&self) -> &[String] {
        &self.occupations
    }

    pub fn startups(&self) -> &[String] {
        &self.startups
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn get(&self, occupation: usize, startup: usize) -> Answer {
        self.cells[occupation * self.startups.len() + startup]
    }

    /// Answers of one occupation across all startups.
    pub fn row(&self, occupation: usize) -> &[Answer] {
        let n = self.startups.len();
        &self.cells[occupation * n..(occupation + 1) * n]
    }

    /// Fraction of cells holding a yes or no.
    pub fn coverage(&self) -> f64 {
        if self.cells.is_empty() {
            return 0.0;
        }
        let definitive = self.cells.iter().filter(|a| a.is_definitive()).count();
        definitive as f64 / self.cells.len() as f64
    }

    pub fn to_json(&self) -> String {
        let file = MatrixFile {
            variant: self.variant,
            model_id: self.model_id.clone(),
            occupations: self.occupations.clone(),
            startups: self.startups.clone(),
            rows: (0..self.occupations.len())
                .map(|i| self.row(i).iter().map(|a| a.code()).collect())
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("matrix serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: MatrixFile =
            serde_json::from_str(text).map_err(|e| GatewayError::InvalidMatrix(e.to_string()))?;
        if file.rows.len() != file.occupations.len() {
            return Err(GatewayError::InvalidMatrix(format!(
                "{} rows for {} occupations",
                file.rows.len(),
                file.occupations.len()
            )));
        }
        let mut cells = Vec::with_capacity(file.occupations.len() * file.startups.len());
        for row in &file.rows {
            if row.chars().count() != file.startups.len() {
                return Err(GatewayError::InvalidMatrix("ragged row".into()));
            }
            for c in row.chars() {
                cells.push(Answer::from_code(c).ok_or_else(|| {
                    GatewayError::InvalidMatrix(format!("unknown answer code {c:?}"))
                })?);
            }
        }
        VerdictMatrix::new(file.variant, file.model_id, file.occupations, file.startups, cells)
    }
}
