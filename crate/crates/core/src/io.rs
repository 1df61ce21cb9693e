//! CSV ingestion and export of mediation data sets.
//!
//! Lines starting with `#` are comments. The mediator column accepts the
//! codes {1, 2} as-is, or {0, 1} with 0 read as class 2.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::MediationDataset;

/// Assignment of CSV columns to model roles. Misclassification covariates
/// may repeat confounder columns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnMap {
    pub x: String,
    pub c: Vec<String>,
    pub z: Vec<String>,
    pub m_star: String,
    pub y: String,
}

impl ColumnMap {
    pub fn validate(&self) -> Result<()> {
        let singles = [&self.x, &self.m_star, &self.y];
        for (i, a) in singles.iter().enumerate() {
            for b in &singles[i + 1..] {
                if a == b {
                    return Err(Error::Config(format!("column '{a}' has two roles")));
                }
            }
            if self.c.contains(a) || self.z.contains(a) {
                return Err(Error::Config(format!("column '{a}' has two roles")));
            }
        }
        for list in [&self.c, &self.z] {
            for (i, name) in list.iter().enumerate() {
                if list[..i].contains(name) {
                    return Err(Error::Config(format!("column '{name}' listed twice")));
                }
            }
        }
        if self.z.is_empty() {
            return Err(Error::Config(
                "at least one misclassification covariate column is required".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MediatorCoding {
    /// Codes 1 and 2 used directly.
    OneTwo,
    /// Codes 0 and 1; 0 mapped to class 2.
    ZeroOne,
}

impl MediatorCoding {
    pub fn describe(self) -> &'static str {
        match self {
            MediatorCoding::OneTwo => "1->1, 2->2",
            MediatorCoding::ZeroOne => "1->1, 0->2",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Ingested {
    pub dataset: MediationDataset,
    pub coding: MediatorCoding,
}

/// Reads a data set. Reported row numbers are 1-based data rows.
pub fn read_dataset<R: Read>(reader: R, columns: &ColumnMap) -> Result<Ingested> {
    columns.validate()?;
    let mut csv = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = csv
        .headers()
        .map_err(|e| Error::Csv { row: 0, message: e.to_string() })?
        .clone();
    let index = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MissingColumn(name.to_string()))
    };
    let xi = index(&columns.x)?;
    let ci = columns.c.iter().map(|n| index(n)).collect::<Result<Vec<_>>>()?;
    let zi = columns.z.iter().map(|n| index(n)).collect::<Result<Vec<_>>>()?;
    let mi = index(&columns.m_star)?;
    let yi = index(&columns.y)?;

    let mut x = Vec::new();
    let mut c = vec![Vec::new(); ci.len()];
    let mut z = vec![Vec::new(); zi.len()];
    let mut raw_m = Vec::new();
    let mut y = Vec::new();
    for (r, record) in csv.records().enumerate() {
        let row = r + 1;
        let record = record.map_err(|e| Error::Csv { row, message: e.to_string() })?;
        let field = |j: usize, name: &str| -> Result<f64> {
            let text = record.get(j).unwrap_or("");
            let v: f64 = text.parse().map_err(|_| Error::Csv {
                row,
                message: format!("column '{name}': cannot parse '{text}' as a number"),
            })?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Csv { row, message: format!("column '{name}': non-finite value") })
            }
        };
        x.push(field(xi, &columns.x)?);
        for (k, &j) in ci.iter().enumerate() {
            c[k].push(field(j, &columns.c[k])?);
        }
        for (k, &j) in zi.iter().enumerate() {
            z[k].push(field(j, &columns.z[k])?);
        }
        let text = record.get(mi).unwrap_or("");
        let code = match text.parse::<f64>() {
            Ok(v) if v == 0.0 => 0u8,
            Ok(v) if v == 1.0 => 1,
            Ok(v) if v == 2.0 => 2,
            _ => {
                return Err(Error::MediatorCode { row, value: text.to_string() });
            }
        };
        raw_m.push((row, code));
        y.push(field(yi, &columns.y)?);
    }
    if raw_m.is_empty() {
        return Err(Error::Csv { row: 0, message: "no data rows".into() });
    }

    let has_zero = raw_m.iter().any(|&(_, m)| m == 0);
    let coding = if has_zero {
        MediatorCoding::ZeroOne
    } else {
        MediatorCoding::OneTwo
    };
    let mut m_star = Vec::with_capacity(raw_m.len());
    for (row, code) in raw_m {
        m_star.push(match (coding, code) {
            (MediatorCoding::ZeroOne, 0) => 2,
            (MediatorCoding::ZeroOne, 2) => {
                return Err(Error::MediatorCode {
                    row,
                    value: "2 (file also uses code 0)".into(),
                })
            }
            (_, m) => m,
        });
    }

    let dataset = MediationDataset::new(
        x,
        columns.c.iter().cloned().zip(c).collect(),
        columns.z.iter().cloned().zip(z).collect(),
        m_star,
        y,
    )?;
    Ok(Ingested { dataset, coding })
}

pub fn read_dataset_file(path: &std::path::Path, columns: &ColumnMap) -> Result<Ingested> {
    read_dataset(std::fs::File::open(path)?, columns)
}

/// Writes `x`, confounders, misclassification covariates not already
/// written as confounders, `mstar`, `y` and optionally `true_m`.
/// `comments` become leading `#` lines.
pub fn write_dataset<W: Write>(
    mut out: W,
    dataset: &MediationDataset,
    true_m: Option<&[u8]>,
    comments: &[String],
) -> Result<()> {
    if let Some(t) = true_m {
        if t.len() != dataset.len() {
            return Err(Error::Shape(format!(
                "{} true mediator values for {} rows",
                t.len(),
                dataset.len()
            )));
        }
    }
    for line in comments {
        writeln!(out, "# {line}")?;
    }
    let c_names = dataset.confounder_names();
    let extra_z: Vec<usize> = (0..dataset.n_misclass_covariates())
        .filter(|&k| !c_names.contains(&dataset.misclass_covariate_names()[k]))
        .collect();
    let mut header = vec!["x".to_string()];
    header.extend(c_names.iter().cloned());
    header.extend(extra_z.iter().map(|&k| dataset.misclass_covariate_names()[k].clone()));
    header.push("mstar".into());
    header.push("y".into());
    if true_m.is_some() {
        header.push("true_m".into());
    }
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Csv { row: 0, message: e.to_string() };
    w.write_record(&header).map_err(csv_err)?;
    let mut record: Vec<String> = Vec::with_capacity(header.len());
    for i in 0..dataset.len() {
        record.clear();
        record.push(dataset.x()[i].to_string());
        for k in 0..dataset.n_confounders() {
            record.push(dataset.confounder(k)[i].to_string());
        }
        for &k in &extra_z {
            record.push(dataset.misclass_covariate(k)[i].to_string());
        }
        record.push(dataset.m_star()[i].to_string());
        record.push(dataset.y()[i].to_string());
        if let Some(t) = true_m {
            record.push(t[i].to_string());
        }
        w.write_record(&record).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn columns() -> ColumnMap {
        ColumnMap {
            x: "x".into(),
            c: vec!["c1".into()],
            z: vec!["z1".into()],
            m_star: "mstar".into(),
            y: "y".into(),
        }
    }

    #[test]
    fn zero_one_coding_is_mapped() {
        let text = "x,c1,z1,mstar,y\n0.5,1,2,0,1.5\n-1,2,0.3,1,0.2\n";
        let got = read_dataset(text.as_bytes(), &columns()).unwrap();
        assert_eq!(got.coding, MediatorCoding::ZeroOne);
        assert_eq!(got.dataset.m_star(), &[2, 1]);
    }

    #[test]
    fn malformed_row_reports_its_number() {
        let text = "x,c1,z1,mstar,y\n0.5,1,2,1,1.5\n-1,abc,0.3,2,0.2\n";
        match read_dataset(text.as_bytes(), &columns()).unwrap_err() {
            Error::Csv { row, .. } => assert_eq!(row, 2),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn bad_mediator_code_and_missing_column() {
        let text = "x,c1,z1,mstar,y\n0.5,1,2,3,1.5\n";
        assert!(matches!(
            read_dataset(text.as_bytes(), &columns()).unwrap_err(),
            Error::MediatorCode { row: 1, .. }
        ));
        let text = "x,c1,mstar,y\n0.5,1,1,1.5\n";
        assert!(matches!(
            read_dataset(text.as_bytes(), &columns()).unwrap_err(),
            Error::MissingColumn(name) if name == "z1"
        ));
    }

    #[test]
    fn round_trip() {
        let text = "# comment\nx,c1,z1,mstar,y\n0.5,1,2,2,1.5\n-1,2,0.3,1,0.2\n";
        let d = read_dataset(text.as_bytes(), &columns()).unwrap().dataset;
        let mut buf = Vec::new();
        write_dataset(&mut buf, &d, None, &["seed=1".into()]).unwrap();
        let back = read_dataset(buf.as_slice(), &columns()).unwrap().dataset;
        assert_eq!(d, back);
    }
}
