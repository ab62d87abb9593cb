//! CSV point-cloud files.
//!
//! Header `x1,...,xd` followed by one row per point. Measures may add a `weight`
//! column and mixture samples a `label` column; other columns are ignored on
//! load. Rows with a different field count are rejected.

use std::io::{Read, Write};
use std::path::Path;

use crate::geometry::PointCloud;
use crate::{Error, Result};

/// A loaded cloud with its optional per-point columns.
#[derive(Debug, Clone)]
pub struct CloudFile {
    pub cloud: PointCloud,
    pub weights: Option<Vec<f64>>,
    pub labels: Option<Vec<String>>,
}

pub fn read_cloud_file(reader: impl Read) -> Result<CloudFile> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).flexible(false).trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let mut coord_cols = Vec::new();
    let mut weight_col = None;
    let mut label_col = None;
    for (pos, name) in headers.iter().enumerate() {
        match name {
            "weight" => weight_col = Some(pos),
            "label" => label_col = Some(pos),
            _ => {
                if let Some(k) = name.strip_prefix('x').and_then(|s| s.parse::<usize>().ok()) {
                    coord_cols.push((k, pos));
                }
            }
        }
    }
    coord_cols.sort();
    let dim = coord_cols.len();
    if dim == 0 || coord_cols.iter().enumerate().any(|(i, &(k, _))| k != i + 1) {
        return Err(Error::InvalidPoint(format!(
            "header must name coordinate columns x1..xd, got {:?}",
            headers.iter().collect::<Vec<_>>()
        )));
    }

    let parse = |field: &str, row: usize| -> Result<f64> {
        field.parse::<f64>().map_err(|_| Error::InvalidPoint(format!("row {row}: cannot parse {field:?}")))
    };
    let mut coords = Vec::new();
    let mut weights = weight_col.map(|_| Vec::new());
    let mut labels = label_col.map(|_| Vec::new());
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec?;
        for &(_, pos) in &coord_cols {
            coords.push(parse(&rec[pos], row)?);
        }
        if let (Some(pos), Some(w)) = (weight_col, weights.as_mut()) {
            w.push(parse(&rec[pos], row)?);
        }
        if let (Some(pos), Some(l)) = (label_col, labels.as_mut()) {
            l.push(rec[pos].to_string());
        }
    }
    Ok(CloudFile { cloud: PointCloud::new(dim, coords)?, weights, labels })
}

pub fn read_cloud(reader: impl Read) -> Result<PointCloud> {
    Ok(read_cloud_file(reader)?.cloud)
}

pub fn load_cloud_file(path: impl AsRef<Path>) -> Result<CloudFile> {
    read_cloud_file(std::fs::File::open(path)?)
}

pub fn load_cloud(path: impl AsRef<Path>) -> Result<PointCloud> {
    Ok(load_cloud_file(path)?.cloud)
}

/// Writes the cloud with an optional extra column (`weight` or `label`).
pub fn write_cloud_with(
    writer: impl Write,
    cloud: &PointCloud,
    extra: Option<(&str, &[String])>,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header: Vec<String> = (1..=cloud.dim()).map(|k| format!("x{k}")).collect();
    if let Some((name, values)) = extra {
        if values.len() != cloud.len() {
            return Err(Error::InvalidParameter(format!("{name} column length does not match the cloud")));
        }
        header.push(name.to_string());
    }
    w.write_record(&header)?;
    for (i, p) in cloud.iter().enumerate() {
        // `{}` prints the shortest representation that round-trips (<= 17 significant digits).
        let mut row: Vec<String> = p.iter().map(|c| format!("{c}")).collect();
        if let Some((_, values)) = extra {
            row.push(values[i].clone());
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_cloud(writer: impl Write, cloud: &PointCloud) -> Result<()> {
    write_cloud_with(writer, cloud, None)
}

pub fn save_cloud(path: impl AsRef<Path>, cloud: &PointCloud) -> Result<()> {
    write_cloud(std::fs::File::create(path)?, cloud)
}
