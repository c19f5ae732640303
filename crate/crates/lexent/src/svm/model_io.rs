//! Versioned text serialization of trained models.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::vsm::io::write_atomic;

use super::kernel::Kernel;
use super::smo::SvmModel;

const FORMAT: &str = "svm-model v1";

/// Render a model as its file format; byte-identical for equal models.
pub fn model_to_string(model: &SvmModel) -> String {
    let kernel = match model.kernel() {
        Kernel::Polynomial { degree } => format!("kernel=poly degree={degree}"),
        Kernel::Rbf { gamma } => format!("kernel=rbf gamma={gamma:.16e}"),
    };
    let (a, b) = model.platt();
    let mut out = format!(
        "{FORMAT}\n{kernel}\nc={:.16e} dim={} nsv={}\nbias={:.16e} platt_a={:.16e} platt_b={:.16e}\n",
        model.c(),
        model.dim(),
        model.n_support_vectors(),
        model.bias(),
        a,
        b
    );
    for (sv, alpha) in model.support_vectors().iter().zip(model.alphas_signed()) {
        out.push_str(&format!("{alpha:.16e}"));
        for v in sv {
            out.push_str(&format!("\t{v:.16e}"));
        }
        out.push('\n');
    }
    out
}

pub fn write_model(path: &Path, model: &SvmModel) -> Result<()> {
    write_atomic(path, &model_to_string(model))
}

pub fn read_model(path: &Path) -> Result<SvmModel> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    model_from_str(&text).map_err(|e| match e {
        Error::Input(message) => Error::Parse {
            path: path.display().to_string(),
            line: 0,
            message,
        },
        other => other,
    })
}

pub fn model_from_str(text: &str) -> Result<SvmModel> {
    let mut lines = text.lines();
    let version = lines.next().unwrap_or("");
    if version != FORMAT {
        return Err(Error::Input(format!(
            "unsupported model format: {version:?}"
        )));
    }
    let kernel_line = lines
        .next()
        .ok_or_else(|| Error::Input("missing kernel line".into()))?;
    let kv = |line: &str| -> std::collections::HashMap<String, String> {
        line.split_whitespace()
            .filter_map(|f| f.split_once('='))
            .map(|(k, v)| (k.to_owned(), v.to_owned()))
            .collect()
    };
    let kfields = kv(kernel_line);
    let kernel = match kfields.get("kernel").map(String::as_str) {
        Some("poly") => Kernel::Polynomial {
            degree: kfields
                .get("degree")
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| Error::Input("bad polynomial degree".into()))?,
        },
        Some("rbf") => Kernel::Rbf {
            gamma: kfields
                .get("gamma")
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| Error::Input("bad rbf gamma".into()))?,
        },
        other => return Err(Error::Input(format!("unknown kernel: {other:?}"))),
    };

    let shape_line = lines
        .next()
        .ok_or_else(|| Error::Input("missing shape line".into()))?;
    let sfields = kv(shape_line);
    let get_f64 = |fields: &std::collections::HashMap<String, String>, key: &str| {
        fields
            .get(key)
            .and_then(|v| v.parse::<f64>().ok())
            .ok_or_else(|| Error::Input(format!("missing or bad field: {key}")))
    };
    let get_usize = |fields: &std::collections::HashMap<String, String>, key: &str| {
        fields
            .get(key)
            .and_then(|v| v.parse::<usize>().ok())
            .ok_or_else(|| Error::Input(format!("missing or bad field: {key}")))
    };
    let c = get_f64(&sfields, "c")?;
    let dim = get_usize(&sfields, "dim")?;
    let nsv = get_usize(&sfields, "nsv")?;

    let bias_line = lines
        .next()
        .ok_or_else(|| Error::Input("missing bias line".into()))?;
    let bfields = kv(bias_line);
    let bias = get_f64(&bfields, "bias")?;
    let platt_a = get_f64(&bfields, "platt_a")?;
    let platt_b = get_f64(&bfields, "platt_b")?;

    let mut support_vectors = Vec::with_capacity(nsv);
    let mut alphas_signed = Vec::with_capacity(nsv);
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split('\t');
        let alpha: f64 = fields
            .next()
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::Input("bad alpha value".into()))?;
        let sv: std::result::Result<Vec<f64>, _> = fields.map(str::parse::<f64>).collect();
        let sv = sv.map_err(|e| Error::Input(e.to_string()))?;
        if sv.len() != dim {
            return Err(Error::Input(format!(
                "support vector has {} components, expected {dim}",
                sv.len()
            )));
        }
        alphas_signed.push(alpha);
        support_vectors.push(sv);
    }
    if support_vectors.len() != nsv {
        return Err(Error::Input(format!(
            "expected {nsv} support vectors, found {}",
            support_vectors.len()
        )));
    }
    Ok(SvmModel {
        support_vectors,
        alphas_signed,
        bias,
        kernel,
        c,
        dim,
        platt_a,
        platt_b,
    })
}
