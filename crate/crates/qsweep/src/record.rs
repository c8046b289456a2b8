//! Output records and the CSV/JSON emitters.

use serde_json::{json, Map, Value};

use crate::config::{Model, OutputFormat};

pub const SCHEMA_VERSION: u32 = 1;

const FIXED_COLUMNS: [&str; 17] = [
    "model", "n", "chi", "B_or_theta", "L", "parity", "E_minus", "E_plus", "D", "I1", "I2", "I3",
    "C", "kx", "ky", "kz", "flags",
];

const ALIGNED_EXTRA: [&str; 5] = ["Iq", "D_search", "I2_search", "I3_search", "diff_max"];
const REFERENCE_EXTRA: [&str; 6] = ["Iq", "D_ref", "I1_ref", "I2_ref", "I3_ref", "C_ref"];

#[derive(Debug, Clone, Default)]
pub struct Record {
    pub model_label: &'static str,
    pub n: Option<usize>,
    pub chi: Option<f64>,
    pub b_or_theta: f64,
    pub l: Option<usize>,
    pub parity: Option<char>,
    pub e_minus: Option<f64>,
    pub e_plus: Option<f64>,
    pub d: Option<f64>,
    pub i1: Option<f64>,
    pub i2: Option<f64>,
    pub i3: Option<f64>,
    pub c: Option<f64>,
    pub kx: Option<f64>,
    pub ky: Option<f64>,
    pub kz: Option<f64>,
    pub flags: Vec<&'static str>,
    pub iq: Option<f64>,
    pub d_search: Option<f64>,
    pub i2_search: Option<f64>,
    pub i3_search: Option<f64>,
    pub diff_max: Option<f64>,
    pub d_ref: Option<f64>,
    pub i1_ref: Option<f64>,
    pub i2_ref: Option<f64>,
    pub i3_ref: Option<f64>,
    pub c_ref: Option<f64>,
}

fn extra_columns(model: Model) -> &'static [&'static str] {
    match model {
        Model::Aligned => &ALIGNED_EXTRA,
        _ => &REFERENCE_EXTRA,
    }
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.10e}")).unwrap_or_default()
}

fn int_cell(v: Option<usize>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl Record {
    fn extra_values(&self, model: Model) -> Vec<Option<f64>> {
        match model {
            Model::Aligned => {
                vec![self.iq, self.d_search, self.i2_search, self.i3_search, self.diff_max]
            }
            _ => vec![self.iq, self.d_ref, self.i1_ref, self.i2_ref, self.i3_ref, self.c_ref],
        }
    }

    pub fn csv_row(&self, model: Model) -> String {
        let mut cells = vec![
            self.model_label.to_string(),
            int_cell(self.n),
            cell(self.chi),
            format!("{:.10e}", self.b_or_theta),
            int_cell(self.l),
            self.parity.map(String::from).unwrap_or_default(),
            cell(self.e_minus),
            cell(self.e_plus),
            cell(self.d),
            cell(self.i1),
            cell(self.i2),
            cell(self.i3),
            cell(self.c),
            cell(self.kx),
            cell(self.ky),
            cell(self.kz),
            self.flags.join(";"),
        ];
        cells.extend(self.extra_values(model).into_iter().map(cell));
        cells.join(",")
    }

    pub fn json_value(&self, model: Model) -> Value {
        let mut map = Map::new();
        map.insert("model".into(), json!(self.model_label));
        map.insert("n".into(), json!(self.n));
        map.insert("chi".into(), json!(self.chi));
        map.insert("B_or_theta".into(), json!(self.b_or_theta));
        map.insert("L".into(), json!(self.l));
        map.insert("parity".into(), json!(self.parity.map(String::from)));
        map.insert("E_minus".into(), json!(self.e_minus));
        map.insert("E_plus".into(), json!(self.e_plus));
        map.insert("D".into(), json!(self.d));
        map.insert("I1".into(), json!(self.i1));
        map.insert("I2".into(), json!(self.i2));
        map.insert("I3".into(), json!(self.i3));
        map.insert("C".into(), json!(self.c));
        map.insert("kx".into(), json!(self.kx));
        map.insert("ky".into(), json!(self.ky));
        map.insert("kz".into(), json!(self.kz));
        map.insert("flags".into(), json!(self.flags));
        for (name, value) in extra_columns(model).iter().zip(self.extra_values(model)) {
            map.insert((*name).into(), json!(value));
        }
        Value::Object(map)
    }
}

pub fn csv_header(model: Model, q: Option<f64>) -> String {
    let mut out = format!("# schema={SCHEMA_VERSION}\n");
    if let Some(q) = q {
        out.push_str(&format!("# q={q}\n"));
    }
    let mut columns: Vec<&str> = FIXED_COLUMNS.to_vec();
    columns.extend(extra_columns(model));
    out.push_str(&columns.join(","));
    out
}

pub fn render(model: Model, q: Option<f64>, records: &[Record], format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => {
            let mut out = csv_header(model, q);
            out.push('\n');
            for record in records {
                out.push_str(&record.csv_row(model));
                out.push('\n');
            }
            out
        }
        OutputFormat::Json => {
            let values: Vec<Value> = records.iter().map(|r| r.json_value(model)).collect();
            let doc = json!({ "schema": SCHEMA_VERSION, "q": q, "records": values });
            let mut out = serde_json::to_string_pretty(&doc).expect("records serialize");
            out.push('\n');
            out
        }
    }
}
