use num_traits::{One, Signed};

use super::reference::{BlockJson, ReferenceJson};
use crate::builder::CfpTable;
use crate::combinatorics::outer_decompose;
use crate::exact::Radical;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Format {
    Json,
    Csv,
    Latex,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Format, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "latex" => Ok(Format::Latex),
            _ => Err(format!("unknown format {s:?} (json, csv, latex)")),
        }
    }
}

pub fn caption(table: &CfpTable) -> String {
    let d = outer_decompose(&table.f1, &table.attach).to_string();
    format!("{} x {} -> {}", table.f1, table.attach, d)
}

/// `target_component` labels, one per column.
pub fn column_heads(table: &CfpTable) -> Vec<String> {
    table.columns.iter().map(|c| format!("{}_{}", c.target, c.component + 1)).collect()
}

pub fn to_reference_json(table: &CfpTable) -> ReferenceJson {
    ReferenceJson {
        n: table.n,
        f1: table.f1.to_string(),
        f2: table.attach.to_string(),
        moved: table.attach.n(),
        caption: caption(table),
        known_issue: None,
        errata: Vec::new(),
        parent_basis: None,
        rows: table.rows.iter().map(|r| r.to_string()).collect(),
        blocks: table
            .blocks
            .iter()
            .map(|b| BlockJson { target: b.target.to_string(), copies: b.copies, width: b.width })
            .collect(),
        entries: table.entries.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect(),
    }
}

/// Deterministic bytes for the table in the requested format.
pub fn export_table(table: &CfpTable, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&to_reference_json(table)).expect("reference JSON serializes");
            s.push('\n');
            s.into_bytes()
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut head = vec!["row".to_string()];
            head.extend(column_heads(table));
            w.write_record(&head).expect("in-memory write");
            for (row, entries) in table.rows.iter().zip(&table.entries) {
                let mut rec = vec![row.to_string()];
                rec.extend(entries.iter().map(|x| x.to_string()));
                w.write_record(&rec).expect("in-memory write");
            }
            w.into_inner().expect("in-memory flush")
        }
        Format::Latex => latex(table).into_bytes(),
    }
}

/// `\frac{a}{b}\sqrt{s}` style text for one entry.
pub fn radical_latex(r: &Radical) -> String {
    if r.is_zero() {
        return "0".into();
    }
    let c = r.coeff();
    let sign = if c.is_negative() { "-" } else { "" };
    let (num, den) = (c.numer().abs(), c.denom().clone());
    let root = if r.radicand().is_one() { String::new() } else { format!("\\sqrt{{{}}}", r.radicand()) };
    let top = match (num.is_one(), root.is_empty()) {
        (true, false) => root,
        (_, _) => format!("{num}{root}"),
    };
    if den.is_one() {
        format!("{sign}{top}")
    } else {
        format!("{sign}\\frac{{{top}}}{{{den}}}")
    }
}

fn latex(table: &CfpTable) -> String {
    let mut out = String::new();
    out.push_str(&format!("% {}\n", caption(table)));
    out.push_str(&format!("\\left(\n\\begin{{array}}{{c|{}}}\n\\hline\n", "c".repeat(table.columns.len())));
    let heads = column_heads(table);
    out.push_str(&format!("&{}\\\\\n\\hline\n", heads.join("&")));
    for (row, entries) in table.rows.iter().zip(&table.entries) {
        let cells: Vec<String> = entries.iter().map(radical_latex).collect();
        out.push_str(&format!(
            "{} & {} \\\\\n",
            row.to_string().replace('{', "\\{").replace('}', "\\}"),
            cells.join(" & ")
        ));
    }
    out.push_str("\\end{array}\n\\right)\n");
    out
}
