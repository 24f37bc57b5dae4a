//! Comparison-table rendering plus CI/ROC/fold sidecar data.

use crate::eval::crossval::CompareOutcome;
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct RenderedReports {
    /// Fold-averaged headline grid, methods x (class F1/AUC).
    pub table_csv: String,
    /// Human-readable rendering with best-per-column marks.
    pub table_txt: String,
    /// `method,class,metric,point,lo,hi` over pooled predictions.
    pub ci_csv: String,
    /// `method,class,fpr,tpr`, plot-ready.
    pub roc_csv: String,
    /// `method,class,fold,f1,precision,recall,auc` raw fold metrics.
    pub folds_csv: String,
}

/// Render every output of a comparison run. Output is byte-deterministic:
/// rows follow method order, then TOI order, class + before -, folds
/// ascending.
pub fn render<F: Scalar>(outcome: &CompareOutcome<F>) -> RenderedReports {
    let class_names = class_columns(outcome);

    // method -> class -> (f1, auc), fold-averaged.
    let mut grid: Vec<Option<Vec<(F, F)>>> = Vec::new();
    for result in &outcome.results {
        match result {
            Ok(reports) => {
                let mut row = Vec::new();
                for report in reports {
                    for class in &report.classes {
                        row.push((class.f1, class.auc));
                    }
                }
                grid.push(Some(row));
            }
            Err(_) => grid.push(None),
        }
    }

    // Best per column among completed methods; ties share the mark.
    let n_cols = class_names.len();
    let mut best_f1: Vec<Option<F>> = vec![None; n_cols];
    let mut best_auc: Vec<Option<F>> = vec![None; n_cols];
    for row in grid.iter().flatten() {
        for (c, &(f1, auc)) in row.iter().enumerate() {
            if best_f1[c].is_none() || f1 > best_f1[c].unwrap() {
                best_f1[c] = Some(f1);
            }
            if best_auc[c].is_none() || auc > best_auc[c].unwrap() {
                best_auc[c] = Some(auc);
            }
        }
    }

    let mut table_csv = String::from("method,status");
    for class in &class_names {
        table_csv.push_str(&format!(",{class}_f1,{class}_auc"));
    }
    table_csv.push('\n');

    let mut table_txt = String::new();
    let name_width = outcome
        .method_ids
        .iter()
        .zip(&outcome.results)
        .map(|(id, r)| display_name(id, r).len())
        .max()
        .unwrap_or(6)
        .max(6);
    table_txt.push_str(&format!("{:name_width$}", "method"));
    for class in &class_names {
        table_txt.push_str(&format!(" | {:>8} {:>8}", format!("{class} F1"), "AUC"));
    }
    table_txt.push('\n');

    for (id, (result, row)) in outcome
        .method_ids
        .iter()
        .zip(outcome.results.iter().zip(&grid))
    {
        let name = display_name(id, result);
        match (result, row) {
            (Ok(_), Some(row)) => {
                table_csv.push_str(&format!("{},ok", csv_field(&name)));
                table_txt.push_str(&format!("{name:name_width$}"));
                for (c, &(f1, auc)) in row.iter().enumerate() {
                    table_csv.push_str(&format!(",{f1:.4},{auc:.4}"));
                    let f1_mark = if Some(f1) == best_f1[c] { "*" } else { " " };
                    let auc_mark = if Some(auc) == best_auc[c] { "*" } else { " " };
                    table_txt.push_str(&format!(
                        " | {f1_mark}{f1:>7.4} {auc_mark}{auc:>7.4}"
                    ));
                }
                table_csv.push('\n');
                table_txt.push('\n');
            }
            (Err(reason), _) => {
                table_csv.push_str(&format!("{},FAILED", csv_field(&name)));
                for _ in &class_names {
                    table_csv.push_str(",,");
                }
                table_csv.push('\n');
                table_txt.push_str(&format!("{name:name_width$} | FAILED: {reason}\n"));
            }
            (Ok(_), None) => unreachable!("ok results always fill a grid row"),
        }
    }

    let mut ci_csv = String::from("method,class,metric,point,lo,hi\n");
    let mut roc_csv = String::from("method,class,fpr,tpr\n");
    let mut folds_csv = String::from("method,class,fold,f1,precision,recall,auc\n");
    for (id, result) in outcome.method_ids.iter().zip(&outcome.results) {
        let Ok(reports) = result else { continue };
        let name = csv_field(&display_name(id, result));
        for report in reports {
            for class in &report.classes {
                ci_csv.push_str(&format!(
                    "{name},{},f1,{:.6},{:.6},{:.6}\n",
                    class.class, class.pooled_f1, class.ci_f1.0, class.ci_f1.1
                ));
                ci_csv.push_str(&format!(
                    "{name},{},auc,{:.6},{:.6},{:.6}\n",
                    class.class, class.pooled_auc, class.ci_auc.0, class.ci_auc.1
                ));
                for &(fpr, tpr) in &class.roc {
                    roc_csv.push_str(&format!(
                        "{name},{},{fpr:.6},{tpr:.6}\n",
                        class.class
                    ));
                }
                for (fold, m) in class.folds.iter().enumerate() {
                    folds_csv.push_str(&format!(
                        "{name},{},{fold},{:.6},{:.6},{:.6},{:.6}\n",
                        class.class, m.f1, m.precision, m.recall, m.auc
                    ));
                }
            }
        }
    }

    RenderedReports {
        table_csv,
        table_txt,
        ci_csv,
        roc_csv,
        folds_csv,
    }
}

fn display_name<T>(id: &str, result: &std::result::Result<T, String>) -> String {
    match result {
        Ok(_) => match crate::eval::method::Method::parse(id) {
            Ok(m) => m.to_string(),
            Err(_) => id.to_string(),
        },
        Err(_) => id.to_string(),
    }
}

/// Minimal CSV quoting for fields like `SVM(1,2)`.
fn csv_field(value: &str) -> String {
    if value.contains(',') || value.contains('"') || value.contains('\n') {
        format!("\"{}\"", value.replace('"', "\"\""))
    } else {
        value.to_string()
    }
}

fn class_columns<F>(outcome: &CompareOutcome<F>) -> Vec<String> {
    for result in &outcome.results {
        if let Ok(reports) = result {
            return reports
                .iter()
                .flat_map(|r| r.classes.iter().map(|c| c.class.clone()))
                .collect();
        }
    }
    Vec::new()
}
