use serde_json::{json, Map, Value};

use super::table::{Cell, PlotStyle, ResultTable};
use crate::error::{IrsError, Result};

/// Vega-Lite line-plot specification for `table`, with the data inlined.
/// Object keys are emitted in sorted order, so identical input gives
/// identical bytes.
pub fn emit_plot_description(table: &ResultTable, style: &PlotStyle) -> Result<String> {
    if table.is_empty() {
        return Err(IrsError::EmptyTable);
    }
    let axis = |name: &str, log: bool| -> Result<Value> {
        let col = table
            .column(name)
            .ok_or_else(|| IrsError::InvalidConfig(format!("plot column `{name}` not in table")))?;
        Ok(json!({
            "field": col.name,
            "type": "quantitative",
            "title": col.label(),
            "scale": { "type": if log { "log" } else { "linear" } },
        }))
    };
    let x = axis(&style.x, style.x_log)?;
    let y = axis(&style.y, style.y_log)?;
    let series = table.column(&style.series).ok_or_else(|| {
        IrsError::InvalidConfig(format!("plot column `{}` not in table", style.series))
    })?;

    let values: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            let obj: Map<String, Value> = table
                .columns
                .iter()
                .zip(row)
                .map(|(c, cell)| {
                    let v = match cell {
                        Cell::Num(x) if x.is_finite() => json!(x),
                        Cell::Num(_) | Cell::Empty => Value::Null,
                        Cell::Text(s) => json!(s),
                    };
                    (c.name.clone(), v)
                })
                .collect();
            Value::Object(obj)
        })
        .collect();

    let spec = json!({
        "$schema": "https://vega.github.io/schema/vega-lite/v5.json",
        "title": table.title,
        "description": format!("{} / {}", table.experiment, table.panel),
        "data": { "values": values },
        "mark": { "type": style.mark, "point": true },
        "encoding": {
            "x": x,
            "y": y,
            "color": { "field": series.name, "type": "nominal", "title": series.label() },
        },
    });
    let mut text = serde_json::to_string_pretty(&spec)?;
    text.push('\n');
    Ok(text)
}
