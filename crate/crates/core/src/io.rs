//! Game files: UTF-8 JSON objects with `rows`, `cols`, `row_payoffs` and
//! `col_payoffs`, plus optional `row_labels` / `col_labels`.
//!
//! Every double this crate writes (game files, trace CSVs) uses 17
//! significant digits so that values survive a round trip bit for bit.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::game::{Game, PlayerSide};
use crate::scalar::Payoff;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GameFile {
    rows: usize,
    cols: usize,
    row_payoffs: Vec<Vec<f64>>,
    col_payoffs: Vec<Vec<f64>>,
    #[serde(default)]
    row_labels: Option<Vec<String>>,
    #[serde(default)]
    col_labels: Option<Vec<String>>,
}

/// Formats a double with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Parses and validates a game file.
pub fn load_game(text: &str) -> Result<Game<f64>> {
    let file: GameFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if file.row_payoffs.len() != file.rows || file.col_payoffs.len() != file.rows {
        return Err(Error::DimensionMismatch(format!(
            "declared {} rows, found {} / {}",
            file.rows,
            file.row_payoffs.len(),
            file.col_payoffs.len()
        )));
    }
    for (i, row) in file.row_payoffs.iter().chain(&file.col_payoffs).enumerate() {
        if row.len() != file.cols {
            return Err(Error::DimensionMismatch(format!(
                "payoff row {} has {} entries, declared {} columns",
                i % file.rows.max(1),
                row.len(),
                file.cols
            )));
        }
    }
    let game = Game::from_rows(file.row_payoffs, file.col_payoffs)?;
    match (file.row_labels, file.col_labels) {
        (Some(r), Some(c)) => game.with_labels(r, c),
        (None, None) => Ok(game),
        _ => Err(Error::Parse("row_labels and col_labels must be given together".into())),
    }
}

/// Serializes a game in the file format read by [`load_game`].
pub fn save_game<T: Payoff>(g: &Game<T>) -> String {
    let matrix = |buf: &[T]| {
        let rows: Vec<String> = buf
            .chunks(g.cols())
            .map(|row| {
                let cells: Vec<String> = row.iter().map(|x| fmt_f64(x.to_f64().unwrap_or(f64::NAN))).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        format!("[\n    {}\n  ]", rows.join(",\n    "))
    };
    let mut out = format!(
        "{{\n  \"rows\": {},\n  \"cols\": {},\n  \"row_payoffs\": {},\n  \"col_payoffs\": {}",
        g.rows(),
        g.cols(),
        matrix(g.row_payoffs()),
        matrix(g.col_payoffs())
    );
    if let (Some(r), Some(c)) = (g.labels(PlayerSide::Row), g.labels(PlayerSide::Column)) {
        let quote = |l: &[String]| serde_json::to_string(l).expect("strings serialize");
        out.push_str(&format!(",\n  \"row_labels\": {},\n  \"col_labels\": {}", quote(r), quote(c)));
    }
    out.push_str("\n}\n");
    out
}

/// The game as a JSON value of the file shape, for embedding in reports.
pub fn game_json<T: Payoff>(g: &Game<T>) -> serde_json::Value {
    let rows = |buf: &[T]| -> Vec<Vec<f64>> {
        buf.chunks(g.cols()).map(|r| r.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()).collect()
    };
    let mut v = serde_json::json!({
        "rows": g.rows(),
        "cols": g.cols(),
        "row_payoffs": rows(g.row_payoffs()),
        "col_payoffs": rows(g.col_payoffs()),
    });
    if let (Some(r), Some(c)) = (g.labels(PlayerSide::Row), g.labels(PlayerSide::Column)) {
        v["row_labels"] = serde_json::json!(r);
        v["col_labels"] = serde_json::json!(c);
    }
    v
}
