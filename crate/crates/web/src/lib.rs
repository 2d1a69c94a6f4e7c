use qsemi::dp::DEFAULT_CAP;
use qsemi::generator::generate_all;
use qsemi::*;
use serde_json::json;
use wasm_bindgen::prelude::*;

// rows split by ';' or newlines, entries by whitespace or commas
fn parse_matrix(text: &str, field: Field) -> Result<Matrix<Scalar>, String> {
    let rows: Vec<Vec<Scalar>> = text
        .split(|c| c == ';' || c == '\n')
        .map(str::trim)
        .filter(|r| !r.is_empty())
        .map(|r| {
            r.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|e| !e.is_empty())
                .map(|e| e.parse::<i64>().map(|v| field.from_i64(v)).map_err(|_| format!("bad entry {e:?}")))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    if rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err("rows have different lengths".into());
    }
    Ok(Matrix::from_rows(rows))
}

fn zigzag(quiver_json: &str) -> Result<ZigzagQuiver, String> {
    let q = MixedQuiver::from_json(quiver_json).map_err(|e| e.to_string())?;
    q.check().map_err(|e| e.to_string())?;
    match classify_zigzag(&q) {
        Ok(zz) => Ok(zz),
        Err(_) => reduce(&q).map(|m| m.target().clone()).map_err(|e| e.to_string()),
    }
}

pub fn generators_text(quiver_json: &str, degrees: &str, characteristic: u32) -> Result<String, String> {
    let zz = zigzag(quiver_json)?;
    let d: MultiDegree = degrees.parse().map_err(|e| format!("{e}"))?;
    let field = Field::from_characteristic(characteristic as u64).map_err(|e| e.to_string())?;
    let (en, entries) = generate_all(&zz, &d, field, DEFAULT_CAP, Some(200)).map_err(|e| e.to_string())?;
    let report = GeneratorReport {
        field,
        degree: d,
        weight: en.weight,
        truncated: en.truncated,
        entries,
    };
    Ok(report.to_text())
}

pub fn reduce_json(quiver_json: &str) -> Result<String, String> {
    let q = MixedQuiver::from_json(quiver_json).map_err(|e| e.to_string())?;
    let map = reduce(&q).map_err(|e| e.to_string())?;
    let substitution: Vec<String> = map
        .substitution_table(Field::Rational)
        .into_iter()
        .map(|(v, p)| format!("{v} -> {p}"))
        .collect();
    Ok(json!({
        "table": map.to_string(),
        "substitution": substitution,
        "target": map.target().quiver().to_json(),
    })
    .to_string())
}

pub fn dp_text(x: &str, y: &str, z: &str, t: usize, r: usize, s: usize) -> Result<String, String> {
    let q = Field::Rational;
    let shape = DpShape::new(t, r, s);
    let (n, m) = (shape.rows(), shape.cols());
    let pick = |text: &str, rows, cols| -> Result<Matrix<Scalar>, String> {
        if text.trim().is_empty() {
            Ok(Matrix::filled(rows, cols, q.zero()))
        } else {
            parse_matrix(text, q)
        }
    };
    let value = dp_eval(&pick(x, n, m)?, &pick(y, n, n)?, &pick(z, m, m)?, shape, &q.one()).map_err(|e| e.to_string())?;
    Ok(value.to_string())
}

#[wasm_bindgen]
pub fn generators(quiver_json: &str, degrees: &str, characteristic: u32) -> Result<String, JsValue> {
    generators_text(quiver_json, degrees, characteristic).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn reduce_quiver(quiver_json: &str) -> Result<String, JsValue> {
    reduce_json(quiver_json).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn dp(x: &str, y: &str, z: &str, t: usize, r: usize, s: usize) -> Result<String, JsValue> {
    dp_text(x, y, z, t, r, s).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const PLANE: &str = include_str!("../../../quivers/bilinear1.json");
    const LOOPS: &str = include_str!("../../../quivers/two_loops.json");

    #[test]
    fn generators_of_the_plane() {
        let text = generators_text(PLANE, "t:;r:;s:1", 0).unwrap();
        assert!(text.contains("poly z[1][1][2] - z[1][2][1]"));
    }

    #[test]
    fn non_zigzag_input_is_reduced() {
        let text = generators_text(LOOPS, "t:1,0,0;r:0;s:0", 0).unwrap();
        assert!(text.starts_with("qsemi-generators v1"));
        let v: serde_json::Value = serde_json::from_str(&reduce_json(LOOPS).unwrap()).unwrap();
        assert!(v["table"].as_str().unwrap().contains("type 3"));
    }

    #[test]
    fn dp_of_a_determinant_and_a_pfaffian() {
        assert_eq!(dp_text("1 2; 3 4", "", "", 2, 0, 0).unwrap(), "-2");
        assert_eq!(dp_text("", "0 5; 1 0", "", 0, 1, 0).unwrap(), "4");
        assert!(dp_text("1 2; 3", "", "", 2, 0, 0).is_err());
    }
}
