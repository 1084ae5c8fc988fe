//! Grammar checks for legacy VTK and RFC 4180 CSV files.

/// Checks a legacy ASCII VTK polydata file and returns its point count and
/// the values of each point-data array by name.
pub fn parse_vtk(text: &str) -> Result<(usize, Vec<(String, Vec<f64>)>), String> {
    let mut lines = text.split('\n');
    let version = lines.next().ok_or("empty file")?;
    let v = version
        .strip_prefix("# vtk DataFile Version ")
        .ok_or("bad version line")?;
    let (major, minor) = v.split_once('.').ok_or("bad version number")?;
    major.parse::<u32>().map_err(|e| e.to_string())?;
    minor.parse::<u32>().map_err(|e| e.to_string())?;
    let title = lines.next().ok_or("missing title")?;
    if title.len() > 256 {
        return Err("title longer than 256 characters".into());
    }
    if lines.next() != Some("ASCII") {
        return Err("expected ASCII".into());
    }
    let rest: Vec<&str> = lines.flat_map(|l| l.split_whitespace()).collect();
    let mut t = rest.into_iter();
    let expect = |word: &str, t: &mut dyn Iterator<Item = &str>| -> Result<(), String> {
        match t.next() {
            Some(w) if w == word => Ok(()),
            other => Err(format!("expected {word}, found {other:?}")),
        }
    };
    let count = |t: &mut dyn Iterator<Item = &str>| -> Result<usize, String> {
        t.next().ok_or("missing count")?.parse::<usize>().map_err(|e| e.to_string())
    };
    let number = |t: &mut dyn Iterator<Item = &str>, int: bool| -> Result<f64, String> {
        let w = t.next().ok_or("truncated data")?;
        let x = if int {
            w.parse::<i64>().map_err(|e| format!("{w}: {e}"))? as f64
        } else {
            w.parse::<f64>().map_err(|e| format!("{w}: {e}"))?
        };
        if x.is_finite() {
            Ok(x)
        } else {
            Err(format!("non-finite value {w}"))
        }
    };
    let data_type = |w: Option<&str>| -> Result<bool, String> {
        match w {
            Some("float" | "double") => Ok(false),
            Some("int" | "long" | "unsigned_char" | "short") => Ok(true),
            other => Err(format!("unknown data type {other:?}")),
        }
    };

    expect("DATASET", &mut t)?;
    expect("POLYDATA", &mut t)?;
    expect("POINTS", &mut t)?;
    let n = count(&mut t)?;
    let int = data_type(t.next())?;
    for _ in 0..3 * n {
        number(&mut t, int)?;
    }
    expect("VERTICES", &mut t)?;
    let cells = count(&mut t)?;
    let size = count(&mut t)?;
    let mut used = 0;
    for _ in 0..cells {
        let k = count(&mut t)?;
        used += k + 1;
        for _ in 0..k {
            if count(&mut t)? >= n {
                return Err("vertex index out of range".into());
            }
        }
    }
    if used != size {
        return Err(format!("VERTICES size {size} but {used} integers"));
    }
    expect("POINT_DATA", &mut t)?;
    if count(&mut t)? != n {
        return Err("POINT_DATA count differs from POINTS".into());
    }
    let mut arrays = Vec::new();
    while let Some(kind) = t.next() {
        let name = t.next().ok_or("missing array name")?.to_string();
        let int = data_type(t.next())?;
        let values = match kind {
            "VECTORS" => 3 * n,
            "SCALARS" => {
                let mut next = t.next();
                let mut comps = 1;
                if let Some(c) = next.and_then(|w| w.parse::<usize>().ok()) {
                    comps = c;
                    next = t.next();
                }
                if next != Some("LOOKUP_TABLE") {
                    return Err(format!("{name}: expected LOOKUP_TABLE"));
                }
                t.next().ok_or("missing table name")?;
                comps * n
            }
            other => return Err(format!("unsupported section {other}")),
        };
        let data = (0..values).map(|_| number(&mut t, int)).collect::<Result<Vec<_>, _>>()?;
        arrays.push((name, data));
    }
    Ok((n, arrays))
}

/// Checks RFC 4180 framing and returns the header and numeric records.
pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>), String> {
    let body = text.strip_suffix("\r\n").ok_or("missing final CRLF")?;
    let mut records = Vec::new();
    for line in body.split("\r\n") {
        if line.contains('\n') || line.contains('\r') {
            return Err("bare line break inside a record".into());
        }
        let fields: Vec<String> = line
            .split(',')
            .map(|f| {
                if f.contains('"') {
                    let inner = f
                        .strip_prefix('"')
                        .and_then(|f| f.strip_suffix('"'))
                        .ok_or_else(|| format!("stray quote in {f}"))?;
                    if inner.replace("\"\"", "").contains('"') {
                        return Err(format!("unescaped quote in {f}"));
                    }
                    Ok(inner.replace("\"\"", "\""))
                } else {
                    Ok(f.to_string())
                }
            })
            .collect::<Result<_, _>>()?;
        records.push(fields);
    }
    let header = records.first().ok_or("no header")?.clone();
    let mut rows = Vec::new();
    for r in &records[1..] {
        if r.len() != header.len() {
            return Err(format!("record has {} fields, header {}", r.len(), header.len()));
        }
        rows.push(
            r.iter()
                .map(|f| f.parse::<f64>().map_err(|e| format!("{f}: {e}")))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    Ok((header, rows))
}
