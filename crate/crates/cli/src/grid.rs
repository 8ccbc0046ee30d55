//! Reflection-grid parsing: `start:stop:step` (inclusive) or a comma list.

/// Slack allowed when deciding whether `stop` itself is on the grid.
const ENDPOINT_SLACK: f64 = 1e-9;

pub fn parse(spec: &str) -> Result<Vec<f64>, String> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Err("empty R grid".into());
    }
    let values = if spec.contains(':') {
        range(spec)?
    } else {
        spec.split(',').map(number).collect::<Result<Vec<_>, _>>()?
    };
    if values.is_empty() {
        return Err(format!("R grid '{spec}' has no points"));
    }
    if let Some(bad) = values.iter().find(|r| !(0.0..=1.0).contains(*r)) {
        return Err(format!("R = {bad} outside [0, 1]"));
    }
    Ok(values)
}

fn number(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("'{}' is not a number", s.trim()))?;
    if !v.is_finite() {
        return Err(format!("'{}' is not finite", s.trim()));
    }
    Ok(v)
}

fn range(spec: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [start_s, stop_s, step_s] = parts[..] else {
        return Err(format!("range '{spec}' must be start:stop:step"));
    };
    let (start, stop, step) = (number(start_s)?, number(stop_s)?, number(step_s)?);
    if step <= 0.0 {
        return Err(format!("step {step} must be positive"));
    }
    if stop < start {
        return Ok(Vec::new());
    }
    let count = ((stop - start) / step + ENDPOINT_SLACK).floor() as usize + 1;
    // Snap points to the decimal precision the range was written in, so
    // 0:1:0.1 yields 0.3 rather than 0.30000000000000004.
    let scale = decimals(start_s).zip(decimals(step_s)).map(|(a, b)| 10f64.powi(a.max(b) as i32));
    Ok((0..count)
        .map(|i| {
            let v = start + i as f64 * step;
            let v = scale.map_or(v, |k| (v * k).round() / k);
            v.min(stop)
        })
        .collect())
}

/// Digits after the decimal point of a plain decimal literal.
fn decimals(s: &str) -> Option<usize> {
    let s = s.trim();
    if s.contains(['e', 'E']) {
        return None;
    }
    let d = s.split_once('.').map_or(0, |(_, frac)| frac.len());
    (d <= 15).then_some(d)
}
