use crate::counts::{RawSample, VmCount, TIME_TOLERANCE};
use crate::detector::{DetectorEvent, EventKind};
use crate::device::{Button, LedSnapshot};
use crate::error::{Error, Result};
use crate::filterbank::DEFAULT_SAMPLE_RATE_HZ;
use crate::sim::TraceRow;

pub const SAMPLES_HEADER: &str = "t,ax,ay,az";
pub const COUNTS_HEADER: &str = "t,vm,sx,sy,sz";
pub const EVENTS_HEADER: &str = "t,event";
pub const DEVICE_LOG_HEADER: &str = "t,kind,arg";
pub const SNAPSHOTS_HEADER: &str = "t,motor,white,blue,red,option,timer";
pub const TRACE_HEADER: &str = "t,ax,ay,az,vm,sx,sy,sz,timer,motor,white,blue,red,option";

/// Formats with 9 significant digits, dropping trailing zeros.
pub fn fmt_sig(x: f64) -> String {
    let rounded: f64 = format!("{x:.8e}").parse().expect("formatted float parses");
    // avoid "-0"
    let rounded = if rounded == 0.0 { 0.0 } else { rounded };
    format!("{rounded}")
}

fn flag(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

/// Data lines of a CSV text after checking the header. Yields `(line_no, line)`.
fn data_lines<'a>(text: &'a str, header: &str) -> Result<Vec<(usize, &'a str)>> {
    let mut lines: Vec<&str> = text.split('\n').collect();
    if lines.last() == Some(&"") {
        lines.pop();
    }
    let Some(first) = lines.first() else {
        return Err(Error::parse(
            1,
            format!("missing header, expected `{header}`"),
        ));
    };
    for (i, line) in lines.iter().enumerate() {
        if line.contains('\r') {
            return Err(Error::parse(
                i + 1,
                "carriage return found; lines must end with LF",
            ));
        }
    }
    if *first != header {
        return Err(Error::parse(
            1,
            format!("malformed header `{first}`, expected `{header}`"),
        ));
    }
    let mut out = Vec::with_capacity(lines.len() - 1);
    for (i, line) in lines.iter().enumerate().skip(1) {
        if line.is_empty() {
            return Err(Error::parse(i + 1, "empty line"));
        }
        out.push((i + 1, *line));
    }
    Ok(out)
}

fn fields<const N: usize>(line: &str, line_no: usize) -> Result<[&str; N]> {
    let parts: Vec<&str> = line.split(',').collect();
    parts.try_into().map_err(|parts: Vec<&str>| {
        Error::parse(
            line_no,
            format!("expected {N} fields, found {}", parts.len()),
        )
    })
}

fn number(field: &str, column: &str, line_no: usize) -> Result<f64> {
    let v: f64 = field.parse().map_err(|_| {
        Error::parse(
            line_no,
            format!("bad number `{field}` in column `{column}`"),
        )
    })?;
    if !v.is_finite() {
        return Err(Error::parse(
            line_no,
            format!("non-finite value `{field}` in column `{column}`"),
        ));
    }
    Ok(v)
}

fn non_negative(field: &str, column: &str, line_no: usize) -> Result<f64> {
    let v = number(field, column, line_no)?;
    if v < 0.0 {
        return Err(Error::parse(
            line_no,
            format!("negative value `{field}` in column `{column}`"),
        ));
    }
    Ok(v)
}

fn bit(field: &str, column: &str, line_no: usize) -> Result<bool> {
    match field {
        "0" => Ok(false),
        "1" => Ok(true),
        _ => Err(Error::parse(
            line_no,
            format!("expected 0 or 1 in column `{column}`, found `{field}`"),
        )),
    }
}

fn option_index(field: &str, line_no: usize) -> Result<usize> {
    match field {
        "1" | "2" | "3" => Ok(field.as_bytes()[0] as usize - b'1' as usize),
        _ => Err(Error::parse(
            line_no,
            format!("option must be 1, 2 or 3, found `{field}`"),
        )),
    }
}

fn strictly_after(t: f64, previous: Option<f64>, line_no: usize) -> Result<()> {
    match previous {
        Some(p) if t <= p => Err(Error::parse(
            line_no,
            format!("non-monotone time: {t} does not follow {p}"),
        )),
        _ => Ok(()),
    }
}

fn not_before(t: f64, previous: Option<f64>, line_no: usize) -> Result<()> {
    match previous {
        Some(p) if t < p => Err(Error::parse(
            line_no,
            format!("non-monotone time: {t} is before {p}"),
        )),
        _ => Ok(()),
    }
}

/// Raw samples at the default 100 Hz.
pub fn parse_samples(text: &str) -> Result<Vec<RawSample>> {
    parse_samples_at(text, DEFAULT_SAMPLE_RATE_HZ)
}

/// Raw samples; consecutive timestamps must be exactly one sample period
/// apart (within 1e-9 s).
pub fn parse_samples_at(text: &str, sample_rate_hz: f64) -> Result<Vec<RawSample>> {
    let period = 1.0 / sample_rate_hz;
    let mut out = Vec::new();
    let mut prev: Option<f64> = None;
    for (line_no, line) in data_lines(text, SAMPLES_HEADER)? {
        let [t, ax, ay, az] = fields::<4>(line, line_no)?;
        let t = number(t, "t", line_no)?;
        strictly_after(t, prev, line_no)?;
        if let Some(p) = prev {
            let dt = t - p;
            if (dt - period).abs() > TIME_TOLERANCE {
                return Err(Error::parse(
                    line_no,
                    format!(
                        "wrong sample rate: spacing {dt} s, expected {period} s ({sample_rate_hz} Hz)"
                    ),
                ));
            }
        }
        prev = Some(t);
        out.push(RawSample::new(
            t,
            number(ax, "ax", line_no)?,
            number(ay, "ay", line_no)?,
            number(az, "az", line_no)?,
        ));
    }
    Ok(out)
}

/// Writes samples with the shortest decimal form that reads back exactly.
pub fn write_samples(samples: &[RawSample]) -> String {
    let mut s = String::with_capacity(32 * (samples.len() + 1));
    s.push_str(SAMPLES_HEADER);
    s.push('\n');
    for x in samples {
        s.push_str(&format!("{},{},{},{}\n", x.t, x.ax, x.ay, x.az));
    }
    s
}

pub fn parse_counts(text: &str) -> Result<Vec<VmCount>> {
    let mut out = Vec::new();
    let mut prev = None;
    for (line_no, line) in data_lines(text, COUNTS_HEADER)? {
        let [t, vm, sx, sy, sz] = fields::<5>(line, line_no)?;
        let t = number(t, "t", line_no)?;
        strictly_after(t, prev, line_no)?;
        prev = Some(t);
        out.push(VmCount {
            t,
            value: non_negative(vm, "vm", line_no)?,
            epoch_sums: [
                non_negative(sx, "sx", line_no)?,
                non_negative(sy, "sy", line_no)?,
                non_negative(sz, "sz", line_no)?,
            ],
        });
    }
    Ok(out)
}

pub fn write_counts(counts: &[VmCount]) -> String {
    let mut s = String::from(COUNTS_HEADER);
    s.push('\n');
    for c in counts {
        let [sx, sy, sz] = c.epoch_sums;
        s.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_sig(c.t),
            fmt_sig(c.value),
            fmt_sig(sx),
            fmt_sig(sy),
            fmt_sig(sz)
        ));
    }
    s
}

pub fn parse_events(text: &str) -> Result<Vec<DetectorEvent>> {
    let mut out = Vec::new();
    let mut prev = None;
    for (line_no, line) in data_lines(text, EVENTS_HEADER)? {
        let [t, kind] = fields::<2>(line, line_no)?;
        let t = number(t, "t", line_no)?;
        not_before(t, prev, line_no)?;
        prev = Some(t);
        let kind = EventKind::parse(kind).ok_or_else(|| {
            Error::parse(
                line_no,
                format!("unknown event `{kind}`, expected reset, vib_start or vib_end"),
            )
        })?;
        out.push(DetectorEvent { t, kind });
    }
    Ok(out)
}

pub fn write_events(events: &[DetectorEvent]) -> String {
    let mut s = String::from(EVENTS_HEADER);
    s.push('\n');
    for e in events {
        s.push_str(&format!("{},{}\n", fmt_sig(e.t), e.kind.as_str()));
    }
    s
}

/// One line of a device input log.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeviceInput {
    Sample { t: f64, vm: f64 },
    Button { t: f64, button: Button },
}

impl DeviceInput {
    pub fn t(&self) -> f64 {
        match *self {
            DeviceInput::Sample { t, .. } | DeviceInput::Button { t, .. } => t,
        }
    }
}

/// Device input log. Times never decrease, and sample times strictly increase.
pub fn parse_device_log(text: &str) -> Result<Vec<DeviceInput>> {
    let mut out = Vec::new();
    let mut prev = None;
    let mut prev_sample = None;
    for (line_no, line) in data_lines(text, DEVICE_LOG_HEADER)? {
        let [t, kind, arg] = fields::<3>(line, line_no)?;
        let t = number(t, "t", line_no)?;
        not_before(t, prev, line_no)?;
        prev = Some(t);
        let input = match kind {
            "sample" => {
                strictly_after(t, prev_sample, line_no)?;
                prev_sample = Some(t);
                DeviceInput::Sample {
                    t,
                    vm: non_negative(arg, "arg", line_no)?,
                }
            }
            "button" => DeviceInput::Button {
                t,
                button: Button::parse(arg).ok_or_else(|| {
                    Error::parse(
                        line_no,
                        format!("unknown button `{arg}`, expected select, red or power"),
                    )
                })?,
            },
            other => {
                return Err(Error::parse(
                    line_no,
                    format!("unknown kind `{other}`, expected sample or button"),
                ))
            }
        };
        out.push(input);
    }
    Ok(out)
}

pub fn write_device_log(inputs: &[DeviceInput]) -> String {
    let mut s = String::from(DEVICE_LOG_HEADER);
    s.push('\n');
    for input in inputs {
        match input {
            DeviceInput::Sample { t, vm } => s.push_str(&format!("{t},sample,{vm}\n")),
            DeviceInput::Button { t, button } => {
                s.push_str(&format!("{t},button,{}\n", button.as_str()))
            }
        }
    }
    s
}

/// Snapshot log. `option` is written 1-based (the number of blue flashes).
pub fn parse_snapshots(text: &str) -> Result<Vec<LedSnapshot>> {
    let mut out = Vec::new();
    let mut prev = None;
    for (line_no, line) in data_lines(text, SNAPSHOTS_HEADER)? {
        let [t, motor, white, blue, red, option, timer] = fields::<7>(line, line_no)?;
        let t = number(t, "t", line_no)?;
        not_before(t, prev, line_no)?;
        prev = Some(t);
        out.push(LedSnapshot {
            t,
            motor: bit(motor, "motor", line_no)?,
            white: bit(white, "white", line_no)?,
            blue: bit(blue, "blue", line_no)?,
            red: bit(red, "red", line_no)?,
            option: option_index(option, line_no)?,
            timer_seconds: non_negative(timer, "timer", line_no)?,
        });
    }
    Ok(out)
}

fn snapshot_fields(s: &LedSnapshot) -> String {
    format!(
        "{},{},{},{},{},{}",
        flag(s.motor),
        flag(s.white),
        flag(s.blue),
        flag(s.red),
        s.option + 1,
        fmt_sig(s.timer_seconds)
    )
}

pub fn write_snapshots(snapshots: &[LedSnapshot]) -> String {
    let mut s = String::from(SNAPSHOTS_HEADER);
    s.push('\n');
    for snap in snapshots {
        s.push_str(&format!("{},{}\n", fmt_sig(snap.t), snapshot_fields(snap)));
    }
    s
}

/// Wide simulation trace: samples, counts, timer and device outputs per tick.
pub fn parse_trace(text: &str) -> Result<Vec<TraceRow>> {
    let mut out = Vec::new();
    let mut prev = None;
    for (line_no, line) in data_lines(text, TRACE_HEADER)? {
        let [t, ax, ay, az, vm, sx, sy, sz, timer, motor, white, blue, red, option] =
            fields::<14>(line, line_no)?;
        let t = number(t, "t", line_no)?;
        strictly_after(t, prev, line_no)?;
        prev = Some(t);
        out.push(TraceRow {
            sample: RawSample::new(
                t,
                number(ax, "ax", line_no)?,
                number(ay, "ay", line_no)?,
                number(az, "az", line_no)?,
            ),
            count: VmCount {
                t,
                value: non_negative(vm, "vm", line_no)?,
                epoch_sums: [
                    non_negative(sx, "sx", line_no)?,
                    non_negative(sy, "sy", line_no)?,
                    non_negative(sz, "sz", line_no)?,
                ],
            },
            snapshot: LedSnapshot {
                t,
                motor: bit(motor, "motor", line_no)?,
                white: bit(white, "white", line_no)?,
                blue: bit(blue, "blue", line_no)?,
                red: bit(red, "red", line_no)?,
                option: option_index(option, line_no)?,
                timer_seconds: non_negative(timer, "timer", line_no)?,
            },
        });
    }
    Ok(out)
}

pub fn write_trace(rows: &[TraceRow]) -> String {
    let mut s = String::with_capacity(96 * (rows.len() + 1));
    s.push_str(TRACE_HEADER);
    s.push('\n');
    for r in rows {
        let x = &r.sample;
        let c = &r.count;
        let d = &r.snapshot;
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            fmt_sig(x.t),
            fmt_sig(x.ax),
            fmt_sig(x.ay),
            fmt_sig(x.az),
            fmt_sig(c.value),
            fmt_sig(c.epoch_sums[0]),
            fmt_sig(c.epoch_sums[1]),
            fmt_sig(c.epoch_sums[2]),
            fmt_sig(d.timer_seconds),
            flag(d.motor),
            flag(d.white),
            flag(d.blue),
            flag(d.red),
            d.option + 1,
        ));
    }
    s
}
