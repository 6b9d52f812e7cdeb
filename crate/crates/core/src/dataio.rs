//! Dataset ingestion, preprocessing and model persistence.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::dataset::{CostVector, Dataset};
use crate::error::{Error, Result};
use crate::forest::Forest;
use crate::rng::{stream, Stream};

/// Column selector for CSV files.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnRef {
    Index(usize),
    Name(String),
    Last,
}

impl ColumnRef {
    /// `"last"`, a zero-based index, or a header name.
    pub fn parse(s: &str) -> Self {
        let s = s.trim();
        if s.eq_ignore_ascii_case("last") {
            ColumnRef::Last
        } else if let Ok(i) = s.parse() {
            ColumnRef::Index(i)
        } else {
            ColumnRef::Name(s.to_string())
        }
    }

    fn resolve(&self, header: Option<&[String]>, width: usize) -> Option<usize> {
        match self {
            ColumnRef::Last => width.checked_sub(1),
            ColumnRef::Index(i) => (*i < width).then_some(*i),
            ColumnRef::Name(n) => header?.iter().position(|h| h == n),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CsvOptions {
    /// Label column; `None` for unlabeled data (every row gets class 0).
    pub label: Option<ColumnRef>,
    pub header: bool,
    /// Column holding query/group ids, excluded from the features.
    pub query: Option<ColumnRef>,
    /// Fixed label vocabulary (e.g. from a trained model). When absent the
    /// distinct labels in the file define the classes.
    pub classes: Option<Vec<String>>,
    /// Relabelling applied to raw labels before classes are formed, e.g. to
    /// merge several classes into one. Unmapped labels pass through.
    pub label_map: Option<HashMap<String, String>>,
}

impl Default for CsvOptions {
    fn default() -> Self {
        CsvOptions {
            label: Some(ColumnRef::Last),
            header: true,
            query: None,
            classes: None,
            label_map: None,
        }
    }
}

/// Canonical spelling of a label so `1`, `1.0` and ` 1 ` agree.
pub fn canonical_label(raw: &str) -> String {
    let raw = raw.trim();
    match raw.parse::<f64>() {
        Ok(v) if v.is_finite() => format!("{}", v + 0.0),
        _ => raw.to_string(),
    }
}

fn sort_labels(labels: &mut [String]) {
    let numeric: Option<Vec<f64>> = labels.iter().map(|l| l.parse().ok()).collect();
    match numeric {
        Some(_) => labels.sort_by(|a, b| {
            a.parse::<f64>()
                .unwrap()
                .total_cmp(&b.parse::<f64>().unwrap())
        }),
        None => labels.sort(),
    }
}

/// Reads a numeric CSV. Labels are remapped to `0..k` in sorted order and the
/// original spellings kept as class names.
pub fn load_csv(path: impl AsRef<Path>, opts: &CsvOptions) -> Result<Dataset> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv(file, path, opts)
}

pub fn read_csv<R: std::io::Read>(reader: R, path: &Path, opts: &CsvOptions) -> Result<Dataset> {
    let parse_err = |line: u64, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let mut records = rdr.records();
    let mut header: Option<Vec<String>> = None;
    if opts.header {
        match records.next() {
            Some(r) => {
                let r =
                    r.map_err(|e| parse_err(e.position().map_or(1, |p| p.line()), e.to_string()))?;
                header = Some(r.iter().map(str::to_string).collect());
            }
            None => return Err(parse_err(1, "empty file".into())),
        }
    }

    let mut width = header.as_ref().map(Vec::len);
    let mut label_col = None;
    let mut query_col = None;
    let mut values = Vec::new();
    let mut raw_labels = Vec::new();
    let mut queries = Vec::new();
    let mut n_rows = 0;

    for rec in records {
        let rec =
            rec.map_err(|e| parse_err(e.position().map_or(0, |p| p.line()), e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() == 1 && rec.get(0) == Some("") {
            continue;
        }
        let w = *width.get_or_insert(rec.len());
        if rec.len() != w {
            return Err(parse_err(
                line,
                format!("expected {w} fields, found {}", rec.len()),
            ));
        }
        if label_col.is_none() && query_col.is_none() {
            label_col = match &opts.label {
                Some(c) => Some(
                    c.resolve(header.as_deref(), w)
                        .ok_or_else(|| parse_err(line, format!("unknown label column {c:?}")))?,
                ),
                None => None,
            };
            query_col = match &opts.query {
                Some(c) => Some(
                    c.resolve(header.as_deref(), w)
                        .ok_or_else(|| parse_err(line, format!("unknown query column {c:?}")))?,
                ),
                None => None,
            };
            if label_col.is_some() && label_col == query_col {
                return Err(parse_err(line, "label and query column coincide".into()));
            }
        }
        for (j, cell) in rec.iter().enumerate() {
            if Some(j) == label_col {
                let label = canonical_label(cell);
                let label = match opts.label_map.as_ref().and_then(|m| m.get(&label)) {
                    Some(to) => to.clone(),
                    None => label,
                };
                raw_labels.push(label);
            } else if Some(j) == query_col {
                queries.push(cell.to_string());
            } else {
                let v: f64 = cell.parse().map_err(|_| {
                    parse_err(line, format!("non-numeric value {cell:?} in column {j}"))
                })?;
                if v.is_nan() {
                    return Err(parse_err(line, format!("NaN in column {j}")));
                }
                values.push(v);
            }
        }
        n_rows += 1;
    }
    if n_rows == 0 {
        return Err(parse_err(1, "no data rows".into()));
    }
    let w = width.unwrap_or(0);
    let n_features = w - usize::from(label_col.is_some()) - usize::from(query_col.is_some());

    let classes = match (&opts.classes, label_col) {
        (Some(c), _) => c.iter().map(|l| canonical_label(l)).collect(),
        (None, Some(_)) => {
            let mut distinct: Vec<String> = raw_labels.clone();
            distinct.sort();
            distinct.dedup();
            sort_labels(&mut distinct);
            distinct
        }
        (None, None) => {
            return Err(Error::InvalidDataset(
                "unlabeled data needs a fixed class list".into(),
            ))
        }
    };
    let index: HashMap<&str, usize> = classes
        .iter()
        .enumerate()
        .map(|(i, c)| (c.as_str(), i))
        .collect();
    let labels = if label_col.is_some() {
        raw_labels
            .iter()
            .map(|l| {
                index.get(l.as_str()).copied().ok_or_else(|| {
                    Error::Schema(format!("label {l:?} is not one of the known classes"))
                })
            })
            .collect::<Result<Vec<_>>>()?
    } else {
        vec![0; n_rows]
    };

    let mut data = Dataset::from_flat(values, n_rows, n_features, labels, classes.len())?
        .with_class_names(classes)?;
    if let Some(h) = header {
        let names = h
            .into_iter()
            .enumerate()
            .filter(|(j, _)| Some(*j) != label_col && Some(*j) != query_col)
            .map(|(_, n)| n)
            .collect();
        data = data.with_feature_names(names)?;
    }
    if query_col.is_some() {
        data = data.with_query_ids(queries)?;
    }
    Ok(data)
}

/// Writes features followed by a `label` column holding class names.
pub fn write_csv<W: Write>(data: &Dataset, mut out: W) -> std::io::Result<()> {
    let names: Vec<String> = match data.feature_names() {
        Some(n) => n.to_vec(),
        None => (0..data.n_features()).map(|j| format!("f{j}")).collect(),
    };
    writeln!(out, "{},label", names.join(","))?;
    for (i, row) in data.rows().enumerate() {
        for v in row {
            write!(out, "{v},")?;
        }
        writeln!(out, "{}", data.class_names()[data.label(i)])?;
    }
    Ok(())
}

pub fn save_csv(data: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut buf = Vec::new();
    write_csv(data, &mut buf).map_err(|e| Error::io(path, e))?;
    fs::write(path, buf).map_err(|e| Error::io(path, e))
}

/// Parses a label map: one `from,to` pair per line. Both sides are
/// canonicalised like labels; blank lines and `#` comments are skipped.
pub fn parse_label_map(text: &str, path: &Path) -> Result<HashMap<String, String>> {
    let mut map = HashMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line: lineno as u64 + 1,
            message,
        };
        let (from, to) = line
            .split_once(',')
            .ok_or_else(|| err(format!("expected `from,to`, found {line:?}")))?;
        let (from, to) = (canonical_label(from), canonical_label(to));
        if from.is_empty() || to.is_empty() {
            return Err(err("empty label".into()));
        }
        if map.insert(from.clone(), to).is_some() {
            return Err(err(format!("label {from:?} mapped twice")));
        }
    }
    Ok(map)
}

pub fn load_label_map(path: &Path) -> Result<HashMap<String, String>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_label_map(&text, path)
}

/// Parses `m` positive costs separated by newlines, commas or whitespace.
pub fn parse_costs(text: &str, m: usize, path: &Path) -> Result<CostVector> {
    let mut costs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        for tok in line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
        {
            let v: f64 = tok.parse().map_err(|_| Error::Parse {
                path: path.to_path_buf(),
                line: lineno as u64 + 1,
                message: format!("invalid cost {tok:?}"),
            })?;
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line: lineno as u64 + 1,
                    message: format!("cost {tok} must be finite and > 0"),
                });
            }
            costs.push(v);
        }
    }
    if costs.len() != m {
        return Err(Error::InvalidCosts(format!(
            "{}: {} costs for {m} features",
            path.display(),
            costs.len()
        )));
    }
    CostVector::new(costs)
}

/// Reads a cost file, or returns unit costs when `path` is `None`.
pub fn load_costs(path: Option<&Path>, m: usize) -> Result<CostVector> {
    match path {
        None => Ok(CostVector::uniform(m)),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
            parse_costs(&text, m, p)
        }
    }
}

pub fn write_costs<W: Write>(costs: &CostVector, mut out: W) -> std::io::Result<()> {
    for c in costs.as_slice() {
        writeln!(out, "{c}")?;
    }
    Ok(())
}

/// Uniform per-feature binning fitted on one dataset and reusable on others.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quantizer {
    pub levels: u32,
    pub mins: Vec<f64>,
    pub maxs: Vec<f64>,
}

impl Quantizer {
    pub fn fit(data: &Dataset, levels: u32) -> Result<Self> {
        if levels < 2 {
            return Err(Error::InvalidConfig(format!(
                "quantization needs at least 2 levels, got {levels}"
            )));
        }
        let m = data.n_features();
        let mut mins = vec![f64::INFINITY; m];
        let mut maxs = vec![f64::NEG_INFINITY; m];
        for row in data.rows() {
            for (j, &v) in row.iter().enumerate() {
                mins[j] = mins[j].min(v);
                maxs[j] = maxs[j].max(v);
            }
        }
        Ok(Quantizer { levels, mins, maxs })
    }

    /// Bin of `v` on feature `j`; values outside the fitted range clamp.
    pub fn bin(&self, j: usize, v: f64) -> f64 {
        let (lo, hi) = (self.mins[j], self.maxs[j]);
        if hi <= lo {
            return 0.0;
        }
        let width = (hi - lo) / self.levels as f64;
        ((v - lo) / width)
            .floor()
            .clamp(0.0, (self.levels - 1) as f64)
    }

    pub fn apply(&self, data: &Dataset) -> Result<Dataset> {
        if data.n_features() != self.mins.len() {
            return Err(Error::Schema(format!(
                "quantizer fitted on {} features, data has {}",
                self.mins.len(),
                data.n_features()
            )));
        }
        let values = data
            .rows()
            .flat_map(|row| row.iter().enumerate().map(|(j, &v)| self.bin(j, v)))
            .collect();
        Ok(data.with_values(values))
    }
}

/// Maps every feature to `levels` uniform bins over its observed range.
pub fn quantize(data: &Dataset, levels: u32) -> Result<Dataset> {
    Quantizer::fit(data, levels)?.apply(data)
}

/// Collapses identical feature rows into one, labelled by their most common
/// label (ties to the lowest class index). First-occurrence order is kept.
pub fn dedup(data: &Dataset) -> Result<Dataset> {
    let key = |row: &[f64]| {
        row.iter()
            .map(|v| (v + 0.0).to_bits())
            .collect::<Vec<u64>>()
    };
    let mut groups: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut first: Vec<usize> = Vec::new();
    let mut votes: Vec<Vec<u64>> = Vec::new();
    for (i, row) in data.rows().enumerate() {
        let g = *groups.entry(key(row)).or_insert_with(|| {
            first.push(i);
            votes.push(vec![0; data.n_classes()]);
            first.len() - 1
        });
        votes[g][data.label(i)] += 1;
    }
    if first.len() == data.n_rows() {
        return Ok(data.clone());
    }
    let mut values = Vec::with_capacity(first.len() * data.n_features());
    for &i in &first {
        values.extend_from_slice(data.row(i));
    }
    let labels = votes
        .iter()
        .map(|v| crate::dataset::ClassCounts(v.clone()).majority())
        .collect();
    let mut out = Dataset::from_flat(
        values,
        first.len(),
        data.n_features(),
        labels,
        data.n_classes(),
    )?
    .with_class_names(data.class_names().to_vec())?;
    if let Some(names) = data.feature_names() {
        out = out.with_feature_names(names.to_vec())?;
    }
    if let Some(q) = data.query_ids() {
        out = out.with_query_ids(first.iter().map(|&i| q[i].clone()).collect())?;
    }
    Ok(out)
}

/// How to carve a dataset into train / validation / test parts.
#[derive(Debug, Clone, PartialEq)]
pub enum SplitSpec {
    /// Random shuffle, then the given fractions go to validation and test.
    Fractions {
        validation: f64,
        test: f64,
        seed: u64,
    },
    /// Explicit zero-based row indices; they win over fractions.
    Indices {
        train: Vec<usize>,
        validation: Vec<usize>,
        test: Vec<usize>,
    },
}

#[derive(Debug, Clone)]
pub struct Splits {
    pub train: Dataset,
    pub validation: Option<Dataset>,
    pub test: Option<Dataset>,
}

pub fn read_indices(path: &Path) -> Result<Vec<usize>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(n, l)| {
            l.trim().parse().map_err(|_| Error::Parse {
                path: path.to_path_buf(),
                line: n as u64 + 1,
                message: format!("invalid row index {:?}", l.trim()),
            })
        })
        .collect()
}

pub fn split(data: &Dataset, spec: &SplitSpec) -> Result<Splits> {
    let n = data.n_rows();
    let (train, validation, test) = match spec {
        SplitSpec::Fractions {
            validation,
            test,
            seed,
        } => {
            let ok = |f: f64| (0.0..1.0).contains(&f);
            if !ok(*validation) || !ok(*test) || validation + test >= 1.0 {
                return Err(Error::InvalidConfig(format!(
                    "invalid split fractions validation={validation} test={test}"
                )));
            }
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut stream(*seed, Stream::Split, 0));
            let take = |f: f64| {
                if f > 0.0 {
                    ((n as f64 * f).round() as usize).max(1)
                } else {
                    0
                }
            };
            let n_test = take(*test);
            let n_val = take(*validation);
            if n_test + n_val >= n {
                return Err(Error::InvalidConfig(format!(
                    "{n} rows leave no training data after splitting"
                )));
            }
            let test = order[..n_test].to_vec();
            let val = order[n_test..n_test + n_val].to_vec();
            let train = order[n_test + n_val..].to_vec();
            (train, val, test)
        }
        SplitSpec::Indices {
            train,
            validation,
            test,
        } => {
            let mut seen = vec![false; n];
            for &i in train.iter().chain(validation).chain(test) {
                if i >= n {
                    return Err(Error::InvalidConfig(format!(
                        "row index {i} out of range for {n} rows"
                    )));
                }
                if std::mem::replace(&mut seen[i], true) {
                    return Err(Error::InvalidConfig(format!(
                        "row index {i} appears in more than one split"
                    )));
                }
            }
            if train.is_empty() {
                return Err(Error::InvalidConfig("empty training split".into()));
            }
            (train.clone(), validation.clone(), test.clone())
        }
    };
    let part = |idx: &[usize]| -> Result<Option<Dataset>> {
        if idx.is_empty() {
            Ok(None)
        } else {
            data.select(idx).map(Some)
        }
    };
    Ok(Splits {
        train: data.select(&train)?,
        validation: part(&validation)?,
        test: part(&test)?,
    })
}

pub fn save_model(forest: &Forest, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, forest.to_text()?).map_err(|e| Error::io(path, e))
}

pub fn load_model(path: impl AsRef<Path>) -> Result<Forest> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Forest::from_text(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str, opts: &CsvOptions) -> Result<Dataset> {
        read_csv(text.as_bytes(), Path::new("mem.csv"), opts)
    }

    fn no_header() -> CsvOptions {
        CsvOptions {
            header: false,
            ..Default::default()
        }
    }

    #[test]
    fn labels_remap_to_contiguous() {
        let d = parse("1.5,5\n2.5,7\n3.5,5\n", &no_header()).unwrap();
        assert_eq!(d.labels(), &[0, 1, 0]);
        assert_eq!(d.n_classes(), 2);
        assert_eq!(d.class_names(), &["5".to_string(), "7".to_string()]);
        assert_eq!(d.row(1), &[2.5]);
    }

    #[test]
    fn numeric_labels_sort_numerically() {
        let d = parse("0,10\n0,9\n0,10.0\n", &no_header()).unwrap();
        assert_eq!(d.class_names(), &["9".to_string(), "10".to_string()]);
        assert_eq!(d.labels(), &[1, 0, 1]);
    }

    #[test]
    fn header_is_not_a_row() {
        let d = parse("a,b,y\n1,2,0\n3,4,1\n", &CsvOptions::default()).unwrap();
        assert_eq!(d.n_rows(), 2);
        assert_eq!(
            d.feature_names().unwrap(),
            &["a".to_string(), "b".to_string()]
        );
        let by_name = CsvOptions {
            label: Some(ColumnRef::Name("a".into())),
            ..Default::default()
        };
        let d = parse("a,b,y\n1,2,0\n3,4,1\n", &by_name).unwrap();
        assert_eq!(d.row(0), &[2.0, 0.0]);
    }

    #[test]
    fn label_map_merges_classes() {
        let map = parse_label_map(
            "# first five become 0\n0,0\n1,0\n2.0,0\n3,1\n",
            Path::new("m"),
        )
        .unwrap();
        assert_eq!(map.get("2").map(String::as_str), Some("0"));
        let opts = CsvOptions {
            header: false,
            label_map: Some(map),
            ..Default::default()
        };
        let d = parse("0,0\n0,1\n0,2\n0,3\n0,4\n", &opts).unwrap();
        assert_eq!(
            d.class_names(),
            &["0".to_string(), "1".to_string(), "4".to_string()]
        );
        assert_eq!(d.labels(), &[0, 0, 0, 1, 2]);
        assert!(matches!(
            parse_label_map("1,0\n1,2\n", Path::new("m")),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(parse_label_map("nocomma\n", Path::new("m")).is_err());
    }

    #[test]
    fn ragged_row_reports_line() {
        let mut text = String::new();
        for _ in 0..11 {
            text.push_str("1,2,0\n");
        }
        text.push_str("1,0\n");
        match parse(&text, &no_header()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 12),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_numeric_and_unknown_column() {
        assert!(matches!(
            parse("1,x,0\n", &no_header()),
            Err(Error::Parse { line: 1, .. })
        ));
        let opts = CsvOptions {
            label: Some(ColumnRef::Name("zz".into())),
            ..Default::default()
        };
        assert!(matches!(
            parse("a,y\n1,0\n", &opts),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn fixed_classes_and_query_column() {
        let opts = CsvOptions {
            header: true,
            label: Some(ColumnRef::Name("y".into())),
            query: Some(ColumnRef::Name("qid".into())),
            classes: Some(vec!["0".into(), "1".into()]),
            label_map: None,
        };
        let d = parse("qid,f,y\nq1,0.5,1\nq2,0.25,1\n", &opts).unwrap();
        assert_eq!(d.n_classes(), 2);
        assert_eq!(d.labels(), &[1, 1]);
        assert_eq!(
            d.query_ids().unwrap(),
            &["q1".to_string(), "q2".to_string()]
        );
        assert_eq!(d.n_features(), 1);
        assert!(matches!(
            parse("qid,f,y\nq1,0.5,2\n", &opts),
            Err(Error::Schema(_))
        ));
    }

    #[test]
    fn costs_parsing() {
        let p = Path::new("c.txt");
        assert_eq!(
            parse_costs("1\n5\n20", 3, p).unwrap().as_slice(),
            &[1.0, 5.0, 20.0]
        );
        assert_eq!(
            parse_costs("1, 5,20\n", 3, p).unwrap().as_slice(),
            &[1.0, 5.0, 20.0]
        );
        assert!(parse_costs("1\n-1\n", 2, p).is_err());
        assert!(parse_costs("1\n2\n", 3, p).is_err());
        assert_eq!(load_costs(None, 50).unwrap().as_slice(), &[1.0; 50]);
    }

    #[test]
    fn quantize_examples() {
        let d = Dataset::from_rows(
            vec![vec![0.0, 4.0], vec![5.0, 4.0], vec![10.0, 4.0]],
            vec![0, 1, 0],
            2,
        )
        .unwrap();
        let q = quantize(&d, 10).unwrap();
        assert_eq!(q.row(0), &[0.0, 0.0]);
        assert_eq!(q.row(1), &[5.0, 0.0]);
        assert_eq!(q.row(2), &[9.0, 0.0]);
        assert!(quantize(&d, 1).is_err());

        let ints = Dataset::from_rows(
            (0..4).map(|v| vec![v as f64]).collect(),
            vec![0, 1, 0, 1],
            2,
        )
        .unwrap();
        let q = quantize(&ints, 10).unwrap();
        let bins: Vec<f64> = q.rows().map(|r| r[0]).collect();
        assert!(bins.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn dedup_most_common_label() {
        let d = Dataset::from_rows(
            vec![vec![1.0], vec![1.0], vec![1.0], vec![2.0]],
            vec![1, 2, 1, 0],
            3,
        )
        .unwrap();
        let u = dedup(&d).unwrap();
        assert_eq!(u.n_rows(), 2);
        assert_eq!(u.labels(), &[1, 0]);

        let tie = Dataset::from_rows(vec![vec![0.0], vec![-0.0]], vec![1, 0], 2).unwrap();
        let u = dedup(&tie).unwrap();
        assert_eq!((u.n_rows(), u.label(0)), (1, 0));

        let distinct = Dataset::from_rows(vec![vec![0.0], vec![1.0]], vec![1, 0], 2).unwrap();
        assert_eq!(dedup(&distinct).unwrap(), distinct);
    }

    #[test]
    fn fraction_split_partitions() {
        let d = Dataset::from_rows(
            (0..100).map(|v| vec![v as f64]).collect(),
            (0..100).map(|v| v % 2).collect(),
            2,
        )
        .unwrap();
        let s = split(
            &d,
            &SplitSpec::Fractions {
                validation: 0.2,
                test: 0.3,
                seed: 4,
            },
        )
        .unwrap();
        let (v, t) = (s.validation.unwrap(), s.test.unwrap());
        assert_eq!((s.train.n_rows(), v.n_rows(), t.n_rows()), (50, 20, 30));
        let mut all: Vec<i64> = s
            .train
            .rows()
            .chain(v.rows())
            .chain(t.rows())
            .map(|r| r[0] as i64)
            .collect();
        all.sort_unstable();
        assert_eq!(all, (0..100).collect::<Vec<_>>());
    }

    #[test]
    fn index_split_rejects_overlap() {
        let d =
            Dataset::from_rows(vec![vec![0.0], vec![1.0], vec![2.0]], vec![0, 1, 0], 2).unwrap();
        let bad = SplitSpec::Indices {
            train: vec![0, 1],
            validation: vec![1],
            test: vec![],
        };
        assert!(split(&d, &bad).is_err());
        let good = SplitSpec::Indices {
            train: vec![2, 0],
            validation: vec![1],
            test: vec![],
        };
        let s = split(&d, &good).unwrap();
        assert_eq!(s.train.row(0), &[2.0]);
        assert!(s.test.is_none());
    }

    proptest::proptest! {
        #[test]
        fn dedup_is_idempotent(
            rows in proptest::collection::vec((0u8..4, 0u8..3, 0usize..3), 1..40)
        ) {
            let d = Dataset::from_rows(
                rows.iter().map(|&(a, b, _)| vec![a as f64, b as f64]).collect(),
                rows.iter().map(|r| r.2).collect(),
                3,
            ).unwrap();
            let once = dedup(&d).unwrap();
            proptest::prop_assert_eq!(dedup(&once).unwrap(), once);
        }

        #[test]
        fn quantize_is_monotone(
            values in proptest::collection::vec(-1e3f64..1e3, 2..50),
            levels in 2u32..20,
        ) {
            let d = Dataset::from_rows(
                values.iter().map(|&v| vec![v]).collect(),
                vec![0; values.len()],
                2,
            ).unwrap();
            let q = quantize(&d, levels).unwrap();
            for i in 0..values.len() {
                for j in 0..values.len() {
                    if values[i] <= values[j] {
                        proptest::prop_assert!(q.value(i, 0) <= q.value(j, 0));
                    }
                }
                proptest::prop_assert!(q.value(i, 0) < levels as f64);
            }
        }

        #[test]
        fn csv_round_trip(
            rows in proptest::collection::vec(
                (proptest::collection::vec(-1e6f64..1e6, 3), 0usize..3), 1..20)
        ) {
            let d = Dataset::from_rows(
                rows.iter().map(|r| r.0.clone()).collect(),
                rows.iter().map(|r| r.1).collect(),
                3,
            ).unwrap();
            let mut buf = Vec::new();
            write_csv(&d, &mut buf).unwrap();
            let opts = CsvOptions {
                classes: Some(d.class_names().to_vec()),
                ..Default::default()
            };
            let back = read_csv(buf.as_slice(), Path::new("rt.csv"), &opts).unwrap();
            proptest::prop_assert_eq!(back.rows().collect::<Vec<_>>(), d.rows().collect::<Vec<_>>());
            proptest::prop_assert_eq!(back.labels(), d.labels());
        }
    }
}
