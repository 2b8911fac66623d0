use std::fmt;
use std::io::BufRead;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetRecord {
    pub x: String,
    pub y: String,
    pub relation: String,
    /// Graded entailment score (graded benchmarks only).
    pub gold_score: Option<f64>,
    pub fold: Option<String>,
}

impl DatasetRecord {
    pub fn new(x: impl Into<String>, y: impl Into<String>, relation: impl Into<String>) -> Self {
        DatasetRecord { x: x.into(), y: y.into(), relation: relation.into(), gold_score: None, fold: None }
    }

    pub fn is_hyper(&self) -> bool {
        matches!(self.relation.as_str(), "hyper" | "hypernym")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Task {
    Detection,
    DirectionBless,
    DirectionWbless,
    DirectionBibless,
    Graded,
}

impl Task {
    pub fn metric(self) -> &'static str {
        match self {
            Task::Detection => "ap",
            Task::DirectionBless | Task::DirectionWbless | Task::DirectionBibless => "accuracy",
            Task::Graded => "spearman",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Benchmark {
    Bless,
    Eval,
    Leds,
    Shwartz,
    Wbless,
    DirBless,
    DirWbless,
    DirBibless,
    Hyperlex,
}

impl Benchmark {
    /// Results-table column order.
    pub const ALL: [Benchmark; 9] = [
        Benchmark::Bless,
        Benchmark::Eval,
        Benchmark::Leds,
        Benchmark::Shwartz,
        Benchmark::Wbless,
        Benchmark::DirBless,
        Benchmark::DirWbless,
        Benchmark::DirBibless,
        Benchmark::Hyperlex,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Benchmark::Bless => "bless",
            Benchmark::Eval => "eval",
            Benchmark::Leds => "leds",
            Benchmark::Shwartz => "shwartz",
            Benchmark::Wbless => "wbless",
            Benchmark::DirBless => "dir-bless",
            Benchmark::DirWbless => "dir-wbless",
            Benchmark::DirBibless => "dir-bibless",
            Benchmark::Hyperlex => "hyperlex",
        }
    }

    pub fn task(self) -> Task {
        match self {
            Benchmark::Bless | Benchmark::Eval | Benchmark::Leds | Benchmark::Shwartz | Benchmark::Wbless => {
                Task::Detection
            }
            Benchmark::DirBless => Task::DirectionBless,
            Benchmark::DirWbless => Task::DirectionWbless,
            Benchmark::DirBibless => Task::DirectionBibless,
            Benchmark::Hyperlex => Task::Graded,
        }
    }

    /// Allowed relation labels; `None` accepts any non-empty label.
    pub fn labels(self) -> Option<&'static [&'static str]> {
        match self {
            Benchmark::Bless | Benchmark::DirBless => Some(&["hyper", "cohyp", "mero", "random"]),
            Benchmark::Leds => Some(&["hyper", "random"]),
            Benchmark::Eval => Some(&["hyper", "syn", "ant", "mero", "attri"]),
            Benchmark::Wbless | Benchmark::DirWbless => Some(&["hyper", "cohyp", "random", "hypo"]),
            Benchmark::DirBibless => Some(&["hyper", "hypo", "other"]),
            Benchmark::Shwartz | Benchmark::Hyperlex => None,
        }
    }

    pub fn is_graded(self) -> bool {
        self.task() == Task::Graded
    }

    pub fn valid_names() -> String {
        Benchmark::ALL.iter().map(|b| b.name()).collect::<Vec<_>>().join(", ")
    }
}

impl fmt::Display for Benchmark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Benchmark {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Benchmark::ALL.into_iter().find(|b| b.name() == s).ok_or_else(|| Error::UnknownName {
            kind: "benchmark",
            name: s.to_string(),
            valid: Benchmark::valid_names(),
        })
    }
}

/// Reads `x<TAB>y<TAB>relation[<TAB>score[<TAB>fold]]` lines. Blank lines and
/// `#` comments are skipped; an empty score column means no score.
pub fn load_dataset<R: BufRead>(reader: R, source_name: &str, benchmark: Benchmark) -> Result<Vec<DatasetRecord>> {
    let mut out = Vec::new();
    for (n, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = n + 1;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if !(3..=5).contains(&cols.len()) {
            return Err(Error::parse(source_name, line_no, format!("expected 3 to 5 columns, found {}", cols.len())));
        }
        let (x, y, relation) = (cols[0].trim(), cols[1].trim(), cols[2].trim());
        if x.is_empty() || y.is_empty() {
            return Err(Error::parse(source_name, line_no, "empty term"));
        }
        if relation.is_empty() {
            return Err(Error::parse(source_name, line_no, "empty relation label"));
        }
        if let Some(labels) = benchmark.labels() {
            if !labels.contains(&relation) {
                return Err(Error::parse(
                    source_name,
                    line_no,
                    format!("label {relation:?} is not valid for {benchmark} (expected one of {})", labels.join(", ")),
                ));
            }
        }
        let gold_score = match cols.get(3).map(|s| s.trim()).filter(|s| !s.is_empty()) {
            Some(s) => {
                let v: f64 =
                    s.parse().map_err(|_| Error::parse(source_name, line_no, format!("invalid score {s:?}")))?;
                if !(0.0..=6.0).contains(&v) {
                    return Err(Error::parse(source_name, line_no, format!("score {v} outside [0, 6]")));
                }
                Some(v)
            }
            None => None,
        };
        if benchmark.is_graded() && gold_score.is_none() {
            return Err(Error::parse(source_name, line_no, "graded benchmark requires a score"));
        }
        if !benchmark.is_graded() && gold_score.is_some() {
            return Err(Error::parse(source_name, line_no, format!("{benchmark} records carry no score")));
        }
        let fold = cols.get(4).map(|s| s.trim()).filter(|s| !s.is_empty()).map(str::to_string);
        out.push(DatasetRecord {
            x: x.to_lowercase(),
            y: y.to_lowercase(),
            relation: relation.to_string(),
            gold_score,
            fold,
        });
    }
    Ok(out)
}

pub fn parse_dataset_str(text: &str, benchmark: Benchmark) -> Result<Vec<DatasetRecord>> {
    load_dataset(text.as_bytes(), "<memory>", benchmark)
}
