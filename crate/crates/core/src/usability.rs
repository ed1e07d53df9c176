//! ISO 9241-11 style usability metrics: completion rate, time-based
//! efficiency, overall relative efficiency and SUS scores.
//!
//! Everything is computed in full precision; rounding happens only when a
//! report is rendered as text.

use std::collections::HashSet;

use serde::Serialize;

use crate::render::aligned_table;
use crate::tabular::parse_delimited;

pub const SESSIONS_HEADER: [&str; 4] = ["participant", "task", "success", "time_seconds"];
pub const SUS_HEADER: [&str; 11] = [
    "participant",
    "q1",
    "q2",
    "q3",
    "q4",
    "q5",
    "q6",
    "q7",
    "q8",
    "q9",
    "q10",
];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum UsabilityError {
    #[error("no task outcomes")]
    EmptyLog,
    #[error("time for participant {participant}, task {task} must be positive, got {time}")]
    NonPositiveTime {
        participant: String,
        task: String,
        time: f64,
    },
    #[error("malformed SUS response: {0}")]
    MalformedResponse(String),
    #[error("participant {participant} appears twice for task {task}")]
    DuplicateOutcome { participant: String, task: String },
    #[error("participant {0} has more than one SUS response")]
    DuplicateResponse(String),
    #[error("expected header {expected:?}, found {found:?}")]
    BadHeader { expected: String, found: String },
    #[error("line {line}: {message}")]
    BadRecord { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaskOutcome {
    pub participant: String,
    pub task: String,
    pub success: bool,
    pub time_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SusResponse {
    pub participant: String,
    pub answers: [u8; 10],
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct StudyLog {
    outcomes: Vec<TaskOutcome>,
    sus: Vec<SusResponse>,
}

impl StudyLog {
    pub fn new(outcomes: Vec<TaskOutcome>, sus: Vec<SusResponse>) -> Result<Self, UsabilityError> {
        let mut seen = HashSet::new();
        for o in &outcomes {
            if !seen.insert((o.participant.as_str(), o.task.as_str())) {
                return Err(UsabilityError::DuplicateOutcome {
                    participant: o.participant.clone(),
                    task: o.task.clone(),
                });
            }
        }
        let mut seen = HashSet::new();
        for r in &sus {
            if !seen.insert(r.participant.as_str()) {
                return Err(UsabilityError::DuplicateResponse(r.participant.clone()));
            }
        }
        Ok(StudyLog { outcomes, sus })
    }

    pub fn outcomes(&self) -> &[TaskOutcome] {
        &self.outcomes
    }

    pub fn sus(&self) -> &[SusResponse] {
        &self.sus
    }

    /// Task identifiers in order of first appearance.
    pub fn tasks(&self) -> Vec<&str> {
        let mut seen = HashSet::new();
        self.outcomes
            .iter()
            .map(|o| o.task.as_str())
            .filter(|t| seen.insert(*t))
            .collect()
    }

    pub fn outcomes_for(&self, task: &str) -> Vec<TaskOutcome> {
        self.outcomes.iter().filter(|o| o.task == task).cloned().collect()
    }
}

fn check_times(outcomes: &[TaskOutcome]) -> Result<(), UsabilityError> {
    if outcomes.is_empty() {
        return Err(UsabilityError::EmptyLog);
    }
    match outcomes
        .iter()
        .find(|o| !(o.time_seconds > 0.0 && o.time_seconds.is_finite()))
    {
        Some(o) => Err(UsabilityError::NonPositiveTime {
            participant: o.participant.clone(),
            task: o.task.clone(),
            time: o.time_seconds,
        }),
        None => Ok(()),
    }
}

/// Percentage of outcomes that succeeded.
pub fn completion_rate(outcomes: &[TaskOutcome]) -> Result<f64, UsabilityError> {
    if outcomes.is_empty() {
        return Err(UsabilityError::EmptyLog);
    }
    let done = outcomes.iter().filter(|o| o.success).count();
    Ok(100.0 * (done as f64 / outcomes.len() as f64))
}

/// Sum of n/t over all outcomes, divided by tasks × participants.
/// Goals per second.
pub fn time_based_efficiency(outcomes: &[TaskOutcome]) -> Result<f64, UsabilityError> {
    check_times(outcomes)?;
    let tasks: HashSet<&str> = outcomes.iter().map(|o| o.task.as_str()).collect();
    let participants: HashSet<&str> = outcomes.iter().map(|o| o.participant.as_str()).collect();
    let sum: f64 = outcomes
        .iter()
        .filter(|o| o.success)
        .map(|o| 1.0 / o.time_seconds)
        .sum();
    Ok(sum / (tasks.len() * participants.len()) as f64)
}

/// Time spent on successful tasks as a percentage of all time spent.
pub fn overall_relative_efficiency(outcomes: &[TaskOutcome]) -> Result<f64, UsabilityError> {
    check_times(outcomes)?;
    let total: f64 = outcomes.iter().map(|o| o.time_seconds).sum();
    let good: f64 = outcomes.iter().filter(|o| o.success).map(|o| o.time_seconds).sum();
    Ok(100.0 * (good / total))
}

/// Standard SUS scoring: odd items contribute `answer - 1`, even items
/// `5 - answer`, scaled by 2.5.
pub fn sus_score(response: &SusResponse) -> Result<f64, UsabilityError> {
    if let Some((i, a)) = response.answers.iter().enumerate().find(|(_, a)| !(1..=5).contains(*a)) {
        return Err(UsabilityError::MalformedResponse(format!(
            "{}: q{} = {a}, expected 1..5",
            response.participant,
            i + 1
        )));
    }
    let odd: u32 = response.answers.iter().step_by(2).map(|&a| a as u32).sum();
    let even: u32 = response.answers.iter().skip(1).step_by(2).map(|&a| a as u32).sum();
    let x = odd as f64 - 5.0;
    let y = 25.0 - even as f64;
    Ok((x + y) * 2.5)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaskSummary {
    pub task: String,
    pub participants: usize,
    pub successes: usize,
    pub completion_rate: f64,
    pub mean_time_seconds: f64,
    pub time_based_efficiency: f64,
    pub overall_relative_efficiency: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SusScore {
    pub participant: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SusSummary {
    pub respondents: usize,
    pub mean_score: f64,
    pub scores: Vec<SusScore>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyReport {
    pub tasks: Vec<TaskSummary>,
    pub overall_time_based_efficiency: Option<f64>,
    pub overall_relative_efficiency: Option<f64>,
    pub sus: Option<SusSummary>,
}

pub fn summarize_study(log: &StudyLog) -> Result<StudyReport, UsabilityError> {
    let mut tasks = Vec::new();
    for task in log.tasks() {
        let outcomes = log.outcomes_for(task);
        let total: f64 = outcomes.iter().map(|o| o.time_seconds).sum();
        tasks.push(TaskSummary {
            task: task.to_string(),
            participants: outcomes.len(),
            successes: outcomes.iter().filter(|o| o.success).count(),
            completion_rate: completion_rate(&outcomes)?,
            mean_time_seconds: total / outcomes.len() as f64,
            time_based_efficiency: time_based_efficiency(&outcomes)?,
            overall_relative_efficiency: overall_relative_efficiency(&outcomes)?,
        });
    }
    let (overall_tbe, overall_ore) = if log.outcomes.is_empty() {
        (None, None)
    } else {
        (
            Some(time_based_efficiency(&log.outcomes)?),
            Some(overall_relative_efficiency(&log.outcomes)?),
        )
    };
    let sus = if log.sus.is_empty() {
        None
    } else {
        let scores = log
            .sus
            .iter()
            .map(|r| {
                Ok(SusScore {
                    participant: r.participant.clone(),
                    score: sus_score(r)?,
                })
            })
            .collect::<Result<Vec<_>, UsabilityError>>()?;
        let mean = scores.iter().map(|s| s.score).sum::<f64>() / scores.len() as f64;
        Some(SusSummary {
            respondents: scores.len(),
            mean_score: mean,
            scores,
        })
    };
    Ok(StudyReport {
        tasks,
        overall_time_based_efficiency: overall_tbe,
        overall_relative_efficiency: overall_ore,
        sus,
    })
}

impl StudyReport {
    /// Plain-text report with display rounding applied.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if !self.tasks.is_empty() {
            let header = [
                "task",
                "participants",
                "completion_%",
                "mean_time_s",
                "tbe_goals_per_s",
                "ore_%",
            ];
            let rows: Vec<Vec<String>> = self
                .tasks
                .iter()
                .map(|t| {
                    vec![
                        t.task.clone(),
                        t.participants.to_string(),
                        format!("{:.2}", t.completion_rate),
                        format!("{:.0}", t.mean_time_seconds),
                        format!("{:.4}", t.time_based_efficiency),
                        format!("{:.2}", t.overall_relative_efficiency),
                    ]
                })
                .collect();
            out.push_str(&aligned_table(&header, &rows));
        }
        if let (Some(tbe), Some(ore)) = (self.overall_time_based_efficiency, self.overall_relative_efficiency) {
            out.push_str(&format!("overall tbe_goals_per_s: {tbe:.4}\n"));
            out.push_str(&format!("overall ore_%: {ore:.2}\n"));
        }
        if let Some(sus) = &self.sus {
            out.push_str(&format!("sus respondents: {}\n", sus.respondents));
            out.push_str(&format!("sus mean: {:.1}\n", sus.mean_score));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn check_header(found: &[String], expected: &[&str]) -> Result<(), UsabilityError> {
    if found.iter().map(String::as_str).ne(expected.iter().copied()) {
        return Err(UsabilityError::BadHeader {
            expected: expected.join(","),
            found: found.join(","),
        });
    }
    Ok(())
}

fn csv_error(e: impl ToString) -> UsabilityError {
    UsabilityError::BadRecord {
        line: 0,
        message: e.to_string(),
    }
}

/// Session log: `participant,task,success,time_seconds`, success 0 or 1.
pub fn parse_sessions_csv(bytes: &[u8]) -> Result<Vec<TaskOutcome>, UsabilityError> {
    let table = parse_delimited(bytes, ',', true).map_err(csv_error)?;
    check_header(table.header(), &SESSIONS_HEADER)?;
    table
        .records()
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let bad = |message: String| UsabilityError::BadRecord { line: i + 2, message };
            let participant = r[0].trim();
            let task = r[1].trim();
            if participant.is_empty() || task.is_empty() {
                return Err(bad("participant and task must not be empty".into()));
            }
            let success = match r[2].trim() {
                "1" => true,
                "0" => false,
                other => return Err(bad(format!("success must be 0 or 1, got {other:?}"))),
            };
            let time_seconds: f64 = r[3]
                .trim()
                .parse()
                .map_err(|_| bad(format!("time_seconds is not a number: {:?}", r[3])))?;
            if !(time_seconds > 0.0 && time_seconds.is_finite()) {
                return Err(UsabilityError::NonPositiveTime {
                    participant: participant.into(),
                    task: task.into(),
                    time: time_seconds,
                });
            }
            Ok(TaskOutcome {
                participant: participant.into(),
                task: task.into(),
                success,
                time_seconds,
            })
        })
        .collect()
}

/// SUS answers: `participant,q1,...,q10`, each answer 1 to 5.
pub fn parse_sus_csv(bytes: &[u8]) -> Result<Vec<SusResponse>, UsabilityError> {
    let table = parse_delimited(bytes, ',', true).map_err(csv_error)?;
    check_header(table.header(), &SUS_HEADER)?;
    table
        .records()
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let bad = |message: String| UsabilityError::BadRecord { line: i + 2, message };
            let participant = r[0].trim();
            if participant.is_empty() {
                return Err(bad("participant must not be empty".into()));
            }
            let mut answers = [0u8; 10];
            for (q, cell) in r[1..].iter().enumerate() {
                answers[q] = match cell.trim().parse::<u8>() {
                    Ok(a) if (1..=5).contains(&a) => a,
                    _ => return Err(bad(format!("q{} must be an integer 1..5, got {cell:?}", q + 1))),
                };
            }
            Ok(SusResponse {
                participant: participant.into(),
                answers,
            })
        })
        .collect()
}
