#include "sqgame/analysis.hpp"

#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "sqgame/error.hpp"

namespace sqgame {

std::string_view to_string(TlxDimension d) noexcept {
  switch (d) {
    case TlxDimension::Mental: return "mental";
    case TlxDimension::Physical: return "physical";
    case TlxDimension::Temporal: return "temporal";
    case TlxDimension::Performance: return "performance";
    case TlxDimension::Effort: return "effort";
    case TlxDimension::Frustration: return "frustration";
  }
  return "?";
}

std::string_view to_string(Task t) noexcept {
  switch (t) {
    case Task::Memorize: return "memorize";
    case Task::Play: return "play";
    case Task::Remember: return "remember";
  }
  return "?";
}

std::string_view to_string(Group g) noexcept {
  return g == Group::OwnAnswers ? "own_answers" : "system_profile";
}

Task parse_task(std::string_view text) {
  for (auto t : kTasks) {
    if (to_string(t) == text) return t;
  }
  throw Error(ErrorCode::MalformedData, "unknown task '" + std::string(text) + "'");
}

Group parse_group(std::string_view text) {
  if (text == "own_answers") return Group::OwnAnswers;
  if (text == "system_profile") return Group::SystemProfile;
  throw Error(ErrorCode::MalformedData, "unknown group '" + std::string(text) + "'");
}

double TlxResponse::get(TlxDimension d) const noexcept {
  switch (d) {
    case TlxDimension::Mental: return mental;
    case TlxDimension::Physical: return physical;
    case TlxDimension::Temporal: return temporal;
    case TlxDimension::Performance: return performance;
    case TlxDimension::Effort: return effort;
    case TlxDimension::Frustration: return frustration;
  }
  return 0;
}

void validate_tlx(const TlxResponse& r) {
  for (auto d : kTlxDimensions) {
    const double v = r.get(d);
    if (!(v >= 0.0 && v <= 100.0)) {
      throw Error(ErrorCode::OutOfRange, std::string(to_string(d)) + " must lie in [0, 100]");
    }
  }
}

double memorability_score(std::span<const std::string> written, const QuestionSet& set) {
  if (written.size() != kQuestionsPerSet || set.entries.size() != kQuestionsPerSet) {
    throw Error(ErrorCode::WrongCount, "exactly 3 written answers are required");
  }
  int matches = 0;
  for (std::size_t i = 0; i < kQuestionsPerSet; ++i) {
    try {
      if (normalize_answer(written[i]) == set.entries[i].answer) ++matches;
    } catch (const Error&) {
      // blank answer counts as not remembered
    }
  }
  return matches / 3.0;
}

SessionMetrics session_metrics(std::span<const GameEvent> log) {
  if (log.empty()) throw Error(ErrorCode::IncompleteLog, "event log is empty");
  if (!log.back().game_finished) throw Error(ErrorCode::IncompleteLog, "game in the log never finished");
  SessionMetrics m;
  for (const auto& e : log) {
    m.final_score += e.outcome_delta;
    if (e.command == CommandType::Hint) ++m.hints_used;
    const bool solved = e.correct && e.completed;
    if (!solved) continue;
    switch (e.challenge_kind) {
      case ChallengeKind::Standard: ++m.solved_standard; break;
      case ChallengeKind::Recognition: ++m.solved_recognition; break;
      case ChallengeKind::Recall: ++m.solved_recall; break;
    }
  }
  m.duration_seconds = static_cast<double>(log.back().timestamp_ms - log.front().timestamp_ms) / 1000.0;
  return m;
}

// ---------------------------------------------------------------------------
// TLX table

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& s, int line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::MalformedData, "line " + std::to_string(line_no) + ": '" + s + "' is not a number");
  }
}

std::string format_number(double v) {
  std::ostringstream out;
  out << std::setprecision(10) << v;
  return out.str();
}

}  // namespace

TlxDataset read_tlx_csv(std::istream& in) {
  TlxDataset rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("participant_id", 0) == 0) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 9) {
      throw Error(ErrorCode::MalformedData, "line " + std::to_string(line_no) + ": expected 9 columns");
    }
    TlxRow row;
    row.participant_id = f[0];
    row.group = parse_group(f[1]);
    row.task = parse_task(f[2]);
    row.tlx = {parse_number(f[3], line_no), parse_number(f[4], line_no), parse_number(f[5], line_no),
               parse_number(f[6], line_no), parse_number(f[7], line_no), parse_number(f[8], line_no)};
    validate_tlx(row.tlx);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_tlx_csv(std::ostream& out, std::span<const TlxRow> rows) {
  out << "participant_id,group,task,mental,physical,temporal,performance,effort,frustration\n";
  for (const auto& r : rows) {
    out << r.participant_id << ',' << to_string(r.group) << ',' << to_string(r.task);
    for (auto d : kTlxDimensions) out << ',' << format_number(r.tlx.get(d));
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Group comparison

std::vector<ReportRow> compare_groups(std::span<const TlxRow> dataset, const CompareOptions& options) {
  bool have_own = false;
  bool have_profile = false;
  for (const auto& r : dataset) {
    (r.group == Group::OwnAnswers ? have_own : have_profile) = true;
  }
  if (!have_own || !have_profile) throw Error(ErrorCode::GroupMissing, "both groups need at least one participant");

  std::vector<ReportRow> report;
  for (auto task : kTasks) {
    for (auto dim : kTlxDimensions) {
      std::vector<double> own;
      std::vector<double> profile;
      for (const auto& r : dataset) {
        if (r.task != task) continue;
        (r.group == Group::OwnAnswers ? own : profile).push_back(r.tlx.get(dim));
      }
      ReportRow row;
      row.task = task;
      row.dimension = dim;
      row.n_own = own.size();
      row.n_profile = profile.size();
      auto mean = [](const std::vector<double>& v) {
        return v.empty() ? std::nan("") : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
      };
      row.mean_own = mean(own);
      row.mean_profile = mean(profile);
      auto it = options.overrides.find({task, dim});
      row.test = it != options.overrides.end() ? it->second : options.test;
      try {
        row.result = row.test == TestChoice::StudentT ? stats::t_test_independent(own, profile)
                                                      : stats::mann_whitney_u(own, profile, options.mw);
        row.significant = row.result->p_two_tailed < options.alpha;
      } catch (const Error& e) {
        row.error = std::string(to_string(e.code()));
      }
      report.push_back(std::move(row));
    }
  }
  return report;
}

void write_report_csv(std::ostream& out, std::span<const ReportRow> rows) {
  out << "task,dimension,n_own_answers,n_system_profile,mean_own_answers,mean_system_profile,"
         "method,statistic,df,p,significant,error\n";
  for (const auto& r : rows) {
    out << to_string(r.task) << ',' << to_string(r.dimension) << ',' << r.n_own << ',' << r.n_profile << ','
        << format_number(r.mean_own) << ',' << format_number(r.mean_profile) << ',';
    if (r.result) {
      out << stats::to_string(r.result->method) << ',' << format_number(r.result->statistic) << ','
          << (r.result->df ? format_number(*r.result->df) : "") << ',' << format_number(r.result->p_two_tailed);
    } else {
      out << (r.test == TestChoice::StudentT ? "student_t_pooled" : "mann_whitney") << ",,,";
    }
    out << ',' << (r.significant ? "yes" : "no") << ',' << r.error << '\n';
  }
}

std::string format_report(std::span<const ReportRow> rows) {
  std::ostringstream out;
  out << std::left << std::setw(10) << "task" << std::setw(13) << "dimension" << std::right << std::setw(10)
      << "own" << std::setw(10) << "profile" << "  " << std::left << std::setw(18) << "test" << std::right
      << std::setw(10) << "stat" << std::setw(6) << "df" << std::setw(9) << "p" << "  sig\n";
  out << std::fixed;
  for (const auto& r : rows) {
    out << std::left << std::setw(10) << to_string(r.task) << std::setw(13) << to_string(r.dimension) << std::right
        << std::setprecision(1) << std::setw(10) << r.mean_own << std::setw(10) << r.mean_profile << "  ";
    if (r.result) {
      out << std::left << std::setw(18) << stats::to_string(r.result->method) << std::right << std::setprecision(3)
          << std::setw(10) << r.result->statistic << std::setw(6);
      if (r.result->df) {
        out << std::setprecision(0) << *r.result->df;
      } else {
        out << "-";
      }
      out << std::setprecision(4) << std::setw(9) << r.result->p_two_tailed << "  " << (r.significant ? "*" : "");
    } else {
      out << std::left << std::setw(18) << r.error;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace sqgame
