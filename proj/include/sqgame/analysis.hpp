#pragma once

#include <array>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sqgame/catalog.hpp"
#include "sqgame/event_log.hpp"
#include "sqgame/stats.hpp"

namespace sqgame {

enum class TlxDimension { Mental, Physical, Temporal, Performance, Effort, Frustration };
enum class Task { Memorize, Play, Remember };
enum class Group { OwnAnswers, SystemProfile };

inline constexpr std::array<TlxDimension, 6> kTlxDimensions{
    TlxDimension::Mental,      TlxDimension::Physical, TlxDimension::Temporal,
    TlxDimension::Performance, TlxDimension::Effort,   TlxDimension::Frustration};
inline constexpr std::array<Task, 3> kTasks{Task::Memorize, Task::Play, Task::Remember};

std::string_view to_string(TlxDimension d) noexcept;
std::string_view to_string(Task t) noexcept;
std::string_view to_string(Group g) noexcept;
Task parse_task(std::string_view text);
Group parse_group(std::string_view text);

/// Raw NASA-TLX answers, each on 0..100.
struct TlxResponse {
  double mental = 0;
  double physical = 0;
  double temporal = 0;
  double performance = 0;
  double effort = 0;
  double frustration = 0;

  double get(TlxDimension d) const noexcept;

  friend bool operator==(const TlxResponse&, const TlxResponse&) = default;
};

/// Throws OutOfRange unless every scale is a number in [0, 100].
void validate_tlx(const TlxResponse& r);

struct SessionMetrics {
  int solved_standard = 0;
  int solved_recognition = 0;
  int solved_recall = 0;
  int hints_used = 0;
  double duration_seconds = 0;
  int final_score = 0;
  std::optional<double> memorability;
};

/// Fraction of the three written answers matching the configured ones after
/// normalization. Throws WrongCount.
double memorability_score(std::span<const std::string> written, const QuestionSet& set);

/// Throws IncompleteLog for an empty log or one whose game never finished.
SessionMetrics session_metrics(std::span<const GameEvent> log);

struct TlxRow {
  std::string participant_id;
  Group group = Group::OwnAnswers;
  Task task = Task::Memorize;
  TlxResponse tlx;
};

using TlxDataset = std::vector<TlxRow>;

/// Comma-separated with header
/// participant_id,group,task,mental,physical,temporal,performance,effort,frustration
TlxDataset read_tlx_csv(std::istream& in);
void write_tlx_csv(std::ostream& out, std::span<const TlxRow> rows);

enum class TestChoice { StudentT, MannWhitney };

struct CompareOptions {
  TestChoice test = TestChoice::StudentT;
  stats::MwOptions mw;
  double alpha = 0.05;
  std::map<std::pair<Task, TlxDimension>, TestChoice> overrides;
};

struct ReportRow {
  Task task = Task::Memorize;
  TlxDimension dimension = TlxDimension::Mental;
  std::size_t n_own = 0;
  std::size_t n_profile = 0;
  double mean_own = 0;
  double mean_profile = 0;
  TestChoice test = TestChoice::StudentT;
  std::optional<stats::StatResult> result;
  std::string error;  // error code when the test could not run
  bool significant = false;
};

/// One row per task x dimension (18), comparing own_answers against
/// system_profile. Errors of individual tests are reported per row.
/// Throws GroupMissing when either group has no rows at all.
std::vector<ReportRow> compare_groups(std::span<const TlxRow> dataset, const CompareOptions& options = {});

void write_report_csv(std::ostream& out, std::span<const ReportRow> rows);
std::string format_report(std::span<const ReportRow> rows);

}  // namespace sqgame
