#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sqgame {

enum class ErrorCode {
  // answers / catalog
  Empty,
  TooLongForBank,
  ClassMismatch,
  UnknownQuestion,
  WrongCount,
  DuplicateQuestion,
  CategoryRepeated,
  MalformedData,
  // profiles
  EmptyPool,
  InvalidPoolEntry,
  NonDigit,
  // engine
  InvalidConfig,
  GameFinished,
  WrongChallengeKind,
  IndexOutOfRange,
  InsufficientPoints,
  HintUnavailableForRecognition,
  NoFillersLeft,
  ThresholdNotReached,
  // analysis
  IncompleteLog,
  SampleTooSmall,
  ZeroVariance,
  EmptySample,
  TooLarge,
  GroupMissing,
  // study service
  NotFound,
  WrongGroup,
  WrongStage,
  StageIncomplete,
  TimerNotElapsed,
  OutOfRange,
  DuplicateSubmission,
  BadRequest,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure surfaced by the library carries one of the codes above.
/// Messages never include a configured answer.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  explicit Error(ErrorCode code)
      : std::runtime_error(std::string(to_string(code))), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sqgame
