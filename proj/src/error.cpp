#include "sqgame/error.hpp"

namespace sqgame {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Empty: return "Empty";
    case ErrorCode::TooLongForBank: return "TooLongForBank";
    case ErrorCode::ClassMismatch: return "ClassMismatch";
    case ErrorCode::UnknownQuestion: return "UnknownQuestion";
    case ErrorCode::WrongCount: return "WrongCount";
    case ErrorCode::DuplicateQuestion: return "DuplicateQuestion";
    case ErrorCode::CategoryRepeated: return "CategoryRepeated";
    case ErrorCode::MalformedData: return "MalformedData";
    case ErrorCode::EmptyPool: return "EmptyPool";
    case ErrorCode::InvalidPoolEntry: return "InvalidPoolEntry";
    case ErrorCode::NonDigit: return "NonDigit";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::GameFinished: return "GameFinished";
    case ErrorCode::WrongChallengeKind: return "WrongChallengeKind";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InsufficientPoints: return "InsufficientPoints";
    case ErrorCode::HintUnavailableForRecognition: return "HintUnavailableForRecognition";
    case ErrorCode::NoFillersLeft: return "NoFillersLeft";
    case ErrorCode::ThresholdNotReached: return "ThresholdNotReached";
    case ErrorCode::IncompleteLog: return "IncompleteLog";
    case ErrorCode::SampleTooSmall: return "SampleTooSmall";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::GroupMissing: return "GroupMissing";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::WrongGroup: return "WrongGroup";
    case ErrorCode::WrongStage: return "WrongStage";
    case ErrorCode::StageIncomplete: return "StageIncomplete";
    case ErrorCode::TimerNotElapsed: return "TimerNotElapsed";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::DuplicateSubmission: return "DuplicateSubmission";
    case ErrorCode::BadRequest: return "BadRequest";
  }
  return "Unknown";
}

}  // namespace sqgame
