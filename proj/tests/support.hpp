#pragma once

#include <algorithm>
#include <atomic>
#include <span>
#include <string_view>
#include <filesystem>
#include <memory>
#include <random>
#include <string>
#include <unistd.h>

#include "sqgame/catalog.hpp"
#include "sqgame/content.hpp"
#include "sqgame/error.hpp"
#include "sqgame/game.hpp"
#include "sqgame/profile.hpp"

namespace testing {

inline const std::filesystem::path kData = SQGAME_DATA_DIR;
inline const std::filesystem::path kPools = kData / "pools";
inline const std::filesystem::path kStandard = kData / "standard_challenges.json";

inline const sqgame::AttributePools& pools() {
  static const auto p = sqgame::AttributePools::load(kPools);
  return p;
}

inline const std::vector<sqgame::StandardSpec>& standard_pool() {
  static const auto p = sqgame::load_standard_pool(kStandard);
  return p;
}

inline sqgame::QuestionSet lucas_set() {
  std::vector<std::pair<std::string, std::string>> c{
      {"mothers_maiden", "Salisbury"}, {"last6_visa", "043015"}, {"favourite_food", "Noodles"}};
  return sqgame::select_question_set(sqgame::load_catalog(), c);
}

inline sqgame::GameConfig config_for(const sqgame::QuestionSet& set, std::uint64_t seed) {
  return sqgame::make_game_config(standard_pool(), set, seed);
}

// Question set drawn from a generated profile, varied by seed.
inline sqgame::QuestionSet random_set(std::uint64_t seed) {
  const auto& cat = sqgame::load_catalog();
  std::mt19937_64 gen(seed);
  std::vector<std::size_t> idx(cat.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), gen);
  const auto profile = sqgame::generate_profile(pools(), seed, seed % 2 ? sqgame::Gender::Female : sqgame::Gender::Male);
  std::vector<std::pair<std::string, std::string>> c;
  for (int i = 0; i < 3; ++i) c.emplace_back(cat[idx[i]].id, sqgame::derive_answer(profile, cat[idx[i]].id));
  return sqgame::select_question_set(cat, c);
}

// Fresh, empty directory removed on destruction.
struct TempDir {
  std::filesystem::path path;
  TempDir() {
    static std::atomic<int> n{0};
    path = std::filesystem::temp_directory_path() /
           ("sqgame-test-" + std::to_string(::getpid()) + "-" + std::to_string(n++));
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
};

// The input that solves the active challenge.
inline sqgame::Command perfect_move(const sqgame::GameState& s) {
  const auto& c = *s.active;
  if (c.kind == sqgame::ChallengeKind::Recognition) return sqgame::Command::choice(c.correct_option);
  return sqgame::Command::answer(c.secret_answer);
}

}  // namespace testing

#define CHECK_CODE(expr, expected)                                  \
  do {                                                              \
    bool thrown_ = false;                                           \
    try {                                                           \
      (void)(expr);                                                 \
    } catch (const sqgame::Error& e_) {                             \
      thrown_ = true;                                               \
      CHECK_MESSAGE(e_.code() == (expected), sqgame::to_string(e_.code())); \
    }                                                               \
    CHECK_MESSAGE(thrown_, #expr " did not throw");                 \
  } while (0)

namespace testing {

// Plays perfectly until the active challenge has the wanted kind.
inline sqgame::GameState advance_to(sqgame::GameState s, sqgame::ChallengeKind kind) {
  while (!s.finished() && s.active->kind != kind) s = sqgame::apply_command(s, perfect_move(s)).state;
  return s;
}

inline std::string answer_of(const sqgame::GameState& s, const std::string& question_id) {
  for (const auto& e : s.config->question_set.entries) {
    if (e.question_id == question_id) return e.answer;
  }
  return {};
}

// Secrets a view of the active challenge must not reveal: the active answer,
// and every configured answer while a question challenge is shown.
inline std::vector<std::string> secrets_for(const sqgame::GameState& s) {
  std::vector<std::string> out;
  if (!s.active) return out;
  if (s.active->kind == sqgame::ChallengeKind::Standard) {
    out.push_back(s.active->secret_answer);
  } else {
    for (const auto& e : s.config->question_set.entries) out.push_back(e.answer);
  }
  return out;
}

// First leak in a serialized document, or "" when clean. Keys are checked
// against the allowlist; every string value against every secret.
inline std::string find_leak(const nlohmann::json& j, const std::vector<std::string>& secrets,
                             std::span<const std::string_view> allowed_keys) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (std::find(allowed_keys.begin(), allowed_keys.end(), k) == allowed_keys.end()) return "key " + k;
      if (auto leak = find_leak(v, secrets, allowed_keys); !leak.empty()) return leak;
    }
  } else if (j.is_array()) {
    for (const auto& v : j) {
      if (auto leak = find_leak(v, secrets, allowed_keys); !leak.empty()) return leak;
    }
  } else if (j.is_string()) {
    for (const auto& s : secrets) {
      if (sqgame::mentions_secret(j.get<std::string>(), s)) return "value " + j.get<std::string>() + " reveals " + s;
    }
  } else if (j.is_number()) {
    for (const auto& s : secrets) {
      if (j.dump().find(s) != std::string::npos) return "number " + j.dump();
    }
  }
  return {};
}

}  // namespace testing
