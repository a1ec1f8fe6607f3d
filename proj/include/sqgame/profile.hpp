#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "sqgame/catalog.hpp"

namespace sqgame {

enum class Gender { Male, Female };

std::string_view to_string(Gender g) noexcept;
Gender parse_gender(std::string_view text);

/// A system-generated identity whose fields answer every catalog question.
struct Profile {
  Gender gender = Gender::Male;
  std::string full_name;
  std::chrono::year_month_day birthday{};
  std::string mothers_maiden;
  std::string fathers_middle;
  std::string best_friend;
  std::string phone;                 // NNN-NNN-NNNN
  std::string vehicle_registration;  // NN NNNN
  std::string visa_number;           // 16 digits, leading 4
  std::string high_school_city;
  std::string college_city;
  std::string first_work_city;
  std::string first_occupation;
  std::string last_skill;
  std::string main_weakness;
  std::string favourite_pet;
  std::string favourite_food;
  std::string favourite_hobby;
  // Not used by any question.
  std::string high_school_address;
  std::string first_work_address;

  friend bool operator==(const Profile&, const Profile&) = default;
};

/// Candidate strings per textual field, one file per pool:
///   male_first_names, female_first_names, surnames, cities, occupations,
///   skills, weaknesses, pet_names, foods, hobbies
/// Entries are de-duplicated case-insensitively on load.
class AttributePools {
 public:
  static const std::vector<std::string>& pool_names();

  /// Reads `<dir>/<pool>.txt` for every pool (one entry per line, '#'
  /// comments). Throws EmptyPool for a missing or empty pool and
  /// InvalidPoolEntry for entries that would not fit a letter bank.
  static AttributePools load(const std::filesystem::path& dir);

  /// Builds from in-memory pools with the same validation as load().
  static AttributePools from_map(std::map<std::string, std::vector<std::string>> pools);

  const std::vector<std::string>& pool(std::string_view name) const;

 private:
  std::map<std::string, std::vector<std::string>, std::less<>> pools_;
};

/// Deterministic in (pools, seed, gender).
Profile generate_profile(const AttributePools& pools, std::uint64_t seed, Gender gender);

/// The two candidates offered at setup: index 0 male, index 1 female.
std::array<Profile, 2> offered_profiles(const AttributePools& pools, std::uint64_t seed);

/// Normalized answer to a catalog question. Numbers questions reduce to
/// digits: visa and phone give their last six, registration all its digits.
std::string derive_answer(const Profile& profile, std::string_view question_id);

/// Standard Luhn checksum. Throws NonDigit.
bool luhn_valid(std::string_view digits);

/// log2 of the answer space an attacker must search for the question.
double answer_strength_bits(std::string_view question_id, const AttributePools& pools);

/// Field layout mirroring the printed identity sheet.
std::string format_profile(const Profile& profile);

std::string format_date(const std::chrono::year_month_day& date);

}  // namespace sqgame
