#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sqgame {

enum class Category { Names, Favourites, Numbers, Places, Characteristics };
enum class AnswerClass { Letters, Digits };

std::string_view to_string(Category c) noexcept;
std::string_view to_string(AnswerClass c) noexcept;
Category parse_category(std::string_view text);
AnswerClass parse_answer_class(std::string_view text);

/// Largest number of non-space symbols an answer may have: the letter bank size.
inline constexpr std::size_t kBankSize = 12;
inline constexpr std::size_t kQuestionsPerSet = 3;

struct SecurityQuestion {
  std::string id;
  Category category;
  std::string prompt;
  AnswerClass answer_class;

  friend bool operator==(const SecurityQuestion&, const SecurityQuestion&) = default;
};

using Catalog = std::vector<SecurityQuestion>;

/// The fixed 15-question catalog, 3 per category.
const Catalog& load_catalog();

/// Reads a catalog from a tab-separated file (id, category, answer_class,
/// prompt). Lines starting with '#' are comments. The result must satisfy the
/// same invariants as the built-in catalog; prompts may differ (localization).
Catalog load_catalog(const std::filesystem::path& path);

/// Throws MalformedData unless the catalog has 15 unique questions, 3 per
/// category, with digit answers exactly for the Numbers category.
void check_catalog(std::span<const SecurityQuestion> catalog);

std::vector<SecurityQuestion> filter_by_category(std::span<const SecurityQuestion> catalog,
                                                 Category category);

/// Throws UnknownQuestion.
const SecurityQuestion& find_question(std::span<const SecurityQuestion> catalog,
                                      std::string_view id);

/// Lowercase, trim, collapse internal whitespace runs to a single space.
/// Throws Empty when nothing remains.
std::string normalize_answer(std::string_view text);

/// Number of symbols excluding spaces.
std::size_t symbol_count(std::string_view normalized);

/// Normalizes and checks the answer fits the 12-symbol bank and the
/// question's alphabet. Throws Empty, TooLongForBank, ClassMismatch.
std::string validate_configured_answer(const SecurityQuestion& question, std::string_view text);

/// Same checks against an answer class directly (used for standard challenges).
std::string validate_bank_answer(AnswerClass answer_class, std::string_view text);

struct QuestionAnswer {
  std::string question_id;
  std::string answer;  // normalized

  friend bool operator==(const QuestionAnswer&, const QuestionAnswer&) = default;
};

struct QuestionSet {
  std::vector<QuestionAnswer> entries;

  friend bool operator==(const QuestionSet&, const QuestionSet&) = default;
};

struct SelectionOptions {
  bool require_distinct_categories = false;
};

/// Builds a player's question set from (question id, raw answer) choices.
/// Throws WrongCount, DuplicateQuestion, UnknownQuestion, CategoryRepeated,
/// or the answer validation errors.
QuestionSet select_question_set(std::span<const SecurityQuestion> catalog,
                                std::span<const std::pair<std::string, std::string>> choices,
                                SelectionOptions options = {});

}  // namespace sqgame
