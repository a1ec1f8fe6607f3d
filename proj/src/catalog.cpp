#include "sqgame/catalog.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <set>
#include <sstream>

#include "sqgame/error.hpp"

namespace sqgame {

std::string_view to_string(Category c) noexcept {
  switch (c) {
    case Category::Names: return "Names";
    case Category::Favourites: return "Favourites";
    case Category::Numbers: return "Numbers";
    case Category::Places: return "Places";
    case Category::Characteristics: return "Characteristics";
  }
  return "?";
}

std::string_view to_string(AnswerClass c) noexcept {
  return c == AnswerClass::Digits ? "digits" : "letters";
}

Category parse_category(std::string_view text) {
  for (auto c : {Category::Names, Category::Favourites, Category::Numbers, Category::Places,
                 Category::Characteristics}) {
    if (to_string(c) == text) return c;
  }
  throw Error(ErrorCode::MalformedData, "unknown category '" + std::string(text) + "'");
}

AnswerClass parse_answer_class(std::string_view text) {
  if (text == "letters") return AnswerClass::Letters;
  if (text == "digits") return AnswerClass::Digits;
  throw Error(ErrorCode::MalformedData, "unknown answer class '" + std::string(text) + "'");
}

const Catalog& load_catalog() {
  static const Catalog catalog = [] {
    using enum Category;
    const auto L = AnswerClass::Letters;
    const auto D = AnswerClass::Digits;
    Catalog c{
        {"mothers_maiden", Names, "Mother's maiden name", L},
        {"fathers_middle", Names, "Father's middle name", L},
        {"best_friend", Names, "Best friend's name", L},
        {"favourite_pet", Favourites, "Favourite pet", L},
        {"favourite_food", Favourites, "Favourite food", L},
        {"favourite_hobby", Favourites, "Favourite hobby", L},
        {"last6_visa", Numbers, "Last 6 digits of Visa number", D},
        {"last6_phone", Numbers, "Last 6 digits of phone number", D},
        {"vehicle_registration", Numbers, "Vehicle registration number", D},
        {"high_school_city", Places, "High school city name", L},
        {"college_city", Places, "College city name", L},
        {"first_work_city", Places, "First work city name", L},
        {"first_occupation", Characteristics, "First occupation", L},
        {"last_skill", Characteristics, "Last gained skill", L},
        {"main_weakness", Characteristics, "Main weakness", L},
    };
    check_catalog(c);
    return c;
  }();
  return catalog;
}

Catalog load_catalog(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MalformedData, "cannot open catalog " + path.string());
  Catalog catalog;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) fields.push_back(field);
    if (fields.size() != 4) {
      throw Error(ErrorCode::MalformedData,
                  path.string() + ":" + std::to_string(line_no) + ": expected 4 tab-separated fields");
    }
    catalog.push_back({fields[0], parse_category(fields[1]), fields[3], parse_answer_class(fields[2])});
  }
  check_catalog(catalog);
  return catalog;
}

void check_catalog(std::span<const SecurityQuestion> catalog) {
  if (catalog.size() != 15) {
    throw Error(ErrorCode::MalformedData, "catalog must hold 15 questions");
  }
  std::set<std::string> ids;
  std::array<int, 5> per_category{};
  for (const auto& q : catalog) {
    if (!ids.insert(q.id).second) {
      throw Error(ErrorCode::MalformedData, "duplicate question id " + q.id);
    }
    ++per_category[static_cast<std::size_t>(q.category)];
    const bool digits = q.answer_class == AnswerClass::Digits;
    if (digits != (q.category == Category::Numbers)) {
      throw Error(ErrorCode::MalformedData, "answer class of " + q.id + " does not match its category");
    }
  }
  if (std::any_of(per_category.begin(), per_category.end(), [](int n) { return n != 3; })) {
    throw Error(ErrorCode::MalformedData, "catalog must hold 3 questions per category");
  }
}

std::vector<SecurityQuestion> filter_by_category(std::span<const SecurityQuestion> catalog,
                                                 Category category) {
  std::vector<SecurityQuestion> out;
  std::copy_if(catalog.begin(), catalog.end(), std::back_inserter(out),
               [&](const SecurityQuestion& q) { return q.category == category; });
  return out;
}

const SecurityQuestion& find_question(std::span<const SecurityQuestion> catalog,
                                      std::string_view id) {
  auto it = std::find_if(catalog.begin(), catalog.end(),
                         [&](const SecurityQuestion& q) { return q.id == id; });
  if (it == catalog.end()) {
    throw Error(ErrorCode::UnknownQuestion, "unknown question '" + std::string(id) + "'");
  }
  return *it;
}

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

}  // namespace

std::string normalize_answer(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(ascii_lower(c));
  }
  if (out.empty()) throw Error(ErrorCode::Empty, "answer is empty");
  return out;
}

std::size_t symbol_count(std::string_view normalized) {
  return static_cast<std::size_t>(std::count_if(normalized.begin(), normalized.end(),
                                                [](char c) { return c != ' '; }));
}

std::string validate_bank_answer(AnswerClass answer_class, std::string_view text) {
  std::string answer = normalize_answer(text);
  for (char c : answer) {
    const bool ok = answer_class == AnswerClass::Digits ? (c >= '0' && c <= '9')
                                                        : ((c >= 'a' && c <= 'z') || c == ' ');
    if (!ok) {
      throw Error(ErrorCode::ClassMismatch,
                  std::string("answer contains symbols outside the ") +
                      std::string(to_string(answer_class)) + " class");
    }
  }
  if (symbol_count(answer) > kBankSize) {
    throw Error(ErrorCode::TooLongForBank, "answer has more than 12 symbols");
  }
  return answer;
}

std::string validate_configured_answer(const SecurityQuestion& question, std::string_view text) {
  return validate_bank_answer(question.answer_class, text);
}

QuestionSet select_question_set(std::span<const SecurityQuestion> catalog,
                                std::span<const std::pair<std::string, std::string>> choices,
                                SelectionOptions options) {
  if (choices.size() != kQuestionsPerSet) {
    throw Error(ErrorCode::WrongCount, "exactly 3 questions must be chosen");
  }
  QuestionSet set;
  std::set<std::string> seen_ids;
  std::set<Category> seen_categories;
  for (const auto& [id, raw] : choices) {
    const SecurityQuestion& q = find_question(catalog, id);
    if (!seen_ids.insert(q.id).second) {
      throw Error(ErrorCode::DuplicateQuestion, "question '" + q.id + "' chosen twice");
    }
    if (options.require_distinct_categories && !seen_categories.insert(q.category).second) {
      throw Error(ErrorCode::CategoryRepeated, "two questions share a category");
    }
    set.entries.push_back({q.id, validate_configured_answer(q, raw)});
  }
  return set;
}

}  // namespace sqgame
