#include "sqgame/letter_bank.hpp"

#include <algorithm>
#include <array>
#include <numeric>

#include "sqgame/error.hpp"

namespace sqgame {

std::size_t LetterBank::fillers_left() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (!reserved[i] && !removed[i]) ++n;
  }
  return n;
}

std::vector<char> LetterBank::available() const {
  std::vector<char> out;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (!removed[i]) out.push_back(symbols[i]);
  }
  return out;
}

LetterBank build_letter_bank(std::string_view answer, AnswerClass answer_class, Rng& rng) {
  std::vector<std::pair<char, bool>> slots;
  for (char c : answer) {
    if (c != ' ') slots.emplace_back(c, true);
  }
  if (slots.size() > kBankSize) throw Error(ErrorCode::TooLongForBank, "answer has more than 12 symbols");
  const std::string_view alphabet = answer_class == AnswerClass::Digits
                                        ? std::string_view("0123456789")
                                        : std::string_view("abcdefghijklmnopqrstuvwxyz");
  while (slots.size() < kBankSize) slots.emplace_back(alphabet[rng.below(alphabet.size())], false);
  rng.shuffle(slots);

  LetterBank bank;
  for (const auto& [symbol, is_answer] : slots) {
    bank.symbols.push_back(symbol);
    bank.reserved.push_back(is_answer);
    bank.removed.push_back(false);
  }
  return bank;
}

std::optional<std::size_t> remove_random_filler(LetterBank& bank, Rng& rng) {
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < bank.symbols.size(); ++i) {
    if (!bank.reserved[i] && !bank.removed[i]) candidates.push_back(i);
  }
  if (candidates.empty()) return std::nullopt;
  const std::size_t pos = candidates[rng.below(candidates.size())];
  bank.removed[pos] = true;
  return pos;
}

bool bank_composes(const LetterBank& bank, std::string_view answer) {
  std::array<int, 256> counts{};
  for (char c : bank.available()) ++counts[static_cast<unsigned char>(c)];
  for (char c : answer) {
    if (c == ' ') continue;
    if (--counts[static_cast<unsigned char>(c)] < 0) return false;
  }
  return true;
}

}  // namespace sqgame
