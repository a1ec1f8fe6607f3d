#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sqgame/catalog.hpp"
#include "sqgame/rng.hpp"

namespace sqgame {

/// The 12 symbols a text answer is composed from. `reserved` marks the
/// positions holding the answer's own symbols; it never leaves the engine.
struct LetterBank {
  std::vector<char> symbols;
  std::vector<bool> removed;
  std::vector<bool> reserved;

  std::size_t fillers_left() const;

  /// Symbols still offered to the player, in bank order.
  std::vector<char> available() const;

  friend bool operator==(const LetterBank&, const LetterBank&) = default;
};

/// Answer symbols (spaces dropped) plus uniform fillers from the answer's
/// alphabet, shuffled. Throws TooLongForBank.
LetterBank build_letter_bank(std::string_view answer, AnswerClass answer_class, Rng& rng);

/// Marks one random unremoved filler as removed and returns its position,
/// or nullopt when only answer symbols remain.
std::optional<std::size_t> remove_random_filler(LetterBank& bank, Rng& rng);

/// True when the non-removed symbols multiset-contain the answer's symbols.
bool bank_composes(const LetterBank& bank, std::string_view answer);

}  // namespace sqgame
