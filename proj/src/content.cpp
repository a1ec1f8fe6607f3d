#include "sqgame/content.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include "sqgame/error.hpp"
#include "sqgame/rng.hpp"

namespace sqgame {

using nlohmann::json;

std::vector<StandardSpec> load_standard_pool(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidConfig, "cannot open standard pool " + path.string());
  std::vector<StandardSpec> pool;
  try {
    for (const auto& s : json::parse(in)) {
      pool.push_back({s.at("id").get<std::string>(), normalize_answer(s.at("answer").get<std::string>()),
                      s.at("pictures").get<std::array<std::string, 4>>(),
                      s.at("cues").get<std::array<std::string, 4>>()});
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, "malformed standard pool: " + std::string(e.what()));
  }
  return pool;
}

namespace {

bool leaks(std::string_view text, const QuestionSet& set) {
  return std::any_of(set.entries.begin(), set.entries.end(),
                     [&](const QuestionAnswer& e) { return mentions_secret(text, e.answer); });
}

// The last candidate holds no letters or digits, so it can never contain an
// answer.
std::string first_clean(std::initializer_list<std::string> candidates, const QuestionSet& set) {
  for (const auto& c : candidates) {
    if (!leaks(c, set)) return c;
  }
  throw Error(ErrorCode::InvalidConfig, "no neutral placeholder text available");
}

std::string stars(std::size_t n) {
  std::string out;
  for (std::size_t i = 0; i < n; ++i) out += "*";
  return out;
}

std::string tile_ref(std::size_t q, std::size_t k, const QuestionSet& set) {
  const std::string qs = std::to_string(q + 1);
  const std::string ks = std::to_string(k + 1);
  const std::string ql(1, static_cast<char>('a' + q));
  const std::string kl(1, static_cast<char>('a' + k));
  return first_clean({"tile/" + qs + "-" + ks + ".svg", "tile/" + ql + "-" + kl + ".svg",
                      "#" + qs + "." + ks, "~" + stars(q + 1) + "/" + stars(k + 1)},
                     set);
}

std::string tile_label(std::size_t k, const QuestionSet& set) {
  const std::string ks = std::to_string(k + 1);
  return first_clean({"Picture " + ks, "Tile " + ks, "#" + ks, stars(k + 1)}, set);
}

}  // namespace

std::vector<QuestionAssets> placeholder_assets(const QuestionSet& set, std::uint64_t seed) {
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const auto& catalog = load_catalog();
  std::vector<QuestionAssets> out;
  for (std::size_t q = 0; q < set.entries.size(); ++q) {
    const auto& entry = set.entries[q];
    // Tile numbers are permuted so the correct tile has no fixed label.
    std::vector<std::size_t> numbers(kRecognitionOptions);
    std::iota(numbers.begin(), numbers.end(), 0);
    rng.shuffle(numbers);
    auto option = [&](std::size_t k) {
      return PictureOption{tile_ref(q, numbers[k], set), tile_label(numbers[k], set), ""};
    };
    QuestionAssets a;
    a.question_id = entry.question_id;
    a.correct = option(0);
    for (std::size_t k = 1; k < kRecognitionOptions; ++k) a.distractors.push_back(option(k));
    const std::string prompt = find_question(catalog, entry.question_id).prompt;
    for (std::size_t k = 0; k < kPicturesPerChallenge; ++k) {
      a.recall_pictures[k] = tile_ref(q, kRecognitionOptions + k, set);
      a.recall_cues[k] = first_clean({"Think of: " + prompt, ""}, set);
    }
    out.push_back(std::move(a));
  }
  return out;
}

GameConfig make_game_config(std::vector<StandardSpec> standard_pool, QuestionSet set, std::uint64_t seed) {
  GameConfig c;
  c.standard_pool = std::move(standard_pool);
  c.question_assets = placeholder_assets(set, seed);
  c.question_set = std::move(set);
  c.rng_seed = seed;
  validate_config(c);
  return c;
}

GameConfig load_game_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidConfig, "cannot open game config " + path.string());
  GameConfig c;
  try {
    c = json::parse(in).get<GameConfig>();
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("game config is not JSON: ") + e.what());
  }
  validate_config(c);
  return c;
}

void save_game_config(const std::filesystem::path& path, const GameConfig& config) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidConfig, "cannot write " + path.string());
  out << json(config).dump(2) << '\n';
}

}  // namespace sqgame
