#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "sqgame/catalog.hpp"
#include "sqgame/game.hpp"

namespace sqgame {

/// Reads the shared pool of standard challenges (a JSON array of
/// {id, answer, pictures[4], cues[4]}).
std::vector<StandardSpec> load_standard_pool(const std::filesystem::path& path);

/// Placeholder recognition and recall pictures for a question set: one
/// correct and three distractor tiles per question, labelled so that
/// neither the label nor the reference identifies the correct tile or
/// mentions any configured answer.
std::vector<QuestionAssets> placeholder_assets(const QuestionSet& set, std::uint64_t seed);

/// A complete, validated game configuration for a player's question set.
GameConfig make_game_config(std::vector<StandardSpec> standard_pool, QuestionSet set, std::uint64_t seed);

GameConfig load_game_config(const std::filesystem::path& path);
void save_game_config(const std::filesystem::path& path, const GameConfig& config);

}  // namespace sqgame
