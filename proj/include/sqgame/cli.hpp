#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "sqgame/game.hpp"
#include "sqgame/profile.hpp"

namespace sqgame {

/// Game configuration used when no --config is given: three questions
/// answered from the male profile generated with `seed`.
GameConfig demo_config(const AttributePools& pools, const std::vector<StandardSpec>& standard_pool,
                       std::uint64_t seed);

/// Entry point of the `sqgame` tool. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace sqgame
