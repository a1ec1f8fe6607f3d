#include "sqgame/profile.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "sqgame/error.hpp"
#include "sqgame/rng.hpp"

namespace sqgame {

std::string_view to_string(Gender g) noexcept { return g == Gender::Male ? "male" : "female"; }

Gender parse_gender(std::string_view text) {
  if (text == "male") return Gender::Male;
  if (text == "female") return Gender::Female;
  throw Error(ErrorCode::BadRequest, "gender must be 'male' or 'female'");
}

const std::vector<std::string>& AttributePools::pool_names() {
  static const std::vector<std::string> names{
      "male_first_names", "female_first_names", "surnames", "cities",  "occupations",
      "skills",           "weaknesses",         "pet_names", "foods", "hobbies"};
  return names;
}

AttributePools AttributePools::load(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::EmptyPool, "pool directory not found: " + dir.string());
  }
  std::map<std::string, std::vector<std::string>> raw;
  for (const auto& name : pool_names()) {
    const auto path = dir / (name + ".txt");
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::EmptyPool, "missing pool file " + path.string());
    auto& entries = raw[name];
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line.front() == '#') continue;
      entries.push_back(line);
    }
  }
  return from_map(std::move(raw));
}

AttributePools AttributePools::from_map(std::map<std::string, std::vector<std::string>> pools) {
  AttributePools out;
  for (const auto& name : pool_names()) {
    auto it = pools.find(name);
    if (it == pools.end()) throw Error(ErrorCode::EmptyPool, "pool '" + name + "' missing");
    std::vector<std::string> kept;
    std::set<std::string> seen;
    for (const auto& entry : it->second) {
      std::string normalized;
      try {
        normalized = validate_bank_answer(AnswerClass::Letters, entry);
      } catch (const Error& e) {
        throw Error(ErrorCode::InvalidPoolEntry,
                    "pool '" + name + "' entry '" + entry + "': " + e.what());
      }
      if (seen.insert(normalized).second) kept.push_back(entry);
    }
    if (kept.empty()) throw Error(ErrorCode::EmptyPool, "pool '" + name + "' is empty");
    out.pools_.emplace(name, std::move(kept));
  }
  return out;
}

const std::vector<std::string>& AttributePools::pool(std::string_view name) const {
  auto it = pools_.find(name);
  if (it == pools_.end()) throw Error(ErrorCode::EmptyPool, "unknown pool '" + std::string(name) + "'");
  return it->second;
}

namespace {

const std::string& pick(Rng& rng, const std::vector<std::string>& pool) {
  return pool[rng.below(pool.size())];
}

std::string digits(Rng& rng, int count) {
  std::string out;
  for (int i = 0; i < count; ++i) out.push_back(static_cast<char>('0' + rng.below(10)));
  return out;
}

char luhn_check_digit(std::string_view payload) {
  // Payload digits are doubled starting from the rightmost one, since the
  // check digit will occupy the final position.
  int sum = 0;
  bool dbl = true;
  for (auto it = payload.rbegin(); it != payload.rend(); ++it) {
    int d = *it - '0';
    if (dbl) {
      d *= 2;
      if (d > 9) d -= 9;
    }
    sum += d;
    dbl = !dbl;
  }
  return static_cast<char>('0' + (10 - sum % 10) % 10);
}

std::string street_address(Rng& rng, const AttributePools& pools) {
  static const std::array<const char*, 6> suffixes{"Street", "Avenue", "Drive", "Road", "Lane", "Court"};
  std::ostringstream out;
  out << rng.between(100, 9999) << ' ' << pick(rng, pools.pool("surnames")) << ' '
      << suffixes[rng.below(suffixes.size())];
  return out.str();
}

std::string only_digits(std::string_view s) {
  std::string out;
  std::copy_if(s.begin(), s.end(), std::back_inserter(out), [](char c) { return c >= '0' && c <= '9'; });
  return out;
}

std::string last_n(const std::string& s, std::size_t n) {
  return s.size() <= n ? s : s.substr(s.size() - n);
}

}  // namespace

Profile generate_profile(const AttributePools& pools, std::uint64_t seed, Gender gender) {
  Rng rng(seed * 2 + (gender == Gender::Female ? 1 : 0));
  Profile p;
  p.gender = gender;
  const auto& first_names =
      pools.pool(gender == Gender::Male ? "male_first_names" : "female_first_names");
  p.full_name = pick(rng, first_names) + " " + pick(rng, pools.pool("surnames"));

  using namespace std::chrono;
  const auto lo = sys_days{year{1950} / January / 1};
  const auto hi = sys_days{year{2000} / December / 31};
  p.birthday = year_month_day{lo + days{static_cast<int>(rng.below(static_cast<std::size_t>((hi - lo).count()) + 1))}};

  p.mothers_maiden = pick(rng, pools.pool("surnames"));
  p.fathers_middle = pick(rng, pools.pool("male_first_names"));
  p.best_friend = pick(rng, pools.pool(rng.below(2) == 0 ? "male_first_names" : "female_first_names"));

  p.phone = std::to_string(rng.between(200, 999)) + "-" + digits(rng, 3) + "-" + digits(rng, 4);
  p.vehicle_registration = digits(rng, 2) + " " + digits(rng, 4);
  const std::string payload = "4" + digits(rng, 14);
  p.visa_number = payload + luhn_check_digit(payload);

  p.high_school_city = pick(rng, pools.pool("cities"));
  p.college_city = pick(rng, pools.pool("cities"));
  p.first_work_city = pick(rng, pools.pool("cities"));
  p.first_occupation = pick(rng, pools.pool("occupations"));
  p.last_skill = pick(rng, pools.pool("skills"));
  p.main_weakness = pick(rng, pools.pool("weaknesses"));
  p.favourite_pet = pick(rng, pools.pool("pet_names"));
  p.favourite_food = pick(rng, pools.pool("foods"));
  p.favourite_hobby = pick(rng, pools.pool("hobbies"));
  p.high_school_address = street_address(rng, pools);
  p.first_work_address = street_address(rng, pools);
  return p;
}

std::array<Profile, 2> offered_profiles(const AttributePools& pools, std::uint64_t seed) {
  return {generate_profile(pools, seed, Gender::Male), generate_profile(pools, seed, Gender::Female)};
}

std::string derive_answer(const Profile& p, std::string_view id) {
  const auto& q = find_question(load_catalog(), id);
  const std::string* field = nullptr;
  if (q.id == "last6_visa") return last_n(only_digits(p.visa_number), 6);
  if (q.id == "last6_phone") return last_n(only_digits(p.phone), 6);
  if (q.id == "vehicle_registration") return only_digits(p.vehicle_registration);
  if (q.id == "mothers_maiden") field = &p.mothers_maiden;
  else if (q.id == "fathers_middle") field = &p.fathers_middle;
  else if (q.id == "best_friend") field = &p.best_friend;
  else if (q.id == "favourite_pet") field = &p.favourite_pet;
  else if (q.id == "favourite_food") field = &p.favourite_food;
  else if (q.id == "favourite_hobby") field = &p.favourite_hobby;
  else if (q.id == "high_school_city") field = &p.high_school_city;
  else if (q.id == "college_city") field = &p.college_city;
  else if (q.id == "first_work_city") field = &p.first_work_city;
  else if (q.id == "first_occupation") field = &p.first_occupation;
  else if (q.id == "last_skill") field = &p.last_skill;
  else if (q.id == "main_weakness") field = &p.main_weakness;
  if (field == nullptr) throw Error(ErrorCode::UnknownQuestion, "no profile field for " + q.id);
  return normalize_answer(*field);
}

bool luhn_valid(std::string_view digits) {
  int sum = 0;
  bool dbl = false;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
    if (*it < '0' || *it > '9') throw Error(ErrorCode::NonDigit, "non-digit in card number");
    int d = *it - '0';
    if (dbl) {
      d *= 2;
      if (d > 9) d -= 9;
    }
    sum += d;
    dbl = !dbl;
  }
  return sum % 10 == 0;
}

double answer_strength_bits(std::string_view id, const AttributePools& pools) {
  const auto& q = find_question(load_catalog(), id);
  if (q.answer_class == AnswerClass::Digits) return std::log2(1e6);

  auto distinct = [](std::initializer_list<const std::vector<std::string>*> sources) {
    std::set<std::string> answers;
    for (const auto* src : sources) {
      for (const auto& s : *src) answers.insert(normalize_answer(s));
    }
    return static_cast<double>(answers.size());
  };
  std::string_view pool;
  if (q.id == "mothers_maiden") pool = "surnames";
  else if (q.id == "fathers_middle") pool = "male_first_names";
  else if (q.id == "best_friend")
    return std::log2(distinct({&pools.pool("male_first_names"), &pools.pool("female_first_names")}));
  else if (q.id == "favourite_pet") pool = "pet_names";
  else if (q.id == "favourite_food") pool = "foods";
  else if (q.id == "favourite_hobby") pool = "hobbies";
  else if (q.category == Category::Places) pool = "cities";
  else if (q.id == "first_occupation") pool = "occupations";
  else if (q.id == "last_skill") pool = "skills";
  else if (q.id == "main_weakness") pool = "weaknesses";
  return std::log2(distinct({&pools.pool(pool)}));
}

std::string format_date(const std::chrono::year_month_day& d) {
  static const std::array<const char*, 12> months{"January", "February", "March",     "April",
                                                  "May",     "June",     "July",      "August",
                                                  "September", "October", "November", "December"};
  std::ostringstream out;
  out << months[static_cast<unsigned>(d.month()) - 1] << ' ' << static_cast<unsigned>(d.day()) << ", "
      << static_cast<int>(d.year());
  return out.str();
}

std::string format_profile(const Profile& p) {
  auto visa_groups = [](const std::string& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i > 0 && i % 4 == 0) out.push_back(' ');
      out.push_back(v[i]);
    }
    return out;
  };
  std::ostringstream out;
  out << p.full_name << " (" << (p.gender == Gender::Male ? "Male" : "Female") << ")\n"
      << "  Birthday                  " << format_date(p.birthday) << "\n"
      << "\nBASIC INFO\n"
      << "  Mother's maiden name      " << p.mothers_maiden << "\n"
      << "  Father's middle name      " << p.fathers_middle << "\n"
      << "  Best friend               " << p.best_friend << "\n"
      << "  Phone                     " << p.phone << "\n"
      << "  Vehicle registration      " << p.vehicle_registration << "\n"
      << "\nFINANCE\n"
      << "  Visa                      " << visa_groups(p.visa_number) << "\n"
      << "\nPLACES\n"
      << "  High school               " << p.high_school_address << ", " << p.high_school_city << "\n"
      << "  College city              " << p.college_city << "\n"
      << "  First occupation          " << p.first_occupation << "\n"
      << "  First work address        " << p.first_work_address << ", " << p.first_work_city << "\n"
      << "\nCHARACTERISTICS\n"
      << "  Last gained skill         " << p.last_skill << "\n"
      << "  Main weakness             " << p.main_weakness << "\n"
      << "\nFAVOURITES\n"
      << "  Pet                       " << p.favourite_pet << "\n"
      << "  Food                      " << p.favourite_food << "\n"
      << "  Hobby                     " << p.favourite_hobby << "\n";
  return out.str();
}

}  // namespace sqgame
