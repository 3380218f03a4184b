// Copyright 2026 The idldp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "idldp/serialization.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string_view>

#include "idldp/error.h"

namespace idldp {

namespace {

constexpr char kProfileHeader[] = "# idldp profile v1";
constexpr char kReportsHeader[] = "# idldp-reports v1";

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool ParseDouble(std::string_view text, double& out) {
  text = Trim(text);
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end && !text.empty();
}

template <typename T>
bool ParseUnsigned(std::string_view text, T& out, int base = 10) {
  text = Trim(text);
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out, base);
  return ec == std::errc() && ptr == end && !text.empty();
}

struct KeyValues {
  std::map<std::string, std::pair<std::string, std::size_t>> entries;

  const std::string* Find(const std::string& key) const {
    const auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second.first;
  }
  std::size_t Line(const std::string& key) const {
    const auto it = entries.find(key);
    return it == entries.end() ? 0 : it->second.second;
  }
  const std::string& Require(const std::string& key) const {
    const std::string* v = Find(key);
    if (v == nullptr) throw ParseError("missing key '" + key + "'", 0);
    return *v;
  }
  double Double(const std::string& key) const {
    double v = 0.0;
    if (!ParseDouble(Require(key), v)) {
      throw ParseError("key '" + key + "' is not a number", Line(key));
    }
    return v;
  }
  std::size_t Size(const std::string& key) const {
    std::size_t v = 0;
    if (!ParseUnsigned(Require(key), v)) {
      throw ParseError("key '" + key + "' is not a non-negative integer", Line(key));
    }
    return v;
  }
};

KeyValues ParseKeyValues(const std::string& text) {
  KeyValues kv;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view body = Trim(raw);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key=value", line);
    const std::string key(Trim(body.substr(0, eq)));
    if (key.empty()) throw ParseError("empty key", line);
    kv.entries[key] = {std::string(Trim(body.substr(eq + 1))), line};
  }
  return kv;
}

}  // namespace

double parse_budget(const std::string& text) {
  const std::string_view body = Trim(text);
  double value = 0.0;
  if (body.size() > 4 && body.substr(0, 3) == "ln(" && body.back() == ')') {
    if (!ParseDouble(body.substr(3, body.size() - 4), value) || !(value > 0.0)) {
      throw std::invalid_argument("invalid budget literal '" + text + "'");
    }
    value = std::log(value);
  } else if (!ParseDouble(body, value)) {
    throw std::invalid_argument("invalid budget '" + text + "'");
  }
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument("budget '" + text + "' must be positive and finite");
  }
  return value;
}

std::vector<double> parse_budget_list(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string piece =
        text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    out.push_back(parse_budget(piece));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string serialize_profile(const PerturbationProfile& profile, const PrivacyModel& model,
                              const std::optional<SolverMetadata>& solver) {
  if (profile.num_levels() != model.num_levels()) {
    throw std::invalid_argument("profile and model level counts differ");
  }
  std::ostringstream out;
  out << kProfileHeader << '\n';
  out << "r_kind=" << to_string(model.r_kind()) << '\n';
  out << "levels=" << model.num_levels() << '\n';
  out << "universe=" << model.universe_size() << '\n';
  for (std::size_t i = 0; i < model.num_levels(); ++i) {
    const std::string prefix = "level." + std::to_string(i + 1) + ".";
    out << prefix << "budget=" << Num(model.budget(i)) << '\n';
    out << prefix << "size=" << model.level_sizes()[i] << '\n';
    out << prefix << "a=" << Num(profile.level(i).a) << '\n';
    out << prefix << "b=" << Num(profile.level(i).b) << '\n';
  }
  out << "dummy.a=" << Num(profile.dummy().a) << '\n';
  out << "dummy.b=" << Num(profile.dummy().b) << '\n';
  out << "dummy.budget=" << Num(model.min_budget()) << '\n';
  out << "item_levels=";
  for (std::size_t k = 0; k < model.universe_size(); ++k) {
    out << (k > 0 ? "," : "") << model.item_levels()[k] + 1;
  }
  out << '\n';
  if (solver) {
    out << "solver.model=" << solver->model << '\n';
    out << "solver.objective=" << Num(solver->objective) << '\n';
    out << "solver.seed=" << solver->seed << '\n';
  }
  return out.str();
}

ProfileDocument parse_profile(const std::string& text) {
  const KeyValues kv = ParseKeyValues(text);
  const std::size_t t = kv.Size("levels");
  const std::size_t m = kv.Size("universe");
  if (t == 0) throw ParseError("a profile needs at least one level", kv.Line("levels"));

  RKind r_kind = RKind::kMin;
  if (const std::string* r = kv.Find("r_kind")) {
    try {
      r_kind = parse_r_kind(*r);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), kv.Line("r_kind"));
    }
  }

  std::vector<double> budgets;
  std::vector<std::size_t> sizes;
  std::vector<BitProbs> levels;
  for (std::size_t i = 1; i <= t; ++i) {
    const std::string prefix = "level." + std::to_string(i) + ".";
    budgets.push_back(kv.Double(prefix + "budget"));
    levels.push_back({kv.Double(prefix + "a"), kv.Double(prefix + "b")});
    sizes.push_back(kv.Find(prefix + "size") ? kv.Size(prefix + "size") : 0);
  }

  std::vector<std::size_t> item_levels;
  if (const std::string* list = kv.Find("item_levels")) {
    std::string_view rest = *list;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      std::size_t level = 0;
      if (!ParseUnsigned(rest.substr(0, comma), level) || level < 1 || level > t) {
        throw ParseError("invalid entry in item_levels", kv.Line("item_levels"));
      }
      item_levels.push_back(level - 1);
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
  } else {
    for (std::size_t i = 0; i < t; ++i) item_levels.insert(item_levels.end(), sizes[i], i);
  }
  if (item_levels.size() != m) {
    throw ParseError("item levels cover " + std::to_string(item_levels.size()) +
                         " items but universe=" + std::to_string(m),
                     kv.Line("universe"));
  }

  try {
    PrivacyModel model(budgets, item_levels, r_kind);
    for (std::size_t i = 0; i < t; ++i) {
      if (kv.Find("level." + std::to_string(i + 1) + ".size") &&
          sizes[i] != model.level_sizes()[i]) {
        throw ParseError("level." + std::to_string(i + 1) + ".size disagrees with item_levels",
                         kv.Line("level." + std::to_string(i + 1) + ".size"));
      }
    }
    const BitProbs dummy = kv.Find("dummy.a")
                               ? BitProbs{kv.Double("dummy.a"), kv.Double("dummy.b")}
                               : levels[model.min_budget_level()];
    ProfileDocument doc{model, PerturbationProfile(levels, dummy), std::nullopt};
    if (kv.Find("solver.model")) {
      SolverMetadata meta;
      meta.model = kv.Require("solver.model");
      meta.objective = kv.Find("solver.objective") ? kv.Double("solver.objective") : 0.0;
      if (kv.Find("solver.seed") && !ParseUnsigned(kv.Require("solver.seed"), meta.seed)) {
        throw ParseError("solver.seed is not an integer", kv.Line("solver.seed"));
      }
      doc.solver = meta;
    }
    return doc;
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), 0);
  }
}

std::uint64_t profile_hash(const PerturbationProfile& profile) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  };
  for (const BitProbs& p : profile.levels()) feed(Num(p.a) + "," + Num(p.b) + ";");
  feed("dummy:" + Num(profile.dummy().a) + "," + Num(profile.dummy().b));
  return h;
}

void write_reports(std::ostream& out, const ReportFile& file) {
  char hash[17];
  std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(file.profile_hash));
  out << kReportsHeader << '\n';
  out << "m=" << file.m << " l=" << file.ell << " profile=" << hash << '\n';
  for (const BitVector& r : file.reports) {
    if (r.size() != file.m + file.ell) throw std::invalid_argument("report length mismatch");
    out << r.to_hex() << '\n';
  }
}

ReportFile read_reports(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || Trim(line) != kReportsHeader) {
    throw ParseError("missing '# idldp-reports v1' header", 1);
  }
  if (!std::getline(in, line)) throw ParseError("missing report parameters", 2);
  ReportFile file;
  std::istringstream params(line);
  std::string token;
  bool have_m = false;
  bool have_l = false;
  while (params >> token) {
    const auto eq = token.find('=');
    const std::string key = token.substr(0, eq);
    const std::string_view value =
        eq == std::string::npos ? std::string_view{} : std::string_view(token).substr(eq + 1);
    bool ok = true;
    if (key == "m") {
      ok = ParseUnsigned(value, file.m);
      have_m = true;
    } else if (key == "l") {
      ok = ParseUnsigned(value, file.ell);
      have_l = true;
    } else if (key == "profile") {
      ok = ParseUnsigned(value, file.profile_hash, 16);
    }
    if (!ok) throw ParseError("invalid value for '" + key + "'", 2);
  }
  if (!have_m || !have_l || file.m == 0) throw ParseError("report parameters need m and l", 2);
  std::size_t number = 2;
  while (std::getline(in, line)) {
    ++number;
    const std::string_view body = Trim(line);
    if (body.empty()) continue;
    try {
      file.reports.push_back(BitVector::FromHex(std::string(body), file.m + file.ell));
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), number);
    }
  }
  return file;
}

void write_estimates(std::ostream& out, const FrequencyEstimate& estimate,
                     std::span<const double> variances, const PrivacyModel& model,
                     std::span<const std::uint64_t> original_ids) {
  const std::size_t m = model.universe_size();
  if (estimate.estimates.size() != m || (!variances.empty() && variances.size() != m) ||
      (!original_ids.empty() && original_ids.size() != m)) {
    throw std::invalid_argument("estimate table columns differ in length");
  }
  out << "item,estimate,variance,level\n";
  for (std::size_t i = 0; i < m; ++i) {
    out << (original_ids.empty() ? static_cast<std::uint64_t>(i + 1) : original_ids[i]) << ','
        << Num(estimate.estimates[i]) << ',' << (variances.empty() ? "nan" : Num(variances[i]))
        << ',' << model.item_levels()[i] + 1 << '\n';
  }
}

}  // namespace idldp
