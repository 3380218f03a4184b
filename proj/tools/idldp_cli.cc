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

// idldp command-line tool. Links only the C interface.
//
// Exit codes: 0 ok, 1 usage or input error, 2 audit failure, 3 solver
// failure.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "idldp/idldp.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitAudit = 2;
constexpr int kExitSolver = 3;

struct Globals {
  std::uint64_t seed = 0;
  std::string out = "-";
  std::size_t threads = 1;
};

// Thrown to unwind with a given exit code after printing a message.
struct Exit {
  int code;
};

[[noreturn]] void Die(int code, const std::string& message) {
  std::cerr << "idldp: " << message << '\n';
  throw Exit{code};
}

void Check(idldp_status status, const char* what) {
  if (status == IDLDP_OK) return;
  const int code = status == IDLDP_SOLVER_ERROR ? kExitSolver : kExitUsage;
  Die(code, std::string(what) + ": " + idldp_status_string(status) + ": " + idldp_last_error());
}

struct StringDeleter {
  void operator()(char* p) const { idldp_string_free(p); }
};
using CString = std::unique_ptr<char, StringDeleter>;

struct ModelDeleter {
  void operator()(idldp_model* p) const { idldp_model_free(p); }
};
struct ProfileDeleter {
  void operator()(idldp_profile* p) const { idldp_profile_free(p); }
};
struct DatasetDeleter {
  void operator()(idldp_dataset* p) const { idldp_dataset_free(p); }
};
using Model = std::unique_ptr<idldp_model, ModelDeleter>;
using Profile = std::unique_ptr<idldp_profile, ProfileDeleter>;
using Data = std::unique_ptr<idldp_dataset, DatasetDeleter>;

void WriteOutput(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) Die(kExitUsage, "cannot write " + path);
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Die(kExitUsage, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) out.push_back(token);
  return out;
}

std::vector<double> ParseBudgets(const std::string& text) {
  std::vector<double> out;
  for (const std::string& token : SplitList(text)) {
    double v = 0.0;
    Check(idldp_parse_budget(token.c_str(), &v), "budget");
    out.push_back(v);
  }
  if (out.empty()) Die(kExitUsage, "no budgets given");
  return out;
}

std::vector<std::size_t> ParseSizes(const std::string& text) {
  std::vector<std::size_t> out;
  for (const std::string& token : SplitList(text)) {
    try {
      std::size_t pos = 0;
      const unsigned long long v = std::stoull(token, &pos);
      if (pos != token.size()) throw std::invalid_argument(token);
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      Die(kExitUsage, "bad level size '" + token + "'");
    }
  }
  return out;
}

idldp_r_kind ParseRKind(const std::string& text) {
  if (text == "min") return IDLDP_R_MIN;
  if (text == "avg") return IDLDP_R_AVG;
  Die(kExitUsage, "r-kind must be min or avg");
}

idldp_opt_model ParseModel(const std::string& text) {
  if (text == "opt0") return IDLDP_OPT0;
  if (text == "opt1") return IDLDP_OPT1;
  if (text == "opt2") return IDLDP_OPT2;
  Die(kExitUsage, "model must be opt0, opt1 or opt2");
}

Model BuildModel(const std::string& budgets, const std::string& sizes, const std::string& r_kind) {
  const std::vector<double> b = ParseBudgets(budgets);
  const std::vector<std::size_t> s = ParseSizes(sizes);
  if (b.size() != s.size()) Die(kExitUsage, "--budgets and --sizes must have the same length");
  idldp_model* raw = nullptr;
  Check(idldp_model_from_sizes(b.data(), s.data(), b.size(), ParseRKind(r_kind), &raw), "model");
  return Model(raw);
}

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// ---- optimize ------------------------------------------------------------

struct OptimizeArgs {
  std::string budgets;
  std::string sizes;
  std::string r_kind = "min";
  std::string model = "opt0";
  std::size_t restarts = 8;
  std::size_t max_iters = 5000;
};

int RunOptimize(const Globals& g, const OptimizeArgs& args) {
  Model model = BuildModel(args.budgets, args.sizes, args.r_kind);
  idldp_solver_options options;
  idldp_solver_options_default(&options);
  options.restarts = args.restarts;
  options.max_iters = args.max_iters;
  options.seed = g.seed;
  options.threads = g.threads;
  idldp_profile* raw = nullptr;
  Check(idldp_solve(model.get(), ParseModel(args.model), &options, &raw), "optimize");
  Profile profile(raw);

  char* text = nullptr;
  Check(idldp_profile_serialize(profile.get(), &text), "serialize");
  const CString doc(text);
  idldp_check_result check;
  Check(idldp_check(profile.get(), 1e-9, &check), "audit");
  double worst = 0.0, vsum = 0.0;
  Check(idldp_profile_objectives(profile.get(), &worst, &vsum), "objective");

  std::ostringstream out;
  out << doc.get();
  out << "objective.worst_case=" << FormatDouble(worst) << '\n';
  out << "objective.variance_sum=" << FormatDouble(vsum) << '\n';
  out << "audit.passed=" << (check.passed ? "true" : "false") << '\n';
  out << "audit.max_ratio=" << FormatDouble(check.max_ratio) << '\n';
  out << "audit.bound=" << FormatDouble(check.bound) << '\n';
  out << "audit.worst_pair=" << check.worst_x << ';' << check.worst_x_prime << '\n';
  WriteOutput(g.out, out.str());
  if (!check.passed) {
    std::cerr << "idldp: audit failed at pair " << check.worst_x << " vs " << check.worst_x_prime
              << '\n';
    return kExitAudit;
  }
  return kExitOk;
}

// ---- simulate ------------------------------------------------------------

struct DataArgs {
  std::string data;
  std::string format = "space";
  std::string generator = "powerlaw";
  std::size_t n = 100000;
  std::size_t m = 100;
  double alpha = 2.0;
};

Data LoadOrGenerate(const Globals& g, const DataArgs& args, std::ostringstream& echo) {
  idldp_dataset* raw = nullptr;
  if (!args.data.empty()) {
    idldp_format fmt;
    if (args.format == "space" || args.format == "SPACE_SEP_IDS") {
      fmt = IDLDP_SPACE_SEP_IDS;
    } else if (args.format == "csv" || args.format == "CSV_USER_ITEM") {
      fmt = IDLDP_CSV_USER_ITEM;
    } else {
      Die(kExitUsage, "format must be space or csv");
    }
    char* warnings = nullptr;
    Check(idldp_dataset_load(args.data.c_str(), fmt, &raw, &warnings), "load");
    const CString w(warnings);
    echo << "data=" << args.data << "\nformat=" << args.format << "\nload=" << w.get() << '\n';
  } else {
    idldp_generator kind;
    if (args.generator == "powerlaw") {
      kind = IDLDP_POWERLAW;
    } else if (args.generator == "uniform") {
      kind = IDLDP_UNIFORM;
    } else {
      Die(kExitUsage, "generator must be powerlaw or uniform");
    }
    Check(idldp_dataset_generate(kind, args.n, args.m, args.alpha, g.seed, &raw), "generate");
    echo << "generator=" << args.generator << "\nn=" << args.n << "\nm=" << args.m << '\n';
    if (kind == IDLDP_POWERLAW) {
      echo << "alpha=" << args.alpha
           << "\npowerlaw_map=x=u^(-1/(alpha-1)), u~U[(m+0.5)^-(alpha-1),1], round half-up\n";
    }
  }
  return Data(raw);
}

struct SimulateArgs {
  DataArgs data;
  std::string mechanisms = "RAPPOR,OUE,IDUE";
  std::string model = "opt0";
  std::string r_kind = "min";
  std::string epsilons = "1,2,3,4";
  std::string multipliers = "1,1.2,2";
  std::string fractions = "0.05,0.05,0.9";
  std::size_t repeats = 10;
  std::string ks = "10";
  std::size_t ell = 0;
  std::string profile;
  std::string report_path = "aggregate";
  bool identity = false;
  std::size_t restarts = 8;
};

int RunSimulate(const Globals& g, const SimulateArgs& args) {
  std::ostringstream config;
  Data data = LoadOrGenerate(g, args.data, config);
  config << "mechanisms=" << args.mechanisms << "\nmodel=" << args.model
         << "\nr_kind=" << args.r_kind << "\nepsilons=" << args.epsilons
         << "\nlevel_multipliers=" << args.multipliers << "\nlevel_fractions=" << args.fractions
         << "\nrepeats=" << args.repeats << "\nk=" << args.ks << "\nell=" << args.ell
         << "\nseed=" << g.seed << "\nthreads=" << g.threads
         << "\nreport_path=" << args.report_path << "\nidentity=" << (args.identity ? 1 : 0)
         << "\nsolver.restarts=" << args.restarts << "\nsolver.seed=" << g.seed << '\n';
  Profile profile;
  if (!args.profile.empty()) {
    const std::string text = ReadFile(args.profile);
    idldp_profile* raw = nullptr;
    Check(idldp_profile_parse(text.c_str(), &raw), "profile");
    profile.reset(raw);
    config << "profile=" << args.profile << '\n';
  }
  char* csv = nullptr;
  Check(idldp_simulate(data.get(), config.str().c_str(), profile.get(), &csv), "simulate");
  const CString out(csv);
  WriteOutput(g.out, out.get());
  return kExitOk;
}

// ---- audit ---------------------------------------------------------------

struct AuditArgs {
  std::string profile;
  std::string budgets;
  std::string sizes;
  std::string r_kind = "min";
  std::string model = "opt0";
  std::size_t bruteforce_m = 3;
  std::size_t itemset_m = 3;
  std::size_t max_ell = 2;
  std::uint64_t cap = std::uint64_t{1} << 22;
};

int RunAudit(const Globals& g, const AuditArgs& args) {
  Profile profile;
  idldp_profile* raw = nullptr;
  if (!args.profile.empty()) {
    Check(idldp_profile_parse(ReadFile(args.profile).c_str(), &raw), "profile");
  } else if (!args.budgets.empty()) {
    Model model = BuildModel(args.budgets, args.sizes, args.r_kind);
    idldp_solver_options options;
    idldp_solver_options_default(&options);
    options.seed = g.seed;
    options.threads = g.threads;
    Check(idldp_solve(model.get(), ParseModel(args.model), &options, &raw), "optimize");
  } else {
    Die(kExitUsage, "audit needs --profile or --budgets/--sizes");
  }
  profile.reset(raw);

  idldp_audit_options options;
  idldp_audit_options_default(&options);
  options.bruteforce_m = args.bruteforce_m;
  options.itemset_m = args.itemset_m;
  options.max_ell = args.max_ell;
  options.enumeration_cap = args.cap;
  char* json = nullptr;
  int passed = 0;
  Check(idldp_audit(profile.get(), &options, &json, &passed), "audit");
  const CString doc(json);
  WriteOutput(g.out, std::string(doc.get()) + "\n");
  if (!passed) {
    idldp_check_result check;
    Check(idldp_check(profile.get(), options.tol, &check), "audit");
    std::cerr << "idldp: audit failed";
    if (!check.passed) {
      std::cerr << "; violating pair " << check.worst_x << " vs " << check.worst_x_prime
                << " (ratio " << FormatDouble(check.max_ratio) << " > bound "
                << FormatDouble(check.bound) << ")";
    }
    std::cerr << '\n';
    return kExitAudit;
  }
  return kExitOk;
}

// ---- gendata -------------------------------------------------------------

int RunGendata(const Globals& g, const DataArgs& args) {
  if (g.out.empty() || g.out == "-") Die(kExitUsage, "gendata needs --out <file>");
  std::ostringstream meta;
  DataArgs gen = args;
  gen.data.clear();
  Data data = LoadOrGenerate(g, gen, meta);
  Check(idldp_dataset_save(data.get(), g.out.c_str()), "save");
  char* summary = nullptr;
  Check(idldp_dataset_summary(data.get(), &summary), "summary");
  const CString s(summary);
  std::ostringstream sidecar;
  sidecar << "# idldp dataset metadata v1\nformat=SPACE_SEP_IDS\nseed=" << g.seed << '\n'
          << meta.str() << "summary=" << s.get() << '\n';
  WriteOutput(g.out + ".meta", sidecar.str());
  return kExitOk;
}

void AddDataOptions(CLI::App* cmd, DataArgs& args, bool allow_file) {
  if (allow_file) {
    cmd->add_option("--data", args.data, "Transaction file; generates data when omitted");
    cmd->add_option("--format", args.format, "space (SPACE_SEP_IDS) or csv (CSV_USER_ITEM)")
        ->capture_default_str();
  }
  cmd->add_option("--generator", args.generator, "powerlaw or uniform")->capture_default_str();
  cmd->add_option("--n", args.n, "Number of users")->capture_default_str();
  cmd->add_option("--m", args.m, "Universe size")->capture_default_str();
  cmd->add_option("--alpha", args.alpha, "Power-law exponent")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Input-discriminative local differential privacy toolkit", "idldp"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "INI file; [optimize], [simulate], ... sections");
  Globals g;
  app.add_option("--seed", g.seed, "Seed for every random draw")->capture_default_str();
  app.add_option("--out", g.out, "Output path ('-' for stdout)")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads")->capture_default_str()
      ->check(CLI::PositiveNumber);

  OptimizeArgs opt;
  CLI::App* optimize = app.add_subcommand("optimize", "Solve a perturbation profile");
  optimize->add_option("--budgets", opt.budgets, "Per-level budgets, e.g. ln(4),ln(6)")
      ->required();
  optimize->add_option("--sizes", opt.sizes, "Items per level, e.g. 1,4")->required();
  optimize->add_option("--r-kind", opt.r_kind, "min or avg")->capture_default_str();
  optimize->add_option("--model", opt.model, "opt0, opt1 or opt2")->capture_default_str();
  optimize->add_option("--restarts", opt.restarts, "Random starts for opt0")
      ->capture_default_str();
  optimize->add_option("--max-iters", opt.max_iters, "Iteration cap per solve")
      ->capture_default_str();

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand("simulate", "Run a seeded frequency-estimation experiment");
  AddDataOptions(simulate, sim.data, true);
  simulate->add_option("--mechanisms", sim.mechanisms, "Any of GRR,RAPPOR,OUE,IDUE,IDUE-PS")
      ->capture_default_str();
  simulate->add_option("--model", sim.model, "opt0, opt1 or opt2")->capture_default_str();
  simulate->add_option("--r-kind", sim.r_kind, "min or avg")->capture_default_str();
  simulate->add_option("--epsilons", sim.epsilons, "Base budgets")->capture_default_str();
  simulate->add_option("--multipliers", sim.multipliers, "Level budget multipliers")
      ->capture_default_str();
  simulate->add_option("--fractions", sim.fractions, "Share of items per level")
      ->capture_default_str();
  simulate->add_option("--repeats", sim.repeats, "Runs per setting")->capture_default_str();
  simulate->add_option("--k", sim.ks, "Top-k sizes, comma-separated")->capture_default_str();
  simulate->add_option("--ell", sim.ell, "IDUE-PS padding length (0 = heuristic)")
      ->capture_default_str();
  simulate->add_option("--profile", sim.profile, "Profile file for IDUE/IDUE-PS");
  simulate->add_option("--report-path", sim.report_path, "aggregate or per-user")
      ->capture_default_str();
  simulate->add_flag("--identity", sim.identity, "Replace every channel with the identity");
  simulate->add_option("--restarts", sim.restarts, "Random starts for opt0")
      ->capture_default_str();

  AuditArgs aud;
  CLI::App* audit = app.add_subcommand("audit", "Audit a profile against its privacy model");
  audit->add_option("--profile", aud.profile, "Profile file to audit");
  audit->add_option("--budgets", aud.budgets, "Solve and audit instead of reading a file");
  audit->add_option("--sizes", aud.sizes, "Items per level");
  audit->add_option("--r-kind", aud.r_kind, "min or avg")->capture_default_str();
  audit->add_option("--model", aud.model, "opt0, opt1 or opt2")->capture_default_str();
  audit->add_option("--bruteforce-m", aud.bruteforce_m, "Items in the brute-force audits")
      ->capture_default_str();
  audit->add_option("--itemset-m", aud.itemset_m, "Items in the item-set audit (0 skips)")
      ->capture_default_str();
  audit->add_option("--max-ell", aud.max_ell, "Largest padding length audited")
      ->capture_default_str();
  audit->add_option("--cap", aud.cap, "Enumeration cap")->capture_default_str();

  DataArgs gen;
  CLI::App* gendata = app.add_subcommand("gendata", "Generate a synthetic dataset");
  AddDataOptions(gendata, gen, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (optimize->parsed()) return RunOptimize(g, opt);
    if (simulate->parsed()) return RunSimulate(g, sim);
    if (audit->parsed()) return RunAudit(g, aud);
    if (gendata->parsed()) return RunGendata(g, gen);
  } catch (const Exit& e) {
    return e.code;
  }
  return kExitUsage;
}
