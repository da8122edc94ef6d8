#include "rightangle/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "rightangle/error.hpp"
#include "rightangle/geometry.hpp"
#include "rightangle/rank.hpp"
#include "rightangle/search.hpp"
#include "rightangle/serialize.hpp"

namespace rightangle::cli {
namespace {

using serialize::Json;

std::uint64_t require_q(const CommandConfig& cfg) {
  if (!cfg.q) throw Error(ErrorKind::Usage, "--q is required");
  return *cfg.q;
}

std::uint64_t require_n(const CommandConfig& cfg) {
  if (!cfg.n) throw Error(ErrorKind::Usage, "--n is required");
  return *cfg.n;
}

void require_input(const CommandConfig& cfg) {
  if (cfg.input.empty()) throw Error(ErrorKind::Usage, cfg.command + " needs an input file");
  if (!std::filesystem::is_regular_file(cfg.input)) throw Error(ErrorKind::Parse, "no such file: " + cfg.input);
}

// Runs body against --out when given, else against `out`. The output file is
// opened before any work starts.
template <typename Body>
int with_output(const CommandConfig& cfg, std::ostream& out, Body&& body) {
  if (cfg.out.empty()) return body(out);
  std::ofstream file(cfg.out);
  if (!file) throw Error(ErrorKind::Usage, "cannot write " + cfg.out);
  return body(file);
}

std::string big_str(const geometry::BigInt& v) { return v.str(); }

std::vector<gf::Coeff> parse_modulus(const std::string& text) {
  std::vector<gf::Coeff> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const unsigned long v = std::stoul(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(static_cast<gf::Coeff>(v));
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::Usage, "bad --field-modulus entry '" + item + "'");
    }
  }
  return out;
}

const char* status_name(search::Status s) { return s == search::Status::Exact ? "exact" : "lower_bound"; }

std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

}  // namespace

gf::FieldSpec resolve_field(const CommandConfig& cfg) {
  const std::uint64_t q = require_q(cfg);
  auto table = gf::ModulusTable::builtin();
  if (const char* path = std::getenv("RIGHTANGLE_FIELD_TABLE"); path && *path) {
    const Json j = serialize::read_json_file(path);
    if (!j.is_array()) throw Error(ErrorKind::Parse, std::string(path) + ": expected an array of fields");
    for (const auto& entry : j) {
      const auto f = serialize::field_from_json(entry);
      table.set(f.p(), f.k(), f.modulus());
    }
  }
  if (!cfg.field_modulus.empty()) {
    const auto pk = gf::factor_prime_power(q);
    if (pk.p == 0) throw Error(ErrorKind::NotPrime, std::to_string(q) + " is not a prime power");
    table.set(pk.p, pk.k, parse_modulus(cfg.field_modulus));
  }
  return table.field(q);
}

// ---------------------------------------------------------------------------

int cmd_bounds(const CommandConfig& cfg, std::ostream& out, std::ostream& err) {
  const std::uint64_t q = require_q(cfg);
  const std::uint64_t n_max = require_n(cfg);
  if (gf::factor_prime_power(q).p == 0) throw Error(ErrorKind::NotPrime, std::to_string(q) + " is not a prime power");
  if (cfg.n_min == 0) throw Error(ErrorKind::Usage, "--n-min must be positive");

  // Best cached value per n: exact beats lower_bound, larger beats smaller.
  std::map<std::uint64_t, std::pair<std::uint64_t, bool>> cached;
  for (const auto& path : cfg.cache) {
    Json j = serialize::read_json_file(path);
    std::vector<Json> items = j.is_array() ? j.get<std::vector<Json>>() : std::vector<Json>{j};
    for (const auto& item : items) {
      const auto r = serialize::search_result_from_json(item);
      if (r.q != q) continue;
      if (geometry::find_right_angle(r.best, cfg.threads)) {
        throw Error(ErrorKind::Parse, path + ": cached set for n=" + std::to_string(r.n) + " contains a right angle");
      }
      const bool exact = r.status == search::Status::Exact;
      auto& slot = cached[r.n];
      if ((exact && !slot.second) || (exact == slot.second && r.size > slot.first)) slot = {r.size, exact};
    }
  }

  std::vector<geometry::BoundsReport> rows;
  for (std::uint64_t n = cfg.n_min; n <= n_max; ++n) {
    auto r = geometry::bounds_report(n, q);
    if (auto it = cached.find(n); it != cached.end() && !r.exact) {
      r.exact = it->second.first;
      r.status = it->second.second ? geometry::ValueStatus::Exact : geometry::ValueStatus::LowerBound;
    }
    rows.push_back(std::move(r));
  }

  int code = kExitOk;
  for (const auto& r : rows) {
    if (r.exact && r.upper && geometry::BigInt(*r.exact) > *r.upper) {
      err << "REFUTATION: n=" << r.n << " q=" << r.q << " has a verified value " << *r.exact
          << " above the upper bound " << *r.upper << "\n";
      code = kExitFound;
    }
  }

  return with_output(cfg, out, [&](std::ostream& os) {
    auto status_of = [](const geometry::BoundsReport& r) -> std::string {
      if (!r.exact) return "unknown";
      return r.status == geometry::ValueStatus::Exact ? "exact" : "lower_bound";
    };
    switch (cfg.format) {
      case Format::Json: {
        Json arr = Json::array();
        for (const auto& r : rows) arr.push_back(serialize::to_json(r));
        os << arr.dump(2) << "\n";
        break;
      }
      case Format::Csv:
        os << "n,lower_construction,upper_theorem5,exact,status\n";
        for (const auto& r : rows) {
          os << r.n << ',' << (r.lower ? big_str(*r.lower) : "") << ',' << (r.upper ? big_str(*r.upper) : "n/a")
             << ',' << (r.exact ? std::to_string(*r.exact) : "") << ',' << status_of(r) << "\n";
        }
        break;
      case Format::Text:
        os << "R(n," << q << ") bounds\n";
        os << std::setw(4) << "n" << std::setw(16) << "lower C(n,q-1)" << std::setw(22) << "upper C(n+q,q-1)+3"
           << std::setw(8) << "exact" << "  status\n";
        for (const auto& r : rows) {
          os << std::setw(4) << r.n << std::setw(16) << (r.lower ? big_str(*r.lower) : "-") << std::setw(22)
             << (r.upper ? big_str(*r.upper) : "n/a") << std::setw(8) << (r.exact ? std::to_string(*r.exact) : "-")
             << "  " << status_of(r) << "\n";
        }
        break;
    }
    return code;
  });
}

int cmd_verify(const CommandConfig& cfg, std::ostream& out, std::ostream& /*err*/) {
  require_input(cfg);
  const auto a = serialize::point_set_from_json(serialize::read_json_file(cfg.input));
  const auto witness = geometry::find_right_angle(a, cfg.threads);
  return with_output(cfg, out, [&](std::ostream& os) {
    if (!witness) {
      if (cfg.format == Format::Json) {
        os << Json{{"free", true}, {"size", a.size()}}.dump(2) << "\n";
      } else {
        os << "free: " << a.size() << " points, no right angle\n";
      }
      return kExitOk;
    }
    if (cfg.format == Format::Text) {
      os << "right angle at vertex " << gf::to_string(a.field(), a[witness->vertex]) << " with arms "
         << gf::to_string(a.field(), a[witness->arm1]) << " and " << gf::to_string(a.field(), a[witness->arm2]) << "\n";
    }
    os << Json{{"free", false}, {"witness", serialize::to_json(a, *witness)}}.dump(2) << "\n";
    return kExitFound;
  });
}

int cmd_certify(const CommandConfig& cfg, std::ostream& out, std::ostream& err) {
  require_input(cfg);
  const auto a = serialize::point_set_from_json(serialize::read_json_file(cfg.input));
  if (!a.field().odd_characteristic()) throw Error(ErrorKind::EvenCharacteristic, "certify needs odd q");
  if (a.size() > cfg.cap) {
    throw Error(ErrorKind::TooLarge,
                "|A| = " + std::to_string(a.size()) + " exceeds the tensor cap " + std::to_string(cfg.cap));
  }
  const std::size_t m = a.size();
  const auto right_angle = geometry::find_right_angle(a, cfg.threads);
  const auto f_tensor = rank::build_f_tensor(a, cfg.cap);
  const auto t_tensor = rank::build_T_tensor(a, rank::CoefficientVector::ones(a.field(), m), cfg.cap);
  const auto disagreement = rank::tensors_equal_witness(f_tensor, t_tensor);

  Json report{{"size", m}, {"n", a.n()}, {"q", a.field().q()}, {"free", !right_angle}};
  std::vector<std::string> refutations;
  if (disagreement) {
    const auto& c = disagreement->cell;
    report["equality_witness"] = Json{{"cell", {c.x, c.y, c.z}},
                                      {"f", serialize::to_json(a.field(), disagreement->lhs)},
                                      {"T", serialize::to_json(a.field(), disagreement->rhs)}};
    const bool cell_is_angle = geometry::is_right_angle(a.field(), a[c.x], a[c.y], a[c.z]);
    report["equality_witness"]["is_right_angle"] = cell_is_angle;
    if (!right_angle) refutations.push_back("f and T differ on a right-angle-free set");
    if (!cell_is_angle) refutations.push_back("f and T differ at a cell that is not a right angle");
  } else {
    report["equality_witness"] = nullptr;
    if (right_angle) refutations.push_back("f and T agree on a set containing a right angle");
  }

  if (right_angle) {
    report["right_angle"] = serialize::to_json(a, *right_angle);
    report["certified"] = false;
    report["note"] = "set contains a right angle; certification skipped";
  } else {
    const auto d = rank::decompose_f(a);
    const auto mismatch = rank::check_decomposition(d, f_tensor);
    const std::size_t s = d.slices.size();
    const std::size_t nonvanishing = rank::prune_vanishing(d).slices.size();
    const auto bound = rank::slice_count_bound(a.n(), a.field().q());
    report["decomposition"] = Json{{"slices", s},
                                   {"nonvanishing_slices", nonvanishing},
                                   {"patterns", d.patterns_enumerated},
                                   {"dropped_zero_coefficient", d.dropped_zero_coefficient},
                                   {"slice_bound", bound.str()},
                                   {"check", mismatch ? "mismatch" : "ok"}};
    if (mismatch) refutations.push_back("the slice decomposition does not reproduce f");
    if (geometry::BigInt(s) > bound) refutations.push_back("slice count exceeds C(n+q,q-1)+1");
    const bool chain = m < 2 || m - 2 <= s;
    report["chain"] = Json{{"lhs", m < 2 ? 0 : m - 2}, {"rhs", s}, {"holds", chain}};
    if (!chain) refutations.push_back("|A|-2 exceeds the certified slice count");
    report["certified"] = refutations.empty();
    if (!cfg.certificate.empty()) {
      std::ofstream cert(cfg.certificate);
      if (!cert) throw Error(ErrorKind::Usage, "cannot write " + cfg.certificate);
      cert << serialize::to_json(d).dump() << "\n";
    }
  }
  report["refutations"] = refutations;
  for (const auto& r : refutations) err << "REFUTATION: " << r << "\n";

  return with_output(cfg, out, [&](std::ostream& os) {
    if (cfg.format == Format::Text) {
      os << "set: " << m << " points in " << a.field().describe() << "^" << a.n() << "\n";
      os << "right-angle-free: " << (right_angle ? "no" : "yes") << "\n";
      os << "f == T on A^3: " << (disagreement ? "no" : "yes") << "\n";
      if (report.contains("decomposition")) {
        const auto& dj = report["decomposition"];
        os << "slices: " << dj["slices"] << " (nonvanishing " << dj["nonvanishing_slices"] << ", bound "
           << dj["slice_bound"].get<std::string>() << "), check " << dj["check"].get<std::string>() << "\n";
        os << "|A|-2 <= s: " << report["chain"]["lhs"] << " <= " << report["chain"]["rhs"] << " "
           << (report["chain"]["holds"].get<bool>() ? "holds" : "FAILS") << "\n";
      } else {
        os << "certification skipped (right angle present)\n";
      }
    }
    os << report.dump(2) << "\n";
    return refutations.empty() ? kExitOk : kExitFound;
  });
}

int cmd_construct(const CommandConfig& cfg, std::ostream& out, std::ostream& /*err*/) {
  const auto f = resolve_field(cfg);
  const std::uint64_t n = require_n(cfg);
  const auto layer = geometry::construction_layer(f, n);
  const auto witness = geometry::find_right_angle(layer, cfg.threads);
  return with_output(cfg, out, [&](std::ostream& os) {
    Json j{{"n", n},
           {"q", f.q()},
           {"size", layer.size()},
           {"expected_size", geometry::lower_bound_size(n, f.q()).str()},
           {"free", !witness},
           {"witness", witness ? serialize::to_json(layer, *witness) : Json(nullptr)},
           {"points", serialize::to_json(layer)}};
    switch (cfg.format) {
      case Format::Json:
        os << j.dump(2) << "\n";
        break;
      case Format::Csv:
        os << "n,q,size,free\n" << n << ',' << f.q() << ',' << layer.size() << ',' << (witness ? "no" : "yes") << "\n";
        break;
      case Format::Text:
        os << "weight-" << f.q() - 1 << " indicator vectors in " << f.describe() << "^" << n << ": " << layer.size()
           << " points\n";
        for (const auto& p : layer.points()) os << "  " << gf::to_string(f, p) << "\n";
        if (witness) {
          os << "verdict: NOT right-angle-free; vertex " << gf::to_string(f, layer[witness->vertex]) << ", arms "
             << gf::to_string(f, layer[witness->arm1]) << " and " << gf::to_string(f, layer[witness->arm2]) << "\n";
        } else {
          os << "verdict: right-angle-free\n";
        }
        break;
    }
    return kExitOk;
  });
}

int cmd_search(const CommandConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto f = resolve_field(cfg);
  const std::uint64_t n = require_n(cfg);
  search::SearchBudget budget{cfg.budget_nodes, cfg.budget_seconds, cfg.threads, cfg.exact};
  if (cfg.method != "greedy" && !cfg.exact && !cfg.budget_nodes && !cfg.budget_seconds) {
    throw Error(ErrorKind::Usage, "search needs --exact, --budget-nodes or --budget-seconds");
  }
  std::optional<search::Checkpoint> resume;
  if (!cfg.resume.empty()) {
    if (cfg.method != "bnb") throw Error(ErrorKind::Usage, "--resume applies to --method bnb only");
    resume = serialize::checkpoint_from_json(serialize::read_json_file(cfg.resume));
  }

  auto run_search = [&]() -> search::SearchResult {
    if (cfg.method == "exhaustive") return search::exhaustive_max(f, n, budget);
    if (cfg.method == "bnb") {
      search::BranchOptions opts{cfg.orbit_reduction, resume ? &*resume : nullptr};
      return search::branch_and_bound_max(f, n, budget, opts);
    }
    if (cfg.method == "greedy") return search::greedy_lower(f, n, cfg.seed, cfg.restarts);
    throw Error(ErrorKind::Usage, "unknown method '" + cfg.method + "' (exhaustive, bnb, greedy)");
  };

  return with_output(cfg, out, [&](std::ostream& os) {
    const auto r = run_search();
    if (!cfg.checkpoint.empty() && r.checkpoint) {
      std::ofstream cp(cfg.checkpoint);
      if (!cp) throw Error(ErrorKind::Usage, "cannot write " + cfg.checkpoint);
      cp << serialize::to_json(*r.checkpoint).dump(2) << "\n";
    }
    int code = kExitOk;
    if (f.q() % 2 == 1 && geometry::BigInt(r.size) > geometry::upper_bound(n, f.q())) {
      err << "REFUTATION: found a right-angle-free set of size " << r.size << " above the upper bound\n";
      code = kExitFound;
    }
    switch (cfg.format) {
      case Format::Json: {
        Json j = serialize::to_json(r);
        j["config"]["seed"] = cfg.seed;
        os << j.dump(2) << "\n";
        break;
      }
      case Format::Csv:
        os << "n,q,size,status,nodes,elapsed,method,seed\n"
           << r.n << ',' << r.q << ',' << r.size << ',' << status_name(r.status) << ',' << r.nodes << ','
           << r.elapsed << ',' << r.config.method << ',' << cfg.seed << "\n";
        break;
      case Format::Text:
        os << r.config.method << " search in " << f.describe() << "^" << n << ": size " << r.size << " ("
           << status_name(r.status) << "), " << r.nodes << " nodes, " << std::fixed << std::setprecision(3)
           << r.elapsed << " s, seed " << cfg.seed << "\n";
        for (const auto& p : r.best.points()) os << "  " << gf::to_string(f, p) << "\n";
        break;
    }
    return code;
  });
}

int cmd_lemma1(const CommandConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto f = resolve_field(cfg);
  if (!f.odd_characteristic()) throw Error(ErrorKind::EvenCharacteristic, "lemma1 needs odd characteristic");
  if (cfg.m == 0) throw Error(ErrorKind::Usage, "--m must be positive");
  auto rng = make_rng(cfg.seed);
  std::size_t violations = 0;
  std::size_t min_rank = cfg.m;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    std::vector<gf::FieldElement> c(cfg.m);
    for (auto& v : c) v = gf::FieldElement(static_cast<std::uint32_t>(1 + uniform_below(rng, f.q() - 1)));
    const auto r = rank::lemma1_check(rank::CoefficientVector(f, std::move(c)));
    min_rank = std::min(min_rank, r.rank);
    if (!r.holds) ++violations;
  }
  if (violations) err << "REFUTATION: " << violations << " coefficient vectors gave rank below m-2\n";
  return with_output(cfg, out, [&](std::ostream& os) {
    switch (cfg.format) {
      case Format::Json:
        os << Json{{"q", f.q()},         {"m", cfg.m},           {"trials", cfg.trials},
                   {"seed", cfg.seed},   {"min_rank", min_rank}, {"violations", violations},
                   {"holds", violations == 0}}
                  .dump(2)
           << "\n";
        break;
      case Format::Csv:
        os << "q,m,trials,seed,min_rank,violations\n"
           << f.q() << ',' << cfg.m << ',' << cfg.trials << ',' << cfg.seed << ',' << min_rank << ',' << violations
           << "\n";
        break;
      case Format::Text:
        os << "P-matrix rank over " << f.describe() << ", m = " << cfg.m << ", " << cfg.trials
           << " trials (seed " << cfg.seed << "): min rank " << min_rank << ", bound m-2 = "
           << (cfg.m >= 2 ? cfg.m - 2 : 0) << ", " << (violations ? "VIOLATED" : "holds") << "\n";
        break;
    }
    return violations ? kExitFound : kExitOk;
  });
}

// ---------------------------------------------------------------------------

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Right-angle-free subsets of F_q^n: bounds, verification, certificates, search", "rightangle"};
  app.require_subcommand(1);
  app.fallthrough();

  CommandConfig cfg;
  std::string format = "text";
  app.add_option("--q", cfg.q, "field order (prime power)");
  app.add_option("--n", cfg.n, "dimension (maximum dimension for bounds)");
  app.add_option("--field-modulus", cfg.field_modulus, "override modulus, little-endian coefficients c0,...,1");
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--budget-nodes", cfg.budget_nodes, "search node limit");
  app.add_option("--budget-seconds", cfg.budget_seconds, "search time limit");
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--out", cfg.out, "write output to this file");

  auto* bounds = app.add_subcommand("bounds", "tabulate lower/upper bounds on R(n,q)");
  bounds->add_option("--n-min", cfg.n_min, "first dimension (default 1)");
  bounds->add_option("--cache", cfg.cache, "search result JSON files supplying exact values");

  auto* verify = app.add_subcommand("verify", "check a point set for right angles");
  verify->add_option("file", cfg.input, "PointSet JSON")->required();

  auto* certify = app.add_subcommand("certify", "compare f and T and certify the slice decomposition");
  certify->add_option("file", cfg.input, "PointSet JSON")->required();
  certify->add_option("--cap", cfg.cap, "maximum |A| for dense tensors");
  certify->add_option("--certificate", cfg.certificate, "write the slice decomposition JSON here");

  app.add_subcommand("construct", "emit and verify the weight-(q-1) indicator vectors");

  auto* srch = app.add_subcommand("search", "search for large right-angle-free sets");
  srch->add_option("--method", cfg.method, "exhaustive | bnb | greedy")
      ->check(CLI::IsMember({"exhaustive", "bnb", "greedy"}));
  srch->add_flag("--exact", cfg.exact, "run to completion (no budget)");
  srch->add_flag("--orbit-reduction", cfg.orbit_reduction, "restrict the second point to orbit representatives");
  srch->add_option("--restarts", cfg.restarts, "greedy restarts");
  srch->add_option("--resume", cfg.resume, "resume from a checkpoint file");
  srch->add_option("--checkpoint", cfg.checkpoint, "write a checkpoint file when done");

  auto* lemma1 = app.add_subcommand("lemma1", "random rank test of the P-matrix");
  lemma1->add_option("--m", cfg.m, "matrix size");
  lemma1->add_option("--trials", cfg.trials, "number of random coefficient vectors");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  if (!argv_rev.empty()) argv_rev.pop_back();  // program name
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }
  cfg.format = format == "json" ? Format::Json : format == "csv" ? Format::Csv : Format::Text;
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    if (cfg.command == "bounds") return cmd_bounds(cfg, out, err);
    if (cfg.command == "verify") return cmd_verify(cfg, out, err);
    if (cfg.command == "certify") return cmd_certify(cfg, out, err);
    if (cfg.command == "construct") return cmd_construct(cfg, out, err);
    if (cfg.command == "search") return cmd_search(cfg, out, err);
    if (cfg.command == "lemma1") return cmd_lemma1(cfg, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  err << "unknown command\n";
  return kExitUsage;
}

}  // namespace rightangle::cli
