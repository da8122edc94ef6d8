#pragma once

// Command-line front end. Exit codes: 0 success / set is free,
// 1 witness found (verify) or refutation found (certify, search, bounds,
// lemma1), 2 usage or parse error.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rightangle/gf.hpp"

namespace rightangle::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFound = 1;
inline constexpr int kExitUsage = 2;

enum class Format { Text, Json, Csv };

struct CommandConfig {
  std::string command;
  std::optional<std::uint64_t> q;
  std::optional<std::uint64_t> n;
  std::string field_modulus;  // "c0,c1,...,1", little-endian
  std::string input;
  std::string out;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::optional<std::uint64_t> budget_nodes;
  std::optional<double> budget_seconds;
  Format format = Format::Text;

  // bounds
  std::uint64_t n_min = 1;
  std::vector<std::string> cache;
  // certify
  std::size_t cap = 64;
  std::string certificate;
  // lemma1
  std::size_t m = 8;
  std::size_t trials = 100;
  // search
  std::string method = "bnb";
  bool exact = false;
  bool orbit_reduction = false;
  unsigned restarts = 20;
  std::string resume;
  std::string checkpoint;
};

/// Field for --q, honouring RIGHTANGLE_FIELD_TABLE and --field-modulus.
gf::FieldSpec resolve_field(const CommandConfig& cfg);

int cmd_bounds(const CommandConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(const CommandConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_certify(const CommandConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_construct(const CommandConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_search(const CommandConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_lemma1(const CommandConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses argv (argv[0] is the program name) and dispatches.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rightangle::cli
