// run_config.hpp - configuration surface of the command-line tool: JSON
// config files, flag overrides, and validated run descriptions.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "xychain/chain.hpp"
#include "xychain/genfunc.hpp"

namespace xychain {

struct SweepAxis {
  std::string parameter;  // gamma | h | beta | alpha_re | alpha_im | m | n
  double start = 0.0;
  double stop = 0.0;
  int count = 1;
};

struct RunConfig {
  std::string command;             // partition | genfunc | correlator | limit | verify | sweep
  std::string target = "genfunc";  // command evaluated at each sweep point
  ChainSpec spec;
  RepresentationChoice representation;
  bool limit = false;              // correlator: thermodynamic limit instead of finite size
  std::vector<int> separations{1};
  SweepAxis sweep;
  std::string output_path;         // empty -> stdout
  std::string output_format = "csv";
  double quad_tol = 1e-10;
  double oracle_tol = 1e-10;
  int max_sites = 8;               // verify: dense-oracle cap
  int samples = 50;                // verify: random instances per size
  std::uint64_t seed = 0;          // verify: 0 keeps the built-in seed
  int jobs = 1;

  void validate() const;  // throws std::invalid_argument naming the offending field
};

// "re[+im i]": accepts "0.5", "0.5+0.3i", "0.5-0.3i", "0.3i", "-i".
Complex parse_complex(const std::string& text);

// "3" or "1..10".
std::vector<int> parse_separations(const std::string& text);

// "mxm" | "2mx2m" | "series".
RepresentationChoice::Kind parse_representation(const std::string& text);

// Load and validate a JSON config file; unknown keys are errors.
RunConfig load_config(const std::string& path);

// 17 significant digits, scientific; the fixed CSV number format.
std::string format_g17(double value);

}  // namespace xychain
