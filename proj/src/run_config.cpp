// run_config.cpp - config parsing and validation for the CLI.

#include "xychain/run_config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace xychain {

namespace {

double parse_double_strict(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(what + ": cannot parse number '" + text + "'");
  }
  if (used != text.size())
    throw std::invalid_argument(what + ": trailing characters in '" + text + "'");
  return v;
}

}  // namespace

Complex parse_complex(const std::string& raw) {
  std::string text;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) text.push_back(c);
  if (text.empty()) throw std::invalid_argument("alpha: empty value");

  const bool imaginary = text.back() == 'i' || text.back() == 'I';
  if (!imaginary) return {parse_double_strict(text, "alpha"), 0.0};

  std::string body = text.substr(0, text.size() - 1);
  // Split at the last sign that is not an exponent sign and not leading.
  std::size_t split = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string::npos) {
    if (body.empty() || body == "+") return {0.0, 1.0};
    if (body == "-") return {0.0, -1.0};
    return {0.0, parse_double_strict(body, "alpha")};
  }
  const std::string re_part = body.substr(0, split);
  std::string im_part = body.substr(split);
  if (im_part == "+") im_part = "1";
  if (im_part == "-") im_part = "-1";
  return {parse_double_strict(re_part, "alpha"), parse_double_strict(im_part, "alpha")};
}

std::vector<int> parse_separations(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const double v = parse_double_strict(text, "n");
    return {static_cast<int>(v)};
  }
  const int lo = static_cast<int>(parse_double_strict(text.substr(0, dots), "n"));
  const int hi = static_cast<int>(parse_double_strict(text.substr(dots + 2), "n"));
  if (hi < lo) throw std::invalid_argument("n: empty range '" + text + "'");
  std::vector<int> out;
  for (int n = lo; n <= hi; ++n) out.push_back(n);
  return out;
}

RepresentationChoice::Kind parse_representation(const std::string& text) {
  if (text == "mxm") return RepresentationChoice::Kind::MxM;
  if (text == "2mx2m") return RepresentationChoice::Kind::TwoMxTwoM;
  if (text == "series") return RepresentationChoice::Kind::Series;
  throw std::invalid_argument("representation: expected mxm, 2mx2m or series, got '" +
                              text + "'");
}

void RunConfig::validate() const {
  static const std::set<std::string> commands{"partition", "genfunc", "correlator",
                                              "limit",     "verify",  "sweep"};
  if (!commands.count(command))
    throw std::invalid_argument("command: unknown command '" + command + "'");
  if (command == "sweep") {
    static const std::set<std::string> targets{"partition", "genfunc", "correlator",
                                               "limit"};
    if (!targets.count(target))
      throw std::invalid_argument("target: unknown sweep target '" + target + "'");
    static const std::set<std::string> axes{"gamma", "h", "beta", "alpha_re",
                                            "alpha_im", "m", "n"};
    if (!axes.count(sweep.parameter))
      throw std::invalid_argument("sweep: unknown parameter '" + sweep.parameter + "'");
    if (sweep.count < 1) throw std::invalid_argument("sweep: count must be >= 1");
  }
  if (output_format != "csv" && output_format != "json")
    throw std::invalid_argument("format: expected csv or json");
  if (quad_tol <= 0.0) throw std::invalid_argument("quad_tol: must be > 0");
  if (oracle_tol <= 0.0) throw std::invalid_argument("oracle_tol: must be > 0");
  if (jobs < 1) throw std::invalid_argument("jobs: must be >= 1");
  representation.validate();

  const bool needs_chain = command == "partition" || command == "genfunc" ||
                           (command == "correlator" && !limit) ||
                           (command == "sweep" && target != "limit" &&
                            !(target == "correlator" && limit));
  if (needs_chain) spec.validate();
  if (command == "correlator" || (command == "sweep" && target == "correlator")) {
    if (separations.empty()) throw std::invalid_argument("n: at least one separation");
    for (int n : separations)
      if (n < 1) throw std::invalid_argument("n: separations must be >= 1");
  }
  if (command == "verify") {
    if (max_sites < 2 || max_sites % 2 != 0 || max_sites > 12)
      throw std::invalid_argument("max_M: must be even, 2 <= max_M <= 12");
    if (samples < 1) throw std::invalid_argument("samples: must be >= 1");
  }
}

namespace {

void apply_key(RunConfig& cfg, const std::string& key, const nlohmann::json& value) {
  using nlohmann::json;
  const auto want_number = [&](const char* field) {
    if (!value.is_number())
      throw std::invalid_argument(std::string(field) + ": expected a number");
    return value.get<double>();
  };
  const auto want_int = [&](const char* field) {
    if (!value.is_number_integer())
      throw std::invalid_argument(std::string(field) + ": expected an integer");
    return value.get<int>();
  };
  const auto want_string = [&](const char* field) {
    if (!value.is_string())
      throw std::invalid_argument(std::string(field) + ": expected a string");
    return value.get<std::string>();
  };

  if (key == "command") cfg.command = want_string("command");
  else if (key == "target") cfg.target = want_string("target");
  else if (key == "M") cfg.spec.sites = want_int("M");
  else if (key == "m") cfg.spec.m = want_int("m");
  else if (key == "gamma") cfg.spec.gamma = want_number("gamma");
  else if (key == "h") cfg.spec.h = want_number("h");
  else if (key == "beta") cfg.spec.beta = want_number("beta");
  else if (key == "alpha") {
    if (value.is_number()) cfg.spec.alpha = Complex(value.get<double>(), 0.0);
    else cfg.spec.alpha = parse_complex(want_string("alpha"));
  } else if (key == "representation")
    cfg.representation.kind = parse_representation(want_string("representation"));
  else if (key == "K") cfg.representation.series_order = want_int("K");
  else if (key == "phase_steps") cfg.representation.phase_steps = want_int("phase_steps");
  else if (key == "limit") {
    if (!value.is_boolean()) throw std::invalid_argument("limit: expected a boolean");
    cfg.limit = value.get<bool>();
  } else if (key == "n") {
    if (value.is_number_integer())
      cfg.separations = {value.get<int>()};
    else
      cfg.separations = parse_separations(want_string("n"));
  } else if (key == "output") cfg.output_path = want_string("output");
  else if (key == "format") cfg.output_format = want_string("format");
  else if (key == "quad_tol") cfg.quad_tol = want_number("quad_tol");
  else if (key == "oracle_tol") cfg.oracle_tol = want_number("oracle_tol");
  else if (key == "max_M") cfg.max_sites = want_int("max_M");
  else if (key == "samples") cfg.samples = want_int("samples");
  else if (key == "seed") {
    if (!value.is_number_unsigned())
      throw std::invalid_argument("seed: expected a non-negative integer");
    cfg.seed = value.get<std::uint64_t>();
  }
  else if (key == "jobs") cfg.jobs = want_int("jobs");
  else if (key == "sweep") {
    if (!value.is_object()) throw std::invalid_argument("sweep: expected an object");
    for (const auto& [k, v] : value.items()) {
      if (k == "parameter") cfg.sweep.parameter = v.get<std::string>();
      else if (k == "start") cfg.sweep.start = v.get<double>();
      else if (k == "stop") cfg.sweep.stop = v.get<double>();
      else if (k == "count") cfg.sweep.count = v.get<int>();
      else throw std::invalid_argument("sweep: unknown key '" + k + "'");
    }
  } else {
    throw std::invalid_argument("config: unknown key '" + key + "'");
  }
}

}  // namespace

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("config: malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("config: top level must be an object");

  RunConfig cfg;
  for (const auto& [key, value] : doc.items()) apply_key(cfg, key, value);
  return cfg;
}

std::string format_g17(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.16e", value);
  return buffer;
}

}  // namespace xychain
