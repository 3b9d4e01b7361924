// xychain.cpp - batch driver: single computations, parameter sweeps, and the
// self-contained verification suite. Emits CSV or JSON with fixed columns.

#include <atomic>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "xychain/correlators.hpp"
#include "xychain/genfunc.hpp"
#include "xychain/oracle.hpp"
#include "xychain/partition.hpp"
#include "xychain/run_config.hpp"
#include "xychain/verify.hpp"

namespace {

using namespace xychain;
using nlohmann::json;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
};

std::string cell_to_csv(const json& cell) {
  if (cell.is_string()) return cell.get<std::string>();
  if (cell.is_number_integer()) return std::to_string(cell.get<long long>());
  return format_g17(cell.get<double>());
}

void write_table(const Table& table, const RunConfig& cfg) {
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!cfg.output_path.empty()) {
    file.open(cfg.output_path);
    if (!file) throw std::invalid_argument("output: cannot open '" + cfg.output_path + "'");
    os = &file;
  }
  if (cfg.output_format == "csv") {
    for (std::size_t c = 0; c < table.columns.size(); ++c)
      *os << (c ? "," : "") << table.columns[c];
    *os << "\n";
    for (const auto& row : table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c)
        *os << (c ? "," : "") << cell_to_csv(row[c]);
      *os << "\n";
    }
  } else {
    json doc;
    doc["command"] = cfg.command;
    doc["rows"] = json::array();
    for (const auto& row : table.rows) {
      json obj = json::object();
      for (std::size_t c = 0; c < row.size(); ++c) obj[table.columns[c]] = row[c];
      doc["rows"].push_back(obj);
    }
    *os << doc.dump(2) << "\n";
  }
}

std::vector<std::vector<json>> rows_partition(const RunConfig& cfg) {
  const ChainSpec& s = cfg.spec;
  const double zpf = sector_partition(s, Sector::Plus, Statistics::F);
  const double zmf = sector_partition(s, Sector::Minus, Statistics::F);
  const double zpb = sector_partition(s, Sector::Plus, Statistics::B);
  const double zmb = sector_partition(s, Sector::Minus, Statistics::B);
  const SignedLog lz = total_log_partition(s);
  return {{s.sites, s.gamma, s.h, s.beta, zpf, zmf, zpb, zmb, lz.value(), lz.log_abs}};
}

std::vector<std::vector<json>> rows_genfunc(const RunConfig& cfg) {
  const ChainSpec& s = cfg.spec;
  const auto rs = sector_results(s, cfg.representation);
  const Complex g = (s.alpha == Complex(0.0, 0.0)) ? Complex(1.0, 0.0)
                                                   : assemble_from_sectors(rs);
  const double z = 0.5 * (rs[0].Z + rs[2].Z + rs[1].Z - rs[3].Z);
  for (const auto& r : rs) {
    if (r.series_diverging) {
      json warn;
      warn["warning"] = "series-divergence";
      warn["message"] = "trace-log series terms stopped decreasing; "
                        "reduce |alpha| or raise K";
      std::cerr << warn.dump() << "\n";
      break;
    }
  }
  return {{s.sites, s.m, s.gamma, s.h, s.beta, s.alpha.real(), s.alpha.imag(), g.real(),
           g.imag(), z}};
}

std::vector<std::vector<json>> rows_correlator(const RunConfig& cfg) {
  std::vector<std::vector<json>> rows;
  const ChainSpec& s = cfg.spec;
  for (int n : cfg.separations) {
    double sz, zz;
    json label;
    if (cfg.limit) {
      if (s.gamma == 0.0) {
        sz = sigma_z_limit_xx(s.h, s.beta, cfg.quad_tol);
        zz = zz_limit_xx(s.h, s.beta, n, cfg.quad_tol);
      } else {
        sz = sigma_z_limit(s.gamma, s.h, s.beta, cfg.quad_tol);
        zz = zz_limit(s.gamma, s.h, s.beta, n, cfg.quad_tol);
      }
      label = "limit";
    } else {
      ChainSpec at = s;
      at.m = n;
      sz = sigma_z_finite(at);
      zz = zz_finite(s, n);
      label = s.sites;
    }
    rows.push_back({label, s.gamma, s.h, s.beta, n, sz, zz});
  }
  return rows;
}

std::vector<std::vector<json>> rows_limit(const RunConfig& cfg) {
  const ChainSpec& s = cfg.spec;
  const double f = free_energy_limit(s.gamma, s.h, s.beta, cfg.quad_tol);
  const double sz = (s.gamma == 0.0) ? sigma_z_limit_xx(s.h, s.beta, cfg.quad_tol)
                                     : sigma_z_limit(s.gamma, s.h, s.beta, cfg.quad_tol);
  return {{s.gamma, s.h, s.beta, f, sz}};
}

Table columns_for(const std::string& command) {
  if (command == "partition")
    return {{"M", "gamma", "h", "beta", "Z_plus_F", "Z_minus_F", "Z_plus_B",
             "Z_minus_B", "Z", "log_Z"},
            {}};
  if (command == "genfunc")
    return {{"M", "m", "gamma", "h", "beta", "alpha_re", "alpha_im", "G_re", "G_im", "Z"},
            {}};
  if (command == "correlator")
    return {{"M", "gamma", "h", "beta", "n", "sigma_z", "zz"}, {}};
  return {{"gamma", "h", "beta", "free_energy", "sigma_z"}, {}};
}

std::vector<std::vector<json>> rows_for(const std::string& command, const RunConfig& cfg) {
  if (command == "partition") return rows_partition(cfg);
  if (command == "genfunc") return rows_genfunc(cfg);
  if (command == "correlator") return rows_correlator(cfg);
  return rows_limit(cfg);
}

void apply_sweep_value(RunConfig& cfg, const std::string& parameter, double value) {
  if (parameter == "gamma") cfg.spec.gamma = value;
  else if (parameter == "h") cfg.spec.h = value;
  else if (parameter == "beta") cfg.spec.beta = value;
  else if (parameter == "alpha_re") cfg.spec.alpha = Complex(value, cfg.spec.alpha.imag());
  else if (parameter == "alpha_im") cfg.spec.alpha = Complex(cfg.spec.alpha.real(), value);
  else if (parameter == "m") cfg.spec.m = static_cast<int>(std::lround(value));
  else if (parameter == "n") cfg.separations = {static_cast<int>(std::lround(value))};
}

Table run_sweep(const RunConfig& cfg) {
  Table table = columns_for(cfg.target);
  const int count = cfg.sweep.count;
  std::vector<std::vector<std::vector<json>>> results(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<int> next{0};

  const auto worker = [&]() {
    for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        RunConfig point = cfg;
        const double value =
            (count == 1) ? cfg.sweep.start
                         : cfg.sweep.start + (cfg.sweep.stop - cfg.sweep.start) *
                                                 (static_cast<double>(i) / (count - 1));
        apply_sweep_value(point, cfg.sweep.parameter, value);
        point.spec.validate();
        results[i] = rows_for(cfg.target, point);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int threads = std::max(1, std::min(cfg.jobs, count));
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  // Rows in sweep order regardless of completion order.
  for (int i = 0; i < count; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    for (auto& row : results[i]) table.rows.push_back(std::move(row));
  }
  return table;
}

int run_verify(const RunConfig& cfg) {
  VerifyOptions opt;
  opt.max_sites = cfg.max_sites;
  opt.tol = cfg.oracle_tol;
  opt.samples = cfg.samples;
  if (cfg.seed != 0) opt.seed = cfg.seed;
  const VerifyReport report = run_verification(opt);

  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!cfg.output_path.empty()) {
    file.open(cfg.output_path);
    if (!file) throw std::invalid_argument("output: cannot open '" + cfg.output_path + "'");
    os = &file;
  }
  int failed = 0;
  for (const auto& c : report.checks) {
    *os << "check " << c.name << ": residual " << format_g17(c.residual)
        << " tolerance " << format_g17(c.tolerance) << (c.pass ? " PASS" : " FAIL")
        << "\n";
    if (!c.pass) ++failed;
  }
  *os << "verification: " << report.checks.size() << " checks, " << failed
      << " failed, " << format_g17(report.seconds) << " seconds\n";
  return failed == 0 ? 0 : 4;
}

void error_line(const std::string& kind, const std::string& message) {
  json e;
  e["error"] = kind;
  e["message"] = message;
  std::cerr << e.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  try {
    // The config file provides defaults; explicit flags override them.
    for (int i = 1; i < argc; ++i) {
      const std::string a = argv[i];
      if (a == "--config" && i + 1 < argc) cfg = load_config(argv[i + 1]);
      else if (a.rfind("--config=", 0) == 0) cfg = load_config(a.substr(9));
    }

    CLI::App app{"thermal correlation toolkit for the periodic XY/XX spin-1/2 chain"};
    app.require_subcommand(0, 1);
    // long-only help so that --h stays available as the field flag
    app.set_help_flag("--help", "print help");
    std::string config_path, alpha_text, n_text, rep_text;
    app.add_option("--config", config_path, "JSON config file (flags override file values)");

    const auto subcommand = [&](const char* name, const char* description) {
      CLI::App* c = app.add_subcommand(name, description);
      c->set_help_flag("--help", "print help");
      return c;
    };
    const auto add_common = [&](CLI::App* c) {
      c->add_option("--config", config_path, "JSON config file (flags override file values)");
      c->add_option("--output", cfg.output_path, "output file (default: stdout)");
      c->add_option("--format", cfg.output_format, "csv or json")->capture_default_str();
      c->add_option("--jobs", cfg.jobs, "concurrent sweep evaluations")->capture_default_str();
    };
    const auto add_chain = [&](CLI::App* c) {
      c->add_option("--M", cfg.spec.sites, "chain length (even)")->capture_default_str();
      c->add_option("--gamma", cfg.spec.gamma, "anisotropy (0 = XX)")->capture_default_str();
      c->add_option("--h", cfg.spec.h, "magnetic field (>= 0)")->capture_default_str();
      c->add_option("--beta", cfg.spec.beta, "inverse temperature")->capture_default_str();
    };

    CLI::App* c_part = subcommand("partition", "sector and total partition functions");
    add_chain(c_part);
    add_common(c_part);

    CLI::App* c_gen = subcommand("genfunc", "generating functional G(alpha, m)");
    add_chain(c_gen);
    c_gen->add_option("--m", cfg.spec.m, "counted sub-chain length")->capture_default_str();
    c_gen->add_option("--alpha", alpha_text, "counting parameter, re[+im i] (default 0)");
    c_gen->add_option("--representation", rep_text, "mxm, 2mx2m or series (default mxm)");
    c_gen->add_option("--K", cfg.representation.series_order, "series truncation order")
        ->capture_default_str();
    c_gen->add_option("--phase-steps", cfg.representation.phase_steps,
                      "initial homotopy segments for the doubled route")
        ->capture_default_str();
    add_common(c_gen);

    CLI::App* c_cor = subcommand("correlator", "sigma-z and zz correlators");
    add_chain(c_cor);
    c_cor->add_flag("--limit", cfg.limit, "thermodynamic limit instead of finite size");
    c_cor->add_option("--n", n_text, "separation, single value or range a..b (default 1)");
    c_cor->add_option("--tol", cfg.quad_tol, "quadrature tolerance")->capture_default_str();
    add_common(c_cor);

    CLI::App* c_lim = subcommand("limit", "thermodynamic-limit free energy and magnetization");
    c_lim->add_option("--gamma", cfg.spec.gamma, "anisotropy (0 = XX)")->capture_default_str();
    c_lim->add_option("--h", cfg.spec.h, "magnetic field (>= 0)")->capture_default_str();
    c_lim->add_option("--beta", cfg.spec.beta, "inverse temperature")->capture_default_str();
    c_lim->add_option("--tol", cfg.quad_tol, "quadrature tolerance")->capture_default_str();
    add_common(c_lim);

    CLI::App* c_ver = subcommand("verify", "run the identity suite against the dense oracle");
    c_ver->add_option("--max-M", cfg.max_sites, "largest oracle chain (even, <= 12)")
        ->capture_default_str();
    c_ver->add_option("--tol", cfg.oracle_tol, "oracle-equivalence tolerance")
        ->capture_default_str();
    c_ver->add_option("--samples", cfg.samples, "random instances per chain size")
        ->capture_default_str();
    c_ver->add_option("--seed", cfg.seed, "random seed (0 keeps the built-in one)")
        ->capture_default_str();
    add_common(c_ver);

    CLI::App* c_swp = subcommand("sweep", "evaluate a command along a parameter axis");
    c_swp->add_option("--target", cfg.target, "partition, genfunc, correlator or limit")
        ->capture_default_str();
    add_chain(c_swp);
    c_swp->add_option("--m", cfg.spec.m, "counted sub-chain length")->capture_default_str();
    c_swp->add_option("--alpha", alpha_text, "counting parameter, re[+im i]");
    c_swp->add_flag("--limit", cfg.limit, "limit flavor of the correlator target");
    c_swp->add_option("--n", n_text, "separations for the correlator target");
    c_swp->add_option("--param", cfg.sweep.parameter,
                      "axis: gamma, h, beta, alpha_re, alpha_im, m or n");
    c_swp->add_option("--start", cfg.sweep.start, "axis start")->capture_default_str();
    c_swp->add_option("--stop", cfg.sweep.stop, "axis stop")->capture_default_str();
    c_swp->add_option("--count", cfg.sweep.count, "number of points")->capture_default_str();
    c_swp->add_option("--tol", cfg.quad_tol, "quadrature tolerance")->capture_default_str();
    add_common(c_swp);

    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      if (e.get_exit_code() == 0) return app.exit(e);  // --help
      error_line("invalid-argument", e.what());
      return 2;
    }

    for (CLI::App* sub : {c_part, c_gen, c_cor, c_lim, c_ver, c_swp})
      if (sub->parsed()) cfg.command = sub->get_name();
    if (cfg.command.empty())
      throw std::invalid_argument("command: nothing to do (see --help)");
    if (!alpha_text.empty()) cfg.spec.alpha = parse_complex(alpha_text);
    if (!n_text.empty()) cfg.separations = parse_separations(n_text);
    if (!rep_text.empty()) cfg.representation.kind = parse_representation(rep_text);

    cfg.validate();

    if (cfg.command == "verify") return run_verify(cfg);
    if (cfg.command == "sweep") {
      write_table(run_sweep(cfg), cfg);
      return 0;
    }
    Table table = columns_for(cfg.command);
    table.rows = rows_for(cfg.command, cfg);
    write_table(table, cfg);
    return 0;
  } catch (const AccuracyFailure& e) {
    error_line("accuracy-failure", e.what());
    return 3;
  } catch (const SingularityError& e) {
    error_line("singularity", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    error_line("invalid-argument", e.what());
    return 2;
  } catch (const std::exception& e) {
    error_line("internal", e.what());
    return 2;
  }
}
