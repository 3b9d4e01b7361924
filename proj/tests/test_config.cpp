// test_config.cpp - config parsing, validation diagnostics, number format.
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <string>

#include "xychain/run_config.hpp"

using namespace xychain;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& contents) {
    static int counter = 0;
    path = "xychain_test_config_" + std::to_string(counter++) + ".json";
    std::ofstream out(path);
    out << contents;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("complex parsing") {
  CHECK(parse_complex("0.5") == Complex(0.5, 0.0));
  CHECK(parse_complex("-2e-3") == Complex(-2e-3, 0.0));
  CHECK(parse_complex("0.5+0.3i") == Complex(0.5, 0.3));
  CHECK(parse_complex("0.5-0.3i") == Complex(0.5, -0.3));
  CHECK(parse_complex("0.3i") == Complex(0.0, 0.3));
  CHECK(parse_complex("-i") == Complex(0.0, -1.0));
  CHECK(parse_complex("1.5e-2+2e1i") == Complex(0.015, 20.0));
  CHECK(parse_complex(" 1 + 2 i ") == Complex(1.0, 2.0));
  CHECK_THROWS_AS(parse_complex(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_complex("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_complex("1+2j"), std::invalid_argument);
}

TEST_CASE("separation ranges") {
  CHECK(parse_separations("3") == std::vector<int>{3});
  CHECK(parse_separations("1..4") == std::vector<int>{1, 2, 3, 4});
  CHECK_THROWS_AS(parse_separations("5..2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_separations("x"), std::invalid_argument);
}

TEST_CASE("minimal config file fills defaults") {
  TempFile file(R"({"command":"partition","M":4,"gamma":0,"h":1.2,"beta":1})");
  const RunConfig cfg = load_config(file.path);
  CHECK(cfg.command == "partition");
  CHECK(cfg.spec.sites == 4);
  CHECK(cfg.spec.m == 0);              // default
  CHECK(cfg.spec.alpha == Complex(0.0, 0.0));
  CHECK(cfg.output_format == "csv");   // default
  CHECK(cfg.jobs == 1);
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("parity violation is named") {
  TempFile file(R"({"command":"partition","M":3})");
  const RunConfig cfg = load_config(file.path);
  try {
    cfg.validate();
    CHECK(false);
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("even") != std::string::npos);
  }
}

TEST_CASE("unknown keys and malformed files are rejected") {
  TempFile bad(R"({"command":"partition","M":4,"bogus":1})");
  try {
    load_config(bad.path);
    CHECK(false);
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("bogus") != std::string::npos);
  }

  TempFile broken(R"({"command":)");
  CHECK_THROWS_AS(load_config(broken.path), std::invalid_argument);
  CHECK_THROWS_AS(load_config("no_such_file_xyz.json"), std::invalid_argument);
}

TEST_CASE("flag-style override wins over the file value") {
  TempFile file(R"({"command":"partition","M":4,"beta":1})");
  RunConfig cfg = load_config(file.path);
  CHECK(cfg.spec.beta == 1.0);
  cfg.spec.beta = 2.0;  // what an explicit --beta 2 does after loading
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.spec.beta == 2.0);
}

TEST_CASE("alpha accepted as number or string") {
  TempFile file(R"({"command":"genfunc","M":4,"m":2,"alpha":"0.5+0.25i"})");
  const RunConfig cfg = load_config(file.path);
  CHECK(cfg.spec.alpha == Complex(0.5, 0.25));
  TempFile file2(R"({"command":"genfunc","M":4,"m":2,"alpha":0.75})");
  CHECK(load_config(file2.path).spec.alpha == Complex(0.75, 0.0));
}

TEST_CASE("run config validation") {
  RunConfig cfg;
  cfg.command = "mystery";
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

  cfg.command = "genfunc";
  cfg.spec.sites = 4;
  cfg.output_format = "xml";
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.output_format = "json";
  CHECK_NOTHROW(cfg.validate());

  cfg.command = "sweep";
  cfg.target = "genfunc";
  cfg.sweep.parameter = "volume";
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.sweep.parameter = "h";
  cfg.sweep.count = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.sweep.count = 5;
  CHECK_NOTHROW(cfg.validate());

  cfg.command = "correlator";
  cfg.separations = {0};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.separations = {1, 2};
  cfg.quad_tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.quad_tol = 1e-10;
  CHECK_NOTHROW(cfg.validate());

  cfg.command = "verify";
  cfg.max_sites = 9;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.max_sites = 8;
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("fixed number format") {
  CHECK(format_g17(1.0) == "1.0000000000000000e+00");
  CHECK(format_g17(1.0 / 3.0) == "3.3333333333333331e-01");
  CHECK(format_g17(-2.5e-13) == "-2.4999999999999999e-13");
}
