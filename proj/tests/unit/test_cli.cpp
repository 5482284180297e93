#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "mel/cli.hpp"
#include "mel/error.hpp"
#include "support.hpp"

using namespace mel;
using cli::Command;
using cli::RunConfig;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(RunConfig c) {
  std::ostringstream out, err;
  const int code = cli::run(c, out, err);
  return {code, out.str(), err.str()};
}

RunConfig config(const std::string& instance, Command cmd) {
  RunConfig c;
  c.instance_path = test::instance_path(instance);
  c.command = cmd;
  return c;
}

}  // namespace

TEST_CASE("extension ranges") {
  CHECK(cli::parse_ext_range("1..5") == std::vector<std::uint32_t>{1, 2, 3, 4, 5});
  CHECK(cli::parse_ext_range("3..3") == std::vector<std::uint32_t>{3});
  CHECK_THROWS_AS(cli::parse_ext_range("0..2"), DomainError);
  CHECK_THROWS_AS(cli::parse_ext_range("4..2"), DomainError);
  CHECK_THROWS_AS(cli::parse_ext_range("1-2"), DomainError);
}

TEST_CASE("info") {
  const auto r = run(config("sigma2_f3", Command::info));
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("delta,2\ndelta_source,hypersurface\n") != std::string::npos);
  CHECK(r.out.find("separable,yes") != std::string::npos);
  auto c = config("frobenius_f2", Command::info);
  c.format = cli::Format::json;
  const auto j = run(c);
  CHECK(j.out.find("\"separable\": false") != std::string::npos);
}

TEST_CASE("rank and circuits") {
  const auto r = run(config("sigma2_f3", Command::rank));
  CHECK(r.out.find("\"{1,2,3}\",2,no,2\n") != std::string::npos);
  const auto f = run(config("frobenius_f2", Command::rank));
  CHECK(f.out.find("\"{2}\",1,yes,0\n") != std::string::npos);
  const auto c = run(config("rank2_f3", Command::circuits));
  CHECK(c.out == "circuit\n\"{1,2,3}\"\n\"{1,2,4}\"\n\"{1,3,4}\"\n\"{2,3,4}\"\n");
}

TEST_CASE("annihilator") {
  auto c = config("sigma2_f3", Command::annihilator);
  c.circuit = "1,2,3";
  CHECK(run(c).out == "X1^2 + 2*X1*X2 + X3\n");
  c.circuit.clear();
  c.subset = "{1,2}";
  c.degree = 4;
  const auto empty = run(c);
  CHECK(empty.code == 0);
  CHECK(empty.out.empty());
  c.subset = "1,2,3";
  c.degree = 2;
  CHECK(run(c).out == "X1^2 + 2*X1*X2 + X3\n");
  c.degree.reset();
  CHECK(run(c).code == cli::kExitError);
  auto bad = config("sigma2_f3", Command::annihilator);
  bad.circuit = "1,2";
  const auto e = run(bad);
  CHECK(e.code == cli::kExitError);
  CHECK(e.err.rfind("error: ", 0) == 0);
}

TEST_CASE("points") {
  auto c = config("sigma2_f3", Command::points);
  c.extensions = {1};
  const auto v = run(c);
  CHECK(v.out.rfind("0,0,0\n0,1,0\n", 0) == 0);
  CHECK(std::count(v.out.begin(), v.out.end(), '\n') == 9);
  c.image = true;
  CHECK(run(c).out == v.out);
  c.image = false;
  c.extensions = {2};
  const auto v2 = run(c);
  CHECK(std::count(v2.out.begin(), v2.out.end(), '\n') == 81);
  CHECK(v2.out.find("\"") != std::string::npos);
  c.format = cli::Format::jsonl;
  const auto jl = run(c);
  CHECK(jl.out.rfind("[[0,0],[0,0],[0,0]]\n", 0) == 0);
  c.format = cli::Format::json;
  CHECK(run(c).code == cli::kExitError);
}

TEST_CASE("entropy") {
  auto c = config("sigma2_f3", Command::entropy);
  c.extensions = {1};
  const auto r = run(c);
  CHECK(r.code == 0);
  CHECK(r.out.find("\"{1,3}\",2,1.66666666666667,") != std::string::npos);
  CHECK(r.out.find("\"{3}\",1,0.905712598013837,") != std::string::npos);
}

TEST_CASE("verify exit codes and worker independence") {
  auto c = config("sigma2_f3", Command::sweep);
  c.extensions = cli::parse_ext_range("1..4");
  c.workers = 1;
  const auto one = run(c);
  c.workers = 4;
  const auto four = run(c);
  CHECK(one.code == cli::kExitOk);
  CHECK(one.out == four.out);
  CHECK(one.out.rfind("instance,k,q,subset,", 0) == 0);
  CHECK(std::count(one.out.begin(), one.out.end(), '\n') == 1 + 4 * 8);
  c.format = cli::Format::json;
  const auto j = run(c);
  CHECK(j.out.find("\"max_dev_nonincreasing\"") != std::string::npos);
}

TEST_CASE("output file and errors") {
  const auto path = std::filesystem::temp_directory_path() / "mel_cli_test_out.csv";
  auto c = config("sigma2_f3", Command::circuits);
  c.out = path;
  const auto r = run(c);
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == "circuit\n\"{1,2,3}\"\n");
  std::filesystem::remove(path);

  auto missing = config("no_such_instance", Command::info);
  CHECK(run(missing).code == cli::kExitError);
}

TEST_CASE("grid guard is enforced") {
  auto c = config("sigma3_f3", Command::verify);
  c.extensions = {1};
  c.grid_guard = 10;
  const auto r = run(c);
  CHECK(r.code == cli::kExitError);
  CHECK(r.err.find("guard") != std::string::npos);
}
