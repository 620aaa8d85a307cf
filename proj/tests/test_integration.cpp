// End-to-end runs of the installed command-line tool.

#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <string>

#include <json.hpp>

#include "mzc/laurent.hpp"
#include "mzc/mahler.hpp"
#include "mzc/zeta.hpp"

using Json = nlohmann::json;

namespace {

struct Proc {
  int code;
  std::string out;
};

Proc sh(const std::string& args) {
  const std::string cmd = std::string(MZC_BIN) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

}  // namespace

TEST_CASE("binary exit codes") {
  CHECK(sh("mahler --poly 'X1 + 2'").code == 0);
  CHECK(sh("mahler --poly 'X1 +'").code == 2);
  CHECK(sh("zeta-finite --coin rw --n 2 --u 1").code == 1);
  CHECK(sh("nonsense").code == 2);
}

TEST_CASE("binary output matches the library") {
  const auto r = sh("logzeta --coin grover --d 2 --shift f --u -0.5");
  REQUIRE(r.code == 0);
  const double lib = mzc::log_zeta(mzc::CoinSpec{mzc::CoinKind::grover, 2, {}, mzc::ShiftType::f_type}.build(), -0.5).value;
  CHECK(Json::parse(r.out)["result"].get<double>() == lib);
}

TEST_CASE("threads do not change the bytes") {
  const auto a = sh("--threads 1 mahler --poly 'X1 + X2 + 1' --grid 512 --tol 1e-6");
  const auto b = sh("--threads 4 mahler --poly 'X1 + X2 + 1' --grid 512 --tol 1e-6");
  const auto c = sh("mahler --poly 'X1 + X2 + 1' --grid 512 --tol 1e-6");
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
}

TEST_CASE("text polynomial to correspondence") {
  // m(X + 1/X + c) from text, the closed form, and the determinant route of
  // the 1D random walk: L(u) = log(-u/2) + m(X + 1/X - 2/u).
  const double u = -0.4;
  const auto p = mzc::parse_laurent("X1 + X1^-1 + 5");
  CHECK(std::abs(mzc::mahler_quadrature(p).value - mzc::mahler_closed_ftype(5.0)) < 1e-12);
  const auto r = sh("mahler --poly 'X1 + X1^-1 + 5'");
  REQUIRE(r.code == 0);
  CHECK(std::abs(Json::parse(r.out)["result"].get<double>() - mzc::mahler_closed_ftype(5.0)) < 1e-12);
  const double lz = mzc::log_zeta(mzc::build_coin(mzc::CoinKind::simple_rw, 1), u).value;
  CHECK(std::abs(lz - (std::log(-u / 2) + mzc::mahler_closed_ftype(-2 / u))) < 1e-12);
}

TEST_CASE("full verification suite") {
  const auto r = sh("verify --suite all --tol-file default");
  CHECK(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["diagnostics"]["passed"] == true);
  for (const auto& rep : j["result"]) CHECK_MESSAGE(rep["passed"] == true, rep.dump());
}
