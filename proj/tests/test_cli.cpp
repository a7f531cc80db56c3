#include <doctest.h>

#include <json.hpp>
#include <sstream>

#include "mkcost/cli.hpp"
#include "support/testkit.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "mkcost");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = mkcost::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

const std::string kAppend = std::string(MKCOST_PROGRAMS_DIR) + "/append.mk";

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("measure") {
    Result r = cli({"measure", kAppend, "--goal", "appendo(Cons(O, Nil), Nil, q)"});
    CHECK(r.code == 0);
    CHECK(r.out == "d=22, t=50, answers=1\n");
  }

  TEST_CASE("run prints one answer per line") {
    Result r = cli({"run", kAppend, "--goal", "appendo_opt(a, b, Cons(O, Nil))"});
    CHECK(r.code == 0);
    CHECK(r.out == "{a = Nil, b = Cons(O, Nil)}\n{a = Cons(O, Nil), b = Nil}\n");
    Result capped = cli({"run", kAppend, "--goal", "appendo(a, b, Cons(O, Nil))", "-n", "2"});
    CHECK(capped.code == 0);
    CHECK(capped.out == r.out);
  }

  TEST_CASE("json mirrors text") {
    Result r = cli({"measure", kAppend, "--goal", "appendo(Cons(O, Nil), Nil, q)", "--format", "json"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["d"] == 22);
    CHECK(j["t"] == 50);
    CHECK(j["answers"] == 1);
    Result a = cli({"run", kAppend, "--goal", "appendo_opt(a, b, Nil)", "--format", "json"});
    auto ja = nlohmann::json::parse(a.out);
    CHECK(ja["count"] == 1);
    CHECK(ja["answers"][0]["a"] == "Nil");
  }

  TEST_CASE("trace") {
    Result r = cli({"trace", kAppend, "--goal", "appendo(Cons(Zero, Nil), Nil, q)"});
    CHECK(r.code == 0);
    CHECK(r.out == testkit::read_text(testkit::golden_path("trace_appendo_1.txt")));
  }

  TEST_CASE("scheme text and dot") {
    Result t = cli({"scheme", kAppend, "--rel", "appendo", "--grounded", "a,b"});
    CHECK(t.code == 0);
    CHECK(t.out == testkit::read_text(testkit::golden_path("appendo_scheme.txt")));
    Result d = cli({"scheme", kAppend, "--rel", "appendo", "--grounded", "a,b", "--format", "dot"});
    CHECK(d.out == testkit::read_text(testkit::golden_path("appendo_scheme.dot")));
    Result j = cli({"scheme", kAppend, "--rel", "appendo", "--grounded", "a,b", "--format", "json"});
    CHECK(nlohmann::json::parse(j.out)["scheme"]["kind"] == "fork");
  }

  TEST_CASE("factors") {
    Result r = cli({"factors", kAppend, "--rel", "appendo", "--grounded", "a,b", "--sizes", "1..3", "--value",
                    "b=Nil"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("size,d,D,t,T,maxL,ratio\na=1,21,14,49,23,", 0) == 0);
    CHECK(r.err.find("constant") != std::string::npos);
  }

  TEST_CASE("bench") {
    Result r = cli({"bench", "--suite", "pluso_nm", "--sizes", "1,2", "--reps", "1"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("suite,size,d,t,wall_ns,answers\npluso_nm,1,", 0) == 0);
  }

  TEST_CASE("check") {
    Result ok = cli({"check", kAppend, "--goal", "appendo_opt(a, b, Cons(O, Nil))"});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("rel appendo: ok") != std::string::npos);
    CHECK(ok.out.find("goal: 2 answers, all ground and unique") != std::string::npos);
    Result open = cli({"check", kAppend, "--goal", "appendo(Nil, b, q)"});
    CHECK(open.code == 1);
  }

  TEST_CASE("exit codes") {
    CHECK(cli({}).code == 2);
    CHECK(cli({"frobnicate"}).code == 2);
    CHECK(cli({"measure"}).code == 2);
    CHECK(cli({"measure", kAppend}).code == 2);
    CHECK(cli({"measure", kAppend, "--goal", "appendo(x)"}).code == 1);
    CHECK(cli({"measure", "/nonexistent.mk", "--goal", "x == Nil"}).code == 1);
    CHECK(cli({"run", kAppend, "--goal", "x == Nil", "--format", "dot"}).code == 2);
    CHECK(cli({"run", kAppend, "--goal", "x == Nil", "--occurs-check", "maybe"}).code == 2);
    CHECK(cli({"scheme", kAppend, "--rel", "nope"}).code == 1);
    Result help = cli({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("measure") != std::string::npos);
  }

  TEST_CASE("measure reports divergence") {
    Result r = cli({"measure", kAppend, "--goal", "appendo(a, b, Cons(O, Nil))", "--limit", "500"});
    CHECK(r.code == 1);
    CHECK(r.err.find("did not terminate") != std::string::npos);
  }
}
