#include "doctest.h"

#include "desync/dsl.hpp"
#include "desync/semantics.hpp"
#include "suites.hpp"

using namespace desync;

namespace {

void expect_error(const char* text, std::size_t line, std::size_t column, const std::string& fragment) {
  CAPTURE(text);
  try {
    parse_spec(text);
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.line() == line);
    CHECK(e.column() == column);
    CHECK(e.message().find(fragment) != std::string::npos);
  }
}

}  // namespace

TEST_CASE("two-machines specification") {
  auto f = suites::load_corpus("twomachines");
  CHECK(f.plants == std::vector<std::string>{"M1", "M2"});
  CHECK(f.supervisor == std::optional<std::string>("S0"));
  CHECK(f.requirement == std::optional<std::string>("E_000"));
  int s = 0;
  for (const auto& eq : f.spec.equations())
    if (eq.name.size() == 2 && eq.name[0] == 'S') ++s;
  CHECK(s == 6);
  CHECK(f.warnings.empty());
}

TEST_CASE("a deadlocked plant") {
  auto f = parse_spec("proc X = delta; plant X;");
  CHECK(f.plants == std::vector<std::string>{"X"});
  CHECK(f.plant_term() == Term::var("X"));
  CHECK(f.spec.body("X") == Term::delta());
  CHECK_THROWS_AS(f.supervisor_term(), Error);
}

TEST_CASE("parse errors carry their location") {
  expect_error("chan a;\nproc X = a?", 2, 12, "expected ';'");
  expect_error("proc X = a?;", 1, 10, "undefined channel 'a'");
  expect_error("chan a;\nproc X = X + a!;", 2, 6, "unguarded recursion");
  expect_error("data d;\nchan a;\nproc X = a!d;", 3, 12, "does not carry 'd'");
  expect_error("chan a;\nproc X = a!;\nplant Y;", 3, 7, "undefined process 'Y'");
  expect_error("chan a;\nproc X = a!.Z;", 2, 13, "undefined process 'Z'");
  expect_error("chan proc;", 1, 6, "");
  expect_error("chan a;\nproc X = a!;\nproc X = a!;", 3, 6, "");
  expect_error("chan a; config method = m7;", 1, 25, "");
}

TEST_CASE("deep nesting is rejected rather than overflowing") {
  std::string text = "chan a; proc X = ";
  for (int i = 0; i < 5000; ++i) text += "(";
  text += "a!";
  for (int i = 0; i < 5000; ++i) text += ")";
  text += ";";
  CHECK_THROWS_AS(parse_spec(text), ParseError);
}

TEST_CASE("non-simple plants are parsed with a warning") {
  auto f = parse_spec("data a, b; chan h : a, b; proc X = h?a.h!b.X; plant X;");
  CHECK_FALSE(f.warnings.empty());
}

TEST_CASE("configuration defaults") {
  auto f = parse_spec("chan a; config method = m3, buffer = bag, capacity = 2, cap = 500;");
  CHECK(f.config.method == Method::m3);
  CHECK(f.config.buffer == BufferDiscipline::bag);
  CHECK(f.config.capacity == std::optional<std::optional<std::size_t>>(std::optional<std::size_t>(2)));
  CHECK(f.config.state_cap == std::optional<std::size_t>(500));
  LoopConfig cfg = f.config.apply({});
  CHECK(cfg.method == Method::m3);
  CHECK(cfg.buffer.discipline == BufferDiscipline::bag);
  CHECK(cfg.buffer.capacity == std::optional<std::size_t>(2));
  CHECK(cfg.state_cap == 500);

  auto g = parse_spec("chan a; config capacity = unbounded;");
  REQUIRE(g.config.capacity);
  CHECK_FALSE(g.config.capacity->has_value());
}

TEST_CASE("printing round-trips") {
  for (const auto& name : suites::kCorpus) {
    CAPTURE(name);
    auto f = suites::load_corpus(name);
    auto text = print_spec(f);
    CHECK(parse_spec(text) == f);
  }
  auto minimal = parse_spec("chan a;");
  auto text = print_spec(minimal);
  CHECK(parse_spec(text) == minimal);
  CHECK(text.find("chan a") != std::string::npos);
}

TEST_CASE("term printing") {
  auto f = parse_spec("data a; chan h : a; chan k; proc X = h!a.(k?.X + tau) + k'?!;");
  const auto& sig = f.signature();
  CHECK(print_term(f.spec.body("X"), sig) == "h!a.(k?.X + tau) + k'?!");
  CHECK(print_term(Term::epsilon(), sig) == "epsilon");
  CHECK(print_term(Term::delta(), sig) == "delta");
}

TEST_CASE("comments and hatted names") {
  auto f = parse_spec("# header\nchan h; # trailing\nproc X = h'!.h?.X;\n");
  const auto& sig = f.signature();
  CHECK(print_term(f.spec.body("X"), sig) == "h'!.h?.X");
}
