#include "doctest.h"

#include "desync/buffers.hpp"
#include "desync/dsl.hpp"
#include "desync/equiv.hpp"
#include "desync/semantics.hpp"
#include "testing.hpp"

using namespace desync;
using testing::labels_at;
using testing::walk;

namespace {

struct Fixture {
  SpecFile file = parse_spec("data a, b; chan h : a, b; chan l1, ul1; proc M1 = l1?.ul1!.M1;");
  const Signature& sig = file.signature();
  ChannelId h = *sig.find_channel("h");

  Lts buffer(BufferDiscipline d, std::optional<std::size_t> cap = std::nullopt) {
    return generate_lts(file.spec, make_buffer(sig, h, {d, cap}), 200);
  }
};

}  // namespace

TEST_CASE("hatting channels") {
  Fixture fx;
  CHECK(hat_channel(fx.h) == fx.h + 1);
  CHECK(fx.sig.channel_name(hat_channel(fx.h)) == "h'");
  CHECK(unhat_channel(fx.h + 1) == fx.h);
  CHECK(unhat_channel(fx.h) == fx.h);
  CHECK_THROWS_AS(hat_channel(fx.h + 1), Error);
  CHECK_THROWS_AS(make_buffer(fx.sig, fx.h + 1, {}), Error);
}

TEST_CASE("queue emits in arrival order") {
  Fixture fx;
  Lts q = fx.buffer(BufferDiscipline::queue);
  auto s = walk(q, {"h?a", "h?b"});
  REQUIRE(s);
  CHECK(labels_at(q, *s) == std::set<std::string>{"h?a", "h?b", "h'!a"});
  auto t = walk(q, {"h?a", "h?b", "h'!a"});
  REQUIRE(t);
  CHECK(labels_at(q, *t).count("h'!b"));
  CHECK_FALSE(walk(q, {"h?a", "h?b", "h'!b"}));
}

TEST_CASE("stack emits the newest item first") {
  Fixture fx;
  Lts st = fx.buffer(BufferDiscipline::stack);
  auto s = walk(st, {"h?a", "h?b"});
  REQUIRE(s);
  CHECK(labels_at(st, *s) == std::set<std::string>{"h?a", "h?b", "h'!b"});
  CHECK(walk(st, {"h?a", "h?b", "h'!b", "h'!a"}));
}

TEST_CASE("bag may emit any stored item") {
  Fixture fx;
  Lts bag = fx.buffer(BufferDiscipline::bag);
  auto s = walk(bag, {"h?a", "h?b"});
  REQUIRE(s);
  CHECK(labels_at(bag, *s) == std::set<std::string>{"h?a", "h?b", "h'!a", "h'!b"});
  CHECK(walk(bag, {"h?a", "h?b"}) == walk(bag, {"h?b", "h?a"}));
}

TEST_CASE("wire overwrites and may repeat or lose data") {
  Fixture fx;
  Lts w = fx.buffer(BufferDiscipline::wire, 1);
  CHECK(w.num_states == 3);
  auto s = walk(w, {"h?a"});
  REQUIRE(s);
  CHECK(labels_at(w, *s) == std::set<std::string>{"h?a", "h?b", "h'!a"});
  CHECK(walk(w, {"h?a", "h'!a"}) == s);
  CHECK(walk(w, {"h?a", "h'!a", "h'!a"}));
  // a is lost once b overwrites it
  auto lost = walk(w, {"h?a", "h?b"});
  REQUIRE(lost);
  CHECK(labels_at(w, *lost) == std::set<std::string>{"h?a", "h?b", "h'!b"});
}

TEST_CASE("bounded buffers refuse input when full") {
  Fixture fx;
  Lts q = fx.buffer(BufferDiscipline::queue, 1);
  CHECK_FALSE(q.truncated);
  CHECK(q.num_states == 3);
  auto s = walk(q, {"h?a"});
  REQUIRE(s);
  CHECK(labels_at(q, *s) == std::set<std::string>{"h'!a"});
  CHECK(fx.buffer(BufferDiscipline::bag, 2).num_states == 6);
  CHECK(fx.buffer(BufferDiscipline::stack, 2).num_states == 7);
}

TEST_CASE("buffer banks") {
  auto f = parse_spec("data a, b; chan l1, ul1; chan x : a, b; chan y : a, b;");
  const auto& sig = f.signature();
  std::vector<ChannelId> two{*sig.find_channel("l1"), *sig.find_channel("ul1")};
  Lts bank = generate_lts(f.spec, buffer_bank(sig, two, {BufferDiscipline::queue, 1}));
  CHECK(bank.num_states == 4);
  CHECK(labels_at(bank, bank.initial) == std::set<std::string>{"l1?unit", "ul1?unit"});

  std::vector<ChannelId> typed{*sig.find_channel("x"), *sig.find_channel("y")};
  CHECK(generate_lts(f.spec, buffer_bank(sig, typed, {BufferDiscipline::queue, 1})).num_states == 9);

  CHECK(buffer_bank(sig, {}, {}) == Term::epsilon());
}

TEST_CASE("renaming input or output channels") {
  Fixture fx;
  Term m1 = Term::var("M1");
  Term in = rename_input_channels(fx.file.spec, m1, hat_channel);
  Lts l = generate_lts(fx.file.spec, in);
  CHECK(l.num_states == 2);
  CHECK(labels_at(l, 0) == std::set<std::string>{"l1'?unit"});
  CHECK(labels_at(l, 1) == std::set<std::string>{"ul1!unit"});

  Term out = rename_output_channels(fx.file.spec, m1, hat_channel);
  Lts o = generate_lts(fx.file.spec, out);
  CHECK(labels_at(o, 0) == std::set<std::string>{"l1?unit"});
  CHECK(labels_at(o, 1) == std::set<std::string>{"ul1'!unit"});

  CHECK(rename_output_channels(fx.file.spec, Term::delta(), hat_channel) == Term::delta());
}
