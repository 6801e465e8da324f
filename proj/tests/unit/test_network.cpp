#include <set>

#include "doctest.h"
#include "ztc/netsim/network.hpp"

using namespace ztc;
using namespace ztc::netsim;

namespace {

Bytes msg(std::uint8_t b) { return Bytes{b}; }

}  // namespace

TEST_CASE("fixed latency delivers at now + base") {
  Network n(1);
  n.add_link("a", "b", {3, 0, 0, 1});
  n.advance_to(5);
  const auto out = n.send("a", "b", msg(1));
  CHECK(!out.dropped());
  CHECK(out.deliver_tick == 8);
  CHECK(n.next_due_tick() == 8u);
  n.advance_to(7);
  CHECK(n.pop_due().empty());
  n.advance_to(8);
  const auto due = n.pop_due();
  REQUIRE(due.size() == 1);
  CHECK(due[0].from == "a");
  CHECK(due[0].to == "b");
  CHECK(due[0].payload == msg(1));
  CHECK(n.in_flight() == 0);
}

TEST_CASE("reverse direction inherits the config") {
  Network n(1);
  n.add_link("b", "a", {1, 0, 0, 1});
  n.add_link("a", "b", {4, 0, 0, 1});
  CHECK(n.link("a", "b").base_latency == 4);
  CHECK(n.link("b", "a").base_latency == 1);
  CHECK(n.has_link("a", "b"));
  CHECK(!n.has_link("a", "c"));
  CHECK_THROWS_AS(n.send("a", "c", msg(0)), UnknownLink);
}

TEST_CASE("jitter stays in bounds and is used") {
  Network n(9);
  n.add_link("a", "b", {2, 3, 0, 1});
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 500; ++i) {
    const auto out = n.send("a", "b", msg(0));
    CHECK(out.deliver_tick >= 2);
    CHECK(out.deliver_tick <= 5);
    seen.insert(out.deliver_tick);
  }
  CHECK(seen.size() == 4);
}

TEST_CASE("same tick pops in send order") {
  Network n(1);
  n.add_link("a", "b", {1, 0, 0, 1});
  for (std::uint8_t i = 0; i < 10; ++i) n.send("a", "b", msg(i));
  const auto due = n.step();
  REQUIRE(due.size() == 10);
  for (std::uint8_t i = 0; i < 10; ++i) CHECK(due[i].payload == msg(i));
}

TEST_CASE("drop 1/1 loses everything but reliable messages") {
  Network n(1);
  n.add_link("a", "b", {1, 0, 1, 1});
  for (int i = 0; i < 20; ++i) CHECK(n.send("a", "b", msg(0)).drop == DropCause::Random);
  CHECK(n.dropped() == 20);
  CHECK(!n.send("a", "b", msg(0), true).dropped());
  CHECK(n.in_flight() == 1);
}

TEST_CASE("drop rate is roughly the configured fraction") {
  Network n(3);
  n.add_link("a", "b", {1, 0, 1, 4});
  int lost = 0;
  for (int i = 0; i < 4000; ++i) lost += n.send("a", "b", msg(0)).dropped();
  CHECK(lost > 850);
  CHECK(lost < 1150);
}

TEST_CASE("partitions cut both directions until healed") {
  Network n(1);
  n.add_link("a", "b", {1, 0, 0, 1});
  n.partition("a", "b", 2);
  CHECK(!n.partitioned("a", "b", 1));
  CHECK(n.partitioned("b", "a", 2));
  n.advance_to(3);
  CHECK(n.send("a", "b", msg(0)).drop == DropCause::Partition);
  CHECK(n.send("b", "a", msg(0)).drop == DropCause::Partition);
  CHECK(!n.send("b", "a", msg(0), true).dropped());
  n.heal("a", "b", 4);
  CHECK(n.partitioned("a", "b", 3));
  n.advance_to(4);
  CHECK(!n.send("a", "b", msg(0)).dropped());

  n.partition("a", "b", 10, 12);
  CHECK(n.partitioned("a", "b", 11));
  CHECK(!n.partitioned("a", "b", 12));
}

TEST_CASE("link streams are independent of traffic elsewhere") {
  auto ticks = [](bool noise) {
    Network n(77);
    n.add_link("a", "b", {1, 5, 1, 3});
    n.add_link("c", "d", {1, 5, 1, 3});
    std::vector<std::uint64_t> out;
    for (int i = 0; i < 50; ++i) {
      if (noise) n.send("c", "d", msg(0));
      const auto o = n.send("a", "b", msg(0));
      out.push_back(o.dropped() ? 0 : o.deliver_tick);
    }
    return out;
  };
  CHECK(ticks(false) == ticks(true));
}

TEST_CASE("time only moves forward") {
  Network n(1);
  n.advance_to(5);
  CHECK_THROWS(n.advance_to(4));
  CHECK(n.step().empty());
  CHECK(n.now() == 6);
  CHECK(!n.next_due_tick().has_value());
}
