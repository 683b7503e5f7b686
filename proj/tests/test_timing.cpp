#include <doctest.h>

#include <initializer_list>
#include <stdexcept>

#include "llcsim/timing.hpp"

using namespace llcsim;

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(TimingParams{}.validate());
  CHECK_THROWS_AS((TimingParams{0, 200, 4, 1}.validate()),
                  std::invalid_argument);
  CHECK_THROWS_AS((TimingParams{32, 0, 4, 1}.validate()),
                  std::invalid_argument);
  CHECK_THROWS_AS((TimingParams{32, 200, 0, 1}.validate()),
                  std::invalid_argument);
  CHECK_THROWS_AS((TimingParams{32, 200, 4, 0}.validate()),
                  std::invalid_argument);
  // latency shorter than the service interval starves the channel
  CHECK_THROWS_AS((TimingParams{32, 3, 4, 1}.validate()),
                  std::invalid_argument);
}

TEST_CASE("hit on an idle channel costs the hit latency") {
  ChannelState ch;
  const TimingParams t;
  CHECK(service_transaction(ch, t, true, TxKind::Read, 0) == 32);
  CHECK(ch.llc_port_free_at == 1);
  CHECK(ch.dram_free_at == 0);  // hits never touch DRAM
}

TEST_CASE("miss on an idle channel costs the DRAM latency") {
  ChannelState ch;
  const TimingParams t;
  CHECK(service_transaction(ch, t, false, TxKind::Read, 0) == 200);
  CHECK(ch.llc_port_free_at == 1);
  CHECK(ch.dram_free_at == 4);
}

TEST_CASE("back-to-back misses queue on the DRAM channel") {
  ChannelState ch;
  const TimingParams t;
  CHECK(service_transaction(ch, t, false, TxKind::Read, 0) == 200);
  // port free at 1, DRAM busy until 4: starts at 4, finishes at 204
  CHECK(service_transaction(ch, t, false, TxKind::Read, 1) == 204);
  CHECK(ch.dram_free_at == 8);
}

TEST_CASE("fill pays the DRAM path even when the line is resident") {
  ChannelState ch;
  const TimingParams t;
  CHECK(service_transaction(ch, t, true, TxKind::Fill, 0) == 200);
  CHECK(ch.dram_free_at == 4);
}

TEST_CASE("completion is monotone in issue time") {
  const TimingParams t{17, 150, 5, 2};
  for (const bool hit : {true, false}) {
    Cycle prev = 0;
    for (Cycle issue = 0; issue < 40; ++issue) {
      ChannelState ch{6, 23};  // fixed prior state
      const Cycle done =
          service_transaction(ch, t, hit, TxKind::Read, issue);
      CHECK(done >= prev);
      prev = done;
    }
  }
}

TEST_CASE("bandwidth bound over a miss burst") {
  ChannelState ch;
  const TimingParams t;
  const int n = 100;
  Cycle last = 0;
  for (int i = 0; i < n; ++i)
    last = service_transaction(ch, t, false, TxKind::Read, 0);
  CHECK(last >= (n - 1) * t.dram_service_interval_cycles +
                    t.dram_latency_cycles);
  CHECK(last == (n - 1) * t.dram_service_interval_cycles +
                    t.dram_latency_cycles);  // channel never idles here
}

TEST_CASE("channel horizons never move backwards") {
  ChannelState ch;
  const TimingParams t{10, 50, 3, 2};
  Cycle port = 0, dram = 0;
  for (int i = 0; i < 50; ++i) {
    service_transaction(ch, t, i % 2 == 0, TxKind::Read, (i * 7) % 23);
    CHECK(ch.llc_port_free_at >= port);
    CHECK(ch.dram_free_at >= dram);
    port = ch.llc_port_free_at;
    dram = ch.dram_free_at;
  }
}

TEST_CASE("an idle requestor leaves the channel untouched") {
  // A lone stream sees the same completions whether or not other
  // requestors exist, since only serviced transactions mutate state.
  ChannelState alone, shared;
  const TimingParams t;
  for (int i = 0; i < 10; ++i) {
    const Cycle issue = i * 3;
    CHECK(service_transaction(alone, t, i % 2 == 0, TxKind::Read, issue) ==
          service_transaction(shared, t, i % 2 == 0, TxKind::Read, issue));
  }
}
