#include <gtest/gtest.h>

#include <map>

#include "fixtures.hpp"
#include "reordermon/hash.hpp"
#include "reordermon/heavy_hitter.hpp"
#include "reordermon/oracle.hpp"

namespace reordermon {
namespace {

using testing::flow;
using testing::pkt;

HHParams params(std::size_t stages, std::size_t per_stage, std::uint64_t hash_seed = 0, std::uint64_t rng_seed = 0) {
  HHParams p;
  p.stages = stages;
  p.buckets_per_stage = per_stage;
  p.hash_seed = hash_seed;
  p.rng_seed = rng_seed;
  return p;
}

TEST(HeavyHitter, RejectsInvalidParams) {
  EXPECT_THROW(HeavyHitterTable(params(0, 4)), DetectorConfigError);
  EXPECT_THROW(HeavyHitterTable(params(2, 0)), DetectorConfigError);
  auto p = params(2, 4);
  p.report_fraction = 0.0;
  EXPECT_THROW(HeavyHitterTable{p}, DetectorConfigError);
  p.report_fraction = 1.0;
  EXPECT_THROW(HeavyHitterTable{p}, DetectorConfigError);
  p = params(2, 4);
  p.def = ReorderDef::BelowMax;
  EXPECT_THROW(HeavyHitterTable{p}, DetectorConfigError);
}

TEST(HeavyHitter, StageSizesOverrideDropsEmptyStages) {
  auto p = params(3, 4);
  p.stage_sizes = {3, 0, 2};
  HeavyHitterTable t(p);
  EXPECT_EQ(t.stage_count(), 2u);
  EXPECT_EQ(t.stage(0).size(), 3u);
  EXPECT_EQ(t.stage(1).size(), 2u);
  EXPECT_EQ(t.total_buckets(), 5u);
}

TEST(HeavyHitter, FirstPacketIsAdmitted) {
  HeavyHitterTable t(params(2, 4));
  auto f = flow("10.0.0.1");
  auto r = t.process(pkt(f, 1000, 0));
  EXPECT_TRUE(r.resident);
  EXPECT_FALSE(r.report.has_value());
  EXPECT_TRUE(t.contains(f));
  EXPECT_TRUE(t.contains_prefix(prefix_of(f)));
  EXPECT_FALSE(t.contains(flow("10.0.0.2")));
  const auto& e = t.stage(0)[t.bucket_index(0, prefix_of(f))];
  EXPECT_EQ(e.flow, f);
  EXPECT_EQ(e.count_est, 1u);
  EXPECT_EQ(e.n, 0u);
}

TEST(HeavyHitter, ResidentInOrderPacketCounts) {
  HeavyHitterTable t(params(2, 4));
  auto f = flow("10.0.0.1");
  t.process(pkt(f, 1000, 0));
  auto r = t.process(pkt(f, 1100, 0));
  EXPECT_TRUE(r.resident);
  EXPECT_FALSE(r.report.has_value());
  const auto& e = t.stage(0)[t.bucket_index(0, prefix_of(f))];
  EXPECT_EQ(e.count_est, 2u);
  EXPECT_EQ(e.n, 1u);
  EXPECT_EQ(e.o, 0u);
  t.process(pkt(f, 900, 0));
  EXPECT_EQ(e.o, 1u);
}

// d = 1 with one bucket: the victim is always the same entry.
TEST(HeavyHitter, VictimAboveThresholdIsReported) {
  auto p = params(1, 1);
  p.min_report_packets = 16;
  HeavyHitterTable t(p);
  auto f = flow("10.0.0.1");
  t.process(pkt(f, 1'000'000, 0));
  std::uint32_t seq = 1'000'000;
  for (int i = 0; i < 100; ++i) {
    seq = (i % 20 == 0) ? seq - 10 : seq + 100;  // 5 decreases in 100 packets
    t.process(pkt(f, seq, 0));
  }
  const auto& e = t.stage(0)[0];
  ASSERT_EQ(e.n, 100u);
  ASSERT_EQ(e.o, 5u);
  // count_est = 101: keep offering a newcomer until admission succeeds.
  auto g = flow("10.0.0.2");
  std::optional<Report> report;
  for (int i = 0; i < 100000 && !report; ++i) {
    auto r = t.process(pkt(g, 1, 0));
    if (r.resident) {
      report = r.report;
      break;
    }
  }
  ASSERT_TRUE(report.has_value());
  EXPECT_EQ(*report, (Report{prefix_of(f), 100, 5, ReportSource::HhEviction}));
  EXPECT_TRUE(t.contains(g));
  EXPECT_FALSE(t.contains(f));
  EXPECT_EQ(t.stage(0)[0].count_est, 102u);
}

void fill(HeavyHitterTable& t, const FlowId& f, int n, int o) {
  std::uint32_t seq = 1'000'000;
  t.process(pkt(f, seq, 0));
  for (int i = 0; i < n; ++i) {
    seq = i < o ? seq - 10 : seq + 100;
    t.process(pkt(f, seq, 0));
  }
}

TEST(HeavyHitter, FlushThresholds) {
  {
    HeavyHitterTable t(params(1, 1));
    EXPECT_TRUE(t.flush().empty());
  }
  {
    HeavyHitterTable t(params(1, 1));
    fill(t, flow("10.0.0.1"), 200, 1);
    EXPECT_TRUE(t.flush().empty());  // 0.005 <= 0.01
  }
  {
    HeavyHitterTable t(params(1, 1));
    fill(t, flow("10.0.0.1"), 200, 3);
    auto r = t.flush();
    ASSERT_EQ(r.size(), 1u);
    EXPECT_EQ(r[0], (Report{prefix_of(flow("10.0.0.1")), 200, 3, ReportSource::HhFlush}));
    EXPECT_FALSE(t.contains(flow("10.0.0.1")));
  }
  {
    HeavyHitterTable t(params(1, 1));
    fill(t, flow("10.0.0.1"), 15, 10);  // below min_report_packets
    EXPECT_TRUE(t.flush().empty());
  }
}

TEST(HeavyHitter, ReplacedFlowIsNoLongerContained) {
  HeavyHitterTable t(params(1, 1, 0, 5));
  auto f = flow("10.0.0.1"), g = flow("10.0.0.2");
  t.process(pkt(f, 1, 0));
  while (!t.process(pkt(g, 1, 0)).resident) {
  }
  EXPECT_FALSE(t.contains(f));
  EXPECT_TRUE(t.contains(g));
}

/// Reference step-through driven by an explicit tape of admission draws.
struct RefEntry {
  FlowId flow;
  std::uint64_t count = 0, n = 0, o = 0;
  std::uint32_t last_seq = 0;
  bool used = false;
  friend bool operator==(const RefEntry&, const RefEntry&) = default;
};

TEST(HeavyHitter, TwentyPacketTapeReplay) {
  const std::uint64_t hash_seed = 3, rng_seed = 42;
  auto p = params(2, 2, hash_seed, rng_seed);
  p.min_report_packets = 2;
  p.report_fraction = 0.1;
  HeavyHitterTable t(p);

  // Four prefixes over 2x2 buckets, six flows.
  const FlowId a1 = flow("10.0.0.1"), a2 = flow("10.0.0.2"), b1 = flow("10.0.1.1"), c1 = flow("10.0.2.1"),
               c2 = flow("10.0.2.2"), d1 = flow("10.0.3.1");
  const std::vector<PacketRecord> trace{
      pkt(a1, 100, 0), pkt(a1, 200, 0), pkt(b1, 100, 0), pkt(a1, 150, 0), pkt(c1, 100, 0),
      pkt(a2, 100, 0), pkt(a1, 300, 0), pkt(c2, 100, 0), pkt(d1, 100, 0), pkt(a2, 50, 0),
      pkt(b1, 200, 0), pkt(a1, 250, 0), pkt(c1, 200, 0), pkt(d1, 200, 0), pkt(a2, 25, 0),
      pkt(c2, 50, 0),  pkt(a1, 400, 0), pkt(b1, 300, 0), pkt(d1, 150, 0), pkt(a2, 10, 0),
  };

  // The tape: the table's generator, drawn through the same transform.
  std::mt19937_64 tape_rng(mix64(rng_seed));
  std::vector<double> tape;
  for (int i = 0; i < 64; ++i) tape.push_back(HeavyHitterTable::admission_draw(tape_rng));
  std::size_t next_draw = 0;

  RefEntry ref[2][2];
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& pk = trace[i];
    const Prefix g = prefix_of(pk.flow);
    std::optional<Report> expected_report;
    bool expected_resident = false;

    RefEntry* hit = nullptr;
    RefEntry* victim = nullptr;
    for (std::size_t s = 0; s < 2; ++s) {
      RefEntry& e = ref[s][t.bucket_index(s, g)];
      if (e.used && e.flow == pk.flow) {
        hit = &e;
        break;
      }
      if (!victim || e.count < victim->count) victim = &e;
    }
    if (hit) {
      hit->o += pk.seq < hit->last_seq;
      hit->n += 1;
      hit->count += 1;
      hit->last_seq = pk.seq;
      expected_resident = true;
    } else {
      bool admit = victim->count == 0;
      if (!admit) admit = tape.at(next_draw++) < 1.0 / static_cast<double>(victim->count + 1);
      if (admit) {
        if (victim->used && victim->n >= 2 && static_cast<double>(victim->o) > 0.1 * static_cast<double>(victim->n)) {
          expected_report = Report{prefix_of(victim->flow), victim->n, victim->o, ReportSource::HhEviction};
        }
        *victim = RefEntry{pk.flow, victim->count + 1, 0, 0, pk.seq, true};
        expected_resident = true;
      }
    }

    auto got = t.process(pk);
    ASSERT_EQ(got.resident, expected_resident) << "packet " << i;
    ASSERT_EQ(got.report, expected_report) << "packet " << i;
    for (std::size_t s = 0; s < 2; ++s) {
      for (std::size_t b = 0; b < 2; ++b) {
        const auto& e = t.stage(s)[b];
        const auto& r = ref[s][b];
        ASSERT_EQ(e.occupied, r.used) << "packet " << i;
        if (!r.used) continue;
        ASSERT_EQ(e.flow, r.flow) << "packet " << i;
        ASSERT_EQ(e.count_est, r.count) << "packet " << i;
        ASSERT_EQ(e.n, r.n) << "packet " << i;
        ASSERT_EQ(e.o, r.o) << "packet " << i;
      }
    }
  }
  EXPECT_GT(next_draw, 0u);
}

TEST(HeavyHitter, AtMostDEntriesPerPrefix) {
  for (std::size_t d : {1u, 2u, 3u}) {
    auto trace = testing::random_trace(d, {.packets = 5000, .flows = 100, .prefixes = 6});
    HeavyHitterTable t(params(d, 8, d, d));
    for (const auto& p : trace) {
      t.process(p);
      std::map<Prefix, std::size_t> per_prefix;
      for (std::size_t s = 0; s < t.stage_count(); ++s) {
        for (const auto& e : t.stage(s)) {
          if (e.occupied) ++per_prefix[prefix_of(e.flow)];
        }
      }
      for (const auto& [g, count] : per_prefix) ASSERT_LE(count, d);
    }
  }
}

TEST(HeavyHitter, AccessBudget) {
  for (std::size_t d : {1u, 2u, 4u}) {
    auto trace = testing::random_trace(10 + d, {.packets = 5000, .flows = 100, .prefixes = 30});
    HeavyHitterTable t(params(d, 4, 1, 1));
    for (const auto& p : trace) t.process(p);
    EXPECT_LE(t.counters().max_reads_per_packet, d);
    EXPECT_LE(t.counters().max_writes_per_packet, 1u);
    EXPECT_EQ(t.counters().packets, trace.size());
  }
}

TEST(HeavyHitter, EntryCountersStayOrdered) {
  auto trace = testing::random_trace(12, {.packets = 5000, .flows = 100, .prefixes = 30, .jump_back_prob = 0.3});
  HeavyHitterTable t(params(2, 4, 2, 2));
  for (const auto& p : trace) {
    auto r = t.process(p);
    if (r.report) {
      EXPECT_LE(r.report->o, r.report->n);
      EXPECT_GE(r.report->n, 16u);
    }
  }
  for (std::size_t s = 0; s < t.stage_count(); ++s) {
    for (const auto& e : t.stage(s)) {
      EXPECT_LE(e.o, e.n);
      if (e.occupied) {
        EXPECT_LT(e.n, e.count_est);
      }
    }
  }
}

// A single flow in a one-bucket table is always resident after its first
// packet, so its entry mirrors the oracle minus the first packet.
TEST(HeavyHitter, SingleFlowMatchesOracle) {
  for (auto def : {ReorderDef::Decrease, ReorderDef::Gap}) {
    auto trace = testing::random_trace(13, {.packets = 3000, .flows = 1, .prefixes = 1, .jump_back_prob = 0.2});
    auto p = params(1, 1);
    p.def = def;
    HeavyHitterTable t(p);
    for (const auto& pk : trace) EXPECT_TRUE(t.process(pk).resident);
    auto stats = compute_stats(trace);
    const auto& e = t.stage(0)[0];
    EXPECT_EQ(e.n, stats.flows[0].n_f - 1);
    EXPECT_EQ(e.o, stats.flows[0].o_f[def]);
  }
}

TEST(HeavyHitter, DeterministicGivenSeeds) {
  auto trace = testing::random_trace(14, {.packets = 5000, .flows = 100, .prefixes = 30, .jump_back_prob = 0.3});
  auto run = [&](std::uint64_t rng_seed) {
    auto p = params(2, 4, 1, rng_seed);
    p.min_report_packets = 2;
    HeavyHitterTable t(p);
    std::vector<Report> out;
    std::vector<bool> resident;
    for (const auto& pk : trace) {
      auto r = t.process(pk);
      resident.push_back(r.resident);
      if (r.report) out.push_back(*r.report);
    }
    auto tail = t.flush();
    out.insert(out.end(), tail.begin(), tail.end());
    return std::make_pair(out, resident);
  };
  EXPECT_EQ(run(1), run(1));
  EXPECT_NE(run(1).second, run(2).second);
}

}  // namespace
}  // namespace reordermon
