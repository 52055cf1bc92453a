#include <gtest/gtest.h>

#include <limits>
#include <map>
#include <set>

#include "fixtures.hpp"
#include "reference.hpp"
#include "reordermon/flow_sampler.hpp"
#include "reordermon/oracle.hpp"
#include "reordermon/synth.hpp"

namespace reordermon {
namespace {

using testing::flow;
using testing::pkt;

SamplerParams params(std::size_t buckets, double T = 1.0, std::uint64_t C = 16, std::uint64_t R = 1,
                     bool report_all = false, std::uint64_t seed = 0) {
  SamplerParams p;
  p.buckets = buckets;
  p.staleness_seconds = T;
  p.count_threshold = C;
  p.report_threshold = R;
  p.report_all = report_all;
  p.hash_seed = seed;
  return p;
}

/// First seed under which the given prefixes land in pairwise distinct buckets.
std::uint64_t injective_seed(const std::vector<Prefix>& prefixes, std::size_t buckets) {
  for (std::uint64_t seed = 0;; ++seed) {
    FlowSampler s(params(buckets, 1.0, 16, 1, false, seed));
    std::set<std::size_t> used;
    for (auto g : prefixes) used.insert(s.bucket_index(g));
    if (used.size() == prefixes.size()) return seed;
  }
}

TEST(FlowSampler, RejectsInvalidParams) {
  EXPECT_THROW(FlowSampler(params(0)), DetectorConfigError);
  EXPECT_THROW(FlowSampler(params(4, 0.0)), DetectorConfigError);
  EXPECT_THROW(FlowSampler(params(4, 1.0, 0)), DetectorConfigError);
  EXPECT_THROW(FlowSampler(params(4, 1.0, 16, 0)), DetectorConfigError);
  auto p = params(4);
  p.def = ReorderDef::BelowMax;
  EXPECT_THROW(FlowSampler{p}, DetectorConfigError);
}

TEST(FlowSampler, EmptyBucketAdmits) {
  FlowSampler s(params(1));
  auto f = flow("10.0.0.1");
  EXPECT_FALSE(s.process(pkt(f, 1000, 0.5)).has_value());
  const auto& b = s.buckets()[0];
  EXPECT_TRUE(b.occupied);
  EXPECT_EQ(b.flow, f);
  EXPECT_EQ(b.seq.last_seq, 1000u);
  EXPECT_EQ(b.seq.expected_next, 1100u);
  EXPECT_EQ(b.last_ts, 0.5);
  EXPECT_EQ(b.n, 0u);
  EXPECT_EQ(b.o, 0u);
}

TEST(FlowSampler, ResidentFlowUpdates) {
  FlowSampler s(params(1));
  auto f = flow("10.0.0.1");
  s.process(pkt(f, 1000, 0.0));
  EXPECT_FALSE(s.process(pkt(f, 900, 0.1)).has_value());
  const auto& b = s.buckets()[0];
  EXPECT_EQ(b.n, 1u);
  EXPECT_EQ(b.o, 1u);
  EXPECT_EQ(b.last_ts, 0.1);
  EXPECT_EQ(b.seq.last_seq, 900u);
}

TEST(FlowSampler, HeavyResidentIsReportedOnCollision) {
  FlowSampler s(params(1, 1.0, 16, 1));
  auto f = flow("10.0.0.1"), g = flow("10.0.0.2");
  s.process(pkt(f, 1000, 0.0));
  s.process(pkt(f, 900, 0.01));
  s.process(pkt(f, 800, 0.02));
  s.process(pkt(f, 900, 0.03));  // n=3, o=2
  auto r = s.process(pkt(g, 5, 0.04));
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(*r, (Report{prefix_of(f), 3, 2, ReportSource::ArrayEviction}));
  EXPECT_EQ(s.buckets()[0].flow, g);
  EXPECT_EQ(s.buckets()[0].n, 0u);
}

TEST(FlowSampler, CollisionWithoutConditionIsIgnored) {
  FlowSampler s(params(1, 1.0, 16, 1));
  auto f = flow("10.0.0.1"), g = flow("10.0.0.2");
  s.process(pkt(f, 1000, 0.0));
  for (int i = 1; i <= 3; ++i) s.process(pkt(f, 1000 + 100 * i, 0.1 * i));
  const auto before = s.buckets()[0];
  EXPECT_FALSE(s.process(pkt(g, 5, 0.3 + 1.0)).has_value());  // gap exactly T
  const auto& after = s.buckets()[0];
  EXPECT_EQ(after.flow, f);
  EXPECT_EQ(after.n, before.n);
  EXPECT_EQ(after.last_ts, before.last_ts);
}

TEST(FlowSampler, StaleResidentIsReplacedSilently) {
  FlowSampler s(params(1, 1.0, 16, 1));
  auto f = flow("10.0.0.1"), g = flow("10.0.0.2");
  s.process(pkt(f, 1000, 0.0));
  s.process(pkt(f, 900, 0.1));  // o=1, not above R
  EXPECT_FALSE(s.process(pkt(g, 5, 1.2)).has_value());
  EXPECT_EQ(s.buckets()[0].flow, g);
}

TEST(FlowSampler, HoggingResidentIsReplacedAfterMoreThanCPackets) {
  FlowSampler s(params(1, 100.0, 2, 1));
  auto f = flow("10.0.0.1"), g = flow("10.0.0.2");
  s.process(pkt(f, 1000, 0.0));
  s.process(pkt(f, 1100, 0.0));
  s.process(pkt(f, 1200, 0.0));  // n = 2 = C
  s.process(pkt(g, 5, 0.0));
  EXPECT_EQ(s.buckets()[0].flow, f);
  s.process(pkt(f, 1300, 0.0));  // n = 3 > C
  s.process(pkt(g, 5, 0.0));
  EXPECT_EQ(s.buckets()[0].flow, g);
}

TEST(FlowSampler, ReportAllReportsEveryEvictionWithPackets) {
  FlowSampler s(params(1, 1.0, 16, 1, true));
  auto f = flow("10.0.0.1"), g = flow("10.0.0.2"), h = flow("10.0.0.3");
  s.process(pkt(f, 1000, 0.0));
  s.process(pkt(f, 1100, 0.1));
  auto r = s.process(pkt(g, 5, 2.0));
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(*r, (Report{prefix_of(f), 1, 0, ReportSource::ArrayEviction}));
  // g has n = 0 when it goes stale: replaced without a report.
  EXPECT_FALSE(s.process(pkt(h, 5, 4.0)).has_value());
}

TEST(FlowSampler, FlushDefaultMode) {
  FlowSampler s(params(1, 1.0, 16, 1));
  EXPECT_TRUE(s.flush().empty());
  auto f = flow("10.0.0.1");
  s.process(pkt(f, 1000, 0.0));
  for (std::uint32_t seq : {900u, 800u, 900u, 1000u, 1100u}) s.process(pkt(f, seq, 0.0));  // n=5, o=2
  auto reports = s.flush();
  ASSERT_EQ(reports.size(), 1u);
  EXPECT_EQ(reports[0], (Report{prefix_of(f), 5, 2, ReportSource::ArrayFlush}));
  EXPECT_FALSE(s.buckets()[0].occupied);
  EXPECT_TRUE(s.flush().empty());
}

TEST(FlowSampler, FlushReportAll) {
  FlowSampler s(params(1, 1.0, 16, 1, true));
  auto f = flow("10.0.0.1");
  s.process(pkt(f, 1000, 0.0));
  for (int i = 1; i <= 5; ++i) s.process(pkt(f, 1000 + 100 * i, 0.0));
  auto reports = s.flush();
  ASSERT_EQ(reports.size(), 1u);
  EXPECT_EQ(reports[0], (Report{prefix_of(f), 5, 0, ReportSource::ArrayFlush}));
}

// Six packets, two prefixes in distinct buckets, T = 1 s, C = 2, R = 1.
TEST(FlowSampler, HandTrace) {
  auto a1 = flow("10.0.0.1"), a2 = flow("10.0.0.2"), b1 = flow("10.0.1.1");
  const std::vector<PacketRecord> trace{
      pkt(a1, 1000, 0.0),  // admit a1
      pkt(a1, 900, 0.1),   // n=1 o=1
      pkt(a1, 800, 0.2),   // n=2 o=2
      pkt(b1, 5000, 0.3),  // admit b1
      pkt(a2, 10, 0.4),    // o=2 > R: report (2, 2), admit a2
      pkt(b1, 5100, 0.5),  // n=1 o=0
  };
  const auto seed = injective_seed({prefix_of(a1), prefix_of(b1)}, 2);

  for (bool report_all : {false, true}) {
    FlowSampler s(params(2, 1.0, 2, 1, report_all, seed));
    std::vector<std::optional<Report>> got;
    for (const auto& p : trace) got.push_back(s.process(p));
    for (std::size_t i = 0; i < got.size(); ++i) {
      if (i == 4) {
        ASSERT_TRUE(got[i].has_value());
        EXPECT_EQ(*got[i], (Report{prefix_of(a1), 2, 2, ReportSource::ArrayEviction}));
      } else {
        EXPECT_FALSE(got[i].has_value()) << "packet " << i;
      }
    }
    auto tail = s.flush();
    if (report_all) {
      ASSERT_EQ(tail.size(), 1u);
      EXPECT_EQ(tail[0], (Report{prefix_of(b1), 1, 0, ReportSource::ArrayFlush}));
    } else {
      EXPECT_TRUE(tail.empty());
    }

    // The reference step-through agrees.
    FlowSampler probe(params(2, 1.0, 2, 1, report_all, seed));
    testing::ReferenceSampler ref([&](Prefix g) { return probe.bucket_index(g); }, 1.0, 2, 1, 1, report_all);
    for (std::size_t i = 0; i < trace.size(); ++i) EXPECT_EQ(ref.step(trace[i]), got[i]);
    EXPECT_EQ(ref.flush(), tail);
  }
}

struct Case {
  std::size_t buckets;
  double T;
  std::uint64_t C, R;
  bool report_all;
  ReorderDef def;
};

TEST(FlowSampler, MatchesReferenceOnRandomTraces) {
  const std::vector<Case> cases{
      {1, 1e-4, 4, 1, false, ReorderDef::Decrease}, {3, 1e-4, 2, 1, true, ReorderDef::Decrease},
      {7, 5e-4, 16, 2, false, ReorderDef::Gap},     {7, 1e-5, 1, 1, true, ReorderDef::Gap},
      {64, 1e-3, 8, 1, false, ReorderDef::Decrease},
  };
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto trace = testing::random_trace(seed, {.packets = 3000, .flows = 40, .prefixes = 12});
    for (const auto& c : cases) {
      auto p = params(c.buckets, c.T, c.C, c.R, c.report_all, seed);
      p.def = c.def;
      FlowSampler s(p);
      testing::ReferenceSampler ref([&](Prefix g) { return s.bucket_index(g); }, c.T, c.C, c.R,
                                    static_cast<int>(c.def), c.report_all);
      for (const auto& pk : trace) ASSERT_EQ(s.process(pk), ref.step(pk));
      ASSERT_EQ(s.flush(), ref.flush());
    }
  }
}

TEST(FlowSampler, RecordInvariantsHold) {
  auto trace = testing::random_trace(5, {.packets = 5000, .flows = 80, .prefixes = 20});
  FlowSampler s(params(8, 1e-4, 8, 1, true, 3));
  for (const auto& p : trace) {
    if (auto r = s.process(p)) {
      EXPECT_GE(r->n, 1u);
      EXPECT_LE(r->o, r->n);
    }
    const auto& b = s.buckets()[s.bucket_index(prefix_of(p.flow))];
    EXPECT_LE(b.o, b.n);
    if (b.flow == p.flow) {
      EXPECT_EQ(b.last_ts, p.ts);
    }
  }
  EXPECT_EQ(s.buckets().size(), 8u);
}

TEST(FlowSampler, AtMostOneAccessPerPacket) {
  auto trace = testing::random_trace(6, {.packets = 5000, .flows = 80, .prefixes = 20});
  FlowSampler s(params(4, 1e-4, 4, 1, true, 1));
  for (const auto& p : trace) s.process(p);
  const auto& c = s.counters();
  EXPECT_EQ(c.packets, trace.size());
  EXPECT_EQ(c.reads, trace.size());
  EXPECT_LE(c.max_reads_per_packet, 1u);
  EXPECT_LE(c.max_writes_per_packet, 1u);
  EXPECT_LE(c.writes, c.reads);
}

TEST(FlowSampler, DeterministicReportStream) {
  auto trace = testing::random_trace(7, {.packets = 4000, .flows = 60, .prefixes = 15});
  auto run = [&] {
    FlowSampler s(params(5, 1e-4, 4, 1, true, 9));
    std::vector<Report> out;
    for (const auto& p : trace) {
      if (auto r = s.process(p)) out.push_back(*r);
    }
    auto tail = s.flush();
    out.insert(out.end(), tail.begin(), tail.end());
    return out;
  };
  EXPECT_EQ(run(), run());
}

// One flow per prefix, every prefix in its own bucket, T and C out of reach:
// with report_all the summed (n, o) per prefix is the oracle's (N_g - 1, O_g).
TEST(FlowSampler, NoCollisionEquivalence) {
  for (auto def : {ReorderDef::Decrease, ReorderDef::Gap}) {
    for (std::uint64_t trial = 0; trial < 10; ++trial) {
      auto trace = testing::random_trace(100 + trial, {.packets = 3000, .flows = 12, .prefixes = 1000});
      // Force one flow per prefix.
      std::map<Prefix, FlowId> owner;
      std::vector<PacketRecord> kept;
      for (const auto& p : trace) {
        auto [it, fresh] = owner.try_emplace(prefix_of(p.flow), p.flow);
        if (it->second == p.flow) kept.push_back(p);
      }
      std::vector<Prefix> prefixes;
      for (const auto& [g, f] : owner) prefixes.push_back(g);
      const std::size_t B = 4 * prefixes.size();
      auto p = params(B, std::numeric_limits<double>::infinity(), std::numeric_limits<std::uint64_t>::max(), 1,
                      true, injective_seed(prefixes, B));
      p.def = def;
      FlowSampler s(p);
      std::vector<Report> reports;
      for (const auto& pk : kept) {
        if (auto r = s.process(pk)) reports.push_back(*r);
      }
      EXPECT_TRUE(reports.empty());
      reports = s.flush();

      std::map<Prefix, std::pair<std::uint64_t, std::uint64_t>> sums;
      for (const auto& r : reports) {
        sums[r.prefix].first += r.n;
        sums[r.prefix].second += r.o;
      }
      auto stats = compute_stats(kept);
      for (const auto& [g, ps] : stats.prefixes) {
        const auto expected = std::make_pair(ps.n_g - 1, ps.o_g[def]);
        if (expected.first == 0) {
          EXPECT_EQ(sums.count(g), 0u);
        } else {
          EXPECT_EQ(sums[g], expected) << to_string(g);
        }
      }
    }
  }
}

TEST(FlowSampler, LowerRNeverReportsLess) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto trace = testing::random_trace(seed, {.packets = 4000, .flows = 50, .prefixes = 10, .jump_back_prob = 0.3});
    std::size_t previous = std::numeric_limits<std::size_t>::max();
    for (std::uint64_t R = 1; R <= 6; ++R) {
      FlowSampler s(params(4, 2e-4, 8, R, false, seed));
      std::size_t count = 0;
      for (const auto& p : trace) count += s.process(p).has_value();
      count += s.flush().size();
      EXPECT_LE(count, previous) << "seed " << seed << " R " << R;
      previous = count;
    }
  }
}

TEST(FlowSampler, LowerRNeverReportsLessOnSyntheticTrace) {
  SynthConfig cfg;
  cfg.n_prefixes = 500;
  auto trace = generate_synthetic(cfg).packets;
  std::size_t previous = std::numeric_limits<std::size_t>::max();
  for (std::uint64_t R = 1; R <= 4; ++R) {
    FlowSampler s(params(64, 0x1p-15, 16, R, false, 1));
    std::size_t count = 0;
    for (const auto& p : trace) count += s.process(p).has_value();
    count += s.flush().size();
    EXPECT_LE(count, previous) << "R " << R;
    previous = count;
  }
}

}  // namespace
}  // namespace reordermon
