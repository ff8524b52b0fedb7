#include <gtest/gtest.h>

#include <filesystem>
#include <numeric>
#include <sstream>

#include "snapsearch/common/error.h"
#include "snapsearch/datacentre/fleet.h"
#include "snapsearch/datacentre/manifest.h"
#include "snapsearch/datacentre/routing.h"
#include "snapsearch/datacentre/topology.h"
#include "support/generators.h"
#include "support/oracles.h"
#include "support/scenarios.h"

namespace snapsearch {
namespace {

Date d(const char* s) { return Date::parse(s); }

Document doc(DocId id, std::string text, const char* date) { return {id, "u", d(date), std::move(text)}; }

// Year-sized shards 2021..2026, labelled by the year of their midpoint.
std::vector<Document> fig20_corpus() {
  std::vector<Document> docs;
  DocId id = 1;
  for (int year = 2021; year <= 2026; ++year) {
    for (int m = 2; m <= 11; m += 3) {
      docs.push_back({id, "u", Date::from_ymd(year, static_cast<unsigned>(m), 15),
                      "year" + std::to_string(year) + " common text " + std::to_string(id)});
      ++id;
    }
  }
  return docs;
}

int label(const ShardTopology& t, ShardId id) {
  const DateRange r = t.ranges().at(id);
  return r.start.plus_days(r.start.days_until(r.end) / 2).year();
}

std::set<int> labels(const ShardTopology& t, const std::set<ShardId>& ids) {
  std::set<int> out;
  for (ShardId id : ids) out.insert(label(t, id));
  return out;
}

TEST(AssignShardTest, Examples) {
  EXPECT_EQ(assign_shard(doc(1, "", "1990-01-01"), 365), 0u);
  EXPECT_EQ(assign_shard(doc(1, "", "2026-03-01"), 365), 36u);
  EXPECT_EQ(bucket_of(d("1990-12-31"), 365), 0u);
  EXPECT_EQ(bucket_of(d("1991-01-01"), 365), 1u);  // day 365 opens bucket 1
  EXPECT_THROW(bucket_of(d("2000-01-01"), 0), ParameterError);
}

TEST(AssignShardTest, PartitionsCorpus) {
  auto rng = make_rng(3);
  testing::CorpusShape shape;
  shape.docs = 2000;
  const auto docs = testing::generate_corpus(shape, rng);
  for (std::uint32_t g : {1u, 30u, 365u, 1000u}) {
    const auto t = ShardTopology::date_sharded(docs, g);
    std::size_t total = 0;
    std::set<DocId> seen;
    for (const auto& [id, s] : t.shards()) {
      for (DocId x : s.doc_ids()) {
        EXPECT_TRUE(seen.insert(x).second);
        ++total;
      }
      for (const auto& e : s.index.doc_table()) EXPECT_TRUE(s.range.contains(e.info.modified_date));
    }
    EXPECT_EQ(total, docs.size());
    // Ranges are contiguous.
    std::optional<Date> prev_end;
    for (const auto& [id, s] : t.shards()) {
      if (prev_end) EXPECT_EQ(*prev_end, s.range.start);
      prev_end = s.range.end;
    }
  }
}

TEST(ShardsAfterTest, Fig20Scenario) {
  const auto t = ShardTopology::date_sharded(fig20_corpus(), 365);
  ASSERT_EQ(t.shards().size(), 6u);
  EXPECT_EQ(labels(t, shards_after(d("2025-12-31"), t)), (std::set<int>{2026}));
  EXPECT_EQ(labels(t, shards_after(d("2023-12-31"), t)), (std::set<int>{2024, 2025, 2026}));
  EXPECT_EQ(shards_after(kEpoch, t).size(), 6u);
}

TEST(ShardsAfterTest, OlderSnapshotsSelectSupersets) {
  const auto t = ShardTopology::date_sharded(fig20_corpus(), 91);
  std::set<ShardId> prev;
  for (Date s = d("2027-01-01"); s >= d("2020-01-01"); s = s.plus_days(-13)) {
    const auto cur = shards_after(s, t);
    EXPECT_TRUE(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
    prev = cur;
  }
}

TEST(ShardsAfterTest, RandomModeUnsupported) {
  const auto t = ShardTopology::random_sharded(fig20_corpus(), 3, 1);
  EXPECT_THROW(shards_after(d("2025-12-31"), t), UnsupportedModeError);
}

TEST(GlobalStatsTest, EqualsMonolithicStats) {
  const std::vector<Document> one = {doc(1, "a b", "2001-01-01")};
  const auto single = ShardTopology::date_sharded(one, 365);
  EXPECT_EQ(global_stats(single), build_index(one).stats());

  auto rng = make_rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    testing::CorpusShape shape;
    shape.docs = 1 + uniform_index(rng, 1500);
    const auto docs = testing::generate_corpus(shape, rng);
    const CollectionStats want = build_index(docs).stats();
    EXPECT_EQ(global_stats(ShardTopology::date_sharded(docs, 1 + uniform_index(rng, 700))), want);
    EXPECT_EQ(global_stats(ShardTopology::random_sharded(docs, 1 + uniform_index(rng, 9), trial)), want);
    // Client-reported stats have no say.
    CollectionStats bogus;
    bogus.N = 12345;
    EXPECT_EQ(global_stats(ShardTopology::date_sharded(docs, 365), &bogus), want);
  }
}

TEST(SupersedeTest, Examples) {
  EXPECT_TRUE(supersede_since(d("2001-01-01"), std::vector<Change>{}).empty());
  std::vector<Change> log = {make_add(doc(7, "x", "2000-06-01")), make_modify(doc(7, "y", "2001-03-01"))};
  EXPECT_EQ(supersede_since(d("2001-01-01"), log), (SupersedeSet{7}));
  EXPECT_TRUE(supersede_since(d("2001-03-01"), log).empty());
  std::vector<Change> del = {make_add(doc(3, "x", "2000-06-01")), make_delete(3, d("2002-01-01")),
                             make_add(doc(3, "z", "2003-01-01"))};
  EXPECT_EQ(supersede_since(d("2001-01-01"), del), (SupersedeSet{3}));
}

TEST(SupersedeTest, IndexedLookupMatchesScan) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto s = testing::make_snapshot_scenario(seed);
    const ChangeDates dates(s.changes);
    auto rng = make_rng(seed);
    for (int i = 0; i < 50; ++i) {
      const Date snap = d("2014-06-01").plus_days(static_cast<std::int32_t>(uniform_index(rng, 4000)));
      EXPECT_EQ(dates.since(snap), supersede_since(snap, s.changes));
    }
  }
}

TEST(MergeTest, Basics) {
  EXPECT_TRUE(merge(std::vector<SearchResult>{{}, {}}, 5).empty());
  const SearchResult one = {{4, 2.0}, {1, 1.0}};
  EXPECT_EQ(merge(std::vector<SearchResult>{one, {}}, 10), one);
  EXPECT_EQ(merge(std::vector<SearchResult>{one}, 1), (SearchResult{{4, 2.0}}));
  EXPECT_THROW(merge(std::vector<SearchResult>{one, {{4, 3.0}}}, 5), IntegrityError);
}

TEST(MergeTest, MatchesConcatSortTruncate) {
  auto rng = make_rng(8);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<SearchResult> parts(1 + uniform_index(rng, 5));
    SearchResult all;
    DocId next = 0;
    for (auto& p : parts) {
      const std::size_t n = uniform_index(rng, 30);
      for (std::size_t i = 0; i < n; ++i) {
        // Coarse scores so ties are common.
        p.push_back({next, static_cast<double>(uniform_index(rng, 8)) / 4.0});
        next += 1 + uniform_index(rng, 3);
      }
      std::sort(p.begin(), p.end(), ranks_before);
      all.insert(all.end(), p.begin(), p.end());
    }
    std::shuffle(parts.begin(), parts.end(), rng);
    const std::size_t k = 1 + uniform_index(rng, 60);
    std::stable_sort(all.begin(), all.end(), ranks_before);
    if (all.size() > k) all.resize(k);
    EXPECT_EQ(merge(parts, k), all);
  }
}

void expect_scenario_equivalent(const testing::SnapshotScenario& s, int queries, std::uint64_t seed) {
  const QueryRouter router(s.topology, s.changes);
  auto rng = make_rng(seed, 2);
  for (int i = 0; i < queries; ++i) {
    const auto q = (*s.queries)(rng);
    const std::size_t k = std::array<std::size_t, 4>{1, 10, 100, s.current_docs.size() + 1}[uniform_index(rng, 4)];
    ASSERT_EQ(router.execute(q, k, s.client_index, s.snapshot_date), s.oracle->search(q, k))
        << "seed " << seed << " query " << i;
  }
}

TEST(ExecuteQueryTest, MatchesMonolithicOracle) {
  for (std::uint64_t seed = 100; seed < 112; ++seed) {
    const auto s = testing::make_snapshot_scenario(seed);
    expect_scenario_equivalent(s, 150, seed);
  }
}

TEST(ExecuteQueryTest, CurrentSnapshotTouchesOnlyNewestBucket) {
  const auto docs = fig20_corpus();
  const auto t = ShardTopology::date_sharded(docs, 365);
  const Index client = build_index(docs);
  const QueryRouter router(t, std::vector<Change>{});
  const std::vector<std::string> q = {"common"};
  QueryCost cost;
  const auto r = router.execute(q, 100, client, d("2026-12-01"), &cost);
  EXPECT_EQ(cost.shards_touched, 1u);
  EXPECT_EQ(r, search(build_index(docs), q, 100));
}

TEST(ExecuteQueryTest, EpochSnapshotIsCentralized) {
  const auto docs = fig20_corpus();
  const auto t = ShardTopology::date_sharded(docs, 365);
  const Index empty = build_index({});
  const std::vector<std::string> q = {"common", "year2024"};
  QueryCost cost;
  const auto r = QueryRouter(t, std::vector<Change>{}).execute(q, 100, empty, kEpoch, &cost);
  EXPECT_EQ(cost.shards_touched, t.shards().size());
  EXPECT_EQ(r, search(build_index(docs), q, 100));
}

TEST(ExecuteQueryTest, MissingShardIsAnError) {
  const auto docs = fig20_corpus();
  auto t = ShardTopology::date_sharded(docs, 365);
  t.set_available(36, false);
  const Index client = build_index(docs);
  const std::vector<std::string> q = {"common"};
  EXPECT_THROW(QueryRouter(t, std::vector<Change>{}).execute(q, 10, client, d("2025-12-31")), ShardUnavailableError);
}

TEST(ShedLoadTest, Behaviour) {
  auto rng = make_rng(4);
  testing::CorpusShape shape;
  shape.docs = 3000;
  shape.vocabulary = 400;
  const auto docs = testing::generate_corpus(shape, rng);
  const auto t = ShardTopology::random_sharded(docs, 10, 9);
  const std::vector<std::string> q = {"a", "b"};
  const QueryPlan full = plan_query(q, kEpoch, t);
  EXPECT_FALSE(full.include_local);
  EXPECT_EQ(full.selected_shards.size(), 10u);
  EXPECT_EQ(shed_load(full, 1.0, 3), full);
  EXPECT_EQ(shed_load(full, 1e-9, 3).selected_shards.size(), 1u);
  EXPECT_EQ(shed_load(full, 0.3, 3).selected_shards.size(), 3u);
  EXPECT_EQ(shed_load(full, 0.3, 3), shed_load(full, 0.3, 3));
  EXPECT_THROW(shed_load(full, 0.0, 3), ParameterError);
  EXPECT_THROW(shed_load(full, 1.5, 3), ParameterError);

  const auto dated = ShardTopology::date_sharded(docs, 365);
  EXPECT_THROW(shed_load(plan_query(q, kEpoch, dated), 0.5, 1), UnsupportedModeError);
}

TEST(ShedLoadTest, RecallFallsAsShardsAreShed) {
  auto rng = make_rng(6);
  testing::CorpusShape shape;
  shape.docs = 4000;
  shape.vocabulary = 2000;
  const auto docs = testing::generate_corpus(shape, rng);
  const auto t = ShardTopology::random_sharded(docs, 16, 2);
  const testing::QueryGenerator gen(testing::make_vocabulary(shape.vocabulary), 1.0);
  const std::size_t k = 20;
  std::vector<double> recall;
  std::vector<std::vector<std::string>> queries;
  for (int i = 0; i < 300; ++i) queries.push_back(gen(rng));
  for (double keep : {1.0, 0.75, 0.5, 0.25, 0.0625}) {
    double sum = 0.0;
    int counted = 0;
    for (std::size_t i = 0; i < queries.size(); ++i) {
      const QueryPlan full = plan_query(queries[i], kEpoch, t);
      const auto want = execute_plan(full, k, nullptr, t, {});
      if (want.empty()) continue;
      const auto got = execute_plan(shed_load(full, keep, i), k, nullptr, t, {});
      std::set<DocId> truth;
      for (const auto& h : want) truth.insert(h.doc_id);
      std::size_t hit = 0;
      for (const auto& h : got) hit += truth.count(h.doc_id);
      sum += static_cast<double>(hit) / static_cast<double>(want.size());
      ++counted;
    }
    recall.push_back(sum / counted);
  }
  EXPECT_DOUBLE_EQ(recall.front(), 1.0);
  for (std::size_t i = 1; i < recall.size(); ++i) EXPECT_LE(recall[i], recall[i - 1]);
}

TEST(FleetTest, WeightsMustSumToOne) {
  EXPECT_THROW(FleetDistribution({{kEpoch, 0.5}}), ParameterError);
  EXPECT_THROW(FleetDistribution({{kEpoch, 1.5}, {kEpoch, -0.5}}), ParameterError);
  EXPECT_NO_THROW(FleetDistribution({{kEpoch, 0.25}, {kEpoch, 0.75}}));
  std::vector<Date> dates(7, kEpoch);
  EXPECT_NO_THROW(FleetDistribution::uniform(dates));
}

TEST(ShardLoadTest, Fig20TwoClients) {
  const auto t = ShardTopology::date_sharded(fig20_corpus(), 365);
  const std::vector<Date> clients = {d("2025-12-31"), d("2023-12-31")};
  const auto loads = expected_shard_load(FleetDistribution::uniform(clients), t, 2.0);
  std::map<int, double> by_year;
  for (const auto& [id, load] : loads) by_year[label(t, id)] = load;
  EXPECT_EQ(by_year, (std::map<int, double>{{2021, 0}, {2022, 0}, {2023, 0}, {2024, 1}, {2025, 1}, {2026, 2}}));
}

TEST(ShardLoadTest, CurrentFleetLoadsNewestOnly) {
  const auto t = ShardTopology::date_sharded(fig20_corpus(), 365);
  const std::vector<Date> clients(5, d("2026-11-30"));
  const auto loads = expected_shard_load(FleetDistribution::uniform(clients), t, 3.0);
  for (const auto& [id, load] : loads) EXPECT_EQ(load, id == 36 ? 3.0 : 0.0);
}

TEST(ShardLoadTest, MatchesEnumeration) {
  const auto t = ShardTopology::date_sharded(fig20_corpus(), 60);
  auto rng = make_rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Date> clients;
    const std::size_t n = 1 + uniform_index(rng, 40);
    for (std::size_t i = 0; i < n; ++i) clients.push_back(d("2020-06-01").plus_days(uniform_index(rng, 2500)));
    const double rate = 1.0 + uniform_index(rng, 100);
    const auto loads = expected_shard_load(FleetDistribution::uniform(clients), t, rate);
    for (const auto& [id, load] : loads) {
      // Each client sends rate / n queries; count those routed to this shard.
      double routed = 0.0;
      for (Date c : clients) routed += shards_after(c, t).count(id) ? rate / n : 0.0;
      EXPECT_NEAR(load, routed, 1e-9 * rate);
    }
  }
}

TEST(PlanReplicasTest, Examples) {
  EXPECT_EQ(plan_replicas({{1, 2.0}, {2, 2.0}, {3, 2.0}}, 9), (ReplicaAllocation{{1, 3}, {2, 3}, {3, 3}}));
  EXPECT_EQ(plan_replicas({{1, 0.0}, {2, 5.0}, {3, 0.0}}, 7), (ReplicaAllocation{{1, 0}, {2, 7}, {3, 0}}));
  // Equal remainders go to the newer shard.
  EXPECT_EQ(plan_replicas({{1, 1.0}, {2, 1.0}}, 3), (ReplicaAllocation{{1, 1}, {2, 2}}));
  // The floor of one replica for loaded shards.
  EXPECT_EQ(plan_replicas({{1, 1.0}, {2, 1000.0}}, 4), (ReplicaAllocation{{1, 1}, {2, 3}}));
  EXPECT_THROW(plan_replicas({{1, 1.0}, {2, 1.0}}, 1), InfeasibleBudgetError);
  EXPECT_THROW(plan_replicas({{1, 0.0}}, 2), InfeasibleBudgetError);
  EXPECT_EQ(plan_replicas({{1, 0.0}}, 0), (ReplicaAllocation{{1, 0}}));
}

TEST(PlanReplicasTest, RandomLoadsProperties) {
  auto rng = make_rng(13);
  for (int trial = 0; trial < 2000; ++trial) {
    ShardLoads loads;
    const std::size_t n = 1 + uniform_index(rng, 30);
    std::size_t positive = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double l = uniform_index(rng, 4) == 0 ? 0.0 : uniform_unit(rng) * 100.0;
      loads[i] = l;
      positive += l > 0;
    }
    if (positive == 0) continue;
    const std::uint64_t budget = positive + uniform_index(rng, 200);
    const auto alloc = plan_replicas(loads, budget);
    const auto targets = replica_targets(loads, budget);
    std::uint64_t sum = 0;
    bool floor_binds = false;
    double total = 0.0;
    for (const auto& [id, l] : loads) total += l;
    for (const auto& [id, l] : loads) {
      sum += alloc.at(id);
      if (l > 0) EXPECT_GE(alloc.at(id), 1u);
      if (l == 0) EXPECT_EQ(alloc.at(id), 0u);
      EXPECT_LT(std::fabs(static_cast<double>(alloc.at(id)) - targets.at(id)), 1.0);
      floor_binds |= l > 0 && budget * l / total < 1.0;
    }
    EXPECT_EQ(sum, budget);
    if (!floor_binds) {
      for (const auto& [id, l] : loads) {
        EXPECT_LT(std::fabs(static_cast<double>(alloc.at(id)) - budget * l / total), 1.0);
      }
    }
    EXPECT_EQ(plan_replicas(loads, budget), alloc);
  }
}

TEST(RetireShardsTest, Examples) {
  const auto t = ShardTopology::date_sharded(fig20_corpus(), 365);
  const std::vector<Date> current(3, d("2026-11-30"));
  const auto retired = retire_shards(FleetDistribution::uniform(current), t);
  EXPECT_EQ(retired.size(), 5u);
  EXPECT_FALSE(retired.count(36));
  const std::vector<Date> epoch = {kEpoch, d("2026-11-30")};
  EXPECT_TRUE(retire_shards(FleetDistribution::uniform(epoch), t).empty());
}

TEST(RetireShardsTest, ComplementOfOldestRouting) {
  const auto t = ShardTopology::date_sharded(fig20_corpus(), 45);
  auto rng = make_rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Date> clients;
    const std::size_t n = 1 + uniform_index(rng, 20);
    for (std::size_t i = 0; i < n; ++i) clients.push_back(d("2020-01-01").plus_days(uniform_index(rng, 2700)));
    const FleetDistribution fleet = FleetDistribution::uniform(clients);
    const auto keep = shards_after(fleet.oldest(), t);
    std::set<ShardId> complement;
    for (const auto& [id, s] : t.shards()) {
      if (!keep.count(id)) complement.insert(id);
    }
    EXPECT_EQ(retire_shards(fleet, t), complement);
  }
}

TEST(RetireShardsTest, RetirementKeepsResultsForCurrentFleet) {
  for (std::uint64_t seed = 200; seed < 206; ++seed) {
    auto s = testing::make_snapshot_scenario(seed);
    const std::vector<Date> fleet_dates = {s.snapshot_date};
    const auto retired = retire_shards(FleetDistribution::uniform(fleet_dates), s.topology);
    const CollectionStats before = s.topology.stats();
    s.topology.retire(retired);
    EXPECT_EQ(s.topology.stats(), before);
    for (ShardId id : retired) EXPECT_FALSE(s.topology.has_shard(id));
    expect_scenario_equivalent(s, 100, seed);
  }
}

TEST(ManifestTest, RoundTripWithRetiredShards) {
  const auto dir = std::filesystem::temp_directory_path() / "snapsearch_manifest_test";
  std::filesystem::remove_all(dir);
  auto t = ShardTopology::date_sharded(fig20_corpus(), 365);
  t.retire({31, 32});
  const auto path = write_manifest(t, dir);
  const auto back = read_manifest(path);
  EXPECT_EQ(back.stats(), t.stats());
  EXPECT_EQ(back.ranges(), t.ranges());
  EXPECT_EQ(back.retired(), t.retired());
  for (const auto& [id, s] : t.shards()) EXPECT_EQ(back.shards().at(id).index, s.index);

  std::ostringstream csv;
  const std::vector<Date> clients = {d("2025-12-31"), d("2023-12-31")};
  const auto loads = expected_shard_load(FleetDistribution::uniform(clients), t, 2.0);
  write_routing_csv(csv, t, loads, plan_replicas(loads, 8));
  EXPECT_EQ(csv.str(),
            "shard_id,range_start,range_end,expected_load,replicas\n"
            "33,2022-12-24,2023-12-24,0,0\n"
            "34,2023-12-24,2024-12-23,1,2\n"
            "35,2024-12-23,2025-12-23,1,2\n"
            "36,2025-12-23,2026-12-23,2,4\n");
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace snapsearch
