#include <doctest.h>

#include "dris/harness.hpp"

using namespace dris;

namespace {

ScenarioConfig tiny_scenario() {
    ScenarioConfig cfg;
    cfg.corpus.domains = 2;
    cfg.corpus.sites_per_domain = 2;
    cfg.corpus.pages_per_site = 3;
    cfg.corpus.vocab_size = 40;
    cfg.seed = 7;
    cfg.queries = {{"w0"}, {"w1", "w2"}};
    cfg.generated_queries.count = 3;
    return cfg;
}

}  // namespace

TEST_CASE("scenario config round-trips through JSON") {
    ScenarioConfig cfg = tiny_scenario();
    cfg.corpus.parent_zones = {"edu.cn", "ac.cn"};
    cfg.transport = Transport::loopback;
    CHECK(ScenarioConfig::from_json(cfg.to_json()) == cfg);
    CHECK(ScenarioConfig::from_json(Json::object()) == ScenarioConfig{});
}

TEST_CASE("zones outside the top domain are a config error") {
    ScenarioConfig cfg = tiny_scenario();
    cfg.corpus.parent_zones = {"edu.de"};
    Corpus corpus = generate_corpus(cfg.corpus, cfg.seed);
    CHECK_THROWS_AS(build_system(corpus, cfg), ConfigError);
}

TEST_CASE("tiny scenario reaches full coverage") {
    MetricsReport report = run_scenario(tiny_scenario());
    CHECK(report.coverage_fraction == 1.0);
    CHECK(report.crawl_bytes > 0);
    CHECK(report.harvest_bytes > 0);
    CHECK(report.recrawl_bytes_equivalent == report.crawl_bytes);
    CHECK(report.query_count == 5);
    CHECK(report.result_counts.size() == 5);
    CHECK(report.query_latency_ms.size() == 5);
}

TEST_CASE("one modification is visible after exactly one harvest cycle") {
    MetricsReport report = run_scenario(tiny_scenario());
    CHECK(report.update_latency_cycles == 1);
}

TEST_CASE("identical configs produce identical deterministic reports") {
    ScenarioConfig cfg = tiny_scenario();
    MetricsReport a = run_scenario(cfg);
    MetricsReport b = run_scenario(cfg);
    CHECK(a.deterministic_json() == b.deterministic_json());
}

TEST_CASE("top-layer query equals merging individually queried zones") {
    ScenarioConfig cfg = tiny_scenario();
    cfg.corpus.parent_zones = {"edu.cn", "ac.cn"};
    cfg.corpus.domains = 4;
    cfg.corpus.cross_link_prob = 0.6;
    Corpus corpus = generate_corpus(cfg.corpus, cfg.seed);
    System sys = build_system(corpus, cfg);
    for (auto& [zone, node] : sys.layer2) node->run_harvest();

    std::vector<std::string> query = {"w0"};
    auto top = sys.top->search(DomainName::parse("cn"), query, 100,
                               std::chrono::milliseconds(2000));

    std::vector<std::pair<std::string, std::vector<RankedResult>>> lists;
    for (const auto& [zone, node] : sys.layer2) {
        lists.emplace_back(zone, node->search(query, 100));
    }
    CHECK(top.results == merge_results(lists));
}

TEST_CASE("unregistered hosts still end up covered") {
    ScenarioConfig cfg = tiny_scenario();
    cfg.corpus.unregistered_fraction = 0.5;
    MetricsReport report = run_scenario(cfg);
    CHECK(report.coverage_fraction == 1.0);
}

TEST_CASE("workload mixes explicit and generated queries deterministically") {
    ScenarioConfig cfg = tiny_scenario();
    auto a = workload_queries(cfg);
    auto b = workload_queries(cfg);
    CHECK(a == b);
    REQUIRE(a.size() == 5);
    CHECK(a[0] == std::vector<std::string>{"w0"});
    for (std::size_t i = 2; i < a.size(); ++i) CHECK_FALSE(a[i].empty());
}
