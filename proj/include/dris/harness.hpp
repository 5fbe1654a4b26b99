#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "dris/json.hpp"
#include "dris/nodes.hpp"

namespace dris {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Transport { in_process, loopback };

struct GeneratedQueries {
    int count = 0;
    std::uint64_t seed = 1;
    int max_terms = 2;

    bool operator==(const GeneratedQueries&) const = default;
};

struct ScenarioConfig {
    CorpusConfig corpus;
    std::uint64_t seed = 1;
    IndexConfig index;
    std::string top_domain = "cn";
    Transport transport = Transport::in_process;
    std::vector<std::vector<std::string>> queries;
    GeneratedQueries generated_queries;
    int max_results = 100;
    int timeout_ms = 2000;

    static ScenarioConfig from_json(const Json& j);
    Json to_json() const;

    bool operator==(const ScenarioConfig&) const = default;
};

struct MetricsReport {
    double coverage_fraction = 0.0;
    std::size_t crawl_bytes = 0;
    std::size_t harvest_bytes = 0;
    std::size_t recrawl_bytes_equivalent = 0;
    int update_latency_cycles = 0;
    std::size_t query_count = 0;
    std::vector<std::size_t> result_counts;
    std::vector<double> query_latency_ms;  // wall clock, excluded from determinism

    Json to_json() const;
    /// The deterministic fields only; equal across reruns of one config.
    Json deterministic_json() const;
};

/// All three layers wired over in-process transport.
struct System {
    std::map<std::string, std::shared_ptr<Layer3Node>> layer3;  // leaf domain ->
    std::map<std::string, std::shared_ptr<Layer2Node>> layer2;  // zone ->
    std::shared_ptr<TopNode> top;
};

/// Crawls and indexes every leaf domain, wires zone aggregators and the top
/// registry. Throws ConfigError when a corpus zone falls outside top_domain.
System build_system(const Corpus& corpus, const ScenarioConfig& cfg);

/// One update cycle: every layer-3 node re-crawls and re-indexes, then every
/// layer-2 node harvests incrementally.
void run_cycle(System& system, const Corpus& corpus, Timestamp built_at = 0);

MetricsReport run_scenario(const ScenarioConfig& cfg);

/// The workload run_scenario uses: explicit queries first, then generated ones.
std::vector<std::vector<std::string>> workload_queries(const ScenarioConfig& cfg);

}  // namespace dris
