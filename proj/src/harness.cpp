#include "dris/harness.hpp"

#include <algorithm>
#include <chrono>

#include "dris/http.hpp"

namespace dris {

namespace {

CorpusConfig corpus_from_json(const Json& j) {
    CorpusConfig c;
    c.parent_zones = j.value("parent_zones", c.parent_zones);
    c.domains = j.value("domains", c.domains);
    c.sites_per_domain = j.value("sites_per_domain", c.sites_per_domain);
    c.pages_per_site = j.value("pages_per_site", c.pages_per_site);
    c.vocab_size = j.value("vocab_size", c.vocab_size);
    c.title_tokens = j.value("title_tokens", c.title_tokens);
    c.body_tokens = j.value("body_tokens", c.body_tokens);
    c.cross_link_prob = j.value("cross_link_prob", c.cross_link_prob);
    c.unregistered_fraction = j.value("unregistered_fraction", c.unregistered_fraction);
    c.base_timestamp = j.value("base_timestamp", c.base_timestamp);
    return c;
}

Json corpus_to_json(const CorpusConfig& c) {
    return Json{{"parent_zones", c.parent_zones},
                {"domains", c.domains},
                {"sites_per_domain", c.sites_per_domain},
                {"pages_per_site", c.pages_per_site},
                {"vocab_size", c.vocab_size},
                {"title_tokens", c.title_tokens},
                {"body_tokens", c.body_tokens},
                {"cross_link_prob", c.cross_link_prob},
                {"unregistered_fraction", c.unregistered_fraction},
                {"base_timestamp", c.base_timestamp}};
}

}  // namespace

ScenarioConfig ScenarioConfig::from_json(const Json& j) {
    ScenarioConfig cfg;
    if (j.contains("corpus")) cfg.corpus = corpus_from_json(j.at("corpus"));
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("index")) {
        const Json& ix = j.at("index");
        cfg.index.abstract_token_limit =
            ix.value("abstract_token_limit", cfg.index.abstract_token_limit);
        cfg.index.keywords_per_page =
            ix.value("keywords_per_page", cfg.index.keywords_per_page);
        cfg.index.max_results = ix.value("max_results", cfg.index.max_results);
    }
    cfg.top_domain = j.value("top_domain", cfg.top_domain);
    std::string transport = j.value("transport", std::string("in_process"));
    if (transport == "in_process") cfg.transport = Transport::in_process;
    else if (transport == "loopback") cfg.transport = Transport::loopback;
    else throw ConfigError("unknown transport \"" + transport + "\"");
    cfg.queries = j.value("queries", cfg.queries);
    if (j.contains("generated_queries")) {
        const Json& g = j.at("generated_queries");
        cfg.generated_queries.count = g.value("count", 0);
        cfg.generated_queries.seed = g.value("seed", std::uint64_t{1});
        cfg.generated_queries.max_terms = g.value("max_terms", 2);
    }
    cfg.max_results = j.value("max_results", cfg.max_results);
    cfg.timeout_ms = j.value("timeout_ms", cfg.timeout_ms);
    return cfg;
}

Json ScenarioConfig::to_json() const {
    return Json{
        {"corpus", corpus_to_json(corpus)},
        {"seed", seed},
        {"index",
         Json{{"abstract_token_limit", index.abstract_token_limit},
              {"keywords_per_page", index.keywords_per_page},
              {"max_results", index.max_results}}},
        {"top_domain", top_domain},
        {"transport", transport == Transport::in_process ? "in_process" : "loopback"},
        {"queries", queries},
        {"generated_queries",
         Json{{"count", generated_queries.count},
              {"seed", generated_queries.seed},
              {"max_terms", generated_queries.max_terms}}},
        {"max_results", max_results},
        {"timeout_ms", timeout_ms}};
}

Json MetricsReport::deterministic_json() const {
    return Json{{"coverage_fraction", coverage_fraction},
                {"crawl_bytes", crawl_bytes},
                {"harvest_bytes", harvest_bytes},
                {"recrawl_bytes_equivalent", recrawl_bytes_equivalent},
                {"update_latency_cycles", update_latency_cycles},
                {"query_count", query_count},
                {"result_counts", result_counts}};
}

Json MetricsReport::to_json() const {
    Json j = deterministic_json();
    j["query_latency_ms"] = query_latency_ms;
    return j;
}

System build_system(const Corpus& corpus, const ScenarioConfig& cfg) {
    DomainName top = DomainName::parse(cfg.top_domain);
    System sys;
    sys.top = std::make_shared<TopNode>(top);
    sys.top->register_service(
        ServiceDescriptor::make(top, "inproc://" + top.str(), NodeKind::top));

    for (const std::string& zone_str : cfg.corpus.parent_zones) {
        DomainName zone = DomainName::parse(zone_str);
        if (!zone.is_under(top)) {
            throw ConfigError("zone " + zone_str + " is not under top domain " +
                              cfg.top_domain);
        }
        auto node = std::make_shared<Layer2Node>(zone);
        sys.layer2.emplace(zone_str, node);
    }

    for (const std::string& leaf : corpus.leaf_domains()) {
        DomainName d = DomainName::parse(leaf);
        auto node = std::make_shared<Layer3Node>(d, cfg.index);
        node->crawl_and_index(corpus, /*scan=*/true);
        std::shared_ptr<Layer2Node> parent;
        for (auto& [zone_str, zone_node] : sys.layer2) {
            if (d.is_under(zone_node->domain())) parent = zone_node;
        }
        if (!parent) {
            throw ConfigError("leaf domain " + leaf + " has no layer-2 zone");
        }
        parent->add_child(std::make_shared<Layer3HarvestEndpoint>(node));
        sys.top->register_service(
            ServiceDescriptor::make(d, "inproc://" + leaf, NodeKind::layer3));
        sys.layer3.emplace(leaf, node);
    }

    for (auto& [zone_str, zone_node] : sys.layer2) {
        sys.top->register_service(
            ServiceDescriptor::make(zone_node->domain(), "inproc://" + zone_str,
                                    NodeKind::layer2),
            std::make_shared<Layer2SearchClient>(zone_node));
    }
    return sys;
}

void run_cycle(System& system, const Corpus& corpus, Timestamp built_at) {
    for (auto& [leaf, node] : system.layer3) {
        node->crawl_and_index(corpus, /*scan=*/true, built_at);
    }
    for (auto& [zone, node] : system.layer2) {
        node->run_harvest();
    }
}

std::vector<std::vector<std::string>> workload_queries(const ScenarioConfig& cfg) {
    std::vector<std::vector<std::string>> queries = cfg.queries;
    Rng rng(cfg.generated_queries.seed);
    for (int i = 0; i < cfg.generated_queries.count; ++i) {
        int terms = 1 + static_cast<int>(
                            rng.uniform(std::max(1, cfg.generated_queries.max_terms)));
        std::vector<std::string> q;
        for (int t = 0; t < terms; ++t) {
            q.push_back("w" + std::to_string(
                                  rng.zipf(static_cast<std::uint64_t>(cfg.corpus.vocab_size))));
        }
        queries.push_back(std::move(q));
    }
    return queries;
}

MetricsReport run_scenario(const ScenarioConfig& cfg) {
    Corpus corpus = generate_corpus(cfg.corpus, cfg.seed);
    System sys = build_system(corpus, cfg);
    for (auto& [zone, node] : sys.layer2) node->run_harvest();

    MetricsReport report;

    // coverage: union of layer-3 indexed own pages vs the corpus census
    std::set<std::string> indexed;
    for (const auto& [leaf, node] : sys.layer3) {
        for (const auto& [url, rec] : node->state()->index.records) indexed.insert(url);
    }
    std::size_t covered = 0, total = 0;
    for (const auto& [host, site] : corpus.sites) {
        for (const auto& [url, page] : site.pages) {
            ++total;
            if (indexed.count(url)) ++covered;
        }
    }
    report.coverage_fraction =
        total == 0 ? 1.0 : static_cast<double>(covered) / static_cast<double>(total);

    for (const auto& [leaf, node] : sys.layer3) report.crawl_bytes += node->crawl_bytes();
    for (const auto& [zone, node] : sys.layer2) report.harvest_bytes += node->harvest_bytes();
    report.recrawl_bytes_equivalent = report.crawl_bytes;

    // freshness: one page changes, count cycles until the top layer sees it
    Corpus modified = corpus;
    Timestamp max_ts = 0;
    for (const auto& [host, site] : modified.sites) {
        for (const auto& [url, page] : site.pages) {
            max_ts = std::max(max_ts, page.last_modified);
        }
    }
    {
        Site& site = modified.sites.begin()->second;
        Page& page = site.pages.begin()->second;
        page.title = "zzupdated " + page.title;
        page.body.insert(page.body.begin(), "zzupdated");
        page.last_modified = max_ts + 1;
    }
    DomainName top_scope = DomainName::parse(cfg.top_domain);
    const std::vector<std::string> sentinel = {"zzupdated"};
    const auto timeout = std::chrono::milliseconds(cfg.timeout_ms);
    int cycles = 0;
    bool visible = false;
    while (cycles < 3 && !visible) {
        run_cycle(sys, modified, max_ts + 1);
        ++cycles;
        auto out = sys.top->search(top_scope, sentinel, cfg.max_results, timeout);
        visible = !out.results.empty();
    }
    report.update_latency_cycles = visible ? cycles : -1;

    // query workload against the requested transport
    auto queries = workload_queries(cfg);
    LoopbackCluster cluster;
    std::shared_ptr<TopNode> query_top = sys.top;
    if (cfg.transport == Transport::loopback) {
        query_top = cluster.mirror_top(sys, cfg.top_domain);
    }
    for (const auto& q : queries) {
        auto t0 = std::chrono::steady_clock::now();
        auto out = query_top->search(top_scope, q, cfg.max_results, timeout);
        auto t1 = std::chrono::steady_clock::now();
        report.result_counts.push_back(out.results.size());
        report.query_latency_ms.push_back(
            std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    report.query_count = queries.size();
    return report;
}

}  // namespace dris
