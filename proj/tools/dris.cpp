// dris: generate corpora, crawl, index, harvest, serve nodes, and query the
// three-layer hierarchy. File formats are described in docs/formats.md, the
// wire protocol in docs/protocol.md.

#include <CLI11.hpp>

#include <chrono>
#include <csignal>
#include <iostream>
#include <thread>

#include "dris/harness.hpp"
#include "dris/http.hpp"
#include "dris/json.hpp"
#include "dris/protocol.hpp"

namespace {

using namespace dris;

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return Json::parse(in);
}

ScenarioConfig scenario_from_file(const std::string& path) {
    return ScenarioConfig::from_json(read_json_file(path));
}

int cmd_gen(const std::string& scenario_path, const std::string& out_dir) {
    ScenarioConfig cfg = scenario_from_file(scenario_path);
    Corpus corpus = generate_corpus(cfg.corpus, cfg.seed);
    save_corpus(corpus, out_dir);
    std::cout << "wrote " << corpus.page_count() << " pages across "
              << corpus.sites.size() << " sites to " << out_dir << "\n";
    return 0;
}

int cmd_crawl(const std::string& corpus_dir, const std::string& domain, bool scan) {
    Corpus corpus = load_corpus(corpus_dir);
    DomainName d = DomainName::parse(domain);
    auto results = scan ? crawl_scanned(d, corpus) : crawl_domain(d, corpus);
    // crawl manifest: one JSON line per fetched page
    for (const auto& r : results) {
        for (const auto& p : r.own_pages) {
            std::cout << Json{{"origin", r.origin_site},
                              {"url", p.url.str()},
                              {"bytes", serialize_page(p).size()}}
                             .dump()
                      << "\n";
        }
        for (const auto& p : r.external_pages) {
            std::cout << Json{{"origin", r.origin_site},
                              {"url", p.url.str()},
                              {"bytes", serialize_page(p).size()},
                              {"external", true}}
                             .dump()
                      << "\n";
        }
    }
    return 0;
}

int cmd_index(const std::string& corpus_dir, const std::string& domain,
              const std::string& out, bool scan) {
    Corpus corpus = load_corpus(corpus_dir);
    Layer3Node node(DomainName::parse(domain));
    node.crawl_and_index(corpus, scan);
    save_index(node.state()->index, out);
    std::cout << "indexed " << node.state()->index.records.size() << " pages ("
              << node.state()->external.size() << " external copies) to " << out
              << "\n";
    return 0;
}

int cmd_harvest(const std::string& corpus_dir, const std::string& zone,
                const std::string& out) {
    Corpus corpus = load_corpus(corpus_dir);
    DomainName z = DomainName::parse(zone);
    auto layer2 = std::make_shared<Layer2Node>(z);
    int children = 0;
    for (const std::string& leaf : corpus.leaf_domains()) {
        DomainName d = DomainName::parse(leaf);
        if (!d.is_under(z)) continue;
        auto node = std::make_shared<Layer3Node>(d);
        node->crawl_and_index(corpus);
        layer2->add_child(std::make_shared<Layer3HarvestEndpoint>(node));
        ++children;
    }
    if (children == 0) {
        std::cerr << "no third-level domain under " << zone << "\n";
        return 1;
    }
    auto warnings = layer2->run_harvest();
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    layer2->store()->save(out);
    std::cout << "harvested " << layer2->store()->size() << " pages from "
              << children << " children to " << out << "\n";
    return 0;
}

int cmd_serve(int layer, const std::string& corpus_dir, const std::string& domain,
              int port, const std::vector<std::string>& child_urls) {
    Corpus corpus;
    if (!corpus_dir.empty()) corpus = load_corpus(corpus_dir);
    DomainName d = DomainName::parse(domain);
    NodeServer server;

    std::shared_ptr<Layer3Node> l3;
    std::shared_ptr<Layer2Node> l2;
    std::shared_ptr<TopNode> top;
    if (layer == 3) {
        l3 = std::make_shared<Layer3Node>(d);
        l3->crawl_and_index(corpus);
        server.serve_layer3(l3);
    } else if (layer == 2) {
        l2 = std::make_shared<Layer2Node>(d);
        if (!child_urls.empty()) {
            for (const auto& url : child_urls) {
                l2->add_child(std::make_shared<HttpHarvestEndpoint>(url, url));
            }
        } else {
            for (const std::string& leaf : corpus.leaf_domains()) {
                DomainName leaf_d = DomainName::parse(leaf);
                if (!leaf_d.is_under(d)) continue;
                auto node = std::make_shared<Layer3Node>(leaf_d);
                node->crawl_and_index(corpus);
                l2->add_child(std::make_shared<Layer3HarvestEndpoint>(node));
            }
        }
        for (const auto& w : l2->run_harvest()) std::cerr << "warning: " << w << "\n";
        server.serve_layer2(l2);
    } else {
        top = std::make_shared<TopNode>(d);
        top->register_service(
            ServiceDescriptor::make(d, "http://127.0.0.1:" + std::to_string(port),
                                    NodeKind::top));
        for (const auto& spec : child_urls) {
            auto eq = spec.find('=');
            if (eq == std::string::npos) {
                std::cerr << "--child wants zone=url, got \"" << spec << "\"\n";
                return 2;
            }
            DomainName zone = DomainName::parse(spec.substr(0, eq));
            std::string url = spec.substr(eq + 1);
            top->register_service(
                ServiceDescriptor::make(zone, url, NodeKind::layer2),
                std::make_shared<HttpSearchClient>(zone.str(), url));
        }
        server.serve_top(top);
    }
    // --port 0 picks an ephemeral port; the chosen one is printed either way
    server.start(port);
    std::cout << "serving layer " << (layer == 0 ? "top" : std::to_string(layer))
              << " for " << domain << " on "
              << server.base_url() << " (class " << d.class_name() << ")"
              << std::endl;
    std::signal(SIGINT, [](int) { std::exit(0); });
    for (;;) std::this_thread::sleep_for(std::chrono::seconds(1));
}

int cmd_query(const std::string& corpus_dir, const std::string& scenario_path,
              const std::string& scope, const std::vector<std::string>& terms,
              int max_results, int timeout_ms) {
    ScenarioConfig cfg = scenario_path.empty() ? ScenarioConfig{}
                                               : scenario_from_file(scenario_path);
    Corpus corpus = corpus_dir.empty() ? generate_corpus(cfg.corpus, cfg.seed)
                                       : load_corpus(corpus_dir);
    if (!corpus_dir.empty()) {
        // zones must cover the corpus on disk, not the default config
        std::set<std::string> zones;
        for (const auto& leaf : corpus.leaf_domains()) {
            auto labels = DomainName::parse(leaf).labels();
            labels.erase(labels.begin());
            zones.insert(DomainName(labels).str());
        }
        cfg.corpus.parent_zones.assign(zones.begin(), zones.end());
    }
    System sys = build_system(corpus, cfg);
    for (auto& [zone, node] : sys.layer2) node->run_harvest();
    try {
        auto out = sys.top->search(DomainName::parse(scope), terms, max_results,
                                   std::chrono::milliseconds(timeout_ms));
        std::cout << "rank\tscore\turl\ttitle\n";
        int rank = 1;
        for (const auto& r : out.results) {
            std::cout << rank++ << "\t" << r.score << "\t" << r.url.str() << "\t"
                      << r.title << "\n";
        }
        for (const auto& s : out.child_status) {
            if (s.state != ChildState::ok) {
                std::cerr << "child " << s.node << ": " << to_string(s.state) << " "
                          << s.detail << "\n";
            }
        }
        return 0;
    } catch (const FederationError& e) {
        std::cerr << "federated search failed: " << e.what() << "\n";
        for (const auto& s : e.child_status) {
            std::cerr << "  " << s.node << ": " << to_string(s.state) << " "
                      << s.detail << "\n";
        }
        return 1;
    }
}

int cmd_bench(const std::string& scenario_path) {
    MetricsReport report = run_scenario(scenario_from_file(scenario_path));
    std::cout << report.to_json().dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DRIS: domain-partitioned three-layer federated search"};
    app.require_subcommand(1);

    std::string scenario, out, corpus_dir, domain, scope;
    std::vector<std::string> terms, child_urls;
    bool scan = false;
    int layer = 3, port = 0, max_results = 100, timeout_ms = 2000;

    auto* gen = app.add_subcommand("gen", "generate a synthetic corpus directory");
    gen->add_option("--scenario", scenario, "scenario JSON file")->required();
    gen->add_option("--out", out, "output corpus directory")->required();

    auto* crawl = app.add_subcommand("crawl", "crawl a domain, print a manifest");
    crawl->add_option("--corpus", corpus_dir)->required();
    crawl->add_option("--domain", domain)->required();
    crawl->add_flag("--scan", scan, "include unregistered hosts (address scan)");

    auto* index = app.add_subcommand("index", "build a layer-3 index file");
    index->add_option("--corpus", corpus_dir)->required();
    index->add_option("--domain", domain)->required();
    index->add_option("--out", out)->required();
    index->add_flag("--scan", scan)->default_val(true);

    auto* harvest = app.add_subcommand("harvest", "harvest a zone into a store file");
    harvest->add_option("--corpus", corpus_dir)->required();
    harvest->add_option("--zone", domain)->required();
    harvest->add_option("--out", out)->required();

    std::string layer_str = "3";
    auto* serve = app.add_subcommand("serve", "serve one node over HTTP");
    serve->add_option("--layer", layer_str, "3, 2 or top")
        ->check(CLI::IsMember({"3", "2", "top"}));
    serve->add_option("--corpus", corpus_dir);
    serve->add_option("--domain", domain)->required();
    serve->add_option("--port", port);
    serve->add_option("--child", child_urls,
                      "layer 2: child metadata URL; top: zone=search-url");

    auto* query = app.add_subcommand("query", "federated query via the top node");
    query->add_option("--corpus", corpus_dir);
    query->add_option("--scenario", scenario);
    query->add_option("--scope", scope)->required();
    query->add_option("--max-results", max_results);
    query->add_option("--timeout-ms", timeout_ms);
    query->add_option("terms", terms, "query terms")->required();

    auto* bench = app.add_subcommand("bench", "run a scenario, print MetricsReport");
    bench->add_option("--scenario", scenario)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (gen->parsed()) return cmd_gen(scenario, out);
        if (crawl->parsed()) return cmd_crawl(corpus_dir, domain, scan);
        if (index->parsed()) return cmd_index(corpus_dir, domain, out, scan);
        if (harvest->parsed()) return cmd_harvest(corpus_dir, domain, out);
        if (serve->parsed()) {
            layer = layer_str == "top" ? 0 : std::stoi(layer_str);
            return cmd_serve(layer, corpus_dir, domain, port, child_urls);
        }
        if (query->parsed()) {
            return cmd_query(corpus_dir, scenario, scope, terms, max_results,
                             timeout_ms);
        }
        if (bench->parsed()) return cmd_bench(scenario);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
