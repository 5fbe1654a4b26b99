#pragma once

// Random valid protocol messages for round-trip property tests.

#include <string>
#include <vector>

#include "dris/corpus.hpp"
#include "dris/protocol.hpp"

namespace dris::testgen {

inline std::string rand_token(Rng& rng) {
    return "w" + std::to_string(rng.uniform(500));
}

inline Url rand_url(Rng& rng) {
    return Url{"s" + std::to_string(rng.uniform(40)) + ".u0.edu.cn",
               rng.uniform(4) == 0 ? "/" : "/p" + std::to_string(rng.uniform(50))};
}

inline MetadataRecord rand_record(Rng& rng, Timestamp max_ts = 1'000'000) {
    MetadataRecord r;
    r.url = rand_url(rng);
    r.origin_site = "s" + std::to_string(rng.uniform(40)) + ".u0.edu.cn";
    r.title = rand_token(rng) + " " + rand_token(rng);
    r.encoding = rng.uniform(2) ? "gb2312" : "utf-8";
    r.abstract = rand_token(rng) + " " + rand_token(rng) + " " + rand_token(rng);
    int kws = static_cast<int>(rng.uniform(5));
    int score = 100;
    std::set<std::string> used;
    for (int i = 0; i < kws; ++i) {
        std::string term = rand_token(rng);
        if (!used.insert(term).second) continue;
        r.keywords.push_back({term, score});
        score -= static_cast<int>(rng.uniform(10));
    }
    r.last_modified = static_cast<Timestamp>(rng.uniform(
        static_cast<std::uint64_t>(max_ts)));
    return r;
}

inline protocol::QueryRequest rand_query_request(Rng& rng) {
    protocol::QueryRequest m;
    m.request_id = "req-" + std::to_string(rng.next());
    int terms = 1 + static_cast<int>(rng.uniform(3));
    for (int i = 0; i < terms; ++i) m.query.push_back(rand_token(rng));
    if (rng.uniform(2)) m.scope = "u" + std::to_string(rng.uniform(5)) + ".edu.cn";
    m.max_results = 1 + static_cast<int>(rng.uniform(200));
    return m;
}

inline protocol::QueryResponse rand_query_response(Rng& rng) {
    protocol::QueryResponse m;
    m.request_id = "req-" + std::to_string(rng.next());
    int n = static_cast<int>(rng.uniform(6));
    int score = 1000;
    std::set<std::string> used;
    for (int i = 0; i < n; ++i) {
        RankedResult r;
        r.url = rand_url(rng);
        if (!used.insert(r.url.str()).second) continue;
        score -= 1 + static_cast<int>(rng.uniform(8));
        r.score = score;
        r.sources = {"u" + std::to_string(rng.uniform(3)) + ".edu.cn"};
        r.title = rand_token(rng);
        r.abstract = rand_token(rng);
        m.results.push_back(std::move(r));
    }
    int st = static_cast<int>(rng.uniform(3));
    for (int i = 0; i < st; ++i) {
        m.child_status.push_back({"child" + std::to_string(i),
                                  static_cast<ChildState>(rng.uniform(3)), "d"});
    }
    m.elapsed_ms = static_cast<std::int64_t>(rng.uniform(5000));
    return m;
}

inline protocol::HarvestResponse rand_harvest_response(Rng& rng) {
    protocol::HarvestResponse m;
    int n = static_cast<int>(rng.uniform(5));
    for (int i = 0; i < n; ++i) {
        m.records.push_back(rand_record(rng));
        m.max_timestamp = std::max(m.max_timestamp, m.records.back().last_modified);
    }
    m.truncated = n > 0 && rng.uniform(4) == 0;
    return m;
}

}  // namespace dris::testgen
