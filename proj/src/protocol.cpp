#include "dris/protocol.hpp"

#include <algorithm>
#include <tuple>

#include "dris/json.hpp"

namespace dris {
namespace protocol {

namespace {

std::string version_string() {
    return std::to_string(kMajorVersion) + "." + std::to_string(kMinorVersion);
}

void check_version(const Json& j) {
    if (!j.contains("version")) throw DecodeError("version", "missing");
    if (!j.at("version").is_string()) throw DecodeError("version", "must be a string");
    std::string v = j.at("version").get<std::string>();
    auto dot = v.find('.');
    int major = 0;
    try {
        major = std::stoi(dot == std::string::npos ? v : v.substr(0, dot));
    } catch (const std::exception&) {
        throw DecodeError("version", "malformed \"" + v + "\"");
    }
    if (major > kMajorVersion) {
        throw DecodeError("version", "unsupported major version " + v);
    }
}

Json parse_envelope(const std::string& bytes, const std::string& type) {
    Json j;
    try {
        j = Json::parse(bytes);
    } catch (const Json::parse_error& e) {
        throw DecodeError("(document)", e.what());
    }
    if (!j.is_object()) throw DecodeError("(document)", "not a JSON object");
    check_version(j);
    if (j.contains("type") && j.at("type").get<std::string>() != type) {
        throw DecodeError("type", "expected \"" + type + "\"");
    }
    return j;
}

const Json& require(const Json& j, const std::string& field) {
    if (!j.contains(field)) throw DecodeError(field, "missing");
    return j.at(field);
}

template <typename T>
T get_as(const Json& j, const std::string& field) {
    try {
        return require(j, field).get<T>();
    } catch (const DecodeError&) {
        throw;
    } catch (const std::exception& e) {
        throw DecodeError(field, e.what());
    }
}

}  // namespace

std::string encode(const QueryRequest& m) {
    Json j{{"version", version_string()},
           {"type", "query_request"},
           {"request_id", m.request_id},
           {"query", m.query},
           {"max_results", m.max_results}};
    if (m.scope) j["scope"] = *m.scope;
    return j.dump();
}

std::string encode(const QueryResponse& m) {
    Json j{{"version", version_string()},
           {"type", "query_response"},
           {"request_id", m.request_id},
           {"results", m.results},
           {"child_status", m.child_status},
           {"elapsed_ms", m.elapsed_ms}};
    return j.dump();
}

std::string encode(const HarvestResponse& m) {
    Json j{{"version", version_string()},
           {"type", "harvest_response"},
           {"records", m.records},
           {"max_timestamp", m.max_timestamp},
           {"truncated", m.truncated}};
    return j.dump();
}

QueryRequest decode_query_request(const std::string& bytes) {
    Json j = parse_envelope(bytes, "query_request");
    QueryRequest m;
    m.request_id = get_as<std::string>(j, "request_id");
    m.query = get_as<std::vector<std::string>>(j, "query");
    m.max_results = get_as<int>(j, "max_results");
    if (j.contains("scope")) m.scope = get_as<std::string>(j, "scope");
    if (m.query.empty()) throw DecodeError("query", "must be nonempty");
    if (m.max_results < 1) throw DecodeError("max_results", "must be >= 1");
    return m;
}

QueryResponse decode_query_response(const std::string& bytes) {
    Json j = parse_envelope(bytes, "query_response");
    QueryResponse m;
    m.request_id = get_as<std::string>(j, "request_id");
    try {
        m.results = require(j, "results").get<std::vector<RankedResult>>();
    } catch (const DecodeError&) {
        throw;
    } catch (const std::exception& e) {
        throw DecodeError("results", e.what());
    }
    try {
        m.child_status = require(j, "child_status").get<std::vector<ChildStatus>>();
    } catch (const DecodeError&) {
        throw;
    } catch (const std::exception& e) {
        throw DecodeError("child_status", e.what());
    }
    m.elapsed_ms = get_as<std::int64_t>(j, "elapsed_ms");
    auto violations = validate(m);
    if (!violations.empty()) throw DecodeError("results", violations.front());
    return m;
}

HarvestResponse decode_harvest_response(const std::string& bytes) {
    Json j = parse_envelope(bytes, "harvest_response");
    HarvestResponse m;
    try {
        m.records = require(j, "records").get<std::vector<MetadataRecord>>();
    } catch (const DecodeError&) {
        throw;
    } catch (const std::exception& e) {
        throw DecodeError("records", e.what());
    }
    m.max_timestamp = get_as<Timestamp>(j, "max_timestamp");
    m.truncated = get_as<bool>(j, "truncated");
    for (const auto& rec : m.records) {
        if (rec.last_modified > m.max_timestamp) {
            throw DecodeError("max_timestamp",
                              "record " + rec.url.str() + " exceeds max_timestamp");
        }
    }
    return m;
}

std::vector<std::string> validate(const QueryRequest& m) {
    std::vector<std::string> v;
    if (m.query.empty()) v.push_back("query: must be nonempty");
    if (m.max_results < 1) v.push_back("max_results: must be >= 1");
    return v;
}

std::vector<std::string> validate(const QueryResponse& m) {
    std::vector<std::string> v;
    if (m.request_id.empty()) v.push_back("request_id: must be nonempty");
    for (std::size_t i = 0; i + 1 < m.results.size(); ++i) {
        const auto& a = m.results[i];
        const auto& b = m.results[i + 1];
        bool ordered = a.score > b.score || (a.score == b.score && a.url < b.url);
        if (!ordered) {
            v.push_back("results: unsorted at [" + std::to_string(i) + "] " +
                        a.url.str() + " -> [" + std::to_string(i + 1) + "] " +
                        b.url.str());
        }
    }
    for (const auto& r : m.results) {
        if (r.sources.empty()) v.push_back("results: " + r.url.str() + " has no sources");
        if (r.score < 0) v.push_back("results: " + r.url.str() + " has negative score");
    }
    return v;
}

std::vector<std::string> validate(const HarvestResponse& m) {
    std::vector<std::string> v;
    for (const auto& rec : m.records) {
        if (rec.last_modified > m.max_timestamp) {
            v.push_back("max_timestamp: record " + rec.url.str() + " exceeds it");
        }
    }
    return v;
}

HarvestResponse page_harvest(const std::vector<MetadataRecord>& records, int limit) {
    std::vector<MetadataRecord> sorted = records;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const MetadataRecord& a, const MetadataRecord& b) {
                         return a.last_modified < b.last_modified;
                     });
    HarvestResponse resp;
    if (sorted.size() <= static_cast<std::size_t>(limit)) {
        resp.records = std::move(sorted);
        resp.truncated = false;
    } else {
        // Cut only at a timestamp boundary so a cursor re-request misses
        // nothing; records sharing one timestamp travel together.
        std::size_t cut = static_cast<std::size_t>(limit);
        while (cut < sorted.size() &&
               sorted[cut].last_modified == sorted[cut - 1].last_modified) {
            ++cut;
        }
        resp.truncated = cut < sorted.size();
        resp.records.assign(sorted.begin(), sorted.begin() + cut);
    }
    for (const auto& rec : resp.records) {
        resp.max_timestamp = std::max(resp.max_timestamp, rec.last_modified);
    }
    // Within a page, restore the canonical export order (url, origin).
    std::sort(resp.records.begin(), resp.records.end(),
              [](const MetadataRecord& a, const MetadataRecord& b) {
                  return std::tie(a.url, a.origin_site) < std::tie(b.url, b.origin_site);
              });
    return resp;
}

}  // namespace protocol
}  // namespace dris
