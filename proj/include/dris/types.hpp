#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "dris/domain.hpp"

namespace dris {

using Timestamp = std::int64_t;

struct KeywordScore {
    std::string term;
    int score = 0;

    auto operator<=>(const KeywordScore&) const = default;
};

/// The harvestable surrogate of a page.
struct MetadataRecord {
    Url url;
    std::string origin_site;  // the site whose crawl delivered this copy
    std::string title;
    std::string encoding;
    std::string abstract;
    std::vector<KeywordScore> keywords;  // sorted (score desc, term asc)
    Timestamp last_modified = 0;

    bool operator==(const MetadataRecord&) const = default;
};

/// The unit flowing up the hierarchy.
struct RankedResult {
    Url url;
    int score = 0;
    std::set<std::string> sources;  // contributing database ids
    std::string title;
    std::string abstract;

    bool operator==(const RankedResult&) const = default;
};

enum class ChildState { ok, failed, timeout };

struct ChildStatus {
    std::string node;
    ChildState state = ChildState::ok;
    std::string detail;

    bool operator==(const ChildStatus&) const = default;
};

inline const char* to_string(ChildState s) {
    switch (s) {
        case ChildState::ok: return "ok";
        case ChildState::failed: return "failed";
        case ChildState::timeout: return "timeout";
    }
    return "failed";
}

}  // namespace dris
