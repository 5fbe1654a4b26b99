#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dris/types.hpp"

namespace dris {
namespace protocol {

inline constexpr int kMajorVersion = 1;
inline constexpr int kMinorVersion = 0;
inline constexpr int kDefaultHarvestPageLimit = 1000;

/// Decode failures carry the offending field's name; see docs/protocol.md.
struct DecodeError : std::runtime_error {
    explicit DecodeError(const std::string& field, const std::string& why)
        : std::runtime_error("field \"" + field + "\": " + why), field(field) {}
    std::string field;
};

struct QueryRequest {
    std::string request_id;
    std::vector<std::string> query;
    std::optional<std::string> scope;
    int max_results = 100;

    bool operator==(const QueryRequest&) const = default;
};

struct QueryResponse {
    std::string request_id;
    std::vector<RankedResult> results;  // (score desc, url asc)
    std::vector<ChildStatus> child_status;
    std::int64_t elapsed_ms = 0;

    bool operator==(const QueryResponse&) const = default;
};

struct HarvestResponse {
    std::vector<MetadataRecord> records;
    Timestamp max_timestamp = 0;
    bool truncated = false;

    bool operator==(const HarvestResponse&) const = default;
};

std::string encode(const QueryRequest& m);
std::string encode(const QueryResponse& m);
std::string encode(const HarvestResponse& m);

QueryRequest decode_query_request(const std::string& bytes);
QueryResponse decode_query_response(const std::string& bytes);
HarvestResponse decode_harvest_response(const std::string& bytes);

/// Every violated invariant, not just the first. Empty = ok.
std::vector<std::string> validate(const QueryRequest& m);
std::vector<std::string> validate(const QueryResponse& m);
std::vector<std::string> validate(const HarvestResponse& m);

/// Pages a full export into a HarvestResponse; a truncated response tells the
/// client to re-request with its advanced cursor.
HarvestResponse page_harvest(const std::vector<MetadataRecord>& records,
                             int limit = kDefaultHarvestPageLimit);

}  // namespace protocol
}  // namespace dris
