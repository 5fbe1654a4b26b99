#pragma once

#include <nlohmann/json.hpp>

#include "dris/types.hpp"

namespace dris {

using Json = nlohmann::json;

// ADL hooks so nlohmann::json can (de)serialize the core value types.
void to_json(Json& j, const KeywordScore& k);
void from_json(const Json& j, KeywordScore& k);
void to_json(Json& j, const MetadataRecord& r);
void from_json(const Json& j, MetadataRecord& r);
void to_json(Json& j, const RankedResult& r);
void from_json(const Json& j, RankedResult& r);
void to_json(Json& j, const ChildStatus& s);
void from_json(const Json& j, ChildStatus& s);

}  // namespace dris
