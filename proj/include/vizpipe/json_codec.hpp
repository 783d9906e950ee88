#pragma once

#include "vizpipe/dataset.hpp"
#include "vizpipe/observable.hpp"
#include "vizpipe/registry.hpp"

#include <json.hpp>

namespace vizpipe {

using Json = nlohmann::json;

Json value_to_json(const Value& v);

/// Reads a property value of the given kind. Throws ValidationError when the
/// JSON type does not fit; bounds are left to validate_value.
Value value_from_json(const Json& j, PropertyKind kind);

/// {shape, kind: "float64"|"int32", values}
Json array_to_json(const NumericArray& a);
/// Throws ShapeError for malformed documents.
NumericArray array_from_json(const Json& j);

Json slots_to_json(const DataSlots& slots);
DataSlots slots_from_json(const Json& j);

Json descriptor_to_json(const PropertyDescriptor& d);
Json state_to_json(const PropertyState& s);
Json info_to_json(const PipelineInfo& info);
Json info_to_json(const DatasetInfo& info);
Json metadata_to_json(const NodeMetadata& m);

} // namespace vizpipe
