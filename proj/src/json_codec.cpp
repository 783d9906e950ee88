#include "vizpipe/json_codec.hpp"

#include "vizpipe/errors.hpp"

#include <cmath>

namespace vizpipe {

namespace {

template <std::size_t N>
std::array<double, N> fixed_array(const Json& j, std::string_view what) {
    if (!j.is_array() || j.size() != N)
        throw ValidationError(std::string(what) + " must be an array of " + std::to_string(N) + " numbers");
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i) {
        if (!j[i].is_number()) throw ValidationError(std::string(what) + " must contain numbers");
        out[i] = j[i].get<double>();
    }
    return out;
}

} // namespace

Json value_to_json(const Value& v) {
    return std::visit([](const auto& x) -> Json { return Json(x); }, v);
}

Value value_from_json(const Json& j, PropertyKind kind) {
    switch (kind) {
    case PropertyKind::Float:
        if (!j.is_number()) throw ValidationError("expected a number");
        return j.get<double>();
    case PropertyKind::Int:
        if (j.is_number_integer()) return j.get<std::int64_t>();
        if (j.is_number_float()) {
            const double d = j.get<double>();
            if (d == std::floor(d) && std::abs(d) < 9.0e15) return static_cast<std::int64_t>(d);
        }
        throw ValidationError("expected an integer");
    case PropertyKind::Bool:
        if (!j.is_boolean()) throw ValidationError("expected a boolean");
        return j.get<bool>();
    case PropertyKind::Enum:
    case PropertyKind::Text:
        if (!j.is_string()) throw ValidationError("expected a string");
        return j.get<std::string>();
    case PropertyKind::ColorRgba: return fixed_array<4>(j, "color");
    case PropertyKind::FloatTriplet: return fixed_array<3>(j, "triplet");
    case PropertyKind::FloatList: {
        if (!j.is_array()) throw ValidationError("expected a list of numbers");
        FloatList out;
        for (const auto& e : j) {
            if (!e.is_number()) throw ValidationError("expected a list of numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }
    }
    throw ValidationError("unknown property kind");
}

Json array_to_json(const NumericArray& a) {
    Json j;
    j["shape"] = a.shape();
    if (a.element_kind() == ElementKind::Int32) {
        j["kind"] = "int32";
        j["values"] = std::vector<std::int32_t>(a.ints().begin(), a.ints().end());
    } else {
        j["kind"] = "float64";
        j["values"] = std::vector<double>(a.doubles().begin(), a.doubles().end());
    }
    return j;
}

NumericArray array_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("shape") || !j.contains("values") || !j["values"].is_array())
        throw ShapeError("array needs 'shape' and 'values'");
    std::vector<std::size_t> shape;
    if (!j["shape"].is_array()) throw ShapeError("'shape' must be a list");
    for (const auto& e : j["shape"]) {
        if (!e.is_number_unsigned()) throw ShapeError("'shape' must hold non-negative integers");
        shape.push_back(e.get<std::size_t>());
    }
    const std::string kind = j.value("kind", "float64");
    const auto& values = j["values"];
    try {
        if (kind == "int32") {
            std::vector<std::int32_t> v;
            v.reserve(values.size());
            for (const auto& e : values) {
                if (!e.is_number_integer()) throw ShapeError("int32 arrays hold integers");
                v.push_back(e.get<std::int32_t>());
            }
            return NumericArray(std::move(shape), std::move(v));
        }
        if (kind != "float64") throw ShapeError("unknown element kind '" + kind + "'");
        std::vector<double> v;
        v.reserve(values.size());
        for (const auto& e : values) {
            if (!e.is_number()) throw ShapeError("array values must be numbers");
            v.push_back(e.get<double>());
        }
        return NumericArray(std::move(shape), std::move(v));
    } catch (const DatasetShapeError& e) {
        throw ShapeError(e.what());
    }
}

Json slots_to_json(const DataSlots& slots) {
    Json j = Json::object();
    for (const auto& [name, array] : slots) j[name] = array_to_json(array);
    return j;
}

DataSlots slots_from_json(const Json& j) {
    if (!j.is_object()) throw ShapeError("data must be an object of named arrays");
    DataSlots out;
    for (const auto& [name, array] : j.items()) {
        if (array.is_array()) {
            // Bare list shorthand for a 1-D float array.
            std::vector<double> v;
            for (const auto& e : array) {
                if (!e.is_number()) throw ShapeError("array values must be numbers");
                v.push_back(e.get<double>());
            }
            out.emplace(name, NumericArray::vector(std::move(v)));
        } else {
            out.emplace(name, array_from_json(array));
        }
    }
    return out;
}

Json descriptor_to_json(const PropertyDescriptor& d) {
    Json j;
    j["name"] = d.name;
    j["kind"] = std::string(to_string(d.kind));
    j["default"] = value_to_json(d.default_value);
    j["bounds"] = d.bounds ? Json::array({d.bounds->first, d.bounds->second}) : Json();
    j["choices"] = d.choices;
    return j;
}

Json state_to_json(const PropertyState& s) {
    Json j = descriptor_to_json(s.descriptor);
    j["value"] = value_to_json(s.value);
    return j;
}

Json info_to_json(const PipelineInfo& info) {
    return {{"datasets", info.datasets}, {"attribute_types", info.attribute_types}, {"attributes", info.attributes}};
}

Json info_to_json(const DatasetInfo& info) {
    return {{"dataset_kind", to_string(info.dataset_kind)},
            {"attribute_types", info.attribute_types},
            {"attributes", info.attributes}};
}

Json metadata_to_json(const NodeMetadata& m) {
    Json j;
    j["factory_id"] = m.factory_id;
    j["class_name"] = m.class_name;
    j["kind"] = std::string(to_string(m.kind));
    j["menu_name"] = m.menu_name;
    j["extensions"] = m.extensions;
    j["wildcards"] = m.wildcards;
    j["input_info"] = m.input_info ? info_to_json(*m.input_info) : Json();
    j["output_info"] = info_to_json(m.output_info);
    return j;
}

} // namespace vizpipe
