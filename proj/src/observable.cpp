#include "vizpipe/observable.hpp"

#include "vizpipe/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace vizpipe {

namespace {

bool same_bits(double a, double b) {
    return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

template <typename Seq>
bool same_bits_seq(const Seq& a, const Seq& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!same_bits(a[i], b[i])) return false;
    return true;
}

std::size_t expected_index(PropertyKind kind) {
    switch (kind) {
    case PropertyKind::Bool: return 0;
    case PropertyKind::Int: return 1;
    case PropertyKind::Float: return 2;
    case PropertyKind::Enum:
    case PropertyKind::Text: return 3;
    case PropertyKind::ColorRgba: return 4;
    case PropertyKind::FloatTriplet: return 5;
    case PropertyKind::FloatList: return 6;
    }
    return 0;
}

void check_number(const PropertyDescriptor& d, double v) {
    if (!std::isfinite(v)) throw ValidationError(d.name + ": value must be finite");
    if (d.bounds && (v < d.bounds->first || v > d.bounds->second))
        throw ValidationError(d.name + ": value " + std::to_string(v) + " outside [" +
                              std::to_string(d.bounds->first) + ", " + std::to_string(d.bounds->second) + "]");
}

} // namespace

std::string_view to_string(PropertyKind kind) {
    switch (kind) {
    case PropertyKind::Float: return "float";
    case PropertyKind::Int: return "int";
    case PropertyKind::Bool: return "bool";
    case PropertyKind::Enum: return "enum";
    case PropertyKind::ColorRgba: return "color_rgba";
    case PropertyKind::FloatTriplet: return "float_triplet";
    case PropertyKind::FloatList: return "float_list";
    case PropertyKind::Text: return "text";
    }
    return "float";
}

bool values_identical(const Value& a, const Value& b) {
    if (a.index() != b.index()) return false;
    return std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            const auto& y = std::get<T>(b);
            if constexpr (std::is_same_v<T, double>)
                return same_bits(x, y);
            else if constexpr (std::is_same_v<T, Rgba> || std::is_same_v<T, Triplet> ||
                               std::is_same_v<T, FloatList>)
                return same_bits_seq(x, y);
            else
                return x == y;
        },
        a);
}

void validate_value(const PropertyDescriptor& d, const Value& value) {
    if (value.index() != expected_index(d.kind))
        throw ValidationError(d.name + ": expected a " + std::string(to_string(d.kind)) + " value");
    switch (d.kind) {
    case PropertyKind::Float: check_number(d, std::get<double>(value)); break;
    case PropertyKind::Int: {
        auto v = std::get<std::int64_t>(value);
        if (d.bounds && (static_cast<double>(v) < d.bounds->first || static_cast<double>(v) > d.bounds->second))
            throw ValidationError(d.name + ": value " + std::to_string(v) + " outside [" +
                                  std::to_string(static_cast<std::int64_t>(d.bounds->first)) + ", " +
                                  std::to_string(static_cast<std::int64_t>(d.bounds->second)) + "]");
        break;
    }
    case PropertyKind::Enum: {
        const auto& v = std::get<std::string>(value);
        if (std::find(d.choices.begin(), d.choices.end(), v) == d.choices.end())
            throw ValidationError(d.name + ": '" + v + "' is not one of the allowed choices");
        break;
    }
    case PropertyKind::ColorRgba:
        for (double c : std::get<Rgba>(value))
            if (!(c >= 0.0 && c <= 1.0)) throw ValidationError(d.name + ": color components must lie in [0, 1]");
        break;
    case PropertyKind::FloatTriplet:
        for (double c : std::get<Triplet>(value)) check_number(d, c);
        break;
    case PropertyKind::FloatList:
        for (double c : std::get<FloatList>(value)) check_number(d, c);
        break;
    case PropertyKind::Bool:
    case PropertyKind::Text: break;
    }
}

bool ObservableObject::has_property(std::string_view name) const noexcept {
    return std::any_of(descriptors_.begin(), descriptors_.end(), [&](const auto& d) { return d.name == name; });
}

std::size_t ObservableObject::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < descriptors_.size(); ++i)
        if (descriptors_[i].name == name) return i;
    throw UnknownPropertyError("unknown property '" + std::string(name) + "'");
}

const PropertyDescriptor& ObservableObject::descriptor(std::string_view name) const {
    return descriptors_[index_of(name)];
}

const Value& ObservableObject::get(std::string_view name) const { return values_[index_of(name)]; }

std::optional<ChangeEvent> ObservableObject::set_property(std::string_view name, Value value) {
    const std::size_t idx = index_of(name);
    if (notifying_[idx])
        throw ReentrancyError("property '" + std::string(name) + "' changed again during its own notification");
    validate_value(descriptors_[idx], value);
    if (values_identical(values_[idx], value)) return std::nullopt;

    ChangeEvent event;
    event.object_id = id_;
    event.property_name = descriptors_[idx].name;
    event.old_value = std::exchange(values_[idx], std::move(value));
    event.new_value = values_[idx];
    event.sequence_number = sequence_->next++;

    struct Guard {
        std::vector<bool>& flags;
        std::size_t i;
        ~Guard() { flags[i] = false; }
    } guard{notifying_, idx};
    notifying_[idx] = true;

    on_property_changed(event);
    auto snapshot = sinks_;
    for (const auto& [token, sink] : snapshot) {
        bool live = std::any_of(sinks_.begin(), sinks_.end(), [t = token](const auto& s) { return s.first == t; });
        if (live) (*sink)(event);
    }
    return event;
}

std::vector<PropertyState> ObservableObject::describe() const {
    std::vector<PropertyState> out;
    out.reserve(descriptors_.size());
    for (std::size_t i = 0; i < descriptors_.size(); ++i) out.push_back({descriptors_[i], values_[i]});
    return out;
}

ObservableObject::Subscription ObservableObject::subscribe(Sink sink) {
    Subscription handle{next_token_++};
    sinks_.emplace_back(handle.token, std::make_shared<Sink>(std::move(sink)));
    return handle;
}

void ObservableObject::unsubscribe(Subscription handle) {
    std::erase_if(sinks_, [&](const auto& s) { return s.first == handle.token; });
}

void ObservableObject::declare(PropertyDescriptor descriptor) {
    if (has_property(descriptor.name)) throw ValidationError("duplicate property '" + descriptor.name + "'");
    validate_value(descriptor, descriptor.default_value);
    values_.push_back(descriptor.default_value);
    descriptors_.push_back(std::move(descriptor));
    notifying_.push_back(false);
}

void ObservableObject::bind_identity(ObjectId id, EventSequence* sequence) noexcept {
    id_ = id;
    sequence_ = sequence ? sequence : &local_sequence_;
}

} // namespace vizpipe
