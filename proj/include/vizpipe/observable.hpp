#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace vizpipe {

using Rgba = std::array<double, 4>;
using Triplet = std::array<double, 3>;
using FloatList = std::vector<double>;

/// Current value of a property. Enum and text properties both hold strings.
using Value = std::variant<bool, std::int64_t, double, std::string, Rgba, Triplet, FloatList>;

/// Ordered (name, value) pairs.
using PropertyList = std::vector<std::pair<std::string, Value>>;

enum class PropertyKind { Float, Int, Bool, Enum, ColorRgba, FloatTriplet, FloatList, Text };

std::string_view to_string(PropertyKind kind);

using ObjectId = std::uint64_t;

struct PropertyDescriptor {
    std::string name;
    PropertyKind kind = PropertyKind::Float;
    Value default_value;
    /// Inclusive numeric limits; element-wise for triplets and lists.
    std::optional<std::pair<double, double>> bounds;
    std::vector<std::string> choices;
};

/// A descriptor together with the object's current value.
struct PropertyState {
    PropertyDescriptor descriptor;
    Value value;
};

struct ChangeEvent {
    ObjectId object_id = 0;
    std::string property_name;
    Value old_value;
    Value new_value;
    std::uint64_t sequence_number = 0;
};

/// Sequence counter shared by the objects of one engine.
struct EventSequence {
    std::uint64_t next = 1;
};

/// Bitwise equality for scalars, element-wise bitwise for aggregates.
bool values_identical(const Value& a, const Value& b);

/// Throws ValidationError when `value` does not satisfy `descriptor`.
void validate_value(const PropertyDescriptor& descriptor, const Value& value);

class ObservableObject {
public:
    using Sink = std::function<void(const ChangeEvent&)>;

    struct Subscription {
        std::uint64_t token = 0;
    };

    ObservableObject() = default;
    virtual ~ObservableObject() = default;
    ObservableObject(const ObservableObject&) = delete;
    ObservableObject& operator=(const ObservableObject&) = delete;

    ObjectId object_id() const noexcept { return id_; }

    std::span<const PropertyDescriptor> descriptors() const noexcept { return descriptors_; }
    bool has_property(std::string_view name) const noexcept;
    const PropertyDescriptor& descriptor(std::string_view name) const;

    const Value& get(std::string_view name) const;

    template <typename T>
    const T& get_as(std::string_view name) const {
        return std::get<T>(get(name));
    }

    /// Validates, stores and notifies. Returns nothing when the value is
    /// identical to the current one. Throws UnknownPropertyError,
    /// ValidationError (value left unchanged) or ReentrancyError when called for
    /// a property whose own notification is still running.
    std::optional<ChangeEvent> set_property(std::string_view name, Value value);

    /// Declaration-ordered descriptors with current values.
    std::vector<PropertyState> describe() const;

    Subscription subscribe(Sink sink);
    void unsubscribe(Subscription handle);

protected:
    void declare(PropertyDescriptor descriptor);

    /// Runs after the value is stored and before external sinks are called.
    virtual void on_property_changed(const ChangeEvent&) {}

    void bind_identity(ObjectId id, EventSequence* sequence) noexcept;

private:
    std::size_t index_of(std::string_view name) const;

    ObjectId id_ = 0;
    EventSequence local_sequence_;
    EventSequence* sequence_ = &local_sequence_;
    std::vector<PropertyDescriptor> descriptors_;
    std::vector<Value> values_;
    std::vector<bool> notifying_;
    std::vector<std::pair<std::uint64_t, std::shared_ptr<Sink>>> sinks_;
    std::uint64_t next_token_ = 1;
};

} // namespace vizpipe
