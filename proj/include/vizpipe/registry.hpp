#pragma once

#include "vizpipe/dataset.hpp"
#include "vizpipe/pipeline.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vizpipe {

/// Dataset constraint or description. Each list may hold the sentinel "any".
struct PipelineInfo {
    std::vector<std::string> datasets{"any"};
    std::vector<std::string> attribute_types{"any"};
    std::vector<std::string> attributes{"any"};

    static PipelineInfo any() { return {}; }

    friend bool operator==(const PipelineInfo&, const PipelineInfo&) = default;
};

/// True when a producer described by `producer` satisfies `constraint`.
bool info_matches(const PipelineInfo& constraint, const DatasetInfo& producer);

struct NodeMetadata {
    std::string factory_id;
    std::string class_name;
    NodeKind kind = NodeKind::Source;
    std::string menu_name;
    std::vector<std::string> extensions; // sources only
    std::string wildcards;               // sources only
    std::optional<PipelineInfo> input_info; // filters and modules only
    PipelineInfo output_info;
};

using NodeFactory = std::function<std::unique_ptr<Node>()>;

/// lower_case_with_underscores form of a CamelCase class name. Throws NameError
/// for empty or non-alphanumeric input.
std::string scripting_name(std::string_view class_name);

/// Append-only list of node types with the metadata menus and the scripting
/// namespace are built from.
class Registry {
public:
    struct Entry {
        NodeMetadata metadata;
        NodeFactory factory;
    };

    /// Throws RegistryError on a duplicate id, a source with input_info, or a
    /// kind other than source, filter or module.
    void register_node(NodeMetadata metadata, NodeFactory factory);

    const std::vector<Entry>& entries() const noexcept { return entries_; }
    const NodeMetadata* find(std::string_view factory_id) const noexcept;
    const NodeMetadata& metadata(std::string_view factory_id) const;

    /// Fresh node with default properties. Throws RegistryError naming the id.
    std::unique_ptr<Node> create_by_name(std::string_view factory_id) const;

    /// Filters and modules accepting `producer`, ordered by menu name.
    std::vector<NodeMetadata> applicable(const DatasetInfo& producer) const;

    /// Source registered for the file's extension, if any.
    const NodeMetadata* reader_for(std::string_view path) const noexcept;

private:
    std::vector<Entry> entries_;
};

} // namespace vizpipe
