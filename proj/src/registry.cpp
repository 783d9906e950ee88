#include "vizpipe/registry.hpp"

#include "vizpipe/errors.hpp"

#include <algorithm>
#include <cctype>

namespace vizpipe {

namespace {

bool contains(const std::vector<std::string>& list, std::string_view item) {
    return std::find(list.begin(), list.end(), item) != list.end();
}

} // namespace

bool info_matches(const PipelineInfo& constraint, const DatasetInfo& producer) {
    if (!contains(constraint.datasets, "any") && !contains(constraint.datasets, to_string(producer.dataset_kind)))
        return false;
    // Only point attributes exist, so attribute_types is not discriminating.
    if (contains(constraint.attributes, "any")) return true;
    return std::all_of(constraint.attributes.begin(), constraint.attributes.end(),
                       [&](const std::string& a) { return contains(producer.attributes, a); });
}

std::string scripting_name(std::string_view class_name) {
    if (class_name.empty()) throw NameError("empty class name");
    std::string out;
    for (std::size_t i = 0; i < class_name.size(); ++i) {
        const unsigned char c = static_cast<unsigned char>(class_name[i]);
        if (!std::isalnum(c)) throw NameError("'" + std::string(class_name) + "' is not a CamelCase name");
        if (std::isupper(c)) {
            if (i > 0) out += '_';
            out += static_cast<char>(std::tolower(c));
        } else {
            out += static_cast<char>(c);
        }
    }
    return out;
}

void Registry::register_node(NodeMetadata metadata, NodeFactory factory) {
    if (metadata.factory_id.empty()) throw RegistryError("factory id must not be empty");
    if (find(metadata.factory_id)) throw RegistryError("duplicate factory id '" + metadata.factory_id + "'");
    if (metadata.factory_id == Scene::kFactoryId || metadata.factory_id == ModuleManager::kFactoryId)
        throw RegistryError("factory id '" + metadata.factory_id + "' is reserved");
    switch (metadata.kind) {
    case NodeKind::Source:
        if (metadata.input_info) throw RegistryError("source '" + metadata.factory_id + "' cannot declare input_info");
        break;
    case NodeKind::Filter:
    case NodeKind::Module:
        if (!metadata.input_info) metadata.input_info = PipelineInfo::any();
        break;
    default: throw RegistryError("only sources, filters and modules can be registered");
    }
    if (!factory) throw RegistryError("factory for '" + metadata.factory_id + "' is empty");
    entries_.push_back({std::move(metadata), std::move(factory)});
}

const NodeMetadata* Registry::find(std::string_view factory_id) const noexcept {
    for (const auto& e : entries_)
        if (e.metadata.factory_id == factory_id) return &e.metadata;
    return nullptr;
}

const NodeMetadata& Registry::metadata(std::string_view factory_id) const {
    if (auto* m = find(factory_id)) return *m;
    throw RegistryError(std::string(factory_id));
}

std::unique_ptr<Node> Registry::create_by_name(std::string_view factory_id) const {
    for (const auto& e : entries_) {
        if (e.metadata.factory_id != factory_id) continue;
        auto node = e.factory();
        if (!node || node->kind() != e.metadata.kind || node->factory_id() != e.metadata.factory_id)
            throw RegistryError("factory for '" + e.metadata.factory_id + "' produced a mismatching node");
        return node;
    }
    throw RegistryError(std::string(factory_id));
}

std::vector<NodeMetadata> Registry::applicable(const DatasetInfo& producer) const {
    std::vector<NodeMetadata> out;
    for (const auto& e : entries_) {
        if (e.metadata.kind == NodeKind::Source) continue;
        if (info_matches(*e.metadata.input_info, producer)) out.push_back(e.metadata);
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const NodeMetadata& a, const NodeMetadata& b) { return a.menu_name < b.menu_name; });
    return out;
}

const NodeMetadata* Registry::reader_for(std::string_view path) const noexcept {
    const auto dot = path.rfind('.');
    if (dot == std::string_view::npos) return nullptr;
    std::string ext(path.substr(dot + 1));
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    for (const auto& e : entries_)
        if (e.metadata.kind == NodeKind::Source && contains(e.metadata.extensions, ext)) return &e.metadata;
    return nullptr;
}

} // namespace vizpipe
