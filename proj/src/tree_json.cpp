#include "argwin/tree_json.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace argwin {

using nlohmann::json;

std::vector<TreeRecord> TreeDocument::records() const {
    std::vector<TreeRecord> out;
    out.reserve(nodes.size());
    for (const auto& entry : nodes) out.push_back(entry.record);
    return out;
}

TreeDocument parse_tree_document(const std::string& json_text) {
    json doc = json::parse(json_text, nullptr, false);
    if (doc.is_discarded())
        throw Error(ErrorCode::parse_error, "invalid JSON");
    if (!doc.is_object() || !doc.contains("nodes") || !doc["nodes"].is_array())
        throw Error(ErrorCode::parse_error, "tree document must be {\"nodes\": [...]}");

    TreeDocument out;
    out.nodes.reserve(doc["nodes"].size());
    for (const auto& item : doc["nodes"]) {
        if (!item.is_object() || !item.contains("id") || !item["id"].is_string())
            throw Error(ErrorCode::parse_error, "node entry lacks a string id");
        TreeDocument::NodeEntry entry;
        entry.record.id = item["id"].get<std::string>();
        if (item.contains("parent") && !item["parent"].is_null()) {
            if (!item["parent"].is_string())
                throw Error(ErrorCode::parse_error, "parent must be a string or null");
            entry.record.parent = item["parent"].get<std::string>();
        }
        if (item.contains("polarity") && !item["polarity"].is_null()) {
            if (!item["polarity"].is_string())
                throw Error(ErrorCode::parse_error, "polarity must be a string or null");
            entry.record.polarity = polarity_from_string(item["polarity"].get<std::string>());
        }
        if (item.contains("deleted") && item["deleted"].is_boolean())
            entry.deleted = item["deleted"].get<bool>();
        if (item.contains("text") && item["text"].is_string()) {
            const auto text = item["text"].get<std::string>();
            entry.empty_text = text.find_first_not_of(" \t\r\n") == std::string::npos;
        }
        out.nodes.push_back(std::move(entry));
    }
    return out;
}

TreeDocument read_tree_document(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::unreadable_path, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_tree_document(buf.str());
}

ReplyTree tree_from_json(const std::string& json_text) {
    return ReplyTree::build(parse_tree_document(json_text).records());
}

ReplyTree read_tree(const std::string& path) {
    return ReplyTree::build(read_tree_document(path).records());
}

std::string tree_to_json(const ReplyTree& tree) {
    json nodes = json::array();
    for (const auto& node : tree.nodes()) {
        json entry;
        entry["id"] = node.id;
        entry["parent"] =
            node.parent < 0 ? json(nullptr) : json(tree.node(node.parent).id);
        entry["polarity"] =
            node.polarity ? json(to_string(*node.polarity)) : json(nullptr);
        nodes.push_back(std::move(entry));
    }
    return json{{"nodes", std::move(nodes)}}.dump(2);
}

void write_tree(const ReplyTree& tree, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw Error(ErrorCode::unreadable_path, "cannot write '" + path + "'");
    out << tree_to_json(tree) << '\n';
}

} // namespace argwin
