#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "argwin/reply_tree.hpp"

namespace argwin {

// Parsed form of one tree document before validation. `deleted` and
// `empty_text` drive corpus cleaning; unknown JSON fields are ignored.
struct TreeDocument {
    struct NodeEntry {
        TreeRecord record;
        bool deleted = false;
        bool empty_text = false;  // "text" present and blank
    };
    std::vector<NodeEntry> nodes;

    std::vector<TreeRecord> records() const;
};

// Input schema: {"nodes":[{"id":str,"parent":str|null,"polarity":
// "support"|"attack"|null,"text":str?}]}.
TreeDocument parse_tree_document(const std::string& json_text);
TreeDocument read_tree_document(const std::string& path);

ReplyTree tree_from_json(const std::string& json_text);
ReplyTree read_tree(const std::string& path);

// Serializes structure only (id/parent/polarity); loading it back yields an
// identical tree.
std::string tree_to_json(const ReplyTree& tree);
void write_tree(const ReplyTree& tree, const std::string& path);

} // namespace argwin
