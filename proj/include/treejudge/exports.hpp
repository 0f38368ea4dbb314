/// @file exports.hpp
/// @brief Derived text exports of finished sessions (graph and radar table).

#pragma once

#include <map>
#include <string>
#include <vector>

#include "treejudge/types.hpp"

namespace treejudge {

/// `digraph` with one box per node labeled `topic | a:b | reason` and one
/// edge per parent-child link.
std::string export_tree_dot(const EvalTree& tree);

/// Predefined topics of a session in build order (first repeat).
std::vector<std::string> session_topics(const SessionResult& result);

/// `model,<topic1>,...` then one row of per-topic score_a per model. Topics
/// whose trees all failed leave an empty cell. Throws TopicMismatch when the
/// sessions disagree on their topic lists.
std::string export_radar_csv(const std::map<std::string, SessionResult>& results);

/// Quotes a CSV field when it contains a comma, quote or line break.
std::string csv_field(const std::string& value);

}  // namespace treejudge
