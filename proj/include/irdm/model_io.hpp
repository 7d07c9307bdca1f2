#pragma once

#include <iosfwd>
#include <string>

#include "irdm/c45.hpp"
#include "irdm/sysfor.hpp"

namespace irdm {

// Self-describing line-oriented text format for trained models; the layout
// is documented in the README. Doubles round-trip exactly.
void write_tree(std::ostream& out, const DecisionTree& tree);
DecisionTree read_tree(std::istream& in);

void save_tree(const DecisionTree& tree, const std::string& path);
DecisionTree load_tree(const std::string& path);

void write_forest(std::ostream& out, const Forest& forest);
Forest read_forest(std::istream& in);

void save_forest(const Forest& forest, const std::string& path);
Forest load_forest(const std::string& path);

}  // namespace irdm
