#pragma once

#include "../json_codec.hpp"
#include "corsica/tree/tree.hpp"

namespace corsica::tree {

Json tree_to_json(const DecisionTree& tree);
DecisionTree tree_from_json(const Json& j);

}  // namespace corsica::tree
