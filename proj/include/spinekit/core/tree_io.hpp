#pragma once

#include <iosfwd>
#include <string>

#include "spinekit/core/marked_tree.hpp"
#include "spinekit/core/skeleton.hpp"

namespace spinekit::core {

// Line-oriented text format, one particle per line:
//
//   spinekit-tree 1
//   horizon <h> origin <x>
//   <label> <birth> <death|inf> <child count|-> <time>:<position>[!] ...
//
// `!` flags a sample at which the single-particle martingale is zero. Reals are
// written in shortest round-trip form, so read(write(tree)) == tree.
//
// Skeletons use the header `spinekit-skeleton 1`, a `time <t> marks <labels...>`
// line and then `<D> <particle line>` per node. Lines starting with '#' are
// comments (the writer emits the split times that way).

void write_tree(std::ostream& os, const MarkedTree& tree);
MarkedTree read_tree(std::istream& is);

void write_skeleton(std::ostream& os, const SkeletonRealization& skeleton);
SkeletonRealization read_skeleton(std::istream& is);

std::string format_real(double value);
double parse_real(std::string_view text);

}  // namespace spinekit::core
