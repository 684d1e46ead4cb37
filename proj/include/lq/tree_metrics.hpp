#pragma once

#include <cstddef>

#include "lq/tree.hpp"

namespace lq {

/// Number of a-labeled nodes.
std::size_t count_a(const Tree& t);

/// Maximum, over root-to-leaf paths, of the number of a-labeled nodes on the path.
std::size_t max_branch_a(const Tree& t);

/// Largest n such that A_n embeds homeomorphically in t (binary-a signature).
///
/// A_0 = e embeds iff t has an e leaf; A_n embeds iff some a-node has A_{n-1}
/// embedded in both children. Throws PreconditionError if an a-node is not binary.
std::size_t embed_depth(const Tree& t);

/// Full binary tree of height n with a at internal nodes and e at leaves.
Tree build_An(std::size_t n);

}  // namespace lq
