#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "maxtrust/conventional.hpp"
#include "maxtrust/tropical.hpp"

namespace maxtrust {

// Directed graph with an edge (i, j) for every entry that differs from the
// algebra's additive zero (eps in max-plus, 0 in the conventional algebra).
struct PrecedenceGraph {
    std::size_t n = 0;
    std::vector<std::vector<std::size_t>> successors;  // ascending

    bool has_edge(std::size_t i, std::size_t j) const;
    std::size_t edge_count() const;
};

PrecedenceGraph precedence_graph(const TropicalMatrix& a);
PrecedenceGraph precedence_graph(const RealMatrix& a);

// Tarjan's algorithm, iterative. Components come out in reverse topological
// order of the condensation (sinks first); members are sorted ascending.
std::vector<std::vector<std::size_t>> strongly_connected_components(const PrecedenceGraph& g);

bool is_strongly_connected(const PrecedenceGraph& g);

// A single node counts as irreducible only when it carries a self-loop, so
// [[eps]] and [[0]] are reducible-degenerate.
bool is_irreducible(const TropicalMatrix& a);
bool is_irreducible(const RealMatrix& a);

// Closed classes: strongly connected components with no edge leaving them.
std::vector<std::vector<std::size_t>> closed_classes(const PrecedenceGraph& g);

// Period (gcd of cycle lengths) of the subgraph induced by a strongly
// connected node set; 0 when it has no cycle.
std::size_t class_period(const PrecedenceGraph& g, const std::vector<std::size_t>& members);

struct BlockRange {
    std::size_t begin = 0;
    std::size_t end = 0;  // exclusive
    std::size_t size() const { return end - begin; }
    friend bool operator==(const BlockRange&, const BlockRange&) = default;
};

// Simultaneous row/column permutation of A into block upper-triangular form.
// permuted(k, l) == A(permutation[k], permutation[l]); every entry below the
// diagonal blocks is eps.
struct NormalForm {
    std::vector<std::size_t> permutation;
    std::vector<BlockRange> blocks;
    TropicalMatrix permuted;

    std::size_t block_count() const { return blocks.size(); }
    TropicalMatrix diagonal_block(std::size_t b) const;
    TropicalMatrix block(std::size_t row_block, std::size_t col_block) const;
    bool block_is_zero(std::size_t row_block, std::size_t col_block) const;
    // Block index of every permuted position.
    std::vector<std::size_t> block_index() const;
    // Undo the permutation; reproduces the source matrix exactly.
    TropicalMatrix original() const;
};

// Blocks are the strongly connected components of the precedence graph,
// ordered so that every edge points from an earlier block to a later (or the
// same) one; ties go to the block holding the smallest original index.
NormalForm normal_form(const TropicalMatrix& a);

// Structured text: "permutation" line, "blocks" line of begin:end ranges,
// then the permuted matrix in the matrix text format.
void write_normal_form(std::ostream& out, const NormalForm& nf);
std::string format_normal_form(const NormalForm& nf);
NormalForm parse_normal_form(const std::string& text);

}  // namespace maxtrust
