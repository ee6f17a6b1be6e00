#include "maxtrust/graph.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <ostream>
#include <queue>
#include <sstream>

namespace maxtrust {

bool PrecedenceGraph::has_edge(std::size_t i, std::size_t j) const {
    const auto& s = successors[i];
    return std::binary_search(s.begin(), s.end(), j);
}

std::size_t PrecedenceGraph::edge_count() const {
    std::size_t m = 0;
    for (const auto& s : successors) m += s.size();
    return m;
}

PrecedenceGraph precedence_graph(const TropicalMatrix& a) {
    if (!a.square()) throw ShapeError("precedence_graph: matrix is not square");
    PrecedenceGraph g{a.rows(), std::vector<std::vector<std::size_t>>(a.rows())};
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (a(i, j).is_finite()) g.successors[i].push_back(j);
    return g;
}

PrecedenceGraph precedence_graph(const RealMatrix& a) {
    if (!a.square()) throw ShapeError("precedence_graph: matrix is not square");
    PrecedenceGraph g{a.rows(), std::vector<std::vector<std::size_t>>(a.rows())};
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (a(i, j) != 0.0) g.successors[i].push_back(j);
    return g;
}

std::vector<std::vector<std::size_t>> strongly_connected_components(const PrecedenceGraph& g) {
    constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
    const std::size_t n = g.n;
    std::vector<std::size_t> index(n, unvisited), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::size_t>> components;
    std::size_t counter = 0;

    // Explicit DFS frames: (node, next successor position).
    std::vector<std::pair<std::size_t, std::size_t>> frames;
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != unvisited) continue;
        frames.emplace_back(root, 0);
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!frames.empty()) {
            auto& [v, pos] = frames.back();
            const auto& succ = g.successors[v];
            if (pos < succ.size()) {
                const std::size_t w = succ[pos++];
                if (index[w] == unvisited) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            const std::size_t done = v;
            frames.pop_back();
            if (!frames.empty()) {
                const std::size_t parent = frames.back().first;
                low[parent] = std::min(low[parent], low[done]);
            }
            if (low[done] == index[done]) {
                std::vector<std::size_t> comp;
                std::size_t w = 0;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp.push_back(w);
                } while (w != done);
                std::sort(comp.begin(), comp.end());
                components.push_back(std::move(comp));
            }
        }
    }
    return components;
}

bool is_strongly_connected(const PrecedenceGraph& g) {
    return g.n > 0 && strongly_connected_components(g).size() == 1;
}

namespace {

bool irreducible_graph(const PrecedenceGraph& g) {
    if (g.n == 0) return false;
    if (g.n == 1) return g.has_edge(0, 0);
    return is_strongly_connected(g);
}

}  // namespace

bool is_irreducible(const TropicalMatrix& a) { return irreducible_graph(precedence_graph(a)); }
bool is_irreducible(const RealMatrix& a) { return irreducible_graph(precedence_graph(a)); }

std::vector<std::vector<std::size_t>> closed_classes(const PrecedenceGraph& g) {
    auto comps = strongly_connected_components(g);
    std::vector<std::size_t> comp_of(g.n);
    for (std::size_t c = 0; c < comps.size(); ++c)
        for (auto v : comps[c]) comp_of[v] = c;
    std::vector<std::vector<std::size_t>> closed;
    for (std::size_t c = 0; c < comps.size(); ++c) {
        bool leaves = false;
        for (auto v : comps[c])
            for (auto w : g.successors[v])
                if (comp_of[w] != c) leaves = true;
        if (!leaves) closed.push_back(comps[c]);
    }
    std::sort(closed.begin(), closed.end());
    return closed;
}

std::size_t class_period(const PrecedenceGraph& g, const std::vector<std::size_t>& members) {
    if (members.empty()) return 0;
    constexpr std::size_t unseen = static_cast<std::size_t>(-1);
    std::vector<bool> in_class(g.n, false);
    for (auto v : members) in_class[v] = true;
    std::vector<std::size_t> level(g.n, unseen);
    std::queue<std::size_t> bfs;
    level[members.front()] = 0;
    bfs.push(members.front());
    std::size_t period = 0;
    while (!bfs.empty()) {
        const auto v = bfs.front();
        bfs.pop();
        for (auto w : g.successors[v]) {
            if (!in_class[w]) continue;
            if (level[w] == unseen) {
                level[w] = level[v] + 1;
                bfs.push(w);
            } else {
                // Every edge closes a walk of length level[v] + 1 - level[w].
                const auto diff = static_cast<long long>(level[v]) + 1 - static_cast<long long>(level[w]);
                period = std::gcd(period, static_cast<std::size_t>(diff < 0 ? -diff : diff));
            }
        }
    }
    return period;
}

TropicalMatrix NormalForm::diagonal_block(std::size_t b) const { return block(b, b); }

TropicalMatrix NormalForm::block(std::size_t row_block, std::size_t col_block) const {
    const auto& r = blocks.at(row_block);
    const auto& c = blocks.at(col_block);
    TropicalMatrix out(r.size(), c.size());
    for (std::size_t i = 0; i < r.size(); ++i)
        for (std::size_t j = 0; j < c.size(); ++j) out(i, j) = permuted(r.begin + i, c.begin + j);
    return out;
}

bool NormalForm::block_is_zero(std::size_t row_block, std::size_t col_block) const {
    const auto& r = blocks.at(row_block);
    const auto& c = blocks.at(col_block);
    for (std::size_t i = r.begin; i < r.end; ++i)
        for (std::size_t j = c.begin; j < c.end; ++j)
            if (permuted(i, j).is_finite()) return false;
    return true;
}

std::vector<std::size_t> NormalForm::block_index() const {
    std::vector<std::size_t> out(permutation.size());
    for (std::size_t b = 0; b < blocks.size(); ++b)
        for (std::size_t k = blocks[b].begin; k < blocks[b].end; ++k) out[k] = b;
    return out;
}

TropicalMatrix NormalForm::original() const {
    const std::size_t n = permutation.size();
    TropicalMatrix out(n, n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) out(permutation[k], permutation[l]) = permuted(k, l);
    return out;
}

NormalForm normal_form(const TropicalMatrix& a) {
    const auto g = precedence_graph(a);
    auto comps = strongly_connected_components(g);
    const std::size_t q = comps.size();
    std::vector<std::size_t> comp_of(g.n);
    for (std::size_t c = 0; c < q; ++c)
        for (auto v : comps[c]) comp_of[v] = c;

    // Kahn's algorithm on the condensation, smallest member index first.
    std::vector<std::vector<std::size_t>> dag(q);
    std::vector<std::size_t> indegree(q, 0);
    for (std::size_t v = 0; v < g.n; ++v) {
        for (auto w : g.successors[v]) {
            const auto cv = comp_of[v], cw = comp_of[w];
            if (cv != cw) dag[cv].push_back(cw);
        }
    }
    for (auto& out : dag) {
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        for (auto c : out) ++indegree[c];
    }
    using Key = std::pair<std::size_t, std::size_t>;  // (smallest member, component)
    std::priority_queue<Key, std::vector<Key>, std::greater<>> ready;
    for (std::size_t c = 0; c < q; ++c)
        if (indegree[c] == 0) ready.emplace(comps[c].front(), c);

    NormalForm nf;
    nf.permutation.reserve(g.n);
    while (!ready.empty()) {
        const auto c = ready.top().second;
        ready.pop();
        const std::size_t begin = nf.permutation.size();
        nf.permutation.insert(nf.permutation.end(), comps[c].begin(), comps[c].end());
        nf.blocks.push_back({begin, nf.permutation.size()});
        for (auto d : dag[c])
            if (--indegree[d] == 0) ready.emplace(comps[d].front(), d);
    }
    nf.permuted = submatrix(a, nf.permutation, nf.permutation);
    return nf;
}

void write_normal_form(std::ostream& out, const NormalForm& nf) {
    out << "permutation";
    for (auto p : nf.permutation) out << ' ' << p;
    out << "\nblocks";
    for (const auto& b : nf.blocks) out << ' ' << b.begin << ':' << b.end;
    out << '\n';
    write_matrix(out, nf.permuted);
}

std::string format_normal_form(const NormalForm& nf) {
    std::ostringstream out;
    write_normal_form(out, nf);
    return out.str();
}

NormalForm parse_normal_form(const std::string& text) {
    std::istringstream in(text);
    NormalForm nf;
    std::string line, word;

    if (!std::getline(in, line)) throw ParseError("missing permutation line", 1, 1);
    {
        std::istringstream ls(line);
        ls >> word;
        if (word != "permutation") throw ParseError("expected 'permutation'", 1, 1);
        std::size_t p = 0;
        while (ls >> p) nf.permutation.push_back(p);
        if (!ls.eof()) throw ParseError("bad permutation entry", 1, 0);
    }
    if (!std::getline(in, line)) throw ParseError("missing blocks line", 2, 1);
    {
        std::istringstream ls(line);
        ls >> word;
        if (word != "blocks") throw ParseError("expected 'blocks'", 2, 1);
        while (ls >> word) {
            const auto colon = word.find(':');
            if (colon == std::string::npos) throw ParseError("block range must be begin:end", 2, 0);
            BlockRange b;
            const char* s = word.data();
            const char* e = s + word.size();
            const auto r1 = std::from_chars(s, s + colon, b.begin);
            const auto r2 = std::from_chars(s + colon + 1, e, b.end);
            if (r1.ec != std::errc{} || r1.ptr != s + colon || r2.ec != std::errc{} || r2.ptr != e)
                throw ParseError("bad block range '" + word + "'", 2, 0);
            nf.blocks.push_back(b);
        }
    }
    nf.permuted = read_matrix(in);

    const std::size_t n = nf.permutation.size();
    if (nf.permuted.rows() != n || nf.permuted.cols() != n) {
        throw ParseError("permuted matrix does not match permutation length", 0, 0);
    }
    std::vector<std::size_t> sorted = nf.permutation;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < n; ++i)
        if (sorted[i] != i) throw ParseError("permutation is not a bijection", 1, 0);
    std::size_t expect = 0;
    for (const auto& b : nf.blocks) {
        if (b.begin != expect || b.end <= b.begin) throw ParseError("block ranges must partition 0..n", 2, 0);
        expect = b.end;
    }
    if (expect != n) throw ParseError("block ranges must partition 0..n", 2, 0);
    return nf;
}

}  // namespace maxtrust
