#include "oracles.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "ufp/serialization.hpp"

namespace oracle {

int SmallGraph::degree(int v) const { return std::popcount(adj[v]); }

std::string name(int i) { return std::string(1, static_cast<char>('a' + i)); }

ufp::FiniteGraph to_graph(const SmallGraph& g) {
    std::vector<ufp::Vertex> vs;
    std::vector<ufp::Edge> es;
    for (int i = 0; i < g.n; ++i) vs.push_back(name(i));
    for (int i = 0; i < g.n; ++i)
        for (int j = i + 1; j < g.n; ++j)
            if (g.edge(i, j)) es.emplace_back(name(i), name(j));
    return ufp::FiniteGraph(vs, es);
}

SmallGraph from_graph(const ufp::FiniteGraph& g) {
    std::map<ufp::Vertex, int> index;
    for (const auto& v : g.vertices()) index.emplace(v, static_cast<int>(index.size()));
    SmallGraph out(static_cast<int>(g.order()));
    for (const auto& [u, v] : g.edges()) out.add_edge(index[u], index[v]);
    return out;
}

std::uint32_t mask_of(const ufp::Partition& pi, int n) {
    std::uint32_t m = 0;
    for (int i = 0; i < n; ++i)
        if (pi.at(name(i)) == ufp::Side::one) m |= 1U << i;
    return m;
}

ufp::Partition partition_of(std::uint32_t sides, int n) {
    ufp::Partition pi;
    for (int i = 0; i < n; ++i) pi.set(name(i), (sides >> i & 1U) ? ufp::Side::one : ufp::Side::zero);
    return pi;
}

bool unfriendly_for(const SmallGraph& g, std::uint32_t sides, std::uint32_t targets) {
    for (int v = 0; v < g.n; ++v) {
        if (!(targets >> v & 1U)) continue;
        const std::uint32_t same = (sides >> v & 1U) ? sides : ~sides;
        const int friends = std::popcount(g.adj[v] & same);
        const int opponents = g.degree(v) - friends;
        if (opponents < friends) return false;
    }
    return true;
}

int cut(const SmallGraph& g, std::uint32_t sides) {
    int c = 0;
    for (int u = 0; u < g.n; ++u)
        for (int v = u + 1; v < g.n; ++v)
            if (g.edge(u, v) && ((sides >> u & 1U) != (sides >> v & 1U))) ++c;
    return c;
}

int max_cut(const SmallGraph& g) {
    int best = 0;
    for (std::uint32_t s = 0; s < (1U << g.n); ++s) best = std::max(best, cut(g, s));
    return best;
}

std::vector<SmallGraph> labelled_graphs(int n) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    std::vector<SmallGraph> out;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << pairs.size()); ++m) {
        SmallGraph g(n);
        for (std::size_t e = 0; e < pairs.size(); ++e)
            if (m >> e & 1U) g.add_edge(pairs[e].first, pairs[e].second);
        out.push_back(std::move(g));
    }
    return out;
}

namespace {

// Colour refinement from degrees; colours are ranks of canonical signatures,
// so the result is invariant under relabelling.
std::vector<int> refine(const SmallGraph& g) {
    std::vector<int> colour(g.n);
    for (int v = 0; v < g.n; ++v) colour[v] = g.degree(v);
    while (true) {
        std::vector<std::pair<int, std::vector<int>>> sig(g.n);
        for (int v = 0; v < g.n; ++v) {
            sig[v].first = colour[v];
            for (int w = 0; w < g.n; ++w)
                if (g.edge(v, w)) sig[v].second.push_back(colour[w]);
            std::sort(sig[v].second.begin(), sig[v].second.end());
        }
        std::vector<std::pair<int, std::vector<int>>> sorted = sig;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        std::vector<int> next(g.n);
        for (int v = 0; v < g.n; ++v)
            next[v] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), sig[v]) - sorted.begin());
        std::set<int> before(colour.begin(), colour.end());
        std::set<int> after(next.begin(), next.end());
        colour = next;
        if (after.size() == before.size()) return colour;
    }
}

std::uint64_t code_under(const SmallGraph& g, const std::vector<int>& order) {
    std::uint64_t code = 0;
    for (int i = 0; i < g.n; ++i)
        for (int j = i + 1; j < g.n; ++j) code = code << 1 | (g.edge(order[i], order[j]) ? 1U : 0U);
    return code;
}

// Smallest adjacency code over orderings that sort vertices by refined colour.
std::uint64_t canonical_code(const SmallGraph& g) {
    const std::vector<int> colour = refine(g);
    std::vector<int> order(g.n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return colour[a] < colour[b]; });
    std::vector<std::pair<int, int>> cells;
    for (int i = 0; i < g.n;) {
        int j = i;
        while (j < g.n && colour[order[j]] == colour[order[i]]) ++j;
        cells.emplace_back(i, j);
        i = j;
    }
    std::uint64_t best = ~std::uint64_t{0};
    // Odometer over permutations of every cell.
    std::function<void(std::size_t)> go = [&](std::size_t c) {
        if (c == cells.size()) {
            best = std::min(best, code_under(g, order));
            return;
        }
        auto first = order.begin() + cells[c].first;
        auto last = order.begin() + cells[c].second;
        std::sort(first, last);
        do go(c + 1);
        while (std::next_permutation(first, last));
    };
    go(0);
    return best;
}

} // namespace

std::vector<SmallGraph> isomorphism_classes(int n) {
    if (n == 0) return {SmallGraph(0)};
    std::vector<SmallGraph> out;
    std::set<std::uint64_t> seen;
    for (const auto& base : isomorphism_classes(n - 1))
        for (std::uint32_t nb = 0; nb < (1U << (n - 1)); ++nb) {
            SmallGraph g(n);
            for (int v = 0; v < n - 1; ++v) g.adj[v] = base.adj[v];
            for (int v = 0; v < n - 1; ++v)
                if (nb >> v & 1U) g.add_edge(v, n - 1);
            if (seen.insert(canonical_code(g)).second) out.push_back(std::move(g));
        }
    return out;
}

SmallGraph random_graph(std::mt19937& rng, int n, double p) {
    std::bernoulli_distribution coin(p);
    SmallGraph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (coin(rng)) g.add_edge(i, j);
    return g;
}

SmallGraph path(int n) {
    SmallGraph g(n);
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    return g;
}

SmallGraph complete(int n) {
    SmallGraph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
    return g;
}

SmallGraph cycle(int n) {
    SmallGraph g = path(n);
    if (n > 2) g.add_edge(0, n - 1);
    return g;
}

namespace {

std::vector<std::uint32_t> components_of(const SmallGraph& g, std::uint32_t mask) {
    std::vector<std::uint32_t> out;
    std::uint32_t rest = mask;
    while (rest) {
        std::uint32_t comp = rest & (~rest + 1);
        bool grew = true;
        while (grew) {
            grew = false;
            for (int v = 0; v < g.n; ++v)
                if ((comp >> v & 1U) && (g.adj[v] & mask & ~comp)) {
                    comp |= g.adj[v] & mask;
                    grew = true;
                }
        }
        out.push_back(comp);
        rest &= ~comp;
    }
    return out;
}

} // namespace

int rank_by_definition(const SmallGraph& g, std::uint32_t mask, int k) {
    bool edgeless = true;
    for (int v = 0; v < g.n; ++v)
        if ((mask >> v & 1U) && (g.adj[v] & mask)) edgeless = false;
    if (edgeless) return 0;
    const bool connected = components_of(g, mask).size() <= 1;
    int best = -1;
    for (std::uint32_t s = mask;; s = (s - 1) & mask) {
        if (std::popcount(s) <= k && !(s == 0 && connected)) {
            int r = 1;
            for (auto c : components_of(g, mask & ~s)) {
                const int cr = rank_by_definition(g, c, k);
                if (cr < 0) {
                    r = -1;
                    break;
                }
                r = std::max(r, cr + 1);
            }
            if (r > 0 && (best < 0 || r < best)) best = r;
        }
        if (s == 0) break;
    }
    return best;
}

std::filesystem::path corpus_dir() { return UFP_CORPUS_DIR; }

std::vector<std::filesystem::path> corpus_presentations() {
    std::vector<std::filesystem::path> out;
    for (const auto& entry : std::filesystem::directory_iterator(corpus_dir() / "presentations"))
        if (entry.path().extension() == ".json") out.push_back(entry.path());
    std::sort(out.begin(), out.end());
    return out;
}

ufp::PresentationPtr load_presentation(const std::filesystem::path& path) {
    return ufp::presentation_from_json(ufp::read_json_file(path));
}

ufp::FiniteGraph load_graph(const std::string& name) {
    return ufp::graph_from_json(ufp::read_json_file(corpus_dir() / "graphs" / (name + ".json")));
}

} // namespace oracle
