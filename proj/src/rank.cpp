#include "ufp/rank.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdint>
#include <unordered_map>

#include "ufp/errors.hpp"

namespace ufp {

BaseFamily BaseFamily::edgeless() {
    return {"edgeless", [](const FiniteGraph& g) { return g.size() == 0; }};
}

BaseFamily BaseFamily::order_at_most(std::size_t p) {
    return {"order<=" + std::to_string(p), [p](const FiniteGraph& g) { return g.order() <= p; }};
}

BaseFamily BaseFamily::max_degree_at_most(std::size_t d) {
    return {"maxdeg<=" + std::to_string(d), [d](const FiniteGraph& g) {
                for (const auto& v : g.vertices())
                    if (g.degree(v) > d) return false;
                return true;
            }};
}

BaseFamily BaseFamily::all_finite() {
    return {"all-finite", [](const FiniteGraph&) { return true; }};
}

namespace {

std::optional<std::size_t> parse_bound(std::string_view spec, std::string_view prefix) {
    for (std::string_view op : {std::string_view("<="), std::string_view("≤")}) {
        const std::size_t head = prefix.size() + op.size();
        if (spec.size() > head && spec.substr(0, prefix.size()) == prefix &&
            spec.substr(prefix.size(), op.size()) == op) {
            std::size_t value = 0;
            const char* first = spec.data() + head;
            const char* last = spec.data() + spec.size();
            auto [ptr, ec] = std::from_chars(first, last, value);
            if (ec == std::errc() && ptr == last) return value;
        }
    }
    return std::nullopt;
}

} // namespace

BaseFamily BaseFamily::parse(std::string_view spec) {
    if (spec == "edgeless") return edgeless();
    if (spec == "all-finite") return all_finite();
    if (auto p = parse_bound(spec, "order")) return order_at_most(*p);
    if (auto d = parse_bound(spec, "maxdeg")) return max_degree_at_most(*d);
    throw InputError("unknown base family '" + std::string(spec) +
                     "' (expected edgeless, order<=p, maxdeg<=d or all-finite)");
}

namespace {

using Mask = std::uint64_t;

// Calls visit(combination) for every size-r subset of `items`, in
// lexicographic order of index sequences. Stops when visit returns false.
template <typename T, typename Visit>
bool for_each_combination(const std::vector<T>& items, std::size_t r, Visit&& visit) {
    const std::size_t n = items.size();
    if (r > n) return true;
    std::vector<std::size_t> idx(r);
    for (std::size_t i = 0; i < r; ++i) idx[i] = i;
    std::vector<T> chosen(r);
    while (true) {
        for (std::size_t i = 0; i < r; ++i) chosen[i] = items[idx[i]];
        if (!visit(chosen)) return false;
        std::size_t i = r;
        while (i > 0 && idx[i - 1] == n - r + (i - 1)) --i;
        if (i == 0) return true;
        ++idx[i - 1];
        for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
    }
}

class MemoRank {
public:
    MemoRank(const FiniteGraph& g, const BaseFamily& base, std::size_t k) : base_(base), k_(k) {
        names_.assign(g.vertices().begin(), g.vertices().end());
        std::unordered_map<Vertex, std::size_t> index;
        for (std::size_t i = 0; i < names_.size(); ++i) index[names_[i]] = i;
        adj_.assign(names_.size(), 0);
        for (std::size_t i = 0; i < names_.size(); ++i)
            for (const auto& w : g.neighbours(names_[i])) adj_[i] |= Mask{1} << index.at(w);
        graph_ = &g;
    }

    Mask full() const { return names_.size() == 64 ? ~Mask{0} : (Mask{1} << names_.size()) - 1; }

    std::optional<std::size_t> rank(Mask mask) {
        if (auto it = memo_.find(mask); it != memo_.end()) return it->second.rank;
        Entry entry = compute(mask);
        memo_.emplace(mask, entry);
        return entry.rank;
    }

    WitnessNode witness(Mask mask) {
        rank(mask);
        const Entry& e = memo_.at(mask);
        WitnessNode node;
        node.vertices = names_of(mask);
        node.rank = *e.rank;
        if (node.rank == 0) return node;
        node.separator = names_of(e.separator);
        for (Mask c : components(mask & ~e.separator)) node.children.push_back(witness(c));
        return node;
    }

private:
    struct Entry {
        std::optional<std::size_t> rank;
        Mask separator = 0;
    };

    VertexSet names_of(Mask m) const {
        VertexSet out;
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (m >> i & 1U) out.insert(out.end(), names_[i]);
        return out;
    }

    std::vector<Mask> components(Mask mask) const {
        std::vector<Mask> out;
        Mask rest = mask;
        while (rest) {
            Mask comp = rest & (~rest + 1);
            Mask frontier = comp;
            while (frontier) {
                const auto i = static_cast<std::size_t>(std::countr_zero(frontier));
                frontier &= frontier - 1;
                const Mask fresh = adj_[i] & mask & ~comp;
                comp |= fresh;
                frontier |= fresh;
            }
            out.push_back(comp);
            rest &= ~comp;
        }
        return out;
    }

    Entry compute(Mask mask) {
        if (base_.contains(graph_->induced(names_of(mask)))) return {0, 0};
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (mask >> i & 1U) members.push_back(i);
        const bool is_connected = components(mask).size() <= 1;

        Entry best;
        const std::size_t top = std::min(k_, members.size());
        for (std::size_t size = 0; size <= top; ++size) {
            if (size == 0 && is_connected) continue;
            for_each_combination(members, size, [&](const std::vector<std::size_t>& sep) {
                Mask s = 0;
                for (auto i : sep) s |= Mask{1} << i;
                std::size_t candidate = 1;
                for (Mask c : components(mask & ~s)) {
                    auto r = rank(c);
                    if (!r) return true;
                    candidate = std::max(candidate, *r + 1);
                    if (best.rank && candidate >= *best.rank) return true;
                }
                best = {candidate, s};
                return candidate > 1;
            });
            if (best.rank == std::size_t{1}) break;
        }
        return best;
    }

    const BaseFamily& base_;
    std::size_t k_;
    const FiniteGraph* graph_ = nullptr;
    std::vector<Vertex> names_;
    std::vector<Mask> adj_;
    std::unordered_map<Mask, Entry> memo_;
};

// Same search without a rank memo: every subproblem is recomputed. Only
// base-family membership is cached, since it does not depend on k.
class NaiveRank {
public:
    NaiveRank(const FiniteGraph& g, const BaseFamily& base, std::size_t k) : base_(base), k_(k), graph_(g) {
        names_.assign(g.vertices().begin(), g.vertices().end());
        std::unordered_map<Vertex, std::size_t> index;
        for (std::size_t i = 0; i < names_.size(); ++i) index[names_[i]] = i;
        adj_.assign(names_.size(), 0);
        for (std::size_t i = 0; i < names_.size(); ++i)
            for (const auto& w : g.neighbours(names_[i])) adj_[i] |= Mask{1} << index.at(w);
    }

    Mask full() const { return names_.size() == 64 ? ~Mask{0} : (Mask{1} << names_.size()) - 1; }

    std::optional<WitnessNode> solve(Mask mask) {
        auto tree = search(mask);
        if (!tree) return std::nullopt;
        return to_witness(*tree);
    }

private:
    struct Tree {
        Mask vertices = 0;
        Mask separator = 0;
        std::size_t rank = 0;
        std::vector<Tree> children;
    };

    bool in_base(Mask mask) {
        if (auto it = base_cache_.find(mask); it != base_cache_.end()) return it->second;
        const bool in = base_.contains(graph_.induced(names_of(mask)));
        base_cache_.emplace(mask, in);
        return in;
    }

    std::optional<Tree> search(Mask mask) {
        if (in_base(mask)) return Tree{mask, 0, 0, {}};
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (mask >> i & 1U) members.push_back(i);
        const bool is_connected = components(mask).size() <= 1;
        std::optional<Tree> best;
        for (std::size_t size = 0; size <= std::min(k_, members.size()); ++size) {
            if (size == 0 && is_connected) continue;
            for_each_combination(members, size, [&](const std::vector<std::size_t>& sep) {
                Mask s = 0;
                for (auto i : sep) s |= Mask{1} << i;
                Tree node{mask, s, 1, {}};
                for (Mask c : components(mask & ~s)) {
                    auto child = search(c);
                    if (!child) return true;
                    node.rank = std::max(node.rank, child->rank + 1);
                    if (best && node.rank >= best->rank) return true;
                    node.children.push_back(std::move(*child));
                }
                best = std::move(node);
                return best->rank > 1;
            });
            if (best && best->rank == 1) break;
        }
        return best;
    }

    WitnessNode to_witness(const Tree& t) const {
        WitnessNode node;
        node.vertices = names_of(t.vertices);
        node.separator = names_of(t.separator);
        node.rank = t.rank;
        for (const auto& c : t.children) node.children.push_back(to_witness(c));
        return node;
    }

    VertexSet names_of(Mask m) const {
        VertexSet out;
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (m >> i & 1U) out.insert(out.end(), names_[i]);
        return out;
    }

    std::vector<Mask> components(Mask mask) const {
        std::vector<Mask> out;
        Mask rest = mask;
        while (rest) {
            Mask comp = rest & (~rest + 1);
            Mask frontier = comp;
            while (frontier) {
                const auto i = static_cast<std::size_t>(std::countr_zero(frontier));
                frontier &= frontier - 1;
                const Mask fresh = adj_[i] & mask & ~comp;
                comp |= fresh;
                frontier |= fresh;
            }
            out.push_back(comp);
            rest &= ~comp;
        }
        return out;
    }

    const BaseFamily& base_;
    std::size_t k_;
    const FiniteGraph& graph_;
    std::vector<Vertex> names_;
    std::vector<Mask> adj_;
    std::unordered_map<Mask, bool> base_cache_;
};

bool replay(const FiniteGraph& h, const BaseFamily& base, std::size_t k, const WitnessNode& node) {
    if (node.vertices != h.vertices()) return false;
    if (node.rank == 0) return node.separator.empty() && node.children.empty() && base.contains(h);
    if (node.separator.size() > k) return false;
    for (const auto& v : node.separator)
        if (!h.has_vertex(v)) return false;
    const FiniteGraph rest = h.without(node.separator);
    const auto comps = rest.components();
    if (comps.size() != node.children.size()) return false;
    if (node.separator.empty() && comps.size() == 1) return false;
    for (std::size_t i = 0; i < comps.size(); ++i) {
        const auto& child = node.children[i];
        if (child.rank >= node.rank) return false;
        if (!replay(rest.induced(comps[i]), base, k, child)) return false;
    }
    return true;
}

} // namespace

std::optional<RankResult> bounded_rank(const FiniteGraph& g, const BaseFamily& base, std::size_t max_separator,
                                       const RankOptions& options) {
    if (g.order() > options.vertex_ceiling || g.order() > 64)
        throw CapacityError("graph has " + std::to_string(g.order()) + " vertices; exact rank ceiling is " +
                            std::to_string(options.vertex_ceiling));
    MemoRank search(g, base, max_separator);
    const Mask all = search.full();
    auto r = search.rank(all);
    if (!r) return std::nullopt;
    return RankResult{*r, search.witness(all)};
}

std::optional<RankResult> naive_rank(const FiniteGraph& g, const BaseFamily& base, std::size_t max_separator) {
    if (g.order() > 64) throw CapacityError("naive rank handles at most 64 vertices");
    NaiveRank search(g, base, max_separator);
    auto w = search.solve(search.full());
    if (!w) return std::nullopt;
    const std::size_t r = w->rank;
    return RankResult{r, std::move(*w)};
}

bool witness_is_valid(const FiniteGraph& g, const BaseFamily& base, std::size_t max_separator,
                      const WitnessNode& witness) {
    return replay(g, base, max_separator, witness);
}

bool rank_union_check(const FiniteGraph& g, const BaseFamily& base, std::size_t max_separator,
                      const VertexSet& separator, const std::vector<VertexSet>& components,
                      const RankOptions& options) {
    for (const auto& v : separator)
        if (!g.has_vertex(v)) throw InputError("separator contains unknown vertex '" + v + "'");
    const auto actual = g.without(separator).components();
    for (const auto& c : components)
        if (std::find(actual.begin(), actual.end(), c) == actual.end())
            throw InputError("given vertex set is not a component of G - S");

    auto whole = bounded_rank(g, base, max_separator, options);
    if (whole && whole->rank == 0) return true;
    if (components.empty()) throw InputError("rank_union_check needs at least one component");

    std::size_t child_max = 0;
    VertexSet united = separator;
    for (const auto& c : components) {
        auto r = bounded_rank(g.induced(c), base, max_separator, options);
        if (!r) return false;
        child_max = std::max(child_max, r->rank);
        united.insert(c.begin(), c.end());
    }
    const std::size_t widened = max_separator * (1 + components.size());
    auto merged = bounded_rank(g.induced(united), base, widened, options);
    return merged && merged->rank <= child_max;
}

} // namespace ufp
