#include "ufp/symbolic_solver.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>

#include "ufp/errors.hpp"
#include "ufp/finite_solver.hpp"

namespace ufp {

SymbolicPartitionPtr SymbolicPartition::make_leaf(Partition colours) {
    auto out = std::make_shared<SymbolicPartition>();
    out->leaf = true;
    out->colours = std::move(colours);
    return out;
}

SymbolicPartitionPtr SymbolicPartition::make_glue(Partition colours, std::vector<FamilyColouring> families) {
    auto out = std::make_shared<SymbolicPartition>();
    out->leaf = false;
    out->colours = std::move(colours);
    out->families = std::move(families);
    return out;
}

SymbolicPartition SymbolicPartition::swapped() const {
    SymbolicPartition out;
    out.leaf = leaf;
    out.colours = colours.swapped();
    auto swap_ptr = [](const SymbolicPartitionPtr& p) -> SymbolicPartitionPtr {
        return p ? std::make_shared<const SymbolicPartition>(p->swapped()) : nullptr;
    };
    for (const auto& fam : families) {
        FamilyColouring fc;
        fc.default_colouring = swap_ptr(fam.default_colouring);
        for (const auto& [idx, exc] : fam.exceptions) fc.exceptions.emplace(idx, swap_ptr(exc));
        out.families.push_back(std::move(fc));
    }
    return out;
}

bool SymbolicPartition::uses_exceptions() const {
    for (const auto& fam : families) {
        if (!fam.exceptions.empty()) return true;
        if (fam.default_colouring && fam.default_colouring->uses_exceptions()) return true;
    }
    return false;
}

namespace {

bool same(const SymbolicPartitionPtr& a, const SymbolicPartitionPtr& b) {
    if (!a || !b) return !a && !b;
    return *a == *b;
}

} // namespace

bool operator==(const SymbolicPartition& a, const SymbolicPartition& b) {
    if (a.leaf != b.leaf || !(a.colours == b.colours) || a.families.size() != b.families.size()) return false;
    for (std::size_t f = 0; f < a.families.size(); ++f) {
        const auto& x = a.families[f];
        const auto& y = b.families[f];
        if (!same(x.default_colouring, y.default_colouring) || x.exceptions.size() != y.exceptions.size())
            return false;
        for (auto i = x.exceptions.begin(), j = y.exceptions.begin(); i != x.exceptions.end(); ++i, ++j)
            if (i->first != j->first || !same(i->second, j->second)) return false;
    }
    return true;
}

namespace {

using Counts = std::array<std::size_t, 2>;
// Boundary vertex -> number of parent neighbours on side 0 and on side 1.
using Context = std::map<Vertex, Counts>;

Counts context_of(const Context& ctx, const Vertex& v) {
    auto it = ctx.find(v);
    return it == ctx.end() ? Counts{0, 0} : it->second;
}

std::size_t attachment_degree(const CopyFamily& fam, const Vertex& s) {
    std::size_t n = 0;
    for (const auto& [from, to] : fam.attachment)
        if (from == s) ++n;
    return n;
}

Context child_context(const CopyFamily& fam, const Partition& colours) {
    Context ctx;
    for (const auto& b : fam.child->boundary()) ctx[b] = {0, 0};
    for (const auto& [s, b] : fam.attachment) ++ctx[b][to_int(colours.at(s))];
    return ctx;
}

// Opponents one copy coloured `child` gives each separator vertex, in
// separator order.
std::vector<std::size_t> signature_of(const CopyFamily& fam, const std::vector<Vertex>& separator,
                                      const Partition& colours, const Partition& child) {
    std::vector<std::size_t> sig(separator.size(), 0);
    for (std::size_t i = 0; i < separator.size(); ++i)
        for (const auto& [s, b] : fam.attachment)
            if (s == separator[i] && child.at(b) != colours.at(s)) ++sig[i];
    return sig;
}

struct FixedTree {
    std::map<Vertex, Side> own;
    std::map<std::size_t, std::map<std::size_t, FixedTree>> copies;

    bool empty() const { return own.empty() && copies.empty(); }
    bool fixes(const Vertex& v) const { return own.count(v) != 0; }
};

FixedTree fixed_tree(const Presentation& p, const FixedColours& fixed) {
    FixedTree root;
    for (const auto& [address, side] : fixed) {
        require_address(p, address);
        FixedTree* node = &root;
        for (const auto& step : address.steps) node = &node->copies[step.family][step.copy];
        node->own[address.vertex] = side;
    }
    return root;
}

const FixedTree* subtree(const FixedTree* fixed, std::size_t family, std::size_t copy) {
    if (!fixed) return nullptr;
    auto f = fixed->copies.find(family);
    if (f == fixed->copies.end()) return nullptr;
    auto c = f->second.find(copy);
    return c == f->second.end() ? nullptr : &c->second;
}

SymbolicPartitionPtr zero_colouring(const Presentation& node) {
    Partition colours = Partition::uniform(node.local().vertices(), Side::zero);
    if (node.is_leaf()) return SymbolicPartition::make_leaf(std::move(colours));
    std::vector<FamilyColouring> fams;
    for (const auto& fam : node.families()) fams.push_back({zero_colouring(*fam.child), {}});
    return SymbolicPartition::make_glue(std::move(colours), std::move(fams));
}

Partition colouring_from_code(const std::vector<Vertex>& vertices, std::uint64_t code) {
    Partition out;
    const std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i) out.set(vertices[i], (code >> (n - 1 - i) & 1U) ? Side::one : Side::zero);
    return out;
}

bool agrees(const Partition& colours, const FixedTree* fixed) {
    if (!fixed) return true;
    for (const auto& [v, side] : fixed->own)
        if (colours.at(v) != side) return false;
    return true;
}

struct Candidate {
    std::vector<std::size_t> sig;
    SymbolicPartitionPtr sigma;
};

std::vector<Candidate> candidates(const std::vector<SymbolicPartitionPtr>& options, const CopyFamily& fam,
                                  const std::vector<Vertex>& separator, const Partition& colours) {
    std::vector<Candidate> out;
    std::set<std::vector<std::size_t>> seen;
    for (const auto& o : options) {
        auto sig = signature_of(fam, separator, colours, o->colours);
        if (seen.insert(sig).second) out.push_back({std::move(sig), o});
    }
    std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) { return a.sig < b.sig; });
    return out;
}

constexpr std::size_t none = std::numeric_limits<std::size_t>::max();

struct Choice {
    std::size_t def = none;
    std::vector<std::size_t> free;
    std::vector<std::size_t> fixed_pick;
    std::vector<long long> contrib;
    std::uint64_t omega_mask = 0;
};

struct FamilyPlan {
    const CopyFamily* fam = nullptr;
    std::vector<Candidate> defaults;
    std::vector<std::pair<std::size_t, std::vector<Candidate>>> fixed_copies;
    bool omega = false;
    bool zero = false;
    std::size_t free_copies = 0;
};

class Search {
public:
    explicit Search(const SolverOptions& options) : opts_(options) {}

    const std::vector<SymbolicPartitionPtr>& options(const Presentation& node, const Context& ctx) {
        auto key = std::make_pair(&node, ctx);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        auto result = enumerate(node, ctx, nullptr, false, false);
        return memo_.emplace(std::move(key), std::move(result)).first->second;
    }

    std::vector<SymbolicPartitionPtr> enumerate(const Presentation& node, const Context& ctx, const FixedTree* fixed,
                                                bool first_only, bool symmetric) {
        if (node.is_leaf()) return leaf_options(node, ctx, fixed, first_only, symmetric);
        const std::vector<Vertex> sep(node.local().vertices().begin(), node.local().vertices().end());
        if (sep.size() > opts_.max_separator || sep.size() >= 64)
            throw CapacityError("separator of order " + std::to_string(sep.size()) + " exceeds the bound " +
                                std::to_string(opts_.max_separator));
        std::vector<SymbolicPartitionPtr> out;
        const std::uint64_t total = std::uint64_t{1} << sep.size();
        for (std::uint64_t code = 0; code < total; ++code) {
            Partition colours = colouring_from_code(sep, code);
            if (symmetric && colours.at(sep.front()) == Side::one) continue;
            if (!agrees(colours, fixed)) continue;
            if (auto sigma = glue_with(node, ctx, fixed, colours, sep)) {
                out.push_back(std::move(*sigma));
                if (first_only) break;
            }
        }
        return out;
    }

private:
    static bool leaf_happy(const FiniteGraph& g, const Context& ctx, const Partition& colours, const FixedTree* fixed) {
        for (const auto& v : g.vertices()) {
            if (fixed && fixed->fixes(v)) continue;
            const Side side = colours.at(v);
            const Counts c = context_of(ctx, v);
            std::size_t opp = c[to_int(opposite(side))];
            std::size_t deg = c[0] + c[1] + g.degree(v);
            for (const auto& w : g.neighbours(v))
                if (colours.at(w) != side) ++opp;
            if (2 * opp < deg) return false;
        }
        return true;
    }

    std::vector<SymbolicPartitionPtr> leaf_options(const Presentation& node, const Context& ctx, const FixedTree* fixed,
                                                   bool first_only, bool symmetric) {
        const FiniteGraph& g = node.local();
        const std::vector<Vertex> vs(g.vertices().begin(), g.vertices().end());
        std::vector<SymbolicPartitionPtr> out;
        if (vs.size() > opts_.max_leaf) {
            out.push_back(SymbolicPartition::make_leaf(local_search(g, ctx, fixed)));
            return out;
        }
        const std::uint64_t total = std::uint64_t{1} << vs.size();
        for (std::uint64_t code = 0; code < total; ++code) {
            Partition colours = colouring_from_code(vs, code);
            if (symmetric && colours.at(vs.front()) == Side::one) continue;
            if (!agrees(colours, fixed) || !leaf_happy(g, ctx, colours, fixed)) continue;
            out.push_back(SymbolicPartition::make_leaf(std::move(colours)));
            if (first_only) break;
        }
        return out;
    }

    // Parent neighbours become fixed pendant vertices; their names contain '/'
    // and so cannot clash with leaf vertices.
    static Partition local_search(const FiniteGraph& g, const Context& ctx, const FixedTree* fixed) {
        std::vector<Vertex> vertices(g.vertices().begin(), g.vertices().end());
        std::vector<Edge> edges = g.edges();
        Partition pinned;
        for (const auto& [v, counts] : ctx)
            for (int side = 0; side < 2; ++side)
                for (std::size_t i = 0; i < counts[side]; ++i) {
                    Vertex w = "ctx/" + v + "/" + std::to_string(side) + "/" + std::to_string(i);
                    vertices.push_back(w);
                    edges.emplace_back(v, w);
                    pinned.set(w, side_from_int(side));
                }
        if (fixed)
            for (const auto& [v, side] : fixed->own) pinned.set(v, side);
        const FiniteGraph h(vertices, edges);
        return extend_pre_partition(h, pinned).partition.restricted(g.vertices());
    }

    std::optional<SymbolicPartitionPtr> glue_with(const Presentation& node, const Context& ctx, const FixedTree* fixed,
                                                  const Partition& colours, const std::vector<Vertex>& sep) {
        const std::size_t n = sep.size();
        const std::size_t nf = node.families().size();
        std::vector<FamilyPlan> plans(nf);
        std::vector<Context> contexts(nf);

        for (std::size_t f = 0; f < nf; ++f) {
            const auto& fam = node.families()[f];
            auto& plan = plans[f];
            plan.fam = &fam;
            plan.omega = fam.multiplicity.is_omega();
            plan.zero = fam.multiplicity.is_zero();
            contexts[f] = child_context(fam, colours);
            std::size_t fixed_count = 0;
            if (fixed)
                if (auto it = fixed->copies.find(f); it != fixed->copies.end()) fixed_count = it->second.size();
            if (fixed_count > opts_.max_exceptions)
                throw CapacityError("family " + std::to_string(f) + " needs " + std::to_string(fixed_count) +
                                    " exceptions for fixed copies; the budget is " +
                                    std::to_string(opts_.max_exceptions));
            plan.free_copies = plan.omega ? 0 : fam.multiplicity.value() - fixed_count;
            if (plan.omega || plan.free_copies > 0)
                plan.defaults = candidates(options(*fam.child, contexts[f]), fam, sep, colours);
            if (fixed_count > 0)
                for (const auto& [copy, tree] : fixed->copies.at(f)) {
                    auto opts = enumerate(*fam.child, contexts[f], &tree, false, false);
                    auto cands = candidates(opts, fam, sep, colours);
                    if (cands.empty()) return std::nullopt;
                    plan.fixed_copies.emplace_back(copy, std::move(cands));
                }
        }

        std::vector<long long> need(n, 0);
        std::vector<bool> finite_need(n, false);
        std::uint64_t omega_need = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const Vertex& s = sep[i];
            if (fixed && fixed->fixes(s)) continue;
            const Side side = colours.at(s);
            const Counts c = context_of(ctx, s);
            std::size_t deg = c[0] + c[1] + node.local().degree(s);
            std::size_t opp = c[to_int(opposite(side))];
            for (const auto& w : node.local().neighbours(s))
                if (colours.at(w) != side) ++opp;
            bool omega_degree = false;
            for (const auto& fam : node.families()) {
                const std::size_t a = attachment_degree(fam, s);
                if (a == 0 || fam.multiplicity.is_zero()) continue;
                if (fam.multiplicity.is_omega())
                    omega_degree = true;
                else
                    deg += a * fam.multiplicity.value();
            }
            if (omega_degree) {
                omega_need |= std::uint64_t{1} << i;
            } else {
                finite_need[i] = true;
                need[i] = static_cast<long long>((deg + 1) / 2) - static_cast<long long>(opp);
            }
        }

        for (int pass = 0; pass < 2; ++pass) {
            std::vector<std::vector<Choice>> choices(nf);
            bool feasible = true;
            for (std::size_t f = 0; f < nf && feasible; ++f) {
                choices[f] = family_choices(plans[f], n, pass == 1);
                feasible = !choices[f].empty();
            }
            if (!feasible) return std::nullopt;
            if (pass == 1) {
                bool any_free = false;
                for (const auto& plan : plans)
                    if (!plan.omega && plan.free_copies > 1 && plan.fixed_copies.size() < opts_.max_exceptions)
                        any_free = true;
                if (!any_free) return std::nullopt;
            }

            // Optimistic bounds for pruning: best contribution still available
            // from families f.. for each separator vertex.
            std::vector<std::vector<long long>> reach(nf + 1, std::vector<long long>(n, 0));
            std::vector<std::uint64_t> omega_reach(nf + 1, 0);
            for (std::size_t f = nf; f-- > 0;) {
                reach[f] = reach[f + 1];
                omega_reach[f] = omega_reach[f + 1];
                std::vector<long long> best(n, std::numeric_limits<long long>::min());
                for (const auto& ch : choices[f]) {
                    for (std::size_t i = 0; i < n; ++i) best[i] = std::max(best[i], ch.contrib[i]);
                    omega_reach[f] |= ch.omega_mask;
                }
                for (std::size_t i = 0; i < n; ++i) reach[f][i] += best[i];
            }

            std::vector<std::size_t> picked(nf, 0);
            std::vector<long long> acc(n, 0);
            std::uint64_t omega_acc = 0;
            if (dfs(0, choices, reach, omega_reach, need, finite_need, omega_need, picked, acc, omega_acc))
                return assemble(node, plans, choices, picked, colours);
        }
        return std::nullopt;
    }

    static bool dfs(std::size_t f, const std::vector<std::vector<Choice>>& choices,
                    const std::vector<std::vector<long long>>& reach, const std::vector<std::uint64_t>& omega_reach,
                    const std::vector<long long>& need, const std::vector<bool>& finite_need, std::uint64_t omega_need,
                    std::vector<std::size_t>& picked, std::vector<long long>& acc, std::uint64_t omega_acc) {
        const std::size_t n = need.size();
        for (std::size_t i = 0; i < n; ++i)
            if (finite_need[i] && acc[i] + reach[f][i] < need[i]) return false;
        if ((omega_need & ~(omega_acc | omega_reach[f])) != 0) return false;
        if (f == choices.size()) return true;
        for (std::size_t c = 0; c < choices[f].size(); ++c) {
            const Choice& ch = choices[f][c];
            for (std::size_t i = 0; i < n; ++i) acc[i] += ch.contrib[i];
            picked[f] = c;
            if (dfs(f + 1, choices, reach, omega_reach, need, finite_need, omega_need, picked, acc,
                    omega_acc | ch.omega_mask))
                return true;
            for (std::size_t i = 0; i < n; ++i) acc[i] -= ch.contrib[i];
        }
        return false;
    }

    // Choices for one family, deduplicated by their effect on the separator.
    // Without exceptions: default candidates in signature order times the
    // candidates for each fixed copy. With exceptions: additionally every
    // reachable sum of up to the budget of free exception signatures.
    std::vector<Choice> family_choices(const FamilyPlan& plan, std::size_t n, bool with_exceptions) const {
        std::vector<Choice> bases;
        if (plan.zero || (!plan.omega && plan.free_copies == 0)) {
            bases.push_back(Choice{none, {}, {}, std::vector<long long>(n, 0), 0});
        } else {
            if (plan.defaults.empty()) return {};
            std::size_t max_k = 0;
            if (with_exceptions && !plan.omega) {
                const std::size_t budget = opts_.max_exceptions > plan.fixed_copies.size()
                                               ? opts_.max_exceptions - plan.fixed_copies.size()
                                               : 0;
                max_k = std::min(budget, plan.free_copies - 1);
            }
            // levels[k]: reachable sums of k exception signatures -> chosen indices.
            std::vector<std::map<std::vector<long long>, std::vector<std::size_t>>> levels(max_k + 1);
            levels[0].emplace(std::vector<long long>(n, 0), std::vector<std::size_t>{});
            for (std::size_t k = 0; k < max_k; ++k)
                for (const auto& [sum, idx] : levels[k])
                    for (std::size_t e = idx.empty() ? 0 : idx.back(); e < plan.defaults.size(); ++e) {
                        auto next = sum;
                        for (std::size_t i = 0; i < n; ++i) next[i] += static_cast<long long>(plan.defaults[e].sig[i]);
                        if (levels[k + 1].count(next)) continue;
                        auto chosen = idx;
                        chosen.push_back(e);
                        levels[k + 1].emplace(std::move(next), std::move(chosen));
                    }
            for (std::size_t k = 0; k <= max_k; ++k)
                for (std::size_t d = 0; d < plan.defaults.size(); ++d)
                    for (const auto& [sum, idx] : levels[k]) {
                        Choice ch;
                        ch.def = d;
                        ch.free = idx;
                        ch.contrib = sum;
                        const auto& sig = plan.defaults[d].sig;
                        for (std::size_t i = 0; i < n; ++i) {
                            if (!plan.omega)
                                ch.contrib[i] += static_cast<long long>((plan.free_copies - k) * sig[i]);
                            else if (sig[i] > 0)
                                ch.omega_mask |= std::uint64_t{1} << i;
                        }
                        bases.push_back(std::move(ch));
                    }
        }

        std::vector<Choice> out;
        std::set<std::pair<std::vector<long long>, std::uint64_t>> seen;
        std::vector<std::size_t> pick(plan.fixed_copies.size(), 0);
        for (const auto& base : bases) {
            std::fill(pick.begin(), pick.end(), 0);
            while (true) {
                Choice ch = base;
                ch.fixed_pick = pick;
                for (std::size_t j = 0; j < pick.size(); ++j)
                    for (std::size_t i = 0; i < n; ++i)
                        ch.contrib[i] += static_cast<long long>(plan.fixed_copies[j].second[pick[j]].sig[i]);
                if (seen.emplace(ch.contrib, ch.omega_mask).second) out.push_back(std::move(ch));
                std::size_t j = 0;
                while (j < pick.size() && ++pick[j] == plan.fixed_copies[j].second.size()) pick[j++] = 0;
                if (j == pick.size()) break;
            }
        }
        return out;
    }

    static SymbolicPartitionPtr assemble(const Presentation& node, const std::vector<FamilyPlan>& plans,
                                         const std::vector<std::vector<Choice>>& choices,
                                         const std::vector<std::size_t>& picked, const Partition& colours) {
        std::vector<FamilyColouring> fams;
        for (std::size_t f = 0; f < plans.size(); ++f) {
            const auto& plan = plans[f];
            const Choice& ch = choices[f][picked[f]];
            FamilyColouring fc;
            fc.default_colouring =
                ch.def == none ? zero_colouring(*node.families()[f].child) : plan.defaults[ch.def].sigma;
            std::set<std::size_t> taken;
            for (std::size_t j = 0; j < plan.fixed_copies.size(); ++j) {
                const std::size_t copy = plan.fixed_copies[j].first;
                fc.exceptions[copy] = plan.fixed_copies[j].second[ch.fixed_pick[j]].sigma;
                taken.insert(copy);
            }
            std::size_t slot = 0;
            for (std::size_t e : ch.free) {
                while (taken.count(slot)) ++slot;
                fc.exceptions[slot] = plan.defaults[e].sigma;
                taken.insert(slot);
            }
            fams.push_back(std::move(fc));
        }
        return SymbolicPartition::make_glue(colours, std::move(fams));
    }

    SolverOptions opts_;
    std::map<std::pair<const Presentation*, Context>, std::vector<SymbolicPartitionPtr>> memo_;
};

void require_compatible(const Presentation& node, const SymbolicPartition& sigma, const std::string& path) {
    if (node.is_leaf() != sigma.leaf)
        throw InputError(path + ": partition is a " + (sigma.leaf ? "leaf" : "glue") + " colouring but the node is a " +
                         (node.is_leaf() ? "leaf" : "glue node"));
    if (sigma.colours.domain() != node.local().vertices())
        throw InputError(path + ": colours must cover exactly the " + (node.is_leaf() ? "leaf" : "separator") +
                         " vertices");
    if (sigma.families.size() != node.families().size())
        throw InputError(path + ": expected " + std::to_string(node.families().size()) + " family colourings, got " +
                         std::to_string(sigma.families.size()));
    for (std::size_t f = 0; f < node.families().size(); ++f) {
        const auto& fam = node.families()[f];
        const auto& fc = sigma.families[f];
        const std::string fpath = path + ".families[" + std::to_string(f) + "]";
        if (!fc.default_colouring) throw InputError(fpath + ": missing default colouring");
        require_compatible(*fam.child, *fc.default_colouring, fpath + ".default");
        for (const auto& [idx, exc] : fc.exceptions) {
            if (fam.multiplicity.is_finite() && idx >= fam.multiplicity.value())
                throw InputError(fpath + ": exception index " + std::to_string(idx) + " not below multiplicity " +
                                 fam.multiplicity.to_string());
            if (!exc) throw InputError(fpath + ": missing exception colouring");
            require_compatible(*fam.child, *exc, fpath + ".exceptions." + std::to_string(idx));
        }
    }
}

void check_node(const Presentation& node, const SymbolicPartition& sigma, const Context& ctx,
                const std::string& prefix, const FixedTree* fixed, CheckReport& out) {
    const auto& local = node.local();
    for (const auto& v : local.vertices()) {
        const Side side = sigma.colours.at(v);
        const Counts c = context_of(ctx, v);
        std::uint64_t opp = c[to_int(opposite(side))];
        std::uint64_t fr = c[to_int(side)];
        for (const auto& w : local.neighbours(v))
            (sigma.colours.at(w) != side ? opp : fr) += 1;
        CheckEntry e;
        e.opponents = SymbolicCardinal(opp);
        e.friends = SymbolicCardinal(fr);
        for (std::size_t f = 0; f < node.families().size(); ++f) {
            const auto& fam = node.families()[f];
            const auto& fc = sigma.families[f];
            if (fam.multiplicity.is_zero() || attachment_degree(fam, v) == 0) continue;
            auto per_copy = [&](const SymbolicPartition& child) {
                std::pair<std::uint64_t, std::uint64_t> of{0, 0};
                for (const auto& [s, b] : fam.attachment)
                    if (s == v) (child.colours.at(b) != side ? of.first : of.second) += 1;
                return of;
            };
            const SymbolicCardinal defaults =
                fam.multiplicity.is_omega() ? SymbolicCardinal::omega()
                                            : SymbolicCardinal(fam.multiplicity.value() - fc.exceptions.size());
            const auto [dopp, dfr] = per_copy(*fc.default_colouring);
            e.opponents += defaults * SymbolicCardinal(dopp);
            e.friends += defaults * SymbolicCardinal(dfr);
            for (const auto& [idx, exc] : fc.exceptions) {
                const auto [xopp, xfr] = per_copy(*exc);
                e.opponents += SymbolicCardinal(xopp);
                e.friends += SymbolicCardinal(xfr);
            }
        }
        e.address = prefix + terminal_name(node, v);
        e.degree = e.opponents + e.friends;
        e.happy = e.degree.is_omega() ? e.opponents.is_omega() : 2 * e.opponents.value() >= e.degree.value();
        e.fixed = fixed && fixed->fixes(v);
        if (!e.happy && !e.fixed) out.unhappy.push_back(e.address);
        out.entries.push_back(std::move(e));
    }
    for (std::size_t f = 0; f < node.families().size(); ++f) {
        const auto& fam = node.families()[f];
        const auto& fc = sigma.families[f];
        if (fam.multiplicity.is_zero()) continue;
        const Context child_ctx = child_context(fam, sigma.colours);
        const std::string base = prefix + std::to_string(f);
        if (fam.multiplicity.is_omega() || fc.exceptions.size() < fam.multiplicity.value())
            check_node(*fam.child, *fc.default_colouring, child_ctx, base + "[*]/", nullptr, out);
        for (const auto& [idx, exc] : fc.exceptions)
            check_node(*fam.child, *exc, child_ctx, base + "[" + std::to_string(idx) + "]/", subtree(fixed, f, idx),
                       out);
    }
}

SolverState state_for(const Presentation& p, const SymbolicPartition& sigma, const CheckReport& report,
                      const SolverOptions& options) {
    SolverState state;
    state.used_exceptions = sigma.uses_exceptions();
    state.unhappy = report.unhappy;
    if (p.is_leaf()) return state;
    state.classes = classify_S(p);
    const std::vector<Vertex> sep(p.local().vertices().begin(), p.local().vertices().end());
    for (std::size_t f = 0; f < p.families().size(); ++f) {
        const auto& fam = p.families()[f];
        const auto& fc = sigma.families[f];
        state.signatures.push_back(family_signatures(p, f, sigma.colours, options));
        OpponentSignature chosen;
        const auto sig = signature_of(fam, sep, sigma.colours, fc.default_colouring->colours);
        for (std::size_t i = 0; i < sep.size(); ++i) chosen.opponents[sep[i]] = sig[i];
        state.chosen_defaults.push_back(std::move(chosen));
        std::vector<std::size_t> idx;
        for (const auto& [i, exc] : fc.exceptions) idx.push_back(i);
        state.exceptions.push_back(std::move(idx));
    }
    return state;
}

SymbolicSolution finish(const Presentation& p, SymbolicPartition sigma, const FixedColours& fixed,
                        const SolverOptions& options) {
    const CheckReport report = check_symbolic(p, sigma, fixed);
    if (!report.ok())
        throw InvariantViolation("solver produced a partition with unhappy positions, first: " + report.unhappy.front());
    for (const auto& [address, side] : fixed)
        if (colour_at(p, sigma, address) != side)
            throw InvariantViolation("solver changed the fixed colour of " + address.to_string());
    SolverState state = state_for(p, sigma, report, options);
    return {std::move(sigma), std::move(state)};
}

SymbolicSolution solve(const Presentation& p, const FixedColours& fixed, const SolverOptions& options) {
    require_valid(p);
    const FixedTree tree = fixed_tree(p, fixed);
    if (p.is_leaf() || p.families().empty()) {
        Partition pinned(tree.own);
        const auto result = pinned.empty() ? unfriendly_partition(p.local()) : extend_pre_partition(p.local(), pinned);
        auto sigma = p.is_leaf() ? SymbolicPartition::make_leaf(result.partition)
                                 : SymbolicPartition::make_glue(result.partition, {});
        return finish(p, *sigma, fixed, options);
    }
    Search search(options);
    auto found = search.enumerate(p, {}, tree.empty() ? nullptr : &tree, true, tree.empty());
    if (found.empty())
        throw UnsatError("no symbolic unfriendly partition within the search bounds (max leaf " +
                         std::to_string(options.max_leaf) + ", max exceptions " +
                         std::to_string(options.max_exceptions) + ")");
    return finish(p, *found.front(), fixed, options);
}

void emit_colours(const Presentation& node, const SymbolicPartition& sigma, std::size_t n, const std::string& prefix,
                  Partition& out, std::vector<std::string>* dropped) {
    for (const auto& [v, side] : sigma.colours.assignments()) out.set(prefix + terminal_name(node, v), side);
    for (std::size_t f = 0; f < node.families().size(); ++f) {
        const auto& fam = node.families()[f];
        const auto& fc = sigma.families[f];
        const std::size_t copies = fam.multiplicity.is_omega() ? n : fam.multiplicity.value();
        for (std::size_t c = 0; c < copies; ++c) {
            auto it = fc.exceptions.find(c);
            const SymbolicPartition& child = it == fc.exceptions.end() ? *fc.default_colouring : *it->second;
            emit_colours(*fam.child, child, n, prefix + std::to_string(f) + "[" + std::to_string(c) + "]/", out,
                         dropped);
        }
        if (dropped)
            for (const auto& [idx, exc] : fc.exceptions)
                if (idx >= copies)
                    dropped->push_back("exception " + prefix + std::to_string(f) + "[" + std::to_string(idx) +
                                       "] dropped at n=" + std::to_string(n));
    }
}

} // namespace

SeparatorClasses classify_S(const Presentation& p) {
    if (p.is_leaf()) throw InputError("classify_S needs a glue node");
    SeparatorClasses out;
    for (const auto& s : p.local().vertices())
        (position_degree(p, Position{{}, s, true}).is_omega() ? out.omega_degree : out.finite_degree).insert(s);
    return out;
}

std::vector<OpponentSignature> family_signatures(const Presentation& p, std::size_t family,
                                                 const Partition& separator_colours, const SolverOptions& options) {
    if (p.is_leaf()) throw InputError("family_signatures needs a glue node");
    if (family >= p.families().size()) throw InputError("family index " + std::to_string(family) + " out of range");
    if (!separator_colours.total_on(p.local()))
        throw InputError("separator colouring must be total on the root separator");
    const auto& fam = p.families()[family];
    const std::vector<Vertex> sep(p.local().vertices().begin(), p.local().vertices().end());
    Search search(options);
    std::set<OpponentSignature> out;
    for (const auto& o : search.options(*fam.child, child_context(fam, separator_colours))) {
        OpponentSignature sig;
        const auto counts = signature_of(fam, sep, separator_colours, o->colours);
        for (std::size_t i = 0; i < sep.size(); ++i) sig.opponents[sep[i]] = counts[i];
        out.insert(std::move(sig));
    }
    return {out.begin(), out.end()};
}

CheckReport check_symbolic(const Presentation& p, const SymbolicPartition& sigma, const FixedColours& fixed) {
    require_valid(p);
    require_compatible(p, sigma, "$");
    const FixedTree tree = fixed_tree(p, fixed);
    CheckReport report;
    check_node(p, sigma, {}, "", &tree, report);
    return report;
}

SymbolicSolution solve_unfriendly(const Presentation& p, const SolverOptions& options) { return solve(p, {}, options); }

SymbolicSolution solve_pre_partition(const Presentation& p, const FixedColours& fixed, const SolverOptions& options) {
    return solve(p, fixed, options);
}

Side colour_at(const Presentation& p, const SymbolicPartition& sigma, const VertexAddress& address) {
    require_address(p, address);
    require_compatible(p, sigma, "$");
    const Presentation* node = &p;
    const SymbolicPartition* s = &sigma;
    for (const auto& step : address.steps) {
        const auto& fc = s->families[step.family];
        auto it = fc.exceptions.find(step.copy);
        s = it == fc.exceptions.end() ? fc.default_colouring.get() : it->second.get();
        node = node->families()[step.family].child.get();
    }
    return s->colours.at(address.vertex);
}

KapomWitness witness_kapom(const Presentation& p, const SymbolicPartition& sigma, const Vertex& s) {
    if (p.is_leaf()) throw InputError("witness_kapom needs a glue node");
    require_compatible(p, sigma, "$");
    if (!classify_S(p).omega_degree.count(s)) throw InputError("'" + s + "' is not a separator vertex of degree Omega");

    KapomWitness out;
    out.bound = p.local().degree(s);
    for (const auto& fam : p.families())
        if (fam.multiplicity.is_finite()) out.bound += fam.multiplicity.value() * attachment_degree(fam, s);

    const Side side = sigma.colours.at(s);
    auto opponents_from = [&](const CopyFamily& fam, const SymbolicPartition& child) {
        std::size_t n = 0;
        for (const auto& [from, b] : fam.attachment)
            if (from == s && child.colours.at(b) != side) ++n;
        return n;
    };
    std::optional<std::size_t> chosen;
    for (std::size_t f = 0; f < p.families().size() && !chosen; ++f) {
        const auto& fam = p.families()[f];
        if (fam.multiplicity.is_omega() && attachment_degree(fam, s) > 0 &&
            opponents_from(fam, *sigma.families[f].default_colouring) > 0)
            chosen = f;
    }
    for (std::size_t f = 0; f < p.families().size() && !chosen; ++f) {
        const auto& fam = p.families()[f];
        if (fam.multiplicity.is_omega() && attachment_degree(fam, s) > 0) chosen = f;
    }
    out.family = *chosen;
    const auto& fam = p.families()[out.family];
    const auto& fc = sigma.families[out.family];
    const std::size_t per_copy = attachment_degree(fam, s);
    const std::size_t wanted = out.bound / per_copy + 1;
    for (std::size_t c = 0; out.copies.size() < wanted; ++c) {
        if (fc.exceptions.count(c)) continue;
        out.copies.push_back(c);
        out.group_degree += per_copy;
        out.opponents += opponents_from(fam, *fc.default_colouring);
    }
    return out;
}

Partition instantiate_partition(const Presentation& p, const SymbolicPartition& sigma, std::size_t n,
                                std::vector<std::string>* dropped) {
    require_valid(p);
    require_compatible(p, sigma, "$");
    Partition out;
    emit_colours(p, sigma, n, "", out, dropped);
    return out;
}

} // namespace ufp
