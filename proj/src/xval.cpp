#include "ufp/xval.hpp"

#include <algorithm>
#include <set>

#include "ufp/errors.hpp"

namespace ufp {

namespace {

struct Located {
    const Presentation* node = nullptr;
    const SymbolicPartition* sigma = nullptr;
};

Located locate(const Presentation& p, const SymbolicPartition& sigma, const VertexAddress& address) {
    Located at{&p, &sigma};
    for (const auto& step : address.steps) {
        const auto& fc = at.sigma->families[step.family];
        auto it = fc.exceptions.find(step.copy);
        at.sigma = it == fc.exceptions.end() ? fc.default_colouring.get() : it->second.get();
        at.node = at.node->families()[step.family].child.get();
    }
    return at;
}

// c and e for an omega-degree vertex at a located node instance.
std::pair<std::size_t, std::size_t> growth(const Located& at, const Vertex& v) {
    std::size_t c = 0;
    std::size_t e = 0;
    const Side side = at.sigma->colours.at(v);
    for (std::size_t f = 0; f < at.node->families().size(); ++f) {
        const auto& fam = at.node->families()[f];
        if (!fam.multiplicity.is_omega()) continue;
        const auto& fc = at.sigma->families[f];
        bool gives = false;
        for (const auto& [s, b] : fam.attachment)
            if (s == v && fc.default_colouring->colours.at(b) != side) gives = true;
        if (!gives) continue;
        ++c;
        e = std::max(e, fc.exceptions.size());
    }
    return {c, e};
}

} // namespace

CrossValReport cross_validate(const Presentation& p, const SymbolicPartition& sigma, std::size_t n_min,
                              std::size_t n_max) {
    if (n_min > n_max) throw InputError("empty n range");
    CrossValReport report;
    std::set<std::string> warned;
    std::map<std::string, VertexAddress> tracked;
    for (std::size_t n = n_min; n <= n_max; ++n) {
        const Instantiation inst = instantiate(p, n);
        std::vector<std::string> dropped;
        const Partition pi = instantiate_partition(p, sigma, n, &dropped);
        for (auto& w : dropped)
            if (warned.insert(w).second) report.warnings.push_back(std::move(w));
        const HappinessReport h = happiness(inst.graph, pi, inst.graph.vertices());
        CrossValRow row;
        row.n = n;
        row.vertices = inst.graph.order();
        row.edges = inst.graph.size();
        for (const auto& [name, vh] : h.vertices) row.samples[name] = {vh.degree, vh.opponents, vh.happy};
        for (const auto& [name, address] : inst.addresses) tracked.emplace(name, address);
        report.rows.push_back(std::move(row));
    }

    auto fail = [&](CrossValVerdict& v, std::size_t n, std::string detail) {
        v.pass = false;
        v.detail = std::move(detail);
        if (!report.failure || n < report.failure->second) report.failure = std::make_pair(v.address, n);
    };

    for (const auto& [name, address] : tracked) {
        CrossValVerdict v;
        v.address = name;
        const SymbolicCardinal degree = position_degree(p, address.position());
        v.omega = degree.is_omega();
        if (!v.omega) {
            for (const auto& row : report.rows) {
                auto it = row.samples.find(name);
                if (it == row.samples.end()) continue;
                if (it->second.degree != degree.value()) {
                    fail(v, row.n, "degree " + std::to_string(it->second.degree) + " differs from symbolic degree " +
                                       degree.to_string());
                    break;
                }
            }
            for (auto row = report.rows.rbegin(); row != report.rows.rend(); ++row) {
                auto it = row->samples.find(name);
                if (it != row->samples.end() && !it->second.happy) break;
                v.n0 = row->n;
            }
            if (v.pass && !v.n0) fail(v, n_max, "unhappy at n=" + std::to_string(n_max));
        } else {
            std::tie(v.c, v.e) = growth(locate(p, sigma, address), address.vertex);
            std::optional<std::size_t> previous;
            for (const auto& row : report.rows) {
                auto it = row.samples.find(name);
                if (it == row.samples.end()) continue;
                const std::size_t opp = it->second.opponents;
                const std::size_t floor = row.n > v.e ? v.c * (row.n - v.e) : 0;
                if (v.c == 0) {
                    fail(v, row.n, "no omega family gives this vertex a default opponent");
                    break;
                }
                if (opp < floor) {
                    fail(v, row.n, std::to_string(opp) + " opponents, below " + std::to_string(floor));
                    break;
                }
                if (previous && opp < *previous) {
                    fail(v, row.n, "opponents decreased from " + std::to_string(*previous));
                    break;
                }
                previous = opp;
            }
        }
        if (!v.pass) report.pass = false;
        report.verdicts.push_back(std::move(v));
    }
    return report;
}

} // namespace ufp
