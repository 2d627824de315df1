#include "pacesync/network.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace pacesync {

CouplingGraph CouplingGraph::from_matrix(Mat a) {
    if (a.rows() == 0 || a.rows() != a.cols())
        throw std::invalid_argument("coupling matrix must be square and non-empty");
    const std::size_t n = a.rows();
    for (std::size_t i = 0; i < n; ++i) {
        if (a(i, i) != 0.0)
            throw std::invalid_argument("coupling matrix must have a zero diagonal (entry " +
                                        std::to_string(i) + ")");
        for (std::size_t j = 0; j < n; ++j) {
            if (!(a(i, j) >= 0.0))
                throw std::invalid_argument("coupling strengths must be nonnegative and finite");
            if (a(i, j) != a(j, i))
                throw std::invalid_argument("coupling matrix must be symmetric (entries " +
                                            std::to_string(i) + "," + std::to_string(j) + ")");
        }
    }
    return CouplingGraph{n, std::move(a)};
}

PacemakerCoupling PacemakerCoupling::from_vector(Vec g) {
    if (g.empty()) throw std::invalid_argument("pacemaker strength vector must be non-empty");
    for (double v : g)
        if (!(v >= 0.0)) throw std::invalid_argument("pacemaker strengths must be nonnegative and finite");
    return PacemakerCoupling{std::move(g)};
}

double PacemakerCoupling::min() const { return *std::min_element(g.begin(), g.end()); }
double PacemakerCoupling::max() const { return *std::max_element(g.begin(), g.end()); }

IncidenceRepresentation build_incidence(const CouplingGraph& graph) {
    const std::size_t n = graph.n;
    std::vector<Edge> edges;
    Vec w;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (graph.a(i, j) > 0.0) {
                edges.push_back({i, j});
                w.push_back(graph.a(i, j));
            }
    const std::size_t m = edges.size();
    Mat b(n, m);
    for (std::size_t k = 0; k < m; ++k) {
        b(edges[k].i, k) = 1.0;
        b(edges[k].j, k) = -1.0;
    }
    return IncidenceRepresentation{n, m, std::move(b), std::move(w), std::move(edges)};
}

Mat laplacian(const IncidenceRepresentation& inc) {
    Mat bw(inc.n, inc.m);
    for (std::size_t i = 0; i < inc.n; ++i)
        for (std::size_t k = 0; k < inc.m; ++k) bw(i, k) = inc.b(i, k) * inc.w[k];
    Mat bt(inc.m, inc.n);
    for (std::size_t i = 0; i < inc.n; ++i)
        for (std::size_t k = 0; k < inc.m; ++k) bt(k, i) = inc.b(i, k);
    return matmul(bw, bt);
}

bool is_connected(const CouplingGraph& graph) {
    const std::size_t n = graph.n;
    if (n <= 1) return true;
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> queue{0};
    seen[0] = true;
    std::size_t reached = 1;
    while (!queue.empty()) {
        const std::size_t i = queue.back();
        queue.pop_back();
        for (std::size_t j = 0; j < n; ++j)
            if (!seen[j] && graph.a(i, j) > 0.0) {
                seen[j] = true;
                ++reached;
                queue.push_back(j);
            }
    }
    return reached == n;
}

} // namespace pacesync
