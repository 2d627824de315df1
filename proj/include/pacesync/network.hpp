#ifndef PACESYNC_NETWORK_HPP
#define PACESYNC_NETWORK_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "pacesync/linalg.hpp"

namespace pacesync {

/// Symmetric nonnegative local-coupling strengths among n oscillators.
/// a(i,j) is the coupling strength between nodes i and j in 1/s; the
/// diagonal is zero and a zero entry means "no edge".
struct CouplingGraph {
    std::size_t n = 0;
    Mat a;

    /// Validates symmetry, nonnegativity and a zero diagonal.
    static CouplingGraph from_matrix(Mat a);
};

/// One undirected interaction edge, stored with i < j.
struct Edge {
    std::size_t i = 0;
    std::size_t j = 0;
};

/// Signed incidence form of a coupling graph: b is n x m with one +1 and
/// one -1 per column, w holds the per-edge weights. Orientation is fixed
/// (+1 at the smaller node index) and edges are ordered lexicographically
/// so the representation is reproducible.
struct IncidenceRepresentation {
    std::size_t n = 0;
    std::size_t m = 0;
    Mat b;
    Vec w;
    std::vector<Edge> edges;
};

/// Per-node pacemaker strengths g_i >= 0 in 1/s.
struct PacemakerCoupling {
    Vec g;

    static PacemakerCoupling from_vector(Vec g);

    double min() const;
    double max() const;
};

/// Builds the incidence representation: one column per unordered pair
/// {i, j} with a(i,j) > 0, +1 at row i and -1 at row j for i < j.
IncidenceRepresentation build_incidence(const CouplingGraph& graph);

/// Weighted graph Laplacian L = B W B^T, computed as the actual triple
/// product. Row sums are zero and eigenvalues are nonnegative.
Mat laplacian(const IncidenceRepresentation& inc);

/// Breadth-first reachability over edges with a(i,j) > 0. A single node
/// is connected by convention.
bool is_connected(const CouplingGraph& graph);

} // namespace pacesync

#endif
