#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qcmdo/encoding.hpp"
#include "qcmdo/pde.hpp"

namespace qcmdo {

using IMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;
using IVector = Eigen::Matrix<long long, Eigen::Dynamic, 1>;

/// Simple undirected graph with 0-indexed vertices.
class Graph {
public:
    /// Throws InvalidArgument on self-loops, duplicates, or out-of-range
    /// endpoints.  Edges are stored as (min, max) in input order.
    Graph(int vertices, std::vector<std::pair<int, int>> edges);

    int vertices() const noexcept { return n_; }
    const std::vector<std::pair<int, int>>& edges() const noexcept { return edges_; }
    int max_degree() const;

private:
    int n_;
    std::vector<std::pair<int, int>> edges_;
};

/// Degree matrix minus adjacency matrix.
IMatrix laplacian(const Graph& g);

/// cut = scale * (value - offset).
struct EnergyToCut {
    double scale = -1.0;
    double offset = 0.0;

    double operator()(double value) const { return scale * (value - offset); }
};

struct MaxCutReduction {
    IMatrix L;
    long long d_max = 0;
    IMatrix Q;
    IVector v;
    EnergyToCut energy_to_cut;
};

/// Q = 2 d_max I - L and v = -Q 1.
MaxCutReduction maxcut_reduction(const Graph& g);

/// QUBO with M = Q + diag(v) and k = 0, so that s^T M s = -cut(s).
std::pair<QuboProblem, EnergyToCut> maxcut_to_qubo(const Graph& g);

/// E = K = G = I, J = Q^{1/2}, f = 0, y = J 1 / 2, binary controls.
PdeInstance maxcut_to_pde_instance(const Graph& g);

/// Edges whose endpoints fall on different sides.
int cut_value(const Graph& g, const Bits& s);

/// s^T Q s + s^T v in integer arithmetic.
long long maxcut_energy(const MaxCutReduction& red, const Bits& s);

/// Edge-list text: "n m" then m lines "u v", 1-indexed.
Graph parse_graph(const std::string& text);
std::string format_graph(const Graph& g);

}  // namespace qcmdo
