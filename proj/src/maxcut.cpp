#include "qcmdo/maxcut.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace qcmdo {

Graph::Graph(int vertices, std::vector<std::pair<int, int>> edges) : n_(vertices) {
    if (vertices < 0) throw Error(ErrorCode::InvalidArgument, "vertex count must be nonnegative");
    std::set<std::pair<int, int>> seen;
    edges_.reserve(edges.size());
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n_ || v >= n_) {
            throw Error(ErrorCode::InvalidArgument, "edge endpoint out of range");
        }
        if (u == v) throw Error(ErrorCode::InvalidArgument, "self-loops are not allowed");
        const auto e = std::minmax(u, v);
        if (!seen.insert(e).second) throw Error(ErrorCode::InvalidArgument, "duplicate edge");
        edges_.emplace_back(e.first, e.second);
    }
}

int Graph::max_degree() const {
    std::vector<int> deg(static_cast<std::size_t>(n_), 0);
    for (auto [u, v] : edges_) {
        ++deg[static_cast<std::size_t>(u)];
        ++deg[static_cast<std::size_t>(v)];
    }
    return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

IMatrix laplacian(const Graph& g) {
    IMatrix l = IMatrix::Zero(g.vertices(), g.vertices());
    for (auto [u, v] : g.edges()) {
        l(u, u) += 1;
        l(v, v) += 1;
        l(u, v) -= 1;
        l(v, u) -= 1;
    }
    return l;
}

MaxCutReduction maxcut_reduction(const Graph& g) {
    MaxCutReduction red;
    red.L = laplacian(g);
    red.d_max = g.max_degree();
    const Index n = g.vertices();
    red.Q = 2 * red.d_max * IMatrix::Identity(n, n) - red.L;
    red.v = -(red.Q * IVector::Ones(n));
    return red;
}

std::pair<QuboProblem, EnergyToCut> maxcut_to_qubo(const Graph& g) {
    const auto red = maxcut_reduction(g);
    RMatrix m = red.Q.cast<double>();
    m.diagonal() += red.v.cast<double>();

    QuboProblem qubo;
    qubo.M = symmetrize(m);
    qubo.k = 0.0;
    const auto bit = VariableDomain::discrete({Complex(0.0), Complex(1.0)});
    qubo.encodings.assign(static_cast<std::size_t>(g.vertices()), encode_binary_expansion(bit));
    return {std::move(qubo), red.energy_to_cut};
}

PdeInstance maxcut_to_pde_instance(const Graph& g) {
    const auto red = maxcut_reduction(g);
    const Index n = g.vertices();
    const RMatrix root = linalg::psd_sqrt(red.Q.cast<double>());

    PdeInstance inst;
    inst.E = LinearOperator::spectral(CVector::Ones(n));
    inst.K = CMatrix::Identity(n, n);
    inst.G = CMatrix::Identity(n, n);
    inst.J = root.cast<Complex>();
    inst.f = CVector::Zero(n);
    inst.y = 0.5 * (inst.J * CVector::Ones(n));
    inst.domains.assign(static_cast<std::size_t>(n), VariableDomain::discrete({Complex(0.0), Complex(1.0)}));
    return inst;
}

int cut_value(const Graph& g, const Bits& s) {
    if (static_cast<int>(s.size()) != g.vertices()) {
        throw Error(ErrorCode::DimensionMismatch, "cut_value: one bit per vertex");
    }
    int cut = 0;
    for (auto [u, v] : g.edges()) {
        cut += (s[static_cast<std::size_t>(u)] != s[static_cast<std::size_t>(v)]) ? 1 : 0;
    }
    return cut;
}

long long maxcut_energy(const MaxCutReduction& red, const Bits& s) {
    const Index n = red.Q.rows();
    if (static_cast<Index>(s.size()) != n) throw Error(ErrorCode::DimensionMismatch, "maxcut_energy: length");
    long long acc = 0;
    for (Index i = 0; i < n; ++i) {
        if (!s[static_cast<std::size_t>(i)]) continue;
        acc += red.v(i);
        for (Index j = 0; j < n; ++j) {
            if (s[static_cast<std::size_t>(j)]) acc += red.Q(i, j);
        }
    }
    return acc;
}

Graph parse_graph(const std::string& text) {
    std::istringstream in(text);
    long long n = -1, m = -1;
    if (!(in >> n >> m) || n < 0 || m < 0) {
        throw Error(ErrorCode::ParseError, "graph file must start with \"n m\"");
    }
    std::vector<std::pair<int, int>> edges;
    for (long long e = 0; e < m; ++e) {
        long long u = 0, v = 0;
        if (!(in >> u >> v)) throw Error(ErrorCode::ParseError, "graph file has fewer than m edges");
        if (u < 1 || v < 1 || u > n || v > n) throw Error(ErrorCode::ParseError, "vertex index out of 1..n");
        edges.emplace_back(static_cast<int>(u - 1), static_cast<int>(v - 1));
    }
    try {
        return Graph(static_cast<int>(n), std::move(edges));
    } catch (const Error& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
}

std::string format_graph(const Graph& g) {
    std::ostringstream out;
    out << g.vertices() << ' ' << g.edges().size() << '\n';
    for (auto [u, v] : g.edges()) out << (u + 1) << ' ' << (v + 1) << '\n';
    return out.str();
}

}  // namespace qcmdo
