#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qcmdo/annealer.hpp"
#include "qcmdo/pde.hpp"

namespace qcmdo {

/// Charge reconstruction on [0, N]^2 from N^2 measured Poisson eigenmodes.
///
/// Gaussian charges 25/pi exp(-25 |x - y_i|^2) sit at the half-integer sites
/// (i - 0.5, j - 0.5), i, j = 1..N, followed by the integer sites (i, j),
/// i, j = 1..N-1, each site index running i fastest.  The potential is
/// sampled on the grid (0.1 i, 0.1 j), i, j = 1..10N-1.  Mode m + N n for
/// m, n = 1..N is sin(m pi x1 / N) sin(n pi x2 / N) with eigenvalue
/// -pi^2 (m^2 + n^2) / N^2.
struct PoissonSpec {
    int N = 2;
    std::optional<Bits> true_s;

    static constexpr double kSpacing = 0.1;
    static constexpr double kExponent = 25.0;

    std::size_t p() const noexcept { return static_cast<std::size_t>(2 * N * N - 2 * N + 1); }
    Index n2a() const noexcept { return static_cast<Index>(N) * N; }
    Index n2b() const noexcept { return static_cast<Index>(10 * N - 1) * (10 * N - 1); }
};

using Point = std::array<double, 2>;

std::vector<Point> charge_sites(int N);
std::vector<Point> grid_points(int N);

/// The N^2 mode indices (m, n) in measurement order.
std::vector<std::array<int, 2>> measured_modes(int N);

double mode_value(int N, int m, int n, const Point& x);

struct PoissonInstance {
    PdeInstance pde;
    PoissonSpec spec;
};

/// R = K^H E^-1 and J per the spectral discretization, f = 0, G = I, binary
/// controls.  y is R J true_s when true_s is set, otherwise `y` (which must
/// then be provided).  Throws InvalidArgument for N < 2 or bad lengths.
PoissonInstance gen_poisson(const PoissonSpec& spec, const std::optional<CVector>& y = std::nullopt);

/// R J, the measured coefficients per unit charge.
RMatrix measurement_matrix(const PoissonInstance& inst);

struct Reconstruction {
    Bits s;
    double value = 0.0;
    bool is_unique = true;
    Bits runner_up;
    double runner_up_value = 0.0;
    int hamming = 0;
};

/// Exhaustive reconstruction through reduce_pde and the {0,1} QUBO.
Reconstruction reconstruct(const PoissonInstance& inst);

/// QUBO of a Poisson instance (binary expansion, no penalty).
QuboProblem poisson_qubo(const PoissonInstance& inst);

struct FieldGrid {
    int N = 0;
    std::vector<Point> points;
    RVector values;
};

/// Measured potential sum_k c_k phi_k on the grid with c = R J s.
FieldGrid potential_field(const PoissonInstance& inst, const Bits& s);

struct EnsembleRow {
    std::uint64_t instance = 0;
    Bits true_s;
    std::optional<double> min_gap;
    std::optional<double> final_gap;
    int hamming = 0;
};

struct EnsembleOptions {
    /// Exhaustive over all 2^p charge configurations when unset.
    std::optional<std::size_t> samples;
    std::uint64_t seed = 0;
    bool classical_only = false;
    SweepOptions sweep{};
    /// Worker threads; 0 picks the hardware concurrency.
    unsigned threads = 0;
};

/// Sampled configurations are uniform over {0,1}^p, drawn from
/// splitmix64(seed ^ instance) per instance.
Bits sample_configuration(std::size_t p, std::uint64_t seed, std::uint64_t instance);

std::vector<EnsembleRow> ensemble_stats(int N, const EnsembleOptions& opts);

/// Header `instance,min_gap,final_gap,hamming`; gap cells empty when not
/// computed.
std::string ensemble_csv(const std::vector<EnsembleRow>& rows);

/// Header `x1,x2,value`, one row per grid point.
std::string field_csv(const FieldGrid& field);

}  // namespace qcmdo
