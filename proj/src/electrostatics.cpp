#include "qcmdo/electrostatics.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "qcmdo/solvers.hpp"

namespace qcmdo {

std::vector<Point> charge_sites(int N) {
    std::vector<Point> out;
    for (int j = 1; j <= N; ++j) {
        for (int i = 1; i <= N; ++i) out.push_back({i - 0.5, j - 0.5});
    }
    for (int j = 1; j <= N - 1; ++j) {
        for (int i = 1; i <= N - 1; ++i) out.push_back({static_cast<double>(i), static_cast<double>(j)});
    }
    return out;
}

std::vector<Point> grid_points(int N) {
    std::vector<Point> out;
    const int last = 10 * N - 1;
    out.reserve(static_cast<std::size_t>(last) * static_cast<std::size_t>(last));
    for (int j = 1; j <= last; ++j) {
        for (int i = 1; i <= last; ++i) {
            out.push_back({PoissonSpec::kSpacing * i, PoissonSpec::kSpacing * j});
        }
    }
    return out;
}

std::vector<std::array<int, 2>> measured_modes(int N) {
    std::vector<std::array<int, 2>> out;
    for (int n = 1; n <= N; ++n) {
        for (int m = 1; m <= N; ++m) out.push_back({m, n});
    }
    return out;
}

double mode_value(int N, int m, int n, const Point& x) {
    using std::numbers::pi;
    return std::sin(m * pi * x[0] / N) * std::sin(n * pi * x[1] / N);
}

namespace {

RMatrix composed_measurement(int N, const std::vector<Point>& grid) {
    using std::numbers::pi;
    const auto modes = measured_modes(N);
    RMatrix r(static_cast<Index>(modes.size()), static_cast<Index>(grid.size()));
    for (std::size_t k = 0; k < modes.size(); ++k) {
        const auto [m, n] = modes[k];
        const double lambda = -pi * pi * (m * m + n * n) / (static_cast<double>(N) * N);
        for (std::size_t j = 0; j < grid.size(); ++j) {
            r(static_cast<Index>(k), static_cast<Index>(j)) =
                    PoissonSpec::kSpacing / lambda * mode_value(N, m, n, grid[j]);
        }
    }
    return r;
}

RMatrix charge_matrix(const std::vector<Point>& grid, const std::vector<Point>& sites) {
    using std::numbers::pi;
    const double amp = PoissonSpec::kSpacing * PoissonSpec::kExponent / pi;
    RMatrix j(static_cast<Index>(grid.size()), static_cast<Index>(sites.size()));
    for (std::size_t a = 0; a < grid.size(); ++a) {
        for (std::size_t b = 0; b < sites.size(); ++b) {
            const double dx = grid[a][0] - sites[b][0];
            const double dy = grid[a][1] - sites[b][1];
            j(static_cast<Index>(a), static_cast<Index>(b)) =
                    amp * std::exp(-PoissonSpec::kExponent * (dx * dx + dy * dy));
        }
    }
    return j;
}

CVector bits_vector(const Bits& s) {
    CVector v(static_cast<Index>(s.size()));
    for (std::size_t i = 0; i < s.size(); ++i) v(static_cast<Index>(i)) = s[i] ? 1.0 : 0.0;
    return v;
}

}  // namespace

PoissonInstance gen_poisson(const PoissonSpec& spec, const std::optional<CVector>& y) {
    if (spec.N < 2) throw Error(ErrorCode::InvalidArgument, "the Poisson example needs N >= 2");
    if (spec.true_s && spec.true_s->size() != spec.p()) {
        throw Error(ErrorCode::InvalidArgument, "true_s must have p = 2N^2 - 2N + 1 bits");
    }
    const auto grid = grid_points(spec.N);
    const auto sites = charge_sites(spec.N);

    PoissonInstance out;
    out.spec = spec;
    auto& pde = out.pde;
    pde.R = composed_measurement(spec.N, grid).cast<Complex>();
    pde.J = charge_matrix(grid, sites).cast<Complex>();
    pde.f = CVector::Zero(spec.n2b());
    pde.G = CMatrix::Identity(spec.n2a(), spec.n2a());
    pde.domains.assign(spec.p(), VariableDomain::discrete({Complex(0.0), Complex(1.0)}));
    if (spec.true_s) {
        pde.y = (*pde.R) * (pde.J * bits_vector(*spec.true_s));
    } else if (y) {
        if (y->size() != spec.n2a()) throw Error(ErrorCode::InvalidArgument, "y must have N^2 entries");
        pde.y = *y;
    } else {
        throw Error(ErrorCode::InvalidArgument, "either true_s or a design vector y is required");
    }
    return out;
}

RMatrix measurement_matrix(const PoissonInstance& inst) {
    return ((*inst.pde.R) * inst.pde.J).real();
}

QuboProblem poisson_qubo(const PoissonInstance& inst) {
    return assemble_qubo(reduce_pde(inst.pde), EncodingPolicy::PreferBinaryExpansionElseOneHot);
}

Reconstruction reconstruct(const PoissonInstance& inst) {
    const auto qubo = poisson_qubo(inst);
    const auto exact = solve_exhaustive(qubo);
    const auto bottom = classical_bottom_states(qubo, 2);
    Reconstruction out;
    out.s = exact.s;
    out.value = exact.value;
    out.is_unique = exact.is_unique;
    out.runner_up = bottom[1].s;
    out.runner_up_value = bottom[1].value;
    out.hamming = hamming_distance(bottom[0].s, bottom[1].s);
    return out;
}

FieldGrid potential_field(const PoissonInstance& inst, const Bits& s) {
    const int N = inst.spec.N;
    if (s.size() != inst.spec.p()) throw Error(ErrorCode::DimensionMismatch, "potential_field: s length != p");
    const RVector coeff = measurement_matrix(inst) * bits_vector(s).real();
    FieldGrid out;
    out.N = N;
    out.points = grid_points(N);
    out.values = RVector::Zero(static_cast<Index>(out.points.size()));
    const auto modes = measured_modes(N);
    for (std::size_t j = 0; j < out.points.size(); ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k < modes.size(); ++k) {
            acc += coeff(static_cast<Index>(k)) * mode_value(N, modes[k][0], modes[k][1], out.points[j]);
        }
        out.values(static_cast<Index>(j)) = acc;
    }
    return out;
}

Bits sample_configuration(std::size_t p, std::uint64_t seed, std::uint64_t instance) {
    std::mt19937_64 rng(splitmix64(seed ^ instance));
    Bits s(p);
    for (auto& b : s) b = static_cast<std::uint8_t>(rng() >> 63);
    return s;
}

std::vector<EnsembleRow> ensemble_stats(int N, const EnsembleOptions& opts) {
    PoissonSpec spec{N, std::nullopt};
    if (N < 2) throw Error(ErrorCode::InvalidArgument, "the Poisson example needs N >= 2");
    const std::size_t p = spec.p();
    if (!opts.classical_only && p > opts.sweep.qubit_cap) {
        throw Error(ErrorCode::QubitCapExceeded, std::to_string(p) + " qubits exceeds the spectral cap of " +
                                                         std::to_string(opts.sweep.qubit_cap));
    }
    if (p > kDefaultExhaustiveCap) throw Error(ErrorCode::QubitCapExceeded, "too many charges to enumerate");

    std::vector<EnsembleRow> rows;
    if (opts.samples) {
        for (std::uint64_t i = 0; i < *opts.samples; ++i) rows.push_back({i, sample_configuration(p, opts.seed, i), {}, {}, 0});
    } else {
        const std::uint64_t total = std::uint64_t{1} << p;
        for (std::uint64_t i = 0; i < total; ++i) rows.push_back({i, bits_from_mask(i, p), {}, {}, 0});
    }

    // The operators do not depend on the configuration; only y does.
    spec.true_s = Bits(p, 0);
    const PoissonInstance base = gen_poisson(spec);
    const CMatrix rj = (*base.pde.R) * base.pde.J;

    auto work = [&](EnsembleRow& row) {
        PoissonInstance inst = base;
        inst.spec.true_s = row.true_s;
        inst.pde.y = rj * bits_vector(row.true_s);
        const auto qubo = poisson_qubo(inst);
        const auto bottom = classical_bottom_states(qubo, 2);
        row.hamming = hamming_distance(bottom[0].s, bottom[1].s);
        if (!opts.classical_only) {
            const auto sweep = sweep_gaps(build_ising(qubo), opts.sweep);
            row.min_gap = sweep.min_gap;
            row.final_gap = sweep.final_gap;
        }
    };

    unsigned threads = opts.threads ? opts.threads : std::max(1U, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(rows.size(), 1)));
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(threads);
    auto worker = [&](unsigned id) {
        try {
            for (std::size_t i = next++; i < rows.size(); i = next++) work(rows[i]);
        } catch (...) {
            errors[id] = std::current_exception();
            next = rows.size();
        }
    };
    if (threads <= 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return rows;
}

std::string ensemble_csv(const std::vector<EnsembleRow>& rows) {
    std::ostringstream out;
    out << "instance,min_gap,final_gap,hamming\n";
    for (const auto& r : rows) {
        out << r.instance << ',' << (r.min_gap ? format_double(*r.min_gap) : "") << ','
            << (r.final_gap ? format_double(*r.final_gap) : "") << ',' << r.hamming << '\n';
    }
    return out.str();
}

std::string field_csv(const FieldGrid& field) {
    std::ostringstream out;
    out << "x1,x2,value\n";
    for (std::size_t j = 0; j < field.points.size(); ++j) {
        out << format_double(field.points[j][0]) << ',' << format_double(field.points[j][1]) << ','
            << format_double(field.values(static_cast<Index>(j))) << '\n';
    }
    return out.str();
}

}  // namespace qcmdo
