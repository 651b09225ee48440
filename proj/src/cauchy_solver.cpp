#include "tetra/cauchy_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "tetra/errors.hpp"

namespace tetra {

namespace {

constexpr double kTailDecayLengths = 40.0;
constexpr int kRefinement = 4;
constexpr double kRefineAbove = 0.6;
constexpr double kWarmUpdate = 1e-2;
constexpr double kRecenterClip = 0.6;

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

double smoothstep(double t) {
    t = std::clamp(t, 0.0, 1.0);
    return t * t * (3.0 - 2.0 * t);
}

void enforce_symmetry(std::vector<cplx>& f) {
    const std::size_t n = f.size() - 1;
    for (std::size_t k = 0; k < n / 2; ++k) f[n - k] = std::conj(f[k]);
    f[n / 2] = cplx{f[n / 2].real(), 0.0};
}

// Real root of value(x) = 1 near the origin by Newton, clipped to [-clip, clip].
bool locate_unit_crossing(const detail::StripRepresentation& rep, double clip, double& sigma) {
    double s = 0.0;
    for (int it = 0; it < 60; ++it) {
        cplx v = rep.value(cplx{s, 0.0});
        cplx d = rep.derivative(cplx{s, 0.0});
        double step = (v.real() - 1.0) / d.real();
        if (!std::isfinite(step)) return false;
        double next = std::clamp(s - step, -clip, clip);
        bool done = std::abs(next - s) < 1e-16;
        s = next;
        if (done) break;
    }
    sigma = s;
    return std::abs(rep.value(cplx{s, 0.0}).real() - 1.0) < 1e-12;
}

std::vector<cplx> resample(const detail::StripRepresentation& rep, const std::vector<double>& y,
                           double sigma) {
    std::vector<cplx> f(y.size());
    for (std::size_t k = 0; k < y.size(); ++k) f[k] = rep.value(cplx{sigma, y[k]});
    enforce_symmetry(f);
    return f;
}

std::vector<double> node_ordinates(int n, double height) {
    const double h = 2.0 * height / n;
    std::vector<double> y(n + 1);
    for (int k = 0; k <= n; ++k) y[k] = (k - n / 2) * h;
    return y;
}

double residual_of(const detail::StripRepresentation& rep, const Base& b, double height) {
    const double top = height - 1.0;
    double worst = 0.0;
    for (int i = 0; i <= 100; ++i) {
        double y = -top + 2.0 * top * i / 100.0;
        cplx z{-0.25, y};
        cplx lhs = exp_b(b, rep.value(z));
        cplx rhs = rep.value(z + 1.0);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

}  // namespace

void SolverParams::validate() const {
    if (n_nodes < 32 || n_nodes % 2 != 0)
        throw Error(ErrorCode::InvalidArgument, "n_nodes must be an even integer >= 32");
    if (!(height >= 2.0) || !std::isfinite(height))
        throw Error(ErrorCode::InvalidArgument, "height must be >= 2");
    if (!(tol >= 1e-14) || !std::isfinite(tol))
        throw Error(ErrorCode::InvalidArgument, "tol must be >= 1e-14");
    if (max_iters < 1) throw Error(ErrorCode::InvalidArgument, "max_iters must be positive");
    if (!(damping > 0.0 && damping <= 1.0))
        throw Error(ErrorCode::InvalidArgument, "damping must lie in (0, 1]");
}

namespace detail {

cplx StripRepresentation::background(cplx L, cplx z) { return L.real() + L.imag() * std::tan(z); }

StripRepresentation::StripRepresentation(const FixedPointData& fp, double height, int n_nodes,
                                         const std::vector<cplx>& node_values, TailMode mode)
    : fp_(fp), upper_(fp), A_(height), N_(n_nodes), mode_(mode) {
    if (static_cast<int>(node_values.size()) != N_ + 1)
        throw Error(ErrorCode::InvalidTable, "node count does not match n_nodes");
    const double h = 2.0 * A_ / N_;
    const cplx L = fp_.L;
    const cplx top = node_values.back();

    if (mode_ == TailMode::Asymptotic) {
        if (!finite(top) || std::abs(top - L) < 1e-13) {
            mode_ = TailMode::Constant;
        } else {
            try {
                K_ = cplx{0.0, A_} - std::log(upper_.chi(top)) / upper_.log_c();
            } catch (const Error&) {
                mode_ = TailMode::Constant;
            }
        }
    }

    const double decay = upper_.log_c().imag();
    const double reach = A_ + kTailDecayLengths / decay;
    const int half = N_ / 2;
    const int M = std::max(half, static_cast<int>(std::ceil(reach / h)));
    std::vector<double> p(2 * M + 1);
    std::vector<cplx> axis(2 * M + 1);
    for (int j = 0; j <= 2 * M; ++j) p[j] = (j - M) * h;
    for (int j = M + half + 1; j <= 2 * M; ++j) {
        cplx v = asymptotic(cplx{0.0, p[j]});
        axis[j] = v;
        axis[2 * M - j] = std::conj(v);
    }
    for (int k = 0; k <= N_; ++k) axis[M - half + k] = node_values[k];
    edges_ = make_edges(p, axis, h);
}

cplx StripRepresentation::asymptotic(cplx z) const {
    if (z.imag() < 0) return std::conj(asymptotic(std::conj(z)));
    if (mode_ == TailMode::Constant) return fp_.L;
    return upper_.chi_inverse(std::exp(upper_.log_c() * (z - K_)));
}

EdgeData StripRepresentation::make_edges(const std::vector<double>& p, const std::vector<cplx>& axis,
                                         double h) const {
    EdgeData e;
    e.h = h;
    e.p = p;
    e.right.resize(p.size());
    e.left.resize(p.size());
    const cplx L = fp_.L;
    for (std::size_t j = 0; j < p.size(); ++j) {
        const cplx v = axis[j];
        if (v == cplx{} || (v.real() < 0 && (v.imag() == 0.0 || (p[j] > 0) != (v.imag() > 0))))
            throw Error(ErrorCode::BranchCollapse,
                        "axis value at y = " + std::to_string(p[j]) + " reached the log cut");
        e.right[j] = exp_b(fp_.b, v) - background(L, cplx{1.0, p[j]});
        e.left[j] = log_b(fp_.b, v) - background(L, cplx{-1.0, p[j]});
    }
    return e;
}

const EdgeData& StripRepresentation::refined() const {
    std::call_once(refined_once_, [this] {
        const double h = edges_.h / kRefinement;
        const int M = static_cast<int>(std::lround(edges_.p.back() / h));
        std::vector<double> p(2 * M + 1);
        std::vector<cplx> axis(2 * M + 1);
        for (int j = 0; j <= 2 * M; ++j) p[j] = (j - M) * h;
        for (int j = M; j <= 2 * M; ++j) {
            cplx v = p[j] > A_ ? asymptotic(cplx{0.0, p[j]}) : value(cplx{0.0, p[j]});
            if (j == M) v = cplx{v.real(), 0.0};
            axis[j] = v;
            axis[2 * M - j] = std::conj(v);
        }
        refined_ = make_edges(p, axis, h);
    });
    return refined_;
}

const std::vector<Seed>& StripRepresentation::seeds() const {
    std::call_once(seeds_once_, [this] {
        const double step = seed_spacing();
        const int nx = static_cast<int>(std::lround(1.0 / step));
        const int ny = static_cast<int>(std::ceil(2.0 * (A_ - 1.0) / step));
        const double dy = 2.0 * (A_ - 1.0) / ny;
        seeds_.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
        for (int i = 0; i <= nx; ++i) {
            for (int k = 0; k <= ny; ++k) {
                cplx w{-0.5 + i * step, -(A_ - 1.0) + k * dy};
                seeds_.push_back(Seed{w, value(w), std::abs(derivative(w))});
            }
        }
    });
    return seeds_;
}

cplx StripRepresentation::value(cplx z) const {
    if (!(std::abs(z.real()) < 1.0))
        throw Error(ErrorCode::OutOfStrip, "Cauchy representation needs |Re z| < 1");
    const EdgeData& e = std::abs(z.real()) > kRefineAbove ? refined() : edges_;
    cplx acc{};
    for (std::size_t j = 0; j < e.p.size(); ++j) {
        acc += e.right[j] / (cplx{1.0, e.p[j]} - z) - e.left[j] / (cplx{-1.0, e.p[j]} - z);
    }
    return background(fp_.L, z) + acc * (e.h / (2.0 * std::numbers::pi));
}

cplx StripRepresentation::derivative(cplx z) const {
    if (!(std::abs(z.real()) < 1.0))
        throw Error(ErrorCode::OutOfStrip, "Cauchy representation needs |Re z| < 1");
    const EdgeData& e = std::abs(z.real()) > kRefineAbove ? refined() : edges_;
    cplx acc{};
    for (std::size_t j = 0; j < e.p.size(); ++j) {
        cplx dr = cplx{1.0, e.p[j]} - z;
        cplx dl = cplx{-1.0, e.p[j]} - z;
        acc += e.right[j] / (dr * dr) - e.left[j] / (dl * dl);
    }
    cplx t = std::tan(z);
    return fp_.L.imag() * (1.0 + t * t) + acc * (e.h / (2.0 * std::numbers::pi));
}

}  // namespace detail

TetrationTable::TetrationTable(const FixedPointData& fp, const SolverParams& params,
                               std::vector<Node> nodes)
    : fp_(fp), params_(params), nodes_(std::move(nodes)) {
    params_.validate();
    const int n = params_.n_nodes;
    if (static_cast<int>(nodes_.size()) != n + 1)
        throw Error(ErrorCode::InvalidTable, "table must hold n_nodes + 1 nodes");
    const std::vector<double> y = node_ordinates(n, params_.height);
    const double h = 2.0 * params_.height / n;
    std::vector<cplx> values(n + 1);
    for (int k = 0; k <= n; ++k) {
        if (std::abs(nodes_[k].y - y[k]) > 1e-9 * h)
            throw Error(ErrorCode::InvalidTable, "node ordinates are not the uniform grid");
        nodes_[k].y = y[k];
        values[k] = nodes_[k].f;
        if (!finite(values[k])) throw Error(ErrorCode::InvalidTable, "non-finite node value");
    }
    for (int k = 0; k <= n; ++k) {
        if (values[n - k] != std::conj(values[k]))
            throw Error(ErrorCode::InvalidTable, "node values violate conjugation symmetry");
    }
    rep_ = std::make_shared<const detail::StripRepresentation>(fp_, params_.height, n, values,
                                                               detail::TailMode::Asymptotic);
    final_residual_ = residual_of(*rep_, fp_.b, params_.height);
}

SolveOutcome run_solver(const Base& b, const SolverParams& params, const ProgressCallback& progress) {
    params.validate();
    const FixedPointData fp = principal_fixed_point(b);
    const int n = params.n_nodes;
    const double A = params.height;
    const double d = params.damping;
    const std::vector<double> y = node_ordinates(n, A);
    const cplx L = fp.L;

    std::vector<cplx> f(n + 1);
    for (int k = 0; k <= n; ++k) {
        double up = smoothstep(y[k] / (0.5 * A));
        double down = smoothstep(-y[k] / (0.5 * A));
        f[k] = L * up + std::conj(L) * down + (1.0 - up - down);
    }
    enforce_symmetry(f);

    bool warm = true;
    bool converged = false;
    double update = std::numeric_limits<double>::infinity();
    int iterations = 0;
    std::vector<cplx> next(n + 1);
    while (iterations < params.max_iters) {
        const auto mode = warm ? detail::TailMode::Constant : detail::TailMode::Asymptotic;
        detail::StripRepresentation rep(fp, A, n, f, mode);
        for (int k = 0; k <= n; ++k) next[k] = rep.value(cplx{0.0, y[k]});
        for (int k = 0; k <= n / 2; ++k) {
            cplx avg = 0.5 * (next[k] + std::conj(next[n - k]));
            next[k] = avg;
            next[n - k] = std::conj(avg);
        }
        for (int k = 0; k <= n; ++k) {
            if (!finite(next[k]))
                throw NoConvergenceError("iterate became non-finite at sweep " +
                                             std::to_string(iterations + 1),
                                         update);
        }
        // Remove the neutral translation mode: shift the update so that it passes through 1 at 0.
        {
            detail::StripRepresentation fresh(fp, A, n, next, mode);
            double sigma = 0.0;
            locate_unit_crossing(fresh, kRecenterClip, sigma);
            if (sigma != 0.0) next = resample(fresh, y, sigma);
        }
        update = 0.0;
        for (int k = 0; k <= n; ++k) {
            update = std::max(update, std::abs(next[k] - f[k]));
            f[k] = (1.0 - d) * f[k] + d * next[k];
        }
        enforce_symmetry(f);
        ++iterations;
        warm = warm && update > kWarmUpdate;
        if (progress && iterations % 10 == 0) progress(iterations, update);
        if (update < params.tol) {
            converged = true;
            break;
        }
    }

    {
        detail::StripRepresentation rep(fp, A, n, f, detail::TailMode::Asymptotic);
        double sigma = 0.0;
        if (locate_unit_crossing(rep, 0.9, sigma)) f = resample(rep, y, sigma);
        f[n / 2] = 1.0;
    }

    std::vector<Node> nodes(n + 1);
    for (int k = 0; k <= n; ++k) nodes[k] = Node{y[k], f[k]};
    return SolveOutcome{TetrationTable(fp, params, std::move(nodes)), converged, iterations, update};
}

TetrationTable solve(const Base& b, const SolverParams& params, const ProgressCallback& progress) {
    SolveOutcome out = run_solver(b, params, progress);
    if (!out.converged)
        throw NoConvergenceError("no convergence after " + std::to_string(out.iterations) +
                                     " sweeps (last update " + std::to_string(out.last_update) + ")",
                                 out.last_update);
    return std::move(out.table);
}

cplx evaluate_strip(const TetrationTable& table, cplx z) {
    const double top = table.height() - 1.0;
    if (!(std::abs(z.real()) <= 0.5) || !(std::abs(z.imag()) <= top))
        throw Error(ErrorCode::OutOfStrip, "evaluate_strip needs |Re z| <= 0.5 and |Im z| <= A - 1");
    if (z.real() == 0.0) {
        const auto& nodes = table.nodes();
        const int n = table.params().n_nodes;
        const double h = 2.0 * table.height() / n;
        long k = std::lround(z.imag() / h) + n / 2;
        if (k >= 0 && k <= n && nodes[k].y == z.imag()) return nodes[k].f;
    }
    return table.representation().value(z);
}

double residual_report(const TetrationTable& table) { return table.final_residual(); }

}  // namespace tetra
