#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <vector>

#include "tetra/fixpoint.hpp"
#include "tetra/koenigs.hpp"

namespace tetra {

struct SolverParams {
    int n_nodes = 128;     ///< Number of grid intervals on [-iA, iA]; must be even.
    double height = 6.0;   ///< A.
    double tol = 1e-10;
    int max_iters = 5000;
    double damping = 0.5;

    /// Throws Error(InvalidArgument) when a field is out of range.
    void validate() const;
};

struct Node {
    double y;
    cplx f;
};

namespace detail {

/// Samples of the contour integrand along Re = +1 and Re = -1.
struct EdgeData {
    double h = 0.0;
    std::vector<double> p;
    std::vector<cplx> right;
    std::vector<cplx> left;
};

enum class TailMode { Constant, Asymptotic };

/// Precomputed strip sample used to seed Newton inversion.
struct Seed {
    cplx w;
    cplx value;
    double slope;  ///< |d/dw value| at w.
};

/// Cauchy representation of sexp on |Re z| < 1 built from values on the imaginary axis.
///
/// Axis values beyond |Im z| = A are continued with L + Q(c^{z-K}) (upper half)
/// and its conjugate, with K fitted to the top node.
class StripRepresentation {
public:
    StripRepresentation(const FixedPointData& fp, double height, int n_nodes,
                        const std::vector<cplx>& node_values, TailMode mode);

    cplx value(cplx z) const;
    cplx derivative(cplx z) const;
    /// Tail continuation L + Q(c^{z-K}), or its conjugate for Im z < 0.
    cplx asymptotic(cplx z) const;

    bool has_phase() const noexcept { return mode_ == TailMode::Asymptotic; }
    cplx phase() const noexcept { return K_; }
    const KoenigsContext& koenigs() const noexcept { return upper_; }
    double extent() const noexcept { return edges_.p.back(); }

    /// Samples on |Re w| <= 1/2, |Im w| <= A - 1 with spacing seed_spacing().
    const std::vector<Seed>& seeds() const;
    static constexpr double seed_spacing() { return 0.05; }

    static cplx background(cplx L, cplx z);

private:
    EdgeData make_edges(const std::vector<double>& p, const std::vector<cplx>& axis, double h) const;
    const EdgeData& refined() const;

    FixedPointData fp_;
    KoenigsContext upper_;
    double A_;
    int N_;
    TailMode mode_;
    cplx K_{};
    EdgeData edges_;
    mutable std::once_flag refined_once_;
    mutable EdgeData refined_;
    mutable std::once_flag seeds_once_;
    mutable std::vector<Seed> seeds_;
};

}  // namespace detail

/// Converged solver state: sexp on the segment [-iA, iA] plus metadata.
class TetrationTable {
public:
    /// Nodes must be y_k = (k - N/2) 2A/N for k = 0..N with conjugation symmetry.
    TetrationTable(const FixedPointData& fp, const SolverParams& params, std::vector<Node> nodes);

    const Base& base() const noexcept { return fp_.b; }
    const FixedPointData& fixed_point() const noexcept { return fp_; }
    const SolverParams& params() const noexcept { return params_; }
    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    double height() const noexcept { return params_.height; }
    double final_residual() const noexcept { return final_residual_; }

    const detail::StripRepresentation& representation() const noexcept { return *rep_; }

private:
    FixedPointData fp_;
    SolverParams params_;
    std::vector<Node> nodes_;
    std::shared_ptr<const detail::StripRepresentation> rep_;
    double final_residual_;
};

struct SolveOutcome {
    TetrationTable table;
    bool converged;
    int iterations;
    double last_update;
};

using ProgressCallback = std::function<void(int iteration, double update)>;

/// Runs the Cauchy iteration and returns the table even when not converged.
SolveOutcome run_solver(const Base& b, const SolverParams& params,
                        const ProgressCallback& progress = {});

/// Throws NoConvergenceError if max_iters is exhausted, BranchCollapse on a cut hit.
TetrationTable solve(const Base& b, const SolverParams& params,
                     const ProgressCallback& progress = {});

/// Cauchy evaluation on Re z in [-0.5, 0.5], |Im z| <= A - 1; exact at nodes.
cplx evaluate_strip(const TetrationTable& table, cplx z);

/// Max of |exp_b(sexp(z)) - sexp(z+1)| over 101 points on Re z = -0.25.
double residual_report(const TetrationTable& table);

}  // namespace tetra
