#pragma once

#include <numbers>

#include "tetra/cauchy_solver.hpp"

namespace tetra::testing {

// Converged tables shared by all tests of one binary.
inline const TetrationTable& table_e() {
    static const TetrationTable t = solve(Base(std::numbers::e), SolverParams{});
    return t;
}

inline const TetrationTable& table_2() {
    static const TetrationTable t = solve(Base(2.0), SolverParams{});
    return t;
}

}  // namespace tetra::testing
