#pragma once

#include <filesystem>
#include <string>

#include "tetra/cauchy_solver.hpp"

namespace tetra {

/// {base, L: [re, im], A, N, residual, nodes: [[y, re, im], ...]} with 17 significant digits.
std::string table_to_json(const TetrationTable& table);

/// Throws InvalidTable for malformed input or a stored L that does not match the base,
/// BaseOutOfRange for a stored base <= e^(1/e).
TetrationTable table_from_json(const std::string& text);

void save_table(const TetrationTable& table, const std::filesystem::path& path);

/// Throws MissingTable if the file does not exist.
TetrationTable load_table(const std::filesystem::path& path);

}  // namespace tetra
