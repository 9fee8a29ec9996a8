#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nlf/chart.hpp"
#include "nlf/expr.hpp"

namespace nlf {

// Parsed contents of a definition file. Either a Lagrangian or direct
// d-metric data (g/h blocks and N-connection coefficients as expressions);
// unspecified block entries default to zero.
struct ProblemInput {
    std::shared_ptr<const ChartSpec> chart;
    std::optional<Expression> lagrangian;
    std::vector<std::vector<Expression>> g;  // n x n, symmetric
    std::vector<std::vector<Expression>> h;  // m x m, symmetric
    std::vector<std::vector<Expression>> N;  // m x n  (N^a_i)
    bool has_dmetric = false;

    bool is_lagrangian() const { return lagrangian.has_value(); }
};

// Reads the line-oriented definition format:
//   dims <n> <m>
//   lagrangian <expr>
//   metric_block g <i> <j> <expr>
//   metric_block h <a> <b> <expr>
//   nconn <a> <i> <expr>
// '#' starts a comment; indices are 1-based within their block.
ProblemInput parse_problem_text(const std::string& text);
ProblemInput parse_problem_file(const std::string& path);

} // namespace nlf
