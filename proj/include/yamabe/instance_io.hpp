#pragma once

#include <string>

#include "yamabe/graph.hpp"

namespace yamabe {

/// Reads an instance file and validates every ProblemInstance invariant.
/// Throws std::runtime_error on parse errors and std::invalid_argument on
/// validation errors, naming the offending field.
ProblemInstance read_instance(const std::string& path);

/// Writes the instance in the canonical key order:
/// {"p", "alpha", "mu", "h", "f", "edges"}, edges sorted by (i, j).
void write_instance(const ProblemInstance& inst, const std::string& path);

struct Solution {
    VertexFunction phi;
    double lambda;
};

/// Solution file: {"phi": [real], "lambda": real}.
Solution read_solution(const std::string& path);
void write_solution(const Solution& sol, const std::string& path);

}  // namespace yamabe
