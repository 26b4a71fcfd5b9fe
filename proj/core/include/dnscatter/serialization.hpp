#pragma once

#include <string>

#include "dnscatter/matcher.hpp"

namespace dnscatter {

// {config:{d,n0,k,incidence}, N, Nt, n1, c, r, t, residual_cont, residual_deriv, cond}
// with complex vectors as arrays of [re, im] pairs. Doubles are written with
// round-trip precision.
std::string to_json(const TraceSolution& sol, int indent = 2);

// Throws InvalidArgument on malformed input.
TraceSolution trace_solution_from_json(const std::string& text);

}  // namespace dnscatter
