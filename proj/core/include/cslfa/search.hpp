#pragma once

#include <functional>

namespace cslfa {

struct BisectionSettings {
    double start = 1.0;
    int max_doublings = 6;
    double width = 5e-4;
};

// Smallest beta >= 0 with ok(beta).  ok(0) short-circuits to 0; otherwise the
// upper end doubles from start until ok holds, and the bracket [fail, ok] is
// bisected down to the requested width.  Throws BracketError at the ceiling.
double bisect_shift(const std::function<bool(double)>& ok, const BisectionSettings& s = {});

}  // namespace cslfa
