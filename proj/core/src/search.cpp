#include "cslfa/search.hpp"

#include <string>

#include "cslfa/errors.hpp"

namespace cslfa {

double bisect_shift(const std::function<bool(double)>& ok, const BisectionSettings& s) {
    if (ok(0.0)) return 0.0;
    double lo = 0.0, hi = s.start;
    int doublings = 0;
    while (!ok(hi)) {
        if (doublings == s.max_doublings)
            throw BracketError("no admissible shift up to " + std::to_string(hi), hi);
        lo = hi;
        hi *= 2.0;
        ++doublings;
    }
    while (hi - lo >= s.width) {
        const double mid = 0.5 * (lo + hi);
        if (ok(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

}  // namespace cslfa
