#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace blowuplab {

/// Gauss–Legendre rule on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Computes the n-point rule by Newton iteration on P_n. Rules for a given n
/// are cached; the returned reference stays valid for the program lifetime.
const GaussLegendreRule& gauss_legendre(std::size_t n);

/// Integrates f over [lo, hi] with `panels` equal panels of the given rule.
template <typename F>
double integrate_panels(F&& f, double lo, double hi, std::size_t panels,
                        const GaussLegendreRule& rule) {
    const double width = (hi - lo) / static_cast<double>(panels);
    const double half = 0.5 * width;
    double sum = 0.0;
    for (std::size_t k = 0; k < panels; ++k) {
        const double mid = lo + (static_cast<double>(k) + 0.5) * width;
        double panel = 0.0;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
            panel += rule.weights[j] * f(mid + half * rule.nodes[j]);
        }
        sum += half * panel;
    }
    return sum;
}

/// Composite trapezoid rule on a uniform grid with spacing h.
double trapezoid(std::span<const double> values, double h);

}  // namespace blowuplab
