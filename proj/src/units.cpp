#include "spdc/units.hpp"

#include <cmath>

namespace spdc {

double wrap_two_pi(double rad) {
    const double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(rad, two_pi);
    if (r < 0.0) r += two_pi;
    return r;
}

double wrap_half_turn(double rad) {
    const double pi = std::numbers::pi;
    double r = std::fmod(rad, pi);
    if (r > 0.5 * pi) r -= pi;
    if (r <= -0.5 * pi) r += pi;
    return r;
}

} // namespace spdc
