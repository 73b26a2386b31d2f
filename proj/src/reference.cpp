#include "plates/reference.hpp"

#include "plates/errors.hpp"

#include <cmath>
#include <numbers>

namespace plates {

double navier_center_deflection(double a, double b, int terms) {
    if (!(a > 0.0) || !(b > 0.0) || terms < 1) fail(ErrorKind::Config, "Navier series needs positive sides and terms");
    const double pi = std::numbers::pi;
    double sum = 0.0;
    for (int m = 1; m <= 2 * terms - 1; m += 2) {
        for (int n = 1; n <= 2 * terms - 1; n += 2) {
            const double sign = ((m + n) / 2 - 1) % 2 == 0 ? 1.0 : -1.0;
            const double k = (m * m) / (a * a) + (n * n) / (b * b);
            sum += sign / (m * n * k * k);
        }
    }
    return 16.0 / std::pow(pi, 6) * sum / std::pow(a, 4);
}

}  // namespace plates
