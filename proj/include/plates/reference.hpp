#pragma once

namespace plates {

/// Kirchhoff (thin-plate) centre deflection of a simply supported a x b plate under uniform
/// pressure from the double sine series, as the factor beta in w_c = beta p a^4 / D.
/// Sums odd m, n up to `terms` each.
double navier_center_deflection(double a, double b, int terms = 100);

}  // namespace plates
