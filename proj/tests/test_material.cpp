#include "oracles.hpp"

#include "plates/errors.hpp"
#include "plates/material.hpp"

#include <doctest.h>

#include <cmath>

using namespace plates;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

double rel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    const double scale = b.cwiseAbs().maxCoeff();
    return (a - b).cwiseAbs().maxCoeff() / std::max(scale, 1e-300);
}

}  // namespace

TEST_CASE("temperature law matches direct polynomial evaluation") {
    const FgmDefinition f = material_preset("Si3N4/SUS304", 1.0, 0.1);
    const double t = 300.0;
    const double e = 201.04e9 * (1.0 + 3.079e-4 * t - 6.534e-7 * t * t);
    CHECK(rel(property_at_temperature(f.metal.youngs_modulus, t), e) < 1e-14);
    const double ec = 348.43e9 * (1.0 - 3.070e-4 * t + 2.160e-7 * t * t - 8.946e-11 * t * t * t);
    CHECK(rel(property_at_temperature(f.ceramic.youngs_modulus, t), ec) < 1e-14);
    CHECK_THROWS_AS(property_at_temperature(f.metal.youngs_modulus, 0.0), Error);
}

TEST_CASE("Mori-Tanaka endpoints and mid value") {
    const BulkShear c = bulk_shear_from(151e9, 0.3);
    const BulkShear m = bulk_shear_from(70e9, 0.3);
    const BulkShear e0 = mori_tanaka(c, m, 0.0);
    const BulkShear e1 = mori_tanaka(c, m, 1.0);
    CHECK(rel(e0.bulk, m.bulk) < 1e-15);
    CHECK(rel(e0.shear, m.shear) < 1e-15);
    CHECK(rel(e1.bulk, c.bulk) < 1e-15);
    CHECK(rel(e1.shear, c.shear) < 1e-15);

    const oracle::Moduli oc = oracle::from_eg(151e9, 0.3);
    const oracle::Moduli om = oracle::from_eg(70e9, 0.3);
    const oracle::Moduli ref = oracle::mori_tanaka(oc, om, 0.5);
    const BulkShear half = mori_tanaka(c, m, 0.5);
    CHECK(rel(half.bulk, ref.k) < 1e-13);
    CHECK(rel(half.shear, ref.g) < 1e-13);
    // metal is the softer phase: Mori-Tanaka sits on the lower Hashin-Shtrikman bound
    const oracle::Moduli lo = oracle::hashin_shtrikman(om, oc, 0.5);
    const oracle::Moduli hi = oracle::hashin_shtrikman(oc, om, 0.5);
    CHECK(half.bulk >= lo.k * (1 - 1e-12));
    CHECK(half.bulk <= hi.k * (1 + 1e-12));
    CHECK(half.shear >= lo.g * (1 - 1e-12));
    CHECK(half.shear <= hi.g * (1 + 1e-12));

    const IsotropicModuli iso = effective_isotropic(half);
    CHECK(iso.youngs > 70e9);
    CHECK(iso.youngs < 151e9);
}

TEST_CASE("isotropic round trip and the zero Poisson point") {
    const IsotropicModuli back = effective_isotropic(bulk_shear_from(70e9, 0.3));
    CHECK(rel(back.youngs, 70e9) < 1e-12);
    CHECK(rel(back.poisson, 0.3) < 1e-12);
    CHECK(std::abs(effective_isotropic({2.0, 3.0}).poisson) < 1e-15);
}

TEST_CASE("property: bounds and round trip over random constituents") {
    oracle::Gen gen(11);
    for (int trial = 0; trial < 500; ++trial) {
        const double em = gen.uniform(10e9, 200e9);
        const double ec = gen.uniform(10e9, 400e9);
        const double num = gen.uniform(0.05, 0.45);
        const double nuc = gen.uniform(0.05, 0.45);
        const double vc = trial == 0 ? 0.0 : (trial == 1 ? 1.0 : gen.uniform(0.0, 1.0));
        const BulkShear c = bulk_shear_from(ec, nuc);
        const BulkShear m = bulk_shear_from(em, num);
        const BulkShear e = mori_tanaka(c, m, vc);
        const double slack = 1e-12;
        CHECK(e.bulk >= std::min(c.bulk, m.bulk) * (1 - slack));
        CHECK(e.bulk <= std::max(c.bulk, m.bulk) * (1 + slack));
        CHECK(e.shear >= std::min(c.shear, m.shear) * (1 - slack));
        CHECK(e.shear <= std::max(c.shear, m.shear) * (1 + slack));

        const IsotropicModuli iso = effective_isotropic(bulk_shear_from(em, num));
        CHECK(rel(iso.youngs, em) < 1e-12);
        CHECK(rel(iso.poisson, num) < 1e-12);

        FgmDefinition f = material_preset("Al/ZrO2", 1.0, 0.1);
        f.ceramic.youngs_modulus.p0 = ec;
        f.ceramic.poisson = nuc;
        f.metal.youngs_modulus.p0 = em;
        f.metal.poisson = num;
        f.ceramic.conductivity = gen.uniform(1.0, 300.0);
        f.metal.conductivity = gen.uniform(1.0, 300.0);
        const TransportProperties t = effective_transport(f, vc, 300.0);
        CHECK(t.conductivity >= std::min(f.ceramic.conductivity, f.metal.conductivity) * (1 - slack));
        CHECK(t.conductivity <= std::max(f.ceramic.conductivity, f.metal.conductivity) * (1 + slack));
        // E grows with both K and G, so it is bracketed by the moduli built from the extreme K and G
        const double ey = effective_isotropic(e).youngs;
        const double e_lo = effective_isotropic({std::min(c.bulk, m.bulk), std::min(c.shear, m.shear)}).youngs;
        const double e_hi = effective_isotropic({std::max(c.bulk, m.bulk), std::max(c.shear, m.shear)}).youngs;
        CHECK(ey >= e_lo * (1 - slack));
        CHECK(ey <= e_hi * (1 + slack));
    }
}

TEST_CASE("effective transport") {
    const FgmDefinition f = material_preset("Si3N4/SUS304", 1.0, 0.1);
    const double t = 300.0;
    const TransportProperties m = effective_transport(f, 0.0, t);
    const TransportProperties c = effective_transport(f, 1.0, t);
    const double am = property_at_temperature(f.metal.thermal_expansion, t);
    const double ac = property_at_temperature(f.ceramic.thermal_expansion, t);
    CHECK(rel(m.conductivity, 12.04) < 1e-14);
    CHECK(rel(c.conductivity, 9.19) < 1e-14);
    CHECK(rel(m.expansion, am) < 1e-12);
    CHECK(rel(c.expansion, ac) < 1e-12);
    CHECK(rel(m.density, 8166.0) < 1e-14);
    CHECK(rel(c.density, 2370.0) < 1e-14);

    const TransportProperties h = effective_transport(f, 0.5, t);
    const double km = 12.04, kc = 9.19;
    const double kappa = km + (kc - km) * 0.5 / (1.0 + 0.5 * (kc - km) / (3.0 * km));
    CHECK(rel(h.conductivity, kappa) < 1e-13);
    const oracle::Moduli oc = oracle::from_eg(property_at_temperature(f.ceramic.youngs_modulus, t), 0.28);
    const oracle::Moduli om = oracle::from_eg(property_at_temperature(f.metal.youngs_modulus, t), 0.28);
    const oracle::Moduli e = oracle::mori_tanaka(oc, om, 0.5);
    const double alpha = am + (ac - am) * (1.0 / e.k - 1.0 / om.k) / (1.0 / oc.k - 1.0 / om.k);
    CHECK(rel(h.expansion, alpha) < 1e-12);
    CHECK(h.expansion > std::min(am, ac));
    CHECK(h.expansion < std::max(am, ac));
    CHECK(rel(h.density, 0.5 * (8166.0 + 2370.0)) < 1e-14);
}

TEST_CASE("volume fraction monotonicity") {
    oracle::Gen gen(3);
    for (int trial = 0; trial < 200; ++trial) {
        const double h = gen.uniform(0.01, 1.0);
        const double z = gen.uniform(-0.5 * h, 0.5 * h * 0.999);
        const double n1 = gen.uniform(0.0, 10.0);
        const double n2 = n1 + gen.uniform(0.0, 5.0);
        FgmDefinition a = material_preset("Al/ZrO2", n1, h);
        FgmDefinition b = material_preset("Al/ZrO2", n2, h);
        CHECK(volume_fraction(z, b) <= volume_fraction(z, a) + 1e-15);
        if (n1 > 0.0) {
            const double z2 = gen.uniform(z, 0.5 * h);
            CHECK(volume_fraction(z2, a) >= volume_fraction(z, a));
        }
    }
    const FgmDefinition f = material_preset("Al/ZrO2", 2.0, 0.1);
    CHECK(volume_fraction(0.05, f) == doctest::Approx(1.0));
    CHECK(volume_fraction(-0.05, f) == doctest::Approx(0.0));
    CHECK_THROWS_AS(volume_fraction(0.2, f), Error);
}

TEST_CASE("temperature profile") {
    FgmDefinition f = material_preset("Si3N4/SUS304", 1.0, 0.1);
    const ThermalState g = ThermalState::gradient(400.0, 300.0);
    CHECK(temperature_profile(g, f, 0.05) == doctest::Approx(400.0).epsilon(1e-14));
    CHECK(temperature_profile(g, f, -0.05) == doctest::Approx(300.0).epsilon(1e-14));
    CHECK(temperature_profile(ThermalState::uniform(350.0), f, 0.01) == 350.0);

    SUBCASE("n = 0 is linear") {
        f.gradient_index = 0.0;
        for (double z : {-0.04, -0.01, 0.0, 0.02, 0.045})
            CHECK(temperature_profile(g, f, z) == doctest::Approx(350.0 + 1000.0 * z).epsilon(1e-13));
    }
    SUBCASE("series against a finite-difference conduction solve") {
        const double h = f.thickness;
        const double kc = f.ceramic.conductivity, km = f.metal.conductivity;
        // conduction through a power-law mixture of the two conductivities
        auto kappa = [&](double z) { return km + (kc - km) * std::pow((2 * z + h) / (2 * h), f.gradient_index); };
        const auto t = oracle::conduction_fd(kappa, h, 300.0, 400.0, 10000);
        CHECK(std::abs(temperature_profile(g, f, 0.0) - t[5000]) < 0.1);
    }
    SUBCASE("linear profile option") {
        const ThermalState lin = ThermalState::gradient(400.0, 300.0, 300.0, ProfileShape::Linear);
        CHECK(temperature_profile(lin, f, 0.0) == doctest::Approx(350.0));
    }
}

TEST_CASE("shear correction factors") {
    FgmDefinition f = material_preset("Al/ZrO2", 0.0, 0.1);
    CHECK(shear_correction_factors(f, ThermalState::uniform(300)).xz == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
    f.shear_correction.mode = ShearCorrection::Mode::EnergyEquivalence;
    const ShearFactors hom = shear_correction_factors(f, ThermalState::uniform(300));
    CHECK(std::abs(hom.xz - 5.0 / 6.0) < 1e-6);
    CHECK(hom.xz == hom.yz);

    f.gradient_index = 1.0;
    const double k = shear_correction_factors(f, ThermalState::uniform(300)).xz;
    CHECK(k > 0.7);
    CHECK(k < 0.95);

    // brute-force: nested composite trapezoid with 2e4 panels
    const double h = f.thickness;
    const int panels = 20000;
    const double dz = h / panels;
    auto e_at = [&](double z) { return properties_at(f, ThermalState::uniform(300), z).youngs; };
    auto nu_at = [&](double z) { return properties_at(f, ThermalState::uniform(300), z).poisson; };
    std::vector<double> zs(panels + 1), e(panels + 1), nu(panels + 1);
    for (int i = 0; i <= panels; ++i) {
        zs[i] = -0.5 * h + i * dz;
        e[i] = e_at(zs[i]);
        nu[i] = nu_at(zs[i]);
    }
    double ei = 0, ezi = 0;
    for (int i = 0; i < panels; ++i) {
        ei += 0.5 * dz * (e[i] + e[i + 1]);
        ezi += 0.5 * dz * (e[i] * zs[i] + e[i + 1] * zs[i + 1]);
    }
    const double zn = ezi / ei;
    std::vector<double> g(panels + 1, 0.0);
    auto q11 = [&](int i) { return e[i] / (1 - nu[i] * nu[i]); };
    for (int i = 0; i < panels; ++i)
        g[i + 1] = g[i] + 0.5 * dz * (q11(i) * (zs[i] - zn) + q11(i + 1) * (zs[i + 1] - zn));
    double gi = 0, g2 = 0, gs = 0;
    for (int i = 0; i < panels; ++i) {
        const double s0 = e[i] / (2 * (1 + nu[i])), s1 = e[i + 1] / (2 * (1 + nu[i + 1]));
        gi += 0.5 * dz * (g[i] + g[i + 1]);
        g2 += 0.5 * dz * (g[i] * g[i] / s0 + g[i + 1] * g[i + 1] / s1);
        gs += 0.5 * dz * (s0 + s1);
    }
    CHECK(rel(k, gi * gi / (gs * g2)) < 1e-5);
}

TEST_CASE("homogeneous section closed forms") {
    FgmDefinition f = material_preset("Al/ZrO2", 0.0, 0.1);
    f.ceramic.youngs_modulus.p0 = 70e9;
    const SectionStiffness s = section_stiffness(f, ThermalState::uniform(300.0));
    const double e = 70e9, nu = 0.3, h = 0.1;
    CHECK(rel(s.A(0, 0), e * h / (1 - nu * nu)) < 1e-12);
    CHECK(rel(s.D(0, 0), e * h * h * h / (12 * (1 - nu * nu))) < 1e-12);
    CHECK(s.B.cwiseAbs().maxCoeff() <= 1e-10 * s.A(0, 0) * h);
    CHECK(s.Nth.isZero(0.0));
    CHECK(s.Mth.isZero(0.0));
    CHECK(rel(Eigen::MatrixXd(s.D), Eigen::MatrixXd(s.A * (h * h / 12.0))) < 1e-10);
    CHECK((s.A - s.A.transpose()).isZero(0.0));
    CHECK((s.B - s.B.transpose()).isZero(0.0));
    CHECK((s.D - s.D.transpose()).isZero(0.0));
    CHECK((s.Es - s.Es.transpose()).isZero(0.0));

    SUBCASE("uniform heating") {
        const SectionStiffness t = section_stiffness(f, ThermalState::uniform(320.0, 300.0));
        const double nth = e * 10e-6 * 20.0 * h / (1 - nu);
        CHECK(rel(t.Nth(0), nth) < 1e-12);
        CHECK(rel(t.Nth(1), nth) < 1e-12);
        CHECK(t.Nth(2) == 0.0);
    }
}

TEST_CASE("linear density profile") {
    const FgmDefinition f = material_preset("Al/ZrO2", 1.0, 0.1);
    const SectionStiffness s = section_stiffness(f, ThermalState::uniform(300.0));
    CHECK(rel(s.inertia_p, 0.1 * (3000.0 + 2707.0) / 2.0) < 1e-12);
}

TEST_CASE("graded section against a composite-trapezoid oracle") {
    const double h = 0.1;
    const FgmDefinition f = material_preset("Al/ZrO2", 2.0, h);
    const SectionStiffness s = section_stiffness(f, ThermalState::uniform(300.0));
    const oracle::Moduli oc = oracle::from_eg(151e9, 0.3);
    const oracle::Moduli om = oracle::from_eg(70e9, 0.3);
    auto moduli = [&](double z) {
        const double vc = std::pow((2 * z + h) / (2 * h), 2.0);
        return oracle::mori_tanaka(oc, om, vc);
    };
    auto q11 = [&](double z) {
        const auto m = moduli(z);
        const double e = oracle::young(m), nu = oracle::poisson(m);
        return e / (1 - nu * nu);
    };
    auto q12 = [&](double z) { return oracle::poisson(moduli(z)) * q11(z); };
    auto q66 = [&](double z) { return moduli(z).g; };
    const int panels = 100000;
    auto integ = [&](auto f_) { return oracle::composite_trapezoid(f_, -h / 2, h / 2, panels); };
    CHECK(rel(s.A(0, 0), integ(q11)) < 1e-6);
    CHECK(rel(s.A(0, 1), integ(q12)) < 1e-6);
    CHECK(rel(s.A(2, 2), integ(q66)) < 1e-6);
    CHECK(rel(s.B(0, 0), integ([&](double z) { return z * q11(z); })) < 1e-6);
    CHECK(rel(s.B(2, 2), integ([&](double z) { return z * q66(z); })) < 1e-6);
    CHECK(rel(s.D(0, 0), integ([&](double z) { return z * z * q11(z); })) < 1e-6);
    CHECK(rel(s.D(0, 1), integ([&](double z) { return z * z * q12(z); })) < 1e-6);
    CHECK(rel(s.Es(0, 0), 5.0 / 6.0 * integ(q66)) < 1e-6);
    auto rho = [&](double z) {
        const double vc = std::pow((2 * z + h) / (2 * h), 2.0);
        return 3000.0 * vc + 2707.0 * (1 - vc);
    };
    CHECK(rel(s.inertia_p, integ(rho)) < 1e-6);
    CHECK(rel(s.inertia_i, integ([&](double z) { return z * z * rho(z); })) < 1e-6);
}

TEST_CASE("gradient thermal resultants against a Simpson oracle") {
    const double h = 0.1;
    FgmDefinition f = material_preset("Al/Al2O3", 5.0, h);
    const ThermalState th = ThermalState::gradient(400.0, 305.0, 300.0);
    const SectionStiffness s = section_stiffness(f, th);
    const oracle::Moduli oc = oracle::from_eg(380e9, 0.3);
    const oracle::Moduli om = oracle::from_eg(70e9, 0.3);
    auto point = [&](double z, double& q, double& alpha) {
        const double vc = std::pow((2 * z + h) / (2 * h), 5.0);
        const auto m = oracle::mori_tanaka(oc, om, vc);
        const double e = oracle::young(m), nu = oracle::poisson(m);
        q = e / (1 - nu * nu) * (1 + nu);
        alpha = 23e-6 + (7.4e-6 - 23e-6) * (1 / m.k - 1 / om.k) / (1 / oc.k - 1 / om.k);
    };
    auto nth = [&](double z) {
        double q, a;
        point(z, q, a);
        return q * a * (temperature_profile(th, f, z) - 300.0);
    };
    const double ref_n = oracle::composite_simpson(nth, -h / 2, h / 2, 200000);
    const double ref_m = oracle::composite_simpson([&](double z) { return z * nth(z); }, -h / 2, h / 2, 200000);
    CHECK(rel(s.Nth(0), ref_n) < 1e-8);
    CHECK(rel(s.Nth(1), ref_n) < 1e-8);
    CHECK(rel(s.Mth(0), ref_m) < 1e-8);
}

TEST_CASE("material json round trip and errors") {
    FgmDefinition f = material_preset("Si3N4/SUS304", 2.5, 0.02);
    f.homogenization = Homogenization::RuleOfMixtures;
    const FgmDefinition g = fgm_from_json(fgm_to_json(f));
    CHECK(g.gradient_index == 2.5);
    CHECK(g.thickness == 0.02);
    CHECK(g.homogenization == Homogenization::RuleOfMixtures);
    CHECK(g.ceramic.youngs_modulus.p3 == f.ceramic.youngs_modulus.p3);
    CHECK(g.metal.density == f.metal.density);

    try {
        material_preset("unobtainium", 0, 0.1);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Config);
    }
    FgmDefinition bad = f;
    bad.gradient_index = -1;
    CHECK_THROWS_AS(bad.validate(), Error);
    CHECK_THROWS_AS(fgm_from_json(nlohmann::json{{"ceramic", 1}}), Error);
}
