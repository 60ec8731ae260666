#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "wgqed/errors.hpp"
#include "wgqed/modes.hpp"

using namespace wgqed;

namespace {

const WaveguideSpec kSpec{kPi, kPi / 2, 1.0, 1.0};
constexpr ModeIndex TE(int m, int n) { return {Polarization::TE, m, n}; }
constexpr ModeIndex TM(int m, int n) { return {Polarization::TM, m, n}; }

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("dispersion: worked examples") {
    const ModeDispersion d = dispersion(kSpec, TE(1, 0), 2.0);
    CHECK(d.h == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(d.nu_c == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(d.branch == Branch::Propagating);
    CHECK(rel(d.beta, std::sqrt(3.0)) < 1e-15);
    CHECK(d.gamma_complex() == Complex(0.0, d.beta));

    CHECK(dispersion(kSpec, TE(1, 0), 1.0).branch == Branch::Cutoff);

    const ModeDispersion l = dispersion(kSpec, TM(1, 1), 1.0);
    CHECK(l.branch == Branch::Localized);
    CHECK(rel(l.gamma, 2.0) < 1e-15);
    CHECK(l.gamma_complex() == Complex(2.0, 0.0));
}

TEST_CASE("dispersion relation holds on both branches") {
    const WaveguideSpec spec{2.3, 1.1, 2.0, 1.5};
    for (const ModeIndex& m : enumerate_modes(4)) {
        const double nc = cutoff_frequency(spec, m);
        CHECK(rel(nc, transverse_wavenumber(spec, m) / spec.index()) < 1e-15);
        for (double f : {0.3, 0.9, 1.1, 4.0}) {
            const double nu = f * nc;
            const ModeDispersion d = dispersion(spec, m, nu);
            const double k2 = spec.eps * spec.mu * nu * nu;
            if (f > 1) {
                REQUIRE(d.branch == Branch::Propagating);
                CHECK(d.beta > 0.0);
                CHECK(d.gamma == 0.0);
                CHECK(rel(d.beta * d.beta + d.h * d.h, k2) < 1e-14);
            } else {
                REQUIRE(d.branch == Branch::Localized);
                CHECK(d.gamma > 0.0);
                CHECK(d.beta == 0.0);
                CHECK(rel(d.h * d.h - d.gamma * d.gamma, k2) < 1e-14);
            }
        }
    }
}

TEST_CASE("beta and gamma vanish continuously at cutoff") {
    const ModeIndex m = TM(2, 1);
    const double nc = cutoff_frequency(kSpec, m);
    double prev_b = 1e300, prev_g = 1e300;
    for (double eps : {1e-2, 1e-4, 1e-6, 1e-8}) {
        const double b = dispersion(kSpec, m, nc * (1 + eps)).beta;
        const double g = dispersion(kSpec, m, nc * (1 - eps)).gamma;
        CHECK(b < prev_b);
        CHECK(g < prev_g);
        prev_b = b;
        prev_g = g;
    }
    CHECK(prev_b < 1e-3);
    CHECK(prev_g < 1e-3);
}

TEST_CASE("dispersion_at_offset agrees with dispersion") {
    const ModeIndex m = TE(1, 1);
    const double nc = cutoff_frequency(kSpec, m);
    for (double u : {1e-3, 0.1, 0.7}) {
        const OffsetDispersion p = dispersion_at_offset(kSpec, m, u, Branch::Propagating);
        CHECK(p.nu == doctest::Approx(nc + u * u).epsilon(1e-15));
        CHECK(rel(p.dispersion.beta, dispersion(kSpec, m, p.nu).beta) < 1e-9);
        const OffsetDispersion l = dispersion_at_offset(kSpec, m, u, Branch::Localized);
        CHECK(rel(l.dispersion.gamma, dispersion(kSpec, m, l.nu).gamma) < 1e-9);
    }
    CHECK_THROWS_AS(dispersion_at_offset(kSpec, m, 0.0, Branch::Propagating), DomainError);
    CHECK_THROWS_AS(dispersion_at_offset(kSpec, m, 0.1, Branch::Cutoff), DomainError);
}

TEST_CASE("mode index and waveguide validation") {
    CHECK_THROWS_WITH_AS(validate(TM(0, 1)), doctest::Contains("TM modes need m >= 1"), DomainError);
    CHECK_THROWS_WITH_AS(validate(TE(0, 0)), doctest::Contains("m = n = 0"), DomainError);
    CHECK_THROWS_AS(validate(TE(-1, 1)), DomainError);
    CHECK_NOTHROW(validate(TE(0, 1)));
    CHECK_THROWS_AS(dispersion(kSpec, TM(1, 0), 2.0), DomainError);
    CHECK_THROWS_AS(validate(WaveguideSpec{1.0, 2.0, 1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(validate(WaveguideSpec{1.0, 0.5, -1.0, 1.0}), DomainError);
    CHECK_NOTHROW(validate(WaveguideSpec{1.0, 1.0, 1.0, 1.0}));
    CHECK_THROWS_AS(dispersion(kSpec, TE(1, 0), 0.0), DomainError);
}

TEST_CASE("TE(1,0) has the lowest cutoff for a > b") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    for (int k = 0; k < 50; ++k) {
        const double a = 1.0 + 3.0 * u(rng);
        const WaveguideSpec spec{a, a * u(rng) * 0.999, 1.0 + u(rng), 1.0 + u(rng)};
        const auto sorted = modes_by_cutoff(spec, 10);
        CHECK(sorted.front() == TE(1, 0));
        CHECK(cutoff_frequency(spec, sorted[1]) > cutoff_frequency(spec, sorted[0]));
    }
}

TEST_CASE("enumerate_modes counts valid triples") {
    for (int n : {1, 2, 3, 5}) {
        // TE: (n+1)^2 - 1, TM: n^2
        CHECK(enumerate_modes(n).size() == static_cast<std::size_t>((n + 1) * (n + 1) - 1 + n * n));
    }
}

TEST_CASE("field_at: walls, maxima and longitudinal components") {
    const double nu = 2.0;
    const FieldSample wall = field_at(kSpec, TE(1, 0), nu, 1.0, {0.0, 0.4, 0.3});
    CHECK(std::abs(wall.E.y) == 0.0);
    double best = 0.0, best_x = 0.0;
    for (int i = 0; i <= 100; ++i) {
        const double x = kSpec.a * i / 100.0;
        const double v = std::abs(field_at(kSpec, TE(1, 0), nu, 1.0, {x, 0.4, 0.3}).E.y);
        if (v > best) {
            best = v;
            best_x = x;
        }
    }
    CHECK(best_x == doctest::Approx(kSpec.a / 2));
    for (const ModeIndex& m : enumerate_modes(3)) {
        const FieldSample f = field_at(kSpec, m, 5.0, 1.0, {0.3, 0.2, 0.1});
        if (m.pol == Polarization::TE) {
            CHECK(f.E.z == Complex{});
        } else {
            CHECK(f.H.z == Complex{});
        }
    }
}

TEST_CASE("tangential E vanishes on every wall") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const WaveguideSpec spec{2.0, 1.3, 1.2, 1.1};
    for (const ModeIndex& m : enumerate_modes(3)) {
        for (double f : {0.6, 1.7}) {
            const double nu = f * cutoff_frequency(spec, m);
            const Profile prof = f < 1 ? Profile::abs_exp(0.0) : Profile::signed_exp();
            for (int k = 0; k < 10; ++k) {
                const double x = spec.a * u(rng), y = spec.b * u(rng), z = 0.5 + u(rng);
                const double s = norm_sq(field_at(spec, m, nu, 1.0, {x, y, z}, prof).E) + 1.0;
                const FieldSample x0 = field_at(spec, m, nu, 1.0, {0.0, y, z}, prof);
                const FieldSample xa = field_at(spec, m, nu, 1.0, {spec.a, y, z}, prof);
                const FieldSample y0 = field_at(spec, m, nu, 1.0, {x, 0.0, z}, prof);
                const FieldSample yb = field_at(spec, m, nu, 1.0, {x, spec.b, z}, prof);
                const double tol = 1e-14 * std::sqrt(s) * 10;
                CHECK(std::abs(x0.E.y) + std::abs(x0.E.z) < tol);
                CHECK(std::abs(xa.E.y) + std::abs(xa.E.z) < tol);
                CHECK(std::abs(y0.E.x) + std::abs(y0.E.z) < tol);
                CHECK(std::abs(yb.E.x) + std::abs(yb.E.z) < tol);
            }
        }
    }
}

TEST_CASE("AbsExp localized profile is even about z0 and decays as exp(-gamma|z|)") {
    const WaveguideSpec sq{kPi, kPi, 1.0, 1.0};
    const ModeIndex m = TM(1, 1);
    const double nu = 1.0;
    const double g = dispersion(sq, m, nu).gamma;
    const Vec3 base{1.1, 0.7, 0.0};
    const Profile p = Profile::abs_exp(0.0);
    const FieldSample f0 = field_at(sq, m, nu, 1.0, base, p);
    const FieldSample fp = field_at(sq, m, nu, 1.0, {base.x, base.y, 1.0 / g}, p);
    const FieldSample fm = field_at(sq, m, nu, 1.0, {base.x, base.y, -1.0 / g}, p);
    CHECK(std::abs(f0.E.z) > 0.0);
    CHECK(rel(std::abs(fp.E.z), std::abs(fm.E.z)) < 1e-14);
    CHECK(rel(std::abs(fp.E.z), std::exp(-1.0) * std::abs(f0.E.z)) < 1e-14);
    CHECK_THROWS_AS(field_at(sq, m, 3.0, 1.0, base, p), DomainError);
}

TEST_CASE("square guide: x <-> y relabeling swaps the transverse components") {
    const WaveguideSpec sq{1.5, 1.5, 1.0, 1.0};
    CHECK(cutoff_frequency(sq, TE(1, 0)) == cutoff_frequency(sq, TE(0, 1)));
    for (auto [m, n] : {std::pair{1, 0}, std::pair{2, 1}, std::pair{1, 3}}) {
        for (Polarization pol : {Polarization::TE, Polarization::TM}) {
            if (pol == Polarization::TM && (m == 0 || n == 0)) continue;
            const double nu = 1.3 * cutoff_frequency(sq, {pol, m, n});
            const FieldSample a = field_at(sq, {pol, m, n}, nu, 1.0, {0.4, 0.9, 0.2});
            const FieldSample b = field_at(sq, {pol, n, m}, nu, 1.0, {0.9, 0.4, 0.2});
            CHECK(std::abs(a.E.x) == doctest::Approx(std::abs(b.E.y)).epsilon(1e-13));
            CHECK(std::abs(a.E.y) == doctest::Approx(std::abs(b.E.x)).epsilon(1e-13));
            CHECK(std::abs(a.E.z) == doctest::Approx(std::abs(b.E.z)).epsilon(1e-13));
            CHECK(std::abs(a.H.z) == doctest::Approx(std::abs(b.H.z)).epsilon(1e-13));
        }
    }
}

TEST_CASE("PDE residuals: worked examples and second-order convergence") {
    const Vec3 p{0.9, 0.6, 0.4};
    const double step = 1e-3;
    CHECK(helmholtz_residual(kSpec, TE(1, 0), 2.0, p, step) < 1e-5);
    const double nu_23 = 0.9 * cutoff_frequency(kSpec, TM(2, 3));
    CHECK(helmholtz_residual(kSpec, TM(2, 3), nu_23, p, step, Profile::abs_exp(0.0)) < 1e-5);
    CHECK(divergence_residual(kSpec, TE(1, 0), 2.0, p, step) < 1e-5);
    CHECK(divergence_residual(kSpec, TM(1, 1), 1.0, p, step, Profile::abs_exp(0.0)) < 1e-5);
    CHECK(divergence_residual(kSpec, TE(0, 1), 3.0, p, step) < 1e-5);
    CHECK(faraday_residual(kSpec, TM(1, 1), 4.0, p, step) < 1e-5);

    const double r1 = helmholtz_residual(kSpec, TM(2, 1), 5.0, p, 2e-2);
    const double r2 = helmholtz_residual(kSpec, TM(2, 1), 5.0, p, 1e-2);
    CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("residual stencils refuse walls and the kink plane") {
    CHECK_THROWS_AS(helmholtz_residual(kSpec, TE(1, 0), 2.0, {1e-4, 0.5, 0.0}, 1e-3), DomainError);
    CHECK_THROWS_AS(helmholtz_residual(kSpec, TM(1, 1), 1.0, {1.0, 0.5, 1e-3}, 1e-3,
                                       Profile::abs_exp(0.0)),
                    DomainError);
}
