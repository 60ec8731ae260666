#include <doctest.h>

#include <cmath>

#include "wgqed/emission.hpp"
#include "wgqed/errors.hpp"

using namespace wgqed;

namespace {

const WaveguideSpec kSpec{2.0, 0.8, 1.0, 1.0};
constexpr ModeIndex TE10{Polarization::TE, 1, 0};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

Atom make_atom(double omega, double dy = 1.0, double x0 = 0.7) {
    Atom a;
    a.r0 = {x0, 0.3, 0.0};
    a.dipole = {0.0, dy, 0.0};
    a.omega = omega;
    return a;
}

// Atom in the single-mode window with Gamma_eff / omega = ratio.
Atom weak_atom(double ratio, double omega = 2.2) {
    Atom a = make_atom(omega);
    const double g = decay_rate(kSpec, a, 3).gamma_eff;
    a.dipole.y = std::sqrt(ratio * omega / g);
    return a;
}

// Independent level-shift oracle: singularity subtraction in nu and the
// midpoint rule in u = sqrt|nu - nu_c| on each branch.
double shift_oracle(const WaveguideSpec& spec, const Atom& atom, int max_mn, double nu_min,
                    double nu_max, int points) {
    const double w = atom.omega;
    double total = 0.0;
    for (const ModeIndex& mode : enumerate_modes(max_mn)) {
        const double nc = cutoff_frequency(spec, mode);
        for (int sgn : {+1, -1}) {
            const double lo = sgn > 0 ? std::max(nu_min, nc) : nu_min;
            const double hi = sgn > 0 ? nu_max : std::min(nu_max, nc);
            if (!(hi > lo)) continue;
            auto n = [&](double nu) {
                const ModeDispersion d = dispersion(spec, mode, nu);
                const double g2 = std::norm(coupling_at(spec, atom, mode, nu).g);
                if (d.branch == Branch::Propagating) return 2.0 * continuum_weight(spec, mode, nu, {}) * g2;
                return g2;
            };
            const bool pole = w > lo && w < hi;
            const double nw = pole ? n(w) : 0.0;
            const double dn = pole ? (n(w + 1e-5) - n(w - 1e-5)) / 2e-5 : 0.0;
            const double ua = std::sqrt(std::abs(lo - nc));
            const double ub = std::sqrt(std::abs(hi - nc));
            const double du = (ub - ua) / points;
            double acc = 0.0;
            for (int j = 0; j < points; ++j) {
                const double u = ua + (j + 0.5) * du;
                const double nu = nc + sgn * u * u;
                const double f = std::abs(nu - w) < 1e-7 ? -dn : (n(nu) - nw) / (w - nu);
                acc += f * 2.0 * u * std::abs(du);  // d(nu) = sgn 2u du, limits swap with sgn
            }
            total += acc + (pole ? nw * std::log((w - lo) / (hi - w)) : 0.0);
        }
    }
    return total;
}

}  // namespace

TEST_CASE("decay_rate below every cutoff is zero and oscillatory") {
    const Atom a = make_atom(0.7 * cutoff_frequency(kSpec, TE10));
    const EmissionResult e = decay_rate(kSpec, a, 3);
    CHECK(e.gamma_eff == 0.0);
    CHECK(e.oscillatory);
    CHECK(e.contributions.empty());
}

TEST_CASE("decay_rate in the single-mode window") {
    const Atom a = make_atom(2.2);
    const EmissionResult e = decay_rate(kSpec, a, 3);
    REQUIRE(e.contributions.size() == 1);
    CHECK(e.contributions[0].mode == TE10);
    CHECK(e.contributions[0].value == e.gamma_eff);
    CHECK_FALSE(e.oscillatory);
    CHECK(e.direction_multiplicity == 2);
    // Direct evaluation of pi * 2 w |g|^2.
    const double w = continuum_weight(kSpec, TE10, 2.2, {});
    const double g2 = std::norm(coupling_at(kSpec, a, TE10, 2.2).g);
    CHECK(rel(e.gamma_eff, kPi * 2.0 * w * g2) < 1e-14);
}

TEST_CASE("decay_rate: additivity over several open channels") {
    const Atom a = [] {
        Atom x = make_atom(5.5);
        x.dipole = {Complex(0.3, 0.1), Complex(1.0, 0.0), Complex(0.2, -0.4)};
        return x;
    }();
    for (DosModel dos : {DosModel::PaperLiteral, DosModel::WaveguideDispersion}) {
        const EmissionResult e = decay_rate(kSpec, a, 3, {{}, dos});
        CHECK(e.contributions.size() > 3);
        double sum = 0.0;
        for (const auto& c : e.contributions) {
            CHECK(c.value >= 0.0);
            CHECK(cutoff_frequency(kSpec, c.mode) < a.omega);
            sum += c.value;
        }
        CHECK(rel(sum, e.gamma_eff) < 1e-14);
    }
}

TEST_CASE("decay_rate is L independent") {
    const Atom a = make_atom(4.4);
    for (DosModel dos : {DosModel::PaperLiteral, DosModel::WaveguideDispersion}) {
        const double g1 = decay_rate(kSpec, a, 3, {{1.0}, dos}).gamma_eff;
        const double g2 = decay_rate(kSpec, a, 3, {{2.0}, dos}).gamma_eff;
        const double g7 = decay_rate(kSpec, a, 3, {{7.0}, dos}).gamma_eff;
        CHECK(rel(g2, g1) < 1e-14);
        CHECK(rel(g7, g1) < 1e-14);
    }
}

TEST_CASE("decay_rate follows sin^2(pi x0 / a)") {
    const double mid = decay_rate(kSpec, make_atom(2.2, 1.0, kSpec.a / 2), 3).gamma_eff;
    for (double x0 : {0.1, 0.4, 0.7, 1.3, 1.9}) {
        const double g = decay_rate(kSpec, make_atom(2.2, 1.0, x0), 3).gamma_eff;
        const double s = std::sin(kPi * x0 / kSpec.a);
        CHECK(rel(g / mid, s * s) < 1e-12);
        CHECK(g <= mid);
    }
}

TEST_CASE("decay_rate near cutoff under the two DoS models") {
    const double nc = cutoff_frequency(kSpec, TE10);
    auto gamma = [&](double offset, DosModel dos) {
        return decay_rate(kSpec, make_atom(nc * (1 + offset)), 3, {{}, dos}).gamma_eff;
    };
    CHECK(gamma(1e-4, DosModel::WaveguideDispersion) > 10 * gamma(1e-1, DosModel::WaveguideDispersion));
    CHECK(gamma(1e-4, DosModel::PaperLiteral) < 2 * gamma(1e-1, DosModel::PaperLiteral));
    CHECK(std::isfinite(gamma(1e-10, DosModel::PaperLiteral)));
    CHECK_THROWS_AS(decay_rate(kSpec, make_atom(nc), 3), DomainError);
}

TEST_CASE("level_shift matches an independent subtraction oracle") {
    const Atom a = make_atom(2.2);
    const LevelShift s = level_shift(kSpec, a, 2, {0.5, 6.0, 1e-2});
    const double oracle = shift_oracle(kSpec, a, 2, 0.5, 6.0, 20000);
    CHECK(rel(s.value, oracle) < 1e-6);
    double sum = 0.0;
    for (const auto& c : s.contributions) sum += c.value;
    CHECK(rel(sum, s.value) < 1e-13);
    CHECK(s.window.nu_min == 0.5);
    CHECK(s.window.nu_max == 6.0);
}

TEST_CASE("level_shift below cutoff uses the localized principal value") {
    const Atom a = make_atom(0.7 * cutoff_frequency(kSpec, TE10));
    const LevelShift s = level_shift(kSpec, a, 2, {0.3, 6.0, 1e-2});
    CHECK(rel(s.value, shift_oracle(kSpec, a, 2, 0.3, 6.0, 20000)) < 1e-6);
}

TEST_CASE("level_shift: excision convergence and window dependence") {
    const Atom a = make_atom(2.2);
    const double full = level_shift(kSpec, a, 3, {0.5, 6.0, 1e-2}).value;
    const double half = level_shift(kSpec, a, 3, {0.5, 6.0, 5e-3}).value;
    CHECK(rel(half, full) < 1e-6);
    const double wider = level_shift(kSpec, a, 3, {0.5, 9.0, 1e-2}).value;
    CHECK(std::abs(wider - full) > 1e-3 * std::abs(full));
}

TEST_CASE("level_shift window errors") {
    const Atom a = make_atom(2.2);
    CHECK_THROWS_AS(level_shift(kSpec, a, 3, {3.0, 6.0, 1e-2}), DomainError);
    CHECK_THROWS_AS(level_shift(kSpec, a, 3, {6.0, 0.5, 1e-2}), DomainError);
    CHECK_THROWS_AS(level_shift(kSpec, a, 3, {0.5, 6.0, 0.0}), DomainError);
}

TEST_CASE("apply_level_shift sets omega_tilde = omega - delta_omega") {
    const Atom a = make_atom(2.2);
    EmissionResult e = decay_rate(kSpec, a, 3);
    CHECK(e.omega_tilde == a.omega);
    const LevelShift s = level_shift(kSpec, a, 3, {0.5, 6.0, 1e-2});
    apply_level_shift(e, s);
    CHECK(e.delta_omega == s.value);
    CHECK(e.omega_tilde == a.omega - s.value);
    REQUIRE(e.shift.has_value());
}

TEST_CASE("closed-form amplitudes") {
    const Atom a = weak_atom(1e-3);
    const EmissionResult e = decay_rate(kSpec, a, 3);
    const double G = e.gamma_eff;
    const auto grid = numerics::linspace(a.omega - 40 * G, a.omega + 40 * G, 4001);
    const auto channels = continuum_channels(kSpec, a, enumerate_modes(3), grid);
    REQUIRE(channels.size() == 1);
    const auto traj = amplitudes_closed_form(e, channels, {0.0, 2.0 / G, 60.0 / G});
    CHECK(traj.c_a[0] == Complex(1.0, 0.0));
    for (const Complex& c : traj.c_b[0][0]) CHECK(c == Complex{});
    CHECK(rel(std::norm(traj.c_a[1]), std::exp(-2.0)) < 1e-14);
    CHECK(traj.photon_probability(0) == 0.0);
    CHECK(std::abs(traj.photon_probability(2) - 1.0) < 0.02);
    // |c_a| = exp(-Gamma t / 2)
    CHECK(rel(std::abs(traj.c_a[1]), std::exp(-1.0)) < 1e-14);
}

TEST_CASE("ODE oracle agrees with the Markov solution in weak coupling") {
    const Atom a = weak_atom(1e-2);
    const double G = decay_rate(kSpec, a, 3).gamma_eff;
    // 40 Gamma would cross the TE(1,0) cutoff; stay just above it.
    const double half = std::min(40 * G, 0.98 * (a.omega - cutoff_frequency(kSpec, TE10)));
    const auto bins = make_bins(kSpec, a, enumerate_modes(3), a.omega - half, a.omega + half,
                                400, {}, true, false);
    CHECK(bins.size() == 400);
    const auto times = numerics::linspace(0.0, 3.0 / G, 61);
    const OdeTrajectory r = amplitudes_ode_oracle(a.omega, bins, times);
    double worst = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        worst = std::max(worst, std::abs(std::norm(r.amplitudes.c_a[k]) - std::exp(-G * times[k])));
    }
    CHECK(worst < 0.05);
    CHECK(r.max_norm_error < 1e-6);
}

TEST_CASE("ODE oracle: two-level Rabi oscillation") {
    // One resonant bin: c_a = cos(|g| t).
    const OdeBin bin{TE10, false, 1.0, Complex(0.0, 0.3)};
    const auto times = numerics::linspace(0.0, 10.0, 11);
    const OdeTrajectory r = amplitudes_ode_oracle(1.0, {bin}, times);
    for (std::size_t k = 0; k < times.size(); ++k) {
        CHECK(std::abs(std::norm(r.amplitudes.c_a[k]) - std::pow(std::cos(0.3 * times[k]), 2)) < 1e-8);
    }
}

TEST_CASE("ODE oracle below cutoff: no secular decay in weak coupling") {
    const double nc = cutoff_frequency(kSpec, TE10);
    Atom low = weak_atom(1e-4);
    low.omega = 0.7 * nc;
    CHECK(decay_rate(kSpec, low, 3).gamma_eff == 0.0);
    const auto bins = make_bins(kSpec, low, enumerate_modes(3), 0.05 * nc, 0.999 * nc, 400, {}, false, true);
    for (const auto& b : bins) CHECK(b.localized);
    const OdeTrajectory r = amplitudes_ode_oracle(low.omega, bins, numerics::linspace(0.0, 10.0 / low.omega, 101));
    double mn = 1.0;
    for (const Complex& c : r.amplitudes.c_a) mn = std::min(mn, std::norm(c));
    CHECK(mn > 0.5);
    CHECK(r.max_norm_error < 1e-6);
}

TEST_CASE("ODE oracle input errors") {
    CHECK_THROWS_AS(amplitudes_ode_oracle(1.0, {}, {}), DomainError);
    CHECK_THROWS_AS(amplitudes_ode_oracle(1.0, {}, {1.0, 0.5}), DomainError);
    CHECK_THROWS_AS(make_bins(kSpec, make_atom(2.2), {TE10}, 3.0, 2.0, 10), DomainError);
}

TEST_CASE("photon_state: Lorentzian peak, norm and y0 independence") {
    const Atom a = weak_atom(1e-3);
    const EmissionResult e = decay_rate(kSpec, a, 3);
    const double G = e.gamma_eff;
    const auto grid = photon_grid(e, 8001);
    CHECK(grid.front() == doctest::Approx(e.omega_tilde - 40 * G));
    CHECK(grid.back() == doctest::Approx(e.omega_tilde + 40 * G));
    const PhotonState ps = photon_state(e, kSpec, a, PhotonKind::SingleDominant, grid, std::nullopt);
    REQUIRE(ps.entries.size() == 2);
    CHECK(ps.entries[0].travel != ps.entries[1].travel);
    const double g = std::abs(coupling_at(kSpec, a, TE10, e.omega_tilde).g);
    for (const PhotonEntry& entry : ps.entries) {
        const std::size_t mid = entry.nu.size() / 2;
        CHECK(entry.nu[mid] == doctest::Approx(e.omega_tilde).epsilon(1e-12));
        double peak = 0.0;
        for (const Complex& c : entry.amplitude) peak = std::max(peak, std::abs(c));
        CHECK(peak == std::abs(entry.amplitude[mid]));
        CHECK(rel(peak, g / (G / 2)) < 1e-6);
        double integral = 0.0;
        const double dnu = entry.nu[1] - entry.nu[0];
        for (std::size_t k = 0; k < entry.nu.size(); ++k) {
            const double wt = (k == 0 || k + 1 == entry.nu.size()) ? 0.5 : 1.0;
            integral += wt * std::norm(entry.amplitude[k]) * dnu;
        }
        CHECK(std::abs(integral / (2 * kPi * g * g / G) - 1.0) < 0.02);
    }
    Atom moved = a;
    moved.r0.y = 0.65;
    const PhotonState ps2 = photon_state(e, kSpec, moved, PhotonKind::SingleDominant, grid, std::nullopt);
    for (std::size_t k = 0; k < grid.size(); k += 97) {
        CHECK(rel(std::abs(ps2.entries[0].amplitude[k]), std::abs(ps.entries[0].amplitude[k])) < 1e-12);
    }
}

TEST_CASE("photon_state at finite t and mode selection") {
    const Atom a = weak_atom(1e-3);
    const EmissionResult e = decay_rate(kSpec, a, 3);
    const auto grid = photon_grid(e, 101);
    const PhotonState zero = photon_state(e, kSpec, a, PhotonKind::PropagatingOnly, grid, 0.0);
    for (const auto& entry : zero.entries) {
        CHECK_FALSE(entry.localized);
        for (const Complex& c : entry.amplitude) CHECK(std::abs(c) < 1e-15);
    }
    const PhotonState all = photon_state(e, kSpec, a, PhotonKind::AllModes, grid, std::nullopt);
    std::size_t localized = 0;
    for (const auto& entry : all.entries) localized += entry.localized;
    CHECK(localized > 0);
    CHECK(all.entries.size() == 2 + localized);
}

TEST_CASE("single-mode dominance is enforced") {
    CHECK_NOTHROW(check_single_mode_dominance(kSpec, 2.2));
    CHECK_THROWS_WITH_AS(check_single_mode_dominance(kSpec, 3.5), doctest::Contains("TE(2,0)"),
                         DomainError);
    CHECK_THROWS_AS(check_single_mode_dominance(kSpec, 1.0), DomainError);
    Atom a = make_atom(3.5);
    const EmissionResult e = decay_rate(kSpec, a, 3);
    CHECK_THROWS_AS(photon_state(e, kSpec, a, PhotonKind::SingleDominant, photon_grid(e, 11), std::nullopt),
                    DomainError);
}
