#include "wgqed/emission.hpp"

#include <algorithm>
#include <cmath>

#include <boost/numeric/odeint.hpp>

#include "wgqed/errors.hpp"

namespace wgqed {

namespace {

bool at_cutoff(const ModeDispersion& d) { return d.branch == Branch::Cutoff; }

}  // namespace

EmissionResult decay_rate(const WaveguideSpec& spec, const Atom& atom, int max_mn,
                          const EmissionOptions& options) {
    validate(spec, atom);
    if (max_mn < 1) throw DomainError("decay_rate: max_mn must be >= 1");
    EmissionResult out;
    out.omega = atom.omega;
    out.dos = options.dos;
    out.normalization = options.normalization;

    const std::vector<ModeIndex> modes = enumerate_modes(max_mn);
    std::vector<double> partial(modes.size(), 0.0);
    std::vector<char> open(modes.size(), 0);
    numerics::parallel_for(modes.size(), [&](std::size_t i) {
        const ModeDispersion d = dispersion(spec, modes[i], atom.omega);
        if (at_cutoff(d)) {
            throw DomainError("decay_rate: omega sits on the cutoff of " + to_string(modes[i]));
        }
        if (d.branch != Branch::Propagating) return;
        const double w = continuum_weight(spec, modes[i], atom.omega, d, options.box, options.dos);
        const Complex g = coupling_at(spec, atom, modes[i], atom.omega, d, options.box,
                                      options.normalization)
                              .g;
        partial[i] = kPi * 2.0 * w * std::norm(g);
        open[i] = 1;
    });

    numerics::CompensatedSum<double> total;
    for (std::size_t i = 0; i < modes.size(); ++i) {
        if (!open[i]) continue;
        out.contributions.push_back({modes[i], partial[i]});
        total.add(partial[i]);
    }
    out.gamma_eff = total.value();
    out.oscillatory = out.contributions.empty();
    out.omega_tilde = out.omega;
    return out;
}

namespace {

// Contribution of one mode to the level shift: the propagating branch in
// nu = nu_c + u^2 and the localized branch in nu = nu_c - u^2.
double mode_shift(const WaveguideSpec& spec, const Atom& atom, const ModeIndex& mode,
                  const ShiftWindow& win, const EmissionOptions& options,
                  const numerics::QuadratureSpec& quad) {
    const double omega = atom.omega;
    const double nu_c = cutoff_frequency(spec, mode);
    double total = 0.0;

    auto branch_integral = [&](Branch branch, double u_lo, double u_hi, double u_pole) {
        // 2u rho |g|^2 as a function of u; d(nu) = 2u du on both branches
        auto weight = [&](double u) {
            const OffsetDispersion od = dispersion_at_offset(spec, mode, u, branch);
            const Complex g = coupling_at(spec, atom, mode, od.nu, od.dispersion, options.box,
                                          options.normalization)
                                  .g;
            double rho = 1.0;
            if (branch == Branch::Propagating) {
                rho = 2.0 * continuum_weight(spec, mode, od.nu, od.dispersion, options.box,
                                             options.dos);
            }
            return 2.0 * u * rho * std::norm(g);
        };
        // omega - nu = u_p^2 - u^2 (propagating) or u^2 - u_p^2 (localized)
        const double sign = branch == Branch::Propagating ? -1.0 : 1.0;
        if (u_pole > u_lo && u_pole < u_hi) {
            numerics::PVSpec pv;
            pv.lo = u_lo;
            pv.hi = u_hi;
            pv.half_width = win.half_width / (2.0 * u_pole);
            pv.tolerance = 1e-9;
            pv.max_refinements = 12;
            pv.inner = quad;
            return numerics::pv_integrate(
                       [&](double u) { return sign * weight(u) / (u + u_pole); }, u_pole, pv)
                .value;
        }
        const double omega_off = branch == Branch::Propagating ? omega - nu_c : nu_c - omega;
        return numerics::integrate(
                   [&](double u) { return sign * weight(u) / (u * u - omega_off); }, u_lo, u_hi,
                   quad)
            .value;
    };

    if (win.nu_max > nu_c) {
        const double u_lo = std::sqrt(std::max(win.nu_min - nu_c, 0.0));
        const double u_hi = std::sqrt(win.nu_max - nu_c);
        const double u_pole = omega > nu_c ? std::sqrt(omega - nu_c) : -1.0;
        total += branch_integral(Branch::Propagating, u_lo, u_hi, u_pole);
    }
    if (win.nu_min < nu_c) {
        const double u_lo = std::sqrt(nu_c - std::min(win.nu_max, nu_c));
        const double u_hi = std::sqrt(nu_c - win.nu_min);
        const double u_pole = omega < nu_c ? std::sqrt(nu_c - omega) : -1.0;
        total += branch_integral(Branch::Localized, u_lo, u_hi, u_pole);
    }
    return total;
}

}  // namespace

LevelShift level_shift(const WaveguideSpec& spec, const Atom& atom, int max_mn,
                       const ShiftWindow& window, const EmissionOptions& options,
                       const numerics::QuadratureSpec& quad) {
    validate(spec, atom);
    if (max_mn < 1) throw DomainError("level_shift: max_mn must be >= 1");
    if (!(window.nu_min > 0.0) || !(window.nu_max > window.nu_min)) {
        throw DomainError("level_shift: the window needs 0 < nu_min < nu_max");
    }
    if (!(window.half_width > 0.0)) throw DomainError("level_shift: half_width must be > 0");

    const std::vector<ModeIndex> modes = enumerate_modes(max_mn);
    const double omega = atom.omega;
    const bool inside = omega > window.nu_min && omega < window.nu_max;
    for (const ModeIndex& m : modes) {
        const ModeDispersion d = dispersion(spec, m, omega);
        if (at_cutoff(d)) {
            throw DomainError("level_shift: omega sits on the cutoff of " + to_string(m));
        }
        if (!inside && d.branch == Branch::Propagating) {
            throw DomainError("level_shift: window [" + std::to_string(window.nu_min) + ", " +
                              std::to_string(window.nu_max) + "] does not contain omega = " +
                              std::to_string(omega) + " while " + to_string(m) + " propagates");
        }
    }

    std::vector<double> partial(modes.size(), 0.0);
    numerics::parallel_for(modes.size(), [&](std::size_t i) {
        partial[i] = mode_shift(spec, atom, modes[i], window, options, quad);
    });

    LevelShift out;
    out.window = window;
    numerics::CompensatedSum<double> total;
    for (std::size_t i = 0; i < modes.size(); ++i) {
        out.contributions.push_back({modes[i], partial[i]});
        total.add(partial[i]);
    }
    out.value = total.value();
    return out;
}

void apply_level_shift(EmissionResult& emission, const LevelShift& shift) {
    emission.delta_omega = shift.value;
    emission.omega_tilde = emission.omega - shift.value;
    emission.shift = shift;
}

std::vector<Channel> continuum_channels(const WaveguideSpec& spec, const Atom& atom,
                                        const std::vector<ModeIndex>& modes,
                                        const std::vector<double>& nu_grid,
                                        const EmissionOptions& options) {
    std::vector<Channel> out;
    for (const ModeIndex& mode : modes) {
        Channel ch;
        ch.mode = mode;
        std::vector<double> density;
        for (double nu : nu_grid) {
            if (!(nu > 0.0)) continue;
            const ModeDispersion d = dispersion(spec, mode, nu);
            if (d.branch != Branch::Propagating) continue;
            ch.nu.push_back(nu);
            ch.g.push_back(
                coupling_at(spec, atom, mode, nu, d, options.box, options.normalization).g);
            density.push_back(continuum_weight(spec, mode, nu, d, options.box, options.dos));
        }
        if (ch.nu.size() < 2) continue;
        const std::size_t n = ch.nu.size();
        ch.weight.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double left = j > 0 ? ch.nu[j] - ch.nu[j - 1] : 0.0;
            const double right = j + 1 < n ? ch.nu[j + 1] - ch.nu[j] : 0.0;
            ch.weight[j] = density[j] * 0.5 * (left + right);
        }
        out.push_back(std::move(ch));
    }
    return out;
}

double AmplitudeTrajectory::photon_probability(std::size_t time_index) const {
    numerics::CompensatedSum<double> acc;
    for (std::size_t c = 0; c < channels.size(); ++c) {
        const auto& row = c_b[c][time_index];
        for (std::size_t j = 0; j < row.size(); ++j) acc.add(channels[c].weight[j] * std::norm(row[j]));
    }
    return acc.value();
}

AmplitudeTrajectory amplitudes_closed_form(const EmissionResult& emission,
                                           const std::vector<Channel>& channels,
                                           const std::vector<double>& times) {
    const double gamma = emission.gamma_eff;
    const double wt = emission.omega_tilde;
    const Complex i{0.0, 1.0};
    AmplitudeTrajectory out;
    out.times = times;
    out.channels = channels;
    out.c_a.reserve(times.size());
    for (double t : times) out.c_a.push_back(std::exp(-(0.5 * gamma - i * emission.delta_omega) * t));
    out.c_b.resize(channels.size());
    for (std::size_t c = 0; c < channels.size(); ++c) {
        const Channel& ch = channels[c];
        auto& series = out.c_b[c];
        series.assign(times.size(), std::vector<Complex>(ch.nu.size()));
        for (std::size_t k = 0; k < times.size(); ++k) {
            const double t = times[k];
            for (std::size_t j = 0; j < ch.nu.size(); ++j) {
                const double detuning = ch.nu[j] - wt;
                series[k][j] = std::conj(ch.g[j]) *
                               (1.0 - std::exp(i * detuning * t - 0.5 * gamma * t)) /
                               (detuning + 0.5 * i * gamma);
            }
        }
    }
    return out;
}

std::vector<OdeBin> make_bins(const WaveguideSpec& spec, const Atom& atom,
                              const std::vector<ModeIndex>& modes, double nu_lo, double nu_hi,
                              int count, const EmissionOptions& options, bool include_propagating,
                              bool include_localized) {
    if (count < 1 || !(nu_hi > nu_lo) || !(nu_lo > 0.0)) {
        throw DomainError("make_bins: need count >= 1 and 0 < nu_lo < nu_hi");
    }
    const double dnu = (nu_hi - nu_lo) / count;
    std::vector<OdeBin> out;
    for (const ModeIndex& mode : modes) {
        for (int j = 0; j < count; ++j) {
            const double nu = nu_lo + (j + 0.5) * dnu;
            const ModeDispersion d = dispersion(spec, mode, nu);
            if (at_cutoff(d)) continue;
            const bool localized = d.branch == Branch::Localized;
            if (localized ? !include_localized : !include_propagating) continue;
            const double density =
                localized ? 1.0 : continuum_weight(spec, mode, nu, d, options.box, options.dos);
            const Complex g =
                coupling_at(spec, atom, mode, nu, d, options.box, options.normalization).g;
            out.push_back({mode, localized, nu, std::sqrt(density * dnu) * g});
        }
    }
    return out;
}

OdeTrajectory amplitudes_ode_oracle(double omega, const std::vector<OdeBin>& bins,
                                    const std::vector<double>& times, const OdeOptions& options) {
    namespace odeint = boost::numeric::odeint;
    using State = std::vector<Complex>;
    if (times.empty()) throw DomainError("amplitudes_ode_oracle: no sample times");
    if (times.front() < 0.0 || !std::is_sorted(times.begin(), times.end())) {
        throw DomainError("amplitudes_ode_oracle: times must be sorted and non-negative");
    }
    const std::size_t n = bins.size();
    const Complex i{0.0, 1.0};
    std::vector<Complex> g(n);
    std::vector<double> detuning(n);
    for (std::size_t j = 0; j < n; ++j) {
        g[j] = bins[j].g;
        detuning[j] = omega - bins[j].nu;
    }

    // y = (c_a, d_1..d_n) with c_j = d_j exp(-i(omega - nu_j)t)
    auto system = [&](const State& y, State& dy, double) {
        Complex acc{};
        for (std::size_t j = 0; j < n; ++j) {
            acc += g[j] * y[j + 1];
            dy[j + 1] = i * detuning[j] * y[j + 1] - i * std::conj(g[j]) * y[0];
        }
        dy[0] = -i * acc;
    };

    // Channels group consecutive bins of the same mode and branch.
    OdeTrajectory out;
    AmplitudeTrajectory& traj = out.amplitudes;
    traj.times = times;
    std::vector<std::pair<std::size_t, std::size_t>> slot(n);
    for (std::size_t j = 0; j < n; ++j) {
        if (traj.channels.empty() || traj.channels.back().mode != bins[j].mode ||
            traj.channels.back().localized != bins[j].localized) {
            Channel ch;
            ch.mode = bins[j].mode;
            ch.localized = bins[j].localized;
            traj.channels.push_back(ch);
        }
        Channel& ch = traj.channels.back();
        slot[j] = {traj.channels.size() - 1, ch.nu.size()};
        ch.nu.push_back(bins[j].nu);
        ch.g.push_back(bins[j].g);
        ch.weight.push_back(1.0);
    }
    traj.c_b.resize(traj.channels.size());
    for (std::size_t c = 0; c < traj.channels.size(); ++c) {
        traj.c_b[c].assign(times.size(), std::vector<Complex>(traj.channels[c].nu.size()));
    }

    std::vector<double> grid = times;
    const bool prepend = grid.front() > 0.0;
    if (prepend) grid.insert(grid.begin(), 0.0);

    State y(n + 1, Complex{});
    y[0] = 1.0;
    std::size_t seen = 0;
    auto observer = [&](const State& s, double t) {
        const std::size_t index = seen++;
        if (prepend && index == 0) return;
        const std::size_t k = prepend ? index - 1 : index;
        traj.c_a.push_back(s[0]);
        double norm = std::norm(s[0]);
        for (std::size_t j = 0; j < n; ++j) {
            const Complex c = s[j + 1] * std::exp(-i * detuning[j] * t);
            traj.c_b[slot[j].first][k][slot[j].second] = c;
            norm += std::norm(c);
        }
        out.max_norm_error = std::max(out.max_norm_error, std::abs(norm - 1.0));
    };

    double max_rate = std::abs(omega);
    for (std::size_t j = 0; j < n; ++j) max_rate = std::max(max_rate, std::abs(detuning[j]));
    const double dt0 = 1e-3 / std::max(max_rate, 1e-300);
    try {
        auto stepper = odeint::make_dense_output(options.abs_tol, options.rel_tol,
                                                 odeint::runge_kutta_dopri5<State>());
        odeint::integrate_times(stepper, system, y, grid.begin(), grid.end(), dt0, observer,
                                odeint::max_step_checker(options.max_steps));
    } catch (const odeint::odeint_error& e) {
        throw ConvergenceError(std::string("amplitudes_ode_oracle: ") + e.what(), {});
    }
    return out;
}

std::string to_string(PhotonKind kind) {
    switch (kind) {
        case PhotonKind::AllModes:
            return "all-modes";
        case PhotonKind::PropagatingOnly:
            return "propagating-only";
        case PhotonKind::SingleDominant:
            return "single-dominant";
    }
    return "unknown";
}

std::vector<double> photon_grid(const EmissionResult& emission, std::size_t count,
                                double half_width) {
    const double w = half_width > 0.0 ? half_width : 40.0 * emission.gamma_eff;
    if (!(w > 0.0)) throw DomainError("photon_grid: Gamma_eff = 0 needs an explicit half-width");
    if (count < 2) throw DomainError("photon_grid: need at least two samples");
    return numerics::linspace(emission.omega_tilde - w, emission.omega_tilde + w, count);
}

void check_single_mode_dominance(const WaveguideSpec& spec, double omega_tilde, int max_mn) {
    const std::vector<ModeIndex> sorted = modes_by_cutoff(spec, std::max(max_mn, 2));
    const ModeIndex te10{Polarization::TE, 1, 0};
    const double lowest = cutoff_frequency(spec, te10);
    double second = 0.0;
    for (const ModeIndex& m : sorted) {
        if (m == te10) continue;
        second = cutoff_frequency(spec, m);
        break;
    }
    if (omega_tilde > lowest && omega_tilde < second) return;
    std::string competing;
    for (const ModeIndex& m : sorted) {
        if (m == te10) continue;
        const double nu_c = cutoff_frequency(spec, m);
        if (nu_c > std::max(omega_tilde, second)) break;
        if (!competing.empty()) competing += ", ";
        competing += to_string(m) + " at " + std::to_string(nu_c);
    }
    throw DomainError("single-mode dominance needs " + std::to_string(lowest) +
                      " < omega_tilde = " + std::to_string(omega_tilde) + " < " +
                      std::to_string(second) + "; competing cutoffs: " + competing);
}

PhotonState photon_state(const EmissionResult& emission, const WaveguideSpec& spec,
                         const Atom& atom, PhotonKind kind, const std::vector<double>& nu_grid,
                         std::optional<double> t, int max_mn, const EmissionOptions& options) {
    validate(spec, atom);
    if (nu_grid.empty()) throw DomainError("photon_state: empty frequency grid");
    if (t && *t < 0.0) throw DomainError("photon_state: t must be non-negative");
    std::vector<ModeIndex> modes;
    if (kind == PhotonKind::SingleDominant) {
        check_single_mode_dominance(spec, emission.omega_tilde, max_mn);
        modes.push_back({Polarization::TE, 1, 0});
    } else {
        modes = enumerate_modes(max_mn);
    }

    PhotonState out;
    out.kind = kind;
    out.t = t;
    out.nu_lo = *std::min_element(nu_grid.begin(), nu_grid.end());
    out.nu_hi = *std::max_element(nu_grid.begin(), nu_grid.end());
    const double gamma = emission.gamma_eff;
    const double wt = emission.omega_tilde;
    const Complex i{0.0, 1.0};
    auto spectral = [&](Complex g, double nu) {
        const double detuning = nu - wt;
        const Complex lorentz = std::conj(g) / (detuning + 0.5 * i * gamma);
        if (!t) return lorentz;
        return lorentz * (1.0 - std::exp(i * detuning * *t - 0.5 * gamma * *t));
    };

    for (const ModeIndex& mode : modes) {
        PhotonEntry minus{mode, Travel::MinusZ, false, {}, {}};
        PhotonEntry plus{mode, Travel::PlusZ, false, {}, {}};
        PhotonEntry local{mode, Travel::MinusZ, true, {}, {}};
        for (double nu : nu_grid) {
            if (!(nu > 0.0)) continue;
            const ModeDispersion d = dispersion(spec, mode, nu);
            if (at_cutoff(d)) continue;
            if (d.branch == Branch::Propagating) {
                for (PhotonEntry* e : {&minus, &plus}) {
                    const Complex g = coupling_at(spec, atom, mode, nu, d, options.box,
                                                  options.normalization, e->travel)
                                          .g;
                    e->nu.push_back(nu);
                    e->amplitude.push_back(spectral(g, nu));
                }
            } else if (kind == PhotonKind::AllModes) {
                const Complex g =
                    coupling_at(spec, atom, mode, nu, d, options.box, options.normalization).g;
                local.nu.push_back(nu);
                local.amplitude.push_back(spectral(g, nu));
            }
        }
        for (PhotonEntry* e : {&minus, &plus, &local}) {
            if (!e->nu.empty()) out.entries.push_back(std::move(*e));
        }
    }
    return out;
}

}  // namespace wgqed
