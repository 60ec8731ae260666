#pragma once

// Wigner-Weisskopf treatment of a two-level atom in the guide: decay rate,
// window-regularized level shift, closed-form amplitudes, the emitted photon
// state, and a direct ODE solution of the amplitude equations used as an
// oracle for the Markov step.

#include <optional>
#include <string>
#include <vector>

#include "wgqed/modes.hpp"
#include "wgqed/numerics.hpp"
#include "wgqed/quantize.hpp"

namespace wgqed {

struct EmissionOptions {
    QuantizationBox box{};
    DosModel dos = DosModel::PaperLiteral;
    Normalization normalization = Normalization::EnergyExact;
};

struct ModeContribution {
    ModeIndex mode;
    double value = 0.0;
};

struct ShiftWindow {
    double nu_min = 0.0;
    double nu_max = 0.0;
    double half_width = 1e-2;  // initial PV excision radius in nu
};

struct LevelShift {
    double value = 0.0;
    ShiftWindow window;
    std::vector<ModeContribution> contributions;
};

struct EmissionResult {
    double omega = 0.0;
    double gamma_eff = 0.0;
    double delta_omega = 0.0;
    double omega_tilde = 0.0;
    std::vector<ModeContribution> contributions;  // propagating modes only
    DosModel dos = DosModel::PaperLiteral;
    Normalization normalization = Normalization::EnergyExact;
    bool oscillatory = false;  // no propagating channel at omega
    int direction_multiplicity = 2;
    std::optional<LevelShift> shift;
};

/// Gamma_eff = pi sum_K 2 w_K(omega) |g_K(omega)|^2 over the modes with
/// nu_c < omega, m, n <= max_mn. Summed in ModeIndex order.
EmissionResult decay_rate(const WaveguideSpec& spec, const Atom& atom, int max_mn,
                          const EmissionOptions& options = {});

/// delta_omega = P int sum_K rho_K(nu) |g_K(nu)|^2 / (omega - nu) d(nu) over the
/// window, with rho = 2w on propagating branches and d(nu) on localized ones.
/// Both branches are integrated in u = sqrt(|nu - nu_c|), which removes the
/// square-root behaviour at every cutoff.
LevelShift level_shift(const WaveguideSpec& spec, const Atom& atom, int max_mn,
                       const ShiftWindow& window, const EmissionOptions& options = {},
                       const numerics::QuadratureSpec& quad = {16, 1e-11, 14});

/// Sets delta_omega, omega_tilde = omega - delta_omega and the shift record.
void apply_level_shift(EmissionResult& emission, const LevelShift& shift);

/// One continuum channel sampled on a frequency grid. `weight` is the
/// quadrature weight of each sample in sum |c_b|^2 (density times d(nu) for
/// continuum channels, 1 for ODE bins whose coupling already carries it).
struct Channel {
    ModeIndex mode;
    Travel travel = Travel::MinusZ;
    bool localized = false;
    std::vector<double> nu;
    std::vector<Complex> g;
    std::vector<double> weight;
};

/// Channels of the (K, nu) continuum on a uniform grid: one per propagating
/// mode with density w(nu) and trapezoid weights. Samples on the cutoff are
/// dropped.
std::vector<Channel> continuum_channels(const WaveguideSpec& spec, const Atom& atom,
                                        const std::vector<ModeIndex>& modes,
                                        const std::vector<double>& nu_grid,
                                        const EmissionOptions& options = {});

struct AmplitudeTrajectory {
    std::vector<double> times;
    std::vector<Complex> c_a;
    std::vector<Channel> channels;
    std::vector<std::vector<std::vector<Complex>>> c_b;  // [channel][time][nu]

    /// sum over channels and samples of weight |c_b|^2 at a time index.
    double photon_probability(std::size_t time_index) const;
};

/// c_a = exp(-(Gamma/2 - i delta_omega) t),
/// c_b = g* [1 - exp(i(nu - w~)t - Gamma t/2)] / [(nu - w~) + i Gamma/2].
AmplitudeTrajectory amplitudes_closed_form(const EmissionResult& emission,
                                           const std::vector<Channel>& channels,
                                           const std::vector<double>& times);

struct OdeBin {
    ModeIndex mode;
    bool localized = false;
    double nu = 0.0;
    Complex g{};  // sqrt(density d(nu)) g(nu)
};

/// Midpoint bins on [nu_lo, nu_hi] for each mode. Propagating samples use
/// density w(nu), localized samples density 1 (or are skipped when
/// include_localized is false); samples on a cutoff are dropped.
std::vector<OdeBin> make_bins(const WaveguideSpec& spec, const Atom& atom,
                              const std::vector<ModeIndex>& modes, double nu_lo, double nu_hi,
                              int count, const EmissionOptions& options = {},
                              bool include_propagating = true, bool include_localized = true);

struct OdeOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    std::size_t max_steps = 2'000'000;  // between two sample times
};

struct OdeTrajectory {
    AmplitudeTrajectory amplitudes;
    double max_norm_error = 0.0;  // max_t | |c_a|^2 + sum |c_b|^2 - 1 |
};

/// Integrates the amplitude equations
///   dc_a/dt = -i sum_j g_j exp(i(omega - nu_j)t) c_j,
///   dc_j/dt = -i g_j* exp(-i(omega - nu_j)t) c_a
/// with c_a(0) = 1, by an adaptive Dormand-Prince scheme in the frame that
/// removes the explicit time dependence. Throws ConvergenceError when the
/// stepper cannot meet the tolerance.
OdeTrajectory amplitudes_ode_oracle(double omega, const std::vector<OdeBin>& bins,
                                    const std::vector<double>& times,
                                    const OdeOptions& options = {});

enum class PhotonKind { AllModes, PropagatingOnly, SingleDominant };
std::string to_string(PhotonKind kind);

struct PhotonEntry {
    ModeIndex mode;
    Travel travel = Travel::MinusZ;
    bool localized = false;
    std::vector<double> nu;
    std::vector<Complex> amplitude;
};

struct PhotonState {
    PhotonKind kind = PhotonKind::AllModes;
    std::optional<double> t;  // empty for t -> infinity
    double nu_lo = 0.0;
    double nu_hi = 0.0;
    std::vector<PhotonEntry> entries;
};

/// Uniform grid over omega_tilde +- half_width (40 Gamma_eff when 0).
std::vector<double> photon_grid(const EmissionResult& emission, std::size_t count,
                                double half_width = 0.0);

/// Throws DomainError listing the competing cutoffs unless
/// nu_c(TE10) < omega_tilde < the second-lowest cutoff.
void check_single_mode_dominance(const WaveguideSpec& spec, double omega_tilde, int max_mn = 3);

/// Spectral amplitudes c(nu, K, direction). Propagating modes are kept with
/// both directions, localized ones once. SingleDominant keeps TE(1,0) and
/// requires nu_c(TE10) < omega_tilde < the second-lowest cutoff.
PhotonState photon_state(const EmissionResult& emission, const WaveguideSpec& spec,
                         const Atom& atom, PhotonKind kind, const std::vector<double>& nu_grid,
                         std::optional<double> t, int max_mn = 3,
                         const EmissionOptions& options = {});

}  // namespace wgqed
