#pragma once

// Photodetection far from the atom in the single-dominant-mode regime: the
// complex propagation constant at the pole w~ - i Gamma/2, the contour-integral
// field amplitude, the first-order correlation function on (x, z, t) grids and
// its two decay rates, plus the free-space comparator.

#include <string>
#include <vector>

#include "wgqed/modes.hpp"
#include "wgqed/quantize.hpp"

namespace wgqed {

/// PaperLiteral puts sqrt(eps mu) in front of the squared complex frequency;
/// ConsistentDispersion uses eps mu, as k = nu sqrt(eps mu) implies.
enum class RadicandModel { PaperLiteral, ConsistentDispersion };
std::string to_string(RadicandModel model);

struct DetectionPole {
    double omega_tilde = 0.0;
    double gamma_eff = 0.0;
    double A = 0.0;
    double B = 0.0;
    double beta_r = 0.0;
    double beta_i = 0.0;
    double gamma_spa = 0.0;  // 2 beta_i, <= 0
    RadicandModel model = RadicandModel::PaperLiteral;
};

/// beta_r + i beta_i = sqrt(s (w~ - i Gamma/2)^2 - (pi/a)^2) with beta_r > 0,
/// A = s (w~^2 - Gamma^2/4) - (pi/a)^2 and B = s w~ Gamma / 2, where s is
/// sqrt(eps mu) or eps mu. Evaluated without cancellation:
///   beta_r = sqrt((A + R)/2), beta_i = -B / beta_r          (A > 0)
///   beta_i = -sqrt((R - A)/2), beta_r = B / |beta_i|        (A <= 0)
/// with R = sqrt(A^2 + 4B^2). Throws PurelyEvanescentError when B = 0 and
/// A <= 0 (no beta_r > 0 exists).
DetectionPole pole(const WaveguideSpec& spec, double omega_tilde, double gamma_eff,
                   RadicandModel model = RadicandModel::PaperLiteral);

/// |(beta_r + i beta_i)^2 - (A - 2iB)| / |A - 2iB|.
double pole_identity_residual(const DetectionPole& p);

/// <0| E+(r, t) |gamma> for the TE(1,0) photon. Exactly zero outside the cone
/// t >= sqrt(eps mu)|z - z0| and on the walls x = 0, a.
Complex correlation_amplitude(const WaveguideSpec& spec, const Atom& atom, const DetectionPole& p,
                              const Vec3& point, double t);

/// Closed-form G1 with the real ratio |w~^2 / ((pi/a)^2 - w~^2)|.
double correlation_closed_form(const WaveguideSpec& spec, const Atom& atom,
                               const DetectionPole& p, const Vec3& point, double t);

struct CorrelationGrid {
    std::vector<double> xs;
    std::vector<double> zs;
    std::vector<double> ts;
    double y = 0.0;
    std::vector<double> values;       // row-major (x, z, t)
    std::vector<char> inside_cone;    // row-major (z, t)
    double max_closed_form_discrepancy = 0.0;
    DetectionPole pole;
    WaveguideSpec spec;
    Atom atom;
    DosModel dos = DosModel::PaperLiteral;

    std::size_t index(std::size_t ix, std::size_t iz, std::size_t it) const {
        return (ix * zs.size() + iz) * ts.size() + it;
    }
    double at(std::size_t ix, std::size_t iz, std::size_t it) const {
        return values[index(ix, iz, it)];
    }
};

/// G1 = |correlation_amplitude|^2 on the grid, evaluated in parallel. The
/// closed form is evaluated alongside and the largest relative difference
/// stored.
CorrelationGrid correlation_grid(const WaveguideSpec& spec, const Atom& atom,
                                 const DetectionPole& p, const std::vector<double>& xs,
                                 const std::vector<double>& zs, const std::vector<double>& ts,
                                 double y, DosModel dos = DosModel::PaperLiteral);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;
    std::size_t points = 0;
};

/// Least-squares line through (x_i, y_i). Needs at least two points.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct DecayFits {
    LineFit temporal;  // ln G1 vs t at the z sample nearest z0
    LineFit spatial;   // ln G1 vs |z - z0| at the last t sample
    double ratio = 0.0;  // spatial slope / temporal slope
};

/// Fits at the x sample nearest a/2, over samples inside the cone with G1 > 0.
DecayFits fit_decay_slopes(const CorrelationGrid& grid);

struct ScanSpec {
    double lo_factor = 1e-3;  // bracket in units of pi/a
    double hi_factor = 1e4;
    int points = 2000;        // log-spaced
};

struct RatioCrossing {
    double target = 0.0;
    double root = 0.0;  // omega_tilde
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    int crossings = 0;
    double ratio_min = 0.0;
    double ratio_max = 0.0;
};

/// |Gamma_spa| / Gamma_eff as a function of omega_tilde at fixed Gamma_eff.
double decay_ratio(const WaveguideSpec& spec, double omega_tilde, double gamma_eff,
                   RadicandModel model);

/// Scans omega_tilde and bisects the first sign change of
/// decay_ratio - target. Throws NoCrossingError carrying the scanned ratio
/// range when there is none.
RatioCrossing ratio_crossing(const WaveguideSpec& spec, double gamma_eff, double target,
                             RadicandModel model, const ScanSpec& scan = {});

struct OmegaD {
    double closed_form = 0.0;
    double root_found = 0.0;
    double discrepancy = 0.0;
    RatioCrossing crossing;
};

/// The published closed form for omega_d^2, independent of the radicand model.
double omega_d_closed_form(const WaveguideSpec& spec, double gamma_eff);

/// Crossing of |Gamma_spa| / Gamma_eff with sqrt(eps mu), next to the closed
/// form; discrepancy = |closed - root| / root.
OmegaD omega_d(const WaveguideSpec& spec, double gamma_eff, RadicandModel model,
               const ScanSpec& scan = {});

struct FreeSpaceParams {
    double eps0 = 1.0;
    double c = 1.0;
    double dipole = 1.0;  // |p_ab|
    double eta = kPi / 2.0;  // dipole angle from the z axis
    double omega = 1.0;
};

/// (1/4 pi eps0) 4 omega^3 p^2 / (3 hbar c^3)
double vacuum_decay_rate(const FreeSpaceParams& fsp);

/// |E0|^2 / dr^2 Theta(t - dr/c) exp(-Gamma (t - dr/c)) with
/// E0 = -omega^2 p sin(eta) / (4 pi eps0 c^2 dr). Throws DomainError at r = r0.
double free_space_g1(const FreeSpaceParams& fsp, const Vec3& r, const Vec3& r0, double t);

}  // namespace wgqed
